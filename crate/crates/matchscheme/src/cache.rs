//! Per-n cache of the scheme tables as a versioned JSON document, plus the
//! bundle type the rest of the crate computes against.
//!
//! Integers are serialized as decimal strings and rationals as "num/den"
//! so consumers never overflow. A loaded entry must pass the full
//! self-check battery (sphere-size formula, tensor symmetry and row sums,
//! table structure, orthogonality residue, zonal closed-form row); a
//! failing entry is discarded and recomputed, never trusted.

use std::path::{Path, PathBuf};

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Rat;
use crate::scheme::IntersectionNumbers;
use crate::spectrum::{CharacterTable, ZonalTable};

pub const CACHE_FORMAT_VERSION: u32 = 1;
/// Tag of the matching enumeration order ranks refer to.
pub const ENUMERATION_ORDER: &str = "lex-smallest-unmatched-first/v1";

/// The per-n bundle everything downstream consumes.
pub struct SchemeTables {
    pub ints: IntersectionNumbers,
    pub table: CharacterTable,
}

impl SchemeTables {
    pub fn compute(n: usize) -> Result<Self> {
        let ints = IntersectionNumbers::compute(n)?;
        let table = CharacterTable::compute_from(&ints)?;
        Ok(SchemeTables { ints, table })
    }

    pub fn n(&self) -> usize {
        self.table.n()
    }

    pub fn zonal(&self) -> Result<ZonalTable> {
        self.table.zonal_table()
    }
}

#[derive(Serialize, Deserialize)]
pub struct CacheEntry {
    pub format_version: u32,
    pub n: usize,
    pub enumeration_order: String,
    pub build_id: String,
    pub partitions: Vec<Vec<usize>>,
    pub sphere_sizes: Vec<String>,
    /// p[i][j][k] as decimal strings, canonical order on all three axes.
    pub p_tensor: Vec<Vec<Vec<String>>>,
    /// p_μ(λ): rows μ, columns λ.
    pub character_table: Vec<Vec<String>>,
    pub multiplicities: Vec<String>,
    /// ω_λ^μ as "num/den": rows μ, columns λ.
    pub zonal: Vec<Vec<String>>,
    /// Idempotent coefficients c_λ(μ) as "num/den": rows λ, columns μ.
    pub idempotent_coeffs: Vec<Vec<String>>,
}

fn rat_str(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn parse_rat(s: &str) -> Result<Rat> {
    let (num, den) = s
        .split_once('/')
        .ok_or_else(|| Error::Cache(format!("bad rational {s:?}")))?;
    let num: BigInt = num
        .parse()
        .map_err(|e| Error::Cache(format!("bad numerator {num:?}: {e}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|e| Error::Cache(format!("bad denominator {den:?}: {e}")))?;
    Ok(Rat::new(num, den))
}

impl CacheEntry {
    pub fn from_tables(tables: &SchemeTables) -> Result<Self> {
        let n = tables.n();
        let parts = tables.table.parts();
        let np = parts.len();
        let ints = &tables.ints;
        let table = &tables.table;
        let zonal = table.zonal_table()?;
        let coeffs = table.idempotent_coeffs();
        Ok(CacheEntry {
            format_version: CACHE_FORMAT_VERSION,
            n,
            enumeration_order: ENUMERATION_ORDER.to_string(),
            build_id: env!("CARGO_PKG_VERSION").to_string(),
            partitions: parts.list().iter().map(|p| p.parts().to_vec()).collect(),
            sphere_sizes: ints.degrees().iter().map(|d| d.to_string()).collect(),
            p_tensor: (0..np)
                .map(|i| {
                    (0..np)
                        .map(|j| (0..np).map(|k| ints.get(i, j, k).to_string()).collect())
                        .collect()
                })
                .collect(),
            character_table: (0..np)
                .map(|mu| (0..np).map(|lam| table.at(mu, lam).to_string()).collect())
                .collect(),
            multiplicities: (0..np).map(|lam| table.multiplicity(lam).to_string()).collect(),
            zonal: (0..np)
                .map(|mu| (0..np).map(|lam| rat_str(zonal.get(mu, lam))).collect())
                .collect(),
            idempotent_coeffs: (0..np)
                .map(|lam| (0..np).map(|mu| rat_str(&coeffs[(lam, mu)])).collect())
                .collect(),
        })
    }

    /// Parses and self-checks a cache entry back into live tables.
    pub fn into_tables(self) -> Result<SchemeTables> {
        if self.format_version != CACHE_FORMAT_VERSION {
            return Err(Error::Cache(format!(
                "format version {} unsupported",
                self.format_version
            )));
        }
        if self.enumeration_order != ENUMERATION_ORDER {
            return Err(Error::Cache(format!(
                "enumeration order {:?} does not match {ENUMERATION_ORDER:?}",
                self.enumeration_order
            )));
        }
        let n = self.n;
        let parts = crate::combinatorics::PartitionIndex::new(n)?;
        let np = parts.len();
        let recorded: Vec<Vec<usize>> =
            parts.list().iter().map(|p| p.parts().to_vec()).collect();
        if self.partitions != recorded {
            return Err(Error::Cache("partition order mismatch".into()));
        }
        let mut p = vec![0u64; np * np * np];
        for i in 0..np {
            for j in 0..np {
                for k in 0..np {
                    p[(i * np + j) * np + k] = self.p_tensor[i][j][k]
                        .parse()
                        .map_err(|e| Error::Cache(format!("bad tensor entry: {e}")))?;
                }
            }
        }
        let ints = IntersectionNumbers::from_raw(n, p)?;
        for (i, s) in self.sphere_sizes.iter().enumerate() {
            if s != &ints.degrees()[i].to_string() {
                return Err(Error::Cache(format!("sphere size {i} mismatch")));
            }
        }
        let mut pmat = Vec::with_capacity(np * np);
        for row in &self.character_table {
            for v in row {
                pmat.push(
                    v.parse::<BigInt>()
                        .map_err(|e| Error::Cache(format!("bad table entry: {e}")))?,
                );
            }
        }
        let mults = self
            .multiplicities
            .iter()
            .map(|v| {
                v.parse::<BigUint>()
                    .map_err(|e| Error::Cache(format!("bad multiplicity: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let table = CharacterTable::from_raw(n, pmat, mults)?;
        // Derived sections must agree with recomputation.
        let zonal = table.zonal_table()?;
        let coeffs = table.idempotent_coeffs();
        for mu in 0..np {
            for lam in 0..np {
                if parse_rat(&self.zonal[mu][lam])? != *zonal.get(mu, lam) {
                    return Err(Error::Cache(format!("zonal entry ({mu},{lam}) mismatch")));
                }
                if parse_rat(&self.idempotent_coeffs[lam][mu])? != coeffs[(lam, mu)] {
                    return Err(Error::Cache(format!(
                        "idempotent coefficient ({lam},{mu}) mismatch"
                    )));
                }
            }
        }
        Ok(SchemeTables { ints, table })
    }
}

pub fn cache_path(dir: &Path, n: usize) -> PathBuf {
    dir.join(format!("scheme-n{n}.json"))
}

/// Advisory per-directory lock; the file is removed on drop.
pub struct CacheLock {
    path: PathBuf,
}

impl CacheLock {
    pub fn acquire(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join(".lock");
        match std::fs::OpenOptions::new()
            .write(true)
            .create_new(true)
            .open(&path)
        {
            Ok(mut f) => {
                use std::io::Write;
                let _ = write!(f, "{}", std::process::id());
                Ok(CacheLock { path })
            }
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => Err(Error::Cache(format!(
                "cache dir {} is locked by another process (remove {} if stale)",
                dir.display(),
                path.display()
            ))),
            Err(e) => Err(e.into()),
        }
    }
}

impl Drop for CacheLock {
    fn drop(&mut self) {
        let _ = std::fs::remove_file(&self.path);
    }
}

/// Writes the entry atomically (temp file + rename).
pub fn store(dir: &Path, tables: &SchemeTables) -> Result<PathBuf> {
    let _lock = CacheLock::acquire(dir)?;
    let entry = CacheEntry::from_tables(tables)?;
    let path = cache_path(dir, tables.n());
    let tmp = dir.join(format!(".scheme-n{}.json.tmp-{}", tables.n(), std::process::id()));
    std::fs::write(&tmp, serde_json::to_vec_pretty(&entry)?)?;
    std::fs::rename(&tmp, &path)?;
    Ok(path)
}

/// Loads and validates a cached entry; `Ok(None)` when absent or invalid
/// (an invalid entry is deleted so the caller recomputes).
pub fn load(dir: &Path, n: usize) -> Result<Option<SchemeTables>> {
    let path = cache_path(dir, n);
    let bytes = match std::fs::read(&path) {
        Ok(b) => b,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let parsed: std::result::Result<CacheEntry, _> = serde_json::from_slice(&bytes);
    match parsed.map_err(Error::from).and_then(CacheEntry::into_tables) {
        Ok(tables) if tables.n() == n => Ok(Some(tables)),
        _ => {
            let _ = std::fs::remove_file(&path);
            Ok(None)
        }
    }
}

/// Cache-aware accessor: loads when possible, else computes (and stores
/// when a directory is given).
pub fn load_or_compute(dir: Option<&Path>, n: usize) -> Result<SchemeTables> {
    if let Some(dir) = dir {
        if let Some(tables) = load(dir, n)? {
            return Ok(tables);
        }
        let tables = SchemeTables::compute(n)?;
        store(dir, &tables)?;
        return Ok(tables);
    }
    SchemeTables::compute(n)
}

/// Default cache directory: $MATCHSCHEME_CACHE_DIR, else the platform data
/// dir, else a subdirectory of the temp dir.
pub fn default_cache_dir() -> PathBuf {
    if let Ok(dir) = std::env::var("MATCHSCHEME_CACHE_DIR") {
        return PathBuf::from(dir);
    }
    if let Ok(xdg) = std::env::var("XDG_DATA_HOME") {
        return PathBuf::from(xdg).join("matchscheme");
    }
    if let Ok(home) = std::env::var("HOME") {
        return PathBuf::from(home)
            .join(".local")
            .join("share")
            .join("matchscheme");
    }
    std::env::temp_dir().join("matchscheme-cache")
}
