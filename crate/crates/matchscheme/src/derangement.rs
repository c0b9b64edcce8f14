//! The matching derangement graph Γ (two matchings adjacent iff they share
//! no edge) and unions of associates in general: degrees, spectra via the
//! character table, the equitable 2-part quotient, the ratio bound, and the
//! two spectral conjecture checks.
//!
//! Spectra are always derived from the character table — never from dense
//! diagonalization — which is what makes n = 6, 7 instant.

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};

use crate::combinatorics::{
    matching_derangement_count, matchings_count, Partition, PartitionIndex,
};
use crate::error::{Error, Result};
use crate::exec;
use crate::linalg::Rat;
use crate::matching::{enumerate, Matching};
use crate::report::VerificationReport;
use crate::scheme::sphere_size;
use crate::spectrum::CharacterTable;

/// A union of associates ⋃_{μ ∈ Λ} A_μ, e.g. Γ itself or a single A_(n).
#[derive(Clone, Debug)]
pub struct AssociateUnion {
    n: usize,
    members: Vec<Partition>,
}

impl AssociateUnion {
    /// Γ: all associates whose partition has no part 1.
    pub fn gamma(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::OutOfRange {
                what: "n for the derangement graph",
                value: n as i64,
                min: 2,
                max: i64::MAX,
            });
        }
        let parts = PartitionIndex::new(n)?;
        let members = parts
            .list()
            .iter()
            .filter(|lam| !lam.has_part_one())
            .cloned()
            .collect();
        Ok(AssociateUnion { n, members })
    }

    /// The single associate A_λ.
    pub fn single(lam: Partition) -> Self {
        AssociateUnion {
            n: lam.n(),
            members: vec![lam],
        }
    }

    /// The (n)-associate A_(n) (adjacency = union is a Hamilton cycle).
    pub fn n_associate(n: usize) -> Result<Self> {
        Ok(Self::single(Partition::new(vec![n])?))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[Partition] {
        &self.members
    }

    pub fn contains(&self, lam: &Partition) -> bool {
        self.members.contains(lam)
    }

    /// Degree Σ_{μ∈Λ} k_μ.
    pub fn degree(&self) -> Result<BigUint> {
        let mut sum = BigUint::zero();
        for lam in &self.members {
            sum += sphere_size(lam)?;
        }
        Ok(sum)
    }

    /// Adjacency test by cycle type membership.
    pub fn adjacent(&self, x: &Matching, y: &Matching) -> Result<bool> {
        Ok(self.members.contains(&x.cycle_type(y)?))
    }
}

/// One eigenvalue row of a spectrum: η_λ with its multiplicity and the
/// alternating-sign metadata.
#[derive(Clone, Debug)]
pub struct SpectrumEntry {
    pub partition: Partition,
    pub eigenvalue: BigInt,
    pub multiplicity: BigUint,
    pub depth: usize,
    /// Some(true/false) for nonzero eigenvalues; None when η = 0 (the
    /// conjecture does not define sign(0), so zeros are reported apart).
    pub sign_consistent: Option<bool>,
}

/// The spectrum of a union of associates, in canonical partition order.
#[derive(Clone, Debug)]
pub struct SpectrumRecord {
    pub n: usize,
    pub entries: Vec<SpectrumEntry>,
}

impl SpectrumRecord {
    pub fn eigenvalue_of(&self, lam: &Partition) -> Option<&BigInt> {
        self.entries
            .iter()
            .find(|e| &e.partition == lam)
            .map(|e| &e.eigenvalue)
    }

    /// Minimum eigenvalue and every λ attaining it.
    pub fn minimum(&self) -> (&BigInt, Vec<&Partition>) {
        let min = self
            .entries
            .iter()
            .map(|e| &e.eigenvalue)
            .min()
            .expect("non-empty spectrum");
        let argmin = self
            .entries
            .iter()
            .filter(|e| &e.eigenvalue == min)
            .map(|e| &e.partition)
            .collect();
        (min, argmin)
    }
}

/// η_λ = Σ_{μ∈Λ} p_μ(λ), with multiplicity m_λ.
pub fn spectrum(union: &AssociateUnion, table: &CharacterTable) -> Result<SpectrumRecord> {
    if union.n() != table.n() {
        return Err(Error::SizeMismatch(union.n(), table.n()));
    }
    let parts = table.parts();
    let member_idx: Vec<usize> = union
        .members()
        .iter()
        .map(|lam| parts.position(lam).expect("member is a partition of n"))
        .collect();
    let n = union.n();
    let entries = (0..parts.len())
        .map(|li| {
            let lam = parts.get(li).clone();
            let eigenvalue: BigInt = member_idx.iter().map(|&mu| table.at(mu, li)).sum();
            let depth = lam.depth();
            let sign_consistent = if eigenvalue.is_zero() {
                None
            } else {
                let expect_negative = depth % 2 == 1;
                Some(eigenvalue.is_negative() == expect_negative)
            };
            SpectrumEntry {
                partition: lam,
                eigenvalue,
                multiplicity: table.multiplicity(li).clone(),
                depth,
                sign_consistent,
            }
        })
        .collect();
    Ok(SpectrumRecord { n, entries })
}

/// The 2×2 quotient of the equitable partition (F_ij, rest) of Γ.
#[derive(Clone, Debug)]
pub struct EquitableQuotient {
    /// Row/col order: [F_ij, complement]. Entries are neighbor counts.
    pub matrix: [[BigUint; 2]; 2],
    pub eigenvalues: (BigInt, BigInt),
}

/// Verifies by direct neighbor counting (n ≤ 5) that (F_ij, M ∖ F_ij) is an
/// equitable partition of Γ with quotient [[0, !!n], [q, !!n − q]] where
/// q = !!n/(2(n−1)), and returns the quotient with eigenvalues {!!n, −q}.
pub fn equitable_quotient(n: usize, i: usize, j: usize) -> Result<EquitableQuotient> {
    if !(2..=5).contains(&n) {
        return Err(Error::OutOfRange {
            what: "n for equitable quotient verification",
            value: n as i64,
            min: 2,
            max: 5,
        });
    }
    for v in [i, j] {
        if v == 0 || v > 2 * n || i == j {
            return Err(Error::InvalidVertex {
                vertex: v,
                n,
                max: 2 * n,
            });
        }
    }
    let all: Vec<Matching> = enumerate(n)?.collect();
    let in_family: Vec<bool> = all.iter().map(|m| m.partner(i - 1) == j - 1).collect();
    let deg = matching_derangement_count(n);
    let q = &deg / BigUint::from(2 * (n - 1));

    // Count Γ-neighbors of every vertex inside F_ij; equitability demands
    // the count depends only on the side of the partition.
    let counts = exec::par_map(all.len(), |x| {
        let mut inside = 0u64;
        for (y, other) in all.iter().enumerate() {
            if x != y && !all[x].shares_edge_with(other) && in_family[y] {
                inside += 1;
            }
        }
        inside
    });
    for (x, &c) in counts.iter().enumerate() {
        let expect = if in_family[x] {
            BigUint::zero()
        } else {
            q.clone()
        };
        if BigUint::from(c) != expect {
            return Err(Error::SchemeViolation(format!(
                "vertex {} has {c} neighbors in F_{{{i},{j}}}, expected {expect}",
                all[x]
            )));
        }
    }
    let matrix = [
        [BigUint::zero(), deg.clone()],
        [q.clone(), &deg - &q],
    ];
    let eigenvalues = (
        BigInt::from(deg),
        -BigInt::from(q),
    );
    Ok(EquitableQuotient {
        matrix,
        eigenvalues,
    })
}

/// Least-eigenvalue conjecture: min_λ η_λ(Γ) = −!!n/(2(n−1)), attained at
/// λ = (n−1,1).
pub fn check_least_eigenvalue(table: &CharacterTable) -> Result<VerificationReport> {
    let n = table.n();
    let claim = format!("conj.least-eig.n{n}");
    let gamma = AssociateUnion::gamma(n)?;
    let spec = spectrum(&gamma, table)?;
    let (min, argmin) = spec.minimum();
    let conjectured = -BigInt::from(matching_derangement_count(n) / BigUint::from(2 * (n - 1)));
    let standard = Partition::new(vec![n - 1, 1])?;
    let attained = argmin.iter().any(|lam| **lam == standard);
    let report = if *min == conjectured && attained {
        VerificationReport::pass(claim)
            .with_expected(&conjectured)
            .with_actual(min)
            .with_detail(format!(
                "minimum attained at {}",
                argmin
                    .iter()
                    .map(|p| p.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            ))
    } else {
        VerificationReport::fail(
            claim,
            format!(
                "min η = {min} attained at {}",
                argmin
                    .iter()
                    .map(|p| p.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        )
        .with_expected(&conjectured)
        .with_actual(min)
    };
    Ok(report)
}

/// Alternating-sign conjecture: every nonzero η_λ of Γ has sign (−1)^{d(λ)}.
/// Zero eigenvalues are listed separately, neither passing nor failing.
pub fn check_alternating_sign(table: &CharacterTable) -> Result<VerificationReport> {
    let n = table.n();
    let claim = format!("conj.alt-sign.n{n}");
    let gamma = AssociateUnion::gamma(n)?;
    let spec = spectrum(&gamma, table)?;
    let mut zeros = Vec::new();
    let mut bad = Vec::new();
    for e in &spec.entries {
        match e.sign_consistent {
            None => zeros.push(e.partition.to_string()),
            Some(false) => bad.push(format!(
                "η_{} = {} but depth {} demands sign {}",
                e.partition,
                e.eigenvalue,
                e.depth,
                if e.depth % 2 == 1 { "-" } else { "+" }
            )),
            Some(true) => {}
        }
    }
    let mut report = if let Some(first) = bad.first() {
        let mut r = VerificationReport::fail(claim, first.clone());
        for w in bad.iter().skip(1) {
            r = r.with_witness(w.clone());
        }
        r
    } else {
        VerificationReport::pass(claim)
    };
    if !zeros.is_empty() {
        report = report.with_detail(format!(
            "zero eigenvalues (sign undefined) at: {}",
            zeros.join(", ")
        ));
    }
    Ok(report)
}

/// Reference spectra of Γ_n for n = 3..6, used by the verification suite.
///
/// Four corrections to commonly tabulated values, each confirmed by the
/// direct eigenvector test A_Γ·v = η·v on the literal adjacency matrix
/// (v the zonal column) and by the trace / closed-walk identities:
/// at n = 5, λ = (2,1,1,1) is −2 (circulates as −3); at n = 6,
/// λ = (2,2,1,1) is 7 (circulates as 70) and the values −5 / −29 belong to
/// (1^6) / (3,3) respectively (they circulate swapped — the two columns
/// share multiplicity 132, so only the eigenvector test separates them).
pub fn reference_gamma_spectrum(n: usize) -> Option<Vec<(Partition, BigInt)>> {
    let raw: &[(&[usize], i64)] = match n {
        3 => &[(&[1, 1, 1], 2), (&[2, 1], -2), (&[3], 8)],
        4 => &[
            (&[1, 1, 1, 1], -3),
            (&[2, 1, 1], 2),
            (&[2, 2], 5),
            (&[3, 1], -10),
            (&[4], 60),
        ],
        5 => &[
            (&[1, 1, 1, 1, 1], 4),
            (&[2, 1, 1, 1], -2), // corrected; see doc comment
            (&[2, 2, 1], -6),
            (&[3, 1, 1], 12),
            (&[3, 2], 12),
            (&[4, 1], -68),
            (&[5], 544),
        ],
        6 => &[
            (&[1, 1, 1, 1, 1, 1], -5), // corrected; see doc comment
            (&[2, 1, 1, 1, 1], 2),
            (&[2, 2, 1, 1], 7), // corrected; see doc comment
            (&[2, 2, 2], 10),
            (&[3, 1, 1, 1], -14),
            (&[3, 2, 1], -14),
            (&[3, 3], -29), // corrected; see doc comment
            (&[4, 1, 1], 76),
            (&[4, 2], 82),
            (&[5, 1], -604),
            (&[6], 6040),
        ],
        _ => return None,
    };
    Some(
        raw.iter()
            .map(|(parts, eig)| {
                (
                    Partition::new(parts.to_vec()).expect("valid reference shape"),
                    BigInt::from(*eig),
                )
            })
            .collect(),
    )
}

/// Compares the computed Γ_n spectrum against the reference rows.
pub fn check_reference_spectrum(table: &CharacterTable) -> Result<VerificationReport> {
    let n = table.n();
    let claim = format!("table1.n{n}");
    let Some(reference) = reference_gamma_spectrum(n) else {
        return Ok(VerificationReport::inconclusive(
            claim,
            "no reference row for this n",
        ));
    };
    let gamma = AssociateUnion::gamma(n)?;
    let spec = spectrum(&gamma, table)?;
    let mut bad = Vec::new();
    for (lam, eig) in &reference {
        match spec.eigenvalue_of(lam) {
            Some(got) if got == eig => {}
            Some(got) => bad.push(format!("λ = {lam}: computed {got}, reference {eig}")),
            None => bad.push(format!("λ = {lam} missing from spectrum")),
        }
    }
    let mut report = if bad.is_empty() {
        VerificationReport::pass(claim)
    } else {
        let mut r = VerificationReport::fail(claim, bad[0].clone());
        for w in bad.into_iter().skip(1) {
            r = r.with_witness(w);
        }
        r
    };
    if n == 5 {
        report = report.with_detail(
            "reference entry for [2,1,1,1] is the identity-consistent −2, \
             correcting a circulated misprint of −3",
        );
    } else if n == 6 {
        report = report.with_detail(
            "reference entries corrected against the eigenvector test: \
             [2,2,1,1] → 7 (not 70), [1^6] → −5 and [3,3] → −29 (circulated \
             swapped)",
        );
    }
    Ok(report)
}

/// The ratio bound α ≤ N!!·(−η)/(k − η) for a union, as an exact rational
/// plus a flag for integrality.
#[derive(Clone, Debug)]
pub struct RatioBound {
    pub bound: Rat,
    pub integral: bool,
}

pub fn ratio_bound(union: &AssociateUnion, table: &CharacterTable) -> Result<RatioBound> {
    let spec = spectrum(union, table)?;
    let (min, _) = spec.minimum();
    let count = BigInt::from(matchings_count(union.n()));
    let degree = BigInt::from(union.degree()?);
    let bound = Rat::new(&count * -min, &degree - min);
    let integral = bound.is_integer();
    Ok(RatioBound { bound, integral })
}
