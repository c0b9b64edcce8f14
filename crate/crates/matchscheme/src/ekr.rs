//! Intersecting-family machinery: trivially intersecting families, Lucas
//! cliques, the clique-coclique and module-method verifications, exact
//! maximum-independent-set search with extremal-family enumeration, the
//! (2n−1)-coloring, and tiny-scale t-intersecting searches.

use std::str::FromStr;
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::{double_factorial, matchings_count, Partition};
use crate::error::{Error, Result};
use crate::exec;
use crate::linalg::Rat;
use crate::matching::{enumerate, Matching};
use crate::report::VerificationReport;
use crate::scheme::DistanceMatrix;
use crate::spectrum::{zonal_n_sphere, CharacterTable, DenseIdempotents};

pub const DEFAULT_SEED: u64 = 1;

// ---------------------------------------------------------------------
// Bitsets over matching ranks
// ---------------------------------------------------------------------

/// Fixed-length bitset; the backing for families of matchings.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BitSet {
    len: usize,
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first_set(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn intersect_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn subtract(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * 64 + b)
                }
            })
        })
    }
}

/// A 0/1 vector over all (2n−1)!! matchings, indexed by rank.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FamilyVector {
    n: usize,
    bits: BitSet,
}

impl FamilyVector {
    pub fn empty(n: usize) -> Result<Self> {
        let count = Matching::enumerable_count(n)? as usize;
        Ok(FamilyVector {
            n,
            bits: BitSet::new(count),
        })
    }

    pub fn from_ranks(n: usize, ranks: &[u64]) -> Result<Self> {
        let mut fam = Self::empty(n)?;
        for &r in ranks {
            fam.bits.insert(r as usize);
        }
        Ok(fam)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cardinality(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn contains(&self, rank: u64) -> bool {
        self.bits.contains(rank as usize)
    }

    pub fn ranks(&self) -> Vec<u64> {
        self.bits.iter().map(|i| i as u64).collect()
    }

    pub fn members(&self) -> Result<Vec<Matching>> {
        self.bits
            .iter()
            .map(|r| Matching::unrank(self.n, r as u64))
            .collect()
    }

    pub fn bits(&self) -> &BitSet {
        &self.bits
    }
}

/// F_ij: all matchings containing the 1-based edge {i, j}.
pub fn trivial_family(n: usize, i: usize, j: usize) -> Result<FamilyVector> {
    if i == j || i == 0 || j == 0 || i > 2 * n || j > 2 * n {
        return Err(Error::InvalidVertex {
            vertex: if i == j || i == 0 || i > 2 * n { i } else { j },
            n,
            max: 2 * n,
        });
    }
    let (a, b) = (i - 1, j - 1);
    let ranks = exec::fold_matchings(
        n,
        Vec::new,
        |acc, r, m| {
            if m.partner(a) == b {
                acc.push(r);
            }
        },
        |mut x, y| {
            x.extend(y);
            x
        },
    )?;
    FamilyVector::from_ranks(n, &ranks)
}

// ---------------------------------------------------------------------
// Lucas cliques
// ---------------------------------------------------------------------

/// A 1-factorization of K_2n whose 2n−1 factors are pairwise at cycle
/// type (n) (every union of two factors is a Hamilton cycle).
#[derive(Clone, Debug)]
pub struct LucasClique {
    pub n: usize,
    pub factors: Vec<Matching>,
}

fn is_prime(m: usize) -> bool {
    if m < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Builds a Lucas clique containing the identity matching.
///
/// When 2n−1 is prime the starter rotation on Z_{2n−1} ∪ {∞} works and the
/// construction is deterministic. Otherwise a seeded randomized backtracking
/// search over 1-factorizations runs with restarts. Both paths end with a
/// mandatory verification of the pairwise-(n) property and edge-disjointness.
pub fn lucas_clique(n: usize, seed: u64) -> Result<LucasClique> {
    if !(2..=12).contains(&n) {
        return Err(Error::OutOfRange {
            what: "n for lucas_clique",
            value: n as i64,
            min: 2,
            max: 12,
        });
    }
    let factors = if is_prime(2 * n - 1) {
        starter_rotation(n)?
    } else {
        search_perfect_factorization(n, seed)?
    };
    let clique = LucasClique { n, factors };
    verify_lucas(&clique)?;
    Ok(clique)
}

/// The rotation construction: factor F_i pairs ∞ with residue i and
/// (i+j, i−j) mod 2n−1 for j = 1..n−1. Relabeled so the first factor is
/// the identity matching.
fn starter_rotation(n: usize) -> Result<Vec<Matching>> {
    let m = 2 * n - 1;
    let mut factors = Vec::with_capacity(m);
    for i in 0..m {
        // Residue r is vertex r+1; ∞ is vertex 2n.
        let mut pairs = vec![(2 * n, i + 1)];
        for j in 1..n {
            let a = (i + j) % m;
            let b = (i + m - j % m) % m;
            pairs.push((a + 1, b + 1));
        }
        factors.push(Matching::from_pairs(n, &pairs)?);
    }
    relabel_first_to_identity(n, factors)
}

/// Applies the vertex relabeling that maps factors[0] onto the identity
/// matching to the whole factorization, and puts the identity first.
fn relabel_first_to_identity(n: usize, factors: Vec<Matching>) -> Result<Vec<Matching>> {
    let first = &factors[0];
    let mut perm = vec![0usize; 2 * n];
    for (k, (a, b)) in first.pairs().into_iter().enumerate() {
        perm[a - 1] = 2 * k;
        perm[b - 1] = 2 * k + 1;
    }
    factors.iter().map(|f| f.relabel(&perm)).collect()
}

/// Randomized backtracking search for a 1-factorization with pairwise
/// Hamiltonian unions, fixing the identity matching as the first factor.
fn search_perfect_factorization(n: usize, seed: u64) -> Result<Vec<Matching>> {
    const RESTARTS: u32 = 2000;
    const NODES_PER_RESTART: u64 = 2_000_000;
    for restart in 0..RESTARTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(restart as u64));
        if let Some(factors) = try_build_factorization(n, &mut rng, NODES_PER_RESTART) {
            return Ok(factors);
        }
    }
    Err(Error::SearchFailed {
        restarts: RESTARTS,
        seed,
    })
}

struct FactorSearch {
    n: usize,
    used_edge: Vec<bool>,
    factors: Vec<Matching>,
    nodes: u64,
    budget: u64,
}

impl FactorSearch {
    fn edge_index(&self, a: usize, b: usize) -> usize {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        lo * 2 * self.n + hi
    }

    /// True if adding pair (a, b) to the partial factor closes a cycle
    /// shorter than 2n in the union with some finished factor. Walking the
    /// union path from a: if it terminates at b without visiting every
    /// vertex, (a, b) would close a short cycle.
    fn closes_short_cycle(&self, partial: &[Option<usize>], a: usize, b: usize) -> bool {
        let filled = partial.iter().filter(|p| p.is_some()).count() + 2;
        if filled == 2 * self.n {
            return false; // final pair may close the full Hamilton cycle
        }
        for f in &self.factors {
            // Path: a -f-> x -partial-> y -f-> ... until no partial edge.
            let mut v = a;
            let mut steps = 0usize;
            loop {
                let x = f.partner(v);
                steps += 1;
                if x == b {
                    break;
                }
                match partial[x] {
                    Some(y) => {
                        steps += 1;
                        v = y;
                    }
                    None => {
                        steps = 0;
                        break;
                    }
                }
                if steps > 2 * self.n {
                    unreachable!("walk exceeded vertex count");
                }
            }
            if steps > 0 && steps + 1 < 2 * self.n {
                return true;
            }
        }
        false
    }

    fn extend_factor(&mut self, partial: &mut Vec<Option<usize>>, rng: &mut ChaCha8Rng) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            return false;
        }
        let Some(v) = (0..2 * self.n).find(|&v| partial[v].is_none()) else {
            // Factor complete.
            let pairs: Vec<(usize, usize)> = (0..2 * self.n)
                .filter(|&x| partial[x].map(|p| p > x).unwrap_or(false))
                .map(|x| (x + 1, partial[x].unwrap() + 1))
                .collect();
            let factor = Matching::from_pairs(self.n, &pairs).expect("valid factor");
            self.factors.push(factor);
            if self.factors.len() == 2 * self.n - 1 {
                return true;
            }
            let mut next = vec![None; 2 * self.n];
            if self.extend_factor(&mut next, rng) {
                return true;
            }
            self.factors.pop();
            return false;
        };
        let mut candidates: Vec<usize> = (v + 1..2 * self.n)
            .filter(|&w| partial[w].is_none() && !self.used_edge[self.edge_index(v, w)])
            .collect();
        candidates.shuffle(rng);
        for w in candidates {
            if self.closes_short_cycle(partial, v, w) {
                continue;
            }
            partial[v] = Some(w);
            partial[w] = Some(v);
            let ei = self.edge_index(v, w);
            self.used_edge[ei] = true;
            if self.extend_factor(partial, rng) {
                return true;
            }
            self.used_edge[ei] = false;
            partial[v] = None;
            partial[w] = None;
            if self.nodes > self.budget {
                return false;
            }
        }
        false
    }
}

fn try_build_factorization(n: usize, rng: &mut ChaCha8Rng, budget: u64) -> Option<Vec<Matching>> {
    let identity = Matching::identity(n).ok()?;
    let mut search = FactorSearch {
        n,
        used_edge: vec![false; 4 * n * n],
        factors: vec![identity.clone()],
        nodes: 0,
        budget,
    };
    for v in 0..2 * n {
        let ei = search.edge_index(v, identity.partner(v));
        search.used_edge[ei] = true;
    }
    let mut partial = vec![None; 2 * n];
    if search.extend_factor(&mut partial, rng) {
        Some(search.factors)
    } else {
        None
    }
}

/// Mandatory post-construction verification of a Lucas clique.
fn verify_lucas(clique: &LucasClique) -> Result<()> {
    let n = clique.n;
    let hamilton = Partition::new(vec![n])?;
    if clique.factors.len() != 2 * n - 1 {
        return Err(Error::Consistency(format!(
            "{} factors, expected {}",
            clique.factors.len(),
            2 * n - 1
        )));
    }
    let mut seen = vec![false; 4 * n * n];
    for f in &clique.factors {
        for (a, b) in f.pairs() {
            let idx = (a - 1) * 2 * n + (b - 1);
            if seen[idx] {
                return Err(Error::Consistency(format!(
                    "edge ({a},{b}) used by two factors"
                )));
            }
            seen[idx] = true;
        }
    }
    for (i, x) in clique.factors.iter().enumerate() {
        for y in clique.factors.iter().skip(i + 1) {
            let d = x.cycle_type(y)?;
            if d != hamilton {
                return Err(Error::Consistency(format!(
                    "factors {x} and {y} have cycle type {d}, expected ({n})"
                )));
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------
// Clique-coclique and the module method
// ---------------------------------------------------------------------

/// Clique-coclique equality and the idempotent-orthogonality clause:
/// (2n−1)·(2(n−1)−1)!! = (2n−1)!!, and with C a Lucas clique and
/// S = F_{1,2}, x^T E_λ x · y^T E_λ y = 0 for every λ ≠ (n) (dense part
/// gated to n ≤ 5).
pub fn clique_coclique_check(n: usize, table: Option<&CharacterTable>) -> Result<VerificationReport> {
    let claim = format!("ekr.clique-coclique.n{n}");
    let product = BigUint::from(2 * n - 1) * double_factorial(2 * n as i64 - 3)?;
    if product != matchings_count(n) {
        return Ok(VerificationReport::fail(
            claim,
            format!("(2n-1)(2n-3)!! = {product} != (2n-1)!!"),
        ));
    }
    if !(2..=5).contains(&n) {
        return Ok(VerificationReport::pass(claim)
            .with_detail("size equality only; idempotent clause gated to 2 <= n <= 5"));
    }
    let table = match table {
        Some(t) => t,
        None => return Ok(VerificationReport::pass(claim).with_detail("size equality only")),
    };
    let dense = DenseIdempotents::compute(table)?;
    let clique = lucas_clique(n, DEFAULT_SEED)?;
    let clique_ranks: Vec<u64> = clique.factors.iter().map(|f| f.rank()).collect();
    let family_ranks = trivial_family(n, 1, 2)?.ranks();
    let col_n = table
        .parts()
        .position(&Partition::new(vec![n])?)
        .expect("(n) present");
    for lam in 0..table.parts().len() {
        if lam == col_n {
            continue;
        }
        let xq = dense.quadratic_form(lam, &clique_ranks);
        let yq = dense.quadratic_form(lam, &family_ranks);
        if !(&xq * &yq).is_zero() {
            return Ok(VerificationReport::fail(
                claim,
                format!(
                    "λ = {}: x^T E x = {xq}, y^T E y = {yq}",
                    table.parts().get(lam)
                ),
            ));
        }
    }
    Ok(VerificationReport::pass(claim)
        .with_detail("size equality and idempotent orthogonality (dense)"))
}

/// The module-method verification:
/// (a) E_λ v_{F_ij} = 0 for all λ ∉ {(n), (n−1,1)} and all trivial families
///     (entrywise for n ≤ 5; quadratic-form for all families plus entrywise
///     for F_{1,2} at n = 6 — E_λ is an orthogonal projection, so
///     v^T E_λ v = 0 is equivalent to E_λ v = 0);
/// (b) 1 + 2(n−1)·ω_λ^{(n)} ≠ 0 for those λ (closed form);
/// (c) 1 + 2(n−1)·ω_{(n−1,1)}^{(n)} = 0 identically.
pub fn module_method_check(n: usize, table: &CharacterTable) -> Result<VerificationReport> {
    let claim = format!("ekr.module-method.n{n}");
    if !(2..=6).contains(&n) {
        return Err(Error::OutOfRange {
            what: "n for module_method_check",
            value: n as i64,
            min: 2,
            max: 6,
        });
    }
    let parts = table.parts();
    let lam_n = Partition::new(vec![n])?;
    let lam_std = Partition::new(vec![n - 1, 1])?;
    let exempt: Vec<usize> = [&lam_n, &lam_std]
        .iter()
        .map(|l| parts.position(l).expect("partition of n"))
        .collect();

    // (c) then (b), by the closed form.
    let two_n_minus_2 = Rat::from_integer(BigInt::from(2 * (n - 1)));
    let c_val = Rat::one() + &two_n_minus_2 * zonal_n_sphere(&lam_std);
    if !c_val.is_zero() {
        return Ok(VerificationReport::fail(
            claim,
            format!("1 + 2(n-1)ω_(n-1,1) = {c_val}"),
        ));
    }
    for (li, lam) in parts.list().iter().enumerate() {
        if exempt.contains(&li) {
            continue;
        }
        let val = Rat::one() + &two_n_minus_2 * zonal_n_sphere(lam);
        if val.is_zero() {
            return Ok(VerificationReport::fail(
                claim,
                format!("1 + 2(n-1)ω_λ vanishes for λ = {lam}"),
            ));
        }
    }

    // (a): every trivial family is annihilated by every non-exempt E_λ.
    let families: Vec<(usize, usize)> = (1..=2 * n)
        .flat_map(|i| (i + 1..=2 * n).map(move |j| (i, j)))
        .collect();
    if n <= 5 {
        let dense = DenseIdempotents::compute(table)?;
        let size = dense.size();
        for &(i, j) in &families {
            let fam = trivial_family(n, i, j)?;
            let ranks = fam.ranks();
            for li in 0..parts.len() {
                if exempt.contains(&li) {
                    continue;
                }
                for x in 0..size {
                    let mut acc: i128 = 0;
                    for &y in &ranks {
                        acc += dense.entry(li, x, y as usize);
                    }
                    if acc != 0 {
                        return Ok(VerificationReport::fail(
                            claim,
                            format!(
                                "(E_{} v_F{{{i},{j}}})_{x} != 0",
                                parts.get(li)
                            ),
                        ));
                    }
                }
            }
        }
    } else {
        let zonal = table.zonal_table()?;
        // Quadratic form for every family, in parallel over families.
        let family_witnesses = exec::par_map(families.len(), |fi| -> Result<Option<String>> {
            let (i, j) = families[fi];
            let members = trivial_family(n, i, j)?.members()?;
            let mut pair_profile = vec![0u64; parts.len()];
            for a in &members {
                for b in &members {
                    pair_profile[parts.position(&a.cycle_type(b)?).unwrap()] += 1;
                }
            }
            for li in 0..parts.len() {
                if exempt.contains(&li) {
                    continue;
                }
                let mut sum = Rat::zero();
                for (mu, &c) in pair_profile.iter().enumerate() {
                    if c != 0 {
                        sum += zonal.get(mu, li) * Rat::from_integer(BigInt::from(c));
                    }
                }
                if !sum.is_zero() {
                    return Ok(Some(format!(
                        "v^T E_{} v != 0 for F{{{i},{j}}}",
                        parts.get(li)
                    )));
                }
            }
            Ok(None)
        });
        for w in family_witnesses {
            if let Some(w) = w? {
                return Ok(VerificationReport::fail(claim, w));
            }
        }
        // Entrywise for F_{1,2}: (E_λ v)_x ∝ Σ_μ ω_λ^μ #{y ∈ F : d(x,y)=μ}.
        let members = trivial_family(n, 1, 2)?.members()?;
        let np = parts.len();
        let bad = exec::fold_matchings(
            n,
            Vec::new,
            |acc: &mut Vec<String>, _r, x| {
                let mut profile = vec![0u64; np];
                for y in &members {
                    profile[parts.position(&x.cycle_type(y).expect("same n")).unwrap()] += 1;
                }
                for li in 0..np {
                    if exempt.contains(&li) {
                        continue;
                    }
                    let mut sum = Rat::zero();
                    for (mu, &c) in profile.iter().enumerate() {
                        if c != 0 {
                            sum += zonal.get(mu, li) * Rat::from_integer(BigInt::from(c));
                        }
                    }
                    if !sum.is_zero() {
                        acc.push(format!("(E_{} v_F12)_{x} != 0", parts.get(li)));
                    }
                }
            },
            |mut a, b| {
                a.extend(b);
                a
            },
        )?;
        if let Some(w) = bad.first() {
            return Ok(VerificationReport::fail(claim, w.clone()));
        }
    }
    let strength = if n <= 5 {
        "entrywise over all trivial families"
    } else {
        "quadratic-form over all trivial families, entrywise for F_{1,2}"
    };
    Ok(VerificationReport::pass(claim).with_detail(strength))
}

// ---------------------------------------------------------------------
// Exact independence number with extremal enumeration
// ---------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MisMode {
    Bound,
    Exact,
    Enumerate,
}

impl FromStr for MisMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bound" => Ok(MisMode::Bound),
            "exact" => Ok(MisMode::Exact),
            "enumerate" => Ok(MisMode::Enumerate),
            other => Err(Error::Parse(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MisOutcome {
    pub mode: MisMode,
    /// The ratio bound, always exact.
    pub upper_bound: Rat,
    /// Exact independence number (Exact/Enumerate modes, when complete).
    pub alpha: Option<u64>,
    /// Every maximum independent set (Enumerate mode, when complete).
    pub extremal: Option<Vec<FamilyVector>>,
    /// False when the node budget was exhausted; results are then partial.
    pub complete: bool,
    pub nodes: u64,
}

/// Dense adjacency over matching ranks for one union of associates.
pub struct DenseGraph {
    pub size: usize,
    adj: Vec<BitSet>,
}

impl DenseGraph {
    /// Adjacency x ~ y iff d(x,y) lies in the union. Gated to n ≤ 5.
    pub fn from_union(union: &crate::derangement::AssociateUnion) -> Result<Self> {
        let dm = DistanceMatrix::compute(union.n())?;
        let members: Vec<usize> = union
            .members()
            .iter()
            .map(|p| dm.parts().position(p).expect("partition of n"))
            .collect();
        let size = dm.size();
        let adj = exec::par_map(size, |x| {
            let mut row = BitSet::new(size);
            for y in 0..size {
                if y != x && members.contains(&dm.get(x, y)) {
                    row.insert(y);
                }
            }
            row
        });
        Ok(DenseGraph { size, adj })
    }

    /// The "conflict" graph of t-intersection: x ~ y iff |x ∩ y| < t
    /// (independent sets are then exactly the t-intersecting families).
    pub fn t_conflict(n: usize, t: usize) -> Result<Self> {
        let all: Vec<Matching> = enumerate(n)?.collect();
        let size = all.len();
        let adj = exec::par_map(size, |x| {
            let mut row = BitSet::new(size);
            for y in 0..size {
                if y != x && all[x].common_edges(&all[y]) < t {
                    row.insert(y);
                }
            }
            row
        });
        Ok(DenseGraph { size, adj })
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &BitSet {
        &self.adj[v]
    }

    pub fn is_independent(&self, set: &BitSet) -> bool {
        set.iter().all(|v| {
            let mut conflict = self.adj[v].clone();
            conflict.intersect_with(set);
            conflict.is_empty()
        })
    }
}

/// Exact B&B. Upper bound per node: greedy clique cover of the candidate
/// set (an independent set picks at most one vertex per clique).
fn clique_cover_bound(g: &DenseGraph, cand: &BitSet) -> usize {
    let mut uncovered = cand.clone();
    let mut cliques = 0;
    while let Some(u) = uncovered.first_set() {
        cliques += 1;
        uncovered.remove(u);
        let mut mask = uncovered.clone();
        mask.intersect_with(g.neighbors(u));
        while let Some(w) = mask.first_set() {
            uncovered.remove(w);
            mask.remove(w);
            mask.intersect_with(g.neighbors(w));
        }
    }
    cliques
}

struct MisSearch<'a> {
    g: &'a DenseGraph,
    best: &'a AtomicUsize,
    nodes: u64,
    budget: u64,
    truncated: bool,
    /// Enumerate phase: collect all sets of exactly `target`.
    target: Option<usize>,
    found: Vec<BitSet>,
}

impl MisSearch<'_> {
    fn run(&mut self, chosen: &mut BitSet, chosen_len: usize, cand: BitSet) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.truncated = true;
            return;
        }
        match self.target {
            None => {
                if chosen_len > self.best.load(Ordering::Relaxed) {
                    self.best.fetch_max(chosen_len, Ordering::Relaxed);
                }
                if chosen_len + clique_cover_bound(self.g, &cand)
                    <= self.best.load(Ordering::Relaxed)
                {
                    return;
                }
            }
            Some(t) => {
                if chosen_len == t {
                    self.found.push(chosen.clone());
                    return;
                }
                if chosen_len + clique_cover_bound(self.g, &cand) < t {
                    return;
                }
            }
        }
        let Some(v) = cand.first_set() else {
            return;
        };
        // Include v.
        let mut with_v = cand.clone();
        with_v.remove(v);
        with_v.subtract(self.g.neighbors(v));
        chosen.insert(v);
        self.run(chosen, chosen_len + 1, with_v);
        chosen.remove(v);
        // Exclude v.
        let mut without_v = cand;
        without_v.remove(v);
        self.run(chosen, chosen_len, without_v);
    }
}

/// Exact/enumerating maximum-independent-set search over a dense graph.
///
/// `seed_lower_bound` primes the incumbent with a known independent set
/// size (0 if unknown). The ratio bound `cutoff` stops the optimality
/// search as soon as the incumbent provably cannot be beaten.
pub fn search_mis(
    g: &DenseGraph,
    mode: MisMode,
    seed_lower_bound: usize,
    cutoff: Option<usize>,
    budget: u64,
) -> (Option<u64>, Option<Vec<BitSet>>, bool, u64) {
    let best = AtomicUsize::new(seed_lower_bound.saturating_sub(1));
    let full_cand = {
        let mut c = BitSet::new(g.size);
        for v in 0..g.size {
            c.insert(v);
        }
        c
    };
    // Phase A: the independence number.
    let mut phase_a = MisSearch {
        g,
        best: &best,
        nodes: 0,
        budget,
        truncated: false,
        target: None,
        found: Vec::new(),
    };
    let reached_cutoff = cutoff.is_some_and(|c| seed_lower_bound >= c);
    if !reached_cutoff {
        let mut chosen = BitSet::new(g.size);
        phase_a.run(&mut chosen, 0, full_cand.clone());
        if phase_a.truncated {
            return (None, None, false, phase_a.nodes);
        }
    }
    let alpha = best
        .load(Ordering::Relaxed)
        .max(if reached_cutoff { seed_lower_bound } else { 0 });
    if mode == MisMode::Exact {
        return (Some(alpha as u64), None, true, phase_a.nodes);
    }
    // Phase B: enumerate all independent sets of size alpha, in parallel
    // over disjoint root branches.
    let counter = AtomicU64::new(phase_a.nodes);
    let roots = enumerate_roots(g, &full_cand, alpha);
    let outcomes = exec::par_map(roots.len(), |k| {
        let (chosen0, cand0) = &roots[k];
        let mut search = MisSearch {
            g,
            best: &best,
            nodes: 0,
            budget: budget.saturating_sub(counter.load(Ordering::Relaxed)),
            truncated: false,
            target: Some(alpha),
            found: Vec::new(),
        };
        let mut chosen = chosen0.clone();
        search.run(&mut chosen, chosen0.count_ones(), cand0.clone());
        counter.fetch_add(search.nodes, Ordering::Relaxed);
        (search.found, search.truncated)
    });
    let mut found: Vec<BitSet> = Vec::new();
    let mut truncated = false;
    for (sets, t) in outcomes {
        found.extend(sets);
        truncated |= t;
    }
    found.sort_by_key(|a| a.iter().collect::<Vec<_>>());
    found.dedup();
    let nodes = counter.load(Ordering::Relaxed);
    if truncated {
        return (Some(alpha as u64), None, false, nodes);
    }
    (Some(alpha as u64), Some(found), true, nodes)
}

/// Splits the search tree at depth 2 into disjoint (chosen, candidate)
/// prefixes for parallel enumeration.
fn enumerate_roots(g: &DenseGraph, full: &BitSet, target: usize) -> Vec<(BitSet, BitSet)> {
    let mut roots = vec![(BitSet::new(g.size), full.clone())];
    for _ in 0..2 {
        let mut next = Vec::new();
        for (chosen, cand) in roots {
            if chosen.count_ones() == target {
                next.push((chosen, cand));
                continue;
            }
            let Some(v) = cand.first_set() else {
                next.push((chosen, cand));
                continue;
            };
            let mut with_v = cand.clone();
            with_v.remove(v);
            with_v.subtract(g.neighbors(v));
            let mut chosen_v = chosen.clone();
            chosen_v.insert(v);
            next.push((chosen_v, with_v));
            let mut without_v = cand;
            without_v.remove(v);
            next.push((chosen, without_v));
        }
        roots = next;
    }
    roots
}

/// Exact independence-number computation for a union of associates.
pub fn max_independent_set(
    union: &crate::derangement::AssociateUnion,
    mode: MisMode,
    table: &CharacterTable,
    budget: Option<u64>,
) -> Result<MisOutcome> {
    let n = union.n();
    let rb = crate::derangement::ratio_bound(union, table)?;
    if mode == MisMode::Bound {
        return Ok(MisOutcome {
            mode,
            upper_bound: rb.bound,
            alpha: None,
            extremal: None,
            complete: true,
            nodes: 0,
        });
    }
    if Matching::count(n)? > 1000 {
        return Err(Error::OutOfRange {
            what: "n for exact independent-set search",
            value: n as i64,
            min: 2,
            max: 5,
        });
    }
    let g = DenseGraph::from_union(union)?;
    // A trivial family is independent whenever no member of the union has
    // a fixed edge, which holds for Γ and any no-part-1 union.
    let seed_set = trivial_family(n, 1, 2)?;
    let seed = if g.is_independent(seed_set.bits()) {
        seed_set.cardinality()
    } else {
        0
    };
    let cutoff = rb.bound.to_integer().to_usize().filter(|_| rb.integral);
    let budget = budget.unwrap_or(u64::MAX);
    let (alpha, sets, complete, nodes) = search_mis(&g, mode, seed, cutoff, budget);
    let extremal = match sets {
        Some(list) => {
            let mut fams = Vec::with_capacity(list.len());
            for bits in list {
                fams.push(FamilyVector {
                    n,
                    bits,
                });
            }
            Some(fams)
        }
        None => None,
    };
    Ok(MisOutcome {
        mode,
        upper_bound: rb.bound,
        alpha,
        extremal,
        complete,
        nodes,
    })
}

/// True iff the family equals F_ij for some edge {i, j}.
pub fn is_trivial_family(fam: &FamilyVector) -> Result<Option<(usize, usize)>> {
    let members = fam.members()?;
    let Some(first) = members.first() else {
        return Ok(None);
    };
    'edges: for (a, b) in first.pairs() {
        for m in &members {
            if m.partner(a - 1) != b - 1 {
                continue 'edges;
            }
        }
        if trivial_family(fam.n(), a, b)? == *fam {
            return Ok(Some((a, b)));
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------
// Chromatic coloring
// ---------------------------------------------------------------------

/// The (2n−1)-coloring by the partner of vertex 1, verified proper against
/// derangement adjacency: exhaustively for n ≤ 5, by seeded random edge
/// sampling for n = 6.
pub fn chromatic_coloring(n: usize, seed: u64) -> Result<(Vec<u8>, VerificationReport)> {
    let claim = format!("ekr.chromatic.n{n}");
    if !(2..=6).contains(&n) {
        return Err(Error::OutOfRange {
            what: "n for chromatic_coloring",
            value: n as i64,
            min: 2,
            max: 6,
        });
    }
    let colors = exec::fold_matchings(
        n,
        Vec::new,
        |acc: &mut Vec<u8>, _r, m| acc.push(m.partner(0) as u8 - 1),
        |mut a, b| {
            a.extend(b);
            a
        },
    )?;
    // Class sizes: 2n−1 classes of (2(n−1)−1)!! each.
    let class_size = double_factorial(2 * n as i64 - 3)?
        .to_u64()
        .expect("fits u64");
    for c in 0..(2 * n - 1) as u8 {
        let got = colors.iter().filter(|&&x| x == c).count() as u64;
        if got != class_size {
            return Ok((
                colors.clone(),
                VerificationReport::fail(
                    claim,
                    format!("color {c} has {got} matchings, expected {class_size}"),
                ),
            ));
        }
    }
    let report = if n <= 5 {
        let all: Vec<Matching> = enumerate(n)?.collect();
        let witnesses = exec::par_map(all.len(), |x| {
            for y in x + 1..all.len() {
                if colors[x] == colors[y] && !all[x].shares_edge_with(&all[y]) {
                    return Some(format!("adjacent pair ({x},{y}) shares color"));
                }
            }
            None
        });
        match witnesses.into_iter().flatten().next() {
            Some(w) => VerificationReport::fail(claim, w),
            None => VerificationReport::pass(claim).with_detail("full edge scan"),
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let count = Matching::count(n)?;
        let mut bad = None;
        let mut sampled = 0u32;
        while sampled < 200_000 {
            let x = Matching::unrank(n, rng.gen_range(0..count))?;
            let y = Matching::unrank(n, rng.gen_range(0..count))?;
            if x == y || x.shares_edge_with(&y) {
                continue;
            }
            sampled += 1;
            if x.partner(0) == y.partner(0) {
                bad = Some(format!("adjacent pair {x} / {y} shares color"));
                break;
            }
        }
        match bad {
            Some(w) => VerificationReport::fail(claim, w),
            None => {
                VerificationReport::pass(claim).with_detail("200000 random edges sampled")
            }
        }
    };
    Ok((colors, report))
}

// ---------------------------------------------------------------------
// t-intersecting search
// ---------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct TIntersectingOutcome {
    pub n: usize,
    pub t: usize,
    pub max_size: u64,
    pub extremal: Vec<FamilyVector>,
    /// True iff every extremal family is trivially t-intersecting.
    pub all_trivial: bool,
    pub complete: bool,
    pub nodes: u64,
}

/// Exhaustive maximum t-intersecting family search by B&B on the conflict
/// graph. Gated to (2n−1)!! ≤ 120, i.e. n ≤ 4.
pub fn t_intersecting_search(
    n: usize,
    t: usize,
    budget: Option<u64>,
) -> Result<TIntersectingOutcome> {
    if Matching::count(n)? > 120 {
        return Err(Error::OutOfRange {
            what: "n for t_intersecting_search",
            value: n as i64,
            min: 2,
            max: 4,
        });
    }
    if t == 0 || t >= n {
        return Err(Error::OutOfRange {
            what: "t",
            value: t as i64,
            min: 1,
            max: n as i64 - 1,
        });
    }
    let g = DenseGraph::t_conflict(n, t)?;
    let budget = budget.unwrap_or(u64::MAX);
    let (alpha, sets, complete, nodes) = search_mis(&g, MisMode::Enumerate, 1, None, budget);
    let max_size = alpha.expect("phase A ran");
    let mut extremal = Vec::new();
    let mut all_trivial = true;
    for bits in sets.unwrap_or_default() {
        let fam = FamilyVector { n, bits };
        all_trivial &= is_trivially_t_intersecting(&fam, t)?;
        extremal.push(fam);
    }
    Ok(TIntersectingOutcome {
        n,
        t,
        max_size,
        extremal,
        all_trivial,
        complete,
        nodes,
    })
}

/// True iff fam = F_T for some set T of t disjoint edges.
pub fn is_trivially_t_intersecting(fam: &FamilyVector, t: usize) -> Result<bool> {
    let n = fam.n();
    let members = fam.members()?;
    let Some(first) = members.first() else {
        return Ok(false);
    };
    // Edges common to every member.
    let common: Vec<(usize, usize)> = first
        .pairs()
        .into_iter()
        .filter(|&(a, b)| members.iter().all(|m| m.partner(a - 1) == b - 1))
        .collect();
    if common.len() < t {
        return Ok(false);
    }
    // fam = F_T for a t-subset T of the common edges iff the sizes agree
    // and every matching containing T lies in fam; |F_T| = (2(n-t)-1)!!.
    let expect = double_factorial(2 * (n - t) as i64 - 1)?
        .to_u64()
        .expect("fits u64");
    if fam.cardinality() as u64 != expect {
        return Ok(false);
    }
    for combo in combinations(common.len(), t) {
        let chosen: Vec<(usize, usize)> = combo.iter().map(|&k| common[k]).collect();
        let full = exec::fold_matchings(
            n,
            Vec::new,
            |acc: &mut Vec<u64>, r, m| {
                if chosen.iter().all(|&(a, b)| m.partner(a - 1) == b - 1) {
                    acc.push(r);
                }
            },
            |mut a, b| {
                a.extend(b);
                a
            },
        )?;
        if full.len() == fam.cardinality() && full.iter().all(|&r| fam.contains(r)) {
            return Ok(true);
        }
    }
    Ok(false)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derangement::AssociateUnion;

    #[test]
    fn trivial_family_sizes() {
        let f = trivial_family(4, 1, 2).unwrap();
        assert_eq!(f.cardinality(), 15);
        let f = trivial_family(2, 1, 3).unwrap();
        assert_eq!(f.cardinality(), 1);
        assert_eq!(
            f.members().unwrap()[0].canonical_string(),
            "1-3|2-4"
        );
    }

    #[test]
    fn every_matching_in_exactly_n_trivial_families() {
        let n = 3;
        let mut counts = vec![0u32; Matching::count(n).unwrap() as usize];
        for i in 1..=2 * n {
            for j in i + 1..=2 * n {
                for r in trivial_family(n, i, j).unwrap().ranks() {
                    counts[r as usize] += 1;
                }
            }
        }
        assert!(counts.iter().all(|&c| c == n as u32));
    }

    #[test]
    fn trivial_families_are_independent_in_gamma() {
        for n in 2..=5 {
            let members = trivial_family(n, 1, 2).unwrap().members().unwrap();
            for (i, x) in members.iter().enumerate() {
                for y in &members[i + 1..] {
                    assert!(x.shares_edge_with(y));
                }
            }
        }
    }

    #[test]
    fn lucas_clique_prime_cases() {
        for n in [2usize, 3, 4, 6, 7] {
            let c = lucas_clique(n, DEFAULT_SEED).unwrap();
            assert_eq!(c.factors.len(), 2 * n - 1);
            assert_eq!(c.factors[0], Matching::identity(n).unwrap());
        }
    }

    #[test]
    fn lucas_clique_composite_case_via_search() {
        // 2n−1 = 9 is composite; the rotation fails and the searcher runs.
        let c = lucas_clique(5, DEFAULT_SEED).unwrap();
        assert_eq!(c.factors.len(), 9);
        assert_eq!(c.factors[0], Matching::identity(5).unwrap());
    }

    #[test]
    fn clique_coclique_equality_is_pure_arithmetic() {
        for n in 2..=12usize {
            assert_eq!(
                BigUint::from(2 * n - 1) * double_factorial(2 * n as i64 - 3).unwrap(),
                matchings_count(n),
                "n = {n}"
            );
        }
    }

    #[test]
    fn clique_coclique_small() {
        for n in 2..=4 {
            let table = CharacterTable::compute(n).unwrap();
            let r = clique_coclique_check(n, Some(&table)).unwrap();
            assert!(r.is_pass(), "n = {n}: {r:?}");
        }
        // Arithmetic-only path.
        let r = clique_coclique_check(8, None).unwrap();
        assert!(r.is_pass());
    }

    #[test]
    fn module_method_small() {
        for n in 2..=5 {
            let table = CharacterTable::compute(n).unwrap();
            let r = module_method_check(n, &table).unwrap();
            assert!(r.is_pass(), "n = {n}: {r:?}");
        }
    }

    #[test]
    fn alpha_gamma_3_with_extremal_families() {
        let table = CharacterTable::compute(3).unwrap();
        let gamma = AssociateUnion::gamma(3).unwrap();
        let out = max_independent_set(&gamma, MisMode::Enumerate, &table, None).unwrap();
        assert!(out.complete);
        assert_eq!(out.alpha, Some(3));
        let extremal = out.extremal.unwrap();
        assert_eq!(extremal.len(), 15);
        for fam in &extremal {
            assert!(is_trivial_family(fam).unwrap().is_some());
        }
    }

    #[test]
    fn chromatic_coloring_small() {
        for n in 2..=4 {
            let (colors, report) = chromatic_coloring(n, DEFAULT_SEED).unwrap();
            assert!(report.is_pass(), "n = {n}: {report:?}");
            assert_eq!(colors.len(), Matching::count(n).unwrap() as usize);
        }
    }

    #[test]
    fn t_intersecting_n3() {
        let out = t_intersecting_search(3, 1, None).unwrap();
        assert_eq!(out.max_size, 3);
        assert!(out.complete);
        assert_eq!(out.extremal.len(), 15);
        assert!(out.all_trivial);

        let out = t_intersecting_search(3, 2, None).unwrap();
        assert_eq!(out.max_size, 1);
        assert!(out.all_trivial);
        assert_eq!(out.extremal.len(), 15);
    }

    #[test]
    fn bitset_basics() {
        let mut b = BitSet::new(130);
        b.insert(0);
        b.insert(64);
        b.insert(129);
        assert_eq!(b.count_ones(), 3);
        assert_eq!(b.iter().collect::<Vec<_>>(), vec![0, 64, 129]);
        assert_eq!(b.first_set(), Some(0));
        b.remove(0);
        assert_eq!(b.first_set(), Some(64));
    }
}
