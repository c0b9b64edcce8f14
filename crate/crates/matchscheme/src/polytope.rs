//! The perfect matching polytope of K_2n: incidence-matrix rank identity,
//! Edmonds constraint membership, odd-cut single-crossing counts and the
//! parallel-faces decomposition used by the extremal-uniqueness argument.
//!
//! Everything is exact: ranks by fraction-free integer row reduction,
//! membership and face systems over big rationals.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::combinatorics::{binomial, double_factorial, matchings_count, specht_dimension, Partition};
use crate::error::{Error, Result};
use crate::exec;
use crate::linalg::{IntRowReducer, Rat};
use crate::report::VerificationReport;

/// Edges of K_2n as 1-based (i, j) pairs, i < j, lexicographic.
pub fn edge_list(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n * (2 * n - 1));
    for i in 1..=2 * n {
        for j in i + 1..=2 * n {
            out.push((i, j));
        }
    }
    out
}

fn edge_position(n: usize, i: usize, j: usize) -> usize {
    // Position of (i, j), i < j, in lexicographic order.
    let i0 = i - 1;
    let before = i0 * (4 * n - i0 - 1) / 2;
    before + (j - i - 1)
}

/// The (2n−1)!! × C(2n,2) incidence matrix: row per matching in rank
/// order, column per edge. Columns are exactly the trivial-family vectors.
pub struct IncidenceMatrix {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    /// Row-major edge indices: row r holds n sorted edge positions.
    rows: Vec<Vec<u32>>,
}

impl IncidenceMatrix {
    pub fn compute(n: usize) -> Result<Self> {
        if n > 6 {
            return Err(Error::OutOfRange {
                what: "n for incidence_matrix",
                value: n as i64,
                min: 1,
                max: 6,
            });
        }
        let edges = edge_list(n);
        let rows = exec::fold_matchings(
            n,
            Vec::new,
            |acc: &mut Vec<Vec<u32>>, _r, m| {
                let row: Vec<u32> = m
                    .pairs()
                    .into_iter()
                    .map(|(a, b)| edge_position(n, a, b) as u32)
                    .collect();
                acc.push(row);
            },
            |mut a, b| {
                a.extend(b);
                a
            },
        )?;
        Ok(IncidenceMatrix { n, edges, rows })
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.edges.len()
    }

    /// Edge positions of matching `r` (the support of its incidence row).
    pub fn row_support(&self, r: usize) -> &[u32] {
        &self.rows[r]
    }

    /// Dense 0/1 row as integers.
    pub fn row_dense(&self, r: usize) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.num_cols()];
        for &e in &self.rows[r] {
            out[e as usize] = BigInt::one();
        }
        out
    }

    /// The transpose orientation: column `edge` is the characteristic
    /// vector of the trivially intersecting family of that edge, returned
    /// as matching ranks.
    pub fn column(&self, edge: usize) -> Vec<u64> {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, row)| row.contains(&(edge as u32)))
            .map(|(r, _)| r as u64)
            .collect()
    }

    /// Column sums: each edge lies in (2(n−1)−1)!! matchings.
    pub fn column_sum(&self, edge: usize) -> u64 {
        self.column(edge).len() as u64
    }

    /// Exact rank over the rationals, by incremental fraction-free
    /// reduction with gcd normalization.
    pub fn rank(&self) -> usize {
        let mut red = IntRowReducer::new(self.num_cols(), false);
        for r in 0..self.num_rows() {
            red.insert(self.row_dense(r));
        }
        red.rank()
    }
}

/// Rank identity: rank(incidence) = C(2n,2) − 2n + 1
/// = dim S^(2n) + dim S^(2n−2,2).
pub fn rank_check(n: usize) -> Result<VerificationReport> {
    let claim = format!("polytope.rank.n{n}");
    let inc = IncidenceMatrix::compute(n)?;
    let rank = inc.rank();
    let edges = binomial(2 * n, 2)
        .to_usize()
        .expect("edge count fits usize");
    let formula = edges - 2 * n + 1;
    let hooks = specht_dimension(&Partition::new(vec![2 * n])?)?
        + specht_dimension(&Partition::new(vec![2 * n - 2, 2])?)?;
    let ok = rank == formula && BigUint::from(rank) == hooks;
    let report = if ok {
        VerificationReport::pass(claim)
            .with_expected(formula)
            .with_actual(rank)
            .with_detail(format!("also equals dim S^(2n) + dim S^(2n-2,2) = {hooks}"))
    } else {
        VerificationReport::fail(
            claim,
            format!("rank {rank}, C(2n,2)-2n+1 = {formula}, hook dims {hooks}"),
        )
        .with_expected(formula)
        .with_actual(rank)
    };
    Ok(report)
}

/// Outcome of the Edmonds membership test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EdmondsOutcome {
    Satisfied,
    /// First violated constraint, as a witness string.
    Violated(String),
}

/// Tests an exact rational edge vector against the three Edmonds families:
/// nonnegativity, degree equalities, and all odd-cut inequalities with
/// 3 ≤ |S| ≤ 2n−3 (enumerated exhaustively; gated to n ≤ 5).
pub fn edmonds_membership(x: &[Rat], n: usize) -> Result<EdmondsOutcome> {
    if n > 5 {
        return Err(Error::OutOfRange {
            what: "n for edmonds_membership",
            value: n as i64,
            min: 1,
            max: 5,
        });
    }
    let edges = edge_list(n);
    if x.len() != edges.len() {
        return Err(Error::Consistency(format!(
            "vector length {} != number of edges {}",
            x.len(),
            edges.len()
        )));
    }
    for (e, v) in x.iter().enumerate() {
        if v < &Rat::zero() {
            let (i, j) = edges[e];
            return Ok(EdmondsOutcome::Violated(format!(
                "nonnegativity at edge ({i},{j}): {v}"
            )));
        }
    }
    for v in 1..=2 * n {
        let mut sum = Rat::zero();
        for (e, &(i, j)) in edges.iter().enumerate() {
            if i == v || j == v {
                sum += &x[e];
            }
        }
        if !sum.is_one() {
            return Ok(EdmondsOutcome::Violated(format!(
                "degree equality at vertex {v}: sum {sum}"
            )));
        }
    }
    // Odd cuts: subsets of odd size s, 3 ≤ s ≤ 2n−3. By δ(S) = δ(V∖S) it
    // suffices to take subsets containing vertex 1 or not — enumerate all.
    for s in (3..=2 * n.saturating_sub(1)).step_by(2) {
        if s > 2 * n - 3 {
            break;
        }
        for subset in subsets_of_size(2 * n, s) {
            let mut member = vec![false; 2 * n + 1];
            for &v in &subset {
                member[v] = true;
            }
            let mut sum = Rat::zero();
            for (e, &(i, j)) in edges.iter().enumerate() {
                if member[i] != member[j] {
                    sum += &x[e];
                }
            }
            if sum < Rat::one() {
                return Ok(EdmondsOutcome::Violated(format!(
                    "odd-cut inequality at S = {subset:?}: sum {sum}"
                )));
            }
        }
    }
    Ok(EdmondsOutcome::Satisfied)
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..=n {
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(1, n, k, &mut cur, &mut out);
    out
}

/// Number of matchings crossing the cut δ({1..s}) exactly once, both by
/// the closed form s!!(2n−s)!! and (n ≤ 5) by brute-force scan. The two
/// routes must agree.
pub fn odd_cut_single_crossing(n: usize, s: usize) -> Result<BigUint> {
    if s.is_multiple_of(2) || s < 3 || s + 3 > 2 * n {
        return Err(Error::OutOfRange {
            what: "odd cut size s",
            value: s as i64,
            min: 3,
            max: 2 * n as i64 - 3,
        });
    }
    let formula = double_factorial(s as i64)? * double_factorial((2 * n - s) as i64)?;
    if n <= 5 {
        let scanned = exec::count_matchings(n, |_, m| {
            let crossing = (0..s).filter(|&v| m.partner(v) >= s).count();
            crossing == 1
        })?;
        if BigUint::from(scanned) != formula {
            return Err(Error::Consistency(format!(
                "single-crossing scan {scanned} != formula {formula} at n={n}, s={s}"
            )));
        }
    }
    Ok(formula)
}

/// The counting inequality behind the uniqueness proof:
/// (2n−1)!! − s!!(2n−s)!! > (2(n−1)−1)!! for all valid odd s.
pub fn cut_counting_inequality(n_range: std::ops::RangeInclusive<usize>) -> VerificationReport {
    let claim = format!(
        "polytope.cut-inequality.n{}-{}",
        n_range.start(),
        n_range.end()
    );
    for n in n_range {
        let total = matchings_count(n);
        let alpha = double_factorial(2 * n as i64 - 3).expect("odd");
        let mut s = 3;
        while s + 3 <= 2 * n {
            let crossing = double_factorial(s as i64).unwrap()
                * double_factorial((2 * n - s) as i64).unwrap();
            if &total - &crossing <= alpha {
                return VerificationReport::fail(
                    claim,
                    format!("n={n}, s={s}: {total} - {crossing} <= {alpha}"),
                );
            }
            s += 2;
        }
    }
    VerificationReport::pass(claim)
}

/// Result of solving z = M·h for a vector z over matchings.
#[derive(Clone, Debug)]
pub struct ParallelFaces {
    pub consistent: bool,
    /// A particular solution over the edge coordinates, when consistent.
    pub h: Option<Vec<Rat>>,
    /// Matching ranks attaining the minimum and maximum component of z.
    pub face_min: Vec<u64>,
    pub face_max: Vec<u64>,
    /// Set when z is constant (the two faces coincide with everything).
    pub constant: Option<Rat>,
}

/// Solves z = M·h exactly (M the incidence matrix) and splits the vertex
/// set into the two parallel faces determined by min(z) and max(z).
/// For z = v_{F_ij} the system must be consistent with F_max = F_ij.
pub fn parallel_faces(z: &[Rat], n: usize) -> Result<ParallelFaces> {
    if n > 5 {
        return Err(Error::OutOfRange {
            what: "n for parallel_faces",
            value: n as i64,
            min: 1,
            max: 5,
        });
    }
    let inc = IncidenceMatrix::compute(n)?;
    if z.len() != inc.num_rows() {
        return Err(Error::Consistency(format!(
            "z length {} != number of matchings {}",
            z.len(),
            inc.num_rows()
        )));
    }
    // Clear denominators so the augmented reduction stays over integers.
    let mut denom = BigInt::one();
    for v in z {
        denom = num_integer::lcm(denom, v.denom().clone());
    }
    let mut red = IntRowReducer::new(inc.num_cols(), true);
    for (r, zv) in z.iter().enumerate() {
        let mut row = inc.row_dense(r);
        let scaled = (zv * Rat::from_integer(denom.clone())).to_integer();
        row.push(scaled);
        red.insert(row);
    }
    let consistent = !red.inconsistent();
    let h = if consistent {
        let scaled = red.particular_solution().expect("consistent system");
        let h: Vec<Rat> = scaled
            .into_iter()
            .map(|v| v / Rat::from_integer(denom.clone()))
            .collect();
        // Verification pass: M·h must reproduce z exactly.
        for (r, zv) in z.iter().enumerate() {
            let mut sum = Rat::zero();
            for &e in inc.row_support(r) {
                sum += &h[e as usize];
            }
            if sum != *zv {
                return Err(Error::Consistency(format!(
                    "solution check failed at row {r}"
                )));
            }
        }
        Some(h)
    } else {
        None
    };
    let min = z.iter().min().expect("nonempty").clone();
    let max = z.iter().max().expect("nonempty").clone();
    let constant = if min == max { Some(min.clone()) } else { None };
    let collect = |target: &Rat| -> Vec<u64> {
        z.iter()
            .enumerate()
            .filter(|(_, v)| *v == target)
            .map(|(r, _)| r as u64)
            .collect()
    };
    Ok(ParallelFaces {
        consistent,
        h,
        face_min: collect(&min),
        face_max: collect(&max),
        constant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ekr::trivial_family;
    use crate::matching::Matching;

    #[test]
    fn edge_positions_lexicographic() {
        let n = 4;
        for (k, &(i, j)) in edge_list(n).iter().enumerate() {
            assert_eq!(edge_position(n, i, j), k);
        }
    }

    #[test]
    fn incidence_row_and_column_sums() {
        let inc = IncidenceMatrix::compute(4).unwrap();
        assert_eq!(inc.num_rows(), 105);
        assert_eq!(inc.num_cols(), 28);
        for r in 0..inc.num_rows() {
            assert_eq!(inc.row_support(r).len(), 4);
        }
        // Column (1,2) sums to |F_{1,2}| = 15; total ones = 105·4.
        assert_eq!(inc.column_sum(edge_position(4, 1, 2)), 15);
        let total: u64 = (0..inc.num_cols()).map(|e| inc.column_sum(e)).sum();
        assert_eq!(total, 420);
        // Columns are exactly the trivial-family vectors.
        assert_eq!(
            inc.column(edge_position(4, 1, 2)),
            trivial_family(4, 1, 2).unwrap().ranks()
        );
    }

    #[test]
    fn rank_identity_small() {
        for (n, want) in [(3usize, 10usize), (4, 21), (5, 36)] {
            let r = rank_check(n).unwrap();
            assert!(r.is_pass(), "n = {n}: {r:?}");
            assert_eq!(r.actual.as_deref(), Some(want.to_string().as_str()));
        }
    }

    #[test]
    fn membership_of_matching_vertices_and_uniform_point() {
        let n = 4;
        let edges = edge_list(n);
        // Every matching incidence vector is a vertex of the polytope.
        let inc = IncidenceMatrix::compute(n).unwrap();
        for r in [0usize, 17, 104] {
            let mut x = vec![Rat::zero(); edges.len()];
            for &e in inc.row_support(r) {
                x[e as usize] = Rat::one();
            }
            assert_eq!(edmonds_membership(&x, n).unwrap(), EdmondsOutcome::Satisfied);
        }
        // The uniform vector 1/(2n−1) is interior.
        let uniform = vec![Rat::new(BigInt::one(), BigInt::from(2 * n as i64 - 1)); edges.len()];
        assert_eq!(
            edmonds_membership(&uniform, n).unwrap(),
            EdmondsOutcome::Satisfied
        );
        // The zero vector violates a degree equality at vertex 1.
        let zero = vec![Rat::zero(); edges.len()];
        match edmonds_membership(&zero, n).unwrap() {
            EdmondsOutcome::Violated(w) => assert!(w.contains("vertex 1")),
            other => panic!("expected violation, got {other:?}"),
        }
    }

    #[test]
    fn single_crossing_counts() {
        // n=4, s=3: 3!!·5!! = 45 (scan-verified inside the call).
        assert_eq!(
            odd_cut_single_crossing(4, 3).unwrap(),
            BigUint::from(45u32)
        );
        // n=5, s=3: 3·105 = 315.
        assert_eq!(
            odd_cut_single_crossing(5, 3).unwrap(),
            BigUint::from(315u32)
        );
        assert!(odd_cut_single_crossing(4, 4).is_err());
    }

    #[test]
    fn counting_inequality_range() {
        assert!(cut_counting_inequality(3..=10).is_pass());
    }

    #[test]
    fn parallel_faces_of_trivial_family() {
        let n = 4;
        let fam = trivial_family(n, 1, 2).unwrap();
        let count = Matching::count(n).unwrap() as usize;
        let z: Vec<Rat> = (0..count)
            .map(|r| {
                if fam.contains(r as u64) {
                    Rat::one()
                } else {
                    Rat::zero()
                }
            })
            .collect();
        let pf = parallel_faces(&z, n).unwrap();
        assert!(pf.consistent);
        assert_eq!(pf.face_max.len(), 15);
        assert_eq!(pf.face_max, fam.ranks());
        assert_eq!(pf.face_min.len(), 90);
        // One valid h is the indicator of edge (1,2); the solver may pick
        // any solution, so only verify the reproduction property (done
        // internally) and the face split.
        assert!(pf.h.is_some());
    }

    #[test]
    fn parallel_faces_all_ones_is_constant() {
        let n = 3;
        let count = Matching::count(n).unwrap() as usize;
        let z = vec![Rat::one(); count];
        let pf = parallel_faces(&z, n).unwrap();
        assert!(pf.consistent);
        assert_eq!(pf.constant, Some(Rat::one()));
        assert_eq!(pf.face_min.len(), count);
    }

    #[test]
    fn parallel_faces_inconsistent_vector() {
        // An indicator of a single non-face set of matchings is generally
        // outside the column space; pick {rank 0} ∪ {rank 7} at n = 3.
        let n = 3;
        let count = Matching::count(n).unwrap() as usize;
        let mut z = vec![Rat::zero(); count];
        z[0] = Rat::one();
        z[7] = Rat::one();
        let pf = parallel_faces(&z, n).unwrap();
        assert!(!pf.consistent);
        assert!(pf.h.is_none());
    }
}
