//! Integer combinatorics underneath the matching scheme: partitions of n,
//! factorial-family counters, centralizer orders z_λ, hyperoctahedral group
//! orders and hook-length dimensions of Specht modules.
//!
//! Every counting path is exact: all counters return [`BigUint`], and the
//! canonical partition order (reverse lexicographic, `(n)` first, `(1^n)`
//! last) is fixed here once and used for matrix indexing everywhere else.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Largest n for which partition utilities are offered.
pub const MAX_PARTITION_N: usize = 12;
/// Largest m for which Specht dimensions are offered (2 * 12).
pub const MAX_SPECHT_M: usize = 24;

/// An integer partition: weakly decreasing positive parts.
///
/// Indexes spheres, associates and irreducibles of the matching scheme.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Builds a partition from weakly decreasing positive parts.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidPartition("no parts".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!("zero part in {parts:?}")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!(
                "parts not weakly decreasing: {parts:?}"
            )));
        }
        Ok(Partition { parts })
    }

    /// Builds a partition from parts in any order.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Result<Self> {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// The integer being partitioned.
    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of parts, l(λ).
    pub fn num_parts(&self) -> usize {
        self.parts.len()
    }

    /// The largest part λ_1.
    pub fn first_part(&self) -> usize {
        self.parts[0]
    }

    /// Depth d(λ) = n − λ_1, the number of cells below the first row.
    pub fn depth(&self) -> usize {
        self.n() - self.first_part()
    }

    pub fn has_part_one(&self) -> bool {
        *self.parts.last().unwrap() == 1
    }

    /// The partition 2λ = (2λ_1, 2λ_2, ...).
    pub fn doubled(&self) -> Partition {
        Partition {
            parts: self.parts.iter().map(|&p| 2 * p).collect(),
        }
    }

    /// Part sizes with multiplicities, largest part first.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// Column heights of the Young diagram (the conjugate partition).
    pub fn conjugate(&self) -> Partition {
        let cols = self.parts[0];
        let parts = (0..cols)
            .map(|j| self.parts.iter().filter(|&&p| p > j).count())
            .collect();
        Partition { parts }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts "[3,1,1]" or "3,1,1".
impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('[').trim_end_matches(']');
        let parts = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad part {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// All partitions of n in reverse lexicographic order: `(n)` first,
/// `(1^n)` last. The order is stable and is the canonical index order
/// for every matrix and file format in this crate.
pub fn partitions_of(n: usize) -> Result<Vec<Partition>> {
    if n == 0 || n > MAX_PARTITION_N {
        return Err(Error::OutOfRange {
            what: "n for partitions_of",
            value: n as i64,
            min: 1,
            max: MAX_PARTITION_N as i64,
        });
    }
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(remaining: usize, max_part: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for p in (1..=max_part.min(remaining)).rev() {
            cur.push(p);
            rec(remaining - p, p, cur, out);
            cur.pop();
        }
    }
    rec(n, n, &mut cur, &mut out);
    Ok(out)
}

/// The canonical partition list for one n with O(1) position lookup.
#[derive(Clone, Debug)]
pub struct PartitionIndex {
    n: usize,
    list: Vec<Partition>,
    pos: HashMap<Partition, usize>,
}

impl PartitionIndex {
    pub fn new(n: usize) -> Result<Self> {
        let list = partitions_of(n)?;
        let pos = list
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        Ok(PartitionIndex { n, list, pos })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn list(&self) -> &[Partition] {
        &self.list
    }

    pub fn get(&self, i: usize) -> &Partition {
        &self.list[i]
    }

    pub fn position(&self, lam: &Partition) -> Option<usize> {
        self.pos.get(lam).copied()
    }

    /// Indices of partitions with no part equal to 1 (the derangement set Λ).
    pub fn no_part_one(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| !self.list[i].has_part_one())
            .collect()
    }
}

pub fn factorial(k: usize) -> BigUint {
    let mut out = BigUint::one();
    for i in 2..=k {
        out *= BigUint::from(i);
    }
    out
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut out = BigUint::one();
    for i in 0..k.min(n - k) {
        out = out * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    out
}

/// k!! for odd k ≥ 1, with the boundary conventions (−1)!! = 0!! = 1.
///
/// Positive even arguments (and anything below −1) are rejected.
pub fn double_factorial(k: i64) -> Result<BigUint> {
    if k == -1 || k == 0 {
        return Ok(BigUint::one());
    }
    if k < -1 || k % 2 == 0 {
        return Err(Error::BadDoubleFactorial(k));
    }
    let mut out = BigUint::one();
    let mut i = 1i64;
    while i <= k {
        out *= BigUint::from(i as u64);
        i += 2;
    }
    Ok(out)
}

/// |M_2n| = (2n−1)!!, the number of perfect matchings of K_2n.
pub fn matchings_count(n: usize) -> BigUint {
    double_factorial(2 * n as i64 - 1).expect("2n-1 is odd")
}

/// |H_k| = 2^k k!, the order of the hyperoctahedral group S_2 ≀ S_k.
pub fn hyperoctahedral_order(k: usize) -> BigUint {
    (BigUint::one() << k) * factorial(k)
}

/// z_λ = ∏ i^{m_i} m_i! over part sizes i with multiplicity m_i.
pub fn z_lambda(lam: &Partition) -> BigUint {
    let mut out = BigUint::one();
    for (part, mult) in lam.multiplicities() {
        out *= BigUint::from(part).pow(mult as u32) * factorial(mult);
    }
    out
}

/// !!n, the number of matchings that are derangements of a fixed matching,
/// by the recurrence !!n = 2(n−1)(!!(n−1) + !!(n−2)) with !!0 = 1, !!1 = 0.
///
/// For n ≥ 2 this is the degree of the matching derangement graph.
pub fn matching_derangement_count(n: usize) -> BigUint {
    let mut prev = BigUint::one(); // !!0
    if n == 0 {
        return prev;
    }
    let mut cur = BigUint::zero(); // !!1
    for m in 2..=n {
        let next = BigUint::from(2 * (m - 1)) * (&cur + &prev);
        prev = cur;
        cur = next;
    }
    cur
}

/// Dimension of the Specht module of shape μ via the hook-length formula:
/// m! / ∏ hooks. Equals the number of standard Young tableaux of shape μ.
pub fn specht_dimension(mu: &Partition) -> Result<BigUint> {
    let m = mu.n();
    if m > MAX_SPECHT_M {
        return Err(Error::OutOfRange {
            what: "|mu| for specht_dimension",
            value: m as i64,
            min: 1,
            max: MAX_SPECHT_M as i64,
        });
    }
    let conj = mu.conjugate();
    let mut hooks = BigUint::one();
    for (i, &row) in mu.parts().iter().enumerate() {
        for j in 0..row {
            let arm = row - j - 1;
            let leg = conj.parts()[j] - i - 1;
            hooks *= BigUint::from(arm + leg + 1);
        }
    }
    let num = factorial(m);
    let (q, r) = num.div_rem(&hooks);
    if !r.is_zero() {
        return Err(Error::InexactDivision(format!(
            "hook-length formula for {mu}"
        )));
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    /// Independent oracle: p(n) by the pentagonal-number recurrence.
    fn partition_count_pentagonal(n: usize) -> u64 {
        let mut p = vec![0i64; n + 1];
        p[0] = 1;
        for i in 1..=n {
            let mut sum = 0i64;
            let mut k = 1i64;
            loop {
                let g1 = (k * (3 * k - 1) / 2) as usize;
                if g1 > i {
                    break;
                }
                let sign = if k % 2 == 1 { 1 } else { -1 };
                sum += sign * p[i - g1];
                let g2 = (k * (3 * k + 1) / 2) as usize;
                if g2 <= i {
                    sum += sign * p[i - g2];
                }
                k += 1;
            }
            p[i] = sum;
        }
        p[n] as u64
    }

    #[test]
    fn partitions_of_4_in_reverse_lex_order() {
        let got = partitions_of(4).unwrap();
        let want = vec![
            pt(&[4]),
            pt(&[3, 1]),
            pt(&[2, 2]),
            pt(&[2, 1, 1]),
            pt(&[1, 1, 1, 1]),
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn partitions_of_1() {
        assert_eq!(partitions_of(1).unwrap(), vec![pt(&[1])]);
    }

    #[test]
    fn partitions_of_7_has_15_entries() {
        assert_eq!(partitions_of(7).unwrap().len(), 15);
        assert_eq!(partition_count_pentagonal(7), 15);
    }

    #[test]
    fn partitions_are_a_bijection() {
        for n in 1..=MAX_PARTITION_N {
            let all = partitions_of(n).unwrap();
            assert_eq!(all.len() as u64, partition_count_pentagonal(n));
            let mut seen = std::collections::HashSet::new();
            for lam in &all {
                assert_eq!(lam.n(), n, "{lam} does not sum to {n}");
                assert!(seen.insert(lam.clone()), "duplicate {lam}");
            }
            // Strictly decreasing in reverse-lex order.
            for w in all.windows(2) {
                assert!(w[0].parts() > w[1].parts());
            }
        }
    }

    #[test]
    fn partitions_of_range_errors() {
        assert!(partitions_of(0).is_err());
        assert!(partitions_of(13).is_err());
    }

    #[test]
    fn double_factorial_examples() {
        assert_eq!(double_factorial(7).unwrap(), BigUint::from(105u32));
        assert_eq!(double_factorial(-1).unwrap(), BigUint::one());
        assert_eq!(double_factorial(0).unwrap(), BigUint::one());
        // Repeated-multiplication oracle for 13!!.
        let mut oracle = 1u64;
        for i in (1..=13u64).step_by(2) {
            oracle *= i;
        }
        assert_eq!(oracle, 135135);
        assert_eq!(double_factorial(13).unwrap(), BigUint::from(oracle));
        assert!(double_factorial(4).is_err());
        assert!(double_factorial(-3).is_err());
    }

    #[test]
    fn hyperoctahedral_orders() {
        assert_eq!(hyperoctahedral_order(3), BigUint::from(48u32));
        assert_eq!(hyperoctahedral_order(0), BigUint::one());
        assert_eq!(hyperoctahedral_order(4), BigUint::from(384u32));
    }

    #[test]
    fn z_lambda_examples() {
        assert_eq!(z_lambda(&pt(&[2, 1, 1])), BigUint::from(4u32));
        for n in 1..=8 {
            assert_eq!(z_lambda(&pt(&[n])), BigUint::from(n));
        }
        assert_eq!(z_lambda(&pt(&[3, 3, 1])), BigUint::from(18u32));
    }

    /// z_λ cross-check: the number of permutations in S_7 with cycle type
    /// (3,3,1) must be 7!/z_(3,3,1). Brute force over all 5040 permutations.
    #[test]
    fn z_lambda_counts_conjugacy_class_sizes() {
        fn cycle_type_of_perm(perm: &[usize]) -> Vec<usize> {
            let n = perm.len();
            let mut seen = vec![false; n];
            let mut parts = Vec::new();
            for s in 0..n {
                if seen[s] {
                    continue;
                }
                let mut len = 0;
                let mut v = s;
                while !seen[v] {
                    seen[v] = true;
                    v = perm[v];
                    len += 1;
                }
                parts.push(len);
            }
            parts.sort_unstable_by(|a, b| b.cmp(a));
            parts
        }

        let mut indices: Vec<usize> = (0..7).collect();
        let mut count = 0u64;
        // Heap's algorithm.
        fn heap(k: usize, a: &mut Vec<usize>, count: &mut u64) {
            if k == 1 {
                if cycle_type_of_perm(a) == vec![3, 3, 1] {
                    *count += 1;
                }
                return;
            }
            for i in 0..k {
                heap(k - 1, a, count);
                if k.is_multiple_of(2) {
                    a.swap(i, k - 1);
                } else {
                    a.swap(0, k - 1);
                }
            }
        }
        heap(7, &mut indices, &mut count);
        let expected = factorial(7) / z_lambda(&pt(&[3, 3, 1]));
        assert_eq!(BigUint::from(count), expected);
        assert_eq!(count, 280);
    }

    #[test]
    fn matching_derangement_counts() {
        let want: [u64; 7] = [1, 0, 2, 8, 60, 544, 6040];
        for (n, w) in want.iter().enumerate() {
            assert_eq!(matching_derangement_count(n), BigUint::from(*w));
        }
    }

    #[test]
    fn matching_derangement_count_divisibility() {
        // Needed so the conjectured least eigenvalue −!!n/(2(n−1)) is integral.
        for n in 2..=10usize {
            let d = matching_derangement_count(n);
            assert!((&d % BigUint::from(2u32)).is_zero(), "!!{n} odd");
            assert!(
                (&d % BigUint::from(2 * (n - 1))).is_zero(),
                "2(n-1) does not divide !!{n}"
            );
        }
    }

    #[test]
    fn specht_dimension_one_row() {
        assert_eq!(specht_dimension(&pt(&[6])).unwrap(), BigUint::one());
    }

    /// Brute-force oracle: count standard Young tableaux of a shape by
    /// placing 1..m greedily in all row/column-increasing ways.
    fn syt_count(shape: &[usize]) -> u64 {
        fn rec(shape: &[usize], fill: &mut Vec<usize>, next: usize, m: usize) -> u64 {
            if next == m {
                return 1;
            }
            let mut total = 0;
            for (r, &row) in shape.iter().enumerate() {
                let used = fill[r];
                if used < row && (r == 0 || fill[r - 1] > used) {
                    fill[r] += 1;
                    total += rec(shape, fill, next + 1, m);
                    fill[r] -= 1;
                }
            }
            total
        }
        let m: usize = shape.iter().sum();
        rec(shape, &mut vec![0; shape.len()], 0, m)
    }

    #[test]
    fn specht_dimension_matches_syt_enumeration() {
        assert_eq!(syt_count(&[4, 2]), 9);
        assert_eq!(specht_dimension(&pt(&[4, 2])).unwrap(), BigUint::from(9u32));
        for shape in [vec![3, 2, 1], vec![2, 2, 2], vec![5, 1], vec![4, 4]] {
            let lam = pt(&shape);
            assert_eq!(
                specht_dimension(&lam).unwrap(),
                BigUint::from(syt_count(&shape)),
                "shape {lam}"
            );
        }
    }

    /// Thrall dimension count: Σ_{λ⊢n} dim S^{2λ} = (2n−1)!!.
    #[test]
    fn doubled_specht_dimensions_sum_to_matchings_count() {
        for n in 1..=7 {
            let sum: BigUint = partitions_of(n)
                .unwrap()
                .iter()
                .map(|lam| specht_dimension(&lam.doubled()).unwrap())
                .sum();
            assert_eq!(sum, matchings_count(n), "n = {n}");
        }
        // The spec's worked instance: Σ_{λ⊢4} dim S^{2λ} = 7!! = 105.
        let sum4: BigUint = partitions_of(4)
            .unwrap()
            .iter()
            .map(|lam| specht_dimension(&lam.doubled()).unwrap())
            .sum();
        assert_eq!(sum4, BigUint::from(105u32));
    }

    /// Sphere sizes partition M_2n: Σ_λ |H_n| / (2^l(λ) z_λ) = (2n−1)!!.
    #[test]
    fn sphere_size_formula_sums_to_matchings_count() {
        for n in 1..=7 {
            let h = hyperoctahedral_order(n);
            let mut sum = BigUint::zero();
            for lam in partitions_of(n).unwrap() {
                let denom = (BigUint::one() << lam.num_parts()) * z_lambda(&lam);
                let (q, r) = h.div_rem(&denom);
                assert!(r.is_zero(), "inexact sphere size for {lam}");
                sum += q;
            }
            assert_eq!(sum, matchings_count(n), "n = {n}");
        }
    }

    #[test]
    fn partition_display_parse_roundtrip() {
        for n in 1..=8 {
            for lam in partitions_of(n).unwrap() {
                let s = lam.to_string();
                let back: Partition = s.parse().unwrap();
                assert_eq!(back, lam);
            }
        }
    }

    #[test]
    fn conjugate_and_depth() {
        let lam = pt(&[4, 2, 1]);
        assert_eq!(lam.conjugate(), pt(&[3, 2, 1, 1]));
        assert_eq!(lam.depth(), 3);
        assert_eq!(pt(&[5]).depth(), 0);
    }
}
