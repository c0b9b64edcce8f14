//! Perfect matchings of K_2n: representation, lexicographic enumeration,
//! ranking/unranking, cycle types of pairs and sphere decomposition.
//!
//! A matching is stored as a fixed-point-free involution `partner` on the
//! vertex set. Vertices are 0-based internally and 1-based in every piece
//! of I/O (pair lists, the canonical `"1-2|3-4"` text form, CLI output).
//!
//! The enumeration order is: repeatedly match the smallest unmatched vertex
//! to each larger unmatched vertex in ascending order. Ranks in that order
//! are load-bearing — family bitsets and cache files index by them.

use std::fmt;
use std::str::FromStr;

use crate::combinatorics::Partition;
use crate::error::{Error, Result};

/// Largest n for which matchings may be constructed at all.
pub const MAX_MATCHING_N: usize = 12;
/// Largest n for which full enumeration over (2n−1)!! matchings is allowed.
pub const MAX_ENUM_N: usize = 7;

/// (2k−1)!! for k = 0..=12; fits u64 ((23)!! ≈ 3.2e11).
const DOUBLE_FACTORIALS: [u64; 13] = {
    let mut t = [1u64; 13];
    let mut k = 1;
    while k <= 12 {
        t[k] = t[k - 1] * (2 * k as u64 - 1);
        k += 1;
    }
    t
};

/// A perfect matching of K_2n as a fixed-point-free involution.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matching {
    partner: Vec<u8>,
}

impl Matching {
    /// The identity matching e = 1~2 | 3~4 | ⋯ | 2n−1~2n.
    pub fn identity(n: usize) -> Result<Self> {
        check_n(n, MAX_MATCHING_N)?;
        let partner = (0..2 * n as u8).map(|v| v ^ 1).collect();
        Ok(Matching { partner })
    }

    /// Builds a matching from n disjoint pairs of 1-based vertices.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        check_n(n, MAX_MATCHING_N)?;
        if pairs.len() != n {
            return Err(Error::InvalidMatching(format!(
                "expected {n} pairs, got {}",
                pairs.len()
            )));
        }
        let mut partner = vec![u8::MAX; 2 * n];
        for &(a, b) in pairs {
            for v in [a, b] {
                if v == 0 || v > 2 * n {
                    return Err(Error::InvalidVertex {
                        vertex: v,
                        n,
                        max: 2 * n,
                    });
                }
            }
            if a == b {
                return Err(Error::InvalidMatching(format!("loop at vertex {a}")));
            }
            let (x, y) = (a - 1, b - 1);
            if partner[x] != u8::MAX || partner[y] != u8::MAX {
                return Err(Error::InvalidMatching(format!(
                    "vertex covered twice in pair ({a},{b})"
                )));
            }
            partner[x] = y as u8;
            partner[y] = x as u8;
        }
        Ok(Matching { partner })
    }

    pub fn n(&self) -> usize {
        self.partner.len() / 2
    }

    /// 0-based partner of a 0-based vertex.
    #[inline]
    pub fn partner(&self, v: usize) -> usize {
        self.partner[v] as usize
    }

    /// True if both matchings contain the 0-based edge (v, partner).
    #[inline]
    pub fn shares_edge_with(&self, other: &Matching) -> bool {
        self.partner
            .iter()
            .zip(&other.partner)
            .any(|(a, b)| a == b)
    }

    /// Number of common edges |m ∩ m′|.
    pub fn common_edges(&self, other: &Matching) -> usize {
        self.partner
            .iter()
            .zip(&other.partner)
            .filter(|(a, b)| a == b)
            .count()
            / 2
    }

    /// Canonical pair list: 1-based (min, max) pairs sorted by min.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.n());
        for v in 0..self.partner.len() {
            let w = self.partner(v);
            if v < w {
                out.push((v + 1, w + 1));
            }
        }
        out
    }

    /// Canonical text form "1-2|3-4|5-6".
    pub fn canonical_string(&self) -> String {
        self.pairs()
            .iter()
            .map(|(a, b)| format!("{a}-{b}"))
            .collect::<Vec<_>>()
            .join("|")
    }

    /// Relabels vertices: vertex v (0-based) becomes perm[v].
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let len = self.partner.len();
        if perm.len() != len {
            return Err(Error::InvalidMatching(format!(
                "permutation length {} != {len}",
                perm.len()
            )));
        }
        let mut partner = vec![u8::MAX; len];
        for v in 0..len {
            partner[perm[v]] = perm[self.partner(v)] as u8;
        }
        Ok(Matching { partner })
    }

    /// Cycle type d(m, m′): the partition of n given by the even cycles of
    /// the multigraph union m ∪ m′, each length halved. A shared edge is a
    /// doubled edge (a 2-cycle) and contributes a part 1, so d(m, m) = (1^n).
    pub fn cycle_type(&self, other: &Matching) -> Result<Partition> {
        if self.n() != other.n() {
            return Err(Error::SizeMismatch(self.n(), other.n()));
        }
        let len = self.partner.len();
        let mut seen = vec![false; len];
        let mut parts = Vec::new();
        for start in 0..len {
            if seen[start] {
                continue;
            }
            // Alternate edges of self and other; each loop step consumes one
            // edge of each, so every closed cycle has even length (Berge).
            let mut v = start;
            let mut half_len = 0usize;
            loop {
                let w = self.partner(v);
                debug_assert!(!seen[v] && !seen[w]);
                seen[v] = true;
                seen[w] = true;
                half_len += 1;
                let u = other.partner(w);
                if u == start {
                    break;
                }
                v = u;
            }
            parts.push(half_len);
        }
        Partition::from_unsorted(parts)
    }

    /// Rank of this matching in the lexicographic enumeration.
    pub fn rank(&self) -> u64 {
        let n = self.n();
        let mut remaining: Vec<usize> = (0..2 * n).collect();
        let mut rank = 0u64;
        for step in 0..n {
            let v = remaining[0];
            let w = self.partner(v);
            let digit = remaining.iter().position(|&x| x == w).unwrap() - 1;
            rank += digit as u64 * DOUBLE_FACTORIALS[n - step - 1];
            remaining.retain(|&x| x != v && x != w);
        }
        rank
    }

    /// Inverse of [`Matching::rank`].
    pub fn unrank(n: usize, rank: u64) -> Result<Self> {
        check_n(n, MAX_MATCHING_N)?;
        let count = DOUBLE_FACTORIALS[n];
        if rank >= count {
            return Err(Error::RankOutOfRange { n, rank, count });
        }
        let mut remaining: Vec<u8> = (0..2 * n as u8).collect();
        let mut partner = vec![u8::MAX; 2 * n];
        let mut r = rank;
        for step in 0..n {
            let base = DOUBLE_FACTORIALS[n - step - 1];
            let digit = (r / base) as usize;
            r %= base;
            let v = remaining[0];
            let w = remaining[digit + 1];
            partner[v as usize] = w;
            partner[w as usize] = v;
            remaining.retain(|&x| x != v && x != w);
        }
        Ok(Matching { partner })
    }

    /// (2n−1)!! as u64 (valid for every constructible n).
    pub fn count(n: usize) -> Result<u64> {
        check_n(n, MAX_MATCHING_N)?;
        Ok(DOUBLE_FACTORIALS[n])
    }

    /// Count gated to enumerable sizes.
    pub fn enumerable_count(n: usize) -> Result<u64> {
        check_n(n, MAX_ENUM_N)?;
        Ok(DOUBLE_FACTORIALS[n])
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_string())
    }
}

impl fmt::Debug for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Matching {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for chunk in s.trim().split('|') {
            let (a, b) = chunk
                .split_once('-')
                .ok_or_else(|| Error::Parse(format!("bad pair {chunk:?}")))?;
            let a = a
                .trim()
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("bad vertex {a:?}: {e}")))?;
            let b = b
                .trim()
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("bad vertex {b:?}: {e}")))?;
            pairs.push((a, b));
        }
        Matching::from_pairs(pairs.len(), &pairs)
    }
}

fn check_n(n: usize, max: usize) -> Result<()> {
    if n == 0 || n > max {
        return Err(Error::OutOfRange {
            what: "n",
            value: n as i64,
            min: 1,
            max: max as i64,
        });
    }
    Ok(())
}

/// Streams all (2n−1)!! matchings in rank order without materializing them.
pub fn enumerate(n: usize) -> Result<impl Iterator<Item = Matching>> {
    check_n(n, MAX_ENUM_N)?;
    let count = DOUBLE_FACTORIALS[n];
    Ok((0..count).map(move |r| Matching::unrank(n, r).expect("rank in range")))
}

/// Ranks of all matchings at cycle type λ from the identity (the λ-sphere
/// Ω_λ), ascending. Size must match the sphere-size formula.
pub fn sphere_of(lam: &Partition, n: usize) -> Result<Vec<u64>> {
    check_n(n, MAX_ENUM_N)?;
    if lam.n() != n {
        return Err(Error::WrongPartitionSum {
            partition: lam.to_string(),
            expected: n,
        });
    }
    let e = Matching::identity(n)?;
    let mut out = Vec::new();
    for (r, m) in enumerate(n)?.enumerate() {
        if &e.cycle_type(&m)? == lam {
            out.push(r as u64);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::partitions_of;

    fn pt(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn identity_matching_pairs() {
        assert_eq!(
            Matching::identity(2).unwrap().pairs(),
            vec![(1, 2), (3, 4)]
        );
        assert_eq!(Matching::identity(1).unwrap().pairs(), vec![(1, 2)]);
        assert_eq!(
            Matching::identity(4).unwrap().pairs(),
            vec![(1, 2), (3, 4), (5, 6), (7, 8)]
        );
        assert!(Matching::identity(0).is_err());
        assert!(Matching::identity(13).is_err());
    }

    #[test]
    fn enumeration_first_last_and_count() {
        let all: Vec<Matching> = enumerate(3).unwrap().collect();
        assert_eq!(all.len(), 15);
        assert_eq!(all[0].canonical_string(), "1-2|3-4|5-6");
        assert_eq!(all[14].canonical_string(), "1-6|2-5|3-4");
        let one: Vec<Matching> = enumerate(1).unwrap().collect();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].canonical_string(), "1-2");
        assert_eq!(enumerate(5).unwrap().count(), 945);
    }

    #[test]
    fn every_enumerated_matching_is_a_fixed_point_free_involution() {
        for m in enumerate(4).unwrap() {
            for v in 0..8 {
                assert_ne!(m.partner(v), v);
                assert_eq!(m.partner(m.partner(v)), v);
            }
        }
    }

    #[test]
    fn rank_of_identity_is_zero() {
        for n in 1..=6 {
            assert_eq!(Matching::identity(n).unwrap().rank(), 0);
        }
    }

    #[test]
    fn unrank_last_element() {
        let m = Matching::unrank(3, 14).unwrap();
        assert_eq!(m.canonical_string(), "1-6|2-5|3-4");
        assert!(Matching::unrank(3, 15).is_err());
    }

    #[test]
    fn exhaustive_rank_unrank_roundtrip_n5() {
        for (r, m) in enumerate(5).unwrap().enumerate() {
            assert_eq!(m.rank(), r as u64);
            assert_eq!(Matching::unrank(5, r as u64).unwrap(), m);
        }
    }

    #[test]
    fn cycle_type_figure_examples() {
        // n = 4: m = 2~3|4~5|6~7|1~8 against e has type (4).
        let e = Matching::identity(4).unwrap();
        let m = Matching::from_pairs(4, &[(2, 3), (4, 5), (6, 7), (1, 8)]).unwrap();
        assert_eq!(e.cycle_type(&m).unwrap(), pt(&[4]));
        // m′ = 1~2|3~8|4~7|5~6 has type (2,1,1).
        let m2 = Matching::from_pairs(4, &[(1, 2), (3, 8), (4, 7), (5, 6)]).unwrap();
        assert_eq!(e.cycle_type(&m2).unwrap(), pt(&[2, 1, 1]));
        // d(m, m) = (1^n).
        assert_eq!(m.cycle_type(&m).unwrap(), pt(&[1, 1, 1, 1]));
    }

    #[test]
    fn cycle_type_size_mismatch() {
        let a = Matching::identity(3).unwrap();
        let b = Matching::identity(4).unwrap();
        assert!(a.cycle_type(&b).is_err());
    }

    #[test]
    fn cycle_type_symmetry_on_random_pairs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xD15C0);
        let count = Matching::count(6).unwrap();
        for _ in 0..10_000 {
            let x = Matching::unrank(6, rng.gen_range(0..count)).unwrap();
            let y = Matching::unrank(6, rng.gen_range(0..count)).unwrap();
            let d = x.cycle_type(&y).unwrap();
            assert_eq!(d, y.cycle_type(&x).unwrap());
            assert_eq!(d.n(), 6);
        }
    }

    #[test]
    fn cycle_type_is_relabeling_invariant() {
        use rand::{seq::SliceRandom, Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xBADB0);
        let count = Matching::count(5).unwrap();
        for _ in 0..200 {
            let x = Matching::unrank(5, rng.gen_range(0..count)).unwrap();
            let y = Matching::unrank(5, rng.gen_range(0..count)).unwrap();
            let mut perm: Vec<usize> = (0..10).collect();
            perm.shuffle(&mut rng);
            let xs = x.relabel(&perm).unwrap();
            let ys = y.relabel(&perm).unwrap();
            assert_eq!(x.cycle_type(&y).unwrap(), xs.cycle_type(&ys).unwrap());
        }
    }

    #[test]
    fn spheres_partition_all_matchings() {
        for n in 1..=5 {
            let mut seen = vec![false; Matching::count(n).unwrap() as usize];
            let mut total = 0usize;
            for lam in partitions_of(n).unwrap() {
                let sphere = sphere_of(&lam, n).unwrap();
                for &r in &sphere {
                    assert!(!seen[r as usize], "rank {r} in two spheres");
                    seen[r as usize] = true;
                }
                total += sphere.len();
            }
            assert_eq!(total as u64, Matching::count(n).unwrap());
        }
    }

    #[test]
    fn sphere_examples_n3() {
        let id_sphere = sphere_of(&pt(&[1, 1, 1]), 3).unwrap();
        assert_eq!(id_sphere, vec![0]);
        assert_eq!(sphere_of(&pt(&[3]), 3).unwrap().len(), 8);
        assert_eq!(sphere_of(&pt(&[2, 1]), 3).unwrap().len(), 6);
    }

    #[test]
    fn canonical_string_roundtrip() {
        for m in enumerate(4).unwrap().step_by(7) {
            let s = m.canonical_string();
            let back: Matching = s.parse().unwrap();
            assert_eq!(back, m);
        }
        assert!("1-2|3-3".parse::<Matching>().is_err());
        assert!("1-2|3-4|1-5".parse::<Matching>().is_err());
    }
}
