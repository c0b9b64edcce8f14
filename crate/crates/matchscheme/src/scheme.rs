//! The matching association scheme: sphere sizes (degrees), intersection
//! numbers p_ij^k, and verification of the scheme axioms.
//!
//! All algebra above n = 5 routes through the intersection-number tensor
//! (the Bose–Mesner coefficients); dense (2n−1)!! × (2n−1)!! matrices are
//! only ever built for n ≤ 5.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::combinatorics::{
    hyperoctahedral_order, matchings_count, z_lambda, Partition, PartitionIndex,
};
use crate::error::{Error, Result};
use crate::exec;
use crate::linalg::IntMat;
use crate::matching::{enumerate, Matching, MAX_ENUM_N};
use crate::report::VerificationReport;

/// k_λ = |Ω_λ| = |H_n| / (2^l(λ) z_λ). The division must be exact.
pub fn sphere_size(lam: &Partition) -> Result<BigUint> {
    let n = lam.n();
    let denom = (BigUint::one() << lam.num_parts()) * z_lambda(lam);
    let (q, r) = hyperoctahedral_order(n).div_rem(&denom);
    if !r.is_zero() {
        return Err(Error::InexactDivision(format!("sphere size of {lam}")));
    }
    Ok(q)
}

/// Sphere sizes for all λ ⊢ n in canonical order.
#[derive(Clone, Debug)]
pub struct SphereSizes {
    parts: PartitionIndex,
    sizes: Vec<BigUint>,
}

impl SphereSizes {
    pub fn compute(n: usize) -> Result<Self> {
        let parts = PartitionIndex::new(n)?;
        let sizes = parts
            .list()
            .iter()
            .map(sphere_size)
            .collect::<Result<Vec<_>>>()?;
        let total: BigUint = sizes.iter().sum();
        if total != matchings_count(n) {
            return Err(Error::Consistency(format!(
                "sphere sizes sum to {total}, expected (2n-1)!! for n={n}"
            )));
        }
        Ok(SphereSizes { parts, sizes })
    }

    pub fn n(&self) -> usize {
        self.parts.n()
    }

    pub fn parts(&self) -> &PartitionIndex {
        &self.parts
    }

    pub fn size(&self, i: usize) -> &BigUint {
        &self.sizes[i]
    }

    pub fn sizes(&self) -> &[BigUint] {
        &self.sizes
    }

    pub fn size_of(&self, lam: &Partition) -> Option<&BigUint> {
        self.parts.position(lam).map(|i| &self.sizes[i])
    }
}

/// The canonical matching at cycle type λ from the identity: realizes each
/// part p on its own block of 2p consecutive vertices by shifting the block
/// pairing one step around the block cycle. Deterministic.
pub fn representative(lam: &Partition) -> Result<Matching> {
    let n = lam.n();
    let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(n);
    let mut offset = 1usize; // 1-based
    for &p in lam.parts() {
        let block: Vec<usize> = (offset..offset + 2 * p).collect();
        if p == 1 {
            pairs.push((block[0], block[1]));
        } else {
            for i in 0..p - 1 {
                pairs.push((block[2 * i + 1], block[2 * i + 2]));
            }
            pairs.push((block[2 * p - 1], block[0]));
        }
        offset += 2 * p;
    }
    Matching::from_pairs(n, &pairs)
}

/// All matchings m′ with d(m, m′) = λ, by scan. Exactly k_λ of them.
pub fn neighbors(m: &Matching, lam: &Partition) -> Result<Vec<Matching>> {
    let n = m.n();
    if lam.n() != n {
        return Err(Error::WrongPartitionSum {
            partition: lam.to_string(),
            expected: n,
        });
    }
    let mut out = Vec::new();
    for cand in enumerate(n)? {
        if &m.cycle_type(&cand)? == lam {
            out.push(cand);
        }
    }
    Ok(out)
}

/// The intersection-number tensor p_ij^k of the matching scheme, indexed by
/// three partitions of n in canonical order.
#[derive(Clone, Debug)]
pub struct IntersectionNumbers {
    parts: PartitionIndex,
    degrees: Vec<u64>,
    p: Vec<u64>,
}

impl IntersectionNumbers {
    /// Computes the tensor by a parallel scan over all matchings:
    /// p_ij^k = #{z : d(e,z) = i, d(z,y_k) = j} for the canonical
    /// representative y_k of sphere k. Row sums and tensor symmetry are
    /// verified before returning.
    pub fn compute(n: usize) -> Result<Self> {
        let reps: Vec<Matching> = PartitionIndex::new(n)?
            .list()
            .iter()
            .map(representative)
            .collect::<Result<Vec<_>>>()?;
        Self::compute_with_reps(n, &reps)
    }

    fn compute_with_reps(n: usize, reps: &[Matching]) -> Result<Self> {
        if n > MAX_ENUM_N {
            return Err(Error::OutOfRange {
                what: "n for intersection_numbers",
                value: n as i64,
                min: 1,
                max: MAX_ENUM_N as i64,
            });
        }
        let parts = PartitionIndex::new(n)?;
        let np = parts.len();
        let e = Matching::identity(n)?;
        // Check the representatives really sit on their spheres.
        for (k, y) in reps.iter().enumerate() {
            let d = e.cycle_type(y)?;
            if parts.position(&d) != Some(k) {
                return Err(Error::SchemeViolation(format!(
                    "representative for sphere {} has cycle type {d}",
                    parts.get(k)
                )));
            }
        }
        let tally = exec::fold_matchings(
            n,
            || vec![0u64; np * np * np],
            |acc, _r, z| {
                let i = parts
                    .position(&e.cycle_type(z).expect("same n"))
                    .expect("cycle type is a partition of n");
                for (k, y) in reps.iter().enumerate() {
                    let j = parts
                        .position(&z.cycle_type(y).expect("same n"))
                        .expect("cycle type is a partition of n");
                    acc[(i * np + j) * np + k] += 1;
                }
            },
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        )?;
        let sizes = SphereSizes::compute(n)?;
        let degrees: Vec<u64> = sizes
            .sizes()
            .iter()
            .map(|s| s.to_u64().expect("sphere size fits u64 for n <= 7"))
            .collect();
        let out = IntersectionNumbers {
            parts,
            degrees,
            p: tally,
        };
        out.verify_internal()?;
        Ok(out)
    }

    /// Recomputes the tensor with a different representative per sphere (the
    /// last matching of each sphere in rank order) and demands equality.
    /// This is the computational justification for fixing x = e and one y_k.
    pub fn verify_representative_independence(n: usize) -> Result<()> {
        if n > 5 {
            return Err(Error::OutOfRange {
                what: "n for representative independence",
                value: n as i64,
                min: 1,
                max: 5,
            });
        }
        let parts = PartitionIndex::new(n)?;
        let e = Matching::identity(n)?;
        let mut alt: Vec<Option<Matching>> = vec![None; parts.len()];
        for m in enumerate(n)? {
            let k = parts.position(&e.cycle_type(&m)?).unwrap();
            alt[k] = Some(m); // keeps the last one seen
        }
        let alt: Vec<Matching> = alt.into_iter().map(Option::unwrap).collect();
        let a = Self::compute(n)?;
        let b = Self::compute_with_reps(n, &alt)?;
        if a.p != b.p {
            return Err(Error::SchemeViolation(format!(
                "intersection numbers depend on the sphere representative at n={n}"
            )));
        }
        Ok(())
    }

    /// Rebuilds a tensor from parsed cache data, re-running the internal
    /// sanity checks (degrees from the sphere-size formula, symmetry,
    /// row sums). Used by the cache loader.
    pub(crate) fn from_raw(n: usize, p: Vec<u64>) -> Result<Self> {
        let parts = PartitionIndex::new(n)?;
        let np = parts.len();
        if p.len() != np * np * np {
            return Err(Error::Cache(format!(
                "tensor has {} entries, expected {}",
                p.len(),
                np * np * np
            )));
        }
        let sizes = SphereSizes::compute(n)?;
        let degrees: Vec<u64> = sizes
            .sizes()
            .iter()
            .map(|s| s.to_u64().expect("sphere size fits u64 for n <= 7"))
            .collect();
        let out = IntersectionNumbers { parts, degrees, p };
        out.verify_internal()?;
        Ok(out)
    }

    fn verify_internal(&self) -> Result<()> {
        let np = self.parts.len();
        for i in 0..np {
            for j in 0..np {
                for k in 0..np {
                    if self.get(i, j, k) != self.get(j, i, k) {
                        return Err(Error::SchemeViolation(format!(
                            "p[{i}][{j}][{k}] != p[{j}][{i}][{k}]"
                        )));
                    }
                }
            }
        }
        for i in 0..np {
            for k in 0..np {
                let total: u64 = (0..np).map(|j| self.get(i, j, k)).sum();
                if total != self.degrees[i] {
                    return Err(Error::SchemeViolation(format!(
                        "row sum over j of p[{i}][j][{k}] is {total}, expected k_{i}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.parts.n()
    }

    pub fn parts(&self) -> &PartitionIndex {
        &self.parts
    }

    /// Degrees k_λ as u64, canonical order.
    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> u64 {
        let np = self.parts.len();
        self.p[(i * np + j) * np + k]
    }

    /// The intersection matrix B_i with (B_i)_{kj} = p_ij^k, the matrix of
    /// multiplication by A_i on the Bose–Mesner basis.
    pub fn b_matrix(&self, i: usize) -> IntMat {
        let np = self.parts.len();
        IntMat::from_fn(np, np, |k, j| BigInt::from(self.get(i, j, k)))
    }
}

/// Sphere index of d(x, y) for every ordered pair of matchings; the dense
/// backing for associate matrices and idempotents. Gated to n ≤ 5.
#[derive(Clone)]
pub struct DistanceMatrix {
    n: usize,
    size: usize,
    parts: PartitionIndex,
    idx: Vec<u8>,
}

impl DistanceMatrix {
    pub fn compute(n: usize) -> Result<Self> {
        if n > 5 {
            return Err(Error::OutOfRange {
                what: "n for dense distance matrix",
                value: n as i64,
                min: 1,
                max: 5,
            });
        }
        let parts = PartitionIndex::new(n)?;
        let all: Vec<Matching> = enumerate(n)?.collect();
        let size = all.len();
        let rows = exec::par_map(size, |x| {
            let mut row = vec![0u8; size];
            for (y, other) in all.iter().enumerate() {
                let d = all[x].cycle_type(other).expect("same n");
                row[y] = parts.position(&d).expect("partition of n") as u8;
            }
            row
        });
        Ok(DistanceMatrix {
            n,
            size,
            parts,
            idx: rows.concat(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn parts(&self) -> &PartitionIndex {
        &self.parts
    }

    /// Sphere index of d(x, y) by rank.
    #[inline]
    pub fn get(&self, x: usize, y: usize) -> usize {
        self.idx[x * self.size + y] as usize
    }
}

/// Verifies the four defining axioms of the matching scheme.
///
/// Densely for n ≤ 4 (every product A_iA_j compared entrywise against
/// Σ_k p_ij^k A_k); via intersection-matrix products B_iB_j = Σ p_ij^k B_k
/// and pairwise commutation for n = 5, 6.
pub fn verify_scheme_axioms(n: usize) -> Result<VerificationReport> {
    if n == 0 || n > 6 {
        return Err(Error::OutOfRange {
            what: "n for verify_scheme_axioms",
            value: n as i64,
            min: 1,
            max: 6,
        });
    }
    let ints = IntersectionNumbers::compute(n)?;
    let claim = format!("scheme.axioms.n{n}");
    let mut witnesses: Vec<String> = Vec::new();

    if n <= 4 {
        witnesses.extend(dense_axiom_witnesses(&ints)?);
    }
    witnesses.extend(b_matrix_witnesses(&ints));

    let detail = if n <= 4 {
        "dense A-matrix verification plus intersection-matrix algebra"
    } else {
        "intersection-matrix verification (dense check gated to n <= 4)"
    };
    if witnesses.is_empty() {
        Ok(VerificationReport::pass(claim).with_detail(detail))
    } else {
        let mut r = VerificationReport::fail(claim, witnesses[0].clone()).with_detail(detail);
        for w in witnesses.into_iter().skip(1).take(9) {
            r = r.with_witness(w);
        }
        Ok(r)
    }
}

fn dense_axiom_witnesses(ints: &IntersectionNumbers) -> Result<Vec<String>> {
    let n = ints.n();
    let dm = DistanceMatrix::compute(n)?;
    let np = ints.parts().len();
    let size = dm.size();
    let id_idx = np - 1; // (1^n) is last in canonical order

    let row_witnesses = exec::par_map(size, |x| {
        let mut ws: Vec<String> = Vec::new();
        // Axioms 1-3: symmetry, identity associate, spheres partition rows.
        let mut counts = vec![0u64; np];
        for y in 0..size {
            let d = dm.get(x, y);
            counts[d] += 1;
            if d != dm.get(y, x) {
                ws.push(format!("asymmetric distance at pair ({x},{y})"));
            }
            if (d == id_idx) != (x == y) {
                ws.push(format!("identity associate wrong at ({x},{y})"));
            }
        }
        for (i, &c) in counts.iter().enumerate() {
            if c != ints.degrees()[i] {
                ws.push(format!(
                    "row {x} meets sphere {} {c} times, expected {}",
                    ints.parts().get(i),
                    ints.degrees()[i]
                ));
            }
        }
        // Axiom 4 densely: for every y, the z-profile must match the tensor.
        let mut profile = vec![0u64; np * np];
        for y in 0..size {
            profile.iter_mut().for_each(|v| *v = 0);
            for z in 0..size {
                profile[dm.get(x, z) * np + dm.get(z, y)] += 1;
            }
            let k = dm.get(x, y);
            for i in 0..np {
                for j in 0..np {
                    if profile[i * np + j] != ints.get(i, j, k) {
                        ws.push(format!(
                            "A_iA_j mismatch at (x,y)=({x},{y}), i={i}, j={j}: \
                             {} vs p={}",
                            profile[i * np + j],
                            ints.get(i, j, k)
                        ));
                    }
                }
            }
        }
        ws
    });
    Ok(row_witnesses.into_iter().flatten().take(10).collect())
}

fn b_matrix_witnesses(ints: &IntersectionNumbers) -> Vec<String> {
    let np = ints.parts().len();
    let bs: Vec<IntMat> = (0..np).map(|i| ints.b_matrix(i)).collect();
    let mut ws = Vec::new();
    for i in 0..np {
        for j in i..np {
            let prod = bs[i].mul(&bs[j]);
            if prod != bs[j].mul(&bs[i]) {
                ws.push(format!("B_{i} and B_{j} do not commute"));
            }
            let mut expect = IntMat::zeros(np, np);
            for k in 0..np {
                let c = BigInt::from(ints.get(i, j, k));
                for r in 0..np {
                    for s in 0..np {
                        let t = &c * &bs[k][(r, s)];
                        expect[(r, s)] += t;
                    }
                }
            }
            if prod != expect {
                ws.push(format!("B_{i}B_{j} != sum_k p^k B_k"));
            }
        }
    }
    ws
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::sphere_of;

    fn pt(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn sphere_size_closed_forms() {
        // λ = (n): |H_{n-1}| = 2^{n-1}(n-1)!.
        for n in 1..=8 {
            assert_eq!(
                sphere_size(&pt(&[n])).unwrap(),
                hyperoctahedral_order(n - 1)
            );
        }
        assert_eq!(sphere_size(&pt(&[3])).unwrap(), BigUint::from(8u32));
        // λ = (1^n): only e.
        for n in 1..=8 {
            assert_eq!(sphere_size(&pt(&vec![1; n])).unwrap(), BigUint::one());
        }
        assert_eq!(sphere_size(&pt(&[2, 1])).unwrap(), BigUint::from(6u32));
    }

    #[test]
    fn sphere_sizes_match_exhaustive_scan() {
        for n in 1..=5 {
            let sizes = SphereSizes::compute(n).unwrap();
            for (i, lam) in sizes.parts().list().iter().enumerate() {
                let scanned = sphere_of(lam, n).unwrap().len();
                assert_eq!(
                    BigUint::from(scanned),
                    *sizes.size(i),
                    "sphere {lam} at n={n}"
                );
            }
        }
    }

    #[test]
    fn representative_has_requested_cycle_type() {
        for n in 1..=7 {
            let e = Matching::identity(n).unwrap();
            for lam in crate::combinatorics::partitions_of(n).unwrap() {
                let y = representative(&lam).unwrap();
                assert_eq!(e.cycle_type(&y).unwrap(), lam);
            }
        }
    }

    #[test]
    fn neighbors_counts() {
        let e = Matching::identity(3).unwrap();
        let nb = neighbors(&e, &pt(&[1, 1, 1])).unwrap();
        assert_eq!(nb, vec![e.clone()]);
        assert_eq!(neighbors(&e, &pt(&[3])).unwrap().len(), 8);
        // Vertex transitivity: |neighbors(m, (n))| = |H_{n-1}| anywhere.
        let m = Matching::unrank(5, 600).unwrap();
        assert_eq!(
            BigUint::from(neighbors(&m, &pt(&[5])).unwrap().len()),
            hyperoctahedral_order(4)
        );
    }

    #[test]
    fn intersection_numbers_n3_examples() {
        let ints = IntersectionNumbers::compute(3).unwrap();
        let parts = ints.parts();
        let i3 = parts.position(&pt(&[3])).unwrap();
        let i21 = parts.position(&pt(&[2, 1])).unwrap();
        let iid = parts.position(&pt(&[1, 1, 1])).unwrap();
        assert_eq!(ints.get(i3, i3, iid), 8);
        assert_eq!(ints.get(i21, i21, iid), 6);
        assert_eq!(ints.get(i3, i3, i3), 4);
        // Row-sum sanity quoted in the same example.
        let row: u64 = (0..parts.len()).map(|j| ints.get(i3, j, i3)).sum();
        assert_eq!(row, 8);
    }

    #[test]
    fn triangle_identity() {
        // k_k p_ij^k = k_i p_kj^i.
        for n in 2..=5 {
            let ints = IntersectionNumbers::compute(n).unwrap();
            let np = ints.parts().len();
            for i in 0..np {
                for j in 0..np {
                    for k in 0..np {
                        assert_eq!(
                            ints.degrees()[k] * ints.get(i, j, k),
                            ints.degrees()[i] * ints.get(k, j, i),
                            "n={n} i={i} j={j} k={k}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn representative_independence_small() {
        for n in 2..=4 {
            IntersectionNumbers::verify_representative_independence(n).unwrap();
        }
    }

    #[test]
    fn axioms_pass_small() {
        for n in 2..=4 {
            let r = verify_scheme_axioms(n).unwrap();
            assert!(r.is_pass(), "axioms failed at n={n}: {r:?}");
        }
    }

    #[test]
    fn axioms_pass_via_b_matrices_n5() {
        let r = verify_scheme_axioms(5).unwrap();
        assert!(r.is_pass());
    }
}
