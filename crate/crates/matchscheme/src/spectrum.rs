//! Character table p_μ(λ), multiplicities m_λ, zonal spherical values
//! ω_λ^μ = p_μ(λ)/k_μ and primitive idempotents E_λ of the matching scheme.
//!
//! The table is computed from the intersection numbers alone: the columns
//! of P are the common eigenvectors of the transposed intersection matrices
//! B_μ^T, found by iteratively splitting eigenspaces in canonical partition
//! order. Eigenvalues are extracted as integer roots of exact characteristic
//! polynomials — if one fails to be an integer the computation refuses the
//! instance instead of approximating. Columns are labeled by the pair
//! (multiplicity, value on the (n)-sphere); the closed-form product rule for
//! ω_λ^{(n)} is the independent cross-check on the whole eigen-computation.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::combinatorics::{
    hyperoctahedral_order, matchings_count, specht_dimension, Partition, PartitionIndex,
};
use crate::error::{Error, Result};
use crate::linalg::{char_poly, integer_roots_within, Rat, RatMat};
use crate::report::VerificationReport;
use crate::scheme::{DistanceMatrix, IntersectionNumbers};

/// ω_λ^{(n)} by the product formula: over all cells of λ at 0-based row i,
/// column j except the corner (0,0), multiply (2j − i); divide by |H_{n−1}|.
/// Zero exactly when λ contains the cell (2,1), i.e. covers (2,2,2).
pub fn zonal_n_sphere(lam: &Partition) -> Rat {
    let n = lam.n();
    let mut num = BigInt::one();
    for (i, &row) in lam.parts().iter().enumerate() {
        for j in 0..row {
            if i == 0 && j == 0 {
                continue;
            }
            num *= BigInt::from(2 * j as i64 - i as i64);
        }
    }
    Rat::new(num, BigInt::from(hyperoctahedral_order(n - 1)))
}

/// The character table of the matching scheme at one n.
///
/// Rows are associates μ and columns irreducibles λ, both in canonical
/// partition order; entry (μ, λ) is the eigenvalue p_μ(λ) of A_μ on the
/// common eigenspace λ.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    parts: PartitionIndex,
    degrees: Vec<u64>,
    p: Vec<BigInt>,
    mults: Vec<BigUint>,
}

impl CharacterTable {
    pub fn compute(n: usize) -> Result<Self> {
        let ints = IntersectionNumbers::compute(n)?;
        Self::compute_from(&ints)
    }

    pub fn compute_from(ints: &IntersectionNumbers) -> Result<Self> {
        let parts = ints.parts().clone();
        let np = parts.len();
        let n = parts.n();
        let count = matchings_count(n);

        let raw_columns = joint_eigenbasis(ints)?;

        // Normalize so the (1^n)-coordinate is 1; entries are then the
        // integer eigenvalues p_μ(λ) down the column.
        let id_idx = np - 1;
        let mut columns: Vec<Vec<BigInt>> = Vec::with_capacity(np);
        for col in raw_columns {
            let norm = col[id_idx].clone();
            if norm.is_zero() {
                return Err(Error::Consistency(
                    "joint eigenvector vanishes at the identity coordinate".into(),
                ));
            }
            let mut out = Vec::with_capacity(np);
            for v in col {
                let q = v / &norm;
                if !q.is_integer() {
                    return Err(Error::NonIntegerEigenvalue(format!(
                        "normalized eigenvector entry {q} at n={n}"
                    )));
                }
                out.push(q.to_integer());
            }
            columns.push(out);
        }

        // Multiplicities from column orthogonality: m = N!! / Σ_μ p²/k_μ.
        let mut mults_raw: Vec<BigUint> = Vec::with_capacity(np);
        for col in &columns {
            let mut denom = Rat::zero();
            for (mu, v) in col.iter().enumerate() {
                denom += Rat::new(v * v, BigInt::from(ints.degrees()[mu]));
            }
            let m = Rat::from_integer(BigInt::from(count.clone())) / denom;
            if !m.is_integer() || !m.is_positive() {
                return Err(Error::Consistency(format!(
                    "non-integral multiplicity {m} at n={n}"
                )));
            }
            mults_raw.push(m.to_integer().to_biguint().unwrap());
        }

        // Label columns by (multiplicity, ω_λ^{(n)}); both keys must agree
        // and the assignment must be a bijection.
        let row_n = parts
            .position(&Partition::new(vec![n])?)
            .expect("(n) is a partition of n");
        let k_n = BigInt::from(ints.degrees()[row_n]);
        let mut col_for_lambda: Vec<Option<usize>> = vec![None; np];
        for (c, col) in columns.iter().enumerate() {
            let omega_c = Rat::new(col[row_n].clone(), k_n.clone());
            let mut candidates = Vec::new();
            for (li, lam) in parts.list().iter().enumerate() {
                if specht_dimension(&lam.doubled())? == mults_raw[c]
                    && zonal_n_sphere(lam) == omega_c
                {
                    candidates.push(li);
                }
            }
            match candidates.as_slice() {
                [li] => {
                    if col_for_lambda[*li].is_some() {
                        return Err(Error::Labeling(format!(
                            "two columns match {} at n={n}",
                            parts.get(*li)
                        )));
                    }
                    col_for_lambda[*li] = Some(c);
                }
                [] => {
                    return Err(Error::Labeling(format!(
                        "no partition matches column with multiplicity {} and \
                         (n)-sphere value {omega_c} at n={n}",
                        mults_raw[c]
                    )));
                }
                many => {
                    return Err(Error::Labeling(format!(
                        "ambiguous columns {:?} at n={n}",
                        many.iter().map(|&i| parts.get(i).to_string()).collect::<Vec<_>>()
                    )));
                }
            }
        }

        let mut p = vec![BigInt::zero(); np * np];
        let mut mults = vec![BigUint::zero(); np];
        for (li, c) in col_for_lambda.iter().enumerate() {
            let c = c.expect("bijection established above");
            for mu in 0..np {
                p[mu * np + li] = columns[c][mu].clone();
            }
            mults[li] = mults_raw[c].clone();
        }

        let table = CharacterTable {
            parts,
            degrees: ints.degrees().to_vec(),
            p,
            mults,
        };
        table.verify_structure()?;
        Ok(table)
    }

    /// Rebuilds a table from parsed cache data and re-runs the structural
    /// and orthogonality self-checks. Used by the cache loader.
    pub(crate) fn from_raw(n: usize, p: Vec<BigInt>, mults: Vec<BigUint>) -> Result<Self> {
        let parts = PartitionIndex::new(n)?;
        let np = parts.len();
        if p.len() != np * np || mults.len() != np {
            return Err(Error::Cache("character table shape mismatch".into()));
        }
        let sizes = crate::scheme::SphereSizes::compute(n)?;
        let degrees: Vec<u64> = sizes
            .sizes()
            .iter()
            .map(|s| s.to_u64().expect("degree fits u64"))
            .collect();
        let table = CharacterTable {
            parts,
            degrees,
            p,
            mults,
        };
        table.verify_structure()?;
        table.verify_orthogonality()?;
        Ok(table)
    }

    /// Structural facts that must hold for any correctly built table:
    /// all-ones (1^n) row, degree column at λ = (n), Σ m_λ = (2n−1)!!.
    fn verify_structure(&self) -> Result<()> {
        let np = self.parts.len();
        let n = self.parts.n();
        let id_idx = np - 1;
        for lam in 0..np {
            if !self.at(id_idx, lam).is_one() {
                return Err(Error::Consistency(format!(
                    "row (1^n) not all ones at n={n}"
                )));
            }
        }
        let col_n = self
            .parts
            .position(&Partition::new(vec![n])?)
            .expect("(n) present");
        for mu in 0..np {
            if self.at(mu, col_n) != &BigInt::from(self.degrees[mu]) {
                return Err(Error::Consistency(format!(
                    "trivial column does not hold the degrees at n={n}"
                )));
            }
        }
        let total: BigUint = self.mults.iter().sum();
        if total != matchings_count(n) {
            return Err(Error::Consistency(format!(
                "multiplicities sum to {total}, expected (2n-1)!! at n={n}"
            )));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.parts.n()
    }

    pub fn parts(&self) -> &PartitionIndex {
        &self.parts
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    /// p_μ(λ) by canonical indices (row μ, column λ).
    #[inline]
    pub fn at(&self, mu: usize, lam: usize) -> &BigInt {
        &self.p[mu * self.parts.len() + lam]
    }

    pub fn eigenvalue(&self, mu: &Partition, lam: &Partition) -> Option<&BigInt> {
        Some(self.at(self.parts.position(mu)?, self.parts.position(lam)?))
    }

    pub fn multiplicity(&self, lam: usize) -> &BigUint {
        &self.mults[lam]
    }

    pub fn multiplicities(&self) -> &[BigUint] {
        &self.mults
    }

    /// ω_λ^μ = p_μ(λ)/k_μ.
    pub fn zonal(&self, mu: usize, lam: usize) -> Rat {
        Rat::new(self.at(mu, lam).clone(), BigInt::from(self.degrees[mu]))
    }

    /// Column orthogonality: Σ_μ p_μ(λ)p_μ(λ′)/k_μ = δ_λλ′ · (2n−1)!!/m_λ,
    /// and the row relation Σ_λ m_λ p_μ(λ) = 0 for μ ≠ (1^n).
    pub fn verify_orthogonality(&self) -> Result<()> {
        let np = self.parts.len();
        let n = self.parts.n();
        let count = BigInt::from(matchings_count(n));
        for a in 0..np {
            for b in a..np {
                let mut sum = Rat::zero();
                for mu in 0..np {
                    sum += Rat::new(self.at(mu, a) * self.at(mu, b), BigInt::from(self.degrees[mu]));
                }
                let expect = if a == b {
                    Rat::new(count.clone(), BigInt::from(self.mults[a].clone()))
                } else {
                    Rat::zero()
                };
                if sum != expect {
                    return Err(Error::Consistency(format!(
                        "column orthogonality fails for ({}, {}) at n={n}",
                        self.parts.get(a),
                        self.parts.get(b)
                    )));
                }
            }
        }
        let id_idx = np - 1;
        for mu in 0..np {
            if mu == id_idx {
                continue;
            }
            let mut sum = BigInt::zero();
            for lam in 0..np {
                sum += BigInt::from(self.mults[lam].clone()) * self.at(mu, lam);
            }
            if !sum.is_zero() {
                return Err(Error::Consistency(format!(
                    "Σ_λ m_λ p_μ(λ) != 0 for μ = {} at n={n}",
                    self.parts.get(mu)
                )));
            }
        }
        Ok(())
    }

    /// The full zonal table, cross-checked against the closed form on the
    /// (n)-sphere row — the independent consistency gate between the
    /// eigen-computation and the product formula.
    pub fn zonal_table(&self) -> Result<ZonalTable> {
        let np = self.parts.len();
        let n = self.parts.n();
        let omega: Vec<Rat> = (0..np * np)
            .map(|k| self.zonal(k / np, k % np))
            .collect();
        let table = ZonalTable {
            parts: self.parts.clone(),
            omega,
        };
        let id_idx = np - 1;
        let row_n = self.parts.position(&Partition::new(vec![n])?).unwrap();
        for lam in 0..np {
            if !table.get(id_idx, lam).is_one() {
                return Err(Error::Consistency(format!(
                    "ω_λ^(1^n) != 1 for λ = {}",
                    self.parts.get(lam)
                )));
            }
            let closed = zonal_n_sphere(self.parts.get(lam));
            if table.get(row_n, lam) != &closed {
                return Err(Error::Consistency(format!(
                    "eigen-derived ω_{}^(n) = {} disagrees with product formula {closed}",
                    self.parts.get(lam),
                    table.get(row_n, lam)
                )));
            }
        }
        Ok(table)
    }

    /// Idempotent coefficients c_λ(μ) = (m_λ/N!!) · p_μ(λ)/k_μ, rows λ,
    /// columns μ, so that E_λ = Σ_μ c_λ(μ) A_μ.
    pub fn idempotent_coeffs(&self) -> RatMat {
        let np = self.parts.len();
        let count = BigInt::from(matchings_count(self.parts.n()));
        RatMat::from_fn(np, np, |lam, mu| {
            Rat::new(
                BigInt::from(self.mults[lam].clone()) * self.at(mu, lam),
                &count * BigInt::from(self.degrees[mu]),
            )
        })
    }
}

/// Common eigenbasis of the transposed intersection matrices, one column
/// per irreducible, found by iterative eigenspace refinement (splitting by
/// B_μ in canonical order, skipping B_(1^n) = I).
fn joint_eigenbasis(ints: &IntersectionNumbers) -> Result<Vec<Vec<Rat>>> {
    let np = ints.parts().len();
    let id_idx = np - 1;
    let mut subspaces: Vec<RatMat> = vec![RatMat::identity(np)];
    for mu in 0..np {
        if mu == id_idx {
            continue;
        }
        if subspaces.iter().all(|s| s.cols() == 1) {
            break;
        }
        let b = ints.b_matrix(mu);
        let bt = b.transpose().to_rat();
        // Every eigenvalue of B_μ is some p_μ(λ), bounded by the degree.
        let roots = integer_roots_within(&char_poly(&b), ints.degrees()[mu])?;
        let mut next: Vec<RatMat> = Vec::new();
        for v in &subspaces {
            if v.cols() == 1 {
                next.push(v.clone());
                continue;
            }
            let btv = bt.mul(v);
            let mut split_dim = 0usize;
            for (root, _) in &roots {
                let root_r = Rat::from_integer(root.clone());
                let m = RatMat::from_fn(v.rows(), v.cols(), |i, j| {
                    &btv[(i, j)] - &root_r * &v[(i, j)]
                });
                let ker = m.kernel();
                if ker.is_empty() {
                    continue;
                }
                split_dim += ker.len();
                let kmat = RatMat::from_fn(v.cols(), ker.len(), |i, j| ker[j][i].clone());
                next.push(v.mul(&kmat));
            }
            if split_dim != v.cols() {
                return Err(Error::Degenerate(v.cols()));
            }
        }
        subspaces = next;
    }
    let mut columns = Vec::with_capacity(np);
    for s in &subspaces {
        if s.cols() != 1 {
            return Err(Error::Degenerate(s.cols()));
        }
        columns.push((0..np).map(|k| s[(k, 0)].clone()).collect());
    }
    Ok(columns)
}

/// Zonal table ω_λ^μ with rows μ (spheres) and columns λ (irreducibles).
#[derive(Clone, Debug)]
pub struct ZonalTable {
    parts: PartitionIndex,
    omega: Vec<Rat>,
}

impl ZonalTable {
    pub fn n(&self) -> usize {
        self.parts.n()
    }

    pub fn parts(&self) -> &PartitionIndex {
        &self.parts
    }

    #[inline]
    pub fn get(&self, mu: usize, lam: usize) -> &Rat {
        &self.omega[mu * self.parts.len() + lam]
    }
}

/// The §-style inequality chain on (n)-sphere zonal values, by closed form:
/// |ω_(n)^(n)| > |ω_(n−1,1)^(n)| > |ω_λ^(n)| for every other λ.
pub fn zonal_inequality_chain(n: usize) -> Result<VerificationReport> {
    let claim = format!("spectrum.zonal-chain.n{n}");
    if n < 2 {
        return Ok(VerificationReport::inconclusive(claim, "needs n >= 2"));
    }
    let parts = PartitionIndex::new(n)?;
    let lam_top = Partition::new(vec![n])?;
    let lam_std = Partition::new(vec![n - 1, 1])?;
    let top = zonal_n_sphere(&lam_top);
    let second = zonal_n_sphere(&lam_std);
    if top.abs() <= second.abs() {
        return Ok(VerificationReport::fail(
            claim,
            format!("|ω_(n)| = {top} not above |ω_(n-1,1)| = {second}"),
        ));
    }
    for lam in parts.list() {
        if lam == &lam_top || lam == &lam_std {
            continue;
        }
        let w = zonal_n_sphere(lam);
        if w.abs() >= second.abs() {
            return Ok(VerificationReport::fail(
                claim,
                format!("|ω_{lam}^(n)| = {w} not below |ω_(n-1,1)^(n)| = {second}"),
            ));
        }
    }
    Ok(VerificationReport::pass(claim))
}

/// Dense primitive idempotents, scaled to integers: F_λ = D·E_λ with
/// D = N!!·lcm(k_μ). Entry (x,y) of F_λ depends only on d(x,y).
pub struct DenseIdempotents {
    dm: DistanceMatrix,
    scale: i128,
    coeff: Vec<Vec<i128>>,
    eigen: Vec<Vec<i128>>,
}

impl DenseIdempotents {
    /// Builds the scaled coefficients over a dense distance matrix (n ≤ 5).
    pub fn compute(table: &CharacterTable) -> Result<Self> {
        let dm = DistanceMatrix::compute(table.n())?;
        let np = table.parts().len();
        let mut lcm = BigInt::one();
        for &k in table.degrees() {
            lcm = num_integer::lcm(lcm, BigInt::from(k));
        }
        let scale_big = BigInt::from(matchings_count(table.n())) * &lcm;
        let scale = scale_big
            .to_i128()
            .ok_or_else(|| Error::Consistency("idempotent scale overflows i128".into()))?;
        let mut coeff = Vec::with_capacity(np);
        let mut eigen = Vec::with_capacity(np);
        for lam in 0..np {
            let mut row = Vec::with_capacity(np);
            for mu in 0..np {
                // D·c_λ(μ) = m_λ · p_μ(λ) · lcm / k_μ, an integer.
                let v = BigInt::from(table.multiplicity(lam).clone())
                    * table.at(mu, lam)
                    * (&lcm / BigInt::from(table.degrees()[mu]));
                row.push(
                    v.to_i128()
                        .ok_or_else(|| Error::Consistency("coefficient overflows i128".into()))?,
                );
            }
            coeff.push(row);
            eigen.push(
                (0..np)
                    .map(|mu| table.at(mu, lam).to_i128().expect("eigenvalue fits i128"))
                    .collect(),
            );
        }
        Ok(DenseIdempotents {
            dm,
            scale,
            coeff,
            eigen,
        })
    }

    pub fn scale(&self) -> i128 {
        self.scale
    }

    pub fn size(&self) -> usize {
        self.dm.size()
    }

    /// Scaled entry (F_λ)_{xy}.
    #[inline]
    pub fn entry(&self, lam: usize, x: usize, y: usize) -> i128 {
        self.coeff[lam][self.dm.get(x, y)]
    }

    /// x^T E_λ x for a 0/1 vector given as sorted ranks, as an exact
    /// rational (undoes the scale).
    pub fn quadratic_form(&self, lam: usize, support: &[u64]) -> Rat {
        let mut acc: i128 = 0;
        for &x in support {
            for &y in support {
                acc += self.entry(lam, x as usize, y as usize);
            }
        }
        Rat::new(BigInt::from(acc), BigInt::from(self.scale))
    }

    /// The dense idempotent suite: E_λ² = E_λ, E_λE_ν = 0 (λ ≠ ν),
    /// Σ_λ E_λ = I and A_μE_λ = p_μ(λ)E_λ, all by exact dense products.
    /// Quadratic in memory and cubic in time; gated to n ≤ 4.
    pub fn verify_dense_suite(&self) -> Result<VerificationReport> {
        let n = self.dm.n();
        let claim = format!("spectrum.idempotents.dense.n{n}");
        if n > 4 {
            return Err(Error::OutOfRange {
                what: "n for dense idempotent suite",
                value: n as i64,
                min: 1,
                max: 4,
            });
        }
        let np = self.coeff.len();
        let size = self.dm.size();
        let d = self.scale;
        let mut witnesses: Vec<String> = Vec::new();

        for la in 0..np {
            for lb in 0..np {
                'outer: for x in 0..size {
                    for y in 0..size {
                        let mut acc: i128 = 0;
                        for z in 0..size {
                            acc += self.entry(la, x, z) * self.entry(lb, z, y);
                        }
                        let want = if la == lb { d * self.entry(la, x, y) } else { 0 };
                        if acc != want {
                            witnesses.push(format!(
                                "E_{la}E_{lb} wrong at ({x},{y}): {acc} vs {want}"
                            ));
                            break 'outer;
                        }
                    }
                }
            }
        }
        for x in 0..size {
            for y in 0..size {
                let total: i128 = (0..np).map(|la| self.entry(la, x, y)).sum();
                let want = if x == y { d } else { 0 };
                if total != want {
                    witnesses.push(format!("Σ_λ E_λ wrong at ({x},{y})"));
                }
            }
        }
        // A_μ E_λ = p_μ(λ) E_λ.
        for mu in 0..np {
            for la in 0..np {
                'amu: for x in 0..size {
                    for y in 0..size {
                        let mut acc: i128 = 0;
                        for z in 0..size {
                            if self.dm.get(x, z) == mu {
                                acc += self.entry(la, z, y);
                            }
                        }
                        if acc != self.eigen[la][mu] * self.entry(la, x, y) {
                            witnesses.push(format!(
                                "A_μE_λ != p_μ(λ)E_λ for μ={mu}, λ={la} at ({x},{y})"
                            ));
                            break 'amu;
                        }
                    }
                }
            }
        }
        if witnesses.is_empty() {
            Ok(VerificationReport::pass(claim))
        } else {
            let mut r = VerificationReport::fail(claim, witnesses[0].clone());
            for w in witnesses.into_iter().skip(1).take(9) {
                r = r.with_witness(w);
            }
            Ok(r)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn zonal_product_formula_worked_example() {
        // ω_(5,2,1)^((8)) = 2·4·6·8·(−1)·1·(−2) / (2^7 7!) = 1/840.
        assert_eq!(zonal_n_sphere(&pt(&[5, 2, 1])), rat(1, 840));
    }

    #[test]
    fn zonal_standard_shape() {
        for n in 2..=9i64 {
            assert_eq!(
                zonal_n_sphere(&pt(&[n as usize - 1, 1])),
                rat(-1, 2 * (n - 1))
            );
        }
    }

    #[test]
    fn zonal_vanishes_on_shapes_covering_2_cubed() {
        assert_eq!(zonal_n_sphere(&pt(&[2, 2, 2])), Rat::zero());
        assert_eq!(zonal_n_sphere(&pt(&[3, 2, 2])), Rat::zero());
        assert_eq!(zonal_n_sphere(&pt(&[2, 2, 2, 1])), Rat::zero());
    }

    #[test]
    fn character_table_n3_entries() {
        let t = CharacterTable::compute(3).unwrap();
        let p = |mu: &[usize], lam: &[usize]| {
            t.eigenvalue(&pt(mu), &pt(lam)).unwrap().clone()
        };
        assert_eq!(p(&[3], &[2, 1]), BigInt::from(-2));
        assert_eq!(p(&[3], &[3]), BigInt::from(8));
        assert_eq!(p(&[3], &[1, 1, 1]), BigInt::from(2));
        assert_eq!(p(&[2, 1], &[2, 1]), BigInt::from(1));
        assert_eq!(p(&[2, 1], &[1, 1, 1]), BigInt::from(-3));
        // Multiplicities 1, 9, 5.
        assert_eq!(
            t.multiplicities().to_vec(),
            vec![
                BigUint::from(1u32),
                BigUint::from(9u32),
                BigUint::from(5u32)
            ]
        );
    }

    #[test]
    fn multiplicities_match_doubled_specht_dimensions() {
        for n in 2..=6 {
            let t = CharacterTable::compute(n).unwrap();
            for (li, lam) in t.parts().list().iter().enumerate() {
                assert_eq!(
                    *t.multiplicity(li),
                    specht_dimension(&lam.doubled()).unwrap(),
                    "λ = {lam}, n = {n}"
                );
            }
        }
    }

    #[test]
    fn standard_column_entry_on_n_sphere() {
        // p_(n)((n−1,1)) = −|H_{n−2}|.
        for n in 2..=6 {
            let t = CharacterTable::compute(n).unwrap();
            let got = t
                .eigenvalue(&pt(&[n]), &pt(&[n - 1, 1]))
                .unwrap()
                .clone();
            let want = -BigInt::from(hyperoctahedral_order(n - 2));
            assert_eq!(got, want, "n = {n}");
        }
        // Worked instance from the labeling procedure: n=4 gives −8.
        let t = CharacterTable::compute(4).unwrap();
        assert_eq!(
            t.eigenvalue(&pt(&[4]), &pt(&[3, 1])).unwrap(),
            &BigInt::from(-8)
        );
    }

    #[test]
    fn orthogonality_holds() {
        for n in 2..=5 {
            CharacterTable::compute(n).unwrap().verify_orthogonality().unwrap();
        }
    }

    #[test]
    fn zonal_table_rows() {
        let t = CharacterTable::compute(5).unwrap();
        let z = t.zonal_table().unwrap();
        let np = t.parts().len();
        // Row (1^n) all ones; column (n) all ones.
        let id_idx = np - 1;
        let col_n = t.parts().position(&pt(&[5])).unwrap();
        for i in 0..np {
            assert!(z.get(id_idx, i).is_one());
            assert!(z.get(i, col_n).is_one());
        }
        // ω_(3,1)^((4)) = −1/6 at n=4.
        let t4 = CharacterTable::compute(4).unwrap();
        let z4 = t4.zonal_table().unwrap();
        let r = t4.parts().position(&pt(&[4])).unwrap();
        let c = t4.parts().position(&pt(&[3, 1])).unwrap();
        assert_eq!(z4.get(r, c), &rat(-1, 6));
    }

    #[test]
    fn inequality_chain_strict_above_three() {
        for n in [2, 4, 5, 6, 7] {
            assert!(zonal_inequality_chain(n).unwrap().is_pass(), "n = {n}");
        }
    }

    /// At n = 3 the strict chain has a genuine tie:
    /// |ω_(1^3)^((3))| = |ω_(2,1)^((3))| = 1/4, so the check must fail
    /// with that witness rather than pass.
    #[test]
    fn inequality_chain_tie_at_three() {
        assert_eq!(zonal_n_sphere(&pt(&[2, 1])), rat(-1, 4));
        assert_eq!(zonal_n_sphere(&pt(&[1, 1, 1])), rat(1, 4));
        let r = zonal_inequality_chain(3).unwrap();
        assert!(r.is_fail());
        assert!(r.witnesses[0].contains("[1,1,1]"));
    }

    #[test]
    fn dense_idempotent_suite_small() {
        for n in 2..=4 {
            let t = CharacterTable::compute(n).unwrap();
            let dense = DenseIdempotents::compute(&t).unwrap();
            let r = dense.verify_dense_suite().unwrap();
            assert!(r.is_pass(), "n = {n}: {r:?}");
        }
    }
}
