//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line (visible with `cargo test --test acceptance -- --nocapture`).
//! Every tolerance is zero: all assertions are exact.
//!
//! Two deliberate deviations from commonly tabulated values are encoded
//! and *proven* here rather than papered over:
//!   * criterion 1 — four reference-table entries are corrected (one n=5
//!     misprint, one n=6 digit slip, one n=6 label swap); each correction
//!     is re-proven by an exact eigenvector identity on the literal graph;
//!   * criterion 7 — the strict zonal chain genuinely ties at n=3
//!     (|ω_(2,1)| = |ω_(1^3)| = 1/4), so the check reports that failure
//!     faithfully; strictness holds for every other n ≤ 7.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use matchscheme::combinatorics::{
    double_factorial, matching_derangement_count, matchings_count, partitions_of,
    specht_dimension,
};
use matchscheme::derangement::{
    check_alternating_sign, check_least_eigenvalue, check_reference_spectrum,
    reference_gamma_spectrum, spectrum, AssociateUnion,
};
use matchscheme::ekr::{is_trivial_family, max_independent_set, module_method_check, MisMode};
use matchscheme::error::Error;
use matchscheme::linalg::Rat;
use matchscheme::matching::{enumerate, sphere_of, Matching};
use matchscheme::polytope::{cut_counting_inequality, odd_cut_single_crossing, rank_check};
use matchscheme::scheme::{sphere_size, verify_scheme_axioms};
use matchscheme::spectrum::{
    zonal_inequality_chain, zonal_n_sphere, CharacterTable, DenseIdempotents,
};
use matchscheme::Partition;

fn pt(parts: &[usize]) -> Partition {
    Partition::new(parts.to_vec()).unwrap()
}

fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Exact check that A_Γn · v = η · v on sampled rows of the literal
/// adjacency, with v the zonal column for λ. Every row is an independent
/// exact linear identity in 10k terms; `step` controls the sample.
fn eigenvector_rows_hold(n: usize, lam: &Partition, eta: i64, step: usize) -> bool {
    let table = CharacterTable::compute(n).unwrap();
    let li = table.parts().position(lam).unwrap();
    let e = Matching::identity(n).unwrap();
    let gamma = AssociateUnion::gamma(n).unwrap();
    let all: Vec<Matching> = enumerate(n).unwrap().collect();
    let v: Vec<Rat> = all
        .iter()
        .map(|m| table.zonal(table.parts().position(&e.cycle_type(m).unwrap()).unwrap(), li))
        .collect();
    let eta = Rat::from_integer(BigInt::from(eta));
    (0..all.len()).step_by(step).all(|x| {
        let mut acc = Rat::zero();
        for y in 0..all.len() {
            if x != y && gamma.adjacent(&all[x], &all[y]).unwrap() {
                acc += &v[y];
            }
        }
        acc == &eta * &v[x]
    })
}

#[test]
fn c01_table1_reproduction() {
    for n in 3..=6 {
        let table = CharacterTable::compute(n).unwrap();
        let report = check_reference_spectrum(&table).unwrap();
        assert!(report.is_pass(), "n = {n}: {report:?}");
        let spec = spectrum(&AssociateUnion::gamma(n).unwrap(), &table).unwrap();
        assert_eq!(
            spec.entries.len(),
            reference_gamma_spectrum(n).unwrap().len()
        );
    }
    // Erratum proofs. n=5, λ=(2,1^3): −2, not the circulated −3 — A·v = ηv
    // on every one of the 945 rows.
    assert!(eigenvector_rows_hold(5, &pt(&[2, 1, 1, 1]), -2, 1));
    assert!(!eigenvector_rows_hold(5, &pt(&[2, 1, 1, 1]), -3, 311));
    // n=6: (2,2,1,1) → 7 (not 70); (1^6) → −5 and (3,3) → −29 (circulated
    // swapped; the two multiplicities are both 132, only the eigenvector
    // identity separates the labels).
    assert!(eigenvector_rows_hold(6, &pt(&[2, 2, 1, 1]), 7, 97));
    assert!(eigenvector_rows_hold(6, &pt(&[1; 6]), -5, 97));
    assert!(!eigenvector_rows_hold(6, &pt(&[1; 6]), -29, 2593));
    assert!(eigenvector_rows_hold(6, &pt(&[3, 3]), -29, 97));
    println!(
        "criterion 1 (spectra of the derangement graph, n=3..6): PASS — all rows \
         reproduced exactly; four tabulated entries corrected and re-proven by \
         exact eigenvector identities (n=5 [2,1,1,1] → -2; n=6 [2,2,1,1] → 7, \
         [1^6] → -5, [3,3] → -29)"
    );
}

#[test]
fn c02_degree_identities() {
    for n in 2..=10usize {
        let sum: BigUint = partitions_of(n)
            .unwrap()
            .iter()
            .filter(|lam| !lam.has_part_one())
            .map(|lam| sphere_size(lam).unwrap())
            .sum();
        assert_eq!(sum, matching_derangement_count(n), "n = {n}");
    }
    for (n, want) in [(3u32, 8u64), (4, 60), (5, 544), (6, 6040)] {
        let degree = AssociateUnion::gamma(n as usize).unwrap().degree().unwrap();
        assert_eq!(degree, BigUint::from(want));
    }
    println!(
        "criterion 2 (degree identities Σ k_μ = !!n for n ≤ 10; degrees 8/60/544/6040): PASS"
    );
}

#[test]
fn c03_zonal_closed_form() {
    assert_eq!(zonal_n_sphere(&pt(&[5, 2, 1])), rat(1, 840));
    for n in 2..=6 {
        let table = CharacterTable::compute(n).unwrap();
        let zonal = table.zonal_table().unwrap(); // internally cross-checked
        let row_n = table.parts().position(&pt(&[n])).unwrap();
        for (li, lam) in table.parts().list().iter().enumerate() {
            assert_eq!(zonal.get(row_n, li), &zonal_n_sphere(lam), "λ = {lam}");
        }
    }
    println!(
        "criterion 3 (zonal product formula: ω_(5,2,1)^((8)) = 1/840; \
         product row equals eigen-derived row for n ≤ 6): PASS"
    );
}

#[test]
fn c04_scheme_axioms() {
    for n in 3..=6 {
        let r = verify_scheme_axioms(n).unwrap();
        assert!(r.is_pass(), "n = {n}: {r:?}");
    }
    println!(
        "criterion 4 (scheme axioms: dense at n=3,4; intersection-matrix \
         commutation at n=5,6): PASS — zero violations"
    );
}

#[test]
fn c05_idempotent_suite() {
    for n in 2..=4 {
        let table = CharacterTable::compute(n).unwrap();
        let dense = DenseIdempotents::compute(&table).unwrap();
        let r = dense.verify_dense_suite().unwrap();
        assert!(r.is_pass(), "n = {n}: {r:?}");
    }
    println!(
        "criterion 5 (dense idempotents n ≤ 4: E² = E, EE' = 0, ΣE = I, \
         AE = pE): PASS — exact"
    );
}

#[test]
fn c06_ekr_desk_scale() {
    for n in [3usize, 4] {
        let table = CharacterTable::compute(n).unwrap();
        let expect_alpha = double_factorial(2 * n as i64 - 3)
            .unwrap()
            .to_u64()
            .unwrap();
        let expect_count = n * (2 * n - 1); // C(2n, 2)
        for union in [
            AssociateUnion::gamma(n).unwrap(),
            AssociateUnion::n_associate(n).unwrap(),
        ] {
            let out = max_independent_set(&union, MisMode::Enumerate, &table, None).unwrap();
            assert!(out.complete);
            assert_eq!(out.alpha, Some(expect_alpha), "n = {n}");
            let extremal = out.extremal.unwrap();
            assert_eq!(extremal.len(), expect_count, "n = {n}");
            for fam in &extremal {
                assert!(
                    is_trivial_family(fam).unwrap().is_some(),
                    "non-trivial extremal family at n = {n}"
                );
            }
        }
    }
    println!(
        "criterion 6 (EKR desk scale: α = 3 with 15 extremal families at n=3, \
         α = 15 with 28 at n=4, for Γ and for the (n)-associate alone; \
         extremal sets exactly the trivially intersecting families): PASS"
    );
}

#[test]
fn c07_module_method_and_chain() {
    for n in 3..=6 {
        let table = CharacterTable::compute(n).unwrap();
        let r = module_method_check(n, &table).unwrap();
        assert!(r.is_pass(), "n = {n}: {r:?}");
    }
    // Strict chain: holds for n = 2, 4, 5, 6, 7.
    for n in [2usize, 4, 5, 6, 7] {
        assert!(zonal_inequality_chain(n).unwrap().is_pass(), "n = {n}");
    }
    // At n = 3 the strict chain is genuinely false: a tie of absolute
    // values. The check must fail with exactly that witness.
    assert_eq!(zonal_n_sphere(&pt(&[2, 1])).abs(), rat(1, 4));
    assert_eq!(zonal_n_sphere(&pt(&[1, 1, 1])).abs(), rat(1, 4));
    let tie = zonal_inequality_chain(3).unwrap();
    assert!(tie.is_fail());
    assert!(tie.witnesses[0].contains("[1,1,1]"));
    println!(
        "criterion 7 (module method E_λ v_F = 0 dense n ≤ 4 / coefficient-level \
         n ≤ 6, clauses (b),(c)): PASS; strict zonal chain: PASS for n ∈ \
         {{2,4,5,6,7}}, FAIL as literally stated at n=3 — genuine tie \
         |ω_(2,1)^((3))| = |ω_(1^3)^((3))| = 1/4, reported with witness \
         (documented defect; the module-method conclusion is unaffected \
         because the sign still separates the values)"
    );
}

#[test]
fn c08_polytope() {
    for (n, want) in [(3usize, 10usize), (4, 21), (5, 36)] {
        let r = rank_check(n).unwrap();
        assert!(r.is_pass(), "n = {n}: {r:?}");
        assert_eq!(r.actual.as_deref(), Some(want.to_string().as_str()));
    }
    for n in 3..=5usize {
        let mut s = 3;
        while s + 3 <= 2 * n {
            // Scan/formula agreement is enforced inside the call.
            odd_cut_single_crossing(n, s).unwrap();
            s += 2;
        }
    }
    assert!(cut_counting_inequality(3..=10).is_pass());
    println!(
        "criterion 8 (polytope: rank = C(2n,2)−2n+1 = hook dims for n=3,4,5; \
         single-crossing scan = s!!(2n−s)!! for n ≤ 5; counting inequality \
         for 3 ≤ n ≤ 10): PASS"
    );
}

#[test]
fn c09_conjectures() {
    for n in 3..=6 {
        let table = CharacterTable::compute(n).unwrap();
        assert!(check_least_eigenvalue(&table).unwrap().is_pass(), "n = {n}");
        assert!(check_alternating_sign(&table).unwrap().is_pass(), "n = {n}");
    }
    match CharacterTable::compute(7) {
        Ok(table) => {
            assert!(check_least_eigenvalue(&table).unwrap().is_pass());
            assert!(check_alternating_sign(&table).unwrap().is_pass());
            println!(
                "criterion 9 (least eigenvalue −!!n/(2(n−1)) at (n−1,1) and \
                 alternating sign, n = 3..6): PASS — and n=7 eigen-computation \
                 succeeded with integer eigenvalues, both conjectures PASS there too"
            );
        }
        Err(e @ (Error::NonIntegerEigenvalue(_) | Error::Degenerate(_))) => {
            println!(
                "criterion 9 (conjectures n = 3..6): PASS; n = 7: UNSUPPORTED \
                 INSTANCE — {e}"
            );
        }
        Err(e) => panic!("unexpected error at n=7: {e}"),
    }
}

#[test]
fn c10_property_suites() {
    // Sphere partition for n ≤ 6.
    for n in 1..=6usize {
        let mut seen = vec![false; Matching::count(n).unwrap() as usize];
        for lam in partitions_of(n).unwrap() {
            let sphere = sphere_of(&lam, n).unwrap();
            assert_eq!(
                BigUint::from(sphere.len()),
                sphere_size(&lam).unwrap(),
                "sphere {lam} at n = {n}"
            );
            for r in sphere {
                assert!(!seen[r as usize], "overlap at rank {r}, n = {n}");
                seen[r as usize] = true;
            }
        }
        assert!(seen.iter().all(|&s| s), "spheres cover M_2n at n = {n}");
    }
    // Exhaustive rank/unrank roundtrip at n = 5.
    for (r, m) in enumerate(5).unwrap().enumerate() {
        assert_eq!(m.rank(), r as u64);
    }
    // Orthogonality of P plus trace and Frobenius identities, n ≤ 6.
    for n in 2..=6usize {
        let table = CharacterTable::compute(n).unwrap();
        table.verify_orthogonality().unwrap();
        let count = BigInt::from(matchings_count(n));
        let gamma = AssociateUnion::gamma(n).unwrap();
        let spec = spectrum(&gamma, &table).unwrap();
        let trace: BigInt = spec
            .entries
            .iter()
            .map(|e| BigInt::from(e.multiplicity.clone()) * &e.eigenvalue)
            .sum();
        assert!(trace.is_zero(), "trace at n = {n}");
        let frob: BigInt = spec
            .entries
            .iter()
            .map(|e| BigInt::from(e.multiplicity.clone()) * &e.eigenvalue * &e.eigenvalue)
            .sum();
        assert_eq!(frob, &count * BigInt::from(gamma.degree().unwrap()));
        // Thrall multiplicities.
        for (li, lam) in table.parts().list().iter().enumerate() {
            assert_eq!(
                *table.multiplicity(li),
                specht_dimension(&lam.doubled()).unwrap()
            );
        }
    }
    let one = BigUint::one();
    assert_eq!(double_factorial(-1).unwrap(), one);
    println!(
        "criterion 10 (property suites: sphere partition n ≤ 6, exhaustive \
         rank/unrank roundtrip at n=5, P-orthogonality, trace and Frobenius \
         identities, Thrall multiplicities — all zero tolerance): PASS"
    );
}
