//! Cross-module workflows exercised through the public surface only:
//! what a downstream crate would actually call.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use rbcalc::algebra::{lincomb_to_json, rat, rat_int, LinComb, TruncatedSeries};
use rbcalc::permutations::{bch_element, lie_basis_coeffs, Permutation};
use rbcalc::rota_baxter::{
    atkinson_solve, quasi_shuffle_lift_residual, series_mul, series_one, RbAlgebra,
    SequenceSummation, TriangularProjector,
};
use rbcalc::trees::rooted::{
    exp_forest, log_gl, magnus_element, tree_series_to_forests, RootedTree,
};
use rbcalc::words::Alphabet;

#[test]
fn bch_coefficients_extract_to_a_bracket_basis() {
    let b4 = bch_element(4).expect("degree within cap");
    let coeffs = lie_basis_coeffs(&b4).expect("the element is a Lie element");
    assert!(!coeffs.is_empty());
    let id_key = Permutation::new(vec![1, 2, 3, 4]).expect("valid one-line word");
    assert_eq!(b4.coeff(&id_key), rat(1, 4));
    let reversal = Permutation::new(vec![4, 3, 2, 1]).expect("valid one-line word");
    assert_eq!(b4.coeff(&reversal), rat(-1, 4));
}

#[test]
fn word_products_lift_to_operator_products() {
    let inst = SequenceSummation::new(6, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let x = inst.sample(&mut rng);
    let alphabet = Alphabet::harmonic(inst.weight());
    for (u, v) in [
        (vec!["z1"], vec!["z1"]),
        (vec!["z2"], vec!["z1", "z1"]),
        (vec!["z1", "z2"], vec!["z1"]),
    ] {
        let u = alphabet.word(&u).expect("harmonic letters");
        let v = alphabet.word(&v).expect("harmonic letters");
        let residual = quasi_shuffle_lift_residual(&inst, &x, &u, &v)
            .expect("the instance is commutative");
        assert!(inst.is_zero(&residual), "words {u} and {v}: residual {residual}");
    }
}

#[test]
fn factorization_series_invert_each_other() {
    let inst = TriangularProjector::new(2);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let x = inst.sample(&mut rng);
    let fac = atkinson_solve(&inst, &x, 4).expect("cutoff within range");
    let one = series_one(&inst, 4).expect("the carrier is unital");
    let left = series_mul(&inst, &fac.ell, &fac.ell_inv);
    let right = series_mul(&inst, &fac.r_inv, &fac.r);
    for k in 0..=4 {
        assert_eq!(left.coeff(k), one.coeff(k), "left inverse fails at order {k}");
        assert_eq!(right.coeff(k), one.coeff(k), "right inverse fails at order {k}");
    }
    let residual = fac
        .factorization_residual(&inst, &x)
        .expect("cutoff within range");
    assert!((0..=4).all(|k| inst.is_zero(residual.coeff(k))));
}

// exp_forest exponentiates with the concatenation product while log_gl
// takes the logarithm with the grafting product; the flow expansion is
// exactly the mismatch between the two on the one-tree generator.
#[test]
fn flow_expansion_links_the_two_exponentials() {
    let omega = magnus_element(3).expect("degree within cap");
    let mut generator = TruncatedSeries::<RootedTree>::zero(3);
    generator.set_component(1, LinComb::basis(RootedTree::leaf(0)));
    let grouplike =
        exp_forest(&tree_series_to_forests(&generator)).expect("series starts at degree 1");
    let logged = log_gl(&grouplike).expect("the exponential is group-like");
    let embedded = tree_series_to_forests(&omega);
    for d in 0..=3 {
        assert_eq!(logged.component(d), embedded.component(d), "degree {d}");
    }
}

#[test]
fn emission_schema_is_stable() {
    let b2 = bch_element(2).expect("degree within cap");
    assert_eq!(
        lincomb_to_json(&b2),
        json!([
            { "basis": "(1,2)", "coeff": "1/2" },
            { "basis": "(2,1)", "coeff": "-1/2" },
        ])
    );
    assert_eq!(b2.render(), "1/2*(1,2) - 1/2*(2,1)");
    let zero = LinComb::<Permutation>::zero();
    assert_eq!(lincomb_to_json(&zero), json!([]));
    assert_eq!(rat_int(3).to_string(), "3");
}

#[test]
fn verification_reports_carry_one_line_per_check() {
    let report = rbcalc::verify::run_suite("spitzer", 2, 42).expect("suite name is registered");
    assert!(report.passed());
    let rendered = report.render();
    assert!(rendered.starts_with("suite spitzer (order 2, seed 42):"), "got: {rendered}");
    assert_eq!(
        rendered.lines().count(),
        report.checks.len() + 1,
        "header plus one line per check"
    );
}
