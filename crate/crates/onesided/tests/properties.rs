//! Randomized structural properties of the numeric core.

use onesided::moduli::{averaged_modulus, local_modulus, ModulusConfig};
use onesided::{
    quad_integrate, FunctionModel, Polynomial, QuadConfig, WeightedSpace,
};
use proptest::prelude::*;

fn unit_space() -> WeightedSpace {
    WeightedSpace::unweighted(1.0, QuadConfig::default()).expect("space")
}

fn small_coeffs() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0..2.0f64, 1..8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn weighted_norm_is_absolutely_homogeneous(scale in -3.0..3.0f64, freq in 0.5..6.0f64) {
        let space = unit_space();
        let base = onesided::weighted_norm(move |x| (freq * x).sin(), &space).unwrap();
        let scaled =
            onesided::weighted_norm(move |x| scale * (freq * x).sin(), &space).unwrap();
        prop_assert!((scaled - scale.abs() * base).abs() < 1e-10 * (1.0 + base));
    }

    #[test]
    fn weighted_norm_satisfies_the_triangle_inequality(a in -2.0..2.0f64, b in -2.0..2.0f64) {
        let space = unit_space();
        let f = move |x: f64| a * (3.0 * x).cos();
        let g = move |x: f64| b * x * x;
        let nf = onesided::weighted_norm(f, &space).unwrap();
        let ng = onesided::weighted_norm(g, &space).unwrap();
        let nsum = onesided::weighted_norm(move |x| f(x) + g(x), &space).unwrap();
        prop_assert!(nsum <= nf + ng + 1e-10);
    }

    #[test]
    fn quadrature_integrates_monomials_exactly(degree in 0usize..32) {
        let exact = 1.0 / (degree as f64 + 1.0);
        let got = quad_integrate(|x| x.powi(degree as i32), 0.0, 1.0, &QuadConfig::default())
            .unwrap();
        prop_assert!((got - exact).abs() < 1e-13);
    }

    #[test]
    fn chebyshev_evaluation_matches_the_monomial_form(coeffs in small_coeffs()) {
        let poly = Polynomial::from_monomials(&coeffs, (0.0, 1.0)).unwrap();
        for i in 0..=20 {
            let x = i as f64 / 20.0;
            let horner = coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
            let clenshaw = poly.eval(x).unwrap();
            prop_assert!(
                (clenshaw - horner).abs() <= 1e-10 * (1.0 + horner.abs()),
                "x = {x}: {clenshaw} vs {horner}"
            );
        }
    }

    #[test]
    fn local_modulus_grows_with_the_window(x in 0.0..1.0f64, small in 0.01..0.2f64) {
        let model = FunctionModel::new("wave", |x: f64| (4.0 * x).sin());
        let cfg = ModulusConfig::new(1);
        let narrow = local_modulus(&model, x, small, &cfg).unwrap();
        let wide = local_modulus(&model, x, 2.0 * small, &cfg).unwrap();
        prop_assert!(wide >= narrow - 1e-12);
    }

    #[test]
    fn averaged_modulus_is_homogeneous_in_the_function(scale in 0.1..4.0f64) {
        let space = unit_space();
        let cfg = ModulusConfig::new(1);
        let base_model = FunctionModel::new("wave", |x: f64| (5.0 * x).sin());
        let scaled_model =
            FunctionModel::new("scaled", move |x: f64| scale * (5.0 * x).sin());
        let base = averaged_modulus(&base_model, 0.1, &cfg, &space).unwrap();
        let scaled = averaged_modulus(&scaled_model, 0.1, &cfg, &space).unwrap();
        prop_assert!((scaled - scale * base).abs() < 1e-9 * (1.0 + base));
    }
}

#[test]
fn averaged_modulus_is_deterministic() {
    let space = unit_space();
    let cfg = ModulusConfig::new(2);
    let model = FunctionModel::new("bump", |x: f64| (-8.0 * (x - 0.4).powi(2)).exp());
    let first = averaged_modulus(&model, 0.15, &cfg, &space).unwrap();
    let second = averaged_modulus(&model, 0.15, &cfg, &space).unwrap();
    assert_eq!(first.to_bits(), second.to_bits());
}
