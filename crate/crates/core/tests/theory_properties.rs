use gpoly::experiments::{mc_run, Welford};
use gpoly::mathcore::{determinant, simplex_volume, solve_linear, Matrix};
use gpoly::sampling::stream;
use gpoly::theory::{binary_entropy, c_alpha_r, estranged_integrand, growth_base_kfacet, signed_distance_t, Sign};
use proptest::prelude::*;

fn matrix(seed: u64, n: usize) -> Matrix {
    let mut s = stream(seed, 0);
    Matrix::new(n, n, (0..n * n).map(|_| s.standard_normal()).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn entropy_is_symmetric(r in 0.0f64..=1.0) {
        prop_assert!((binary_entropy(r).unwrap() - binary_entropy(1.0 - r).unwrap()).abs() < 1e-15);
        prop_assert!(binary_entropy(r).unwrap() <= 1.0);
    }

    #[test]
    fn growth_constants_are_symmetric_in_r(alpha in 1.2f64..6.0, r in 0.0f64..=1.0) {
        let a = c_alpha_r(alpha, r).unwrap();
        let b = c_alpha_r(alpha, 1.0 - r).unwrap();
        prop_assert!((a.value - b.value).abs() < 1e-10);
        let ga = growth_base_kfacet(alpha, r).unwrap();
        let gb = growth_base_kfacet(alpha, 1.0 - r).unwrap();
        prop_assert!((ga / gb - 1.0).abs() < 1e-9);
    }

    #[test]
    fn integrand_swap_symmetry(r1 in 0.0f64..6.0, r2 in 0.0f64..6.0, w in -0.999f64..0.999) {
        for s1 in Sign::ALL {
            for s2 in Sign::ALL {
                let a = estranged_integrand(r1, r2, w, s1, s2).unwrap();
                let b = estranged_integrand(r2, r1, w, s2, s1).unwrap();
                prop_assert!((a - b).abs() <= 1e-15 * a.abs().max(1e-300));
                prop_assert!(a >= 0.0 && a.is_finite());
            }
        }
        let t = signed_distance_t(r1, r2, w).unwrap();
        prop_assert!((t * (1.0 - w * w).sqrt() - (r2 - r1 * w)).abs() < 1e-12);
    }

    #[test]
    fn determinant_is_multiplicative(seed in any::<u64>(), n in 1usize..6) {
        let a = matrix(seed, n);
        let b = matrix(seed.wrapping_add(1), n);
        let lhs = determinant(&a.mul(&b).unwrap()).unwrap();
        let rhs = determinant(&a).unwrap() * determinant(&b).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()));
    }

    #[test]
    fn solve_has_small_residual(seed in any::<u64>(), n in 1usize..7) {
        let a = matrix(seed, n);
        let b: Vec<f64> = (0..n).map(|i| i as f64 - 1.5).collect();
        if let Ok(x) = solve_linear(&a, &b) {
            let r = a.mul_vec(&x).unwrap();
            let scale = 1.0 + x.iter().map(|v| v.abs()).fold(0.0, f64::max);
            for (ri, bi) in r.iter().zip(&b) {
                prop_assert!((ri - bi).abs() <= 1e-9 * scale);
            }
        }
    }

    #[test]
    fn simplex_volume_ignores_translation(seed in any::<u64>(), d in 1usize..5, shift in -50.0f64..50.0) {
        let mut s = stream(seed, 1);
        let pts: Vec<Vec<f64>> = (0..=d).map(|_| (0..d).map(|_| s.standard_normal()).collect()).collect();
        let moved: Vec<Vec<f64>> = pts.iter().map(|p| p.iter().map(|x| x + shift).collect()).collect();
        let a = simplex_volume(&pts).unwrap();
        let b = simplex_volume(&moved).unwrap();
        prop_assert!((a - b).abs() <= 1e-8 * (1.0 + a));
    }

    #[test]
    fn welford_merge_is_order_insensitive(xs in prop::collection::vec(-1e3f64..1e3, 3..200), cut in 1usize..100) {
        let cut = cut.min(xs.len() - 1);
        let mut all = Welford::default();
        xs.iter().for_each(|&x| all.push(x));
        let (mut a, mut b) = (Welford::default(), Welford::default());
        xs[..cut].iter().for_each(|&x| a.push(x));
        xs[cut..].iter().for_each(|&x| b.push(x));
        let m = a.merge(&b);
        prop_assert_eq!(m.count(), all.count());
        prop_assert!((m.mean() - all.mean()).abs() <= 1e-9 * (1.0 + all.mean().abs()));
        prop_assert!((m.variance() - all.variance()).abs() <= 1e-8 * (1.0 + all.variance()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn monte_carlo_is_worker_independent(seed in any::<u64>(), trials in 2u64..20_000) {
        let f = |s: &mut gpoly::sampling::RngStream| Ok(s.uniform() * s.standard_normal());
        let a = mc_run(f, trials, seed, 1).unwrap();
        let b = mc_run(f, trials, seed, 5).unwrap();
        prop_assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        prop_assert_eq!(a.variance.to_bits(), b.variance.to_bits());
    }
}
