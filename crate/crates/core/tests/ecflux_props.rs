mod common;

use common::*;
use proptest::prelude::*;
use rmhd_core::ecflux::*;
use rmhd_core::physics::*;

#[test]
fn jump_identity_over_random_pairs() {
    let eos = eos53();
    let mut rng = rng(11);
    let mut worst: f64 = 0.0;
    for _ in 0..20_000 {
        let (l, r) = (random_state(&mut rng), random_state(&mut rng));
        for dir in Direction::ALL {
            let f = ec_flux(&l, &r, &eos, dir).unwrap();
            let (res, scale) = jump_residual(&l, &r, &f, &eos, dir);
            worst = worst.max(res.abs() / scale);
        }
    }
    assert!(worst <= 1e-11, "worst relative residual {worst:e}");
}

#[test]
fn jump_identity_for_nearly_equal_states() {
    // exercises the series branch of the logarithmic mean
    let eos = eos53();
    let mut rng = rng(12);
    for _ in 0..2_000 {
        let l = random_state(&mut rng);
        let mut r = l;
        r.rho *= 1.0 + 1e-6;
        r.p *= 1.0 - 3e-7;
        r.v *= 1.0 - 1e-6;
        for dir in Direction::ALL {
            let f = ec_flux(&l, &r, &eos, dir).unwrap();
            let (res, scale) = jump_residual(&l, &r, &f, &eos, dir);
            assert!(res.abs() <= 1e-11 * scale, "{res:e} vs scale {scale:e}");
        }
    }
}

#[test]
fn flux_is_symmetric() {
    let eos = eos53();
    let mut rng = rng(13);
    for _ in 0..2_000 {
        let (l, r) = (random_state(&mut rng), random_state(&mut rng));
        for dir in Direction::ALL {
            let a = ec_flux(&l, &r, &eos, dir).unwrap();
            let b = ec_flux(&r, &l, &eos, dir).unwrap();
            assert!((a - b).amax() <= 1e-12 * a.amax().max(1.0));
        }
    }
}

#[test]
fn transverse_fluxes_are_permutations_of_the_normal_flux() {
    let eos = eos53();
    let mut rng = rng(14);
    let swap = |f: Vec8, a: usize, b: usize| {
        let mut g = f;
        g.swap_rows(1 + a, 1 + b);
        g.swap_rows(4 + a, 4 + b);
        g
    };
    for _ in 0..2_000 {
        let (l, r) = (random_state(&mut rng), random_state(&mut rng));
        for (dir, axis) in [(Direction::Y, 1), (Direction::Z, 2)] {
            let direct = ec_flux(&l, &r, &eos, dir).unwrap();
            let via_x = swap(ec_flux(&l.permuted(0, axis), &r.permuted(0, axis), &eos, Direction::X).unwrap(), 0, axis);
            assert!((direct - via_x).amax() <= 1e-12 * direct.amax().max(1.0));
        }
    }
}

#[test]
fn reduces_to_the_hydrodynamic_flux_without_field() {
    let eos = eos53();
    let mut rng = rng(15);
    for _ in 0..1_000 {
        let mut l = random_state(&mut rng);
        let mut r = random_state(&mut rng);
        l.b = Vec3::zeros();
        r.b = Vec3::zeros();
        for dir in Direction::ALL {
            let a = ec_flux(&l, &r, &eos, dir).unwrap();
            let b = rhd_ec_flux(&l, &r, &eos, dir).unwrap();
            assert!((a - b).amax() <= 1e-12 * a.amax().max(1.0));
        }
    }
}

#[test]
fn combination_coefficients_satisfy_order_conditions() {
    // Σ_r r α_r = 1 and Σ_r r^(2j+1) α_r = 0 for j = 1 .. k-1
    for k in 1..=3 {
        let c = combination_coeffs(k).unwrap();
        let alpha = c.alpha();
        for j in 0..k {
            let m: f64 = alpha.iter().enumerate().map(|(i, a)| a * ((i + 1) as f64).powi(2 * j as i32 + 1)).sum();
            let expected = if j == 0 { 1.0 } else { 0.0 };
            assert!((m - expected).abs() <= 1e-14, "k={k} j={j}: {m}");
        }
    }
}

#[test]
fn highorder_flux_is_consistent_and_conservative_in_entropy() {
    let eos = eos53();
    let mut rng = rng(16);
    for k in 1..=3 {
        let s = random_state(&mut rng);
        let f = highorder_ec_flux(&vec![s; 2 * k], k, &eos, Direction::X).unwrap();
        let exact = physical_flux(&s, &eos, Direction::X).unwrap();
        assert!((f - exact).amax() <= 1e-12 * exact.amax());
        let q = highorder_entropy_flux(&vec![s; 2 * k], k, &eos, Direction::X).unwrap();
        let (_, q_exact) = entropy_pair(&s, &eos, Direction::X).unwrap();
        assert!((q - q_exact).abs() <= 1e-12 * q_exact.abs().max(1.0));
    }
    assert!(highorder_ec_flux(&[random_state(&mut rng); 3], 2, &eos, Direction::X).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn consistency_with_physical_flux(
        rho in 1e-3f64..1e3, p in 1e-3f64..1e3,
        vx in -0.55f64..0.55, vy in -0.55f64..0.55, vz in -0.55f64..0.55,
        bx in -10.0f64..10.0, by in -10.0f64..10.0, bz in -10.0f64..10.0,
    ) {
        let eos = eos53();
        let s = PrimState::new(rho, [vx, vy, vz], [bx, by, bz], p).unwrap();
        for dir in Direction::ALL {
            let f = ec_flux(&s, &s, &eos, dir).unwrap();
            let exact = physical_flux(&s, &eos, dir).unwrap();
            for c in 0..8 {
                prop_assert!((f[c] - exact[c]).abs() <= 1e-13 * exact.amax().max(1.0));
            }
        }
    }

    #[test]
    fn log_mean_is_a_symmetric_mean(a in 1e-6f64..1e6, b in 1e-6f64..1e6) {
        let m = log_mean(a, b).unwrap();
        prop_assert!((m - log_mean(b, a).unwrap()).abs() <= 1e-14 * m);
        prop_assert!(m >= a.min(b) * (1.0 - 1e-14) && m <= a.max(b) * (1.0 + 1e-14));
        // bounded by the geometric and arithmetic means
        prop_assert!(m >= (a * b).sqrt() * (1.0 - 1e-12));
        prop_assert!(m <= 0.5 * (a + b) * (1.0 + 1e-12));
    }
}
