mod common;

use common::*;
use proptest::prelude::*;
use rmhd_core::physics::*;

fn prim_vec(s: &PrimState) -> Vec8 {
    Vec8::from(s.to_array())
}

fn prim_from_vec(v: &Vec8) -> PrimState {
    PrimState::from_array((*v).into()).unwrap()
}

/// Fourth-order central differences with step `1e-6 scale_c` in component
/// `c`.
fn fd_jacobian<F: Fn(&Vec8) -> Vec8>(f: F, x: &Vec8, scale: &Vec8) -> Mat8 {
    let mut j = Mat8::zeros();
    for c in 0..8 {
        let h = 1e-6 * scale[c];
        let at = |d: f64| {
            let mut y = *x;
            y[c] += d;
            f(&y)
        };
        j.set_column(c, &((at(-2.0 * h) - at(2.0 * h) + (at(h) - at(-h)) * 8.0) / (12.0 * h)));
    }
    j
}

/// Component scales of primitive variables: magnitude, at least one.
fn prim_scale(v: &Vec8) -> Vec8 {
    v.map(|x| x.abs().max(1.0))
}

/// Component scales of entropy variables. The density is exponential in
/// `w_0`, so its scale is at least one. Velocity and field are ratios of the
/// other components to `a = -w_8`, which sets their scale.
fn entropy_scale(w: &Vec8) -> Vec8 {
    let a = w[7].abs();
    Vec8::from_fn(|c, _| if c == 0 { w[0].abs().max(1.0) } else { w[c].abs().max(a) })
}

fn rel_err(a: &Mat8, b: &Mat8) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn jacobians_match_finite_differences() {
    let eos = eos53();
    let mut rng = rng(21);
    for _ in 0..2_000 {
        let s = random_state_in(&mut rng, 0.9, 3.0);
        let cons = |v: &Vec8| prim_to_cons(&prim_from_vec(v), &eos).unwrap().to_vec8();
        let du_dv = jac_du_dv(&s, &eos);
        assert!(rel_err(&du_dv, &fd_jacobian(cons, &prim_vec(&s), &prim_scale(&prim_vec(&s)))) <= 1e-6);

        let w = entropy_vars(&s, &eos).unwrap().w;
        let prim = |w: &Vec8| prim_vec(&prim_from_entropy_vars(w, &eos).unwrap());
        let dv_dw = jac_dv_dw(&s, &eos);
        assert!(rel_err(&dv_dw, &fd_jacobian(prim, &w, &entropy_scale(&w))) <= 1e-6);

        let cons_of_w = |w: &Vec8| prim_to_cons(&prim_from_entropy_vars(w, &eos).unwrap(), &eos).unwrap().to_vec8();
        let du_dw = jac_du_dw(&s, &eos);
        assert!(rel_err(&du_dw, &fd_jacobian(cons_of_w, &w, &entropy_scale(&w))) <= 1e-6);
        assert!((du_dw - du_dw.transpose()).norm() <= 1e-12 * du_dw.norm());
        assert!(((du_dw + du_dw.transpose()) * 0.5).cholesky().is_some());
    }
}

#[test]
fn entropy_variables_are_the_entropy_gradient() {
    // ℰ(U + δ) - ℰ(U - δ) = W·(2δ) + O(δ³), probed along primitive directions
    let eos = eos53();
    let mut rng = rng(22);
    for _ in 0..500 {
        let s = random_state_in(&mut rng, 0.8, 2.0);
        let w = entropy_vars(&s, &eos).unwrap().w;
        for c in 0..8 {
            let h = 1e-6 * s.to_array()[c].abs().max(1e-2);
            let (mut a, mut b) = (s.to_array(), s.to_array());
            a[c] += h;
            b[c] -= h;
            let (sa, sb) = (PrimState::from_array(a).unwrap(), PrimState::from_array(b).unwrap());
            let de = entropy_density(&sa, &eos) - entropy_density(&sb, &eos);
            let du = prim_to_cons(&sa, &eos).unwrap().to_vec8() - prim_to_cons(&sb, &eos).unwrap().to_vec8();
            let scale = w.component_mul(&du).abs().sum();
            let roundoff = 1e-14 * entropy_density(&s, &eos).abs();
            assert!((de - w.dot(&du)).abs() <= 1e-6 * scale + roundoff);
        }
    }
}

#[test]
fn potential_matches_its_definition() {
    // ϕ = W·U - ℰ and φ = W·S
    let eos = eos53();
    let mut rng = rng(23);
    for _ in 0..1_000 {
        let s = random_state(&mut rng);
        let ev = entropy_vars(&s, &eos).unwrap();
        let u = prim_to_cons(&s, &eos).unwrap().to_vec8();
        let e = entropy_density(&s, &eos);
        let scale = ev.w.component_mul(&u).abs().sum() + e.abs();
        assert!((ev.varphi - (ev.w.dot(&u) - e)).abs() <= 1e-12 * scale);
        let src = source_vector(&s);
        let phi_scale = ev.w.component_mul(&src).abs().sum().max(1e-300);
        assert!((ev.phi - ev.w.dot(&src)).abs() <= 1e-12 * phi_scale);
    }
}

#[test]
fn recovery_round_trips_across_a_wide_range() {
    // backward error: the recovered state reproduces U
    let eos = eos53();
    let mut rng = rng(24);
    for _ in 0..5_000 {
        let s = random_state_in(&mut rng, 0.99, 30.0);
        let u = prim_to_cons(&s, &eos).unwrap();
        let back = cons_to_prim(&u, &eos).unwrap();
        let u2 = prim_to_cons(&back, &eos).unwrap().to_vec8();
        let u1 = u.to_vec8();
        assert!((u2 - u1).amax() <= 1e-10 * u1.amax(), "{s:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1024))]

    #[test]
    fn recovery_recovers_well_conditioned_states(
        rho in 0.1f64..10.0, p in 0.1f64..10.0,
        vx in -0.5f64..0.5, vy in -0.5f64..0.5, vz in -0.5f64..0.5,
        bx in -2.0f64..2.0, by in -2.0f64..2.0, bz in -2.0f64..2.0,
    ) {
        let eos = eos53();
        let s = PrimState::new(rho, [vx, vy, vz], [bx, by, bz], p).unwrap();
        let back = cons_to_prim(&prim_to_cons(&s, &eos).unwrap(), &eos).unwrap();
        for (a, b) in back.to_array().iter().zip(s.to_array().iter()) {
            prop_assert!((a - b).abs() <= 1e-10 * b.abs().max(1.0));
        }
    }

    #[test]
    fn entropy_variable_map_inverts(
        rho in 1e-3f64..1e3, p in 1e-3f64..1e3,
        vx in -0.55f64..0.55, vy in -0.55f64..0.55, vz in -0.55f64..0.55,
        bx in -5.0f64..5.0, by in -5.0f64..5.0, bz in -5.0f64..5.0,
    ) {
        let eos = eos53();
        let s = PrimState::new(rho, [vx, vy, vz], [bx, by, bz], p).unwrap();
        let back = prim_from_entropy_vars(&entropy_vars(&s, &eos).unwrap().w, &eos).unwrap();
        for (a, b) in back.to_array().iter().zip(s.to_array().iter()) {
            prop_assert!((a - b).abs() <= 1e-10 * b.abs().max(1.0));
        }
    }

    #[test]
    fn entropy_variable_segments_stay_admissible(seed in 0u64..u64::MAX, t in 0.0f64..1.0) {
        let eos = eos53();
        let mut r = rng(seed);
        let (a, b) = (random_state(&mut r), random_state(&mut r));
        let (wa, wb) = (entropy_vars(&a, &eos).unwrap().w, entropy_vars(&b, &eos).unwrap().w);
        prop_assert!(prim_from_entropy_vars(&(wa * (1.0 - t) + wb * t), &eos).is_ok());
    }

    #[test]
    fn signal_speed_bounds_are_subluminal(seed in 0u64..u64::MAX) {
        let eos = eos53();
        let s = random_state(&mut rng(seed));
        for dir in Direction::ALL {
            let est = max_signal_speed(&s, &eos, dir, WaveSpeed::Estimate);
            prop_assert!(est > 0.0 && est <= 1.0);
            prop_assert!(est >= s.v[dir.axis()].abs() * (1.0 - 1e-12));
            prop_assert_eq!(max_signal_speed(&s, &eos, dir, WaveSpeed::Light), 1.0);
        }
    }
}
