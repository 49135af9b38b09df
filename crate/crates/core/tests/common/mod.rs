#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rmhd_core::physics::{prim_to_cons, Direction, Eos, PrimState, Vec3};
use rmhd_core::solver::{Field, Mesh};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn eos53() -> Eos {
    Eos::new(5.0 / 3.0).unwrap()
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

/// Random admissible state: `ρ, p` log-uniform over `[1e-2, 1e2]`, speed up
/// to `vmax` in a random direction, field components in `[-bmax, bmax]`.
pub fn random_state_in(rng: &mut ChaCha8Rng, vmax: f64, bmax: f64) -> PrimState {
    let rho = log_uniform(rng, 1e-2, 1e2);
    let p = log_uniform(rng, 1e-2, 1e2);
    let dir = loop {
        let d = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let n = d.norm();
        if n > 1e-3 && n <= 1.0 {
            break d / n;
        }
    };
    let v = dir * rng.gen_range(0.0..vmax);
    let b = Vec3::new(rng.gen_range(-bmax..bmax), rng.gen_range(-bmax..bmax), rng.gen_range(-bmax..bmax));
    PrimState::new(rho, [v[0], v[1], v[2]], [b[0], b[1], b[2]], p).unwrap()
}

pub fn random_state(rng: &mut ChaCha8Rng) -> PrimState {
    random_state_in(rng, 0.95, 5.0)
}

/// Moderate states for field-level tests, where wide contrasts between
/// neighbours only inflate the roundoff scale.
pub fn moderate_state(rng: &mut ChaCha8Rng) -> PrimState {
    let rho = rng.gen_range(0.5..2.0);
    let p = rng.gen_range(0.5..2.0);
    let v = [rng.gen_range(-0.4..0.4), rng.gen_range(-0.4..0.4), rng.gen_range(-0.4..0.4)];
    let b = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
    PrimState::new(rho, v, b, p).unwrap()
}

/// Replaces every interior cell of `field` with a state drawn from `draw`.
pub fn randomize<F>(field: &mut Field, eos: &Eos, mut draw: F)
where
    F: FnMut() -> PrimState,
{
    let mesh = field.mesh.clone();
    for (i, j) in mesh.interior() {
        let s = draw();
        let idx = mesh.idx(i, j);
        field.prim[idx] = s;
        field.cons[idx] = prim_to_cons(&s, eos).unwrap().to_vec8();
    }
}

pub fn uniform_field(mesh: Mesh, eos: &Eos, s: PrimState) -> Field {
    Field::from_fn(mesh, eos, |_, _| s).unwrap()
}

/// `(W_R - W_L)·F + (φ_R - φ_L) B̄ - (ψ_R - ψ_L)` together with the sum of
/// magnitudes of its terms.
pub fn jump_residual(l: &PrimState, r: &PrimState, f: &rmhd_core::Vec8, eos: &Eos, dir: Direction) -> (f64, f64) {
    let (el, er) =
        (rmhd_core::physics::entropy_vars(l, eos).unwrap(), rmhd_core::physics::entropy_vars(r, eos).unwrap());
    let i = dir.axis();
    let bbar = 0.5 * (l.b[i] + r.b[i]);
    let dw = er.w - el.w;
    let res = dw.dot(f) + (er.phi - el.phi) * bbar - (er.psi[i] - el.psi[i]);
    let scale = dw.component_mul(f).abs().sum() + ((er.phi - el.phi) * bbar).abs() + er.psi[i].abs() + el.psi[i].abs();
    (res, scale)
}
