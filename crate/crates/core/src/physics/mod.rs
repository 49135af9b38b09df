//! State representations and pointwise physics of the symmetrizable RMHD system.
//!
//! Units are geometrized (c = 1). The ideal equation of state `p = (Γ-1) ρ e`
//! closes the system; the specific internal energy is never stored.

mod jacobian;
mod recovery;

pub use jacobian::{jac_du_dv, jac_du_dw, jac_dv_dw};
pub use recovery::{cons_to_prim, cons_to_prim_with_guess, RecoveryDiagnostics};

use nalgebra::{SMatrix, SVector, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::PhysicsError;

pub type Vec3 = Vector3<f64>;
pub type Vec8 = SVector<f64, 8>;
pub type Mat8 = SMatrix<f64, 8, 8>;

/// Coordinate direction of a flux.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    X,
    Y,
    Z,
}

impl Direction {
    pub const ALL: [Direction; 3] = [Direction::X, Direction::Y, Direction::Z];

    /// Zero-based vector component index.
    #[inline]
    pub fn axis(self) -> usize {
        match self {
            Direction::X => 0,
            Direction::Y => 1,
            Direction::Z => 2,
        }
    }

    pub fn from_axis(axis: usize) -> Option<Self> {
        match axis {
            0 => Some(Direction::X),
            1 => Some(Direction::Y),
            2 => Some(Direction::Z),
            _ => None,
        }
    }
}

/// Ideal gas equation of state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eos {
    gamma: f64,
}

impl Eos {
    pub fn new(gamma_adiabatic: f64) -> Result<Self, PhysicsError> {
        if !(gamma_adiabatic > 1.0) || !gamma_adiabatic.is_finite() {
            return Err(PhysicsError::InvalidAdiabaticIndex(gamma_adiabatic));
        }
        Ok(Self { gamma: gamma_adiabatic })
    }

    #[inline]
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `Γ / (Γ - 1)`
    #[inline]
    pub fn enthalpy_factor(&self) -> f64 {
        self.gamma / (self.gamma - 1.0)
    }

    #[inline]
    pub fn specific_internal_energy(&self, rho: f64, p: f64) -> f64 {
        p / ((self.gamma - 1.0) * rho)
    }
}

impl Default for Eos {
    fn default() -> Self {
        Self { gamma: 5.0 / 3.0 }
    }
}

/// Primitive variables `(ρ, v, B, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrimState {
    pub rho: f64,
    pub v: Vec3,
    pub b: Vec3,
    pub p: f64,
}

/// Conservative variables `(D, m, B, E)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConsState {
    pub d: f64,
    pub m: Vec3,
    pub b: Vec3,
    pub e: f64,
}

/// Entropy variables together with the scalar potentials that appear in the
/// discrete entropy identities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyVars {
    pub w: Vec8,
    /// `φ = (ργ/p)(v·B)`
    pub phi: f64,
    /// `ϕ = W·U - ℰ`
    pub varphi: f64,
    /// Potential fluxes `ψ_i = ϕ v_i`.
    pub psi: Vec3,
}

/// Parameter variables `(ρ, u = γv, H = B/γ, β = ρ/p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamVars {
    pub rho: f64,
    pub u: Vec3,
    pub h: Vec3,
    pub beta: f64,
}

impl ParamVars {
    /// Lorentz factor recovered from `u`.
    #[inline]
    pub fn lorentz(&self) -> f64 {
        (1.0 + self.u.norm_squared()).sqrt()
    }
}

/// Lorentz factor `1/sqrt(1 - |v|²)`.
pub fn lorentz_factor(v: &Vec3) -> Result<f64, PhysicsError> {
    let v2 = v.norm_squared();
    if !(v2 < 1.0) {
        return Err(PhysicsError::Superluminal { v2 });
    }
    Ok(1.0 / (1.0 - v2).sqrt())
}

/// `h = 1 + Γp/((Γ-1)ρ)`
#[inline]
pub fn specific_enthalpy(rho: f64, p: f64, eos: &Eos) -> f64 {
    1.0 + eos.enthalpy_factor() * p / rho
}

/// Thermodynamic entropy `S = ln(p ρ^{-Γ})`.
#[inline]
pub fn thermo_entropy(rho: f64, p: f64, eos: &Eos) -> f64 {
    p.ln() - eos.gamma() * rho.ln()
}

impl PrimState {
    /// Validated constructor.
    pub fn new(rho: f64, v: [f64; 3], b: [f64; 3], p: f64) -> Result<Self, PhysicsError> {
        let state = Self { rho, v: Vec3::from(v), b: Vec3::from(b), p };
        state.validate()?;
        Ok(state)
    }

    /// Builds a state from the usual 8-tuple ordering `(ρ, v1, v2, v3, B1, B2, B3, p)`.
    pub fn from_array(a: [f64; 8]) -> Result<Self, PhysicsError> {
        Self::new(a[0], [a[1], a[2], a[3]], [a[4], a[5], a[6]], a[7])
    }

    pub fn to_array(&self) -> [f64; 8] {
        [self.rho, self.v[0], self.v[1], self.v[2], self.b[0], self.b[1], self.b[2], self.p]
    }

    pub fn validate(&self) -> Result<(), PhysicsError> {
        let finite = self.rho.is_finite()
            && self.p.is_finite()
            && self.v.iter().all(|x| x.is_finite())
            && self.b.iter().all(|x| x.is_finite());
        if !finite {
            return Err(PhysicsError::NonFinite);
        }
        if !(self.rho > 0.0) {
            return Err(PhysicsError::NonPositiveDensity(self.rho));
        }
        if !(self.p > 0.0) {
            return Err(PhysicsError::NonPositivePressure(self.p));
        }
        let v2 = self.v.norm_squared();
        if !(v2 < 1.0) {
            return Err(PhysicsError::Superluminal { v2 });
        }
        Ok(())
    }

    #[inline]
    pub fn lorentz(&self) -> f64 {
        1.0 / (1.0 - self.v.norm_squared()).sqrt()
    }

    #[inline]
    pub fn enthalpy(&self, eos: &Eos) -> f64 {
        specific_enthalpy(self.rho, self.p, eos)
    }

    #[inline]
    pub fn entropy(&self, eos: &Eos) -> f64 {
        thermo_entropy(self.rho, self.p, eos)
    }

    /// Magnetic pressure `½(|B|²/γ² + (v·B)²)`.
    #[inline]
    pub fn magnetic_pressure(&self) -> f64 {
        let vb = self.v.dot(&self.b);
        0.5 * (self.b.norm_squared() * (1.0 - self.v.norm_squared()) + vb * vb)
    }

    #[inline]
    pub fn total_pressure(&self) -> f64 {
        self.p + self.magnetic_pressure()
    }

    pub fn param_vars(&self) -> ParamVars {
        let gamma = self.lorentz();
        ParamVars { rho: self.rho, u: self.v * gamma, h: self.b / gamma, beta: self.rho / self.p }
    }

    /// Swaps vector components `a` and `b` of both velocity and magnetic field.
    pub fn permuted(&self, a: usize, b: usize) -> Self {
        let mut out = *self;
        out.v.swap_rows(a, b);
        out.b.swap_rows(a, b);
        out
    }
}

impl ConsState {
    pub fn to_vec8(&self) -> Vec8 {
        Vec8::from([self.d, self.m[0], self.m[1], self.m[2], self.b[0], self.b[1], self.b[2], self.e])
    }

    pub fn from_vec8(u: &Vec8) -> Self {
        Self { d: u[0], m: Vec3::new(u[1], u[2], u[3]), b: Vec3::new(u[4], u[5], u[6]), e: u[7] }
    }
}

/// Primitive to conservative map.
pub fn prim_to_cons(state: &PrimState, eos: &Eos) -> Result<ConsState, PhysicsError> {
    state.validate()?;
    Ok(prim_to_cons_unchecked(state, eos))
}

/// [`prim_to_cons`] without validation, for states already known to be admissible.
#[inline]
pub fn prim_to_cons_unchecked(state: &PrimState, eos: &Eos) -> ConsState {
    let gamma = state.lorentz();
    let g2 = gamma * gamma;
    let rho_h = state.rho * state.enthalpy(eos);
    let b2 = state.b.norm_squared();
    let vb = state.v.dot(&state.b);
    ConsState {
        d: state.rho * gamma,
        m: state.v * (rho_h * g2 + b2) - state.b * vb,
        b: state.b,
        e: rho_h * g2 - state.total_pressure() + b2,
    }
}

/// Entropy pair `(ℰ, 𝒬_i)` with `ℰ = -ργS/(Γ-1)`.
pub fn entropy_pair(state: &PrimState, eos: &Eos, dir: Direction) -> Result<(f64, f64), PhysicsError> {
    state.validate()?;
    let e = entropy_density(state, eos);
    Ok((e, e * state.v[dir.axis()]))
}

/// `ℰ(U) = -ργS/(Γ-1)` for an admissible state.
#[inline]
pub fn entropy_density(state: &PrimState, eos: &Eos) -> f64 {
    -state.rho * state.lorentz() * state.entropy(eos) / (eos.gamma() - 1.0)
}

/// Entropy variables `W = ℰ'(U)` and the companion potentials.
pub fn entropy_vars(state: &PrimState, eos: &Eos) -> Result<EntropyVars, PhysicsError> {
    state.validate()?;
    Ok(entropy_vars_unchecked(state, eos))
}

#[inline]
pub fn entropy_vars_unchecked(state: &PrimState, eos: &Eos) -> EntropyVars {
    let g = eos.gamma();
    let gamma = state.lorentz();
    let v2 = state.v.norm_squared();
    let vb = state.v.dot(&state.b);
    let s = state.entropy(eos);
    let rg_p = state.rho * gamma / state.p;
    let bw = (state.b * (1.0 - v2) + state.v * vb) * rg_p;
    let w = Vec8::from([
        (g - s) / (g - 1.0) + state.rho / state.p,
        rg_p * state.v[0],
        rg_p * state.v[1],
        rg_p * state.v[2],
        bw[0],
        bw[1],
        bw[2],
        -rg_p,
    ]);
    let b2 = state.b.norm_squared();
    let varphi = state.rho * gamma + 0.5 * rg_p * ((1.0 - v2) * b2 + vb * vb);
    EntropyVars { w, phi: rg_p * vb, varphi, psi: state.v * varphi }
}

/// Inverse of the entropy-variable map. `W` is admissible whenever
/// `-w₈ > |(w₁, w₂, w₃)|`, so every convex combination of admissible entropy
/// variables maps back to an admissible state.
pub fn prim_from_entropy_vars(w: &Vec8, eos: &Eos) -> Result<PrimState, PhysicsError> {
    let g = eos.gamma();
    let a = -w[7];
    let wv = Vec3::new(w[1], w[2], w[3]);
    if !(a > 0.0 && wv.norm() < a) {
        return Err(PhysicsError::Superluminal { v2: (wv.norm() / a).powi(2) });
    }
    let v = wv / a;
    let v2 = v.norm_squared();
    let gamma = 1.0 / (1.0 - v2).sqrt();
    let beta = a / gamma;
    // ((1 - v²) I + v vᵀ)⁻¹ = (I - v vᵀ) / (1 - v²)
    let c = Vec3::new(w[4], w[5], w[6]) / a;
    let b = (c - v * v.dot(&c)) / (1.0 - v2);
    let s = g - (g - 1.0) * (w[0] - beta);
    let rho = ((s + beta.ln()) / (1.0 - g)).exp();
    let state = PrimState { rho, v, b, p: rho / beta };
    state.validate()?;
    Ok(state)
}

/// Physical flux `F_i(U)` in direction `dir`.
pub fn physical_flux(state: &PrimState, eos: &Eos, dir: Direction) -> Result<Vec8, PhysicsError> {
    state.validate()?;
    Ok(physical_flux_unchecked(state, eos, dir))
}

#[inline]
pub fn physical_flux_unchecked(state: &PrimState, eos: &Eos, dir: Direction) -> Vec8 {
    let i = dir.axis();
    let u = prim_to_cons_unchecked(state, eos);
    let vi = state.v[i];
    let bi = state.b[i];
    let gamma_inv2 = 1.0 - state.v.norm_squared();
    let vb = state.v.dot(&state.b);
    let mut mom = u.m * vi - (state.b * gamma_inv2 + state.v * vb) * bi;
    mom[i] += state.total_pressure();
    let ind = state.b * vi - state.v * bi;
    Vec8::from([u.d * vi, mom[0], mom[1], mom[2], ind[0], ind[1], ind[2], u.m[i]])
}

/// Godunov–Powell type source vector `S(U)`, the coefficient of `-∇·B`.
#[inline]
pub fn source_vector(state: &PrimState) -> Vec8 {
    let v2 = state.v.norm_squared();
    let vb = state.v.dot(&state.b);
    let sm = state.b * (1.0 - v2) + state.v * vb;
    Vec8::from([0.0, sm[0], sm[1], sm[2], state.v[0], state.v[1], state.v[2], vb])
}

/// How the maximal signal speed is bounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WaveSpeed {
    /// The speed of light, a bound for every admissible state.
    #[default]
    Light,
    /// Fast magnetosonic bound composed with the flow speed, capped at 1.
    Estimate,
}

/// Upper bound for the characteristic speeds in direction `dir`.
pub fn max_signal_speed(state: &PrimState, eos: &Eos, _dir: Direction, mode: WaveSpeed) -> f64 {
    match mode {
        WaveSpeed::Light => 1.0,
        WaveSpeed::Estimate => {
            let rho_h = state.rho * state.enthalpy(eos);
            let cs2 = eos.gamma() * state.p / rho_h;
            // comoving field strength squared
            let vb = state.v.dot(&state.b);
            let b2 = state.b.norm_squared() * (1.0 - state.v.norm_squared()) + vb * vb;
            let ca2 = b2 / (rho_h + b2);
            let af = (cs2 + ca2 - cs2 * ca2).max(0.0).sqrt();
            let vabs = state.v.norm();
            ((vabs + af) / (1.0 + vabs * af)).min(1.0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn eos53() -> Eos {
        Eos::new(5.0 / 3.0).unwrap()
    }

    #[test]
    fn rejects_bad_gamma() {
        assert!(Eos::new(1.0).is_err());
        assert!(Eos::new(0.5).is_err());
        assert!(Eos::new(f64::NAN).is_err());
        assert!(Eos::new(4.0 / 3.0).is_ok());
    }

    #[test]
    fn entropy_variables_invert() {
        let e = eos53();
        for a in [
            [1.08, 0.4, 0.3, 0.2, 2.0, 0.3, 0.3, 0.95],
            [1e-4, 0.0, 0.0, 0.0, 0.1, 0.0, 0.0, 5e-4],
            [10.0, -0.9, 0.3, 0.1, -3.0, 6.0, 1.0, 100.0],
        ] {
            let s = PrimState::from_array(a).unwrap();
            let back = prim_from_entropy_vars(&entropy_vars(&s, &e).unwrap().w, &e).unwrap();
            for (x, y) in back.to_array().iter().zip(a.iter()) {
                assert!((x - y).abs() <= 1e-12 * (1.0 + y.abs()), "{x} vs {y}");
            }
        }
        let mut w =
            entropy_vars(&PrimState::from_array([1.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]).unwrap(), &e).unwrap().w;
        w[7] = -w[1];
        assert!(prim_from_entropy_vars(&w, &e).is_err());
    }

    #[test]
    fn lorentz_factor_examples() {
        assert_eq!(lorentz_factor(&Vec3::zeros()).unwrap(), 1.0);
        assert_relative_eq!(lorentz_factor(&Vec3::new(0.6, 0.0, 0.0)).unwrap(), 1.25, max_relative = 1e-15);
        let a = 0.99 / 2f64.sqrt();
        let half_pi = std::f64::consts::FRAC_PI_2;
        let v = Vec3::new(-a * half_pi.sin(), a * half_pi.sin(), 0.0);
        let g = lorentz_factor(&v).unwrap();
        // 1/sqrt(1 - 0.99²)
        assert_relative_eq!(g, 7.088812050083354, max_relative = 1e-12);
        assert!(lorentz_factor(&Vec3::new(1.0, 0.0, 0.0)).is_err());
        assert!(lorentz_factor(&Vec3::new(0.8, 0.7, 0.0)).is_err());
    }

    #[test]
    fn enthalpy_and_entropy_examples() {
        let e53 = eos53();
        let e43 = Eos::new(4.0 / 3.0).unwrap();
        assert_relative_eq!(specific_enthalpy(1.0, 1.0, &e53), 3.5, max_relative = 1e-15);
        assert_relative_eq!(specific_enthalpy(1.0, 0.01, &e53), 1.025, max_relative = 1e-15);
        assert_relative_eq!(specific_enthalpy(2.0, 1.0, &e43), 3.0, max_relative = 1e-15);
        assert_eq!(thermo_entropy(1.0, 1.0, &e53), 0.0);
        assert_relative_eq!(thermo_entropy(1.0, std::f64::consts::E, &e53), 1.0, max_relative = 1e-15);
        assert_relative_eq!(thermo_entropy(2.0, 1.0, &e53), -(5.0 / 3.0) * 2f64.ln(), max_relative = 1e-15);
    }

    #[test]
    fn prim_to_cons_examples() {
        let eos = eos53();
        let u = prim_to_cons(&PrimState::new(1.0, [0.0; 3], [0.0; 3], 1.0).unwrap(), &eos).unwrap();
        assert_eq!((u.d, u.e), (1.0, 2.5));
        assert_eq!(u.m, Vec3::zeros());
        let u = prim_to_cons(&PrimState::new(1.0, [0.0; 3], [1.0, 0.0, 0.0], 1.0).unwrap(), &eos).unwrap();
        assert_eq!((u.d, u.e), (1.0, 3.0));
        assert_eq!(u.m, Vec3::zeros());

        let bad = PrimState { rho: 1.0, v: Vec3::new(0.9, 0.9, 0.0), b: Vec3::zeros(), p: 1.0 };
        assert!(matches!(prim_to_cons(&bad, &eos), Err(PhysicsError::Superluminal { .. })));
        let bad = PrimState { rho: -1.0, ..bad };
        assert!(prim_to_cons(&bad, &eos).is_err());
    }

    #[test]
    fn entropy_pair_examples() {
        let eos = eos53();
        let rest = PrimState::new(1.0, [0.0; 3], [0.0; 3], 1.0).unwrap();
        let (e, q) = entropy_pair(&rest, &eos, Direction::X).unwrap();
        assert_eq!(e, 0.0);
        assert_eq!(q, 0.0);

        let s = PrimState::new(1.0, [0.5, 0.0, 0.0], [0.0; 3], std::f64::consts::E).unwrap();
        let (e, q) = entropy_pair(&s, &eos, Direction::X).unwrap();
        let gamma = 1.0 / 0.75f64.sqrt();
        assert_relative_eq!(e, -1.5 * gamma, max_relative = 1e-14);
        assert_relative_eq!(e, -1.7320508075688772, max_relative = 1e-14);
        assert_relative_eq!(q, 0.5 * e, max_relative = 1e-15);
        let (_, qy) = entropy_pair(&s, &eos, Direction::Y).unwrap();
        assert_eq!(qy, 0.0);
    }

    #[test]
    fn entropy_vars_rest_state() {
        let eos = eos53();
        let ev = entropy_vars(&PrimState::new(1.0, [0.0; 3], [0.0; 3], 1.0).unwrap(), &eos).unwrap();
        let expected = Vec8::from([3.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0]);
        assert_relative_eq!(ev.w, expected, max_relative = 1e-15);
        assert_eq!(ev.phi, 0.0);
        assert_eq!(ev.varphi, 1.0);
        assert_eq!(ev.psi, Vec3::zeros());
    }

    #[test]
    fn entropy_vars_static_field() {
        let eos = eos53();
        let s = PrimState::new(2.0, [0.0; 3], [1.0, -2.0, 0.5], 0.5).unwrap();
        let ev = entropy_vars(&s, &eos).unwrap();
        assert_eq!(ev.phi, 0.0);
        for c in 0..3 {
            assert_relative_eq!(ev.w[4 + c], 4.0 * s.b[c], max_relative = 1e-15);
        }
    }

    #[test]
    fn physical_flux_examples() {
        let eos = eos53();
        let s = PrimState::new(1.0, [0.0; 3], [1.0, 0.0, 0.0], 1.0).unwrap();
        let f = physical_flux(&s, &eos, Direction::X).unwrap();
        assert_relative_eq!(f, Vec8::from([0.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]), epsilon = 1e-15);

        // zero field: relativistic Euler flux
        let s = PrimState::new(1.3, [0.2, -0.4, 0.1], [0.0; 3], 0.7).unwrap();
        let u = prim_to_cons(&s, &eos).unwrap();
        for dir in Direction::ALL {
            let i = dir.axis();
            let f = physical_flux(&s, &eos, dir).unwrap();
            let mut mom = u.m * s.v[i];
            mom[i] += s.p;
            let expected = Vec8::from([u.d * s.v[i], mom[0], mom[1], mom[2], 0.0, 0.0, 0.0, u.m[i]]);
            assert_relative_eq!(f, expected, max_relative = 1e-14, epsilon = 1e-15);
        }
    }

    #[test]
    fn source_vector_examples() {
        let s = PrimState::new(1.0, [0.0; 3], [1.0, 2.0, 3.0], 1.0).unwrap();
        assert_eq!(source_vector(&s), Vec8::from([0.0, 1.0, 2.0, 3.0, 0.0, 0.0, 0.0, 0.0]));
        let s = PrimState::new(1.0, [0.1, 0.2, 0.3], [0.0; 3], 1.0).unwrap();
        assert_eq!(source_vector(&s), Vec8::from([0.0, 0.0, 0.0, 0.0, 0.1, 0.2, 0.3, 0.0]));
    }

    #[test]
    fn signal_speed_examples() {
        let eos = eos53();
        let rest = PrimState::new(1.0, [0.0; 3], [0.0; 3], 1.0).unwrap();
        assert_eq!(max_signal_speed(&rest, &eos, Direction::X, WaveSpeed::Light), 1.0);
        let cs = max_signal_speed(&rest, &eos, Direction::X, WaveSpeed::Estimate);
        assert_relative_eq!(cs, (5.0 / 3.0 / 3.5f64).sqrt(), max_relative = 1e-14);
        assert_relative_eq!(cs, 0.6900655593423543, max_relative = 1e-12);
    }
}
