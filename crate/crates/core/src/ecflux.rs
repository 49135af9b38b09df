//! Two-point entropy conservative fluxes and their high-order combinations.
//!
//! The two-point flux is written in the parameter variables
//! `z = (ρ, u = γv, H = B/γ, β = ρ/p)`, which make every entropy variable and
//! potential an explicit function of `z`. Arithmetic means are denoted with a
//! `_bar`/`_hat` suffix below; `rho_ln`/`beta_ln` are logarithmic means.
//!
//! The kernel is written for the `x` direction. Fluxes in `y` and `z` use the
//! same kernel with the roles of the vector components relabelled, which is a
//! permutation of the coordinate axes.

use num_rational::Ratio;

use crate::error::{PhysicsError, SchemeError};
use crate::physics::{entropy_vars_unchecked, Direction, EntropyVars, Eos, PrimState, Vec3, Vec8};

/// Relative distance below which the logarithmic mean switches to its series.
const LOG_MEAN_SERIES_THRESHOLD: f64 = 1e-4;

/// Logarithmic mean `(a_R - a_L)/(ln a_R - ln a_L)`.
pub fn log_mean(a_l: f64, a_r: f64) -> Result<f64, PhysicsError> {
    if !(a_l > 0.0 && a_r > 0.0) || !a_l.is_finite() || !a_r.is_finite() {
        return Err(PhysicsError::LogMeanDomain(a_l, a_r));
    }
    Ok(log_mean_unchecked(a_l, a_r))
}

#[inline]
pub(crate) fn log_mean_unchecked(a_l: f64, a_r: f64) -> f64 {
    // With f = (a_L - a_R)/(a_L + a_R): ln(a_L/a_R) = 2 atanh(f), so the mean
    // is (a_L + a_R) f / (2 atanh f). atanh keeps full relative accuracy in f.
    let sum = a_l + a_r;
    let f = (a_l - a_r) / sum;
    if (a_r / a_l - 1.0).abs() < LOG_MEAN_SERIES_THRESHOLD {
        let u = f * f;
        // atanh(f)/f = 1 + f²/3 + f⁴/5 + f⁶/7 + ...
        let ratio = 1.0 + u * (1.0 / 3.0 + u * (1.0 / 5.0 + u * (1.0 / 7.0)));
        0.5 * sum / ratio
    } else {
        0.5 * sum * f / f.atanh()
    }
}

/// Per-state quantities consumed by the two-point flux, computed once per
/// grid point.
#[derive(Debug, Clone, Copy)]
pub struct FluxPoint {
    pub rho: f64,
    pub beta: f64,
    pub gamma: f64,
    pub u: Vec3,
    pub h: Vec3,
    pub b: Vec3,
    /// Magnetic pressure `½(|H|² + (u·H)²)`.
    pub pm: f64,
    /// `β u`
    pub beta_u: Vec3,
    /// `u·H = v·B`
    pub uh: f64,
    /// `γ u·H`
    pub gamma_uh: f64,
}

impl FluxPoint {
    pub fn new(s: &PrimState) -> Self {
        let gamma = s.lorentz();
        let u = s.v * gamma;
        let h = s.b / gamma;
        let beta = s.rho / s.p;
        let uh = u.dot(&h);
        Self {
            rho: s.rho,
            beta,
            gamma,
            u,
            h,
            b: s.b,
            pm: 0.5 * (h.norm_squared() + uh * uh),
            beta_u: u * beta,
            uh,
            gamma_uh: gamma * uh,
        }
    }
}

/// Interface averages entering the two-point flux.
#[derive(Debug, Clone, Copy)]
pub struct InterfaceMeans {
    pub rho_bar: f64,
    pub beta_bar: f64,
    pub gamma_bar: f64,
    pub u_hat: Vec3,
    pub h_hat: Vec3,
    /// Mean normal field component `⟦B_i⟧` for the flux direction.
    pub b_normal: f64,
    pub pm_bar: f64,
    /// `μ = mean(βu)`
    pub mu: Vec3,
    /// `ϑ = mean(u·H)`
    pub vartheta: f64,
    /// `mean(γ u·H)`
    pub gamma_uh_bar: f64,
    pub rho_ln: f64,
    pub beta_ln: f64,
    pub e_hat: f64,
    pub theta_hat: f64,
    pub theta: f64,
    pub ptot_hat: f64,
}

impl InterfaceMeans {
    pub fn new(l: &FluxPoint, r: &FluxPoint, eos: &Eos, axis: usize) -> Self {
        let rho_bar = 0.5 * (l.rho + r.rho);
        let beta_bar = 0.5 * (l.beta + r.beta);
        let gamma_bar = 0.5 * (l.gamma + r.gamma);
        let u_hat = (l.u + r.u) * 0.5;
        let h_hat = (l.h + r.h) * 0.5;
        let mu = (l.beta_u + r.beta_u) * 0.5;
        let rho_ln = log_mean_unchecked(l.rho, r.rho);
        let beta_ln = log_mean_unchecked(l.beta, r.beta);
        let theta_hat = beta_bar * (beta_bar + u_hat.dot(&mu));
        let theta = theta_hat * (u_hat.norm_squared() - gamma_bar * gamma_bar);
        let pm_bar = 0.5 * (l.pm + r.pm);
        Self {
            rho_bar,
            beta_bar,
            gamma_bar,
            u_hat,
            h_hat,
            b_normal: 0.5 * (l.b[axis] + r.b[axis]),
            pm_bar,
            mu,
            vartheta: 0.5 * (l.uh + r.uh),
            gamma_uh_bar: 0.5 * (l.gamma_uh + r.gamma_uh),
            rho_ln,
            beta_ln,
            e_hat: 1.0 + 1.0 / (beta_ln * (eos.gamma() - 1.0)),
            theta_hat,
            theta,
            ptot_hat: rho_bar / beta_bar + pm_bar,
        }
    }
}

/// Two-point entropy conservative flux between precomputed points along `axis`.
#[inline]
pub fn ec_flux_points(l: &FluxPoint, r: &FluxPoint, eos: &Eos, axis: usize) -> Vec8 {
    let m = InterfaceMeans::new(l, r, eos, axis);
    ec_flux_from_means(&m, axis)
}

pub fn ec_flux_from_means(m: &InterfaceMeans, axis: usize) -> Vec8 {
    let u = &m.u_hat;
    let hh = &m.h_hat;
    let mu = &m.mu;
    let bb = m.beta_bar;
    let gb = m.gamma_bar;
    let th = m.vartheta;
    let ui = u[axis];
    let mui = mu[axis];
    let bi = m.b_normal;

    let uh = u.dot(hh);
    let umu = u.dot(mu);
    let muh = mu.dot(hh);
    let u2 = u.norm_squared();
    let h2 = hh.norm_squared();
    let a = bb + umu;
    let g2mu2 = gb * gb - u2;

    let sigma = 2.0 * mui * uh * (muh - th * bb) - a * (ui * (m.rho_bar + m.rho_ln * bb * m.e_hat) + h2 * mui);

    let xi_vec = u * sigma
        + (hh * (hh + u * th).dot(mu) + u * (th * (th * bb - muh))) * (g2mu2 * mui)
        + (u * (2.0 * uh) + (hh - u * th) * g2mu2) * (bi * bb * bb * gb)
        + u * (bb * bi * a * (th * gb - m.gamma_uh_bar));

    let pi_vec = hh * (mui * a) + u * (mui * (th * bb - muh) - gb * bi * bb * bb);

    let xi = a * (gb * m.gamma_uh_bar - th * u2) - 2.0 * bb * gb * gb * uh;

    let mut mom = xi_vec / m.theta;
    mom[axis] += m.ptot_hat;
    let ind = pi_vec / m.theta_hat;
    Vec8::from([m.rho_ln * ui, mom[0], mom[1], mom[2], ind[0], ind[1], ind[2], (sigma * gb - bb * bi * xi) / m.theta])
}

/// Two-point entropy conservative flux `F_i*(V_L, V_R)`.
pub fn ec_flux(l: &PrimState, r: &PrimState, eos: &Eos, dir: Direction) -> Result<Vec8, PhysicsError> {
    l.validate()?;
    r.validate()?;
    Ok(ec_flux_points(&FluxPoint::new(l), &FluxPoint::new(r), eos, dir.axis()))
}

/// Entropy conservative flux for vanishing magnetic field.
pub fn rhd_ec_flux(l: &PrimState, r: &PrimState, eos: &Eos, dir: Direction) -> Result<Vec8, PhysicsError> {
    l.validate()?;
    r.validate()?;
    for s in [l, r] {
        let bn = s.b.norm();
        if bn != 0.0 {
            return Err(PhysicsError::NonzeroField(bn));
        }
    }
    let i = dir.axis();
    let (pl, pr) = (FluxPoint::new(l), FluxPoint::new(r));
    let rho_bar = 0.5 * (pl.rho + pr.rho);
    let beta_bar = 0.5 * (pl.beta + pr.beta);
    let gamma_bar = 0.5 * (pl.gamma + pr.gamma);
    let u_hat = (pl.u + pr.u) * 0.5;
    let rho_ln = log_mean_unchecked(pl.rho, pr.rho);
    let beta_ln = log_mean_unchecked(pl.beta, pr.beta);
    let e_hat = 1.0 + 1.0 / (beta_ln * (eos.gamma() - 1.0));
    let rho_h = (rho_bar / beta_bar + rho_ln * e_hat) / (gamma_bar * gamma_bar - u_hat.norm_squared());
    let ui = u_hat[i];
    let mut mom = u_hat * (rho_h * ui);
    mom[i] += rho_bar / beta_bar;
    Ok(Vec8::from([rho_ln * ui, mom[0], mom[1], mom[2], 0.0, 0.0, 0.0, rho_h * gamma_bar * ui]))
}

/// Per-state entropy data used by numerical entropy fluxes.
#[derive(Debug, Clone, Copy)]
pub struct EntropyPoint {
    pub w: Vec8,
    pub phi: f64,
    pub varphi: f64,
    pub v: Vec3,
    pub b: Vec3,
}

impl EntropyPoint {
    pub fn new(s: &PrimState, eos: &Eos) -> Self {
        let ev: EntropyVars = entropy_vars_unchecked(s, eos);
        Self { w: ev.w, phi: ev.phi, varphi: ev.varphi, v: s.v, b: s.b }
    }

    #[inline]
    pub fn psi(&self, axis: usize) -> f64 {
        self.varphi * self.v[axis]
    }
}

/// `Q̃(U_L, U_R) = ½(W_L + W_R)·F* + mean(φ) mean(B_i) - mean(ψ_i)`
#[inline]
pub fn entropy_flux_points(l: &EntropyPoint, r: &EntropyPoint, flux: &Vec8, axis: usize) -> f64 {
    0.5 * (l.w + r.w).dot(flux) + 0.25 * (l.phi + r.phi) * (l.b[axis] + r.b[axis]) - 0.5 * (l.psi(axis) + r.psi(axis))
}

/// Sum of the magnitudes of the terms of [`entropy_flux_points`], the scale
/// of its rounding error.
pub fn entropy_flux_points_magnitude(l: &EntropyPoint, r: &EntropyPoint, flux: &Vec8, axis: usize) -> f64 {
    0.5 * (l.w.abs() + r.w.abs()).dot(&flux.abs())
        + 0.25 * (l.phi.abs() + r.phi.abs()) * (l.b[axis].abs() + r.b[axis].abs())
        + 0.5 * (l.psi(axis).abs() + r.psi(axis).abs())
}

/// Numerical entropy flux consistent with a two-point entropy conservative flux.
pub fn numerical_entropy_flux(
    l: &PrimState,
    r: &PrimState,
    flux: &Vec8,
    eos: &Eos,
    dir: Direction,
) -> Result<f64, PhysicsError> {
    l.validate()?;
    r.validate()?;
    Ok(entropy_flux_points(&EntropyPoint::new(l, eos), &EntropyPoint::new(r, eos), flux, dir.axis()))
}

/// Coefficients `α_{k,r}` of the `2k`th-order linear combination.
#[derive(Debug, Clone, PartialEq)]
pub struct CombinationCoeffs {
    k: usize,
    exact: Vec<Ratio<i64>>,
    alpha: Vec<f64>,
}

impl CombinationCoeffs {
    pub fn k(&self) -> usize {
        self.k
    }

    /// `α_{k,1..k}` as floating point values.
    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    /// `α_{k,1..k}` as exact rationals.
    pub fn exact(&self) -> &[Ratio<i64>] {
        &self.exact
    }

    /// Residuals of `Σ r α_r = 1` and `Σ r^{2s-1} α_r = 0` for `s = 2..k`.
    pub fn residuals(&self) -> Vec<f64> {
        (1..=self.k)
            .map(|s| {
                let target = if s == 1 { 1.0 } else { 0.0 };
                let sum: f64 =
                    self.alpha.iter().enumerate().map(|(idx, a)| ((idx + 1) as f64).powi(2 * s as i32 - 1) * a).sum();
                sum - target
            })
            .collect()
    }
}

pub const MAX_ORDER_INDEX: usize = 4;

/// Solves the moment conditions for `α_{k,r}` in exact rational arithmetic.
pub fn combination_coeffs(k: usize) -> Result<CombinationCoeffs, SchemeError> {
    if !(1..=MAX_ORDER_INDEX).contains(&k) {
        return Err(SchemeError::UnsupportedOrder(k));
    }
    // rows s = 1..k: Σ_r r^{2s-1} α_r = δ_{s1}
    let mut a: Vec<Vec<Ratio<i64>>> = (1..=k)
        .map(|s| {
            let mut row: Vec<Ratio<i64>> =
                (1..=k).map(|r| Ratio::from_integer((r as i64).pow(2 * s as u32 - 1))).collect();
            row.push(Ratio::from_integer(if s == 1 { 1 } else { 0 }));
            row
        })
        .collect();
    for col in 0..k {
        let pivot = (col..k).find(|&r| a[r][col] != Ratio::from_integer(0)).ok_or(SchemeError::UnsupportedOrder(k))?;
        a.swap(col, pivot);
        let p = a[col][col];
        for c in col..=k {
            a[col][c] /= p;
        }
        for r in 0..k {
            if r != col {
                let factor = a[r][col];
                if factor != Ratio::from_integer(0) {
                    for c in col..=k {
                        let delta = factor * a[col][c];
                        a[r][c] -= delta;
                    }
                }
            }
        }
    }
    let exact: Vec<Ratio<i64>> = a.iter().map(|row| row[k]).collect();
    let alpha = exact.iter().map(|q| *q.numer() as f64 / *q.denom() as f64).collect();
    Ok(CombinationCoeffs { k, exact, alpha })
}

/// `Σ_r α_r Σ_{s<r} f(i-s, i-s+r)` over a stencil whose interface sits between
/// positions `k-1` and `k`.
pub(crate) fn combine_pairs<T, F>(coeffs: &[f64], mut pair: F) -> T
where
    T: std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
    F: FnMut(usize, usize) -> T,
{
    let k = coeffs.len();
    let i = k - 1;
    let mut total = T::default();
    for (idx, &alpha) in coeffs.iter().enumerate() {
        let r = idx + 1;
        let mut inner = T::default();
        for s in 0..r {
            inner = inner + pair(i - s, i - s + r);
        }
        total = total + inner * alpha;
    }
    total
}

fn check_stencil(len: usize, k: usize) -> Result<(), SchemeError> {
    if len != 2 * k {
        return Err(SchemeError::StencilLength { expected: 2 * k, got: len });
    }
    Ok(())
}

/// High-order entropy conservative flux at the centre of a `2k`-point stencil.
pub fn highorder_ec_flux(stencil: &[PrimState], k: usize, eos: &Eos, dir: Direction) -> Result<Vec8, SchemeError> {
    let coeffs = combination_coeffs(k)?;
    check_stencil(stencil.len(), k)?;
    for s in stencil {
        s.validate()?;
    }
    let pts: Vec<FluxPoint> = stencil.iter().map(FluxPoint::new).collect();
    let axis = dir.axis();
    Ok(combine_pairs(coeffs.alpha(), |a, b| Vec8Sum(ec_flux_points(&pts[a], &pts[b], eos, axis))).0)
}

/// High-order interface average of the normal field, paired with
/// [`highorder_ec_flux`] in the source discretization.
pub fn highorder_b_average(stencil: &[f64], k: usize) -> Result<f64, SchemeError> {
    let coeffs = combination_coeffs(k)?;
    check_stencil(stencil.len(), k)?;
    Ok(combine_pairs(coeffs.alpha(), |a, b| 0.5 * (stencil[a] + stencil[b])))
}

/// High-order numerical entropy flux `Σ_r α_r Σ_s Q̃(U_{i-s}, U_{i-s+r})`.
pub fn highorder_entropy_flux(stencil: &[PrimState], k: usize, eos: &Eos, dir: Direction) -> Result<f64, SchemeError> {
    let coeffs = combination_coeffs(k)?;
    check_stencil(stencil.len(), k)?;
    for s in stencil {
        s.validate()?;
    }
    let fp: Vec<FluxPoint> = stencil.iter().map(FluxPoint::new).collect();
    let ep: Vec<EntropyPoint> = stencil.iter().map(|s| EntropyPoint::new(s, eos)).collect();
    let axis = dir.axis();
    Ok(combine_pairs(coeffs.alpha(), |a, b| {
        let f = ec_flux_points(&fp[a], &fp[b], eos, axis);
        entropy_flux_points(&ep[a], &ep[b], &f, axis)
    }))
}

/// Newtype so `Vec8` satisfies the `Default` + arithmetic bounds of [`combine_pairs`].
#[derive(Clone, Copy, Default)]
pub(crate) struct Vec8Sum(pub Vec8);

impl std::ops::Add for Vec8Sum {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Vec8Sum(self.0 + o.0)
    }
}

impl std::ops::Mul<f64> for Vec8Sum {
    type Output = Self;
    fn mul(self, a: f64) -> Self {
        Vec8Sum(self.0 * a)
    }
}

/// Flux and entropy flux accumulated together through [`combine_pairs`].
#[derive(Clone, Copy, Default)]
pub(crate) struct FluxWithEntropy {
    pub flux: Vec8,
    pub entropy: f64,
}

impl std::ops::Add for FluxWithEntropy {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { flux: self.flux + o.flux, entropy: self.entropy + o.entropy }
    }
}

impl std::ops::Mul<f64> for FluxWithEntropy {
    type Output = Self;
    fn mul(self, a: f64) -> Self {
        Self { flux: self.flux * a, entropy: self.entropy * a }
    }
}
