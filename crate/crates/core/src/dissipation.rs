//! Entropy dissipation operators.
//!
//! At every interface the entropy variables are scaled by a factor `R` with
//! `R Rᵀ = ∂U/∂W`, reconstructed componentwise, and the resulting jump `⟪ω⟫`
//! enters the flux as `-½ R |Λ| ⟪ω⟫`, with `|Λ| = λ̂ I` and `R` the Cholesky
//! factor of a symmetric positive definite matrix `D` chosen per interface by
//! [`InterfaceMatrix`].

use std::sync::OnceLock;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::ecflux::{
    combination_coeffs, combine_pairs, ec_flux_points, entropy_flux_points, EntropyPoint, FluxPoint, FluxWithEntropy,
};
use crate::error::{PhysicsError, SchemeError};
use crate::physics::{
    jac_du_dw, max_signal_speed, prim_to_cons_unchecked, Direction, Eos, Mat8, PrimState, Vec8, WaveSpeed,
};

/// How the dissipative part of the interface flux is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum DissipationMode {
    /// Entropy conservative, no dissipation.
    #[default]
    None,
    /// Jump of the scaled entropy variables between the two neighbours.
    FirstOrder,
    /// `2k`th-order ENO reconstruction of the scaled entropy variables.
    Eno,
    /// Fifth-order WENO reconstruction followed by the sign switch.
    Weno,
}

impl DissipationMode {
    /// Number of points on each side of the interface read by the
    /// reconstruction.
    pub fn half_width(self, k: usize) -> usize {
        match self {
            DissipationMode::None => 0,
            DissipationMode::FirstOrder => 1,
            DissipationMode::Eno => 2 * k,
            DissipationMode::Weno => 3,
        }
    }

    pub fn is_dissipative(self) -> bool {
        self != DissipationMode::None
    }

    /// Checks the pairing between the mode and the EC order index.
    pub fn check_order(self, k: usize) -> Result<(), SchemeError> {
        match self {
            DissipationMode::FirstOrder if k != 1 => {
                Err(SchemeError::Config(format!("first-order dissipation pairs with k = 1, got k = {k}")))
            }
            DissipationMode::Weno if k != 3 => {
                Err(SchemeError::Config(format!("fifth-order WENO dissipation pairs with k = 3, got k = {k}")))
            }
            _ => Ok(()),
        }
    }
}

/// Matrix `D = R Rᵀ` that scales the entropy-variable jump at an interface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum InterfaceMatrix {
    /// `∂U/∂W` at the arithmetic mean of the two primitive states.
    ArithmeticMean,
    /// The arithmetic-mean matrix with a rank-two secant correction so that
    /// `D ⟦W⟧ = ⟦U⟧` holds exactly.
    #[default]
    Secant,
}

/// Relative size of `⟦W⟧` below which the secant correction is skipped: the
/// midpoint matrix already matches `⟦U⟧` to roundoff there, while `⟦U⟧`
/// itself would be dominated by cancellation.
const SECANT_MIN_JUMP: f64 = 1e-7;

/// Scaling matrix and diagonal wave-speed matrix at one interface.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingAtInterface {
    pub r: Mat8,
    pub lambda_abs: Vec8,
}

impl ScalingAtInterface {
    /// Rusanov-type scaling: `R` from `matrix` and `|Λ| = λ̂ I` with `λ̂` the
    /// largest signal speed over the two states and the interface state.
    /// `wl`, `wr` are the entropy variables of `l`, `r`.
    #[allow(clippy::too_many_arguments)]
    pub fn rusanov(
        l: &PrimState,
        r: &PrimState,
        wl: &Vec8,
        wr: &Vec8,
        eos: &Eos,
        dir: Direction,
        wave: WaveSpeed,
        matrix: InterfaceMatrix,
    ) -> Result<Self, PhysicsError> {
        let mid = interface_state(l, r);
        let lambda = [l, r, &mid].iter().map(|s| max_signal_speed(s, eos, dir, wave)).fold(0.0, f64::max);
        let base = symmetric_hessian(&mid, eos)?;
        let axis = dir.axis();
        let r = match matrix {
            InterfaceMatrix::Secant => {
                let du = prim_to_cons_unchecked(r, eos).to_vec8() - prim_to_cons_unchecked(l, eos).to_vec8();
                secant_update(&base, &(wr - wl), &du, wl, wr)
                    .and_then(|d| cholesky_normal_first(&d, axis).ok())
                    .map_or_else(|| cholesky_normal_first(&base, axis), Ok)?
            }
            InterfaceMatrix::ArithmeticMean => cholesky_normal_first(&base, axis)?,
        };
        Ok(Self { r, lambda_abs: Vec8::repeat(lambda) })
    }

    /// `R |Λ| ⟪ω⟫`
    #[inline]
    pub fn apply(&self, jump: &Vec8) -> Vec8 {
        self.r * self.lambda_abs.component_mul(jump)
    }
}

/// Cholesky factor taken with the normal vector components ordered first,
/// `D = P L (P L)ᵀ` with `P` the axis swap. The scaled variables `Rᵀ W` then
/// do not depend on which axis is normal, so the scheme commutes with
/// relabelling the axes.
fn cholesky_normal_first(d: &Mat8, axis: usize) -> Result<Mat8, PhysicsError> {
    if axis == 0 {
        return cholesky_lower(d);
    }
    let mut pd = *d;
    for (a, b) in [(1, 1 + axis), (4, 4 + axis)] {
        pd.swap_rows(a, b);
        pd.swap_columns(a, b);
    }
    let mut l = cholesky_lower(&pd)?;
    l.swap_rows(1, 1 + axis);
    l.swap_rows(4, 4 + axis);
    Ok(l)
}

/// Componentwise arithmetic mean of two primitive states, falling back to
/// the left state if the mean is not admissible.
pub fn interface_state(l: &PrimState, r: &PrimState) -> PrimState {
    let mid =
        PrimState { rho: 0.5 * (l.rho + r.rho), v: (l.v + r.v) * 0.5, b: (l.b + r.b) * 0.5, p: 0.5 * (l.p + r.p) };
    match mid.validate() {
        Ok(()) => mid,
        Err(e) => {
            log::warn!("interface mean state rejected ({e}), using the left state");
            *l
        }
    }
}

/// BFGS-type update of the symmetric positive definite `d` so that the
/// result maps `dw` to `du`. Positive definiteness is kept because
/// `⟦W⟧·⟦U⟧ > 0` for a strictly convex entropy. Returns `None` when the
/// jump is too small to be worth correcting or the curvature test fails.
pub fn secant_update(d: &Mat8, dw: &Vec8, du: &Vec8, wl: &Vec8, wr: &Vec8) -> Option<Mat8> {
    let size = wl.amax().max(wr.amax()).max(1.0);
    if dw.amax() <= SECANT_MIN_JUMP * size {
        return None;
    }
    let ds = d * dw;
    let sds = dw.dot(&ds);
    let sy = dw.dot(du);
    if !(sds > 0.0 && sy > 0.0) {
        return None;
    }
    let out = d - ds * ds.transpose() / sds + du * du.transpose() / sy;
    Some((out + out.transpose()) * 0.5)
}

fn symmetric_hessian(v: &PrimState, eos: &Eos) -> Result<Mat8, PhysicsError> {
    v.validate()?;
    let h = jac_du_dw(v, eos);
    Ok((h + h.transpose()) * 0.5)
}

/// Lower-triangular factor of `d`, computed on the unit-diagonal matrix
/// `S d S` with `S = diag(d)^{-1/2}` to tame the spread of scales.
fn cholesky_lower(d: &Mat8) -> Result<Mat8, PhysicsError> {
    let diag = d.diagonal();
    if !diag.iter().all(|x| *x > 0.0 && x.is_finite()) {
        return Err(PhysicsError::NotPositiveDefinite);
    }
    let s = diag.map(|x| 1.0 / x.sqrt());
    let scaled = Mat8::from_fn(|i, j| d[(i, j)] * s[i] * s[j]);
    let l = scaled.cholesky().ok_or(PhysicsError::NotPositiveDefinite)?.l();
    Ok(Mat8::from_fn(|i, j| l[(i, j)] / s[i]))
}

/// Lower-triangular `R` with `R Rᵀ = ∂U/∂W`.
pub fn scaling_factor(v: &PrimState, eos: &Eos) -> Result<Mat8, PhysicsError> {
    cholesky_lower(&symmetric_hessian(v, eos)?)
}

/// `ω_j = Rᵀ W_j` for every stencil point.
pub fn scaled_entropy_vars(w: &[Vec8], r: &Mat8) -> Vec<Vec8> {
    let rt = r.transpose();
    w.iter().map(|wj| rt * wj).collect()
}

/// Largest ENO stencil (number of cells) supported.
pub const MAX_ENO_CELLS: usize = 8;

/// Reconstruction coefficients `c[r+1][j]` for `m` cells: the value at the
/// right edge of cell `i` from the averages of cells `i-r..i-r+m-1`.
fn eno_table(m: usize) -> &'static [Vec<f64>] {
    static TABLES: OnceLock<Vec<Vec<Vec<f64>>>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| (0..=MAX_ENO_CELLS).map(reconstruction_coeffs).collect());
    &tables[m]
}

fn reconstruction_coeffs(m: usize) -> Vec<Vec<f64>> {
    if m == 0 {
        return Vec::new();
    }
    let k = m as i64;
    let rows = (-1..k).map(|r| {
        (0..k)
            .map(|j| {
                let mut c = Ratio::from_integer(0i64);
                for mm in (j + 1)..=k {
                    let mut num = Ratio::from_integer(0i64);
                    for l in (0..=k).filter(|&l| l != mm) {
                        let prod: i64 = (0..=k).filter(|&q| q != mm && q != l).map(|q| r - q + 1).product();
                        num += Ratio::from_integer(prod);
                    }
                    let den: i64 = (0..=k).filter(|&q| q != mm).map(|q| mm - q).product();
                    c += num / Ratio::from_integer(den);
                }
                *c.numer() as f64 / *c.denom() as f64
            })
            .collect()
    });
    rows.collect()
}

fn undivided(v: &[f64], scratch: &mut [f64]) -> f64 {
    let n = v.len();
    scratch[..n].copy_from_slice(v);
    for level in 1..n {
        for j in 0..n - level {
            scratch[j] = scratch[j + 1] - scratch[j];
        }
    }
    scratch[0]
}

/// `2k`th-order ENO limits `(ω⁻, ω⁺)` at the interface between positions
/// `2k-1` and `2k` of `values`, which holds `4k` consecutive point values
/// treated as cell averages.
pub fn eno_reconstruct(values: &[f64], k: usize) -> Result<(f64, f64), SchemeError> {
    let m = 2 * k;
    if k == 0 || m > MAX_ENO_CELLS {
        return Err(SchemeError::UnsupportedOrder(k));
    }
    if values.len() != 2 * m {
        return Err(SchemeError::StencilLength { expected: 2 * m, got: values.len() });
    }
    Ok(eno_limits(values, k))
}

#[inline]
pub(crate) fn eno_limits(values: &[f64], k: usize) -> (f64, f64) {
    let m = 2 * k;
    let table = eno_table(m);
    let mut scratch = [0.0; MAX_ENO_CELLS + 1];
    let i = m - 1;

    // Both limits are written as corrections to the same base value so that
    // coinciding stencils give bitwise identical limits (zero jump).
    let base = values[i];
    let limit = |start: usize, row: &[f64]| {
        let mut acc = base;
        for (j, c) in row.iter().enumerate() {
            acc += c * (values[start + j] - base);
        }
        acc
    };
    // left limit: stencils of cell i
    let sl = eno_stencil_bounded(values, i, m, &mut scratch);
    let minus = limit(sl, &table[i + 1 - sl]);
    // right limit: left edge of cell i+1
    let sr = eno_stencil_bounded(values, i + 1, m, &mut scratch);
    let plus = limit(sr, &table[i + 1 - sr]);
    (minus, plus)
}

#[inline]
/// Leftmost cell of the `m`-cell ENO stencil grown from `start` by comparing
/// undivided differences; ties choose the left candidate.
fn eno_stencil_bounded(values: &[f64], start: usize, m: usize, scratch: &mut [f64]) -> usize {
    let mut left = start;
    for level in 1..m {
        let can_left = left >= 1;
        let can_right = left + level < values.len();
        let go_left = match (can_left, can_right) {
            (true, true) => {
                let dl = undivided(&values[left - 1..left + level], scratch);
                let dr = undivided(&values[left..left + level + 1], scratch);
                dl.abs() <= dr.abs()
            }
            (true, false) => true,
            _ => false,
        };
        if go_left {
            left -= 1;
        }
    }
    left
}

/// ENO-reconstructed jump `ω⁺ - ω⁻`.
pub fn eno_jump(values: &[f64], k: usize) -> Result<f64, SchemeError> {
    eno_reconstruct(values, k).map(|(m, p)| eno_guarded_jump(values, m, p))
}

/// Multiple of `ε max|ω|` below which an ENO jump is treated as zero.
const ENO_ROUNDOFF: f64 = 64.0 * f64::EPSILON;

/// `p - m`, or zero when it is within roundoff of the data. Two different
/// stencils can produce the same exact limit with differently rounded
/// results, and the resulting 1-ulp jump may oppose the cell jump.
#[inline]
fn eno_guarded_jump(values: &[f64], m: f64, p: f64) -> f64 {
    let scale = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let jump = p - m;
    if jump.abs() <= ENO_ROUNDOFF * scale {
        0.0
    } else {
        jump
    }
}

const WENO_EPS: f64 = 1e-6;

/// Fifth-order WENO value at the right edge of the centre cell `c` of
/// `(a, b, c, d, e)`.
#[inline]
fn weno5_edge(a: f64, b: f64, c: f64, d: f64, e: f64) -> f64 {
    let (da, db, dd, de) = (a - c, b - c, d - c, e - c);
    let q0 = (2.0 * da - 7.0 * db) / 6.0;
    let q1 = (-db + 2.0 * dd) / 6.0;
    let q2 = (5.0 * dd - de) / 6.0;
    let s0 = a - 2.0 * b + c;
    let t0 = a - 4.0 * b + 3.0 * c;
    let s1 = b - 2.0 * c + d;
    let t1 = b - d;
    let s2 = c - 2.0 * d + e;
    let t2 = 3.0 * c - 4.0 * d + e;
    let b0 = 13.0 / 12.0 * s0 * s0 + 0.25 * t0 * t0;
    let b1 = 13.0 / 12.0 * s1 * s1 + 0.25 * t1 * t1;
    let b2 = 13.0 / 12.0 * s2 * s2 + 0.25 * t2 * t2;
    let a0 = 0.1 / ((WENO_EPS + b0) * (WENO_EPS + b0));
    let a1 = 0.6 / ((WENO_EPS + b1) * (WENO_EPS + b1));
    let a2 = 0.3 / ((WENO_EPS + b2) * (WENO_EPS + b2));
    c + (a0 * q0 + a1 * q1 + a2 * q2) / (a0 + a1 + a2)
}

/// Fifth-order WENO limits `(ω⁻, ω⁺)` at the interface between positions 2
/// and 3 of six consecutive values.
pub fn weno5_reconstruct(values: &[f64]) -> Result<(f64, f64), SchemeError> {
    if values.len() != 6 {
        return Err(SchemeError::StencilLength { expected: 6, got: values.len() });
    }
    Ok(weno5_limits(values))
}

#[inline]
pub(crate) fn weno5_limits(v: &[f64]) -> (f64, f64) {
    let minus = weno5_edge(v[0], v[1], v[2], v[3], v[4]);
    let plus = weno5_edge(v[5], v[4], v[3], v[2], v[1]);
    (minus, plus)
}

/// Keeps the reconstructed jump only when it has the sign of the cell jump.
#[inline]
pub fn sign_switch(reconstructed_jump: f64, cell_jump: f64) -> f64 {
    if reconstructed_jump * cell_jump > 0.0 {
        reconstructed_jump
    } else {
        0.0
    }
}

/// Switched WENO jump from six consecutive values.
pub fn weno_reconstruct_switched(values: &[f64]) -> Result<f64, SchemeError> {
    let (m, p) = weno5_reconstruct(values)?;
    Ok(sign_switch(p - m, values[3] - values[2]))
}

/// Reconstructed jump `⟪ω⟫` of the scaled variables over a stencil centred
/// on the interface (`2 * mode.half_width(k)` points).
pub fn reconstructed_jump(omega: &[Vec8], k: usize, mode: DissipationMode) -> Vec8 {
    let n = omega.len();
    let c = n / 2;
    let mut out = Vec8::zeros();
    match mode {
        DissipationMode::None => {}
        DissipationMode::FirstOrder => out = omega[c] - omega[c - 1],
        DissipationMode::Eno => {
            let mut buf = [0.0; 2 * MAX_ENO_CELLS];
            for comp in 0..8 {
                for (dst, o) in buf.iter_mut().zip(omega) {
                    *dst = o[comp];
                }
                let (m, p) = eno_limits(&buf[..n], k);
                out[comp] = eno_guarded_jump(&buf[..n], m, p);
            }
        }
        DissipationMode::Weno => {
            let mut buf = [0.0; 6];
            for comp in 0..8 {
                for (dst, o) in buf.iter_mut().zip(omega) {
                    *dst = o[comp];
                }
                let (m, p) = weno5_limits(&buf);
                out[comp] = sign_switch(p - m, buf[3] - buf[2]);
            }
        }
    }
    out
}

/// `Q̂ = Q̃ - ½ W̄ᵀ R |Λ| ⟪ω⟫` with `W̄` the mean of the two neighbouring
/// entropy variables.
pub fn es_numerical_entropy_flux(
    w_l: &Vec8,
    w_r: &Vec8,
    q_tilde: f64,
    scaling: &ScalingAtInterface,
    jump: &Vec8,
) -> f64 {
    q_tilde - 0.25 * (w_l + w_r).dot(&scaling.apply(jump))
}

/// Entropy stable interface flux and matching numerical entropy flux.
#[derive(Debug, Clone, PartialEq)]
pub struct EsFlux {
    pub flux: Vec8,
    pub entropy_flux: f64,
}

/// Entropy stable flux at the centre of `stencil`, which holds
/// `2 * max(k, mode.half_width(k))` points.
pub fn es_flux(
    stencil: &[PrimState],
    k: usize,
    eos: &Eos,
    dir: Direction,
    mode: DissipationMode,
    wave: WaveSpeed,
    matrix: InterfaceMatrix,
) -> Result<EsFlux, SchemeError> {
    let coeffs = combination_coeffs(k)?;
    mode.check_order(k)?;
    if mode == DissipationMode::Eno && 2 * k > MAX_ENO_CELLS {
        return Err(SchemeError::UnsupportedOrder(k));
    }
    let half = k.max(mode.half_width(k));
    if stencil.len() != 2 * half {
        return Err(SchemeError::StencilLength { expected: 2 * half, got: stencil.len() });
    }
    for s in stencil {
        s.validate()?;
    }
    let axis = dir.axis();
    let fp: Vec<FluxPoint> = stencil.iter().map(FluxPoint::new).collect();
    let ep: Vec<EntropyPoint> = stencil.iter().map(|s| EntropyPoint::new(s, eos)).collect();
    let off = half - k;
    let ec = combine_pairs(coeffs.alpha(), |a, b| {
        let f = ec_flux_points(&fp[off + a], &fp[off + b], eos, axis);
        let q = entropy_flux_points(&ep[off + a], &ep[off + b], &f, axis);
        FluxWithEntropy { flux: f, entropy: q }
    });
    let (mut flux, mut entropy_flux) = (ec.flux, ec.entropy);
    if mode.is_dissipative() {
        let (l, r) = (&stencil[half - 1], &stencil[half]);
        let (wl, wr) = (&ep[half - 1].w, &ep[half].w);
        let scaling = ScalingAtInterface::rusanov(l, r, wl, wr, eos, dir, wave, matrix)?;
        let hw = mode.half_width(k);
        let w: Vec<Vec8> = ep[half - hw..half + hw].iter().map(|e| e.w).collect();
        let omega = scaled_entropy_vars(&w, &scaling.r);
        let jump = reconstructed_jump(&omega, k, mode);
        let d = scaling.apply(&jump);
        flux -= d * 0.5;
        entropy_flux -= 0.25 * (ep[half - 1].w + ep[half].w).dot(&d);
    }
    Ok(EsFlux { flux, entropy_flux })
}
