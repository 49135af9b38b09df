//! Conservative to primitive recovery.
//!
//! The unknown is `ξ = ρhγ²`. Given `ξ`, the velocity follows from
//! `m = (ξ + |B|²) v - (v·B) B` together with `v·B = (m·B)/ξ`, and the energy
//! equation `E = ξ - p + ½|B|²(1 + |v|²) - (m·B)²/(2ξ²)` is the residual that
//! drives a safeguarded Newton iteration.

use super::{ConsState, Eos, PrimState};
use crate::error::PhysicsError;

const MAX_ITER: usize = 200;
const TOL: f64 = 1e-12;

/// Work counters from a successful recovery.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecoveryDiagnostics {
    pub iterations: usize,
    pub residual: f64,
    pub bisections: usize,
}

struct Residual<'a> {
    u: &'a ConsState,
    eos: &'a Eos,
    b2: f64,
    mb: f64,
    m2: f64,
}

struct Eval {
    f: f64,
    df: f64,
    p: f64,
}

impl<'a> Residual<'a> {
    fn new(u: &'a ConsState, eos: &'a Eos) -> Self {
        Self { u, eos, b2: u.b.norm_squared(), mb: u.m.dot(&u.b), m2: u.m.norm_squared() }
    }

    /// Returns `None` outside the admissible region (`|v| ≥ 1` or `p ≤ 0`).
    fn eval(&self, xi: f64) -> Option<Eval> {
        if !(xi > 0.0) {
            return None;
        }
        let (b2, mb, m2) = (self.b2, self.mb, self.m2);
        let xb = xi + b2;
        let num = m2 * xi * xi + mb * mb * (2.0 * xi + b2);
        let den = xi * xi * xb * xb;
        let v2 = num / den;
        if !(v2 < 1.0) {
            return None;
        }
        let w = (1.0 - v2).sqrt();
        let k = 1.0 / self.eos.enthalpy_factor();
        let p = k * (xi * (1.0 - v2) - self.u.d * w);
        if !(p > 0.0) {
            return None;
        }
        let dnum = 2.0 * m2 * xi + 2.0 * mb * mb;
        let dden = 2.0 * xi * xb * (2.0 * xi + b2);
        let dv2 = (dnum - v2 * dden) / den;
        let dp = k * ((1.0 - v2) - xi * dv2 + self.u.d * dv2 / (2.0 * w));
        let f = xi - p + 0.5 * b2 * (1.0 + v2) - mb * mb / (2.0 * xi * xi) - self.u.e;
        let df = 1.0 - dp + 0.5 * b2 * dv2 + mb * mb / (xi * xi * xi);
        Some(Eval { f, df, p })
    }

    fn scale(&self) -> f64 {
        self.u.e.abs() + self.b2 + self.u.d
    }

    fn finish(&self, xi: f64, ev: &Eval) -> PrimState {
        let vb = self.mb / xi;
        let v = (self.u.m + self.u.b * vb) / (xi + self.b2);
        PrimState { rho: self.u.d * (1.0 - v.norm_squared()).sqrt(), v, b: self.u.b, p: ev.p }
    }
}

/// Recovers the primitive state without a prior guess.
pub fn cons_to_prim(u: &ConsState, eos: &Eos) -> Result<PrimState, PhysicsError> {
    cons_to_prim_with_guess(u, eos, None).map(|(s, _)| s)
}

/// Recovers the primitive state, seeding Newton's method from `guess`
/// (typically the previous time level) when one is supplied.
pub fn cons_to_prim_with_guess(
    u: &ConsState,
    eos: &Eos,
    guess: Option<&PrimState>,
) -> Result<(PrimState, RecoveryDiagnostics), PhysicsError> {
    let finite =
        u.d.is_finite() && u.e.is_finite() && u.m.iter().all(|x| x.is_finite()) && u.b.iter().all(|x| x.is_finite());
    if !finite {
        return Err(PhysicsError::NonFinite);
    }
    if !(u.d > 0.0) {
        return Err(PhysicsError::NonPositiveDensity(u.d));
    }
    let res = Residual::new(u, eos);

    // For ξ ≤ D the pressure cannot be positive, so D bounds the root from below.
    let mut lo = u.d;
    let mut hi = {
        let mut hi = (2.0 * (u.e.abs() + u.m.norm() + res.b2)).max(2.0 * u.d);
        let mut found = false;
        for _ in 0..200 {
            if let Some(ev) = res.eval(hi) {
                if ev.f > 0.0 {
                    found = true;
                    break;
                }
            }
            hi *= 2.0;
        }
        if !found {
            return Err(PhysicsError::Recovery { iterations: 0, residual: f64::NAN, reason: "no upper bracket" });
        }
        hi
    };

    let mut xi = match guess {
        Some(g) => {
            let gamma2 = 1.0 / (1.0 - g.v.norm_squared());
            let x = g.rho * g.enthalpy(eos) * gamma2;
            if x > lo && x < hi {
                x
            } else {
                0.5 * (lo + hi)
            }
        }
        None => {
            // E + p_tot - |B|² = ξ, so ξ ≈ E - |B|²/2 with p neglected.
            let x = u.e - 0.5 * res.b2;
            if x > lo && x < hi {
                x
            } else {
                0.5 * (lo + hi)
            }
        }
    };

    let scale = res.scale();
    let mut bisections = 0;
    for iter in 1..=MAX_ITER {
        let step = match res.eval(xi) {
            Some(ev) => {
                if ev.f > 0.0 {
                    hi = xi;
                } else {
                    lo = xi;
                }
                if ev.f.abs() <= 1e-15 * scale {
                    return Ok((
                        res.finish(xi, &ev),
                        RecoveryDiagnostics { iterations: iter, residual: ev.f, bisections },
                    ));
                }
                let next = xi - ev.f / ev.df;
                if ev.df > 0.0 && next > lo && next < hi {
                    Some(next)
                } else {
                    None
                }
            }
            None => {
                // inadmissible ξ lies below the root
                lo = xi;
                None
            }
        };
        let next = match step {
            Some(n) => n,
            None => {
                bisections += 1;
                0.5 * (lo + hi)
            }
        };
        let dx = (next - xi).abs();
        xi = next;
        if dx <= TOL * xi.abs() {
            return match res.eval(xi) {
                Some(ev) if ev.f.abs() <= 1e-8 * scale => {
                    Ok((res.finish(xi, &ev), RecoveryDiagnostics { iterations: iter, residual: ev.f, bisections }))
                }
                other => Err(PhysicsError::Recovery {
                    iterations: iter,
                    residual: other.map_or(f64::NAN, |e| e.f),
                    reason: "no admissible root (energy below minimum)",
                }),
            };
        }
    }
    Err(PhysicsError::Recovery {
        iterations: MAX_ITER,
        residual: res.eval(xi).map_or(f64::NAN, |e| e.f),
        reason: "iteration limit reached",
    })
}
