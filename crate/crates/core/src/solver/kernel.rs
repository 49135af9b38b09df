//! Interface fluxes along one grid line.
//!
//! Per-point quantities are computed once per line, and each two-point flux
//! `F*(U_a, U_{a+r})` is evaluated once and shared by the `r` interfaces whose
//! high-order combination uses it.

use crate::dissipation::{reconstructed_jump, DissipationMode, InterfaceMatrix, ScalingAtInterface};
use crate::ecflux::{ec_flux_points, entropy_flux_points, entropy_flux_points_magnitude, EntropyPoint, FluxPoint};
use crate::error::PhysicsError;
use crate::physics::{Direction, Eos, PrimState, Vec8, WaveSpeed};

/// Which interfaces need the numerical entropy flux.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum EntropyFluxes {
    None,
    /// First and last interface of the line only.
    Ends,
    All,
}

pub(crate) struct LineScheme<'a> {
    pub eos: &'a Eos,
    pub alpha: &'a [f64],
    pub mode: DissipationMode,
    pub wave: WaveSpeed,
    pub matrix: InterfaceMatrix,
    pub dir: Direction,
    pub entropy: EntropyFluxes,
}

/// Interface quantities for interfaces `lo + ½ .. hi - ½`, stored from 0.
#[derive(Default)]
pub(crate) struct LineFluxes {
    pub f: Vec<Vec8>,
    pub b: Vec<f64>,
    pub q: Vec<f64>,
    /// Magnitude of the terms forming `q`, filled with [`EntropyFluxes::All`].
    pub q_scale: Vec<f64>,
}

/// Reusable per-thread storage.
#[derive(Default)]
pub(crate) struct LineScratch {
    fp: Vec<Option<FluxPoint>>,
    ep: Vec<Option<EntropyPoint>>,
    pairs: Vec<Vec<Vec8>>,
    pair_q: Vec<Vec<f64>>,
    pair_q_scale: Vec<Vec<f64>>,
    omega: Vec<Vec8>,
}

impl<'a> LineScheme<'a> {
    fn k(&self) -> usize {
        self.alpha.len()
    }

    pub fn half_width(&self) -> usize {
        self.k().max(self.mode.half_width(self.k()))
    }

    /// Computes fluxes at the interfaces between points `p` and `p + 1` for
    /// `p` in `lo..hi`. On failure returns the offending interface `p`.
    pub fn run(
        &self,
        line: &[PrimState],
        lo: usize,
        hi: usize,
        scratch: &mut LineScratch,
        out: &mut LineFluxes,
    ) -> Result<(), (usize, PhysicsError)> {
        let k = self.k();
        let h = self.half_width();
        let axis = self.dir.axis();
        let n = line.len();
        debug_assert!(lo + 1 >= h && hi + h <= n);
        let first = lo + 1 - h;
        let last = hi + h; // exclusive
        let all_q = self.entropy == EntropyFluxes::All;
        let need_w = self.mode.is_dissipative() || all_q;

        scratch.fp.clear();
        scratch.fp.resize(n, None);
        scratch.ep.clear();
        scratch.ep.resize(n, None);
        for p in first..last {
            scratch.fp[p] = Some(FluxPoint::new(&line[p]));
            if need_w {
                scratch.ep[p] = Some(EntropyPoint::new(&line[p], self.eos));
            }
        }
        if self.entropy == EntropyFluxes::Ends && !need_w {
            for p in (first..lo + h + 1).chain(hi - h..last) {
                scratch.ep[p] = Some(EntropyPoint::new(&line[p], self.eos));
            }
        }

        // pair fluxes F*(a, a + r) for a in lo + 1 - r .. hi
        scratch.pairs.resize_with(k, Vec::new);
        scratch.pair_q.resize_with(k, Vec::new);
        scratch.pair_q_scale.resize_with(k, Vec::new);
        for r in 1..=k {
            let pairs = &mut scratch.pairs[r - 1];
            pairs.clear();
            pairs.resize(n, Vec8::zeros());
            let pq = &mut scratch.pair_q[r - 1];
            let pqs = &mut scratch.pair_q_scale[r - 1];
            if all_q {
                pq.clear();
                pq.resize(n, 0.0);
                pqs.clear();
                pqs.resize(n, 0.0);
            }
            for a in lo + 1 - r..hi {
                let f = ec_flux_points(
                    scratch.fp[a].as_ref().expect("flux point cached"),
                    scratch.fp[a + r].as_ref().expect("flux point cached"),
                    self.eos,
                    axis,
                );
                pairs[a] = f;
                if all_q {
                    let (ea, eb) = (scratch.ep[a].as_ref().unwrap(), scratch.ep[a + r].as_ref().unwrap());
                    pq[a] = entropy_flux_points(ea, eb, &f, axis);
                    pqs[a] = entropy_flux_points_magnitude(ea, eb, &f, axis);
                }
            }
        }

        let m = hi - lo;
        out.f.clear();
        out.f.resize(m, Vec8::zeros());
        out.b.clear();
        out.b.resize(m, 0.0);
        out.q.clear();
        out.q.resize(m, 0.0);
        out.q_scale.clear();
        if all_q {
            out.q_scale.resize(m, 0.0);
        }

        for (slot, p) in (lo..hi).enumerate() {
            let mut f = Vec8::zeros();
            let mut bsum = 0.0;
            for (idx, &alpha) in self.alpha.iter().enumerate() {
                let r = idx + 1;
                let mut inner = Vec8::zeros();
                let mut binner = 0.0;
                for s in 0..r {
                    inner += scratch.pairs[idx][p - s];
                    binner += 0.5 * (line[p - s].b[axis] + line[p - s + r].b[axis]);
                }
                f += inner * alpha;
                bsum += binner * alpha;
            }

            let want_q = match self.entropy {
                EntropyFluxes::None => false,
                EntropyFluxes::Ends => slot == 0 || slot + 1 == m,
                EntropyFluxes::All => true,
            };
            let mut q = 0.0;
            let mut q_scale = 0.0;
            if want_q {
                for (idx, &alpha) in self.alpha.iter().enumerate() {
                    let r = idx + 1;
                    let mut inner = 0.0;
                    for s in 0..r {
                        let a = p - s;
                        if all_q {
                            q_scale += alpha.abs() * scratch.pair_q_scale[idx][a];
                        }
                        inner += if all_q {
                            scratch.pair_q[idx][a]
                        } else {
                            let (ea, eb) = (scratch.ep[a].as_ref().unwrap(), scratch.ep[a + r].as_ref().unwrap());
                            entropy_flux_points(ea, eb, &scratch.pairs[idx][a], axis)
                        };
                    }
                    q += inner * alpha;
                }
            }

            if self.mode.is_dissipative() {
                let (wl, wr) = (&scratch.ep[p].as_ref().unwrap().w, &scratch.ep[p + 1].as_ref().unwrap().w);
                let scaling = ScalingAtInterface::rusanov(
                    &line[p],
                    &line[p + 1],
                    wl,
                    wr,
                    self.eos,
                    self.dir,
                    self.wave,
                    self.matrix,
                )
                .map_err(|e| (p, e))?;
                let hw = self.mode.half_width(k);
                let rt = scaling.r.transpose();
                scratch.omega.clear();
                for j in p + 1 - hw..=p + hw {
                    scratch.omega.push(rt * scratch.ep[j].as_ref().unwrap().w);
                }
                let jump = reconstructed_jump(&scratch.omega, k, self.mode);
                let d = scaling.apply(&jump);
                f -= d * 0.5;
                if want_q {
                    q -= 0.25 * (wl + wr).dot(&d);
                    q_scale += 0.25 * (wl.abs() + wr.abs()).dot(&d.abs());
                }
            }
            out.f[slot] = f;
            out.b[slot] = bsum;
            out.q[slot] = q;
            if all_q {
                out.q_scale[slot] = q_scale;
            }
        }
        Ok(())
    }
}
