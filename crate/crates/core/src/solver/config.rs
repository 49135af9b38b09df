use serde::{Deserialize, Serialize};

use crate::dissipation::{DissipationMode, InterfaceMatrix, MAX_ENO_CELLS};
use crate::ecflux::combination_coeffs;
use crate::error::SchemeError;
use crate::physics::{PrimState, WaveSpeed};

/// Ghost-cell treatment on one side of the domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Boundary {
    Periodic,
    /// Zero-gradient copy of the nearest interior cell.
    Outflow,
    /// Fixed prescribed state.
    Inflow {
        state: PrimState,
    },
}

/// Boundary conditions on the four sides; `y` sides are ignored in 1D.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Boundaries {
    pub x_lo: Boundary,
    pub x_hi: Boundary,
    pub y_lo: Boundary,
    pub y_hi: Boundary,
}

impl Boundaries {
    pub fn all(b: Boundary) -> Self {
        Self { x_lo: b, x_hi: b, y_lo: b, y_hi: b }
    }

    pub fn periodic() -> Self {
        Self::all(Boundary::Periodic)
    }

    pub fn outflow() -> Self {
        Self::all(Boundary::Outflow)
    }

    fn check(&self) -> Result<(), SchemeError> {
        for (lo, hi, name) in [(self.x_lo, self.x_hi, "x"), (self.y_lo, self.y_hi, "y")] {
            let plo = lo == Boundary::Periodic;
            let phi = hi == Boundary::Periodic;
            if plo != phi {
                return Err(SchemeError::Config(format!("periodic boundaries in {name} must be set on both sides")));
            }
            for b in [lo, hi] {
                if let Boundary::Inflow { state } = b {
                    state.validate()?;
                }
            }
        }
        Ok(())
    }
}

impl Default for Boundaries {
    fn default() -> Self {
        Self::periodic()
    }
}

/// Fixed time step `Δt = c Δx^q` used in place of the CFL condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedDt {
    pub c: f64,
    pub q: f64,
}

/// Spatial scheme, time-step control and boundary treatment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeConfig {
    /// Half-order: the entropy conservative flux is of order `2k`.
    pub k: usize,
    #[serde(default)]
    pub dissipation: DissipationMode,
    #[serde(default)]
    pub wave_speed: WaveSpeed,
    #[serde(default)]
    pub interface_matrix: InterfaceMatrix,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(default)]
    pub boundaries: Boundaries,
    #[serde(default)]
    pub fixed_dt: Option<FixedDt>,
}

fn default_cfl() -> f64 {
    0.4
}

impl SchemeConfig {
    /// Entropy conservative scheme of order `2k`.
    pub fn ec(k: usize) -> Self {
        Self {
            k,
            dissipation: DissipationMode::None,
            wave_speed: WaveSpeed::Light,
            interface_matrix: InterfaceMatrix::default(),
            cfl: default_cfl(),
            boundaries: Boundaries::default(),
            fixed_dt: None,
        }
    }

    /// First-order entropy stable scheme.
    pub fn es1() -> Self {
        Self { dissipation: DissipationMode::FirstOrder, ..Self::ec(1) }
    }

    /// Fourth-order EC flux with fourth-order ENO dissipation.
    pub fn es4() -> Self {
        Self { dissipation: DissipationMode::Eno, ..Self::ec(2) }
    }

    /// Sixth-order EC flux with switched fifth-order WENO dissipation.
    pub fn es5() -> Self {
        Self { dissipation: DissipationMode::Weno, ..Self::ec(3) }
    }

    /// Looks up a preset by name (`ec2`, `ec4`, `ec6`, `es1`, `es4`, `es5`).
    pub fn preset(name: &str) -> Result<Self, SchemeError> {
        match name.to_ascii_lowercase().as_str() {
            "ec2" => Ok(Self::ec(1)),
            "ec4" => Ok(Self::ec(2)),
            "ec6" => Ok(Self::ec(3)),
            "ec8" if cfg!(feature = "eighth-order") => Ok(Self::ec(4)),
            "es1" => Ok(Self::es1()),
            "es4" => Ok(Self::es4()),
            "es5" => Ok(Self::es5()),
            other => Err(SchemeError::Config(format!("unknown scheme preset '{other}'"))),
        }
    }

    pub fn with_boundaries(mut self, boundaries: Boundaries) -> Self {
        self.boundaries = boundaries;
        self
    }

    pub fn with_fixed_dt(mut self, c: f64, q: f64) -> Self {
        self.fixed_dt = Some(FixedDt { c, q });
        self
    }

    pub fn is_entropy_conservative(&self) -> bool {
        !self.dissipation.is_dissipative()
    }

    /// Largest `k` accepted by [`SchemeConfig::validate`].
    pub fn max_k() -> usize {
        if cfg!(feature = "eighth-order") {
            4
        } else {
            3
        }
    }

    pub fn validate(&self) -> Result<(), SchemeError> {
        if self.k == 0 || self.k > Self::max_k() {
            return Err(SchemeError::UnsupportedOrder(self.k));
        }
        combination_coeffs(self.k)?;
        self.dissipation.check_order(self.k)?;
        if self.dissipation == DissipationMode::Eno && 2 * self.k > MAX_ENO_CELLS {
            return Err(SchemeError::UnsupportedOrder(self.k));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(SchemeError::InvalidCfl(self.cfl));
        }
        if let Some(f) = self.fixed_dt {
            if !(f.c > 0.0 && f.c.is_finite() && f.q.is_finite()) {
                return Err(SchemeError::Config(format!(
                    "fixed time step law needs c > 0 and finite q, got c = {}, q = {}",
                    f.c, f.q
                )));
            }
        }
        self.boundaries.check()
    }

    /// Ghost width `3k + 1`.
    pub fn ghost_width(&self) -> usize {
        3 * self.k + 1
    }

    /// Points on each side of an interface read by the interface flux.
    pub fn stencil_half_width(&self) -> usize {
        self.k.max(self.dissipation.half_width(self.k))
    }

    /// Short scheme label such as `EC4` or `ES5`.
    pub fn label(&self) -> String {
        match self.dissipation {
            DissipationMode::None => format!("EC{}", 2 * self.k),
            DissipationMode::FirstOrder => "ES1".to_string(),
            DissipationMode::Eno => format!("ES{}", 2 * self.k),
            DissipationMode::Weno => "ES5".to_string(),
        }
    }
}
