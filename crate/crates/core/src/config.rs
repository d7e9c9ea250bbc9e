//! Problem statement: the comb layout, Rabi amplitudes and bare detuning.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Polychromatic drive of a spin-half.
///
/// Mode `k` has frequency `(j + m[k])` in units of the comb spacing. All
/// quantities are dimensionless (frequencies in units of the spacing, time
/// `τ` in inverse spacing).
#[derive(Debug, Clone, PartialEq)]
pub struct ModeConfig<T: Real> {
    /// Index of the lowest mode.
    pub j: i64,
    /// Mode offsets, strictly ascending with `m[0] == 0`.
    pub m: Vec<i64>,
    /// Complex Rabi amplitude per mode.
    pub omega: Vec<Complex<T>>,
    /// Bare detuning `ω₀ - j` of the spin from the lowest mode.
    pub delta0: T,
}

impl<T: Real> ModeConfig<T> {
    pub fn new(j: i64, m: Vec<i64>, omega: Vec<Complex<T>>, delta0: T) -> Result<Self> {
        let cfg = Self {
            j,
            m,
            omega,
            delta0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Builds a config from real amplitudes.
    pub fn real(j: i64, m: Vec<i64>, omega: &[T], delta0: T) -> Result<Self> {
        Self::new(
            j,
            m,
            omega.iter().map(|&w| Complex::new(w, T::zero())).collect(),
            delta0,
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.m.is_empty() {
            return Err(Error::InvalidConfig("at least one mode is required".into()));
        }
        if self.m.len() != self.omega.len() {
            return Err(Error::InvalidConfig(format!(
                "{} mode offsets but {} amplitudes",
                self.m.len(),
                self.omega.len()
            )));
        }
        if self.m[0] != 0 {
            return Err(Error::InvalidConfig("first mode offset must be 0".into()));
        }
        if self.m.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidConfig(
                "mode offsets must be strictly ascending".into(),
            ));
        }
        if !self.delta0.is_finite()
            || self
                .omega
                .iter()
                .any(|w| !w.re.is_finite() || !w.im.is_finite())
        {
            return Err(Error::InvalidConfig("non-finite parameter".into()));
        }
        Ok(())
    }

    pub fn n_modes(&self) -> usize {
        self.m.len()
    }

    /// Spin transition frequency `j + Δ₀`.
    pub fn omega0(&self) -> T {
        T::from_int(self.j) + self.delta0
    }

    /// Ladder shift `j + m_k` of mode `k` (zero-based).
    pub fn shift(&self, k: usize) -> i64 {
        self.j + self.m[k]
    }

    /// Offset step `m_{k+1} - m_k` following mode `k` (zero-based); zero after the last.
    pub fn step_after(&self, k: usize) -> i64 {
        if k + 1 < self.m.len() {
            self.m[k + 1] - self.m[k]
        } else {
            0
        }
    }

    /// Whether the spin is closest to the highest mode, which the dressing order assumes.
    pub fn resonance_order_ok(&self) -> bool {
        let top = self.m.len() - 1;
        let dist = |k: usize| (self.delta0 - T::from_int(self.m[k])).abs();
        (0..top).all(|k| dist(top) <= dist(k))
    }

    /// Comb spacing if the offsets are `m_k = k · spacing`.
    pub fn uniform_spacing(&self) -> Option<i64> {
        if self.m.len() == 1 {
            return Some(1);
        }
        let step = self.m[1];
        self.m
            .iter()
            .enumerate()
            .all(|(k, &mk)| mk == k as i64 * step)
            .then_some(step)
    }

    /// Same physics relabelled with lowest mode `j + by` (and `ω₀` shifted with it).
    pub fn shifted_j(&self, by: i64) -> Self {
        Self {
            j: self.j + by,
            ..self.clone()
        }
    }
}
