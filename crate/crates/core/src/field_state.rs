//! Field weights on the non-degenerate ladder and the weighted excitation
//! probability.
//!
//! With the field prepared in `Σ_N γ_N |N⟩`, the upper-state amplitude at
//! ladder offset `N'` is `Σ_s γ_{N'+s} c_s`, where `c_s` is the channel
//! amplitude for shift `s`, so `P_e = Σ_{N'} |Σ_s γ_{N'+s} c_s|²`. When
//! `γ` is flat over the shifts involved this collapses to `|Σ_s c_s|²`.

use std::collections::BTreeMap;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::oracle::OracleRun;
use crate::propagator::{channel_amplitudes, PeSeries, PropagatorComponents};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub enum FieldWeights<T: Real> {
    /// Equal weights: the mean-field limit.
    Flat,
    /// Gaussian `γ²` centred on the mean photon offset.
    Gaussian {
        /// `Σ_k k|α_k|²`.
        mean: T,
        /// `Σ_k k²|α_k|²`, read as a variance.
        variance: T,
        /// Offsets `-window..=window` around the mean.
        window: usize,
        /// Normalised `γ²` per offset; index `n + window`.
        weights: Vec<T>,
    },
}

impl<T: Real> FieldWeights<T> {
    /// `γ` at offset `n` from the mean (zero outside the window).
    pub fn gamma(&self, n: i64) -> T {
        match self {
            Self::Flat => T::one(),
            Self::Gaussian {
                window, weights, ..
            } => {
                let w = *window as i64;
                if n.abs() > w {
                    T::zero()
                } else {
                    weights[(n + w) as usize].sqrt()
                }
            }
        }
    }

    pub fn window(&self) -> Option<usize> {
        match self {
            Self::Flat => None,
            Self::Gaussian { window, .. } => Some(*window),
        }
    }

    /// Standard deviation of the photon-offset distribution.
    pub fn spread(&self) -> Option<T> {
        match self {
            Self::Flat => None,
            Self::Gaussian { variance, .. } => Some(variance.sqrt()),
        }
    }
}

/// Gaussian weights for coherent amplitudes `alpha[k-1]` of modes `k = 1..`,
/// with mean `Σ k|α_k|²` and variance `Σ k²|α_k|²`, normalised on
/// `-window..=window`.
pub fn gamma_weights<T: Real>(alpha: &[Complex<T>], window: usize) -> Result<FieldWeights<T>> {
    if alpha.iter().all(|a| a.norm_sqr() == T::zero()) {
        return Err(Error::EmptyField);
    }
    let mut mean = T::zero();
    let mut variance = T::zero();
    for (i, a) in alpha.iter().enumerate() {
        let k = T::from_usize(i + 1).expect("mode index");
        mean = mean + k * a.norm_sqr();
        variance = variance + k * k * a.norm_sqr();
    }
    let w = window as i64;
    let mut weights: Vec<T> = (-w..=w)
        .map(|n| {
            let x = T::from_int(n);
            (-(x * x) / (T::lit(2.0) * variance)).exp()
        })
        .collect();
    let total = weights.iter().fold(T::zero(), |acc, &x| acc + x);
    for x in &mut weights {
        *x = *x / total;
    }
    Ok(FieldWeights::Gaussian {
        mean,
        variance,
        window,
        weights,
    })
}

fn weighted_from_channels<T: Real>(
    weights: &FieldWeights<T>,
    amps: &BTreeMap<i64, Complex<T>>,
) -> T {
    match weights {
        FieldWeights::Flat => amps
            .values()
            .fold(Complex::new(T::zero(), T::zero()), |acc, &c| acc + c)
            .norm_sqr(),
        FieldWeights::Gaussian { window, .. } => {
            let (Some(&lo), Some(&hi)) = (amps.keys().next(), amps.keys().next_back()) else {
                return T::zero();
            };
            let w = *window as i64;
            let mut total = T::zero();
            for n in (-w - hi)..=(w - lo) {
                let a = amps
                    .iter()
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (&s, &c)| {
                        acc + c * weights.gamma(n + s)
                    });
                total = total + a.norm_sqr();
            }
            total
        }
    }
}

/// Weighted `P_e` of an analytic propagator.
pub fn weighted_pe<T: Real>(
    u0: &PropagatorComponents<T>,
    weights: &FieldWeights<T>,
    tau: &[T],
) -> PeSeries<T> {
    let values = tau
        .iter()
        .map(|&t| weighted_from_channels(weights, &channel_amplitudes(u0, t)))
        .collect();
    PeSeries::new(tau.to_vec(), values)
}

/// Weighted `P_e` from oracle channel amplitudes.
///
/// The lattice dynamics is translation invariant, so the amplitudes computed
/// from `|0, -½⟩` serve every starting offset.
pub fn weighted_pe_oracle(run: &OracleRun, weights: &FieldWeights<f64>) -> Result<PeSeries<f64>> {
    if let Some(window) = weights.window() {
        if window > run.basis.halfwidth {
            return Err(Error::WindowOverflow {
                window,
                halfwidth: run.basis.halfwidth,
            });
        }
    }
    let values = (0..run.tau.len())
        .map(|t| weighted_from_channels(weights, &run.channel_map(t)))
        .collect();
    Ok(PeSeries::new(run.tau.clone(), values))
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    #[test]
    fn single_mode_moments() {
        let w = gamma_weights(&[C::new(10.0, 0.0)], 60).unwrap();
        let FieldWeights::Gaussian { mean, variance, .. } = w else {
            panic!()
        };
        assert!((mean - 100.0).abs() < 1e-12);
        assert!((variance - 100.0).abs() < 1e-12);
    }

    #[test]
    fn two_mode_moments() {
        let a = 50f64.sqrt();
        let w = gamma_weights(&[C::new(a, 0.0), C::new(0.0, a)], 10).unwrap();
        let FieldWeights::Gaussian { mean, variance, .. } = w else {
            panic!()
        };
        assert!((mean - 150.0).abs() < 1e-12);
        assert!((variance - 250.0).abs() < 1e-12);
    }

    #[test]
    fn normalised_and_symmetric() {
        // window well inside ±5σ still normalises exactly
        let w = gamma_weights(&[C::new(10.0, 0.0)], 12).unwrap();
        let FieldWeights::Gaussian { weights, .. } = &w else {
            panic!()
        };
        let total: f64 = weights.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
        for n in 0..=12 {
            assert_eq!(w.gamma(n), w.gamma(-n));
        }
        assert_eq!(w.gamma(13), 0.0);
    }

    #[test]
    fn empty_field_rejected() {
        assert_eq!(
            gamma_weights::<f64>(&[C::new(0.0, 0.0)], 3),
            Err(Error::EmptyField)
        );
    }

    #[test]
    fn flat_is_coherent_sum() {
        let mut amps = BTreeMap::new();
        amps.insert(-1, C::new(0.1, 0.2));
        amps.insert(3, C::new(-0.3, 0.05));
        let p = weighted_from_channels(&FieldWeights::Flat, &amps);
        assert!((p - C::new(-0.2, 0.25).norm_sqr()).abs() < 1e-16);
    }

    #[test]
    fn gaussian_single_channel_is_population() {
        // one channel: Σ_N' γ²_{N'+s} |c|² = |c|²
        let w = gamma_weights(&[C::new(3.0, 0.0)], 40).unwrap();
        let mut amps = BTreeMap::new();
        amps.insert(2, C::new(0.3, -0.4));
        let p = weighted_from_channels(&w, &amps);
        assert!((p - 0.25).abs() < 1e-12);
    }
}
