//! Dominant oscillation frequency of a uniformly sampled series.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

/// Peak of a periodogram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPeak {
    /// Angular frequency of the strongest nonzero bin.
    pub frequency: f64,
    /// Angular width of one bin, `2π / (n dτ)`.
    pub bin_width: f64,
    pub bin: usize,
}

/// Strongest nonzero-frequency component of `values` sampled every `dtau`,
/// after removing the mean. `None` for fewer than four samples.
pub fn dominant_frequency(values: &[f64], dtau: f64) -> Option<SpectralPeak> {
    let n = values.len();
    if n < 4 || dtau <= 0.0 {
        return None;
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let mut buf: Vec<Complex64> = values
        .iter()
        .map(|&v| Complex64::new(v - mean, 0.0))
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let bin = (1..=n / 2).max_by(|&a, &b| buf[a].norm_sqr().total_cmp(&buf[b].norm_sqr()))?;
    let bin_width = 2.0 * std::f64::consts::PI / (n as f64 * dtau);
    Some(SpectralPeak {
        frequency: bin as f64 * bin_width,
        bin_width,
        bin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_sinusoid() {
        let dt = 0.05;
        let w = 1.3;
        let v: Vec<f64> = (0..2000)
            .map(|i| (w * i as f64 * dt).sin().powi(2))
            .collect();
        // sin² oscillates at 2w
        let p = dominant_frequency(&v, dt).unwrap();
        assert!((p.frequency - 2.0 * w).abs() <= p.bin_width);
    }

    #[test]
    fn short_series() {
        assert!(dominant_frequency(&[1.0, 2.0], 0.1).is_none());
    }
}
