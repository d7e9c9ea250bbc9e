//! Dressed propagator, the undressing chain, and excitation probabilities.

use std::collections::BTreeMap;

use num_complex::Complex;

use crate::cascade::{CascadeResult, StageParams};
use crate::error::{Error, Result};
use crate::matrix::{TermMatrix, TermVector};
use crate::scalar::{imag_unit, re, Real};
use crate::term::{Term, TermSum};

/// Component index of `𝟙` in the propagator basis.
pub const IDENTITY: usize = 0;
/// Component index of `σ_z`.
pub const SIGMA_Z: usize = 1;
/// Component index of `σ_+`.
pub const SIGMA_PLUS: usize = 2;
/// Component index of `σ_-`.
pub const SIGMA_MINUS: usize = 3;

/// Propagator `U = u₀ 𝟙 + u₁ σ_z + u₂ σ_+ + u₃ σ_-` with term-sum coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct PropagatorComponents<T: Real> {
    pub u: TermVector<T, 4>,
}

impl<T: Real> PropagatorComponents<T> {
    pub fn new(u: TermVector<T, 4>) -> Self {
        Self { u }
    }

    /// `⟨½|U|-½⟩` before the field trace.
    pub fn sigma_plus(&self) -> &TermSum<T> {
        &self.u[SIGMA_PLUS]
    }

    /// Deviation from the SU(2) structure `u_𝟙 = u_𝟙†`, `u_z = -u_z†`,
    /// `u_- = -u_+†` (adjoint acting on phases and ladder shifts).
    pub fn hermiticity_defect(&self) -> T {
        let u = &self.u;
        let d0 = u[IDENTITY].distance(&u[IDENTITY].adjoint());
        let d1 = u[SIGMA_Z].distance(&(-u[SIGMA_Z].adjoint()));
        let d3 = u[SIGMA_MINUS].distance(&(-u[SIGMA_PLUS].adjoint()));
        d0.max(d1).max(d3)
    }

    /// Numeric components at `tau` after tracing out the field.
    pub fn traced_at(&self, tau: T) -> [Complex<T>; 4] {
        std::array::from_fn(|i| {
            self.u[i]
                .field_trace()
                .evaluate(tau)
                .expect("traced sum has no shifts")
        })
    }
}

/// Excitation probability on a τ grid, with optional per-channel breakdown.
#[derive(Debug, Clone, PartialEq)]
pub struct PeSeries<T: Real> {
    pub tau: Vec<T>,
    pub values: Vec<T>,
    /// Channel `s` holds `|⟨N-s, ½|U|N, -½⟩|²`.
    pub channels: BTreeMap<i64, Vec<T>>,
}

impl<T: Real> PeSeries<T> {
    pub fn new(tau: Vec<T>, values: Vec<T>) -> Self {
        Self {
            tau,
            values,
            channels: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.tau.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tau.is_empty()
    }

    pub fn max(&self) -> T {
        self.values.iter().copied().fold(T::neg_infinity(), T::max)
    }

    pub fn min(&self) -> T {
        self.values.iter().copied().fold(T::infinity(), T::min)
    }
}

/// `count` evenly spaced points from `start` to `stop` inclusive.
pub fn linspace<T: Real>(start: T, stop: T, count: usize) -> Vec<T> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (stop - start) / T::from_usize(count - 1).expect("grid size");
            (0..count)
                .map(|i| start + step * T::from_usize(i).expect("grid index"))
                .collect()
        }
    }
}

/// `u^(N)`: free two-level evolution of the `N-1` times dressed states under
/// `½Δ_N σ_z + ½(χ_N b σ_+ + h.c.)`.
pub fn dressed_propagator<T: Real>(p: &StageParams<T>) -> PropagatorComponents<T> {
    let w = p.splitting;
    let minus_i = -imag_unit::<T>();
    let sin = TermSum::sin_half(w);
    let cl = p.norm_coupling();
    PropagatorComponents::new(TermVector([
        TermSum::cos_half(w),
        sin.scale(minus_i * p.norm_detuning()),
        sin.scale(minus_i * cl).shifted(T::zero(), p.shift),
        sin.scale(minus_i * cl.conj()).shifted(T::zero(), -p.shift),
    ]))
}

/// Undressing matrix `T(k)`: the action `X ↦ S_k U_{k+1} X S_k†` on the
/// coefficient 4-vector, with `θ_{k+1} = δm_{k+1} τ`.
pub fn build_t<T: Real>(p: &StageParams<T>) -> TermMatrix<T, 4> {
    let half = T::lit(0.5);
    let dm = T::from_int(p.step);
    let s = p.shift;
    let dl = p.norm_detuning();
    let cl = p.norm_coupling();
    let sl = p.norm_sum();
    let pd = p.phased_norm_diff();
    let cos = TermSum::cos_half(dm);
    // -i sin(θ/2)
    let msin = TermSum::sin_half(dm).scale(-imag_unit::<T>());
    let e = |a: Complex<T>, f: T, sh: i64| TermSum::from_term(Term::new(a, f, sh));
    let zero = TermSum::zero;
    TermMatrix([
        [cos.clone(), msin.clone(), zero(), zero()],
        [
            msin.scale(re(dl)),
            cos.scale(re(dl)),
            e(-cl.conj() * half, -dm, -s),
            e(-cl * half, dm, s),
        ],
        [
            msin.scale(cl).shifted(T::zero(), s),
            cos.scale(cl).shifted(T::zero(), s),
            e(re(sl), -dm, 0),
            e(pd, dm, 2 * s),
        ],
        [
            msin.scale(cl.conj()).shifted(T::zero(), -s),
            cos.scale(cl.conj()).shifted(T::zero(), -s),
            e(pd.conj(), -dm, -2 * s),
            e(re(sl), dm, 0),
        ],
    ])
}

/// `u^(0) = T(1) T(2) ⋯ T(N-1) u^(N)`.
///
/// Applied right to left as matrix-vector products, canonicalising after each.
pub fn undress<T: Real>(cr: &CascadeResult<T>) -> PropagatorComponents<T> {
    let mut u = dressed_propagator(cr.final_stage()).u;
    for p in cr.stages[..cr.stages.len() - 1].iter().rev() {
        u = &build_t(p) * &u;
    }
    PropagatorComponents::new(u)
}

/// `P_e(τ) = |Tr_field u_+(τ)|²` under equal field weights, with
/// `|⟨N-s,½|U|N,-½⟩|²` for each requested channel `s`.
pub fn excitation_probability<T: Real>(
    u0: &PropagatorComponents<T>,
    tau: &[T],
    channels: &[i64],
) -> PeSeries<T> {
    let plus = u0.sigma_plus();
    let traced = plus.field_trace();
    let values = tau
        .iter()
        .map(|&t| traced.evaluate(t).expect("traced").norm_sqr())
        .collect();
    let mut series = PeSeries::new(tau.to_vec(), values);
    for &s in channels {
        let group = plus.channel(s).field_trace();
        series.channels.insert(
            s,
            tau.iter()
                .map(|&t| group.evaluate(t).expect("traced").norm_sqr())
                .collect(),
        );
    }
    series
}

/// Complex channel amplitudes `⟨N-s,½|U|N,-½⟩` for every shift present in `u_+`.
pub fn channel_amplitudes<T: Real>(
    u0: &PropagatorComponents<T>,
    tau: T,
) -> BTreeMap<i64, Complex<T>> {
    let plus = u0.sigma_plus();
    plus.shifts()
        .into_iter()
        .map(|s| {
            let a = plus.channel(s).field_trace().evaluate(tau).expect("traced");
            (s, a)
        })
        .collect()
}

/// Convenience: cascade, undress, and evaluate in one call.
pub fn analytic_pe<T: Real>(
    cfg: &crate::config::ModeConfig<T>,
    tau: &[T],
    channels: &[i64],
) -> Result<PeSeries<T>> {
    let cr = crate::cascade::run_cascade(cfg)?;
    Ok(excitation_probability(&undress(&cr), tau, channels))
}

pub(crate) fn check_grids<T: Real>(a: &[T], b: &[T]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::GridMismatch(format!(
            "{} vs {} points",
            a.len(),
            b.len()
        )));
    }
    for (i, (x, y)) in a.iter().zip(b).enumerate() {
        let scale = T::one().max(x.abs());
        if (*x - *y).abs() > T::lit(1e-9) * scale {
            return Err(Error::GridMismatch(format!("point {i}: {x} vs {y}")));
        }
    }
    Ok(())
}
