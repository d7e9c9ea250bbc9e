//! Progressive dressing of the spin by one mode at a time.
//!
//! The interaction Hamiltonian is carried as a 3-vector of coefficients in the
//! basis `(σ_z, σ_+, σ_-)`. Stage `k` dresses the static resonant coupling
//! `χ_k b_{j+m_k} σ_+` with the unitary `S_k`, then rotates the frame by
//! `exp(-i δm_{k+1} τ σ_z / 2)` so the next mode's coupling becomes static. In
//! vector form one stage is `v ← M(k) v - ½ δm_{k+1} ẑ`.

use num_complex::Complex;
use num_traits::Zero;

use crate::config::ModeConfig;
use crate::error::{Error, Result};
use crate::matrix::{TermMatrix, TermVector};
use crate::scalar::{re, Real};
use crate::term::{Term, TermSum};

/// Dressed quantities of one stage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageParams<T: Real> {
    /// One-based stage index.
    pub k: usize,
    /// Detuning `Δ_k` of the (k-1)-times dressed spin from mode `k`.
    pub detuning: T,
    /// Static coupling `χ_k` to mode `k`.
    pub coupling: Complex<T>,
    /// Dressed splitting `χ̃_k = sqrt(Δ_k² + |χ_k|²)`.
    pub splitting: T,
    /// `Σ_k = (Δ_k + χ̃_k) / 2`.
    pub sum_half: T,
    /// `δ_k = (Δ_k - χ̃_k) / 2`.
    pub diff_half: T,
    /// Ladder shift `j + m_k` of the dressed mode.
    pub shift: i64,
    /// Frame step `δm_{k+1} = m_{k+1} - m_k`; zero for the final stage.
    pub step: i64,
}

impl<T: Real> StageParams<T> {
    pub fn new(k: usize, detuning: T, coupling: Complex<T>, shift: i64, step: i64) -> Self {
        let c2 = coupling.norm_sqr();
        let splitting = detuning.hypot(coupling.norm());
        let two = T::lit(2.0);
        // Pick the branch free of cancellation between Δ and χ̃.
        let (sum_half, diff_half) = if detuning >= T::zero() {
            let a = detuning + splitting;
            let d = if a > T::zero() {
                -c2 / (two * a)
            } else {
                T::zero()
            };
            (a / two, d)
        } else {
            let b = splitting - detuning;
            (c2 / (two * b), (detuning - splitting) / two)
        };
        Self {
            k,
            detuning,
            coupling,
            splitting,
            sum_half,
            diff_half,
            shift,
            step,
        }
    }

    fn over_splitting(&self, x: T) -> T {
        if self.splitting > T::zero() {
            x / self.splitting
        } else {
            T::zero()
        }
    }

    /// `Δ̲_k`.
    pub fn norm_detuning(&self) -> T {
        self.over_splitting(self.detuning)
    }

    /// `χ̲_k`.
    pub fn norm_coupling(&self) -> Complex<T> {
        if self.splitting > T::zero() {
            self.coupling / self.splitting
        } else {
            Complex::zero()
        }
    }

    /// `Σ̲_k`.
    pub fn norm_sum(&self) -> T {
        self.over_splitting(self.sum_half)
    }

    /// `δ̲_k` (real).
    pub fn norm_diff(&self) -> T {
        self.over_splitting(self.diff_half)
    }

    /// `δ̲_k · χ_k / χ_k*`: the coefficient that multiplies `b_{2(j+m_k)}`
    /// when `σ_-` is dressed. Equal to `δ̲_k` for real coupling.
    pub fn phased_norm_diff(&self) -> Complex<T> {
        let n = self.coupling.norm();
        let phase2 = if n > T::zero() {
            let u = self.coupling / n;
            u * u
        } else {
            Complex::new(T::one(), T::zero())
        };
        phase2 * self.norm_diff()
    }

    fn check_nondegenerate(&self) -> Result<()> {
        if self.splitting > T::zero() {
            Ok(())
        } else {
            Err(Error::DegenerateStage { stage: self.k })
        }
    }
}

/// A coefficient dropped by the final two-level truncation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedTerm<T: Real> {
    /// 0 = `σ_z`, 1 = `σ_+`, 2 = `σ_-`.
    pub component: usize,
    pub term: Term<T>,
    /// Coefficient magnitude (with the `½` prefactor removed) over `|χ_N|`.
    pub relative: T,
}

/// Output of [`run_cascade`].
#[derive(Debug, Clone)]
pub struct CascadeResult<T: Real> {
    /// Stage parameters for `k = 1..=N`.
    pub stages: Vec<StageParams<T>>,
    /// `v^(N-1)` before truncation.
    pub v_final: TermVector<T, 3>,
    /// Every term of `v^(N-1)` not kept by the two-level truncation.
    pub truncation_report: Vec<TruncatedTerm<T>>,
}

impl<T: Real> CascadeResult<T> {
    pub fn final_stage(&self) -> &StageParams<T> {
        self.stages.last().expect("cascade has at least one stage")
    }

    /// Largest relative magnitude among dropped terms.
    pub fn max_truncated(&self) -> T {
        self.truncation_report
            .iter()
            .map(|t| t.relative)
            .fold(T::zero(), T::max)
    }
}

/// `v^(0) = ½(Δ₀, Σ_k Ω_k e^{-i m_k τ} b_{j+m_k}, h.c.)`.
pub fn stage_zero<T: Real>(cfg: &ModeConfig<T>) -> TermVector<T, 3> {
    let half = T::lit(0.5);
    let two = T::lit(2.0);
    let plus = TermSum::from_terms((0..cfg.n_modes()).map(|k| {
        Term::new(
            cfg.omega[k] * half,
            -two * T::from_int(cfg.m[k]),
            cfg.shift(k),
        )
    }));
    let minus = plus.adjoint();
    TermVector([TermSum::constant(re(cfg.delta0 * half)), plus, minus])
}

/// Stage matrix `M(k)`; columns are the images of `σ_z`, `σ_+`, `σ_-` under
/// `X ↦ U_{k+1}† S_k† X S_k U_{k+1}`.
///
/// The frame phase `Θ_{k+1} = exp(i δm_{k+1} τ)` is the term `(1, 2 δm_{k+1}, 0)`.
pub fn build_m<T: Real>(p: &StageParams<T>) -> Result<TermMatrix<T, 3>> {
    p.check_nondegenerate()?;
    let half = T::lit(0.5);
    let th = T::lit(2.0) * T::from_int(p.step);
    let s = p.shift;
    let dl = p.norm_detuning();
    let cl = p.norm_coupling();
    let sl = p.norm_sum();
    let pd = p.phased_norm_diff();
    let e = |a: Complex<T>, f: T, sh: i64| TermSum::from_term(Term::new(a, f, sh));
    Ok(TermMatrix([
        [
            e(re(dl), T::zero(), 0),
            e(cl.conj() * half, T::zero(), -s),
            e(cl * half, T::zero(), s),
        ],
        [e(-cl, th, s), e(re(sl), th, 0), e(pd, th, 2 * s)],
        [
            e(-cl.conj(), -th, -s),
            e(pd.conj(), -th, -2 * s),
            e(re(sl), -th, 0),
        ],
    ]))
}

/// Applies stage `p.k` to `v^(k-1)`, returning `v^(k)` and the parameters of
/// stage `k + 1`.
///
/// `χ_{k+1}` is read off as (twice) the static `σ_+` coefficient at ladder
/// shift `j + m_{k+1}`; `Δ_{k+1} = χ̃_k - δm_{k+1}`.
pub fn next_stage<T: Real>(
    p: &StageParams<T>,
    v_prev: &TermVector<T, 3>,
    cfg: &ModeConfig<T>,
) -> Result<(TermVector<T, 3>, StageParams<T>)> {
    let next = p.k; // zero-based index of mode k+1
    if next >= cfg.n_modes() {
        return Err(Error::InvalidConfig(format!(
            "stage {} is the last of {} modes",
            p.k,
            cfg.n_modes()
        )));
    }
    let m = build_m(p)?;
    let mut v = &m * v_prev;
    v[0] += TermSum::constant(re(-T::lit(0.5) * T::from_int(p.step)));

    let shift = cfg.shift(next);
    let coupling = match v[1].get(T::zero(), shift) {
        Some(t) => t.amp * T::lit(2.0),
        None if cfg.omega[next].is_zero() => Complex::zero(),
        None => return Err(Error::Extraction { stage: p.k, shift }),
    };
    let detuning = p.splitting - T::from_int(p.step);
    let params = StageParams::new(p.k + 1, detuning, coupling, shift, cfg.step_after(next));
    Ok((v, params))
}

/// Runs all `N - 1` dressing stages and records what the final two-level
/// truncation discards.
pub fn run_cascade<T: Real>(cfg: &ModeConfig<T>) -> Result<CascadeResult<T>> {
    cfg.validate()?;
    if !cfg.resonance_order_ok() {
        log::warn!(
            "detuning {} is not closest to the highest mode offset {}; accuracy degrades",
            cfg.delta0,
            cfg.m[cfg.n_modes() - 1]
        );
    }
    let mut v = stage_zero(cfg);
    let mut p = StageParams::new(1, cfg.delta0, cfg.omega[0], cfg.shift(0), cfg.step_after(0));
    let mut stages = Vec::with_capacity(cfg.n_modes());
    for _ in 1..cfg.n_modes() {
        let (v_next, p_next) = next_stage(&p, &v, cfg)?;
        stages.push(p);
        v = v_next;
        p = p_next;
    }
    stages.push(p);
    let truncation_report = truncation(&v, &p);
    Ok(CascadeResult {
        stages,
        v_final: v,
        truncation_report,
    })
}

fn truncation<T: Real>(v: &TermVector<T, 3>, last: &StageParams<T>) -> Vec<TruncatedTerm<T>> {
    let two = T::lit(2.0);
    let chi = last.coupling.norm();
    let kept = |c: usize, t: &Term<T>| -> bool {
        let at_zero = t.halffreq.abs() <= T::MERGE_TOL;
        match c {
            0 => at_zero && t.shift == 0,
            1 => at_zero && t.shift == last.shift,
            _ => at_zero && t.shift == -last.shift,
        }
    };
    let mut out = Vec::new();
    for (c, comp) in v.iter().enumerate() {
        for t in comp.terms() {
            if kept(c, t) {
                continue;
            }
            let mag = two * t.amp.norm();
            let relative = if chi > T::zero() {
                mag / chi
            } else {
                T::infinity()
            };
            out.push(TruncatedTerm {
                component: c,
                term: *t,
                relative,
            });
        }
    }
    out.sort_by(|a, b| {
        b.relative
            .partial_cmp(&a.relative)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    out
}
