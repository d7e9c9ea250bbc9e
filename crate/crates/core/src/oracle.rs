//! Brute-force reference solver.
//!
//! The mean-field Hamiltonian is a banded matrix on the lattice of field
//! offsets `n ∈ [-W, W]` crossed with the spin. It is diagonalised once and
//! the initial state `|0, -½⟩` is propagated exactly to every grid point.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use num_traits::Zero;

use crate::cascade::StageParams;
use crate::config::ModeConfig;
use crate::error::{Error, Result};
use crate::propagator::{check_grids, PeSeries};

/// Halfwidth used by the shipped presets.
pub const DEFAULT_HALFWIDTH: usize = 200;
/// Maximum population tolerated in the outer tenth of the lattice.
pub const LEAKAGE_THRESHOLD: f64 = 1e-8;
/// Maximum tolerated `|‖ψ‖² - 1|`.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Lattice `n ∈ [-W, W]` times spin; row `2(n + W) + spin` with spin 0 = down.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncatedBasis {
    pub halfwidth: usize,
}

impl TruncatedBasis {
    pub fn new(halfwidth: usize) -> Self {
        Self { halfwidth }
    }

    pub fn dim(&self) -> usize {
        2 * (2 * self.halfwidth + 1)
    }

    pub fn offsets(&self) -> RangeInclusive<i64> {
        let w = self.halfwidth as i64;
        -w..=w
    }

    pub fn contains(&self, n: i64) -> bool {
        n.unsigned_abs() <= self.halfwidth as u64
    }

    pub fn index(&self, n: i64, up: bool) -> Option<usize> {
        self.contains(n)
            .then(|| 2 * (n + self.halfwidth as i64) as usize + usize::from(up))
    }

    /// Inverse of [`index`](Self::index).
    pub fn state(&self, idx: usize) -> (i64, bool) {
        ((idx / 2) as i64 - self.halfwidth as i64, idx % 2 == 1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum HamiltonianMatrix {
    /// All Rabi amplitudes real: real symmetric.
    Real(DMatrix<f64>),
    Complex(DMatrix<Complex64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    pub basis: TruncatedBasis,
    pub matrix: HamiltonianMatrix,
}

impl Hamiltonian {
    pub fn to_complex(&self) -> DMatrix<Complex64> {
        match &self.matrix {
            HamiltonianMatrix::Real(m) => m.map(|x| Complex64::new(x, 0.0)),
            HamiltonianMatrix::Complex(m) => m.clone(),
        }
    }

    /// `max |H - H†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        match &self.matrix {
            HamiltonianMatrix::Real(m) => (m - m.transpose()).amax(),
            HamiltonianMatrix::Complex(m) => (m - m.adjoint()).map(|z| z.norm()).max(),
        }
    }
}

/// Smallest admissible halfwidth is one more than this.
pub fn required_halfwidth(cfg: &ModeConfig<f64>) -> usize {
    let reach = (0..cfg.n_modes())
        .map(|k| cfg.shift(k).unsigned_abs())
        .max()
        .unwrap_or(0);
    4 * reach as usize
}

/// Diagonal `n ± ½ω₀`, coupling `⟨n - (j+m_k), ½|H|n, -½⟩ = ½Ω_k`.
/// Couplings that would leave the lattice are dropped.
pub fn build_hamiltonian(cfg: &ModeConfig<f64>, halfwidth: usize) -> Result<Hamiltonian> {
    cfg.validate()?;
    let required = required_halfwidth(cfg);
    if halfwidth <= required {
        return Err(Error::WindowTooSmall {
            halfwidth,
            required,
        });
    }
    let basis = TruncatedBasis::new(halfwidth);
    let dim = basis.dim();
    let half_w0 = 0.5 * cfg.omega0();
    let mut h = DMatrix::<Complex64>::zeros(dim, dim);
    for n in basis.offsets() {
        let down = basis.index(n, false).expect("in range");
        let up = basis.index(n, true).expect("in range");
        h[(down, down)] = Complex64::new(n as f64 - half_w0, 0.0);
        h[(up, up)] = Complex64::new(n as f64 + half_w0, 0.0);
        for k in 0..cfg.n_modes() {
            if let Some(target) = basis.index(n - cfg.shift(k), true) {
                let g = 0.5 * cfg.omega[k];
                h[(target, down)] += g;
                h[(down, target)] += g.conj();
            }
        }
    }
    let matrix = if cfg.omega.iter().all(|w| w.im == 0.0) {
        HamiltonianMatrix::Real(h.map(|z| z.re))
    } else {
        HamiltonianMatrix::Complex(h)
    };
    Ok(Hamiltonian { basis, matrix })
}

/// Exact evolution of `|0, -½⟩` on a τ grid.
#[derive(Debug, Clone)]
pub struct OracleRun {
    pub basis: TruncatedBasis,
    pub eigenvalues: Vec<f64>,
    /// Columns are eigenvectors.
    pub eigenvectors: DMatrix<Complex64>,
    pub tau: Vec<f64>,
    /// `amplitudes[t][s + W]` is the interaction-frame amplitude
    /// `e^{-isτ} ⟨-s, ½|ψ(τ)⟩` of channel `s`.
    pub amplitudes: Vec<Vec<Complex64>>,
    /// Coherent equal-weight `P_e` plus the requested channel populations.
    pub pe: PeSeries<f64>,
    /// Largest population found at `|n| > 0.9 W` over the run.
    pub leakage: f64,
    /// Largest `|‖ψ‖² - 1|` over the run.
    pub norm_defect: f64,
}

impl OracleRun {
    pub fn is_valid(&self) -> bool {
        self.leakage < LEAKAGE_THRESHOLD && self.norm_defect <= NORM_TOLERANCE
    }

    /// Channel amplitude at grid point `t`; zero outside the lattice.
    pub fn amplitude(&self, t: usize, s: i64) -> Complex64 {
        if self.basis.contains(s) {
            self.amplitudes[t][(s + self.basis.halfwidth as i64) as usize]
        } else {
            Complex64::zero()
        }
    }

    /// Channel amplitudes at grid point `t` keyed by shift.
    pub fn channel_map(&self, t: usize) -> BTreeMap<i64, Complex64> {
        self.basis
            .offsets()
            .map(|s| (s, self.amplitude(t, s)))
            .collect()
    }
}

/// Diagonalises `h` and propagates `|0, -½⟩` to every point of `tau`.
pub fn evolve(h: &Hamiltonian, tau: &[f64], channels: &[i64]) -> Result<OracleRun> {
    let defect = h.hermiticity_defect();
    if defect > 1e-12 {
        return Err(Error::NotHermitian(defect));
    }
    let basis = h.basis;
    let dim = basis.dim();
    let nt = tau.len();
    let start = basis.index(0, false).expect("origin");

    let (eigenvalues, eigenvectors, psi) = match &h.matrix {
        HamiltonianMatrix::Real(m) => {
            let eig = SymmetricEigen::new(m.clone());
            let v = eig.eigenvectors;
            let lam = eig.eigenvalues;
            // V e^{-iΛτ} Vᵀ e₀ split into real and imaginary parts.
            let mut a_re = DMatrix::<f64>::zeros(dim, nt);
            let mut a_im = DMatrix::<f64>::zeros(dim, nt);
            for k in 0..dim {
                let q = v[(start, k)];
                for (t, &tv) in tau.iter().enumerate() {
                    let (s, c) = (lam[k] * tv).sin_cos();
                    a_re[(k, t)] = q * c;
                    a_im[(k, t)] = -q * s;
                }
            }
            let re = &v * a_re;
            let im = &v * a_im;
            let psi = re.zip_map(&im, Complex64::new);
            (
                lam.iter().copied().collect::<Vec<_>>(),
                v.map(|x| Complex64::new(x, 0.0)),
                psi,
            )
        }
        HamiltonianMatrix::Complex(m) => {
            let eig = SymmetricEigen::new(m.clone());
            let v = eig.eigenvectors;
            let lam = eig.eigenvalues;
            let mut a = DMatrix::<Complex64>::zeros(dim, nt);
            for k in 0..dim {
                let q = v[(start, k)].conj();
                for (t, &tv) in tau.iter().enumerate() {
                    a[(k, t)] = q * Complex64::from_polar(1.0, -lam[k] * tv);
                }
            }
            let psi = &v * a;
            (lam.iter().copied().collect::<Vec<_>>(), v, psi)
        }
    };

    let w = basis.halfwidth as i64;
    let edge = 0.9 * basis.halfwidth as f64;
    let mut leakage = 0.0f64;
    let mut norm_defect = 0.0f64;
    let mut amplitudes = Vec::with_capacity(nt);
    let mut values = Vec::with_capacity(nt);
    let mut chan: BTreeMap<i64, Vec<f64>> = channels
        .iter()
        .map(|&s| (s, Vec::with_capacity(nt)))
        .collect();
    for (t, &tv) in tau.iter().enumerate() {
        let col = psi.column(t);
        let mut norm = 0.0;
        let mut outer = 0.0;
        for (idx, z) in col.iter().enumerate() {
            let p = z.norm_sqr();
            norm += p;
            if (basis.state(idx).0.abs() as f64) > edge {
                outer += p;
            }
        }
        norm_defect = norm_defect.max((norm - 1.0).abs());
        leakage = leakage.max(outer);

        let amps: Vec<Complex64> = (-w..=w)
            .map(|s| {
                let up = basis.index(-s, true).expect("in range");
                col[up] * Complex64::from_polar(1.0, -(s as f64) * tv)
            })
            .collect();
        values.push(amps.iter().sum::<Complex64>().norm_sqr());
        for (&s, series) in chan.iter_mut() {
            let a = if basis.contains(s) {
                amps[(s + w) as usize]
            } else {
                Complex64::zero()
            };
            series.push(a.norm_sqr());
        }
        amplitudes.push(amps);
    }
    if leakage >= LEAKAGE_THRESHOLD {
        log::warn!("oracle leakage {leakage:e} exceeds {LEAKAGE_THRESHOLD:e}; enlarge the window");
    }
    let mut pe = PeSeries::new(tau.to_vec(), values);
    pe.channels = chan;
    Ok(OracleRun {
        basis,
        eigenvalues,
        eigenvectors,
        tau: tau.to_vec(),
        amplitudes,
        pe,
        leakage,
        norm_defect,
    })
}

/// [`build_hamiltonian`] followed by [`evolve`].
pub fn run_oracle(
    cfg: &ModeConfig<f64>,
    halfwidth: usize,
    tau: &[f64],
    channels: &[i64],
) -> Result<OracleRun> {
    evolve(&build_hamiltonian(cfg, halfwidth)?, tau, channels)
}

/// Residuals of the dressing unitary on the lattice, interior rows only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkReport {
    /// `max |S†S - 𝟙|`.
    pub unitarity: f64,
    /// `max |S†HS - ½χ̃σ_z|`.
    pub residual: f64,
    /// Interior rows examined.
    pub rows: usize,
}

/// Checks that `S_k` built with ladder `b_{j+m_k}` turns
/// `½Δσ_z + ½(χ b σ_+ + h.c.)` into `½χ̃σ_z`.
pub fn verify_sk(p: &StageParams<f64>, halfwidth: usize) -> SkReport {
    verify_sk_with_ladder(p, p.shift, halfwidth)
}

/// As [`verify_sk`] but with the unitary built on ladder `b_ladder`, which
/// need not match the coupling's.
pub fn verify_sk_with_ladder(p: &StageParams<f64>, ladder: i64, halfwidth: usize) -> SkReport {
    let basis = TruncatedBasis::new(halfwidth);
    let dim = basis.dim();
    let phase = if p.coupling.norm() > 0.0 {
        p.coupling / p.coupling.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let a = p.norm_sum().max(0.0).sqrt();
    let c = (-p.norm_diff()).max(0.0).sqrt();

    let mut h = DMatrix::<Complex64>::zeros(dim, dim);
    let mut s = DMatrix::<Complex64>::zeros(dim, dim);
    for n in basis.offsets() {
        let down = basis.index(n, false).expect("in range");
        let up = basis.index(n, true).expect("in range");
        h[(up, up)] = Complex64::new(0.5 * p.detuning, 0.0);
        h[(down, down)] = Complex64::new(-0.5 * p.detuning, 0.0);
        s[(up, up)] = Complex64::new(a, 0.0);
        s[(down, down)] = Complex64::new(a, 0.0);
        if let Some(t) = basis.index(n - p.shift, true) {
            h[(t, down)] = 0.5 * p.coupling;
            h[(down, t)] = 0.5 * p.coupling.conj();
        }
        if let Some(t) = basis.index(n - ladder, true) {
            s[(t, down)] = -phase * c;
            s[(down, t)] = phase.conj() * c;
        }
    }
    let sd = s.adjoint();
    let unit = &sd * &s;
    let dressed = &sd * &h * &s;

    let reach = 2 * (p.shift.unsigned_abs().max(ladder.unsigned_abs()) as i64);
    let limit = halfwidth as i64 - reach;
    let mut report = SkReport {
        unitarity: 0.0,
        residual: 0.0,
        rows: 0,
    };
    for r in 0..dim {
        let (n, up) = basis.state(r);
        if n.abs() > limit {
            continue;
        }
        report.rows += 1;
        let target = if up { 0.5 } else { -0.5 } * p.splitting;
        for col in 0..dim {
            let id = if col == r { 1.0 } else { 0.0 };
            let diag = if col == r { target } else { 0.0 };
            report.unitarity = report.unitarity.max((unit[(r, col)] - id).norm());
            report.residual = report.residual.max((dressed[(r, col)] - diag).norm());
        }
    }
    report
}

/// Max-abs and RMS deviation of one series from another.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Deviation {
    pub max_abs: f64,
    pub rms: f64,
}

impl Deviation {
    fn between(a: &[f64], b: &[f64]) -> Self {
        let n = a.len().max(1) as f64;
        let (max_abs, sq) = a
            .iter()
            .zip(b)
            .map(|(x, y)| (x - y).abs())
            .fold((0.0f64, 0.0), |(m, s), d| (m.max(d), s + d * d));
        Self {
            max_abs,
            rms: (sq / n).sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ComparisonReport {
    pub max_abs: f64,
    pub rms: f64,
    /// Channels present in both series.
    pub per_channel: BTreeMap<i64, Deviation>,
}

/// Deviation of `analytic` from `reference` on a shared τ grid.
pub fn compare(analytic: &PeSeries<f64>, reference: &PeSeries<f64>) -> Result<ComparisonReport> {
    check_grids(&analytic.tau, &reference.tau)?;
    let total = Deviation::between(&analytic.values, &reference.values);
    let per_channel = analytic
        .channels
        .iter()
        .filter_map(|(s, a)| {
            reference
                .channels
                .get(s)
                .map(|b| (*s, Deviation::between(a, b)))
        })
        .collect();
    Ok(ComparisonReport {
        max_abs: total.max_abs,
        rms: total.rms,
        per_channel,
    })
}
