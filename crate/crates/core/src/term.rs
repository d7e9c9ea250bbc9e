//! Phase-term algebra.
//!
//! Every operator coefficient produced by the dressing cascade is a finite sum
//! of terms `c · exp(i f τ/2) · b_s`, where `b_s` shifts the non-degenerate
//! field ladder down by `s` (`b_{-s}` is the adjoint of `b_s` in the mean-field
//! limit). The shift operators commute and compose additively, so the whole
//! calculation lives in a commutative ring whose elements are [`TermSum`]s.

use std::cmp::Ordering;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{imag_unit, re, Real};

/// A single `amp · exp(i · halffreq · τ/2) · b_shift`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term<T: Real> {
    pub amp: Complex<T>,
    /// Frequency in units of the comb spacing, stored so that the phase is
    /// `exp(i · halffreq · τ / 2)`.
    pub halffreq: T,
    /// Field ladder displacement carried by `b_shift`.
    pub shift: i64,
}

impl<T: Real> Term<T> {
    pub fn new(amp: Complex<T>, halffreq: T, shift: i64) -> Self {
        Self {
            amp,
            halffreq,
            shift,
        }
    }

    /// Real-amplitude convenience constructor.
    pub fn real(amp: T, halffreq: T, shift: i64) -> Self {
        Self::new(re(amp), halffreq, shift)
    }

    pub fn one() -> Self {
        Self::real(T::one(), T::zero(), 0)
    }

    /// Adjoint: conjugate amplitude, reversed phase, reversed ladder shift.
    pub fn adjoint(&self) -> Self {
        Self::new(self.amp.conj(), -self.halffreq, -self.shift)
    }

    /// Value of the phase factor and amplitude at `tau`, ignoring the ladder shift.
    pub fn value_at(&self, tau: T) -> Complex<T> {
        self.amp * Complex::from_polar(T::one(), self.halffreq * tau / T::lit(2.0))
    }
}

impl<T: Real> Mul for Term<T> {
    type Output = Term<T>;

    fn mul(self, rhs: Term<T>) -> Term<T> {
        Term::new(
            self.amp * rhs.amp,
            self.halffreq + rhs.halffreq,
            self.shift + rhs.shift,
        )
    }
}

/// Product of two terms: amplitudes multiply, phases and shifts add.
pub fn term_mul<T: Real>(a: Term<T>, b: Term<T>) -> Term<T> {
    a * b
}

/// Canonical sum of [`Term`]s.
///
/// Terms are kept sorted by `(shift, halffreq)` with at most one term per key;
/// half-frequencies within [`Real::MERGE_TOL`] share a key and amplitudes below
/// [`Real::DROP_TOL`] are removed.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TermSum<T: Real> {
    terms: Vec<Term<T>>,
}

impl<T: Real> TermSum<T> {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_term(Term::one())
    }

    pub fn constant(c: Complex<T>) -> Self {
        Self::from_term(Term::new(c, T::zero(), 0))
    }

    pub fn from_term(t: Term<T>) -> Self {
        sum_canonicalize(vec![t])
    }

    pub fn from_terms<I: IntoIterator<Item = Term<T>>>(terms: I) -> Self {
        sum_canonicalize(terms.into_iter().collect())
    }

    /// `cos(w τ / 2)` as two exponential terms.
    pub fn cos_half(w: T) -> Self {
        let h = T::lit(0.5);
        Self::from_terms([Term::real(h, w, 0), Term::real(h, -w, 0)])
    }

    /// `sin(w τ / 2)` as two exponential terms.
    pub fn sin_half(w: T) -> Self {
        let h = imag_unit::<T>() * T::lit(0.5);
        Self::from_terms([Term::new(-h, w, 0), Term::new(h, -w, 0)])
    }

    pub fn terms(&self) -> &[Term<T>] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        sum_canonicalize(
            self.terms
                .iter()
                .map(|t| Term::new(t.amp * c, t.halffreq, t.shift))
                .collect(),
        )
    }

    /// Multiplies every term by `exp(i f τ/2) b_s`.
    pub fn shifted(&self, halffreq: T, shift: i64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| Term::new(t.amp, t.halffreq + halffreq, t.shift + shift))
                .collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        sum_canonicalize(self.terms.iter().map(Term::adjoint).collect())
    }

    /// Looks up the term stored under `(halffreq, shift)`.
    pub fn get(&self, halffreq: T, shift: i64) -> Option<&Term<T>> {
        self.terms
            .iter()
            .find(|t| t.shift == shift && (t.halffreq - halffreq).abs() <= T::MERGE_TOL)
    }

    /// Terms whose ladder shift equals `shift`, as a new sum.
    pub fn channel(&self, shift: i64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|t| t.shift == shift)
                .copied()
                .collect(),
        }
    }

    /// Distinct ladder shifts present, ascending.
    pub fn shifts(&self) -> Vec<i64> {
        let mut s: Vec<i64> = self.terms.iter().map(|t| t.shift).collect();
        s.dedup();
        s
    }

    /// Largest amplitude magnitude, zero for the empty sum.
    pub fn max_amp(&self) -> T {
        self.terms
            .iter()
            .map(|t| t.amp.norm())
            .fold(T::zero(), T::max)
    }

    pub fn evaluate(&self, tau: T) -> Result<Complex<T>> {
        evaluate(self, tau)
    }

    pub fn field_trace(&self) -> Self {
        field_trace(self)
    }

    /// Largest amplitude of `self - other`, i.e. the termwise distance.
    pub fn distance(&self, other: &Self) -> T {
        (self.clone() - other.clone()).max_amp()
    }
}

fn key_order<T: Real>(a: &Term<T>, b: &Term<T>) -> Ordering {
    a.shift.cmp(&b.shift).then(
        a.halffreq
            .partial_cmp(&b.halffreq)
            .unwrap_or(Ordering::Equal),
    )
}

/// Merges like-keyed terms, unifies half-frequencies within tolerance and drops
/// negligible amplitudes.
///
/// A run of half-frequencies is merged into the first (smallest) key of the run.
pub fn sum_canonicalize<T: Real>(mut terms: Vec<Term<T>>) -> TermSum<T> {
    terms.sort_by(key_order);
    let mut out: Vec<Term<T>> = Vec::with_capacity(terms.len());
    for t in terms {
        match out.last_mut() {
            Some(last)
                if last.shift == t.shift && (t.halffreq - last.halffreq).abs() <= T::MERGE_TOL =>
            {
                last.amp = last.amp + t.amp;
            }
            _ => out.push(t),
        }
    }
    out.retain(|t| t.amp.norm() > T::DROP_TOL);
    TermSum { terms: out }
}

/// Numeric value `Σ amp · exp(i f τ/2)`. Every term must already have shift zero.
pub fn evaluate<T: Real>(ts: &TermSum<T>, tau: T) -> Result<Complex<T>> {
    let mut acc = Complex::zero();
    for t in &ts.terms {
        if t.shift != 0 {
            return Err(Error::UntracedShift { shift: t.shift });
        }
        acc = acc + t.value_at(tau);
    }
    Ok(acc)
}

/// Partial trace over the field under equal (mean-field) weights: every `b_s`
/// becomes the identity.
pub fn field_trace<T: Real>(ts: &TermSum<T>) -> TermSum<T> {
    sum_canonicalize(
        ts.terms
            .iter()
            .map(|t| Term::new(t.amp, t.halffreq, 0))
            .collect(),
    )
}

impl<T: Real> From<Term<T>> for TermSum<T> {
    fn from(t: Term<T>) -> Self {
        TermSum::from_term(t)
    }
}

impl<T: Real> Add for TermSum<T> {
    type Output = TermSum<T>;

    fn add(mut self, rhs: TermSum<T>) -> TermSum<T> {
        self.terms.extend(rhs.terms);
        sum_canonicalize(self.terms)
    }
}

impl<'a, T: Real> Add<&'a TermSum<T>> for &'a TermSum<T> {
    type Output = TermSum<T>;

    fn add(self, rhs: &'a TermSum<T>) -> TermSum<T> {
        self.clone() + rhs.clone()
    }
}

impl<T: Real> AddAssign for TermSum<T> {
    fn add_assign(&mut self, rhs: TermSum<T>) {
        let lhs = std::mem::take(&mut self.terms);
        *self = TermSum { terms: lhs } + rhs;
    }
}

impl<T: Real> Neg for TermSum<T> {
    type Output = TermSum<T>;

    fn neg(self) -> TermSum<T> {
        TermSum {
            terms: self
                .terms
                .into_iter()
                .map(|t| Term::new(-t.amp, t.halffreq, t.shift))
                .collect(),
        }
    }
}

impl<T: Real> Sub for TermSum<T> {
    type Output = TermSum<T>;

    fn sub(self, rhs: TermSum<T>) -> TermSum<T> {
        self + (-rhs)
    }
}

impl<'a, T: Real> Mul<&'a TermSum<T>> for &'a TermSum<T> {
    type Output = TermSum<T>;

    fn mul(self, rhs: &'a TermSum<T>) -> TermSum<T> {
        if self.is_empty() || rhs.is_empty() {
            return TermSum::zero();
        }
        let mut prod = Vec::with_capacity(self.len() * rhs.len());
        for a in &self.terms {
            for b in &rhs.terms {
                prod.push(*a * *b);
            }
        }
        sum_canonicalize(prod)
    }
}

impl<T: Real> Mul for TermSum<T> {
    type Output = TermSum<T>;

    fn mul(self, rhs: TermSum<T>) -> TermSum<T> {
        &self * &rhs
    }
}
