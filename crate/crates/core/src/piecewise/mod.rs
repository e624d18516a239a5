//! Piecewise polynomials in `t` on `[0, 1]` with parameter-polynomial
//! coefficients and exact rational breakpoints.

mod upoly;

pub use upoly::UPoly;

use std::fmt;

use num_traits::{One, Zero};

use crate::exact::{Assignment, ExactError, ParamPoly, Rational, Symbols};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PiecewiseError {
    #[error("coefficient list is empty")]
    EmptyCoefficients,
    #[error("malformed breakpoints: {0}")]
    BadBreakpoints(String),
    #[error("expected {expected} slopes for {breaks} interior breakpoints, got {got}")]
    SlopeCount { expected: usize, breaks: usize, got: usize },
    #[error("t = {0} lies outside [0, 1]")]
    OutOfRange(Rational),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Piecewise polynomial on `0 = t_0 < t_1 < ... < t_m = 1`.
///
/// Segment `i` is valid on `[t_i, t_{i+1}]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewisePoly {
    symbols: Symbols,
    breaks: Vec<Rational>,
    segments: Vec<UPoly>,
    /// Set when the construction guarantees agreement at every breakpoint.
    continuous: bool,
}

impl PiecewisePoly {
    /// Single segment `coeffs[0] + coeffs[1] t + ...` on `[0, 1]`.
    pub fn from_poly(coeffs: Vec<ParamPoly>) -> Result<Self, PiecewiseError> {
        let symbols = coeffs.first().ok_or(PiecewiseError::EmptyCoefficients)?.symbols().clone();
        if let Some(bad) = coeffs.iter().find(|c| c.symbols() != &symbols) {
            return Err(ExactError::SymbolMismatch {
                left: symbols.to_string(),
                right: bad.symbols().to_string(),
            }
            .into());
        }
        Ok(Self::single(UPoly::from_coeffs(&symbols, coeffs)))
    }

    pub fn single(p: UPoly) -> Self {
        PiecewisePoly {
            symbols: p.symbols().clone(),
            breaks: vec![Rational::zero(), Rational::one()],
            segments: vec![p],
            continuous: true,
        }
    }

    pub fn zero(symbols: &Symbols) -> Self {
        Self::single(UPoly::zero(symbols))
    }

    pub fn constant(c: ParamPoly) -> Self {
        Self::single(UPoly::constant(c))
    }

    /// Continuous piecewise-linear function with value `intercept` at `t = 0`
    /// and slope `slopes[k]` on the `k`-th segment.
    pub fn pl_from_slopes(
        intercept: ParamPoly,
        slopes: Vec<ParamPoly>,
        interior_breaks: Vec<Rational>,
    ) -> Result<Self, PiecewiseError> {
        if slopes.len() != interior_breaks.len() + 1 {
            return Err(PiecewiseError::SlopeCount {
                expected: interior_breaks.len() + 1,
                breaks: interior_breaks.len(),
                got: slopes.len(),
            });
        }
        let symbols = intercept.symbols().clone();
        let mut breaks = Vec::with_capacity(slopes.len() + 1);
        breaks.push(Rational::zero());
        breaks.extend(interior_breaks);
        breaks.push(Rational::one());
        validate_breaks(&breaks)?;
        let mut segments = Vec::with_capacity(slopes.len());
        let mut constant = intercept;
        for (k, slope) in slopes.iter().enumerate() {
            if k > 0 {
                // continuity at t_k: c_k = c_{k-1} + (m_{k-1} - m_k) t_k
                constant = &constant + &(&slopes[k - 1] - slope).scale(&breaks[k]);
            }
            segments.push(UPoly::linear(constant.clone(), slope.clone()));
        }
        Ok(PiecewisePoly { symbols, breaks, segments, continuous: true })
    }

    /// General constructor; `breaks` must run from 0 to 1 strictly increasing.
    pub fn from_segments(breaks: Vec<Rational>, segments: Vec<UPoly>) -> Result<Self, PiecewiseError> {
        validate_breaks(&breaks)?;
        if segments.len() + 1 != breaks.len() {
            return Err(PiecewiseError::BadBreakpoints(format!(
                "{} breakpoints for {} segments",
                breaks.len(),
                segments.len()
            )));
        }
        let symbols = segments[0].symbols().clone();
        let mut p = PiecewisePoly { symbols, breaks, segments, continuous: false };
        p.continuous = p.is_continuous();
        Ok(p)
    }

    pub fn symbols(&self) -> &Symbols {
        &self.symbols
    }

    pub fn breaks(&self) -> &[Rational] {
        &self.breaks
    }

    pub fn interior_breaks(&self) -> &[Rational] {
        &self.breaks[1..self.breaks.len() - 1]
    }

    pub fn segments(&self) -> &[UPoly] {
        &self.segments
    }

    pub fn is_zero(&self) -> bool {
        self.segments.iter().all(UPoly::is_zero)
    }

    pub fn max_degree(&self) -> usize {
        self.segments.iter().filter_map(UPoly::degree).max().unwrap_or(0)
    }

    /// Exact check that adjacent segments agree at each interior breakpoint.
    pub fn is_continuous(&self) -> bool {
        (1..self.segments.len())
            .all(|i| self.segments[i - 1].eval(&self.breaks[i]) == self.segments[i].eval(&self.breaks[i]))
    }

    /// Same function over a finer breakpoint set (which must contain the current one).
    pub fn refine(&self, breaks: &[Rational]) -> PiecewisePoly {
        let mut segments = Vec::with_capacity(breaks.len() - 1);
        let mut src = 0;
        for w in breaks.windows(2) {
            while self.breaks[src + 1] <= w[0] {
                src += 1;
            }
            segments.push(self.segments[src].clone());
        }
        PiecewisePoly {
            symbols: self.symbols.clone(),
            breaks: breaks.to_vec(),
            segments,
            continuous: self.continuous,
        }
    }

    fn aligned(&self, other: &PiecewisePoly) -> (PiecewisePoly, PiecewisePoly) {
        if self.breaks == other.breaks {
            return (self.clone(), other.clone());
        }
        let mut all: Vec<Rational> = self.breaks.iter().chain(other.breaks.iter()).cloned().collect();
        all.sort();
        all.dedup();
        (self.refine(&all), other.refine(&all))
    }

    fn zip_with(&self, other: &PiecewisePoly, f: impl Fn(&UPoly, &UPoly) -> UPoly) -> PiecewisePoly {
        assert_eq!(self.symbols, other.symbols, "symbol lists differ");
        let (a, b) = self.aligned(other);
        let segments = a.segments.iter().zip(&b.segments).map(|(x, y)| f(x, y)).collect();
        PiecewisePoly {
            symbols: self.symbols.clone(),
            breaks: a.breaks,
            segments,
            continuous: self.continuous && other.continuous,
        }
    }

    pub fn add(&self, other: &PiecewisePoly) -> PiecewisePoly {
        self.zip_with(other, UPoly::add)
    }

    pub fn sub(&self, other: &PiecewisePoly) -> PiecewisePoly {
        self.zip_with(other, UPoly::sub)
    }

    /// Segmentwise product over the union of both breakpoint sets.
    pub fn mul(&self, other: &PiecewisePoly) -> PiecewisePoly {
        self.zip_with(other, UPoly::mul)
    }

    pub fn scale(&self, c: &Rational) -> PiecewisePoly {
        self.map_segments(|s| s.scale(c))
    }

    pub fn scale_poly(&self, c: &ParamPoly) -> PiecewisePoly {
        self.map_segments(|s| s.scale_poly(c))
    }

    /// Applies `f` to every segment; continuity is kept only if `f` is linear
    /// in the segment values (callers using other maps should recheck).
    pub fn map_segments(&self, f: impl Fn(&UPoly) -> UPoly) -> PiecewisePoly {
        PiecewisePoly {
            symbols: self.symbols.clone(),
            breaks: self.breaks.clone(),
            segments: self.segments.iter().map(f).collect(),
            continuous: self.continuous,
        }
    }

    /// `F(t) = \int_0^t p`, continuous with `F(0) = 0`.
    pub fn antiderivative(&self) -> PiecewisePoly {
        let mut offset = ParamPoly::zero(&self.symbols);
        let mut segments = Vec::with_capacity(self.segments.len());
        for (i, seg) in self.segments.iter().enumerate() {
            let g = seg.antiderivative();
            let shift = &offset - &g.eval(&self.breaks[i]);
            offset = &g.eval(&self.breaks[i + 1]) + &shift;
            segments.push(g.add(&UPoly::constant(shift)));
        }
        PiecewisePoly {
            symbols: self.symbols.clone(),
            breaks: self.breaks.clone(),
            segments,
            continuous: true,
        }
    }

    /// `\int_0^1 p`.
    pub fn integrate01(&self) -> ParamPoly {
        let mut total = ParamPoly::zero(&self.symbols);
        for (i, seg) in self.segments.iter().enumerate() {
            let g = seg.antiderivative();
            total = &(&total + &g.eval(&self.breaks[i + 1])) - &g.eval(&self.breaks[i]);
        }
        total
    }

    pub fn derivative(&self) -> PiecewisePoly {
        let mut d = self.map_segments(UPoly::derivative);
        d.continuous = d.is_continuous();
        d
    }

    fn segment_index(&self, t: &Rational) -> Result<usize, PiecewiseError> {
        if t < &Rational::zero() || t > &Rational::one() {
            return Err(PiecewiseError::OutOfRange(t.clone()));
        }
        // right-continuous choice except at t = 1
        let idx = self.breaks[1..].partition_point(|b| b <= t);
        Ok(idx.min(self.segments.len() - 1))
    }

    /// Symbolic value at rational `t`.
    pub fn value_at(&self, t: &Rational) -> Result<ParamPoly, PiecewiseError> {
        let i = self.segment_index(t)?;
        let v = self.segments[i].eval(t);
        if self.continuous && i > 0 && &self.breaks[i] == t {
            debug_assert_eq!(self.segments[i - 1].eval(t), v, "continuity violated at {t}");
        }
        Ok(v)
    }

    /// Exact value at `t` under a full parameter assignment.
    pub fn eval(&self, t: &Rational, assignment: &Assignment) -> Result<Rational, PiecewiseError> {
        Ok(self.value_at(t)?.eval(assignment)?)
    }

    pub fn substitute(&self, assignment: &Assignment, partial: bool) -> Result<PiecewisePoly, PiecewiseError> {
        let segments = self
            .segments
            .iter()
            .map(|s| {
                s.coeffs()
                    .iter()
                    .map(|c| c.substitute(assignment, partial))
                    .collect::<Result<Vec<_>, _>>()
                    .map(|cs| UPoly::from_coeffs(&self.symbols, cs))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PiecewisePoly { segments, ..self.clone() })
    }

    /// Re-expresses the coefficients over a superset of symbols.
    pub fn embed(&self, target: &Symbols) -> Result<PiecewisePoly, PiecewiseError> {
        let segments = self
            .segments
            .iter()
            .map(|s| {
                s.coeffs()
                    .iter()
                    .map(|c| c.embed(target))
                    .collect::<Result<Vec<_>, _>>()
                    .map(|cs| UPoly::from_coeffs(target, cs))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PiecewisePoly {
            symbols: target.clone(),
            breaks: self.breaks.clone(),
            segments,
            continuous: self.continuous,
        })
    }

    /// `t -> p(1 - t)`.
    pub fn reflect(&self) -> PiecewisePoly {
        let one = Rational::one();
        let breaks = self.breaks.iter().rev().map(|b| &one - b).collect();
        let segments = self
            .segments
            .iter()
            .rev()
            .map(|s| s.compose_affine(&one, &-one.clone()))
            .collect();
        PiecewisePoly { symbols: self.symbols.clone(), breaks, segments, continuous: self.continuous }
    }

    /// Merges adjacent segments carrying identical polynomials.
    pub fn simplify(&self) -> PiecewisePoly {
        let mut breaks = vec![self.breaks[0].clone()];
        let mut segments: Vec<UPoly> = Vec::new();
        for (i, s) in self.segments.iter().enumerate() {
            if segments.last() == Some(s) {
                *breaks.last_mut().unwrap() = self.breaks[i + 1].clone();
            } else {
                segments.push(s.clone());
                breaks.push(self.breaks[i + 1].clone());
            }
        }
        PiecewisePoly { symbols: self.symbols.clone(), breaks, segments, continuous: self.continuous }
    }

    /// Slope and intercept representation when every segment is at most linear.
    pub fn as_piecewise_linear(&self) -> Option<(ParamPoly, Vec<ParamPoly>)> {
        if self.segments.iter().any(|s| s.degree().is_some_and(|d| d > 1)) {
            return None;
        }
        Some((self.segments[0].coeff(0), self.segments.iter().map(|s| s.coeff(1)).collect()))
    }
}

fn validate_breaks(breaks: &[Rational]) -> Result<(), PiecewiseError> {
    if breaks.len() < 2 {
        return Err(PiecewiseError::BadBreakpoints("need at least [0, 1]".into()));
    }
    if !breaks[0].is_zero() || !breaks.last().unwrap().is_one() {
        return Err(PiecewiseError::BadBreakpoints("endpoints must be exactly 0 and 1".into()));
    }
    if let Some(w) = breaks.windows(2).find(|w| w[0] >= w[1]) {
        return Err(PiecewiseError::BadBreakpoints(format!(
            "not strictly increasing at {} >= {}",
            w[0], w[1]
        )));
    }
    Ok(())
}

impl fmt::Display for PiecewisePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.segments.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "[{}, {}]: {}", self.breaks[i], self.breaks[i + 1], s)?;
        }
        Ok(())
    }
}
