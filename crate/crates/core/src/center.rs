//! Sufficient conditions for a center at `z = 0`.
//!
//! A `None` certificate never claims the origin is not a center.

use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::exact::{q, ParamPoly, Rational};
use crate::piecewise::{PiecewiseError, PiecewisePoly};
use crate::variational::EquationSpec;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CenterError {
    #[error("breakpoints {0} do not form a uniform grid i/n")]
    NonUniform(String),
    #[error("`{0}` is not piecewise linear")]
    NotLinear(String),
    #[error(transparent)]
    Piecewise(#[from] PiecewiseError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CenterKind {
    Symmetry,
    PlSymmetry,
    Proportional,
    None,
}

impl fmt::Display for CenterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CenterKind::Symmetry => "symmetry",
            CenterKind::PlSymmetry => "pl-symmetry",
            CenterKind::Proportional => "proportional",
            CenterKind::None => "none",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CenterCertificate {
    pub kind: CenterKind,
    /// `B = lambda A` for proportional certificates.
    pub lambda: Option<Rational>,
    /// `s(t) = \int_0^t A` for proportional certificates.
    pub s: Option<PiecewisePoly>,
}

impl CenterCertificate {
    pub fn none() -> Self {
        CenterCertificate { kind: CenterKind::None, lambda: None, s: None }
    }

    fn of(kind: CenterKind) -> Self {
        CenterCertificate { kind, lambda: None, s: None }
    }

    pub fn is_center(&self) -> bool {
        self.kind != CenterKind::None
    }
}

impl fmt::Display for CenterCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        if let Some(l) = &self.lambda {
            write!(f, " lambda={l}")?;
        }
        if let Some(s) = &self.s {
            write!(f, " s(t)={s}")?;
        }
        Ok(())
    }
}

/// `f(1/2 + t) = -f(1/2 - t)` identically in `t` and the parameters.
pub fn is_odd_about_half(f: &PiecewisePoly) -> bool {
    f.add(&f.reflect()).simplify().is_zero()
}

/// Odd reflection about `t = 1/2` of both coefficients.
///
/// Only meaningful for the cubic family; a nonzero `z^4` coefficient breaks
/// the symmetry, so the check is false whenever the lead is not zero.
pub fn symmetry_check(eq: &EquationSpec) -> bool {
    eq.lead().is_zero() && is_odd_about_half(eq.a()) && is_odd_about_half(eq.b())
}

fn uniform_grid(breaks: &[Rational]) -> Result<usize, CenterError> {
    let n = breaks.len() - 1;
    let uniform = breaks
        .iter()
        .enumerate()
        .all(|(i, b)| b == &q(i as i64, n as i64));
    if uniform {
        Ok(n)
    } else {
        let shown: Vec<String> = breaks.iter().map(|b| b.to_string()).collect();
        Err(CenterError::NonUniform(shown.join(", ")))
    }
}

fn palindromic(slopes: &[ParamPoly]) -> bool {
    let n = slopes.len();
    // segment k mirrors segment n + 1 - k
    (0..n / 2).all(|k| slopes[k] == slopes[n - 1 - k])
}

/// Piecewise-linear center test: on a common uniform grid `i/n`, both
/// functions vanish at `1/2` and have palindromic slope sequences.
pub fn pl_center_check(a: &PiecewisePoly, b: &PiecewisePoly) -> Result<bool, CenterError> {
    let mut grid: Vec<Rational> = a.breaks().iter().chain(b.breaks()).cloned().collect();
    grid.sort();
    grid.dedup();
    uniform_grid(&grid)?;
    let half = q(1, 2);
    for f in [a, b] {
        let (_, slopes) = f
            .refine(&grid)
            .as_piecewise_linear()
            .ok_or_else(|| CenterError::NotLinear(f.to_string()))?;
        if !palindromic(&slopes) || !f.value_at(&half)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Piecewise-linear function on the uniform grid with the given slopes,
/// shifted so that it vanishes at `t = 1/2`.
pub fn pl_through_half(slopes: Vec<ParamPoly>) -> Result<PiecewisePoly, CenterError> {
    let n = slopes.len();
    let symbols = slopes[0].symbols().clone();
    let interior = (1..n).map(|i| q(i as i64, n as i64)).collect();
    let f = PiecewisePoly::pl_from_slopes(ParamPoly::zero(&symbols), slopes, interior)?;
    let shift = f.value_at(&q(1, 2))?;
    Ok(f.sub(&PiecewisePoly::constant(shift)))
}

/// `B = lambda A` with a parameter-free `lambda` and `\int_0^1 A = 0`.
///
/// Then `z' = A(t)(z^3 + lambda z^2)` separates and every orbit near the
/// origin closes.
pub fn proportional_check(eq: &EquationSpec) -> CenterCertificate {
    if !eq.lead().is_zero() {
        return CenterCertificate::none();
    }
    let (a, b) = (eq.a(), eq.b());
    let lambda = if a.is_zero() {
        if !b.is_zero() {
            return CenterCertificate::none();
        }
        Rational::zero()
    } else {
        match ratio(a, b) {
            Some(l) => l,
            None => return CenterCertificate::none(),
        }
    };
    if !b.sub(&a.scale(&lambda)).simplify().is_zero() || !a.integrate01().is_zero() {
        return CenterCertificate::none();
    }
    CenterCertificate { kind: CenterKind::Proportional, lambda: Some(lambda), s: Some(a.antiderivative()) }
}

/// Candidate `lambda` from the first nonzero term of `a`.
fn ratio(a: &PiecewisePoly, b: &PiecewisePoly) -> Option<Rational> {
    let mut grid: Vec<Rational> = a.breaks().iter().chain(b.breaks()).cloned().collect();
    grid.sort();
    grid.dedup();
    let (ra, rb) = (a.refine(&grid), b.refine(&grid));
    for (sa, sb) in ra.segments().iter().zip(rb.segments()) {
        for (i, ca) in sa.coeffs().iter().enumerate() {
            if let Some((m, alpha)) = ca.terms().iter().next() {
                let beta = sb.coeff(i).terms().get(m).cloned().unwrap_or_else(Rational::zero);
                return Some(beta / alpha);
            }
        }
    }
    None
}

/// First certificate found among the three checks.
pub fn certify(eq: &EquationSpec) -> CenterCertificate {
    if symmetry_check(eq) {
        let pl = matches!(pl_center_check(eq.a(), eq.b()), Ok(true));
        return CenterCertificate::of(if pl { CenterKind::PlSymmetry } else { CenterKind::Symmetry });
    }
    proportional_check(eq)
}
