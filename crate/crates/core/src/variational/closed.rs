//! Closed forms of `eta_3, eta_4, eta_5` for a two-piece linear `A` whose
//! breakpoint `h` is itself a parameter, with `B = a(2t - 1)`:
//!
//! ```text
//! eta_3 = \int A
//! eta_4 = \int (A Bbar + 1)
//! eta_5 = \int (A Bbar^2 + 2 Bbar),      Bbar(t) = \int_0^t B = a(t^2 - t)
//! ```

use num_traits::{One, Zero};

use super::{EquationSpec, VResult, VariationalError};
use crate::exact::{ParamPoly, Rational, Symbols};
use crate::piecewise::{PiecewisePoly, UPoly};

/// `A = slope_left t + intercept` on `[0, h]`, continuous with slope
/// `slope_right` on `[h, 1]`; `B = scale (2t - 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolicBreakLinear {
    symbols: Symbols,
    pub scale: ParamPoly,
    pub intercept: ParamPoly,
    pub slope_left: ParamPoly,
    pub slope_right: ParamPoly,
    /// A single symbol.
    pub h: ParamPoly,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClosedEtas {
    pub eta3: ParamPoly,
    pub eta4: ParamPoly,
    pub eta5: ParamPoly,
}

impl ClosedEtas {
    pub fn to_vec(&self) -> Vec<ParamPoly> {
        vec![self.eta3.clone(), self.eta4.clone(), self.eta5.clone()]
    }
}

impl SymbolicBreakLinear {
    pub fn new(
        scale: ParamPoly,
        intercept: ParamPoly,
        slope_left: ParamPoly,
        slope_right: ParamPoly,
        h: ParamPoly,
    ) -> VResult<Self> {
        let parts = [&scale, &intercept, &slope_left, &slope_right, &h];
        let symbols = parts.iter().fold(Symbols::empty(), |s, p| s.union(p.symbols()));
        let h_ok = h.len() == 1 && h.univariate_symbol().is_some() && h.total_degree() == 1 && h.terms().values().all(|c| c.is_one());
        if !h_ok {
            return Err(VariationalError::NotConforming(format!("breakpoint `{h}` must be a bare symbol")));
        }
        Ok(SymbolicBreakLinear {
            scale: scale.embed(&symbols)?,
            intercept: intercept.embed(&symbols)?,
            slope_left: slope_left.embed(&symbols)?,
            slope_right: slope_right.embed(&symbols)?,
            h: h.embed(&symbols)?,
            symbols,
        })
    }

    /// `B = a(2t - 1)`, `A = bt + c` on `[0, h]`, `dt + bh + c - dh` on `[h, 1]`.
    pub fn standard() -> Self {
        let s = Symbols::new(["a", "b", "c", "d", "h"]);
        let v = |n: &str| ParamPoly::var(&s, n).expect("known symbol");
        Self::new(v("a"), v("c"), v("b"), v("d"), v("h")).expect("well formed")
    }

    pub fn symbols(&self) -> &Symbols {
        &self.symbols
    }

    fn h_name(&self) -> &str {
        &self.symbols.names()[self.h.univariate_symbol().expect("checked in new")]
    }

    /// The quartic equation with the breakpoint fixed at `h` (in `[0, 1]`).
    pub fn at(&self, h: &Rational) -> VResult<EquationSpec> {
        if h < &Rational::zero() || h > &Rational::one() {
            return Err(VariationalError::NotConforming(format!("breakpoint {h} outside [0, 1]")));
        }
        let point = [(self.h_name().to_string(), h.clone())].into_iter().collect();
        let sub = |p: &ParamPoly| p.substitute(&point, true);
        let (c, ml, mr, a) = (sub(&self.intercept)?, sub(&self.slope_left)?, sub(&self.slope_right)?, sub(&self.scale)?);
        let a_pw = if h.is_zero() {
            PiecewisePoly::pl_from_slopes(c, vec![mr], vec![])?
        } else if h.is_one() {
            PiecewisePoly::pl_from_slopes(c, vec![ml], vec![])?
        } else {
            PiecewisePoly::pl_from_slopes(c, vec![ml, mr], vec![h.clone()])?
        };
        let b_pw = PiecewisePoly::single(UPoly::linear(-&a, a.scale(&Rational::from_integer(2.into()))));
        EquationSpec::quartic(a_pw, b_pw)
    }
}

/// Exact `eta_3, eta_4, eta_5` as polynomials in the parameters and `h`.
pub fn eta345_closed(spec: &SymbolicBreakLinear) -> ClosedEtas {
    let s = &spec.symbols;
    let h = &spec.h;
    let left = UPoly::linear(spec.intercept.clone(), spec.slope_left.clone());
    // continuity at h
    let right_c = &spec.intercept + &(&(&spec.slope_left - &spec.slope_right) * h);
    let right = UPoly::linear(right_c, spec.slope_right.clone());
    let a = &spec.scale;
    let bbar = UPoly::from_coeffs(s, vec![ParamPoly::zero(s), -a, a.clone()]);
    let bbar2 = bbar.mul(&bbar);
    let one = UPoly::one(s);
    let zero = ParamPoly::zero(s);
    let one_r = ParamPoly::one(s);

    let integrate = |f: &dyn Fn(&UPoly) -> UPoly| -> ParamPoly {
        let fl = f(&left).antiderivative();
        let fr = f(&right).antiderivative();
        let l = &fl.eval_poly(h) - &fl.eval_poly(&zero);
        let r = &fr.eval_poly(&one_r) - &fr.eval_poly(h);
        &l + &r
    };
    let eta3 = integrate(&|seg| seg.clone());
    let eta4 = integrate(&|seg| seg.mul(&bbar).add(&one));
    let two_bbar = bbar.scale(&Rational::from_integer(2.into()));
    let eta5 = integrate(&|seg| seg.mul(&bbar2).add(&two_bbar));
    ClosedEtas { eta3, eta4, eta5 }
}
