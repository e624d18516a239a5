use std::fmt;

use num_traits::One;

use crate::exact::{rat_int, ParamPoly, Rational, Symbols};

/// Univariate polynomial in `t` whose coefficients are parameter polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly {
    symbols: Symbols,
    /// `coeffs[i]` multiplies `t^i`; no trailing zeros.
    coeffs: Vec<ParamPoly>,
}

impl UPoly {
    pub fn zero(symbols: &Symbols) -> Self {
        UPoly { symbols: symbols.clone(), coeffs: Vec::new() }
    }

    pub fn constant(c: ParamPoly) -> Self {
        let symbols = c.symbols().clone();
        Self::from_coeffs(&symbols, vec![c])
    }

    pub fn from_coeffs(symbols: &Symbols, coeffs: Vec<ParamPoly>) -> Self {
        let mut p = UPoly { symbols: symbols.clone(), coeffs };
        p.trim();
        p
    }

    /// `slope * t + intercept`.
    pub fn linear(intercept: ParamPoly, slope: ParamPoly) -> Self {
        let symbols = intercept.symbols().clone();
        Self::from_coeffs(&symbols, vec![intercept, slope])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(ParamPoly::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn symbols(&self) -> &Symbols {
        &self.symbols
    }

    pub fn coeffs(&self) -> &[ParamPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> ParamPoly {
        self.coeffs.get(i).cloned().unwrap_or_else(|| ParamPoly::zero(&self.symbols))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree in `t`; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        UPoly::from_coeffs(&self.symbols, coeffs)
    }

    pub fn neg(&self) -> UPoly {
        UPoly { symbols: self.symbols.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero(&self.symbols);
        }
        let mut coeffs =
            vec![ParamPoly::zero(&self.symbols); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                // constants are common (B = 2t - 1); avoid the general product
                let prod = match (a.constant_value(), b.constant_value()) {
                    (Some(ca), _) => b.scale(&ca),
                    (_, Some(cb)) => a.scale(&cb),
                    _ => a * b,
                };
                coeffs[i + j] = &coeffs[i + j] + &prod;
            }
        }
        UPoly::from_coeffs(&self.symbols, coeffs)
    }

    pub fn scale(&self, c: &Rational) -> UPoly {
        UPoly::from_coeffs(&self.symbols, self.coeffs.iter().map(|p| p.scale(c)).collect())
    }

    pub fn scale_poly(&self, c: &ParamPoly) -> UPoly {
        UPoly::from_coeffs(&self.symbols, self.coeffs.iter().map(|p| p * c).collect())
    }

    pub fn map_coeffs<F: FnMut(&ParamPoly) -> ParamPoly>(&self, f: F) -> UPoly {
        UPoly::from_coeffs(&self.symbols, self.coeffs.iter().map(f).collect())
    }

    pub fn derivative(&self) -> UPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale(&rat_int(i as i64)))
            .collect();
        UPoly::from_coeffs(&self.symbols, coeffs)
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(ParamPoly::zero(&self.symbols));
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c.scale(&Rational::new(1.into(), ((i + 1) as i64).into())));
        }
        UPoly::from_coeffs(&self.symbols, coeffs)
    }

    /// Value at a rational `t` (Horner).
    pub fn eval(&self, t: &Rational) -> ParamPoly {
        let mut acc = ParamPoly::zero(&self.symbols);
        for c in self.coeffs.iter().rev() {
            acc = &acc.scale(t) + c;
        }
        acc
    }

    /// Value at a symbolic `t`.
    pub fn eval_poly(&self, t: &ParamPoly) -> ParamPoly {
        let mut acc = ParamPoly::zero(&self.symbols);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * t) + c;
        }
        acc
    }

    /// `p(alpha + beta * t)` for rational `alpha`, `beta`.
    pub fn compose_affine(&self, alpha: &Rational, beta: &Rational) -> UPoly {
        let lin = UPoly::from_coeffs(
            &self.symbols,
            vec![
                ParamPoly::constant(&self.symbols, alpha.clone()),
                ParamPoly::constant(&self.symbols, beta.clone()),
            ],
        );
        let mut acc = UPoly::zero(&self.symbols);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&UPoly::constant(c.clone()));
        }
        acc
    }

    pub fn t(symbols: &Symbols) -> UPoly {
        UPoly::from_coeffs(symbols, vec![ParamPoly::zero(symbols), ParamPoly::one(symbols)])
    }

    pub fn is_constant_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn one(symbols: &Symbols) -> UPoly {
        UPoly::constant(ParamPoly::constant(symbols, Rational::one()))
    }

    pub fn rational_coeffs(&self) -> Option<Vec<Rational>> {
        self.coeffs.iter().map(|c| c.constant_value()).collect()
    }

    pub fn leading(&self) -> ParamPoly {
        self.coeffs.last().cloned().unwrap_or_else(|| ParamPoly::zero(&self.symbols))
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*t")?,
                _ => write!(f, "({c})*t^{i}")?,
            }
        }
        Ok(())
    }
}
