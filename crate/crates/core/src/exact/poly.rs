use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::monomial::{Monomial, MonomialOrdering};
use super::rational::{rat_int, rat_to_f64, Rational};
use super::ExactError;

/// Assignment of rational values to parameter symbols.
pub type Assignment = BTreeMap<String, Rational>;

/// Ordered, deduplicated list of parameter symbols shared by every polynomial
/// in one computation.
#[derive(Clone, Debug)]
pub struct Symbols(Arc<[String]>);

impl Symbols {
    /// Sorts alphabetically and removes duplicates.
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut v: Vec<String> = names.into_iter().map(Into::into).collect();
        v.sort();
        v.dedup();
        Symbols(v.into())
    }

    pub fn empty() -> Self {
        Symbols::new(Vec::<String>::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.binary_search_by(|s| s.as_str().cmp(name)).ok()
    }

    pub fn union(&self, other: &Symbols) -> Symbols {
        if self == other {
            return self.clone();
        }
        Symbols::new(self.0.iter().chain(other.0.iter()).cloned())
    }

    pub fn contains_all(&self, other: &Symbols) -> bool {
        other.0.iter().all(|s| self.index_of(s).is_some())
    }
}

impl PartialEq for Symbols {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Symbols {}

impl fmt::Display for Symbols {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0.join(", "))
    }
}

/// Multivariate polynomial with rational coefficients over a [`Symbols`] list.
///
/// Zero coefficients are never stored; the zero polynomial has no terms.
#[derive(Clone, Debug)]
pub struct ParamPoly {
    symbols: Symbols,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for ParamPoly {
    fn eq(&self, other: &Self) -> bool {
        self.symbols == other.symbols && self.terms == other.terms
    }
}

impl Eq for ParamPoly {}

impl ParamPoly {
    pub fn zero(symbols: &Symbols) -> Self {
        ParamPoly { symbols: symbols.clone(), terms: BTreeMap::new() }
    }

    pub fn one(symbols: &Symbols) -> Self {
        Self::constant(symbols, Rational::one())
    }

    pub fn constant(symbols: &Symbols, c: Rational) -> Self {
        let mut p = Self::zero(symbols);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(symbols.len()), c);
        }
        p
    }

    pub fn integer(symbols: &Symbols, n: i64) -> Self {
        Self::constant(symbols, rat_int(n))
    }

    pub fn var(symbols: &Symbols, name: &str) -> Result<Self, ExactError> {
        let i = symbols
            .index_of(name)
            .ok_or_else(|| ExactError::UnknownSymbol(name.to_string()))?;
        Ok(Self::monomial(symbols, Monomial::var(symbols.len(), i, 1), Rational::one()))
    }

    pub fn monomial(symbols: &Symbols, m: Monomial, c: Rational) -> Self {
        debug_assert_eq!(m.nvars(), symbols.len());
        let mut p = Self::zero(symbols);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Builds a polynomial from terms, merging duplicates and dropping zeros.
    pub fn from_terms<I>(symbols: &Symbols, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Self::zero(symbols);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn symbols(&self) -> &Symbols {
        &self.symbols
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, Rational> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    /// Value of a constant polynomial (including zero); `None` if any symbol occurs.
    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Indices of symbols that actually occur.
    pub fn occurring(&self) -> Vec<usize> {
        (0..self.symbols.len())
            .filter(|&i| self.terms.keys().any(|m| m.exponents()[i] > 0))
            .collect()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check(&self, other: &ParamPoly) -> Result<(), ExactError> {
        if self.symbols != other.symbols {
            return Err(ExactError::SymbolMismatch {
                left: self.symbols.to_string(),
                right: other.symbols.to_string(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &ParamPoly) -> Result<ParamPoly, ExactError> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &ParamPoly) -> Result<ParamPoly, ExactError> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &ParamPoly) -> Result<ParamPoly, ExactError> {
        self.check(other)?;
        let mut out = ParamPoly::zero(&self.symbols);
        if self.is_zero() || other.is_zero() {
            return Ok(out);
        }
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    /// `self += c * other` without intermediate allocation of the product.
    pub fn add_scaled(&mut self, other: &ParamPoly, c: &Rational) {
        assert_eq!(self.symbols, other.symbols, "symbol lists differ");
        if c.is_zero() {
            return;
        }
        for (m, d) in &other.terms {
            self.add_term(m.clone(), d * c);
        }
    }

    pub fn scale(&self, c: &Rational) -> ParamPoly {
        if c.is_zero() {
            return ParamPoly::zero(&self.symbols);
        }
        ParamPoly {
            symbols: self.symbols.clone(),
            terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> ParamPoly {
        let mut acc = ParamPoly::one(&self.symbols);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Re-expresses the polynomial over a superset symbol list.
    pub fn embed(&self, target: &Symbols) -> Result<ParamPoly, ExactError> {
        if &self.symbols == target {
            return Ok(self.clone());
        }
        let map: Vec<usize> = self
            .symbols
            .names()
            .iter()
            .map(|s| target.index_of(s).ok_or_else(|| ExactError::UnknownSymbol(s.clone())))
            .collect::<Result<_, _>>()?;
        let mut out = ParamPoly::zero(target);
        for (m, c) in &self.terms {
            let mut nm = Monomial::one(target.len());
            for (i, &e) in m.exponents().iter().enumerate() {
                nm.exponents_mut()[map[i]] = e;
            }
            out.add_term(nm, c.clone());
        }
        Ok(out)
    }

    /// Substitutes rational values. With `partial == false` every occurring
    /// symbol must be assigned and the result is a constant.
    pub fn substitute(&self, assignment: &Assignment, partial: bool) -> Result<ParamPoly, ExactError> {
        let mut values: Vec<Option<&Rational>> = vec![None; self.symbols.len()];
        for (name, v) in assignment {
            let i = self
                .symbols
                .index_of(name)
                .ok_or_else(|| ExactError::UnknownSymbol(name.clone()))?;
            values[i] = Some(v);
        }
        if !partial {
            if let Some(i) = self.occurring().into_iter().find(|&i| values[i].is_none()) {
                return Err(ExactError::Unassigned(self.symbols.names()[i].clone()));
            }
        }
        let mut out = ParamPoly::zero(&self.symbols);
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut nm = m.clone();
            for (i, v) in values.iter().enumerate() {
                if let Some(v) = v {
                    let e = m.exponents()[i];
                    if e > 0 {
                        coeff *= num_traits::pow::pow((*v).clone(), e as usize);
                        nm.exponents_mut()[i] = 0;
                    }
                }
            }
            out.add_term(nm, coeff);
        }
        Ok(out)
    }

    /// Full evaluation at a rational point.
    pub fn eval(&self, assignment: &Assignment) -> Result<Rational, ExactError> {
        Ok(self
            .substitute(assignment, false)?
            .constant_value()
            .expect("full substitution yields a constant"))
    }

    /// Floating-point evaluation; unassigned occurring symbols are an error.
    pub fn eval_f64(&self, point: &HashMap<String, f64>) -> Result<f64, ExactError> {
        let mut vals = vec![f64::NAN; self.symbols.len()];
        for i in self.occurring() {
            let name = &self.symbols.names()[i];
            vals[i] = *point.get(name).ok_or_else(|| ExactError::Unassigned(name.clone()))?;
        }
        Ok(self
            .terms
            .iter()
            .map(|(m, c)| {
                m.exponents()
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .fold(rat_to_f64(c), |acc, (i, &e)| acc * vals[i].powi(e as i32))
            })
            .sum())
    }

    /// Replaces symbol `index` by the polynomial `value`.
    pub fn compose(&self, index: usize, value: &ParamPoly) -> ParamPoly {
        let mut out = ParamPoly::zero(&self.symbols);
        let mut powers: Vec<ParamPoly> = vec![ParamPoly::one(&self.symbols)];
        for (m, c) in &self.terms {
            let e = m.exponents()[index] as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            let mut nm = m.clone();
            nm.exponents_mut()[index] = 0;
            let rest = ParamPoly::monomial(&self.symbols, nm, c.clone());
            out = &out + &(&rest * &powers[e]);
        }
        out
    }

    /// Terms sorted descending under `ordering`.
    pub fn sorted_terms(&self, ordering: &MonomialOrdering) -> Vec<(&Monomial, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| ordering.cmp(b.0, a.0));
        v
    }

    pub fn leading_term(&self, ordering: &MonomialOrdering) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().max_by(|a, b| ordering.cmp(a.0, b.0))
    }

    /// Scales to leading coefficient 1 under `ordering`.
    pub fn monic(&self, ordering: &MonomialOrdering) -> ParamPoly {
        match self.leading_term(ordering) {
            Some((_, c)) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    /// Integer-primitive form: denominators cleared, content removed and the
    /// leading coefficient (under `ordering`) positive.
    pub fn primitive(&self, ordering: &MonomialOrdering) -> ParamPoly {
        if self.is_zero() {
            return self.clone();
        }
        let lcm_den = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let nums: Vec<BigInt> = self.terms.values().map(|c| (c * &lcm_den).to_integer()).collect();
        let g = nums.iter().fold(BigInt::zero(), |acc, n| acc.gcd(n));
        let mut factor = Rational::new(lcm_den, g);
        if self.leading_term(ordering).unwrap().1.is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// Exact quotient `self / divisor` if the division leaves no remainder.
    pub fn div_exact(&self, divisor: &ParamPoly) -> Result<Option<ParamPoly>, ExactError> {
        self.check(divisor)?;
        if divisor.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let ord = MonomialOrdering::grevlex();
        let (lm, lc) = divisor.leading_term(&ord).map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let mut rem = self.clone();
        let mut quot = ParamPoly::zero(&self.symbols);
        while let Some((m, c)) = rem.leading_term(&ord).map(|(m, c)| (m.clone(), c.clone())) {
            if !lm.divides(&m) {
                return Ok(None);
            }
            let t = ParamPoly::monomial(&self.symbols, lm.quotient_of(&m), c / &lc);
            rem = &rem - &(&t * divisor);
            quot = &quot + &t;
        }
        Ok(Some(quot))
    }

    /// The single occurring symbol, if the polynomial is univariate.
    pub fn univariate_symbol(&self) -> Option<usize> {
        match self.occurring().as_slice() {
            [i] => Some(*i),
            _ => None,
        }
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, symbols: &Symbols, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.exponents().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        f.write_str(&symbols.names()[i])?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.sorted_terms(&MonomialOrdering::grevlex()).into_iter().enumerate() {
            let neg = c.is_negative();
            match (idx, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            if m.is_one() {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                write_monomial(f, &self.symbols, m)?;
            }
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&ParamPoly> for &ParamPoly {
            type Output = ParamPoly;
            fn $method(self, rhs: &ParamPoly) -> ParamPoly {
                self.$checked(rhs).expect("symbol lists differ")
            }
        }
        impl $tr<ParamPoly> for ParamPoly {
            type Output = ParamPoly;
            fn $method(self, rhs: ParamPoly) -> ParamPoly {
                (&self).$checked(&rhs).expect("symbol lists differ")
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        ParamPoly {
            symbols: self.symbols.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Neg for ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::q;

    fn syms() -> Symbols {
        Symbols::new(["a", "b", "c", "d", "e", "f", "g"])
    }

    fn v(s: &Symbols, n: &str) -> ParamPoly {
        ParamPoly::var(s, n).unwrap()
    }

    #[test]
    fn add_examples() {
        let s = syms();
        let (a, b) = (v(&s, "a"), v(&s, "b"));
        assert_eq!(&(&a + &b) + &(-&b), a);
        assert_eq!(&ParamPoly::zero(&s) + &a, a);
        let lhs = &(&a + &b) + &v(&s, "c");
        let rhs = &(&v(&s, "f") + &v(&s, "e")) + &v(&s, "d");
        assert_eq!((&lhs + &rhs).to_string(), "a + b + c + d + e + f");
    }

    #[test]
    fn mul_examples() {
        let s = syms();
        let (a, b, c, e, f, g) = (v(&s, "a"), v(&s, "b"), v(&s, "c"), v(&s, "e"), v(&s, "f"), v(&s, "g"));
        let ecfb = &(&e * &c) - &(&f * &b);
        assert_eq!(&ecfb * &ParamPoly::one(&s), ecfb);
        let two_b_3c = &b.scale(&q(2, 1)) + &c.scale(&q(3, 1));
        let gc210 = &(&g * &c) + &ParamPoly::integer(&s, 210);
        let prod = &two_b_3c * &gc210;
        let expected = &(&(&(&b * &g) * &c).scale(&q(2, 1)) + &(&(&g * &c) * &c).scale(&q(3, 1)))
            + &(&b.scale(&q(420, 1)) + &c.scale(&q(630, 1)));
        assert_eq!(prod, expected);
        assert_eq!(
            (&a + &b).pow(2),
            &(&(&a * &a) + &(&a * &b).scale(&q(2, 1))) + &(&b * &b)
        );
    }

    #[test]
    fn mismatch_is_error() {
        let p = ParamPoly::var(&Symbols::new(["a"]), "a").unwrap();
        let r = ParamPoly::var(&Symbols::new(["a", "b"]), "a").unwrap();
        assert!(matches!(p.checked_add(&r), Err(ExactError::SymbolMismatch { .. })));
        assert!(p.checked_mul(&r).is_err());
    }

    #[test]
    fn substitution_examples() {
        let s = syms();
        let (a, b, c, e, f, g) = (v(&s, "a"), v(&s, "b"), v(&s, "c"), v(&s, "e"), v(&s, "f"), v(&s, "g"));
        let ecfb = &(&e * &c) - &(&f * &b);
        let pt: Assignment = [("e", 1), ("c", 2), ("f", 2), ("b", 1)]
            .into_iter()
            .map(|(k, v)| (k.to_string(), q(v, 1)))
            .collect();
        assert_eq!(ecfb.eval(&pt).unwrap(), q(0, 1));
        let abc = &(&a + &b) + &c;
        let pt: Assignment = ["a", "b", "c"].iter().map(|k| (k.to_string(), q(1, 1))).collect();
        assert_eq!(abc.eval(&pt).unwrap(), q(3, 1));
        let eta5 = (&(&(&g * &c) + &ParamPoly::integer(&s, 210))
            * &(&b.scale(&q(2, 1)) + &c.scale(&q(3, 1))))
            .scale(&q(1, 1764));
        let pt: Assignment = [("g", 1), ("c", -210), ("b", 0)]
            .into_iter()
            .map(|(k, v)| (k.to_string(), q(v, 1)))
            .collect();
        assert_eq!(eta5.eval(&pt).unwrap(), q(0, 1));
        // missing symbol with partial=false
        assert!(matches!(ecfb.substitute(&pt, false), Err(ExactError::Unassigned(_))));
        let partial = ecfb.substitute(&pt, true).unwrap();
        assert_eq!(partial, e.scale(&q(-210, 1)));
        let bad: Assignment = [("zz".to_string(), q(1, 1))].into_iter().collect();
        assert!(matches!(ecfb.substitute(&bad, true), Err(ExactError::UnknownSymbol(_))));
    }

    #[test]
    fn primitive_and_monic() {
        let s = syms();
        let p = &v(&s, "a").scale(&q(-3, 4)) + &ParamPoly::constant(&s, q(3, 2));
        let ord = MonomialOrdering::grevlex();
        assert_eq!(p.primitive(&ord).to_string(), "a - 2");
        assert_eq!(p.monic(&ord).to_string(), "a - 2");
    }

    #[test]
    fn exact_division() {
        let s = syms();
        let (a, b) = (v(&s, "a"), v(&s, "b"));
        let p = &(&a + &b) * &(&a - &b);
        assert_eq!(p.div_exact(&(&a + &b)).unwrap(), Some(&a - &b));
        assert_eq!((&p + &a).div_exact(&(&a + &b)).unwrap(), None);
    }

    #[test]
    fn compose_and_embed() {
        let s = syms();
        let (a, c) = (v(&s, "a"), v(&s, "c"));
        let p = &c * &c;
        let ap1 = &a + &ParamPoly::one(&s);
        assert_eq!(p.compose(2, &ap1), ap1.pow(2));
        let small = ParamPoly::var(&Symbols::new(["c"]), "c").unwrap();
        assert_eq!(small.embed(&s).unwrap(), c);
    }
}
