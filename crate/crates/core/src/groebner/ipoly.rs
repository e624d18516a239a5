//! Integer-coefficient polynomials sorted by a monomial ordering; the
//! working representation inside the Buchberger loop.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact::{Monomial, MonomialOrdering, ParamPoly, Rational, Symbols};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct IPoly {
    /// Descending under the ordering used to build it.
    pub terms: Vec<(Monomial, BigInt)>,
}

impl IPoly {
    /// `(L * p, L)` where `L` is the lcm of the coefficient denominators.
    pub fn from_param(p: &ParamPoly, ord: &MonomialOrdering) -> (IPoly, BigInt) {
        let l = p.terms().values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut terms: Vec<(Monomial, BigInt)> = p
            .terms()
            .iter()
            .map(|(m, c)| (m.clone(), (c * &l).to_integer()))
            .collect();
        terms.sort_by(|a, b| ord.cmp(&b.0, &a.0));
        (IPoly { terms }, l)
    }

    pub fn to_param(&self, symbols: &Symbols, divisor: &Rational) -> ParamPoly {
        ParamPoly::from_terms(
            symbols,
            self.terms.iter().map(|(m, c)| (m.clone(), Rational::from_integer(c.clone()) / divisor)),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    pub fn lc(&self) -> &BigInt {
        &self.terms[0].1
    }

    pub fn is_constant(&self) -> bool {
        !self.terms.is_empty() && self.lm().is_one()
    }

    pub fn content(&self) -> BigInt {
        content_of(self.terms.iter().map(|t| &t.1))
    }

    /// Divides by the content (sign chosen so the leading coefficient is
    /// positive) and returns the divisor used.
    pub fn make_primitive(&mut self) -> BigInt {
        if self.terms.is_empty() {
            return BigInt::one();
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for t in &mut self.terms {
                t.1 = &t.1 / &g;
            }
        }
        g
    }
}

pub(crate) fn content_of<'a>(it: impl Iterator<Item = &'a BigInt>) -> BigInt {
    let mut g = BigInt::zero();
    for c in it {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// `a * x[skip_x..] - b * shift * y[skip_y..]`, merged in descending order.
pub(crate) fn lin_comb(
    a: &BigInt,
    x: &[(Monomial, BigInt)],
    b: &BigInt,
    shift: Option<&Monomial>,
    y: &[(Monomial, BigInt)],
    ord: &MonomialOrdering,
) -> Vec<(Monomial, BigInt)> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    let shifted = |k: usize| match shift {
        Some(s) => y[k].0.mul(s),
        None => y[k].0.clone(),
    };
    let mut ym = if y.is_empty() { None } else { Some(shifted(0)) };
    let a_one = a.is_one();
    loop {
        match (x.get(i), ym.as_ref()) {
            (None, None) => break,
            (Some((mx, cx)), None) => {
                out.push((mx.clone(), if a_one { cx.clone() } else { a * cx }));
                i += 1;
            }
            (None, Some(my)) => {
                out.push((my.clone(), -(b * &y[j].1)));
                j += 1;
                ym = (j < y.len()).then(|| shifted(j));
            }
            (Some((mx, cx)), Some(my)) => match ord.cmp(mx, my) {
                Ordering::Greater => {
                    out.push((mx.clone(), if a_one { cx.clone() } else { a * cx }));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((my.clone(), -(b * &y[j].1)));
                    j += 1;
                    ym = (j < y.len()).then(|| shifted(j));
                }
                Ordering::Equal => {
                    let c = if a_one { cx.clone() } else { a * cx } - b * &y[j].1;
                    if !c.is_zero() {
                        out.push((mx.clone(), c));
                    }
                    i += 1;
                    j += 1;
                    ym = (j < y.len()).then(|| shifted(j));
                }
            },
        }
    }
    out
}

/// Reducer set: leading monomials with support masks for a quick
/// divisibility prefilter.
pub(crate) struct Reducers<'a> {
    pub polys: Vec<&'a IPoly>,
    masks: Vec<u64>,
}

impl<'a> Reducers<'a> {
    pub fn new(polys: Vec<&'a IPoly>) -> Self {
        let masks = polys.iter().map(|p| p.lm().support_mask()).collect();
        Reducers { polys, masks }
    }

    pub fn find(&self, m: &Monomial) -> Option<&'a IPoly> {
        let mm = m.support_mask();
        self.polys
            .iter()
            .zip(&self.masks)
            .find(|(p, &mask)| mask & !mm == 0 && p.lm().divides(m))
            .map(|(p, _)| *p)
    }
}

/// Result of a fraction-free reduction: `rem == (num/den) * p` modulo the
/// ideal of the reducers, with `rem` fully reduced.
pub(crate) struct Reduced {
    pub rem: IPoly,
    pub num: BigInt,
    pub den: BigInt,
}

/// Full (head and tail) fraction-free reduction of `p` by `reducers`.
pub(crate) fn reduce_full(p: IPoly, reducers: &Reducers<'_>, ord: &MonomialOrdering, track: bool) -> Reduced {
    let mut rem: Vec<(Monomial, BigInt)> = Vec::new();
    let mut cur = p.terms;
    let mut start = 0;
    let (mut num, mut den) = (BigInt::one(), BigInt::one());
    let mut steps = 0u32;
    while start < cur.len() {
        let (m, c) = &cur[start];
        let Some(g) = reducers.find(m) else {
            rem.push(cur[start].clone());
            start += 1;
            continue;
        };
        let shift = g.lm().quotient_of(m);
        let gc = c.gcd(g.lc());
        let mut a = g.lc() / &gc;
        let mut b = c / &gc;
        if a.is_negative() {
            a = -a;
            b = -b;
        }
        let next = lin_comb(&a, &cur[start + 1..], &b, Some(&shift), &g.terms[1..], ord);
        if !a.is_one() {
            for t in &mut rem {
                t.1 *= &a;
            }
            if track {
                num *= &a;
            }
        }
        cur = next;
        start = 0;
        steps += 1;
        if steps.is_multiple_of(8) {
            let g = content_of(rem.iter().chain(cur.iter()).map(|t| &t.1));
            if !g.is_zero() && !g.is_one() {
                for t in rem.iter_mut().chain(cur.iter_mut()) {
                    t.1 = &t.1 / &g;
                }
                if track {
                    den *= &g;
                }
            }
        }
    }
    let mut rem = IPoly { terms: rem };
    let g = rem.make_primitive();
    if track {
        den *= g;
    }
    Reduced { rem, num, den }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_poly_in;

    #[test]
    fn lin_comb_cancels_and_merges() {
        let s = Symbols::new(["x", "y"]);
        let ord = MonomialOrdering::lex();
        let (p, _) = IPoly::from_param(&parse_poly_in("x^2 + 3*x*y + 1", &s).unwrap(), &ord);
        let (q, _) = IPoly::from_param(&parse_poly_in("x + y", &s).unwrap(), &ord);
        // p - x * q = 2xy + 1
        let shift = Monomial::from_exponents(&[1, 0]);
        let r = lin_comb(&BigInt::one(), &p.terms[1..], &BigInt::one(), Some(&shift), &q.terms[1..], &ord);
        let r = IPoly { terms: r }.to_param(&s, &Rational::one());
        assert_eq!(r, parse_poly_in("2*x*y + 1", &s).unwrap());
    }

    #[test]
    fn reduction_tracks_the_multiplier() {
        let s = Symbols::new(["x", "y"]);
        let ord = MonomialOrdering::lex();
        let (g, _) = IPoly::from_param(&parse_poly_in("2*x - 3", &s).unwrap(), &ord);
        let (p, _) = IPoly::from_param(&parse_poly_in("x^2 + y", &s).unwrap(), &ord);
        let red = Reducers::new(vec![&g]);
        let out = reduce_full(p, &red, &ord, true);
        let nf = out.rem.to_param(&s, &Rational::new(out.num, out.den));
        assert_eq!(nf, parse_poly_in("y + 9/4", &s).unwrap());
    }
}
