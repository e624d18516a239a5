//! Exact Gröbner bases over the rationals.
//!
//! Internally polynomials carry integer coefficients and are reduced
//! fraction-free; public results are monic `ParamPoly`s.

mod ipoly;

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::exact::{ExactError, Monomial, MonomialOrdering, ParamPoly, Rational, Symbols};
use ipoly::{lin_comb, reduce_full, IPoly, Reducers};

pub use crate::exact::OrderKind;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GroebnerError {
    #[error("symbol lists differ: {left} vs {right}")]
    SymbolMismatch { left: String, right: String },
    #[error("time budget exceeded after {0:.1?}")]
    BudgetExceeded(Duration),
    #[error("not a univariate quadratic: {0}")]
    NotQuadratic(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Wall-clock limit for long computations.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    start: Instant,
    limit: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget { start: Instant::now(), limit: None }
    }

    pub fn new(limit: Option<Duration>) -> Self {
        Budget { start: Instant::now(), limit }
    }

    pub fn seconds(s: f64) -> Self {
        Self::new(Some(Duration::from_secs_f64(s)))
    }

    pub fn elapsed(&self) -> Duration {
        self.start.elapsed()
    }

    pub fn check(&self) -> Result<(), GroebnerError> {
        match self.limit {
            Some(l) if self.start.elapsed() > l => Err(GroebnerError::BudgetExceeded(self.start.elapsed())),
            _ => Ok(()),
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self::unlimited()
    }
}

#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    symbols: Symbols,
    ordering: MonomialOrdering,
    /// Monic, sorted by increasing leading monomial.
    generators: Vec<ParamPoly>,
    /// Integer-primitive copies used for reduction, same order.
    work: Vec<IPoly>,
    reduced: bool,
}

impl GroebnerBasis {
    /// Basis of the zero ideal.
    pub fn zero_ideal(symbols: &Symbols, ordering: &MonomialOrdering) -> Self {
        GroebnerBasis {
            symbols: symbols.clone(),
            ordering: ordering.clone(),
            generators: Vec::new(),
            work: Vec::new(),
            reduced: true,
        }
    }

    pub fn unit(symbols: &Symbols, ordering: &MonomialOrdering) -> Self {
        Self::from_work(symbols, ordering, vec![IPoly { terms: vec![(Monomial::one(symbols.len()), BigInt::one())] }])
    }

    fn from_work(symbols: &Symbols, ordering: &MonomialOrdering, mut work: Vec<IPoly>) -> Self {
        work.sort_by(|a, b| ordering.cmp(a.lm(), b.lm()));
        let generators = work
            .iter()
            .map(|p| p.to_param(symbols, &Rational::from_integer(p.lc().clone())))
            .collect();
        GroebnerBasis { symbols: symbols.clone(), ordering: ordering.clone(), generators, work, reduced: true }
    }

    pub fn symbols(&self) -> &Symbols {
        &self.symbols
    }

    pub fn ordering(&self) -> &MonomialOrdering {
        &self.ordering
    }

    pub fn generators(&self) -> &[ParamPoly] {
        &self.generators
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Generators scaled to integer coefficients with unit content and a
    /// positive leading coefficient.
    pub fn primitive_generators(&self) -> Vec<ParamPoly> {
        self.work.iter().map(|p| p.to_param(&self.symbols, &Rational::one())).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.work.iter().any(IPoly::is_constant)
    }

    /// Normal form of `p` modulo this basis.
    pub fn reduce(&self, p: &ParamPoly) -> ParamPoly {
        if self.is_trivial() {
            return ParamPoly::zero(p.symbols());
        }
        reduce_with(p, &self.work, &self.ordering)
    }

    pub fn contains(&self, p: &ParamPoly) -> bool {
        self.reduce(p).is_zero()
    }

    /// Basis of the ideal generated by this basis and `gens`.
    pub fn extend(&self, gens: &[ParamPoly], budget: &Budget) -> Result<GroebnerBasis, GroebnerError> {
        for g in gens {
            check_symbols(&self.symbols, g.symbols())?;
        }
        let mut eng = Engine::new(&self.ordering, budget);
        for p in &self.work {
            eng.insert_raw(p.clone());
        }
        for g in gens {
            let (ip, _) = IPoly::from_param(g, &self.ordering);
            eng.add(ip)?;
        }
        eng.run()?;
        Ok(GroebnerBasis::from_work(&self.symbols, &self.ordering, eng.finish()))
    }

    /// Leading monomial of every generator; empty for the zero ideal.
    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.work.iter().map(|p| p.lm().clone()).collect()
    }
}

impl std::fmt::Display for GroebnerBasis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("<")?;
        for (i, g) in self.primitive_generators().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str(">")
    }
}

fn check_symbols(a: &Symbols, b: &Symbols) -> Result<(), GroebnerError> {
    if a != b {
        return Err(GroebnerError::SymbolMismatch { left: a.to_string(), right: b.to_string() });
    }
    Ok(())
}

fn reduce_with(p: &ParamPoly, work: &[IPoly], ord: &MonomialOrdering) -> ParamPoly {
    if p.is_zero() {
        return p.clone();
    }
    let (ip, l) = IPoly::from_param(p, ord);
    let reducers = Reducers::new(work.iter().filter(|g| !g.is_zero()).collect());
    let out = reduce_full(ip, &reducers, ord, true);
    // rem = (num/den) * L * p  (mod I)
    let factor = Rational::new(out.num * l, out.den);
    out.rem.to_param(p.symbols(), &factor)
}

/// Normal form of `p` by the generators `basis` (any generating set).
pub fn reduce(p: &ParamPoly, basis: &[ParamPoly], ordering: &MonomialOrdering) -> ParamPoly {
    let work: Vec<IPoly> = basis.iter().filter(|g| !g.is_zero()).map(|g| IPoly::from_param(g, ordering).0).collect();
    reduce_with(p, &work, ordering)
}

/// S-polynomial of `f` and `g`, monic-normalised.
pub fn s_polynomial(f: &ParamPoly, g: &ParamPoly, ordering: &MonomialOrdering) -> ParamPoly {
    let (fi, _) = IPoly::from_param(f, ordering);
    let (gi, _) = IPoly::from_param(g, ordering);
    if fi.is_zero() || gi.is_zero() {
        return ParamPoly::zero(f.symbols());
    }
    let mut s = IPoly { terms: spoly(&fi, &gi, ordering) };
    if s.is_zero() {
        return ParamPoly::zero(f.symbols());
    }
    s.make_primitive();
    s.to_param(f.symbols(), &Rational::from_integer(s.lc().clone()))
}

fn spoly(f: &IPoly, g: &IPoly, ord: &MonomialOrdering) -> Vec<(Monomial, BigInt)> {
    let l = f.lm().lcm(g.lm());
    let uf = f.lm().quotient_of(&l);
    let ug = g.lm().quotient_of(&l);
    let gc = num_integer::Integer::gcd(f.lc(), g.lc());
    let a = g.lc() / &gc;
    let b = f.lc() / &gc;
    // a*uf*f - b*ug*g; shift f by uf first
    let ff: Vec<(Monomial, BigInt)> = f.terms[1..].iter().map(|(m, c)| (m.mul(&uf), c.clone())).collect();
    lin_comb(&a, &ff, &b, Some(&ug), &g.terms[1..], ord)
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
pub fn buchberger(gens: &[ParamPoly], ordering: &MonomialOrdering) -> GroebnerBasis {
    buchberger_with(gens, ordering, &Budget::unlimited()).expect("unlimited budget")
}

pub fn buchberger_with(
    gens: &[ParamPoly],
    ordering: &MonomialOrdering,
    budget: &Budget,
) -> Result<GroebnerBasis, GroebnerError> {
    let Some(first) = gens.first() else {
        return Ok(GroebnerBasis::zero_ideal(&Symbols::empty(), ordering));
    };
    GroebnerBasis::zero_ideal(first.symbols(), ordering).extend(gens, budget)
}

/// Same ideal: each generator of one basis lies in the other.
pub fn ideal_equal(b1: &GroebnerBasis, b2: &GroebnerBasis) -> Result<bool, GroebnerError> {
    check_symbols(&b1.symbols, &b2.symbols)?;
    Ok(b2.generators.iter().all(|g| b1.contains(g)) && b1.generators.iter().all(|g| b2.contains(g)))
}

pub fn is_trivial(b: &GroebnerBasis) -> bool {
    b.is_trivial()
}

/// True iff the univariate quadratic `p` has negative discriminant.
pub fn no_real_root_quadratic(p: &ParamPoly) -> Result<bool, GroebnerError> {
    let bad = || GroebnerError::NotQuadratic(p.to_string());
    let v = p.univariate_symbol().ok_or_else(bad)?;
    if p.total_degree() != 2 {
        return Err(bad());
    }
    let mut c = [Rational::zero(), Rational::zero(), Rational::zero()];
    for (m, coef) in p.terms() {
        c[m.exponents()[v] as usize] = coef.clone();
    }
    let disc = &c[1] * &c[1] - Rational::from_integer(4.into()) * &c[2] * &c[0];
    Ok(disc.is_negative())
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// Buchberger state: polynomials, the active basis and pending pairs.
struct Engine<'a> {
    ord: &'a MonomialOrdering,
    budget: &'a Budget,
    polys: Vec<IPoly>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
    unit: bool,
}

impl<'a> Engine<'a> {
    fn new(ord: &'a MonomialOrdering, budget: &'a Budget) -> Self {
        Engine { ord, budget, polys: Vec::new(), active: Vec::new(), pairs: Vec::new(), unit: false }
    }

    /// Adds an element of an existing reduced basis without pairs.
    fn insert_raw(&mut self, p: IPoly) {
        if p.is_constant() {
            self.unit = true;
        }
        self.polys.push(p);
        self.active.push(self.polys.len() - 1);
    }

    fn reducers(&self) -> Reducers<'_> {
        Reducers::new(self.active.iter().map(|&i| &self.polys[i]).collect())
    }

    /// Reduces `p` by the current basis and inserts the remainder.
    fn add(&mut self, p: IPoly) -> Result<(), GroebnerError> {
        if self.unit || p.is_zero() {
            return Ok(());
        }
        let r = reduce_full(p, &self.reducers(), self.ord, false).rem;
        self.insert(r);
        Ok(())
    }

    /// Gebauer–Möller update with an already reduced `h`.
    fn insert(&mut self, h: IPoly) {
        if h.is_zero() {
            return;
        }
        if h.is_constant() {
            self.unit = true;
            self.polys.push(h);
            self.active = vec![self.polys.len() - 1];
            self.pairs.clear();
            return;
        }
        self.polys.push(h);
        let hi = self.polys.len() - 1;
        let hlm = self.polys[hi].lm().clone();

        // candidate pairs (h, g)
        let cands: Vec<(usize, Monomial, bool)> = self
            .active
            .iter()
            .map(|&g| {
                let glm = self.polys[g].lm();
                (g, hlm.lcm(glm), hlm.is_coprime(glm))
            })
            .collect();

        // drop a candidate whose lcm is a proper multiple of another's
        let mut keep = vec![true; cands.len()];
        for a in 0..cands.len() {
            for b in 0..cands.len() {
                if a != b && keep[b] && cands[b].1.divides(&cands[a].1) && cands[b].1 != cands[a].1 {
                    keep[a] = false;
                    break;
                }
            }
        }
        // among equal lcms keep one, preferring a coprime one (which is then dropped)
        let mut chosen: Vec<(usize, Monomial, bool)> = Vec::new();
        for (k, c) in cands.into_iter().enumerate() {
            if !keep[k] {
                continue;
            }
            if let Some(e) = chosen.iter_mut().find(|e| e.1 == c.1) {
                if c.2 {
                    e.2 = true;
                }
                continue;
            }
            chosen.push(c);
        }

        // prune old pairs made redundant by h
        let polys = &self.polys;
        self.pairs.retain(|p| {
            !(hlm.divides(&p.lcm)
                && hlm.lcm(polys[p.i].lm()) != p.lcm
                && hlm.lcm(polys[p.j].lm()) != p.lcm)
        });

        for (g, lcm, coprime) in chosen {
            if !coprime {
                self.pairs.push(Pair { i: g, j: hi, lcm });
            }
        }

        self.active.retain(|&g| !hlm.divides(polys[g].lm()));
        self.active.push(hi);
    }

    fn select(&mut self) -> Option<Pair> {
        let ord = self.ord;
        let best = self
            .pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.lcm.degree().cmp(&b.lcm.degree()).then_with(|| ord.cmp(&a.lcm, &b.lcm)))
            .map(|(k, _)| k)?;
        Some(self.pairs.swap_remove(best))
    }

    fn run(&mut self) -> Result<(), GroebnerError> {
        while !self.unit {
            self.budget.check()?;
            let Some(pair) = self.select() else { break };
            let s = IPoly { terms: spoly(&self.polys[pair.i], &self.polys[pair.j], self.ord) };
            if s.is_zero() {
                continue;
            }
            let r = reduce_full(s, &self.reducers(), self.ord, false).rem;
            self.insert(r);
        }
        Ok(())
    }

    /// Interreduced basis, integer-primitive.
    fn finish(self) -> Vec<IPoly> {
        let mut g: Vec<IPoly> = self.active.iter().map(|&i| self.polys[i].clone()).collect();
        if self.unit {
            let n = g[0].lm().nvars();
            return vec![IPoly { terms: vec![(Monomial::one(n), BigInt::one())] }];
        }
        g.sort_by(|a, b| self.ord.cmp(a.lm(), b.lm()));
        let mut out = Vec::with_capacity(g.len());
        for k in 0..g.len() {
            let others: Vec<&IPoly> = g.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, p)| p).collect();
            let r = reduce_full(g[k].clone(), &Reducers::new(others), self.ord, false).rem;
            out.push(r);
        }
        out.retain(|p| !p.is_zero());
        for p in &mut out {
            if p.lc().is_negative() {
                for t in &mut p.terms {
                    t.1 = -t.1.clone();
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests;
