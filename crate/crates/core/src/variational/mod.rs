//! Focal values of the zero solution.
//!
//! `V_k(t) = -k \int_0^t [B V_{k-1} + A V_{k-2} + lead V_{k-3}]`, with
//! `V_1 = 1` and `V_j = 0` for `j <= 0`. The first non-vanishing `V_k(1)`
//! gives the multiplicity, and its sign the stability.

mod closed;

pub use closed::{eta345_closed, ClosedEtas, SymbolicBreakLinear};

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::exact::{Assignment, ExactError, MonomialOrdering, ParamPoly, Rational, Symbols};
use crate::groebner::{Budget, GroebnerBasis, GroebnerError};
use crate::piecewise::{PiecewiseError, PiecewisePoly};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VariationalError {
    #[error("order must be at least 2, got {0}")]
    OrderTooSmall(usize),
    #[error("scale factor is zero")]
    ZeroScale,
    #[error("{what} is not divisible by {by}")]
    NotDivisible { what: String, by: String },
    #[error("family {family} requires lead {expected}, got {got}")]
    LeadMismatch { family: Family, expected: String, got: String },
    #[error("unsupported equation: {0}")]
    NotConforming(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Piecewise(#[from] PiecewiseError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
}

type VResult<T> = Result<T, VariationalError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Cubic,
    Quartic,
    ScaledQuartic,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Cubic => "cubic",
            Family::Quartic => "quartic",
            Family::ScaledQuartic => "scaled-quartic",
        })
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "cubic" => Ok(Family::Cubic),
            "quartic" => Ok(Family::Quartic),
            "scaled-quartic" | "scaled" => Ok(Family::ScaledQuartic),
            o => Err(format!("unknown family `{o}`")),
        }
    }
}

/// `z' = lead z^4 + A z^3 + B z^2` with extra ideal generators
/// (`assumptions`) that constrain the parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct EquationSpec {
    family: Family,
    a: PiecewisePoly,
    b: PiecewisePoly,
    lead: ParamPoly,
    assumptions: Vec<ParamPoly>,
}

impl EquationSpec {
    pub fn cubic(a: PiecewisePoly, b: PiecewisePoly) -> VResult<Self> {
        Self::build(Family::Cubic, a, b, None, Vec::new())
    }

    pub fn quartic(a: PiecewisePoly, b: PiecewisePoly) -> VResult<Self> {
        Self::build(Family::Quartic, a, b, None, Vec::new())
    }

    /// Quartic with a symbolic or non-unit leading coefficient.
    pub fn scaled_quartic(a: PiecewisePoly, b: PiecewisePoly, lead: ParamPoly) -> VResult<Self> {
        Self::build(Family::ScaledQuartic, a, b, Some(lead), Vec::new())
    }

    /// General constructor; all parts are embedded over the union of their symbols.
    pub fn build(
        family: Family,
        a: PiecewisePoly,
        b: PiecewisePoly,
        lead: Option<ParamPoly>,
        assumptions: Vec<ParamPoly>,
    ) -> VResult<Self> {
        let mut symbols = a.symbols().union(b.symbols());
        if let Some(l) = &lead {
            symbols = symbols.union(l.symbols());
        }
        for p in &assumptions {
            symbols = symbols.union(p.symbols());
        }
        let expected = match family {
            Family::Cubic => Some(ParamPoly::zero(&symbols)),
            Family::Quartic => Some(ParamPoly::one(&symbols)),
            Family::ScaledQuartic => None,
        };
        let lead = match (lead, expected) {
            (Some(l), Some(e)) => {
                let l = l.embed(&symbols)?;
                if l != e {
                    return Err(VariationalError::LeadMismatch {
                        family,
                        expected: e.to_string(),
                        got: l.to_string(),
                    });
                }
                l
            }
            (Some(l), None) => l.embed(&symbols)?,
            (None, Some(e)) => e,
            (None, None) => {
                return Err(VariationalError::NotConforming("scaled-quartic needs a lead coefficient".into()))
            }
        };
        let assumptions = assumptions.iter().map(|p| p.embed(&symbols)).collect::<Result<_, _>>()?;
        Ok(EquationSpec { family, a: a.embed(&symbols)?, b: b.embed(&symbols)?, lead, assumptions })
    }

    pub fn with_assumptions(mut self, extra: Vec<ParamPoly>) -> VResult<Self> {
        let mut all = std::mem::take(&mut self.assumptions);
        all.extend(extra);
        let lead = (self.family == Family::ScaledQuartic).then_some(self.lead);
        Self::build(self.family, self.a, self.b, lead, all)
    }

    /// Re-expresses everything over a larger symbol list.
    pub fn embed(&self, target: &Symbols) -> VResult<Self> {
        Ok(EquationSpec {
            family: self.family,
            a: self.a.embed(target)?,
            b: self.b.embed(target)?,
            lead: self.lead.embed(target)?,
            assumptions: self.assumptions.iter().map(|p| p.embed(target)).collect::<Result<_, _>>()?,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn a(&self) -> &PiecewisePoly {
        &self.a
    }

    pub fn b(&self) -> &PiecewisePoly {
        &self.b
    }

    pub fn lead(&self) -> &ParamPoly {
        &self.lead
    }

    pub fn assumptions(&self) -> &[ParamPoly] {
        &self.assumptions
    }

    pub fn symbols(&self) -> &Symbols {
        self.a.symbols()
    }

    /// Substitutes values for some or all parameters (symbols are kept).
    pub fn substitute(&self, point: &Assignment, partial: bool) -> VResult<Self> {
        Ok(EquationSpec {
            family: self.family,
            a: self.a.substitute(point, partial)?,
            b: self.b.substitute(point, partial)?,
            lead: self.lead.substitute(point, partial)?,
            assumptions: self
                .assumptions
                .iter()
                .map(|p| p.substitute(point, partial))
                .collect::<Result<_, _>>()?,
        })
    }
}

impl fmt::Display for EquationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "family: {}", self.family)?;
        if self.family == Family::ScaledQuartic {
            writeln!(f, "lead: {}", self.lead)?;
        }
        writeln!(f, "A: {}", self.a)?;
        write!(f, "B: {}", self.b)?;
        for p in &self.assumptions {
            write!(f, "\nassume: {p}")?;
        }
        Ok(())
    }
}

/// Produces `V_2, V_3, ...` one at a time.
struct VStepper<'a> {
    eq: &'a EquationSpec,
    /// `V_{k-1}, V_{k-2}, V_{k-3}` for the next index `k`.
    window: [PiecewisePoly; 3],
    k: usize,
}

impl<'a> VStepper<'a> {
    fn new(eq: &'a EquationSpec) -> Self {
        let s = eq.symbols();
        VStepper {
            eq,
            window: [PiecewisePoly::constant(ParamPoly::one(s)), PiecewisePoly::zero(s), PiecewisePoly::zero(s)],
            k: 2,
        }
    }

    fn next(&mut self) -> PiecewisePoly {
        let [v1, v2, v3] = &self.window;
        let mut integrand = self.eq.b.mul(v1);
        if !v2.is_zero() {
            integrand = integrand.add(&self.eq.a.mul(v2));
        }
        if !v3.is_zero() && !self.eq.lead.is_zero() {
            let term = match self.eq.lead.constant_value() {
                Some(c) => v3.scale(&c),
                None => v3.scale_poly(&self.eq.lead),
            };
            integrand = integrand.add(&term);
        }
        let vk = integrand.antiderivative().scale(&-Rational::from_integer(self.k.into())).simplify();
        self.window.rotate_right(1);
        self.window[0] = vk.clone();
        self.k += 1;
        vk
    }

    /// Replaces the stored coefficients by normal forms modulo `gb`.
    fn reduce_window(&mut self, gb: &GroebnerBasis) {
        if gb.is_empty() {
            return;
        }
        for v in &mut self.window {
            *v = v.map_segments(|s| s.map_coeffs(|c| gb.reduce(c)));
        }
    }
}

fn value_at_one(p: &PiecewisePoly) -> ParamPoly {
    p.value_at(&Rational::one()).expect("t = 1 is in range")
}

#[derive(Clone, Debug)]
pub struct VSequence {
    /// `entries[k - 1] = V_k(t)`.
    entries: Vec<PiecewisePoly>,
    values: Vec<ParamPoly>,
}

impl VSequence {
    /// `V_k(t)` for `k >= 1`.
    pub fn v(&self, k: usize) -> &PiecewisePoly {
        &self.entries[k - 1]
    }

    /// `V_k(1)`.
    pub fn value(&self, k: usize) -> &ParamPoly {
        &self.values[k - 1]
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// `V_1, ..., V_K`.
pub fn v_sequence(eq: &EquationSpec, k_max: usize) -> VResult<VSequence> {
    if k_max < 2 {
        return Err(VariationalError::OrderTooSmall(k_max));
    }
    let mut st = VStepper::new(eq);
    let mut entries = vec![st.window[0].clone()];
    for _ in 2..=k_max {
        entries.push(st.next());
    }
    let values = entries.iter().map(value_at_one).collect();
    Ok(VSequence { entries, values })
}

#[derive(Clone, Debug)]
pub struct ASequence {
    /// `entries[n - 1] = a_n(t)`.
    entries: Vec<PiecewisePoly>,
}

impl ASequence {
    pub fn a(&self, n: usize) -> &PiecewisePoly {
        &self.entries[n - 1]
    }

    pub fn value(&self, n: usize) -> ParamPoly {
        value_at_one(&self.entries[n - 1])
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Taylor coefficients `a_n(t)` of `z(t, c) = sum a_n(t) c^n`.
pub fn a_sequence(eq: &EquationSpec, n_max: usize) -> VResult<ASequence> {
    if n_max < 2 {
        return Err(VariationalError::OrderTooSmall(n_max));
    }
    let s = eq.symbols();
    let zero = PiecewisePoly::zero(s);
    // a[n], p2[n], p3[n], p4[n]: coefficient of c^n in z, z^2, z^3, z^4
    let mut a = vec![zero.clone(), PiecewisePoly::constant(ParamPoly::one(s))];
    let (mut p2, mut p3, mut p4) = (vec![zero.clone(); 2], vec![zero.clone(); 2], vec![zero.clone(); 2]);
    let conv = |x: &[PiecewisePoly], y: &[PiecewisePoly], n: usize, min_y: usize| {
        let mut acc = zero.clone();
        for i in 1..n {
            if n - i < min_y || x[i].is_zero() || y[n - i].is_zero() {
                continue;
            }
            acc = acc.add(&x[i].mul(&y[n - i]));
        }
        acc
    };
    for n in 2..=n_max {
        let q2 = conv(&a, &a, n, 1);
        p2.push(q2);
        let q3 = conv(&a, &p2, n, 2);
        p3.push(q3);
        let q4 = conv(&a, &p3, n, 3);
        p4.push(q4);
        let mut rhs = eq.b.mul(&p2[n]);
        if !p3[n].is_zero() {
            rhs = rhs.add(&eq.a.mul(&p3[n]));
        }
        if !p4[n].is_zero() && !eq.lead.is_zero() {
            rhs = rhs.add(&p4[n].scale_poly(&eq.lead));
        }
        a.push(rhs.antiderivative().simplify());
    }
    a.remove(0);
    Ok(ASequence { entries: a })
}

#[derive(Clone, Debug)]
pub struct EtaOptions {
    pub ordering: MonomialOrdering,
    /// Reduce the coefficients of `V_j(t)` modulo the current basis at
    /// each step; gives the same `eta_k` with much smaller intermediates.
    pub reduce_intermediate: bool,
    /// Stop as soon as the basis becomes `<1>`.
    pub stop_when_trivial: bool,
    pub budget: Budget,
}

impl Default for EtaOptions {
    fn default() -> Self {
        EtaOptions {
            ordering: MonomialOrdering::grevlex(),
            reduce_intermediate: true,
            stop_when_trivial: true,
            budget: Budget::unlimited(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct EtaSequence {
    /// `etas[k - 2] = eta_k`.
    etas: Vec<ParamPoly>,
    /// `bases[k - 1] = G_k`; `bases[0]` holds the assumptions alone.
    bases: Vec<GroebnerBasis>,
}

impl EtaSequence {
    /// `eta_k`, `k >= 2`.
    pub fn eta(&self, k: usize) -> &ParamPoly {
        &self.etas[k - 2]
    }

    /// Basis of `<eta_2, ..., eta_k>` together with the assumptions.
    ///
    /// Past the point where the basis became `<1>` this is `<1>`.
    pub fn basis(&self, k: usize) -> &GroebnerBasis {
        match self.bases.get(k - 1) {
            Some(b) => b,
            None if self.bases.last().is_some_and(GroebnerBasis::is_trivial) => self.bases.last().unwrap(),
            None => panic!("basis {k} was not computed"),
        }
    }

    /// Largest computed index.
    pub fn last(&self) -> usize {
        self.etas.len() + 1
    }

    pub fn etas(&self) -> &[ParamPoly] {
        &self.etas
    }

    /// First `k` whose basis is `<1>`.
    pub fn trivial_at(&self) -> Option<usize> {
        self.bases.iter().position(GroebnerBasis::is_trivial).map(|i| i + 1)
    }

    /// `(k, eta_k)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &ParamPoly)> {
        self.etas.iter().enumerate().map(|(i, e)| (i + 2, e))
    }
}

/// `eta_2 = V_2(1)` and `eta_k = NF(V_k(1), G_{k-1})`.
pub fn eta_sequence(eq: &EquationSpec, k_max: usize, opts: &EtaOptions) -> VResult<EtaSequence> {
    if k_max < 2 {
        return Err(VariationalError::OrderTooSmall(k_max));
    }
    let s = eq.symbols();
    let g1 = GroebnerBasis::zero_ideal(s, &opts.ordering).extend(eq.assumptions(), &opts.budget)?;
    let mut bases = vec![g1];
    let mut etas = Vec::new();
    let mut st = VStepper::new(eq);
    for _k in 2..=k_max {
        opts.budget.check()?;
        let gb = bases.last().unwrap().clone();
        if opts.stop_when_trivial && gb.is_trivial() {
            break;
        }
        if opts.reduce_intermediate {
            st.reduce_window(&gb);
        }
        let vk = st.next();
        let eta = gb.reduce(&value_at_one(&vk));
        let next = if eta.is_zero() { gb } else { gb.extend(std::slice::from_ref(&eta), &opts.budget)? };
        etas.push(eta);
        bases.push(next);
    }
    Ok(EtaSequence { etas, bases })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stability {
    Stable,
    Unstable,
    Undetermined,
}

impl fmt::Display for Stability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stability::Stable => "stable",
            Stability::Unstable => "unstable",
            Stability::Undetermined => "undetermined",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Multiplicity {
    Finite(usize),
    /// Every `V_k(1)` vanished up to the bound (cubic).
    CenterUpTo(usize),
    /// Every `V_k(1)` vanished up to the bound (quartic, which has no centers).
    Unresolved(usize),
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Finite(k) => write!(f, "{k}"),
            Multiplicity::CenterUpTo(k) => write!(f, "CENTER-UP-TO-{k}"),
            Multiplicity::Unresolved(k) => write!(f, "UNRESOLVED-UP-TO-{k}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultiplicityResult {
    pub multiplicity: Multiplicity,
    /// `V_k(1)` at the point.
    pub leading_value: Option<Rational>,
    pub stability: Stability,
    /// `V_2(1), V_3(1), ...` as computed.
    pub values: Vec<Rational>,
}

impl MultiplicityResult {
    pub fn k(&self) -> Option<usize> {
        match self.multiplicity {
            Multiplicity::Finite(k) => Some(k),
            _ => None,
        }
    }
}

/// Multiplicity and stability of `z = 0` at a concrete parameter point.
pub fn multiplicity_at(eq: &EquationSpec, point: &Assignment, k_max: usize) -> VResult<MultiplicityResult> {
    if k_max < 2 {
        return Err(VariationalError::OrderTooSmall(k_max));
    }
    let concrete = eq.substitute(point, false)?;
    let mut st = VStepper::new(&concrete);
    let mut values = Vec::new();
    for k in 2..=k_max {
        let v = value_at_one(&st.next()).constant_value().expect("all parameters assigned");
        values.push(v.clone());
        if !v.is_zero() {
            let stability = if v.is_positive() { Stability::Stable } else { Stability::Unstable };
            return Ok(MultiplicityResult {
                multiplicity: Multiplicity::Finite(k),
                leading_value: Some(v),
                stability,
                values,
            });
        }
    }
    let multiplicity = match eq.family {
        Family::Cubic => Multiplicity::CenterUpTo(k_max),
        _ if eq.lead.is_zero() => Multiplicity::CenterUpTo(k_max),
        _ => Multiplicity::Unresolved(k_max),
    };
    Ok(MultiplicityResult { multiplicity, leading_value: None, stability: Stability::Undetermined, values })
}

/// Substitutes `z -> z / u`: `A / u^2`, `B / u`, `lead / u^3`.
///
/// A polynomial `u` must divide every coefficient exactly.
pub fn rescale(eq: &EquationSpec, u: &ParamPoly) -> VResult<EquationSpec> {
    if u.is_zero() {
        return Err(VariationalError::ZeroScale);
    }
    let u = u.embed(&eq.symbols().union(u.symbols()))?;
    let eq = eq.embed(u.symbols())?;
    let div = |p: &ParamPoly, d: &ParamPoly| -> VResult<ParamPoly> {
        if let Some(c) = d.constant_value() {
            return Ok(p.scale(&c.recip()));
        }
        p.div_exact(d)?
            .ok_or_else(|| VariationalError::NotDivisible { what: p.to_string(), by: d.to_string() })
    };
    let u2 = &u * &u;
    let u3 = &u2 * &u;
    let map = |pw: &PiecewisePoly, d: &ParamPoly| -> VResult<PiecewisePoly> {
        let segs = pw
            .segments()
            .iter()
            .map(|s| {
                s.coeffs()
                    .iter()
                    .map(|c| div(c, d))
                    .collect::<VResult<Vec<_>>>()
                    .map(|cs| crate::piecewise::UPoly::from_coeffs(pw.symbols(), cs))
            })
            .collect::<VResult<Vec<_>>>()?;
        Ok(PiecewisePoly::from_segments(pw.breaks().to_vec(), segs)?)
    };
    let a = map(&eq.a, &u2)?;
    let b = map(&eq.b, &u)?;
    let lead = div(&eq.lead, &u3)?;
    let family = match eq.family {
        Family::Quartic if !lead.is_one() => Family::ScaledQuartic,
        f => f,
    };
    let lead = (family == Family::ScaledQuartic).then_some(lead);
    EquationSpec::build(family, a, b, lead, eq.assumptions.clone())
}

#[cfg(test)]
mod tests;
