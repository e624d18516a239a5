//! Plain-text equation files.
//!
//! ```text
//! # comment
//! family: cubic | quartic | scaled-quartic
//! lead: k                           # scaled-quartic only
//! A: poly: d + 2*e*t + 3*f*t^2      # polynomial in t
//! B: pl: intercept=b; slopes=a, c; breaks=1/2
//! assume: c - a - 1                 # extra ideal generator, repeatable
//! symbols: w                        # extra parameter names, optional
//! ```
//!
//! A bare expression after `A:` or `B:` is read as `poly:`. When `breaks`
//! is omitted from a `pl:` coefficient the grid is uniform.

use std::collections::BTreeSet;

use crate::exact::{parse_expr_at, parse_rational, Expr, Monomial, ParamPoly, ParseError, Rational, Symbols};
use crate::piecewise::{PiecewisePoly, UPoly};
use crate::variational::{EquationSpec, Family};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InputError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("missing `{0}:` line")]
    Missing(&'static str),
    #[error("invalid equation: {0}")]
    Invalid(String),
}

impl From<ParseError> for InputError {
    fn from(e: ParseError) -> Self {
        InputError::Syntax { line: e.line, column: e.column, message: e.message }
    }
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> InputError {
    InputError::Syntax { line, column, message: message.into() }
}

/// A located expression awaiting the final symbol list.
#[derive(Clone, Debug)]
struct Located {
    expr: Expr,
    line: usize,
    column: usize,
}

impl Located {
    fn parse(src: &str, line: usize, column: usize) -> Result<Self, InputError> {
        let lead = src.len() - src.trim_start().len();
        let expr = parse_expr_at(src.trim(), line, column + lead)?;
        Ok(Located { expr, line, column: column + lead })
    }

    fn poly(&self, symbols: &Symbols) -> Result<ParamPoly, InputError> {
        self.expr.to_poly(symbols).map_err(|e| syntax(self.line, self.column, e.to_string()))
    }
}

#[derive(Clone, Debug)]
enum Coef {
    Poly(Located),
    Pl { intercept: Located, slopes: Vec<Located>, breaks: Option<Vec<Rational>> },
}

impl Coef {
    fn collect(&self, out: &mut BTreeSet<String>) {
        match self {
            Coef::Poly(e) => e.expr.collect_symbols(out),
            Coef::Pl { intercept, slopes, .. } => {
                intercept.expr.collect_symbols(out);
                for s in slopes {
                    s.expr.collect_symbols(out);
                }
            }
        }
    }

    fn build(&self, params: &Symbols) -> Result<PiecewisePoly, InputError> {
        match self {
            Coef::Poly(e) => {
                let with_t = params.union(&Symbols::new(["t"]));
                let ti = with_t.index_of("t").unwrap();
                let full = e.poly(&with_t)?;
                let mut coeffs: Vec<ParamPoly> = Vec::new();
                for (m, c) in full.terms() {
                    let deg = m.exponents()[ti] as usize;
                    let rest: Vec<u16> =
                        m.exponents().iter().enumerate().filter(|&(i, _)| i != ti).map(|(_, &x)| x).collect();
                    if coeffs.len() <= deg {
                        coeffs.resize(deg + 1, ParamPoly::zero(params));
                    }
                    coeffs[deg].add_term(Monomial::from_exponents(&rest), c.clone());
                }
                Ok(PiecewisePoly::single(UPoly::from_coeffs(params, coeffs)))
            }
            Coef::Pl { intercept, slopes, breaks } => {
                let n = slopes.len();
                let breaks = breaks
                    .clone()
                    .unwrap_or_else(|| (1..n).map(|i| Rational::new((i as i64).into(), (n as i64).into())).collect());
                let slopes = slopes.iter().map(|s| s.poly(params)).collect::<Result<Vec<_>, _>>()?;
                PiecewisePoly::pl_from_slopes(intercept.poly(params)?, slopes, breaks)
                    .map_err(|e| syntax(intercept.line, 0, e.to_string()))
            }
        }
    }
}

fn parse_coef(src: &str, line: usize, column: usize) -> Result<Coef, InputError> {
    let trimmed = src.trim_start();
    let col = column + (src.len() - trimmed.len());
    if let Some(rest) = trimmed.strip_prefix("poly:") {
        return Ok(Coef::Poly(Located::parse(rest, line, col + 5)?));
    }
    let Some(rest) = trimmed.strip_prefix("pl:") else {
        return Ok(Coef::Poly(Located::parse(trimmed, line, col)?));
    };
    let mut offset = col + 3;
    let (mut intercept, mut slopes, mut breaks) = (None, None, None);
    for part in rest.split(';') {
        let here = offset;
        offset += part.len() + 1;
        if part.trim().is_empty() {
            continue;
        }
        let (key, value) =
            part.split_once('=').ok_or_else(|| syntax(line, here, "expected `key=value` in `pl:` coefficient"))?;
        let vcol = here + key.len() + 1;
        match key.trim() {
            "intercept" => intercept = Some(Located::parse(value, line, vcol)?),
            "slopes" => {
                let mut out = Vec::new();
                let mut c = vcol;
                for s in value.split(',') {
                    out.push(Located::parse(s, line, c)?);
                    c += s.len() + 1;
                }
                slopes = Some(out);
            }
            "breaks" => {
                let v = value.trim();
                if v != "uniform" {
                    let mut out = Vec::new();
                    for s in v.split(',') {
                        out.push(parse_rational(s.trim()).map_err(|e| syntax(line, vcol, e.to_string()))?);
                    }
                    breaks = Some(out);
                }
            }
            other => return Err(syntax(line, here, format!("unknown key `{other}`"))),
        }
    }
    let intercept = intercept.ok_or_else(|| syntax(line, col, "`pl:` needs intercept="))?;
    let slopes = slopes.ok_or_else(|| syntax(line, col, "`pl:` needs slopes="))?;
    Ok(Coef::Pl { intercept, slopes, breaks })
}

/// Parses an equation file.
pub fn parse_equation(src: &str) -> Result<EquationSpec, InputError> {
    let mut family = None;
    let (mut a, mut b, mut lead) = (None, None, None);
    let mut assumptions = Vec::new();
    let mut extra: BTreeSet<String> = BTreeSet::new();
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let text = raw.split('#').next().unwrap();
        if text.trim().is_empty() {
            continue;
        }
        let (key, value) = text.split_once(':').ok_or_else(|| syntax(line, 0, "expected `key: value`"))?;
        let vcol = key.len() + 1;
        match key.trim() {
            "family" => {
                family = Some(value.parse::<Family>().map_err(|e| syntax(line, vcol, e))?);
            }
            "A" => a = Some(parse_coef(value, line, vcol)?),
            "B" => b = Some(parse_coef(value, line, vcol)?),
            "lead" => lead = Some(Located::parse(value, line, vcol)?),
            "assume" => assumptions.push(Located::parse(value, line, vcol)?),
            "symbols" => {
                for s in value.split(',') {
                    let s = s.trim();
                    if s.is_empty() || !s.bytes().all(|c| c.is_ascii_lowercase()) || s == "t" {
                        return Err(syntax(line, vcol, format!("bad symbol name `{s}`")));
                    }
                    extra.insert(s.to_string());
                }
            }
            other => return Err(syntax(line, 0, format!("unknown key `{other}`"))),
        }
    }
    let family = family.ok_or(InputError::Missing("family"))?;
    let a = a.ok_or(InputError::Missing("A"))?;
    let b = b.ok_or(InputError::Missing("B"))?;

    let mut names = extra;
    a.collect(&mut names);
    b.collect(&mut names);
    for e in lead.iter().chain(&assumptions) {
        if e.expr.symbols().contains("t") {
            return Err(syntax(e.line, e.column, "`t` is not allowed here"));
        }
        e.expr.collect_symbols(&mut names);
    }
    names.remove("t");
    let params = Symbols::new(names);

    let lead = match (&lead, family) {
        (Some(l), _) => Some(l.poly(&params)?),
        (None, Family::ScaledQuartic) => return Err(InputError::Missing("lead")),
        (None, _) => None,
    };
    let assumptions = assumptions.iter().map(|e| e.poly(&params)).collect::<Result<Vec<_>, _>>()?;
    let lead = match (family, lead) {
        (Family::Quartic, Some(l)) if l.is_one() => None,
        (_, l) => l,
    };
    EquationSpec::build(family, a.build(&params)?, b.build(&params)?, lead, assumptions)
        .map_err(|e| InputError::Invalid(e.to_string()))
}

/// Text form of a coefficient that `parse_equation` reads back.
pub fn coefficient_text(p: &PiecewisePoly) -> String {
    let poly_text = |u: &UPoly| {
        let parts: Vec<String> = u
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("({c})"),
                1 => format!("({c})*t"),
                _ => format!("({c})*t^{i}"),
            })
            .collect();
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    };
    if p.segments().len() == 1 {
        return format!("poly: {}", poly_text(&p.segments()[0]));
    }
    match p.as_piecewise_linear() {
        Some((intercept, slopes)) if p.is_continuous() => {
            let slopes: Vec<String> = slopes.iter().map(|s| s.to_string()).collect();
            let breaks: Vec<String> = p.interior_breaks().iter().map(|b| b.to_string()).collect();
            format!("pl: intercept={intercept}; slopes={}; breaks={}", slopes.join(", "), breaks.join(", "))
        }
        _ => format!("<{} segments>", p.segments().len()),
    }
}

/// Text form of an equation that `parse_equation` reads back.
pub fn equation_text(eq: &EquationSpec) -> String {
    let mut out = format!("family: {}\n", eq.family());
    if eq.family() == Family::ScaledQuartic {
        out += &format!("lead: {}\n", eq.lead());
    }
    out += &format!("A: {}\nB: {}\n", coefficient_text(eq.a()), coefficient_text(eq.b()));
    for p in eq.assumptions() {
        out += &format!("assume: {p}\n");
    }
    if !eq.symbols().is_empty() {
        out += &format!("symbols: {}\n", eq.symbols().names().join(", "));
    }
    out
}
