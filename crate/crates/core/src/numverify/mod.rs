//! Floating-point cross-check: integrate the equation, sample the
//! displacement map `q(c) = z(1, c) - c` and fit its leading term.
//!
//! Nothing here feeds back into the exact pipeline.

use std::collections::HashMap;
use std::fmt;
use std::io::{self, Write};

use serde::Serialize;

use crate::exact::{rat_to_f64, ExactError};
use crate::piecewise::PiecewisePoly;
use crate::variational::EquationSpec;

pub type Point = HashMap<String, f64>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericError {
    #[error("step must be positive and finite, got {0}")]
    BadStep(f64),
    #[error("solution escapes before t = 1 from c = {0}")]
    Escaped(f64),
    #[error("every ladder point escapes")]
    AllEscaped,
    #[error("ladder needs at least two magnitudes")]
    ShortLadder,
    #[error("times must lie in [0, 1], got {0}")]
    BadTime(f64),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

pub type NResult<T> = Result<T, NumericError>;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlowOptions {
    /// Largest step; each coefficient segment is split evenly.
    pub step: f64,
    /// `|z|` above this counts as blow-up.
    pub escape: f64,
}

impl Default for FlowOptions {
    fn default() -> Self {
        FlowOptions { step: 1.0 / 2048.0, escape: 1e6 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FlowResult {
    /// `z(1, c)`; meaningless when `escaped`.
    pub value: f64,
    pub escaped: bool,
    pub steps: usize,
}

#[derive(Clone, Debug)]
struct Pieces {
    breaks: Vec<f64>,
    coeffs: Vec<Vec<f64>>,
}

impl Pieces {
    fn new(p: &PiecewisePoly, point: &Point) -> NResult<Self> {
        let breaks = p.breaks().iter().map(rat_to_f64).collect();
        let coeffs = p
            .segments()
            .iter()
            .map(|s| s.coeffs().iter().map(|c| c.eval_f64(point)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Pieces { breaks, coeffs })
    }

    fn segment(&self, t: f64) -> &[f64] {
        let i = self.breaks[1..].partition_point(|b| *b <= t).min(self.coeffs.len() - 1);
        &self.coeffs[i]
    }
}

fn horner(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, x| acc * t + x)
}

/// The equation with every parameter replaced by a float.
#[derive(Clone, Debug)]
pub struct NumericEquation {
    lead: f64,
    a: Pieces,
    b: Pieces,
}

impl NumericEquation {
    pub fn new(eq: &EquationSpec, point: &Point) -> NResult<Self> {
        Ok(NumericEquation {
            lead: eq.lead().eval_f64(point)?,
            a: Pieces::new(eq.a(), point)?,
            b: Pieces::new(eq.b(), point)?,
        })
    }

    fn nodes(&self, extra: &[f64]) -> Vec<f64> {
        let mut n: Vec<f64> = self.a.breaks.iter().chain(&self.b.breaks).chain(extra).copied().collect();
        n.sort_by(f64::total_cmp);
        n.dedup_by(|x, y| (*x - *y).abs() < 1e-15);
        n
    }

    /// Values at the sorted `times`, integrating from `z(0) = c`.
    ///
    /// Returns `None` entries from the first escape on.
    pub fn solve_at(&self, c: f64, times: &[f64], opts: &FlowOptions) -> NResult<(Vec<Option<f64>>, usize)> {
        if !(opts.step > 0.0 && opts.step.is_finite()) {
            return Err(NumericError::BadStep(opts.step));
        }
        if let Some(t) = times.iter().find(|t| !(0.0..=1.0).contains(*t)) {
            return Err(NumericError::BadTime(*t));
        }
        let nodes = self.nodes(times);
        let mut out = vec![None; times.len()];
        let mut z = c;
        let mut steps = 0;
        let record = |t: f64, z: f64, out: &mut Vec<Option<f64>>| {
            for (i, s) in times.iter().enumerate() {
                if (s - t).abs() < 1e-15 {
                    out[i] = Some(z);
                }
            }
        };
        record(0.0, z, &mut out);
        for w in nodes.windows(2) {
            let (t0, t1) = (w[0], w[1]);
            let mid = 0.5 * (t0 + t1);
            let (ca, cb) = (self.a.segment(mid), self.b.segment(mid));
            let rhs = |t: f64, z: f64| {
                let z2 = z * z;
                z2 * (horner(cb, t) + z * (horner(ca, t) + z * self.lead))
            };
            let n = ((t1 - t0) / opts.step).ceil().max(1.0) as usize;
            let h = (t1 - t0) / n as f64;
            for j in 0..n {
                let t = t0 + j as f64 * h;
                let k1 = rhs(t, z);
                let k2 = rhs(t + 0.5 * h, z + 0.5 * h * k1);
                let k3 = rhs(t + 0.5 * h, z + 0.5 * h * k2);
                let k4 = rhs(t + h, z + h * k3);
                z += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                steps += 1;
                if !z.is_finite() || z.abs() > opts.escape {
                    return Ok((out, steps));
                }
            }
            record(t1, z, &mut out);
        }
        Ok((out, steps))
    }

    pub fn flow(&self, c: f64, opts: &FlowOptions) -> NResult<FlowResult> {
        let (v, steps) = self.solve_at(c, &[1.0], opts)?;
        Ok(match v[0] {
            Some(value) => FlowResult { value, escaped: false, steps },
            None => FlowResult { value: f64::NAN, escaped: true, steps },
        })
    }

    pub fn displacement(&self, c: f64, opts: &FlowOptions) -> NResult<f64> {
        let r = self.flow(c, opts)?;
        if r.escaped {
            return Err(NumericError::Escaped(c));
        }
        Ok(r.value - c)
    }
}

pub fn flow(eq: &EquationSpec, point: &Point, c: f64, opts: &FlowOptions) -> NResult<FlowResult> {
    NumericEquation::new(eq, point)?.flow(c, opts)
}

pub fn displacement(eq: &EquationSpec, point: &Point, c: f64, opts: &FlowOptions) -> NResult<f64> {
    NumericEquation::new(eq, point)?.displacement(c, opts)
}

/// Largest `|z(1/2 + t) - z(1/2 - t)|` over the sampled `t` in `[0, 1/2]`.
pub fn reflection_defect(eq: &EquationSpec, point: &Point, c: f64, ts: &[f64], opts: &FlowOptions) -> NResult<f64> {
    let ne = NumericEquation::new(eq, point)?;
    let mut times: Vec<f64> = ts.iter().flat_map(|t| [0.5 - t, 0.5 + t]).collect();
    times.sort_by(f64::total_cmp);
    let (vals, _) = ne.solve_at(c, &times, opts)?;
    let at = |s: f64| {
        let i = times.iter().position(|x| (x - s).abs() < 1e-15).expect("requested time");
        vals[i].ok_or(NumericError::Escaped(c))
    };
    let mut worst: f64 = 0.0;
    for t in ts {
        worst = worst.max((at(0.5 + t)? - at(0.5 - t)?).abs());
    }
    Ok(worst)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EstimateOptions {
    pub flow: FlowOptions,
    /// Positive magnitudes; both signs are sampled.
    pub ladder: Vec<f64>,
    /// `|q(c)|` below `noise * |c|` is treated as zero.
    pub noise: f64,
}

impl EstimateOptions {
    /// Magnitudes `2^-hi, ..., 2^-lo`.
    pub fn ladder_pow2(lo: i32, hi: i32) -> Vec<f64> {
        (lo..=hi).map(|e| 2f64.powi(-e)).collect()
    }
}

impl Default for EstimateOptions {
    fn default() -> Self {
        EstimateOptions { flow: FlowOptions::default(), ladder: Self::ladder_pow2(5, 12), noise: 1e-12 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Sample {
    pub c: f64,
    /// `None` when the orbit escapes.
    pub q: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Fit {
    /// `q(c) ~ coeff c^k`.
    Order { k: usize, coeff: f64, slope: f64 },
    CenterLike,
}

impl Fit {
    pub fn k(&self) -> Option<usize> {
        match self {
            Fit::Order { k, .. } => Some(*k),
            Fit::CenterLike => None,
        }
    }

    pub fn coeff(&self) -> Option<f64> {
        match self {
            Fit::Order { coeff, .. } => Some(*coeff),
            Fit::CenterLike => None,
        }
    }
}

impl fmt::Display for Fit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fit::Order { k, coeff, slope } => write!(f, "k={k} coeff={coeff:.6e} slope={slope:.3}"),
            Fit::CenterLike => f.write_str("CENTER-LIKE"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub fit: Fit,
    pub samples: Vec<Sample>,
}

impl Estimate {
    /// Sign of the fitted `a_k(1)`; negative goes with `Stability::Stable`.
    pub fn coeff_sign(&self) -> Option<f64> {
        self.fit.coeff().map(f64::signum)
    }
}

/// Least-squares slope of `log|q|` against `log|c|` over the ladder, with
/// `coeff` the mean of `q(c)/c^k` and `q(-c)/(-c)^k` at the smallest `c`
/// whose two samples both clear the noise floor by a factor 100.
pub fn estimate_multiplicity(eq: &EquationSpec, point: &Point, opts: &EstimateOptions) -> NResult<Estimate> {
    let ne = NumericEquation::new(eq, point)?;
    let mut mags = opts.ladder.clone();
    mags.sort_by(|a, b| b.total_cmp(a));
    mags.dedup();
    if mags.len() < 2 {
        return Err(NumericError::ShortLadder);
    }
    let mut samples = Vec::new();
    for &m in &mags {
        for c in [m, -m] {
            let r = ne.flow(c, &opts.flow)?;
            samples.push(Sample { c, q: (!r.escaped).then_some(r.value - c) });
        }
    }
    if samples.iter().all(|s| s.q.is_none()) {
        return Err(NumericError::AllEscaped);
    }
    let floor = |c: f64| opts.noise * c.abs();
    let usable: Vec<(f64, f64)> = samples
        .iter()
        .filter_map(|s| s.q.map(|q| (s.c, q)))
        .filter(|(c, q)| q.abs() > floor(*c))
        .collect();
    let distinct = {
        let mut m: Vec<f64> = usable.iter().map(|(c, _)| c.abs()).collect();
        m.sort_by(f64::total_cmp);
        m.dedup();
        m.len()
    };
    if distinct < 2 {
        return Ok(Estimate { fit: Fit::CenterLike, samples });
    }
    let xs: Vec<f64> = usable.iter().map(|(c, _)| c.abs().ln()).collect();
    let ys: Vec<f64> = usable.iter().map(|(_, q)| q.abs().ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let k = slope.round().max(1.0) as usize;

    let pair = |m: f64| -> Option<(f64, f64)> {
        let get = |c: f64| samples.iter().find(|s| s.c == c).and_then(|s| s.q);
        Some((get(m)?, get(-m)?))
    };
    let ratio = |m: f64, (qp, qm): (f64, f64)| 0.5 * (qp / m.powi(k as i32) + qm / (-m).powi(k as i32));
    let strong = mags
        .iter()
        .rev()
        .filter_map(|&m| pair(m).map(|p| (m, p)))
        .find(|(m, (qp, qm))| qp.abs().min(qm.abs()) > 100.0 * floor(*m));
    let chosen = strong.or_else(|| mags.iter().filter_map(|&m| pair(m).map(|p| (m, p))).next());
    let coeff = match chosen {
        Some((m, p)) => ratio(m, p),
        None => {
            let (c, q) = usable[0];
            q / c.powi(k as i32)
        }
    };
    Ok(Estimate { fit: Fit::Order { k, coeff, slope }, samples })
}

/// `c,q` lines; escaped samples leave `q` empty.
pub fn write_csv<W: Write>(samples: &[Sample], mut w: W) -> io::Result<()> {
    writeln!(w, "c,q")?;
    for s in samples {
        match s.q {
            Some(q) => writeln!(w, "{:e},{:e}", s.c, q)?,
            None => writeln!(w, "{:e},", s.c)?,
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests;
