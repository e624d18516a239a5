use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use abel_core::cases::{self, CaseReport, RunOptions, Status};
use abel_core::center::certify;
use abel_core::exact::{parse_poly, parse_rational, rat_to_f64, Assignment, MonomialOrdering, OrderKind, ParamPoly, Symbols};
use abel_core::groebner::{buchberger_with, ideal_equal, Budget};
use abel_core::input::parse_equation;
use abel_core::numverify::{estimate_multiplicity, write_csv, EstimateOptions, FlowOptions, Point};
use abel_core::variational::{eta_sequence, multiplicity_at, EquationSpec, EtaOptions};

#[derive(Parser)]
#[command(name = "abel", version, about = "Multiplicity of the zero periodic solution of Abel-type equations")]
struct Cli {
    /// Output style.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    /// One JSON object per line.
    Records,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print eta_2 .. eta_K of an equation.
    Eta {
        #[command(flatten)]
        eq: EquationArgs,
        #[arg(long = "K", default_value_t = 6)]
        k: usize,
        #[arg(long, default_value = "grevlex")]
        ordering: OrderKind,
        /// Also print each basis G_k.
        #[arg(long)]
        bases: bool,
        /// Stop after this many seconds.
        #[arg(long)]
        budget: Option<f64>,
    },
    /// Reduced Gröbner basis of polynomials listed one per line.
    Groebner {
        file: PathBuf,
        #[arg(long, default_value = "grevlex")]
        ordering: OrderKind,
        /// Compare with the ideal generated by this file.
        #[arg(long)]
        equal: Option<PathBuf>,
        #[arg(long)]
        budget: Option<f64>,
    },
    /// Multiplicity and stability at a rational parameter point.
    Mult {
        #[command(flatten)]
        eq: EquationArgs,
        /// `a=1, b=-2/3`; braces are optional.
        #[arg(long, default_value = "{}")]
        at: String,
        #[arg(long = "Kmax", default_value_t = 12)]
        kmax: usize,
    },
    /// Center certificate, if one of the sufficient conditions holds.
    Center {
        #[command(flatten)]
        eq: EquationArgs,
        /// Parameter point to substitute first.
        #[arg(long)]
        at: Option<String>,
    },
    /// Numeric displacement map and fitted leading term.
    Verify {
        #[command(flatten)]
        eq: EquationArgs,
        /// `a=1.5, b=-2/3`.
        #[arg(long, default_value = "{}")]
        at: String,
        #[arg(long, default_value_t = 1.0 / 2048.0)]
        step: f64,
        /// Magnitudes 2^-lo .. 2^-hi as `lo:hi`.
        #[arg(long, default_value = "5:12")]
        ladder: String,
        /// Relative noise floor for |q(c)| / |c|.
        #[arg(long, default_value_t = 1e-12)]
        noise: f64,
        #[arg(long, default_value_t = 1e6)]
        escape: f64,
        /// Write the (c, q) samples here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run registered reference computations.
    Reproduce {
        ids: Vec<String>,
        /// Every registered case except heavy ones.
        #[arg(long)]
        all: bool,
        /// With `--all`, include heavy cases.
        #[arg(long)]
        heavy: bool,
        /// List the registry and exit.
        #[arg(long)]
        list: bool,
        /// Per-case wall-clock limit in seconds.
        #[arg(long)]
        budget: Option<f64>,
        #[arg(long, default_value = "grevlex")]
        ordering: OrderKind,
    },
}

#[derive(Args)]
struct EquationArgs {
    /// Equation file; the flags below are used when absent.
    file: Option<PathBuf>,
    #[arg(long)]
    family: Option<String>,
    #[arg(long = "A")]
    a: Option<String>,
    #[arg(long = "B")]
    b: Option<String>,
    #[arg(long)]
    lead: Option<String>,
    #[arg(long)]
    assume: Vec<String>,
}

impl EquationArgs {
    fn load(&self) -> Result<EquationSpec> {
        let (src, origin) = match &self.file {
            Some(p) => (fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?, p.display().to_string()),
            None => {
                let mut s = format!("family: {}\n", self.family.as_deref().unwrap_or("cubic"));
                if let Some(l) = &self.lead {
                    s += &format!("lead: {l}\n");
                }
                s += &format!("A: {}\n", self.a.as_deref().ok_or_else(|| anyhow!("missing --A or equation file"))?);
                s += &format!("B: {}\n", self.b.as_deref().ok_or_else(|| anyhow!("missing --B or equation file"))?);
                for a in &self.assume {
                    s += &format!("assume: {a}\n");
                }
                (s, "<flags>".to_string())
            }
        };
        parse_equation(&src).map_err(|e| anyhow!("{origin}: {e}"))
    }
}

fn budget(secs: Option<f64>) -> Budget {
    Budget::new(secs.map(Duration::from_secs_f64))
}

fn pairs(src: &str) -> Result<Vec<(String, String)>> {
    let body = src.trim().trim_start_matches('{').trim_end_matches('}');
    body.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|kv| {
            let (k, v) = kv.split_once('=').or_else(|| kv.split_once(':')).ok_or_else(|| anyhow!("expected name=value, got `{kv}`"))?;
            Ok((k.trim().trim_matches('"').to_string(), v.trim().to_string()))
        })
        .collect()
}

fn exact_point(src: &str) -> Result<Assignment> {
    pairs(src)?
        .into_iter()
        .map(|(k, v)| Ok((k, parse_rational(&v).with_context(|| format!("value of {v}"))?)))
        .collect()
}

fn float_point(src: &str) -> Result<Point> {
    pairs(src)?
        .into_iter()
        .map(|(k, v)| {
            let x = match v.parse::<f64>() {
                Ok(x) => x,
                Err(_) => rat_to_f64(&parse_rational(&v).with_context(|| format!("value `{v}`"))?),
            };
            Ok((k, x))
        })
        .collect()
}

fn read_polys(path: &PathBuf) -> Result<Vec<ParamPoly>> {
    let src = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let polys = src
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim().trim_end_matches(','))
        .filter(|l| !l.is_empty())
        .map(|l| parse_poly(l).map_err(|e| anyhow!("{}: {e}", path.display())))
        .collect::<Result<Vec<_>>>()?;
    Ok(polys)
}

fn common(polys: &[ParamPoly], extra: &Symbols) -> Result<Vec<ParamPoly>> {
    let symbols = polys.iter().fold(extra.clone(), |s, p| s.union(p.symbols()));
    Ok(polys.iter().map(|p| p.embed(&symbols)).collect::<Result<Vec<_>, _>>()?)
}

fn run(cli: Cli) -> Result<bool> {
    let records = cli.format == Format::Records;
    match cli.cmd {
        Cmd::Eta { eq, k, ordering, bases, budget: secs } => {
            let eq = eq.load()?;
            let opts = EtaOptions { ordering: MonomialOrdering::new(ordering), budget: budget(secs), ..Default::default() };
            let seq = eta_sequence(&eq, k, &opts)?;
            for (j, eta) in seq.iter() {
                if records {
                    let mut r = json!({ "k": j, "eta": eta.to_string() });
                    if bases {
                        r["basis"] = json!(seq.basis(j).to_string());
                    }
                    println!("{r}");
                } else {
                    println!("eta_{j} = {eta}");
                    if bases {
                        println!("G_{j} = {}", seq.basis(j));
                    }
                }
            }
            if let Some(t) = seq.trivial_at() {
                if !records {
                    println!("G_{t} = <1>");
                }
            }
            Ok(true)
        }
        Cmd::Groebner { file, ordering, equal, budget: secs } => {
            let polys = read_polys(&file)?;
            let other = equal.as_ref().map(read_polys).transpose()?;
            let all_syms = other.iter().flatten().fold(Symbols::empty(), |s, p| s.union(p.symbols()));
            let ord = MonomialOrdering::new(ordering);
            let b = budget(secs);
            let g = buchberger_with(&common(&polys, &all_syms)?, &ord, &b)?;
            let same = match &other {
                Some(o) => {
                    let h = buchberger_with(&common(o, g.symbols())?, &ord, &b)?;
                    Some(ideal_equal(&g, &h)?)
                }
                None => None,
            };
            if records {
                println!("{}", json!({ "basis": g.primitive_generators().iter().map(|p| p.to_string()).collect::<Vec<_>>(), "trivial": g.is_trivial(), "equal": same }));
            } else {
                println!("{g}");
                if let Some(s) = same {
                    println!("ideal-equal: {s}");
                }
            }
            Ok(same.unwrap_or(true))
        }
        Cmd::Mult { eq, at, kmax } => {
            let eq = eq.load()?;
            let r = multiplicity_at(&eq, &exact_point(&at)?, kmax)?;
            if records {
                println!(
                    "{}",
                    json!({ "multiplicity": r.multiplicity.to_string(), "k": r.k(), "stability": r.stability,
                            "leading_value": r.leading_value.as_ref().map(|v| v.to_string()) })
                );
            } else {
                match &r.leading_value {
                    Some(v) => println!("k={} {} V_k(1)={v}", r.multiplicity, r.stability),
                    None => println!("{}", r.multiplicity),
                }
            }
            Ok(true)
        }
        Cmd::Center { eq, at } => {
            let mut eq = eq.load()?;
            if let Some(at) = at {
                eq = eq.substitute(&exact_point(&at)?, true)?;
            }
            let c = certify(&eq);
            if records {
                println!(
                    "{}",
                    json!({ "kind": c.kind, "lambda": c.lambda.as_ref().map(|l| l.to_string()),
                            "s": c.s.as_ref().map(|s| s.to_string()) })
                );
            } else {
                println!("{c}");
            }
            Ok(true)
        }
        Cmd::Verify { eq, at, step, ladder, noise, escape, csv } => {
            let eq = eq.load()?;
            let (lo, hi) = ladder.split_once(':').ok_or_else(|| anyhow!("--ladder expects lo:hi"))?;
            let (lo, hi): (i32, i32) = (lo.trim().parse()?, hi.trim().parse()?);
            if lo > hi {
                bail!("--ladder needs lo <= hi");
            }
            let opts = EstimateOptions {
                flow: FlowOptions { step, escape },
                ladder: EstimateOptions::ladder_pow2(lo, hi),
                noise,
            };
            let est = estimate_multiplicity(&eq, &float_point(&at)?, &opts)?;
            if let Some(path) = csv {
                write_csv(&est.samples, fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?)?;
            }
            if records {
                println!("{}", json!({ "fit": est.fit, "samples": est.samples }));
            } else {
                println!("{}", est.fit);
            }
            Ok(true)
        }
        Cmd::Reproduce { ids, all, heavy, list, budget: secs, ordering } => {
            let registry = cases::registry();
            if list {
                for c in &registry {
                    let tag = if c.heavy { " [heavy]" } else { "" };
                    println!("{:<24} {}{tag}", c.id, c.description);
                }
                return Ok(true);
            }
            let chosen: Vec<_> = if all {
                registry.into_iter().filter(|c| heavy || !c.heavy).collect()
            } else {
                if ids.is_empty() {
                    bail!("give case ids or --all");
                }
                ids.iter()
                    .map(|id| cases::find(id).ok_or_else(|| anyhow!("unknown case `{id}`")))
                    .collect::<Result<_>>()?
            };
            let opts = RunOptions { ordering: MonomialOrdering::new(ordering), budget: secs.map(Duration::from_secs_f64) };
            let reports: Vec<CaseReport> = chosen.par_iter().map(|c| cases::run_case(c, &opts)).collect();
            for r in &reports {
                if records {
                    println!("{}", serde_json::to_string(r)?);
                    continue;
                }
                let mu = r.mu.map(|m| format!(" mu={m}")).unwrap_or_default();
                println!("{:<15} {}{mu} ({:.2}s)", r.status.to_string(), r.id, r.seconds);
                for ch in r.checks.iter().filter(|c| !c.passed) {
                    println!("    failed: {} {}", ch.name, ch.detail);
                }
                if let Some(m) = &r.message {
                    println!("    {m}");
                }
                for n in &r.notes {
                    println!("    note: {n}");
                }
            }
            Ok(reports.iter().all(|r| r.status == Status::Pass))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
