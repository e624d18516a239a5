//! Registry of reference computations with their expected results.

use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::exact::{parse_poly_in, MonomialOrdering, ParamPoly};
use crate::groebner::{buchberger_with, ideal_equal, no_real_root_quadratic, Budget, GroebnerBasis, GroebnerError};
use crate::input::parse_equation;
use crate::variational::{eta345_closed, eta_sequence, EtaOptions, EtaSequence, SymbolicBreakLinear, VariationalError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExpectedKind {
    IdealEquality,
    EtaMembership,
    MuValue,
    NoRealRoot,
}

impl fmt::Display for ExpectedKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExpectedKind::IdealEquality => "ideal-equality",
            ExpectedKind::EtaMembership => "eta-membership",
            ExpectedKind::MuValue => "mu-value",
            ExpectedKind::NoRealRoot => "no-real-root",
        })
    }
}

/// One expected artifact of a branch.
#[derive(Clone, Debug)]
pub enum Expect {
    /// `G_level` equals the ideal of `gens`; with `strict`, `G_{level-1}` does not.
    Basis { level: usize, gens: Vec<String>, strict: bool },
    /// `G_level = <1>` while `G_{level-1}` is proper.
    Trivial { level: usize },
    /// `eta_level - value` lies in `G_{level-1}`, or in the ideal of `modulo` when given.
    EtaMember { level: usize, value: String, modulo: Option<Vec<String>> },
}

#[derive(Clone, Debug)]
pub struct Branch {
    pub label: String,
    /// Equation file text.
    pub equation: String,
    pub k_max: usize,
    pub expects: Vec<Expect>,
}

#[derive(Clone, Debug)]
pub enum Template {
    Branches(Vec<Branch>),
    /// Closed-form `eta_3..eta_5` with a symbolic breakpoint.
    SymbolicBreak,
}

#[derive(Clone, Debug)]
pub struct CaseRecord {
    pub id: String,
    pub description: String,
    pub kind: ExpectedKind,
    /// Expected maximal multiplicity over the class.
    pub mu: Option<usize>,
    pub template: Template,
    /// Excluded from the default `--all` run.
    pub heavy: bool,
    /// Corrections applied to the reference data.
    pub notes: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    SkippedBudget,
    Error,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::SkippedBudget => "SKIPPED-BUDGET",
            Status::Error => "ERROR",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub id: String,
    pub kind: ExpectedKind,
    pub status: Status,
    pub mu: Option<usize>,
    pub checks: Vec<CheckResult>,
    pub seconds: f64,
    pub message: Option<String>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub ordering: MonomialOrdering,
    /// Per-case wall-clock limit.
    pub budget: Option<Duration>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { ordering: MonomialOrdering::grevlex(), budget: None }
    }
}

fn strs(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn basis(level: usize, gens: &[&str], strict: bool) -> Expect {
    Expect::Basis { level, gens: strs(gens), strict }
}

fn member(level: usize, value: &str, modulo: Option<&[&str]>) -> Expect {
    Expect::EtaMember { level, value: value.to_string(), modulo: modulo.map(strs) }
}

fn branch(label: &str, equation: String, k_max: usize, expects: Vec<Expect>) -> Branch {
    Branch { label: label.to_string(), equation, k_max, expects }
}

fn case(id: &str, description: &str, kind: ExpectedKind, mu: Option<usize>, branches: Vec<Branch>) -> CaseRecord {
    CaseRecord {
        id: id.to_string(),
        description: description.to_string(),
        kind,
        mu,
        template: Template::Branches(branches),
        heavy: false,
        notes: Vec::new(),
    }
}

/// `slopes=...` list over a uniform grid.
fn pl(intercept: &str, slopes: &[&str]) -> String {
    format!("pl: intercept={intercept}; slopes={}", slopes.join(", "))
}

const POLY_B22: &str = "a + 2*b*t + 3*c*t^2";
const POLY_A22: &str = "d + 2*e*t + 3*f*t^2";
const POLY_A23: &str = "d + 2*e*t + 3*f*t^2 + 4*g*t^3";

const CUBIC_POLY_23_G7: &[&str] = &[
    "a + b + c",
    "g + f + e + d",
    "1287*g*f*c + 1482*g^2*c + 858*g*e*c - 2*g*b^2*c",
    "-7*e*c + 7*f*b + 14*g*b + 9*g*c",
    "39*g^2*b*c - 7*g*c*b^3",
    "3*g*c^2 + 2*g*b*c",
    "-3*g*c*b^3 + 13*e*g*b*c",
];

const QUARTIC_PL_23_G9: &[&str] = &[
    "66735388183208154600960*f^4+5829122567397869818848*f^3-68783721774316079552*f*e+139990051412348601632*f^2+1344723268054007200*e+146583972817817393*f",
    "17101027722240*e*f^2-5269542106752*f^3+733610765888*f*e-233959770968*f^2-6125396800*e+1693244383*f",
    "8*e*b-e",
    "82432*e^2-17024*f*e-1904*f^2+920*e-269*f",
    "8*f*b-f",
    "2*g+6*e+f",
    "4*a+8*b+1",
    "10368*k+32*e-11*f",
    "f+6*e+2*d",
];

const QUARTIC_PL_23_ETA10: &str = "-104057406529615499/780994714281201717844377600*f^3 - 867941774841100820209033/96522790757355293736025622524723200*f*e + 1666102537252531452515843/140396786556153154525128178217779200*f^2 + 2196152718747243263819885/206810570805324733709188812087754752*e - 2900881012686053802785600993/951328625704493775062268535603671859200*f";

const QUARTIC_POLY_1N5_G9: &[&str] = &[
    "37511692566915157189513021571250141246445562631168000*a+76954078025109319792419383346327250*g^4*f+6849063961008228076202649414049259748983323392*f*g+192385195062773299481048458365818125*g^5+17122659902520570190506623535123149372458308480*g^2",
    "812753338949828405772782134043753060339653857008640*b-3039686081991818131800565642179926375*g^4+6396626065376256805845080981938604767430030478336*g",
    "12699270921091068840199720844433641567807091515760*c+2539854184218213768039944168886728313561418303152*f+423247429138101258858306608404799875*g^4+4341516136354618897336295790080428452939652335036*g",
    "496186409615279857004140496974208217545576225280*d-595423691538335828404968596369049861054691470336*f-38477039012554659896209691673163625*g^4-1028512938658225137299402571203191057331286500736*g",
    "744279614422919785506210745461312326318364337920*e+1488559228845839571012421490922624652636728675840*f+38477039012554659896209691673163625*g^4+2020885757888784851307683565151607492422438951296*g",
    "455446932871017250994724610810483152793296813865452398540570112*f^2+2277234664355086254973623054052415763966484069327261992702850560*f*g-49539000048633777493317082388741947622188883125*g^5+2845280986013026886327275526892991130747287056580695907322835840*g^2",
    "3984808136948929447103185415887785672672861696*g^3-14218838340357434859762303459719245720157600157874298880000+38477039012554659896209691673163625*g^6",
];

const QUARTIC_PL_1N4_G8: &[&str] = &[
    "24301478794941*a*d^2-5170471968081920*c-6997968367619776*d",
    "348941857826215204551*d^3-500251867306017904135800*a*d+62937496133967787727964160",
    "86251*a^2-122304*c-7280*d",
    "690*a*c-519*a*d+125456",
    "61144830207333600*c^2-6622547301720987*d^2+3643254234403888940*a",
    "-302960854428691360*a-280441397922231*d^2+3057241510366680*d*c",
    "7841*e-19320*c+6691*d",
    "23523*b+115712*c+7261*d",
    "116632*c+23523*f+6569*d",
];

const QUARTIC_PL_1N4_ETA9: &str =
    "2426539331050271747/36743835937950792000*d - 322603494879515897/3674383593795079200*c";

const QUARTIC_PL_22_AT_37_G7: &[&str] = &[
    "81486729*a + 5324000*f^2",
    "190135701*b - 3327500*f^2",
    "6036054*c - 166375*f^2",
    "9027*d - 6836*f",
    "21063*e + 8810*f",
    "2013137500*f^3 - 9344599297047",
];

/// `G_5` of the symbolic-breakpoint class.
pub const SYMBOLIC_BREAK_G5: &[&str] = &[
    "a*b - a*d - 108",
    "36*c^2 + 6*c*d + 30*b*c + b*d + 7*b^2 + d^2",
    "2*a*c + 108*h + a*d + 36",
    "3*b*h - 3*d*h + b + 6*c + 2*d",
    "-5*d - 24*c + 9*d*h + 18*c*h - 7*b",
    "3*h^2 + 1 - 3*h",
];

fn cubic_poly_1n_a(n: usize) -> String {
    // a + b s + c s^2 + d s^3 + (2t - 1)(e + f s + g s^2 + h s^3), s = t^2 - t
    let order = ["a", "b", "e", "f", "c", "g", "d", "h"];
    let kept = &order[..n + 1];
    let even = [("a", ""), ("b", "*(t^2 - t)"), ("c", "*(t^2 - t)^2"), ("d", "*(t^2 - t)^3")];
    let odd = [("e", ""), ("f", "*(t^2 - t)"), ("g", "*(t^2 - t)^2"), ("h", "*(t^2 - t)^3")];
    let mut parts: Vec<String> =
        even.iter().filter(|(v, _)| kept.contains(v)).map(|(v, s)| format!("{v}{s}")).collect();
    let odd_parts: Vec<String> =
        odd.iter().filter(|(v, _)| kept.contains(v)).map(|(v, s)| format!("{v}{s}")).collect();
    if !odd_parts.is_empty() {
        parts.push(format!("(2*t - 1)*({})", odd_parts.join(" + ")));
    }
    parts.join(" + ")
}

/// Every registered case, in a fixed order.
pub fn registry() -> Vec<CaseRecord> {
    use ExpectedKind::*;
    let mut out = Vec::new();

    out.push(case(
        "cubic-poly-22",
        "cubic, B and A quadratic polynomials",
        IdealEquality,
        Some(4),
        vec![branch(
            "main",
            format!("family: cubic\nA: {POLY_A22}\nB: {POLY_B22}\n"),
            6,
            vec![
                basis(4, &["e*c - f*b", "a + b + c", "f + e + d"], true),
                basis(6, &["e*c - f*b", "a + b + c", "f + e + d"], false),
            ],
        )],
    ));
    out.push(case(
        "cubic-pl-22",
        "cubic, B and A piecewise linear with two segments",
        IdealEquality,
        Some(4),
        vec![branch(
            "main",
            format!("family: cubic\nA: {}\nB: {}\n", pl("e", &["d", "f"]), pl("b", &["a", "c"])),
            6,
            vec![
                basis(4, &["c*e - f*b", "8*b + c + 3*a", "f + 3*d + 8*e"], true),
                basis(6, &["c*e - f*b", "8*b + c + 3*a", "f + 3*d + 8*e"], false),
            ],
        )],
    ));
    out.push(case(
        "cubic-poly-23",
        "cubic, B quadratic and A cubic polynomial",
        IdealEquality,
        Some(8),
        vec![
            branch("main", format!("family: cubic\nA: {POLY_A23}\nB: {POLY_B22}\n"), 7, vec![basis(7, CUBIC_POLY_23_G7, false)]),
            branch(
                "gc nonzero",
                format!("family: cubic\nA: {POLY_A23}\nB: {POLY_B22}\nassume: w*g*c - 1\n"),
                8,
                vec![Expect::Trivial { level: 8 }],
            ),
        ],
    ));
    out.push(case(
        "cubic-pl-23",
        "cubic, B with two and A with three linear segments, B slope gap normalised to 1",
        IdealEquality,
        Some(8),
        vec![branch(
            "c - a = 1",
            format!("family: cubic\nA: {}\nB: {}\nassume: c - a - 1\n", pl("e", &["d", "f", "g"]), pl("b", &["a", "c"])),
            8,
            vec![basis(8, &["4*a + 8*b + 1", "d", "e", "4*c - 3 + 8*b", "f", "g"], true)],
        )],
    ));

    let poly_1n: [(&[&str], usize); 6] = [
        (&["a", "b"], 4),
        (&["a", "b"], 4),
        (&["a", "b", "c"], 5),
        (&["a", "b", "c"], 5),
        (&["a", "b", "c", "d"], 10),
        (&["a", "b", "c", "d"], 11),
    ];
    for (i, (gens, level)) in poly_1n.iter().enumerate() {
        let n = i + 2;
        let mut c = case(
            &format!("cubic-poly-1n-{n}"),
            &format!("cubic, B = 2t - 1 and A a polynomial of degree {n}"),
            IdealEquality,
            Some(*level),
            vec![branch(
                "main",
                format!("family: cubic\nA: {}\nB: 2*t - 1\n", cubic_poly_1n_a(n)),
                *level,
                vec![basis(*level, gens, true)],
            )],
        );
        c.heavy = n >= 6;
        out.push(c);
    }

    let pl_1n: [(&[&str], usize); 6] = [
        (&["a - c", "c + 2*b"], 4),
        (&["a - d", "c + 2*d + 6*b"], 4),
        (&["a - e", "4*b + d + e", "c - d"], 5),
        (&["a - f", "10*b + d + 2*e + 2*f", "c - e"], 5),
        (&["a - g", "6*b + e + f + g", "c - f", "d - e"], 10),
        (&["a - h", "14*b + e + 2*f + 2*g + 2*h", "c - g", "d - f"], 11),
    ];
    let slope_names = ["a", "c", "d", "e", "f", "g", "h"];
    for (i, (gens, level)) in pl_1n.iter().enumerate() {
        let n = i + 2;
        let mut c = case(
            &format!("cubic-pl-1n-{n}"),
            &format!("cubic, B = 2t - 1 and A piecewise linear with {n} equal segments"),
            IdealEquality,
            Some(*level),
            vec![branch(
                "main",
                format!("family: cubic\nA: {}\nB: 2*t - 1\n", pl("b", &slope_names[..n])),
                *level,
                vec![basis(*level, gens, true)],
            )],
        );
        c.heavy = n >= 6;
        out.push(c);
    }

    out.push(case(
        "quartic-poly-22",
        "quartic, B and A quadratic polynomials",
        IdealEquality,
        Some(8),
        vec![branch(
            "main",
            format!("family: quartic\nA: {POLY_A22}\nB: {POLY_B22}\n"),
            8,
            vec![
                basis(7, &["108*a - 11*e^2", "36*b + 11*e^2", "54*c - 11*e^2", "d + e", "11*e^3 - 3240", "f"], false),
                member(8, "-11552/626535*e^2", None),
                Expect::Trivial { level: 8 },
            ],
        )],
    ));
    out.push(case(
        "quartic-pl-22",
        "quartic, B and A piecewise linear with two segments",
        IdealEquality,
        Some(8),
        vec![branch(
            "main",
            format!("family: quartic\nA: {}\nB: {}\n", pl("e", &["d", "f"]), pl("b", &["a", "c"])),
            8,
            vec![
                basis(7, &["144*a + 7*f^2", "576*b - 7*f^2", "144*c - 7*f^2", "-f + d", "f + 2*e", "-27648 + 7*f^3"], false),
                member(8, "-2041/498960*f^2", None),
                Expect::Trivial { level: 8 },
            ],
        )],
    ));
    out.push(case(
        "quartic-pl-22-at-3/7",
        "quartic, two linear segments joined at t = 3/7",
        EtaMembership,
        Some(8),
        vec![branch(
            "main",
            format!(
                "family: quartic\nA: {}; breaks=3/7\nB: {}; breaks=3/7\n",
                pl("e", &["d", "f"]),
                pl("b", &["a", "c"])
            ),
            8,
            vec![
                member(8, "-652948208/152171939367*f^2", Some(QUARTIC_PL_22_AT_37_G7)),
                basis(7, QUARTIC_PL_22_AT_37_G7, false),
                Expect::Trivial { level: 8 },
            ],
        )],
    ));
    let q23 = case(
        "quartic-poly-23",
        "quartic, B quadratic and A cubic polynomial",
        EtaMembership,
        Some(10),
        vec![
            branch(
                "main",
                format!("family: quartic\nA: {POLY_A23}\nB: {POLY_B22}\n"),
                5,
                vec![member(5, "1/1764*(g*c + 210)*(2*b + 3*c)", None)],
            ),
            branch(
                "gc + 210 = 0",
                format!("family: quartic\nA: {POLY_A23}\nB: {POLY_B22}\nassume: g*c + 210\n"),
                10,
                vec![Expect::Trivial { level: 5 }],
            ),
            branch(
                "2b + 3c = 0",
                format!("family: quartic\nA: {POLY_A23}\nB: {POLY_B22}\nassume: 2*b + 3*c\n"),
                10,
                vec![Expect::Trivial { level: 10 }],
            ),
        ],
    );
    out.push(q23);
    let mut q_pl23 = case(
        "quartic-pl-23",
        "quartic, B with two and A with three linear segments",
        IdealEquality,
        Some(10),
        vec![
            branch(
                "c - a = 0",
                format!("family: quartic\nA: {}\nB: {}\nassume: c - a\n", pl("e", &["d", "f", "g"]), pl("b", &["a", "c"])),
                5,
                vec![
                    basis(4, &["6*e*b + f*b + 2*d*b + 81", "c + 2*b", "3*f + 18*e + 5*d + g", "2*b + a"], false),
                    Expect::Trivial { level: 5 },
                ],
            ),
            branch(
                "c - a = 1",
                format!(
                    "family: scaled-quartic\nlead: k\nA: {}\nB: {}\nassume: c - a - 1\n",
                    pl("e", &["d", "f", "g"]),
                    pl("b", &["a", "c"])
                ),
                10,
                vec![
                    basis(9, QUARTIC_PL_23_G9, false),
                    member(10, QUARTIC_PL_23_ETA10, None),
                    basis(10, &["g", "4*a + 8*b + 1", "k", "d", "e", "f"], true),
                ],
            ),
        ],
    );
    q_pl23.notes.push("the reference prints 4a + 8b + 5; eta_2 = 0 with c - a = 1 forces 4a + 8b + 1".into());
    out.push(q_pl23);

    let qp_1n: [(&str, &[&str], usize); 3] = [
        ("b + 2*c*t + 3*d*t^2", &["k", "b + c", "d"], 5),
        ("b + 2*c*t + 3*d*t^2 + 4*e*t^3", &["k", "b + c - e", "d + 2*e"], 5),
        ("b + 2*c*t + 3*d*t^2 + 4*e*t^3 + 5*f*t^4", &["k", "b + c - e", "d + 2*e", "f"], 9),
    ];
    for (i, (a, gens, level)) in qp_1n.into_iter().enumerate() {
        let n = i + 2;
        out.push(case(
            &format!("quartic-poly-1n-{n}"),
            &format!("quartic with free z^4 coefficient k, B = 2t - 1 and A of degree {n}"),
            IdealEquality,
            Some(level),
            vec![branch(
                "main",
                format!("family: scaled-quartic\nlead: k\nA: {a}\nB: 2*t - 1\n"),
                level,
                vec![basis(level, gens, true)],
            )],
        ));
    }
    let mut qp5 = case(
        "quartic-poly-1n-5",
        "quartic, B = a(1 - 2t) and A = b + ct + ... + gt^5",
        IdealEquality,
        Some(10),
        vec![branch(
            "main",
            "family: quartic\nA: b + c*t + d*t^2 + e*t^3 + f*t^4 + g*t^5\nB: a - 2*a*t\n".to_string(),
            10,
            vec![basis(9, QUARTIC_POLY_1N5_G9, true), Expect::Trivial { level: 10 }],
        )],
    );
    qp5.heavy = true;
    qp5.notes.push("the reference basis is listed as the one reducing eta_10, so it is compared with G_9".into());
    out.push(qp5);

    out.push(case(
        "quartic-pl-1n-2",
        "quartic, B = a(2t - 1) and A with two linear segments",
        IdealEquality,
        Some(5),
        vec![branch(
            "main",
            format!("family: quartic\nA: {}\nB: -a + 2*a*t\n", pl("c", &["b", "d"])),
            5,
            vec![
                basis(4, &["144 + a*d + 2*a*c", "8*c + d + 3*b"], false),
                member(5, "a/6", None),
                Expect::Trivial { level: 5 },
            ],
        )],
    ));
    out.push(case(
        "quartic-pl-1n-3",
        "quartic, B = a(2t - 1) and A with three linear segments",
        IdealEquality,
        Some(5),
        vec![branch(
            "main",
            format!("family: quartic\nA: {}\nB: -a + 2*a*t\n", pl("c", &["b", "d", "e"])),
            5,
            vec![
                basis(4, &["a*d + 6*a*c + 2*a*b - 81", "18*c + 3*d + 5*b + e"], false),
                member(5, "2*a/9", None),
                Expect::Trivial { level: 5 },
            ],
        )],
    ));
    out.push(case(
        "quartic-pl-1n-4",
        "quartic, B = a(2t - 1) and A with four linear segments",
        IdealEquality,
        Some(9),
        vec![branch(
            "main",
            format!("family: quartic\nA: {}\nB: -a + 2*a*t\n", pl("c", &["b", "d", "e", "f"])),
            9,
            vec![
                basis(8, QUARTIC_PL_1N4_G8, false),
                member(9, QUARTIC_PL_1N4_ETA9, None),
                Expect::Trivial { level: 9 },
            ],
        )],
    ));
    out.push(case(
        "quartic-pl-1n-5",
        "quartic with free z^4 coefficient k, B = 2t - 1 and A with five linear segments",
        IdealEquality,
        Some(10),
        vec![branch(
            "main",
            format!("family: scaled-quartic\nlead: k\nA: {}\nB: 2*t - 1\n", pl("c", &["b", "d", "e", "f", "g"])),
            10,
            vec![basis(10, &["k", "e + 10*c + 2*d + 2*g", "b - g", "-d + f"], true)],
        )],
    ));
    out.push(CaseRecord {
        id: "quartic-pl-h".into(),
        description: "quartic, B linear and A two linear segments joined at a free point h".into(),
        kind: NoRealRoot,
        mu: Some(5),
        template: Template::SymbolicBreak,
        heavy: false,
        notes: Vec::new(),
    });
    out
}

pub fn find(id: &str) -> Option<CaseRecord> {
    registry().into_iter().find(|c| c.id == id)
}

fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> CheckResult {
    CheckResult { name: name.into(), passed, detail: detail.into() }
}

enum Stop {
    Budget,
    Error(String),
}

impl From<VariationalError> for Stop {
    fn from(e: VariationalError) -> Self {
        match e {
            VariationalError::Groebner(GroebnerError::BudgetExceeded(_)) => Stop::Budget,
            e => Stop::Error(e.to_string()),
        }
    }
}

impl From<GroebnerError> for Stop {
    fn from(e: GroebnerError) -> Self {
        match e {
            GroebnerError::BudgetExceeded(_) => Stop::Budget,
            e => Stop::Error(e.to_string()),
        }
    }
}

impl From<crate::Error> for Stop {
    fn from(e: crate::Error) -> Self {
        Stop::Error(e.to_string())
    }
}

/// Ideal of `gens` together with `extra`, over the symbols of `like`.
fn ideal_of(gens: &[String], extra: &[ParamPoly], like: &GroebnerBasis, budget: &Budget) -> Result<GroebnerBasis, Stop> {
    let mut polys = gens.iter().map(|g| parse_poly_in(g, like.symbols())).collect::<Result<Vec<ParamPoly>, _>>()?;
    polys.extend(extra.iter().cloned());
    Ok(buchberger_with(&polys, like.ordering(), budget)?)
}

fn run_branch(b: &Branch, opts: &RunOptions, budget: &Budget, checks: &mut Vec<CheckResult>) -> Result<Option<usize>, Stop> {
    let eq = parse_equation(&b.equation).map_err(|e| Stop::Error(e.to_string()))?;
    let eopts = EtaOptions { ordering: opts.ordering.clone(), budget: *budget, ..EtaOptions::default() };
    let seq: EtaSequence = eta_sequence(&eq, b.k_max, &eopts)?;
    let mut mu = None;
    for e in &b.expects {
        match e {
            Expect::Basis { level, gens, strict } => {
                let target = ideal_of(gens, eq.assumptions(), seq.basis(1), budget)?;
                let got = seq.basis(*level);
                let eq_now = ideal_equal(got, &target)?;
                let mut ok = eq_now;
                let mut detail = format!("G_{level} = {got}");
                if *strict {
                    let before = ideal_equal(seq.basis(level - 1), &target)?;
                    ok &= !before;
                    if before {
                        detail += &format!("; G_{} already equal", level - 1);
                    }
                    if ok {
                        mu = Some(*level);
                    }
                }
                checks.push(check(format!("{}: G_{level} ideal-equal", b.label), ok, detail));
            }
            Expect::Trivial { level } => {
                let ok = seq.basis(*level).is_trivial() && !seq.basis(level - 1).is_trivial();
                if ok {
                    mu = Some(*level);
                }
                checks.push(check(
                    format!("{}: first trivial basis is G_{level}", b.label),
                    ok,
                    match seq.trivial_at() {
                        Some(j) => format!("observed G_{j}"),
                        None => format!("no trivial basis up to G_{}", seq.last()),
                    },
                ));
            }
            Expect::EtaMember { level, value, modulo } => {
                let v = parse_poly_in(value, eq.symbols())?;
                let eta = seq.eta(*level);
                let diff = eta - &v;
                let ok = match modulo {
                    Some(gens) => ideal_of(gens, eq.assumptions(), seq.basis(1), budget)?.contains(&diff),
                    None => seq.basis(level - 1).contains(&diff),
                };
                let shown = seq.basis(level - 1).reduce(eta);
                checks.push(check(format!("{}: eta_{level} membership", b.label), ok, format!("eta_{level} = {shown}")));
            }
        }
    }
    Ok(mu)
}

fn run_symbolic_break(opts: &RunOptions, budget: &Budget, checks: &mut Vec<CheckResult>) -> Result<Option<usize>, Stop> {
    let spec = SymbolicBreakLinear::standard();
    let etas = eta345_closed(&spec);
    let g5 = buchberger_with(&etas.to_vec(), &opts.ordering, budget)?;
    let quad = parse_poly_in("3*h^2 - 3*h + 1", spec.symbols())?;
    let listed = g5.primitive_generators().contains(&quad) || g5.primitive_generators().contains(&-&quad);
    checks.push(check("G_5 contains 3h^2 - 3h + 1", listed, format!("G_5 = {g5}")));
    let target = ideal_of(&strs(SYMBOLIC_BREAK_G5), &[], &g5, budget)?;
    checks.push(check("G_5 ideal-equal", ideal_equal(&g5, &target)?, ""));
    let root = no_real_root_quadratic(&quad)?;
    checks.push(check("3h^2 - 3h + 1 has no real root", root, "discriminant -3"));
    let proper = !g5.is_trivial();
    checks.push(check("G_5 is proper", proper, ""));
    Ok((listed && root).then_some(5))
}

/// Runs one case and checks every expected artifact.
pub fn run_case(case: &CaseRecord, opts: &RunOptions) -> CaseReport {
    let start = Instant::now();
    let budget = Budget::new(opts.budget);
    let mut checks = Vec::new();
    let outcome = match &case.template {
        Template::Branches(bs) => {
            let mut mu = None;
            let mut res = Ok(None);
            for b in bs {
                match run_branch(b, opts, &budget, &mut checks) {
                    Ok(m) => mu = mu.max(m),
                    Err(e) => {
                        res = Err(e);
                        break;
                    }
                }
            }
            res.map(|_: Option<usize>| mu)
        }
        Template::SymbolicBreak => run_symbolic_break(opts, &budget, &mut checks),
    };
    let (status, mu, message) = match outcome {
        Ok(mu) => {
            let all = checks.iter().all(|c| c.passed);
            let mu_ok = case.mu.is_none() || mu == case.mu;
            if !mu_ok {
                checks.push(check("mu", false, format!("expected {:?}, derived {:?}", case.mu, mu)));
            }
            (if all && mu_ok { Status::Pass } else { Status::Fail }, mu, None)
        }
        Err(Stop::Budget) => (Status::SkippedBudget, None, Some(format!("over budget after {:.1?}", start.elapsed()))),
        Err(Stop::Error(m)) => (Status::Error, None, Some(m)),
    };
    CaseReport {
        id: case.id.clone(),
        kind: case.kind,
        status,
        mu,
        checks,
        seconds: start.elapsed().as_secs_f64(),
        message,
        notes: case.notes.clone(),
    }
}

impl CaseRecord {
    /// Equation texts of all branches, for display.
    pub fn equations(&self) -> Vec<(String, String)> {
        match &self.template {
            Template::Branches(bs) => bs.iter().map(|b| (b.label.clone(), b.equation.clone())).collect(),
            Template::SymbolicBreak => vec![(
                "main".into(),
                "B = a(2t - 1); A = bt + c on [0, h], dt + bh + c - dh on [h, 1]".into(),
            )],
        }
    }
}
