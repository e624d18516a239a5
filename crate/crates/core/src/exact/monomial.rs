use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

/// Dense exponent vector over a fixed symbol list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Monomial(SmallVec<[u16; 12]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn var(nvars: usize, index: usize, exp: u16) -> Self {
        let mut m = Self::one(nvars);
        m.0[index] = exp;
        m
    }

    pub fn from_exponents(exps: &[u16]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn exponents_mut(&mut self) -> &mut [u16] {
        &mut self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Bit `i` set iff variable `i` (mod 64) occurs; a cheap divisibility prefilter.
    pub fn support_mask(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .fold(0, |m, (i, _)| m | (1u64 << (i % 64)))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OrderKind {
    Lex,
    #[serde(rename = "grlex")]
    GrLex,
    #[default]
    #[serde(rename = "grevlex")]
    GrevLex,
}

impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderKind::Lex => "lex",
            OrderKind::GrLex => "grlex",
            OrderKind::GrevLex => "grevlex",
        })
    }
}

impl std::str::FromStr for OrderKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "lex" => Ok(OrderKind::Lex),
            "grlex" => Ok(OrderKind::GrLex),
            "grevlex" => Ok(OrderKind::GrevLex),
            other => Err(format!("unknown monomial ordering `{other}`")),
        }
    }
}

/// Monomial ordering: a kind plus a variable priority.
///
/// `priority[0]` is the index of the largest variable. With no explicit
/// priority the symbol list order (alphabetical) is used, so `a > b > c ...`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct MonomialOrdering {
    pub kind: OrderKind,
    pub priority: Option<Vec<usize>>,
}

impl MonomialOrdering {
    pub fn new(kind: OrderKind) -> Self {
        MonomialOrdering { kind, priority: None }
    }

    pub fn lex() -> Self {
        Self::new(OrderKind::Lex)
    }

    pub fn grevlex() -> Self {
        Self::new(OrderKind::GrevLex)
    }

    pub fn with_priority(kind: OrderKind, priority: Vec<usize>) -> Self {
        MonomialOrdering { kind, priority: Some(priority) }
    }

    #[inline]
    fn exp(&self, m: &Monomial, rank: usize) -> u16 {
        match &self.priority {
            Some(p) => m.0[p[rank]],
            None => m.0[rank],
        }
    }

    /// Compares two monomials of equal length.
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let n = a.0.len();
        let lex = || {
            for r in 0..n {
                match self.exp(a, r).cmp(&self.exp(b, r)) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        };
        match self.kind {
            OrderKind::Lex => lex(),
            OrderKind::GrLex => a.degree().cmp(&b.degree()).then_with(lex),
            OrderKind::GrevLex => a.degree().cmp(&b.degree()).then_with(|| {
                for r in (0..n).rev() {
                    match self.exp(a, r).cmp(&self.exp(b, r)) {
                        Ordering::Equal => continue,
                        o => return o.reverse(),
                    }
                }
                Ordering::Equal
            }),
        }
    }
}
