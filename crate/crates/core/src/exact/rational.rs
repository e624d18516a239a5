use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ExactError;

/// Exact rational scalar used throughout the symbolic pipeline.
///
/// `BigRational` keeps every value reduced with a positive denominator, so
/// the canonical-form invariant holds after any arithmetic.
pub type Rational = BigRational;

/// Builds the canonical fraction `n/d`.
pub fn rat_make(n: impl Into<BigInt>, d: impl Into<BigInt>) -> Result<Rational, ExactError> {
    let d = d.into();
    if d.is_zero() {
        return Err(ExactError::ZeroDenominator);
    }
    Ok(BigRational::new(n.into(), d))
}

/// Integer-valued rational.
pub fn rat_int(n: impl Into<BigInt>) -> Rational {
    BigRational::from_integer(n.into())
}

/// Shorthand for small literal fractions in code; panics on `d == 0`.
pub fn q(n: i64, d: i64) -> Rational {
    rat_make(n, d).expect("nonzero denominator")
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rational(s: &str) -> Result<Rational, ExactError> {
    let s = s.trim();
    let bad = || ExactError::BadRational(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            rat_make(n, d)
        }
        None => Ok(rat_int(s.parse::<BigInt>().map_err(|_| bad())?)),
    }
}

/// Nearest `f64`; exact for small fractions, otherwise correctly scaled even
/// when numerator and denominator individually overflow.
pub fn rat_to_f64(r: &Rational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let n = r.numer();
    let d = r.denom();
    let shift = n.bits() as i64 - d.bits() as i64;
    // bring both to ~60 significant bits before dividing
    let scale = 60 - shift;
    let (num, den) = if scale >= 0 {
        (n.abs() << (scale as usize), d.clone())
    } else {
        (n.abs(), d << ((-scale) as usize))
    };
    let v = (num / den).to_f64().unwrap_or(f64::INFINITY) * 2f64.powi(-(scale as i32));
    if r.is_negative() {
        -v
    } else {
        v
    }
}

/// Best rational approximation with bounded denominator, via continued fractions.
pub fn rat_from_f64(x: f64, max_den: u64) -> Rational {
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut v = x;
    for _ in 0..64 {
        let a = v.floor();
        let ai = BigInt::from(a as i64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        if k2 > BigInt::from(max_den) {
            break;
        }
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        let frac = v - a;
        if frac.abs() < 1e-15 {
            break;
        }
        v = 1.0 / frac;
    }
    if k1.is_zero() {
        return rat_int(x.round() as i64);
    }
    BigRational::new(h1, k1)
}
