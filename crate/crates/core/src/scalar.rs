//! Scalars: exact rationals by default, with a prime field for fast cross-checks.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Scalar = BigRational;

/// The characteristic of the optional prime field.
pub const PRIME: u32 = 32003;

/// Environment variable selecting the scalar used for rank computations.
pub const SCALAR_ENV: &str = "OPERAD_FORGE_SCALAR";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarKind {
    Rational,
    Fp32003,
}

impl ScalarKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "rational" => Some(ScalarKind::Rational),
            "fp32003" => Some(ScalarKind::Fp32003),
            _ => None,
        }
    }

    /// Reads [`SCALAR_ENV`]; unset means rational.
    pub fn from_env() -> std::result::Result<Self, String> {
        match std::env::var(SCALAR_ENV) {
            Ok(v) => Self::parse(&v)
                .ok_or_else(|| format!("{SCALAR_ENV}={v}: expected rational|fp32003")),
            Err(_) => Ok(ScalarKind::Rational),
        }
    }
}

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn sign(odd: bool) -> Scalar {
    if odd {
        -Scalar::one()
    } else {
        Scalar::one()
    }
}

/// `"num/den"`, or just `"num"` for integers.
pub fn format(x: &Scalar) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse(s: &str) -> Option<Scalar> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n.trim().parse().ok()?, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// Reduction of a rational into F_p. Fails when p divides the denominator.
pub fn to_fp(x: &Scalar) -> Option<u32> {
    let p = BigInt::from(PRIME);
    let n = (x.numer() % &p + &p) % &p;
    let d = (x.denom() % &p + &p) % &p;
    let d = d.to_u64()?;
    if d == 0 {
        return None;
    }
    let n = n.to_u64()?;
    Some(((n * inv_mod(d as u32) as u64) % PRIME as u64) as u32)
}

pub fn inv_mod(a: u32) -> u32 {
    pow_mod(a, PRIME - 2)
}

fn pow_mod(b: u32, mut e: u32) -> u32 {
    let p = PRIME as u64;
    let mut acc = 1u64;
    let mut base = b as u64 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc as u32
}

pub fn is_unit(x: &Scalar) -> bool {
    x.abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_and_parse() {
        let x = BigRational::new(BigInt::from(-3), BigInt::from(6));
        assert_eq!(format(&x), "-1/2");
        assert_eq!(parse("-1/2"), Some(x));
        assert_eq!(parse("7"), Some(int(7)));
        assert_eq!(parse("1/0"), None);
    }

    #[test]
    fn fp_reduction() {
        assert_eq!(to_fp(&int(-1)), Some(PRIME - 1));
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!((to_fp(&half).unwrap() as u64 * 2) % PRIME as u64, 1);
        assert_eq!(inv_mod(1), 1);
    }
}
