//! Exact rational scalars. Everything outside the `spectral` module computes
//! over `Rational`; floats never leak into the algebraic layers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, kept in lowest terms with positive
/// denominator (num-rational reduces on construction).
pub type Rational = BigRational;

/// Shorthand for small rational literals.
pub fn rat(num: i64, den: i64) -> Rational {
    assert!(den != 0, "zero denominator");
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for integer rationals.
pub fn rint(num: i64) -> Rational {
    Rational::from_integer(BigInt::from(num))
}

/// Parses "p/q" or a bare integer string. Signs on the numerator only.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let make_err = || Error::Parse(format!("cannot parse {s:?} as a rational (want \"p/q\" or \"p\")"));
    let (num_str, den_str) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num_str.parse().map_err(|_| make_err())?;
    let den: BigInt = den_str.parse().map_err(|_| make_err())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Prints integers bare and everything else as "p/q".
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn to_f64(r: &Rational) -> f64 {
    num_traits::ToPrimitive::to_f64(r).expect("rational out of f64 range")
}

pub fn factorial(k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=k {
        acc *= BigInt::from(i);
    }
    acc
}

/// Rising factorial (a)_m = a (a+1) ... (a+m-1).
pub fn pochhammer(a: &Rational, m: usize) -> Rational {
    let mut acc = Rational::one();
    for i in 0..m {
        acc *= a + Rational::from_integer(BigInt::from(i));
    }
    acc
}

/// Binomial coefficient as a big integer.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k.min(n - k) {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Integer power with rational base and unsigned exponent.
pub fn rat_pow(base: &Rational, exp: usize) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Guards mesh widths: h must be strictly positive.
pub fn check_mesh(h: &Rational) -> Result<()> {
    if h.is_positive() {
        Ok(())
    } else {
        Err(Error::InvalidMesh(format_rational(h)))
    }
}
