//! The universal Clifford algebra Cl(0,n) over exact rationals.
//!
//! Generators e_1..e_n obey e_j e_k + e_k e_j = -2 delta_jk (so e_j^2 = -1).
//! A basis blade e_J, J subseteq {1..n}, is stored as a bitmask with bit j-1
//! for e_j; a multivector is a sparse blade -> coefficient map. Products are
//! computed by counting the transpositions needed to interleave the two sorted
//! index sequences, with one extra -1 per repeated index.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};
use num_traits::{One, Zero};

/// Blades are bitmasks in one machine word; dimensions beyond this are
/// rejected up front.
pub const MAX_DIM: usize = 12;

pub fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    if dim > MAX_DIM {
        return Err(Error::DimensionTooLarge(dim, MAX_DIM));
    }
    Ok(())
}

/// Basis blade e_J as a bitmask; bit j-1 set means index j is present.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Blade(u32);

impl Blade {
    pub const SCALAR: Blade = Blade(0);

    pub fn from_mask(mask: u32, dim: usize) -> Result<Blade> {
        check_dim(dim)?;
        if mask >> dim != 0 {
            let index = 32 - mask.leading_zeros() as usize;
            return Err(Error::IndexOutOfRange { index, dim });
        }
        Ok(Blade(mask))
    }

    /// Builds e_{j1} e_{j2} ... from strictly increasing 1-based indices.
    pub fn from_indices(indices: &[usize], dim: usize) -> Result<Blade> {
        check_dim(dim)?;
        let mut mask = 0u32;
        let mut prev = 0usize;
        for &j in indices {
            if j == 0 || j > dim {
                return Err(Error::IndexOutOfRange { index: j, dim });
            }
            if j <= prev {
                return Err(Error::InvalidArgument(format!(
                    "blade indices must be strictly increasing, got {indices:?}"
                )));
            }
            prev = j;
            mask |= 1 << (j - 1);
        }
        Ok(Blade(mask))
    }

    pub fn mask(&self) -> u32 {
        self.0
    }

    /// 1-based indices in ascending order.
    pub fn indices(&self) -> Vec<usize> {
        (1..=32).filter(|j| self.0 >> (j - 1) & 1 == 1).collect()
    }

    pub fn grade(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(&self, j: usize) -> bool {
        j >= 1 && self.0 >> (j - 1) & 1 == 1
    }
}

impl fmt::Display for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            write!(f, "1")
        } else {
            for j in self.indices() {
                write!(f, "e{j}")?;
            }
            Ok(())
        }
    }
}

/// Sign and resulting blade of e_J e_K.
///
/// Transposition count: pairs (j,k), j in J, k in K with j > k. Each index in
/// both J and K contributes one further factor -1 (e_j^2 = -1). Result blade
/// is the symmetric difference.
pub fn blade_product(j: Blade, k: Blade, dim: usize) -> Result<(i32, Blade)> {
    // Revalidate so raw masks cannot smuggle out-of-range indices.
    let j = Blade::from_mask(j.0, dim)?;
    let k = Blade::from_mask(k.0, dim)?;
    let mut swaps = 0u32;
    let mut a = j.0 >> 1;
    while a != 0 {
        swaps += (a & k.0).count_ones();
        a >>= 1;
    }
    let repeats = (j.0 & k.0).count_ones();
    let sign = if (swaps + repeats) % 2 == 0 { 1 } else { -1 };
    Ok((sign, Blade(j.0 ^ k.0)))
}

/// Sparse multivector: blade -> nonzero rational coefficient, keyed by blade
/// bitmask so iteration (and serialization) order is deterministic.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Multivector {
    dim: usize,
    terms: BTreeMap<Blade, Rational>,
}

impl Multivector {
    pub fn zero(dim: usize) -> Multivector {
        assert!(dim >= 1 && dim <= MAX_DIM, "dimension {dim} out of range");
        Multivector { dim, terms: BTreeMap::new() }
    }

    pub fn scalar(dim: usize, value: Rational) -> Multivector {
        let mut mv = Multivector::zero(dim);
        mv.add_term(Blade::SCALAR, value);
        mv
    }

    pub fn one(dim: usize) -> Multivector {
        Multivector::scalar(dim, Rational::one())
    }

    /// The generator e_j (1-based).
    pub fn basis_vector(dim: usize, j: usize) -> Result<Multivector> {
        let blade = Blade::from_indices(&[j], dim)?;
        let mut mv = Multivector::zero(dim);
        mv.add_term(blade, Rational::one());
        Ok(mv)
    }

    /// Grade-1 element sum_j coords[j-1] e_j.
    pub fn vector(coords: &[Rational]) -> Result<Multivector> {
        check_dim(coords.len())?;
        let mut mv = Multivector::zero(coords.len());
        for (i, c) in coords.iter().enumerate() {
            mv.add_term(Blade(1 << i), c.clone());
        }
        Ok(mv)
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (Blade, Rational)>) -> Multivector {
        let mut mv = Multivector::zero(dim);
        for (b, c) in terms {
            mv.add_term(b, c);
        }
        mv
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Blade, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, blade: Blade) -> Rational {
        self.terms.get(&blade).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scalar_part(&self) -> Rational {
        self.coeff(Blade::SCALAR)
    }

    pub fn is_scalar(&self) -> bool {
        self.terms.keys().all(|b| *b == Blade::SCALAR)
    }

    pub fn max_grade(&self) -> usize {
        self.terms.keys().map(|b| b.grade()).max().unwrap_or(0)
    }

    fn add_term(&mut self, blade: Blade, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(blade).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&blade);
        }
    }

    pub fn try_add(&self, other: &Multivector) -> Result<Multivector> {
        self.check_same_dim(other)?;
        let mut out = self.clone();
        for (b, c) in other.terms() {
            out.add_term(*b, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Multivector) -> Result<Multivector> {
        self.try_add(&other.neg())
    }

    /// Geometric product; order matters.
    pub fn try_mul(&self, other: &Multivector) -> Result<Multivector> {
        self.check_same_dim(other)?;
        let mut out = Multivector::zero(self.dim);
        for (bj, cj) in self.terms() {
            for (bk, ck) in other.terms() {
                let (sign, blade) = blade_product(*bj, *bk, self.dim)?;
                let mut c = cj * ck;
                if sign < 0 {
                    c = -c;
                }
                out.add_term(blade, c);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &Rational) -> Multivector {
        if factor.is_zero() {
            return Multivector::zero(self.dim);
        }
        Multivector {
            dim: self.dim,
            terms: self.terms.iter().map(|(b, c)| (*b, c * factor)).collect(),
        }
    }

    pub fn neg(&self) -> Multivector {
        Multivector {
            dim: self.dim,
            terms: self.terms.iter().map(|(b, c)| (*b, -c)).collect(),
        }
    }

    fn check_same_dim(&self, other: &Multivector) -> Result<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { left: self.dim, right: other.dim })
        }
    }

    /// JSON form: array of {"blade": [j..], "coeff": "p/q"}, ordered by blade
    /// bitmask.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(b, c)| json!({ "blade": b.indices(), "coeff": format_rational(c) }))
                .collect(),
        )
    }

    pub fn from_json(value: &Value, dim: usize) -> Result<Multivector> {
        check_dim(dim)?;
        let arr = value
            .as_array()
            .ok_or_else(|| Error::Parse("multivector JSON must be an array".into()))?;
        let mut mv = Multivector::zero(dim);
        for item in arr {
            let blade_val = item
                .get("blade")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("multivector term missing \"blade\" array".into()))?;
            let mut indices = Vec::with_capacity(blade_val.len());
            for v in blade_val {
                let j = v
                    .as_u64()
                    .ok_or_else(|| Error::Parse("blade indices must be positive integers".into()))?;
                indices.push(j as usize);
            }
            let coeff_str = item
                .get("coeff")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Parse("multivector term missing \"coeff\" string".into()))?;
            let blade = Blade::from_indices(&indices, dim)?;
            mv.add_term(blade, parse_rational(coeff_str)?);
        }
        Ok(mv)
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (b, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if *b == Blade::SCALAR {
                write!(f, "{}", format_rational(c))?;
            } else if c.is_one() {
                write!(f, "{b}")?;
            } else {
                write!(f, "({}){}", format_rational(c), b)?;
            }
        }
        Ok(())
    }
}

// Operator sugar for code paths where dimensions are known equal; use the
// try_* methods when mismatches must surface as errors.
impl Add for &Multivector {
    type Output = Multivector;
    fn add(self, rhs: &Multivector) -> Multivector {
        self.try_add(rhs).expect("dimension mismatch")
    }
}

impl Sub for &Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &Multivector) -> Multivector {
        self.try_sub(rhs).expect("dimension mismatch")
    }
}

impl Mul for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: &Multivector) -> Multivector {
        self.try_mul(rhs).expect("dimension mismatch")
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        Multivector::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rint};
    use proptest::prelude::*;

    /// Brute-force sign oracle: multiply blades as words of generators, sort
    /// by adjacent transpositions (each flips the sign), annihilate adjacent
    /// equal pairs with a -1 (e_j^2 = -1).
    fn oracle_product(j: &[usize], k: &[usize]) -> (i32, Vec<usize>) {
        let mut word: Vec<usize> = j.iter().chain(k.iter()).copied().collect();
        let mut sign = 1i32;
        loop {
            let mut changed = false;
            let mut i = 0;
            while i + 1 < word.len() {
                if word[i] == word[i + 1] {
                    word.drain(i..=i + 1);
                    sign = -sign;
                    changed = true;
                } else if word[i] > word[i + 1] {
                    word.swap(i, i + 1);
                    sign = -sign;
                    changed = true;
                } else {
                    i += 1;
                }
            }
            if !changed {
                return (sign, word);
            }
        }
    }

    #[test]
    fn product_matches_brute_force_oracle_exhaustively() {
        for dim in 1..=4usize {
            for jm in 0..(1u32 << dim) {
                for km in 0..(1u32 << dim) {
                    let j = Blade::from_mask(jm, dim).unwrap();
                    let k = Blade::from_mask(km, dim).unwrap();
                    let (sign, blade) = blade_product(j, k, dim).unwrap();
                    let (osign, oword) = oracle_product(&j.indices(), &k.indices());
                    assert_eq!(sign, osign, "sign mismatch at {jm:b} * {km:b}");
                    assert_eq!(blade.indices(), oword, "blade mismatch at {jm:b} * {km:b}");
                }
            }
        }
    }

    #[test]
    fn generator_products() {
        let dim = 3;
        let e1 = Blade::from_indices(&[1], dim).unwrap();
        let e2 = Blade::from_indices(&[2], dim).unwrap();
        assert_eq!(blade_product(e1, e1, dim).unwrap(), (-1, Blade::SCALAR));
        assert_eq!(
            blade_product(e1, e2, dim).unwrap(),
            (1, Blade::from_indices(&[1, 2], dim).unwrap())
        );
        assert_eq!(
            blade_product(e2, e1, dim).unwrap(),
            (-1, Blade::from_indices(&[1, 2], dim).unwrap())
        );
        let e23 = Blade::from_indices(&[2, 3], dim).unwrap();
        assert_eq!(blade_product(Blade::SCALAR, e23, dim).unwrap(), (1, e23));
    }

    #[test]
    fn anticommutation_exhaustive() {
        // e_j e_k + e_k e_j = -2 delta_jk for all j,k and all n <= 5.
        for dim in 1..=5usize {
            for j in 1..=dim {
                for k in 1..=dim {
                    let ej = Multivector::basis_vector(dim, j).unwrap();
                    let ek = Multivector::basis_vector(dim, k).unwrap();
                    let anti = &(&ej * &ek) + &(&ek * &ej);
                    let expect = if j == k {
                        Multivector::scalar(dim, rint(-2))
                    } else {
                        Multivector::zero(dim)
                    };
                    assert_eq!(anti, expect, "n={dim} j={j} k={k}");
                }
            }
        }
    }

    #[test]
    fn vector_squares_to_minus_norm() {
        let x = Multivector::vector(&[rint(1), rint(1)]).unwrap();
        assert_eq!(&x * &x, Multivector::scalar(2, rint(-2)));

        let y = Multivector::vector(&[rat(1, 2), rat(-2, 3), rint(3)]).unwrap();
        // -(1/4 + 4/9 + 9) = -349/36
        assert_eq!(&y * &y, Multivector::scalar(3, rat(-349, 36)));
    }

    #[test]
    fn addition_cancels_and_scales() {
        let e1 = Multivector::basis_vector(3, 1).unwrap();
        let sum = &e1 + &e1.neg();
        assert!(sum.is_zero());
        assert!(e1.scale(&Rational::zero()).is_zero());

        let e2 = Multivector::basis_vector(3, 2).unwrap();
        let s = &(&e1 + &e2) + &e2;
        assert_eq!(s.coeff(Blade::from_indices(&[2], 3).unwrap()), rint(2));
        assert_eq!(s.coeff(Blade::from_indices(&[1], 3).unwrap()), rint(1));
    }

    #[test]
    fn unit_acts_trivially() {
        let a = Multivector::from_terms(
            2,
            [
                (Blade::from_indices(&[1], 2).unwrap(), rat(2, 3)),
                (Blade::from_indices(&[1, 2], 2).unwrap(), rint(-5)),
            ],
        );
        let one = Multivector::one(2);
        assert_eq!(&a * &one, a);
        assert_eq!(&one * &a, a);
    }

    #[test]
    fn dimension_errors_surface() {
        let a = Multivector::one(2);
        let b = Multivector::one(3);
        assert!(matches!(a.try_mul(&b), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(
            Blade::from_indices(&[4], 3),
            Err(Error::IndexOutOfRange { index: 4, dim: 3 })
        ));
        assert!(matches!(check_dim(13), Err(Error::DimensionTooLarge(13, MAX_DIM))));
        assert!(Blade::from_indices(&[2, 1], 3).is_err());
    }

    #[test]
    fn json_round_trip_and_ordering() {
        let a = Multivector::from_terms(
            3,
            [
                (Blade::from_indices(&[1, 3], 3).unwrap(), rat(-7, 2)),
                (Blade::SCALAR, rint(4)),
                (Blade::from_indices(&[2], 3).unwrap(), rat(1, 3)),
            ],
        );
        let j = a.to_json();
        // Terms ordered by bitmask: scalar (0), e2 (0b10), e1e3 (0b101).
        let blades: Vec<Vec<u64>> = j
            .as_array()
            .unwrap()
            .iter()
            .map(|t| t["blade"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect())
            .collect();
        assert_eq!(blades, vec![vec![], vec![2], vec![1, 3]]);
        assert_eq!(Multivector::from_json(&j, 3).unwrap(), a);
    }

    fn small_multivector(dim: usize) -> impl Strategy<Value = Multivector> {
        prop::collection::vec((0..(1u32 << dim), -6i64..=6, 1i64..=4), 0..5).prop_map(move |terms| {
            Multivector::from_terms(
                dim,
                terms.into_iter().map(|(mask, num, den)| (Blade::from_mask(mask, dim).unwrap(), rat(num, den))),
            )
        })
    }

    proptest! {
        #[test]
        fn product_is_associative(a in small_multivector(4), b in small_multivector(4), c in small_multivector(4)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        }

        #[test]
        fn product_distributes(a in small_multivector(4), b in small_multivector(4), c in small_multivector(4)) {
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        }

        #[test]
        fn vectors_anticommute_to_scalar(xs in prop::collection::vec((-5i64..=5, 1i64..=3), 3),
                                         ys in prop::collection::vec((-5i64..=5, 1i64..=3), 3)) {
            let xr: Vec<Rational> = xs.iter().map(|&(n, d)| rat(n, d)).collect();
            let yr: Vec<Rational> = ys.iter().map(|&(n, d)| rat(n, d)).collect();
            let x = Multivector::vector(&xr).unwrap();
            let y = Multivector::vector(&yr).unwrap();
            let lhs = &(&x * &y) + &(&y * &x);
            let dot: Rational = xr.iter().zip(&yr).map(|(a, b)| a * b).sum();
            prop_assert_eq!(lhs, Multivector::scalar(3, -rint(2) * dot));
        }

        #[test]
        fn json_round_trip(a in small_multivector(3)) {
            prop_assert_eq!(Multivector::from_json(&a.to_json(), 3).unwrap(), a);
        }
    }
}
