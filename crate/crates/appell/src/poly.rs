//! Clifford-vector-valued polynomials R[x_1..x_n] (x) Cl(0,n).
//!
//! Monomial keys are multi-indices ordered graded-lexicographically, so all
//! iteration and serialization is deterministic. Coefficients are full
//! multivectors; scalar monomials commute with everything, the Clifford parts
//! multiply in order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::clifford::{check_dim, Multivector};
use crate::error::{Error, Result};
use crate::rational::{check_mesh, factorial, rat_pow, Rational};

/// Exponent vector alpha = (alpha_1..alpha_n).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> MultiIndex {
        MultiIndex(entries)
    }

    pub fn zero(n: usize) -> MultiIndex {
        MultiIndex(vec![0; n])
    }

    /// Standard basis index e_j (1-based j).
    pub fn unit(n: usize, j: usize) -> MultiIndex {
        let mut v = vec![0; n];
        v[j - 1] = 1;
        MultiIndex(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    /// alpha_j with 1-based j.
    pub fn entry(&self, j: usize) -> u32 {
        self.0[j - 1]
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&a| a as usize).sum()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        assert_eq!(self.len(), other.len());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// alpha + e_j.
    pub fn incremented(&self, j: usize) -> MultiIndex {
        let mut v = self.0.clone();
        v[j - 1] += 1;
        MultiIndex(v)
    }

    /// alpha - e_j, None if alpha_j = 0.
    pub fn decremented(&self, j: usize) -> Option<MultiIndex> {
        if self.0[j - 1] == 0 {
            return None;
        }
        let mut v = self.0.clone();
        v[j - 1] -= 1;
        Some(MultiIndex(v))
    }

    /// alpha! = prod_j alpha_j!.
    pub fn factorial(&self) -> BigInt {
        self.0.iter().map(|&a| factorial(a as usize)).product()
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// All multi-indices of length n with degree <= d, in graded-lex order.
pub fn multi_indices_up_to(n: usize, d: usize) -> Vec<MultiIndex> {
    fn rec(n: usize, d: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == n {
            if prefix.iter().map(|&a| a as usize).sum::<usize>() == d {
                out.push(prefix.clone());
            }
            return;
        }
        let used: usize = prefix.iter().map(|&a| a as usize).sum();
        for a in 0..=(d - used) as u32 {
            prefix.push(a);
            rec(n, d, prefix, out);
            prefix.pop();
        }
    }
    let mut all = Vec::new();
    for deg in 0..=d {
        let mut layer = Vec::new();
        rec(n, deg, &mut Vec::new(), &mut layer);
        layer.sort();
        all.extend(layer.into_iter().map(MultiIndex));
    }
    all
}

/// Sparse polynomial with multivector coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CliffordPolynomial {
    dim: usize,
    terms: BTreeMap<MultiIndex, Multivector>,
}

impl CliffordPolynomial {
    pub fn zero(dim: usize) -> CliffordPolynomial {
        assert!(dim >= 1 && dim <= crate::clifford::MAX_DIM);
        CliffordPolynomial { dim, terms: BTreeMap::new() }
    }

    pub fn constant(value: Multivector) -> CliffordPolynomial {
        let dim = value.dim();
        let mut p = CliffordPolynomial::zero(dim);
        p.add_term(MultiIndex::zero(dim), value);
        p
    }

    pub fn one(dim: usize) -> CliffordPolynomial {
        CliffordPolynomial::constant(Multivector::one(dim))
    }

    pub fn monomial(alpha: MultiIndex, value: Multivector) -> CliffordPolynomial {
        assert_eq!(alpha.len(), value.dim());
        let mut p = CliffordPolynomial::zero(value.dim());
        p.add_term(alpha, value);
        p
    }

    /// The scalar coordinate polynomial x_j.
    pub fn coord(dim: usize, j: usize) -> Result<CliffordPolynomial> {
        check_dim(dim)?;
        if j == 0 || j > dim {
            return Err(Error::IndexOutOfRange { index: j, dim });
        }
        Ok(CliffordPolynomial::monomial(
            MultiIndex::unit(dim, j),
            Multivector::one(dim),
        ))
    }

    /// The Clifford vector variable x = sum_j x_j e_j.
    pub fn vector_variable(dim: usize) -> Result<CliffordPolynomial> {
        check_dim(dim)?;
        let mut p = CliffordPolynomial::zero(dim);
        for j in 1..=dim {
            p.add_term(MultiIndex::unit(dim, j), Multivector::basis_vector(dim, j)?);
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; the zero polynomial has no degree.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|a| a.degree()).max()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Multivector)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, alpha: &MultiIndex) -> Multivector {
        self.terms.get(alpha).cloned().unwrap_or_else(|| Multivector::zero(self.dim))
    }

    pub fn add_term(&mut self, alpha: MultiIndex, value: Multivector) {
        assert_eq!(alpha.len(), self.dim);
        assert_eq!(value.dim(), self.dim);
        if value.is_zero() {
            return;
        }
        match self.terms.remove(&alpha) {
            None => {
                self.terms.insert(alpha, value);
            }
            Some(existing) => {
                let sum = &existing + &value;
                if !sum.is_zero() {
                    self.terms.insert(alpha, sum);
                }
            }
        }
    }

    pub fn try_add(&self, other: &CliffordPolynomial) -> Result<CliffordPolynomial> {
        self.check_same_dim(other)?;
        let mut out = self.clone();
        for (a, v) in other.terms() {
            out.add_term(a.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &CliffordPolynomial) -> Result<CliffordPolynomial> {
        self.try_add(&other.neg())
    }

    /// Product; scalar monomials commute, multivector coefficients multiply
    /// left-to-right.
    pub fn try_mul(&self, other: &CliffordPolynomial) -> Result<CliffordPolynomial> {
        self.check_same_dim(other)?;
        let mut out = CliffordPolynomial::zero(self.dim);
        for (a, va) in self.terms() {
            for (b, vb) in other.terms() {
                out.add_term(a.add(b), va.try_mul(vb)?);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &Rational) -> CliffordPolynomial {
        if factor.is_zero() {
            return CliffordPolynomial::zero(self.dim);
        }
        CliffordPolynomial {
            dim: self.dim,
            terms: self.terms.iter().map(|(a, v)| (a.clone(), v.scale(factor))).collect(),
        }
    }

    pub fn neg(&self) -> CliffordPolynomial {
        CliffordPolynomial {
            dim: self.dim,
            terms: self.terms.iter().map(|(a, v)| (a.clone(), v.neg())).collect(),
        }
    }

    /// Left-multiplies every coefficient by m.
    pub fn mul_mv_left(&self, m: &Multivector) -> Result<CliffordPolynomial> {
        let mut out = CliffordPolynomial::zero(self.dim);
        for (a, v) in self.terms() {
            out.add_term(a.clone(), m.try_mul(v)?);
        }
        Ok(out)
    }

    /// Substitutes rational coordinates.
    pub fn eval(&self, point: &[Rational]) -> Result<Multivector> {
        if point.len() != self.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: point.len() });
        }
        let mut acc = Multivector::zero(self.dim);
        for (alpha, v) in self.terms() {
            let mut c = Rational::one();
            for (j, &a) in alpha.entries().iter().enumerate() {
                c *= rat_pow(&point[j], a as usize);
            }
            acc = &acc + &v.scale(&c);
        }
        Ok(acc)
    }

    fn check_same_dim(&self, other: &CliffordPolynomial) -> Result<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { left: self.dim, right: other.dim })
        }
    }

    /// JSON form: array of {"alpha": [..], "value": <multivector>} in
    /// graded-lex order.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(a, v)| json!({ "alpha": a.entries(), "value": v.to_json() }))
                .collect(),
        )
    }

    pub fn from_json(value: &Value, dim: usize) -> Result<CliffordPolynomial> {
        check_dim(dim)?;
        let arr = value
            .as_array()
            .ok_or_else(|| Error::Parse("polynomial JSON must be an array".into()))?;
        let mut p = CliffordPolynomial::zero(dim);
        for item in arr {
            let alpha_val = item
                .get("alpha")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("polynomial term missing \"alpha\" array".into()))?;
            if alpha_val.len() != dim {
                return Err(Error::DimensionMismatch { left: dim, right: alpha_val.len() });
            }
            let mut alpha = Vec::with_capacity(dim);
            for v in alpha_val {
                let a = v
                    .as_u64()
                    .ok_or_else(|| Error::Parse("alpha entries must be nonnegative integers".into()))?;
                alpha.push(a as u32);
            }
            let mv_val = item
                .get("value")
                .ok_or_else(|| Error::Parse("polynomial term missing \"value\"".into()))?;
            p.add_term(MultiIndex::new(alpha), Multivector::from_json(mv_val, dim)?);
        }
        Ok(p)
    }
}

impl fmt::Display for CliffordPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (alpha, v) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "[{v}]")?;
            for (j, &a) in alpha.entries().iter().enumerate() {
                match a {
                    0 => {}
                    1 => write!(f, " x{}", j + 1)?,
                    _ => write!(f, " x{}^{}", j + 1, a)?,
                }
            }
        }
        Ok(())
    }
}

/// Falling factorial (x;h)_alpha = prod_j prod_{k=0}^{alpha_j - 1} (x_j - kh),
/// expanded into monomials. Scalar-valued.
pub fn falling_factorial(alpha: &MultiIndex, h: &Rational) -> Result<CliffordPolynomial> {
    check_mesh(h)?;
    let n = alpha.len();
    check_dim(n)?;
    let mut acc = CliffordPolynomial::one(n);
    for j in 1..=n {
        for k in 0..alpha.entry(j) {
            // Factor x_j - k*h.
            let mut factor = CliffordPolynomial::coord(n, j)?;
            let shift = -(h * Rational::from_integer(BigInt::from(k)));
            if !shift.is_zero() {
                factor.add_term(MultiIndex::zero(n), Multivector::scalar(n, shift));
            }
            acc = acc.try_mul(&factor)?;
        }
    }
    Ok(acc)
}

/// A point of the lattice hZ^n, stored as integer multiples of the mesh so
/// the lattice constraint holds by construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LatticePoint {
    h: Rational,
    multiples: Vec<i64>,
}

impl LatticePoint {
    pub fn new(h: Rational, multiples: Vec<i64>) -> Result<LatticePoint> {
        check_mesh(&h)?;
        check_dim(multiples.len())?;
        Ok(LatticePoint { h, multiples })
    }

    pub fn mesh(&self) -> &Rational {
        &self.h
    }

    pub fn multiples(&self) -> &[i64] {
        &self.multiples
    }

    pub fn dim(&self) -> usize {
        self.multiples.len()
    }

    pub fn coords(&self) -> Vec<Rational> {
        self.multiples
            .iter()
            .map(|&m| &self.h * Rational::from_integer(BigInt::from(m)))
            .collect()
    }
}

/// Lattice points x with sum_j |x_j| = 2*floor(k/2)*h and |x_j/h| <= bound,
/// in lexicographic order of the integer multiples. These are the supports of
/// the degree-k basis polynomials along 1-norm level curves.
pub fn l1_level_points(k: usize, h: &Rational, n: usize, bound: i64) -> Result<Vec<LatticePoint>> {
    check_mesh(h)?;
    check_dim(n)?;
    if bound < 0 {
        return Err(Error::InvalidArgument("bound must be nonnegative".into()));
    }
    let target = 2 * (k / 2) as i64;
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    fn rec(
        n: usize,
        bound: i64,
        remaining: i64,
        current: &mut Vec<i64>,
        h: &Rational,
        out: &mut Vec<LatticePoint>,
    ) {
        if current.len() == n {
            if remaining == 0 {
                out.push(LatticePoint { h: h.clone(), multiples: current.clone() });
            }
            return;
        }
        for m in -bound..=bound {
            if m.abs() > remaining {
                continue;
            }
            current.push(m);
            rec(n, bound, remaining - m.abs(), current, h, out);
            current.pop();
        }
    }
    rec(n, bound, target, &mut current, h, &mut out);
    Ok(out)
}
