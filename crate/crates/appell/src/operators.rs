//! Operator calculus on the lattice hZ^n.
//!
//! Operators are explicit expression trees interpreted exactly on
//! `CliffordPolynomial`. The primitives are finite differences, translations,
//! coordinate and blade multiplication, and formal series in a
//! degree-lowering generator; everything else (Dirac operators, raising
//! operators, commutators) is built from those. Equality of operators is
//! decided on the finite-dimensional truncation spanned by x^alpha e_J with
//! |alpha| <= d, which is exact for the polynomial identities of interest.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::clifford::{check_dim, Blade, Multivector};
use crate::error::{Error, Result};
use crate::poly::{multi_indices_up_to, CliffordPolynomial, MultiIndex};
use crate::rational::{check_mesh, format_rational, rat_pow, Rational};
use crate::series::{
    cosh_series, kappa_series, lambda_series_per_coordinate, log_lambda_factor_series,
    pincherle_series, KappaSpec, TruncatedSeries,
};

/// Where the coefficients of a `SeriesOp` come from. Sources tied to a
/// `KappaSpec` are re-derived at whatever order the target polynomial needs;
/// a `Fixed` series fails loudly when asked past its truncation.
#[derive(Clone, PartialEq, Debug)]
pub enum SeriesSource {
    Fixed(TruncatedSeries),
    /// kappa itself.
    Kappa(KappaSpec),
    /// 1/kappa.
    KappaReciprocal(KappaSpec),
    /// kappa'/kappa.
    Pincherle(KappaSpec),
    /// log of the per-coordinate lambda factor at mesh h.
    LogLambdaFactor(KappaSpec, Rational),
    /// reciprocal of the per-coordinate lambda factor at mesh h.
    LambdaFactorReciprocal(KappaSpec, Rational),
    /// 1/cosh(ht).
    CoshReciprocal(Rational),
}

impl SeriesSource {
    pub fn resolve(&self, order: usize) -> Result<TruncatedSeries> {
        match self {
            SeriesSource::Fixed(s) => {
                if s.order() < order {
                    Err(Error::SeriesOrder { required: order, available: s.order() })
                } else {
                    s.truncated(order)
                }
            }
            SeriesSource::Kappa(spec) => kappa_series(spec, order),
            SeriesSource::KappaReciprocal(spec) => kappa_series(spec, order)?.reciprocal(),
            SeriesSource::Pincherle(spec) => pincherle_series(spec, order),
            SeriesSource::LogLambdaFactor(spec, h) => log_lambda_factor_series(spec, h, order),
            SeriesSource::LambdaFactorReciprocal(spec, h) => {
                lambda_series_per_coordinate(spec, h, order)?.reciprocal()
            }
            SeriesSource::CoshReciprocal(h) => cosh_series(h, order).reciprocal(),
        }
    }
}

/// Degree-lowering generator a series can be evaluated at.
#[derive(Clone, PartialEq, Debug)]
pub enum Generator {
    /// d/dx_j.
    Partial(usize),
    /// Forward difference at mesh h in coordinate j.
    Forward(usize, Rational),
}

/// Per-coordinate generator family for `ProductOverCoords`.
#[derive(Clone, PartialEq, Debug)]
pub enum GeneratorKind {
    Partial,
    Forward(Rational),
}

impl GeneratorKind {
    fn at(&self, j: usize) -> Generator {
        match self {
            GeneratorKind::Partial => Generator::Partial(j),
            GeneratorKind::Forward(h) => Generator::Forward(j, h.clone()),
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub enum OperatorExpr {
    Identity,
    ScalarMul(Rational),
    /// d/dx_j (1-based j).
    PartialDeriv(usize),
    /// (f(x + h e_j) - f(x))/h.
    ForwardDiff(usize, Rational),
    /// (f(x) - f(x - h e_j))/h.
    BackwardDiff(usize, Rational),
    /// f(x) -> f(x + s e_j); s may be negative.
    Translate(usize, Rational),
    /// Multiplication by the coordinate x_j.
    CoordMul(usize),
    /// Left multiplication by a fixed multivector.
    BladeMulLeft(Multivector),
    Sum(Vec<OperatorExpr>),
    /// Composition, applied right-to-left: Compose[A,B,C] p = A(B(C(p))).
    Compose(Vec<OperatorExpr>),
    Power(Box<OperatorExpr>, usize),
    /// sum_k c_k G^k where G is the generator; finite on polynomials because
    /// G strictly lowers degree.
    SeriesOp(SeriesSource, Generator),
    /// prod_{j=1..n} of the same series evaluated at the j-th generator.
    ProductOverCoords(SeriesSource, GeneratorKind),
}

impl OperatorExpr {
    pub fn zero() -> OperatorExpr {
        OperatorExpr::ScalarMul(Rational::zero())
    }

    pub fn neg(self) -> OperatorExpr {
        OperatorExpr::Compose(vec![OperatorExpr::ScalarMul(-Rational::one()), self])
    }

    pub fn sub(a: OperatorExpr, b: OperatorExpr) -> OperatorExpr {
        OperatorExpr::Sum(vec![a, b.neg()])
    }

    pub fn scaled(self, c: Rational) -> OperatorExpr {
        OperatorExpr::Compose(vec![OperatorExpr::ScalarMul(c), self])
    }
}

/// [A, B] = AB - BA.
pub fn commutator(a: &OperatorExpr, b: &OperatorExpr) -> OperatorExpr {
    OperatorExpr::sub(
        OperatorExpr::Compose(vec![a.clone(), b.clone()]),
        OperatorExpr::Compose(vec![b.clone(), a.clone()]),
    )
}

/// The raising component x_j T_h^{-j}.
pub fn raising_op(j: usize, h: &Rational) -> OperatorExpr {
    OperatorExpr::Compose(vec![
        OperatorExpr::CoordMul(j),
        OperatorExpr::Translate(j, -h.clone()),
    ])
}

/// X_eps = sum_j e_j x_j T_eps^{-j}: the vector-variable operator shifted by
/// eps in each coordinate it multiplies.
pub fn x_epsilon(eps: &Rational, n: usize) -> Result<OperatorExpr> {
    check_dim(n)?;
    let mut parts = Vec::with_capacity(n);
    for j in 1..=n {
        parts.push(OperatorExpr::Compose(vec![
            OperatorExpr::BladeMulLeft(Multivector::basis_vector(n, j)?),
            OperatorExpr::CoordMul(j),
            OperatorExpr::Translate(j, -eps.clone()),
        ]));
    }
    Ok(OperatorExpr::Sum(parts))
}

/// Forward Dirac operator D_h^+ = sum_j e_j forward_j.
pub fn dirac_forward(h: &Rational, n: usize) -> Result<OperatorExpr> {
    check_dim(n)?;
    check_mesh(h)?;
    let mut parts = Vec::with_capacity(n);
    for j in 1..=n {
        parts.push(OperatorExpr::Compose(vec![
            OperatorExpr::BladeMulLeft(Multivector::basis_vector(n, j)?),
            OperatorExpr::ForwardDiff(j, h.clone()),
        ]));
    }
    Ok(OperatorExpr::Sum(parts))
}

/// Backward Dirac operator D_h^- = sum_j e_j backward_j.
pub fn dirac_backward(h: &Rational, n: usize) -> Result<OperatorExpr> {
    check_dim(n)?;
    check_mesh(h)?;
    let mut parts = Vec::with_capacity(n);
    for j in 1..=n {
        parts.push(OperatorExpr::Compose(vec![
            OperatorExpr::BladeMulLeft(Multivector::basis_vector(n, j)?),
            OperatorExpr::BackwardDiff(j, h.clone()),
        ]));
    }
    Ok(OperatorExpr::Sum(parts))
}

/// Central Dirac operator (D_h^+ + D_h^-)/2.
pub fn dirac_central(h: &Rational, n: usize) -> Result<OperatorExpr> {
    Ok(OperatorExpr::Sum(vec![dirac_forward(h, n)?, dirac_backward(h, n)?])
        .scaled(Rational::new(BigInt::one(), BigInt::from(2))))
}

/// Continuum Dirac D = sum_j e_j d/dx_j.
pub fn dirac_continuum(n: usize) -> Result<OperatorExpr> {
    check_dim(n)?;
    let mut parts = Vec::with_capacity(n);
    for j in 1..=n {
        parts.push(OperatorExpr::Compose(vec![
            OperatorExpr::BladeMulLeft(Multivector::basis_vector(n, j)?),
            OperatorExpr::PartialDeriv(j),
        ]));
    }
    Ok(OperatorExpr::Sum(parts))
}

/// Continuum Laplacian sum_j (d/dx_j)^2.
pub fn laplacian_continuum(n: usize) -> Result<OperatorExpr> {
    check_dim(n)?;
    Ok(OperatorExpr::Sum(
        (1..=n)
            .map(|j| OperatorExpr::Power(Box::new(OperatorExpr::PartialDeriv(j)), 2))
            .collect(),
    ))
}

/// Discrete Laplacian sum_j (T_h^{+j} + T_h^{-j} - 2 I)/h^2.
pub fn laplacian_discrete(h: &Rational, n: usize) -> Result<OperatorExpr> {
    check_dim(n)?;
    check_mesh(h)?;
    let h2inv = Rational::one() / (h * h);
    let mut parts = Vec::with_capacity(n);
    for j in 1..=n {
        parts.push(
            OperatorExpr::Sum(vec![
                OperatorExpr::Translate(j, h.clone()),
                OperatorExpr::Translate(j, -h.clone()),
                OperatorExpr::ScalarMul(Rational::from_integer(BigInt::from(-2))),
            ])
            .scaled(h2inv.clone()),
        );
    }
    Ok(OperatorExpr::Sum(parts))
}

fn check_coord(j: usize, dim: usize) -> Result<()> {
    if j == 0 || j > dim {
        Err(Error::IndexOutOfRange { index: j, dim })
    } else {
        Ok(())
    }
}

fn partial_deriv(p: &CliffordPolynomial, j: usize) -> Result<CliffordPolynomial> {
    check_coord(j, p.dim())?;
    let mut out = CliffordPolynomial::zero(p.dim());
    for (alpha, v) in p.terms() {
        if let Some(beta) = alpha.decremented(j) {
            let factor = Rational::from_integer(BigInt::from(alpha.entry(j)));
            out.add_term(beta, v.scale(&factor));
        }
    }
    Ok(out)
}

fn translate(p: &CliffordPolynomial, j: usize, s: &Rational) -> Result<CliffordPolynomial> {
    check_coord(j, p.dim())?;
    if s.is_zero() {
        return Ok(p.clone());
    }
    let mut out = CliffordPolynomial::zero(p.dim());
    for (alpha, v) in p.terms() {
        let m = alpha.entry(j) as usize;
        // (x_j + s)^m = sum_k C(m,k) s^{m-k} x_j^k.
        let mut binom = BigInt::one();
        for k in (0..=m).rev() {
            let coeff = Rational::from_integer(binom.clone()) * rat_pow(s, m - k);
            let mut beta = alpha.entries().to_vec();
            beta[j - 1] = k as u32;
            out.add_term(MultiIndex::new(beta), v.scale(&coeff));
            if k > 0 {
                binom = binom * BigInt::from(k) / BigInt::from(m - k + 1);
            }
        }
    }
    Ok(out)
}

fn forward_diff(p: &CliffordPolynomial, j: usize, h: &Rational) -> Result<CliffordPolynomial> {
    check_mesh(h)?;
    let shifted = translate(p, j, h)?;
    Ok(shifted.try_sub(p)?.scale(&(Rational::one() / h)))
}

fn backward_diff(p: &CliffordPolynomial, j: usize, h: &Rational) -> Result<CliffordPolynomial> {
    check_mesh(h)?;
    let shifted = translate(p, j, &-h.clone())?;
    Ok(p.try_sub(&shifted)?.scale(&(Rational::one() / h)))
}

fn coord_mul(p: &CliffordPolynomial, j: usize) -> Result<CliffordPolynomial> {
    check_coord(j, p.dim())?;
    let mut out = CliffordPolynomial::zero(p.dim());
    for (alpha, v) in p.terms() {
        out.add_term(alpha.incremented(j), v.clone());
    }
    Ok(out)
}

fn apply_generator(gen: &Generator, p: &CliffordPolynomial) -> Result<CliffordPolynomial> {
    match gen {
        Generator::Partial(j) => partial_deriv(p, *j),
        Generator::Forward(j, h) => forward_diff(p, *j, h),
    }
}

fn series_apply(
    src: &SeriesSource,
    gen: &Generator,
    p: &CliffordPolynomial,
) -> Result<CliffordPolynomial> {
    let Some(deg) = p.degree() else {
        return Ok(CliffordPolynomial::zero(p.dim()));
    };
    let series = src.resolve(deg)?;
    let mut acc = p.scale(series.coeff(0));
    let mut q = p.clone();
    for k in 1..=deg {
        q = apply_generator(gen, &q)?;
        if q.is_zero() {
            break;
        }
        acc = acc.try_add(&q.scale(series.coeff(k)))?;
    }
    Ok(acc)
}

/// Interprets the operator on a polynomial, exactly.
pub fn op_apply(op: &OperatorExpr, p: &CliffordPolynomial) -> Result<CliffordPolynomial> {
    match op {
        OperatorExpr::Identity => Ok(p.clone()),
        OperatorExpr::ScalarMul(c) => Ok(p.scale(c)),
        OperatorExpr::PartialDeriv(j) => partial_deriv(p, *j),
        OperatorExpr::ForwardDiff(j, h) => forward_diff(p, *j, h),
        OperatorExpr::BackwardDiff(j, h) => backward_diff(p, *j, h),
        OperatorExpr::Translate(j, s) => translate(p, *j, s),
        OperatorExpr::CoordMul(j) => coord_mul(p, *j),
        OperatorExpr::BladeMulLeft(m) => p.mul_mv_left(m),
        OperatorExpr::Sum(parts) => {
            let mut acc = CliffordPolynomial::zero(p.dim());
            for part in parts {
                acc = acc.try_add(&op_apply(part, p)?)?;
            }
            Ok(acc)
        }
        OperatorExpr::Compose(parts) => {
            let mut acc = p.clone();
            for part in parts.iter().rev() {
                acc = op_apply(part, &acc)?;
            }
            Ok(acc)
        }
        OperatorExpr::Power(inner, k) => {
            let mut acc = p.clone();
            for _ in 0..*k {
                acc = op_apply(inner, &acc)?;
            }
            Ok(acc)
        }
        OperatorExpr::SeriesOp(src, gen) => series_apply(src, gen, p),
        OperatorExpr::ProductOverCoords(src, kind) => {
            let mut acc = p.clone();
            for j in 1..=p.dim() {
                acc = series_apply(src, &kind.at(j), &acc)?;
            }
            Ok(acc)
        }
    }
}

/// First basis element where two operators disagree on the truncation.
#[derive(Clone, Debug)]
pub struct CounterExample {
    pub alpha: MultiIndex,
    pub blade: Blade,
    pub left: CliffordPolynomial,
    pub right: CliffordPolynomial,
}

impl CounterExample {
    pub fn to_json(&self) -> Value {
        json!({
            "alpha": self.alpha.entries(),
            "blade": self.blade.indices(),
            "left": self.left.to_json(),
            "right": self.right.to_json(),
        })
    }
}

impl fmt::Display for CounterExample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{} {}: left {} != right {}", self.alpha, self.blade, self.left, self.right)
    }
}

#[derive(Clone, Debug)]
pub struct EqualityCheck {
    pub equal: bool,
    pub witness: Option<CounterExample>,
}

impl EqualityCheck {
    pub fn to_json(&self) -> Value {
        json!({
            "equal": self.equal,
            "witness": self.witness.as_ref().map(|w| w.to_json()),
        })
    }
}

/// Decides A = B on the span of x^alpha e_J, |alpha| <= d, J subseteq {1..n},
/// returning the first counterexample in graded-lex/bitmask order.
pub fn op_equal_truncated(
    a: &OperatorExpr,
    b: &OperatorExpr,
    n: usize,
    d: usize,
) -> Result<EqualityCheck> {
    check_dim(n)?;
    for alpha in multi_indices_up_to(n, d) {
        for mask in 0..(1u32 << n) {
            let blade = Blade::from_mask(mask, n)?;
            let basis = CliffordPolynomial::monomial(
                alpha.clone(),
                Multivector::from_terms(n, [(blade, Rational::one())]),
            );
            let left = op_apply(a, &basis)?;
            let right = op_apply(b, &basis)?;
            if left != right {
                return Ok(EqualityCheck {
                    equal: false,
                    witness: Some(CounterExample { alpha, blade, left, right }),
                });
            }
        }
    }
    Ok(EqualityCheck { equal: true, witness: None })
}

/// Exact matrix of an operator on the degree-d truncation. Basis order:
/// graded-lex multi-indices, then blade bitmask within each multi-index.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    pub n: usize,
    pub degree: usize,
    pub basis: Vec<(MultiIndex, Blade)>,
    size: usize,
    data: Vec<Rational>, // row-major
}

impl OperatorMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entry(&self, row: usize, col: usize) -> &Rational {
        &self.data[row * self.size + col]
    }

    pub fn identity_like(&self) -> OperatorMatrix {
        let mut data = vec![Rational::zero(); self.size * self.size];
        for i in 0..self.size {
            data[i * self.size + i] = Rational::one();
        }
        OperatorMatrix {
            n: self.n,
            degree: self.degree,
            basis: self.basis.clone(),
            size: self.size,
            data,
        }
    }

    pub fn sub(&self, other: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.size, other.size);
        OperatorMatrix {
            n: self.n,
            degree: self.degree,
            basis: self.basis.clone(),
            size: self.size,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn mul(&self, other: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.size, other.size);
        let s = self.size;
        let mut data = vec![Rational::zero(); s * s];
        for i in 0..s {
            for k in 0..s {
                let a = &self.data[i * s + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..s {
                    let b = &other.data[k * s + j];
                    if !b.is_zero() {
                        data[i * s + j] += a * b;
                    }
                }
            }
        }
        OperatorMatrix {
            n: self.n,
            degree: self.degree,
            basis: self.basis.clone(),
            size: s,
            data,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rational::is_zero)
    }

    /// True when some power of the matrix vanishes (checked up to the
    /// dimension, which is sharp).
    pub fn is_nilpotent(&self) -> bool {
        let mut cur = self.clone();
        for _ in 0..self.size {
            if cur.is_zero() {
                return true;
            }
            cur = cur.mul(self);
        }
        cur.is_zero()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.data.iter().map(crate::rational::to_f64).collect()
    }
}

/// Builds the exact matrix; errors with a witness monomial if the operator
/// leaves the degree-d truncation.
pub fn op_matrix(op: &OperatorExpr, n: usize, d: usize) -> Result<OperatorMatrix> {
    check_dim(n)?;
    let alphas = multi_indices_up_to(n, d);
    let blades: Vec<Blade> = (0..(1u32 << n)).map(|m| Blade::from_mask(m, n).unwrap()).collect();
    let mut basis = Vec::with_capacity(alphas.len() * blades.len());
    let mut index = HashMap::new();
    for alpha in &alphas {
        for blade in &blades {
            index.insert((alpha.clone(), *blade), basis.len());
            basis.push((alpha.clone(), *blade));
        }
    }
    let size = basis.len();
    let mut data = vec![Rational::zero(); size * size];
    for (col, (alpha, blade)) in basis.iter().enumerate() {
        let p = CliffordPolynomial::monomial(
            alpha.clone(),
            Multivector::from_terms(n, [(*blade, Rational::one())]),
        );
        let image = op_apply(op, &p)?;
        for (beta, v) in image.terms() {
            if beta.degree() > d {
                return Err(Error::NotDegreePreserving {
                    degree: d,
                    witness: format!("x^{alpha} {blade} maps to degree {}", beta.degree()),
                });
            }
            for (b, c) in v.terms() {
                let row = index[&(beta.clone(), *b)];
                data[row * size + col] = c.clone();
            }
        }
    }
    Ok(OperatorMatrix { n, degree: d, basis, size, data })
}

#[derive(Clone, Debug)]
pub struct RelationCheck {
    pub name: String,
    pub check: EqualityCheck,
}

/// Ladder-relation suite on the degree-d truncation:
/// [forward_j, x_k T^{-k}] = delta_jk I, raising components commute, and
/// T^{-j} forward_j = backward_j.
#[derive(Clone, Debug)]
pub struct RelationsReport {
    pub n: usize,
    pub h: Rational,
    pub degree: usize,
    pub checks: Vec<RelationCheck>,
}

impl RelationsReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.check.equal)
    }

    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.check.equal).count()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "h": format_rational(&self.h),
            "degree": self.degree,
            "total": self.checks.len(),
            "passed": self.passed(),
            "all_pass": self.all_pass(),
            "checks": self.checks.iter().map(|c| json!({
                "name": c.name,
                "pass": c.check.equal,
                "witness": c.check.witness.as_ref().map(|w| w.to_json()),
            })).collect::<Vec<_>>(),
        })
    }
}

pub fn relations_report(n: usize, h: &Rational, d: usize) -> Result<RelationsReport> {
    check_dim(n)?;
    check_mesh(h)?;
    let mut checks = Vec::new();
    for j in 1..=n {
        for k in 1..=n {
            let comm = commutator(&OperatorExpr::ForwardDiff(j, h.clone()), &raising_op(k, h));
            let expected = if j == k { OperatorExpr::Identity } else { OperatorExpr::zero() };
            let name = format!(
                "[d+_{j}, x_{k}T-_{k}] = {}",
                if j == k { "I" } else { "0" }
            );
            checks.push(RelationCheck { name, check: op_equal_truncated(&comm, &expected, n, d)? });
        }
    }
    for j in 1..=n {
        for k in j + 1..=n {
            let comm = commutator(&raising_op(j, h), &raising_op(k, h));
            let name = format!("[x_{j}T-_{j}, x_{k}T-_{k}] = 0");
            checks.push(RelationCheck {
                name,
                check: op_equal_truncated(&comm, &OperatorExpr::zero(), n, d)?,
            });
        }
    }
    for j in 1..=n {
        let lhs = OperatorExpr::Compose(vec![
            OperatorExpr::Translate(j, -h.clone()),
            OperatorExpr::ForwardDiff(j, h.clone()),
        ]);
        let rhs = OperatorExpr::BackwardDiff(j, h.clone());
        let name = format!("T-_{j} d+_{j} = d-_{j}");
        checks.push(RelationCheck { name, check: op_equal_truncated(&lhs, &rhs, n, d)? });
    }
    Ok(RelationsReport { n, h: h.clone(), degree: d, checks })
}

/// One failed product-rule sample.
#[derive(Clone, Debug)]
pub struct ProductRuleFailure {
    pub sample: usize,
    pub coord: usize,
    pub lhs: CliffordPolynomial,
    pub rhs: CliffordPolynomial,
}

#[derive(Clone, Debug)]
pub struct ProductRuleReport {
    pub n: usize,
    pub h: Rational,
    pub degree: usize,
    pub samples: usize,
    pub seed: u64,
    pub failures: Vec<ProductRuleFailure>,
}

impl ProductRuleReport {
    pub fn all_pass(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "h": format_rational(&self.h),
            "degree": self.degree,
            "samples": self.samples,
            "seed": self.seed,
            "all_pass": self.all_pass(),
            "failures": self.failures.iter().map(|f| json!({
                "sample": f.sample,
                "coord": f.coord,
                "lhs": f.lhs.to_json(),
                "rhs": f.rhs.to_json(),
            })).collect::<Vec<_>>(),
        })
    }
}

fn random_multi_index(rng: &mut ChaCha8Rng, n: usize, d: usize) -> MultiIndex {
    let mut entries = vec![0u32; n];
    let mut budget = rng.random_range(0..=d);
    for entry in entries.iter_mut() {
        if budget == 0 {
            break;
        }
        let take = rng.random_range(0..=budget);
        *entry = take as u32;
        budget -= take;
    }
    MultiIndex::new(entries)
}

fn random_polynomial(
    rng: &mut ChaCha8Rng,
    n: usize,
    d: usize,
    scalar_only: bool,
) -> CliffordPolynomial {
    let mut p = CliffordPolynomial::zero(n);
    let terms = rng.random_range(1..=4);
    for _ in 0..terms {
        let alpha = random_multi_index(rng, n, d);
        let mask = if scalar_only { 0 } else { rng.random_range(0..(1u32 << n)) };
        let num = rng.random_range(-9i64..=9);
        let den = rng.random_range(1i64..=4);
        let blade = Blade::from_mask(mask, n).unwrap();
        p.add_term(
            alpha,
            Multivector::from_terms(n, [(blade, Rational::new(BigInt::from(num), BigInt::from(den)))]),
        );
    }
    p
}

/// Randomized check of the discrete Leibniz rule
/// forward_j(g f) = (forward_j g) f(x + h e_j) + g (forward_j f)
/// for scalar g and Clifford-valued f.
pub fn product_rule_check(
    n: usize,
    h: &Rational,
    d: usize,
    samples: usize,
    seed: u64,
) -> Result<ProductRuleReport> {
    check_dim(n)?;
    check_mesh(h)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for sample in 0..samples {
        let g = random_polynomial(&mut rng, n, d, true);
        let f = random_polynomial(&mut rng, n, d, false);
        for j in 1..=n {
            let lhs = forward_diff(&g.try_mul(&f)?, j, h)?;
            let rhs = forward_diff(&g, j, h)?
                .try_mul(&translate(&f, j, h)?)?
                .try_add(&g.try_mul(&forward_diff(&f, j, h)?)?)?;
            if lhs != rhs {
                failures.push(ProductRuleFailure { sample, coord: j, lhs, rhs });
            }
        }
    }
    Ok(ProductRuleReport {
        n,
        h: h.clone(),
        degree: d,
        samples,
        seed,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::falling_factorial;
    use crate::rational::{rat, rint};

    fn x_poly(n: usize, j: usize) -> CliffordPolynomial {
        CliffordPolynomial::coord(n, j).unwrap()
    }

    #[test]
    fn forward_difference_of_square() {
        // forward(x^2) = 2x + h.
        for h in [rint(1), rat(1, 2)] {
            let p = x_poly(1, 1).try_mul(&x_poly(1, 1)).unwrap();
            let got = op_apply(&OperatorExpr::ForwardDiff(1, h.clone()), &p).unwrap();
            let mut want = x_poly(1, 1).scale(&rint(2));
            want.add_term(MultiIndex::zero(1), Multivector::scalar(1, h.clone()));
            assert_eq!(got, want);
        }
    }

    #[test]
    fn forward_difference_lowers_falling_factorials() {
        // forward (x;h)_k = k (x;h)_{k-1}: the discrete analogue of d/dx x^k.
        for h in [rint(1), rat(1, 3)] {
            for k in 1u32..=5 {
                let p = falling_factorial(&MultiIndex::new(vec![k]), &h).unwrap();
                let got = op_apply(&OperatorExpr::ForwardDiff(1, h.clone()), &p).unwrap();
                let want = falling_factorial(&MultiIndex::new(vec![k - 1]), &h)
                    .unwrap()
                    .scale(&rint(k as i64));
                assert_eq!(got, want, "h={h} k={k}");
            }
        }
    }

    #[test]
    fn translate_examples() {
        let p = x_poly(2, 1).try_mul(&x_poly(2, 1)).unwrap(); // x1^2
        let got = op_apply(&OperatorExpr::Translate(1, rint(2)), &p).unwrap();
        // (x1+2)^2 = x1^2 + 4x1 + 4.
        let mut want = p.clone();
        want.add_term(MultiIndex::unit(2, 1), Multivector::scalar(2, rint(4)));
        want.add_term(MultiIndex::zero(2), Multivector::scalar(2, rint(4)));
        assert_eq!(got, want);
        // Constants are translation invariant.
        let c = CliffordPolynomial::one(2);
        assert_eq!(op_apply(&OperatorExpr::Translate(2, rat(-1, 2)), &c).unwrap(), c);
    }

    #[test]
    fn dirac_forward_on_vector_variable() {
        // D_h^+ x = sum_j e_j e_j = -n.
        for n in 1..=3 {
            let x = CliffordPolynomial::vector_variable(n).unwrap();
            let d = dirac_forward(&rint(1), n).unwrap();
            let got = op_apply(&d, &x).unwrap();
            assert_eq!(got, CliffordPolynomial::one(n).scale(&rint(-(n as i64))));
        }
    }

    #[test]
    fn dirac_on_constants_vanishes() {
        let one = CliffordPolynomial::one(2);
        for op in [
            dirac_forward(&rat(1, 2), 2).unwrap(),
            dirac_backward(&rat(1, 2), 2).unwrap(),
            dirac_central(&rat(1, 2), 2).unwrap(),
        ] {
            assert!(op_apply(&op, &one).unwrap().is_zero());
        }
    }

    #[test]
    fn x_h_on_constant_and_coordinate() {
        // X_h 1 = sum_j x_j e_j.
        let xh = x_epsilon(&rint(1), 2).unwrap();
        let got = op_apply(&xh, &CliffordPolynomial::one(2)).unwrap();
        assert_eq!(got, CliffordPolynomial::vector_variable(2).unwrap());

        // n=1: X_h x1 = e1 x1 (x1 - h).
        let xh = x_epsilon(&rat(1, 2), 1).unwrap();
        let got = op_apply(&xh, &x_poly(1, 1)).unwrap();
        let want = falling_factorial(&MultiIndex::new(vec![2]), &rat(1, 2))
            .unwrap()
            .mul_mv_left(&Multivector::basis_vector(1, 1).unwrap())
            .unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn x_h_squared_is_minus_sum_of_squares() {
        // (X_h)^2 1 = -sum_j x_j(x_j - h), here n=2, h=1.
        let xh = x_epsilon(&rint(1), 2).unwrap();
        let sq = OperatorExpr::Power(Box::new(xh), 2);
        let got = op_apply(&sq, &CliffordPolynomial::one(2)).unwrap();
        let mut want = CliffordPolynomial::zero(2);
        for j in 1..=2 {
            let ff = falling_factorial(&MultiIndex::unit(2, j).incremented(j), &rint(1)).unwrap();
            want = want.try_add(&ff).unwrap();
        }
        assert_eq!(got, want.neg());
    }

    #[test]
    fn x_h_squared_operator_identity() {
        // (X_h)^2 = -sum_j (x_j T^{-j})^2 as operators, degree 5, n <= 3.
        for n in 1..=3 {
            for h in [rint(1), rat(1, 2)] {
                let xh = x_epsilon(&h, n).unwrap();
                let lhs = OperatorExpr::Power(Box::new(xh), 2);
                let rhs = OperatorExpr::Sum(
                    (1..=n)
                        .map(|j| OperatorExpr::Power(Box::new(raising_op(j, &h)), 2))
                        .collect(),
                )
                .neg();
                let check = op_equal_truncated(&lhs, &rhs, n, 5).unwrap();
                assert!(check.equal, "n={n} h={h}: {:?}", check.witness);
            }
        }
    }

    #[test]
    fn weyl_heisenberg_suite_small() {
        let report = relations_report(2, &rat(1, 2), 6).unwrap();
        assert!(report.all_pass(), "{:?}", report.to_json());
        assert_eq!(report.checks.len(), 2 * 2 + 1 + 2);
    }

    #[test]
    fn intertwine_translation_forward_backward() {
        for h in [rint(1), rat(1, 3)] {
            let lhs = OperatorExpr::Compose(vec![
                OperatorExpr::Translate(1, -h.clone()),
                OperatorExpr::ForwardDiff(1, h.clone()),
            ]);
            let rhs = OperatorExpr::BackwardDiff(1, h.clone());
            assert!(op_equal_truncated(&lhs, &rhs, 2, 6).unwrap().equal);
        }
    }

    #[test]
    fn falling_factorial_operational_form() {
        // (x;h)_alpha = prod_j (x_j T^{-j})^{alpha_j} 1.
        let h = rat(1, 2);
        for alpha in [vec![2, 1], vec![0, 3], vec![1, 1]] {
            let alpha = MultiIndex::new(alpha);
            let mut ops = Vec::new();
            for j in 1..=2 {
                ops.push(OperatorExpr::Power(Box::new(raising_op(j, &h)), alpha.entry(j) as usize));
            }
            let got = op_apply(&OperatorExpr::Compose(ops), &CliffordPolynomial::one(2)).unwrap();
            assert_eq!(got, falling_factorial(&alpha, &h).unwrap());
        }
    }

    #[test]
    fn inequality_produces_witness() {
        let check = op_equal_truncated(&OperatorExpr::Identity, &OperatorExpr::zero(), 1, 2).unwrap();
        assert!(!check.equal);
        let w = check.witness.unwrap();
        // First basis element in order: the scalar constant.
        assert_eq!(w.alpha, MultiIndex::zero(1));
        assert_eq!(w.blade, Blade::SCALAR);
    }

    #[test]
    fn series_op_exponential_translation() {
        // sum_k (h^k/k!) (d/dx)^k is translation by h.
        let h = rat(1, 2);
        let series = crate::series::exp_ct_series(&h, 8);
        let op = OperatorExpr::SeriesOp(SeriesSource::Fixed(series), Generator::Partial(1));
        let lhs = op_equal_truncated(&op, &OperatorExpr::Translate(1, h.clone()), 1, 6).unwrap();
        assert!(lhs.equal);
    }

    #[test]
    fn series_op_insufficient_order_errors() {
        let series = TruncatedSeries::one(1);
        let op = OperatorExpr::SeriesOp(SeriesSource::Fixed(series), Generator::Partial(1));
        let p = falling_factorial(&MultiIndex::new(vec![3]), &rint(1)).unwrap();
        match op_apply(&op, &p) {
            Err(Error::SeriesOrder { required: 3, available: 1 }) => {}
            other => panic!("expected SeriesOrder error, got {other:?}"),
        }
    }

    #[test]
    fn pincherle_commutator_lemma() {
        // [x_j, 1/kappa(d_j)] = (kappa'/kappa)(d_j) 1/kappa(d_j): the series
        // form of [A, e^B] = [A, B] e^B for [A,B] commuting with B.
        for spec in [
            KappaSpec::Charlier { a: rint(2), h: rint(1) },
            KappaSpec::Bernoulli2 { h: rat(1, 2) },
            KappaSpec::CliffordHermite2h { h: rint(1) },
        ] {
            let recip = OperatorExpr::SeriesOp(
                SeriesSource::KappaReciprocal(spec.clone()),
                Generator::Partial(1),
            );
            let lhs = commutator(&OperatorExpr::CoordMul(1), &recip);
            let rhs = OperatorExpr::Compose(vec![
                OperatorExpr::SeriesOp(SeriesSource::Pincherle(spec.clone()), Generator::Partial(1)),
                recip,
            ]);
            let check = op_equal_truncated(&lhs, &rhs, 2, 5).unwrap();
            assert!(check.equal, "{}: {:?}", spec.name(), check.witness);
        }
    }

    #[test]
    fn matrix_of_identity_and_nilpotency() {
        let m = op_matrix(&OperatorExpr::Identity, 1, 1).unwrap();
        assert_eq!(m.size(), 4); // two multi-indices times two blades
        assert!(m.sub(&m.identity_like()).is_zero());

        let d = op_matrix(&OperatorExpr::ForwardDiff(1, rint(1)), 1, 3).unwrap();
        assert!(d.sub(&d.identity_like()).is_nilpotent() == false);
        assert!(d.is_nilpotent());
    }

    #[test]
    fn matrix_rejects_degree_raising() {
        match op_matrix(&OperatorExpr::CoordMul(1), 1, 2) {
            Err(Error::NotDegreePreserving { degree: 2, .. }) => {}
            other => panic!("expected NotDegreePreserving, got {other:?}"),
        }
    }

    #[test]
    fn product_rule_holds_on_samples() {
        let report = product_rule_check(2, &rat(1, 2), 4, 12, 7).unwrap();
        assert!(report.all_pass(), "{:?}", report.to_json());
        // Deterministic under the same seed.
        let again = product_rule_check(2, &rat(1, 2), 4, 12, 7).unwrap();
        assert_eq!(report.failures.len(), again.failures.len());
    }

    #[test]
    fn product_rule_manual_case() {
        // g = x1 (scalar), f = e1 x1, n=1, h=1.
        let h = rint(1);
        let g = x_poly(1, 1);
        let f = x_poly(1, 1).mul_mv_left(&Multivector::basis_vector(1, 1).unwrap()).unwrap();
        let lhs = forward_diff(&g.try_mul(&f).unwrap(), 1, &h).unwrap();
        let rhs = forward_diff(&g, 1, &h)
            .unwrap()
            .try_mul(&translate(&f, 1, &h).unwrap())
            .unwrap()
            .try_add(&g.try_mul(&forward_diff(&f, 1, &h).unwrap()).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn laplacians() {
        // Continuum: Lap x1^2 = 2; discrete: Lap_h x1^2 = 2 as well.
        let p = x_poly(2, 1).try_mul(&x_poly(2, 1)).unwrap();
        let lap = laplacian_continuum(2).unwrap();
        assert_eq!(op_apply(&lap, &p).unwrap(), CliffordPolynomial::one(2).scale(&rint(2)));
        let dlap = laplacian_discrete(&rat(1, 2), 2).unwrap();
        assert_eq!(op_apply(&dlap, &p).unwrap(), CliffordPolynomial::one(2).scale(&rint(2)));
        // Discrete Laplacian equals the square of the half-mesh central Dirac
        // times -1: (central Dirac at h/2)^2 = -Lap_h.
        let c = dirac_central(&rat(1, 4), 2).unwrap();
        let c2 = OperatorExpr::Power(Box::new(c), 2);
        let check = op_equal_truncated(
            &c2,
            &laplacian_discrete(&rat(1, 2), 2).unwrap().neg(),
            2,
            4,
        )
        .unwrap();
        assert!(check.equal, "{:?}", check.witness);
    }

    #[test]
    fn index_errors() {
        let p = CliffordPolynomial::one(2);
        assert!(matches!(
            op_apply(&OperatorExpr::PartialDeriv(3), &p),
            Err(Error::IndexOutOfRange { index: 3, dim: 2 })
        ));
        assert!(op_apply(&OperatorExpr::ForwardDiff(1, rint(0)), &p).is_err());
    }
}
