//! Truncated formal power series over the rationals, plus the catalog of
//! kappa symbols that parametrize the Appell families.
//!
//! A series of order N stores the plain coefficients c_0..c_N of
//! sum c_k t^k. (Generating functions quoted with a_k/k! conventions are
//! converted to plain coefficients at construction.) Binary operations follow
//! the min-order rule; domain restrictions (reciprocal, log, compose, exp)
//! fail loudly rather than guessing coefficients past the truncation.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{check_mesh, factorial, format_rational, rat_pow, Rational};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    pub fn from_coeffs(coeffs: Vec<Rational>) -> TruncatedSeries {
        assert!(!coeffs.is_empty(), "a truncated series needs at least the constant term");
        TruncatedSeries { coeffs }
    }

    pub fn zero(order: usize) -> TruncatedSeries {
        TruncatedSeries { coeffs: vec![Rational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> TruncatedSeries {
        let mut s = TruncatedSeries::zero(order);
        s.coeffs[0] = Rational::one();
        s
    }

    pub fn constant(c: Rational, order: usize) -> TruncatedSeries {
        let mut s = TruncatedSeries::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The identity series t (order must be >= 1).
    pub fn t(order: usize) -> TruncatedSeries {
        assert!(order >= 1);
        let mut s = TruncatedSeries::zero(order);
        s.coeffs[1] = Rational::one();
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of t^k; asking past the truncation is a caller bug.
    pub fn coeff(&self, k: usize) -> &Rational {
        assert!(k <= self.order(), "coefficient {k} beyond truncation order {}", self.order());
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn truncated(&self, order: usize) -> Result<TruncatedSeries> {
        if order > self.order() {
            return Err(Error::SeriesOrder { required: order, available: self.order() });
        }
        Ok(TruncatedSeries { coeffs: self.coeffs[..=order].to_vec() })
    }

    pub fn add(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order().min(other.order());
        TruncatedSeries {
            coeffs: (0..=order).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect(),
        }
    }

    pub fn sub(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order().min(other.order());
        TruncatedSeries {
            coeffs: (0..=order).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect(),
        }
    }

    pub fn scale(&self, factor: &Rational) -> TruncatedSeries {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|c| c * factor).collect() }
    }

    pub fn neg(&self) -> TruncatedSeries {
        self.scale(&-Rational::one())
    }

    /// Cauchy product, truncated at the smaller order.
    pub fn mul(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order().min(other.order());
        let mut coeffs = vec![Rational::zero(); order + 1];
        for i in 0..=order {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=order - i {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                coeffs[i + j] += &self.coeffs[i] * &other.coeffs[j];
            }
        }
        TruncatedSeries { coeffs }
    }

    pub fn pow(&self, k: usize) -> TruncatedSeries {
        let mut acc = TruncatedSeries::one(self.order());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Termwise derivative; drops the order by one.
    pub fn derivative(&self) -> Result<TruncatedSeries> {
        if self.order() == 0 {
            return Err(Error::SeriesOrder { required: 1, available: 0 });
        }
        Ok(TruncatedSeries {
            coeffs: (1..=self.order())
                .map(|k| &self.coeffs[k] * Rational::from_integer(BigInt::from(k)))
                .collect(),
        })
    }

    /// Termwise antiderivative with zero constant; raises the order by one.
    pub fn integrate(&self) -> TruncatedSeries {
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[k + 1] = c / Rational::from_integer(BigInt::from(k + 1));
        }
        TruncatedSeries { coeffs }
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn reciprocal(&self) -> Result<TruncatedSeries> {
        if self.coeffs[0].is_zero() {
            return Err(Error::SeriesDomain(
                "reciprocal requires a nonzero constant term".into(),
            ));
        }
        let order = self.order();
        let inv0 = Rational::one() / &self.coeffs[0];
        let mut coeffs = vec![Rational::zero(); order + 1];
        coeffs[0] = inv0.clone();
        for k in 1..=order {
            let mut acc = Rational::zero();
            for i in 1..=k {
                acc += &self.coeffs[i] * &coeffs[k - i];
            }
            coeffs[k] = -acc * &inv0;
        }
        Ok(TruncatedSeries { coeffs })
    }

    /// f(g(t)); the inner series must vanish at 0.
    pub fn compose(&self, inner: &TruncatedSeries) -> Result<TruncatedSeries> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::SeriesDomain(
                "composition requires the inner series to vanish at 0".into(),
            ));
        }
        let order = self.order().min(inner.order());
        let inner = inner.truncated(order)?;
        let mut acc = TruncatedSeries::constant(self.coeffs[0].clone(), order);
        let mut power = TruncatedSeries::one(order);
        for j in 1..=order {
            power = power.mul(&inner);
            acc = acc.add(&power.scale(&self.coeffs[j]));
        }
        Ok(acc)
    }

    /// exp of a series vanishing at 0.
    pub fn exp(&self) -> Result<TruncatedSeries> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::SeriesDomain("exp requires a series vanishing at 0".into()));
        }
        let order = self.order();
        let mut acc = TruncatedSeries::one(order);
        let mut power = TruncatedSeries::one(order);
        let mut kfact = Rational::one();
        for j in 1..=order {
            power = power.mul(self);
            kfact *= Rational::from_integer(BigInt::from(j));
            acc = acc.add(&power.scale(&(Rational::one() / &kfact)));
        }
        Ok(acc)
    }

    /// log of a series with constant term 1, via log' = s'/s.
    pub fn log(&self) -> Result<TruncatedSeries> {
        if !self.coeffs[0].is_one() {
            return Err(Error::SeriesDomain("log requires constant term 1".into()));
        }
        if self.order() == 0 {
            return Ok(TruncatedSeries::zero(0));
        }
        Ok(self.derivative()?.mul(&self.reciprocal()?).integrate())
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_rational(c))?;
        }
        write!(f, "] + O(t^{})", self.order() + 1)
    }
}

/// exp(c t) as a truncated series.
pub fn exp_ct_series(c: &Rational, order: usize) -> TruncatedSeries {
    let mut coeffs = Vec::with_capacity(order + 1);
    for k in 0..=order {
        coeffs.push(rat_pow(c, k) / Rational::from_integer(factorial(k)));
    }
    TruncatedSeries::from_coeffs(coeffs)
}

/// cosh(h t).
pub fn cosh_series(h: &Rational, order: usize) -> TruncatedSeries {
    let mut coeffs = vec![Rational::zero(); order + 1];
    let mut k = 0;
    while k <= order {
        coeffs[k] = rat_pow(h, k) / Rational::from_integer(factorial(k));
        k += 2;
    }
    TruncatedSeries::from_coeffs(coeffs)
}

/// sinh(h t).
pub fn sinh_series(h: &Rational, order: usize) -> TruncatedSeries {
    let mut coeffs = vec![Rational::zero(); order + 1];
    let mut k = 1;
    while k <= order {
        coeffs[k] = rat_pow(h, k) / Rational::from_integer(factorial(k));
        k += 2;
    }
    TruncatedSeries::from_coeffs(coeffs)
}

/// (1/h) log(1 + h t): the substitution that turns a function of the forward
/// difference into a function of the plain derivative.
pub fn log1p_scaled_series(h: &Rational, order: usize) -> TruncatedSeries {
    let mut coeffs = vec![Rational::zero(); order + 1];
    for k in 1..=order {
        let sign = if k % 2 == 0 { -Rational::one() } else { Rational::one() };
        coeffs[k] = sign * rat_pow(h, k - 1) / Rational::from_integer(BigInt::from(k));
    }
    TruncatedSeries::from_coeffs(coeffs)
}

/// Named kappa symbols. Each determines one Appell family; the Maclaurin
/// coefficients below are exact.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum KappaSpec {
    /// kappa = 1: the falling-factorial family.
    Falling,
    /// kappa(t) = exp((a/h)(e^{ht} - 1)): Poisson-Charlier weights.
    Charlier { a: Rational, h: Rational },
    /// kappa(t) = ht/(e^{ht} - 1): second-kind Bernoulli.
    Bernoulli2 { h: Rational },
    /// kappa(t) = exp((cosh(ht) - 1)/h^2): a discrete Clifford-Hermite
    /// family living on the doubled mesh. The defining data is the
    /// per-coordinate log-lambda factor t^2/(2(1+ht)); the constant part of
    /// the un-normalized symbol cancels from every operator built here, so
    /// the catalog stores the normalization with kappa(0) = 1.
    CliffordHermite2h { h: Rational },
    /// Explicit plain coefficients c_0.. with c_0 != 0.
    Custom { coeffs: Vec<Rational> },
}

impl KappaSpec {
    pub fn name(&self) -> String {
        match self {
            KappaSpec::Falling => "falling".into(),
            KappaSpec::Charlier { a, h } => {
                format!("charlier(a={},h={})", format_rational(a), format_rational(h))
            }
            KappaSpec::Bernoulli2 { h } => format!("bernoulli2(h={})", format_rational(h)),
            KappaSpec::CliffordHermite2h { h } => {
                format!("chermite2h(h={})", format_rational(h))
            }
            KappaSpec::Custom { coeffs } => format!("custom[{} coeffs]", coeffs.len()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            KappaSpec::Falling => Ok(()),
            KappaSpec::Charlier { h, .. }
            | KappaSpec::Bernoulli2 { h }
            | KappaSpec::CliffordHermite2h { h } => check_mesh(h),
            KappaSpec::Custom { coeffs } => {
                if coeffs.is_empty() || coeffs[0].is_zero() {
                    Err(Error::SeriesDomain(
                        "custom kappa needs a nonzero constant coefficient".into(),
                    ))
                } else {
                    Ok(())
                }
            }
        }
    }
}

/// Maclaurin coefficients of kappa. All named catalog entries have
/// kappa(0) = 1.
pub fn kappa_series(spec: &KappaSpec, order: usize) -> Result<TruncatedSeries> {
    spec.validate()?;
    match spec {
        KappaSpec::Falling => Ok(TruncatedSeries::one(order)),
        KappaSpec::Charlier { a, h } => {
            // (a/h)(e^{ht} - 1), then exp.
            let mut inner = exp_ct_series(h, order);
            let mut coeffs = inner.coeffs().to_vec();
            coeffs[0] = Rational::zero();
            inner = TruncatedSeries::from_coeffs(coeffs).scale(&(a / h));
            inner.exp()
        }
        KappaSpec::Bernoulli2 { h } => {
            // (e^{ht} - 1)/(ht) = sum h^k t^k/(k+1)!, then invert.
            let mut coeffs = Vec::with_capacity(order + 1);
            for k in 0..=order {
                coeffs.push(rat_pow(h, k) / Rational::from_integer(factorial(k + 1)));
            }
            TruncatedSeries::from_coeffs(coeffs).reciprocal()
        }
        KappaSpec::CliffordHermite2h { h } => {
            // (cosh(ht) - 1)/h^2, then exp.
            let h2 = h * h;
            let mut inner = cosh_series(h, order);
            let mut coeffs = inner.coeffs().to_vec();
            coeffs[0] = Rational::zero();
            inner = TruncatedSeries::from_coeffs(coeffs).scale(&(Rational::one() / h2));
            inner.exp()
        }
        KappaSpec::Custom { coeffs } => {
            if order >= coeffs.len() {
                return Err(Error::SeriesOrder { required: order, available: coeffs.len() - 1 });
            }
            Ok(TruncatedSeries::from_coeffs(coeffs[..=order].to_vec()))
        }
    }
}

/// Pincherle symbol kappa'/kappa, exact to the requested order. For named
/// specs the kappa series is re-derived one order higher so no precision is
/// lost to the quotient.
pub fn pincherle_series(spec: &KappaSpec, order: usize) -> Result<TruncatedSeries> {
    let kappa = kappa_series(spec, order + 1)?;
    kappa.derivative()?.mul(&kappa.reciprocal()?).truncated(order)
}

/// One coordinate factor of the Fourier-dual symbol:
/// lambda_j(y) = kappa((1/h) log(1 + h y)).
pub fn lambda_series_per_coordinate(
    spec: &KappaSpec,
    h: &Rational,
    order: usize,
) -> Result<TruncatedSeries> {
    check_mesh(h)?;
    match spec {
        // The doubled-mesh Hermite family is *defined* through this factor;
        // expand t^2/(2(1+ht)) directly and exponentiate.
        KappaSpec::CliffordHermite2h { .. } => log_lambda_factor_series(spec, h, order)?.exp(),
        _ => kappa_series(spec, order)?.compose(&log1p_scaled_series(h, order)),
    }
}

/// log of the per-coordinate lambda factor (normalized to vanish at 0).
pub fn log_lambda_factor_series(
    spec: &KappaSpec,
    h: &Rational,
    order: usize,
) -> Result<TruncatedSeries> {
    check_mesh(h)?;
    match spec {
        KappaSpec::CliffordHermite2h { h: hk } => {
            if hk != h {
                return Err(Error::InvalidArgument(format!(
                    "mesh mismatch: family carries h={}, requested h={}",
                    format_rational(hk),
                    format_rational(h)
                )));
            }
            // t^2/(2(1+ht)) = sum_{m>=0} (-h)^m t^{m+2} / 2.
            let mut coeffs = vec![Rational::zero(); order + 1];
            let mut factor = Rational::one() / Rational::from_integer(BigInt::from(2));
            for k in 2..=order {
                coeffs[k] = factor.clone();
                factor *= -h;
            }
            Ok(TruncatedSeries::from_coeffs(coeffs))
        }
        KappaSpec::Custom { .. } => {
            // General constant terms are allowed for custom symbols; the
            // constant cancels from every operator, so factor it out.
            let lambda = lambda_series_per_coordinate(spec, h, order)?;
            let c0 = lambda.coeff(0).clone();
            lambda.scale(&(Rational::one() / c0)).log()
        }
        _ => lambda_series_per_coordinate(spec, h, order)?.log(),
    }
}

/// Maclaurin series of u(y) = y - 1/h + (1/h) sqrt(1 + h^2 y^2): the formal
/// inverse substitution for the central-difference ladder.
pub fn central_u_series(h: &Rational, order: usize) -> Result<TruncatedSeries> {
    check_mesh(h)?;
    let mut coeffs = vec![Rational::zero(); order + 1];
    if order >= 1 {
        coeffs[1] = Rational::one();
    }
    // sqrt(1+z) = sum binom(1/2, k) z^k with z = h^2 y^2.
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let mut binom = Rational::one();
    for k in 1..=order / 2 {
        // binom(1/2, k) = binom(1/2, k-1) * (1/2 - (k-1)) / k.
        binom = binom * (&half - Rational::from_integer(BigInt::from(k - 1)))
            / Rational::from_integer(BigInt::from(k));
        coeffs[2 * k] = &binom * rat_pow(h, 2 * k - 1);
    }
    Ok(TruncatedSeries::from_coeffs(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{parse_rational, rat, rint};
    use proptest::prelude::*;

    fn series(strs: &[&str]) -> TruncatedSeries {
        TruncatedSeries::from_coeffs(strs.iter().map(|s| parse_rational(s).unwrap()).collect())
    }

    #[test]
    fn exp_to_order_three() {
        let s = TruncatedSeries::t(3).exp().unwrap();
        assert_eq!(s, series(&["1", "1", "1/2", "1/6"]));
    }

    #[test]
    fn min_order_rule() {
        let a = TruncatedSeries::one(5);
        let b = TruncatedSeries::t(2);
        assert_eq!(a.add(&b).order(), 2);
        assert_eq!(a.mul(&b).order(), 2);
    }

    /// Independent Bernoulli-number oracle via the defining recurrence
    /// sum_{j=0}^{m} C(m+1, j) B_j = 0.
    fn bernoulli_numbers(count: usize) -> Vec<Rational> {
        let mut b = vec![Rational::one()];
        for m in 1..count {
            let mut acc = Rational::zero();
            for (j, bj) in b.iter().enumerate() {
                acc += Rational::from_integer(crate::rational::binomial(m + 1, j)) * bj;
            }
            b.push(-acc / Rational::from_integer(BigInt::from(m + 1)));
        }
        b
    }

    #[test]
    fn bernoulli_kappa_matches_bernoulli_numbers() {
        // ht/(e^{ht}-1) = sum B_k (ht)^k / k!.
        for h in [rint(1), rat(1, 2)] {
            let s = kappa_series(&KappaSpec::Bernoulli2 { h: h.clone() }, 8).unwrap();
            let b = bernoulli_numbers(9);
            for k in 0..=8 {
                let want = &b[k] * rat_pow(&h, k) / Rational::from_integer(factorial(k));
                assert_eq!(s.coeff(k), &want, "k={k}");
            }
        }
        // Order 2, h symbolic check at h=1: 1 - t/2 + t^2/12.
        let s = kappa_series(&KappaSpec::Bernoulli2 { h: rint(1) }, 2).unwrap();
        assert_eq!(s, series(&["1", "-1/2", "1/12"]));
    }

    #[test]
    fn charlier_kappa_and_pincherle() {
        let spec = KappaSpec::Charlier { a: rint(2), h: rat(1, 2) };
        // kappa'(t)/kappa(t) = a e^{ht}.
        let p = pincherle_series(&spec, 6).unwrap();
        assert_eq!(p, exp_ct_series(&rat(1, 2), 6).scale(&rint(2)));
        // Spec a=1, h=1: coefficients a, ah, ah^2/2.
        let p = pincherle_series(&KappaSpec::Charlier { a: rint(1), h: rint(1) }, 2).unwrap();
        assert_eq!(p, series(&["1", "1", "1/2"]));
    }

    #[test]
    fn falling_kappa_is_one() {
        assert_eq!(kappa_series(&KappaSpec::Falling, 5).unwrap(), TruncatedSeries::one(5));
        assert_eq!(pincherle_series(&KappaSpec::Falling, 5).unwrap(), TruncatedSeries::zero(5));
    }

    #[test]
    fn bernoulli_pincherle_constant_term() {
        let p = pincherle_series(&KappaSpec::Bernoulli2 { h: rint(1) }, 3).unwrap();
        assert_eq!(p.coeff(0), &rat(-1, 2));
        let p = pincherle_series(&KappaSpec::Bernoulli2 { h: rat(1, 3) }, 3).unwrap();
        assert_eq!(p.coeff(0), &rat(-1, 6));
    }

    #[test]
    fn charlier_lambda_factor_is_exp_at() {
        let spec = KappaSpec::Charlier { a: rat(3, 2), h: rat(1, 2) };
        let lam = lambda_series_per_coordinate(&spec, &rat(1, 2), 7).unwrap();
        assert_eq!(lam, exp_ct_series(&rat(3, 2), 7));
    }

    #[test]
    fn bernoulli_lambda_factor_closed_form() {
        // kappa((1/h)log(1+ht)) = log(1+ht)/(ht): coefficient of t^k is
        // (-h)^k/(k+1). Frozen from the composition oracle.
        for h in [rint(1), rat(1, 2)] {
            let lam =
                lambda_series_per_coordinate(&KappaSpec::Bernoulli2 { h: h.clone() }, &h, 6).unwrap();
            for k in 0..=6 {
                let want = rat_pow(&-&h, k) / Rational::from_integer(BigInt::from(k + 1));
                assert_eq!(lam.coeff(k), &want, "h={h} k={k}");
            }
        }
    }

    #[test]
    fn hermite_lambda_factor_and_kappa_agree() {
        // Independent routes to the same symbol: exp(t^2/(2(1+ht))) vs the
        // kappa route composed with (1/h)log(1+ht).
        for h in [rint(1), rat(1, 2)] {
            let spec = KappaSpec::CliffordHermite2h { h: h.clone() };
            let direct = lambda_series_per_coordinate(&spec, &h, 8).unwrap();
            let composed = kappa_series(&spec, 8)
                .unwrap()
                .compose(&log1p_scaled_series(&h, 8))
                .unwrap();
            assert_eq!(direct, composed);
        }
        // kappa(0) = 1 and the Pincherle symbol is sinh(ht)/h.
        let spec = KappaSpec::CliffordHermite2h { h: rat(1, 2) };
        assert_eq!(kappa_series(&spec, 0).unwrap().coeff(0), &rint(1));
        let p = pincherle_series(&spec, 7).unwrap();
        assert_eq!(p, sinh_series(&rat(1, 2), 7).scale(&rint(2)));
    }

    #[test]
    fn central_u_low_orders() {
        let h = rat(1, 2);
        let u = central_u_series(&h, 4).unwrap();
        assert_eq!(u.coeff(0), &rint(0));
        assert_eq!(u.coeff(1), &rint(1));
        assert_eq!(u.coeff(2), &rat(1, 4)); // h/2
        assert_eq!(u.coeff(3), &rint(0));
        assert_eq!(u.coeff(4), &rat(-1, 64)); // -h^3/8
        let u1 = central_u_series(&rint(1), 2).unwrap();
        assert_eq!(u1, series(&["0", "1", "1/2"]));
    }

    #[test]
    fn catalog_kappa_normalized_at_zero() {
        let specs = [
            KappaSpec::Falling,
            KappaSpec::Charlier { a: rat(2, 3), h: rat(1, 2) },
            KappaSpec::Bernoulli2 { h: rint(2) },
            KappaSpec::CliffordHermite2h { h: rint(1) },
        ];
        for spec in &specs {
            assert_eq!(kappa_series(spec, 4).unwrap().coeff(0), &rint(1), "{}", spec.name());
        }
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(
            TruncatedSeries::t(3).reciprocal(),
            Err(Error::SeriesDomain(_))
        ));
        assert!(matches!(TruncatedSeries::one(3).exp(), Err(Error::SeriesDomain(_))));
        assert!(matches!(TruncatedSeries::t(3).log(), Err(Error::SeriesDomain(_))));
        assert!(matches!(
            TruncatedSeries::one(3).compose(&TruncatedSeries::one(3)),
            Err(Error::SeriesDomain(_))
        ));
        let bad = KappaSpec::Custom { coeffs: vec![Rational::zero(), Rational::one()] };
        assert!(kappa_series(&bad, 1).is_err());
        let short = KappaSpec::Custom { coeffs: vec![Rational::one()] };
        assert!(matches!(
            kappa_series(&short, 3),
            Err(Error::SeriesOrder { required: 3, available: 0 })
        ));
        assert!(kappa_series(&KappaSpec::Bernoulli2 { h: rint(-1) }, 2).is_err());
    }

    fn arb_series(order: usize) -> impl Strategy<Value = TruncatedSeries> {
        prop::collection::vec((-6i64..=6, 1i64..=4), order + 1..=order + 1)
            .prop_map(|cs| TruncatedSeries::from_coeffs(cs.into_iter().map(|(n, d)| rat(n, d)).collect()))
    }

    proptest! {
        #[test]
        fn reciprocal_is_inverse(s in arb_series(8)) {
            prop_assume!(!s.coeff(0).is_zero());
            let r = s.reciprocal().unwrap();
            prop_assert_eq!(s.mul(&r), TruncatedSeries::one(8));
        }

        #[test]
        fn exp_log_round_trip(s in arb_series(8)) {
            let mut cs = s.coeffs().to_vec();
            cs[0] = Rational::zero();
            let s = TruncatedSeries::from_coeffs(cs);
            prop_assert_eq!(s.exp().unwrap().log().unwrap(), s);
        }

        #[test]
        fn log_exp_round_trip(s in arb_series(8)) {
            let mut cs = s.coeffs().to_vec();
            cs[0] = Rational::one();
            let s = TruncatedSeries::from_coeffs(cs);
            prop_assert_eq!(s.log().unwrap().exp().unwrap(), s);
        }

        #[test]
        fn mul_commutes_and_associates(a in arb_series(6), b in arb_series(6), c in arb_series(6)) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn compose_associates(f in arb_series(6), g in arb_series(6), w in arb_series(6)) {
            let strip = |s: &TruncatedSeries| {
                let mut cs = s.coeffs().to_vec();
                cs[0] = Rational::zero();
                TruncatedSeries::from_coeffs(cs)
            };
            let g = strip(&g);
            let w = strip(&w);
            // (f o g) o w = f o (g o w).
            prop_assert_eq!(
                f.compose(&g).unwrap().compose(&w).unwrap(),
                f.compose(&g.compose(&w).unwrap()).unwrap()
            );
        }
    }

    #[test]
    fn log_compose_exp_minus_one_is_t() {
        // log(1+t) composed with (e^t - 1) gives t.
        let order = 8;
        let log1p = log1p_scaled_series(&rint(1), order);
        let mut em1 = exp_ct_series(&rint(1), order).coeffs().to_vec();
        em1[0] = Rational::zero();
        let em1 = TruncatedSeries::from_coeffs(em1);
        assert_eq!(log1p.compose(&em1).unwrap(), TruncatedSeries::t(order));
    }
}
