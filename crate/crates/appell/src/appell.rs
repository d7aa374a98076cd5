//! Appell sets w_k on the lattice hZ^n and everything built around them:
//! the raising operator Lambda_h, Rodrigues-type intertwiners, truncated
//! exponential generating functions, quasi-monomial ladders, and the
//! discrete Hermite/heat propagators.
//!
//! The normative definition is operational: w_k = mu_k (Lambda_h)^k a with
//! mu_k fixed by the lowering requirement D_h^+ w_k = k w_{k-1}. Printed
//! closed forms from the source material that contradict that requirement
//! are implemented only inside cross-checks which report the mismatch; see
//! `discrepancy_report`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::clifford::{check_dim, Multivector};
use crate::error::{Error, Result};
use crate::operators::{
    commutator, dirac_backward, dirac_forward, laplacian_continuum, laplacian_discrete, op_apply,
    op_equal_truncated, x_epsilon, EqualityCheck, Generator, GeneratorKind, OperatorExpr,
    SeriesSource,
};
use crate::poly::{falling_factorial, multi_indices_up_to, CliffordPolynomial, MultiIndex};
use crate::rational::{
    check_mesh, factorial, format_rational, pochhammer, rat_pow, Rational,
};
use crate::series::{central_u_series, kappa_series, KappaSpec};

/// One Appell family: dimension, mesh, kappa symbol, and the base element
/// the raising operator is iterated on.
#[derive(Clone, PartialEq, Debug)]
pub struct AppellFamilySpec {
    n: usize,
    h: Rational,
    kappa: KappaSpec,
    base: Multivector,
}

impl AppellFamilySpec {
    pub fn new(n: usize, h: Rational, kappa: KappaSpec, base: Multivector) -> Result<AppellFamilySpec> {
        check_dim(n)?;
        check_mesh(&h)?;
        kappa.validate()?;
        if base.dim() != n {
            return Err(Error::DimensionMismatch { left: n, right: base.dim() });
        }
        if base.is_zero() {
            return Err(Error::InvalidArgument("base element must be nonzero".into()));
        }
        match &kappa {
            KappaSpec::Charlier { h: hk, .. }
            | KappaSpec::Bernoulli2 { h: hk }
            | KappaSpec::CliffordHermite2h { h: hk } => {
                if hk != &h {
                    return Err(Error::InvalidArgument(format!(
                        "kappa mesh {} disagrees with family mesh {}",
                        format_rational(hk),
                        format_rational(&h)
                    )));
                }
            }
            KappaSpec::Falling | KappaSpec::Custom { .. } => {}
        }
        Ok(AppellFamilySpec { n, h, kappa, base })
    }

    pub fn falling(n: usize, h: Rational) -> Result<AppellFamilySpec> {
        check_dim(n)?;
        AppellFamilySpec::new(n, h, KappaSpec::Falling, Multivector::one(n))
    }

    pub fn charlier(n: usize, h: Rational, a: Rational) -> Result<AppellFamilySpec> {
        check_dim(n)?;
        AppellFamilySpec::new(n, h.clone(), KappaSpec::Charlier { a, h }, Multivector::one(n))
    }

    pub fn bernoulli2(n: usize, h: Rational) -> Result<AppellFamilySpec> {
        check_dim(n)?;
        AppellFamilySpec::new(n, h.clone(), KappaSpec::Bernoulli2 { h }, Multivector::one(n))
    }

    pub fn clifford_hermite_2h(n: usize, h: Rational) -> Result<AppellFamilySpec> {
        check_dim(n)?;
        AppellFamilySpec::new(n, h.clone(), KappaSpec::CliffordHermite2h { h }, Multivector::one(n))
    }

    pub fn custom(n: usize, h: Rational, coeffs: Vec<Rational>) -> Result<AppellFamilySpec> {
        check_dim(n)?;
        AppellFamilySpec::new(n, h, KappaSpec::Custom { coeffs }, Multivector::one(n))
    }

    pub fn with_base(self, base: Multivector) -> Result<AppellFamilySpec> {
        AppellFamilySpec::new(self.n, self.h, self.kappa, base)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> &Rational {
        &self.h
    }

    pub fn kappa(&self) -> &KappaSpec {
        &self.kappa
    }

    pub fn base(&self) -> &Multivector {
        &self.base
    }

    pub fn name(&self) -> String {
        format!("{} n={} h={}", self.kappa.name(), self.n, format_rational(&self.h))
    }

    /// The falling-factorial family with the same lattice and base.
    pub fn falling_counterpart(&self) -> AppellFamilySpec {
        AppellFamilySpec {
            n: self.n,
            h: self.h.clone(),
            kappa: KappaSpec::Falling,
            base: self.base.clone(),
        }
    }
}

static MU_CACHE: OnceLock<Mutex<HashMap<usize, Vec<Rational>>>> = OnceLock::new();

/// mu_0..mu_k for dimension n, from the recursion forced by matching
/// coefficients in D G = t G:
///   mu_{2m}   = -mu_{2m-1}
///   mu_{2m+1} = -(2m+1)/(2m+n) mu_{2m},  mu_0 = 1.
/// Values are exact and cached per dimension for the lifetime of the run.
pub fn mu_table(n: usize, k_max: usize) -> Result<Vec<Rational>> {
    check_dim(n)?;
    let cache = MU_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("mu cache poisoned");
    let entry = guard.entry(n).or_insert_with(|| vec![Rational::one()]);
    while entry.len() <= k_max {
        let k = entry.len();
        let prev = entry[k - 1].clone();
        let mu = if k % 2 == 0 {
            -prev
        } else {
            let m = (k - 1) / 2;
            -prev * Rational::new(BigInt::from(2 * m + 1), BigInt::from(2 * m + n))
        };
        entry.push(mu);
    }
    Ok(entry[..=k_max].to_vec())
}

/// Closed form equivalent to the recursion:
/// mu_{2m} = (1/2)_m/(n/2)_m, mu_{2m+1} = -(1/n)(3/2)_m/((n/2)+1)_m.
pub fn mu_closed_form(n: usize, k: usize) -> Rational {
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let n_half = Rational::new(BigInt::from(n), BigInt::from(2));
    if k % 2 == 0 {
        let m = k / 2;
        pochhammer(&half, m) / pochhammer(&n_half, m)
    } else {
        let m = (k - 1) / 2;
        -(Rational::one() / Rational::from_integer(BigInt::from(n)))
            * pochhammer(&(&half + Rational::one()), m)
            / pochhammer(&(&n_half + Rational::one()), m)
    }
}

/// The closed form as printed in the source material, kept only so the
/// mismatch can be reported: mu_{2m} = (-1)^m (1/2)_m/(n/2)_m and
/// mu_{2m+1} = (-1)^m (3/2)_m/((n/2)+1)_m.
pub fn mu_closed_form_printed(n: usize, k: usize) -> Rational {
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let n_half = Rational::new(BigInt::from(n), BigInt::from(2));
    let m = k / 2;
    let sign = if m % 2 == 0 { Rational::one() } else { -Rational::one() };
    if k % 2 == 0 {
        sign * pochhammer(&half, m) / pochhammer(&n_half, m)
    } else {
        sign * pochhammer(&(&half + Rational::one()), m)
            / pochhammer(&(&n_half + Rational::one()), m)
    }
}

/// One forward ladder component M_j = (x_j - (kappa'/kappa)(d_j)) T_h^{-j}.
fn forward_ladder_component(kappa: &KappaSpec, h: &Rational, j: usize) -> OperatorExpr {
    OperatorExpr::Compose(vec![
        OperatorExpr::Sum(vec![
            OperatorExpr::CoordMul(j),
            OperatorExpr::SeriesOp(SeriesSource::Pincherle(kappa.clone()), Generator::Partial(j))
                .neg(),
        ]),
        OperatorExpr::Translate(j, -h.clone()),
    ])
}

/// The raising operator Lambda_h = sum_j e_j (x_j - (kappa'/kappa)(d_j)) T_h^{-j}.
pub fn lambda_h_operator(spec: &AppellFamilySpec) -> Result<OperatorExpr> {
    let mut parts = Vec::with_capacity(spec.n);
    for j in 1..=spec.n {
        parts.push(OperatorExpr::Compose(vec![
            OperatorExpr::BladeMulLeft(Multivector::basis_vector(spec.n, j)?),
            forward_ladder_component(&spec.kappa, &spec.h, j),
        ]));
    }
    Ok(OperatorExpr::Sum(parts))
}

/// Alternative construction X_h - [log lambda(D_h^+), X_h], where
/// log lambda(D_h^+) = sum_j L(forward_j) with L the per-coordinate
/// log-lambda factor. Must agree with `lambda_h_operator` on truncations;
/// exercised by tests as a cross-validation of the two routes.
pub fn lambda_h_operator_via_log_lambda(spec: &AppellFamilySpec) -> Result<OperatorExpr> {
    let x_h = x_epsilon(&spec.h, spec.n)?;
    let log_lambda = OperatorExpr::Sum(
        (1..=spec.n)
            .map(|j| {
                OperatorExpr::SeriesOp(
                    SeriesSource::LogLambdaFactor(spec.kappa.clone(), spec.h.clone()),
                    Generator::Forward(j, spec.h.clone()),
                )
            })
            .collect(),
    );
    Ok(OperatorExpr::sub(x_h.clone(), commutator(&log_lambda, &x_h)))
}

/// w_k = mu_k (Lambda_h)^k a.
pub fn appell_w(spec: &AppellFamilySpec, k: usize) -> Result<CliffordPolynomial> {
    Ok(appell_w_all(spec, k)?.pop().expect("nonempty"))
}

/// w_0..w_k, sharing the iterated operator powers.
pub fn appell_w_all(spec: &AppellFamilySpec, k_max: usize) -> Result<Vec<CliffordPolynomial>> {
    let mu = mu_table(spec.n, k_max)?;
    let lambda = lambda_h_operator(spec)?;
    let mut out = Vec::with_capacity(k_max + 1);
    let mut power = CliffordPolynomial::constant(spec.base.clone());
    out.push(power.scale(&mu[0]));
    for k in 1..=k_max {
        power = op_apply(&lambda, &power)?;
        out.push(power.scale(&mu[k]));
    }
    Ok(out)
}

/// Truncated exponential generating function sum_{k<=K} w_k t^k / k!,
/// stored through its coefficient list.
#[derive(Clone, Debug)]
pub struct EGFTruncation {
    pub spec: AppellFamilySpec,
    pub k_max: usize,
    /// w[k] is the k-th Appell polynomial (the t^k/k! coefficient).
    pub w: Vec<CliffordPolynomial>,
}

impl EGFTruncation {
    pub fn to_json(&self) -> Value {
        json!({
            "family": self.spec.name(),
            "n": self.spec.n(),
            "h": format_rational(self.spec.h()),
            "k_max": self.k_max,
            "w": self.w.iter().map(|p| p.to_json()).collect::<Vec<_>>(),
        })
    }
}

pub fn egf_truncate(spec: &AppellFamilySpec, k_max: usize) -> Result<EGFTruncation> {
    Ok(EGFTruncation { spec: spec.clone(), k_max, w: appell_w_all(spec, k_max)? })
}

#[derive(Clone, Debug)]
pub struct AppellFailure {
    pub k: usize,
    pub difference: CliffordPolynomial,
}

/// Result of checking the lowering property D_h^+ w_k = k w_{k-1} on a
/// truncated family, plus the base condition w_0 = a.
#[derive(Clone, Debug)]
pub struct AppellVerifyReport {
    pub family: String,
    pub n: usize,
    pub h: Rational,
    pub k_max: usize,
    pub base_matches: bool,
    pub failures: Vec<AppellFailure>,
}

impl AppellVerifyReport {
    pub fn all_pass(&self) -> bool {
        self.base_matches && self.failures.is_empty()
    }

    pub fn summary(&self) -> String {
        let total = self.k_max + 1;
        let passed = total - self.failures.len() - usize::from(!self.base_matches);
        format!("{passed}/{total} pass")
    }

    pub fn to_json(&self) -> Value {
        json!({
            "family": self.family,
            "n": self.n,
            "h": format_rational(&self.h),
            "k_max": self.k_max,
            "base_matches": self.base_matches,
            "all_pass": self.all_pass(),
            "summary": self.summary(),
            "failures": self.failures.iter().map(|f| json!({
                "k": f.k,
                "difference": f.difference.to_json(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Checks an explicit truncated family (not necessarily one produced by
/// `egf_truncate`, so deliberately corrupted inputs can be probed).
pub fn egf_verify(egf: &EGFTruncation) -> Result<AppellVerifyReport> {
    let spec = &egf.spec;
    let d_plus = dirac_forward(spec.h(), spec.n())?;
    let base_matches = egf.w[0] == CliffordPolynomial::constant(spec.base().clone());
    let mut failures = Vec::new();
    for k in 1..=egf.k_max {
        let lowered = op_apply(&d_plus, &egf.w[k])?;
        let expected = egf.w[k - 1].scale(&Rational::from_integer(BigInt::from(k)));
        let difference = lowered.try_sub(&expected)?;
        if !difference.is_zero() {
            failures.push(AppellFailure { k, difference });
        }
    }
    Ok(AppellVerifyReport {
        family: spec.name(),
        n: spec.n(),
        h: spec.h().clone(),
        k_max: egf.k_max,
        base_matches,
        failures,
    })
}

/// Builds the family and checks the lowering property for all k <= k_max.
pub fn appell_verify(spec: &AppellFamilySpec, k_max: usize) -> Result<AppellVerifyReport> {
    egf_verify(&egf_truncate(spec, k_max)?)
}

/// sigma(D_h^+) = prod_j kappa(d_{x_j}).
pub fn sigma_operator(spec: &AppellFamilySpec) -> OperatorExpr {
    OperatorExpr::ProductOverCoords(SeriesSource::Kappa(spec.kappa.clone()), GeneratorKind::Partial)
}

/// sigma^{-1} = prod_j kappa(d_{x_j})^{-1}.
pub fn sigma_inverse_operator(spec: &AppellFamilySpec) -> OperatorExpr {
    OperatorExpr::ProductOverCoords(
        SeriesSource::KappaReciprocal(spec.kappa.clone()),
        GeneratorKind::Partial,
    )
}

pub fn sigma_inverse_apply(spec: &AppellFamilySpec, p: &CliffordPolynomial) -> Result<CliffordPolynomial> {
    op_apply(&sigma_inverse_operator(spec), p)
}

/// Rodrigues route to the same polynomials: w_k = lambda(0) sigma^{-1} applied
/// to the falling-factorial family member, where lambda(0) = kappa(0)^n.
pub fn rodrigues_w(spec: &AppellFamilySpec, k: usize) -> Result<CliffordPolynomial> {
    let falling = spec.falling_counterpart();
    let w_fall = appell_w(&falling, k)?;
    let image = sigma_inverse_apply(spec, &w_fall)?;
    let kappa0 = kappa_series(&spec.kappa, 0)?.coeff(0).clone();
    Ok(image.scale(&rat_pow(&kappa0, spec.n)))
}

#[derive(Clone, Debug)]
pub struct RodriguesReport {
    pub family: String,
    pub k_max: usize,
    pub failures: Vec<AppellFailure>,
}

impl RodriguesReport {
    pub fn all_pass(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "family": self.family,
            "k_max": self.k_max,
            "all_pass": self.all_pass(),
            "failures": self.failures.iter().map(|f| json!({
                "k": f.k,
                "difference": f.difference.to_json(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Compares the Rodrigues route against the operational route for k <= k_max.
pub fn rodrigues_verify(spec: &AppellFamilySpec, k_max: usize) -> Result<RodriguesReport> {
    let direct = appell_w_all(spec, k_max)?;
    let mut failures = Vec::new();
    for (k, w) in direct.iter().enumerate() {
        let via_rodrigues = rodrigues_w(spec, k)?;
        let difference = via_rodrigues.try_sub(w)?;
        if !difference.is_zero() {
            failures.push(AppellFailure { k, difference });
        }
    }
    Ok(RodriguesReport { family: spec.name(), k_max, failures })
}

/// Intertwining check: Lambda_h = sigma^{-1} X_h sigma on the degree-d
/// truncation.
pub fn intertwine_check(spec: &AppellFamilySpec, d: usize) -> Result<EqualityCheck> {
    let lambda = lambda_h_operator(spec)?;
    let conjugated = OperatorExpr::Compose(vec![
        sigma_inverse_operator(spec),
        x_epsilon(&spec.h, spec.n)?,
        sigma_operator(spec),
    ]);
    op_equal_truncated(&lambda, &conjugated, spec.n, d)
}

/// Which one-parameter ladder a quasi-monomial family diagonalizes.
#[derive(Clone, PartialEq, Debug)]
pub enum Ladder {
    /// L_j = forward difference; raising partner (x_j - P(d_j)) T^{-j}.
    Forward { h: Rational },
    /// L_j = central difference; raising partner x_j cosh(h d_j)^{-1}.
    Central { h: Rational },
}

/// m_alpha = prod_j M_j^{alpha_j} 1 for the ladder's raising components.
pub fn quasi_monomial(
    ladder: &Ladder,
    kappa: &KappaSpec,
    alpha: &MultiIndex,
) -> Result<CliffordPolynomial> {
    let n = alpha.len();
    check_dim(n)?;
    kappa.validate()?;
    let mut p = CliffordPolynomial::one(n);
    match ladder {
        Ladder::Forward { h } => {
            check_mesh(h)?;
            for j in 1..=n {
                let m_j = forward_ladder_component(kappa, h, j);
                for _ in 0..alpha.entry(j) {
                    p = op_apply(&m_j, &p)?;
                }
            }
        }
        Ladder::Central { h } => {
            check_mesh(h)?;
            if *kappa != KappaSpec::Falling {
                return Err(Error::InvalidArgument(
                    "the central ladder is defined for the trivial kappa only".into(),
                ));
            }
            for j in 1..=n {
                let m_j = OperatorExpr::Compose(vec![
                    OperatorExpr::CoordMul(j),
                    OperatorExpr::SeriesOp(
                        SeriesSource::CoshReciprocal(h.clone()),
                        Generator::Partial(j),
                    ),
                ]);
                for _ in 0..alpha.entry(j) {
                    p = op_apply(&m_j, &p)?;
                }
            }
        }
    }
    Ok(p)
}

/// The lowering operator whose eigenrelation L_j m_alpha = alpha_j m_{alpha-e_j}
/// the quasi-monomials satisfy.
pub fn ladder_lowering_op(ladder: &Ladder, j: usize) -> OperatorExpr {
    match ladder {
        Ladder::Forward { h } => OperatorExpr::ForwardDiff(j, h.clone()),
        Ladder::Central { h } => OperatorExpr::Sum(vec![
            OperatorExpr::ForwardDiff(j, h.clone()),
            OperatorExpr::BackwardDiff(j, h.clone()),
        ])
        .scaled(Rational::new(BigInt::one(), BigInt::from(2))),
    }
}

/// Central quasi-monomials through the generating-function route:
/// m_alpha = sum_beta (x;h)_beta / beta! * [d_y^alpha u(y)^beta]_{y=0}
/// with u the per-coordinate formal inverse of the central-difference
/// substitution. Must agree with `quasi_monomial(Central, trivial, alpha)`.
pub fn central_egf_quasimonomial(alpha: &MultiIndex, h: &Rational) -> Result<CliffordPolynomial> {
    let n = alpha.len();
    check_dim(n)?;
    check_mesh(h)?;
    let order = alpha.entries().iter().copied().max().unwrap_or(0) as usize;
    let u = central_u_series(h, order.max(1))?;
    // table[a][b] = a! [t^a] u(t)^b, for 0 <= b <= a <= order.
    let mut table = vec![vec![Rational::zero(); order + 1]; order + 1];
    let mut u_pow = crate::series::TruncatedSeries::one(u.order());
    for b in 0..=order {
        for a in 0..=order {
            table[a][b] = Rational::from_integer(factorial(a)) * u_pow.coeff(a);
        }
        u_pow = u_pow.mul(&u);
    }
    // Sum over beta <= alpha componentwise.
    let mut p = CliffordPolynomial::zero(n);
    let mut beta = vec![0u32; n];
    loop {
        let mut c = Rational::one();
        for j in 1..=n {
            c *= &table[alpha.entry(j) as usize][beta[j - 1] as usize];
        }
        if !c.is_zero() {
            let beta_idx = MultiIndex::new(beta.clone());
            let c = c / Rational::from_integer(beta_idx.factorial());
            p = p.try_add(&falling_factorial(&beta_idx, h)?.scale(&c))?;
        }
        // Odometer over the box prod [0, alpha_j].
        let mut j = 0;
        loop {
            if j == n {
                return Ok(p);
            }
            if beta[j] < alpha.entry(j + 1) {
                beta[j] += 1;
                break;
            }
            beta[j] = 0;
            j += 1;
        }
    }
}

/// The single-term expression printed in the source material for the central
/// quasi-monomials: (gamma_alpha/alpha!) (x;h)_alpha with
/// gamma_alpha = [d_y^alpha u(y)^alpha]_0. Kept for the discrepancy report.
pub fn central_single_term_printed(alpha: &MultiIndex, h: &Rational) -> Result<CliffordPolynomial> {
    let n = alpha.len();
    check_dim(n)?;
    check_mesh(h)?;
    let order = alpha.entries().iter().copied().max().unwrap_or(0) as usize;
    let u = central_u_series(h, order.max(1))?;
    let mut gamma = Rational::one();
    for j in 1..=n {
        let a = alpha.entry(j) as usize;
        gamma *= Rational::from_integer(factorial(a)) * u.pow(a).coeff(a);
    }
    let c = gamma / Rational::from_integer(alpha.factorial());
    Ok(falling_factorial(alpha, h)?.scale(&c))
}

/// Discrete Hermite polynomial H_beta = exp(D^2/2) x^beta, computed as the
/// finite sum exp(-Laplacian/2) x^beta.
pub fn hermite_polynomial(beta: &MultiIndex) -> Result<CliffordPolynomial> {
    let n = beta.len();
    check_dim(n)?;
    let p = CliffordPolynomial::monomial(beta.clone(), Multivector::one(n));
    let op = laplacian_continuum(n)?.scaled(Rational::new(BigInt::from(-1), BigInt::from(2)));
    exp_lowering_apply(&op, &Rational::one(), &p)
}

/// The inverse smoothing map exp(+Laplacian/2); exp(-Lap/2) followed by this
/// is the identity on polynomials.
pub fn weierstrass_inverse(p: &CliffordPolynomial) -> Result<CliffordPolynomial> {
    let op = laplacian_continuum(p.dim())?.scaled(Rational::new(BigInt::one(), BigInt::from(2)));
    exp_lowering_apply(&op, &Rational::one(), p)
}

/// Coefficients c_m with exp(t op) p = sum_m t^m c_m; finite because op must
/// strictly lower degree. Each application is checked: the image's degree
/// must drop, otherwise the series would not terminate and the call errors
/// with the offending polynomial.
pub fn exp_lowering_t_coeffs(
    op: &OperatorExpr,
    p: &CliffordPolynomial,
) -> Result<Vec<CliffordPolynomial>> {
    let mut coeffs = vec![p.clone()];
    let mut cur = p.clone();
    let mut m = 0usize;
    while let Some(deg) = cur.degree() {
        m += 1;
        cur = op_apply(op, &cur)?;
        if let Some(new_deg) = cur.degree() {
            if new_deg >= deg {
                return Err(Error::NotDegreeLowering {
                    witness: format!("degree {deg} input mapped to degree {new_deg}: {cur}"),
                });
            }
        }
        if cur.is_zero() {
            break;
        }
        coeffs.push(cur.scale(&(Rational::one() / Rational::from_integer(factorial(m)))));
    }
    Ok(coeffs)
}

/// exp(t op) p at a fixed rational t.
pub fn exp_lowering_apply(
    op: &OperatorExpr,
    t: &Rational,
    p: &CliffordPolynomial,
) -> Result<CliffordPolynomial> {
    let coeffs = exp_lowering_t_coeffs(op, p)?;
    let mut acc = CliffordPolynomial::zero(p.dim());
    let mut tm = Rational::one();
    for c in &coeffs {
        acc = acc.try_add(&c.scale(&tm))?;
        tm *= t;
    }
    Ok(acc)
}

/// Heat evolution of the central quasi-monomial m_alpha under the discrete
/// Laplacian: t-power coefficients of exp(t Lap_h) m_alpha.
pub fn heat_t_coefficients(alpha: &MultiIndex, h: &Rational) -> Result<Vec<CliffordPolynomial>> {
    let n = alpha.len();
    let initial = quasi_monomial(&Ladder::Central { h: h.clone() }, &KappaSpec::Falling, alpha)?;
    exp_lowering_t_coeffs(&laplacian_discrete(h, n)?, &initial)
}

/// exp(t Lap_h) m_alpha at a fixed rational time.
pub fn heat_propagate(alpha: &MultiIndex, h: &Rational, t: &Rational) -> Result<CliffordPolynomial> {
    let n = alpha.len();
    let initial = quasi_monomial(&Ladder::Central { h: h.clone() }, &KappaSpec::Falling, alpha)?;
    exp_lowering_apply(&laplacian_discrete(h, n)?, t, &initial)
}

/// Identity connecting the backward-shifted vector variable with the
/// Poisson-Charlier normal form:
/// X_h - D_h^- = sum_j e_j ((x_j + 1/h) T^{-j} - (1/h) I) on truncations.
pub fn charlier_connection_check(h: &Rational, n: usize, d: usize) -> Result<EqualityCheck> {
    check_mesh(h)?;
    let lhs = OperatorExpr::sub(x_epsilon(h, n)?, dirac_backward(h, n)?);
    let hinv = Rational::one() / h;
    let mut parts = Vec::with_capacity(n);
    for j in 1..=n {
        let shifted = OperatorExpr::Compose(vec![
            OperatorExpr::Sum(vec![
                OperatorExpr::CoordMul(j),
                OperatorExpr::ScalarMul(hinv.clone()),
            ]),
            OperatorExpr::Translate(j, -h.clone()),
        ]);
        parts.push(OperatorExpr::Compose(vec![
            OperatorExpr::BladeMulLeft(Multivector::basis_vector(n, j)?),
            OperatorExpr::sub(shifted, OperatorExpr::ScalarMul(hinv.clone())),
        ]));
    }
    op_equal_truncated(&lhs, &OperatorExpr::Sum(parts), n, d)
}

/// Even-degree multinomial report: (X_h)^{2m} 1 against the exact single
/// stratum (-1)^m sum_{|alpha|=m} m!/alpha! (x;h)_{2alpha}, and against the
/// printed double sum over all strata s <= m (which disagrees for m >= 1).
#[derive(Clone, Debug)]
pub struct W2mReport {
    pub n: usize,
    pub h: Rational,
    pub m: usize,
    pub operator_poly: CliffordPolynomial,
    pub single_stratum: CliffordPolynomial,
    pub printed_double_sum: CliffordPolynomial,
    pub matches_single_stratum: bool,
    pub printed_form_matches: bool,
    pub printed_difference: CliffordPolynomial,
}

impl W2mReport {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "h": format_rational(&self.h),
            "m": self.m,
            "matches_single_stratum": self.matches_single_stratum,
            "printed_form_matches": self.printed_form_matches,
            "operator_poly": self.operator_poly.to_json(),
            "single_stratum": self.single_stratum.to_json(),
            "printed_double_sum": self.printed_double_sum.to_json(),
            "printed_difference": self.printed_difference.to_json(),
        })
    }
}

pub fn multinomial_w2m_check(h: &Rational, n: usize, m: usize) -> Result<W2mReport> {
    check_dim(n)?;
    check_mesh(h)?;
    let x_h = x_epsilon(h, n)?;
    let mut power = CliffordPolynomial::one(n);
    for _ in 0..2 * m {
        power = op_apply(&x_h, &power)?;
    }
    let sign = if m % 2 == 0 { Rational::one() } else { -Rational::one() };
    let m_fact = Rational::from_integer(factorial(m));

    let stratum_sum = |s: usize| -> Result<CliffordPolynomial> {
        let mut acc = CliffordPolynomial::zero(n);
        for alpha in multi_indices_up_to(n, s) {
            if alpha.degree() != s {
                continue;
            }
            let doubled = MultiIndex::new(alpha.entries().iter().map(|&a| 2 * a).collect());
            let weight = &m_fact / Rational::from_integer(alpha.factorial());
            acc = acc.try_add(&falling_factorial(&doubled, h)?.scale(&weight))?;
        }
        Ok(acc)
    };

    let single = stratum_sum(m)?.scale(&sign);
    let mut double = CliffordPolynomial::zero(n);
    for s in 0..=m {
        double = double.try_add(&stratum_sum(s)?)?;
    }
    let double = double.scale(&sign);

    Ok(W2mReport {
        n,
        h: h.clone(),
        m,
        matches_single_stratum: power == single,
        printed_form_matches: power == double,
        printed_difference: power.try_sub(&double)?,
        operator_poly: power,
        single_stratum: single,
        printed_double_sum: double,
    })
}

/// Splitting the EGF into hypergeometric pieces: checks the exact scalar
/// identities
///   mu_{2m}/(2m)!   = (1/4)^m / ((n/2)_m m!)
///   mu_{2m+1}/(2m+1)! = -(1/n) (1/4)^m / ((n/2+1)_m m!)
/// which give G = 0F1(n/2; t^2 X^2/4) a - (t/n) X 0F1(n/2+1; t^2 X^2/4) a.
/// The printed version uses argument -t^2 X^2/4 and omits the -(1/n); the
/// report records where it first disagrees.
#[derive(Clone, Debug)]
pub struct HypergeometricReport {
    pub n: usize,
    pub k_max: usize,
    pub recursion_form_matches: bool,
    pub printed_first_mismatch: Option<usize>,
}

impl HypergeometricReport {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "k_max": self.k_max,
            "recursion_form_matches": self.recursion_form_matches,
            "printed_first_mismatch": self.printed_first_mismatch,
        })
    }
}

pub fn hypergeometric_egf_check(n: usize, k_max: usize) -> Result<HypergeometricReport> {
    let mu = mu_table(n, k_max)?;
    let n_half = Rational::new(BigInt::from(n), BigInt::from(2));
    let quarter = Rational::new(BigInt::one(), BigInt::from(4));
    let mut recursion_ok = true;
    let mut printed_first = None;
    for k in 0..=k_max {
        let m = k / 2;
        let qm = rat_pow(&quarter, m);
        let mfact = Rational::from_integer(factorial(m));
        let (want, printed) = if k % 2 == 0 {
            let denom = pochhammer(&n_half, m) * &mfact;
            let base = &qm / &denom;
            let sign = if m % 2 == 0 { Rational::one() } else { -Rational::one() };
            (base.clone(), sign * base)
        } else {
            let denom = pochhammer(&(&n_half + Rational::one()), m) * &mfact;
            let base = &qm / &denom;
            let sign = if m % 2 == 0 { Rational::one() } else { -Rational::one() };
            (
                -(Rational::one() / Rational::from_integer(BigInt::from(n))) * &base,
                sign * base,
            )
        };
        let actual = &mu[k] / Rational::from_integer(factorial(k));
        if actual != want {
            recursion_ok = false;
        }
        if actual != printed && printed_first.is_none() {
            printed_first = Some(k);
        }
    }
    Ok(HypergeometricReport {
        n,
        k_max,
        recursion_form_matches: recursion_ok,
        printed_first_mismatch: printed_first,
    })
}

/// Poisson-Charlier polynomials as exact polynomials in the parameter a:
/// w_k(a) = sum_m a^m c_m with c_m = (-1)^m (sum_j forward_j)^m w_k^{fall}/m!.
/// The report checks (i) the expansion reproduces the Charlier family at
/// sample values of a, (ii) d/da w = -(sum_j forward_j) w holds exactly, and
/// (iii) the printed variant with an extra factor a fails, with a witness.
#[derive(Clone, Debug)]
pub struct CharlierEvolutionReport {
    pub n: usize,
    pub h: Rational,
    pub k: usize,
    pub a_coefficients: Vec<CliffordPolynomial>,
    pub family_samples_match: bool,
    pub evolution_holds: bool,
    pub printed_factor_a_holds: bool,
    pub printed_witness: Option<(usize, CliffordPolynomial)>,
}

impl CharlierEvolutionReport {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "h": format_rational(&self.h),
            "k": self.k,
            "family_samples_match": self.family_samples_match,
            "evolution_holds": self.evolution_holds,
            "printed_factor_a_holds": self.printed_factor_a_holds,
            "printed_witness": self.printed_witness.as_ref().map(|(r, p)| json!({
                "a_power": r,
                "difference": p.to_json(),
            })),
        })
    }
}

pub fn charlier_evolution_check(
    h: &Rational,
    n: usize,
    k: usize,
    a_samples: &[Rational],
) -> Result<CharlierEvolutionReport> {
    check_dim(n)?;
    check_mesh(h)?;
    let falling = AppellFamilySpec::falling(n, h.clone())?;
    let w_fall = appell_w(&falling, k)?;
    let s_op = OperatorExpr::Sum((1..=n).map(|j| OperatorExpr::ForwardDiff(j, h.clone())).collect());

    // c_m = (-1)^m S^m w / m!.
    let mut coeffs = vec![w_fall.clone()];
    let mut cur = w_fall.clone();
    let mut m = 0usize;
    loop {
        m += 1;
        cur = op_apply(&s_op, &cur)?;
        if cur.is_zero() {
            break;
        }
        let factor = if m % 2 == 0 { Rational::one() } else { -Rational::one() }
            / Rational::from_integer(factorial(m));
        coeffs.push(cur.scale(&factor));
    }

    // (i) The a-expansion evaluated at sample parameters reproduces the
    // Charlier family computed independently through its raising operator.
    let mut family_ok = true;
    for a in a_samples {
        let mut assembled = CliffordPolynomial::zero(n);
        let mut am = Rational::one();
        for c in &coeffs {
            assembled = assembled.try_add(&c.scale(&am))?;
            am *= a;
        }
        let direct = appell_w(&AppellFamilySpec::charlier(n, h.clone(), a.clone())?, k)?;
        if assembled != direct {
            family_ok = false;
        }
    }

    // (ii) d/da w = -S w, compared per power of a: (m+1)c_{m+1} = -S c_m.
    let mut evolution_ok = true;
    for m in 0..coeffs.len() {
        let lhs = if m + 1 < coeffs.len() {
            coeffs[m + 1].scale(&Rational::from_integer(BigInt::from(m + 1)))
        } else {
            CliffordPolynomial::zero(n)
        };
        let rhs = op_apply(&s_op, &coeffs[m])?.neg();
        if lhs != rhs {
            evolution_ok = false;
        }
    }

    // (iii) The printed form d/da w = -a S w would need
    // (r+1) c_{r+1} = -S c_{r-1} for every power a^r; find the first failure.
    let mut printed_ok = true;
    let mut printed_witness = None;
    for r in 0..=coeffs.len() {
        let lhs = if r + 1 < coeffs.len() {
            coeffs[r + 1].scale(&Rational::from_integer(BigInt::from(r + 1)))
        } else {
            CliffordPolynomial::zero(n)
        };
        let rhs = if r >= 1 && r - 1 < coeffs.len() {
            op_apply(&s_op, &coeffs[r - 1])?.neg()
        } else {
            CliffordPolynomial::zero(n)
        };
        let difference = lhs.try_sub(&rhs)?;
        if !difference.is_zero() {
            printed_ok = false;
            if printed_witness.is_none() {
                printed_witness = Some((r, difference));
            }
        }
    }

    Ok(CharlierEvolutionReport {
        n,
        h: h.clone(),
        k,
        a_coefficients: coeffs,
        family_samples_match: family_ok,
        evolution_holds: evolution_ok,
        printed_factor_a_holds: printed_ok,
        printed_witness,
    })
}

/// One documented divergence between a printed closed form and the value
/// forced by the defining relations.
#[derive(Clone, Debug)]
pub struct Discrepancy {
    pub id: String,
    pub description: String,
    pub computed: Value,
    pub printed: Value,
}

#[derive(Clone, Debug)]
pub struct DiscrepancyReport {
    pub n: usize,
    pub h: Rational,
    pub entries: Vec<Discrepancy>,
}

impl DiscrepancyReport {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "h": format_rational(&self.h),
            "count": self.entries.len(),
            "entries": self.entries.iter().map(|e| json!({
                "id": e.id,
                "description": e.description,
                "computed": e.computed,
                "printed": e.printed,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Runs every implemented cross-check of a printed closed form against the
/// value forced by the defining relations, and reports each mismatch. The
/// report is expected to be nonempty; silence would mean the cross-checks
/// stopped exercising the printed forms.
pub fn discrepancy_report(n: usize, h: &Rational) -> Result<DiscrepancyReport> {
    check_dim(n)?;
    check_mesh(h)?;
    let mut entries = Vec::new();

    // mu closed form: the printed Pochhammer expression carries (-1)^m and
    // drops the -(1/n) on odd indices; the recursion from D G = tG does not.
    let k_max = 10;
    let mu = mu_table(n, k_max)?;
    let mut first_mismatch = None;
    for k in 0..=k_max {
        if mu[k] != mu_closed_form_printed(n, k) {
            first_mismatch = Some(k);
            break;
        }
    }
    if let Some(k) = first_mismatch {
        let hyper = hypergeometric_egf_check(n, k_max)?;
        entries.push(Discrepancy {
            id: "mu-closed-form".into(),
            description: format!(
                "printed Pochhammer closed form for mu_k first disagrees with the \
                 recursion forced by D G = tG at k={k}; the same sign error makes the \
                 printed hypergeometric split of the EGF use argument -t^2 X^2/4 \
                 (first mismatch at k={:?})",
                hyper.printed_first_mismatch
            ),
            computed: json!({
                "recursion": mu.iter().map(format_rational).collect::<Vec<_>>(),
            }),
            printed: json!({
                "closed_form": (0..=k_max)
                    .map(|k| format_rational(&mu_closed_form_printed(n, k)))
                    .collect::<Vec<_>>(),
            }),
        });
    }

    // Central quasi-monomial single-term formula at alpha = 2 e_1.
    let alpha = MultiIndex::unit(n, 1).incremented(1);
    let full = central_egf_quasimonomial(&alpha, h)?;
    let single = central_single_term_printed(&alpha, h)?;
    if full != single {
        entries.push(Discrepancy {
            id: "central-quasimonomial-single-term".into(),
            description: format!(
                "the quasi-monomial m_{alpha} equals the full expansion over all \
                 beta <= alpha, not the printed single term (gamma_alpha/alpha!)(x;h)_alpha"
            ),
            computed: full.to_json(),
            printed: single.to_json(),
        });
    }

    // Parameter evolution of the Poisson-Charlier family: no factor a.
    let evo = charlier_evolution_check(h, n, 2, &[Rational::one()])?;
    if evo.evolution_holds && !evo.printed_factor_a_holds {
        entries.push(Discrepancy {
            id: "charlier-evolution-factor-a".into(),
            description: "d/da w_k = -(sum_j forward_j) w_k holds exactly; the printed \
                          equation carries an extra factor a and fails"
                .into(),
            computed: json!({"evolution_holds": true}),
            printed: evo
                .printed_witness
                .as_ref()
                .map(|(r, p)| json!({"first_bad_a_power": r, "difference": p.to_json()}))
                .unwrap_or(Value::Null),
        });
    }

    // Even-degree expansion: single stratum |alpha| = m, not all strata <= m.
    let w2m = multinomial_w2m_check(h, n, 1)?;
    if w2m.matches_single_stratum && !w2m.printed_form_matches {
        entries.push(Discrepancy {
            id: "even-degree-multinomial-strata".into(),
            description: "(X_h)^{2m} 1 expands over the single stratum |alpha| = m; \
                          the printed double sum over all strata s <= m differs"
                .into(),
            computed: w2m.single_stratum.to_json(),
            printed: w2m.printed_double_sum.to_json(),
        });
    }

    Ok(DiscrepancyReport { n, h: h.clone(), entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::raising_op;
    use crate::rational::{rat, rint};

    #[test]
    fn mu_values_small_dimensions() {
        for n in 1..=4usize {
            let mu = mu_table(n, 4).unwrap();
            assert_eq!(mu[0], rint(1));
            assert_eq!(mu[1], rat(-1, n as i64));
            assert_eq!(mu[2], rat(1, n as i64));
            assert_eq!(mu[3], rat(-3, (n * (n + 2)) as i64));
            assert_eq!(mu[4], rat(3, (n * (n + 2)) as i64));
        }
    }

    #[test]
    fn mu_recursion_matches_its_closed_form_but_not_the_printed_one() {
        for n in 1..=4usize {
            let mu = mu_table(n, 10).unwrap();
            for k in 0..=10 {
                assert_eq!(mu[k], mu_closed_form(n, k), "n={n} k={k}");
            }
            // The printed form already disagrees at k=1 (and at k=2 in sign).
            assert_ne!(mu[1], mu_closed_form_printed(n, 1));
            assert_ne!(mu[2], mu_closed_form_printed(n, 2));
        }
    }

    #[test]
    fn falling_family_low_orders() {
        // n=1: w_1 = mu_1 X_h 1 = -x1 e1.
        let spec = AppellFamilySpec::falling(1, rint(1)).unwrap();
        let w = appell_w_all(&spec, 2).unwrap();
        assert_eq!(w[0], CliffordPolynomial::one(1));
        let e1 = Multivector::basis_vector(1, 1).unwrap();
        let want =
            CliffordPolynomial::coord(1, 1).unwrap().mul_mv_left(&e1).unwrap().neg();
        assert_eq!(w[1], want);

        // n=2: w_2 = -(1/2) sum_j (x_j^2 - h x_j).
        let spec = AppellFamilySpec::falling(2, rint(1)).unwrap();
        let w2 = appell_w(&spec, 2).unwrap();
        let mut want = CliffordPolynomial::zero(2);
        for j in 1..=2 {
            let ff = falling_factorial(
                &MultiIndex::unit(2, j).incremented(j),
                &rint(1),
            )
            .unwrap();
            want = want.try_add(&ff).unwrap();
        }
        assert_eq!(w2, want.scale(&rat(-1, 2)));
    }

    #[test]
    fn appell_degree_equals_k() {
        let spec = AppellFamilySpec::charlier(2, rint(1), rint(2)).unwrap();
        for (k, w) in appell_w_all(&spec, 5).unwrap().iter().enumerate() {
            assert_eq!(w.degree(), Some(k));
        }
    }

    #[test]
    fn lowering_property_families() {
        let h = rat(1, 2);
        let specs = vec![
            AppellFamilySpec::falling(2, h.clone()).unwrap(),
            AppellFamilySpec::charlier(2, h.clone(), rint(1)).unwrap(),
            AppellFamilySpec::bernoulli2(2, h.clone()).unwrap(),
            AppellFamilySpec::clifford_hermite_2h(2, h.clone()).unwrap(),
        ];
        for spec in specs {
            let report = appell_verify(&spec, 6).unwrap();
            assert!(report.all_pass(), "{}: {}", spec.name(), report.to_json());
        }
    }

    #[test]
    fn lowering_property_with_blade_base() {
        let base = Multivector::from_terms(
            2,
            [
                (crate::clifford::Blade::from_indices(&[1, 2], 2).unwrap(), rint(3)),
                (crate::clifford::Blade::SCALAR, rat(1, 2)),
            ],
        );
        let spec = AppellFamilySpec::charlier(2, rint(1), rint(1))
            .unwrap()
            .with_base(base)
            .unwrap();
        assert!(appell_verify(&spec, 4).unwrap().all_pass());
    }

    #[test]
    fn corrupted_mu_fails_at_that_index() {
        let spec = AppellFamilySpec::falling(2, rint(1)).unwrap();
        let mut egf = egf_truncate(&spec, 4).unwrap();
        egf.w[2] = egf.w[2].scale(&rint(-1));
        let report = egf_verify(&egf).unwrap();
        assert!(!report.all_pass());
        // k=2 breaks (D w_2 = 2 w_1 fails) and k=3 breaks (D w_3 = 3 w_2).
        let ks: Vec<usize> = report.failures.iter().map(|f| f.k).collect();
        assert!(ks.contains(&2));
        assert!(report.failures.iter().all(|f| !f.difference.is_zero()));
    }

    #[test]
    fn lambda_falling_is_x_h() {
        let spec = AppellFamilySpec::falling(2, rat(1, 2)).unwrap();
        let lambda = lambda_h_operator(&spec).unwrap();
        let xh = x_epsilon(&rat(1, 2), 2).unwrap();
        assert!(op_equal_truncated(&lambda, &xh, 2, 5).unwrap().equal);
    }

    #[test]
    fn lambda_charlier_closed_form() {
        // Lambda = sum_j e_j (x_j T^{-j} - a I).
        let a = rat(3, 2);
        let h = rint(1);
        let spec = AppellFamilySpec::charlier(2, h.clone(), a.clone()).unwrap();
        let lambda = lambda_h_operator(&spec).unwrap();
        let mut parts = Vec::new();
        for j in 1..=2 {
            parts.push(OperatorExpr::Compose(vec![
                OperatorExpr::BladeMulLeft(Multivector::basis_vector(2, j).unwrap()),
                OperatorExpr::sub(raising_op(j, &h), OperatorExpr::ScalarMul(a.clone())),
            ]));
        }
        let closed = OperatorExpr::Sum(parts);
        assert!(op_equal_truncated(&lambda, &closed, 2, 5).unwrap().equal);
    }

    #[test]
    fn lambda_hermite_is_x_minus_doubled_backward_dirac() {
        // For the doubled-mesh Hermite family, Lambda_h = X_h - D_{2h}^-.
        for h in [rint(1), rat(1, 2)] {
            let spec = AppellFamilySpec::clifford_hermite_2h(2, h.clone()).unwrap();
            let lambda = lambda_h_operator(&spec).unwrap();
            let closed = OperatorExpr::sub(
                x_epsilon(&h, 2).unwrap(),
                dirac_backward(&(&h * rint(2)), 2).unwrap(),
            );
            let check = op_equal_truncated(&lambda, &closed, 2, 5).unwrap();
            assert!(check.equal, "h={h}: {:?}", check.witness);
        }
    }

    #[test]
    fn lambda_log_lambda_route_agrees() {
        let h = rat(1, 2);
        for spec in [
            AppellFamilySpec::falling(2, h.clone()).unwrap(),
            AppellFamilySpec::charlier(2, h.clone(), rint(2)).unwrap(),
            AppellFamilySpec::bernoulli2(2, h.clone()).unwrap(),
            AppellFamilySpec::clifford_hermite_2h(2, h.clone()).unwrap(),
        ] {
            let direct = lambda_h_operator(&spec).unwrap();
            let via_log = lambda_h_operator_via_log_lambda(&spec).unwrap();
            let check = op_equal_truncated(&direct, &via_log, 2, 4).unwrap();
            assert!(check.equal, "{}: {:?}", spec.name(), check.witness);
        }
    }

    #[test]
    fn sigma_inverse_low_degree_images() {
        // Charlier: sigma^{-1} x_1 = x_1 - a. Bernoulli2: sigma^{-1} x_1 = x_1 + h/2.
        let x1 = CliffordPolynomial::coord(2, 1).unwrap();
        let spec = AppellFamilySpec::charlier(2, rint(1), rat(5, 2)).unwrap();
        let mut want = x1.clone();
        want.add_term(MultiIndex::zero(2), Multivector::scalar(2, rat(-5, 2)));
        assert_eq!(sigma_inverse_apply(&spec, &x1).unwrap(), want);

        let spec = AppellFamilySpec::bernoulli2(2, rat(1, 3)).unwrap();
        let mut want = x1.clone();
        want.add_term(MultiIndex::zero(2), Multivector::scalar(2, rat(1, 6)));
        assert_eq!(sigma_inverse_apply(&spec, &x1).unwrap(), want);
    }

    #[test]
    fn rodrigues_matches_operational_route() {
        let h = rint(1);
        for spec in [
            AppellFamilySpec::charlier(2, h.clone(), rint(1)).unwrap(),
            AppellFamilySpec::bernoulli2(2, h.clone()).unwrap(),
            AppellFamilySpec::clifford_hermite_2h(2, h.clone()).unwrap(),
        ] {
            let report = rodrigues_verify(&spec, 4).unwrap();
            assert!(report.all_pass(), "{}: {}", spec.name(), report.to_json());
        }
    }

    #[test]
    fn intertwining_on_truncation() {
        let spec = AppellFamilySpec::charlier(2, rint(1), rint(2)).unwrap();
        let check = intertwine_check(&spec, 4).unwrap();
        assert!(check.equal, "{:?}", check.witness);
    }

    #[test]
    fn quasi_monomials_forward_trivial_kappa_are_falling_factorials() {
        let h = rat(1, 2);
        for alpha in [vec![3], vec![2, 1], vec![0, 2]] {
            let alpha = MultiIndex::new(alpha);
            let m = quasi_monomial(&Ladder::Forward { h: h.clone() }, &KappaSpec::Falling, &alpha)
                .unwrap();
            assert_eq!(m, falling_factorial(&alpha, &h).unwrap());
        }
    }

    #[test]
    fn quasi_monomials_charlier() {
        let a = rat(3, 4);
        let h = rint(1);
        let kappa = KappaSpec::Charlier { a: a.clone(), h: h.clone() };
        let ladder = Ladder::Forward { h: h.clone() };
        // alpha = (1): x1 - a.
        let m1 = quasi_monomial(&ladder, &kappa, &MultiIndex::new(vec![1])).unwrap();
        let mut want = CliffordPolynomial::coord(1, 1).unwrap();
        want.add_term(MultiIndex::zero(1), Multivector::scalar(1, -a.clone()));
        assert_eq!(m1, want);
        // alpha = (2): x1^2 - (2a+h) x1 + a^2.
        let m2 = quasi_monomial(&ladder, &kappa, &MultiIndex::new(vec![2])).unwrap();
        let mut want = CliffordPolynomial::zero(1);
        want.add_term(MultiIndex::new(vec![2]), Multivector::one(1));
        want.add_term(
            MultiIndex::new(vec![1]),
            Multivector::scalar(1, -(rint(2) * &a + &h)),
        );
        want.add_term(MultiIndex::zero(1), Multivector::scalar(1, &a * &a));
        assert_eq!(m2, want);
    }

    #[test]
    fn quasi_monomial_ladder_eigenrelation() {
        let h = rat(1, 2);
        let ladders = [
            (Ladder::Forward { h: h.clone() }, KappaSpec::Charlier { a: rint(1), h: h.clone() }),
            (Ladder::Forward { h: h.clone() }, KappaSpec::Bernoulli2 { h: h.clone() }),
            (Ladder::Central { h: h.clone() }, KappaSpec::Falling),
        ];
        for (ladder, kappa) in ladders {
            for alpha in [vec![2, 1], vec![1, 2], vec![3, 0]] {
                let alpha = MultiIndex::new(alpha);
                let m = quasi_monomial(&ladder, &kappa, &alpha).unwrap();
                for j in 1..=2 {
                    let lowered = op_apply(&ladder_lowering_op(&ladder, j), &m).unwrap();
                    let want = match alpha.decremented(j) {
                        Some(beta) => quasi_monomial(&ladder, &kappa, &beta)
                            .unwrap()
                            .scale(&rint(alpha.entry(j) as i64)),
                        None => CliffordPolynomial::zero(2),
                    };
                    assert_eq!(lowered, want, "{:?} alpha={alpha} j={j}", kappa.name());
                }
            }
        }
    }

    #[test]
    fn central_quasi_monomials_are_plain_monomials_in_one_variable() {
        // x cosh^{-1} ladder: m_(2) = x^2 for n=1.
        let h = rat(1, 2);
        let m2 = quasi_monomial(
            &Ladder::Central { h: h.clone() },
            &KappaSpec::Falling,
            &MultiIndex::new(vec![2]),
        )
        .unwrap();
        let x1 = CliffordPolynomial::coord(1, 1).unwrap();
        assert_eq!(m2, x1.try_mul(&x1).unwrap());
    }

    #[test]
    fn central_egf_route_matches_operator_route() {
        for h in [rint(1), rat(1, 2)] {
            for alpha in [vec![0], vec![1], vec![2], vec![3], vec![4]] {
                let alpha = MultiIndex::new(alpha);
                let via_egf = central_egf_quasimonomial(&alpha, &h).unwrap();
                let via_op =
                    quasi_monomial(&Ladder::Central { h: h.clone() }, &KappaSpec::Falling, &alpha)
                        .unwrap();
                assert_eq!(via_egf, via_op, "h={h} alpha={alpha}");
            }
        }
    }

    #[test]
    fn central_rejects_nontrivial_kappa() {
        let err = quasi_monomial(
            &Ladder::Central { h: rint(1) },
            &KappaSpec::Charlier { a: rint(1), h: rint(1) },
            &MultiIndex::new(vec![1]),
        );
        assert!(matches!(err, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn hermite_values() {
        // H_(2) = x^2 - 1, H_(1,1) = x1 x2, H_0 = 1.
        let h2 = hermite_polynomial(&MultiIndex::new(vec![2])).unwrap();
        let x1 = CliffordPolynomial::coord(1, 1).unwrap();
        let mut want = x1.try_mul(&x1).unwrap();
        want.add_term(MultiIndex::zero(1), Multivector::scalar(1, rint(-1)));
        assert_eq!(h2, want);

        let h11 = hermite_polynomial(&MultiIndex::new(vec![1, 1])).unwrap();
        let x1 = CliffordPolynomial::coord(2, 1).unwrap();
        let x2 = CliffordPolynomial::coord(2, 2).unwrap();
        assert_eq!(h11, x1.try_mul(&x2).unwrap());

        assert_eq!(
            hermite_polynomial(&MultiIndex::zero(2)).unwrap(),
            CliffordPolynomial::one(2)
        );
    }

    #[test]
    fn weierstrass_inverse_round_trip() {
        for beta in [vec![4], vec![3, 2], vec![2, 2]] {
            let beta = MultiIndex::new(beta);
            let n = beta.len();
            let monomial = CliffordPolynomial::monomial(beta, Multivector::one(n));
            let smoothed = weierstrass_inverse(&hermite_polynomial_input(&monomial)).unwrap();
            assert_eq!(smoothed, monomial);
        }

        fn hermite_polynomial_input(p: &CliffordPolynomial) -> CliffordPolynomial {
            let op = laplacian_continuum(p.dim())
                .unwrap()
                .scaled(Rational::new(BigInt::from(-1), BigInt::from(2)));
            exp_lowering_apply(&op, &Rational::one(), p).unwrap()
        }
    }

    #[test]
    fn exp_lowering_examples() {
        // exp(t Lap_h) x1^2 = x1^2 + 2t.
        let x1 = CliffordPolynomial::coord(2, 1).unwrap();
        let p = x1.try_mul(&x1).unwrap();
        let t = rat(1, 3);
        let got =
            exp_lowering_apply(&laplacian_discrete(&rint(1), 2).unwrap(), &t, &p).unwrap();
        let mut want = p.clone();
        want.add_term(MultiIndex::zero(2), Multivector::scalar(2, rat(2, 3)));
        assert_eq!(got, want);
        // Constants are fixed points.
        let one = CliffordPolynomial::one(2);
        assert_eq!(
            exp_lowering_apply(&laplacian_discrete(&rint(1), 2).unwrap(), &t, &one).unwrap(),
            one
        );
    }

    #[test]
    fn exp_lowering_rejects_identity() {
        let p = CliffordPolynomial::coord(1, 1).unwrap();
        match exp_lowering_apply(&OperatorExpr::Identity, &rint(1), &p) {
            Err(Error::NotDegreeLowering { .. }) => {}
            other => panic!("expected NotDegreeLowering, got {other:?}"),
        }
    }

    #[test]
    fn heat_evolution_solves_discrete_heat_equation() {
        // d/dt of the t-expansion equals Lap_h applied termwise.
        let h = rat(1, 2);
        for alpha in [vec![2], vec![3, 1], vec![2, 2]] {
            let alpha = MultiIndex::new(alpha);
            let n = alpha.len();
            let lap = laplacian_discrete(&h, n).unwrap();
            let cs = heat_t_coefficients(&alpha, &h).unwrap();
            for m in 0..cs.len() {
                let ddt = if m + 1 < cs.len() {
                    cs[m + 1].scale(&rint((m + 1) as i64))
                } else {
                    CliffordPolynomial::zero(n)
                };
                assert_eq!(ddt, op_apply(&lap, &cs[m]).unwrap(), "alpha={alpha} m={m}");
            }
        }
    }

    #[test]
    fn charlier_connection_identity() {
        for (n, h, d) in [(1, rat(1, 2), 6), (2, rint(1), 5)] {
            let check = charlier_connection_check(&h, n, d).unwrap();
            assert!(check.equal, "n={n}: {:?}", check.witness);
        }
    }

    #[test]
    fn multinomial_even_powers() {
        let report = multinomial_w2m_check(&rint(1), 2, 1).unwrap();
        assert!(report.matches_single_stratum);
        assert!(!report.printed_form_matches);
        // The printed double sum differs exactly by the s=0 stratum, i.e. -1.
        assert_eq!(
            report.printed_difference,
            CliffordPolynomial::one(2)
        );
        let report = multinomial_w2m_check(&rat(1, 2), 2, 2).unwrap();
        assert!(report.matches_single_stratum);
        let report = multinomial_w2m_check(&rint(1), 3, 0).unwrap();
        assert!(report.matches_single_stratum);
        assert!(report.printed_form_matches); // m=0: both are the single empty stratum
    }

    #[test]
    fn hypergeometric_split() {
        for n in 1..=4 {
            let report = hypergeometric_egf_check(n, 9).unwrap();
            assert!(report.recursion_form_matches, "n={n}");
            assert_eq!(report.printed_first_mismatch, Some(1));
        }
    }

    #[test]
    fn charlier_evolution_report() {
        let report =
            charlier_evolution_check(&rint(1), 2, 3, &[rint(1), rat(1, 2), rint(-2)]).unwrap();
        assert!(report.family_samples_match);
        assert!(report.evolution_holds);
        assert!(!report.printed_factor_a_holds);
        assert!(report.printed_witness.is_some());
    }

    #[test]
    fn discrepancy_report_is_nonempty_and_complete() {
        let report = discrepancy_report(2, &rint(1)).unwrap();
        let ids: Vec<&str> = report.entries.iter().map(|e| e.id.as_str()).collect();
        assert!(ids.contains(&"mu-closed-form"));
        assert!(ids.contains(&"central-quasimonomial-single-term"));
        assert!(ids.contains(&"charlier-evolution-factor-a"));
        assert!(ids.contains(&"even-degree-multinomial-strata"));
        assert_eq!(report.entries.len(), 4);
    }

    #[test]
    fn spec_validation_errors() {
        assert!(AppellFamilySpec::falling(0, rint(1)).is_err());
        assert!(AppellFamilySpec::falling(2, rint(0)).is_err());
        let mismatched = AppellFamilySpec::new(
            2,
            rint(1),
            KappaSpec::Charlier { a: rint(1), h: rat(1, 2) },
            Multivector::one(2),
        );
        assert!(mismatched.is_err());
        let zero_base = AppellFamilySpec::falling(2, rint(1))
            .unwrap()
            .with_base(Multivector::zero(2));
        assert!(zero_base.is_err());
    }
}
