//! Floating-point spectral side: Fourier symbols of the difference Dirac
//! operators on the fundamental zone [-pi/h, pi/h)^n, spurious symbol zeros
//! (doublers), a finite lattice Fourier transform, Bessel-function
//! cross-identities, and a quadrature route to the Rodrigues normalizer
//! sigma^{-1} = int_0^infty exp(-s sigma) ds.
//!
//! Everything here is f64; the exact side of the crate never depends on it.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde_json::{json, Value};
use statrs::function::gamma::gamma;

use crate::appell::{sigma_inverse_operator, sigma_operator, AppellFamilySpec};
use crate::clifford::{blade_product, check_dim, Blade, Multivector};
use crate::error::{Error, Result};
use crate::operators::op_matrix;
use crate::poly::LatticePoint;
use crate::rational::to_f64;

/// Discretization scheme for the Dirac operator.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DiracScheme {
    Forward,
    Backward,
    Central,
}

impl DiracScheme {
    pub fn name(&self) -> &'static str {
        match self {
            DiracScheme::Forward => "forward",
            DiracScheme::Backward => "backward",
            DiracScheme::Central => "central",
        }
    }
}

/// Terms whose magnitude falls below this fraction of the largest term are
/// treated as numerical noise and dropped.
const PRUNE_REL: f64 = 1e-15;

/// A Clifford number with complex f64 coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMultivector {
    dim: usize,
    terms: BTreeMap<Blade, Complex64>,
}

impl ComplexMultivector {
    pub fn zero(dim: usize) -> ComplexMultivector {
        ComplexMultivector { dim, terms: BTreeMap::new() }
    }

    pub fn from_multivector(m: &Multivector) -> ComplexMultivector {
        let mut out = ComplexMultivector::zero(m.dim());
        for (blade, c) in m.terms() {
            out.terms.insert(*blade, Complex64::new(to_f64(c), 0.0));
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<Blade, Complex64> {
        &self.terms
    }

    pub fn coeff(&self, blade: Blade) -> Complex64 {
        self.terms.get(&blade).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, blade: Blade, c: Complex64) {
        let entry = self.terms.entry(blade).or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
        if entry.norm() == 0.0 {
            self.terms.remove(&blade);
        }
    }

    fn prune(mut self) -> ComplexMultivector {
        let max = self.terms.values().map(|c| c.norm()).fold(0.0f64, f64::max);
        self.terms.retain(|_, c| c.norm() > PRUNE_REL * max && c.norm() > 0.0);
        self
    }

    pub fn try_add(&self, other: &ComplexMultivector) -> Result<ComplexMultivector> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: other.dim });
        }
        let mut out = self.clone();
        for (blade, c) in &other.terms {
            out.add_term(*blade, *c);
        }
        Ok(out.prune())
    }

    pub fn try_mul(&self, other: &ComplexMultivector) -> Result<ComplexMultivector> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: other.dim });
        }
        let mut out = ComplexMultivector::zero(self.dim);
        for (bj, cj) in &self.terms {
            for (bk, ck) in &other.terms {
                let (sign, blade) = blade_product(*bj, *bk, self.dim)?;
                out.add_term(blade, cj * ck * f64::from(sign));
            }
        }
        Ok(out.prune())
    }

    pub fn scale(&self, factor: Complex64) -> ComplexMultivector {
        let mut out = ComplexMultivector::zero(self.dim);
        for (blade, c) in &self.terms {
            out.add_term(*blade, c * factor);
        }
        out.prune()
    }

    /// Sum of squared coefficient magnitudes.
    pub fn frobenius_sq(&self) -> f64 {
        self.terms.values().map(|c| c.norm_sqr()).sum()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(blade, c)| {
                    json!({ "blade": blade.indices(), "re": c.re, "im": c.im })
                })
                .collect(),
        )
    }
}

fn check_float_mesh(h: f64) -> Result<()> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::InvalidMesh(format!("mesh must be positive and finite, got {h}")));
    }
    Ok(())
}

/// Fourier symbol of the chosen Dirac discretization at frequency y:
/// the plane wave exp(i<x,y>) is mapped to symbol(y) times itself.
pub fn symbol(scheme: DiracScheme, h: f64, n: usize, y: &[f64]) -> Result<ComplexMultivector> {
    check_dim(n)?;
    check_float_mesh(h)?;
    if y.len() != n {
        return Err(Error::DimensionMismatch { left: n, right: y.len() });
    }
    let mut out = ComplexMultivector::zero(n);
    for j in 1..=n {
        let phase = h * y[j - 1];
        let c = match scheme {
            DiracScheme::Forward => (Complex64::new(0.0, phase).exp() - 1.0) / h,
            DiracScheme::Backward => (1.0 - Complex64::new(0.0, -phase).exp()) / h,
            DiracScheme::Central => Complex64::new(0.0, phase.sin() / h),
        };
        out.add_term(Blade::from_indices(&[j], n)?, c);
    }
    Ok(out)
}

/// Uniform grid on the fundamental zone [-pi/h, pi/h)^n with the given
/// number of points per axis: y_j = -pi/h + 2 pi m /(h N), m = 0..N-1.
/// The canonical symbol zeros (y = 0 and the zone corners) land on the grid
/// exactly when N is even.
#[derive(Clone, Debug)]
pub struct ZoneGrid {
    h: f64,
    n: usize,
    points_per_axis: usize,
}

impl ZoneGrid {
    pub fn new(h: f64, n: usize, points_per_axis: usize) -> Result<ZoneGrid> {
        check_dim(n)?;
        check_float_mesh(h)?;
        if points_per_axis == 0 {
            return Err(Error::InvalidArgument("grid needs at least one point per axis".into()));
        }
        Ok(ZoneGrid { h, n, points_per_axis })
    }

    pub fn len(&self) -> usize {
        self.points_per_axis.pow(self.n as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn axis_value(&self, m: usize) -> f64 {
        -PI / self.h + 2.0 * PI * (m as f64) / (self.h * self.points_per_axis as f64)
    }

    /// Grid point for a flat index, first axis slowest (lexicographic).
    pub fn point(&self, flat: usize) -> Vec<f64> {
        let mut rest = flat;
        let mut out = vec![0.0; self.n];
        for j in (0..self.n).rev() {
            out[j] = self.axis_value(rest % self.points_per_axis);
            rest /= self.points_per_axis;
        }
        out
    }
}

/// Squared symbol magnitudes below this count as zeros of the symbol.
const ZERO_THRESHOLD: f64 = 1e-20;

#[derive(Clone, Debug)]
pub struct DoublerReport {
    pub scheme: DiracScheme,
    pub h: f64,
    pub n: usize,
    pub points_per_axis: usize,
    /// Grid points where the symbol vanishes, in lexicographic order.
    pub zeros: Vec<Vec<f64>>,
}

impl DoublerReport {
    pub fn count(&self) -> usize {
        self.zeros.len()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "scheme": self.scheme.name(),
            "h": self.h,
            "n": self.n,
            "points_per_axis": self.points_per_axis,
            "count": self.count(),
            "zeros": self.zeros,
        })
    }
}

/// Scans the zone grid for zeros of the symbol. The forward and backward
/// schemes vanish only at y = 0; the central scheme also vanishes at the
/// zone corners, giving 2^n spurious modes (doublers).
pub fn count_symbol_zeros(
    scheme: DiracScheme,
    h: f64,
    n: usize,
    points_per_axis: usize,
) -> Result<DoublerReport> {
    let grid = ZoneGrid::new(h, n, points_per_axis)?;
    let mut zeros = Vec::new();
    for flat in 0..grid.len() {
        let y = grid.point(flat);
        if symbol(scheme, h, n, &y)?.frobenius_sq() < ZERO_THRESHOLD {
            zeros.push(y);
        }
    }
    Ok(DoublerReport { scheme, h, n, points_per_axis, zeros })
}

/// Lattice Fourier transform of a finitely supported function:
/// (2 pi)^{-n/2} h^n sum_x g(x) exp(i<x,y>), restricted to the closed
/// fundamental zone; frequencies outside it map to zero.
pub fn dft_finite(
    samples: &[(LatticePoint, Multivector)],
    y: &[f64],
) -> Result<ComplexMultivector> {
    let n = y.len();
    check_dim(n)?;
    let first = samples
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty sample list".into()))?;
    let mesh = first.0.mesh().clone();
    let h = to_f64(&mesh);
    check_float_mesh(h)?;
    for (pt, value) in samples {
        if pt.dim() != n || value.dim() != n {
            return Err(Error::DimensionMismatch { left: n, right: pt.dim().max(value.dim()) });
        }
        if pt.mesh() != &mesh {
            return Err(Error::InvalidMesh(format!(
                "mixed meshes in sample list: {} and {}",
                mesh, pt.mesh()
            )));
        }
    }
    if y.iter().any(|&yj| yj.abs() > PI / h * (1.0 + 1e-12)) {
        return Ok(ComplexMultivector::zero(n));
    }
    let norm = h.powi(n as i32) * (2.0 * PI).powf(-(n as f64) / 2.0);
    let mut acc = ComplexMultivector::zero(n);
    for (pt, value) in samples {
        let dot: f64 = pt
            .multiples()
            .iter()
            .zip(y)
            .map(|(&m, &yj)| h * m as f64 * yj)
            .sum();
        let phase = Complex64::new(0.0, dot).exp();
        acc = acc.try_add(&ComplexMultivector::from_multivector(value).scale(phase))?;
    }
    Ok(acc.scale(Complex64::new(norm, 0.0)))
}

const BESSEL_TERM_LIMIT: usize = 300;

#[derive(Clone, Debug)]
pub struct BesselCase {
    pub s: f64,
    pub u: f64,
    /// Termwise sum with each coefficient from the Gamma function.
    pub gamma_series: f64,
    /// (u/2)^s/Gamma(s+1) times the 0F1 value from the Pochhammer recursion.
    pub hypergeometric: f64,
    /// sqrt(2/(pi u)) sin u, available at s = 1/2.
    pub closed_form: Option<f64>,
    pub rel_error: f64,
}

#[derive(Clone, Debug)]
pub struct BesselReport {
    pub tol: f64,
    pub max_rel_error: f64,
    pub cases: Vec<BesselCase>,
}

impl BesselReport {
    pub fn all_pass(&self) -> bool {
        self.max_rel_error < self.tol
    }

    pub fn to_json(&self) -> Value {
        json!({
            "tol": self.tol,
            "max_rel_error": self.max_rel_error,
            "all_pass": self.all_pass(),
            "cases": self.cases.iter().map(|c| json!({
                "s": c.s,
                "u": c.u,
                "gamma_series": c.gamma_series,
                "hypergeometric": c.hypergeometric,
                "closed_form": c.closed_form,
                "rel_error": c.rel_error,
            })).collect::<Vec<_>>(),
        })
    }
}

/// J_s(u) through the defining series with Gamma-function coefficients.
fn bessel_gamma_series(s: f64, u: f64) -> Result<f64> {
    let mut acc = 0.0f64;
    for m in 0..BESSEL_TERM_LIMIT {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let term = sign * (u / 2.0).powf(2.0 * m as f64 + s)
            / (gamma(m as f64 + 1.0) * gamma(m as f64 + s + 1.0));
        acc += term;
        if term.abs() < 1e-18 * acc.abs().max(1e-300) && m > 2 {
            return Ok(acc);
        }
    }
    Err(Error::TermLimit { limit: BESSEL_TERM_LIMIT })
}

/// J_s(u) = (u/2)^s/Gamma(s+1) 0F1(s+1; -u^2/4), the 0F1 evaluated by the
/// Pochhammer term recursion.
fn bessel_hypergeometric(s: f64, u: f64) -> Result<f64> {
    let z = -u * u / 4.0;
    let c = s + 1.0;
    let mut term = 1.0f64;
    let mut acc = 1.0f64;
    for m in 0..BESSEL_TERM_LIMIT {
        term *= z / ((c + m as f64) * (m as f64 + 1.0));
        acc += term;
        if term.abs() < 1e-18 * acc.abs().max(1e-300) && m > 2 {
            return Ok((u / 2.0).powf(s) / gamma(s + 1.0) * acc);
        }
    }
    Err(Error::TermLimit { limit: BESSEL_TERM_LIMIT })
}

/// Checks that the Gamma-coefficient series, the 0F1 route, and (at s = 1/2)
/// the elementary closed form agree pairwise to within tol.
pub fn bessel_identity_check(cases: &[(f64, f64)], tol: f64) -> Result<BesselReport> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let mut out = Vec::with_capacity(cases.len());
    let mut max_rel = 0.0f64;
    for &(s, u) in cases {
        if !(u.is_finite() && u > 0.0) {
            return Err(Error::InvalidArgument(format!("order point u must be positive, got {u}")));
        }
        if !(s.is_finite() && s > -1.0) {
            return Err(Error::InvalidArgument(format!("index s must exceed -1, got {s}")));
        }
        let a = bessel_gamma_series(s, u)?;
        let b = bessel_hypergeometric(s, u)?;
        let closed = if (s - 0.5).abs() < 1e-12 {
            Some((2.0 / (PI * u)).sqrt() * u.sin())
        } else {
            None
        };
        let mut values = vec![a, b];
        if let Some(c) = closed {
            values.push(c);
        }
        let mut rel = 0.0f64;
        for i in 0..values.len() {
            for j in i + 1..values.len() {
                let scale = values[i].abs().max(values[j].abs()).max(1e-300);
                rel = rel.max((values[i] - values[j]).abs() / scale);
            }
        }
        max_rel = max_rel.max(rel);
        out.push(BesselCase {
            s,
            u,
            gamma_series: a,
            hypergeometric: b,
            closed_form: closed,
            rel_error: rel,
        });
    }
    Ok(BesselReport { tol, max_rel_error: max_rel, cases: out })
}

/// Dense square f64 matrix, row-major.
#[derive(Clone, Debug)]
struct FMatrix {
    size: usize,
    data: Vec<f64>,
}

impl FMatrix {
    fn from_data(size: usize, data: Vec<f64>) -> FMatrix {
        assert_eq!(data.len(), size * size);
        FMatrix { size, data }
    }

    fn identity(size: usize) -> FMatrix {
        let mut data = vec![0.0; size * size];
        for i in 0..size {
            data[i * size + i] = 1.0;
        }
        FMatrix { size, data }
    }

    fn add(&self, other: &FMatrix) -> FMatrix {
        FMatrix {
            size: self.size,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    fn scale(&self, c: f64) -> FMatrix {
        FMatrix { size: self.size, data: self.data.iter().map(|a| a * c).collect() }
    }

    fn mul(&self, other: &FMatrix) -> FMatrix {
        let s = self.size;
        let mut data = vec![0.0; s * s];
        for i in 0..s {
            for k in 0..s {
                let a = self.data[i * s + k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..s {
                    data[i * s + j] += a * other.data[k * s + j];
                }
            }
        }
        FMatrix { size: s, data }
    }

    fn norm_inf(&self) -> f64 {
        let s = self.size;
        (0..s)
            .map(|i| self.data[i * s..(i + 1) * s].iter().map(|a| a.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    fn max_abs_diff(&self, other: &FMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// exp(M) by scaling and squaring with a Taylor kernel.
fn mat_exp(m: &FMatrix) -> FMatrix {
    let norm = m.norm_inf();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = m.scale(0.5f64.powi(squarings as i32));
    let mut acc = FMatrix::identity(m.size);
    let mut term = FMatrix::identity(m.size);
    for k in 1..=20 {
        term = term.mul(&scaled).scale(1.0 / k as f64);
        acc = acc.add(&term);
    }
    for _ in 0..squarings {
        acc = acc.mul(&acc);
    }
    acc
}

const GL5_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683,
    0.0,
    0.538_469_310_105_683,
    0.906_179_845_938_664,
];
const GL5_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189,
    0.478_628_670_499_366,
    0.568_888_888_888_889,
    0.478_628_670_499_366,
    0.236_926_885_056_189,
];

#[derive(Clone, Debug)]
pub struct QuadratureReport {
    pub family: String,
    pub n: usize,
    pub degree: usize,
    pub s_max: f64,
    pub panels: usize,
    pub max_entry_error: f64,
    /// e^{-s_max}: the truncation tail of the integral for the trivial
    /// family, and the leading scale of the tail for the others.
    pub expected_tail: f64,
    pub tol: f64,
}

impl QuadratureReport {
    pub fn pass(&self) -> bool {
        self.max_entry_error < self.tol
    }

    pub fn to_json(&self) -> Value {
        json!({
            "family": self.family,
            "n": self.n,
            "degree": self.degree,
            "s_max": self.s_max,
            "panels": self.panels,
            "max_entry_error": self.max_entry_error,
            "expected_tail": self.expected_tail,
            "tol": self.tol,
            "pass": self.pass(),
        })
    }
}

/// Validates the integral representation sigma^{-1} = int_0^infty e^{-s sigma} ds
/// on the degree-d truncation: sigma's exact matrix must be unipotent (so the
/// integral converges entrywise), the integral is truncated at s_max and
/// evaluated by composite 5-point Gauss-Legendre quadrature with matrix
/// exponentials, and the result is compared to the float image of the exact
/// sigma^{-1} matrix.
pub fn quadrature_inverse_check(
    spec: &AppellFamilySpec,
    d: usize,
    s_max: f64,
    panels: usize,
    tol: f64,
) -> Result<QuadratureReport> {
    if !(s_max.is_finite() && s_max > 0.0) {
        return Err(Error::InvalidArgument(format!("s_max must be positive, got {s_max}")));
    }
    if panels == 0 {
        return Err(Error::InvalidArgument("at least one quadrature panel is required".into()));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let n = spec.n();
    let sigma_exact = op_matrix(&sigma_operator(spec), n, d)?;
    if !sigma_exact.sub(&sigma_exact.identity_like()).is_nilpotent() {
        return Err(Error::NotUnipotent(format!(
            "sigma - I is not nilpotent on the degree-{d} truncation; the integral \
             representation of sigma^{{-1}} does not converge"
        )));
    }
    let inverse_exact = op_matrix(&sigma_inverse_operator(spec), n, d)?;
    let size = sigma_exact.size();
    let a = FMatrix::from_data(size, sigma_exact.to_f64());
    let target = FMatrix::from_data(size, inverse_exact.to_f64());

    let width = s_max / panels as f64;
    let mut quad = FMatrix::from_data(size, vec![0.0; size * size]);
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * width;
        for (node, weight) in GL5_NODES.iter().zip(GL5_WEIGHTS) {
            let s = mid + 0.5 * width * node;
            let integrand = mat_exp(&a.scale(-s));
            quad = quad.add(&integrand.scale(0.5 * width * weight));
        }
    }

    Ok(QuadratureReport {
        family: spec.name(),
        n,
        degree: d,
        s_max,
        panels,
        max_entry_error: quad.max_abs_diff(&target),
        expected_tail: (-s_max).exp(),
        tol,
    })
}
