//! Exact operational calculus for Appell sets of Clifford-vector-valued
//! polynomials on the lattice hZ^n.
//!
//! The exact layer works over arbitrary-precision rationals throughout:
//! Clifford numbers ([`Multivector`]), polynomials with Clifford
//! coefficients ([`CliffordPolynomial`]), truncated formal power series
//! ([`TruncatedSeries`]), and an interpreted operator language
//! ([`OperatorExpr`]) whose expressions act exactly on polynomials. On top
//! of that sit the Appell families w_k = mu_k (Lambda_h)^k a for a catalog
//! of kappa symbols ([`KappaSpec`]), the Rodrigues route through
//! sigma^{-1}, quasi-monomial ladders, and discrete Hermite/heat
//! propagators. Every identity the calculus rests on is checkable at
//! runtime, and [`discrepancy_report`] documents where printed closed forms
//! for these objects contradict the defining relations.
//!
//! The floating-point layer ([`spectral`]) is deliberately separate:
//! Fourier symbols on the fundamental zone, doubler counts, a finite
//! lattice Fourier transform, Bessel cross-identities, and a quadrature
//! route to sigma^{-1}. Nothing exact depends on it.

pub mod appell;
pub mod clifford;
pub mod error;
pub mod operators;
pub mod poly;
pub mod rational;
pub mod series;
pub mod spectral;

pub use appell::{
    appell_verify, appell_w, appell_w_all, central_egf_quasimonomial, charlier_connection_check,
    charlier_evolution_check, discrepancy_report, egf_truncate, egf_verify, exp_lowering_apply,
    exp_lowering_t_coeffs, heat_propagate, heat_t_coefficients, hermite_polynomial,
    hypergeometric_egf_check, intertwine_check, ladder_lowering_op, lambda_h_operator,
    lambda_h_operator_via_log_lambda, mu_closed_form, mu_table, multinomial_w2m_check,
    quasi_monomial, rodrigues_verify, rodrigues_w, sigma_inverse_apply, sigma_inverse_operator,
    sigma_operator, weierstrass_inverse, AppellFamilySpec, AppellVerifyReport, DiscrepancyReport,
    EGFTruncation, Ladder,
};
pub use clifford::{blade_product, Blade, Multivector, MAX_DIM};
pub use error::{Error, Result};
pub use operators::{
    commutator, dirac_backward, dirac_central, dirac_continuum, dirac_forward,
    laplacian_continuum, laplacian_discrete, op_apply, op_equal_truncated, op_matrix,
    product_rule_check, raising_op, relations_report, x_epsilon, EqualityCheck, Generator,
    GeneratorKind, OperatorExpr, OperatorMatrix, SeriesSource,
};
pub use poly::{
    falling_factorial, l1_level_points, multi_indices_up_to, CliffordPolynomial, LatticePoint,
    MultiIndex,
};
pub use rational::{format_rational, parse_rational, Rational};
pub use series::{
    central_u_series, kappa_series, lambda_series_per_coordinate, pincherle_series, KappaSpec,
    TruncatedSeries,
};
pub use spectral::{
    bessel_identity_check, count_symbol_zeros, dft_finite, quadrature_inverse_check, symbol,
    BesselReport, ComplexMultivector, DiracScheme, DoublerReport, QuadratureReport, ZoneGrid,
};
