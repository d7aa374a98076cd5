//! Quasi-monomial ladders: families m_alpha with L_j m_alpha = alpha_j
//! m_{alpha - e_j} for the forward and central difference ladders, and the
//! generating-function route to the central family.

use appell::{
    central_egf_quasimonomial, ladder_lowering_op, op_apply, quasi_monomial, KappaSpec, Ladder,
    MultiIndex,
};

fn main() -> appell::Result<()> {
    let h = appell::parse_rational("1")?;
    let a = appell::parse_rational("3/4")?;

    // Forward ladder with the trivial kappa: plain falling factorials.
    let trivial = quasi_monomial(
        &Ladder::Forward { h: h.clone() },
        &KappaSpec::Falling,
        &MultiIndex::new(vec![3]),
    )?;
    println!("falling  m_(3)  = {trivial}");

    // Poisson-Charlier kappa shifts the ladder.
    let kappa = KappaSpec::Charlier { a, h: h.clone() };
    for entries in [vec![1u32], vec![2]] {
        let alpha = MultiIndex::new(entries);
        let m = quasi_monomial(&Ladder::Forward { h: h.clone() }, &kappa, &alpha)?;
        println!("charlier m_{alpha} = {m}");
    }

    // Central ladder x cosh(h d)^{-1}: monomial-like along each axis.
    let central = Ladder::Central { h: h.clone() };
    let alpha = MultiIndex::new(vec![2, 2]);
    let m = quasi_monomial(&central, &KappaSpec::Falling, &alpha)?;
    println!("central  m_{alpha} = {m}");
    for j in 1..=2 {
        let lowered = op_apply(&ladder_lowering_op(&central, j), &m)?;
        let expected = quasi_monomial(&central, &KappaSpec::Falling, &alpha.decremented(j).unwrap())?
            .scale(&appell::parse_rational("2")?);
        assert_eq!(lowered, expected);
    }
    println!("central eigenrelation holds in both coordinates");

    // Same family out of the substitution series u: coefficients of
    // (x;h)_beta / beta! weighted by derivatives of u^beta at 0.
    for aa in 0..=4u32 {
        let alpha = MultiIndex::new(vec![aa]);
        assert_eq!(
            central_egf_quasimonomial(&alpha, &h)?,
            quasi_monomial(&central, &KappaSpec::Falling, &alpha)?,
        );
    }
    println!("generating-function route agrees up to alpha = (4)");
    Ok(())
}
