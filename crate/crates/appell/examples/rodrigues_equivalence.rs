//! Two constructions, one family: the operational route mu_k (Lambda_h)^k a
//! against the Rodrigues route lambda(0) sigma^{-1} applied to the
//! falling-factorial member, and the intertwining
//! Lambda_h = sigma^{-1} X_h sigma behind it.

use appell::{
    appell_w, intertwine_check, rodrigues_verify, rodrigues_w, sigma_inverse_apply,
    AppellFamilySpec, CliffordPolynomial,
};

fn main() -> appell::Result<()> {
    let h = appell::parse_rational("1")?;
    let spec = AppellFamilySpec::charlier(2, h.clone(), appell::parse_rational("5/2")?)?;

    // sigma^{-1} recentres coordinates: for this family x_1 goes to x_1 - a.
    let x1 = CliffordPolynomial::coord(2, 1)?;
    println!("sigma^-1 x_1 = {}", sigma_inverse_apply(&spec, &x1)?);

    for k in 0..=4 {
        let direct = appell_w(&spec, k)?;
        let via_rodrigues = rodrigues_w(&spec, k)?;
        assert_eq!(direct, via_rodrigues);
        println!("k={k}: both routes give {direct}");
    }

    for family in [
        AppellFamilySpec::bernoulli2(2, h.clone())?,
        AppellFamilySpec::clifford_hermite_2h(2, h.clone())?,
    ] {
        let report = rodrigues_verify(&family, 5)?;
        let tie = intertwine_check(&family, 4)?;
        println!(
            "{}: Rodrigues {} / intertwining {}",
            family.name(),
            if report.all_pass() { "ok" } else { "BAD" },
            if tie.equal { "ok" } else { "BAD" },
        );
        assert!(report.all_pass() && tie.equal);
    }
    Ok(())
}
