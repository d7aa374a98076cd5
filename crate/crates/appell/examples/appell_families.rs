//! The family catalog: build each Appell family on the same lattice, print
//! the first few polynomials, and confirm the lowering property
//! D_h^+ w_k = k w_{k-1} exactly.

use appell::{appell_verify, appell_w_all, parse_rational, AppellFamilySpec};

fn main() -> appell::Result<()> {
    let h = parse_rational("1/2")?;
    let families = [
        AppellFamilySpec::falling(2, h.clone())?,
        AppellFamilySpec::charlier(2, h.clone(), parse_rational("3/2")?)?,
        AppellFamilySpec::bernoulli2(2, h.clone())?,
        AppellFamilySpec::clifford_hermite_2h(2, h.clone())?,
    ];

    for spec in &families {
        println!("== {}", spec.name());
        for (k, w) in appell_w_all(spec, 3)?.iter().enumerate() {
            println!("  w_{k} = {w}");
        }
        let report = appell_verify(spec, 6)?;
        println!("  lowering D+ w_k = k w_(k-1), k <= 6: {}", report.summary());
        assert!(report.all_pass());
    }

    // The base element is free: a bivector-valued family is still Appell.
    let base = appell::Multivector::from_terms(
        2,
        [(appell::Blade::from_indices(&[1, 2], 2)?, parse_rational("3")?)],
    );
    let spec = AppellFamilySpec::charlier(2, h, parse_rational("1")?)?.with_base(base)?;
    println!("== {} with bivector base", spec.name());
    println!("  w_1 = {}", appell::appell_w(&spec, 1)?);
    assert!(appell_verify(&spec, 4)?.all_pass());
    Ok(())
}
