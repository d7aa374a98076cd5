//! The commutation relations the whole calculus stands on, checked on a
//! degree truncation, plus the discrete Leibniz rule on random samples.
//!
//! [forward_j, x_k T^{-k}] = delta_jk I      (ladder pairing)
//! [x_j T^{-j}, x_k T^{-k}] = 0              (raising components commute)
//! T^{-j} forward_j = backward_j

use appell::{op_apply, product_rule_check, relations_report, x_epsilon, CliffordPolynomial};

fn main() -> appell::Result<()> {
    let h = appell::parse_rational("1/3")?;
    let report = relations_report(2, &h, 5)?;
    for check in &report.checks {
        println!("{}  {}", if check.check.equal { "ok " } else { "BAD" }, check.name);
    }
    assert!(report.all_pass());

    // (X_h)^2 = -sum_j (x_j T^{-j})^2: the square of the shifted vector
    // variable collapses to commuting scalar pieces.
    let x_h = x_epsilon(&h, 2)?;
    let one = CliffordPolynomial::one(2);
    let x2 = op_apply(&x_h, &op_apply(&x_h, &one)?)?;
    println!("(X_h)^2 1 = {x2}");

    let leibniz = product_rule_check(2, &h, 4, 30, 1)?;
    println!(
        "Leibniz rule on {} random pairs: {}",
        leibniz.samples,
        if leibniz.all_pass() { "all pass" } else { "FAILED" }
    );
    assert!(leibniz.all_pass());
    Ok(())
}
