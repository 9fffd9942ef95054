//! Constant terms of `D_N p₂` and `D_N e₂` against their closed forms.

use qjacobi::bigqjacobi::{apply_dn, ct_closed_forms};
use qjacobi::qalgebra::{format_scalar, rat, ConjugatePair, Params};
use qjacobi::symfunc::SymPoly;

fn main() -> qjacobi::Result<()> {
    let base = Params::new(
        rat(1, 3),
        rat(1, 2),
        rat(3, 2),
        rat(-2, 1),
        ConjugatePair::new(rat(1, 2), rat(3, 4))?,
    )?;
    for n in 1..=5 {
        let p = base.shift_level(n);
        let (p2, e2) = ct_closed_forms(&p, n);
        let got_p2 = apply_dn(&SymPoly::power_sum(n, 2), &p, n)?.constant_term();
        let got_e2 = apply_dn(&SymPoly::elementary(n, 2), &p, n)?.constant_term();
        println!(
            "N={n}  CT(D p2) = {:>14}  match {}   CT(D e2) = {:>14}  match {}",
            format_scalar(&got_p2),
            got_p2 == p2,
            format_scalar(&got_e2),
            got_e2 == e2
        );
    }
    Ok(())
}
