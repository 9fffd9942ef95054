//! The semigroup `T(s) = exp(s D_N)` on polynomials and its approximation by
//! `exp(s A_r)`, `A_r = r D_N (r − D_N)⁻¹`.

use qjacobi::dynamics::{resolvent_approx_check, semigroup_property_check, PhiBasis};
use qjacobi::qalgebra::{rat, to_f64, ConjugatePair, Params};
use qjacobi::symfunc::SymPoly;

fn main() -> qjacobi::Result<()> {
    let base = Params::new(
        rat(1, 3),
        rat(1, 2),
        rat(3, 2),
        rat(-2, 1),
        ConjugatePair::new(rat(1, 2), rat(3, 4))?,
    )?;
    let n = 2;
    let params = base.shift_level(n);
    let f = SymPoly::power_sum(n, 1).multiply(&SymPoly::power_sum(n, 2))?;

    let basis = PhiBasis::new(&params, n, 3)?;
    println!(
        "eigenvalues: {:?}",
        basis.eigenvalues.iter().map(to_f64).collect::<Vec<_>>()
    );
    for s in [0.0, 0.5, 2.0] {
        let g = basis.apply(&f, s)?;
        println!(
            "T({s}) p1 p2 at (1/2, -1/4): {:.8}",
            g.evaluate(&[0.5, -0.25])
        );
    }
    let sg = semigroup_property_check(&params, n, 3, &[(0.5, 1.5)])?;
    println!(
        "|T(s)T(s') − T(s+s')| relative: {:.2e}",
        sg.max_relative_error()
    );

    let rep = resolvent_approx_check(&f, 1.0, &[10, 100, 1000], &params, n, 6)?;
    for r in &rep.rows {
        println!("r = {:>6}: sup distance {:.3e}", r.r, r.distance);
    }
    Ok(())
}
