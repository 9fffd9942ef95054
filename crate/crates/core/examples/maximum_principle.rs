//! Randomized check of the positive maximum principle: `D_N f ≥ 0` wherever
//! `f` attains its minimum.

use qjacobi::dynamics::pmp_test;
use qjacobi::qalgebra::{rat, ConjugatePair, Params};

fn main() -> qjacobi::Result<()> {
    let base = Params::new(
        rat(1, 3),
        rat(1, 2),
        rat(3, 2),
        rat(-2, 1),
        ConjugatePair::new(rat(1, 2), rat(3, 4))?,
    )?;
    for (n, k) in [(1, 10), (2, 6)] {
        let rep = pmp_test(&base.shift_level(n), n, k, 60, 1)?;
        println!(
            "N={n} K={k}: {} trials, {} interior minimizers, {} frontier-only, min D_N f = {:?}, violations {}",
            rep.trials,
            rep.interior_minimizers,
            rep.frontier_discards,
            rep.min_value,
            rep.violations.len()
        );
    }
    Ok(())
}
