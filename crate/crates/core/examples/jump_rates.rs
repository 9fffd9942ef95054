//! Jump rates of the `N`-particle process out of a configuration.

use qjacobi::bigqjacobi::OperatorCoeffs;
use qjacobi::dynamics::{rates, total_rate};
use qjacobi::qalgebra::{format_scalar, rat, to_f64, ConjugatePair, Params};
use qjacobi::statespace::State;

fn main() -> qjacobi::Result<()> {
    let params = Params::new(
        rat(1, 3),
        rat(1, 2),
        rat(3, 2),
        rat(-2, 1),
        ConjugatePair::new(rat(1, 2), rat(3, 4))?,
    )?
    .shift_level(2);
    let ops = OperatorCoeffs::new(&params, 2);
    let s: State = "N=2;+[1,3];-[];z=0".parse()?;
    println!(
        "from {s} at coordinates {:?}",
        s.coords(&params)
            .padded()
            .iter()
            .map(to_f64)
            .collect::<Vec<_>>()
    );
    let out = rates(&s, &ops)?;
    for r in &out {
        println!(
            "  -> {:<24} rate {}",
            r.target.to_string(),
            format_scalar(&r.rate)
        );
    }
    println!("total {}", format_scalar(&total_rate(&out)));
    Ok(())
}
