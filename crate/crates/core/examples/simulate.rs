//! Event-driven simulation and comparison of occupation times with the
//! stationary measure.

use qjacobi::dynamics::{compare_with_stationary, simulate, FrontierPolicy, SimulationConfig};
use qjacobi::qalgebra::{rat, ConjugatePair, Params};
use qjacobi::statespace::State;

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

    let start: State = "N=2;+[1];-[1];z=0".parse()?;
    let config = SimulationConfig {
        horizon: 20.0,
        max_events: None,
        k: 6,
        policy: FrontierPolicy::Stop,
        seed: 11,
    };
    let tr = simulate(&start, &params, n, &config)?;
    println!(
        "{} jumps by t = {:.4}, stopped at the frontier: {}",
        tr.jumps(),
        tr.end_time,
        tr.truncated
    );
    for (t, s) in tr.path.iter().take(8) {
        println!("  {t:.6}  {s}");
    }

    let cmp = compare_with_stationary(&params, n, 6, f64::INFINITY, Some(1_000_000), 7)?;
    for s in &cmp.sectors {
        println!(
            "sector (+{}, -{}): {} jumps, TV {:.4}",
            s.plus, s.minus, s.jumps, s.total_variation
        );
    }
    println!("mixture TV {:.4}", cmp.total_variation);
    Ok(())
}
