//! The link `Sym(N) → Sym(N+1)` and the intertwining of big q-Jacobi
//! polynomials across consecutive levels.

use qjacobi::bigqjacobi::tn_pochhammer;
use qjacobi::dynamics::{intertwining_check, link_action};
use qjacobi::qalgebra::{format_scalar, partitions_up_to, rat, ConjugatePair, Params};
use qjacobi::symfunc::SymPoly;

fn main() -> qjacobi::Result<()> {
    let base = Params::new(
        rat(1, 3),
        rat(1, 2),
        rat(3, 2),
        rat(-2, 1),
        ConjugatePair::new(rat(1, 2), rat(3, 4))?,
    )?;
    let (q, t) = (&base.q, &base.t);

    let p2 = SymPoly::power_sum(2, 2);
    println!("link(p2 in 2 variables):");
    for (k, c) in link_action(&p2, q, t)?.terms().iter().rev() {
        println!("    m{k}: {}", format_scalar(c));
    }

    for n in 1..=2 {
        for lam in partitions_up_to(3, n) {
            let rep = intertwining_check(&lam, &base, n)?;
            println!(
                "N={n} λ={:<8} (t^N)_λ = {:<12} π stable {}  link {}",
                lam.to_string(),
                format_scalar(&tn_pochhammer(&lam, n, q, t)),
                rep.pi_equal,
                rep.link_equal
            );
        }
    }
    Ok(())
}
