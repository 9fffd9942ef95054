//! `⟨φ_{λ|N}²⟩` at level-shifted parameters approaching `h_λ` as `N` grows.

use qjacobi::bigqjacobi::h_norm;
use qjacobi::dynamics::norm_limit_check;
use qjacobi::qalgebra::{format_scalar, rat, ConjugatePair, Params, Partition};

fn main() -> qjacobi::Result<()> {
    // small t makes the convergence visible at modest N
    let base = Params::new(
        rat(1, 4),
        rat(1, 20),
        rat(3, 2),
        rat(-2, 1),
        ConjugatePair::new(rat(1, 2), rat(3, 4))?,
    )?;
    for lam in ["1", "2", "1,1"] {
        let lam: Partition = lam.parse()?;
        println!("h{lam} = {}", format_scalar(&h_norm(&lam, &base)));
        let rep = norm_limit_check(&lam, &base, &[2, 3], 8)?;
        for r in &rep.rows {
            println!(
                "  N={}  ⟨φ²⟩ = {:.6e}  gap {:.3e}  truncation tolerance {:.1e}",
                r.n, r.value, r.gap, r.tolerance
            );
        }
    }
    Ok(())
}
