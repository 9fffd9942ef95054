//! Detailed-balance stationary measure on a window, its exactness checks, and
//! orthogonality of the big q-Jacobi polynomials under it.

use qjacobi::dynamics::{orthogonality_check, stationary_measure};
use qjacobi::qalgebra::{format_scalar, rat, ConjugatePair, Params};

fn main() -> qjacobi::Result<()> {
    let base = Params::new(
        rat(1, 3),
        rat(1, 2),
        rat(3, 2),
        rat(-2, 1),
        ConjugatePair::new(rat(1, 2), rat(3, 4))?,
    )?;
    let (n, k) = (2, 8);
    let params = base.shift_level(n);
    let m = stationary_measure(&params, n, k)?;
    println!("{} states in {} sectors", m.len(), m.sectors.len());
    for s in &m.sectors {
        println!(
            "  sector (+{}, -{}) mass {:.6} via {:?}",
            s.plus, s.minus, s.mass, s.method
        );
    }
    println!(
        "edges {}  cycle failures {}  global residual {}",
        m.check.edges,
        m.check.cycle_failures,
        format_scalar(&m.check.max_global_residual)
    );
    println!("estimated mass beyond the window {:.2e}", m.tail.tail_mass);
    m.write_csv(std::io::stdout().lock())?;

    let rep = orthogonality_check(&params, n, 10, 2)?;
    for p in &rep.pairs {
        println!(
            "⟨φ{} φ{}⟩ = {:+.3e}  (tolerance {:.3e})",
            p.lambda, p.mu, p.value, p.tolerance
        );
    }
    Ok(())
}
