//! Macdonald polynomials `P_{λ|N}(x; q, t)` in the monomial basis, and their
//! stability as `N` grows.

use qjacobi::macdonald::{macdonald_eigenvalue, macdonald_poly, macdonald_stability_check};
use qjacobi::qalgebra::{format_scalar, partitions_of, rat};

fn main() -> qjacobi::Result<()> {
    let (q, t) = (rat(1, 3), rat(1, 2));
    for lam in partitions_of(3, 3) {
        let p = macdonald_poly(&lam, 3, &q, &t)?;
        println!(
            "P{lam}|3  eigenvalue {}",
            format_scalar(&macdonald_eigenvalue(&lam, 3, &q, &t))
        );
        for (kappa, c) in p.terms().iter().rev() {
            println!("    m{kappa}: {}", format_scalar(c));
        }
        println!(
            "    same coefficients in 4 variables: {}",
            macdonald_stability_check(&lam, 3, &q, &t)?
        );
    }
    Ok(())
}
