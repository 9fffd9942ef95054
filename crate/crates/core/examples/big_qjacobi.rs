//! Big q-Jacobi polynomials `φ_{λ|N}`: eigenvalues, the eigenrelation
//! `D_N φ = μ φ`, the coefficients `π_N(λ, ν)` and the symmetric function `Φ_λ`.

use qjacobi::bigqjacobi::{apply_dn, big_qjacobi, mu_infinity, phi_symfunc, pi_coeffs};
use qjacobi::qalgebra::{format_scalar, rat, ConjugatePair, Params, Partition};

fn main() -> qjacobi::Result<()> {
    let base = Params::new(
        rat(1, 3),
        rat(1, 2),
        rat(3, 2),
        rat(-2, 1),
        ConjugatePair::new(rat(1, 2), rat(3, 4))?,
    )?;
    let lam: Partition = "2,1".parse()?;
    let n = 2;
    let params = base.shift_level(n);
    println!("level-{n} parameters: {params}");

    let phi = big_qjacobi(&lam, &params, n)?;
    println!("μ{lam}|{n} = {}", format_scalar(&phi.eigenvalue));
    println!("μ{lam}|∞ = {}", format_scalar(&mu_infinity(&lam, &base)));
    println!("φ{lam}|{n} in monomials:");
    for (kappa, c) in phi.poly.terms().iter().rev() {
        println!("    m{kappa}: {}", format_scalar(c));
    }

    let residual = apply_dn(&phi.poly, &params, n)?.sub(&phi.poly.scale(&phi.eigenvalue))?;
    println!("D_N φ − μ φ is zero: {}", residual.is_zero());

    let pi = pi_coeffs(&lam, &params, n)?;
    let pi_up = pi_coeffs(&lam, &base.shift_level(n + 1), n + 1)?;
    println!("π_{n}(λ, ·) = π_{}(λ, ·): {}", n + 1, pi == pi_up);
    println!("Φ{lam} = Σ π(λ, ν) P_ν:");
    for (nu, c) in phi_symfunc(&lam, &base)?.terms.iter().rev() {
        println!("    P{nu}: {}", format_scalar(c));
    }
    Ok(())
}
