//! The link `Sym(N) → Sym(N+1)` acting on renormalized Macdonald polynomials,
//! `P_{ν|N}/(t^N;q,t)_ν ↦ P_{ν|N+1}/(t^{N+1};q,t)_ν`, and the intertwining of
//! the big q-Jacobi polynomials it induces.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::bigqjacobi::{big_qjacobi, pi_coeffs, tn_pochhammer};
use crate::macdonald::{from_macdonald_basis, to_macdonald_basis};
use crate::qalgebra::{Params, Partition, Scalar};
use crate::symfunc::SymPoly;
use crate::Result;

/// Image of `f ∈ Sym(N)` in `Sym(N+1)`.
pub fn link_action(f: &SymPoly, q: &Scalar, t: &Scalar) -> Result<SymPoly> {
    let n = f.n();
    let coeffs = to_macdonald_basis(f, q, t)?;
    let lifted: BTreeMap<Partition, Scalar> = coeffs
        .into_iter()
        .map(|(nu, c)| {
            let ratio = tn_pochhammer(&nu, n, q, t) / tn_pochhammer(&nu, n + 1, q, t);
            (nu, c * ratio)
        })
        .collect();
    from_macdonald_basis(&lifted, n + 1, q, t)
}

#[derive(Clone, Debug, Serialize)]
pub struct IntertwiningReport {
    pub lambda: Partition,
    #[serde(rename = "N")]
    pub n: usize,
    /// `π_N(λ, ·) = π_{N+1}(λ, ·)` at level-shifted parameters.
    pub pi_equal: bool,
    /// `link(φ_{λ|N}/(t^N)_λ) = φ_{λ|N+1}/(t^{N+1})_λ` as polynomials.
    pub link_equal: bool,
}

impl IntertwiningReport {
    pub fn passed(&self) -> bool {
        self.pi_equal && self.link_equal
    }
}

/// Checks the intertwining relation between levels `N` and `N+1`.
pub fn intertwining_check(lam: &Partition, base: &Params, n: usize) -> Result<IntertwiningReport> {
    let lo = base.shift_level(n);
    let hi = base.shift_level(n + 1);
    let (q, t) = (&base.q, &base.t);
    let pi_equal = pi_coeffs(lam, &lo, n)? == pi_coeffs(lam, &hi, n + 1)?;
    let phi_lo = big_qjacobi(lam, &lo, n)?;
    let phi_hi = big_qjacobi(lam, &hi, n + 1)?;
    let lhs = link_action(
        &phi_lo.poly.scale(&tn_pochhammer(lam, n, q, t).recip()),
        q,
        t,
    )?;
    let rhs = phi_hi.poly.scale(&tn_pochhammer(lam, n + 1, q, t).recip());
    Ok(IntertwiningReport {
        lambda: lam.clone(),
        n,
        pi_equal,
        link_equal: lhs == rhs,
    })
}
