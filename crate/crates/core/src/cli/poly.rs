//! `qjd poly`: polynomial data for each requested partition.

use rayon::prelude::*;
use serde::Serialize;

use super::{emit, RunConfig};
use crate::bigqjacobi::{big_qjacobi, h_norm, mu_infinity, phi_symfunc, pi_coeffs};
use crate::macdonald::macdonald_poly;
use crate::qalgebra::{format_scalar, to_f64, Params, ParamsSummary, Partition};
use crate::report::fix_floats;
use crate::symfunc::{Basis, PolyJson};
use crate::Result;

#[derive(Serialize)]
struct Exact {
    exact: String,
    float: f64,
}

impl Exact {
    fn new(x: &crate::qalgebra::Scalar) -> Self {
        Exact {
            exact: format_scalar(x),
            float: to_f64(x),
        }
    }
}

#[derive(Serialize)]
struct PolyEntry {
    lambda: Partition,
    /// `μ_{λ|N}` at level-`N` parameters.
    mu: Exact,
    mu_infinity: Exact,
    macdonald: PolyJson,
    phi: PolyJson,
    /// `π_N(λ, ·)` keyed by `ν`.
    pi: PolyJson,
    /// `Φ_λ` in the Macdonald basis of `Sym`.
    phi_symfunc: PolyJson,
    h: Exact,
    /// `π_N(λ, ·) = π_{N+1}(λ, ·)`, when requested.
    stable: Option<bool>,
}

#[derive(Serialize)]
struct PolyOutput {
    params: ParamsSummary,
    level_params: ParamsSummary,
    #[serde(rename = "N")]
    n: usize,
    polynomials: Vec<PolyEntry>,
}

fn entry(lam: &Partition, base: &Params, n: usize, check: bool) -> Result<PolyEntry> {
    let params = base.shift_level(n);
    let (q, t) = (&params.q, &params.t);
    let phi = big_qjacobi(lam, &params, n)?;
    let pi = pi_coeffs(lam, &params, n)?;
    let stable = if check {
        Some(pi == pi_coeffs(lam, &base.shift_level(n + 1), n + 1)?)
    } else {
        None
    };
    Ok(PolyEntry {
        lambda: lam.clone(),
        mu: Exact::new(&phi.eigenvalue),
        mu_infinity: Exact::new(&mu_infinity(lam, base)),
        macdonald: macdonald_poly(lam, n, q, t)?.to_json(),
        phi: phi.poly.to_json(),
        pi: PolyJson::from_terms(Some(n), Basis::Macdonald, &pi),
        phi_symfunc: phi_symfunc(lam, base)?.to_json(),
        h: Exact::new(&h_norm(lam, base)),
        stable,
    })
}

/// Returns whether every requested stability check passed.
pub fn run(cfg: &RunConfig, base: &Params) -> Result<bool> {
    let n = cfg.n.unwrap_or(1);
    let mut lams = cfg.partitions()?;
    if lams.is_empty() {
        lams.push(Partition::empty());
    }
    if let Some(bad) = lams.iter().find(|l| l.len() > n) {
        return Err(crate::Error::InvalidPartition(format!(
            "{bad} has more than N = {n} parts"
        )));
    }
    let polynomials = lams
        .par_iter()
        .map(|lam| entry(lam, base, n, cfg.check_stability))
        .collect::<Result<Vec<_>>>()?;
    let ok = polynomials.iter().all(|p| p.stable != Some(false));
    let out = PolyOutput {
        params: base.summary(),
        level_params: base.shift_level(n).summary(),
        n,
        polynomials,
    };
    let text = serde_json::to_string_pretty(&fix_floats(serde_json::to_value(&out)?))?;
    emit(&text, cfg.out.as_ref())?;
    Ok(ok)
}
