//! Randomized test of the positive maximum principle: at a minimizer `X̃` of
//! `f` over the window, `D_N f(X̃) ≥ 0`.
//!
//! Only minimizers away from the frontier count. There every neighbour of `X̃`
//! is inside the window, so `D_N f(X̃) = Σ rate · (f(Y) − f(X̃))` is decided by
//! window values alone.

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bigqjacobi::{dn_at_point, OperatorCoeffs};
use crate::dynamics::rates::rates;
use crate::qalgebra::{format_scalar, partitions_up_to, rat, Params, Scalar};
use crate::statespace::{enumerate_truncated, State};
use crate::symfunc::SymPoly;
use crate::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct PmpViolation {
    pub trial: usize,
    pub state: String,
    pub value: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PmpReport {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "K")]
    pub k: u32,
    pub trials: usize,
    pub seed: u64,
    /// Trials with at least one interior minimizer.
    pub interior_trials: usize,
    /// Interior minimizers checked in total.
    pub interior_minimizers: usize,
    /// Trials whose minimizers all lie on the frontier.
    pub frontier_discards: usize,
    /// Smallest `D_N f` found at an interior minimizer.
    pub min_value: Option<f64>,
    pub violations: Vec<PmpViolation>,
}

impl PmpReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn random_rational(rng: &mut ChaCha8Rng, range: i64) -> Scalar {
    rat(rng.random_range(-range..=range), rng.random_range(1..=6))
}

/// Random symmetric polynomial of degree `≤ 4`. Two out of three trials are
/// anchored at a random interior state `X₀`: a small random perturbation of
/// `Σ_{m ≤ min(N,2)} (p_m − p_m(X₀))²`, which has its minimum near `X₀`.
fn random_poly(rng: &mut ChaCha8Rng, n: usize, trial: usize, anchors: &[Vec<Scalar>]) -> SymPoly {
    let basis = partitions_up_to(4, n);
    let noise = SymPoly::from_terms(
        n,
        basis.iter().map(|k| (k.clone(), random_rational(rng, 9))),
    )
    .expect("lengths fit");
    if trial.is_multiple_of(3) || anchors.is_empty() {
        return noise;
    }
    let x0 = &anchors[rng.random_range(0..anchors.len())];
    let eps = rat(1, rng.random_range(10..=1000));
    let mut f = noise.scale(&eps);
    for m in 1..=n.min(2) as u32 {
        let p = SymPoly::power_sum(n, m);
        let centred = p
            .sub(&SymPoly::constant(n, p.evaluate(x0)))
            .expect("same n");
        let sq = centred.multiply(&centred).expect("same n");
        f = f.add(&sq.scale(&powi_scale(m))).expect("same n");
    }
    f
}

/// Weight of `(p_m − p_m(X₀))²`; coordinates are small, so higher power sums
/// need a larger weight to matter.
fn powi_scale(m: u32) -> Scalar {
    rat(10i64.pow(2 * (m - 1)), 1)
}

struct Trial {
    interior: usize,
    frontier_only: bool,
    min_value: Option<Scalar>,
    violations: Vec<PmpViolation>,
}

struct Window {
    states: Vec<State>,
    coords: Vec<Vec<Scalar>>,
    anchors: Vec<Vec<Scalar>>,
    ops: OperatorCoeffs,
    n: usize,
    k: u32,
}

fn run_trial(index: usize, seed: u64, w: &Window) -> Result<Trial> {
    let Window {
        states,
        coords,
        anchors,
        ops,
        n,
        k,
    } = w;
    let (n, k) = (*n, *k);
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(index as u64));
    let f = random_poly(&mut rng, n, index, anchors);
    let values: Vec<Scalar> = coords.iter().map(|x| f.evaluate(x)).collect();
    let min = values.iter().min().expect("nonempty window").clone();
    let mut out = Trial {
        interior: 0,
        frontier_only: true,
        min_value: None,
        violations: Vec::new(),
    };
    for (i, v) in values.iter().enumerate() {
        if v != &min || states[i].is_frontier(k) {
            continue;
        }
        out.frontier_only = false;
        out.interior += 1;
        let dn = dn_at_point(&f, ops, &coords[i])?;
        // the same value from the jump rates
        let mut jumps = Scalar::zero();
        for r in rates(&states[i], ops)? {
            let y = r.target.coords(&ops.params).padded();
            jumps += &r.rate * (f.evaluate(&y) - v);
        }
        if jumps != dn {
            return Err(Error::Invariant(format!(
                "D_N f at {} is {} but the jump rates give {}",
                states[i],
                format_scalar(&dn),
                format_scalar(&jumps)
            )));
        }
        if dn.is_negative() {
            out.violations.push(PmpViolation {
                trial: index,
                state: states[i].to_string(),
                value: format_scalar(&dn),
            });
        }
        if out.min_value.as_ref().is_none_or(|m| &dn < m) {
            out.min_value = Some(dn);
        }
    }
    Ok(out)
}

pub fn pmp_test(params: &Params, n: usize, k: u32, trials: usize, seed: u64) -> Result<PmpReport> {
    let states = enumerate_truncated(n, k);
    let coords: Vec<Vec<Scalar>> = states.iter().map(|s| s.coords(params).padded()).collect();
    let anchors: Vec<Vec<Scalar>> = states
        .iter()
        .zip(&coords)
        .filter(|(s, _)| !s.is_frontier(k))
        .map(|(_, c)| c.clone())
        .collect();
    let window = Window {
        states,
        coords,
        anchors,
        ops: OperatorCoeffs::new(params, n),
        n,
        k,
    };
    let results = (0..trials)
        .into_par_iter()
        .map(|i| run_trial(i, seed, &window))
        .collect::<Result<Vec<_>>>()?;

    let mut report = PmpReport {
        n,
        k,
        trials,
        seed,
        interior_trials: 0,
        interior_minimizers: 0,
        frontier_discards: 0,
        min_value: None,
        violations: Vec::new(),
    };
    let mut min_value: Option<Scalar> = None;
    for t in results {
        if t.frontier_only {
            report.frontier_discards += 1;
        } else {
            report.interior_trials += 1;
        }
        report.interior_minimizers += t.interior;
        if let Some(v) = t.min_value {
            if min_value.as_ref().is_none_or(|m| &v < m) {
                min_value = Some(v);
            }
        }
        report.violations.extend(t.violations);
    }
    report.min_value = min_value.map(|v| crate::qalgebra::to_f64(&v));
    Ok(report)
}
