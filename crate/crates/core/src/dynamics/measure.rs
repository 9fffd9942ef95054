//! Stationary measures on truncated windows, orthogonality of `φ_{λ|N}` against
//! them, and the norm limit `h_λ`.
//!
//! With exactly `N` nonzero particles the jumps preserve how many particles sit
//! on each side of 0, so the window splits into sectors `(m⁺, m⁻)`. Inside a
//! sector the weights come from detailed balance and are exact. Sectors only
//! communicate through configurations with particles at 0, which a rate table
//! cannot describe, so their relative masses are fitted from the moment
//! conditions `⟨φ_κ⟩ = 0`, `1 ≤ |κ| ≤ N`.

use std::collections::{HashMap, VecDeque};
use std::io::Write;
use std::ops::Range;

use nalgebra::{DMatrix, DVector};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::bigqjacobi::{big_qjacobi, h_norm};
use crate::dynamics::rates::RateTable;
use crate::linalg::nullspace;
use crate::qalgebra::{partitions_up_to, to_f64, Params, Partition, Scalar};
use crate::statespace::State;
use crate::symfunc::{truncation_bound, FloatPoly, SymPoly};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BalanceMethod {
    DetailedBalance,
    Nullspace,
}

#[derive(Clone, Debug)]
pub struct Sector {
    pub plus: usize,
    pub minus: usize,
    /// Positions in [`MeasureTable::states`].
    pub range: Range<usize>,
    pub mass: f64,
    pub method: BalanceMethod,
}

/// Outcome of the exact reversibility and stationarity checks.
#[derive(Clone, Debug, Default)]
pub struct BalanceCheck {
    /// Directed edges `X → Y` inside the window.
    pub edges: usize,
    /// Edges with `w(X) r(X→Y) ≠ w(Y) r(Y→X)` under the tree weights.
    pub cycle_failures: usize,
    pub interior_states: usize,
    /// Largest `|Σ_Y w(Y) r(Y→X) − w(X) r(X→Y)|` over interior states.
    pub max_global_residual: Scalar,
}

/// Geometric extrapolation of the mass beyond the window.
#[derive(Clone, Debug, Serialize)]
pub struct TailEstimate {
    /// Largest weight ratio across an up-move into the frontier.
    pub ratio: f64,
    /// Probability of frontier states.
    pub frontier_mass: f64,
    /// `N · frontier_mass · ratio / (1 − ratio)`.
    pub tail_mass: f64,
    /// Largest coordinate magnitude outside the window.
    pub x_cut: f64,
}

#[derive(Clone, Debug)]
pub struct MeasureTable {
    pub params: Params,
    pub n: usize,
    pub k: u32,
    pub states: Vec<State>,
    /// Exact weight relative to the first state of the same sector.
    pub weights: Vec<Scalar>,
    /// Probability conditioned on the sector.
    pub conditional: Vec<f64>,
    pub probabilities: Vec<f64>,
    pub points: Vec<Vec<f64>>,
    pub sector_of: Vec<usize>,
    pub sectors: Vec<Sector>,
    pub check: BalanceCheck,
    /// Euclidean residual of the sector-mass fit.
    pub fit_residual: f64,
    pub tail: TailEstimate,
}

struct SectorWeights {
    weights: Vec<Scalar>,
    method: BalanceMethod,
    check: BalanceCheck,
}

fn sector_weights(states: &[State], table: &RateTable) -> Result<SectorWeights> {
    let index: HashMap<&State, usize> = states.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let moves = |i: usize| {
        table
            .get(&states[i])
            .unwrap_or(&[])
            .iter()
            .filter_map(|r| index.get(&r.target).map(|&j| (j, &r.rate)))
            .collect::<Vec<_>>()
    };
    let adjacency: Vec<Vec<(usize, &Scalar)>> = (0..states.len()).map(moves).collect();
    let rate = |i: usize, j: usize| {
        adjacency[i]
            .iter()
            .find(|(t, _)| *t == j)
            .map_or_else(Scalar::zero, |(_, r)| (*r).clone())
    };

    // spanning-tree weights
    let mut w: Vec<Option<Scalar>> = vec![None; states.len()];
    let mut one_way = false;
    w[0] = Some(Scalar::one());
    let mut queue = VecDeque::from([0]);
    while let Some(i) = queue.pop_front() {
        let wi = w[i].clone().expect("visited");
        for &(j, r) in &adjacency[i] {
            if w[j].is_some() {
                continue;
            }
            let back = rate(j, i);
            if back.is_zero() {
                one_way = true;
                continue;
            }
            w[j] = Some(&wi * r / back);
            queue.push_back(j);
        }
    }
    if let Some(i) = w.iter().position(Option::is_none) {
        if !one_way {
            return Err(Error::State(format!(
                "window is disconnected: {} is unreachable",
                states[i]
            )));
        }
    }

    let check_with = |w: &[Scalar]| {
        let mut check = BalanceCheck::default();
        for i in 0..states.len() {
            for &(j, r) in &adjacency[i] {
                check.edges += 1;
                if &w[i] * r != &w[j] * rate(j, i) {
                    check.cycle_failures += 1;
                }
            }
            if states[i].is_frontier(table.k) {
                continue;
            }
            check.interior_states += 1;
            let residual = adjacency[i].iter().fold(Scalar::zero(), |acc, &(j, r)| {
                acc + &w[j] * rate(j, i) - &w[i] * r
            });
            if residual.abs() > check.max_global_residual {
                check.max_global_residual = residual.abs();
            }
        }
        check
    };

    if w.iter().all(Option::is_some) {
        let w: Vec<Scalar> = w.into_iter().map(Option::unwrap).collect();
        let check = check_with(&w);
        if check.cycle_failures == 0 && check.max_global_residual.is_zero() {
            return Ok(SectorWeights {
                weights: w,
                method: BalanceMethod::DetailedBalance,
                check,
            });
        }
    }

    // not reversible on this window: solve global balance of the truncated chain
    let size = states.len();
    let mut qt = vec![vec![Scalar::zero(); size]; size];
    for i in 0..size {
        for &(j, r) in &adjacency[i] {
            qt[j][i] += r;
            qt[i][i] -= r;
        }
    }
    let null = nullspace(&qt);
    if null.len() != 1 {
        return Err(Error::State(format!(
            "truncated chain has {} stationary directions",
            null.len()
        )));
    }
    let v = &null[0];
    let root = v[0].clone();
    if root.is_zero() {
        return Err(Error::Singular);
    }
    let weights: Vec<Scalar> = v.iter().map(|x| x / &root).collect();
    let check = check_with(&weights);
    Ok(SectorWeights {
        weights,
        method: BalanceMethod::Nullspace,
        check,
    })
}

/// Stationary measure of the `N`-particle chain on the window `{indices ≤ K}`.
pub fn stationary_measure(params: &Params, n: usize, k: u32) -> Result<MeasureTable> {
    let table = RateTable::build(params, n, k)?;
    let states = table.states.clone();

    let mut sectors: Vec<Sector> = Vec::new();
    let mut start = 0;
    while start < states.len() {
        let plus = states[start].plus().len();
        let end = start
            + states[start..]
                .iter()
                .take_while(|s| s.plus().len() == plus)
                .count();
        sectors.push(Sector {
            plus,
            minus: n - plus,
            range: start..end,
            mass: 0.0,
            method: BalanceMethod::DetailedBalance,
        });
        start = end;
    }

    let solved = sectors
        .par_iter()
        .map(|sec| sector_weights(&states[sec.range.clone()], &table))
        .collect::<Result<Vec<_>>>()?;

    let mut weights = Vec::with_capacity(states.len());
    let mut conditional = Vec::with_capacity(states.len());
    let mut sector_of = Vec::with_capacity(states.len());
    let mut check = BalanceCheck::default();
    for (si, (sec, sw)) in sectors.iter_mut().zip(solved).enumerate() {
        sec.method = sw.method;
        let floats: Vec<f64> = sw.weights.iter().map(to_f64).collect();
        let total: f64 = floats.iter().sum();
        conditional.extend(floats.iter().map(|w| w / total));
        weights.extend(sw.weights);
        sector_of.extend(std::iter::repeat_n(si, sec.range.len()));
        check.edges += sw.check.edges;
        check.cycle_failures += sw.check.cycle_failures;
        check.interior_states += sw.check.interior_states;
        if sw.check.max_global_residual > check.max_global_residual {
            check.max_global_residual = sw.check.max_global_residual;
        }
    }

    let points: Vec<Vec<f64>> = states
        .iter()
        .map(|s| s.coords(params).nonzero().iter().map(to_f64).collect())
        .collect();

    let mut out = MeasureTable {
        params: params.clone(),
        n,
        k,
        states,
        weights,
        conditional,
        probabilities: Vec::new(),
        points,
        sector_of,
        sectors,
        check,
        fit_residual: 0.0,
        tail: TailEstimate {
            ratio: 0.0,
            frontier_mass: 0.0,
            tail_mass: 0.0,
            x_cut: 0.0,
        },
    };
    out.fit_sector_masses()?;
    out.tail = out.tail_estimate(&table);
    Ok(out)
}

impl MeasureTable {
    fn sector_expectation(&self, values: &[f64]) -> Vec<f64> {
        let mut acc = vec![0.0; self.sectors.len()];
        for (i, v) in values.iter().enumerate() {
            acc[self.sector_of[i]] += self.conditional[i] * v;
        }
        acc
    }

    fn fit_sector_masses(&mut self) -> Result<()> {
        let s = self.sectors.len();
        let kappas: Vec<Partition> = partitions_up_to(self.n, self.n)
            .into_iter()
            .skip(1)
            .collect();
        let mut rows: Vec<Vec<f64>> = vec![vec![1.0; s]];
        for kappa in &kappas {
            let phi = big_qjacobi(kappa, &self.params, self.n)?;
            rows.push(self.sector_expectation(&self.values(&phi.poly)));
        }
        let a = DMatrix::from_fn(rows.len(), s, |i, j| rows[i][j]);
        let mut b = DVector::zeros(rows.len());
        b[0] = 1.0;
        let masses = if s == 1 {
            DVector::from_element(1, 1.0)
        } else {
            a.clone()
                .svd(true, true)
                .solve(&b, 1e-14)
                .map_err(|e| Error::Invariant(format!("sector-mass fit failed: {e}")))?
        };
        self.fit_residual = (&a * &masses - &b).norm();
        if masses.iter().any(|m| *m < 0.0) {
            return Err(Error::Invariant(format!(
                "sector-mass fit produced negative masses {:?}",
                masses.as_slice()
            )));
        }
        for (sec, m) in self.sectors.iter_mut().zip(masses.iter()) {
            sec.mass = *m;
        }
        self.probabilities = self
            .conditional
            .iter()
            .zip(&self.sector_of)
            .map(|(c, &si)| c * self.sectors[si].mass)
            .collect();
        Ok(())
    }

    fn tail_estimate(&self, table: &RateTable) -> TailEstimate {
        let index: HashMap<&State, usize> = self
            .states
            .iter()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        let mut ratio: f64 = 0.0;
        let mut frontier_mass = 0.0;
        for (i, s) in self.states.iter().enumerate() {
            if s.is_frontier(self.k) {
                frontier_mass += self.probabilities[i];
                continue;
            }
            for r in table.get(s).unwrap_or(&[]) {
                if let Some(&j) = index.get(&r.target) {
                    if r.target.is_frontier(self.k) && r.target.max_index() > s.max_index() {
                        ratio = ratio.max(to_f64(&(&self.weights[j] / &self.weights[i])));
                    }
                }
            }
        }
        let tail_mass = if ratio < 1.0 {
            self.n as f64 * frontier_mass * ratio / (1.0 - ratio)
        } else {
            f64::INFINITY
        };
        let p = &self.params;
        let reach = if p.a.recip() > p.b.abs().recip() {
            p.a.recip()
        } else {
            p.b.abs().recip()
        };
        TailEstimate {
            ratio,
            frontier_mass,
            tail_mass,
            x_cut: to_f64(&reach) * to_f64(&p.q).powi(self.k as i32 + 1),
        }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// `f` at every state, in floating point.
    pub fn values(&self, f: &SymPoly) -> Vec<f64> {
        let fp = FloatPoly::from(f);
        self.points.par_iter().map(|x| fp.evaluate(x)).collect()
    }

    pub fn expect(&self, values: &[f64]) -> f64 {
        values
            .iter()
            .zip(&self.probabilities)
            .map(|(v, p)| v * p)
            .sum()
    }

    pub fn expect_poly(&self, f: &SymPoly) -> f64 {
        self.expect(&self.values(f))
    }

    /// `⟨f g⟩` under the measure.
    pub fn inner(&self, f: &SymPoly, g: &SymPoly) -> f64 {
        let fv = self.values(f);
        let gv = self.values(g);
        let prod: Vec<f64> = fv.iter().zip(&gv).map(|(a, b)| a * b).collect();
        self.expect(&prod)
    }

    /// Upper bound for `sup |f|` over the whole configuration space:
    /// `|f(0)|` plus the geometric bound on `|f(X) − f(0)|`.
    pub fn sup_bound(&self, f: &SymPoly) -> f64 {
        let variation = truncation_bound(
            f.terms(),
            &[],
            &self.params.max_coordinate(),
            &self.params.t,
        );
        to_f64(&(variation + f.constant_term().abs()))
    }

    /// Truncation allowance for an expectation of a function bounded by `sup`.
    pub fn tolerance(&self, sup: f64) -> f64 {
        (2.0 * self.tail.tail_mass + self.fit_residual) * sup
    }

    /// Sector-conditioned probabilities, keyed by state.
    pub fn conditional_map(&self, plus: usize) -> HashMap<State, f64> {
        self.states
            .iter()
            .zip(&self.conditional)
            .filter(|(s, _)| s.plus().len() == plus)
            .map(|(s, p)| (s.clone(), *p))
            .collect()
    }

    /// CSV with header `state,weight_num,weight_den,weight_float`: the exact
    /// weight relative to the sector's first state and the normalized probability.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["state", "weight_num", "weight_den", "weight_float"])?;
        for (i, s) in self.states.iter().enumerate() {
            w.write_record([
                s.to_string(),
                self.weights[i].numer().to_string(),
                self.weights[i].denom().to_string(),
                format!("{:.12e}", self.probabilities[i]),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PairResult {
    pub lambda: Partition,
    pub mu: Partition,
    pub value: f64,
    pub tolerance: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrthogonalityReport {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "K")]
    pub k: u32,
    pub pairs: Vec<PairResult>,
    pub tail: TailEstimate,
    pub fit_residual: f64,
}

impl OrthogonalityReport {
    pub fn passed(&self) -> bool {
        self.pairs.iter().all(|p| p.value.abs() <= p.tolerance)
    }

    /// Largest `|value| / tolerance`.
    pub fn worst_ratio(&self) -> f64 {
        self.pairs
            .iter()
            .map(|p| p.value.abs() / p.tolerance)
            .fold(0.0, f64::max)
    }
}

/// `⟨φ_λ φ_μ⟩` for all `λ ≠ μ` with `|λ|, |μ| ≤ d`.
pub fn orthogonality_check(
    params: &Params,
    n: usize,
    k: u32,
    d: usize,
) -> Result<OrthogonalityReport> {
    let measure = stationary_measure(params, n, k)?;
    let lams = partitions_up_to(d, n);
    let mut values = Vec::with_capacity(lams.len());
    let mut sups = Vec::with_capacity(lams.len());
    for lam in &lams {
        let phi = big_qjacobi(lam, params, n)?;
        values.push(measure.values(&phi.poly));
        sups.push(measure.sup_bound(&phi.poly));
    }
    let mut pairs = Vec::new();
    for i in 0..lams.len() {
        for j in i + 1..lams.len() {
            let prod: Vec<f64> = values[i]
                .iter()
                .zip(&values[j])
                .map(|(a, b)| a * b)
                .collect();
            pairs.push(PairResult {
                lambda: lams[i].clone(),
                mu: lams[j].clone(),
                value: measure.expect(&prod),
                tolerance: measure.tolerance(sups[i] * sups[j]),
            });
        }
    }
    Ok(OrthogonalityReport {
        n,
        k,
        pairs,
        tail: measure.tail.clone(),
        fit_residual: measure.fit_residual,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct NormRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub value: f64,
    pub gap: f64,
    pub tolerance: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct NormLimitReport {
    pub lambda: Partition,
    pub h: f64,
    pub rows: Vec<NormRow>,
}

impl NormLimitReport {
    pub fn gaps_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].gap < w[0].gap)
    }

    pub fn last_gap(&self) -> f64 {
        self.rows.last().map_or(f64::NAN, |r| r.gap)
    }
}

/// `⟨φ_{λ|N}²⟩` at level-`N` parameters compared with `h_λ`, for each `N`.
pub fn norm_limit_check(
    lam: &Partition,
    base: &Params,
    levels: &[usize],
    k: u32,
) -> Result<NormLimitReport> {
    let h = to_f64(&h_norm(lam, base));
    let mut rows = Vec::new();
    for &n in levels {
        if lam.len() > n {
            continue;
        }
        let params = base.shift_level(n);
        let measure = stationary_measure(&params, n, k)?;
        let phi = big_qjacobi(lam, &params, n)?;
        let value = measure.inner(&phi.poly, &phi.poly);
        let sup = measure.sup_bound(&phi.poly);
        rows.push(NormRow {
            n,
            value,
            gap: (value / h - 1.0).abs(),
            tolerance: measure.tolerance(sup * sup) / h,
        });
    }
    Ok(NormLimitReport {
        lambda: lam.clone(),
        h,
        rows,
    })
}
