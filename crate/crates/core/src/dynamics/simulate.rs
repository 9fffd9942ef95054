//! Event-driven simulation of the jump process and comparison of occupation
//! times with the stationary measure.

use std::collections::HashMap;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use rayon::prelude::*;
use serde::Serialize;

use crate::bigqjacobi::OperatorCoeffs;
use crate::dynamics::measure::{stationary_measure, TailEstimate};
use crate::dynamics::rates::rates;
use crate::qalgebra::{to_f64, Params};
use crate::statespace::{monotone_sequences, State};
use crate::{Error, Result};

/// What happens when the trajectory touches the edge of the window.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FrontierPolicy {
    /// Stop and flag the trajectory as truncated.
    #[default]
    Stop,
    /// Suppress moves that would leave the window. This is the chain whose
    /// stationary law is the window-restricted measure.
    Reflect,
}

#[derive(Clone, Debug)]
pub struct SimulationConfig {
    pub horizon: f64,
    /// Stop after this many jumps even if the horizon is not reached.
    pub max_events: Option<usize>,
    pub k: u32,
    pub policy: FrontierPolicy,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    /// Entry times and states; the first entry is `(0, start)`.
    pub path: Vec<(f64, State)>,
    /// Time at which observation ended.
    pub end_time: f64,
    pub seed: u64,
    /// The window frontier was reached under [`FrontierPolicy::Stop`].
    pub truncated: bool,
}

impl Trajectory {
    pub fn jumps(&self) -> usize {
        self.path.len().saturating_sub(1)
    }

    /// Fraction of `[0, end_time]` spent in each state.
    pub fn occupation(&self) -> HashMap<State, f64> {
        let mut occ: HashMap<State, f64> = HashMap::new();
        if self.end_time <= 0.0 {
            if let Some((_, s)) = self.path.first() {
                occ.insert(s.clone(), 1.0);
            }
            return occ;
        }
        for (i, (t0, s)) in self.path.iter().enumerate() {
            let t1 = self.path.get(i + 1).map_or(self.end_time, |(t, _)| *t);
            *occ.entry(s.clone()).or_default() += (t1 - t0) / self.end_time;
        }
        occ
    }

    /// CSV with header `time,state`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["time", "state"])?;
        for (t, s) in &self.path {
            w.write_record([format!("{t:.12e}"), s.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Floating-point jump table over interned states, filled in as states are visited.
struct JumpCache {
    ops: OperatorCoeffs,
    k: u32,
    policy: FrontierPolicy,
    ids: HashMap<State, usize>,
    states: Vec<State>,
    moves: Vec<Option<Moves>>,
}

/// Targets, cumulative rates, total rate.
type Moves = (Vec<usize>, Vec<f64>, f64);

impl JumpCache {
    fn new(params: &Params, n: usize, config: &SimulationConfig) -> Self {
        JumpCache {
            ops: OperatorCoeffs::new(params, n),
            k: config.k,
            policy: config.policy,
            ids: HashMap::new(),
            states: Vec::new(),
            moves: Vec::new(),
        }
    }

    fn intern(&mut self, s: &State) -> usize {
        if let Some(&i) = self.ids.get(s) {
            return i;
        }
        let i = self.states.len();
        self.ids.insert(s.clone(), i);
        self.states.push(s.clone());
        self.moves.push(None);
        i
    }

    fn moves(&mut self, i: usize) -> Result<&(Vec<usize>, Vec<f64>, f64)> {
        if self.moves[i].is_none() {
            let s = self.states[i].clone();
            let mut targets = Vec::new();
            let mut cumulative = Vec::new();
            let mut total = 0.0;
            for r in rates(&s, &self.ops)? {
                if self.policy == FrontierPolicy::Reflect && r.target.max_index() > self.k {
                    continue;
                }
                total += to_f64(&r.rate);
                targets.push(self.intern(&r.target));
                cumulative.push(total);
            }
            if total <= 0.0 {
                return Err(Error::Invariant(format!("{s} has zero exit rate")));
            }
            self.moves[i] = Some((targets, cumulative, total));
        }
        Ok(self.moves[i].as_ref().expect("filled"))
    }
}

struct Run {
    end_time: f64,
    truncated: bool,
}

/// Core event loop; `visit(time, state id)` is called on every entry, starting with `(0, start)`.
fn run(
    cache: &mut JumpCache,
    start: &State,
    n: usize,
    config: &SimulationConfig,
    mut visit: impl FnMut(f64, usize),
) -> Result<Run> {
    if start.capacity() != Some(n) || start.count() != n || !start.is_admissible() {
        return Err(Error::State(format!(
            "start {start} must be admissible with {n} nonzero particles"
        )));
    }
    if start.max_index() > config.k {
        return Err(Error::State(format!(
            "start {start} lies outside the window K={}",
            config.k
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut now = 0.0;
    let mut current = cache.intern(start);
    let mut jumps = 0usize;
    visit(0.0, current);
    loop {
        if config.policy == FrontierPolicy::Stop && cache.states[current].is_frontier(config.k) {
            return Ok(Run {
                end_time: now,
                truncated: true,
            });
        }
        if config.max_events.is_some_and(|m| jumps >= m) {
            break;
        }
        let (targets, cumulative, total) = cache.moves(current)?;
        let hold = Exp::new(*total)
            .map_err(|e| Error::Invariant(format!("exit rate {total}: {e}")))?
            .sample(&mut rng);
        if now + hold >= config.horizon {
            now = config.horizon;
            break;
        }
        now += hold;
        let u = rng.random::<f64>() * total;
        let pick = cumulative
            .iter()
            .position(|c| u < *c)
            .unwrap_or(targets.len() - 1);
        current = targets[pick];
        jumps += 1;
        visit(now, current);
    }
    Ok(Run {
        end_time: now,
        truncated: false,
    })
}

/// Simulates from `start` until the horizon, the event cap, or (under
/// [`FrontierPolicy::Stop`]) the first visit to the window frontier.
pub fn simulate(
    start: &State,
    params: &Params,
    n: usize,
    config: &SimulationConfig,
) -> Result<Trajectory> {
    let mut cache = JumpCache::new(params, n, config);
    let mut ids = Vec::new();
    let out = run(&mut cache, start, n, config, |t, i| ids.push((t, i)))?;
    Ok(Trajectory {
        path: ids
            .into_iter()
            .map(|(t, i)| (t, cache.states[i].clone()))
            .collect(),
        end_time: out.end_time,
        seed: config.seed,
        truncated: out.truncated,
    })
}

/// Time-weighted occupation of a run, without storing the path.
#[derive(Clone, Debug)]
pub struct Occupation {
    pub fractions: HashMap<State, f64>,
    pub jumps: usize,
    pub end_time: f64,
    pub truncated: bool,
}

pub fn simulate_occupation(
    start: &State,
    params: &Params,
    n: usize,
    config: &SimulationConfig,
) -> Result<Occupation> {
    let mut cache = JumpCache::new(params, n, config);
    let mut time: Vec<f64> = Vec::new();
    let mut last: Option<(f64, usize)> = None;
    let mut jumps = 0usize;
    let out = run(&mut cache, start, n, config, |t, i| {
        if let Some((t0, j)) = last {
            if time.len() <= j {
                time.resize(j + 1, 0.0);
            }
            time[j] += t - t0;
            jumps += 1;
        }
        last = Some((t, i));
    })?;
    if let Some((t0, j)) = last {
        if time.len() <= j {
            time.resize(j + 1, 0.0);
        }
        time[j] += out.end_time - t0;
    }
    let total: f64 = time.iter().sum();
    let fractions = time
        .iter()
        .enumerate()
        .filter(|(_, t)| **t > 0.0 || total == 0.0)
        .map(|(i, t)| {
            let f = if total > 0.0 { t / total } else { 1.0 };
            (cache.states[i].clone(), f)
        })
        .collect();
    Ok(Occupation {
        fractions,
        jumps,
        end_time: out.end_time,
        truncated: out.truncated,
    })
}

/// `½ Σ |p(s) − q(s)|`.
pub fn total_variation(p: &HashMap<State, f64>, q: &HashMap<State, f64>) -> f64 {
    let mut sum = 0.0;
    for (s, a) in p {
        sum += (a - q.get(s).copied().unwrap_or(0.0)).abs();
    }
    for (s, b) in q {
        if !p.contains_key(s) {
            sum += b.abs();
        }
    }
    sum / 2.0
}

#[derive(Clone, Debug, Serialize)]
pub struct SectorComparison {
    pub plus: usize,
    pub minus: usize,
    pub mass: f64,
    pub jumps: usize,
    pub time: f64,
    pub total_variation: f64,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SimulationComparison {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "K")]
    pub k: u32,
    pub seed: u64,
    pub sectors: Vec<SectorComparison>,
    /// Mass-weighted total variation: the distance between the stationary
    /// measure and the mixture of per-sector occupation measures.
    pub total_variation: f64,
    pub tail: TailEstimate,
}

impl SimulationComparison {
    pub fn min_jumps(&self) -> usize {
        self.sectors.iter().map(|s| s.jumps).min().unwrap_or(0)
    }
}

/// The state of a sector with every particle as far from 0 as spacing allows.
pub fn sector_start(plus: usize, minus: usize, n: usize) -> State {
    State::raw(vec![1; plus], vec![1; minus], Some(n))
}

/// Runs one reflected trajectory per sector, until `horizon` or `max_events`
/// jumps, and compares its occupation with the sector-conditioned stationary measure.
pub fn compare_with_stationary(
    params: &Params,
    n: usize,
    k: u32,
    horizon: f64,
    max_events: Option<usize>,
    seed: u64,
) -> Result<SimulationComparison> {
    if max_events.is_none() && !horizon.is_finite() {
        return Err(Error::Constraint(
            "an infinite horizon needs an event cap".into(),
        ));
    }
    let measure = stationary_measure(params, n, k)?;
    let sectors = measure
        .sectors
        .par_iter()
        .enumerate()
        .map(|(i, sec)| {
            let sector_seed =
                seed.wrapping_add(0x9e37_79b9_7f4a_7c15u64.wrapping_mul(i as u64 + 1));
            let config = SimulationConfig {
                horizon,
                max_events,
                k,
                policy: FrontierPolicy::Reflect,
                seed: sector_seed,
            };
            let occ =
                simulate_occupation(&sector_start(sec.plus, sec.minus, n), params, n, &config)?;
            let target = measure.conditional_map(sec.plus);
            Ok(SectorComparison {
                plus: sec.plus,
                minus: sec.minus,
                mass: sec.mass,
                jumps: occ.jumps,
                time: occ.end_time,
                total_variation: total_variation(&occ.fractions, &target),
                seed: sector_seed,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let total_variation = sectors.iter().map(|s| s.mass * s.total_variation).sum();
    Ok(SimulationComparison {
        n,
        k,
        seed,
        sectors,
        total_variation,
        tail: measure.tail.clone(),
    })
}

/// Number of `N`-particle states in the window, for sizing runs.
pub fn window_size(n: usize, k: u32) -> usize {
    (0..=n)
        .map(|mp| monotone_sequences(mp, k).len() * monotone_sequences(n - mp, k).len())
        .sum()
}
