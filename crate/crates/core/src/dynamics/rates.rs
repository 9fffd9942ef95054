//! Jump rates read off `D_N`: a particle at `x_i` moves to `x_i q^{±1}` at rate
//! `(S^±_{t,i} V_N / V_N)(X) · σ_N^±(x_i)`.

use std::collections::HashMap;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::bigqjacobi::{OperatorCoeffs, Sign};
use crate::qalgebra::{format_scalar, Params, Scalar};
use crate::statespace::{enumerate_exact, Direction, Side, State};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rate {
    pub target: State,
    pub side: Side,
    pub position: usize,
    pub direction: Direction,
    pub rate: Scalar,
}

fn sign_of(direction: Direction) -> Sign {
    match direction {
        Direction::Up => Sign::Plus,
        Direction::Down => Sign::Minus,
    }
}

/// Exact rates of every admissible move out of `s`.
///
/// Every candidate move is evaluated, including the ones that leave the
/// admissible set; those must come out exactly zero, and admissible ones
/// nonnegative. Anything else is reported as an invariant violation rather than
/// clamped.
pub fn rates(s: &State, ops: &OperatorCoeffs) -> Result<Vec<Rate>> {
    let n = ops.n;
    if s.capacity() != Some(n) || s.count() != n {
        return Err(Error::State(format!(
            "rates need exactly {n} nonzero particles, got {s}"
        )));
    }
    let xs = s.coords(&ops.params).nonzero();
    let mp = s.plus().len();
    let mut out = Vec::new();
    for side in [Side::Plus, Side::Minus] {
        let idx = s.side(side);
        for pos in 0..idx.len() {
            let i = if side == Side::Plus { pos } else { mp + pos };
            for direction in [Direction::Up, Direction::Down] {
                let rate = ops.jump_coefficient(&xs, i, sign_of(direction))?;
                let value = match direction {
                    Direction::Up => idx[pos] + 1,
                    Direction::Down => idx[pos] - 1,
                };
                let mut plus = s.plus().to_vec();
                let mut minus = s.minus().to_vec();
                match side {
                    Side::Plus => plus[pos] = value,
                    Side::Minus => minus[pos] = value,
                }
                let target = State::raw(plus, minus, Some(n));
                if !target.is_admissible() {
                    if !rate.is_zero() {
                        return Err(Error::Invariant(format!(
                            "inadmissible move {s} -> {target} has rate {}",
                            format_scalar(&rate)
                        )));
                    }
                    continue;
                }
                if rate.is_negative() {
                    return Err(Error::Invariant(format!(
                        "negative rate {} for {s} -> {target}",
                        format_scalar(&rate)
                    )));
                }
                out.push(Rate {
                    target,
                    side,
                    position: pos,
                    direction,
                    rate,
                });
            }
        }
    }
    Ok(out)
}

pub fn total_rate(rs: &[Rate]) -> Scalar {
    rs.iter().fold(Scalar::zero(), |acc, r| acc + &r.rate)
}

/// Rates of all `N`-particle states with indices `≤ K`.
#[derive(Clone, Debug)]
pub struct RateTable {
    pub n: usize,
    pub k: u32,
    pub states: Vec<State>,
    pub moves: HashMap<State, Vec<Rate>>,
}

impl RateTable {
    pub fn build(params: &Params, n: usize, k: u32) -> Result<Self> {
        let ops = OperatorCoeffs::new(params, n);
        let states = enumerate_exact(n, n, k);
        let computed = states
            .par_iter()
            .map(|s| rates(s, &ops).map(|r| (s.clone(), r)))
            .collect::<Result<Vec<_>>>()?;
        Ok(RateTable {
            n,
            k,
            states,
            moves: computed.into_iter().collect(),
        })
    }

    pub fn get(&self, s: &State) -> Option<&[Rate]> {
        self.moves.get(s).map(Vec::as_slice)
    }

    /// Rate of the single move `from → to`, zero if there is none.
    pub fn rate(&self, from: &State, to: &State) -> Scalar {
        self.moves
            .get(from)
            .and_then(|rs| rs.iter().find(|r| &r.target == to))
            .map_or_else(Scalar::zero, |r| r.rate.clone())
    }

    /// Interior states: every move stays inside the window.
    pub fn interior(&self) -> impl Iterator<Item = &State> {
        self.states.iter().filter(|s| !s.is_frontier(self.k))
    }
}
