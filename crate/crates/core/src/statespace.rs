//! Particle configurations on the two-sided q-lattice.
//!
//! A [`State`] stores two weakly increasing index lists `k₁ ≤ k₂ ≤ …` (positive
//! side) and `l₁ ≤ l₂ ≤ …` (negative side). Coordinates are
//! `x⁺_i = a⁻¹ q^{k_i} t^{i−1}` and `x⁻_i = b⁻¹ q^{l_i} t^{i−1}`; when the
//! capacity is `N`, the remaining `N − |ω|` particles sit at `0`.

use std::cmp::Reverse;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::qalgebra::{powi, Params, Scalar};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Index grows by one: the coordinate is multiplied by `q` (towards 0).
    Up,
    /// Index drops by one: the coordinate is divided by `q` (away from 0).
    Down,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State {
    plus: Vec<u32>,
    minus: Vec<u32>,
    capacity: Option<usize>,
}

/// Realized coordinates of a state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coordinates {
    /// Positive and strictly decreasing.
    pub xs_plus: Vec<Scalar>,
    /// Negative and strictly increasing.
    pub xs_minus: Vec<Scalar>,
    pub zeros: usize,
}

impl Coordinates {
    /// All nonzero coordinates, positive side first.
    pub fn nonzero(&self) -> Vec<Scalar> {
        self.xs_plus.iter().chain(&self.xs_minus).cloned().collect()
    }

    /// Nonzero coordinates followed by the zeros.
    pub fn padded(&self) -> Vec<Scalar> {
        let mut v = self.nonzero();
        v.extend(std::iter::repeat_n(Scalar::zero(), self.zeros));
        v
    }

    /// Checks the spacing `x_{i+1}/x_i ≤ t` and the bounds `b⁻¹q ≤ x ≤ a⁻¹q` exactly.
    pub fn satisfies_spacing(&self, p: &Params) -> bool {
        let spaced = |xs: &[Scalar]| xs.windows(2).all(|w| &w[1] / &w[0] <= p.t);
        let lo = p.b.recip() * &p.q;
        let hi = p.a.recip() * &p.q;
        spaced(&self.xs_plus)
            && spaced(&self.xs_minus)
            && self.xs_plus.iter().all(|x| x.is_positive() && x <= &hi)
            && self.xs_minus.iter().all(|x| x.is_negative() && x >= &lo)
    }
}

/// One admissible single-index move out of a state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Move {
    pub target: State,
    pub side: Side,
    /// 0-based particle position on its side.
    pub position: usize,
    pub direction: Direction,
}

impl State {
    pub fn new(plus: Vec<u32>, minus: Vec<u32>, capacity: Option<usize>) -> Result<Self> {
        let s = State {
            plus,
            minus,
            capacity,
        };
        if !s.is_admissible() {
            return Err(Error::State(format!("{s} is not admissible")));
        }
        Ok(s)
    }

    /// Builds without validation; pair with [`State::is_admissible`].
    pub fn raw(plus: Vec<u32>, minus: Vec<u32>, capacity: Option<usize>) -> Self {
        State {
            plus,
            minus,
            capacity,
        }
    }

    pub fn empty(capacity: Option<usize>) -> Self {
        State::raw(Vec::new(), Vec::new(), capacity)
    }

    pub fn plus(&self) -> &[u32] {
        &self.plus
    }

    pub fn minus(&self) -> &[u32] {
        &self.minus
    }

    pub fn capacity(&self) -> Option<usize> {
        self.capacity
    }

    pub fn side(&self, side: Side) -> &[u32] {
        match side {
            Side::Plus => &self.plus,
            Side::Minus => &self.minus,
        }
    }

    /// Number of nonzero particles `|ω|`.
    pub fn count(&self) -> usize {
        self.plus.len() + self.minus.len()
    }

    /// Particles pinned at `0`; zero for unbounded capacity.
    pub fn zeros(&self) -> usize {
        self.capacity.map_or(0, |n| n.saturating_sub(self.count()))
    }

    pub fn is_admissible(&self) -> bool {
        let monotone = |v: &[u32]| v.iter().all(|&k| k >= 1) && v.windows(2).all(|w| w[0] <= w[1]);
        monotone(&self.plus)
            && monotone(&self.minus)
            && self.capacity.is_none_or(|n| self.count() <= n)
    }

    pub fn max_index(&self) -> u32 {
        self.plus
            .iter()
            .chain(&self.minus)
            .copied()
            .max()
            .unwrap_or(0)
    }

    /// On the edge of the window `{indices ≤ k}`: some index equals `k`, or a
    /// particle sits at `0` (the limit of unbounded indices).
    pub fn is_frontier(&self, k: u32) -> bool {
        self.max_index() >= k || self.zeros() > 0
    }

    pub fn coords(&self, p: &Params) -> Coordinates {
        let side = |idx: &[u32], base: Scalar| -> Vec<Scalar> {
            let mut out = Vec::with_capacity(idx.len());
            let mut tpow = Scalar::one();
            for &k in idx {
                out.push(&base * powi(&p.q, k as i64) * &tpow);
                tpow *= &p.t;
            }
            out
        };
        Coordinates {
            xs_plus: side(&self.plus, p.a.recip()),
            xs_minus: side(&self.minus, p.b.recip()),
            zeros: self.zeros(),
        }
    }

    fn with_index(&self, side: Side, pos: usize, value: u32) -> State {
        let mut s = self.clone();
        match side {
            Side::Plus => s.plus[pos] = value,
            Side::Minus => s.minus[pos] = value,
        }
        s
    }

    /// All admissible single-index moves, in order (plus side first, by position, up before down).
    pub fn jump_targets(&self) -> Vec<Move> {
        let mut out = Vec::new();
        for side in [Side::Plus, Side::Minus] {
            let idx = self.side(side);
            for pos in 0..idx.len() {
                let k = idx[pos];
                let candidates = [(Direction::Up, k + 1), (Direction::Down, k.wrapping_sub(1))];
                for (direction, value) in candidates {
                    if value == 0 || value == u32::MAX {
                        continue;
                    }
                    let target = self.with_index(side, pos, value);
                    if target.is_admissible() {
                        out.push(Move {
                            target,
                            side,
                            position: pos,
                            direction,
                        });
                    }
                }
            }
        }
        out
    }

    /// Short form `+[1,3];-[2]` without capacity information.
    pub fn short(&self) -> String {
        format!("+{:?};-{:?}", self.plus, self.minus).replace(' ', "")
    }
}

/// Weakly increasing sequences of length `len` with entries in `1..=k`, lexicographic.
pub fn monotone_sequences(len: usize, k: u32) -> Vec<Vec<u32>> {
    fn rec(len: usize, lo: u32, k: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in lo..=k {
            cur.push(v);
            rec(len, v, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(len, 1, k, &mut Vec::new(), &mut out);
    out
}

fn canonical_key(s: &State) -> (usize, Reverse<usize>, Vec<u32>, Vec<u32>) {
    (
        s.count(),
        Reverse(s.plus.len()),
        s.plus.clone(),
        s.minus.clone(),
    )
}

/// All states of capacity `n` with indices `≤ k`, in canonical order
/// (by particle count, then more positive particles first, then lexicographic).
pub fn enumerate_truncated(n: usize, k: u32) -> Vec<State> {
    let mut out = Vec::new();
    for m in 0..=n {
        out.extend(enumerate_exact(m, n, k));
    }
    out
}

/// States with exactly `m` nonzero particles, capacity `n`, indices `≤ k`.
pub fn enumerate_exact(m: usize, n: usize, k: u32) -> Vec<State> {
    let mut out = Vec::new();
    for mp in (0..=m).rev() {
        out.extend(enumerate_sector(mp, m - mp, n, k));
    }
    out.sort_by_key(canonical_key);
    out
}

/// States with `mp` positive and `mm` negative particles, capacity `n`, indices `≤ k`.
pub fn enumerate_sector(mp: usize, mm: usize, n: usize, k: u32) -> Vec<State> {
    let pluses = monotone_sequences(mp, k);
    let minuses = monotone_sequences(mm, k);
    let mut out = Vec::with_capacity(pluses.len() * minuses.len());
    for p in &pluses {
        for m in &minuses {
            out.push(State::raw(p.clone(), m.clone(), Some(n)));
        }
    }
    out
}

impl fmt::Display for State {
    /// Canonical form `N=2;+[1,3];-[2];z=0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cap = self.capacity.map_or("inf".to_string(), |n| n.to_string());
        let list = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        write!(
            f,
            "N={cap};+[{}];-[{}];z={}",
            list(&self.plus),
            list(&self.minus),
            self.zeros()
        )
    }
}

impl FromStr for State {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = |why: &str| Error::Parse(format!("bad state {text:?}: {why}"));
        let normalized = text.trim().replace('−', "-");
        let mut capacity = None;
        let mut plus = None;
        let mut minus = None;
        let mut zeros = None;
        for field in normalized.split(';') {
            let field = field.trim();
            let list = |body: &str| -> Result<Vec<u32>> {
                let inner = body
                    .strip_prefix('[')
                    .and_then(|b| b.strip_suffix(']'))
                    .ok_or_else(|| bad("expected [..]"))?;
                if inner.trim().is_empty() {
                    return Ok(Vec::new());
                }
                inner
                    .split(',')
                    .map(|x| x.trim().parse().map_err(|_| bad("bad index")))
                    .collect()
            };
            if let Some(v) = field.strip_prefix("N=") {
                capacity = match v {
                    "inf" | "∞" => None,
                    n => Some(n.parse().map_err(|_| bad("bad N"))?),
                };
            } else if let Some(v) = field.strip_prefix('+') {
                plus = Some(list(v)?);
            } else if let Some(v) = field.strip_prefix('-') {
                minus = Some(list(v)?);
            } else if let Some(v) = field.strip_prefix("z=") {
                zeros = Some(v.parse::<usize>().map_err(|_| bad("bad zero count"))?);
            } else if !field.is_empty() {
                return Err(bad("unknown field"));
            }
        }
        let s = State::new(
            plus.unwrap_or_default(),
            minus.unwrap_or_default(),
            capacity,
        )?;
        if let Some(z) = zeros {
            if z != s.zeros() {
                return Err(bad("zero count does not match N"));
            }
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qalgebra::{int, rat, ConjugatePair};

    fn params(q: Scalar, t: Scalar, a: Scalar) -> Params {
        Params::new(
            q,
            t,
            a,
            int(-3),
            ConjugatePair::new(int(0), int(1)).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn coordinate_examples() {
        let p = params(rat(1, 2), rat(1, 3), int(2));
        let c = State::empty(Some(2)).coords(&p);
        assert!(c.nonzero().is_empty());
        assert_eq!(c.zeros, 2);
        let c = State::new(vec![1], vec![], Some(1)).unwrap().coords(&p);
        assert_eq!(c.xs_plus, vec![rat(1, 4)]);
        let c = State::new(vec![1, 1], vec![], Some(2)).unwrap().coords(&p);
        assert_eq!(c.xs_plus, vec![rat(1, 4), rat(1, 12)]);
        assert_eq!(&c.xs_plus[1] / &c.xs_plus[0], p.t);
    }

    #[test]
    fn admissibility_examples() {
        assert!(!State::raw(vec![2, 1], vec![], Some(2)).is_admissible());
        assert!(State::raw(vec![1, 1], vec![3], Some(3)).is_admissible());
        assert!(!State::raw(vec![1], vec![], Some(0)).is_admissible());
    }

    #[test]
    fn enumeration_counts() {
        let one = enumerate_truncated(1, 2);
        let text: Vec<String> = one.iter().map(State::short).collect();
        assert_eq!(
            text,
            vec!["+[];-[]", "+[1];-[]", "+[2];-[]", "+[];-[1]", "+[];-[2]"]
        );
        // brute force: all pairs of monotone lists with indices ≤ 1, total ≤ 2
        let lists: Vec<Vec<u32>> = vec![vec![], vec![1], vec![1, 1]];
        let mut brute = 0;
        for p in &lists {
            for m in &lists {
                if p.len() + m.len() <= 2 {
                    brute += 1;
                }
            }
        }
        assert_eq!(enumerate_truncated(2, 1).len(), brute);
        assert_eq!(brute, 6);
        for n in 1..4 {
            for k in 1..5 {
                assert!(enumerate_truncated(n, k).len() <= enumerate_truncated(n, k + 1).len());
                assert!(enumerate_truncated(n, k).len() <= enumerate_truncated(n + 1, k).len());
            }
        }
    }

    #[test]
    fn jump_target_examples() {
        let s = State::new(vec![1], vec![], Some(1)).unwrap();
        let moves = s.jump_targets();
        assert_eq!(moves.len(), 1);
        assert_eq!(moves[0].target.plus(), &[2]);
        assert_eq!(moves[0].direction, Direction::Up);

        let s = State::new(vec![3, 3], vec![], Some(2)).unwrap();
        assert!(s.jump_targets().iter().all(|m| m.target.plus() != [3, 2]));
        assert!(State::empty(Some(2)).jump_targets().is_empty());
    }

    #[test]
    fn moves_are_symmetric_and_spacing_holds() {
        let p = params(rat(1, 3), rat(1, 2), rat(3, 2));
        for s in enumerate_truncated(3, 4) {
            assert!(s.coords(&p).satisfies_spacing(&p), "{s}");
            for m in s.jump_targets() {
                assert!(m.target.is_admissible());
                assert!(m.target.jump_targets().iter().any(|back| back.target == s));
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let s = State::new(vec![1, 3], vec![2], Some(4)).unwrap();
        assert_eq!(s.to_string(), "N=4;+[1,3];-[2];z=1");
        assert_eq!(s.to_string().parse::<State>().unwrap(), s);
        assert_eq!("N=4;+[1,3];−[2];z=1".parse::<State>().unwrap(), s);
        assert!("N=1;+[1,3];-[];z=0".parse::<State>().is_err());
    }
}
