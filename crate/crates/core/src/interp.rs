//! Recovering symmetric polynomials from point values.
//!
//! An operator whose output is known to lie in `span{m_κ : κ ∈ basis}` is
//! evaluated at as many sample points as the basis has elements, and the exact
//! monomial coefficients are read off from a cached inverse matrix. Two extra
//! points re-check every fit, so a wrong degree bound is caught instead of
//! silently producing a wrong polynomial.

use std::sync::{Arc, OnceLock};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cache::Memo;
use crate::linalg::{invert, mat_vec, Matrix};
use crate::qalgebra::{int, Partition, Scalar};
use crate::symfunc::{monomial_value, SymPoly};
use crate::{Error, Result};

/// Seed of the sample-point generator; recorded in reports for reproducibility.
pub const SAMPLE_SEED: u64 = 0x0b16_ac0b1;

const EXTRA_POINTS: usize = 2;

pub struct Interpolator {
    n: usize,
    basis: Vec<Partition>,
    points: Vec<Vec<Scalar>>,
    checks: Vec<Vec<Scalar>>,
    inverse: Matrix,
}

type Key = (usize, Vec<Partition>);

fn memo() -> &'static Memo<Key, Arc<Interpolator>> {
    static MEMO: OnceLock<Memo<Key, Arc<Interpolator>>> = OnceLock::new();
    MEMO.get_or_init(Memo::new)
}

/// Cached interpolator for `n` variables and the given monomial basis.
pub fn interpolator(n: usize, basis: &[Partition]) -> Result<Arc<Interpolator>> {
    let key = (n, basis.to_vec());
    memo().get_or_try(&key, || {
        Interpolator::build(n, basis.to_vec()).map(Arc::new)
    })
}

/// Distinct nonzero integers; coordinates avoid the hyperplanes `x_i = x_j` and `x_i = 0`.
fn random_point(rng: &mut ChaCha8Rng, n: usize, range: i64) -> Vec<Scalar> {
    let mut values: Vec<i64> = Vec::with_capacity(n);
    while values.len() < n {
        let mut v = rng.random_range(-range..=range);
        if v == 0 {
            v = range + 1;
        }
        if !values.contains(&v) {
            values.push(v);
        }
    }
    values.into_iter().map(int).collect()
}

impl Interpolator {
    fn build(n: usize, basis: Vec<Partition>) -> Result<Self> {
        if basis.iter().any(|k| k.len() > n) {
            return Err(Error::Interpolation(format!(
                "basis element longer than {n} variables"
            )));
        }
        let dim = basis.len();
        let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED ^ ((n as u64) << 32) ^ dim as u64);
        let range = (2 * n + dim) as i64 + 2;
        let row = |pt: &[Scalar]| -> Vec<Scalar> {
            basis.iter().map(|k| monomial_value(k, pt)).collect()
        };

        // greedy: keep a candidate only if it raises the rank
        let mut points = Vec::with_capacity(dim);
        let mut echelon: Vec<(usize, Vec<Scalar>)> = Vec::new();
        let mut attempts = 0;
        while points.len() < dim {
            attempts += 1;
            if attempts > 200 * (dim + 1) {
                return Err(Error::Interpolation(format!(
                    "could not find {dim} independent sample points in {n} variables"
                )));
            }
            let pt = random_point(&mut rng, n, range);
            let mut r = row(&pt);
            for (pivot, e) in &echelon {
                if !r[*pivot].is_zero() {
                    let f = r[*pivot].clone();
                    for (x, y) in r.iter_mut().zip(e) {
                        *x -= &f * y;
                    }
                }
            }
            if let Some(pivot) = r.iter().position(|x| !x.is_zero()) {
                let inv = r[pivot].recip();
                for x in r.iter_mut() {
                    *x *= &inv;
                }
                echelon.push((pivot, r));
                points.push(pt);
            }
        }
        let checks = (0..EXTRA_POINTS)
            .map(|_| random_point(&mut rng, n, range))
            .collect();
        let matrix: Matrix = points.iter().map(|pt| row(pt)).collect();
        let inverse = invert(&matrix)?;
        Ok(Interpolator {
            n,
            basis,
            points,
            checks,
            inverse,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[Partition] {
        &self.basis
    }

    pub fn points(&self) -> &[Vec<Scalar>] {
        &self.points
    }

    /// Fits `Σ c_κ m_κ` to the values of `f`, verifying at the extra points.
    pub fn fit(&self, f: impl Fn(&[Scalar]) -> Result<Scalar>) -> Result<SymPoly> {
        let values = self
            .points
            .iter()
            .map(|p| f(p))
            .collect::<Result<Vec<_>>>()?;
        let coeffs = mat_vec(&self.inverse, &values);
        let poly = SymPoly::from_terms(self.n, self.basis.iter().cloned().zip(coeffs))?;
        for pt in &self.checks {
            if poly.evaluate(pt) != f(pt)? {
                return Err(Error::Interpolation(format!(
                    "values in {} variables are not spanned by the {} basis monomials",
                    self.n,
                    self.basis.len()
                )));
            }
        }
        Ok(poly)
    }
}
