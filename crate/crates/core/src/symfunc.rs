//! Symmetric polynomials in the monomial basis and finite symmetric-function expansions.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::qalgebra::{format_scalar, powi, to_f64, Partition, Scalar};
use crate::statespace::Coordinates;
use crate::{Error, Result};

/// Symmetric polynomial in `n` variables, `Σ c_λ m_{λ|n}`; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymPoly {
    n: usize,
    terms: BTreeMap<Partition, Scalar>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Monomial,
    Macdonald,
    Bigqjacobi,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::Monomial => "monomial",
            Basis::Macdonald => "macdonald",
            Basis::Bigqjacobi => "bigqjacobi",
        })
    }
}

/// Element of `Sym` written as a finite combination of a named basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymFuncExpansion {
    pub basis: Basis,
    pub terms: BTreeMap<Partition, Scalar>,
}

impl SymPoly {
    pub fn zero(n: usize) -> Self {
        SymPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: Scalar) -> Self {
        let mut p = SymPoly::zero(n);
        p.add_term(Partition::empty(), c);
        p
    }

    pub fn one(n: usize) -> Self {
        SymPoly::constant(n, Scalar::one())
    }

    /// `m_{λ|n}`; zero when `λ` has more than `n` parts.
    pub fn monomial(n: usize, lam: Partition) -> Self {
        let mut p = SymPoly::zero(n);
        if lam.len() <= n {
            p.add_term(lam, Scalar::one());
        }
        p
    }

    /// `e_k = m_{(1^k)}`.
    pub fn elementary(n: usize, k: usize) -> Self {
        SymPoly::monomial(n, Partition::new(vec![1; k]).expect("valid"))
    }

    /// `p_m = m_{(m)}`.
    pub fn power_sum(n: usize, m: u32) -> Self {
        SymPoly::monomial(n, Partition::new(vec![m]).expect("valid"))
    }

    pub fn from_terms(
        n: usize,
        terms: impl IntoIterator<Item = (Partition, Scalar)>,
    ) -> Result<Self> {
        let mut p = SymPoly::zero(n);
        for (lam, c) in terms {
            if lam.len() > n {
                return Err(Error::InvalidPartition(format!(
                    "{lam} has more than {n} parts"
                )));
            }
            p.add_term(lam, c);
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Partition, Scalar> {
        &self.terms
    }

    pub fn coeff(&self, lam: &Partition) -> Scalar {
        self.terms.get(lam).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Partition::size).max()
    }

    pub fn homogeneous_part(&self, d: usize) -> SymPoly {
        SymPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.size() == d)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Partition::empty())
    }

    pub fn add_term(&mut self, lam: Partition, c: Scalar) {
        debug_assert!(lam.len() <= self.n);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&lam) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&lam);
                }
            }
            None => {
                self.terms.insert(lam, c);
            }
        }
    }

    fn check_n(&self, other: &SymPoly) -> Result<()> {
        if self.n != other.n {
            return Err(Error::VariableMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &SymPoly) -> Result<SymPoly> {
        self.check_n(other)?;
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SymPoly) -> Result<SymPoly> {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn scale(&self, c: &Scalar) -> SymPoly {
        if c.is_zero() {
            return SymPoly::zero(self.n);
        }
        SymPoly {
            n: self.n,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    /// Product in the monomial basis.
    pub fn multiply(&self, other: &SymPoly) -> Result<SymPoly> {
        self.check_n(other)?;
        let mut out = SymPoly::zero(self.n);
        for (l, a) in &self.terms {
            for (m, b) in &other.terms {
                let ab = a * b;
                for (nu, count) in monomial_product(l, m, self.n) {
                    out.add_term(nu, &ab * Scalar::from_integer(BigInt::from(count)));
                }
            }
        }
        Ok(out)
    }

    /// Value at the given coordinates, implicitly padded with zeros.
    pub fn evaluate(&self, xs: &[Scalar]) -> Scalar {
        let max_part = self.terms.keys().map(|k| k.part(0)).max().unwrap_or(0);
        let powers = power_table(xs, max_part);
        self.terms.iter().fold(Scalar::zero(), |acc, (lam, c)| {
            acc + c * monomial_from_powers(lam, &powers)
        })
    }

    pub fn evaluate_at(&self, c: &Coordinates) -> Scalar {
        self.evaluate(&c.nonzero())
    }

    /// Floating-point value with coefficients rounded to `f64`.
    pub fn evaluate_f64(&self, xs: &[f64]) -> f64 {
        FloatPoly::from(self).evaluate(xs)
    }

    pub fn to_expansion(&self) -> SymFuncExpansion {
        SymFuncExpansion {
            basis: Basis::Monomial,
            terms: self.terms.clone(),
        }
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson::from_terms(Some(self.n), Basis::Monomial, &self.terms)
    }
}

impl fmt::Display for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.terms, "m")
    }
}

impl fmt::Display for SymFuncExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = match self.basis {
            Basis::Monomial => "m",
            Basis::Macdonald => "P",
            Basis::Bigqjacobi => "Φ",
        };
        write_terms(f, &self.terms, sym)
    }
}

fn write_terms(
    f: &mut fmt::Formatter<'_>,
    terms: &BTreeMap<Partition, Scalar>,
    sym: &str,
) -> fmt::Result {
    if terms.is_empty() {
        return f.write_str("0");
    }
    let parts: Vec<String> = terms
        .iter()
        .rev()
        .map(|(k, v)| format!("({}) {sym}{k}", format_scalar(v)))
        .collect();
    f.write_str(&parts.join(" + "))
}

/// `x_i^e` for `e ≤ max`.
fn power_table(xs: &[Scalar], max: u32) -> Vec<Vec<Scalar>> {
    xs.iter()
        .map(|x| {
            let mut row = Vec::with_capacity(max as usize + 1);
            let mut acc = Scalar::one();
            for _ in 0..=max {
                row.push(acc.clone());
                acc *= x;
            }
            row
        })
        .collect()
}

/// `m_λ` evaluated from precomputed power rows; sums over distinct placements of the parts.
fn monomial_from_powers(lam: &Partition, powers: &[Vec<Scalar>]) -> Scalar {
    let k = powers.len();
    if lam.len() > k {
        return Scalar::zero();
    }
    let mut exps = lam.padded(k).expect("length checked");
    exps.sort_unstable();
    let mut total = Scalar::zero();
    loop {
        let mut term = Scalar::one();
        for (row, &e) in powers.iter().zip(&exps) {
            if e > 0 {
                term *= &row[e as usize];
            }
        }
        total += term;
        if !next_permutation(&mut exps) {
            break;
        }
    }
    total
}

/// `m_λ(x_1, …, x_k)` at the given coordinates.
pub fn monomial_value(lam: &Partition, xs: &[Scalar]) -> Scalar {
    monomial_from_powers(lam, &power_table(xs, lam.part(0)))
}

/// Lexicographic successor; `false` after the last permutation.
pub fn next_permutation(v: &mut [u32]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Distinct rearrangements of `λ` padded to length `n`.
pub fn distinct_permutations(lam: &Partition, n: usize) -> Vec<Vec<u32>> {
    let Some(mut v) = lam.padded(n) else {
        return Vec::new();
    };
    v.sort_unstable();
    let mut out = vec![v.clone()];
    while next_permutation(&mut v) {
        out.push(v.clone());
    }
    out
}

/// `m_λ m_μ = Σ_ν c_ν m_ν` in `n` variables: `c_ν` counts pairs of rearrangements summing to `ν`.
pub fn monomial_product(lam: &Partition, mu: &Partition, n: usize) -> BTreeMap<Partition, u64> {
    let mut out = BTreeMap::new();
    let perms_mu = distinct_permutations(mu, n);
    for alpha in distinct_permutations(lam, n) {
        for beta in &perms_mu {
            let sum: Vec<u32> = alpha.iter().zip(beta).map(|(a, b)| a + b).collect();
            if sum.windows(2).all(|w| w[0] >= w[1]) {
                *out.entry(Partition::new(sum).expect("sorted")).or_insert(0) += 1;
            }
        }
    }
    out
}

/// Drops monomials with more than `n` parts.
pub fn project(f: &SymFuncExpansion, n: usize) -> Result<SymPoly> {
    if f.basis != Basis::Monomial {
        return Err(Error::Invariant(format!(
            "projection expects the monomial basis, got {}",
            f.basis
        )));
    }
    SymPoly::from_terms(
        n,
        f.terms
            .iter()
            .filter(|(k, _)| k.len() <= n)
            .map(|(k, v)| (k.clone(), v.clone())),
    )
}

/// Inverse of the projection `Sym_{≤d} → Sym(N)_{≤d}`, defined for `deg f ≤ d ≤ N`.
pub fn lift(f: &SymPoly, d: usize) -> Result<SymFuncExpansion> {
    let degree = f.degree().unwrap_or(0);
    if d > f.n() || degree > d {
        return Err(Error::Lift {
            degree,
            bound: d,
            n_vars: f.n(),
        });
    }
    Ok(f.to_expansion())
}

/// Bound on `|F(X) − F(X_kept)|` when every dropped coordinate on either side is at
/// most `x_cut` in magnitude and dropped coordinates decay at least geometrically
/// with ratio `t`: `Σ |c_λ| (∏(S_{λ_i} + T_{λ_i}) − ∏ S_{λ_i})` with
/// `S_m = Σ_kept |x|^m` and `T_m = 2 x_cut^m / (1 − t^m)`.
///
/// With `kept` empty and `x_cut = max |x|` this is a bound on `sup |F|`.
pub fn truncation_bound(
    terms: &BTreeMap<Partition, Scalar>,
    kept: &[Scalar],
    x_cut: &Scalar,
    t: &Scalar,
) -> Scalar {
    let abs: Vec<Scalar> = kept.iter().map(Signed::abs).collect();
    let cut = x_cut.abs();
    let s = |m: u32| {
        abs.iter()
            .fold(Scalar::zero(), |acc, x| acc + powi(x, m as i64))
    };
    let tail = |m: u32| {
        Scalar::from_integer(BigInt::from(2)) * powi(&cut, m as i64)
            / (Scalar::one() - powi(t, m as i64))
    };
    terms.iter().fold(Scalar::zero(), |acc, (lam, c)| {
        let (with, without) =
            lam.parts()
                .iter()
                .fold((Scalar::one(), Scalar::one()), |(w, wo), &m| {
                    let sm = s(m);
                    (w * (&sm + tail(m)), wo * sm)
                });
        acc + c.abs() * (with - without)
    })
}

/// Symmetric polynomial with `f64` coefficients in the monomial basis, used for
/// semigroup output and statistics.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FloatPoly {
    pub n: usize,
    pub terms: BTreeMap<Partition, f64>,
}

impl FloatPoly {
    pub fn zero(n: usize) -> Self {
        FloatPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn evaluate(&self, xs: &[f64]) -> f64 {
        let max = self.terms.keys().map(|k| k.part(0)).max().unwrap_or(0) as usize;
        let powers: Vec<Vec<f64>> = xs
            .iter()
            .map(|&x| {
                (0..=max)
                    .scan(1.0, |acc, _| {
                        let v = *acc;
                        *acc *= x;
                        Some(v)
                    })
                    .collect()
            })
            .collect();
        self.terms.iter().fold(0.0, |acc, (lam, c)| {
            if lam.len() > xs.len() {
                return acc;
            }
            let mut exps = lam.padded(xs.len()).expect("length checked");
            exps.sort_unstable();
            let mut m = 0.0;
            loop {
                m += powers
                    .iter()
                    .zip(&exps)
                    .map(|(row, &e)| row[e as usize])
                    .product::<f64>();
                if !next_permutation(&mut exps) {
                    break;
                }
            }
            acc + c * m
        })
    }

    /// Largest coefficient difference, `max_κ |f_κ − g_κ|`.
    pub fn max_coeff_distance(&self, other: &FloatPoly) -> f64 {
        let keys: std::collections::BTreeSet<&Partition> =
            self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter()
            .map(|k| {
                let a = self.terms.get(k).copied().unwrap_or(0.0);
                let b = other.terms.get(k).copied().unwrap_or(0.0);
                (a - b).abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }
}

impl From<&SymPoly> for FloatPoly {
    fn from(p: &SymPoly) -> Self {
        FloatPoly {
            n: p.n,
            terms: p
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), to_f64(c)))
                .collect(),
        }
    }
}

/// JSON form `{"N", "basis", "terms": [{"partition", "num", "den"}]}`; numerator and
/// denominator are decimal strings so that big integers survive any JSON reader.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    #[serde(rename = "N")]
    pub n: Option<usize>,
    pub basis: Basis,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub partition: Partition,
    pub num: String,
    pub den: String,
    pub float: f64,
}

impl PolyJson {
    pub fn from_terms(n: Option<usize>, basis: Basis, terms: &BTreeMap<Partition, Scalar>) -> Self {
        PolyJson {
            n,
            basis,
            terms: terms
                .iter()
                .rev()
                .map(|(k, v)| TermJson {
                    partition: k.clone(),
                    num: v.numer().to_string(),
                    den: v.denom().to_string(),
                    float: to_f64(v),
                })
                .collect(),
        }
    }

    pub fn coefficients(&self) -> Result<BTreeMap<Partition, Scalar>> {
        let mut out = BTreeMap::new();
        for term in &self.terms {
            let parse = |s: &str| {
                s.parse::<BigInt>()
                    .map_err(|_| Error::Parse(format!("bad integer {s:?}")))
            };
            let den = parse(&term.den)?;
            if den.is_zero() {
                return Err(Error::Parse("zero denominator".into()));
            }
            out.insert(term.partition.clone(), Scalar::new(parse(&term.num)?, den));
        }
        Ok(out)
    }

    pub fn to_sympoly(&self) -> Result<SymPoly> {
        let n = self
            .n
            .ok_or_else(|| Error::Parse("polynomial JSON without N".into()))?;
        if self.basis != Basis::Monomial {
            return Err(Error::Parse("expected the monomial basis".into()));
        }
        SymPoly::from_terms(n, self.coefficients()?)
    }
}

impl SymFuncExpansion {
    pub fn new(basis: Basis) -> Self {
        SymFuncExpansion {
            basis,
            terms: BTreeMap::new(),
        }
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson::from_terms(None, self.basis, &self.terms)
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Partition::size).max()
    }
}
