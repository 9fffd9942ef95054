//! The q-difference operators `D` and `D_N`, their eigenvalues, the big q-Jacobi
//! polynomials `φ_{λ|N}`, the stable coefficients `π(λ, ν)`, the symmetric
//! functions `Φ_λ`, and the squared norms `h_λ`.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::cache::Memo;
use crate::interp::interpolator;
use crate::macdonald::{from_macdonald_basis, macdonald_poly, to_macdonald_basis};
use crate::qalgebra::{
    c_minus, c_plus, exact_sqrt, format_scalar, gen_pochhammer, gen_pochhammer_conjpair, int,
    partitions_up_to, powi, sqrt_bracket, Params, Partition, Scalar,
};
use crate::symfunc::{Basis, SymFuncExpansion, SymPoly};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    /// `x ↦ xq`.
    Plus,
    /// `x ↦ x/q`.
    Minus,
}

/// `σ_N^±` as quadratics in `x⁻¹` for fixed parameters and level.
#[derive(Clone, Debug)]
pub struct OperatorCoeffs {
    pub params: Params,
    pub n: usize,
    /// `−q t^{N−1}/ab`
    kp: Scalar,
    /// `−q² t^{N−1}/ab`
    km: Scalar,
    /// `ab/q²`
    ab_q2: Scalar,
    /// `(a+b)/q`
    apb_q: Scalar,
    t_inv: Scalar,
}

impl OperatorCoeffs {
    pub fn new(params: &Params, n: usize) -> Self {
        assert!(n >= 1, "level must be at least 1");
        let ab = params.ab();
        let tn = powi(&params.t, n as i64 - 1);
        let q = &params.q;
        OperatorCoeffs {
            kp: -(q * &tn) / &ab,
            km: -(q * q * &tn) / &ab,
            ab_q2: &ab / (q * q),
            apb_q: (&params.a + &params.b) / q,
            t_inv: params.t.recip(),
            params: params.clone(),
            n,
        }
    }

    /// `σ_N^+(x) = −(q t^{N−1}/ab)(cd − (c+d)x⁻¹ + x⁻²)`,
    /// `σ_N^−(x) = −(q² t^{N−1}/ab)(ab/q² − (a+b)q⁻¹x⁻¹ + x⁻²)`.
    pub fn sigma(&self, x: &Scalar, sign: Sign) -> Result<Scalar> {
        if x.is_zero() {
            return Err(Error::DivisionByZero("σ at x = 0".into()));
        }
        let u = x.recip();
        let u2 = &u * &u;
        Ok(match sign {
            Sign::Plus => &self.kp * (self.params.s2() - self.params.s1() * &u + u2),
            Sign::Minus => &self.km * (&self.ab_q2 - &self.apb_q * &u + u2),
        })
    }

    /// `S_{t,i}^± V_N / V_N = ∏_{j≠i} (t^{±1} x_i − x_j)/(x_i − x_j)`.
    pub fn vandermonde_ratio(&self, xs: &[Scalar], i: usize, sign: Sign) -> Result<Scalar> {
        let ts = match sign {
            Sign::Plus => &self.params.t,
            Sign::Minus => &self.t_inv,
        };
        let mut r = Scalar::one();
        for (j, xj) in xs.iter().enumerate() {
            if j == i {
                continue;
            }
            let den = &xs[i] - xj;
            if den.is_zero() {
                return Err(Error::DivisionByZero("coincident coordinates".into()));
            }
            r *= (ts * &xs[i] - xj) / den;
        }
        Ok(r)
    }

    pub fn q_shift(&self, x: &Scalar, sign: Sign) -> Scalar {
        match sign {
            Sign::Plus => x * &self.params.q,
            Sign::Minus => x / &self.params.q,
        }
    }

    /// Coefficient of `f(…, x_i q^{±1}, …) − f(X)` in `D_N f(X)`.
    pub fn jump_coefficient(&self, xs: &[Scalar], i: usize, sign: Sign) -> Result<Scalar> {
        Ok(self.vandermonde_ratio(xs, i, sign)? * self.sigma(&xs[i], sign)?)
    }
}

/// `σ_N^±(x)`.
pub fn sigma(params: &Params, n: usize, x: &Scalar, sign: Sign) -> Result<Scalar> {
    OperatorCoeffs::new(params, n).sigma(x, sign)
}

/// `D_N f(X)` at a point with `N` distinct nonzero coordinates.
pub fn dn_at_point(f: &SymPoly, ops: &OperatorCoeffs, xs: &[Scalar]) -> Result<Scalar> {
    let base = f.evaluate(xs);
    let mut total = Scalar::zero();
    let mut shifted = xs.to_vec();
    for i in 0..xs.len() {
        for sign in [Sign::Plus, Sign::Minus] {
            let coeff = ops.jump_coefficient(xs, i, sign)?;
            if coeff.is_zero() {
                continue;
            }
            shifted[i] = ops.q_shift(&xs[i], sign);
            total += coeff * (f.evaluate(&shifted) - &base);
            shifted[i] = xs[i].clone();
        }
    }
    Ok(total)
}

/// `D_N f` in the monomial basis. `D_N` does not raise degree, so the output is
/// fitted in the span of `m_κ` with `|κ| ≤ deg f`.
pub fn apply_dn(f: &SymPoly, params: &Params, n: usize) -> Result<SymPoly> {
    if f.n() != n {
        return Err(Error::VariableMismatch {
            left: f.n(),
            right: n,
        });
    }
    let degree = f.degree().unwrap_or(0);
    let ops = OperatorCoeffs::new(params, n);
    let interp = interpolator(n, &partitions_up_to(degree, n))?;
    interp.fit(|xs| dn_at_point(f, &ops, xs))
}

/// `D` applied to `Σ f_k x^k` through its closed-form action on monomials:
/// `D x^n = −(q^{−n}−1)(1 − cd q^{n+1}/ab) x^n
///        + (q/ab)((c+d)(q^n−1) + (a+b)(q^{−n}−1)) x^{n−1}
///        − (q/ab)((q^n−1) + q(q^{−n}−1)) x^{n−2}`.
pub fn apply_d1(f: &[Scalar], params: &Params) -> Vec<Scalar> {
    let q = &params.q;
    let ab = params.ab();
    let apb = &params.a + &params.b;
    let one = Scalar::one();
    let mut out = vec![Scalar::zero(); f.len()];
    for (n, c) in f.iter().enumerate() {
        if c.is_zero() || n == 0 {
            continue;
        }
        let qn = powi(q, n as i64) - &one;
        let qmn = powi(q, -(n as i64)) - &one;
        out[n] -= c * &qmn * (&one - params.s2() * powi(q, n as i64 + 1) / &ab);
        out[n - 1] += c * q / &ab * (params.s1() * &qn + &apb * &qmn);
        if n >= 2 {
            out[n - 2] -= c * q / &ab * (&qn + q * &qmn);
        }
    }
    while out.len() > 1 && out.last().is_some_and(Zero::is_zero) {
        out.pop();
    }
    out
}

/// `D f(x) = σ⁺(x)(f(xq) − f(x)) + σ⁻(x)(f(x/q) − f(x))` at one point.
pub fn apply_d1_at(f: &[Scalar], params: &Params, x: &Scalar) -> Result<Scalar> {
    let ops = OperatorCoeffs::new(params, 1);
    let eval = |y: &Scalar| f.iter().rev().fold(Scalar::zero(), |acc, c| acc * y + c);
    let fx = eval(x);
    Ok(ops.sigma(x, Sign::Plus)? * (eval(&(x * &params.q)) - &fx)
        + ops.sigma(x, Sign::Minus)? * (eval(&(x / &params.q)) - &fx))
}

/// `μ_{λ|N} = −Σ_{i=1}^N [ (cdq/ab) t^{2N−i−1}(q^{λ_i}−1) + t^{i−1}(q^{−λ_i}−1) ]`.
pub fn mu_n(lam: &Partition, params: &Params, n: usize) -> Result<Scalar> {
    if lam.len() > n {
        return Err(Error::InvalidPartition(format!(
            "{lam} has more than {n} parts"
        )));
    }
    let (q, t) = (&params.q, &params.t);
    let k = params.s2() * q / params.ab();
    let one = Scalar::one();
    let mut total = Scalar::zero();
    for i in 1..=lam.len() {
        let l = lam.part(i - 1) as i64;
        total += &k * powi(t, 2 * n as i64 - i as i64 - 1) * (powi(q, l) - &one)
            + powi(t, i as i64 - 1) * (powi(q, -l) - &one);
    }
    Ok(-total)
}

/// `μ_λ = −Σ_i [ (γδq/αβ) t^{1−i}(q^{λ_i}−1) + t^{i−1}(q^{−λ_i}−1) ]`, the
/// level-independent eigenvalue at shifted parameters.
pub fn mu_infinity(lam: &Partition, base: &Params) -> Scalar {
    let (q, t) = (&base.q, &base.t);
    let k = base.s2() * q / base.ab();
    let one = Scalar::one();
    let mut total = Scalar::zero();
    for i in 1..=lam.len() {
        let l = lam.part(i - 1) as i64;
        total += &k * powi(t, 1 - i as i64) * (powi(q, l) - &one)
            + powi(t, i as i64 - 1) * (powi(q, -l) - &one);
    }
    -total
}

/// Matrix of `D_N` on `{P_{ν|N} : |ν| ≤ d}`: `columns[ν]` holds the Macdonald
/// coefficients of `D_N P_ν`.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    pub n: usize,
    pub degree: usize,
    /// Increasing graded order.
    pub basis: Vec<Partition>,
    pub columns: BTreeMap<Partition, BTreeMap<Partition, Scalar>>,
}

impl OperatorMatrix {
    pub fn entry(&self, row: &Partition, col: &Partition) -> Scalar {
        self.columns[col]
            .get(row)
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    pub fn diagonal(&self) -> BTreeMap<Partition, Scalar> {
        self.basis
            .iter()
            .map(|p| (p.clone(), self.entry(p, p)))
            .collect()
    }

    /// Dense matrix in the order of [`OperatorMatrix::basis`].
    pub fn dense(&self) -> Vec<Vec<Scalar>> {
        self.basis
            .iter()
            .map(|r| self.basis.iter().map(|c| self.entry(r, c)).collect())
            .collect()
    }
}

type MatrixKey = (Params, usize, usize);

fn matrices() -> &'static Memo<MatrixKey, Arc<OperatorMatrix>> {
    static MEMO: OnceLock<Memo<MatrixKey, Arc<OperatorMatrix>>> = OnceLock::new();
    MEMO.get_or_init(Memo::new)
}

/// Cached [`OperatorMatrix`] of degree bound `d`.
pub fn dn_macdonald_matrix(params: &Params, n: usize, d: usize) -> Result<Arc<OperatorMatrix>> {
    let key = (params.clone(), n, d);
    matrices().get_or_try(&key, || {
        let basis = partitions_up_to(d, n);
        let mut columns = BTreeMap::new();
        for nu in &basis {
            let p = macdonald_poly(nu, n, &params.q, &params.t)?;
            let image = apply_dn(&p, params, n)?;
            let coeffs = to_macdonald_basis(&image, &params.q, &params.t)?;
            for kappa in coeffs.keys() {
                if kappa.size() > nu.size() || (kappa.size() == nu.size() && kappa != nu) {
                    return Err(Error::Invariant(format!(
                        "D_N P{nu} has a component along P{kappa}"
                    )));
                }
            }
            columns.insert(nu.clone(), coeffs);
        }
        Ok(Arc::new(OperatorMatrix {
            n,
            degree: d,
            basis,
            columns,
        }))
    })
}

/// `φ_{λ|N}` with its Macdonald expansion and eigenvalue.
#[derive(Clone, Debug)]
pub struct BigQJacobi {
    pub lambda: Partition,
    pub n: usize,
    pub params: Params,
    pub eigenvalue: Scalar,
    /// `φ = Σ c_ν P_{ν|N}`, `c_λ = 1`.
    pub macdonald: BTreeMap<Partition, Scalar>,
    pub poly: SymPoly,
}

type FamilyKey = (Params, usize, Partition);

fn family() -> &'static Memo<FamilyKey, Arc<BigQJacobi>> {
    static MEMO: OnceLock<Memo<FamilyKey, Arc<BigQJacobi>>> = OnceLock::new();
    MEMO.get_or_init(Memo::new)
}

/// `φ_{λ|N}(x; q, t; a, b, c, d)`: the eigenfunction of `D_N` equal to `P_{λ|N}`
/// plus lower-degree Macdonald terms.
pub fn big_qjacobi(lam: &Partition, params: &Params, n: usize) -> Result<Arc<BigQJacobi>> {
    if lam.len() > n {
        return Err(Error::InvalidPartition(format!(
            "{lam} has more than {n} parts"
        )));
    }
    let key = (params.clone(), n, lam.clone());
    family().get_or_try(&key, || solve_big_qjacobi(lam, params, n).map(Arc::new))
}

fn solve_big_qjacobi(lam: &Partition, params: &Params, n: usize) -> Result<BigQJacobi> {
    let d = lam.size();
    let matrix = dn_macdonald_matrix(params, n, d)?;
    let mu = mu_n(lam, params, n)?;
    let diag = matrix.entry(lam, lam);
    if diag != mu {
        return Err(Error::Invariant(format!(
            "D_N has diagonal entry {} on P{lam}, expected {}",
            format_scalar(&diag),
            format_scalar(&mu)
        )));
    }
    let mut coeffs: BTreeMap<Partition, Scalar> = BTreeMap::new();
    coeffs.insert(lam.clone(), Scalar::one());
    // lower degrees, highest first; rows of equal degree decouple
    for deg in (0..d).rev() {
        for nu in matrix.basis.iter().filter(|p| p.size() == deg) {
            let rhs = coeffs
                .iter()
                .filter(|(k, _)| k.size() > deg)
                .fold(Scalar::zero(), |acc, (k, c)| acc + matrix.entry(nu, k) * c);
            let mu_nu = matrix.entry(nu, nu);
            let gap = &mu - &mu_nu;
            if gap.is_zero() {
                return Err(Error::EigenvalueCollision {
                    target: lam.clone(),
                    other: nu.clone(),
                    value: format_scalar(&mu),
                });
            }
            let c = rhs / gap;
            if !c.is_zero() {
                coeffs.insert(nu.clone(), c);
            }
        }
    }
    if let Some(bad) = coeffs.keys().find(|k| !lam.contains(k)) {
        return Err(Error::Invariant(format!(
            "φ{lam} has a component along P{bad}, which is not contained in {lam}"
        )));
    }
    let poly = from_macdonald_basis(&coeffs, n, &params.q, &params.t)?;
    Ok(BigQJacobi {
        lambda: lam.clone(),
        n,
        params: params.clone(),
        eigenvalue: mu,
        macdonald: coeffs,
        poly,
    })
}

/// `(t^N; q, t)_λ`.
pub fn tn_pochhammer(lam: &Partition, n: usize, q: &Scalar, t: &Scalar) -> Scalar {
    gen_pochhammer(&powi(t, n as i64), lam, q, t)
}

/// `π_N(λ, ν)` from `φ_{λ|N} = Σ_ν [(t^N)_λ/(t^N)_ν] π_N(λ, ν) P_{ν|N}`.
pub fn pi_coeffs(
    lam: &Partition,
    params: &Params,
    n: usize,
) -> Result<BTreeMap<Partition, Scalar>> {
    let phi = big_qjacobi(lam, params, n)?;
    let (q, t) = (&params.q, &params.t);
    let top = tn_pochhammer(lam, n, q, t);
    Ok(phi
        .macdonald
        .iter()
        .map(|(nu, c)| (nu.clone(), c * tn_pochhammer(nu, n, q, t) / &top))
        .collect())
}

/// Smallest level at which `λ` makes sense.
pub fn base_level(lam: &Partition) -> usize {
    lam.len().max(1)
}

/// `Φ_λ = Σ_ν π(λ, ν) P_ν` in the Macdonald basis, certified by recomputing `π`
/// one level higher.
pub fn phi_symfunc(lam: &Partition, base: &Params) -> Result<SymFuncExpansion> {
    let n = base_level(lam);
    let lo = pi_coeffs(lam, &base.shift_level(n), n)?;
    let hi = pi_coeffs(lam, &base.shift_level(n + 1), n + 1)?;
    if lo != hi {
        return Err(Error::Stability {
            lambda: lam.clone(),
            level: n,
        });
    }
    Ok(SymFuncExpansion {
        basis: Basis::Macdonald,
        terms: lo,
    })
}

/// `Φ_λ` in the monomial basis of `Sym`, using Macdonald polynomials in
/// `|λ|` variables (where they are stable).
pub fn phi_symfunc_monomial(lam: &Partition, base: &Params) -> Result<SymFuncExpansion> {
    let phi = phi_symfunc(lam, base)?;
    let n = lam.size().max(1);
    let poly = from_macdonald_basis(&phi.terms, n, &base.q, &base.t)?;
    Ok(poly.to_expansion())
}

/// `h_λ(q, t; α, β, γ, δ)` as a product of box factors, with `𝔰 = γδq/(αβ)`.
pub fn h_norm(lam: &Partition, base: &Params) -> Scalar {
    let (q, t) = (&base.q, &base.t);
    let ab = base.ab();
    let s = base.s2() * q / &ab;
    let stats = lam.stats();
    let mut h = c_minus(q, lam, q, t) / c_minus(t, lam, q, t);
    h *= c_plus(&(&s * q / t), lam, q, t) / c_plus(&s, lam, q, t);
    h *= powi(&(&s * powi(q, 3) / (&ab * t)), stats.size as i64);
    h *= powi(q, 2 * stats.conjugate.n() as i64) / powi(t, 2 * stats.n_lambda as i64);
    h /= gen_pochhammer(&(&s * q), &stats.double_union, q, t);
    h *= gen_pochhammer_conjpair(&(q / &base.a), &base.cd, lam, q, t);
    h *= gen_pochhammer_conjpair(&(q / &base.b), &base.cd, lam, q, t);
    h
}

/// An exact value or a rational enclosure of an algebraic one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Bound {
    Exact(String),
    Bracket { lo: String, hi: String },
}

#[derive(Clone, Debug)]
pub struct QuadraticFormBounds {
    /// `(1+q)/√q`: upper bound of `c''/c'`.
    pub upper: (Scalar, Scalar),
    /// `max((1+q)/√q, (1+t²)/t)`: `c''/c'` is at least minus this.
    pub lower: (Scalar, Scalar),
}

impl QuadraticFormBounds {
    pub fn is_exact(&self) -> bool {
        self.upper.0 == self.upper.1 && self.lower.0 == self.lower.1
    }

    pub fn describe(&self) -> (Bound, Bound) {
        let show = |(lo, hi): &(Scalar, Scalar)| {
            if lo == hi {
                Bound::Exact(format_scalar(lo))
            } else {
                Bound::Bracket {
                    lo: format_scalar(lo),
                    hi: format_scalar(hi),
                }
            }
        };
        (show(&self.upper), show(&self.lower))
    }
}

/// Bounds on `c''/c'` for a quadratic part `c' p₂ + c'' e₂` with a local minimum
/// at the origin. Exact when `q` is a rational square, otherwise enclosed in an
/// interval of width about `1e-12`.
pub fn quadratic_form_bounds(q: &Scalar, t: &Scalar) -> QuadraticFormBounds {
    let one = Scalar::one();
    let num = &one + q;
    let upper = match exact_sqrt(q) {
        Some(r) => (&num / &r, &num / &r),
        None => {
            let (lo, hi) = sqrt_bracket(q, 1_000_000_000_000);
            let lo = if lo.is_positive() {
                lo
            } else {
                Scalar::new(1.into(), 1_000_000_000_000u64.into())
            };
            (&num / hi, &num / lo)
        }
    };
    let tt = (&one + t * t) / t;
    let lower = (
        if upper.0 > tt {
            upper.0.clone()
        } else {
            tt.clone()
        },
        if upper.1 > tt { upper.1.clone() } else { tt },
    );
    QuadraticFormBounds { upper, lower }
}

/// `C_N(q,t) = (q t^{N−1}/(a|b|))(1−q)(1−t^N)/(1−t)`.
pub fn ct_scale(params: &Params, n: usize) -> Scalar {
    let (q, t) = (&params.q, &params.t);
    let one = Scalar::one();
    q * powi(t, n as i64 - 1) / (&params.a * params.b.abs())
        * (&one - q)
        * (&one - powi(t, n as i64))
        / (&one - t)
}

/// Closed forms for the constant terms of `D_N p₂` and `D_N e₂`.
pub fn ct_closed_forms(params: &Params, n: usize) -> (Scalar, Scalar) {
    let (q, t) = (&params.q, &params.t);
    let c = ct_scale(params, n);
    let one = Scalar::one();
    let tn1 = powi(t, 1 - n as i64);
    let p2 = &c * (&one + q) * (&tn1 / q - &one);
    let e2 = -(&c * (&tn1 - &one));
    (p2, e2)
}

/// The constant term of `D x²`, `−(1−q)(1−q²)/(ab)`.
pub fn d1_x2_at_zero(params: &Params) -> Scalar {
    let (q, one) = (&params.q, Scalar::one());
    -(&one - q) * (&one - q * q) / params.ab()
}

/// `(1−q)²(1+q)/(a|b|)`.
pub fn univariate_p2_constant(params: &Params) -> Scalar {
    let (q, one) = (&params.q, Scalar::one());
    (&one - q) * (&one - q) * (&one + q) / (&params.a * params.b.abs())
}

/// Convenience for tests and examples: `int(n)` as a univariate monomial `x^n`.
pub fn x_pow(n: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); n + 1];
    v[n] = int(1);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qalgebra::{rat, ConjugatePair};

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn params() -> Params {
        Params::new(
            rat(1, 3),
            rat(1, 2),
            rat(3, 2),
            rat(-2, 1),
            ConjugatePair::new(rat(1, 2), rat(3, 4)).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn sigma_boundary_zeros_and_positivity() {
        let pr = params();
        let q = &pr.q;
        assert!(sigma(&pr, 1, &(pr.a.recip() * q), Sign::Minus)
            .unwrap()
            .is_zero());
        assert!(sigma(&pr, 1, &(pr.b.recip() * q), Sign::Minus)
            .unwrap()
            .is_zero());
        for k in 1..8 {
            for x in [pr.a.recip() * powi(q, k), pr.b.recip() * powi(q, k)] {
                for n in 1..4 {
                    assert!(sigma(&pr, n, &x, Sign::Plus).unwrap().is_positive());
                    if k > 1 {
                        assert!(sigma(&pr, n, &x, Sign::Minus).unwrap().is_positive());
                    }
                }
            }
        }
        assert!(sigma(&pr, 1, &Scalar::zero(), Sign::Plus).is_err());
    }

    #[test]
    fn univariate_operator_examples() {
        let pr = params();
        assert_eq!(apply_d1(&[int(1)], &pr), vec![Scalar::zero()]);
        assert_eq!(apply_d1(&x_pow(2), &pr)[0], d1_x2_at_zero(&pr));
        assert_eq!(d1_x2_at_zero(&pr), univariate_p2_constant(&pr));
        assert!(d1_x2_at_zero(&pr).is_positive());
        // the closed form agrees with the pointwise definition
        for n in 0..7 {
            let img = apply_d1(&x_pow(n), &pr);
            for x in [rat(1, 5), rat(-2, 7), rat(3, 1)] {
                let direct = apply_d1_at(&x_pow(n), &pr, &x).unwrap();
                let poly = img.iter().rev().fold(Scalar::zero(), |acc, c| acc * &x + c);
                assert_eq!(direct, poly, "n = {n}");
            }
        }
    }

    #[test]
    fn dn_at_one_variable_agrees_with_d1() {
        let pr = params();
        for n in 0..=6u32 {
            let f = SymPoly::power_sum(1, n);
            let f = if n == 0 { SymPoly::one(1) } else { f };
            let img = apply_dn(&f, &pr, 1).unwrap();
            let uni = apply_d1(&x_pow(n as usize), &pr);
            for (k, c) in uni.iter().enumerate() {
                let key = Partition::new(vec![k as u32]).unwrap();
                assert_eq!(img.coeff(&key), *c);
            }
        }
    }

    #[test]
    fn constant_term_closed_forms() {
        let pr = params();
        for n in 1..=4 {
            let (g1, g2) = ct_closed_forms(&pr, n);
            let p2 = apply_dn(&SymPoly::power_sum(n, 2), &pr, n).unwrap();
            assert_eq!(p2.constant_term(), g1);
            assert!(g1.is_positive());
            if n >= 2 {
                let e2 = apply_dn(&SymPoly::elementary(n, 2), &pr, n).unwrap();
                assert_eq!(e2.constant_term(), g2);
                assert!(g2.is_negative());
            }
        }
        assert_eq!(ct_closed_forms(&pr, 1).0, univariate_p2_constant(&pr));
    }

    #[test]
    fn operator_diagonal_is_the_eigenvalue() {
        let pr = params();
        for n in 1..=3 {
            let m = dn_macdonald_matrix(&pr, n, 3).unwrap();
            for (nu, d) in m.diagonal() {
                assert_eq!(d, mu_n(&nu, &pr, n).unwrap(), "N={n} ν={nu}");
            }
        }
    }

    #[test]
    fn eigenvalue_signs_and_level_independence() {
        let base = params();
        assert!(mu_n(&Partition::empty(), &base, 2).unwrap().is_zero());
        assert!(mu_infinity(&Partition::empty(), &base).is_zero());
        for lam in partitions_up_to(4, 4).into_iter().skip(1) {
            for n in lam.len().max(1)..=5 {
                assert!(mu_n(&lam, &base, n).unwrap().is_negative());
                assert_eq!(
                    mu_n(&lam, &base.shift_level(n), n).unwrap(),
                    mu_infinity(&lam, &base)
                );
            }
        }
        let one = int(1);
        let k = base.s2() * &base.q / base.ab();
        let expect = -(&k * (&base.q - &one) + (base.q.recip() - &one));
        assert_eq!(mu_infinity(&p(&[1]), &base), expect);
    }

    #[test]
    fn eigenrelation_small() {
        let pr = params();
        for n in 1..=2 {
            for lam in partitions_up_to(3, n) {
                let phi = big_qjacobi(&lam, &pr, n).unwrap();
                let lhs = apply_dn(&phi.poly, &pr, n).unwrap();
                assert_eq!(lhs, phi.poly.scale(&phi.eigenvalue), "N={n} λ={lam}");
                assert_eq!(
                    phi.poly.homogeneous_part(lam.size()),
                    macdonald_poly(&lam, n, &pr.q, &pr.t).unwrap()
                );
            }
        }
        assert_eq!(
            big_qjacobi(&Partition::empty(), &pr, 2).unwrap().poly,
            SymPoly::one(2)
        );
    }

    #[test]
    fn univariate_polynomials_match_a_direct_triangular_solve() {
        let pr = params();
        for deg in 0..=5usize {
            // oracle: solve D φ = μ φ in the basis x^k using the closed form only
            let mu = {
                let img = apply_d1(&x_pow(deg), &pr);
                img.get(deg).cloned().unwrap_or_else(Scalar::zero)
            };
            let mut c = vec![Scalar::zero(); deg + 1];
            c[deg] = int(1);
            for k in (0..deg).rev() {
                let mut rhs = Scalar::zero();
                for j in k + 1..=deg {
                    rhs += apply_d1(&x_pow(j), &pr)
                        .get(k)
                        .cloned()
                        .unwrap_or_else(Scalar::zero)
                        * &c[j];
                }
                let diag = apply_d1(&x_pow(k), &pr)
                    .get(k)
                    .cloned()
                    .unwrap_or_else(Scalar::zero);
                c[k] = rhs / (&mu - diag);
            }
            let lam = Partition::new(vec![deg as u32]).unwrap();
            let phi = big_qjacobi(&lam, &pr, 1).unwrap();
            for (k, ck) in c.iter().enumerate() {
                assert_eq!(
                    phi.poly.coeff(&Partition::new(vec![k as u32]).unwrap()),
                    *ck
                );
            }
        }
    }

    #[test]
    fn pi_is_normalized_supported_and_stable() {
        let base = params();
        for lam in [p(&[1]), p(&[2]), p(&[1, 1]), p(&[2, 1])] {
            for n in base_level(&lam)..=2 {
                let lo = pi_coeffs(&lam, &base.shift_level(n), n).unwrap();
                assert_eq!(lo[&lam], int(1));
                assert!(lo.keys().all(|nu| lam.contains(nu)));
                let hi = pi_coeffs(&lam, &base.shift_level(n + 1), n + 1).unwrap();
                assert_eq!(lo, hi, "λ={lam} N={n}");
            }
        }
        let phi = phi_symfunc(&p(&[2, 1]), &base).unwrap();
        assert_eq!(phi.terms[&p(&[2, 1])], int(1));
        assert_eq!(
            phi_symfunc(&Partition::empty(), &base).unwrap().terms.len(),
            1
        );
    }

    #[test]
    fn norms() {
        let base = params();
        assert_eq!(h_norm(&Partition::empty(), &base), int(1));
        assert!(h_norm(&p(&[1]), &base).is_positive());
    }

    /// At `t = q` the ratios of `C^±` collapse to 1.
    #[test]
    fn norm_at_t_equal_q() {
        for (qv, s2) in [(rat(1, 3), rat(3, 4)), (rat(2, 5), rat(2, 1))] {
            let base = Params::new(
                qv.clone(),
                qv.clone(),
                rat(3, 2),
                rat(-2, 1),
                ConjugatePair::new(rat(1, 2), s2).unwrap(),
            )
            .unwrap();
            let q = &base.q;
            let ab = base.ab();
            let s = base.s2() * q / &ab;
            for lam in partitions_up_to(4, 4) {
                let st = lam.stats();
                let simplified = powi(&(&s * q * q / &ab), st.size as i64)
                    * powi(q, 2 * st.conjugate.n() as i64 - 2 * st.n_lambda as i64)
                    / gen_pochhammer(&(&s * q), &st.double_union, q, q)
                    * gen_pochhammer_conjpair(&(q / &base.a), &base.cd, &lam, q, q)
                    * gen_pochhammer_conjpair(&(q / &base.b), &base.cd, &lam, q, q);
                assert_eq!(h_norm(&lam, &base), simplified, "λ={lam}");
            }
        }
    }

    #[test]
    fn quadratic_form_bound_examples() {
        let b = quadratic_form_bounds(&rat(1, 4), &rat(1, 2));
        assert!(b.is_exact());
        assert_eq!(b.upper.0, rat(5, 2));
        assert_eq!(b.lower.0, rat(5, 2));
        let b = quadratic_form_bounds(&rat(1, 2), &rat(1, 10));
        assert!(!b.is_exact());
        assert!(b.upper.0 > int(2));
        assert_eq!(b.lower.0, rat(101, 10));
    }
}
