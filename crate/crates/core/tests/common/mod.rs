//! Test-only oracles. Nothing here calls into the library's operator,
//! Macdonald or measure code; they are recomputed from their definitions.

#![allow(dead_code)]

use num_traits::{One, Zero};
use qjacobi::qalgebra::{int, rat, ConjugatePair, Params, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn base() -> Params {
    Params::new(
        rat(1, 3),
        rat(1, 2),
        rat(3, 2),
        rat(-2, 1),
        ConjugatePair::new(rat(1, 2), rat(3, 4)).unwrap(),
    )
    .unwrap()
}

fn pow(x: &Scalar, e: i64) -> Scalar {
    let mut out = Scalar::one();
    let b = if e < 0 { x.recip() } else { x.clone() };
    for _ in 0..e.unsigned_abs() {
        out *= &b;
    }
    out
}

fn vandermonde(xs: &[Scalar]) -> Scalar {
    let mut v = Scalar::one();
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            v *= &xs[i] - &xs[j];
        }
    }
    v
}

/// `D_N f(X)` straight from the definition, with `σ^±` in factored form and
/// `S_t V_N / V_N` as a quotient of full Vandermonde products.
pub fn dn_oracle(f: &dyn Fn(&[Scalar]) -> Scalar, p: &Params, xs: &[Scalar]) -> Scalar {
    let n = xs.len();
    let (q, t) = (&p.q, &p.t);
    let ab = &p.a * &p.b;
    let tn = pow(t, n as i64 - 1);
    let (s1, s2) = (p.s1(), p.s2());
    let v = vandermonde(xs);
    let fx = f(xs);
    let mut total = Scalar::zero();
    for i in 0..n {
        let u = xs[i].recip();
        // (c − u)(d − u) = cd − (c+d)u + u²
        let sp = -(q * &tn / &ab) * (s2 - s1 * &u + &u * &u);
        let sm = -(q * q * &tn / &ab) * ((&p.a / q - &u) * (&p.b / q - &u));
        for (sigma, tshift, qshift) in [(sp, t.clone(), q.clone()), (sm, t.recip(), q.recip())] {
            let mut xt = xs.to_vec();
            xt[i] = &xt[i] * &tshift;
            let ratio = vandermonde(&xt) / &v;
            let mut xq = xs.to_vec();
            xq[i] = &xq[i] * &qshift;
            total += ratio * sigma * (f(&xq) - &fx);
        }
    }
    total
}

/// `(1+q)(1−t)/(1−qt)` recovered by diagonalizing the first Macdonald operator
/// on `span{m₂, m₁₁}` in two explicit variables.
pub fn macdonald_p2_m11_oracle(q: &Scalar, t: &Scalar) -> Scalar {
    let m2 = |x: &[Scalar]| &x[0] * &x[0] + &x[1] * &x[1];
    let m11 = |x: &[Scalar]| &x[0] * &x[1];
    let op = |f: &dyn Fn(&[Scalar]) -> Scalar, x: &[Scalar]| {
        let mut s = Scalar::zero();
        for i in 0..2 {
            let j = 1 - i;
            let coeff = (t * &x[i] - &x[j]) / (&x[i] - &x[j]);
            let mut y = x.to_vec();
            y[i] = &y[i] * q;
            s += coeff * f(&y);
        }
        s
    };
    // D m = α m₂ + β m₁₁, fitted at two points
    let pts = [[int(1), int(2)], [int(3), int(-1)]];
    let fit = |f: &dyn Fn(&[Scalar]) -> Scalar| {
        let (a11, a12, r1) = (m2(&pts[0]), m11(&pts[0]), op(f, &pts[0]));
        let (a21, a22, r2) = (m2(&pts[1]), m11(&pts[1]), op(f, &pts[1]));
        let det = &a11 * &a22 - &a12 * &a21;
        (
            (&r1 * &a22 - &a12 * &r2) / &det,
            (&a11 * &r2 - &r1 * &a21) / &det,
        )
    };
    let (alpha, beta) = fit(&m2);
    let (zero, gamma) = fit(&m11);
    assert!(zero.is_zero(), "m₁₁ is an eigenvector");
    beta / (alpha - gamma)
}

/// `C_N(q,t)·(1+q)(t^{1−N}q⁻¹ − 1)` and `−C_N(q,t)(t^{1−N} − 1)`.
pub fn ct_oracle(p: &Params, n: usize) -> (Scalar, Scalar) {
    let (q, t) = (&p.q, &p.t);
    let one = Scalar::one();
    let b_abs = -p.b.clone();
    let c = q * pow(t, n as i64 - 1) / (&p.a * &b_abs) * (&one - q) * (&one - pow(t, n as i64))
        / (&one - t);
    let tn = pow(t, 1 - n as i64);
    (&c * (&one + q) * (&tn / q - &one), -(&c * (&tn - &one)))
}

fn random_unit(rng: &mut ChaCha8Rng) -> Scalar {
    let d: i64 = rng.random_range(3..=13);
    rat(rng.random_range(1..d), d)
}

/// Random admissible `(q, t; a, b; c, d)` with small denominators.
pub fn random_params(rng: &mut ChaCha8Rng) -> Params {
    loop {
        let q = random_unit(rng);
        let t = random_unit(rng);
        let a = rat(rng.random_range(1..=9), rng.random_range(1..=5));
        let b = rat(-rng.random_range(1..=9), rng.random_range(1..=5));
        let s1 = rat(rng.random_range(-6..=6), rng.random_range(1..=4));
        let s2 = rat(rng.random_range(1..=12), rng.random_range(1..=4));
        if let Ok(cd) = ConjugatePair::new(s1, s2) {
            return Params::new(q, t, a, b, cd).unwrap();
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Distinct random nonzero rationals.
pub fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Scalar> {
    let mut out: Vec<Scalar> = Vec::new();
    while out.len() < n {
        let x = rat(rng.random_range(-40..=40), rng.random_range(1..=7));
        if !x.is_zero() && !out.contains(&x) {
            out.push(x);
        }
    }
    out
}
