//! Generalized `(q,t)`-Pochhammer symbols and the box products `C^±_λ`.

use num_traits::One;

use super::params::ConjugatePair;
use super::partition::Partition;
use super::scalar::{powi, Scalar};

/// `t^{1-i} q^{j-1}` for a 1-based box `(i, j)`.
fn box_weight(i: usize, j: usize, q: &Scalar, t: &Scalar) -> Scalar {
    powi(t, 1 - i as i64) * powi(q, j as i64 - 1)
}

/// `(z; q, t)_λ = ∏_{(i,j)∈λ} (1 − z t^{1−i} q^{j−1})`.
pub fn gen_pochhammer(z: &Scalar, lam: &Partition, q: &Scalar, t: &Scalar) -> Scalar {
    lam.boxes().fold(Scalar::one(), |acc, (i, j)| {
        acc * (Scalar::one() - z * box_weight(i, j, q, t))
    })
}

/// `(uγ; q,t)_λ (uδ; q,t)_λ` for the conjugate pair `(γ, δ)`, multiplied box by box
/// as `1 − s1·u·v + s2·u²·v²` so that everything stays real.
pub fn gen_pochhammer_conjpair(
    u: &Scalar,
    pair: &ConjugatePair,
    lam: &Partition,
    q: &Scalar,
    t: &Scalar,
) -> Scalar {
    lam.boxes().fold(Scalar::one(), |acc, (i, j)| {
        let uv = u * box_weight(i, j, q, t);
        acc * (Scalar::one() - pair.s1() * &uv + pair.s2() * &uv * &uv)
    })
}

/// `C⁺_λ(x; q, t) = ∏ (1 − q^{λ_i+j−1} t^{2−λ'_j−i} x)`.
pub fn c_plus(x: &Scalar, lam: &Partition, q: &Scalar, t: &Scalar) -> Scalar {
    let conj = lam.conjugate();
    lam.boxes().fold(Scalar::one(), |acc, (i, j)| {
        let qe = lam.part(i - 1) as i64 + j as i64 - 1;
        let te = 2 - conj.part(j - 1) as i64 - i as i64;
        acc * (Scalar::one() - powi(q, qe) * powi(t, te) * x)
    })
}

/// `C⁻_λ(x; q, t) = ∏ (1 − q^{λ_i−j} t^{λ'_j−i} x)`.
pub fn c_minus(x: &Scalar, lam: &Partition, q: &Scalar, t: &Scalar) -> Scalar {
    let conj = lam.conjugate();
    lam.boxes().fold(Scalar::one(), |acc, (i, j)| {
        let qe = lam.part(i - 1) as i64 - j as i64;
        let te = conj.part(j - 1) as i64 - i as i64;
        acc * (Scalar::one() - powi(q, qe) * powi(t, te) * x)
    })
}
