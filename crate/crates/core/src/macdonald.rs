//! `N`-variate Macdonald polynomials `P_{λ|N}(x; q, t)`.
//!
//! Built as eigenfunctions of the first Macdonald operator
//! `E = Σ_i ∏_{j≠i} (t x_i − x_j)/(x_i − x_j) · S_{q,i}`, which is triangular on
//! monomials with diagonal `Σ_i q^{λ_i} t^{N−i}`. Each degree is solved once and
//! cached.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use num_traits::{One, Zero};

use crate::cache::Memo;
use crate::interp::interpolator;
use crate::qalgebra::{format_scalar, partitions_of, partitions_up_to, powi, Partition, Scalar};
use crate::symfunc::SymPoly;
use crate::{Error, Result};

/// `Σ_i q^{λ_i} t^{N−i}`.
pub fn macdonald_eigenvalue(lam: &Partition, n: usize, q: &Scalar, t: &Scalar) -> Scalar {
    (0..n).fold(Scalar::zero(), |acc, i| {
        acc + powi(q, lam.part(i) as i64) * powi(t, (n - 1 - i) as i64)
    })
}

/// `E f(X)` at a point with distinct coordinates.
pub fn macdonald_operator_at(f: &SymPoly, q: &Scalar, t: &Scalar, xs: &[Scalar]) -> Result<Scalar> {
    let mut total = Scalar::zero();
    let mut shifted = xs.to_vec();
    for i in 0..xs.len() {
        let mut ratio = Scalar::one();
        for j in 0..xs.len() {
            if j != i {
                let den = &xs[i] - &xs[j];
                if den.is_zero() {
                    return Err(Error::DivisionByZero("coincident coordinates".into()));
                }
                ratio *= (t * &xs[i] - &xs[j]) / den;
            }
        }
        shifted[i] = q * &xs[i];
        total += ratio * f.evaluate(&shifted);
        shifted[i] = xs[i].clone();
    }
    Ok(total)
}

/// `E f` re-expanded in the monomial basis.
pub fn macdonald_operator_apply(f: &SymPoly, q: &Scalar, t: &Scalar) -> Result<SymPoly> {
    let n = f.n();
    let degree = f.degree().unwrap_or(0);
    let interp = interpolator(n, &partitions_up_to(degree, n))?;
    interp.fit(|xs| macdonald_operator_at(f, q, t, xs))
}

/// All `P_{ν|N}` of one degree, with the operator data that certifies them.
#[derive(Clone, Debug)]
pub struct MacdonaldLevel {
    pub n: usize,
    pub degree: usize,
    /// Lexicographically increasing.
    pub partitions: Vec<Partition>,
    pub eigenvalues: BTreeMap<Partition, Scalar>,
    pub polys: BTreeMap<Partition, SymPoly>,
}

type LevelKey = (usize, usize, Scalar, Scalar);

fn levels() -> &'static Memo<LevelKey, Arc<MacdonaldLevel>> {
    static MEMO: OnceLock<Memo<LevelKey, Arc<MacdonaldLevel>>> = OnceLock::new();
    MEMO.get_or_init(Memo::new)
}

/// Cached Macdonald polynomials of degree `d` in `n` variables.
pub fn macdonald_level(d: usize, n: usize, q: &Scalar, t: &Scalar) -> Result<Arc<MacdonaldLevel>> {
    let key = (n, d, q.clone(), t.clone());
    levels().get_or_try(&key, || build_level(d, n, q, t).map(Arc::new))
}

fn build_level(d: usize, n: usize, q: &Scalar, t: &Scalar) -> Result<MacdonaldLevel> {
    let mut partitions = partitions_of(d, n);
    partitions.reverse();
    let interp = interpolator(n, &partitions)?;

    // column ν of the operator matrix: coefficients of E m_ν
    let mut columns: BTreeMap<Partition, SymPoly> = BTreeMap::new();
    for nu in &partitions {
        let m = SymPoly::monomial(n, nu.clone());
        let col = interp.fit(|xs| macdonald_operator_at(&m, q, t, xs))?;
        for (kappa, c) in col.terms() {
            if !nu.dominates(kappa) {
                return Err(Error::Invariant(format!(
                    "E m{nu} has a term m{kappa} outside the dominance order"
                )));
            }
            if kappa == nu && c != &macdonald_eigenvalue(nu, n, q, t) {
                return Err(Error::Invariant(format!(
                    "E m{nu} has diagonal entry {} instead of the expected eigenvalue",
                    format_scalar(c)
                )));
            }
        }
        columns.insert(nu.clone(), col);
    }
    let eigenvalues: BTreeMap<Partition, Scalar> = partitions
        .iter()
        .map(|p| (p.clone(), macdonald_eigenvalue(p, n, q, t)))
        .collect();

    let mut polys = BTreeMap::new();
    for (idx, lam) in partitions.iter().enumerate() {
        let e_lam = &eigenvalues[lam];
        let mut coeffs: BTreeMap<Partition, Scalar> = BTreeMap::new();
        coeffs.insert(lam.clone(), Scalar::one());
        for kappa in partitions[..idx].iter().rev() {
            let rhs = partitions[..=idx]
                .iter()
                .filter(|rho| *rho > kappa)
                .filter_map(|rho| coeffs.get(rho).map(|c| columns[rho].coeff(kappa) * c))
                .fold(Scalar::zero(), |acc, x| acc + x);
            let gap = e_lam - &eigenvalues[kappa];
            if gap.is_zero() {
                if lam.dominates(kappa) {
                    return Err(Error::EigenvalueCollision {
                        target: lam.clone(),
                        other: kappa.clone(),
                        value: format_scalar(e_lam),
                    });
                }
                if !rhs.is_zero() {
                    return Err(Error::Invariant(format!(
                        "inconsistent triangular system at {kappa}"
                    )));
                }
                continue;
            }
            let c = rhs / gap;
            if !c.is_zero() {
                coeffs.insert(kappa.clone(), c);
            }
        }
        if let Some(bad) = coeffs.keys().find(|k| !lam.dominates(k)) {
            return Err(Error::Invariant(format!(
                "P{lam} has a term m{bad} outside the dominance order"
            )));
        }
        polys.insert(lam.clone(), SymPoly::from_terms(n, coeffs)?);
    }
    Ok(MacdonaldLevel {
        n,
        degree: d,
        partitions,
        eigenvalues,
        polys,
    })
}

/// `P_{λ|N}(x; q, t)`, monic in `m_λ`.
pub fn macdonald_poly(lam: &Partition, n: usize, q: &Scalar, t: &Scalar) -> Result<SymPoly> {
    if lam.len() > n {
        return Err(Error::InvalidPartition(format!(
            "{lam} has more than {n} parts"
        )));
    }
    let level = macdonald_level(lam.size(), n, q, t)?;
    Ok(level.polys[lam].clone())
}

/// Whether `P_{λ|N}` and `P_{λ|N+1}` have identical monomial coefficients.
pub fn macdonald_stability_check(
    lam: &Partition,
    n: usize,
    q: &Scalar,
    t: &Scalar,
) -> Result<bool> {
    if n < lam.size() {
        return Err(Error::Invariant(format!(
            "stability is only asserted for N ≥ |λ| = {}",
            lam.size()
        )));
    }
    let a = macdonald_poly(lam, n, q, t)?;
    let b = macdonald_poly(lam, n + 1, q, t)?;
    Ok(a.terms() == b.terms())
}

/// Coefficients of `f` in the basis `{P_{ν|N}}`.
pub fn to_macdonald_basis(
    f: &SymPoly,
    q: &Scalar,
    t: &Scalar,
) -> Result<BTreeMap<Partition, Scalar>> {
    let n = f.n();
    let mut rest = f.clone();
    let mut out = BTreeMap::new();
    while let Some((lead, c)) = rest
        .terms()
        .iter()
        .max_by(|a, b| crate::qalgebra::graded_cmp(a.0, b.0))
        .map(|(k, v)| (k.clone(), v.clone()))
    {
        let p = macdonald_poly(&lead, n, q, t)?;
        rest = rest.sub(&p.scale(&c))?;
        out.insert(lead, c);
    }
    Ok(out)
}

/// `Σ c_ν P_{ν|N}` in the monomial basis.
pub fn from_macdonald_basis(
    coeffs: &BTreeMap<Partition, Scalar>,
    n: usize,
    q: &Scalar,
    t: &Scalar,
) -> Result<SymPoly> {
    let mut out = SymPoly::zero(n);
    for (nu, c) in coeffs {
        out = out.add(&macdonald_poly(nu, n, q, t)?.scale(c))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qalgebra::{int, rat};
    use std::collections::HashMap;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    /// Bivariate polynomial `Σ c x^i y^j` for an independent two-variable computation.
    type Bi = HashMap<(u32, u32), Scalar>;

    fn bi_add(f: &mut Bi, k: (u32, u32), c: Scalar) {
        let e = f.entry(k).or_insert_with(Scalar::zero);
        *e += c;
    }

    /// `[(t x − y) f(qx, y) − (t y − x) f(x, qy)] / (x − y)`, by exact long division.
    fn bi_operator(f: &Bi, q: &Scalar, t: &Scalar) -> Bi {
        let mut num = Bi::new();
        for (&(i, j), c) in f {
            let fx = c * powi(q, i as i64);
            let fy = c * powi(q, j as i64);
            bi_add(&mut num, (i + 1, j), t * &fx);
            bi_add(&mut num, (i, j + 1), -fx);
            bi_add(&mut num, (i, j + 1), -(t * &fy));
            bi_add(&mut num, (i + 1, j), fy);
        }
        num.retain(|_, v| !v.is_zero());
        // divide by (x − y): repeatedly cancel the term with the largest x-power
        let mut quot = Bi::new();
        while let Some(((i, j), c)) = num
            .iter()
            .filter(|(k, _)| k.0 > 0)
            .max_by_key(|(k, _)| (k.0, k.1))
            .map(|(k, v)| (*k, v.clone()))
        {
            bi_add(&mut quot, (i - 1, j), c.clone());
            bi_add(&mut num, (i, j), -c.clone());
            bi_add(&mut num, (i - 1, j + 1), c);
            num.retain(|_, v| !v.is_zero());
        }
        assert!(num.is_empty(), "not divisible by x − y");
        quot.retain(|_, v| !v.is_zero());
        quot
    }

    fn bi_monomial(lam: &Partition) -> Bi {
        let (a, b) = (lam.part(0), lam.part(1));
        let mut f = Bi::new();
        bi_add(&mut f, (a, b), int(1));
        if a != b {
            bi_add(&mut f, (b, a), int(1));
        }
        f
    }

    #[test]
    fn p2_in_two_variables_matches_direct_eigen_solve() {
        for (q, t) in [
            (rat(1, 3), rat(1, 2)),
            (rat(2, 7), rat(5, 9)),
            (rat(3, 4), rat(1, 5)),
        ] {
            // oracle: E on m(2) and m(1,1) by explicit division, then a 2x2 triangular solve
            let e2 = bi_operator(&bi_monomial(&p(&[2])), &q, &t);
            let e11 = bi_operator(&bi_monomial(&p(&[1, 1])), &q, &t);
            let a_11_2 = e2.get(&(1, 1)).cloned().unwrap_or_else(Scalar::zero);
            let eig2 = e2[&(2, 0)].clone();
            let eig11 = e11[&(1, 1)].clone();
            let oracle = a_11_2 / (eig2 - eig11);
            let expected = (int(1) + &q) * (int(1) - &t) / (int(1) - &q * &t);
            assert_eq!(oracle, expected);
            let p2 = macdonald_poly(&p(&[2]), 2, &q, &t).unwrap();
            assert_eq!(p2.coeff(&p(&[2])), int(1));
            assert_eq!(p2.coeff(&p(&[1, 1])), expected);
        }
    }

    #[test]
    fn operator_matches_bivariate_oracle() {
        let (q, t) = (rat(2, 5), rat(1, 3));
        for lam in partitions_up_to(3, 2) {
            let ours =
                macdonald_operator_apply(&SymPoly::monomial(2, lam.clone()), &q, &t).unwrap();
            let oracle = bi_operator(&bi_monomial(&lam), &q, &t);
            for (&(i, j), c) in &oracle {
                if i >= j {
                    assert_eq!(
                        &ours.coeff(&Partition::new(vec![i, j]).unwrap()),
                        c,
                        "{lam}"
                    );
                }
            }
            assert_eq!(ours.coeff(&lam), macdonald_eigenvalue(&lam, 2, &q, &t));
        }
    }

    #[test]
    fn constants_and_small_cases() {
        let (q, t) = (rat(1, 3), rat(1, 2));
        for n in 1..4 {
            let e1 = macdonald_operator_apply(&SymPoly::one(n), &q, &t).unwrap();
            let expect = (int(1) - powi(&t, n as i64)) / (int(1) - &t);
            assert_eq!(e1, SymPoly::constant(n, expect));
            assert_eq!(
                macdonald_poly(&p(&[1]), n, &q, &t).unwrap(),
                SymPoly::power_sum(n, 1)
            );
        }
        assert_eq!(
            macdonald_poly(&p(&[1, 1]), 2, &q, &t).unwrap(),
            SymPoly::elementary(2, 2)
        );
    }

    #[test]
    fn eigenvalues_are_distinct_in_each_degree() {
        let (q, t) = (rat(3, 11), rat(4, 13));
        for n in 1..=4 {
            for d in 0..=4 {
                let parts = partitions_of(d, n);
                for (i, a) in parts.iter().enumerate() {
                    for b in &parts[i + 1..] {
                        assert_ne!(
                            macdonald_eigenvalue(a, n, &q, &t),
                            macdonald_eigenvalue(b, n, &q, &t)
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn monic_triangular_homogeneous_and_stable() {
        let (q, t) = (rat(1, 4), rat(2, 5));
        for n in 1..=4 {
            for lam in partitions_up_to(4, n) {
                let poly = macdonald_poly(&lam, n, &q, &t).unwrap();
                assert_eq!(poly.coeff(&lam), int(1));
                assert!(poly
                    .terms()
                    .keys()
                    .all(|k| lam.dominates(k) && k.size() == lam.size()));
            }
        }
        for lam in [p(&[1]), p(&[2]), p(&[2, 1])] {
            assert!(macdonald_stability_check(&lam, lam.size().max(2), &q, &t).unwrap());
        }
        assert!(macdonald_stability_check(&p(&[2, 1]), 3, &q, &t).unwrap());
    }

    #[test]
    fn basis_change_round_trip() {
        let (q, t) = (rat(1, 3), rat(3, 7));
        let f = SymPoly::from_terms(
            3,
            [
                (p(&[2, 1]), rat(2, 3)),
                (p(&[1]), int(-1)),
                (p(&[]), int(5)),
            ],
        )
        .unwrap();
        let c = to_macdonald_basis(&f, &q, &t).unwrap();
        assert_eq!(from_macdonald_basis(&c, 3, &q, &t).unwrap(), f);
    }
}
