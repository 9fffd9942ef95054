//! The semigroup `T_N(s) = exp(s D_N)` on polynomials through the big q-Jacobi
//! eigenbasis, and its reconstruction from resolvents `A_r = rA(r − A)⁻¹`.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_traits::Zero;
use serde::Serialize;

use crate::bigqjacobi::{apply_dn, big_qjacobi};
use crate::linalg::{invert, mat_mul, mat_vec, Matrix};
use crate::qalgebra::{int, partitions_up_to, to_f64, Params, Partition, Scalar};
use crate::statespace::enumerate_truncated;
use crate::symfunc::{FloatPoly, SymPoly};
use crate::{Error, Result};

/// Change of basis between monomials and `{φ_{λ|N} : |λ| ≤ d}`.
#[derive(Clone, Debug)]
pub struct PhiBasis {
    pub n: usize,
    pub degree: usize,
    pub params: Params,
    /// Increasing graded order; also the monomial order.
    pub basis: Vec<Partition>,
    pub eigenvalues: Vec<Scalar>,
    /// Column `j` holds the monomial coefficients of `φ_{basis[j]}`.
    pub to_monomial: Matrix,
    pub from_monomial: Matrix,
}

impl PhiBasis {
    pub fn new(params: &Params, n: usize, degree: usize) -> Result<Self> {
        let basis = partitions_up_to(degree, n);
        let mut to_monomial = vec![vec![Scalar::zero(); basis.len()]; basis.len()];
        let mut eigenvalues = Vec::with_capacity(basis.len());
        for (j, lam) in basis.iter().enumerate() {
            let phi = big_qjacobi(lam, params, n)?;
            for (i, kappa) in basis.iter().enumerate() {
                to_monomial[i][j] = phi.poly.coeff(kappa);
            }
            eigenvalues.push(phi.eigenvalue.clone());
        }
        let from_monomial = invert(&to_monomial)?;
        Ok(PhiBasis {
            n,
            degree,
            params: params.clone(),
            basis,
            eigenvalues,
            to_monomial,
            from_monomial,
        })
    }

    fn monomial_vector(&self, f: &SymPoly) -> Result<Vec<Scalar>> {
        if f.n() != self.n {
            return Err(Error::VariableMismatch {
                left: f.n(),
                right: self.n,
            });
        }
        if f.degree().unwrap_or(0) > self.degree {
            return Err(Error::Lift {
                degree: f.degree().unwrap_or(0),
                bound: self.degree,
                n_vars: self.n,
            });
        }
        Ok(self.basis.iter().map(|k| f.coeff(k)).collect())
    }

    /// `f = Σ a_λ φ_λ`.
    pub fn expand(&self, f: &SymPoly) -> Result<BTreeMap<Partition, Scalar>> {
        let a = mat_vec(&self.from_monomial, &self.monomial_vector(f)?);
        Ok(self
            .basis
            .iter()
            .cloned()
            .zip(a)
            .filter(|(_, c)| !c.is_zero())
            .collect())
    }

    /// `Σ a_λ μ_λ φ_λ`, the derivative of `T(s) f` at `s = 0`.
    pub fn generator(&self, f: &SymPoly) -> Result<SymPoly> {
        let a = mat_vec(&self.from_monomial, &self.monomial_vector(f)?);
        let scaled: Vec<Scalar> = a
            .iter()
            .zip(&self.eigenvalues)
            .map(|(c, m)| c * m)
            .collect();
        let out = mat_vec(&self.to_monomial, &scaled);
        SymPoly::from_terms(self.n, self.basis.iter().cloned().zip(out))
    }

    /// Matrix of `T(s)` on monomial coordinates.
    pub fn semigroup_matrix(&self, s: f64) -> DMatrix<f64> {
        let dim = self.basis.len();
        let b = to_dmatrix(&self.to_monomial);
        let binv = to_dmatrix(&self.from_monomial);
        let diag = DMatrix::from_diagonal(&DVector::from_iterator(
            dim,
            self.eigenvalues.iter().map(|m| (s * to_f64(m)).exp()),
        ));
        b * diag * binv
    }

    pub fn apply(&self, f: &SymPoly, s: f64) -> Result<FloatPoly> {
        let v = self.monomial_vector(f)?;
        let a = mat_vec(&self.from_monomial, &v);
        let weighted: Vec<f64> = a
            .iter()
            .zip(&self.eigenvalues)
            .map(|(c, m)| to_f64(c) * (s * to_f64(m)).exp())
            .collect();
        let b = to_dmatrix(&self.to_monomial);
        let out = b * DVector::from_vec(weighted);
        Ok(self.float_poly(out.as_slice()))
    }

    /// `T(s)` applied to a floating-point polynomial.
    pub fn apply_float(&self, f: &FloatPoly, s: f64) -> FloatPoly {
        let v = DVector::from_iterator(
            self.basis.len(),
            self.basis
                .iter()
                .map(|k| f.terms.get(k).copied().unwrap_or(0.0)),
        );
        let out = self.semigroup_matrix(s) * v;
        self.float_poly(out.as_slice())
    }

    fn float_poly(&self, coeffs: &[f64]) -> FloatPoly {
        FloatPoly {
            n: self.n,
            terms: self
                .basis
                .iter()
                .cloned()
                .zip(coeffs.iter().copied())
                .filter(|(_, c)| *c != 0.0)
                .collect(),
        }
    }
}

fn to_dmatrix(m: &Matrix) -> DMatrix<f64> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    DMatrix::from_fn(rows, cols, |i, j| to_f64(&m[i][j]))
}

/// `T_N(s) f` for a polynomial of any degree.
pub fn semigroup_apply(f: &SymPoly, s: f64, params: &Params, n: usize) -> Result<FloatPoly> {
    PhiBasis::new(params, n, f.degree().unwrap_or(0))?.apply(f, s)
}

/// `T_∞(s)` on an expansion `Σ a_λ Φ_λ`: each coordinate is multiplied by `exp(s μ_λ)`.
pub fn semigroup_apply_phi(
    coeffs: &BTreeMap<Partition, Scalar>,
    s: f64,
    base: &Params,
) -> BTreeMap<Partition, f64> {
    coeffs
        .iter()
        .map(|(lam, c)| {
            let mu = to_f64(&crate::bigqjacobi::mu_infinity(lam, base));
            (lam.clone(), to_f64(c) * (s * mu).exp())
        })
        .collect()
}

/// Exact matrix of `D_N` on monomials of degree `≤ d` (column `j` is the image of `m_{basis[j]}`).
pub fn dn_monomial_matrix(params: &Params, n: usize, d: usize) -> Result<(Vec<Partition>, Matrix)> {
    let basis = partitions_up_to(d, n);
    let mut m = vec![vec![Scalar::zero(); basis.len()]; basis.len()];
    for (j, kappa) in basis.iter().enumerate() {
        let image = apply_dn(&SymPoly::monomial(n, kappa.clone()), params, n)?;
        for (i, row) in basis.iter().enumerate() {
            m[i][j] = image.coeff(row);
        }
    }
    Ok((basis, m))
}

#[derive(Clone, Debug, Serialize)]
pub struct SemigroupRow {
    pub s: f64,
    pub s_prime: f64,
    /// `‖T(s)T(s′) − T(s+s′)‖ / ‖T(s+s′)‖`, entrywise max norm.
    pub relative_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SemigroupReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub degree: usize,
    pub rows: Vec<SemigroupRow>,
}

impl SemigroupReport {
    pub fn max_relative_error(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.relative_error)
            .fold(0.0, f64::max)
    }
}

/// Compares `T(s)T(s′)` with `T(s+s′)` on the degree-`d` cone.
pub fn semigroup_property_check(
    params: &Params,
    n: usize,
    degree: usize,
    times: &[(f64, f64)],
) -> Result<SemigroupReport> {
    let b = PhiBasis::new(params, n, degree)?;
    let rows = times
        .iter()
        .map(|&(s, sp)| {
            let lhs = b.semigroup_matrix(s) * b.semigroup_matrix(sp);
            let rhs = b.semigroup_matrix(s + sp);
            let scale = rhs.amax().max(f64::MIN_POSITIVE);
            SemigroupRow {
                s,
                s_prime: sp,
                relative_error: (lhs - rhs).amax() / scale,
            }
        })
        .collect();
    Ok(SemigroupReport { n, degree, rows })
}

#[derive(Clone, Debug, Serialize)]
pub struct ResolventRow {
    pub r: f64,
    pub distance: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResolventReport {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "K")]
    pub k: u32,
    pub s: f64,
    pub rows: Vec<ResolventRow>,
}

impl ResolventReport {
    pub fn strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].distance < w[0].distance)
    }

    pub fn last_distance(&self) -> f64 {
        self.rows.last().map_or(f64::NAN, |r| r.distance)
    }
}

/// Sup distance over the window states between `exp(s A_r) f` and `T(s) f`.
pub fn resolvent_approx_check(
    f: &SymPoly,
    s: f64,
    r_list: &[u64],
    params: &Params,
    n: usize,
    k: u32,
) -> Result<ResolventReport> {
    let d = f.degree().unwrap_or(0);
    let (basis, a) = dn_monomial_matrix(params, n, d)?;
    let exact = PhiBasis::new(params, n, d)?.apply(f, s)?;
    let v = DVector::from_iterator(basis.len(), basis.iter().map(|kk| to_f64(&f.coeff(kk))));
    let points: Vec<Vec<f64>> = enumerate_truncated(n, k)
        .iter()
        .map(|st| st.coords(params).padded().iter().map(to_f64).collect())
        .collect();
    let mut rows = Vec::new();
    for &r in r_list {
        if r == 0 {
            return Err(Error::Constraint(
                "resolvent parameter r must be positive".into(),
            ));
        }
        let rs = int(r as i64);
        let mut shifted = a
            .iter()
            .map(|row| row.iter().map(|x| -x).collect())
            .collect::<Matrix>();
        for (i, row) in shifted.iter_mut().enumerate() {
            row[i] += &rs;
        }
        let ar: Matrix = mat_mul(&a, &invert(&shifted)?)
            .into_iter()
            .map(|row| row.into_iter().map(|x| x * &rs).collect())
            .collect();
        let e = (to_dmatrix(&ar) * s).exp();
        let out = e * &v;
        let approx = FloatPoly {
            n,
            terms: basis.iter().cloned().zip(out.iter().copied()).collect(),
        };
        let distance = points
            .iter()
            .map(|x| (approx.evaluate(x) - exact.evaluate(x)).abs())
            .fold(0.0, f64::max);
        rows.push(ResolventRow {
            r: r as f64,
            distance,
        });
    }
    Ok(ResolventReport { n, k, s, rows })
}
