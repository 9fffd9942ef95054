//! The stationary functional on polynomials, and positivity of the semigroup.

mod common;

use num_traits::Zero;
use qjacobi::bigqjacobi::phi_symfunc_monomial;
use qjacobi::dynamics::{stationary_measure, PhiBasis};
use qjacobi::linalg::rank;
use qjacobi::qalgebra::{partitions_up_to, rat, to_f64, Partition, Scalar};
use qjacobi::statespace::enumerate_truncated;
use qjacobi::symfunc::SymPoly;

/// `⟨1⟩ = 1` and `⟨Φ_λ⟩ = 0` for `0 < |λ| ≤ d` pin down a functional on the
/// degree-`≤ d` part of `Sym`: the coefficient matrix of the `Φ_λ` is nonsingular.
#[test]
fn moment_conditions_determine_the_functional() {
    let b = common::base();
    for d in 1..=3 {
        let basis = partitions_up_to(d, d);
        let rows: Vec<Vec<Scalar>> = basis
            .iter()
            .map(|lam| {
                let phi = phi_symfunc_monomial(lam, &b).unwrap();
                basis
                    .iter()
                    .map(|k| phi.terms.get(k).cloned().unwrap_or_else(Scalar::zero))
                    .collect()
            })
            .collect();
        assert_eq!(rank(&rows), basis.len(), "degree {d}");
    }
}

/// The window measure satisfies the moment conditions up to its own tolerance.
#[test]
fn window_measure_has_small_moments() {
    let b = common::base();
    let n = 2;
    let p = b.shift_level(n);
    let m = stationary_measure(&p, n, 10).unwrap();
    for lam in partitions_up_to(2, n).into_iter().filter(|l| !l.is_empty()) {
        let phi = qjacobi::bigqjacobi::big_qjacobi(&lam, &p, n).unwrap();
        let value = m.expect_poly(&phi.poly);
        let tol = m.tolerance(m.sup_bound(&phi.poly));
        assert!(value.abs() <= tol, "{lam}: {value} vs {tol}");
    }
    let total: f64 = m.probabilities.iter().sum();
    assert!((total - 1.0).abs() < 1e-12);
}

/// `T(s) f ≥ 0` on the window when `f ≥ 0` everywhere.
#[test]
fn semigroup_preserves_positivity() {
    let b = common::base();
    for n in 1..=2 {
        let p = b.shift_level(n);
        let basis = PhiBasis::new(&p, n, 4).unwrap();
        let points: Vec<Vec<f64>> = enumerate_truncated(n, 8)
            .iter()
            .map(|s| s.coords(&p).padded().iter().map(to_f64).collect())
            .collect();
        let p1 = SymPoly::power_sum(n, 1);
        for c in [rat(0, 1), rat(1, 10), rat(-1, 3)] {
            let centred = p1.sub(&SymPoly::constant(n, c)).unwrap();
            let f = centred.multiply(&centred).unwrap();
            let f = f.multiply(&f).unwrap();
            for s in [0.1, 1.0, 10.0] {
                let g = basis.apply(&f, s).unwrap();
                let floor = 1e-12 * g.max_abs_coeff().max(1.0);
                let worst = points
                    .iter()
                    .map(|x| g.evaluate(x))
                    .fold(f64::INFINITY, f64::min);
                assert!(worst >= -floor, "n={n} s={s}: {worst}");
            }
        }
    }
}

#[test]
fn constant_has_no_moment_conditions() {
    let b = common::base();
    let phi = phi_symfunc_monomial(&Partition::empty(), &b).unwrap();
    assert_eq!(phi.terms.len(), 1);
    assert_eq!(phi.terms[&Partition::empty()], rat(1, 1));
}
