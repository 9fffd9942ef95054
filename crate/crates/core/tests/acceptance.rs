//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

mod common;

use std::time::Instant;

use num_traits::Zero;
use qjacobi::bigqjacobi::OperatorCoeffs;
use qjacobi::bigqjacobi::{apply_dn, big_qjacobi};
use qjacobi::cli::sample_poly;
use qjacobi::dynamics::{
    compare_with_stationary, intertwining_check, norm_limit_check, orthogonality_check, pmp_test,
    rates, resolvent_approx_check, semigroup_property_check, stationary_measure,
};
use qjacobi::macdonald::{macdonald_poly, macdonald_stability_check};
use qjacobi::qalgebra::{partitions_up_to, rat, to_f64, ConjugatePair, Params, Partition, Scalar};
use qjacobi::symfunc::SymPoly;
use qjacobi::Error;

use common::{
    base, ct_oracle, dn_oracle, macdonald_p2_m11_oracle, random_params, random_point, rng,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn eigenrelation() -> Outcome {
    let mut r = rng(2024);
    let mut tuples = vec![base()];
    let mut skipped = 0;
    let mut checked = 0usize;
    let mut ok = true;
    while tuples.len() < 12 {
        tuples.push(random_params(&mut r));
    }
    let mut used = 0;
    for p in &tuples {
        let mut tuple_ok = true;
        let mut collided = false;
        'levels: for n in 1..=3 {
            for lam in partitions_up_to(4, n) {
                let phi = match big_qjacobi(&lam, p, n) {
                    Ok(phi) => phi,
                    Err(Error::EigenvalueCollision { .. }) => {
                        collided = true;
                        break 'levels;
                    }
                    Err(e) => panic!("{e}"),
                };
                let image = apply_dn(&phi.poly, p, n).unwrap();
                tuple_ok &= image
                    .sub(&phi.poly.scale(&phi.eigenvalue))
                    .unwrap()
                    .is_zero();
                // the definition, pointwise
                let x = random_point(&mut r, n);
                let f = |y: &[Scalar]| phi.poly.evaluate(y);
                tuple_ok &= dn_oracle(&f, p, &x) == &phi.eigenvalue * phi.poly.evaluate(&x);
                checked += 1;
            }
        }
        if collided {
            skipped += 1;
        } else {
            used += 1;
            ok &= tuple_ok;
        }
    }
    outcome(
        ok && used >= 10,
        format!("{used} parameter tuples, {checked} (λ, N) pairs, zero residual; {skipped} tuples skipped for eigenvalue collisions"),
    )
}

fn constant_terms() -> Outcome {
    let b = base();
    let mut r = rng(5);
    let mut ok = true;
    for n in 1..=5 {
        let p = b.shift_level(n);
        for (f, expected) in [
            (SymPoly::power_sum(n, 2), ct_oracle(&p, n).0),
            (SymPoly::elementary(n, 2), ct_oracle(&p, n).1),
        ] {
            let image = apply_dn(&f, &p, n).unwrap();
            ok &= image.constant_term() == expected;
            for _ in 0..3 {
                let x = random_point(&mut r, n);
                ok &= dn_oracle(&|y: &[Scalar]| f.evaluate(y), &p, &x) == image.evaluate(&x);
            }
        }
    }
    let one = Scalar::from_integer(1.into());
    let q = &b.q;
    let univariate = (&one - q) * (&one - q) * (&one + q) / (&b.a * -b.b.clone());
    let ct1 = apply_dn(&SymPoly::power_sum(1, 2), &b, 1)
        .unwrap()
        .constant_term();
    ok &= ct1 == univariate;
    outcome(
        ok,
        "CT(D_N p₂), CT(D_N e₂) exact for N ≤ 5; N = 1 matches (1−q)²(1+q)/(a|b|)".into(),
    )
}

fn intertwining() -> Outcome {
    let b = base();
    let mut cases = 0;
    let mut ok = true;
    for n in 1..=3 {
        for lam in partitions_up_to(4, n) {
            ok &= intertwining_check(&lam, &b, n).unwrap().passed();
            cases += 1;
        }
    }
    outcome(
        ok,
        format!("{cases} (λ, N) cases with identical π and link images"),
    )
}

fn pmp() -> Outcome {
    let b = base();
    let mut ok = true;
    let mut parts = Vec::new();
    for (n, k) in [(1, 12), (2, 8), (3, 6)] {
        let rep = pmp_test(&b.shift_level(n), n, k, 200, 17).unwrap();
        ok &= rep.passed() && rep.interior_trials > 0;
        parts.push(format!(
            "(N={n},K={k}): {} interior minimizers, {} frontier discards, {} violations",
            rep.interior_minimizers,
            rep.frontier_discards,
            rep.violations.len()
        ));
    }
    outcome(ok, parts.join("; "))
}

fn reversibility() -> Outcome {
    let b = base();
    let mut ok = true;
    let mut parts = Vec::new();
    for n in 1..=2 {
        let k = 8;
        let p = b.shift_level(n);
        let m = stationary_measure(&p, n, k).unwrap();
        ok &= m.check.cycle_failures == 0 && m.check.max_global_residual.is_zero();
        // recomputed here from the rates alone
        let ops = OperatorCoeffs::new(&p, n);
        let index: std::collections::HashMap<_, _> = m
            .states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let mut inflow = vec![Scalar::zero(); m.len()];
        let mut outflow = vec![Scalar::zero(); m.len()];
        let mut edges = 0;
        for (i, s) in m.states.iter().enumerate() {
            for rt in rates(s, &ops).unwrap() {
                outflow[i] += &m.weights[i] * &rt.rate;
                if let Some(&j) = index.get(&rt.target) {
                    inflow[j] += &m.weights[i] * &rt.rate;
                    let back = rates(&rt.target, &ops)
                        .unwrap()
                        .into_iter()
                        .find(|x| &x.target == s)
                        .map_or_else(Scalar::zero, |x| x.rate);
                    ok &= &m.weights[i] * &rt.rate == &m.weights[j] * back;
                    edges += 1;
                }
            }
        }
        let interior: Vec<usize> = (0..m.len())
            .filter(|&i| !m.states[i].is_frontier(k))
            .collect();
        ok &= interior.iter().all(|&i| inflow[i] == outflow[i]);
        parts.push(format!(
            "N={n},K={k}: {edges} edges balanced, {} interior states with zero residual",
            interior.len()
        ));
    }
    outcome(ok, parts.join("; "))
}

fn orthogonality() -> Outcome {
    let b = base();
    let mut ok = true;
    let mut parts = Vec::new();
    for n in 1..=2 {
        let rep = orthogonality_check(&b.shift_level(n), n, 10, 3).unwrap();
        ok &= rep.passed();
        let worst = rep
            .pairs
            .iter()
            .max_by(|x, y| x.value.abs().total_cmp(&y.value.abs()))
            .unwrap();
        parts.push(format!(
            "N={n}: {} pairs, max |⟨φφ⟩| = {:.2e} ({} vs {}) with tolerance {:.2e}, worst value/tolerance {:.3}",
            rep.pairs.len(),
            worst.value.abs(),
            worst.lambda,
            worst.mu,
            worst.tolerance,
            rep.worst_ratio()
        ));
    }
    outcome(ok, parts.join("; "))
}

fn norm_limit() -> Outcome {
    let b = Params::new(
        rat(1, 4),
        rat(1, 20),
        rat(3, 2),
        rat(-2, 1),
        ConjugatePair::new(rat(1, 2), rat(3, 4)).unwrap(),
    )
    .unwrap();
    let mut ok = true;
    let mut parts = Vec::new();
    for lam in [vec![1], vec![2], vec![1, 1]] {
        let lam = Partition::new(lam).unwrap();
        let rep = norm_limit_check(&lam, &b, &[2, 3, 4], 10).unwrap();
        ok &= rep.gaps_decreasing() && rep.last_gap() < 1e-2;
        let gaps: Vec<String> = rep
            .rows
            .iter()
            .map(|r| format!("{:.2e}(tol {:.1e})", r.gap, r.tolerance))
            .collect();
        parts.push(format!("{lam}: {}", gaps.join(" → ")));
    }
    outcome(ok, format!("q=1/4, t=1/20: {}", parts.join("; ")))
}

fn semigroup_resolvent() -> Outcome {
    let b = base();
    let mut worst: f64 = 0.0;
    for n in 1..=3 {
        let rep = semigroup_property_check(
            &b.shift_level(n),
            n,
            3,
            &[(0.25, 0.75), (1.0, 2.0), (0.01, 5.0)],
        )
        .unwrap();
        worst = worst.max(rep.max_relative_error());
    }
    let n = 2;
    let res = resolvent_approx_check(
        &sample_poly(n, 3),
        1.0,
        &[10, 100, 1_000, 10_000],
        &b.shift_level(n),
        n,
        8,
    )
    .unwrap();
    let dists: Vec<String> = res
        .rows
        .iter()
        .map(|r| format!("{:.2e}", r.distance))
        .collect();
    outcome(
        worst <= 1e-12 && res.strictly_decreasing() && res.last_distance() < 1e-3,
        format!(
            "semigroup relative error {worst:.1e} (≤ 1e-12); resolvent distances {}",
            dists.join(" > ")
        ),
    )
}

fn simulation() -> Outcome {
    let b = base();
    let mut ok = true;
    let mut parts = Vec::new();
    for (n, k, bound) in [(1, 10, 0.05), (2, 6, 0.08)] {
        let c =
            compare_with_stationary(&b.shift_level(n), n, k, f64::INFINITY, Some(10_000_000), 7)
                .unwrap();
        ok &= c.min_jumps() >= 100_000 && c.total_variation <= bound;
        parts.push(format!(
            "N={n},K={k}: TV {:.4} (≤ {bound}), {} sectors × {} jumps",
            c.total_variation,
            c.sectors.len(),
            c.min_jumps()
        ));
    }
    outcome(ok, parts.join("; "))
}

fn macdonald() -> Outcome {
    let b = base();
    let (q, t) = (&b.q, &b.t);
    let got = macdonald_poly(&Partition::new(vec![2]).unwrap(), 2, q, t)
        .unwrap()
        .coeff(&Partition::new(vec![1, 1]).unwrap());
    let one = Scalar::from_integer(1.into());
    let closed = (&one + q) * (&one - t) / (&one - q * t);
    let oracle = macdonald_p2_m11_oracle(q, t);
    let mut cases = 0;
    let mut stable = true;
    for lam in partitions_up_to(4, 5) {
        for n in lam.size().max(1)..=5 {
            stable &= macdonald_stability_check(&lam, n, q, t).unwrap();
            cases += 1;
        }
    }
    outcome(
        got == closed && got == oracle && stable,
        format!(
            "P_(2)|2 ⟶ m_(1,1) coefficient {} = {}; stability in {cases} cases",
            qjacobi::qalgebra::format_scalar(&got),
            to_f64(&got)
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("eigenrelation exactness", eigenrelation),
        ("constant-term oracles", constant_terms),
        ("π-stability and intertwining", intertwining),
        ("positive maximum principle", pmp),
        ("reversibility and stationarity", reversibility),
        ("orthogonality", orthogonality),
        ("norm limit", norm_limit),
        ("semigroup and resolvent", semigroup_resolvent),
        ("simulation vs stationary measure", simulation),
        ("Macdonald oracle and stability", macdonald),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        if !o.pass {
            failed += 1;
        }
        println!(
            "[{tag}] {:>2}. {name}: {} ({:.1}s)",
            i + 1,
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
