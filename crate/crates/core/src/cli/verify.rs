//! Verification suites behind `qjd verify`.

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde_json::json;

use super::{RunConfig, Suite};
use crate::bigqjacobi::{apply_dn, big_qjacobi, ct_closed_forms, univariate_p2_constant};
use crate::dynamics::{
    intertwining_check, norm_limit_check, orthogonality_check, pmp_test, resolvent_approx_check,
    semigroup_property_check, stationary_measure, BalanceMethod, PhiBasis,
};
use crate::macdonald::{macdonald_poly, macdonald_stability_check};
use crate::qalgebra::{format_scalar, partitions_up_to, rat, to_f64, Params, Partition, Scalar};
use crate::report::{Provenance, Report, Status};
use crate::symfunc::SymPoly;
use crate::Result;

/// A fixed polynomial using every monomial of degree `≤ d`, with small rational coefficients.
pub fn sample_poly(n: usize, d: usize) -> SymPoly {
    SymPoly::from_terms(
        n,
        partitions_up_to(d, n)
            .into_iter()
            .enumerate()
            .map(|(i, k)| (k, rat(i as i64 % 5 - 2, 1 + i as i64 % 3))),
    )
    .expect("partitions fit")
}

fn max_abs_coeff(f: &SymPoly) -> f64 {
    f.terms()
        .values()
        .map(|c| to_f64(c).abs())
        .fold(0.0, f64::max)
}

pub fn run_suite(suite: Suite, cfg: &RunConfig, base: &Params) -> Result<Report> {
    let mut r = Report::new(&format!("{suite:?}").to_lowercase(), base);
    match suite {
        Suite::Eigen => eigen(cfg, base, &mut r)?,
        Suite::Ct => ct(cfg, base, &mut r)?,
        Suite::Pi => pi(cfg, base, &mut r)?,
        Suite::Macdonald => macdonald(cfg, base, &mut r)?,
        Suite::Pmp => pmp(cfg, base, &mut r)?,
        Suite::Reversibility => reversibility(cfg, base, &mut r)?,
        Suite::Orthogonality => orthogonality(cfg, base, &mut r)?,
        Suite::Norm => norm(cfg, base, &mut r)?,
        Suite::Semigroup => semigroup(cfg, base, &mut r)?,
        Suite::Resolvent => resolvent(cfg, base, &mut r)?,
    }
    Ok(r)
}

fn eigen(cfg: &RunConfig, base: &Params, r: &mut Report) -> Result<()> {
    let n = cfg.n.unwrap_or(2);
    let d = cfg.maxdeg.unwrap_or(4);
    let params = base.shift_level(n);
    let rows = partitions_up_to(d, n)
        .par_iter()
        .map(|lam| {
            let phi = big_qjacobi(lam, &params, n)?;
            let image = apply_dn(&phi.poly, &params, n)?;
            let residual = image.sub(&phi.poly.scale(&phi.eigenvalue))?;
            Ok((lam.clone(), format_scalar(&phi.eigenvalue), residual))
        })
        .collect::<Result<Vec<_>>>()?;
    r.n = Some(n);
    r.status = Status::from_bool(rows.iter().all(|(_, _, res)| res.is_zero()));
    r.max_residual = rows
        .iter()
        .map(|(_, _, res)| max_abs_coeff(res))
        .fold(0.0, f64::max);
    r.details = json!(rows
        .iter()
        .map(|(lam, mu, res)| json!({"lambda": lam, "mu": mu, "residual_terms": res.terms().len()}))
        .collect::<Vec<_>>());
    Ok(())
}

fn ct(cfg: &RunConfig, base: &Params, r: &mut Report) -> Result<()> {
    let top = cfg.n.unwrap_or(5);
    let mut rows = Vec::new();
    let mut ok = true;
    let mut worst = 0.0f64;
    for n in 1..=top {
        let params = base.shift_level(n);
        let (p2, e2) = ct_closed_forms(&params, n);
        let got_p2 = apply_dn(&SymPoly::power_sum(n, 2), &params, n)?.constant_term();
        let got_e2 = apply_dn(&SymPoly::elementary(n, 2), &params, n)?.constant_term();
        let mut pass = got_p2 == p2 && got_e2 == e2;
        let mut univariate = None;
        if n == 1 {
            let u = univariate_p2_constant(&params);
            pass &= got_p2 == u;
            univariate = Some(format_scalar(&u));
        }
        ok &= pass;
        worst = worst
            .max(to_f64(&(&got_p2 - &p2).abs()))
            .max(to_f64(&(&got_e2 - &e2).abs()));
        rows.push(json!({
            "N": n,
            "ct_p2": format_scalar(&got_p2),
            "expected_p2": format_scalar(&p2),
            "ct_e2": format_scalar(&got_e2),
            "expected_e2": format_scalar(&e2),
            "univariate_p2": univariate,
            "pass": pass,
        }));
    }
    r.n = Some(top);
    r.status = Status::from_bool(ok);
    r.max_residual = worst;
    r.details = json!(rows);
    Ok(())
}

fn pi(cfg: &RunConfig, base: &Params, r: &mut Report) -> Result<()> {
    let top = cfg.n.unwrap_or(3);
    let d = cfg.maxdeg.unwrap_or(4);
    let cases: Vec<(Partition, usize)> = (1..=top)
        .flat_map(|n| partitions_up_to(d, n).into_iter().map(move |lam| (lam, n)))
        .collect();
    let reports = cases
        .par_iter()
        .map(|(lam, n)| intertwining_check(lam, base, *n))
        .collect::<Result<Vec<_>>>()?;
    r.n = Some(top);
    r.status = Status::from_bool(reports.iter().all(|x| x.passed()));
    r.max_residual = reports.iter().filter(|x| !x.passed()).count() as f64;
    r.details = serde_json::to_value(&reports)?;
    Ok(())
}

fn macdonald(cfg: &RunConfig, base: &Params, r: &mut Report) -> Result<()> {
    let top = cfg.n.unwrap_or(5);
    let d = cfg.maxdeg.unwrap_or(4);
    let (q, t) = (&base.q, &base.t);
    let one = Scalar::from_integer(1.into());
    let expected = (&one + q) * (&one - t) / (&one - q * t);
    let p2 = macdonald_poly(&Partition::new(vec![2])?, 2, q, t)?;
    let got = p2.coeff(&Partition::new(vec![1, 1])?);
    let mut cases = Vec::new();
    for lam in partitions_up_to(d, top) {
        for n in lam.size().max(1)..=top {
            cases.push((lam.clone(), n));
        }
    }
    let stable = cases
        .par_iter()
        .map(|(lam, n)| macdonald_stability_check(lam, *n, q, t).map(|ok| (lam.clone(), *n, ok)))
        .collect::<Result<Vec<_>>>()?;
    let failures: Vec<_> = stable.iter().filter(|(_, _, ok)| !ok).collect();
    r.n = Some(top);
    r.status = Status::from_bool(got == expected && failures.is_empty());
    r.max_residual = to_f64(&(&got - &expected).abs());
    r.details = json!({
        "p2_coeff_m11": format_scalar(&got),
        "expected": format_scalar(&expected),
        "stability_cases": stable.len(),
        "stability_failures": failures.iter().map(|(l, n, _)| json!({"lambda": l, "N": n})).collect::<Vec<_>>(),
    });
    Ok(())
}

fn pmp(cfg: &RunConfig, base: &Params, r: &mut Report) -> Result<()> {
    let n = cfg.n.unwrap_or(2);
    let k = cfg.k.unwrap_or(6);
    let rep = pmp_test(&base.shift_level(n), n, k, cfg.trials, cfg.seed)?;
    r.n = Some(n);
    r.k = Some(k);
    r.seed = Some(cfg.seed);
    r.status = Status::from_bool(rep.passed());
    r.max_residual = rep.violations.len() as f64;
    r.details = serde_json::to_value(&rep)?;
    Ok(())
}

fn reversibility(cfg: &RunConfig, base: &Params, r: &mut Report) -> Result<()> {
    let top = cfg.n.unwrap_or(2);
    let k = cfg.k.unwrap_or(8);
    let mut rows = Vec::new();
    let mut ok = true;
    let mut worst = 0.0f64;
    for n in 1..=top {
        let m = stationary_measure(&base.shift_level(n), n, k)?;
        let detailed = m
            .sectors
            .iter()
            .all(|s| s.method == BalanceMethod::DetailedBalance);
        let pass = detailed && m.check.cycle_failures == 0 && m.check.max_global_residual.is_zero();
        ok &= pass;
        worst = worst.max(to_f64(&m.check.max_global_residual));
        rows.push(json!({
            "N": n,
            "states": m.len(),
            "sectors": m.sectors.len(),
            "edges": m.check.edges,
            "cycle_failures": m.check.cycle_failures,
            "interior_states": m.check.interior_states,
            "max_global_residual": format_scalar(&m.check.max_global_residual),
            "detailed_balance": detailed,
        }));
    }
    r.n = Some(top);
    r.k = Some(k);
    r.status = Status::from_bool(ok);
    r.max_residual = worst;
    r.details = json!(rows);
    Ok(())
}

fn orthogonality(cfg: &RunConfig, base: &Params, r: &mut Report) -> Result<()> {
    let top = cfg.n.unwrap_or(2);
    let k = cfg.k.unwrap_or(10);
    let d = cfg.maxdeg.unwrap_or(3);
    let mut reports = Vec::new();
    for n in 1..=top {
        reports.push(orthogonality_check(&base.shift_level(n), n, k, d)?);
    }
    let pairs = reports.iter().flat_map(|x| &x.pairs);
    let worst = pairs
        .clone()
        .max_by(|a, b| a.value.abs().total_cmp(&b.value.abs()));
    r.n = Some(top);
    r.k = Some(k);
    r.provenance = Provenance::Float;
    r.status = Status::from_bool(reports.iter().all(|x| x.passed()));
    r.max_residual = worst.map_or(0.0, |p| p.value.abs());
    r.tolerance = worst.map_or(0.0, |p| p.tolerance);
    r.details = serde_json::to_value(&reports)?;
    Ok(())
}

fn norm(cfg: &RunConfig, base: &Params, r: &mut Report) -> Result<()> {
    let top = cfg.n.unwrap_or(4);
    let k = cfg.k.unwrap_or(10);
    let tol = cfg.tol.unwrap_or(1e-2);
    let lams = if cfg.lambda.is_empty() {
        vec![
            Partition::new(vec![1])?,
            Partition::new(vec![2])?,
            Partition::new(vec![1, 1])?,
        ]
    } else {
        cfg.partitions()?
    };
    let levels: Vec<usize> = (2..=top.max(2)).collect();
    let reports = lams
        .iter()
        .map(|lam| norm_limit_check(lam, base, &levels, k))
        .collect::<Result<Vec<_>>>()?;
    r.n = Some(top);
    r.k = Some(k);
    r.provenance = Provenance::Float;
    r.tolerance = tol;
    r.status = Status::from_bool(
        reports
            .iter()
            .all(|x| x.gaps_decreasing() && x.last_gap() < tol),
    );
    r.max_residual = reports.iter().map(|x| x.last_gap()).fold(0.0, f64::max);
    r.details = serde_json::to_value(&reports)?;
    Ok(())
}

fn semigroup(cfg: &RunConfig, base: &Params, r: &mut Report) -> Result<()> {
    let top = cfg.n.unwrap_or(3);
    let d = cfg.maxdeg.unwrap_or(3);
    let tol = cfg.tol.unwrap_or(1e-12);
    let times = [(0.25, 0.75), (1.0, 2.0), (0.01, 5.0), (3.0, 3.0)];
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    let mut generator_ok = true;
    for n in 1..=top {
        let params = base.shift_level(n);
        let rep = semigroup_property_check(&params, n, d, &times)?;
        worst = worst.max(rep.max_relative_error());
        let f = sample_poly(n, d);
        let same = PhiBasis::new(&params, n, d)?.generator(&f)? == apply_dn(&f, &params, n)?;
        generator_ok &= same;
        rows.push(json!({"N": n, "max_relative_error": rep.max_relative_error(), "generator_is_dn": same}));
    }
    r.n = Some(top);
    r.provenance = Provenance::Float;
    r.tolerance = tol;
    r.max_residual = worst;
    r.status = Status::from_bool(generator_ok && worst <= tol);
    r.details = json!(rows);
    Ok(())
}

fn resolvent(cfg: &RunConfig, base: &Params, r: &mut Report) -> Result<()> {
    let n = cfg.n.unwrap_or(2);
    let k = cfg.k.unwrap_or(8);
    let d = cfg.maxdeg.unwrap_or(3);
    let s = cfg.horizon.unwrap_or(1.0);
    let tol = cfg.tol.unwrap_or(1e-3);
    let rep = resolvent_approx_check(
        &sample_poly(n, d),
        s,
        &[10, 100, 1_000, 10_000],
        &base.shift_level(n),
        n,
        k,
    )?;
    r.n = Some(n);
    r.k = Some(k);
    r.provenance = Provenance::Float;
    r.tolerance = tol;
    r.max_residual = rep.last_distance();
    r.status = Status::from_bool(rep.strictly_decreasing() && rep.last_distance() < tol);
    r.details = serde_json::to_value(&rep)?;
    Ok(())
}
