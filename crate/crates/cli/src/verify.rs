//! The `verify` subcommand: per-discriminant consistency checks.

use std::io::Write;

use rayon::prelude::*;

use prym_orbifold::discriminant::{validate, Discriminant};
use prym_orbifold::forms::{
    enumerate_h2, enumerate_h3, h3_candidates, h3_quadric_points, orbifold_counts,
};
use prym_orbifold::geometry::{classify_geometric, f_map, in_fundamental_domain_exact};
use prym_orbifold::periods::{
    build_pi_x, build_pi_y, eigenvector_residual, endomorphism_residual, riemann_relations,
    x_representation, y_representation, ACCEPTANCE_TOL, IDENTITY_TOL, POLARISATION_X,
    POLARISATION_Y,
};

use crate::{CliError, Depth};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckLine {
    pub d: i64,
    pub name: &'static str,
    pub ok: bool,
    pub detail: String,
}

fn line(d: i64, name: &'static str, result: Result<String, String>) -> CheckLine {
    match result {
        Ok(detail) => CheckLine {
            d,
            name,
            ok: true,
            detail,
        },
        Err(detail) => CheckLine {
            d,
            name,
            ok: false,
            detail,
        },
    }
}

fn domain_equivalence(d: &Discriminant, depth: Depth) -> Result<String, String> {
    let pts = match depth {
        Depth::Fast => enumerate_h3(d),
        Depth::Full => {
            let a_min = -(3.0 * (d.value() as f64).sqrt()).floor() as i64 - 1;
            h3_quadric_points(d, a_min)
        }
    };
    let mut escalated = 0;
    for t in &pts {
        let p = f_map(t).map_err(|e| e.to_string())?;
        let v = classify_geometric(&p);
        escalated += usize::from(v.escalated);
        if v.inside != in_fundamental_domain_exact(t) {
            return Err(format!(
                "{t}: integer test {}, geometric test {}",
                !v.inside, v.inside
            ));
        }
    }
    Ok(format!("{} points, {escalated} decided exactly", pts.len()))
}

fn parity(d: &Discriminant) -> Result<String, String> {
    let hs = enumerate_h3(d);
    let even = d.value() % 4 == 0;
    for t in &hs {
        let ok = t.b % 2 == 0 && t.c % 2 == 0 && (t.a % 2 == 0) == even;
        if !ok {
            let rule = if even {
                "a, b and c even"
            } else {
                "a odd, b and c even"
            };
            return Err(format!("{t} breaks the parity rule ({rule})"));
        }
    }
    Ok(format!("{} triples", hs.len()))
}

fn x_certificates(d: &Discriminant) -> Result<String, String> {
    let n = d.value();
    let pi = build_pi_x();
    let hs = enumerate_h2(d);
    let mut worst: f64 = 0.0;
    for t in &hs {
        let p = x_representation(t.a, t.b, t.c, n).map_err(|e| e.to_string())?;
        if p.analytic_square_residual() >= IDENTITY_TOL || !p.rational_square_is_scalar() {
            return Err(format!("{t}: A² = R² = D fails"));
        }
        if !p.is_self_adjoint(&POLARISATION_X) {
            return Err(format!("{t}: R is not self-adjoint"));
        }
        let r = endomorphism_residual(&p, &pi);
        let e = eigenvector_residual(&p, t);
        if r >= ACCEPTANCE_TOL || e >= IDENTITY_TOL * n as f64 {
            return Err(format!("{t}: residual {r:e}, eigenvector residual {e:e}"));
        }
        worst = worst.max(r);
    }
    Ok(format!("{} triples, max residual {worst:.1e}", hs.len()))
}

fn y_certificates(d: &Discriminant) -> Result<String, String> {
    let n = d.value();
    let hs = enumerate_h3(d);
    let mut worst: f64 = 0.0;
    let mut min_eigen = f64::INFINITY;
    for t in &hs {
        let p = y_representation(t.a, t.b, t.c, n).map_err(|e| e.to_string())?;
        let pm = build_pi_y(f_map(t).map_err(|e| e.to_string())?.to_complex())
            .map_err(|e| e.to_string())?;
        if !p.rational_square_is_scalar() || !p.is_self_adjoint(&POLARISATION_Y) {
            return Err(format!("{t}: R² = D or self-adjointness fails"));
        }
        let gen = p.to_generator_t().map_err(|e| e.to_string())?;
        if !gen.is_integral() {
            return Err(format!("{t}: R_T is not integral"));
        }
        let r = endomorphism_residual(&p, &pm).max(endomorphism_residual(&gen, &pm));
        if r >= ACCEPTANCE_TOL {
            return Err(format!("{t}: residual {r:e}"));
        }
        let rr = riemann_relations(&pm);
        if !rr.holds {
            return Err(format!("{t}: Riemann relations fail ({rr:?})"));
        }
        worst = worst.max(r);
        min_eigen = min_eigen.min(rr.hermitian_min_eigenvalue());
    }
    if hs.is_empty() {
        return Ok("0 triples".into());
    }
    Ok(format!(
        "{} triples, max residual {worst:.1e}, min eigenvalue {min_eigen:.3e}",
        hs.len()
    ))
}

fn scaling(d: &Discriminant) -> Result<String, String> {
    let n = d.value();
    let f0 = d.conductor();
    let kept = enumerate_h3(d);
    let mut dropped: Vec<_> = h3_candidates(d)
        .into_iter()
        .filter(|t| !kept.contains(t))
        .map(|t| t.coords())
        .collect();
    let mut images = Vec::new();
    for g in (2..=f0).filter(|g| f0 % g == 0) {
        let small = validate(n / (g * g)).map_err(|e| e.to_string())?;
        images.extend(
            enumerate_h3(&small)
                .iter()
                .map(|t| (g * t.a, g * t.b, g * t.c)),
        );
    }
    dropped.sort();
    images.sort();
    if dropped != images {
        return Err(format!(
            "gcd filter removes {dropped:?}, rescaled triples are {images:?}"
        ));
    }
    Ok(format!("{} rescaled triples removed", dropped.len()))
}

pub fn checks_for(d: &Discriminant, depth: Depth) -> Result<Vec<CheckLine>, CliError> {
    let n = d.value();
    let counts = orbifold_counts(d)?;
    let mut lines = vec![
        CheckLine {
            d: n,
            name: "counts",
            ok: true,
            detail: format!(
                "e2={} e3={} e4={} e6={}",
                counts.e2, counts.e3, counts.e4, counts.e6
            ),
        },
        line(n, "domain", domain_equivalence(d, depth)),
        line(n, "parity", parity(d)),
        line(n, "x-certificates", x_certificates(d)),
        line(n, "y-certificates", y_certificates(d)),
    ];
    if depth == Depth::Full {
        lines.push(line(n, "scaling", scaling(d)));
    }
    Ok(lines)
}

pub fn run_range(
    lo: i64,
    hi: i64,
    depth: Depth,
    single: bool,
    pool: &rayon::ThreadPool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let discs: Vec<Discriminant> = if single {
        let d = validate(lo)?;
        if d.wd_empty() {
            writeln!(err, "warning: {} (D = {lo})", crate::EMPTY_WARNING)?;
        }
        vec![d]
    } else {
        if lo > hi {
            return Err(CliError::Domain(format!("empty range {lo}..{hi}")));
        }
        (lo..=hi).filter_map(|n| validate(n).ok()).collect()
    };
    let results: Vec<Result<Vec<CheckLine>, CliError>> =
        pool.install(|| discs.par_iter().map(|d| checks_for(d, depth)).collect());
    let mut failed = 0;
    let mut total = 0;
    for r in results {
        for l in r? {
            total += 1;
            failed += usize::from(!l.ok);
            writeln!(
                out,
                "D={} {}: {} ({})",
                l.d,
                l.name,
                if l.ok { "ok" } else { "FAILED" },
                l.detail
            )?;
        }
    }
    writeln!(out, "verify: {total} checks, {failed} failed")?;
    if failed > 0 {
        return Err(CliError::Verification(format!("{failed} check(s) failed")));
    }
    Ok(())
}
