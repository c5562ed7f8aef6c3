use std::fmt::Write;

use anyhow::Result;
use serde::Serialize;

use toric_alpha::catalog::{catalog, lookup};
use toric_alpha::invariants::{alpha_kg, alpha_km, alpha_via_orbits, c_general, c_k_subset};
use toric_alpha::oracle::{
    alpha_km_bruteforce, c_star_bisection, ehrhart_fit_check, interior_membership, Membership,
    DEFAULT_CEILING,
};
use toric_alpha::symmetry::automorphism_group;
use toric_alpha::{Rat, RatVec};

#[derive(Debug, Serialize)]
pub struct Check {
    pub description: String,
    pub ok: bool,
    pub expected: String,
    pub got: String,
}

fn same<T: PartialEq + std::fmt::Debug>(description: String, expected: T, got: T) -> Check {
    Check { ok: expected == got, description, expected: format!("{expected:?}"), got: format!("{got:?}") }
}

fn exact(description: String, expected: &Rat, got: &Rat) -> Check {
    Check { ok: expected == got, description, expected: expected.to_string(), got: got.to_string() }
}

fn pt(xs: &[i64]) -> RatVec {
    RatVec::from_ints(xs)
}

pub fn run() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let p2 = lookup("p2").expect("catalog").fano();
    let ver = p2.polytope().vertices().to_vec();
    for (x, m) in [
        (pt(&[0, 0]), Membership::Interior),
        (pt(&[2, -1]), Membership::Boundary),
        (pt(&[3, 0]), Membership::Outside),
    ] {
        checks.push(same(format!("membership of {x} in P(p2)"), m, interior_membership(&x, &ver)?));
    }

    let square: Vec<RatVec> = [[1, 1], [1, -1], [-1, 1], [-1, -1]].iter().map(|p| pt(p)).collect();
    let cases = [
        ("f={(2,-1)}, u=Ver P(p2)", vec![pt(&[2, -1])], ver.clone()),
        ("f={(1,1)}, u=Ver square", vec![pt(&[1, 1])], square),
        ("f={0}, u=Ver P(p2)", vec![pt(&[0, 0])], ver.clone()),
    ];
    for (label, fs, us) in cases {
        let c = c_general(&fs, &us)?;
        let b = c_star_bisection(&fs, &us, 40)?;
        checks.push(Check {
            description: format!("bisection bracket for {label}"),
            ok: b.contains(&c),
            expected: c.to_string(),
            got: format!("[{}, {}]", b.lower, b.upper),
        });
    }

    for e in catalog() {
        let f = e.fano();
        let pts = f.polytope().lattice_points(1);
        for size in 1..=3.min(pts.len()) {
            let fs = &pts[pts.len() - size..];
            checks.push(exact(
                format!("{} c_general = c_k on the last {size} lattice points", e.name),
                &c_k_subset(&f, fs)?,
                &c_general(fs, &pts)?,
            ));
        }
    }

    for e in catalog() {
        let f = e.fano();
        let aut = automorphism_group(f.polytope())?;
        for k in 1..=2 {
            checks.push(exact(
                format!("{} full-aut k={k} orbit formula = vertex formula", e.name),
                &alpha_kg(&f, &aut, k)?.value,
                &alpha_via_orbits(&f, &aut, k)?.value,
            ));
        }
    }

    for e in catalog() {
        let f = e.fano();
        let kmax = if f.dim() == 2 { 2 } else { 1 };
        for k in 1..=kmax {
            for m in 1..=3 {
                checks.push(exact(
                    format!("{} alpha_km k={k} m={m} search = brute force", e.name),
                    &alpha_km_bruteforce(&f, k, m, DEFAULT_CEILING)?.value,
                    &alpha_km(&f, k, m)?.value,
                ));
            }
        }
    }

    for e in catalog() {
        let p = e.fano().polytope().clone();
        let fit = ehrhart_fit_check(&p, p.dim() as u64 + 3);
        checks.push(Check {
            description: format!(
                "{} Ehrhart fit predicts held-out counts, leading coefficient = volume",
                e.name
            ),
            ok: fit.passed,
            expected: fit.volume.to_string(),
            got: fit.coefficients.last().map(Rat::to_string).unwrap_or_default(),
        });
    }
    Ok(checks)
}

pub fn tap(checks: &[Check]) -> String {
    let mut out = format!("1..{}\n", checks.len());
    for (i, c) in checks.iter().enumerate() {
        if c.ok {
            writeln!(out, "ok {} {}", i + 1, c.description).unwrap();
        } else {
            writeln!(out, "not ok {} {} (expected {}, got {})", i + 1, c.description, c.expected, c.got)
                .unwrap();
        }
    }
    out
}
