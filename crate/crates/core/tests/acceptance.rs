//! End-to-end acceptance run. Prints one line per criterion and exits
//! nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use toric_alpha::catalog::{catalog, lookup, CatalogEntry};
use toric_alpha::invariants::{
    alpha_kg, alpha_km, alpha_via_orbits, c_general, k_zero, stabilization_report, star_p_check,
    symmetry_alpha_bound, InvariantError, SearchOptions, Verdict,
};
use toric_alpha::oracle::{alpha_km_bruteforce, c_star_bisection, ehrhart_fit_check, DEFAULT_CEILING};
use toric_alpha::symmetry::{automorphism_group, orbit_decomposition, FiniteGroup};
use toric_alpha::{Rat, RatVec};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn r(s: &str) -> Rat {
    s.parse().unwrap()
}

fn entry(name: &str) -> CatalogEntry {
    lookup(name).unwrap()
}

fn group(e: &CatalogEntry, label: &str) -> FiniteGroup {
    let (_, spec) = e.subgroups.iter().find(|(l, _)| *l == label).unwrap();
    spec.resolve(&e.fano()).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn del_pezzo_table() -> Outcome {
    let table: [(&str, &[(&str, &str)]); 5] = [
        ("p2", &[("trivial", "1/3"), ("swap", "1/3"), ("cyclic-3", "1"), ("full", "1")]),
        ("dp1", &[("trivial", "1/3"), ("full", "1/2")]),
        ("dp2", &[("trivial", "1/3"), ("full", "1/3")]),
        ("dp3", &[("trivial", "1/2"), ("reflection", "1/2"), ("full", "1")]),
        ("p1xp1", &[("trivial", "1/2"), ("full", "1")]),
    ];
    let mut cells = 0;
    for (name, rows) in table {
        let e = entry(name);
        let f = e.fano();
        for (label, expected) in rows {
            let h = group(&e, label);
            for k in 1..=3 {
                let v = alpha_kg(&f, &h, k).map_err(|e| e.to_string())?.value;
                let o = alpha_via_orbits(&f, &h, k).map_err(|e| e.to_string())?.value;
                ensure(v == r(expected) && o == v, || {
                    format!("{name}/{label} k={k}: expected {expected}, vertex {v}, orbit {o}")
                })?;
                cells += 1;
            }
        }
    }
    Ok(format!("{cells} cells, vertex and orbit paths agree"))
}

fn grassmannian_sequence() -> Outcome {
    let f = entry("p2").fano();
    for k in 1..=6u64 {
        let expected = Rat::new(k as i64, 3 * k as i64 - 1);
        let pruned = alpha_km(&f, k, 2).map_err(|e| e.to_string())?.value;
        let brute = alpha_km_bruteforce(&f, k, 2, DEFAULT_CEILING).map_err(|e| e.to_string())?.value;
        ensure(pruned == expected && brute == expected, || {
            format!("k={k}: expected {expected}, search {pruned}, brute force {brute}")
        })?;
    }
    Ok("k/(3k-1) for k = 1..6 by search and brute force".into())
}

fn star_p_table() -> Outcome {
    let table = [
        ("p2", true),
        ("dp1", true),
        ("dp2", true),
        ("dp3", false),
        ("p1xp1", false),
        ("p2xp1", false),
        ("p1cubed", false),
    ];
    for (name, holds) in table {
        let f = entry(name).fano();
        let star = star_p_check(&f).map_err(|e| e.to_string())?;
        ensure(star.holds == holds, || format!("{name}: holds={} expected {holds}", star.holds))?;
        ensure(star.holds == star.flat_edge.is_none(), || format!("{name}: flat edge inconsistent"))?;
        let max_k = if f.dim() == 2 { 6 } else { 2 };
        let report =
            stabilization_report(&f, 2, max_k, SearchOptions::default()).map_err(|e| e.to_string())?;
        let ok = match (&report.verdict, holds) {
            (Verdict::Strict, true) => report.samples.iter().all(|(_, v)| *v > report.alpha),
            (Verdict::Stabilizes { .. }, false) => true,
            _ => false,
        };
        ensure(ok, || format!("{name}: verdict {:?}", report.verdict))?;
    }
    let f = entry("p1xp1").fano();
    let report = stabilization_report(&f, 2, 6, SearchOptions::default()).map_err(|e| e.to_string())?;
    let Verdict::Stabilizes { first_k: Some(k) } = report.verdict else {
        return Err(format!("p1xp1: no stabilizing k up to 6: {:?}", report.samples));
    };
    let v = alpha_km(&f, k, 2).map_err(|e| e.to_string())?.value;
    ensure(v == r("1/2") && report.alpha == r("1/2"), || format!("p1xp1: alpha_{{{k},2}} = {v}"))?;
    Ok(format!("7 entries; p1xp1 alpha_{{{k},2}} = 1/2 = alpha"))
}

fn orbit_counts() -> Outcome {
    let e = entry("p2");
    let p = e.fano().polytope().clone();
    let swap = orbit_decomposition(&group(&e, "swap"), &p, 1).map_err(|e| e.to_string())?.len();
    let cyc = orbit_decomposition(&group(&e, "cyclic-3"), &p, 1).map_err(|e| e.to_string())?.len();
    ensure(swap == 6 && cyc == 4, || format!("swap {swap}, cyclic-3 {cyc}"))?;
    Ok("p2 k=1: 6 orbits under swap, 4 under cyclic-3".into())
}

fn group_orders() -> Outcome {
    let expected = [("p2", 6), ("dp1", 2), ("dp2", 2), ("dp3", 12), ("p1xp1", 8)];
    for (name, order) in expected {
        let got = automorphism_group(entry(name).fano().polytope()).map_err(|e| e.to_string())?.order();
        ensure(got == order, || format!("{name}: |Aut P| = {got}, expected {order}"))?;
    }
    Ok("6, 2, 2, 12, 8".into())
}

fn k_zero_values() -> Outcome {
    let dp1 = entry("dp1");
    let a = k_zero(&dp1.fano(), &group(&dp1, "full")).map_err(|e| e.to_string())?;
    ensure(a.k0 == 2 && a.witness.denominator_lcm() == 2.into(), || format!("dp1 full: {a:?}"))?;
    let p2 = entry("p2");
    let b = k_zero(&p2.fano(), &group(&p2, "swap")).map_err(|e| e.to_string())?;
    ensure(b.k0 == 1, || format!("p2 swap: {b:?}"))?;
    for e in catalog() {
        let c = k_zero(&e.fano(), &FiniteGroup::trivial(e.rays.dim())).map_err(|e| e.to_string())?;
        ensure(c.k0 == 1, || format!("{} trivial: k0 = {}", e.name, c.k0))?;
    }
    Ok(format!("dp1 full k0=2 at {}, p2 swap k0=1 at {}", a.witness, b.witness))
}

fn symmetry_bound() -> Outcome {
    let half = r("1/2");
    for e in catalog() {
        let b = symmetry_alpha_bound(&e.fano()).map_err(|e| e.to_string())?;
        let ok = b.alpha <= half
            && (b.alpha == half) == b.centrally_symmetric
            && (b.centrally_symmetric || b.alpha <= r("1/3"));
        ensure(ok && b.holds, || format!("{}: {b:?}", e.name))?;
    }
    Ok(format!("{} entries", catalog().len()))
}

fn oracle_certification() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let names = ["p2", "dp1", "dp2", "dp3", "p1xp1", "p3", "p2xp1", "p1cubed"];
    let mut pairs = 0;
    let width = Rat::new(1, 1 << 40);
    while pairs < 30 {
        let f = entry(names.choose(&mut rng).unwrap()).fano();
        let pts: Vec<RatVec> = f.polytope().lattice_points(rng.gen_range(1..=2));
        let (nf, nu) = (rng.gen_range(1..=3), rng.gen_range(f.dim() + 1..=8));
        let fs: Vec<RatVec> = pts.choose_multiple(&mut rng, nf).cloned().collect();
        let us: Vec<RatVec> = pts.choose_multiple(&mut rng, nu).cloned().collect();
        let exact = match c_general(&fs, &us) {
            Ok(c) => c,
            Err(InvariantError::OriginNotInterior) => continue,
            Err(e) => return Err(e.to_string()),
        };
        let bracket = c_star_bisection(&fs, &us, 40).map_err(|e| e.to_string())?;
        ensure(bracket.contains(&exact) && bracket.width() == width, || {
            format!("pair {pairs}: {exact} not in [{}, {}]", bracket.lower, bracket.upper)
        })?;
        let half = &bracket.width() * &r("1/2");
        ensure((&bracket.midpoint() - &exact).abs() <= half, || format!("pair {pairs}: midpoint too far"))?;
        pairs += 1;
    }
    let mut compared = 0;
    let mut skipped = Vec::new();
    for e in catalog() {
        let f = e.fano();
        for k in 1..=3 {
            for m in 1..=4 {
                let brute = match alpha_km_bruteforce(&f, k, m, DEFAULT_CEILING) {
                    Ok(v) => v.value,
                    Err(InvariantError::CeilingExceeded { .. }) => {
                        skipped.push(format!("{}(k={k},m={m})", e.name));
                        continue;
                    }
                    Err(e) => return Err(e.to_string()),
                };
                let pruned = alpha_km(&f, k, m).map_err(|e| e.to_string())?.value;
                ensure(brute == pruned, || {
                    format!("{} k={k} m={m}: search {pruned}, brute {brute}", e.name)
                })?;
                compared += 1;
            }
        }
    }
    Ok(format!(
        "30 bisection brackets; {compared} brute-force comparisons; above the 2e6 ceiling: {}",
        skipped.join(" ")
    ))
}

fn monotone_and_limit() -> Outcome {
    for name in ["p2", "dp3"] {
        let f = entry(name).fano();
        let alpha = alpha_kg(&f, &FiniteGroup::trivial(2), 1).map_err(|e| e.to_string())?.value;
        let mut grid = Vec::new();
        for k in 1..=8 {
            let row: Vec<Rat> = (1..=3)
                .map(|m| alpha_km(&f, k, m).map(|v| v.value))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            ensure(row.windows(2).all(|w| w[0] <= w[1]), || {
                format!("{name} k={k}: not monotone in m {row:?}")
            })?;
            ensure(row[0] == alpha, || format!("{name} k={k}: alpha_{{k,1}} = {}", row[0]))?;
            grid.push(row);
        }
        for m in 1..3 {
            let col: Vec<&Rat> = grid.iter().map(|row| &row[m]).collect();
            ensure(col.iter().all(|v| **v >= alpha), || format!("{name} m={}: below alpha", m + 1))?;
            ensure(col.windows(2).all(|w| w[0] >= w[1]), || {
                format!("{name} m={}: not descending {col:?}", m + 1)
            })?;
            let gap = |v: &Rat| v - &alpha;
            ensure(*col[0] == alpha || gap(col[7]) < gap(col[0]), || {
                format!("{name} m={}: gap not shrinking", m + 1)
            })?;
        }
    }
    Ok("p2 and dp3, k <= 8, m <= 3".into())
}

fn ehrhart() -> Outcome {
    let expected = [("p2", "9/2"), ("p1xp1", "4"), ("p3", "32/3"), ("p1cubed", "8")];
    for (name, vol) in expected {
        let p = entry(name).fano().polytope().clone();
        let kmax = p.dim() as u64 + 3;
        let fit = ehrhart_fit_check(&p, kmax);
        ensure(fit.passed && fit.volume == r(vol), || format!("{name}: {fit:?}"))?;
    }
    Ok("leading coefficients 9/2, 4, 32/3, 8; two held-out counts each".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("del Pezzo alpha table", del_pezzo_table),
        ("Grassmannian sequence on p2", grassmannian_sequence),
        ("(*_P) truth table and stabilization", star_p_table),
        ("orbit counts", orbit_counts),
        ("automorphism group orders", group_orders),
        ("k0 values", k_zero_values),
        ("central symmetry bound", symmetry_bound),
        ("oracle certification", oracle_certification),
        ("monotonicity and limit", monotone_and_limit),
        ("Ehrhart fits", ehrhart),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
