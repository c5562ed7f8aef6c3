use std::fmt::Write;

use anyhow::Result;
use serde::Serialize;

use toric_alpha::catalog::catalog;
use toric_alpha::invariants::{alpha_kg, alpha_via_orbits, glct_kg, k_zero, Witness};
use toric_alpha::Rat;

#[derive(Debug, Serialize)]
pub struct Row {
    pub polytope: &'static str,
    pub group: &'static str,
    pub order: usize,
    pub alpha: Rat,
    pub glct: Rat,
    pub witness: String,
    pub k0: u64,
    /// The orbit formula reproduces `alpha` for k = 1, 2, 3.
    pub orbit_paths_agree: bool,
}

pub fn rows() -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    for e in catalog() {
        let f = e.fano();
        for (label, spec) in &e.subgroups {
            let h = spec.resolve(&f)?;
            let alpha = alpha_kg(&f, &h, 1)?;
            let glct = glct_kg(&f, &h, 1)?;
            let mut agree = true;
            for k in 1..=3 {
                agree &= alpha_via_orbits(&f, &h, k)?.value == alpha.value;
            }
            let Witness::Point(u) = &alpha.witness else { unreachable!("vertex formula") };
            rows.push(Row {
                polytope: e.name,
                group: label,
                order: h.order(),
                witness: u.to_string(),
                k0: k_zero(&f, &h)?.k0,
                glct: glct.value,
                alpha: alpha.value,
                orbit_paths_agree: agree,
            });
        }
    }
    Ok(rows)
}

pub fn table(rows: &[Row]) -> String {
    let header = ["P", "H", "|H|", "alpha_kG", "glct_kG", "witness", "k0", "orbit k=1..3"];
    let cells: Vec<[String; 8]> = rows
        .iter()
        .map(|r| {
            [
                r.polytope.to_string(),
                r.group.to_string(),
                r.order.to_string(),
                r.alpha.to_string(),
                r.glct.to_string(),
                r.witness.clone(),
                r.k0.to_string(),
                if r.orbit_paths_agree { "agree" } else { "DIFFER" }.to_string(),
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    let line = |out: &mut String, row: &[&str]| {
        let padded: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        writeln!(out, "{}", padded.join("  ").trim_end()).unwrap();
    };
    line(&mut out, &header);
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    line(&mut out, &rule.iter().map(String::as_str).collect::<Vec<_>>());
    for row in &cells {
        line(&mut out, &row.iter().map(String::as_str).collect::<Vec<_>>());
    }
    out
}
