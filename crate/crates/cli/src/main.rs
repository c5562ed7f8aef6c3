mod render;
mod report;
mod verify;

use std::io::{ErrorKind, Read, Write};
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use toric_alpha::catalog::lookup;
use toric_alpha::input::{GroupSpec, PolytopeInput};
use toric_alpha::invariants::{
    alpha_kg, alpha_km_for_group, alpha_via_orbits, exceeds_tian_bound, glct_kg, k_zero,
    stabilization_report, star_p_check, SearchOptions,
};
use toric_alpha::oracle::ehrhart_fit_check;
use toric_alpha::polytope::{smoothness_check, FanoPolytope};
use toric_alpha::symmetry::{automorphism_group, orbit_decomposition, FiniteGroup};

#[derive(Parser, Debug)]
#[command(name = "toric-alpha", version, about = "Exact alpha-invariants of smooth toric Fano manifolds")]
struct Cli {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Worker threads for subset searches
    #[arg(long, env = "TORIC_ALPHA_THREADS", default_value_t = 1, global = true)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// A catalog name, a JSON file, or `-` for standard input.
#[derive(Args, Debug)]
struct Source {
    #[arg(value_name = "INPUT", required_unless_present = "input")]
    positional: Option<String>,

    #[arg(long, value_name = "INPUT", conflicts_with = "positional")]
    input: Option<String>,
}

#[derive(Args, Debug)]
struct Group {
    /// "trivial", "full-aut" or "gens:[[a,b],[c,d]];..."
    #[arg(long, default_value = "trivial")]
    group: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Smoothness, integrality and the order of Aut P
    Check {
        #[command(flatten)]
        source: Source,
    },
    /// alpha_kG by the vertex and orbit formulas
    Alpha {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 1)]
        k: u64,
        #[command(flatten)]
        group: Group,
    },
    /// Grassmannian alpha_km by branch and bound
    AlphaKm {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        m: u64,
        #[command(flatten)]
        group: Group,
        /// Include search statistics
        #[arg(long)]
        stats: bool,
    },
    /// Whether the near-norm peaks only at vertices
    StarP {
        #[command(flatten)]
        source: Source,
    },
    /// Compare alpha_km with alpha as k grows
    Stabilize {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        m: u64,
        /// Largest k tried
        #[arg(long, default_value_t = 8)]
        max_k: u64,
    },
    /// Orbits of H on the lattice points of kP
    Orbits {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 1)]
        k: u64,
        #[command(flatten)]
        group: Group,
    },
    /// Lattice point counts and the fitted Ehrhart polynomial
    Ehrhart {
        #[command(flatten)]
        source: Source,
        /// Largest dilation counted; defaults to dim + 3
        #[arg(long)]
        kmax: Option<u64>,
    },
    /// Least k clearing the denominators of an alpha minimizer
    K0 {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        group: Group,
    },
    /// The alpha table over the builtin catalog
    Report,
    /// Run the oracle cross-checks
    Verify,
}

fn load(source: &Source) -> Result<(String, FanoPolytope)> {
    let arg = source.input.as_deref().or(source.positional.as_deref()).expect("clap requires one");
    if arg == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text).context("reading standard input")?;
        let input = PolytopeInput::from_json(&text)?;
        return Ok((input.name.clone().unwrap_or_else(|| "stdin".into()), input.build()?));
    }
    if let Some(entry) = lookup(arg) {
        return Ok((entry.name.to_string(), entry.fano()));
    }
    if !Path::new(arg).exists() {
        bail!("{arg:?} is neither a catalog entry nor a file");
    }
    let text = std::fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?;
    let input = PolytopeInput::from_json(&text).with_context(|| format!("parsing {arg}"))?;
    Ok((input.name.clone().unwrap_or_else(|| arg.to_string()), input.build()?))
}

fn resolve(group: &Group, f: &FanoPolytope) -> Result<FiniteGroup> {
    Ok(GroupSpec::parse(&group.group)?.resolve(f)?)
}

fn value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn with_name(name: &str, x: Value) -> Value {
    let mut out = serde_json::Map::new();
    out.insert("name".into(), json!(name));
    if let Value::Object(fields) = x {
        out.extend(fields);
    }
    Value::Object(out)
}

/// Writes to stdout; a closed pipe (`| head`) is not an error.
fn emit(text: &str) -> Result<()> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let options = SearchOptions { threads: cli.threads.max(1) };
    let out = match &cli.command {
        Command::Check { source } => {
            let (name, f) = load(source)?;
            let smooth = smoothness_check(f.rays())?;
            let integral = f.polytope().integrality_check();
            json!({
                "name": name,
                "dim": f.dim(),
                "rays": f.rays().to_int_rows(),
                "vertices": f.polytope().vertices(),
                "smooth": smooth.smooth,
                "failing_facet": smooth.failing_facet,
                "integral": integral.passed,
                "offending_vertex": integral.offending_vertex,
                "simple": f.polytope().is_simple(),
                "centrally_symmetric": f.polytope().is_centrally_symmetric(),
                "aut_order": automorphism_group(f.polytope())?.order(),
            })
        }
        Command::Alpha { source, k, group } => {
            let (name, f) = load(source)?;
            let h = resolve(group, &f)?;
            let alpha = alpha_kg(&f, &h, *k)?;
            let glct = glct_kg(&f, &h, *k)?;
            let orbit = alpha_via_orbits(&f, &h, *k)?;
            let mut out = with_name(&name, value(&alpha));
            out["glct_kG"] = value(&glct.value);
            out["orbit"] = json!({ "value": orbit.value, "witness": orbit.witness });
            out["paths_agree"] = json!(orbit.value == alpha.value);
            out["exceeds_tian_bound"] = json!(exceeds_tian_bound(&alpha.value, f.dim()));
            out
        }
        Command::AlphaKm { source, k, m, group, stats } => {
            let (name, f) = load(source)?;
            let h = resolve(group, &f)?;
            let (alpha, query) = alpha_km_for_group(&f, &h, *k, *m, options)?;
            let mut out = with_name(&name, value(&alpha));
            if *stats {
                out["stats"] = value(&query);
            }
            out
        }
        Command::StarP { source } => {
            let (name, f) = load(source)?;
            with_name(&name, value(&star_p_check(&f)?))
        }
        Command::Stabilize { source, m, max_k } => {
            let (name, f) = load(source)?;
            with_name(&name, value(&stabilization_report(&f, *m, *max_k, options)?))
        }
        Command::Orbits { source, k, group } => {
            let (name, f) = load(source)?;
            let h = resolve(group, &f)?;
            let d = orbit_decomposition(&h, f.polytope(), *k)?;
            let mut out = with_name(&name, value(&d));
            out["orbit_count"] = json!(d.len());
            out
        }
        Command::Ehrhart { source, kmax } => {
            let (name, f) = load(source)?;
            let kmax = kmax.unwrap_or(f.dim() as u64 + 3);
            with_name(&name, value(&ehrhart_fit_check(f.polytope(), kmax)))
        }
        Command::K0 { source, group } => {
            let (name, f) = load(source)?;
            let h = resolve(group, &f)?;
            with_name(&name, value(&k_zero(&f, &h)?))
        }
        Command::Report => {
            let rows = report::rows()?;
            match cli.format {
                Format::Json => emit(&(serde_json::to_string_pretty(&rows)? + "\n"))?,
                Format::Text => emit(&report::table(&rows))?,
            }
            return Ok(ExitCode::SUCCESS);
        }
        Command::Verify => {
            let checks = verify::run()?;
            match cli.format {
                Format::Json => emit(&(serde_json::to_string_pretty(&checks)? + "\n"))?,
                Format::Text => emit(&verify::tap(&checks))?,
            }
            let failed = checks.iter().any(|c| !c.ok);
            return Ok(if failed { ExitCode::from(1) } else { ExitCode::SUCCESS });
        }
    };
    match cli.format {
        Format::Json => emit(&(serde_json::to_string_pretty(&out)? + "\n"))?,
        Format::Text => emit(&render::text(&out))?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
