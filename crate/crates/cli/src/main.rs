//! `dcoh`: command-line front end for exact differential cohomology on cell
//! complexes and for the numerical bundle geometry.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on input errors.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dcoh_core::cells::CellComplex;
use dcoh_core::chain::Ring;
use dcoh_core::data;
use dcoh_core::diffcoh::{hexagon_exactness, homotopy_formula_report, s1_integrate_report, Check};
use dcoh_core::geom::chart::SurfaceChart;
use dcoh_core::geom::chern::closedness_check;
use dcoh_core::geom::lattice::LatticeLineBundle;
use dcoh_core::geom::{
    chern_character_form, cycle_map_homotopy_check, holonomy_report, transgress_ch, validate_curvature, vertex_path_chain, Loop,
    SmoothConnection, DEFAULT_STEPS,
};
use dcoh_core::io::{cell_complex_from_json, read_json};
use dcoh_core::tot::{descent_check, required_point_level, star_cover, underlying_at_point, Coefficients};

#[derive(Parser)]
#[command(name = "dcoh", version, about = "Exact differential cohomology on cell complexes")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum RingArg {
    Z,
    Q,
}

impl From<RingArg> for Ring {
    fn from(r: RingArg) -> Ring {
        match r {
            RingArg::Z => Ring::Z,
            RingArg::Q => Ring::Q,
        }
    }
}

#[derive(Args)]
struct Sampling {
    /// Random samples per check.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    /// Seed for all random sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Cohomology groups of a cell complex.
    Homology {
        /// Complex JSON file or bundled name.
        complex: String,
        #[arg(long, value_enum, default_value_t = RingArg::Z)]
        ring: RingArg,
        /// Degree window `lo,hi` (default: 0 to the dimension).
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
        window: Option<(i64, i64)>,
    },
    /// Sampled verification of the hexagon of differential cohomology.
    Hexagon {
        complex: String,
        #[arg(long)]
        m: i64,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Trace and matrix of the holonomy of a connection around a loop.
    Holonomy {
        connection: String,
        #[arg(name = "loop")]
        curve: String,
        #[arg(long, default_value_t = DEFAULT_STEPS)]
        steps: usize,
    },
    /// Čech descent for the closed vertex-star cover.
    Descent {
        complex: String,
        #[arg(long, value_enum, default_value_t = RingArg::Z)]
        ring: RingArg,
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
        window: Option<(i64, i64)>,
    },
    /// Homotopy formula on random cocycles over the prism.
    HomotopyFormula {
        complex: String,
        #[arg(long)]
        m: i64,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Integration over the circle factor of random reduced cocycles.
    S1Integrate {
        complex: String,
        #[arg(long)]
        m: i64,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Homotopification of truncated cochains at a point.
    UnderlyingPoint {
        #[arg(long)]
        m: i64,
        /// Truncation level of the simplicial object (default: the required level).
        #[arg(long)]
        level: Option<usize>,
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true, default_value = "-1,2")]
        window: (i64, i64),
    },
    /// Chern character form of a connection.
    Ch {
        connection: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Transgression of the Chern character along a path of connections.
    Transgress {
        path: String,
        /// Gauss–Legendre nodes.
        #[arg(long, default_value_t = 16)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Differential cocycle of a lattice line bundle.
    LatticeClass { bundle: PathBuf },
    /// Differential character of a lattice line bundle on a cycle, and the
    /// curvature compatibility on random 2-chains.
    Character {
        bundle: PathBuf,
        /// Closed vertex path such as `0,1,4,0`.
        #[arg(long, value_delimiter = ',')]
        cycle: Option<Vec<usize>>,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Compares endpoint classes of a rank-one path with its transgression on a surface chart.
    CycleMapCheck {
        path: String,
        /// Chart JSON file, or `csaszar_torus` for the built-in torus chart.
        #[arg(long, default_value = "csaszar_torus")]
        chart: String,
        /// Gauss–Legendre nodes.
        #[arg(long, default_value_t = 16)]
        steps: usize,
    },
}

fn parse_window(s: &str) -> std::result::Result<(i64, i64), String> {
    let (a, b) = s.split_once(',').ok_or("expected `lo,hi`")?;
    let lo = a.trim().parse().map_err(|e| format!("{a}: {e}"))?;
    let hi = b.trim().parse().map_err(|e| format!("{b}: {e}"))?;
    if lo > hi {
        return Err(format!("empty window {lo},{hi}"));
    }
    Ok((lo, hi))
}

/// A command result: JSON report, table text, and whether all checks passed.
struct Outcome {
    json: Value,
    table: String,
    pass: bool,
}

fn load_complex(arg: &str) -> Result<CellComplex> {
    let path = Path::new(arg);
    if path.exists() {
        return cell_complex_from_json(&read_json(path)?).with_context(|| arg.to_string());
    }
    if data::raw(arg).is_some() {
        return Ok(data::complex(arg)?);
    }
    bail!("{arg}: no such file and no bundled complex of that name")
}

/// A triangulation file with an empty facet list. It has no cells, so every group is zero.
fn is_empty_triangulation(arg: &str) -> Result<bool> {
    let path = Path::new(arg);
    if !path.exists() {
        return Ok(false);
    }
    let v = read_json(path)?;
    Ok(v.get("facets").and_then(Value::as_array).is_some_and(Vec::is_empty))
}

fn load_geometry(arg: &str) -> Result<Value> {
    let path = Path::new(arg);
    if path.exists() {
        return Ok(read_json(path)?);
    }
    if data::raw_geometry(arg).is_some() {
        return Ok(data::geometry(arg)?);
    }
    bail!("{arg}: no such file and no bundled connection or loop of that name")
}

fn load_connection(arg: &str) -> Result<SmoothConnection> {
    SmoothConnection::from_json(&load_geometry(arg)?).with_context(|| arg.to_string())
}

fn load_bundle(path: &Path) -> Result<LatticeLineBundle> {
    let v = read_json(path)?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    LatticeLineBundle::from_json(&v, |name| {
        let local = dir.join(name);
        let arg = if local.exists() { local.to_string_lossy().into_owned() } else { name.to_string() };
        load_complex(&arg).map_err(|e| dcoh_core::Error::Parse(e.to_string()))
    })
    .with_context(|| format!("{}", path.display()))
}

fn checks_table(title: &str, checks: &[Check]) -> String {
    let mut out = format!("{title}\n");
    for c in checks {
        let status = if c.ok() { "PASS" } else { "FAIL" };
        out.push_str(&format!("  {status}  {:<48} {}/{}\n", c.name, c.passed, c.samples));
        for f in &c.failures {
            out.push_str(&format!("        {f}\n"));
        }
    }
    out
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn run(command: Command) -> Result<Outcome> {
    Ok(match command {
        Command::Homology { complex, ring, window } => {
            let groups: Vec<(i64, String)> = if is_empty_triangulation(&complex)? {
                let (lo, hi) = window.unwrap_or((0, 0));
                (lo..=hi).map(|n| (n, "0".to_string())).collect()
            } else {
                let k = load_complex(&complex)?;
                let (lo, hi) = window.unwrap_or((0, k.dim() as i64));
                let c = k.cochain_complex(ring.into());
                (lo..=hi).map(|n| (n, c.homology(n).to_string())).collect()
            };
            Outcome {
                json: json!({ "degrees": groups.iter().map(|(n, g)| json!({"degree": n, "group": g})).collect::<Vec<_>>() }),
                table: groups.iter().map(|(n, g)| format!("H{n}={g}")).collect::<Vec<_>>().join(" "),
                pass: true,
            }
        }
        Command::Hexagon { complex, m, sampling } => {
            let k = load_complex(&complex)?;
            let r = hexagon_exactness(&k, m, sampling.samples as usize, sampling.seed)?;
            let title = format!("hexagon m={m} samples={} seed={}: {}", r.samples, r.seed, verdict(r.all_pass));
            Outcome { table: checks_table(&title, &r.checks), pass: r.all_pass, json: serde_json::to_value(&r)? }
        }
        Command::Holonomy { connection, curve, steps } => {
            let conn = load_connection(&connection)?;
            let l = Loop::from_json(&load_geometry(&curve)?).with_context(|| curve.clone())?;
            let r = holonomy_report(&conn, &l, steps)?;
            let mut table = format!("trace = {:.12} {:+.12}i\nmatrix:\n", r.trace[0], r.trace[1]);
            for row in &r.matrix {
                let cells: Vec<String> = row.iter().map(|z| format!("{:+.10}{:+.10}i", z[0], z[1])).collect();
                table.push_str(&format!("  {}\n", cells.join("  ")));
            }
            table.push_str(&format!(
                "steps = {}, step-halving change = {:.3e} ({}), unitarity defect = {:.3e}",
                r.steps,
                r.step_halving_change,
                verdict(r.consistent),
                r.unitarity_defect
            ));
            Outcome { pass: r.consistent, table, json: serde_json::to_value(&r)? }
        }
        Command::Descent { complex, ring, window } => {
            let k = load_complex(&complex)?;
            let (lo, hi) = window.unwrap_or((0, k.dim() as i64));
            let r = descent_check(&k, &star_cover(&k), &Coefficients::Ring(ring.into()), lo, hi)?;
            let mut table = format!("descent over {} star(s): {}\n", k.count(0), verdict(r.all_match));
            for row in &r.rows {
                table.push_str(&format!("  H{} direct={} tot={} {}\n", row.degree, row.direct, row.tot, verdict(row.matches)));
            }
            table.push_str(&format!("  canonical map is a quasi-isomorphism: {}", r.canonical_map_is_iso));
            Outcome { pass: r.all_match, table, json: serde_json::to_value(&r)? }
        }
        Command::HomotopyFormula { complex, m, sampling } => {
            let k = load_complex(&complex)?;
            let r = homotopy_formula_report(&k, m, sampling.samples as usize, sampling.seed)?;
            let title = format!("homotopy formula m={m}: {}", verdict(r.all_pass));
            Outcome { table: checks_table(&title, &r.checks), pass: r.all_pass, json: serde_json::to_value(&r)? }
        }
        Command::S1Integrate { complex, m, sampling } => {
            let k = load_complex(&complex)?;
            let r = s1_integrate_report(&k, m, sampling.samples as usize, sampling.seed)?;
            let title = format!("circle integration m={m}: {}", verdict(r.all_pass));
            Outcome { table: checks_table(&title, &r.checks), pass: r.all_pass, json: serde_json::to_value(&r)? }
        }
        Command::UnderlyingPoint { m, level, window } => {
            let (lo, hi) = window;
            let n = level.unwrap_or_else(|| required_point_level(lo, hi));
            let r = underlying_at_point(m, n, lo, hi)?;
            let pass = r.degrees.iter().all(|d| d.stable);
            let mut table = format!("point, m={m}, level {n}\n");
            for d in &r.degrees {
                table.push_str(&format!("  H{}={} {}\n", d.degree, d.group, if d.stable { "stable" } else { "UNSTABLE" }));
            }
            Outcome { pass, table: table.trim_end().into(), json: serde_json::to_value(&r)? }
        }
        Command::Ch { connection, seed } => {
            let conn = load_connection(&connection)?;
            let ch = chern_character_form(&conn);
            let closed = closedness_check(&conn, &ch, 20, seed)?;
            let curvature = validate_curvature(&conn, 20, seed)?;
            let pass = closed.closed && curvature.passed;
            let table = format!(
                "ch = {}\nconstant: {}\nclosedness residual = {:.3e} ({})\ncurvature finite-difference error = {:.3e} ({})",
                ch.describe(),
                ch.is_constant(),
                closed.residual,
                verdict(closed.closed),
                curvature.max_relative_error,
                verdict(curvature.passed)
            );
            let json = json!({
                "ch": ch.describe(),
                "constant": ch.is_constant(),
                "closedness": closed,
                "curvature_validation": curvature,
            });
            Outcome { json, table, pass }
        }
        Command::Transgress { path, steps, seed } => {
            let conn = load_connection(&path)?;
            let r = transgress_ch(&conn, steps, 16, seed)?;
            let table = format!(
                "transgression over ({}), modulo exact forms\nsampled sup-norm = {:.3e}\nchange on doubling {} nodes = {:.3e} ({})",
                r.base_coords.join(", "),
                r.sup_norm,
                r.steps,
                r.change_on_doubling,
                if r.converged { "converged" } else { "NOT CONVERGED" }
            );
            Outcome { pass: r.converged, table, json: serde_json::to_value(&r)? }
        }
        Command::LatticeClass { bundle } => {
            let l = load_bundle(&bundle)?;
            let s = l.summary()?;
            let table = format!(
                "class (c, h, omega) = {}\nunderlying class = {}\ntotal curvature = {}",
                s.class,
                s.underlying,
                s.total_curvature.as_deref().unwrap_or("n/a (no fundamental cycle)")
            );
            Outcome { pass: true, table, json: serde_json::to_value(&s)? }
        }
        Command::Character { bundle, cycle, sampling } => {
            use rand::{Rng, SeedableRng};
            let l = load_bundle(&bundle)?;
            let k = l.complex().clone();
            let mut json = json!({});
            let mut table = String::new();
            if let Some(vs) = cycle {
                let z = vertex_path_chain(&k, &vs)?;
                let chi = l.differential_character(&z)?;
                json["character"] = json!(chi.to_string());
                table.push_str(&format!("chi = {chi} (mod 1)\n"));
            }
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(sampling.seed);
            let mut passed = 0;
            for _ in 0..sampling.samples {
                let w: Vec<num_bigint::BigInt> = (0..k.count(2)).map(|_| rng.gen_range(-3i64..=3).into()).collect();
                passed += usize::from(l.cs_property_check(&w)?.holds);
            }
            let pass = passed as u64 == sampling.samples;
            json["cs_property"] = json!({"samples": sampling.samples, "passed": passed});
            table.push_str(&format!("curvature compatibility on random 2-chains: {passed}/{} {}", sampling.samples, verdict(pass)));
            Outcome { json, table, pass }
        }
        Command::CycleMapCheck { path, chart, steps } => {
            let conn = load_connection(&path)?;
            let chart = if Path::new(&chart).exists() {
                SurfaceChart::from_json(&read_json(Path::new(&chart))?, data::complex)?
            } else if chart == "csaszar_torus" {
                SurfaceChart::csaszar(&data::complex("csaszar_torus")?)?
            } else {
                return Err(anyhow!("{chart}: no such chart file"));
            };
            let r = cycle_map_homotopy_check(&conn, &chart, steps)?;
            let table = format!(
                "endpoint difference equals a(transgression): {}\nmax phase deviation before rounding = {:.3e}\nflux integrality defect = {:.3e}",
                verdict(r.comparison.equal),
                r.comparison.max_phase_deviation,
                r.integrality_defect
            );
            Outcome { pass: r.comparison.equal, table, json: serde_json::to_value(&r)? }
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&out.json).expect("reports serialize"),
                Format::Table => out.table,
            };
            // A closed pipe on stdout (for example `| head`) is not an error of the command.
            let _ = writeln!(std::io::stdout(), "{text}");
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
