use std::f64::consts::PI;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use dupin::diagram::{emit_polygon_svg, emit_radius_table, SvgOptions};
use dupin::suites::Suite;
use dupin::{emit_report, report, run_suite, CliError, ReportFormat, Status};
use dupin_core::derivatives::{build_system, critical_pinning, kernel_analysis, sign_certificates};
use dupin_core::isoparametric::IsoparametricFamily;
use dupin_core::polygon::oracle::{g4_oracle, g6_oracle};
use dupin_core::polygon::{
    build_parallel_polygon, constraint_search, g4_residual, link_check, polygon_lie_curvature,
    psi_values, solve_g4_normalized, solve_g6_normalized, AngleGaps, Constraint, CurvaturePattern, SearchConfig,
};

#[derive(Parser)]
#[command(name = "dupin", version, about = "Dupin hypersurfaces: Lie invariants, isoparametric families and geodesic polygons")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and write a report.
    Verify {
        /// One of lie_invariance, cross_ratio_identity, isoparametric_formulas,
        /// angle_solvers, dji_kernels, sign_certificates, isometry_reduction,
        /// constraint_search, all.
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Replaces every per-case tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Report file; the report goes to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
    },
    /// Invariants of one member of an isoparametric family.
    Family {
        #[arg(long)]
        g: usize,
        #[arg(long, default_value_t = 1)]
        m1: u32,
        #[arg(long, default_value_t = 1)]
        m2: u32,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        theta: f64,
    },
    /// The parallel geodesic polygon at `theta`, optionally drawn.
    Polygon {
        #[arg(long)]
        g: usize,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Solve the normalized angle systems.
    SolveAngles {
        #[arg(long)]
        g: usize,
        /// Also scan for every zero on a grid of this many points per axis.
        #[arg(long)]
        oracle: Option<usize>,
    },
    /// Search for non-parallel polygons satisfying constraints.
    Search {
        #[arg(long)]
        g: usize,
        /// Comma separated subset of cmc, csc, clc.
        #[arg(long, value_delimiter = ',', default_value = "cmc")]
        constraints: Vec<String>,
        #[arg(long, default_value_t = 25)]
        grid: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        m1: u32,
        #[arg(long, default_value_t = 1)]
        m2: u32,
    },
    /// Kernel of the derivative system and the sign certificates.
    Dji {
        #[arg(long)]
        g: usize,
        #[arg(long, value_delimiter = ',', default_value = "cmc,clc")]
        constraints: Vec<String>,
        #[arg(long, default_value_t = 1)]
        m1: u32,
        #[arg(long, default_value_t = 1)]
        m2: u32,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        theta: f64,
    },
}

fn check_g(g: usize, allowed: &[usize], expected: &'static str) -> Result<(), CliError> {
    if allowed.contains(&g) {
        Ok(())
    } else {
        Err(CliError::Range { name: "g", value: g.to_string(), expected })
    }
}

fn check_theta(g: usize, theta: f64) -> Result<(), CliError> {
    let b = PI / (2.0 * g as f64);
    if theta.is_finite() && theta.abs() < b {
        Ok(())
    } else {
        Err(CliError::Range { name: "theta", value: theta.to_string(), expected: "|theta| < pi/(2g)" })
    }
}

fn check_multiplicities(m1: u32, m2: u32) -> Result<(), CliError> {
    for (name, m) in [("m1", m1), ("m2", m2)] {
        if m == 0 {
            return Err(CliError::Range { name, value: m.to_string(), expected: "a positive integer" });
        }
    }
    Ok(())
}

fn parse_constraints(names: &[String]) -> Result<Vec<Constraint>, CliError> {
    names
        .iter()
        .map(|s| {
            Constraint::parse(s.trim()).ok_or_else(|| CliError::Range {
                name: "constraints",
                value: s.clone(),
                expected: "cmc, csc or clc",
            })
        })
        .collect()
}

fn gaps_json(gaps: &AngleGaps) -> Value {
    json!({ "odd": gaps.odd(), "even": gaps.even() })
}

fn patterns(g: usize) -> Vec<(String, CurvaturePattern)> {
    match g {
        4 => vec![
            ("adjacent".into(), CurvaturePattern::OCTAGON_ADJACENT),
            ("diagonal".into(), CurvaturePattern::OCTAGON_DIAGONAL),
        ],
        6 => [3, 4, 6].iter().map(|h| (format!("h={h}"), CurvaturePattern::dodecagon(*h))).collect(),
        _ => Vec::new(),
    }
}

fn print(v: &Value) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{}", serde_json::to_string_pretty(v)?) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn verify(suite: &str, seed: u64, tol: Option<f64>, out: Option<PathBuf>, format: ReportFormat) -> Result<bool, CliError> {
    let suite = Suite::parse(suite)?;
    if let Some(t) = tol {
        if !(t.is_finite() && t >= 0.0) {
            return Err(CliError::Range { name: "tol", value: t.to_string(), expected: "a finite non-negative number" });
        }
    }
    let cases = run_suite(suite, seed, tol);
    let count = |s: Status| cases.iter().filter(|c| c.status == s).count();
    eprintln!(
        "{}: {} cases, {} pass, {} fail, {} error",
        suite.name(),
        cases.len(),
        count(Status::Pass),
        count(Status::Fail),
        count(Status::Error)
    );
    for c in cases.iter().filter(|c| !c.passed()) {
        eprintln!("  {:?} {} residual {:?} tolerance {:e}", c.status, c.case_id, c.residual, c.tolerance);
    }
    match out {
        Some(path) => emit_report(&cases, seed, &path, format)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            match format {
                ReportFormat::Json => report::write_json(&dupin::Report::new(seed, cases.clone()), &mut stdout)?,
                ReportFormat::Csv => report::write_csv(&cases, &mut stdout)?,
            }
            let _ = writeln!(stdout);
        }
    }
    Ok(cases.iter().all(|c| c.passed()))
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Verify { suite, seed, tol, out, format } => verify(&suite, seed, tol, out, format),
        Command::Family { g, m1, m2, theta } => {
            check_g(g, &[1, 2, 3, 4, 6], "one of 1, 2, 3, 4, 6")?;
            check_multiplicities(m1, m2)?;
            check_theta(g, theta)?;
            let f = IsoparametricFamily::new(g, m1, m2, theta)?;
            let inv = f.scalar_curvature();
            print(&json!({
                "g": g, "m1": m1, "m2": m2, "theta": theta,
                "radii": f.radii(),
                "principal_curvatures": f.principal_curvatures(),
                "multiplicities": f.multiplicities(),
                "dimension": inv.dimension,
                "mean_curvature": inv.mean_curvature,
                "second_moment": inv.second_moment,
                "scalar_curvature": inv.scalar_curvature,
                "specialized_scalar_curvature": inv.specialized_scalar_curvature,
            }))?;
            Ok(true)
        }
        Command::Polygon { g, theta, svg, csv } => {
            check_g(g, &[1, 2, 3, 4, 6], "one of 1, 2, 3, 4, 6")?;
            check_theta(g, theta)?;
            let poly = build_parallel_polygon(g, theta)?;
            if let Some(path) = &svg {
                emit_polygon_svg(&poly, path, &SvgOptions::default())?;
            }
            if let Some(path) = &csv {
                emit_radius_table(&poly, path)?;
            }
            let links = link_check(&poly);
            let mut lie = serde_json::Map::new();
            for (name, p) in patterns(g) {
                let v: Result<Vec<f64>, _> = (1..=poly.vertex_count()).map(|t| polygon_lie_curvature(&poly, t, p)).collect();
                lie.insert(name, json!(v?));
            }
            print(&json!({
                "g": g, "theta": theta,
                "vertex_angles": poly.vertex_angles(),
                "radius_table": poly.radius_table(),
                "links_hold": links.holds,
                "link_residual": links.max_residual,
                "lie_curvatures": lie,
            }))?;
            Ok(links.holds)
        }
        Command::SolveAngles { g, oracle } => {
            check_g(g, &[4, 6], "4 or 6")?;
            let gaps = if g == 4 { solve_g4_normalized() } else { solve_g6_normalized() };
            let residual = if g == 4 {
                g4_residual(&gaps)?.norm()
            } else {
                psi_values(&gaps)?.iter().map(|p| (p + 1.0).abs()).fold(0.0, f64::max)
            };
            let mut out = json!({ "g": g, "gaps": gaps_json(&gaps), "residual": residual });
            if let Some(res) = oracle {
                if res < 3 {
                    return Err(CliError::Range { name: "oracle", value: res.to_string(), expected: "at least 3" });
                }
                let rep = if g == 4 { g4_oracle(res) } else { g6_oracle(res) };
                out["oracle"] = json!({
                    "resolution": rep.resolution,
                    "local_minima": rep.local_minima,
                    "zeros": rep.zeros.len(),
                    "unique": rep.is_unique(),
                });
            }
            print(&out)?;
            Ok(true)
        }
        Command::Search { g, constraints, grid, seed, m1, m2 } => {
            check_g(g, &[3, 4, 6], "3, 4 or 6")?;
            check_multiplicities(m1, m2)?;
            if grid == 0 {
                return Err(CliError::Range { name: "grid", value: grid.to_string(), expected: "a positive integer" });
            }
            let cs = parse_constraints(&constraints)?;
            let rep = constraint_search(&SearchConfig::new(g, &cs, grid, seed).with_multiplicities(m1, m2))?;
            let survivors: Vec<Value> = rep
                .survivors
                .iter()
                .map(|s| {
                    json!({
                        "start": s.start,
                        "theta11": s.theta11,
                        "gaps": gaps_json(&s.gaps),
                        "residual": s.residual,
                        "deviation": s.deviation,
                        "parallel": s.parallel,
                    })
                })
                .collect();
            print(&json!({
                "g": g,
                "constraints": rep.config.constraints.iter().map(|c| c.name()).collect::<Vec<_>>(),
                "grid": grid, "seed": seed,
                "starts": rep.starts,
                "converged": rep.converged,
                "non_parallel": rep.non_parallel(),
                "survivors": survivors,
            }))?;
            Ok(rep.all_parallel())
        }
        Command::Dji { g, constraints, m1, m2, theta } => {
            check_g(g, &[4, 6], "4 or 6")?;
            check_multiplicities(m1, m2)?;
            check_theta(g, theta)?;
            let cs = parse_constraints(&constraints)?;
            let pcs = IsoparametricFamily::new(g, m1, m2, theta)?.principal_curvatures();
            let sys = build_system(g, &pcs, m1, m2, &cs, &critical_pinning(g))?;
            let k = kernel_analysis(&sys);
            let certs = sign_certificates(g, &pcs)?;
            let all_hold = certs.iter().all(|c| c.holds());
            print(&json!({
                "g": g, "m1": m1, "m2": m2, "theta": theta,
                "principal_curvatures": pcs,
                "rows": sys.row_names(),
                "unknowns": k.unknowns,
                "effective_unknowns": sys.effective_unknowns(),
                "rank": k.rank,
                "kernel_dimension": k.dimension,
                "smallest_singular_value": k.singular_values.iter().cloned().fold(f64::INFINITY, f64::min),
                "certificates": certs.iter().map(|c| json!({
                    "name": c.name, "value": c.value, "claimed": c.claimed.name(), "holds": c.holds(),
                })).collect::<Vec<_>>(),
            }))?;
            Ok(k.dimension == 0 && all_hold)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
