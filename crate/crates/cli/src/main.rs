use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use domebound::bendbounds::c1;
use domebound::geodesiclab::{
    check_hill_bound, horocycle_polygon, roundness, run_trials, TrialKind, TrialSummary,
};
use domebound::pipeline::{
    compute_bound, compute_bound_artifacts, emit_gcurve, gcurve_grid, gcurve_svg, horocycle_bound, optimize_l_with,
    polygon_svg, trajectory_svg, trajectory_table, BoundResult, RunDocument, DEFAULT_QUAD, DEFAULT_SAMPLES,
    INVERSE_TOL,
};
use domebound::specialfn::{solve_tangent, DEFAULT_TANGENT_TOL};
use domebound::{Complex64, Error};

#[derive(Parser)]
#[command(name = "domebound", version, about = "Certified dilatation bound for the domain-to-dome map")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tangent-line quantities c(L), Θ(L) and G(L).
    Gfunc {
        #[arg(long = "L", visible_alias = "l")]
        l: f64,
    },
    /// Distance bound H(L) and dilatation bound K(L) with its certificate.
    Bound {
        #[arg(long = "L", visible_alias = "l")]
        l: f64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_QUAD)]
        quad: usize,
        /// Print the full result document.
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        /// Print `key,value` rows.
        #[arg(long)]
        csv: bool,
    },
    /// Coarse scan of K(L) followed by golden-section refinement.
    Optimize {
        #[arg(long, default_value_t = 1.0)]
        min: f64,
        #[arg(long, default_value_t = 1.9)]
        max: f64,
        #[arg(long, default_value_t = 19)]
        steps: usize,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_QUAD)]
        quad: usize,
    },
    /// Table of G(L) against 2 asin(tanh(L/2)) on (0, 2 asinh 1].
    Gcurve {
        #[arg(long, default_value_t = 200)]
        points: usize,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Print the result document instead of the table.
        #[arg(long)]
        json: bool,
    },
    /// Staircase region with the two marked points.
    Polygon {
        #[arg(long = "L", visible_alias = "l")]
        l: f64,
        #[arg(long)]
        svg: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        /// Half width of the drawn window.
        #[arg(long, default_value_t = 12.0)]
        view: f64,
    },
    /// Randomized checks on piecewise geodesics and the horocycle polygon.
    Geodesic {
        #[command(subcommand)]
        check: GeodesicCheck,
    },
}

#[derive(Subcommand)]
enum GeodesicCheck {
    /// Angle bound θ⁺ ≤ Θ(L) + G(L).
    Hill(TrialArgs),
    /// Sampled self-separation of curves.
    Embed(TrialArgs),
    /// Lower bilipschitz ratio sin²(B/2).
    Bilip(TrialArgs),
    /// Distance preservation of the planar unrolling.
    Unroll(TrialArgs),
    /// Bend angles and roundness of the horocycle polygon.
    Horo {
        #[arg(long = "L", visible_alias = "l", default_value_t = 1.0)]
        l: f64,
        #[arg(long, default_value_t = 20)]
        points: usize,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Write the traced coordinates as a table.
        #[arg(long)]
        table: Option<PathBuf>,
    },
}

#[derive(Args)]
struct TrialArgs {
    #[arg(long = "L", visible_alias = "l", default_value_t = 1.0)]
    l: f64,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = err.downcast_ref::<Error>().map_or(1, Error::exit_code);
            ExitCode::from(code as u8)
        }
    }
}

fn command_line() -> String {
    std::env::args().collect::<Vec<_>>().join(" ")
}

fn write_file(path: &Path, contents: &str) -> anyhow::Result<()> {
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn run(command: Command) -> anyhow::Result<()> {
    match command {
        Command::Gfunc { l } => {
            let t = solve_tangent(l, DEFAULT_TANGENT_TOL)?;
            let doc = RunDocument::new(command_line(), json!({ "L": l, "tol": DEFAULT_TANGENT_TOL }), &t);
            println!("{}", doc.to_json());
        }
        Command::Bound { l, samples, quad, json, csv } => {
            let r = compute_bound(l, samples, quad)?;
            if json {
                let inputs = json!({ "L": l, "samples_per_branch": samples, "quad_order": quad, "inverse_tol": INVERSE_TOL });
                println!("{}", RunDocument::new(command_line(), inputs, &r).to_json());
            } else if csv {
                print!("{}", bound_csv(&r));
            } else {
                println!("L = {}", r.L);
                println!("G(L) = {:.15}", r.G_value);
                println!("c1(L) = {:.12}", r.c1_value);
                println!("H(L) = {:.15}", r.H);
                println!("K(L) = {:.15}", r.K);
                println!(
                    "certificate: {:.6} <= {:.15} <= {:.6}",
                    r.certificate.lower_bound, r.certificate.value, r.certificate.upper_bound
                );
                println!("map accuracy = {:.3e}", r.sc_accuracy);
            }
        }
        Command::Optimize { min, max, steps, tol, samples, quad } => {
            let opt = optimize_l_with(min, max, steps, tol, samples, quad)?;
            for w in &opt.warnings {
                log::warn!("{w}");
            }
            let inputs = json!({
                "L_min": min, "L_max": max, "coarse_steps": steps, "tol": tol,
                "samples_per_branch": samples, "quad_order": quad,
            });
            println!("{}", RunDocument::new(command_line(), inputs, &opt).to_json());
        }
        Command::Gcurve { points, svg, json } => {
            let curve = emit_gcurve(&gcurve_grid(points))?;
            if let Some(path) = &svg {
                write_file(path, &gcurve_svg(&curve))?;
            }
            if json {
                println!("{}", RunDocument::new(command_line(), json!({ "points": points }), &curve).to_json());
            } else {
                print!("{}", curve.to_table());
            }
            if !curve.dominated {
                return Err(Error::Certificate("G(L) reaches the horocycle value on the grid".into()).into());
            }
        }
        Command::Polygon { l, svg, samples, view } => {
            let art = compute_bound_artifacts(l, samples, DEFAULT_QUAD)?;
            let marked = [Complex64::new(0.0, 0.0), Complex64::new(0.0, art.result.c1_value)];
            write_file(&svg, &polygon_svg(&art.polygon, &art.step, &marked, view))?;
            let inputs = json!({ "L": l, "samples_per_branch": samples, "view": view });
            println!("{}", RunDocument::new(command_line(), inputs, &art.result).to_json());
        }
        Command::Geodesic { check } => run_geodesic(check)?,
    }
    Ok(())
}

fn bound_csv(r: &BoundResult) -> String {
    let rows = [
        ("L", r.L),
        ("G", r.G_value),
        ("c1", r.c1_value),
        ("half_width", r.step_stats.half_width),
        ("intervals", r.step_stats.interval_count as f64),
        ("vertices", r.polygon_vertices as f64),
        ("sc_accuracy", r.sc_accuracy),
        ("H", r.H),
        ("K", r.K),
        ("H_lower", r.certificate.lower_bound),
        ("H_upper", r.certificate.upper_bound),
    ];
    let mut out = String::from("key,value\n");
    for (k, v) in rows {
        out.push_str(&format!("{k},{v:.17e}\n"));
    }
    out
}

fn run_geodesic(check: GeodesicCheck) -> anyhow::Result<()> {
    let (kind, args) = match check {
        GeodesicCheck::Hill(a) => (TrialKind::Hill, a),
        GeodesicCheck::Embed(a) => (TrialKind::Embedding, a),
        GeodesicCheck::Bilip(a) => (TrialKind::Bilipschitz, a),
        GeodesicCheck::Unroll(a) => (TrialKind::Unroll, a),
        GeodesicCheck::Horo { l, points, svg, table } => return run_horocycle(l, points, svg, table),
    };
    let summary = run_trials(kind, args.l, args.seed, args.trials)?;
    let inputs = json!({ "L": args.l, "seed": args.seed, "trials": args.trials });
    println!("{}", RunDocument::new(command_line(), inputs, &summary).to_json());
    trial_verdict(&summary)
}

fn trial_verdict(summary: &TrialSummary) -> anyhow::Result<()> {
    if summary.passed() {
        return Ok(());
    }
    let detail = summary.first_failure.clone().unwrap_or_default();
    Err(Error::Certificate(format!("{} of {} trials failed; {detail}", summary.failures, summary.trials)).into())
}

fn run_horocycle(l: f64, points: usize, svg: Option<PathBuf>, table: Option<PathBuf>) -> anyhow::Result<()> {
    let gamma = horocycle_polygon(l, points)?;
    let expected = horocycle_bound(l);
    let angle_error = gamma.bend_angles.iter().map(|a| (a - expected).abs()).fold(0.0, f64::max);
    let rho = roundness(&gamma, l);
    // The angle bound only applies below G(L); the report records whether it does.
    let hill = check_hill_bound(&gamma, l)?;
    if let Some(path) = &svg {
        write_file(path, &trajectory_svg(&gamma, 400))?;
    }
    if let Some(path) = &table {
        write_file(path, &trajectory_table(&gamma, 400))?;
    }
    let result = json!({
        "bend_angle_formula": expected,
        "max_bend_angle_error": angle_error,
        "roundness": rho,
        "c1": c1(l).ok(),
        "hill": hill,
    });
    let inputs = json!({ "L": l, "points": points });
    println!("{}", RunDocument::new(command_line(), inputs, result).to_json());
    if angle_error > 1e-12 || (rho - expected).abs() > 1e-12 {
        return Err(Error::Certificate(format!("horocycle angles off by {angle_error:e}")).into());
    }
    Ok(())
}
