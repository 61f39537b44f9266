use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use greenheight::algebra::{parse_point, render_point, Rat};
use greenheight::automorphism::{algebraic_stability_degrees, Regularity, DEFAULT_TERM_BUDGET};
use greenheight::globalheight::{canonical_heights, orbit_counting, HeightConfig, HeightReport, OrbitCount};
use greenheight::localgreen::{Direction, EscapeClass, FiltrationClass, GreenConfig, GreenValue, LocalDynamics};
use greenheight::mapfile::{load_map, MapDefinition};
use greenheight::places::{bad_place_set, BadPlaceSet, Place, Verdict};
use greenheight::{Error, ErrorKind, Result};

#[derive(Parser)]
#[command(name = "greenheight", version, about = "Canonical heights of regular polynomial automorphisms over Q")]
struct Cli {
    /// Emit JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PointArgs {
    /// Map definition file.
    file: PathBuf,
    /// Point as `a/b,c/d,...`.
    #[arg(long, allow_hyphen_values = true)]
    point: String,
}

#[derive(Subcommand)]
enum Command {
    /// Check the inverse, regularity and certificate.
    Validate { file: PathBuf },
    /// List primes of bad or undecided reduction.
    BadPrimes { file: PathBuf },
    /// Evaluate a local Green function.
    Green {
        #[command(flatten)]
        at: PointArgs,
        #[arg(long, default_value = "inf")]
        place: Place,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Maximum number of iterations.
        #[arg(long, default_value_t = 64)]
        budget: u32,
        /// Use the inverse map.
        #[arg(long)]
        inverse: bool,
    },
    /// Canonical heights and their local decomposition.
    Height {
        #[command(flatten)]
        at: PointArgs,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Filtration membership and escape classification.
    Classify {
        #[command(flatten)]
        at: PointArgs,
        #[arg(long, default_value = "inf")]
        place: Place,
        #[arg(long, default_value_t = 64)]
        budget: u32,
    },
    /// Count orbit points of height at most T.
    OrbitCount {
        #[command(flatten)]
        at: PointArgs,
        /// Comma-separated values; `e^k` means exp(k).
        #[arg(long = "T-list", value_delimiter = ',')]
        t_list: Vec<String>,
        /// Bit budget for exact iterates.
        #[arg(long, default_value_t = 1 << 27)]
        bits: u64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
}

#[derive(Serialize, Deserialize)]
struct ValidationReport {
    label: String,
    dimension: usize,
    forward: Vec<String>,
    inverse: Vec<String>,
    degree_sequence: Vec<u32>,
    regular: bool,
    d: Option<u32>,
    d_minus: Option<u32>,
    regularity: Option<Regularity>,
    certificate_degree: Option<u32>,
    message: String,
}

#[derive(Serialize, Deserialize)]
struct ClassifyReport {
    place: Place,
    point: String,
    filtration: FiltrationClass,
    escape: EscapeClass,
}

fn emit<T: Serialize>(json: bool, value: &T, table: impl FnOnce() -> String) {
    if json {
        println!("{}", serde_json::to_string_pretty(value).expect("report serialises"));
    } else {
        print!("{}", table());
    }
}

fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<String>| {
        let s: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        s.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.iter().map(|s| s.to_string()).collect());
    out += &line(widths.iter().map(|w| "-".repeat(*w)).collect());
    for r in rows {
        out += &line(r.clone());
    }
    out
}

fn point(s: &str, def: &MapDefinition) -> Result<Vec<Rat>> {
    let x = parse_point(s)?;
    if x.len() != def.spec.dimension {
        return Err(Error::DimensionMismatch {
            expected: def.spec.dimension,
            found: x.len(),
        });
    }
    Ok(x)
}

fn parse_t(s: &str) -> Result<f64> {
    let t = s.trim();
    let v = match t.strip_prefix("e^") {
        Some(k) => k.parse::<f64>().map(f64::exp),
        None => t.parse::<f64>(),
    }
    .map_err(|_| Error::Input(format!("invalid T value `{s}`")))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Input(format!("T value `{s}` must be positive and finite")))
    }
}

fn green_row(g: &GreenValue) -> Vec<String> {
    vec![
        g.place.to_string(),
        format!("{:?}", g.direction).to_lowercase(),
        format!("{:.12}", g.value),
        format!("{:.3e}", g.error_radius),
        g.certified.to_string(),
        g.iterations_used.to_string(),
    ]
}

const GREEN_HEADER: [&str; 6] = ["place", "direction", "value", "error", "certified", "iterations"];

fn validate(def: &MapDefinition, json: bool) -> Result<()> {
    let names = def.names();
    let degree_sequence = algebraic_stability_degrees(&def.forward, 3, DEFAULT_TERM_BUDGET)?;
    let mut report = ValidationReport {
        label: def.label().to_string(),
        dimension: def.spec.dimension,
        forward: def.forward.render(&names),
        inverse: def.inverse.render(&names),
        degree_sequence,
        regular: false,
        d: None,
        d_minus: None,
        regularity: None,
        certificate_degree: None,
        message: String::new(),
    };
    let outcome = def.automorphism();
    match &outcome {
        Ok((aut, cert)) => {
            report.regular = true;
            report.d = Some(aut.d());
            report.d_minus = Some(aut.d_minus());
            report.regularity = Some(aut.regularity().clone());
            report.certificate_degree = Some(cert.m);
            report.message = format!("regular, d={}, d₋={}", aut.d(), aut.d_minus());
        }
        Err(e) => {
            report.message = match e {
                Error::Validation(m) => m.clone(),
                other => other.to_string(),
            };
        }
    }
    emit(json, &report, || {
        let mut s = format!("{}: {}\n", report.label, report.message);
        s += &format!("  f   = ({})\n", report.forward.join(", "));
        s += &format!("  f^-1 = ({})\n", report.inverse.join(", "));
        let seq: Vec<String> = report.degree_sequence.iter().map(u32::to_string).collect();
        s += &format!("  deg f^n, n = 1..3: {}\n", seq.join(", "));
        if let Some(Regularity::Regular { i_plus, i_minus }) = &report.regularity {
            s += &format!("  I+ = {i_plus}\n  I- = {i_minus}\n");
        }
        if let Some(m) = report.certificate_degree {
            s += &format!("  certificate degree m = {m}\n");
        }
        s
    });
    outcome.map(|_| ())
}

fn bad_primes(def: &MapDefinition, json: bool) -> Result<()> {
    let (aut, cert) = def.automorphism()?;
    let set: BadPlaceSet = bad_place_set(&aut, &cert)?;
    emit(json, &set, || {
        let rows: Vec<Vec<String>> = set
            .entries
            .iter()
            .map(|r| {
                let (verdict, reason) = match &r.verdict {
                    Verdict::Good => ("Good".to_string(), String::new()),
                    Verdict::Bad { reason } => ("Bad".to_string(), reason.clone()),
                    Verdict::Undecided { reason } => ("Undecided".to_string(), reason.clone()),
                };
                vec![r.prime.to_string(), verdict, reason]
            })
            .collect();
        table(&["p", "verdict", "reason"], &rows)
    });
    Ok(())
}

fn height_table(r: &HeightReport) -> String {
    let mut s = format!("point {}  (weil height {:.12})\n", r.point, r.weil_height);
    let rows: Vec<Vec<String>> = [
        ("h_plus", r.h_plus),
        ("h_minus", r.h_minus),
        ("h_f", r.h_f),
        ("h_tilde", r.h_tilde),
    ]
    .iter()
    .map(|(n, c)| vec![n.to_string(), format!("{:.12}", c.value), format!("{:.3e}", c.radius)])
    .collect();
    s += &table(&["height", "value", "radius"], &rows);
    s += "\n";
    let rows: Vec<Vec<String>> = r
        .per_place
        .iter()
        .map(|p| {
            vec![
                p.place.to_string(),
                format!("{:.12}", p.forward.value),
                format!("{:.3e}", p.forward.error_radius),
                format!("{:.12}", p.backward.value),
                format!("{:.3e}", p.backward.error_radius),
            ]
        })
        .collect();
    s += &table(&["place", "G_f", "error", "G_f^-1", "error"], &rows);
    if let Some(d) = &r.direct {
        s += &format!(
            "\ndirect limit: h(f^{} x)/d^n = {:.12} (diff {:.3e}), h(f^-{} x)/d-^n = {:.12} (diff {:.3e})\n",
            d.forward_iterations,
            d.h_plus,
            d.discrepancy_plus,
            d.backward_iterations,
            d.h_minus,
            d.discrepancy_minus
        );
    }
    s
}

fn orbit_table(c: &OrbitCount) -> String {
    let mut s = format!(
        "h_plus = {:.12}, h_minus = {:.12}, orbit height = {:.12}\n",
        c.h_plus.value, c.h_minus.value, c.orbit_height
    );
    let rows: Vec<Vec<String>> = c
        .rows
        .iter()
        .map(|r| {
            vec![
                format!("{:.6}", r.log_t),
                r.exact_count.to_string(),
                format!("{:.6}", r.predicted),
                format!("{:+.6}", r.residual),
                if r.truncated { "yes".into() } else { String::new() },
            ]
        })
        .collect();
    s += &table(&["log T", "count", "predicted", "residual", "truncated"], &rows);
    s
}

fn run(cli: Cli) -> Result<()> {
    let json = cli.json;
    match cli.command {
        Command::Validate { file } => validate(&load_map(&file)?, json),
        Command::BadPrimes { file } => bad_primes(&load_map(&file)?, json),
        Command::Green {
            at,
            place,
            tol,
            budget,
            inverse,
        } => {
            let def = load_map(&at.file)?;
            let x = point(&at.point, &def)?;
            let (aut, cert) = def.automorphism()?;
            let cfg = GreenConfig {
                tolerance: tol,
                max_iterations: budget,
                ..GreenConfig::default()
            };
            let dir = if inverse { Direction::Backward } else { Direction::Forward };
            let g = LocalDynamics::new(&aut, &cert, place).green(&x, dir, &cfg);
            match &g {
                Ok(v) => emit(json, v, || table(&GREEN_HEADER, &[green_row(v)])),
                Err(Error::GreenBudget { partial }) if !json => {
                    print!("{}", table(&GREEN_HEADER, &[green_row(partial)]));
                }
                Err(_) => {}
            }
            g.map(|_| ())
        }
        Command::Height { at, tol } => {
            let def = load_map(&at.file)?;
            let x = point(&at.point, &def)?;
            let (aut, cert) = def.automorphism()?;
            let r = canonical_heights(&aut, &cert, &x, &HeightConfig::with_tolerance(tol))?;
            emit(json, &r, || height_table(&r));
            Ok(())
        }
        Command::Classify { at, place, budget } => {
            let def = load_map(&at.file)?;
            let x = point(&at.point, &def)?;
            let (aut, cert) = def.automorphism()?;
            let local = LocalDynamics::new(&aut, &cert, place);
            let filtration = local.strict_filtration().classify(&x)?;
            let escape = local.classify_escape(&x, budget)?;
            let r = ClassifyReport {
                place,
                point: render_point(&x),
                filtration,
                escape,
            };
            emit(json, &r, || {
                let part = if filtration.in_b {
                    "B"
                } else if filtration.in_uplus {
                    "U+"
                } else {
                    "U-"
                };
                table(
                    &["place", "point", "filtration", "forward", "backward", "decided at"],
                    &[vec![
                        place.to_string(),
                        r.point.clone(),
                        part.into(),
                        format!("{:?}", escape.forward),
                        format!("{:?}", escape.backward),
                        escape.decided_at_iteration.to_string(),
                    ]],
                )
            });
            Ok(())
        }
        Command::OrbitCount {
            at,
            t_list,
            bits,
            tol,
        } => {
            let def = load_map(&at.file)?;
            let x = point(&at.point, &def)?;
            if t_list.is_empty() {
                return Err(Error::Input("--T-list is required".into()));
            }
            let ts = t_list.iter().map(|s| parse_t(s)).collect::<Result<Vec<f64>>>()?;
            let (aut, cert) = def.automorphism()?;
            let cfg = HeightConfig::with_tolerance(tol).without_direct();
            let c = orbit_counting(&aut, &cert, &x, &ts, bits, &cfg)?;
            emit(json, &c, || orbit_table(&c));
            Ok(())
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e.kind() {
        ErrorKind::Input => 2,
        ErrorKind::Undecided | ErrorKind::Resource => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(_) => {
            eprintln!("error: internal failure");
            ExitCode::from(4)
        }
    }
}
