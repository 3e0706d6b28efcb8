use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use detlab::arith::{s_count_and_sum, Rational};
use detlab::cover::{build_cover, choose_degrees, delta_exponent, exponent_report, verify_cover, CoverCertificate};
use detlab::curve::{enumerate_points, Curve, Mode};
use detlab::experiments::{fit_exponent, parse_grid, read_csv, render_svg, run_series, write_csv};
use detlab::jarnik::{
    collinear_windows, collinearity_window_check, is_collinear, jarnik_constant_bracket, jarnik_extremal, jarnik_upper_check,
    n_two_thirds_lower,
};

#[derive(Parser)]
#[command(name = "detlab", version, about = "Rational and lattice points on curves: counts, covers, fits")]
struct Cli {
    /// Machine-readable JSON on stdout and stderr.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct CurveArgs {
    /// Curve spec, e.g. `poly:0,0,1@[0,1]`, `implicit:x*y-1@[1/3,3]`, `pow:2`.
    #[arg(long)]
    curve: Curve,
    /// `lattice` or `height`.
    #[arg(long)]
    mode: Mode,
}

#[derive(Subcommand)]
enum Cmd {
    /// Size and x-sum of the primitive vectors with x + y <= X.
    Sx {
        #[arg(long)]
        x_max: u64,
    },
    /// Number of target points for each N.
    Count {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, num_args = 1.., required = true)]
        n: Vec<u64>,
        /// Also list the points.
        #[arg(long)]
        list: bool,
    },
    /// Counts over a grid of N, written as `n,count` CSV.
    Series {
        #[command(flatten)]
        curve: CurveArgs,
        /// `a:b:factor` or a comma list.
        #[arg(long)]
        grid: String,
        /// CSV destination; stdout if absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Log-log least squares fit of a CSV series.
    Fit {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Build a (d,e)-curve cover certificate.
    Cover {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        e: u32,
        /// Initial number of pieces; ceil(N^delta) if absent.
        #[arg(long)]
        pieces: Option<usize>,
        /// Certificate destination; stdout if absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a cover certificate from scratch.
    Verify {
        #[arg(long)]
        cert: PathBuf,
    },
    /// Extremal convex chain and the constant 3 pi^(-2/3).
    Jarnik {
        #[arg(long)]
        n: u64,
        /// Window constant for the collinearity check.
        #[arg(long)]
        window: Option<Rational>,
        #[arg(long, default_value = "1/10")]
        slack: Rational,
        /// Curve for the window check.
        #[arg(long, default_value = "poly:0,0,1@[0,1]")]
        curve: Curve,
    },
    /// The covering exponent delta(d,e).
    Exponent {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        e: u32,
        #[arg(long)]
        mode: Mode,
    },
    /// Smallest (d,e) with delta(d,e) < target.
    Choose {
        #[arg(long)]
        target: Rational,
        #[arg(long)]
        mode: Mode,
        #[arg(long)]
        d: Option<u32>,
    },
    /// Log-log SVG plot of a CSV series with its fitted line.
    Plot {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        title: Option<String>,
    },
}

enum Failure {
    /// Bad arguments, unreadable input, impossible requests.
    Usage(String),
    /// A check ran and did not pass.
    Check(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Check(_) => 1,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

struct Out {
    json: bool,
}

impl Out {
    fn emit<T: Serialize>(&self, value: &T, text: impl FnOnce() -> String) {
        if self.json {
            println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
        } else {
            print!("{}", text());
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            if std::env::args().any(|a| a == "--json") && code != 0 {
                eprintln!("{}", json!({"error": {"kind": "usage", "message": e.to_string().trim()}}));
                return ExitCode::from(2);
            }
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let result = configure_threads().and_then(|()| run(&cli));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (kind, msg) = match &f {
                Failure::Usage(m) => ("usage", m),
                Failure::Check(m) => ("check", m),
            };
            if cli.json {
                eprintln!("{}", json!({"error": {"kind": kind, "message": msg}}));
            } else {
                eprintln!("error: {msg}");
            }
            ExitCode::from(f.code())
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("DETLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| usage(format!("DETLAB_THREADS must be a non-negative integer, got {v:?}")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(usage)?;
    }
    Ok(())
}

fn open(path: &Path) -> Result<BufReader<File>, Failure> {
    File::open(path).map(BufReader::new).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path).map(BufWriter::new).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let out = Out { json: cli.json };
    match &cli.cmd {
        Cmd::Sx { x_max } => {
            if *x_max == 0 {
                return Err(usage("--x-max must be at least 1"));
            }
            let s = s_count_and_sum(*x_max);
            let pi2 = std::f64::consts::PI.powi(2);
            let x = *x_max as f64;
            let count_ratio = s.count as f64 * pi2 / (3.0 * x * x);
            let sum_ratio = s.sum_x as f64 * pi2 / (x * x * x);
            let v = json!({"x_max": x_max, "count": s.count, "sum_x": s.sum_x.to_string(), "count_ratio": count_ratio, "sum_ratio": sum_ratio});
            out.emit(&v, || {
                format!(
                    "X = {x_max}\ncount = {}\nsum_x = {}\ncount*pi^2/(3X^2) = {count_ratio:.6}\nsum_x*pi^2/X^3 = {sum_ratio:.6}\n",
                    s.count, s.sum_x
                )
            });
        }
        Cmd::Count { curve, n, list } => {
            let mut rows = Vec::new();
            for &n in n {
                let pts = enumerate_points(&curve.curve, n, curve.mode).map_err(|e| usage(format!("at N = {n}: {e}")))?;
                rows.push((n, pts));
            }
            let v: Vec<_> = rows
                .iter()
                .map(|(n, pts)| {
                    let mut o = json!({"n": n, "count": pts.len()});
                    if *list {
                        o["points"] = json!(pts);
                    }
                    o
                })
                .collect();
            out.emit(&v, || {
                let mut s = String::new();
                for (n, pts) in &rows {
                    s += &format!("{n}\t{}\n", pts.len());
                    if *list {
                        for p in pts {
                            s += &format!("  {p}\n");
                        }
                    }
                }
                s
            });
        }
        Cmd::Series { curve, grid, out: dest } => {
            let grid = parse_grid(grid).map_err(usage)?;
            let series = run_series(&curve.curve, curve.mode, &grid).map_err(usage)?;
            match dest {
                Some(path) => {
                    write_csv(&series.samples, create(path)?).map_err(usage)?;
                    out.emit(&series, || format!("{} samples written to {}\n", series.samples.len(), path.display()));
                }
                None if cli.json => out.emit(&series, String::new),
                None => write_csv(&series.samples, io::stdout().lock()).map_err(usage)?,
            }
        }
        Cmd::Fit { input } => {
            let samples = read_csv(open(input)?).map_err(usage)?;
            let f = fit_exponent(&samples).map_err(usage)?;
            out.emit(&f, || format!("slope = {:.6}\nintercept = {:.6}\nr_squared = {:.6}\n", f.slope, f.intercept, f.r_squared));
        }
        Cmd::Cover { curve, n, d, e, pieces, out: dest } => {
            let cert = build_cover(&curve.curve, *n, *d, *e, curve.mode, *pieces).map_err(usage)?;
            let delta = delta_exponent(*d, *e, curve.mode).map_err(usage)?;
            let count = |k: &str| cert.pieces.iter().filter(|p| p.cover.kind() == k).count();
            let summary = json!({
                "pieces": cert.piece_count(),
                "curves": count("curve"),
                "singletons": count("singleton"),
                "empty": count("empty"),
                "points": cert.point_count(),
                "delta": delta,
                "initial_pieces": cert.meta.initial_pieces,
                "bisections": cert.meta.bisections,
            });
            match dest {
                Some(path) => {
                    let mut w = create(path)?;
                    w.write_all(cert.to_json().as_bytes()).and_then(|()| w.flush()).map_err(usage)?;
                    out.emit(&summary, || {
                        format!(
                            "{} pieces ({} curves, {} singletons, {} empty), {} points, delta = {delta}\n",
                            cert.piece_count(),
                            count("curve"),
                            count("singleton"),
                            count("empty"),
                            cert.point_count()
                        )
                    });
                }
                None => println!("{}", cert.to_json()),
            }
        }
        Cmd::Verify { cert } => {
            let text = std::fs::read_to_string(cert).map_err(|e| usage(format!("{}: {e}", cert.display())))?;
            let cert = CoverCertificate::from_json(&text).map_err(|e| Failure::Check(format!("malformed certificate: {e}")))?;
            let r = verify_cover(&cert);
            out.emit(&r, || {
                let mut s = format!(
                    "{}: {} pieces, {} target points, {} listed\n",
                    if r.ok { "OK" } else { "FAILED" },
                    r.pieces,
                    r.points_expected,
                    r.points_listed
                );
                for m in &r.failures {
                    s += &format!("  {m}\n");
                }
                s
            });
            if !r.ok {
                return Err(Failure::Check(format!("certificate rejected with {} failures", r.failures.len())));
            }
        }
        Cmd::Jarnik { n, window, slack, curve } => {
            let chain = jarnik_extremal(*n).map_err(usage)?;
            let mu = chain.len() as u64;
            let ratio = mu as f64 / (*n as f64).powf(2.0 / 3.0);
            let (k_lo, k_hi) = jarnik_constant_bracket();
            let upper = jarnik_upper_check(*n, slack).map_err(usage)?;
            let mut v = json!({
                "n": n,
                "x_max": chain.x_max,
                "mu": mu,
                "ratio": ratio,
                "constant_lo": k_lo,
                "constant_hi": k_hi,
                "n_two_thirds_lo": n_two_thirds_lower(*n).to_f64(),
                "slack": slack,
                "upper_check": upper,
            });
            let mut text = format!(
                "N = {n}\nX = {}\nmu >= {mu}\nmu/N^(2/3) = {ratio:.6}\n3 pi^(-2/3) in [{:.12}, {:.12}]\nupper check (slack {slack}): {}\n",
                chain.x_max,
                k_lo.to_f64(),
                k_hi.to_f64(),
                if upper { "pass" } else { "fail" }
            );
            if let Some(w) = window {
                let bad = collinearity_window_check(curve, *n, w).map_err(usage)?;
                let windows = collinear_windows(curve, *n, w).map_err(usage)?;
                let straight = windows.iter().filter(|w| is_collinear(w)).count();
                v["window"] = json!({
                    "window_const": w,
                    "windows": windows.len(),
                    "collinear_windows": straight,
                    "violations": bad.len(),
                    "first_violation": bad.first(),
                });
                text += &format!("windows (const {w}): {} greedy, {straight} collinear; non-collinear triples: {}\n", windows.len(), bad.len());
                if let Some(t) = bad.first() {
                    text += &format!("  e.g. {}, {}, {}\n", t[0], t[1], t[2]);
                }
            }
            out.emit(&v, || text);
            if !upper {
                return Err(Failure::Check(format!("mu exceeds (3 pi^(-2/3) + {slack}) N^(2/3)")));
            }
        }
        Cmd::Exponent { d, e, mode } => {
            let r = exponent_report(*d, *e, *mode).map_err(usage)?;
            out.emit(&r, || format!("{}\n", r.delta));
        }
        Cmd::Choose { target, mode, d } => {
            let (d, e) = choose_degrees(target, *mode, *d).map_err(usage)?;
            let r = exponent_report(d, e, *mode).map_err(usage)?;
            out.emit(&r, || format!("d = {d}, e = {e}, delta = {}\n", r.delta));
        }
        Cmd::Plot { input, out: dest, title } => {
            let samples = read_csv(open(input)?).map_err(usage)?;
            let fit = fit_exponent(&samples).ok();
            let title = title.clone().unwrap_or_else(|| input.display().to_string());
            let svg = render_svg(&samples, fit.as_ref(), &title);
            let mut w = create(dest)?;
            w.write_all(svg.as_bytes()).and_then(|()| w.flush()).map_err(usage)?;
            let v = json!({"out": dest.display().to_string(), "samples": samples.len(), "fit": fit});
            out.emit(&v, || format!("{} samples plotted to {}\n", samples.len(), dest.display()));
        }
    }
    Ok(())
}
