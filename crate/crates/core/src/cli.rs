//! The `gapscope` command line.
//!
//! Every report is a JSON object `{schema_version, command, input, result}`;
//! `--format csv` prints the main array of the result as rows and `--format
//! text` a short summary. Exit status is 0 on success, 1 when a verification
//! fails and 2 on bad input.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::distribution::{
    avg_gap_iet_at, limit_g, parse_z_grid, verify_dist_convergence, CurveKind, DistributionCurve,
    LimitValue,
};
use crate::error::{Error, Result};
use crate::gaps::{
    default_eps, gap_report, three_gap_predict, verify_dplus2, verify_three_gap,
    VerificationOutcome,
};
use crate::graphs::{boshernitzan_bound_check, fgaps_build, ggaps_build, verify_forest};
use crate::iet::{Iet, IetSpec};
use crate::numerics::{RealValue, DEFAULT_PRECISION};
use crate::zipper::{check_gap_zipper_correspondence, zipper_torus};

pub const SCHEMA_VERSION: u32 = 1;

/// The envelope of every JSON report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report<T> {
    pub schema_version: u32,
    pub command: String,
    pub input: Value,
    pub result: T,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Parser, Debug)]
#[command(
    name = "gapscope",
    version,
    about = "Gap statistics of rotations and interval exchanges"
)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Working precision in bits for real inputs.
    #[arg(long, global = true, env = "GAPSCOPE_PRECISION", default_value_t = DEFAULT_PRECISION)]
    precision: u32,
    /// Clustering tolerance (convergence tolerance for dist-convergence).
    #[arg(long, global = true)]
    eps: Option<f64>,
    /// Seed for randomly placed samples in `dist --iet`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Source {
    /// Rotation angle as a surd, e.g. "sqrt(1/2)" or "(-1 + 1*sqrt(5))/2".
    #[arg(long, conflicts_with = "iet", required_unless_present = "iet")]
    alpha: Option<String>,
    /// JSON file `{"lengths": [...], "permutation": [...]}`.
    #[arg(long)]
    iet: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Cutoffs {
    #[arg(long, conflicts_with = "z_grid", required_unless_present = "z_grid")]
    z: Option<f64>,
    /// START:STOP:STEP, inclusive.
    #[arg(long = "z-grid")]
    z_grid: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sorted orbit, gaps and gap-length clusters.
    Gaps {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        n: usize,
        /// Keep coinciding orbit points.
        #[arg(long)]
        raw: bool,
    },
    /// Three-gap prediction from the Farey neighbors of alpha.
    Predict {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        n: u64,
    },
    /// Zippered rectangles of the rotation torus.
    Zipper {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        n: u64,
    },
    /// Average proportion of gaps of normalized length at least z.
    Dist {
        #[command(flatten)]
        cutoffs: Cutoffs,
        #[arg(long)]
        n: u64,
        /// A,B
        #[arg(long, default_value = "0,1")]
        range: String,
        /// Average over T o R_alpha instead of rotations.
        #[arg(long)]
        iet: Option<PathBuf>,
        /// Sample count for `--iet`.
        #[arg(long, default_value_t = 200)]
        grid: usize,
    },
    /// The limiting gap distribution.
    Limit {
        #[command(flatten)]
        cutoffs: Cutoffs,
    },
    /// The gap graph, or the slot forest with `--forest`.
    Graph {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        forest: bool,
    },
    /// Run one verification.
    Verify {
        #[command(subcommand)]
        check: Check,
    },
}

#[derive(Subcommand, Debug)]
enum Check {
    ThreeGap {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        n: usize,
    },
    Dplus2 {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        n: usize,
    },
    Zipper {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        n: u64,
    },
    Bosh {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        n: usize,
    },
    Forest {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        n: usize,
    },
    /// Compares N/16, N/4 and N against the limit.
    DistConvergence {
        #[arg(long)]
        z: Option<f64>,
        #[arg(long = "z-grid", conflicts_with = "z")]
        z_grid: Option<String>,
        #[arg(long, default_value_t = 800)]
        n: u64,
    },
}

/// What a command produced, in every output format.
struct Output {
    json: Value,
    csv: String,
    text: String,
    failed: bool,
}

impl Output {
    fn new<T: Serialize>(result: &T, csv: String, text: String) -> Result<Self> {
        Ok(Self {
            json: to_value(result)?,
            csv,
            text,
            failed: false,
        })
    }

    fn verification(v: VerificationOutcome) -> Result<Self> {
        let csv = csv_rows(
            &["check", "status", "message"],
            [vec![
                v.check.clone(),
                to_value(v.status)?.as_str().unwrap_or_default().to_string(),
                v.message.clone(),
            ]],
        )?;
        let text = format!(
            "{}: {:?}{}\n",
            v.check,
            v.status,
            if v.message.is_empty() {
                String::new()
            } else {
                format!(" ({})", v.message)
            }
        );
        Ok(Self {
            failed: v.failed(),
            json: to_value(&v)?,
            csv,
            text,
        })
    }
}

fn to_value<T: Serialize>(x: T) -> Result<Value> {
    serde_json::to_value(x).map_err(|e| Error::validation(e.to_string()))
}

fn csv_rows<I, R>(header: &[&str], rows: I) -> Result<String>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Error::validation(e.to_string());
    w.write_record(header).map_err(err)?;
    for r in rows {
        w.write_record(r).map_err(err)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::validation(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

/// Parses `argv` (including the program name), runs the command and writes
/// the report to `out` and diagnostics to `err`. Returns the exit status.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    2
                }
            };
        }
    };
    match execute(&cli) {
        Ok((input, output)) => {
            let body = match cli.format {
                Format::Json => {
                    let report = Report {
                        schema_version: SCHEMA_VERSION,
                        command: command_name(&cli.command).to_string(),
                        input,
                        result: output.json,
                    };
                    let mut s = serde_json::to_string_pretty(&report).expect("reports serialize");
                    s.push('\n');
                    s
                }
                Format::Csv => output.csv,
                Format::Text => output.text,
            };
            if out.write_all(body.as_bytes()).is_err() {
                return 2;
            }
            i32::from(output.failed)
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Consistency(_) => 1,
                _ => 2,
            }
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Gaps { .. } => "gaps",
        Command::Predict { .. } => "predict",
        Command::Zipper { .. } => "zipper",
        Command::Dist { .. } => "dist",
        Command::Limit { .. } => "limit",
        Command::Graph { .. } => "graph",
        Command::Verify { check } => match check {
            Check::ThreeGap { .. } => "verify three-gap",
            Check::Dplus2 { .. } => "verify dplus2",
            Check::Zipper { .. } => "verify zipper",
            Check::Bosh { .. } => "verify bosh",
            Check::Forest { .. } => "verify forest",
            Check::DistConvergence { .. } => "verify dist-convergence",
        },
    }
}

fn real(text: &str, precision: u32) -> Result<RealValue> {
    RealValue::parse(text)?.with_precision(precision)
}

fn read_iet(path: &Path) -> Result<Iet> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::validation(format!("cannot read {}: {e}", path.display())))?;
    IetSpec::from_json(&text)?.to_iet()
}

impl Source {
    fn load(&self, precision: u32) -> Result<(Iet, Value)> {
        match (&self.alpha, &self.iet) {
            (Some(a), _) => {
                let x = real(a, precision)?;
                Ok((Iet::rotation(x.value())?, json!({"alpha": x})))
            }
            (None, Some(p)) => {
                let t = read_iet(p)?;
                let spec = to_value(IetSpec::from_iet(&t))?;
                Ok((t, json!({"iet": spec})))
            }
            (None, None) => Err(Error::validation("one of --alpha and --iet is required")),
        }
    }
}

fn cutoffs(z: Option<f64>, grid: Option<&str>) -> Result<Vec<f64>> {
    match (z, grid) {
        (Some(z), _) => Ok(vec![z]),
        (None, Some(g)) => parse_z_grid(g),
        (None, None) => Err(Error::validation("one of --z and --z-grid is required")),
    }
}

fn parse_range(text: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = text.split(',').collect();
    let num = |s: &str, pos: usize| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::parse(pos, format!("expected a number, got {s:?}")))
    };
    match parts.as_slice() {
        [a, b] => Ok((num(a, 0)?, num(b, a.len() + 1)?)),
        _ => Err(Error::parse(0, "expected A,B")),
    }
}

fn execute(cli: &Cli) -> Result<(Value, Output)> {
    let prec = cli.precision;
    let common = json!({"precision": prec, "eps": cli.eps, "seed": cli.seed});
    let (mut input, output) = match &cli.command {
        Command::Gaps { source, n, raw } => {
            let (t, inp) = source.load(prec)?;
            let eps = cli.eps.unwrap_or_else(|| default_eps(*n));
            let rep = gap_report(&t, *n, eps, *raw)?;
            let mut text = format!(
                "N = {}, {} distinct gap lengths\n",
                rep.n,
                rep.distinct_lengths()
            );
            for c in &rep.clusters {
                text.push_str(&format!("  {} x {}\n", c.length, c.count));
            }
            let out = Output::new(&rep, rep.clusters_csv()?, text)?;
            (json!({"source": inp, "n": n, "raw": raw}), out)
        }
        Command::Predict { alpha, n } => {
            let x = real(alpha, prec)?;
            let p = three_gap_predict(&x, *n)?;
            let eps = cli.eps.unwrap_or_else(|| default_eps(*n as usize));
            let clusters = p.expected_clusters(eps);
            let csv = csv_rows(
                &["length", "count"],
                clusters
                    .iter()
                    .map(|c| [c.length.to_string(), c.count.to_string()]),
            )?;
            let mut text = String::new();
            for c in &clusters {
                text.push_str(&format!("{} x {}\n", c.length, c.count));
            }
            (json!({"alpha": x, "n": n}), Output::new(&p, csv, text)?)
        }
        Command::Zipper { alpha, n } => {
            let x = real(alpha, prec)?;
            let z = zipper_torus(&x, *n)?;
            let csv = csv_rows(
                &["width", "height"],
                z.widths
                    .iter()
                    .zip(&z.heights)
                    .map(|(w, h)| [w.to_string(), h.to_string()]),
            )?;
            let mut text = format!("{:?} case, permutation {}\n", z.case, z.pi);
            for (w, h) in z.widths.iter().zip(&z.heights) {
                text.push_str(&format!("  width {w}  height {h}\n"));
            }
            (json!({"alpha": x, "n": n}), Output::new(&z, csv, text)?)
        }
        Command::Dist {
            cutoffs: c,
            n,
            range,
            iet,
            grid,
        } => {
            let zs = cutoffs(c.z, c.z_grid.as_deref())?;
            let (a, b) = parse_range(range)?;
            let curve = match iet {
                None => DistributionCurve::exact(a, b, *n, &zs)?,
                Some(p) => {
                    let t = read_iet(p)?;
                    match cli.seed {
                        None => DistributionCurve::empirical(&t, a, b, *n as usize, *grid, &zs)?,
                        Some(seed) => {
                            if !(0.0 <= a && a < b && b <= 1.0) {
                                return Err(Error::domain(format!(
                                    "need 0 <= a < b <= 1, got [{a}, {b}]"
                                )));
                            }
                            let mut rng = ChaCha8Rng::seed_from_u64(seed);
                            let alphas: Vec<f64> =
                                (0..*grid).map(|_| rng.random_range(a..b)).collect();
                            DistributionCurve {
                                values: avg_gap_iet_at(&t, &alphas, &zs, *n as usize)?,
                                z_values: zs.clone(),
                                n: Some(*n),
                                range: (a, b),
                                kind: CurveKind::Empirical,
                            }
                        }
                    }
                }
            };
            let text = curve
                .z_values
                .iter()
                .zip(&curve.values)
                .map(|(z, v)| format!("{z}\t{v}\n"))
                .collect();
            let inp = json!({"z": zs, "n": n, "range": [a, b], "iet": iet, "grid": grid});
            (inp, Output::new(&curve, curve.to_csv()?, text)?)
        }
        Command::Limit { cutoffs: c } => {
            let zs = cutoffs(c.z, c.z_grid.as_deref())?;
            let vals = zs
                .iter()
                .map(|&z| limit_g(z))
                .collect::<Result<Vec<LimitValue>>>()?;
            let csv = csv_rows(
                &["z", "value", "one_sided"],
                vals.iter().map(|v| {
                    [
                        v.z.to_string(),
                        v.value.to_string(),
                        v.one_sided.to_string(),
                    ]
                }),
            )?;
            let text = vals
                .iter()
                .map(|v| format!("{}\t{}\n", v.z, v.value))
                .collect();
            (json!({"z": zs}), Output::new(&vals, csv, text)?)
        }
        Command::Graph { source, n, forest } => {
            let (t, inp) = source.load(prec)?;
            let out = if *forest {
                let f = fgaps_build(&t, *n)?;
                let csv = csv_rows(
                    &["parent", "child", "length", "label"],
                    f.edges.iter().map(|&(p, c)| {
                        let node = &f.nodes[c];
                        [
                            p.to_string(),
                            c.to_string(),
                            node.length().to_string(),
                            node.label.clone(),
                        ]
                    }),
                )?;
                Output::new(&f, csv, f.to_edge_list())?
            } else {
                let g = ggaps_build(&t, *n)?;
                let csv = csv_rows(
                    &["source", "target", "weight"],
                    g.edges.iter().map(|e| {
                        [
                            e.source.to_string(),
                            e.target.to_string(),
                            e.weight.to_string(),
                        ]
                    }),
                )?;
                Output::new(&g, csv, g.to_edge_list())?
            };
            (json!({"source": inp, "n": n, "forest": forest}), out)
        }
        Command::Verify { check } => verify(check, cli)?,
    };
    if let Value::Object(m) = &mut input {
        if let Value::Object(c) = common {
            m.extend(c);
        }
    }
    Ok((input, output))
}

fn verify(check: &Check, cli: &Cli) -> Result<(Value, Output)> {
    let prec = cli.precision;
    let eps_for = |n: usize| cli.eps.unwrap_or_else(|| default_eps(n));
    let (input, outcome) = match check {
        Check::ThreeGap { alpha, n } => {
            let x = real(alpha, prec)?;
            let out = verify_three_gap(&x, *n, eps_for(*n))?;
            (json!({"alpha": x, "n": n}), out)
        }
        Check::Dplus2 { source, n } => {
            let (t, inp) = source.load(prec)?;
            (
                json!({"source": inp, "n": n}),
                verify_dplus2(&t, *n, eps_for(*n))?,
            )
        }
        Check::Zipper { alpha, n } => {
            let x = real(alpha, prec)?;
            let out = check_gap_zipper_correspondence(&x, *n, eps_for(*n as usize))?;
            (json!({"alpha": x, "n": n}), out)
        }
        Check::Bosh { source, n } => {
            let (t, inp) = source.load(prec)?;
            (
                json!({"source": inp, "n": n}),
                boshernitzan_bound_check(&t, *n)?,
            )
        }
        Check::Forest { source, n } => {
            let (t, inp) = source.load(prec)?;
            (
                json!({"source": inp, "n": n}),
                verify_forest(&t, *n, eps_for(*n))?,
            )
        }
        Check::DistConvergence { z, z_grid, n } => {
            let zs = match (z, z_grid) {
                (None, None) => vec![0.25, 0.5, 0.75],
                _ => cutoffs(*z, z_grid.as_deref())?,
            };
            let ns = [(*n / 16).max(1), (*n / 4).max(1), *n];
            let tol = cli.eps.unwrap_or(0.01);
            (
                json!({"z": zs, "n": ns}),
                verify_dist_convergence(&zs, &ns, tol)?,
            )
        }
    };
    Ok((input, Output::verification(outcome)?))
}
