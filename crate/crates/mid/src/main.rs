//! Command-line front end: cubic solves, region/boundary datasets, potential
//! and (u, v) profiles, Child-Langmuir limits, the tangent approximation, and
//! sweep-spec execution.

use clap::{Args, Parser, Subcommand};
use mid::error::{Error, Result};
use mid::model::ScaledParams;
use mid::sweep::{self, Format, Mode, RangeSpec, SweepSpec};
use mid::{cubic, tangent, thetad};
use std::collections::BTreeMap;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "mid", about = "Magnetically insulated diode model toolkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Grid size N or N,M.
    #[arg(long)]
    grid: Option<String>,
}

#[derive(clap::ValueEnum, Clone, Copy)]
enum FormatArg {
    Csv,
    Json,
    Svg,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
            FormatArg::Svg => Format::Svg,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve the turning-point cubic at one (k_hat, beta_hat).
    Cubic {
        #[arg(long, allow_negative_numbers = true)]
        k_hat: f64,
        #[arg(long, allow_negative_numbers = true)]
        beta_hat: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Region-classification raster over the parameter plane.
    Regions {
        #[arg(long, default_value_t = -5.0, allow_negative_numbers = true)]
        k_min: f64,
        #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
        k_max: f64,
        #[arg(long, default_value_t = -5.0, allow_negative_numbers = true)]
        b_min: f64,
        #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
        b_max: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// The Delta_u = 0 boundary curves beta_hat_pm(k_hat).
    Boundary {
        #[arg(long, default_value_t = -5.0, allow_negative_numbers = true)]
        k_min: f64,
        #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
        k_max: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Effective potential profile D(x).
    Potential {
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value_t = 1.0)]
        j_x: f64,
        #[arg(long)]
        x_end: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Picard (u, v) solution profile.
    Uv {
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value_t = 1.0)]
        j_x: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, allow_negative_numbers = true)]
        beta_a: Option<f64>,
        #[arg(long)]
        x_end: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Child-Langmuir limits: delta(j_x), K(delta), and the 3/2 law.
    Cl {
        #[arg(long, default_value_t = 1.0)]
        j_x: f64,
        #[arg(long, default_value_t = 1000.0)]
        volts: f64,
        #[arg(long, default_value_t = 0.01)]
        gap: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Tangent-approximation theta(x) scan.
    Tangent {
        #[arg(long, allow_negative_numbers = true)]
        theta_l: f64,
        #[arg(long, default_value_t = 1.0)]
        j_x: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        k1: f64,
        #[arg(long, allow_negative_numbers = true)]
        k2: f64,
        #[arg(long)]
        x_end: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run a sweep spec from JSON, or regenerate all figure datasets.
    Sweep {
        /// JSON sweep specification file.
        #[arg(long, conflicts_with = "figures")]
        spec: Option<PathBuf>,
        /// Write every figure dataset into this directory.
        #[arg(long)]
        figures: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn parse_grid(grid: &Option<String>) -> Result<Option<(usize, Option<usize>)>> {
    let Some(g) = grid else { return Ok(None) };
    let parts: Vec<&str> = g.split(',').collect();
    let bad = || Error::SpecInvalid(format!("bad --grid value: {g}"));
    match parts.as_slice() {
        [n] => Ok(Some((n.trim().parse().map_err(|_| bad())?, None))),
        [n, m] => Ok(Some((
            n.trim().parse().map_err(|_| bad())?,
            Some(m.trim().parse().map_err(|_| bad())?),
        ))),
        _ => Err(bad()),
    }
}

fn write_out(output: &OutputArgs, d: &sweep::Dataset) -> Result<()> {
    let text = sweep::emit_string(d, output.format.into());
    match &output.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn make_spec(
    mode: Mode,
    fixed: &[(&str, f64)],
    range: &[(&str, f64, f64, usize)],
    quantity: Option<&str>,
) -> SweepSpec {
    SweepSpec {
        mode,
        fixed: fixed.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        range: range.iter().map(|(k, lo, hi, n)| (k.to_string(), RangeSpec(*lo, *hi, *n))).collect(),
        outputs: vec![],
        quantity: quantity.map(str::to_string),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Cubic { k_hat, beta_hat, output } => {
            let sp = ScaledParams::new(k_hat, beta_hat);
            let sol = cubic::solve(sp)?;
            let rc = thetad::classify_from_roots(sp, &sol);
            let branches = thetad::theta_branches(&sol);
            let meta = sweep::Metadata {
                mode: Mode::Branch1d,
                quantity: "u".into(),
                fixed: BTreeMap::from([
                    ("k_hat".to_string(), k_hat),
                    ("beta_hat".to_string(), beta_hat),
                ]),
                range: BTreeMap::new(),
                grid: vec![1],
                collisions: vec![],
            };
            let rows = sol
                .roots
                .iter()
                .enumerate()
                .map(|(i, u)| {
                    let theta = u * u;
                    vec![i as f64, u.re, u.im, theta.re, theta.im]
                })
                .collect();
            let d = sweep::Dataset {
                meta,
                columns: ["root_id", "u_re", "u_im", "theta_re", "theta_im"]
                    .iter()
                    .map(|s| s.to_string())
                    .collect(),
                rows,
            };
            write_out(&output, &d)?;
            eprintln!(
                "discriminant = {:e}, case = {:?}, n_real = {}, n_physical = {}",
                sol.discriminant,
                sol.case_tag,
                rc.n_real_roots,
                branches.physical.len()
            );
            Ok(())
        }
        Command::Regions { k_min, k_max, b_min, b_max, output } => {
            let (n, m) = match parse_grid(&output.grid)? {
                Some((n, m)) => (n, m.unwrap_or(n)),
                None => (400, 400),
            };
            let s = make_spec(
                Mode::RegionMap,
                &[],
                &[("k_hat", k_min, k_max, n), ("beta_hat", b_min, b_max, m)],
                None,
            );
            write_out(&output, &sweep::region_map(&s)?)
        }
        Command::Boundary { k_min, k_max, output } => {
            let n = match parse_grid(&output.grid)? {
                Some((n, _)) => n,
                None => 1001,
            };
            let s = make_spec(Mode::BoundaryCurve, &[], &[("k_hat", k_min, k_max, n)], None);
            write_out(&output, &sweep::boundary_curve(&s)?)
        }
        Command::Potential { gamma, j_x, x_end, output } => {
            let mut fixed = vec![("gamma", gamma), ("j_x", j_x)];
            let mut range: Vec<(&str, f64, f64, usize)> = vec![];
            if let Some(xe) = x_end {
                let n = match parse_grid(&output.grid)? {
                    Some((n, _)) => n,
                    None => 1001,
                };
                range.push(("x", 1e-3 * xe, xe, n));
            }
            let _ = &mut fixed;
            let s = make_spec(Mode::PotentialProfile, &fixed, &range, None);
            write_out(&output, &sweep::potential_profile(&s)?)
        }
        Command::Uv { gamma, j_x, alpha, beta_a, x_end, output } => {
            let mut fixed = vec![("gamma", gamma), ("j_x", j_x), ("alpha", alpha)];
            if let Some(b) = beta_a {
                fixed.push(("beta_a", b));
            }
            if let Some(xe) = x_end {
                fixed.push(("x_end", xe));
            }
            let s = make_spec(Mode::UvProfile, &fixed, &[], None);
            write_out(&output, &sweep::uv_profile(&s)?)
        }
        Command::Cl { j_x, volts, gap, output } => {
            write_out(&output, &sweep::cl_dataset(j_x, volts, gap)?)
        }
        Command::Tangent { theta_l, j_x, k1, k2, x_end, output } => {
            let model = tangent::build_model(theta_l, j_x, k1, k2, tangent::Branch::Plus)?;
            let xe = x_end.unwrap_or_else(|| 0.99 * tangent::pole_location(&model));
            let n = match parse_grid(&output.grid)? {
                Some((n, _)) => n,
                None => 1001,
            };
            let s = make_spec(
                Mode::TangentScan,
                &[("theta_l", theta_l), ("j_x", j_x), ("k1", k1), ("k2", k2)],
                &[("x", 0.0, xe, n)],
                None,
            );
            write_out(&output, &sweep::tangent_scan(&s)?)
        }
        Command::Sweep { spec, figures, output } => {
            if let Some(dir) = figures {
                std::fs::create_dir_all(&dir)?;
                for (name, s) in sweep::figure_specs() {
                    let d = sweep::run_spec(&s)?;
                    for fmt in &s.outputs {
                        let ext = match fmt {
                            Format::Csv => "csv",
                            Format::Json => "json",
                            Format::Svg => "svg",
                        };
                        sweep::emit(&d, *fmt, &dir.join(format!("{name}.{ext}")))?;
                    }
                }
                return Ok(());
            }
            let path = spec.ok_or_else(|| Error::SpecInvalid("need --spec or --figures".into()))?;
            let text = std::fs::read_to_string(&path)?;
            let mut s: SweepSpec =
                serde_json::from_str(&text).map_err(|e| Error::SpecInvalid(e.to_string()))?;
            if let Some((n, m)) = parse_grid(&output.grid)? {
                let keys: Vec<String> = s.range.keys().cloned().collect();
                for (i, key) in keys.iter().enumerate() {
                    let count = if i == 0 { n } else { m.unwrap_or(n) };
                    let r = s.range.get_mut(key).unwrap();
                    r.2 = count;
                }
            }
            let d = sweep::run_spec(&s)?;
            match &output.out {
                Some(path) => sweep::emit(&d, output.format.into(), path)?,
                None => print!("{}", sweep::emit_string(&d, output.format.into())),
            }
            Ok(())
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
