//! Command-line front end. Arguments are resolved into a [`Request`], which
//! is executed and wrapped in an [`OutputEnvelope`]. The envelope echoes the
//! request so `wiretap replay` can rerun it.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::channel::{check_degraded, standardize, RawChannelConfig, StandardChannel, DEFAULT_DEGRADED_TOL};
use crate::error::{Error, Result};
use crate::format::{round_sig, OUTPUT_SIG_DIGITS};
use crate::optimizer::{
    grid_oracle, jam_roots, optimal_powers_jam, optimal_powers_sum, tdma_optimal_alpha, Objective,
    Refinement,
};
use crate::rates::PowerVector;
use crate::regions::{
    collective_region_at, delta_region, individual_region_at, outer_region_at,
    rate_split_collective, rate_split_individual, region_boundary_2d, tdma_region_at,
    tdma_secrecy_sum, BoundaryKind, RateConstraintSet, RateVector, RegionKind, DEFAULT_ALPHA_RES,
    DEFAULT_POWER_RES,
};
use crate::scenario::{sweep, ScenarioConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

/// Largest accepted gap between a closed form and its grid oracle.
pub const VERIFY_TOL: f64 = 1e-6;

pub const DEFAULT_ORACLE_RES: usize = 201;

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "WIRETAP_THREADS";

#[derive(Debug, Parser)]
#[command(name = "wiretap", version, about = "Gaussian multiple-access wiretap channel toolbox")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Map a physical channel onto standard form and test degradedness.
    Standardize(StandardizeArgs),
    /// Region boundary (CSV or JSON), or the constraint set at fixed --power.
    Region(RegionArgs),
    /// Sum-rate maximising powers.
    Sumopt(OptArgs),
    /// Powers with cooperative jamming.
    Jam(OptArgs),
    /// Optimal TDMA shares and the TDMA region.
    Tdma(TdmaArgs),
    /// Extra-rate witness for a rate vector.
    Split(SplitArgs),
    /// Mobile-eavesdropper sweep.
    Scenario(ScenarioArgs),
    /// Rerun the request echoed in a previous output envelope.
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
pub struct StandardizeArgs {
    /// Channel JSON file ("-" for standard input).
    #[arg(long, conflicts_with_all = ["gains_main", "gains_tap", "noise_main", "noise_tap", "power_limits"])]
    pub config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    pub gains_main: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub gains_tap: Option<Vec<f64>>,
    #[arg(long)]
    pub noise_main: Option<f64>,
    #[arg(long)]
    pub noise_tap: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub power_limits: Option<Vec<f64>>,
    #[arg(long, default_value_t = DEFAULT_DEGRADED_TOL)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

fn parse_kind(s: &str) -> std::result::Result<BoundaryKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    #[arg(long, value_parser = parse_kind)]
    pub kind: BoundaryKind,
    /// Secret fraction; 0 keeps only the MAC rows. Boundaries default to 1.
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub h: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub pmax: Vec<f64>,
    /// Power grid points per axis.
    #[arg(long, default_value_t = DEFAULT_POWER_RES)]
    pub res: usize,
    /// Time-sharing grid points.
    #[arg(long, default_value_t = DEFAULT_ALPHA_RES)]
    pub alpha_res: usize,
    /// Fixed powers: print the constraint set instead of a boundary.
    #[arg(long, value_delimiter = ',')]
    pub power: Option<Vec<f64>>,
    /// TDMA shares for a fixed-power TDMA set (default: optimal shares).
    #[arg(long, value_delimiter = ',')]
    pub alpha: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct OptArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub h: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub pmax: Vec<f64>,
    /// Check against the grid oracle; exit 3 if the gap exceeds 1e-6.
    #[arg(long)]
    pub verify: bool,
    #[arg(long, default_value_t = DEFAULT_ORACLE_RES)]
    pub oracle_res: usize,
}

#[derive(Debug, Args)]
pub struct TdmaArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub power: Vec<f64>,
    /// Eavesdropper gains; when given, the TDMA region is reported too.
    #[arg(long, value_delimiter = ',')]
    pub h: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub alpha: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitKind {
    Individual,
    Collective,
}

#[derive(Debug, Args)]
pub struct SplitArgs {
    #[arg(long, value_enum)]
    pub kind: SplitKind,
    #[arg(long, value_delimiter = ',', required = true)]
    pub h: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub power: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub secret: Vec<f64>,
    /// Open rates (default: all zero).
    #[arg(long, value_delimiter = ',')]
    pub open: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct ScenarioArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// CSV destination; without it the CSV goes to standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    /// Envelope JSON file ("-" for standard input).
    pub envelope: PathBuf,
}

/// A fully resolved command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Request {
    Standardize {
        config: RawChannelConfig,
        tol: f64,
    },
    Region {
        kind: BoundaryKind,
        delta: Option<f64>,
        h: Vec<f64>,
        pmax: Vec<f64>,
        res: usize,
        alpha_res: usize,
        power: Option<Vec<f64>>,
        alpha: Option<Vec<f64>>,
        format: Format,
    },
    Sumopt {
        h: Vec<f64>,
        pmax: Vec<f64>,
        verify: bool,
        oracle_res: usize,
    },
    Jam {
        h: Vec<f64>,
        pmax: Vec<f64>,
        verify: bool,
        oracle_res: usize,
    },
    Tdma {
        power: Vec<f64>,
        h: Option<Vec<f64>>,
        alpha: Option<Vec<f64>>,
    },
    Split {
        kind: SplitKind,
        h: Vec<f64>,
        power: Vec<f64>,
        secret: Vec<f64>,
        open: Vec<f64>,
    },
    Scenario {
        config: ScenarioConfig,
        out: Option<PathBuf>,
    },
}

impl Request {
    pub fn name(&self) -> &'static str {
        match self {
            Request::Standardize { .. } => "standardize",
            Request::Region { .. } => "region",
            Request::Sumopt { .. } => "sumopt",
            Request::Jam { .. } => "jam",
            Request::Tdma { .. } => "tdma",
            Request::Split { .. } => "split",
            Request::Scenario { .. } => "scenario",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputEnvelope {
    pub command: String,
    pub inputs_echo: Request,
    pub result: Value,
    pub version: String,
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub envelope: OutputEnvelope,
    /// CSV body for commands that print CSV instead of the envelope.
    pub csv: Option<String>,
    pub exit_code: i32,
}

fn read_input(path: &PathBuf) -> Result<String> {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(path)
    };
    text.map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

fn pair(name: &str, v: &[f64]) -> Result<[f64; 2]> {
    match v {
        [a, b] => Ok([*a, *b]),
        _ => Err(Error::InvalidInput(format!(
            "--{name} needs exactly 2 comma-separated values, got {}",
            v.len()
        ))),
    }
}

fn resolve(cmd: Command) -> Result<Request> {
    Ok(match cmd {
        Command::Standardize(a) => {
            let config = match a.config {
                Some(path) => RawChannelConfig::from_json(&read_input(&path)?)?,
                None => {
                    let missing = |f: &str| Error::InvalidInput(format!("--{f} is required without --config"));
                    let gains_main = a.gains_main.ok_or_else(|| missing("gains-main"))?;
                    RawChannelConfig::new(
                        gains_main.len(),
                        gains_main,
                        a.gains_tap.ok_or_else(|| missing("gains-tap"))?,
                        a.noise_main.ok_or_else(|| missing("noise-main"))?,
                        a.noise_tap.ok_or_else(|| missing("noise-tap"))?,
                        a.power_limits.ok_or_else(|| missing("power-limits"))?,
                    )?
                }
            };
            Request::Standardize { config, tol: a.tol }
        }
        Command::Region(a) => Request::Region {
            kind: a.kind,
            delta: a.delta,
            h: a.h,
            pmax: a.pmax,
            res: a.res,
            alpha_res: a.alpha_res,
            power: a.power,
            alpha: a.alpha,
            format: a.format,
        },
        Command::Sumopt(a) => Request::Sumopt {
            h: a.h,
            pmax: a.pmax,
            verify: a.verify,
            oracle_res: a.oracle_res,
        },
        Command::Jam(a) => Request::Jam {
            h: a.h,
            pmax: a.pmax,
            verify: a.verify,
            oracle_res: a.oracle_res,
        },
        Command::Tdma(a) => Request::Tdma {
            power: a.power,
            h: a.h,
            alpha: a.alpha,
        },
        Command::Split(a) => {
            let open = a.open.unwrap_or_else(|| vec![0.0; a.secret.len()]);
            Request::Split {
                kind: a.kind,
                h: a.h,
                power: a.power,
                secret: a.secret,
                open,
            }
        }
        Command::Scenario(a) => Request::Scenario {
            config: ScenarioConfig::from_json(&read_input(&a.config)?)?,
            out: a.out,
        },
        Command::Replay(a) => {
            let text = read_input(&a.envelope)?;
            let env: OutputEnvelope = serde_json::from_str(&text)
                .map_err(|e| Error::InvalidInput(format!("not an output envelope: {e}")))?;
            env.inputs_echo
        }
    })
}

/// Rounds every float in `v` to the output precision.
pub fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().expect("f64 number"), OUTPUT_SIG_DIGITS);
            if let Some(r) = serde_json::Number::from_f64(x) {
                *n = r;
            }
        }
        Value::Array(a) => a.iter_mut().for_each(round_value),
        Value::Object(o) => o.values_mut().for_each(round_value),
        _ => {}
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("results serialize to JSON")
}

fn fixed_power_set(
    std: &StandardChannel,
    kind: BoundaryKind,
    p: &PowerVector,
    alpha: Option<&[f64]>,
) -> Result<RateConstraintSet> {
    match kind {
        BoundaryKind::Individual => individual_region_at(std, p),
        BoundaryKind::Collective => collective_region_at(std, p),
        BoundaryKind::Tdma => match alpha {
            Some(a) => tdma_region_at(std, p, a),
            None => tdma_region_at(std, p, &tdma_optimal_alpha(p)?),
        },
        BoundaryKind::OuterIndividual => outer_region_at(std, p, RegionKind::OuterIndividual),
        BoundaryKind::OuterCollective => outer_region_at(std, p, RegionKind::OuterCollective),
        BoundaryKind::UnionIndividualTdma => Err(Error::InvalidInput(
            "union-i-t is only defined as a boundary; drop --power".into(),
        )),
    }
}

fn verification(objective: Objective, h: [f64; 2], pmax: [f64; 2], res: usize, rate: f64) -> Result<(Value, bool)> {
    let oracle = grid_oracle(objective, h, pmax, res, Refinement::default())?;
    let gap = (oracle.value.max(0.0) - rate).abs();
    let ok = gap <= VERIFY_TOL;
    Ok((
        serde_json::json!({
            "oracle": oracle,
            "gap": gap,
            "tolerance": VERIFY_TOL,
            "passed": ok,
        }),
        ok,
    ))
}

/// Runs a resolved request.
pub fn execute(req: &Request) -> Result<Outcome> {
    let mut csv = None;
    let mut exit_code = EXIT_OK;
    let result = match req {
        Request::Standardize { config, tol } => {
            let std = standardize(config)?;
            let report = check_degraded(&std, *tol);
            serde_json::json!({ "standard": std, "degradedness": report })
        }
        Request::Region {
            kind,
            delta,
            h,
            pmax,
            res,
            alpha_res,
            power,
            alpha,
            format,
        } => {
            let std = StandardChannel::new(h.clone(), pmax.clone())?;
            match power {
                Some(p) => {
                    if *format == Format::Csv {
                        return Err(Error::InvalidInput(
                            "CSV output is only available for boundaries; drop --power".into(),
                        ));
                    }
                    let p = PowerVector::new(p.clone())?;
                    let set = fixed_power_set(&std, *kind, &p, alpha.as_deref())?;
                    let set = match delta {
                        Some(d) => delta_region(&set, *d)?,
                        None => set,
                    };
                    to_value(&set)
                }
                None => {
                    let b = region_boundary_2d(&std, *kind, delta.unwrap_or(1.0), *res, *alpha_res)?;
                    if *format == Format::Csv {
                        csv = Some(b.to_csv());
                    }
                    serde_json::json!({
                        "boundary": b,
                        "max_sum_rate": b.max_sum_rate(),
                        "max_sum_vertex": b.max_sum_vertex(),
                    })
                }
            }
        }
        Request::Sumopt {
            h,
            pmax,
            verify,
            oracle_res,
        }
        | Request::Jam {
            h,
            pmax,
            verify,
            oracle_res,
        } => {
            let (h, pmax) = (pair("h", h)?, pair("pmax", pmax)?);
            let jam = matches!(req, Request::Jam { .. });
            let alloc = if jam {
                optimal_powers_jam(h, pmax)?
            } else {
                optimal_powers_sum(h, pmax)?
            };
            let mut out = serde_json::json!({ "allocation": alloc });
            if jam {
                let (lo, hi) = if h[0] <= h[1] { (0, 1) } else { (1, 0) };
                if h[lo] < h[hi] {
                    let aux = jam_roots([h[lo], h[hi]], pmax[lo])?;
                    out["auxiliaries"] = to_value(&aux);
                }
            }
            if *verify {
                let (v, ok) = verification(alloc.objective, h, pmax, *oracle_res, alloc.achieved_rate)?;
                out["verification"] = v;
                if !ok {
                    exit_code = EXIT_VERIFY;
                }
            }
            out
        }
        Request::Tdma { power, h, alpha } => {
            let p = PowerVector::new(power.clone())?;
            let alpha_opt = tdma_optimal_alpha(&p)?;
            let mut out = serde_json::json!({ "alpha_opt": alpha_opt });
            if let Some(h) = h {
                let std = StandardChannel::new(h.clone(), power.clone())?;
                let a = alpha.clone().unwrap_or_else(|| alpha_opt.clone());
                out["alpha"] = to_value(&a);
                out["region"] = to_value(&tdma_region_at(&std, &p, &a)?);
                out["secrecy_sum"] = to_value(&tdma_secrecy_sum(&std, &p, &a)?);
            }
            out
        }
        Request::Split {
            kind,
            h,
            power,
            secret,
            open,
        } => {
            let std = StandardChannel::new(h.clone(), power.clone())?;
            let p = PowerVector::new(power.clone())?;
            let r = RateVector::new(secret.clone(), open.clone())?;
            to_value(&match kind {
                SplitKind::Individual => rate_split_individual(&std, &p, &r)?,
                SplitKind::Collective => rate_split_collective(&std, &p, &r)?,
            })
        }
        Request::Scenario { config, out } => {
            let res = sweep(config)?;
            let body = res.to_csv()?;
            match out {
                Some(path) => std::fs::write(path, &body).map_err(|e| {
                    Error::InvalidInput(format!("cannot write {}: {e}", path.display()))
                })?,
                None => csv = Some(body),
            }
            serde_json::json!({ "summary": res.summary, "rows": res.records.len(), "out": out })
        }
    };
    let mut result = result;
    round_value(&mut result);
    Ok(Outcome {
        envelope: OutputEnvelope {
            command: req.name().to_string(),
            inputs_echo: req.clone(),
            result,
            version: env!("CARGO_PKG_VERSION").to_string(),
        },
        csv,
        exit_code,
    })
}

/// Applies the thread cap from `WIRETAP_THREADS`, if set.
pub fn init_threads_from_env() -> Result<()> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::InvalidInput(format!("{THREADS_ENV} = '{v}' must be a positive integer")))?;
    // A pool may already exist when called twice in one process; keep it.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Parses `args`, runs the command and writes its output. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    if let Err(e) = init_threads_from_env() {
        let _ = writeln!(err, "error: {e}");
        return EXIT_INPUT;
    }
    let outcome = resolve(cli.command).and_then(|r| execute(&r));
    match outcome {
        Ok(o) => {
            let json = serde_json::to_string_pretty(&o.envelope).expect("envelope serializes");
            let wrote = match &o.csv {
                // CSV on stdout; the envelope goes to stderr for scenario runs only
                Some(csv) => {
                    if o.envelope.command == "scenario" {
                        let _ = writeln!(err, "{json}");
                    }
                    out.write_all(csv.as_bytes())
                }
                None => writeln!(out, "{json}"),
            };
            if let Err(e) = wrote {
                let _ = writeln!(err, "error: {e}");
                return EXIT_INPUT;
            }
            if o.exit_code == EXIT_VERIFY {
                let _ = writeln!(err, "error: verification gap exceeds {VERIFY_TOL}");
            }
            o.exit_code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}
