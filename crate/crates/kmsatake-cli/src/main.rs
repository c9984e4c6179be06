//! Command-line driver: parses root-datum configs, dispatches the
//! computations and serializes results. Output is deterministic for
//! identical inputs; an optional content-addressed cache keyed by the
//! config bytes and the full command line lives under the directory named
//! by `KMSATAKE_CACHE_DIR`.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use sha2::{Digest, Sha256};

use kmsatake::dl::DlContext;
use kmsatake::io;
use kmsatake::root_datum::{RootDatum, RootDatumConfig};
use kmsatake::satake::{self, QMode, Route, SatakeResult};
use kmsatake::series::{render_pretty, TruncSeries};
use kmsatake::symm::{SymContext, SymOptions};
use kmsatake::tables;
use kmsatake::weyl::DEFAULT_ELEMENT_CAP;

#[derive(Parser)]
#[command(
    name = "kmsatake",
    about = "Exact spherical functions for Kac-Moody root data",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Pretty,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    Recursion,
    Closed,
    Both,
}

impl From<RouteArg> for Route {
    fn from(r: RouteArg) -> Route {
        match r {
            RouteArg::Recursion => Route::Recursion,
            RouteArg::Closed => Route::Closed,
            RouteArg::Both => Route::Both,
        }
    }
}

#[derive(Args)]
struct Common {
    /// Root-datum config file (JSON)
    #[arg(long)]
    config: PathBuf,
    /// Truncation depth: coefficients within this height of the ceiling
    /// are exact
    #[arg(long, default_value_t = 4)]
    depth: i64,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Pretty)]
    format: Format,
    /// Cap on enumerated Weyl-group elements
    #[arg(long, default_value_t = DEFAULT_ELEMENT_CAP)]
    element_cap: usize,
    /// Re-run symmetrizer sums with growing cutoffs until the window
    /// stabilizes twice, asserting agreement with the closed-form bound
    #[arg(long, default_value_t = false)]
    adaptive_cutoff: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Print the validated root datum (classes, rho, realization)
    Inspect {
        #[command(flatten)]
        common: Common,
    },
    /// The spherical image of the basis element at lambda
    Satake {
        #[command(flatten)]
        common: Common,
        /// Dominant coweight, comma-separated coordinates
        #[arg(long)]
        lambda: String,
        /// "symbolic" or an exact rational value for q
        #[arg(long, default_value = "symbolic")]
        q: String,
        #[arg(long, value_enum, default_value_t = RouteArg::Both)]
        route: RouteArg,
    },
    /// Hall-Littlewood series (sigma^2 renamed to t; equal parameters)
    HallLittlewood {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        lambda: String,
    },
    /// The t = 0 specialization of the Hall-Littlewood series
    Character {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        lambda: String,
    },
    /// The multiplier m_sigma = Gamma Delta^{-1} (1 in finite type)
    Mzero {
        #[command(flatten)]
        common: Common,
    },
    /// Verify C_v Delta = Gamma ^v Delta for all v up to --lmax
    CherednikCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        lmax: usize,
    },
    /// Verify the rank-one local cancellation tables symbolically
    TablesCheck {
        /// Largest alpha(mu) value to check
        #[arg(long, default_value_t = 4)]
        nmax: i64,
        #[arg(long, value_enum, default_value_t = Format::Pretty)]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(output) => {
            println!("{output}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<String, String> {
    // cache key: config bytes (when present) + the exact command description
    let descriptor = command_descriptor(&cli.command)?;
    if let Some(dir) = std::env::var_os("KMSATAKE_CACHE_DIR") {
        let mut hasher = Sha256::new();
        hasher.update(descriptor.as_bytes());
        let key = hex_digest(hasher);
        let path = PathBuf::from(&dir).join(format!("{key}.out"));
        if let Ok(cached) = fs::read_to_string(&path) {
            return Ok(cached);
        }
        let out = dispatch(&cli.command)?;
        let _ = fs::create_dir_all(&dir);
        let _ = fs::write(&path, &out);
        return Ok(out);
    }
    dispatch(&cli.command)
}

fn hex_digest(hasher: Sha256) -> String {
    hasher
        .finalize()
        .iter()
        .fold(String::new(), |mut acc, b| {
            let _ = write!(acc, "{b:02x}");
            acc
        })
}

fn command_descriptor(cmd: &Command) -> Result<String, String> {
    let mut parts: Vec<String> = Vec::new();
    let push_common = |c: &Common, parts: &mut Vec<String>| -> Result<(), String> {
        let bytes = fs::read_to_string(&c.config)
            .map_err(|e| format!("cannot read {}: {e}", c.config.display()))?;
        parts.push(format!("config={bytes}"));
        parts.push(format!("depth={}", c.depth));
        parts.push(format!(
            "format={}",
            match c.format {
                Format::Pretty => "pretty",
                Format::Json => "json",
            }
        ));
        parts.push(format!("cap={}", c.element_cap));
        parts.push(format!("adaptive={}", c.adaptive_cutoff));
        Ok(())
    };
    match cmd {
        Command::Inspect { common } => {
            parts.push("inspect".into());
            push_common(common, &mut parts)?;
        }
        Command::Satake {
            common,
            lambda,
            q,
            route,
        } => {
            parts.push("satake".into());
            push_common(common, &mut parts)?;
            parts.push(format!("lambda={lambda}"));
            parts.push(format!("q={q}"));
            parts.push(format!(
                "route={}",
                Route::from(*route).name()
            ));
        }
        Command::HallLittlewood { common, lambda } => {
            parts.push("hall-littlewood".into());
            push_common(common, &mut parts)?;
            parts.push(format!("lambda={lambda}"));
        }
        Command::Character { common, lambda } => {
            parts.push("character".into());
            push_common(common, &mut parts)?;
            parts.push(format!("lambda={lambda}"));
        }
        Command::Mzero { common } => {
            parts.push("mzero".into());
            push_common(common, &mut parts)?;
        }
        Command::CherednikCheck { common, lmax } => {
            parts.push("cherednik-check".into());
            push_common(common, &mut parts)?;
            parts.push(format!("lmax={lmax}"));
        }
        Command::TablesCheck { nmax, format } => {
            parts.push("tables-check".into());
            parts.push(format!("nmax={nmax}"));
            parts.push(format!(
                "format={}",
                match format {
                    Format::Pretty => "pretty",
                    Format::Json => "json",
                }
            ));
        }
    }
    Ok(parts.join("\x00"))
}

fn load_datum(common: &Common) -> Result<RootDatum, String> {
    let text = fs::read_to_string(&common.config)
        .map_err(|e| format!("cannot read {}: {e}", common.config.display()))?;
    let cfg = RootDatumConfig::from_json_str(&text)
        .map_err(|e| format!("{}: {e}", common.config.display()))?;
    RootDatum::build(cfg).map_err(|e| format!("{}: {e}", common.config.display()))
}

fn parse_lambda(rd: &RootDatum, text: &str) -> Result<Vec<i64>, String> {
    let coords: Vec<i64> = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| format!("bad lambda coordinate {t:?}"))
        })
        .collect::<Result<_, _>>()?;
    if coords.len() != rd.lattice_dim {
        return Err(format!(
            "lambda has {} coordinates, lattice rank is {}",
            coords.len(),
            rd.lattice_dim
        ));
    }
    Ok(coords)
}

fn parse_q(text: &str) -> Result<QMode, String> {
    if text == "symbolic" {
        return Ok(QMode::Symbolic);
    }
    let parse_int = |t: &str| {
        t.trim()
            .parse::<i64>()
            .map_err(|_| format!("bad q value {text:?}"))
    };
    let value = match text.split_once('/') {
        Some((a, b)) => BigRational::new(parse_int(a)?.into(), parse_int(b)?.into()),
        None => BigRational::from_integer(parse_int(text)?.into()),
    };
    Ok(QMode::Numeric(value))
}

fn render_series(rd: &RootDatum, s: &TruncSeries, format: Format) -> String {
    match format {
        Format::Pretty => render_pretty(rd, s),
        Format::Json => io::to_string_pretty(&io::series_to_json(s)),
    }
}

fn render_satake(rd: &RootDatum, r: &SatakeResult, format: Format) -> String {
    match format {
        Format::Pretty => {
            let body = render_pretty(rd, &r.series);
            if matches!(r.delta_half, kmsatake::satake::DeltaHalf::Symbolic) {
                format!("delta_half(lambda) * [ {body} ]")
            } else {
                body
            }
        }
        Format::Json => io::to_string_pretty(&io::satake_to_json(r)),
    }
}

fn dispatch(cmd: &Command) -> Result<String, String> {
    match cmd {
        Command::Inspect { common } => {
            let rd = load_datum(common)?;
            Ok(io::to_string_pretty(&io::root_datum_to_json(&rd)))
        }
        Command::Satake {
            common,
            lambda,
            q,
            route,
        } => {
            let rd = load_datum(common)?;
            let lam = parse_lambda(&rd, lambda)?;
            let qmode = parse_q(q)?;
            let ctx = DlContext::with_cap(&rd, common.element_cap);
            let res = satake::satake_with(&rd, &ctx, &lam, common.depth, Route::from(*route), qmode)
                .map_err(|e| e.to_string())?;
            Ok(render_satake(&rd, &res, common.format))
        }
        Command::HallLittlewood { common, lambda } => {
            let rd = load_datum(common)?;
            let lam = parse_lambda(&rd, lambda)?;
            let h = kmsatake::satake::hall_littlewood(&rd, &lam, common.depth)
                .map_err(|e| e.to_string())?;
            Ok(render_series(&rd, &h, common.format))
        }
        Command::Character { common, lambda } => {
            let rd = load_datum(common)?;
            let lam = parse_lambda(&rd, lambda)?;
            let c = kmsatake::satake::character_t0(&rd, &lam, common.depth)
                .map_err(|e| e.to_string())?;
            Ok(render_series(&rd, &c, common.format))
        }
        Command::Mzero { common } => {
            let rd = load_datum(common)?;
            let ctx = DlContext::with_cap(&rd, common.element_cap);
            let sym = SymContext::new(&rd, &ctx, common.depth).with_options(SymOptions {
                adaptive_cutoff: common.adaptive_cutoff,
            });
            let m = sym.m_sigma().map_err(|e| e.to_string())?;
            let witness = sym.m_sigma_witness().map_err(|e| e.to_string())?;
            let body = render_series(&rd, &m, common.format);
            match common.format {
                Format::Pretty => Ok(format!(
                    "{body}\nwitness m_sigma * H_0 = 1 through depth {}: {}",
                    common.depth,
                    if witness { "ok" } else { "FAILED" }
                )),
                Format::Json => Ok(body),
            }
        }
        Command::CherednikCheck { common, lmax } => {
            let rd = load_datum(common)?;
            let ctx = DlContext::with_cap(&rd, common.element_cap);
            let sym = SymContext::new(&rd, &ctx, common.depth);
            let report = sym.cherednik_check(*lmax).map_err(|e| e.to_string())?;
            let out = match common.format {
                Format::Json => io::to_string_pretty(&io::cherednik_to_json(&report)),
                Format::Pretty => {
                    let mut lines = Vec::new();
                    for row in &report.rows {
                        lines.push(format!(
                            "v = {:?}: {} (depth {})",
                            row.word,
                            if row.ok { "pass" } else { "FAIL" },
                            row.checked_depth
                        ));
                    }
                    lines.join("\n")
                }
            };
            if report.all_ok() {
                Ok(out)
            } else {
                Err(format!("Cherednik identity failed\n{out}"))
            }
        }
        Command::TablesCheck { nmax, format } => {
            let report = tables::verify_tables(*nmax);
            let out = match format {
                Format::Json => io::to_string_pretty(&io::tables_to_json(&report)),
                Format::Pretty => {
                    let mut lines = Vec::new();
                    for c in &report.checks {
                        lines.push(format!(
                            "n = {} ({}): {}",
                            c.n,
                            c.case,
                            if c.ok { "pass" } else { "FAIL" }
                        ));
                    }
                    lines.join("\n")
                }
            };
            if report.all_ok() {
                Ok(out)
            } else {
                Err(format!("table check failed\n{out}"))
            }
        }
    }
}
