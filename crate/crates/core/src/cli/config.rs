//! Command-line and config-file parsing into a [`RunConfig`].
//!
//! A config file is flat `key = value` text whose keys are the long flag
//! names without dashes (`b-over-c = 0.5`). `#` starts a comment. Flags
//! override file keys; the `CASIMIR_QUAD_TOL` environment variable supplies
//! the tolerance when neither does.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use crate::linalg::Vec3;

pub const TOLERANCE_ENV: &str = "CASIMIR_QUAD_TOL";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    TwoBody,
    ThreeBody,
    Sweep,
    McValidate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodChoice {
    Worldline,
    GreenTensor,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeChoice {
    Te,
    Tm,
    Cross,
    Total,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// How worldline three-body assignments are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionChoice {
    /// Base point fixed on one atom; TE + TM is the scalar sum.
    FixedBase,
    /// Every (base, ordering) assignment, three times the fixed-base value.
    AllAssignments,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Geometry {
    /// Unit separation for two atoms; required explicitly for three.
    Default,
    Positions(Vec<Vec3>),
    Triangle { b_over_c: f64, cos_theta: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub method: MethodChoice,
    pub mode: ModeChoice,
    pub convention: ConventionChoice,
    pub geometry: Geometry,
    /// Sweep grid size.
    pub grid: usize,
    pub tolerance: Option<f64>,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub seed: u64,
    pub n_paths: u64,
    pub eps_r: f64,
    pub separation: f64,
}

#[derive(Debug, Parser, Default)]
#[command(name = "casimir", version, about = "Retarded Casimir-Polder coefficients for two and three atoms")]
struct Cli {
    #[arg(value_enum)]
    command: Option<Command>,
    /// Flat `key = value` file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    method: Option<MethodChoice>,
    #[arg(long, value_enum)]
    mode: Option<ModeChoice>,
    #[arg(long, value_enum)]
    convention: Option<ConventionChoice>,
    /// Atom positions, `x,y,z;x,y,z[;x,y,z]`.
    #[arg(long, allow_hyphen_values = true)]
    positions: Option<String>,
    /// Two-body separation (the coefficient itself is scale free).
    #[arg(long)]
    separation: Option<String>,
    /// Triangle side ratio b/c.
    #[arg(long = "b-over-c")]
    b_over_c: Option<String>,
    /// Cosine of the angle between the sides b and c.
    #[arg(long = "cos-theta", allow_hyphen_values = true)]
    cos_theta: Option<String>,
    /// Number of cos(theta) points in a sweep.
    #[arg(long)]
    grid: Option<String>,
    /// Relative quadrature tolerance for every integral.
    #[arg(long)]
    tol: Option<String>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write results here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Monte Carlo seed.
    #[arg(long)]
    seed: Option<String>,
    /// Monte Carlo path count.
    #[arg(long = "n-paths")]
    n_paths: Option<String>,
    /// Relative permittivity of a uniform medium.
    #[arg(long = "eps-r")]
    eps_r: Option<String>,
}

/// A usage problem, reported with exit status 1.
#[derive(Debug, Clone, PartialEq)]
pub enum ParseOutcome {
    Usage(String),
    /// `--help` or `--version`; print and exit 0.
    Info(String),
}

const FILE_KEYS: &[&str] = &[
    "command",
    "method",
    "mode",
    "convention",
    "positions",
    "separation",
    "b-over-c",
    "cos-theta",
    "grid",
    "tol",
    "format",
    "output",
    "seed",
    "n-paths",
    "eps-r",
];

/// Parse `key = value` lines; unknown keys are rejected.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>, ParseOutcome> {
    let mut out = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ParseOutcome::Usage(format!("config line {}: expected `key = value`, got {line:?}", n + 1)));
        };
        let key = key.trim().to_string();
        if !FILE_KEYS.contains(&key.as_str()) {
            return Err(ParseOutcome::Usage(format!("unknown config key {key:?} on line {}", n + 1)));
        }
        out.insert(key, value.trim().to_string());
    }
    Ok(out)
}

fn number<T: std::str::FromStr>(key: &str, raw: &str) -> Result<T, ParseOutcome> {
    raw.trim()
        .parse()
        .map_err(|_| ParseOutcome::Usage(format!("malformed number {raw:?} for {key}")))
}

fn choice<T: ValueEnum>(key: &str, raw: &str) -> Result<T, ParseOutcome> {
    T::from_str(raw.trim(), true).map_err(|_| ParseOutcome::Usage(format!("invalid value {raw:?} for {key}")))
}

fn parse_positions(raw: &str) -> Result<Vec<Vec3>, ParseOutcome> {
    raw.split(';')
        .map(|p| {
            let c: Vec<f64> = p.split(',').map(|x| number("positions", x)).collect::<Result<_, _>>()?;
            <[f64; 3]>::try_from(c)
                .map_err(|_| ParseOutcome::Usage(format!("position {p:?} needs three coordinates")))
        })
        .collect()
}

/// Parse arguments (without the program name) with an optional config file
/// already read into memory, and an optional tolerance from the environment.
pub fn parse_config_with(
    argv: &[String],
    file: Option<&str>,
    env_tol: Option<&str>,
) -> Result<RunConfig, ParseOutcome> {
    let cli = Cli::try_parse_from(std::iter::once("casimir".to_string()).chain(argv.iter().cloned())).map_err(|e| {
        use clap::error::ErrorKind;
        match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ParseOutcome::Info(e.to_string()),
            _ => ParseOutcome::Usage(e.to_string()),
        }
    })?;
    let keys = match file {
        Some(text) => parse_config_file(text)?,
        None => BTreeMap::new(),
    };
    let from = |flag: &Option<String>, key: &str| flag.clone().or_else(|| keys.get(key).cloned());
    macro_rules! pick {
        ($flag:expr, $key:literal) => {
            match $flag {
                Some(v) => Some(v),
                None => keys.get($key).map(|s| choice($key, s)).transpose()?,
            }
        };
    }

    let command: Command =
        pick!(cli.command, "command").ok_or_else(|| ParseOutcome::Usage("missing command".into()))?;
    let method = pick!(cli.method, "method").unwrap_or(MethodChoice::Both);
    let mode = pick!(cli.mode, "mode").unwrap_or(ModeChoice::Total);
    let convention = pick!(cli.convention, "convention").unwrap_or(ConventionChoice::FixedBase);
    let format = pick!(cli.format, "format").unwrap_or(Format::Csv);
    let output = cli.output.or_else(|| keys.get("output").map(PathBuf::from));

    let positions = from(&cli.positions, "positions").map(|p| parse_positions(&p)).transpose()?;
    let b_over_c = from(&cli.b_over_c, "b-over-c").map(|v| number::<f64>("b-over-c", &v)).transpose()?;
    let cos_theta = from(&cli.cos_theta, "cos-theta").map(|v| number::<f64>("cos-theta", &v)).transpose()?;
    let separation = from(&cli.separation, "separation").map(|v| number::<f64>("separation", &v)).transpose()?;
    let grid = from(&cli.grid, "grid").map(|v| number::<usize>("grid", &v)).transpose()?;
    let seed = from(&cli.seed, "seed").map(|v| number::<u64>("seed", &v)).transpose()?;
    let n_paths = from(&cli.n_paths, "n-paths").map(|v| number::<u64>("n-paths", &v)).transpose()?;
    let eps_r = from(&cli.eps_r, "eps-r").map(|v| number::<f64>("eps-r", &v)).transpose()?;
    let tolerance = match from(&cli.tol, "tol") {
        Some(v) => Some(number::<f64>("tol", &v)?),
        None => env_tol.map(|v| number::<f64>(TOLERANCE_ENV, v)).transpose()?,
    };
    if let Some(t) = tolerance {
        if !(t > 0.0 && t < 1.0) {
            return Err(ParseOutcome::Usage(format!("tolerance must lie in (0, 1), got {t}")));
        }
    }

    let reject = |present: bool, what: &str| {
        if present {
            Err(ParseOutcome::Usage(format!("{what} is not accepted by {}", command_name(command))))
        } else {
            Ok(())
        }
    };
    if command != Command::McValidate {
        reject(seed.is_some(), "seed")?;
        reject(n_paths.is_some(), "n-paths")?;
        reject(eps_r.is_some(), "eps-r")?;
    }
    if command != Command::Sweep {
        reject(grid.is_some(), "grid")?;
    }

    let geometry = match command {
        Command::TwoBody => {
            reject(b_over_c.is_some() || cos_theta.is_some(), "b-over-c/cos-theta")?;
            match (positions, separation) {
                (Some(_), Some(_)) => {
                    return Err(ParseOutcome::Usage("give either positions or separation, not both".into()))
                }
                (Some(p), None) if p.len() != 2 => {
                    return Err(ParseOutcome::Usage(format!("two-body needs 2 positions, got {}", p.len())))
                }
                (Some(p), None) => Geometry::Positions(p),
                (None, Some(r)) => Geometry::Positions(vec![[0.0; 3], [0.0, 0.0, r]]),
                (None, None) => Geometry::Default,
            }
        }
        Command::ThreeBody => {
            reject(separation.is_some(), "separation")?;
            match (positions, b_over_c, cos_theta) {
                (Some(p), None, None) if p.len() == 3 => Geometry::Positions(p),
                (Some(p), None, None) => {
                    return Err(ParseOutcome::Usage(format!("three-body needs 3 positions, got {}", p.len())))
                }
                (None, Some(b_over_c), Some(cos_theta)) => Geometry::Triangle { b_over_c, cos_theta },
                _ => {
                    return Err(ParseOutcome::Usage(
                        "three-body needs --positions or both --b-over-c and --cos-theta".into(),
                    ))
                }
            }
        }
        Command::Sweep => {
            reject(positions.is_some() || separation.is_some() || cos_theta.is_some(), "explicit geometry")?;
            let b = b_over_c.ok_or_else(|| ParseOutcome::Usage("sweep needs --b-over-c".into()))?;
            Geometry::Triangle {
                b_over_c: b,
                cos_theta: f64::NAN,
            }
        }
        Command::McValidate => {
            reject(positions.is_some() || b_over_c.is_some() || cos_theta.is_some(), "explicit geometry")?;
            Geometry::Default
        }
    };
    let grid = grid.unwrap_or(41);
    if command == Command::Sweep && grid == 0 {
        return Err(ParseOutcome::Usage("grid must have at least one point".into()));
    }
    Ok(RunConfig {
        command,
        method,
        mode,
        convention,
        geometry,
        grid,
        tolerance,
        format,
        output,
        seed: seed.unwrap_or(42),
        n_paths: n_paths.unwrap_or(100_000),
        eps_r: eps_r.unwrap_or(1.0),
        separation: separation.unwrap_or(1.0),
    })
}

/// [`parse_config_with`] reading `--config` from disk and the tolerance from
/// the environment.
pub fn parse_config(argv: &[String]) -> Result<RunConfig, ParseOutcome> {
    let path = argv
        .iter()
        .position(|a| a == "--config")
        .and_then(|i| argv.get(i + 1).cloned())
        .or_else(|| argv.iter().find_map(|a| a.strip_prefix("--config=").map(String::from)));
    let text = match path {
        Some(p) => Some(
            std::fs::read_to_string(&p)
                .map_err(|e| ParseOutcome::Usage(format!("cannot read config file {p:?}: {e}")))?,
        ),
        None => None,
    };
    let env = std::env::var(TOLERANCE_ENV).ok();
    parse_config_with(argv, text.as_deref(), env.as_deref())
}

pub fn command_name(c: Command) -> &'static str {
    match c {
        Command::TwoBody => "two-body",
        Command::ThreeBody => "three-body",
        Command::Sweep => "sweep",
        Command::McValidate => "mc-validate",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    fn usage(r: Result<RunConfig, ParseOutcome>) -> String {
        match r {
            Err(ParseOutcome::Usage(m)) => m,
            other => panic!("expected usage error, got {other:?}"),
        }
    }

    #[test]
    fn flags_map_directly() {
        let c = parse_config_with(&args("sweep --b-over-c 0.5 --grid 41"), None, None).unwrap();
        assert_eq!(c.command, Command::Sweep);
        assert_eq!(c.grid, 41);
        assert!(matches!(c.geometry, Geometry::Triangle { b_over_c, .. } if b_over_c == 0.5));
        let c = parse_config_with(&args("three-body --b-over-c 1 --cos-theta -0.5"), None, None).unwrap();
        assert_eq!(c.geometry, Geometry::Triangle { b_over_c: 1.0, cos_theta: -0.5 });
    }

    #[test]
    fn bad_tokens_are_named() {
        assert!(usage(parse_config_with(&args("two-body --mode bogus"), None, None)).contains("bogus"));
        assert!(usage(parse_config_with(&args("two-body --frobnicate"), None, None)).contains("--frobnicate"));
        assert!(usage(parse_config_with(&args("sweep --b-over-c 0.x5"), None, None)).contains("0.x5"));
        assert!(usage(parse_config_with(&args("three-body"), None, None)).contains("positions"));
        assert!(usage(parse_config_with(&args("two-body --seed 3"), None, None)).contains("seed"));
    }

    #[test]
    fn file_keys_and_precedence() {
        let file = "# defaults\nmode = tm\nmethod = worldline\ntol = 1e-6\n";
        let c = parse_config_with(&args("two-body --mode te"), Some(file), Some("1e-3")).unwrap();
        assert_eq!((c.mode, c.method, c.tolerance), (ModeChoice::Te, MethodChoice::Worldline, Some(1e-6)));
        let c = parse_config_with(&args("two-body"), None, Some("1e-3")).unwrap();
        assert_eq!(c.tolerance, Some(1e-3));
        let m = usage(parse_config_with(&args("two-body"), Some("colour = red\n"), None));
        assert!(m.contains("colour"));
    }

    #[test]
    fn positions_parse() {
        let c = parse_config_with(&args("two-body --positions 0,0,0;1,2,-3"), None, None).unwrap();
        assert_eq!(c.geometry, Geometry::Positions(vec![[0.0; 3], [1.0, 2.0, -3.0]]));
        assert!(usage(parse_config_with(&args("two-body --positions 0,0;1,2,3"), None, None)).contains("three"));
    }
}
