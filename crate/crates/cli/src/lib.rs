//! Command plumbing for the `qmonogamy` binary: argument model, Kraus-file loading,
//! CSV/JSON/SVG rendering and the exit-code contract.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use qmonogamy::experiments::channel_checks;
use qmonogamy::{
    sweep, verify, ComplexMatrix, KrausChannel, LambdaSweepConfig, SweepKind, SweepRow,
    VerifyConfig, VerifySummary, C64,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable capping the worker pool size.
pub const THREADS_ENV: &str = "QMONOGAMY_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] qmonogamy::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed channel file: {0}")]
    ChannelFile(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        EXIT_USAGE
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "qmonogamy",
    version,
    about = "Entropic witnesses of non-Markovian quantum dynamics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArg,
}

#[derive(Subcommand, Debug, Clone)]
pub enum CommandArg {
    /// Data-processing and monogamy witnesses on the lambda circuit.
    SweepQmmi(SweepArgs),
    /// Interventional (multitime) monogamy witnesses on the lambda circuit.
    SweepMqmmi(SweepArgs),
    /// The extra data-processing candidates on the lambda circuit and its Markov reference.
    SweepDpiExtra(SweepArgs),
    /// Randomized verification on seeded Markov processes.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Output format; sweeps default to csv, verify to json.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 0.0)]
    pub lambda_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub lambda_max: f64,
    #[arg(long, default_value_t = 0.01)]
    pub step: f64,
    /// Also write a line chart of every column.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    /// Chain length: 4, 6 or 8 states.
    #[arg(long, default_value_t = 4)]
    pub steps: usize,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// JSON file with Kraus operators of an extra channel to check.
    #[arg(long)]
    pub channel: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Sweep(SweepKind),
    Verify,
}

/// Validated run parameters.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub grid: LambdaSweepConfig,
    pub samples: usize,
    pub steps: usize,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub svg: Option<PathBuf>,
    pub channel: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let (command, sweep_args) = match &cli.command {
            CommandArg::SweepQmmi(a) => (Command::Sweep(SweepKind::Qmmi), Some(a)),
            CommandArg::SweepMqmmi(a) => (Command::Sweep(SweepKind::Mqmmi), Some(a)),
            CommandArg::SweepDpiExtra(a) => (Command::Sweep(SweepKind::DpiExtra), Some(a)),
            CommandArg::Verify(_) => (Command::Verify, None),
        };
        let cfg = match (sweep_args, &cli.command) {
            (Some(a), _) => Self {
                command,
                grid: LambdaSweepConfig::new(a.lambda_min, a.lambda_max, a.step, a.out.seed)?,
                samples: 1,
                steps: 4,
                seed: a.out.seed,
                output: a.out.output.clone(),
                format: a.out.format.unwrap_or(Format::Csv),
                svg: a.svg.clone(),
                channel: None,
            },
            (None, CommandArg::Verify(v)) => Self {
                command,
                grid: LambdaSweepConfig::default(),
                samples: v.samples,
                steps: v.steps,
                seed: v.out.seed,
                output: v.out.output.clone(),
                format: v.out.format.unwrap_or(Format::Json),
                svg: None,
                channel: v.channel.clone(),
            },
            (None, _) => unreachable!("every sweep subcommand carries sweep arguments"),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.grid.validate()?;
        if self.samples == 0 {
            return Err(CliError::Config("--samples must be positive".into()));
        }
        if self.command == Command::Verify && ![4, 6, 8].contains(&self.steps) {
            return Err(CliError::Config(format!(
                "--steps must be 4, 6 or 8, got {}",
                self.steps
            )));
        }
        Ok(())
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct KrausFile {
    kraus: Vec<KrausEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct KrausEntry {
    re: Vec<Vec<f64>>,
    #[serde(default)]
    im: Option<Vec<Vec<f64>>>,
}

/// Parses `{"kraus": [{"re": [[..]], "im": [[..]]}, ..]}` (the `im` part is optional) and
/// checks trace preservation.
pub fn parse_kraus_json(text: &str) -> Result<KrausChannel, CliError> {
    let file: KrausFile = serde_json::from_str(text)?;
    let mut ops = Vec::with_capacity(file.kraus.len());
    for (k, entry) in file.kraus.iter().enumerate() {
        let rows = entry.re.len();
        let cols = entry.re.first().map_or(0, Vec::len);
        let ragged = |m: &Vec<Vec<f64>>| m.len() != rows || m.iter().any(|r| r.len() != cols);
        if rows == 0 || cols == 0 || ragged(&entry.re) || entry.im.as_ref().is_some_and(ragged) {
            return Err(CliError::Config(format!(
                "Kraus operator {k} is empty or ragged"
            )));
        }
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                let im = entry.im.as_ref().map_or(0.0, |m| m[r][c]);
                data.push(C64::new(entry.re[r][c], im));
            }
        }
        ops.push(ComplexMatrix::new(rows, cols, data)?);
    }
    Ok(KrausChannel::new(ops)?)
}

pub fn load_kraus_file(path: &Path) -> Result<KrausChannel, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_kraus_json(&text)
}

/// Twelve significant digits in scientific notation, independent of locale.
pub fn format_number(x: f64) -> String {
    format!("{x:.11e}")
}

fn header(kind: SweepKind) -> Vec<&'static str> {
    let mut h = vec!["lambda"];
    h.extend(kind.columns());
    h
}

pub fn sweep_csv(kind: SweepKind, rows: &[SweepRow]) -> String {
    let mut out = header(kind).join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&format_number(r.lambda));
        for col in kind.columns() {
            out.push(',');
            out.push_str(&format_number(
                r.get(col).expect("row carries every column"),
            ));
        }
        out.push('\n');
    }
    out
}

pub fn sweep_json(kind: SweepKind, rows: &[SweepRow]) -> String {
    let table: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| {
            std::iter::once(r.lambda)
                .chain(kind.columns().iter().map(|c| r.get(c).expect("column")))
                .collect()
        })
        .collect();
    let doc = serde_json::json!({ "columns": header(kind), "rows": table });
    let mut s = serde_json::to_string_pretty(&doc).expect("finite numbers serialize");
    s.push('\n');
    s
}

pub fn verify_csv(summary: &VerifySummary) -> String {
    let mut out = String::from("check,value,threshold,worst_seed,asserted,passed\n");
    for c in &summary.checks {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            c.name,
            format_number(c.value),
            format_number(c.threshold),
            c.worst_seed,
            c.asserted,
            c.passed
        );
    }
    out
}

pub fn verify_json(summary: &VerifySummary) -> String {
    let mut s = serde_json::to_string_pretty(summary).expect("summary serializes");
    s.push('\n');
    s
}

const PALETTE: [&str; 5] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];

/// A minimal line chart of every column against lambda.
pub fn sweep_svg(kind: SweepKind, rows: &[SweepRow]) -> String {
    let (w, h, pad) = (720.0, 440.0, 60.0);
    let cols = kind.columns();
    let xs: Vec<f64> = rows.iter().map(|r| r.lambda).collect();
    let (mut y_lo, mut y_hi) = (0.0f64, 0.0f64);
    for r in rows {
        for (_, v) in &r.values {
            y_lo = y_lo.min(*v);
            y_hi = y_hi.max(*v);
        }
    }
    if y_hi - y_lo < 1e-12 {
        y_hi = y_lo + 1.0;
    }
    let (x_lo, x_hi) = (
        xs.first().copied().unwrap_or(0.0),
        xs.last().copied().unwrap_or(1.0),
    );
    let x_span = if x_hi > x_lo { x_hi - x_lo } else { 1.0 };
    let px = |x: f64| pad + (x - x_lo) / x_span * (w - 2.0 * pad);
    let py = |y: f64| h - pad - (y - y_lo) / (y_hi - y_lo) * (h - 2.0 * pad);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{pad}" y="{pad}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        w - 2.0 * pad,
        h - 2.0 * pad
    );
    let zero = py(0.0);
    let _ = writeln!(
        s,
        r##"<line x1="{pad}" y1="{zero:.2}" x2="{}" y2="{zero:.2}" stroke="#888" stroke-dasharray="4 3"/>"##,
        w - pad
    );
    for (label, x, y, anchor) in [
        (format!("{x_lo}"), pad, h - pad + 18.0, "start"),
        (format!("{x_hi}"), w - pad, h - pad + 18.0, "end"),
        (format!("{y_hi:.3}"), pad - 6.0, pad + 4.0, "end"),
        (format!("{y_lo:.3}"), pad - 6.0, h - pad, "end"),
    ] {
        let _ = writeln!(
            s,
            r#"<text x="{x}" y="{y}" text-anchor="{anchor}">{label}</text>"#
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">lambda</text>"#,
        w / 2.0,
        h - pad + 34.0
    );
    for (i, col) in cols.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<String> = rows
            .iter()
            .map(|r| format!("{:.2},{:.2}", px(r.lambda), py(r.get(col).expect("column"))))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            pts.join(" ")
        );
        let ly = pad + 16.0 * (i as f64 + 1.0);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{ly}" fill="{color}">{col}</text>"#,
            w - pad - 80.0
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Exit code for a verification summary, with one note per failed check naming the
/// seed that produced it.
pub fn verdict(summary: &VerifySummary) -> (i32, Vec<String>) {
    let notes: Vec<String> = summary
        .failures()
        .map(|c| {
            format!(
                "violation: {} = {:e} (threshold {:e}) at seed {}",
                c.name, c.value, c.threshold, c.worst_seed
            )
        })
        .collect();
    let code = if summary.passed {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    };
    (code, notes)
}

/// What a run produced: the exit code and the rendered document.
#[derive(Debug)]
pub struct RunOutcome {
    pub exit_code: i32,
    pub document: String,
    /// Human-readable notes for stderr (failed checks and their seeds).
    pub notes: Vec<String>,
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    fs::write(path, content).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

/// Runs a validated configuration. Files named by `--output`/`--svg` are written here;
/// with no `--output` the caller prints `document`.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome, CliError> {
    cfg.validate()?;
    let (exit_code, document, notes) = match cfg.command {
        Command::Sweep(kind) => {
            let rows = sweep(kind, &cfg.grid)?;
            if let Some(path) = &cfg.svg {
                write_file(path, &sweep_svg(kind, &rows))?;
            }
            let doc = match cfg.format {
                Format::Csv => sweep_csv(kind, &rows),
                Format::Json => sweep_json(kind, &rows),
            };
            (EXIT_OK, doc, Vec::new())
        }
        Command::Verify => {
            // Load the extra channel first so a bad file fails fast.
            let extra = cfg.channel.as_deref().map(load_kraus_file).transpose()?;
            let mut summary = verify(&VerifyConfig {
                steps: cfg.steps,
                samples: cfg.samples,
                seed: cfg.seed,
            })?;
            if let Some(ch) = &extra {
                summary.extend(channel_checks(ch, cfg.samples, cfg.seed)?);
            }
            let (code, notes) = verdict(&summary);
            let doc = match cfg.format {
                Format::Csv => verify_csv(&summary),
                Format::Json => verify_json(&summary),
            };
            (code, doc, notes)
        }
    };
    if let Some(path) = &cfg.output {
        write_file(path, &document)?;
    }
    Ok(RunOutcome {
        exit_code,
        document,
        notes,
    })
}

/// Reads the thread cap; `None` when unset.
pub fn thread_cap(value: Option<&str>) -> Result<Option<usize>, CliError> {
    match value {
        None => Ok(None),
        Some(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Config(format!(
                "{THREADS_ENV} must be a positive integer, got {v:?}"
            ))),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<RunConfig, CliError> {
        let cli = Cli::try_parse_from(std::iter::once("qmonogamy").chain(args.iter().copied()))
            .map_err(|e| CliError::Config(e.to_string()))?;
        RunConfig::from_cli(&cli)
    }

    #[test]
    fn number_format() {
        assert_eq!(format_number(0.1), "1.00000000000e-1");
        assert_eq!(format_number(-2.5), "-2.50000000000e0");
        assert_eq!(format_number(0.0), "0.00000000000e0");
    }

    #[test]
    fn config_validation() {
        assert!(parse(&["sweep-qmmi"]).is_ok());
        assert!(parse(&["sweep-qmmi", "--lambda-min", "0.6", "--lambda-max", "0.5"]).is_err());
        assert!(parse(&["sweep-mqmmi", "--step", "0"]).is_err());
        assert!(parse(&["verify", "--steps", "5"]).is_err());
        assert!(parse(&["verify", "--samples", "0"]).is_err());
        let v = parse(&["verify", "--steps", "8", "--samples", "3", "--seed", "9"]).unwrap();
        assert_eq!((v.steps, v.samples, v.seed), (8, 3, 9));
        assert!(parse(&["sweep-qmmi", "--format", "xml"]).is_err());
    }

    #[test]
    fn kraus_json() {
        let id = r#"{"kraus": [{"re": [[1, 0], [0, 1]]}]}"#;
        let ch = parse_kraus_json(id).unwrap();
        assert_eq!((ch.d_in(), ch.d_out()), (2, 2));
        let h = 0.5f64.sqrt();
        let dephase = format!(
            r#"{{"kraus": [{{"re": [[{h}, 0], [0, {h}]]}}, {{"re": [[{h}, 0], [0, 0]], "im": [[0, 0], [0, {h}]]}}]}}"#
        );
        assert!(parse_kraus_json(&dephase).is_ok());
        let lossy = r#"{"kraus": [{"re": [[1, 0], [0, 0]]}]}"#;
        let err = parse_kraus_json(lossy).unwrap_err();
        assert!(err.to_string().contains("trace"), "{err}");
        assert!(parse_kraus_json(r#"{"kraus": [{"re": [[1, 0], [0]]}]}"#).is_err());
        assert!(parse_kraus_json(r#"{"kraus": []}"#).is_err());
        assert!(parse_kraus_json("not json").is_err());
        assert!(parse_kraus_json(r#"{"kraus": [{"re": [[1]], "extra": 1}]}"#).is_err());
    }

    #[test]
    fn csv_and_json_layout() {
        let grid = LambdaSweepConfig::new(0.1, 0.1, 0.01, 0).unwrap();
        let rows = sweep(SweepKind::Qmmi, &grid).unwrap();
        let csv = sweep_csv(SweepKind::Qmmi, &rows);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("lambda,DP1,DP2,DP3,DP4,M4"));
        assert!(lines.next().unwrap().starts_with("1.00000000000e-1,"));
        let json: serde_json::Value =
            serde_json::from_str(&sweep_json(SweepKind::Qmmi, &rows)).unwrap();
        assert_eq!(json["columns"][5], "M4");
        assert_eq!(json["rows"][0].as_array().unwrap().len(), 6);
    }

    #[test]
    fn svg_is_well_formed_enough() {
        let grid = LambdaSweepConfig::new(0.0, 0.2, 0.1, 0).unwrap();
        let rows = sweep(SweepKind::DpiExtra, &grid).unwrap();
        let svg = sweep_svg(SweepKind::DpiExtra, &rows);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 4);
    }

    #[test]
    fn violations_exit_one_with_seed() {
        let mut summary = verify(&VerifyConfig {
            steps: 4,
            samples: 2,
            seed: 0,
        })
        .unwrap();
        assert_eq!(verdict(&summary).0, EXIT_OK);
        let mut bad = summary.checks[0].clone();
        bad.name = "planted".into();
        bad.value = -1.0;
        bad.worst_seed = 42;
        bad.passed = false;
        summary.extend(vec![bad]);
        let (code, notes) = verdict(&summary);
        assert_eq!(code, EXIT_VIOLATION);
        assert_eq!(notes.len(), 1);
        assert!(notes[0].contains("planted") && notes[0].contains("seed 42"));
    }

    #[test]
    fn threads_env() {
        assert_eq!(thread_cap(None).unwrap(), None);
        assert_eq!(thread_cap(Some("3")).unwrap(), Some(3));
        assert!(thread_cap(Some("0")).is_err());
        assert!(thread_cap(Some("many")).is_err());
    }
}
