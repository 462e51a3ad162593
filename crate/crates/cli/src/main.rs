use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use steklov_core::numtheory::{find_witnesses, straddling_gap, verify_empty_interval_in};
use steklov_core::recovery::{estimate_min_generator, max_boundary_length};
use steklov_core::spectra::{Source, SourceSpec, Truncation, WeightSpec};
use steklov_core::{
    gaps, merge_progressions, recover, BoundaryProfile, Error, GeneratorSet, NoiseModel, PeelParams, RecoveryReport,
    SpectrumFile, SpectrumMeta,
};

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_ALGORITHM: u8 = 3;

const DEFAULT_COUNT: usize = 10_000;

// stdout write errors (a closed pipe) become ordinary failures
macro_rules! outln {
    ($($arg:tt)*) => {
        writeln!(io::stdout().lock(), $($arg)*)?
    };
}

#[derive(Parser)]
#[command(name = "steklov", version, about = "Steklov spectra and boundary-length recovery")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a spectrum file.
    Synth(SynthArgs),
    /// Recover the number and lengths of boundary components.
    Recover(RecoverArgs),
    /// Compare the recovered profile with the known truth.
    Verify(VerifyArgs),
    /// Export consecutive gaps as CSV.
    Gaps(GapsArgs),
    /// Search for simultaneous approximation witnesses.
    Approx(ApproxArgs),
}

#[derive(Clone, Copy, ValueEnum, Default)]
enum OutputFormat {
    #[default]
    Text,
    Json,
}

#[derive(Args)]
struct SynthArgs {
    /// Disk of this radius (repeat for a disjoint union).
    #[arg(long, value_name = "RADIUS", allow_hyphen_values = true)]
    disk: Vec<f64>,
    /// Annulus with inner and outer radius.
    #[arg(long, num_args = 2, value_names = ["INNER", "OUTER"], allow_hyphen_values = true)]
    annulus: Option<Vec<f64>>,
    /// Unit disk with boundary weight a0,a1,b1,a2,b2,...
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    weight: Option<Vec<f64>>,
    /// Synthetic S(R) from these generators.
    #[arg(long, value_delimiter = ',')]
    generators: Option<Vec<f64>>,
    /// Synthetic S(R) from these boundary lengths (generators 2π/ℓ).
    #[arg(long, value_delimiter = ',')]
    lengths: Option<Vec<f64>>,
    /// Fourier modes for --annulus and --weight.
    #[arg(long, default_value_t = 200)]
    modes: usize,
    /// Noise for synthetic spectra: none, exp:C:BETA or pow:C:P.
    #[arg(long, default_value = "none")]
    noise: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Keep eigenvalues up to this value.
    #[arg(long, conflicts_with = "count")]
    cutoff: Option<f64>,
    /// Keep this many eigenvalues (default 10000 when no cutoff is given).
    #[arg(long)]
    count: Option<usize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct PeelArgs {
    /// Proximity threshold, in units of the current generator.
    #[arg(long, default_value_t = 0.1)]
    threshold: f64,
    /// Tail fraction used to estimate the gap limsup.
    #[arg(long, default_value_t = 0.5)]
    tail: f64,
    /// Leading eigenvalues ignored.
    #[arg(long, default_value_t = 8)]
    skip: usize,
    /// Fraction of the top of the data excluded from peeling.
    #[arg(long, default_value_t = 0.1)]
    edge_margin: f64,
    #[arg(long, default_value_t = 16)]
    max_components: usize,
}

impl PeelArgs {
    fn params(&self) -> PeelParams {
        PeelParams {
            proximity_threshold: self.threshold,
            tail_fraction: self.tail,
            skip_prefix: self.skip,
            edge_margin: self.edge_margin,
            max_components: self.max_components,
            ..PeelParams::default()
        }
    }
}

#[derive(Args)]
struct RecoverArgs {
    /// Spectrum file ("-" for stdin).
    input: PathBuf,
    #[command(flatten)]
    peel: PeelArgs,
    /// Print every peeling step.
    #[arg(long)]
    trace: bool,
    #[arg(long, value_enum, default_value_t)]
    format: OutputFormat,
}

#[derive(Args)]
struct VerifyArgs {
    input: PathBuf,
    /// Boundary lengths to compare against (defaults to the file's truth).
    #[arg(long, value_delimiter = ',')]
    truth: Option<Vec<f64>>,
    /// Max relative error on lengths.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[command(flatten)]
    peel: PeelArgs,
    #[arg(long, value_enum, default_value_t)]
    format: OutputFormat,
}

#[derive(Args)]
struct GapsArgs {
    input: PathBuf,
    #[command(flatten)]
    peel: PeelArgs,
}

#[derive(Args)]
struct ApproxArgs {
    /// Generators; normalized so that the smallest is 1.
    #[arg(long, value_delimiter = ',', required = true)]
    generators: Vec<f64>,
    #[arg(long, default_value_t = 10_000)]
    q_max: u64,
    #[arg(long, default_value_t = 1e-9)]
    rational_tol: f64,
    /// Check each witness interval against S(R).
    #[arg(long)]
    verify: bool,
    #[arg(long, value_enum, default_value_t)]
    format: OutputFormat,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NoProgressionStructure(_) | Error::GeneratorNotConfirmed(_) | Error::LinearAlgebra(_) => {
                EXIT_ALGORITHM
            }
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self::usage(e.to_string())
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Synth(a) => synth(a),
        Command::Recover(a) => recover_cmd(a),
        Command::Verify(a) => verify(a),
        Command::Gaps(a) => gaps_cmd(a),
        Command::Approx(a) => approx(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn parse_noise(spec: &str, seed: u64) -> Result<NoiseModel, Failure> {
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |s: &str| {
        s.parse::<f64>()
            .map_err(|_| Failure::usage(format!("bad number '{s}' in --noise")))
    };
    let model = match parts.as_slice() {
        ["none"] => NoiseModel::NONE,
        ["exp", c, beta] => NoiseModel::exp_decay(num(c)?, num(beta)?, seed),
        ["pow", c, p] => NoiseModel::power_decay(num(c)?, num(p)?, seed),
        _ => {
            return Err(Failure::usage(format!(
                "--noise must be none, exp:C:BETA or pow:C:P, got '{spec}'"
            )))
        }
    };
    model.validate()?;
    Ok(model)
}

fn synth(a: SynthArgs) -> CmdResult {
    let noise = parse_noise(&a.noise, a.seed)?;
    let mut sources = Vec::new();
    for &radius in &a.disk {
        sources.push(Source::Disk { radius });
    }
    if let Some(r) = &a.annulus {
        let max_mode = u32::try_from(a.modes).map_err(|_| Failure::usage("--modes too large"))?;
        sources.push(Source::Annulus {
            inner_radius: r[0],
            outer_radius: r[1],
            max_mode,
        });
    }
    if let Some(coefficients) = &a.weight {
        sources.push(Source::WeightedDisk {
            weight: WeightSpec::from_interleaved(coefficients)?,
            modes: a.modes,
        });
    }
    let synthetic = match (&a.generators, &a.lengths) {
        (Some(_), Some(_)) => return Err(Failure::usage("give --generators or --lengths, not both")),
        (Some(g), None) => Some(GeneratorSet::new(g.clone())?),
        (None, Some(l)) => Some(GeneratorSet::from_lengths(l)?),
        (None, None) => None,
    };
    let has_noise = noise != NoiseModel::NONE;
    match synthetic {
        Some(generators) => sources.push(Source::Synthetic { generators, noise }),
        None if has_noise => return Err(Failure::usage("--noise applies to --generators/--lengths only")),
        None => {}
    }
    let source = match sources.len() {
        0 => {
            return Err(Failure::usage(
                "no source given (--disk, --annulus, --weight, --generators or --lengths)",
            ))
        }
        1 => sources.pop().unwrap(),
        _ => Source::Union { parts: sources },
    };
    let truncation = match (a.cutoff, a.count) {
        (Some(c), _) => Some(Truncation::Cutoff(c)),
        (None, Some(n)) => Some(Truncation::Count(n)),
        (None, None) => Some(Truncation::Count(DEFAULT_COUNT)),
    };
    let spec = SourceSpec::new(source, truncation);
    let values = spec.generate()?;
    let meta = SpectrumMeta {
        truth: Some(spec.boundary_lengths()),
        cutoff: a.cutoff,
        seed: has_noise.then_some(a.seed),
        source: Some(spec),
    };
    let text = SpectrumFile::new(meta, values).to_text();
    match a.output {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(0)
}

fn read_file(path: &PathBuf) -> Result<SpectrumFile, Failure> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?
    };
    Ok(SpectrumFile::parse(&text)?)
}

fn print_lengths(lengths: &[f64]) -> String {
    let items: Vec<String> = lengths.iter().map(|l| format!("{l:.9}")).collect();
    format!("[{}]", items.join(", "))
}

fn report_text(report: &RecoveryReport, trace: bool) -> String {
    let mut out = format!(
        "k={}, lengths={}\n",
        report.profile.k,
        print_lengths(&report.profile.lengths)
    );
    if trace {
        for (i, s) in report.steps.iter().enumerate() {
            out.push_str(&format!(
                "step {}: L={:.12} generator={:.15} N0={} j_max={} removed={} discarded={} remainder={}\n",
                i + 1,
                s.l_estimate,
                s.generator,
                s.n0,
                s.j_max,
                2 * s.removed_pairs.len(),
                s.discarded_above,
                s.remainder_size
            ));
        }
        out.push_str(&format!("residual={}\n", report.residual_size));
    }
    out
}

fn report_json(report: &RecoveryReport, trace: bool) -> serde_json::Value {
    if trace {
        serde_json::to_value(report).expect("report serializes")
    } else {
        json!({
            "k": report.profile.k,
            "lengths": report.profile.lengths,
            "generators": report.generators,
            "residual_size": report.residual_size,
        })
    }
}

fn recover_cmd(a: RecoverArgs) -> CmdResult {
    let file = read_file(&a.input)?;
    let report = recover(&file.values, &a.peel.params())?;
    let text = match a.format {
        OutputFormat::Text => report_text(&report, a.trace),
        OutputFormat::Json => format!("{}\n", report_json(&report, a.trace)),
    };
    io::stdout().write_all(text.as_bytes())?;
    Ok(0)
}

fn verify(a: VerifyArgs) -> CmdResult {
    let file = read_file(&a.input)?;
    let truth = a
        .truth
        .or(file.meta.truth.clone())
        .ok_or_else(|| Failure::usage("no truth in the file and none given with --truth"))?;
    let truth = BoundaryProfile::new(truth)?;
    let report = recover(&file.values, &a.peel.params())?;
    let error = report.profile.max_relative_error(&truth);
    let pass = error.is_some_and(|e| e <= a.tol);
    match a.format {
        OutputFormat::Text => {
            outln!(
                "{}: recovered k={} lengths={}; truth k={} lengths={}; max relative error {}",
                if pass { "PASS" } else { "FAIL" },
                report.profile.k,
                print_lengths(&report.profile.lengths),
                truth.k,
                print_lengths(&truth.lengths),
                error.map_or("n/a (component count differs)".to_string(), |e| format!("{e:.3e}")),
            );
        }
        OutputFormat::Json => outln!(
            "{}",
            json!({
                "pass": pass,
                "tolerance": a.tol,
                "max_relative_error": error,
                "recovered": report.profile,
                "truth": truth,
            })
        ),
    }
    Ok(if pass { 0 } else { EXIT_VERIFY_FAILED })
}

fn gaps_cmd(a: GapsArgs) -> CmdResult {
    let file = read_file(&a.input)?;
    let values = file.values.values();
    let g = gaps(&file.values)?;
    let mut out = io::BufWriter::new(io::stdout().lock());
    writeln!(out, "index,value,gap")?;
    for (i, gap) in g.iter().enumerate() {
        writeln!(out, "{i},{:.16e},{gap:.16e}", values[i])?;
    }
    out.flush()?;
    let params = a.peel.params();
    match (
        estimate_min_generator(&file.values, &params),
        max_boundary_length(&file.values, &params),
    ) {
        (Ok(l), Ok(len)) => eprintln!("tail_max_gap={l:.15} l_max={len:.15}"),
        (Err(e), _) | (_, Err(e)) => eprintln!("summary unavailable: {e}"),
    }
    Ok(0)
}

fn approx(a: ApproxArgs) -> CmdResult {
    let generators = GeneratorSet::new(a.generators)?;
    let search = find_witnesses(&generators, a.q_max, a.rational_tol)?;
    let spectrum = if a.verify {
        let top = search.witnesses.iter().map(|w| w.anchor()).fold(1.0, f64::max) + 1.0;
        Some((merge_progressions(&generators, top)?, top))
    } else {
        None
    };
    let rows: Vec<serde_json::Value> = search
        .witnesses
        .iter()
        .map(|w| {
            let (lo, hi) = w.interval();
            let check = spectrum.as_ref().map(|(s, top)| {
                let empty = verify_empty_interval_in(s, w, *top).unwrap_or(false);
                (empty, straddling_gap(s, w))
            });
            json!({
                "q": w.q,
                "qx": w.q * w.x,
                "residuals": w.approximants.iter().map(|ap| ap.residual).collect::<Vec<_>>(),
                "interval": [lo, hi],
                "empty": check.map(|c| c.0),
                "straddling_gap": check.and_then(|c| c.1),
            })
        })
        .collect();
    let all_empty = rows.iter().all(|r| r["empty"].as_bool().unwrap_or(true));
    match a.format {
        OutputFormat::Json => outln!(
            "{}",
            json!({
                "x": search.x,
                "m": search.m,
                "degenerate": search.degenerate,
                "classification": search.classification,
                "witnesses": rows,
            })
        ),
        OutputFormat::Text => {
            outln!(
                "X={} m={} degenerate={} witnesses={}",
                search.x,
                search.m,
                search.degenerate,
                rows.len()
            );
            outln!("q,qX,max_residual,interval_lo,interval_hi,empty,straddling_gap");
            for (w, r) in search.witnesses.iter().zip(&rows) {
                let (lo, hi) = w.interval();
                let max_res = w.approximants.iter().map(|ap| ap.residual).fold(0.0, f64::max);
                let opt = |v: &serde_json::Value| if v.is_null() { String::new() } else { v.to_string() };
                outln!(
                    "{},{},{max_res:.6e},{lo:.9},{hi:.9},{},{}",
                    w.q,
                    w.q * w.x,
                    opt(&r["empty"]),
                    opt(&r["straddling_gap"])
                );
            }
        }
    }
    Ok(if all_empty { 0 } else { EXIT_VERIFY_FAILED })
}
