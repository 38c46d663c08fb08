//! Command-line front end for `spinfloquet`.
//!
//! Exit status: 0 success, 1 usage or invalid input, 2 runtime or I/O
//! failure, 3 a self-check suite failed.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use spinfloquet::decay::DEFAULT_APPLICABILITY_THRESHOLD;
use spinfloquet::sweep::write_table;
use spinfloquet::units::Dimension;
use spinfloquet::{
    applicability_check, decay_rate, flip_result, run_sweep, scenario_composition, selfcheck, solve_floquet,
    write_outputs, DecayModel, DriveField, Error, Helicity, OutputFormat, PulseSpec, Quantity, SpinState,
    SweepConfig, Unit, Verdict,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;

pub const THREADS_ENV: &str = "SPINFLOQUET_THREADS";

#[derive(Debug, Parser)]
#[command(name = "spinfloquet", version, about = "Dressed spin states and pulse-induced spin flips")]
struct Cli {
    /// Write results here instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Output format; text when omitted for single-point commands
    #[arg(long, global = true, value_parser = parse_format)]
    format: Option<OutputFormat>,

    /// Worker threads [env: SPINFLOQUET_THREADS]
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Seed for the randomized checks (recorded in outputs)
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Suppress warnings and progress messages
    #[arg(long, short, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generalized frequency, splitting and quasienergies for one field
    Floquet(FieldArgs),
    /// Flip probabilities and scenario breakdown for one pulse
    Flip(FlipArgs),
    /// Evaluate an (H0, τ0) grid described by a JSON config
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the oracle equivalence suites
    Check,
}

#[derive(Debug, Args)]
struct FieldArgs {
    /// Drive amplitude with unit, e.g. "1000 T" or "5e6 G"
    #[arg(long)]
    h0: Quantity,

    /// Photon energy ħω0 with unit, e.g. "1 eV"
    #[arg(long, default_value = "1 eV")]
    energy: Quantity,

    /// +1 or -1
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    helicity: i32,
}

#[derive(Debug, Args)]
struct FlipArgs {
    #[command(flatten)]
    field: FieldArgs,

    /// Pulse duration with unit, e.g. "10 fs"
    #[arg(long)]
    tau0: Quantity,

    /// Phenomenological spin relaxation time; radiative decay when omitted
    #[arg(long)]
    tau_s: Option<Quantity>,

    /// Spins in the unpolarized ensemble
    #[arg(long, default_value_t = 2)]
    n_spins: u64,
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Usage(_) | Error::Config { .. } | Error::GuardExceeded { .. } | Error::Domain(_) => EXIT_USAGE,
        Error::Io { .. } | Error::Parse { .. } | Error::Resolution(_) | Error::Integration { .. } => EXIT_RUNTIME,
    }
}

fn in_unit(q: Quantity, dim: Dimension, canonical: Unit, what: &str) -> spinfloquet::Result<f64> {
    if q.unit.dimension() != dim {
        return Err(Error::Usage(format!("--{what} has the wrong unit `{}`", q.unit.symbol())));
    }
    q.to(canonical)
}

impl FieldArgs {
    fn field(&self) -> spinfloquet::Result<DriveField> {
        let h0 = in_unit(self.h0, Dimension::MagneticField, Unit::Gauss, "h0")?;
        let omega0 = in_unit(self.energy, Dimension::Frequency, Unit::RadPerSecond, "energy")?;
        DriveField::new(h0, omega0, Helicity::from_sign(self.helicity)?)
    }
}

fn threads_from_env() -> spinfloquet::Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Error::Usage(format!("{THREADS_ENV} must be a positive integer, got `{v}`"))),
        },
        _ => Ok(None),
    }
}

fn emit(output: Option<&Path>, text: &str, out: &mut dyn Write) -> spinfloquet::Result<()> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => out.write_all(text.as_bytes()).map_err(|source| Error::Io {
            path: PathBuf::from("<stdout>"),
            source,
        }),
    }
}

fn render(format: Option<OutputFormat>, pairs: &[(&str, f64)], text_units: &[&str]) -> String {
    match format {
        None => {
            let width = pairs.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            pairs
                .iter()
                .zip(text_units)
                .map(|((k, v), u)| format!("{k:<width$}  {v:e}{}{u}\n", if u.is_empty() { "" } else { " " }))
                .collect()
        }
        Some(OutputFormat::Csv) => {
            let header: Vec<&str> = pairs.iter().map(|(k, _)| *k).collect();
            let row: Vec<String> = pairs.iter().map(|(_, v)| format!("{v:e}")).collect();
            format!("{}\n{}\n", header.join(","), row.join(","))
        }
        Some(OutputFormat::Json) => {
            let map: serde_json::Map<String, serde_json::Value> =
                pairs.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
            format!("{}\n", serde_json::to_string_pretty(&map).unwrap())
        }
    }
}

fn floquet(cli: &Cli, args: &FieldArgs, out: &mut dyn Write) -> spinfloquet::Result<i32> {
    let sol = solve_floquet(&args.field()?);
    let pairs = [
        ("x", sol.x),
        ("Omega", sol.omega),
        ("Omega0", sol.omega_split),
        ("eps_g", sol.eps_g),
        ("eps_e", sol.eps_e),
        ("A", sol.a),
        ("B", sol.b),
    ];
    let units = ["", "rad/s", "rad/s", "eV", "eV", "", ""];
    emit(cli.output.as_deref(), &render(cli.format, &pairs, &units), out)?;
    Ok(EXIT_OK)
}

fn flip(cli: &Cli, args: &FlipArgs, out: &mut dyn Write, err: &mut dyn Write) -> spinfloquet::Result<i32> {
    let field = args.field.field()?;
    let tau0 = in_unit(args.tau0, Dimension::Time, Unit::Second, "tau0")?;
    let model = match args.tau_s {
        None => DecayModel::Radiative,
        Some(q) => DecayModel::phenomenological(in_unit(q, Dimension::Time, Unit::Second, "tau-s")?)?,
    };
    if let DecayModel::Phenomenological { tau_s } = model {
        let a = applicability_check(field.omega0(), tau_s, DEFAULT_APPLICABILITY_THRESHOLD);
        if a.verdict == Verdict::Warn && !cli.quiet {
            let _ = writeln!(err, "warning: ω0·τs = {:e} is below {}", a.product, a.threshold);
        }
    }
    let pulse = PulseSpec::new(field, tau0)?;
    let gamma = decay_rate(&pulse.solve(), model);
    let r = flip_result(&pulse, gamma);
    let minus = scenario_composition(&pulse, gamma, SpinState::Minus)?;
    let plus = scenario_composition(&pulse, gamma, SpinState::Plus)?;
    let pairs = [
        ("Gamma", gamma),
        ("W_minus", r.w_minus),
        ("W_plus", r.w_plus),
        ("Delta_W", r.delta_w),
        ("S_z", spinfloquet::induced_spin(args.n_spins, r.delta_w)?),
        ("minus_emission", minus.w),
        ("minus_flip_with_emission", minus.flip_with_emission),
        ("minus_flip_without_emission", minus.flip_without_emission),
        ("plus_emission", plus.w),
        ("plus_flip_with_emission", plus.flip_with_emission),
        ("plus_flip_without_emission", plus.flip_without_emission),
    ];
    let units = ["1/s", "", "", "", "hbar", "", "", "", "", "", ""];
    emit(cli.output.as_deref(), &render(cli.format, &pairs, &units), out)?;
    Ok(EXIT_OK)
}

fn sweep(cli: &Cli, config: &Path, out: &mut dyn Write, err: &mut dyn Write) -> spinfloquet::Result<i32> {
    let mut config = SweepConfig::from_path(config)?;
    if let Some(n) = cli.threads.or(config.threads).or(threads_from_env()?) {
        config.threads = Some(n);
    }
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    let format = cli.format.unwrap_or(config.format);
    let table = run_sweep(&config)?;
    if !cli.quiet {
        for w in &table.warnings {
            let _ = writeln!(err, "warning: {w}");
        }
    }
    match cli.output.clone().or(config.output.clone()) {
        Some(path) => {
            write_outputs(&table, format, &path)?;
            if !cli.quiet {
                let _ = writeln!(err, "wrote {} rows to {}", table.rows.len(), path.display());
            }
        }
        None => write_table(&table, format, out).map_err(|source| Error::Io {
            path: PathBuf::from("<stdout>"),
            source,
        })?,
    }
    Ok(EXIT_OK)
}

fn check(cli: &Cli, out: &mut dyn Write) -> spinfloquet::Result<i32> {
    let report = selfcheck::run_all(cli.seed.unwrap_or(selfcheck::DEFAULT_SEED));
    let text = match cli.format {
        Some(OutputFormat::Json) => format!("{}\n", serde_json::to_string_pretty(&report).unwrap()),
        _ => {
            let mut s = String::new();
            for suite in &report.suites {
                s += &format!(
                    "{} {:<24} worst {:.3e} (tol {:.0e})  {:.2}s  {}\n",
                    if suite.passed { "PASS" } else { "FAIL" },
                    suite.name,
                    suite.worst,
                    suite.tolerance,
                    suite.seconds,
                    suite.detail
                );
            }
            let failed = report.suites.iter().filter(|s| !s.passed).count();
            s += &format!("{} of {} suites passed\n", report.suites.len() - failed, report.suites.len());
            s
        }
    };
    emit(cli.output.as_deref(), &text, out)?;
    Ok(if report.passed() { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> spinfloquet::Result<i32> {
    if cli.threads == Some(0) {
        return Err(Error::Usage("--threads must be at least 1".into()));
    }
    if !matches!(cli.command, Command::Sweep { .. }) {
        if let Some(n) = cli.threads.or(threads_from_env()?) {
            // a second call in the same process keeps the first pool
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    match &cli.command {
        Command::Floquet(args) => floquet(cli, args, out),
        Command::Flip(args) => flip(cli, args, out, err),
        Command::Sweep { config } => sweep(cli, config, out, err),
        Command::Check => check(cli, out),
    }
}

/// Parses `argv` (including the program name), runs the command and
/// returns the process exit status.
pub fn cli_dispatch<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match run(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
