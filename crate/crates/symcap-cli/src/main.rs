//! Command-line front end: capacity optimization, group averaging, theorem
//! verification suites, symmetry checks, and the finiteness diagnostic.
//!
//! Configuration comes from a JSON file plus flag overrides (flags win).
//! Reports are deterministic given the seed, except for a single isolated
//! `timestamp` key.
//!
//! Exit codes: 0 success/pass, 1 usage or config error, 2 non-convergence
//! or failed verification, 3 infinite-capacity suspicion.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use symcap::capopt::{optimize_capacity, run_suite, CapacityResult, OptConfig, VerificationReport};
use symcap::channels::schema::ChannelDescriptor;
use symcap::channels::{known_symmetry_group, ChannelModel};
use symcap::infocap::{finiteness_diagnostic, FinitenessReport, FinitenessVerdict};
use symcap::matcore::{ComplexMatrix, RandomStream, UnitaryMatrix};
use symcap::symgroups::schema::GroupDescriptor;
use symcap::symgroups::{average, averaged_set, check_two_symmetry_condition, ReducedSet};

const LN_2: f64 = std::f64::consts::LN_2;

#[derive(Parser)]
#[command(
    name = "symcap",
    version,
    about = "Capacity-achieving input covariances from channel symmetries"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Random seed (also from SYMCAP_SEED; injected into all outputs).
    #[arg(long, global = true, env = "SYMCAP_SEED")]
    seed: Option<u64>,

    /// Monte Carlo sample count for estimates.
    #[arg(long, global = true)]
    samples: Option<u64>,

    /// Report file path; reports go to stdout when omitted.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Report format.
    #[arg(long, global = true, value_parser = ["json", "csv"])]
    format: Option<String>,

    /// Report information values in bits instead of nats.
    #[arg(long, global = true)]
    bits: bool,

    /// Cap the worker-thread count.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the symmetry-reduction capacity pipeline on a channel.
    Capacity,
    /// Apply a group's average operator to a matrix.
    Average,
    /// Run a verification suite (prop1, thm1b, corollary1..6, sec5, all).
    Verify { suite: Option<String> },
    /// Check the two-standard-symmetry condition for isotropic optimality.
    Symcheck,
    /// Diagnose capacity finiteness from the growth of E log(1 + ||H||).
    Finiteness,
}

/// JSON file configuration; all fields optional, commands validate their own.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    channel: Option<ChannelDescriptor>,
    group: Option<GroupDescriptor>,
    seed: Option<u64>,
    samples: Option<u64>,
    saa_samples: Option<u64>,
    max_iters: Option<usize>,
    conv_tol: Option<f64>,
    sizes: Option<Vec<u64>>,
    matrix: Option<ComplexMatrix>,
    v1: Option<ComplexMatrix>,
    v2: Option<ComplexMatrix>,
    suite: Option<String>,
    output: Option<PathBuf>,
    format: Option<String>,
    bits: Option<bool>,
    threads: Option<usize>,
}

/// Resolved run settings after merging config and flags.
struct Run {
    file: FileConfig,
    seed: u64,
    samples: Option<u64>,
    output: Option<PathBuf>,
    format: String,
    bits: bool,
}

impl Run {
    fn unit(&self) -> &'static str {
        if self.bits {
            "bits"
        } else {
            "nats"
        }
    }

    fn scale(&self) -> f64 {
        if self.bits {
            1.0 / LN_2
        } else {
            1.0
        }
    }

    fn opt_config(&self) -> OptConfig {
        let mut cfg = OptConfig::new(self.seed);
        if let Some(n) = self.file.saa_samples.or(self.samples) {
            cfg.n_saa_samples = n;
        }
        if let Some(m) = self.file.max_iters {
            cfg.max_iters = m;
        }
        if let Some(t) = self.file.conv_tol {
            cfg.conv_tol = t;
        }
        cfg
    }

    fn channel(&self) -> Result<ChannelModel, String> {
        let descriptor = self
            .file
            .channel
            .as_ref()
            .ok_or("config is missing the \"channel\" descriptor")?;
        descriptor.build().map_err(|e| e.to_string())
    }

    fn group_for(&self, model: &ChannelModel) -> Result<symcap::symgroups::SymmetryGroup, String> {
        match &self.file.group {
            Some(d) => d.build().map_err(|e| e.to_string()),
            None => known_symmetry_group(model).map_err(|e| e.to_string()),
        }
    }

    fn emit(&self, human: &str, machine: String) -> Result<(), String> {
        println!("{human}");
        match &self.output {
            Some(path) => {
                fs::write(path, machine).map_err(|e| format!("cannot write report: {e}"))?;
                println!("report written to {}", path.display());
            }
            None => println!("{machine}"),
        }
        Ok(())
    }
}

fn timestamp() -> f64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, String> {
    let file: FileConfig = match &cli.config {
        Some(path) => {
            let text =
                fs::read_to_string(path).map_err(|e| format!("cannot read config: {e}"))?;
            serde_json::from_str(&text).map_err(|e| format!("invalid config: {e}"))?
        }
        None => FileConfig::default(),
    };

    if let Some(threads) = cli.threads.or(file.threads) {
        if threads > 0 {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global()
                .map_err(|e| format!("cannot configure thread pool: {e}"))?;
        }
    }

    let run = Run {
        seed: cli.seed.or(file.seed).unwrap_or(0),
        samples: cli.samples.or(file.samples),
        output: cli.output.or_else(|| file.output.clone()),
        format: cli.format.or_else(|| file.format.clone()).unwrap_or_else(|| "json".into()),
        bits: cli.bits || file.bits.unwrap_or(false),
        file,
    };

    match cli.command {
        Command::Capacity => cmd_capacity(&run),
        Command::Average => cmd_average(&run),
        Command::Verify { suite } => cmd_verify(&run, suite),
        Command::Symcheck => cmd_symcheck(&run),
        Command::Finiteness => cmd_finiteness(&run),
    }
}

#[derive(Serialize)]
struct CapacityReportFile {
    seed: u64,
    unit: String,
    channel: String,
    group: String,
    result: CapacityResult,
    timestamp: f64,
}

fn cmd_capacity(run: &Run) -> Result<ExitCode, String> {
    let model = run.channel()?;
    let group = run.group_for(&model)?;
    let cfg = run.opt_config();
    let mut result = optimize_capacity(&model, &group, &cfg).map_err(|e| e.to_string())?;

    let scale = run.scale();
    result.capacity.value *= scale;
    result.capacity.std_error *= scale;
    result.saa_value *= scale;

    let human = format!(
        "channel: {}\ngroup: {}\nreduced set: {}\ncapacity: {:.9} ± {:.3e} {} ({} iterations, converged: {})\nq_star:\n{}",
        model.describe(),
        group.describe(),
        result.reduced_set.describe(),
        result.capacity.value,
        result.capacity.std_error,
        run.unit(),
        result.iterations,
        result.converged,
        result.q_star.matrix()
    );
    let converged = result.converged;
    let report = CapacityReportFile {
        seed: run.seed,
        unit: run.unit().into(),
        channel: model.describe(),
        group: group.describe(),
        result,
        timestamp: timestamp(),
    };
    let machine =
        serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;
    run.emit(&human, machine)?;
    Ok(if converged { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

#[derive(Serialize)]
struct AverageReportFile {
    seed: u64,
    group: String,
    input: ComplexMatrix,
    average: ComplexMatrix,
    reduced_set: ReducedSet,
    timestamp: f64,
}

fn cmd_average(run: &Run) -> Result<ExitCode, String> {
    let descriptor =
        run.file.group.as_ref().ok_or("config is missing the \"group\" descriptor")?;
    let group = descriptor.build().map_err(|e| e.to_string())?;
    let matrix =
        run.file.matrix.clone().ok_or("config is missing the \"matrix\" to average")?;
    let averaged = average(&group, &matrix).map_err(|e| e.to_string())?;
    let reduced = averaged_set(&group).map_err(|e| e.to_string())?;

    let human = format!(
        "group: {}\naverage A_G(A):\n{}reduced set: {}",
        group.describe(),
        averaged,
        reduced.describe()
    );
    let report = AverageReportFile {
        seed: run.seed,
        group: group.describe(),
        input: matrix,
        average: averaged,
        reduced_set: reduced,
        timestamp: timestamp(),
    };
    let machine = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;
    run.emit(&human, machine)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct VerifyReportFile {
    seed: u64,
    unit: String,
    suite: String,
    reports: Vec<VerificationReport>,
    pass: bool,
    timestamp: f64,
}

fn cmd_verify(run: &Run, suite_arg: Option<String>) -> Result<ExitCode, String> {
    let suite = suite_arg
        .or_else(|| run.file.suite.clone())
        .unwrap_or_else(|| "all".into());
    let cfg = run.opt_config();
    let reports = run_suite(&suite, &cfg).map_err(|e| e.to_string())?;
    let pass = reports.iter().all(|r| r.pass);

    let mut human = String::new();
    for report in &reports {
        for check in &report.checks {
            human.push_str(&format!(
                "[{}] {} — {} (margin {:.3e})\n",
                report.suite,
                check.description,
                if check.pass { "pass" } else { "FAIL" },
                check.margin
            ));
        }
    }
    human.push_str(&format!("overall: {}", if pass { "pass" } else { "FAIL" }));

    let machine = if run.format == "csv" {
        let mut csv = String::from("suite,check,pass,margin,seed\n");
        for report in &reports {
            csv.push_str(&report.csv_rows(run.seed));
        }
        csv
    } else {
        let report = VerifyReportFile {
            seed: run.seed,
            unit: "nats".into(),
            suite,
            reports,
            pass,
            timestamp: timestamp(),
        };
        serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?
    };
    run.emit(&human, machine)?;
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

#[derive(Serialize)]
struct SymcheckReportFile {
    seed: u64,
    v1_standard: bool,
    v2_standard: bool,
    min_entry: Option<f64>,
    entry_tol: f64,
    verdict: String,
    timestamp: f64,
}

fn cmd_symcheck(run: &Run) -> Result<ExitCode, String> {
    let v1 = run.file.v1.clone().ok_or("config is missing \"v1\"")?;
    let v2 = run.file.v2.clone().ok_or("config is missing \"v2\"")?;
    let v1 = UnitaryMatrix::new(v1).map_err(|e| format!("v1: {e}"))?;
    let v2 = UnitaryMatrix::new(v2).map_err(|e| format!("v2: {e}"))?;
    let report = check_two_symmetry_condition(&v1, &v2).map_err(|e| e.to_string())?;

    let verdict = match &report.verdict {
        symcap::symgroups::TwoSymmetryVerdict::IsotropicOptimal => "isotropic_optimal".to_string(),
        symcap::symgroups::TwoSymmetryVerdict::Inconclusive { reason } => {
            format!("inconclusive: {reason}")
        }
    };
    let human = format!(
        "V1 standard symmetry: {}\nV2 standard symmetry: {}\nmin |(W1* W2)_ij|: {}\nverdict: {verdict}",
        report.v1_standard,
        report.v2_standard,
        report
            .min_entry
            .map(|m| format!("{m:.6e} (tolerance {:.3e})", report.entry_tol))
            .unwrap_or_else(|| "n/a".into()),
    );
    let file = SymcheckReportFile {
        seed: run.seed,
        v1_standard: report.v1_standard,
        v2_standard: report.v2_standard,
        min_entry: report.min_entry,
        entry_tol: report.entry_tol,
        verdict,
        timestamp: timestamp(),
    };
    let machine = serde_json::to_string_pretty(&file).map_err(|e| e.to_string())?;
    run.emit(&human, machine)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct FinitenessReportFile {
    seed: u64,
    channel: String,
    report: FinitenessReport,
    timestamp: f64,
}

fn cmd_finiteness(run: &Run) -> Result<ExitCode, String> {
    let model = run.channel()?;
    let n_max = run.samples.unwrap_or(100_000);
    let sizes = run
        .file
        .sizes
        .clone()
        .unwrap_or_else(|| vec![n_max / 100, n_max / 10, n_max]);
    let mut rng = RandomStream::new(run.seed);
    let report =
        finiteness_diagnostic(&model, &sizes, &mut rng).map_err(|e| e.to_string())?;

    let mut human = format!("channel: {}\n", model.describe());
    for (n, mean) in &report.running_means {
        human.push_str(&format!("  n = {n:>9}: E log(1+||H||) ≈ {mean:.9}\n"));
    }
    human.push_str(&format!(
        "slope: {:.6} nats per e-fold\nverdict: {}",
        report.slope,
        match report.verdict {
            FinitenessVerdict::FiniteLikely => "finite_likely",
            FinitenessVerdict::InfiniteSuspected => "infinite_suspected",
        }
    ));
    let verdict = report.verdict;
    let file = FinitenessReportFile {
        seed: run.seed,
        channel: model.describe(),
        report,
        timestamp: timestamp(),
    };
    let machine = serde_json::to_string_pretty(&file).map_err(|e| e.to_string())?;
    run.emit(&human, machine)?;
    Ok(match verdict {
        FinitenessVerdict::FiniteLikely => ExitCode::SUCCESS,
        FinitenessVerdict::InfiniteSuspected => ExitCode::from(3),
    })
}
