//! `ligi`: run Lie group integrator experiments and emit CSV/JSON.

mod config;
mod run;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use serde_json::json;

use config::{preset_help, RunConfig, Settings};
use ligi::diagnostics::invariant_drift;

#[derive(Parser, Debug)]
#[command(name = "ligi", version, about = "Lie group integrators for ODEs on manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integrate and write the trajectory as CSV.
    Integrate(RunArgs),
    /// Step-size sweep; prints the fitted convergence order as JSON.
    Order(RunArgs),
    /// Integrate and report per-invariant drift as JSON.
    Drift(RunArgs),
}

#[derive(Args, Debug, Default)]
struct RunArgs {
    /// frb_s2, frb_s3, heavytop, duffing, torus or pca.
    #[arg(long)]
    problem: Option<String>,
    /// lie_euler, heun_rkmk, heun_cg_left, heun_cg_right, rkmk, rkmk4, cf4; slgi, theta, rkmk_theta (heavytop); dg (frb_s3).
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    h: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,
    /// Named configuration; see the list below.
    #[arg(long)]
    preset: Option<String>,
    /// JSON file with any of the flag names as keys (snake_case); flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output CSV path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for random initial data.
    #[arg(long)]
    seed: Option<u64>,
    /// Butcher tableau for `rkmk`: euler, heun, midpoint, kutta, gauss2.
    #[arg(long)]
    tableau: Option<String>,
    /// Truncation order of the dexpinv series for `rkmk`.
    #[arg(long)]
    series_order: Option<usize>,
    /// Discrete differential for `dg`: gonzalez or avf.
    #[arg(long)]
    tdd: Option<String>,
    /// Gauss-Legendre nodes for the avf differential.
    #[arg(long)]
    nodes: Option<usize>,
    /// Duffing frame: r2, sl2 or se2.
    #[arg(long)]
    frame: Option<String>,
    /// Initial state, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    y0: Option<Vec<f64>>,
    /// Principal moments of inertia, comma separated.
    #[arg(long, value_delimiter = ',')]
    inertia: Option<Vec<f64>>,
    /// Duffing linear coefficient.
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    /// Duffing cubic coefficient.
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,
    /// Diagonal of A for pca, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    spectrum: Option<Vec<f64>>,
    /// Number of frame columns for pca.
    #[arg(long)]
    k: Option<usize>,
    /// Step sizes for `order`, comma separated and decreasing.
    #[arg(long, value_delimiter = ',')]
    h_list: Option<Vec<f64>>,
    /// Final time for `order`.
    #[arg(long)]
    t_end: Option<f64>,
}

impl RunArgs {
    fn to_config(&self) -> RunConfig {
        RunConfig {
            preset: self.preset.clone(),
            problem: self.problem.clone(),
            scheme: self.scheme.clone(),
            h: self.h,
            steps: self.steps,
            theta: self.theta,
            tableau: self.tableau.clone(),
            series_order: self.series_order,
            tdd: self.tdd.clone(),
            nodes: self.nodes,
            frame: self.frame.clone(),
            inertia: self.inertia.clone(),
            y0: self.y0.clone(),
            a: self.a,
            b: self.b,
            spectrum: self.spectrum.clone(),
            k: self.k,
            seed: self.seed,
            out: self.out.clone(),
            h_list: self.h_list.clone(),
            t_end: self.t_end,
        }
    }

    fn settings(&self) -> Result<Settings, String> {
        let file = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        Settings::resolve(file.overlay(self.to_config()))
    }
}

enum Failure {
    Invalid(String),
    Diverged(String),
    Other(String),
}

impl From<ligi::Error> for Failure {
    fn from(e: ligi::Error) -> Self {
        match e {
            ligi::Error::Diverged { .. } | ligi::Error::FixedPointDivergence { .. } => Failure::Diverged(e.to_string()),
            ligi::Error::InvalidInput(_) => Failure::Invalid(e.to_string()),
            _ => Failure::Other(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Other(e.to_string())
    }
}

fn write_csv(run: &run::Run, out: Option<&PathBuf>) -> io::Result<()> {
    let sink: Box<dyn Write> = match out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = BufWriter::new(sink);
    let header: Vec<&str> = std::iter::once("t")
        .chain(run.labels.iter().map(String::as_str))
        .chain(run.invariant_names.iter().map(String::as_str))
        .collect();
    writeln!(w, "{}", header.join(","))?;
    for row in &run.rows {
        let mut line = format!("{:.16e}", row.t);
        for v in row.state.iter().chain(&row.invariants) {
            line.push_str(&format!(",{v:.16e}"));
        }
        writeln!(w, "{line}")?;
    }
    w.flush()
}

fn integrate(s: &Settings) -> Result<(), Failure> {
    let r = run::run(s, s.h, s.steps)?;
    write_csv(&r, s.out.as_ref())?;
    Ok(())
}

fn order(s: &Settings) -> Result<(), Failure> {
    let rep = run::order(s)?;
    let out = json!({
        "scheme": rep.scheme,
        "slope": rep.slope,
        "h": rep.h,
        "errors": rep.errors,
    });
    println!("{out}");
    Ok(())
}

fn drift(s: &Settings) -> Result<(), Failure> {
    let r = run::run(s, s.h, s.steps)?;
    if r.invariant_names.is_empty() {
        return Err(Failure::Invalid("problem has no invariants".into()));
    }
    if let Some(path) = &s.out {
        write_csv(&r, Some(path))?;
    }
    let times: Vec<f64> = r.rows.iter().map(|row| row.t).collect();
    let reports: Vec<_> = r
        .invariant_names
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let values: Vec<f64> = r.rows.iter().map(|row| row.invariants[i]).collect();
            let d = invariant_drift(name, &times, &values);
            json!({
                "name": d.name,
                "initial": d.initial,
                "max_relative_deviation": d.max_relative_deviation,
                "slope": d.slope,
                "relative_drift": d.relative_drift,
                "drifting": d.drifting,
            })
        })
        .collect();
    let out = json!({
        "scheme": s.scheme,
        "h": s.h,
        "steps": s.steps,
        "invariants": reports,
    });
    println!("{out}");
    Ok(())
}

fn main() -> ExitCode {
    let cmd = Cli::command()
        .mut_subcommand("integrate", |c| c.after_help(preset_help()))
        .mut_subcommand("order", |c| c.after_help(preset_help()))
        .mut_subcommand("drift", |c| c.after_help(preset_help()))
        .after_help(preset_help());
    let cli = match Cli::from_arg_matches(&cmd.get_matches()) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    let (args, f): (&RunArgs, fn(&Settings) -> Result<(), Failure>) = match &cli.command {
        Command::Integrate(a) => (a, integrate),
        Command::Order(a) => (a, order),
        Command::Drift(a) => (a, drift),
    };
    let result = args.settings().map_err(Failure::Invalid).and_then(|s| f(&s));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Diverged(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Other(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
