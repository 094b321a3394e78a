use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use christol_core::automaton::DEFAULT_STATE_CAP;
use christol_core::sparse::DEFAULT_COMPONENT_CAP;
use christol_tools::commands::{self, Options, SetArgs, SetOp, SourceSpec};
use christol_tools::commands::{DEFAULT_SET_BOUND, DEFAULT_SET_FRAC, DEFAULT_WINDOW};
use christol_tools::{table, CliError};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "christol",
    version,
    about = "Sparse algebraic power series over finite fields"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Series precision N (coefficients below t^N).
    #[arg(long, global = true)]
    precision: Option<u64>,
    /// Largest automaton built by subset construction or kernel search.
    #[arg(long, global = true, default_value_t = DEFAULT_STATE_CAP)]
    state_cap: usize,
    /// Largest number of simple sparse components in a decomposition.
    #[arg(long, global = true, default_value_t = DEFAULT_COMPONENT_CAP)]
    component_cap: usize,
    /// Worker threads for classifying several inputs.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Add wall-clock timing to the report (makes output run-dependent).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Args)]
struct SourceArgs {
    /// Coefficient machine (JSON automaton); may be repeated for classify.
    #[arg(long)]
    dfao: Vec<PathBuf>,
    /// Algebraic equation (JSON).
    #[arg(long, conflicts_with = "dfao")]
    equation: Option<PathBuf>,
    /// Initial coefficients as a series (JSON), used with --equation.
    #[arg(long, requires = "equation")]
    seed: Option<PathBuf>,
}

impl SourceArgs {
    fn specs(&self) -> Vec<SourceSpec<'_>> {
        let mut v: Vec<SourceSpec> = self.dfao.iter().map(|p| SourceSpec::Dfao(p)).collect();
        if let Some(e) = &self.equation {
            v.push(SourceSpec::Equation {
                equation: e,
                seed: self.seed.as_deref(),
            });
        }
        v
    }
}

#[derive(Subcommand)]
enum Command {
    /// Output of an automaton on one word.
    Run {
        #[arg(long)]
        dfao: PathBuf,
        /// Word, most significant digit first; "." is the radix point.
        #[arg(long)]
        word: String,
    },
    /// Census f(n) = number of accepted words of length at most n.
    Census {
        #[arg(long)]
        dfao: PathBuf,
        #[arg(long, default_value_t = 20)]
        max: usize,
    },
    /// Sparse or not; sparse series get components, closed forms and a checked certificate.
    Classify {
        #[command(flatten)]
        source: SourceArgs,
    },
    /// Decomposition of an accepted language into simple sparse forms.
    Decompose {
        #[arg(long)]
        dfao: PathBuf,
    },
    /// Operations on sets of p-adic rationals.
    Spset {
        #[arg(value_enum)]
        op: SetOpArg,
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: Option<PathBuf>,
        /// The point b for split and spread.
        #[arg(long)]
        at: Option<u64>,
        /// Largest value listed in window reports.
        #[arg(long, default_value_t = DEFAULT_SET_BOUND)]
        bound: u64,
        /// Largest number of fractional digits listed in window reports.
        #[arg(long, default_value_t = DEFAULT_SET_FRAC)]
        frac: usize,
    },
    /// All solutions of X^p - X + F = 0.
    AsSolve {
        #[arg(long)]
        series: PathBuf,
        /// Upper end of the unknown gap below zero for the negative branch.
        #[arg(long, default_value = DEFAULT_WINDOW, allow_hyphen_values = true)]
        window: String,
    },
    /// F + F^{p^d} + F^{p^{2d}} + ... (or its negative-support analogue).
    GapSum {
        #[arg(long)]
        series: PathBuf,
        #[arg(long)]
        d: u32,
        #[arg(long, default_value = DEFAULT_WINDOW, allow_hyphen_values = true)]
        window: String,
    },
    /// Certificate building a sparse series from monomials by closure operations.
    Certify {
        #[command(flatten)]
        source: SourceArgs,
        /// A simple sparse form such as "1(0)*" instead of a series source.
        #[arg(long, conflicts_with_all = ["dfao", "equation"])]
        form: Option<String>,
        /// Base of --form.
        #[arg(long, default_value_t = 2)]
        p: u32,
        /// Coefficient index in F_p for --form.
        #[arg(long, default_value_t = 1)]
        coeff: u64,
    },
    /// Replays a certificate and compares it with a target series.
    VerifyCert {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        dfao: Option<PathBuf>,
        #[arg(long, conflicts_with = "dfao")]
        series: Option<PathBuf>,
        #[arg(long, default_value = DEFAULT_WINDOW, allow_hyphen_values = true)]
        window: String,
    },
    /// Coefficients of a quasi-automatic series: M(a alpha + b).
    QuasiEval {
        #[arg(long)]
        dfao: PathBuf,
        #[arg(long, default_value = "1")]
        a: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        b: String,
        #[arg(long, required = true, allow_hyphen_values = true)]
        alpha: Vec<String>,
    },
    /// The Thue-Morse sequence from its two-state machine.
    DemoThueMorse {
        #[arg(long, default_value_t = 16)]
        count: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SetOpArg {
    Show,
    Union,
    Sum,
    Split,
    SpreadUp,
    SpreadDown,
}

fn dispatch(cli: &Cli) -> Result<commands::Outcome, CliError> {
    let g = &cli.global;
    let opts = Options {
        precision: g.precision,
        state_cap: g.state_cap,
        component_cap: g.component_cap,
        jobs: g.jobs,
    };
    match &cli.command {
        Command::Run { dfao, word } => commands::run(dfao, word),
        Command::Census { dfao, max } => commands::census(dfao, *max),
        Command::Classify { source } => {
            let specs = source.specs();
            if specs.is_empty() {
                return Err(CliError::input("give --dfao or --equation"));
            }
            commands::classify(&specs, &opts)
        }
        Command::Decompose { dfao } => commands::decompose_cmd(dfao, &opts),
        Command::Spset {
            op,
            a,
            b,
            at,
            bound,
            frac,
        } => {
            let op = match op {
                SetOpArg::Show => SetOp::Show,
                SetOpArg::Union => SetOp::Union,
                SetOpArg::Sum => SetOp::Sum,
                SetOpArg::Split => SetOp::Split,
                SetOpArg::SpreadUp => SetOp::SpreadUp,
                SetOpArg::SpreadDown => SetOp::SpreadDown,
            };
            let args = SetArgs {
                op,
                a,
                b: b.as_deref(),
                at: *at,
                bound: *bound,
                frac: *frac,
            };
            commands::spset(&args, &opts)
        }
        Command::AsSolve { series, window } => commands::as_solve(series, window, &opts),
        Command::GapSum { series, d, window } => commands::gap_sum_cmd(series, *d, window, &opts),
        Command::Certify {
            source,
            form,
            p,
            coeff,
        } => {
            let mut specs = source.specs();
            if specs.len() > 1 {
                return Err(CliError::input("certify takes one source"));
            }
            commands::certify(specs.pop(), form.as_deref().map(|f| (f, *p, *coeff)), &opts)
        }
        Command::VerifyCert {
            cert,
            dfao,
            series,
            window,
        } => commands::verify_cert(cert, dfao.as_deref(), series.as_deref(), window, &opts),
        Command::QuasiEval { dfao, a, b, alpha } => commands::quasi_eval_cmd(dfao, a, b, alpha),
        Command::DemoThueMorse { count } => commands::demo_thue_morse(*count),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match dispatch(&cli) {
        Ok(mut outcome) => {
            if cli.global.timing {
                if let Some(map) = outcome.report.as_object_mut() {
                    let ms = start.elapsed().as_secs_f64() * 1e3;
                    map.insert("timing".into(), serde_json::json!({ "elapsed_ms": ms }));
                }
            }
            match cli.global.format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&outcome.report).expect("serializable")
                ),
                Format::Table => print!("{}", table::render(&outcome.report)),
            }
            if outcome.verified {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(4)
            }
        }
        Err(e) => {
            eprintln!(
                "{}",
                serde_json::to_string_pretty(&e.to_json()).expect("serializable")
            );
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
