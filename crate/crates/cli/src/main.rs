//! `dimkit`: dimensions, witnesses and constructions from the command line.
//!
//! Every subcommand prints one canonical JSON report on stdout. Exit status
//! is 0 on success, 1 when the computation verifies a negative answer
//! (invalid witness, failed bound, no refutation), and 2 on usage or input
//! errors.

mod commands;
mod files;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::commands::Outcome;

#[derive(Parser)]
#[command(name = "dimkit", version, about = "Exact multiclass learnability dimensions, witnesses and constructions")]
struct Cli {
    /// Worker threads for the internal searches.
    #[arg(long, global = true, env = "DIMKIT_THREADS")]
    threads: Option<usize>,

    /// Record wall-clock time in the report (breaks byte stability).
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact dimension of a class.
    Dim {
        #[arg(long)]
        class: PathBuf,
        /// vc, natarajan, graph, ds or psi.
        #[arg(long)]
        kind: String,
        #[arg(long)]
        psi: Option<PathBuf>,
        #[arg(long)]
        window: Option<u32>,
    },
    /// Build, check or extract witnesses.
    #[command(subcommand)]
    Witness(WitnessCommand),
    /// No-Free-Lunch adversary against a built-in learner.
    Nfl {
        /// const:V, memo:V, erm:CLASS or embed:CLASS:K.
        #[arg(long)]
        learner: String,
        #[arg(long)]
        points: String,
        #[arg(long)]
        g1: String,
        #[arg(long)]
        g2: String,
    },
    /// Behaviors, ERM and learning over the augmented class.
    #[command(subcommand)]
    Embed(EmbedCommand),
    /// Whether a Ψ-family separates every pair of labels.
    Distinguisher {
        #[arg(long)]
        psi: PathBuf,
    },
    /// Exhaustive refutation of Ψ-expressibility of DS shattering.
    RefuteDs {
        #[arg(long)]
        class: PathBuf,
    },
    /// Natarajan counting bound on a point tuple.
    Sauer {
        #[arg(long)]
        class: PathBuf,
        #[arg(long)]
        points: String,
        #[arg(long)]
        d: u32,
    },
    /// Built-in example classes.
    #[command(subcommand)]
    Gallery(GalleryCommand),
}

#[derive(Args)]
struct WitnessSpec {
    #[arg(long)]
    class: PathBuf,
    /// Witness descriptor file; overrides --flavor/--order.
    #[arg(long)]
    witness: Option<PathBuf>,
    /// natarajan, graph or psi.
    #[arg(long)]
    flavor: Option<String>,
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    psi: Option<PathBuf>,
    #[arg(long)]
    window: Option<u32>,
}

#[derive(Subcommand)]
enum WitnessCommand {
    /// Tabulate the canonical witness on every input in the window.
    Make(WitnessSpec),
    /// Validate a witness exhaustively on the window.
    Check(WitnessSpec),
    /// Witness of order 2m-1 extracted from a learner, validated on a class.
    FromLearner {
        #[arg(long)]
        learner: String,
        #[arg(long)]
        m: usize,
        /// Class to validate against; defaults to the ERM class.
        #[arg(long)]
        class: Option<PathBuf>,
        #[arg(long)]
        window: Option<u32>,
    },
}

#[derive(Args)]
struct EmbedSpec {
    #[arg(long)]
    class: PathBuf,
    #[arg(long)]
    witness: PathBuf,
}

#[derive(Subcommand)]
enum EmbedCommand {
    /// v(T) for a point tuple.
    Behaviors {
        #[command(flatten)]
        spec: EmbedSpec,
        #[arg(long)]
        points: String,
    },
    /// ERM over the augmented class.
    Erm {
        #[command(flatten)]
        spec: EmbedSpec,
        #[arg(long)]
        sample: PathBuf,
    },
    /// Run the embedding learner; optionally score it on a second sample.
    Learn {
        #[command(flatten)]
        spec: EmbedSpec,
        #[arg(long)]
        sample: PathBuf,
        #[arg(long)]
        eval: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GalleryCommand {
    List,
    Emit {
        name: String,
        /// Parameter as key=value, repeatable.
        #[arg(long = "param")]
        params: Vec<String>,
        /// Print only the class document.
        #[arg(long)]
        raw: bool,
    },
}

fn run(cli: Cli) -> Result<Outcome, String> {
    match cli.command {
        Command::Dim { class, kind, psi, window } => commands::dim(&class, &kind, psi.as_deref(), window),
        Command::Witness(WitnessCommand::Make(s)) => commands::witness_make(&s.into()),
        Command::Witness(WitnessCommand::Check(s)) => commands::witness_check(&s.into()),
        Command::Witness(WitnessCommand::FromLearner { learner, m, class, window }) => {
            commands::witness_from_learner(&learner, m, class.as_deref(), window)
        }
        Command::Nfl { learner, points, g1, g2 } => commands::nfl(&learner, &points, &g1, &g2),
        Command::Embed(EmbedCommand::Behaviors { spec, points }) => commands::embed_behaviors(&spec.class, &spec.witness, &points),
        Command::Embed(EmbedCommand::Erm { spec, sample }) => commands::embed_erm(&spec.class, &spec.witness, &sample),
        Command::Embed(EmbedCommand::Learn { spec, sample, eval }) => {
            commands::embed_learn(&spec.class, &spec.witness, &sample, eval.as_deref())
        }
        Command::Distinguisher { psi } => commands::distinguisher(&psi),
        Command::RefuteDs { class } => commands::refute_ds(&class),
        Command::Sauer { class, points, d } => commands::sauer(&class, &points, d),
        Command::Gallery(GalleryCommand::List) => commands::gallery_list(),
        Command::Gallery(GalleryCommand::Emit { name, params, raw }) => commands::gallery_emit(&name, &params, raw),
    }
}

impl From<WitnessSpec> for commands::WitnessArgs {
    fn from(s: WitnessSpec) -> Self {
        commands::WitnessArgs {
            class: s.class,
            witness: s.witness,
            flavor: s.flavor,
            order: s.order,
            psi: s.psi,
            window: s.window,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    let timing = cli.timing;
    let start = Instant::now();
    match run(cli) {
        Ok(Outcome::Raw(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Ok(Outcome::Report { mut report, negative }) => {
            if timing {
                report.runtime_ms = Some(start.elapsed().as_millis());
            }
            print!("{}", report.render());
            if negative {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
