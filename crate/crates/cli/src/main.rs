use algwass::{Exponent, MatchKind};
use algwass_cli::{DistanceArgs, DistanceMode, Options, Report};
use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "algwass", version, about = "Exact Wasserstein distances between persistence modules")]
struct Cli {
    /// Override the coefficient field of every loaded file.
    #[arg(long, global = true)]
    field_prime: Option<u32>,
    #[arg(long, global = true, value_enum, default_value = "pretty")]
    output: Output,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Pretty,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Print the barcode and persistence diagram of a module on a line.
    Decompose { file: PathBuf },
    /// Distance between two modules.
    #[command(group(ArgGroup::new("mode").args(["module", "diagram", "bracket", "lower_bound"])))]
    Distance {
        a: PathBuf,
        b: PathBuf,
        /// Exponent: a positive integer or `inf`.
        #[arg(short, long, default_value = "1")]
        p: Exponent,
        /// Matching of barcodes (default).
        #[arg(long)]
        module: bool,
        /// Matching of persistence diagrams.
        #[arg(long)]
        diagram: bool,
        /// Certified interval for the zigzag distance.
        #[arg(long)]
        bracket: bool,
        /// Lower bound from a decomposition into indecomposable parts.
        #[arg(long)]
        lower_bound: bool,
        /// Zigzag file whose cost tightens the upper end of --bracket.
        #[arg(long = "hint")]
        hints: Vec<PathBuf>,
        #[arg(long = "part-a")]
        parts_a: Vec<PathBuf>,
        #[arg(long = "part-b")]
        parts_b: Vec<PathBuf>,
    },
    /// Induced matching of a monomorphism or epimorphism.
    #[command(name = "match", group(ArgGroup::new("kind").args(["mono", "epi"]).required(true)))]
    Match {
        file: PathBuf,
        #[arg(long)]
        mono: bool,
        #[arg(long)]
        epi: bool,
    },
    /// Run a randomized or exhaustive verification suite.
    Verify {
        /// isometry, axioms, bounds, matching, decomposition or intervals.
        suite: String,
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Cost of a zigzag file.
    Cost { file: PathBuf },
    /// Rewrite a module file as explicit dimensions and maps.
    Convert { file: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = Options {
        field_prime: cli.field_prime,
        seed: cli.seed,
    };
    let result = match &cli.command {
        Command::Decompose { file } => algwass_cli::decompose(&opts, file),
        Command::Distance {
            a,
            b,
            p,
            diagram,
            bracket,
            lower_bound,
            hints,
            parts_a,
            parts_b,
            ..
        } => {
            let mode = match (diagram, bracket, lower_bound) {
                (true, _, _) => DistanceMode::Diagram,
                (_, true, _) => DistanceMode::Bracket,
                (_, _, true) => DistanceMode::LowerBound,
                _ => DistanceMode::Module,
            };
            let args = DistanceArgs {
                p: *p,
                a,
                b,
                mode,
                hints,
                parts_a,
                parts_b,
            };
            algwass_cli::distance(&opts, &args)
        }
        Command::Match { file, mono, .. } => {
            algwass_cli::matching(&opts, file, if *mono { MatchKind::Mono } else { MatchKind::Epi })
        }
        Command::Verify { suite, trials } => algwass_cli::verify_suite(&opts, suite, *trials),
        Command::Cost { file } => algwass_cli::cost(&opts, file),
        Command::Convert { file } => algwass_cli::convert(&opts, file),
    };
    match result {
        Ok(Report { json, text, status }) => {
            match cli.output {
                Output::Pretty => print!("{text}"),
                Output::Machine => println!("{json}"),
            }
            ExitCode::from(status.code() as u8)
        }
        Err(f) => {
            match cli.output {
                Output::Pretty => eprintln!("error: {}", f.message),
                Output::Machine => println!("{}", serde_json::json!({ "error": f.message, "exit": f.status.code() })),
            }
            ExitCode::from(f.status.code() as u8)
        }
    }
}
