use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hallcluster::family::DEFAULT_SEED;
use hallcluster::repfq::DEFAULT_BOUND;
use hallcluster_cli::commands::parse_values;
use hallcluster_cli::{emit_report, exit_code, parse_quiver_file, run_command, Command, Format, Grid, LambdaChoice, Options, QuiverFile};

#[derive(Parser)]
#[command(name = "hallcluster", version, about = "Exact checks of quantum cluster and Hall algebra identities")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Cap on the total dimension of enumerated representations.
    #[arg(long, global = true, default_value_t = DEFAULT_BOUND)]
    bound: usize,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the principal frame matrices and compatible forms.
    Frame { file: PathBuf },
    /// Check compatibility of the principal frame with a form.
    Compat {
        file: PathBuf,
        #[arg(long)]
        lambda: Option<LambdaChoice>,
    },
    /// Mutate the principal seed in direction k (1-based).
    Mutate {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        lambda: Option<LambdaChoice>,
    },
    /// Verify a relation kind over a parameter grid.
    Verify {
        kind: String,
        file: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Reproduce the worked A2 example.
    ExampleA2,
    /// Run every property on named quivers and a random family.
    Sweep {
        /// Number of random quivers.
        #[arg(long, default_value_t = 50)]
        count: usize,
    },
}

#[derive(Args)]
struct GridArgs {
    #[arg(long, value_parser = values)]
    i: Option<Values>,
    #[arg(long, value_parser = values)]
    j: Option<Values>,
    #[arg(long, value_parser = values)]
    l: Option<Values>,
    #[arg(long, value_parser = values)]
    p: Option<Values>,
    #[arg(long, value_parser = values, allow_hyphen_values = true)]
    eps: Option<Values>,
    #[arg(long, value_parser = values)]
    q: Option<Values>,
    #[arg(long)]
    lambda: Option<LambdaChoice>,
    /// Total-dimension cap for pairwise Hall checks.
    #[arg(long)]
    pairs: Option<usize>,
}

/// A parsed range list; a newtype so clap treats it as one value.
#[derive(Clone)]
struct Values(Vec<i64>);

fn values(s: &str) -> Result<Values, String> {
    parse_values(s).map(Values)
}

impl From<GridArgs> for Grid {
    fn from(g: GridArgs) -> Self {
        let list = |v: Option<Values>| v.map(|v| v.0);
        Grid {
            i: list(g.i),
            j: list(g.j),
            l: list(g.l),
            p: list(g.p),
            eps: list(g.eps),
            q: list(g.q),
            lambda: g.lambda,
            pairs: g.pairs,
        }
    }
}

fn load(path: &Path) -> Result<QuiverFile, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_quiver_file(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn build(cmd: Cmd) -> Result<Command, String> {
    Ok(match cmd {
        Cmd::Frame { file } => Command::Frame(load(&file)?),
        Cmd::Compat { file, lambda } => Command::Compat {
            file: load(&file)?,
            lambda,
        },
        Cmd::Mutate { file, k, lambda } => Command::Mutate {
            file: load(&file)?,
            k,
            lambda,
        },
        Cmd::Verify { kind, file, grid } => Command::Verify {
            kind,
            file: load(&file)?,
            grid: grid.into(),
        },
        Cmd::ExampleA2 => Command::ExampleA2,
        Cmd::Sweep { count } => Command::Sweep { count },
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match cli.format {
        FormatArg::Text => Format::Text,
        FormatArg::Json => Format::Json,
    };
    let opts = Options {
        format,
        seed: cli.seed,
        bound: cli.bound,
    };
    let cmd = match build(cli.command) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let outcome = run_command(&cmd, &opts);
    if format == Format::Text {
        print!("{}", outcome.display);
    }
    print!("{}", emit_report(&outcome.reports, format));
    ExitCode::from(exit_code(&outcome.reports) as u8)
}
