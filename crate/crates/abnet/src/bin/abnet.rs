use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use abnet::cli::{self, CommandOutput};

/// Finite abelian networks: validation, algebraic analysis, halting
/// certificates, simulation, and network constructions. All reports are
/// canonical JSON on stdout; diagnostics go to stderr.
#[derive(Parser)]
#[command(name = "abnet", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report to a file instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the commutativity axioms of a network file.
    Validate { network: PathBuf },
    /// Kernel, periods, production matrix, Laplacian, components, and the
    /// halting verdict with its certificate.
    Analyze {
        network: PathBuf,
        /// JSON file with {vertex: state-label} overrides.
        #[arg(long)]
        state: Option<PathBuf>,
        /// Cross-check all principal minors, not only the leading ones.
        #[arg(long)]
        debug_all_minors: bool,
    },
    /// Decide halting for one input.
    Run {
        network: PathBuf,
        /// JSON input file: {"state": {...}?, "letters": {letter: count}}.
        #[arg(long)]
        input: PathBuf,
        /// Full passes of the per-input loop before giving up.
        #[arg(long)]
        max_rounds: Option<usize>,
        /// Step budget for the direct-simulation cross-check.
        #[arg(long, default_value_t = 1_000_000)]
        max_steps: u64,
        /// Search for a strong amplifier first and use its threshold
        /// certificate during the loop.
        #[arg(long)]
        use_amplifier: bool,
    },
    /// Local (state) and strong (alphabet) component decompositions.
    Components {
        network: PathBuf,
        #[arg(long)]
        state: Option<PathBuf>,
    },
    /// Transition monoid structure of every vertex.
    Monoid { network: PathBuf },
    /// Construct a network from a spec file.
    Build {
        #[command(subcommand)]
        family: BuildFamily,
    },
    /// The toppling network with the same Laplacian.
    Sandpilize {
        network: PathBuf,
        #[arg(long)]
        state: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum BuildFamily {
    /// Toppling network of an integer matrix: {"matrix": [[...]], "vertices": [...]?}.
    Topp(BuildArgs),
    /// Sandpile network of a directed graph: {"vertices": [...], "edges": [[from, to], ...]}.
    Sand(BuildArgs),
    /// Rotor-router network of a graph, with optional {"rotor_order": {vertex: [...]}}.
    Rotor(BuildArgs),
}

#[derive(Args)]
struct BuildArgs {
    /// Spec file (see the family's help for the schema).
    #[arg(long, alias = "matrix", alias = "graph")]
    spec: PathBuf,
}

fn read(path: &PathBuf) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn read_opt(path: &Option<PathBuf>) -> Result<Option<String>, String> {
    path.as_ref().map(read).transpose()
}

fn dispatch(command: &Command) -> Result<CommandOutput, String> {
    Ok(match command {
        Command::Validate { network } => cli::cmd_validate(&read(network)?),
        Command::Analyze {
            network,
            state,
            debug_all_minors,
        } => {
            let state = read_opt(state)?;
            cli::cmd_analyze(&read(network)?, state.as_deref(), *debug_all_minors)
        }
        Command::Run {
            network,
            input,
            max_rounds,
            max_steps,
            use_amplifier,
        } => cli::cmd_run(
            &read(network)?,
            &read(input)?,
            *max_rounds,
            *max_steps,
            *use_amplifier,
        ),
        Command::Components { network, state } => {
            let state = read_opt(state)?;
            cli::cmd_components(&read(network)?, state.as_deref())
        }
        Command::Monoid { network } => cli::cmd_monoid(&read(network)?),
        Command::Build { family } => match family {
            BuildFamily::Topp(args) => cli::cmd_build_topp(&read(&args.spec)?),
            BuildFamily::Sand(args) => cli::cmd_build_sand(&read(&args.spec)?),
            BuildFamily::Rotor(args) => cli::cmd_build_rotor(&read(&args.spec)?),
        },
        Command::Sandpilize { network, state } => {
            let state = read_opt(state)?;
            cli::cmd_sandpilize(&read(network)?, state.as_deref())
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = match dispatch(&cli.command) {
        Ok(output) => output,
        Err(message) => {
            eprintln!("abnet: {message}");
            return ExitCode::from(cli::EXIT_PARSE as u8);
        }
    };
    let text = output.to_canonical_string();
    match &cli.output {
        Some(path) => {
            if let Err(e) = fs::write(path, text + "\n") {
                eprintln!("abnet: cannot write {}: {e}", path.display());
                return ExitCode::from(cli::EXIT_FAIL as u8);
            }
        }
        None => println!("{text}"),
    }
    if output.exit_code != cli::EXIT_OK {
        if let Some(err) = output.report.get("error") {
            eprintln!("abnet: {err}");
        }
    }
    ExitCode::from(output.exit_code as u8)
}
