use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qcanon::canon::OracleMode;
use qcanon::cli::{exit_code, run, Command, Config, Format, Outcome, Session, VectorSpec};
use qcanon::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "qcanon", version, about = "Canonical bases of tensor products of quantum group modules")]
struct Args {
    /// JSON configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Largest content degree, overrides the config file
    #[arg(long, global = true)]
    depth: Option<u32>,
    /// Write output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    #[arg(long, global = true, value_enum, default_value_t = OracleArg::Off)]
    oracle: OracleArg,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Pretty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OracleArg {
    Off,
    Check,
    Force,
}

#[derive(clap::Args, Debug)]
#[group(multiple = false)]
struct VectorArg {
    /// Standard vector, e.g. "* j^2 i" or a JSON sequence
    #[arg(long)]
    mu: Option<String>,
    /// Pure tensor of monomials, one word per factor separated by '|', e.g. "i|"
    #[arg(long)]
    tensor: Option<String>,
}

impl VectorArg {
    fn spec(&self) -> Option<VectorSpec> {
        match (&self.mu, &self.tensor) {
            (Some(m), _) => Some(VectorSpec::Mu(m.clone())),
            (_, Some(t)) => Some(VectorSpec::Tensor(t.clone())),
            _ => None,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Canonical basis and certificate of every weight space up to the depth
    Canon,
    /// Relation and form checks
    Verify,
    /// Gram matrix of the given vectors
    Gram {
        #[arg(long)]
        mu: Vec<String>,
        #[arg(long)]
        tensor: Vec<String>,
    },
    /// Bar involution of a vector
    Bar {
        #[command(flatten)]
        vector: VectorArg,
    },
    /// Action of a generator on a vector, or on the canonical basis of a weight space
    Act {
        /// E_i, F_j^(2), K_i^-1, ...
        #[arg(long = "gen")]
        generator: String,
        #[command(flatten)]
        vector: VectorArg,
        /// Content such as "i+2j"; acts on every canonical element there
        #[arg(long)]
        nu: Option<String>,
    },
}

fn command(cmd: &Cmd) -> Result<Command> {
    Ok(match cmd {
        Cmd::Canon => Command::Canon,
        Cmd::Verify => Command::Verify,
        Cmd::Gram { mu, tensor } => Command::Gram {
            vectors: mu
                .iter()
                .cloned()
                .map(VectorSpec::Mu)
                .chain(tensor.iter().cloned().map(VectorSpec::Tensor))
                .collect(),
        },
        Cmd::Bar { vector } => Command::Bar {
            vector: vector.spec().ok_or_else(|| Error::Input("bar needs --mu or --tensor".into()))?,
        },
        Cmd::Act { generator, vector, nu } => {
            let vector = vector.spec();
            if vector.is_none() == nu.is_none() {
                return Err(Error::Input("act needs exactly one of --mu, --tensor, --nu".into()));
            }
            Command::Act { generator: generator.clone(), vector, nu: nu.clone() }
        }
    })
}

fn execute(args: &Args) -> Result<Outcome> {
    let path = args.config.as_ref().ok_or_else(|| Error::Input("--config is required".into()))?;
    let text = std::fs::read_to_string(path)?;
    let config = Config::from_json(&text)?;
    let format = args.format.map(|f| match f {
        FormatArg::Json => Format::Json,
        FormatArg::Pretty => Format::Pretty,
    });
    let oracle = match args.oracle {
        OracleArg::Off => OracleMode::Off,
        OracleArg::Check => OracleMode::Check,
        OracleArg::Force => OracleMode::Force,
    };
    let session = Session::new(&config, args.depth, format, oracle)?;
    run(&session, &command(&args.command)?)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(outcome) => {
            let written = match &args.out {
                Some(p) => std::fs::write(p, &outcome.output),
                None => {
                    print!("{}", outcome.output);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(outcome.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, Error::OutOfDepth { .. }) {
                eprintln!("hint: raise --depth");
            }
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
