use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use convex_billiards::cli::{run, Command, RunConfig};

#[derive(Parser)]
#[command(name = "billiards", version, about = "Convex billiard tables: orbits, spectra, normal forms, rigidity")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Args)]
struct Common {
    /// Domain description (TOML); `rigidity` takes two.
    #[arg(long = "domain", required = true)]
    domains: Vec<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Tolerance override, `name=value`; repeatable.
    #[arg(long = "tolerance")]
    tolerances: Vec<String>,
}

#[derive(Subcommand)]
enum Sub {
    /// Iterate the billiard map and draw the orbit.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        s0: Option<f64>,
        #[arg(long)]
        phi0: Option<f64>,
    },
    /// Maximal periodic orbit of rotation number p/q.
    Orbits {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        p: i64,
        #[arg(long)]
        q: i64,
    },
    /// Marked length spectrum up to period qmax.
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        qmax: Option<i64>,
    },
    /// Similarity test of two domains.
    Rigidity {
        #[command(flatten)]
        common: Common,
    },
    /// Normal-form defects in Lazutkin coordinates.
    Lazutkin {
        #[command(flatten)]
        common: Common,
    },
}

fn config(sub: Sub) -> RunConfig {
    let (command, common) = match &sub {
        Sub::Simulate { common, .. } => (Command::Simulate, common),
        Sub::Orbits { common, .. } => (Command::Orbits, common),
        Sub::Spectrum { common, .. } => (Command::Spectrum, common),
        Sub::Rigidity { common } => (Command::Rigidity, common),
        Sub::Lazutkin { common } => (Command::Lazutkin, common),
    };
    let mut c = RunConfig::new(command, common.domains.clone(), common.out.clone());
    c.tolerances = common.tolerances.clone();
    match sub {
        Sub::Simulate { n, s0, phi0, .. } => {
            c.n = n;
            c.s0 = s0;
            c.phi0 = phi0;
        }
        Sub::Orbits { p, q, .. } => {
            c.p = Some(p);
            c.q = Some(q);
        }
        Sub::Spectrum { qmax, .. } => c.q_max = qmax,
        Sub::Rigidity { .. } | Sub::Lazutkin { .. } => {}
    }
    c
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&config(cli.command)) {
        Ok(outcome) => {
            println!("{}", outcome.summary);
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            eprintln!("billiards: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
