use clap::{Parser, Subcommand};
use phan_cli::{run, Command, RunConfig, DEFAULT_MAX_TRIANGLES, DEFAULT_SEED};
use phan_core::groups::DEFAULT_GROUP_CAP;
use phan_core::homotopy::DEFAULT_COSET_CAP;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "phan", version, about = "Build symplectic geometries and certify their properties")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    /// Dimension of the symplectic space.
    #[arg(long, global = true, default_value_t = 4)]
    n: usize,
    /// Field size (2, 3, 5 or 7).
    #[arg(long, global = true, default_value_t = 3)]
    p: u8,
    #[arg(long, global = true, default_value_t = DEFAULT_COSET_CAP)]
    max_cosets: usize,
    #[arg(long, global = true, default_value_t = DEFAULT_GROUP_CAP)]
    max_group: usize,
    /// Above this many triangles, fundamental groups use the point-line presentation.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_TRIANGLES)]
    max_triangles: usize,
    /// Directory for the JSON report and DOT files; the report goes to stdout otherwise.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Also write incidence graphs as DOT (needs --out).
    #[arg(long, global = true)]
    dot: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Sub {
    /// Build the geometry of the space and check its predicates.
    Gamma,
    /// Build the point residue Pi(p, H) and check its predicates.
    Pi,
    /// Build and verify the double cover of Pi(p, H) (n = 6, p = 2).
    Cover,
    /// Fundamental groups of the geometry and of Pi(p, H).
    Pi1,
    /// Slim subgroup and parabolic structure suite, flag transitivity.
    Groups,
    /// Completion certificate for the slim amalgam.
    Amalgam,
    /// Every applicable section.
    All,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = match cli.command {
        Sub::Gamma => Command::Gamma,
        Sub::Pi => Command::Pi,
        Sub::Cover => Command::Cover,
        Sub::Pi1 => Command::Pi1,
        Sub::Groups => Command::Groups,
        Sub::Amalgam => Command::Amalgam,
        Sub::All => Command::All,
    };
    let cap_mb = match std::env::var("PHAN_CAP_MB") {
        Ok(v) => match v.parse::<u64>() {
            Ok(mb) => Some(mb),
            Err(_) => {
                eprintln!("phan: PHAN_CAP_MB must be a whole number of MiB, got {v:?}");
                return ExitCode::from(2);
            }
        },
        Err(_) => None,
    };
    let cfg = RunConfig {
        command,
        n: cli.n,
        p: cli.p,
        max_cosets: cli.max_cosets,
        max_group: cli.max_group,
        max_triangles: cli.max_triangles,
        cap_mb,
        seed: cli.seed,
        out: cli.out,
        dot: cli.dot,
    };
    match run(&cfg) {
        Ok(out) => {
            if cfg.out.is_none() {
                print!("{}", out.report.to_json());
            } else {
                for f in &out.files {
                    eprintln!("wrote {}", f.display());
                }
            }
            let s = &out.report.summary;
            eprintln!("{} pass, {} fail, {} unknown, {} info", s.pass, s.fail, s.unknown, s.info);
            ExitCode::from(out.exit_code as u8)
        }
        Err(e) => {
            eprintln!("phan: {e}");
            ExitCode::from(2)
        }
    }
}
