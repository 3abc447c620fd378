use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod input;
mod render;

/// Nilpotent quotients of generalized solvable Baumslag-Solitar groups:
/// automorphisms, twisted conjugacy and Reidemeister numbers.
#[derive(Debug, Parser)]
#[command(name = "gsbs", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalOpts {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Safety cap on m^c and on orbit/box node counts.
    #[arg(long, global = true, default_value_t = gsbs_core::group::DEFAULT_CAP)]
    cap: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build witness automorphisms for every quotient up to --cmax and report
    /// whether any of them has property R∞.
    Analyze {
        n: u64,
        #[arg(long, default_value_t = 3)]
        cmax: u32,
    },
    /// Check which congruences (M,c,i) a matrix satisfies.
    CheckMatrix {
        n: u64,
        c: u32,
        /// JSON array-of-arrays, as a file path or inline.
        matrix: String,
    },
    /// Reidemeister number of an automorphism {"M", "mu", "beta"}.
    Reidemeister {
        n: u64,
        c: u32,
        /// Automorphism JSON, as a file path or inline.
        automorphism: String,
        /// Use the brute-force box oracle instead of the exact algorithm.
        #[arg(long)]
        oracle: bool,
        /// Oracle boxes as B_e,B_c (element box, conjugator box).
        #[arg(long = "box", default_value = "4,8", value_parser = parse_box)]
        boxes: (u32, u32),
        /// Largest conjugator box tried before giving up on stabilisation.
        #[arg(long)]
        max_cbox: Option<u32>,
    },
    /// Generators of the lower central series terms γ_2 … γ_{c+1}.
    Lcs { n: u64, c: u32 },
    /// Multiply two elements {"y": [...], "theta": t} in normal form.
    Mul {
        n: u64,
        c: u32,
        g: String,
        h: String,
    },
    /// Run or regenerate the regression corpus.
    Corpus {
        #[arg(long, conflicts_with = "regen")]
        run: bool,
        #[arg(long)]
        regen: bool,
        #[arg(long, default_value = "corpus/corpus.json")]
        file: PathBuf,
    },
}

fn parse_box(s: &str) -> Result<(u32, u32), String> {
    let parse = |v: &str| v.trim().parse::<u32>().map_err(|e| format!("{v:?}: {e}"));
    match s.split_once(',') {
        Some((e, c)) => Ok((parse(e)?, parse(c)?)),
        None => {
            let e = parse(s)?;
            Ok((e, 2 * e))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = commands::Context {
        json: cli.global.json,
        limits: gsbs_core::Limits::with_cap(cli.global.cap),
    };
    let result = match cli.command {
        Command::Analyze { n, cmax } => commands::analyze(&ctx, n, cmax),
        Command::CheckMatrix { n, c, matrix } => commands::check_matrix(&ctx, n, c, &matrix),
        Command::Reidemeister {
            n,
            c,
            automorphism,
            oracle,
            boxes,
            max_cbox,
        } => commands::reidemeister(&ctx, n, c, &automorphism, oracle.then_some((boxes, max_cbox))),
        Command::Lcs { n, c } => commands::lcs(&ctx, n, c),
        Command::Mul { n, c, g, h } => commands::mul(&ctx, n, c, &g, &h),
        Command::Corpus { run: _, regen, file } => commands::corpus(&ctx, &file, regen),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code().into()
        }
    }
}
