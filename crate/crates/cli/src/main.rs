//! `ffk`: one subcommand per library operation, text or JSON on stdout,
//! diagnostics on stderr.

mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ffk::Error;

#[derive(Parser)]
#[command(
    name = "ffk",
    version,
    about = "Exact arithmetic over global function fields F_q(t)"
)]
struct Cli {
    #[command(flatten)]
    field: FieldArgs,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Seed for every sampling command.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FieldArgs {
    /// Characteristic (odd prime).
    #[arg(long, global = true)]
    p: Option<u32>,
    /// Extension degree of F_q over F_p.
    #[arg(long, default_value_t = 1, global = true)]
    e: u32,
    /// Defining polynomial of F_q in the generator s, e.g. `s^2+1`.
    #[arg(long, global = true)]
    modulus: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Kummer tower flags shared by the tower and Kochen commands.
#[derive(Args, Clone)]
struct TowerArgs {
    /// Kummer exponent.
    #[arg(long, default_value_t = 2)]
    n: u64,
    /// Comma-separated level polynomials; empty for K itself.
    #[arg(long, default_value = "")]
    levels: String,
}

#[derive(Subcommand)]
enum Command {
    /// Size, modulus, generator and optionally a primitive n-th root of unity.
    FieldInfo {
        #[arg(long)]
        n: Option<u64>,
    },
    /// Monic irreducibles of degree a multiple of n, in canonical order.
    Irreducibles {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        max_degree: usize,
    },
    /// n-th root of a monic polynomial in F_q((1/t)).
    HenselRoot {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        n: u64,
        /// Retained terms; defaults to FFK_PREC_DEFAULT or 32.
        #[arg(long)]
        prec: Option<usize>,
    },
    /// Valuation and residue of a rational function at a place.
    PlaceVal {
        #[arg(long)]
        place: String,
        #[arg(long)]
        r: String,
    },
    /// Rational function meeting every `place:target:min_valuation` constraint.
    WeakApprox {
        #[arg(long = "constraint", required = true)]
        constraints: Vec<String>,
    },
    /// Decomposition of a place in F_q(t)(ⁿ√poly).
    PlaceSplit {
        #[arg(long)]
        place: String,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        poly: String,
    },
    /// β and γ of an element with the valuation case at every place above.
    KochenEval {
        #[command(flatten)]
        tower: TowerArgs,
        #[arg(long)]
        place: String,
        #[arg(long)]
        x: String,
    },
    /// Samples v(γ(a)) ≥ 0 at the (1,1)-places above a place.
    KochenCheck {
        #[command(flatten)]
        tower: TowerArgs,
        #[arg(long)]
        place: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Writes r = x/(1 + t_p·γ(z)·y) with x, y integral above the place.
    KochenRepresent {
        #[command(flatten)]
        tower: TowerArgs,
        #[arg(long)]
        place: String,
        #[arg(long)]
        r: String,
    },
    /// Exact norm to F_q(t) and the maximum absolute value over conjugates.
    TowerNorm {
        #[command(flatten)]
        tower: TowerArgs,
        #[arg(long)]
        x: String,
    },
    /// Integral tower elements with ‖x‖_max ≤ N.
    TowerEnumerate {
        #[command(flatten)]
        tower: TowerArgs,
        #[arg(long = "N")]
        bound: u64,
        #[arg(long)]
        count_only: bool,
    },
    /// disc(Xⁿ − poly) and its factorization.
    TowerDisc {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        n: u64,
    },
    /// Nonzero local invariants of the symbol algebra (a, b).
    CsaInvariants {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        l: u64,
    },
    /// Symbol algebras ramified exactly at {primary, q1} and {primary, q2}.
    CsaPair {
        #[arg(long)]
        primary: String,
        #[arg(long)]
        q1: String,
        #[arg(long)]
        q2: String,
        #[arg(long)]
        l: u64,
    },
    /// Reduced traces of random norm-one elements, checked at ramified places.
    CsaSample {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        l: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// y integral on Δ_B with x − y integral on Δ_A \ Δ_B.
    CsaSplit {
        #[arg(long)]
        x: String,
        /// Comma-separated places.
        #[arg(long)]
        delta_a: String,
        #[arg(long)]
        delta_b: String,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => 2,
        Error::Unsupported(_) => 4,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            let body = match cli.format {
                Format::Text => out.text,
                Format::Json => serde_json::to_string_pretty(&out.json).expect("serializable"),
            };
            // A closed pipe downstream is not an error of the computation.
            let _ = writeln!(std::io::stdout().lock(), "{body}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
