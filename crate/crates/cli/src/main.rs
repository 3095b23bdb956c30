//! `metagal`: build regular 2-group realizations over Q and check them.
//!
//! Every subcommand writes a single JSON document to stdout (or to `--out`)
//! and human-readable diagnostics to stderr. Identical invocations produce
//! byte-identical JSON. Exit codes: 0 when the subcommand's primary assertion
//! holds, 1 when it fails (bad prime pair, failed construction, verdict other
//! than consistent), 2 for usage errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use metagal_core::arith::{parse_rat, QPoly};
use metagal_core::builder::{build_specialized, SpecializedRealization};
use metagal_core::cyclo::branch_values;
use metagal_core::finder::{
    certify, find_t0, is_good_prime_pair, smallest_good_pair, Progression,
};
use metagal_core::groups::{spec_from_parts, GroupFamily, GroupSpec};
use metagal_core::verifier::{verify, Verdict, VerificationReport};
use metagal_core::Error;

#[derive(Parser)]
#[command(
    name = "metagal",
    version,
    about = "Regular 2-group realizations over Q: branch polynomials, certified specialization progressions, explicit polynomials, and statistical Galois-group checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the branch polynomial whose roots are the degenerate
    /// specialization values s_k = -(zeta^k + zeta^-k + 2)/4
    BranchPoly(BranchPolyArgs),
    /// Find an arithmetic progression of certified quaternion
    /// specialization points for a prime pair (searched if omitted)
    FindProgression(FindProgressionArgs),
    /// Check whether a prime pair is usable for the order-2^n quaternion
    /// progression and report the reasons if not
    CheckPrimes(CheckPrimesArgs),
    /// Build the specialized realization of a family at a rational t
    Construct(ConstructArgs),
    /// Statistically test a polynomial against a group's root-pattern
    /// distribution over reduction primes
    Verify(VerifyArgs),
    /// Full chain for the quaternion family: progression, realization at
    /// the progression's base point, verification
    Pipeline(PipelineArgs),
}

#[derive(Args)]
struct BranchPolyArgs {
    /// Quaternion-group exponent; conductor becomes m = 2^(n-1)
    #[arg(long)]
    n: Option<u32>,
    /// Conductor of the root of unity, given directly
    #[arg(long)]
    m: Option<u32>,
    /// Write the JSON here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FindProgressionArgs {
    /// Quaternion-group exponent (group order 2^n)
    #[arg(long)]
    n: u32,
    /// First progression prime, p = 1 mod 2^(n-1)
    #[arg(long)]
    p: Option<u64>,
    /// Second progression prime, q = 1 mod 4
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckPrimesArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    p: u64,
    #[arg(long)]
    q: u64,
    /// Also certify this specialization point for the pair; the output
    /// becomes the certification instead of the pair check
    #[arg(long)]
    t0: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConstructArgs {
    #[command(flatten)]
    group: GroupArgs,
    /// Specialization point, as an integer or "num/den"
    #[arg(long, allow_hyphen_values = true)]
    t: String,
    /// Starting precision for the floating expansion, in bits
    #[arg(long, default_value_t = 256)]
    precision_bits: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Path to a realization JSON produced by `construct`; the polynomial
    /// and target group are read from it
    realization: Option<PathBuf>,
    /// Inline polynomial as comma-separated ascending coefficients
    /// ("num/den" or integer), used with the group flags instead of a file
    #[arg(long, allow_hyphen_values = true)]
    poly: Option<String>,
    #[command(flatten)]
    group: GroupArgs,
    /// How many of the smallest odd primes to draw reductions from
    #[arg(long, default_value_t = 300)]
    num_primes: usize,
    /// Reserved sampling seed, part of the stable interface
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PipelineArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long, default_value_t = 256)]
    precision_bits: u32,
    #[arg(long, default_value_t = 300)]
    num_primes: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Group selection shared by `construct` and inline `verify`. Which of
/// m, d, n are required depends on the family.
#[derive(Args)]
struct GroupArgs {
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    /// Cyclic-part order (dihedral and semidirect families)
    #[arg(long)]
    m: Option<u32>,
    /// Twist unit mod m (semidirect family)
    #[arg(long)]
    d: Option<u32>,
    /// Group order exponent (quasidihedral, modular, quaternion)
    #[arg(long)]
    n: Option<u32>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Dihedral,
    Quasidihedral,
    Modular,
    Quaternion,
    Semidirect,
}

impl GroupArgs {
    fn to_spec(&self) -> Result<GroupSpec, Error> {
        let family = match self.family {
            Some(FamilyArg::Dihedral) => GroupFamily::Dihedral,
            Some(FamilyArg::Quasidihedral) => GroupFamily::QuasiDihedral,
            Some(FamilyArg::Modular) => GroupFamily::Modular,
            Some(FamilyArg::Quaternion) => GroupFamily::Quaternion,
            Some(FamilyArg::Semidirect) => GroupFamily::SemidirectC2,
            None => {
                return Err(Error::InvalidArgument("--family is required".into()));
            }
        };
        spec_from_parts(family, self.m, self.d, self.n)
    }
}

#[derive(Serialize)]
struct BranchPolyOutput {
    m: u32,
    poly: Vec<String>,
}

#[derive(Serialize)]
struct PipelineOutput<'a> {
    progression: &'a Progression,
    realization: &'a SpecializedRealization,
    verification: &'a VerificationReport,
}

/// JSON payload plus whether the subcommand's primary assertion held.
struct Outcome {
    json: Option<String>,
    ok: bool,
}

impl Outcome {
    fn of<T: Serialize>(value: &T, ok: bool) -> Result<Outcome, Error> {
        let json = serde_json::to_string(value)
            .map_err(|e| Error::Internal(format!("serialization failed: {e}")))?;
        Ok(Outcome {
            json: Some(json),
            ok,
        })
    }

    fn silent_failure() -> Outcome {
        Outcome {
            json: None,
            ok: false,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (outcome, out_path) = match run(cli.command) {
        Ok(pair) => pair,
        Err(Error::InvalidArgument(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    if let Some(json) = outcome.json {
        match out_path {
            Some(path) => {
                if let Err(e) = fs::write(&path, format!("{json}\n")) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            None => println!("{json}"),
        }
    }
    if outcome.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(command: Command) -> Result<(Outcome, Option<PathBuf>), Error> {
    match command {
        Command::BranchPoly(args) => Ok((cmd_branch_poly(&args)?, args.out)),
        Command::FindProgression(args) => Ok((cmd_find_progression(&args)?, args.out)),
        Command::CheckPrimes(args) => Ok((cmd_check_primes(&args)?, args.out)),
        Command::Construct(args) => Ok((cmd_construct(&args)?, args.out)),
        Command::Verify(args) => Ok((cmd_verify(&args)?, args.out)),
        Command::Pipeline(args) => Ok((cmd_pipeline(&args)?, args.out)),
    }
}

fn cmd_branch_poly(args: &BranchPolyArgs) -> Result<Outcome, Error> {
    let m = match (args.n, args.m) {
        (Some(n), None) => {
            if !(2..=25).contains(&n) {
                return Err(Error::InvalidArgument(format!(
                    "n = {n} is out of range; need 2 <= n <= 25"
                )));
            }
            1u32 << (n - 1)
        }
        (None, Some(m)) => m,
        _ => {
            return Err(Error::InvalidArgument(
                "give exactly one of --n (power of two via 2^(n-1)) or --m".into(),
            ));
        }
    };
    let data = branch_values(m)?;
    Outcome::of(
        &BranchPolyOutput {
            m,
            poly: data.branch_poly.to_strings(),
        },
        true,
    )
}

fn cmd_find_progression(args: &FindProgressionArgs) -> Result<Outcome, Error> {
    let (p, q) = resolve_pair(args.n, args.p, args.q)?;
    let check = is_good_prime_pair(args.n, p, q);
    if !check.good {
        eprintln!("prime pair ({p}, {q}) is not usable for n = {}:", args.n);
        for reason in &check.reasons {
            eprintln!("  - {reason}");
        }
        return Ok(Outcome::silent_failure());
    }
    let progression = find_t0(args.n, p, q)?;
    Outcome::of(&progression, true)
}

fn cmd_check_primes(args: &CheckPrimesArgs) -> Result<Outcome, Error> {
    if let Some(t0) = args.t0 {
        let certification = certify(args.n, args.p, args.q, t0);
        if !certification.ok {
            eprintln!(
                "t0 = {t0} is not certified for ({}, {}) at n = {}:",
                args.p, args.q, args.n
            );
            for reason in &certification.reasons {
                eprintln!("  - {reason}");
            }
        }
        let ok = certification.ok;
        return Outcome::of(&certification, ok);
    }
    let check = is_good_prime_pair(args.n, args.p, args.q);
    if !check.good {
        eprintln!(
            "prime pair ({}, {}) is not usable for n = {}:",
            args.p, args.q, args.n
        );
        for reason in &check.reasons {
            eprintln!("  - {reason}");
        }
    }
    let good = check.good;
    Outcome::of(&check, good)
}

fn cmd_construct(args: &ConstructArgs) -> Result<Outcome, Error> {
    let spec = args.group.to_spec()?;
    let t = parse_rat(&args.t)?;
    let realization = build_specialized(&spec, &t, args.precision_bits)?;
    eprintln!(
        "built degree-{} polynomial at {} bits",
        realization.poly().degree().unwrap_or(0),
        realization.precision_used()
    );
    Outcome::of(&realization, true)
}

fn cmd_verify(args: &VerifyArgs) -> Result<Outcome, Error> {
    let (poly, spec): (QPoly, GroupSpec) = match (&args.realization, &args.poly) {
        (Some(path), None) => {
            let text = fs::read_to_string(path).map_err(|e| {
                Error::InvalidArgument(format!("cannot read {}: {e}", path.display()))
            })?;
            let realization: SpecializedRealization = serde_json::from_str(&text).map_err(|e| {
                Error::InvalidArgument(format!("{} is not a realization: {e}", path.display()))
            })?;
            (realization.poly().clone(), realization.spec().clone())
        }
        (None, Some(inline)) => {
            let coeffs: Vec<String> = inline.split(',').map(|s| s.trim().to_string()).collect();
            (QPoly::from_strings(&coeffs)?, args.group.to_spec()?)
        }
        _ => {
            return Err(Error::InvalidArgument(
                "give exactly one of a realization file or --poly".into(),
            ));
        }
    };
    let report = verify(&poly, &spec, args.num_primes, args.seed)?;
    eprintln!(
        "verdict: {} ({} primes sampled, max deviation {})",
        match report.verdict {
            Verdict::Consistent => "consistent",
            Verdict::Inconsistent => "inconsistent",
            Verdict::Inconclusive => "inconclusive",
        },
        report.primes_sampled,
        report.max_abs_deviation
    );
    let ok = report.verdict == Verdict::Consistent;
    Outcome::of(&report, ok)
}

fn cmd_pipeline(args: &PipelineArgs) -> Result<Outcome, Error> {
    let spec = GroupSpec::quaternion(args.n)?;
    let (p, q) = resolve_pair(args.n, args.p, args.q)?;
    let check = is_good_prime_pair(args.n, p, q);
    if !check.good {
        eprintln!("prime pair ({p}, {q}) is not usable for n = {}:", args.n);
        for reason in &check.reasons {
            eprintln!("  - {reason}");
        }
        return Ok(Outcome::silent_failure());
    }
    let progression = find_t0(args.n, p, q)?;
    eprintln!(
        "progression: t = {} mod {}",
        progression.t0, progression.modulus
    );
    let t = parse_rat(&progression.t0.to_string())?;
    let realization = build_specialized(&spec, &t, args.precision_bits)?;
    eprintln!(
        "built degree-{} polynomial at {} bits",
        realization.poly().degree().unwrap_or(0),
        realization.precision_used()
    );
    let report = verify(realization.poly(), &spec, args.num_primes, args.seed)?;
    eprintln!("verdict: {:?}", report.verdict);
    let ok = report.verdict == Verdict::Consistent;
    Outcome::of(
        &PipelineOutput {
            progression: &progression,
            realization: &realization,
            verification: &report,
        },
        ok,
    )
}

/// Uses the supplied pair, or searches for the smallest good one when both
/// primes are omitted. Supplying only one is a usage error.
fn resolve_pair(n: u32, p: Option<u64>, q: Option<u64>) -> Result<(u64, u64), Error> {
    match (p, q) {
        (Some(p), Some(q)) => Ok((p, q)),
        (None, None) => {
            let (p, q) = smallest_good_pair(n)?;
            eprintln!("auto-selected prime pair ({p}, {q})");
            Ok((p, q))
        }
        _ => Err(Error::InvalidArgument(
            "give both --p and --q, or neither to search automatically".into(),
        )),
    }
}
