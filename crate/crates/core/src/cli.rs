//! Command-line front end: decompose matrices, verify circuits against
//! matrices, emit component-count reports, and run the state-discrimination
//! worked example.

use crate::analysis::{scaling_report_with_seed, verify_decomposition};
use crate::circuit::Circuit;
use crate::decompose::{
    decompose_bwc, decompose_clements, decompose_mbs3, decompose_reck, DecompositionResult,
    Mbs3Params,
};
use crate::matrix::{
    distance_up_to_global_phase, haar_random_unitary, ComplexMatrix, UnitaryMatrix,
};
use crate::usd::{
    povm_set, success_probability, usd_clements_closed_form, usd_unitary, usd_uprime,
    uprime_closed_form, UsdClosedForm, UsdParams,
};
use crate::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Exit status plus message for a failed command.
struct Failure {
    message: String,
    code: u8,
}

impl Failure {
    fn new(message: impl Into<String>, code: u8) -> Self {
        Self {
            message: message.into(),
            code,
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::NotUnitary { .. } => 3,
            _ => 2,
        };
        Failure::new(err.to_string(), code)
    }
}

type CmdResult = std::result::Result<u8, Failure>;

#[derive(Parser)]
#[command(
    name = "lumesh",
    version,
    about = "Decompose unitaries into linear-optical circuits and verify them"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose a unitary into a circuit under a chosen scheme
    Decompose(DecomposeArgs),
    /// Replay a circuit file and measure its distance from a matrix file
    Verify(VerifyArgs),
    /// Tabulate component counts per scheme over a range of mode counts
    Report(ReportArgs),
    /// Run the two-state discrimination example end to end
    Usd(UsdArgs),
}

#[derive(Copy, Clone, ValueEnum)]
enum SchemeArg {
    /// Triangular mesh of two-mode blocks
    Reck,
    /// Rectangular mesh of two-mode blocks
    Clements,
    /// Four identical fixed blocks with phase masks (3 modes)
    Mbs3,
    /// Multiport-beamsplitter mesh with phase masks
    Bwc,
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["input", "random"])))]
struct DecomposeArgs {
    /// Decomposition scheme
    #[arg(long, value_enum)]
    scheme: SchemeArg,
    /// Path to a matrix JSON file
    #[arg(long)]
    input: Option<PathBuf>,
    /// Generate a random N-mode unitary instead of reading a file
    #[arg(long, value_name = "N")]
    random: Option<usize>,
    /// Seed for --random
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Write the circuit JSON here instead of printing it
    #[arg(long)]
    output: Option<PathBuf>,
    /// Reconstruction tolerance deciding the exit status
    #[arg(long, default_value_t = 1e-8, value_parser = parse_tolerance)]
    tolerance: f64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Path to a circuit JSON file
    #[arg(long)]
    circuit: PathBuf,
    /// Path to a matrix JSON file
    #[arg(long)]
    matrix: PathBuf,
    /// Distance tolerance deciding the exit status
    #[arg(long, default_value_t = 1e-8, value_parser = parse_tolerance)]
    tolerance: f64,
}

#[derive(Args)]
struct ReportArgs {
    /// Smallest mode count
    #[arg(long)]
    min: usize,
    /// Largest mode count
    #[arg(long)]
    max: usize,
    /// Base seed for the per-size random unitaries
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

#[derive(Args)]
struct UsdArgs {
    /// State-overlap ratio, strictly between 0 and 1
    #[arg(long)]
    delta: f64,
    /// Residual tolerance deciding the exit status
    #[arg(long, default_value_t = 1e-8, value_parser = parse_tolerance)]
    tolerance: f64,
    /// Write the four-block circuit JSON here instead of printing it
    #[arg(long)]
    output: Option<PathBuf>,
}

fn parse_tolerance(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s
        .parse()
        .map_err(|e| format!("not a number: {e}"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err("tolerance must be a positive finite number".into())
    }
}

/// Parses arguments from the process environment and runs one command,
/// returning the exit status.
pub fn run() -> u8 {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Decompose(args) => cmd_decompose(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Report(args) => cmd_report(&args),
        Command::Usd(args) => cmd_usd(&args),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn read_file(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::new(format!("cannot read {}: {e}", path.display()), 2))
}

fn write_file(path: &Path, contents: &str) -> std::result::Result<(), Failure> {
    std::fs::write(path, contents)
        .map_err(|e| Failure::new(format!("cannot write {}: {e}", path.display()), 2))
}

fn fmt_angle(x: f64) -> String {
    format!("{x:+.16e}")
}

fn fmt_complex(z: Complex64) -> String {
    format!("{:+.16}{:+.16}i", z.re, z.im)
}

fn matrix_lines(m: &ComplexMatrix) -> String {
    let mut out = String::new();
    for r in 0..m.rows() {
        out.push_str("  [ ");
        for c in 0..m.cols() {
            if c > 0 {
                out.push_str("  ");
            }
            out.push_str(&fmt_complex(m.get(r, c)));
        }
        out.push_str(" ]\n");
    }
    out
}

fn describe_result(result: &DecompositionResult) -> String {
    let mut out = String::new();
    let counts = result.circuit.count_components(&result.scheme);
    let _ = writeln!(out, "scheme: {}", result.scheme);
    let _ = writeln!(out, "modes: {}", result.circuit.width());
    let _ = writeln!(
        out,
        "components: n_bs={} n_ps={} n_phase_masks={} n_fixed_mbs={}",
        counts.n_bs, counts.n_ps, counts.n_phase_masks, counts.n_fixed_mbs
    );
    let _ = writeln!(out, "blocks (application order):");
    for (i, b) in result.blocks.iter().enumerate() {
        let _ = writeln!(
            out,
            "  block {:>3}: modes ({},{})  kind={:<6}  theta = {}  phi = {}",
            i + 1,
            b.m,
            b.n,
            format!("{:?}", b.flavor),
            fmt_angle(b.theta),
            fmt_angle(b.phi)
        );
    }
    let _ = writeln!(out, "output phases:");
    for (k, d) in result.diag.deltas().iter().enumerate() {
        let _ = writeln!(out, "  mode {}: {}", k + 1, fmt_angle(*d));
    }
    out
}

fn describe_mbs3_params(p: &Mbs3Params) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "named parameters:");
    let _ = writeln!(out, "  mu1    = {} (fixed)", fmt_angle(p.mu1()));
    let _ = writeln!(out, "  mu2    = {}", fmt_angle(p.mu2));
    let _ = writeln!(out, "  mu3    = {}", fmt_angle(p.mu3));
    let _ = writeln!(out, "  mu4    = {}", fmt_angle(p.mu4));
    let _ = writeln!(out, "  nu1    = {}", fmt_angle(p.nu1));
    let _ = writeln!(out, "  nu2    = {}", fmt_angle(p.nu2));
    let _ = writeln!(out, "  nu3    = {}", fmt_angle(p.nu3));
    let _ = writeln!(out, "  nu4    = {}", fmt_angle(p.nu4));
    let _ = writeln!(out, "  delta1 = {}", fmt_angle(p.delta1));
    out
}

fn describe_closed_form(label: &str, f: &UsdClosedForm) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "closed form ({label}):");
    let _ = writeln!(out, "  theta1 = {}", fmt_angle(f.theta1));
    let _ = writeln!(out, "  theta2 = {}", fmt_angle(f.theta2));
    let _ = writeln!(out, "  theta3 = {}", fmt_angle(f.theta3));
    let _ = writeln!(out, "  phi1   = {}", fmt_angle(f.phi1));
    let _ = writeln!(out, "  phi2   = {}", fmt_angle(f.phi2));
    let _ = writeln!(out, "  phi3   = {}", fmt_angle(f.phi3));
    let _ = writeln!(out, "  a1     = {}", fmt_angle(f.a1));
    out
}

fn emit_circuit_json(
    circuit: &Circuit,
    output: Option<&PathBuf>,
) -> std::result::Result<String, Failure> {
    let json = circuit.to_json()?;
    match output {
        Some(path) => {
            write_file(path, &json)?;
            Ok(format!("circuit JSON written to {}\n", path.display()))
        }
        None => Ok(format!("circuit JSON:\n{json}\n")),
    }
}

fn load_unitary(args: &DecomposeArgs) -> std::result::Result<(UnitaryMatrix, String), Failure> {
    match (&args.input, args.random) {
        (Some(path), None) => {
            let text = read_file(path)?;
            let m = ComplexMatrix::from_json(&text)?;
            let u = UnitaryMatrix::new(m)?;
            Ok((u, format!("input: {}", path.display())))
        }
        (None, Some(n)) => {
            let u = haar_random_unitary(n, args.seed)?;
            Ok((u, format!("input: random, modes={n}, seed={}", args.seed)))
        }
        _ => unreachable!("clap enforces exactly one source"),
    }
}

fn cmd_decompose(args: &DecomposeArgs) -> CmdResult {
    let (u, source_line) = load_unitary(args)?;
    let (result, extra) = match args.scheme {
        SchemeArg::Reck => (decompose_reck(&u)?, None),
        SchemeArg::Clements => (decompose_clements(&u)?, None),
        SchemeArg::Bwc => (decompose_bwc(&u)?, None),
        SchemeArg::Mbs3 => {
            let (params, result) = decompose_mbs3(&u)?;
            (result, Some(describe_mbs3_params(&params)))
        }
    };
    let distance = verify_decomposition(&u, &result)?.distance;
    let mut out = String::new();
    let _ = writeln!(out, "{source_line}");
    out.push_str(&describe_result(&result));
    if let Some(extra) = extra {
        out.push_str(&extra);
    }
    let _ = writeln!(out, "reconstruction distance: {distance:.6e}");
    out.push_str(&emit_circuit_json(&result.circuit, args.output.as_ref())?);
    print!("{out}");
    if distance <= args.tolerance {
        Ok(0)
    } else {
        eprintln!(
            "error: reconstruction distance {distance:.6e} exceeds tolerance {:.6e}",
            args.tolerance
        );
        Ok(4)
    }
}

fn cmd_verify(args: &VerifyArgs) -> CmdResult {
    let circuit = Circuit::from_json(&read_file(&args.circuit)?)?;
    let matrix = ComplexMatrix::from_json(&read_file(&args.matrix)?)?;
    let matrix = UnitaryMatrix::new(matrix)?;
    if circuit.width() != matrix.dim() {
        return Err(Failure::from(Error::Dimension(format!(
            "circuit acts on {} modes but the matrix has {}",
            circuit.width(),
            matrix.dim()
        ))));
    }
    let replayed = circuit.evaluate();
    let eq = distance_up_to_global_phase(replayed.inner(), matrix.inner())?;
    println!("distance: {:.6e}", eq.distance);
    if eq.distance <= args.tolerance {
        Ok(0)
    } else {
        eprintln!(
            "error: distance {:.6e} exceeds tolerance {:.6e}",
            eq.distance, args.tolerance
        );
        Ok(4)
    }
}

fn cmd_report(args: &ReportArgs) -> CmdResult {
    if args.min < 1 || args.max < args.min {
        return Err(Failure::new(
            format!(
                "mode range must satisfy 1 <= min <= max, got {}..={}",
                args.min, args.max
            ),
            2,
        ));
    }
    match scaling_report_with_seed(args.min, args.max, args.seed) {
        Ok(report) => {
            print!("{}", report.to_table());
            println!();
            print!("{}", report.to_csv());
            Ok(0)
        }
        Err(Error::InvalidArgument(msg)) => Err(Failure::new(msg, 2)),
        Err(err) => Err(Failure::new(err.to_string(), 5)),
    }
}

fn cmd_usd(args: &UsdArgs) -> CmdResult {
    let p = UsdParams::from_delta(args.delta)?;
    let u = usd_unitary(p);
    let delta = p.delta();
    let gamma = (1.0 - delta * delta).sqrt();
    let theta3 = gamma.atan2(delta);

    let prob = success_probability(p);
    let r_prob_b = (prob - 2.0 * p.b() * p.b()).abs();
    let r_prob_overlap = (prob - (1.0 - (p.a() * p.a() - p.b() * p.b()))).abs();

    let set = povm_set(p);
    let mut r_complete: f64 = 0.0;
    for r in 0..3 {
        for c in 0..3 {
            let mut sum = Complex64::new(0.0, 0.0);
            for v in [&set.u1, &set.u2, &set.u3] {
                sum += v[r] * v[c].conj();
            }
            let want = if r == c && r < 2 { 1.0 } else { 0.0 };
            r_complete = r_complete.max((sum - Complex64::new(want, 0.0)).norm());
        }
    }

    let (direct_form, direct_matrix) = usd_clements_closed_form(p);
    let r_direct = distance_up_to_global_phase(direct_matrix.inner(), u.inner())?.distance;

    let uprime = usd_uprime(p);
    let (conj_form, conj_matrix) = uprime_closed_form(p);
    let r_conj = distance_up_to_global_phase(conj_matrix.inner(), uprime.inner())?.distance;

    let (mbs_params, mbs_result) = decompose_mbs3(&u)?;
    let r_circuit = verify_decomposition(&u, &mbs_result)?.distance;

    let mut out = String::new();
    let _ = writeln!(out, "delta = {delta:.16}");
    let _ = writeln!(out, "a = {:.16}", p.a());
    let _ = writeln!(out, "b = {:.16}", p.b());
    let _ = writeln!(out, "theta3 = atan(sqrt(1 - delta^2)/delta) = {theta3:.16}");
    let _ = writeln!(out, "discrimination unitary:");
    out.push_str(&matrix_lines(u.inner()));
    let _ = writeln!(out, "success probability = {prob:.16}");
    let _ = writeln!(out, "residual |p - 2 b^2| = {r_prob_b:.6e}");
    let _ = writeln!(out, "residual |p - (1 - a^2 + b^2)| = {r_prob_overlap:.6e}");
    let _ = writeln!(out, "residual measurement completeness = {r_complete:.6e}");
    out.push_str(&describe_closed_form("direct", &direct_form));
    let _ = writeln!(out, "residual vs discrimination unitary = {r_direct:.6e}");
    out.push_str(&describe_closed_form("coupler-conjugated", &conj_form));
    let _ = writeln!(out, "residual vs conjugated unitary = {r_conj:.6e}");
    out.push_str(&describe_mbs3_params(&mbs_params));
    let _ = writeln!(out, "four-block circuit reconstruction residual = {r_circuit:.6e}");
    out.push_str(&emit_circuit_json(&mbs_result.circuit, args.output.as_ref())?);
    print!("{out}");

    let worst = [
        r_prob_b,
        r_prob_overlap,
        r_complete,
        r_direct,
        r_conj,
        r_circuit,
    ]
    .into_iter()
    .fold(0.0f64, f64::max);
    if worst <= args.tolerance {
        Ok(0)
    } else {
        eprintln!(
            "error: worst residual {worst:.6e} exceeds tolerance {:.6e}",
            args.tolerance
        );
        Ok(4)
    }
}
