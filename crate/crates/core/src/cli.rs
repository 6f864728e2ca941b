//! Command-line front end.
//!
//! Exit codes: 0 when every check passes, 1 on a verification failure,
//! 2 on malformed input.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::One;
use serde::Serialize;
use serde_json::json;

use crate::chains::{self, CopointedObject};
use crate::error::{Error, Result};
use crate::io;
use crate::matrix::Matrix;
use crate::moments::{self, Totality};
use crate::multiset::{Alphabet, MultisetBasis};
use crate::optim::Mode;
use crate::pcoh;
use crate::rational::{self, Q};
use crate::report::{all_passed, CheckReport};
use crate::stoch::{self, AtomicMeasure, ProbVector};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

const ANCHOR_EQUALISER: &str = "symmetric-equaliser-and-coequaliser";
const ANCHOR_MULTKERN: &str = "multinomial-kernels-form-a-cone";

#[derive(Parser, Debug)]
#[command(name = "definetti", version, about = "Draw-and-delete chains, De Finetti cones and the exponential of PCS at finite depth")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// `bool`, a symbol count, comma-separated symbols, or a JSON file.
    #[arg(long, global = true, default_value = "bool")]
    pub alphabet: String,
    #[arg(long, global = true, default_value_t = 4)]
    pub depth: usize,
    #[arg(long, global = true, default_value_t = 64)]
    pub grid: usize,
    /// Tolerance; defaults depend on the command.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// `exact` or `float`.
    #[arg(long, global = true, default_value = "exact")]
    pub mode: Mode,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long = "prefix-len", global = true, default_value_t = 1000)]
    pub prefix_len: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Runs every structural check at the configured alphabet and depth.
    VerifyAll {
        /// Perturbs one draw-and-delete entry (negative control).
        #[arg(long)]
        inject_fault: bool,
    },
    #[command(subcommand)]
    Definetti(DefinettiCommand),
    #[command(subcommand)]
    Bang(BangCommand),
    #[command(subcommand)]
    Chain(ChainCommand),
}

#[derive(Subcommand, Debug)]
pub enum DefinettiCommand {
    /// Histogram of empirical frequencies plus a moment comparison, as CSV.
    Simulate { mixing: PathBuf },
    /// Recovers a mixing measure from a total `!X` element.
    Recover { bang: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum BangCommand {
    /// Mixture of promotions of a mixing measure.
    Iota { mixing: PathBuf },
    /// Checks the totality recurrence.
    Totality { bang: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum ChainCommand {
    /// Builds one chain and checks its squares and cone correspondence.
    Verify {
        #[arg(long, value_enum, default_value = "stoch")]
        backend: ChainBackend,
        #[arg(long)]
        inject_fault: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainBackend {
    /// Urn chain of the alphabet in `Stoch`.
    Stoch,
    /// De Finetti chain of `X^PCoh`.
    Pcoh,
    /// Free chain over `X^PCoh & 1`.
    PcohFree,
}

/// Parses arguments and runs the command, returning the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotTotal { .. }
        | Error::NotCompletelyMonotone { .. }
        | Error::SquareUnsatisfiable { .. }
        | Error::IncompatibleCone { .. }
        | Error::AsymmetricLeg { .. } => EXIT_FAIL,
        _ => EXIT_INPUT,
    }
}

fn validate(config: &RunConfig) -> Result<()> {
    if config.grid < 2 {
        return Err(Error::Dimension(format!("grid resolution {} < 2", config.grid)));
    }
    if let Some(t) = config.tol {
        if !(t > 0.0) {
            return Err(Error::Dimension(format!("tolerance {t} must be positive")));
        }
    }
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<i32> {
    let c = &cli.config;
    validate(c)?;
    match &cli.command {
        Command::VerifyAll { inject_fault } => {
            let alphabet = io::alphabet_arg(&c.alphabet)?;
            let reports = verify_all(&alphabet, c.depth, c.seed, *inject_fault)?;
            emit_report(c, &reports)
        }
        Command::Definetti(DefinettiCommand::Simulate { mixing }) => simulate(c, mixing),
        Command::Definetti(DefinettiCommand::Recover { bang }) => recover(c, bang),
        Command::Bang(BangCommand::Iota { mixing }) => {
            let m = read_mixing(mixing)?;
            let b = moments::iota(&m, c.depth)?;
            if !m.is_probability() {
                eprintln!("substochastic: not total");
            }
            write_out(c, &io::bang_to_json(&b))?;
            Ok(EXIT_PASS)
        }
        Command::Bang(BangCommand::Totality { bang }) => totality(c, bang),
        Command::Chain(ChainCommand::Verify { backend, inject_fault }) => {
            let alphabet = io::alphabet_arg(&c.alphabet)?;
            let reports = verify_chain(&alphabet, *backend, c.depth, c.seed, *inject_fault)?;
            emit_report(c, &reports)
        }
    }
}

fn write_out(c: &RunConfig, text: &str) -> Result<()> {
    match &c.out {
        Some(p) => fs::write(p, text).map_err(|e| Error::Parse(format!("{}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct Report<'a> {
    passed: bool,
    checks: &'a [CheckReport],
}

fn emit_report(c: &RunConfig, reports: &[CheckReport]) -> Result<i32> {
    let passed = all_passed(reports);
    for r in reports.iter().filter(|r| !r.passed) {
        let level = r.level.map_or(String::new(), |l| format!(" at level {l}"));
        eprintln!("FAIL {}{level} ({}): deviation {}", r.check, r.anchor, r.deviation.as_f64());
    }
    write_out(c, &io::to_json(&Report { passed, checks: reports }))?;
    Ok(if passed { EXIT_PASS } else { EXIT_FAIL })
}

fn read_mixing(path: &Path) -> Result<AtomicMeasure> {
    let m: AtomicMeasure = io::read_json(path)?;
    m.validate()?;
    Ok(m)
}

/// Rational point `(1, 2, …, k) / Σ` used as a fixed test distribution.
fn staircase(k: usize) -> ProbVector {
    let total = (k * (k + 1) / 2) as i64;
    ProbVector::proper((1..=k as i64).map(|i| rational::q(i, total)).collect()).expect("sums to one")
}

fn chain_for(alphabet: &Alphabet, backend: ChainBackend, depth: usize) -> Result<chains::DDChain> {
    let obj = match backend {
        ChainBackend::Stoch => CopointedObject::stoch_free(alphabet),
        ChainBackend::Pcoh => CopointedObject::pcoh_definetti(alphabet),
        ChainBackend::PcohFree => CopointedObject::pcoh_free(&pcoh::ground_pcs(alphabet)),
    };
    chains::build_dd_chain(&obj, depth)
}

/// Squares and cone round trips of one chain.
pub fn verify_chain(
    alphabet: &Alphabet,
    backend: ChainBackend,
    depth: usize,
    seed: u64,
    inject_fault: bool,
) -> Result<Vec<CheckReport>> {
    let mut chain = chain_for(alphabet, backend, depth)?;
    if inject_fault {
        if depth == 0 {
            return Err(Error::Depth { depth, level: 1 });
        }
        chain.inject_fault(depth.min(2) - 1);
    }
    let mut reports = chain.verify_squares()?;
    if !all_passed(&reports) {
        // cone checks presuppose a valid chain
        return Ok(reports);
    }
    for param in [1, 2] {
        reports.extend(chains::verify_tensor_parametrized(&chain, param, 3, seed)?.to_checks());
    }
    Ok(reports)
}

/// The full structural suite.
pub fn verify_all(alphabet: &Alphabet, depth: usize, seed: u64, inject_fault: bool) -> Result<Vec<CheckReport>> {
    let k = alphabet.len();
    let mut reports = Vec::new();
    reports.extend(verify_chain(alphabet, ChainBackend::Stoch, depth, seed, inject_fault)?);
    reports.extend(verify_chain(alphabet, ChainBackend::Pcoh, depth, seed, false)?);
    reports.extend(verify_chain(alphabet, ChainBackend::PcohFree, depth, seed, false)?);

    let definetti = chain_for(alphabet, ChainBackend::Pcoh, depth)?;
    let free = chain_for(alphabet, ChainBackend::PcohFree, depth)?;
    let lifted = chains::lift_copointed_morphism(&chains::unit_pairing(definetti.object()), &definetti, &free)?;
    reports.extend(chains::verify_chain_morphism(&lifted, &definetti, &free)?);
    for (n, comp) in lifted.components.iter().enumerate() {
        let dev = comp.max_abs_diff(pcoh::mn_alpha(alphabet, n).matrix())?;
        reports.push(CheckReport::exact("multinomial closed form vs solve", chains::ANCHOR_CHAIN_MORPHISM, Some(n), dev));
    }

    for n in 0..depth {
        reports.push(CheckReport::exact(
            "urn/delta conjugation",
            chains::ANCHOR_CONJUGATION,
            Some(n),
            chains::conjugation_deviation(k, n)?,
        ));
    }

    reports.extend(equaliser_checks(alphabet, depth)?);

    let urn = chain_for(alphabet, ChainBackend::Stoch, depth)?;
    let r = staircase(k);
    for n in 0..depth {
        let top = Matrix::row_vector(stoch::multkern(&r, n + 1)?);
        let dev = top.then(urn.dd(n))?.max_abs_diff(&Matrix::row_vector(stoch::multkern(&r, n)?))?;
        reports.push(CheckReport::exact("multinomial cone", ANCHOR_MULTKERN, Some(n), dev));
    }

    let uniform = ProbVector::proper(vec![rational::q(1, k as i64); k])?;
    let mixing = AtomicMeasure::new(vec![
        stoch::Atom { point: r, weight: rational::q(1, 3) },
        stoch::Atom { point: uniform, weight: rational::q(2, 3) },
    ])?;
    let mixing = AtomicMeasure { alphabet: Some(alphabet.clone()), ..mixing };
    reports.extend(moments::verify_iota_cone(&mixing, depth)?);
    reports.push(moments::totality_report(&moments::iota(&mixing, depth)?, 0.0));
    Ok(reports)
}

/// σ-invariance of `eq_n`, `eq ; coeq = id` and `coeq ; eq = symmetrizer`.
fn equaliser_checks(alphabet: &Alphabet, depth: usize) -> Result<Vec<CheckReport>> {
    let k = alphabet.len();
    let mut out = Vec::new();
    for n in 0..=depth {
        let eq = stoch::eq_n_stoch(alphabet, n);
        let coeq = stoch::coeq_n_stoch(alphabet, n);
        let sym = stoch::check_symmetric(eq.matrix(), k, n)?;
        let mut r = CheckReport::exact("eq invariant under symmetries", ANCHOR_EQUALISER, Some(n), sym.max_deviation);
        if let Some(p) = sym.witness {
            r = r.with_witness(format!("{:?}", p.image()));
        }
        out.push(r);
        let id = eq.matrix().then(coeq.matrix())?.max_abs_diff(&Matrix::identity(MultisetBasis::exact(k, n).len()))?;
        out.push(CheckReport::exact("eq then coeq is identity", ANCHOR_EQUALISER, Some(n), id));
        let avg = coeq.matrix().then(eq.matrix())?.max_abs_diff(&stoch::symmetrizer(k, n))?;
        out.push(CheckReport::exact("coeq then eq is the symmetrizer", ANCHOR_EQUALISER, Some(n), avg));
    }
    Ok(out)
}

/// Histogram CSV and the moment comparison table.
pub fn simulation_csv(mixing: &AtomicMeasure, config: &RunConfig) -> Result<(String, String)> {
    let alphabet = moments::mixing_alphabet(mixing);
    let law = stoch::empirical_law(mixing, config.prefix_len, config.trials, config.seed)?;
    let mut table = String::from("multiset,mixing,empirical,abs_error\n");
    for n in 1..=3 {
        for mu in MultisetBasis::exact(alphabet.len(), n).items() {
            let exact = rational::to_f64(&mixing.moment(mu));
            let emp = law.moment(mu);
            table.push_str(&format!("\"{}\",{exact},{emp},{}\n", alphabet.show(mu), (exact - emp).abs()));
        }
    }
    Ok((law.to_csv(&alphabet), table))
}

fn simulate(c: &RunConfig, path: &Path) -> Result<i32> {
    let mixing = read_mixing(path)?;
    if !mixing.is_probability() {
        return Err(Error::NotADistribution("simulation needs a probability mixing".into()));
    }
    let (hist, table) = simulation_csv(&mixing, c)?;
    match &c.out {
        Some(p) => {
            let side = p.with_extension("moments.csv");
            fs::write(p, hist).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?;
            fs::write(&side, table).map_err(|e| Error::Parse(format!("{}: {e}", side.display())))?;
        }
        None => print!("{hist}\n{table}"),
    }
    Ok(EXIT_PASS)
}

fn report_non_total(b: &moments::BangElement, t: &Totality) {
    if let Totality::NonTotal { witness, lhs, rhs, defect } = t {
        if b.get(&crate::multiset::Multiset::empty(b.alphabet().len())) < Q::one() || rhs < lhs {
            eprintln!("substochastic: not total");
        }
        eprintln!(
            "not total at {}: {} vs {} (defect {})",
            b.alphabet().show(witness),
            rational::format(lhs),
            rational::format(rhs),
            rational::format(defect)
        );
    }
}

fn totality(c: &RunConfig, path: &Path) -> Result<i32> {
    let b = io::read_bang(path)?;
    let tol = c.tol.unwrap_or(moments::DEFAULT_TOTALITY_TOL);
    let t = moments::check_total(&b, tol);
    let body = match &t {
        Totality::Total { defect } => json!({"total": true, "defect": rational::format(defect)}),
        Totality::NonTotal { witness, lhs, rhs, defect } => json!({
            "total": false,
            "witness": witness,
            "lhs": rational::format(lhs),
            "rhs": rational::format(rhs),
            "defect": rational::format(defect),
        }),
    };
    report_non_total(&b, &t);
    write_out(c, &io::to_json(&body))?;
    Ok(if t.is_total() { EXIT_PASS } else { EXIT_FAIL })
}

fn recover(c: &RunConfig, path: &Path) -> Result<i32> {
    let b = io::read_bang(path)?;
    let tol = c.tol.unwrap_or(moments::DEFAULT_RECOVERY_TOL);
    let t = moments::check_total(&b, moments::DEFAULT_TOTALITY_TOL.max(tol));
    if !t.is_total() {
        report_non_total(&b, &t);
        return Ok(EXIT_FAIL);
    }
    let rec = moments::recover_measure(&b, c.grid, tol, c.mode)?;
    write_out(c, &io::to_json(&rec))?;
    match &rec.diagnostic {
        Some(d) => {
            eprintln!("{d}");
            Ok(EXIT_FAIL)
        }
        None => Ok(EXIT_PASS),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn default_suite_passes() {
        let reports = verify_all(&Alphabet::bool(), 3, 0, false).unwrap();
        assert!(all_passed(&reports));
        assert!(reports.iter().all(|r| r.deviation.is_zero()));
    }

    #[test]
    fn injected_fault_is_named() {
        let reports = verify_all(&Alphabet::bool(), 3, 0, true).unwrap();
        let failed: Vec<_> = reports.iter().filter(|r| !r.passed).collect();
        assert!(!failed.is_empty());
        assert_eq!(failed[0].check, "stoch dd square");
        assert_eq!(failed[0].level, Some(1));
    }

    #[test]
    fn staircase_is_a_distribution() {
        assert!(staircase(3).is_proper());
        assert!(!staircase(1).weights()[0].is_zero());
    }
}
