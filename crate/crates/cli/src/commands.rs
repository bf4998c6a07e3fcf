//! Subcommand definitions and handlers. Each handler builds a
//! [`Report`](crate::report::Report); `run` emits it and returns the
//! overall verdict that decides the process exit code.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use wehrlab::{
    adapted_grid, conditional_wehrl_fock_amplified, conditional_wehrl_gaussian, minimize_gap,
    optimal_sequence_state, random_state, saturation_sweep, thermal, tmsv_fock, tripartite_sweep,
    two_mode_squeezed, verify_bipartite, verify_tripartite_purified, witness, FockSpace,
    GaussianState, ModePartition, OptimizerConfig, SearchFamily, StateDescriptor,
    TripartiteRecord, VerificationRecord, WitnessReport, CSV_HEADER, TRIPARTITE_CSV_HEADER,
};

use crate::report::{emit, resolve_out, Format, Report, RunConfig};

/// Records pass when within `max(error_budget, TOLERANCE_FLOOR)` of their
/// bound; mirrors the library's record tolerance.
const TOLERANCE_FLOOR: f64 = 1e-9;

/// At most this many per-record lines go to standard output; larger
/// batches print the summary only (the full table goes to `--out`).
const MAX_HUMAN_ROWS: usize = 12;

/// Verifies entropic uncertainty relations with Gaussian quantum memory:
/// heterodyne-measurement entropy bounds, their tripartite extension, the
/// saturating state family, an entanglement witness, and Fock-space
/// cross-checks of the closed forms.
#[derive(Parser)]
#[command(name = "wehrlab", version)]
pub struct Cli {
    /// Write the data table here (CSV or JSON per --format). Relative
    /// paths resolve inside $WEHRLAB_OUT_DIR when that is set.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Data file format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Worker threads for random-suite batches (1 = fully sequential;
    /// results are ordered by input either way).
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Fock photon-number cutoff per mode (oracle cross-checks).
    #[arg(long, global = true, default_value_t = 40)]
    cutoff: usize,
    /// Radial quadrature order (oracle cross-checks).
    #[arg(long, global = true, default_value_t = 24)]
    radial: usize,
    /// Angular quadrature order (oracle cross-checks).
    #[arg(long, global = true, default_value_t = 24)]
    angular: usize,
    /// Base seed for randomized suites (state i uses seed + i).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check S(Z|B) >= M ln(e^{S(A|B)/M} + 1) on random or family states.
    VerifyBipartite(VerifyArgs),
    /// Check S(Z|B) + S(Z|C) >= M ln(2 + 2 cosh(S(A|B)/M)) >= M ln 4 on
    /// purifications of random or family states.
    VerifyTripartite(VerifyArgs),
    /// Sweep the saturating family at fixed s over increasing a: the gap
    /// above the bound shrinks toward zero.
    Sweep(SweepArgs),
    /// Tripartite sweep of s = 0 family purifications over increasing a:
    /// S(Z|B) + S(Z|C) approaches M ln 4 from above.
    TriSweep(TriSweepArgs),
    /// Entanglement witness: S(Z|B) < M ln 2 certifies entanglement.
    Witness(SelectionArgs),
    /// Cross-check the Gaussian closed form for S(Z|B) against Fock-space
    /// quadrature on an amplified two-mode squeezed state.
    OracleCheck(OracleArgs),
    /// Search a state family for the smallest gap above the bipartite
    /// bound at fixed S(A|B) = s.
    Minimize(MinimizeArgs),
    /// Gaussian state inspection.
    #[command(subcommand)]
    State(StateCommand),
}

#[derive(Subcommand)]
enum StateCommand {
    /// Print a state's covariance matrix, symplectic spectrum, entropy,
    /// and physicality check (JSON).
    Show(SelectionArgs),
}

/// State verification on either a batch of random states or one member of
/// the saturating family.
#[derive(Args)]
struct VerifyArgs {
    /// Verify this many random bipartite states (seeds seed, seed+1, ...).
    #[arg(long)]
    random: Option<usize>,
    /// Modes on side A for random states.
    #[arg(long, default_value_t = 1)]
    modes_a: usize,
    /// Modes on side B for random states.
    #[arg(long, default_value_t = 1)]
    modes_b: usize,
    /// Largest symplectic eigenvalue for random states.
    #[arg(long, default_value_t = 4.0)]
    max_nu: f64,
    /// Largest squeezing exponent for random states.
    #[arg(long, default_value_t = 1.0)]
    max_squeeze: f64,
    /// Verify one family state instead: target conditional entropy s
    /// (requires --a).
    #[arg(long, allow_negative_numbers = true)]
    s: Option<f64>,
    /// Family parameter a >= 1 (requires --s).
    #[arg(long)]
    a: Option<f64>,
    /// Modes per side for the family state.
    #[arg(long, default_value_t = 1)]
    modes: usize,
}

#[derive(Args)]
struct SweepArgs {
    /// Fixed target conditional entropy s.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    s: f64,
    /// Increasing family parameters a (comma-separated, each >= 1).
    #[arg(long, required = true, value_delimiter = ',')]
    a: Vec<f64>,
    /// Modes per side.
    #[arg(long, default_value_t = 1)]
    modes: usize,
}

#[derive(Args)]
struct TriSweepArgs {
    /// Increasing family parameters a (comma-separated, each >= 1).
    #[arg(long, required = true, value_delimiter = ',')]
    a: Vec<f64>,
    /// Modes per side.
    #[arg(long, default_value_t = 1)]
    modes: usize,
}

/// Picks one state: a member of the saturating family (--s with --a), a
/// two-mode squeezed state (--tmsv), a thermal product state (--thermal),
/// or a random bipartite state (--random).
#[derive(Args)]
struct SelectionArgs {
    /// Saturating family: target conditional entropy s (requires --a).
    #[arg(long, allow_negative_numbers = true)]
    s: Option<f64>,
    /// Family parameter a >= 1 (requires --s).
    #[arg(long)]
    a: Option<f64>,
    /// Modes per side for family and two-mode squeezed states.
    #[arg(long, default_value_t = 1)]
    modes: usize,
    /// Two-mode squeezed state with parameter a >= 1.
    #[arg(long)]
    tmsv: Option<f64>,
    /// Thermal product state on a single subsystem A with these symplectic
    /// eigenvalues (comma-separated, each >= 1/2).
    #[arg(long, value_delimiter = ',')]
    thermal: Option<Vec<f64>>,
    /// Random bipartite state from this seed.
    #[arg(long)]
    random: Option<u64>,
    /// Modes on side A for --random.
    #[arg(long, default_value_t = 1)]
    modes_a: usize,
    /// Modes on side B for --random.
    #[arg(long, default_value_t = 1)]
    modes_b: usize,
}

#[derive(Args)]
struct OracleArgs {
    /// Two-mode squeezing parameter a >= 1.
    #[arg(long)]
    a: f64,
    /// Quantum-limited amplifier gain on the measured side (1 = none).
    #[arg(long, default_value_t = 1.0)]
    kappa: f64,
    /// Pass tolerance on |S(Z|B)_fock - S(Z|B)_gaussian|.
    #[arg(long, default_value_t = 2e-3)]
    tol: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyChoice {
    /// The saturating family, searched over a.
    OptimalSequence,
    /// Randomly seeded two-mode chart search at fixed S(A|B).
    Random,
}

#[derive(Args)]
struct MinimizeArgs {
    /// Target conditional entropy S(A|B) = s.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    s: f64,
    /// Modes per side.
    #[arg(long, default_value_t = 1)]
    modes: usize,
    /// Family to search.
    #[arg(long, value_enum, default_value_t = FamilyChoice::OptimalSequence)]
    family: FamilyChoice,
    /// Upper end of the a-range for the optimal-sequence family.
    #[arg(long, default_value_t = 1000.0)]
    a_max: f64,
    /// Objective evaluation budget.
    #[arg(long, default_value_t = 2000)]
    max_evals: usize,
    /// Convergence tolerance of the search.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

/// Global options that handlers need.
#[derive(Clone, Copy)]
struct Ctx {
    seed: u64,
    cutoff: usize,
    radial: usize,
    angular: usize,
    jobs: usize,
}

pub fn run(cli: Cli) -> Result<bool> {
    let ctx = Ctx {
        seed: cli.seed,
        cutoff: cli.cutoff,
        radial: cli.radial,
        angular: cli.angular,
        jobs: cli.jobs.max(1),
    };
    let out = resolve_out(cli.out);
    let config = RunConfig {
        command: command_name(&cli.command).to_string(),
        cutoff: ctx.cutoff,
        radial_order: ctx.radial,
        angular_order: ctx.angular,
        seed: ctx.seed,
        jobs: ctx.jobs,
        format: cli.format,
        tolerance_floor: TOLERANCE_FLOOR,
        out: out.as_ref().map(|p| p.display().to_string()),
    };
    let report = match cli.command {
        Command::VerifyBipartite(args) => verify_bipartite_cmd(&args, ctx)?,
        Command::VerifyTripartite(args) => verify_tripartite_cmd(&args, ctx)?,
        Command::Sweep(args) => sweep_cmd(&args)?,
        Command::TriSweep(args) => tri_sweep_cmd(&args)?,
        Command::Witness(args) => witness_cmd(&args)?,
        Command::OracleCheck(args) => oracle_check_cmd(&args, ctx)?,
        Command::Minimize(args) => minimize_cmd(&args, ctx)?,
        Command::State(StateCommand::Show(args)) => state_show_cmd(&args)?,
    };
    emit(&config, &report, out.as_deref())?;
    Ok(report.all_pass)
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::VerifyBipartite(_) => "verify-bipartite",
        Command::VerifyTripartite(_) => "verify-tripartite",
        Command::Sweep(_) => "sweep",
        Command::TriSweep(_) => "tri-sweep",
        Command::Witness(_) => "witness",
        Command::OracleCheck(_) => "oracle-check",
        Command::Minimize(_) => "minimize",
        Command::State(StateCommand::Show(_)) => "state show",
    }
}

/// Maps `f` over `inputs`, in parallel when `jobs > 1`. Output order
/// always matches input order, so reports are identical across job counts.
fn run_jobs<I, O, F>(jobs: usize, inputs: Vec<I>, f: F) -> Result<Vec<O>>
where
    I: Send,
    O: Send,
    F: Fn(I) -> wehrlab::Result<O> + Sync,
{
    if jobs <= 1 {
        return inputs.into_iter().map(|i| Ok(f(i)?)).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
    let out: wehrlab::Result<Vec<O>> = pool.install(|| {
        use rayon::prelude::*;
        inputs.into_par_iter().map(&f).collect()
    });
    Ok(out?)
}

fn random_partition(modes_a: usize, modes_b: usize) -> Result<ModePartition> {
    Ok(ModePartition::bipartite("A", modes_a, "B", modes_b)?)
}

impl VerifyArgs {
    /// Seeds for the random suite, or `None` when a family state is asked
    /// for. Mixing the two selections is a usage error.
    fn random_seeds(&self, base: u64) -> Result<Option<Vec<u64>>> {
        match (self.random, self.s, self.a) {
            (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
                bail!("choose either --random N or a family state (--s with --a), not both")
            }
            (Some(n), None, None) => {
                if n == 0 {
                    bail!("--random needs at least one state");
                }
                Ok(Some((0..n as u64).map(|i| base + i).collect()))
            }
            (None, Some(_), Some(_)) => Ok(None),
            _ => bail!("choose a suite (--random N) or a family state (--s <S> --a <A>)"),
        }
    }

    fn family_state(&self) -> Result<(GaussianState, StateDescriptor)> {
        let (s, a) = (self.s.unwrap(), self.a.unwrap());
        let state = optimal_sequence_state(s, a, self.modes)?;
        let descriptor = StateDescriptor::new("optimal-sequence", self.modes)
            .with_s(s)
            .with_a(a);
        Ok((state, descriptor))
    }
}

fn verify_bipartite_cmd(args: &VerifyArgs, ctx: Ctx) -> Result<Report> {
    let records = match args.random_seeds(ctx.seed)? {
        Some(seeds) => run_jobs(ctx.jobs, seeds, |seed| {
            let partition = ModePartition::bipartite("A", args.modes_a, "B", args.modes_b)?;
            let state = random_state(partition, seed, args.max_nu, args.max_squeeze)?;
            let descriptor = StateDescriptor::new("random", args.modes_a).with_seed(seed);
            verify_bipartite(&state, &["A"], &["B"], descriptor)
        })?,
        None => {
            let (state, descriptor) = args.family_state()?;
            vec![verify_bipartite(&state, &["A"], &["B"], descriptor)?]
        }
    };
    bipartite_report(&records)
}

fn verify_tripartite_cmd(args: &VerifyArgs, ctx: Ctx) -> Result<Report> {
    let records = match args.random_seeds(ctx.seed)? {
        Some(seeds) => run_jobs(ctx.jobs, seeds, |seed| {
            let partition = ModePartition::bipartite("A", args.modes_a, "B", args.modes_b)?;
            let state = random_state(partition, seed, args.max_nu, args.max_squeeze)?;
            let descriptor = StateDescriptor::new("random", args.modes_a).with_seed(seed);
            verify_tripartite_purified(&state, &["A"], &["B"], "C", descriptor)
        })?,
        None => {
            let (state, descriptor) = args.family_state()?;
            vec![verify_tripartite_purified(
                &state,
                &["A"],
                &["B"],
                "C",
                descriptor,
            )?]
        }
    };
    tripartite_report(&records)
}

fn sweep_cmd(args: &SweepArgs) -> Result<Report> {
    let records = saturation_sweep(args.s, &args.a, args.modes)?;
    bipartite_report(&records)
}

fn tri_sweep_cmd(args: &TriSweepArgs) -> Result<Report> {
    let records = tripartite_sweep(&args.a, args.modes)?;
    tripartite_report(&records)
}

fn bipartite_report(records: &[VerificationRecord]) -> Result<Report> {
    let total = records.len();
    let passed = records.iter().filter(|r| r.pass).count();
    let smallest_gap = records.iter().map(|r| r.gap).fold(f64::INFINITY, f64::min);
    let mut human = Vec::new();
    if total <= MAX_HUMAN_ROWS {
        for r in records {
            human.push(format!(
                "{}: S(A|B)={:.6} S(Z|B)={:.6} bound={:.6} gap={:+.3e} {}",
                describe(&r.descriptor),
                r.s_ab_cond,
                r.s_z_given_b,
                r.bound,
                r.gap,
                verdict(r.pass),
            ));
        }
    }
    human.push(format!(
        "{passed}/{total} pass; smallest gap {smallest_gap:+.6e}"
    ));
    Ok(Report {
        csv_header: Some(CSV_HEADER),
        csv_rows: records.iter().map(|r| r.csv_row()).collect(),
        records: serde_json::to_value(records)?,
        summary: json!({
            "total": total,
            "passed": passed,
            "failed": total - passed,
            "smallest_gap": smallest_gap,
        }),
        human,
        all_pass: passed == total,
    })
}

fn tripartite_report(records: &[TripartiteRecord]) -> Result<Report> {
    let total = records.len();
    let passed = records.iter().filter(|r| r.pass).count();
    let smallest_gap = records.iter().map(|r| r.gap).fold(f64::INFINITY, f64::min);
    let smallest_cosh_margin = records
        .iter()
        .map(|r| r.cosh_bound - r.ln4_bound)
        .fold(f64::INFINITY, f64::min);
    let mut human = Vec::new();
    if total <= MAX_HUMAN_ROWS {
        for r in records {
            human.push(format!(
                "{}: S(Z|B)+S(Z|C)={:.6} cosh bound={:.6} M ln4={:.6} gap={:+.3e} {}",
                describe(&r.descriptor),
                r.sum,
                r.cosh_bound,
                r.ln4_bound,
                r.gap,
                verdict(r.pass),
            ));
        }
    }
    human.push(format!(
        "{passed}/{total} pass; smallest gap above M ln4 {smallest_gap:+.6e}"
    ));
    Ok(Report {
        csv_header: Some(TRIPARTITE_CSV_HEADER),
        csv_rows: records.iter().map(|r| r.csv_row()).collect(),
        records: serde_json::to_value(records)?,
        summary: json!({
            "total": total,
            "passed": passed,
            "failed": total - passed,
            "smallest_gap": smallest_gap,
            "smallest_cosh_margin": smallest_cosh_margin,
        }),
        human,
        all_pass: passed == total,
    })
}

fn describe(descriptor: &StateDescriptor) -> String {
    let mut text = descriptor.family_tag();
    if let Some(s) = descriptor.s {
        text.push_str(&format!(" s={s}"));
    }
    if let Some(a) = descriptor.a {
        text.push_str(&format!(" a={a}"));
    }
    text.push_str(&format!(" M={}", descriptor.modes));
    text
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

impl SelectionArgs {
    fn build(&self) -> Result<(GaussianState, StateDescriptor)> {
        let picks = usize::from(self.s.is_some())
            + usize::from(self.tmsv.is_some())
            + usize::from(self.thermal.is_some())
            + usize::from(self.random.is_some());
        if picks != 1 {
            bail!(
                "choose exactly one state: --s <S> --a <A> (family), --tmsv <A>, \
                 --thermal <NU,...>, or --random <SEED>"
            );
        }
        if let Some(s) = self.s {
            let a = self
                .a
                .ok_or_else(|| anyhow!("--s needs --a (family parameter)"))?;
            let state = optimal_sequence_state(s, a, self.modes)?;
            let descriptor = StateDescriptor::new("optimal-sequence", self.modes)
                .with_s(s)
                .with_a(a);
            return Ok((state, descriptor));
        }
        if let Some(a) = self.tmsv {
            let state = two_mode_squeezed(a, self.modes)?;
            let descriptor = StateDescriptor::new("tmsv", self.modes).with_a(a);
            return Ok((state, descriptor));
        }
        if let Some(nu) = &self.thermal {
            let partition = ModePartition::new([("A", nu.len())])?;
            let state = thermal(partition, nu)?;
            let descriptor = StateDescriptor::new("thermal", nu.len());
            return Ok((state, descriptor));
        }
        let seed = self.random.unwrap();
        let partition = random_partition(self.modes_a, self.modes_b)?;
        let state = random_state(partition, seed, 4.0, 1.0)?;
        let descriptor = StateDescriptor::new("random", self.modes_a).with_seed(seed);
        Ok((state, descriptor))
    }
}

fn witness_cmd(args: &SelectionArgs) -> Result<Report> {
    let (state, descriptor) = args.build()?;
    if state.partition().subsystems().len() < 2 {
        bail!("the witness needs a bipartite state: side A is measured, side B is the memory");
    }
    let report = witness(&state, &["A"], &["B"])?;
    let verdict_name = match report.verdict {
        wehrlab::WitnessVerdict::Entangled => "entangled",
        wehrlab::WitnessVerdict::Inconclusive => "inconclusive",
    };
    let human = vec![format!(
        "{}: S(Z|B)={:.6} threshold M ln2={:.6} verdict={}",
        describe(&descriptor),
        report.s_z_given_b,
        report.threshold,
        verdict_name,
    )];
    let row = format!(
        "{},{},{},{},{},{},{},{}",
        descriptor.family_tag(),
        descriptor.s.map(|v| v.to_string()).unwrap_or_default(),
        descriptor.a.map(|v| v.to_string()).unwrap_or_default(),
        descriptor.modes,
        report.s_z_given_b,
        report.threshold,
        report.error_budget,
        verdict_name,
    );
    Ok(Report {
        csv_header: Some(WITNESS_CSV_HEADER),
        csv_rows: vec![row],
        records: json!([WitnessRecord {
            descriptor,
            report: report.clone(),
        }]),
        summary: json!({ "verdict": verdict_name }),
        human,
        // A one-sided witness never fails: "inconclusive" is a legitimate
        // outcome, not a violated check.
        all_pass: true,
    })
}

const WITNESS_CSV_HEADER: &str = "family,s,a,M,S_Z_given_B,threshold,error_budget,verdict";

#[derive(Serialize)]
struct WitnessRecord {
    descriptor: StateDescriptor,
    #[serde(flatten)]
    report: WitnessReport,
}

const ORACLE_CSV_HEADER: &str = "a,kappa,cutoff,radial,angular,S_Z_given_B_fock,\
S_Z_given_B_gaussian,deviation,truncation_loss,error_budget,tolerance,pass";

#[derive(Serialize)]
struct OracleRecord {
    a: f64,
    kappa: f64,
    cutoff: usize,
    radial_order: usize,
    angular_order: usize,
    s_z_given_b_fock: f64,
    s_z_given_b_gaussian: f64,
    deviation: f64,
    truncation_loss: f64,
    error_budget: f64,
    tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    warning: Option<String>,
    pass: bool,
}

fn oracle_check_cmd(args: &OracleArgs, ctx: Ctx) -> Result<Report> {
    let space = FockSpace::new(2, ctx.cutoff)?;
    let tmsv = tmsv_fock(args.a, space)?;
    let truncation_loss = tmsv.truncation_loss();
    let rho = tmsv.density();
    let gaussian_state = two_mode_squeezed(args.a, 1)?.amplify("A", args.kappa)?;
    let grid = adapted_grid(&gaussian_state, &["A"], ctx.radial, ctx.angular)?;
    let fock = conditional_wehrl_fock_amplified(&rho, 1, args.kappa, &grid)?;
    let gaussian = conditional_wehrl_gaussian(&gaussian_state, &["A"], &["B"])?;
    let deviation = (fock.s_z_given_b - gaussian.s_z_given_b).abs();
    let pass = deviation <= args.tol;
    let record = OracleRecord {
        a: args.a,
        kappa: args.kappa,
        cutoff: ctx.cutoff,
        radial_order: ctx.radial,
        angular_order: ctx.angular,
        s_z_given_b_fock: fock.s_z_given_b,
        s_z_given_b_gaussian: gaussian.s_z_given_b,
        deviation,
        truncation_loss,
        error_budget: fock.error_budget,
        tolerance: args.tol,
        warning: fock.warning.clone(),
        pass,
    };
    let mut human = vec![format!(
        "tmsv a={} kappa={}: S(Z|B) fock={:.12} gaussian={:.12} |diff|={:.3e} tol={:e} {}",
        args.a,
        args.kappa,
        record.s_z_given_b_fock,
        record.s_z_given_b_gaussian,
        deviation,
        args.tol,
        verdict(pass),
    )];
    if let Some(warning) = &record.warning {
        human.push(format!("warning: {warning}"));
    }
    let row = format!(
        "{},{},{},{},{},{},{},{},{},{},{},{}",
        record.a,
        record.kappa,
        record.cutoff,
        record.radial_order,
        record.angular_order,
        record.s_z_given_b_fock,
        record.s_z_given_b_gaussian,
        record.deviation,
        record.truncation_loss,
        record.error_budget,
        record.tolerance,
        record.pass,
    );
    Ok(Report {
        csv_header: Some(ORACLE_CSV_HEADER),
        csv_rows: vec![row],
        summary: json!({ "deviation": deviation, "pass": pass }),
        records: json!([record]),
        human,
        all_pass: pass,
    })
}

const MINIMIZE_CSV_HEADER: &str =
    "family,s,M,infimum,S_AB_cond,evaluations,budget_exhausted,argmin";

fn minimize_cmd(args: &MinimizeArgs, ctx: Ctx) -> Result<Report> {
    let family = match args.family {
        FamilyChoice::OptimalSequence => SearchFamily::OptimalSequence { a_max: args.a_max },
        FamilyChoice::Random => SearchFamily::Random { seed: ctx.seed },
    };
    let config = OptimizerConfig {
        max_evaluations: args.max_evals,
        tolerance: args.tol,
    };
    let result = minimize_gap(args.s, args.modes, family, &config)?;
    // Finding a genuinely negative gap would falsify the bound: that is a
    // failed check, not an optimizer success.
    let pass = result.infimum >= -TOLERANCE_FLOOR;
    let argmin = result
        .argmin
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(";");
    let human = vec![
        format!(
            "family={} s={} M={}: infimum gap {:+.6e} after {} evaluations{}",
            result.family,
            args.s,
            args.modes,
            result.infimum,
            result.evaluations,
            if result.budget_exhausted {
                " (budget exhausted)"
            } else {
                ""
            },
        ),
        format!(
            "argmin [{argmin}] with S(A|B)={:.9}; bound {}",
            result.s_ab_cond,
            verdict(pass),
        ),
    ];
    let row = format!(
        "{},{},{},{},{},{},{},{}",
        result.family,
        args.s,
        args.modes,
        result.infimum,
        result.s_ab_cond,
        result.evaluations,
        result.budget_exhausted,
        argmin,
    );
    let record = serde_json::to_value(&result)?;
    Ok(Report {
        csv_header: Some(MINIMIZE_CSV_HEADER),
        csv_rows: vec![row],
        summary: json!({ "infimum": result.infimum, "pass": pass }),
        records: json!([record]),
        human,
        all_pass: pass,
    })
}

fn state_show_cmd(args: &SelectionArgs) -> Result<Report> {
    let (state, descriptor) = args.build()?;
    let validity = state.validate();
    let nu = state.symplectic_eigenvalues()?;
    let entropy = state.von_neumann_entropy()?;
    let record = json!({
        "descriptor": descriptor,
        "state": state,
        "symplectic_eigenvalues": nu,
        "von_neumann_entropy": entropy,
        "validity": validity,
    });
    let human = vec![serde_json::to_string_pretty(&record)?];
    Ok(Report {
        // No tabular form: data files are always JSON for this command.
        csv_header: None,
        csv_rows: Vec::new(),
        summary: json!({
            "is_valid": validity.is_valid,
            "von_neumann_entropy": entropy,
        }),
        records: json!([record]),
        human,
        all_pass: validity.is_valid,
    })
}
