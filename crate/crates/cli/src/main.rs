//! Command-line front end for the helweyl spectral library.
//!
//! Each invocation loads one problem (a bundled name such as `eq2` or a
//! config file path), runs one analysis pipeline and emits one report:
//!
//! * `eval-m`: the Dirichlet or Neumann M-matrix at a complex point.
//! * `locate-poles`: all real poles of an M-matrix inside a bracket.
//! * `residue`: Laurent data of an M-matrix at a real pole.
//! * `verdict`: residue ranks for both boundary conditions and the
//!   rank-sum inequality criterion.
//! * `sector-scan`: sector positivity samples of the shifted Neumann
//!   matrix around a pole.
//!
//! Reports go to standard output or `--output`; `--machine` switches to
//! a flat `key = value` layout in which every float carries 17
//! significant digits (so the text re-parses to the exact double) and
//! complex numbers are `re,im` pairs. Exit codes: 0 success, 1 hard
//! error, 2 when a residue fit ended with its accuracy target unmet
//! (the report is still emitted).

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use helweyl_core::fixtures;
use helweyl_core::laurent::LaurentBranch;
use helweyl_core::odeint::IntegratorSettings;
use helweyl_core::spectral::{
    evaluate_m, locate_poles, residue_report, sector_scan, verdict_at, BoundaryCondition,
    HelpOutcome, ResidueReport,
};
use helweyl_core::taylor::TaylorStatus;
use helweyl_core::{Mat2, Problem};
use num_complex::Complex64;

#[derive(Parser)]
#[command(
    name = "helweyl",
    version,
    about = "Titchmarsh-Weyl M-matrix analysis for fourth-order half-line problems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the M-matrix of one boundary condition at a complex point.
    EvalM {
        #[command(flatten)]
        common: Common,
        /// Boundary condition at 0.
        #[arg(long, value_enum)]
        bc: Bc,
        /// Evaluation point as a complex literal such as `1+1i`.
        #[arg(long, value_parser = parse_complex)]
        lambda: Complex64,
    },
    /// Scan a real bracket for poles of one M-matrix.
    LocatePoles {
        #[command(flatten)]
        common: Common,
        /// Boundary condition at 0.
        #[arg(long, value_enum)]
        bc: Bc,
        /// Bracket to scan, written `lo,hi`.
        #[arg(long, value_parser = parse_bracket)]
        bracket: (f64, f64),
    },
    /// Laurent data of one M-matrix at a real pole.
    Residue {
        #[command(flatten)]
        common: Common,
        /// Boundary condition at 0.
        #[arg(long, value_enum)]
        bc: Bc,
        /// Expansion point (a located pole, or any real point to probe).
        #[arg(long)]
        lambda0: f64,
        /// Accuracy target for the adaptive Taylor fit.
        #[arg(long, default_value_t = 1e-6)]
        target_acc: f64,
    },
    /// Residue ranks of both M-matrices at a pole and the rank-sum verdict.
    Verdict {
        #[command(flatten)]
        common: Common,
        /// Expansion point shared by both boundary conditions.
        #[arg(long)]
        lambda0: f64,
        /// Accuracy target for the adaptive Taylor fits.
        #[arg(long, default_value_t = 1e-6)]
        target_acc: f64,
    },
    /// Sector positivity samples of the shifted Neumann matrix.
    SectorScan {
        #[command(flatten)]
        common: Common,
        /// Pole to shift to the origin.
        #[arg(long)]
        lambda0: f64,
        /// Sample radii, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "1e-2,1e-3")]
        rho: Vec<f64>,
        /// Sample angles in degrees, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "80,85")]
        theta_deg: Vec<f64>,
    },
}

#[derive(Args)]
struct Common {
    /// Bundled problem name (eq1, eq2, eq3) or path to a config file.
    #[arg(long)]
    problem: String,
    /// Transform parameter as a complex literal such as `1+1i`.
    #[arg(long, default_value = "1+1i", value_parser = parse_complex)]
    alpha: Complex64,
    /// Local error tolerance for the integrator (relative and absolute).
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Override the problem's truncation point X.
    #[arg(long)]
    x: Option<f64>,
    /// Emit the machine-readable key = value report.
    #[arg(long)]
    machine: bool,
    /// Write the report to this file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Bc {
    Dirichlet,
    Neumann,
}

impl From<Bc> for BoundaryCondition {
    fn from(bc: Bc) -> Self {
        match bc {
            Bc::Dirichlet => BoundaryCondition::Dirichlet,
            Bc::Neumann => BoundaryCondition::Neumann,
        }
    }
}

/// Parse complex literals of the forms `1`, `1+1i`, `-2.5e-3i`, `1-i`.
fn parse_complex(text: &str) -> Result<Complex64, String> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("`{text}` is not a complex literal like 1+1i");
    if t.is_empty() {
        return Err(bad());
    }
    if !t.ends_with('i') {
        return t
            .parse::<f64>()
            .map(|re| Complex64::new(re, 0.0))
            .map_err(|_| bad());
    }
    let body = &t[..t.len() - 1];
    let bytes = body.as_bytes();
    let mut split = None;
    for idx in (1..bytes.len()).rev() {
        let c = bytes[idx] as char;
        if (c == '+' || c == '-') && !matches!(bytes[idx - 1] as char, 'e' | 'E') {
            split = Some(idx);
            break;
        }
    }
    let imag_of = |s: &str| -> Result<f64, String> {
        match s {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => s.parse::<f64>().map_err(|_| bad()),
        }
    };
    match split {
        Some(idx) => {
            let re = body[..idx].parse::<f64>().map_err(|_| bad())?;
            let im = imag_of(&body[idx..])?;
            Ok(Complex64::new(re, im))
        }
        None => Ok(Complex64::new(0.0, imag_of(body)?)),
    }
}

fn parse_bracket(text: &str) -> Result<(f64, f64), String> {
    let bad = || format!("`{text}` is not a bracket like 10,20");
    let (lo, hi) = text.split_once(',').ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    Ok((lo, hi))
}

/// One report under construction: parallel human and machine texts.
struct Report {
    human: String,
    machine: String,
}

impl Report {
    fn new(command: &str, prob: &Problem, common: &Common) -> Self {
        let mut r = Report {
            human: String::new(),
            machine: String::new(),
        };
        r.machine_text("command", command);
        r.machine_text("problem", prob.label());
        r.machine_real("x", prob.truncation_x());
        r.machine_complex("alpha", common.alpha);
        r.machine_real("tol", common.tol);
        r
    }

    fn human_line(&mut self, line: impl AsRef<str>) {
        self.human.push_str(line.as_ref());
        self.human.push('\n');
    }

    fn machine_text(&mut self, key: &str, value: &str) {
        let _ = writeln!(self.machine, "{key} = {value}");
    }

    fn machine_real(&mut self, key: &str, value: f64) {
        let _ = writeln!(self.machine, "{key} = {value:.16e}");
    }

    fn machine_int(&mut self, key: &str, value: usize) {
        let _ = writeln!(self.machine, "{key} = {value}");
    }

    fn machine_bool(&mut self, key: &str, value: bool) {
        let _ = writeln!(self.machine, "{key} = {value}");
    }

    fn machine_complex(&mut self, key: &str, value: Complex64) {
        let _ = writeln!(self.machine, "{key} = {:.16e},{:.16e}", value.re, value.im);
    }

    fn machine_matrix(&mut self, key: &str, m: &Mat2) {
        for (suffix, entry) in [("11", m.e11), ("12", m.e12), ("21", m.e21), ("22", m.e22)] {
            self.machine_complex(&format!("{key}_{suffix}"), entry);
        }
    }

    fn human_matrix(&mut self, label: &str, rows: [[f64; 2]; 2]) {
        self.human_line(format!("  {label}:"));
        for row in rows {
            self.human_line(format!("    [ {:>14.7} {:>14.7} ]", row[0], row[1]));
        }
    }

    fn emit(&self, common: &Common) -> std::io::Result<()> {
        let text = if common.machine {
            &self.machine
        } else {
            &self.human
        };
        match &common.output {
            Some(path) => std::fs::write(path, text),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn status_key(status: TaylorStatus) -> &'static str {
    match status {
        TaylorStatus::Ok => "ok",
        TaylorStatus::TargetNotReached => "target_not_reached",
    }
}

fn branch_key(branch: Option<LaurentBranch>) -> &'static str {
    match branch {
        Some(LaurentBranch::A1NonZero) => "a1_nonzero",
        Some(LaurentBranch::A1Zero) => "a1_zero",
        None => "none",
    }
}

fn load_problem(common: &Common) -> Result<Problem, String> {
    let prob = match fixtures::builtin(&common.problem) {
        Some(parsed) => parsed.map_err(|e| e.to_string())?,
        None => Problem::from_config_file(&common.problem).map_err(|e| {
            format!(
                "cannot load problem `{}`: {} (bundled names: {})",
                common.problem,
                e,
                fixtures::builtin_names().join(", ")
            )
        })?,
    };
    match common.x {
        Some(x) => prob.with_truncation_x(x).map_err(|e| e.to_string()),
        None => Ok(prob),
    }
}

fn settings_of(common: &Common) -> IntegratorSettings {
    IntegratorSettings {
        rel_tol: common.tol,
        abs_tol: common.tol,
        ..IntegratorSettings::default()
    }
}

/// Append the residue block shared by `residue` and `verdict` reports.
/// `prefix` namespaces the machine keys when two reports share a file.
fn push_residue(report: &mut Report, rep: &ResidueReport, prefix: &str) {
    let key = |name: &str| {
        if prefix.is_empty() {
            name.to_string()
        } else {
            format!("{prefix}_{name}")
        }
    };
    report.human_line(format!(
        "  pole at lambda0 = {}: {} (|a0| = {:.3e})",
        rep.lambda0,
        if rep.pole_detected {
            "detected"
        } else {
            "not detected"
        },
        rep.a0_abs
    ));
    report.human_matrix("Re(residue)", rep.residue.re());
    report.human_matrix("Im(residue)", rep.residue.im());
    report.human_line(format!(
        "  code error estimate (sup norm): {:.3e}",
        rep.error_estimate
    ));
    report.human_line(format!(
        "  determinant of residue matrix: {:.6e} {} {:.3e}i",
        rep.det_residue.re,
        if rep.det_residue.im < 0.0 { "-" } else { "+" },
        rep.det_residue.im.abs()
    ));
    report.human_line(format!("  value of |a1|: {:.7e}", rep.a1_abs));
    report.human_line(format!("  numerical rank: {}", rep.residue_rank));
    report.human_line(format!(
        "  fit: m = {}, |mu| = {:.4e}, branch = {}, status = {}",
        rep.m_final,
        rep.mu_final.norm(),
        branch_key(rep.branch),
        status_key(rep.status)
    ));
    for note in &rep.notes {
        report.human_line(format!("  note: {note}"));
    }

    report.machine_text(&key("bc"), rep.bc.label());
    report.machine_real(&key("lambda0"), rep.lambda0);
    report.machine_bool(&key("pole_detected"), rep.pole_detected);
    report.machine_real(&key("a0_abs"), rep.a0_abs);
    report.machine_real(&key("a1_abs"), rep.a1_abs);
    report.machine_text(&key("branch"), branch_key(rep.branch));
    report.machine_matrix(&key("residue"), &rep.residue);
    report.machine_complex(&key("det_residue"), rep.det_residue);
    report.machine_int(&key("residue_rank"), rep.residue_rank);
    report.machine_real(&key("realness_defect"), rep.realness_defect);
    report.machine_real(&key("error_estimate"), rep.error_estimate);
    report.machine_text(&key("status"), status_key(rep.status));
    report.machine_int(&key("m_final"), rep.m_final);
    report.machine_complex(&key("mu_final"), rep.mu_final);
    if !rep.notes.is_empty() {
        report.machine_text(&key("notes"), &rep.notes.join(" | "));
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::EvalM { common, bc, lambda } => {
            let prob = load_problem(&common)?;
            let value = evaluate_m(
                &prob,
                bc.into(),
                lambda,
                common.alpha,
                &settings_of(&common),
            )
            .map_err(|e| e.to_string())?;
            let mut report = Report::new("eval-m", &prob, &common);
            report.human_line(format!(
                "M-matrix for {}, {} boundary condition",
                prob.label(),
                value.bc.label()
            ));
            report.human_line(format!(
                "  lambda = {}, alpha = {}, X = {}, tol = {:e}",
                lambda,
                common.alpha,
                prob.truncation_x(),
                common.tol
            ));
            report.human_matrix("Re(M)", value.m.re());
            report.human_matrix("Im(M)", value.m.im());
            report.human_line(format!("  symmetry defect: {:.3e}", value.symmetry_defect));
            report.machine_text("bc", value.bc.label());
            report.machine_complex("lambda", lambda);
            report.machine_matrix("m", &value.m);
            report.machine_matrix("psi", &value.psi);
            report.machine_real("symmetry_defect", value.symmetry_defect);
            report.machine_bool("symmetry_warning", value.symmetry_warning);
            report.emit(&common).map_err(|e| e.to_string())?;
            Ok(0)
        }
        Command::LocatePoles {
            common,
            bc,
            bracket,
        } => {
            let prob = load_problem(&common)?;
            let bc: BoundaryCondition = bc.into();
            let poles = locate_poles(&prob, bc, bracket, common.alpha, &settings_of(&common))
                .map_err(|e| e.to_string())?;
            let mut report = Report::new("locate-poles", &prob, &common);
            report.human_line(format!(
                "pole scan for {}, {} boundary condition, bracket ({}, {})",
                prob.label(),
                bc.label(),
                bracket.0,
                bracket.1
            ));
            if poles.is_empty() {
                report.human_line("  no poles found");
            }
            for (i, pole) in poles.iter().enumerate() {
                report.human_line(format!(
                    "  pole {}: lambda = {:.9} (|g| = {:.3e})",
                    i + 1,
                    pole.lambda,
                    pole.denominator_magnitude
                ));
            }
            report.machine_text("bc", bc.label());
            report.machine_real("bracket_lo", bracket.0);
            report.machine_real("bracket_hi", bracket.1);
            report.machine_int("pole_count", poles.len());
            for (i, pole) in poles.iter().enumerate() {
                report.machine_real(&format!("pole_{}", i + 1), pole.lambda);
                report.machine_real(
                    &format!("pole_{}_denominator", i + 1),
                    pole.denominator_magnitude,
                );
            }
            report.emit(&common).map_err(|e| e.to_string())?;
            Ok(0)
        }
        Command::Residue {
            common,
            bc,
            lambda0,
            target_acc,
        } => {
            let prob = load_problem(&common)?;
            let rep = residue_report(
                &prob,
                bc.into(),
                lambda0,
                common.alpha,
                &settings_of(&common),
                target_acc,
            )
            .map_err(|e| e.to_string())?;
            let mut report = Report::new("residue", &prob, &common);
            report.human_line(format!(
                "residue report for {}, {} boundary condition",
                prob.label(),
                rep.bc.label()
            ));
            report.human_line(format!(
                "  alpha = {}, X = {}, integration tolerance = {:e}, target accuracy = {:e}",
                common.alpha,
                prob.truncation_x(),
                common.tol,
                target_acc
            ));
            report.machine_real("target_acc", target_acc);
            push_residue(&mut report, &rep, "");
            report.emit(&common).map_err(|e| e.to_string())?;
            Ok(if rep.status == TaylorStatus::TargetNotReached {
                2
            } else {
                0
            })
        }
        Command::Verdict {
            common,
            lambda0,
            target_acc,
        } => {
            let prob = load_problem(&common)?;
            let verdict = verdict_at(
                &prob,
                lambda0,
                common.alpha,
                &settings_of(&common),
                target_acc,
            )
            .map_err(|e| e.to_string())?;
            let mut report = Report::new("verdict", &prob, &common);
            let v = &verdict.verdict;
            let outcome_text = match v.outcome {
                HelpOutcome::InequalityHolds => "InequalityHolds",
                HelpOutcome::CriterionNotMet => "CriterionNotMet",
            };
            report.human_line(format!(
                "inequality verdict for {} at lambda0 = {}",
                prob.label(),
                lambda0
            ));
            report.human_line(format!(
                "  {} (rank {} + rank {} = {})",
                outcome_text,
                v.rank_dirichlet,
                v.rank_neumann,
                v.rank_dirichlet + v.rank_neumann
            ));
            for note in &v.notes {
                report.human_line(format!("  note: {note}"));
            }
            report.human_line("  dirichlet details:");
            report.machine_real("target_acc", target_acc);
            report.machine_text("outcome", outcome_text);
            report.machine_int("rank_dirichlet", v.rank_dirichlet);
            report.machine_int("rank_neumann", v.rank_neumann);
            push_residue(&mut report, &verdict.dirichlet, "dirichlet");
            report.human_line("  neumann details:");
            push_residue(&mut report, &verdict.neumann, "neumann");
            report.emit(&common).map_err(|e| e.to_string())?;
            let stalled = verdict.dirichlet.status == TaylorStatus::TargetNotReached
                || verdict.neumann.status == TaylorStatus::TargetNotReached;
            Ok(if stalled { 2 } else { 0 })
        }
        Command::SectorScan {
            common,
            lambda0,
            rho,
            theta_deg,
        } => {
            let prob = load_problem(&common)?;
            let theta: Vec<f64> = theta_deg
                .iter()
                .map(|d| d * std::f64::consts::PI / 180.0)
                .collect();
            let scan = sector_scan(
                &prob,
                lambda0,
                &rho,
                &theta,
                common.alpha,
                &settings_of(&common),
            )
            .map_err(|e| e.to_string())?;
            let mut report = Report::new("sector-scan", &prob, &common);
            report.human_line(format!(
                "sector scan for {} shifted at lambda0 = {}",
                prob.label(),
                lambda0
            ));
            report.machine_real("lambda0", lambda0);
            report.machine_int("sample_count", scan.samples.len());
            for (i, s) in scan.samples.iter().enumerate() {
                match s.min_eig {
                    Some(eig) => report.human_line(format!(
                        "  rho = {:>7.1e}, theta = {:>7.4}: min eigenvalue = {:+.6e}",
                        s.rho, s.theta, eig
                    )),
                    None => report.human_line(format!(
                        "  rho = {:>7.1e}, theta = {:>7.4}: failed ({})",
                        s.rho,
                        s.theta,
                        s.error.as_deref().unwrap_or("unknown")
                    )),
                }
                let key = format!("sample_{}", i + 1);
                report.machine_real(&format!("{key}_rho"), s.rho);
                report.machine_real(&format!("{key}_theta"), s.theta);
                match s.min_eig {
                    Some(eig) => report.machine_real(&format!("{key}_min_eig"), eig),
                    None => report.machine_text(
                        &format!("{key}_error"),
                        s.error.as_deref().unwrap_or("unknown"),
                    ),
                }
            }
            report.human_line(format!(
                "  all sampled minima positive: {}",
                if scan.all_positive() { "yes" } else { "no" }
            ));
            report.machine_bool("all_positive", scan.all_positive());
            report.emit(&common).map_err(|e| e.to_string())?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own help/version output through the error
            // path; usage problems exit 1 rather than clap's default 2,
            // which this tool reserves for accuracy warnings.
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}
