//! Command-line front end. `run` returns the process exit code:
//! 0 success, 1 regression, 2 input error, 3 internal invariant violation,
//! 4 mirror map not bijective.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::arith::lcm_all;
use crate::mirror::{
    build_mirror_map, build_quintic_map, diff_against_table4, target_slice, MirrorError, RowStatus,
};
use crate::modelfile::parse_model_file;
use crate::statespace::{assemble, hodge_diamond_text, to_json, to_latex, to_text, StateError};
use crate::suite::{run_paper_suite, SuiteInputs};
use crate::symmetry::{
    orbit_types, relevant_elements, selected_group, PermutationGroup, SymmetryError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REGRESSION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;
pub const EXIT_NOT_BIJECTIVE: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "lgmodel",
    version,
    about = "State spaces and mirror maps of hybrid Landau-Ginzburg models"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the relevant group elements of a model.
    Group {
        path: PathBuf,
        /// Only elements whose sector contributes to the state space.
        #[arg(long)]
        contributing: bool,
    },
    /// Hodge diamond and sector breakdown.
    Statespace {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Mirror map between two models (the cubic pair or the quintic pair).
    Mirror {
        path_a: PathBuf,
        path_b: PathBuf,
        /// Also compare with the printed table.
        #[arg(long)]
        check: bool,
        #[arg(long, value_enum, default_value_t = MirrorFormat::Text)]
        format: MirrorFormat,
    },
    /// Run every check against the published numbers.
    PaperSuite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MirrorFormat {
    Text,
    Json,
}

/// An error with the exit code it maps to.
struct Failure(i32, String);

impl From<StateError> for Failure {
    fn from(e: StateError) -> Self {
        match e {
            StateError::Symmetry(s) => s.into(),
            StateError::Poly(_) => Failure(EXIT_INPUT, e.to_string()),
            _ => Failure(EXIT_INVARIANT, e.to_string()),
        }
    }
}

impl From<SymmetryError> for Failure {
    fn from(e: SymmetryError) -> Self {
        Failure(EXIT_INPUT, e.to_string())
    }
}

/// Exit code for a mirror-map error.
pub fn mirror_exit_code(e: &MirrorError) -> i32 {
    match e {
        MirrorError::NotBijective { .. } => EXIT_NOT_BIJECTIVE,
        MirrorError::WrongModel(_) | MirrorError::DimensionMismatch { .. } => EXIT_INPUT,
        _ => EXIT_INVARIANT,
    }
}

impl From<MirrorError> for Failure {
    fn from(e: MirrorError) -> Self {
        Failure(mirror_exit_code(&e), e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure(EXIT_INPUT, e.to_string())
    }
}

fn load(path: &Path) -> Result<crate::suite::Computed, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure(EXIT_INPUT, format!("{}: {e}", path.display())))?;
    let model = parse_model_file(&text)
        .map_err(|e| Failure(EXIT_INPUT, format!("{}: {e}", path.display())))?;
    let group = selected_group(&model)?;
    let space = assemble(&model, &group)?;
    Ok(crate::suite::Computed {
        model,
        group,
        space,
    })
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return EXIT_INPUT;
            }
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Command::Group { path, contributing } => cmd_group(&path, contributing, out),
        Command::Statespace { path, format } => cmd_statespace(&path, format, out),
        Command::Mirror {
            path_a,
            path_b,
            check,
            format,
        } => cmd_mirror(&path_a, &path_b, check, format, out),
        Command::PaperSuite => cmd_paper_suite(out),
    }
}

fn cmd_group(path: &Path, contributing: bool, out: &mut dyn Write) -> Result<i32, Failure> {
    let c = load(path)?;
    let mut elements = relevant_elements(&c.group)?;
    if contributing {
        elements.retain(|fd| c.space.sectors.iter().any(|s| s.fd.element == fd.element));
    }
    let dens: Vec<_> = elements.iter().map(|fd| fd.element.denominator()).collect();
    let den = lcm_all(&dens);
    writeln!(
        out,
        "{} / {}: order {} modulo the torus, {} {} elements",
        c.model.name,
        c.group.name,
        c.group.order_mod_torus(),
        elements.len(),
        if contributing {
            "contributing"
        } else {
            "relevant"
        }
    )?;
    for fd in &elements {
        writeln!(
            out,
            "{}  n={} r={} age={}",
            fd.element.label_over(&den),
            fd.n_gamma,
            fd.r_gamma,
            fd.age
        )?;
    }
    let perms = PermutationGroup::of_model(&c.model);
    writeln!(
        out,
        "orbit types under {} coordinate permutations:",
        perms.order()
    )?;
    for (key, count) in orbit_types(&perms, &elements) {
        let fd = elements
            .iter()
            .find(|f| perms.orbit_type(&f.element) == key)
            .expect("type has a member");
        writeln!(
            out,
            "{}  x{}  n={} r={} age={}",
            key.label_over(&den),
            count,
            fd.n_gamma,
            fd.r_gamma,
            fd.age
        )?;
    }
    Ok(EXIT_OK)
}

fn cmd_statespace(path: &Path, format: Format, out: &mut dyn Write) -> Result<i32, Failure> {
    let c = load(path)?;
    match format {
        Format::Text => {
            write!(out, "{}", hodge_diamond_text(&c.space.hodge_grid()))?;
            write!(out, "{}", to_text(&c.space))?;
        }
        Format::Json => {
            let v = to_json(&c.space);
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&v)
                    .map_err(|e| Failure(EXIT_INVARIANT, e.to_string()))?
            )?;
        }
        Format::Latex => write!(out, "{}", to_latex(&c.space))?,
    }
    Ok(EXIT_OK)
}

fn cmd_mirror(
    a: &Path,
    b: &Path,
    check: bool,
    format: MirrorFormat,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let (ca, cb) = (load(a)?, load(b)?);
    let shape = |c: &crate::suite::Computed| (c.model.n(), c.model.r());
    if shape(&ca) != shape(&cb) {
        return Err(Failure(
            EXIT_INPUT,
            "the two models have different shapes".into(),
        ));
    }
    // the side with the larger group carries the twisted sectors
    let (src, tgt) = match ca.group.order_mod_torus().cmp(&cb.group.order_mod_torus()) {
        std::cmp::Ordering::Greater => (&ca, &cb),
        std::cmp::Ordering::Less => (&cb, &ca),
        std::cmp::Ordering::Equal => {
            return Err(Failure(
                EXIT_INPUT,
                "the two groups have the same order; expected a mirror pair".into(),
            ))
        }
    };
    let emit = |a: &crate::mirror::MirrorAssignment, out: &mut dyn Write| -> Result<(), Failure> {
        match format {
            MirrorFormat::Text => write!(out, "{}", a.to_text(&src.space.vars, &tgt.space.vars))?,
            MirrorFormat::Json => writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&a.to_json(&src.space.vars, &tgt.space.vars))
                    .map_err(|e| Failure(EXIT_INVARIANT, e.to_string()))?
            )?,
        }
        Ok(())
    };
    match shape(src) {
        (6, 2) => {
            let a = build_mirror_map(&src.space, &tgt.space)?;
            emit(&a, out)?;
            if check {
                let slice = target_slice(&tgt.space)?;
                let rank = a.verify(slice, &src.space.vars)?;
                let rep = diff_against_table4(&a, slice, &src.space.vars, &tgt.space.vars)?;
                writeln!(out, "bijective: {} pairs, rank {rank}", a.len())?;
                writeln!(
                    out,
                    "table: {} match, {} documented misprints, {} unexpected",
                    rep.matches(),
                    rep.documented_typos(),
                    rep.unexpected()
                )?;
                for row in rep.rows.iter().filter(|r| r.status != RowStatus::Match) {
                    writeln!(
                        out,
                        "  {}: printed {}, derived {} [{:?}]",
                        row.source,
                        row.printed,
                        row.derived.as_deref().unwrap_or("-"),
                        row.status
                    )?;
                }
                for n in &rep.notes {
                    writeln!(out, "  note: {n}")?;
                }
            }
        }
        (5, 1) => {
            let q = build_quintic_map(&src.space, &tgt.space)?;
            if format == MirrorFormat::Text {
                writeln!(out, "twisted ({} pairs):", q.twisted.len())?;
            }
            emit(&q.twisted, out)?;
            if format == MirrorFormat::Text {
                writeln!(out, "untwisted ({} pairs):", q.untwisted.len())?;
            }
            emit(&q.untwisted, out)?;
            if check {
                writeln!(
                    out,
                    "bijective: {} twisted, {} untwisted pairs",
                    q.twisted.len(),
                    q.untwisted.len()
                )?;
            }
        }
        (n, r) => {
            return Err(Failure(
                EXIT_INPUT,
                format!("no mirror map for models with {n} variables and {r} polynomials"),
            ))
        }
    }
    Ok(EXIT_OK)
}

fn cmd_paper_suite(out: &mut dyn Write) -> Result<i32, Failure> {
    let results = run_paper_suite(&SuiteInputs::default());
    let mut failed = 0;
    for r in &results {
        writeln!(out, "{r}")?;
        if !r.passed {
            failed += 1;
        }
    }
    writeln!(
        out,
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    )?;
    Ok(if failed == 0 {
        EXIT_OK
    } else {
        EXIT_REGRESSION
    })
}
