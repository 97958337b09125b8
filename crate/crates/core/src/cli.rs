//! The `triqal` command line.
//!
//! Exit codes: 0 when every requested check passes, 1 when one fails, 2 on
//! input errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{self, Branch, FamilyParams, Sign, SixVars};
use crate::frobenius::{self, BilinearForm, FrobeniusAlgebra};
use crate::io::{self, AlgebraFile};
use crate::lawrence::{self, AxiomId};
use crate::lens::{self, Mediator};
use crate::pentagon;
use crate::tensor::{BasisPermutation, Scalar};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

const NOTE_H_DEFAULT: &str = "h defaulted to identity";
const NOTE_QM_DERIVED: &str = "Qm derived from Qbar and h";
const NOTE_H_AS_Y: &str =
    "the symbol h in the terms h(c-d) and 2b^2+2dh-y of the reduced system is read as y";

#[derive(Debug, Parser)]
#[command(name = "triqal", version, about = "Lawrence 3-algebra checks and lens-space invariants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate axiom and identity residuals of an algebra file
    Check(CheckArgs),
    /// Write a member of the two-dimensional solution families
    Family(FamilyArgs),
    /// Build the five operations of the full 3-algebra
    Full(FullArgs),
    /// Pentagon, 1-4 move, cubic and projector residuals
    Pentagon(PentagonArgs),
    /// State-sum value of the lens space L(p,q)
    Lens(LensArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// Comparison tolerance (default: TRIQAL_TOL or 1e-9)
    #[arg(long)]
    tol: Option<f64>,
    /// Print the report as JSON
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct CheckArgs {
    file: PathBuf,
    /// Comma-separated checks: i..vii, compatibility, form, pentagon, pachner,
    /// cubic, projector (default: all)
    #[arg(long, value_delimiter = ',')]
    axioms: Option<Vec<String>>,
    /// Bilinear form file (default: the file's h, else identity)
    #[arg(long)]
    h: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct FamilyArgs {
    #[arg(long, allow_hyphen_values = true, required_unless_present = "trivial")]
    d: Option<String>,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "trivial")]
    alpha: Option<String>,
    /// + or -
    #[arg(long, allow_hyphen_values = true, default_value = "+")]
    sign: String,
    /// 1 or 2
    #[arg(long, default_value_t = 1)]
    branch: u8,
    /// The identity solution instead of a family member
    #[arg(long, conflicts_with_all = ["d", "alpha"])]
    trivial: bool,
    /// Output file (default: standard output, report on standard error)
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct FullArgs {
    file: PathBuf,
    #[arg(long)]
    h: Option<PathBuf>,
    /// Output file (default: standard output, report on standard error)
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct PentagonArgs {
    file: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct LensArgs {
    #[arg(long)]
    p: usize,
    #[arg(long)]
    q: usize,
    file: PathBuf,
    #[arg(long)]
    h: Option<PathBuf>,
    /// Write the contraction network as JSON
    #[arg(long)]
    dump_network: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub residual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValueLine {
    pub name: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub tolerance: f64,
    pub checks: Vec<CheckLine>,
    pub values: Vec<ValueLine>,
    pub notes: Vec<String>,
    pub pass: bool,
}

impl Report {
    fn new(command: String, tolerance: f64) -> Self {
        Report {
            command,
            tolerance,
            checks: Vec::new(),
            values: Vec::new(),
            notes: Vec::new(),
            pass: true,
        }
    }

    fn check(&mut self, name: impl Into<String>, residual: f64) {
        let pass = residual <= self.tolerance;
        self.pass &= pass;
        self.checks.push(CheckLine {
            name: name.into(),
            residual,
            pass,
        });
    }

    fn value(&mut self, name: impl Into<String>, value: impl Into<String>) {
        self.values.push(ValueLine {
            name: name.into(),
            value: value.into(),
        });
    }

    fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn render(&self) -> String {
        let mut s = format!("{}\n", self.command);
        let width = self
            .checks
            .iter()
            .map(|c| c.name.len())
            .chain(self.values.iter().map(|v| v.name.len()))
            .max()
            .unwrap_or(0);
        for c in &self.checks {
            let verdict = if c.pass { "pass" } else { "FAIL" };
            s += &format!("  {:width$}  {:>9.2e}  {verdict}\n", c.name, c.residual);
        }
        for v in &self.values {
            s += &format!("  {:width$}  {}\n", v.name, v.value);
        }
        for n in &self.notes {
            s += &format!("  note: {n}\n");
        }
        s += &format!(
            "{} (tolerance {:.1e})\n",
            if self.pass { "pass" } else { "fail" },
            self.tolerance
        );
        s
    }

    fn exit_code(&self) -> i32 {
        if self.pass {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }
}

/// Runs the command line with `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let echo = args
        .iter()
        .map(|a| a.to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join(" ");
    let (json, outcome) = match cli.command {
        Command::Check(a) => (a.common.json, cmd_check(&a, echo)),
        Command::Family(a) => (a.common.json, cmd_family(&a, echo, out)),
        Command::Full(a) => (a.common.json, cmd_full(&a, echo, out)),
        Command::Pentagon(a) => (a.common.json, cmd_pentagon(&a, echo)),
        Command::Lens(a) => (a.common.json, cmd_lens(&a, echo)),
    };
    match outcome {
        Ok((report, to_stderr)) => {
            let text = if json {
                serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
            } else {
                report.render()
            };
            let sink: &mut dyn Write = if to_stderr { err } else { out };
            let _ = sink.write_all(text.as_bytes());
            report.exit_code()
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::format(path.display().to_string(), e.to_string()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::format(path.display().to_string(), e.to_string()))
}

fn tolerance(c: &Common) -> Result<f64> {
    match c.tol {
        Some(t) if t.is_finite() && t >= 0.0 => Ok(t),
        Some(t) => Err(Error::format("tol", format!("must be a non-negative number, got {t}"))),
        None => Ok(crate::default_tolerance()),
    }
}

fn load(path: &Path) -> Result<AlgebraFile> {
    AlgebraFile::from_json(&read(path)?)
}

/// The form from `--h`, else the file's `h`, else the identity (with a note).
fn resolve_form(file: &AlgebraFile, h_path: Option<&Path>, report: &mut Report) -> Result<BilinearForm> {
    let matrix = match h_path {
        Some(p) => Some(io::parse_form(&read(p)?, file.n())?),
        None => file.h.clone(),
    };
    match matrix {
        Some(m) => BilinearForm::new(m),
        None => {
            report.note(NOTE_H_DEFAULT);
            Ok(BilinearForm::identity(file.n()))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Item {
    Axiom(AxiomId),
    Compatibility,
    Form,
    Pentagon,
    Pachner,
    Cubic,
    Projector,
}

impl Item {
    fn parse(s: &str) -> Result<Item> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "compatibility" | "compat" => Item::Compatibility,
            "form" => Item::Form,
            "pentagon" => Item::Pentagon,
            "pachner" | "pachner14" => Item::Pachner,
            "cubic" => Item::Cubic,
            "projector" => Item::Projector,
            other => Item::Axiom(other.parse().map_err(|_| {
                Error::format("axioms", format!("unknown check {other:?}"))
            })?),
        })
    }

    fn all() -> Vec<Item> {
        AxiomId::ALL
            .iter()
            .map(|a| Item::Axiom(*a))
            .chain([
                Item::Compatibility,
                Item::Form,
                Item::Pentagon,
                Item::Pachner,
                Item::Cubic,
                Item::Projector,
            ])
            .collect()
    }
}

fn cmd_check(a: &CheckArgs, echo: String) -> Result<(Report, bool)> {
    let mut report = Report::new(echo, tolerance(&a.common)?);
    let file = load(&a.file)?;
    let items = match &a.axioms {
        Some(list) => list.iter().map(|s| Item::parse(s)).collect::<Result<Vec<_>>>()?,
        None => Item::all(),
    };
    let needs_form = items.iter().any(|i| match i {
        Item::Axiom(x) => x.needs_m() && file.qm.is_none(),
        Item::Compatibility | Item::Form => true,
        _ => false,
    });
    let h = if needs_form { Some(resolve_form(&file, a.h.as_deref(), &mut report)?) } else { None };
    let mut alg = file.algebra()?;
    if alg.qm().is_none() {
        if let Some(h) = &h {
            let qm = frobenius::derive_m(alg.qbar(), h)?;
            alg = alg.with_qm(qm)?;
            report.note(NOTE_QM_DERIVED);
        }
    }
    let p_id = alg.p().is_identity();
    let mut warned = false;
    for item in items {
        if !p_id && !warned && matches!(item, Item::Pentagon | Item::Pachner | Item::Cubic | Item::Projector) {
            report.note("P is not the identity; the pentagon, 1-4, cubic and projector checks assume P = id");
            warned = true;
        }
        match item {
            Item::Axiom(x) => report.check(format!("axiom {}", x.roman()), lawrence::axiom_residual(&alg, x)?),
            Item::Compatibility => {
                let h = h.as_ref().expect("resolved");
                report.check("compatibility", frobenius::compatibility_residual(&alg, h)?)
            }
            Item::Form => {
                let h = h.as_ref().expect("resolved");
                report.check("form condition", frobenius::form_condition_residual(h, alg.p())?)
            }
            Item::Pentagon => report.check("pentagon", pentagon::pentagon_residual(alg.qbar())?),
            Item::Pachner => report.check("1-4 move", pentagon::pachner14_residual(alg.qbar())?),
            Item::Cubic => report.check("cubic", pentagon::cubic_residual(alg.qbar())?),
            Item::Projector => {
                let b = pentagon::projector_matrix(alg.qbar())?;
                report.check("projector", pentagon::projector_residual(&b))
            }
        }
    }
    Ok((report, false))
}

fn parse_family(a: &FamilyArgs) -> Result<FamilyParams> {
    let d = io::parse_complex(a.d.as_deref().unwrap_or_default()).map_err(|_| {
        Error::format("d", format!("cannot parse {:?}", a.d.as_deref().unwrap_or_default()))
    })?;
    let alpha = io::parse_complex(a.alpha.as_deref().unwrap_or_default()).map_err(|_| {
        Error::format("alpha", format!("cannot parse {:?}", a.alpha.as_deref().unwrap_or_default()))
    })?;
    let sign = match a.sign.trim() {
        "+" | "+1" | "1" | "plus" => Sign::Plus,
        "-" | "-1" | "minus" => Sign::Minus,
        other => return Err(Error::format("sign", format!("expected + or -, got {other:?}"))),
    };
    let branch = match a.branch {
        1 => Branch::First,
        2 => Branch::Second,
        other => return Err(Error::format("branch", format!("expected 1 or 2, got {other}"))),
    };
    Ok(FamilyParams { d, alpha, sign, branch })
}

fn cmd_family(a: &FamilyArgs, echo: String, out: &mut dyn Write) -> Result<(Report, bool)> {
    let mut report = Report::new(echo, tolerance(&a.common)?);
    let vars = if a.trivial {
        SixVars::trivial()
    } else {
        families::family(&parse_family(a)?)?
    };
    let system = families::system_residuals(&vars);
    report.check("reduced system", system.iter().copied().fold(0.0, f64::max));
    report.check("normalization", families::normalization_residual(&vars));
    for (name, v) in [("a", vars.a), ("b", vars.b), ("c", vars.c), ("d", vars.d), ("f", vars.f), ("y", vars.y)] {
        report.value(name, io::format_complex(v));
    }
    report.note(NOTE_H_AS_Y);
    let mut file = AlgebraFile::new(BasisPermutation::identity(2), families::embed(&vars));
    file.notes.push(NOTE_H_AS_Y.into());
    let text = file.to_json() + "\n";
    match &a.out {
        Some(path) => {
            write(path, &text)?;
            Ok((report, false))
        }
        None => {
            out.write_all(text.as_bytes())
                .map_err(|e| Error::format("stdout", e.to_string()))?;
            Ok((report, true))
        }
    }
}

fn cmd_full(a: &FullArgs, echo: String, out: &mut dyn Write) -> Result<(Report, bool)> {
    let tol = tolerance(&a.common)?;
    let mut report = Report::new(echo, tol);
    let file = load(&a.file)?;
    let h = resolve_form(&file, a.h.as_deref(), &mut report)?;
    let fa = FrobeniusAlgebra::new(file.algebra()?, h, tol)?;
    let (istar, iistar) = fa.star_residuals();
    report.value("i* residual", format!("{istar:.2e}"));
    report.value("ii* residual", format!("{iistar:.2e}"));
    let full = frobenius::build_full(&fa)?;
    let c = full.consistency(fa.h())?;
    report.check("m31 from m22", c.m31_from_m22);
    report.check("m13 lowered to m22", c.m13_to_m22);
    report.check("m04 lowered to m13", c.m04_to_m13);
    report.check("m40 raised to m31", c.m40_to_m31);
    report.check("raise/lower round trip", c.round_trip);
    let value = io::full_algebra_value(&full, fa.base().p(), &fa.h().matrix());
    let text = serde_json::to_string_pretty(&value).expect("values serialize") + "\n";
    match &a.out {
        Some(path) => {
            write(path, &text)?;
            Ok((report, false))
        }
        None => {
            out.write_all(text.as_bytes())
                .map_err(|e| Error::format("stdout", e.to_string()))?;
            Ok((report, true))
        }
    }
}

fn cmd_pentagon(a: &PentagonArgs, echo: String) -> Result<(Report, bool)> {
    let mut report = Report::new(echo, tolerance(&a.common)?);
    let file = load(&a.file)?;
    let q = &file.qbar;
    if !file.p.is_identity() {
        report.note("P is not the identity; these identities assume P = id");
    }
    report.check("pentagon (operator form)", pentagon::pentagon_residual(q)?);
    report.check("pentagon (coordinate form)", pentagon::pentagon_coordinate_residual(q)?);
    report.check("1-4 move", pentagon::pachner14_residual(q)?);
    report.check("cubic", pentagon::cubic_residual(q)?);
    let b = pentagon::projector_matrix(q)?;
    report.check("projector", pentagon::projector_residual(&b));
    report.value("distance of B from identity", format!("{:.2e}", b.identity_distance()));
    Ok((report, false))
}

fn cmd_lens(a: &LensArgs, echo: String) -> Result<(Report, bool)> {
    let mut report = Report::new(echo, tolerance(&a.common)?);
    let file = load(&a.file)?;
    let net = lens::build_lens(a.p, a.q)?;
    let h = resolve_form(&file, a.h.as_deref(), &mut report)?;
    if let Some(path) = &a.dump_network {
        write(path, &(net.to_json() + "\n"))?;
    }
    let mediated = net.bonds.iter().filter(|b| b.mediator != Mediator::Direct).count();
    if mediated > 0 {
        report.note(format!(
            "{mediated} glued face pairs have equal orientation and are joined through h or its inverse"
        ));
    }
    let value: Scalar = lens::evaluate(&net, &file.qbar, &h)?;
    report.value(format!("L({},{})", a.p, a.q), io::format_complex(value));
    Ok((report, false))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(args.iter().copied(), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn item_names() {
        assert_eq!(Item::parse("vii").unwrap(), Item::Axiom(AxiomId::VII));
        assert_eq!(Item::parse(" Pentagon ").unwrap(), Item::Pentagon);
        assert!(Item::parse("viii").is_err());
        assert_eq!(Item::all().len(), 13);
    }

    #[test]
    fn usage_errors_exit_with_input_code() {
        assert_eq!(run_args(&["triqal"]).0, EXIT_INPUT);
        assert_eq!(run_args(&["triqal", "lens", "--p", "x"]).0, EXIT_INPUT);
        let (code, out, _) = run_args(&["triqal", "--help"]);
        assert_eq!(code, EXIT_PASS);
        assert!(out.contains("lens"));
    }

    #[test]
    fn family_to_stdout() {
        let (code, out, err) = run_args(&["triqal", "family", "--d", "0.25", "--alpha", "4"]);
        assert_eq!(code, EXIT_PASS, "{err}");
        let file = AlgebraFile::from_json(&out).unwrap();
        assert_eq!(file.qbar.get(&[0, 0, 1, 1]), Scalar::new(1.0, 0.0));
        assert_eq!(file.qbar.get(&[1, 1, 0, 0]), Scalar::new(0.0625, 0.0));
        assert!(err.contains("read as y"));
    }

    #[test]
    fn family_zero_parameter() {
        let (code, _, err) = run_args(&["triqal", "family", "--d", "0", "--alpha", "4"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(err.contains("d must be nonzero"), "{err}");
        let (code, _, err) = run_args(&["triqal", "family", "--d", "-0.5", "--alpha", "-2", "--sign", "-"]);
        assert_eq!(code, EXIT_PASS, "{err}");
    }

    #[test]
    fn report_rendering() {
        let mut r = Report::new("cmd".into(), 1e-9);
        r.check("x", 0.0);
        r.check("y", 1.0);
        r.note("n");
        let s = r.render();
        assert!(s.contains("pass") && s.contains("FAIL") && s.contains("note: n"));
        assert_eq!(r.exit_code(), EXIT_FAIL);
    }
}
