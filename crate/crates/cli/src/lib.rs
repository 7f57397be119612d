//! The `brauer-index` command line.
//!
//! [`run`] takes the full argument vector and writes to the given streams,
//! returning the process exit code:
//!
//! | code | meaning |
//! |------|---------|
//! | 0    | success |
//! | 1    | unreadable or malformed input |
//! | 2    | model fails validation |
//! | 3    | a class violates `ind | per²` (`report`), or a certificate check failed (`examples sweep --assert-theorem-1-3`) |
//! | 64   | usage error |

pub mod schema;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use brauer_index::examples::{enumerate_valid_models, model_a_teichner_orientable, model_b_teichner_nonorientable};
use brauer_index::forms2::Z2SymForm;
use brauer_index::gf2::{BitMatrix, BitVector};
use brauer_index::grouptransfer::{
    abelianization, build_semidirect, semidirect_index_two, transfer_index2, FiniteGroupTable,
};
use brauer_index::model6::{ModelError, ValidatedModel};
use brauer_index::periodindex::{membership, solve_ex, tpic_holds, tpic_report, Membership};
use clap::{Parser, Subcommand, ValueEnum};

use crate::schema::{ModelFile, ReportDoc};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_TPIC: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "brauer-index", version, about = "Period and index of Brauer classes on 6-manifold models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a model file against the model invariants.
    Validate { file: PathBuf },
    /// Period, index and TPIC verdict for every nonzero class of TH³.
    Report {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// The spin^c certificate e_x for a class x of W.
    SolveEx {
        file: PathBuf,
        #[arg(long)]
        x: String,
    },
    /// Decide whether β(x²) lies in β(x)·H².
    Membership {
        file: PathBuf,
        #[arg(long)]
        x: String,
    },
    /// Symmetric forms over GF(2).
    Forms {
        #[command(subcommand)]
        command: FormsCommand,
    },
    /// Finite groups: abelianization and index-2 transfer.
    Group {
        #[command(subcommand)]
        command: GroupCommand,
    },
    /// Reference models and exhaustive sweeps.
    Examples {
        #[command(subcommand)]
        command: ExamplesCommand,
    },
}

#[derive(Debug, Subcommand)]
enum FormsCommand {
    /// Solve A·d = diag(A); rows as bitstrings separated by ',' or ';'.
    DiagSolve {
        #[arg(long)]
        matrix: String,
    },
}

#[derive(Debug, Subcommand)]
enum GroupCommand {
    Abelianize {
        #[command(flatten)]
        group: GroupSource,
    },
    Transfer {
        /// `n,k` for C_n ⋊ C₂ with b a b⁻¹ = a^k; H = ⟨a⟩.
        #[arg(long, value_parser = parse_pair)]
        semidirect: (i64, i64),
        #[arg(long)]
        element: String,
    },
}

#[derive(Debug, clap::Args)]
#[group(required = true, multiple = false)]
struct GroupSource {
    /// `n,k` for C_n ⋊ C₂ with b a b⁻¹ = a^k.
    #[arg(long, value_parser = parse_pair)]
    semidirect: Option<(i64, i64)>,
    /// A multiplication table as a JSON array of rows.
    #[arg(long)]
    table: Option<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ExampleName {
    TeichnerOrientable,
    TeichnerNonorientable,
}

#[derive(Debug, Subcommand)]
enum ExamplesCommand {
    Emit {
        #[arg(long, value_enum)]
        name: ExampleName,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    Sweep {
        #[arg(long = "max-dim")]
        max_dim: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        factors: Vec<i64>,
        /// Run solve_ex on every x of every spin^c model and check membership.
        #[arg(long = "assert-theorem-1-3")]
        check_certificates: bool,
    },
}

fn parse_pair(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(',').ok_or("expected n,k")?;
    let n = a.trim().parse().map_err(|_| format!("bad integer {a:?}"))?;
    let k = b.trim().parse().map_err(|_| format!("bad integer {b:?}"))?;
    Ok((n, k))
}

/// A failure that ends the command with an exit code and a message on stderr.
struct Failure {
    code: i32,
    message: String,
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

type CmdResult = Result<i32, Failure>;

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    return EXIT_OK;
                }
                _ => EXIT_USAGE,
            };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> CmdResult {
    match command {
        Command::Validate { file } => cmd_validate(&file, out),
        Command::Report { file, json } => cmd_report(&file, json, out),
        Command::SolveEx { file, x } => cmd_solve_ex(&file, &x, out),
        Command::Membership { file, x } => cmd_membership(&file, &x, out),
        Command::Forms {
            command: FormsCommand::DiagSolve { matrix },
        } => cmd_diag_solve(&matrix, out),
        Command::Group { command } => match command {
            GroupCommand::Abelianize { group } => cmd_abelianize(group, out),
            GroupCommand::Transfer { semidirect, element } => cmd_transfer(semidirect, &element, out),
        },
        Command::Examples { command } => match command {
            ExamplesCommand::Emit { name, output } => cmd_emit(name, output.as_deref(), out),
            ExamplesCommand::Sweep {
                max_dim,
                factors,
                check_certificates,
            } => cmd_sweep(max_dim, &factors, check_certificates, out),
        },
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes()).map_err(|e| input_error(format!("cannot write output: {e}")))
}

fn load(path: &Path) -> Result<ModelFile, Failure> {
    let text = fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    ModelFile::from_json(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

/// Loads and validates; invariant failures become exit code 2.
fn load_validated(path: &Path) -> Result<(ModelFile, ValidatedModel), Failure> {
    let file = load(path)?;
    let model = file.to_model().map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    match model.validated() {
        Ok(v) => Ok((file, v)),
        Err(ModelError::Invalid(report)) => Err(Failure {
            code: EXIT_INVALID,
            message: format!("{}: {report}", path.display()),
        }),
        Err(e) => Err(input_error(e.to_string())),
    }
}

fn parse_x(m: &ValidatedModel, x: &str) -> Result<BitVector, Failure> {
    let v: BitVector = x.parse().map_err(|_| input_error(format!("--x {x:?} is not a bitstring")))?;
    if v.len() != m.dim_w() {
        return Err(input_error(format!("--x has length {}, dim_W is {}", v.len(), m.dim_w())));
    }
    Ok(v)
}

fn cmd_validate(path: &Path, out: &mut dyn Write) -> CmdResult {
    let file = load(path)?;
    let model = file.to_model().map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    let report = model.validate();
    if report.passed() {
        emit(out, &format!("PASS spin_c={}\n", report.spin_c))?;
        Ok(EXIT_OK)
    } else {
        let mut text = String::from("FAIL\n");
        for f in &report.failures {
            text.push_str(&format!("  {f}\n"));
        }
        emit(out, &text)?;
        Ok(EXIT_INVALID)
    }
}

/// The JSON report of a model, as printed by `report --json`.
pub fn report_json(name: Option<&str>, model: &ValidatedModel) -> String {
    ReportDoc::new(name, model, &tpic_report(model)).to_json()
}

fn fmt_vec(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(i64::to_string).collect();
    format!("({})", parts.join(","))
}

fn cmd_report(path: &Path, json: bool, out: &mut dyn Write) -> CmdResult {
    let (file, model) = load_validated(path)?;
    let reports = tpic_report(&model);
    let holds = tpic_holds(&reports);
    if json {
        emit(out, &ReportDoc::new(file.name.as_deref(), &model, &reports).to_json())?;
    } else {
        let mut text = String::new();
        if let Some(name) = &file.name {
            text.push_str(&format!("model: {name}\n"));
        }
        text.push_str(&format!("spin^c: {}\n", model.is_spin_c()));
        for r in &reports {
            let verdict = match r.tpic {
                Some(true) => "HOLDS",
                Some(false) => "FAILS",
                None => "UNKNOWN",
            };
            text.push_str(&format!(
                "alpha={} per={} ind={} regime={} bound={} tpic={}",
                fmt_vec(&r.alpha),
                r.period,
                r.index,
                r.regime,
                r.epsilon_bound,
                verdict
            ));
            if let Some(c) = &r.certificate {
                text.push_str(&format!(" e_x={}", fmt_vec(c)));
            }
            text.push('\n');
        }
        text.push_str(match holds {
            Some(true) => "TPIC HOLDS\n",
            Some(false) => "TPIC FAILS\n",
            None => "TPIC UNKNOWN\n",
        });
        emit(out, &text)?;
    }
    Ok(if holds == Some(false) { EXIT_TPIC } else { EXIT_OK })
}

fn cmd_solve_ex(path: &Path, x: &str, out: &mut dyn Write) -> CmdResult {
    let (_, model) = load_validated(path)?;
    let x = parse_x(&model, x)?;
    let cert = solve_ex(&model, &x).map_err(|e| input_error(e.to_string()))?;
    emit(
        out,
        &format!(
            "x = {}\nlambda_x = {:?}\nd = {}\nd_lift = {}\nc1 = {}\ne_x = {}\n",
            cert.x,
            cert.lambda.matrix(),
            cert.d,
            fmt_vec(&cert.d_lift),
            fmt_vec(&cert.c1),
            fmt_vec(&cert.e_x)
        ),
    )?;
    Ok(EXIT_OK)
}

fn cmd_membership(path: &Path, x: &str, out: &mut dyn Write) -> CmdResult {
    let (_, model) = load_validated(path)?;
    let x = parse_x(&model, x)?;
    let text = match membership(&model, &x).map_err(|e| input_error(e.to_string()))? {
        Membership::Member { witness } => format!("MEMBER witness={}\n", fmt_vec(&witness)),
        Membership::NonMember { target } => format!("NON_MEMBER beta(x^2)={target}\n"),
    };
    emit(out, &text)?;
    Ok(EXIT_OK)
}

fn cmd_diag_solve(matrix: &str, out: &mut dyn Write) -> CmdResult {
    let rows: Vec<BitVector> = matrix
        .split([',', ';'])
        .map(str::trim)
        .filter(|r| !r.is_empty())
        .map(|r| r.parse().map_err(|_| input_error(format!("row {r:?} is not a bitstring"))))
        .collect::<Result<_, _>>()?;
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(input_error("matrix must be square"));
    }
    let form = Z2SymForm::new(BitMatrix::from_rows(n, rows)).map_err(|e| input_error(e.to_string()))?;
    emit(out, &format!("d = {}\n", form.solve_diagonal()))?;
    Ok(EXIT_OK)
}

fn cmd_abelianize(source: GroupSource, out: &mut dyn Write) -> CmdResult {
    let mut text = String::new();
    match (source.semidirect, source.table) {
        (Some((n, k)), _) => {
            let g = build_semidirect(n, k).map_err(|e| input_error(e.to_string()))?;
            let ab = abelianization(&g.table).map_err(|e| input_error(e.to_string()))?;
            text.push_str(&format!("G_ab = {}\n", ab.group));
            for (label, el) in [("a", g.a()), ("b", g.b())] {
                let img = ab.project(el);
                let order = ab.group.element_order(img).map_err(|e| input_error(e.to_string()))?;
                text.push_str(&format!("{label} -> {} (order {order})\n", fmt_vec(img)));
            }
        }
        (None, Some(table)) => {
            let rows: Vec<Vec<usize>> =
                serde_json::from_str(&table).map_err(|e| input_error(format!("--table: {e}")))?;
            let g = FiniteGroupTable::new(rows, None).map_err(|e| input_error(e.to_string()))?;
            let ab = abelianization(&g).map_err(|e| input_error(e.to_string()))?;
            text.push_str(&format!("G_ab = {}\n", ab.group));
        }
        (None, None) => unreachable!("clap requires one source"),
    }
    emit(out, &text)?;
    Ok(EXIT_OK)
}

fn cmd_transfer((n, k): (i64, i64), element: &str, out: &mut dyn Write) -> CmdResult {
    let g = build_semidirect(n, k).map_err(|e| input_error(e.to_string()))?;
    let el = g.parse_word(element).map_err(|e| input_error(e.to_string()))?;
    let data = semidirect_index_two(&g).map_err(|e| input_error(e.to_string()))?;
    let t = transfer_index2(&data).map_err(|e| input_error(e.to_string()))?;
    let image = t.apply(el);
    let order = t.h_ab.group.element_order(&image).map_err(|e| input_error(e.to_string()))?;
    let zero = t.h_ab.group.is_zero(&image);
    emit(
        out,
        &format!(
            "tau({}) = {} in H_ab = {} (order {order}, {})\n",
            g.format(el),
            g.format(t.apply_representative(el)),
            t.h_ab.group,
            if zero { "zero" } else { "nonzero" }
        ),
    )?;
    Ok(EXIT_OK)
}

/// Model file text for a reference model.
pub fn example_file(name: &str) -> Option<ModelFile> {
    let (model, title, notes) = match name {
        "teichner-orientable" => (
            model_a_teichner_orientable(),
            "MODEL-A",
            "spin^c model realizing per 2, ind 4",
        ),
        "teichner-nonorientable" => (
            model_b_teichner_nonorientable(),
            "MODEL-B",
            "non-spin^c model realizing per 2, ind 8",
        ),
        _ => return None,
    };
    Some(ModelFile::from_model(model.model(), Some(title), Some(notes)))
}

fn cmd_emit(name: ExampleName, output: Option<&Path>, out: &mut dyn Write) -> CmdResult {
    let key = match name {
        ExampleName::TeichnerOrientable => "teichner-orientable",
        ExampleName::TeichnerNonorientable => "teichner-nonorientable",
    };
    let text = example_file(key).expect("known example").to_json();
    match output {
        Some(path) => {
            fs::write(path, &text).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
        }
        None => emit(out, &text)?,
    }
    Ok(EXIT_OK)
}

fn cmd_sweep(max_dim: usize, factors: &[i64], check_certificates: bool, out: &mut dyn Write) -> CmdResult {
    let models = enumerate_valid_models(max_dim, factors).map_err(|e| input_error(e.to_string()))?;
    let (mut total, mut spin_c, mut classes, mut tpic_failures, mut checks) = (0usize, 0usize, 0usize, 0usize, 0usize);
    let mut violations = Vec::new();
    for m in models {
        total += 1;
        let reports = tpic_report(&m);
        classes += reports.len();
        tpic_failures += reports.iter().filter(|r| r.tpic == Some(false)).count();
        for r in &reports {
            if let Err(e) = r.check_arithmetic() {
                violations.push(format!("model #{total}: {e}"));
            }
        }
        if m.is_spin_c() {
            spin_c += 1;
            if check_certificates {
                for x in BitVector::all(m.dim_w()) {
                    checks += 1;
                    if let Err(e) = solve_ex(&m, &x) {
                        violations.push(format!("model #{total}, x = {x}: {e}"));
                    }
                    if !membership(&m, &x).map(|r| r.is_member()).unwrap_or(false) {
                        violations.push(format!("model #{total}, x = {x}: NON_MEMBER on a spin^c model"));
                    }
                }
            }
        }
    }
    let mut text = format!(
        "models: {total}\nspin_c: {spin_c}\nclasses: {classes}\ntpic_failures: {tpic_failures}\n"
    );
    if check_certificates {
        text.push_str(&format!("certificates_checked: {checks}\nviolations: {}\n", violations.len()));
    }
    for v in &violations {
        text.push_str(&format!("  {v}\n"));
    }
    emit(out, &text)?;
    Ok(if violations.is_empty() { EXIT_OK } else { EXIT_TPIC })
}
