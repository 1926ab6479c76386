//! The `skilltree` command-line tool.
//!
//! Subcommands mirror the library pipeline: `validate` (parse + build +
//! lint), `plan` (teaching order), `blocks` (block plan), `export`
//! (Graphviz/JSON/source) and `check-order` (audit a hand-written order).
//!
//! Exit codes are stable for CI use: 0 clean, 1 when at least one
//! error-severity diagnostic was reported, 2 for usage and I/O problems.
//! Artifacts go to standard output; diagnostics and usage errors go to
//! standard error. `NO_COLOR` (or a non-terminal standard error) disables
//! ANSI styling.

use std::ffi::OsString;
use std::fmt::Display;
use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::blocks::{auto_select_goals, balance_metrics, group_blocks, rebalance, BlockPlan};
use crate::diag::{catalog, sort_diagnostics, Diagnostic, Severity};
use crate::export::{
    diagnostics_to_json, export_ctdl, from_json, graph_to_json, plan_to_json, sequence_to_json,
    to_dot, to_markdown_plan, DotOptions, SchemaError,
};
use crate::graph::{CourseSpec, CurriculumGraph, NodeId};
use crate::lint::{check_sequence, lint_graph, LintConfig};
use crate::plan::{plan_order, PlannerOptions, TeachingSequence};

#[derive(Parser)]
#[command(
    name = "skilltree",
    version,
    about = "Validate curriculum graphs and derive teaching orders, blocks and exports"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a curriculum file, validate its structure and lint it.
    Validate {
        /// Curriculum source (`.ctdl`) or a previously exported `.json` graph.
        file: PathBuf,
        /// Restrict course-scoped lint rules to one course.
        #[arg(long)]
        course: Option<String>,
        /// `text` prints diagnostics to stderr; `json` prints a report to stdout.
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
        #[command(flatten)]
        rules: RuleFlags,
    },
    /// Print the derived teaching order for a course.
    Plan {
        /// Curriculum source (`.ctdl`).
        file: PathBuf,
        /// Course to plan (optional when the file declares exactly one).
        #[arg(long)]
        course: Option<String>,
        /// `text` prints one node id per line.
        #[arg(long, value_enum, default_value_t = SequenceFormat::Text)]
        format: SequenceFormat,
    },
    /// Group a course's teaching order into goal-terminated blocks.
    Blocks {
        /// Curriculum source (`.ctdl`).
        file: PathBuf,
        /// Course to plan (optional when the file declares exactly one).
        #[arg(long)]
        course: Option<String>,
        /// Block goals, in teaching order. Goals declared in the course take
        /// precedence; without either, goals are chosen automatically.
        #[arg(long, value_delimiter = ',', value_name = "ID,ID,...")]
        goals: Vec<String>,
        #[arg(long, value_enum, default_value_t = PlanFormat::Md)]
        format: PlanFormat,
        #[command(flatten)]
        rules: RuleFlags,
    },
    /// Export the graph as Graphviz DOT, a JSON document, or source text.
    Export {
        /// Curriculum source (`.ctdl`) or a previously exported `.json` graph.
        file: PathBuf,
        #[arg(long, value_enum)]
        format: ExportFormat,
        /// Course used to style the DOT output (goals bold, out-of-content
        /// nodes dashed). Defaults to the sole course, if there is one.
        #[arg(long)]
        course: Option<String>,
        /// Omit nodes outside the course contents from DOT output.
        #[arg(long)]
        contents_only: bool,
        /// Write to a file instead of standard output.
        #[arg(short, long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Audit a hand-written teaching order against a course.
    CheckOrder {
        /// Curriculum source (`.ctdl`).
        file: PathBuf,
        /// Course to audit against (optional when the file declares exactly one).
        #[arg(long)]
        course: Option<String>,
        /// File with one node id per line; `#` starts a comment.
        #[arg(long, value_name = "ORDERFILE")]
        order: PathBuf,
        /// `text` prints diagnostics to stderr; `json` prints a report to stdout.
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
        #[command(flatten)]
        rules: RuleFlags,
    },
}

/// Lint-rule configuration shared by the diagnostic-producing subcommands.
#[derive(Args)]
struct RuleFlags {
    /// Report a rule at a different severity, e.g. `--severity W202=error`.
    #[arg(long, value_name = "CODE=LEVEL")]
    severity: Vec<String>,
    /// Check a rule that is off by default, e.g. `--enable W204`.
    #[arg(long, value_name = "CODE")]
    enable: Vec<String>,
    /// Skip a rule, e.g. `--disable W201`.
    #[arg(long, value_name = "CODE")]
    disable: Vec<String>,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum SequenceFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum PlanFormat {
    Md,
    Json,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum ExportFormat {
    Dot,
    Json,
    Ctdl,
}

/// Runs against the process environment and real standard streams.
pub fn run() -> i32 {
    let color = std::io::stderr().is_terminal() && std::env::var_os("NO_COLOR").is_none();
    let mut out = std::io::stdout().lock();
    let mut err = std::io::stderr().lock();
    run_with(std::env::args_os(), &mut out, &mut err, color)
}

/// Runs with explicit arguments and output streams; returns the exit code.
/// This is the testable entry point behind [`run`].
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write, color: bool) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(error) => {
            let rendered = error.render();
            return match error.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    0
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    2
                }
            };
        }
    };
    let mut ctx = Ctx { out, err, color };
    match cli.command {
        Command::Validate { file, course, format, rules } => {
            validate(&mut ctx, &file, course.as_deref(), format, &rules)
        }
        Command::Plan { file, course, format } => plan(&mut ctx, &file, course.as_deref(), format),
        Command::Blocks { file, course, goals, format, rules } => {
            blocks(&mut ctx, &file, course.as_deref(), &goals, format, &rules)
        }
        Command::Export { file, format, course, contents_only, output } => {
            export(&mut ctx, &file, format, course.as_deref(), contents_only, output.as_deref())
        }
        Command::CheckOrder { file, course, order, format, rules } => {
            check_order(&mut ctx, &file, course.as_deref(), &order, format, &rules)
        }
    }
}

struct Ctx<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    color: bool,
}

impl Ctx<'_> {
    /// Prints one diagnostic to standard error, coloring the severity word
    /// when enabled.
    fn log(&mut self, diagnostic: &Diagnostic) {
        let text = diagnostic.to_string();
        if self.color {
            let (word, style) = match diagnostic.severity {
                Severity::Error => ("error", "\x1b[1;31m"),
                Severity::Warning => ("warning", "\x1b[1;33m"),
            };
            let _ = writeln!(self.err, "{style}{word}\x1b[0m{}", &text[word.len()..]);
        } else {
            let _ = writeln!(self.err, "{text}");
        }
    }

    fn log_all(&mut self, diagnostics: &[Diagnostic]) {
        for diagnostic in diagnostics {
            self.log(diagnostic);
        }
    }

    /// Prints a usage or I/O failure and returns exit code 2.
    fn fail(&mut self, message: impl Display) -> i32 {
        let _ = writeln!(self.err, "error: {message}");
        2
    }

    fn emit(&mut self, artifact: &str) {
        let _ = write!(self.out, "{artifact}");
    }
}

fn exit_code(diagnostics: &[Diagnostic]) -> i32 {
    i32::from(crate::diag::has_errors(diagnostics))
}

/// Reports diagnostics in the requested format and translates them to an
/// exit code. Used by the subcommands whose artifact *is* the report.
fn report(ctx: &mut Ctx, diagnostics: Vec<Diagnostic>, format: ReportFormat) -> i32 {
    match format {
        ReportFormat::Text => ctx.log_all(&diagnostics),
        ReportFormat::Json => ctx.emit(&diagnostics_to_json(&diagnostics)),
    }
    exit_code(&diagnostics)
}

fn read_file(ctx: &mut Ctx, path: &Path) -> Result<String, i32> {
    std::fs::read_to_string(path)
        .map_err(|error| ctx.fail(format_args!("cannot read `{}`: {error}", path.display())))
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|ext| ext.eq_ignore_ascii_case("json"))
}

/// Compiles curriculum source, logging all diagnostics on failure.
/// JSON graph documents are only meaningful for `validate` and `export`;
/// everywhere else they are rejected up front.
fn compile_source(ctx: &mut Ctx, path: &Path) -> Result<crate::Curriculum, i32> {
    if is_json(path) {
        return Err(ctx.fail("JSON input is only supported by `validate` and `export`"));
    }
    let source = read_file(ctx, path)?;
    crate::compile(&source, &path.display().to_string()).map_err(|diagnostics| {
        ctx.log_all(&diagnostics);
        exit_code(&diagnostics)
    })
}

/// Loads either curriculum source or an exported JSON graph document.
/// On success also returns the non-fatal diagnostics collected on the way.
fn load_graph(
    ctx: &mut Ctx,
    path: &Path,
) -> Result<(CurriculumGraph, Vec<CourseSpec>, Vec<Diagnostic>), i32> {
    if !is_json(path) {
        let curriculum = compile_source(ctx, path)?;
        return Ok((curriculum.graph, curriculum.courses, curriculum.warnings));
    }
    let text = read_file(ctx, path)?;
    match from_json(&text) {
        Ok((graph, courses)) => Ok((graph, courses, Vec::new())),
        Err(SchemaError::Graph(errors)) => {
            let mut diagnostics: Vec<Diagnostic> =
                errors.iter().flat_map(crate::explain_build_error).collect();
            sort_diagnostics(&mut diagnostics);
            ctx.log_all(&diagnostics);
            Err(exit_code(&diagnostics))
        }
        Err(error) => Err(ctx.fail(error)),
    }
}

/// Resolves `--course`, falling back to the file's sole course.
fn select_course<'a>(
    ctx: &mut Ctx,
    courses: &'a [CourseSpec],
    wanted: Option<&str>,
) -> Result<&'a CourseSpec, i32> {
    match wanted {
        Some(name) => courses.iter().find(|c| c.name == name).ok_or_else(|| {
            let known: Vec<&str> = courses.iter().map(|c| c.name.as_str()).collect();
            ctx.fail(format_args!(
                "no course named \"{name}\" (available: {})",
                if known.is_empty() { "none".to_string() } else { known.join(", ") }
            ))
        }),
        None => match courses {
            [sole] => Ok(sole),
            [] => Err(ctx.fail("the file declares no courses")),
            _ => {
                let known: Vec<&str> = courses.iter().map(|c| c.name.as_str()).collect();
                Err(ctx.fail(format_args!(
                    "the file declares {} courses; pick one with --course (available: {})",
                    courses.len(),
                    known.join(", ")
                )))
            }
        },
    }
}

/// Builds a [`LintConfig`] from the repeatable rule flags, validating every
/// code against the catalog.
fn rule_config(ctx: &mut Ctx, flags: &RuleFlags) -> Result<LintConfig, i32> {
    let mut config = LintConfig::default();
    let known = |ctx: &mut Ctx, code: &str| -> Result<String, i32> {
        let canonical = code.to_ascii_uppercase();
        if catalog::lookup(&canonical).is_none() {
            return Err(ctx.fail(format_args!("unknown rule code `{code}`")));
        }
        Ok(canonical)
    };
    for setting in &flags.severity {
        let Some((code, level)) = setting.split_once('=') else {
            return Err(ctx.fail(format_args!(
                "invalid --severity `{setting}`: expected CODE=error or CODE=warning"
            )));
        };
        let severity = match level {
            "error" => Severity::Error,
            "warning" => Severity::Warning,
            other => {
                return Err(ctx.fail(format_args!(
                    "invalid severity level `{other}`: expected `error` or `warning`"
                )))
            }
        };
        config.severity_overrides.insert(known(ctx, code)?, severity);
    }
    for code in &flags.enable {
        let code = known(ctx, code)?;
        config.enabled_overrides.insert(code, true);
    }
    for code in &flags.disable {
        let code = known(ctx, code)?;
        config.enabled_overrides.insert(code, false);
    }
    Ok(config)
}

fn validate(
    ctx: &mut Ctx,
    file: &Path,
    course: Option<&str>,
    format: ReportFormat,
    rules: &RuleFlags,
) -> i32 {
    let config = match rule_config(ctx, rules) {
        Ok(config) => config,
        Err(code) => return code,
    };
    // A failed load already reported its diagnostics in text form; for JSON
    // reports that is acceptable because exit code 1 still signals them.
    let (graph, courses, warnings) = match load_graph(ctx, file) {
        Ok(loaded) => loaded,
        Err(code) => return code,
    };
    let scope: Vec<CourseSpec> = match course {
        Some(name) => match select_course(ctx, &courses, Some(name)) {
            Ok(found) => vec![found.clone()],
            Err(code) => return code,
        },
        None => courses,
    };
    let mut diagnostics = warnings;
    diagnostics.extend(lint_graph(&graph, &scope, &config));
    sort_diagnostics(&mut diagnostics);
    report(ctx, diagnostics, format)
}

/// Plans the teaching order, reporting planner failures as usage errors
/// (they produce no diagnostics, so exit code 1 would be wrong).
fn planned_sequence(
    ctx: &mut Ctx,
    graph: &CurriculumGraph,
    course: &CourseSpec,
) -> Result<TeachingSequence, i32> {
    plan_order(graph, course, &PlannerOptions::default()).map_err(|error| ctx.fail(error))
}

fn plan(ctx: &mut Ctx, file: &Path, course: Option<&str>, format: SequenceFormat) -> i32 {
    let curriculum = match compile_source(ctx, file) {
        Ok(curriculum) => curriculum,
        Err(code) => return code,
    };
    ctx.log_all(&curriculum.warnings);
    let course = match select_course(ctx, &curriculum.courses, course) {
        Ok(course) => course,
        Err(code) => return code,
    };
    let sequence = match planned_sequence(ctx, &curriculum.graph, course) {
        Ok(sequence) => sequence,
        Err(code) => return code,
    };
    match format {
        SequenceFormat::Text => {
            for item in &sequence.items {
                let _ = writeln!(ctx.out, "{item}");
            }
        }
        SequenceFormat::Json => ctx.emit(&sequence_to_json(&sequence)),
    }
    0
}

fn blocks(
    ctx: &mut Ctx,
    file: &Path,
    course: Option<&str>,
    goal_flags: &[String],
    format: PlanFormat,
    rules: &RuleFlags,
) -> i32 {
    let config = match rule_config(ctx, rules) {
        Ok(config) => config,
        Err(code) => return code,
    };
    let curriculum = match compile_source(ctx, file) {
        Ok(curriculum) => curriculum,
        Err(code) => return code,
    };
    ctx.log_all(&curriculum.warnings);
    let course = match select_course(ctx, &curriculum.courses, course) {
        Ok(course) => course,
        Err(code) => return code,
    };
    let sequence = match planned_sequence(ctx, &curriculum.graph, course) {
        Ok(sequence) => sequence,
        Err(code) => return code,
    };

    // Goal precedence: goals declared in the course beat --goals, which
    // beats automatic selection.
    let graph = &curriculum.graph;
    let plan: Result<BlockPlan, _> = if !course.declared_block_goals.is_empty() {
        group_blocks(graph, &sequence, &course.declared_block_goals)
    } else if !goal_flags.is_empty() {
        group_blocks(graph, &sequence, goal_flags)
    } else {
        auto_select_goals(graph, &sequence, config.min_block_size, config.max_block_size)
            .and_then(|goals: Vec<NodeId>| group_blocks(graph, &sequence, &goals))
            .map(|plan| rebalance(plan, config.min_block_size))
    };
    let plan = match plan {
        Ok(plan) => plan,
        Err(error) => return ctx.fail(error),
    };

    let (metrics, findings) = balance_metrics(&plan, &config);
    ctx.log_all(&findings);
    match format {
        PlanFormat::Md => ctx.emit(&to_markdown_plan(graph, &plan)),
        PlanFormat::Json => ctx.emit(&plan_to_json(&plan, &metrics)),
    }
    exit_code(&findings)
}

fn export(
    ctx: &mut Ctx,
    file: &Path,
    format: ExportFormat,
    course: Option<&str>,
    contents_only: bool,
    output: Option<&Path>,
) -> i32 {
    let (graph, courses, warnings) = match load_graph(ctx, file) {
        Ok(loaded) => loaded,
        Err(code) => return code,
    };
    ctx.log_all(&warnings);
    let artifact = match format {
        ExportFormat::Dot => {
            // DOT styling is per-course; default to the sole course and fall
            // back to an unscoped drawing when there are several.
            let scope = match course {
                Some(name) => match select_course(ctx, &courses, Some(name)) {
                    Ok(course) => Some(course),
                    Err(code) => return code,
                },
                None => match &courses[..] {
                    [sole] => Some(sole),
                    _ => None,
                },
            };
            let options = DotOptions { include_prerequisite_nodes: !contents_only };
            to_dot(&graph, scope, &options)
        }
        ExportFormat::Json => graph_to_json(&graph, &courses),
        ExportFormat::Ctdl => export_ctdl(&graph, &courses),
    };
    match output {
        Some(path) => {
            if let Err(error) = std::fs::write(path, artifact) {
                return ctx.fail(format_args!("cannot write `{}`: {error}", path.display()));
            }
        }
        None => ctx.emit(&artifact),
    }
    0
}

/// Parses an orderfile: one node id per line, `#` starts a comment, blank
/// lines are skipped.
fn parse_orderfile(text: &str) -> Vec<String> {
    text.lines()
        .map(|line| line.split('#').next().unwrap_or("").trim())
        .filter(|line| !line.is_empty())
        .map(str::to_string)
        .collect()
}

fn check_order(
    ctx: &mut Ctx,
    file: &Path,
    course: Option<&str>,
    orderfile: &Path,
    format: ReportFormat,
    rules: &RuleFlags,
) -> i32 {
    let config = match rule_config(ctx, rules) {
        Ok(config) => config,
        Err(code) => return code,
    };
    let curriculum = match compile_source(ctx, file) {
        Ok(curriculum) => curriculum,
        Err(code) => return code,
    };
    ctx.log_all(&curriculum.warnings);
    let course = match select_course(ctx, &curriculum.courses, course) {
        Ok(course) => course,
        Err(code) => return code,
    };
    let order = match read_file(ctx, orderfile) {
        Ok(text) => parse_orderfile(&text),
        Err(code) => return code,
    };
    let diagnostics = check_sequence(&curriculum.graph, course, &order, &config);
    report(ctx, diagnostics, format)
}
