//! `mingenus build | verify | render`.
//!
//! Exit codes: 0 success, 1 presentation or report parse error, 2 usage or
//! I/O error, 3 internal invariant violation, 4 verification mismatch.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use mingenus::kirby::Stabilization;
use mingenus::pipeline::{construct, Construction, Options, PipelineError};
use mingenus::render::{color_name, render_graph_stage, render_kirby, render_link_stage};
use mingenus::report::{deserialize_report, diff_reports, serialize_report, Report, ReportError};
use mingenus::{parse_presentation, Presentation};
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;

pub const REPORT_FILE: &str = "report.txt";
pub const STAGE_FILES: [&str; 3] = ["stage1-graph.svg", "stage2-slides.svg", "stage3-link.svg"];
pub const KIRBY_FILE: &str = "kirby.svg";

#[derive(Parser, Debug)]
#[command(
    name = "mingenus",
    version,
    about = "Minimal-genus 4-manifolds from group presentations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build the manifold data and write the report.
    Build(BuildArgs),
    /// Recompute every quantity of a report and compare.
    Verify(VerifyArgs),
    /// Draw the construction stages and the Kirby diagram.
    Render(BuildArgs),
}

#[derive(Args, Debug, Clone)]
pub struct BuildArgs {
    /// Presentation text, e.g. "<x, y | x^2 y^-3>".
    pub presentation: Option<String>,
    /// Read the presentation from a file instead.
    #[arg(long, value_name = "PATH")]
    pub file: Option<PathBuf>,
    /// Comma-separated framings, one per relator.
    #[arg(long, allow_hyphen_values = true, value_name = "a,b,...")]
    pub framing: Option<String>,
    #[arg(long = "stabilize-s2xs2", default_value_t = 0, value_name = "N")]
    pub s2xs2: usize,
    #[arg(long = "stabilize-cp2", default_value_t = 0, value_name = "N")]
    pub cp2: usize,
    #[arg(long = "stabilize-cp2bar", default_value_t = 0, value_name = "N")]
    pub cp2_bar: usize,
    #[arg(long, default_value = ".", value_name = "DIR")]
    pub out: PathBuf,
    #[arg(long, value_delimiter = ',', value_name = "WHAT")]
    pub emit: Vec<Emit>,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    /// Report file to check.
    pub report: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub file: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Emit {
    Report,
    SvgStages,
    SvgKirby,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Internal(String),
    #[error("mismatch: {}", .0.join(", "))]
    Mismatch(Vec<String>),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Internal(_) => EXIT_INTERNAL,
            CliError::Mismatch(_) => EXIT_MISMATCH,
        }
    }
}

/// Parses `a,b,...`; the empty string is the empty vector.
pub fn parse_framing(s: &str) -> Result<Vec<i64>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| {
            let x = x.trim();
            x.parse::<i64>()
                .map_err(|_| format!("invalid framing `{x}`: expected an integer"))
        })
        .collect()
}

fn one_source<'a>(inline: Option<&'a str>, file: Option<&'a Path>, what: &str) -> Result<Source<'a>, CliError> {
    match (inline, file) {
        (Some(s), None) => Ok(Source::Inline(s)),
        (None, Some(p)) => Ok(Source::File(p)),
        (Some(_), Some(_)) => Err(CliError::Config(format!(
            "give either an inline {what} or --file, not both"
        ))),
        (None, None) => Err(CliError::Config(format!(
            "missing {what}: pass it inline or with --file"
        ))),
    }
}

enum Source<'a> {
    Inline(&'a str),
    File(&'a Path),
}

impl Source<'_> {
    fn read(&self) -> Result<String, CliError> {
        match self {
            Source::Inline(s) => Ok((*s).to_string()),
            Source::File(p) => {
                fs::read_to_string(p).map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))
            }
        }
    }
}

fn pipeline_error(e: PipelineError) -> CliError {
    match e {
        PipelineError::Kirby(k) => CliError::Config(k.to_string()),
        PipelineError::Invariant(t) => CliError::Internal(format!("internal invariant violated: {t}")),
    }
}

fn load(args: &BuildArgs) -> Result<(Presentation, Options), CliError> {
    let text = one_source(args.presentation.as_deref(), args.file.as_deref(), "presentation")?.read()?;
    let p = parse_presentation(text.trim()).map_err(|e| CliError::Parse(format!("parse error: {e}")))?;
    let framings = match &args.framing {
        Some(s) => parse_framing(s).map_err(CliError::Config)?,
        None => Vec::new(),
    };
    if !framings.is_empty() && framings.len() != p.num_relators() {
        return Err(CliError::Config(format!(
            "--framing has {} entries but the presentation has {} relators",
            framings.len(),
            p.num_relators()
        )));
    }
    let opts = Options {
        framings,
        stabilization: Stabilization {
            s2xs2: args.s2xs2,
            cp2: args.cp2,
            cp2_bar: args.cp2_bar,
        },
    };
    Ok((p, opts))
}

/// Writes `contents` to `dir/name` through a temporary file and a rename.
pub fn write_atomic(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    let io = |e: std::io::Error| CliError::Config(format!("cannot write to {}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    let target = dir.join(name);
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    fs::write(&tmp, contents).map_err(io)?;
    fs::rename(&tmp, &target).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        io(e)
    })?;
    Ok(target)
}

pub fn summary(c: &Construction) -> String {
    let cert = &c.certificate;
    format!(
        "g={} chi={} k=({},{},{}) status={}",
        cert.params.g, cert.chi, cert.params.k1, cert.params.k2, cert.params.k3, cert.status
    )
}

/// The four drawings: graph, slid graph, link with tunnels, Kirby diagram.
pub fn stage_svgs(c: &Construction) -> [String; 4] {
    let p = &c.presentation;
    let names = p.names();
    let n = p.num_generators();
    let circles: Vec<String> = (0..p.num_relators())
        .map(|i| format!("c{} ({})", i + 1, color_name(i)))
        .collect();
    let stage1 = format!(
        "Unknotted graph in #{n} S1xS2 with {} loops{}{}",
        n,
        if circles.is_empty() { "" } else { "; circles " },
        circles.join(", ")
    );
    let slides: Vec<String> = p
        .relators()
        .iter()
        .enumerate()
        .map(|(i, r)| format!("sliding the end of {} to produce {}", circles[i], r.compact(&names)))
        .collect();
    let stage2 = if slides.is_empty() {
        "No relators: nothing to slide".to_string()
    } else {
        let s = slides.join("; ");
        let mut chars = s.chars();
        let first = chars.next().map(|c| c.to_ascii_uppercase()).unwrap_or_default();
        format!("{first}{}", chars.as_str())
    };
    let stage3 = if c.link.is_empty() {
        "Empty link".to_string()
    } else {
        format!(
            "Link L with {} components and {} tunnels (dashed)",
            c.link.len(),
            c.tunnels.count
        )
    };
    [
        render_graph_stage(&c.gamma0, &names, &stage1),
        render_graph_stage(&c.slid, &names, &stage2),
        render_link_stage(&c.link, &c.tunnels, &names, &stage3),
        render_kirby(&c.closed, &names),
    ]
}

fn emit(c: &Construction, what: &[Emit], dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let mut written = Vec::new();
    if what.contains(&Emit::Report) {
        written.push(write_atomic(dir, REPORT_FILE, &serialize_report(&Report::from(c)))?);
    }
    if what.contains(&Emit::SvgStages) || what.contains(&Emit::SvgKirby) {
        let [s1, s2, s3, k] = stage_svgs(c);
        if what.contains(&Emit::SvgStages) {
            for (name, svg) in STAGE_FILES.iter().zip([s1, s2, s3]) {
                written.push(write_atomic(dir, name, &svg)?);
            }
        }
        if what.contains(&Emit::SvgKirby) {
            written.push(write_atomic(dir, KIRBY_FILE, &k)?);
        }
    }
    Ok(written)
}

pub fn cmd_build(args: &BuildArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let (p, opts) = load(args)?;
    let c = construct(&p, &opts).map_err(pipeline_error)?;
    let what = if args.emit.is_empty() {
        vec![Emit::Report]
    } else {
        args.emit.clone()
    };
    emit(&c, &what, &args.out)?;
    let _ = writeln!(out, "{}", summary(&c));
    Ok(())
}

pub fn cmd_render(args: &BuildArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let (p, opts) = load(args)?;
    let c = construct(&p, &opts).map_err(pipeline_error)?;
    let what = if args.emit.is_empty() {
        vec![Emit::SvgStages, Emit::SvgKirby]
    } else {
        args.emit.clone()
    };
    for path in emit(&c, &what, &args.out)? {
        let _ = writeln!(out, "{}", path.display());
    }
    Ok(())
}

/// Rebuilds the construction from the report's presentation, framings and
/// stabilization, then compares every field.
pub fn verify_text(text: &str) -> Result<Construction, CliError> {
    let stored = deserialize_report(text).map_err(|e| match e {
        ReportError::Validation { ref field, .. } => CliError::Mismatch(vec![field.clone()]),
        other => CliError::Parse(format!("report error: {other}")),
    })?;
    let opts = Options {
        framings: mingenus::kirby::attaching_framings(&stored.diagram),
        stabilization: stored.diagram.stabilization,
    };
    let fresh = match construct(&stored.presentation, &opts) {
        Ok(c) => c,
        Err(PipelineError::Kirby(_)) => return Err(CliError::Mismatch(vec!["kirby.framings".into()])),
        Err(e) => return Err(pipeline_error(e)),
    };
    let diff = diff_reports(&Report::from(&fresh), &stored);
    if diff.is_empty() {
        Ok(fresh)
    } else {
        Err(CliError::Mismatch(diff))
    }
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let src = one_source(None, args.report.as_deref().or(args.file.as_deref()), "report")?;
    if args.report.is_some() && args.file.is_some() {
        return Err(CliError::Config("give either a report path or --file, not both".into()));
    }
    let fresh = verify_text(&src.read()?)?;
    let _ = writeln!(out, "verified: {}", summary(&fresh));
    Ok(())
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_CONFIG
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Build(a) => cmd_build(a, out),
        Command::Render(a) => cmd_render(a, out),
        Command::Verify(a) => cmd_verify(a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
