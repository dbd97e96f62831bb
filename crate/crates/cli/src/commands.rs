use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;
use uiml_core::behavior::{dispatch, instantiate_runtime, ActionEffect, EventInstance};
use uiml_core::doc::parse_document;
use uiml_core::vocab::{builtin, load_mapping, load_vocabulary, MappingSet, Vocabulary};
use uiml_core::{render_document, resolve_for_render, serialize_document, transform, validate};
use uiml_core::{Toolkit, UimlDocument};

use crate::args::{Cli, Command, RenderArgs, SimulateArgs, TransformArgs, ValidateArgs};

pub const EXIT_OK: u8 = 0;
/// The input is understood but wrong: validation, mapping, style, behavior.
pub const EXIT_DOMAIN: u8 = 1;
/// Files, sockets, or text that is not XML at all.
pub const EXIT_ENV: u8 = 2;

#[derive(Debug)]
pub struct CliError {
    pub exit: u8,
    pub message: String,
}

impl CliError {
    pub fn domain(message: impl Into<String>) -> Self {
        CliError {
            exit: EXIT_DOMAIN,
            message: message.into(),
        }
    }

    pub fn env(message: impl Into<String>) -> Self {
        CliError {
            exit: EXIT_ENV,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Run one command. Returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let result = match cli.command {
        Command::Validate(a) => cmd_validate(&a, err),
        Command::Transform(a) => cmd_transform(&a, err),
        Command::Render(a) => cmd_render(&a, out),
        Command::Simulate(a) => cmd_simulate(&a, out),
        Command::Serve(a) => crate::serve::run(&a, err),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            e.exit
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::env(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| CliError::env(format!("{}: {e}", path.display())))
}

/// Parse a document. Text that is not well-formed XML is an environment
/// failure; a UIML-level mistake is a domain one.
pub fn load_document(path: &Path) -> Result<UimlDocument> {
    let text = read(path)?;
    parse_document(&text).map_err(|e| {
        let line = format!("{}: {}", path.display(), e.to_diagnostic());
        if e.is_malformed_xml() {
            CliError::env(line)
        } else {
            CliError::domain(line)
        }
    })
}

fn vocabulary(choice: Option<&str>, doc: &UimlDocument) -> Result<Vocabulary> {
    let toolkit = Toolkit::builtin();
    match choice {
        None => Ok(toolkit.vocabulary_for(doc).clone()),
        Some("generic") => Ok(toolkit.generic.clone()),
        Some("html") => Ok(toolkit.html.clone()),
        Some("mockdesk") => Ok(toolkit.mockdesk.clone()),
        Some(path) => load_vocabulary(path).map_err(|e| CliError::env(format!("{path}: {e}"))),
    }
}

pub fn cmd_validate(args: &ValidateArgs, err: &mut dyn Write) -> Result<()> {
    let doc = load_document(&args.file)?;
    let vocab = vocabulary(args.vocab.as_deref(), &doc)?;
    let diagnostics = validate(&doc, &vocab);
    for d in &diagnostics {
        let _ = writeln!(err, "{}: {d}", args.file.display());
    }
    let errors = diagnostics.iter().filter(|d| d.is_error()).count();
    if errors > 0 {
        return Err(CliError::domain(format!(
            "{}: {errors} error(s)",
            args.file.display()
        )));
    }
    Ok(())
}

/// A shipped mapping id or a mapping file whose `to` names a shipped
/// platform vocabulary.
pub fn resolve_mapping(choice: &str) -> Result<MappingSet> {
    if let Some(ms) = builtin::mapping(choice) {
        return Ok(ms);
    }
    let text = read(Path::new(choice))?;
    let to = serde_json::from_str::<serde_json::Value>(&text)
        .ok()
        .and_then(|v| v.get("to").and_then(|t| t.as_str()).map(str::to_string))
        .ok_or_else(|| CliError::env(format!("{choice}: not a mapping file")))?;
    let target = builtin::target_vocabulary(&to)
        .ok_or_else(|| CliError::env(format!("{choice}: unknown target vocabulary `{to}`")))?;
    load_mapping(choice, &builtin::generic(), &target)
        .map_err(|e| CliError::env(format!("{choice}: {e}")))
}

pub fn srcmap_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".srcmap.json");
    PathBuf::from(name)
}

pub fn cmd_transform(args: &TransformArgs, err: &mut dyn Write) -> Result<()> {
    let doc = load_document(&args.file)?;
    let ms = resolve_mapping(&args.mapping)?;
    let out = transform(&doc, &ms, &ms.target_prefix)
        .map_err(|e| CliError::domain(format!("{}: {} {e}", args.file.display(), e.code())))?;
    for w in &out.report.warnings {
        let _ = writeln!(err, "{}: {w}", args.file.display());
    }
    for d in &out.report.dropped_properties {
        let _ = writeln!(
            err,
            "{}: dropped {} on {}: {}",
            args.file.display(),
            d.prop,
            d.target,
            d.reason
        );
    }
    write(&args.output, &serialize_document(&out.document))?;
    let map = serde_json::to_string_pretty(&out.source_map).expect("source maps serialize");
    write(&srcmap_path(&args.output), &format!("{map}\n"))
}

pub fn cmd_render(args: &RenderArgs, out: &mut dyn Write) -> Result<()> {
    let doc = load_document(&args.file)?;
    let rendered = render_document(
        &doc,
        args.target,
        args.style.as_deref(),
        args.content.as_deref(),
    )
    .map_err(|e| CliError::domain(format!("{}: {} {e}", args.file.display(), e.code())))?;
    match &args.output {
        Some(path) => write(path, &rendered.output.text),
        None => out
            .write_all(rendered.output.text.as_bytes())
            .map_err(|e| CliError::env(e.to_string())),
    }
}

#[derive(Serialize)]
struct TraceStep<'a> {
    event: &'a EventInstance,
    effects: Vec<ActionEffect>,
}

pub fn cmd_simulate(args: &SimulateArgs, out: &mut dyn Write) -> Result<()> {
    let doc = load_document(&args.file)?;
    let script = read(&args.events)?;
    let events: Vec<EventInstance> = serde_json::from_str(&script)
        .map_err(|e| CliError::env(format!("{}: {e}", args.events.display())))?;
    let domain = |code: &str, e: &dyn fmt::Display| {
        CliError::domain(format!("{}: {code} {e}", args.file.display()))
    };
    let es = resolve_for_render(
        &doc.interfaces[0],
        args.style.as_deref(),
        args.content.as_deref(),
        None,
    )
    .map_err(|e| domain(e.code(), &e))?;
    let mut rt = instantiate_runtime(&doc, &es)
        .map_err(|e| domain(e.code(), &e))?
        .with_depth_limit(args.depth_limit);

    let mut trace = Vec::new();
    let mut failure = None;
    for ev in &events {
        match dispatch(&mut rt, &doc, ev) {
            Ok(effects) => {
                if !args.json {
                    for effect in &effects {
                        let _ = writeln!(out, "{effect}");
                    }
                }
                trace.push(TraceStep { event: ev, effects });
            }
            Err(e) => {
                failure = Some(domain(e.code(), &e));
                break;
            }
        }
    }
    if args.json {
        let report = json!({
            "trace": trace,
            "active_structure": rt.active_structure,
            "external_calls": rt.external_calls,
            "error": failure.as_ref().map(|f| f.message.clone()),
        });
        let _ = writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&report).unwrap_or_default()
        );
    }
    match failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}
