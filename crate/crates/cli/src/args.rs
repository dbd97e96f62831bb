use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use uiml_core::RenderTarget;

#[derive(Debug, Parser)]
#[command(
    name = "uiml",
    version,
    about = "Validate, transform, render and simulate UIML documents"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a document against its vocabulary.
    Validate(ValidateArgs),
    /// Convert a generic document into platform UIML.
    Transform(TransformArgs),
    /// Produce target text (HTML or a desktop widget tree).
    Render(RenderArgs),
    /// Run an event script through the behavior rules.
    Simulate(SimulateArgs),
    /// Serve the workbench API for one document.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    pub file: PathBuf,
    /// generic, html, mockdesk or a vocabulary file. Guessed from the
    /// document's classes when omitted.
    #[arg(long)]
    pub vocab: Option<String>,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    pub file: PathBuf,
    /// Shipped mapping id (generic-to-html, generic-to-mockdesk) or a
    /// mapping file.
    #[arg(long, default_value = "generic-to-html")]
    pub mapping: String,
    /// Output file; the source map goes next to it as `<out>.srcmap.json`.
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    pub file: PathBuf,
    #[arg(long, default_value = "html")]
    pub target: RenderTarget,
    #[arg(long)]
    pub style: Option<String>,
    #[arg(long)]
    pub content: Option<String>,
    /// Write here instead of standard output.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    pub file: PathBuf,
    /// JSON array of `{part, event_class, data}`.
    #[arg(long)]
    pub events: PathBuf,
    #[arg(long)]
    pub style: Option<String>,
    #[arg(long)]
    pub content: Option<String>,
    /// Print one JSON trace instead of effect lines.
    #[arg(long)]
    pub json: bool,
    #[arg(long, default_value_t = uiml_core::behavior::DEFAULT_EVENT_DEPTH_LIMIT)]
    pub depth_limit: usize,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value_t = 7878)]
    pub port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    pub host: String,
    /// Document to load into the session.
    #[arg(long)]
    pub open: PathBuf,
    /// Directory of workbench static files served at `/`.
    #[arg(long)]
    pub assets: Option<PathBuf>,
}
