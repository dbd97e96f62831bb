//! Local HTTP service for the workbench: one session per served file.

pub mod api;
pub mod session;

use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use axum::response::Html;
use axum::routing::get;
use axum::Router;
use tokio::sync::Mutex;
use tower_http::services::ServeDir;

pub use api::{router, ApiError, SharedSession};
pub use session::{RenderSettings, Session, Snapshot};

use crate::args::ServeArgs;
use crate::commands::CliError;

const PLACEHOLDER_INDEX: &str = "<!DOCTYPE html>
<html>
  <head><title>UIML workbench</title></head>
  <body>
    <p>The workbench API is served under <code>/api</code>. Start the server with
    <code>--assets</code> pointing at a built workbench to use the browser UI.</p>
  </body>
</html>
";

/// Open `text` as a session and build the whole app around it.
pub fn app(text: String, assets: Option<&Path>) -> Result<Router, ApiError> {
    let session: SharedSession = Arc::new(Mutex::new(Session::open(text)?));
    let api = router(session);
    Ok(match assets {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api.route("/", get(|| async { Html(PLACEHOLDER_INDEX) })),
    })
}

pub fn run(args: &ServeArgs, err: &mut dyn Write) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.open)
        .map_err(|e| CliError::env(format!("{}: {e}", args.open.display())))?;
    let app = app(text, args.assets.as_deref()).map_err(|e| {
        CliError::domain(format!("{}: {} {}", args.open.display(), e.code, e.message))
    })?;
    let runtime = tokio::runtime::Runtime::new().map_err(|e| CliError::env(e.to_string()))?;
    runtime.block_on(async {
        let addr = format!("{}:{}", args.host, args.port);
        let listener = tokio::net::TcpListener::bind(&addr)
            .await
            .map_err(|e| CliError::env(format!("cannot listen on {addr}: {e}")))?;
        let local = listener
            .local_addr()
            .map_err(|e| CliError::env(e.to_string()))?;
        let _ = writeln!(err, "serving {} on http://{local}", args.open.display());
        let _ = err.flush();
        axum::serve(listener, app)
            .await
            .map_err(|e| CliError::env(e.to_string()))
    })
}
