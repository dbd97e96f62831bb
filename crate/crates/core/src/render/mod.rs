//! Deterministic compilation of a platform document into target text.
//!
//! Every emitted node carries the name of the part it renders and the
//! generic part that part came from, so a viewer can map clicks both ways
//! without positional bookkeeping.

mod html;
mod mockdesk;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::doc::{Part, UimlDocument};
use crate::style::EffectiveStyle;
use crate::xform::SourceMap;

pub use html::{render_html, HtmlRenderer};
pub use mockdesk::{render_mockdesk, MockDeskRenderer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RenderTarget {
    Html,
    #[serde(rename = "mockdesk")]
    MockDesk,
}

impl RenderTarget {
    pub const ALL: [RenderTarget; 2] = [RenderTarget::Html, RenderTarget::MockDesk];

    pub fn id(self) -> &'static str {
        match self {
            RenderTarget::Html => "html",
            RenderTarget::MockDesk => "mockdesk",
        }
    }

    /// Identifier stored in [`RenderOutput::target`].
    pub fn output_id(self) -> &'static str {
        match self {
            RenderTarget::Html => "html",
            RenderTarget::MockDesk => "mockdesk-json",
        }
    }
}

impl fmt::Display for RenderTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for RenderTarget {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "html" => Ok(RenderTarget::Html),
            "mockdesk" | "mockdesk-json" => Ok(RenderTarget::MockDesk),
            other => Err(format!(
                "unknown target `{other}` (expected html or mockdesk)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("part `{part}` has class `{class}`, which is not an HTML element")]
    UnknownHtmlClass { part: String, class: String },
    #[error("part `{part}` has class `{class}`, which is not a desktop widget")]
    UnknownMockClass { part: String, class: String },
}

impl RenderError {
    pub fn code(&self) -> &'static str {
        match self {
            RenderError::UnknownHtmlClass { .. } => "UnknownHtmlClass",
            RenderError::UnknownMockClass { .. } => "UnknownMockClass",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RenderOutput {
    pub text: String,
    /// Rendered node id (the platform part name) to generic origin.
    pub annotations: BTreeMap<String, String>,
    pub target: String,
}

/// A compiler from platform UIML to one target language.
pub trait Renderer {
    fn target(&self) -> RenderTarget;

    fn render(
        &self,
        doc: &UimlDocument,
        es: &EffectiveStyle,
        sm: &SourceMap,
    ) -> Result<RenderOutput, RenderError>;
}

/// The parts a render covers: the first structure of the first interface.
pub(crate) fn rendered_roots(doc: &UimlDocument) -> &[Part] {
    doc.interfaces
        .first()
        .and_then(|i| i.structures.first())
        .map(|s| s.roots.as_slice())
        .unwrap_or(&[])
}

/// Origin of a part; a part nobody generated is its own origin.
pub(crate) fn origin<'a>(sm: &'a SourceMap, part: &'a str) -> &'a str {
    sm.origin(part).unwrap_or(part)
}
