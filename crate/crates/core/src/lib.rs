//! Parse, transform, style, simulate and render UIML user interfaces.

pub mod behavior;
pub mod diag;
pub mod doc;
pub mod pipeline;
pub mod render;
pub mod style;
#[cfg(feature = "testgen")]
pub mod testgen;
pub mod vocab;
pub mod xform;

pub use behavior::{dispatch, instantiate_runtime, ActionEffect, EventInstance, RuntimeState};
pub use diag::{Diagnostic, Severity, SourcePos};
pub use doc::{parse_document, serialize_document, validate, UimlDocument};
pub use pipeline::{render_document, Rendered, Toolkit};
pub use render::{RenderOutput, RenderTarget};
pub use style::{resolve_for_render, EffectiveStyle};
pub use xform::{transform, SourceMap, TransformOutput};
