//! The path from a loaded document to rendered text, shared by every front
//! end so that the same inputs always produce the same bytes.

use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::doc::UimlDocument;
use crate::render::{
    HtmlRenderer, MockDeskRenderer, RenderError, RenderOutput, RenderTarget, Renderer,
};
use crate::style::{resolve_for_render, EffectiveStyle, StyleError};
use crate::vocab::{builtin, MappingSet, Vocabulary};
use crate::xform::{transform, SourceMap, TransformError, TransformReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Style(#[from] StyleError),
    #[error(transparent)]
    Render(#[from] RenderError),
}

impl PipelineError {
    pub fn code(&self) -> &'static str {
        match self {
            PipelineError::Transform(e) => e.code(),
            PipelineError::Style(e) => e.code(),
            PipelineError::Render(e) => e.code(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Rendered {
    pub output: RenderOutput,
    pub source_map: SourceMap,
    /// `None` when the input was already platform-specific.
    pub report: Option<TransformReport>,
    #[serde(skip)]
    pub platform: UimlDocument,
    #[serde(skip)]
    pub style: EffectiveStyle,
}

/// Loaded vocabularies and mappings.
pub struct Toolkit {
    pub generic: Vocabulary,
    pub html: Vocabulary,
    pub mockdesk: Vocabulary,
    pub to_html: MappingSet,
    pub to_mockdesk: MappingSet,
    html_renderer: HtmlRenderer,
    mockdesk_renderer: MockDeskRenderer,
}

impl Toolkit {
    pub fn builtin() -> &'static Toolkit {
        static TOOLKIT: OnceLock<Toolkit> = OnceLock::new();
        TOOLKIT.get_or_init(|| Toolkit {
            generic: builtin::generic(),
            html: builtin::html(),
            mockdesk: builtin::mockdesk(),
            to_html: builtin::generic_to_html(),
            to_mockdesk: builtin::generic_to_mockdesk(),
            html_renderer: HtmlRenderer::new(builtin::html()),
            mockdesk_renderer: MockDeskRenderer::new(builtin::mockdesk()),
        })
    }

    pub fn vocabulary(&self, target: RenderTarget) -> &Vocabulary {
        match target {
            RenderTarget::Html => &self.html,
            RenderTarget::MockDesk => &self.mockdesk,
        }
    }

    pub fn mapping(&self, target: RenderTarget) -> &MappingSet {
        match target {
            RenderTarget::Html => &self.to_html,
            RenderTarget::MockDesk => &self.to_mockdesk,
        }
    }

    /// True when every part of every structure uses a generic class.
    pub fn is_generic(&self, doc: &UimlDocument) -> bool {
        doc.interfaces
            .iter()
            .flat_map(|i| &i.structures)
            .flat_map(|s| s.parts())
            .all(|p| self.generic.class(&p.class).is_some())
    }

    /// The vocabulary a document is written in: generic, else the first
    /// platform vocabulary that knows every class, else generic so the
    /// unknown classes get reported against it.
    pub fn vocabulary_for(&self, doc: &UimlDocument) -> &Vocabulary {
        let knows_all = |v: &Vocabulary| {
            doc.interfaces
                .iter()
                .flat_map(|i| &i.structures)
                .flat_map(|s| s.parts())
                .all(|p| v.class(&p.class).is_some())
        };
        [&self.html, &self.mockdesk]
            .into_iter()
            .find(|v| !self.is_generic(doc) && knows_all(v))
            .unwrap_or(&self.generic)
    }

    /// Transform unless already in the target vocabulary, resolve the style for the target, then render.
    pub fn render(
        &self,
        doc: &UimlDocument,
        target: RenderTarget,
        style: Option<&str>,
        content: Option<&str>,
    ) -> Result<Rendered, PipelineError> {
        let prefix = self.vocabulary(target).platform_prefix.as_str();
        let native = doc
            .interfaces
            .iter()
            .flat_map(|i| &i.structures)
            .flat_map(|s| s.parts())
            .all(|p| self.vocabulary(target).class(&p.class).is_some());
        // Anything not already written for the target goes through the
        // mapping, so stray classes surface as NotMapped with their part.
        let (platform, source_map, report) = if !native {
            let out = transform(doc, self.mapping(target), prefix)?;
            (out.document, out.source_map, Some(out.report))
        } else {
            (doc.clone(), SourceMap::default(), None)
        };
        let es = resolve_for_render(&platform.interfaces[0], style, content, Some(prefix))?;
        let renderer: &dyn Renderer = match target {
            RenderTarget::Html => &self.html_renderer,
            RenderTarget::MockDesk => &self.mockdesk_renderer,
        };
        let output = renderer.render(&platform, &es, &source_map)?;
        Ok(Rendered {
            output,
            source_map,
            report,
            platform,
            style: es,
        })
    }
}

/// [`Toolkit::render`] with the shipped vocabularies.
pub fn render_document(
    doc: &UimlDocument,
    target: RenderTarget,
    style: Option<&str>,
    content: Option<&str>,
) -> Result<Rendered, PipelineError> {
    Toolkit::builtin().render(doc, target, style, content)
}
