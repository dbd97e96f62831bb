use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use uiml_core::behavior::{
    dispatch, instantiate_runtime, ActionEffect, EventInstance, RuntimeState,
};
use uiml_core::doc::{
    parse_document, BindingTarget, PropName, PropertyBinding, PropertyValue, Style,
};
use uiml_core::pipeline::{PipelineError, Rendered};
use uiml_core::render::{RenderOutput, RenderTarget};
use uiml_core::vocab::builtin;
use uiml_core::xform::{SourceMap, TransformOutput};
use uiml_core::{
    resolve_for_render, serialize_document, transform, SourcePos, Toolkit, UimlDocument,
};
use uuid::Uuid;

use super::api::ApiError;

/// Style created by a property edit when the document has none.
pub const WORKBENCH_STYLE: &str = "workbench";

#[derive(Debug, Clone, Serialize)]
pub struct Snapshot {
    pub ordinal: usize,
    pub document_text: String,
    pub render_output: Option<RenderOutput>,
    pub source_map: Option<SourceMap>,
    pub label: String,
    /// Milliseconds since the Unix epoch.
    pub timestamp: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RenderSettings {
    pub target: RenderTarget,
    pub style: Option<String>,
    pub content: Option<String>,
}

impl Default for RenderSettings {
    fn default() -> Self {
        RenderSettings {
            target: RenderTarget::Html,
            style: None,
            content: None,
        }
    }
}

/// One open document and everything done to it.
pub struct Session {
    pub id: Uuid,
    text: String,
    doc: UimlDocument,
    history: Vec<Snapshot>,
    settings: RenderSettings,
    last_render: Option<Rendered>,
    runtime: Option<RuntimeState>,
}

fn now_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

fn parse(text: &str) -> Result<UimlDocument, ApiError> {
    parse_document(text)
        .map_err(|e| ApiError::validation(e.code(), e.to_string(), Some(e.location())))
}

impl Session {
    pub fn open(text: String) -> Result<Session, ApiError> {
        let doc = parse(&text)?;
        let mut session = Session {
            id: Uuid::new_v4(),
            text,
            doc,
            history: Vec::new(),
            settings: RenderSettings::default(),
            last_render: None,
            runtime: None,
        };
        session.snapshot("initial load".into());
        Ok(session)
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn document(&self) -> &UimlDocument {
        &self.doc
    }

    pub fn history(&self) -> &[Snapshot] {
        &self.history
    }

    pub fn settings(&self) -> &RenderSettings {
        &self.settings
    }

    pub fn last_render(&self) -> Option<&Rendered> {
        self.last_render.as_ref()
    }

    /// Record the current text, rendered with the current settings when
    /// that succeeds.
    fn snapshot(&mut self, label: String) -> &Snapshot {
        let rendered = self.render_with(&self.settings.clone()).ok();
        self.history.push(Snapshot {
            ordinal: self.history.len(),
            document_text: self.text.clone(),
            render_output: rendered.as_ref().map(|r| r.output.clone()),
            source_map: rendered.map(|r| r.source_map),
            label,
            timestamp: now_ms(),
        });
        self.history.last().unwrap()
    }

    fn install(&mut self, text: String, doc: UimlDocument, label: String) -> &Snapshot {
        self.text = text;
        self.doc = doc;
        self.runtime = None;
        self.snapshot(label)
    }

    pub fn replace(&mut self, text: String) -> Result<&Snapshot, ApiError> {
        let doc = parse(&text)?;
        Ok(self.install(text, doc, "document replaced".into()))
    }

    /// Bind `prop` on `part` in the active style, creating the style when the
    /// document has none. The document text is re-serialized.
    pub fn set_property(
        &mut self,
        part: &str,
        prop: &str,
        value: &str,
    ) -> Result<&Snapshot, ApiError> {
        if prop.trim().is_empty() {
            return Err(ApiError::domain("EmptyProperty", "property name is empty"));
        }
        let mut doc = self.doc.clone();
        let active = self.active_style();
        let iface = &mut doc.interfaces[0];
        if iface.find_part(part).is_none() {
            return Err(ApiError::domain(
                "UnknownPart",
                format!("no part named `{part}`"),
            ));
        }
        let style_id = match active {
            Some(id) => id,
            None => {
                iface.styles.push(Style {
                    id: WORKBENCH_STYLE.into(),
                    source: None,
                    properties: Vec::new(),
                    loc: SourcePos::default(),
                });
                WORKBENCH_STYLE.into()
            }
        };
        let style = iface.styles.iter_mut().find(|s| s.id == style_id).unwrap();
        let name = PropName::new(prop);
        let target = BindingTarget::Part(part.to_string());
        let value = PropertyValue::from_text(value);
        match style
            .properties
            .iter_mut()
            .rev()
            .find(|b| b.target == target && b.name.normalized() == name.normalized())
        {
            Some(binding) => binding.value = value,
            None => style.properties.push(PropertyBinding {
                target,
                name,
                value,
                loc: SourcePos::default(),
            }),
        }
        let text = serialize_document(&doc);
        Ok(self.install(text, doc, format!("set {part} {prop}")))
    }

    /// The style named by the last render, else the first one declared.
    fn active_style(&self) -> Option<String> {
        let iface = &self.doc.interfaces[0];
        self.settings
            .style
            .clone()
            .filter(|id| iface.style(id).is_some())
            .or_else(|| iface.styles.first().map(|s| s.id.clone()))
    }

    fn render_with(&self, settings: &RenderSettings) -> Result<Rendered, PipelineError> {
        Toolkit::builtin().render(
            &self.doc,
            settings.target,
            settings.style.as_deref(),
            settings.content.as_deref(),
        )
    }

    pub fn render(&mut self, settings: RenderSettings) -> Result<&Rendered, ApiError> {
        let rendered = self
            .render_with(&settings)
            .map_err(|e| ApiError::domain(e.code(), e.to_string()))?;
        if settings.style.is_some() || settings.content.is_some() {
            self.runtime = None;
        }
        self.settings = settings;
        Ok(self.last_render.insert(rendered))
    }

    /// Only shipped mappings: the API never reads files named by a client.
    pub fn transform(&self, mapping: &str) -> Result<TransformOutput, ApiError> {
        let ms = builtin::mapping(mapping).ok_or_else(|| {
            ApiError::domain("UnknownMapping", format!("no shipped mapping `{mapping}`"))
        })?;
        transform(&self.doc, &ms, &ms.target_prefix)
            .map_err(|e| ApiError::domain(e.code(), e.to_string()))
    }

    pub fn event(
        &mut self,
        ev: &EventInstance,
    ) -> Result<(Vec<ActionEffect>, &RuntimeState), ApiError> {
        if self.runtime.is_none() {
            let es = resolve_for_render(
                &self.doc.interfaces[0],
                self.settings.style.as_deref(),
                self.settings.content.as_deref(),
                None,
            )
            .map_err(|e| ApiError::domain(e.code(), e.to_string()))?;
            let rt = instantiate_runtime(&self.doc, &es)
                .map_err(|e| ApiError::domain(e.code(), e.to_string()))?;
            self.runtime = Some(rt);
        }
        let rt = self.runtime.as_mut().unwrap();
        let effects =
            dispatch(rt, &self.doc, ev).map_err(|e| ApiError::domain(e.code(), e.to_string()))?;
        Ok((effects, rt))
    }

    /// Bring back an earlier text as a new snapshot; history only grows.
    pub fn restore(&mut self, ordinal: usize) -> Result<&Snapshot, ApiError> {
        let text = self
            .history
            .get(ordinal)
            .map(|s| s.document_text.clone())
            .ok_or_else(|| ApiError::domain("UnknownSnapshot", format!("no snapshot {ordinal}")))?;
        let doc = parse(&text)?;
        Ok(self.install(text, doc, format!("restored {ordinal}")))
    }
}
