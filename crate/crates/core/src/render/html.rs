use std::collections::BTreeMap;
use std::fmt::Write;

use super::{origin, rendered_roots, RenderError, RenderOutput, RenderTarget, Renderer};
use crate::doc::{Part, UimlDocument};
use crate::style::{effective_props_for_part, EffectiveStyle, PropTable};
use crate::vocab::{builtin, Vocabulary};
use crate::xform::SourceMap;

const VOID_ELEMENTS: [&str; 5] = ["base", "img", "input", "link", "meta"];

pub struct HtmlRenderer {
    vocab: Vocabulary,
}

impl HtmlRenderer {
    pub fn new(vocab: Vocabulary) -> Self {
        HtmlRenderer { vocab }
    }
}

impl Default for HtmlRenderer {
    fn default() -> Self {
        HtmlRenderer::new(builtin::html())
    }
}

pub fn render_html(
    doc: &UimlDocument,
    es: &EffectiveStyle,
    sm: &SourceMap,
) -> Result<RenderOutput, RenderError> {
    HtmlRenderer::default().render(doc, es, sm)
}

impl Renderer for HtmlRenderer {
    fn target(&self) -> RenderTarget {
        RenderTarget::Html
    }

    fn render(
        &self,
        doc: &UimlDocument,
        es: &EffectiveStyle,
        sm: &SourceMap,
    ) -> Result<RenderOutput, RenderError> {
        let mut out = HtmlWriter {
            vocab: &self.vocab,
            es,
            sm,
            text: String::from("<!DOCTYPE html>\n"),
            annotations: BTreeMap::new(),
        };
        for root in rendered_roots(doc) {
            out.element(root, 0)?;
        }
        Ok(RenderOutput {
            text: out.text,
            annotations: out.annotations,
            target: RenderTarget::Html.output_id().to_string(),
        })
    }
}

struct HtmlWriter<'a> {
    vocab: &'a Vocabulary,
    es: &'a EffectiveStyle,
    sm: &'a SourceMap,
    text: String,
    annotations: BTreeMap<String, String>,
}

struct Element {
    attrs: BTreeMap<String, String>,
    text: Option<String>,
}

/// Split a part's properties into attributes and text content. Only a small
/// fixed set renders visually; everything else is kept in `data-uiml-props`.
fn lay_out(part: &Part, props: PropTable, src: &str) -> Element {
    let tag = part.class.as_str();
    let void = VOID_ELEMENTS.contains(&tag);
    let mut attrs: BTreeMap<String, String> = part
        .intrinsic
        .iter()
        .map(|p| (p.name.clone(), p.value.clone()))
        .collect();
    attrs.insert("data-uiml-part".into(), part.name.clone());
    attrs.insert("data-uiml-src".into(), src.to_string());
    let mut text = None;
    let mut rest = BTreeMap::new();
    for (name, value) in props {
        match name.as_str() {
            "g:title" if tag == "title" => text = Some(value),
            "g:title" => {
                attrs.insert("title".into(), value);
            }
            "g:text" if !void => text = Some(value),
            "g:text" if tag == "input" => {
                attrs.insert("value".into(), value);
            }
            "g:text" if tag == "img" => {
                attrs.insert("alt".into(), value);
            }
            "g:background" => {
                attrs.insert("style".into(), format!("background-color: {value};"));
            }
            "h:link-color" if tag == "style" => text = Some(format!("a {{ color: {value}; }}")),
            _ => {
                rest.insert(name, value);
            }
        }
    }
    if !rest.is_empty() {
        attrs.insert(
            "data-uiml-props".into(),
            serde_json::to_string(&rest).unwrap_or_default(),
        );
    }
    Element { attrs, text }
}

impl HtmlWriter<'_> {
    fn indent(&mut self, depth: usize) {
        for _ in 0..depth {
            self.text.push_str("  ");
        }
    }

    fn element(&mut self, part: &Part, depth: usize) -> Result<(), RenderError> {
        if self.vocab.class(&part.class).is_none() {
            return Err(RenderError::UnknownHtmlClass {
                part: part.name.clone(),
                class: part.class.clone(),
            });
        }
        let src = origin(self.sm, &part.name).to_string();
        self.annotations.insert(part.name.clone(), src.clone());
        let tag = part.class.to_ascii_lowercase();
        let element = lay_out(part, effective_props_for_part(self.es, part), &src);

        self.indent(depth);
        let _ = write!(self.text, "<{tag}");
        for (name, value) in &element.attrs {
            let _ = write!(self.text, " {name}=\"{}\"", escape_attr(value));
        }
        self.text.push('>');
        if VOID_ELEMENTS.contains(&tag.as_str()) {
            self.text.push('\n');
            return Ok(());
        }
        if part.children.is_empty() {
            if let Some(text) = &element.text {
                self.text.push_str(&escape_text(text));
            }
        } else {
            self.text.push('\n');
            if let Some(text) = &element.text {
                self.indent(depth + 1);
                self.text.push_str(&escape_text(text));
                self.text.push('\n');
            }
            for child in &part.children {
                self.element(child, depth + 1)?;
            }
            self.indent(depth);
        }
        let _ = writeln!(self.text, "</{tag}>");
        Ok(())
    }
}

fn escape_text(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn escape_attr(text: &str) -> String {
    escape_text(text).replace('"', "&quot;")
}
