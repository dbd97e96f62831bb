use std::collections::BTreeMap;

use serde::Serialize;

use super::{origin, rendered_roots, RenderError, RenderOutput, RenderTarget, Renderer};
use crate::doc::{Part, UimlDocument};
use crate::style::{effective_props_for_part, EffectiveStyle};
use crate::vocab::{builtin, Vocabulary};
use crate::xform::SourceMap;

pub struct MockDeskRenderer {
    vocab: Vocabulary,
}

impl MockDeskRenderer {
    pub fn new(vocab: Vocabulary) -> Self {
        MockDeskRenderer { vocab }
    }
}

impl Default for MockDeskRenderer {
    fn default() -> Self {
        MockDeskRenderer::new(builtin::mockdesk())
    }
}

pub fn render_mockdesk(
    doc: &UimlDocument,
    es: &EffectiveStyle,
    sm: &SourceMap,
) -> Result<RenderOutput, RenderError> {
    MockDeskRenderer::default().render(doc, es, sm)
}

// Field order is alphabetical so the serialized keys come out sorted.
#[derive(Serialize)]
struct Node {
    children: Vec<Node>,
    class: String,
    name: String,
    props: BTreeMap<String, String>,
    src: String,
}

impl Renderer for MockDeskRenderer {
    fn target(&self) -> RenderTarget {
        RenderTarget::MockDesk
    }

    fn render(
        &self,
        doc: &UimlDocument,
        es: &EffectiveStyle,
        sm: &SourceMap,
    ) -> Result<RenderOutput, RenderError> {
        let mut annotations = BTreeMap::new();
        let mut nodes = rendered_roots(doc)
            .iter()
            .map(|p| self.node(p, es, sm, &mut annotations))
            .collect::<Result<Vec<_>, _>>()?;
        let mut text = if nodes.len() == 1 {
            serde_json::to_string_pretty(&nodes.remove(0))
        } else {
            serde_json::to_string_pretty(&nodes)
        }
        .expect("widget trees always serialize");
        text.push('\n');
        Ok(RenderOutput {
            text,
            annotations,
            target: RenderTarget::MockDesk.output_id().to_string(),
        })
    }
}

impl MockDeskRenderer {
    fn node(
        &self,
        part: &Part,
        es: &EffectiveStyle,
        sm: &SourceMap,
        annotations: &mut BTreeMap<String, String>,
    ) -> Result<Node, RenderError> {
        if self.vocab.class(&part.class).is_none() {
            return Err(RenderError::UnknownMockClass {
                part: part.name.clone(),
                class: part.class.clone(),
            });
        }
        let src = origin(sm, &part.name).to_string();
        annotations.insert(part.name.clone(), src.clone());
        let mut props: BTreeMap<String, String> = part
            .intrinsic
            .iter()
            .map(|p| (p.name.clone(), p.value.clone()))
            .collect();
        props.extend(effective_props_for_part(es, part));
        let children = part
            .children
            .iter()
            .map(|c| self.node(c, es, sm, annotations))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Node {
            children,
            class: part.class.clone(),
            name: part.name.clone(),
            props,
            src,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doc::parse_document;

    #[test]
    fn empty_frame_shape() {
        let doc = parse_document(
            r#"<uiml><interface><structure><part name="F" class="Frame"/></structure></interface></uiml>"#,
        )
        .unwrap();
        let out = render_mockdesk(&doc, &EffectiveStyle::default(), &SourceMap::default()).unwrap();
        let expected = "{\n  \"children\": [],\n  \"class\": \"Frame\",\n  \"name\": \"F\",\n  \"props\": {},\n  \"src\": \"F\"\n}\n";
        assert_eq!(out.text, expected);
        assert_eq!(out.target, "mockdesk-json");
    }

    #[test]
    fn values_survive_a_json_round_trip() {
        let doc = parse_document(
            r#"<uiml><interface><structure><part name="F" class="Frame"><part name="L" class="Label"/></part></structure><style id="s"><property part-name="L" name="g:text">a "quoted" &lt;value&gt; &amp; \ back</property></style></interface></uiml>"#,
        )
        .unwrap();
        let es = crate::style::resolve_for_render(&doc.interfaces[0], None, None, None).unwrap();
        let out = render_mockdesk(&doc, &es, &SourceMap::default()).unwrap();
        let value: serde_json::Value = serde_json::from_str(&out.text).unwrap();
        assert_eq!(
            value["children"][0]["props"]["g:text"],
            r#"a "quoted" <value> & \ back"#
        );
    }

    #[test]
    fn html_class_is_rejected() {
        let doc = parse_document(
            r#"<uiml><interface><structure><part name="D" class="div"/></structure></interface></uiml>"#,
        )
        .unwrap();
        let err =
            render_mockdesk(&doc, &EffectiveStyle::default(), &SourceMap::default()).unwrap_err();
        assert_eq!(err.code(), "UnknownMockClass");
    }
}
