use std::collections::{BTreeMap, HashMap, HashSet};

use roxmltree::{Node, ParsingOptions};
use thiserror::Error;

use super::*;
use crate::diag::{Diagnostic, SourcePos};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("malformed XML: {message}")]
    MalformedXml {
        message: String,
        location: SourcePos,
    },
    #[error("unknown element <{name}>")]
    UnknownElement { name: String, location: SourcePos },
    #[error("<{element}> is missing required attribute `{attribute}`")]
    MissingAttribute {
        element: String,
        attribute: &'static str,
        location: SourcePos,
    },
    #[error("unexpected text inside <{element}>")]
    UnexpectedText {
        element: String,
        location: SourcePos,
    },
    #[error("part name `{name}` is used twice in structure `{structure}`")]
    DuplicatePartName {
        name: String,
        structure: String,
        location: SourcePos,
    },
    #[error("duplicate {kind} id `{id}`")]
    DuplicateId {
        kind: &'static str,
        id: String,
        location: SourcePos,
    },
    #[error("style `{style}` names missing source style `{source_id}`")]
    DanglingStyleSource {
        style: String,
        source_id: String,
        location: SourcePos,
    },
    #[error("style `{style}` is part of a source cycle")]
    StyleSourceCycle { style: String, location: SourcePos },
    #[error("{message}")]
    EmptyInterface {
        message: String,
        location: SourcePos,
    },
    #[error("rule has {message}")]
    MalformedRule {
        message: String,
        location: SourcePos,
    },
}

impl ParseError {
    pub fn code(&self) -> &'static str {
        match self {
            ParseError::MalformedXml { .. } => "MalformedXml",
            ParseError::UnknownElement { .. } => "UnknownElement",
            ParseError::MissingAttribute { .. } => "MissingAttribute",
            ParseError::UnexpectedText { .. } => "UnexpectedText",
            ParseError::DuplicatePartName { .. } => "DuplicatePartName",
            ParseError::DuplicateId { .. } => "DuplicateId",
            ParseError::DanglingStyleSource { .. } => "DanglingStyleSource",
            ParseError::StyleSourceCycle { .. } => "StyleSourceCycle",
            ParseError::EmptyInterface { .. } => "EmptyInterface",
            ParseError::MalformedRule { .. } => "MalformedRule",
        }
    }

    pub fn location(&self) -> SourcePos {
        match self {
            ParseError::MalformedXml { location, .. }
            | ParseError::UnknownElement { location, .. }
            | ParseError::MissingAttribute { location, .. }
            | ParseError::UnexpectedText { location, .. }
            | ParseError::DuplicatePartName { location, .. }
            | ParseError::DuplicateId { location, .. }
            | ParseError::DanglingStyleSource { location, .. }
            | ParseError::StyleSourceCycle { location, .. }
            | ParseError::EmptyInterface { location, .. }
            | ParseError::MalformedRule { location, .. } => *location,
        }
    }

    /// True when the input was not XML at all, as opposed to XML that breaks
    /// a document rule.
    pub fn is_malformed_xml(&self) -> bool {
        matches!(self, ParseError::MalformedXml { .. })
    }

    pub fn to_diagnostic(&self) -> Diagnostic {
        Diagnostic::error(self.code(), self.to_string(), self.location())
    }
}

type Result<T> = std::result::Result<T, ParseError>;

/// Parse UIML source text. A doctype is accepted and never resolved.
pub fn parse_document(source: &str) -> Result<UimlDocument> {
    let options = ParsingOptions {
        allow_dtd: true,
        ..ParsingOptions::default()
    };
    let xml = roxmltree::Document::parse_with_options(source, options).map_err(|err| {
        let pos = err.pos();
        ParseError::MalformedXml {
            message: err.to_string(),
            location: SourcePos::new(offset_of(source, pos.row, pos.col), pos.row, pos.col),
        }
    })?;
    let parser = Parser { xml: &xml, source };
    let doc = parser.document(xml.root_element())?;
    check_document(&doc)?;
    Ok(doc)
}

fn offset_of(source: &str, row: u32, col: u32) -> usize {
    let mut line_start = 0;
    for _ in 1..row {
        match source[line_start..].find('\n') {
            Some(i) => line_start += i + 1,
            None => return source.len(),
        }
    }
    source[line_start..]
        .char_indices()
        .nth(col.saturating_sub(1) as usize)
        .map(|(i, _)| line_start + i)
        .unwrap_or(source.len())
}

struct Parser<'a, 'input> {
    xml: &'a roxmltree::Document<'input>,
    source: &'a str,
}

impl<'a, 'input> Parser<'a, 'input> {
    fn pos(&self, node: Node) -> SourcePos {
        let offset = node.range().start;
        let text_pos = self.xml.text_pos_at(offset);
        SourcePos::new(offset, text_pos.row, text_pos.col)
    }

    fn unknown(&self, node: Node) -> ParseError {
        ParseError::UnknownElement {
            name: node.tag_name().name().to_string(),
            location: self.pos(node),
        }
    }

    fn required(&self, node: Node, attribute: &'static str) -> Result<String> {
        node.attribute(attribute)
            .map(str::to_string)
            .ok_or_else(|| ParseError::MissingAttribute {
                element: node.tag_name().name().to_string(),
                attribute,
                location: self.pos(node),
            })
    }

    /// Element children; non-whitespace text is rejected.
    fn elements<'n>(&self, node: Node<'n, 'input>) -> Result<Vec<Node<'n, 'input>>> {
        let mut out = Vec::new();
        for child in node.children() {
            if child.is_element() {
                out.push(child);
            } else if child.is_text() && !child.text().unwrap_or("").trim().is_empty() {
                return Err(ParseError::UnexpectedText {
                    element: node.tag_name().name().to_string(),
                    location: self.pos(child),
                });
            }
        }
        Ok(out)
    }

    /// Text content of a leaf element; child elements are rejected.
    fn text(&self, node: Node) -> Result<String> {
        let mut out = String::new();
        for child in node.children() {
            if child.is_element() {
                return Err(self.unknown(child));
            }
            if let Some(text) = child.text() {
                out.push_str(text);
            }
        }
        Ok(out)
    }

    fn document(&self, root: Node) -> Result<UimlDocument> {
        if root.tag_name().name() != "uiml" {
            return Err(self.unknown(root));
        }
        let mut doc = UimlDocument {
            doc_name: root.attribute("name").map(str::to_string),
            head: Vec::new(),
            interfaces: Vec::new(),
            opaque: Vec::new(),
        };
        for child in self.elements(root)? {
            match child.tag_name().name() {
                "head" => {
                    for meta in self.elements(child)? {
                        if meta.tag_name().name() != "meta" {
                            return Err(self.unknown(meta));
                        }
                        doc.head.push(MetaEntry {
                            name: self.required(meta, "name")?,
                            content: meta.attribute("content").unwrap_or("").to_string(),
                        });
                    }
                }
                "interface" => {
                    let ordinal = doc.interfaces.len() + 1;
                    doc.interfaces.push(self.interface(child, ordinal)?);
                }
                "peers" | "template" => doc.opaque.push(OpaqueElement {
                    name: child.tag_name().name().to_string(),
                    raw: self.source[child.range()].to_string(),
                    loc: self.pos(child),
                }),
                _ => return Err(self.unknown(child)),
            }
        }
        if doc.interfaces.is_empty() {
            return Err(ParseError::EmptyInterface {
                message: "document has no <interface>".into(),
                location: self.pos(root),
            });
        }
        Ok(doc)
    }

    fn interface(&self, node: Node, ordinal: usize) -> Result<Interface> {
        let mut iface = Interface {
            name: node
                .attribute("name")
                .map(str::to_string)
                .unwrap_or_else(|| format!("interface-{ordinal}")),
            structures: Vec::new(),
            styles: Vec::new(),
            contents: Vec::new(),
            behaviors: Vec::new(),
            loc: self.pos(node),
        };
        // Bindings without a part or class target attach to the initial
        // structure's root; that is only known once every child is read.
        let mut untargeted: Vec<(usize, usize)> = Vec::new();
        for child in self.elements(node)? {
            match child.tag_name().name() {
                "structure" => {
                    let ordinal = iface.structures.len() + 1;
                    iface.structures.push(self.structure(child, ordinal)?);
                }
                "style" => {
                    let ordinal = iface.styles.len() + 1;
                    let (style, missing) = self.style(child, ordinal)?;
                    let index = iface.styles.len();
                    untargeted.extend(missing.into_iter().map(|p| (index, p)));
                    iface.styles.push(style);
                }
                "content" => {
                    let ordinal = iface.contents.len() + 1;
                    iface.contents.push(self.content(child, ordinal)?);
                }
                "behavior" => iface.behaviors.push(self.behavior(child)?),
                _ => return Err(self.unknown(child)),
            }
        }
        let root_name = iface
            .structures
            .first()
            .and_then(|s| s.roots.first())
            .map(|p| p.name.clone());
        let Some(root_name) = root_name else {
            return Err(ParseError::EmptyInterface {
                message: format!("interface `{}` has no structure with parts", iface.name),
                location: iface.loc,
            });
        };
        for (style, prop) in untargeted {
            iface.styles[style].properties[prop].target = BindingTarget::Part(root_name.clone());
        }
        Ok(iface)
    }

    fn structure(&self, node: Node, ordinal: usize) -> Result<Structure> {
        let roots = self
            .elements(node)?
            .into_iter()
            .map(|child| self.part(child))
            .collect::<Result<Vec<_>>>()?;
        Ok(Structure {
            id: node
                .attribute("id")
                .map(str::to_string)
                .unwrap_or_else(|| format!("structure-{ordinal}")),
            roots,
            loc: self.pos(node),
        })
    }

    fn part(&self, node: Node) -> Result<Part> {
        if node.tag_name().name() != "part" {
            return Err(self.unknown(node));
        }
        let mut part = Part {
            name: self.required(node, "name")?,
            class: self.required(node, "class")?,
            intrinsic: Vec::new(),
            children: Vec::new(),
            loc: self.pos(node),
        };
        if part.class.is_empty() {
            return Err(ParseError::MissingAttribute {
                element: "part".into(),
                attribute: "class",
                location: part.loc,
            });
        }
        for child in self.elements(node)? {
            match child.tag_name().name() {
                "part" => part.children.push(self.part(child)?),
                "property" => part.intrinsic.push(IntrinsicProperty {
                    name: self.property_name(child)?,
                    value: self.text(child)?,
                }),
                _ => return Err(self.unknown(child)),
            }
        }
        Ok(part)
    }

    /// `name` is canonical; `id` is accepted as an alias.
    fn property_name(&self, node: Node) -> Result<String> {
        node.attribute("name")
            .or_else(|| node.attribute("id"))
            .map(str::to_string)
            .ok_or_else(|| ParseError::MissingAttribute {
                element: "property".into(),
                attribute: "name",
                location: self.pos(node),
            })
    }

    fn style(&self, node: Node, ordinal: usize) -> Result<(Style, Vec<usize>)> {
        let mut style = Style {
            id: node
                .attribute("id")
                .map(str::to_string)
                .unwrap_or_else(|| format!("style-{ordinal}")),
            source: node.attribute("source").map(str::to_string),
            properties: Vec::new(),
            loc: self.pos(node),
        };
        let mut untargeted = Vec::new();
        for child in self.elements(node)? {
            if child.tag_name().name() != "property" {
                return Err(self.unknown(child));
            }
            let target = match (child.attribute("part-name"), child.attribute("part-class")) {
                (Some(part), _) => BindingTarget::Part(part.to_string()),
                (None, Some(class)) => BindingTarget::Class(class.to_string()),
                (None, None) => {
                    untargeted.push(style.properties.len());
                    BindingTarget::Part(String::new())
                }
            };
            style.properties.push(PropertyBinding {
                target,
                name: PropName::new(self.property_name(child)?),
                value: PropertyValue::from_text(&self.text(child)?),
                loc: self.pos(child),
            });
        }
        Ok((style, untargeted))
    }

    fn content(&self, node: Node, ordinal: usize) -> Result<ContentGroup> {
        let mut group = ContentGroup {
            id: node
                .attribute("id")
                .map(str::to_string)
                .unwrap_or_else(|| format!("content-{ordinal}")),
            constants: Vec::new(),
            loc: self.pos(node),
        };
        for child in self.elements(node)? {
            if child.tag_name().name() != "constant" {
                return Err(self.unknown(child));
            }
            let id = child
                .attribute("id")
                .or_else(|| child.attribute("name"))
                .map(str::to_string)
                .ok_or_else(|| ParseError::MissingAttribute {
                    element: "constant".into(),
                    attribute: "id",
                    location: self.pos(child),
                })?;
            group.constants.push(Constant {
                id,
                value: self.text(child)?,
                loc: self.pos(child),
            });
        }
        Ok(group)
    }

    fn behavior(&self, node: Node) -> Result<Behavior> {
        let mut rules = Vec::new();
        for child in self.elements(node)? {
            if child.tag_name().name() != "rule" {
                return Err(self.unknown(child));
            }
            rules.push(self.rule(child)?);
        }
        Ok(Behavior {
            rules,
            loc: self.pos(node),
        })
    }

    fn rule(&self, node: Node) -> Result<Rule> {
        let loc = self.pos(node);
        let mut condition = None;
        let mut actions = Vec::new();
        for child in self.elements(node)? {
            match child.tag_name().name() {
                "condition" => {
                    if condition.is_some() {
                        return Err(ParseError::MalformedRule {
                            message: "more than one <condition>".into(),
                            location: self.pos(child),
                        });
                    }
                    condition = Some(self.condition(child)?);
                }
                "action" => {
                    for action in self.elements(child)? {
                        actions.push(self.action(action)?);
                    }
                }
                _ => return Err(self.unknown(child)),
            }
        }
        let condition = condition.ok_or_else(|| ParseError::MalformedRule {
            message: "no <condition>".into(),
            location: loc,
        })?;
        if actions.is_empty() {
            return Err(ParseError::MalformedRule {
                message: "no actions".into(),
                location: loc,
            });
        }
        Ok(Rule {
            condition,
            actions,
            loc,
        })
    }

    fn condition(&self, node: Node) -> Result<Condition> {
        let inner = self.elements(node)?;
        let [test] = inner.as_slice() else {
            return Err(ParseError::MalformedRule {
                message: "a <condition> that does not hold exactly one test".into(),
                location: self.pos(node),
            });
        };
        let part = self.required(*test, "part-name")?;
        let event_class = self.required(*test, "class")?;
        match test.tag_name().name() {
            "event" => Ok(Condition::EventOccurs { part, event_class }),
            "equal" => Ok(Condition::EventDataEquals {
                part,
                event_class,
                data_name: self.required(*test, "data")?,
                expected: self.required(*test, "value")?,
            }),
            _ => Err(self.unknown(*test)),
        }
    }

    fn action(&self, node: Node) -> Result<Action> {
        match node.tag_name().name() {
            "property" => Ok(Action::SetProperty {
                part: self.required(node, "part-name")?,
                prop: PropName::new(self.property_name(node)?),
                value: PropertyValue::from_text(&self.text(node)?),
            }),
            "call" => {
                let mut args = Vec::new();
                for param in self.elements(node)? {
                    if param.tag_name().name() != "param" {
                        return Err(self.unknown(param));
                    }
                    args.push(self.text(param)?);
                }
                Ok(Action::CallFunction {
                    function: self.required(node, "name")?,
                    args,
                })
            }
            "fire" => {
                let mut data = BTreeMap::new();
                for item in self.elements(node)? {
                    if item.tag_name().name() != "data" {
                        return Err(self.unknown(item));
                    }
                    data.insert(self.required(item, "name")?, self.text(item)?);
                }
                Ok(Action::FireEvent {
                    part: self.required(node, "part-name")?,
                    event_class: self.required(node, "class")?,
                    data,
                })
            }
            "restructure" => Ok(Action::Restructure {
                structure_id: self.required(node, "structure")?,
            }),
            _ => Err(self.unknown(node)),
        }
    }
}

fn unique<'a, I>(kind: &'static str, items: I) -> Result<()>
where
    I: IntoIterator<Item = (&'a str, SourcePos)>,
{
    let mut seen = HashSet::new();
    for (id, location) in items {
        if !seen.insert(id) {
            return Err(ParseError::DuplicateId {
                kind,
                id: id.to_string(),
                location,
            });
        }
    }
    Ok(())
}

fn check_document(doc: &UimlDocument) -> Result<()> {
    unique(
        "interface",
        doc.interfaces.iter().map(|i| (i.name.as_str(), i.loc)),
    )?;
    for iface in &doc.interfaces {
        unique(
            "structure",
            iface.structures.iter().map(|s| (s.id.as_str(), s.loc)),
        )?;
        unique("style", iface.styles.iter().map(|s| (s.id.as_str(), s.loc)))?;
        unique(
            "content",
            iface.contents.iter().map(|c| (c.id.as_str(), c.loc)),
        )?;
        for group in &iface.contents {
            unique(
                "constant",
                group.constants.iter().map(|c| (c.id.as_str(), c.loc)),
            )?;
        }
        for structure in &iface.structures {
            let mut seen = HashSet::new();
            for part in structure.parts() {
                if !seen.insert(part.name.as_str()) {
                    return Err(ParseError::DuplicatePartName {
                        name: part.name.clone(),
                        structure: structure.id.clone(),
                        location: part.loc,
                    });
                }
            }
        }
        check_style_sources(iface)?;
    }
    Ok(())
}

fn check_style_sources(iface: &Interface) -> Result<()> {
    let by_id: HashMap<&str, &Style> = iface.styles.iter().map(|s| (s.id.as_str(), s)).collect();
    for style in &iface.styles {
        if let Some(source) = &style.source {
            if !by_id.contains_key(source.as_str()) {
                return Err(ParseError::DanglingStyleSource {
                    style: style.id.clone(),
                    source_id: source.clone(),
                    location: style.loc,
                });
            }
        }
    }
    for style in &iface.styles {
        let mut visited = HashSet::new();
        let mut current = Some(style);
        while let Some(s) = current {
            if !visited.insert(s.id.as_str()) {
                return Err(ParseError::StyleSourceCycle {
                    style: style.id.clone(),
                    location: style.loc,
                });
            }
            current = s.source.as_deref().and_then(|id| by_id.get(id).copied());
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"<uiml><interface><structure><part name="Only" class="G:TopContainer"/></structure></interface></uiml>"#;

    fn wrap(body: &str) -> String {
        format!(
            "<uiml><interface name=\"I\"><structure><part name=\"Root\" class=\"G:TopContainer\"><part name=\"Btn\" class=\"G:Button\"/></part></structure>{body}</interface></uiml>"
        )
    }

    #[test]
    fn minimal_document() {
        let doc = parse_document(MINIMAL).unwrap();
        assert_eq!(doc.interfaces.len(), 1);
        let iface = &doc.interfaces[0];
        assert_eq!(iface.name, "interface-1");
        assert_eq!(iface.structures[0].id, "structure-1");
        assert_eq!(iface.structures[0].roots.len(), 1);
        assert_eq!(iface.structures[0].part_count(), 1);
    }

    #[test]
    fn doctype_is_accepted_and_not_fetched() {
        let src = format!(
            "<?xml version=\"1.0\"?>\n<!DOCTYPE uiml PUBLIC \"-//Harmonia//DTD UIML 2.0 Draft//EN\"\n  \"http://example.invalid/UIML2_0g.dtd\">\n{MINIMAL}"
        );
        assert!(parse_document(&src).is_ok());
    }

    #[test]
    fn locations_point_at_elements() {
        let src = "<uiml>\n  <interface>\n    <structure>\n      <part name=\"A\" class=\"G:Area\"/>\n    </structure>\n  </interface>\n</uiml>\n";
        let doc = parse_document(src).unwrap();
        let part = &doc.interfaces[0].structures[0].roots[0];
        assert_eq!((part.loc.line, part.loc.column), (4, 7));
        assert_eq!(&src[part.loc.offset..part.loc.offset + 5], "<part");
    }

    #[test]
    fn malformed_xml_has_location() {
        let err = parse_document("<uiml>\n  <interface>\n</uiml>").unwrap_err();
        assert_eq!(err.code(), "MalformedXml");
        assert_eq!(err.location().line, 3);
    }

    #[test]
    fn unknown_element() {
        let err = parse_document(&wrap("<gadget/>")).unwrap_err();
        assert!(matches!(err, ParseError::UnknownElement { ref name, .. } if name == "gadget"));
    }

    #[test]
    fn duplicate_part_name() {
        let src = r#"<uiml><interface><structure><part name="A" class="G:Area"><part name="A" class="G:Label"/></part></structure></interface></uiml>"#;
        assert_eq!(parse_document(src).unwrap_err().code(), "DuplicatePartName");
    }

    #[test]
    fn same_part_name_in_different_structures_is_fine() {
        let src = r#"<uiml><interface><structure><part name="A" class="G:Area"/></structure><structure><part name="A" class="G:Area"/></structure></interface></uiml>"#;
        let doc = parse_document(src).unwrap();
        assert_eq!(doc.interfaces[0].structures[1].id, "structure-2");
    }

    #[test]
    fn dangling_and_cyclic_sources() {
        let dangling = wrap(r#"<style id="a" source="nowhere"/>"#);
        assert_eq!(
            parse_document(&dangling).unwrap_err().code(),
            "DanglingStyleSource"
        );
        let cycle = wrap(
            r#"<style id="a" source="b"/><style id="b" source="c"/><style id="c" source="a"/>"#,
        );
        assert_eq!(
            parse_document(&cycle).unwrap_err().code(),
            "StyleSourceCycle"
        );
        let self_cycle = wrap(r#"<style id="a" source="a"/>"#);
        assert_eq!(
            parse_document(&self_cycle).unwrap_err().code(),
            "StyleSourceCycle"
        );
    }

    #[test]
    fn empty_interface() {
        let err = parse_document("<uiml><interface name=\"x\"/></uiml>").unwrap_err();
        assert_eq!(err.code(), "EmptyInterface");
        let err = parse_document("<uiml><head/></uiml>").unwrap_err();
        assert_eq!(err.code(), "EmptyInterface");
    }

    #[test]
    fn duplicate_ids() {
        let styles = wrap(r#"<style id="a"/><style id="a"/>"#);
        assert_eq!(parse_document(&styles).unwrap_err().code(), "DuplicateId");
        let constants = wrap(
            r#"<content id="en"><constant id="x">1</constant><constant id="x">2</constant></content>"#,
        );
        assert_eq!(
            parse_document(&constants).unwrap_err().code(),
            "DuplicateId"
        );
    }

    #[test]
    fn untargeted_property_binds_to_initial_root() {
        let doc = parse_document(&wrap(
            r#"<style id="s"><property id="g:title">T</property></style>"#,
        ))
        .unwrap();
        let binding = &doc.interfaces[0].styles[0].properties[0];
        assert_eq!(binding.target, BindingTarget::Part("Root".into()));
        assert_eq!(binding.name.as_str(), "g:title");
    }

    #[test]
    fn behavior_forms() {
        let doc = parse_document(&wrap(
            r#"<behavior><rule>
                 <condition><equal part-name="Btn" class="g:change" data="value" value="0"/></condition>
                 <action>
                   <property part-name="Btn" name="g:text">%label%</property>
                   <call name="f"><param>a</param><param>b &amp; c</param></call>
                   <fire part-name="Btn" class="g:click"><data name="k">v</data></fire>
                   <restructure structure="structure-1"/>
                 </action>
               </rule></behavior>"#,
        ))
        .unwrap();
        let rule = &doc.interfaces[0].behaviors[0].rules[0];
        assert!(
            matches!(rule.condition, Condition::EventDataEquals { ref expected, .. } if expected == "0")
        );
        assert_eq!(rule.actions.len(), 4);
        assert_eq!(
            rule.actions[0],
            Action::SetProperty {
                part: "Btn".into(),
                prop: PropName::new("g:text"),
                value: PropertyValue::Reference("label".into())
            }
        );
        assert_eq!(
            rule.actions[1],
            Action::CallFunction {
                function: "f".into(),
                args: vec!["a".into(), "b & c".into()]
            }
        );
    }

    #[test]
    fn rule_needs_condition_and_action() {
        let no_action = wrap(
            r#"<behavior><rule><condition><event part-name="Btn" class="g:click"/></condition></rule></behavior>"#,
        );
        assert_eq!(
            parse_document(&no_action).unwrap_err().code(),
            "MalformedRule"
        );
        let no_condition =
            wrap(r#"<behavior><rule><action><call name="f"/></action></rule></behavior>"#);
        assert_eq!(
            parse_document(&no_condition).unwrap_err().code(),
            "MalformedRule"
        );
    }

    #[test]
    fn peers_and_template_are_kept_verbatim() {
        let src = r#"<uiml><interface><structure><part name="A" class="G:Area"/></structure></interface><peers><presentation base="Java"/></peers><template id="t">x</template></uiml>"#;
        let doc = parse_document(src).unwrap();
        assert_eq!(doc.opaque.len(), 2);
        assert_eq!(
            doc.opaque[0].raw,
            r#"<peers><presentation base="Java"/></peers>"#
        );
        assert_eq!(doc.opaque[1].name, "template");
    }
}
