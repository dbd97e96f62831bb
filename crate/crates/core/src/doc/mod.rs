//! The UIML document model: head metadata plus interfaces made of
//! structures, styles, content groups and behaviors.

mod parse;
mod serialize;
mod validate;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::diag::SourcePos;

pub use parse::{parse_document, ParseError};
pub use serialize::serialize_document;
pub use validate::validate;

/// Prefix carried by generic (family-wide) property and event names.
pub const GENERIC_PREFIX: &str = "g:";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UimlDocument {
    pub doc_name: Option<String>,
    pub head: Vec<MetaEntry>,
    pub interfaces: Vec<Interface>,
    /// `<peers>` and `<template>` blocks, kept verbatim.
    pub opaque: Vec<OpaqueElement>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MetaEntry {
    pub name: String,
    pub content: String,
}

/// An element this toolkit does not interpret but must not lose.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OpaqueElement {
    pub name: String,
    pub raw: String,
    pub loc: SourcePos,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Interface {
    pub name: String,
    pub structures: Vec<Structure>,
    pub styles: Vec<Style>,
    pub contents: Vec<ContentGroup>,
    pub behaviors: Vec<Behavior>,
    pub loc: SourcePos,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Structure {
    pub id: String,
    pub roots: Vec<Part>,
    pub loc: SourcePos,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Part {
    pub name: String,
    pub class: String,
    /// Fixed properties that define what the part is (an `input`'s `type`).
    /// They are not style and are never routed.
    pub intrinsic: Vec<IntrinsicProperty>,
    pub children: Vec<Part>,
    pub loc: SourcePos,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntrinsicProperty {
    pub name: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Style {
    pub id: String,
    pub source: Option<String>,
    pub properties: Vec<PropertyBinding>,
    pub loc: SourcePos,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", content = "name", rename_all = "lowercase")]
pub enum BindingTarget {
    Part(String),
    Class(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyBinding {
    pub target: BindingTarget,
    pub name: PropName,
    pub value: PropertyValue,
    pub loc: SourcePos,
}

/// A property name with an optional platform prefix (`g:title`, `h:link-color`,
/// `resizable`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct PropName(String);

impl PropName {
    pub fn new(name: impl Into<String>) -> Self {
        PropName(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The lowercased prefix including its colon, if any.
    pub fn prefix(&self) -> Option<String> {
        split_prefix(&self.0).0
    }

    pub fn local(&self) -> &str {
        split_prefix(&self.0).1
    }

    /// Prefix lowercased; the local name is untouched.
    pub fn normalized(&self) -> String {
        match split_prefix(&self.0) {
            (Some(prefix), local) => format!("{prefix}{local}"),
            (None, local) => local.to_string(),
        }
    }

    /// Unprefixed names are generic names.
    pub fn generic_key(&self) -> String {
        match split_prefix(&self.0) {
            (Some(prefix), local) => format!("{prefix}{local}"),
            (None, local) => format!("{GENERIC_PREFIX}{local}"),
        }
    }

    pub fn is_generic(&self) -> bool {
        matches!(self.prefix().as_deref(), None | Some(GENERIC_PREFIX))
    }
}

impl std::fmt::Display for PropName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

pub(crate) fn split_prefix(name: &str) -> (Option<String>, &str) {
    match name.find(':') {
        Some(i) if i > 0 => (Some(name[..=i].to_ascii_lowercase()), &name[i + 1..]),
        _ => (None, name),
    }
}

/// Either literal text or a whole-value reference `%constant-id%` into the
/// selected content group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum PropertyValue {
    Literal(String),
    Reference(String),
}

impl PropertyValue {
    pub fn from_text(text: &str) -> Self {
        match text
            .strip_prefix('%')
            .and_then(|rest| rest.strip_suffix('%'))
        {
            Some(id) if !id.is_empty() && !id.contains('%') => {
                PropertyValue::Reference(id.to_string())
            }
            _ => PropertyValue::Literal(text.to_string()),
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            PropertyValue::Literal(text) => text.clone(),
            PropertyValue::Reference(id) => format!("%{id}%"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContentGroup {
    pub id: String,
    pub constants: Vec<Constant>,
    pub loc: SourcePos,
}

impl ContentGroup {
    pub fn empty() -> Self {
        ContentGroup {
            id: String::new(),
            constants: Vec::new(),
            loc: SourcePos::default(),
        }
    }

    pub fn get(&self, id: &str) -> Option<&str> {
        self.constants
            .iter()
            .find(|c| c.id == id)
            .map(|c| c.value.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Constant {
    pub id: String,
    pub value: String,
    pub loc: SourcePos,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Behavior {
    pub rules: Vec<Rule>,
    pub loc: SourcePos,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rule {
    pub condition: Condition,
    pub actions: Vec<Action>,
    pub loc: SourcePos,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type")]
pub enum Condition {
    EventOccurs {
        part: String,
        event_class: String,
    },
    EventDataEquals {
        part: String,
        event_class: String,
        data_name: String,
        expected: String,
    },
}

impl Condition {
    pub fn part(&self) -> &str {
        match self {
            Condition::EventOccurs { part, .. } | Condition::EventDataEquals { part, .. } => part,
        }
    }

    pub fn event_class(&self) -> &str {
        match self {
            Condition::EventOccurs { event_class, .. }
            | Condition::EventDataEquals { event_class, .. } => event_class,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type")]
pub enum Action {
    SetProperty {
        part: String,
        prop: PropName,
        value: PropertyValue,
    },
    CallFunction {
        function: String,
        args: Vec<String>,
    },
    FireEvent {
        part: String,
        event_class: String,
        data: BTreeMap<String, String>,
    },
    Restructure {
        structure_id: String,
    },
}

impl UimlDocument {
    pub fn interface(&self, name: &str) -> Option<&Interface> {
        self.interfaces.iter().find(|i| i.name == name)
    }

    pub fn rule_count(&self) -> usize {
        self.interfaces
            .iter()
            .flat_map(|i| &i.behaviors)
            .map(|b| b.rules.len())
            .sum()
    }
}

impl Interface {
    pub fn structure(&self, id: &str) -> Option<&Structure> {
        self.structures.iter().find(|s| s.id == id)
    }

    pub fn style(&self, id: &str) -> Option<&Style> {
        self.styles.iter().find(|s| s.id == id)
    }

    pub fn content(&self, id: &str) -> Option<&ContentGroup> {
        self.contents.iter().find(|c| c.id == id)
    }

    pub fn rules(&self) -> impl Iterator<Item = &Rule> {
        self.behaviors.iter().flat_map(|b| &b.rules)
    }

    /// First part with this name across the structures, in document order.
    pub fn find_part(&self, name: &str) -> Option<&Part> {
        self.structures.iter().find_map(|s| s.find_part(name))
    }
}

impl Structure {
    /// Pre-order walk over every part.
    pub fn parts(&self) -> PartIter<'_> {
        PartIter {
            stack: self.roots.iter().rev().collect(),
        }
    }

    pub fn find_part(&self, name: &str) -> Option<&Part> {
        self.parts().find(|p| p.name == name)
    }

    pub fn part_count(&self) -> usize {
        self.parts().count()
    }
}

impl Part {
    pub fn new(name: impl Into<String>, class: impl Into<String>) -> Self {
        Part {
            name: name.into(),
            class: class.into(),
            intrinsic: Vec::new(),
            children: Vec::new(),
            loc: SourcePos::default(),
        }
    }

    pub fn with_children(mut self, children: Vec<Part>) -> Self {
        self.children = children;
        self
    }

    /// Pre-order walk starting at (and including) this part.
    pub fn walk(&self) -> PartIter<'_> {
        PartIter { stack: vec![self] }
    }
}

pub struct PartIter<'a> {
    stack: Vec<&'a Part>,
}

impl<'a> Iterator for PartIter<'a> {
    type Item = &'a Part;

    fn next(&mut self) -> Option<&'a Part> {
        let part = self.stack.pop()?;
        self.stack.extend(part.children.iter().rev());
        Some(part)
    }
}
