//! Style resolution: walk a style's `source` chain, filter platform-specific
//! properties, substitute content constants, and compute what each part ends
//! up with.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::doc::{
    BindingTarget, ContentGroup, Interface, Part, PropName, PropertyBinding, PropertyValue, Style,
    GENERIC_PREFIX,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StyleError {
    #[error("unknown style `{id}`")]
    UnknownStyle { id: String },
    #[error("several styles ({}) and none was chosen", candidates.join(", "))]
    AmbiguousStyle { candidates: Vec<String> },
    #[error("unknown content group `{id}`")]
    UnknownContentGroup { id: String },
    #[error("constant `{id}` is not defined in content group `{group}`")]
    UnresolvedConstant { id: String, group: String },
}

impl StyleError {
    pub fn code(&self) -> &'static str {
        match self {
            StyleError::UnknownStyle { .. } => "UnknownStyle",
            StyleError::AmbiguousStyle { .. } => "AmbiguousStyle",
            StyleError::UnknownContentGroup { .. } => "UnknownContentGroup",
            StyleError::UnresolvedConstant { .. } => "UnresolvedConstant",
        }
    }
}

type Result<T> = std::result::Result<T, StyleError>;

pub type PropTable = BTreeMap<String, String>;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct EffectiveStyle {
    /// Empty when the interface has no style at all.
    pub style_id: String,
    /// The content group constants were drawn from, if any exists.
    pub content_id: Option<String>,
    pub part_props: BTreeMap<String, PropTable>,
    pub class_props: BTreeMap<String, PropTable>,
}

impl EffectiveStyle {
    /// Layer `bindings` on top; later bindings win on identical keys.
    pub fn apply(
        &mut self,
        bindings: &[PropertyBinding],
        content: &ContentGroup,
        target_prefix: Option<&str>,
    ) -> Result<()> {
        for binding in bindings {
            if !applies_to_platform(&binding.name, target_prefix) {
                continue;
            }
            let value = resolve_value(&binding.value, content)?;
            let table = match &binding.target {
                BindingTarget::Part(name) => self.part_props.entry(name.clone()).or_default(),
                BindingTarget::Class(name) => self.class_props.entry(name.clone()).or_default(),
            };
            table.insert(binding.name.normalized(), value);
        }
        Ok(())
    }
}

/// Generic and unprefixed properties apply everywhere; prefixed ones only on
/// their own platform. No target keeps everything.
pub fn applies_to_platform(prop: &PropName, target_prefix: Option<&str>) -> bool {
    match (prop.prefix(), target_prefix) {
        (_, None) | (None, _) => true,
        (Some(prefix), Some(target)) => {
            prefix == GENERIC_PREFIX || prefix.eq_ignore_ascii_case(target)
        }
    }
}

pub fn resolve_value(value: &PropertyValue, content: &ContentGroup) -> Result<String> {
    match value {
        PropertyValue::Literal(text) => Ok(text.clone()),
        PropertyValue::Reference(id) => {
            content
                .get(id)
                .map(str::to_string)
                .ok_or_else(|| StyleError::UnresolvedConstant {
                    id: id.clone(),
                    group: content.id.clone(),
                })
        }
    }
}

/// The named group, else the first one, else an empty group.
pub fn select_content(iface: &Interface, content_id: Option<&str>) -> Result<ContentGroup> {
    match content_id {
        Some(id) => iface
            .content(id)
            .cloned()
            .ok_or_else(|| StyleError::UnknownContentGroup { id: id.to_string() }),
        None => Ok(iface
            .contents
            .first()
            .cloned()
            .unwrap_or_else(ContentGroup::empty)),
    }
}

/// The style a render uses: the named one, or the only one. Several styles
/// and no choice is an error; no styles at all yields `None`.
pub fn select_style<'a>(iface: &'a Interface, style_id: Option<&str>) -> Result<Option<&'a Style>> {
    match style_id {
        Some(id) => iface
            .style(id)
            .map(Some)
            .ok_or_else(|| StyleError::UnknownStyle { id: id.to_string() }),
        None => match iface.styles.as_slice() {
            [] => Ok(None),
            [only] => Ok(Some(only)),
            many => Err(StyleError::AmbiguousStyle {
                candidates: many.iter().map(|s| s.id.clone()).collect(),
            }),
        },
    }
}

/// Styles from the root of `style_id`'s source chain down to `style_id`.
pub fn style_chain<'a>(iface: &'a Interface, style_id: &str) -> Result<Vec<&'a Style>> {
    let mut chain = Vec::new();
    let mut next = Some(style_id);
    while let Some(id) = next {
        let style = iface
            .style(id)
            .ok_or_else(|| StyleError::UnknownStyle { id: id.to_string() })?;
        // Parsing rejects cycles; this only guards hand-built documents.
        if chain.iter().any(|s: &&Style| s.id == style.id) {
            break;
        }
        chain.push(style);
        next = style.source.as_deref();
    }
    chain.reverse();
    Ok(chain)
}

pub fn resolve_style(
    iface: &Interface,
    style_id: &str,
    content_id: Option<&str>,
    target_prefix: Option<&str>,
) -> Result<EffectiveStyle> {
    let chain = style_chain(iface, style_id)?;
    let content = select_content(iface, content_id)?;
    let mut es = EffectiveStyle {
        style_id: style_id.to_string(),
        content_id: (!content.id.is_empty()).then(|| content.id.clone()),
        ..EffectiveStyle::default()
    };
    for style in chain {
        es.apply(&style.properties, &content, target_prefix)?;
    }
    Ok(es)
}

/// Select then resolve, the way a render does.
pub fn resolve_for_render(
    iface: &Interface,
    style_id: Option<&str>,
    content_id: Option<&str>,
    target_prefix: Option<&str>,
) -> Result<EffectiveStyle> {
    match select_style(iface, style_id)? {
        Some(style) => resolve_style(iface, &style.id, content_id, target_prefix),
        None => {
            let content = select_content(iface, content_id)?;
            Ok(EffectiveStyle {
                content_id: (!content.id.is_empty()).then(|| content.id.clone()),
                ..EffectiveStyle::default()
            })
        }
    }
}

/// Class-level properties overridden by part-level ones.
pub fn effective_props_for_part(es: &EffectiveStyle, part: &Part) -> PropTable {
    let mut props = es.class_props.get(&part.class).cloned().unwrap_or_default();
    if let Some(own) = es.part_props.get(&part.name) {
        props.extend(own.iter().map(|(k, v)| (k.clone(), v.clone())));
    }
    props
}
