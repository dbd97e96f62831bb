//! A simulated runtime for behavior rules.
//!
//! Widgets mirror the active structure and carry the properties the style
//! gave them. Dispatching an event runs every matching rule in document
//! order; fired events cascade depth first.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::doc::{Action, Condition, ContentGroup, Interface, Part, UimlDocument};
use crate::style::{
    effective_props_for_part, resolve_value, EffectiveStyle, PropTable, StyleError,
};

pub const DEFAULT_EVENT_DEPTH_LIMIT: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BehaviorError {
    #[error("event cascade exceeded depth {limit} at `{part}` {event_class}")]
    EventCascadeOverflow {
        limit: usize,
        part: String,
        event_class: String,
    },
    #[error("part `{part}` is not in the active structure")]
    UnknownPart { part: String },
    #[error("unknown structure `{id}`")]
    UnknownStructure { id: String },
    #[error("unknown interface `{name}`")]
    UnknownInterface { name: String },
    #[error(transparent)]
    Style(#[from] StyleError),
}

impl BehaviorError {
    pub fn code(&self) -> &'static str {
        match self {
            BehaviorError::EventCascadeOverflow { .. } => "EventCascadeOverflow",
            BehaviorError::UnknownPart { .. } => "UnknownPart",
            BehaviorError::UnknownStructure { .. } => "UnknownStructure",
            BehaviorError::UnknownInterface { .. } => "UnknownInterface",
            BehaviorError::Style(e) => e.code(),
        }
    }
}

type Result<T> = std::result::Result<T, BehaviorError>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventInstance {
    pub part: String,
    pub event_class: String,
    #[serde(default)]
    pub data: BTreeMap<String, String>,
}

impl EventInstance {
    pub fn new(part: impl Into<String>, event_class: impl Into<String>) -> Self {
        EventInstance {
            part: part.into(),
            event_class: event_class.into(),
            data: BTreeMap::new(),
        }
    }

    pub fn with_data(mut self, name: impl Into<String>, value: impl Into<String>) -> Self {
        self.data.insert(name.into(), value.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type")]
pub enum ActionEffect {
    PropertySet {
        part: String,
        prop: String,
        old: Option<String>,
        new: String,
    },
    ExternalCall {
        function: String,
        args: Vec<String>,
    },
    EventFired(EventInstance),
    Restructured {
        from: String,
        to: String,
    },
}

impl std::fmt::Display for ActionEffect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ActionEffect::PropertySet {
                part,
                prop,
                old,
                new,
            } => write!(f, "PropertySet {part} {prop} {} {}", json(old), json(new)),
            ActionEffect::ExternalCall { function, args } => {
                write!(f, "ExternalCall {function} {}", json(args))
            }
            ActionEffect::EventFired(ev) => write!(
                f,
                "EventFired {} {} {}",
                ev.part,
                ev.event_class,
                json(&ev.data)
            ),
            ActionEffect::Restructured { from, to } => write!(f, "Restructured {from} {to}"),
        }
    }
}

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string(value).unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Widget {
    pub name: String,
    pub class: String,
    pub props: PropTable,
    pub children: Vec<Widget>,
}

impl Widget {
    fn seed(part: &Part, es: &EffectiveStyle) -> Widget {
        Widget {
            name: part.name.clone(),
            class: part.class.clone(),
            props: effective_props_for_part(es, part),
            children: part.children.iter().map(|c| Widget::seed(c, es)).collect(),
        }
    }

    fn find_mut(&mut self, name: &str) -> Option<&mut Widget> {
        if self.name == name {
            return Some(self);
        }
        self.children.iter_mut().find_map(|c| c.find_mut(name))
    }

    fn find(&self, name: &str) -> Option<&Widget> {
        if self.name == name {
            return Some(self);
        }
        self.children.iter().find_map(|c| c.find(name))
    }

    /// Pre-order names of this widget and its descendants.
    pub fn names(&self) -> Vec<&str> {
        let mut out = vec![self.name.as_str()];
        for child in &self.children {
            out.extend(child.names());
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExternalCall {
    pub function: String,
    pub args: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuntimeState {
    pub interface: String,
    pub active_structure: String,
    pub widgets: Vec<Widget>,
    /// Append-only.
    pub external_calls: Vec<ExternalCall>,
    pub event_depth_limit: usize,
    style: EffectiveStyle,
    content: ContentGroup,
}

impl RuntimeState {
    pub fn widget(&self, name: &str) -> Option<&Widget> {
        self.widgets.iter().find_map(|w| w.find(name))
    }

    fn widget_mut(&mut self, name: &str) -> Option<&mut Widget> {
        self.widgets.iter_mut().find_map(|w| w.find_mut(name))
    }

    pub fn widget_names(&self) -> Vec<&str> {
        self.widgets.iter().flat_map(|w| w.names()).collect()
    }

    pub fn with_depth_limit(mut self, limit: usize) -> Self {
        self.event_depth_limit = limit;
        self
    }

    fn build(&mut self, iface: &Interface, structure_id: &str) -> Result<()> {
        let structure =
            iface
                .structure(structure_id)
                .ok_or_else(|| BehaviorError::UnknownStructure {
                    id: structure_id.to_string(),
                })?;
        self.active_structure = structure.id.clone();
        self.widgets = structure
            .roots
            .iter()
            .map(|p| Widget::seed(p, &self.style))
            .collect();
        Ok(())
    }
}

/// A runtime over the first interface's first structure.
pub fn instantiate_runtime(doc: &UimlDocument, es: &EffectiveStyle) -> Result<RuntimeState> {
    let iface = &doc.interfaces[0];
    instantiate_for(doc, &iface.name, es)
}

pub fn instantiate_for(
    doc: &UimlDocument,
    interface: &str,
    es: &EffectiveStyle,
) -> Result<RuntimeState> {
    let iface = doc
        .interface(interface)
        .ok_or_else(|| BehaviorError::UnknownInterface {
            name: interface.to_string(),
        })?;
    let content = match &es.content_id {
        Some(id) => iface
            .content(id)
            .cloned()
            .ok_or_else(|| StyleError::UnknownContentGroup { id: id.clone() })?,
        None => ContentGroup::empty(),
    };
    let mut rt = RuntimeState {
        interface: iface.name.clone(),
        active_structure: String::new(),
        widgets: Vec::new(),
        external_calls: Vec::new(),
        event_depth_limit: DEFAULT_EVENT_DEPTH_LIMIT,
        style: es.clone(),
        content,
    };
    rt.build(iface, &iface.structures[0].id)?;
    Ok(rt)
}

/// Run every rule `ev` triggers. Effects come back in execution order.
///
/// On error the runtime is left exactly as it was before the call.
pub fn dispatch(
    rt: &mut RuntimeState,
    doc: &UimlDocument,
    ev: &EventInstance,
) -> Result<Vec<ActionEffect>> {
    let iface = doc
        .interface(&rt.interface)
        .ok_or_else(|| BehaviorError::UnknownInterface {
            name: rt.interface.clone(),
        })?;
    let saved = rt.clone();
    let mut effects = Vec::new();
    let outcome = Dispatcher {
        iface,
        rt: &mut *rt,
    }
    .fire(ev, 0, &mut effects);
    match outcome {
        Ok(()) => Ok(effects),
        Err(err) => {
            *rt = saved;
            Err(err)
        }
    }
}

struct Dispatcher<'a> {
    iface: &'a Interface,
    rt: &'a mut RuntimeState,
}

fn matches(condition: &Condition, ev: &EventInstance) -> bool {
    match condition {
        Condition::EventOccurs { part, event_class } => {
            *part == ev.part && *event_class == ev.event_class
        }
        Condition::EventDataEquals {
            part,
            event_class,
            data_name,
            expected,
        } => {
            *part == ev.part
                && *event_class == ev.event_class
                && ev.data.get(data_name) == Some(expected)
        }
    }
}

impl Dispatcher<'_> {
    fn require(&self, part: &str) -> Result<()> {
        match self.rt.widget(part) {
            Some(_) => Ok(()),
            None => Err(BehaviorError::UnknownPart {
                part: part.to_string(),
            }),
        }
    }

    fn fire(
        &mut self,
        ev: &EventInstance,
        depth: usize,
        effects: &mut Vec<ActionEffect>,
    ) -> Result<()> {
        self.require(&ev.part)?;
        let iface = self.iface;
        for rule in iface.rules().filter(|r| matches(&r.condition, ev)) {
            for action in &rule.actions {
                self.apply(action, depth, effects)?;
            }
        }
        Ok(())
    }

    fn apply(
        &mut self,
        action: &Action,
        depth: usize,
        effects: &mut Vec<ActionEffect>,
    ) -> Result<()> {
        match action {
            Action::SetProperty { part, prop, value } => {
                let new = resolve_value(value, &self.rt.content)?;
                let prop = prop.normalized();
                let widget = self
                    .rt
                    .widget_mut(part)
                    .ok_or_else(|| BehaviorError::UnknownPart { part: part.clone() })?;
                let old = widget.props.insert(prop.clone(), new.clone());
                effects.push(ActionEffect::PropertySet {
                    part: part.clone(),
                    prop,
                    old,
                    new,
                });
            }
            Action::CallFunction { function, args } => {
                self.rt.external_calls.push(ExternalCall {
                    function: function.clone(),
                    args: args.clone(),
                });
                effects.push(ActionEffect::ExternalCall {
                    function: function.clone(),
                    args: args.clone(),
                });
            }
            Action::FireEvent {
                part,
                event_class,
                data,
            } => {
                let nested = EventInstance {
                    part: part.clone(),
                    event_class: event_class.clone(),
                    data: data.clone(),
                };
                if depth + 1 > self.rt.event_depth_limit {
                    return Err(BehaviorError::EventCascadeOverflow {
                        limit: self.rt.event_depth_limit,
                        part: part.clone(),
                        event_class: event_class.clone(),
                    });
                }
                effects.push(ActionEffect::EventFired(nested.clone()));
                self.fire(&nested, depth + 1, effects)?;
            }
            Action::Restructure { structure_id } => {
                let from = self.rt.active_structure.clone();
                self.rt.build(self.iface, structure_id)?;
                effects.push(ActionEffect::Restructured {
                    from,
                    to: structure_id.clone(),
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doc::parse_document;
    use crate::style::resolve_for_render;

    fn setup(body: &str) -> (UimlDocument, RuntimeState) {
        let doc = parse_document(&format!(
            r#"<uiml><interface><structure id="main"><part name="W" class="G:TopContainer"><part name="OKBtn" class="G:Button"/><part name="ZipField" class="G:Text"/><part name="TitleLabel" class="G:Label"/></part></structure>
               <structure id="alt"><part name="W" class="G:TopContainer"><part name="Done" class="G:Label"/></part></structure>{body}</interface></uiml>"#
        ))
        .unwrap();
        let es = resolve_for_render(&doc.interfaces[0], None, None, None).unwrap();
        let rt = instantiate_runtime(&doc, &es).unwrap();
        (doc, rt)
    }

    #[test]
    fn direct_match_sets_property() {
        let (doc, mut rt) = setup(
            r#"<behavior><rule><condition><event part-name="OKBtn" class="g:click"/></condition>
               <action><property part-name="TitleLabel" name="g:text">Submitted</property></action></rule></behavior>"#,
        );
        let effects = dispatch(&mut rt, &doc, &EventInstance::new("OKBtn", "g:click")).unwrap();
        assert_eq!(
            effects,
            [ActionEffect::PropertySet {
                part: "TitleLabel".into(),
                prop: "g:text".into(),
                old: None,
                new: "Submitted".into()
            }]
        );
        assert_eq!(
            rt.widget("TitleLabel").unwrap().props["g:text"],
            "Submitted"
        );
        assert_eq!(
            effects[0].to_string(),
            r#"PropertySet TitleLabel g:text null "Submitted""#
        );
    }

    #[test]
    fn data_mismatch_is_neutral() {
        let (doc, mut rt) = setup(
            r#"<behavior><rule><condition><equal part-name="ZipField" class="g:change" data="value" value="00000"/></condition>
               <action><call name="warn"/></action></rule></behavior>"#,
        );
        let before = rt.clone();
        let ev = EventInstance::new("ZipField", "g:change").with_data("value", "11111");
        assert!(dispatch(&mut rt, &doc, &ev).unwrap().is_empty());
        assert_eq!(rt, before);

        let ev = EventInstance::new("ZipField", "g:change").with_data("value", "00000");
        let effects = dispatch(&mut rt, &doc, &ev).unwrap();
        assert_eq!(effects.len(), 1);
        assert_eq!(rt.external_calls.len(), 1);
    }

    #[test]
    fn unknown_part_leaves_runtime_alone() {
        let (doc, mut rt) = setup(
            r#"<behavior><rule><condition><event part-name="OKBtn" class="g:click"/></condition>
               <action><property part-name="TitleLabel" name="g:text">x</property><restructure structure="alt"/><property part-name="TitleLabel" name="g:text">y</property></action></rule></behavior>"#,
        );
        let before = rt.clone();
        let err = dispatch(&mut rt, &doc, &EventInstance::new("OKBtn", "g:click")).unwrap_err();
        assert_eq!(err.code(), "UnknownPart");
        assert_eq!(rt, before);
        let err = dispatch(&mut rt, &doc, &EventInstance::new("Ghost", "g:click")).unwrap_err();
        assert_eq!(err.code(), "UnknownPart");
    }

    #[test]
    fn restructure_swaps_widget_tree() {
        let (doc, mut rt) = setup(
            r#"<behavior><rule><condition><event part-name="OKBtn" class="g:click"/></condition>
               <action><restructure structure="alt"/></action></rule></behavior>"#,
        );
        let effects = dispatch(&mut rt, &doc, &EventInstance::new("OKBtn", "g:click")).unwrap();
        assert_eq!(
            effects,
            [ActionEffect::Restructured {
                from: "main".into(),
                to: "alt".into()
            }]
        );
        assert_eq!(rt.active_structure, "alt");
        assert_eq!(rt.widget_names(), ["W", "Done"]);
    }

    #[test]
    fn self_loop_overflows_at_the_limit() {
        let (doc, rt) = setup(
            r#"<behavior><rule><condition><event part-name="OKBtn" class="g:click"/></condition>
               <action><fire part-name="OKBtn" class="g:click"/></action></rule></behavior>"#,
        );
        for limit in [0, 1, 5, 32] {
            let mut rt = rt.clone().with_depth_limit(limit);
            let err = dispatch(&mut rt, &doc, &EventInstance::new("OKBtn", "g:click")).unwrap_err();
            assert_eq!(
                err,
                BehaviorError::EventCascadeOverflow {
                    limit,
                    part: "OKBtn".into(),
                    event_class: "g:click".into()
                }
            );
        }
    }
}
