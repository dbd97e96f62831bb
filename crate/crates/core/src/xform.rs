//! Generic-to-platform transformation.
//!
//! Each generic part is replaced, depth first, by the target parts its
//! mapping entry lists. Style bindings and behavior rules follow the entry's
//! property and event routes so they land on the right generated part.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::diag::{Diagnostic, SourcePos};
use crate::doc::{
    Action, Behavior, BindingTarget, Condition, Interface, IntrinsicProperty, Part, PropName,
    PropertyBinding, Rule, Structure, Style, UimlDocument, GENERIC_PREFIX,
};
use crate::vocab::{MappingEntry, MappingSet};

/// At most one of these may appear in a structure.
pub const TOP_CONTAINER_CLASS: &str = "G:TopContainer";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("part `{part}` has class `{class}`, which has no mapping entry")]
    NotMapped {
        part: String,
        class: String,
        location: SourcePos,
    },
    #[error("property `{prop}` on `{target}` has no route for class `{class}`")]
    UnroutableProperty {
        target: String,
        prop: String,
        class: String,
    },
    #[error("event `{event}` on `{part}` has no route for class `{class}`")]
    UnroutableEvent {
        part: String,
        event: String,
        class: String,
    },
    #[error("part `{part}` has children but class `{class}` maps to no container")]
    NoChildAnchor {
        part: String,
        class: String,
        location: SourcePos,
    },
    #[error("reference to missing part `{part}`")]
    UnknownPart { part: String },
    #[error("structure `{structure}` holds more than one {TOP_CONTAINER_CLASS}")]
    MultipleTopContainers { structure: String },
}

impl TransformError {
    pub fn code(&self) -> &'static str {
        match self {
            TransformError::NotMapped { .. } => "NotMapped",
            TransformError::UnroutableProperty { .. } => "UnroutableProperty",
            TransformError::UnroutableEvent { .. } => "UnroutableEvent",
            TransformError::NoChildAnchor { .. } => "NoChildAnchor",
            TransformError::UnknownPart { .. } => "UnknownPart",
            TransformError::MultipleTopContainers { .. } => "MultipleTopContainers",
        }
    }
}

type Result<T> = std::result::Result<T, TransformError>;

/// Generated part name to the generic part it came from.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SourceMap {
    pub entries: BTreeMap<String, String>,
}

impl SourceMap {
    pub fn origin(&self, target: &str) -> Option<&str> {
        self.entries.get(target).map(String::as_str)
    }

    /// Every generated part whose origin is `generic`.
    pub fn images<'a>(&'a self, generic: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.entries
            .iter()
            .filter(move |(_, origin)| origin.as_str() == generic)
            .map(|(target, _)| target.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DroppedProperty {
    pub target: String,
    pub prop: String,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TransformReport {
    pub dropped_properties: Vec<DroppedProperty>,
    pub translated_events: usize,
    pub warnings: Vec<Diagnostic>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformOutput {
    pub document: UimlDocument,
    pub source_map: SourceMap,
    pub report: TransformReport,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RouteOutcome {
    Routed { index: usize, name: String },
    Dropped { reason: String },
}

/// Where a property lands inside `entry`'s expansion.
///
/// Generic and unprefixed names follow the entry's property routes; names
/// carrying the target prefix follow its platform routes (template 0 when
/// unlisted); names for any other platform are dropped.
pub fn route_property(
    prop: &PropName,
    entry: &MappingEntry,
    target_prefix: &str,
) -> Result<RouteOutcome> {
    match prop.prefix() {
        None => generic_route(prop, entry),
        Some(p) if p == GENERIC_PREFIX => generic_route(prop, entry),
        Some(p) if p.eq_ignore_ascii_case(target_prefix) => {
            let key = prop.normalized();
            Ok(match entry.platform_routes.get(&key) {
                Some(route) => RouteOutcome::Routed {
                    index: route.index,
                    name: route.property.clone(),
                },
                None => RouteOutcome::Routed {
                    index: 0,
                    name: key,
                },
            })
        }
        Some(p) => Ok(RouteOutcome::Dropped {
            reason: format!("`{p}` properties do not apply to `{target_prefix}` targets"),
        }),
    }
}

fn generic_route(prop: &PropName, entry: &MappingEntry) -> Result<RouteOutcome> {
    entry
        .property_routes
        .get(&prop.generic_key())
        .map(|route| RouteOutcome::Routed {
            index: route.index,
            name: route.property.clone(),
        })
        .ok_or_else(|| TransformError::UnroutableProperty {
            target: String::new(),
            prop: prop.to_string(),
            class: entry.class.clone(),
        })
}

/// Same contract as [`route_property`], for event names.
pub fn route_event(event: &str, entry: &MappingEntry, target_prefix: &str) -> Result<RouteOutcome> {
    let name = PropName::new(event);
    match name.prefix() {
        Some(p) if p != GENERIC_PREFIX && p.eq_ignore_ascii_case(target_prefix) => {
            Ok(RouteOutcome::Routed {
                index: 0,
                name: name.normalized(),
            })
        }
        Some(p) if p != GENERIC_PREFIX => Ok(RouteOutcome::Dropped {
            reason: format!("`{p}` events do not exist on `{target_prefix}` targets"),
        }),
        _ => entry
            .event_routes
            .get(&name.generic_key())
            .map(|route| RouteOutcome::Routed {
                index: route.index,
                name: route.event.clone(),
            })
            .ok_or_else(|| TransformError::UnroutableEvent {
                part: String::new(),
                event: event.to_string(),
                class: entry.class.clone(),
            }),
    }
}

pub fn transform(
    doc: &UimlDocument,
    ms: &MappingSet,
    target_prefix: &str,
) -> Result<TransformOutput> {
    let mut source_map = SourceMap::default();
    let mut report = TransformReport::default();
    let mut interfaces = Vec::with_capacity(doc.interfaces.len());
    for iface in &doc.interfaces {
        interfaces.push(
            InterfaceTransform {
                ms,
                target_prefix,
                names: Vec::new(),
                report: &mut report,
            }
            .run(iface, &mut source_map)?,
        );
    }
    let document = UimlDocument {
        doc_name: doc.doc_name.clone(),
        head: doc.head.clone(),
        interfaces,
        opaque: doc.opaque.clone(),
    };
    Ok(TransformOutput {
        document,
        source_map,
        report,
    })
}

/// What one generic part turned into.
struct Expanded<'a> {
    class: &'a str,
    generated: Vec<String>,
}

struct InterfaceTransform<'a, 'r> {
    ms: &'a MappingSet,
    target_prefix: &'a str,
    /// Per structure, in order: generic part name to its expansion.
    names: Vec<HashMap<String, Expanded<'a>>>,
    report: &'r mut TransformReport,
}

impl<'a> InterfaceTransform<'a, '_> {
    fn run(mut self, iface: &'a Interface, sm: &mut SourceMap) -> Result<Interface> {
        let mut structures = Vec::with_capacity(iface.structures.len());
        for structure in &iface.structures {
            structures.push(self.structure(structure, sm)?);
        }
        let styles = iface
            .styles
            .iter()
            .map(|style| self.style(style))
            .collect::<Result<Vec<_>>>()?;
        let behaviors = iface
            .behaviors
            .iter()
            .map(|behavior| self.behavior(behavior))
            .collect::<Result<Vec<_>>>()?;
        Ok(Interface {
            name: iface.name.clone(),
            structures,
            styles,
            contents: iface.contents.clone(),
            behaviors,
            loc: iface.loc,
        })
    }

    fn structure(&mut self, structure: &'a Structure, sm: &mut SourceMap) -> Result<Structure> {
        let tops = structure
            .parts()
            .filter(|p| p.class == TOP_CONTAINER_CLASS)
            .count();
        if tops > 1 {
            return Err(TransformError::MultipleTopContainers {
                structure: structure.id.clone(),
            });
        }
        let mut used = HashSet::new();
        let mut names = HashMap::new();
        let mut roots = Vec::new();
        for root in &structure.roots {
            roots.extend(self.expand(root, &mut used, &mut names, sm)?);
        }
        self.names.push(names);
        Ok(Structure {
            id: structure.id.clone(),
            roots,
            loc: structure.loc,
        })
    }

    fn expand(
        &self,
        part: &'a Part,
        used: &mut HashSet<String>,
        names: &mut HashMap<String, Expanded<'a>>,
        sm: &mut SourceMap,
    ) -> Result<Vec<Part>> {
        let entry = self
            .ms
            .get(&part.class)
            .ok_or_else(|| TransformError::NotMapped {
                part: part.name.clone(),
                class: part.class.clone(),
                location: part.loc,
            })?;
        if entry.child_anchor.is_none() && !part.children.is_empty() {
            return Err(TransformError::NoChildAnchor {
                part: part.name.clone(),
                class: part.class.clone(),
                location: part.loc,
            });
        }
        let mut generated = Vec::with_capacity(entry.expansion.len());
        let mut slots: Vec<Option<Part>> = Vec::with_capacity(entry.expansion.len());
        for template in &entry.expansion {
            let name = unique_name(&format!("{}.{}", part.name, template.class), used);
            sm.entries.insert(name.clone(), part.name.clone());
            slots.push(Some(Part {
                name: name.clone(),
                class: template.class.clone(),
                intrinsic: template
                    .intrinsic
                    .iter()
                    .map(|(name, value)| IntrinsicProperty {
                        name: name.clone(),
                        value: value.clone(),
                    })
                    .collect(),
                children: Vec::new(),
                loc: part.loc,
            }));
            generated.push(name);
        }
        names.insert(
            part.name.clone(),
            Expanded {
                class: &part.class,
                generated,
            },
        );

        if let Some(anchor) = entry.child_anchor {
            let mut children = Vec::new();
            for child in &part.children {
                children.extend(self.expand(child, used, names, sm)?);
            }
            if let Some(slot) = slots[anchor].as_mut() {
                slot.children = children;
            }
        }

        // Nest templates under their parents; template children precede the
        // generic part's own children.
        for i in (0..slots.len()).rev() {
            if let Some(parent) = entry.expansion[i].parent {
                let child = slots[i].take().expect("each template is placed once");
                if let Some(slot) = slots[parent].as_mut() {
                    slot.children.insert(0, child);
                }
            }
        }
        Ok(slots.into_iter().flatten().collect())
    }

    fn lookup(&self, generic: &str) -> Result<(&'a MappingEntry, Vec<String>)> {
        let expanded = self
            .names
            .iter()
            .find_map(|names| names.get(generic))
            .ok_or_else(|| TransformError::UnknownPart {
                part: generic.to_string(),
            })?;
        let entry = self
            .ms
            .get(expanded.class)
            .ok_or_else(|| TransformError::NotMapped {
                part: generic.to_string(),
                class: expanded.class.to_string(),
                location: SourcePos::default(),
            })?;
        Ok((entry, expanded.generated.clone()))
    }

    fn route_prop(
        &self,
        prop: &PropName,
        entry: &MappingEntry,
        target: &str,
    ) -> Result<RouteOutcome> {
        route_property(prop, entry, self.target_prefix).map_err(|err| match err {
            TransformError::UnroutableProperty { prop, class, .. } => {
                TransformError::UnroutableProperty {
                    target: target.to_string(),
                    prop,
                    class,
                }
            }
            other => other,
        })
    }

    fn route_ev(&self, event: &str, entry: &MappingEntry, part: &str) -> Result<RouteOutcome> {
        route_event(event, entry, self.target_prefix).map_err(|err| match err {
            TransformError::UnroutableEvent { event, class, .. } => {
                TransformError::UnroutableEvent {
                    part: part.to_string(),
                    event,
                    class,
                }
            }
            other => other,
        })
    }

    fn style(&mut self, style: &Style) -> Result<Style> {
        let mut properties = Vec::with_capacity(style.properties.len());
        for binding in &style.properties {
            let (entry, images, label) = match &binding.target {
                BindingTarget::Part(name) => {
                    let (entry, expanded) = self.lookup(name)?;
                    (entry, Some(expanded), name.clone())
                }
                BindingTarget::Class(class) => {
                    let entry = self
                        .ms
                        .get(class)
                        .ok_or_else(|| TransformError::NotMapped {
                            part: format!("(class binding in style `{}`)", style.id),
                            class: class.clone(),
                            location: binding.loc,
                        })?;
                    (entry, None, class.clone())
                }
            };
            match self.route_prop(&binding.name, entry, &label)? {
                RouteOutcome::Routed { index, name } => {
                    let target = match images {
                        Some(images) => BindingTarget::Part(images[index].clone()),
                        None => BindingTarget::Class(entry.expansion[index].class.clone()),
                    };
                    properties.push(PropertyBinding {
                        target,
                        name: PropName::new(name),
                        value: binding.value.clone(),
                        loc: binding.loc,
                    });
                }
                RouteOutcome::Dropped { reason } => {
                    self.report.dropped_properties.push(DroppedProperty {
                        target: label,
                        prop: binding.name.to_string(),
                        reason,
                    })
                }
            }
        }
        Ok(Style {
            id: style.id.clone(),
            source: style.source.clone(),
            properties,
            loc: style.loc,
        })
    }

    fn behavior(&mut self, behavior: &Behavior) -> Result<Behavior> {
        let mut rules = Vec::with_capacity(behavior.rules.len());
        for rule in &behavior.rules {
            if let Some(rule) = self.rule(rule)? {
                rules.push(rule);
            }
        }
        Ok(Behavior {
            rules,
            loc: behavior.loc,
        })
    }

    fn prune(&mut self, rule: &Rule, why: String) -> Result<Option<Rule>> {
        self.report.warnings.push(Diagnostic::warning(
            "RulePruned",
            format!("rule removed: {why}"),
            rule.loc,
        ));
        Ok(None)
    }

    fn rule(&mut self, rule: &Rule) -> Result<Option<Rule>> {
        let cond = &rule.condition;
        let (entry, expanded) = self.lookup(cond.part())?;
        let (index, event) = match self.route_ev(cond.event_class(), entry, cond.part())? {
            RouteOutcome::Routed { index, name } => (index, name),
            RouteOutcome::Dropped { reason } => return self.prune(rule, reason),
        };
        let part = expanded[index].clone();
        self.report.translated_events += 1;
        let condition = match cond {
            Condition::EventOccurs { .. } => Condition::EventOccurs {
                part,
                event_class: event,
            },
            Condition::EventDataEquals {
                data_name,
                expected,
                ..
            } => Condition::EventDataEquals {
                part,
                event_class: event,
                data_name: data_name.clone(),
                expected: expected.clone(),
            },
        };

        let mut actions = Vec::with_capacity(rule.actions.len());
        for action in &rule.actions {
            match action {
                Action::SetProperty { part, prop, value } => {
                    let (entry, expanded) = self.lookup(part)?;
                    match self.route_prop(prop, entry, part)? {
                        RouteOutcome::Routed { index, name } => actions.push(Action::SetProperty {
                            part: expanded[index].clone(),
                            prop: PropName::new(name),
                            value: value.clone(),
                        }),
                        RouteOutcome::Dropped { reason } => {
                            self.report.dropped_properties.push(DroppedProperty {
                                target: part.clone(),
                                prop: prop.to_string(),
                                reason,
                            })
                        }
                    }
                }
                Action::FireEvent {
                    part,
                    event_class,
                    data,
                } => {
                    let (entry, expanded) = self.lookup(part)?;
                    match self.route_ev(event_class, entry, part)? {
                        RouteOutcome::Routed { index, name } => {
                            self.report.translated_events += 1;
                            actions.push(Action::FireEvent {
                                part: expanded[index].clone(),
                                event_class: name,
                                data: data.clone(),
                            })
                        }
                        RouteOutcome::Dropped { reason } => self
                            .report
                            .warnings
                            .push(Diagnostic::warning("ActionPruned", reason, rule.loc)),
                    }
                }
                Action::CallFunction { .. } | Action::Restructure { .. } => {
                    actions.push(action.clone())
                }
            }
        }
        if actions.is_empty() {
            return self.prune(rule, "every action targets another platform".into());
        }
        Ok(Some(Rule {
            condition,
            actions,
            loc: rule.loc,
        }))
    }
}

/// `base`, or `base-2`, `base-3`, ... whichever is free first.
fn unique_name(base: &str, used: &mut HashSet<String>) -> String {
    let mut name = base.to_string();
    let mut n = 2;
    while used.contains(&name) {
        name = format!("{base}-{n}");
        n += 1;
    }
    used.insert(name.clone());
    name
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doc::parse_document;
    use crate::vocab::builtin;

    fn doc(body: &str) -> UimlDocument {
        parse_document(&format!(
            r#"<uiml><interface name="I"><structure><part name="Win" class="G:TopContainer"><part name="Ok" class="G:Button"/><part name="Name" class="G:Text"/></part></structure>{body}</interface></uiml>"#
        ))
        .unwrap()
    }

    fn names(part: &Part) -> Vec<String> {
        part.walk().map(|p| p.name.clone()).collect()
    }

    #[test]
    fn html_top_container_nesting() {
        let out = transform(&doc(""), &builtin::generic_to_html(), "h:").unwrap();
        let root = &out.document.interfaces[0].structures[0].roots[0];
        assert_eq!(root.name, "Win.html");
        let kids: Vec<_> = root.children.iter().map(|p| p.class.as_str()).collect();
        assert_eq!(kids, ["head", "body"]);
        let head: Vec<_> = root.children[0]
            .children
            .iter()
            .map(|p| p.class.as_str())
            .collect();
        assert_eq!(head, ["title", "base", "style", "link", "meta"]);
        let body = &root.children[1];
        assert_eq!(body.name, "Win.body");
        let leaves: Vec<_> = body.children.iter().map(|p| p.name.as_str()).collect();
        assert_eq!(leaves, ["Ok.button", "Name.input"]);
        assert_eq!(body.children[1].intrinsic[0].value, "text");
        assert_eq!(out.source_map.entries.len(), 10);
        assert_eq!(out.source_map.images("Win").count(), 8);
    }

    #[test]
    fn route_property_cases() {
        let ms = builtin::generic_to_html();
        let entry = ms.get("G:TopContainer").unwrap();
        assert_eq!(
            route_property(&PropName::new("h:link-color"), entry, "h:").unwrap(),
            RouteOutcome::Routed {
                index: 4,
                name: "h:link-color".into()
            }
        );
        assert!(matches!(
            route_property(&PropName::new("j:resizable"), entry, "h:").unwrap(),
            RouteOutcome::Dropped { .. }
        ));
        assert_eq!(
            route_property(&PropName::new("g:title"), entry, "h:").unwrap(),
            RouteOutcome::Routed {
                index: 2,
                name: "g:title".into()
            }
        );
        assert_eq!(entry.expansion[2].class, "title");
        assert_eq!(
            route_property(&PropName::new("title"), entry, "h:").unwrap(),
            RouteOutcome::Routed {
                index: 2,
                name: "g:title".into()
            }
        );
        let err = route_property(&PropName::new("g:nonsense"), entry, "h:").unwrap_err();
        assert_eq!(err.code(), "UnroutableProperty");
    }

    #[test]
    fn unmapped_class_names_the_part() {
        let d = parse_document(
            r#"<uiml><interface><structure><part name="Root" class="G:TopContainer"><part name="Mystery" class="G:Nonexistent"/></part></structure></interface></uiml>"#,
        )
        .unwrap();
        let err = transform(&d, &builtin::generic_to_html(), "h:").unwrap_err();
        assert!(matches!(err, TransformError::NotMapped { ref part, .. } if part == "Mystery"));
    }

    #[test]
    fn unroutable_generic_property_is_an_error() {
        let d =
            doc(r#"<style id="s"><property part-name="Ok" name="g:wobble">x</property></style>"#);
        let err = transform(&d, &builtin::generic_to_html(), "h:").unwrap_err();
        assert_eq!(err.code(), "UnroutableProperty");
    }

    #[test]
    fn two_top_containers_rejected() {
        let d = parse_document(
            r#"<uiml><interface><structure><part name="A" class="G:TopContainer"/><part name="B" class="G:TopContainer"/></structure></interface></uiml>"#,
        )
        .unwrap();
        let err = transform(&d, &builtin::generic_to_mockdesk(), "j:").unwrap_err();
        assert_eq!(err.code(), "MultipleTopContainers");
    }

    #[test]
    fn collisions_get_numeric_suffixes() {
        use crate::vocab::{MappingSet, Vocabulary};
        let from = Vocabulary::from_json(
            r#"{"id":"g","family":"f","platform_prefix":"g:","classes":[{"name":"G:Area","container":true}]}"#,
        )
        .unwrap();
        let to = Vocabulary::from_json(
            r#"{"id":"t","family":"f","platform_prefix":"t:","classes":[{"name":"div","container":true}]}"#,
        )
        .unwrap();
        let ms = MappingSet::from_json(
            r#"{"from":"g","to":"t","entries":[{"class":"G:Area","expansion":[{"class":"div"},{"class":"div","parent":0}],"child_anchor":1}]}"#,
            &from,
            &to,
        )
        .unwrap();
        let d = parse_document(
            r#"<uiml><interface><structure><part name="W" class="G:Area"><part name="X" class="G:Area"/></part></structure></interface></uiml>"#,
        )
        .unwrap();
        let out = transform(&d, &ms, "t:").unwrap();
        let root = &out.document.interfaces[0].structures[0].roots[0];
        assert_eq!(names(root), ["W.div", "W.div-2", "X.div", "X.div-2"]);
        assert_eq!(out.source_map.origin("X.div-2"), Some("X"));
        assert_eq!(out.source_map.origin("W.div-2"), Some("W"));
    }

    #[test]
    fn styles_and_behavior_are_routed() {
        let d = doc(r#"<style id="s">
                 <property part-name="Win" name="g:title">T</property>
                 <property part-name="Win" name="h:link-color">red</property>
                 <property part-name="Win" name="j:resizable">no</property>
                 <property part-class="G:Button" name="g:background">gray</property>
               </style>
               <behavior>
                 <rule><condition><event part-name="Ok" class="g:click"/></condition>
                   <action>
                     <property part-name="Win" name="g:title">Done</property>
                     <fire part-name="Name" class="g:change"><data name="value">x</data></fire>
                     <call name="f"/>
                   </action></rule>
               </behavior>"#);
        let out = transform(&d, &builtin::generic_to_html(), "h:").unwrap();
        let iface = &out.document.interfaces[0];
        let bindings: Vec<_> = iface.styles[0]
            .properties
            .iter()
            .map(|b| (b.target.clone(), b.name.to_string()))
            .collect();
        assert_eq!(
            bindings,
            [
                (BindingTarget::Part("Win.title".into()), "g:title".into()),
                (
                    BindingTarget::Part("Win.style".into()),
                    "h:link-color".into()
                ),
                (BindingTarget::Class("button".into()), "g:background".into()),
            ]
        );
        assert_eq!(out.report.dropped_properties.len(), 1);
        assert_eq!(out.report.dropped_properties[0].prop, "j:resizable");

        let rule = &iface.behaviors[0].rules[0];
        assert_eq!(
            rule.condition,
            Condition::EventOccurs {
                part: "Ok.button".into(),
                event_class: "h:click".into()
            }
        );
        assert!(
            matches!(&rule.actions[0], Action::SetProperty { part, .. } if part == "Win.title")
        );
        assert!(
            matches!(&rule.actions[1], Action::FireEvent { part, event_class, .. } if part == "Name.input" && event_class == "h:change")
        );
        assert_eq!(
            rule.actions[2],
            Action::CallFunction {
                function: "f".into(),
                args: vec![]
            }
        );
        assert_eq!(out.report.translated_events, 2);
    }

    #[test]
    fn foreign_platform_rules_are_pruned() {
        let d = doc(r#"<behavior>
                 <rule><condition><event part-name="Ok" class="j:action"/></condition><action><call name="f"/></action></rule>
                 <rule><condition><event part-name="Ok" class="g:click"/></condition><action><property part-name="Win" name="j:resizable">x</property></action></rule>
               </behavior>"#);
        let out = transform(&d, &builtin::generic_to_html(), "h:").unwrap();
        assert_eq!(out.document.rule_count(), 0);
        assert_eq!(out.report.warnings.len(), 2);
    }

    #[test]
    fn mockdesk_is_one_to_one() {
        let d = doc("");
        let out = transform(&d, &builtin::generic_to_mockdesk(), "j:").unwrap();
        let root = &out.document.interfaces[0].structures[0].roots[0];
        assert_eq!(names(root), ["Win.Frame", "Ok.Button", "Name.TextField"]);
        assert_eq!(out.source_map.entries.len(), 3);
    }
}
