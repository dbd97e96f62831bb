//! Random valid documents and event scripts, plus a second, independently
//! written behavior interpreter to check the runtime against.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::behavior::{
    dispatch, instantiate_runtime, ActionEffect, EventInstance, ExternalCall, RuntimeState, Widget,
};
use crate::diag::SourcePos;
use crate::doc::{
    Action, Behavior, BindingTarget, Condition, Constant, ContentGroup, Interface, Part, PropName,
    PropertyBinding, PropertyValue, Rule, Structure, Style, UimlDocument,
};
use crate::style::resolve_for_render;
use crate::vocab::{ClassSpec, MappingSet, Vocabulary};
use crate::xform::{SourceMap, TransformOutput};

const TOP: &str = "G:TopContainer";
const VALUE_ALPHABET: &[char] = &[
    'a', 'b', 'z', 'Q', '0', '7', ' ', '<', '>', '&', '"', '\'', '%', ';', '#', 'é', '\n', '\t',
];

#[derive(Debug, Clone)]
pub struct GenConfig {
    pub max_parts: usize,
    pub max_rules: usize,
    /// Emit `h:` and `j:` bindings next to generic ones.
    pub platform_properties: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_parts: 30,
            max_rules: 5,
            platform_properties: true,
        }
    }
}

pub fn random_value<R: Rng>(rng: &mut R) -> String {
    let len = rng.gen_range(0..12);
    let text: String = (0..len)
        .map(|_| *VALUE_ALPHABET.choose(rng).unwrap())
        .collect();
    // A literal spelled `%x%` would read back as a reference.
    match PropertyValue::from_text(&text) {
        PropertyValue::Literal(_) => text,
        PropertyValue::Reference(_) => format!("{text}."),
    }
}

struct Gen<'a, R> {
    rng: &'a mut R,
    vocab: &'a Vocabulary,
    cfg: &'a GenConfig,
    containers: Vec<&'a ClassSpec>,
    all: Vec<&'a ClassSpec>,
}

impl<'a, R: Rng> Gen<'a, R> {
    fn new(rng: &'a mut R, vocab: &'a Vocabulary, cfg: &'a GenConfig) -> Self {
        let all: Vec<&ClassSpec> = vocab.classes().filter(|c| c.name != TOP).collect();
        let containers = all.iter().copied().filter(|c| c.container).collect();
        Gen {
            rng,
            vocab,
            cfg,
            containers,
            all,
        }
    }

    fn structure(&mut self, id: &str, prefix: &str) -> Structure {
        let budget = self.rng.gen_range(1..=self.cfg.max_parts.max(1));
        let root_class = if self.rng.gen_bool(0.8) {
            TOP.to_string()
        } else {
            self.containers.choose(self.rng).unwrap().name.clone()
        };
        let mut root = Part::new(format!("{prefix}0"), root_class);
        let mut count = 1;
        // Attach each new part under a random container already in the tree.
        while count < budget {
            let mut slots = Vec::new();
            collect_containers(&root, self.vocab, &mut Vec::new(), &mut slots);
            let path = slots.choose(self.rng).unwrap().clone();
            let class = self.all.choose(self.rng).unwrap().name.clone();
            let child = Part::new(format!("{prefix}{count}"), class);
            let mut at = &mut root;
            for i in path {
                at = &mut at.children[i];
            }
            at.children.push(child);
            count += 1;
        }
        Structure {
            id: id.to_string(),
            roots: vec![root],
            loc: SourcePos::default(),
        }
    }

    fn property_for(&mut self, class: &str, platform: bool) -> Option<PropName> {
        let spec = self.vocab.class(class)?;
        let names: Vec<&str> = spec
            .properties
            .iter()
            .map(|p| p.name.as_str())
            .filter(|n| platform || n.starts_with("g:"))
            .collect();
        names.choose(self.rng).map(|n| PropName::new(*n))
    }

    fn value(&mut self, constants: &[String]) -> PropertyValue {
        if !constants.is_empty() && self.rng.gen_bool(0.25) {
            PropertyValue::Reference(constants.choose(self.rng).unwrap().clone())
        } else {
            PropertyValue::Literal(random_value(self.rng))
        }
    }

    fn styles(&mut self, parts: &[(String, String)], constants: &[String]) -> Vec<Style> {
        let n = self.rng.gen_range(0..=3);
        let mut styles: Vec<Style> = Vec::new();
        for i in 0..n {
            let source = (i > 0 && self.rng.gen_bool(0.7))
                .then(|| styles[self.rng.gen_range(0..i)].id.clone());
            let mut properties = Vec::new();
            for _ in 0..self.rng.gen_range(0..8) {
                let (name, class) = parts.choose(self.rng).unwrap().clone();
                let Some(prop) = self.property_for(&class, self.cfg.platform_properties) else {
                    continue;
                };
                let target = if self.rng.gen_bool(0.3) {
                    BindingTarget::Class(class)
                } else {
                    BindingTarget::Part(name)
                };
                properties.push(PropertyBinding {
                    target,
                    name: prop,
                    value: self.value(constants),
                    loc: SourcePos::default(),
                });
            }
            styles.push(Style {
                id: format!("style{i}"),
                source,
                properties,
                loc: SourcePos::default(),
            });
        }
        styles
    }

    fn contents(&mut self) -> (Vec<ContentGroup>, Vec<String>) {
        let ids: Vec<String> = (0..self.rng.gen_range(0..4))
            .map(|i| format!("c{i}"))
            .collect();
        if ids.is_empty() {
            return (Vec::new(), ids);
        }
        let groups = (0..self.rng.gen_range(1..=2))
            .map(|g| ContentGroup {
                id: format!("lang{g}"),
                constants: ids
                    .iter()
                    .map(|id| Constant {
                        id: id.clone(),
                        value: random_value(self.rng),
                        loc: SourcePos::default(),
                    })
                    .collect(),
                loc: SourcePos::default(),
            })
            .collect();
        (groups, ids)
    }

    fn event_for(&mut self, class: &str) -> String {
        let spec = self.vocab.class(class).unwrap();
        spec.events.choose(self.rng).unwrap().clone()
    }

    fn rules(
        &mut self,
        parts: &[(String, String)],
        structures: &[String],
        constants: &[String],
    ) -> Vec<Rule> {
        let n = self.rng.gen_range(0..=self.cfg.max_rules);
        (0..n)
            .map(|_| {
                let (part, class) = parts.choose(self.rng).unwrap().clone();
                let event_class = self.event_for(&class);
                let condition = if self.rng.gen_bool(0.3) {
                    Condition::EventDataEquals {
                        part,
                        event_class,
                        data_name: "value".into(),
                        expected: ["x", "y"].choose(self.rng).unwrap().to_string(),
                    }
                } else {
                    Condition::EventOccurs { part, event_class }
                };
                let actions = (0..self.rng.gen_range(1..=3))
                    .map(|_| self.action(parts, structures, constants))
                    .collect();
                Rule {
                    condition,
                    actions,
                    loc: SourcePos::default(),
                }
            })
            .collect()
    }

    fn action(
        &mut self,
        parts: &[(String, String)],
        structures: &[String],
        constants: &[String],
    ) -> Action {
        let (part, class) = parts.choose(self.rng).unwrap().clone();
        match self.rng.gen_range(0..10) {
            // Rules stay generic so every one of them survives a transform.
            0..=3 => match self.property_for(&class, false) {
                Some(prop) => Action::SetProperty {
                    part,
                    prop,
                    value: self.value(constants),
                },
                None => Action::CallFunction {
                    function: "noop".into(),
                    args: Vec::new(),
                },
            },
            4 | 5 => Action::CallFunction {
                function: ["log", "warn", "submit"]
                    .choose(self.rng)
                    .unwrap()
                    .to_string(),
                args: (0..self.rng.gen_range(0..3))
                    .map(|_| random_value(self.rng))
                    .collect(),
            },
            6..=8 => {
                let event_class = self.event_for(&class);
                let mut data = BTreeMap::new();
                if self.rng.gen_bool(0.5) {
                    data.insert(
                        "value".to_string(),
                        ["x", "y"].choose(self.rng).unwrap().to_string(),
                    );
                }
                Action::FireEvent {
                    part,
                    event_class,
                    data,
                }
            }
            _ => Action::Restructure {
                structure_id: structures.choose(self.rng).unwrap().clone(),
            },
        }
    }
}

fn collect_containers(
    part: &Part,
    vocab: &Vocabulary,
    path: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if vocab.class(&part.class).is_some_and(|c| c.container) {
        out.push(path.clone());
    }
    for (i, child) in part.children.iter().enumerate() {
        path.push(i);
        collect_containers(child, vocab, path, out);
        path.pop();
    }
}

fn parts_of(structure: &Structure) -> Vec<(String, String)> {
    structure
        .parts()
        .map(|p| (p.name.clone(), p.class.clone()))
        .collect()
}

fn wrap(iface: Interface) -> UimlDocument {
    UimlDocument {
        doc_name: None,
        head: Vec::new(),
        interfaces: vec![iface],
        opaque: Vec::new(),
    }
}

/// A valid generic document with styles and content but no behavior.
pub fn random_document<R: Rng>(rng: &mut R, vocab: &Vocabulary, cfg: &GenConfig) -> UimlDocument {
    let mut g = Gen::new(rng, vocab, cfg);
    let structure = g.structure("main", "P");
    let parts = parts_of(&structure);
    let (contents, constants) = g.contents();
    let styles = g.styles(&parts, &constants);
    wrap(Interface {
        name: "generated".into(),
        structures: vec![structure],
        styles,
        contents,
        behaviors: Vec::new(),
        loc: SourcePos::default(),
    })
}

/// A generic document with two structures and a handful of rules. Rules may
/// name parts that only exist in the other structure.
pub fn random_behavior_document<R: Rng>(
    rng: &mut R,
    vocab: &Vocabulary,
    cfg: &GenConfig,
) -> UimlDocument {
    let mut g = Gen::new(rng, vocab, cfg);
    let main = g.structure("main", "P");
    let alt = g.structure("alt", "Q");
    let mut parts = parts_of(&main);
    parts.extend(parts_of(&alt));
    let (contents, constants) = g.contents();
    let styles = g.styles(&parts, &constants);
    let ids = vec![main.id.clone(), alt.id.clone()];
    let rules = g.rules(&parts, &ids, &constants);
    wrap(Interface {
        name: "generated".into(),
        structures: vec![main, alt],
        styles,
        contents,
        behaviors: vec![Behavior {
            rules,
            loc: SourcePos::default(),
        }],
        loc: SourcePos::default(),
    })
}

/// Events aimed at parts that rules listen to, with some noise.
pub fn random_events<R: Rng>(rng: &mut R, doc: &UimlDocument, n: usize) -> Vec<EventInstance> {
    let iface = &doc.interfaces[0];
    let heard: Vec<(String, String)> = iface
        .rules()
        .map(|r| {
            (
                r.condition.part().to_string(),
                r.condition.event_class().to_string(),
            )
        })
        .collect();
    (0..n)
        .map(|_| {
            let (part, class) = match heard.choose(rng) {
                Some(pair) if rng.gen_bool(0.85) => pair.clone(),
                _ => ("P0".to_string(), "g:focus".to_string()),
            };
            let mut ev = EventInstance::new(part, class);
            if rng.gen_bool(0.5) {
                ev = ev.with_data("value", *["x", "y"].choose(rng).unwrap());
            }
            ev
        })
        .collect()
}

/// Flattened view of a runtime: widget name to its properties, in pre-order.
pub type WidgetProps = Vec<(String, BTreeMap<String, String>)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observed {
    pub structure: String,
    pub widgets: WidgetProps,
    pub calls: Vec<ExternalCall>,
}

impl Observed {
    pub fn of(rt: &RuntimeState) -> Observed {
        fn flat(w: &Widget, out: &mut WidgetProps) {
            out.push((w.name.clone(), w.props.clone()));
            for c in &w.children {
                flat(c, out);
            }
        }
        let mut widgets = Vec::new();
        for w in &rt.widgets {
            flat(w, &mut widgets);
        }
        Observed {
            structure: rt.active_structure.clone(),
            widgets,
            calls: rt.external_calls.clone(),
        }
    }
}

/// Outcome of one event: its effects, or the error code it failed with.
pub type StepResult = Result<Vec<ActionEffect>, &'static str>;

/// Reference interpreter. Keeps its own flat state and an explicit work
/// stack instead of recursion.
pub struct Oracle<'a> {
    iface: &'a Interface,
    props: BTreeMap<(String, String), String>,
    class_props: BTreeMap<(String, String), String>,
    constants: BTreeMap<String, String>,
    limit: usize,
    state: Observed,
}

impl<'a> Oracle<'a> {
    /// `None` if the style or content selection itself is invalid.
    pub fn new(
        doc: &'a UimlDocument,
        style: Option<&str>,
        content: Option<&str>,
        target_prefix: Option<&str>,
        limit: usize,
    ) -> Option<Oracle<'a>> {
        let iface = &doc.interfaces[0];
        let group = match content {
            Some(id) => Some(iface.contents.iter().find(|c| c.id == id)?),
            None => iface.contents.first(),
        };
        let constants: BTreeMap<String, String> = group
            .map(|g| {
                g.constants
                    .iter()
                    .map(|c| (c.id.clone(), c.value.clone()))
                    .collect()
            })
            .unwrap_or_default();
        let style_id = match style {
            Some(id) => Some(id.to_string()),
            None if iface.styles.len() == 1 => Some(iface.styles[0].id.clone()),
            None if iface.styles.is_empty() => None,
            None => return None,
        };
        let mut chain = Vec::new();
        let mut next = style_id;
        while let Some(id) = next {
            let s = iface.styles.iter().find(|s| s.id == id)?;
            chain.insert(0, s);
            next = s.source.clone();
        }
        let mut props = BTreeMap::new();
        let mut class_props = BTreeMap::new();
        for binding in chain.iter().flat_map(|s| &s.properties) {
            let prefix = binding.name.prefix();
            let keep = match (&prefix, target_prefix) {
                (Some(p), Some(t)) => p == "g:" || p == &t.to_ascii_lowercase(),
                _ => true,
            };
            if !keep {
                continue;
            }
            let value = match &binding.value {
                PropertyValue::Literal(v) => v.clone(),
                PropertyValue::Reference(id) => constants.get(id)?.clone(),
            };
            let key = binding.name.normalized();
            match &binding.target {
                BindingTarget::Part(p) => props.insert((p.clone(), key), value),
                BindingTarget::Class(c) => class_props.insert((c.clone(), key), value),
            };
        }
        let mut oracle = Oracle {
            iface,
            props,
            class_props,
            constants,
            limit,
            state: Observed {
                structure: String::new(),
                widgets: Vec::new(),
                calls: Vec::new(),
            },
        };
        oracle.load(&iface.structures[0].id);
        Some(oracle)
    }

    pub fn observed(&self) -> &Observed {
        &self.state
    }

    fn load(&mut self, id: &str) -> bool {
        let Some(structure) = self.iface.structures.iter().find(|s| s.id == id) else {
            return false;
        };
        self.state.structure = id.to_string();
        self.state.widgets = structure
            .parts()
            .map(|p| {
                let mut table = BTreeMap::new();
                for ((class, k), v) in &self.class_props {
                    if *class == p.class {
                        table.insert(k.clone(), v.clone());
                    }
                }
                for ((part, k), v) in &self.props {
                    if *part == p.name {
                        table.insert(k.clone(), v.clone());
                    }
                }
                (p.name.clone(), table)
            })
            .collect();
        true
    }

    fn exists(&self, part: &str) -> bool {
        self.state.widgets.iter().any(|(n, _)| n == part)
    }

    fn triggered(&self, ev: &EventInstance) -> Vec<&'a Action> {
        let mut out = Vec::new();
        for rule in self.iface.behaviors.iter().flat_map(|b| &b.rules) {
            let hit = match &rule.condition {
                Condition::EventOccurs { part, event_class } => {
                    part == &ev.part && event_class == &ev.event_class
                }
                Condition::EventDataEquals {
                    part,
                    event_class,
                    data_name,
                    expected,
                } => {
                    part == &ev.part
                        && event_class == &ev.event_class
                        && ev.data.get(data_name).is_some_and(|v| v == expected)
                }
            };
            if hit {
                out.extend(rule.actions.iter());
            }
        }
        out
    }

    pub fn step(&mut self, ev: &EventInstance) -> StepResult {
        let saved = self.state.clone();
        let result = self.run(ev);
        if result.is_err() {
            self.state = saved;
        }
        result
    }

    fn run(&mut self, ev: &EventInstance) -> StepResult {
        if !self.exists(&ev.part) {
            return Err("UnknownPart");
        }
        let mut effects = Vec::new();
        // Each frame: pending actions and the depth they run at.
        let mut stack: Vec<(std::vec::IntoIter<&Action>, usize)> =
            vec![(self.triggered(ev).into_iter(), 0)];
        while let Some((actions, depth)) = stack.last_mut() {
            let depth = *depth;
            let Some(action) = actions.next() else {
                stack.pop();
                continue;
            };
            match action {
                Action::SetProperty { part, prop, value } => {
                    let new = match value {
                        PropertyValue::Literal(v) => v.clone(),
                        PropertyValue::Reference(id) => match self.constants.get(id) {
                            Some(v) => v.clone(),
                            None => return Err("UnresolvedConstant"),
                        },
                    };
                    let key = prop.normalized();
                    let Some((_, table)) = self.state.widgets.iter_mut().find(|(n, _)| n == part)
                    else {
                        return Err("UnknownPart");
                    };
                    let old = table.insert(key.clone(), new.clone());
                    effects.push(ActionEffect::PropertySet {
                        part: part.clone(),
                        prop: key,
                        old,
                        new,
                    });
                }
                Action::CallFunction { function, args } => {
                    self.state.calls.push(ExternalCall {
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
                    if depth >= self.limit {
                        return Err("EventCascadeOverflow");
                    }
                    let nested = EventInstance {
                        part: part.clone(),
                        event_class: event_class.clone(),
                        data: data.clone(),
                    };
                    effects.push(ActionEffect::EventFired(nested.clone()));
                    if !self.exists(part) {
                        return Err("UnknownPart");
                    }
                    let next = self.triggered(&nested).into_iter();
                    stack.push((next, depth + 1));
                }
                Action::Restructure { structure_id } => {
                    let from = self.state.structure.clone();
                    if !self.load(structure_id) {
                        return Err("UnknownStructure");
                    }
                    effects.push(ActionEffect::Restructured {
                        from,
                        to: structure_id.clone(),
                    });
                }
            }
        }
        Ok(effects)
    }
}

/// Every rule-named check a transform must pass. Returns the violations.
pub fn transform_violations(
    generic: &UimlDocument,
    out: &TransformOutput,
    ms: &MappingSet,
    target_prefix: &str,
) -> Vec<String> {
    let mut bad = Vec::new();
    let sm = &out.source_map;
    let generic_parts: Vec<&Part> = generic
        .interfaces
        .iter()
        .flat_map(|i| &i.structures)
        .flat_map(|s| s.parts())
        .collect();
    let output_parts: Vec<&Part> = out
        .document
        .interfaces
        .iter()
        .flat_map(|i| &i.structures)
        .flat_map(|s| s.parts())
        .collect();

    let expected: usize = generic_parts
        .iter()
        .map(|p| ms.get(&p.class).map_or(0, |e| e.expansion.len()))
        .sum();
    if expected != output_parts.len() {
        bad.push(format!("part count {} != {}", output_parts.len(), expected));
    }

    for part in &output_parts {
        match sm.origin(&part.name) {
            Some(origin) if generic_parts.iter().any(|g| g.name == origin) => {}
            _ => bad.push(format!("{} has no origin", part.name)),
        }
    }
    for g in &generic_parts {
        if sm.images(&g.name).next().is_none() {
            bad.push(format!("{} has no image", g.name));
        }
    }

    // Direct children of any image of `g`, in output order, that come from
    // some other generic part must be the images of g's children.
    for g in &generic_parts {
        let mut seen = Vec::new();
        for part in &output_parts {
            if sm.origin(&part.name) != Some(g.name.as_str()) {
                continue;
            }
            for child in &part.children {
                if let Some(o) = sm.origin(&child.name) {
                    if o != g.name {
                        seen.push(o.to_string());
                    }
                }
            }
        }
        let want: Vec<String> = g.children.iter().map(|c| c.name.clone()).collect();
        if seen != want {
            bad.push(format!("children of {}: {:?} != {:?}", g.name, seen, want));
        }
    }

    let foreign = |name: &PropName| {
        name.prefix()
            .is_some_and(|p| p != "g:" && !p.eq_ignore_ascii_case(target_prefix))
    };
    for iface in &out.document.interfaces {
        for b in iface.styles.iter().flat_map(|s| &s.properties) {
            if foreign(&b.name) {
                bad.push(format!("foreign property {} in output style", b.name));
            }
        }
        for action in iface.rules().flat_map(|r| &r.actions) {
            if let Action::SetProperty { prop, .. } = action {
                if foreign(prop) {
                    bad.push(format!("foreign property {prop} in output rule"));
                }
            }
        }
    }

    if generic.rule_count() != out.document.rule_count() {
        bad.push(format!(
            "rule count {} != {}",
            out.document.rule_count(),
            generic.rule_count()
        ));
    }
    bad
}

/// A mapping is one-to-one when each generic part has exactly one image.
pub fn is_bijection(generic: &UimlDocument, sm: &SourceMap) -> bool {
    let names: Vec<&str> = generic
        .interfaces
        .iter()
        .flat_map(|i| &i.structures)
        .flat_map(|s| s.parts())
        .map(|p| p.name.as_str())
        .collect();
    names.iter().all(|n| sm.images(n).count() == 1) && sm.entries.len() == names.len()
}

/// Runtime and oracle, side by side over one event script.
pub fn oracle_mismatch(
    doc: &UimlDocument,
    limit: usize,
    events: &[EventInstance],
) -> Option<String> {
    let iface = &doc.interfaces[0];
    let runtime = resolve_for_render(iface, None, None, None)
        .map_err(|e| e.to_string())
        .and_then(|es| instantiate_runtime(doc, &es).map_err(|e| e.to_string()));
    let oracle = Oracle::new(doc, None, None, None, limit);
    let (mut rt, mut oracle) = match (runtime, oracle) {
        (Ok(rt), Some(o)) => (rt.with_depth_limit(limit), o),
        (Err(_), None) => return None,
        (rt, o) => {
            return Some(format!(
                "setup disagrees: runtime ok {} oracle ok {}",
                rt.is_ok(),
                o.is_some()
            ))
        }
    };
    for (i, ev) in events.iter().enumerate() {
        let got: StepResult = dispatch(&mut rt, doc, ev).map_err(|e| e.code());
        let want = oracle.step(ev);
        if got != want {
            return Some(format!("event {i} {ev:?}: runtime {got:?} oracle {want:?}"));
        }
        if Observed::of(&rt) != *oracle.observed() {
            return Some(format!("event {i} {ev:?}: states differ"));
        }
    }
    None
}

/// `n + 1` buttons where a click on each fires a click on the next, so a
/// click on the first cascades `n` levels deep.
pub fn chain_document(n: usize) -> UimlDocument {
    let buttons = (0..=n)
        .map(|i| Part::new(format!("C{i}"), "G:Button"))
        .collect();
    let rules = (0..n)
        .map(|i| Rule {
            condition: Condition::EventOccurs {
                part: format!("C{i}"),
                event_class: "g:click".into(),
            },
            actions: vec![Action::FireEvent {
                part: format!("C{}", i + 1),
                event_class: "g:click".into(),
                data: BTreeMap::new(),
            }],
            loc: SourcePos::default(),
        })
        .collect();
    wrap(Interface {
        name: "chain".into(),
        structures: vec![Structure {
            id: "main".into(),
            roots: vec![Part::new("W", TOP).with_children(buttons)],
            loc: SourcePos::default(),
        }],
        styles: Vec::new(),
        contents: Vec::new(),
        behaviors: vec![Behavior {
            rules,
            loc: SourcePos::default(),
        }],
        loc: SourcePos::default(),
    })
}
