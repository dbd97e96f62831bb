use super::*;
use crate::diag::Diagnostic;
use crate::vocab::Vocabulary;

/// Every way `doc` fails to conform to `vocab`. Empty means conforming.
pub fn validate(doc: &UimlDocument, vocab: &Vocabulary) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for blob in &doc.opaque {
        out.push(Diagnostic::warning(
            "OpaqueElement",
            format!("<{}> is preserved but not interpreted", blob.name),
            blob.loc,
        ));
    }
    for iface in &doc.interfaces {
        Checker {
            iface,
            vocab,
            out: &mut out,
        }
        .run();
    }
    out
}

struct Checker<'a> {
    iface: &'a Interface,
    vocab: &'a Vocabulary,
    out: &'a mut Vec<Diagnostic>,
}

impl<'a> Checker<'a> {
    fn run(&mut self) {
        for structure in &self.iface.structures {
            for part in structure.parts() {
                match self.vocab.class(&part.class) {
                    None => self.out.push(Diagnostic::error(
                        "UnknownClass",
                        format!("part `{}` has unknown class `{}`", part.name, part.class),
                        part.loc,
                    )),
                    Some(spec) if !spec.container && !part.children.is_empty() => {
                        self.out.push(Diagnostic::error(
                            "LeafWithChildren",
                            format!(
                                "part `{}` of class `{}` cannot hold children",
                                part.name, part.class
                            ),
                            part.loc,
                        ))
                    }
                    Some(_) => {}
                }
            }
        }
        for style in &self.iface.styles {
            for binding in &style.properties {
                let class = match &binding.target {
                    BindingTarget::Part(name) => self.part_class(name, binding.loc),
                    BindingTarget::Class(class) => {
                        if self.vocab.class(class).is_none() {
                            self.out.push(Diagnostic::error(
                                "UnknownClass",
                                format!("property targets unknown class `{class}`"),
                                binding.loc,
                            ));
                            None
                        } else {
                            Some(class.as_str())
                        }
                    }
                };
                if let Some(class) = class {
                    self.property(class, &binding.name, binding.loc);
                }
                self.value(&binding.value, binding.loc);
            }
        }
        for rule in self.iface.rules() {
            let cond = &rule.condition;
            if let Some(class) = self.part_class(cond.part(), rule.loc) {
                self.event(class, cond.event_class(), rule.loc);
            }
            for action in &rule.actions {
                match action {
                    Action::SetProperty { part, prop, value } => {
                        if let Some(class) = self.part_class(part, rule.loc) {
                            self.property(class, prop, rule.loc);
                        }
                        self.value(value, rule.loc);
                    }
                    Action::FireEvent {
                        part, event_class, ..
                    } => {
                        if let Some(class) = self.part_class(part, rule.loc) {
                            self.event(class, event_class, rule.loc);
                        }
                    }
                    Action::Restructure { structure_id } => {
                        if self.iface.structure(structure_id).is_none() {
                            self.out.push(Diagnostic::error(
                                "UnknownStructure",
                                format!("restructure names missing structure `{structure_id}`"),
                                rule.loc,
                            ));
                        }
                    }
                    Action::CallFunction { .. } => {}
                }
            }
        }
    }

    fn part_class(&mut self, name: &str, loc: SourcePos) -> Option<&'a str> {
        match self.iface.find_part(name) {
            Some(part) => Some(part.class.as_str()),
            None => {
                self.out.push(Diagnostic::error(
                    "DanglingPartRef",
                    format!("reference to missing part `{name}`"),
                    loc,
                ));
                None
            }
        }
    }

    fn property(&mut self, class: &str, prop: &PropName, loc: SourcePos) {
        if self.vocab.class(class).is_some()
            && self.vocab.class_property(class, prop.as_str()).is_none()
        {
            self.out.push(Diagnostic::error(
                "UnknownProperty",
                format!("class `{class}` has no property `{prop}`"),
                loc,
            ));
        }
    }

    fn event(&mut self, class: &str, event: &str, loc: SourcePos) {
        if let Some(spec) = self.vocab.class(class) {
            if !spec.has_event(event) {
                self.out.push(Diagnostic::error(
                    "UnknownEvent",
                    format!("class `{class}` has no event `{event}`"),
                    loc,
                ));
            }
        }
    }

    fn value(&mut self, value: &PropertyValue, loc: SourcePos) {
        if let PropertyValue::Reference(id) = value {
            if !self.iface.contents.iter().any(|c| c.get(id).is_some()) {
                self.out.push(Diagnostic::error(
                    "UnresolvedConstant",
                    format!("no content group defines `{id}`"),
                    loc,
                ));
            }
        }
    }
}
