//! Vocabularies (the classes, properties and events a platform or a family
//! offers) and mapping sets (how each generic class expands into target
//! parts).
//!
//! Both are JSON files; see `vocab/README.md` for the schemas.

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diag::{Diagnostic, SourcePos};

#[derive(Debug, Error)]
pub enum VocabError {
    #[error("{path}: file not found")]
    FileNotFound { path: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("format error at {location}: {message}")]
    FormatError {
        message: String,
        location: SourcePos,
    },
    #[error("class `{class}` is defined twice")]
    DuplicateClass { class: String },
    #[error("mapping entry for `{class}` is defined twice")]
    DuplicateEntry { class: String },
    #[error("mapping names class `{class}`, absent from vocabulary `{vocabulary}`")]
    UnknownClassInMapping { class: String, vocabulary: String },
    #[error("mapping for `{class}`: {message}")]
    BadAnchor { class: String, message: String },
    #[error("mapping for `{class}`: {message}")]
    BadRoute { class: String, message: String },
    #[error("mapping goes from `{found}` but vocabulary `{expected}` was supplied")]
    VocabularyMismatch { expected: String, found: String },
    #[error("class `{class}` has no mapping entry")]
    NotMapped { class: String },
}

impl VocabError {
    pub fn code(&self) -> &'static str {
        match self {
            VocabError::FileNotFound { .. } => "FileNotFound",
            VocabError::Io { .. } => "Io",
            VocabError::FormatError { .. } => "FormatError",
            VocabError::DuplicateClass { .. } => "DuplicateClass",
            VocabError::DuplicateEntry { .. } => "DuplicateEntry",
            VocabError::UnknownClassInMapping { .. } => "UnknownClassInMapping",
            VocabError::BadAnchor { .. } => "BadAnchor",
            VocabError::BadRoute { .. } => "BadRoute",
            VocabError::VocabularyMismatch { .. } => "VocabularyMismatch",
            VocabError::NotMapped { .. } => "NotMapped",
        }
    }
}

type Result<T> = std::result::Result<T, VocabError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueKind {
    Text,
    Color,
    Boolean,
    Integer,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertySpec {
    pub name: String,
    pub kind: ValueKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassSpec {
    pub name: String,
    #[serde(default)]
    pub properties: Vec<PropertySpec>,
    #[serde(default)]
    pub events: Vec<String>,
    #[serde(default)]
    pub container: bool,
}

impl ClassSpec {
    pub fn property(&self, name: &str) -> Option<&PropertySpec> {
        self.properties.iter().find(|p| p.name == name)
    }

    pub fn has_event(&self, name: &str) -> bool {
        self.events.iter().any(|e| e == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Vocabulary {
    pub id: String,
    pub family: String,
    pub platform_prefix: String,
    classes: BTreeMap<String, ClassSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VocabularyFile {
    id: String,
    family: String,
    platform_prefix: String,
    classes: Vec<ClassSpec>,
}

impl Vocabulary {
    pub fn from_json(text: &str) -> Result<Vocabulary> {
        let file: VocabularyFile =
            serde_json::from_str(text).map_err(|e| format_error(text, &e))?;
        let prefix_ok = file.platform_prefix.len() > 1
            && file.platform_prefix.ends_with(':')
            && file.platform_prefix == file.platform_prefix.to_ascii_lowercase();
        if !prefix_ok {
            return Err(VocabError::FormatError {
                message: format!(
                    "platform_prefix `{}` must be lowercase and end with `:`",
                    file.platform_prefix
                ),
                location: SourcePos::default(),
            });
        }
        if file.classes.is_empty() {
            return Err(VocabError::FormatError {
                message: "vocabulary defines no classes".into(),
                location: SourcePos::default(),
            });
        }
        let mut classes = BTreeMap::new();
        for class in file.classes {
            let mut seen = HashSet::new();
            if let Some(dup) = class.properties.iter().find(|p| !seen.insert(&p.name)) {
                return Err(VocabError::FormatError {
                    message: format!("class `{}` declares `{}` twice", class.name, dup.name),
                    location: SourcePos::default(),
                });
            }
            let name = class.name.clone();
            if classes.insert(name.clone(), class).is_some() {
                return Err(VocabError::DuplicateClass { class: name });
            }
        }
        Ok(Vocabulary {
            id: file.id,
            family: file.family,
            platform_prefix: file.platform_prefix,
            classes,
        })
    }

    pub fn class(&self, name: &str) -> Option<&ClassSpec> {
        self.classes.get(name)
    }

    pub fn classes(&self) -> impl Iterator<Item = &ClassSpec> {
        self.classes.values()
    }

    /// Look a property up as written, then as a generic name when it carries
    /// no prefix.
    pub fn class_property(&self, class: &str, prop: &str) -> Option<&PropertySpec> {
        let spec = self.class(class)?;
        let prop = crate::doc::PropName::new(prop);
        spec.property(&prop.normalized())
            .or_else(|| spec.property(&prop.generic_key()))
    }
}

pub fn load_vocabulary(path: impl AsRef<Path>) -> Result<Vocabulary> {
    Vocabulary::from_json(&read(path.as_ref())?)
}

/// Where one generic property or event lands inside an expansion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropertyRoute {
    pub index: usize,
    pub property: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventRoute {
    pub index: usize,
    pub event: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetPartTemplate {
    pub class: String,
    /// Index of the enclosing template; `None` places the part where the
    /// generic part stood.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent: Option<usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub intrinsic: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MappingEntry {
    pub class: String,
    pub expansion: Vec<TargetPartTemplate>,
    /// Template receiving the generic part's children. Absent for leaf classes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub child_anchor: Option<usize>,
    #[serde(default)]
    pub property_routes: BTreeMap<String, PropertyRoute>,
    /// Routes for properties carrying the target platform's own prefix.
    /// Unlisted ones land on template 0 under their own name.
    #[serde(default)]
    pub platform_routes: BTreeMap<String, PropertyRoute>,
    #[serde(default)]
    pub event_routes: BTreeMap<String, EventRoute>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MappingSet {
    pub from_vocab: String,
    pub to_vocab: String,
    /// Prefix of the target platform, taken from the target vocabulary.
    pub target_prefix: String,
    entries: BTreeMap<String, MappingEntry>,
    /// Load-time findings that do not stop loading (generic classes with no
    /// entry).
    pub warnings: Vec<Diagnostic>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MappingFile {
    from: String,
    to: String,
    entries: Vec<MappingEntry>,
}

impl MappingSet {
    pub fn from_json(text: &str, from: &Vocabulary, to: &Vocabulary) -> Result<MappingSet> {
        let file: MappingFile = serde_json::from_str(text).map_err(|e| format_error(text, &e))?;
        if file.from != from.id {
            return Err(VocabError::VocabularyMismatch {
                expected: from.id.clone(),
                found: file.from,
            });
        }
        if file.to != to.id {
            return Err(VocabError::VocabularyMismatch {
                expected: to.id.clone(),
                found: file.to,
            });
        }
        let mut entries = BTreeMap::new();
        for entry in file.entries {
            check_entry(&entry, from, to)?;
            let class = entry.class.clone();
            if entries.insert(class.clone(), entry).is_some() {
                return Err(VocabError::DuplicateEntry { class });
            }
        }
        let warnings = from
            .classes()
            .filter(|c| !entries.contains_key(&c.name))
            .map(|c| {
                Diagnostic::warning(
                    "UnmappedClass",
                    format!("generic class `{}` has no mapping to `{}`", c.name, to.id),
                    SourcePos::default(),
                )
            })
            .collect();
        Ok(MappingSet {
            from_vocab: file.from,
            to_vocab: file.to,
            target_prefix: to.platform_prefix.clone(),
            entries,
            warnings,
        })
    }

    pub fn entries(&self) -> impl Iterator<Item = &MappingEntry> {
        self.entries.values()
    }

    pub fn get(&self, class: &str) -> Option<&MappingEntry> {
        self.entries.get(class)
    }
}

/// The entry for `class`; never invents one.
pub fn lookup_expansion<'a>(ms: &'a MappingSet, class: &str) -> Result<&'a MappingEntry> {
    ms.get(class).ok_or_else(|| VocabError::NotMapped {
        class: class.to_string(),
    })
}

pub fn load_mapping(
    path: impl AsRef<Path>,
    from: &Vocabulary,
    to: &Vocabulary,
) -> Result<MappingSet> {
    MappingSet::from_json(&read(path.as_ref())?, from, to)
}

fn check_entry(entry: &MappingEntry, from: &Vocabulary, to: &Vocabulary) -> Result<()> {
    let generic = from
        .class(&entry.class)
        .ok_or_else(|| VocabError::UnknownClassInMapping {
            class: entry.class.clone(),
            vocabulary: from.id.clone(),
        })?;
    if entry.expansion.is_empty() {
        return Err(VocabError::BadAnchor {
            class: entry.class.clone(),
            message: "expansion is empty".into(),
        });
    }
    let mut targets = Vec::with_capacity(entry.expansion.len());
    for (i, template) in entry.expansion.iter().enumerate() {
        let spec = to
            .class(&template.class)
            .ok_or_else(|| VocabError::UnknownClassInMapping {
                class: template.class.clone(),
                vocabulary: to.id.clone(),
            })?;
        if let Some(parent) = template.parent {
            if parent >= i {
                return Err(VocabError::BadAnchor {
                    class: entry.class.clone(),
                    message: format!(
                        "template {i} names parent {parent}, which does not precede it"
                    ),
                });
            }
            if !targets_container(&targets, parent) {
                return Err(VocabError::BadAnchor {
                    class: entry.class.clone(),
                    message: format!("template {i} is nested in non-container template {parent}"),
                });
            }
        }
        targets.push(spec);
    }
    match entry.child_anchor {
        Some(anchor) => {
            let spec = targets.get(anchor).ok_or_else(|| VocabError::BadAnchor {
                class: entry.class.clone(),
                message: format!("child_anchor {anchor} is out of range"),
            })?;
            if !spec.container {
                return Err(VocabError::BadAnchor {
                    class: entry.class.clone(),
                    message: format!(
                        "child_anchor names `{}`, which is not a container",
                        spec.name
                    ),
                });
            }
        }
        None if generic.container => {
            return Err(VocabError::BadAnchor {
                class: entry.class.clone(),
                message: "container class needs a child_anchor".into(),
            })
        }
        None => {}
    }
    let prop_routes = entry.property_routes.iter().chain(&entry.platform_routes);
    for (source, route) in prop_routes {
        let spec = targets
            .get(route.index)
            .ok_or_else(|| VocabError::BadRoute {
                class: entry.class.clone(),
                message: format!(
                    "route for `{source}` names template {}, out of range",
                    route.index
                ),
            })?;
        if spec.property(&route.property).is_none() {
            return Err(VocabError::BadRoute {
                class: entry.class.clone(),
                message: format!(
                    "route for `{source}` names `{}`, not a property of `{}`",
                    route.property, spec.name
                ),
            });
        }
    }
    for source in entry.property_routes.keys() {
        if generic.property(source).is_none() {
            return Err(VocabError::BadRoute {
                class: entry.class.clone(),
                message: format!("`{source}` is not a property of `{}`", generic.name),
            });
        }
    }
    for (source, route) in &entry.event_routes {
        let spec = targets
            .get(route.index)
            .ok_or_else(|| VocabError::BadRoute {
                class: entry.class.clone(),
                message: format!(
                    "route for `{source}` names template {}, out of range",
                    route.index
                ),
            })?;
        if !generic.has_event(source) {
            return Err(VocabError::BadRoute {
                class: entry.class.clone(),
                message: format!("`{source}` is not an event of `{}`", generic.name),
            });
        }
        if !spec.has_event(&route.event) {
            return Err(VocabError::BadRoute {
                class: entry.class.clone(),
                message: format!(
                    "route for `{source}` names `{}`, not an event of `{}`",
                    route.event, spec.name
                ),
            });
        }
    }
    Ok(())
}

fn targets_container(targets: &[&ClassSpec], index: usize) -> bool {
    targets.get(index).is_some_and(|c| c.container)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| {
        if source.kind() == std::io::ErrorKind::NotFound {
            VocabError::FileNotFound {
                path: path.display().to_string(),
            }
        } else {
            VocabError::Io {
                path: path.display().to_string(),
                source,
            }
        }
    })
}

fn format_error(text: &str, err: &serde_json::Error) -> VocabError {
    let line = err.line();
    let column = err.column();
    let offset = text
        .split_inclusive('\n')
        .take(line.saturating_sub(1))
        .map(str::len)
        .sum::<usize>()
        + column.saturating_sub(1);
    VocabError::FormatError {
        message: err.to_string(),
        location: SourcePos::new(offset.min(text.len()), line as u32, column as u32),
    }
}

/// The vocabularies and mappings that ship with the toolkit.
pub mod builtin {
    use super::*;

    pub const GENERIC_VOCAB: &str = include_str!("../../../vocab/generic.vocab.json");
    pub const HTML_VOCAB: &str = include_str!("../../../vocab/html.vocab.json");
    pub const MOCKDESK_VOCAB: &str = include_str!("../../../vocab/mockdesk.vocab.json");
    pub const GENERIC_TO_HTML: &str = include_str!("../../../vocab/generic-to-html.map.json");
    pub const GENERIC_TO_MOCKDESK: &str =
        include_str!("../../../vocab/generic-to-mockdesk.map.json");

    pub fn generic() -> Vocabulary {
        Vocabulary::from_json(GENERIC_VOCAB).expect("shipped generic vocabulary is valid")
    }

    pub fn html() -> Vocabulary {
        Vocabulary::from_json(HTML_VOCAB).expect("shipped html vocabulary is valid")
    }

    pub fn mockdesk() -> Vocabulary {
        Vocabulary::from_json(MOCKDESK_VOCAB).expect("shipped mockdesk vocabulary is valid")
    }

    pub fn generic_to_html() -> MappingSet {
        MappingSet::from_json(GENERIC_TO_HTML, &generic(), &html())
            .expect("shipped generic-to-html mapping is valid")
    }

    pub fn generic_to_mockdesk() -> MappingSet {
        MappingSet::from_json(GENERIC_TO_MOCKDESK, &generic(), &mockdesk())
            .expect("shipped generic-to-mockdesk mapping is valid")
    }

    /// Resolve a shipped mapping by id (`generic-to-html`, `html`, ...).
    pub fn mapping(id: &str) -> Option<MappingSet> {
        match id {
            "generic-to-html" | "html" => Some(generic_to_html()),
            "generic-to-mockdesk" | "mockdesk" => Some(generic_to_mockdesk()),
            _ => None,
        }
    }

    /// Target vocabulary for a shipped mapping target id.
    pub fn target_vocabulary(id: &str) -> Option<Vocabulary> {
        match id {
            "html" => Some(html()),
            "mockdesk" => Some(mockdesk()),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE_2: [&str; 10] = [
        "G:TopContainer",
        "G:Area",
        "G:InternalFrame",
        "G:Menu",
        "G:MenuBar",
        "G:Label",
        "G:Button",
        "G:Icon",
        "G:RadioButton",
        "G:FileChooser",
    ];

    #[test]
    fn generic_vocabulary_has_the_generic_classes() {
        let vocab = builtin::generic();
        assert_eq!(vocab.platform_prefix, "g:");
        for class in TABLE_2.iter().chain(&["G:Text", "G:List"]) {
            assert!(vocab.class(class).is_some(), "{class} missing");
        }
    }

    #[test]
    fn empty_classes_is_a_format_error() {
        let err =
            Vocabulary::from_json(r#"{"id":"x","family":"f","platform_prefix":"x:","classes":[]}"#)
                .unwrap_err();
        assert_eq!(err.code(), "FormatError");
    }

    #[test]
    fn syntax_error_carries_location() {
        let err = Vocabulary::from_json("{\n  \"id\": \"x\",\n  oops\n}").unwrap_err();
        match err {
            VocabError::FormatError { location, .. } => assert_eq!(location.line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicate_class() {
        let err = Vocabulary::from_json(
            r#"{"id":"x","family":"f","platform_prefix":"x:","classes":[{"name":"A"},{"name":"A"}]}"#,
        )
        .unwrap_err();
        assert_eq!(err.code(), "DuplicateClass");
    }

    #[test]
    fn prefix_must_be_lowercase_with_colon() {
        for prefix in ["X:", "x", ":"] {
            let text = format!(
                r#"{{"id":"x","family":"f","platform_prefix":"{prefix}","classes":[{{"name":"A"}}]}}"#
            );
            assert_eq!(
                Vocabulary::from_json(&text).unwrap_err().code(),
                "FormatError"
            );
        }
    }

    #[test]
    fn missing_file() {
        let err = load_vocabulary("/definitely/not/here.vocab.json").unwrap_err();
        assert_eq!(err.code(), "FileNotFound");
    }

    #[test]
    fn top_container_expansions() {
        let html = builtin::generic_to_html();
        let entry = lookup_expansion(&html, "G:TopContainer").unwrap();
        let classes: Vec<_> = entry.expansion.iter().map(|t| t.class.as_str()).collect();
        assert_eq!(
            classes,
            ["html", "head", "title", "base", "style", "link", "meta", "body"]
        );
        assert_eq!(entry.child_anchor, Some(7));

        let mock = builtin::generic_to_mockdesk();
        let entry = lookup_expansion(&mock, "G:TopContainer").unwrap();
        assert_eq!(entry.expansion.len(), 1);
        assert_eq!(entry.expansion[0].class, "Frame");
        assert_eq!(entry.child_anchor, Some(0));
    }

    #[test]
    fn not_mapped_is_an_error() {
        let err = lookup_expansion(&builtin::generic_to_html(), "G:Nonexistent").unwrap_err();
        assert_eq!(err.code(), "NotMapped");
    }

    #[test]
    fn shipped_mappings_cover_every_generic_class() {
        let generic = builtin::generic();
        for ms in [builtin::generic_to_html(), builtin::generic_to_mockdesk()] {
            assert!(ms.warnings.is_empty(), "{:?}", ms.warnings);
            for class in generic.classes() {
                let entry = lookup_expansion(&ms, &class.name).unwrap();
                for prop in &class.properties {
                    let routed = entry.property_routes.contains_key(&prop.name)
                        || entry.platform_routes.contains_key(&prop.name)
                        || !prop.name.starts_with("g:");
                    assert!(
                        routed,
                        "{} {} unrouted in {}",
                        class.name, prop.name, ms.to_vocab
                    );
                }
                for event in &class.events {
                    assert!(entry.event_routes.contains_key(event));
                }
            }
        }
    }

    #[test]
    fn anchors_are_containers_and_routes_close() {
        let to = [builtin::html(), builtin::mockdesk()];
        for (ms, vocab) in [builtin::generic_to_html(), builtin::generic_to_mockdesk()]
            .iter()
            .zip(&to)
        {
            for entry in ms.entries() {
                if let Some(anchor) = entry.child_anchor {
                    let class = &entry.expansion[anchor].class;
                    assert!(vocab.class(class).unwrap().container);
                }
                for route in entry
                    .property_routes
                    .values()
                    .chain(entry.platform_routes.values())
                {
                    let class = &entry.expansion[route.index].class;
                    assert!(vocab
                        .class(class)
                        .unwrap()
                        .property(&route.property)
                        .is_some());
                }
            }
        }
    }

    fn tiny_vocab(id: &str, prefix: &str, classes: &str) -> Vocabulary {
        Vocabulary::from_json(&format!(
            r#"{{"id":"{id}","family":"f","platform_prefix":"{prefix}","classes":{classes}}}"#
        ))
        .unwrap()
    }

    #[test]
    fn mapping_errors() {
        let from = tiny_vocab(
            "g",
            "g:",
            r#"[{"name":"G:Box","container":true},{"name":"G:Leaf"}]"#,
        );
        let to = tiny_vocab(
            "t",
            "t:",
            r#"[{"name":"box","container":true},{"name":"leaf"}]"#,
        );

        let unknown = r#"{"from":"g","to":"t","entries":[{"class":"G:Box","expansion":[{"class":"nope"}],"child_anchor":0}]}"#;
        assert_eq!(
            MappingSet::from_json(unknown, &from, &to)
                .unwrap_err()
                .code(),
            "UnknownClassInMapping"
        );

        let bad_anchor = r#"{"from":"g","to":"t","entries":[{"class":"G:Box","expansion":[{"class":"leaf"}],"child_anchor":0}]}"#;
        assert_eq!(
            MappingSet::from_json(bad_anchor, &from, &to)
                .unwrap_err()
                .code(),
            "BadAnchor"
        );

        let out_of_range = r#"{"from":"g","to":"t","entries":[{"class":"G:Box","expansion":[{"class":"box"}],"child_anchor":3}]}"#;
        assert_eq!(
            MappingSet::from_json(out_of_range, &from, &to)
                .unwrap_err()
                .code(),
            "BadAnchor"
        );

        let partial = r#"{"from":"g","to":"t","entries":[{"class":"G:Box","expansion":[{"class":"box"}],"child_anchor":0}]}"#;
        let ms = MappingSet::from_json(partial, &from, &to).unwrap();
        assert_eq!(ms.warnings.len(), 1);
        assert_eq!(ms.target_prefix, "t:");
    }
}
