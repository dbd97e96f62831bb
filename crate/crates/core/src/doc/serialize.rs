//! Canonical UIML text: fixed attribute order per element, two-space
//! indentation, LF line endings, trailing newline.

use std::fmt::Write;

use super::*;

pub fn serialize_document(doc: &UimlDocument) -> String {
    let mut w = Writer::default();
    w.line(0, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    match &doc.doc_name {
        Some(name) => w.line(0, &format!("<uiml name=\"{}\">", escape_attr(name))),
        None => w.line(0, "<uiml>"),
    }
    if !doc.head.is_empty() {
        w.line(1, "<head>");
        for meta in &doc.head {
            w.line(
                2,
                &format!(
                    "<meta name=\"{}\" content=\"{}\"/>",
                    escape_attr(&meta.name),
                    escape_attr(&meta.content)
                ),
            );
        }
        w.line(1, "</head>");
    }
    for iface in &doc.interfaces {
        w.interface(iface);
    }
    for blob in &doc.opaque {
        w.line(1, &blob.raw);
    }
    w.line(0, "</uiml>");
    w.out
}

#[derive(Default)]
struct Writer {
    out: String,
}

impl Writer {
    fn line(&mut self, depth: usize, text: &str) {
        for _ in 0..depth {
            self.out.push_str("  ");
        }
        self.out.push_str(text);
        self.out.push('\n');
    }

    fn interface(&mut self, iface: &Interface) {
        self.line(
            1,
            &format!("<interface name=\"{}\">", escape_attr(&iface.name)),
        );
        for structure in &iface.structures {
            self.line(
                2,
                &format!("<structure id=\"{}\">", escape_attr(&structure.id)),
            );
            for part in &structure.roots {
                self.part(3, part);
            }
            self.line(2, "</structure>");
        }
        for style in &iface.styles {
            self.style(style);
        }
        for group in &iface.contents {
            let open = format!("<content id=\"{}\"", escape_attr(&group.id));
            if group.constants.is_empty() {
                self.line(2, &format!("{open}/>"));
                continue;
            }
            self.line(2, &format!("{open}>"));
            for constant in &group.constants {
                self.line(
                    3,
                    &format!(
                        "<constant id=\"{}\">{}</constant>",
                        escape_attr(&constant.id),
                        escape_text(&constant.value)
                    ),
                );
            }
            self.line(2, "</content>");
        }
        for behavior in &iface.behaviors {
            if behavior.rules.is_empty() {
                self.line(2, "<behavior/>");
                continue;
            }
            self.line(2, "<behavior>");
            for rule in &behavior.rules {
                self.rule(rule);
            }
            self.line(2, "</behavior>");
        }
        self.line(1, "</interface>");
    }

    fn part(&mut self, depth: usize, part: &Part) {
        let open = format!(
            "<part name=\"{}\" class=\"{}\"",
            escape_attr(&part.name),
            escape_attr(&part.class)
        );
        if part.children.is_empty() && part.intrinsic.is_empty() {
            self.line(depth, &format!("{open}/>"));
            return;
        }
        self.line(depth, &format!("{open}>"));
        for prop in &part.intrinsic {
            self.line(
                depth + 1,
                &format!(
                    "<property name=\"{}\">{}</property>",
                    escape_attr(&prop.name),
                    escape_text(&prop.value)
                ),
            );
        }
        for child in &part.children {
            self.part(depth + 1, child);
        }
        self.line(depth, "</part>");
    }

    fn style(&mut self, style: &Style) {
        let mut open = format!("<style id=\"{}\"", escape_attr(&style.id));
        if let Some(source) = &style.source {
            let _ = write!(open, " source=\"{}\"", escape_attr(source));
        }
        if style.properties.is_empty() {
            self.line(2, &format!("{open}/>"));
            return;
        }
        self.line(2, &format!("{open}>"));
        for binding in &style.properties {
            let target = match &binding.target {
                BindingTarget::Part(name) => format!("part-name=\"{}\"", escape_attr(name)),
                BindingTarget::Class(name) => format!("part-class=\"{}\"", escape_attr(name)),
            };
            self.line(
                3,
                &format!(
                    "<property {target} name=\"{}\">{}</property>",
                    escape_attr(binding.name.as_str()),
                    escape_text(&binding.value.to_text())
                ),
            );
        }
        self.line(2, "</style>");
    }

    fn rule(&mut self, rule: &Rule) {
        self.line(3, "<rule>");
        self.line(4, "<condition>");
        let test = match &rule.condition {
            Condition::EventOccurs { part, event_class } => format!(
                "<event part-name=\"{}\" class=\"{}\"/>",
                escape_attr(part),
                escape_attr(event_class)
            ),
            Condition::EventDataEquals {
                part,
                event_class,
                data_name,
                expected,
            } => format!(
                "<equal part-name=\"{}\" class=\"{}\" data=\"{}\" value=\"{}\"/>",
                escape_attr(part),
                escape_attr(event_class),
                escape_attr(data_name),
                escape_attr(expected)
            ),
        };
        self.line(5, &test);
        self.line(4, "</condition>");
        self.line(4, "<action>");
        for action in &rule.actions {
            self.action(action);
        }
        self.line(4, "</action>");
        self.line(3, "</rule>");
    }

    fn action(&mut self, action: &Action) {
        match action {
            Action::SetProperty { part, prop, value } => self.line(
                5,
                &format!(
                    "<property part-name=\"{}\" name=\"{}\">{}</property>",
                    escape_attr(part),
                    escape_attr(prop.as_str()),
                    escape_text(&value.to_text())
                ),
            ),
            Action::CallFunction { function, args } => {
                let open = format!("<call name=\"{}\"", escape_attr(function));
                if args.is_empty() {
                    self.line(5, &format!("{open}/>"));
                    return;
                }
                self.line(5, &format!("{open}>"));
                for arg in args {
                    self.line(6, &format!("<param>{}</param>", escape_text(arg)));
                }
                self.line(5, "</call>");
            }
            Action::FireEvent {
                part,
                event_class,
                data,
            } => {
                let open = format!(
                    "<fire part-name=\"{}\" class=\"{}\"",
                    escape_attr(part),
                    escape_attr(event_class)
                );
                if data.is_empty() {
                    self.line(5, &format!("{open}/>"));
                    return;
                }
                self.line(5, &format!("{open}>"));
                for (name, value) in data {
                    self.line(
                        6,
                        &format!(
                            "<data name=\"{}\">{}</data>",
                            escape_attr(name),
                            escape_text(value)
                        ),
                    );
                }
                self.line(5, "</fire>");
            }
            Action::Restructure { structure_id } => self.line(
                5,
                &format!("<restructure structure=\"{}\"/>", escape_attr(structure_id)),
            ),
        }
    }
}

pub(crate) fn escape_text(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '\r' => out.push_str("&#13;"),
            _ => out.push(c),
        }
    }
    out
}

pub(crate) fn escape_attr(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\n' => out.push_str("&#10;"),
            '\r' => out.push_str("&#13;"),
            '\t' => out.push_str("&#9;"),
            _ => out.push(c),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doc::parse_document;

    #[test]
    fn canonical_layout() {
        let doc = parse_document(
            r#"<uiml><interface name="I"><structure><part class="G:TopContainer" name="W"><part name="L" class="G:Label"/></part></structure><style id="s"><property part-class="G:Label" id="g:text">a &lt; b</property></style></interface></uiml>"#,
        )
        .unwrap();
        let expected = "\
<?xml version=\"1.0\" encoding=\"UTF-8\"?>
<uiml>
  <interface name=\"I\">
    <structure id=\"structure-1\">
      <part name=\"W\" class=\"G:TopContainer\">
        <part name=\"L\" class=\"G:Label\"/>
      </part>
    </structure>
    <style id=\"s\">
      <property part-class=\"G:Label\" name=\"g:text\">a &lt; b</property>
    </style>
  </interface>
</uiml>
";
        assert_eq!(serialize_document(&doc), expected);
    }

    #[test]
    fn attribute_whitespace_survives() {
        let doc = parse_document(
            "<uiml><head><meta name=\"n\" content=\"a&#10;b\"/></head><interface><structure><part name=\"A\" class=\"G:Area\"/></structure></interface></uiml>",
        )
        .unwrap();
        let again = parse_document(&serialize_document(&doc)).unwrap();
        assert_eq!(again.head[0].content, "a\nb");
    }
}
