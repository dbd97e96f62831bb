//! One line per acceptance criterion. Exits non-zero if any fails.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use http_body_util::BodyExt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};
use tower::ServiceExt;
use uiml_core::behavior::{
    dispatch, instantiate_runtime, EventInstance, DEFAULT_EVENT_DEPTH_LIMIT,
};
use uiml_core::doc::{parse_document, serialize_document, validate};
use uiml_core::render::RenderTarget;
use uiml_core::testgen::{
    chain_document, is_bijection, oracle_mismatch, random_behavior_document, random_events,
    transform_violations, GenConfig, Oracle,
};
use uiml_core::vocab::builtin;
use uiml_core::xform::transform;
use uiml_core::{render_document, resolve_for_render, UimlDocument};

type Check = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Check, Duration);

fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn load(name: &str) -> Result<UimlDocument, String> {
    let text = fs::read_to_string(fixtures_dir().join(name)).map_err(|e| e.to_string())?;
    parse_document(&text).map_err(|e| e.to_string())
}

fn ensure(ok: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(why())
    }
}

fn p1() -> Check {
    let doc = load("data_collection.uiml")?;
    let expected = [
        ("RequestWindow", "G:TopContainer"),
        ("EBlock1", "G:Area"),
        ("TitleLabel", "G:Label"),
        ("FirstName", "G:Label"),
        ("FirstNameField", "G:Text"),
        ("LastName", "G:Label"),
        ("LastNameField", "G:Text"),
        ("StreetAddress", "G:Label"),
        ("StreetAddressField", "G:Text"),
        ("City", "G:Label"),
        ("CityField", "G:Text"),
        ("State", "G:Label"),
        ("StateChoice", "G:List"),
        ("Zip", "G:Label"),
        ("ZipField", "G:Text"),
        ("OKBtn", "G:Button"),
        ("CancelBtn", "G:Button"),
        ("ResetBtn", "G:Button"),
    ];
    let got: Vec<(&str, &str)> = doc
        .interfaces
        .iter()
        .flat_map(|i| &i.structures)
        .flat_map(|s| s.parts())
        .map(|p| (p.name.as_str(), p.class.as_str()))
        .collect();
    ensure(got == expected, || format!("parts were {got:?}"))?;
    let errors: Vec<String> = validate(&doc, &builtin::generic())
        .iter()
        .filter(|d| d.is_error())
        .map(|d| d.to_string())
        .collect();
    ensure(errors.is_empty(), || {
        format!("validation errors {errors:?}")
    })?;
    Ok("18 parts, 0 validation errors".into())
}

fn shape(p: &uiml_core::doc::Part) -> String {
    if p.children.is_empty() {
        p.class.clone()
    } else {
        let kids: Vec<String> = p.children.iter().map(shape).collect();
        format!("{}[{}]", p.class, kids.join(","))
    }
}

fn p2() -> Check {
    let doc = load("data_collection.uiml")?;
    let html = transform(&doc, &builtin::generic_to_html(), "h:").map_err(|e| e.to_string())?;
    let root = &html.document.interfaces[0].structures[0].roots[0];
    let fields = "span,span,input,span,input,span,input,span,input,span,select,span,input,button,button,button";
    let want = format!("html[head[title,base,style,link,meta],body[div[{fields}]]]");
    ensure(shape(root) == want, || format!("html tree {}", shape(root)))?;

    let desk = transform(&doc, &builtin::generic_to_mockdesk(), "j:").map_err(|e| e.to_string())?;
    let s = &desk.document.interfaces[0].structures[0];
    let frames = s.parts().filter(|p| p.class == "Frame").count();
    ensure(frames == 1, || format!("{frames} Frame parts"))?;
    ensure(s.roots.len() == 1 && s.roots[0].class == "Frame", || {
        "root is not the Frame".into()
    })?;
    ensure(
        desk.source_map.origin(&s.roots[0].name) == Some("RequestWindow"),
        || "Frame does not come from RequestWindow".into(),
    )?;
    Ok("html/head/title/base/style/link/meta/body; one Frame".into())
}

fn p3() -> Check {
    let doc = load("platform_styles.uiml")?;
    let html = render_document(&doc, RenderTarget::Html, Some("onlyHTML"), None)
        .map_err(|e| e.to_string())?
        .output
        .text;
    let title = html
        .split("<title")
        .nth(1)
        .and_then(|rest| rest.split_once('>'))
        .and_then(|(_, rest)| rest.split_once("</title>"))
        .map(|(t, _)| t.to_string());
    ensure(title.as_deref() == Some("My User Interface"), || {
        format!("title {title:?}")
    })?;
    ensure(html.contains(">a { color: red; }</style>"), || {
        "no link-color rule".into()
    })?;
    ensure(!html.contains("resizable"), || {
        "resizable leaked into HTML".into()
    })?;

    let desk = render_document(&doc, RenderTarget::MockDesk, Some("onlyJava"), None)
        .map_err(|e| e.to_string())?
        .output
        .text;
    let tree: Value = serde_json::from_str(&desk).map_err(|e| e.to_string())?;
    ensure(tree["props"]["resizable"] == "red", || {
        format!("props {}", tree["props"])
    })?;
    ensure(!desk.contains("link-color"), || {
        "link-color leaked into desktop".into()
    })?;
    Ok("onlyHTML and onlyJava filtered as declared".into())
}

fn p4() -> Check {
    let vocab = builtin::generic();
    let cfg = GenConfig {
        max_parts: 15,
        ..GenConfig::default()
    };
    let mappings = [builtin::generic_to_html(), builtin::generic_to_mockdesk()];
    let mut rng = StdRng::seed_from_u64(0x0a11_ce55);
    let mut total_parts = 0;
    for case in 0..500 {
        let doc = random_behavior_document(&mut rng, &vocab, &cfg);
        let parts: usize = doc.interfaces[0]
            .structures
            .iter()
            .map(|s| s.part_count())
            .sum();
        ensure(parts <= 30, || format!("case {case}: {parts} parts"))?;
        total_parts += parts;
        for ms in &mappings {
            let out = transform(&doc, ms, &ms.target_prefix)
                .map_err(|e| format!("case {case} to {}: {e}", ms.to_vocab))?;
            let bad = transform_violations(&doc, &out, ms, &ms.target_prefix);
            ensure(bad.is_empty(), || {
                format!("case {case} to {}: {bad:?}", ms.to_vocab)
            })?;
            if ms.to_vocab == "mockdesk" {
                ensure(is_bijection(&doc, &out.source_map), || {
                    format!("case {case}: desktop source map is not a bijection")
                })?;
            }
        }
    }
    Ok(format!("500 documents, {total_parts} parts, 0 violations"))
}

fn p5() -> Check {
    let vocab = builtin::generic();
    let cfg = GenConfig::default();
    let mut rng = StdRng::seed_from_u64(0xbe4a_7105);
    let mut events = 0;
    for case in 0..200 {
        let doc = random_behavior_document(&mut rng, &vocab, &cfg);
        ensure(doc.rule_count() <= 5, || {
            format!("case {case}: too many rules")
        })?;
        let script = random_events(&mut rng, &doc, 10);
        let limit = rng.gen_range(1..=DEFAULT_EVENT_DEPTH_LIMIT);
        events += script.len();
        if let Some(diff) = oracle_mismatch(&doc, limit, &script) {
            return Err(format!("case {case}: {diff}"));
        }
    }
    // A chain exactly as deep as the limit runs; one more level overflows.
    let click = EventInstance::new("C0", "g:click");
    for limit in 1..=DEFAULT_EVENT_DEPTH_LIMIT + 1 {
        for (depth, overflow) in [(limit, false), (limit + 1, true)] {
            let doc = chain_document(depth);
            let es = resolve_for_render(&doc.interfaces[0], None, None, None)
                .map_err(|e| e.to_string())?;
            let rt = instantiate_runtime(&doc, &es).map_err(|e| e.to_string())?;
            let mut rt = if limit == DEFAULT_EVENT_DEPTH_LIMIT {
                rt
            } else {
                rt.with_depth_limit(limit)
            };
            let got = dispatch(&mut rt, &doc, &click).map_err(|e| e.code());
            let oracle = Oracle::new(&doc, None, None, None, limit)
                .ok_or("oracle setup failed")?
                .step(&click);
            let hit = got == Err("EventCascadeOverflow");
            ensure(hit == overflow && oracle.is_err() == overflow, || {
                format!("limit {limit} depth {depth}: runtime {got:?} oracle {oracle:?}")
            })?;
        }
    }
    Ok(format!(
        "200 documents, {events} events, overflow exact for limits 1..=33"
    ))
}

fn corpus() -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for entry in fs::read_dir(fixtures_dir()).map_err(|e| e.to_string())? {
        let path = entry.map_err(|e| e.to_string())?.path();
        if path.extension().is_some_and(|e| e == "uiml") {
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            out.push((name, fs::read_to_string(&path).map_err(|e| e.to_string())?));
        }
    }
    out.sort();
    Ok(out)
}

fn style_choices(doc: &UimlDocument) -> Vec<Option<String>> {
    let mut out = vec![None];
    out.extend(doc.interfaces[0].styles.iter().map(|s| Some(s.id.clone())));
    out
}

fn p6() -> Check {
    let mut renders = 0;
    let mut docs = 0;
    for (name, text) in corpus()? {
        // A fixture that is meant to be rejected must be rejected the same way twice.
        let doc = match parse_document(&text) {
            Ok(doc) => doc,
            Err(e) => {
                ensure(parse_document(&text).err() == Some(e), || {
                    format!("{name}: unstable error")
                })?;
                continue;
            }
        };
        docs += 1;
        let once = serialize_document(&doc);
        let back = parse_document(&once).map_err(|e| format!("{name}: reparse {e}"))?;
        ensure(back == doc, || {
            format!("{name}: parse after serialize changed the model")
        })?;
        ensure(serialize_document(&back) == once, || {
            format!("{name}: serialize is not a fixpoint")
        })?;
        for target in RenderTarget::ALL {
            for style in style_choices(&doc) {
                let a = render_document(&doc, target, style.as_deref(), None);
                let b = render_document(&doc, target, style.as_deref(), None);
                match (a, b) {
                    (Ok(a), Ok(b)) => {
                        ensure(a.output.text == b.output.text, || {
                            format!("{name} {target} {style:?}")
                        })?;
                        renders += 1;
                    }
                    (a, b) => ensure(a.err() == b.err(), || {
                        format!("{name} {target}: errors differ")
                    })?,
                }
            }
        }
    }
    Ok(format!(
        "{docs} documents round-trip, {renders} renders repeat byte-for-byte"
    ))
}

async fn api_render(app: &axum::Router, body: Value) -> Result<(StatusCode, Vec<u8>), String> {
    let req = Request::builder()
        .method(Method::POST)
        .uri("/api/render")
        .header("content-type", "application/json")
        .body(Body::from(body.to_string()))
        .map_err(|e| e.to_string())?;
    let resp = app.clone().oneshot(req).await.map_err(|e| e.to_string())?;
    let status = resp.status();
    let bytes = resp
        .into_body()
        .collect()
        .await
        .map_err(|e| e.to_string())?
        .to_bytes();
    Ok((status, bytes.to_vec()))
}

fn cmd_render(
    file: &Path,
    target: RenderTarget,
    style: Option<&str>,
    out: &Path,
) -> Result<Option<Vec<u8>>, String> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_uiml"));
    cmd.arg("render")
        .arg(file)
        .args(["--target", target.id()])
        .arg("-o")
        .arg(out);
    if let Some(s) = style {
        cmd.args(["--style", s]);
    }
    let status = cmd
        .stderr(Stdio::null())
        .status()
        .map_err(|e| e.to_string())?;
    match status.code() {
        Some(0) => fs::read(out).map(Some).map_err(|e| e.to_string()),
        Some(1) => Ok(None),
        other => Err(format!("{}: exit {other:?}", file.display())),
    }
}

fn p7() -> Check {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let rt = tokio::runtime::Runtime::new().map_err(|e| e.to_string())?;
    let mut compared = 0;
    let mut refused = 0;
    for (name, text) in corpus()? {
        let file = fixtures_dir().join(&name);
        let Ok(doc) = parse_document(&text) else {
            let out = tmp.path().join("unused");
            ensure(
                cmd_render(&file, RenderTarget::Html, None, &out)?.is_none(),
                || format!("{name}: cli rendered a document the server cannot open"),
            )?;
            ensure(uiml_cli::serve::app(text.clone(), None).is_err(), || {
                format!("{name}: server opened it")
            })?;
            refused += 1;
            continue;
        };
        let app = uiml_cli::serve::app(text.clone(), None).map_err(|e| e.message)?;
        for target in RenderTarget::ALL {
            for style in style_choices(&doc) {
                let out = tmp.path().join(format!(
                    "{name}.{target}.{}",
                    style.as_deref().unwrap_or("-")
                ));
                let cli = cmd_render(&file, target, style.as_deref(), &out)?;
                let raw = json!({"target": target, "style": style, "raw": true});
                let (status, body) = rt.block_on(api_render(&app, raw))?;
                let (_, json_body) =
                    rt.block_on(api_render(&app, json!({"target": target, "style": style})))?;
                match cli {
                    Some(bytes) => {
                        ensure(status == StatusCode::OK && body == bytes, || {
                            format!("{name} {target} {style:?}: bodies differ")
                        })?;
                        let v: Value =
                            serde_json::from_slice(&json_body).map_err(|e| e.to_string())?;
                        ensure(
                            v["output"]["text"].as_str().map(str::as_bytes) == Some(&bytes[..]),
                            || format!("{name} {target} {style:?}: JSON text differs"),
                        )?;
                        compared += 1;
                    }
                    None => {
                        ensure(status == StatusCode::BAD_REQUEST, || {
                            format!(
                                "{name} {target} {style:?}: cli failed, server answered {status}"
                            )
                        })?;
                        refused += 1;
                    }
                }
            }
        }
    }
    Ok(format!(
        "{compared} identical renders, {refused} refused by both"
    ))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("P1", "fixture fidelity", p1, Duration::from_secs(1)),
        ("P2", "top-container expansion", p2, Duration::from_secs(1)),
        (
            "P3",
            "platform-property filtering",
            p3,
            Duration::from_secs(1),
        ),
        ("P4", "transform laws", p4, Duration::from_secs(30)),
        (
            "P5",
            "behavior oracle equivalence",
            p5,
            Duration::from_secs(30),
        ),
        (
            "P6",
            "determinism and round-trip",
            p6,
            Duration::from_secs(5),
        ),
        ("P7", "cli/serve equivalence", p7, Duration::from_secs(10)),
    ];
    let mut failed = 0;
    for (id, title, check, budget) in criteria {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let result = match result {
            Ok(detail) if took > budget => {
                Err(format!("{detail}, but took {took:.2?} (budget {budget:?})"))
            }
            other => other,
        };
        match result {
            Ok(detail) => println!("{id} PASS {title}: {detail} ({took:.2?})"),
            Err(why) => {
                failed += 1;
                println!("{id} FAIL {title}: {why} ({took:.2?})");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
