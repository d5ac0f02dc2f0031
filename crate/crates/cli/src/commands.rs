//! The subcommands. Each returns the text to print on success.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::Arc;

use bispan_core::bispan::{compose_bispans, Bispan};
use bispan_core::checks::{run_suite, CheckConfig, CheckReport, Counterexample, Suite};
use bispan_core::context::{dependent_product, Ambient, DistributivityDiagram, Mor};
use bispan_core::degree::degree_decomposition;
use bispan_core::eval::{compile, default_names, evaluate, finite_difference_degree, polynomial_oracle, Poly, Semiring, Tropical};
use bispan_core::finset::FinSet;
use bispan_core::gset::{double_coset_decomposition, quotient_map, underlying_map, GSet, Group, Subgroup};
use bispan_core::tambara::BurnsideElement;
use num_bigint::{BigInt, BigUint};
use serde_json::json;

use crate::document::{
    resolve_subgroup, AnyBispan, BispanDecl, Diagnostic, Document, GSetDecl, GroupDecl, Model, MorphismDecl, Morphism,
    Object, ObjectDecl,
};

pub const SEMIRINGS: [&str; 5] = ["nat", "int", "bool", "tropical", "poly"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
    Dot,
}

/// How a command failed, mapped onto the exit-code contract.
#[derive(Debug)]
pub enum Failure {
    /// Bad input or arguments: exit code 2.
    Usage(Diagnostic),
    /// A check suite found a counterexample: exit code 1, with the report
    /// still printed.
    Check(String),
}

impl From<Diagnostic> for Failure {
    fn from(d: Diagnostic) -> Self {
        Failure::Usage(d)
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure::Usage(Diagnostic::new(message))
}

type Outcome = Result<String, Failure>;

fn unsupported(format: Format, command: &str) -> Failure {
    usage(format!("{command} does not support --format {format:?}").to_lowercase())
}

fn plain(b: &Bispan<GSet>) -> Bispan<FinSet> {
    Bispan::new(underlying_map(b.p()), underlying_map(b.f()), underlying_map(b.l())).expect("flags are kept")
}

fn canonical_string(b: &AnyBispan) -> String {
    match b {
        AnyBispan::Fin(b) => polynomial_oracle(b).to_string(),
        AnyBispan::G(b) => polynomial_oracle(&plain(b)).to_string(),
    }
}

fn tokens(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// Declaration of a fresh object in the style of `like`.
fn object_decl<O: Ambient + Clone>(obj: &O, action: Option<Vec<Vec<usize>>>, group: Option<&str>, prefix: &str) -> ObjectDecl {
    match (action, group) {
        (Some(action), Some(group)) => ObjectDecl::GSet(GSetDecl {
            group: group.to_string(),
            elements: tokens(prefix, obj.len()),
            action,
            orbits: Vec::new(),
        }),
        _ => ObjectDecl::Tokens(tokens(prefix, obj.len())),
    }
}

fn gset_action(x: &GSet) -> Vec<Vec<usize>> {
    x.group().generators().iter().map(|&g| (0..x.len()).map(|i| x.act(g, i)).collect()).collect()
}

fn flags_of<O>(m: &Mor<O>) -> String
where
    O: Ambient,
{
    let c = m.classes();
    format!("{}{}", if c.f { "F" } else { "" }, if c.l { "L" } else { "" })
}

/// A document holding `b` as bispan `name`, reusing the declarations of
/// its end objects `src` and `tgt` from `model`.
fn bispan_document(model: &Model, name: &str, b: &AnyBispan, src: &str, tgt: &str) -> Document {
    let mut doc = Document { groups: model.doc.groups.clone(), subgroups: model.doc.subgroups.clone(), ..Default::default() };
    for id in [src, tgt] {
        doc.objects.insert(id.to_string(), model.doc.objects[id].clone());
    }
    let group_id = match &model.doc.objects[src] {
        ObjectDecl::GSet(g) => Some(g.group.clone()),
        ObjectDecl::Tokens(_) => None,
    };
    let (e_id, b_id) = (format!("{name}.E"), format!("{name}.B"));
    let (e_decl, b_decl, legs) = match b {
        AnyBispan::Fin(x) => (
            object_decl(x.e(), None, None, "e"),
            object_decl(x.b(), None, None, "b"),
            [(x.p().map().to_vec(), flags_of(x.p())), (x.f().map().to_vec(), flags_of(x.f())), (x.l().map().to_vec(), flags_of(x.l()))],
        ),
        AnyBispan::G(x) => (
            object_decl(x.e(), Some(gset_action(x.e())), group_id.as_deref(), "e"),
            object_decl(x.b(), Some(gset_action(x.b())), group_id.as_deref(), "b"),
            [(x.p().map().to_vec(), flags_of(x.p())), (x.f().map().to_vec(), flags_of(x.f())), (x.l().map().to_vec(), flags_of(x.l()))],
        ),
    };
    doc.objects.insert(e_id.clone(), e_decl);
    doc.objects.insert(b_id.clone(), b_decl);
    let ends = [(&e_id, src), (&e_id, b_id.as_str()), (&b_id, tgt)];
    let names = ["p", "f", "l"].map(|leg| format!("{name}.{leg}"));
    for ((leg_name, (map, flags)), (dom, cod)) in names.iter().zip(legs).zip(ends) {
        doc.morphisms.insert(leg_name.clone(), MorphismDecl { dom: dom.clone(), cod: cod.to_string(), map, flags });
    }
    doc.bispans.insert(name.to_string(), BispanDecl { p: names[0].clone(), f: names[1].clone(), l: names[2].clone() });
    doc
}

/// `second ∘ first`.
pub fn compose(model: &Model, first: &str, second: &str, format: Format) -> Outcome {
    let b1 = model.bispan(first)?;
    let b2 = model.bispan(second)?;
    let (src, mid1) = model.bispan_ends(first).expect("declared");
    let (mid2, tgt) = model.bispan_ends(second).expect("declared");
    if mid1 != mid2 {
        return Err(model
            .error_at(
                second,
                format!("boundary mismatch: '{first}' ends at '{mid1}' but '{second}' starts at '{mid2}'"),
            )
            .into());
    }
    let composite = match (b1, b2) {
        (AnyBispan::Fin(a), AnyBispan::Fin(b)) => compose_bispans(b, a).map(AnyBispan::Fin),
        (AnyBispan::G(a), AnyBispan::G(b)) => compose_bispans(b, a).map(AnyBispan::G),
        _ => return Err(usage(format!("'{first}' and '{second}' mix plain sets and G-sets"))),
    }
    .map_err(|e| model.error_at(second, format!("cannot compose '{first}' then '{second}': {e}")))?;
    let canonical = canonical_string(&composite);
    let name = format!("{second}_after_{first}");
    match format {
        Format::Text => {
            let (e, b) = match &composite {
                AnyBispan::Fin(x) => (x.e().len(), x.b().len()),
                AnyBispan::G(x) => (x.e().len(), x.b().len()),
            };
            Ok(format!("composite: {name}: {src} -> {tgt} (|E| = {e}, |B| = {b})\ncanonical: {canonical}\n"))
        }
        Format::Json => {
            let mut doc = bispan_document(model, &name, &composite, src, tgt);
            doc.notes.insert("canonical".into(), canonical);
            Ok(doc.to_text())
        }
        Format::Dot => Err(unsupported(format, "compose")),
    }
}

fn parse_values<R>(values: &[String], parse: impl Fn(&str) -> Option<R>, kind: &str) -> Result<Vec<R>, Failure> {
    values.iter().map(|v| parse(v).ok_or_else(|| usage(format!("'{v}' is not a {kind} value")))).collect()
}

fn render_values<R: std::fmt::Display>(values: &[R]) -> String {
    let parts: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    if parts.len() == 1 {
        parts[0].clone()
    } else {
        format!("({})", parts.join(", "))
    }
}

fn run_eval<R: Semiring + std::fmt::Display>(b: &Bispan<FinSet>, input: Vec<R>) -> Outcome {
    let out = evaluate(&compile(b), &input).map_err(|e| usage(e.to_string()))?;
    Ok(format!("{}\n", render_values(&out)))
}

/// Evaluates a bispan of finite sets (or the underlying one of G-sets) in
/// a semiring; `poly` evaluates at the indeterminates.
pub fn eval(model: &Model, id: &str, semiring: &str, values: &[String]) -> Outcome {
    let kind = model.doc.semirings.get(semiring).map(String::as_str).unwrap_or(semiring);
    let b = match model.bispan(id)? {
        AnyBispan::Fin(b) => b.clone(),
        AnyBispan::G(b) => plain(b),
    };
    if kind != "poly" && values.len() != b.src().len() {
        return Err(usage(format!("bispan '{id}' takes {} values, got {}", b.src().len(), values.len())));
    }
    match kind {
        "nat" => run_eval(&b, parse_values(values, |v| BigUint::from_str(v).ok(), "natural")?),
        "int" => run_eval(&b, parse_values(values, |v| BigInt::from_str(v).ok(), "integer")?),
        "bool" => run_eval(
            &b,
            parse_values(
                values,
                |v| match v {
                    "true" | "1" => Some(true),
                    "false" | "0" => Some(false),
                    _ => None,
                },
                "Boolean",
            )?,
        ),
        "tropical" => run_eval(
            &b,
            parse_values(
                values,
                |v| if v == "inf" { Some(Tropical::infinity()) } else { BigInt::from_str(v).ok().map(|x| Tropical(Some(x))) },
                "tropical",
            )?,
        ),
        "poly" => {
            if !values.is_empty() {
                return Err(usage("the poly semiring evaluates at the indeterminates and takes no values"));
            }
            let arity = b.src().len();
            let vars: Vec<Poly> = (0..arity).map(Poly::var).collect();
            let out = evaluate(&compile(&b), &vars).map_err(|e| usage(e.to_string()))?;
            let names = default_names(arity);
            let parts: Vec<String> = out.iter().map(|p| p.render(&names)).collect();
            Ok(format!("{}\n", render_values(&parts)))
        }
        other => Err(usage(format!("unknown semiring '{other}'; expected one of {}", SEMIRINGS.join(", ")))),
    }
}

fn dist_output<O: Ambient>(d: &DistributivityDiagram<O>, ids: [&str; 3], format: Format) -> Outcome {
    let [x, y, z] = ids;
    let n = |o: &O| o.len();
    match format {
        Format::Dot => {
            let mut s = String::from("digraph distributivity {\n  rankdir=LR;\n");
            for (node, label, size) in [
                ("x", x, n(d.l.dom())),
                ("y", y, n(d.f.dom())),
                ("z", z, n(d.f.cod())),
                ("w", "w", n(&d.w)),
                ("fw", "f*w", n(&d.pb.apex)),
            ] {
                let _ = writeln!(s, "  {node} [label=\"{label} ({size})\"];");
            }
            for (from, to, label) in
                [("fw", "x", "eps"), ("fw", "w", "f~"), ("fw", "y", "f*g"), ("x", "y", "l"), ("w", "z", "g"), ("y", "z", "f")]
            {
                let _ = writeln!(s, "  {from} -> {to} [label=\"{label}\"];");
            }
            s.push_str("}\n");
            Ok(s)
        }
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "x = {x}: {} elements", n(d.l.dom()));
            let _ = writeln!(s, "y = {y}: {} elements", n(d.f.dom()));
            let _ = writeln!(s, "z = {z}: {} elements", n(d.f.cod()));
            let _ = writeln!(s, "w: {} elements", n(&d.w));
            let _ = writeln!(s, "f*w: {} elements", n(&d.pb.apex));
            for (i, sec) in d.sections.iter().enumerate() {
                let _ = writeln!(s, "  w{i} over z{}: {:?}", sec.base, sec.values);
            }
            let _ = writeln!(s, "g: {:?}", d.g.map());
            let _ = writeln!(s, "eps: {:?}", d.eps.map());
            let _ = writeln!(s, "f~: {:?}", d.f_tilde.map());
            Ok(s)
        }
        Format::Json => {
            let value = json!({
                "sizes": { "x": n(d.l.dom()), "y": n(d.f.dom()), "z": n(d.f.cod()), "w": n(&d.w), "f*w": n(&d.pb.apex) },
                "sections": d.sections.iter().map(|s| json!({ "base": s.base, "values": s.values })).collect::<Vec<_>>(),
                "g": d.g.map(),
                "eps": d.eps.map(),
                "f~": d.f_tilde.map(),
                "pb": d.pb.proj_g.map(),
            });
            Ok(format!("{}\n", serde_json::to_string_pretty(&value).expect("json values serialize")))
        }
    }
}

/// The distributivity diagram for `l: x -> y` and `f: y -> z`.
pub fn dist(model: &Model, l: &str, f: &str, format: Format) -> Outcome {
    let lm = model.morphism(l).map_err(usage)?;
    let fm = model.morphism(f).map_err(usage)?;
    let ids = [
        model.doc.morphisms[l].dom.as_str(),
        model.doc.morphisms[l].cod.as_str(),
        model.doc.morphisms[f].cod.as_str(),
    ];
    let fail = |e: bispan_core::Error| Failure::from(model.error_at(f, format!("no distributivity diagram for '{l}', '{f}': {e}")));
    match (lm, fm) {
        (Morphism::Fin(a), Morphism::Fin(b)) => dist_output(&dependent_product(a, b).map_err(fail)?, ids, format),
        (Morphism::G(a), Morphism::G(b)) => dist_output(&dependent_product(a, b).map_err(fail)?, ids, format),
        _ => Err(usage(format!("'{l}' and '{f}' mix plain sets and G-sets"))),
    }
}

/// Measured degrees of a bispan's evaluation, or the degree decomposition
/// of a morphism together with the measured degree of its norm.
pub fn degree(model: &Model, id: &str, bound: Option<usize>) -> Outcome {
    let mut s = String::new();
    let b = if let Some(b) = model.bispans.get(id) {
        match b {
            AnyBispan::Fin(b) => b.clone(),
            AnyBispan::G(b) => plain(b),
        }
    } else {
        let m = match model.morphism(id).map_err(|_| usage(format!("'{id}' is neither a bispan nor a morphism")))? {
            Morphism::Fin(m) => m.clone(),
            Morphism::G(m) => underlying_map(m),
        };
        let d = degree_decomposition(&m);
        let _ = writeln!(s, "degree  elements");
        for (n, count) in d.profile() {
            let _ = writeln!(s, "{n:<7} {count}");
        }
        Bispan::norm(&m).map_err(|e| usage(e.to_string()))?
    };
    let c = compile(&b);
    let needed = (0..c.tgt_arity).filter_map(|j| c.max_monomial(j)).max().unwrap_or(0) + 1;
    let bound = bound.unwrap_or(needed);
    let reports = finite_difference_degree(&c, bound).map_err(|e| usage(e.to_string()))?;
    for (j, r) in reports.iter().enumerate() {
        match r.total {
            None => {
                let _ = writeln!(s, "y{j}: zero");
            }
            Some(t) => {
                let per: Vec<String> = r
                    .per_variable
                    .iter()
                    .enumerate()
                    .filter_map(|(i, d)| d.filter(|&d| d > 0).map(|d| format!("x{i}: {d}")))
                    .collect();
                let _ = writeln!(s, "y{j}: degree {t} ({})", per.join(", "));
            }
        }
    }
    Ok(s)
}

/// A group from the document, or a built-in group by name.
pub fn lookup_group(model: Option<&Model>, id: &str) -> Result<(String, Arc<Group>), Failure> {
    if let Some(g) = model.and_then(|m| m.groups.get(id)) {
        return Ok((id.to_string(), g.clone()));
    }
    Group::by_name(id).map(|g| (id.to_string(), Arc::new(g))).ok_or_else(|| usage(format!("unknown group '{id}'")))
}

fn subgroup(model: Option<&Model>, group: &Group, group_id: &str, name: &str) -> Result<Subgroup, Failure> {
    let empty = BTreeMap::new();
    let declared = model.map_or(&empty, |m| &m.subgroups);
    resolve_subgroup(group, group_id, name, declared).map_err(usage)
}

/// The double-coset table for `H, K ⊆ L`.
pub fn cosets(model: Option<&Model>, group: &str, h: &str, k: &str, l: &str, format: Format) -> Outcome {
    let (gid, g) = lookup_group(model, group)?;
    let (hs, ks, ls) = (subgroup(model, &g, &gid, h)?, subgroup(model, &g, &gid, k)?, subgroup(model, &g, &gid, l)?);
    let d = double_coset_decomposition(&g, &hs, &ks, &ls).map_err(|e| usage(e.to_string()))?;
    match format {
        Format::Text => {
            let mut s = format!("double cosets {h}\\{l}/{k} in {}: {} rows\n", g.name(), d.blocks.len());
            let _ = writeln!(s, "{:<15} {:<11} {:<6} {}", "representative", "stabilizer", "order", "orbit");
            for block in &d.blocks {
                let _ = writeln!(
                    s,
                    "{:<15} {:<11} {:<6} {}",
                    block.representative,
                    g.subgroup_name(&block.stabilizer),
                    block.stabilizer.order(),
                    block.orbit.len()
                );
            }
            Ok(s)
        }
        Format::Json => {
            let rows: Vec<_> = d
                .blocks
                .iter()
                .map(|b| {
                    json!({
                        "representative": b.representative,
                        "stabilizer": g.subgroup_name(&b.stabilizer),
                        "order": b.stabilizer.order(),
                        "orbit": b.orbit.len(),
                    })
                })
                .collect();
            Ok(format!("{}\n", serde_json::to_string_pretty(&json!({ "group": g.name(), "rows": rows })).expect("json")))
        }
        Format::Dot => Err(unsupported(format, "cosets")),
    }
}

/// Parses `2*e + 1*C2` into a Burnside element over `G/H`.
fn parse_element(model: Option<&Model>, g: &Arc<Group>, gid: &str, h: &Subgroup, text: &str) -> Result<BurnsideElement, Failure> {
    let base = GSet::cosets(g, h);
    let mut x = BurnsideElement::zero(&base);
    for term in text.split('+').map(str::trim).filter(|t| !t.is_empty()) {
        let (count, name) = match term.split_once('*') {
            Some((c, n)) => (c.trim().parse::<usize>().map_err(|_| usage(format!("bad count in '{term}'")))?, n.trim()),
            None => (1, term),
        };
        let k = subgroup(model, g, gid, name)?;
        let inner = g.subgroups().iter().find(|s| s.is_subgroup_of(h) && g.class_index(s) == g.class_index(&k)).cloned();
        let k = inner.ok_or_else(|| usage(format!("no subgroup of class {name} inside H")))?;
        let piece = BurnsideElement::orbit(&base, 0, &k, count).map_err(|e| usage(e.to_string()))?;
        x = x.add(&piece).map_err(|e| usage(e.to_string()))?;
    }
    Ok(x)
}

/// The norm of an element over `G/H` along `G/H -> G/K`.
pub fn norm(model: Option<&Model>, group: &str, h: &str, k: &str, element: &str, format: Format) -> Outcome {
    let (gid, g) = lookup_group(model, group)?;
    let (hs, ks) = (subgroup(model, &g, &gid, h)?, subgroup(model, &g, &gid, k)?);
    let q = quotient_map(&g, &hs, &ks).map_err(|e| usage(e.to_string()))?;
    let x = parse_element(model, &g, &gid, &hs, element)?;
    let n = x.norm(&q).map_err(|e| usage(e.to_string()))?;
    let mut rows: Vec<(&Subgroup, usize)> = n.counts().iter().map(|((_, s), &c)| (s, c)).collect();
    rows.sort_by(|a, b| b.0.order().cmp(&a.0.order()).then(a.0.cmp(b.0)));
    let kname = g.subgroup_name(&ks);
    match format {
        Format::Text => {
            let mut s = format!("norm along {}/{} -> {}/{} of {x}\n", g.name(), g.subgroup_name(&hs), g.name(), kname);
            let _ = writeln!(s, "{:<12} {}", "orbit", "count");
            for (sub, c) in &rows {
                let _ = writeln!(s, "{:<12} {c}", format!("[{kname}/{}]", g.subgroup_name(sub)));
            }
            let _ = writeln!(s, "total: {n}");
            Ok(s)
        }
        Format::Json => {
            let rows: Vec<_> =
                rows.iter().map(|(sub, c)| json!({ "orbit": format!("[{kname}/{}]", g.subgroup_name(sub)), "count": c })).collect();
            Ok(format!("{}\n", serde_json::to_string_pretty(&json!({ "rows": rows, "total": n.to_string() })).expect("json")))
        }
        Format::Dot => Err(unsupported(format, "norm")),
    }
}

/// A counterexample as a document.
pub fn counterexample_document(c: &Counterexample) -> Document {
    let mut doc = Document::default();
    if let Some(g) = &c.group {
        doc.groups.insert(g.clone(), GroupDecl::Named(g.clone()));
    }
    for o in &c.objects {
        let decl = match (&o.action, &c.group) {
            (Some(action), Some(g)) => ObjectDecl::GSet(GSetDecl {
                group: g.clone(),
                elements: tokens("x", o.size),
                action: action.clone(),
                orbits: Vec::new(),
            }),
            _ => ObjectDecl::Tokens(tokens("x", o.size)),
        };
        doc.objects.insert(o.name.clone(), decl);
    }
    for m in &c.morphisms {
        doc.morphisms.insert(
            m.name.clone(),
            MorphismDecl { dom: m.dom.clone(), cod: m.cod.clone(), map: m.map.clone(), flags: "FL".into() },
        );
    }
    doc.notes.insert("description".into(), c.description.clone());
    doc
}

/// Runs a check suite; a failing suite is reported with exit code 1.
pub fn check(suite: &str, config: &CheckConfig, format: Format) -> Outcome {
    let suite = Suite::from_str(suite).map_err(usage)?;
    let report: CheckReport = run_suite(suite, config).map_err(|e| usage(e.to_string()))?;
    let text = match format {
        Format::Text => format!("{report}\n"),
        Format::Json => {
            let value = json!({
                "suite": suite.name(),
                "passed": report.passed(),
                "cases": report.cases,
                "failures": report.failures,
                "max_size": config.max_size,
                "seed": config.seed,
                "group": config.group.as_ref().map(|g| g.name().to_string()),
                "counterexample": report.counterexample.as_ref().map(counterexample_document),
            });
            format!("{}\n", serde_json::to_string_pretty(&value).expect("json"))
        }
        Format::Dot => return Err(unsupported(format, "check")),
    };
    if report.passed() {
        Ok(text)
    } else {
        Err(Failure::Check(text))
    }
}

/// The whole document as a graph, a summary, or canonical JSON.
pub fn render(model: &Model, format: Format) -> Outcome {
    match format {
        Format::Json => Ok(model.doc.to_text()),
        Format::Text => {
            let mut s = String::new();
            for (id, g) in &model.groups {
                let _ = writeln!(s, "group {id}: {} of order {}", g.name(), g.order());
            }
            for (id, o) in &model.objects {
                let kind = match o {
                    Object::Fin(_) => "set".to_string(),
                    Object::G(x) => format!("{}-set", x.group().name()),
                };
                let _ = writeln!(s, "object {id}: {kind} of {} elements", o.len());
            }
            for (id, m) in &model.doc.morphisms {
                let _ = writeln!(s, "morphism {id}: {} -> {} {:?} [{}]", m.dom, m.cod, m.map, m.flags);
            }
            for id in model.doc.spans.keys() {
                let decl = &model.doc.spans[id];
                let _ = writeln!(s, "span {id}: back {} fwd {}", decl.back, decl.fwd);
            }
            for (id, b) in &model.bispans {
                let (src, tgt) = model.bispan_ends(id).expect("declared");
                let _ = writeln!(s, "bispan {id}: {src} -> {tgt}, canonical {}", canonical_string(b));
            }
            Ok(s)
        }
        Format::Dot => {
            let mut s = String::from("digraph document {\n");
            for (id, o) in &model.objects {
                let _ = writeln!(s, "  \"{id}\" [label=\"{id} ({})\"];", o.len());
            }
            for (id, m) in &model.doc.morphisms {
                let style = match (m.flags.contains('F'), m.flags.contains('L')) {
                    (true, true) => "solid",
                    (true, false) => "bold",
                    (false, true) => "dashed",
                    (false, false) => "dotted",
                };
                let _ = writeln!(s, "  \"{}\" -> \"{}\" [label=\"{id}\", style={style}];", m.dom, m.cod);
            }
            s.push_str("}\n");
            Ok(s)
        }
    }
}
