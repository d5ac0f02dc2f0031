//! The diagram document: a JSON file declaring groups, objects, morphisms,
//! spans, bispans and semiring aliases, all referenced by identifier.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use bispan_core::bispan::Bispan;
use bispan_core::context::{Ambient, Classes, Mor};
use bispan_core::finset::FinSet;
use bispan_core::gset::{GSet, Group, Subgroup};
use bispan_core::span::Span;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub groups: BTreeMap<String, GroupDecl>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub subgroups: BTreeMap<String, SubgroupDecl>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub objects: BTreeMap<String, ObjectDecl>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub morphisms: BTreeMap<String, MorphismDecl>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub spans: BTreeMap<String, SpanDecl>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub bispans: BTreeMap<String, BispanDecl>,
    /// Aliases for semiring names.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub semirings: BTreeMap<String, String>,
    /// Free-form results attached by commands, such as canonical forms.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub notes: BTreeMap<String, String>,
}

/// A built-in group by name, or a permutation group by generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupDecl {
    Named(String),
    Permutations { generators: Vec<Vec<usize>> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubgroupDecl {
    pub group: String,
    /// Generators as permutations in the group's own representation.
    pub generators: Vec<Vec<usize>>,
}

/// A plain finite set as its element tokens, or a G-set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ObjectDecl {
    Tokens(Vec<String>),
    GSet(GSetDecl),
}

/// A G-set, either by element tokens and one permutation per group
/// generator, or as a sum of coset spaces `G/H` named by subgroup.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GSetDecl {
    pub group: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub elements: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub action: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub orbits: Vec<String>,
}

fn default_flags() -> String {
    "FL".into()
}

fn is_default_flags(s: &String) -> bool {
    s == "FL"
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDecl {
    pub dom: String,
    pub cod: String,
    pub map: Vec<usize>,
    /// Class membership: any of `F` and `L`.
    #[serde(default = "default_flags", skip_serializing_if = "is_default_flags")]
    pub flags: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpanDecl {
    pub back: String,
    pub fwd: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BispanDecl {
    pub p: String,
    pub f: String,
    pub l: String,
}

/// A message with an optional position in the source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub message: String,
    pub file: Option<String>,
    pub position: Option<(usize, usize)>,
}

impl Diagnostic {
    pub fn new(message: impl Into<String>) -> Self {
        Diagnostic { message: message.into(), file: None, position: None }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.file, self.position) {
            (Some(file), Some((line, col))) => write!(f, "{file}:{line}:{col}: {}", self.message),
            (Some(file), None) => write!(f, "{file}: {}", self.message),
            (None, Some((line, col))) => write!(f, "{line}:{col}: {}", self.message),
            (None, None) => write!(f, "{}", self.message),
        }
    }
}

impl Document {
    pub fn parse(text: &str) -> Result<Document, Diagnostic> {
        serde_json::from_str(text).map_err(|e| Diagnostic {
            message: format!("parse error: {e}"),
            file: None,
            position: Some((e.line(), e.column())),
        })
    }

    /// Pretty JSON with keys in sorted order and a trailing newline.
    pub fn to_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents always serialize");
        s.push('\n');
        s
    }
}

/// A resolved object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Object {
    Fin(FinSet),
    G(GSet),
}

impl Object {
    pub fn len(&self) -> usize {
        match self {
            Object::Fin(x) => x.len(),
            Object::G(x) => x.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Morphism {
    Fin(Mor<FinSet>),
    G(Mor<GSet>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyBispan {
    Fin(Bispan<FinSet>),
    G(Bispan<GSet>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnySpan {
    Fin(Span<FinSet>),
    G(Span<GSet>),
}

/// A document with every reference resolved and every declaration
/// validated.
#[derive(Debug, Clone)]
pub struct Model {
    pub doc: Document,
    text: String,
    file: Option<String>,
    pub groups: BTreeMap<String, Arc<Group>>,
    pub subgroups: BTreeMap<String, (String, Subgroup)>,
    pub objects: BTreeMap<String, Object>,
    pub morphisms: BTreeMap<String, Morphism>,
    pub spans: BTreeMap<String, AnySpan>,
    pub bispans: BTreeMap<String, AnyBispan>,
}

fn classes_of(flags: &str) -> Result<Classes, String> {
    if let Some(c) = flags.chars().find(|c| !matches!(c, 'F' | 'L')) {
        return Err(format!("unknown class flag '{c}'; use F and L"));
    }
    Ok(Classes { f: flags.contains('F'), l: flags.contains('L') })
}

/// Resolves a subgroup name against a group: the document's own subgroup
/// ids, then `e` and the group's name, then structural names such as `C2`
/// (choosing the least subgroup of that class).
pub fn resolve_subgroup(
    group: &Group,
    group_id: &str,
    name: &str,
    declared: &BTreeMap<String, (String, Subgroup)>,
) -> Result<Subgroup, String> {
    if let Some((owner, s)) = declared.get(name) {
        if owner != group_id {
            return Err(format!("subgroup '{name}' belongs to group '{owner}', not '{group_id}'"));
        }
        return Ok(s.clone());
    }
    match name {
        "e" | "1" | "trivial" => return Ok(group.trivial_subgroup()),
        "G" | "whole" => return Ok(group.whole()),
        _ if name == group.name() || name == group_id => return Ok(group.whole()),
        _ => {}
    }
    group
        .subgroups()
        .iter()
        .find(|s| group.subgroup_name(s) == name)
        .cloned()
        .ok_or_else(|| format!("no subgroup named '{name}' in group '{group_id}'"))
}

impl Model {
    pub fn load(text: &str, file: Option<&str>) -> Result<Model, Diagnostic> {
        let doc = Document::parse(text).map_err(|mut d| {
            d.file = file.map(str::to_string);
            d
        })?;
        Model::from_document(doc, text.to_string(), file.map(str::to_string))
    }

    /// The position of the first key `"id"` in the source text.
    pub fn locate(&self, id: &str) -> Option<(usize, usize)> {
        let needle = format!("\"{id}\"");
        let mut start = 0;
        while let Some(offset) = self.text[start..].find(&needle) {
            let at = start + offset;
            let rest = self.text[at + needle.len()..].trim_start();
            if rest.starts_with(':') {
                let before = &self.text[..at];
                let line = before.matches('\n').count() + 1;
                let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
                return Some((line, col));
            }
            start = at + needle.len();
        }
        None
    }

    /// An error located at the declaration of `id`.
    pub fn error_at(&self, id: &str, message: impl Into<String>) -> Diagnostic {
        Diagnostic { message: message.into(), file: self.file.clone(), position: self.locate(id) }
    }

    fn from_document(doc: Document, text: String, file: Option<String>) -> Result<Model, Diagnostic> {
        let mut model = Model {
            doc: doc.clone(),
            text,
            file,
            groups: BTreeMap::new(),
            subgroups: BTreeMap::new(),
            objects: BTreeMap::new(),
            morphisms: BTreeMap::new(),
            spans: BTreeMap::new(),
            bispans: BTreeMap::new(),
        };
        for (id, decl) in &doc.groups {
            let group = match decl {
                GroupDecl::Named(name) => {
                    Group::by_name(name).ok_or_else(|| model.error_at(id, format!("unknown built-in group '{name}'")))?
                }
                GroupDecl::Permutations { generators } => {
                    let degree = generators.first().map_or(1, Vec::len);
                    Group::from_permutations(id, degree, generators).map_err(|e| model.error_at(id, e.to_string()))?
                }
            };
            model.groups.insert(id.clone(), Arc::new(group));
        }
        for (id, decl) in &doc.subgroups {
            let group = model.group(&decl.group).map_err(|m| model.error_at(id, m))?;
            let mut gens = Vec::new();
            for perm in &decl.generators {
                let g = group
                    .element_of_permutation(perm)
                    .ok_or_else(|| model.error_at(id, format!("{perm:?} is not an element of '{}'", decl.group)))?;
                gens.push(g);
            }
            model.subgroups.insert(id.clone(), (decl.group.clone(), group.generate(&gens)));
        }
        for (id, decl) in &doc.objects {
            let obj = model.resolve_object(decl).map_err(|m| model.error_at(id, m))?;
            model.objects.insert(id.clone(), obj);
        }
        for (id, decl) in &doc.morphisms {
            let m = model.resolve_morphism(decl).map_err(|m| model.error_at(id, format!("morphism '{id}': {m}")))?;
            model.morphisms.insert(id.clone(), m);
        }
        for (id, decl) in &doc.spans {
            let s = model.resolve_span(decl).map_err(|m| model.error_at(id, format!("span '{id}': {m}")))?;
            model.spans.insert(id.clone(), s);
        }
        for (id, decl) in &doc.bispans {
            let b = model.resolve_bispan(decl).map_err(|m| model.error_at(id, format!("bispan '{id}': {m}")))?;
            model.bispans.insert(id.clone(), b);
        }
        for (id, kind) in &doc.semirings {
            if !crate::commands::SEMIRINGS.contains(&kind.as_str()) {
                return Err(model.error_at(id, format!("unknown semiring '{kind}'")));
            }
        }
        Ok(model)
    }

    pub fn group(&self, id: &str) -> Result<Arc<Group>, String> {
        self.groups.get(id).cloned().ok_or_else(|| format!("unknown group '{id}'"))
    }

    fn resolve_object(&self, decl: &ObjectDecl) -> Result<Object, String> {
        match decl {
            ObjectDecl::Tokens(tokens) => {
                let mut sorted = tokens.clone();
                sorted.sort();
                if sorted.windows(2).any(|w| w[0] == w[1]) {
                    return Err("repeated element token".into());
                }
                Ok(Object::Fin(FinSet::new(tokens.len())))
            }
            ObjectDecl::GSet(g) => {
                let group = self.group(&g.group)?;
                if !g.orbits.is_empty() {
                    if !g.elements.is_empty() || !g.action.is_empty() {
                        return Err("give either orbits or elements with an action, not both".into());
                    }
                    let stabs = g
                        .orbits
                        .iter()
                        .map(|name| resolve_subgroup(&group, &g.group, name, &self.subgroups))
                        .collect::<Result<Vec<_>, _>>()?;
                    return Ok(Object::G(GSet::sum_of_orbits(&group, &stabs)));
                }
                let len = g.elements.len();
                let x = if g.action.is_empty() && group.generators().is_empty() {
                    GSet::trivial_action(group, len)
                } else {
                    GSet::from_generator_action(group, len, &g.action).map_err(|e| e.to_string())?
                };
                Ok(Object::G(x))
            }
        }
    }

    fn object(&self, id: &str) -> Result<&Object, String> {
        self.objects.get(id).ok_or_else(|| format!("unknown object '{id}'"))
    }

    fn resolve_morphism(&self, decl: &MorphismDecl) -> Result<Morphism, String> {
        let classes = classes_of(&decl.flags)?;
        match (self.object(&decl.dom)?, self.object(&decl.cod)?) {
            (Object::Fin(a), Object::Fin(b)) => Mor::new(a.clone(), b.clone(), decl.map.clone())
                .map(|m| Morphism::Fin(m.with_classes(classes)))
                .map_err(|e| e.to_string()),
            (Object::G(a), Object::G(b)) => Mor::new(a.clone(), b.clone(), decl.map.clone())
                .map(|m| Morphism::G(m.with_classes(classes)))
                .map_err(|e| e.to_string()),
            _ => Err("domain and codomain mix plain sets and G-sets".into()),
        }
    }

    pub fn morphism(&self, id: &str) -> Result<&Morphism, String> {
        self.morphisms.get(id).ok_or_else(|| format!("unknown morphism '{id}'"))
    }

    fn resolve_span(&self, decl: &SpanDecl) -> Result<AnySpan, String> {
        match (self.morphism(&decl.back)?, self.morphism(&decl.fwd)?) {
            (Morphism::Fin(a), Morphism::Fin(b)) => Span::new(a.clone(), b.clone()).map(AnySpan::Fin),
            (Morphism::G(a), Morphism::G(b)) => Span::new(a.clone(), b.clone()).map(AnySpan::G),
            _ => return Err("legs mix plain sets and G-sets".into()),
        }
        .map_err(|e| e.to_string())
    }

    fn resolve_bispan(&self, decl: &BispanDecl) -> Result<AnyBispan, String> {
        match (self.morphism(&decl.p)?, self.morphism(&decl.f)?, self.morphism(&decl.l)?) {
            (Morphism::Fin(p), Morphism::Fin(f), Morphism::Fin(l)) => {
                Bispan::new(p.clone(), f.clone(), l.clone()).map(AnyBispan::Fin)
            }
            (Morphism::G(p), Morphism::G(f), Morphism::G(l)) => {
                Bispan::new(p.clone(), f.clone(), l.clone()).map(AnyBispan::G)
            }
            _ => return Err("legs mix plain sets and G-sets".into()),
        }
        .map_err(|e| e.to_string())
    }

    pub fn bispan(&self, id: &str) -> Result<&AnyBispan, Diagnostic> {
        self.bispans.get(id).ok_or_else(|| Diagnostic {
            message: format!("unknown bispan '{id}'"),
            file: self.file.clone(),
            position: None,
        })
    }

    /// Source and target object ids of a declared bispan.
    pub fn bispan_ends(&self, id: &str) -> Option<(&str, &str)> {
        let decl = self.doc.bispans.get(id)?;
        let p = self.doc.morphisms.get(&decl.p)?;
        let l = self.doc.morphisms.get(&decl.l)?;
        Some((p.cod.as_str(), l.cod.as_str()))
    }

    pub fn file(&self) -> Option<&str> {
        self.file.as_deref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"{
  "objects": { "X": ["x"], "E": ["a", "b"] },
  "morphisms": {
    "p": { "dom": "E", "cod": "X", "map": [0, 0] },
    "f": { "dom": "E", "cod": "X", "map": [0, 0], "flags": "F" },
    "id": { "dom": "X", "cod": "X", "map": [0] }
  },
  "bispans": { "square": { "p": "p", "f": "f", "l": "id" } }
}"#;

    #[test]
    fn loads_and_round_trips() {
        let model = Model::load(SAMPLE, None).unwrap();
        assert_eq!(model.bispans.len(), 1);
        let text = model.doc.to_text();
        let again = Document::parse(&text).unwrap();
        assert_eq!(again, model.doc);
        assert_eq!(again.to_text(), text);
    }

    #[test]
    fn locates_bad_declarations() {
        let bad = SAMPLE.replace("\"map\": [0]", "\"map\": [3]");
        let err = Model::load(&bad, Some("doc.json")).unwrap_err();
        assert_eq!(err.position, Some((6, 5)));
        assert!(err.to_string().starts_with("doc.json:6:5: morphism 'id'"), "{err}");
    }

    #[test]
    fn parse_errors_have_positions() {
        let err = Document::parse("{\n  \"objects\": [}").unwrap_err();
        assert_eq!(err.position.unwrap().0, 2);
        assert!(Document::parse("{\"unknown\": 1}").is_err());
    }

    #[test]
    fn gsets_by_orbits_and_actions() {
        let text = r#"{
  "groups": { "G": "S3" },
  "subgroups": { "H": { "group": "G", "generators": [[1, 0, 2]] } },
  "objects": {
    "A": { "group": "G", "orbits": ["H", "e"] },
    "T": { "group": "G", "elements": ["a", "b"], "action": [[1, 0], [0, 1]] }
  }
}"#;
        let model = Model::load(text, None).unwrap();
        assert_eq!(model.objects["A"].len(), 9);
        assert_eq!(model.objects["T"].len(), 2);
        assert_eq!(model.subgroups["H"].1.order(), 2);
    }

    #[test]
    fn flags_are_validated() {
        let bad = SAMPLE.replace("\"flags\": \"F\"", "\"flags\": \"Q\"");
        assert!(Model::load(&bad, None).unwrap_err().message.contains("unknown class flag"));
        let no_f = SAMPLE.replace("\"flags\": \"F\"", "\"flags\": \"L\"");
        assert!(Model::load(&no_f, None).unwrap_err().message.contains("bispan 'square'"));
    }
}
