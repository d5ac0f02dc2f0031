//! Invariant suites shared by the test harness and the command line.
//!
//! Every suite enumerates its cases (exhaustively where the scale allows,
//! otherwise from a seeded generator), counts failures and keeps the first
//! counterexample in a serializable form.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::bispan::{bispan_isomorphic, compose_bispans, Bispan};
use crate::context::{check_universal_property, dependent_product, equivariant_maps, Ambient, Mor, Search};
use crate::degree::{check_degree_axioms, degree_decomposition, fold_degree_decomposition};
use crate::error::{Error, Result};
use crate::eval::{
    check_binomial_splitting, check_functoriality, compile, differences_vanish, finite_difference_degree, grid_probes,
    Semiring, Tropical,
};
use crate::finset::{all_maps, FinSet};
use crate::gset::{double_coset_decomposition, double_coset_representatives, gset_isomorphic, quotient_map, GSet, Group};
use crate::random::{random_bispan, random_equivariant_map, random_finset_bispan_between, random_gset, rng};
use crate::tambara::{
    c2_norm_closed_form, distributivity_sides, functoriality_sides, mackey_sides, norm_to_point, BurnsideElement,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    UniversalProperty,
    Associativity,
    Functoriality,
    DoubleCoset,
    Norm,
    Degree,
    Splitting,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::UniversalProperty,
        Suite::Associativity,
        Suite::Functoriality,
        Suite::DoubleCoset,
        Suite::Norm,
        Suite::Degree,
        Suite::Splitting,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::UniversalProperty => "universal-property",
            Suite::Associativity => "associativity",
            Suite::Functoriality => "functoriality",
            Suite::DoubleCoset => "double-coset",
            Suite::Norm => "norm",
            Suite::Degree => "degree",
            Suite::Splitting => "splitting",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL.into_iter().find(|suite| suite.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
            format!("unknown suite '{s}'; expected one of {}", names.join(", "))
        })
    }
}

/// Scale parameters for a suite run.
#[derive(Debug, Clone)]
pub struct CheckConfig {
    /// Largest carrier size enumerated.
    pub max_size: usize,
    /// Work over G-sets for this group instead of plain finite sets, where
    /// the suite supports it.
    pub group: Option<Arc<Group>>,
    pub seed: u64,
    /// Number of randomized cases, where the suite samples.
    pub samples: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig { max_size: 3, group: None, seed: 0, samples: 100 }
    }
}

/// An object of a counterexample: its size and, for G-sets, the
/// permutation by which each group generator acts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessObject {
    pub name: String,
    pub size: usize,
    pub action: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessMorphism {
    pub name: String,
    pub dom: String,
    pub cod: String,
    pub map: Vec<usize>,
}

/// A failing case, in a form the command line can write out as a document.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Counterexample {
    pub description: String,
    pub group: Option<String>,
    pub objects: Vec<WitnessObject>,
    pub morphisms: Vec<WitnessMorphism>,
}

/// Objects that can be written into a counterexample.
pub trait Witness: Ambient {
    fn group_name(&self) -> Option<String>;
    fn generator_action(&self) -> Option<Vec<Vec<usize>>>;
}

impl Witness for FinSet {
    fn group_name(&self) -> Option<String> {
        None
    }
    fn generator_action(&self) -> Option<Vec<Vec<usize>>> {
        None
    }
}

impl Witness for GSet {
    fn group_name(&self) -> Option<String> {
        Some(self.group().name().to_string())
    }
    fn generator_action(&self) -> Option<Vec<Vec<usize>>> {
        Some(self.group().generators().iter().map(|&g| (0..self.len()).map(|x| self.act(g, x)).collect()).collect())
    }
}

impl Counterexample {
    pub fn new(description: impl Into<String>) -> Self {
        Counterexample { description: description.into(), ..Default::default() }
    }

    fn object<O: Witness>(&mut self, obj: &O) -> String {
        self.group = self.group.take().or_else(|| obj.group_name());
        let name = format!("X{}", self.objects.len());
        self.objects.push(WitnessObject { name: name.clone(), size: obj.len(), action: obj.generator_action() });
        name
    }

    /// Adds a morphism with fresh domain and codomain objects.
    pub fn with_map<O: Witness>(mut self, name: &str, m: &Mor<O>) -> Self {
        let dom = self.object(m.dom());
        let cod = self.object(m.cod());
        self.morphisms.push(WitnessMorphism { name: name.into(), dom, cod, map: m.map().to_vec() });
        self
    }

    /// Adds the three legs of a bispan, sharing objects.
    pub fn with_bispan<O: Witness>(mut self, prefix: &str, b: &Bispan<O>) -> Self {
        let src = self.object(b.src());
        let e = self.object(b.e());
        let mid = self.object(b.b());
        let tgt = self.object(b.tgt());
        for (leg, m, dom, cod) in [("p", b.p(), &e, &src), ("f", b.f(), &e, &mid), ("l", b.l(), &mid, &tgt)] {
            self.morphisms.push(WitnessMorphism {
                name: format!("{prefix}_{leg}"),
                dom: dom.clone(),
                cod: cod.clone(),
                map: m.map().to_vec(),
            });
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub suite: Suite,
    pub cases: usize,
    pub failures: usize,
    pub counterexample: Option<Counterexample>,
}

impl CheckReport {
    fn new(suite: Suite) -> Self {
        CheckReport { suite, cases: 0, failures: 0, counterexample: None }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> Counterexample) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.counterexample.is_none() {
                self.counterexample = Some(witness());
            }
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "pass" } else { "FAIL" };
        write!(f, "{}: {status} ({} cases, {} failures)", self.suite, self.cases, self.failures)?;
        if let Some(c) = &self.counterexample {
            write!(f, "; first counterexample: {}", c.description)?;
        }
        Ok(())
    }
}

pub fn run_suite(suite: Suite, config: &CheckConfig) -> Result<CheckReport> {
    match suite {
        Suite::UniversalProperty => universal_property_suite(config),
        Suite::Associativity => associativity_suite(config),
        Suite::Functoriality => functoriality_suite(config),
        Suite::DoubleCoset => double_coset_suite(config),
        Suite::Norm => norm_suite(config),
        Suite::Degree => degree_suite(config),
        Suite::Splitting => splitting_suite(config),
    }
}

/// Every map between the given objects.
fn maps_between<O: Ambient>(dom: &O, cod: &O) -> Vec<Mor<O>> {
    equivariant_maps(dom, cod, &|_, _| true)
        .into_iter()
        .map(|m| Mor::new(dom.clone(), cod.clone(), m).expect("enumerated maps are equivariant"))
        .collect()
}

/// All finite-set bispans `src -> tgt` with `|E|, |B| <= max_mid`, one per
/// isomorphism class (the canonical form decides isomorphism here).
pub fn finset_bispans_up_to_iso(src: usize, tgt: usize, max_mid: usize) -> Vec<Bispan<FinSet>> {
    let mut seen = BTreeMap::new();
    for b in 0..=max_mid {
        for e in 0..=max_mid {
            for l in all_maps(b, tgt) {
                for f in all_maps(e, b) {
                    for p in all_maps(e, src) {
                        let bispan = Bispan::new(p, f.clone(), l.clone()).expect("all maps carry both flags");
                        seen.entry(bispan.canonical_form()).or_insert(bispan);
                    }
                }
            }
        }
    }
    seen.into_values().collect()
}

/// All finite-set bispans `src -> tgt` with `|E|, |B| <= max_mid`, without
/// identifying isomorphic ones.
pub fn all_finset_bispans(src: usize, tgt: usize, max_mid: usize) -> Vec<Bispan<FinSet>> {
    let mut out = Vec::new();
    for b in 0..=max_mid {
        for e in 0..=max_mid {
            for l in all_maps(b, tgt) {
                for f in all_maps(e, b) {
                    for p in all_maps(e, src) {
                        out.push(Bispan::new(p, f.clone(), l.clone()).expect("all maps carry both flags"));
                    }
                }
            }
        }
    }
    out
}

/// All bispans `src -> tgt` of G-sets whose middle objects are drawn from
/// `middles`.
pub fn gset_bispans(src: &GSet, tgt: &GSet, middles: &[GSet]) -> Vec<Bispan<GSet>> {
    let mut out = Vec::new();
    for b in middles {
        for l in maps_between(b, tgt) {
            for e in middles {
                for f in maps_between(e, b) {
                    for p in maps_between(e, src) {
                        out.push(Bispan::new(p, f.clone(), l.clone()).expect("all maps carry both flags"));
                    }
                }
            }
        }
    }
    out
}

/// [`gset_bispans`] with one representative per isomorphism class. A
/// search that exhausts its budget keeps both bispans, so no class is lost.
pub fn gset_bispans_up_to_iso(src: &GSet, tgt: &GSet, middles: &[GSet]) -> Vec<Bispan<GSet>> {
    let mut reps: Vec<Bispan<GSet>> = Vec::new();
    for b in gset_bispans(src, tgt, middles) {
        if !reps.iter().any(|r| isomorphic(r, &b)) {
            reps.push(b);
        }
    }
    reps
}

/// Whether two bispans are isomorphic; an exhausted search counts as a
/// failure so that it is never mistaken for a pass.
pub fn isomorphic<O: Ambient>(a: &Bispan<O>, b: &Bispan<O>) -> bool {
    matches!(bispan_isomorphic(a, b), Search::Found(_))
}

fn universal_property_suite(config: &CheckConfig) -> Result<CheckReport> {
    let mut report = CheckReport::new(Suite::UniversalProperty);
    let n = config.max_size;
    match &config.group {
        None => {
            for x in 0..=n {
                for y in 0..=n {
                    for z in 0..=n {
                        for l in all_maps(x, y) {
                            for f in all_maps(y, z) {
                                let d = dependent_product(&l, &f)?;
                                let r = check_universal_property(&d, n);
                                report.record(r.passed(), || {
                                    Counterexample::new(format!("{:?}", r.failure)).with_map("l", &l).with_map("f", &f)
                                });
                            }
                        }
                    }
                }
            }
        }
        Some(group) => {
            let objects = GSet::point(group).probe_objects(n);
            for x in &objects {
                for y in &objects {
                    for z in &objects {
                        for l in maps_between(x, y) {
                            for f in maps_between(y, z) {
                                let d = dependent_product(&l, &f)?;
                                let r = check_universal_property(&d, n);
                                report.record(r.passed(), || {
                                    Counterexample::new(format!("{:?}", r.failure)).with_map("l", &l).with_map("f", &f)
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

fn associativity_case<O: Witness>(report: &mut CheckReport, a: &Bispan<O>, b: &Bispan<O>, c: &Bispan<O>) -> Result<()> {
    let left = compose_bispans(c, &compose_bispans(b, a)?)?;
    let right = compose_bispans(&compose_bispans(c, b)?, a)?;
    report.record(isomorphic(&left, &right), || {
        Counterexample::new("c∘(b∘a) is not isomorphic to (c∘b)∘a").with_bispan("a", a).with_bispan("b", b).with_bispan("c", c)
    });
    Ok(())
}

/// Exhaustive over finite-set bispans with carriers `<= min(max_size, 2)`
/// up to isomorphism, then `samples` random triples with carriers
/// `<= max_size`. With a group, only the random part, over G-sets.
fn associativity_suite(config: &CheckConfig) -> Result<CheckReport> {
    let mut report = CheckReport::new(Suite::Associativity);
    let mut r = rng(config.seed);
    match &config.group {
        None => {
            let small = config.max_size.min(2);
            let mut by_ends: BTreeMap<(usize, usize), Vec<Bispan<FinSet>>> = BTreeMap::new();
            for s in 0..=small {
                for t in 0..=small {
                    by_ends.insert((s, t), finset_bispans_up_to_iso(s, t, small));
                }
            }
            for w in 0..=small {
                for x in 0..=small {
                    for y in 0..=small {
                        for z in 0..=small {
                            for a in &by_ends[&(w, x)] {
                                for b in &by_ends[&(x, y)] {
                                    for c in &by_ends[&(y, z)] {
                                        associativity_case(&mut report, a, b, c)?;
                                    }
                                }
                            }
                        }
                    }
                }
            }
            let n = config.max_size;
            for _ in 0..config.samples {
                let objs: Vec<FinSet> = (0..4).map(|_| FinSet::new(r.gen_range(0..=n))).collect();
                let a = random_finset_bispan_between(&mut r, &objs[0], &objs[1], n);
                let b = random_finset_bispan_between(&mut r, &objs[1], &objs[2], n);
                let c = random_finset_bispan_between(&mut r, &objs[2], &objs[3], n);
                associativity_case(&mut report, &a, &b, &c)?;
            }
        }
        Some(group) => {
            for (a, b, c) in random_gset_triples(&mut r, group, config.max_size, config.samples) {
                associativity_case(&mut report, &a, &b, &c)?;
            }
        }
    }
    Ok(report)
}

/// `count` random composable triples of G-bispans with every object of at
/// most `max` points.
pub fn random_gset_triples(
    r: &mut ChaCha8Rng,
    group: &Arc<Group>,
    max: usize,
    count: usize,
) -> Vec<(Bispan<GSet>, Bispan<GSet>, Bispan<GSet>)> {
    let mut out = Vec::new();
    while out.len() < count {
        let objs: Vec<GSet> = (0..4).map(|_| random_gset(r, group, max)).collect();
        let mut mid = |r: &mut ChaCha8Rng| random_gset(r, group, max);
        let a = random_bispan(r, &objs[0], &objs[1], &mut mid, 20);
        let b = random_bispan(r, &objs[1], &objs[2], &mut mid, 20);
        let c = random_bispan(r, &objs[2], &objs[3], &mut mid, 20);
        if let (Some(a), Some(b), Some(c)) = (a, b, c) {
            out.push((a, b, c));
        }
    }
    out
}

fn evaluation_case<R: Semiring>(
    report: &mut CheckReport,
    b1: &Bispan<FinSet>,
    b2: &Bispan<FinSet>,
    probes: &[Vec<R>],
    name: &str,
) -> Result<()> {
    let r = check_functoriality(b1, b2, probes)?;
    report.record(r.passed(), || {
        Counterexample::new(format!("evaluation over {name} is not functorial at {:?}", r.failure))
            .with_bispan("b1", b1)
            .with_bispan("b2", b2)
    });
    Ok(())
}

/// Probes `{0..5}^arity` (truncated to 200) in ℕ, ℤ and tropical form, and
/// all of `{0,1}^arity` as Booleans.
pub fn standard_probes(arity: usize) -> (Vec<Vec<BigUint>>, Vec<Vec<BigInt>>, Vec<Vec<bool>>, Vec<Vec<Tropical>>) {
    let grid = grid_probes(arity, 5, 200);
    let nat = grid.iter().map(|v| v.iter().map(|&x| BigUint::from(x)).collect()).collect();
    let int = grid.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let trop = grid.iter().map(|v| v.iter().map(|&x| Tropical::finite(x)).collect()).collect();
    let boolean = grid_probes(arity, 1, 200).iter().map(|v| v.iter().map(|&x| x == 1).collect()).collect();
    (nat, int, boolean, trop)
}

/// Sample values over `base`: zero, one, and each single orbit over one
/// base orbit.
pub fn burnside_samples(base: &GSet) -> Vec<BurnsideElement> {
    let group = base.group();
    let mut out = vec![BurnsideElement::zero(base), BurnsideElement::one(base)];
    for (i, info) in crate::gset::orbit_decomposition(base).iter().enumerate() {
        for k in group.subgroups().iter().filter(|k| k.is_subgroup_of(&info.stabilizer)) {
            let x = BurnsideElement::orbit(base, i, k, 1).expect("k lies in the stabilizer");
            if !out.contains(&x) {
                out.push(x);
            }
        }
    }
    out
}

/// Over finite sets: evaluation functoriality for random composable pairs
/// over ℕ, ℤ, Booleans and the tropical semiring. With a group: Tambara
/// functoriality on random pairs of G-bispans.
fn functoriality_suite(config: &CheckConfig) -> Result<CheckReport> {
    let mut report = CheckReport::new(Suite::Functoriality);
    let mut r = rng(config.seed);
    let n = config.max_size;
    match &config.group {
        None => {
            for _ in 0..config.samples {
                let objs: Vec<FinSet> = (0..3).map(|_| FinSet::new(r.gen_range(0..=n))).collect();
                let b1 = random_finset_bispan_between(&mut r, &objs[0], &objs[1], n);
                let b2 = random_finset_bispan_between(&mut r, &objs[1], &objs[2], n);
                let (nat, int, boolean, trop) = standard_probes(objs[0].len());
                evaluation_case(&mut report, &b1, &b2, &nat, "nat")?;
                evaluation_case(&mut report, &b1, &b2, &int, "int")?;
                evaluation_case(&mut report, &b1, &b2, &boolean, "bool")?;
                evaluation_case(&mut report, &b1, &b2, &trop, "tropical")?;
            }
        }
        Some(group) => {
            for (b1, b2, _) in random_gset_triples(&mut r, group, n, config.samples) {
                for x in burnside_samples(b1.src()) {
                    let (lhs, rhs) = functoriality_sides(&b2, &b1, &x)?;
                    report.record(lhs == rhs, || {
                        Counterexample::new(format!("on {x}: composite gives {lhs}, stepwise gives {rhs}"))
                            .with_bispan("b1", &b1)
                            .with_bispan("b2", &b2)
                    });
                }
            }
        }
    }
    Ok(report)
}

/// For every `H, K ⊆ L`: the orbit model of the pullback is isomorphic to
/// it, and the Burnside double-coset formula holds on every orbit over
/// `G/H`, with two different choices of representatives. Defaults to S3.
fn double_coset_suite(config: &CheckConfig) -> Result<CheckReport> {
    let group = config.group.clone().unwrap_or_else(|| Arc::new(Group::symmetric(3)));
    let mut report = CheckReport::new(Suite::DoubleCoset);
    let subgroups = group.subgroups().to_vec();
    for l in &subgroups {
        for h in subgroups.iter().filter(|h| h.is_subgroup_of(l)) {
            for k in subgroups.iter().filter(|k| k.is_subgroup_of(l)) {
                let d = double_coset_decomposition(&group, h, k, l)?;
                let iso = gset_isomorphic(&d.model, &d.pullback.apex).is_some();
                let names = || format!("H={:?}, K={:?}, L={:?}", h.members(), k.members(), l.members());
                report.record(iso, || Counterexample::new(format!("orbit model is not the pullback for {}", names())));
                let reps = double_coset_representatives(&group, h, k, l);
                let last = |s: &crate::gset::Subgroup| *s.members().last().expect("nonempty");
                let shifted: Vec<usize> = reps.iter().map(|&g| group.mul(group.mul(last(h), g), last(k))).collect();
                for x in burnside_samples(&GSet::cosets(&group, h)) {
                    let (lhs, rhs) = mackey_sides(&group, h, k, l, &reps, &x)?;
                    let (lhs2, rhs2) = mackey_sides(&group, h, k, l, &shifted, &x)?;
                    report.record(lhs == rhs && lhs2 == rhs2 && rhs == rhs2, || {
                        Counterexample::new(format!("double-coset formula fails on {x} for {}: {lhs} vs {rhs}", names()))
                    });
                }
            }
        }
    }
    Ok(report)
}

/// For C2 (the default): the norm of `n` free points, `n <= max(max_size,
/// 6)`, by section enumeration against the closed form. For every group:
/// along every `G/H -> G/K`, norms preserve units and products of sample
/// values, and the distributivity transformation holds on random maps.
fn norm_suite(config: &CheckConfig) -> Result<CheckReport> {
    let group = config.group.clone().unwrap_or_else(|| Arc::new(Group::cyclic(2)));
    let mut report = CheckReport::new(Suite::Norm);
    if group.order() == 2 {
        for n in 0..=config.max_size.max(6) {
            let enumerated = norm_to_point(&group, n)?;
            let closed = c2_norm_closed_form(&group, n)?;
            report.record(enumerated == closed, || {
                Counterexample::new(format!("norm of {n} points: enumerated {enumerated}, closed form {closed}"))
            });
        }
    }
    let subgroups = group.subgroups().to_vec();
    for k in &subgroups {
        for h in subgroups.iter().filter(|h| h.is_subgroup_of(k)) {
            let q = quotient_map(&group, h, k)?;
            let samples = burnside_samples(q.dom());
            let unit = BurnsideElement::one(q.dom()).norm(&q)? == BurnsideElement::one(q.cod());
            report.record(unit, || Counterexample::new("norm does not preserve the unit").with_map("q", &q));
            for a in &samples {
                for b in &samples {
                    let lhs = a.mul(b)?.norm(&q)?;
                    let rhs = a.norm(&q)?.mul(&b.norm(&q)?)?;
                    report.record(lhs == rhs, || {
                        Counterexample::new(format!("N({a}·{b}) = {lhs} but N({a})·N({b}) = {rhs}")).with_map("q", &q)
                    });
                }
            }
        }
    }
    let mut r = rng(config.seed);
    let mut done = 0;
    while done < config.samples {
        let x = random_gset(&mut r, &group, config.max_size);
        let y = random_gset(&mut r, &group, config.max_size);
        let z = random_gset(&mut r, &group, config.max_size);
        let (Some(phi), Some(psi)) = (random_equivariant_map(&mut r, &x, &y), random_equivariant_map(&mut r, &y, &z)) else {
            continue;
        };
        done += 1;
        for v in burnside_samples(&x).into_iter().take(4) {
            let (lhs, rhs) = distributivity_sides(&phi, &psi, &v)?;
            report.record(lhs == rhs, || {
                Counterexample::new(format!("distributivity fails on {v}: {lhs} vs {rhs}"))
                    .with_map("phi", &phi)
                    .with_map("psi", &psi)
            });
        }
    }
    Ok(report)
}

/// For every finite-set map `p` with carriers `<= max_size`: the measured
/// degree of the pure norm of `p` is its largest fiber, differences of one
/// order higher vanish on `{0..max+2}`, and the degree-structure axioms
/// hold. The decomposition of `∇(p ⊔ q)` is checked for every `q` into the
/// same codomain. With a group, the axioms and fold decomposition are
/// checked for every map between G-sets of `<= max_size` points.
fn degree_suite(config: &CheckConfig) -> Result<CheckReport> {
    let mut report = CheckReport::new(Suite::Degree);
    let n = config.max_size;
    let probe_bound = n.min(3);
    match &config.group {
        None => {
            for x in 0..=n {
                for y in 0..=n {
                    for p in all_maps(x, y) {
                        let max_fiber = p.fibers().iter().map(Vec::len).max().unwrap_or(0);
                        let c = compile(&Bispan::norm(&p)?);
                        let degrees = finite_difference_degree(&c, max_fiber + 2)?;
                        let per_target_ok =
                            degrees.iter().zip(p.fibers()).all(|(d, fb)| d.total == Some(fb.len()));
                        let measured = degrees.iter().filter_map(|d| d.total).max().unwrap_or(0);
                        let mut vanish = true;
                        for j in 0..y {
                            vanish &= differences_vanish(&c, j, max_fiber + 1, max_fiber + 2)?;
                        }
                        report.record(per_target_ok && measured == max_fiber && vanish, || {
                            Counterexample::new(format!("measured degree {measured}, largest fiber {max_fiber}"))
                                .with_map("p", &p)
                        });
                        let axioms = check_degree_axioms(&p, probe_bound);
                        report.record(axioms.is_ok(), || {
                            Counterexample::new(format!("degree axioms: {:?}", axioms.err())).with_map("p", &p)
                        });
                    }
                }
            }
            for y in 0..=n {
                for x1 in 0..=n {
                    for x2 in 0..=n - x1 {
                        for p in all_maps(x1, y) {
                            for q in all_maps(x2, y) {
                                let ok = fold_degree_decomposition(&p, &q).is_ok();
                                report.record(ok, || {
                                    Counterexample::new("fold decomposition disagrees with the direct one")
                                        .with_map("p", &p)
                                        .with_map("q", &q)
                                });
                            }
                        }
                    }
                }
            }
        }
        Some(group) => {
            let objects = GSet::point(group).probe_objects(n);
            for x in &objects {
                for y in &objects {
                    for p in maps_between(x, y) {
                        let axioms = check_degree_axioms(&p, probe_bound);
                        let d = degree_decomposition(&p);
                        let consistent = d.components.values().all(|c| c.map.fibers().iter().all(|fb| fb.len() == c.degree));
                        report.record(axioms.is_ok() && consistent, || {
                            Counterexample::new(format!("degree axioms: {:?}", axioms.err())).with_map("p", &p)
                        });
                    }
                }
            }
            for y in &objects {
                for x1 in &objects {
                    for x2 in &objects {
                        if x1.len() + x2.len() > n {
                            continue;
                        }
                        for p in maps_between(x1, y) {
                            for q in maps_between(x2, y) {
                                let ok = fold_degree_decomposition(&p, &q).is_ok();
                                report.record(ok, || {
                                    Counterexample::new("fold decomposition disagrees with the direct one")
                                        .with_map("p", &p)
                                        .with_map("q", &q)
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Probe pairs for a splitting check on `n` coordinates: all of
/// `({0..4}^n)²` when that has at most 625 elements, otherwise every
/// constant pair plus seeded random pairs up to 625.
pub fn splitting_probes(n: usize, r: &mut ChaCha8Rng) -> Vec<(Vec<usize>, Vec<usize>)> {
    let grid = grid_probes(n, 4, usize::MAX);
    if grid.len() * grid.len() <= 625 {
        let mut out = Vec::new();
        for e in &grid {
            for f in &grid {
                out.push((e.clone(), f.clone()));
            }
        }
        return out;
    }
    let mut out: Vec<(Vec<usize>, Vec<usize>)> =
        (0..=4).flat_map(|a| (0..=4).map(move |b| (vec![a; n], vec![b; n]))).collect();
    while out.len() < 625 {
        let e = (0..n).map(|_| r.gen_range(0..=4)).collect();
        let f = (0..n).map(|_| r.gen_range(0..=4)).collect();
        out.push((e, f));
    }
    out
}

/// Every finite-set map `p` with carriers `<= max_size` and fibers `<= 4`,
/// over ℕ and ℤ.
fn splitting_suite(config: &CheckConfig) -> Result<CheckReport> {
    let mut report = CheckReport::new(Suite::Splitting);
    let mut r = rng(config.seed);
    let n = config.max_size;
    for x in 0..=n {
        for y in 0..=n {
            for p in all_maps(x, y) {
                if p.fibers().iter().any(|fb| fb.len() > 4) {
                    continue;
                }
                let probes = splitting_probes(x, &mut r);
                let nat: Vec<(Vec<BigUint>, Vec<BigUint>)> = probes
                    .iter()
                    .map(|(e, f)| (e.iter().map(|&v| BigUint::from(v)).collect(), f.iter().map(|&v| BigUint::from(v)).collect()))
                    .collect();
                let int: Vec<(Vec<BigInt>, Vec<BigInt>)> = probes
                    .iter()
                    .map(|(e, f)| (e.iter().map(|&v| BigInt::from(v)).collect(), f.iter().map(|&v| BigInt::from(v)).collect()))
                    .collect();
                let a = check_binomial_splitting(&p, &nat)?;
                let b = check_binomial_splitting(&p, &int)?;
                report.record(a.passed() && b.passed(), || {
                    Counterexample::new(format!("splitting fails: {:?} / {:?}", a.failure, b.failure)).with_map("p", &p)
                });
            }
        }
    }
    Ok(report)
}

/// Resolves a group name, as used by `--group`.
pub fn group_by_name(name: &str) -> Result<Arc<Group>> {
    Group::by_name(name).map(Arc::new).ok_or_else(|| Error::InvalidGroup(format!("unknown group '{name}'")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nonsense".parse::<Suite>().is_err());
    }

    #[test]
    fn small_suites_pass() {
        let config = CheckConfig { max_size: 2, group: None, seed: 1, samples: 10 };
        for s in Suite::ALL {
            let report = run_suite(s, &config).unwrap();
            assert!(report.passed(), "{report}");
            assert!(report.cases > 0, "{report}");
        }
    }

    #[test]
    fn small_group_suites_pass() {
        let config = CheckConfig { max_size: 2, group: Some(Arc::new(Group::cyclic(2))), seed: 1, samples: 5 };
        for s in [Suite::UniversalProperty, Suite::Associativity, Suite::Functoriality, Suite::DoubleCoset, Suite::Norm, Suite::Degree] {
            let report = run_suite(s, &config).unwrap();
            assert!(report.passed(), "{report}");
        }
    }

    #[test]
    fn isomorphism_classes_are_distinct() {
        let classes = finset_bispans_up_to_iso(1, 1, 1);
        // p, f, l between sets of size <= 1: E, B ∈ {0, 1} with E nonempty
        // forcing B nonempty: three classes (0, 1 and x).
        assert_eq!(classes.len(), 3);
    }

    #[test]
    fn counterexamples_carry_actions() {
        let g = Arc::new(Group::cyclic(2));
        let free = GSet::cosets(&g, &g.trivial_subgroup());
        let c = Counterexample::new("demo").with_map("id", &Mor::identity(&free));
        assert_eq!(c.group.as_deref(), Some("C2"));
        assert_eq!(c.objects[0].action, Some(vec![vec![1, 0]]));
    }
}
