//! Bispans `src <-p- E -f-> B -l-> tgt` and their composition.

use std::collections::BTreeMap;
use std::fmt;

use crate::context::{
    self, check_universal_property, codiagonal, compose, coproduct, coproduct_mor, dependent_product, find_bijection,
    iso_over, is_cartesian, pullback, stabilizer, Ambient, Classes, DistributivityDiagram, Mor, Search, Section,
    UniversalPropertyReport,
};
use crate::error::{ClassKind, Error, Result};
use crate::span::Span;

/// Default number of orbit assignments tried by [`bispan_isomorphic`].
pub const ISO_BUDGET: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bispan<O> {
    p: Mor<O>,
    f: Mor<O>,
    l: Mor<O>,
}

impl<O: Ambient> Bispan<O> {
    /// `p: E -> src`, `f: E -> B` in F, `l: B -> tgt` in L.
    pub fn new(p: Mor<O>, f: Mor<O>, l: Mor<O>) -> Result<Self> {
        f.require(ClassKind::F)?;
        l.require(ClassKind::L)?;
        if p.dom() != f.dom() {
            return Err(Error::BoundaryMismatch("p and f must share their domain E".into()));
        }
        if f.cod() != l.dom() {
            return Err(Error::BoundaryMismatch("the codomain of f must be the domain of l".into()));
        }
        Ok(Bispan { p, f, l })
    }

    pub fn identity(x: &O) -> Self {
        let id = Mor::identity(x);
        Bispan { p: id.clone(), f: id.clone(), l: id }
    }

    /// `src <- x = x = x`: restriction along `p`.
    pub fn restriction(p: &Mor<O>) -> Self {
        let id = Mor::identity(p.dom());
        Bispan { p: p.clone(), f: id.clone(), l: id }
    }

    /// `x = x -f-> y = y`: the multiplicative transfer along `f`.
    pub fn norm(f: &Mor<O>) -> Result<Self> {
        Bispan::new(Mor::identity(f.dom()), f.clone(), Mor::identity(f.cod()))
    }

    /// `x = x = x -l-> y`: the additive transfer along `l`.
    pub fn transfer(l: &Mor<O>) -> Result<Self> {
        Bispan::new(Mor::identity(l.dom()), Mor::identity(l.dom()), l.clone())
    }

    /// A span `src <- apex -> tgt` as the bispan with identity middle leg.
    pub fn from_span(s: &Span<O>) -> Result<Self> {
        Bispan::new(s.back().clone(), Mor::identity(s.apex()), s.fwd().clone())
    }

    pub fn src(&self) -> &O {
        self.p.cod()
    }

    pub fn tgt(&self) -> &O {
        self.l.cod()
    }

    /// The exponent object `E`.
    pub fn e(&self) -> &O {
        self.p.dom()
    }

    /// The summand object `B`.
    pub fn b(&self) -> &O {
        self.f.cod()
    }

    pub fn p(&self) -> &Mor<O> {
        &self.p
    }

    pub fn f(&self) -> &Mor<O> {
        &self.f
    }

    pub fn l(&self) -> &Mor<O> {
        &self.l
    }

    /// Total number of elements in `E` and `B`, a rough size measure.
    pub fn size(&self) -> usize {
        self.e().len() + self.b().len()
    }

    /// Per target element, the sorted list over `b ∈ l⁻¹(j)` of the sorted
    /// multisets `{p(e) : f(e) = b}`. A complete invariant for plain finite
    /// sets; a necessary one in general.
    pub fn canonical_form(&self) -> CanonicalForm {
        let f_fibers = self.f.fibers();
        let terms = self
            .l
            .fibers()
            .iter()
            .map(|bs| {
                let mut monomials: Vec<Vec<usize>> = bs
                    .iter()
                    .map(|&b| {
                        let mut m: Vec<usize> = f_fibers[b].iter().map(|&e| self.p.apply(e)).collect();
                        m.sort_unstable();
                        m
                    })
                    .collect();
                monomials.sort();
                monomials
            })
            .collect();
        CanonicalForm { src: self.src().len(), terms }
    }
}

/// See [`Bispan::canonical_form`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub src: usize,
    pub terms: Vec<Vec<Vec<usize>>>,
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, term) in self.terms.iter().enumerate() {
            if j > 0 {
                write!(out, "; ")?;
            }
            let parts: Vec<String> = term
                .iter()
                .map(|m| if m.is_empty() { "1".to_string() } else { m.iter().map(|i| format!("x{i}")).collect::<Vec<_>>().join("*") })
                .collect();
            if parts.is_empty() {
                write!(out, "0")?;
            } else {
                write!(out, "{}", parts.join(" + "))?;
            }
        }
        Ok(())
    }
}

/// `b2 ∘ b1`, following the composite diagram:
///
/// 1. `P = B1 ×_J E2` with `π: P -> E2` and `u': P -> B1`;
/// 2. the distributivity diagram for `(π, f2)`, giving `D = f2_* π`, the
///    apex `X = f2^* D`, `ε: X -> P` and `f̃: X -> D`;
/// 3. `Y = E1 ×_{B1} P`;
/// 4. `G = Y ×_P X`.
///
/// The composite is `src1 <- G -> D -> tgt2`.
pub fn compose_bispans<O: Ambient>(b2: &Bispan<O>, b1: &Bispan<O>) -> Result<Bispan<O>> {
    check_composable(b2, b1)?;
    let sq_p = pullback(&b1.l, &b2.p)?;
    let pi = &sq_p.proj_f;
    let u1 = &sq_p.proj_g;
    let dd = dependent_product(pi, &b2.f)?;
    let sq_y = pullback(&b1.f, u1)?;
    let sq_g = pullback(&sq_y.proj_f, &dd.eps)?;
    let p = compose(&b1.p, &compose(&sq_y.proj_g, &sq_g.proj_g)?)?;
    let f = compose(&dd.f_tilde, &sq_g.proj_f)?;
    let l = compose(&b2.l, &dd.g)?;
    Bispan::new(p, f, l)
}

/// The same composite with the last two pullbacks taken in the other order:
/// `G' = E1 ×_{B1} X` directly, along `u' ∘ ε`.
pub fn compose_bispans_alt<O: Ambient>(b2: &Bispan<O>, b1: &Bispan<O>) -> Result<Bispan<O>> {
    check_composable(b2, b1)?;
    let sq_p = pullback(&b2.p, &b1.l)?;
    let pi = &sq_p.proj_g;
    let u1 = &sq_p.proj_f;
    let pi = pi.clone().with_classes(b1.l.classes());
    let dd = dependent_product(&pi, &b2.f)?;
    let to_b1 = compose(u1, &dd.eps)?;
    let sq_g = pullback(&to_b1, &b1.f)?;
    let p = compose(&b1.p, &sq_g.proj_f)?;
    let f = compose(&dd.f_tilde, &sq_g.proj_g)?.with_classes(b2.f.classes().meet(b1.f.classes()));
    let l = compose(&b2.l, &dd.g)?;
    Bispan::new(p, f, l)
}

fn check_composable<O: Ambient>(b2: &Bispan<O>, b1: &Bispan<O>) -> Result<()> {
    if b1.tgt() != b2.src() {
        return Err(Error::BoundaryMismatch(format!(
            "target of the first bispan ({} elements) differs from source of the second ({} elements)",
            b1.tgt().len(),
            b2.src().len()
        )));
    }
    Ok(())
}

/// A 2-morphism of bispans: maps `E -> E'` and `B -> B'` making the left
/// triangle, middle square and right triangle commute, with the middle
/// square cartesian.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BispanMor<O> {
    pub source: Bispan<O>,
    pub target: Bispan<O>,
    pub e_map: Mor<O>,
    pub b_map: Mor<O>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BispanMorFailure {
    Boundary,
    Endpoints,
    LeftTriangle { at: usize },
    MiddleSquare { at: usize },
    RightTriangle { at: usize },
    NotCartesian,
}

impl fmt::Display for BispanMorFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BispanMorFailure::Boundary => write!(f, "bispans have different boundaries"),
            BispanMorFailure::Endpoints => write!(f, "vertical maps have the wrong endpoints"),
            BispanMorFailure::LeftTriangle { at } => write!(f, "left triangle fails at E element {at}"),
            BispanMorFailure::MiddleSquare { at } => write!(f, "middle square fails at E element {at}"),
            BispanMorFailure::RightTriangle { at } => write!(f, "right triangle fails at B element {at}"),
            BispanMorFailure::NotCartesian => write!(f, "middle square is not cartesian"),
        }
    }
}

/// Reports the first region that fails.
pub fn validate_bispan_mor<O: Ambient>(m: &BispanMor<O>) -> std::result::Result<(), BispanMorFailure> {
    let (s, t) = (&m.source, &m.target);
    if s.src() != t.src() || s.tgt() != t.tgt() {
        return Err(BispanMorFailure::Boundary);
    }
    if m.e_map.dom() != s.e() || m.e_map.cod() != t.e() || m.b_map.dom() != s.b() || m.b_map.cod() != t.b() {
        return Err(BispanMorFailure::Endpoints);
    }
    for e in 0..s.e().len() {
        if t.p.apply(m.e_map.apply(e)) != s.p.apply(e) {
            return Err(BispanMorFailure::LeftTriangle { at: e });
        }
        if t.f.apply(m.e_map.apply(e)) != m.b_map.apply(s.f.apply(e)) {
            return Err(BispanMorFailure::MiddleSquare { at: e });
        }
    }
    for b in 0..s.b().len() {
        if t.l.apply(m.b_map.apply(b)) != s.l.apply(b) {
            return Err(BispanMorFailure::RightTriangle { at: b });
        }
    }
    if !is_cartesian(&t.f, &m.b_map, &m.e_map, &s.f) {
        return Err(BispanMorFailure::NotCartesian);
    }
    Ok(())
}

/// Searches for an invertible 2-morphism `a => b`. For plain finite sets
/// the canonical form decides the question and the search succeeds on its
/// first complete candidate; for G-sets the search over orbits of `B` is
/// exhaustive within `budget` and reports [`Search::Exhausted`] beyond it.
pub fn bispan_isomorphic_with_budget<O: Ambient>(a: &Bispan<O>, b: &Bispan<O>, budget: usize) -> Search<BispanMor<O>> {
    if a.src() != b.src() || a.tgt() != b.tgt() || a.e().len() != b.e().len() || a.b().len() != b.b().len() {
        return Search::Absent;
    }
    if a.canonical_form() != b.canonical_form() {
        return Search::Absent;
    }
    let type_a = local_types(a);
    let type_b = local_types(b);
    let allowed = |x: usize, y: usize| a.l.apply(x) == b.l.apply(y) && type_a[x] == type_b[y];
    // Intern (l(x), local type) so candidates are drawn from one class.
    let mut classes = BTreeMap::new();
    let mut color = |bispan: &Bispan<O>, types: &[LocalType]| -> Vec<usize> {
        (0..bispan.b().len())
            .map(|x| {
                let fresh = classes.len();
                *classes.entry((bispan.l.apply(x), types[x].clone())).or_insert(fresh)
            })
            .collect()
    };
    let (color_a, color_b) = (color(a, &type_a), color(b, &type_b));
    let mut e_iso = None;
    let mut accept = |beta: &[usize]| {
        let moved = Mor::new_unchecked(a.e().clone(), b.b().clone(), a.f.map().iter().map(|&x| beta[x]).collect(), Classes::ALL);
        match iso_over(&[&a.p, &moved], &[&b.p, &b.f]) {
            Some(iso) => {
                e_iso = Some(iso);
                true
            }
            None => false,
        }
    };
    let mut budget = budget;
    match find_bijection(a.b(), b.b(), Some((&color_a, &color_b)), &allowed, &mut accept, &mut budget) {
        Search::Found(beta) => {
            let b_map = Mor::new_unchecked(a.b().clone(), b.b().clone(), beta, Classes::ALL);
            let e_map = e_iso.expect("accepted candidates record the E isomorphism");
            Search::Found(BispanMor { source: a.clone(), target: b.clone(), e_map, b_map })
        }
        Search::Absent => Search::Absent,
        Search::Exhausted => Search::Exhausted,
    }
}

pub fn bispan_isomorphic<O: Ambient>(a: &Bispan<O>, b: &Bispan<O>) -> Search<BispanMor<O>> {
    bispan_isomorphic_with_budget(a, b, ISO_BUDGET)
}

/// Per element of `B`: its stabilizer and the sorted multiset of
/// `(p(e), Stab(e))` over its fiber. Preserved exactly by isomorphisms.
type LocalType = (Vec<usize>, Vec<(usize, Vec<usize>)>);

fn local_types<O: Ambient>(x: &Bispan<O>) -> Vec<LocalType> {
    let e = x.e();
    x.f
        .fibers()
        .iter()
        .enumerate()
        .map(|(b, fiber)| {
            let mut t: Vec<(usize, Vec<usize>)> = fiber.iter().map(|&v| (x.p.apply(v), stabilizer(e, v))).collect();
            t.sort();
            (stabilizer(x.b(), b), t)
        })
        .collect()
}

/// Componentwise disjoint union.
pub fn coproduct_bispans<O: Ambient>(a: &Bispan<O>, b: &Bispan<O>) -> Result<Bispan<O>> {
    Bispan::new(coproduct_mor(&a.p, &b.p)?, coproduct_mor(&a.f, &b.f)?, coproduct_mor(&a.l, &b.l)?)
}

/// The empty bispan on the empty object.
pub fn empty_bispan<O: Ambient>(like: &O) -> Bispan<O> {
    Bispan::identity(&like.empty())
}

/// The distributivity diagram for `(l2 ∘ l1, f)` pasted from the diagrams
/// for `(l2, f)` and `(l1', f')`, where `l1'` is `l1` pulled back along the
/// counit of the first.
#[derive(Debug, Clone)]
pub struct PastedDiagram<O> {
    pub outer: DistributivityDiagram<O>,
    pub first: DistributivityDiagram<O>,
    pub second: DistributivityDiagram<O>,
    pub report: UniversalPropertyReport<O>,
    /// Isomorphism from the pasted `w` to the directly computed one.
    pub matches_direct: bool,
}

/// `l1: x -> y`, `l2: y -> z` in L and `f: z -> w` in F.
pub fn paste_distributivity<O: Ambient>(l1: &Mor<O>, l2: &Mor<O>, f: &Mor<O>, probe_bound: usize) -> Result<PastedDiagram<O>> {
    if l1.cod() != l2.dom() || l2.cod() != f.dom() {
        return Err(Error::NotComposable);
    }
    l1.require(ClassKind::L)?;
    let second = dependent_product(l2, f)?;
    let sq = pullback(l1, &second.eps)?;
    let l1_prime = sq.proj_f.clone();
    let first = dependent_product(&l1_prime, &second.f_tilde)?;
    let g = compose(&second.g, &first.g)?;
    let l = compose(l2, l1)?;
    let pb = pullback(f, &g)?;
    let eps_map = pb
        .pairs
        .iter()
        .map(|&(j, s)| {
            let k2 = second.pb.index_of(j, first.g.apply(s)).expect("lies over w2");
            let k1 = first.pb.index_of(k2, s).expect("lies over w1");
            sq.proj_g.apply(first.eps.apply(k1))
        })
        .collect();
    let eps = Mor::new(pb.apex.clone(), l.dom().clone(), eps_map)?;
    let outer = assemble(l, f.clone(), g, pb, eps)?;
    let report = check_universal_property(&outer, probe_bound);
    let direct = dependent_product(&outer.l, f)?;
    let matches_direct = context::diagrams_isomorphic(&outer, &direct).is_some();
    Ok(PastedDiagram { outer, first, second, report, matches_direct })
}

/// `l: x -> y` in L, `f1: y -> z` and `f2: z -> w` in F: the diagram for
/// `(l, f2 ∘ f1)` pasted from those for `(l, f1)` and `(g1, f2)`.
pub fn paste_distributivity_f<O: Ambient>(l: &Mor<O>, f1: &Mor<O>, f2: &Mor<O>, probe_bound: usize) -> Result<PastedDiagram<O>> {
    if l.cod() != f1.dom() || f1.cod() != f2.dom() {
        return Err(Error::NotComposable);
    }
    let first = dependent_product(l, f1)?;
    let second = dependent_product(&first.g, f2)?;
    let f = compose(f2, f1)?;
    let g = second.g.clone();
    let pb = pullback(&f, &g)?;
    let eps_map = pb
        .pairs
        .iter()
        .map(|&(j, s)| {
            let k2 = second.pb.index_of(f1.apply(j), s).expect("lies over w");
            let t = second.eps.apply(k2);
            let k1 = first.pb.index_of(j, t).expect("lies over w1");
            first.eps.apply(k1)
        })
        .collect();
    let eps = Mor::new(pb.apex.clone(), l.dom().clone(), eps_map)?;
    let outer = assemble(l.clone(), f.clone(), g, pb, eps)?;
    let report = check_universal_property(&outer, probe_bound);
    let direct = dependent_product(l, &f)?;
    let matches_direct = context::diagrams_isomorphic(&outer, &direct).is_some();
    Ok(PastedDiagram { outer, first, second, report, matches_direct })
}

fn assemble<O: Ambient>(
    l: Mor<O>,
    f: Mor<O>,
    g: Mor<O>,
    pb: context::PullbackSquare<O>,
    eps: Mor<O>,
) -> Result<DistributivityDiagram<O>> {
    let f_fibers = f.fibers();
    let sections = (0..g.dom().len())
        .map(|s| {
            let base = g.apply(s);
            let values = f_fibers[base].iter().map(|&j| eps.apply(pb.index_of(j, s).expect("pair exists"))).collect();
            Section { base, values }
        })
        .collect();
    Ok(DistributivityDiagram { w: g.dom().clone(), f_tilde: pb.proj_f.clone(), l, f, g, pb, eps, sections })
}

/// The distributivity diagram for `∇_x` followed by `p`, with `w` split by
/// the two constant sections.
#[derive(Debug, Clone)]
pub struct FoldDistributivityData<O> {
    pub p: Mor<O>,
    pub diagram: DistributivityDiagram<O>,
    /// `s0` picks the left copy everywhere, `s1` the right copy.
    pub s0: Mor<O>,
    pub s1: Mor<O>,
    /// The elements of `w` hit by neither section.
    pub c: O,
    pub c_incl: Mor<O>,
    /// `g` restricted to `c`.
    pub k: Mor<O>,
    pub c_l: O,
    pub c_r: O,
    pub eps_l: Mor<O>,
    pub eps_r: Mor<O>,
    pub p_tilde_l: Mor<O>,
    pub p_tilde_r: Mor<O>,
}

impl<O: Ambient> FoldDistributivityData<O> {
    /// `y ⊔ c ⊔ y -> w` given by `s0`, the inclusion of `c`, and `s1`.
    /// Bijective exactly when `p` has no empty fibers: over an empty fiber
    /// there is a single section, so `s0` and `s1` coincide.
    pub fn splitting_map(&self) -> Result<Mor<O>> {
        let yc = coproduct(self.p.cod(), &self.c)?;
        let ycy = coproduct(&yc.obj, self.p.cod())?;
        let map = self
            .s0
            .map()
            .iter()
            .chain(self.c_incl.map())
            .chain(self.s1.map())
            .copied()
            .collect();
        Mor::new(ycy.obj, self.diagram.w.clone(), map)
    }

    /// `|c_z|` for each `z ∈ y`.
    pub fn c_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.p.cod().len()];
        for &z in self.k.map() {
            counts[z] += 1;
        }
        counts
    }
}

pub fn fold_distributivity<O: Ambient>(p: &Mor<O>) -> Result<FoldDistributivityData<O>> {
    p.require(ClassKind::F)?;
    let x = p.dom();
    let n = x.len();
    let nabla = codiagonal(x);
    let diagram = dependent_product(&nabla, p)?;
    let y = p.cod();
    let secs = &diagram.sections;
    let find = |z: usize, right: bool| {
        (0..secs.len())
            .find(|&s| secs[s].base == z && secs[s].values.iter().all(|&v| (v >= n) == right))
            .expect("constant sections exist")
    };
    let s0 = Mor::new(y.clone(), diagram.w.clone(), (0..y.len()).map(|z| find(z, false)).collect())?;
    let s1 = Mor::new(y.clone(), diagram.w.clone(), (0..y.len()).map(|z| find(z, true)).collect())?;
    let mut hit = vec![false; diagram.w.len()];
    for &s in s0.map().iter().chain(s1.map()) {
        hit[s] = true;
    }
    let c_elems: Vec<usize> = (0..diagram.w.len()).filter(|&s| !hit[s]).collect();
    let c = diagram.w.restrict(&c_elems);
    let c_incl = Mor::new(c.clone(), diagram.w.clone(), c_elems.clone())?;
    let k = compose(&diagram.g, &c_incl)?;
    let mut c_index = vec![usize::MAX; diagram.w.len()];
    for (i, &s) in c_elems.iter().enumerate() {
        c_index[s] = i;
    }
    // p*w restricted to c, split by which copy of x the counit lands in.
    let (mut left, mut right) = (Vec::new(), Vec::new());
    for (kk, &(_, s)) in diagram.pb.pairs.iter().enumerate() {
        if c_index[s] != usize::MAX {
            if diagram.eps.apply(kk) < n {
                left.push(kk);
            } else {
                right.push(kk);
            }
        }
    }
    let apex = &diagram.pb.apex;
    let c_l = apex.restrict(&left);
    let c_r = apex.restrict(&right);
    let eps_l = Mor::new(c_l.clone(), x.clone(), left.iter().map(|&kk| diagram.eps.apply(kk)).collect())?;
    let eps_r = Mor::new(c_r.clone(), x.clone(), right.iter().map(|&kk| diagram.eps.apply(kk) - n).collect())?;
    let p_tilde_l = Mor::new(c_l.clone(), c.clone(), left.iter().map(|&kk| c_index[diagram.pb.pairs[kk].1]).collect())?;
    let p_tilde_r = Mor::new(c_r.clone(), c.clone(), right.iter().map(|&kk| c_index[diagram.pb.pairs[kk].1]).collect())?;
    Ok(FoldDistributivityData {
        p: p.clone(),
        diagram,
        s0,
        s1,
        c,
        c_incl,
        k,
        c_l,
        c_r,
        eps_l,
        eps_r,
        p_tilde_l,
        p_tilde_r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degree::degree_decomposition;
    use crate::finset::{finmap, to_point, unflagged, FinSet};

    pub(crate) fn fin(p: (usize, usize, &[usize]), f: (usize, &[usize]), l: (usize, &[usize])) -> Bispan<FinSet> {
        Bispan::new(
            finmap(p.0, p.1, p.2).unwrap(),
            finmap(p.0, f.0, f.1).unwrap(),
            finmap(f.0, l.0, l.1).unwrap(),
        )
        .unwrap()
    }

    fn doubling() -> Bispan<FinSet> {
        fin((2, 1, &[0, 0]), (2, &[0, 1]), (1, &[0, 0]))
    }

    fn squaring() -> Bispan<FinSet> {
        fin((2, 1, &[0, 0]), (1, &[0, 0]), (1, &[0]))
    }

    #[test]
    fn doubling_then_squaring() {
        let c = compose_bispans(&squaring(), &doubling()).unwrap();
        assert_eq!(c.e().len(), 8);
        assert_eq!(c.b().len(), 4);
        assert!(c.f().fibers().iter().all(|fb| fb.len() == 2));
        assert_eq!(c.canonical_form().terms, vec![vec![vec![0, 0]; 4]]);
        let alt = compose_bispans_alt(&squaring(), &doubling()).unwrap();
        assert!(bispan_isomorphic(&c, &alt).found().is_some());
    }

    #[test]
    fn unit_laws() {
        let b = fin((3, 2, &[0, 1, 1]), (2, &[0, 0, 1]), (2, &[1, 1]));
        let left = compose_bispans(&Bispan::identity(b.tgt()), &b).unwrap();
        let right = compose_bispans(&b, &Bispan::identity(b.src())).unwrap();
        for x in [left, right] {
            let m = bispan_isomorphic(&x, &b).found().unwrap();
            validate_bispan_mor(&m).unwrap();
        }
    }

    #[test]
    fn empty_exponent_composes_to_constant() {
        // b1: E = ∅, B = 1, so b1 is the constant 1; squaring it stays 1.
        let b1 = fin((0, 1, &[]), (1, &[]), (1, &[0]));
        let c = compose_bispans(&squaring(), &b1).unwrap();
        assert_eq!(c.canonical_form().terms, vec![vec![Vec::<usize>::new()]]);
        // b1 with empty B is the constant 0.
        let zero = fin((0, 1, &[]), (0, &[]), (1, &[]));
        let c = compose_bispans(&squaring(), &zero).unwrap();
        assert_eq!(c.canonical_form().terms, vec![Vec::<Vec<usize>>::new()]);
    }

    #[test]
    fn canonical_forms_separate_square_and_double() {
        let sq = squaring();
        let dbl = fin((2, 1, &[0, 0]), (2, &[0, 1]), (1, &[0, 0]));
        assert!(matches!(bispan_isomorphic(&sq, &dbl), Search::Absent));
        assert!(bispan_isomorphic(&sq, &sq).found().is_some());
        let b = fin((3, 2, &[0, 1, 1]), (2, &[0, 0, 1]), (2, &[1, 1]));
        let scrambled = fin((3, 2, &[1, 1, 0]), (2, &[1, 0, 0]), (2, &[1, 1]));
        let m = bispan_isomorphic(&b, &scrambled).found().unwrap();
        validate_bispan_mor(&m).unwrap();
    }

    #[test]
    fn bispan_mor_validation() {
        let b = fin((3, 2, &[0, 1, 1]), (2, &[0, 0, 1]), (2, &[1, 1]));
        let id = BispanMor { source: b.clone(), target: b.clone(), e_map: Mor::identity(b.e()), b_map: Mor::identity(b.b()) };
        assert_eq!(validate_bispan_mor(&id), Ok(()));
        // E = 2 over B = 1 mapped onto E' = 1 over B' = 1.
        let two = fin((2, 1, &[0, 0]), (1, &[0, 0]), (1, &[0]));
        let one = fin((1, 1, &[0]), (1, &[0]), (1, &[0]));
        let collapse = BispanMor { source: two, target: one, e_map: to_point(2), b_map: to_point(1) };
        assert_eq!(validate_bispan_mor(&collapse), Err(BispanMorFailure::NotCartesian));
        let mut broken = id.clone();
        broken.e_map = finmap(3, 3, &[1, 0, 2]).unwrap();
        assert_eq!(validate_bispan_mor(&broken), Err(BispanMorFailure::LeftTriangle { at: 0 }));
    }

    #[test]
    fn coproducts() {
        let e = empty_bispan(&FinSet::new(0));
        let b = doubling();
        let c = coproduct_bispans(&b, &e).unwrap();
        assert!(bispan_isomorphic(&c, &b).found().is_some());
        let ids = coproduct_bispans(&Bispan::identity(&FinSet::new(2)), &Bispan::identity(&FinSet::new(1))).unwrap();
        assert_eq!(ids, Bispan::identity(&FinSet::new(3)));
        let both = coproduct_bispans(&doubling(), &squaring()).unwrap();
        assert_eq!(both.canonical_form().terms, vec![vec![vec![0], vec![0]], vec![vec![1, 1]]]);
    }

    #[test]
    fn flags_are_required() {
        let p = finmap(2, 1, &[0, 0]).unwrap();
        let f = unflagged(finmap(2, 1, &[0, 0]).unwrap());
        let l = Mor::identity(&FinSet::point());
        assert!(matches!(Bispan::new(p, f, l), Err(Error::MissingClass(ClassKind::F))));
    }

    #[test]
    fn pasting() {
        let l1 = finmap(4, 2, &[0, 0, 1, 1]).unwrap();
        let l2b = finmap(4, 2, &[0, 0, 1, 1]).unwrap();
        let f = to_point(2);
        let d = paste_distributivity(&l1, &Mor::identity(&FinSet::new(2)), &f, 2).unwrap();
        assert!(d.report.passed() && d.matches_direct);
        let l1b = finmap(8, 4, &[0, 0, 1, 1, 2, 2, 3, 3]).unwrap();
        let d = paste_distributivity(&l1b, &l2b, &f, 2).unwrap();
        assert_eq!(d.outer.w.len(), 16);
        assert!(d.report.passed() && d.matches_direct);
        let d = paste_distributivity_f(&l1, &Mor::identity(&FinSet::new(2)), &f, 2).unwrap();
        assert!(d.report.passed() && d.matches_direct);
    }

    #[test]
    fn fold_of_fiber_two() {
        let d = fold_distributivity(&to_point(2)).unwrap();
        assert_eq!(d.diagram.w.len(), 4);
        assert_eq!(d.c.len(), 2);
        assert!(d.p_tilde_l.is_bijective() && d.p_tilde_r.is_bijective());
        assert!(d.splitting_map().unwrap().is_bijective());
    }

    #[test]
    fn fold_of_fiber_one_and_three() {
        let d = fold_distributivity(&Mor::identity(&FinSet::new(3))).unwrap();
        assert_eq!(d.c.len(), 0);
        let d = fold_distributivity(&to_point(3)).unwrap();
        assert_eq!(d.c.len(), 6);
        let degrees: Vec<usize> = degree_decomposition(&d.p_tilde_l).components.keys().copied().collect();
        assert_eq!(degrees, vec![1, 2]);
        assert_eq!(d.c_l.len() + d.c_r.len(), 18);
    }

    #[test]
    fn fold_over_empty_fiber() {
        let p = finmap(2, 2, &[0, 0]).unwrap();
        let d = fold_distributivity(&p).unwrap();
        assert_eq!(d.c_counts(), vec![2, 0]);
        assert_eq!(d.s0.apply(1), d.s1.apply(1));
        assert!(!d.splitting_map().unwrap().is_bijective());
    }
}
