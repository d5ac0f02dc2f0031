//! The ambient category of a bispan triple.
//!
//! Both concrete instances (plain finite sets and finite G-sets) are
//! categories of finite carriers `0..n` equipped with an action of a finite
//! group; plain finite sets carry the trivial action. The [`Ambient`] trait
//! exposes exactly that structure, and everything categorical in this module
//! (composition, pullbacks, coproducts, dependent products and the
//! universal-property checker) is written once against it.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use crate::error::{ClassKind, Error, Result};

/// An object of an ambient category: a finite carrier `0..len()` with a
/// group action.
pub trait Ambient: Clone + fmt::Debug + PartialEq + Eq + Send + Sync {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Whether both objects live in the same category (same acting group).
    fn same_ambient(&self, other: &Self) -> bool;

    fn group_order(&self) -> usize;

    fn group_inverse(&self, g: usize) -> usize;

    /// Action of group element `g` on element `x`.
    fn act(&self, g: usize, x: usize) -> usize;

    /// An object of the same category on `len` points whose action is `act`.
    ///
    /// The caller guarantees that `act` is an action; instances may assert it.
    fn build(&self, len: usize, act: &dyn Fn(usize, usize) -> usize) -> Self;

    /// A structure-preserving bijection `self -> other`, if one exists.
    fn isomorphism(&self, other: &Self) -> Option<Vec<usize>>;

    /// All objects with at most `bound` elements, one per isomorphism class.
    fn probe_objects(&self, bound: usize) -> Vec<Self>;

    /// The empty object of this category.
    fn empty(&self) -> Self {
        self.build(0, &|_, x| x)
    }

    /// Restriction to a subset closed under the action. Element `i` of the
    /// result is `elems[i]`.
    fn restrict(&self, elems: &[usize]) -> Self {
        let index: HashMap<usize, usize> = elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        self.build(elems.len(), &|g, i| index[&self.act(g, elems[i])])
    }
}

/// Membership in the two morphism classes of the bispan triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Classes {
    pub f: bool,
    pub l: bool,
}

impl Classes {
    pub const ALL: Classes = Classes { f: true, l: true };
    pub const NONE: Classes = Classes { f: false, l: false };

    pub fn meet(self, other: Classes) -> Classes {
        Classes { f: self.f && other.f, l: self.l && other.l }
    }

    pub fn has(self, kind: ClassKind) -> bool {
        match kind {
            ClassKind::F => self.f,
            ClassKind::L => self.l,
        }
    }
}

/// A morphism with an explicit element-level assignment.
#[derive(Clone, PartialEq, Eq)]
pub struct Mor<O> {
    dom: O,
    cod: O,
    map: Vec<usize>,
    classes: Classes,
}

impl<O: fmt::Debug> fmt::Debug for Mor<O> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Mor")
            .field("map", &self.map)
            .field("classes", &self.classes)
            .field("dom", &self.dom)
            .field("cod", &self.cod)
            .finish()
    }
}

impl<O: Ambient> Mor<O> {
    /// Validates totality, range and equivariance. The result carries both
    /// class flags, since both concrete triples use all maps for F and L.
    pub fn new(dom: O, cod: O, map: Vec<usize>) -> Result<Self> {
        if !dom.same_ambient(&cod) {
            return Err(Error::AmbientMismatch);
        }
        if map.len() != dom.len() {
            return Err(Error::AssignmentLength { expected: dom.len(), got: map.len() });
        }
        if let Some((at, &value)) = map.iter().enumerate().find(|(_, &v)| v >= cod.len()) {
            return Err(Error::OutOfRange { at, value, len: cod.len() });
        }
        for g in 0..dom.group_order() {
            for (x, &y) in map.iter().enumerate() {
                if map[dom.act(g, x)] != cod.act(g, y) {
                    return Err(Error::NotEquivariant { at: x, g });
                }
            }
        }
        Ok(Mor { dom, cod, map, classes: Classes::ALL })
    }

    pub(crate) fn new_unchecked(dom: O, cod: O, map: Vec<usize>, classes: Classes) -> Self {
        debug_assert_eq!(map.len(), dom.len());
        Mor { dom, cod, map, classes }
    }

    pub fn with_classes(mut self, classes: Classes) -> Self {
        self.classes = classes;
        self
    }

    pub fn identity(obj: &O) -> Self {
        Mor { dom: obj.clone(), cod: obj.clone(), map: (0..obj.len()).collect(), classes: Classes::ALL }
    }

    /// The unique map out of the empty object.
    pub fn from_empty(cod: &O) -> Self {
        Mor { dom: cod.empty(), cod: cod.clone(), map: Vec::new(), classes: Classes::ALL }
    }

    pub fn dom(&self) -> &O {
        &self.dom
    }

    pub fn cod(&self) -> &O {
        &self.cod
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn classes(&self) -> Classes {
        self.classes
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn require(&self, kind: ClassKind) -> Result<()> {
        if self.classes.has(kind) {
            Ok(())
        } else {
            Err(Error::MissingClass(kind))
        }
    }

    /// Elements over `y`, in carrier order.
    pub fn fiber(&self, y: usize) -> Vec<usize> {
        (0..self.map.len()).filter(|&x| self.map[x] == y).collect()
    }

    /// All fibers, indexed by codomain element.
    pub fn fibers(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.cod.len()];
        for (x, &y) in self.map.iter().enumerate() {
            out[y].push(x);
        }
        out
    }

    pub fn is_bijective(&self) -> bool {
        self.dom.len() == self.cod.len() && self.fibers().iter().all(|f| f.len() == 1)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Mor<O>) -> Result<Mor<O>> {
        compose(other, self)
    }

    /// The inverse of a bijection.
    pub fn inverse(&self) -> Option<Mor<O>> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![0; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y] = x;
        }
        Some(Mor { dom: self.cod.clone(), cod: self.dom.clone(), map: inv, classes: self.classes })
    }
}

/// `g ∘ f`; class flags are intersected.
pub fn compose<O: Ambient>(g: &Mor<O>, f: &Mor<O>) -> Result<Mor<O>> {
    if f.cod != g.dom {
        return Err(Error::NotComposable);
    }
    let map = f.map.iter().map(|&x| g.map[x]).collect();
    Ok(Mor { dom: f.dom.clone(), cod: g.cod.clone(), map, classes: f.classes.meet(g.classes) })
}

/// A cartesian square over `f: x -> y` and `g: z -> y`.
///
/// Apex element `k` is the pair `pairs[k] = (a, b)` with `f(a) = g(b)`; pairs
/// are listed lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PullbackSquare<O> {
    pub f: Mor<O>,
    pub g: Mor<O>,
    pub apex: O,
    /// Base change of `f` along `g`: apex -> dom(g).
    pub proj_f: Mor<O>,
    /// Base change of `g` along `f`: apex -> dom(f).
    pub proj_g: Mor<O>,
    pub pairs: Vec<(usize, usize)>,
}

impl<O: Ambient> PullbackSquare<O> {
    pub fn index_of(&self, a: usize, b: usize) -> Option<usize> {
        self.pairs.binary_search(&(a, b)).ok()
    }
}

pub fn pullback<O: Ambient>(f: &Mor<O>, g: &Mor<O>) -> Result<PullbackSquare<O>> {
    if f.cod != g.cod {
        return Err(Error::CodomainMismatch);
    }
    let g_fibers = g.fibers();
    let mut pairs = Vec::new();
    for (a, &y) in f.map.iter().enumerate() {
        for &b in &g_fibers[y] {
            pairs.push((a, b));
        }
    }
    let index: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let x = &f.dom;
    let z = &g.dom;
    let apex = x.build(pairs.len(), &|h, k| {
        let (a, b) = pairs[k];
        index[&(x.act(h, a), z.act(h, b))]
    });
    let proj_f = Mor::new_unchecked(apex.clone(), z.clone(), pairs.iter().map(|p| p.1).collect(), f.classes);
    let proj_g = Mor::new_unchecked(apex.clone(), x.clone(), pairs.iter().map(|p| p.0).collect(), g.classes);
    Ok(PullbackSquare { f: f.clone(), g: g.clone(), apex, proj_f, proj_g, pairs })
}

/// Whether `f ∘ to_x = g ∘ to_z` and the induced map into the pullback is a
/// bijection.
pub fn is_cartesian<O: Ambient>(f: &Mor<O>, g: &Mor<O>, to_x: &Mor<O>, to_z: &Mor<O>) -> bool {
    if f.cod != g.cod || to_x.cod != f.dom || to_z.cod != g.dom || to_x.dom != to_z.dom {
        return false;
    }
    let n = to_x.dom.len();
    if (0..n).any(|k| f.map[to_x.map[k]] != g.map[to_z.map[k]]) {
        return false;
    }
    let expected: usize = f.map.iter().map(|&y| g.map.iter().filter(|&&v| v == y).count()).sum();
    let distinct: HashSet<(usize, usize)> = (0..n).map(|k| (to_x.map[k], to_z.map[k])).collect();
    distinct.len() == n && n == expected
}

/// A coproduct with its injections. Left elements come first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coproduct<O> {
    pub obj: O,
    pub inl: Mor<O>,
    pub inr: Mor<O>,
}

pub fn coproduct<O: Ambient>(a: &O, b: &O) -> Result<Coproduct<O>> {
    if !a.same_ambient(b) {
        return Err(Error::AmbientMismatch);
    }
    let (na, nb) = (a.len(), b.len());
    let obj = a.build(na + nb, &|g, k| if k < na { a.act(g, k) } else { na + b.act(g, k - na) });
    let inl = Mor::new_unchecked(a.clone(), obj.clone(), (0..na).collect(), Classes::ALL);
    let inr = Mor::new_unchecked(b.clone(), obj.clone(), (na..na + nb).collect(), Classes::ALL);
    Ok(Coproduct { obj, inl, inr })
}

/// `f ⊔ g : dom f ⊔ dom g -> cod f ⊔ cod g`.
pub fn coproduct_mor<O: Ambient>(f: &Mor<O>, g: &Mor<O>) -> Result<Mor<O>> {
    let dom = coproduct(&f.dom, &g.dom)?;
    let cod = coproduct(&f.cod, &g.cod)?;
    let shift = f.cod.len();
    let map = f.map.iter().copied().chain(g.map.iter().map(|&y| y + shift)).collect();
    Ok(Mor::new_unchecked(dom.obj, cod.obj, map, f.classes.meet(g.classes)))
}

/// The fold map `y ⊔ y -> y`.
pub fn codiagonal<O: Ambient>(y: &O) -> Mor<O> {
    let n = y.len();
    let dom = coproduct(y, y).expect("same ambient").obj;
    Mor::new_unchecked(dom, y.clone(), (0..2 * n).map(|k| k % n.max(1)).collect(), Classes::ALL)
}

/// A structure-preserving bijection `a -> b`, if any.
pub fn are_isomorphic<O: Ambient>(a: &O, b: &O) -> Option<Mor<O>> {
    if !a.same_ambient(b) {
        return None;
    }
    a.isomorphism(b).map(|map| Mor::new_unchecked(a.clone(), b.clone(), map, Classes::ALL))
}

/// An isomorphism `dom a -> dom b` commuting with each pair of legs
/// `a[i]`, `b[i]` (legs on one side share their domain). Orbits are matched
/// greedily: an orbit of `dom a` with representative `x` maps onto an orbit
/// of `dom b` exactly when that orbit contains some `x'` with the same leg
/// values and the same stabilizer, and this is an equivalence relation on
/// orbits, so greedy matching is complete.
pub fn iso_over<O: Ambient>(a: &[&Mor<O>], b: &[&Mor<O>]) -> Option<Mor<O>> {
    let (da, db) = (a.first()?.dom(), b.first()?.dom());
    if a.len() != b.len() || da.len() != db.len() || !da.same_ambient(db) {
        return None;
    }
    let oa = orbits(da);
    let ob = orbits(db);
    let label = |legs: &[&Mor<O>], x: usize| legs.iter().map(|m| m.apply(x)).collect::<Vec<_>>();
    let mut used = vec![false; ob.reps.len()];
    let mut map = vec![0; da.len()];
    for (i, &rep) in oa.reps.iter().enumerate() {
        let want = label(a, rep);
        let stab = stabilizer(da, rep);
        let image = (0..db.len()).find(|&y| {
            let o = ob.orbit_of[y];
            !used[o] && ob.members[o].len() == oa.members[i].len() && label(b, y) == want && stabilizer(db, y) == stab
        })?;
        used[ob.orbit_of[image]] = true;
        for g in 0..da.group_order() {
            map[da.act(g, rep)] = db.act(g, image);
        }
    }
    Some(Mor::new_unchecked(da.clone(), db.clone(), map, Classes::ALL))
}

/// One element of a dependent product: a section of `l` over the fiber of
/// `f` at `base`. `values[i]` is the chosen preimage of the `i`-th element of
/// that fiber (fiber in carrier order).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Section {
    pub base: usize,
    pub values: Vec<usize>,
}

/// The distributivity diagram for `l: x -> y` and `f: y -> z`:
///
/// ```text
///        eps       f_tilde
///   x <------ f*w -------> w
///   |          |           |
///   l       pb.proj_g      g
///   v          v           v
///   y ======== y ----f---> z
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistributivityDiagram<O> {
    pub l: Mor<O>,
    pub f: Mor<O>,
    pub w: O,
    pub g: Mor<O>,
    /// Pullback of `g` along `f`; its apex is `f*w`.
    pub pb: PullbackSquare<O>,
    pub eps: Mor<O>,
    pub f_tilde: Mor<O>,
    /// Element `s` of `w` is `sections[s]`.
    pub sections: Vec<Section>,
}

/// Every choice of one entry per list, lexicographically (last position
/// varies fastest). A single empty choice when `options` is empty.
pub fn choices(options: &[Vec<usize>]) -> Vec<Vec<usize>> {
    if options.iter().any(|o| o.is_empty()) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; options.len()];
    loop {
        out.push(idx.iter().zip(options).map(|(&i, o)| o[i]).collect());
        let mut pos = options.len();
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < options[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// The dependent product `f_* l` together with its distributivity diagram.
pub fn dependent_product<O: Ambient>(l: &Mor<O>, f: &Mor<O>) -> Result<DistributivityDiagram<O>> {
    l.require(ClassKind::L)?;
    f.require(ClassKind::F)?;
    if l.cod != f.dom {
        return Err(Error::NotComposable);
    }
    let l_fibers = l.fibers();
    let f_fibers = f.fibers();
    let mut sections = Vec::new();
    for (c, fiber) in f_fibers.iter().enumerate() {
        let options: Vec<Vec<usize>> = fiber.iter().map(|&j| l_fibers[j].clone()).collect();
        sections.extend(choices(&options).into_iter().map(|values| Section { base: c, values }));
    }
    let index: HashMap<&Section, usize> = sections.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let (x, y, z) = (&l.dom, &f.dom, &f.cod);
    let position_in_fiber: Vec<usize> = {
        let mut pos = vec![0; y.len()];
        for fiber in &f_fibers {
            for (i, &j) in fiber.iter().enumerate() {
                pos[j] = i;
            }
        }
        pos
    };
    let w = z.build(sections.len(), &|h, s| {
        let sec = &sections[s];
        let base = z.act(h, sec.base);
        let h_inv = z.group_inverse(h);
        let values = f_fibers[base]
            .iter()
            .map(|&j| {
                let j0 = y.act(h_inv, j);
                x.act(h, sec.values[position_in_fiber[j0]])
            })
            .collect();
        index[&Section { base, values }]
    });
    let g = Mor::new_unchecked(w.clone(), z.clone(), sections.iter().map(|s| s.base).collect(), l.classes);
    let pb = pullback(f, &g)?;
    let eps_map = pb
        .pairs
        .iter()
        .map(|&(j, s)| sections[s].values[position_in_fiber[j]])
        .collect();
    let eps = Mor::new_unchecked(pb.apex.clone(), x.clone(), eps_map, Classes::ALL);
    let f_tilde = pb.proj_f.clone();
    Ok(DistributivityDiagram { l: l.clone(), f: f.clone(), w, g, pb, eps, f_tilde, sections })
}

/// Orbit structure of an object.
#[derive(Debug, Clone)]
pub struct Orbits {
    /// Orbit representatives (least element of each orbit), ascending.
    pub reps: Vec<usize>,
    /// For each element, the index of its orbit.
    pub orbit_of: Vec<usize>,
    /// For each element `x`, some group element `g` with `g · rep = x`.
    pub transporter: Vec<usize>,
    /// Elements of each orbit, ascending.
    pub members: Vec<Vec<usize>>,
}

pub fn orbits<O: Ambient>(obj: &O) -> Orbits {
    let n = obj.len();
    let mut orbit_of = vec![usize::MAX; n];
    let mut transporter = vec![0; n];
    let mut reps = Vec::new();
    let mut members = Vec::new();
    for x in 0..n {
        if orbit_of[x] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(x);
        let mut m = Vec::new();
        for g in 0..obj.group_order() {
            let y = obj.act(g, x);
            if orbit_of[y] == usize::MAX {
                orbit_of[y] = id;
                transporter[y] = g;
                m.push(y);
            }
        }
        m.sort_unstable();
        members.push(m);
    }
    Orbits { reps, orbit_of, transporter, members }
}

/// Group elements fixing `x`.
pub fn stabilizer<O: Ambient>(obj: &O, x: usize) -> Vec<usize> {
    (0..obj.group_order()).filter(|&g| obj.act(g, x) == x).collect()
}

/// If sending `rep ↦ y` extends to an equivariant map on the orbit of `rep`
/// satisfying `allowed`, the images of the orbit members in order.
fn extend_orbit<O: Ambient>(
    dom: &O,
    cod: &O,
    orbit: &Orbits,
    which: usize,
    y: usize,
    allowed: &dyn Fn(usize, usize) -> bool,
) -> Option<Vec<(usize, usize)>> {
    let rep = orbit.reps[which];
    for g in 0..dom.group_order() {
        if dom.act(g, rep) == rep && cod.act(g, y) != y {
            return None;
        }
    }
    let mut out = Vec::with_capacity(orbit.members[which].len());
    for &x in &orbit.members[which] {
        let image = cod.act(orbit.transporter[x], y);
        if !allowed(x, image) {
            return None;
        }
        out.push((x, image));
    }
    Some(out)
}

/// Per-orbit admissible extensions for equivariant maps `dom -> cod` with
/// `allowed(x, image)` on every element.
fn orbit_options<O: Ambient>(
    dom: &O,
    cod: &O,
    allowed: &dyn Fn(usize, usize) -> bool,
) -> Vec<Vec<Vec<(usize, usize)>>> {
    let orbit = orbits(dom);
    (0..orbit.reps.len())
        .map(|i| (0..cod.len()).filter_map(|y| extend_orbit(dom, cod, &orbit, i, y, allowed)).collect())
        .collect()
}

/// Every equivariant map `dom -> cod` with `allowed(x, image)` everywhere.
pub fn equivariant_maps<O: Ambient>(
    dom: &O,
    cod: &O,
    allowed: &dyn Fn(usize, usize) -> bool,
) -> Vec<Vec<usize>> {
    let options = orbit_options(dom, cod, allowed);
    let index_options: Vec<Vec<usize>> = options.iter().map(|o| (0..o.len()).collect()).collect();
    choices(&index_options)
        .into_iter()
        .map(|pick| {
            let mut map = vec![0; dom.len()];
            for (orbit, &i) in pick.iter().enumerate() {
                for &(x, y) in &options[orbit][i] {
                    map[x] = y;
                }
            }
            map
        })
        .collect()
}

/// The number of maps [`equivariant_maps`] would return.
pub fn count_equivariant_maps<O: Ambient>(dom: &O, cod: &O, allowed: &dyn Fn(usize, usize) -> bool) -> usize {
    orbit_options(dom, cod, allowed).iter().map(|o| o.len()).product()
}

/// Outcome of a bounded search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Search<T> {
    Found(T),
    Absent,
    Exhausted,
}

impl<T> Search<T> {
    pub fn found(self) -> Option<T> {
        match self {
            Search::Found(t) => Some(t),
            _ => None,
        }
    }
}

/// Backtracking search for an equivariant bijection `a -> b` respecting
/// `allowed` elementwise and accepted by `accept` once complete. Each
/// candidate assignment of one orbit costs one unit of `budget`.
///
/// `colors`, when given, must be implied by `allowed`: `allowed(x, y)`
/// only if `colors.0[x] == colors.1[y]`. Candidates are then drawn from the
/// matching color class only. The search is iterative, so its depth is not
/// limited by the stack.
pub fn find_bijection<O: Ambient>(
    a: &O,
    b: &O,
    colors: Option<(&[usize], &[usize])>,
    allowed: &dyn Fn(usize, usize) -> bool,
    accept: &mut dyn FnMut(&[usize]) -> bool,
    budget: &mut usize,
) -> Search<Vec<usize>> {
    if a.len() != b.len() || !a.same_ambient(b) {
        return Search::Absent;
    }
    let orbit = orbits(a);
    let target_orbits = orbits(b);
    let color = |side: usize, x: usize| colors.map_or(0, |c| if side == 0 { c.0[x] } else { c.1[x] });
    let mut buckets: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for y in 0..b.len() {
        let size = target_orbits.members[target_orbits.orbit_of[y]].len();
        buckets.entry((color(1, y), size)).or_default().push(y);
    }
    let empty = Vec::new();
    let candidates: Vec<&Vec<usize>> = (0..orbit.reps.len())
        .map(|i| buckets.get(&(color(0, orbit.reps[i]), orbit.members[i].len())).unwrap_or(&empty))
        .collect();

    let n = orbit.reps.len();
    let mut map = vec![usize::MAX; a.len()];
    let mut used = vec![false; b.len()];
    let mut next = vec![0usize; n + 1];
    let mut applied: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut level = 0;
    loop {
        if level == n {
            if accept(&map) {
                return Search::Found(map);
            }
        } else {
            let rep = orbit.reps[level];
            let mut advanced = false;
            while next[level] < candidates[level].len() {
                let y = candidates[level][next[level]];
                next[level] += 1;
                if used[y] || !allowed(rep, y) {
                    continue;
                }
                if *budget == 0 {
                    return Search::Exhausted;
                }
                *budget -= 1;
                let Some(images) = extend_orbit(a, b, &orbit, level, y, allowed) else { continue };
                if images.iter().any(|&(_, v)| used[v]) {
                    continue;
                }
                for &(x, v) in &images {
                    map[x] = v;
                    used[v] = true;
                }
                applied[level] = images;
                advanced = true;
                break;
            }
            if advanced {
                level += 1;
                next[level] = 0;
                continue;
            }
        }
        // Undo the previous level and try its next candidate.
        if level == 0 {
            return Search::Absent;
        }
        level -= 1;
        for &(x, v) in &applied[level] {
            map[x] = usize::MAX;
            used[v] = false;
        }
    }
}

/// Why a diagram failed the universal-property check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UniversalFailureKind {
    /// The square over `f` and `g` is not cartesian.
    SquareNotCartesian,
    /// `pb.proj_g` does not agree with `l ∘ eps` at the given apex element,
    /// or some induced map fails to be equivariant.
    LeavesSlice,
    /// Two maps over `z` induce the same map over `y`.
    NotInjective,
    /// Some map over `y` is not induced.
    NotSurjective { induced: usize, total: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalFailure<O> {
    /// The probe `φ: u -> z`; absent for structural failures.
    pub probe: Option<Mor<O>>,
    pub kind: UniversalFailureKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalPropertyReport<O> {
    pub probes_checked: usize,
    pub failure: Option<UniversalFailure<O>>,
}

impl<O> UniversalPropertyReport<O> {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks that for every probe `φ: u -> z` with `|u| <= probe_bound` (and
/// first the identity of `z`) the map `Hom_{/z}(φ, g) -> Hom_{/y}(f*φ, l)`,
/// `α ↦ eps ∘ f*α`, is a bijection.
pub fn check_universal_property<O: Ambient>(d: &DistributivityDiagram<O>, probe_bound: usize) -> UniversalPropertyReport<O> {
    if !is_cartesian(&d.f, &d.g, &d.pb.proj_g, &d.pb.proj_f) || d.f_tilde != d.pb.proj_f {
        return UniversalPropertyReport {
            probes_checked: 0,
            failure: Some(UniversalFailure { probe: None, kind: UniversalFailureKind::SquareNotCartesian }),
        };
    }
    let z = d.f.cod();
    let mut probes = vec![Mor::identity(z)];
    for u in z.probe_objects(probe_bound) {
        for map in equivariant_maps(&u, z, &|_, _| true) {
            probes.push(Mor::new_unchecked(u.clone(), z.clone(), map, Classes::ALL));
        }
    }
    let pb_index: HashMap<(usize, usize), usize> = d.pb.pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let mut checked = 0;
    for phi in probes {
        checked += 1;
        if let Some(kind) = check_probe(d, &phi, &pb_index) {
            return UniversalPropertyReport { probes_checked: checked, failure: Some(UniversalFailure { probe: Some(phi), kind }) };
        }
    }
    UniversalPropertyReport { probes_checked: checked, failure: None }
}

fn check_probe<O: Ambient>(
    d: &DistributivityDiagram<O>,
    phi: &Mor<O>,
    pb_index: &HashMap<(usize, usize), usize>,
) -> Option<UniversalFailureKind> {
    let pulled = pullback(&d.f, phi).expect("probe lands in z");
    let alphas = equivariant_maps(phi.dom(), &d.w, &|t, s| d.g.apply(s) == phi.apply(t));
    let x = d.l.dom();
    let mut images = HashSet::new();
    for alpha in &alphas {
        let mut beta = Vec::with_capacity(pulled.pairs.len());
        for &(j, t) in &pulled.pairs {
            let k = *pb_index.get(&(j, alpha[t]))?;
            let value = d.eps.apply(k);
            if d.l.apply(value) != j {
                return Some(UniversalFailureKind::LeavesSlice);
            }
            beta.push(value);
        }
        let apex = &pulled.apex;
        let equivariant = (0..apex.group_order())
            .all(|h| (0..apex.len()).all(|k| beta[apex.act(h, k)] == x.act(h, beta[k])));
        if !equivariant {
            return Some(UniversalFailureKind::LeavesSlice);
        }
        if !images.insert(beta) {
            return Some(UniversalFailureKind::NotInjective);
        }
    }
    let total = count_equivariant_maps(&pulled.apex, x, &|k, i| d.l.apply(i) == pulled.pairs[k].0);
    if images.len() != total {
        return Some(UniversalFailureKind::NotSurjective { induced: images.len(), total });
    }
    None
}

impl<O: Ambient> DistributivityDiagram<O> {
    /// Pulls the whole diagram back along `zeta: z' -> z`.
    pub fn base_change(&self, zeta: &Mor<O>) -> Result<DistributivityDiagram<O>> {
        let py = pullback(&self.f, zeta)?;
        let px = pullback(&self.l, &py.proj_g)?;
        let pw = pullback(&self.g, zeta)?;
        let l2 = px.proj_f.clone().with_classes(self.l.classes());
        let f2 = py.proj_f.clone().with_classes(self.f.classes());
        let g2 = pw.proj_f.clone();
        let pb = pullback(&f2, &g2)?;
        let eps_map = pb
            .pairs
            .iter()
            .map(|&(j2, w2)| {
                let (j, _) = py.pairs[j2];
                let (s, _) = pw.pairs[w2];
                let i = self.eps.apply(self.pb.index_of(j, s).expect("square commutes"));
                px.index_of(i, j2).expect("eps lies over y")
            })
            .collect();
        let eps = Mor::new_unchecked(pb.apex.clone(), l2.dom().clone(), eps_map, Classes::ALL);
        let sections = pw
            .pairs
            .iter()
            .map(|&(s, c2)| {
                let fiber = py.proj_f.fiber(c2);
                let values = fiber
                    .iter()
                    .map(|&j2| px.index_of(self.eps.apply(self.pb.index_of(py.pairs[j2].0, s).unwrap()), j2).unwrap())
                    .collect();
                Section { base: c2, values }
            })
            .collect();
        Ok(DistributivityDiagram {
            l: l2,
            f: f2,
            w: pw.apex.clone(),
            g: g2,
            f_tilde: pb.proj_f.clone(),
            pb,
            eps,
            sections,
        })
    }

    /// Coproduct of two distributivity diagrams, for `l ⊔ l'` and `f ⊔ f'`.
    pub fn coproduct(&self, other: &DistributivityDiagram<O>) -> Result<DistributivityDiagram<O>> {
        let l = coproduct_mor(&self.l, &other.l)?;
        let f = coproduct_mor(&self.f, &other.f)?;
        let g = coproduct_mor(&self.g, &other.g)?;
        let pb = pullback(&f, &g)?;
        let (ny, nw, nx) = (self.f.dom().len(), self.w.len(), self.l.dom().len());
        let eps_map = pb
            .pairs
            .iter()
            .map(|&(j, s)| {
                if j < ny {
                    self.eps.apply(self.pb.index_of(j, s).unwrap())
                } else {
                    nx + other.eps.apply(other.pb.index_of(j - ny, s - nw).unwrap())
                }
            })
            .collect();
        let eps = Mor::new_unchecked(pb.apex.clone(), l.dom().clone(), eps_map, Classes::ALL);
        let shift_z = self.f.cod().len();
        let sections = self
            .sections
            .iter()
            .cloned()
            .chain(other.sections.iter().map(|s| Section {
                base: s.base + shift_z,
                values: s.values.iter().map(|v| v + nx).collect(),
            }))
            .collect();
        Ok(DistributivityDiagram { w: g.dom().clone(), l, f, g, f_tilde: pb.proj_f.clone(), pb, eps, sections })
    }
}

/// An isomorphism `d1.w -> d2.w` over `z` compatible with the counits, for two
/// diagrams built on the same `(l, f)`.
pub fn diagrams_isomorphic<O: Ambient>(d1: &DistributivityDiagram<O>, d2: &DistributivityDiagram<O>) -> Option<Vec<usize>> {
    if d1.l != d2.l || d1.f != d2.f {
        return None;
    }
    let f_fibers = d1.f.fibers();
    let compatible = |s1: usize, s2: usize| {
        let c = d1.g.apply(s1);
        c == d2.g.apply(s2)
            && f_fibers[c].iter().all(|&j| match (d1.pb.index_of(j, s1), d2.pb.index_of(j, s2)) {
                (Some(k1), Some(k2)) => d1.eps.apply(k1) == d2.eps.apply(k2),
                _ => false,
            })
    };
    let mut budget = 1_000_000;
    let colors = (d1.g.map(), d2.g.map());
    find_bijection(&d1.w, &d2.w, Some(colors), &compatible, &mut |_| true, &mut budget).found()
}
