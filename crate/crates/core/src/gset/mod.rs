//! Finite G-sets and equivariant maps.

mod group;

use std::fmt;
use std::sync::Arc;

pub use group::{Group, Subgroup, MAX_ORDER};

use crate::context::{
    self, coproduct, dependent_product, orbits, pullback, Ambient, Classes, DistributivityDiagram, Mor, PullbackSquare,
};
use crate::error::{Error, Result};
use crate::finset::FinSet;

/// A finite set with a left action of a finite group, stored as a full
/// table: `table[g * len + x] = g · x`.
#[derive(Clone)]
pub struct GSet {
    group: Arc<Group>,
    len: usize,
    table: Arc<Vec<usize>>,
}

pub type GMap = Mor<GSet>;

impl PartialEq for GSet {
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len
            && (Arc::ptr_eq(&self.group, &other.group) || *self.group == *other.group)
            && (Arc::ptr_eq(&self.table, &other.table) || self.table == other.table)
    }
}

impl Eq for GSet {}

impl fmt::Debug for GSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GSet({}, {} points)", self.group.name(), self.len)
    }
}

impl GSet {
    /// Validates that `table` is an action of `group` on `len` points.
    pub fn new(group: Arc<Group>, len: usize, table: Vec<usize>) -> Result<Self> {
        let n = group.order();
        if table.len() != n * len || table.iter().any(|&v| v >= len) {
            return Err(Error::InvalidAction(format!("table must have {} entries below {len}", n * len)));
        }
        if (0..len).any(|x| table[x] != x) {
            return Err(Error::InvalidAction("identity does not act trivially".into()));
        }
        for g in 0..n {
            for h in 0..n {
                for x in 0..len {
                    if table[group.mul(g, h) * len + x] != table[g * len + table[h * len + x]] {
                        return Err(Error::InvalidAction(format!("(g·h)·x ≠ g·(h·x) at g={g}, h={h}, x={x}")));
                    }
                }
            }
        }
        Ok(GSet { group, len, table: Arc::new(table) })
    }

    /// The action generated by one permutation of the carrier per group
    /// generator; the group must have been built from permutations.
    pub fn from_generator_action(group: Arc<Group>, len: usize, images: &[Vec<usize>]) -> Result<Self> {
        if images.len() != group.generators().len() {
            return Err(Error::InvalidAction(format!(
                "expected {} generator permutations, got {}",
                group.generators().len(),
                images.len()
            )));
        }
        for p in images {
            let mut seen = vec![false; len];
            if p.len() != len || p.iter().any(|&v| v >= len || std::mem::replace(&mut seen[v], true)) {
                return Err(Error::InvalidAction(format!("{p:?} is not a permutation of {len} points")));
            }
        }
        let n = group.order();
        let mut table = vec![usize::MAX; n * len];
        table[..len].copy_from_slice(&(0..len).collect::<Vec<_>>());
        let mut done = vec![false; n];
        done[0] = true;
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            for (gi, &gen) in group.generators().iter().enumerate() {
                let next = group.mul(gen, e);
                if !done[next] {
                    done[next] = true;
                    for x in 0..len {
                        table[next * len + x] = images[gi][table[e * len + x]];
                    }
                    queue.push_back(next);
                }
            }
        }
        if done.iter().any(|d| !d) {
            return Err(Error::InvalidAction("generators do not generate the group".into()));
        }
        GSet::new(group, len, table)
    }

    pub fn trivial_action(group: Arc<Group>, len: usize) -> Self {
        let table = (0..group.order()).flat_map(|_| 0..len).collect();
        GSet { group, len, table: Arc::new(table) }
    }

    /// The coset space `G/H`; cosets are ordered by least member, so the
    /// coset `H` itself is element 0.
    pub fn cosets(group: &Arc<Group>, h: &Subgroup) -> Self {
        let cosets = coset_list(group, h);
        let n = group.order();
        let mut coset_of = vec![0; n];
        for (i, c) in cosets.iter().enumerate() {
            for &g in c {
                coset_of[g] = i;
            }
        }
        let len = cosets.len();
        let mut table = vec![0; n * len];
        for g in 0..n {
            for (i, c) in cosets.iter().enumerate() {
                table[g * len + i] = coset_of[group.mul(g, c[0])];
            }
        }
        GSet { group: group.clone(), len, table: Arc::new(table) }
    }

    /// The one-point G-set `G/G`.
    pub fn point(group: &Arc<Group>) -> Self {
        GSet::trivial_action(group.clone(), 1)
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn underlying(&self) -> FinSet {
        FinSet::new(self.len)
    }

    pub fn stabilizer(&self, x: usize) -> Subgroup {
        let members: Vec<usize> = (0..self.group.order()).filter(|&g| self.act(g, x) == x).collect();
        self.group.subgroup(&members).expect("stabilizers are subgroups")
    }

    /// Coproduct of coset spaces `G/H_1 ⊔ ... ⊔ G/H_k`.
    pub fn sum_of_orbits(group: &Arc<Group>, stabilizers: &[Subgroup]) -> Self {
        stabilizers.iter().fold(GSet::trivial_action(group.clone(), 0), |acc, h| {
            coproduct(&acc, &GSet::cosets(group, h)).expect("same group").obj
        })
    }
}

/// Left cosets `aH`, each sorted, ordered by least member.
pub fn coset_list(group: &Group, h: &Subgroup) -> Vec<Vec<usize>> {
    let mut seen = vec![false; group.order()];
    let mut out = Vec::new();
    for a in 0..group.order() {
        if seen[a] {
            continue;
        }
        let mut c: Vec<usize> = h.members().iter().map(|&x| group.mul(a, x)).collect();
        c.sort_unstable();
        for &g in &c {
            seen[g] = true;
        }
        out.push(c);
    }
    out
}

impl Ambient for GSet {
    fn len(&self) -> usize {
        self.len
    }

    fn same_ambient(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.group, &other.group) || *self.group == *other.group
    }

    fn group_order(&self) -> usize {
        self.group.order()
    }

    fn group_inverse(&self, g: usize) -> usize {
        self.group.inv(g)
    }

    fn act(&self, g: usize, x: usize) -> usize {
        self.table[g * self.len + x]
    }

    fn build(&self, len: usize, act: &dyn Fn(usize, usize) -> usize) -> Self {
        let n = self.group.order();
        let mut table = Vec::with_capacity(n * len);
        for g in 0..n {
            for x in 0..len {
                table.push(act(g, x));
            }
        }
        debug_assert!(GSet::new(self.group.clone(), len, table.clone()).is_ok());
        GSet { group: self.group.clone(), len, table: Arc::new(table) }
    }

    fn isomorphism(&self, other: &Self) -> Option<Vec<usize>> {
        gset_isomorphism(self, other)
    }

    fn probe_objects(&self, bound: usize) -> Vec<Self> {
        let reps: Vec<Subgroup> = self.group.class_representatives().into_iter().cloned().collect();
        let sizes: Vec<usize> = reps.iter().map(|h| self.group.order() / h.order()).collect();
        let mut out = Vec::new();
        let mut chosen = Vec::new();
        collect_orbit_multisets(&self.group, &reps, &sizes, 0, bound, &mut chosen, &mut out);
        out.sort_by_key(|x| x.len);
        out
    }
}

fn collect_orbit_multisets(
    group: &Arc<Group>,
    reps: &[Subgroup],
    sizes: &[usize],
    start: usize,
    budget: usize,
    chosen: &mut Vec<Subgroup>,
    out: &mut Vec<GSet>,
) {
    out.push(GSet::sum_of_orbits(group, chosen));
    for i in start..reps.len() {
        if sizes[i] <= budget {
            chosen.push(reps[i].clone());
            collect_orbit_multisets(group, reps, sizes, i, budget - sizes[i], chosen, out);
            chosen.pop();
        }
    }
}

/// One orbit of a G-set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitInfo {
    pub representative: usize,
    pub stabilizer: Subgroup,
    pub elements: Vec<usize>,
}

/// Orbits ordered by stabilizer order, then by least element (which is also
/// the representative).
pub fn orbit_decomposition(x: &GSet) -> Vec<OrbitInfo> {
    let o = orbits(x);
    let mut out: Vec<OrbitInfo> = o
        .reps
        .iter()
        .zip(&o.members)
        .map(|(&rep, members)| OrbitInfo { representative: rep, stabilizer: x.stabilizer(rep), elements: members.clone() })
        .collect();
    out.sort_by_key(|info| (info.stabilizer.order(), info.representative));
    out
}

/// An equivariant bijection, matching orbits with conjugate stabilizers.
pub fn gset_isomorphism(a: &GSet, b: &GSet) -> Option<Vec<usize>> {
    if a.len != b.len || !a.same_ambient(b) {
        return None;
    }
    let group = &a.group;
    let oa = orbit_decomposition(a);
    let ob = orbit_decomposition(b);
    if oa.len() != ob.len() {
        return None;
    }
    let mut used = vec![false; ob.len()];
    let mut map = vec![0; a.len];
    for orbit in &oa {
        let (j, h) = ob.iter().enumerate().filter(|(j, _)| !used[*j]).find_map(|(j, target)| {
            group.conjugator(&orbit.stabilizer, &target.stabilizer).map(|h| (j, h))
        })?;
        used[j] = true;
        // Stab(h⁻¹·r') = h⁻¹ Stab(r') h = Stab(r).
        let image_rep = b.act(group.inv(h), ob[j].representative);
        let rep = orbit.representative;
        for g in 0..group.order() {
            map[a.act(g, rep)] = b.act(g, image_rep);
        }
    }
    Some(map)
}

/// An equivariant isomorphism `a -> b`, if any.
pub fn gset_isomorphic(a: &GSet, b: &GSet) -> Option<GMap> {
    context::are_isomorphic(a, b)
}

/// The projection `G/H -> G/K`, `aH ↦ aK`, for `H ⊆ K`.
pub fn quotient_map(group: &Arc<Group>, h: &Subgroup, k: &Subgroup) -> Result<GMap> {
    if !h.is_subgroup_of(k) {
        return Err(Error::NotContained(format!("{h:?} is not contained in {k:?}")));
    }
    let src = GSet::cosets(group, h);
    let dst = GSet::cosets(group, k);
    let target_cosets = coset_list(group, k);
    let mut coset_of = vec![0; group.order()];
    for (i, c) in target_cosets.iter().enumerate() {
        for &g in c {
            coset_of[g] = i;
        }
    }
    let map = coset_list(group, h).iter().map(|c| coset_of[c[0]]).collect();
    Mor::new(src, dst, map)
}

/// The equivariant map `G/H -> G/K`, `aH ↦ a g K`, defined when
/// `g⁻¹ H g ⊆ K`.
pub fn orbit_map(group: &Arc<Group>, h: &Subgroup, k: &Subgroup, g: usize) -> Result<GMap> {
    let conj = group.conjugate(h, group.inv(g));
    if !conj.is_subgroup_of(k) {
        return Err(Error::NotContained(format!("g⁻¹Hg is not contained in {k:?}")));
    }
    let target_cosets = coset_list(group, k);
    let mut coset_of = vec![0; group.order()];
    for (i, c) in target_cosets.iter().enumerate() {
        for &x in c {
            coset_of[x] = i;
        }
    }
    let map = coset_list(group, h).iter().map(|c| coset_of[group.mul(c[0], g)]).collect();
    Mor::new(GSet::cosets(group, h), GSet::cosets(group, k), map)
}

/// One block of the double-coset decomposition: the orbit of
/// `(H, gK)` in `G/H ×_{G/L} G/K`, with stabilizer `H ∩ gKg⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleCosetBlock {
    pub representative: usize,
    pub stabilizer: Subgroup,
    /// Apex elements of the pullback in this orbit.
    pub orbit: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct DoubleCosetDecomposition {
    pub h: Subgroup,
    pub k: Subgroup,
    pub l: Subgroup,
    pub pullback: PullbackSquare<GSet>,
    pub blocks: Vec<DoubleCosetBlock>,
    /// `⊔_{[g]} G/(H ∩ gKg⁻¹)`.
    pub model: GSet,
    /// Explicit equivariant bijection `model -> pullback apex`.
    pub iso: GMap,
}

/// Least representatives of the double cosets `H g K` with `g ∈ L`.
pub fn double_coset_representatives(group: &Group, h: &Subgroup, k: &Subgroup, l: &Subgroup) -> Vec<usize> {
    let mut seen = vec![false; group.order()];
    let mut reps = Vec::new();
    for &g in l.members() {
        if seen[g] {
            continue;
        }
        reps.push(g);
        for &a in h.members() {
            for &b in k.members() {
                seen[group.mul(group.mul(a, g), b)] = true;
            }
        }
    }
    reps
}

pub fn double_coset_decomposition(
    group: &Arc<Group>,
    h: &Subgroup,
    k: &Subgroup,
    l: &Subgroup,
) -> Result<DoubleCosetDecomposition> {
    let qh = quotient_map(group, h, l)?;
    let qk = quotient_map(group, k, l)?;
    let pb = pullback(&qh, &qk)?;
    let apex = &pb.apex;
    let k_cosets = coset_list(group, k);
    let coset_of_k = |g: usize| k_cosets.iter().position(|c| c.contains(&g)).expect("coset exists");

    let mut covered = vec![false; apex.len()];
    let mut blocks = Vec::new();
    for rep in double_coset_representatives(group, h, k, l) {
        let start = pb.index_of(0, coset_of_k(rep)).expect("(H, gK) lies over L");
        let stabilizer = group.intersection(h, &group.conjugate(k, rep));
        if apex.stabilizer(start) != stabilizer {
            return Err(Error::InvalidAction("block stabilizer differs from H ∩ gKg⁻¹".into()));
        }
        let mut orbit: Vec<usize> = (0..group.order()).map(|g| apex.act(g, start)).collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &e in &orbit {
            if std::mem::replace(&mut covered[e], true) {
                return Err(Error::InvalidAction("double-coset blocks overlap".into()));
            }
        }
        blocks.push(DoubleCosetBlock { representative: rep, stabilizer, orbit });
    }
    if covered.iter().any(|c| !c) {
        return Err(Error::InvalidAction("double-coset blocks do not cover the pullback".into()));
    }
    let stabs: Vec<Subgroup> = blocks.iter().map(|b| b.stabilizer.clone()).collect();
    let model = GSet::sum_of_orbits(group, &stabs);
    let mut map = Vec::with_capacity(model.len());
    for block in &blocks {
        let start = pb.index_of(0, coset_of_k(block.representative)).expect("block start");
        for coset in coset_list(group, &block.stabilizer) {
            map.push(apex.act(coset[0], start));
        }
    }
    let iso = Mor::new(model.clone(), apex.clone(), map)?;
    if !iso.is_bijective() {
        return Err(Error::InvalidAction("double-coset model is not a bijection".into()));
    }
    Ok(DoubleCosetDecomposition { h: h.clone(), k: k.clone(), l: l.clone(), pullback: pb, blocks, model, iso })
}

/// Dependent product of G-sets; the action on sections is
/// `(g·s)(y) = g·s(g⁻¹·y)`.
pub fn equivariant_dependent_product(l: &GMap, f: &GMap) -> Result<DistributivityDiagram<GSet>> {
    if !l.dom().same_ambient(f.dom()) {
        return Err(Error::AmbientMismatch);
    }
    dependent_product(l, f)
}

/// Forgets the action.
pub fn underlying_map(f: &GMap) -> Mor<FinSet> {
    Mor::new_unchecked(f.dom().underlying(), f.cod().underlying(), f.map().to_vec(), f.classes())
}

/// A G-set map from a plain assignment, with both class flags.
pub fn gmap(dom: &GSet, cod: &GSet, map: &[usize]) -> Result<GMap> {
    Mor::new(dom.clone(), cod.clone(), map.to_vec()).map(|m| m.with_classes(Classes::ALL))
}
