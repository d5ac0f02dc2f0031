//! Burnside semiring values of the slice functor on finite G-sets.
//!
//! A value over a G-set `X` is an isomorphism class of G-sets over `X`. Over
//! an orbit `G/H` this is the Burnside semiring `A(H)`; in general it is the
//! product of `A(Stab(r))` over orbit representatives `r` of `X`. Elements
//! are stored in the orbit basis, keyed by the base orbit and the least
//! member of the stabilizer-conjugacy class of the orbit's stabilizer.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::bispan::Bispan;
use crate::context::{orbits, pullback, Ambient, Classes, Mor};
use crate::error::{Error, Result};
use crate::gset::{
    coset_list, double_coset_representatives, equivariant_dependent_product, orbit_decomposition, orbit_map,
    quotient_map, GMap, GSet, Group, OrbitInfo, Subgroup,
};

/// An isomorphism class of finite G-sets over a fixed base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BurnsideElement {
    base: GSet,
    counts: BTreeMap<(usize, Subgroup), usize>,
}

/// For each point of `base`: its orbit index in [`orbit_decomposition`] order
/// and a group element carrying the orbit representative to it.
fn locate(base: &GSet, decomposition: &[OrbitInfo]) -> Vec<(usize, usize)> {
    let mut out = vec![(0, 0); base.len()];
    for (i, orbit) in decomposition.iter().enumerate() {
        for g in 0..base.group().order() {
            out[base.act(g, orbit.representative)] = (i, g);
        }
    }
    out
}

impl BurnsideElement {
    pub fn zero(base: &GSet) -> Self {
        BurnsideElement { base: base.clone(), counts: BTreeMap::new() }
    }

    /// The class of the identity of `base`.
    pub fn one(base: &GSet) -> Self {
        BurnsideElement::from_map(&Mor::identity(base))
    }

    /// `count` copies of the orbit `G/K` placed over the representative of
    /// base orbit `orbit`; requires `K ⊆ Stab(rep)`.
    pub fn orbit(base: &GSet, orbit: usize, k: &Subgroup, count: usize) -> Result<Self> {
        let decomposition = orbit_decomposition(base);
        let info = decomposition.get(orbit).ok_or(Error::NoSuchElement { element: orbit, len: decomposition.len() })?;
        if !k.is_subgroup_of(&info.stabilizer) {
            return Err(Error::NotContained(format!("{k:?} is not contained in the stabilizer {:?}", info.stabilizer)));
        }
        let mut counts = BTreeMap::new();
        if count > 0 {
            counts.insert((orbit, base.group().canonical_within(&info.stabilizer, k)), count);
        }
        Ok(BurnsideElement { base: base.clone(), counts })
    }

    /// The class of `q: Y -> base`.
    pub fn from_map(q: &GMap) -> Self {
        let base = q.cod();
        let group = base.group();
        let decomposition = orbit_decomposition(base);
        let where_is = locate(base, &decomposition);
        let y = q.dom();
        let mut counts = BTreeMap::new();
        for &rep in &orbits(y).reps {
            let (i, g) = where_is[q.apply(rep)];
            // q(g⁻¹·rep) is the base representative.
            let lifted = y.act(group.inv(g), rep);
            let key = (i, group.canonical_within(&decomposition[i].stabilizer, &y.stabilizer(lifted)));
            *counts.entry(key).or_insert(0) += 1;
        }
        BurnsideElement { base: base.clone(), counts }
    }

    /// A representing G-set over the base, orbits in key order.
    pub fn realize(&self) -> GMap {
        let group = self.base.group();
        let decomposition = orbit_decomposition(&self.base);
        let n = group.order();
        let len = self.cardinality();
        let mut table = vec![0; n * len];
        let mut map = Vec::with_capacity(len);
        let mut offset = 0;
        for ((i, k), &count) in &self.counts {
            let rep = decomposition[*i].representative;
            let piece = GSet::cosets(group, k);
            let images: Vec<usize> = coset_list(group, k).iter().map(|c| self.base.act(c[0], rep)).collect();
            for _ in 0..count {
                for g in 0..n {
                    for x in 0..piece.len() {
                        table[g * len + offset + x] = offset + piece.act(g, x);
                    }
                }
                map.extend_from_slice(&images);
                offset += piece.len();
            }
        }
        let dom = GSet::new(group.clone(), len, table).expect("a sum of coset spaces is a G-set");
        Mor::new(dom, self.base.clone(), map).expect("cosets of K ⊆ Stab(rep) map equivariantly").with_classes(Classes::ALL)
    }

    /// The single orbit `G/K -> base` of a basis key.
    fn basis_map(&self, key: &(usize, Subgroup)) -> GMap {
        let single = BurnsideElement { base: self.base.clone(), counts: BTreeMap::from([(key.clone(), 1)]) };
        single.realize()
    }

    fn scaled(mut self, c: usize) -> Self {
        if c == 0 {
            self.counts.clear();
        }
        for v in self.counts.values_mut() {
            *v *= c;
        }
        self
    }

    fn accumulate(&mut self, other: &Self) {
        for (key, c) in &other.counts {
            *self.counts.entry(key.clone()).or_insert(0) += c;
        }
    }

    pub fn base(&self) -> &GSet {
        &self.base
    }

    pub fn group(&self) -> &Arc<Group> {
        self.base.group()
    }

    /// Orbit multiplicities keyed by (base orbit, canonical stabilizer).
    pub fn counts(&self) -> &BTreeMap<(usize, Subgroup), usize> {
        &self.counts
    }

    pub fn count(&self, orbit: usize, k: &Subgroup) -> usize {
        let decomposition = orbit_decomposition(&self.base);
        let Some(info) = decomposition.get(orbit) else { return 0 };
        let key = (orbit, self.group().canonical_within(&info.stabilizer, k));
        self.counts.get(&key).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.counts.is_empty()
    }

    /// Number of points of a representing G-set.
    pub fn cardinality(&self) -> usize {
        let n = self.group().order();
        self.counts.iter().map(|((_, k), c)| c * (n / k.order())).sum()
    }

    fn same_base(&self, other: &Self) -> Result<()> {
        if self.base == other.base {
            Ok(())
        } else {
            Err(Error::BoundaryMismatch("Burnside elements live over different bases".into()))
        }
    }

    /// Disjoint union.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_base(other)?;
        let mut counts = self.counts.clone();
        for (key, c) in &other.counts {
            *counts.entry(key.clone()).or_insert(0) += c;
        }
        Ok(BurnsideElement { base: self.base.clone(), counts })
    }

    /// Fiber product over the base, computed one pair of basis orbits at a
    /// time; orbits over different base orbits contribute nothing.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_base(other)?;
        let mut out = BurnsideElement::zero(&self.base);
        for (ka, &ca) in &self.counts {
            let a = self.basis_map(ka);
            for (kb, &cb) in other.counts.iter().filter(|(kb, _)| kb.0 == ka.0) {
                let b = self.basis_map(kb);
                let sq = pullback(&a, &b)?;
                out.accumulate(&BurnsideElement::from_map(&sq.proj_f.then(&b)?).scaled(ca * cb));
            }
        }
        Ok(out)
    }

    /// Pullback along `q: X -> base`, one basis orbit at a time.
    pub fn restriction(&self, q: &GMap) -> Result<Self> {
        if q.cod() != &self.base {
            return Err(Error::BoundaryMismatch("restriction map does not land in the base".into()));
        }
        let mut out = BurnsideElement::zero(q.dom());
        for (key, &c) in &self.counts {
            let sq = pullback(&self.basis_map(key), q)?;
            out.accumulate(&BurnsideElement::from_map(&sq.proj_f).scaled(c));
        }
        Ok(out)
    }

    /// Composition with `l: base -> Y`, one basis orbit at a time.
    pub fn additive_transfer(&self, l: &GMap) -> Result<Self> {
        if l.dom() != &self.base {
            return Err(Error::BoundaryMismatch("transfer map does not start at the base".into()));
        }
        l.require(crate::error::ClassKind::L)?;
        let mut out = BurnsideElement::zero(l.cod());
        for (key, &c) in &self.counts {
            out.accumulate(&BurnsideElement::from_map(&self.basis_map(key).then(l)?).scaled(c));
        }
        Ok(out)
    }

    /// Dependent product along `f: base -> Y`, computed from marks.
    ///
    /// Over a point `b` of `Y` with stabilizer `S`, the sections of the fiber
    /// fixed by `H ⊆ S` are the products, over `H`-orbits of `f⁻¹(b)`, of the
    /// points fixed by the orbit's stabilizer in `H`. These marks determine
    /// the `S`-set of sections, recovered by Möbius inversion from the
    /// largest subgroups down.
    pub fn norm(&self, f: &GMap) -> Result<Self> {
        if f.dom() != &self.base {
            return Err(Error::BoundaryMismatch("norm map does not start at the base".into()));
        }
        f.require(crate::error::ClassKind::F)?;
        let group = self.group().clone();
        let x = &self.base;
        let x_orbits = orbit_decomposition(x);
        let where_is = locate(x, &x_orbits);
        let y = f.cod();
        let mut counts = BTreeMap::new();
        for (j, info) in orbit_decomposition(y).iter().enumerate() {
            let s = &info.stabilizer;
            let fiber = f.fiber(info.representative);
            let mut classes: Vec<Subgroup> = group
                .subgroups()
                .iter()
                .filter(|h| h.is_subgroup_of(s))
                .map(|h| group.canonical_within(s, h))
                .collect();
            classes.sort_by(|a, b| b.order().cmp(&a.order()).then(a.cmp(b)));
            classes.dedup();
            let mut solved: Vec<(Subgroup, u128)> = Vec::new();
            for h in &classes {
                let mut m: u128 = 1;
                let mut seen = vec![false; x.len()];
                for &e in &fiber {
                    if seen[e] {
                        continue;
                    }
                    for &g in h.members() {
                        seen[x.act(g, e)] = true;
                    }
                    let fixing: Vec<usize> = h.members().iter().copied().filter(|&g| x.act(g, e) == e).collect();
                    let fixed = self.fixed_points(&group, &x_orbits, where_is[e], &fixing)?;
                    m = m.checked_mul(fixed).ok_or_else(|| overflow("norm marks"))?;
                }
                let mut rest = m;
                for (k, n_k) in &solved {
                    let term = n_k.checked_mul(mark(&group, s, k, h.members())).ok_or_else(|| overflow("norm marks"))?;
                    rest = rest.checked_sub(term).ok_or_else(|| inconsistent(h))?;
                }
                let own = mark(&group, s, h, h.members());
                if rest % own != 0 {
                    return Err(inconsistent(h));
                }
                solved.push((h.clone(), rest / own));
            }
            for (k, n_k) in solved {
                if n_k > 0 {
                    let n_k = usize::try_from(n_k).map_err(|_| overflow("norm counts"))?;
                    counts.insert((j, k), n_k);
                }
            }
        }
        Ok(BurnsideElement { base: y.clone(), counts })
    }

    /// Points of the part over `e = g·rep_i` fixed by `l ⊆ Stab(e)`.
    fn fixed_points(&self, group: &Group, x_orbits: &[OrbitInfo], (i, g): (usize, usize), l: &[usize]) -> Result<u128> {
        let gi = group.inv(g);
        let moved: Vec<usize> = l.iter().map(|&h| group.mul(group.mul(gi, h), g)).collect();
        let s = &x_orbits[i].stabilizer;
        let mut total: u128 = 0;
        for ((_, k), &c) in self.counts.iter().filter(|((o, _), _)| *o == i) {
            let term = (c as u128).checked_mul(mark(group, s, k, &moved)).ok_or_else(|| overflow("fixed points"))?;
            total = total.checked_add(term).ok_or_else(|| overflow("fixed points"))?;
        }
        Ok(total)
    }

    /// The G-set of sections, enumerated point by point. Exponential in the
    /// fiber sizes; kept as an independent reference for [`Self::norm`].
    pub fn norm_by_sections(&self, f: &GMap) -> Result<Self> {
        if f.dom() != &self.base {
            return Err(Error::BoundaryMismatch("norm map does not start at the base".into()));
        }
        f.require(crate::error::ClassKind::F)?;
        let d = equivariant_dependent_product(&self.realize(), f)?;
        Ok(BurnsideElement::from_map(&d.g))
    }

    fn subgroup_label(&self, s: &Subgroup, clashes: bool) -> String {
        let name = self.group().subgroup_name(s);
        if clashes {
            format!("{name}{:?}", s.members())
        } else {
            name
        }
    }
}

/// Number of cosets `sK` of `S` whose conjugate `sKs⁻¹` contains `l`.
fn mark(group: &Group, s: &Subgroup, k: &Subgroup, l: &[usize]) -> u128 {
    let hits = s.members().iter().filter(|&&g| l.iter().all(|&h| k.contains(group.mul(group.mul(group.inv(g), h), g)))).count();
    (hits / k.order()) as u128
}

fn overflow(what: &str) -> Error {
    Error::Overflow(what.into())
}

fn inconsistent(h: &Subgroup) -> Error {
    Error::Inconsistent(format!("marks are not realizable at {:?}", h.members()))
}

/// `l⊕ f⊗ p*` applied to `x`.
pub fn evaluate_tambara(b: &Bispan<GSet>, x: &BurnsideElement) -> Result<BurnsideElement> {
    if x.base() != b.src() {
        return Err(Error::BoundaryMismatch("element does not live over the source of the bispan".into()));
    }
    x.restriction(b.p())?.norm(b.f())?.additive_transfer(b.l())
}

impl fmt::Display for BurnsideElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.counts.is_empty() {
            return write!(f, "0");
        }
        let decomposition = orbit_decomposition(&self.base);
        let several = decomposition.len() > 1;
        let mut terms: Vec<(&(usize, Subgroup), &usize)> = self.counts.iter().collect();
        terms.sort_by(|(a, _), (b, _)| a.0.cmp(&b.0).then(b.1.order().cmp(&a.1.order())).then(a.1.cmp(&b.1)));
        let mut parts = Vec::new();
        for ((i, k), c) in terms {
            let h = &decomposition[*i].stabilizer;
            let clashes = self
                .counts
                .keys()
                .any(|(j, k2)| j == i && k2 != k && self.group().subgroup_name(k2) == self.group().subgroup_name(k));
            let mut term = format!("{c}·[{}/{}]", self.group().subgroup_name(h), self.subgroup_label(k, clashes));
            if several {
                term.push_str(&format!("@{i}"));
            }
            parts.push(term);
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// The closed form `n·[C2/C2] + ((n²−n)/2)·[C2/e]` for the norm of `n`
/// points along `C2/e -> C2/C2`.
pub fn c2_norm_closed_form(group: &Arc<Group>, n: usize) -> Result<BurnsideElement> {
    if group.order() != 2 {
        return Err(Error::InvalidGroup("closed form is for the group of order 2".into()));
    }
    let pt = GSet::point(group);
    let fixed = BurnsideElement::orbit(&pt, 0, &group.whole(), n)?;
    let free = BurnsideElement::orbit(&pt, 0, &group.trivial_subgroup(), (n * n - n) / 2)?;
    fixed.add(&free)
}

/// `n` copies of the free orbit over `G/e`, normed to the point along the
/// unique map.
pub fn norm_to_point(group: &Arc<Group>, n: usize) -> Result<BurnsideElement> {
    let e = group.trivial_subgroup();
    let x = BurnsideElement::orbit(&GSet::cosets(group, &e), 0, &e, n)?;
    x.norm_by_sections(&quotient_map(group, &e, &group.whole())?)
}

/// Both sides of the double-coset formula for `H, K ⊆ L` on `x` over `G/H`:
/// `res_K tr_L x` and `Σ_g tr(res x)` over the blocks `G/(H ∩ gKg⁻¹)`, with
/// one representative `g ∈ HgK` per double coset taken from `reps`.
pub fn mackey_sides(
    group: &Arc<Group>,
    h: &Subgroup,
    k: &Subgroup,
    l: &Subgroup,
    reps: &[usize],
    x: &BurnsideElement,
) -> Result<(BurnsideElement, BurnsideElement)> {
    let qh = quotient_map(group, h, l)?;
    let qk = quotient_map(group, k, l)?;
    let lhs = x.additive_transfer(&qh)?.restriction(&qk)?;
    let mut rhs = BurnsideElement::zero(qk.dom());
    for &g in reps {
        if !l.contains(g) {
            return Err(Error::NotContained(format!("representative {g} is not in L")));
        }
        let s = group.intersection(h, &group.conjugate(k, g));
        let to_h = orbit_map(group, &s, h, group.identity())?;
        let to_k = orbit_map(group, &s, k, g)?;
        rhs = rhs.add(&x.restriction(&to_h)?.additive_transfer(&to_k)?)?;
    }
    Ok((lhs, rhs))
}

/// [`mackey_sides`] with the least representative of each double coset.
pub fn mackey_check(group: &Arc<Group>, h: &Subgroup, k: &Subgroup, l: &Subgroup, x: &BurnsideElement) -> Result<bool> {
    let reps = double_coset_representatives(group, h, k, l);
    let (lhs, rhs) = mackey_sides(group, h, k, l, &reps, x)?;
    Ok(lhs == rhs)
}

/// Both sides of `g⊕ f̃⊗ ε* = ψ⊗ φ⊕` for `φ: X -> Y`, `ψ: Y -> Z` on `x`
/// over `X`.
pub fn distributivity_sides(phi: &GMap, psi: &GMap, x: &BurnsideElement) -> Result<(BurnsideElement, BurnsideElement)> {
    let d = equivariant_dependent_product(phi, psi)?;
    let lhs = x.restriction(&d.eps)?.norm(&d.f_tilde)?.additive_transfer(&d.g)?;
    let rhs = x.additive_transfer(phi)?.norm(psi)?;
    Ok((lhs, rhs))
}

/// Both sides of functoriality for `b2 ∘ b1` on `x`.
pub fn functoriality_sides(
    b2: &Bispan<GSet>,
    b1: &Bispan<GSet>,
    x: &BurnsideElement,
) -> Result<(BurnsideElement, BurnsideElement)> {
    let composite = crate::bispan::compose_bispans(b2, b1)?;
    let lhs = evaluate_tambara(&composite, x)?;
    let rhs = evaluate_tambara(b2, &evaluate_tambara(b1, x)?)?;
    Ok((lhs, rhs))
}

/// Multiplication table of `A(H)` in the orbit basis `[H/K]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BurnsideTable {
    pub subgroup: Subgroup,
    /// Least representatives of the `H`-conjugacy classes of subgroups of
    /// `H`, by increasing order.
    pub basis: Vec<Subgroup>,
    /// `product[i][j][k]`: multiplicity of `basis[k]` in `basis[i]·basis[j]`.
    pub product: Vec<Vec<Vec<usize>>>,
}

impl BurnsideTable {
    /// Product of two coefficient vectors.
    pub fn mul(&self, a: &[usize], b: &[usize]) -> Vec<usize> {
        let mut out = vec![0; self.basis.len()];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                if x * y == 0 {
                    continue;
                }
                for (k, &c) in self.product[i][j].iter().enumerate() {
                    out[k] += x * y * c;
                }
            }
        }
        out
    }

    pub fn add(&self, a: &[usize], b: &[usize]) -> Vec<usize> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    /// The unit `[H/H]`.
    pub fn one(&self) -> Vec<usize> {
        let mut v = vec![0; self.basis.len()];
        v[self.basis.len() - 1] = 1;
        v
    }

    /// Coefficients of `x`, which must live over `G/H`.
    pub fn coefficients(&self, x: &BurnsideElement) -> Vec<usize> {
        self.basis.iter().map(|k| x.count(0, k)).collect()
    }

    /// Checks the commutative semiring axioms on every triple of samples.
    pub fn check_axioms(&self, samples: &[Vec<usize>]) -> std::result::Result<(), String> {
        let zero = vec![0; self.basis.len()];
        let one = self.one();
        for a in samples {
            if self.mul(a, &one) != *a || self.mul(a, &zero) != zero {
                return Err(format!("unit law fails at {a:?}"));
            }
            for b in samples {
                if self.mul(a, b) != self.mul(b, a) {
                    return Err(format!("commutativity fails at {a:?}, {b:?}"));
                }
                for c in samples {
                    if self.mul(&self.mul(a, b), c) != self.mul(a, &self.mul(b, c)) {
                        return Err(format!("associativity fails at {a:?}, {b:?}, {c:?}"));
                    }
                    if self.mul(a, &self.add(b, c)) != self.add(&self.mul(a, b), &self.mul(a, c)) {
                        return Err(format!("distributivity fails at {a:?}, {b:?}, {c:?}"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Burnside semirings `A(H)` for one subgroup per conjugacy class, computed
/// once per group.
#[derive(Debug, Clone)]
pub struct TambaraValueTable {
    pub group: Arc<Group>,
    pub tables: Vec<BurnsideTable>,
}

impl TambaraValueTable {
    pub fn new(group: &Arc<Group>) -> Result<Self> {
        let mut tables = Vec::new();
        for h in group.class_representatives() {
            let base = GSet::cosets(group, h);
            let mut basis: Vec<Subgroup> =
                group.subgroups().iter().filter(|k| k.is_subgroup_of(h)).map(|k| group.canonical_within(h, k)).collect();
            basis.sort_by(|a, b| a.order().cmp(&b.order()).then(a.cmp(b)));
            basis.dedup();
            let elements: Vec<BurnsideElement> =
                basis.iter().map(|k| BurnsideElement::orbit(&base, 0, k, 1)).collect::<Result<_>>()?;
            let mut product = Vec::new();
            for a in &elements {
                let mut row = Vec::new();
                for b in &elements {
                    let ab = a.mul(b)?;
                    row.push(basis.iter().map(|k| ab.count(0, k)).collect());
                }
                product.push(row);
            }
            tables.push(BurnsideTable { subgroup: h.clone(), basis, product });
        }
        Ok(TambaraValueTable { group: group.clone(), tables })
    }

    /// The table for the class of `h`.
    pub fn table(&self, h: &Subgroup) -> &BurnsideTable {
        &self.tables[self.group.class_index(h)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bispan::Bispan;
    use crate::eval::{compile, evaluate};
    use crate::finset::FinSet;
    use crate::gset::gmap;
    use crate::random::{random_bispan, random_gset, rng};
    use num_bigint::BigUint;

    fn c2() -> Arc<Group> {
        Arc::new(Group::cyclic(2))
    }

    fn s3() -> Arc<Group> {
        Arc::new(Group::symmetric(3))
    }

    #[test]
    fn c2_norm_matches_closed_form() {
        let g = c2();
        for n in 0..=6 {
            assert_eq!(norm_to_point(&g, n).unwrap(), c2_norm_closed_form(&g, n).unwrap(), "n = {n}");
        }
        assert_eq!(norm_to_point(&g, 2).unwrap().to_string(), "2·[C2/C2] + 1·[C2/e]");
    }

    #[test]
    fn norm_of_unit_is_unit() {
        let g = s3();
        let c2 = g.subgroups().iter().find(|s| s.order() == 2).unwrap().clone();
        let f = quotient_map(&g, &c2, &g.whole()).unwrap();
        let one = BurnsideElement::one(f.dom());
        assert_eq!(one.norm(&f).unwrap(), BurnsideElement::one(f.cod()));
        assert_eq!(BurnsideElement::zero(f.dom()).norm(&f).unwrap(), BurnsideElement::zero(f.cod()));
    }

    #[test]
    fn restriction_of_s3_mod_c2_to_c2() {
        let g = s3();
        let c2 = g.subgroups().iter().find(|s| s.order() == 2).unwrap().clone();
        let pt = GSet::point(&g);
        let x = BurnsideElement::orbit(&pt, 0, &c2, 1).unwrap();
        let q = quotient_map(&g, &c2, &g.whole()).unwrap();
        let r = x.restriction(&q).unwrap();
        // C2 acting on the three cosets: one fixed point and one free orbit.
        assert_eq!(r.count(0, &c2), 1);
        assert_eq!(r.count(0, &g.trivial_subgroup()), 1);
        assert_eq!(r.counts().values().sum::<usize>(), 2);
        // Restricting the terminal object gives the terminal object.
        assert_eq!(BurnsideElement::one(&pt).restriction(&q).unwrap(), BurnsideElement::one(q.dom()));
    }

    #[test]
    fn transfers_induce() {
        let g = c2();
        let e = g.trivial_subgroup();
        let free = GSet::cosets(&g, &e);
        let q = quotient_map(&g, &e, &g.whole()).unwrap();
        let x = BurnsideElement::orbit(&free, 0, &e, 3).unwrap();
        let t = x.additive_transfer(&q).unwrap();
        assert_eq!(t.count(0, &e), 3);
        assert_eq!(t.to_string(), "3·[C2/e]");
    }

    #[test]
    fn restriction_and_norm_are_multiplicative() {
        let g = s3();
        let c2 = g.subgroups().iter().find(|s| s.order() == 2).unwrap().clone();
        let q = quotient_map(&g, &c2, &g.whole()).unwrap();
        let pt = GSet::point(&g);
        let samples: Vec<BurnsideElement> = g
            .class_representatives()
            .iter()
            .map(|k| BurnsideElement::orbit(&pt, 0, k, 1).unwrap())
            .collect();
        for a in &samples {
            for b in &samples {
                let ab = a.mul(b).unwrap();
                assert_eq!(ab.restriction(&q).unwrap(), a.restriction(&q).unwrap().mul(&b.restriction(&q).unwrap()).unwrap());
                let (ra, rb) = (a.restriction(&q).unwrap(), b.restriction(&q).unwrap());
                assert_eq!(
                    ra.mul(&rb).unwrap().norm(&q).unwrap(),
                    ra.norm(&q).unwrap().mul(&rb.norm(&q).unwrap()).unwrap()
                );
            }
        }
    }

    #[test]
    fn mackey_formula_independent_of_representatives() {
        let g = s3();
        for l in g.subgroups() {
            for h in g.subgroups().iter().filter(|h| h.is_subgroup_of(l)) {
                for k in g.subgroups().iter().filter(|k| k.is_subgroup_of(l)) {
                    let base = GSet::cosets(&g, h);
                    for s in g.subgroups().iter().filter(|s| s.is_subgroup_of(h)) {
                        let x = BurnsideElement::orbit(&base, 0, s, 1).unwrap();
                        assert!(mackey_check(&g, h, k, l, &x).unwrap());
                        let reps = double_coset_representatives(&g, h, k, l);
                        let shifted: Vec<usize> = reps
                            .iter()
                            .map(|&r| g.mul(g.mul(*h.members().last().unwrap(), r), *k.members().last().unwrap()))
                            .collect();
                        let (lhs, rhs) = mackey_sides(&g, h, k, l, &shifted, &x).unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn tables_satisfy_semiring_axioms() {
        for g in [c2(), s3(), Arc::new(Group::klein_four())] {
            let table = TambaraValueTable::new(&g).unwrap();
            for t in &table.tables {
                let n = t.basis.len();
                let mut samples: Vec<Vec<usize>> = (0..n)
                    .map(|i| {
                        let mut v = vec![0; n];
                        v[i] = 1;
                        v
                    })
                    .collect();
                samples.push(vec![1; n]);
                t.check_axioms(&samples).unwrap();
                let base = GSet::cosets(&g, &t.subgroup);
                let a = BurnsideElement::orbit(&base, 0, &t.basis[0], 2).unwrap();
                let b = BurnsideElement::orbit(&base, 0, &t.basis[n - 1], 1).unwrap().add(&a).unwrap();
                assert_eq!(t.coefficients(&a.mul(&b).unwrap()), t.mul(&t.coefficients(&a), &t.coefficients(&b)));
            }
        }
        // A(C2): [C2/e]² = 2·[C2/e].
        let g = c2();
        let table = TambaraValueTable::new(&g).unwrap();
        assert_eq!(table.table(&g.whole()).product[0][0], vec![2, 0]);
    }

    #[test]
    fn identity_and_distributivity() {
        let g = c2();
        let mut r = rng(11);
        for _ in 0..30 {
            let x_obj = random_gset(&mut r, &g, 4);
            let y_obj = random_gset(&mut r, &g, 3);
            let z_obj = random_gset(&mut r, &g, 3);
            let (Some(phi), Some(psi)) = (
                crate::random::random_equivariant_map(&mut r, &x_obj, &y_obj),
                crate::random::random_equivariant_map(&mut r, &y_obj, &z_obj),
            ) else {
                continue;
            };
            let x = BurnsideElement::one(&x_obj).add(&BurnsideElement::one(&x_obj)).unwrap();
            assert_eq!(evaluate_tambara(&Bispan::identity(&x_obj), &x).unwrap(), x);
            let (lhs, rhs) = distributivity_sides(&phi, &psi, &x).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn functorial_on_random_c2_bispans() {
        let g = c2();
        let mut r = rng(5);
        for _ in 0..25 {
            let x_obj = random_gset(&mut r, &g, 3);
            let y_obj = random_gset(&mut r, &g, 3);
            let z_obj = random_gset(&mut r, &g, 3);
            let mut obj = |r: &mut rand_chacha::ChaCha8Rng| random_gset(r, &g, 3);
            let (Some(b1), Some(b2)) =
                (random_bispan(&mut r, &x_obj, &y_obj, &mut obj, 10), random_bispan(&mut r, &y_obj, &z_obj, &mut obj, 10))
            else {
                continue;
            };
            let x = BurnsideElement::one(&x_obj);
            let (lhs, rhs) = functoriality_sides(&b2, &b1, &x).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn trivial_group_collapses_to_natural_numbers() {
        let g = Arc::new(Group::trivial());
        let x_obj = GSet::trivial_action(g.clone(), 2);
        let y_obj = GSet::trivial_action(g.clone(), 2);
        let e_obj = GSet::trivial_action(g.clone(), 3);
        let b_obj = GSet::trivial_action(g.clone(), 2);
        let p = gmap(&e_obj, &x_obj, &[0, 1, 1]).unwrap();
        let f = gmap(&e_obj, &b_obj, &[0, 0, 1]).unwrap();
        let l = gmap(&b_obj, &y_obj, &[1, 1]).unwrap();
        let b = Bispan::new(p.clone(), f.clone(), l.clone()).unwrap();
        let whole = g.whole();
        let x = BurnsideElement::orbit(&x_obj, 0, &whole, 2).unwrap().add(&BurnsideElement::orbit(&x_obj, 1, &whole, 3).unwrap()).unwrap();
        let out = evaluate_tambara(&b, &x).unwrap();
        let fin = |m: &GMap| crate::gset::underlying_map(m);
        let bf: Bispan<FinSet> = Bispan::new(fin(&p), fin(&f), fin(&l)).unwrap();
        let nat = evaluate(&compile(&bf), &[BigUint::from(2u32), BigUint::from(3u32)]).unwrap();
        for (j, v) in nat.iter().enumerate() {
            assert_eq!(BigUint::from(out.count(j, &whole)), *v);
        }
    }

    #[test]
    fn boundary_mismatch_is_an_error() {
        let g = c2();
        let x = BurnsideElement::one(&GSet::point(&g));
        let other = GSet::cosets(&g, &g.trivial_subgroup());
        assert!(evaluate_tambara(&Bispan::identity(&other), &x).is_err());
        assert!(x.add(&BurnsideElement::one(&other)).is_err());
    }

    /// A random element over `base` as the class of a random map into it.
    fn random_element(r: &mut rand_chacha::ChaCha8Rng, base: &GSet, max: usize) -> Option<BurnsideElement> {
        let y = random_gset(r, base.group(), max);
        crate::random::random_equivariant_map(r, &y, base).map(|q| BurnsideElement::from_map(&q))
    }

    #[test]
    fn operations_agree_with_realized_maps() {
        let groups = [c2(), Arc::new(Group::cyclic(3)), Arc::new(Group::cyclic(4)), Arc::new(Group::klein_four()), s3()];
        let mut r = rng(17);
        let mut checked = 0;
        for g in &groups {
            for _ in 0..40 {
                let x_obj = random_gset(&mut r, g, 6);
                let y_obj = random_gset(&mut r, g, 6);
                let Some(phi) = crate::random::random_equivariant_map(&mut r, &x_obj, &y_obj) else { continue };
                let (Some(a), Some(b)) = (random_element(&mut r, &x_obj, 6), random_element(&mut r, &x_obj, 6)) else {
                    continue;
                };
                let (ra, rb) = (a.realize(), b.realize());
                let sq = pullback(&ra, &rb).unwrap();
                assert_eq!(a.mul(&b).unwrap(), BurnsideElement::from_map(&sq.proj_f.then(&rb).unwrap()));
                assert_eq!(a.additive_transfer(&phi).unwrap(), BurnsideElement::from_map(&ra.then(&phi).unwrap()));
                if let Some(c) = random_element(&mut r, &y_obj, 6) {
                    let sq = pullback(&c.realize(), &phi).unwrap();
                    assert_eq!(c.restriction(&phi).unwrap(), BurnsideElement::from_map(&sq.proj_f));
                }
                if a.cardinality() <= 8 {
                    assert_eq!(a.norm(&phi).unwrap(), a.norm_by_sections(&phi).unwrap());
                    checked += 1;
                }
            }
        }
        assert!(checked > 50, "only {checked} norms compared");
    }

    #[test]
    fn norm_marks_agree_with_sections_on_orbits() {
        for g in [c2(), Arc::new(Group::cyclic(4)), Arc::new(Group::klein_four()), s3()] {
            for h in g.subgroups() {
                for k in g.subgroups().iter().filter(|k| h.is_subgroup_of(k)) {
                    let q = quotient_map(&g, h, k).unwrap();
                    for s in g.subgroups().iter().filter(|s| s.is_subgroup_of(h)) {
                        for n in 0..=2 {
                            let x = BurnsideElement::orbit(q.dom(), 0, s, n).unwrap().add(&BurnsideElement::one(q.dom())).unwrap();
                            if x.cardinality() <= 9 {
                                assert_eq!(x.norm(&q).unwrap(), x.norm_by_sections(&q).unwrap(), "{h:?} {k:?} {s:?} {n}");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn large_norms_do_not_enumerate() {
        let g = c2();
        let n = 1000;
        assert_eq!(norm_to_point_by_marks(&g, n), c2_norm_closed_form(&g, n).unwrap());
        let x = BurnsideElement::orbit(&GSet::cosets(&g, &g.trivial_subgroup()), 0, &g.trivial_subgroup(), usize::MAX / 2).unwrap();
        let q = quotient_map(&g, &g.trivial_subgroup(), &g.whole()).unwrap();
        assert!(matches!(x.norm(&q), Err(Error::Overflow(_))));
    }

    fn norm_to_point_by_marks(g: &Arc<Group>, n: usize) -> BurnsideElement {
        let e = g.trivial_subgroup();
        let x = BurnsideElement::orbit(&GSet::cosets(g, &e), 0, &e, n).unwrap();
        x.norm(&quotient_map(g, &e, &g.whole()).unwrap()).unwrap()
    }

    #[test]
    fn realization_round_trips() {
        let g = s3();
        let mut r = rng(2);
        for _ in 0..20 {
            let base = random_gset(&mut r, &g, 6);
            let y = random_gset(&mut r, &g, 6);
            if let Some(q) = crate::random::random_equivariant_map(&mut r, &y, &base) {
                let x = BurnsideElement::from_map(&q);
                assert_eq!(BurnsideElement::from_map(&x.realize()), x);
                assert_eq!(x.cardinality(), y.len());
            }
        }
    }
}
