//! Degree structure: a map has degree `n` when every fiber has exactly `n`
//! elements (underlying fibers, for G-sets).

use std::collections::{BTreeMap, BTreeSet};

use crate::context::{codiagonal, compose, coproduct_mor, equivariant_maps, pullback, Ambient, Classes, Mor};
use crate::error::{Error, Result};

/// The part of a map lying over the elements of fiber size `degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeComponent<O> {
    pub degree: usize,
    /// `y_n -> y`.
    pub base_incl: Mor<O>,
    /// `x_n -> x`.
    pub total_incl: Mor<O>,
    /// `f_n: x_n -> y_n`.
    pub map: Mor<O>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeDecomposition<O> {
    /// Nonempty components only, keyed by degree.
    pub components: BTreeMap<usize, DegreeComponent<O>>,
    pub max_degree: usize,
}

impl<O: Ambient> DegreeDecomposition<O> {
    /// Codomain elements of degree `n` (empty if absent).
    pub fn base_of(&self, n: usize) -> Vec<usize> {
        self.components.get(&n).map(|c| c.base_incl.map().to_vec()).unwrap_or_default()
    }

    /// `(degree, |y_n|)` pairs.
    pub fn profile(&self) -> Vec<(usize, usize)> {
        self.components.iter().map(|(&n, c)| (n, c.base_incl.dom().len())).collect()
    }
}

/// `Some(n)` when `f` has nonempty codomain and every fiber has `n` elements.
pub fn constant_degree<O: Ambient>(f: &Mor<O>) -> Option<usize> {
    let fibers = f.fibers();
    let first = fibers.first()?.len();
    fibers.iter().all(|fb| fb.len() == first).then_some(first)
}

/// Restriction of `f` over a subset `ys` of its codomain closed under the
/// action, with the inclusions.
fn restrict_over<O: Ambient>(f: &Mor<O>, ys: &[usize]) -> (Mor<O>, Mor<O>, Mor<O>) {
    let y_sub = f.cod().restrict(ys);
    let position: BTreeMap<usize, usize> = ys.iter().enumerate().map(|(i, &y)| (y, i)).collect();
    let xs: Vec<usize> = (0..f.dom().len()).filter(|&x| position.contains_key(&f.apply(x))).collect();
    let x_sub = f.dom().restrict(&xs);
    let map = xs.iter().map(|&x| position[&f.apply(x)]).collect();
    let restricted = Mor::new_unchecked(x_sub.clone(), y_sub.clone(), map, f.classes());
    let base_incl = Mor::new_unchecked(y_sub, f.cod().clone(), ys.to_vec(), Classes::ALL);
    let total_incl = Mor::new_unchecked(x_sub, f.dom().clone(), xs, Classes::ALL);
    (restricted, base_incl, total_incl)
}

pub fn degree_decomposition<O: Ambient>(f: &Mor<O>) -> DegreeDecomposition<O> {
    let mut by_degree: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (y, fb) in f.fibers().iter().enumerate() {
        by_degree.entry(fb.len()).or_default().push(y);
    }
    let components: BTreeMap<usize, DegreeComponent<O>> = by_degree
        .into_iter()
        .map(|(n, ys)| {
            let (map, base_incl, total_incl) = restrict_over(f, &ys);
            (n, DegreeComponent { degree: n, base_incl, total_incl, map })
        })
        .collect();
    let max_degree = components.keys().next_back().copied().unwrap_or(0);
    DegreeDecomposition { components, max_degree }
}

/// Decomposition of `∇ ∘ (f ⊔ g)`, computed directly and through the blocks
/// `y_{mn} = y_n^{(f)} ×_y y_m^{(g)}`; fails if the two disagree.
pub fn fold_degree_decomposition<O: Ambient>(f: &Mor<O>, g: &Mor<O>) -> Result<DegreeDecomposition<O>> {
    if f.cod() != g.cod() {
        return Err(Error::CodomainMismatch);
    }
    let folded = compose(&codiagonal(f.cod()), &coproduct_mor(f, g)?)?;
    let direct = degree_decomposition(&folded);

    let df = degree_decomposition(f);
    let dg = degree_decomposition(g);
    let shift = f.dom().len();
    let mut base_by_k: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    let mut total_by_k: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for (&n, cf) in &df.components {
        for (&m, cg) in &dg.components {
            let block = pullback(&cf.base_incl, &cg.base_incl)?;
            if block.apex.is_empty() {
                continue;
            }
            let to_y = compose(&cf.base_incl, &block.proj_g)?;
            let ys: BTreeSet<usize> = to_y.map().iter().copied().collect();
            // x_{mn} -> y_{mn} must have degree n, z_{mn} -> y_{mn} degree m.
            let ys_vec: Vec<usize> = ys.iter().copied().collect();
            let (xf, _, x_incl) = restrict_over(f, &ys_vec);
            let (zg, _, z_incl) = restrict_over(g, &ys_vec);
            if constant_degree(&xf) != Some(n) || constant_degree(&zg) != Some(m) {
                return Err(Error::DegreeMismatch(format!("block ({m},{n}) does not have degrees ({m},{n})")));
            }
            base_by_k.entry(n + m).or_default().extend(ys);
            let total = total_by_k.entry(n + m).or_default();
            total.extend(x_incl.map().iter().copied());
            total.extend(z_incl.map().iter().map(|&z| z + shift));
        }
    }
    if base_by_k.keys().collect::<Vec<_>>() != direct.components.keys().collect::<Vec<_>>() {
        return Err(Error::DegreeMismatch("degrees present differ".into()));
    }
    for (k, comp) in &direct.components {
        let base: BTreeSet<usize> = comp.base_incl.map().iter().copied().collect();
        let total: BTreeSet<usize> = comp.total_incl.map().iter().copied().collect();
        if base_by_k[k] != base || total_by_k[k] != total {
            return Err(Error::DegreeMismatch(format!("degree-{k} component differs")));
        }
    }
    Ok(direct)
}

/// Checks the degree-structure axioms for `f` literally: decomposition into
/// constant-degree parts covering the codomain, degree 0 meaning empty
/// domain, stability under base change along every `w -> cod(f)` with
/// `|w| <= probe_bound`, and G-stability of the parts.
pub fn check_degree_axioms<O: Ambient>(f: &Mor<O>, probe_bound: usize) -> std::result::Result<(), String> {
    let d = degree_decomposition(f);
    let y = f.cod();
    let mut seen = vec![false; y.len()];
    let mut counted = 0;
    for (&n, comp) in &d.components {
        if constant_degree(&comp.map) != Some(n) {
            return Err(format!("component {n} is not of constant degree {n}"));
        }
        for &b in comp.base_incl.map() {
            if std::mem::replace(&mut seen[b], true) {
                return Err(format!("element {b} lies in two components"));
            }
            for g in 0..y.group_order() {
                if f.fiber(y.act(g, b)).len() != n {
                    return Err(format!("component {n} is not stable under the action"));
                }
            }
        }
        if n == 0 && !comp.map.dom().is_empty() {
            return Err("degree-0 component has nonempty domain".into());
        }
        counted += n * comp.base_incl.dom().len();
    }
    if seen.iter().any(|s| !s) {
        return Err("components do not cover the codomain".into());
    }
    if counted != f.dom().len() {
        return Err(format!("sum of n·|y_n| is {counted}, domain has {}", f.dom().len()));
    }
    for w in y.probe_objects(probe_bound) {
        for map in equivariant_maps(&w, y, &|_, _| true) {
            let g = Mor::new_unchecked(w.clone(), y.clone(), map, Classes::ALL);
            let pulled = pullback(f, &g).map_err(|e| e.to_string())?;
            let dw = degree_decomposition(&pulled.proj_f);
            for (&n, comp) in &dw.components {
                let expected: Vec<usize> = (0..w.len()).filter(|&t| f.fiber(g.apply(t)).len() == n).collect();
                if comp.base_incl.map() != expected.as_slice() {
                    return Err(format!("degree {n} not stable under base change along {:?}", g.map()));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::{finmap, FinSet};

    #[test]
    fn mixed_fibers() {
        let f = finmap(5, 3, &[0, 0, 2, 2, 2]).unwrap();
        let d = degree_decomposition(&f);
        assert_eq!(d.profile(), vec![(0, 1), (2, 1), (3, 1)]);
        assert_eq!(d.base_of(0), vec![1]);
        assert_eq!(d.base_of(2), vec![0]);
        assert_eq!(d.base_of(3), vec![2]);
        assert_eq!(d.max_degree, 3);
    }

    #[test]
    fn identity_and_empty_domain() {
        let d = degree_decomposition(&Mor::identity(&FinSet::new(4)));
        assert_eq!(d.profile(), vec![(1, 4)]);
        let d = degree_decomposition(&finmap(0, 3, &[]).unwrap());
        assert_eq!(d.profile(), vec![(0, 3)]);
        assert!(d.components[&0].map.dom().is_empty());
    }

    #[test]
    fn fold_adds_degrees() {
        let f = Mor::identity(&FinSet::point());
        let g = finmap(2, 1, &[0, 0]).unwrap();
        let d = fold_degree_decomposition(&f, &g).unwrap();
        assert_eq!(d.profile(), vec![(3, 1)]);

        let f = finmap(3, 2, &[0, 1, 1]).unwrap();
        let empty = finmap(0, 2, &[]).unwrap();
        assert_eq!(fold_degree_decomposition(&f, &empty).unwrap().profile(), degree_decomposition(&f).profile());
    }

    #[test]
    fn fold_with_four_blocks() {
        // f has degrees (1, 2) over y = {0, 1} and g has (2, 1), so both points land in degree 3.
        let f = finmap(3, 2, &[0, 1, 1]).unwrap();
        let g = finmap(3, 2, &[0, 0, 1]).unwrap();
        let d = fold_degree_decomposition(&f, &g).unwrap();
        assert_eq!(d.profile(), vec![(3, 2)]);
        // Folding a map with itself doubles each degree.
        let f = finmap(3, 2, &[0, 1, 1]).unwrap();
        let g = finmap(3, 2, &[0, 1, 1]).unwrap();
        assert_eq!(fold_degree_decomposition(&f, &g).unwrap().profile(), vec![(2, 1), (4, 1)]);
    }

    #[test]
    fn axioms_hold_on_small_example() {
        let f = finmap(4, 3, &[0, 0, 2, 2]).unwrap();
        check_degree_axioms(&f, 3).unwrap();
    }
}
