//! Plain finite sets, where every map lies in both classes.

use crate::context::{Ambient, Classes, Mor};
use crate::error::{Error, Result};

/// The finite set `{0, .., len - 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FinSet {
    len: usize,
}

pub type FinMap = Mor<FinSet>;

impl FinSet {
    pub fn new(len: usize) -> Self {
        FinSet { len }
    }

    pub fn point() -> Self {
        FinSet { len: 1 }
    }
}

impl Ambient for FinSet {
    fn len(&self) -> usize {
        self.len
    }

    fn same_ambient(&self, _other: &Self) -> bool {
        true
    }

    fn group_order(&self) -> usize {
        1
    }

    fn group_inverse(&self, g: usize) -> usize {
        g
    }

    fn act(&self, _g: usize, x: usize) -> usize {
        x
    }

    fn build(&self, len: usize, _act: &dyn Fn(usize, usize) -> usize) -> Self {
        FinSet { len }
    }

    fn isomorphism(&self, other: &Self) -> Option<Vec<usize>> {
        (self.len == other.len).then(|| (0..self.len).collect())
    }

    fn probe_objects(&self, bound: usize) -> Vec<Self> {
        (0..=bound).map(FinSet::new).collect()
    }
}

/// Shorthand for a map of finite sets given by its assignment.
pub fn finmap(dom: usize, cod: usize, map: &[usize]) -> Result<FinMap> {
    Mor::new(FinSet::new(dom), FinSet::new(cod), map.to_vec())
}

/// The unique map to the one-point set.
pub fn to_point(n: usize) -> FinMap {
    Mor::new(FinSet::new(n), FinSet::point(), vec![0; n]).expect("constant map")
}

/// A map without class flags, for exercising class checks.
pub fn unflagged(f: FinMap) -> FinMap {
    f.with_classes(Classes::NONE)
}

/// The subset `{x : f(x) = y}` in carrier order.
pub fn fiber(f: &FinMap, y: usize) -> Result<Vec<usize>> {
    if y >= f.cod().len() {
        return Err(Error::NoSuchElement { element: y, len: f.cod().len() });
    }
    Ok(f.fiber(y))
}

/// Cardinality: a complete isomorphism invariant of plain finite sets.
pub fn canonical_form_object(x: &FinSet) -> usize {
    x.len()
}

/// Every map `dom -> cod`, lexicographically.
pub fn all_maps(dom: usize, cod: usize) -> Vec<FinMap> {
    let options = vec![(0..cod).collect::<Vec<_>>(); dom];
    crate::context::choices(&options)
        .into_iter()
        .map(|m| Mor::new(FinSet::new(dom), FinSet::new(cod), m).expect("valid assignment"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::{compose, coproduct, pullback};

    #[test]
    fn fiber_scans_assignment() {
        let f = finmap(5, 3, &[0, 0, 2, 2, 2]).unwrap();
        assert_eq!(fiber(&f, 2).unwrap(), vec![2, 3, 4]);
        assert!(fiber(&f, 1).unwrap().is_empty());
        assert!(matches!(fiber(&f, 3), Err(Error::NoSuchElement { .. })));
        let id = Mor::identity(&FinSet::new(4));
        for y in 0..4 {
            assert_eq!(fiber(&id, y).unwrap(), vec![y]);
        }
    }

    #[test]
    fn canonical_form_is_cardinality() {
        assert_eq!(canonical_form_object(&FinSet::new(0)), 0);
        assert_eq!(canonical_form_object(&FinSet::new(5)), 5);
        let sum = coproduct(&FinSet::new(2), &FinSet::new(3)).unwrap();
        assert_eq!(canonical_form_object(&sum.obj), 5);
    }

    #[test]
    fn compose_examples() {
        let f = finmap(2, 1, &[0, 0]).unwrap();
        assert_eq!(compose(&Mor::identity(&FinSet::point()), &f).unwrap(), f);
        let f = finmap(3, 2, &[0, 0, 1]).unwrap();
        let g = finmap(2, 1, &[0, 0]).unwrap();
        assert_eq!(compose(&g, &f).unwrap().map(), &[0, 0, 0]);
        assert!(compose(&f, &g).is_err());
        let a = unflagged(f.clone());
        assert_eq!(compose(&g, &a).unwrap().classes(), Classes::NONE);
    }

    #[test]
    fn invalid_assignments_are_rejected() {
        assert!(matches!(finmap(2, 1, &[0]), Err(Error::AssignmentLength { .. })));
        assert!(matches!(finmap(2, 1, &[0, 1]), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn pullback_examples() {
        let f = finmap(3, 2, &[0, 0, 1]).unwrap();
        let id = Mor::identity(&FinSet::new(2));
        let sq = pullback(&f, &id).unwrap();
        assert_eq!(sq.apex.len(), 3);
        assert_eq!(sq.proj_f.map(), f.map());
        let sq = pullback(&f, &finmap(2, 2, &[0, 1]).unwrap()).unwrap();
        assert_eq!(sq.pairs, vec![(0, 0), (1, 0), (2, 1)]);
        let sq = pullback(&to_point(2), &to_point(2)).unwrap();
        assert_eq!(sq.apex.len(), 4);
        assert!(pullback(&f, &to_point(2)).is_err());
    }

    #[test]
    fn all_maps_counts() {
        assert_eq!(all_maps(3, 2).len(), 8);
        assert_eq!(all_maps(0, 0).len(), 1);
        assert_eq!(all_maps(2, 0).len(), 0);
    }
}
