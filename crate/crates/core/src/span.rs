//! Spans `src <- apex -> tgt`, composed by pullback.

use std::collections::BTreeMap;

use crate::context::{
    check_universal_property, compose, dependent_product, equivariant_maps, find_bijection, iso_over, pullback,
    Ambient, DistributivityDiagram, Mor, PullbackSquare, Search, UniversalPropertyReport,
};
use crate::error::{ClassKind, Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Span<O> {
    back: Mor<O>,
    fwd: Mor<O>,
}

impl<O: Ambient> Span<O> {
    /// `back: apex -> src`, `fwd: apex -> tgt`; `fwd` must lie in F.
    pub fn new(back: Mor<O>, fwd: Mor<O>) -> Result<Self> {
        fwd.require(ClassKind::F)?;
        if back.dom() != fwd.dom() {
            return Err(Error::BoundaryMismatch("legs of a span must share their domain".into()));
        }
        Ok(Span { back, fwd })
    }

    pub fn identity(x: &O) -> Self {
        Span { back: Mor::identity(x), fwd: Mor::identity(x) }
    }

    pub fn src(&self) -> &O {
        self.back.cod()
    }

    pub fn tgt(&self) -> &O {
        self.fwd.cod()
    }

    pub fn apex(&self) -> &O {
        self.back.dom()
    }

    pub fn back(&self) -> &Mor<O> {
        &self.back
    }

    pub fn fwd(&self) -> &Mor<O> {
        &self.fwd
    }

    /// Number of apex elements over each `(src, tgt)` pair.
    pub fn counting_matrix(&self) -> BTreeMap<(usize, usize), usize> {
        let mut m = BTreeMap::new();
        for a in 0..self.apex().len() {
            *m.entry((self.back.apply(a), self.fwd.apply(a))).or_insert(0) += 1;
        }
        m
    }

    /// Invertible up to isomorphism exactly when both legs are bijections.
    pub fn is_invertible(&self) -> bool {
        self.back.is_bijective() && self.fwd.is_bijective()
    }

    /// The reversed span, meaningful as an inverse only when invertible.
    pub fn reversed(&self) -> Result<Self> {
        Span::new(self.fwd.clone(), self.back.clone())
    }
}

/// A map of apexes commuting with both legs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanMor<O> {
    pub source: Span<O>,
    pub target: Span<O>,
    pub mediating: Mor<O>,
}

impl<O: Ambient> SpanMor<O> {
    pub fn new(source: Span<O>, target: Span<O>, mediating: Mor<O>) -> Result<Self> {
        let m = SpanMor { source, target, mediating };
        m.validate().map_err(Error::BoundaryMismatch)?;
        Ok(m)
    }

    pub fn identity(s: &Span<O>) -> Self {
        SpanMor { source: s.clone(), target: s.clone(), mediating: Mor::identity(s.apex()) }
    }

    pub fn validate(&self) -> std::result::Result<(), String> {
        let (s, t, m) = (&self.source, &self.target, &self.mediating);
        if s.src() != t.src() || s.tgt() != t.tgt() {
            return Err("spans have different boundaries".into());
        }
        if m.dom() != s.apex() || m.cod() != t.apex() {
            return Err("mediating map has the wrong endpoints".into());
        }
        for a in 0..s.apex().len() {
            if t.back.apply(m.apply(a)) != s.back.apply(a) {
                return Err(format!("backward triangle fails at {a}"));
            }
            if t.fwd.apply(m.apply(a)) != s.fwd.apply(a) {
                return Err(format!("forward triangle fails at {a}"));
            }
        }
        Ok(())
    }

    /// Vertical composite `other ∘ self`.
    pub fn then(&self, other: &SpanMor<O>) -> Result<SpanMor<O>> {
        if self.target != other.source {
            return Err(Error::NotComposable);
        }
        Ok(SpanMor {
            source: self.source.clone(),
            target: other.target.clone(),
            mediating: compose(&other.mediating, &self.mediating)?,
        })
    }

    /// The inverse of an invertible 2-morphism.
    pub fn inverse(&self) -> Option<SpanMor<O>> {
        Some(SpanMor { source: self.target.clone(), target: self.source.clone(), mediating: self.mediating.inverse()? })
    }

    /// Horizontal composite: `beta` between spans out of the target of the
    /// spans `self` relates.
    pub fn horizontal(&self, beta: &SpanMor<O>) -> Result<SpanMor<O>> {
        let source = compose_spans(&beta.source, &self.source)?;
        let target = compose_spans(&beta.target, &self.target)?;
        let sq_s = pullback(self.source.fwd(), beta.source.back())?;
        let sq_t = pullback(self.target.fwd(), beta.target.back())?;
        let map = sq_s
            .pairs
            .iter()
            .map(|&(a1, a2)| {
                sq_t.index_of(self.mediating.apply(a1), beta.mediating.apply(a2)).expect("mediating maps commute")
            })
            .collect();
        let mediating = Mor::new(source.apex().clone(), target.apex().clone(), map)?;
        SpanMor::new(source, target, mediating)
    }
}

/// `s2 ∘ s1`: the apex is `apex(s1) ×_{tgt(s1)} apex(s2)`.
pub fn compose_spans<O: Ambient>(s2: &Span<O>, s1: &Span<O>) -> Result<Span<O>> {
    if s1.tgt() != s2.src() {
        return Err(Error::BoundaryMismatch("target of the first span differs from source of the second".into()));
    }
    let sq = pullback(&s1.fwd, &s2.back)?;
    let back = compose(&s1.back, &sq.proj_g)?;
    let fwd = compose(&s2.fwd, &sq.proj_f)?;
    Span::new(back, fwd)
}

/// `[f]_B = (cod f <- dom f = dom f)`.
pub fn embed_backward<O: Ambient>(f: &Mor<O>) -> Span<O> {
    Span { back: f.clone(), fwd: Mor::identity(f.dom()) }
}

/// `[f]_F = (dom f = dom f -> cod f)`.
pub fn embed_forward<O: Ambient>(f: &Mor<O>) -> Result<Span<O>> {
    Span::new(Mor::identity(f.dom()), f.clone())
}

/// An isomorphism of spans with the same boundary. For plain finite sets the
/// counting matrix decides; for G-sets the search is over orbits of the
/// apex and is complete as well, since orbits over a fixed base are matched
/// by their stabilizers.
pub fn span_isomorphic<O: Ambient>(a: &Span<O>, b: &Span<O>) -> Option<SpanMor<O>> {
    if a.src() != b.src() || a.tgt() != b.tgt() || a.apex().len() != b.apex().len() {
        return None;
    }
    if a.counting_matrix() != b.counting_matrix() {
        return None;
    }
    let iso = iso_over(&[&a.back, &a.fwd], &[&b.back, &b.fwd])?;
    Some(SpanMor { source: a.clone(), target: b.clone(), mediating: iso })
}

/// The same question answered by brute-force search, for cross-checking.
pub fn span_isomorphic_search<O: Ambient>(a: &Span<O>, b: &Span<O>, budget: usize) -> Search<Vec<usize>> {
    if a.src() != b.src() || a.tgt() != b.tgt() {
        return Search::Absent;
    }
    let allowed = |x: usize, y: usize| a.back.apply(x) == b.back.apply(y) && a.fwd.apply(x) == b.fwd.apply(y);
    let key = |s: &Span<O>| -> Vec<usize> {
        (0..s.apex().len()).map(|x| s.back.apply(x) * s.tgt().len() + s.fwd.apply(x)).collect()
    };
    let (ka, kb) = (key(a), key(b));
    let mut budget = budget;
    find_bijection(a.apex(), b.apex(), Some((&ka, &kb)), &allowed, &mut |_| true, &mut budget)
}

/// The pullback of `[f]_F` and `[g]_F` in the span category, with the
/// result of the bounded terminality check.
#[derive(Debug, Clone)]
pub struct ForwardPullback<O> {
    pub square: PullbackSquare<O>,
    /// `[d -> b]_F` and `[d -> a]_F`, the two legs of the cone.
    pub to_g: Span<O>,
    pub to_f: Span<O>,
    pub probes_checked: usize,
    pub terminal: bool,
}

/// For `f: a -> c` and `g: b -> c`. A cone `(γ: y -> b, δ: y -> a)` of
/// forward spans factors uniquely through the apex exactly when the square is
/// cartesian in the ambient category; this is checked on every probe with at
/// most `probe_bound` elements.
pub fn pullback_ff<O: Ambient>(f: &Mor<O>, g: &Mor<O>, probe_bound: usize) -> Result<ForwardPullback<O>> {
    let square = pullback(f, g)?;
    let to_g = embed_forward(&square.proj_f)?;
    let to_f = embed_forward(&square.proj_g)?;
    let mut probes_checked = 0;
    let mut terminal = true;
    'probes: for y in f.dom().probe_objects(probe_bound) {
        for delta in equivariant_maps(&y, f.dom(), &|_, _| true) {
            for gamma in equivariant_maps(&y, g.dom(), &|t, b| g.apply(b) == f.apply(delta[t])) {
                probes_checked += 1;
                let factorizations = equivariant_maps(&y, &square.apex, &|t, k| square.pairs[k] == (delta[t], gamma[t]));
                if factorizations.len() != 1 {
                    terminal = false;
                    break 'probes;
                }
            }
        }
    }
    Ok(ForwardPullback { square, to_g, to_f, probes_checked, terminal })
}

/// The pullback of `[f]_B` and `[g]_F` for `g: a -> b`, `f: b -> c`: the
/// distributivity diagram for `(g, f)` together with its universal-property
/// report.
#[derive(Debug, Clone)]
pub struct MixedPullback<O> {
    pub diagram: DistributivityDiagram<O>,
    /// `e <- d -> a`, the span to `a`.
    pub to_source: Span<O>,
    /// `[h]_B` from `c` to `e`.
    pub to_target: Span<O>,
    pub report: UniversalPropertyReport<O>,
}

pub fn pullback_bf<O: Ambient>(f: &Mor<O>, g: &Mor<O>, probe_bound: usize) -> Result<MixedPullback<O>> {
    f.require(ClassKind::F)?;
    let diagram = dependent_product(g, f)?;
    let to_source = Span::new(diagram.f_tilde.clone(), diagram.eps.clone())?;
    let to_target = embed_backward(&diagram.g);
    let report = check_universal_property(&diagram, probe_bound);
    Ok(MixedPullback { diagram, to_source, to_target, report })
}

/// The canonical isomorphism `(s3 ∘ s2) ∘ s1 => s3 ∘ (s2 ∘ s1)`.
pub fn associator<O: Ambient>(s3: &Span<O>, s2: &Span<O>, s1: &Span<O>) -> Result<SpanMor<O>> {
    let inner_left = pullback(s2.fwd(), s3.back())?;
    let left = compose_spans(&compose_spans(s3, s2)?, s1)?;
    let outer_left = pullback(s1.fwd(), &compose(s2.back(), &inner_left.proj_g)?)?;
    let inner_right = pullback(s1.fwd(), s2.back())?;
    let right = compose_spans(s3, &compose_spans(s2, s1)?)?;
    let outer_right = pullback(&compose(s2.fwd(), &inner_right.proj_f)?, s3.back())?;
    let map = outer_left
        .pairs
        .iter()
        .map(|&(a1, k)| {
            let (a2, a3) = inner_left.pairs[k];
            let m = inner_right.index_of(a1, a2).expect("a1 and a2 agree");
            outer_right.index_of(m, a3).expect("a2 and a3 agree")
        })
        .collect();
    SpanMor::new(left.clone(), right.clone(), Mor::new(left.apex().clone(), right.apex().clone(), map)?)
}

/// The unit `id => [f]_B ∘ [f]_F` of the adjunction, as a span morphism.
pub fn adjunction_unit<O: Ambient>(f: &Mor<O>) -> Result<SpanMor<O>> {
    let id = Span::identity(f.dom());
    let round = compose_spans(&embed_backward(f), &embed_forward(f)?)?;
    // The apex of the round trip is the kernel pair of f; the diagonal maps in.
    let sq = pullback(f, f)?;
    let map = (0..f.dom().len()).map(|x| sq.index_of(x, x).expect("diagonal")).collect();
    SpanMor::new(id, round, Mor::new(f.dom().clone(), sq.apex.clone(), map)?)
}

/// The counit `[f]_F ∘ [f]_B => id` of the adjunction.
pub fn adjunction_counit<O: Ambient>(f: &Mor<O>) -> Result<SpanMor<O>> {
    let round = compose_spans(&embed_forward(f)?, &embed_backward(f))?;
    let id = Span::identity(f.cod());
    SpanMor::new(round, id, f.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::{finmap, to_point, unflagged, FinSet};

    fn span(back: (usize, usize, &[usize]), fwd: (usize, usize, &[usize])) -> Span<FinSet> {
        Span::new(finmap(back.0, back.1, back.2).unwrap(), finmap(fwd.0, fwd.1, fwd.2).unwrap()).unwrap()
    }

    #[test]
    fn product_over_a_point() {
        let s1 = Span::new(to_point(2), to_point(2)).unwrap();
        let s2 = Span::new(to_point(3), to_point(3)).unwrap();
        assert_eq!(compose_spans(&s2, &s1).unwrap().apex().len(), 6);
    }

    #[test]
    fn identity_fwd_gives_fiber_product() {
        let s1 = span((3, 1, &[0, 0, 0]), (3, 3, &[0, 1, 2]));
        let s2 = span((4, 3, &[0, 0, 1, 2]), (4, 2, &[0, 1, 1, 0]));
        let c = compose_spans(&s2, &s1).unwrap();
        let expected: usize = (0..3).map(|y| s2.back().fiber(y).len()).sum();
        assert_eq!(c.apex().len(), expected);
    }

    #[test]
    fn unit_laws() {
        let s = span((3, 2, &[0, 1, 1]), (3, 2, &[1, 1, 0]));
        let left = compose_spans(&Span::identity(s.tgt()), &s).unwrap();
        let right = compose_spans(&s, &Span::identity(s.src())).unwrap();
        assert!(span_isomorphic(&left, &s).is_some());
        assert!(span_isomorphic(&right, &s).is_some());
        assert!(compose_spans(&s, &Span::identity(&FinSet::new(3))).is_err());
    }

    #[test]
    fn embeddings() {
        let id = Mor::identity(&FinSet::new(3));
        assert_eq!(embed_backward(&id), Span::identity(&FinSet::new(3)));
        let c = compose_spans(&embed_forward(&to_point(2)).unwrap(), &embed_backward(&to_point(2))).unwrap();
        assert_eq!(c.apex().len(), 2);
        assert_eq!(c.src().len(), 1);
        assert_eq!(c.tgt().len(), 1);
        assert!(matches!(embed_forward(&unflagged(to_point(2))), Err(Error::MissingClass(ClassKind::F))));
    }

    #[test]
    fn isomorphism_by_counting_matrix() {
        let s = span((3, 2, &[0, 1, 1]), (3, 2, &[1, 1, 0]));
        assert!(span_isomorphic(&s, &s).unwrap().mediating.is_bijective());
        let scrambled = span((3, 2, &[1, 0, 1]), (3, 2, &[0, 1, 1]));
        let iso = span_isomorphic(&s, &scrambled).unwrap();
        iso.validate().unwrap();
        let a = Span::new(to_point(2), to_point(2)).unwrap();
        let b = Span::new(to_point(2), finmap(2, 2, &[0, 1]).unwrap()).unwrap();
        assert!(span_isomorphic(&a, &b).is_none());
    }

    #[test]
    fn forward_pullbacks() {
        let id = Mor::identity(&FinSet::new(2));
        let p = pullback_ff(&id, &id, 2).unwrap();
        assert_eq!(p.square.apex.len(), 2);
        assert!(p.terminal);
        let p = pullback_ff(&to_point(2), &to_point(3), 2).unwrap();
        assert_eq!(p.square.apex.len(), 6);
        assert!(p.terminal && p.probes_checked > 0);
        let p = pullback_ff(&to_point(2), &to_point(0), 2).unwrap();
        assert_eq!(p.square.apex.len(), 0);
        assert!(p.terminal);
    }

    #[test]
    fn mixed_pullbacks() {
        let id2 = Mor::identity(&FinSet::new(2));
        let p = pullback_bf(&to_point(2), &id2, 2).unwrap();
        assert_eq!(p.diagram.w.len(), 1);
        let g = finmap(5, 2, &[0, 0, 1, 1, 1]).unwrap();
        let p = pullback_bf(&to_point(2), &g, 2).unwrap();
        assert_eq!(p.diagram.w.len(), 6);
        assert!(p.report.passed());
        let p = pullback_bf(&id2, &g, 2).unwrap();
        assert_eq!(p.diagram.w.len(), 5);
        assert_eq!(p.diagram.g.map(), g.map());
    }

    #[test]
    fn adjunction_triangle() {
        // [f]_F => [f]_F [f]_B [f]_F => [f]_F is the identity.
        let f = finmap(3, 2, &[0, 0, 1]).unwrap();
        let ff = embed_forward(&f).unwrap();
        let unit = adjunction_unit(&f).unwrap();
        let counit = adjunction_counit(&f).unwrap();
        let first = unit.horizontal(&SpanMor::identity(&ff)).unwrap();
        let second = SpanMor::identity(&ff).horizontal(&counit).unwrap();
        let assoc = associator(&ff, &embed_backward(&f), &ff).unwrap();
        let path = first.then(&assoc.inverse().unwrap()).unwrap().then(&second).unwrap();
        // Both ends are [f]_F composed with an identity span; their apexes are
        // the diagonal pairs (x, x) and (x, f x).
        let start_pairs = pullback(&Mor::identity(f.dom()), ff.back()).unwrap().pairs;
        let end_pairs = pullback(ff.fwd(), &Mor::identity(f.cod())).unwrap().pairs;
        for (k, &(x, _)) in start_pairs.iter().enumerate() {
            assert_eq!(end_pairs[path.mediating.apply(k)].0, x);
        }
    }

    #[test]
    fn associator_is_a_span_isomorphism() {
        let s1 = span((3, 2, &[0, 1, 1]), (3, 2, &[1, 1, 0]));
        let s2 = span((2, 2, &[0, 0]), (2, 3, &[2, 0]));
        let s3 = span((4, 3, &[0, 0, 2, 1]), (4, 1, &[0, 0, 0, 0]));
        let a = associator(&s3, &s2, &s1).unwrap();
        assert!(a.mediating.is_bijective());
        a.validate().unwrap();
    }
}
