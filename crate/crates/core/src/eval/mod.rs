//! Evaluation of bispans in commutative semirings: a bispan
//! `src <-p- E -f-> B -l-> tgt` acts on `R^src` as `l_⊕ f_⊗ p^*`.

mod difference;
mod poly;
mod semiring;

use crate::bispan::{compose_bispans, Bispan};
use crate::context::{choices, Ambient};
use crate::error::{Error, Result};

pub use difference::{
    check_binomial_splitting, differences_vanish, finite_difference_degree, DegreeReport, SplittingReport,
};
pub use poly::{default_names, Monomial, Poly, PolyTuple};
pub use semiring::{check_semiring_axioms, Semiring, Tropical};

/// Per target index, a sum over `b ∈ B_j` of monomials, each a sorted
/// multiset of source indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SemiringCircuit {
    pub src_arity: usize,
    pub tgt_arity: usize,
    pub terms: Vec<Vec<Vec<usize>>>,
}

impl SemiringCircuit {
    pub fn identity(n: usize) -> Self {
        SemiringCircuit { src_arity: n, tgt_arity: n, terms: (0..n).map(|i| vec![vec![i]]).collect() }
    }

    /// Largest monomial size feeding target `j`; `None` if `B_j` is empty.
    pub fn max_monomial(&self, j: usize) -> Option<usize> {
        self.terms[j].iter().map(Vec::len).max()
    }

    /// Source indices occurring in target `j`, ascending.
    pub fn variables_of(&self, j: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self.terms[j].iter().flatten().copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// Compiles a bispan; G-set bispans compile through their underlying sets.
pub fn compile<O: Ambient>(b: &Bispan<O>) -> SemiringCircuit {
    let form = b.canonical_form();
    SemiringCircuit { src_arity: b.src().len(), tgt_arity: b.tgt().len(), terms: form.terms }
}

pub fn evaluate<R: Semiring>(c: &SemiringCircuit, input: &[R]) -> Result<Vec<R>> {
    if input.len() != c.src_arity {
        return Err(Error::ArityMismatch { expected: c.src_arity, got: input.len() });
    }
    Ok(c
        .terms
        .iter()
        .map(|term| {
            term.iter().fold(R::zero(), |acc, m| acc.add(&m.iter().fold(R::one(), |prod, &i| prod.mul(&input[i]))))
        })
        .collect())
}

/// The three stages literally: pull back along `p`, multiply along the
/// fibers of `f`, add along the fibers of `l`.
pub fn evaluate_direct<O: Ambient, R: Semiring>(b: &Bispan<O>, input: &[R]) -> Result<Vec<R>> {
    if input.len() != b.src().len() {
        return Err(Error::ArityMismatch { expected: b.src().len(), got: input.len() });
    }
    let on_e: Vec<R> = b.p().map().iter().map(|&i| input[i].clone()).collect();
    let mut on_b = vec![R::one(); b.b().len()];
    for (e, &t) in b.f().map().iter().enumerate() {
        on_b[t] = on_b[t].mul(&on_e[e]);
    }
    let mut out = vec![R::zero(); b.tgt().len()];
    for (t, &j) in b.l().map().iter().enumerate() {
        out[j] = out[j].add(&on_b[t]);
    }
    Ok(out)
}

/// The bispan evaluated symbolically at the indeterminates.
pub fn polynomial_oracle<O: Ambient>(b: &Bispan<O>) -> PolyTuple {
    let vars = PolyTuple::variables(b.src().len());
    let polys = evaluate(&compile(b), &vars.polys).expect("arity matches by construction");
    PolyTuple { arity: b.src().len(), polys }
}

/// Outcome of a functoriality check.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctorialityReport<R> {
    pub probes_checked: usize,
    /// First probe where `eval(b2 ∘ b1) ≠ eval(b2) ∘ eval(b1)`, with both sides.
    pub failure: Option<(Vec<R>, Vec<R>, Vec<R>)>,
}

impl<R> FunctorialityReport<R> {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

pub fn check_functoriality<O: Ambient, R: Semiring>(
    b1: &Bispan<O>,
    b2: &Bispan<O>,
    probes: &[Vec<R>],
) -> Result<FunctorialityReport<R>> {
    let composite = compile(&compose_bispans(b2, b1)?);
    let (c1, c2) = (compile(b1), compile(b2));
    for (n, probe) in probes.iter().enumerate() {
        let lhs = evaluate(&composite, probe)?;
        let rhs = evaluate(&c2, &evaluate(&c1, probe)?)?;
        if lhs != rhs {
            return Ok(FunctorialityReport { probes_checked: n + 1, failure: Some((probe.clone(), lhs, rhs)) });
        }
    }
    Ok(FunctorialityReport { probes_checked: probes.len(), failure: None })
}

/// Every vector in `{0..=max}^arity`, lexicographically, truncated to
/// `limit` vectors.
pub fn grid_probes(arity: usize, max: usize, limit: usize) -> Vec<Vec<usize>> {
    let options = vec![(0..=max).collect::<Vec<_>>(); arity];
    let mut all = choices(&options);
    all.truncate(limit);
    all
}

/// A finite set `T` over `X`: element `t` lies over `structure[t]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyOverX {
    pub base: usize,
    pub structure: Vec<usize>,
}

impl FamilyOverX {
    pub fn new(base: usize, structure: Vec<usize>) -> Result<Self> {
        if let Some((at, &value)) = structure.iter().enumerate().find(|(_, &x)| x >= base) {
            return Err(Error::OutOfRange { at, value, len: base });
        }
        Ok(FamilyOverX { base, structure })
    }

    pub fn fiber_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.base];
        for &x in &self.structure {
            sizes[x] += 1;
        }
        sizes
    }
}

/// `t_! f_* p^*` applied to a family: the elements over `y` are pairs of
/// `b ∈ B` with `l(b) = y` and a choice, for each `e` over `b`, of an
/// element of `T` over `p(e)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyFunctorValue {
    pub elements: Vec<(usize, Vec<usize>)>,
    pub family: FamilyOverX,
}

pub fn eval_polyfunctor<O: Ambient>(b: &Bispan<O>, t: &FamilyOverX) -> Result<PolyFunctorValue> {
    if t.base != b.src().len() {
        return Err(Error::ArityMismatch { expected: b.src().len(), got: t.base });
    }
    let mut over: Vec<Vec<usize>> = vec![Vec::new(); t.base];
    for (i, &x) in t.structure.iter().enumerate() {
        over[x].push(i);
    }
    let f_fibers = b.f().fibers();
    let mut elements = Vec::new();
    let mut structure = Vec::new();
    for (bb, fiber) in f_fibers.iter().enumerate() {
        let options: Vec<Vec<usize>> = fiber.iter().map(|&e| over[b.p().apply(e)].clone()).collect();
        for choice in choices(&options) {
            elements.push((bb, choice));
            structure.push(b.l().apply(bb));
        }
    }
    Ok(PolyFunctorValue { elements, family: FamilyOverX { base: b.tgt().len(), structure } })
}

/// The two sides of the distributive law for `u: x -> y` in L and
/// `v: y -> z` in F: `v_⊗ u_⊕` and `g_⊕ ṽ_⊗ ε^*` as bispans from `x` to `z`.
pub fn distributivity_relation<O: Ambient>(u: &crate::context::Mor<O>, v: &crate::context::Mor<O>) -> Result<(Bispan<O>, Bispan<O>)> {
    let lhs = compose_bispans(&Bispan::norm(v)?, &Bispan::transfer(u)?)?;
    let d = crate::context::dependent_product(u, v)?;
    let rhs = Bispan::new(d.eps.clone(), d.f_tilde.clone(), d.g.clone())?;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::{finmap, to_point, FinSet};
    use num_bigint::{BigInt, BigUint};

    fn nat(v: &[u32]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    fn example() -> Bispan<FinSet> {
        // 1 <- {a,b,c} -> {u,v} -> 1 with p = [0, 0, 1] over I = {0, 1}.
        Bispan::new(finmap(3, 2, &[0, 0, 1]).unwrap(), finmap(3, 2, &[0, 0, 1]).unwrap(), to_point(2)).unwrap()
    }

    #[test]
    fn compile_examples() {
        assert_eq!(compile(&Bispan::identity(&FinSet::new(3))), SemiringCircuit::identity(3));
        let c = compile(&example());
        assert_eq!(c.terms, vec![vec![vec![0, 0], vec![1]]]);
        assert_eq!(polynomial_oracle(&example()).to_string(), "x0^2 + x1");
        let sq = Bispan::new(to_point(2), to_point(2), Mor::identity(&FinSet::point())).unwrap();
        assert_eq!(polynomial_oracle(&sq).to_string(), "x^2");
    }

    use crate::context::Mor;

    #[test]
    fn evaluation_in_each_semiring() {
        let c = compile(&example());
        assert_eq!(evaluate(&c, &nat(&[3, 4])).unwrap(), nat(&[13]));
        let t = evaluate(&c, &[Tropical::finite(3), Tropical::finite(4)]).unwrap();
        assert_eq!(t, vec![Tropical::finite(4)]);
        assert_eq!(evaluate(&c, &[true, true]).unwrap(), vec![true]);
        assert_eq!(evaluate(&c, &[false, false]).unwrap(), vec![false]);
        let empty_b = Bispan::new(finmap(0, 2, &[]).unwrap(), finmap(0, 0, &[]).unwrap(), finmap(0, 1, &[]).unwrap()).unwrap();
        assert_eq!(evaluate(&compile(&empty_b), &[true, true]).unwrap(), vec![false]);
        assert!(matches!(evaluate(&c, &nat(&[1])), Err(Error::ArityMismatch { .. })));
        let direct: Vec<BigInt> = evaluate_direct(&example(), &[BigInt::from(-2), BigInt::from(5)]).unwrap();
        assert_eq!(direct, vec![BigInt::from(9)]);
    }

    #[test]
    fn doubling_then_squaring() {
        let dbl = Bispan::new(to_point(2), Mor::identity(&FinSet::new(2)), to_point(2)).unwrap();
        let sq = Bispan::new(to_point(2), to_point(2), Mor::identity(&FinSet::point())).unwrap();
        let probes: Vec<Vec<BigUint>> = (0u32..=5).map(|v| nat(&[v])).collect();
        let r = check_functoriality(&dbl, &sq, &probes).unwrap();
        assert!(r.passed());
        assert_eq!(r.probes_checked, 6);
        let composite = compose_bispans(&sq, &dbl).unwrap();
        assert_eq!(polynomial_oracle(&composite).to_string(), "4*x^2");
        let substituted = polynomial_oracle(&sq).substitute(&polynomial_oracle(&dbl)).unwrap();
        assert_eq!(substituted, polynomial_oracle(&composite));
    }

    #[test]
    fn distributive_law_for_fibers_two_and_one() {
        let u = finmap(3, 2, &[0, 0, 1]).unwrap();
        let v = to_point(2);
        let (lhs, rhs) = distributivity_relation(&u, &v).unwrap();
        assert_eq!(polynomial_oracle(&lhs), polynomial_oracle(&rhs));
        assert_eq!(polynomial_oracle(&lhs).to_string(), "x0*x2 + x1*x2");
    }

    #[test]
    fn polyfunctor_cardinalities() {
        let sq = Bispan::new(to_point(2), to_point(2), Mor::identity(&FinSet::point())).unwrap();
        let t = FamilyOverX::new(1, vec![0, 0, 0]).unwrap();
        assert_eq!(eval_polyfunctor(&sq, &t).unwrap().elements.len(), 9);
        let id = Bispan::identity(&FinSet::new(2));
        let t = FamilyOverX::new(2, vec![1, 0, 1]).unwrap();
        let v = eval_polyfunctor(&id, &t).unwrap();
        assert_eq!(v.family.fiber_sizes(), t.fiber_sizes());
        let t = FamilyOverX::new(2, vec![1, 1]).unwrap();
        let v = eval_polyfunctor(&example(), &t).unwrap();
        assert_eq!(v.family.fiber_sizes(), vec![2]);
    }

    #[test]
    fn grid_is_truncated() {
        assert_eq!(grid_probes(2, 5, 200).len(), 36);
        assert_eq!(grid_probes(4, 5, 200).len(), 200);
        assert_eq!(grid_probes(0, 5, 200), vec![Vec::<usize>::new()]);
    }
}
