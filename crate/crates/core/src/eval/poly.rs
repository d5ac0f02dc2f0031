use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::semiring::Semiring;
use crate::error::{Error, Result};

/// An exponent vector with trailing zeros trimmed, so that the derived
/// lexicographic order is the monomial order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        Monomial(e)
    }

    pub fn from_exponents(mut e: Vec<u32>) -> Self {
        while e.last() == Some(&0) {
            e.pop();
        }
        Monomial(e)
    }

    /// The monomial `∏ x_i` over a multiset of variable indices.
    pub fn from_multiset(vars: &[usize]) -> Self {
        let mut e = vec![0; vars.iter().max().map_or(0, |m| m + 1)];
        for &v in vars {
            e[v] += 1;
        }
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        Monomial((0..n).map(|i| self.exponent(i) + other.exponent(i)).collect())
    }
}

/// A polynomial over ℕ in indeterminates `x_0, x_1, ...`, stored with
/// nonzero coefficients only.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigUint>,
}

impl Poly {
    pub fn constant(c: impl Into<BigUint>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Poly { terms }
    }

    pub fn var(i: usize) -> Self {
        Poly::monomial(Monomial::var(i), BigUint::from(1u32))
    }

    pub fn monomial(m: Monomial, c: BigUint) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigUint> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.exponent(i)).max()
    }

    /// Evaluates in any semiring, reading coefficients as counts.
    pub fn eval<R: Semiring>(&self, point: &[R]) -> Result<R> {
        let mut acc = R::zero();
        for (m, c) in &self.terms {
            if m.exponents().len() > point.len() {
                return Err(Error::ArityMismatch { expected: m.exponents().len(), got: point.len() });
            }
            let coeff = R::from_count(usize::try_from(c).map_err(|_| Error::InvalidAction("coefficient too large".into()))?);
            let mut term = coeff;
            for (i, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    term = term.mul(&point[i]);
                }
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Substitutes `images[i]` for `x_i`.
    pub fn substitute(&self, images: &[Poly]) -> Result<Poly> {
        let mut acc = Poly::zero();
        for (m, c) in &self.terms {
            if m.exponents().len() > images.len() {
                return Err(Error::ArityMismatch { expected: m.exponents().len(), got: images.len() });
            }
            let mut term = Poly::constant(c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    term = term.mul(&images[i]);
                }
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Renders with the given variable names, highest monomial first, in
    /// the form `4*x^2 + x*y + 3`.
    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let mut factors = Vec::new();
                if !c.is_one() || m.degree() == 0 {
                    factors.push(c.to_string());
                }
                for (i, &e) in m.exponents().iter().enumerate() {
                    let name = names.get(i).cloned().unwrap_or_else(|| format!("x{i}"));
                    match e {
                        0 => {}
                        1 => factors.push(name),
                        _ => factors.push(format!("{name}^{e}")),
                    }
                }
                factors.join("*")
            })
            .collect();
        parts.join(" + ")
    }
}

impl Semiring for Poly {
    fn zero() -> Self {
        Poly::default()
    }

    fn one() -> Self {
        Poly::constant(1u32)
    }

    fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            *terms.entry(m.clone()).or_insert_with(BigUint::default) += c;
        }
        Poly { terms }
    }

    fn mul(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<Monomial, BigUint> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                *terms.entry(m1.mul(m2)).or_insert_with(BigUint::default) += c1 * c2;
            }
        }
        Poly { terms }
    }

    fn from_count(n: usize) -> Self {
        Poly::constant(BigUint::from(n))
    }
}

/// Default variable names: `x` for a single variable, `x0, x1, ...`
/// otherwise.
pub fn default_names(arity: usize) -> Vec<String> {
    if arity == 1 {
        vec!["x".into()]
    } else {
        (0..arity).map(|i| format!("x{i}")).collect()
    }
}

/// A tuple of polynomials in `arity` shared indeterminates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolyTuple {
    pub arity: usize,
    pub polys: Vec<Poly>,
}

impl PolyTuple {
    pub fn variables(arity: usize) -> Self {
        PolyTuple { arity, polys: (0..arity).map(Poly::var).collect() }
    }

    /// `self ∘ inner`: substitutes the components of `inner` for the
    /// indeterminates of `self`.
    pub fn substitute(&self, inner: &PolyTuple) -> Result<PolyTuple> {
        if inner.polys.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: inner.polys.len() });
        }
        let polys = self.polys.iter().map(|p| p.substitute(&inner.polys)).collect::<Result<_>>()?;
        Ok(PolyTuple { arity: inner.arity, polys })
    }

    /// Concatenation in disjoint variables.
    pub fn concat(&self, other: &PolyTuple) -> PolyTuple {
        let shift: Vec<Poly> = (0..other.arity).map(|i| Poly::var(i + self.arity)).collect();
        let mut polys = self.polys.clone();
        polys.extend(other.polys.iter().map(|p| p.substitute(&shift).expect("arity matches")));
        PolyTuple { arity: self.arity + other.arity, polys }
    }

    pub fn eval<R: Semiring>(&self, point: &[R]) -> Result<Vec<R>> {
        if point.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: point.len() });
        }
        self.polys.iter().map(|p| p.eval(point)).collect()
    }
}

impl fmt::Display for PolyTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_names(self.arity);
        let parts: Vec<String> = self.polys.iter().map(|p| p.render(&names)).collect();
        if parts.len() == 1 {
            write!(f, "{}", parts[0])
        } else {
            write!(f, "({})", parts.join(", "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_order_is_lexicographic() {
        assert!(Monomial::var(0) > Monomial::var(1));
        assert!(Monomial::one() < Monomial::var(1));
        assert_eq!(Monomial::from_exponents(vec![1, 0, 0]), Monomial::var(0));
        assert_eq!(Monomial::from_multiset(&[1, 0, 1]), Monomial::from_exponents(vec![1, 2]));
    }

    #[test]
    fn arithmetic_and_rendering() {
        let x = Poly::var(0);
        let two_x = x.add(&x);
        let sq = two_x.mul(&two_x);
        assert_eq!(sq.render(&default_names(1)), "4*x^2");
        let p = x.mul(&x).add(&Poly::var(1));
        assert_eq!(p.render(&default_names(2)), "x0^2 + x1");
        assert_eq!(Poly::zero().render(&[]), "0");
        assert_eq!(Poly::one().render(&[]), "1");
        assert_eq!(p.eval(&[BigUint::from(3u32), BigUint::from(4u32)]).unwrap(), BigUint::from(13u32));
    }

    #[test]
    fn substitution() {
        let square = PolyTuple { arity: 1, polys: vec![Poly::var(0).mul(&Poly::var(0))] };
        let double = PolyTuple { arity: 1, polys: vec![Poly::var(0).add(&Poly::var(0))] };
        assert_eq!(square.substitute(&double).unwrap().to_string(), "4*x^2");
        let both = double.concat(&square);
        assert_eq!(both.to_string(), "(2*x0, x1^2)");
    }
}
