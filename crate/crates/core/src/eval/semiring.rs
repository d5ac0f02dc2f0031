use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

/// A commutative semiring. Empty sums are `zero()`, empty products `one()`.
pub trait Semiring: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;

    /// `1 + ... + 1` with `n` summands.
    fn from_count(n: usize) -> Self {
        let mut acc = Self::zero();
        let mut base = Self::one();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.add(&base);
            }
            base = base.add(&base);
            n >>= 1;
        }
        acc
    }

    fn sum<'a>(items: impl IntoIterator<Item = &'a Self>) -> Self
    where
        Self: 'a,
    {
        items.into_iter().fold(Self::zero(), |acc, x| acc.add(x))
    }

    fn product<'a>(items: impl IntoIterator<Item = &'a Self>) -> Self
    where
        Self: 'a,
    {
        items.into_iter().fold(Self::one(), |acc, x| acc.mul(x))
    }
}

impl Semiring for BigUint {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn from_count(n: usize) -> Self {
        BigUint::from(n)
    }
}

impl Semiring for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn from_count(n: usize) -> Self {
        BigInt::from(n)
    }
}

impl Semiring for bool {
    fn zero() -> Self {
        false
    }
    fn one() -> Self {
        true
    }
    fn add(&self, other: &Self) -> Self {
        *self || *other
    }
    fn mul(&self, other: &Self) -> Self {
        *self && *other
    }
    fn from_count(n: usize) -> Self {
        n > 0
    }
}

/// The min-plus semiring on integers with `+∞` (represented by `None`) as
/// its zero and `0` as its one.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tropical(pub Option<BigInt>);

impl Tropical {
    pub fn finite(v: impl Into<BigInt>) -> Self {
        Tropical(Some(v.into()))
    }

    pub fn infinity() -> Self {
        Tropical(None)
    }
}

impl fmt::Debug for Tropical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Tropical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "inf"),
        }
    }
}

impl Semiring for Tropical {
    fn zero() -> Self {
        Tropical(None)
    }
    fn one() -> Self {
        Tropical(Some(BigInt::from(0)))
    }
    fn add(&self, other: &Self) -> Self {
        match (&self.0, &other.0) {
            (None, _) => other.clone(),
            (_, None) => self.clone(),
            (Some(a), Some(b)) => Tropical(Some(a.min(b).clone())),
        }
    }
    fn mul(&self, other: &Self) -> Self {
        match (&self.0, &other.0) {
            (Some(a), Some(b)) => Tropical(Some(a + b)),
            _ => Tropical(None),
        }
    }
    fn from_count(n: usize) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            Self::one()
        }
    }
}

/// Spot-checks the commutative semiring axioms on every triple of samples.
pub fn check_semiring_axioms<R: Semiring>(samples: &[R]) -> Result<(), String> {
    let (zero, one) = (R::zero(), R::one());
    for a in samples {
        if a.add(&zero) != *a || a.mul(&one) != *a || a.mul(&zero) != zero {
            return Err(format!("unit or absorption law fails at {a:?}"));
        }
        for b in samples {
            if a.add(b) != b.add(a) || a.mul(b) != b.mul(a) {
                return Err(format!("commutativity fails at {a:?}, {b:?}"));
            }
            for c in samples {
                if a.add(b).add(c) != a.add(&b.add(c)) || a.mul(b).mul(c) != a.mul(&b.mul(c)) {
                    return Err(format!("associativity fails at {a:?}, {b:?}, {c:?}"));
                }
                if a.mul(&b.add(c)) != a.mul(b).add(&a.mul(c)) {
                    return Err(format!("distributivity fails at {a:?}, {b:?}, {c:?}"));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axioms_on_samples() {
        let nat: Vec<BigUint> = (0u32..5).map(BigUint::from).collect();
        check_semiring_axioms(&nat).unwrap();
        let int: Vec<BigInt> = (-3i32..4).map(BigInt::from).collect();
        check_semiring_axioms(&int).unwrap();
        check_semiring_axioms(&[false, true]).unwrap();
        let mut trop: Vec<Tropical> = (-2i32..3).map(Tropical::finite).collect();
        trop.push(Tropical::infinity());
        check_semiring_axioms(&trop).unwrap();
    }

    #[test]
    fn counts() {
        assert_eq!(BigUint::from_count(7), BigUint::from(7u32));
        assert_eq!(<bool as Semiring>::from_count(0), false);
        assert_eq!(Tropical::from_count(5), Tropical::finite(0));
        assert_eq!(Tropical::from_count(0), Tropical::infinity());
    }
}
