//! Arithmetic in the ambient group `G = Z5 x Zp1 x ... x Zpt`.
//!
//! All operations live on [`GroupSpec`]; a [`GroupElement`] is just a tuple
//! of reduced coordinates and is only meaningful relative to the spec that
//! produced it. Because every component has odd prime order, `G` has no
//! 2- or 3-torsion beyond what the primes provide, and the maps `g -> -2g`
//! and `g -> -g/2` are mutually inverse bijections.
//!
//! Points are numbered by mixed radix with the `Z5` coordinate most
//! significant, so the subgroup `Z5 x {0}` is exactly the indices divisible
//! by `|H|` where `H = Zp1 x ... x Zpt`.

use std::fmt;

use thiserror::Error;

use crate::ntheory::{self, AdmissibilityReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("component list must start with 5, got {0:?}")]
    FirstComponentNotFive(Option<u64>),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("component 3 would introduce 3-torsion, which the construction cannot tolerate")]
    ThreeTorsion,
    #[error("index {index} out of range for a group of order {order}")]
    IndexOutOfRange { index: u64, order: u64 },
    #[error("denominator {den} is not invertible modulo {prime}")]
    NonInvertibleDenominator { den: i64, prime: u64 },
    #[error("{report}")]
    Inadmissible { report: AdmissibilityReport },
}

/// An element of `G`, stored as one reduced coordinate per component.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement {
    coords: Vec<u64>,
}

impl GroupElement {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A scalar `num/den` acting coordinatewise; `den` must be invertible modulo
/// every component prime for the action to be defined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RationalScalar {
    pub num: i64,
    pub den: i64,
}

impl RationalScalar {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "scalar denominator must be nonzero");
        RationalScalar { num, den }
    }

    pub const fn integer(num: i64) -> Self {
        RationalScalar { num, den: 1 }
    }
}

impl fmt::Display for RationalScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// The shape of `G`: component primes `[5, p1, ..., pt]` with the tail
/// sorted ascending and kept with multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    primes: Vec<u64>,
    order: u64,
}

impl GroupSpec {
    /// Builds a spec from component primes. The first component must be 5;
    /// the rest must be odd primes other than 3 and are sorted ascending.
    pub fn new(primes: &[u64]) -> Result<Self, GroupError> {
        match primes.first() {
            Some(5) => {}
            other => return Err(GroupError::FirstComponentNotFive(other.copied())),
        }
        let mut primes = primes.to_vec();
        for &p in &primes[1..] {
            if p == 3 {
                return Err(GroupError::ThreeTorsion);
            }
            if p == 2 || !ntheory::is_prime(p) {
                return Err(GroupError::NotOddPrime(p));
            }
        }
        primes[1..].sort_unstable();
        let order = primes.iter().product();
        Ok(GroupSpec { primes, order })
    }

    /// Builds the spec for an admissible order `v`, with `|G| = v - 2` and
    /// the tail components the prime factors of `(v - 2) / 5`. Refuses
    /// inadmissible `v` and reports every failed condition.
    pub fn from_order(v: u64) -> Result<Self, GroupError> {
        let report = ntheory::in_v(v);
        if !report.is_member {
            return Err(GroupError::Inadmissible { report });
        }
        let mut primes = vec![5];
        for (p, e) in ntheory::factorize((v - 2) / 5) {
            primes.extend(std::iter::repeat_n(p, e as usize));
        }
        GroupSpec::new(&primes)
    }

    /// Component primes, `Z5` first.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// `|G|`, the product of the component primes.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// `|H|` for the complement `H` of the `Z5` component.
    pub fn h_order(&self) -> u64 {
        self.order / 5
    }

    /// The system order served by this group: `|G| + 2`.
    pub fn v(&self) -> u64 {
        self.order + 2
    }

    /// Point index of the first extra point.
    pub fn inf1_index(&self) -> u64 {
        self.order
    }

    /// Point index of the second extra point.
    pub fn inf2_index(&self) -> u64 {
        self.order + 1
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            coords: vec![0; self.primes.len()],
        }
    }

    /// Wraps raw coordinates, reducing each into its component's range.
    /// Panics if the coordinate count does not match the spec.
    pub fn element(&self, coords: &[i64]) -> GroupElement {
        assert_eq!(
            coords.len(),
            self.primes.len(),
            "coordinate count does not match group spec"
        );
        GroupElement {
            coords: coords
                .iter()
                .zip(&self.primes)
                .map(|(&c, &p)| ntheory::reduce_mod(c, p))
                .collect(),
        }
    }

    fn check(&self, g: &GroupElement) {
        assert_eq!(
            g.coords.len(),
            self.primes.len(),
            "element does not belong to this group spec"
        );
        debug_assert!(g.coords.iter().zip(&self.primes).all(|(&c, &p)| c < p));
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.check(a);
        self.check(b);
        GroupElement {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .zip(&self.primes)
                .map(|((&x, &y), &p)| (x + y) % p)
                .collect(),
        }
    }

    pub fn neg(&self, g: &GroupElement) -> GroupElement {
        self.check(g);
        GroupElement {
            coords: g
                .coords
                .iter()
                .zip(&self.primes)
                .map(|(&x, &p)| (p - x) % p)
                .collect(),
        }
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.add(a, &self.neg(b))
    }

    /// Coordinatewise action of `m = num/den`: multiplies by `num` and by the
    /// inverse of `den` in each component field. Fails when `den` shares a
    /// factor with some component prime.
    pub fn scalar_mul(
        &self,
        m: RationalScalar,
        g: &GroupElement,
    ) -> Result<GroupElement, GroupError> {
        self.check(g);
        let mut coords = Vec::with_capacity(g.coords.len());
        for (&x, &p) in g.coords.iter().zip(&self.primes) {
            let den = ntheory::reduce_mod(m.den, p);
            if den == 0 {
                return Err(GroupError::NonInvertibleDenominator {
                    den: m.den,
                    prime: p,
                });
            }
            let num = ntheory::reduce_mod(m.num, p);
            let inv = ntheory::mod_pow(den, p - 2, p);
            coords.push(num * inv % p * x % p);
        }
        Ok(GroupElement { coords })
    }

    /// `-2g`; always defined.
    pub fn double_neg(&self, g: &GroupElement) -> GroupElement {
        self.scalar_mul(RationalScalar::integer(-2), g)
            .expect("integer scalar")
    }

    /// `-g/2`, the inverse of [`GroupSpec::double_neg`]; defined because every
    /// component prime is odd.
    pub fn half_neg(&self, g: &GroupElement) -> GroupElement {
        self.scalar_mul(RationalScalar::new(-1, 2), g)
            .expect("2 is invertible modulo odd primes")
    }

    /// Mixed-radix point index with the `Z5` coordinate most significant.
    pub fn to_index(&self, g: &GroupElement) -> u64 {
        self.check(g);
        g.coords
            .iter()
            .zip(&self.primes)
            .fold(0, |acc, (&c, &p)| acc * p + c)
    }

    /// Inverse of [`GroupSpec::to_index`] on `0..order`.
    pub fn from_index(&self, index: u64) -> Result<GroupElement, GroupError> {
        if index >= self.order {
            return Err(GroupError::IndexOutOfRange {
                index,
                order: self.order,
            });
        }
        let mut coords = vec![0; self.primes.len()];
        let mut rest = index;
        for (slot, &p) in coords.iter_mut().zip(&self.primes).rev() {
            *slot = rest % p;
            rest /= p;
        }
        Ok(GroupElement { coords })
    }

    /// Index of the `H`-part of `g` (the coordinates after the first) in
    /// `0..h_order`.
    pub fn h_index(&self, g: &GroupElement) -> u64 {
        self.check(g);
        g.coords[1..]
            .iter()
            .zip(&self.primes[1..])
            .fold(0, |acc, (&c, &p)| acc * p + c)
    }

    /// The element of `{0} x H` with the given `H`-index.
    pub fn from_h_index(&self, h_index: u64) -> Result<GroupElement, GroupError> {
        if h_index >= self.h_order() {
            return Err(GroupError::IndexOutOfRange {
                index: h_index,
                order: self.h_order(),
            });
        }
        self.from_index(h_index)
    }

    /// Whether `g` lies in the subgroup `Z5 x {0}`.
    pub fn in_base_subgroup(&self, g: &GroupElement) -> bool {
        self.h_index(g) == 0
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order).map(|i| self.from_index(i).expect("index in range"))
    }

    /// The edge of weight `w` in the deficiency graph, as the sorted index
    /// pair `{-w, 2w}`. Undefined (panics) for `w = 0`.
    pub fn x_edge(&self, w: &GroupElement) -> (u64, u64) {
        let a = self.to_index(&self.neg(w));
        let b = self.to_index(&self.double_neg(&self.neg(w)));
        assert!(a != b, "zero weight has no edge");
        (a.min(b), a.max(b))
    }

    /// Cycles of the deficiency graph, each listed as its weight sequence
    /// `w, -2w, 4w, ...` starting from the least-index weight not yet seen.
    /// Consecutive edges share an endpoint because the edge of weight `w`
    /// is `{-w, 2w}` and `2w` is also an endpoint of the edge of weight
    /// `-2w`. The union of the cycle vertex sets is `G \ {0}`.
    pub fn cycles_of_x(&self) -> Vec<Vec<GroupElement>> {
        let mut seen = vec![false; self.order as usize];
        seen[0] = true;
        let mut cycles = Vec::new();
        for start in 1..self.order {
            if seen[start as usize] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut w = self.from_index(start).expect("index in range");
            loop {
                seen[self.to_index(&w) as usize] = true;
                cycle.push(w.clone());
                w = self.double_neg(&w);
                if self.to_index(&w) == start {
                    break;
                }
            }
            cycles.push(cycle);
        }
        cycles
    }
}
