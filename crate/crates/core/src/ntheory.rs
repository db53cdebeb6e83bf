//! Number-theoretic groundwork: trial-division factorization, multiplicative
//! orders modulo primes, and the admissibility test for system orders.
//!
//! An order `v` is admissible when `v = 27 (mod 30)` and every prime `p`
//! dividing `v - 2` satisfies `ord_p(-2) = 0 (mod 4)`. Those are exactly the
//! orders the block-set construction in [`crate::construct`] supports.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NtError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("{x} = 0 (mod {p}), so no power of it is 1")]
    NotCoprime { x: i64, p: u64 },
}

/// Prime factorization by trial division, smallest prime first.
///
/// `factorize(1)` is the empty product. Panics if `n == 0`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0, "0 has no prime factorization");
    let mut factors = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            factors.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        factors.push((n, 1));
    }
    factors
}

/// Deterministic primality by trial division; adequate for the word-sized
/// inputs that occur here.
pub fn is_prime(n: u64) -> bool {
    if n < 4 {
        return n > 1;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// `base^exp mod m` with 128-bit intermediates. Panics if `m == 0`.
pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    assert!(m > 0, "modulus must be positive");
    let m = m as u128;
    let mut base = base as u128 % m;
    let mut acc = 1 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc as u64
}

/// The representative of `x` in `0..m`.
pub fn reduce_mod(x: i64, m: u64) -> u64 {
    (x as i128).rem_euclid(m as i128) as u64
}

/// The least `k >= 1` with `x^k = 1 (mod p)`, for `p` prime.
///
/// Starts from `p - 1` and strips prime factors from the exponent while the
/// power stays 1, so the cost is dominated by factoring `p - 1`.
pub fn mult_order(x: i64, p: u64) -> Result<u64, NtError> {
    if !is_prime(p) {
        return Err(NtError::NotPrime(p));
    }
    let x0 = reduce_mod(x, p);
    if x0 == 0 {
        return Err(NtError::NotCoprime { x, p });
    }
    let mut order = p - 1;
    for (q, _) in factorize(p - 1) {
        while order.is_multiple_of(q) && mod_pow(x0, order / q, p) == 1 {
            order /= q;
        }
    }
    Ok(order)
}

/// Whether the odd prime `p` has `ord_p(-2)` divisible by 4.
///
/// Every prime `p = 5 (mod 8)` qualifies and no prime `p = 3, 7 (mod 8)`
/// does; primes `p = 1 (mod 8)` go either way, which is why the order is
/// computed outright instead of read off a congruence.
pub fn in_p(p: u64) -> Result<bool, NtError> {
    if p == 2 || !is_prime(p) {
        return Err(NtError::NotOddPrime(p));
    }
    Ok(mult_order(-2, p)? % 4 == 0)
}

/// Outcome of the order condition at one prime divisor of `v - 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeOrderCheck {
    pub prime: u64,
    pub multiplicity: u32,
    /// `ord_prime(-2)`, or 0 when the prime is 2 and the order is undefined.
    pub order: u64,
    pub ok: bool,
}

/// Full trace of the admissibility test for an order `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub v: u64,
    /// Whether `v = 27 (mod 30)`.
    pub residue_ok: bool,
    /// One entry per distinct prime divisor of `v - 2`; the multiplicities
    /// multiply back to `v - 2`.
    pub prime_orders: Vec<PrimeOrderCheck>,
    pub is_member: bool,
}

impl AdmissibilityReport {
    /// A one-line explanation of the first failing condition, or `None` for
    /// members.
    pub fn failure_reason(&self) -> Option<String> {
        if self.is_member {
            return None;
        }
        if !self.residue_ok {
            return Some(format!("{} mod 30 = {}, expected 27", self.v, self.v % 30));
        }
        let bad = self.prime_orders.iter().find(|c| !c.ok)?;
        Some(format!(
            "ord_{}(-2) = {}, not divisible by 4",
            bad.prime, bad.order
        ))
    }
}

impl fmt::Display for AdmissibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.failure_reason() {
            None => {
                write!(f, "{} is admissible:", self.v)?;
                for c in &self.prime_orders {
                    write!(f, " ord_{}(-2) = {};", c.prime, c.order)?;
                }
                Ok(())
            }
            Some(reason) => write!(f, "{} is not admissible: {}", self.v, reason),
        }
    }
}

/// Tests whether `v` is an admissible order and reports every condition
/// examined along the way.
pub fn in_v(v: u64) -> AdmissibilityReport {
    let residue_ok = v % 30 == 27;
    let mut prime_orders = Vec::new();
    if v >= 3 {
        for (prime, multiplicity) in factorize(v - 2) {
            let (order, ok) = if prime == 2 {
                (0, false)
            } else {
                let o = mult_order(-2, prime).expect("odd prime is coprime to -2");
                (o, o.is_multiple_of(4))
            };
            prime_orders.push(PrimeOrderCheck {
                prime,
                multiplicity,
                order,
                ok,
            });
        }
    }
    let is_member = residue_ok && v >= 3 && prime_orders.iter().all(|c| c.ok);
    AdmissibilityReport {
        v,
        residue_ok,
        prime_orders,
        is_member,
    }
}

/// All admissible orders up to and including `bound`, ascending.
pub fn enumerate_v(bound: u64) -> Vec<u64> {
    (27..=bound)
        .step_by(30)
        .filter(|&v| in_v(v).is_member)
        .collect()
}
