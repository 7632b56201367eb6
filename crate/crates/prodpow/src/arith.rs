//! Exact arbitrary-precision positive-integer primitives.
//!
//! Everything in this crate works over positive integers only, so the core
//! type [`Nat`] rejects zero at every construction site. The operations
//! here are the complete arithmetic basis for the rest of the crate: gcd,
//! prime-support extraction by iterated gcd (no factorization), exact n-th
//! roots, guarded divisor enumeration, and gcd-free (pairwise coprime)
//! bases.
//!
//! Two divisibility facts are used throughout and are worth stating once.
//! The first is the standard Euclid lemma: if `gcd(a, b) = 1` and
//! `a | b*c`, then `a | c`. (The weaker statement "if `a*b | c` then
//! `a | c`" is also true but is never strong enough for the constructions
//! below; the splits all rest on the standard form.) The second: if
//! `a^n | b^n` then `a | b`, which is what makes n-th roots of exact powers
//! unambiguous.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Mul;
use core::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::Error;

/// Divisor enumeration refuses values above this bound unless the caller
/// supplies its own guard. Only the brute-force audit oracle enumerates
/// divisors, always at desk scale.
pub const DEFAULT_DIVISOR_GUARD: u64 = 100_000_000;

/// An arbitrary-precision **positive** integer (value >= 1).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Nat(BigUint);

impl Nat {
    /// Wraps a big integer, rejecting zero.
    pub fn new(value: BigUint) -> Result<Self, Error> {
        if value.is_zero() {
            Err(Error::ZeroValue)
        } else {
            Ok(Nat(value))
        }
    }

    pub fn from_u64(value: u64) -> Result<Self, Error> {
        Self::new(BigUint::from(value))
    }

    pub fn one() -> Self {
        Nat(BigUint::one())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    pub fn bits(&self) -> u64 {
        self.0.bits()
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    pub fn pow(&self, exp: u32) -> Nat {
        if exp == 0 {
            return Nat::one();
        }
        Nat(self.0.pow(exp))
    }

    pub fn gcd(&self, other: &Nat) -> Nat {
        Nat(self.0.gcd(&other.0))
    }

    pub fn is_coprime(&self, other: &Nat) -> bool {
        self.gcd(other).is_one()
    }

    pub fn divides(&self, other: &Nat) -> bool {
        other.0.is_multiple_of(&self.0)
    }

    /// Exact division; `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Nat) -> Option<Nat> {
        let (q, r) = self.0.div_rem(&divisor.0);
        if r.is_zero() {
            Some(Nat(q))
        } else {
            None
        }
    }

    /// Largest `e` with `base^e | self`, together with `self / base^e`.
    /// `base` must be > 1.
    pub fn valuation(&self, base: &Nat) -> (u32, Nat) {
        debug_assert!(!base.is_one());
        let mut e = 0u32;
        let mut rest = self.clone();
        while let Some(q) = rest.div_exact(base) {
            rest = q;
            e += 1;
        }
        (e, rest)
    }
}

impl Mul<&Nat> for &Nat {
    type Output = Nat;
    fn mul(self, rhs: &Nat) -> Nat {
        Nat(&self.0 * &rhs.0)
    }
}

impl fmt::Display for Nat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Nat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Nat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let v = BigUint::from_str(s).map_err(|_| Error::ZeroValue)?;
        Nat::new(v)
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for Nat {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        // Decimal strings sidestep any word-size limit in the format.
        serializer.serialize_str(&self.0.to_str_radix(10))
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for Nat {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = <String as serde::Deserialize>::deserialize(deserializer)?;
        s.parse::<Nat>()
            .map_err(|_| serde::de::Error::custom("expected a positive integer in decimal"))
    }
}

/// Greatest common divisor of two positive integers.
///
/// With `g = gcd(a, b)` the quotients `a/g` and `b/g` are coprime.
pub fn gcd(a: &Nat, b: &Nat) -> Nat {
    a.gcd(b)
}

/// The split of `gamma` into the part supported on the primes of `alpha`
/// and the part coprime to `alpha`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportSplit {
    /// Largest divisor of `gamma` whose prime support divides `alpha`.
    pub in_part: Nat,
    /// The complementary factor, coprime to `alpha`.
    pub out_part: Nat,
}

/// Splits `gamma = in_part * out_part` with every prime of `in_part`
/// dividing `alpha`, `in_part` carrying its primes at full multiplicity,
/// and `gcd(out_part, alpha) = 1`.
///
/// Runs by iterated gcd squaring (`g <- gcd(gamma, g*g)` until stable), so
/// it never factorizes anything and stays polynomial in the bit length.
pub fn support_part(gamma: &Nat, alpha: &Nat) -> SupportSplit {
    let mut g = gamma.gcd(alpha);
    if g.is_one() {
        return SupportSplit {
            in_part: Nat::one(),
            out_part: gamma.clone(),
        };
    }
    loop {
        let squared = &g * &g;
        let next = gamma.gcd(&squared);
        if next == g {
            break;
        }
        g = next;
    }
    let out = gamma
        .div_exact(&g)
        .expect("support part divides its input by construction");
    SupportSplit {
        in_part: g,
        out_part: out,
    }
}

/// Exact n-th root: `Some(r)` with `r^n = z` when `z` is a perfect n-th
/// power, `None` otherwise. `n` must be >= 1.
pub fn nth_root_exact(z: &Nat, n: u32) -> Option<Nat> {
    assert!(n >= 1, "root index must be positive");
    if z.is_one() {
        return Some(Nat::one());
    }
    let r = z.as_biguint().nth_root(n);
    if r.pow(n) == *z.as_biguint() {
        Some(Nat(r))
    } else {
        None
    }
}

/// All positive divisors of `z` in increasing order, using the default
/// guard bound.
pub fn divisors(z: &Nat) -> Result<Vec<Nat>, Error> {
    divisors_with_guard(z, DEFAULT_DIVISOR_GUARD)
}

/// All positive divisors of `z` in increasing order. Errors when `z`
/// exceeds `guard` — divisor enumeration is trial division and is only
/// meant for desk-scale audit work.
pub fn divisors_with_guard(z: &Nat, guard: u64) -> Result<Vec<Nat>, Error> {
    let v = match z.to_u64() {
        Some(v) if v <= guard => v,
        _ => return Err(Error::GuardExceeded { bound: guard }),
    };
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d.saturating_mul(d) <= v {
        if v % d == 0 {
            small.push(d);
            if d != v / d {
                large.push(v / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Ok(small
        .into_iter()
        .map(|d| Nat::from_u64(d).expect("divisor of a positive integer is positive"))
        .collect())
}

/// A gcd-free basis for `inputs`: a list of pairwise coprime integers > 1
/// such that every input is exactly a product of powers of basis elements.
///
/// This is factor refinement; it needs only gcd and exact division, never
/// factorization, and it is what lets the recovery procedures reason
/// "per prime" without ever seeing a prime.
pub fn coprime_basis(inputs: &[Nat]) -> Vec<Nat> {
    let mut work: Vec<Nat> = inputs.iter().filter(|v| !v.is_one()).cloned().collect();
    let mut basis: Vec<Nat> = Vec::new();
    'outer: while let Some(candidate) = work.pop() {
        let mut v = candidate;
        if v.is_one() {
            continue;
        }
        let mut i = 0;
        while i < basis.len() {
            let g = v.gcd(&basis[i]);
            if g.is_one() {
                i += 1;
                continue;
            }
            if g == basis[i] {
                // The basis element wholly divides v: strip it and keep
                // scanning against the same element (v may contain it to a
                // higher power).
                v = v.div_exact(&g).expect("gcd divides");
                if v.is_one() {
                    continue 'outer;
                }
                continue;
            }
            // Proper overlap: refine the basis element and retry both parts.
            let b = basis.swap_remove(i);
            let b_rest = b.div_exact(&g).expect("gcd divides");
            if !b_rest.is_one() {
                work.push(b_rest);
            }
            work.push(g);
            work.push(v);
            continue 'outer;
        }
        basis.push(v);
    }
    basis.sort();
    basis
}

/// Exponent vector of `value` over a gcd-free `basis` produced by
/// [`coprime_basis`] on a set of inputs containing `value`. Errors if the
/// value does not factor completely — that would indicate a defect in the
/// basis construction, not bad input.
pub fn factor_over_basis(value: &Nat, basis: &[Nat]) -> Result<Vec<u32>, Error> {
    let mut exps = Vec::with_capacity(basis.len());
    let mut rest = value.clone();
    for b in basis {
        let (e, r) = rest.valuation(b);
        exps.push(e);
        rest = r;
    }
    if rest.is_one() {
        Ok(exps)
    } else {
        Err(Error::Defect("value does not factor over the coprime basis"))
    }
}
