//! Exact field arithmetic over the rationals and over GF(p) for odd primes p.
//!
//! Rationals are arbitrary-precision fractions kept in lowest terms with a
//! positive denominator, so equality is structural. GF(p) values are residues
//! in `[0, p)`. There is no floating point anywhere in this crate.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Which field the computation runs in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    /// GF(p) with p an odd prime (p = 2 is rejected at construction).
    Prime(u64),
}

impl FieldSpec {
    pub fn rationals() -> Self {
        FieldSpec::Rationals
    }

    pub fn prime(p: u64) -> Result<Self> {
        if p < 3 || p % 2 == 0 || !is_prime_u64(p) {
            return Err(Error::InvalidModulus(p));
        }
        Ok(FieldSpec::Prime(p))
    }

    pub fn zero(&self) -> FieldElement {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldElement {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> FieldElement {
        match *self {
            FieldSpec::Rationals => FieldElement::Rational(BigRational::from_integer(v.into())),
            FieldSpec::Prime(p) => {
                let r = v.rem_euclid(p as i64) as u64;
                FieldElement::Prime { modulus: p, value: r }
            }
        }
    }

    /// Parses the text encoding: rationals as `num/den` or `n`, prime-field
    /// values as a decimal residue (a leading minus sign is accepted and
    /// reduced).
    pub fn parse(&self, s: &str) -> Result<FieldElement> {
        let s = s.trim();
        match *self {
            FieldSpec::Rationals => {
                let (num, den) = match s.split_once('/') {
                    Some((a, b)) => (a, Some(b)),
                    None => (s, None),
                };
                let n: BigInt = num.parse().map_err(|_| Error::BadElement(s.to_string()))?;
                let d: BigInt = match den {
                    Some(b) => b.parse().map_err(|_| Error::BadElement(s.to_string()))?,
                    None => BigInt::one(),
                };
                if d.is_zero() {
                    return Err(Error::BadElement(s.to_string()));
                }
                Ok(FieldElement::Rational(BigRational::new(n, d)))
            }
            FieldSpec::Prime(p) => {
                let (neg, digits) = match s.strip_prefix('-') {
                    Some(rest) => (true, rest),
                    None => (false, s),
                };
                let v: u128 = digits.parse().map_err(|_| Error::BadElement(s.to_string()))?;
                let mut r = (v % p as u128) as u64;
                if neg && r != 0 {
                    r = p - r;
                }
                Ok(FieldElement::Prime { modulus: p, value: r })
            }
        }
    }
}

/// A single exact field value. Immutable; all operations are pure.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldElement {
    Rational(BigRational),
    Prime { modulus: u64, value: u64 },
}

impl FieldElement {
    pub fn spec(&self) -> FieldSpec {
        match self {
            FieldElement::Rational(_) => FieldSpec::Rationals,
            FieldElement::Prime { modulus, .. } => FieldSpec::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Rational(r) => r.is_zero(),
            FieldElement::Prime { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElement::Rational(r) => r.is_one(),
            FieldElement::Prime { value, .. } => *value == 1,
        }
    }

    pub fn checked_add(&self, rhs: &FieldElement) -> Result<FieldElement> {
        match (self, rhs) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => {
                Ok(FieldElement::Rational(a + b))
            }
            (
                FieldElement::Prime { modulus: p, value: a },
                FieldElement::Prime { modulus: q, value: b },
            ) if p == q => Ok(FieldElement::Prime {
                modulus: *p,
                value: add_mod(*a, *b, *p),
            }),
            _ => Err(Error::SpecMismatch),
        }
    }

    pub fn checked_sub(&self, rhs: &FieldElement) -> Result<FieldElement> {
        self.checked_add(&rhs.clone().neg())
    }

    pub fn checked_mul(&self, rhs: &FieldElement) -> Result<FieldElement> {
        match (self, rhs) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => {
                Ok(FieldElement::Rational(a * b))
            }
            (
                FieldElement::Prime { modulus: p, value: a },
                FieldElement::Prime { modulus: q, value: b },
            ) if p == q => Ok(FieldElement::Prime {
                modulus: *p,
                value: mul_mod(*a, *b, *p),
            }),
            _ => Err(Error::SpecMismatch),
        }
    }

    pub fn checked_div(&self, rhs: &FieldElement) -> Result<FieldElement> {
        if rhs.spec() != self.spec() {
            return Err(Error::SpecMismatch);
        }
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        self.checked_mul(&rhs.inverse()?)
    }

    /// Multiplicative inverse of a nonzero element.
    pub fn inverse(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match self {
            FieldElement::Rational(r) => Ok(FieldElement::Rational(r.recip())),
            FieldElement::Prime { modulus: p, value: v } => Ok(FieldElement::Prime {
                modulus: *p,
                value: pow_mod(*v, *p - 2, *p),
            }),
        }
    }

    /// All square roots of the element, in ascending order (rationals by
    /// value, GF(p) by residue). Empty means non-square; zero yields `[0]`.
    pub fn sqrt(&self) -> Vec<FieldElement> {
        match self {
            FieldElement::Rational(r) => {
                if r.is_zero() {
                    return vec![self.clone()];
                }
                if r.is_negative() {
                    return vec![];
                }
                let n = r.numer();
                let d = r.denom();
                let sn = n.sqrt();
                let sd = d.sqrt();
                if &(&sn * &sn) != n || &(&sd * &sd) != d {
                    return vec![];
                }
                let root = BigRational::new(sn, sd);
                vec![
                    FieldElement::Rational(-root.clone()),
                    FieldElement::Rational(root),
                ]
            }
            FieldElement::Prime { modulus: p, value: v } => {
                if *v == 0 {
                    return vec![self.clone()];
                }
                match sqrt_mod(*v, *p) {
                    None => vec![],
                    Some(r) => {
                        let (lo, hi) = (r.min(*p - r), r.max(*p - r));
                        vec![
                            FieldElement::Prime { modulus: *p, value: lo },
                            FieldElement::Prime { modulus: *p, value: hi },
                        ]
                    }
                }
            }
        }
    }

    /// The canonical square root used to fix gauges: the positive root over
    /// the rationals, the smaller residue over GF(p).
    pub fn canonical_sqrt(&self) -> Option<FieldElement> {
        let roots = self.sqrt();
        match self {
            FieldElement::Rational(_) => roots.into_iter().last(),
            FieldElement::Prime { .. } => roots.into_iter().next(),
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).expect("field operation")
            }
        }
        impl $trait for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$checked(&rhs).expect("field operation")
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        match self {
            FieldElement::Rational(r) => FieldElement::Rational(-r),
            FieldElement::Prime { modulus, value } => FieldElement::Prime {
                modulus,
                value: if value == 0 { 0 } else { modulus - value },
            },
        }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.clone().neg()
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            FieldElement::Prime { value, .. } => write!(f, "{value}"),
        }
    }
}

fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = (a as u128 + b as u128) % p as u128;
    s as u64
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for u64.
pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// One square root of `a` mod the odd prime `p`, or `None` for non-residues.
/// Exhaustive scan for p < 2^16, Tonelli-Shanks above.
fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    debug_assert!(a > 0 && a < p);
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p < (1 << 16) {
        return (1..p).find(|&r| mul_mod(r, r, p) == a);
    }
    // Tonelli-Shanks. p-1 = q * 2^s with q odd.
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)?;
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0u32;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
            if i == m {
                return None;
            }
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}
