//! Exact integer primitives over [`Natural`].
//!
//! All modular results are canonical residues in `[0, modulus)`. The `*_u64`
//! variants and [`WordModulus`] are word-sized fast paths used by the
//! enumeration-bounded operations; they agree with the arbitrary-precision
//! versions on every input they accept.

use crate::{Error, Natural, Result};
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Quotient and remainder of `a / b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivRem {
    pub quotient: Natural,
    pub remainder: Natural,
}

pub fn div_rem(a: &Natural, b: &Natural) -> Result<DivRem> {
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let (quotient, remainder) = a.div_rem(b);
    Ok(DivRem { quotient, remainder })
}

/// Greatest common divisor. `gcd(0, n) = n` for `n > 0`.
pub fn gcd(a: &Natural, b: &Natural) -> Result<Natural> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::GcdUndefined);
    }
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let r = &x % &y;
        x = y;
        y = r;
    }
    Ok(x)
}

/// Extended Euclid: returns `(g, x, y)` with `a*x + b*y = g = gcd(a, b)`.
pub fn ext_gcd(a: &Natural, b: &Natural) -> Result<(Natural, BigInt, BigInt)> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::GcdUndefined);
    }
    let mut r0 = BigInt::from_biguint(Sign::Plus, a.clone());
    let mut r1 = BigInt::from_biguint(Sign::Plus, b.clone());
    let (mut x0, mut x1) = (BigInt::one(), BigInt::zero());
    let (mut y0, mut y1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let x2 = &x0 - &q * &x1;
        x0 = std::mem::replace(&mut x1, x2);
        let y2 = &y0 - &q * &y1;
        y0 = std::mem::replace(&mut y1, y2);
    }
    // r0 is non-negative throughout since both inputs are.
    Ok((r0.magnitude().clone(), x0, y0))
}

/// The unique `d` in `[1, n)` with `a*d ≡ 1 (mod n)`.
pub fn mod_inv(a: &Natural, n: &Natural) -> Result<Natural> {
    if *n < Natural::from(2u32) {
        return Err(Error::Domain(format!("mod_inv requires modulus >= 2, got {n}")));
    }
    let (g, x, _) = ext_gcd(a, n)?;
    if !g.is_one() {
        return Err(Error::NotInvertible { value: a.to_string(), modulus: n.to_string() });
    }
    let n_signed = BigInt::from_biguint(Sign::Plus, n.clone());
    let mut d = x % &n_signed;
    if d.is_negative() {
        d += &n_signed;
    }
    Ok(d.magnitude().clone())
}

/// `base^exp mod modulus` by left-to-right square-and-multiply.
pub fn mod_pow(base: &Natural, exp: &Natural, modulus: &Natural) -> Result<Natural> {
    if modulus.is_zero() {
        return Err(Error::Domain("mod_pow modulus must be >= 1".into()));
    }
    if modulus.is_one() {
        return Ok(Natural::zero());
    }
    let base = base % modulus;
    let mut acc = Natural::one();
    for i in (0..exp.bits()).rev() {
        acc = &acc * &acc % modulus;
        if exp.bit(i) {
            acc = &acc * &base % modulus;
        }
    }
    Ok(acc)
}

/// True iff `n | (a - b)`.
pub fn is_congruent(a: &Natural, b: &Natural, n: &Natural) -> Result<bool> {
    if n.is_zero() {
        return Err(Error::Domain("congruence modulus must be >= 1".into()));
    }
    Ok(a % n == b % n)
}

/// Binary gcd on machine words; `gcd_u64(0, 0) = 0`.
pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

#[inline]
pub fn mul_mod_u64(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

pub fn mod_pow_u64(base: u64, exp: u64, n: u64) -> u64 {
    WordModulus::new(n).pow(base, exp)
}

/// Modular inverse on machine words, `None` when `gcd(a, n) != 1` or `n < 2`.
pub fn mod_inv_u64(a: u64, n: u64) -> Option<u64> {
    if n < 2 {
        return None;
    }
    let (mut r0, mut r1) = (n as i128, (a % n) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(n as i128) as u64)
}

/// A word-sized modulus with a division-free reduction when `n < 2^16`.
///
/// Below `2^16` every product of two residues fits in 32 bits, which lets the
/// reduction use a precomputed 64-bit reciprocal (Lemire's fastmod).
#[derive(Debug, Clone, Copy)]
pub struct WordModulus {
    n: u64,
    reciprocal: Option<u64>,
}

impl WordModulus {
    /// # Panics
    /// If `n == 0`.
    pub fn new(n: u64) -> Self {
        assert!(n > 0, "modulus must be positive");
        let reciprocal = (n > 1 && n < (1 << 16)).then(|| u64::MAX / n + 1);
        WordModulus { n, reciprocal }
    }

    pub fn value(&self) -> u64 {
        self.n
    }

    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        x % self.n
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        match self.reciprocal {
            Some(m) => {
                let x = a * b;
                let low = m.wrapping_mul(x);
                ((low as u128 * self.n as u128) >> 64) as u64
            }
            None => mul_mod_u64(a, b, self.n),
        }
    }

    pub fn pow(&self, base: u64, mut exp: u64) -> u64 {
        if self.n == 1 {
            return 0;
        }
        let mut base = self.reduce(base);
        let mut acc = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }
}
