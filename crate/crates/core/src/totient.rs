//! Euler's totient, the reduced residue system, and multiplicative order.

use crate::arith::{gcd_u64, mod_pow};
use crate::factor::{factorize, Factorization};
use crate::{EnumerationLimit, Error, Natural, Result};
use num_traits::{One, Zero};

/// The integers in `[1, n]` coprime to `n`, in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiSet {
    pub n: u64,
    pub members: Vec<u64>,
}

/// φ(n) = ∏ p^(a-1) (p - 1) over the prime powers of `n`. φ(1) = 1.
pub fn phi(n: &Natural) -> Result<Natural> {
    if n.is_zero() {
        return Err(Error::Domain("phi(0) is undefined".into()));
    }
    Ok(phi_of(&factorize(n)?))
}

pub fn phi_of(factorization: &Factorization) -> Natural {
    factorization
        .factors()
        .iter()
        .map(|(p, a)| num_traits::pow(p.clone(), (*a - 1) as usize) * (p - 1u32))
        .product()
}

pub fn phi_u64(n: u64) -> Result<u64> {
    let v = phi(&Natural::from(n))?;
    Ok(u64::try_from(&v).expect("phi(n) <= n"))
}

pub fn phi_set(n: u64, limit: EnumerationLimit) -> Result<PhiSet> {
    if n == 0 {
        return Err(Error::Domain("phi_set(0) is undefined".into()));
    }
    limit.check_u64(n)?;
    let members = (1..=n).filter(|&m| gcd_u64(m, n) == 1).collect();
    Ok(PhiSet { n, members })
}

/// Smallest `t >= 1` with `m^t ≡ 1 (mod n)`.
///
/// Searches the divisors of φ(n) in increasing order.
pub fn multiplicative_order(m: &Natural, n: &Natural) -> Result<Natural> {
    if *n < Natural::from(2u32) {
        return Err(Error::Domain(format!("order requires modulus >= 2, got {n}")));
    }
    if !crate::arith::gcd(m, n)?.is_one() {
        return Err(Error::OrderUndefined { value: m.to_string(), modulus: n.to_string() });
    }
    let group_order = phi(n)?;
    let one = Natural::one();
    for t in divisors(&factorize(&group_order)?) {
        if mod_pow(m, &t, n)? == one {
            return Ok(t);
        }
    }
    Err(Error::InternalConsistency(format!(
        "{m}^phi({n}) is not 1 mod {n}"
    )))
}

pub fn multiplicative_order_u64(m: u64, n: u64) -> Result<u64> {
    let t = multiplicative_order(&Natural::from(m), &Natural::from(n))?;
    Ok(u64::try_from(&t).expect("order <= phi(n) <= n"))
}

/// All divisors of the factored number, ascending.
pub fn divisors(factorization: &Factorization) -> Vec<Natural> {
    let mut out = vec![Natural::one()];
    for (p, a) in factorization.factors() {
        let mut next = Vec::with_capacity(out.len() * (*a as usize + 1));
        for d in &out {
            let mut power = d.clone();
            next.push(power.clone());
            for _ in 0..*a {
                power *= p;
                next.push(power.clone());
            }
        }
        out = next;
    }
    out.sort();
    out
}
