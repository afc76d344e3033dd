//! The Φ-set of `N`: every `m` in `[1, N]` such that `P = gcd(m, N)` and
//! `Q = N / P` are coprime.
//!
//! Membership can be decided one prime power at a time. For each `p^a ∥ N`
//! the number `m` must either avoid `p` entirely or absorb the full `p^a`;
//! anything in between leaves `p` in both `P` and `Q`. Counting residues mod
//! `p^a` that satisfy this gives `p^a - p^(a-1) + 1`, and the count for `N` is
//! the product of those terms over its coprime prime powers.

use crate::arith::gcd_u64;
use crate::factor::{factorize, Factorization};
use crate::{EnumerationLimit, Error, Natural, Result};
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

/// Chunk size for the parallel enumeration of `[1, n]`.
const ENUMERATION_CHUNK: u64 = 1 << 14;

/// The decomposition `N = P * Q` behind a membership decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiMembershipWitness {
    pub m: Natural,
    pub n: Natural,
    /// `P = gcd(m, n)`
    pub p_part: Natural,
    /// `Q = n / P`
    pub q_part: Natural,
    pub is_member: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigPhiSet {
    pub n: u64,
    pub members: Vec<u64>,
}

pub fn phi_membership(m: &Natural, n: &Natural) -> Result<PhiMembershipWitness> {
    if n.is_zero() || m.is_zero() || m > n {
        return Err(Error::Domain(format!("membership requires 1 <= m <= n, got m = {m}, n = {n}")));
    }
    let p_part = m.gcd(n);
    let q_part = n / &p_part;
    let is_member = p_part.gcd(&q_part).is_one();
    Ok(PhiMembershipWitness { m: m.clone(), n: n.clone(), p_part, q_part, is_member })
}

/// Word-sized membership test straight from the definition.
#[inline]
pub fn is_member_u64(m: u64, n: u64) -> bool {
    let p = gcd_u64(m, n);
    gcd_u64(p, n / p) == 1
}

/// Enumerates the Φ-set by testing every `m` in `[1, n]` against the definition.
///
/// The range is split into chunks that may run in parallel; the result is
/// ordered regardless of how the work was scheduled.
pub fn big_phi_set(n: u64, limit: EnumerationLimit) -> Result<BigPhiSet> {
    if n == 0 {
        return Err(Error::Domain("big_phi_set(0) is undefined".into()));
    }
    limit.check_u64(n)?;
    let chunks = n.div_ceil(ENUMERATION_CHUNK);
    let members = (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let lo = c * ENUMERATION_CHUNK + 1;
            let hi = ((c + 1) * ENUMERATION_CHUNK).min(n);
            (lo..=hi).filter(move |&m| is_member_u64(m, n))
        })
        .collect();
    Ok(BigPhiSet { n, members })
}

/// Φ(n) from the factorization of `n`, without enumerating.
pub fn big_phi_count(n: &Natural) -> Result<Natural> {
    if n.is_zero() {
        return Err(Error::Domain("big_phi_count(0) is undefined".into()));
    }
    Ok(big_phi_count_of(&factorize(n)?))
}

pub fn big_phi_count_of(factorization: &Factorization) -> Natural {
    factorization
        .factors()
        .iter()
        .map(|(p, a)| {
            let upper = num_traits::pow(p.clone(), *a as usize);
            let lower = num_traits::pow(p.clone(), (*a - 1) as usize);
            upper - lower + 1u32
        })
        .product()
}

pub fn big_phi_count_u64(n: u64) -> Result<u64> {
    let v = big_phi_count(&Natural::from(n))?;
    Ok(u64::try_from(&v).expect("Phi(n) <= n"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::factorize_u64;
    use crate::totient::phi_set;

    fn nat(v: u64) -> Natural {
        Natural::from(v)
    }

    /// Definitional count: scan `[1, n]` and apply the gcd condition directly.
    fn brute_count(n: u64) -> u64 {
        (1..=n)
            .filter(|&m| {
                let p = gcd_u64(m, n);
                gcd_u64(p, n / p) == 1
            })
            .count() as u64
    }

    #[test]
    fn membership_examples() {
        let w = phi_membership(&nat(2), &nat(20)).unwrap();
        assert_eq!((w.p_part, w.q_part, w.is_member), (nat(2), nat(10), false));
        let w = phi_membership(&nat(20), &nat(20)).unwrap();
        assert_eq!((w.p_part, w.q_part, w.is_member), (nat(20), nat(1), true));
        let w = phi_membership(&nat(4), &nat(20)).unwrap();
        assert_eq!((w.p_part, w.q_part, w.is_member), (nat(4), nat(5), true));
        assert!(phi_membership(&nat(0), &nat(20)).is_err());
        assert!(phi_membership(&nat(21), &nat(20)).is_err());
    }

    #[test]
    fn enumeration_examples() {
        let limit = EnumerationLimit::default();
        assert_eq!(big_phi_set(10, limit).unwrap().members, (1..=10).collect::<Vec<_>>());
        assert_eq!(
            big_phi_set(20, limit).unwrap().members,
            vec![1, 3, 4, 5, 7, 8, 9, 11, 12, 13, 15, 16, 17, 19, 20]
        );
        assert_eq!(big_phi_set(1, limit).unwrap().members, vec![1]);
        assert!(matches!(big_phi_set(11, EnumerationLimit(10)), Err(Error::Capacity { .. })));
    }

    #[test]
    fn count_examples() {
        assert_eq!(big_phi_count_u64(10).unwrap(), 10);
        assert_eq!(big_phi_count_u64(20).unwrap(), 15);
        assert_eq!(big_phi_count_u64(1).unwrap(), 1);
        assert!(big_phi_count(&Natural::zero()).is_err());
    }

    #[test]
    fn enumeration_spans_chunks_in_order() {
        let n = 3 * ENUMERATION_CHUNK + 17;
        let set = big_phi_set(n, EnumerationLimit::default()).unwrap();
        assert!(set.members.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(set.members.len() as u64, brute_count(n));
        assert_eq!(set.members.len() as u64, big_phi_count_u64(n).unwrap());
    }

    #[test]
    fn witness_invariants() {
        for n in 1..=2000u64 {
            for m in 1..=n {
                let w = phi_membership(&nat(m), &nat(n)).unwrap();
                assert_eq!(&w.p_part * &w.q_part, nat(n));
                assert!((nat(m) % &w.p_part).is_zero());
                assert_eq!(w.is_member, w.p_part.gcd(&w.q_part).is_one());
                assert_eq!(w.is_member, is_member_u64(m, n));
                if w.is_member {
                    assert!(nat(m).gcd(&w.q_part).is_one(), "m = {m}, n = {n}");
                }
            }
        }
    }

    #[test]
    fn superset_totality_and_strictness() {
        let limit = EnumerationLimit::default();
        for n in 1..=5000u64 {
            let small = phi_set(n, limit).unwrap().members;
            let big = big_phi_set(n, limit).unwrap().members;
            assert!(small.iter().all(|m| big.binary_search(m).is_ok()), "{n}");
            let count = big_phi_count_u64(n).unwrap();
            assert_eq!(count, big.len() as u64);
            if factorize_u64(n).unwrap().is_squarefree() {
                assert_eq!(big, (1..=n).collect::<Vec<_>>());
            } else {
                assert!(count < n, "{n}");
            }
        }
    }

    #[test]
    fn fast_count_matches_definition_on_prime_powers() {
        for (p, a) in [(2u64, 1u32), (2, 5), (3, 4), (5, 3), (7, 2), (11, 3), (101, 2)] {
            let n = p.pow(a);
            assert_eq!(big_phi_count_u64(n).unwrap(), brute_count(n), "{p}^{a}");
        }
    }

    #[test]
    fn fast_count_handles_large_inputs() {
        // (2^64 - 1) is squarefree, so every residue belongs.
        let n = Natural::from(u64::MAX);
        assert_eq!(big_phi_count(&n).unwrap(), n);
        // 2^100: 2^100 - 2^99 + 1.
        let n = Natural::one() << 100;
        assert_eq!(big_phi_count(&n).unwrap(), (Natural::one() << 99) + 1u32);
    }
}
