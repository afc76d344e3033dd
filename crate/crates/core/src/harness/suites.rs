//! Exhaustive invariant suites over bounded ranges.
//!
//! Each suite has a natural range; [`verify_theorem_suite`] caps every range
//! at the caller's `n_max`, so small values give quick smoke runs and an
//! `n_max` of 5000 or more runs every suite at full range.

use crate::arith::{gcd_u64, mod_inv_u64, mod_pow_u64, WordModulus};
use crate::big_phi::{big_phi_count_u64, big_phi_set, is_member_u64};
use crate::factor::{factorize_u64, is_prime_u64};
use crate::rsa::make_keypair;
use crate::totient::{multiplicative_order_u64, phi_set, phi_u64};
use crate::{EnumerationLimit, Natural, Result};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    DivRem,
    DivisorProduct,
    CoprimeDivisors,
    GcdSubmultiplicative,
    GcdMultiplicative,
    CongruenceSplit,
    ModInverse,
    ModPow,
    Reconstruction,
    TotientOfPrime,
    TotientFormula,
    TotientDistinctPrimes,
    TotientMultiplicative,
    Euler,
    OrderDividesPhi,
    BigPhiSuperset,
    SquarefreeTotality,
    NonSquarefreeStrict,
    FastCount,
    MemberCoprimeToQ,
    Sufficiency,
    SquarefreeCorrectness,
    PerFactorCongruence,
    ExponentIdentity,
    EncryptionInjective,
}

impl Suite {
    pub const ALL: [Suite; 25] = [
        Suite::DivRem,
        Suite::DivisorProduct,
        Suite::CoprimeDivisors,
        Suite::GcdSubmultiplicative,
        Suite::GcdMultiplicative,
        Suite::CongruenceSplit,
        Suite::ModInverse,
        Suite::ModPow,
        Suite::Reconstruction,
        Suite::TotientOfPrime,
        Suite::TotientFormula,
        Suite::TotientDistinctPrimes,
        Suite::TotientMultiplicative,
        Suite::Euler,
        Suite::OrderDividesPhi,
        Suite::BigPhiSuperset,
        Suite::SquarefreeTotality,
        Suite::NonSquarefreeStrict,
        Suite::FastCount,
        Suite::MemberCoprimeToQ,
        Suite::Sufficiency,
        Suite::SquarefreeCorrectness,
        Suite::PerFactorCongruence,
        Suite::ExponentIdentity,
        Suite::EncryptionInjective,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::DivRem => "div-rem",
            Suite::DivisorProduct => "coprime-divisor-product",
            Suite::CoprimeDivisors => "divisors-of-coprimes-are-coprime",
            Suite::GcdSubmultiplicative => "gcd-submultiplicative",
            Suite::GcdMultiplicative => "gcd-multiplicative",
            Suite::CongruenceSplit => "congruence-split",
            Suite::ModInverse => "mod-inverse-round-trip",
            Suite::ModPow => "mod-pow-vs-repeated-multiplication",
            Suite::Reconstruction => "factorization-reconstruction",
            Suite::TotientOfPrime => "totient-of-prime",
            Suite::TotientFormula => "totient-formula-vs-gcd-scan",
            Suite::TotientDistinctPrimes => "totient-distinct-prime-product",
            Suite::TotientMultiplicative => "totient-multiplicative",
            Suite::Euler => "euler-theorem",
            Suite::OrderDividesPhi => "order-divides-totient",
            Suite::BigPhiSuperset => "big-phi-superset",
            Suite::SquarefreeTotality => "squarefree-big-phi-is-everything",
            Suite::NonSquarefreeStrict => "non-squarefree-big-phi-is-strict",
            Suite::FastCount => "fast-big-phi-count-vs-enumeration",
            Suite::MemberCoprimeToQ => "member-coprime-to-cofactor",
            Suite::Sufficiency => "big-phi-members-round-trip",
            Suite::SquarefreeCorrectness => "squarefree-everything-round-trips",
            Suite::PerFactorCongruence => "per-factor-congruences",
            Suite::ExponentIdentity => "exponent-identity",
            Suite::EncryptionInjective => "encryption-injective-on-correct-set",
        }
    }

    /// Upper end of the suite's quantified range before capping.
    pub fn natural_range(self) -> u64 {
        match self {
            Suite::DivRem | Suite::GcdSubmultiplicative | Suite::GcdMultiplicative | Suite::EncryptionInjective => 300,
            Suite::DivisorProduct
            | Suite::TotientOfPrime
            | Suite::TotientFormula
            | Suite::TotientDistinctPrimes
            | Suite::TotientMultiplicative
            | Suite::BigPhiSuperset
            | Suite::SquarefreeTotality
            | Suite::NonSquarefreeStrict => 5000,
            Suite::CoprimeDivisors | Suite::OrderDividesPhi => 500,
            Suite::CongruenceSplit => 100,
            Suite::ModPow => 50,
            Suite::ModInverse
            | Suite::Euler
            | Suite::Sufficiency
            | Suite::SquarefreeCorrectness
            | Suite::PerFactorCongruence
            | Suite::ExponentIdentity => 1000,
            Suite::MemberCoprimeToQ => 2000,
            Suite::Reconstruction | Suite::FastCount => 100_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteOutcome {
    pub theorem: String,
    /// Range actually quantified over.
    pub bound: u64,
    pub checked: u64,
    pub passed: u64,
    /// First violating tuple, if any.
    pub witness: Option<String>,
}

impl SuiteOutcome {
    pub fn ok(&self) -> bool {
        self.checked == self.passed
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub n_max: u64,
    pub suites: Vec<SuiteOutcome>,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteOutcome::ok)
    }
}

struct Tally {
    checked: u64,
    passed: u64,
    witness: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { checked: 0, passed: 0, witness: None }
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if ok {
            self.passed += 1;
        } else if self.witness.is_none() {
            self.witness = Some(witness());
        }
    }
}

pub fn verify_theorem_suite(n_max: u64) -> Result<TheoremReport> {
    verify_suites(&Suite::ALL, n_max)
}

pub fn verify_suites(suites: &[Suite], n_max: u64) -> Result<TheoremReport> {
    let mut outcomes = Vec::with_capacity(suites.len());
    for &suite in suites {
        let bound = suite.natural_range().min(n_max);
        let mut t = Tally::new();
        run(suite, bound, &mut t)?;
        outcomes.push(SuiteOutcome {
            theorem: suite.name().to_string(),
            bound,
            checked: t.checked,
            passed: t.passed,
            witness: t.witness,
        });
    }
    Ok(TheoremReport { n_max, suites: outcomes })
}

fn squarefree(n: u64) -> Result<bool> {
    Ok(factorize_u64(n)?.is_squarefree())
}

fn divisors_by_scan(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

fn valid_exponents(n: u64) -> Result<Vec<u64>> {
    let phi = phi_u64(n)?;
    Ok((2..phi).filter(|&e| gcd_u64(e, phi) == 1).collect())
}

fn run(suite: Suite, b: u64, t: &mut Tally) -> Result<()> {
    let limit = EnumerationLimit::default();
    match suite {
        Suite::DivRem => {
            for a in 0..=b {
                for d in 1..=b {
                    let crate::arith::DivRem { quotient, remainder } =
                        crate::arith::div_rem(&Natural::from(a), &Natural::from(d))?;
                    let (q, r) = (quotient.to_u64().unwrap_or(u64::MAX), remainder.to_u64().unwrap_or(u64::MAX));
                    t.check(d * q + r == a && r < d, || format!("a={a} b={d} q={q} r={r}"));
                }
            }
        }
        Suite::DivisorProduct => {
            for n in 1..=b {
                let divs = divisors_by_scan(n);
                for &x in &divs {
                    for &y in divs.iter().filter(|&&y| gcd_u64(x, y) == 1) {
                        t.check(n % (x * y) == 0, || format!("N={n} a={x} b={y}"));
                    }
                }
            }
        }
        Suite::CoprimeDivisors => {
            let divs: Vec<Vec<u64>> = (0..=b).map(|n| if n == 0 { vec![] } else { divisors_by_scan(n) }).collect();
            for p in 1..=b {
                for q in (1..=b).filter(|&q| gcd_u64(p, q) == 1) {
                    for &x in &divs[p as usize] {
                        for &y in &divs[q as usize] {
                            t.check(gcd_u64(x, y) == 1, || format!("P={p} Q={q} p={x} q={y}"));
                        }
                    }
                }
            }
        }
        Suite::GcdSubmultiplicative => {
            for m in 1..=b {
                for p in 1..=b {
                    for q in 1..=b {
                        let lhs = gcd_u64(m, p * q);
                        let rhs = gcd_u64(m, p) * gcd_u64(m, q);
                        t.check(lhs <= rhs, || format!("m={m} P={p} Q={q}"));
                    }
                }
            }
        }
        Suite::GcdMultiplicative => {
            for m in 1..=b {
                for p in 1..=b {
                    for q in (1..=b).filter(|&q| gcd_u64(p, q) == 1) {
                        let lhs = gcd_u64(m, p * q);
                        let rhs = gcd_u64(m, p) * gcd_u64(m, q);
                        t.check(lhs == rhs, || format!("m={m} P={p} Q={q}"));
                    }
                }
            }
        }
        Suite::CongruenceSplit => congruence_split(b, t),
        Suite::ModInverse => {
            for n in 2..=b {
                for a in (1..n).filter(|&a| gcd_u64(a, n) == 1) {
                    let d = crate::arith::mod_inv(&Natural::from(a), &Natural::from(n))?;
                    let d = d.to_u64().unwrap_or(0);
                    t.check(a * d % n == 1, || format!("a={a} n={n} d={d}"));
                }
            }
        }
        Suite::ModPow => {
            for modulus in 1..=b {
                for base in 0..=b {
                    let mut naive = 1 % modulus;
                    for exp in 0..=b {
                        let got = crate::arith::mod_pow(&Natural::from(base), &Natural::from(exp), &Natural::from(modulus))?;
                        t.check(got == Natural::from(naive), || format!("{base}^{exp} mod {modulus}"));
                        naive = naive * base % modulus;
                    }
                }
            }
        }
        Suite::Reconstruction => {
            for n in 1..=b {
                let f = factorize_u64(n)?;
                t.check(f.product() == Natural::from(n), || format!("n={n}"));
            }
        }
        Suite::TotientOfPrime => {
            for p in (2..=b).filter(|&p| is_prime_u64(p)) {
                t.check(phi_u64(p)? == p - 1, || format!("p={p}"));
            }
        }
        Suite::TotientFormula => {
            for n in 1..=b {
                let scan = (1..=n).filter(|&m| gcd_u64(m, n) == 1).count() as u64;
                t.check(phi_u64(n)? == scan, || format!("n={n} scan={scan}"));
            }
        }
        Suite::TotientDistinctPrimes => {
            for n in 1..=b {
                let f = factorize_u64(n)?;
                if !f.is_squarefree() {
                    continue;
                }
                let product: Natural = f.primes().map(|p| p - 1u32).product();
                t.check(Natural::from(phi_u64(n)?) == product, || format!("n={n}"));
            }
        }
        Suite::TotientMultiplicative => {
            for p in 1..=b {
                for q in (1..=b / p).filter(|&q| gcd_u64(p, q) == 1) {
                    let ok = phi_u64(p * q)? == phi_u64(p)? * phi_u64(q)?;
                    t.check(ok, || format!("P={p} Q={q}"));
                }
            }
        }
        Suite::Euler => {
            for n in 1..=b {
                let phi = phi_u64(n)?;
                for m in phi_set(n, limit)?.members {
                    t.check(mod_pow_u64(m, phi, n) == 1 % n, || format!("m={m} n={n}"));
                }
            }
        }
        Suite::OrderDividesPhi => {
            for n in 2..=b {
                let phi = phi_u64(n)?;
                for m in phi_set(n, limit)?.members {
                    let order = multiplicative_order_u64(m, n)?;
                    t.check(phi % order == 0, || format!("m={m} n={n} order={order}"));
                }
            }
        }
        Suite::BigPhiSuperset => {
            for n in 1..=b {
                let big = big_phi_set(n, limit)?.members;
                let small = phi_set(n, limit)?.members;
                let ok = small.iter().all(|m| big.binary_search(m).is_ok()) && big.len() >= small.len();
                t.check(ok, || format!("n={n}"));
            }
        }
        Suite::SquarefreeTotality => {
            for n in (1..=b).filter(|&n| squarefree(n).unwrap_or(false)) {
                let big = big_phi_set(n, limit)?.members;
                let ok = big.len() as u64 == n && big.iter().copied().eq(1..=n);
                t.check(ok, || format!("n={n}"));
            }
        }
        Suite::NonSquarefreeStrict => {
            for n in (1..=b).filter(|&n| !squarefree(n).unwrap_or(true)) {
                let count = big_phi_set(n, limit)?.members.len() as u64;
                t.check(count < n && big_phi_count_u64(n)? < n, || format!("n={n} count={count}"));
            }
        }
        Suite::FastCount => {
            for n in 1..=b {
                let fast = big_phi_count_u64(n)?;
                let slow = (1..=n).filter(|&m| is_member_u64(m, n)).count() as u64;
                t.check(fast == slow, || format!("n={n} fast={fast} enumerated={slow}"));
            }
        }
        Suite::MemberCoprimeToQ => {
            for n in 1..=b {
                for m in (1..=n).filter(|&m| is_member_u64(m, n)) {
                    let q = n / gcd_u64(m, n);
                    t.check(gcd_u64(m, q) == 1, || format!("m={m} n={n} Q={q}"));
                }
            }
        }
        Suite::Sufficiency => {
            for n in 3..=b {
                let members = big_phi_set(n, limit)?.members;
                let modulus = WordModulus::new(n);
                for e in valid_exponents(n)? {
                    let d = mod_inv_u64(e, phi_u64(n)?).unwrap_or(0);
                    for &m in &members {
                        let back = modulus.pow(modulus.pow(m, e), d);
                        t.check(back == m % n, || format!("n={n} e={e} d={d} m={m} got={back}"));
                    }
                }
            }
        }
        Suite::SquarefreeCorrectness => {
            for n in (3..=b).filter(|&n| squarefree(n).unwrap_or(false)) {
                let modulus = WordModulus::new(n);
                for e in valid_exponents(n)? {
                    let d = mod_inv_u64(e, phi_u64(n)?).unwrap_or(0);
                    for m in 1..=n {
                        let back = modulus.pow(modulus.pow(m, e), d);
                        t.check(back == m % n, || format!("n={n} e={e} d={d} m={m} got={back}"));
                    }
                }
            }
        }
        Suite::PerFactorCongruence => {
            let mut rng = ChaCha8Rng::seed_from_u64(0x00c0_ffee);
            for n in 3..=b {
                let members = big_phi_set(n, limit)?.members;
                let Some(&e) = valid_exponents(n)?.first() else { continue };
                let d = mod_inv_u64(e, phi_u64(n)?).unwrap_or(0);
                for _ in 0..8 {
                    let m = members[rng.gen_range(0..members.len())];
                    let p = gcd_u64(m, n);
                    let q = n / p;
                    let back = mod_pow_u64(mod_pow_u64(m, e, n), d, n);
                    let ok = back % p == m % p && back % q == m % q && back == m % n;
                    t.check(ok, || format!("n={n} e={e} m={m} P={p} Q={q}"));
                }
            }
        }
        Suite::ExponentIdentity => {
            for n in 3..=b {
                for e in valid_exponents(n)? {
                    let key = make_keypair(&Natural::from(n), &Natural::from(e))?;
                    let ok = key.e() * key.d() == key.k() * key.phi_n() + 1u32;
                    t.check(ok, || format!("n={n} e={e} d={} k={}", key.d(), key.k()));
                }
            }
        }
        Suite::EncryptionInjective => {
            for n in 3..=b {
                let modulus = WordModulus::new(n);
                let phi = phi_u64(n)?;
                for e in valid_exponents(n)? {
                    let d = mod_inv_u64(e, phi).unwrap_or(0);
                    let mut images: Vec<u64> = (1..=n)
                        .filter(|&m| modulus.pow(modulus.pow(m, e), d) == m % n)
                        .map(|m| modulus.pow(m, e))
                        .collect();
                    let correct = images.len();
                    images.sort_unstable();
                    images.dedup();
                    t.check(images.len() == correct, || format!("n={n} e={e}"));
                }
            }
        }
    }
    Ok(())
}

/// Coprime `P, Q <= b`. Small products are checked over every pair `a, b` in
/// `[0, PQ]`; larger ones over every `a` against a fixed set of partners
/// that includes the values congruent to `a` modulo `P` or `Q`.
fn congruence_split(bound: u64, t: &mut Tally) {
    const EXHAUSTIVE_PRODUCT: u64 = 400;
    let congruent = |x: u64, y: u64, n: u64| x % n == y % n;
    for p in 1..=bound {
        for q in (1..=bound).filter(|&q| gcd_u64(p, q) == 1) {
            let n = p * q;
            let mut test = |a: u64, c: u64| {
                let whole = congruent(a, c, n);
                let split = congruent(a, c, p) && congruent(a, c, q);
                t.check(whole == split, || format!("P={p} Q={q} a={a} b={c}"));
            };
            if n <= EXHAUSTIVE_PRODUCT {
                for a in 0..=n {
                    for c in 0..=n {
                        test(a, c);
                    }
                }
            } else {
                for a in 0..=n {
                    let partners = [0, n, a, a + p, a + q, a.wrapping_sub(p), a.wrapping_sub(q), (a * 7919 + 13) % (n + 1)];
                    for c in partners.into_iter().filter(|&c| c <= n) {
                        test(a, c);
                    }
                }
            }
        }
    }
}
