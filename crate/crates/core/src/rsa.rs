//! RSA-style encryption over an arbitrary modulus.
//!
//! Keys only need `e * d ≡ 1 (mod φ(N))`; `N` need not be a product of two
//! distinct primes. Messages live in `[1, N]`, and `m = N` is carried as the
//! residue 0, so round-trip checks compare modulo `N`.

use crate::arith::{is_congruent, mod_inv, mod_pow, WordModulus};
use crate::big_phi::big_phi_set;
use crate::factor::{factorize_with, factorize_with_exponent_multiple, FactorOptions, Factorization};
use crate::totient::phi_of;
use crate::{EnumerationLimit, Error, Natural, Result};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

const ENUMERATION_CHUNK: u64 = 1 << 12;

/// A validated key. `d` is always the least positive inverse of `e` mod φ(N).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyPair {
    n: Natural,
    phi_n: Natural,
    e: Natural,
    d: Natural,
    k: Natural,
}

impl KeyPair {
    pub fn n(&self) -> &Natural {
        &self.n
    }

    pub fn phi_n(&self) -> &Natural {
        &self.phi_n
    }

    pub fn e(&self) -> &Natural {
        &self.e
    }

    pub fn d(&self) -> &Natural {
        &self.d
    }

    /// The multiplier in `e * d = k * φ(N) + 1`.
    pub fn k(&self) -> &Natural {
        &self.k
    }

    /// `e = 1` makes encryption the identity, which round-trips every message.
    pub fn is_identity(&self) -> bool {
        self.e.is_one()
    }

    /// Builds a key when the factorization of `N` is already known.
    pub fn from_factorization(factorization: &Factorization, e: &Natural) -> Result<Self> {
        let n = factorization.n();
        if *n < Natural::from(3u32) {
            return Err(Error::ModulusTooSmall(format!("N = {n}, need N >= 3")));
        }
        let phi_n = phi_of(factorization);
        Self::from_phi(n.clone(), phi_n, e)
    }

    fn from_phi(n: Natural, phi_n: Natural, e: &Natural) -> Result<Self> {
        if phi_n <= Natural::one() {
            return Err(Error::ModulusTooSmall(format!("phi({n}) = {phi_n}")));
        }
        if e.is_zero() || *e >= phi_n {
            return Err(Error::InvalidExponent(format!("need 1 <= e < phi(N) = {phi_n}, got e = {e}")));
        }
        let d = match mod_inv(e, &phi_n) {
            Ok(d) => d,
            Err(Error::NotInvertible { .. }) => {
                return Err(Error::InvalidExponent(format!("gcd({e}, {phi_n}) != 1")));
            }
            Err(other) => return Err(other),
        };
        let (k, rem) = (e * &d - 1u32).div_rem(&phi_n);
        if !rem.is_zero() {
            return Err(Error::InternalConsistency(format!("e*d - 1 not divisible by phi for e = {e}")));
        }
        Ok(KeyPair { n, phi_n, e: e.clone(), d, k })
    }

    /// Validates an externally supplied `(n, e, d)`.
    ///
    /// Any `d` in the right class mod φ(N) is accepted; the stored `d` is the
    /// canonical least positive representative.
    pub fn import(n: &Natural, e: &Natural, d: &Natural, options: &FactorOptions) -> Result<Self> {
        if *n < Natural::from(3u32) {
            return Err(Error::ModulusTooSmall(format!("N = {n}, need N >= 3")));
        }
        let invalid = || {
            Error::InvalidKey(format!("e * d = {e} * {d} is not 1 mod phi(N)"))
        };
        if d.is_zero() {
            return Err(invalid());
        }
        let hint = e * d - 1u32;
        // A valid d makes every unit a root of x^(ed-1) = 1; one unit that is
        // not proves the key wrong without factoring N.
        for g in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
            let g = Natural::from(g);
            if g < *n && g.gcd(n).is_one() && !mod_pow(&g, &hint, n)?.is_one() {
                return Err(invalid());
            }
        }
        let key = KeyPair::from_factorization(&factorize_with_exponent_multiple(n, &hint, options)?, e)?;
        if !is_congruent(&(e * d), &Natural::one(), &key.phi_n)? {
            return Err(Error::InvalidKey(format!(
                "e * d = {e} * {d} is not 1 mod phi(N) = {}",
                key.phi_n
            )));
        }
        Ok(key)
    }

    /// Three decimal lines: `n`, `e`, `d`.
    pub fn to_key_file(&self) -> String {
        format!("{}\n{}\n{}\n", self.n, self.e, self.d)
    }

    pub fn from_key_file(text: &str, options: &FactorOptions) -> Result<Self> {
        let (n, e, d) = parse_key_file(text)?;
        Self::import(&n, &e, &d, options)
    }

    fn word_key(&self) -> Option<(WordModulus, u64, u64)> {
        Some((WordModulus::new(self.n.to_u64()?), self.e.to_u64()?, self.d.to_u64()?))
    }
}

/// Parses the key file format without validating the key.
pub fn parse_key_file(text: &str) -> Result<(Natural, Natural, Natural)> {
    let fields: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
    let [n, e, d] = fields.as_slice() else {
        return Err(Error::Parse(format!("key file needs 3 lines (n, e, d), found {}", fields.len())));
    };
    let parse = |name: &str, raw: &str| {
        raw.parse::<Natural>()
            .map_err(|_| Error::Parse(format!("key field {name} is not a decimal integer: {raw:?}")))
    };
    Ok((parse("n", n)?, parse("e", e)?, parse("d", d)?))
}

pub fn make_keypair(n: &Natural, e: &Natural) -> Result<KeyPair> {
    make_keypair_with(n, e, &FactorOptions::default())
}

pub fn make_keypair_with(n: &Natural, e: &Natural, options: &FactorOptions) -> Result<KeyPair> {
    if *n < Natural::from(3u32) {
        return Err(Error::ModulusTooSmall(format!("N = {n}, need N >= 3")));
    }
    let factorization = factorize_with(n, options)?;
    KeyPair::from_factorization(&factorization, e)
}

fn check_message(key: &KeyPair, m: &Natural) -> Result<()> {
    if m.is_zero() || *m > key.n {
        return Err(Error::Domain(format!("message must satisfy 1 <= m <= N = {}, got {m}", key.n)));
    }
    Ok(())
}

/// `m^e mod N`.
pub fn encrypt(key: &KeyPair, m: &Natural) -> Result<Natural> {
    check_message(key, m)?;
    mod_pow(m, &key.e, &key.n)
}

/// `c^d mod N`.
pub fn decrypt(key: &KeyPair, c: &Natural) -> Result<Natural> {
    if *c >= key.n {
        return Err(Error::Domain(format!("ciphertext must satisfy 0 <= c < N = {}, got {c}", key.n)));
    }
    mod_pow(c, &key.d, &key.n)
}

pub fn roundtrip_ok(key: &KeyPair, m: &Natural) -> Result<bool> {
    let recovered = decrypt(key, &encrypt(key, m)?)?;
    is_congruent(&recovered, m, &key.n)
}

/// Messages that survive a round trip under `key`, compared against Φ-set(N).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrectnessReport {
    pub key: KeyPair,
    pub correct_set: Vec<u64>,
    pub phi_set_equal: bool,
    /// `(m, Dec(Enc(m)))` for every message that does not round-trip.
    pub failures: Vec<(u64, u64)>,
}

/// Round-trip outcome for one message: `None` if it survives, else the decryption.
#[inline]
fn roundtrip_word(modulus: &WordModulus, e: u64, d: u64, m: u64) -> Option<u64> {
    let n = modulus.value();
    let recovered = modulus.pow(modulus.pow(m, e), d);
    (recovered != m % n).then_some(recovered)
}

/// Decrypted values of every failing message in `[1, n]`, ascending by `m`.
#[cfg(test)]
fn failures_word(n: u64, e: u64, d: u64) -> Vec<(u64, u64)> {
    let modulus = WordModulus::new(n);
    let mut out = Vec::new();
    for m in 1..=n {
        if let Some(r) = roundtrip_word(&modulus, e, d, m) {
            out.push((m, r));
        }
    }
    out
}

pub fn correctness_set(key: &KeyPair, limit: EnumerationLimit) -> Result<CorrectnessReport> {
    let n = limit.check(&key.n)?;
    let (modulus, e, d) = key
        .word_key()
        .ok_or_else(|| Error::InternalConsistency("key exponents exceed a machine word".into()))?;
    let chunks = n.div_ceil(ENUMERATION_CHUNK);
    let outcomes: Vec<(u64, Option<u64>)> = (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let lo = c * ENUMERATION_CHUNK + 1;
            let hi = ((c + 1) * ENUMERATION_CHUNK).min(n);
            (lo..=hi).map(move |m| (m, roundtrip_word(&modulus, e, d, m)))
        })
        .collect();
    let mut correct_set = Vec::new();
    let mut failures = Vec::new();
    for (m, outcome) in outcomes {
        match outcome {
            None => correct_set.push(m),
            Some(r) => failures.push((m, r)),
        }
    }
    let phi_set_equal = correct_set == big_phi_set(n, limit)?.members;
    Ok(CorrectnessReport { key: key.clone(), correct_set, phi_set_equal, failures })
}
