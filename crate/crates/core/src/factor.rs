//! Primality testing and unique factorization.
//!
//! Small inputs are handled by trial division. Above that, word-sized values
//! use a Miller-Rabin test with a witness set that is exact for all 64-bit
//! integers, and larger values use Baillie-PSW (strong base-2 Miller-Rabin
//! plus a strong Lucas test). Composites are split with Brent's variant of
//! Pollard's rho, seeded from [`FactorOptions::seed`].

use crate::arith::{gcd_u64, mul_mod_u64};
use crate::{Error, Natural, Result};
use num_bigint::RandBigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

/// Seed used for Pollard rho when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x5eed_f00d;

/// Trial division runs all the way to `√n` below this bound.
const TRIAL_DIVISION_BOUND: u64 = 1 << 24;
const TRIAL_DIVISION_CUTOFF: u64 = 1 << 12;

/// Miller-Rabin witnesses that are exact for every `n < 2^64`.
const WITNESSES_U64: [u64; 7] = [2, 325, 9375, 28178, 450775, 9780504, 1795265022];

#[derive(Debug, Clone)]
pub struct FactorOptions {
    pub seed: u64,
    /// Give up with [`Error::FactorTimeout`] after this long.
    pub timeout: Option<Duration>,
}

impl Default for FactorOptions {
    fn default() -> Self {
        FactorOptions { seed: DEFAULT_SEED, timeout: None }
    }
}

/// A positive integer as strictly increasing `(prime, exponent)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    n: Natural,
    factors: Vec<(Natural, u32)>,
}

impl Factorization {
    /// Builds a factorization from known prime powers, checking every invariant.
    pub fn from_prime_powers(mut factors: Vec<(Natural, u32)>) -> Result<Self> {
        factors.sort();
        let mut n = Natural::one();
        for (i, (p, a)) in factors.iter().enumerate() {
            if *a == 0 {
                return Err(Error::Domain(format!("exponent of {p} must be >= 1")));
            }
            if i > 0 && factors[i - 1].0 == *p {
                return Err(Error::Domain(format!("prime {p} listed twice")));
            }
            if !is_prime(p) {
                return Err(Error::Domain(format!("{p} is not prime")));
            }
            n *= num_traits::pow(p.clone(), *a as usize);
        }
        Ok(Factorization { n, factors })
    }

    pub fn n(&self) -> &Natural {
        &self.n
    }

    pub fn factors(&self) -> &[(Natural, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = &Natural> {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, a)| a == 1)
    }

    /// Multiplies the prime powers back together.
    pub fn product(&self) -> Natural {
        self.factors
            .iter()
            .map(|(p, a)| num_traits::pow(p.clone(), *a as usize))
            .product()
    }
}

/// Renders as `20 = 2^2 * 5`; `1 = 1` for the empty product.
impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = ", self.n)?;
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, (p, a)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if *a == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{a}")?;
            }
        }
        Ok(())
    }
}

pub fn is_prime(n: &Natural) -> bool {
    match n.to_u64() {
        Some(v) => is_prime_u64(v),
        None => is_prime_big(n),
    }
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    if n < 41 * 41 {
        return true;
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    WITNESSES_U64.iter().all(|&a| {
        let a = a % n;
        a == 0 || strong_probable_prime_u64(n, d, s, a)
    })
}

fn strong_probable_prime_u64(n: u64, d: u64, s: u32, a: u64) -> bool {
    let mut x = pow_mod_u128(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod_u64(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

fn pow_mod_u128(mut base: u64, mut exp: u64, n: u64) -> u64 {
    let mut acc = 1 % n;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, n);
        }
        base = mul_mod_u64(base, base, n);
        exp >>= 1;
    }
    acc
}

fn is_prime_big(n: &Natural) -> bool {
    for p in small_primes() {
        if (n % p).is_zero() {
            return *n == Natural::from(p);
        }
    }
    let one = Natural::one();
    let n_minus_one = n - &one;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    let two = Natural::from(2u32);
    let mut x = two.modpow(&d, n);
    let mut passes = x == one || x == n_minus_one;
    for _ in 1..s {
        if passes {
            break;
        }
        x = &x * &x % n;
        passes = x == n_minus_one;
    }
    passes && strong_lucas_probable_prime(n)
}

/// Strong Lucas test with Selfridge's parameters (`P = 1`, `Q = (1 - D) / 4`).
fn strong_lucas_probable_prime(n: &Natural) -> bool {
    if is_perfect_square(n) {
        return false;
    }
    // D runs through 5, -7, 9, -11, ... until (D / n) = -1.
    let mut magnitude = 5u64;
    let mut negative = false;
    let d_mod_n = loop {
        let d = if negative {
            n - (Natural::from(magnitude) % n)
        } else {
            Natural::from(magnitude) % n
        };
        match jacobi(&d, n) {
            -1 => break d,
            0 if Natural::from(magnitude) % n != Natural::zero() => return false,
            _ => {}
        }
        magnitude += 2;
        negative = !negative;
    };
    // Q = (1 - D) / 4 reduced mod n; D ≡ 1 (mod 4) so the division is exact over Z.
    let signed_d: i128 = if negative { -(magnitude as i128) } else { magnitude as i128 };
    let q_int = (1 - signed_d) / 4;
    let q = if q_int < 0 {
        n - (Natural::from(q_int.unsigned_abs()) % n)
    } else {
        Natural::from(q_int as u128) % n
    };

    let half = |x: Natural| -> Natural {
        if x.is_odd() {
            (x + n) >> 1
        } else {
            x >> 1
        }
    };
    let sub_mod = |a: &Natural, b: &Natural| -> Natural {
        if a >= b {
            a - b
        } else {
            a + n - b
        }
    };

    let n_plus_one = n + 1u32;
    let s = n_plus_one.trailing_zeros().unwrap_or(0);
    let k = &n_plus_one >> s;

    let two = Natural::from(2u32) % n;
    let (mut u, mut v, mut qk) = (Natural::zero(), two.clone(), Natural::one());
    for i in (0..k.bits()).rev() {
        // Doubling: U_2k = U_k V_k, V_2k = V_k^2 - 2 Q^k.
        u = &u * &v % n;
        v = sub_mod(&(&v * &v % n), &(&qk * &two % n));
        qk = &qk * &qk % n;
        if k.bit(i) {
            // Increment with P = 1: U_k+1 = (U + V) / 2, V_k+1 = (D U + V) / 2.
            let next_u = half((&u + &v) % n);
            let next_v = half((&d_mod_n * &u + &v) % n);
            u = next_u;
            v = next_v;
            qk = &qk * &q % n;
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = sub_mod(&(&v * &v % n), &(&qk * &two % n));
        if v.is_zero() {
            return true;
        }
        qk = &qk * &qk % n;
    }
    false
}

fn is_perfect_square(n: &Natural) -> bool {
    let r = n.sqrt();
    &r * &r == *n
}

/// Jacobi symbol `(a / n)` for odd `n`.
fn jacobi(a: &Natural, n: &Natural) -> i32 {
    let mut a = a % n;
    let mut n = n.clone();
    let mut result = 1;
    while !a.is_zero() {
        let tz = a.trailing_zeros().unwrap_or(0);
        a >>= tz;
        let n_mod_8 = (&n % 8u32).to_u32().unwrap_or(0);
        if tz % 2 == 1 && (n_mod_8 == 3 || n_mod_8 == 5) {
            result = -result;
        }
        if (&a % 4u32) == Natural::from(3u32) && (&n % 4u32) == Natural::from(3u32) {
            result = -result;
        }
        std::mem::swap(&mut a, &mut n);
        a %= &n;
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

fn small_primes() -> impl Iterator<Item = u64> {
    [2u64, 3].into_iter().chain(
        (1u64..)
            .flat_map(|k| [6 * k - 1, 6 * k + 1])
            .take_while(|&c| c < TRIAL_DIVISION_CUTOFF)
            .filter(|&c| is_prime_u64(c)),
    )
}

pub fn is_squarefree(n: &Natural) -> Result<bool> {
    Ok(factorize(n)?.is_squarefree())
}

pub fn factorize(n: &Natural) -> Result<Factorization> {
    factorize_with(n, &FactorOptions::default())
}

pub fn factorize_u64(n: u64) -> Result<Factorization> {
    factorize(&Natural::from(n))
}

pub fn factorize_with(n: &Natural, options: &FactorOptions) -> Result<Factorization> {
    factorize_hinted(n, None, options)
}

/// Factorizes `n` given some `k` that is a multiple of the exponent of the
/// unit group mod `n` (for an RSA key, `k = e*d - 1`). Composites are split
/// by finding a nontrivial square root of 1, which is fast regardless of the
/// size of the prime factors. Falls back to Pollard rho if `k` turns out not
/// to be such a multiple.
pub fn factorize_with_exponent_multiple(n: &Natural, k: &Natural, options: &FactorOptions) -> Result<Factorization> {
    factorize_hinted(n, Some(k), options)
}

fn factorize_hinted(n: &Natural, hint: Option<&Natural>, options: &FactorOptions) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::Domain("cannot factorize 0".into()));
    }
    let deadline = options.timeout.map(|t| Instant::now() + t);
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut found: BTreeMap<Natural, u32> = BTreeMap::new();

    let mut rest = n.clone();
    for p in [2u64, 3].into_iter().chain((1u64..).flat_map(|k| [6 * k - 1, 6 * k + 1])) {
        let small = rest.to_u64().is_some_and(|r| r < TRIAL_DIVISION_BOUND);
        if !small && p >= TRIAL_DIVISION_CUTOFF {
            break;
        }
        if Natural::from(p * p) > rest {
            break;
        }
        while (&rest % p).is_zero() {
            rest /= p;
            *found.entry(Natural::from(p)).or_default() += 1;
        }
    }

    let mut pending = vec![rest];
    while let Some(m) = pending.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&m) {
            *found.entry(m).or_default() += 1;
            continue;
        }
        if let Some((root, power)) = perfect_power(&m) {
            pending.extend(std::iter::repeat_n(root, power as usize));
            continue;
        }
        if let Some(divisor) = hint.and_then(|k| split_with_exponent_multiple(&m, k, &mut rng)) {
            let cofactor = &m / &divisor;
            pending.push(divisor);
            pending.push(cofactor);
            continue;
        }
        let divisor = match m.to_u64() {
            Some(w) => Natural::from(split_u64(w, &mut rng, deadline).ok_or_else(|| timeout(n))?),
            None => split_big(&m, &mut rng, deadline).ok_or_else(|| timeout(n))?,
        };
        let cofactor = &m / &divisor;
        pending.push(divisor);
        pending.push(cofactor);
    }

    let factors = found.into_iter().collect();
    Ok(Factorization { n: n.clone(), factors })
}

/// Largest `r` with `m = root^r`, if `r >= 2`.
fn perfect_power(m: &Natural) -> Option<(Natural, u32)> {
    let bits = m.bits() as u32;
    (2..=bits).rev().find_map(|r| {
        let root = m.nth_root(r);
        (root > Natural::one() && root.pow(r) == *m).then_some((root, r))
    })
}

fn split_with_exponent_multiple(m: &Natural, k: &Natural, rng: &mut ChaCha8Rng) -> Option<Natural> {
    if k.is_zero() {
        return None;
    }
    if m.is_even() {
        return Some(Natural::from(2u32));
    }
    let s = k.trailing_zeros().unwrap_or(0);
    let t = k >> s;
    let m_minus_one = m - 1u32;
    let two = Natural::from(2u32);
    for _ in 0..64 {
        let g = rng.gen_biguint_range(&two, &m_minus_one);
        let shared = g.gcd(m);
        if !shared.is_one() {
            return Some(shared);
        }
        let mut x = g.modpow(&t, m);
        for _ in 0..s {
            if x.is_one() || x == m_minus_one {
                break;
            }
            let y = &x * &x % m;
            if y.is_one() {
                return Some((&x - 1u32).gcd(m));
            }
            x = y;
        }
    }
    None
}

fn timeout(n: &Natural) -> Error {
    Error::FactorTimeout(n.to_string())
}

fn expired(deadline: Option<Instant>) -> bool {
    deadline.is_some_and(|d| Instant::now() >= d)
}

/// Finds a nontrivial divisor of the odd composite `n`.
fn split_u64(n: u64, rng: &mut ChaCha8Rng, deadline: Option<Instant>) -> Option<u64> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    loop {
        if expired(deadline) {
            return None;
        }
        let c = rng.gen_range(1..n);
        let y0 = rng.gen_range(0..n);
        if let Some(d) = brent_u64(n, c, y0, deadline) {
            return Some(d);
        }
    }
}

fn brent_u64(n: u64, c: u64, y0: u64, deadline: Option<Instant>) -> Option<u64> {
    const BATCH: u64 = 128;
    let f = |x: u64| ((mul_mod_u64(x, x, n) as u128 + c as u128) % n as u128) as u64;
    let (mut y, mut r, mut q, mut g) = (y0, 1u64, 1u64, 1u64);
    let (mut x, mut ys) = (y0, y0);
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..BATCH.min(r - k) {
                y = f(y);
                q = mul_mod_u64(q, x.abs_diff(y), n);
            }
            g = gcd_u64(q, n);
            k += BATCH;
        }
        r *= 2;
        if expired(deadline) {
            return None;
        }
    }
    if g == n {
        loop {
            ys = f(ys);
            g = gcd_u64(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn split_big(n: &Natural, rng: &mut ChaCha8Rng, deadline: Option<Instant>) -> Option<Natural> {
    if n.is_even() {
        return Some(Natural::from(2u32));
    }
    let one = Natural::one();
    loop {
        if expired(deadline) {
            return None;
        }
        let c = rng.gen_biguint_range(&one, n);
        let y0 = rng.gen_biguint_below(n);
        if let Some(d) = brent_big(n, &c, y0, deadline) {
            return Some(d);
        }
    }
}

fn brent_big(n: &Natural, c: &Natural, y0: Natural, deadline: Option<Instant>) -> Option<Natural> {
    const BATCH: u64 = 128;
    let f = |x: &Natural| (x * x + c) % n;
    let diff = |a: &Natural, b: &Natural| if a >= b { a - b } else { b - a };
    let one = Natural::one();
    let (mut y, mut r, mut q, mut g) = (y0.clone(), 1u64, one.clone(), one.clone());
    let (mut x, mut ys) = (y0.clone(), y0);
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            for _ in 0..BATCH.min(r - k) {
                y = f(&y);
                q = q * diff(&x, &y) % n;
            }
            g = q.gcd(n);
            k += BATCH;
            if expired(deadline) {
                return None;
            }
        }
        r *= 2;
    }
    if g == *n {
        loop {
            ys = f(&ys);
            g = diff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    (g != *n).then_some(g)
}

/// A uniformly drawn prime with exactly `bits` bits.
pub fn random_prime<R: Rng + ?Sized>(bits: u64, rng: &mut R) -> Result<Natural> {
    if bits < 2 {
        return Err(Error::Domain("a prime needs at least 2 bits".into()));
    }
    loop {
        let mut candidate = rng.gen_biguint(bits);
        candidate.set_bit(bits - 1, true);
        if bits > 2 {
            candidate.set_bit(0, true);
        }
        if is_prime(&candidate) {
            return Ok(candidate);
        }
    }
}
