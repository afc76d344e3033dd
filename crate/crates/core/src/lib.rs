//! Extended RSA over an arbitrary modulus.
//!
//! The classical scheme assumes `N = p * q` with distinct primes. Here `N` may
//! be any integer, keys only need `e * d ≡ 1 (mod φ(N))`, and the messages that
//! survive a round trip are characterized by the Φ-set of `N`: those `m` for
//! which `P = gcd(m, N)` and `Q = N / P` are coprime.
//!
//! Module map:
//!
//! * [`arith`]: exact integer primitives (division, gcd, inverses, powers).
//! * [`factor`]: primality testing and factorization.
//! * [`totient`]: φ(N), the reduced residue system and multiplicative order.
//! * [`big_phi`]: Φ-set membership, enumeration and fast counting.
//! * [`rsa`]: keys, encryption, decryption and correctness sets.
//! * [`harness`]: worked-example reproduction, invariant suites and the
//!   conjecture sweep.

pub mod arith;
pub mod big_phi;
mod error;
pub mod factor;
pub mod harness;
mod limits;
pub mod rsa;
pub mod totient;

pub use error::{Error, Result};
pub use limits::{EnumerationLimit, DEFAULT_ENUMERATION_LIMIT, ENUMERATION_LIMIT_ENV};

/// Arbitrary-precision non-negative integer.
pub type Natural = num_bigint::BigUint;
