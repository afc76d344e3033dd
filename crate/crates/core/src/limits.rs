use crate::{Error, Natural, Result};
use num_traits::ToPrimitive;

pub const DEFAULT_ENUMERATION_LIMIT: u64 = 1_000_000;

/// Environment variable that overrides the enumeration limit in the CLI.
pub const ENUMERATION_LIMIT_ENV: &str = "EXTRSA_ENUM_LIMIT";

/// Upper bound on `n` for operations that enumerate `[1, n]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EnumerationLimit(pub u64);

impl Default for EnumerationLimit {
    fn default() -> Self {
        EnumerationLimit(DEFAULT_ENUMERATION_LIMIT)
    }
}

impl EnumerationLimit {
    pub fn from_env() -> Result<Self> {
        match std::env::var(ENUMERATION_LIMIT_ENV) {
            Ok(raw) => raw
                .trim()
                .parse::<u64>()
                .map(EnumerationLimit)
                .map_err(|_| Error::Parse(format!("{ENUMERATION_LIMIT_ENV}={raw:?} is not a count"))),
            Err(_) => Ok(Self::default()),
        }
    }

    /// Checks `n` against the limit and narrows it to a machine word.
    pub fn check(self, n: &Natural) -> Result<u64> {
        match n.to_u64() {
            Some(v) if v <= self.0 => Ok(v),
            _ => Err(Error::Capacity { n: n.to_string(), limit: self.0 }),
        }
    }

    pub fn check_u64(self, n: u64) -> Result<u64> {
        if n <= self.0 {
            Ok(n)
        } else {
            Err(Error::Capacity { n: n.to_string(), limit: self.0 })
        }
    }
}
