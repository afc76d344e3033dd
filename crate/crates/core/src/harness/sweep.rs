//! Sweep over `(N, e)` pairs checking whether the round-trip set equals Φ-set(N).

use crate::arith::{gcd_u64, mod_inv_u64, WordModulus};
use crate::big_phi::is_member_u64;
use crate::totient::phi_u64;
use crate::{EnumerationLimit, Error, Result};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::time::Instant;

/// Which public exponents to try for each modulus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum ExponentPolicy {
    AllValid,
    FirstValid,
    /// Up to `count` distinct valid exponents per modulus, drawn from `seed`.
    Sample { count: u64, seed: u64 },
    /// Only these exponents, each skipped where it is not valid.
    Listed { exponents: Vec<u64> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepConfig {
    pub n_min: u64,
    pub n_max: u64,
    pub e_policy: ExponentPolicy,
    pub exclude_e1: bool,
    pub parallelism: usize,
}

impl SweepConfig {
    pub fn new(n_min: u64, n_max: u64, e_policy: ExponentPolicy) -> Self {
        SweepConfig { n_min, n_max, e_policy, exclude_e1: true, parallelism: 1 }
    }

    pub fn validate(&self, limit: EnumerationLimit) -> Result<()> {
        if self.n_min < 3 || self.n_min > self.n_max {
            return Err(Error::Domain(format!(
                "sweep range needs 3 <= n_min <= n_max, got {}..{}",
                self.n_min, self.n_max
            )));
        }
        if let ExponentPolicy::Sample { count: 0, .. } = self.e_policy {
            return Err(Error::Domain("sample count must be >= 1".into()));
        }
        if self.parallelism == 0 {
            return Err(Error::Domain("parallelism must be >= 1".into()));
        }
        limit.check_u64(self.n_max)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// Round-trips but lies outside Φ-set(N); would refute the conjecture.
    CorrectButNotMember,
    /// In Φ-set(N) but fails to round-trip; never reported, always an error.
    MemberButIncorrect,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Counterexample {
    pub n: u64,
    pub e: u64,
    pub m: u64,
    pub direction: Direction,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjectureReport {
    pub config: SweepConfig,
    pub pairs_checked: u64,
    pub counterexamples: Vec<Counterexample>,
    pub elapsed_seconds: f64,
}

impl ConjectureReport {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Valid exponents for modulus `n` under `config`, ascending.
pub fn exponents_for(n: u64, config: &SweepConfig) -> Result<Vec<u64>> {
    let phi = phi_u64(n)?;
    let lowest = if config.exclude_e1 { 2 } else { 1 };
    let is_valid = |e: u64| e >= lowest && e < phi && gcd_u64(e, phi) == 1;
    let chosen = match &config.e_policy {
        ExponentPolicy::AllValid => (lowest..phi).filter(|&e| is_valid(e)).collect(),
        ExponentPolicy::FirstValid => (lowest..phi).find(|&e| is_valid(e)).into_iter().collect(),
        ExponentPolicy::Sample { count, seed } => {
            let all: Vec<u64> = (lowest..phi).filter(|&e| is_valid(e)).collect();
            let take = (*count as usize).min(all.len());
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ n.wrapping_mul(0x9e37_79b9_7f4a_7c15));
            let mut picked: Vec<u64> = sample(&mut rng, all.len(), take).into_iter().map(|i| all[i]).collect();
            picked.sort_unstable();
            picked
        }
        ExponentPolicy::Listed { exponents } => {
            let mut picked: Vec<u64> = exponents.iter().copied().filter(|&e| is_valid(e)).collect();
            picked.sort_unstable();
            picked.dedup();
            picked
        }
    };
    Ok(chosen)
}

struct ModulusOutcome {
    pairs: u64,
    counterexamples: Vec<Counterexample>,
}

fn check_modulus(n: u64, config: &SweepConfig) -> Result<ModulusOutcome> {
    let exponents = exponents_for(n, config)?;
    let mut outcome = ModulusOutcome { pairs: 0, counterexamples: Vec::new() };
    if exponents.is_empty() {
        return Ok(outcome);
    }
    let phi = phi_u64(n)?;
    let modulus = WordModulus::new(n);
    let membership: Vec<bool> = (0..=n).map(|m| m > 0 && is_member_u64(m, n)).collect();
    for e in exponents {
        let d = mod_inv_u64(e, phi)
            .ok_or_else(|| Error::InternalConsistency(format!("e = {e} chosen but not invertible mod {phi}")))?;
        for m in 1..=n {
            let recovered = modulus.pow(modulus.pow(m, e), d);
            let correct = recovered == m % n;
            match (correct, membership[m as usize]) {
                (true, false) => outcome.counterexamples.push(Counterexample {
                    n,
                    e,
                    m,
                    direction: Direction::CorrectButNotMember,
                }),
                (false, true) => {
                    return Err(Error::InternalConsistency(format!(
                        "member m = {m} of Phi-set({n}) fails to round-trip under e = {e}, d = {d} (decrypts to {recovered})"
                    )));
                }
                _ => {}
            }
        }
        outcome.pairs += 1;
    }
    Ok(outcome)
}

/// Runs the sweep. Output is identical for any `parallelism`, except `elapsed_seconds`.
pub fn sweep_conjecture(config: &SweepConfig, limit: EnumerationLimit) -> Result<ConjectureReport> {
    config.validate(limit)?;
    let started = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.parallelism)
        .build()
        .map_err(|e| Error::InternalConsistency(format!("cannot start worker pool: {e}")))?;
    let outcomes: Vec<ModulusOutcome> = pool.install(|| {
        (config.n_min..=config.n_max)
            .into_par_iter()
            .map(|n| check_modulus(n, config))
            .collect::<Result<Vec<_>>>()
    })?;
    let mut pairs_checked = 0;
    let mut counterexamples = Vec::new();
    for o in outcomes {
        pairs_checked += o.pairs;
        counterexamples.extend(o.counterexamples);
    }
    Ok(ConjectureReport {
        config: config.clone(),
        pairs_checked,
        counterexamples,
        elapsed_seconds: started.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::factorize_u64;
    use crate::rsa::{correctness_set, make_keypair};
    use crate::Natural;

    fn limit() -> EnumerationLimit {
        EnumerationLimit::default()
    }

    #[test]
    fn small_range_has_no_counterexamples() {
        let report = sweep_conjecture(&SweepConfig::new(3, 100, ExponentPolicy::AllValid), limit()).unwrap();
        assert!(report.holds());
        let expected: u64 = (3..=100).map(|n| exponents_for(n, &report.config).unwrap().len() as u64).sum();
        assert_eq!(report.pairs_checked, expected);
    }

    #[test]
    fn single_pair_from_listed_exponent() {
        let config = SweepConfig::new(20, 20, ExponentPolicy::Listed { exponents: vec![3] });
        let report = sweep_conjecture(&config, limit()).unwrap();
        assert_eq!(report.pairs_checked, 1);
        assert!(report.holds());
    }

    #[test]
    fn squarefree_modulus_round_trips_everything() {
        let config = SweepConfig::new(10, 10, ExponentPolicy::AllValid);
        // phi(10) = 4: only e = 3 is valid once e = 1 is excluded.
        assert_eq!(exponents_for(10, &config).unwrap(), vec![3]);
        for e in exponents_for(10, &config).unwrap() {
            let key = make_keypair(&Natural::from(10u32), &Natural::from(e)).unwrap();
            let report = correctness_set(&key, limit()).unwrap();
            assert_eq!(report.correct_set, (1..=10).collect::<Vec<_>>());
        }
        assert!(sweep_conjecture(&config, limit()).unwrap().holds());
    }

    #[test]
    fn identity_exponent_yields_counterexamples_for_non_squarefree() {
        let mut config = SweepConfig::new(3, 200, ExponentPolicy::FirstValid);
        config.exclude_e1 = false;
        let report = sweep_conjecture(&config, limit()).unwrap();
        for n in 3..=200u64 {
            let flagged = report
                .counterexamples
                .iter()
                .any(|c| c.n == n && c.e == 1 && c.direction == Direction::CorrectButNotMember);
            assert_eq!(flagged, !factorize_u64(n).unwrap().is_squarefree(), "{n}");
        }
    }

    #[test]
    fn parallelism_does_not_change_results() {
        let mut config = SweepConfig::new(3, 150, ExponentPolicy::Sample { count: 3, seed: 9 });
        config.exclude_e1 = false;
        let one = sweep_conjecture(&config, limit()).unwrap();
        config.parallelism = 4;
        let four = sweep_conjecture(&config, limit()).unwrap();
        assert_eq!(one.pairs_checked, four.pairs_checked);
        assert_eq!(one.counterexamples, four.counterexamples);
    }

    #[test]
    fn sampling_is_seeded() {
        let config = SweepConfig::new(3, 3, ExponentPolicy::Sample { count: 4, seed: 1 });
        let a = exponents_for(1000, &config).unwrap();
        assert_eq!(a, exponents_for(1000, &config).unwrap());
        assert_eq!(a.len(), 4);
        let other = SweepConfig { e_policy: ExponentPolicy::Sample { count: 4, seed: 2 }, ..config };
        assert_ne!(a, exponents_for(1000, &other).unwrap());
    }

    #[test]
    fn sweep_agrees_with_correctness_set() {
        let config = SweepConfig::new(3, 60, ExponentPolicy::AllValid);
        for n in 3..=60u64 {
            for e in exponents_for(n, &config).unwrap() {
                let key = make_keypair(&Natural::from(n), &Natural::from(e)).unwrap();
                assert!(correctness_set(&key, limit()).unwrap().phi_set_equal, "n={n} e={e}");
            }
        }
    }

    #[test]
    fn invalid_configs_are_rejected() {
        assert!(SweepConfig::new(2, 10, ExponentPolicy::AllValid).validate(limit()).is_err());
        assert!(SweepConfig::new(10, 9, ExponentPolicy::AllValid).validate(limit()).is_err());
        assert!(SweepConfig::new(3, 10, ExponentPolicy::Sample { count: 0, seed: 0 }).validate(limit()).is_err());
        assert!(matches!(
            SweepConfig::new(3, 101, ExponentPolicy::AllValid).validate(EnumerationLimit(100)),
            Err(Error::Capacity { .. })
        ));
    }
}
