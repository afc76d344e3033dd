//! Recomputes the two worked examples (N = 10 and N = 20) and compares every
//! concrete value against frozen expectations.

use crate::big_phi::big_phi_set;
use crate::rsa::{correctness_set, make_keypair, roundtrip_ok};
use crate::totient::{phi_set, phi_u64};
use crate::{EnumerationLimit, Natural, Result};
use num_traits::ToPrimitive;
use serde::Serialize;

/// Frozen values the reproduction is checked against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorkedExpectations {
    pub squarefree_n: u64,
    pub squarefree_e: u64,
    pub squarefree_phi: u64,
    pub squarefree_phi_set: Vec<u64>,
    pub squarefree_big_phi_set: Vec<u64>,
    /// Any representative of the expected private-exponent class.
    pub squarefree_d_alias: u64,
    pub general_n: u64,
    pub general_e: u64,
    pub general_phi: u64,
    pub general_phi_set: Vec<u64>,
    pub general_big_phi_set: Vec<u64>,
    pub general_d: u64,
    /// `(m, Dec(Enc(m)))` for each message that fails to round-trip.
    pub general_failures: Vec<(u64, u64)>,
}

impl Default for WorkedExpectations {
    fn default() -> Self {
        WorkedExpectations {
            squarefree_n: 10,
            squarefree_e: 3,
            squarefree_phi: 4,
            squarefree_phi_set: vec![1, 3, 7, 9],
            squarefree_big_phi_set: (1..=10).collect(),
            squarefree_d_alias: 7,
            general_n: 20,
            general_e: 3,
            general_phi: 8,
            general_phi_set: vec![1, 3, 7, 9, 11, 13, 17, 19],
            general_big_phi_set: vec![1, 3, 4, 5, 7, 8, 9, 11, 12, 13, 15, 16, 17, 19, 20],
            general_d: 3,
            general_failures: vec![(2, 12), (6, 16), (10, 0), (14, 4), (18, 8)],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AssertionOutcome {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExampleReport {
    pub assertions: Vec<AssertionOutcome>,
}

impl ExampleReport {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    pub fn failed(&self) -> impl Iterator<Item = &AssertionOutcome> {
        self.assertions.iter().filter(|a| !a.passed)
    }
}

fn list(values: &[u64]) -> String {
    let body: Vec<String> = values.iter().map(u64::to_string).collect();
    format!("{{{}}}", body.join(","))
}

fn pairs(values: &[(u64, u64)]) -> String {
    let body: Vec<String> = values.iter().map(|(m, r)| format!("{m}->{r}")).collect();
    format!("{{{}}}", body.join(","))
}

struct Recorder(Vec<AssertionOutcome>);

impl Recorder {
    fn check(&mut self, name: &str, expected: String, actual: String) {
        let passed = expected == actual;
        self.0.push(AssertionOutcome { name: name.to_string(), expected, actual, passed });
    }
}

pub fn reproduce_worked_examples() -> Result<ExampleReport> {
    reproduce_worked_examples_against(&WorkedExpectations::default())
}

pub fn reproduce_worked_examples_against(expect: &WorkedExpectations) -> Result<ExampleReport> {
    let limit = EnumerationLimit::default();
    let mut r = Recorder(Vec::new());

    let n = expect.squarefree_n;
    r.check("squarefree.phi", expect.squarefree_phi.to_string(), phi_u64(n)?.to_string());
    r.check("squarefree.phi_set", list(&expect.squarefree_phi_set), list(&phi_set(n, limit)?.members));
    r.check("squarefree.big_phi_set", list(&expect.squarefree_big_phi_set), list(&big_phi_set(n, limit)?.members));
    let key = make_keypair(&Natural::from(n), &Natural::from(expect.squarefree_e))?;
    let d_class = |d: u64| format!("{} mod {}", d % expect.squarefree_phi, expect.squarefree_phi);
    let actual_d = key.d().to_u64().unwrap_or(u64::MAX);
    r.check("squarefree.key.d_class", d_class(expect.squarefree_d_alias), d_class(actual_d));
    let mut broken = Vec::new();
    for m in 1..=n {
        if !roundtrip_ok(&key, &Natural::from(m))? {
            broken.push(m);
        }
    }
    r.check("squarefree.roundtrip_failures", list(&[]), list(&broken));

    let n = expect.general_n;
    r.check("general.phi", expect.general_phi.to_string(), phi_u64(n)?.to_string());
    r.check("general.phi_set", list(&expect.general_phi_set), list(&phi_set(n, limit)?.members));
    let big = big_phi_set(n, limit)?.members;
    r.check("general.big_phi_set", list(&expect.general_big_phi_set), list(&big));
    let key = make_keypair(&Natural::from(n), &Natural::from(expect.general_e))?;
    r.check("general.key.d", expect.general_d.to_string(), key.d().to_string());
    let report = correctness_set(&key, limit)?;
    r.check("general.failures", pairs(&expect.general_failures), pairs(&report.failures));
    r.check("general.correct_set_equals_big_phi_set", list(&big), list(&report.correct_set));

    Ok(ExampleReport { assertions: r.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_assertions_pass() {
        let report = reproduce_worked_examples().unwrap();
        assert_eq!(report.assertions.len(), 11);
        assert!(report.passed(), "{:?}", report.failed().collect::<Vec<_>>());
    }

    #[test]
    fn corrupted_expectation_is_named() {
        let mut expect = WorkedExpectations::default();
        expect.general_failures[1] = (6, 15);
        let report = reproduce_worked_examples_against(&expect).unwrap();
        let failed: Vec<&str> = report.failed().map(|a| a.name.as_str()).collect();
        assert_eq!(failed, vec!["general.failures"]);

        let expect = WorkedExpectations { squarefree_d_alias: 5, ..Default::default() };
        let report = reproduce_worked_examples_against(&expect).unwrap();
        let failed: Vec<&str> = report.failed().map(|a| a.name.as_str()).collect();
        assert_eq!(failed, vec!["squarefree.key.d_class"]);
    }

    #[test]
    fn reports_are_deterministic() {
        assert_eq!(reproduce_worked_examples().unwrap(), reproduce_worked_examples().unwrap());
    }
}
