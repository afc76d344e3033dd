//! Batch verification: worked examples, invariant suites and the conjecture sweep.

mod examples;
mod suites;
mod sweep;

pub use examples::{reproduce_worked_examples, reproduce_worked_examples_against, AssertionOutcome, ExampleReport, WorkedExpectations};
pub use suites::{verify_suites, verify_theorem_suite, Suite, SuiteOutcome, TheoremReport};
pub use sweep::{exponents_for, sweep_conjecture, ConjectureReport, Counterexample, Direction, ExponentPolicy, SweepConfig};
