//! Exhaustive verification of the factorization identities.
//!
//! Every check builds both sides exactly and compares them; the `h`-ring
//! checks are additionally evaluated at three seeded random integer points.

mod binom_fold;
mod step_a;
mod theorems;

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::engine::ExpansionTable;
use crate::error::{Error, Result};
use crate::hring::HPolynomial;

pub use binom_fold::{binom_fold_check, binom_fold_sides};
pub use step_a::{
    rectangle_strip_coefficient, rectangle_strip_verify, step_a_coefficient, step_a_coefficient_closed, step_a_sweep,
    StepACase, StepACoverage, StepAInstance,
};
pub use theorems::{nla_instances, rectangle_union, NlaInstance, RegimeBucket, RegimeSummary};

/// One identity instance: pass/fail plus whatever witnesses a failure.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub identity: String,
    pub params: BTreeMap<String, String>,
    pub pass: bool,
    pub witness: Option<String>,
    pub millis: u64,
}

impl VerificationReport {
    fn new(identity: &str, params: BTreeMap<String, String>, started: Instant) -> Self {
        VerificationReport {
            identity: identity.to_string(),
            params,
            pass: true,
            witness: None,
            millis: started.elapsed().as_millis() as u64,
        }
    }

    fn fail(&mut self, witness: String) {
        self.pass = false;
        match &mut self.witness {
            Some(w) => {
                w.push_str("; ");
                w.push_str(&witness);
            }
            None => self.witness = Some(witness),
        }
    }

    /// Stable key used to sort reports.
    pub fn key(&self) -> String {
        let p: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("{}|{}", self.identity, p.join(","))
    }
}

#[macro_export]
#[doc(hidden)]
macro_rules! params {
    ($($k:expr => $v:expr),* $(,)?) => {{
        let mut m = std::collections::BTreeMap::new();
        $( m.insert($k.to_string(), $v.to_string()); )*
        m
    }};
}

/// Runs identity checks against one expansion table.
#[derive(Debug)]
pub struct Verifier<'a> {
    table: &'a ExpansionTable,
    seed: u64,
    budget: usize,
}

pub const DEFAULT_SEED: u64 = 0x006b_6b73_6368_7572;
pub const DEFAULT_BUDGET: usize = 24;

impl<'a> Verifier<'a> {
    pub fn new(table: &'a ExpansionTable) -> Self {
        Verifier { table, seed: DEFAULT_SEED, budget: DEFAULT_BUDGET }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Largest partition size any single expansion may reach.
    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn table(&self) -> &ExpansionTable {
        self.table
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    fn check_budget(&self, needed: usize) -> Result<()> {
        if needed > self.budget {
            return Err(Error::BudgetExceeded { needed, budget: self.budget });
        }
        Ok(())
    }

    /// Compares `lhs - rhs` at three random points; returns the first point
    /// where it does not vanish.
    fn random_agree(&self, key: &str, lhs: &HPolynomial, rhs: &HPolynomial) -> Option<Vec<BigInt>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ fnv1a(key));
        let diff = lhs - rhs;
        for _ in 0..3 {
            let point: Vec<BigInt> =
                (0..self.table.k()).map(|_| BigInt::from(rng.gen_range(-1000i64..=1000))).collect();
            if diff.evaluate(&point) != BigInt::from(0) {
                return Some(point);
            }
        }
        None
    }

    /// Exact and randomized comparison of two ring elements.
    fn compare(&self, report: &mut VerificationReport, lhs: &HPolynomial, rhs: &HPolynomial) {
        if lhs != rhs {
            let diff = lhs - rhs;
            let shown: Vec<String> = diff.text_lines().into_iter().take(6).collect();
            report.fail(format!("lhs - rhs = {} ({} terms)", shown.join(" + "), diff.len()));
        }
        if let Some(point) = self.random_agree(&report.key(), lhs, rhs) {
            let p: Vec<String> = point.iter().map(|x| x.to_string()).collect();
            report.fail(format!("random evaluation differs at h = ({})", p.join(",")));
        }
    }
}

fn fnv1a(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

/// Sorts reports by their instance key.
pub fn sort_reports(reports: &mut [VerificationReport]) {
    reports.sort_by_cached_key(|r| r.key());
}
