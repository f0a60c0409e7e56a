//! Coefficients of `Σ_{μ° ⊆ η ⊆ μ} kks{η} · Σ_{i>=0} binom(d+i, e) h_{a-i}`.
//!
//! Here `μ ⊆ R_{k+1-bl}` has exactly `bl` rows and `μ°` is the prefix of
//! parts of `μ` larger than `t`. The closed formulas split on whether
//! `ν_1 <= k+1-bl`.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use super::{VerificationReport, Verifier};
use crate::binomial::binomial;
use crate::cores::CoreCache;
use crate::error::{Error, Result};
use crate::hring::{HMonomial, HPolynomial, KksVector};
use crate::params;
use crate::partition::{
    corner_residue_count, interval, is_horizontal_strip, k_rectangle, partitions_bounded, sub_partitions, LevelContext,
    Partition,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepAInstance {
    pub mu: Partition,
    pub t: usize,
    pub d: i64,
    pub e: i64,
    pub a: i64,
}

impl StepAInstance {
    pub fn new(mu: Partition, t: usize, d: i64, e: i64, a: i64, ctx: LevelContext) -> Result<Self> {
        let bl = mu.len();
        let k = ctx.k();
        if bl > k && !mu.is_empty() {
            return Err(Error::Hypothesis(format!("{} has more than k rows", mu)));
        }
        let rect = k_rectangle(k as i64 + 1 - bl as i64, ctx);
        if !rect.contains_partition(&mu) {
            return Err(Error::Hypothesis(format!("{} is not inside R_{}", mu, k + 1 - bl)));
        }
        if t == 0 || t > k {
            return Err(Error::Hypothesis(format!("t = {} outside 1..=k", t)));
        }
        if e < 0 || a < 0 {
            return Err(Error::Hypothesis(format!("e = {}, a = {} must be nonnegative", e, a)));
        }
        Ok(StepAInstance { mu, t, d, e, a })
    }

    pub fn bl(&self) -> usize {
        self.mu.len()
    }

    /// `μ°`: the parts of `μ` greater than `t`.
    pub fn mu_circ(&self) -> Partition {
        self.mu.prefix_above(self.t)
    }

    fn params(&self) -> std::collections::BTreeMap<String, String> {
        params! {"mu" => self.mu, "t" => self.t, "d" => self.d, "e" => self.e, "a" => self.a}
    }
}

/// Which branch of the coefficient formula applies to a given `ν`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StepACase {
    /// `ν_1 <= k+1-bl`
    Short,
    /// `ν_1 > k+1-bl` and the row-matching condition is empty
    LongVacuous,
    /// `ν_1 > k+1-bl` and `μ_j = ν_{j+1}` is required for some rows
    LongBinding,
}

/// The data every branch of the formula needs.
struct Branch {
    case: StepACase,
    /// indicator product (containment, horizontal strip, row matching)
    admissible: bool,
    /// `|ν ∖ μ|` in the short case, `A` in the long case
    shift: i64,
    residues: i64,
}

fn branch(inst: &StepAInstance, nu: &Partition, ctx: LevelContext) -> Branch {
    let k = ctx.k();
    let bl = inst.bl();
    let mu = &inst.mu;
    let mu_c = inst.mu_circ();
    let residues = corner_residue_count(nu, &mu_c, ctx) as i64;
    let base = nu.contains_partition(&mu_c) && is_horizontal_strip(nu, mu);
    let width = k + 1 - bl;
    if nu.first() <= width {
        return Branch { case: StepACase::Short, admissible: base, shift: nu.difference_size(mu) as i64, residues };
    }
    let u = nu.first() - width;
    // nu_1 <= k forces 1 <= u <= bl - 1
    let top = bl - u;
    let head_excess: usize = (1..=top).map(|i| nu.part(i).saturating_sub(mu.part(i))).sum();
    let shift = (nu.part(top + 1) + head_excess) as i64;
    let (case, matching) = if mu_c.len() < top + 1 {
        (StepACase::LongVacuous, true)
    } else {
        (StepACase::LongBinding, (top + 1..=mu_c.len()).all(|j| mu.part(j) == nu.part(j + 1)))
    };
    Branch { case, admissible: base && matching, shift, residues }
}

/// The coefficient `b_ν`, from the alternating-sum form (valid for every
/// `d` and `e >= 0`).
pub fn step_a_coefficient(inst: &StepAInstance, nu: &Partition, ctx: LevelContext) -> BigInt {
    let br = branch(inst, nu, ctx);
    if !br.admissible {
        return BigInt::zero();
    }
    let mut total = BigInt::zero();
    let upper = br.residues.min(inst.a - br.shift);
    for x in 0..=upper {
        let term = binomial(inst.d + inst.a - br.shift - x, inst.e) * binomial(br.residues, x);
        if x % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// The closed form of `b_ν`, available when `d = e >= 0`.
pub fn step_a_coefficient_closed(inst: &StepAInstance, nu: &Partition, ctx: LevelContext) -> Option<BigInt> {
    if inst.d != inst.e || inst.d < 0 {
        return None;
    }
    let br = branch(inst, nu, ctx);
    if !br.admissible || inst.a < br.shift {
        return Some(BigInt::zero());
    }
    Some(binomial(inst.d + inst.a - br.shift - br.residues, inst.a - br.shift))
}

/// How many nonzero coefficients each branch produced.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StepACoverage {
    pub short: usize,
    pub long_vacuous: usize,
    pub long_binding: usize,
    pub instances: usize,
}

impl StepACoverage {
    fn record(&mut self, case: StepACase) {
        match case {
            StepACase::Short => self.short += 1,
            StepACase::LongVacuous => self.long_vacuous += 1,
            StepACase::LongBinding => self.long_binding += 1,
        }
    }

    pub fn merge(mut self, other: StepACoverage) -> StepACoverage {
        self.short += other.short;
        self.long_vacuous += other.long_vacuous;
        self.long_binding += other.long_binding;
        self.instances += other.instances;
        self
    }
}

/// `Σ_{inner ⊆ η ⊆ outer} kks{η} · Σ_{i=0}^{a} weight(i) h_{a-i}` in the `h`-ring.
fn interval_times_h_sum(
    table: &crate::engine::ExpansionTable,
    inner: &Partition,
    outer: &Partition,
    a: i64,
    weight: impl Fn(i64) -> BigInt,
) -> Result<HPolynomial> {
    let mut factor = HPolynomial::zero();
    for i in 0..=a {
        let w = weight(i);
        factor.add_scaled(&HPolynomial::generator(a - i, table.ctx())?, &w, &HMonomial::one());
    }
    let shapes = interval(inner, outer);
    let sum = table.kks_vector_in_h(&KksVector::sum_of(shapes))?;
    Ok(&sum * &factor)
}

impl Verifier<'_> {
    /// Expands the left-hand side through the engine and compares every
    /// coefficient with the closed formulas.
    pub fn step_a_verify(&self, inst: &StepAInstance) -> Result<VerificationReport> {
        self.step_a_verify_detailed(inst).map(|(r, _)| r)
    }

    pub fn step_a_verify_detailed(&self, inst: &StepAInstance) -> Result<(VerificationReport, StepACoverage)> {
        let started = Instant::now();
        let ctx = self.table.ctx();
        let top = inst.mu.size() + inst.a as usize;
        self.check_budget(top)?;
        let lhs =
            interval_times_h_sum(self.table, &inst.mu_circ(), &inst.mu, inst.a, |i| binomial(inst.d + i, inst.e))?;
        let computed = self.table.to_kks_basis(&lhs)?;

        let mut report = VerificationReport::new("step-a", inst.params(), started);
        let mut coverage = StepACoverage { instances: 1, ..Default::default() };
        let mut candidates: Vec<Partition> = (0..=top).flat_map(|n| partitions_bounded(n, ctx.k())).collect();
        candidates.extend(computed.support().cloned());
        candidates.sort();
        candidates.dedup();
        for nu in &candidates {
            let got = computed.coefficient(nu);
            let formula = step_a_coefficient(inst, nu, ctx);
            if got != formula {
                report.fail(format!("nu={}: expansion {} vs formula {}", nu, got, formula));
            }
            if let Some(closed) = step_a_coefficient_closed(inst, nu, ctx) {
                if closed != formula {
                    report.fail(format!("nu={}: closed form {} vs alternating sum {}", nu, closed, formula));
                }
            }
            if !got.is_zero() {
                coverage.record(branch(inst, nu, ctx).case);
            }
        }
        report.millis = started.elapsed().as_millis() as u64;
        Ok((report, coverage))
    }

    /// The column-strip expansion used for the rectangle `R_t`: with
    /// `μ = ((t+1)^j, t^{k-t-j})`, `d = e = j` and `a = t - j`.
    ///
    /// Also checks that no contributing `ν` has `ν'_{t+1} = k-t+1`.
    pub fn rectangle_strip_verify(&self, t: usize, j: usize) -> Result<VerificationReport> {
        rectangle_strip_verify(self, t, j)
    }
}

/// Right-hand side coefficient of the column-strip expansion for `R_t`.
pub fn rectangle_strip_coefficient(t: usize, j: usize, nu: &Partition, cores: &CoreCache) -> BigInt {
    let k = cores.ctx().k();
    let (ti, ji) = (t as i64, j as i64);
    let col = nu.column(t + 1) as i64;
    if col < ji || col > ji + 1 {
        return BigInt::zero();
    }
    let mut total = BigInt::zero();
    // nu ⊆ ((t+1)^{k+1-t})
    let small_box = Partition::new(vec![t + 1; k + 1 - t]).expect("rectangle");
    if small_box.contains_partition(nu) {
        let bar = Partition::new(vec![t; k - t]).expect("rectangle");
        let excess = nu.difference_size(&bar) as i64;
        if excess <= ti {
            let top = ti - nu.part(k + 1 - t) as i64 - i64::from(col > 0);
            total += binomial(top, ti - excess);
        }
    }
    // nu ⊆ (k, (t+1)^{k-t}) with nu_1 > t+1
    let mut wide = vec![t + 1; k - t + 1];
    wide[0] = k;
    let wide = Partition::new(wide).expect("shape");
    if nu.first() > t + 1 && wide.contains_partition(nu) {
        let c1 = cores.core_of(nu).first() as i64;
        if c1 + col - 1 <= 2 * ti {
            total += binomial(2 * ti - c1, 2 * ti - c1 + 1 - col);
        }
    }
    total
}

pub fn rectangle_strip_verify(v: &Verifier<'_>, t: usize, j: usize) -> Result<VerificationReport> {
    let started = Instant::now();
    let table = v.table();
    let k = table.k();
    if t == 0 || t > k || j > k - t {
        return Err(Error::Hypothesis(format!("need 1 <= t <= k and j <= k - t (t={}, j={})", t, j)));
    }
    let mut outer = vec![t + 1; j];
    outer.extend(std::iter::repeat_n(t, k - t - j));
    let outer = Partition::new(outer)?;
    let inner = Partition::new(vec![t + 1; j])?;
    let a = t as i64 - j as i64;
    let top = outer.size() + a.max(0) as usize;
    v.check_budget(top)?;
    let mut report = VerificationReport::new("rectangle-strip", params! {"k" => k, "t" => t, "j" => j}, started);
    let lhs = if a < 0 {
        HPolynomial::zero()
    } else {
        interval_times_h_sum(table, &inner, &outer, a, |i| binomial(i + j as i64, i))?
    };
    let computed = table.to_kks_basis(&lhs)?;
    let mut candidates: Vec<Partition> = (0..=top).flat_map(|n| partitions_bounded(n, k)).collect();
    candidates.extend(computed.support().cloned());
    candidates.sort();
    candidates.dedup();
    for nu in &candidates {
        let got = computed.coefficient(nu);
        let want = rectangle_strip_coefficient(t, j, nu, table.cores());
        if got != want {
            report.fail(format!("nu={}: expansion {} vs formula {}", nu, got, want));
        }
        if !got.is_zero() && nu.column(t + 1) == k - t + 1 {
            report.fail(format!("nu={} has column t+1 of full length {}", nu, k - t + 1));
        }
    }
    report.millis = started.elapsed().as_millis() as u64;
    Ok(report)
}

/// Every `(μ, t, d = e, a)` instance for one level: all `bl` in `1..=k`,
/// all `μ ⊆ R_{k+1-bl}` with exactly `bl` rows, every `t`, the given `d`
/// values and `a` values. Instances with `a > k` are skipped because
/// `h_a` is not a generator of the ring.
pub fn step_a_sweep(v: &Verifier<'_>, ds: &[i64], as_: &[i64]) -> Result<(Vec<VerificationReport>, StepACoverage)> {
    let ctx = v.table().ctx();
    let k = ctx.k();
    let mut instances = Vec::new();
    for bl in 1..=k {
        let rect = k_rectangle((k + 1 - bl) as i64, ctx);
        for mu in sub_partitions(&rect).into_iter().filter(|m| m.len() == bl) {
            for t in 1..=k {
                for &d in ds {
                    for &a in as_.iter().filter(|&&a| a >= 0 && a as usize <= k) {
                        instances.push(StepAInstance::new(mu.clone(), t, d, d, a, ctx)?);
                    }
                }
            }
        }
    }
    if let Some(max) = instances.iter().map(|i| i.mu.size() + i.a as usize).max() {
        v.table().ensure_size(max)?;
    }
    let results: Vec<_> = instances.par_iter().map(|inst| v.step_a_verify_detailed(inst)).collect::<Result<_>>()?;
    let mut coverage = StepACoverage::default();
    let mut reports = Vec::with_capacity(results.len());
    for (r, c) in results {
        coverage = coverage.merge(c);
        reports.push(r);
    }
    for t in 1..=k {
        for j in 0..=k - t {
            reports.push(v.rectangle_strip_verify(t, j)?);
        }
    }
    super::sort_reports(&mut reports);
    Ok((reports, coverage))
}
