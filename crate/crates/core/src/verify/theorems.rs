//! Factorization of K-k-Schur functions indexed by unions of k-rectangles.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use super::{sort_reports, VerificationReport, Verifier};
use crate::binomial::binomial;
use crate::error::{Error, Result};
use crate::hring::{HMonomial, HPolynomial, KksVector};
use crate::params;
use crate::partition::{
    corner_residue_count, interval, is_vertical_strip, k_rectangle, partitions_bounded, sub_partitions, LevelContext,
    Partition,
};

/// A bounded `λ` split as `λ̄ ∪ (v)`, together with a rectangle index `t`.
///
/// `λ̄` must fit inside `R_{k+1-bl}` where `bl = l(λ̄)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NlaInstance {
    pub lambda: Partition,
    pub t: usize,
}

impl NlaInstance {
    pub fn new(lambda: Partition, t: usize, ctx: LevelContext) -> Result<Self> {
        let k = ctx.k();
        if lambda.is_empty() {
            return Err(Error::Hypothesis("lambda must be nonempty".into()));
        }
        if !lambda.is_bounded(k) {
            return Err(Error::NotBounded { shape: lambda.to_string(), k });
        }
        if t == 0 || t > k {
            return Err(Error::Hypothesis(format!("t = {} outside 1..=k", t)));
        }
        let inst = NlaInstance { lambda, t };
        let bl = inst.bl();
        let rect = k_rectangle(k as i64 + 1 - bl as i64, ctx);
        if !rect.contains_partition(&inst.bar()) {
            return Err(Error::Hypothesis(format!("{} does not fit in R_{}", inst.bar(), k as i64 + 1 - bl as i64)));
        }
        Ok(inst)
    }

    /// `λ̄`: `λ` without its last part.
    pub fn bar(&self) -> Partition {
        self.lambda.without_last()
    }

    pub fn bl(&self) -> usize {
        self.lambda.len() - 1
    }

    pub fn v(&self) -> usize {
        self.lambda.last()
    }

    /// `λ̄_bl >= t >= v` (only `t >= v` when `bl = 0`).
    pub fn satisfies_hypothesis(&self) -> bool {
        let bl = self.bl();
        self.t >= self.v() && (bl == 0 || self.lambda.part(bl) >= self.t)
    }

    pub fn bucket(&self, k: usize) -> RegimeBucket {
        if self.bl() + self.t <= k + 1 {
            RegimeBucket::Within
        } else {
            RegimeBucket::Beyond
        }
    }
}

/// All instances with `t >= v` and `|R_t ∪ λ| <= max_total`. With
/// `hypothesis` set, only those with `λ̄_bl >= t` are kept.
pub fn nla_instances(t: usize, max_total: usize, hypothesis: bool, ctx: LevelContext) -> Vec<NlaInstance> {
    let k = ctx.k();
    let rt = k_rectangle(t as i64, ctx).size();
    if rt > max_total {
        return Vec::new();
    }
    let room = max_total - rt;
    let mut out = Vec::new();
    for bl in 0..=k {
        let rect = k_rectangle((k + 1 - bl) as i64, ctx);
        let bars: Vec<Partition> = if bl == 0 {
            vec![Partition::empty()]
        } else {
            sub_partitions(&rect).into_iter().filter(|b| b.len() == bl).collect()
        };
        for bar in bars {
            let floor = if bl == 0 { t } else { t.min(bar.last()) };
            for v in 1..=floor {
                if bar.size() + v > room {
                    break;
                }
                let mut parts = bar.parts().to_vec();
                parts.push(v);
                let inst = NlaInstance { lambda: Partition::new(parts).expect("partition"), t };
                if !hypothesis || inst.satisfies_hypothesis() {
                    out.push(inst);
                }
            }
        }
    }
    out.sort_by(|a, b| crate::partition::graded_cmp(&a.lambda, &b.lambda));
    out
}

/// Which side of `l(λ̄) <= k+1-t` an instance falls on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegimeBucket {
    Within,
    Beyond,
}

impl RegimeBucket {
    pub fn as_str(self) -> &'static str {
        match self {
            RegimeBucket::Within => "within",
            RegimeBucket::Beyond => "beyond",
        }
    }
}

/// Outcome counts of the extended-regime scan.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RegimeSummary {
    pub within_confirmed: usize,
    pub within_counterexamples: usize,
    pub beyond_confirmed: usize,
    pub beyond_counterexamples: usize,
}

impl RegimeSummary {
    fn record(&mut self, bucket: RegimeBucket, pass: bool) {
        match (bucket, pass) {
            (RegimeBucket::Within, true) => self.within_confirmed += 1,
            (RegimeBucket::Within, false) => self.within_counterexamples += 1,
            (RegimeBucket::Beyond, true) => self.beyond_confirmed += 1,
            (RegimeBucket::Beyond, false) => self.beyond_counterexamples += 1,
        }
    }

    pub fn within_total(&self) -> usize {
        self.within_confirmed + self.within_counterexamples
    }

    pub fn beyond_total(&self) -> usize {
        self.beyond_confirmed + self.beyond_counterexamples
    }
}

/// `P = ∪ R_{t_i}^{a_i}` as a partition.
pub fn rectangle_union(spec: &[(usize, usize)], ctx: LevelContext) -> Result<Partition> {
    let mut p = Partition::empty();
    for &(t, a) in spec {
        if t == 0 || t > ctx.k() {
            return Err(Error::Hypothesis(format!("t = {} outside 1..=k", t)));
        }
        for _ in 0..a {
            p = p.union(&k_rectangle(t as i64, ctx));
        }
    }
    Ok(p)
}

fn spec_text(spec: &[(usize, usize)]) -> String {
    spec.iter().map(|(t, a)| format!("{}:{}", t, a)).collect::<Vec<_>>().join(",")
}

impl Verifier<'_> {
    fn core_interval(&self, inner: &Partition, outer: &Partition) -> Vec<Partition> {
        let cores = self.table.cores();
        let k = self.table.k();
        (0..=outer.size())
            .flat_map(|n| partitions_bounded(n, k))
            .filter(|nu| cores.core_contained(inner, nu) && cores.core_contained(nu, outer))
            .collect()
    }

    /// `kks{R_t ∪ λ} = kks{R_t} Σ kks{ν}` over bounded `ν` with
    /// `core(λ^{(t)}) ⊆ core(ν) ⊆ core(λ)`; also checks that the quotient
    /// is exactly that 0/1 vector.
    pub fn theorem_samek_verify(&self, inst: &NlaInstance) -> Result<VerificationReport> {
        if !inst.satisfies_hypothesis() {
            return Err(Error::Hypothesis(format!(
                "need lambda-bar_bl >= t >= v for {} with t = {}",
                inst.lambda, inst.t
            )));
        }
        self.samek_check("samek", inst)
    }

    fn samek_check(&self, identity: &str, inst: &NlaInstance) -> Result<VerificationReport> {
        let started = Instant::now();
        let ctx = self.table.ctx();
        let rt = k_rectangle(inst.t as i64, ctx);
        let whole = rt.union(&inst.lambda);
        self.check_budget(whole.size())?;
        let mut report = VerificationReport::new(
            identity,
            params! {"k" => ctx.k(), "t" => inst.t, "lambda" => inst.lambda},
            started,
        );
        let nus = self.core_interval(&inst.lambda.prefix_above(inst.t), &inst.lambda);
        let sum = KksVector::sum_of(nus);
        let lhs = self.table.kks_in_h(&whole)?;
        let krt = self.table.kks_in_h(&rt)?;
        let rhs = &*krt * &self.table.kks_vector_in_h(&sum)?;
        self.compare(&mut report, &lhs, &rhs);
        let recursion = self.column_recursion_quotient(inst)?;
        let recursion_matches = recursion == self.table.kks_vector_in_h(&sum)?;
        match lhs.exact_divide(&krt) {
            Ok(q) => {
                let got = self.table.to_kks_basis(&q)?;
                let diff = got.diff(&sum);
                if !diff.is_zero() {
                    report.fail(format!("quotient differs from the core interval sum by {}", diff));
                }
                if inst.satisfies_hypothesis() && recursion != q {
                    report.fail("column recursion disagrees with the quotient".into());
                }
            }
            Err(Error::NotDivisible(rem)) => report.fail(format!("not divisible, remainder {}", rem.to_text())),
            Err(e) => return Err(e),
        }
        report.params.insert("recursion_matches_sum".into(), recursion_matches.to_string());
        report.millis = started.elapsed().as_millis() as u64;
        Ok(report)
    }

    /// `kks{R_t^a} = kks{R_t} (Σ_{λ ⊆ R_t} kks{λ})^{a-1}`.
    pub fn theorem_rta_verify(&self, t: usize, a: usize) -> Result<VerificationReport> {
        let started = Instant::now();
        let ctx = self.table.ctx();
        if a == 0 {
            return Err(Error::Hypothesis("a must be positive".into()));
        }
        let whole = rectangle_union(&[(t, a)], ctx)?;
        self.check_budget(whole.size())?;
        let mut report = VerificationReport::new("rta", params! {"k" => ctx.k(), "t" => t, "a" => a}, started);
        let lhs = self.table.kks_in_h(&whole)?;
        let rhs = self.rta_product(t, a)?;
        self.compare(&mut report, &lhs, &rhs);
        report.millis = started.elapsed().as_millis() as u64;
        Ok(report)
    }

    fn rta_product(&self, t: usize, a: usize) -> Result<HPolynomial> {
        let ctx = self.table.ctx();
        let rt = k_rectangle(t as i64, ctx);
        let sum = self.table.kks_vector_in_h(&KksVector::sum_of(sub_partitions(&rt)))?;
        Ok(&*self.table.kks_in_h(&rt)? * &sum.pow(a as u32 - 1))
    }

    /// `kks{∪ R_{t_i}^{a_i}}` against both `Π kks{R_{t_i}^{a_i}}` and the
    /// fully expanded product.
    pub fn splitting_verify(&self, spec: &[(usize, usize)]) -> Result<VerificationReport> {
        let started = Instant::now();
        let ctx = self.table.ctx();
        if spec.is_empty() || spec.windows(2).any(|w| w[0].0 >= w[1].0) || spec.iter().any(|s| s.1 == 0) {
            return Err(Error::Hypothesis("need t_1 < ... < t_m and every a_i >= 1".into()));
        }
        let whole = rectangle_union(spec, ctx)?;
        self.check_budget(whole.size())?;
        let mut report =
            VerificationReport::new("split", params! {"k" => ctx.k(), "rects" => spec_text(spec)}, started);
        let lhs = self.table.kks_in_h(&whole)?;
        let mut blocks = HPolynomial::one();
        let mut expanded = HPolynomial::one();
        for &(t, a) in spec {
            blocks = &blocks * &*self.table.kks_in_h(&rectangle_union(&[(t, a)], ctx)?)?;
            expanded = &expanded * &self.rta_product(t, a)?;
        }
        self.compare(&mut report, &lhs, &blocks);
        self.compare(&mut report, &lhs, &expanded);
        report.millis = started.elapsed().as_millis() as u64;
        Ok(report)
    }

    /// `kks{P ∪ λ} = kks{P} (kks{λ} + Σ_{|μ| < |λ|} a_μ kks{μ})`.
    pub fn divisibility_verify(&self, spec: &[(usize, usize)], lambda: &Partition) -> Result<VerificationReport> {
        let started = Instant::now();
        let ctx = self.table.ctx();
        if !lambda.is_bounded(ctx.k()) {
            return Err(Error::NotBounded { shape: lambda.to_string(), k: ctx.k() });
        }
        let p = rectangle_union(spec, ctx)?;
        let whole = p.union(lambda);
        self.check_budget(whole.size())?;
        let mut report = VerificationReport::new(
            "divisibility",
            params! {"k" => ctx.k(), "rects" => spec_text(spec), "lambda" => lambda},
            started,
        );
        let lhs = self.table.kks_in_h(&whole)?;
        let kp = self.table.kks_in_h(&p)?;
        match lhs.exact_divide(&kp) {
            Ok(q) => {
                let v = self.table.to_kks_basis(&q)?;
                if v.coefficient(lambda) != BigInt::one() {
                    report.fail(format!("coefficient of {} in the quotient is {}", lambda, v.coefficient(lambda)));
                }
                for (mu, c) in v.terms() {
                    if mu != lambda && mu.size() >= lambda.size() {
                        report.fail(format!("quotient has {}*K[{}] with |mu| >= |lambda|", c, mu));
                    }
                }
                self.compare(&mut report, &lhs, &(&*kp * &q));
            }
            Err(Error::NotDivisible(rem)) => report.fail(format!("not divisible, remainder {}", rem.to_text())),
            Err(e) => return Err(e),
        }
        report.millis = started.elapsed().as_millis() as u64;
        Ok(report)
    }

    /// `h_s (h_r kks{λ}) = h_r (h_s kks{λ})` computed with the Pieri rule
    /// alone.
    pub fn pieri_order_verify(&self, lambda: &Partition, r: usize, s: usize) -> Result<VerificationReport> {
        let started = Instant::now();
        let mut report = VerificationReport::new(
            "pieri-order",
            params! {"k" => self.table.k(), "lambda" => lambda, "r" => r, "s" => s},
            started,
        );
        let base = KksVector::basis(lambda.clone());
        let rs = self.table.pieri_apply(&self.table.pieri_apply(&base, r)?, s)?;
        let sr = self.table.pieri_apply(&self.table.pieri_apply(&base, s)?, r)?;
        let diff = rs.diff(&sr);
        if !diff.is_zero() {
            report.fail(format!("h_s h_r - h_r h_s = {}", diff));
        }
        report.millis = started.elapsed().as_millis() as u64;
        Ok(report)
    }

    /// The expansion of `kks{R_t ∪ λ} / kks{R_t}` obtained from the column
    /// recursion on `λ̄`:
    ///
    /// `Σ_μ (-1)^{|μ/λ̄|} Σ_{μ° ⊆ η ⊆ μ} kks{η} Σ_i binom(q + δ + i - 1, i) h_{v-|μ/λ̄|-i}`
    ///
    /// over `λ̄ ⊆ μ ⊆ R_{k+1-bl}` with `μ/λ̄` a vertical strip, where
    /// `q = |μ/λ̄| + r_{μ'λ̄'}` and `δ = [λ̄'_t = μ'_{t+1}]`.
    pub fn column_recursion_quotient(&self, inst: &NlaInstance) -> Result<HPolynomial> {
        let ctx = self.table.ctx();
        let k = ctx.k();
        let bar = inst.bar();
        let bl = inst.bl();
        let t = inst.t;
        let v = inst.v() as i64;
        let rect = k_rectangle((k + 1 - bl) as i64, ctx);
        let outer = if bl == 0 { Partition::empty() } else { rect };
        let bar_c = bar.conjugate();
        let mut out = HPolynomial::zero();
        for mu in interval(&bar, &outer) {
            if !is_vertical_strip(&mu, &bar) {
                continue;
            }
            let strip = mu.difference_size(&bar) as i64;
            if strip > v {
                continue;
            }
            let q = strip + corner_residue_count(&mu.conjugate(), &bar_c, ctx) as i64;
            let delta = i64::from(bar.column(t) == mu.column(t + 1));
            let mut factor = HPolynomial::zero();
            for i in 0..=v - strip {
                let c = binomial(q + delta + i - 1, i);
                factor.add_scaled(&HPolynomial::generator(v - strip - i, ctx)?, &c, &HMonomial::one());
            }
            let etas = KksVector::sum_of(interval(&mu.prefix_above(t), &mu));
            let term = &self.table.kks_vector_in_h(&etas)? * &factor;
            let sign = if strip % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            out.add_scaled(&term, &sign, &HMonomial::one());
        }
        Ok(out)
    }

    /// Every Theorem-4 instance for one `t` up to `|R_t ∪ λ| <= max_total`.
    pub fn samek_sweep(&self, t: usize, max_total: usize) -> Result<Vec<VerificationReport>> {
        let instances = nla_instances(t, max_total, true, self.table.ctx());
        self.run_samek(&instances, "samek").map(|v| v.into_iter().map(|(r, _)| r).collect())
    }

    fn run_samek(&self, instances: &[NlaInstance], identity: &str) -> Result<Vec<(VerificationReport, RegimeBucket)>> {
        let k = self.table.k();
        let ctx = self.table.ctx();
        if let Some(max) = instances.iter().map(|i| k_rectangle(i.t as i64, ctx).union(&i.lambda).size()).max() {
            self.check_budget(max)?;
            self.table.ensure_size(max)?;
        }
        let mut out: Vec<_> = instances
            .par_iter()
            .map(|inst| {
                self.samek_check(identity, inst).map(|mut r| {
                    let bucket = inst.bucket(k);
                    r.params.insert("bucket".into(), bucket.as_str().into());
                    r.params.insert("hypothesis".into(), inst.satisfies_hypothesis().to_string());
                    (r, bucket)
                })
            })
            .collect::<Result<_>>()?;
        out.sort_by_cached_key(|(r, _)| r.key());
        Ok(out)
    }

    /// Runs the factorization for every instance with `t >= v`, including
    /// those with `λ̄_bl < t`, and tallies the outcome by bucket. Failures
    /// are recorded, never raised.
    pub fn extended_regime_scan(&self, t: usize, max_total: usize) -> Result<(Vec<VerificationReport>, RegimeSummary)> {
        let instances = nla_instances(t, max_total, false, self.table.ctx());
        let results = self.run_samek(&instances, "regime-scan")?;
        let mut summary = RegimeSummary::default();
        let mut reports = Vec::with_capacity(results.len());
        for (r, bucket) in results {
            summary.record(bucket, r.pass);
            reports.push(r);
        }
        sort_reports(&mut reports);
        Ok((reports, summary))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::ExpansionTable;
    use crate::part;

    fn table(k: usize) -> ExpansionTable {
        ExpansionTable::new(LevelContext::new(k).unwrap())
    }

    #[test]
    fn instance_validation() {
        let c = LevelContext::new(4).unwrap();
        assert!(NlaInstance::new(part![3, 3], 3, c).is_ok());
        // λ̄ = (4,4) does not fit in R_3 = (3,3)
        assert!(NlaInstance::new(part![4, 4, 1], 3, c).is_err());
        assert!(NlaInstance::new(part![4, 4], 3, c).is_ok());
        assert!(NlaInstance::new(part![], 3, c).is_err());
        let i = NlaInstance::new(part![3, 2], 3, c).unwrap();
        assert_eq!((i.bl(), i.v()), (1, 2));
        assert!(i.satisfies_hypothesis());
        assert!(!NlaInstance::new(part![2, 2], 3, c).unwrap().satisfies_hypothesis());
    }

    #[test]
    fn instances_enumeration_respects_budget() {
        let c = LevelContext::new(3).unwrap();
        for inst in nla_instances(2, 10, true, c) {
            assert!(inst.satisfies_hypothesis());
            assert!(k_rectangle(2, c).union(&inst.lambda).size() <= 10);
        }
        let all = nla_instances(2, 10, false, c);
        assert!(all.len() > nla_instances(2, 10, true, c).len());
    }

    #[test]
    fn worked_example_k4_t3() {
        let t = table(4);
        let v = Verifier::new(&t);
        let r = v.theorem_samek_verify(&NlaInstance::new(part![3, 3], 3, t.ctx()).unwrap()).unwrap();
        assert!(r.pass, "{:?}", r);
    }

    #[test]
    fn single_row_lambda() {
        let t = table(3);
        let v = Verifier::new(&t);
        for tt in 1..=3 {
            for vv in 1..=tt {
                let inst = NlaInstance::new(Partition::new(vec![vv]).unwrap(), tt, t.ctx()).unwrap();
                assert!(v.theorem_samek_verify(&inst).unwrap().pass);
            }
        }
    }

    #[test]
    fn hypothesis_is_enforced() {
        let t = table(4);
        let v = Verifier::new(&t);
        let inst = NlaInstance::new(part![2, 2], 3, t.ctx()).unwrap();
        assert!(matches!(v.theorem_samek_verify(&inst), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn rta_small() {
        let t = table(2);
        let v = Verifier::new(&t);
        assert!(v.theorem_rta_verify(1, 1).unwrap().pass);
        assert!(v.theorem_rta_verify(1, 3).unwrap().pass);
    }

    #[test]
    fn splitting_k2() {
        let t = table(2);
        let v = Verifier::new(&t);
        assert!(v.splitting_verify(&[(1, 1), (2, 1)]).unwrap().pass);
        assert!(v.splitting_verify(&[(2, 1), (1, 1)]).is_err());
    }

    #[test]
    fn divisibility_cases() {
        let t = table(3);
        let v = Verifier::new(&t);
        assert!(v.divisibility_verify(&[(2, 1)], &part![2, 1]).unwrap().pass);
        assert!(v.divisibility_verify(&[(2, 1)], &part![]).unwrap().pass);
    }

    #[test]
    fn budget_is_enforced() {
        let t = table(4);
        let v = Verifier::new(&t).with_budget(5);
        assert!(matches!(v.theorem_rta_verify(3, 2), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn scan_outside_hypothesis_contradicts_splitting() {
        // λ = (1,1,1) = R_1 at k = 3 is in the l(λ̄) <= k+1-t bucket for t = 2,
        // but kks{R_2 ∪ R_1} = kks{R_2} kks{R_1}, not kks{R_2} Σ_{ν <= R_1} kks{ν}
        let t = table(3);
        let v = Verifier::new(&t);
        assert!(v.splitting_verify(&[(1, 1), (2, 1)]).unwrap().pass);
        let (reports, summary) = v.extended_regime_scan(2, 7).unwrap();
        let r = reports.iter().find(|r| r.params["lambda"] == "1,1,1").unwrap();
        assert_eq!(r.params["bucket"], "within");
        assert!(!r.pass);
        assert!(summary.within_counterexamples >= 1);
    }

    #[test]
    fn pieri_order_small() {
        let t = table(3);
        let v = Verifier::new(&t);
        assert!(v.pieri_order_verify(&part![2, 1], 1, 3).unwrap().pass);
    }
}
