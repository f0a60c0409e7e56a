//! Acceptance suite. Prints one line per criterion and exits nonzero if any
//! criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use kkschur::cores::{bdd_shape, core_shape, is_core};
use kkschur::partition::{k_rectangle, partitions_bounded, partitions_of, sub_partitions};
use kkschur::verify::{binom_fold_check, nla_instances, step_a_sweep, NlaInstance, VerificationReport, Verifier};
use kkschur::{ExpansionTable, KksVector, LevelContext, Result};

fn ctx(k: usize) -> LevelContext {
    LevelContext::new(k).unwrap()
}

fn summarize(reports: &[VerificationReport]) -> (bool, String) {
    let failed: Vec<&VerificationReport> = reports.iter().filter(|r| !r.pass).collect();
    let mut msg = format!("{} instances, {} failed", reports.len(), failed.len());
    if let Some(f) = failed.first() {
        msg.push_str(&format!("; first: {} {}", f.key(), f.witness.clone().unwrap_or_default()));
    }
    (failed.is_empty() && !reports.is_empty(), msg)
}

fn worked_example() -> Result<(bool, String)> {
    let c = ctx(4);
    let table = ExpansionTable::new(c);
    let v = Verifier::new(&table);
    let r3 = k_rectangle(3, c);
    let report = v.theorem_samek_verify(&NlaInstance::new(r3.clone(), 3, c)?)?;
    let lhs = table.kks_in_h(&r3.union(&r3))?;
    let q = lhs.exact_divide(&*table.kks_in_h(&r3)?)?;
    let expected = KksVector::sum_of(sub_partitions(&r3));
    let got = table.to_kks_basis(&q)?;
    let ok = report.pass && got == expected;
    Ok((ok, format!("quotient has {} terms, all coefficient 1: {}", got.len(), got == expected)))
}

fn samek_sweep() -> Result<(bool, String)> {
    let mut reports = Vec::new();
    for k in 1..=4 {
        let table = ExpansionTable::new(ctx(k));
        let v = Verifier::new(&table);
        for t in 1..=k {
            reports.extend(v.samek_sweep(t, 14)?);
        }
    }
    Ok(summarize(&reports))
}

fn rta_and_split() -> Result<(bool, String)> {
    let mut reports = Vec::new();
    for (k, t, a) in [(2, 1, 2), (2, 1, 3), (2, 2, 2), (3, 1, 2), (3, 2, 2), (3, 3, 2), (4, 3, 2)] {
        let table = ExpansionTable::new(ctx(k));
        reports.push(Verifier::new(&table).theorem_rta_verify(t, a)?);
    }
    let cases: [(usize, &[(usize, usize)]); 3] =
        [(2, &[(1, 1), (2, 1)]), (3, &[(1, 1), (2, 1)]), (3, &[(1, 2), (3, 1)])];
    for (k, spec) in cases {
        let table = ExpansionTable::new(ctx(k));
        reports.push(Verifier::new(&table).splitting_verify(spec)?);
    }
    Ok(summarize(&reports))
}

fn step_a() -> Result<(bool, String)> {
    let mut reports = Vec::new();
    let mut coverage = kkschur::verify::StepACoverage::default();
    for k in [2, 3] {
        let table = ExpansionTable::new(ctx(k));
        let v = Verifier::new(&table);
        // h_a must be a generator, so a runs over 0..=min(3, k)
        let (r, c) = step_a_sweep(&v, &[0, 1, 2], &[0, 1, 2, 3])?;
        reports.extend(r);
        coverage = coverage.merge(c);
    }
    let (ok, msg) = summarize(&reports);
    let covered = coverage.short > 0 && coverage.long_vacuous > 0 && coverage.long_binding > 0;
    Ok((
        ok && covered,
        format!(
            "{}; nonzero coefficients by branch: short {}, long/vacuous {}, long/binding {}; a = 3 skipped at k = 2",
            msg, coverage.short, coverage.long_vacuous, coverage.long_binding
        ),
    ))
}

fn binom_fold() -> Result<(bool, String)> {
    let mut reports = Vec::new();
    for q in -6..=6 {
        for a in -2..=6 {
            for b in -2..=6 {
                reports.push(binom_fold_check(q, a, b));
            }
        }
    }
    Ok(summarize(&reports))
}

fn round_trips() -> Result<(bool, String)> {
    let mut bounded = 0;
    let mut cores = 0;
    let mut bad = Vec::new();
    for k in 1..=5 {
        for n in 0..=10 {
            for lambda in partitions_bounded(n, k) {
                bounded += 1;
                if bdd_shape(&core_shape(&lambda, k), k) != lambda {
                    bad.push(format!("k={} bdd(core({}))", k, lambda));
                }
            }
        }
        for n in 0..=14 {
            for kappa in partitions_of(n).into_iter().filter(|p| is_core(p, k)) {
                cores += 1;
                if core_shape(&bdd_shape(&kappa, k), k) != kappa {
                    bad.push(format!("k={} core(bdd({}))", k, kappa));
                }
            }
        }
    }
    Ok((
        bad.is_empty(),
        format!("{} bounded partitions, {} cores, {} mismatches {:?}", bounded, cores, bad.len(), bad.first()),
    ))
}

fn pieri_order() -> Result<(bool, String)> {
    let mut reports = Vec::new();
    for k in 1..=4 {
        let table = ExpansionTable::new(ctx(k));
        let v = Verifier::new(&table);
        for n in 0..=6 {
            for lambda in partitions_bounded(n, k) {
                for r in 0..=k {
                    for s in r + 1..=k {
                        reports.push(v.pieri_order_verify(&lambda, r, s)?);
                    }
                }
            }
        }
    }
    Ok(summarize(&reports))
}

fn regime_scan() -> Result<(bool, String)> {
    let c = ctx(3);
    let table = ExpansionTable::new(c);
    let v = Verifier::new(&table);
    let (reports, s) = v.extended_regime_scan(2, 12)?;
    let failures = |bucket: &str| -> Vec<String> {
        reports
            .iter()
            .filter(|r| !r.pass && r.params.get("bucket").map(String::as_str) == Some(bucket))
            .map(|r| r.params["lambda"].clone())
            .collect()
    };
    let outside = nla_instances(2, 12, false, c).len() - nla_instances(2, 12, true, c).len();
    Ok((
        s.within_total() > 0 && s.within_counterexamples == 0,
        format!(
            "l(bar) <= k+1-t: {}/{} confirmed, counterexamples {:?}; l(bar) > k+1-t: {} confirmed, {} counterexamples {:?}; {} instances outside the original hypothesis",
            s.within_confirmed,
            s.within_total(),
            failures("within"),
            s.beyond_confirmed,
            s.beyond_counterexamples,
            failures("beyond"),
            outside
        ),
    ))
}

/// Name, check, and whether a failure affects the exit status. The regime
/// scan is observational: its outcome is printed but never asserted.
type Criterion = (&'static str, fn() -> Result<(bool, String)>, bool);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 worked example k=4 t=3", worked_example, true),
        ("2 rectangle factorization sweep k<=4 size<=14", samek_sweep, true),
        ("3 rectangle powers and splitting", rta_and_split, true),
        ("4 strip coefficient formulas k in {2,3}", step_a, true),
        ("5 binomial folding", binom_fold, true),
        ("6 bdd/core round trips", round_trips, true),
        ("7 Pieri order swap k<=4 |lambda|<=6", pieri_order, true),
        ("8 extended regime scan k=3 t=2 size<=12", regime_scan, false),
    ];
    let mut all = true;
    for (name, run, asserted) in criteria {
        let started = Instant::now();
        let (ok, msg) = match run() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {}", e)),
        };
        if asserted {
            all &= ok;
        }
        println!(
            "criterion {}: {}{} ({:.2}s) {}",
            name,
            if ok { "PASS" } else { "FAIL" },
            if asserted { "" } else { " [observational, not asserted]" },
            started.elapsed().as_secs_f64(),
            msg
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
