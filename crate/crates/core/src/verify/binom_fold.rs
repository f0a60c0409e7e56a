use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Zero;

use super::VerificationReport;
use crate::binomial::binomial;
use crate::params;

/// Both sides of the folding identity
///
/// `Σ_{x=0}^{min(a,b)} (-1)^x binom(q - [x = b], a - x) = [a, b >= 0] binom(q - 1, a)`.
pub fn binom_fold_sides(q: i64, a: i64, b: i64) -> (BigInt, BigInt) {
    let mut lhs = BigInt::zero();
    for x in 0..=a.min(b) {
        let top = q - i64::from(x == b);
        let term = binomial(top, a - x);
        if x % 2 == 0 {
            lhs += term;
        } else {
            lhs -= term;
        }
    }
    let rhs = if a >= 0 && b >= 0 { binomial(q - 1, a) } else { BigInt::zero() };
    (lhs, rhs)
}

pub fn binom_fold_check(q: i64, a: i64, b: i64) -> VerificationReport {
    let started = Instant::now();
    let (lhs, rhs) = binom_fold_sides(q, a, b);
    let mut report = VerificationReport::new("binom-fold", params! {"q" => q, "a" => a, "b" => b}, started);
    if lhs != rhs {
        report.fail(format!("lhs {} != rhs {}", lhs, rhs));
    }
    report.millis = started.elapsed().as_millis() as u64;
    report
}
