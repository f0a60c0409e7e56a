//! Generalized binomial coefficients.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// `binom(n, j)`: zero for `j < 0`, otherwise the falling factorial
/// `n (n-1) ... (n-j+1) / j!`, which is valid for negative `n`.
pub fn binomial(n: i64, j: i64) -> BigInt {
    if j < 0 {
        return BigInt::zero();
    }
    if n >= 0 && j > n {
        return BigInt::zero();
    }
    // symmetric reduction for nonnegative tops keeps the loop short
    let j = if n >= 0 && 2 * j > n { n - j } else { j };
    let mut acc = BigInt::one();
    for i in 0..j {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `binomial` for callers that know the value fits.
pub fn binomial_i64(n: i64, j: i64) -> i64 {
    i64::try_from(binomial(n, j)).expect("binomial overflows i64")
}

#[cfg(test)]
mod tests {
    use super::*;

    // Pascal-triangle oracle, extended to negative tops by
    // binom(n, j) = binom(n+1, j) - binom(n, j-1).
    fn pascal(n: i64, j: i64) -> i64 {
        if j < 0 {
            return 0;
        }
        if j == 0 {
            return 1;
        }
        if n >= 0 {
            if j > n {
                return 0;
            }
            return pascal(n - 1, j - 1) + pascal(n - 1, j);
        }
        pascal(n + 1, j) - pascal(n, j - 1)
    }

    #[test]
    fn matches_pascal_oracle() {
        for n in -8..=12 {
            for j in -3..=12 {
                assert_eq!(binomial_i64(n, j), pascal(n, j), "binom({n},{j})");
            }
        }
    }

    #[test]
    fn known_values() {
        assert_eq!(binomial_i64(4, 2), 6);
        assert_eq!(binomial_i64(-1, 3), -1);
        assert_eq!(binomial_i64(-2, 2), 3);
        assert_eq!(binomial_i64(0, 0), 1);
        assert_eq!(binomial_i64(5, -1), 0);
    }
}
