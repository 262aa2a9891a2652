//! Exact binomial coefficients over arbitrary-precision integers.
//!
//! Counts routinely overflow 64 bits, so every coefficient is a [`BigUint`].
//! Small rows are served from a precomputed Pascal table; larger ones fall
//! back to the multiplicative formula with exact division.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::sync::OnceLock;

/// Rows `n < TABLE_ROWS` are precomputed.
const TABLE_ROWS: usize = 65;

struct PascalTable {
    rows: Vec<Vec<BigUint>>,
}

impl PascalTable {
    fn new() -> Self {
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(TABLE_ROWS);
        for n in 0..TABLE_ROWS {
            let mut row = vec![BigUint::one(); n + 1];
            for k in 1..n {
                row[k] = &rows[n - 1][k - 1] + &rows[n - 1][k];
            }
            rows.push(row);
        }
        PascalTable { rows }
    }
}

fn table() -> &'static PascalTable {
    static TABLE: OnceLock<PascalTable> = OnceLock::new();
    TABLE.get_or_init(PascalTable::new)
}

/// C(n, k) with the usual boundary conventions: 0 when `k < 0` or `k > n`.
pub fn binomial(n: u64, k: i64) -> BigUint {
    if k < 0 {
        return BigUint::zero();
    }
    let k = k as u64;
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    if (n as usize) < TABLE_ROWS {
        return table().rows[n as usize][k as usize].clone();
    }
    // Multiplicative form; each intermediate division is exact because the
    // running product is C(n - k + i, i) * i!.
    let mut result = BigUint::one();
    for i in 1..=k {
        result = result * BigUint::from(n - k + i) / BigUint::from(i);
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_conventions() {
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(4, 0), BigUint::one());
        assert_eq!(binomial(4, 5), BigUint::zero());
        assert_eq!(binomial(4, -1), BigUint::zero());
        assert_eq!(binomial(0, 0), BigUint::one());
    }

    /// Independent Pascal-triangle oracle, grown row by row without the
    /// table or the multiplicative path.
    fn pascal_oracle(n: usize, k: usize) -> BigUint {
        let mut row = vec![BigUint::one()];
        for _ in 0..n {
            let mut next = vec![BigUint::one(); row.len() + 1];
            for i in 1..row.len() {
                next[i] = &row[i - 1] + &row[i];
            }
            row = next;
        }
        row[k].clone()
    }

    #[test]
    fn matches_pascal_oracle() {
        assert_eq!(binomial(50, 25), pascal_oracle(50, 25));
        assert_eq!(
            binomial(50, 25),
            "126410606437752".parse::<BigUint>().unwrap()
        );
        // Cross the table boundary in both directions.
        for n in [10u64, 63, 64, 65, 80, 100] {
            for k in [0i64, 1, 2, 7, n as i64 / 2, n as i64] {
                assert_eq!(binomial(n, k), pascal_oracle(n as usize, k as usize));
            }
        }
    }

    #[test]
    fn symmetry() {
        for n in 0..40u64 {
            for k in 0..=n {
                assert_eq!(binomial(n, k as i64), binomial(n, (n - k) as i64));
            }
        }
    }
}
