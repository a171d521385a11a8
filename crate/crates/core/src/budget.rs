//! Enumeration budgets shared by the exhaustive searches.

use std::fmt;

/// Default cap on the number of assignments an exhaustive search may visit.
pub const DEFAULT_BUDGET: u64 = 1 << 28;

/// Default cap on depth-first search nodes for tensor rank decisions.
pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BudgetExceeded {
    pub what: String,
    pub budget: u64,
}

impl fmt::Display for BudgetExceeded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "search space {} exceeds budget {}",
            self.what, self.budget
        )
    }
}

impl std::error::Error for BudgetExceeded {}

/// `p^n` if it fits in `u64`.
pub fn space_size(p: u64, n: usize) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..n {
        acc = acc.checked_mul(p)?;
    }
    Some(acc)
}

/// Fails unless `p^n <= budget`.
pub fn check_space(p: u64, n: usize, budget: u64) -> Result<u64, BudgetExceeded> {
    match space_size(p, n) {
        Some(s) if s <= budget => Ok(s),
        _ => Err(BudgetExceeded {
            what: format!("{p}^{n}"),
            budget,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn space_checks() {
        assert_eq!(check_space(5, 9, DEFAULT_BUDGET), Ok(1_953_125));
        assert!(check_space(2, 4, 10).is_err());
        assert_eq!(check_space(7, 0, 1), Ok(1));
        assert!(space_size(1 << 31, 3).is_none());
    }
}
