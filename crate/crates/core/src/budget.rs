/// Caps on exhaustive work. Operations that would exceed a cap fail with
/// [`crate::Error::BudgetExceeded`] instead of running for hours.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Budget {
    /// Points, hyperplanes, lines or codeword classes enumerated in one scan.
    pub max_points: u64,
    /// Word operations spent on pairwise support-containment tests.
    pub max_pair_ops: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_points: 20_000_000,
            max_pair_ops: 10_000_000_000,
        }
    }
}

impl Budget {
    pub(crate) fn check_points(&self, what: &'static str, needed: u128) -> crate::Result<()> {
        if needed > self.max_points as u128 {
            return Err(crate::Error::BudgetExceeded {
                what,
                needed,
                budget: self.max_points as u128,
            });
        }
        Ok(())
    }
}
