/// Caps on the exponential parts of the pipeline.
///
/// Exceeding a cap is reported as [`crate::Error::Guard`], never as a
/// silent pass.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest syntactic monoid that will be materialised.
    pub max_monoid: usize,
    /// Largest assignment space explored by identity and path-equation checks.
    pub max_assignments: u128,
    /// Largest semigroup accepted by the brute-force division oracle.
    pub max_division: usize,
    /// Largest enriched alphabet `|A| * d` built by the reduction route.
    pub max_enriched_letters: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_monoid: 5000,
            max_assignments: 10_000_000,
            max_division: 8,
            max_enriched_letters: 512,
        }
    }
}
