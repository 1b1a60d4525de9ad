/// Size limits for the exponential enumerations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Largest number of generators allowed in one cochain group.
    pub max_cells: u128,
    /// Largest number of σ-cover indices allowed at one level.
    pub max_lambda: u128,
    /// Largest dense differential matrix (rows times columns) to assemble.
    pub max_entries: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_cells: 250_000,
            max_lambda: 250_000,
            max_entries: 16_000_000,
        }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget {
            max_cells: u128::MAX,
            max_lambda: u128::MAX,
            max_entries: u128::MAX,
        }
    }
}
