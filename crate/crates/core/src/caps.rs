//! Search and enumeration limits.

/// Limits shared by every exhaustive search in the crate.
///
/// Exceeding a limit yields [`crate::Error::CapExceeded`]; nothing is ever
/// truncated silently.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Node budget for one homomorphism search.
    pub hom_nodes: u64,
    /// Largest universe for which the full congruence lattice is built.
    pub lattice_size: usize,
    /// Largest number of congruences kept in one lattice.
    pub max_congruences: usize,
    /// Largest universe handed to congruence generation.
    pub generation_size: usize,
    /// Largest number of objects returned by a structural enumeration
    /// (subalgebras, punctual relations, split epimorphisms).
    pub enumeration: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            hom_nodes: 10_000_000,
            lattice_size: 64,
            max_congruences: 100_000,
            generation_size: 4096,
            enumeration: 100_000,
        }
    }
}

impl Caps {
    /// Defaults, with `GUMMCALC_CAP` (if set and numeric) applied through
    /// [`Caps::with_budget`].
    pub fn from_env() -> Self {
        let mut caps = Caps::default();
        if let Some(n) = std::env::var("GUMMCALC_CAP").ok().and_then(|v| v.trim().parse::<u64>().ok()) {
            caps = caps.with_budget(n);
        }
        caps
    }

    /// Replaces the node budget, the enumeration limit and the congruence
    /// count limit with `n`.
    pub fn with_budget(mut self, n: u64) -> Self {
        let m = usize::try_from(n).unwrap_or(usize::MAX);
        self.hom_nodes = n;
        self.enumeration = m;
        self.max_congruences = m;
        self
    }
}
