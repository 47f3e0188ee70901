//! Numerical thresholds shared by the library, the CLI and the test suites.

/// Default absolute tolerance for unit-scale comparisons.
pub const DEFAULT: f64 = 1e-10;

/// Maximum `‖M M† − I‖_max` accepted for a coin.
pub const UNITARY: f64 = 1e-10;

/// Coins built from closed forms are expected to be this close to unitary.
pub const COIN_CONSTRUCTION: f64 = 1e-12;

/// `|cos φ|` below this is treated as zero (the `tan` coefficients diverge).
pub const COS_FLOOR: f64 = 1e-9;

/// Entry moduli at or below this count as zero for the eigenvector lemmas.
pub const NONZERO_ENTRY: f64 = 1e-12;

/// Tolerance for the eigenvalue conditions of the eigenvector lemmas.
pub const LEMMA: f64 = 1e-10;

/// Eigenvalues are matched as a multiset at this tolerance.
pub const EIGEN_MATCH: f64 = 1e-8;

/// Closed-form measure vs. `ν(Ψ)` agreement.
pub const AGREEMENT: f64 = 1e-10;

/// Maximum relative stationarity residual.
pub const STATIONARITY: f64 = 1e-8;

/// Default verification window and number of steps.
pub const VERIFY_LO: i64 = -10;
pub const VERIFY_HI: i64 = 10;
pub const VERIFY_STEPS: usize = 10;
