//! Numerical tolerances shared across modules.

/// Entrywise deviation from Hermiticity accepted by the eigensolvers.
pub const HERMITIAN: f64 = 1e-10;

/// Eigenvalues above `-PSD` are treated as non-negative.
pub const PSD: f64 = 1e-10;

/// Relative threshold below which an eigenvalue counts as zero.
pub const RANK: f64 = 1e-9;

/// Minimum Gram determinant for two Bob axes to span a plane.
pub const INDEPENDENCE: f64 = 1e-8;

/// Half-width of the "boundary" band for closed-form inequality verdicts.
pub const DECISION: f64 = 1e-9;

/// Feasibility tolerance for the LHS programs.
pub const FEASIBILITY: f64 = 1e-8;

/// Outer edge of the band in which an LHS verdict is reported as boundary.
pub const FEASIBILITY_BAND: f64 = 1e-7;

/// Projection residual for span membership.
pub const SPAN: f64 = 1e-9;

/// `|sin 2θ|` below this makes the one-way families degenerate.
pub const FAMILY_DEGENERACY: f64 = 1e-12;

/// Allowed deviation of a measurement axis from unit length.
pub const UNIT: f64 = 1e-12;
