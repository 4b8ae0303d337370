//! Numerical tolerances used across the crate.
//!
//! Every check that compares floating-point results against an invariant
//! reads its threshold from here, so acceptance thresholds have exactly one
//! home.

/// Maximum entrywise deviation of `ρ − ρ†` for a density operator.
pub const HERMITIAN: f64 = 1e-12;
/// Maximum `|tr ρ − 1|` for a density operator.
pub const TRACE: f64 = 1e-12;
/// Most negative eigenvalue tolerated in a density operator.
pub const MIN_EIGENVALUE: f64 = -1e-10;
/// Maximum entrywise deviation of `Σ K†K − 𝟙` for a Kraus set.
pub const KRAUS_COMPLETENESS: f64 = 1e-12;
/// Maximum entrywise deviation of `U†U − 𝟙` for optical elements.
pub const UNITARY: f64 = 1e-12;
/// Hermiticity required before handing a matrix to the eigensolver.
pub const EIG_INPUT_HERMITIAN: f64 = 1e-10;
/// Reconstruction error bound for the Hermitian eigendecomposition.
pub const EIG_RECONSTRUCTION: f64 = 1e-10;
/// Eigenvalues below this are treated as exact zeros before taking logs.
pub const EIGENVALUE_CLAMP: f64 = 1e-14;
/// Weight of `ρ` on an eigenvector of `σ` whose eigenvalue is below
/// [`SUPPORT_EIGENVALUE`] that still counts as a support violation.
pub const SUPPORT_WEIGHT: f64 = 1e-12;
/// Eigenvalue below which `σ` is considered to vanish on that direction.
pub const SUPPORT_EIGENVALUE: f64 = 1e-12;
/// Lowest value a relative entropy may take before it counts as negative.
pub const RELATIVE_ENTROPY_FLOOR: f64 = -1e-10;
/// Distance under which two eigenvalues are considered degenerate.
pub const EIGENVALUE_TIE: f64 = 1e-12;
/// Entry magnitude below which a vector component is considered zero when
/// fixing eigenvector phases.
pub const PHASE_PIVOT: f64 = 1e-12;
/// Slack allowed on `|s|² ≤ 1` before a Stokes vector is projected.
pub const STOKES_PHYSICAL: f64 = 1e-9;
/// Agreement between simulated and closed-form energetics, in ħω₀.
pub const ENERGETICS: f64 = 1e-9;
/// First-law closure of one ideal cycle, in ħω₀.
pub const FIRST_LAW: f64 = 1e-9;
/// Agreement of `ΔS − βQ` with the relative entropy, in nats.
pub const ENTROPY_IDENTITY: f64 = 1e-9;
/// Lowest entropy production accepted as non-negative, in nats.
pub const ENTROPY_PRODUCTION_FLOOR: f64 = -1e-10;
/// Return of the ideal cycle to its initial state.
pub const CYCLE_CLOSURE: f64 = 1e-10;
/// Spectrum preservation across a unitary stroke.
pub const SPECTRUM_PRESERVATION: f64 = 1e-10;
/// Agreement of the dilated and Kraus realizations of a channel block.
pub const DILATION_KRAUS: f64 = 1e-12;
/// Agreement of circuit-file snapshots with the direct cycle.
pub const DSL_EQUIVALENCE: f64 = 1e-12;
/// Agreement of a Jones-pair compilation with the rotation it encodes.
pub const JONES_COMPILATION: f64 = 1e-12;
/// Tomographic round trip without noise.
pub const TOMOGRAPHY_ROUND_TRIP: f64 = 1e-12;
/// Printed precision of the published density matrices.
pub const PUBLISHED_PRECISION: f64 = 1e-4;
/// Fidelity a simulated snapshot must reach against the published matrix.
pub const GOLDEN_FIDELITY: f64 = 0.98;
/// Allowed gap between the ideal and published B→C coherence.
pub const GOLDEN_COHERENCE: f64 = 0.02;
/// Maximum number of parse errors collected from one source file.
pub const MAX_PARSE_ERRORS: usize = 10;
