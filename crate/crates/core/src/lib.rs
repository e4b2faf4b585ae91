//! Curvature of left-invariant Hermitian structures on Lie algebras.
//!
//! A Hermitian Lie algebra is encoded by its complex dimension `n` and the two
//! structure-constant tensors `C`, `D` of a unitary frame,
//!
//! ```text
//! [e_i, e_j]    = Σ_k C^k_{ij} e_k,
//! [e_i, ē_j]   = Σ_k ( conj(D^i_{kj}) e_k − D^j_{ki} ē_k ).
//! ```
//!
//! From this data the crate computes the Chern connection, its torsion and
//! curvature, the Bismut connection and its (1,1)-curvature, Ricci traces,
//! the symmetrized tensor, and the mixed curvature
//! `C_{α,β}(X) = α·Ric(X,X̄) + β·H(X)`, together with constancy tests,
//! closed-form special families (almost abelian and codimension-2 abelian
//! ideal), executable theorem checks, and a residual-minimization search for
//! constant-mixed-curvature instances.
//!
//! Index convention throughout: tensors are stored with the upper index
//! first, then lower indices left to right; all indices are 0-based in code
//! and 1-based in reports.

pub mod algebra;
pub mod curvature;
pub mod error;
pub mod families;
mod forms;
mod patterns;
pub mod random;
pub mod search;
pub mod tensor;
pub mod verify;

pub use algebra::{
    classify, from_real_presentation, jacobi_residual, real_presentation, unimodularity_defect,
    validate, ClassificationFlags, FrameKind, HermitianLieAlgebra, RealPresentation,
    ValidationReport,
};
pub use curvature::{
    bismut_connection, bismut_curvature, btp_symmetrization_residual, chern_connection,
    chern_curvature, chern_torsion, constant_mixed_test, constant_mixed_test_tensors,
    covariant_torsion_derivative, curvature_from_connection, diagonal_shortcuts,
    dphi_squared_residual, first_ricci, is_btp, mixed_value, streets_tian, streets_tian_rank,
    symmetrize, torsion_quadratics, ConnectionCoefficients, ConstancyVerdict, CurvatureTensor,
    DiagonalShortcuts, MixedParams, QuadraticTorsionTerms, RicciMatrix, TorsionDerivative,
    TorsionTensor,
};
pub use error::{Error, Result};
pub use families::{
    almost_abelian_build, almost_abelian_curvature, almost_abelian_flags, almost_abelian_torsion,
    codim2_build, codim2_constraint_residual, codim2_curvature, codim2_flags,
    codim2_offdiag_entry, fixture, salamon_pattern_residual, AlmostAbelianParams,
    Codim2CurvatureRecords, Codim2Params, FamilyFlags, Fixture, OffDiagCheck, PointwiseCurvature,
    FIXTURE_NAMES,
};
pub use search::{
    deviation_objective, minimize, FamilyParams, FamilySpec, FlatDistances, SearchProblem,
    SearchResult, SearchTarget,
};
pub use tensor::{CMat, RMat, Tensor3, Tensor4, C64};
pub use verify::{
    middle_type_feasibility, nonbalanced_btp_check, verify_lemma_cd0, verify_theorem1,
    wallach_nonconstancy, MiddleTypeState, NonBalancedBtpFrameData, ResidualEntry,
    VerificationReport,
};

/// Default absolute tolerance, calibrated for structure constants of modulus
/// at most ~10 accumulated over n^3 double-precision sums.
pub const DEFAULT_TOL: f64 = 1e-9;
