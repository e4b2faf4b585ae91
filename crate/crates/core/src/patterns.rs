//! Sparsity-pattern validators for the adapted frames.
//!
//! Each validator returns the maximum modulus of an entry violating the
//! pattern; zero means the stored frame is admissible in the declared sense.

use crate::algebra::{FrameKind, HermitianLieAlgebra};
use crate::tensor::C64;

/// Admissible-frame pattern for a declared split `r` (first `r` frame vectors
/// span the Salamon block, the rest are transverse):
///
/// * `C^γ_{ab} = 0` and `D^a_{γ b} = 0` whenever `γ > r` (the upper index of
///   `C`, respectively the first lower index of `D`, is transverse);
/// * within the block, `C^j_{ik} = 0` unless `j > i` or `j > k`, and
///   `D^j_{ik} = 0` unless `i > j`.
///
/// For `r = n` this is the plain Salamon pattern (which forces
/// `D^n_{ik} = 0`).
pub fn salamon_residual(alg: &HermitianLieAlgebra, r: usize) -> f64 {
    let n = alg.n();
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in 0..n {
            for k in 0..n {
                if j >= r {
                    worst = worst.max(alg.c().get(j, i, k).norm());
                }
                if i >= r {
                    worst = worst.max(alg.d().get(j, i, k).norm());
                }
                if j < r && i < r && k < r {
                    if !(j > i || j > k) {
                        worst = worst.max(alg.c().get(j, i, k).norm());
                    }
                    if i <= j {
                        worst = worst.max(alg.d().get(j, i, k).norm());
                    }
                }
            }
        }
    }
    worst
}

/// Sparsity pattern of the almost-abelian normal form: the only allowed
/// components are `D^1_{11} = λ ∈ R`, `D^1_{i1}`, `D^j_{i1}`, `C^j_{1i}`
/// (with `i, j ≥ 2`).
pub fn almost_abelian_residual(alg: &HermitianLieAlgebra) -> f64 {
    let n = alg.n();
    let mut worst = alg.d().get(0, 0, 0).im.abs();
    for u in 0..n {
        for p in 0..n {
            for q in 0..n {
                let c_ok = u >= 1 && ((p == 0 && q >= 1) || (p >= 1 && q == 0));
                if !c_ok {
                    worst = worst.max(alg.c().get(u, p, q).norm());
                }
                let d_ok = q == 0 && !(u >= 1 && p == 0);
                if !d_ok {
                    worst = worst.max(alg.d().get(u, p, q).norm());
                }
            }
        }
    }
    worst
}

/// Sparsity pattern of the codimension-2 normal form: allowed components are
/// `C^j_{1i}`, `D^1_{11} = λ ≥ 0`, `D^j_{i1}`, `D^1_{ij}`, `D^1_{i1}`
/// (with `i, j ≥ 2`).
pub fn codim2_residual(alg: &HermitianLieAlgebra) -> f64 {
    let n = alg.n();
    let lam = alg.d().get(0, 0, 0);
    let mut worst = lam.im.abs().max((-lam.re).max(0.0));
    for u in 0..n {
        for p in 0..n {
            for q in 0..n {
                let c_ok = u >= 1 && ((p == 0 && q >= 1) || (p >= 1 && q == 0));
                if !c_ok {
                    worst = worst.max(alg.c().get(u, p, q).norm());
                }
                let d_ok = (u == 0 && p == 0 && q == 0)
                    || (u >= 1 && p >= 1 && q == 0)
                    || (u == 0 && p >= 1);
                if !d_ok {
                    worst = worst.max(alg.d().get(u, p, q).norm());
                }
            }
        }
    }
    worst
}

fn torsion_entry(alg: &HermitianLieAlgebra, j: usize, i: usize, k: usize) -> C64 {
    -alg.c().get(j, i, k) - alg.d().get(j, i, k) + alg.d().get(j, k, i)
}

/// Special-frame pattern of balanced BTP threefolds: `n = 3` and the only
/// torsion components are `T^i_{jk} = a_i` for `(i j k)` a cyclic permutation
/// of `(1 2 3)`, with real `a_i`.
pub fn special_btp_residual(alg: &HermitianLieAlgebra) -> f64 {
    let n = alg.n();
    if n != 3 {
        return f64::INFINITY;
    }
    let mut worst = 0.0f64;
    for j in 0..3 {
        for i in 0..3 {
            for k in 0..3 {
                let t = torsion_entry(alg, j, i, k);
                let cyclic = (j, i, k) == (0, 1, 2)
                    || (j, i, k) == (1, 2, 0)
                    || (j, i, k) == (2, 0, 1)
                    || (j, i, k) == (0, 2, 1)
                    || (j, i, k) == (1, 0, 2)
                    || (j, i, k) == (2, 1, 0);
                if cyclic {
                    worst = worst.max(t.im.abs());
                } else {
                    worst = worst.max(t.norm());
                }
            }
        }
    }
    worst
}

/// Admissible-frame pattern of non-balanced BTP manifolds: `T^n_{ij} = 0`
/// and `T^j_{in} = δ_{ij} a_i` with real `a_i`.
pub fn nonbalanced_btp_residual(alg: &HermitianLieAlgebra) -> f64 {
    let n = alg.n();
    let last = n - 1;
    let mut worst = 0.0f64;
    for i in 0..n {
        for k in 0..n {
            worst = worst.max(torsion_entry(alg, last, i, k).norm());
        }
    }
    for j in 0..n {
        for i in 0..n {
            let t = torsion_entry(alg, j, i, last);
            if i == j {
                worst = worst.max(t.im.abs());
            } else {
                worst = worst.max(t.norm());
            }
        }
    }
    worst
}

/// Pattern residual for the frame kind declared by the algebra, when any
/// pattern applies.
pub fn frame_pattern_residual(alg: &HermitianLieAlgebra) -> Option<f64> {
    match alg.frame_kind() {
        FrameKind::GenericUnitary => None,
        FrameKind::Salamon => Some(salamon_residual(alg, alg.n())),
        FrameKind::AdmissibleAlmostAbelian => Some(almost_abelian_residual(alg)),
        FrameKind::AdmissibleCodim2 => Some(codim2_residual(alg)),
        FrameKind::SpecialBtp => Some(special_btp_residual(alg)),
        FrameKind::AdmissibleNonbalancedBtp => Some(nonbalanced_btp_residual(alg)),
    }
}
