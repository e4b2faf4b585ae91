//! Structure-constant data model and Lie-algebra / Hermitian-structure axioms.
//!
//! A `HermitianLieAlgebra` holds the tensors `C`, `D` of a unitary frame.
//! Antisymmetry of `C` in its lower pair is enforced exactly on construction
//! (inputs violating it beyond the tolerance are rejected, otherwise
//! antisymmetrized). The Jacobi identity and the frame-pattern constraints
//! are checked by [`validate`].

use crate::error::{Error, Result};
use crate::patterns;
use crate::tensor::{C64, CMat, RMat, Tensor3};
use nalgebra::DVector;

/// Declares which sparsity-pattern validator applies to the stored frame.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrameKind {
    GenericUnitary,
    Salamon,
    AdmissibleAlmostAbelian,
    AdmissibleCodim2,
    SpecialBtp,
    AdmissibleNonbalancedBtp,
}

impl FrameKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            FrameKind::GenericUnitary => "generic-unitary",
            FrameKind::Salamon => "salamon",
            FrameKind::AdmissibleAlmostAbelian => "admissible-almost-abelian",
            FrameKind::AdmissibleCodim2 => "admissible-codim2",
            FrameKind::SpecialBtp => "special-btp",
            FrameKind::AdmissibleNonbalancedBtp => "admissible-nonbalanced-btp",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "generic-unitary" => Ok(FrameKind::GenericUnitary),
            "salamon" => Ok(FrameKind::Salamon),
            "admissible-almost-abelian" => Ok(FrameKind::AdmissibleAlmostAbelian),
            "admissible-codim2" => Ok(FrameKind::AdmissibleCodim2),
            "special-btp" => Ok(FrameKind::SpecialBtp),
            "admissible-nonbalanced-btp" => Ok(FrameKind::AdmissibleNonbalancedBtp),
            other => Err(Error::input(format!("frame_kind: unknown value `{other}`"))),
        }
    }
}

/// A Lie algebra with integrable complex structure and compatible metric,
/// presented through the structure constants of a unitary frame.
///
/// `C^j_{ik}` is stored at `c.get(j, i, k)` (upper index first) and likewise
/// for `D`.
#[derive(Clone, Debug)]
pub struct HermitianLieAlgebra {
    n: usize,
    c: Tensor3,
    d: Tensor3,
    frame_kind: FrameKind,
    antisym_residual: f64,
}

impl HermitianLieAlgebra {
    /// Build from raw tensors. `C` may violate lower-pair antisymmetry by at
    /// most `tol`; it is then antisymmetrized exactly.
    pub fn new(c: Tensor3, d: Tensor3, frame_kind: FrameKind, tol: f64) -> Result<Self> {
        let n = c.n();
        if n == 0 {
            return Err(Error::input("n must be at least 1"));
        }
        if d.n() != n {
            return Err(Error::input(format!(
                "shape mismatch: C has n = {}, D has n = {}",
                n,
                d.n()
            )));
        }
        if !c.is_finite() || !d.is_finite() {
            return Err(Error::input("non-finite entry in structure constants"));
        }
        let mut worst = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                for k in i..n {
                    worst = worst.max((c.get(j, i, k) + c.get(j, k, i)).norm());
                }
            }
        }
        if worst > tol {
            return Err(Error::input(format!(
                "C is not antisymmetric in its lower pair (residual {worst:.3e} > tol {tol:.3e})"
            )));
        }
        let mut c = c;
        antisymmetrize_exact(&mut c);
        Ok(HermitianLieAlgebra {
            n,
            c,
            d,
            frame_kind,
            antisym_residual: worst,
        })
    }

    /// Convenience builder from sparse entries. `c_entries` lists
    /// `(j, i, k, value)` for `i < k`; the antisymmetric mirror is filled in.
    pub fn from_entries(
        n: usize,
        c_entries: &[(usize, usize, usize, C64)],
        d_entries: &[(usize, usize, usize, C64)],
        frame_kind: FrameKind,
    ) -> Result<Self> {
        let mut c = Tensor3::zeros(n);
        for &(j, i, k, v) in c_entries {
            if i >= k {
                return Err(Error::input("C entries must be given with i < k"));
            }
            c.set(j, i, k, v);
            c.set(j, k, i, -v);
        }
        let mut d = Tensor3::zeros(n);
        for &(j, i, k, v) in d_entries {
            d.set(j, i, k, v);
        }
        HermitianLieAlgebra::new(c, d, frame_kind, 0.0)
    }

    pub fn abelian(n: usize) -> Self {
        HermitianLieAlgebra {
            n,
            c: Tensor3::zeros(n),
            d: Tensor3::zeros(n),
            frame_kind: FrameKind::GenericUnitary,
            antisym_residual: 0.0,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c(&self) -> &Tensor3 {
        &self.c
    }

    pub fn d(&self) -> &Tensor3 {
        &self.d
    }

    pub fn frame_kind(&self) -> FrameKind {
        self.frame_kind
    }

    pub fn antisym_residual(&self) -> f64 {
        self.antisym_residual
    }

    /// Structure constants of the frame `ẽ_p = Σ_a U_{pa} e_a` for a unitary
    /// matrix `U`. The metric stays unitary, so the transformed tensors are
    ///
    /// ```text
    /// C̃^p_{qr} = Σ conj(U_{pc}) U_{qa} U_{rb} C^c_{ab},
    /// D̃^p_{qr} = Σ conj(U_{pa}) U_{qb} U_{rc} D^a_{bc}.
    /// ```
    pub fn conjugated(&self, u: &CMat) -> Result<Self> {
        let n = self.n;
        if u.nrows() != n || u.ncols() != n {
            return Err(Error::input("unitary matrix has wrong shape"));
        }
        let mut c = Tensor3::zeros(n);
        let mut d = Tensor3::zeros(n);
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    let mut sc = C64::ZERO;
                    let mut sd = C64::ZERO;
                    for a in 0..n {
                        for b in 0..n {
                            for x in 0..n {
                                sc += u[(p, x)].conj() * u[(q, a)] * u[(r, b)] * self.c.get(x, a, b);
                                sd += u[(p, x)].conj() * u[(q, a)] * u[(r, b)] * self.d.get(x, a, b);
                            }
                        }
                    }
                    c.set(p, q, r, sc);
                    d.set(p, q, r, sd);
                }
            }
        }
        antisymmetrize_exact(&mut c);
        Ok(HermitianLieAlgebra {
            n,
            c,
            d,
            frame_kind: FrameKind::GenericUnitary,
            antisym_residual: self.antisym_residual,
        })
    }

    /// Complexified bracket of `x = Σ a_i e_i + b_i ē_i` with `y` likewise.
    pub(crate) fn bracket(&self, x: &ComplexVec, y: &ComplexVec) -> ComplexVec {
        let n = self.n;
        let mut out = ComplexVec::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let ee = x.e[i] * y.e[k];
                let eb = x.e[i] * y.ebar[k];
                let be = x.ebar[i] * y.e[k];
                let bb = x.ebar[i] * y.ebar[k];
                if ee == C64::ZERO && eb == C64::ZERO && be == C64::ZERO && bb == C64::ZERO {
                    continue;
                }
                for m in 0..n {
                    // [e_i, e_k] and its conjugate
                    out.e[m] += ee * self.c.get(m, i, k);
                    out.ebar[m] += bb * self.c.get(m, i, k).conj();
                    // [e_i, ē_k] = Σ conj(D^i_{mk}) e_m − D^k_{mi} ē_m
                    out.e[m] += eb * self.d.get(i, m, k).conj();
                    out.ebar[m] -= eb * self.d.get(k, m, i);
                    // [ē_i, e_k] = Σ −conj(D^k_{mi}) e_m + D^i_{mk} ē_m
                    out.e[m] -= be * self.d.get(k, m, i).conj();
                    out.ebar[m] += be * self.d.get(i, m, k);
                }
            }
        }
        out
    }
}

fn antisymmetrize_exact(c: &mut Tensor3) {
    let n = c.n();
    for j in 0..n {
        for i in 0..n {
            c.set(j, i, i, C64::ZERO);
            for k in (i + 1)..n {
                let v = (c.get(j, i, k) - c.get(j, k, i)) * 0.5;
                c.set(j, i, k, v);
                c.set(j, k, i, -v);
            }
        }
    }
}

/// Vector in the complexified algebra, `Σ e[i]·e_i + ebar[i]·ē_i`.
#[derive(Clone, Debug)]
pub(crate) struct ComplexVec {
    pub e: Vec<C64>,
    pub ebar: Vec<C64>,
}

impl ComplexVec {
    pub fn zeros(n: usize) -> Self {
        ComplexVec {
            e: vec![C64::ZERO; n],
            ebar: vec![C64::ZERO; n],
        }
    }

}

// ---------------------------------------------------------------------------
// Axiom residuals
// ---------------------------------------------------------------------------

/// Maximum absolute value over all index tuples of the three first-Bianchi
/// identities of the structure equation; zero iff `(C, D)` define a Lie
/// algebra with integrable complex structure.
pub fn jacobi_residual(alg: &HermitianLieAlgebra) -> f64 {
    let n = alg.n;
    let c = &alg.c;
    let d = &alg.d;
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut s1 = C64::ZERO;
                    let mut s2 = C64::ZERO;
                    let mut s3 = C64::ZERO;
                    for r in 0..n {
                        s1 += c.get(r, i, j) * c.get(l, r, k)
                            + c.get(r, j, k) * c.get(l, r, i)
                            + c.get(r, k, i) * c.get(l, r, j);
                        s2 += c.get(r, i, k) * d.get(l, j, r) + d.get(r, j, i) * d.get(l, r, k)
                            - d.get(r, j, k) * d.get(l, r, i);
                        s3 += c.get(r, i, k) * d.get(r, j, l).conj()
                            - c.get(j, r, k) * d.get(i, r, l).conj()
                            + c.get(j, r, i) * d.get(k, r, l).conj()
                            - d.get(l, r, i) * d.get(k, j, r).conj()
                            + d.get(l, r, k) * d.get(i, j, r).conj();
                    }
                    worst = worst.max(s1.norm()).max(s2.norm()).max(s3.norm());
                }
            }
        }
    }
    worst
}

/// `max_i |Σ_r (C^r_{ri} + D^r_{ri})|`; zero iff the algebra is unimodular.
pub fn unimodularity_defect(alg: &HermitianLieAlgebra) -> f64 {
    let n = alg.n;
    let mut worst = 0.0f64;
    for i in 0..n {
        let mut s = C64::ZERO;
        for r in 0..n {
            s += alg.c.get(r, r, i) + alg.d.get(r, r, i);
        }
        worst = worst.max(s.norm());
    }
    worst
}

/// Aggregated axiom check.
#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub antisymmetry_residual: f64,
    pub jacobi_residual: f64,
    /// Residual of the sparsity pattern declared by `frame_kind`
    /// (absent for generic frames).
    pub pattern_residual: Option<f64>,
    pub passed: bool,
}

pub fn validate(alg: &HermitianLieAlgebra, tol: f64) -> ValidationReport {
    let jac = jacobi_residual(alg);
    let pattern = patterns::frame_pattern_residual(alg);
    let passed = alg.antisym_residual <= tol && jac <= tol && pattern.is_none_or(|p| p <= tol);
    ValidationReport {
        antisymmetry_residual: alg.antisym_residual,
        jacobi_residual: jac,
        pattern_residual: pattern,
        passed,
    }
}

// ---------------------------------------------------------------------------
// Real presentation
// ---------------------------------------------------------------------------

/// The underlying real algebra: bracket tensor, complex structure and metric
/// in a real basis. `bracket[c][a][b]` holds `f^c_{ab}` with
/// `[x_a, x_b] = Σ f^c_{ab} x_c`.
#[derive(Clone, Debug)]
pub struct RealPresentation {
    pub dim: usize,
    pub bracket: Vec<f64>,
    pub j: RMat,
    pub gram: RMat,
}

impl RealPresentation {
    pub fn f(&self, c: usize, a: usize, b: usize) -> f64 {
        self.bracket[(c * self.dim + a) * self.dim + b]
    }

    fn f_set(&mut self, c: usize, a: usize, b: usize, v: f64) {
        self.bracket[(c * self.dim + a) * self.dim + b] = v;
    }

    /// Bracket of coordinate vectors.
    pub fn bracket_vec(&self, u: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
        let d = self.dim;
        let mut out = DVector::zeros(d);
        for a in 0..d {
            if u[a] == 0.0 {
                continue;
            }
            for b in 0..d {
                let w = u[a] * v[b];
                if w == 0.0 {
                    continue;
                }
                for c in 0..d {
                    out[c] += w * self.f(c, a, b);
                }
            }
        }
        out
    }
}

/// Expand a Hermitian Lie algebra to its real presentation in the
/// gram-orthonormal basis `x_i = (e_i + ē_i)/√2`, `y_i = J x_i`.
pub fn real_presentation(alg: &HermitianLieAlgebra) -> RealPresentation {
    let n = alg.n;
    let dim = 2 * n;
    let mut rp = RealPresentation {
        dim,
        bracket: vec![0.0; dim * dim * dim],
        j: RMat::zeros(dim, dim),
        gram: RMat::identity(dim, dim),
    };
    for i in 0..n {
        rp.j[(n + i, i)] = 1.0; // J x_i = y_i
        rp.j[(i, n + i)] = -1.0; // J y_i = -x_i
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let basis: Vec<ComplexVec> = (0..dim)
        .map(|a| {
            let mut v = ComplexVec::zeros(n);
            if a < n {
                v.e[a] = C64::new(s, 0.0);
                v.ebar[a] = C64::new(s, 0.0);
            } else {
                v.e[a - n] = C64::new(0.0, s);
                v.ebar[a - n] = C64::new(0.0, -s);
            }
            v
        })
        .collect();
    for a in 0..dim {
        for b in 0..dim {
            let w = alg.bracket(&basis[a], &basis[b]);
            // real vector: coefficient a_k of e_k gives coordinates
            // (√2·Re a_k, √2·Im a_k) in the (x, y) basis
            for k in 0..n {
                let ak = w.e[k];
                rp.f_set(k, a, b, std::f64::consts::SQRT_2 * ak.re);
                rp.f_set(n + k, a, b, std::f64::consts::SQRT_2 * ak.im);
            }
        }
    }
    rp
}

fn rp_antisymmetry_residual(rp: &RealPresentation) -> f64 {
    let d = rp.dim;
    let mut worst = 0.0f64;
    for c in 0..d {
        for a in 0..d {
            for b in a..d {
                worst = worst.max((rp.f(c, a, b) + rp.f(c, b, a)).abs());
            }
        }
    }
    worst
}

fn rp_jacobi_residual(rp: &RealPresentation) -> f64 {
    let d = rp.dim;
    let mut worst = 0.0f64;
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                for l in 0..d {
                    let mut s = 0.0;
                    for r in 0..d {
                        s += rp.f(r, a, b) * rp.f(l, r, c)
                            + rp.f(r, b, c) * rp.f(l, r, a)
                            + rp.f(r, c, a) * rp.f(l, r, b);
                    }
                    worst = worst.max(s.abs());
                }
            }
        }
    }
    worst
}

fn rp_integrability_residual(rp: &RealPresentation) -> f64 {
    let d = rp.dim;
    let mut worst = 0.0f64;
    for a in 0..d {
        let xa = DVector::from_fn(d, |r, _| if r == a { 1.0 } else { 0.0 });
        let jxa = &rp.j * &xa;
        for b in (a + 1)..d {
            let xb = DVector::from_fn(d, |r, _| if r == b { 1.0 } else { 0.0 });
            let jxb = &rp.j * &xb;
            let nij = rp.bracket_vec(&xa, &xb) - rp.bracket_vec(&jxa, &jxb)
                + &rp.j * rp.bracket_vec(&jxa, &xb)
                + &rp.j * rp.bracket_vec(&xa, &jxb);
            worst = worst.max(nij.amax());
        }
    }
    worst
}

/// Hermitian product of complexified coordinate vectors against the gram form:
/// `h(u, v) = Σ G_{ab} u_a conj(v_b)`.
fn herm(gram: &RMat, u: &DVector<C64>, v: &DVector<C64>) -> C64 {
    let d = gram.nrows();
    let mut s = C64::ZERO;
    for a in 0..d {
        for b in 0..d {
            if gram[(a, b)] != 0.0 {
                s += gram[(a, b)] * u[a] * v[b].conj();
            }
        }
    }
    s
}

/// Bilinear extension of the gram form (no conjugation).
fn bilin(gram: &RMat, u: &DVector<C64>, v: &DVector<C64>) -> C64 {
    let d = gram.nrows();
    let mut s = C64::ZERO;
    for a in 0..d {
        for b in 0..d {
            if gram[(a, b)] != 0.0 {
                s += gram[(a, b)] * u[a] * v[b];
            }
        }
    }
    s
}

/// Build the Hermitian Lie algebra of a real presentation by orthonormalizing
/// a basis of the +i eigenspace of `J` (candidates `x_a − i J x_a` processed
/// in input order, with a re-orthogonalization pass) and reading off `C`, `D`.
pub fn from_real_presentation(rp: &RealPresentation, tol: f64) -> Result<HermitianLieAlgebra> {
    let dim = rp.dim;
    if dim == 0 || dim % 2 != 0 {
        return Err(Error::input("real dimension must be a positive even number"));
    }
    let n = dim / 2;
    let r = rp_antisymmetry_residual(rp);
    if r > tol {
        return Err(Error::input(format!(
            "bracket is not antisymmetric (residual {r:.3e})"
        )));
    }
    let r = rp_jacobi_residual(rp);
    if r > tol {
        return Err(Error::input(format!("Jacobi identity fails (residual {r:.3e})")));
    }
    let r = (&rp.j * &rp.j + RMat::identity(dim, dim)).amax();
    if r > tol {
        return Err(Error::input(format!("J^2 = -I fails (residual {r:.3e})")));
    }
    let r = (&rp.gram - rp.gram.transpose()).amax();
    if r > tol {
        return Err(Error::input(format!("gram is not symmetric (residual {r:.3e})")));
    }
    let eigs = rp.gram.clone().symmetric_eigen().eigenvalues;
    let min_eig = eigs.iter().cloned().fold(f64::INFINITY, f64::min);
    let max_eig = eigs.iter().cloned().fold(0.0f64, |m, e| m.max(e.abs()));
    if !(min_eig > tol * max_eig.max(1.0)) {
        return Err(Error::input(format!(
            "gram is not positive definite (min eigenvalue {min_eig:.3e})"
        )));
    }
    let r = (rp.j.transpose() * &rp.gram * &rp.j - &rp.gram).amax();
    if r > tol * max_eig.max(1.0) {
        return Err(Error::input(format!(
            "metric is not J-compatible (residual {r:.3e})"
        )));
    }
    let r = rp_integrability_residual(rp);
    if r > tol {
        return Err(Error::input(format!(
            "complex structure is not integrable (residual {r:.3e})"
        )));
    }

    // Gram-orthonormal frame of the +i eigenspace of J, in input basis order.
    let mut frame: Vec<DVector<C64>> = Vec::with_capacity(n);
    for a in 0..dim {
        if frame.len() == n {
            break;
        }
        let mut w = DVector::from_fn(dim, |r, _| {
            let x = if r == a { 1.0 } else { 0.0 };
            C64::new(x, 0.0) - C64::i() * C64::new(rp.j[(r, a)], 0.0)
        });
        let h0 = herm(&rp.gram, &w, &w).re;
        for _ in 0..2 {
            for f in &frame {
                let coeff = herm(&rp.gram, &w, f);
                w -= f * coeff;
            }
        }
        let h = herm(&rp.gram, &w, &w).re;
        if h > 1e-12 * h0.max(1.0) {
            w /= C64::new(h.sqrt(), 0.0);
            frame.push(w);
        }
    }
    if frame.len() != n {
        return Err(Error::input(
            "could not build a unitary frame of the +i eigenspace of J",
        ));
    }

    // Complexified bracket of coordinate vectors via the f tensor.
    let cbracket = |u: &DVector<C64>, v: &DVector<C64>| -> DVector<C64> {
        let mut out = DVector::from_element(dim, C64::ZERO);
        for a in 0..dim {
            if u[a] == C64::ZERO {
                continue;
            }
            for b in 0..dim {
                let w = u[a] * v[b];
                if w == C64::ZERO {
                    continue;
                }
                for c in 0..dim {
                    let f = rp.f(c, a, b);
                    if f != 0.0 {
                        out[c] += w * f;
                    }
                }
            }
        }
        out
    };

    let mut c = Tensor3::zeros(n);
    let mut d = Tensor3::zeros(n);
    for i in 0..n {
        for k in 0..n {
            let b = cbracket(&frame[i], &frame[k]);
            for m in 0..n {
                c.set(m, i, k, herm(&rp.gram, &b, &frame[m]));
            }
        }
    }
    for i in 0..n {
        for jdx in 0..n {
            let ejbar = frame[jdx].map(|z| z.conj());
            let b = cbracket(&frame[i], &ejbar);
            for m in 0..n {
                // [e_i, ē_j] = Σ conj(D^i_{mj}) e_m − D^j_{mi} ē_m
                d.set(i, m, jdx, herm(&rp.gram, &b, &frame[m]).conj());
            }
        }
    }
    // Cross-check the ē components against the already-filled D entries.
    let mut worst = 0.0f64;
    for i in 0..n {
        for jdx in 0..n {
            let ejbar = frame[jdx].map(|z| z.conj());
            let b = cbracket(&frame[i], &ejbar);
            for m in 0..n {
                let beta = bilin(&rp.gram, &b, &frame[m]);
                worst = worst.max((beta + d.get(jdx, m, i)).norm());
            }
        }
    }
    if worst > (100.0 * tol).max(1e-10) {
        return Err(Error::input(format!(
            "inconsistent (1,0)/(0,1) bracket components (residual {worst:.3e}); \
             presentation is not integrable to tolerance"
        )));
    }
    HermitianLieAlgebra::new(c, d, FrameKind::GenericUnitary, (100.0 * tol).max(1e-10))
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassificationFlags {
    pub is_nilpotent: bool,
    pub is_solvable: bool,
    /// The commutator subspace g' is J-stable.
    pub commutator_j_invariant: bool,
    /// g' + Jg' is a nilpotent subalgebra.
    pub commutator_plus_j_nilpotent: bool,
    pub is_unimodular: bool,
}

/// Orthonormal basis of the span of `cols`, keeping singular values above
/// `tol × max(σ_max, 1)`. The floor at 1 matches the normalization of the
/// structure constants (largest modulus of order one): without it a span
/// whose columns are pure rounding noise would count as rank ≥ 1.
fn orthonormal_span(dim: usize, cols: &[DVector<f64>], tol: f64) -> RMat {
    if cols.is_empty() {
        return RMat::zeros(dim, 0);
    }
    let m = RMat::from_fn(dim, cols.len(), |r, c| cols[c][r]);
    let svd = m.svd(true, false);
    let u = svd.u.expect("svd with u");
    let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    if smax == 0.0 {
        return RMat::zeros(dim, 0);
    }
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&s| s > tol * smax.max(1.0))
        .count();
    u.columns(0, rank).into_owned()
}

fn bracket_columns(rp: &RealPresentation, a: &RMat, b: &RMat) -> Vec<DVector<f64>> {
    let mut cols = Vec::new();
    for i in 0..a.ncols() {
        let u = a.column(i).into_owned();
        for j in 0..b.ncols() {
            let v = b.column(j).into_owned();
            cols.push(rp.bracket_vec(&u, &v));
        }
    }
    cols
}

/// `true` if the lower central series of the subalgebra spanned by `full`
/// terminates. Brackets of elements of `full` are assumed to stay inside it.
fn series_nilpotent(rp: &RealPresentation, full: &RMat, tol: f64) -> bool {
    let mut cur = full.clone();
    loop {
        let next = orthonormal_span(rp.dim, &bracket_columns(rp, full, &cur), tol);
        if next.ncols() == 0 {
            return true;
        }
        if next.ncols() >= cur.ncols() {
            return false;
        }
        cur = next;
    }
}

fn series_solvable(rp: &RealPresentation, tol: f64) -> bool {
    let mut cur = RMat::identity(rp.dim, rp.dim);
    loop {
        let next = orthonormal_span(rp.dim, &bracket_columns(rp, &cur, &cur), tol);
        if next.ncols() == 0 {
            return true;
        }
        if next.ncols() >= cur.ncols() {
            return false;
        }
        cur = next;
    }
}

/// Max distance of the columns of `vectors` from the span of the orthonormal
/// basis `q`.
fn subspace_containment_defect(q: &RMat, vectors: &RMat) -> f64 {
    let proj = vectors - q * (q.transpose() * vectors);
    proj.amax()
}

/// Coarse algebraic classification of the underlying real algebra, computed
/// through rank decisions with a relative singular-value cutoff `tol × σ_max`.
pub fn classify(alg: &HermitianLieAlgebra, tol: f64) -> ClassificationFlags {
    let rp = real_presentation(alg);
    let full = RMat::identity(rp.dim, rp.dim);
    let commutator = orthonormal_span(rp.dim, &bracket_columns(&rp, &full, &full), tol);
    let j_comm = &rp.j * &commutator;

    let commutator_j_invariant = if commutator.ncols() == 0 {
        true
    } else {
        subspace_containment_defect(&commutator, &j_comm) <= tol.max(1e-12) * 10.0
    };

    let mut sum_cols: Vec<DVector<f64>> = Vec::new();
    for i in 0..commutator.ncols() {
        sum_cols.push(commutator.column(i).into_owned());
        sum_cols.push(j_comm.column(i).into_owned());
    }
    let s = orthonormal_span(rp.dim, &sum_cols, tol);
    let commutator_plus_j_nilpotent = s.ncols() == 0 || series_nilpotent(&rp, &s, tol);

    ClassificationFlags {
        is_nilpotent: series_nilpotent(&rp, &full, tol),
        is_solvable: series_solvable(&rp, tol),
        commutator_j_invariant,
        commutator_plus_j_nilpotent,
        is_unimodular: unimodularity_defect(alg) <= tol,
    }
}

/// Complex dimension of `g' + Jg'` (always J-stable, hence even-dimensional
/// over the reals).
pub fn commutator_plus_j_dim(alg: &HermitianLieAlgebra, tol: f64) -> usize {
    let rp = real_presentation(alg);
    let full = RMat::identity(rp.dim, rp.dim);
    let commutator = orthonormal_span(rp.dim, &bracket_columns(&rp, &full, &full), tol);
    let j_comm = &rp.j * &commutator;
    let mut cols: Vec<DVector<f64>> = Vec::new();
    for i in 0..commutator.ncols() {
        cols.push(commutator.column(i).into_owned());
        cols.push(j_comm.column(i).into_owned());
    }
    let s = orthonormal_span(rp.dim, &cols, tol);
    s.ncols().div_ceil(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::fixture;
    use crate::tensor::c64;

    fn fixture_algebra(name: &str) -> HermitianLieAlgebra {
        match fixture(name).unwrap() {
            crate::families::Fixture::Algebra(a) => a,
            _ => panic!("fixture {name} is pointwise"),
        }
    }

    #[test]
    fn abelian_validates_with_zero_residuals() {
        let alg = HermitianLieAlgebra::abelian(3);
        let report = validate(&alg, 1e-9);
        assert!(report.passed);
        assert_eq!(report.antisymmetry_residual, 0.0);
        assert_eq!(report.jacobi_residual, 0.0);
    }

    #[test]
    fn sl2c_validates() {
        let alg = fixture_algebra("sl2c");
        assert_eq!(jacobi_residual(&alg), 0.0);
        assert!(validate(&alg, 1e-9).passed);
    }

    #[test]
    fn heisenberg_jacobi_vanishes() {
        let alg = fixture_algebra("heisenberg");
        assert_eq!(jacobi_residual(&alg), 0.0);
    }

    #[test]
    fn single_cross_term_fails_jacobi_with_residual_one() {
        // C^1_{23} = 1 (antisymmetric completion), D^1_{21} = 1: the second
        // Bianchi identity keeps the single surviving term C^1_{23}·D^1_{21}.
        let alg = HermitianLieAlgebra::from_entries(
            3,
            &[(0, 1, 2, c64(1.0, 0.0))],
            &[(0, 1, 0, c64(1.0, 0.0))],
            FrameKind::GenericUnitary,
        )
        .unwrap();
        assert_eq!(jacobi_residual(&alg), 1.0);
        assert!(!validate(&alg, 1e-9).passed);
    }

    #[test]
    fn antisymmetry_violation_is_rejected() {
        let mut c = Tensor3::zeros(2);
        c.set(0, 0, 1, c64(1.0, 0.0)); // mirror entry left at zero
        let err = HermitianLieAlgebra::new(c, Tensor3::zeros(2), FrameKind::GenericUnitary, 1e-9);
        assert!(matches!(err, Err(Error::Input(_))));
    }

    #[test]
    fn non_finite_entry_is_rejected() {
        let mut d = Tensor3::zeros(2);
        d.set(0, 0, 0, c64(f64::NAN, 0.0));
        let err = HermitianLieAlgebra::new(Tensor3::zeros(2), d, FrameKind::GenericUnitary, 1e-9);
        assert!(matches!(err, Err(Error::Input(_))));
    }

    #[test]
    fn unimodularity_defect_of_almost_abelian_builds() {
        use crate::families::{almost_abelian_build, AlmostAbelianParams};
        let balanced = AlmostAbelianParams {
            n: 2,
            lambda: 1.0,
            v: vec![C64::ZERO],
            a: CMat::from_element(1, 1, c64(-0.5, 0.0)),
        };
        let alg = almost_abelian_build(&balanced).unwrap();
        assert!(unimodularity_defect(&alg) <= 1e-15);

        let unbalanced = AlmostAbelianParams {
            n: 2,
            lambda: 1.0,
            v: vec![C64::ZERO],
            a: CMat::from_element(1, 1, C64::ZERO),
        };
        let alg = almost_abelian_build(&unbalanced).unwrap();
        assert!((unimodularity_defect(&alg) - 1.0).abs() <= 1e-15);
    }

    #[test]
    fn classify_fixtures() {
        let abelian = HermitianLieAlgebra::abelian(3);
        let flags = classify(&abelian, 1e-9);
        assert!(flags.is_nilpotent);
        assert!(flags.is_solvable);
        assert!(flags.commutator_j_invariant);
        assert!(flags.commutator_plus_j_nilpotent);
        assert!(flags.is_unimodular);

        let sl2c = fixture_algebra("sl2c");
        let flags = classify(&sl2c, 1e-9);
        assert!(!flags.is_nilpotent);
        assert!(!flags.is_solvable);
        assert!(flags.is_unimodular);

        let heis = fixture_algebra("heisenberg");
        let flags = classify(&heis, 1e-9);
        assert!(flags.is_nilpotent);
        assert!(flags.commutator_plus_j_nilpotent);
    }

    #[test]
    fn commutator_plus_j_dims() {
        assert_eq!(commutator_plus_j_dim(&fixture_algebra("heisenberg"), 1e-9), 1);
        assert_eq!(commutator_plus_j_dim(&fixture_algebra("kodaira"), 1e-9), 1);
        assert_eq!(commutator_plus_j_dim(&fixture_algebra("sl2c"), 1e-9), 3);
        assert_eq!(commutator_plus_j_dim(&HermitianLieAlgebra::abelian(2), 1e-9), 0);
    }

    #[test]
    fn real_presentation_roundtrip_abelian_rotation() {
        // 2n = 2 abelian with J a rotation and gram the identity.
        let rp = RealPresentation {
            dim: 2,
            bracket: vec![0.0; 8],
            j: RMat::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]),
            gram: RMat::identity(2, 2),
        };
        let alg = from_real_presentation(&rp, 1e-9).unwrap();
        assert_eq!(alg.n(), 1);
        assert_eq!(alg.c().max_abs(), 0.0);
        assert_eq!(alg.d().max_abs(), 0.0);
    }

    #[test]
    fn real_presentation_rejects_indefinite_gram() {
        let mut gram = RMat::identity(2, 2);
        gram[(1, 1)] = -1.0;
        let rp = RealPresentation {
            dim: 2,
            bracket: vec![0.0; 8],
            j: RMat::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]),
            gram,
        };
        assert!(matches!(
            from_real_presentation(&rp, 1e-9),
            Err(Error::Input(_))
        ));
    }
}
