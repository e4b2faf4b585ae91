//! Closed-form builders, validators and curvature formulas for the special
//! families, plus the fixture catalog.
//!
//! The almost-abelian normal form is parameterized by `(λ, v, A)`:
//!
//! ```text
//! D^1_{11} = λ ∈ R,  D^1_{i1} = v_i,  D^j_{i1} = A_{ij},  C^j_{1i} = −conj(A_{ji}),
//! ```
//!
//! and the codimension-2 normal form by `(λ ≥ 0, v, X, Y, Z)`:
//!
//! ```text
//! C^j_{1i} = X_{ij},  D^1_{11} = λ,  D^j_{i1} = Y_{ij},  D^1_{ij} = Z_{ij},  D^1_{i1} = v_i,
//! ```
//!
//! subject to the integrability constraints
//! `λ(X* + Y) + [X*, Y] − Z·Z̄ = 0` and `λZ − (Z·ᵗX + Y·Z) = 0`.
//! Throughout, matrix rows/columns 0-based index the frame directions 2..n.

use crate::algebra::{FrameKind, HermitianLieAlgebra};
use crate::curvature::{CurvatureTensor, RicciMatrix, TorsionTensor};
use crate::error::{Error, Result};
use crate::patterns;
use crate::tensor::{commutator, max_abs_mat, C64, CMat, RMat, Tensor3, Tensor4};

pub const FIXTURE_NAMES: &[&str] = &["abelian(n)", "heisenberg", "kodaira", "sl2c", "wallach"];

// ---------------------------------------------------------------------------
// Almost abelian family
// ---------------------------------------------------------------------------

/// Parameters of the almost-abelian normal form; `v` has length `n − 1` and
/// `A` is `(n−1) × (n−1)`.
#[derive(Clone, Debug)]
pub struct AlmostAbelianParams {
    pub n: usize,
    pub lambda: f64,
    pub v: Vec<C64>,
    pub a: CMat,
}

impl AlmostAbelianParams {
    fn check(&self) -> Result<()> {
        let m = self.n.checked_sub(1).filter(|_| self.n >= 2).ok_or_else(|| {
            Error::input("almost-abelian family requires n >= 2")
        })?;
        if self.v.len() != m || self.a.nrows() != m || self.a.ncols() != m {
            return Err(Error::input("almost-abelian parameter shapes do not match n"));
        }
        let finite = self.lambda.is_finite()
            && self.v.iter().all(|z| z.re.is_finite() && z.im.is_finite())
            && self.a.iter().all(|z| z.re.is_finite() && z.im.is_finite());
        if !finite {
            return Err(Error::input("non-finite almost-abelian parameter"));
        }
        Ok(())
    }
}

pub fn almost_abelian_build(p: &AlmostAbelianParams) -> Result<HermitianLieAlgebra> {
    p.check()?;
    let n = p.n;
    let mut c = Tensor3::zeros(n);
    let mut d = Tensor3::zeros(n);
    d.set(0, 0, 0, C64::new(p.lambda, 0.0));
    for i in 1..n {
        d.set(0, i, 0, p.v[i - 1]);
        for j in 1..n {
            d.set(j, i, 0, p.a[(i - 1, j - 1)]);
        }
    }
    for j in 1..n {
        for i in 1..n {
            let val = -p.a[(j - 1, i - 1)].conj();
            c.set(j, 0, i, val);
            c.set(j, i, 0, -val);
        }
    }
    HermitianLieAlgebra::new(c, d, FrameKind::AdmissibleAlmostAbelian, 0.0)
}

/// Closed-form Chern torsion: `T^1_{1i} = v_i`, `T^j_{1i} = A_{ij} + conj(A_{ji})`.
pub fn almost_abelian_torsion(p: &AlmostAbelianParams) -> Result<TorsionTensor> {
    p.check()?;
    let n = p.n;
    let mut t = Tensor3::zeros(n);
    for i in 1..n {
        t.set(0, 0, i, p.v[i - 1]);
        t.set(0, i, 0, -p.v[i - 1]);
        for j in 1..n {
            let val = p.a[(i - 1, j - 1)] + p.a[(j - 1, i - 1)].conj();
            t.set(j, 0, i, val);
            t.set(j, i, 0, -val);
        }
    }
    Ok(TorsionTensor::new(t))
}

/// Closed-form Chern curvature. The only nonzero block sits at `(1, 1̄, ·, ·)`:
///
/// ```text
/// R_{1 1̄ 1 1̄} = −2λ² − |v|²,
/// R_{1 1̄ i 1̄} = −Σ_k conj(A_{ki}) v_k,
/// R_{1 1̄ i j̄} = v_i conj(v_j) + [A, A*]_{ij} − λ( A_{ij} + conj(A_{ji}) ).
/// ```
pub fn almost_abelian_curvature(p: &AlmostAbelianParams) -> Result<CurvatureTensor> {
    p.check()?;
    let n = p.n;
    let m = n - 1;
    let mut r = Tensor4::zeros(n);
    let v_norm2: f64 = p.v.iter().map(|z| z.norm_sqr()).sum();
    r.set(
        0,
        0,
        0,
        0,
        C64::new(-2.0 * p.lambda * p.lambda - v_norm2, 0.0),
    );
    let comm = commutator(&p.a, &p.a.adjoint());
    for i in 1..n {
        let mut s = C64::ZERO;
        for k in 0..m {
            s -= p.a[(k, i - 1)].conj() * p.v[k];
        }
        r.set(0, 0, i, 0, s);
        r.set(0, 0, 0, i, s.conj());
        for j in 1..n {
            let val = p.v[i - 1] * p.v[j - 1].conj() + comm[(i - 1, j - 1)]
                - p.lambda * (p.a[(i - 1, j - 1)] + p.a[(j - 1, i - 1)].conj());
            r.set(0, 0, i, j, val);
        }
    }
    Ok(CurvatureTensor::new(r))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilyFlags {
    pub unimodular: bool,
    pub chern_flat: bool,
}

/// `unimodular ⟺ λ + tr A + conj(tr A) = 0`;
/// `chern_flat ⟺ λ = 0, v = 0, [A, A*] = 0` (all to `tol`).
pub fn almost_abelian_flags(p: &AlmostAbelianParams, tol: f64) -> Result<FamilyFlags> {
    p.check()?;
    let trace_a: C64 = p.a.diagonal().iter().sum();
    let unimodular = (p.lambda + 2.0 * trace_a.re).abs() <= tol;
    let v_norm: f64 = p.v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let comm_norm = commutator(&p.a, &p.a.adjoint()).norm();
    let chern_flat = p.lambda.abs().max(v_norm).max(comm_norm) <= tol;
    Ok(FamilyFlags {
        unimodular,
        chern_flat,
    })
}

// ---------------------------------------------------------------------------
// Codimension-2 family
// ---------------------------------------------------------------------------

/// Parameters of the codimension-2 normal form; all matrices are
/// `(n−1) × (n−1)` and `λ ≥ 0` (the frame phase is rotated so `D^1_{11} ≥ 0`).
#[derive(Clone, Debug)]
pub struct Codim2Params {
    pub n: usize,
    pub lambda: f64,
    pub v: Vec<C64>,
    pub x: CMat,
    pub y: CMat,
    pub z: CMat,
}

impl Codim2Params {
    fn check(&self) -> Result<()> {
        let m = self.n.checked_sub(1).filter(|_| self.n >= 2).ok_or_else(|| {
            Error::input("codim-2 family requires n >= 2")
        })?;
        let shapes_ok = self.v.len() == m
            && [&self.x, &self.y, &self.z]
                .iter()
                .all(|mat| mat.nrows() == m && mat.ncols() == m);
        if !shapes_ok {
            return Err(Error::input("codim-2 parameter shapes do not match n"));
        }
        if !self.lambda.is_finite() || self.lambda < 0.0 {
            return Err(Error::input("codim-2 lambda must be finite and >= 0"));
        }
        let finite = self.v.iter().all(|z| z.re.is_finite() && z.im.is_finite())
            && [&self.x, &self.y, &self.z]
                .iter()
                .all(|mat| mat.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
        if !finite {
            return Err(Error::input("non-finite codim-2 parameter"));
        }
        Ok(())
    }
}

/// Residuals of the two integrability constraints,
/// `( ‖λ(X*+Y) + [X*,Y] − Z·Z̄‖, ‖λZ − (Z·ᵗX + Y·Z)‖ )` in max norm.
pub fn codim2_constraint_residual(p: &Codim2Params) -> Result<(f64, f64)> {
    p.check()?;
    let xs = p.x.adjoint();
    let zbar = p.z.map(|z| z.conj());
    let r1 = (&xs + &p.y) * C64::new(p.lambda, 0.0) + commutator(&xs, &p.y) - &p.z * &zbar;
    let r2 = &p.z * C64::new(p.lambda, 0.0) - (&p.z * p.x.transpose() + &p.y * &p.z);
    Ok((max_abs_mat(&r1), max_abs_mat(&r2)))
}

pub fn codim2_build(p: &Codim2Params, tol: f64) -> Result<HermitianLieAlgebra> {
    let (r1, r2) = codim2_constraint_residual(p)?;
    if r1.max(r2) > tol {
        return Err(Error::input(format!(
            "codim-2 integrability constraints violated: residuals {r1:.3e}, {r2:.3e} > tol {tol:.3e}"
        )));
    }
    let n = p.n;
    let mut c = Tensor3::zeros(n);
    let mut d = Tensor3::zeros(n);
    d.set(0, 0, 0, C64::new(p.lambda, 0.0));
    for i in 1..n {
        d.set(0, i, 0, p.v[i - 1]);
        for j in 1..n {
            d.set(j, i, 0, p.y[(i - 1, j - 1)]);
            d.set(0, i, j, p.z[(i - 1, j - 1)]);
        }
    }
    for j in 1..n {
        for i in 1..n {
            let val = p.x[(i - 1, j - 1)];
            c.set(j, 0, i, val);
            c.set(j, i, 0, -val);
        }
    }
    HermitianLieAlgebra::new(c, d, FrameKind::AdmissibleCodim2, 0.0)
}

/// Closed-form curvature records of the codimension-2 family. Matrix rows and
/// columns index the directions `2..n`.
#[derive(Clone, Debug)]
pub struct Codim2CurvatureRecords {
    /// `R_{1 1̄ 1 1̄} = −2λ² − |v|²`.
    pub r_1111: f64,
    /// `R_{i ī i ī} = |Z_{ii}|²`.
    pub h_diag: Vec<f64>,
    /// `R̂_{i ī k k̄} = ¼ |Z_{ik} + Z_{ki}|²` (the diagonal degenerates to `|Z_{ii}|²`).
    pub rhat_iikk: RMat,
    /// `R̂_{1 1̄ i j̄} = ¼( v v* + [Y,Y*] − λ(Y*+Y) − Z·Z̄ − ᵗZ·Z* − ᵗZ·Z̄ )_{ij}`.
    pub rhat_11ij: CMat,
    /// `Σ_i R̂_{1 1̄ i ī} = ¼( |v|² − λ·tr(Y+Y*) − 2 tr(Z·Z̄) − |Z|² )`.
    pub rhat_11_trace: f64,
    /// `R_{1 1̄} = −2λ² − λ·tr(Y + Y*)`; all other Ricci entries vanish.
    pub ric_11: f64,
}

pub fn codim2_curvature(p: &Codim2Params) -> Result<Codim2CurvatureRecords> {
    p.check()?;
    let m = p.n - 1;
    let v_norm2: f64 = p.v.iter().map(|z| z.norm_sqr()).sum();
    let r_1111 = -2.0 * p.lambda * p.lambda - v_norm2;
    let h_diag: Vec<f64> = (0..m).map(|i| p.z[(i, i)].norm_sqr()).collect();
    let mut rhat_iikk = RMat::zeros(m, m);
    for i in 0..m {
        for k in 0..m {
            rhat_iikk[(i, k)] = 0.25 * (p.z[(i, k)] + p.z[(k, i)]).norm_sqr();
        }
    }
    let vv = CMat::from_fn(m, m, |i, j| p.v[i] * p.v[j].conj());
    let zbar = p.z.map(|z| z.conj());
    let zt = p.z.transpose();
    let inner = vv + commutator(&p.y, &p.y.adjoint())
        - (p.y.adjoint() + &p.y) * C64::new(p.lambda, 0.0)
        - &p.z * &zbar
        - &zt * p.z.adjoint()
        - &zt * &zbar;
    let rhat_11ij = inner * C64::new(0.25, 0.0);
    let tr_y2 = 2.0 * p.y.diagonal().iter().map(|z| z.re).sum::<f64>();
    let tr_zzbar = (&p.z * &zbar).diagonal().iter().map(|z| z.re).sum::<f64>();
    let z_norm2: f64 = p.z.iter().map(|z| z.norm_sqr()).sum();
    let rhat_11_trace = 0.25 * (v_norm2 - p.lambda * tr_y2 - 2.0 * tr_zzbar - z_norm2);
    let ric_11 = -2.0 * p.lambda * p.lambda - p.lambda * tr_y2;
    Ok(Codim2CurvatureRecords {
        r_1111,
        h_diag,
        rhat_iikk,
        rhat_11ij,
        rhat_11_trace,
        ric_11,
    })
}

/// Chern-flatness and unimodularity flags of the codimension-2 family:
/// `unimodular ⟺ λ − tr X + tr Y = 0`;
/// `chern_flat ⟺ λ = 0, v = 0, Z = 0, [Y,Y*] = 0, [Y,X*] = 0`.
pub fn codim2_flags(p: &Codim2Params, tol: f64) -> Result<FamilyFlags> {
    p.check()?;
    let tr: C64 = C64::new(p.lambda, 0.0) - p.x.diagonal().iter().sum::<C64>()
        + p.y.diagonal().iter().sum::<C64>();
    let v_norm: f64 = p.v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let worst = p
        .lambda
        .abs()
        .max(v_norm)
        .max(p.z.norm())
        .max(commutator(&p.y, &p.y.adjoint()).norm())
        .max(commutator(&p.y, &p.x.adjoint()).norm());
    Ok(FamilyFlags {
        unimodular: tr.norm() <= tol,
        chern_flat: worst <= tol,
    })
}

/// Engine values of the `n = 2` off-diagonal entries against their normal
/// form `(R_{1 1̄ 1 2̄}, R_{1 2̄ 1 1̄}, R_{1 2̄ 2 2̄}) = (−v Z̄, −v Z̄, v Z̄)`
/// (exact when `Y = 0`, the case singled out by the unimodular analysis).
#[derive(Clone, Copy, Debug)]
pub struct OffDiagCheck {
    pub computed: [C64; 3],
    pub expected: [C64; 3],
    pub max_residual: f64,
}

pub fn codim2_offdiag_entry(p: &Codim2Params, tol: f64) -> Result<OffDiagCheck> {
    if p.n != 2 {
        return Err(Error::input("off-diagonal entry check requires n = 2"));
    }
    let alg = codim2_build(p, tol)?;
    let r = crate::curvature::chern_curvature(&alg);
    let computed = [r.get(0, 0, 0, 1), r.get(0, 1, 0, 0), r.get(0, 1, 1, 1)];
    let vzbar = p.v[0] * p.z[(0, 0)].conj();
    let expected = [-vzbar, -vzbar, vzbar];
    let max_residual = computed
        .iter()
        .zip(&expected)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
    Ok(OffDiagCheck {
        computed,
        expected,
        max_residual,
    })
}

// ---------------------------------------------------------------------------
// Frame pattern
// ---------------------------------------------------------------------------

/// Max modulus of any entry violating the admissible-frame pattern for the
/// declared split `r` (see [`crate::algebra::FrameKind`] and the docs on
/// [`patterns`]): `C^γ_{ab} = D^a_{γb} = 0` for `γ > r`, plus the Salamon
/// pattern inside the block. Zero means the frame is admissible.
pub fn salamon_pattern_residual(alg: &HermitianLieAlgebra, r: usize) -> Result<f64> {
    if r > alg.n() {
        return Err(Error::input("split index r exceeds n"));
    }
    Ok(patterns::salamon_residual(alg, r))
}

// ---------------------------------------------------------------------------
// Fixture catalog
// ---------------------------------------------------------------------------

/// Curvature data given only at a reference point, with no underlying
/// left-invariant algebra.
#[derive(Clone, Debug)]
pub struct PointwiseCurvature {
    pub r: CurvatureTensor,
    pub ric: RicciMatrix,
}

#[derive(Clone, Debug)]
pub enum Fixture {
    Algebra(HermitianLieAlgebra),
    Pointwise(PointwiseCurvature),
}

/// Catalog lookup. Names: `abelian(N)`, `heisenberg`, `kodaira`, `sl2c`,
/// `wallach`. The wallach entry is pointwise-only.
pub fn fixture(name: &str) -> Result<Fixture> {
    let one = C64::ONE;
    match name {
        "heisenberg" => Ok(Fixture::Algebra(HermitianLieAlgebra::from_entries(
            3,
            &[(0, 1, 2, one)],
            &[],
            FrameKind::GenericUnitary,
        )?)),
        "kodaira" => Ok(Fixture::Algebra(HermitianLieAlgebra::from_entries(
            2,
            &[],
            &[(0, 1, 0, -one)],
            FrameKind::Salamon,
        )?)),
        "sl2c" => Ok(Fixture::Algebra(HermitianLieAlgebra::from_entries(
            3,
            &[(2, 0, 1, one), (1, 0, 2, -one), (0, 1, 2, one)],
            &[],
            FrameKind::GenericUnitary,
        )?)),
        "wallach" => Ok(Fixture::Pointwise(wallach_pointwise())),
        other => {
            if let Some(arg) = other.strip_prefix("abelian(").and_then(|s| s.strip_suffix(')')) {
                let n: usize = arg
                    .parse()
                    .map_err(|_| Error::input(format!("bad abelian dimension `{arg}`")))?;
                if n == 0 {
                    return Err(Error::input("abelian dimension must be positive"));
                }
                return Ok(Fixture::Algebra(HermitianLieAlgebra::abelian(n)));
            }
            Err(Error::input(format!("unknown fixture `{other}`")))
        }
    }
}

/// Pointwise Chern curvature of the Wallach threefold at its reference point:
/// `R_{i j̄ k l̄} = 0` unless `{i,k} = {j,l}`, diagonal entries 2, and the
/// listed off-diagonal values (with their Hermitian mirrors).
fn wallach_pointwise() -> PointwiseCurvature {
    let mut t = Tensor4::zeros(3);
    let set = |t: &mut Tensor4, i: usize, j: usize, k: usize, l: usize, v: f64| {
        t.set(i, j, k, l, C64::new(v, 0.0));
    };
    set(&mut t, 0, 0, 0, 0, 2.0);
    set(&mut t, 1, 1, 1, 1, 2.0);
    set(&mut t, 2, 2, 2, 2, 2.0);
    set(&mut t, 1, 1, 0, 0, 1.0); // R_{2 2̄ 1 1̄}
    set(&mut t, 1, 1, 2, 2, 1.0); // R_{2 2̄ 3 3̄}
    set(&mut t, 0, 1, 1, 0, 1.0); // R_{1 2̄ 2 1̄}
    set(&mut t, 1, 0, 0, 1, 1.0); //   mirror R_{2 1̄ 1 2̄}
    set(&mut t, 2, 1, 1, 2, 1.0); // R_{3 2̄ 2 3̄}
    set(&mut t, 1, 2, 2, 1, 1.0); //   mirror R_{2 3̄ 3 2̄}
    set(&mut t, 0, 2, 2, 0, -1.0); // R_{1 3̄ 3 1̄}
    set(&mut t, 2, 0, 0, 2, -1.0); //   mirror R_{3 1̄ 1 3̄}
    let r = CurvatureTensor::new(t);
    let ric = crate::curvature::first_ricci(&r);
    PointwiseCurvature { r, ric }
}
