//! Seeded random draws of family parameters, unitary frames and admissible
//! torsion data. Every function takes the caller's generator, so draws are
//! reproducible from a seed.
//!
//! Codimension-2 draws keep the integrability constraints satisfied by
//! sampling two exactly-solvable charts and then conjugating by a random
//! unitary block to fill out dense orbits:
//!
//! * `Z = 0`: the second constraint is vacuous and the first is the linear
//!   Sylvester-type equation `λ X* + [X*, Y] = −λ Y`, solved for `X`;
//! * diagonal: `X`, `Y`, `Z` diagonal with `|Z_ii| ∈ {0, λ}` and `Y_ii` real
//!   on the support of `Z`, where both constraints reduce componentwise.

use crate::curvature::TorsionTensor;
use crate::families::{codim2_constraint_residual, AlmostAbelianParams, Codim2Params};
use crate::tensor::{C64, CMat, Tensor3};
use crate::verify::NonBalancedBtpFrameData;
use rand::Rng;

pub fn complex_in_disk<R: Rng>(rng: &mut R) -> C64 {
    loop {
        let z = C64::new(2.0 * rng.random::<f64>() - 1.0, 2.0 * rng.random::<f64>() - 1.0);
        if z.norm_sqr() <= 1.0 {
            return z;
        }
    }
}

pub fn cmatrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    let data: Vec<C64> = (0..rows * cols).map(|_| complex_in_disk(rng)).collect();
    CMat::from_row_slice(rows, cols, &data)
}

/// Haar-ish random unitary via QR of a dense complex matrix.
pub fn unitary<R: Rng>(n: usize, rng: &mut R) -> CMat {
    loop {
        let m = cmatrix(n, n, rng);
        let qr = m.qr();
        let q = qr.q();
        // reject the measure-zero rank-deficient draws
        if (q.adjoint() * &q - CMat::identity(n, n)).iter().all(|z| z.norm() < 1e-10) {
            return q;
        }
    }
}

/// Random normal matrix `U diag U*` with eigenvalue real parts bounded away
/// from zero, so that curvature responds linearly to small perturbations of
/// `λ` and `v` around it.
pub fn normal_matrix<R: Rng>(m: usize, rng: &mut R) -> CMat {
    let u = unitary(m, rng);
    let mut diag = CMat::zeros(m, m);
    for i in 0..m {
        let re_sign = if rng.random::<f64>() < 0.5 { -1.0 } else { 1.0 };
        diag[(i, i)] = C64::new(
            re_sign * (0.2 + 0.8 * rng.random::<f64>()),
            2.0 * rng.random::<f64>() - 1.0,
        );
    }
    &u * diag * u.adjoint()
}

pub fn unit_vector<R: Rng>(n: usize, rng: &mut R) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..n).map(|_| complex_in_disk(rng)).collect();
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-3 {
            return v.iter().map(|z| z / norm).collect();
        }
    }
}

/// Random almost-abelian parameters with entries in the unit disk; when
/// `unimodular` is set, the diagonal of `A` is shifted so that
/// `λ + 2 Re tr A = 0`.
pub fn almost_abelian<R: Rng>(n: usize, rng: &mut R, unimodular: bool) -> AlmostAbelianParams {
    let m = n - 1;
    let mut p = AlmostAbelianParams {
        n,
        lambda: 2.0 * rng.random::<f64>() - 1.0,
        v: (0..m).map(|_| complex_in_disk(rng)).collect(),
        a: cmatrix(m, m, rng),
    };
    if unimodular {
        project_almost_abelian_unimodular(&mut p);
    }
    p
}

/// Shift `diag A` so that `λ + 2 Re tr A = 0` (exactly this projection keeps
/// search iterates on the unimodular slice).
pub fn project_almost_abelian_unimodular(p: &mut AlmostAbelianParams) {
    let m = p.n - 1;
    let defect = p.lambda + 2.0 * p.a.diagonal().iter().map(|z| z.re).sum::<f64>();
    let shift = defect / (2.0 * m as f64);
    for i in 0..m {
        p.a[(i, i)] -= C64::new(shift, 0.0);
    }
}

/// Solve `λ W + W Y − Y W = −λ Y` for `W = X*` by dense vectorization;
/// `None` when the operator is numerically singular.
pub fn solve_codim2_x(lambda: f64, y: &CMat) -> Option<CMat> {
    let m = y.nrows();
    let dim = m * m;
    let mut op = CMat::zeros(dim, dim);
    for a in 0..m {
        for b in 0..m {
            let mut e = CMat::zeros(m, m);
            e[(a, b)] = C64::ONE;
            let image = &e * C64::new(lambda, 0.0) + &e * y - y * &e;
            for r in 0..m {
                for c in 0..m {
                    op[(r * m + c, a * m + b)] = image[(r, c)];
                }
            }
        }
    }
    let rhs = nalgebra::DVector::from_fn(dim, |i, _| -C64::new(lambda, 0.0) * y[(i / m, i % m)]);
    let lu = op.clone().lu();
    let sol = lu.solve(&rhs)?;
    if (op * &sol - rhs).iter().any(|z| z.norm() > 1e-8) {
        return None;
    }
    let w = CMat::from_fn(m, m, |r, c| sol[r * m + c]);
    Some(w.adjoint())
}

/// Unitary block change `ẽ_i = Σ U_{ij} e_j` on the directions `2..n`:
/// `X̃ = U X U*`, `Ỹ = U Y U*`, `Z̃ = U Z ᵗU`, `ṽ = U v`.
pub fn conjugate_codim2(p: &Codim2Params, u: &CMat) -> Codim2Params {
    let v_old = nalgebra::DVector::from_column_slice(&p.v);
    let v_new = u * v_old;
    Codim2Params {
        n: p.n,
        lambda: p.lambda,
        v: v_new.iter().cloned().collect(),
        x: u * &p.x * u.adjoint(),
        y: u * &p.y * u.adjoint(),
        z: u * &p.z * u.transpose(),
    }
}

/// Random codimension-2 parameters on the constraint variety (see the module
/// docs for the two charts). Draws are conjugated by a random unitary block,
/// so the returned matrices are dense.
pub fn codim2<R: Rng>(n: usize, rng: &mut R, unimodular: bool) -> Codim2Params {
    let m = n - 1;
    loop {
        let p = if rng.random::<f64>() < 0.5 {
            codim2_sylvester_chart(n, rng, unimodular)
        } else {
            Some(codim2_diagonal_chart(n, rng, unimodular))
        };
        let Some(p) = p else { continue };
        let u = unitary(m, rng);
        let p = conjugate_codim2(&p, &u);
        if let Ok((r1, r2)) = codim2_constraint_residual(&p) {
            if r1.max(r2) <= 1e-10 {
                return p;
            }
        }
    }
}

fn codim2_sylvester_chart<R: Rng>(n: usize, rng: &mut R, unimodular: bool) -> Option<Codim2Params> {
    let m = n - 1;
    let lambda = 0.1 + rng.random::<f64>();
    let mut y = cmatrix(m, m, rng);
    if unimodular {
        // tr X = −conj(tr Y) follows from the solve; unimodularity reduces to
        // λ + 2 Re tr Y = 0.
        let shift = (-lambda / 2.0 - y.diagonal().iter().map(|z| z.re).sum::<f64>()) / m as f64;
        for i in 0..m {
            y[(i, i)] += C64::new(shift, 0.0);
        }
    }
    let x = solve_codim2_x(lambda, &y)?;
    Some(Codim2Params {
        n,
        lambda,
        v: (0..m).map(|_| complex_in_disk(rng)).collect(),
        x,
        y,
        z: CMat::zeros(m, m),
    })
}

fn codim2_diagonal_chart<R: Rng>(n: usize, rng: &mut R, unimodular: bool) -> Codim2Params {
    let m = n - 1;
    let lambda = 0.1 + rng.random::<f64>();
    let mut z = CMat::zeros(m, m);
    let mut y = CMat::zeros(m, m);
    let mut support = 0usize;
    for i in 0..m {
        if rng.random::<f64>() < 0.5 {
            let phase = 2.0 * std::f64::consts::PI * rng.random::<f64>();
            z[(i, i)] = C64::new(lambda * phase.cos(), lambda * phase.sin());
            y[(i, i)] = C64::new(2.0 * rng.random::<f64>() - 1.0, 0.0);
            support += 1;
        } else {
            y[(i, i)] = complex_in_disk(rng);
        }
    }
    if unimodular {
        // λ − tr X + tr Y = 0 reduces to 2 Re tr Y = (support − 1)·λ.
        let target = (support as f64 - 1.0) * lambda;
        let current = 2.0 * y.diagonal().iter().map(|z| z.re).sum::<f64>();
        let shift = (target - current) / (2.0 * m as f64);
        for i in 0..m {
            y[(i, i)] += C64::new(shift, 0.0);
        }
    }
    let mut x = CMat::zeros(m, m);
    for i in 0..m {
        x[(i, i)] = C64::new(z[(i, i)].norm_sqr() / lambda, 0.0) - y[(i, i)].conj();
    }
    Codim2Params {
        n,
        lambda,
        v: (0..m).map(|_| complex_in_disk(rng)).collect(),
        x,
        y,
        z,
    }
}

/// Random admissible non-balanced BTP torsion data: `a_i > 0` for `i < n`,
/// `a_n = 0`, `λ = Σ a_i`, pinned entries `T^j_{in} = δ_{ij} a_i`,
/// `T^n_{··} = 0`, and free antisymmetric entries among the first `n − 1`
/// directions.
pub fn nonbalanced_btp<R: Rng>(n: usize, rng: &mut R) -> NonBalancedBtpFrameData {
    let mut a = vec![0.0f64; n];
    for ai in a.iter_mut().take(n - 1) {
        *ai = 0.1 + rng.random::<f64>();
    }
    let lambda: f64 = a[..n - 1].iter().sum();
    let last = n - 1;
    let mut t = Tensor3::zeros(n);
    for j in 0..last {
        t.set(j, j, last, C64::new(a[j], 0.0));
        t.set(j, last, j, C64::new(-a[j], 0.0));
        for i in 0..last {
            for k in (i + 1)..last {
                let v = complex_in_disk(rng);
                t.set(j, i, k, v);
                t.set(j, k, i, -v);
            }
        }
    }
    NonBalancedBtpFrameData {
        n,
        lambda,
        a,
        torsion: TorsionTensor::new(t),
    }
}
