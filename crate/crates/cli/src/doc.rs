//! The algebra-document file format: complex numbers as `[re, im]` pairs,
//! dense tensors indexed `[j][i][k]` (upper index first), and exactly one of
//! four input styles: raw `C`/`D` tensors, a named family, a real
//! presentation, or a pointwise curvature tensor.

use hermlie::tensor::{C64, CMat, RMat, Tensor3, Tensor4};
use hermlie::{
    almost_abelian_build, codim2_build, from_real_presentation, AlmostAbelianParams, Codim2Params,
    CurvatureTensor, Error, FrameKind, HermitianLieAlgebra, PointwiseCurvature, RealPresentation,
    Result,
};
use serde::{Deserialize, Serialize};

pub type ComplexPair = [f64; 2];

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct RealPresentationDoc {
    pub bracket: Vec<Vec<Vec<f64>>>,
    #[serde(rename = "J")]
    pub j: Vec<Vec<f64>>,
    pub gram: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct PointwiseDoc {
    #[serde(rename = "R")]
    pub r: Vec<Vec<Vec<Vec<ComplexPair>>>>,
}

/// On-disk document. `deny_unknown_fields` keeps diagnostics crisp: the first
/// offending member is named by serde.
#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDocument {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frame_kind: Option<String>,
    #[serde(rename = "C", skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<Vec<Vec<ComplexPair>>>>,
    #[serde(rename = "D", skip_serializing_if = "Option::is_none")]
    pub d: Option<Vec<Vec<Vec<ComplexPair>>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v: Option<Vec<ComplexPair>>,
    #[serde(rename = "A", skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<Vec<ComplexPair>>>,
    #[serde(rename = "X", skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<Vec<ComplexPair>>>,
    #[serde(rename = "Y", skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<Vec<ComplexPair>>>,
    #[serde(rename = "Z", skip_serializing_if = "Option::is_none")]
    pub z: Option<Vec<Vec<ComplexPair>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub real_presentation: Option<RealPresentationDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pointwise: Option<PointwiseDoc>,
}

/// A parsed input: either a full algebra or a pointwise curvature tensor.
pub enum ParsedInput {
    Algebra(HermitianLieAlgebra),
    Pointwise(PointwiseCurvature),
}

impl ParsedInput {
    pub fn n(&self) -> usize {
        match self {
            ParsedInput::Algebra(a) => a.n(),
            ParsedInput::Pointwise(p) => p.r.n(),
        }
    }

    pub fn algebra(&self) -> Result<&HermitianLieAlgebra> {
        match self {
            ParsedInput::Algebra(a) => Ok(a),
            ParsedInput::Pointwise(_) => Err(Error::input(
                "this command needs structure constants; the input is a pointwise tensor",
            )),
        }
    }
}

fn to_c64(p: ComplexPair) -> C64 {
    C64::new(p[0], p[1])
}

fn parse_tensor3(name: &str, n: usize, raw: &[Vec<Vec<ComplexPair>>]) -> Result<Tensor3> {
    let mut t = Tensor3::zeros(n);
    if raw.len() != n {
        return Err(Error::input(format!("{name}: expected {n} blocks")));
    }
    for (a, block) in raw.iter().enumerate() {
        if block.len() != n {
            return Err(Error::input(format!("{name}[{a}]: expected {n} rows")));
        }
        for (b, row) in block.iter().enumerate() {
            if row.len() != n {
                return Err(Error::input(format!("{name}[{a}][{b}]: expected {n} entries")));
            }
            for (c, &val) in row.iter().enumerate() {
                t.set(a, b, c, to_c64(val));
            }
        }
    }
    Ok(t)
}

fn parse_cmatrix(name: &str, m: usize, raw: &[Vec<ComplexPair>]) -> Result<CMat> {
    if raw.len() != m || raw.iter().any(|row| row.len() != m) {
        return Err(Error::input(format!("{name}: expected a {m}x{m} matrix")));
    }
    Ok(CMat::from_fn(m, m, |r, c| to_c64(raw[r][c])))
}

fn parse_rmatrix(name: &str, d: usize, raw: &[Vec<f64>]) -> Result<RMat> {
    if raw.len() != d || raw.iter().any(|row| row.len() != d) {
        return Err(Error::input(format!("{name}: expected a {d}x{d} matrix")));
    }
    Ok(RMat::from_fn(d, d, |r, c| raw[r][c]))
}

pub fn parse_document(text: &str, tol: f64) -> Result<ParsedInput> {
    let doc: AlgebraDocument = serde_json::from_str(text)
        .map_err(|e| Error::input(format!("malformed document: {e}")))?;
    let n = doc.n;
    if n == 0 {
        return Err(Error::input("n: must be a positive integer"));
    }
    let styles = [
        doc.c.is_some() || doc.d.is_some(),
        doc.family.is_some(),
        doc.real_presentation.is_some(),
        doc.pointwise.is_some(),
    ];
    if styles.iter().filter(|&&s| s).count() != 1 {
        return Err(Error::input(
            "exactly one input style expected: C/D tensors, family, real_presentation, or pointwise",
        ));
    }
    let frame_kind = match &doc.frame_kind {
        Some(s) => Some(FrameKind::parse(s)?),
        None => None,
    };

    if doc.c.is_some() || doc.d.is_some() {
        let c_raw = doc.c.as_ref().ok_or_else(|| Error::input("C: missing"))?;
        let d_raw = doc.d.as_ref().ok_or_else(|| Error::input("D: missing"))?;
        let c = parse_tensor3("C", n, c_raw)?;
        let d = parse_tensor3("D", n, d_raw)?;
        let alg =
            HermitianLieAlgebra::new(c, d, frame_kind.unwrap_or(FrameKind::GenericUnitary), tol)?;
        return Ok(ParsedInput::Algebra(alg));
    }

    if let Some(family) = &doc.family {
        let m = n
            .checked_sub(1)
            .filter(|&m| m >= 1)
            .ok_or_else(|| Error::input("family inputs require n >= 2"))?;
        let lambda = doc.lambda.ok_or_else(|| Error::input("lambda: missing"))?;
        let v: Vec<C64> = match &doc.v {
            Some(raw) if raw.len() == m => raw.iter().map(|&p| to_c64(p)).collect(),
            Some(_) => return Err(Error::input(format!("v: expected {m} entries"))),
            None => vec![C64::ZERO; m],
        };
        match family.as_str() {
            "almost_abelian" => {
                let a_raw = doc.a.as_ref().ok_or_else(|| Error::input("A: missing"))?;
                let p = AlmostAbelianParams {
                    n,
                    lambda,
                    v,
                    a: parse_cmatrix("A", m, a_raw)?,
                };
                Ok(ParsedInput::Algebra(almost_abelian_build(&p)?))
            }
            "codim2" => {
                let x = parse_cmatrix("X", m, doc.x.as_ref().ok_or_else(|| Error::input("X: missing"))?)?;
                let y = parse_cmatrix("Y", m, doc.y.as_ref().ok_or_else(|| Error::input("Y: missing"))?)?;
                let z = parse_cmatrix("Z", m, doc.z.as_ref().ok_or_else(|| Error::input("Z: missing"))?)?;
                let p = Codim2Params {
                    n,
                    lambda,
                    v,
                    x,
                    y,
                    z,
                };
                Ok(ParsedInput::Algebra(codim2_build(&p, tol)?))
            }
            other => Err(Error::input(format!("family: unknown value `{other}`"))),
        }
    } else if let Some(rp) = &doc.real_presentation {
        let dim = 2 * n;
        if rp.bracket.len() != dim
            || rp.bracket.iter().any(|b| b.len() != dim || b.iter().any(|r| r.len() != dim))
        {
            return Err(Error::input(format!("bracket: expected {dim}^3 entries")));
        }
        let mut bracket = vec![0.0; dim * dim * dim];
        for (c, block) in rp.bracket.iter().enumerate() {
            for (a, row) in block.iter().enumerate() {
                for (b, &v) in row.iter().enumerate() {
                    bracket[(c * dim + a) * dim + b] = v;
                }
            }
        }
        let presentation = RealPresentation {
            dim,
            bracket,
            j: parse_rmatrix("J", dim, &rp.j)?,
            gram: parse_rmatrix("gram", dim, &rp.gram)?,
        };
        Ok(ParsedInput::Algebra(from_real_presentation(&presentation, tol)?))
    } else {
        let pw = doc.pointwise.as_ref().expect("style checked above");
        let raw = &pw.r;
        let shape_ok = raw.len() == n
            && raw.iter().all(|a| {
                a.len() == n
                    && a.iter().all(|b| {
                        b.len() == n && b.iter().all(|c| c.len() == n)
                    })
            });
        if !shape_ok {
            return Err(Error::input(format!("pointwise.R: expected {n}^4 entries")));
        }
        let mut t = Tensor4::zeros(n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        t.set(i, j, k, l, to_c64(raw[i][j][k][l]));
                    }
                }
            }
        }
        let sym = {
            let mut worst = 0.0f64;
            for (i, j, k, l) in t.indices() {
                worst = worst.max((t.get(i, j, k, l).conj() - t.get(j, i, l, k)).norm());
            }
            worst
        };
        if sym > tol.max(1e-9) {
            return Err(Error::input(format!(
                "pointwise.R: Hermitian pair symmetry violated by {sym:.3e}"
            )));
        }
        let r = CurvatureTensor::new(t);
        let ric = hermlie::first_ricci(&r);
        Ok(ParsedInput::Pointwise(PointwiseCurvature { r, ric }))
    }
}

fn norm(v: f64) -> f64 {
    v + 0.0 // map -0.0 to +0.0 for stable serialization
}

fn tensor3_doc(t: &Tensor3) -> Vec<Vec<Vec<ComplexPair>>> {
    let n = t.n();
    (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    (0..n)
                        .map(|c| [norm(t.get(a, b, c).re), norm(t.get(a, b, c).im)])
                        .collect()
                })
                .collect()
        })
        .collect()
}

fn tensor4_doc(t: &Tensor4) -> Vec<Vec<Vec<Vec<ComplexPair>>>> {
    let n = t.n();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n)
                        .map(|k| {
                            (0..n)
                                .map(|l| {
                                    let z = t.get(i, j, k, l);
                                    [norm(z.re), norm(z.im)]
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// Emit a fixture as a parseable document.
pub fn emit_fixture(name: &str) -> Result<String> {
    let fx = hermlie::fixture(name)?;
    let doc = match &fx {
        hermlie::Fixture::Algebra(alg) => AlgebraDocument {
            n: alg.n(),
            frame_kind: Some(alg.frame_kind().as_str().to_owned()),
            c: Some(tensor3_doc(alg.c())),
            d: Some(tensor3_doc(alg.d())),
            ..AlgebraDocument::default()
        },
        hermlie::Fixture::Pointwise(pw) => AlgebraDocument {
            n: pw.r.n(),
            pointwise: Some(PointwiseDoc {
                r: tensor4_doc(pw.r.tensor()),
            }),
            ..AlgebraDocument::default()
        },
    };
    Ok(serde_json::to_string_pretty(&doc).expect("document serialization") + "\n")
}
