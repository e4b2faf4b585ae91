//! Machine-readable report document. Field order is fixed by declaration,
//! sparse listings are sorted lexicographically by index, indices are
//! 1-based, and every float has its negative-zero normalized away, so a
//! report is byte-stable for a fixed input, flags and seed.

use hermlie::tensor::{C64, CMat, Tensor3, Tensor4};
use hermlie::{FlatDistances, ResidualEntry};
use serde::Serialize;

fn norm(v: f64) -> f64 {
    v + 0.0
}

#[derive(Clone, Debug, Serialize)]
pub struct SparseEntry {
    pub idx: Vec<usize>,
    pub val: [f64; 2],
}

pub fn sparse3(t: &Tensor3) -> Vec<SparseEntry> {
    let mut out = Vec::new();
    for (a, b, c) in t.indices() {
        let z = t.get(a, b, c);
        if z != C64::ZERO {
            out.push(SparseEntry {
                idx: vec![a + 1, b + 1, c + 1],
                val: [norm(z.re), norm(z.im)],
            });
        }
    }
    out
}

pub fn sparse4(t: &Tensor4) -> Vec<SparseEntry> {
    let mut out = Vec::new();
    for (i, j, k, l) in t.indices() {
        let z = t.get(i, j, k, l);
        if z != C64::ZERO {
            out.push(SparseEntry {
                idx: vec![i + 1, j + 1, k + 1, l + 1],
                val: [norm(z.re), norm(z.im)],
            });
        }
    }
    out
}

pub fn sparse_mat(m: &CMat) -> Vec<SparseEntry> {
    let mut out = Vec::new();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let z = m[(i, j)];
            if z != C64::ZERO {
                out.push(SparseEntry {
                    idx: vec![i + 1, j + 1],
                    val: [norm(z.re), norm(z.im)],
                });
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationJson {
    pub antisymmetry_residual: f64,
    pub jacobi_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pattern_residual: Option<f64>,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationJson {
    pub is_nilpotent: bool,
    pub is_solvable: bool,
    pub commutator_j_invariant: bool,
    pub commutator_plus_j_nilpotent: bool,
    pub is_unimodular: bool,
    pub unimodularity_defect: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TensorsJson {
    #[serde(rename = "T", skip_serializing_if = "Option::is_none")]
    pub torsion: Option<Vec<SparseEntry>>,
    #[serde(rename = "R")]
    pub curvature: Vec<SparseEntry>,
    #[serde(rename = "Ric")]
    pub ricci: Vec<SparseEntry>,
    #[serde(rename = "Rhat")]
    pub symmetrized: Vec<SparseEntry>,
    #[serde(rename = "B", skip_serializing_if = "Option::is_none")]
    pub streets_tian: Option<Vec<SparseEntry>>,
    #[serde(rename = "B_rank", skip_serializing_if = "Option::is_none")]
    pub streets_tian_rank: Option<usize>,
    #[serde(rename = "Rb", skip_serializing_if = "Option::is_none")]
    pub bismut: Option<Vec<SparseEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub is_btp: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MixedJson {
    pub alpha: f64,
    pub beta: f64,
    pub is_constant: bool,
    pub c: f64,
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub asserted_c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_matches: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualJson {
    pub label: String,
    pub value: f64,
    pub tol: f64,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationJson {
    pub theorem: String,
    pub informational: bool,
    pub pass: bool,
    pub residuals: Vec<ResidualJson>,
    pub lines: Vec<String>,
}

pub fn verification_json(theorem: &str, report: &hermlie::VerificationReport) -> VerificationJson {
    VerificationJson {
        theorem: theorem.to_owned(),
        informational: report.informational,
        pass: report.pass(),
        residuals: report
            .residuals
            .iter()
            .map(|r: &ResidualEntry| ResidualJson {
                label: r.label.clone(),
                value: norm(r.value),
                tol: r.tol,
                ok: r.ok(),
            })
            .collect(),
        lines: report.lines.clone(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FlatJson {
    pub lambda_abs: f64,
    pub v_norm: f64,
    pub z_norm: f64,
    pub comm_norm: f64,
    pub comm_x_norm: f64,
}

impl From<FlatDistances> for FlatJson {
    fn from(f: FlatDistances) -> Self {
        FlatJson {
            lambda_abs: norm(f.lambda_abs),
            v_norm: norm(f.v_norm),
            z_norm: norm(f.z_norm),
            comm_norm: norm(f.comm_norm),
            comm_x_norm: norm(f.comm_x_norm),
        }
    }
}

fn mat_pairs(m: &CMat) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|r| {
            (0..m.ncols())
                .map(|c| [norm(m[(r, c)].re), norm(m[(r, c)].im)])
                .collect()
        })
        .collect()
}

/// Family parameters at the best visited point of a search.
#[derive(Clone, Debug, Serialize)]
pub struct ParamsJson {
    pub lambda: f64,
    pub v: Vec<[f64; 2]>,
    #[serde(rename = "A", skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(rename = "X", skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(rename = "Y", skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(rename = "Z", skip_serializing_if = "Option::is_none")]
    pub z: Option<Vec<Vec<[f64; 2]>>>,
}

pub fn params_json(params: &hermlie::FamilyParams) -> ParamsJson {
    match params {
        hermlie::FamilyParams::AlmostAbelian(p) => ParamsJson {
            lambda: norm(p.lambda),
            v: p.v.iter().map(|z| [norm(z.re), norm(z.im)]).collect(),
            a: Some(mat_pairs(&p.a)),
            x: None,
            y: None,
            z: None,
        },
        hermlie::FamilyParams::Codim2(p) => ParamsJson {
            lambda: norm(p.lambda),
            v: p.v.iter().map(|z| [norm(z.re), norm(z.im)]).collect(),
            a: None,
            x: Some(mat_pairs(&p.x)),
            y: Some(mat_pairs(&p.y)),
            z: Some(mat_pairs(&p.z)),
        },
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchJson {
    pub family: String,
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub target_c: Option<f64>,
    pub seed: u64,
    pub restarts: usize,
    pub max_iters: usize,
    pub best_residual: f64,
    pub fitted_c: f64,
    pub flat: FlatJson,
    pub best_params: ParamsJson,
    pub trace_final: f64,
    pub trace_len: usize,
    pub evaluations: usize,
}

/// Top-level report; the key set and order are part of the output contract.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub input_digest: String,
    pub tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frame_kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassificationJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tensors: Option<TensorsJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mixed: Option<MixedJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl Report {
    pub fn new(command: &str, digest: String, tol: f64) -> Self {
        Report {
            command: command.to_owned(),
            input_digest: digest,
            tol,
            seed: None,
            n: None,
            frame_kind: None,
            validation: None,
            classification: None,
            tensors: None,
            mixed: None,
            verification: None,
            search: None,
            timing_ms: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization") + "\n"
    }

    /// Human-readable rendering, deterministic like the JSON form.
    pub fn to_text(&self) -> String {
        fn push(out: &mut String, s: String) {
            out.push_str(&s);
            out.push('\n');
        }
        fn section(out: &mut String, label: &str, entries: &[SparseEntry]) {
            push(out, format!("{label}: {} nonzero", entries.len()));
            for e in entries {
                let idx: Vec<String> = e.idx.iter().map(|i| i.to_string()).collect();
                push(out, format!("  [{}] = {} + {}i", idx.join(","), e.val[0], e.val[1]));
            }
        }
        let mut buf = String::new();
        let out = &mut buf;
        push(out, format!("command: {}", self.command));
        push(out, format!("input:   {}", self.input_digest));
        if let Some(n) = self.n {
            push(out, format!("n:       {n}"));
        }
        push(out, format!("tol:     {:e}", self.tol));
        if let Some(v) = &self.validation {
            push(out, format!(
                "validation: antisymmetry {:.3e}, jacobi {:.3e}{} -> {}",
                v.antisymmetry_residual,
                v.jacobi_residual,
                v.pattern_residual
                    .map_or(String::new(), |p| format!(", pattern {p:.3e}")),
                if v.passed { "pass" } else { "FAIL" }
            ));
        }
        if let Some(c) = &self.classification {
            push(out, format!(
                "classification: nilpotent={} solvable={} J-invariant-commutator={} (g'+Jg')-nilpotent={} unimodular={} (defect {:.3e})",
                c.is_nilpotent,
                c.is_solvable,
                c.commutator_j_invariant,
                c.commutator_plus_j_nilpotent,
                c.is_unimodular,
                c.unimodularity_defect
            ));
        }
        if let Some(t) = &self.tensors {
            if let Some(tor) = &t.torsion {
                section(out, "T", tor);
            }
            section(out, "R", &t.curvature);
            section(out, "Ric", &t.ricci);
            section(out, "Rhat", &t.symmetrized);
            if let Some(b) = &t.streets_tian {
                section(out, "B", b);
            }
            if let Some(r) = t.streets_tian_rank {
                push(out, format!("B rank: {r}"));
            }
            if let Some(rb) = &t.bismut {
                section(out, "Rb", rb);
            }
            if let Some(btp) = t.is_btp {
                push(out, format!("Bismut torsion parallel: {btp}"));
            }
        }
        if let Some(m) = &self.mixed {
            push(out, format!(
                "mixed curvature (alpha={}, beta={}): constant={} c={:.12e} residual={:.3e}",
                m.alpha, m.beta, m.is_constant, m.c, m.residual
            ));
            if let (Some(ac), Some(ok)) = (m.asserted_c, m.c_matches) {
                push(out, format!("asserted c={ac}: {}", if ok { "match" } else { "MISMATCH" }));
            }
        }
        if let Some(v) = &self.verification {
            push(out, format!(
                "theorem {}: {}{}",
                v.theorem,
                if v.pass { "pass" } else { "FAIL" },
                if v.informational { " (informational)" } else { "" }
            ));
            for r in &v.residuals {
                push(out, format!(
                    "  {}: {:.3e} (tol {:.1e}) {}",
                    r.label,
                    r.value,
                    r.tol,
                    if r.ok { "ok" } else { "EXCEEDED" }
                ));
            }
            for line in &v.lines {
                push(out, format!("  note: {line}"));
            }
        }
        if let Some(s) = &self.search {
            push(out, format!(
                "search {} n={} (alpha={}, beta={}) seed={} restarts={} max_iters={}",
                s.family, s.n, s.alpha, s.beta, s.seed, s.restarts, s.max_iters
            ));
            if let Some(c) = s.target_c {
                push(out, format!("  fixed target c = {c}"));
            }
            push(out, format!(
                "  best residual {:.6e}, fitted c {:.6e}, evaluations {}",
                s.best_residual, s.fitted_c, s.evaluations
            ));
            push(out, format!(
                "  flat-locus distances: |lambda| {:.3e}, |v| {:.3e}, |Z| {:.3e}, |[A,A*]|/|[Y,Y*]| {:.3e}, |[Y,X*]| {:.3e}",
                s.flat.lambda_abs, s.flat.v_norm, s.flat.z_norm, s.flat.comm_norm, s.flat.comm_x_norm
            ));
        }
        if let Some(ms) = self.timing_ms {
            push(out, format!("timing: {ms} ms"));
        }
        buf
    }
}
