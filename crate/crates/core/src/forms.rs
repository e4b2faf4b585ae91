//! Minimal exterior algebra over the coframe generators `φ_i`, `φ̄_i`,
//! used to expand `d(dφ_i)` independently of the index-identity route.
//!
//! Forms are linear combinations of strictly increasing generator words with
//! the ordering φ_1 < … < φ_n < φ̄_1 < … < φ̄_n; coefficients live in a
//! BTreeMap so iteration, and hence accumulation, is deterministic.

use crate::algebra::HermitianLieAlgebra;
use crate::tensor::C64;
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Gen {
    bar: bool,
    idx: usize,
}

#[derive(Clone, Debug, Default)]
struct Form {
    terms: BTreeMap<Vec<Gen>, C64>,
}

impl Form {
    fn zero() -> Self {
        Form::default()
    }

    fn add_term(&mut self, word: Vec<Gen>, coeff: C64) {
        if coeff == C64::ZERO {
            return;
        }
        let (canon, sign) = match canonicalize(word) {
            Some(cs) => cs,
            None => return, // repeated generator
        };
        let entry = self.terms.entry(canon).or_insert(C64::ZERO);
        *entry += coeff * sign;
    }

    fn wedge_word(&mut self, prefix: &[Gen], mid: &Form, suffix: &[Gen], coeff: C64) {
        for (word, c) in &mid.terms {
            let mut w = Vec::with_capacity(prefix.len() + word.len() + suffix.len());
            w.extend_from_slice(prefix);
            w.extend_from_slice(word);
            w.extend_from_slice(suffix);
            self.add_term(w, coeff * c);
        }
    }

    fn max_abs(&self) -> f64 {
        self.terms.values().fold(0.0, |m, z| m.max(z.norm()))
    }
}

/// Sort a generator word, returning the sorted word and the permutation sign;
/// `None` when a generator repeats (the wedge vanishes).
fn canonicalize(mut word: Vec<Gen>) -> Option<(Vec<Gen>, f64)> {
    let mut sign = 1.0;
    // insertion sort, counting transpositions
    for i in 1..word.len() {
        let mut j = i;
        while j > 0 && word[j - 1] > word[j] {
            word.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    for pair in word.windows(2) {
        if pair[0] == pair[1] {
            return None;
        }
    }
    Some((word, sign))
}

/// Structure equation: `dφ_i = −½ Σ C^i_{jk} φ_j∧φ_k − Σ conj(D^j_{ik}) φ_j∧φ̄_k`
/// and its conjugate for `dφ̄_i`.
fn d_generator(alg: &HermitianLieAlgebra, g: Gen) -> Form {
    let n = alg.n();
    let mut out = Form::zero();
    if !g.bar {
        let i = g.idx;
        for j in 0..n {
            for k in 0..n {
                out.add_term(
                    vec![Gen { bar: false, idx: j }, Gen { bar: false, idx: k }],
                    alg.c().get(i, j, k) * -0.5,
                );
                out.add_term(
                    vec![Gen { bar: false, idx: j }, Gen { bar: true, idx: k }],
                    -alg.d().get(j, i, k).conj(),
                );
            }
        }
    } else {
        let i = g.idx;
        for j in 0..n {
            for k in 0..n {
                out.add_term(
                    vec![Gen { bar: true, idx: j }, Gen { bar: true, idx: k }],
                    alg.c().get(i, j, k).conj() * -0.5,
                );
                // conj(φ_j ∧ φ̄_k) = φ̄_j ∧ φ_k
                out.add_term(
                    vec![Gen { bar: true, idx: j }, Gen { bar: false, idx: k }],
                    -alg.d().get(j, i, k),
                );
            }
        }
    }
    out
}

/// Exterior derivative by the graded Leibniz rule on each generator word.
fn d_form(alg: &HermitianLieAlgebra, f: &Form) -> Form {
    let mut out = Form::zero();
    for (word, coeff) in &f.terms {
        for pos in 0..word.len() {
            let dg = d_generator(alg, word[pos]);
            let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
            out.wedge_word(&word[..pos], &dg, &word[pos + 1..], coeff * sign);
        }
    }
    out
}

/// Max 3-form coefficient of `d(dφ_i)` over all `i`.
pub fn d2_residual(alg: &HermitianLieAlgebra) -> f64 {
    let n = alg.n();
    let mut worst = 0.0f64;
    for i in 0..n {
        let dphi = d_generator(alg, Gen { bar: false, idx: i });
        let d2 = d_form(alg, &dphi);
        worst = worst.max(d2.max_abs());
    }
    worst
}
