//! Corpus-level BLEU with a fixed tokenization, reported beside tense
//! accuracy.

use std::collections::HashMap;

use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 4;

/// Lowercase, split on whitespace, and make every punctuation character a
/// token of its own.
pub fn bleu_tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut word = String::new();
    for c in text.chars() {
        if c.is_alphanumeric() {
            word.extend(c.to_lowercase());
            continue;
        }
        if !word.is_empty() {
            out.push(std::mem::take(&mut word));
        }
        if !c.is_whitespace() {
            out.push(c.to_string());
        }
    }
    if !word.is_empty() {
        out.push(word);
    }
    out
}

fn ngrams(tokens: &[String], n: usize) -> HashMap<&[String], usize> {
    let mut m = HashMap::new();
    if tokens.len() >= n {
        for w in tokens.windows(n) {
            *m.entry(w).or_insert(0) += 1;
        }
    }
    m
}

/// Clipped n-gram matches and hypothesis n-gram totals per order, with
/// hypothesis and reference lengths.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BleuStats {
    pub matches: [usize; MAX_ORDER],
    pub totals: [usize; MAX_ORDER],
    pub hyp_len: usize,
    pub ref_len: usize,
}

impl BleuStats {
    pub fn add_sentence(&mut self, reference: &str, hypothesis: &str) {
        let r = bleu_tokenize(reference);
        let h = bleu_tokenize(hypothesis);
        self.ref_len += r.len();
        self.hyp_len += h.len();
        for n in 1..=MAX_ORDER {
            let rc = ngrams(&r, n);
            let hc = ngrams(&h, n);
            self.totals[n - 1] += h.len().saturating_sub(n - 1);
            self.matches[n - 1] += hc.iter().map(|(g, &c)| c.min(rc.get(g).copied().unwrap_or(0))).sum::<usize>();
        }
    }

    /// Score in `[0, 100]`. Orders without any match use add-one smoothing
    /// `(m + 1) / (t + 1)`.
    pub fn score(&self) -> f64 {
        if self.hyp_len == 0 {
            return 0.0;
        }
        let mut log_sum = 0.0;
        for n in 0..MAX_ORDER {
            let (m, t) = (self.matches[n] as f64, self.totals[n] as f64);
            let p = if self.matches[n] == 0 { (m + 1.0) / (t + 1.0) } else { m / t };
            log_sum += p.ln();
        }
        let bp =
            if self.hyp_len >= self.ref_len { 1.0 } else { (1.0 - self.ref_len as f64 / self.hyp_len as f64).exp() };
        100.0 * bp * (log_sum / MAX_ORDER as f64).exp()
    }
}

/// Corpus BLEU of line-aligned hypotheses against single references.
pub fn corpus_bleu<R: AsRef<str>, H: AsRef<str>>(refs: &[R], hyps: &[H]) -> Result<f64> {
    if refs.len() != hyps.len() {
        return Err(Error::LengthMismatch { what: "hypotheses".into(), left: hyps.len(), right: refs.len() });
    }
    if refs.is_empty() {
        return Err(Error::EmptyInput("no sentences to score".into()));
    }
    let mut stats = BleuStats::default();
    for (r, h) in refs.iter().zip(hyps) {
        stats.add_sentence(r.as_ref(), h.as_ref());
    }
    Ok(stats.score())
}
