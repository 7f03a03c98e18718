//! French tense detection, the French-to-English category mapping, and
//! checks built on it.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexicon::{FrAuxTense, FrEndingKind, FrPronounKind, Lexicon, MotionLemma};
use crate::tense_en::{Labeler, SentenceLabel, TenseCategory};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum FrenchTense {
    Present,
    Imparfait,
    PasseCompose,
    PasseSimple,
    PasseRecent,
    FuturSimple,
    FuturProche,
    PlusQueParfait,
    FuturAnterieur,
    Conditionnel,
    Subjonctif,
}

impl FrenchTense {
    pub const ALL: [FrenchTense; 11] = [
        FrenchTense::Present,
        FrenchTense::Imparfait,
        FrenchTense::PasseCompose,
        FrenchTense::PasseSimple,
        FrenchTense::PasseRecent,
        FrenchTense::FuturSimple,
        FrenchTense::FuturProche,
        FrenchTense::PlusQueParfait,
        FrenchTense::FuturAnterieur,
        FrenchTense::Conditionnel,
        FrenchTense::Subjonctif,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FrenchTense::Present => "Présent",
            FrenchTense::Imparfait => "Imparfait",
            FrenchTense::PasseCompose => "PasséComposé",
            FrenchTense::PasseSimple => "PasséSimple",
            FrenchTense::PasseRecent => "PasséRécent",
            FrenchTense::FuturSimple => "FuturSimple",
            FrenchTense::FuturProche => "FuturProche",
            FrenchTense::PlusQueParfait => "PlusQueParfait",
            FrenchTense::FuturAnterieur => "FuturAntérieur",
            FrenchTense::Conditionnel => "Conditionnel",
            FrenchTense::Subjonctif => "Subjonctif",
        }
    }

    pub fn valid_names() -> String {
        FrenchTense::ALL.iter().map(|t| t.as_str()).collect::<Vec<_>>().join(", ")
    }
}

impl fmt::Display for FrenchTense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn fold_accents(s: &str) -> String {
    s.chars()
        .filter(|c| c.is_alphanumeric())
        .map(|c| match c {
            'é' | 'è' | 'ê' | 'ë' | 'É' | 'È' | 'Ê' => 'e',
            'à' | 'â' | 'À' | 'Â' => 'a',
            'î' | 'ï' => 'i',
            'ô' => 'o',
            'û' | 'ù' | 'ü' => 'u',
            'ç' => 'c',
            c => c,
        })
        .collect::<String>()
        .to_lowercase()
}

impl FromStr for FrenchTense {
    type Err = Error;

    /// Accent-, case- and separator-insensitive: "plus-que-parfait",
    /// "PlusQueParfait" and "passe compose" are all accepted.
    fn from_str(s: &str) -> Result<Self> {
        let t = match fold_accents(s).as_str() {
            "present" => FrenchTense::Present,
            "imparfait" => FrenchTense::Imparfait,
            "passecompose" => FrenchTense::PasseCompose,
            "passesimple" => FrenchTense::PasseSimple,
            "passerecent" => FrenchTense::PasseRecent,
            "futursimple" | "futuresimple" => FrenchTense::FuturSimple,
            "futurproche" | "futureproche" => FrenchTense::FuturProche,
            "plusqueparfait" => FrenchTense::PlusQueParfait,
            "futuranterieur" | "futureanterieur" => FrenchTense::FuturAnterieur,
            "conditionnel" => FrenchTense::Conditionnel,
            "subjonctif" => FrenchTense::Subjonctif,
            _ => return Err(Error::UnknownFrenchTense { name: s.to_string(), valid: FrenchTense::valid_names() }),
        };
        Ok(t)
    }
}

impl From<FrenchTense> for String {
    fn from(t: FrenchTense) -> String {
        t.as_str().to_string()
    }
}

impl TryFrom<String> for FrenchTense {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// English categories that can render a French tense.
pub fn admissible_english(fr: FrenchTense) -> &'static [TenseCategory] {
    use FrenchTense::*;
    use TenseCategory as T;
    match fr {
        Imparfait | PasseSimple | PasseRecent => &[T::Past],
        PasseCompose => &[T::Past, T::PrePerfect],
        Present => &[T::Present],
        FuturProche => &[T::Present, T::Future],
        FuturSimple => &[T::Future],
        PlusQueParfait => &[T::PasPerfect],
        FuturAnterieur => &[T::FutPerfect],
        Subjonctif | Conditionnel => &[T::Modal],
    }
}

/// A lowercased French token. `inverted` marks a subject pronoun attached
/// by hyphen to the preceding verb (`passera-t-il`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrToken {
    pub text: String,
    pub inverted: bool,
}

const ELISIONS: [&str; 13] = ["l", "d", "j", "qu", "c", "n", "s", "m", "t", "puisqu", "lorsqu", "jusqu", "quoiqu"];
const INVERSION_PARTS: [&str; 12] = ["t", "je", "tu", "il", "elle", "on", "nous", "vous", "ils", "elles", "ce", "y"];

/// Tokenize French text: apostrophe spacing is normalized ("qu 'il" and
/// "l' année" become "qu'il", "l'année"), elided articles and pronouns are
/// split off, and inverted subject pronouns are detached from their verb.
pub fn tokenize_fr(text: &str) -> Vec<FrToken> {
    let text = text.replace(['\u{2019}', '`'], "'");
    let chars: Vec<char> = text.chars().collect();
    let mut joined = String::with_capacity(text.len());
    for (i, &c) in chars.iter().enumerate() {
        if c.is_whitespace() {
            let prev = i.checked_sub(1).map(|p| chars[p]);
            let next = chars.get(i + 1).copied();
            let before_apostrophe = next == Some('\'') && prev.is_some_and(char::is_alphabetic);
            let after_elision =
                prev == Some('\'') && i >= 2 && chars[i - 2].is_alphabetic() && next.is_some_and(char::is_alphabetic);
            if before_apostrophe || after_elision {
                continue;
            }
        }
        joined.push(c);
    }

    let mut out = Vec::new();
    for chunk in joined.split_whitespace() {
        let mut word = String::new();
        let flush = |word: &mut String, out: &mut Vec<FrToken>| {
            if !word.is_empty() {
                push_word(&word.to_lowercase(), out);
                word.clear();
            }
        };
        let cs: Vec<char> = chunk.chars().collect();
        for (i, &c) in cs.iter().enumerate() {
            let inner = i > 0 && i + 1 < cs.len() && cs[i - 1].is_alphanumeric();
            if c.is_alphanumeric() || (c == '-' && inner && cs[i + 1].is_alphanumeric()) {
                word.push(c);
            } else if c == '\'' && i > 0 && cs[i - 1].is_alphabetic() {
                word.push(c);
                // elision splits here; other apostrophes (aujourd'hui) stay
                let lw = word.to_lowercase();
                if ELISIONS.contains(&lw.trim_end_matches('\'')) {
                    out.push(FrToken { text: lw, inverted: false });
                    word.clear();
                }
            } else {
                flush(&mut word, &mut out);
                out.push(FrToken { text: c.to_string(), inverted: false });
            }
        }
        flush(&mut word, &mut out);
    }
    out
}

fn push_word(word: &str, out: &mut Vec<FrToken>) {
    let parts: Vec<&str> = word.split('-').collect();
    if parts.len() > 1 && parts[1..].iter().all(|p| INVERSION_PARTS.contains(p)) {
        out.push(FrToken { text: parts[0].to_string(), inverted: false });
        for p in &parts[1..] {
            out.push(FrToken { text: p.to_string(), inverted: true });
        }
    } else {
        out.push(FrToken { text: word.to_string(), inverted: false });
    }
}

/// One detected French tense structure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrenchDetection {
    pub tense: FrenchTense,
    /// Token positions of the structure within [`tokenize_fr`] output.
    pub tokens: Vec<usize>,
}

const MAX_SKIP: usize = 3;
const QUE_WINDOW: usize = 4;

struct Detector<'a> {
    lex: &'a Lexicon,
    toks: Vec<FrToken>,
    used: Vec<bool>,
}

impl Detector<'_> {
    fn w(&self, i: usize) -> &str {
        &self.toks[i].text
    }

    fn is_clitic(&self, i: usize) -> bool {
        self.lex.fr_pronoun(self.w(i)).contains(&FrPronounKind::Clitic)
    }

    fn is_subject(&self, i: usize) -> bool {
        self.lex.fr_pronoun(self.w(i)).contains(&FrPronounKind::Subject)
    }

    fn skippable(&self, i: usize) -> bool {
        self.lex.is_fr_interrupter(self.w(i)) || self.toks[i].inverted || self.w(i) == "pas"
    }

    /// First position at or after `j` that is not an adverb, negator or
    /// inverted pronoun, looking at most `MAX_SKIP` tokens ahead.
    fn skip_from(&self, j: usize) -> Option<usize> {
        (j..self.toks.len()).take(MAX_SKIP + 1).find(|&k| !self.skippable(k))
    }

    /// Preceded by a subject pronoun (clitics in between), or followed by
    /// an inverted one.
    fn finite_context(&self, i: usize) -> bool {
        if self.toks.get(i + 1).is_some_and(|t| t.inverted) {
            return true;
        }
        let mut j = i;
        while j > 0 {
            j -= 1;
            if self.is_subject(j) {
                return true;
            }
            if !(self.is_clitic(j) || self.w(j) == "ne" || self.w(j) == "n'") {
                return false;
            }
        }
        false
    }

    fn que_before(&self, i: usize) -> bool {
        (i.saturating_sub(QUE_WINDOW)..i).any(|j| matches!(self.w(j), "que" | "qu'"))
    }

    fn is_participle(&self, i: usize) -> bool {
        let w = self.w(i);
        if self.lex.is_fr_stop(w) || self.lex.is_fr_function(w) {
            return false;
        }
        self.lex.is_fr_participle(w)
            || self.lex.fr_endings_matching(w).iter().any(|&(_, k)| k == FrEndingKind::Participle)
    }

    fn is_infinitive(&self, i: usize) -> bool {
        let w = self.w(i);
        let n = w.chars().count();
        n >= 4
            && !self.lex.is_fr_stop(w)
            && !self.lex.is_fr_function(w)
            && (w.ends_with("er") || w.ends_with("ir") || w.ends_with("re") || w.ends_with("oir"))
    }

    fn is_word(&self, i: usize) -> bool {
        self.w(i).chars().next().is_some_and(char::is_alphabetic)
    }

    fn detect(&mut self) -> Vec<FrenchDetection> {
        let mut out = Vec::new();
        for i in 0..self.toks.len() {
            if self.used[i] || !self.is_word(i) || self.toks[i].inverted {
                continue;
            }
            let w = self.w(i).to_string();
            if !self.lex.fr_pronoun(&w).is_empty() || self.lex.is_fr_function(&w) || self.lex.is_fr_interrupter(&w) {
                // "nous"/"vous" double as subjects and clitics; never verbs
                continue;
            }
            if let Some(d) = self.detect_at(i, &w) {
                for &k in &d.tokens {
                    self.used[k] = true;
                }
                out.push(d);
            }
        }
        out
    }

    fn detect_at(&self, i: usize, w: &str) -> Option<FrenchDetection> {
        let one = |tense| Some(FrenchDetection { tense, tokens: vec![i] });

        if let Some(&(_, aux_tense)) = self.lex.fr_aux(w).first() {
            let subjunctive = aux_tense == FrAuxTense::Subjonctif;
            if subjunctive && !self.que_before(i) {
                return None;
            }
            let mut tokens = vec![i];
            let mut j = i + 1;
            while let Some(k) = self.skip_from(j) {
                if !self.is_participle(k) {
                    break;
                }
                tokens.push(k);
                j = k + 1;
            }
            let tense = if tokens.len() > 1 {
                match aux_tense {
                    FrAuxTense::Present => FrenchTense::PasseCompose,
                    FrAuxTense::Imparfait | FrAuxTense::PasseSimple => FrenchTense::PlusQueParfait,
                    FrAuxTense::Futur => FrenchTense::FuturAnterieur,
                    FrAuxTense::Conditionnel => FrenchTense::Conditionnel,
                    FrAuxTense::Subjonctif => FrenchTense::Subjonctif,
                }
            } else {
                match aux_tense {
                    FrAuxTense::Present => FrenchTense::Present,
                    FrAuxTense::Imparfait => FrenchTense::Imparfait,
                    FrAuxTense::Futur => FrenchTense::FuturSimple,
                    FrAuxTense::Conditionnel => FrenchTense::Conditionnel,
                    FrAuxTense::PasseSimple => FrenchTense::PasseSimple,
                    FrAuxTense::Subjonctif => FrenchTense::Subjonctif,
                }
            };
            return Some(FrenchDetection { tense, tokens });
        }

        if let Some(motion) = self.lex.fr_motion(w) {
            let mut j = self.skip_from(i + 1);
            let periphrastic = match motion {
                MotionLemma::Aller => FrenchTense::FuturProche,
                MotionLemma::Venir => FrenchTense::PasseRecent,
            };
            if motion == MotionLemma::Venir {
                j = j.filter(|&k| matches!(self.w(k), "de" | "d'")).map(|k| k + 1);
            }
            // clitic objects may sit before the infinitive: "va le faire"
            let mut k = j;
            for _ in 0..2 {
                match k {
                    Some(x) if x < self.toks.len() && self.is_clitic(x) => k = Some(x + 1),
                    _ => break,
                }
            }
            if let Some(x) = k.filter(|&x| x < self.toks.len() && self.is_infinitive(x)) {
                let mut tokens: Vec<usize> = vec![i];
                if motion == MotionLemma::Venir {
                    tokens.push(j.unwrap() - 1);
                }
                tokens.push(x);
                return Some(FrenchDetection { tense: periphrastic, tokens });
            }
            return one(FrenchTense::Present);
        }

        if self.lex.is_fr_subjunctive(w) && self.que_before(i) {
            return one(FrenchTense::Subjonctif);
        }
        if self.lex.is_fr_passe_simple(w) {
            return one(FrenchTense::PasseSimple);
        }
        if self.lex.is_fr_present(w) {
            return one(FrenchTense::Present);
        }
        if self.lex.is_fr_stop(w) {
            return None;
        }

        let context = self.finite_context(i);
        let len = w.chars().count();
        for (ending, kind) in self.lex.fr_endings_matching(w) {
            match kind {
                FrEndingKind::Futur | FrEndingKind::Conditionnel => {
                    // keep the r of the ending: citerai -> citer
                    let keep = w.len() - ending.len() + 1;
                    let stem = &w[..keep];
                    if future_stem(stem) && (context || stem.chars().count() >= 5) {
                        let tense = if kind == FrEndingKind::Futur {
                            FrenchTense::FuturSimple
                        } else {
                            FrenchTense::Conditionnel
                        };
                        return one(tense);
                    }
                }
                FrEndingKind::Imparfait => {
                    if context || ending == "aient" && len >= 7 {
                        return one(FrenchTense::Imparfait);
                    }
                }
                FrEndingKind::PasseSimple => match ending {
                    "èrent" | "irent" | "urent" => return one(FrenchTense::PasseSimple),
                    "a" if context => return one(FrenchTense::PasseSimple),
                    "it" if context => return one(FrenchTense::Present),
                    _ => {}
                },
                FrEndingKind::Participle => {}
            }
        }
        if context {
            return one(FrenchTense::Present);
        }
        None
    }
}

/// Infinitive-like stem a future or conditional ending attaches to.
fn future_stem(stem: &str) -> bool {
    const STEMS: [&str; 6] = ["er", "ir", "rr", "dr", "vr", "ttr"];
    let accented_e = stem.ends_with("ér") || stem.ends_with("èr");
    !accented_e && STEMS.iter().any(|s| stem.ends_with(s))
}

/// Detect French tense structures with their token positions.
pub fn detect_fr(text: &str, lexicon: &Lexicon) -> Vec<FrenchDetection> {
    let toks = tokenize_fr(text);
    let used = vec![false; toks.len()];
    Detector { lex: lexicon, toks, used }.detect()
}

/// French tense structures of a sentence, in textual order.
pub fn label_sentence_fr(text: &str) -> Vec<FrenchTense> {
    label_sentence_fr_with(text, Lexicon::builtin())
}

pub fn label_sentence_fr_with(text: &str, lexicon: &Lexicon) -> Vec<FrenchTense> {
    detect_fr(text, lexicon).into_iter().map(|d| d.tense).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Consistent,
    Inconsistent,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Consistent => "consistent",
            Verdict::Inconsistent => "inconsistent",
            Verdict::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TenseCheck {
    pub french: FrenchTense,
    pub admissible: Vec<TenseCategory>,
    /// English structure (position in the label) matched to this tense.
    pub matched: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConsistencyVerdict {
    pub verdict: Verdict,
    pub detail: Vec<TenseCheck>,
    pub uncovered: Vec<FrenchTense>,
}

/// Check that every French tense finds its own admissible English
/// structure. Each English structure covers at most one French tense; the
/// assignment is a maximum bipartite matching.
pub fn consistency_check(fr_text: &str, en_label: &SentenceLabel) -> ConsistencyVerdict {
    consistency_check_tenses(&label_sentence_fr(fr_text), en_label)
}

pub fn consistency_check_tenses(french: &[FrenchTense], en_label: &SentenceLabel) -> ConsistencyVerdict {
    if french.is_empty() {
        return ConsistencyVerdict { verdict: Verdict::Unknown, detail: Vec::new(), uncovered: Vec::new() };
    }
    let en = en_label.categories();
    let edges: Vec<Vec<usize>> =
        french.iter().map(|&f| (0..en.len()).filter(|&k| admissible_english(f).contains(&en[k])).collect()).collect();
    let matching = max_matching(&edges, en.len());
    let detail: Vec<TenseCheck> = french
        .iter()
        .enumerate()
        .map(|(i, &f)| TenseCheck { french: f, admissible: admissible_english(f).to_vec(), matched: matching[i] })
        .collect();
    let uncovered: Vec<FrenchTense> = detail.iter().filter(|c| c.matched.is_none()).map(|c| c.french).collect();
    let verdict = if uncovered.is_empty() { Verdict::Consistent } else { Verdict::Inconsistent };
    ConsistencyVerdict { verdict, detail, uncovered }
}

/// Kuhn's augmenting-path matching. Returns, for each left vertex, its
/// matched right vertex.
fn max_matching(edges: &[Vec<usize>], right: usize) -> Vec<Option<usize>> {
    fn augment(u: usize, edges: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &v in &edges[u] {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if owner[v].is_none_or(|w| augment(w, edges, seen, owner)) {
                owner[v] = Some(u);
                return true;
            }
        }
        false
    }
    let mut owner: Vec<Option<usize>> = vec![None; right];
    for u in 0..edges.len() {
        let mut seen = vec![false; right];
        augment(u, edges, &mut seen, &mut owner);
    }
    let mut left = vec![None; edges.len()];
    for (v, o) in owner.iter().enumerate() {
        if let Some(u) = o {
            left[*u] = Some(v);
        }
    }
    left
}

/// English renderings of one French tense across a parallel corpus.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TenseSurvey {
    pub target: FrenchTense,
    /// Occurrences of `target` on the French side.
    pub occurrences: usize,
    /// Occurrences whose English side has no tense structure.
    pub unmatched: usize,
    /// Weighted counts per category; an occurrence contributes total
    /// weight 1.
    pub counts: BTreeMap<TenseCategory, f64>,
    pub proportions: BTreeMap<TenseCategory, f64>,
}

impl TenseSurvey {
    /// Occurrences that were attributed to English categories.
    pub fn recorded(&self) -> usize {
        self.occurrences - self.unmatched
    }
}

/// Survey how `target` is rendered in English. Occurrences align with
/// English structures by position when both sides have the same number of
/// structures; otherwise each occurrence is spread evenly over the whole
/// English label.
pub fn tense_survey(pairs: &[(String, String)], target: FrenchTense, labeler: &Labeler<'_>) -> TenseSurvey {
    let mut counts: BTreeMap<TenseCategory, f64> = BTreeMap::new();
    let mut occurrences = 0;
    let mut unmatched = 0;
    for (fr, en) in pairs {
        let french = label_sentence_fr_with(fr, labeler.lexicon);
        if !french.contains(&target) {
            continue;
        }
        let label = labeler.label(en);
        let en = label.categories();
        for (pos, _) in french.iter().enumerate().filter(|(_, &t)| t == target) {
            occurrences += 1;
            if en.is_empty() {
                unmatched += 1;
            } else if en.len() == french.len() {
                *counts.entry(en[pos]).or_default() += 1.0;
            } else {
                let w = 1.0 / en.len() as f64;
                for &c in en {
                    *counts.entry(c).or_default() += w;
                }
            }
        }
    }
    let total: f64 = counts.values().sum();
    let proportions = counts.iter().map(|(&c, &n)| (c, n / total)).collect();
    TenseSurvey { target, occurrences, unmatched, counts, proportions }
}
