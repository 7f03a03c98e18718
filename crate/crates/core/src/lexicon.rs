//! Closed-class and morphological tables consulted by the annotators.
//!
//! The tables live in plain tab-separated files, one entry per line:
//!
//! ```text
//! surface<TAB>table<TAB>features
//! ```
//!
//! `features` is either `-` or a `;`-separated list of `key=value` pairs.
//! Lines starting with `#` are comments; a `#@version <name>` directive
//! names the lexicon version that run metadata reports. The built-in tables
//! are compiled into the binary; [`Lexicon::load_dir`] reads a replacement
//! set from disk.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::path::Path;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};

const BUILTIN_ENGLISH: &str = include_str!("../data/english.tsv");
const BUILTIN_FRENCH: &str = include_str!("../data/french.tsv");

/// Number of entries the English modal table must hold.
pub const MODAL_COUNT: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AuxLemma {
    Be,
    Have,
    Do,
}

impl AuxLemma {
    pub fn as_str(self) -> &'static str {
        match self {
            AuxLemma::Be => "be",
            AuxLemma::Have => "have",
            AuxLemma::Do => "do",
        }
    }
}

/// Inflectional slot of an English verb form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerbForm {
    Base,
    Present,
    Past,
    PastParticiple,
    PresentParticiple,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InterrupterKind {
    Negation,
    Adverb,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PronounKind {
    Subject,
    Object,
    Demonstrative,
    Wh,
    Existential,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FunctionKind {
    Det,
    Prep,
    Conj,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum FrAuxLemma {
    Avoir,
    Etre,
}

/// Tense of a finite French avoir/être form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum FrAuxTense {
    Present,
    Imparfait,
    Futur,
    Conditionnel,
    PasseSimple,
    Subjonctif,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum MotionLemma {
    Aller,
    Venir,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum FrPronounKind {
    Subject,
    Clitic,
}

/// What a French inflectional ending signals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum FrEndingKind {
    Imparfait,
    Futur,
    Conditionnel,
    PasseSimple,
    Participle,
}

/// One reading of a surface form found in a lexicon table.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum MorphAnalysis {
    Aux {
        lemma: AuxLemma,
        form: VerbForm,
    },
    Modal,
    FutureAux,
    /// Form of an irregular verb; `ambiguous` marks verbs whose past and
    /// past participle coincide.
    Irregular {
        lemma: String,
        form: VerbForm,
        ambiguous: bool,
    },
    VerbBase,
    Interrupter(InterrupterKind),
    Pronoun(PronounKind),
    Function(FunctionKind),
    Formula,
    /// Listed as never verbal; suffix rules do not apply.
    NonVerb,
    FrAux {
        lemma: FrAuxLemma,
        tense: FrAuxTense,
    },
    FrMotion(MotionLemma),
    FrParticiple,
    FrSubjunctive,
    FrPasseSimple,
    FrPresent,
    FrPronoun(FrPronounKind),
    FrInterrupter,
    FrStop,
    FrFunction,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrregularVerb {
    pub base: String,
    pub past: String,
    pub participle: String,
}

impl IrregularVerb {
    pub fn is_ambiguous(&self) -> bool {
        self.past == self.participle
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Language {
    En,
    Fr,
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Language::En => "en",
            Language::Fr => "fr",
        })
    }
}

impl std::str::FromStr for Language {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "en" | "english" => Ok(Language::En),
            "fr" | "french" => Ok(Language::Fr),
            other => Err(Error::Config(format!("unknown language `{other}` (expected en or fr)"))),
        }
    }
}

/// Candidate reading produced by suffix rules.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum SuffixAnalysis {
    /// English `-ed` / `-ing` / `-s` form. `known` is set when the guessed
    /// lemma is a listed verb.
    En { form: VerbForm, lemma: String, known: bool },
    /// French ending match.
    Fr { kind: FrEndingKind, ending: String },
}

/// The loaded lexicon. Immutable once built.
#[derive(Debug, Default)]
pub struct Lexicon {
    version: String,
    en_aux: HashMap<String, Vec<(AuxLemma, VerbForm)>>,
    en_modals: BTreeSet<String>,
    en_future: BTreeSet<String>,
    en_irregulars: Vec<IrregularVerb>,
    irregular_index: HashMap<String, Vec<MorphAnalysis>>,
    en_verb_bases: HashSet<String>,
    en_interrupters: HashMap<String, InterrupterKind>,
    en_pronouns: HashMap<String, Vec<PronounKind>>,
    en_function: HashMap<String, FunctionKind>,
    en_formula: HashSet<String>,
    en_nonverb: HashSet<String>,
    fr_aux: HashMap<String, Vec<(FrAuxLemma, FrAuxTense)>>,
    fr_motion: HashMap<String, MotionLemma>,
    /// Sorted longest ending first.
    fr_endings: Vec<(String, FrEndingKind)>,
    fr_participles: HashSet<String>,
    fr_subjunctive: HashSet<String>,
    fr_passe_simple: HashSet<String>,
    fr_present: HashSet<String>,
    fr_pronouns: HashMap<String, Vec<FrPronounKind>>,
    fr_interrupters: HashSet<String>,
    fr_stop: HashSet<String>,
    fr_function: HashSet<String>,
}

impl Lexicon {
    /// Built-in lexicon, parsed once per process.
    pub fn builtin() -> &'static Lexicon {
        static BUILTIN: OnceLock<Lexicon> = OnceLock::new();
        BUILTIN.get_or_init(|| {
            Lexicon::from_sources(&[("english.tsv", BUILTIN_ENGLISH), ("french.tsv", BUILTIN_FRENCH)])
                .expect("built-in lexicon data is well-formed")
        })
    }

    /// Load every `*.tsv` file of `dir`, in file-name order.
    pub fn load_dir(dir: impl AsRef<Path>) -> Result<Lexicon> {
        let dir = dir.as_ref();
        let mut paths: Vec<_> = std::fs::read_dir(dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "tsv"))
            .collect();
        paths.sort();
        if paths.is_empty() {
            return Err(Error::Lexicon(format!("no .tsv files in {}", dir.display())));
        }
        let mut sources = Vec::with_capacity(paths.len());
        for p in &paths {
            let bytes = std::fs::read(p)?;
            let text = String::from_utf8(bytes).map_err(|_| Error::Decode { path: p.display().to_string() })?;
            sources.push((p.display().to_string(), text));
        }
        let borrowed: Vec<(&str, &str)> = sources.iter().map(|(n, t)| (n.as_str(), t.as_str())).collect();
        Lexicon::from_sources(&borrowed)
    }

    /// Parse named sources. Each `(name, text)` pair is one file.
    pub fn from_sources(sources: &[(&str, &str)]) -> Result<Lexicon> {
        let mut lex = Lexicon::default();
        let mut versions = Vec::new();
        for (name, text) in sources {
            for (i, raw) in text.lines().enumerate() {
                let line_no = i + 1;
                let line = raw.trim_end_matches('\r');
                if let Some(v) = line.strip_prefix("#@version") {
                    versions.push(v.trim().to_string());
                    continue;
                }
                if line.trim().is_empty() || line.starts_with('#') {
                    continue;
                }
                lex.add_line(line).map_err(|message| Error::Format {
                    path: name.to_string(),
                    line: line_no,
                    message,
                })?;
            }
        }
        lex.version = if versions.is_empty() { "unversioned".to_string() } else { versions.join("+") };
        lex.finish()?;
        Ok(lex)
    }

    fn add_line(&mut self, line: &str) -> std::result::Result<(), String> {
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 3 {
            return Err(format!("expected 3 tab-separated columns, found {}", cols.len()));
        }
        let surface = cols[0].trim();
        if surface.is_empty() {
            return Err("empty surface form".into());
        }
        let surface = surface.to_lowercase();
        let feats = parse_features(cols[2])?;
        let get = |key: &str| -> std::result::Result<&str, String> {
            feats.get(key).map(String::as_str).ok_or_else(|| format!("missing feature `{key}`"))
        };
        match cols[1] {
            "aux" => {
                let lemma = match get("lemma")? {
                    "be" => AuxLemma::Be,
                    "have" => AuxLemma::Have,
                    "do" => AuxLemma::Do,
                    other => return Err(format!("unknown auxiliary lemma `{other}`")),
                };
                let form = match get("form")? {
                    "base" => VerbForm::Base,
                    "present" => VerbForm::Present,
                    "past" => VerbForm::Past,
                    "pastpart" => VerbForm::PastParticiple,
                    "prespart" => VerbForm::PresentParticiple,
                    other => return Err(format!("unknown verb form `{other}`")),
                };
                self.en_aux.entry(surface).or_default().push((lemma, form));
            }
            "modal" => {
                self.en_modals.insert(surface);
            }
            "future" => {
                self.en_future.insert(surface);
            }
            "irregular" => {
                let past = get("past")?.to_lowercase();
                let participle = get("pp")?.to_lowercase();
                if past.is_empty() || participle.is_empty() {
                    return Err("irregular verb with empty past or participle".into());
                }
                self.en_irregulars.push(IrregularVerb { base: surface, past, participle });
            }
            "verb" => {
                self.en_verb_bases.insert(surface);
            }
            "interrupter" => {
                let kind = match get("kind")? {
                    "negation" => InterrupterKind::Negation,
                    "adverb" => InterrupterKind::Adverb,
                    other => return Err(format!("unknown interrupter kind `{other}`")),
                };
                self.en_interrupters.insert(surface, kind);
            }
            "pronoun" => {
                let kind = match get("kind")? {
                    "subject" => PronounKind::Subject,
                    "object" => PronounKind::Object,
                    "demonstrative" => PronounKind::Demonstrative,
                    "wh" => PronounKind::Wh,
                    "existential" => PronounKind::Existential,
                    other => return Err(format!("unknown pronoun kind `{other}`")),
                };
                self.en_pronouns.entry(surface).or_default().push(kind);
            }
            "function" => {
                let kind = match get("kind")? {
                    "det" => FunctionKind::Det,
                    "prep" => FunctionKind::Prep,
                    "conj" => FunctionKind::Conj,
                    other => return Err(format!("unknown function-word kind `{other}`")),
                };
                self.en_function.insert(surface, kind);
            }
            "formula" => {
                self.en_formula.insert(surface);
            }
            "nonverb" => {
                self.en_nonverb.insert(surface);
            }
            "fr_aux" => {
                let lemma = match get("lemma")? {
                    "avoir" => FrAuxLemma::Avoir,
                    "être" | "etre" => FrAuxLemma::Etre,
                    other => return Err(format!("unknown French auxiliary `{other}`")),
                };
                let tense = match get("tense")? {
                    "present" => FrAuxTense::Present,
                    "imparfait" => FrAuxTense::Imparfait,
                    "futur" => FrAuxTense::Futur,
                    "conditionnel" => FrAuxTense::Conditionnel,
                    "passe-simple" => FrAuxTense::PasseSimple,
                    "subjonctif" => FrAuxTense::Subjonctif,
                    other => return Err(format!("unknown French tense `{other}`")),
                };
                self.fr_aux.entry(surface).or_default().push((lemma, tense));
            }
            "fr_motion" => {
                let lemma = match get("lemma")? {
                    "aller" => MotionLemma::Aller,
                    "venir" => MotionLemma::Venir,
                    other => return Err(format!("unknown motion verb `{other}`")),
                };
                self.fr_motion.insert(surface, lemma);
            }
            "fr_ending" => {
                let kind = match get("tense")? {
                    "imparfait" => FrEndingKind::Imparfait,
                    "futur" => FrEndingKind::Futur,
                    "conditionnel" => FrEndingKind::Conditionnel,
                    "passe-simple" => FrEndingKind::PasseSimple,
                    "participe" => FrEndingKind::Participle,
                    other => return Err(format!("unknown ending class `{other}`")),
                };
                self.fr_endings.push((surface, kind));
            }
            "fr_participle" => {
                self.fr_participles.insert(surface);
            }
            "fr_subjonctif" => {
                self.fr_subjunctive.insert(surface);
            }
            "fr_passe_simple" => {
                self.fr_passe_simple.insert(surface);
            }
            "fr_present" => {
                self.fr_present.insert(surface);
            }
            "fr_pronoun" => {
                let kind = match get("kind")? {
                    "subject" => FrPronounKind::Subject,
                    "clitic" => FrPronounKind::Clitic,
                    other => return Err(format!("unknown French pronoun kind `{other}`")),
                };
                self.fr_pronouns.entry(surface).or_default().push(kind);
            }
            "fr_interrupter" => {
                self.fr_interrupters.insert(surface);
            }
            "fr_stop" => {
                self.fr_stop.insert(surface);
            }
            "fr_function" => {
                self.fr_function.insert(surface);
            }
            other => return Err(format!("unknown table `{other}`")),
        }
        Ok(())
    }

    fn finish(&mut self) -> Result<()> {
        if self.en_modals.len() != MODAL_COUNT {
            return Err(Error::Lexicon(format!(
                "modal table must hold exactly {MODAL_COUNT} entries, found {}",
                self.en_modals.len()
            )));
        }
        if self.en_modals.contains("will") {
            return Err(Error::Lexicon("`will` is the future auxiliary and may not be listed as a modal".into()));
        }
        if let Some(m) = self.en_modals.iter().find(|m| self.en_aux.contains_key(*m) || self.en_future.contains(*m)) {
            return Err(Error::Lexicon(format!("modal `{m}` also appears in an auxiliary table")));
        }
        for v in &self.en_irregulars {
            let ambiguous = v.is_ambiguous();
            let mut push = |surface: &str, form: VerbForm| {
                let entry = self.irregular_index.entry(surface.to_string()).or_default();
                let a = MorphAnalysis::Irregular { lemma: v.base.clone(), form, ambiguous };
                if !entry.contains(&a) {
                    entry.push(a);
                }
            };
            push(&v.base, VerbForm::Base);
            push(&v.past, VerbForm::Past);
            push(&v.participle, VerbForm::PastParticiple);
        }
        self.fr_endings.sort_by(|a, b| b.0.chars().count().cmp(&a.0.chars().count()).then(a.0.cmp(&b.0)));
        Ok(())
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    /// Every analysis of `token` across all tables. Unknown tokens give an
    /// empty vector. Results are sorted and deduplicated.
    pub fn lookup(&self, token: &str) -> Vec<MorphAnalysis> {
        let mut out = BTreeSet::new();
        if let Some(v) = self.en_aux.get(token) {
            out.extend(v.iter().map(|&(lemma, form)| MorphAnalysis::Aux { lemma, form }));
        }
        if self.en_modals.contains(token) {
            out.insert(MorphAnalysis::Modal);
        }
        if self.en_future.contains(token) {
            out.insert(MorphAnalysis::FutureAux);
        }
        if let Some(v) = self.irregular_index.get(token) {
            out.extend(v.iter().cloned());
        }
        if self.en_verb_bases.contains(token) {
            out.insert(MorphAnalysis::VerbBase);
        }
        if let Some(&k) = self.en_interrupters.get(token) {
            out.insert(MorphAnalysis::Interrupter(k));
        }
        if let Some(v) = self.en_pronouns.get(token) {
            out.extend(v.iter().map(|&k| MorphAnalysis::Pronoun(k)));
        }
        if let Some(&k) = self.en_function.get(token) {
            out.insert(MorphAnalysis::Function(k));
        }
        if self.en_formula.contains(token) {
            out.insert(MorphAnalysis::Formula);
        }
        if self.en_nonverb.contains(token) {
            out.insert(MorphAnalysis::NonVerb);
        }
        if let Some(v) = self.fr_aux.get(token) {
            out.extend(v.iter().map(|&(lemma, tense)| MorphAnalysis::FrAux { lemma, tense }));
        }
        if let Some(&m) = self.fr_motion.get(token) {
            out.insert(MorphAnalysis::FrMotion(m));
        }
        if self.fr_participles.contains(token) {
            out.insert(MorphAnalysis::FrParticiple);
        }
        if self.fr_subjunctive.contains(token) {
            out.insert(MorphAnalysis::FrSubjunctive);
        }
        if self.fr_passe_simple.contains(token) {
            out.insert(MorphAnalysis::FrPasseSimple);
        }
        if self.fr_present.contains(token) {
            out.insert(MorphAnalysis::FrPresent);
        }
        if let Some(v) = self.fr_pronouns.get(token) {
            out.extend(v.iter().map(|&k| MorphAnalysis::FrPronoun(k)));
        }
        if self.fr_interrupters.contains(token) {
            out.insert(MorphAnalysis::FrInterrupter);
        }
        if self.fr_stop.contains(token) {
            out.insert(MorphAnalysis::FrStop);
        }
        if self.fr_function.contains(token) {
            out.insert(MorphAnalysis::FrFunction);
        }
        out.into_iter().collect()
    }

    /// Candidate readings from inflectional endings. Candidates only: the
    /// annotators decide which one applies in context.
    pub fn analyze_suffix(&self, token: &str, language: Language) -> Vec<SuffixAnalysis> {
        match language {
            Language::En => self.analyze_suffix_en(token),
            Language::Fr => self.analyze_suffix_fr(token),
        }
    }

    fn analyze_suffix_en(&self, token: &str) -> Vec<SuffixAnalysis> {
        let mut out = Vec::new();
        if self.en_nonverb.contains(token) || !token.chars().all(|c| c.is_ascii_alphabetic() || c == '-') {
            return out;
        }
        let mut push = |form: VerbForm, candidates: Vec<String>| {
            if let Some(lemma) = self.pick_lemma(&candidates) {
                out.push(SuffixAnalysis::En { form, lemma, known: true });
            } else if let Some(first) = candidates.into_iter().next() {
                out.push(SuffixAnalysis::En { form, lemma: first, known: false });
            }
        };
        if let Some(stem) = token.strip_suffix("ed").filter(|s| s.len() >= 2) {
            let cands = en_stem_candidates(stem, "ed");
            push(VerbForm::Past, cands.clone());
            push(VerbForm::PastParticiple, cands);
        } else if let Some(stem) = token.strip_suffix("ing").filter(|s| s.len() >= 2) {
            push(VerbForm::PresentParticiple, en_stem_candidates(stem, "ing"));
        } else if token.len() >= 4 && token.ends_with('s') && !token.ends_with("ss") && !token.ends_with("us") {
            let mut cands = Vec::new();
            if let Some(stem) = token.strip_suffix("ies") {
                cands.push(format!("{stem}y"));
            }
            if let Some(stem) = token.strip_suffix("es") {
                cands.push(stem.to_string());
            }
            cands.push(token[..token.len() - 1].to_string());
            push(VerbForm::Present, cands);
        }
        out
    }

    fn pick_lemma(&self, candidates: &[String]) -> Option<String> {
        candidates.iter().find(|c| self.is_verb_lemma(c)).cloned()
    }

    fn analyze_suffix_fr(&self, token: &str) -> Vec<SuffixAnalysis> {
        let len = token.chars().count();
        let mut best: Option<usize> = None;
        let mut out = Vec::new();
        for (ending, kind) in &self.fr_endings {
            let elen = ending.chars().count();
            if best.is_some_and(|b| elen < b) {
                break;
            }
            // the ending must leave a stem of at least two letters
            if len >= elen + 2 && token.ends_with(ending.as_str()) {
                best = Some(elen);
                out.push(SuffixAnalysis::Fr { kind: *kind, ending: ending.clone() });
            }
        }
        out
    }

    pub fn is_modal(&self, token: &str) -> bool {
        self.en_modals.contains(token)
    }

    pub fn modals(&self) -> impl Iterator<Item = &str> {
        self.en_modals.iter().map(String::as_str)
    }

    pub fn is_future_aux(&self, token: &str) -> bool {
        self.en_future.contains(token)
    }

    pub fn aux(&self, token: &str) -> &[(AuxLemma, VerbForm)] {
        self.en_aux.get(token).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn irregulars(&self) -> &[IrregularVerb] {
        &self.en_irregulars
    }

    /// Irregular-verb readings of `token`.
    pub fn irregular(&self, token: &str) -> &[MorphAnalysis] {
        self.irregular_index.get(token).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Listed regular lemma or base of an irregular verb.
    pub fn is_verb_lemma(&self, token: &str) -> bool {
        self.en_verb_bases.contains(token)
            || self.irregular(token).iter().any(|a| matches!(a, MorphAnalysis::Irregular { form: VerbForm::Base, .. }))
    }

    pub fn interrupter(&self, token: &str) -> Option<InterrupterKind> {
        if let Some(&k) = self.en_interrupters.get(token) {
            return Some(k);
        }
        if token.len() > 4
            && token.ends_with("ly")
            && token.chars().all(|c| c.is_alphabetic())
            && !self.is_verb_lemma(token)
        {
            return Some(InterrupterKind::Adverb);
        }
        None
    }

    pub fn pronoun(&self, token: &str) -> &[PronounKind] {
        self.en_pronouns.get(token).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn function_word(&self, token: &str) -> Option<FunctionKind> {
        self.en_function.get(token).copied()
    }

    pub fn is_formula(&self, token: &str) -> bool {
        self.en_formula.contains(token)
    }

    pub fn fr_aux(&self, token: &str) -> &[(FrAuxLemma, FrAuxTense)] {
        self.fr_aux.get(token).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn fr_motion(&self, token: &str) -> Option<MotionLemma> {
        self.fr_motion.get(token).copied()
    }

    pub fn is_fr_participle(&self, token: &str) -> bool {
        self.fr_participles.contains(token)
    }

    pub fn is_fr_subjunctive(&self, token: &str) -> bool {
        self.fr_subjunctive.contains(token)
    }

    pub fn is_fr_passe_simple(&self, token: &str) -> bool {
        self.fr_passe_simple.contains(token)
    }

    pub fn is_fr_present(&self, token: &str) -> bool {
        self.fr_present.contains(token)
    }

    pub fn fr_pronoun(&self, token: &str) -> &[FrPronounKind] {
        self.fr_pronouns.get(token).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn is_fr_interrupter(&self, token: &str) -> bool {
        self.fr_interrupters.contains(token)
    }

    pub fn is_fr_stop(&self, token: &str) -> bool {
        self.fr_stop.contains(token)
    }

    pub fn is_fr_function(&self, token: &str) -> bool {
        self.fr_function.contains(token)
    }

    /// Every French ending `token` carries, longest first. Unlike
    /// [`Lexicon::analyze_suffix`] shorter matches are kept so callers can
    /// fall back when a longer reading is rejected.
    pub fn fr_endings_matching(&self, token: &str) -> Vec<(&str, FrEndingKind)> {
        let len = token.chars().count();
        self.fr_endings
            .iter()
            .filter(|(e, _)| len >= e.chars().count() + 2 && token.ends_with(e.as_str()))
            .map(|(e, k)| (e.as_str(), *k))
            .collect()
    }

    /// Table sizes, for run metadata and coverage reports.
    pub fn stats(&self) -> BTreeMap<&'static str, usize> {
        BTreeMap::from([
            ("en_aux", self.en_aux.len()),
            ("en_modals", self.en_modals.len()),
            ("en_irregulars", self.en_irregulars.len()),
            ("en_verb_bases", self.en_verb_bases.len()),
            ("en_interrupters", self.en_interrupters.len()),
            ("fr_aux", self.fr_aux.len()),
            ("fr_endings", self.fr_endings.len()),
            ("fr_participles", self.fr_participles.len()),
        ])
    }
}

fn parse_features(col: &str) -> std::result::Result<BTreeMap<String, String>, String> {
    let col = col.trim();
    let mut out = BTreeMap::new();
    if col == "-" || col.is_empty() {
        return Ok(out);
    }
    for part in col.split(';') {
        let (k, v) = part.split_once('=').ok_or_else(|| format!("feature `{part}` is not key=value"))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

/// Lemma guesses for an English stem left after stripping `-ed` or `-ing`,
/// most likely first.
fn en_stem_candidates(stem: &str, suffix: &str) -> Vec<String> {
    let mut out = Vec::new();
    let bytes = stem.as_bytes();
    let n = bytes.len();
    if suffix == "ed" {
        if let Some(s) = stem.strip_suffix('i') {
            out.push(format!("{s}y")); // notified -> notify
        }
        out.push(format!("{stem}e")); // voted -> vote
        out.push(stem.to_string()); // wanted -> want
    } else {
        out.push(stem.to_string()); // working -> work
        out.push(format!("{stem}e")); // changing -> change
        if let Some(s) = stem.strip_suffix('y') {
            out.push(format!("{s}ie")); // lying -> lie
        }
    }
    if n >= 2 && bytes[n - 1] == bytes[n - 2] && !matches!(bytes[n - 1], b'l' | b's' | b'e' | b'o') {
        out.push(stem[..n - 1].to_string()); // stopped -> stop, running -> run
    }
    out
}
