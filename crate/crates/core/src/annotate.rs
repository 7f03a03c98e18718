//! Tokenization and morphosyntactic tagging of English sentences.
//!
//! [`annotate`] is a deterministic, lexicon-driven heuristic tagger that
//! only distinguishes the classes verb-chain extraction needs. Gold
//! annotations in the column format read by [`read_annotated`] bypass it.

use std::fmt;
use std::io::{BufRead, Write};
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lexicon::{
    AuxLemma, FunctionKind, InterrupterKind, Language, Lexicon, MorphAnalysis, PronounKind, SuffixAnalysis, VerbForm,
};

/// Lookahead/lookbehind used to resolve `'d`, `'s` and past/participle
/// ambiguity.
pub const CHAIN_WINDOW: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Token {
    /// Text exactly as it appears in the input.
    pub surface: String,
    /// Lowercased form with contractions expanded.
    pub lower: String,
    pub index: usize,
    /// Character offsets `[start, end)` into the input.
    pub span: (usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(into = "String")]
pub enum Tag {
    FinitePast,
    FinitePresent,
    ParticiplePast,
    ParticiplePresent,
    Base,
    Modal,
    FutureAux,
    Infinitive,
    Negation,
    ChainAdverb,
    GoingTo,
    Other,
}

impl Tag {
    pub const ALL: [Tag; 12] = [
        Tag::FinitePast,
        Tag::FinitePresent,
        Tag::ParticiplePast,
        Tag::ParticiplePresent,
        Tag::Base,
        Tag::Modal,
        Tag::FutureAux,
        Tag::Infinitive,
        Tag::Negation,
        Tag::ChainAdverb,
        Tag::GoingTo,
        Tag::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Tag::FinitePast => "finite-past",
            Tag::FinitePresent => "finite-present",
            Tag::ParticiplePast => "participle-past",
            Tag::ParticiplePresent => "participle-present",
            Tag::Base => "base",
            Tag::Modal => "modal",
            Tag::FutureAux => "future-aux",
            Tag::Infinitive => "infinitive",
            Tag::Negation => "negation",
            Tag::ChainAdverb => "chain-adverb",
            Tag::GoingTo => "going-to",
            Tag::Other => "other",
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Tag::FinitePast | Tag::FinitePresent)
    }

    pub fn is_interrupter(self) -> bool {
        matches!(self, Tag::Negation | Tag::ChainAdverb)
    }

    /// Tags that carry a verb lemma.
    pub fn is_verbal(self) -> bool {
        matches!(
            self,
            Tag::FinitePast
                | Tag::FinitePresent
                | Tag::ParticiplePast
                | Tag::ParticiplePresent
                | Tag::Base
                | Tag::Modal
                | Tag::FutureAux
                | Tag::GoingTo
        )
    }

    /// Tags that anchor a clause: finite verbs, modals and `will`.
    pub fn anchors_clause(self) -> bool {
        self.is_finite() || matches!(self, Tag::Modal | Tag::FutureAux)
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl From<Tag> for String {
    fn from(t: Tag) -> String {
        t.as_str().to_string()
    }
}

impl FromStr for Tag {
    type Err = String;

    /// Accepts the canonical names and the Penn Treebank verb tags.
    fn from_str(s: &str) -> std::result::Result<Tag, String> {
        let t = match s {
            "finite-past" | "VBD" => Tag::FinitePast,
            "finite-present" | "VBZ" | "VBP" => Tag::FinitePresent,
            "participle-past" | "VBN" => Tag::ParticiplePast,
            "participle-present" | "VBG" => Tag::ParticiplePresent,
            "base" | "VB" => Tag::Base,
            "modal" | "MD" => Tag::Modal,
            "future-aux" => Tag::FutureAux,
            "infinitive" | "TO" => Tag::Infinitive,
            "negation" => Tag::Negation,
            "chain-adverb" => Tag::ChainAdverb,
            "going-to" => Tag::GoingTo,
            "other" => Tag::Other,
            _ => return Err(format!("unknown tag `{s}`")),
        };
        Ok(t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AnnotatedToken {
    pub token: Token,
    pub tag: Tag,
    pub lemma: String,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AnnotateOptions {
    /// Tag `shall` as the future auxiliary instead of a modal.
    pub shall_as_future: bool,
}

const CLITICS: [&str; 6] = ["s", "d", "ll", "ve", "re", "m"];

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

fn clitic_lower(clitic: &str) -> String {
    match clitic {
        "ll" => "will".into(),
        "ve" => "have".into(),
        "re" => "are".into(),
        "m" => "am".into(),
        "t" => "not".into(),
        other => format!("'{other}"),
    }
}

/// Split a sentence into tokens.
///
/// Whitespace separates tokens; every punctuation character is a token of
/// its own; hyphens and apostrophes between letters stay inside words.
/// English clitics become separate tokens whose `lower` is expanded
/// (`'ll` → `will`, `n't` → `not`, ...). `'s` and `'d` keep their surface
/// form as `lower` because they are ambiguous.
pub fn tokenize(text: &str) -> Vec<Token> {
    let chars: Vec<char> = text.chars().collect();
    let n = chars.len();
    let is_word = |c: char| c.is_alphanumeric();
    let mut raw: Vec<(usize, usize, Option<String>)> = Vec::new();
    let mut i = 0;
    while i < n {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if is_apostrophe(c) {
            // clitic standing on its own, as in pre-tokenized text: "I 'll"
            let mut j = i + 1;
            while j < n && chars[j].is_alphabetic() {
                j += 1;
            }
            let letters: String = chars[i + 1..j].iter().collect::<String>().to_lowercase();
            if j > i + 1 && CLITICS.contains(&letters.as_str()) {
                raw.push((i, j, Some(clitic_lower(&letters))));
                i = j;
            } else {
                raw.push((i, i + 1, None));
                i += 1;
            }
            continue;
        }
        if !is_word(c) {
            raw.push((i, i + 1, None));
            i += 1;
            continue;
        }
        let start = i;
        let mut j = i;
        loop {
            while j < n && is_word(chars[j]) {
                j += 1;
            }
            if j + 1 < n && chars[j] == '-' && is_word(chars[j + 1]) {
                j += 1;
                continue;
            }
            if j + 1 < n
                && (chars[j] == '.' || chars[j] == ',')
                && chars[j - 1].is_ascii_digit()
                && chars[j + 1].is_ascii_digit()
            {
                j += 1;
                continue;
            }
            if j + 1 < n && is_apostrophe(chars[j]) && chars[j + 1].is_alphabetic() {
                let mut k = j + 1;
                while k < n && chars[k].is_alphabetic() {
                    k += 1;
                }
                let letters: String = chars[j + 1..k].iter().collect::<String>().to_lowercase();
                if letters == "t" && j > start && chars[j - 1].eq_ignore_ascii_case(&'n') {
                    if j - 1 > start {
                        raw.push((start, j - 1, None));
                    }
                    raw.push((j - 1, k, Some("not".into())));
                    i = k;
                    break;
                }
                if CLITICS.contains(&letters.as_str()) {
                    raw.push((start, j, None));
                    raw.push((j, k, Some(clitic_lower(&letters))));
                    i = k;
                    break;
                }
                // apostrophe inside a word: o'clock, aujourd'hui
                j = k;
                continue;
            }
            raw.push((start, j, None));
            i = j;
            break;
        }
    }

    let mut tokens: Vec<Token> = raw
        .into_iter()
        .enumerate()
        .map(|(index, (s, e, lower))| {
            let surface: String = chars[s..e].iter().collect();
            let lower = lower.unwrap_or_else(|| normalize_lower(&surface));
            Token { surface, lower, index, span: (s, e) }
        })
        .collect();
    split_cannot(&mut tokens);
    for k in 1..tokens.len() {
        if normalize_lower(&tokens[k].surface) != "n't" {
            continue;
        }
        let expanded = match tokens[k - 1].lower.as_str() {
            "ca" => "can",
            "wo" => "will",
            "sha" => "shall",
            _ => continue,
        };
        tokens[k - 1].lower = expanded.to_string();
    }
    tokens
}

fn normalize_lower(surface: &str) -> String {
    surface.to_lowercase().replace('\u{2019}', "'")
}

/// `cannot` is one orthographic word but two chain elements.
fn split_cannot(tokens: &mut Vec<Token>) {
    let mut out = Vec::with_capacity(tokens.len());
    for t in tokens.drain(..) {
        if t.lower == "cannot" {
            let (s, _) = t.span;
            out.push(Token { surface: t.surface[..3].to_string(), lower: "can".into(), index: 0, span: (s, s + 3) });
            out.push(Token {
                surface: t.surface[3..].to_string(),
                lower: "not".into(),
                index: 0,
                span: (s + 3, s + 6),
            });
        } else {
            out.push(t);
        }
    }
    for (i, t) in out.iter_mut().enumerate() {
        t.index = i;
    }
    *tokens = out;
}

/// Join token surfaces with single spaces.
pub fn detokenize(tokens: &[Token]) -> String {
    tokens.iter().map(|t| t.surface.as_str()).collect::<Vec<_>>().join(" ")
}

fn is_punct(w: &str) -> bool {
    w.chars().all(|c| !c.is_alphanumeric())
}

const CLAUSE_BOUNDARIES: [&str; 22] = [
    "that", "which", "who", "what", "where", "when", "while", "because", "since", "if", "although", "though", "unless",
    "until", "whether", "and", "or", "but", "so", ",", ";", ":",
];

const SENTENCE_ENDS: [&str; 6] = [".", "!", "?", ":", ";", "\u{2013}"];

/// Per-token facts gathered from the lexicon before tagging.
struct Facts {
    analyses: Vec<MorphAnalysis>,
    suffix: Vec<SuffixAnalysis>,
}

impl Facts {
    fn aux(&self) -> impl Iterator<Item = (AuxLemma, VerbForm)> + '_ {
        self.analyses.iter().filter_map(|a| match a {
            MorphAnalysis::Aux { lemma, form } => Some((*lemma, *form)),
            _ => None,
        })
    }

    fn has_aux_lemma(&self, lemma: AuxLemma) -> bool {
        self.aux().any(|(l, _)| l == lemma)
    }

    fn irregular(&self) -> impl Iterator<Item = (&str, VerbForm)> + '_ {
        self.analyses.iter().filter_map(|a| match a {
            MorphAnalysis::Irregular { lemma, form, .. } => Some((lemma.as_str(), *form)),
            _ => None,
        })
    }

    fn irregular_form(&self, form: VerbForm) -> Option<&str> {
        self.irregular().find(|&(_, f)| f == form).map(|(l, _)| l)
    }

    fn suffix_form(&self, form: VerbForm) -> Option<(&str, bool)> {
        self.suffix.iter().find_map(|s| match s {
            SuffixAnalysis::En { form: f, lemma, known } if *f == form => Some((lemma.as_str(), *known)),
            _ => None,
        })
    }

    fn pronoun(&self) -> impl Iterator<Item = PronounKind> + '_ {
        self.analyses.iter().filter_map(|a| match a {
            MorphAnalysis::Pronoun(k) => Some(*k),
            _ => None,
        })
    }

    fn function(&self) -> Option<FunctionKind> {
        self.analyses.iter().find_map(|a| match a {
            MorphAnalysis::Function(k) => Some(*k),
            _ => None,
        })
    }

    fn is_base_capable(&self) -> bool {
        self.analyses.iter().any(|a| {
            matches!(
                a,
                MorphAnalysis::VerbBase
                    | MorphAnalysis::Irregular { form: VerbForm::Base, .. }
                    | MorphAnalysis::Aux { form: VerbForm::Base, .. }
            )
        })
    }

    fn can_be_past_participle(&self) -> bool {
        self.aux().any(|(_, f)| f == VerbForm::PastParticiple)
            || self.irregular_form(VerbForm::PastParticiple).is_some()
            || self.suffix_form(VerbForm::PastParticiple).is_some()
    }

    /// Participle that cannot also be a finite past form (`taken`, `been`).
    fn is_participle_only(&self) -> bool {
        let pp = self.aux().any(|(_, f)| f == VerbForm::PastParticiple)
            || self.irregular_form(VerbForm::PastParticiple).is_some();
        let past = self.aux().any(|(_, f)| f == VerbForm::Past) || self.irregular_form(VerbForm::Past).is_some();
        pp && !past
    }
}

struct Tagger<'a> {
    lex: &'a Lexicon,
    opts: AnnotateOptions,
    toks: &'a [Token],
    facts: Vec<Facts>,
    tags: Vec<Tag>,
    lemmas: Vec<String>,
}

/// Tag a tokenized sentence with the built-in heuristic annotator.
///
/// The output has exactly one entry per input token, in order.
pub fn annotate(tokens: &[Token], lexicon: &Lexicon) -> Vec<AnnotatedToken> {
    annotate_with(tokens, lexicon, AnnotateOptions::default())
}

pub fn annotate_with(tokens: &[Token], lexicon: &Lexicon, opts: AnnotateOptions) -> Vec<AnnotatedToken> {
    let facts = tokens
        .iter()
        .map(|t| Facts { analyses: lexicon.lookup(&t.lower), suffix: lexicon.analyze_suffix(&t.lower, Language::En) })
        .collect();
    let mut tagger = Tagger {
        lex: lexicon,
        opts,
        toks: tokens,
        facts,
        tags: Vec::with_capacity(tokens.len()),
        lemmas: Vec::with_capacity(tokens.len()),
    };
    for i in 0..tokens.len() {
        let (tag, lemma) = tagger.decide(i);
        tagger.tags.push(tag);
        tagger.lemmas.push(lemma);
    }
    tokens
        .iter()
        .cloned()
        .zip(tagger.tags)
        .zip(tagger.lemmas)
        .map(|((token, tag), lemma)| AnnotatedToken { token, tag, lemma })
        .collect()
}

/// Tokenize and annotate one sentence.
pub fn annotate_text(text: &str, lexicon: &Lexicon, opts: AnnotateOptions) -> Vec<AnnotatedToken> {
    annotate_with(&tokenize(text), lexicon, opts)
}

impl Tagger<'_> {
    fn w(&self, i: usize) -> &str {
        &self.toks[i].lower
    }

    fn is_interrupter_at(&self, i: usize) -> bool {
        self.interrupter_kind(i).is_some()
    }

    fn interrupter_kind(&self, i: usize) -> Option<InterrupterKind> {
        let w = self.w(i);
        if w == "not" {
            return Some(InterrupterKind::Negation);
        }
        let listed = self.facts[i].analyses.iter().find_map(|a| match a {
            MorphAnalysis::Interrupter(k) => Some(*k),
            _ => None,
        });
        if listed.is_some() {
            return listed;
        }
        let k = self.lex.interrupter(w)?;
        // -ly words after a determiner or preposition are adjectives or nouns
        match i.checked_sub(1).map(|p| self.facts[p].function()) {
            Some(Some(FunctionKind::Det | FunctionKind::Prep)) => None,
            _ => Some(k),
        }
    }

    /// Previous token that is not an interrupter, looking back at most
    /// `CHAIN_WINDOW` tokens.
    fn prev_in_window(&self, i: usize) -> Option<usize> {
        let mut j = i;
        for _ in 0..CHAIN_WINDOW {
            j = j.checked_sub(1)?;
            if !self.is_interrupter_at(j) {
                return Some(j);
            }
        }
        None
    }

    /// Previous token that is neither an interrupter nor a comma.
    fn prev_content(&self, i: usize) -> Option<usize> {
        (0..i).rev().find(|&j| !self.is_interrupter_at(j) && self.w(j) != ",")
    }

    fn next_in_window(&self, i: usize) -> Option<usize> {
        (i + 1..self.toks.len()).take(CHAIN_WINDOW).find(|&j| !self.is_interrupter_at(j))
    }

    /// Nothing but opening punctuation or `please` precedes `i` in the
    /// current sentence.
    fn sentence_initial(&self, i: usize) -> bool {
        let mut j = i;
        while j > 0 {
            match self.w(j - 1) {
                "please" | "\"" | "\u{201c}" | "(" | "'" | "\u{2018}" => j -= 1,
                w => return SENTENCE_ENDS.contains(&w),
            }
        }
        true
    }

    fn capitalized_mid_sentence(&self, i: usize) -> bool {
        let starts_upper = self.toks[i].surface.chars().next().is_some_and(char::is_uppercase);
        starts_upper && !self.sentence_initial(i)
    }

    fn is_pronoun(&self, i: usize, kinds: &[PronounKind]) -> bool {
        self.facts[i].pronoun().any(|k| kinds.contains(&k))
    }

    fn is_subject_like(&self, i: usize) -> bool {
        self.is_pronoun(
            i,
            &[PronounKind::Subject, PronounKind::Wh, PronounKind::Demonstrative, PronounKind::Existential],
        )
    }

    /// Plain word that can head a noun phrase: not closed-class, not
    /// already tagged as a verb.
    fn is_noun_like(&self, j: usize) -> bool {
        let w = self.w(j);
        if is_punct(w) {
            return false;
        }
        let f = &self.facts[j];
        f.function().is_none()
            && f.pronoun().next().is_none()
            && !self.lex.is_modal(w)
            && !self.lex.is_future_aux(w)
            && f.aux().next().is_none()
            && j < self.tags.len()
            && !self.tags[j].is_verbal()
            && self.tags[j] != Tag::Infinitive
    }

    fn is_plural_noun(&self, j: usize) -> bool {
        let w = self.w(j);
        w.len() > 3
            && w.ends_with('s')
            && !w.ends_with("ss")
            && !w.ends_with("us")
            && !w.ends_with("'s")
            && self.is_noun_like(j)
    }

    /// True when a clause anchor already appears between the start of the
    /// current clause and `i`.
    fn clause_has_anchor(&self, i: usize) -> bool {
        for j in (0..i).rev() {
            if self.tags[j].anchors_clause() {
                return true;
            }
            if CLAUSE_BOUNDARIES.contains(&self.w(j)) || SENTENCE_ENDS.contains(&self.w(j)) {
                return false;
            }
        }
        false
    }

    /// HAVE or BE within the chain window before `i`.
    fn perfect_or_passive_context(&self, i: usize) -> bool {
        let Some(j) = self.prev_in_window(i) else { return false };
        let f = &self.facts[j];
        let have_or_be = f.has_aux_lemma(AuxLemma::Have)
            || f.has_aux_lemma(AuxLemma::Be)
            || matches!(self.w(j), "'s" | "'d") && self.tags[j].is_finite();
        have_or_be && self.tags[j] != Tag::Other
    }

    fn be_context(&self, i: usize) -> bool {
        self.prev_in_window(i).is_some_and(|j| self.facts[j].has_aux_lemma(AuxLemma::Be) && self.tags[j] != Tag::Other)
    }

    /// Position licensing a bare base form: after a modal, `will`, DO,
    /// infinitival `to`, `let` + object pronoun, or an inverted subject.
    fn base_context(&self, i: usize) -> bool {
        let Some(p) = self.prev_in_window(i) else { return false };
        match self.tags[p] {
            Tag::Modal | Tag::FutureAux | Tag::Infinitive => return true,
            Tag::FinitePast | Tag::FinitePresent | Tag::Base if self.facts[p].has_aux_lemma(AuxLemma::Do) => {
                return true
            }
            _ => {}
        }
        if self.is_pronoun(p, &[PronounKind::Object, PronounKind::Subject]) {
            if let Some(pp) = p.checked_sub(1) {
                if self.w(pp) == "let" {
                    return true;
                }
                // inverted question: "will you join", "do you think"
                let t = self.tags[pp];
                if matches!(t, Tag::Modal | Tag::FutureAux)
                    || t.is_finite() && self.facts[pp].has_aux_lemma(AuxLemma::Do)
                {
                    return self.is_pronoun(p, &[PronounKind::Subject]);
                }
            }
        }
        false
    }

    fn decide(&self, i: usize) -> (Tag, String) {
        let w = self.w(i).to_string();
        let other = (Tag::Other, w.clone());
        if is_punct(&w) {
            return other;
        }
        if let Some(k) = self.interrupter_kind(i) {
            let tag = match k {
                InterrupterKind::Negation => Tag::Negation,
                InterrupterKind::Adverb => Tag::ChainAdverb,
            };
            return (tag, w);
        }
        if w == "shall" && self.opts.shall_as_future {
            return (Tag::FutureAux, w);
        }
        if self.lex.is_modal(&w) {
            if self.capitalized_mid_sentence(i) {
                return other;
            }
            return (Tag::Modal, w);
        }
        if self.lex.is_future_aux(&w) {
            return self.decide_will(i, w);
        }
        match w.as_str() {
            "'d" => return self.decide_d(i),
            "'s" => return self.decide_s(i),
            "to" => {
                let next_base = (i + 1..self.toks.len())
                    .take(2)
                    .find(|&j| !self.is_interrupter_at(j))
                    .is_some_and(|j| self.facts[j].is_base_capable());
                return if next_base { (Tag::Infinitive, w) } else { other };
            }
            "going" => {
                let goes_to = self.toks.get(i + 1).is_some_and(|t| t.lower == "to")
                    && self.toks.get(i + 2).is_some_and(|_| self.facts[i + 2].is_base_capable());
                if goes_to {
                    return (Tag::GoingTo, "go".into());
                }
            }
            _ => {}
        }
        if self.facts[i].aux().next().is_some() {
            return self.decide_aux(i);
        }
        if self.facts[i].function().is_some() || self.facts[i].pronoun().next().is_some() {
            return other;
        }
        if self.capitalized_mid_sentence(i) || self.lex.is_formula(&w) {
            return other;
        }
        self.decide_open(i)
    }

    fn decide_will(&self, i: usize, w: String) -> (Tag, String) {
        let after_det =
            i.checked_sub(1).is_some_and(|p| self.facts[p].function().is_some_and(|k| k != FunctionKind::Conj));
        let next_ok = self.next_in_window(i).is_some_and(|j| {
            let nw = self.w(j);
            !is_punct(nw) && self.facts[j].function().is_none()
        });
        if w == "will" && (after_det || !next_ok) {
            return (Tag::Other, w);
        }
        (Tag::FutureAux, "will".into())
    }

    fn decide_d(&self, i: usize) -> (Tag, String) {
        let pp_follows =
            (i + 1..self.toks.len()).take(CHAIN_WINDOW).find(|&j| !self.is_interrupter_at(j)).is_some_and(|j| {
                let f = &self.facts[j];
                let base = f.is_base_capable() && !f.can_be_past_participle();
                !base && f.can_be_past_participle()
            });
        if pp_follows {
            (Tag::FinitePast, "have".into())
        } else {
            (Tag::Modal, "would".into())
        }
    }

    fn decide_s(&self, i: usize) -> (Tag, String) {
        let next = self.next_in_window(i);
        let has = next.is_some_and(|j| self.w(j) == "been" || self.w(j) == "got" || self.facts[j].is_participle_only());
        let lemma = if has { "have" } else { "be" };
        let after_pronoun = i.checked_sub(1).is_some_and(|p| self.facts[p].pronoun().next().is_some());
        if !after_pronoun && i > 0 {
            let verb_follows = (i + 1..self.toks.len()).take(1).any(|j| {
                let f = &self.facts[j];
                self.is_interrupter_at(j)
                    || f.aux().next().is_some()
                    || f.can_be_past_participle()
                    || f.suffix_form(VerbForm::PresentParticiple).is_some_and(|(_, known)| known)
                    || self.w(j) == "going"
            });
            if !verb_follows {
                return (Tag::Other, "'s".into());
            }
        }
        (Tag::FinitePresent, lemma.into())
    }

    fn decide_aux(&self, i: usize) -> (Tag, String) {
        let f = &self.facts[i];
        let forms: Vec<(AuxLemma, VerbForm)> = f.aux().collect();
        let lemma = forms[0].0;
        let lemma_s = lemma.as_str().to_string();
        let has = |form: VerbForm| forms.iter().any(|&(_, f)| f == form);
        if has(VerbForm::PastParticiple) && (!has(VerbForm::Past) || self.perfect_or_passive_context(i)) {
            // `done` is a lexical participle; `had` after HAVE is a participle
            return (Tag::ParticiplePast, lemma_s);
        }
        if has(VerbForm::PresentParticiple) {
            return (Tag::ParticiplePresent, lemma_s);
        }
        if has(VerbForm::Base) && (!has(VerbForm::Present) || self.base_context(i)) {
            return (Tag::Base, lemma_s);
        }
        if has(VerbForm::Past) {
            return (Tag::FinitePast, lemma_s);
        }
        (Tag::FinitePresent, lemma_s)
    }

    fn decide_open(&self, i: usize) -> (Tag, String) {
        let w = self.w(i).to_string();
        let f = &self.facts[i];
        if !w.chars().all(|c| c.is_alphabetic() || c == '-' || c == '\'') {
            return (Tag::Other, w);
        }
        let base_lemma = if f.is_base_capable() {
            Some(f.irregular_form(VerbForm::Base).map(str::to_string).unwrap_or_else(|| w.clone()))
        } else {
            None
        };

        if let Some(lemma) = &base_lemma {
            if self.base_context(i) {
                return (Tag::Base, lemma.clone());
            }
        }

        // an unlicensed -ed guess on a listed base form is noise: "need", "proceed"
        let suffix_ok = |(l, known): (&str, bool)| (known || base_lemma.is_none()).then(|| (l.to_string(), known));
        let pp_lemma = f
            .irregular_form(VerbForm::PastParticiple)
            .map(|l| (l.to_string(), true))
            .or_else(|| f.suffix_form(VerbForm::PastParticiple).and_then(suffix_ok));
        if let Some((lemma, _)) = &pp_lemma {
            if self.perfect_or_passive_context(i) {
                return (Tag::ParticiplePast, lemma.clone());
            }
        }

        if let Some(lemma) = &base_lemma {
            if self.base_finite_context(i) {
                return (Tag::FinitePresent, lemma.clone());
            }
        }

        let irregular_past = f.irregular_form(VerbForm::Past).map(str::to_string);
        let past_lemma =
            irregular_past.clone().map(|l| (l, true)).or_else(|| f.suffix_form(VerbForm::Past).and_then(suffix_ok));
        if let Some((lemma, known)) = &past_lemma {
            let past_only = irregular_past.is_some() && pp_lemma.is_none();
            if past_only || self.past_finite_context(i, *known) {
                return (Tag::FinitePast, lemma.clone());
            }
        }
        if let Some((lemma, _)) = pp_lemma {
            if base_lemma.is_none() || irregular_past.is_some() {
                return (Tag::ParticiplePast, lemma);
            }
        }

        if let Some((lemma, known)) = f.suffix_form(VerbForm::PresentParticiple) {
            if known || self.be_context(i) {
                return (Tag::ParticiplePresent, lemma.to_string());
            }
        }

        if let Some((lemma, known)) = f.suffix_form(VerbForm::Present) {
            // demonstratives also open noun phrases: "this analysis"
            let after_subject = i.checked_sub(1).is_some_and(|p| {
                self.is_pronoun(p, &[PronounKind::Subject, PronounKind::Wh, PronounKind::Existential])
                    || known && self.is_pronoun(p, &[PronounKind::Demonstrative])
            });
            if after_subject || known && self.present_s_context(i) {
                return (Tag::FinitePresent, lemma.to_string());
            }
        }
        (Tag::Other, w)
    }

    /// Base form read as a finite present: after a plural subject, or as a
    /// sentence-initial imperative.
    fn base_finite_context(&self, i: usize) -> bool {
        if self.sentence_initial(i) {
            return true;
        }
        let Some(p) = self.prev_content(i) else { return false };
        let pw = self.w(p);
        if matches!(pw, "i" | "you" | "we" | "they" | "these" | "those" | "who" | "which") {
            return true;
        }
        self.prev_in_window(i).is_some_and(|q| self.is_plural_noun(q)) && !self.clause_has_anchor(i)
    }

    fn past_finite_context(&self, i: usize, known: bool) -> bool {
        let Some(p) = self.prev_content(i) else { return false };
        if self.is_subject_like(p) {
            return true;
        }
        known && self.is_noun_like(p) && !self.clause_has_anchor(i)
    }

    fn present_s_context(&self, i: usize) -> bool {
        let Some(p) = self.prev_content(i) else { return false };
        self.is_noun_like(p) && !self.clause_has_anchor(i)
    }
}

/// One sentence of gold annotations.
pub type AnnotatedSentence = Vec<AnnotatedToken>;

/// Read gold annotations: one `surface<TAB>tag<TAB>lemma` line per token,
/// blank lines between sentences. Tags are canonical names or Penn verb
/// tags. `source` names the input in error messages.
pub fn read_annotated<R: BufRead>(reader: R, source: &str) -> Result<Vec<AnnotatedSentence>> {
    let mut corpus = Vec::new();
    let mut current: AnnotatedSentence = Vec::new();
    let mut offset = 0usize;
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| match e.kind() {
            std::io::ErrorKind::InvalidData => Error::Decode { path: source.to_string() },
            _ => Error::Io(e),
        })?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            if !current.is_empty() {
                corpus.push(std::mem::take(&mut current));
                offset = 0;
            }
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        let err = |message: String| Error::Format { path: source.to_string(), line: i + 1, message };
        if cols.len() != 3 {
            return Err(err(format!("expected 3 tab-separated columns, found {}", cols.len())));
        }
        let surface = cols[0].to_string();
        if surface.is_empty() {
            return Err(err("empty surface form".into()));
        }
        let tag: Tag = cols[1].parse().map_err(err)?;
        let lemma = cols[2].to_string();
        if tag.is_verbal() && lemma.is_empty() {
            return Err(err(format!("tag {tag} requires a lemma")));
        }
        let len = surface.chars().count();
        let token =
            Token { lower: normalize_lower(&surface), surface, index: current.len(), span: (offset, offset + len) };
        offset += len + 1;
        current.push(AnnotatedToken { token, tag, lemma });
    }
    if !current.is_empty() {
        corpus.push(current);
    }
    Ok(corpus)
}

pub fn read_annotated_file(path: impl AsRef<Path>) -> Result<Vec<AnnotatedSentence>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path)?;
    read_annotated(std::io::BufReader::new(file), &path.display().to_string())
}

/// Write sentences in the gold annotation format.
pub fn write_annotated<W: Write>(mut out: W, corpus: &[AnnotatedSentence]) -> Result<()> {
    for (k, sentence) in corpus.iter().enumerate() {
        if k > 0 {
            writeln!(out)?;
        }
        for t in sentence {
            let lemma = if t.lemma.is_empty() { &t.token.lower } else { &t.lemma };
            writeln!(out, "{}\t{}\t{}", t.token.surface, t.tag, lemma)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surfaces(text: &str) -> Vec<String> {
        tokenize(text).into_iter().map(|t| t.surface).collect()
    }

    fn lowers(text: &str) -> Vec<String> {
        tokenize(text).into_iter().map(|t| t.lower).collect()
    }

    fn tags(text: &str) -> Vec<(String, Tag, String)> {
        annotate_text(text, Lexicon::builtin(), AnnotateOptions::default())
            .into_iter()
            .map(|t| (t.token.surface, t.tag, t.lemma))
            .collect()
    }

    fn tag_of(text: &str, surface: &str) -> (Tag, String) {
        tags(text)
            .into_iter()
            .find(|(s, _, _)| s == surface)
            .map(|(_, t, l)| (t, l))
            .unwrap_or_else(|| panic!("{surface} not in {text}"))
    }

    #[test]
    fn tokenize_examples() {
        assert_eq!(lowers("I'll go."), ["i", "will", "go", "."]);
        assert_eq!(surfaces("I'll go."), ["I", "'ll", "go", "."]);
        assert_eq!(surfaces("We therefore abstained."), ["We", "therefore", "abstained", "."]);
        assert!(tokenize("").is_empty());
        assert!(tokenize("   \t ").is_empty());
    }

    #[test]
    fn tokenize_contractions() {
        assert_eq!(lowers("don't"), ["do", "not"]);
        assert_eq!(lowers("can't"), ["can", "not"]);
        assert_eq!(lowers("won't"), ["will", "not"]);
        assert_eq!(lowers("cannot"), ["can", "not"]);
        assert_eq!(lowers("we've they're I'm"), ["we", "have", "they", "are", "i", "am"]);
        assert_eq!(lowers("That's it'd"), ["that", "'s", "it", "'d"]);
        assert_eq!(lowers("I 'll"), ["i", "will"]);
    }

    #[test]
    fn tokenize_keeps_hyphens_and_spans() {
        let t = tokenize("the last part-session, employers' association");
        let s: Vec<_> = t.iter().map(|t| t.surface.as_str()).collect();
        assert_eq!(s, ["the", "last", "part-session", ",", "employers", "'", "association"]);
        assert_eq!(t[2].span, (9, 21));
        for w in t.windows(2) {
            assert!(w[0].span.1 <= w[1].span.0);
            assert_eq!(w[0].index + 1, w[1].index);
        }
    }

    #[test]
    fn round_trip_examples() {
        for text in ["Who'd've thought it wasn't?", "I can't, won't; cannot.", "rock 'n' roll 1,5 3.25", "o'clock"] {
            let a = tokenize(text);
            let b = tokenize(&detokenize(&a));
            let pa: Vec<_> = a.iter().map(|t| (&t.surface, &t.lower)).collect();
            let pb: Vec<_> = b.iter().map(|t| (&t.surface, &t.lower)).collect();
            assert_eq!(pa, pb, "{text}");
        }
    }

    #[test]
    fn contraction_disambiguation() {
        assert_eq!(tag_of("I'd finished", "'d"), (Tag::FinitePast, "have".into()));
        assert_eq!(tag_of("I'd go", "'d"), (Tag::Modal, "would".into()));
        let t = tags("That's why the way had been paved in Helsinki.");
        assert_eq!((t[1].1, t[1].2.as_str()), (Tag::FinitePresent, "be"));
        assert_eq!((t[5].1, t[5].2.as_str()), (Tag::FinitePast, "have"));
        assert_eq!((t[6].1, t[6].2.as_str()), (Tag::ParticiplePast, "be"));
        assert_eq!(t[7].1, Tag::ParticiplePast);
        assert_eq!(tag_of("Europe's future matters.", "'s").0, Tag::Other);
        assert_eq!(tag_of("It's gone.", "'s"), (Tag::FinitePresent, "have".into()));
    }

    #[test]
    fn ambiguous_past_forms() {
        assert_eq!(tag_of("We made comparisons.", "made").0, Tag::FinitePast);
        assert_eq!(tag_of("We had made comparisons.", "made").0, Tag::ParticiplePast);
        assert_eq!(tag_of("Comparisons were made.", "made").0, Tag::ParticiplePast);
        assert_eq!(tag_of("We therefore abstained.", "abstained").0, Tag::FinitePast);
        assert_eq!(tag_of("I will cite as an example qualified majority voting.", "qualified").0, Tag::ParticiplePast);
    }

    #[test]
    fn going_to_and_infinitives() {
        let t = tags("We are going to act.");
        assert_eq!(t[2].1, Tag::GoingTo);
        assert_eq!(t[3].1, Tag::Infinitive);
        assert_eq!(t[4].1, Tag::Base);
        assert_eq!(tag_of("We went to Brussels.", "to").0, Tag::Other);
    }

    #[test]
    fn present_forms() {
        assert_eq!(tag_of("If a new crisis occurs next year.", "occurs").0, Tag::FinitePresent);
        assert_eq!(tag_of("We all hope it ends.", "hope").0, Tag::FinitePresent);
        assert_eq!(tag_of("the votes of the house", "votes").0, Tag::Other);
        assert_eq!(tag_of("Thank you.", "Thank").0, Tag::Other);
        assert_eq!(tag_of("Let us now hope.", "hope").0, Tag::Base);
    }

    #[test]
    fn shall_switch() {
        let opts = AnnotateOptions { shall_as_future: true };
        let t = annotate_text("We shall see.", Lexicon::builtin(), opts);
        assert_eq!(t[1].tag, Tag::FutureAux);
        assert_eq!(tag_of("We shall see.", "shall").0, Tag::Modal);
    }

    #[test]
    fn gold_format_round_trip() {
        let text = "We\tother\twe\nvoted\tVBD\tvote\n.\tother\t.\n\nThey\tother\tthey\nhad\tfinite-past\thave\n";
        let corpus = read_annotated(text.as_bytes(), "gold").unwrap();
        assert_eq!(corpus.len(), 2);
        assert_eq!(corpus[0].len(), 3);
        assert_eq!(corpus[0][1].tag, Tag::FinitePast);
        let mut buf = Vec::new();
        write_annotated(&mut buf, &corpus).unwrap();
        let again = read_annotated(buf.as_slice(), "gold").unwrap();
        assert_eq!(corpus, again);
    }

    #[test]
    fn gold_format_errors() {
        let err = read_annotated("a\tother\ta\nb\tother\n".as_bytes(), "g.tsv").unwrap_err();
        assert!(matches!(err, Error::Format { line: 2, .. }), "{err:?}");
        let err = read_annotated("a\tnonsense\ta\n".as_bytes(), "g.tsv").unwrap_err();
        assert!(matches!(err, Error::Format { line: 1, .. }));
        assert!(read_annotated("".as_bytes(), "g.tsv").unwrap().is_empty());
    }
}
