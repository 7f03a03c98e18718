//! English verb-chain extraction and seven-way tense classification.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::annotate::{self, AnnotateOptions, AnnotatedToken, Tag};
use crate::error::{Error, Result};
use crate::lexicon::Lexicon;

/// English tense category. Progressive aspect is merged into the
/// corresponding simple tense; any chain containing a modal is `Modal`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum TenseCategory {
    Past,
    Present,
    Future,
    PasPerfect,
    PrePerfect,
    FutPerfect,
    Modal,
}

impl TenseCategory {
    pub const ALL: [TenseCategory; 7] = [
        TenseCategory::Past,
        TenseCategory::Present,
        TenseCategory::Future,
        TenseCategory::PasPerfect,
        TenseCategory::PrePerfect,
        TenseCategory::FutPerfect,
        TenseCategory::Modal,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TenseCategory::Past => "Past",
            TenseCategory::Present => "Present",
            TenseCategory::Future => "Future",
            TenseCategory::PasPerfect => "PasPerfect",
            TenseCategory::PrePerfect => "PrePerfect",
            TenseCategory::FutPerfect => "FutPerfect",
            TenseCategory::Modal => "Modal",
        }
    }

    /// Position in [`TenseCategory::ALL`].
    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for TenseCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TenseCategory {
    type Err = Error;

    /// Case-insensitive; also accepts descriptive names such as
    /// "Past simple" or "Present perfect".
    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.chars().filter(|c| c.is_alphanumeric()).collect::<String>().to_lowercase();
        let cat = match key.as_str() {
            "past" | "pastsimple" | "pastprogressive" => TenseCategory::Past,
            "present" | "presentsimple" | "presentprogressive" => TenseCategory::Present,
            "future" | "futuresimple" | "futureprogressive" => TenseCategory::Future,
            "pasperfect" | "pastperfect" => TenseCategory::PasPerfect,
            "preperfect" | "presentperfect" => TenseCategory::PrePerfect,
            "futperfect" | "futureperfect" => TenseCategory::FutPerfect,
            "modal" => TenseCategory::Modal,
            _ => return Err(Error::UnknownCategory(s.to_string())),
        };
        Ok(cat)
    }
}

impl From<TenseCategory> for String {
    fn from(c: TenseCategory) -> String {
        c.as_str().to_string()
    }
}

impl TryFrom<String> for TenseCategory {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Ordered tense structures of one sentence, duplicates retained.
///
/// The canonical string joins category names with `+`; a sentence without
/// finite verb chains has the empty label `""`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct SentenceLabel(pub Vec<TenseCategory>);

impl SentenceLabel {
    pub fn new(categories: Vec<TenseCategory>) -> Self {
        SentenceLabel(categories)
    }

    pub fn categories(&self) -> &[TenseCategory] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Categories in canonical order, duplicates kept.
    pub fn sorted(&self) -> Vec<TenseCategory> {
        let mut v = self.0.clone();
        v.sort();
        v
    }

    /// Distinct categories in canonical order.
    pub fn distinct(&self) -> Vec<TenseCategory> {
        let mut v = self.sorted();
        v.dedup();
        v
    }
}

impl fmt::Display for SentenceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            f.write_str(c.as_str())?;
        }
        Ok(())
    }
}

impl FromStr for SentenceLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(SentenceLabel::default());
        }
        s.split('+').map(|p| p.trim().parse()).collect::<Result<Vec<_>>>().map(SentenceLabel)
    }
}

impl From<SentenceLabel> for String {
    fn from(l: SentenceLabel) -> String {
        l.to_string()
    }
}

impl TryFrom<String> for SentenceLabel {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Vec<TenseCategory>> for SentenceLabel {
    fn from(v: Vec<TenseCategory>) -> Self {
        SentenceLabel(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Finiteness {
    Past,
    Present,
    None,
}

/// A finite verb group: anchor plus the auxiliaries, participles and base
/// forms that follow it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerbChain {
    /// Verb tokens of the chain, strictly increasing.
    pub indices: Vec<usize>,
    /// Tokens passed over inside the chain: negators, adverbs, and the
    /// object pronoun of `let us` or the subject of an inverted question.
    pub skipped: Vec<usize>,
    /// Character span from the first to the last verb token.
    pub span: (usize, usize),
    pub anchor_lemma: String,
    pub head_lemma: String,
    /// Lemmas of every verb token before the head.
    pub auxiliaries: Vec<String>,
    pub finite: Finiteness,
    pub has_modal: bool,
    pub has_future: bool,
    pub perfect: bool,
    pub progressive: bool,
    pub passive: bool,
    pub going_to: bool,
}

const MAX_INTERRUPTERS: usize = 2;
const LET_OBJECTS: [&str; 7] = ["us", "me", "him", "her", "them", "it", "you"];
const INVERTED_SUBJECTS: [&str; 8] = ["i", "you", "he", "she", "it", "we", "they", "there"];

fn starts_chain(tag: Tag) -> bool {
    tag.anchors_clause()
}

fn continues_chain(tag: Tag, prev: Tag) -> bool {
    match tag {
        Tag::ParticiplePast | Tag::ParticiplePresent | Tag::Base | Tag::GoingTo => true,
        Tag::Infinitive => prev == Tag::GoingTo,
        _ => false,
    }
}

/// Index after up to `MAX_INTERRUPTERS` interrupters starting at `j`.
fn skip_interrupters(sentence: &[AnnotatedToken], j: usize) -> usize {
    let mut k = j;
    while k < sentence.len() && k - j < MAX_INTERRUPTERS && sentence[k].tag.is_interrupter() {
        k += 1;
    }
    k
}

/// Extract the finite verb chains of an annotated sentence, left to right.
///
/// A chain starts at a modal, `will` or finite verb and extends over
/// participles, base forms and the `going to` construction, passing over
/// at most two consecutive negators/adverbs. Infinitive groups and bare
/// participles never start a chain.
pub fn extract_chains(sentence: &[AnnotatedToken]) -> Vec<VerbChain> {
    let mut chains = Vec::new();
    let mut i = 0;
    while i < sentence.len() {
        if !starts_chain(sentence[i].tag) {
            i += 1;
            continue;
        }
        let mut members = vec![i];
        let mut skipped = Vec::new();
        let mut j = i + 1;
        loop {
            let k = skip_interrupters(sentence, j);
            let last = *members.last().unwrap();
            if k < sentence.len() && continues_chain(sentence[k].tag, sentence[last].tag) {
                skipped.extend(j..k);
                members.push(k);
                j = k + 1;
                continue;
            }
            // "let us now hope", "have you seen"
            if members.len() == 1 && k < sentence.len() && k == j {
                let anchor = &sentence[i];
                let w = sentence[k].token.lower.as_str();
                let let_object = anchor.lemma == "let" && LET_OBJECTS.contains(&w);
                let inverted = INVERTED_SUBJECTS.contains(&w)
                    && (matches!(anchor.tag, Tag::Modal | Tag::FutureAux)
                        || anchor.tag.is_finite() && matches!(anchor.lemma.as_str(), "be" | "have" | "do"));
                if (let_object || inverted) && sentence[k].tag == Tag::Other {
                    let m = skip_interrupters(sentence, k + 1);
                    let wanted = if let_object {
                        sentence.get(m).is_some_and(|t| t.tag == Tag::Base)
                    } else {
                        sentence.get(m).is_some_and(|t| continues_chain(t.tag, anchor.tag) && t.tag != Tag::Infinitive)
                    };
                    if wanted {
                        skipped.extend(j..m);
                        members.push(m);
                        j = m + 1;
                        continue;
                    }
                }
            }
            break;
        }
        i = j;
        chains.push(build_chain(sentence, members, skipped));
    }
    chains
}

fn build_chain(sentence: &[AnnotatedToken], indices: Vec<usize>, skipped: Vec<usize>) -> VerbChain {
    let toks: Vec<&AnnotatedToken> = indices.iter().map(|&k| &sentence[k]).collect();
    let anchor = toks[0];
    let head = toks[toks.len() - 1];
    let finite = match anchor.tag {
        Tag::FinitePast => Finiteness::Past,
        Tag::FinitePresent => Finiteness::Present,
        _ => Finiteness::None,
    };
    let mut chain = VerbChain {
        span: (anchor.token.span.0, head.token.span.1),
        anchor_lemma: anchor.lemma.clone(),
        head_lemma: head.lemma.clone(),
        auxiliaries: toks[..toks.len() - 1].iter().map(|t| t.lemma.clone()).collect(),
        finite,
        has_modal: toks.iter().any(|t| t.tag == Tag::Modal),
        has_future: toks.iter().any(|t| t.tag == Tag::FutureAux),
        perfect: false,
        progressive: false,
        passive: false,
        going_to: toks.iter().any(|t| t.tag == Tag::GoingTo),
        indices,
        skipped,
    };
    for w in toks.windows(2) {
        let (a, b) = (w[0], w[1]);
        let aux_form = a.tag != Tag::ParticiplePast || a.lemma == "be";
        match (a.lemma.as_str(), b.tag) {
            ("have", Tag::ParticiplePast) if aux_form => chain.perfect = true,
            ("be", Tag::ParticiplePresent) => chain.progressive = true,
            ("be", Tag::ParticiplePast) => chain.passive = true,
            _ => {}
        }
    }
    chain
}

/// Map one chain to its category. The first matching rule wins:
/// modal, future perfect, future, past perfect, present perfect, past,
/// present.
pub fn classify(chain: &VerbChain) -> Result<TenseCategory> {
    let have_anchor = chain.anchor_lemma == "have";
    let cat = if chain.has_modal {
        TenseCategory::Modal
    } else if chain.has_future && chain.perfect {
        TenseCategory::FutPerfect
    } else if chain.has_future {
        TenseCategory::Future
    } else if chain.finite == Finiteness::Past && have_anchor && chain.perfect {
        TenseCategory::PasPerfect
    } else if chain.finite == Finiteness::Present && have_anchor && chain.perfect {
        TenseCategory::PrePerfect
    } else if chain.finite == Finiteness::Past {
        TenseCategory::Past
    } else if chain.finite == Finiteness::Present {
        TenseCategory::Present
    } else {
        return Err(Error::UnanchoredChain(chain.indices.clone()));
    };
    Ok(cat)
}

/// Full analysis of one sentence.
#[derive(Clone, Debug, Serialize)]
pub struct Analysis {
    pub tokens: Vec<AnnotatedToken>,
    pub chains: Vec<VerbChain>,
    pub label: SentenceLabel,
}

/// Sentence labeler bound to a lexicon and annotator options.
#[derive(Clone, Copy, Debug)]
pub struct Labeler<'a> {
    pub lexicon: &'a Lexicon,
    pub options: AnnotateOptions,
}

impl Default for Labeler<'static> {
    fn default() -> Self {
        Labeler { lexicon: Lexicon::builtin(), options: AnnotateOptions::default() }
    }
}

impl<'a> Labeler<'a> {
    pub fn new(lexicon: &'a Lexicon, options: AnnotateOptions) -> Self {
        Labeler { lexicon, options }
    }

    pub fn analyze(&self, text: &str) -> Analysis {
        let tokens = annotate::annotate_text(text, self.lexicon, self.options);
        analyze_annotated(tokens)
    }

    pub fn label(&self, text: &str) -> SentenceLabel {
        self.analyze(text).label
    }

    /// True when the sentence has at least one finite verb chain.
    pub fn has_chain(&self, text: &str) -> bool {
        !self.analyze(text).chains.is_empty()
    }
}

/// Chains and label for an already annotated sentence (the gold path).
pub fn analyze_annotated(tokens: Vec<AnnotatedToken>) -> Analysis {
    let chains = extract_chains(&tokens);
    let label = SentenceLabel(chains.iter().filter_map(|c| classify(c).ok()).collect());
    Analysis { tokens, chains, label }
}

pub fn label_annotated(tokens: &[AnnotatedToken]) -> SentenceLabel {
    SentenceLabel(extract_chains(tokens).iter().filter_map(|c| classify(c).ok()).collect())
}

/// Label a raw sentence with the built-in lexicon and default options.
pub fn label_sentence(text: &str) -> SentenceLabel {
    Labeler::default().label(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use TenseCategory::*;

    fn label(text: &str) -> String {
        label_sentence(text).to_string()
    }

    fn chain_surfaces(text: &str) -> Vec<String> {
        let a = Labeler::default().analyze(text);
        a.chains
            .iter()
            .map(|c| {
                let mut idx: Vec<usize> = c.indices.iter().chain(c.skipped.iter()).copied().collect();
                idx.sort();
                idx.iter().map(|&k| a.tokens[k].token.surface.as_str()).collect::<Vec<_>>().join(" ")
            })
            .collect()
    }

    #[test]
    fn category_names() {
        for c in TenseCategory::ALL {
            assert_eq!(c.as_str().parse::<TenseCategory>().unwrap(), c);
            assert_eq!(c.as_str().to_uppercase().parse::<TenseCategory>().unwrap(), c);
        }
        assert_eq!("Preperfect".parse::<TenseCategory>().unwrap(), PrePerfect);
        assert_eq!("Futperfect".parse::<TenseCategory>().unwrap(), FutPerfect);
        assert_eq!("Past simple".parse::<TenseCategory>().unwrap(), Past);
        assert_eq!("Present perfect".parse::<TenseCategory>().unwrap(), PrePerfect);
        assert!("Aorist".parse::<TenseCategory>().is_err());
    }

    #[test]
    fn label_string_round_trip() {
        let l: SentenceLabel = "Present+PrePerfect+Present".parse().unwrap();
        assert_eq!(l.0, vec![Present, PrePerfect, Present]);
        assert_eq!(l.to_string(), "Present+PrePerfect+Present");
        assert_eq!("".parse::<SentenceLabel>().unwrap(), SentenceLabel::default());
        assert_eq!(SentenceLabel::default().to_string(), "");
        let json = serde_json::to_string(&l).unwrap();
        assert_eq!(json, "\"Present+PrePerfect+Present\"");
        assert_eq!(serde_json::from_str::<SentenceLabel>(&json).unwrap(), l);
    }

    #[test]
    fn chain_examples() {
        assert_eq!(
            chain_surfaces("I just wanted to mention that because some countries have been mentioned."),
            ["wanted", "have been mentioned"]
        );
        assert_eq!(chain_surfaces("The world is changing."), ["is changing"]);
        assert!(chain_surfaces("Hello there.").is_empty());
        assert_eq!(chain_surfaces("We are going to act."), ["are going to act"]);
        assert_eq!(
            chain_surfaces("Let us now hope that this will take a strong stand."),
            ["Let us now hope", "will take"]
        );
    }

    #[test]
    fn chain_flags() {
        let a = Labeler::default().analyze("His participation had been notified.");
        let c = &a.chains[0];
        assert!(c.perfect && c.passive && !c.progressive);
        assert_eq!(c.finite, Finiteness::Past);
        assert_eq!(c.anchor_lemma, "have");
        assert_eq!(c.auxiliaries, ["have", "be"]);
        let a = Labeler::default().analyze("We are going to act.");
        assert!(a.chains[0].going_to && !a.chains[0].progressive);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(label("His participation had been notified."), "PasPerfect");
        assert_eq!(label("We will have finished it at that time."), "FutPerfect");
        assert_eq!(label("We should be less rigid."), "Modal");
        assert_eq!(label("He is going to act."), "Present");
        assert_eq!(label("It would have been done."), "Modal");
        assert_eq!(label("They will have been doing it."), "FutPerfect");
        assert_eq!(label("We are about to vote."), "Present");
    }

    #[test]
    fn sentence_examples() {
        assert_eq!(label("So it is in that spirit that we have made this change."), "Present+PrePerfect");
        assert_eq!(label("What will happen if a new crisis occurs next year?"), "Future+Present");
        assert_eq!(label("Let us now hope that this will take a strong stand."), "Present+Future");
        assert_eq!(label("We therefore abstained."), "Past");
        assert_eq!(label("Thank you."), "");
    }

    #[test]
    fn shall_switch() {
        let l = Labeler::new(Lexicon::builtin(), AnnotateOptions { shall_as_future: true });
        assert_eq!(l.label("We shall see.").to_string(), "Future");
        assert_eq!(label("We shall see."), "Modal");
    }

    #[test]
    fn unanchored_chain_is_rejected() {
        let chain = VerbChain {
            indices: vec![0],
            skipped: vec![],
            span: (0, 4),
            anchor_lemma: "make".into(),
            head_lemma: "make".into(),
            auxiliaries: vec![],
            finite: Finiteness::None,
            has_modal: false,
            has_future: false,
            perfect: false,
            progressive: false,
            passive: false,
            going_to: false,
        };
        assert!(matches!(classify(&chain), Err(Error::UnanchoredChain(_))));
    }
}
