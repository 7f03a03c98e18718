#![allow(dead_code)]

use std::path::PathBuf;

use tensecheck::annotate::{read_annotated, AnnotatedSentence};
use tensecheck::pipeline::ParallelTriple;
use tensecheck::rng::SplitMix64;
use tensecheck::{FrenchTense, SentenceLabel, TenseCategory};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures").join(name)
}

fn rows(name: &str) -> Vec<Vec<String>> {
    std::fs::read_to_string(fixture(name))
        .unwrap()
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| l.split('\t').map(str::to_owned).collect())
        .collect()
}

pub struct EnglishCase {
    pub label: SentenceLabel,
    pub sentence: String,
}

pub fn english_gold() -> Vec<EnglishCase> {
    rows("english_gold.tsv")
        .into_iter()
        .map(|r| EnglishCase { label: r[0].parse().unwrap(), sentence: r[1].clone() })
        .collect()
}

pub struct DivergentCase {
    pub label: SentenceLabel,
    pub published: SentenceLabel,
    pub sentence: String,
}

pub fn english_divergent() -> Vec<DivergentCase> {
    rows("english_divergent.tsv")
        .into_iter()
        .map(|r| DivergentCase {
            label: r[0].parse().unwrap(),
            published: r[1].parse().unwrap(),
            sentence: r[2].clone(),
        })
        .collect()
}

pub struct FrenchCase {
    pub stated: FrenchTense,
    pub all: Vec<FrenchTense>,
    pub sentence: String,
}

pub fn french_gold() -> Vec<FrenchCase> {
    rows("french_gold.tsv")
        .into_iter()
        .map(|r| FrenchCase {
            stated: r[0].parse().unwrap(),
            all: r[1].split('+').map(|t| t.parse().unwrap()).collect(),
            sentence: r[2].clone(),
        })
        .collect()
}

fn expand_tag(tag: &str) -> &str {
    match tag {
        "FUT" => "future-aux",
        "GOING" => "going-to",
        "NEG" => "negation",
        "ADV" => "chain-adverb",
        other => other,
    }
}

/// Expand the compact `surface/TAG:lemma` notation into the three-column
/// gold format and read it back with the library reader.
pub fn gold_annotations() -> Vec<(SentenceLabel, AnnotatedSentence)> {
    let rows = rows("english_gold_tags.txt");
    let mut text = String::new();
    for r in &rows {
        for tok in r[1].split_whitespace() {
            let (surface, tag, lemma) = match tok.rsplit_once('/') {
                Some((s, spec)) => {
                    let (t, l) = spec.split_once(':').unwrap_or((spec, ""));
                    (s, expand_tag(t), l)
                }
                None => (tok, "other", ""),
            };
            let lemma = if lemma.is_empty() { surface.to_lowercase() } else { lemma.to_owned() };
            text.push_str(&format!("{surface}\t{tag}\t{lemma}\n"));
        }
        text.push('\n');
    }
    let corpus = read_annotated(text.as_bytes(), "english_gold_tags.txt").unwrap();
    assert_eq!(corpus.len(), rows.len());
    rows.iter().map(|r| r[0].parse().unwrap()).zip(corpus).collect()
}

pub fn squash(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

pub const SUBJECTS: [&str; 5] = ["We", "They", "The members", "The delegations", "Our colleagues"];
/// (base, past and participle, present participle)
pub const VERBS: [(&str, &str, &str); 8] = [
    ("vote on", "voted on", "voting on"),
    ("discuss", "discussed", "discussing"),
    ("approve", "approved", "approving"),
    ("reject", "rejected", "rejecting"),
    ("adopt", "adopted", "adopting"),
    ("examine", "examined", "examining"),
    ("support", "supported", "supporting"),
    ("amend", "amended", "amending"),
];
pub const OBJECTS: [&str; 4] = ["the report", "the proposal", "the amendment", "the budget"];
pub const FR_OBJECTS: [&str; 4] = ["le rapport", "la proposition", "l'amendement", "le budget"];

/// One clause of the template grammar, rendered with a plural subject.
#[derive(Clone, Copy, Debug)]
pub struct Clause {
    pub category: TenseCategory,
    pub progressive: bool,
    pub negated: bool,
    pub subject: usize,
    pub verb: usize,
    pub object: usize,
}

impl Clause {
    pub fn render(&self) -> String {
        let (base, pp, ing) = VERBS[self.verb];
        let not = if self.negated { " not" } else { "" };
        let vp = match (self.category, self.progressive) {
            (TenseCategory::Past, false) if self.negated => format!("did not {base}"),
            (TenseCategory::Past, false) => pp.to_owned(),
            (TenseCategory::Past, true) => format!("were{not} {ing}"),
            (TenseCategory::Present, false) if self.negated => format!("do not {base}"),
            (TenseCategory::Present, false) => base.to_owned(),
            (TenseCategory::Present, true) => format!("are{not} {ing}"),
            (TenseCategory::Future, false) => format!("will{not} {base}"),
            (TenseCategory::Future, true) => format!("will{not} be {ing}"),
            (TenseCategory::PasPerfect, false) => format!("had{not} {pp}"),
            (TenseCategory::PasPerfect, true) => format!("had{not} been {ing}"),
            (TenseCategory::PrePerfect, false) => format!("have{not} {pp}"),
            (TenseCategory::PrePerfect, true) => format!("have{not} been {ing}"),
            (TenseCategory::FutPerfect, false) => format!("will{not} have {pp}"),
            (TenseCategory::FutPerfect, true) => format!("will{not} have been {ing}"),
            (TenseCategory::Modal, false) => format!("should{not} {base}"),
            (TenseCategory::Modal, true) => format!("should{not} be {ing}"),
        };
        format!("{} {} {}", SUBJECTS[self.subject], vp, OBJECTS[self.object])
    }

    pub fn from_seed(rng: &mut SplitMix64, category: TenseCategory) -> Clause {
        Clause {
            category,
            progressive: rng.below(2) == 1,
            negated: rng.below(4) == 0,
            subject: rng.below(SUBJECTS.len() as u64) as usize,
            verb: rng.below(VERBS.len() as u64) as usize,
            object: rng.below(OBJECTS.len() as u64) as usize,
        }
    }
}

/// Sentence from one clause, or two joined by "and".
pub fn sentence(clauses: &[Clause]) -> String {
    let parts: Vec<String> = clauses.iter().map(Clause::render).collect();
    let mut s = parts.join(" and ");
    s.push('.');
    s
}

pub fn random_category(rng: &mut SplitMix64) -> TenseCategory {
    TenseCategory::ALL[rng.below(7) as usize]
}

/// A category different from `c`.
pub fn other_category(rng: &mut SplitMix64, c: TenseCategory) -> TenseCategory {
    let k = (c.index() as u64 + 1 + rng.below(6)) % 7;
    TenseCategory::ALL[k as usize]
}

/// Synthetic triples with `perturbed` hypotheses whose tense differs from
/// the reference. Returns the triples and the ids of the perturbed ones.
pub fn synthetic_triples(n: usize, perturbed: usize, seed: u64) -> (Vec<ParallelTriple>, Vec<String>) {
    let mut rng = SplitMix64::new(seed);
    let mut order: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut order);
    let mut flip = vec![false; n];
    for &i in &order[..perturbed] {
        flip[i] = true;
    }
    let mut triples = Vec::with_capacity(n);
    let mut ids = Vec::new();
    for (i, &flip) in flip.iter().enumerate() {
        let category = random_category(&mut rng);
        let clause = Clause::from_seed(&mut rng, category);
        let mut hyp = clause;
        hyp.subject = rng.below(SUBJECTS.len() as u64) as usize;
        if flip {
            hyp.category = other_category(&mut rng, category);
            ids.push((i + 1).to_string());
        }
        let fr = format!("Nous avons examiné {} numéro {}.", FR_OBJECTS[clause.object], i + 1);
        triples.push(ParallelTriple::new((i + 1).to_string(), fr, sentence(&[clause]), sentence(&[hyp])));
    }
    (triples, ids)
}
