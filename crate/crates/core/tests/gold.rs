mod common;

use common::*;
use tensecheck::metrics::ComparisonMode;
use tensecheck::tense_en::{label_annotated, label_sentence, Labeler};
use tensecheck::tense_fr::{consistency_check, label_sentence_fr, Verdict};
use tensecheck::{FrenchTense, SentenceLabel};

#[test]
fn english_fixture_is_large_enough() {
    assert!(english_gold().len() >= 35);
}

#[test]
fn annotator_matches_every_gold_label() {
    let mut misses = Vec::new();
    for case in english_gold() {
        let got = label_sentence(&case.sentence);
        if got != case.label {
            misses.push(format!("{}: expected {}, got {}", case.sentence, case.label, got));
        }
    }
    assert!(misses.is_empty(), "{}", misses.join("\n"));
}

#[test]
fn gold_annotation_path_matches_every_label() {
    let gold = gold_annotations();
    let cases = english_gold();
    assert_eq!(gold.len(), cases.len());
    for ((label, tokens), case) in gold.iter().zip(&cases) {
        let surface: String = tokens.iter().map(|t| t.token.surface.as_str()).collect();
        assert_eq!(surface, squash(&case.sentence));
        assert_eq!(label, &case.label, "{}", case.sentence);
        assert_eq!(&label_annotated(tokens), label, "{}", case.sentence);
    }
}

#[test]
fn divergent_rows_agree_as_sets() {
    for case in english_divergent() {
        let got = label_sentence(&case.sentence);
        assert_eq!(got, case.label, "{}", case.sentence);
        assert!(ComparisonMode::Set.equal(&got, &case.published), "{}", case.sentence);
    }
}

#[test]
fn french_fixture_detects_every_stated_tense() {
    let cases = french_gold();
    assert!(cases.len() >= 10);
    for case in cases {
        let got = label_sentence_fr(&case.sentence);
        assert!(got.contains(&case.stated), "{}: {:?}", case.sentence, got);
        assert_eq!(got, case.all, "{}", case.sentence);
    }
}

#[test]
fn gender_agreement_does_not_change_detection() {
    assert_eq!(
        label_sentence_fr("Nous nous sommes donc abstenus."),
        label_sentence_fr("Nous nous sommes donc abstenues.")
    );
}

#[test]
fn reference_triples_are_consistent() {
    let fr = "Mais on les avait votés lors de la dernière période de session.";
    let l = Labeler::default();
    let hyp = l.label("But we voted on them during the last part-session.");
    let v = consistency_check(fr, &hyp);
    assert_eq!(v.verdict, Verdict::Inconsistent);
    assert_eq!(v.uncovered, [FrenchTense::PlusQueParfait]);
    let corrected = l.label("But we had voted on them during the last part-session.");
    assert_eq!(consistency_check(fr, &corrected).verdict, Verdict::Consistent);
}

#[test]
fn shall_switch_changes_only_shall() {
    let lex = tensecheck::Lexicon::builtin();
    let on = Labeler::new(lex, tensecheck::annotate::AnnotateOptions { shall_as_future: true });
    let s = "We shall see.";
    assert_eq!(label_sentence(s), "Modal".parse::<SentenceLabel>().unwrap());
    assert_eq!(on.label(s), "Future".parse::<SentenceLabel>().unwrap());
    for case in english_gold() {
        assert_eq!(on.label(&case.sentence), case.label);
    }
}
