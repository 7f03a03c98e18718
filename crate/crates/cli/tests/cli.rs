use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tensecheck"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const FORMAT_EXAMPLES: &str = "That was the third point.
The world is changing.
I will communicate it to the Council.
His participation had been notified.
This phenomenon has become a major threat.
We will have finished it at that time.
We should be less rigid.
";

#[test]
fn tag_format_examples() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "t4.txt", FORMAT_EXAMPLES);
    let o = run(&["tag", s(&input)]);
    assert!(o.status.success());
    let labels: Vec<String> = stdout(&o).lines().map(|l| l.split('\t').nth(1).unwrap().to_owned()).collect();
    assert_eq!(labels, ["Past", "Present", "Future", "PasPerfect", "PrePerfect", "FutPerfect", "Modal"]);
}

#[test]
fn tag_jsonl_has_chain_spans() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "a.txt", "So it is in that spirit that we have made this change.\n");
    let o = run(&["tag", s(&input), "--format", "jsonl"]);
    let rec: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(rec["label"], "Present+PrePerfect");
    assert_eq!(rec["chains"][1]["words"], serde_json::json!(["have", "made"]));
    assert_eq!(rec["chains"][0]["span"], serde_json::json!([6, 8]));
}

#[test]
fn tag_french_and_tsv() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "fr.txt", "Nous espérons tous qu 'elle finira.\n");
    let o = run(&["tag", s(&input), "--lang", "fr", "--format", "tsv"]);
    assert_eq!(stdout(&o), "id\tlabel\ttext\n1\tPrésent+FuturSimple\tNous espérons tous qu 'elle finira.\n");
}

#[test]
fn tag_empty_and_binary_files() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write(dir.path(), "empty.txt", "");
    let o = run(&["tag", s(&empty)]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let junk = dir.path().join("junk.bin");
    fs::write(&junk, [0u8, 159, 146, 150, 255, 10]).unwrap();
    let o = run(&["tag", s(&junk)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("UTF-8"));
    let o = run(&["tag", s(&dir.path().join("missing.txt"))]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn score_reports_accuracy() {
    let dir = tempfile::tempdir().unwrap();
    let r = write(dir.path(), "r.txt", "Present\nPast+Future\nModal\n\n");
    let h = write(dir.path(), "h.txt", "Present\nFuture+Past\nModal\nPast\n");
    let o = run(&["score", s(&r), s(&h), "--labels"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("N_c\t3\n"), "{out}");
    assert!(out.contains("N_t\t4\n"));
    assert!(out.contains("accuracy\t0.7500\n"));
    let o = run(&["score", s(&r), s(&r), "--labels", "--mode", "sequence"]);
    assert!(stdout(&o).contains("accuracy\t1.0000\n"));
    let o = run(&["score", s(&r), s(&h), "--labels", "--json"]);
    let rec: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(rec["n_correct"], 3);
    assert_eq!(rec["mode"], "multiset");
}

#[test]
fn score_sentences_and_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let r = write(dir.path(), "r.txt", "But we had voted on them during the last part-session.\n");
    let h = write(dir.path(), "h.txt", "But we voted on them during the last part-session.\n");
    let o = run(&["score", s(&r), s(&h)]);
    let out = stdout(&o);
    assert!(out.contains("accuracy\t0.0000"));
    assert!(out.contains("PasPerfect\t1\t0\t0"), "{out}");
    let two = write(dir.path(), "two.txt", "a\nb\n");
    let o = run(&["score", s(&r), s(&two)]);
    assert_eq!(o.status.code(), Some(2));
    let bad = write(dir.path(), "bad.txt", "Pluperfect\n");
    let o = run(&["score", s(&bad), s(&bad), "--labels"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn build_single_pair_and_reproducibility() {
    let dir = tempfile::tempdir().unwrap();
    let fr = write(dir.path(), "fr.txt", "Mais on les avait votés lors de la dernière période de session.\n");
    let en = write(dir.path(), "en.txt", "But we had voted on them during the last part-session.\n");
    let hyp = write(dir.path(), "hyp.txt", "But we voted on them during the last part-session.\n");
    let mut outs = Vec::new();
    for (k, threads) in ["1", "2"].iter().enumerate() {
        let out = dir.path().join(format!("out{k}"));
        let o =
            run(&["build", "--fr", s(&fr), "--en", s(&en), "--hyp", s(&hyp), "--out", s(&out), "--threads", threads]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        outs.push(out);
    }
    let sheet = fs::read_to_string(outs[0].join("review.tsv")).unwrap();
    assert_eq!(sheet.lines().count(), 2);
    assert!(sheet.lines().nth(1).unwrap().contains("\tPasPerfect\tPast\t"));
    for f in ["review.tsv", "labeled.jsonl", "disagreements.jsonl", "stats.json"] {
        assert_eq!(fs::read(outs[0].join(f)).unwrap(), fs::read(outs[1].join(f)).unwrap(), "{f}");
    }
    let o = run(&[
        "build",
        "--fr",
        s(&fr),
        "--en",
        s(&en),
        "--hyp",
        s(&hyp),
        "--out",
        s(&dir.path().join("x")),
        "--ratios",
        "8:0:1",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn build_failure_removes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let fr = write(dir.path(), "fr.txt", "Le monde change.\nIl pleut.\n");
    let en = write(dir.path(), "en.txt", "The world is changing.\n");
    let out = dir.path().join("out");
    let o = run(&["build", "--fr", s(&fr), "--en", s(&en), "--hyp", s(&en), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn survey_reports() {
    let dir = tempfile::tempdir().unwrap();
    let fr = write(
        dir.path(),
        "fr.txt",
        "On avait fait des comparaisons.
Qui avait cru qu 'il serait facile de réunir l' Europe ?
Un versement similaire avait eu lieu l 'année précédente.
C 'est pour cela que la voie avait été tracée à Helsinki.
",
    );
    let en = write(
        dir.path(),
        "en.txt",
        "We had made comparisons.
Who had thought that it would be easy to reunite Europe?
A similar payment had taken place in the previous year.
That's why the way had been paved in Helsinki.
",
    );
    let o = run(&["survey", s(&fr), s(&en), "--tense", "plus-que-parfait"]);
    let out = stdout(&o);
    assert!(out.starts_with("PlusQueParfait: 4 occurrences\n"), "{out}");
    assert!(out.contains("PasPerfect\t4.00\t100.00%"), "{out}");

    let o = run(&["survey", s(&fr), s(&en), "--tense", "futur antérieur"]);
    assert_eq!(stdout(&o), "FuturAntérieur: 0 occurrences\n");

    let fr1 = write(dir.path(), "fr1.txt", "Mais on les avait votés lors de la dernière période de session.\n");
    let en1 = write(dir.path(), "en1.txt", "But we voted on them during the last part-session.\n");
    let o = run(&["survey", s(&fr1), s(&en1), "--tense", "PlusQueParfait", "--json"]);
    let rec: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(rec["proportions"]["Past"], 1.0);

    let o = run(&["survey", s(&fr1), s(&en1), "--tense", "aoriste"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("PlusQueParfait") && err.contains("Subjonctif"), "{err}");
}

#[test]
fn bleu_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let x = write(dir.path(), "x.txt", "We therefore abstained.\nThe world is changing.\n");
    assert_eq!(stdout(&run(&["bleu", s(&x), s(&x)])), "BLEU = 100.00\n");
    let o = run(&["report", s(&x)]);
    let out = stdout(&o);
    assert!(out.starts_with("2 tense structures in 2 sentences\n"), "{out}");
    assert!(out.contains("Past\t1\t50.00%"));
    let l = write(dir.path(), "l.txt", "Present+PrePerfect\nPresent\n");
    let o = run(&["report", s(&l), "--labels", "--json"]);
    let rec: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(rec["total"], 3);
}

#[test]
fn metadata_sidecar_and_lexicon_override() {
    let dir = tempfile::tempdir().unwrap();
    let x = write(dir.path(), "x.txt", "We shall see.\n");
    let meta = dir.path().join("meta.json");
    let o = run(&["tag", s(&x), "--shall-as-future", "--meta", s(&meta)]);
    assert_eq!(stdout(&o), "1\tFuture\tWe shall see.\n");
    let rec: serde_json::Value = serde_json::from_str(&fs::read_to_string(&meta).unwrap()).unwrap();
    assert_eq!(rec["global"]["shall_as_future"], true);
    assert!(rec["lexicon_version"].is_string());

    let empty_lex = dir.path().join("lex");
    fs::create_dir(&empty_lex).unwrap();
    let o = run(&["tag", s(&x), "--lexicon-dir", s(&empty_lex)]);
    assert_eq!(o.status.code(), Some(1));
}
