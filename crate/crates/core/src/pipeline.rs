//! Test-set construction from line-aligned French, English reference and
//! English hypothesis files.
//!
//! Stages run in a fixed order: [`clean`], [`filter_tense_rich`], [`split`],
//! [`label_triples`], [`select_disagreements`], then emission of JSONL
//! records and the review sheet. Every stage keeps input order, and labeling
//! is the only parallel step.

use std::collections::HashSet;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::ComparisonMode;
use crate::par;
use crate::rng::SplitMix64;
use crate::tense_en::{Labeler, SentenceLabel};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParallelPair {
    pub id: String,
    pub fr: String,
    pub en: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParallelTriple {
    pub id: String,
    pub fr: String,
    pub en_ref: String,
    pub en_hyp: String,
    pub ref_label: Option<SentenceLabel>,
    pub hyp_label: Option<SentenceLabel>,
}

impl ParallelTriple {
    pub fn new(
        id: impl Into<String>,
        fr: impl Into<String>,
        en_ref: impl Into<String>,
        en_hyp: impl Into<String>,
    ) -> Self {
        ParallelTriple {
            id: id.into(),
            fr: fr.into(),
            en_ref: en_ref.into(),
            en_hyp: en_hyp.into(),
            ref_label: None,
            hyp_label: None,
        }
    }
}

/// Read a newline-delimited UTF-8 file, dropping line terminators.
pub fn read_lines(path: &Path) -> Result<Vec<String>> {
    let bytes = fs::read(path)?;
    let text = String::from_utf8(bytes).map_err(|_| Error::Decode { path: path.display().to_string() })?;
    Ok(text.lines().map(str::to_owned).collect())
}

/// Pair line-aligned sides; ids are 1-based line numbers.
pub fn pair_lines(fr: Vec<String>, en: Vec<String>) -> Result<Vec<ParallelPair>> {
    if fr.len() != en.len() {
        return Err(Error::LengthMismatch { what: "English file".into(), left: en.len(), right: fr.len() });
    }
    Ok(fr
        .into_iter()
        .zip(en)
        .enumerate()
        .map(|(i, (fr, en))| ParallelPair { id: (i + 1).to_string(), fr, en })
        .collect())
}

const EN_CUES: &[&str] = &[
    "the", "of", "and", "to", "is", "are", "was", "were", "have", "has", "had", "will", "would", "should", "this",
    "that", "these", "those", "we", "you", "they", "it", "with", "for", "not", "be", "been", "which", "who", "what",
    "there", "their", "our", "from", "by", "at", "an", "or", "but", "its", "also", "can", "must",
];

const FR_CUES: &[&str] = &[
    "le", "la", "les", "des", "du", "de", "et", "est", "sont", "une", "un", "nous", "vous", "ils", "elle", "que",
    "qui", "pour", "dans", "avec", "pas", "ne", "ce", "cette", "ces", "sur", "au", "aux", "été", "avait", "mais", "ou",
    "il", "je", "on",
];

const FR_ELISIONS: &[&str] = &["l'", "d'", "qu'", "j'", "n'", "c'", "s'", "m'", "t'"];

/// Closed-class cue counts `(english, french)` of a sentence.
pub fn language_cues(text: &str) -> (usize, usize) {
    let lower = text.to_lowercase().replace('’', "'");
    let (mut en, mut fr) = (0, 0);
    for word in lower.split(|c: char| !(c.is_alphanumeric() || c == '\'' || c == '-')).filter(|w| !w.is_empty()) {
        if FR_ELISIONS.iter().any(|e| word.starts_with(e)) {
            fr += 1;
            continue;
        }
        let word = word.trim_matches('\'');
        if EN_CUES.contains(&word) || (word.len() > 4 && word.ends_with("ing")) {
            en += 1;
        }
        if FR_CUES.contains(&word) || word.chars().any(|c| "éèêàçùâîôûëï".contains(c)) {
            fr += 1;
        }
    }
    (en, fr)
}

/// A side is flagged when the other language's cues number at least 3 and at
/// least twice its own.
fn foreign(own: usize, other: usize) -> bool {
    other >= 3 && other >= 2 * own
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CleanReport {
    pub input: usize,
    pub dropped_empty: usize,
    pub dropped_language: usize,
    pub dropped_duplicate: usize,
    pub output: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CleanOptions {
    /// Drop exact repeats of an earlier (fr, en) pair.
    pub dedup: bool,
}

/// Drop pairs with an empty side, a side in the wrong language or, when
/// enabled, a repeated pair. Kept pairs are unchanged.
pub fn clean(pairs: Vec<ParallelPair>, options: CleanOptions) -> (Vec<ParallelPair>, CleanReport) {
    let mut report = CleanReport { input: pairs.len(), ..CleanReport::default() };
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(pairs.len());
    for p in pairs {
        if p.fr.trim().is_empty() || p.en.trim().is_empty() {
            report.dropped_empty += 1;
            continue;
        }
        let (fr_en, fr_fr) = language_cues(&p.fr);
        let (en_en, en_fr) = language_cues(&p.en);
        if foreign(fr_fr, fr_en) || foreign(en_en, en_fr) {
            report.dropped_language += 1;
            continue;
        }
        if options.dedup && !seen.insert((p.fr.clone(), p.en.clone())) {
            report.dropped_duplicate += 1;
            continue;
        }
        out.push(p);
    }
    report.output = out.len();
    (out, report)
}

/// Keep pairs whose English side has at least one finite verb chain.
pub fn filter_tense_rich(pairs: Vec<ParallelPair>, labeler: &Labeler<'_>) -> Vec<ParallelPair> {
    let keep = par::map(&pairs, |p| labeler.has_chain(&p.en));
    pairs.into_iter().zip(keep).filter_map(|(p, k)| k.then_some(p)).collect()
}

pub const MIN_SPLIT: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split<T> {
    pub train: Vec<T>,
    pub valid: Vec<T>,
    pub test: Vec<T>,
}

/// Partition sizes for `n` items: valid and test are floored, train takes
/// the remainder.
pub fn split_sizes(n: usize, ratios: [u32; 3]) -> Result<(usize, usize, usize)> {
    if ratios.contains(&0) {
        return Err(Error::InvalidRatio(format!("{}:{}:{} has a zero part", ratios[0], ratios[1], ratios[2])));
    }
    let sum: u128 = ratios.iter().map(|&r| r as u128).sum();
    let valid = (n as u128 * ratios[1] as u128 / sum) as usize;
    let test = (n as u128 * ratios[2] as u128 / sum) as usize;
    Ok((n - valid - test, valid, test))
}

/// Shuffle with [`SplitMix64`] seeded by `seed`, then slice train, valid and
/// test contiguously.
pub fn split<T>(items: Vec<T>, ratios: [u32; 3], seed: u64) -> Result<Split<T>> {
    let (n_train, n_valid, _) = split_sizes(items.len(), ratios)?;
    if items.len() < MIN_SPLIT {
        return Err(Error::TooSmall { size: items.len(), min: MIN_SPLIT });
    }
    let mut items = items;
    SplitMix64::new(seed).shuffle(&mut items);
    let test = items.split_off(n_train + n_valid);
    let valid = items.split_off(n_train);
    Ok(Split { train: items, valid, test })
}

/// Which triples to keep before labeling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Sample {
    Head {
        n: usize,
    },
    /// `n` items drawn with [`SplitMix64`], kept in input order.
    Random {
        n: usize,
        seed: u64,
    },
}

pub fn sample<T>(items: Vec<T>, how: Sample) -> Vec<T> {
    match how {
        Sample::Head { n } => items.into_iter().take(n).collect(),
        Sample::Random { n, seed } => {
            if n >= items.len() {
                return items;
            }
            let mut idx: Vec<usize> = (0..items.len()).collect();
            SplitMix64::new(seed).shuffle(&mut idx);
            let chosen: HashSet<usize> = idx.into_iter().take(n).collect();
            items.into_iter().enumerate().filter_map(|(i, t)| chosen.contains(&i).then_some(t)).collect()
        }
    }
}

/// Fill both labels of every triple.
pub fn label_triples(triples: Vec<ParallelTriple>, labeler: &Labeler<'_>) -> Vec<ParallelTriple> {
    let labels = par::map(&triples, |t| (labeler.label(&t.en_ref), labeler.label(&t.en_hyp)));
    triples
        .into_iter()
        .zip(labels)
        .map(|(mut t, (r, h))| {
            t.ref_label = Some(r);
            t.hyp_label = Some(h);
            t
        })
        .collect()
}

/// Triples whose reference and hypothesis labels differ under `mode`.
pub fn select_disagreements(triples: &[ParallelTriple], mode: ComparisonMode) -> Result<Vec<ParallelTriple>> {
    let mut out = Vec::new();
    for t in triples {
        let (Some(r), Some(h)) = (&t.ref_label, &t.hyp_label) else {
            return Err(Error::Unlabeled(t.id.clone()));
        };
        if !mode.equal(r, h) {
            out.push(t.clone());
        }
    }
    Ok(out)
}

pub const REVIEW_HEADER: [&str; 10] =
    ["id", "fr", "en_ref", "en_hyp", "ref_label", "hyp_label", "tense_ok", "meaning_ok", "label_ok", "correction"];

fn escape_field(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

fn unescape_field(s: &str) -> std::result::Result<String, String> {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('\\') => out.push('\\'),
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            other => return Err(format!("bad escape `\\{}`", other.map(String::from).unwrap_or_default())),
        }
    }
    Ok(out)
}

fn label_field(l: &Option<SentenceLabel>) -> String {
    l.as_ref().map(|l| l.to_string()).unwrap_or_default()
}

/// One review-sheet row. Reviewer columns are empty until filled in.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReviewRow {
    pub triple: Option<ParallelTriple>,
    pub tense_ok: String,
    pub meaning_ok: String,
    pub label_ok: String,
    pub correction: String,
}

/// Header plus one row per triple; labels must be present.
pub fn write_review_sheet<W: Write>(triples: &[ParallelTriple], out: W) -> Result<()> {
    let mut out = BufWriter::new(out);
    writeln!(out, "{}", REVIEW_HEADER.join("\t"))?;
    for t in triples {
        if t.ref_label.is_none() || t.hyp_label.is_none() {
            return Err(Error::Unlabeled(t.id.clone()));
        }
        let fields = [&t.id, &t.fr, &t.en_ref, &t.en_hyp].map(|s| escape_field(s));
        writeln!(out, "{}\t{}\t{}\t\t\t\t", fields.join("\t"), label_field(&t.ref_label), label_field(&t.hyp_label))?;
    }
    out.flush()?;
    Ok(())
}

/// Read a review sheet, reviewer columns included.
pub fn read_review_sheet<R: BufRead>(input: R, source: &str) -> Result<Vec<ReviewRow>> {
    let fmt = |line: usize, message: String| Error::Format { path: source.to_owned(), line, message };
    let mut rows = Vec::new();
    for (i, line) in input.split(b'\n').enumerate() {
        let n = i + 1;
        let line = line?;
        let line = String::from_utf8(line).map_err(|_| Error::Decode { path: source.to_owned() })?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        let cols: Vec<&str> = line.split('\t').collect();
        if n == 1 {
            if cols != REVIEW_HEADER {
                return Err(fmt(1, "missing review sheet header".into()));
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        if cols.len() != REVIEW_HEADER.len() {
            return Err(fmt(n, format!("expected {} columns, found {}", REVIEW_HEADER.len(), cols.len())));
        }
        let text = |k: usize| unescape_field(cols[k]).map_err(|m| fmt(n, m));
        let label = |k: usize| cols[k].parse::<SentenceLabel>().map_err(|e| fmt(n, e.to_string()));
        let triple = ParallelTriple {
            id: text(0)?,
            fr: text(1)?,
            en_ref: text(2)?,
            en_hyp: text(3)?,
            ref_label: Some(label(4)?),
            hyp_label: Some(label(5)?),
        };
        rows.push(ReviewRow {
            triple: Some(triple),
            tense_ok: text(6)?,
            meaning_ok: text(7)?,
            label_ok: text(8)?,
            correction: text(9)?,
        });
    }
    Ok(rows)
}

#[derive(Serialize, Deserialize)]
struct JsonRecord {
    id: String,
    fr: String,
    en_ref: String,
    en_hyp: String,
    ref_label: SentenceLabel,
    hyp_label: SentenceLabel,
}

/// One `{id, fr, en_ref, en_hyp, ref_label, hyp_label}` object per line.
pub fn write_jsonl<W: Write>(triples: &[ParallelTriple], out: W) -> Result<()> {
    let mut out = BufWriter::new(out);
    for t in triples {
        let (Some(r), Some(h)) = (&t.ref_label, &t.hyp_label) else {
            return Err(Error::Unlabeled(t.id.clone()));
        };
        let rec = JsonRecord {
            id: t.id.clone(),
            fr: t.fr.clone(),
            en_ref: t.en_ref.clone(),
            en_hyp: t.en_hyp.clone(),
            ref_label: r.clone(),
            hyp_label: h.clone(),
        };
        serde_json::to_writer(&mut out, &rec)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_jsonl<R: BufRead>(input: R, source: &str) -> Result<Vec<ParallelTriple>> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line.map_err(|e| match e.kind() {
            std::io::ErrorKind::InvalidData => Error::Decode { path: source.to_owned() },
            _ => Error::Io(e),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: JsonRecord = serde_json::from_str(&line).map_err(|e| Error::Format {
            path: source.to_owned(),
            line: i + 1,
            message: e.to_string(),
        })?;
        out.push(ParallelTriple {
            id: rec.id,
            fr: rec.fr,
            en_ref: rec.en_ref,
            en_hyp: rec.en_hyp,
            ref_label: Some(rec.ref_label),
            hyp_label: Some(rec.hyp_label),
        });
    }
    Ok(out)
}

/// Settings of one [`build`] run, echoed into `stats.json`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BuildConfig {
    pub seed: u64,
    pub ratios: [u32; 3],
    pub mode: ComparisonMode,
    pub dedup: bool,
    pub sample: Option<Sample>,
    pub shall_as_future: bool,
}

impl Default for BuildConfig {
    fn default() -> Self {
        BuildConfig {
            seed: 42,
            ratios: [8, 1, 1],
            mode: ComparisonMode::Sequence,
            dedup: false,
            sample: None,
            shall_as_future: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageCount {
    pub stage: &'static str,
    pub input: usize,
    pub output: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SplitSizes {
    pub train: usize,
    pub valid: usize,
    pub test: usize,
}

/// Contents of `stats.json`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BuildStats {
    pub toolkit_version: &'static str,
    pub lexicon_version: String,
    pub config: BuildConfig,
    pub stages: Vec<StageCount>,
    pub clean: CleanReport,
    /// `None` when the filtered corpus is below [`MIN_SPLIT`] pairs.
    pub split: Option<SplitSizes>,
}

/// Files written by [`build`], relative to the output directory.
pub const BUILD_FILES: &[&str] = &[
    "train.fr",
    "train.en",
    "valid.fr",
    "valid.en",
    "test.fr",
    "test.en",
    "labeled.jsonl",
    "disagreements.jsonl",
    "review.tsv",
    "stats.json",
];

fn pairs_text(pairs: &[ParallelPair]) -> (String, String) {
    let mut fr = String::new();
    let mut en = String::new();
    for p in pairs {
        fr.push_str(&p.fr);
        fr.push('\n');
        en.push_str(&p.en);
        en.push('\n');
    }
    (fr, en)
}

/// Run the whole construction on in-memory line-aligned sides and write the
/// artifacts to `outdir`. On any error no artifact is left behind.
pub fn build(
    fr: Vec<String>,
    en_ref: Vec<String>,
    en_hyp: Vec<String>,
    config: &BuildConfig,
    labeler: &Labeler<'_>,
    outdir: &Path,
) -> Result<BuildStats> {
    if en_hyp.len() != fr.len() {
        return Err(Error::LengthMismatch { what: "hypothesis file".into(), left: en_hyp.len(), right: fr.len() });
    }
    let pairs = pair_lines(fr, en_ref)?;
    let mut stages = Vec::new();

    let (pairs, clean_report) = clean(pairs, CleanOptions { dedup: config.dedup });
    stages.push(StageCount { stage: "clean", input: clean_report.input, output: clean_report.output });

    let n = pairs.len();
    let pairs = filter_tense_rich(pairs, labeler);
    stages.push(StageCount { stage: "filter_tense_rich", input: n, output: pairs.len() });

    let mut files: Vec<(&str, String)> = Vec::new();
    let split_sizes = if pairs.len() >= MIN_SPLIT {
        let s = split(pairs.clone(), config.ratios, config.seed)?;
        for ((fr_name, en_name), part) in [
            (("train.fr", "train.en"), &s.train),
            (("valid.fr", "valid.en"), &s.valid),
            (("test.fr", "test.en"), &s.test),
        ] {
            let (f, e) = pairs_text(part);
            files.push((fr_name, f));
            files.push((en_name, e));
        }
        Some(SplitSizes { train: s.train.len(), valid: s.valid.len(), test: s.test.len() })
    } else {
        None
    };

    let mut triples: Vec<ParallelTriple> = pairs
        .into_iter()
        .map(|p| {
            let line: usize = p.id.parse().expect("ids are line numbers");
            ParallelTriple::new(p.id, p.fr, p.en, en_hyp[line - 1].clone())
        })
        .collect();
    if let Some(how) = config.sample {
        let n = triples.len();
        triples = sample(triples, how);
        stages.push(StageCount { stage: "sample", input: n, output: triples.len() });
    }
    let triples = label_triples(triples, labeler);
    stages.push(StageCount { stage: "label", input: triples.len(), output: triples.len() });

    let selected = select_disagreements(&triples, config.mode)?;
    stages.push(StageCount { stage: "select_disagreements", input: triples.len(), output: selected.len() });

    let mut labeled = Vec::new();
    write_jsonl(&triples, &mut labeled)?;
    let mut disagreements = Vec::new();
    write_jsonl(&selected, &mut disagreements)?;
    let mut review = Vec::new();
    write_review_sheet(&selected, &mut review)?;

    let stats = BuildStats {
        toolkit_version: crate::VERSION,
        lexicon_version: labeler.lexicon.version().to_owned(),
        config: config.clone(),
        stages,
        clean: clean_report,
        split: split_sizes,
    };
    let mut stats_json = serde_json::to_string_pretty(&stats)?;
    stats_json.push('\n');

    files.push(("labeled.jsonl", String::from_utf8(labeled).expect("json is UTF-8")));
    files.push(("disagreements.jsonl", String::from_utf8(disagreements).expect("json is UTF-8")));
    files.push(("review.tsv", String::from_utf8(review).expect("sheet is UTF-8")));
    files.push(("stats.json", stats_json));
    write_all_or_nothing(outdir, &files)?;
    Ok(stats)
}

/// Write every file or, on failure, remove the ones already written and the
/// directory if this call created it.
fn write_all_or_nothing(outdir: &Path, files: &[(&str, String)]) -> Result<()> {
    let created = !outdir.exists();
    let mut written: Vec<PathBuf> = Vec::new();
    let result = (|| -> Result<()> {
        fs::create_dir_all(outdir)?;
        for name in BUILD_FILES {
            let path = outdir.join(name);
            if path.exists() && !files.iter().any(|(f, _)| f == name) {
                fs::remove_file(&path)?;
            }
        }
        for (name, content) in files {
            let path = outdir.join(name);
            fs::write(&path, content)?;
            written.push(path);
        }
        Ok(())
    })();
    if result.is_err() {
        for p in &written {
            let _ = fs::remove_file(p);
        }
        if created {
            let _ = fs::remove_dir_all(outdir);
        }
    }
    result
}

/// [`build`] over three line-aligned files.
pub fn build_files(
    fr: &Path,
    en_ref: &Path,
    en_hyp: &Path,
    config: &BuildConfig,
    labeler: &Labeler<'_>,
    outdir: &Path,
) -> Result<BuildStats> {
    build(read_lines(fr)?, read_lines(en_ref)?, read_lines(en_hyp)?, config, labeler, outdir)
}

/// Read a review sheet from disk.
pub fn read_review_sheet_file(path: &Path) -> Result<Vec<ReviewRow>> {
    let file = fs::File::open(path)?;
    read_review_sheet(BufReader::new(file), &path.display().to_string())
}
