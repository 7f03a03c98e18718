use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use tensecheck::annotate::AnnotateOptions;
use tensecheck::bleu::corpus_bleu;
use tensecheck::metrics::{confusion, distribution, tense_accuracy, ComparisonMode, NULL};
use tensecheck::pipeline::{build_files, read_lines, BuildConfig, Sample};
use tensecheck::tense_en::Labeler;
use tensecheck::tense_fr::{detect_fr, tense_survey};
use tensecheck::{Error, FrenchTense, Language, Lexicon, Result, SentenceLabel, TenseCategory};

/// Tense labeling, tense accuracy scoring and test-set construction for
/// French-English machine translation.
#[derive(Parser, Debug)]
#[command(name = "tensecheck", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Directory of lexicon tables replacing the built-in ones.
    #[arg(long, global = true, value_name = "DIR")]
    lexicon_dir: Option<PathBuf>,
    /// Tag `shall` as the future auxiliary instead of a modal.
    #[arg(long, global = true)]
    shall_as_future: bool,
    /// Worker threads for labeling [default: all cores].
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    /// Write a JSON run record (config, toolkit and lexicon versions).
    #[arg(long, global = true, value_name = "PATH")]
    meta: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Label every line of a file with its tense structures.
    Tag {
        input: PathBuf,
        #[arg(long, default_value = "en")]
        lang: Language,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Tense prediction accuracy of hypotheses against references.
    Score {
        reference: PathBuf,
        hypothesis: PathBuf,
        #[arg(long, default_value = "multiset")]
        mode: ComparisonMode,
        /// Inputs hold label strings such as `Present+Future` instead of
        /// sentences.
        #[arg(long)]
        labels: bool,
        /// Print one JSON record instead of the text report.
        #[arg(long)]
        json: bool,
    },
    /// Build test-set candidates from aligned French, reference and
    /// hypothesis files.
    Build {
        #[arg(long)]
        fr: PathBuf,
        #[arg(long)]
        en: PathBuf,
        #[arg(long)]
        hyp: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Train, valid and test proportions.
        #[arg(long, default_value = "8:1:1", value_parser = parse_ratios)]
        ratios: [u32; 3],
        #[arg(long, default_value = "sequence")]
        mode: ComparisonMode,
        /// Drop repeated (fr, en) pairs while cleaning.
        #[arg(long)]
        dedup: bool,
        /// Keep only the first N pairs before labeling.
        #[arg(long, value_name = "N", conflicts_with = "sample_random")]
        sample_head: Option<usize>,
        /// Keep N pairs drawn with the seed before labeling.
        #[arg(long, value_name = "N")]
        sample_random: Option<usize>,
    },
    /// How one French tense is rendered in English across a parallel corpus.
    Survey {
        fr: PathBuf,
        en: PathBuf,
        #[arg(long)]
        tense: String,
        #[arg(long)]
        json: bool,
    },
    /// Corpus BLEU of hypotheses against references.
    Bleu { reference: PathBuf, hypothesis: PathBuf },
    /// Distribution of tense structures over a file.
    Report {
        input: PathBuf,
        /// Input holds label strings instead of sentences.
        #[arg(long)]
        labels: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Jsonl,
    Tsv,
}

fn parse_ratios(s: &str) -> std::result::Result<[u32; 3], String> {
    let parts: Vec<&str> = s.split(':').collect();
    let nums: Vec<u32> = parts.iter().filter_map(|p| p.trim().parse().ok()).collect();
    match nums[..] {
        [a, b, c] if parts.len() == 3 && a > 0 && b > 0 && c > 0 => Ok([a, b, c]),
        _ => Err(format!("expected three positive integers like 8:1:1, got `{s}`")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tensecheck: {e}");
            ExitCode::from(if e.is_contract_violation() { 2 } else { 1 })
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let owned;
    let lexicon: &Lexicon = match &cli.global.lexicon_dir {
        Some(dir) => {
            owned = Lexicon::load_dir(dir)?;
            &owned
        }
        None => Lexicon::builtin(),
    };
    let labeler = Labeler::new(lexicon, AnnotateOptions { shall_as_future: cli.global.shall_as_future });
    if let Some(path) = &cli.global.meta {
        write_meta(path, &cli, lexicon)?;
    }
    let threads = cli.global.threads;
    tensecheck::par::with_threads(threads, || dispatch(&cli.command, &labeler))?
}

fn write_meta(path: &Path, cli: &Cli, lexicon: &Lexicon) -> Result<()> {
    let record = json!({
        "toolkit_version": tensecheck::VERSION,
        "lexicon_version": lexicon.version(),
        "parallel": tensecheck::par::is_parallel(),
        "global": {
            "lexicon_dir": cli.global.lexicon_dir,
            "shall_as_future": cli.global.shall_as_future,
            "threads": cli.global.threads,
        },
        "command": format!("{:?}", cli.command),
    });
    let mut f = File::create(path)?;
    serde_json::to_writer_pretty(&mut f, &record)?;
    f.write_all(b"\n")?;
    Ok(())
}

fn dispatch(command: &Command, labeler: &Labeler<'_>) -> Result<()> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match command {
        Command::Tag { input, lang, format } => cmd_tag(&mut out, labeler, input, *lang, *format)?,
        Command::Score { reference, hypothesis, mode, labels, json } => {
            cmd_score(&mut out, labeler, reference, hypothesis, *mode, *labels, *json)?
        }
        Command::Build { fr, en, hyp, out: dir, seed, ratios, mode, dedup, sample_head, sample_random } => {
            let sample = match (sample_head, sample_random) {
                (Some(n), _) => Some(Sample::Head { n: *n }),
                (_, Some(n)) => Some(Sample::Random { n: *n, seed: *seed }),
                _ => None,
            };
            let config = BuildConfig {
                seed: *seed,
                ratios: *ratios,
                mode: *mode,
                dedup: *dedup,
                sample,
                shall_as_future: labeler.options.shall_as_future,
            };
            let stats = build_files(fr, en, hyp, &config, labeler, dir)?;
            for s in &stats.stages {
                writeln!(out, "{}\t{}\t{}", s.stage, s.input, s.output)?;
            }
            if let Some(s) = stats.split {
                writeln!(out, "split\t{}\t{}\t{}", s.train, s.valid, s.test)?;
            }
        }
        Command::Survey { fr, en, tense, json } => cmd_survey(&mut out, labeler, fr, en, tense, *json)?,
        Command::Bleu { reference, hypothesis } => {
            let refs = read_lines(reference)?;
            let hyps = read_lines(hypothesis)?;
            check_aligned(&refs, &hyps, hypothesis)?;
            writeln!(out, "BLEU = {:.2}", corpus_bleu(&refs, &hyps)?)?;
        }
        Command::Report { input, labels, json } => {
            let lines = read_lines(input)?;
            let labels = to_labels(&lines, *labels, labeler, input)?;
            let d = distribution(&labels)?;
            if *json {
                writeln!(out, "{}", serde_json::to_string(&d)?)?;
            } else {
                writeln!(out, "{} tense structures in {} sentences", d.total, d.sentences)?;
                writeln!(out, "category\tcount\tproportion")?;
                for c in &d.categories {
                    writeln!(out, "{}\t{}\t{:.2}%", c.category, c.count, 100.0 * c.proportion)?;
                }
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn cmd_tag<W: Write>(out: &mut W, labeler: &Labeler<'_>, input: &Path, lang: Language, format: Format) -> Result<()> {
    let lines = read_lines(input)?;
    if format == Format::Tsv {
        writeln!(out, "id\tlabel\ttext")?;
    }
    match lang {
        Language::En => {
            let analyses = tensecheck::par::map(&lines, |l| labeler.analyze(l));
            for (i, (line, a)) in lines.iter().zip(analyses).enumerate() {
                let id = i + 1;
                match format {
                    Format::Text | Format::Tsv => writeln!(out, "{id}\t{}\t{line}", a.label)?,
                    Format::Jsonl => {
                        let chains: Vec<_> = a
                            .chains
                            .iter()
                            .zip(a.label.categories())
                            .map(|(c, cat)| {
                                let words: Vec<&str> =
                                    c.indices.iter().map(|&k| a.tokens[k].token.surface.as_str()).collect();
                                json!({ "category": cat, "span": [c.span.0, c.span.1], "words": words })
                            })
                            .collect();
                        let rec = json!({ "id": id, "text": line, "label": a.label, "chains": chains });
                        writeln!(out, "{rec}")?;
                    }
                }
            }
        }
        Language::Fr => {
            let detections = tensecheck::par::map(&lines, |l| detect_fr(l, labeler.lexicon));
            for (i, (line, d)) in lines.iter().zip(detections).enumerate() {
                let id = i + 1;
                let label: Vec<String> = d.iter().map(|x| x.tense.to_string()).collect();
                let label = label.join("+");
                match format {
                    Format::Text | Format::Tsv => writeln!(out, "{id}\t{label}\t{line}")?,
                    Format::Jsonl => {
                        let rec = json!({ "id": id, "text": line, "label": label, "structures": d });
                        writeln!(out, "{rec}")?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn check_aligned(refs: &[String], hyps: &[String], hyp_path: &Path) -> Result<()> {
    if refs.len() != hyps.len() {
        return Err(Error::LengthMismatch {
            what: hyp_path.display().to_string(),
            left: hyps.len(),
            right: refs.len(),
        });
    }
    Ok(())
}

fn to_labels(lines: &[String], are_labels: bool, labeler: &Labeler<'_>, path: &Path) -> Result<Vec<SentenceLabel>> {
    if !are_labels {
        return Ok(tensecheck::par::map(lines, |l| labeler.label(l)));
    }
    lines
        .iter()
        .enumerate()
        .map(|(i, l)| {
            l.trim().parse().map_err(|e: Error| Error::Format {
                path: path.display().to_string(),
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}

fn cmd_score<W: Write>(
    out: &mut W,
    labeler: &Labeler<'_>,
    reference: &Path,
    hypothesis: &Path,
    mode: ComparisonMode,
    labels: bool,
    json_out: bool,
) -> Result<()> {
    let refs = read_lines(reference)?;
    let hyps = read_lines(hypothesis)?;
    check_aligned(&refs, &hyps, hypothesis)?;
    let refs = to_labels(&refs, labels, labeler, reference)?;
    let hyps = to_labels(&hyps, labels, labeler, hypothesis)?;
    let acc = tense_accuracy(&refs, &hyps, mode)?;
    let m = confusion(&refs, &hyps)?;
    if json_out {
        let rec = json!({
            "mode": mode,
            "n_correct": acc.n_correct,
            "n_total": acc.n_total,
            "accuracy": acc.accuracy,
            "structure_accuracy": m.structure_accuracy(),
            "confusion": m,
            "toolkit_version": tensecheck::VERSION,
            "lexicon_version": labeler.lexicon.version(),
        });
        writeln!(out, "{rec}")?;
        return Ok(());
    }
    writeln!(out, "# tensecheck {} lexicon {} mode {}", tensecheck::VERSION, labeler.lexicon.version(), mode)?;
    writeln!(out, "N_c\t{}", acc.n_correct)?;
    writeln!(out, "N_t\t{}", acc.n_total)?;
    writeln!(out, "accuracy\t{:.4}", acc.accuracy)?;
    writeln!(out, "category\treference\tcorrect\tunaligned")?;
    for (c, row, correct) in m.per_category() {
        writeln!(out, "{c}\t{row}\t{correct}\t{}", m.cells[c.index()][NULL])?;
    }
    match m.structure_accuracy() {
        Some(s) => writeln!(out, "structure accuracy\t{s:.4}")?,
        None => writeln!(out, "structure accuracy\tn/a")?,
    }
    Ok(())
}

fn cmd_survey<W: Write>(
    out: &mut W,
    labeler: &Labeler<'_>,
    fr: &Path,
    en: &Path,
    tense: &str,
    json_out: bool,
) -> Result<()> {
    let target: FrenchTense = tense.parse()?;
    let fr = read_lines(fr)?;
    let en_lines = read_lines(en)?;
    check_aligned(&fr, &en_lines, en)?;
    let pairs: Vec<(String, String)> = fr.into_iter().zip(en_lines).collect();
    let s = tense_survey(&pairs, target, labeler);
    if json_out {
        writeln!(out, "{}", serde_json::to_string(&s)?)?;
        return Ok(());
    }
    writeln!(out, "{}: {} occurrences", s.target, s.occurrences)?;
    if s.unmatched > 0 {
        writeln!(out, "without English structure: {}", s.unmatched)?;
    }
    if s.recorded() == 0 {
        return Ok(());
    }
    writeln!(out, "category\tcount\tproportion")?;
    for c in TenseCategory::ALL {
        let n = s.counts.get(&c).copied().unwrap_or(0.0);
        let p = s.proportions.get(&c).copied().unwrap_or(0.0);
        writeln!(out, "{c}\t{n:.2}\t{:.2}%", 100.0 * p)?;
    }
    Ok(())
}
