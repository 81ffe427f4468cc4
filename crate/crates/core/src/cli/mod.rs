//! The `vidtriage` command. Every subcommand reads files, writes files
//! into the work directory and prints a one-line summary on stdout; logs go
//! to stderr.
//!
//! Exit status: 0 on success, 1 for invalid input, 2 for internal or
//! numerical failures, 64 for usage errors.

mod config;

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

pub use config::PipelineConfig;

use crate::classify::{
    self, assemble_features, evaluate, features_from_tsv, features_to_tsv, impute_annotations, matrix_columns, predict,
    report, test_rows, text_feature_names, train_classifier, ClfConfig, ClfMetrics, LrModel, Target,
};
use crate::corpus::{self, dedupe_ids, load_corpus, CorpusPaths};
use crate::medterm::{
    build_ner_corpus, load_dictionary, read_conll, unique_medical_terms, write_conll, NerDoc, ProjectionMode,
    SemanticType, Stopwords,
};
use crate::seqtag::{evaluate_docs, tag_docs, train_tagger, Arch, TagMetrics, TaggerModel};
use crate::split::split_train_test;
use crate::synth::synth_corpus;
use crate::textfeat::{Lexicon, TextLexicons};
use crate::tsv::Table;
use crate::{data, Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_INTERNAL: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "vidtriage", version, about = "Patient-education video triage pipeline")]
pub struct Cli {
    /// TOML pipeline configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Random seed; required by the training and synthesis commands.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Directory for stage outputs (default: current directory).
    #[arg(long, global = true)]
    pub work_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate and summarize corpus files; optionally convert API responses
    /// or check search results against the keyword list.
    Ingest {
        /// Directory with videos/transcripts/ocr/labels .jsonl files.
        #[arg(long)]
        corpus_dir: Option<PathBuf>,
        /// Raw metadata-list API responses to flatten into videos.jsonl.
        #[arg(long)]
        api_response: Vec<PathBuf>,
        /// JSON Lines search results with `keyword` and `video_id` fields.
        #[arg(long)]
        search_results: Option<PathBuf>,
        /// Keyword list (default: the shipped list).
        #[arg(long)]
        keywords: Option<PathBuf>,
    },
    /// Compute text features for every video.
    Featurize {
        #[arg(long)]
        corpus_dir: Option<PathBuf>,
    },
    /// Project the term dictionary onto titles and descriptions.
    BuildNerCorpus {
        #[arg(long)]
        corpus_dir: Option<PathBuf>,
        #[arg(long)]
        dictionary: Option<PathBuf>,
        #[arg(long, value_enum)]
        mode: Option<ProjectionMode>,
        /// Semantic type codes to keep (default: all).
        #[arg(long, value_delimiter = ',')]
        allowed: Vec<String>,
    },
    /// Train a tagger on the training videos of the NER corpus.
    TrainTagger {
        #[arg(long, value_enum)]
        arch: Arch,
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
    /// Tag every sentence of a CoNLL file with a trained tagger.
    Tag {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score a tagger on its held-out videos.
    EvalTagger {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
    /// Join text features, medical term counts and labels.
    Assemble {
        #[arg(long)]
        corpus_dir: Option<PathBuf>,
        /// Tagged CoNLL file used for unique medical term counts.
        #[arg(long)]
        ner: Option<PathBuf>,
    },
    /// Train one logistic-regression classifier.
    TrainClf {
        #[arg(long, value_enum)]
        target: Target,
        #[arg(long)]
        features: Option<PathBuf>,
        #[arg(long)]
        l2: Option<f64>,
    },
    /// Predict labels for every video in the feature matrix.
    Classify {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        features: Option<PathBuf>,
        /// Fill missing annotation features from the medical information and
        /// understandability classifiers.
        #[arg(long)]
        impute_annotations: bool,
    },
    /// Score a classifier on its held-out videos.
    EvalClf {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        features: Option<PathBuf>,
    },
    /// Evaluate every trained tagger and classifier in the work directory.
    Eval,
    /// Write a report table: 2 (taggers), 5 (classifiers), 6 (coefficients),
    /// 7 (recommendation).
    Report {
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(["2", "5", "6", "7"]))]
        table: String,
    },
    /// Generate a synthetic corpus and dictionary.
    Synth {
        #[arg(long, default_value_t = 100)]
        videos: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

struct Ctx {
    cfg: PipelineConfig,
    seed: Option<u64>,
    work_dir: PathBuf,
}

impl Ctx {
    fn seed(&self, command: &str) -> CliResult<u64> {
        self.seed
            .ok_or_else(|| Failure::Usage(format!("{command} requires --seed (or `seed` in the config file)")))
    }

    fn corpus_dir(&self, flag: Option<PathBuf>) -> PathBuf {
        flag.or_else(|| self.cfg.corpus_dir.clone())
            .unwrap_or_else(|| self.work_dir.join("corpus"))
    }

    fn out(&self, name: &str) -> PathBuf {
        self.work_dir.join(name)
    }

    fn lexicons(&self) -> Result<TextLexicons> {
        let mut lex = TextLexicons::default();
        if let Some(p) = &self.cfg.transition_words {
            lex.transition = Lexicon::from_file(p)?;
        }
        if let Some(p) = &self.cfg.summary_words {
            lex.summary = Lexicon::from_file(p)?;
        }
        if let Some(p) = &self.cfg.active_verbs {
            lex.verbs = Lexicon::from_file(p)?;
        }
        Ok(lex)
    }

    fn stopwords(&self) -> Result<Stopwords> {
        match &self.cfg.stopwords {
            Some(p) => Ok(Stopwords::from_text(&read(p)?)),
            None => Ok(Stopwords::default()),
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    write(path, &text)
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|e| Error::from_json(path.display().to_string(), &text, &e))
}

fn read_docs(path: &Path) -> Result<Vec<NerDoc>> {
    read_conll(&path.display().to_string(), &read(path)?)
}

fn read_features(path: &Path) -> Result<Vec<classify::FeatureVector>> {
    features_from_tsv(&path.display().to_string(), &read(path)?)
}

/// Runs the command line `args` (including the program name) and returns
/// the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(summary) => {
            println!("{summary}");
            EXIT_OK
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e}");
            if e.is_validation() {
                EXIT_INVALID
            } else {
                EXIT_INTERNAL
            }
        }
    }
}

fn execute(cli: Cli) -> CliResult<String> {
    let cfg = match &cli.config {
        Some(p) => PipelineConfig::load(p)?,
        None => PipelineConfig::default(),
    };
    let ctx = Ctx {
        seed: cli.seed.or(cfg.seed),
        work_dir: cli
            .work_dir
            .clone()
            .or_else(|| cfg.work_dir.clone())
            .unwrap_or_else(|| PathBuf::from(".")),
        cfg,
    };
    match cli.command {
        Command::Ingest {
            corpus_dir,
            api_response,
            search_results,
            keywords,
        } => ingest(&ctx, corpus_dir, api_response, search_results, keywords),
        Command::Featurize { corpus_dir } => featurize(&ctx, corpus_dir),
        Command::BuildNerCorpus {
            corpus_dir,
            dictionary,
            mode,
            allowed,
        } => build_ner(&ctx, corpus_dir, dictionary, mode, allowed),
        Command::TrainTagger { arch, corpus } => train_tagger_cmd(&ctx, arch, corpus),
        Command::Tag { model, input, out } => tag_cmd(&ctx, &model, input, out),
        Command::EvalTagger { model, corpus } => Ok(eval_tagger_cmd(&ctx, &model, corpus)?),
        Command::Assemble { corpus_dir, ner } => assemble(&ctx, corpus_dir, ner),
        Command::TrainClf { target, features, l2 } => train_clf(&ctx, target, features, l2),
        Command::Classify {
            model,
            features,
            impute_annotations,
        } => classify_cmd(&ctx, &model, features, impute_annotations),
        Command::EvalClf { model, features } => Ok(eval_clf_cmd(&ctx, &model, features)?),
        Command::Eval => eval_all(&ctx),
        Command::Report { table } => report_cmd(&ctx, &table),
        Command::Synth { videos, out } => {
            let seed = ctx.seed("synth")?;
            let dir = out.unwrap_or_else(|| ctx.corpus_dir(None));
            synth_corpus(videos, seed).write(&dir)?;
            Ok(format!("wrote {videos} synthetic videos to {}", dir.display()))
        }
    }
}

#[derive(Deserialize)]
struct SearchHit {
    keyword: String,
    video_id: String,
}

fn ingest(
    ctx: &Ctx,
    corpus_dir: Option<PathBuf>,
    api_response: Vec<PathBuf>,
    search_results: Option<PathBuf>,
    keywords: Option<PathBuf>,
) -> CliResult<String> {
    if !api_response.is_empty() {
        let mut records = Vec::new();
        for path in &api_response {
            records.extend(corpus::youtube::parse_list_response(&read(path)?)?);
        }
        let ids: Vec<&str> = records.iter().map(|r| r.video_id.as_str()).collect();
        let unique = dedupe_ids(&ids);
        let mut seen = BTreeSet::new();
        let mut text = String::new();
        for r in records.iter().filter(|r| seen.insert(r.video_id.clone())) {
            text.push_str(&serde_json::to_string(r).expect("serializable"));
            text.push('\n');
        }
        let out = ctx.out("videos.jsonl");
        write(&out, &text)?;
        return Ok(format!(
            "{} videos ({} unique) written to {}",
            records.len(),
            unique.len(),
            out.display()
        ));
    }
    if let Some(path) = search_results {
        let allowed: BTreeSet<String> = match &keywords {
            Some(k) => data::entries(&read(k)?).collect(),
            None => data::keywords().into_iter().collect(),
        };
        let (hits, _) = corpus::read_jsonl(&path, |context, line| {
            let hit: SearchHit = corpus::parse_object(context, line)?;
            let keyword = hit.keyword.trim().to_lowercase();
            if !allowed.contains(&keyword) {
                return Err(Error::schema(
                    context,
                    format!("keyword {:?} is not in the keyword list", hit.keyword),
                ));
            }
            Ok(hit.video_id)
        })?;
        let unique = dedupe_ids(&hits);
        let out = ctx.out("search_ids.txt");
        write(&out, &unique.iter().map(|id| format!("{id}\n")).collect::<String>())?;
        return Ok(format!(
            "{} search results, {} unique video ids",
            hits.len(),
            unique.len()
        ));
    }
    let (_, summary) = load_corpus(&CorpusPaths::in_dir(&ctx.corpus_dir(corpus_dir)))?;
    for w in &summary.warnings {
        log::warn!("{w}");
    }
    Ok(summary.to_string())
}

fn featurize(ctx: &Ctx, corpus_dir: Option<PathBuf>) -> CliResult<String> {
    let (store, _) = load_corpus(&CorpusPaths::in_dir(&ctx.corpus_dir(corpus_dir)))?;
    let rows = classify::featurize(&store, &ctx.lexicons()?);
    let out = ctx.out("text_features.tsv");
    write(&out, &features_to_tsv(&rows, text_feature_names()))?;
    Ok(format!("{} videos featurized into {}", rows.len(), out.display()))
}

fn build_ner(
    ctx: &Ctx,
    corpus_dir: Option<PathBuf>,
    dictionary: Option<PathBuf>,
    mode: Option<ProjectionMode>,
    allowed: Vec<String>,
) -> CliResult<String> {
    let corpus_dir = ctx.corpus_dir(corpus_dir);
    let (store, _) = load_corpus(&CorpusPaths::in_dir(&corpus_dir))?;
    let allowed: BTreeSet<SemanticType> = if allowed.is_empty() {
        SemanticType::ALL.iter().copied().collect()
    } else {
        allowed
            .iter()
            .map(|c| c.parse().map_err(|e| Error::Invalid(format!("--allowed: {e}"))))
            .collect::<Result<_>>()?
    };
    let dict_path = dictionary
        .or_else(|| ctx.cfg.dictionary.clone())
        .unwrap_or_else(|| corpus_dir.join("dictionary.tsv"));
    let (dict, report) = load_dictionary(&dict_path, &allowed, &ctx.stopwords()?)?;
    let docs = build_ner_corpus(&store, &dict, mode.unwrap_or(ctx.cfg.projection));
    let out = ctx.out("ner.conll");
    write(&out, &write_conll(&docs))?;
    let sentences: Vec<_> = docs.iter().flat_map(|d| d.sentences.iter().cloned()).collect();
    Ok(format!(
        "{} documents, {} sentences, {} unique medical terms ({} dictionary rows kept, {} skipped)",
        docs.len(),
        sentences.len(),
        unique_medical_terms(&sentences),
        report.kept,
        report.rows - report.kept
    ))
}

/// Documents split at the video level: `(train, test ids)`.
fn split_docs(docs: Vec<NerDoc>, fraction: f64, seed: u64) -> (Vec<NerDoc>, Vec<String>) {
    let mut ids: Vec<String> = docs.iter().map(|d| d.id.clone()).collect();
    ids.sort();
    let (train_ids, mut test_ids) = split_train_test(&ids, fraction, seed);
    let train_ids: BTreeSet<String> = train_ids.into_iter().collect();
    test_ids.sort();
    let train = docs.into_iter().filter(|d| train_ids.contains(&d.id)).collect();
    (train, test_ids)
}

fn train_tagger_cmd(ctx: &Ctx, arch: Arch, corpus: Option<PathBuf>) -> CliResult<String> {
    let seed = ctx.seed("train-tagger")?;
    let corpus = corpus.unwrap_or_else(|| ctx.out("ner.conll"));
    let docs = read_docs(&corpus)?;
    let (train, test_ids) = split_docs(docs, ctx.cfg.split_fraction, seed);
    let config = crate::seqtag::TrainConfig {
        seed,
        ..ctx.cfg.tagger.clone()
    };
    let (model, report) = train_tagger(arch, &train, test_ids, &config)?;
    let out = ctx.out(&format!("tagger_{arch}.json"));
    model.save(&out)?;
    let mut losses = Table::new(["epoch", "train_loss", "dev_loss"]);
    for (i, (t, d)) in report.train_losses.iter().zip(&report.dev_losses).enumerate() {
        losses.push(vec![i.to_string(), t.to_string(), d.to_string()]);
    }
    write(&ctx.out(&format!("tagger_{arch}_losses.tsv")), &losses.to_tsv())?;
    Ok(format!(
        "{arch} tagger trained on {} sentences from {} videos ({} epochs, best {}) -> {}",
        model.meta.train_sentences,
        model.meta.train_docs.len(),
        report.epochs_run,
        report.best_epoch,
        out.display()
    ))
}

fn tag_cmd(ctx: &Ctx, model: &Path, input: Option<PathBuf>, out: Option<PathBuf>) -> CliResult<String> {
    let model = TaggerModel::load(model)?;
    let docs = read_docs(&input.unwrap_or_else(|| ctx.out("ner.conll")))?;
    let tagged = tag_docs(&model, &docs)?;
    let out = out.unwrap_or_else(|| ctx.out(&format!("tagged_{}.conll", model.arch())));
    write(&out, &write_conll(&tagged))?;
    let n: usize = tagged.iter().map(|d| d.sentences.len()).sum();
    Ok(format!(
        "tagged {n} sentences from {} videos -> {}",
        tagged.len(),
        out.display()
    ))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TaggerEval {
    model: Arch,
    test_videos: usize,
    test_sentences: usize,
    token: TagMetrics,
    span: TagMetrics,
}

fn eval_tagger_cmd(ctx: &Ctx, model_path: &Path, corpus: Option<PathBuf>) -> Result<String> {
    let model = TaggerModel::load(model_path)?;
    let docs = read_docs(&corpus.unwrap_or_else(|| ctx.out("ner.conll")))?;
    let by_id: BTreeMap<&str, &NerDoc> = docs.iter().map(|d| (d.id.as_str(), d)).collect();
    let gold = model
        .meta
        .test_docs
        .iter()
        .map(|id| {
            by_id
                .get(id.as_str())
                .map(|d| (*d).clone())
                .ok_or_else(|| Error::Integrity(format!("held-out video {id} is missing from the NER corpus")))
        })
        .collect::<Result<Vec<_>>>()?;
    if gold.is_empty() {
        return Err(Error::Invalid("the model has no held-out videos".into()));
    }
    let (token, span) = evaluate_docs(&model, &gold)?;
    let eval = TaggerEval {
        model: model.arch(),
        test_videos: gold.len(),
        test_sentences: gold.iter().map(|d| d.sentences.len()).sum(),
        token,
        span,
    };
    write_json(&ctx.out(&format!("eval_tagger_{}.json", eval.model)), &eval)?;
    Ok(format!(
        "{}: precision {:.3} recall {:.3} f_measure {:.3} on {} held-out sentences",
        eval.model, token.precision, token.recall, token.f_measure, eval.test_sentences
    ))
}

fn assemble(ctx: &Ctx, corpus_dir: Option<PathBuf>, ner: Option<PathBuf>) -> CliResult<String> {
    let (store, _) = load_corpus(&CorpusPaths::in_dir(&ctx.corpus_dir(corpus_dir)))?;
    let text = read_features(&ctx.out("text_features.tsv"))?;
    let ner = ner.unwrap_or_else(|| ctx.out("tagged_blstm.conll"));
    let counts: BTreeMap<String, usize> = read_docs(&ner)?
        .into_iter()
        .map(|d| {
            let n = unique_medical_terms(&d.sentences);
            (d.id, n)
        })
        .collect();
    let rows = assemble_features(&store, &text, &counts)?;
    let out = ctx.out("features.tsv");
    write(&out, &features_to_tsv(&rows, &matrix_columns()))?;
    let labeled = rows.iter().filter(|r| r.recommended.is_some()).count();
    Ok(format!(
        "{} feature vectors ({labeled} labeled) -> {}",
        rows.len(),
        out.display()
    ))
}

fn train_clf(ctx: &Ctx, target: Target, features: Option<PathBuf>, l2: Option<f64>) -> CliResult<String> {
    let seed = ctx.seed("train-clf")?;
    let rows = read_features(&features.unwrap_or_else(|| ctx.out("features.tsv")))?;
    let mut config = ClfConfig {
        split_fraction: ctx.cfg.split_fraction,
        optimizer: ctx.cfg.classifier.clone(),
    };
    if l2.is_some() {
        config.optimizer.l2 = l2;
    }
    let model = train_classifier(target, &rows, seed, &config)?;
    let out = ctx.out(&format!("clf_{target}.json"));
    model.save(&out)?;
    Ok(format!(
        "{target} classifier: {} training / {} test videos, {} iterations -> {}",
        model.train_meta.n_train,
        model.train_meta.n_test,
        model.iterations,
        out.display()
    ))
}

fn classify_cmd(ctx: &Ctx, model_path: &Path, features: Option<PathBuf>, impute: bool) -> CliResult<String> {
    let model = LrModel::load(model_path)?;
    let mut rows = read_features(&features.unwrap_or_else(|| ctx.out("features.tsv")))?;
    if impute {
        let med = LrModel::load(&ctx.out("clf_medical_info.json"))?;
        let und = LrModel::load(&ctx.out("clf_understandability.json"))?;
        let filled = impute_annotations(&mut rows, &med, &und)?;
        log::info!("imputed {filled} annotation values");
    }
    let target = model.spec.name;
    let mut table = Table::new(["video_id", "probability", "label"]);
    let mut positives = 0;
    for row in &rows {
        let (p, label) = predict(&model, row)?;
        positives += usize::from(label);
        table.push(vec![row.video_id.clone(), format!("{p:.6}"), label.to_string()]);
    }
    let out = ctx.out(&format!("predictions_{target}.tsv"));
    write(&out, &table.to_tsv())?;
    Ok(format!(
        "{target}: {positives} of {} videos predicted positive -> {}",
        rows.len(),
        out.display()
    ))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ClfEval {
    target: Target,
    test_videos: usize,
    metrics: ClfMetrics,
}

fn eval_clf_cmd(ctx: &Ctx, model_path: &Path, features: Option<PathBuf>) -> Result<String> {
    let model = LrModel::load(model_path)?;
    let rows = read_features(&features.unwrap_or_else(|| ctx.out("features.tsv")))?;
    let test = test_rows(&model, &rows)?;
    let metrics = evaluate(&model, &test)?;
    let eval = ClfEval {
        target: model.spec.name,
        test_videos: test.len(),
        metrics,
    };
    write_json(&ctx.out(&format!("eval_clf_{}.json", eval.target)), &eval)?;
    Ok(format!(
        "{}: precision {:.3} recall {:.3} f_measure {:.3} accuracy {:.3} on {} held-out videos",
        eval.target,
        metrics.positive.precision,
        metrics.positive.recall,
        metrics.positive.f_measure,
        metrics.accuracy,
        eval.test_videos
    ))
}

fn eval_all(ctx: &Ctx) -> CliResult<String> {
    let mut done = Vec::new();
    for arch in [Arch::Crf, Arch::Blstm] {
        let path = ctx.out(&format!("tagger_{arch}.json"));
        if path.exists() {
            let summary = eval_tagger_cmd(ctx, &path, None)?;
            log::info!("{summary}");
            done.push(arch.to_string());
        }
    }
    for target in Target::ALL {
        let path = ctx.out(&format!("clf_{target}.json"));
        if path.exists() {
            let summary = eval_clf_cmd(ctx, &path, None)?;
            log::info!("{summary}");
            done.push(target.to_string());
        }
    }
    if done.is_empty() {
        return Err(Error::Invalid(format!("no trained models in {}", ctx.work_dir.display())).into());
    }
    Ok(format!("evaluated {}", done.join(", ")))
}

fn report_cmd(ctx: &Ctx, table: &str) -> CliResult<String> {
    let text = match table {
        "2" => {
            let crf: TaggerEval = read_json(&ctx.out("eval_tagger_crf.json"))?;
            let blstm: TaggerEval = read_json(&ctx.out("eval_tagger_blstm.json"))?;
            report::tagger_table(&crf.token, &blstm.token)
        }
        "5" => {
            let med: ClfEval = read_json(&ctx.out("eval_clf_medical_info.json"))?;
            let und: ClfEval = read_json(&ctx.out("eval_clf_understandability.json"))?;
            report::classifier_table(&med.metrics, &und.metrics)
        }
        "6" => {
            let models = Target::ALL
                .iter()
                .map(|t| ctx.out(&format!("clf_{t}.json")))
                .filter(|p| p.exists())
                .map(|p| LrModel::load(&p))
                .collect::<Result<Vec<_>>>()?;
            if models.is_empty() {
                return Err(Error::Invalid(format!("no classifier models in {}", ctx.work_dir.display())).into());
            }
            report::coefficient_table(&models.iter().collect::<Vec<_>>())
        }
        "7" => {
            let rec: ClfEval = read_json(&ctx.out("eval_clf_recommendation.json"))?;
            report::recommendation_table(&rec.metrics)
        }
        other => return Err(Failure::Usage(format!("unknown table {other}"))),
    };
    let out = ctx.out(&format!("table{table}.tsv"));
    write(&out, &text)?;
    Ok(format!("table {table} -> {}", out.display()))
}
