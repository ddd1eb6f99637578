use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use fakenews::corpus::{
    corpus_stats_by_label, has_label_column, load_dataset, CorpusStats, DataFormat, DatasetSplit, SplitName,
    Tokenization,
};
use fakenews::evaluation::{evaluate, EvalReport};
use fakenews::features::LexiconDict;
use fakenews::search::{
    default_grid, load_model, run_grid_spec, save_model, train_best, GridSpec, ModelKind, PipelineConfig,
    TrainedPipeline,
};
use fakenews::{Label, Resources};

use crate::error::CliError;
use crate::{DataArgs, EvalArgs, GridArgs, PredictArgs, ResourceArgs, StatsArgs, TrainArgs};

fn format_of(args: &DataArgs, path: &Path) -> Result<DataFormat, CliError> {
    match &args.format {
        Some(f) => f.parse().map_err(CliError::Input),
        None => Ok(DataFormat::from_path(path)),
    }
}

fn load_labeled(path: &Path, name: SplitName, args: &DataArgs) -> Result<DatasetSplit, CliError> {
    Ok(load_dataset(path, name, format_of(args, path)?, true)?)
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn create(path: &Path) -> Result<File, CliError> {
    File::create(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn io_err(e: io::Error) -> CliError {
    CliError::Internal(e.to_string())
}

/// Resource paths gathered from a `[resources]` table and the command line.
#[derive(Debug, Default)]
struct ResourcePaths {
    lexicon: Option<PathBuf>,
    stopwords: Option<PathBuf>,
    lemmas: Option<PathBuf>,
    lemma_words: Option<PathBuf>,
}

impl ResourcePaths {
    fn from_table(table: toml::Table, base: &Path) -> Result<Self, CliError> {
        let mut out = Self::default();
        for (key, value) in table {
            let s = value
                .as_str()
                .ok_or_else(|| CliError::input(format!("resources.{key} must be a path string")))?;
            let path = Some(base.join(s));
            match key.as_str() {
                "lexicon" => out.lexicon = path,
                "stopwords" => out.stopwords = path,
                "lemmas" => out.lemmas = path,
                "lemma_words" => out.lemma_words = path,
                other => return Err(CliError::input(format!("unknown resource `{other}`"))),
            }
        }
        Ok(out)
    }

    fn override_with(&mut self, args: &ResourceArgs) {
        for (slot, flag) in [
            (&mut self.lexicon, &args.lexicon),
            (&mut self.stopwords, &args.stopwords),
            (&mut self.lemmas, &args.lemmas),
            (&mut self.lemma_words, &args.lemma_words),
        ] {
            if flag.is_some() {
                slot.clone_from(flag);
            }
        }
    }

    fn load(&self) -> Result<Resources, CliError> {
        let mut r = Resources::default();
        if let Some(p) = &self.stopwords {
            r = r.with_stopwords_file(p)?;
        }
        r = r.with_lemma_files(self.lemmas.as_deref(), self.lemma_words.as_deref())?;
        if let Some(p) = &self.lexicon {
            r = r.with_lexicon_file(p)?;
        }
        Ok(r)
    }
}

/// Parses a TOML file and splits off its optional `[resources]` table.
fn read_toml_with_resources(path: &Path) -> Result<(toml::Table, ResourcePaths), CliError> {
    let text = read_file(path)?;
    let mut table: toml::Table =
        text.parse().map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let resources = match table.remove("resources") {
        None => ResourcePaths::default(),
        Some(toml::Value::Table(t)) => ResourcePaths::from_table(t, base)?,
        Some(_) => return Err(CliError::input("`resources` must be a table")),
    };
    Ok((table, resources))
}

fn load_config(path: Option<&Path>, args: &ResourceArgs) -> Result<(PipelineConfig, Resources), CliError> {
    let (config, mut paths) = match path {
        None => (PipelineConfig::default(), ResourcePaths::default()),
        Some(p) => {
            let (table, paths) = read_toml_with_resources(p)?;
            let config: PipelineConfig = toml::Value::Table(table)
                .try_into()
                .map_err(|e| CliError::input(format!("{}: {e}", p.display())))?;
            (config, paths)
        }
    };
    paths.override_with(args);
    Ok((config, paths.load()?))
}

fn stats_row(out: &mut String, name: &str, cols: &[Option<String>]) {
    let _ = write!(out, "{name:<22}");
    for c in cols {
        let _ = write!(out, "{:>12}", c.as_deref().unwrap_or("-"));
    }
    out.push('\n');
}

pub fn stats(args: &StatsArgs) -> Result<(), CliError> {
    let format = format_of(&args.data_args, &args.data)?;
    let tokenization: Tokenization = args.tokenizer.parse().map_err(CliError::Input)?;
    let labeled = has_label_column(&args.data, format)?;
    let split = load_dataset(&args.data, SplitName::Train, format, labeled)?;
    let stats = corpus_stats_by_label(&split.posts, tokenization);

    let mut columns: Vec<(&str, &CorpusStats)> =
        Label::ALL.iter().filter_map(|l| stats.per_label.get(l).map(|s| (l.as_str(), s))).collect();
    columns.push(("combined", &stats.combined));

    let mut out = String::new();
    if args.kv {
        for (name, s) in &columns {
            let _ = writeln!(out, "{name}.posts={}", s.posts);
            let _ = writeln!(out, "{name}.total_tokens={}", s.total_tokens);
            let _ = writeln!(out, "{name}.unique_words={}", s.unique_words);
            let _ = writeln!(out, "{name}.avg_words_per_post={:.2}", s.avg_words_per_post);
            let _ = writeln!(out, "{name}.avg_chars_per_post={:.2}", s.avg_chars_per_post);
        }
        if stats.per_label.len() == 2 {
            let _ = writeln!(out, "shared_vocab={}", stats.shared_vocab);
        }
    } else {
        let _ = write!(out, "{:<22}", "");
        for (name, _) in &columns {
            let mut title = name.to_string();
            title[..1].make_ascii_uppercase();
            let _ = write!(out, "{title:>12}");
        }
        out.push('\n');
        let col = |f: &dyn Fn(&CorpusStats) -> String| columns.iter().map(|(_, s)| Some(f(s))).collect::<Vec<_>>();
        stats_row(&mut out, "Posts", &col(&|s| s.posts.to_string()));
        stats_row(&mut out, "Unique words", &col(&|s| s.unique_words.to_string()));
        stats_row(&mut out, "Avg. words per post", &col(&|s| format!("{:.2}", s.avg_words_per_post)));
        stats_row(&mut out, "Avg. chars per post", &col(&|s| format!("{:.2}", s.avg_chars_per_post)));
        if stats.per_label.len() == 2 {
            let mut shared: Vec<Option<String>> = vec![Some(stats.shared_vocab.to_string()); 2];
            shared.push(None);
            stats_row(&mut out, "Shared vocabulary", &shared);
        }
    }
    io::stdout().write_all(out.as_bytes()).map_err(io_err)
}

fn print_report(name: &str, report: &EvalReport) -> Result<(), CliError> {
    let mut out = io::stdout().lock();
    writeln!(out, "{}", EvalReport::TABLE_HEADER).map_err(io_err)?;
    writeln!(out, "{}", report.table_row(name)).map_err(io_err)
}

pub fn train(args: &TrainArgs) -> Result<(), CliError> {
    let (mut config, resources) = load_config(args.config.as_deref(), &args.resources)?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let train = load_labeled(&args.train, SplitName::Train, &args.data_args)?;
    let val = match &args.val {
        Some(p) => Some(load_labeled(p, SplitName::Validation, &args.data_args)?),
        None => None,
    };
    let pipeline = TrainedPipeline::train(&config, &resources, &train)?;
    save_model(&pipeline, &args.model)?;
    let (report, on) = match &val {
        Some(v) => (pipeline.evaluate(v)?, "validation"),
        None => (pipeline.evaluate(&train)?, "training"),
    };
    eprintln!("model saved to {}; scores on the {on} split", args.model.display());
    print_report(config.model.kind().name(), &report)
}

pub fn grid(args: &GridArgs) -> Result<(), CliError> {
    let (mut spec, mut paths) = match &args.spec {
        Some(p) => {
            let (table, paths) = read_toml_with_resources(p)?;
            let text = toml::to_string(&table).map_err(|e| CliError::Internal(e.to_string()))?;
            (GridSpec::from_toml(&text)?, paths)
        }
        None => {
            let kind: ModelKind = args.kind.parse().map_err(CliError::Input)?;
            (default_grid(kind, fakenews::search::DEFAULT_SEED, PipelineConfig::default()), ResourcePaths::default())
        }
    };
    if let Some(seed) = args.seed {
        spec.seed = seed;
    }
    paths.override_with(&args.resources);
    let resources = paths.load()?;
    let train = load_labeled(&args.train, SplitName::Train, &args.data_args)?;
    let val = load_labeled(&args.val, SplitName::Validation, &args.data_args)?;

    let result = run_grid_spec(&train, &val, &spec, &resources, args.jobs)?;
    match &args.out {
        Some(p) => result.write_csv(create(p)?),
        None => result.write_csv(io::stdout().lock()),
    }
    .map_err(|e| CliError::Internal(e.to_string()))?;

    let failed = result.entries.iter().filter(|e| e.outcome.is_err()).count();
    eprintln!("{} configs, {failed} failed", result.entries.len());
    let Some(best) = result.best_entry() else {
        return Err(CliError::input("no config trained successfully"));
    };
    eprintln!("best: {}", best.canonical);
    if let Ok(report) = &best.outcome {
        eprintln!("{}", EvalReport::TABLE_HEADER);
        eprintln!("{}", report.table_row(best.config.model.kind().name()));
    }
    if let Some(path) = &args.model {
        let pipeline = train_best(&result, &resources, &train).expect("best exists")?;
        save_model(&pipeline, path)?;
        eprintln!("best model saved to {}", path.display());
    }
    Ok(())
}

pub fn predict(args: &PredictArgs) -> Result<(), CliError> {
    let mut pipeline = load_model(&args.model)?;
    if let Some(path) = &args.lexicon {
        let dict = LexiconDict::parse(&read_file(path)?)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        pipeline.features.replace_lexicon(dict)?;
    }
    let format = format_of(&args.data_args, &args.test)?;
    let split = load_dataset(&args.test, SplitName::Test, format, false)?;
    let labels = if split.is_empty() { Vec::new() } else { pipeline.predict_texts(&split.texts())? };

    let sink: Box<dyn Write> = match &args.out {
        Some(p) => Box::new(create(p)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = csv::Writer::from_writer(sink);
    let write = |w: &mut csv::Writer<Box<dyn Write>>| -> Result<(), csv::Error> {
        w.write_record(["id", "label"])?;
        for (post, label) in split.posts.iter().zip(&labels) {
            w.write_record([post.id.as_str(), label.as_str()])?;
        }
        w.flush()?;
        Ok(())
    };
    write(&mut w).map_err(|e| CliError::Internal(e.to_string()))
}

/// Reads `id,label` rows. Ids must be unique.
fn read_predictions(path: &Path) -> Result<HashMap<String, Label>, CliError> {
    let file = File::open(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(file);
    let bad = |e: csv::Error| CliError::input(format!("{}: {e}", path.display()));
    let headers = rdr.headers().map_err(bad)?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim().trim_start_matches('\u{feff}').eq_ignore_ascii_case(name))
            .ok_or_else(|| CliError::input(format!("{}: missing column `{name}`", path.display())))
    };
    let (id_col, label_col) = (col("id")?, col("label")?);
    let mut out = HashMap::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record.map_err(bad)?;
        let id = record.get(id_col).unwrap_or("").trim().to_string();
        let raw = record.get(label_col).unwrap_or("").trim();
        let label: Label = raw
            .parse()
            .map_err(|_| CliError::input(format!("{}: row {}: unknown label `{raw}`", path.display(), i + 1)))?;
        if out.insert(id.clone(), label).is_some() {
            return Err(CliError::input(format!("{}: duplicate prediction for id `{id}`", path.display())));
        }
    }
    Ok(out)
}

pub fn eval(args: &EvalArgs) -> Result<(), CliError> {
    let predictions = read_predictions(&args.predictions)?;
    let gold = load_labeled(&args.gold, SplitName::Test, &args.data_args)?;
    let missing: Vec<&str> =
        gold.posts.iter().map(|p| p.id.as_str()).filter(|id| !predictions.contains_key(*id)).collect();
    if !missing.is_empty() {
        return Err(CliError::input(format!("no prediction for ids: {}", missing.join(", "))));
    }
    let gold_ids: HashSet<&str> = gold.posts.iter().map(|p| p.id.as_str()).collect();
    let mut extra: Vec<&str> = predictions.keys().map(String::as_str).filter(|id| !gold_ids.contains(id)).collect();
    if !extra.is_empty() {
        extra.sort_unstable();
        return Err(CliError::input(format!("predictions for unknown ids: {}", extra.join(", "))));
    }
    let y_true = gold.labels()?;
    let y_pred: Vec<Label> = gold.posts.iter().map(|p| predictions[&p.id]).collect();
    let report = evaluate(&y_true, &y_pred).map_err(|e| CliError::input(e.to_string()))?;
    let text = if args.kv {
        report.to_kv()
    } else {
        format!("{}\n{}", report.to_table(), report.confusion.to_table())
    };
    io::stdout().write_all(text.as_bytes()).map_err(io_err)
}
