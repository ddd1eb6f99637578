mod common;

use std::fs;

use fakenews::corpus::{load_dataset, write_split, DataFormat, SplitName};
use fakenews::features::FeatureFamily;
use fakenews::search::{
    enumerate_grid, load_model, run_grid_spec, save_model, GridSpec, ModelKind, ModelSpec, PersistError,
    PipelineConfig, TrainedPipeline,
};
use fakenews::Resources;

#[test]
fn svm_learns_synthetic_posts() {
    let train = common::split(SplitName::Train, 300, 1);
    let val = common::split(SplitName::Validation, 100, 2);
    let p = TrainedPipeline::train(&PipelineConfig::default(), &Resources::default(), &train).unwrap();
    let report = p.evaluate(&val).unwrap();
    assert!(report.weighted_f1 > 0.75, "{}", report.weighted_f1);
}

#[test]
fn every_family_alone_trains() {
    let train = common::split(SplitName::Train, 80, 3);
    for family in [FeatureFamily::Ngrams, FeatureFamily::Readability, FeatureFamily::Lexicon, FeatureFamily::Punctuation] {
        let mut config = PipelineConfig::default();
        config.features = config.features.restrict(&[family]);
        let p = TrainedPipeline::train(&config, &Resources::default(), &train).unwrap();
        let expected = if family == FeatureFamily::Ngrams { p.features.tfidf().unwrap().dim() } else { config.features.dense_width() };
        assert_eq!(p.features.dim().unwrap(), expected, "{family:?}");
    }
}

#[test]
fn files_round_trip_through_training() {
    let dir = tempfile::tempdir().unwrap();
    let train = common::split(SplitName::Train, 60, 4);
    for format in [DataFormat::Csv, DataFormat::Tsv] {
        let path = dir.path().join(format!("train.{}", if format == DataFormat::Csv { "csv" } else { "tsv" }));
        write_split(&train, fs::File::create(&path).unwrap(), format).unwrap();
        let loaded = load_dataset(&path, SplitName::Train, DataFormat::from_path(&path), true).unwrap();
        assert_eq!(loaded.posts, train.posts);
    }
}

#[test]
fn saved_model_predicts_like_the_original() {
    let dir = tempfile::tempdir().unwrap();
    let train = common::split(SplitName::Train, 100, 5);
    let posts = common::texts(100, 6);
    let config = PipelineConfig { model: ModelSpec::default_for(ModelKind::Nb), ..Default::default() };
    let p = TrainedPipeline::train(&config, &Resources::default(), &train).unwrap();
    let path = dir.path().join("nb.bin");
    save_model(&p, &path).unwrap();
    let q = load_model(&path).unwrap();
    assert_eq!(p.predict_texts(&posts).unwrap(), q.predict_texts(&posts).unwrap());

    let bytes = fs::read(&path).unwrap();
    fs::write(&path, &bytes[..bytes.len() / 2]).unwrap();
    assert!(matches!(load_model(&path), Err(PersistError::CorruptFile(_))));
}

#[test]
fn duplicate_configs_score_identically() {
    let train = common::split(SplitName::Train, 80, 7);
    let val = common::split(SplitName::Validation, 40, 8);
    let spec = GridSpec::new(11, PipelineConfig::default()).axis("model", ["lr", "lr"]).axis("lambda", [1e-3]);
    assert_eq!(enumerate_grid(&spec).unwrap().len(), 2);
    let res = run_grid_spec(&train, &val, &spec, &Resources::default(), 2).unwrap();
    assert_eq!(res.entries[0].outcome, res.entries[1].outcome);
    assert_eq!(res.best, Some(0));
}

#[test]
fn ablation_grid_over_families() {
    let train = common::split(SplitName::Train, 120, 9);
    let val = common::split(SplitName::Validation, 60, 10);
    let spec = GridSpec::new(1, PipelineConfig::default())
        .axis("features", ["ngrams", "readability+lexicon+punctuation", "readability", "lexicon", "punctuation"]);
    let res = run_grid_spec(&train, &val, &spec, &Resources::default(), 4).unwrap();
    assert!(res.entries.iter().all(|e| e.outcome.is_ok()));
    let f1: Vec<f64> = res.entries.iter().map(|e| e.f1().unwrap()).collect();
    // n-grams carry the class words in this corpus
    assert!(f1[0] >= f1[2] && f1[0] >= f1[4], "{f1:?}");
}
