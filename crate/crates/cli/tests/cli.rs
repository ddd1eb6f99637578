use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const TOY: &str = "id,tweet,label
1,\"Wash your hands and wear masks, says the health ministry.\",real
2,\"New cases reported today in 12 states; testing continues.\",real
3,\"Vaccine trial results published in a peer reviewed journal.\",real
4,\"Drinking hot water with garlic cures the virus!!! Share now!\",fake
5,\"5G towers spread the virus, they don't want you to know!\",fake
6,\"Miracle pill kills covid in one day?! Doctors hate it!\",fake
";

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fakenews")).current_dir(dir).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn setup() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("train.csv"), TOY).unwrap();
    fs::write(dir.path().join("nb.toml"), "[model]\nkind = \"nb\"\n").unwrap();
    dir
}

fn train_nb(dir: &Path) {
    let o = run(dir, &["train", "--train", "train.csv", "--val", "train.csv", "--config", "nb.toml", "--model", "m.bin"]);
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn stats_table_has_label_columns() {
    let dir = setup();
    let o = run(dir.path(), &["stats", "--data", "train.csv"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let header = out.lines().next().unwrap();
    assert!(header.contains("Fake") && header.contains("Real") && header.contains("Combined"));
    assert!(out.contains("Avg. words per post"));
}

#[test]
fn stats_single_post() {
    let dir = setup();
    fs::write(dir.path().join("one.csv"), "id,tweet\n1,a b a\n").unwrap();
    let o = run(dir.path(), &["stats", "--data", "one.csv", "--kv"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("combined.unique_words=2"));
    assert!(out.contains("combined.avg_words_per_post=3.00"));
    assert!(out.contains("combined.avg_chars_per_post=5.00"));
}

#[test]
fn missing_file_exits_2() {
    let dir = setup();
    let o = run(dir.path(), &["stats", "--data", "absent.csv"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("absent.csv"));
}

#[test]
fn unknown_flag_exits_2() {
    let dir = setup();
    assert_eq!(run(dir.path(), &["stats", "--data", "train.csv", "--colour"]).status.code(), Some(2));
}

#[test]
fn train_writes_model_and_report() {
    let dir = setup();
    let o = run(dir.path(), &["train", "--train", "train.csv", "--val", "train.csv", "--config", "nb.toml", "--model", "m.bin"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(dir.path().join("m.bin").exists());
    let out = stdout(&o);
    let row = out.lines().nth(1).unwrap();
    let fields: Vec<&str> = row.split_whitespace().collect();
    assert_eq!(fields[0], "NB");
    assert_eq!(fields.len(), 5);
    assert!(fields[1..].iter().all(|f| f.parse::<f64>().is_ok() && f.split('.').nth(1).unwrap().len() == 2));
}

#[test]
fn config_with_missing_lexicon_exits_2() {
    let dir = setup();
    fs::write(dir.path().join("bad.toml"), "[resources]\nlexicon = \"nowhere.dic\"\n").unwrap();
    let o = run(dir.path(), &["train", "--train", "train.csv", "--config", "bad.toml", "--model", "m.bin"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("nowhere.dic"));
}

#[test]
fn predict_keeps_rows_and_order() {
    let dir = setup();
    train_nb(dir.path());
    let unlabeled = "id,tweet\nz,garlic cures covid!!!\na,ministry reports new cases\nm,masks help\n";
    fs::write(dir.path().join("test.csv"), unlabeled).unwrap();
    let o = run(dir.path(), &["predict", "--model", "m.bin", "--test", "test.csv", "--out", "pred.csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let pred = fs::read_to_string(dir.path().join("pred.csv")).unwrap();
    let lines: Vec<&str> = pred.lines().collect();
    assert_eq!(lines[0], "id,label");
    let ids: Vec<&str> = lines[1..].iter().map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(ids, ["z", "a", "m"]);
    assert!(lines[1..].iter().all(|l| l.ends_with(",real") || l.ends_with(",fake")));
}

#[test]
fn predict_header_only_input() {
    let dir = setup();
    train_nb(dir.path());
    fs::write(dir.path().join("empty.csv"), "id,tweet\n").unwrap();
    let o = run(dir.path(), &["predict", "--model", "m.bin", "--test", "empty.csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "id,label");
}

#[test]
fn predict_with_incompatible_lexicon_exits_2() {
    let dir = setup();
    train_nb(dir.path());
    fs::write(dir.path().join("small.dic"), "%\n1\tposemo\n%\ngood*\t1\n").unwrap();
    let o = run(dir.path(), &["predict", "--model", "m.bin", "--test", "train.csv", "--lexicon", "small.dic"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("DimensionMismatch"));
}

#[test]
fn eval_perfect_and_four_example_case() {
    let dir = setup();
    fs::write(dir.path().join("gold.csv"), "id,tweet,label\n1,a,real\n2,b,real\n3,c,real\n4,d,fake\n").unwrap();
    fs::write(dir.path().join("same.csv"), "id,label\n4,fake\n3,real\n2,real\n1,real\n").unwrap();
    let o = run(dir.path(), &["eval", "--predictions", "same.csv", "--gold", "gold.csv"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().any(|l| l.starts_with("weighted") && l.matches("100.00").count() == 3));

    fs::write(dir.path().join("pred.csv"), "id,label\n1,real\n2,fake\n3,real\n4,fake\n").unwrap();
    let o = run(dir.path(), &["eval", "--predictions", "pred.csv", "--gold", "gold.csv"]);
    assert!(o.status.success());
    let weighted = stdout(&o).lines().find(|l| l.starts_with("weighted")).unwrap().to_string();
    assert!(weighted.contains("76.67"), "{weighted}");
    let o = run(dir.path(), &["eval", "--predictions", "pred.csv", "--gold", "gold.csv", "--kv"]);
    assert!(stdout(&o).contains("weighted_f1=0.7667"));
}

#[test]
fn eval_missing_id_exits_2() {
    let dir = setup();
    fs::write(dir.path().join("gold.csv"), "id,tweet,label\n1,a,real\n2,b,fake\n").unwrap();
    fs::write(dir.path().join("pred.csv"), "id,label\n1,real\n").unwrap();
    let o = run(dir.path(), &["eval", "--predictions", "pred.csv", "--gold", "gold.csv"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("2"));
}

#[test]
fn grid_writes_csv_and_is_deterministic() {
    let dir = setup();
    fs::write(
        dir.path().join("grid.toml"),
        "seed = 5\n[base.model]\nkind = \"nb\"\n[axes]\nalpha = [0.1, 1.0]\nngram_hi = [1, 2]\n",
    )
    .unwrap();
    let args = |jobs: &'static str, out: &'static str| {
        vec!["grid", "--train", "train.csv", "--val", "train.csv", "--spec", "grid.toml", "--jobs", jobs, "--out", out]
    };
    assert!(run(dir.path(), &args("1", "a.csv")).status.success());
    assert!(run(dir.path(), &args("4", "b.csv")).status.success());
    let strip = |name: &str| -> Vec<String> {
        // drop the timing column
        let text = fs::read_to_string(dir.path().join(name)).unwrap();
        let mut rdr = csv::Reader::from_reader(text.as_bytes());
        rdr.records().map(|r| {
            let r = r.unwrap();
            format!("{}|{}|{}", &r[0], &r[1], &r[6])
        }).collect()
    };
    let a = strip("a.csv");
    assert_eq!(a.len(), 4);
    assert_eq!(a, strip("b.csv"));
}

#[test]
fn seed_flag_changes_nothing_for_nb_but_is_accepted() {
    let dir = setup();
    let o = run(dir.path(), &["train", "--train", "train.csv", "--config", "nb.toml", "--model", "m.bin", "--seed", "7"]);
    assert!(o.status.success(), "{}", stderr(&o));
}
