//! End-to-end checks of the command-line surface: golden column sets,
//! byte-level determinism, and exit codes.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_textlaws"))
}

fn run_ok(args: &[&str]) -> Output {
    let out = bin().args(args).output().expect("binary runs");
    assert!(
        out.status.success(),
        "textlaws {args:?} failed:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

/// A small corpus with enough structure for every subcommand.
fn write_corpus(path: &Path) {
    let mut text = String::new();
    for i in 0..1500usize {
        let topic = (i / 150) % 4;
        text.push_str(&format!(
            "the w{topic}_{} saw a w{topic}_{} of c{} again 19{:02} ",
            i % 37,
            (i * 7) % 53,
            i % 11,
            i % 100,
        ));
    }
    fs::write(path, text).unwrap();
}

fn read_dir_bytes(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut files = BTreeMap::new();
    for entry in fs::read_dir(dir).unwrap() {
        let entry = entry.unwrap();
        if entry.path().is_dir() {
            for (k, v) in read_dir_bytes(&entry.path()) {
                files.insert(format!("{}/{k}", entry.file_name().to_string_lossy()), v);
            }
        } else {
            files.insert(
                entry.file_name().to_string_lossy().into_owned(),
                fs::read(entry.path()).unwrap(),
            );
        }
    }
    files
}

#[test]
fn analyze_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus.txt");
    write_corpus(&corpus);
    for sub in ["a", "b"] {
        fs::create_dir(dir.path().join(sub)).unwrap();
        run_ok(&[
            "analyze",
            "--input",
            corpus.to_str().unwrap(),
            "--output",
            dir.path().join(sub).join("out").to_str().unwrap(),
            "--taylor-l",
            "100",
            "--lrc-q",
            "4",
            "--min-freq",
            "2",
            "--replace-numbers",
            "--gnuplot",
        ]);
    }
    let a = read_dir_bytes(&dir.path().join("a"));
    let b = read_dir_bytes(&dir.path().join("b"));
    assert_eq!(a.len(), b.len());
    assert!(a.contains_key("out.report.json"));
    assert!(a.contains_key("out.taylor.tsv"));
    assert!(a.contains_key("out.gp"));
    for (name, bytes) in &a {
        assert_eq!(Some(bytes), b.get(name), "{name} differs between runs");
    }
    // The report parses and carries the meta block.
    let report: serde_json::Value = serde_json::from_slice(&a["out.report.json"]).unwrap();
    assert_eq!(report["meta"]["tool_version"], env!("CARGO_PKG_VERSION"));
    assert!(report["meta"]["input_hash"].is_string());
}

#[test]
fn analyze_empty_input_signals_insufficient_data() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("empty.txt");
    fs::write(&corpus, "").unwrap();
    let out = bin()
        .args([
            "analyze",
            "--input",
            corpus.to_str().unwrap(),
            "--output",
            dir.path().join("out").to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    // The report is still written, with every section failed.
    let report: serde_json::Value =
        serde_json::from_slice(&fs::read(dir.path().join("out.report.json")).unwrap()).unwrap();
    assert_eq!(report["heaps"]["status"], "failed");
}

#[test]
fn invalid_utf8_is_a_format_error() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("bad.txt");
    fs::write(&corpus, b"ok \xff broken").unwrap();
    let out = bin()
        .args([
            "analyze",
            "--input",
            corpus.to_str().unwrap(),
            "--output",
            dir.path().join("out").to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn generate_train_score_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let gen = dir.path().join("gen.txt");
    run_ok(&[
        "generate",
        "--output",
        gen.to_str().unwrap(),
        "--length",
        "8000",
        "--seed",
        "5",
        "--simon-a",
        "0.15",
    ]);
    // Token-file contract: single-space separated, one trailing newline.
    let text = fs::read_to_string(&gen).unwrap();
    assert!(text.ends_with('\n') && !text.ends_with("\n\n"));
    assert!(!text.contains("  ") && !text.starts_with(' '));

    // Same seed, same bytes; different seed, different stream.
    let gen2 = dir.path().join("gen2.txt");
    run_ok(&[
        "generate", "--output", gen2.to_str().unwrap(),
        "--length", "8000", "--seed", "5", "--simon-a", "0.15",
    ]);
    assert_eq!(fs::read(&gen).unwrap(), fs::read(&gen2).unwrap());
    run_ok(&[
        "generate", "--output", gen2.to_str().unwrap(),
        "--length", "8000", "--seed", "6", "--simon-a", "0.15",
    ]);
    assert_ne!(fs::read(&gen).unwrap(), fs::read(&gen2).unwrap());

    let model = dir.path().join("kn.model");
    run_ok(&[
        "train",
        "--input",
        gen.to_str().unwrap(),
        "--output",
        model.to_str().unwrap(),
        "--order",
        "3",
        "--smoothing",
        "kn",
    ]);
    let out = run_ok(&[
        "score",
        "--model",
        model.to_str().unwrap(),
        "--input",
        gen.to_str().unwrap(),
        "--format",
        "json",
    ]);
    let result: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let ppl = result["value"].as_f64().unwrap();
    assert!(ppl.is_finite() && ppl >= 1.0, "perplexity {ppl}");
    assert_eq!(result["n_tokens"], 8000);
}

#[test]
fn shuffle_preserves_the_token_multiset() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus.txt");
    write_corpus(&corpus);
    let out = dir.path().join("shuffled.txt");
    run_ok(&[
        "shuffle",
        "--input",
        corpus.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
        "--ngram",
        "3",
        "--seed",
        "9",
    ]);
    let count = |p: &Path| -> BTreeMap<String, usize> {
        let text = fs::read_to_string(p).unwrap();
        let mut m = BTreeMap::new();
        for w in text.split_whitespace() {
            *m.entry(w.to_owned()).or_insert(0) += 1;
        }
        m
    };
    assert_eq!(count(&corpus), count(&out));
    assert_ne!(fs::read_to_string(&corpus).unwrap().trim(), fs::read_to_string(&out).unwrap().trim());
}

const EXPECTED_HEADER: &str = "row\tperplexity\tzipf\theaps_beta\theaps_eps\tebeling_eta\tebeling_eps\ttaylor_zeta\ttaylor_eps\tlrc_verdict\tlrc_xi\tlrc_eps\terror";

const EXPECTED_ROWS: [&str; 14] = [
    "original",
    "shuffle-1gram",
    "shuffle-2gram",
    "shuffle-5gram",
    "shuffle-10gram",
    "mle-3gram",
    "mle-5gram",
    "interpolation-3gram",
    "katz-3gram",
    "katz-5gram",
    "kneser-ney-3gram",
    "kneser-ney-5gram",
    "simon",
    "pitman-yor",
];

#[test]
fn pipeline_summary_is_golden_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus.txt");
    write_corpus(&corpus);
    let run = |sub: &str| {
        fs::create_dir_all(dir.path().join(sub)).unwrap();
        run_ok(&[
            "pipeline",
            "--input",
            corpus.to_str().unwrap(),
            "--output",
            dir.path().join(sub).join("pipe").to_str().unwrap(),
            "--seed",
            "17",
            "--gen-tokens",
            "6000",
            "--taylor-l",
            "60",
            "--lrc-q",
            "4",
            "--min-freq",
            "2",
        ]);
    };
    run("a");
    run("b");

    let tsv = fs::read_to_string(dir.path().join("a/pipe.summary.tsv")).unwrap();
    let lines: Vec<&str> = tsv.lines().collect();
    assert_eq!(lines[0], EXPECTED_HEADER);
    let names: Vec<&str> = lines[1..]
        .iter()
        .map(|l| l.split('\t').next().unwrap())
        .collect();
    assert_eq!(names, EXPECTED_ROWS);
    // The blank convention: no perplexity for the corpus, shuffles, or urn
    // processes; a number (or inf) for the model rows.
    for line in &lines[1..] {
        let fields: Vec<&str> = line.split('\t').collect();
        let (name, ppl) = (fields[0], fields[1]);
        let is_model = name.ends_with("gram") && !name.starts_with("shuffle");
        assert_eq!(ppl != "-", is_model, "row {name}: perplexity {ppl}");
        assert_eq!(fields[12], "-", "row {name} unexpectedly errored: {}", fields[12]);
    }
    // Ebeling is skipped for the integer-surface urn processes.
    for line in &lines[1..] {
        let fields: Vec<&str> = line.split('\t').collect();
        if fields[0] == "simon" || fields[0] == "pitman-yor" {
            assert_eq!(fields[5], "-");
        } else {
            assert_ne!(fields[5], "-", "row {} missing ebeling", fields[0]);
        }
    }

    // Byte determinism of the whole artifact tree.
    let a = read_dir_bytes(&dir.path().join("a"));
    let b = read_dir_bytes(&dir.path().join("b"));
    assert_eq!(a.len(), b.len());
    assert!(a.len() > 20, "expected per-row report files, got {}", a.len());
    for (name, bytes) in &a {
        assert_eq!(Some(bytes), b.get(name), "{name} differs between runs");
    }
}

const TOY_TREEBANK: &str = "\
(S (NP (D the) (N dog)) (VP (V saw) (NP (D the) (N cat))))
(S (NP (D the) (N cat)) (VP (V saw) (NP (D a) (N bird))))
(S (NP (D a) (N bird)) (VP (V flew)))
(S (NP (D the) (N man)) (VP (V saw) (NP (NP (D the) (N dog)) (PP (P with) (NP (D the) (N cat))))))
(S (NP (D the) (N cat)) (VP (V thought) (SBAR (C that) (S (NP (D the) (N dog)) (VP (V ran))))))
";

#[test]
fn pcfg_subcommands_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let treebank = dir.path().join("toy.mrg");
    fs::write(&treebank, TOY_TREEBANK).unwrap();
    let grammar = dir.path().join("grammar.tsv");
    run_ok(&[
        "pcfg",
        "induce",
        "--input",
        treebank.to_str().unwrap(),
        "--output",
        grammar.to_str().unwrap(),
    ]);
    let text = fs::read_to_string(&grammar).unwrap();
    assert!(text.starts_with("S\tNP VP\t1"), "start symbol first: {text}");

    let sents = dir.path().join("sents.txt");
    run_ok(&[
        "pcfg", "sample",
        "--grammar", grammar.to_str().unwrap(),
        "--output", sents.to_str().unwrap(),
        "--count", "40",
        "--seed", "3",
    ]);
    assert_eq!(fs::read_to_string(&sents).unwrap().lines().count(), 40);

    let nll = dir.path().join("nll.tsv");
    run_ok(&[
        "pcfg", "score",
        "--grammar", grammar.to_str().unwrap(),
        "--input", sents.to_str().unwrap(),
        "--output", nll.to_str().unwrap(),
    ]);
    let scored = fs::read_to_string(&nll).unwrap();
    assert_eq!(scored.lines().count(), 41); // header + 40 rows
    assert!(!scored.contains("unparseable"), "self-sampled sentences parse");

    let profile = dir.path().join("profile.tsv");
    let out = run_ok(&[
        "pcfg", "profile",
        "--grammar", grammar.to_str().unwrap(),
        "--input", sents.to_str().unwrap(),
        "--output", profile.to_str().unwrap(),
    ]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("pearson_length_mean"), "{stdout}");

    // Chunk mode over continuous text.
    let corpus = dir.path().join("corpus.txt");
    write_corpus(&corpus);
    let chunk_profile = dir.path().join("chunks.tsv");
    run_ok(&[
        "pcfg", "profile",
        "--grammar", grammar.to_str().unwrap(),
        "--input", corpus.to_str().unwrap(),
        "--output", chunk_profile.to_str().unwrap(),
        "--chunks",
        "--min-len", "3",
        "--max-len", "8",
        "--per-length", "5",
        "--seed", "2",
        "--unk",
    ]);

    // Bad treebank: format error exit code.
    let bad = dir.path().join("bad.mrg");
    fs::write(&bad, "(S (A").unwrap();
    let out = bin()
        .args([
            "pcfg", "induce",
            "--input", bad.to_str().unwrap(),
            "--output", dir.path().join("g2.tsv").to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}
