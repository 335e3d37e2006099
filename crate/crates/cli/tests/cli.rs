use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn prosodia(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prosodia"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn fixture(dir: &Path) -> (String, String) {
    let text = dir.join("catilina.txt");
    fs::write(
        &text,
        "Quo usque tandem abutere, Catilina, patientia nostra? Quam diu etiam furor iste tuus nos eludet?",
    )
    .unwrap();
    let lexicon = dir.join("lexicon.tsv");
    fs::write(
        &lexicon,
        "# long vowels marked with a colon\nquo\tquo:\nabutere\tabu:te:re\ncatilina\tcatili:na\ndiu\tdiu:\nnos\tno:s\neludet\te:lu:det\n",
    )
    .unwrap();
    (text.display().to_string(), lexicon.display().to_string())
}

#[test]
fn scan_prints_one_line_per_sentence() {
    let dir = tempfile::tempdir().unwrap();
    let (text, lex) = fixture(dir.path());
    let out = stdout(&prosodia(&["scan", "--lexicon", &lex, "--input", &text, "--per-sentence"]));
    assert_eq!(out, "−∪−∪−−∪∪∪−∪∪∪−∪∪−X\n−∪∪∪−∪∪−∪∪−−−−X\n");
    let out = stdout(&prosodia(&["scan", "--lexicon", &lex, "--input", &text, "--cursus"]));
    assert_eq!(out.lines().next().unwrap(), "−∪−∪−−∪∪∪−∪∪∪−∪∪−X\tplanus");
}

#[test]
fn encode_methods() {
    let dir = tempfile::tempdir().unwrap();
    let (text, lex) = fixture(dir.path());
    let out = stdout(&prosodia(&["encode", "--method", "dvex", "--input", &text]));
    assert!(out.starts_with("q*o usque t****m a*****e c******a p*******a n****a . "));
    let sq = stdout(&prosodia(&["encode", "--method", "sq", "--input", &text, "--lexicon", &lex]));
    assert_eq!(sq, "−∪−∪−−∪∪∪−∪∪∪−∪∪−X −∪∪∪−∪∪−∪∪−−−−X\n");
    let a = stdout(&prosodia(&["encode", "--method", "fake", "--input", &text, "--seed", "5"]));
    let b = stdout(&prosodia(&["encode", "--method", "fake", "--input", &text, "--seed", "5"]));
    assert_eq!(a, b);
    assert!(a.split_whitespace().filter(|t| *t == "X").count() >= 2);
}

#[test]
fn experiment_reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    stdout(&prosodia(&["synth", "--out", corpus.to_str().unwrap(), "--seed", "4", "--small"]));
    let run = |name: &str| {
        let out = dir.path().join(name);
        let table = stdout(&prosodia(&[
            "experiment",
            "--corpus",
            corpus.to_str().unwrap(),
            "--seed",
            "4",
            "--setups",
            "BFs,BFs+SQ",
            "--c-grid",
            "0.1,1,10",
            "--out",
            out.to_str().unwrap(),
            "--table",
            "md",
        ]));
        (fs::read(out).unwrap(), table)
    };
    let (a, table) = run("a.json");
    let (b, _) = run("b.json");
    assert_eq!(a, b);
    assert!(table.contains("| BFs+SQ |"));
    let json = String::from_utf8(a).unwrap();
    for key in ["\"F1M\"", "\"F1mu\"", "\"deltaM\"", "\"deltaMu\"", "\"mcnemar\"", "\"C\"", "\"r\"", "\"plan_hash\""] {
        assert!(json.contains(key), "{key}");
    }
}

#[test]
fn featurize_writes_matrices_and_vocabularies() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    let out = dir.path().join("features");
    stdout(&prosodia(&["synth", "--out", corpus.to_str().unwrap(), "--seed", "2", "--small"]));
    stdout(&prosodia(&["featurize", "--corpus", corpus.to_str().unwrap(), "--seed", "2", "--out", out.to_str().unwrap()]));
    let base = fs::read_to_string(out.join("bfs.triplets")).unwrap();
    assert!(base.starts_with("# rows=60 cols=205\n"));
    for name in ["dvma", "dvsa", "dvex", "dvl2", "sq", "fake"] {
        assert!(out.join(format!("{name}.triplets")).is_file(), "{name}");
        assert!(out.join(format!("{name}.vocab")).is_file(), "{name}");
    }
    let plan = fs::read_to_string(out.join("plan.json")).unwrap();
    assert!(plan.contains("\"partition\": \"test\""));
    assert_eq!(fs::read_to_string(out.join("labels.txt")).unwrap().lines().count(), 60);
}

#[test]
fn failures_exit_nonzero_with_diagnostics() {
    let out = prosodia(&["scan", "--input", "/definitely/missing.txt"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.txt"));
    let dir = tempfile::tempdir().unwrap();
    let out = prosodia(&[
        "experiment",
        "--corpus",
        dir.path().to_str().unwrap(),
        "--setups",
        "BFs+DVMA+FAKE",
        "--out",
        dir.path().join("r.json").to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAKE"));
}
