//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each
//! and exits nonzero if any fails.

use std::collections::{BTreeSet, HashMap};
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use prosodia::corpus::{clean_text, fragment_corpus, split_sentences, Partition, FRAGMENT_SIZE};
use prosodia::distortion::{distort, fake_encode, DvMethod, EncodedView, FakeDictionary, FunctionWordList, Method};
use prosodia::evaluation::{f1_scores, mcnemar_from_counts};
use prosodia::features::{base_feature_matrix, chi2_scores, FeatureSpace, NGramSpec, SparseMatrix};
use prosodia::harness::{
    run_experiment, run_setup, AuditEvent, AuditLog, ExperimentConfig, NoAudit, Phase, PreparedCorpus, Setup,
    SplitData, C_GRID, R_GRID,
};
use prosodia::prosody::{render, scan_sentence, MacronLexicon};
use prosodia::synthetic::{generate, write_corpus, SyntheticConfig};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// 1 and 2 ------------------------------------------------------------------

fn table_lexicon() -> MacronLexicon {
    ["quō", "abūtēre", "catilīna", "diū", "nōs", "ēlūdet"].into_iter().collect()
}

fn scan_text(raw: &str, lexicon: &MacronLexicon) -> Vec<String> {
    let cleaned = clean_text(raw).expect("text cleans");
    cleaned
        .split_inclusive(" .")
        .map(|s| render(&scan_sentence(s.trim(), lexicon)))
        .collect()
}

fn c01_table_scansion() -> Outcome {
    let start = Instant::now();
    let lexicon = table_lexicon();
    let got = scan_text(
        "Quo usque tandem abutere Catilina patientia nostra. Quam diu etiam furor iste tuus nos eludet.",
        &lexicon,
    );
    let elapsed = start.elapsed();
    let want = ["−∪−∪−−∪∪∪−∪∪∪−∪∪−X", "−∪∪∪−∪∪−∪∪−−−−X"];
    ensure(got == want, || format!("got {got:?}"))?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} + {} symbols in {elapsed:?}",
        got[0].chars().count(),
        got[1].chars().count()
    ))
}

fn c02_hexameter() -> Outcome {
    let lexicon: MacronLexicon = ["canō", "trōiae", "quī", "prīmus", "ōrīs"].into_iter().collect();
    let got = scan_text("arma virumque cano troiae qui primus ab oris .", &lexicon);
    ensure(got == ["−∪∪−∪∪−−−−−∪∪−X"], || format!("got {got:?}"))?;
    Ok(got[0].clone())
}

// 3 ------------------------------------------------------------------------

fn c03_base_dimensions() -> Outcome {
    let fw = FunctionWordList::latin();
    let mut widths = BTreeSet::new();
    let docs = generate(&SyntheticConfig::small(11));
    let fragments = fragment_corpus(&docs, FRAGMENT_SIZE).map_err(|e| e.to_string())?;
    let sentences: Vec<Vec<String>> = fragments.iter().map(|f| f.sentences.clone()).collect();
    widths.insert(base_feature_matrix(&sentences, &fw).n_cols());

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let words: Vec<String> = (0..rng.gen_range(1..200))
            .map(|_| {
                if rng.gen_bool(0.2) {
                    ".".to_string()
                } else if rng.gen_bool(0.3) {
                    fw.words()[rng.gen_range(0..fw.len())].to_string()
                } else {
                    (0..rng.gen_range(1..40)).map(|_| rng.gen_range(b'a'..=b'z') as char).collect()
                }
            })
            .collect();
        let Ok(sentences) = split_sentences(&words.join(" ")) else { continue };
        widths.insert(base_feature_matrix(&[sentences], &fw).n_cols());
    }
    ensure(widths.len() == 1 && widths.contains(&205), || format!("widths {widths:?}"))?;
    Ok("205 columns on synthetic and 200 random corpora".into())
}

// 4 ------------------------------------------------------------------------

fn f1_oracle(t: &[usize], p: &[usize], k: usize) -> (f64, f64) {
    let mut per = Vec::new();
    let (mut tp_all, mut fp_all, mut fn_all) = (0usize, 0usize, 0usize);
    for c in 0..k {
        let mut tp = 0;
        let mut fp = 0;
        let mut fn_ = 0;
        for i in 0..t.len() {
            match (t[i] == c, p[i] == c) {
                (true, true) => tp += 1,
                (false, true) => fp += 1,
                (true, false) => fn_ += 1,
                _ => {}
            }
        }
        tp_all += tp;
        fp_all += fp;
        fn_all += fn_;
        let prec = if tp + fp > 0 { tp as f64 / (tp + fp) as f64 } else { 0.0 };
        let rec = if tp + fn_ > 0 { tp as f64 / (tp + fn_) as f64 } else { 0.0 };
        per.push(if prec + rec > 0.0 { 2.0 * prec * rec / (prec + rec) } else { 0.0 });
    }
    let prec = tp_all as f64 / (tp_all + fp_all) as f64;
    let rec = tp_all as f64 / (tp_all + fn_all) as f64;
    let micro = if prec + rec > 0.0 { 2.0 * prec * rec / (prec + rec) } else { 0.0 };
    (per.iter().sum::<f64>() / k as f64, micro)
}

fn c04_f1_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for case in 0..1000 {
        let k = rng.gen_range(1..=10);
        let n = rng.gen_range(1..=200);
        let classes: Vec<String> = (0..k).map(|c| format!("c{c}")).collect();
        let t: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
        let p: Vec<usize> = t
            .iter()
            .map(|&y| if rng.gen_bool(0.5) { y } else { rng.gen_range(0..k) })
            .collect();
        let ts: Vec<&str> = t.iter().map(|&i| classes[i].as_str()).collect();
        let ps: Vec<&str> = p.iter().map(|&i| classes[i].as_str()).collect();
        let got = f1_scores(&ts, &ps, &classes).map_err(|e| e.to_string())?;
        let (macro_f1, micro_f1) = f1_oracle(&t, &p, k);
        let accuracy = t.iter().zip(&p).filter(|(a, b)| a == b).count() as f64 / n as f64;
        let err = (got.macro_f1 - macro_f1)
            .abs()
            .max((got.micro_f1 - micro_f1).abs())
            .max((got.micro_f1 - accuracy).abs());
        worst = worst.max(err);
        ensure(err <= 1e-12, || format!("case {case}: error {err:e}"))?;
    }
    Ok(format!("1000 cases, max deviation {worst:e}"))
}

// 5 ------------------------------------------------------------------------

fn c05_mcnemar_oracle() -> Outcome {
    let mut pascal: Vec<Vec<u128>> = vec![vec![1]];
    for n in 1..=24 {
        let prev = &pascal[n - 1];
        let row = (0..=n)
            .map(|k| if k == 0 || k == n { 1 } else { prev[k - 1] + prev[k] })
            .collect();
        pascal.push(row);
    }
    let mut checked = 0;
    for n in 0..=24u32 {
        for b in 0..=n {
            let c = n - b;
            // p = 2·Σ_{i≤min} C(n, i) / 2ⁿ, capped at 1; p < 0.05 ⇔ 40·Σ < 2ⁿ.
            let tail: u128 = pascal[n as usize][..=b.min(c) as usize].iter().sum();
            let oracle = 40 * tail < (1u128 << n);
            let got = mcnemar_from_counts(b as usize, c as usize);
            ensure(got.significant == oracle, || {
                format!("b={b} c={c}: significant={} oracle={oracle} p={}", got.significant, got.p)
            })?;
            checked += 1;
        }
    }
    let worked = mcnemar_from_counts(15, 5);
    ensure(worked.significant, || format!("b=15 c=5 p={}", worked.p))?;
    Ok(format!("{checked} (b, c) pairs; b=15 c=5 p={:.4}", worked.p))
}

// 6 ------------------------------------------------------------------------

fn chi2_oracle(dense: &[Vec<f64>], labels: &[usize], k: usize) -> Vec<f64> {
    let p = dense.first().map_or(0, Vec::len);
    let n = labels.len() as f64;
    (0..p)
        .map(|j| {
            let mut table = vec![0.0; k];
            let mut members = vec![0.0; k];
            for (row, &y) in dense.iter().zip(labels) {
                table[y] += row[j];
                members[y] += 1.0;
            }
            let total: f64 = table.iter().sum();
            let mut score = 0.0;
            for c in 0..k {
                let expected = total * members[c] / n;
                if expected > 0.0 {
                    score += (table[c] - expected).powi(2) / expected;
                }
            }
            score
        })
        .collect()
}

fn sq_view(s: String) -> EncodedView {
    EncodedView {
        method: Method::Sq,
        text: s.clone(),
        segments: vec![s],
    }
}

fn c06_chi2_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    let letters = ['a', 'b', 'c', 'd', 'e', 'f', 'g', 'h', 'i', 'j'];
    let unigram = NGramSpec { n_min: 1, n_max: 1, min_count: 1 };
    for case in 0..500 {
        let p = rng.gen_range(1..=10);
        let k = rng.gen_range(2..=5);
        let n = rng.gen_range(k..=30);

        let dense: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..p).map(|_| if rng.gen_bool(0.4) { rng.gen_range(0.0..3.0) } else { 0.0 }).collect())
            .collect();
        let labels: Vec<usize> = (0..n).map(|i| if i < k { i } else { rng.gen_range(0..k) }).collect();
        let got = chi2_scores(&SparseMatrix::from_dense(&dense, p), &labels, k);
        let want = chi2_oracle(&dense, &labels, k);
        for (g, w) in got.iter().zip(&want) {
            let err = (g - w).abs();
            worst = worst.max(err);
            ensure(err <= 1e-9, || format!("case {case}: {g} vs {w}"))?;
        }

        let views: Vec<EncodedView> = (0..n)
            .map(|_| sq_view((0..rng.gen_range(1..12)).map(|_| letters[rng.gen_range(0..p)]).collect()))
            .collect();
        let space = FeatureSpace::fit_with_selection(&views, unigram, &labels, 1.0).map_err(|e| e.to_string())?;
        let width = space.vocabulary_size();
        ensure(space.selection().len() == width, || format!("case {case}: r=1 keeps {} of {width}", space.selection().len()))?;
        let oracle = chi2_oracle(&space.weigh(&views).to_dense(), &labels, k);
        for (g, w) in space.scores().expect("scored").iter().zip(&oracle) {
            ensure((g - w).abs() <= 1e-9, || format!("case {case}: space score {g} vs {w}"))?;
        }
        let mut previous: Option<BTreeSet<usize>> = None;
        for r in R_GRID {
            let mask: BTreeSet<usize> = space.clone().with_ratio(r).map_err(|e| e.to_string())?.selection().iter().copied().collect();
            if let Some(prev) = &previous {
                ensure(prev.is_subset(&mask), || format!("case {case}: mask at r={r} not nested"))?;
            }
            previous = Some(mask);
        }
    }
    Ok(format!("500 instances, max deviation {worst:e}, r=1 keeps all, masks nested"))
}

// 7 and 8 ------------------------------------------------------------------

fn setups(names: &[&str]) -> Vec<Setup> {
    names.iter().map(|s| s.parse().expect("setup name")).collect()
}

fn c07_synthetic_direction() -> Outcome {
    let start = Instant::now();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    write_corpus(&generate(&SyntheticConfig::standard(2024)), dir.path()).map_err(|e| e.to_string())?;
    let mut config = ExperimentConfig::new(dir.path(), 2024);
    config.setups = setups(&["BFs", "BFs+SQ", "BFs+ALLDV", "BFs+ALLDV+SQ", "BFs+ALLDV+FAKE"]);
    let report = run_experiment(&config).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let f1 = |s: &str| report.row(s).expect("row present").f1_macro;
    let lift = f1("BFs+SQ") - f1("BFs");
    let (sq, fake) = (f1("BFs+ALLDV+SQ"), f1("BFs+ALLDV+FAKE"));
    let summary = format!(
        "BFs {:.3} -> BFs+SQ {:.3} (lift {lift:+.3}); ALLDV+SQ {sq:.3} vs ALLDV+FAKE {fake:.3}; {:.1}s",
        f1("BFs"),
        f1("BFs+SQ"),
        elapsed.as_secs_f64()
    );
    ensure(lift >= 0.10, || summary.clone())?;
    ensure(sq >= fake, || summary.clone())?;
    ensure(elapsed < Duration::from_secs(300), || summary.clone())?;
    Ok(summary)
}

fn c08_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    write_corpus(&generate(&SyntheticConfig::small(8)), dir.path()).map_err(|e| e.to_string())?;
    let mut config = ExperimentConfig::new(dir.path(), 8);
    config.setups = setups(&["BFs", "BFs+SQ", "BFs+DVEX", "BFs+ALLDV+FAKE"]);
    let a = run_experiment(&config).and_then(|r| r.to_json()).map_err(|e| e.to_string())?;
    let b = run_experiment(&config).and_then(|r| r.to_json()).map_err(|e| e.to_string())?;
    ensure(a == b, || "reports differ".into())?;
    Ok(format!("two runs, {} identical bytes", a.len()))
}

// 9 ------------------------------------------------------------------------

fn token_strategy() -> impl Strategy<Value = Vec<String>> {
    let fw: Vec<String> = FunctionWordList::latin().words().iter().map(|w| w.to_string()).collect();
    prop::collection::vec(
        prop_oneof![
            4 => "[a-z]{1,15}",
            2 => prop::sample::select(fw),
            1 => Just(".".to_string()),
        ],
        0..40,
    )
}

fn c09_encoder_properties() -> Outcome {
    let fw = FunctionWordList::latin();
    let mut runner = TestRunner::new(Config {
        cases: 10_000,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&(token_strategy(), any::<u64>()), |(tokens, seed)| {
            let text = tokens.join(" ");
            for m in DvMethod::ALL {
                let view = distort(&text, m, &fw);
                let out: Vec<&str> = view.text.split(' ').filter(|t| !t.is_empty()).collect();
                prop_assert_eq!(out.len(), tokens.len());
                for (t, o) in tokens.iter().zip(&out) {
                    if t == "." || fw.contains(t) {
                        prop_assert_eq!(t.as_str(), *o);
                        continue;
                    }
                    let n = t.chars().count();
                    match m {
                        DvMethod::Dvsa => prop_assert_eq!(*o, "*"),
                        _ => prop_assert_eq!(o.chars().count(), n),
                    }
                    match m {
                        DvMethod::Dvma => prop_assert!(o.chars().all(|c| c == '*')),
                        DvMethod::Dvex if n > 2 => {
                            prop_assert_eq!(o.chars().next(), t.chars().next());
                            prop_assert_eq!(o.chars().last(), t.chars().last());
                            prop_assert!(o.chars().skip(1).take(n - 2).all(|c| c == '*'));
                        }
                        DvMethod::Dvl2 if n > 2 => {
                            prop_assert!(o.ends_with(&t[t.len() - 2..]));
                            prop_assert!(o.chars().take(n - 2).all(|c| c == '*'));
                        }
                        _ => {}
                    }
                }
            }

            let dict = FakeDictionary::new(seed);
            let fake = fake_encode(&text, &dict);
            let out: Vec<&str> = fake.text.split(' ').filter(|t| !t.is_empty()).collect();
            prop_assert_eq!(out.len(), tokens.len());
            let fresh = FakeDictionary::new(seed);
            for (t, o) in tokens.iter().zip(&out).rev() {
                if t == "." {
                    prop_assert_eq!(*o, "X");
                    continue;
                }
                let expect = ((t.chars().count() as f64 / 3.0).round() as usize).max(1);
                prop_assert_eq!(o.chars().count(), expect);
                prop_assert!(o.chars().all(|c| matches!(c, '−' | '∪' | 'X')));
                prop_assert_eq!(dict.get(t), *o);
                prop_assert_eq!(fresh.get(t), *o);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok("10000 cases".into())
}

// 10 -----------------------------------------------------------------------

fn c10_no_leakage() -> Outcome {
    let docs = generate(&SyntheticConfig::small(10));
    let corpus = PreparedCorpus::new(&docs, &MacronLexicon::new(), 10, FRAGMENT_SIZE).map_err(|e| e.to_string())?;
    let mut scrambled = corpus.encoded.clone();
    for &i in &corpus.plan.test {
        let donor = corpus.encoded[corpus.plan.train[i % corpus.plan.train.len()]].clone();
        scrambled[i] = prosodia::harness::EncodedFragment {
            author: scrambled[i].author.clone(),
            ..donor
        };
    }

    let mut checked = 0;
    for setup in setups(&["BFs", "BFs+SQ", "BFs+DVMA+SQ", "BFs+ALLDV+FAKE"]) {
        let log = AuditLog::new();
        let data = SplitData::new(&corpus.encoded, &corpus.plan, &log);
        let clean = run_setup(&data, &setup, &C_GRID, &R_GRID).map_err(|e| e.to_string())?;
        let events = log.events();
        let evaluate = events
            .iter()
            .position(|e| *e == AuditEvent::Phase(Phase::Evaluate))
            .ok_or("no evaluate phase")?;
        for (i, e) in events.iter().enumerate() {
            if let AuditEvent::Read { partition: Partition::Test, .. } = e {
                ensure(i > evaluate, || format!("{setup}: test read at event {i} before evaluation"))?;
            }
        }
        ensure(events.iter().skip(evaluate + 1).all(|e| !matches!(e, AuditEvent::Phase(_))), || {
            format!("{setup}: evaluation is not the final phase")
        })?;

        let other = SplitData::new(&scrambled, &corpus.plan, &NoAudit);
        let perturbed = run_setup(&other, &setup, &C_GRID, &R_GRID).map_err(|e| e.to_string())?;
        ensure(clean.grid == perturbed.grid && clean.c == perturbed.c && clean.r == perturbed.r, || {
            format!("{setup}: model selection changed when test fragments changed")
        })?;
        checked += 1;
    }
    Ok(format!("{checked} setups; test reads only after evaluation; selection blind to test content"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 table scansion", c01_table_scansion),
        ("2 hexameter", c02_hexameter),
        ("3 base dimensions", c03_base_dimensions),
        ("4 F1 oracle", c04_f1_oracle),
        ("5 McNemar oracle", c05_mcnemar_oracle),
        ("6 chi-squared oracle", c06_chi2_oracle),
        ("7 synthetic direction", c07_synthetic_direction),
        ("8 determinism", c08_determinism),
        ("9 encoder properties", c09_encoder_properties),
        ("10 no leakage", c10_no_leakage),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let quiet_hook = panic::take_hook();
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    let mut results: HashMap<&str, bool> = HashMap::new();
    for (name, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match &outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
        results.insert(name, outcome.is_ok());
    }
    panic::set_hook(quiet_hook);
    println!("{} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
