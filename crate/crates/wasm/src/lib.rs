//! Browser bindings: scan a passage, encode it under one view, and run
//! McNemar's test on a pair of discordant counts.
//!
//! Each binding returns JSON or plain text; the `*_json` / `*_text`
//! functions hold the logic so it can be tested off the browser.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use prosodia::corpus::{clean_text, split_sentences};
use prosodia::distortion::{distort, fake_encode, DvMethod, EncodedView, FakeDictionary, FunctionWordList, Method};
use prosodia::evaluation::mcnemar_from_counts;
use prosodia::prosody::{detect_cursus, render, scan_fragment, scan_sentence, scan_words, MacronLexicon};

#[derive(Serialize)]
struct ScannedSentence {
    sentence: String,
    quantities: String,
    cursus: &'static str,
    stress: String,
}

fn sentences(text: &str) -> Result<Vec<String>, String> {
    clean_text(text)
        .and_then(|t| split_sentences(&t))
        .map_err(|e| e.to_string())
}

fn lexicon(tsv: &str) -> Result<MacronLexicon, String> {
    MacronLexicon::parse(tsv).map_err(|e| e.to_string())
}

/// Per-sentence quantities and cadence of `text`, as a JSON array.
pub fn scan_json(text: &str, lexicon_tsv: &str) -> Result<String, String> {
    let lex = lexicon(lexicon_tsv)?;
    let rows: Vec<ScannedSentence> = sentences(text)?
        .into_iter()
        .map(|s| {
            let cursus = detect_cursus(&scan_words(&s, &lex));
            ScannedSentence {
                quantities: render(&scan_sentence(&s, &lex)),
                cursus: cursus.kind.name(),
                stress: cursus.stress,
                sentence: s,
            }
        })
        .collect();
    serde_json::to_string(&rows).map_err(|e| e.to_string())
}

/// `text` rendered under `method` (`dvma`, `dvsa`, `dvex`, `dvl2`, `fake`
/// or `sq`).
pub fn encode_text(text: &str, method: &str, seed: u64, lexicon_tsv: &str) -> Result<String, String> {
    let sentences = sentences(text)?;
    let joined = sentences.join(" ");
    let fw = FunctionWordList::latin();
    let view = match method.parse::<Method>().map_err(|e| e.to_string())? {
        Method::Dv(m) => distort(&joined, m, &fw),
        Method::Fake => fake_encode(&joined, &FakeDictionary::new(seed)),
        Method::Sq => {
            let scanned = scan_fragment(&sentences, &lexicon(lexicon_tsv)?).map_err(|e| e.to_string())?;
            EncodedView::from_scansion(&scanned)
        }
    };
    Ok(view.text)
}

/// McNemar's test for `b` and `c` discordant pairs, as JSON.
pub fn mcnemar_json(b: u32, c: u32) -> String {
    serde_json::to_string(&mcnemar_from_counts(b as usize, c as usize)).expect("result serializes")
}

/// All four distorted views, one per line.
pub fn all_views_text(text: &str) -> Result<String, String> {
    let joined = sentences(text)?.join(" ");
    let fw = FunctionWordList::latin();
    Ok(DvMethod::ALL
        .iter()
        .map(|&m| format!("{}\t{}", Method::Dv(m), distort(&joined, m, &fw).text))
        .collect::<Vec<_>>()
        .join("\n"))
}

#[wasm_bindgen]
pub fn scan(text: &str, lexicon_tsv: &str) -> Result<String, JsError> {
    scan_json(text, lexicon_tsv).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn encode(text: &str, method: &str, seed: u32, lexicon_tsv: &str) -> Result<String, JsError> {
    encode_text(text, method, u64::from(seed), lexicon_tsv).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn mcnemar(b: u32, c: u32) -> String {
    mcnemar_json(b, c)
}
