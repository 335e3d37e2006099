use std::error::Error as _;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use prosodia::corpus::{clean_text, load_corpus, split_sentences, FRAGMENT_SIZE};
use prosodia::distortion::{distort, fake_encode, DvMethod, EncodedView, FakeDictionary, FunctionWordList};
use prosodia::harness::{featurize, run_experiment, ExperimentConfig, PreparedCorpus, Setup};
use prosodia::prosody::{detect_cursus, render, scan_fragment, scan_sentence, scan_words, MacronLexicon};
use prosodia::synthetic::{generate, write_corpus, SyntheticConfig};
use prosodia::{Error, Result};

#[derive(Parser)]
#[command(name = "prosodia", version, about = "Latin prose rhythm and authorship attribution")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Dvma,
    Dvsa,
    Dvex,
    Dvl2,
    Fake,
    Sq,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Md,
}

#[derive(Subcommand)]
enum Command {
    /// Print syllable quantities of a text
    Scan {
        #[arg(long)]
        lexicon: Option<PathBuf>,
        /// Text file, or `-` for standard input
        #[arg(long, default_value = "-")]
        input: PathBuf,
        /// One line per sentence instead of one for the whole text
        #[arg(long)]
        per_sentence: bool,
        /// Append the cadence of each sentence (implies --per-sentence)
        #[arg(long)]
        cursus: bool,
    },
    /// Print a text under one encoding
    Encode {
        #[arg(long, value_enum)]
        method: MethodArg,
        #[arg(long, default_value = "-")]
        input: PathBuf,
        #[arg(long)]
        lexicon: Option<PathBuf>,
        /// Seed of the FAKE dictionary
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write the split plan and feature matrices of a corpus
    Featurize {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        lexicon: Option<PathBuf>,
        #[arg(long, default_value_t = FRAGMENT_SIZE)]
        fragment_size: usize,
    },
    /// Run the grid-searched comparison of feature setups
    Experiment {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        lexicon: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated setups such as `BFs,BFs+SQ`, or `all`
        #[arg(long, default_value = "all")]
        setups: String,
        /// Report path (JSON)
        #[arg(long)]
        out: PathBuf,
        /// Also print a comparison table
        #[arg(long, value_enum)]
        table: Option<TableFormat>,
        /// Comma-separated C values overriding the default grid
        #[arg(long, value_delimiter = ',')]
        c_grid: Option<Vec<f64>>,
        /// Comma-separated selection ratios overriding the default grid
        #[arg(long, value_delimiter = ',')]
        r_grid: Option<Vec<f64>>,
        #[arg(long, default_value_t = FRAGMENT_SIZE)]
        fragment_size: usize,
    },
    /// Write a synthetic three-author corpus
    Synth {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fewer sentences per author
        #[arg(long)]
        small: bool,
    },
}

fn read_input(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::Io { path: "<stdin>".into(), source: e })?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Error::Io { path: path.to_path_buf(), source: e })
    }
}

fn lexicon(path: Option<&Path>) -> Result<MacronLexicon> {
    path.map_or_else(|| Ok(MacronLexicon::new()), MacronLexicon::load)
}

fn sentences_of(path: &Path) -> Result<Vec<String>> {
    split_sentences(&clean_text(&read_input(path)?)?)
}

fn parse_setups(list: &str) -> Result<Vec<Setup>> {
    if list.trim().eq_ignore_ascii_case("all") {
        return Ok(Setup::standard());
    }
    list.split(',').filter(|s| !s.trim().is_empty()).map(str::parse).collect()
}

fn run(cli: Cli) -> Result<()> {
    let mut stdout = io::stdout().lock();
    let out_err = |e: io::Error| Error::Io { path: "<stdout>".into(), source: e };
    match cli.command {
        Command::Scan { lexicon: lex, input, per_sentence, cursus } => {
            let lex = lexicon(lex.as_deref())?;
            let sentences = sentences_of(&input)?;
            if per_sentence || cursus {
                for s in &sentences {
                    let line = render(&scan_sentence(s, &lex));
                    if cursus {
                        let pattern = detect_cursus(&scan_words(s, &lex));
                        writeln!(stdout, "{line}\t{}", pattern.kind.name()).map_err(out_err)?;
                    } else {
                        writeln!(stdout, "{line}").map_err(out_err)?;
                    }
                }
            } else {
                let scanned = scan_fragment(&sentences, &lex)?;
                writeln!(stdout, "{}", scanned.rendered_segments().join(" ")).map_err(out_err)?;
            }
        }
        Command::Encode { method, input, lexicon: lex, seed } => {
            let sentences = sentences_of(&input)?;
            let text = sentences.join(" ");
            let fw = FunctionWordList::latin();
            let view = match method {
                MethodArg::Dvma => distort(&text, DvMethod::Dvma, &fw),
                MethodArg::Dvsa => distort(&text, DvMethod::Dvsa, &fw),
                MethodArg::Dvex => distort(&text, DvMethod::Dvex, &fw),
                MethodArg::Dvl2 => distort(&text, DvMethod::Dvl2, &fw),
                MethodArg::Fake => fake_encode(&text, &FakeDictionary::new(seed)),
                MethodArg::Sq => EncodedView::from_scansion(&scan_fragment(&sentences, &lexicon(lex.as_deref())?)?),
            };
            writeln!(stdout, "{}", view.text).map_err(out_err)?;
        }
        Command::Featurize { corpus, seed, out, lexicon: lex, fragment_size } => {
            let docs = load_corpus(&corpus)?;
            let prepared = PreparedCorpus::new(&docs, &lexicon(lex.as_deref())?, seed, fragment_size)?;
            featurize(&prepared, &out)?;
            eprintln!(
                "{} fragments (train {}, validation {}, test {}) written to {}",
                prepared.fragments.len(),
                prepared.plan.train.len(),
                prepared.plan.validation.len(),
                prepared.plan.test.len(),
                out.display()
            );
        }
        Command::Experiment { corpus, lexicon: lex, seed, setups, out, table, c_grid, r_grid, fragment_size } => {
            let mut config = ExperimentConfig::new(corpus, seed);
            config.lexicon = lex;
            config.setups = parse_setups(&setups)?;
            config.fragment_size = fragment_size;
            if let Some(c) = c_grid {
                config.c_grid = c;
            }
            if let Some(r) = r_grid {
                config.r_grid = r;
            }
            let report = run_experiment(&config)?;
            fs::write(&out, report.to_json()?).map_err(|e| Error::Io { path: out.clone(), source: e })?;
            if let Some(TableFormat::Md) = table {
                write!(stdout, "{}", report.to_markdown()).map_err(out_err)?;
            }
        }
        Command::Synth { out, seed, small } => {
            let cfg = if small { SyntheticConfig::small(seed) } else { SyntheticConfig::standard(seed) };
            write_corpus(&generate(&cfg), &out)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let mut message = e.to_string();
            eprintln!("error: {message}");
            let mut source = e.source();
            while let Some(s) = source {
                let text = s.to_string();
                if !message.contains(&text) {
                    eprintln!("  caused by: {text}");
                }
                message = text;
                source = s.source();
            }
            ExitCode::FAILURE
        }
    }
}
