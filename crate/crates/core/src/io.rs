//! Corpus ingestion and the vocabulary file format.
//!
//! A vocabulary file starts with the line `TPV1` followed by one JSON
//! object per unit, sorted by canonical string:
//!
//! ```text
//! TPV1
//! {"unit":"[in:A <ph> ]","freq":3,"prob":7.5000000000000000e-1,"phase":"decorated"}
//! ```
//!
//! Probabilities are written with 17 significant digits, so a load followed
//! by a save reproduces the file byte for byte.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde_json::Value;

use crate::corpus::{Corpus, CorpusRecord};
use crate::error::{Error, Result};
use crate::tree::parse_top;
use crate::unit::TreePieceUnit;
use crate::vocab::{Phase, VocabEntry, Vocabulary};

pub const VOCAB_HEADER: &str = "TPV1";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CorpusOptions {
    /// Column count (1, 2 or 3). `None` detects it from the first data line.
    pub columns: Option<usize>,
    /// Skip malformed lines instead of failing.
    pub lenient: bool,
}

/// A parsed corpus plus the lines skipped in lenient mode.
#[derive(Debug, Clone)]
pub struct LoadedCorpus {
    pub corpus: Corpus,
    /// 1-based line numbers of data records, aligned with `corpus.records()`.
    pub lines: Vec<usize>,
    pub skipped: Vec<Error>,
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::FileNotFound(path.to_path_buf()),
        _ => Error::Io(format!("{}: {e}", path.display())),
    })
}

/// Header lines are recognized by a last column that is not a bracketed
/// logical form; column names are never inspected.
fn is_header(line: &str) -> bool {
    !line
        .rsplit('\t')
        .next()
        .unwrap_or("")
        .trim_start()
        .starts_with('[')
}

fn parse_record(line: &str, columns: usize) -> Result<CorpusRecord> {
    let fields: Vec<&str> = line.split('\t').collect();
    if fields.len() != columns {
        return Err(Error::ParseErrorAtLine {
            line: 0,
            message: format!(
                "expected {columns} tab-separated columns, found {}",
                fields.len()
            ),
        });
    }
    let tree = parse_top(fields[columns - 1])?;
    let (domain, utterance) = match columns {
        3 => (Some(fields[0].to_string()), fields[1].to_string()),
        2 => (None, fields[0].to_string()),
        _ => (None, String::new()),
    };
    Ok(CorpusRecord {
        domain,
        utterance,
        tree,
    })
}

/// Parses corpus text. Blank lines are ignored; a leading header line is
/// skipped.
pub fn parse_corpus(text: &str, options: &CorpusOptions) -> Result<LoadedCorpus> {
    if let Some(c) = options.columns {
        if !(1..=3).contains(&c) {
            return Err(Error::Io(format!(
                "column count must be 1, 2 or 3, got {c}"
            )));
        }
    }
    let mut columns = options.columns;
    let mut records = Vec::new();
    let mut lines = Vec::new();
    let mut skipped = Vec::new();
    let mut first = true;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        if std::mem::take(&mut first) && is_header(line) {
            continue;
        }
        let cols = *columns.get_or_insert_with(|| line.matches('\t').count().clamp(0, 2) + 1);
        match parse_record(line, cols) {
            Ok(r) => {
                records.push(r);
                lines.push(i + 1);
            }
            Err(e) => {
                let e = match e {
                    Error::ParseErrorAtLine { message, .. } => Error::at_line(i + 1, message),
                    other => Error::at_line(i + 1, other),
                };
                if !options.lenient {
                    return Err(e);
                }
                skipped.push(e);
            }
        }
    }
    Ok(LoadedCorpus {
        corpus: Corpus::new(records)?,
        lines,
        skipped,
    })
}

pub fn load_corpus_with(path: &Path, options: &CorpusOptions) -> Result<LoadedCorpus> {
    parse_corpus(&read_text(path)?, options)
}

pub fn load_corpus(path: &Path, lenient: bool) -> Result<Corpus> {
    load_corpus_with(
        path,
        &CorpusOptions {
            columns: None,
            lenient,
        },
    )
    .map(|l| l.corpus)
}

pub fn write_vocab(vocab: &Vocabulary) -> String {
    let mut out = String::from(VOCAB_HEADER);
    out.push('\n');
    let phase = vocab.phase().as_str();
    for e in vocab.entries() {
        let unit = serde_json::to_string(e.unit.canonical()).expect("string serializes");
        writeln!(
            out,
            r#"{{"unit":{unit},"freq":{},"prob":{:.16e},"phase":"{phase}"}}"#,
            e.freq, e.prob
        )
        .expect("writing to a String");
    }
    out
}

fn parse_entry(line: &str) -> std::result::Result<(VocabEntry, Phase), String> {
    let value: Value = serde_json::from_str(line).map_err(|e| e.to_string())?;
    let obj = value.as_object().ok_or("entry is not an object")?;
    if obj.len() != 4 {
        return Err("entry must have exactly the keys unit, freq, prob, phase".into());
    }
    let unit = obj
        .get("unit")
        .and_then(Value::as_str)
        .ok_or("missing string field `unit`")?;
    let freq = obj
        .get("freq")
        .and_then(Value::as_u64)
        .ok_or("missing integer field `freq`")?;
    let prob = obj
        .get("prob")
        .and_then(Value::as_f64)
        .ok_or("missing number field `prob`")?;
    let phase = obj
        .get("phase")
        .and_then(Value::as_str)
        .and_then(Phase::parse)
        .ok_or("field `phase` must be \"bare\" or \"decorated\"")?;
    let parsed = TreePieceUnit::parse(unit).map_err(|e| format!("unit {unit:?}: {e}"))?;
    if parsed.canonical() != unit {
        return Err(format!("unit {unit:?} is not in canonical form"));
    }
    Ok((
        VocabEntry {
            unit: parsed,
            freq,
            prob,
        },
        phase,
    ))
}

pub fn parse_vocab(text: &str) -> Result<Vocabulary> {
    let mut lines = text.lines();
    if lines.next().map(|l| l.trim_end_matches('\r')) != Some(VOCAB_HEADER) {
        return Err(Error::CorruptVocabFile(format!(
            "missing `{VOCAB_HEADER}` header"
        )));
    }
    let mut entries = Vec::new();
    let mut phase = None;
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let (entry, p) = parse_entry(line)
            .map_err(|m| Error::CorruptVocabFile(format!("line {}: {m}", i + 2)))?;
        if *phase.get_or_insert(p) != p {
            return Err(Error::CorruptVocabFile(format!(
                "line {}: mixed phases in one file",
                i + 2
            )));
        }
        entries.push(entry);
    }
    let Some(phase) = phase else {
        return Err(Error::CorruptVocabFile("no entries".into()));
    };
    Vocabulary::new(phase, entries)
}

pub fn save_vocab(vocab: &Vocabulary, path: &Path) -> Result<()> {
    fs::write(path, write_vocab(vocab)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn load_vocab(path: &Path) -> Result<Vocabulary> {
    parse_vocab(&read_text(path)?)
}
