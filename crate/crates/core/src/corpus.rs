//! Corpus files of f-structure pairs.
//!
//! Each record holds a source structure followed by a target structure and
//! may span several lines. Records are separated by a line that contains
//! exactly `---`. Blank records are ignored and not numbered.

use std::fmt::Write as _;

use thiserror::Error;

use crate::fstructure::{FStructure, ParseError};

pub const RECORD_SEPARATOR: &str = "---";

pub type StructurePair = (FStructure, FStructure);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("record {record} (line {line}): {source}")]
    Parse {
        record: usize,
        line: usize,
        #[source]
        source: ParseError,
    },
    #[error(
        "record {record} (line {line}): expected a source and a target structure, found {found}"
    )]
    Arity {
        record: usize,
        line: usize,
        found: usize,
    },
}

impl CorpusError {
    /// 1-based index of the offending record.
    pub fn record(&self) -> usize {
        match self {
            CorpusError::Parse { record, .. } | CorpusError::Arity { record, .. } => *record,
        }
    }
}

pub fn parse_corpus(text: &str) -> Result<Vec<StructurePair>, CorpusError> {
    let mut pairs = Vec::new();
    let mut chunk = String::new();
    let mut chunk_line = 1;
    let mut record = 0;

    let mut flush = |chunk: &mut String, line: usize| -> Result<(), CorpusError> {
        if chunk.trim().is_empty() {
            chunk.clear();
            return Ok(());
        }
        record += 1;
        let structures = FStructure::parse_many(chunk).map_err(|source| CorpusError::Parse {
            record,
            line,
            source,
        })?;
        chunk.clear();
        match <[FStructure; 2]>::try_from(structures) {
            Ok([src, tgt]) => {
                pairs.push((src, tgt));
                Ok(())
            }
            Err(v) => Err(CorpusError::Arity {
                record,
                line,
                found: v.len(),
            }),
        }
    };

    for (n, line) in text.lines().enumerate() {
        if line.trim_end_matches('\r') == RECORD_SEPARATOR {
            flush(&mut chunk, chunk_line)?;
            chunk_line = n + 2;
        } else {
            if chunk.trim().is_empty() && line.trim().is_empty() {
                chunk_line = n + 2;
            }
            chunk.push_str(line);
            chunk.push('\n');
        }
    }
    flush(&mut chunk, chunk_line)?;
    Ok(pairs)
}

pub fn write_corpus(pairs: &[StructurePair]) -> String {
    let mut out = String::new();
    for (k, (src, tgt)) in pairs.iter().enumerate() {
        if k > 0 {
            out.push_str(RECORD_SEPARATOR);
            out.push('\n');
        }
        let _ = writeln!(out, "{src}");
        let _ = writeln!(out, "{tgt}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO: &str = "[vp [subj I] eat [obj apple]]\n[vp essen]\n---\n[np\n  dog]\n[np hund]\n";

    #[test]
    fn reads_records() {
        let pairs = parse_corpus(TWO).unwrap();
        assert_eq!(pairs.len(), 2);
        assert_eq!(pairs[1].0.serialize(), "[np dog]");
        assert_eq!(pairs[1].1.serialize(), "[np hund]");
    }

    #[test]
    fn empty_and_blank_records() {
        assert!(parse_corpus("").unwrap().is_empty());
        assert!(parse_corpus("\n---\n\n---\n").unwrap().is_empty());
        assert_eq!(parse_corpus("---\n[a x] [a y]\n---\n").unwrap().len(), 1);
    }

    #[test]
    fn errors_name_the_record() {
        let text = "[a x]\n[a y]\n---\n[a x\n[a y]\n";
        let err = parse_corpus(text).unwrap_err();
        assert_eq!(err.record(), 2);
        assert!(err.to_string().starts_with("record 2 (line 4)"), "{err}");

        let err = parse_corpus("[a x]\n---\n[a x] [a y]").unwrap_err();
        assert_eq!(
            err,
            CorpusError::Arity {
                record: 1,
                line: 1,
                found: 1
            }
        );
    }

    #[test]
    fn separator_must_be_exact() {
        // `----` is not a separator and is not valid structure text either
        assert!(parse_corpus("[a x] [a y]\n----\n[a x] [a y]").is_err());
    }

    #[test]
    fn write_then_read() {
        let pairs = parse_corpus(TWO).unwrap();
        let text = write_corpus(&pairs);
        assert_eq!(parse_corpus(&text).unwrap(), pairs);
        assert_eq!(write_corpus(&parse_corpus(&text).unwrap()), text);
    }
}
