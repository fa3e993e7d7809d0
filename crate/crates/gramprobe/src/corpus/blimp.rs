//! BLiMP-format ingestion: JSONL with `sentence_good` / `sentence_bad` and a
//! phenomenon label (`phenomenon`, or the BLiMP field name `linguistics_term`).

use std::collections::BTreeSet;
use std::io::BufRead;

use serde_json::Value;

use crate::corpus::{first_divergence, MinimalPair};
use crate::error::{Error, Result};
use crate::vocab::Vocabulary;

fn field<'a>(obj: &'a Value, line: usize, names: &[&str]) -> Result<&'a str> {
    for name in names {
        if let Some(s) = obj.get(*name).and_then(Value::as_str) {
            return Ok(s);
        }
    }
    Err(Error::Parse {
        line,
        reason: format!("missing string field (tried {})", names.join(", ")),
    })
}

/// Parse a BLiMP-format JSONL stream into minimal pairs using the closed
/// whitespace tokenizer. Ingested pairs may differ in more than one token;
/// the divergence index is the first mismatch position.
pub fn parse_blimp_jsonl<R: BufRead>(input: R, vocab: &Vocabulary) -> Result<Vec<MinimalPair>> {
    let mut pairs = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let obj: Value = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: lineno,
            reason: e.to_string(),
        })?;
        let good = field(&obj, lineno, &["sentence_good"])?;
        let bad = field(&obj, lineno, &["sentence_bad"])?;
        let phenomenon = field(&obj, lineno, &["phenomenon", "linguistics_term"])?;

        let good_tokens = vocab.tokenize(good)?;
        let bad_tokens = vocab.tokenize(bad)?;
        if good_tokens.is_empty() || bad_tokens.is_empty() {
            return Err(Error::Validation(format!(
                "line {lineno}: empty sentence after tokenization"
            )));
        }
        if good_tokens == bad_tokens {
            return Err(Error::Validation(format!(
                "line {lineno}: sentence_good and sentence_bad are identical"
            )));
        }
        let divergence_index = first_divergence(&good_tokens, &bad_tokens).map_err(|_| {
            Error::Validation(format!(
                "line {lineno}: one sentence is a prefix of the other; no diverging token"
            ))
        })?;
        let pair = MinimalPair {
            id: format!("{phenomenon}-{lineno}"),
            phenomenon: phenomenon.to_string(),
            good_tokens,
            bad_tokens,
            divergence_index,
        };
        pair.validate()?;
        pairs.push(pair);
    }
    Ok(pairs)
}

/// First pass over a BLiMP stream: collect the word set, for building a
/// closed vocabulary before [`parse_blimp_jsonl`].
pub fn collect_blimp_words<R: BufRead>(input: R) -> Result<BTreeSet<String>> {
    let mut words = BTreeSet::new();
    for (idx, line) in input.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let obj: Value = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: lineno,
            reason: e.to_string(),
        })?;
        for key in ["sentence_good", "sentence_bad"] {
            if let Some(s) = obj.get(key).and_then(Value::as_str) {
                words.extend(s.split_whitespace().map(str::to_string));
            }
        }
    }
    Ok(words)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vocab() -> Vocabulary {
        Vocabulary::from_words(["the", "cat", "cats", "sleeps", "sleep", "a", "dog", "ran"])
    }

    #[test]
    fn two_lines_parse_in_order() {
        let data = concat!(
            "{\"sentence_good\":\"the cat sleeps\",\"sentence_bad\":\"the cat sleep\",\"phenomenon\":\"sv\"}\n",
            "{\"sentence_good\":\"the cats sleep\",\"sentence_bad\":\"the cats sleeps\",\"linguistics_term\":\"sv\"}\n",
        );
        let pairs = parse_blimp_jsonl(data.as_bytes(), &vocab()).unwrap();
        assert_eq!(pairs.len(), 2);
        assert_eq!(pairs[0].id, "sv-1");
        assert_eq!(pairs[1].id, "sv-2");
        assert_eq!(pairs[0].divergence_index, 2);
    }

    #[test]
    fn identical_sentences_are_rejected() {
        let data = "{\"sentence_good\":\"a\",\"sentence_bad\":\"a\",\"phenomenon\":\"x\"}\n";
        let err = parse_blimp_jsonl(data.as_bytes(), &vocab()).unwrap_err();
        assert!(matches!(err, Error::Validation(_)), "got {err:?}");
    }

    #[test]
    fn malformed_json_reports_line_number() {
        let data = concat!(
            "{\"sentence_good\":\"the cat sleeps\",\"sentence_bad\":\"the cat sleep\",\"phenomenon\":\"sv\"}\n",
            "{not json\n",
        );
        let err = parse_blimp_jsonl(data.as_bytes(), &vocab()).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn oov_word_is_named() {
        let data =
            "{\"sentence_good\":\"the zebra sleeps\",\"sentence_bad\":\"the zebra sleep\",\"phenomenon\":\"sv\"}\n";
        let err = parse_blimp_jsonl(data.as_bytes(), &vocab()).unwrap_err();
        match err {
            Error::Vocab { token } => assert_eq!(token, "zebra"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn divergence_matches_brute_force_scan() {
        // Third word differs under whitespace tokenization.
        let data =
            "{\"sentence_good\":\"the cat sleeps\",\"sentence_bad\":\"the cat ran\",\"phenomenon\":\"x\"}\n";
        let v = vocab();
        let pairs = parse_blimp_jsonl(data.as_bytes(), &v).unwrap();
        let p = &pairs[0];
        // Independent scan over word strings.
        let good: Vec<&str> = "the cat sleeps".split_whitespace().collect();
        let bad: Vec<&str> = "the cat ran".split_whitespace().collect();
        let expect = good.iter().zip(&bad).position(|(a, b)| a != b).unwrap();
        assert_eq!(p.divergence_index, expect);
        assert_eq!(p.divergence_index, 2);
    }

    #[test]
    fn word_collection_covers_both_sides() {
        let data =
            "{\"sentence_good\":\"the cat sleeps\",\"sentence_bad\":\"the cat sleep\",\"phenomenon\":\"sv\"}\n";
        let words = collect_blimp_words(data.as_bytes()).unwrap();
        assert!(words.contains("sleeps") && words.contains("sleep") && words.contains("the"));
    }
}
