//! Closed word-level vocabulary with whitespace tokenization.
//!
//! Token id 0 is always the BOS marker. Word ids are assigned in sorted word
//! order, so a vocabulary built from the same word set is always identical
//! regardless of insertion order.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Surface form of the BOS marker. Never produced by [`Vocabulary::tokenize`].
pub const BOS_WORD: &str = "<bos>";

/// Token id of the BOS marker.
pub const BOS_ID: usize = 0;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vocabulary {
    words: Vec<String>,
    #[serde(skip)]
    index: HashMap<String, usize>,
}

impl Vocabulary {
    /// Build a vocabulary from a set of surface words. BOS is added
    /// automatically; the words get ids 1.. in sorted order.
    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let set: BTreeSet<String> = words
            .into_iter()
            .map(Into::into)
            .filter(|w| w != BOS_WORD)
            .collect();
        let mut all = Vec::with_capacity(set.len() + 1);
        all.push(BOS_WORD.to_string());
        all.extend(set);
        let index = all
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        Vocabulary { words: all, index }
    }

    /// Rebuild the word index after deserialization.
    pub fn rebuild_index(&mut self) {
        self.index = self
            .words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn id_of(&self, word: &str) -> Option<usize> {
        self.index.get(word).copied()
    }

    pub fn word(&self, id: usize) -> Option<&str> {
        self.words.get(id).map(String::as_str)
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    /// Whitespace-split a sentence into token ids. Out-of-vocabulary words are
    /// an error naming the offending token; BOS is never emitted.
    pub fn tokenize(&self, sentence: &str) -> Result<Vec<usize>> {
        sentence
            .split_whitespace()
            .map(|w| {
                self.id_of(w).ok_or_else(|| Error::Vocab {
                    token: w.to_string(),
                })
            })
            .collect()
    }

    /// Inverse of [`Vocabulary::tokenize`] for display purposes.
    pub fn detokenize(&self, tokens: &[usize]) -> Result<String> {
        let words: Result<Vec<&str>> = tokens
            .iter()
            .map(|&t| {
                self.word(t).ok_or(Error::IndexOutOfRange {
                    index: t,
                    size: self.len(),
                    what: "vocabulary",
                })
            })
            .collect();
        Ok(words?.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_sorted_and_bos_is_zero() {
        let v = Vocabulary::from_words(["cat", "a", "b"]);
        assert_eq!(v.word(BOS_ID), Some(BOS_WORD));
        assert_eq!(v.id_of("a"), Some(1));
        assert_eq!(v.id_of("b"), Some(2));
        assert_eq!(v.id_of("cat"), Some(3));
        assert_eq!(v.len(), 4);
    }

    #[test]
    fn insertion_order_does_not_matter() {
        let a = Vocabulary::from_words(["x", "y", "z"]);
        let b = Vocabulary::from_words(["z", "x", "y", "x"]);
        assert_eq!(a, b);
    }

    #[test]
    fn tokenize_round_trips() {
        let v = Vocabulary::from_words(["the", "cat", "sleeps"]);
        let ids = v.tokenize("the cat sleeps").unwrap();
        assert_eq!(v.detokenize(&ids).unwrap(), "the cat sleeps");
    }

    #[test]
    fn oov_reports_the_token() {
        let v = Vocabulary::from_words(["the"]);
        let err = v.tokenize("the dog").unwrap_err();
        match err {
            Error::Vocab { token } => assert_eq!(token, "dog"),
            other => panic!("unexpected error {other:?}"),
        }
    }
}
