//! Minimal-pair corpora: synthetic generation from constraint grammars,
//! BLiMP-format ingestion, JSONL serialization, and stratified splits.

mod blimp;
mod grammar;

pub use blimp::{collect_blimp_words, parse_blimp_jsonl};
pub use grammar::{
    builtin_grammar, builtin_grammar_names, generate_pairs, Agreement, ConstraintGrammar,
    LexEntry, Slot, Template,
};

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seeding;

/// One well-formed / ill-formed sentence pair.
///
/// Token sequences share a common prefix up to `divergence_index`, where the
/// first differing token sits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalPair {
    pub id: String,
    pub phenomenon: String,
    pub good_tokens: Vec<usize>,
    pub bad_tokens: Vec<usize>,
    pub divergence_index: usize,
}

impl MinimalPair {
    /// Check the structural invariants: the sequences differ, the divergence
    /// index is in range, and the prefixes before it match.
    pub fn validate(&self) -> Result<()> {
        if self.good_tokens == self.bad_tokens {
            return Err(Error::Validation(format!(
                "pair '{}': good and bad token sequences are identical",
                self.id
            )));
        }
        let min_len = self.good_tokens.len().min(self.bad_tokens.len());
        if self.divergence_index >= min_len {
            return Err(Error::Validation(format!(
                "pair '{}': divergence index {} not below min length {}",
                self.id, self.divergence_index, min_len
            )));
        }
        if self.good_tokens[..self.divergence_index] != self.bad_tokens[..self.divergence_index] {
            return Err(Error::Validation(format!(
                "pair '{}': token prefixes differ before divergence index {}",
                self.id, self.divergence_index
            )));
        }
        if self.good_tokens[self.divergence_index] == self.bad_tokens[self.divergence_index] {
            return Err(Error::Validation(format!(
                "pair '{}': tokens at divergence index {} are equal",
                self.id, self.divergence_index
            )));
        }
        Ok(())
    }
}

/// Compute the first position at which two token sequences differ.
/// Returns an error if they are identical (including the equal-prefix case
/// where one is a prefix of the other but equal over the common length —
/// that still counts as differing at the common length, which is invalid
/// for a minimal pair because the divergence must be a real token).
pub fn first_divergence(good: &[usize], bad: &[usize]) -> Result<usize> {
    let min_len = good.len().min(bad.len());
    for i in 0..min_len {
        if good[i] != bad[i] {
            return Ok(i);
        }
    }
    Err(Error::Validation(
        "sentences do not diverge within their common prefix".to_string(),
    ))
}

/// Train/test partition of a corpus, stratified by phenomenon.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetSplit {
    pub train: Vec<MinimalPair>,
    pub test: Vec<MinimalPair>,
    pub ratio: f64,
    pub seed: u64,
}

/// Split pairs into train/test, stratified per phenomenon.
///
/// Per phenomenon the train size is `round(ratio * n)` clamped to `[1, n-1]`
/// so both sides stay populated; membership is drawn with an RNG derived from
/// `(seed, phenomenon)`, so adding a phenomenon never reshuffles another.
/// Output preserves the input pair order within each side.
pub fn split_stratified(pairs: &[MinimalPair], ratio: f64, seed: u64) -> Result<DatasetSplit> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::Argument(format!(
            "split ratio must be in (0, 1), got {ratio}"
        )));
    }
    let mut by_phenomenon: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, p) in pairs.iter().enumerate() {
        by_phenomenon.entry(&p.phenomenon).or_default().push(i);
    }
    for (phen, idx) in &by_phenomenon {
        if idx.len() < 2 {
            return Err(Error::Stratification {
                phenomenon: phen.to_string(),
                count: idx.len(),
            });
        }
    }

    let mut in_train = vec![false; pairs.len()];
    for (phen, idx) in &by_phenomenon {
        let n = idx.len();
        let n_train = ((ratio * n as f64).round() as usize).clamp(1, n - 1);
        let mut order: Vec<usize> = idx.clone();
        let mut rng = seeding::rng_from_seed(seeding::derive_seed(seed, phen));
        fisher_yates(&mut order, &mut rng);
        for &i in order.iter().take(n_train) {
            in_train[i] = true;
        }
    }

    let mut train = Vec::new();
    let mut test = Vec::new();
    for (i, p) in pairs.iter().enumerate() {
        if in_train[i] {
            train.push(p.clone());
        } else {
            test.push(p.clone());
        }
    }
    Ok(DatasetSplit {
        train,
        test,
        ratio,
        seed,
    })
}

/// In-place Fisher-Yates shuffle with an explicit RNG, used instead of
/// `SliceRandom::shuffle` so the byte-level behavior is pinned by this crate.
pub(crate) fn fisher_yates<T, R: rand::Rng>(items: &mut [T], rng: &mut R) {
    for i in (1..items.len()).rev() {
        let j = rng.random_range(0..=i);
        items.swap(i, j);
    }
}

/// Serialize pairs as JSONL, one object per line, in input order.
pub fn write_corpus<W: Write>(pairs: &[MinimalPair], mut out: W) -> Result<()> {
    for pair in pairs {
        serde_json::to_writer(&mut out, pair)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Parse a corpus JSONL stream produced by [`write_corpus`], validating every
/// pair and rejecting duplicate ids.
pub fn read_corpus<R: BufRead>(input: R) -> Result<Vec<MinimalPair>> {
    let mut pairs = Vec::new();
    let mut seen = BTreeSet::new();
    for (lineno, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let pair: MinimalPair = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: lineno + 1,
            reason: e.to_string(),
        })?;
        pair.validate()?;
        if !seen.insert(pair.id.clone()) {
            return Err(Error::Parse {
                line: lineno + 1,
                reason: format!("duplicate pair id '{}'", pair.id),
            });
        }
        pairs.push(pair);
    }
    Ok(pairs)
}

/// Distinct phenomenon labels in corpus order of first appearance.
pub fn phenomena(pairs: &[MinimalPair]) -> Vec<String> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for p in pairs {
        if seen.insert(p.phenomenon.clone()) {
            out.push(p.phenomenon.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(id: &str, phen: &str, good: Vec<usize>, bad: Vec<usize>) -> MinimalPair {
        let divergence_index = first_divergence(&good, &bad).unwrap();
        MinimalPair {
            id: id.to_string(),
            phenomenon: phen.to_string(),
            good_tokens: good,
            bad_tokens: bad,
            divergence_index,
        }
    }

    fn corpus_of(phen: &str, n: usize) -> Vec<MinimalPair> {
        (0..n)
            .map(|i| pair(&format!("{phen}-{i}"), phen, vec![1, 2 + i], vec![1, 100 + i]))
            .collect()
    }

    #[test]
    fn exact_division_splits_exactly() {
        // 10 pairs at ratio 0.8 -> 8 train, 2 test.
        let split = split_stratified(&corpus_of("a", 10), 0.8, 1).unwrap();
        assert_eq!(split.train.len(), 8);
        assert_eq!(split.test.len(), 2);
    }

    #[test]
    fn many_phenomena_stratify_per_group() {
        // 13 phenomena x 100 pairs at 0.8 -> 80 train in every phenomenon.
        let mut pairs = Vec::new();
        for p in 0..13 {
            pairs.extend(corpus_of(&format!("ph{p:02}"), 100));
        }
        let split = split_stratified(&pairs, 0.8, 9).unwrap();
        for p in 0..13 {
            let name = format!("ph{p:02}");
            let n_train = split.train.iter().filter(|x| x.phenomenon == name).count();
            let n_test = split.test.iter().filter(|x| x.phenomenon == name).count();
            assert_eq!(n_train, 80, "phenomenon {name}");
            assert_eq!(n_test, 20, "phenomenon {name}");
        }
    }

    #[test]
    fn odd_sizes_round_within_one_pair() {
        // 7 pairs at 0.8: valid roundings of 5.6 are {5, 6}.
        let split = split_stratified(&corpus_of("a", 7), 0.8, 3).unwrap();
        assert!(
            split.train.len() == 5 || split.train.len() == 6,
            "train size {} not within 1 of 5.6",
            split.train.len()
        );
    }

    #[test]
    fn split_is_disjoint_and_deterministic() {
        let pairs = corpus_of("a", 23);
        let s1 = split_stratified(&pairs, 0.7, 42).unwrap();
        let s2 = split_stratified(&pairs, 0.7, 42).unwrap();
        assert_eq!(s1.train, s2.train);
        assert_eq!(s1.test, s2.test);
        let train_ids: BTreeSet<_> = s1.train.iter().map(|p| &p.id).collect();
        assert!(s1.test.iter().all(|p| !train_ids.contains(&p.id)));
        assert_eq!(s1.train.len() + s1.test.len(), pairs.len());
    }

    #[test]
    fn tiny_phenomenon_is_rejected() {
        let mut pairs = corpus_of("a", 5);
        pairs.push(pair("b-0", "b", vec![1, 2], vec![1, 3]));
        let err = split_stratified(&pairs, 0.8, 0).unwrap_err();
        assert!(matches!(err, Error::Stratification { .. }));
    }

    #[test]
    fn corpus_round_trips_identically() {
        let pairs = corpus_of("a", 12);
        let mut buf = Vec::new();
        write_corpus(&pairs, &mut buf).unwrap();
        let back = read_corpus(buf.as_slice()).unwrap();
        assert_eq!(back, pairs);

        let mut buf2 = Vec::new();
        write_corpus(&back, &mut buf2).unwrap();
        assert_eq!(buf, buf2, "serialization is byte-stable");
    }

    #[test]
    fn validate_rejects_broken_pairs() {
        let ok = pair("x", "p", vec![1, 2, 3], vec![1, 9, 3]);
        ok.validate().unwrap();

        let mut same = ok.clone();
        same.bad_tokens = same.good_tokens.clone();
        assert!(same.validate().is_err());

        let mut bad_idx = ok.clone();
        bad_idx.divergence_index = 5;
        assert!(bad_idx.validate().is_err());

        let mut bad_prefix = ok;
        bad_prefix.divergence_index = 2;
        assert!(bad_prefix.validate().is_err());
    }
}
