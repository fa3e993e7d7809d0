//! Constraint grammars for synthetic minimal pairs.
//!
//! A grammar is a set of slot templates over a feature-annotated lexicon. The
//! well-formed sentence fills every slot subject to agreement constraints; the
//! ill-formed variant swaps the filler of one designated slot for its
//! counterpart that differs only in the violated feature (e.g. the other
//! number form of the same verb). Every generated pair therefore differs in
//! exactly one surface word, at a position known from the template.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::corpus::{fisher_yates, MinimalPair};
use crate::error::{Error, Result};
use crate::seeding;
use crate::vocab::Vocabulary;

/// One word with its feature annotations (e.g. `num=sg`, `lemma=sleep`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexEntry {
    pub word: String,
    pub features: BTreeMap<String, String>,
}

impl LexEntry {
    pub fn new(word: &str, features: &[(&str, &str)]) -> Self {
        LexEntry {
            word: word.to_string(),
            features: features
                .iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
        }
    }

    pub fn feature(&self, name: &str) -> Option<&str> {
        self.features.get(name).map(String::as_str)
    }
}

/// Ties a slot's filler to an earlier slot: both must carry the same value
/// for `feature`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Agreement {
    pub with_slot: usize,
    pub feature: String,
}

/// One template position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Slot {
    /// A literal word.
    Fixed(String),
    /// Filled from a lexicon class, optionally agreeing with an earlier slot
    /// and/or requiring fixed feature values.
    Lex {
        class: String,
        agree: Option<Agreement>,
        require: Vec<(String, String)>,
    },
}

impl Slot {
    pub fn fixed(word: &str) -> Self {
        Slot::Fixed(word.to_string())
    }

    pub fn lex(class: &str) -> Self {
        Slot::Lex {
            class: class.to_string(),
            agree: None,
            require: Vec::new(),
        }
    }

    pub fn lex_agree(class: &str, with_slot: usize, feature: &str) -> Self {
        Slot::Lex {
            class: class.to_string(),
            agree: Some(Agreement {
                with_slot,
                feature: feature.to_string(),
            }),
            require: Vec::new(),
        }
    }

    pub fn lex_require(class: &str, require: &[(&str, &str)]) -> Self {
        Slot::Lex {
            class: class.to_string(),
            agree: None,
            require: require
                .iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
        }
    }
}

/// A slot pattern plus the slot the ill-formed variant perturbs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Template {
    pub slots: Vec<Slot>,
    pub violation_slot: usize,
}

impl Template {
    pub fn new(slots: Vec<Slot>, violation_slot: usize) -> Self {
        Template {
            slots,
            violation_slot,
        }
    }
}

/// A phenomenon's templates, lexicon, and violated feature.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintGrammar {
    pub phenomenon: String,
    pub templates: Vec<Template>,
    pub lexicon: BTreeMap<String, Vec<LexEntry>>,
    /// Feature flipped to build the ill-formed variant; the perturbed slot's
    /// filler is replaced by the unique entry of the same class that differs
    /// only in this feature.
    pub violation_feature: String,
}

impl ConstraintGrammar {
    /// Structural sanity checks: classes exist and are non-empty with unique
    /// words, agreements point backwards at lex slots, and every possible
    /// filler of a violated slot has exactly one counterpart.
    pub fn validate(&self) -> Result<()> {
        let fail = |reason: String| Error::Grammar {
            phenomenon: self.phenomenon.clone(),
            reason,
        };
        if self.templates.is_empty() {
            return Err(fail("no templates".into()));
        }
        for (class, entries) in &self.lexicon {
            if entries.is_empty() {
                return Err(fail(format!("lexicon class '{class}' is empty")));
            }
            let words: BTreeSet<&str> = entries.iter().map(|e| e.word.as_str()).collect();
            if words.len() != entries.len() {
                return Err(fail(format!("lexicon class '{class}' has duplicate words")));
            }
        }
        for (ti, template) in self.templates.iter().enumerate() {
            for (si, slot) in template.slots.iter().enumerate() {
                if let Slot::Lex { class, agree, .. } = slot {
                    if !self.lexicon.contains_key(class) {
                        return Err(fail(format!(
                            "template {ti} slot {si}: unknown class '{class}'"
                        )));
                    }
                    if let Some(a) = agree {
                        if a.with_slot >= si {
                            return Err(fail(format!(
                                "template {ti} slot {si}: agreement must reference an earlier slot"
                            )));
                        }
                        if !matches!(template.slots[a.with_slot], Slot::Lex { .. }) {
                            return Err(fail(format!(
                                "template {ti} slot {si}: agreement target is not a lex slot"
                            )));
                        }
                    }
                }
            }
            let vslot = template.violation_slot;
            let Some(Slot::Lex { class, .. }) = template.slots.get(vslot) else {
                return Err(fail(format!(
                    "template {ti}: violation slot {vslot} is not a lex slot"
                )));
            };
            for entry in &self.lexicon[class] {
                let counterparts = self.counterparts(class, entry);
                if counterparts.len() != 1 {
                    return Err(fail(format!(
                        "template {ti}: entry '{}' of class '{class}' has {} counterparts under feature '{}', need exactly 1",
                        entry.word,
                        counterparts.len(),
                        self.violation_feature
                    )));
                }
                if counterparts[0].word == entry.word {
                    return Err(fail(format!(
                        "template {ti}: counterpart of '{}' has the same surface form",
                        entry.word
                    )));
                }
            }
        }
        Ok(())
    }

    /// Entries of `class` that differ from `entry` only in the violation
    /// feature (which must actually differ).
    fn counterparts<'a>(&'a self, class: &str, entry: &LexEntry) -> Vec<&'a LexEntry> {
        self.lexicon[class]
            .iter()
            .filter(|cand| {
                cand.feature(&self.violation_feature) != entry.feature(&self.violation_feature)
                    && cand
                        .features
                        .iter()
                        .filter(|(k, _)| *k != &self.violation_feature)
                        .all(|(k, v)| entry.feature(k) == Some(v))
                    && entry
                        .features
                        .keys()
                        .filter(|k| *k != &self.violation_feature)
                        .all(|k| cand.features.contains_key(k))
            })
            .collect()
    }

    /// All surface words this grammar can emit (fixed words and lexicon).
    pub fn surface_words(&self) -> BTreeSet<String> {
        let mut words = BTreeSet::new();
        for template in &self.templates {
            for slot in &template.slots {
                if let Slot::Fixed(w) = slot {
                    words.insert(w.clone());
                }
            }
        }
        for entries in self.lexicon.values() {
            for e in entries {
                words.insert(e.word.clone());
            }
        }
        words
    }

    /// Deterministically enumerate every distinct (good, bad) word-sequence
    /// pair the grammar can produce, in template/lexicon order.
    pub fn enumerate_pairs(&self) -> Vec<(Vec<String>, Vec<String>, usize)> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        for template in &self.templates {
            let mut fillers: Vec<Option<&LexEntry>> = vec![None; template.slots.len()];
            self.fill_from(template, 0, &mut fillers, &mut out, &mut seen);
        }
        out
    }

    fn fill_from<'a>(
        &'a self,
        template: &'a Template,
        slot_idx: usize,
        fillers: &mut Vec<Option<&'a LexEntry>>,
        out: &mut Vec<(Vec<String>, Vec<String>, usize)>,
        seen: &mut BTreeSet<(Vec<String>, Vec<String>)>,
    ) {
        if slot_idx == template.slots.len() {
            let good: Vec<String> = template
                .slots
                .iter()
                .enumerate()
                .map(|(i, s)| match s {
                    Slot::Fixed(w) => w.clone(),
                    Slot::Lex { .. } => fillers[i].expect("filled").word.clone(),
                })
                .collect();
            let vslot = template.violation_slot;
            let entry = fillers[vslot].expect("violation slot filled");
            let class = match &template.slots[vslot] {
                Slot::Lex { class, .. } => class,
                Slot::Fixed(_) => unreachable!("validated"),
            };
            let counterpart = self.counterparts(class, entry)[0];
            let mut bad = good.clone();
            bad[vslot] = counterpart.word.clone();
            if seen.insert((good.clone(), bad.clone())) {
                out.push((good, bad, vslot));
            }
            return;
        }
        match &template.slots[slot_idx] {
            Slot::Fixed(_) => self.fill_from(template, slot_idx + 1, fillers, out, seen),
            Slot::Lex {
                class,
                agree,
                require,
            } => {
                for entry in &self.lexicon[class] {
                    if let Some(a) = agree {
                        let bound = fillers[a.with_slot].expect("earlier slot filled");
                        if entry.feature(&a.feature) != bound.feature(&a.feature) {
                            continue;
                        }
                    }
                    if !require
                        .iter()
                        .all(|(k, v)| entry.feature(k) == Some(v.as_str()))
                    {
                        continue;
                    }
                    fillers[slot_idx] = Some(entry);
                    self.fill_from(template, slot_idx + 1, fillers, out, seen);
                    fillers[slot_idx] = None;
                }
            }
        }
    }
}

/// Generate `n` distinct minimal pairs from a grammar.
///
/// The full pair space is enumerated deterministically, then a seeded shuffle
/// picks `n` without replacement, so the result depends only on
/// `(grammar, n, seed)`.
pub fn generate_pairs(
    grammar: &ConstraintGrammar,
    n: usize,
    seed: u64,
    vocab: &Vocabulary,
) -> Result<Vec<MinimalPair>> {
    if n == 0 {
        return Err(Error::Argument("requested pair count must be >= 1".into()));
    }
    grammar.validate()?;
    let all = grammar.enumerate_pairs();
    if all.len() < n {
        return Err(Error::Capacity {
            phenomenon: grammar.phenomenon.clone(),
            capacity: all.len(),
            requested: n,
        });
    }
    let mut order: Vec<usize> = (0..all.len()).collect();
    let mut rng = seeding::rng_from_seed(seeding::derive_seed(seed, &grammar.phenomenon));
    fisher_yates(&mut order, &mut rng);

    let mut pairs = Vec::with_capacity(n);
    for (i, &idx) in order.iter().take(n).enumerate() {
        let (good_words, bad_words, vslot) = &all[idx];
        let good_tokens = tokenize_words(good_words, vocab, &grammar.phenomenon)?;
        let bad_tokens = tokenize_words(bad_words, vocab, &grammar.phenomenon)?;
        let pair = MinimalPair {
            id: format!("{}-{:04}", grammar.phenomenon, i),
            phenomenon: grammar.phenomenon.clone(),
            good_tokens,
            bad_tokens,
            divergence_index: *vslot,
        };
        pair.validate()?;
        pairs.push(pair);
    }
    Ok(pairs)
}

fn tokenize_words(words: &[String], vocab: &Vocabulary, phenomenon: &str) -> Result<Vec<usize>> {
    words
        .iter()
        .map(|w| {
            vocab.id_of(w).ok_or_else(|| Error::Grammar {
                phenomenon: phenomenon.to_string(),
                reason: format!("generated word '{w}' is not in the vocabulary"),
            })
        })
        .collect()
}

fn entries(pairs: &[(&str, &[(&str, &str)])]) -> Vec<LexEntry> {
    pairs.iter().map(|(w, f)| LexEntry::new(w, f)).collect()
}

const NOUN_LEMMAS: &[(&str, &str)] = &[
    ("cat", "cats"),
    ("dog", "dogs"),
    ("bird", "birds"),
    ("fox", "foxes"),
    ("horse", "horses"),
    ("mouse", "mice"),
    ("rabbit", "rabbits"),
    ("turtle", "turtles"),
    ("wolf", "wolves"),
    ("bear", "bears"),
];

const VERB_LEMMAS: &[(&str, &str, &str)] = &[
    // (3sg present, base/plural present, past)
    ("sleeps", "sleep", "slept"),
    ("runs", "run", "ran"),
    ("jumps", "jump", "jumped"),
    ("sings", "sing", "sang"),
    ("hides", "hide", "hid"),
    ("waits", "wait", "waited"),
    ("swims", "swim", "swam"),
    ("plays", "play", "played"),
];

const TRANS_PAST: &[&str] = &["praised", "watched", "trusted", "helped", "startled", "copied"];
const ADVERBS: &[&str] = &["often", "quietly", "rarely", "happily", "slowly", "eagerly"];
const ADJECTIVES: &[&str] = &["old", "young", "small", "big", "gray", "wild"];

fn noun_entries() -> Vec<LexEntry> {
    let mut out = Vec::new();
    for (sg, pl) in NOUN_LEMMAS {
        out.push(LexEntry::new(sg, &[("lemma", sg), ("num", "sg")]));
        out.push(LexEntry::new(pl, &[("lemma", sg), ("num", "pl")]));
    }
    out
}

fn present_verb_entries() -> Vec<LexEntry> {
    let mut out = Vec::new();
    for (sg, base, _) in VERB_LEMMAS {
        out.push(LexEntry::new(sg, &[("lemma", base), ("num", "sg")]));
        out.push(LexEntry::new(base, &[("lemma", base), ("num", "pl")]));
    }
    out
}

fn past_verb_entries() -> Vec<LexEntry> {
    VERB_LEMMAS
        .iter()
        .map(|(_, base, past)| LexEntry::new(past, &[("lemma", base)]))
        .collect()
}

fn plain_class(words: &[&str]) -> Vec<LexEntry> {
    words.iter().map(|w| LexEntry::new(w, &[])).collect()
}

/// Subject-verb number agreement: "the cat sleeps" / "the cat sleep".
fn subject_verb_agreement() -> ConstraintGrammar {
    let mut lexicon = BTreeMap::new();
    lexicon.insert("noun".to_string(), noun_entries());
    lexicon.insert("verb".to_string(), present_verb_entries());
    lexicon.insert("adv".to_string(), plain_class(ADVERBS));
    lexicon.insert("adj".to_string(), plain_class(ADJECTIVES));
    ConstraintGrammar {
        phenomenon: "subject_verb_agreement".to_string(),
        templates: vec![
            // the N V
            Template::new(
                vec![
                    Slot::fixed("the"),
                    Slot::lex("noun"),
                    Slot::lex_agree("verb", 1, "num"),
                ],
                2,
            ),
            // the N ADV V
            Template::new(
                vec![
                    Slot::fixed("the"),
                    Slot::lex("noun"),
                    Slot::lex("adv"),
                    Slot::lex_agree("verb", 1, "num"),
                ],
                3,
            ),
            // the ADJ N V
            Template::new(
                vec![
                    Slot::fixed("the"),
                    Slot::lex("adj"),
                    Slot::lex("noun"),
                    Slot::lex_agree("verb", 2, "num"),
                ],
                3,
            ),
        ],
        lexicon,
        violation_feature: "num".to_string(),
    }
}

/// Determiner-noun number agreement: "this cat slept" / "these cat slept".
fn determiner_noun_agreement() -> ConstraintGrammar {
    let mut lexicon = BTreeMap::new();
    lexicon.insert(
        "dem".to_string(),
        entries(&[
            ("this", &[("pair", "prox"), ("num", "sg")]),
            ("these", &[("pair", "prox"), ("num", "pl")]),
            ("that", &[("pair", "dist"), ("num", "sg")]),
            ("those", &[("pair", "dist"), ("num", "pl")]),
        ]),
    );
    lexicon.insert("noun".to_string(), noun_entries());
    lexicon.insert("verb_past".to_string(), past_verb_entries());
    lexicon.insert("adj".to_string(), plain_class(ADJECTIVES));
    ConstraintGrammar {
        phenomenon: "determiner_noun_agreement".to_string(),
        templates: vec![
            // DEM N Vpast
            Template::new(
                vec![
                    Slot::lex("dem"),
                    Slot::lex_agree("noun", 0, "num"),
                    Slot::lex("verb_past"),
                ],
                0,
            ),
            // DEM ADJ N Vpast
            Template::new(
                vec![
                    Slot::lex("dem"),
                    Slot::lex("adj"),
                    Slot::lex_agree("noun", 0, "num"),
                    Slot::lex("verb_past"),
                ],
                0,
            ),
        ],
        lexicon,
        violation_feature: "num".to_string(),
    }
}

/// Anaphor number agreement: "the cat praised itself" / "... themselves".
fn anaphor_agreement() -> ConstraintGrammar {
    let mut lexicon = BTreeMap::new();
    lexicon.insert("noun".to_string(), noun_entries());
    lexicon.insert("verb_trans".to_string(), plain_class(TRANS_PAST));
    lexicon.insert(
        "refl".to_string(),
        entries(&[
            ("itself", &[("pair", "refl"), ("num", "sg")]),
            ("themselves", &[("pair", "refl"), ("num", "pl")]),
        ]),
    );
    lexicon.insert("adv".to_string(), plain_class(ADVERBS));
    ConstraintGrammar {
        phenomenon: "anaphor_agreement".to_string(),
        templates: vec![
            // the N Vtrans REFL
            Template::new(
                vec![
                    Slot::fixed("the"),
                    Slot::lex("noun"),
                    Slot::lex("verb_trans"),
                    Slot::lex_agree("refl", 1, "num"),
                ],
                3,
            ),
            // the N ADV Vtrans REFL
            Template::new(
                vec![
                    Slot::fixed("the"),
                    Slot::lex("noun"),
                    Slot::lex("adv"),
                    Slot::lex("verb_trans"),
                    Slot::lex_agree("refl", 1, "num"),
                ],
                4,
            ),
        ],
        lexicon,
        violation_feature: "num".to_string(),
    }
}

/// NPI licensing: "no cat could ever sleep" / "the cat could ever sleep".
fn npi_licensing() -> ConstraintGrammar {
    let mut lexicon = BTreeMap::new();
    lexicon.insert(
        "licensor".to_string(),
        entries(&[
            ("no", &[("pair", "lic"), ("polarity", "neg")]),
            ("the", &[("pair", "lic"), ("polarity", "pos")]),
        ]),
    );
    lexicon.insert("noun".to_string(), noun_entries());
    lexicon.insert(
        "verb_base".to_string(),
        VERB_LEMMAS
            .iter()
            .map(|(_, base, _)| LexEntry::new(base, &[("lemma", base)]))
            .collect(),
    );
    lexicon.insert("adv".to_string(), plain_class(ADVERBS));
    ConstraintGrammar {
        phenomenon: "npi_licensing".to_string(),
        templates: vec![
            // no N could ever Vbase
            Template::new(
                vec![
                    Slot::lex_require("licensor", &[("polarity", "neg")]),
                    Slot::lex("noun"),
                    Slot::fixed("could"),
                    Slot::fixed("ever"),
                    Slot::lex("verb_base"),
                ],
                0,
            ),
            // no N could ever Vbase ADV
            Template::new(
                vec![
                    Slot::lex_require("licensor", &[("polarity", "neg")]),
                    Slot::lex("noun"),
                    Slot::fixed("could"),
                    Slot::fixed("ever"),
                    Slot::lex("verb_base"),
                    Slot::lex("adv"),
                ],
                0,
            ),
        ],
        lexicon,
        violation_feature: "polarity".to_string(),
    }
}

/// Names of the built-in grammars, in canonical order.
pub fn builtin_grammar_names() -> Vec<&'static str> {
    vec![
        "subject_verb_agreement",
        "determiner_noun_agreement",
        "anaphor_agreement",
        "npi_licensing",
    ]
}

/// Look up a built-in grammar by name.
pub fn builtin_grammar(name: &str) -> Option<ConstraintGrammar> {
    match name {
        "subject_verb_agreement" => Some(subject_verb_agreement()),
        "determiner_noun_agreement" => Some(determiner_noun_agreement()),
        "anaphor_agreement" => Some(anaphor_agreement()),
        "npi_licensing" => Some(npi_licensing()),
        _ => None,
    }
}

/// Vocabulary covering a set of grammars.
pub fn vocabulary_for(grammars: &[ConstraintGrammar]) -> Vocabulary {
    let mut words = BTreeSet::new();
    for g in grammars {
        words.extend(g.surface_words());
    }
    Vocabulary::from_words(words)
}
