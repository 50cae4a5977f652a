// Copyright 2026 The trendminer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Association rules `X -> Y` over mined frequent sets.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::corpus::{Corpus, TermId};
use crate::error::{Error, Result};
use crate::miner::{self, FrequentSet, ItemSet};
use crate::number::Rational;

/// A bipartition of a frequent set with the counts behind its measures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssociationRule {
    pub antecedent: ItemSet,
    pub consequent: ItemSet,
    pub parent: ItemSet,
    pub count_parent: u64,
    pub count_antecedent: u64,
    pub count_consequent: u64,
    pub total: u64,
}

impl AssociationRule {
    /// Supp(F), shared by every rule from the same parent.
    pub fn support(&self) -> Rational {
        Rational::new(self.count_parent, self.total)
    }

    /// Conf(X -> Y) = count(F) / count(X).
    pub fn conf_fwd(&self) -> Rational {
        Rational::new(self.count_parent, self.count_antecedent)
    }

    /// Conf(Y -> X) = count(F) / count(Y).
    pub fn conf_bwd(&self) -> Rational {
        Rational::new(self.count_parent, self.count_consequent)
    }

    pub fn antecedent_support(&self) -> Rational {
        Rational::new(self.count_antecedent, self.total)
    }

    pub fn consequent_support(&self) -> Rational {
        Rational::new(self.count_consequent, self.total)
    }

    /// The same partition read the other way round.
    pub fn reversed(&self) -> AssociationRule {
        AssociationRule {
            antecedent: self.consequent.clone(),
            consequent: self.antecedent.clone(),
            parent: self.parent.clone(),
            count_parent: self.count_parent,
            count_antecedent: self.count_consequent,
            count_consequent: self.count_antecedent,
            total: self.total,
        }
    }
}

/// Which confidence the `min_confidence` threshold applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Direction {
    #[default]
    Fwd,
    Bwd,
    Both,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RuleConfig {
    /// Inclusive lower bound on the requested confidence.
    pub min_confidence: Rational,
    /// When set, only these antecedents are generated.
    pub antecedent_whitelist: Option<Vec<ItemSet>>,
    pub direction: Direction,
    /// Keep parents containing the corpus keywords. Off by default: in a
    /// keyword-filtered corpus they are in every transaction.
    pub include_keywords: bool,
}

impl RuleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.min_confidence > Rational::from_integer(1) {
            return Err(Error::Config(format!("min_confidence {} above 1", self.min_confidence)));
        }
        Ok(())
    }

    fn accepts(&self, rule: &AssociationRule) -> bool {
        let fwd = rule.conf_fwd() >= self.min_confidence;
        let bwd = rule.conf_bwd() >= self.min_confidence;
        match self.direction {
            Direction::Fwd => fwd,
            Direction::Bwd => bwd,
            Direction::Both => fwd && bwd,
        }
    }
}

/// Conf(X -> Y) = count(X ∪ Y) / count(X), exactly.
pub fn confidence(corpus: &Corpus, antecedent: &ItemSet, consequent: &ItemSet) -> Result<Rational> {
    corpus.require_nonempty()?;
    if antecedent.items().iter().any(|&i| consequent.contains(i)) {
        return Err(Error::InvalidItemSet("antecedent and consequent overlap".into()));
    }
    let count_x = miner::count(corpus, antecedent)?;
    if count_x == 0 {
        return Err(Error::UndefinedConfidence);
    }
    let union = ItemSet::from_unsorted([antecedent.items(), consequent.items()].concat())?;
    let count_xy = miner::count(corpus, &union)?;
    Ok(Rational::new(count_xy, count_x))
}

/// Every bipartition of each frequent set of size two or more that passes
/// the confidence threshold, sorted by parent then antecedent.
///
/// Subset counts come from `frequent` when present there and are recounted
/// from the corpus otherwise.
pub fn generate_rules(corpus: &Corpus, frequent: &[FrequentSet], config: &RuleConfig) -> Result<Vec<AssociationRule>> {
    corpus.require_nonempty()?;
    config.validate()?;
    let vocab = corpus.vocabulary();
    for f in frequent {
        f.itemset
            .check_vocabulary(vocab)
            .map_err(|e| Error::InvalidInput(format!("frequent set outside corpus vocabulary: {e}")))?;
    }
    let total = corpus.total() as u64;
    let keyword_ids = corpus.keyword_ids();
    let mut parents: Vec<&FrequentSet> = frequent
        .iter()
        .filter(|f| f.itemset.len() >= 2)
        .filter(|f| config.include_keywords || !keyword_ids.iter().any(|&k| f.itemset.contains(k)))
        .collect();
    parents.sort_by(|a, b| a.itemset.cmp(&b.itemset));
    parents.dedup_by(|a, b| a.itemset == b.itemset);
    for f in &parents {
        if f.itemset.len() > 63 {
            return Err(Error::InvalidInput(format!("frequent set of size {} too large for rule generation", f.itemset.len())));
        }
    }

    // subset counts: from the mined list, recounting whatever it lacks in one pass
    let mut known: HashMap<Vec<TermId>, u64> = frequent.iter().map(|f| (f.itemset.items().to_vec(), f.count)).collect();
    let missing: Vec<ItemSet> = parents
        .iter()
        .flat_map(|f| proper_subsets(f.itemset.items()))
        .filter(|s| !known.contains_key(s))
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .map(ItemSet::new)
        .collect::<Result<_>>()?;
    if !missing.is_empty() {
        for (set, n) in missing.iter().zip(miner::count_many(corpus, &missing)?) {
            known.insert(set.items().to_vec(), n);
        }
    }
    let lookup = |items: &[TermId]| known[items];

    let per_parent: Vec<Vec<AssociationRule>> = parents
        .par_iter()
        .map(|f| {
            let items = f.itemset.items();
            let k = items.len();
            let mut rules = Vec::new();
            for mask in 1u64..(1u64 << k) - 1 {
                let (x, y): (Vec<_>, Vec<_>) = (0..k).partition(|b| mask & (1 << b) != 0);
                let x: Vec<TermId> = x.into_iter().map(|b| items[b]).collect();
                let y: Vec<TermId> = y.into_iter().map(|b| items[b]).collect();
                let antecedent = ItemSet::new(x)?;
                if let Some(list) = &config.antecedent_whitelist {
                    if !list.contains(&antecedent) {
                        continue;
                    }
                }
                let consequent = ItemSet::new(y)?;
                let rule = AssociationRule {
                    count_antecedent: lookup(antecedent.items()),
                    count_consequent: lookup(consequent.items()),
                    antecedent,
                    consequent,
                    parent: f.itemset.clone(),
                    count_parent: f.count,
                    total,
                };
                if rule.count_antecedent < rule.count_parent || rule.count_consequent < rule.count_parent {
                    return Err(Error::InvalidInput(format!(
                        "frequent set {} count {} exceeds a subset count; not mined from this corpus",
                        vocab.render(items),
                        f.count
                    )));
                }
                if config.accepts(&rule) {
                    rules.push(rule);
                }
            }
            rules.sort_by(|a, b| a.antecedent.cmp(&b.antecedent));
            Ok(rules)
        })
        .collect::<Result<_>>()?;
    Ok(per_parent.into_iter().flatten().collect())
}

fn proper_subsets(items: &[TermId]) -> impl Iterator<Item = Vec<TermId>> + '_ {
    let k = items.len();
    (1u64..(1u64 << k) - 1).map(move |mask| (0..k).filter(|b| mask & (1 << b) != 0).map(|b| items[b]).collect())
}
