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

//! Prefix trie over sorted itemsets, used to count many itemsets in a
//! single pass over sorted transactions.

use crate::corpus::TermId;

const NO_SLOT: u32 = u32::MAX;

#[derive(Debug, Default)]
struct Node {
    // sorted by item
    children: Vec<(TermId, u32)>,
    slot: u32,
}

#[derive(Debug)]
pub(crate) struct ItemsetTrie {
    nodes: Vec<Node>,
    slots: usize,
    max_depth: usize,
}

impl ItemsetTrie {
    /// Builds a trie whose slot `i` corresponds to `itemsets[i]`. Itemsets
    /// must be non-empty, strictly increasing and pairwise distinct.
    pub(crate) fn new<'a, I>(itemsets: I) -> Self
    where
        I: IntoIterator<Item = &'a [TermId]>,
    {
        let mut nodes = vec![Node { children: Vec::new(), slot: NO_SLOT }];
        let mut slots = 0;
        let mut max_depth = 0;
        for items in itemsets {
            debug_assert!(!items.is_empty());
            let mut node = 0usize;
            for &item in items {
                let pos = nodes[node].children.binary_search_by_key(&item, |c| c.0);
                node = match pos {
                    Ok(p) => nodes[node].children[p].1 as usize,
                    Err(p) => {
                        let child = nodes.len();
                        nodes.push(Node { children: Vec::new(), slot: NO_SLOT });
                        nodes[node].children.insert(p, (item, child as u32));
                        child
                    }
                };
            }
            debug_assert_eq!(nodes[node].slot, NO_SLOT, "duplicate itemset");
            nodes[node].slot = slots as u32;
            slots += 1;
            max_depth = max_depth.max(items.len());
        }
        ItemsetTrie { nodes, slots, max_depth }
    }

    pub(crate) fn slots(&self) -> usize {
        self.slots
    }

    /// Calls `hit(slot)` once for every trie itemset contained in `items`.
    pub(crate) fn for_each_subset<F: FnMut(usize)>(&self, items: &[TermId], hit: &mut F) {
        if self.slots > 0 {
            self.walk(0, items, self.max_depth, hit);
        }
    }

    fn walk<F: FnMut(usize)>(&self, node: usize, items: &[TermId], depth_left: usize, hit: &mut F) {
        let node_ref = &self.nodes[node];
        if node_ref.slot != NO_SLOT {
            hit(node_ref.slot as usize);
        }
        if depth_left == 0 || node_ref.children.is_empty() {
            return;
        }
        let children = &node_ref.children;
        let mut lo = 0;
        for (i, &item) in items.iter().enumerate() {
            if lo == children.len() {
                break;
            }
            // children and items are both sorted; search forward only
            match children[lo..].binary_search_by_key(&item, |c| c.0) {
                Ok(p) => {
                    let child = children[lo + p].1 as usize;
                    lo += p + 1;
                    self.walk(child, &items[i + 1..], depth_left - 1, hit);
                }
                Err(p) => lo += p,
            }
        }
    }
}
