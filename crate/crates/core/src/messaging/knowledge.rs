use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::topology::{Graph, NodeId};

/// Bytes per encoded node id.
pub const ID_BYTES: usize = 4;

/// Topology data held by a node or a mobile agent: node id to the neighbor
/// set believed for that node. Updates are union-only.
///
/// Neighbor sets are shared between copies, so cloning and merging mostly
/// identical maps is cheap.
#[derive(Clone, Debug, Default)]
pub struct TopologyKnowledge {
    entries: BTreeMap<NodeId, Arc<BTreeSet<NodeId>>>,
    links: usize,
    // Order-independent sum of per-link hashes, used to reject unequal maps
    // without walking them.
    digest: u64,
}

fn mix(id: NodeId, nb: Option<NodeId>) -> u64 {
    let mut z = ((id.0 as u64) << 32 | nb.map_or(0xffff_ffff, |n| n.0 as u64))
        .wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn set_digest(id: NodeId, set: &BTreeSet<NodeId>) -> u64 {
    set.iter()
        .fold(0u64, |d, nb| d.wrapping_add(mix(id, Some(*nb))))
}

fn set_le(a: &Arc<BTreeSet<NodeId>>, b: &Arc<BTreeSet<NodeId>>) -> bool {
    Arc::ptr_eq(a, b) || (a.len() <= b.len() && a.is_subset(b))
}

impl PartialEq for TopologyKnowledge {
    fn eq(&self, other: &Self) -> bool {
        self.links == other.links
            && self.digest == other.digest
            && self.entries.len() == other.entries.len()
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|((ka, a), (kb, b))| ka == kb && (Arc::ptr_eq(a, b) || a == b))
    }
}

impl Eq for TopologyKnowledge {}

impl TopologyKnowledge {
    pub fn new() -> Self {
        Self::default()
    }

    /// Every live node's adjacency.
    pub fn from_graph(graph: &Graph) -> Self {
        let mut k = Self::new();
        for id in graph.live_nodes() {
            k.insert_entry(id, graph.neighbors(id).iter().copied());
        }
        k
    }

    /// Only `id`'s own entry with its current neighbors.
    pub fn local_view(graph: &Graph, id: NodeId) -> Self {
        let mut k = Self::new();
        k.insert_entry(id, graph.neighbors(id).iter().copied());
        k
    }

    pub fn get(&self, id: NodeId) -> Option<&BTreeSet<NodeId>> {
        self.entries.get(&id).map(|s| &**s)
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.entries.contains_key(&id)
    }

    pub fn entry_count(&self) -> usize {
        self.entries.len()
    }

    /// Total number of neighbor ids across all entries.
    pub fn link_count(&self) -> usize {
        self.links
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, &BTreeSet<NodeId>)> {
        self.entries.iter().map(|(k, v)| (*k, &**v))
    }

    /// Encoded payload size: per entry one key id plus one id per neighbor.
    pub fn encoded_len(&self) -> usize {
        ID_BYTES * (self.entries.len() + self.links)
    }

    /// Unions `neighbors` into the entry for `id`, creating it if needed.
    /// Returns whether anything changed.
    pub fn insert_entry(
        &mut self,
        id: NodeId,
        neighbors: impl IntoIterator<Item = NodeId>,
    ) -> bool {
        let mut changed = false;
        let set = match self.entries.entry(id) {
            Entry::Occupied(e) => e.into_mut(),
            Entry::Vacant(v) => {
                self.digest = self.digest.wrapping_add(mix(id, None));
                changed = true;
                v.insert(Arc::default())
            }
        };
        let mut added = 0usize;
        let mut digest = 0u64;
        for nb in neighbors {
            if set.contains(&nb) {
                continue;
            }
            Arc::make_mut(set).insert(nb);
            added += 1;
            digest = digest.wrapping_add(mix(id, Some(nb)));
        }
        self.links += added;
        self.digest = self.digest.wrapping_add(digest);
        changed || added > 0
    }

    pub fn add_neighbor(&mut self, id: NodeId, neighbor: NodeId) -> bool {
        self.insert_entry(id, [neighbor])
    }

    /// In-place union. Returns whether `self` grew.
    pub fn merge(&mut self, other: &TopologyKnowledge) -> bool {
        if self == other {
            return false;
        }
        let mut changed = false;
        for (id, theirs) in &other.entries {
            match self.entries.entry(*id) {
                Entry::Vacant(v) => {
                    self.digest = self
                        .digest
                        .wrapping_add(mix(*id, None))
                        .wrapping_add(set_digest(*id, theirs));
                    self.links += theirs.len();
                    v.insert(Arc::clone(theirs));
                    changed = true;
                }
                Entry::Occupied(mut e) => {
                    let mine = e.get_mut();
                    if set_le(theirs, mine) {
                        continue;
                    }
                    if set_le(mine, theirs) {
                        // adopt their set wholesale
                        let old_digest = set_digest(*id, mine);
                        self.digest = self
                            .digest
                            .wrapping_sub(old_digest)
                            .wrapping_add(set_digest(*id, theirs));
                        self.links += theirs.len() - mine.len();
                        *mine = Arc::clone(theirs);
                        changed = true;
                        continue;
                    }
                    let set = Arc::make_mut(mine);
                    for nb in theirs.iter() {
                        if set.insert(*nb) {
                            self.links += 1;
                            self.digest = self.digest.wrapping_add(mix(*id, Some(*nb)));
                            changed = true;
                        }
                    }
                }
            }
        }
        changed
    }

    pub fn union(a: &TopologyKnowledge, b: &TopologyKnowledge) -> TopologyKnowledge {
        let mut out = a.clone();
        out.merge(b);
        out
    }

    pub fn is_subset(&self, other: &TopologyKnowledge) -> bool {
        self.links <= other.links
            && self.entries.len() <= other.entries.len()
            && self.entries.iter().all(|(id, nbs)| {
                other
                    .entries
                    .get(id)
                    .is_some_and(|theirs| set_le(nbs, theirs))
            })
    }
}

impl<I: IntoIterator<Item = NodeId>> FromIterator<(NodeId, I)> for TopologyKnowledge {
    fn from_iter<T: IntoIterator<Item = (NodeId, I)>>(iter: T) -> Self {
        let mut k = TopologyKnowledge::new();
        for (id, nbs) in iter {
            k.insert_entry(id, nbs);
        }
        k
    }
}
