//! Ground-truth network graph and its lifecycle.
//!
//! Node ids are dense (`0..capacity`). A failed node keeps its slot so that a
//! replica can later be recreated under the same id; while failed it has no
//! incident edges.

mod edge_list;
mod generators;
mod surrogate;

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use edge_list::{load_edge_list, parse_edge_list, write_edge_list, EdgeListGraph};
pub use generators::{
    generate, generate_community, generate_forest_hub_spoke, generate_hub_spoke,
    generate_scale_free, generate_small_world, GeneratorKind, GeneratorParams,
};
pub use surrogate::{
    as_surrogate, generate_as_like, AS_SURROGATE_EDGES, AS_SURROGATE_NODES, AS_SURROGATE_SEED,
};

/// Identifier of a node. Ids are totally ordered; the order drives the
/// minimum-id recreation election.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for NodeId {
    fn from(v: u32) -> Self {
        NodeId(v)
    }
}

/// Undirected simple graph over dense node ids with a per-node alive flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<BTreeSet<NodeId>>,
    alive: Vec<bool>,
}

impl Graph {
    /// A graph of `n` live, isolated nodes.
    pub fn with_nodes(n: usize) -> Self {
        Graph {
            adjacency: vec![BTreeSet::new(); n],
            alive: vec![true; n],
        }
    }

    /// Builds a graph from an edge list. Self-loops and duplicates are dropped.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let mut g = Graph::with_nodes(n);
        for (a, b) in edges {
            if a != b {
                g.add_edge(NodeId(a), NodeId(b))?;
            }
        }
        Ok(g)
    }

    /// Number of id slots, live or failed.
    pub fn capacity(&self) -> usize {
        self.alive.len()
    }

    pub fn live_count(&self) -> usize {
        self.alive.iter().filter(|a| **a).count()
    }

    pub fn ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.alive.len() as u32).map(NodeId)
    }

    pub fn live_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.ids().filter(move |id| self.alive[id.index()])
    }

    pub fn contains(&self, id: NodeId) -> bool {
        id.index() < self.alive.len()
    }

    pub fn is_alive(&self, id: NodeId) -> bool {
        self.alive.get(id.index()).copied().unwrap_or(false)
    }

    fn check(&self, id: NodeId) -> Result<()> {
        if self.contains(id) {
            Ok(())
        } else {
            Err(Error::UnknownNode(id))
        }
    }

    /// Current neighbors. Empty for failed or unknown nodes.
    pub fn neighbors(&self, id: NodeId) -> &BTreeSet<NodeId> {
        static EMPTY: BTreeSet<NodeId> = BTreeSet::new();
        self.adjacency.get(id.index()).unwrap_or(&EMPTY)
    }

    pub fn degree(&self, id: NodeId) -> usize {
        self.neighbors(id).len()
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        self.neighbors(a).contains(&b)
    }

    /// Adds the undirected edge `{a, b}`. Returns `false` when it already
    /// existed. Both endpoints must be alive.
    pub fn add_edge(&mut self, a: NodeId, b: NodeId) -> Result<bool> {
        self.check(a)?;
        self.check(b)?;
        if a == b {
            return Err(Error::InvalidParams(format!("self-loop on {a}")));
        }
        for id in [a, b] {
            if !self.alive[id.index()] {
                return Err(Error::NodeFailed(id));
            }
        }
        let fresh = self.adjacency[a.index()].insert(b);
        self.adjacency[b.index()].insert(a);
        Ok(fresh)
    }

    pub fn remove_edge(&mut self, a: NodeId, b: NodeId) -> bool {
        if !self.contains(a) || !self.contains(b) {
            return false;
        }
        let had = self.adjacency[a.index()].remove(&b);
        self.adjacency[b.index()].remove(&a);
        had
    }

    /// Marks `id` failed and deletes all of its connections. Returns the
    /// neighbor set it had.
    pub fn kill_node(&mut self, id: NodeId) -> Result<BTreeSet<NodeId>> {
        self.check(id)?;
        if !self.alive[id.index()] {
            return Err(Error::NodeFailed(id));
        }
        let former = std::mem::take(&mut self.adjacency[id.index()]);
        for n in &former {
            self.adjacency[n.index()].remove(&id);
        }
        self.alive[id.index()] = false;
        Ok(former)
    }

    /// Brings a failed id back as a live node with no edges.
    pub fn recreate_node(&mut self, id: NodeId) -> Result<()> {
        self.check(id)?;
        if self.alive[id.index()] {
            return Err(Error::NodeAlive(id));
        }
        self.alive[id.index()] = true;
        Ok(())
    }

    /// Edges as `(low, high)` pairs in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(i, adj)| {
            let a = NodeId(i as u32);
            adj.range(NodeId(a.0 + 1)..).map(move |b| (a, *b))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn edge_set(&self) -> BTreeSet<(NodeId, NodeId)> {
        self.edges().collect()
    }

    /// Symmetric, loop-free, and failed nodes carry no edges.
    pub fn is_consistent(&self) -> bool {
        self.adjacency.iter().enumerate().all(|(i, adj)| {
            let a = NodeId(i as u32);
            (self.alive[i] || adj.is_empty())
                && adj.iter().all(|b| {
                    *b != a
                        && self.alive.get(b.index()).copied().unwrap_or(false)
                        && self.adjacency[b.index()].contains(&a)
                })
        })
    }

    /// Hop distances from `src` over live nodes; `None` for unreachable.
    pub fn bfs_distances(&self, src: NodeId) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.capacity()];
        if !self.is_alive(src) {
            return dist;
        }
        let mut queue = VecDeque::from([src]);
        dist[src.index()] = Some(0);
        while let Some(u) = queue.pop_front() {
            let d = dist[u.index()].unwrap_or(0);
            for v in self.neighbors(u) {
                if dist[v.index()].is_none() {
                    dist[v.index()] = Some(d + 1);
                    queue.push_back(*v);
                }
            }
        }
        dist
    }

    /// Whether all live nodes are mutually reachable. An empty graph counts as
    /// connected.
    pub fn is_connected(&self) -> bool {
        let Some(first) = self.live_nodes().next() else {
            return true;
        };
        let dist = self.bfs_distances(first);
        self.live_nodes().all(|id| dist[id.index()].is_some())
    }

    /// Largest finite shortest-path length among live nodes. `None` if the
    /// graph is disconnected.
    pub fn diameter(&self) -> Option<u32> {
        let mut best = 0;
        for src in self.live_nodes() {
            let dist = self.bfs_distances(src);
            for id in self.live_nodes() {
                best = best.max(dist[id.index()]?);
            }
        }
        Some(best)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn kill_removes_incident_edges() {
        let mut g = path3();
        let former = g.kill_node(NodeId(1)).unwrap();
        assert_eq!(former, BTreeSet::from([NodeId(0), NodeId(2)]));
        assert_eq!(g.edge_count(), 0);
        assert!(!g.is_alive(NodeId(1)));
        assert!(g.is_consistent());
    }

    #[test]
    fn recreate_and_reconnect_restores_path() {
        let original = path3();
        let mut g = original.clone();
        g.kill_node(NodeId(1)).unwrap();
        g.recreate_node(NodeId(1)).unwrap();
        assert_eq!(g.degree(NodeId(1)), 0);
        g.add_edge(NodeId(0), NodeId(1)).unwrap();
        g.add_edge(NodeId(2), NodeId(1)).unwrap();
        assert_eq!(g, original);
    }

    #[test]
    fn lifecycle_errors() {
        let mut g = path3();
        assert!(matches!(g.kill_node(NodeId(7)), Err(Error::UnknownNode(_))));
        assert!(matches!(
            g.recreate_node(NodeId(0)),
            Err(Error::NodeAlive(_))
        ));
        g.kill_node(NodeId(0)).unwrap();
        assert!(matches!(g.kill_node(NodeId(0)), Err(Error::NodeFailed(_))));
        assert!(matches!(
            g.add_edge(NodeId(0), NodeId(2)),
            Err(Error::NodeFailed(_))
        ));
    }

    #[test]
    fn diameter_and_connectivity() {
        let g = path3();
        assert_eq!(g.diameter(), Some(2));
        assert!(g.is_connected());
        let h = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(!h.is_connected());
        assert_eq!(h.diameter(), None);
    }
}
