//! Static node agents and their message-processing variants.

pub mod trickle;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::messaging::{Message, MessageKind, TopologyKnowledge};
use crate::topology::{Graph, NodeId};

pub use trickle::TrickleState;

/// Data-collection protocol run by every node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Protocol {
    /// Every node starts with the full topology.
    AllInfo,
    Trickle,
    MobileAgents,
}

impl Protocol {
    pub const ALL: [Protocol; 3] = [Protocol::AllInfo, Protocol::Trickle, Protocol::MobileAgents];

    pub fn name(self) -> &'static str {
        match self {
            Protocol::AllInfo => "all_info",
            Protocol::Trickle => "trickle",
            Protocol::MobileAgents => "mobile_agents",
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Protocol {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.replace('-', "_").to_ascii_lowercase().as_str() {
            "all_info" | "full" => Ok(Protocol::AllInfo),
            "trickle" => Ok(Protocol::Trickle),
            "mobile_agents" | "ma" => Ok(Protocol::MobileAgents),
            other => Err(format!("unknown protocol `{other}`")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct NodeAgent {
    id: NodeId,
    knowledge: Arc<TopologyKnowledge>,
    pub visited: bool,
    pub trickle: Option<TrickleState>,
}

impl NodeAgent {
    /// A node holding `knowledge`. Its own entry is created if absent.
    pub fn new(
        id: NodeId,
        mut knowledge: Arc<TopologyKnowledge>,
        trickle: Option<TrickleState>,
    ) -> Self {
        if !knowledge.contains(id) {
            Arc::make_mut(&mut knowledge).insert_entry(id, []);
        }
        NodeAgent {
            id,
            knowledge,
            visited: false,
            trickle,
        }
    }

    /// Initial state for `protocol`. All-info nodes share `full`.
    pub fn for_protocol<R: Rng + ?Sized>(
        id: NodeId,
        protocol: Protocol,
        graph: &Graph,
        full: &Arc<TopologyKnowledge>,
        k_trickle: u32,
        rng: &mut R,
    ) -> Self {
        match protocol {
            Protocol::AllInfo => NodeAgent::new(id, Arc::clone(full), None),
            Protocol::Trickle => NodeAgent::new(
                id,
                Arc::new(TopologyKnowledge::local_view(graph, id)),
                Some(TrickleState::new(k_trickle, rng)),
            ),
            Protocol::MobileAgents => {
                NodeAgent::new(id, Arc::new(TopologyKnowledge::local_view(graph, id)), None)
            }
        }
    }

    pub fn id(&self) -> NodeId {
        self.id
    }

    pub fn knowledge(&self) -> &TopologyKnowledge {
        &self.knowledge
    }

    /// Shared handle to the current knowledge, for message payloads.
    pub fn knowledge_arc(&self) -> Arc<TopologyKnowledge> {
        Arc::clone(&self.knowledge)
    }

    /// Believed own neighborhood.
    pub fn memory(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.knowledge.get(self.id).into_iter().flatten().copied()
    }

    /// Unions `other` into the node's knowledge. Returns whether it grew.
    pub fn absorb(&mut self, other: &TopologyKnowledge) -> bool {
        if std::ptr::eq(&*self.knowledge, other) || other.is_subset(&self.knowledge) {
            return false;
        }
        Arc::make_mut(&mut self.knowledge).merge(other)
    }

    pub fn remember_neighbor(&mut self, neighbor: NodeId) -> bool {
        if self
            .knowledge
            .get(self.id)
            .is_some_and(|s| s.contains(&neighbor))
        {
            return false;
        }
        Arc::make_mut(&mut self.knowledge).add_neighbor(self.id, neighbor)
    }
}

/// What a node may touch during its turn. Sends go to `outbox` and are
/// dispatched, with accounting, once the turn ends.
pub struct NodeContext<'a> {
    pub graph: &'a mut Graph,
    pub round: u32,
    pub outbox: Vec<(NodeId, Message)>,
    pub protocol_errors: u64,
}

impl<'a> NodeContext<'a> {
    pub fn new(graph: &'a mut Graph, round: u32) -> Self {
        NodeContext {
            graph,
            round,
            outbox: Vec::new(),
            protocol_errors: 0,
        }
    }
}

/// `connect(target)`: link to `target` and send it our knowledge. A dead
/// or unknown target is ignored.
pub fn handle_connect(node: &mut NodeAgent, target: NodeId, cx: &mut NodeContext<'_>) {
    if target == node.id || !cx.graph.is_alive(target) {
        return;
    }
    if cx.graph.add_edge(node.id, target).is_err() {
        return;
    }
    node.remember_neighbor(target);
    cx.outbox
        .push((target, Message::network_data(node.id, node.knowledge_arc())));
}

/// Handles the message kinds common to every protocol. Returns false for
/// kinds the caller has to deal with.
fn handle_common(node: &mut NodeAgent, msg: &Message, cx: &mut NodeContext<'_>) -> bool {
    match msg.kind() {
        MessageKind::Connect => match msg.target() {
            Some(target) => handle_connect(node, target, cx),
            None => cx.protocol_errors += 1,
        },
        MessageKind::NetworkData => match msg.knowledge() {
            Some(k) => {
                node.absorb(k);
            }
            None => cx.protocol_errors += 1,
        },
        _ => return false,
    }
    true
}

pub fn process_messages_all_info(
    node: &mut NodeAgent,
    inbox: Vec<Message>,
    cx: &mut NodeContext<'_>,
) {
    for msg in &inbox {
        if !handle_common(node, msg, cx) {
            cx.protocol_errors += 1;
        }
    }
}

pub fn process_messages_trickle<R: Rng + ?Sized>(
    node: &mut NodeAgent,
    inbox: Vec<Message>,
    cx: &mut NodeContext<'_>,
    rng: &mut R,
) {
    let Some(mut state) = node.trickle.take() else {
        cx.protocol_errors += inbox.len() as u64;
        return;
    };
    if state.should_transmit(cx.round) {
        let payload = node.knowledge_arc();
        for &nb in cx.graph.neighbors(node.id) {
            cx.outbox.push((
                nb,
                Message::network_data_trickle(node.id, Arc::clone(&payload)),
            ));
        }
    }
    for msg in &inbox {
        if msg.kind() == MessageKind::NetworkDataTrickle {
            let Some(k) = msg.knowledge() else {
                cx.protocol_errors += 1;
                continue;
            };
            if *k == *node.knowledge {
                state.on_consistent();
            } else {
                state.on_inconsistent(rng);
                node.absorb(k);
            }
        } else if !handle_common(node, msg, cx) {
            cx.protocol_errors += 1;
        }
    }
    state.on_round_end(cx.round, rng);
    node.trickle = Some(state);
}

pub fn process_messages_mobile_agents(
    node: &mut NodeAgent,
    inbox: Vec<Message>,
    cx: &mut NodeContext<'_>,
) {
    for msg in &inbox {
        if msg.kind() == MessageKind::NetworkDataMobileAgent {
            match msg.knowledge() {
                Some(k) => {
                    node.absorb(k);
                }
                None => cx.protocol_errors += 1,
            }
        } else if !handle_common(node, msg, cx) {
            cx.protocol_errors += 1;
        }
    }
}

/// Dispatches to the variant for `protocol`.
pub fn process_messages<R: Rng + ?Sized>(
    protocol: Protocol,
    node: &mut NodeAgent,
    inbox: Vec<Message>,
    cx: &mut NodeContext<'_>,
    rng: &mut R,
) {
    match protocol {
        Protocol::AllInfo => process_messages_all_info(node, inbox, cx),
        Protocol::Trickle => process_messages_trickle(node, inbox, cx, rng),
        Protocol::MobileAgents => process_messages_mobile_agents(node, inbox, cx),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::messaging::knowledge_size;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn n(v: u32) -> NodeId {
        NodeId(v)
    }

    fn path3() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap()
    }

    fn local(g: &Graph, id: u32) -> NodeAgent {
        NodeAgent::new(
            n(id),
            Arc::new(TopologyKnowledge::local_view(g, n(id))),
            None,
        )
    }

    #[test]
    fn connect_adds_edge_and_replies_with_knowledge() {
        let mut g = path3();
        let mut a = local(&g, 0);
        let mut cx = NodeContext::new(&mut g, 4);
        process_messages_all_info(&mut a, vec![Message::connect(n(1), n(2))], &mut cx);
        let outbox = std::mem::take(&mut cx.outbox);
        assert!(g.has_edge(n(0), n(2)));
        assert_eq!(outbox.len(), 1);
        let (to, msg) = &outbox[0];
        assert_eq!(*to, n(2));
        assert_eq!(msg.kind(), MessageKind::NetworkData);
        assert_eq!(msg.size_bytes(), knowledge_size(a.knowledge()));
        assert!(a.knowledge().get(n(0)).unwrap().contains(&n(2)));
    }

    #[test]
    fn connect_to_dead_node_is_ignored() {
        let mut g = path3();
        g.kill_node(n(2)).unwrap();
        let mut a = local(&g, 0);
        let mut cx = NodeContext::new(&mut g, 0);
        handle_connect(&mut a, n(2), &mut cx);
        assert!(cx.outbox.is_empty());
    }

    #[test]
    fn known_data_is_a_no_op() {
        let mut g = path3();
        let full = Arc::new(TopologyKnowledge::from_graph(&g));
        let mut a = NodeAgent::new(n(0), Arc::clone(&full), None);
        let mut cx = NodeContext::new(&mut g, 0);
        let part = Arc::new(TopologyKnowledge::local_view(&path3(), n(1)));
        process_messages_all_info(&mut a, vec![Message::network_data(n(1), part)], &mut cx);
        assert_eq!(a.knowledge(), &*full);
        assert!(
            Arc::ptr_eq(&a.knowledge_arc(), &full),
            "no copy on a no-op merge"
        );
    }

    #[test]
    fn replica_collects_both_neighbors_views() {
        let g = path3();
        let mut b = NodeAgent::new(n(1), Arc::new(TopologyKnowledge::new()), None);
        let mut g2 = g.clone();
        let mut cx = NodeContext::new(&mut g2, 0);
        let from_a = Arc::new(TopologyKnowledge::local_view(&g, n(0)));
        let from_c = Arc::new(TopologyKnowledge::local_view(&g, n(2)));
        process_messages_all_info(
            &mut b,
            vec![
                Message::network_data(n(0), Arc::clone(&from_a)),
                Message::network_data(n(2), Arc::clone(&from_c)),
            ],
            &mut cx,
        );
        assert!(from_a.is_subset(b.knowledge()) && from_c.is_subset(b.knowledge()));
    }

    #[test]
    fn foreign_kinds_count_as_protocol_errors() {
        let mut g = path3();
        let mut a = local(&g, 0);
        let mut cx = NodeContext::new(&mut g, 0);
        let k = Arc::new(TopologyKnowledge::new());
        process_messages_all_info(
            &mut a,
            vec![
                Message::network_data_trickle(n(1), Arc::clone(&k)),
                Message::ping(n(1)),
            ],
            &mut cx,
        );
        process_messages_mobile_agents(
            &mut a,
            vec![Message::network_data_trickle(n(1), k)],
            &mut cx,
        );
        assert_eq!(cx.protocol_errors, 3);
    }

    #[test]
    fn trickle_broadcasts_to_every_neighbor_at_t() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut g = path3();
        let mut b = local(&g, 1);
        b.trickle = Some(TrickleState::new(3, &mut rng));
        let mut cx = NodeContext::new(&mut g, 0);
        process_messages_trickle(&mut b, Vec::new(), &mut cx, &mut rng);
        let targets: Vec<NodeId> = cx.outbox.iter().map(|(to, _)| *to).collect();
        assert_eq!(targets, vec![n(0), n(2)]);
        assert!(cx
            .outbox
            .iter()
            .all(|(_, m)| m.kind() == MessageKind::NetworkDataTrickle));
        // round 0 counts as an expiry: 2 -> 4
        assert_eq!(b.trickle.as_ref().unwrap().current_interval, 4);
    }

    #[test]
    fn trickle_suppressed_node_stays_silent() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut g = path3();
        let mut b = local(&g, 1);
        let mut state = TrickleState::new(3, &mut rng);
        state.counter = 3;
        state.current_interval = 64;
        state.t = 1;
        b.trickle = Some(state);
        let mut cx = NodeContext::new(&mut g, 7);
        process_messages_trickle(&mut b, Vec::new(), &mut cx, &mut rng);
        assert!(cx.outbox.is_empty());
    }

    #[test]
    fn trickle_counts_consistent_and_resets_on_news() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut g = path3();
        let mut b = local(&g, 1);
        let mut state = TrickleState::new(3, &mut rng);
        state.current_interval = 64;
        state.t = 40;
        b.trickle = Some(state);
        let same = b.knowledge_arc();
        let mut cx = NodeContext::new(&mut g, 5);
        let msgs = vec![
            Message::network_data_trickle(n(0), Arc::clone(&same)),
            Message::network_data_trickle(n(2), Arc::clone(&same)),
        ];
        process_messages_trickle(&mut b, msgs, &mut cx, &mut rng);
        assert_eq!(b.trickle.as_ref().unwrap().counter, 2);
        let news = Arc::new(TopologyKnowledge::local_view(&path3(), n(0)));
        let mut cx = NodeContext::new(&mut g, 5);
        process_messages_trickle(
            &mut b,
            vec![Message::network_data_trickle(n(0), news)],
            &mut cx,
            &mut rng,
        );
        let s = b.trickle.as_ref().unwrap();
        // collapsed to 1 and, since 5 % 1 == 0, expired straight back to 2
        assert_eq!(
            (s.counter, s.current_interval, s.i_min, s.i_max),
            (0, 2, 1, 2)
        );
        assert!(b.knowledge().contains(n(0)));
    }

    #[test]
    fn agent_deposits_grow_knowledge_once() {
        let mut g = path3();
        let mut c = local(&g, 2);
        let deposit = Arc::new(TopologyKnowledge::from_graph(&g));
        let mut cx = NodeContext::new(&mut g, 0);
        process_messages_mobile_agents(
            &mut c,
            vec![Message::network_data_mobile_agent(
                n(2),
                Arc::clone(&deposit),
            )],
            &mut cx,
        );
        assert_eq!(c.knowledge(), &*deposit);
        assert!(!c.absorb(&deposit));
    }

    #[test]
    fn protocol_names_parse() {
        for p in Protocol::ALL {
            assert_eq!(p.name().parse::<Protocol>().unwrap(), p);
        }
        assert_eq!(
            "mobile-agents".parse::<Protocol>().unwrap(),
            Protocol::MobileAgents
        );
        assert!("carrier-pigeon".parse::<Protocol>().is_err());
    }
}
