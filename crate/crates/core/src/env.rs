//! Mutable simulation state shared by every phase of a round.

use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::agents::MobileAgentState;
use crate::messaging::{Mailbox, Message, MessageKind, TopologyKnowledge};
use crate::node::{process_messages, NodeAgent, NodeContext, Protocol};
use crate::topology::{Graph, NodeId};
use crate::{Error, Result};

/// Traffic and bookkeeping counters for the current round.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Traffic {
    /// Bytes of messages that reached a live recipient. Heartbeats excluded.
    pub received_bytes: u64,
    /// Messages that reached a live recipient, heartbeats and pings included.
    pub received_messages: u64,
    pub heartbeats: u64,
    pub pings: u64,
    /// Sends addressed to failed nodes.
    pub dropped: u64,
    pub protocol_errors: u64,
    /// Missing neighbors a node could not act on for lack of their entry.
    pub missing_knowledge: u64,
}

/// Cumulative byte flow through the mailboxes over the whole run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QueueTotals {
    pub queued_bytes: u64,
    pub drained_bytes: u64,
    /// Bytes still queued at a node when it crashed or was recreated.
    pub discarded_bytes: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProtocolParams {
    pub protocol: Protocol,
    pub k_trickle: u32,
    pub k_agents: u32,
}

#[derive(Clone, Debug)]
pub struct NetworkEnvironment {
    graph: Graph,
    params: ProtocolParams,
    round: u32,
    nodes: Vec<Option<NodeAgent>>,
    mailboxes: Vec<Mailbox>,
    pub(crate) agents: Vec<MobileAgentState>,
    next_agent_id: u64,
    traffic: Traffic,
    queue: QueueTotals,
}

impl NetworkEnvironment {
    /// Builds node state for `params.protocol`; with mobile agents, one agent
    /// starts on every live node.
    pub fn new<R: Rng + ?Sized>(graph: Graph, params: ProtocolParams, trickle_rng: &mut R) -> Self {
        let full = Arc::new(match params.protocol {
            Protocol::AllInfo => TopologyKnowledge::from_graph(&graph),
            _ => TopologyKnowledge::new(),
        });
        let n = graph.capacity();
        let nodes = graph
            .ids()
            .map(|id| {
                graph.is_alive(id).then(|| {
                    NodeAgent::for_protocol(
                        id,
                        params.protocol,
                        &graph,
                        &full,
                        params.k_trickle,
                        trickle_rng,
                    )
                })
            })
            .collect();
        let mut env = NetworkEnvironment {
            graph,
            params,
            round: 0,
            nodes,
            mailboxes: vec![Mailbox::default(); n],
            agents: Vec::new(),
            next_agent_id: 0,
            traffic: Traffic::default(),
            queue: QueueTotals::default(),
        };
        if params.protocol == Protocol::MobileAgents {
            let live: Vec<NodeId> = env.graph.live_nodes().collect();
            for id in live {
                env.spawn_agent_at(id).expect("node is alive");
            }
        }
        env
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn params(&self) -> ProtocolParams {
        self.params
    }

    pub fn protocol(&self) -> Protocol {
        self.params.protocol
    }

    pub fn round(&self) -> u32 {
        self.round
    }

    pub fn set_round(&mut self, round: u32) {
        self.round = round;
    }

    pub fn node(&self, id: NodeId) -> Option<&NodeAgent> {
        self.nodes.get(id.index()).and_then(Option::as_ref)
    }

    pub fn node_mut(&mut self, id: NodeId) -> Option<&mut NodeAgent> {
        self.nodes.get_mut(id.index()).and_then(Option::as_mut)
    }

    pub fn live_node_agents(&self) -> impl Iterator<Item = &NodeAgent> {
        self.nodes.iter().flatten()
    }

    pub fn agents(&self) -> &[MobileAgentState] {
        &self.agents
    }

    pub fn traffic(&self) -> Traffic {
        self.traffic
    }

    pub(crate) fn traffic_mut(&mut self) -> &mut Traffic {
        &mut self.traffic
    }

    /// Returns this round's counters and starts a fresh tally.
    pub fn queue_totals(&self) -> QueueTotals {
        self.queue
    }

    pub fn take_traffic(&mut self) -> Traffic {
        std::mem::take(&mut self.traffic)
    }

    pub fn mailbox(&self, id: NodeId) -> Option<&Mailbox> {
        self.mailboxes.get(id.index())
    }

    /// Counts `msg` as received by `to` without queueing it. Returns false
    /// (and counts a drop) when `to` is not alive.
    pub fn record_delivery(&mut self, to: NodeId, msg: &Message) -> bool {
        if !self.graph.is_alive(to) {
            self.traffic.dropped += 1;
            return false;
        }
        self.traffic.received_messages += 1;
        match msg.kind() {
            MessageKind::Heartbeat => self.traffic.heartbeats += 1,
            kind => {
                if kind == MessageKind::Ping {
                    self.traffic.pings += 1;
                }
                self.traffic.received_bytes += msg.size_bytes() as u64;
            }
        }
        true
    }

    /// Queues `msg` for `to`. It becomes drainable after the next delivery
    /// phase. Messages to failed nodes are dropped.
    pub fn send(&mut self, to: NodeId, msg: Message) -> bool {
        if !self.record_delivery(to, &msg) {
            return false;
        }
        self.queue.queued_bytes += msg.size_bytes() as u64;
        self.mailboxes[to.index()].push(msg);
        true
    }

    /// Delivery phase: everything sent before now becomes drainable.
    pub fn deliver_all(&mut self) {
        for mb in &mut self.mailboxes {
            mb.deliver();
        }
    }

    /// Crashes `id`: edges removed, queue discarded, co-located agents die.
    /// Returns the number of agents lost.
    pub fn kill(&mut self, id: NodeId) -> Result<usize> {
        if !self.graph.is_alive(id) {
            return Err(Error::NodeFailed(id));
        }
        self.graph.kill_node(id)?;
        self.nodes[id.index()] = None;
        self.discard_queue(id);
        let before = self.agents.len();
        self.agents.retain(|a| a.location != id);
        Ok(before - self.agents.len())
    }

    /// Brings `id` back with `knowledge` and fresh protocol state.
    pub(crate) fn revive<R: Rng + ?Sized>(
        &mut self,
        id: NodeId,
        knowledge: Arc<TopologyKnowledge>,
        trickle_rng: &mut R,
    ) -> Result<()> {
        self.graph.recreate_node(id)?;
        let trickle = (self.params.protocol == Protocol::Trickle)
            .then(|| crate::node::TrickleState::new(self.params.k_trickle, trickle_rng));
        self.nodes[id.index()] = Some(NodeAgent::new(id, knowledge, trickle));
        self.discard_queue(id);
        Ok(())
    }

    fn discard_queue(&mut self, id: NodeId) {
        let mb = std::mem::take(&mut self.mailboxes[id.index()]);
        self.queue.discarded_bytes += mb.pending_bytes();
    }

    /// Runs `f` on node `id` with a context over the live graph and returns
    /// the node's unsent outbox. `None` if the node is not alive.
    pub(crate) fn with_node_context<F>(
        &mut self,
        id: NodeId,
        f: F,
    ) -> Option<Vec<(NodeId, Message)>>
    where
        F: FnOnce(&mut NodeAgent, &mut NodeContext<'_>),
    {
        let mut node = self.nodes.get_mut(id.index()).and_then(Option::take)?;
        let mut cx = NodeContext::new(&mut self.graph, self.round);
        f(&mut node, &mut cx);
        let NodeContext {
            outbox,
            protocol_errors,
            ..
        } = cx;
        self.nodes[id.index()] = Some(node);
        self.traffic.protocol_errors += protocol_errors;
        Some(outbox)
    }

    /// One node's turn: drain its queue, run the protocol, then dispatch
    /// whatever it sent.
    pub fn node_act<R: Rng + ?Sized>(&mut self, id: NodeId, rng: &mut R) {
        if !self.graph.is_alive(id) {
            return;
        }
        let inbox = self.mailboxes[id.index()].drain();
        self.queue.drained_bytes += inbox.iter().map(|m| m.size_bytes() as u64).sum::<u64>();
        let protocol = self.params.protocol;
        let outbox = self
            .with_node_context(id, |node, cx| {
                process_messages(protocol, node, inbox, cx, rng)
            })
            .unwrap_or_default();
        for (to, msg) in outbox {
            self.send(to, msg);
        }
    }

    /// Links two live nodes directly, both remembering the other.
    pub(crate) fn link(&mut self, a: NodeId, b: NodeId) -> Result<()> {
        self.graph.add_edge(a, b)?;
        for (x, y) in [(a, b), (b, a)] {
            if let Some(n) = self.node_mut(x) {
                n.remember_neighbor(y);
            }
        }
        Ok(())
    }

    pub(crate) fn next_agent_id(&mut self) -> u64 {
        let id = self.next_agent_id;
        self.next_agent_id += 1;
        id
    }

    /// Σ over live nodes of the encoded size of their knowledge.
    pub fn node_memory_bytes(&self) -> u64 {
        self.live_node_agents()
            .map(|n| crate::messaging::knowledge_size(n.knowledge()) as u64)
            .sum()
    }

    /// Σ over live agents of encoded knowledge plus per-agent overhead.
    pub fn agent_memory_bytes(&self) -> u64 {
        self.agents.iter().map(|a| a.memory_bytes() as u64).sum()
    }
}
