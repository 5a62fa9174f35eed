//! Message envelopes, node mailboxes and byte accounting.
//!
//! Sizes use a fixed encoding: a one-byte kind tag followed by the payload,
//! where every node id takes [`ID_BYTES`] bytes and a topology payload lists
//! each entry's key followed by its neighbors.

mod knowledge;

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::topology::NodeId;

pub use knowledge::{TopologyKnowledge, ID_BYTES};

/// Size of the kind tag that prefixes every message.
pub const TAG_BYTES: usize = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MessageKind {
    Connect,
    NetworkData,
    NetworkDataTrickle,
    NetworkDataMobileAgent,
    Ping,
    Heartbeat,
}

impl fmt::Display for MessageKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MessageKind::Connect => "connect",
            MessageKind::NetworkData => "networkData",
            MessageKind::NetworkDataTrickle => "networkDataTrickle",
            MessageKind::NetworkDataMobileAgent => "networkDataMobileAgent",
            MessageKind::Ping => "ping",
            MessageKind::Heartbeat => "heartbeat",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Payload {
    None,
    Node(NodeId),
    Knowledge(Arc<TopologyKnowledge>),
}

impl Payload {
    fn encoded_len(&self) -> usize {
        match self {
            Payload::None => 0,
            Payload::Node(_) => ID_BYTES,
            Payload::Knowledge(k) => k.encoded_len(),
        }
    }
}

/// Wire size of a message: tag plus payload. Depends on content only.
pub fn canonical_size(_kind: MessageKind, payload: &Payload) -> usize {
    TAG_BYTES + payload.encoded_len()
}

/// Stored size of a knowledge map, same as a message carrying it.
pub fn knowledge_size(k: &TopologyKnowledge) -> usize {
    TAG_BYTES + k.encoded_len()
}

/// A typed envelope. The size is fixed at construction from the payload.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Message {
    kind: MessageKind,
    sender: NodeId,
    payload: Payload,
    size_bytes: usize,
}

impl Message {
    pub fn new(kind: MessageKind, sender: NodeId, payload: Payload) -> Self {
        let size_bytes = canonical_size(kind, &payload);
        Message {
            kind,
            sender,
            payload,
            size_bytes,
        }
    }

    /// Asks the recipient to link with `target`.
    pub fn connect(sender: NodeId, target: NodeId) -> Self {
        Self::new(MessageKind::Connect, sender, Payload::Node(target))
    }

    pub fn network_data(sender: NodeId, data: Arc<TopologyKnowledge>) -> Self {
        Self::new(MessageKind::NetworkData, sender, Payload::Knowledge(data))
    }

    pub fn network_data_trickle(sender: NodeId, data: Arc<TopologyKnowledge>) -> Self {
        Self::new(
            MessageKind::NetworkDataTrickle,
            sender,
            Payload::Knowledge(data),
        )
    }

    pub fn network_data_mobile_agent(sender: NodeId, data: Arc<TopologyKnowledge>) -> Self {
        Self::new(
            MessageKind::NetworkDataMobileAgent,
            sender,
            Payload::Knowledge(data),
        )
    }

    pub fn ping(sender: NodeId) -> Self {
        Self::new(MessageKind::Ping, sender, Payload::None)
    }

    pub fn heartbeat(sender: NodeId) -> Self {
        Self::new(MessageKind::Heartbeat, sender, Payload::None)
    }

    pub fn kind(&self) -> MessageKind {
        self.kind
    }

    pub fn sender(&self) -> NodeId {
        self.sender
    }

    pub fn payload(&self) -> &Payload {
        &self.payload
    }

    pub fn size_bytes(&self) -> usize {
        self.size_bytes
    }

    pub fn knowledge(&self) -> Option<&TopologyKnowledge> {
        match &self.payload {
            Payload::Knowledge(k) => Some(k),
            _ => None,
        }
    }

    pub fn target(&self) -> Option<NodeId> {
        match self.payload {
            Payload::Node(id) => Some(id),
            _ => None,
        }
    }
}

/// Per-node inbound queue. Messages land in a staging buffer and only become
/// drainable after [`Mailbox::deliver`], which the engine calls once per
/// round.
#[derive(Clone, Debug, Default)]
pub struct Mailbox {
    staged: Vec<Message>,
    ready: VecDeque<Message>,
}

impl Mailbox {
    pub fn push(&mut self, message: Message) {
        self.staged.push(message);
    }

    /// Makes staged messages drainable, preserving arrival order.
    pub fn deliver(&mut self) {
        self.ready.extend(self.staged.drain(..));
    }

    /// Removes and returns all deliverable messages in FIFO order.
    pub fn drain(&mut self) -> Vec<Message> {
        self.ready.drain(..).collect()
    }

    pub fn pending(&self) -> usize {
        self.staged.len() + self.ready.len()
    }

    pub fn pending_bytes(&self) -> u64 {
        self.staged
            .iter()
            .chain(&self.ready)
            .map(|m| m.size_bytes() as u64)
            .sum()
    }
}
