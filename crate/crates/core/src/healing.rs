//! Failure detection by neighbor sensing and decentralized recreation of
//! missing nodes.
//!
//! A node compares the neighbors it senses with the neighborhood it has
//! memorized. Newly sensed neighbors are added to memory. For every
//! memorized neighbor that is gone, the node looks up the victim's
//! neighborhood in its own knowledge; the lowest-id live holder of that
//! neighborhood recreates the victim. Higher-id candidates ping lower ones
//! and abstain if any of them answers.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::env::NetworkEnvironment;
use crate::messaging::{Message, MessageKind};
use crate::node::{handle_connect, Protocol};
use crate::topology::NodeId;
use crate::Result;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HealingDecision {
    pub missing: NodeId,
    pub creator: NodeId,
    /// The missing node's neighborhood as memorized by the creator.
    pub neighbor_set: BTreeSet<NodeId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum HealingAction {
    Created(HealingDecision),
    /// The missing id was already back; the node only linked to it.
    Reconnected {
        node: NodeId,
        missing: NodeId,
    },
    Abstained {
        node: NodeId,
        missing: NodeId,
        deferred_to: NodeId,
    },
    MissingKnowledge {
        node: NodeId,
        missing: NodeId,
    },
}

/// Currently alive adjacent nodes of `id`. Charges one heartbeat to each
/// believed neighbor that is alive to receive it.
pub fn sense_neighbours(env: &mut NetworkEnvironment, id: NodeId) -> BTreeSet<NodeId> {
    let believed: Vec<NodeId> = env
        .node(id)
        .map(|n| n.memory().collect())
        .unwrap_or_default();
    for nb in believed {
        env.record_delivery(nb, &Message::heartbeat(id));
    }
    env.graph().neighbors(id).clone()
}

/// `at` handles `connect(target)`; the networkData reply reaches `target`
/// within the same phase.
fn connect_now(env: &mut NetworkEnvironment, at: NodeId, target: NodeId) {
    let Some(outbox) = env.with_node_context(at, |node, cx| handle_connect(node, target, cx))
    else {
        return;
    };
    for (to, reply) in outbox {
        if env.record_delivery(to, &reply) {
            if let (Some(k), Some(dest)) = (reply.knowledge(), env.node_mut(to)) {
                dest.absorb(k);
            }
        }
    }
}

/// Recreates `missing` on behalf of `creator` and reconnects it to every
/// live node of `neighbor_set`. If `missing` is already alive the creator
/// only links to it.
pub fn create_new_node<R: Rng + ?Sized>(
    env: &mut NetworkEnvironment,
    creator: NodeId,
    missing: NodeId,
    neighbor_set: &BTreeSet<NodeId>,
    trickle_rng: &mut R,
) -> Result<NodeId> {
    if env.graph().is_alive(missing) {
        connect_now(env, creator, missing);
        return Ok(missing);
    }
    let seed = env
        .node(creator)
        .map(|n| n.knowledge_arc())
        .ok_or(crate::Error::NodeFailed(creator))?;
    env.revive(missing, Arc::clone(&seed), trickle_rng)?;
    env.record_delivery(missing, &Message::network_data(creator, seed));
    env.link(creator, missing)?;
    if env.protocol() == Protocol::MobileAgents {
        env.spawn_agent_at(missing)?;
    }
    for &nb in neighbor_set {
        if nb == creator || nb == missing {
            continue;
        }
        let request = Message::connect(creator, missing);
        debug_assert_eq!(request.kind(), MessageKind::Connect);
        if env.record_delivery(nb, &request) {
            connect_now(env, nb, missing);
        }
    }
    Ok(missing)
}

/// Runs detection and, where elected, recreation for node `id`.
pub fn evaluate_node_creation<R: Rng + ?Sized>(
    env: &mut NetworkEnvironment,
    id: NodeId,
    trickle_rng: &mut R,
) -> Result<Vec<HealingAction>> {
    if !env.graph().is_alive(id) {
        return Ok(Vec::new());
    }
    let sensed = sense_neighbours(env, id);
    let node = env.node_mut(id).expect("live node has state");
    for &s in &sensed {
        node.remember_neighbor(s);
    }
    let missing: Vec<NodeId> = node.memory().filter(|m| !sensed.contains(m)).collect();
    let mut actions = Vec::new();
    for m in missing {
        if env.graph().is_alive(m) {
            connect_now(env, id, m);
            actions.push(HealingAction::Reconnected {
                node: id,
                missing: m,
            });
            continue;
        }
        let Some(neighbor_set) = env.node(id).and_then(|n| n.knowledge().get(m)).cloned() else {
            env.traffic_mut().missing_knowledge += 1;
            log::debug!("node {id} lost neighbor {m} but holds no entry for it");
            actions.push(HealingAction::MissingKnowledge {
                node: id,
                missing: m,
            });
            continue;
        };
        let mut deferred_to = None;
        for &c in neighbor_set.range(..id) {
            if c == m {
                continue;
            }
            let answered = env.record_delivery(c, &Message::ping(id));
            if answered && env.node(c).is_some_and(|n| n.knowledge().contains(m)) {
                deferred_to = Some(c);
                break;
            }
        }
        if let Some(c) = deferred_to {
            actions.push(HealingAction::Abstained {
                node: id,
                missing: m,
                deferred_to: c,
            });
            continue;
        }
        create_new_node(env, id, m, &neighbor_set, trickle_rng)?;
        actions.push(HealingAction::Created(HealingDecision {
            missing: m,
            creator: id,
            neighbor_set,
        }));
    }
    Ok(actions)
}

/// Healing phase: every node alive at the start of the phase runs
/// detection in ascending id order. Replicas created during the phase wait
/// for the next round.
pub fn healing_phase<R: Rng + ?Sized>(
    env: &mut NetworkEnvironment,
    trickle_rng: &mut R,
) -> Result<Vec<HealingAction>> {
    let live: Vec<NodeId> = env.graph().live_nodes().collect();
    let mut actions = Vec::new();
    for id in live {
        actions.extend(evaluate_node_creation(env, id, trickle_rng)?);
    }
    Ok(actions)
}
