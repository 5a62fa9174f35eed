//! Mobile agents: the per-round agent program and random-with-marks moves.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::env::NetworkEnvironment;
use crate::messaging::{knowledge_size, Message, TopologyKnowledge};
use crate::topology::NodeId;
use crate::{Error, Result};

/// Fixed bookkeeping cost charged per live agent on top of its knowledge.
pub const AGENT_OVERHEAD_BYTES: usize = 16;

#[derive(Clone, Debug)]
pub struct MobileAgentState {
    pub agent_id: u64,
    pub location: NodeId,
    pub knowledge: Arc<TopologyKnowledge>,
    pub counter: u32,
    pub k: u32,
}

impl MobileAgentState {
    pub fn memory_bytes(&self) -> usize {
        knowledge_size(&self.knowledge) + AGENT_OVERHEAD_BYTES
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AgentOutcome {
    Survived,
    DiedNodeFailure,
    DiedRedundancy,
}

impl NetworkEnvironment {
    /// Places a new agent on `id` carrying the node's current knowledge.
    pub fn spawn_agent_at(&mut self, id: NodeId) -> Result<&MobileAgentState> {
        let node = self.node(id).ok_or(if self.graph().contains(id) {
            Error::NodeFailed(id)
        } else {
            Error::UnknownNode(id)
        })?;
        let knowledge = node.knowledge_arc();
        let k = self.params().k_agents;
        let agent_id = self.next_agent_id();
        self.agents.push(MobileAgentState {
            agent_id,
            location: id,
            knowledge,
            counter: 0,
            k,
        });
        Ok(self.agents.last().expect("just pushed"))
    }
}

/// Picks the next hop from `location`: uniform over unvisited live
/// neighbors, else uniform over all live neighbors. One ping is charged per
/// neighbor queried. `None` when there is nowhere to go.
pub fn random_with_marks<R: Rng + ?Sized>(
    env: &mut NetworkEnvironment,
    location: NodeId,
    rng: &mut R,
) -> Option<NodeId> {
    let neighbors: Vec<NodeId> = env.graph().neighbors(location).iter().copied().collect();
    if neighbors.is_empty() {
        return None;
    }
    for &nb in &neighbors {
        env.record_delivery(nb, &Message::ping(location));
    }
    let unmarked: Vec<NodeId> = neighbors
        .iter()
        .copied()
        .filter(|&nb| env.node(nb).is_some_and(|n| !n.visited))
        .collect();
    let pool = if unmarked.is_empty() {
        &neighbors
    } else {
        &unmarked
    };
    pool.choose(rng).copied()
}

/// Runs the agent program for the agent at `index` in the agent list. Dead
/// agents are left in place for the caller to sweep.
pub fn agent_act<R: Rng + ?Sized>(
    env: &mut NetworkEnvironment,
    index: usize,
    rng: &mut R,
) -> AgentOutcome {
    let location = env.agents[index].location;
    let Some(node) = env.node(location) else {
        return AgentOutcome::DiedNodeFailure;
    };
    let node_k = node.knowledge_arc();
    let agent = &mut env.agents[index];
    let equal = *agent.knowledge == *node_k;
    if equal {
        agent.counter += 1;
    } else {
        agent.counter = 0;
    }
    if agent.counter >= agent.k {
        return AgentOutcome::DiedRedundancy;
    }
    let carried = Arc::clone(&agent.knowledge);
    agent.knowledge = if equal || agent.knowledge.is_subset(&node_k) {
        node_k
    } else if node_k.is_subset(&agent.knowledge) {
        carried.clone()
    } else {
        Arc::new(TopologyKnowledge::union(&carried, &node_k))
    };
    env.send(
        location,
        Message::network_data_mobile_agent(location, carried),
    );
    if let Some(node) = env.node_mut(location) {
        node.visited = true;
    }
    if let Some(next) = random_with_marks(env, location, rng) {
        env.agents[index].location = next;
    }
    AgentOutcome::Survived
}

/// Agent phase: every agent acts once in a shuffled order; dead agents are
/// removed afterwards. Returns the outcomes in acting order.
pub fn agents_phase<R: Rng + ?Sized, S: Rng + ?Sized>(
    env: &mut NetworkEnvironment,
    order_rng: &mut S,
    move_rng: &mut R,
) -> Vec<(u64, AgentOutcome)> {
    let mut order: Vec<usize> = (0..env.agents.len()).collect();
    order.shuffle(order_rng);
    let mut dead = vec![false; order.len()];
    let mut outcomes = Vec::with_capacity(order.len());
    for i in order {
        let outcome = agent_act(env, i, move_rng);
        if outcome != AgentOutcome::Survived {
            dead[i] = true;
        }
        outcomes.push((env.agents[i].agent_id, outcome));
    }
    let mut i = 0;
    env.agents.retain(|_| {
        let keep = !dead[i];
        i += 1;
        keep
    });
    outcomes
}
