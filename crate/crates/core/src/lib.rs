pub mod agents;
pub mod engine;
pub mod env;
pub mod error;
pub mod healing;
pub mod messaging;
pub mod metrics;
pub mod node;
pub mod rng;
pub mod topology;

pub use error::{Error, Result};
pub use topology::{Graph, NodeId};
