//! Exact cut-set bounds, channel-pairing rates and block Markov simulation for
//! layered multi-source relay networks over the binary field with
//! time-varying channels.

pub mod assignment;
pub mod bounds;
pub mod cli;
pub mod gf2;
pub mod multi_hop;
pub mod network;
pub mod rational;
pub mod sampler;
pub mod simulator;
pub mod single_hop;

pub use gf2::BitMatrix;
pub use network::{ChannelLaw, LayeredNetwork, NodeId};
pub use rational::Rational;
