//! Channels in Kraus form, Choi calculus, complementary channels, the
//! channel zoo and combinators.

mod channel;
mod combinators;
mod zoo;

pub use channel::{Channel, ChannelStructure, KRAUS_PRUNE, TP_TOLERANCE};
pub use combinators::{direct_sum, flagged, tensor, tensor_power, FlaggedChannel};
pub use zoo::{
    depolarizing_channel, erasure_channel, erasure_flagged, identity_channel, is_special_q,
    isometry_channel, private_channel, replacement_channel, weyl,
};
