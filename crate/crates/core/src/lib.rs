//! Convolutional polar codes: the polarizing transform, min-sum cluster
//! operators, successive-cancellation and list decoders, and a simulation
//! harness.

pub mod bits;
pub mod cluster;
pub mod error;
pub mod list;
pub mod sc;
pub mod schedule;
pub mod sim;
pub mod transform;

pub use cluster::{Cluster, Llr, OpCounter};
pub use error::{Error, Result};
pub use list::{decode_list, ListDecoder, ListOptions, ListOutput, ListPool};
pub use sc::{decode_sc, Mode, ScDecoder, ScOutput};
pub use transform::{encode, encode_inverse, CodeSpec};
