//! Capacity-region bounds for the two-user Gaussian interference channel in
//! which the secondary (cognitive) transmitter knows one of the primary
//! transmitter's two messages.
//!
//! The crate is `no_std` (it needs `alloc`). All transcendental functions go
//! through `libm`, so results are bit-identical across platforms.
//!
//! * [`model`]: channel, power split, weights and rate types.
//! * [`regions`]: per-split outer/inner polytopes, vertex enumeration,
//!   support functions and hull-of-union queries over the split square.
//! * [`optimize`]: weighted-sum maximization and the optimality conditions.
//! * [`mcsim`]: Monte Carlo check of the Gaussian signalling statistics.
//! * [`exec`]: the hook used by callers to run sweeps in parallel.

#![no_std]

extern crate alloc;

pub mod exec;
mod math;
pub mod mcsim;
pub mod model;
pub mod optimize;
pub mod regions;

pub use exec::{Executor, Serial};
pub use model::{ChannelParams, ModelError, PowerSplit, RateTriple, RawChannel, Weights};
pub use regions::{BoundKind, RegionBounds, RegionError, RegionShape, SplitGrid, SupportResult};
