//! Weierstrass models over Q[t], their invariants, and Kodaira fibre types.

mod fiber;
mod surface;
mod weierstrass;

pub use fiber::{classify_fibre, classify_valuations, Dynkin, FiberRecord, KodairaType, Val};
pub use surface::{classify_all, shioda_tate, GeometricFiber, ShiodaTate, SurfaceData};
pub use weierstrass::{reduce_invariants, Invariants, WeierstrassModel};
