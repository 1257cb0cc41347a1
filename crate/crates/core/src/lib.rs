//! Square-tiled surfaces as lattice points of strata of Abelian differentials.
//!
//! The crate pairs exact closed-form values for strata (conjectural volumes,
//! hyperelliptic volumes and Siegel-Veech constants, Lyapunov sums) with a
//! brute-force oracle: exact counts of square-tiled surfaces per stratum and
//! area, from which volumes and Siegel-Veech constants are estimated.
//!
//! - [`strata`]: partitions, strata, components, exact closed forms.
//! - [`origami`]: permutation pairs, cylinders, `SL(2,Z)` action, spin parity,
//!   hyperellipticity.
//! - [`census`]: exact counting engines (direct enumeration and Frobenius
//!   character sums) and the file-backed count database.
//! - [`estimate`]: volume extrapolation and epsilon statistics.
//! - [`svcount`]: area-weighted cylinder counting and Siegel-Veech estimates.
//!
//! Heavy loops run on rayon when the `parallel` feature is enabled (the
//! default); every such entry point takes an [`Exec`] so the sequential path
//! stays available at runtime.

pub mod census;
pub mod error;
pub mod estimate;
pub mod exec;
pub mod origami;
pub mod strata;
pub mod svcount;

pub use error::{Error, Result};
pub use exec::Exec;
