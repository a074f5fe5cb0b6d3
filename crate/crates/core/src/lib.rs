//! Fourth-moment quantitative approximation bounds for divisible laws.
//!
//! The crate is organised bottom-up:
//!
//! * [`partitions`] enumerates set, non-crossing and pair partitions.
//! * [`cumulants`] converts between moments and classical or free cumulants.
//! * [`distributions`] is a small catalog of laws with exact moments and CDFs.
//! * [`kolmogorov`] computes sup-norm CDF distances with a certified error.
//! * [`bounds`] evaluates the Gaussian and semicircle approximation bounds for
//!   N-divisible and infinitely divisible laws, and runs the kurtosis audit.
//!
//! ```
//! use fml_core::cumulants::{moments_from_cumulants, CumulantSequence, Kind};
//!
//! let semicircle = CumulantSequence::new(Kind::Free, vec![0.0, 1.0, 0.0, 0.0]);
//! let m = moments_from_cumulants(&semicircle).unwrap();
//! assert_eq!(m.values(), &[0.0, 1.0, 0.0, 2.0]);
//! ```

// `!(x > 0.0)` style checks are used on purpose to reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cumulants;
pub mod distributions;
mod error;
pub mod kolmogorov;
pub mod partitions;
pub mod quadrature;

pub use bounds::{BoundReport, Divisibility, KurtosisAudit, Theorem};
pub use cumulants::{CumulantSequence, Kind, MomentSequence};
pub use distributions::DistributionSpec;
pub use error::{Error, Result};
pub use kolmogorov::{DistanceResult, Method};
pub use partitions::{Ceilings, Partition, PartitionFamily, PartitionKind};
