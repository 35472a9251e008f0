//! Random chords of the unit circle drawn from a probability measure on its
//! boundary: exact and Monte Carlo probabilities that chords meet inside a
//! disk, extremal measures, and Fourier energy bounds.
//!
//! ```
//! use random_chords::exact::{prob_closed_form_r1, prob_enumerate};
//! use random_chords::DiscreteMeasure;
//!
//! let square = DiscreteMeasure::regular_polygon(4)?;
//! assert_eq!(prob_closed_form_r1(&square)?.value, 0.125);
//! assert_eq!(prob_enumerate(&square, 1.0, true)?.value, 0.125);
//! # Ok::<(), random_chords::Error>(())
//! ```

pub mod cli;
pub mod energy;
pub mod error;
pub mod exact;
pub mod geometry;
pub mod measure;
pub mod montecarlo;
pub mod numeric;
pub mod optimize;
pub mod special;
pub mod verify;

pub use error::{Error, Invariant, Result};
pub use geometry::{Angle, AngleUnit, Arc};
pub use measure::{DiscreteMeasure, MixtureMeasure};
