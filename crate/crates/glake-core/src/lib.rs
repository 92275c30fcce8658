//! Glacial-lake mask analysis and evaluation toolkit.
//!
//! The pipeline turns binary lake masks into spatially grounded
//! question–answer records (instance extraction → positional labels →
//! template rendering), verifies positional claims in free text against
//! mask-derived ground truth, and scores segmentation (IoU/Dice) and
//! generated text (BLEU-4, ROUGE-L, METEOR-lite).
//!
//! Numeric kernels are generic over the scalar type via [`num::Real`];
//! [`Scalar`] (`f64`) is the concrete type used by the pipeline and all
//! serialized records.

pub mod claims;
pub mod error;
pub mod instance;
pub mod metrics;
pub mod num;
pub mod qa;
pub mod raster;
pub mod seed;
pub mod synth;

/// Concrete scalar for pipeline data and serialized records.
pub type Scalar = f64;

pub use error::{Error, Result};
pub use instance::{
    assign_position, describe_position, label_components, AnalysisConfig, BoundingBox, CenterMode,
    CenterPoint, Connectivity, LakeInstance, PositionLabel, Proximity, Quadrant,
};
pub use raster::{load_mask, save_mask, BinaryMask};
