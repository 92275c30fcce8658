use num_traits::{Float, FromPrimitive};

/// Floating-point scalar used by the geometry and metric kernels.
///
/// Everything numeric in this crate is written against this trait so the
/// same code runs at `f32` or `f64`; the crate root exports [`crate::Scalar`]
/// (`f64`) as the concrete type the pipeline and serialized records use.
pub trait Real: Float + FromPrimitive + std::fmt::Debug + Send + Sync + 'static {}

impl<T> Real for T where T: Float + FromPrimitive + std::fmt::Debug + Send + Sync + 'static {}

/// Lossless for pixel counts and dimensions in any realistic image size.
pub fn from_count<F: Real>(n: u64) -> F {
    F::from_u64(n).expect("pixel count representable in scalar type")
}
