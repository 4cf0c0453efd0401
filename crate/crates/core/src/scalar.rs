use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating point type the numerical routines are written against.
///
/// Implemented for `f32` and `f64`. Every algorithm in this crate is generic
/// over `Scalar`; tolerances are given as `f64` literals and converted with
/// [`Scalar::lit`]. Absolute tolerances below the type's resolution are
/// clamped by the individual routines, so the `f32` instantiation terminates
/// but naturally delivers fewer digits.
pub trait Scalar:
    'static
    + Send
    + Sync
    + Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Default
    + std::fmt::Debug
    + std::fmt::Display
    + std::fmt::LowerExp
    + std::iter::Sum
    + serde::Serialize
{
    /// Converts an `f64` constant into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// `tol` or a small multiple of machine epsilon, whichever is larger.
    #[inline]
    fn tol_or_eps(tol: f64) -> Self {
        let t = Self::lit(tol);
        let floor = Self::epsilon() * Self::lit(8.0);
        if t > floor {
            t
        } else {
            floor
        }
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
