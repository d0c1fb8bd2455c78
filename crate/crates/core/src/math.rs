//! Scalar functions routed to `std` or to `libm` depending on the build.

#[cfg(feature = "std")]
mod imp {
    #[inline]
    pub fn sin(x: f64) -> f64 {
        x.sin()
    }
    #[inline]
    pub fn cos(x: f64) -> f64 {
        x.cos()
    }
    #[inline]
    pub fn asin(x: f64) -> f64 {
        x.asin()
    }
    #[inline]
    pub fn acos(x: f64) -> f64 {
        x.acos()
    }
    #[inline]
    pub fn sqrt(x: f64) -> f64 {
        x.sqrt()
    }
    #[inline]
    pub fn ln(x: f64) -> f64 {
        x.ln()
    }
    #[inline]
    pub fn exp(x: f64) -> f64 {
        x.exp()
    }
    #[inline]
    pub fn floor(x: f64) -> f64 {
        x.floor()
    }
    #[inline]
    pub fn ceil(x: f64) -> f64 {
        x.ceil()
    }
    #[inline]
    pub fn round(x: f64) -> f64 {
        x.round()
    }
    #[inline]
    pub fn log2(x: f64) -> f64 {
        x.log2()
    }
}

#[cfg(all(not(feature = "std"), feature = "libm"))]
mod imp {
    pub use libm::{acos, asin, ceil, cos, exp, floor, log as ln, log2, round, sin, sqrt};
}

#[cfg(not(any(feature = "std", feature = "libm")))]
compile_error!(
    "qae-core needs either the `std` or the `libm` feature for floating-point functions"
);

pub use imp::*;

/// `sin²(x)`.
#[inline]
pub fn sin_sq(x: f64) -> f64 {
    let s = sin(x);
    s * s
}

/// `cos²(x)`.
#[inline]
pub fn cos_sq(x: f64) -> f64 {
    let c = cos(x);
    c * c
}
