//! Quadrature, root finding, interpolation and other numerical building blocks.

pub mod interp;
pub mod misc;
pub mod quad;
pub mod roots;
pub mod sphere;

pub use interp::Pchip;
pub use misc::{
    geomspace, halton, linear_fit, linspace, unit_ball_volume, unit_sphere_area, Matrix,
};
pub use quad::{integrate, integrate_to_infinity, ln_integrate, QuadConfig, QuadResult};
pub use roots::{brent, monotone_inverse, monotone_inverse_real};
pub use sphere::SphereRule;
