//! Orbifold points on the Prym-Teichmüller curves `W_D` in genus three.
//!
//! The points of order 2 and 3 on `W_D` are counted by two ternary
//! quadratic solution sets, and the genus follows from the Euler
//! characteristic, cusps and these counts. Modules:
//!
//! - [`discriminant`]: validation and conductor of `D`
//! - [`forms`]: `H₂(D)`, `H₃(D)` and the counts `e₂, e₃, e₄, e₆`
//! - [`topology`]: genus from shipped invariant fixtures
//! - [`geometry`]: the point map into the disc and the triangle domain
//! - [`periods`]: period matrices and real multiplication certificates
//! - [`render`]: SVG and CSV point clouds

pub mod discriminant;
pub mod forms;
pub mod geometry;
pub mod periods;
pub mod render;
pub mod topology;

pub use discriminant::{validate, Discriminant, DiscriminantError};
pub use forms::{enumerate_h2, enumerate_h3, orbifold_counts, FormKind, OrbifoldCounts, Triple};
