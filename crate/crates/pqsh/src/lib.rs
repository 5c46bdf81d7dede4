//! Post-quantum (p,q)-Salagean harmonic function families on the unit
//! disc: the twin-basic calculus, truncated harmonic series, family
//! membership via the coefficient functional, extreme points, sharp
//! distortion/covering/convexity bounds, and brute-force numerical
//! verification of each of them.
//!
//! Layering, bottom-up:
//! - [`pq`]: twin-basic numbers and the (p,q)-derivative.
//! - [`series`]: truncated harmonic series and the Salagean operator.
//! - [`family`]: family specs, presets, membership, the defining ratio.
//! - [`extremal`]: extreme points and convex-hull weight decompositions.
//! - [`bounds`]: closed-form coefficient, distortion, covering, and
//!   convexity-radius bounds.
//! - [`verify`]: disc-grid oracles that check the closed forms.
//! - [`config`], [`job`], [`render`]: the JSON job surface.

pub mod bounds;
pub mod config;
pub mod extremal;
pub mod family;
pub mod job;
pub mod pq;
pub mod render;
pub mod series;
pub mod verify;

pub use family::{CoeffSeq, FamilySpec, Preset};
pub use pq::PQParams;
pub use series::HarmonicFunction;
