//! Minimal-genus closed 4-manifolds with prescribed fundamental group.
//!
//! Given a presentation `< X | R >` the crate builds a link in
//! `#_|X| S^1 x S^2` whose components read the relators, a tunnel system of
//! `|X| + |R| - 1` arcs, the Kirby diagram of the 2-handlebody `N` attached
//! along that link, its double `M`, and the trisection parameters of `M`.
//! The parameters are checked against the lower bound
//! `g >= chi(M) - 2 + 3 rk(pi_1(M))` and packaged as a [`Certificate`].
//!
//! ```
//! use mingenus::{parse_presentation, certify, TrisectionParams};
//!
//! let p = parse_presentation("< x, y, z | x^3 y^-2, [y,z] >").unwrap();
//! let c = certify(&p);
//! assert_eq!(c.params, TrisectionParams::balanced(7, 3));
//! assert_eq!(c.chi, 0);
//! ```

pub mod abelian;
pub mod builder;
pub mod kirby;
pub mod pipeline;
pub mod presentation;
pub mod render;
pub mod report;
pub mod trisect;

pub use abelian::{rank_report, smith_normal_form, IntMatrix, RankReport, SmithDecomposition, Status};
pub use builder::{Link, SpatialGraph, TunnelSystem};
pub use kirby::{KirbyDiagram, Stabilization};
pub use pipeline::{construct, Construction, Options, PipelineError};
pub use presentation::{parse_presentation, ParseError, Presentation, Word};

pub use report::{deserialize_report, serialize_report, Report, ReportError};
pub use trisect::{certify, Certificate, TrisectionParams};
