//! End-to-end construction: presentation to certified, doubled diagram.

use thiserror::Error;

use crate::builder::{build_gamma0, extract_link, slide_all, Link, SpatialGraph, TunnelSystem};
use crate::kirby::{build_n, double, stabilize, KirbyDiagram, KirbyError, Stabilization};
use crate::presentation::Presentation;
use crate::trisect::{certify_construction, Certificate, TrisectError};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Options {
    /// One framing per relator, or empty for all zeros.
    pub framings: Vec<i64>,
    pub stabilization: Stabilization,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Kirby(#[from] KirbyError),
    #[error("internal invariant violated: {0}")]
    Invariant(#[from] TrisectError),
}

/// Every stage of the construction for one presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Construction {
    pub presentation: Presentation,
    /// The unknotted graph before any slides.
    pub gamma0: SpatialGraph,
    /// The graph after each circle has been slid to read its relator.
    pub slid: SpatialGraph,
    /// The link with the chosen framings.
    pub link: Link,
    pub tunnels: TunnelSystem,
    pub handlebody: KirbyDiagram,
    /// The double, stabilized if requested.
    pub closed: KirbyDiagram,
    pub certificate: Certificate,
}

pub fn construct(p: &Presentation, opts: &Options) -> Result<Construction, PipelineError> {
    let gamma0 = build_gamma0(p.num_generators(), p.num_relators());
    let slid = slide_all(p);
    let (link, tunnels) = extract_link(&slid);
    let handlebody = build_n(p, &link, &opts.framings)?;
    let s = opts.stabilization;
    let closed = stabilize(&double(&handlebody)?, s.s2xs2, s.cp2, s.cp2_bar)?;
    let link = link.with_framings(&opts.framings);
    let certificate = certify_construction(p, &link, &tunnels, &closed)?;
    Ok(Construction {
        presentation: p.clone(),
        gamma0,
        slid,
        link,
        tunnels,
        handlebody,
        closed,
        certificate,
    })
}
