//! Trisection parameters of the doubled manifold and the certificate that
//! they meet the Chu–Tillmann lower bound `g >= chi - 2 + 3 rk(pi_1)`.
//!
//! The lower bound is evaluated at the presentation rank `n = |X|`. Whether
//! that equals the rank of the group is a separate question, answered only
//! when the abelianization already needs `n` generators.

use std::fmt;

use thiserror::Error;

use crate::abelian::{rank_report, RankReport, Status};
use crate::builder::{extract_link, slide_all, tunnel_upper_bound, Link, TunnelSystem};
use crate::kirby::{build_n, double, euler_characteristic, KirbyDiagram, Stabilization};
use crate::presentation::Presentation;

/// A `(g; k1, k2, k3)` trisection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TrisectionParams {
    pub g: usize,
    pub k1: usize,
    pub k2: usize,
    pub k3: usize,
}

impl TrisectionParams {
    pub fn balanced(g: usize, k: usize) -> Self {
        TrisectionParams { g, k1: k, k2: k, k3: k }
    }

    pub fn k_sum(&self) -> usize {
        self.k1 + self.k2 + self.k3
    }

    pub fn is_balanced(&self) -> bool {
        self.k1 == self.k2 && self.k2 == self.k3
    }

    /// Euler characteristic forced by the trisection, `2 + g - (k1 + k2 + k3)`.
    pub fn euler_characteristic(&self) -> i64 {
        2 + self.g as i64 - self.k_sum() as i64
    }

    /// Connected sum with the genus-2 trisection of `S^2 x S^2` and the
    /// genus-1 trisections of `±CP^2`.
    pub fn stabilized(&self, s: &Stabilization) -> Self {
        TrisectionParams {
            g: self.g + s.euler_shift(),
            ..*self
        }
    }
}

impl fmt::Display for TrisectionParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {}, {}, {})", self.g, self.k1, self.k2, self.k3)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TrisectError {
    #[error("tunnel bound {tunnels} is too small for a {components}-component link (k2 would be negative)")]
    NegativeK2 { tunnels: usize, components: usize },
    #[error("genus {g} is smaller than handlebody genus {k}")]
    GenusBelowHandlebody { g: usize, k: usize },
    #[error("tunnel count {t_l} differs from n + |L| - 1 = {expected}")]
    TunnelCount { t_l: usize, expected: usize },
    #[error("inequality chain {chain:?} is not constant")]
    ChainViolated { chain: [i64; 4] },
    #[error("g = {g} but chi - 2 + 3n = {bound}")]
    BoundNotAttained { g: i64, bound: i64 },
    #[error("chi = {chi} from handles but 2 + g - sum(k) = {from_params}")]
    EulerMismatch { chi: i64, from_params: i64 },
    #[error("diagram shape does not match the link: {0}")]
    Diagram(&'static str),
}

/// `(t + 1; n, t + 1 - |L|, n)` for a link with `|L|` components and tunnel
/// number at most `t` in `#_n S^1 x S^2`.
pub fn trisection_from_link(
    n: usize,
    num_components: usize,
    tunnel_bound: usize,
) -> Result<TrisectionParams, TrisectError> {
    let g = tunnel_bound + 1;
    let k2 = g.checked_sub(num_components).ok_or(TrisectError::NegativeK2 {
        tunnels: tunnel_bound,
        components: num_components,
    })?;
    if n > g {
        return Err(TrisectError::GenusBelowHandlebody { g, k: n });
    }
    Ok(TrisectionParams { g, k1: n, k2, k3: n })
}

/// `chi - 2 + 3 * rank`.
pub fn chu_tillmann_bound(chi: i64, rank: i64) -> i64 {
    chi - 2 + 3 * rank
}

/// Intermediate quantities of the doubling argument.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ChainFragment {
    pub n: usize,
    pub t_l: usize,
    pub num_l: usize,
    /// `t(L) + |L|`, an upper bound for the tunnel number of the doubled link.
    pub t_lhat: usize,
    pub num_lhat: usize,
    /// `n, t(L^) + 1 - |L^|, t(L) + 1 - |L|, n`.
    pub chain: [i64; 4],
}

/// Evaluates `n <= t(L^)+1-|L^| <= t(L)+1-|L| <= n` for the doubled link.
pub fn verify_chain(n: usize, t_l: usize, num_l: usize) -> Result<ChainFragment, TrisectError> {
    let expected = n + num_l;
    if t_l + 1 != expected {
        return Err(TrisectError::TunnelCount {
            t_l,
            expected: expected.saturating_sub(1),
        });
    }
    let t_lhat = t_l + num_l;
    let num_lhat = 2 * num_l;
    let (n_i, t_l_i, num_l_i) = (n as i64, t_l as i64, num_l as i64);
    let chain = [n_i, t_lhat as i64 + 1 - num_lhat as i64, t_l_i + 1 - num_l_i, n_i];
    if chain.windows(2).any(|w| w[0] > w[1]) || chain[0] != chain[3] {
        return Err(TrisectError::ChainViolated { chain });
    }
    Ok(ChainFragment {
        n,
        t_l,
        num_l,
        t_lhat,
        num_lhat,
        chain,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Note {
    /// No relators: the free-group path `g = n`, `chi = 2 - 2n` was used.
    FreeGroup,
    /// `n = 0`; the construction assumes a nontrivial group and degenerates to `S^4`.
    TrivialGroup,
}

impl Note {
    pub fn as_str(self) -> &'static str {
        match self {
            Note::FreeGroup => "free-group",
            Note::TrivialGroup => "trivial-group",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "free-group" => Some(Note::FreeGroup),
            "trivial-group" => Some(Note::TrivialGroup),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Certificate {
    /// Presentation rank `|X|`.
    pub n: usize,
    pub num_l: usize,
    pub num_lhat: usize,
    /// `None` for the empty link.
    pub t_l: Option<usize>,
    pub t_lhat: Option<usize>,
    pub chain: [i64; 4],
    /// Parameters of the doubled manifold before stabilization; this is the
    /// `(t(L^)+1; n, t(L^)+1-|L^|, n)` form.
    pub unstabilized: TrisectionParams,
    pub stabilization: Stabilization,
    pub params: TrisectionParams,
    /// Euler characteristic from handle counts.
    pub chi: i64,
    /// `chi - 2 + 3n`.
    pub lower_bound: i64,
    pub rank_report: RankReport,
    pub notes: Vec<Note>,
    pub status: Status,
}

/// Certifies an already constructed doubled (and possibly stabilized) diagram.
pub fn certify_construction(
    p: &Presentation,
    link: &Link,
    tunnels: &TunnelSystem,
    m: &KirbyDiagram,
) -> Result<Certificate, TrisectError> {
    let n = p.num_generators();
    let num_l = link.len();
    if !m.closed || m.one_handles != n || m.h3 != n || m.h4 != 1 || m.h0 != 1 {
        return Err(TrisectError::Diagram("expected a closed double over n 1-handles"));
    }
    if m.num_attaching() != num_l || m.num_meridians() != num_l {
        return Err(TrisectError::Diagram("2-handles do not match the link"));
    }

    let mut notes = Vec::new();
    let (unstabilized, t_l, t_lhat, num_lhat, chain) = if link.is_empty() {
        notes.push(Note::FreeGroup);
        let n_i = n as i64;
        (TrisectionParams::balanced(n, n), None, None, 0, [n_i; 4])
    } else {
        let bound = tunnel_upper_bound(n, num_l).expect("link is nonempty");
        if tunnels.count != bound {
            return Err(TrisectError::TunnelCount {
                t_l: tunnels.count,
                expected: bound,
            });
        }
        let frag = verify_chain(n, tunnels.count, num_l)?;
        let params = trisection_from_link(n, frag.num_lhat, frag.t_lhat)?;
        (params, Some(frag.t_l), Some(frag.t_lhat), frag.num_lhat, frag.chain)
    };
    if n == 0 {
        notes.push(Note::TrivialGroup);
    }

    let params = unstabilized.stabilized(&m.stabilization);
    let chi = euler_characteristic(m);
    let lower_bound = chu_tillmann_bound(chi, n as i64);
    if params.g as i64 != lower_bound || !params.is_balanced() || params.k1 != n {
        return Err(TrisectError::BoundNotAttained {
            g: params.g as i64,
            bound: lower_bound,
        });
    }
    if params.euler_characteristic() != chi {
        return Err(TrisectError::EulerMismatch {
            chi,
            from_params: params.euler_characteristic(),
        });
    }

    let rank_report = rank_report(p);
    let status = rank_report.status;
    Ok(Certificate {
        n,
        num_l,
        num_lhat,
        t_l,
        t_lhat,
        chain,
        unstabilized,
        stabilization: m.stabilization,
        params,
        chi,
        lower_bound,
        rank_report,
        notes,
        status,
    })
}

/// Runs the whole construction with zero framings and no stabilization.
pub fn certify(p: &Presentation) -> Certificate {
    let (link, tunnels) = extract_link(&slide_all(p));
    let n = build_n(p, &link, &[]).expect("zero framings always fit");
    let m = double(&n).expect("N is open");
    certify_construction(p, &link, &tunnels, &m).expect("construction satisfies its own invariants")
}
