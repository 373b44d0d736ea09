//! Kirby diagrams of the 2-handlebody `N` and its double `M`.
//!
//! 1-handles are dotted circles; 2-handles carry the word they read over
//! the 1-handles plus a framing. 3- and 4-handles are only counted.

use thiserror::Error;

use crate::builder::Link;
use crate::presentation::{Presentation, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HandleRole {
    /// Attached along a component of the input link.
    Attaching,
    /// 0-framed meridian of 2-handle `of`, added by doubling.
    Meridian { of: usize },
    /// Half of a 0-framed Hopf pair (an `S^2 x S^2` summand).
    Hopf { partner: usize },
    /// `±1`-framed split unknot (a `±CP^2` summand).
    Projective,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwoHandle {
    pub word: Word,
    pub framing: i64,
    pub role: HandleRole,
}

impl TwoHandle {
    pub fn meridian_of(&self) -> Option<usize> {
        match self.role {
            HandleRole::Meridian { of } => Some(of),
            _ => None,
        }
    }
}

/// Counts of connected-sum summands applied to a closed diagram.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Stabilization {
    pub s2xs2: usize,
    pub cp2: usize,
    pub cp2_bar: usize,
}

impl Stabilization {
    pub fn is_trivial(&self) -> bool {
        *self == Stabilization::default()
    }

    /// Change in Euler characteristic, `2a + b + c`.
    pub fn euler_shift(&self) -> usize {
        2 * self.s2xs2 + self.cp2 + self.cp2_bar
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KirbyDiagram {
    pub h0: usize,
    pub one_handles: usize,
    pub two_handles: Vec<TwoHandle>,
    pub h3: usize,
    pub h4: usize,
    pub closed: bool,
    pub stabilization: Stabilization,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KirbyError {
    #[error("framing vector has {got} entries but the link has {expected} components")]
    FramingLength { expected: usize, got: usize },
    #[error("link component {0} is a meridian; N is built from a meridian-free link")]
    MeridianInInput(usize),
    #[error("link component {component} uses generator {generator} but only {count} 1-handles exist")]
    GeneratorOutOfRange {
        component: usize,
        generator: usize,
        count: usize,
    },
    #[error("diagram is already closed")]
    AlreadyClosed,
    #[error("diagram is not closed")]
    NotClosed,
}

impl KirbyDiagram {
    /// `(h0, h1, h2, h3, h4)`.
    pub fn handle_counts(&self) -> [usize; 5] {
        [self.h0, self.one_handles, self.two_handles.len(), self.h3, self.h4]
    }

    pub fn attaching(&self) -> impl Iterator<Item = &TwoHandle> {
        self.two_handles.iter().filter(|h| h.role == HandleRole::Attaching)
    }

    pub fn num_attaching(&self) -> usize {
        self.attaching().count()
    }

    pub fn num_meridians(&self) -> usize {
        self.two_handles
            .iter()
            .filter(|h| matches!(h.role, HandleRole::Meridian { .. }))
            .count()
    }

    /// Checks the shape constraints tied to `closed` and meridian entries.
    pub fn is_well_formed(&self) -> bool {
        let shape = if self.closed {
            self.h4 == 1 && self.h3 == self.one_handles
        } else {
            self.h3 == 0 && self.h4 == 0 && self.stabilization.is_trivial()
        };
        let handles = self.two_handles.iter().all(|h| match h.role {
            HandleRole::Meridian { of } => h.word.is_empty() && h.framing == 0 && of < self.two_handles.len(),
            HandleRole::Hopf { partner } => h.word.is_empty() && h.framing == 0 && partner < self.two_handles.len(),
            HandleRole::Projective => h.word.is_empty() && h.framing.abs() == 1,
            HandleRole::Attaching => h.word.max_generator().is_none_or(|g| g < self.one_handles),
        });
        shape && handles
    }
}

/// The 2-handlebody `N`: one 0-handle, `n` 1-handles, a 2-handle per link
/// component. An empty `framings` slice means all zeros.
pub fn build_n(p: &Presentation, link: &Link, framings: &[i64]) -> Result<KirbyDiagram, KirbyError> {
    let n = p.num_generators();
    let framings: Vec<i64> = if framings.is_empty() {
        vec![0; link.len()]
    } else if framings.len() == link.len() {
        framings.to_vec()
    } else {
        return Err(KirbyError::FramingLength {
            expected: link.len(),
            got: framings.len(),
        });
    };
    let mut two_handles = Vec::with_capacity(link.len());
    for (i, (c, &f)) in link.components.iter().zip(&framings).enumerate() {
        if c.meridian_of.is_some() {
            return Err(KirbyError::MeridianInInput(i));
        }
        if let Some(g) = c.word.max_generator().filter(|&g| g >= n) {
            return Err(KirbyError::GeneratorOutOfRange {
                component: i,
                generator: g,
                count: n,
            });
        }
        two_handles.push(TwoHandle {
            word: c.word.clone(),
            framing: f,
            role: HandleRole::Attaching,
        });
    }
    Ok(KirbyDiagram {
        h0: 1,
        one_handles: n,
        two_handles,
        h3: 0,
        h4: 0,
        closed: false,
        stabilization: Stabilization::default(),
    })
}

/// The double `N ∪ -N`: each 2-handle gains a 0-framed meridian, and the
/// decomposition is capped by `n` 3-handles and a 4-handle.
pub fn double(n: &KirbyDiagram) -> Result<KirbyDiagram, KirbyError> {
    if n.closed {
        return Err(KirbyError::AlreadyClosed);
    }
    let mut two_handles = n.two_handles.clone();
    two_handles.extend((0..n.two_handles.len()).map(|of| TwoHandle {
        word: Word::identity(),
        framing: 0,
        role: HandleRole::Meridian { of },
    }));
    Ok(KirbyDiagram {
        h0: n.h0,
        one_handles: n.one_handles,
        two_handles,
        h3: n.one_handles,
        h4: 1,
        closed: true,
        stabilization: Stabilization::default(),
    })
}

/// Alternating sum of handle counts.
pub fn euler_characteristic(k: &KirbyDiagram) -> i64 {
    let [h0, h1, h2, h3, h4] = k.handle_counts().map(|c| c as i64);
    h0 - h1 + h2 - h3 + h4
}

/// Connected sum with `a` copies of `S^2 x S^2`, `b` of `CP^2` and `c` of `-CP^2`.
pub fn stabilize(m: &KirbyDiagram, s2xs2: usize, cp2: usize, cp2_bar: usize) -> Result<KirbyDiagram, KirbyError> {
    if !m.closed {
        return Err(KirbyError::NotClosed);
    }
    let mut out = m.clone();
    for _ in 0..s2xs2 {
        let first = out.two_handles.len();
        for partner in [first + 1, first] {
            out.two_handles.push(TwoHandle {
                word: Word::identity(),
                framing: 0,
                role: HandleRole::Hopf { partner },
            });
        }
    }
    for framing in std::iter::repeat_n(1, cp2).chain(std::iter::repeat_n(-1, cp2_bar)) {
        out.two_handles.push(TwoHandle {
            word: Word::identity(),
            framing,
            role: HandleRole::Projective,
        });
    }
    out.stabilization.s2xs2 += s2xs2;
    out.stabilization.cp2 += cp2;
    out.stabilization.cp2_bar += cp2_bar;
    Ok(out)
}

/// Framing parities of the 2-handles attached along the input link; the
/// double only depends on these.
pub fn framings_mod2(k: &KirbyDiagram) -> Vec<u8> {
    k.attaching().map(|h| h.framing.rem_euclid(2) as u8).collect()
}

/// Framings of the 2-handles attached along the input link.
pub fn attaching_framings(k: &KirbyDiagram) -> Vec<i64> {
    k.attaching().map(|h| h.framing).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::{extract_link, slide_all};
    use crate::presentation::parse_presentation;

    fn n_for(text: &str, framings: &[i64]) -> (Presentation, KirbyDiagram) {
        let p = parse_presentation(text).unwrap();
        let (link, _) = extract_link(&slide_all(&p));
        let n = build_n(&p, &link, framings).unwrap();
        (p, n)
    }

    #[test]
    fn build_n_examples() {
        let (_, n) = n_for("<x,y,z | x^3 y^-2, [y,z]>", &[]);
        assert_eq!(n.handle_counts(), [1, 3, 2, 0, 0]);
        assert_eq!(euler_characteristic(&n), 0);
        assert!(n.is_well_formed());

        let (_, n) = n_for("<x,y | >", &[]);
        assert_eq!(n.handle_counts(), [1, 2, 0, 0, 0]);
        assert_eq!(euler_characteristic(&n), -1);

        let (_, n) = n_for("<x | x^4>", &[3]);
        assert_eq!(n.handle_counts(), [1, 1, 1, 0, 0]);
        assert_eq!(euler_characteristic(&n), 1);
        assert_eq!(n.two_handles[0].framing, 3);
    }

    #[test]
    fn build_n_rejects_bad_framings() {
        let p = parse_presentation("<x | x^4, x>").unwrap();
        let (link, _) = extract_link(&slide_all(&p));
        assert_eq!(
            build_n(&p, &link, &[1]),
            Err(KirbyError::FramingLength { expected: 2, got: 1 })
        );
    }

    #[test]
    fn double_examples() {
        let (_, n) = n_for("<x,y,z | x^3 y^-2, [y,z]>", &[]);
        let m = double(&n).unwrap();
        assert_eq!(m.handle_counts(), [1, 3, 4, 3, 1]);
        assert_eq!(euler_characteristic(&m), 0);
        assert!(m.is_well_formed());
        let meridians: Vec<usize> = m.two_handles.iter().filter_map(TwoHandle::meridian_of).collect();
        assert_eq!(meridians, vec![0, 1]);

        let (_, n) = n_for("<x | x^3>", &[]);
        let m = double(&n).unwrap();
        assert_eq!(m.handle_counts(), [1, 1, 2, 1, 1]);
        assert_eq!(euler_characteristic(&m), 2);

        let (_, n) = n_for("<x,y | >", &[]);
        let m = double(&n).unwrap();
        assert_eq!(m.handle_counts(), [1, 2, 0, 2, 1]);
        assert_eq!(euler_characteristic(&m), -2);

        assert_eq!(double(&m), Err(KirbyError::AlreadyClosed));
    }

    #[test]
    fn euler_examples() {
        let s4 = KirbyDiagram {
            h0: 1,
            one_handles: 0,
            two_handles: vec![],
            h3: 0,
            h4: 1,
            closed: true,
            stabilization: Stabilization::default(),
        };
        assert_eq!(euler_characteristic(&s4), 2);
        assert!(s4.is_well_formed());
    }

    #[test]
    fn stabilize_examples() {
        let (_, n) = n_for("<x,y,z | x^3 y^-2, [y,z]>", &[]);
        let m = double(&n).unwrap();
        assert_eq!(euler_characteristic(&stabilize(&m, 1, 0, 0).unwrap()), 2);
        assert_eq!(euler_characteristic(&stabilize(&m, 1, 1, 0).unwrap()), 3);

        let (_, n) = n_for("<x | x^2>", &[]);
        let m = double(&n).unwrap();
        let s = stabilize(&m, 0, 1, 0).unwrap();
        assert_eq!(euler_characteristic(&s), 3);
        assert!(s.is_well_formed());

        let s = stabilize(&m, 2, 0, 1).unwrap();
        assert!(s.is_well_formed());
        let hopf: Vec<(usize, usize)> = s
            .two_handles
            .iter()
            .enumerate()
            .filter_map(|(i, h)| match h.role {
                HandleRole::Hopf { partner } => Some((i, partner)),
                _ => None,
            })
            .collect();
        for &(i, p) in &hopf {
            assert!(hopf.contains(&(p, i)), "hopf pairing must be symmetric");
        }
        assert_eq!(stabilize(&n, 1, 0, 0), Err(KirbyError::NotClosed));
    }

    #[test]
    fn parity_examples() {
        let (_, n) = n_for("<x | x^2, x^3>", &[0, 3]);
        assert_eq!(framings_mod2(&n), vec![0, 1]);
        let (_, n) = n_for("<x | x^2, x^3>", &[2, -4]);
        assert_eq!(framings_mod2(&double(&n).unwrap()), vec![0, 0]);
        let (_, n) = n_for("<x | x^2>", &[-1]);
        assert_eq!(framings_mod2(&n), vec![1]);
    }
}
