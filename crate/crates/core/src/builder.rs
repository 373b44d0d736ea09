//! Combinatorial construction of a link in `#_n S^1 x S^2` whose components
//! read the relators, together with a tunnel system of `n + |R| - 1` arcs.
//!
//! The graph is recorded by the 1-handle passages of its edges rather than by
//! geometry. Vertex 0 is the basepoint. Each generator contributes a loop at
//! the basepoint that runs once over its 1-handle. Each relator contributes a
//! circle hanging off its own attachment vertex, joined to the basepoint by a
//! connector arc with trivial label.

use thiserror::Error;

use crate::presentation::{Presentation, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    /// Loop of the unknotted graph over 1-handle `generator`.
    Loop { generator: usize },
    /// The circle `c_i`.
    Circle { index: usize },
    /// Trivially-labelled arc from the basepoint to circle `circle`.
    Connector { circle: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub kind: EdgeKind,
    pub label: Word,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpatialGraph {
    generators: usize,
    vertices: usize,
    edges: Vec<Edge>,
    /// Set once a slide has been applied to the circle, even a trivial one.
    slid: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("circle index {index} out of range ({count} circles)")]
    CircleIndex { index: usize, count: usize },
    #[error("word uses generator {generator} but the graph has {count} loops")]
    GeneratorOutOfRange { generator: usize, count: usize },
    #[error("the empty link has no tunnel number")]
    EmptyLink,
}

pub const BASEPOINT: usize = 0;

/// The unknotted graph with `n` loops and `r` unslid circles.
pub fn build_gamma0(n: usize, r: usize) -> SpatialGraph {
    let mut edges = Vec::with_capacity(n + 2 * r);
    for g in 0..n {
        edges.push(Edge {
            from: BASEPOINT,
            to: BASEPOINT,
            kind: EdgeKind::Loop { generator: g },
            label: Word::generator(g),
        });
    }
    for i in 0..r {
        let v = 1 + i;
        edges.push(Edge {
            from: BASEPOINT,
            to: v,
            kind: EdgeKind::Connector { circle: i },
            label: Word::identity(),
        });
        edges.push(Edge {
            from: v,
            to: v,
            kind: EdgeKind::Circle { index: i },
            label: Word::identity(),
        });
    }
    SpatialGraph {
        generators: n,
        vertices: 1 + r,
        edges,
        slid: vec![false; r],
    }
}

impl SpatialGraph {
    pub fn num_generators(&self) -> usize {
        self.generators
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_circles(&self) -> usize {
        self.slid.len()
    }

    pub fn is_slid(&self, i: usize) -> bool {
        self.slid[i]
    }

    pub fn all_slid(&self) -> bool {
        self.slid.iter().all(|&s| s)
    }

    fn circle_edge(&self, i: usize) -> Option<usize> {
        self.edges.iter().position(|e| e.kind == EdgeKind::Circle { index: i })
    }

    pub fn circle_label(&self, i: usize) -> Option<&Word> {
        self.circle_edge(i).map(|e| &self.edges[e].label)
    }

    pub fn circle_labels(&self) -> Vec<&Word> {
        (0..self.num_circles())
            .map(|i| self.circle_label(i).expect("every circle has an edge"))
            .collect()
    }

    fn components(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.vertices).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut count = self.vertices;
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.from), find(&mut parent, e.to));
            if a != b {
                parent[a] = b;
                count -= 1;
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.components() == 1
    }

    /// First Betti number `E - V + components`.
    pub fn betti_1(&self) -> usize {
        self.edges.len() + self.components() - self.vertices
    }

    /// Slides the free end of circle `i` along the loops so it reads `word`.
    pub fn slide_circle(&self, i: usize, word: &Word) -> Result<SpatialGraph, BuildError> {
        let count = self.num_circles();
        let idx = self.circle_edge(i).ok_or(BuildError::CircleIndex { index: i, count })?;
        if let Some(g) = word.max_generator() {
            if g >= self.generators {
                return Err(BuildError::GeneratorOutOfRange {
                    generator: g,
                    count: self.generators,
                });
            }
        }
        let mut next = self.clone();
        // The end travels left to right through the word, so the label is the
        // word itself rather than its inverse.
        next.edges[idx].label = word.clone();
        next.slid[i] = true;
        Ok(next)
    }
}

/// Slides every circle to its relator.
pub fn slide_all(p: &Presentation) -> SpatialGraph {
    let mut g = build_gamma0(p.num_generators(), p.num_relators());
    for (i, r) in p.relators().iter().enumerate() {
        g = g
            .slide_circle(i, r)
            .expect("presentation letters are in range and circle exists");
    }
    g
}

/// One component of a framed link in `#_n S^1 x S^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinkComponent {
    pub word: Word,
    pub framing: i64,
    /// Set when this component is a 0-framed meridian of another component.
    pub meridian_of: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Link {
    pub components: Vec<LinkComponent>,
}

impl Link {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn words(&self) -> Vec<&Word> {
        self.components.iter().map(|c| &c.word).collect()
    }

    pub fn with_framings(&self, framings: &[i64]) -> Link {
        let mut out = self.clone();
        for (c, &f) in out.components.iter_mut().zip(framings) {
            c.framing = f;
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TunnelArc {
    /// The graph loop over 1-handle `generator`, cut open into an arc.
    Loop { generator: usize },
    /// Arc joining consecutive link components.
    Connector { from: usize, to: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TunnelSystem {
    pub arcs: Vec<TunnelArc>,
    /// Number of tunnels; for the empty link this is `max(n - 1, 0)`.
    pub count: usize,
    pub empty_link: bool,
}

impl TunnelSystem {
    /// Genus of a regular neighbourhood of the link together with the arcs.
    pub fn neighbourhood_genus(&self) -> usize {
        self.count + 1
    }
}

/// Reads off the link (circles) and the tunnels (everything else).
pub fn extract_link(g: &SpatialGraph) -> (Link, TunnelSystem) {
    let components: Vec<LinkComponent> = g
        .circle_labels()
        .into_iter()
        .map(|w| LinkComponent {
            word: w.clone(),
            framing: 0,
            meridian_of: None,
        })
        .collect();
    let r = components.len();
    let n = g.num_generators();
    if r == 0 {
        let tunnels = TunnelSystem {
            arcs: (0..n).map(|generator| TunnelArc::Loop { generator }).collect(),
            count: n.saturating_sub(1),
            empty_link: true,
        };
        return (Link { components }, tunnels);
    }
    let mut arcs: Vec<TunnelArc> = (0..n).map(|generator| TunnelArc::Loop { generator }).collect();
    arcs.extend((1..r).map(|i| TunnelArc::Connector { from: i - 1, to: i }));
    let count = arcs.len();
    debug_assert_eq!(count + 1, g.betti_1());
    (
        Link { components },
        TunnelSystem {
            arcs,
            count,
            empty_link: false,
        },
    )
}

/// `n + |L| - 1`.
pub fn tunnel_upper_bound(n: usize, num_components: usize) -> Result<usize, BuildError> {
    if num_components == 0 {
        return Err(BuildError::EmptyLink);
    }
    Ok(n + num_components - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{parse_presentation, Letter};

    fn oracle_betti(g: &SpatialGraph) -> usize {
        // the graph is connected by construction, so b1 = E - V + 1
        g.edges().len() + 1 - g.num_vertices()
    }

    #[test]
    fn gamma0_examples() {
        let g = build_gamma0(3, 2);
        assert_eq!(g.betti_1(), 5);
        assert!(g.is_connected());
        assert_eq!(
            g.edges()
                .iter()
                .filter(|e| matches!(e.kind, EdgeKind::Loop { .. }))
                .count(),
            3
        );
        assert_eq!(g.num_circles(), 2);
        assert!(g.circle_labels().iter().all(|w| w.is_empty()));

        let g = build_gamma0(0, 0);
        assert_eq!(g.betti_1(), 0);
        assert_eq!(g.num_vertices(), 1);

        let g = build_gamma0(2, 1);
        assert_eq!(g.betti_1(), 3);
        assert_eq!(oracle_betti(&g), 3);
    }

    #[test]
    fn slide_examples() {
        let p = parse_presentation("<x,y,z | x^3 y^-2, [y,z]>").unwrap();
        let g = build_gamma0(3, 2).slide_circle(0, &p.relators()[0]).unwrap();
        assert_eq!(g.circle_label(0).unwrap(), &p.relators()[0]);
        assert!(g.circle_label(1).unwrap().is_empty());
        assert_eq!(g.betti_1(), 5);

        let g0 = build_gamma0(2, 2);
        let g1 = g0.slide_circle(1, &Word::identity()).unwrap();
        assert_eq!(g0.edges(), g1.edges());
        assert!(g1.is_slid(1) && !g1.is_slid(0));

        let w = Word::from_letters([Letter::pos(0), Letter::neg(1)]);
        let g = build_gamma0(2, 1).slide_circle(0, &w).unwrap();
        assert_eq!(g.circle_label(0).unwrap(), &w);
        assert_eq!(g.betti_1(), 3);
        assert_eq!(oracle_betti(&g), 3);
    }

    #[test]
    fn slide_errors() {
        let g = build_gamma0(1, 1);
        assert_eq!(
            g.slide_circle(1, &Word::identity()),
            Err(BuildError::CircleIndex { index: 1, count: 1 })
        );
        assert_eq!(
            g.slide_circle(0, &Word::generator(1)),
            Err(BuildError::GeneratorOutOfRange { generator: 1, count: 1 })
        );
    }

    #[test]
    fn extract_examples() {
        let p = parse_presentation("<x,y,z | x^3 y^-2, [y,z]>").unwrap();
        let (link, tunnels) = extract_link(&slide_all(&p));
        assert_eq!(link.len(), 2);
        assert_eq!(p.spell(&link.components[0].word), "x x x y^-1 y^-1");
        assert_eq!(p.spell(&link.components[1].word), "y z y^-1 z^-1");
        assert_eq!(tunnels.count, 4);
        assert_eq!(tunnels.neighbourhood_genus(), 5);
        assert!(link
            .components
            .iter()
            .all(|c| c.framing == 0 && c.meridian_of.is_none()));

        let p = parse_presentation("<x | x^5>").unwrap();
        let (link, tunnels) = extract_link(&slide_all(&p));
        assert_eq!(link.len(), 1);
        assert_eq!(tunnels.count, 1);
        assert_eq!(tunnels.arcs, vec![TunnelArc::Loop { generator: 0 }]);

        let (link, tunnels) = extract_link(&build_gamma0(3, 0));
        assert!(link.is_empty());
        assert!(tunnels.empty_link);
        assert_eq!(tunnels.count, 2);
        let (_, tunnels) = extract_link(&build_gamma0(0, 0));
        assert_eq!(tunnels.count, 0);
    }

    #[test]
    fn tunnel_bound_examples() {
        assert_eq!(tunnel_upper_bound(3, 2), Ok(4));
        assert_eq!(tunnel_upper_bound(1, 1), Ok(1));
        assert_eq!(tunnel_upper_bound(2, 3), Ok(4));
        assert_eq!(tunnel_upper_bound(2, 0), Err(BuildError::EmptyLink));
    }
}
