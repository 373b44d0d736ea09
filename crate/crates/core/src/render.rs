//! Deterministic SVG drawings of the construction stages and the Kirby
//! diagram.
//!
//! Layout: the 1-handles are dotted ellipses in a row along the top. Link
//! component `i` lives in horizontal lane `i` below them; each letter of its
//! word becomes a vertical passage through the matching ellipse, with an
//! arrowhead pointing up for `x` and down for `x^-1`. No crossing information
//! is drawn. All coordinates are integers, so output bytes depend only on
//! the input.

use std::fmt::Write as _;

use thiserror::Error;

use crate::builder::{EdgeKind, Link, SpatialGraph, TunnelArc, TunnelSystem};
use crate::kirby::{euler_characteristic, HandleRole, KirbyDiagram};
use crate::presentation::Word;

const MARGIN: i64 = 40;
const SLOT: i64 = 24;
const PAD: i64 = 8;
const RY: i64 = 14;
const LANE_GAP: i64 = 44;
const SIDE_PANEL: i64 = 180;

pub const PALETTE: [(&str, &str); 8] = [
    ("red", "#d62728"),
    ("blue", "#1f77b4"),
    ("green", "#2ca02c"),
    ("orange", "#ff7f0e"),
    ("purple", "#9467bd"),
    ("brown", "#8c564b"),
    ("pink", "#e377c2"),
    ("cyan", "#17becf"),
];

pub fn color_name(i: usize) -> &'static str {
    PALETTE[i % PALETTE.len()].0
}

fn color_hex(i: usize) -> &'static str {
    PALETTE[i % PALETTE.len()].1
}

/// A dotted circle and its horizontal extent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Anchor {
    pub left: i64,
    pub width: i64,
    /// Number of passage slots, including slot 0 for the graph loop.
    pub slots: i64,
}

impl Anchor {
    pub fn cx(&self) -> i64 {
        self.left + self.width / 2
    }

    pub fn rx(&self) -> i64 {
        self.width / 2
    }

    fn slot_x(&self, s: i64) -> i64 {
        self.left + PAD + SLOT * s + SLOT / 2
    }

    fn return_x(&self, s: i64) -> i64 {
        self.left + self.width + 4 + 4 * s
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Passage {
    pub component: usize,
    pub generator: usize,
    pub inverse: bool,
    pub x: i64,
    pub return_x: i64,
    pub hop_y: i64,
}

/// Geometry shared by all drawings of one link.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scene {
    pub width: i64,
    pub height: i64,
    pub circle_y: i64,
    pub anchors: Vec<Anchor>,
    pub lanes: Vec<i64>,
    /// Passages grouped by component, in word order.
    pub passages: Vec<Vec<Passage>>,
    pub basepoint: (i64, i64),
    pub strand_start: i64,
    loop_hop: Vec<i64>,
}

impl Scene {
    pub fn layout(n: usize, words: &[&Word], side_panel: bool) -> Scene {
        let mut slots = vec![1i64; n];
        for w in words {
            for l in w.letters() {
                slots[l.generator] += 1;
            }
        }
        let max_slots = slots.iter().copied().max().unwrap_or(1);
        let circle_y = MARGIN + 16 + 4 * max_slots + RY;
        let basepoint = (MARGIN, circle_y + RY + 30);
        let strand_start = MARGIN + 40;

        let mut anchors = Vec::with_capacity(n);
        let mut left = strand_start + 40;
        for &s in &slots {
            let width = s * SLOT + 2 * PAD;
            anchors.push(Anchor { left, width, slots: s });
            left += width + 24 + 4 * s;
        }
        let loop_hop = anchors.iter().map(|_| hop_y(circle_y, 0)).collect();

        let lanes: Vec<i64> = (0..words.len())
            .map(|i| basepoint.1 + 40 + LANE_GAP * i as i64)
            .collect();

        let mut next_slot = vec![1i64; n];
        let passages = words
            .iter()
            .enumerate()
            .map(|(c, w)| {
                w.letters()
                    .iter()
                    .map(|l| {
                        let a = &anchors[l.generator];
                        let s = next_slot[l.generator];
                        next_slot[l.generator] += 1;
                        Passage {
                            component: c,
                            generator: l.generator,
                            inverse: l.inverse,
                            x: a.slot_x(s),
                            return_x: a.return_x(s),
                            hop_y: hop_y(circle_y, s),
                        }
                    })
                    .collect()
            })
            .collect();

        let content_right = left.max(strand_start + 80);
        let width = content_right + MARGIN + if side_panel { SIDE_PANEL } else { 0 };
        let bottom = lanes.last().copied().unwrap_or(basepoint.1) + 40;
        Scene {
            width,
            height: bottom + 50,
            circle_y,
            anchors,
            lanes,
            passages,
            basepoint,
            strand_start,
            loop_hop,
        }
    }

    /// Widens the canvas so a caption of this length fits.
    pub fn fit_caption(&mut self, caption: &str) {
        self.width = self.width.max(2 * MARGIN + 7 * caption.chars().count() as i64);
    }

    fn content_right(&self) -> i64 {
        self.anchors
            .last()
            .map_or(self.strand_start + 80, |a| a.return_x(a.slots) + 20)
    }
}

fn hop_y(circle_y: i64, slot: i64) -> i64 {
    circle_y - RY - 10 - 4 * slot
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '&' => out.push_str("&amp;"),
            '"' => out.push_str("&quot;"),
            c => out.push(c),
        }
    }
    out
}

struct Svg {
    buf: String,
}

impl Svg {
    fn new(scene: &Scene, title: &str) -> Svg {
        let mut buf = String::new();
        let _ = writeln!(buf, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            buf,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
            w = scene.width,
            h = scene.height
        );
        let _ = writeln!(buf, "<title>{}</title>", escape(title));
        let _ = writeln!(
            buf,
            r#"<rect x="0" y="0" width="{}" height="{}" fill="white"/>"#,
            scene.width, scene.height
        );
        Svg { buf }
    }

    fn line(&mut self, s: std::fmt::Arguments<'_>) {
        let _ = self.buf.write_fmt(s);
        self.buf.push('\n');
    }

    fn finish(mut self, scene: &Scene, caption: &str) -> String {
        self.line(format_args!(
            r#"<text class="caption" x="{}" y="{}" font-family="sans-serif" font-size="13">{}</text>"#,
            MARGIN,
            scene.height - 20,
            escape(caption)
        ));
        self.buf.push_str("</svg>\n");
        self.buf
    }
}

fn draw_anchors<S: AsRef<str>>(svg: &mut Svg, scene: &Scene, names: &[S]) {
    for (j, a) in scene.anchors.iter().enumerate() {
        svg.line(format_args!(
            r#"<ellipse class="dotted" cx="{}" cy="{}" rx="{}" ry="{}" fill="none" stroke="black" stroke-dasharray="2,3"/>"#,
            a.cx(),
            scene.circle_y,
            a.rx(),
            RY
        ));
        svg.line(format_args!(
            r#"<text class="handle-label" x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"#,
            a.cx(),
            scene.circle_y + RY + 16,
            escape(names[j].as_ref())
        ));
    }
}

fn draw_basepoint(svg: &mut Svg, scene: &Scene) {
    let (x, y) = scene.basepoint;
    svg.line(format_args!(
        r#"<circle class="basepoint" cx="{x}" cy="{y}" r="4" fill="black"/>"#
    ));
    svg.line(format_args!(
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="14">*</text>"#,
        x - 4,
        y - 8
    ));
}

/// Graph loop over 1-handle `j`, drawn through slot 0.
fn draw_loop(svg: &mut Svg, scene: &Scene, j: usize, class: &str, dashed: bool) {
    let a = &scene.anchors[j];
    let (bx, by) = scene.basepoint;
    let (x, rx, hop) = (a.slot_x(0), a.return_x(0), scene.loop_hop[j]);
    let dash = if dashed { r#" stroke-dasharray="6,4""# } else { "" };
    svg.line(format_args!(
        r#"<path class="{class}" d="M {bx} {by} L {x} {by} L {x} {hop} L {rx} {hop} L {rx} {y2} L {bx} {y2}" fill="none" stroke="gray" stroke-width="1.5"{dash}/>"#,
        y2 = by + 6 + 2 * j as i64,
    ));
}

fn draw_strand(svg: &mut Svg, scene: &Scene, c: usize) {
    let y = scene.lanes[c];
    let x0 = scene.strand_start;
    let color = color_hex(c);
    let ps = &scene.passages[c];
    svg.line(format_args!(
        r#"<line class="lane" x1="{x0}" y1="{y}" x2="{}" y2="{y}" stroke="none"/>"#,
        scene.content_right()
    ));
    if ps.is_empty() {
        svg.line(format_args!(
            r#"<circle class="strand" cx="{}" cy="{y}" r="10" fill="none" stroke="{color}" stroke-width="2"/>"#,
            x0 + 10
        ));
        return;
    }
    let mut d = format!("M {x0} {y}");
    for p in ps {
        let _ = write!(
            d,
            " L {x} {y} L {x} {h} L {r} {h} L {r} {y}",
            x = p.x,
            h = p.hop_y,
            r = p.return_x
        );
    }
    let last = ps.last().expect("nonempty").return_x;
    let _ = write!(d, " L {last} {} L {x0} {} Z", y + 12, y + 12);
    svg.line(format_args!(
        r#"<path class="strand" d="{d}" fill="none" stroke="{color}" stroke-width="2"/>"#
    ));
    for p in ps {
        let (from, to) = if p.inverse { (p.hop_y, y) } else { (y, p.hop_y) };
        svg.line(format_args!(
            r#"<polyline class="passage" points="{x},{from} {x},{to}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            x = p.x
        ));
        let cy = scene.circle_y;
        let tip = if p.inverse { cy + 5 } else { cy - 5 };
        let base = if p.inverse { cy - 3 } else { cy + 3 };
        svg.line(format_args!(
            r#"<polygon class="arrow" points="{},{base} {},{tip} {},{base}" fill="{color}"/>"#,
            p.x - 4,
            p.x,
            p.x + 4
        ));
    }
}

fn draw_connector(svg: &mut Svg, scene: &Scene, c: usize) {
    let (bx, by) = scene.basepoint;
    svg.line(format_args!(
        r#"<path class="connector" d="M {bx} {by} L {bx} {y} L {x} {y}" fill="none" stroke="gray" stroke-width="1"/>"#,
        y = scene.lanes[c],
        x = scene.strand_start
    ));
}

/// Stage drawing of the spatial graph: loops, connectors and circles.
pub fn render_graph_stage<S: AsRef<str>>(g: &SpatialGraph, names: &[S], caption: &str) -> String {
    let words = g.circle_labels();
    let mut scene = Scene::layout(g.num_generators(), &words, false);
    scene.fit_caption(caption);
    let mut svg = Svg::new(&scene, caption);
    draw_anchors(&mut svg, &scene, names);
    draw_basepoint(&mut svg, &scene);
    for e in g.edges() {
        match e.kind {
            EdgeKind::Loop { generator } => draw_loop(&mut svg, &scene, generator, "graph-loop", false),
            EdgeKind::Connector { circle } => draw_connector(&mut svg, &scene, circle),
            EdgeKind::Circle { .. } => {}
        }
    }
    for c in 0..words.len() {
        draw_strand(&mut svg, &scene, c);
    }
    svg.finish(&scene, caption)
}

/// The link together with its tunnel arcs, drawn dashed.
pub fn render_link_stage<S: AsRef<str>>(link: &Link, tunnels: &TunnelSystem, names: &[S], caption: &str) -> String {
    let words = link.words();
    let mut scene = Scene::layout(names.len(), &words, false);
    scene.fit_caption(caption);
    let mut svg = Svg::new(&scene, caption);
    draw_anchors(&mut svg, &scene, names);
    draw_basepoint(&mut svg, &scene);
    for arc in &tunnels.arcs {
        match *arc {
            TunnelArc::Loop { generator } => draw_loop(&mut svg, &scene, generator, "tunnel", true),
            TunnelArc::Connector { from, to } => {
                let x = scene.strand_start - 12;
                svg.line(format_args!(
                    r#"<line class="tunnel" x1="{x}" y1="{}" x2="{x}" y2="{}" stroke="gray" stroke-width="1.5" stroke-dasharray="6,4"/>"#,
                    scene.lanes[from],
                    scene.lanes[to]
                ));
            }
        }
    }
    for c in 0..words.len() {
        draw_strand(&mut svg, &scene, c);
    }
    svg.finish(&scene, caption)
}

/// Kirby diagram: dotted circles, framed strands, meridians and a side panel
/// for connected-sum summands.
pub fn render_kirby<S: AsRef<str>>(k: &KirbyDiagram, names: &[S]) -> String {
    let attaching: Vec<(usize, &Word, i64)> = k
        .two_handles
        .iter()
        .enumerate()
        .filter(|(_, h)| h.role == HandleRole::Attaching)
        .map(|(i, h)| (i, &h.word, h.framing))
        .collect();
    let words: Vec<&Word> = attaching.iter().map(|&(_, w, _)| w).collect();
    let mut scene = Scene::layout(k.one_handles, &words, true);
    let [h0, h1, h2, h3, h4] = k.handle_counts();
    let caption = format!(
        "handles ({h0}, {h1}, {h2}, {h3}, {h4}), chi = {}{}",
        euler_characteristic(k),
        if k.closed { "" } else { ", open" }
    );
    scene.fit_caption(&caption);
    let mut svg = Svg::new(&scene, &caption);
    draw_anchors(&mut svg, &scene, names);
    for (c, &(_, _, framing)) in attaching.iter().enumerate() {
        draw_strand(&mut svg, &scene, c);
        svg.line(format_args!(
            r#"<text class="framing" x="{}" y="{}" font-family="sans-serif" font-size="12" fill="{}">{framing}</text>"#,
            scene.content_right() + 4,
            scene.lanes[c] + 4,
            color_hex(c)
        ));
    }
    // handle index -> lane
    let lane_of = |idx: usize| attaching.iter().position(|&(i, _, _)| i == idx);
    for h in &k.two_handles {
        if let HandleRole::Meridian { of } = h.role {
            if let Some(c) = lane_of(of) {
                svg.line(format_args!(
                    r#"<circle class="meridian" cx="{}" cy="{}" r="9" fill="none" stroke="black" stroke-width="1.5"/>"#,
                    scene.strand_start + 26,
                    scene.lanes[c]
                ));
                svg.line(format_args!(
                    r#"<text class="framing" x="{}" y="{}" font-family="sans-serif" font-size="11">0</text>"#,
                    scene.strand_start + 22,
                    scene.lanes[c] - 12
                ));
            }
        }
    }

    let panel_x = scene.width - SIDE_PANEL + 10;
    let mut y = MARGIN;
    let mut seen_hopf = Vec::new();
    for (i, h) in k.two_handles.iter().enumerate() {
        match h.role {
            HandleRole::Hopf { partner } if !seen_hopf.contains(&i) => {
                seen_hopf.push(partner);
                svg.line(format_args!(
                    r#"<g class="stabilizer" data-kind="s2xs2"><circle cx="{}" cy="{y}" r="12" fill="none" stroke="black"/><circle cx="{}" cy="{y}" r="12" fill="none" stroke="black"/><text x="{}" y="{}" font-family="sans-serif" font-size="11">0</text><text x="{}" y="{}" font-family="sans-serif" font-size="11">0</text></g>"#,
                    panel_x + 20,
                    panel_x + 36,
                    panel_x + 2,
                    y - 12,
                    panel_x + 50,
                    y - 12
                ));
                y += 40;
            }
            HandleRole::Projective => {
                let kind = if h.framing > 0 { "cp2" } else { "cp2bar" };
                svg.line(format_args!(
                    r#"<g class="stabilizer" data-kind="{kind}"><circle cx="{}" cy="{y}" r="12" fill="none" stroke="black"/><text x="{}" y="{}" font-family="sans-serif" font-size="11">{:+}</text></g>"#,
                    panel_x + 20,
                    panel_x + 36,
                    y - 8,
                    h.framing
                ));
                y += 40;
            }
            _ => {}
        }
    }
    if k.closed {
        svg.line(format_args!(
            r#"<text class="cap" x="{panel_x}" y="{}" font-family="sans-serif" font-size="12">+ {h3} 3-handles, {h4} 4-handle</text>"#,
            scene.height - 40
        ));
    }
    svg.finish(&scene, &caption)
}

/// Per-component, per-generator passage counts recovered from an SVG.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PassageTable {
    /// `counts[component][generator] = (positive, negative)`.
    pub counts: Vec<Vec<(usize, usize)>>,
}

impl PassageTable {
    pub fn total(&self, component: usize, generator: usize) -> usize {
        let (p, n) = self.counts[component][generator];
        p + n
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SvgReadError {
    #[error("unterminated tag at byte {0}")]
    Unterminated(usize),
    #[error("<{tag}> at byte {at} is missing attribute `{attr}`")]
    MissingAttribute { tag: String, attr: &'static str, at: usize },
    #[error("bad number `{value}` at byte {at}")]
    BadNumber { value: String, at: usize },
    #[error("passage at byte {0} does not cross exactly one dotted circle")]
    UnmatchedCircle(usize),
    #[error("passage at byte {0} does not start or end on a lane")]
    UnmatchedLane(usize),
}

struct Tag<'a> {
    name: &'a str,
    attrs: Vec<(&'a str, &'a str)>,
    at: usize,
}

impl<'a> Tag<'a> {
    fn attr(&self, key: &'static str) -> Result<&'a str, SvgReadError> {
        self.attrs
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| *v)
            .ok_or_else(|| SvgReadError::MissingAttribute {
                tag: self.name.to_string(),
                attr: key,
                at: self.at,
            })
    }

    fn num(&self, key: &'static str) -> Result<i64, SvgReadError> {
        let v = self.attr(key)?;
        v.trim().parse().map_err(|_| SvgReadError::BadNumber {
            value: v.to_string(),
            at: self.at,
        })
    }

    fn has_class(&self, class: &str) -> bool {
        self.attrs
            .iter()
            .any(|(k, v)| *k == "class" && v.split_whitespace().any(|c| c == class))
    }
}

fn tags(svg: &str) -> Result<Vec<Tag<'_>>, SvgReadError> {
    let mut out = Vec::new();
    let mut rest = svg;
    let mut offset = 0;
    while let Some(open) = rest.find('<') {
        let at = offset + open;
        let body_start = open + 1;
        let close = rest[body_start..].find('>').ok_or(SvgReadError::Unterminated(at))?;
        let body = &rest[body_start..body_start + close];
        offset += body_start + close + 1;
        rest = &rest[body_start + close + 1..];
        if body.starts_with('/') || body.starts_with('?') || body.starts_with('!') {
            continue;
        }
        let body = body.trim_end_matches('/');
        let name_end = body.find(|c: char| c.is_ascii_whitespace()).unwrap_or(body.len());
        let name = &body[..name_end];
        let mut attrs = Vec::new();
        let mut s = &body[name_end..];
        loop {
            s = s.trim_start();
            let Some(eq) = s.find("=\"") else { break };
            let key = s[..eq].trim();
            let after = &s[eq + 2..];
            let Some(end) = after.find('"') else {
                return Err(SvgReadError::Unterminated(at));
            };
            attrs.push((key, &after[..end]));
            s = &after[end + 1..];
        }
        out.push(Tag { name, attrs, at });
    }
    Ok(out)
}

fn parse_point(p: &str, at: usize) -> Result<(i64, i64), SvgReadError> {
    let bad = || SvgReadError::BadNumber {
        value: p.to_string(),
        at,
    };
    let (x, y) = p.split_once(',').ok_or_else(bad)?;
    Ok((x.parse().map_err(|_| bad())?, y.parse().map_err(|_| bad())?))
}

/// Recovers passage counts from geometry alone: a passage belongs to the
/// dotted ellipse it crosses and to the lane it starts or ends on, and its
/// sign is its direction of travel.
pub fn read_passages(svg: &str) -> Result<PassageTable, SvgReadError> {
    let tags = tags(svg)?;
    let mut circles = Vec::new();
    let mut lanes = Vec::new();
    for t in &tags {
        if t.name == "ellipse" && t.has_class("dotted") {
            circles.push((t.num("cx")?, t.num("cy")?, t.num("rx")?, t.num("ry")?));
        } else if t.name == "line" && t.has_class("lane") {
            lanes.push(t.num("y1")?);
        }
    }
    let mut table = PassageTable {
        counts: vec![vec![(0, 0); circles.len()]; lanes.len()],
    };
    for t in tags.iter().filter(|t| t.name == "polyline" && t.has_class("passage")) {
        let pts: Vec<(i64, i64)> = t
            .attr("points")?
            .split_whitespace()
            .map(|p| parse_point(p, t.at))
            .collect::<Result<_, _>>()?;
        let (Some(&first), Some(&last)) = (pts.first(), pts.last()) else {
            return Err(SvgReadError::UnmatchedCircle(t.at));
        };
        let (lo, hi) = (first.1.min(last.1), first.1.max(last.1));
        let hits: Vec<usize> = circles
            .iter()
            .enumerate()
            .filter(|(_, &(cx, cy, rx, _))| (first.0 - cx).abs() < rx && lo < cy && cy < hi)
            .map(|(j, _)| j)
            .collect();
        let [j] = hits[..] else {
            return Err(SvgReadError::UnmatchedCircle(t.at));
        };
        let c = lanes
            .iter()
            .position(|&y| y == hi)
            .ok_or(SvgReadError::UnmatchedLane(t.at))?;
        // SVG y grows downward, so travelling up means a decreasing y.
        let entry = &mut table.counts[c][j];
        if last.1 < first.1 {
            entry.0 += 1;
        } else {
            entry.1 += 1;
        }
    }
    Ok(table)
}
