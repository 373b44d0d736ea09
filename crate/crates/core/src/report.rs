//! Flat `key: value` report of a pipeline run.
//!
//! Lines are `key: value`, section headers are `[name]`, and lines starting
//! with `#` are comments. Keys and their order are fixed; see `REPORT.md` at
//! the repository root for the full list. Every key is unique once qualified
//! by its section (`certificate.status` vs `rank.status`).

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use thiserror::Error;

use crate::abelian::{RankReport, Status};
use crate::builder::{Link, LinkComponent, TunnelArc, TunnelSystem};
use crate::kirby::{HandleRole, KirbyDiagram, Stabilization, TwoHandle};
use crate::pipeline::Construction;
use crate::presentation::{parse_presentation, Presentation};
use crate::trisect::{Certificate, Note, TrisectionParams};

pub const FORMAT_VERSION: u32 = 1;

const SECTIONS: [&str; 6] = ["presentation", "link", "tunnels", "kirby", "rank", "certificate"];

/// Everything a report records.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub presentation: Presentation,
    pub link: Link,
    pub tunnels: TunnelSystem,
    pub diagram: KirbyDiagram,
    pub certificate: Certificate,
}

impl From<&Construction> for Report {
    fn from(c: &Construction) -> Self {
        Report {
            presentation: c.presentation.clone(),
            link: c.link.clone(),
            tunnels: c.tunnels.clone(),
            diagram: c.closed.clone(),
            certificate: c.certificate.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReportError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing field `{0}`")]
    Missing(String),
    #[error("line {line}: unexpected field `{key}`")]
    Unexpected { key: String, line: usize },
    #[error("line {line}: field `{field}`: {message}")]
    Invalid {
        field: String,
        line: usize,
        message: String,
    },
    #[error("field `{field}`: {message}")]
    Validation { field: String, message: String },
}

impl ReportError {
    /// The offending field, when there is one.
    pub fn field(&self) -> Option<&str> {
        match self {
            ReportError::Syntax { .. } => None,
            ReportError::Missing(f) => Some(f),
            ReportError::Unexpected { key, .. } => Some(key),
            ReportError::Invalid { field, .. } | ReportError::Validation { field, .. } => Some(field),
        }
    }
}

fn join<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn opt(v: Option<usize>) -> String {
    v.map_or_else(|| "none".to_string(), |x| x.to_string())
}

fn role_str(r: HandleRole) -> String {
    match r {
        HandleRole::Attaching => "attaching".to_string(),
        HandleRole::Meridian { of } => format!("meridian {of}"),
        HandleRole::Hopf { partner } => format!("hopf {partner}"),
        HandleRole::Projective => "projective".to_string(),
    }
}

struct Writer(String);

impl Writer {
    fn section(&mut self, name: &str) {
        let _ = writeln!(self.0, "[{name}]");
    }

    fn kv(&mut self, key: &str, value: impl std::fmt::Display) {
        let value = value.to_string();
        if value.is_empty() {
            let _ = writeln!(self.0, "{key}:");
        } else {
            let _ = writeln!(self.0, "{key}: {value}");
        }
    }
}

pub fn serialize_report(r: &Report) -> String {
    let p = &r.presentation;
    let names = p.names();
    let cert = &r.certificate;
    let mut w = Writer(String::new());
    w.0.push_str("# minimal-genus construction report\n");
    w.kv("format", FORMAT_VERSION);

    w.section("presentation");
    w.kv("text", p);
    w.kv("generators", names.join(", "));
    w.kv("relator_count", p.num_relators());
    for (i, rel) in p.relators().iter().enumerate() {
        w.kv(&format!("relator.{i}"), p.spell(rel));
    }

    w.section("link");
    w.kv("component_count", r.link.len());
    for (i, c) in r.link.components.iter().enumerate() {
        w.kv(&format!("component.{i}.word"), p.spell(&c.word));
        w.kv(&format!("component.{i}.framing"), c.framing);
        w.kv(&format!("component.{i}.meridian_of"), opt(c.meridian_of));
    }

    w.section("tunnels");
    w.kv("count", r.tunnels.count);
    w.kv("empty_link", r.tunnels.empty_link);
    w.kv("arc_count", r.tunnels.arcs.len());
    for (i, a) in r.tunnels.arcs.iter().enumerate() {
        let v = match *a {
            TunnelArc::Loop { generator } => format!("loop {}", names[generator]),
            TunnelArc::Connector { from, to } => format!("connector {from} {to}"),
        };
        w.kv(&format!("arc.{i}"), v);
    }

    let k = &r.diagram;
    w.section("kirby");
    w.kv("closed", k.closed);
    let [h0, h1, h2, h3, h4] = k.handle_counts();
    w.kv("h0", h0);
    w.kv("h1", h1);
    w.kv("h2", h2);
    w.kv("h3", h3);
    w.kv("h4", h4);
    for (i, h) in k.two_handles.iter().enumerate() {
        w.kv(&format!("handle.{i}.role"), role_str(h.role));
        w.kv(&format!("handle.{i}.word"), p.spell(&h.word));
        w.kv(&format!("handle.{i}.framing"), h.framing);
    }
    w.kv("framings", join(crate::kirby::attaching_framings(k)));
    w.kv("framing_parities", join(crate::kirby::framings_mod2(k)));
    w.kv("stabilize.s2xs2", k.stabilization.s2xs2);
    w.kv("stabilize.cp2", k.stabilization.cp2);
    w.kv("stabilize.cp2bar", k.stabilization.cp2_bar);

    let rr = &cert.rank_report;
    w.section("rank");
    w.kv("presentation_rank", rr.presentation_rank);
    w.kv("invariant_factors", join(&rr.invariant_factors));
    w.kv("free_rank", rr.free_rank);
    w.kv("abelian_lower_bound", rr.abelian_lower_bound);
    w.kv("status", rr.status);

    w.section("certificate");
    w.kv("n", cert.n);
    w.kv("num_l", cert.num_l);
    w.kv("num_lhat", cert.num_lhat);
    w.kv("t_l", opt(cert.t_l));
    w.kv("t_lhat", opt(cert.t_lhat));
    w.kv("chain", join(cert.chain));
    w.kv("unstabilized", cert.unstabilized);
    w.kv("g", cert.params.g);
    w.kv("k", join([cert.params.k1, cert.params.k2, cert.params.k3]));
    w.kv("chi", cert.chi);
    w.kv("lower_bound", cert.lower_bound);
    w.kv("notes", join(cert.notes.iter().map(|n| n.as_str())));
    w.kv("status", cert.status);
    w.0
}

struct Fields<'a> {
    map: HashMap<String, (&'a str, usize)>,
    used: HashMap<String, ()>,
}

impl<'a> Fields<'a> {
    fn parse(text: &'a str) -> Result<Fields<'a>, ReportError> {
        let mut map = HashMap::new();
        let mut section = String::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let s = raw.trim();
            if s.is_empty() || s.starts_with('#') {
                continue;
            }
            if let Some(name) = s.strip_prefix('[') {
                let name = name.strip_suffix(']').ok_or_else(|| ReportError::Syntax {
                    line,
                    message: "unterminated section header".into(),
                })?;
                if !SECTIONS.contains(&name) {
                    return Err(ReportError::Syntax {
                        line,
                        message: format!("unknown section `{name}`"),
                    });
                }
                section = name.to_string();
                continue;
            }
            let (key, value) = s.split_once(':').ok_or_else(|| ReportError::Syntax {
                line,
                message: "expected `key: value`".into(),
            })?;
            let key = key.trim();
            let full = if section.is_empty() {
                key.to_string()
            } else {
                format!("{section}.{key}")
            };
            if map.insert(full.clone(), (value.trim(), line)).is_some() {
                return Err(ReportError::Syntax {
                    line,
                    message: format!("duplicate field `{full}`"),
                });
            }
        }
        Ok(Fields {
            map,
            used: HashMap::new(),
        })
    }

    fn raw(&mut self, key: &str) -> Result<(&'a str, usize), ReportError> {
        let v = *self.map.get(key).ok_or_else(|| ReportError::Missing(key.to_string()))?;
        self.used.insert(key.to_string(), ());
        Ok(v)
    }

    fn str(&mut self, key: &str) -> Result<&'a str, ReportError> {
        self.raw(key).map(|(v, _)| v)
    }

    fn get<T: std::str::FromStr>(&mut self, key: &str) -> Result<T, ReportError> {
        let (v, line) = self.raw(key)?;
        v.parse().map_err(|_| invalid(key, line, format!("cannot parse `{v}`")))
    }

    fn list<T: std::str::FromStr>(&mut self, key: &str) -> Result<Vec<T>, ReportError> {
        let (v, line) = self.raw(key)?;
        if v.is_empty() {
            return Ok(Vec::new());
        }
        v.split(',')
            .map(|x| {
                x.trim()
                    .parse()
                    .map_err(|_| invalid(key, line, format!("cannot parse list item `{}`", x.trim())))
            })
            .collect()
    }

    fn optional(&mut self, key: &str) -> Result<Option<usize>, ReportError> {
        let (v, line) = self.raw(key)?;
        if v == "none" {
            return Ok(None);
        }
        v.parse()
            .map(Some)
            .map_err(|_| invalid(key, line, format!("expected integer or `none`, got `{v}`")))
    }

    fn line(&self, key: &str) -> usize {
        self.map.get(key).map_or(0, |&(_, l)| l)
    }

    fn finish(self) -> Result<(), ReportError> {
        let mut extra: Vec<(&String, usize)> = self
            .map
            .iter()
            .filter(|(k, _)| !self.used.contains_key(*k))
            .map(|(k, &(_, l))| (k, l))
            .collect();
        extra.sort_by_key(|&(_, l)| l);
        match extra.first() {
            Some(&(key, line)) => Err(ReportError::Unexpected { key: key.clone(), line }),
            None => Ok(()),
        }
    }
}

fn invalid(field: &str, line: usize, message: String) -> ReportError {
    ReportError::Invalid {
        field: field.to_string(),
        line,
        message,
    }
}

fn validation(field: &str, message: impl Into<String>) -> ReportError {
    ReportError::Validation {
        field: field.to_string(),
        message: message.into(),
    }
}

fn parse_params(s: &str, field: &str, line: usize) -> Result<TrisectionParams, ReportError> {
    let bad = || invalid(field, line, format!("expected `(g; k1, k2, k3)`, got `{s}`"));
    let inner = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')).ok_or_else(bad)?;
    let (g, ks) = inner.split_once(';').ok_or_else(bad)?;
    let ks: Vec<usize> = ks
        .split(',')
        .map(|x| x.trim().parse().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    let [k1, k2, k3] = ks[..] else {
        return Err(bad());
    };
    Ok(TrisectionParams {
        g: g.trim().parse().map_err(|_| bad())?,
        k1,
        k2,
        k3,
    })
}

fn parse_status(s: &str, field: &str, line: usize) -> Result<Status, ReportError> {
    Status::parse(s).ok_or_else(|| invalid(field, line, format!("unknown status `{s}`")))
}

pub fn deserialize_report(text: &str) -> Result<Report, ReportError> {
    let mut f = Fields::parse(text)?;
    let version: u32 = f.get("format")?;
    if version != FORMAT_VERSION {
        return Err(invalid(
            "format",
            f.line("format"),
            format!("unsupported version {version}"),
        ));
    }

    let (ptext, pline) = f.raw("presentation.text")?;
    let presentation = parse_presentation(ptext).map_err(|e| invalid("presentation.text", pline, e.to_string()))?;
    let gens = f.str("presentation.generators")?;
    if gens != presentation.names().join(", ") {
        return Err(validation(
            "presentation.generators",
            "does not match presentation text",
        ));
    }
    let word = |f: &mut Fields<'_>, key: &str| {
        let (v, line) = f.raw(key)?;
        presentation
            .parse_word(v)
            .map_err(|e| invalid(key, line, e.to_string()))
    };
    let relator_count: usize = f.get("presentation.relator_count")?;
    if relator_count != presentation.num_relators() {
        return Err(validation(
            "presentation.relator_count",
            "does not match presentation text",
        ));
    }
    for i in 0..relator_count {
        let key = format!("presentation.relator.{i}");
        if word(&mut f, &key)? != presentation.relators()[i] {
            return Err(validation(&key, "does not match presentation text"));
        }
    }

    let count: usize = f.get("link.component_count")?;
    let mut components = Vec::new();
    for i in 0..count {
        components.push(LinkComponent {
            word: word(&mut f, &format!("link.component.{i}.word"))?,
            framing: f.get(&format!("link.component.{i}.framing"))?,
            meridian_of: f.optional(&format!("link.component.{i}.meridian_of"))?,
        });
    }
    let link = Link { components };

    let tcount: usize = f.get("tunnels.count")?;
    let empty_link: bool = f.get("tunnels.empty_link")?;
    let arc_count: usize = f.get("tunnels.arc_count")?;
    let mut arcs = Vec::new();
    for i in 0..arc_count {
        let key = format!("tunnels.arc.{i}");
        let (v, line) = f.raw(&key)?;
        let parts: Vec<&str> = v.split_whitespace().collect();
        let arc = match parts[..] {
            ["loop", name] => TunnelArc::Loop {
                generator: presentation
                    .index_of(name)
                    .ok_or_else(|| invalid(&key, line, format!("unknown generator `{name}`")))?,
            },
            ["connector", a, b] => TunnelArc::Connector {
                from: a.parse().map_err(|_| invalid(&key, line, "bad index".into()))?,
                to: b.parse().map_err(|_| invalid(&key, line, "bad index".into()))?,
            },
            _ => return Err(invalid(&key, line, format!("unknown arc `{v}`"))),
        };
        arcs.push(arc);
    }
    let tunnels = TunnelSystem {
        arcs,
        count: tcount,
        empty_link,
    };

    let closed: bool = f.get("kirby.closed")?;
    let h0: usize = f.get("kirby.h0")?;
    let one_handles: usize = f.get("kirby.h1")?;
    let h2: usize = f.get("kirby.h2")?;
    let h3: usize = f.get("kirby.h3")?;
    let h4: usize = f.get("kirby.h4")?;
    let mut two_handles = Vec::new();
    for i in 0..h2 {
        let key = format!("kirby.handle.{i}.role");
        let (v, line) = f.raw(&key)?;
        let idx = |s: &str| s.parse::<usize>().map_err(|_| invalid(&key, line, "bad index".into()));
        let role = match v.split_whitespace().collect::<Vec<_>>()[..] {
            ["attaching"] => HandleRole::Attaching,
            ["meridian", of] => HandleRole::Meridian { of: idx(of)? },
            ["hopf", partner] => HandleRole::Hopf { partner: idx(partner)? },
            ["projective"] => HandleRole::Projective,
            _ => return Err(invalid(&key, line, format!("unknown role `{v}`"))),
        };
        two_handles.push(TwoHandle {
            role,
            word: word(&mut f, &format!("kirby.handle.{i}.word"))?,
            framing: f.get(&format!("kirby.handle.{i}.framing"))?,
        });
    }
    let stabilization = Stabilization {
        s2xs2: f.get("kirby.stabilize.s2xs2")?,
        cp2: f.get("kirby.stabilize.cp2")?,
        cp2_bar: f.get("kirby.stabilize.cp2bar")?,
    };
    let diagram = KirbyDiagram {
        h0,
        one_handles,
        two_handles,
        h3,
        h4,
        closed,
        stabilization,
    };
    let framings: Vec<i64> = f.list("kirby.framings")?;
    if framings != crate::kirby::attaching_framings(&diagram) {
        return Err(validation("kirby.framings", "does not match the 2-handle framings"));
    }
    let parities: Vec<u8> = f.list("kirby.framing_parities")?;
    if parities != crate::kirby::framings_mod2(&diagram) {
        return Err(validation(
            "kirby.framing_parities",
            "does not match the framings mod 2",
        ));
    }

    let (rs, rline) = f.raw("rank.status")?;
    let rank_report = RankReport {
        presentation_rank: f.get("rank.presentation_rank")?,
        invariant_factors: f.list::<BigInt>("rank.invariant_factors")?,
        free_rank: f.get("rank.free_rank")?,
        abelian_lower_bound: f.get("rank.abelian_lower_bound")?,
        status: parse_status(rs, "rank.status", rline)?,
    };

    let chain: Vec<i64> = f.list("certificate.chain")?;
    let chain: [i64; 4] = chain
        .try_into()
        .map_err(|_| invalid("chain", f.line("certificate.chain"), "expected four values".into()))?;
    if chain.iter().any(|&c| c != chain[0]) {
        return Err(validation("chain", format!("chain {chain:?} must be constant")));
    }
    let (us, uline) = f.raw("certificate.unstabilized")?;
    let unstabilized = parse_params(us, "certificate.unstabilized", uline)?;
    let g: usize = f.get("certificate.g")?;
    let ks: Vec<usize> = f.list("certificate.k")?;
    let [k1, k2, k3] = ks[..] else {
        return Err(invalid(
            "certificate.k",
            f.line("certificate.k"),
            "expected three values".into(),
        ));
    };
    let (ns, nline) = f.raw("certificate.notes")?;
    let notes = if ns.is_empty() {
        Vec::new()
    } else {
        ns.split(',')
            .map(|s| {
                Note::parse(s.trim())
                    .ok_or_else(|| invalid("certificate.notes", nline, format!("unknown note `{}`", s.trim())))
            })
            .collect::<Result<_, _>>()?
    };
    let (cs, cline) = f.raw("certificate.status")?;
    let certificate = Certificate {
        n: f.get("certificate.n")?,
        num_l: f.get("certificate.num_l")?,
        num_lhat: f.get("certificate.num_lhat")?,
        t_l: f.optional("certificate.t_l")?,
        t_lhat: f.optional("certificate.t_lhat")?,
        chain,
        unstabilized,
        stabilization,
        params: TrisectionParams { g, k1, k2, k3 },
        chi: f.get("certificate.chi")?,
        lower_bound: f.get("certificate.lower_bound")?,
        rank_report,
        notes,
        status: parse_status(cs, "certificate.status", cline)?,
    };
    f.finish()?;

    Ok(Report {
        presentation,
        link,
        tunnels,
        diagram,
        certificate,
    })
}

/// Field-by-field comparison of two reports by their serialized keys.
/// Returns the qualified keys whose values differ or exist on one side only.
pub fn diff_reports(a: &Report, b: &Report) -> Vec<String> {
    let (ta, tb) = (serialize_report(a), serialize_report(b));
    let ma = Fields::parse(&ta).expect("serializer output is well-formed").map;
    let mb = Fields::parse(&tb).expect("serializer output is well-formed").map;
    let mut keys: Vec<(&String, usize)> = ma
        .iter()
        .filter(|(k, (v, _))| mb.get(*k).map(|(w, _)| w) != Some(v))
        .map(|(k, &(_, l))| (k, l))
        .collect();
    keys.sort_by_key(|&(_, l)| l);
    let mut out: Vec<String> = keys.into_iter().map(|(k, _)| k.clone()).collect();
    let mut only_b: Vec<(&String, usize)> = mb
        .iter()
        .filter(|(k, _)| !ma.contains_key(*k))
        .map(|(k, &(_, l))| (k, l))
        .collect();
    only_b.sort_by_key(|&(_, l)| l);
    out.extend(only_b.into_iter().map(|(k, _)| k.clone()));
    out
}
