//! Finite table descriptions of local rules.
//!
//! A description lists the disks of radius `r` in code order (identified by
//! a hash of the catalog), the distinct images the rule uses, and for each
//! disk the index of its image or `-` where the rule is undefined.
//!
//! File layout:
//!
//! ```text
//! ports=2 labels=2 radius=0 bound=3 suffixes=0
//! catalog disks=60 sha256=…
//! images 2
//! {e/0}=0 {12/0}=0 | 0:1~1:2
//! …
//! table
//! 0
//! -
//! …
//! ```
//!
//! An image line lists its vertices as `{path/suffix,…}=label` (`e` is the
//! empty path), then `|`, then edges `i:p~j:q` between vertex positions.

use std::fmt;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::graph::{Disk, Edge, NameElem, PortGraph, VertexName, Word};
use crate::rule::{check_image, LocalRule, RuleParams};

use super::{code_string, enumerate_disks, CodecError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleDescription {
    pub params: RuleParams,
    pub disk_count: usize,
    pub disk_hash: String,
    pub images: Vec<PortGraph<u16>>,
    /// One entry per disk, in catalog order.
    pub table: Vec<Option<usize>>,
}

/// SHA-256 over the codes of a disk catalog, one per line.
pub fn catalog_hash(disks: &[Disk<u16>]) -> String {
    let mut h = Sha256::new();
    for d in disks {
        h.update(code_string(d.graph()).as_bytes());
        h.update(b"\n");
    }
    hex::encode(h.finalize())
}

/// Tabulates `f` over every disk of its radius.
pub fn encode_rule(f: &LocalRule<u16>, budget: usize) -> Result<RuleDescription, CodecError> {
    let p = *f.params();
    let disks = enumerate_disks(p.ports, p.labels, p.radius, budget)?;
    let mut images: Vec<(String, PortGraph<u16>)> = Vec::new();
    let mut raw = Vec::with_capacity(disks.len());
    for (entry, d) in disks.iter().enumerate() {
        let img = f.apply(d).map_err(|e| CodecError::NamingConstraintViolated {
            entry,
            reason: e.to_string(),
        })?;
        raw.push(img.map(|g| {
            let text = format_image(&g);
            images.push((text.clone(), g));
            text
        }));
    }
    images.sort_by(|a, b| a.0.cmp(&b.0));
    images.dedup_by(|a, b| a.0 == b.0);
    let table = raw
        .into_iter()
        .map(|t| t.map(|t| images.binary_search_by(|(s, _)| s.cmp(&t)).unwrap()))
        .collect();
    Ok(RuleDescription {
        params: p,
        disk_count: disks.len(),
        disk_hash: catalog_hash(&disks),
        images: images.into_iter().map(|(_, g)| g).collect(),
        table,
    })
}

/// Rebuilds the table rule of a description, checking every image against
/// the naming constraints of its disk.
pub fn decode_rule(d: &RuleDescription, budget: usize) -> Result<LocalRule<u16>, CodecError> {
    let p = d.params;
    d.check_indices()?;
    let disks = enumerate_disks(p.ports, p.labels, p.radius, budget)?;
    if disks.len() != d.disk_count || d.table.len() != disks.len() {
        return Err(CodecError::CatalogMismatch(format!(
            "{} disks enumerated, description has {} ({} entries)",
            disks.len(),
            d.disk_count,
            d.table.len()
        )));
    }
    let hash = catalog_hash(&disks);
    if hash != d.disk_hash {
        return Err(CodecError::CatalogMismatch(format!("hash {hash} != {}", d.disk_hash)));
    }
    let mut entries = Vec::new();
    for (entry, (disk, idx)) in disks.into_iter().zip(&d.table).enumerate() {
        let Some(idx) = *idx else { continue };
        let img = &d.images[idx];
        let checked = check_image(&p, &disk, img).map_err(|e| CodecError::NamingConstraintViolated {
            entry,
            reason: e.to_string(),
        })?;
        if checked != *img {
            return Err(CodecError::NamingConstraintViolated {
                entry,
                reason: "image names are not canonical disk paths".into(),
            });
        }
        entries.push((disk, checked));
    }
    LocalRule::from_table(format!("table:{}", d.fingerprint_short()), p, entries).map_err(|e| {
        CodecError::NamingConstraintViolated {
            entry: 0,
            reason: e.to_string(),
        }
    })
}

impl RuleDescription {
    fn check_indices(&self) -> Result<(), CodecError> {
        for (entry, idx) in self.table.iter().enumerate() {
            if let Some(i) = *idx {
                if i >= self.images.len() {
                    return Err(CodecError::BadIndex {
                        entry,
                        index: i,
                        images: self.images.len(),
                    });
                }
            }
        }
        Ok(())
    }

    /// SHA-256 of the rendered description.
    pub fn fingerprint(&self) -> String {
        hex::encode(Sha256::digest(self.to_string().as_bytes()))
    }

    /// First eight hex digits of the fingerprint.
    pub fn fingerprint_short(&self) -> String {
        self.fingerprint()[..8].to_string()
    }

    pub fn defined_entries(&self) -> usize {
        self.table.iter().filter(|e| e.is_some()).count()
    }
}

impl fmt::Display for RuleDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.params)?;
        writeln!(f, "catalog disks={} sha256={}", self.disk_count, self.disk_hash)?;
        writeln!(f, "images {}", self.images.len())?;
        for g in &self.images {
            writeln!(f, "{}", format_image(g))?;
        }
        writeln!(f, "table")?;
        for e in &self.table {
            match e {
                Some(i) => writeln!(f, "{i}")?,
                None => writeln!(f, "-")?,
            }
        }
        Ok(())
    }
}

fn header_err(msg: impl Into<String>) -> CodecError {
    CodecError::Header(msg.into())
}

fn fields(line: &str) -> Result<Vec<(&str, &str)>, CodecError> {
    line.split_whitespace()
        .map(|f| {
            f.split_once('=')
                .ok_or_else(|| header_err(format!("expected key=value, got {f}")))
        })
        .collect()
}

fn number<T: FromStr>(key: &str, value: &str) -> Result<T, CodecError> {
    value
        .parse()
        .map_err(|_| header_err(format!("bad value {value} for {key}")))
}

impl FromStr for RuleDescription {
    type Err = CodecError;

    fn from_str(text: &str) -> Result<Self, CodecError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| header_err("empty rule file"))?;
        let (mut ports, mut labels, mut radius, mut bound, mut suffixes) = (None, None, None, None, 0);
        for (k, v) in fields(header)? {
            match k {
                "ports" => ports = Some(number(k, v)?),
                "labels" => labels = Some(number(k, v)?),
                "radius" => radius = Some(number(k, v)?),
                "bound" => bound = Some(number(k, v)?),
                "suffixes" => suffixes = number(k, v)?,
                _ => return Err(header_err(format!("unknown field {k}"))),
            }
        }
        let missing = |k: &str| header_err(format!("missing {k}="));
        let params = RuleParams::new(
            ports.ok_or_else(|| missing("ports"))?,
            labels.ok_or_else(|| missing("labels"))?,
            radius.ok_or_else(|| missing("radius"))?,
            bound.ok_or_else(|| missing("bound"))?,
            suffixes,
        )
        .map_err(|e| header_err(e.to_string()))?;

        let catalog = lines.next().ok_or_else(|| header_err("missing catalog line"))?;
        let rest = catalog
            .strip_prefix("catalog ")
            .ok_or_else(|| header_err("expected 'catalog disks=… sha256=…'"))?;
        let (mut disk_count, mut disk_hash) = (None, None);
        for (k, v) in fields(rest)? {
            match k {
                "disks" => disk_count = Some(number(k, v)?),
                "sha256" => disk_hash = Some(v.to_string()),
                _ => return Err(header_err(format!("unknown field {k}"))),
            }
        }
        let images_line = lines.next().ok_or_else(|| header_err("missing images line"))?;
        let count: usize = images_line
            .strip_prefix("images ")
            .ok_or_else(|| header_err("expected 'images <count>'"))
            .and_then(|v| number("images", v))?;
        let mut images = Vec::with_capacity(count);
        for _ in 0..count {
            let line = lines.next().ok_or_else(|| header_err("image list ends early"))?;
            images.push(parse_image(line, params.ports)?);
        }
        if lines.next() != Some("table") {
            return Err(header_err("expected 'table'"));
        }
        let table = lines
            .map(|l| match l {
                "-" => Ok(None),
                n => number("table entry", n).map(Some),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let d = RuleDescription {
            params,
            disk_count: disk_count.ok_or_else(|| missing("disks"))?,
            disk_hash: disk_hash.ok_or_else(|| missing("sha256"))?,
            images,
            table,
        };
        d.check_indices()?;
        Ok(d)
    }
}

fn format_elem(e: &NameElem) -> String {
    if e.path.is_empty() {
        format!("e/{}", e.suffix)
    } else {
        format!("{}/{}", e.path, e.suffix)
    }
}

/// One-line text form of an image.
pub fn format_image(g: &PortGraph<u16>) -> String {
    let mut s = String::new();
    for (v, name) in g.names().iter().enumerate() {
        let elems: Vec<String> = match name {
            VertexName::Path(w) => vec![format_elem(&NameElem::new(w.clone(), 0))],
            VertexName::Set(set) => set.iter().map(format_elem).collect(),
            VertexName::Raw(id) => vec![format!("#{id}")],
        };
        s.push_str(&format!("{{{}}}={} ", elems.join(","), g.label(v)));
    }
    s.push('|');
    for Edge(a, b) in g.edges() {
        s.push_str(&format!(" {}:{}~{}:{}", a.vertex, a.port, b.vertex, b.port));
    }
    s
}

/// Splits on commas outside parentheses, since wide ports print as `(10,2)`.
fn split_top(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0, 0);
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Parses the output of [`format_image`].
pub fn parse_image(line: &str, ports: u8) -> Result<PortGraph<u16>, CodecError> {
    let bad = |what: &str| CodecError::Parse {
        position: 0,
        expected: format!("{what} in image line '{line}'"),
    };
    let (verts, edges) = line.split_once('|').ok_or_else(|| bad("'|'"))?;
    let mut g = PortGraph::new(ports);
    for v in verts.split_whitespace() {
        let (name, label) = v.rsplit_once('=').ok_or_else(|| bad("'=label'"))?;
        let inner = name
            .strip_prefix('{')
            .and_then(|n| n.strip_suffix('}'))
            .ok_or_else(|| bad("'{…}'"))?;
        let mut set = Vec::new();
        for e in split_top(inner) {
            let (path, suffix) = e.rsplit_once('/').ok_or_else(|| bad("'path/suffix'"))?;
            let path: Word = path.parse().map_err(|_| bad("a path"))?;
            set.push(NameElem::new(path, suffix.parse().map_err(|_| bad("a suffix"))?));
        }
        let label = label.parse().map_err(|_| bad("a label"))?;
        g.add_vertex(VertexName::set(set), label)
            .map_err(|e| bad(&format!("valid vertex ({e})")))?;
    }
    for e in edges.split_whitespace() {
        let (a, b) = e.split_once('~').ok_or_else(|| bad("'~'"))?;
        let end = |s: &str| -> Result<(usize, u8), CodecError> {
            let (v, p) = s.split_once(':').ok_or_else(|| bad("'v:p'"))?;
            Ok((
                v.parse().map_err(|_| bad("a vertex"))?,
                p.parse().map_err(|_| bad("a port"))?,
            ))
        };
        let ((u, i), (v, j)) = (end(a)?, end(b)?);
        g.add_edge(u, i, v, j).map_err(|e| bad(&format!("valid edge ({e})")))?;
    }
    Ok(g)
}
