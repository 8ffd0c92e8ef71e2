//! Ports, port-pair steps, path words and vertex names.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

/// A port index, `1..=d` for a graph family of degree `d`.
pub type Port = u8;

/// One letter of Π = π × π: leave the current vertex through `out` and
/// enter the next one through `into`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Step {
    pub out: Port,
    pub into: Port,
}

impl Step {
    pub const fn new(out: Port, into: Port) -> Self {
        Step { out, into }
    }

    /// The step walking the same edge backwards (`ab` becomes `ba`).
    pub const fn reversed(self) -> Self {
        Step {
            out: self.into,
            into: self.out,
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.out < 10 && self.into < 10 {
            write!(f, "{}{}", self.out, self.into)
        } else {
            write!(f, "({},{})", self.out, self.into)
        }
    }
}

/// A word over Π, i.e. a path starting at some vertex.
///
/// Words are ordered length-first, then lexicographically on their steps.
/// Under this order the least word reaching a vertex is a shortest path,
/// which is what canonical vertex names use.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Step>);

impl Word {
    pub const fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_steps(steps: impl IntoIterator<Item = Step>) -> Self {
        Word(steps.into_iter().collect())
    }

    pub fn steps(&self) -> &[Step] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, step: Step) {
        self.0.push(step);
    }

    pub fn then(&self, step: Step) -> Word {
        let mut w = self.clone();
        w.push(step);
        w
    }

    /// Concatenation `self.other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut steps = Vec::with_capacity(self.len() + other.len());
        steps.extend_from_slice(&self.0);
        steps.extend_from_slice(&other.0);
        Word(steps)
    }

    /// The path walking `self` backwards: reversed order, each pair swapped.
    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|s| s.reversed()).collect())
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed path word {input:?}: {reason}")]
pub struct WordParseError {
    pub input: String,
    pub reason: &'static str,
}

impl FromStr for Word {
    type Err = WordParseError;

    /// Parses `ε` (or the empty string), `11.23`, or `(10,2).(1,1)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason| WordParseError {
            input: s.to_string(),
            reason,
        };
        let s = s.trim();
        if s.is_empty() || s == "ε" || s == "e" {
            return Ok(Word::empty());
        }
        let mut steps = Vec::new();
        for part in s.split('.') {
            let step = if let Some(inner) = part.strip_prefix('(').and_then(|p| p.strip_suffix(')')) {
                let (a, b) = inner.split_once(',').ok_or_else(|| err("expected (a,b)"))?;
                let a = a.trim().parse().map_err(|_| err("bad port"))?;
                let b = b.trim().parse().map_err(|_| err("bad port"))?;
                Step::new(a, b)
            } else {
                let bytes = part.as_bytes();
                if bytes.len() != 2 || !bytes.iter().all(u8::is_ascii_digit) {
                    return Err(err("expected two port digits"));
                }
                Step::new(bytes[0] - b'0', bytes[1] - b'0')
            };
            if step.out == 0 || step.into == 0 {
                return Err(err("ports start at 1"));
            }
            steps.push(step);
        }
        Ok(Word(steps))
    }
}

/// A suffix in S = {ε, 1, …, s}; `0` stands for ε.
pub type Suffix = u8;

/// One element `u.z` of a name set: the `z`-th successor of the vertex
/// reached by `u`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NameElem {
    pub path: Word,
    pub suffix: Suffix,
}

impl NameElem {
    pub fn new(path: Word, suffix: Suffix) -> Self {
        NameElem { path, suffix }
    }

    /// The element `ε` itself.
    pub fn epsilon() -> Self {
        NameElem::new(Word::empty(), 0)
    }

    pub fn is_epsilon(&self) -> bool {
        self.path.is_empty() && self.suffix == 0
    }
}

impl fmt::Display for NameElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.path.is_empty(), self.suffix) {
            (_, 0) => write!(f, "{}", self.path),
            (true, z) => write!(f, "{z}"),
            (false, z) => write!(f, "{}.{z}", self.path),
        }
    }
}

/// How a vertex is named.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum VertexName {
    /// A path from the pointer (canonical graphs).
    Path(Word),
    /// A nonempty set of `u.z` elements (images of local rules).
    Set(BTreeSet<NameElem>),
    /// An opaque identifier (machine-internal vertices).
    Raw(u64),
}

impl VertexName {
    pub fn set(elems: impl IntoIterator<Item = NameElem>) -> Self {
        VertexName::Set(elems.into_iter().collect())
    }

    /// The single-element name set `{u.z}`.
    pub fn elem(path: Word, suffix: Suffix) -> Self {
        VertexName::set([NameElem::new(path, suffix)])
    }

    pub fn epsilon() -> Self {
        VertexName::Path(Word::empty())
    }

    /// Name elements this vertex answers to; a path name `w` is read as `{w}`.
    pub(crate) fn elements(&self) -> Vec<NameKey> {
        match self {
            VertexName::Path(w) => vec![NameKey::Elem(NameElem::new(w.clone(), 0))],
            VertexName::Set(s) => s.iter().cloned().map(NameKey::Elem).collect(),
            VertexName::Raw(id) => vec![NameKey::Raw(*id)],
        }
    }

    pub fn contains_epsilon(&self) -> bool {
        match self {
            VertexName::Path(w) => w.is_empty(),
            VertexName::Set(s) => s.contains(&NameElem::epsilon()),
            VertexName::Raw(_) => false,
        }
    }
}

impl fmt::Display for VertexName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexName::Path(w) => write!(f, "{w}"),
            VertexName::Set(s) => {
                f.write_str("{")?;
                for (i, e) in s.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{e}")?;
                }
                f.write_str("}")
            }
            VertexName::Raw(id) => write!(f, "#{id}"),
        }
    }
}

/// Gluing key of a name element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum NameKey {
    Elem(NameElem),
    Raw(u64),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shortlex_order() {
        let a: Word = "22".parse().unwrap();
        let b: Word = "11.11".parse().unwrap();
        let c: Word = "11.12".parse().unwrap();
        assert!(Word::empty() < a);
        assert!(a < b);
        assert!(b < c);
    }

    #[test]
    fn inverse_swaps_and_reverses() {
        let w: Word = "12.34".parse().unwrap();
        assert_eq!(w.inverse().to_string(), "43.21");
        assert_eq!(w.inverse().inverse(), w);
    }

    #[test]
    fn parse_wide_ports() {
        let w: Word = "(10,2).11".parse().unwrap();
        assert_eq!(w.steps(), &[Step::new(10, 2), Step::new(1, 1)]);
        assert_eq!(w.to_string(), "(10,2).11");
        assert!("1".parse::<Word>().is_err());
        assert!("01".parse::<Word>().is_err());
    }

    #[test]
    fn name_display() {
        let n = VertexName::set([NameElem::epsilon(), NameElem::new("34".parse().unwrap(), 1)]);
        assert_eq!(n.to_string(), "{ε, 34.1}");
        assert!(n.contains_epsilon());
    }
}
