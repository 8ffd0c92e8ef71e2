//! Local rules and the global dynamics they induce.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::codec::{code_string, CodecError};
use crate::graph::{CayleyGraph, Disk, GraphError, Label, NameElem, Port, PortGraph, Suffix, VertexName};

mod continuity;
mod localizable;
mod validate;

pub use continuity::{check_modulus, continuity_modulus, ContinuityVerdict, Counterexample};
pub use localizable::{apply_localizable, iterate};
pub use validate::{validate_local_rule, validate_on, Condition, Coverage, ValidationMode, ValidationReport, Witness};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RuleError {
    #[error("image of {disk} has no vertex named ε")]
    MissingEpsilon { disk: String },
    #[error("image of {disk}: name sets overlap at {elem}")]
    NameSetOverlap { disk: String, elem: String },
    #[error("image of {disk} has {size} vertices, bound is {bound}")]
    ImageTooLarge { disk: String, size: usize, bound: usize },
    #[error("disk has radius {found}, rule radius is {expected}")]
    WrongRadius { expected: usize, found: usize },
    #[error("parameter mismatch: {0}")]
    ParamMismatch(String),
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("image of {disk}: bad vertex name {name}")]
    BadImageName { disk: String, name: String },
    #[error("rule undefined at vertex {vertex}, disk {disk}")]
    PartialRuleHole { vertex: String, disk: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error("step {step}: {source}")]
    AtStep {
        step: usize,
        #[source]
        source: Box<RuleError>,
    },
}

/// The four numbers fixing a rule family, plus the suffix count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RuleParams {
    pub ports: Port,
    /// Size of Σ; labels are `0..labels`.
    pub labels: u16,
    pub radius: usize,
    /// Largest allowed image.
    pub bound: usize,
    /// Suffixes `1..=suffixes` may appear in image names.
    pub suffixes: Suffix,
}

impl RuleParams {
    pub fn new(ports: Port, labels: u16, radius: usize, bound: usize, suffixes: Suffix) -> Result<Self, RuleError> {
        if ports == 0 {
            return Err(RuleError::BadParams("at least one port".into()));
        }
        if labels == 0 {
            return Err(RuleError::BadParams("at least one label".into()));
        }
        if bound == 0 {
            return Err(RuleError::BadParams("bound must be positive".into()));
        }
        Ok(RuleParams {
            ports,
            labels,
            radius,
            bound,
            suffixes,
        })
    }
}

impl fmt::Display for RuleParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ports={} labels={} radius={} bound={} suffixes={}",
            self.ports, self.labels, self.radius, self.bound, self.suffixes
        )
    }
}

type ImageFn<L> = Arc<dyn Fn(&Disk<L>) -> Option<PortGraph<L>> + Send + Sync>;

#[derive(Clone)]
enum Body<L> {
    Table(Arc<HashMap<CayleyGraph<L>, PortGraph<L>>>),
    Generated { image: ImageFn<L>, checked: bool },
}

/// A possibly partial map from radius-`r` disks to named images.
///
/// Images name their vertices with sets of `u.z` elements, `u` a canonical
/// vertex name of the input disk. Every image returned by [`LocalRule::apply`]
/// has been checked: `ε` is present, name sets are disjoint, suffixes are in
/// range and the size is within the bound.
#[derive(Clone)]
pub struct LocalRule<L> {
    name: String,
    params: RuleParams,
    body: Body<L>,
}

impl<L: Label> fmt::Debug for LocalRule<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.body {
            Body::Table(t) => format!("table of {}", t.len()),
            Body::Generated { .. } => "generated".to_string(),
        };
        f.debug_struct("LocalRule")
            .field("name", &self.name)
            .field("params", &self.params)
            .field("body", &kind)
            .finish()
    }
}

impl<L: Label> LocalRule<L> {
    /// A rule given by an explicit table. Every image is checked.
    pub fn from_table(
        name: impl Into<String>,
        params: RuleParams,
        entries: impl IntoIterator<Item = (Disk<L>, PortGraph<L>)>,
    ) -> Result<Self, RuleError> {
        let mut table = HashMap::new();
        for (disk, image) in entries {
            check_disk(&params, &disk)?;
            let image = check_image(&params, &disk, &image)?;
            table.insert(disk.into_graph(), image);
        }
        Ok(LocalRule {
            name: name.into(),
            params,
            body: Body::Table(Arc::new(table)),
        })
    }

    /// A rule computed on demand. Images are checked at every lookup.
    pub fn from_fn(
        name: impl Into<String>,
        params: RuleParams,
        image: impl Fn(&Disk<L>) -> Option<PortGraph<L>> + Send + Sync + 'static,
    ) -> Self {
        LocalRule {
            name: name.into(),
            params,
            body: Body::Generated {
                image: Arc::new(image),
                checked: true,
            },
        }
    }

    /// Like [`LocalRule::from_fn`] without any image checks. Only meant for
    /// exercising the validator on deliberately broken rules.
    pub fn from_fn_unchecked(
        name: impl Into<String>,
        params: RuleParams,
        image: impl Fn(&Disk<L>) -> Option<PortGraph<L>> + Send + Sync + 'static,
    ) -> Self {
        LocalRule {
            name: name.into(),
            params,
            body: Body::Generated {
                image: Arc::new(image),
                checked: false,
            },
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &RuleParams {
        &self.params
    }

    pub fn radius(&self) -> usize {
        self.params.radius
    }

    /// Table entries, for table rules.
    pub fn entries(&self) -> Option<impl Iterator<Item = (&CayleyGraph<L>, &PortGraph<L>)>> {
        match &self.body {
            Body::Table(t) => Some(t.iter()),
            Body::Generated { .. } => None,
        }
    }

    /// The image of `disk`, or `None` where the rule is undefined.
    pub fn apply(&self, disk: &Disk<L>) -> Result<Option<PortGraph<L>>, RuleError> {
        check_disk(&self.params, disk)?;
        match &self.body {
            Body::Table(t) => Ok(t.get(disk.graph()).cloned()),
            Body::Generated { image, checked } => match image(disk) {
                None => Ok(None),
                Some(img) if *checked => check_image(&self.params, disk, &img).map(Some),
                Some(img) => Ok(Some(img)),
            },
        }
    }

    /// A table rule agreeing with `self` on `disks`.
    pub fn tabulate(&self, disks: impl IntoIterator<Item = Disk<L>>) -> Result<Self, RuleError> {
        let mut entries = Vec::new();
        for d in disks {
            if let Some(img) = self.apply(&d)? {
                entries.push((d, img));
            }
        }
        LocalRule::from_table(self.name.clone(), self.params, entries)
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

fn check_disk<L: Label>(params: &RuleParams, disk: &Disk<L>) -> Result<(), RuleError> {
    if disk.radius() != params.radius {
        return Err(RuleError::WrongRadius {
            expected: params.radius,
            found: disk.radius(),
        });
    }
    if disk.ports() != params.ports {
        return Err(RuleError::ParamMismatch(format!(
            "disk has {} ports, rule has {}",
            disk.ports(),
            params.ports
        )));
    }
    Ok(())
}

/// Checks the naming constraints of an image of `disk` and rewrites its
/// names to canonical disk paths, vertices sorted by name.
pub(crate) fn check_image<L: Label>(
    params: &RuleParams,
    disk: &Disk<L>,
    image: &PortGraph<L>,
) -> Result<PortGraph<L>, RuleError> {
    let disk_code = || code_string(disk.graph());
    if image.ports() != params.ports {
        return Err(RuleError::ParamMismatch(format!(
            "image has {} ports, rule has {}",
            image.ports(),
            params.ports
        )));
    }
    if image.vertex_count() > params.bound {
        return Err(RuleError::ImageTooLarge {
            disk: disk_code(),
            size: image.vertex_count(),
            bound: params.bound,
        });
    }
    let names = disk.names();
    let mut seen = BTreeSet::new();
    let mut renamed = Vec::with_capacity(image.vertex_count());
    for name in image.names() {
        let elems: Vec<NameElem> = match name {
            VertexName::Path(w) => vec![NameElem::new(w.clone(), 0)],
            VertexName::Set(s) => s.iter().cloned().collect(),
            VertexName::Raw(_) => {
                return Err(RuleError::BadImageName {
                    disk: disk_code(),
                    name: name.to_string(),
                })
            }
        };
        let mut set = BTreeSet::new();
        for e in elems {
            if e.suffix > params.suffixes {
                return Err(RuleError::BadImageName {
                    disk: disk_code(),
                    name: format!("{name} (suffix {} above {})", e.suffix, params.suffixes),
                });
            }
            let v = disk.vertex_at(&e.path).ok_or_else(|| RuleError::BadImageName {
                disk: disk_code(),
                name: format!("{name} ({} leaves the disk)", e.path),
            })?;
            let canon = NameElem::new(names[v].clone(), e.suffix);
            if !seen.insert(canon.clone()) {
                return Err(RuleError::NameSetOverlap {
                    disk: disk_code(),
                    elem: canon.to_string(),
                });
            }
            set.insert(canon);
        }
        if set.is_empty() {
            return Err(RuleError::Graph(GraphError::EmptyNameSet));
        }
        renamed.push(VertexName::Set(set));
    }
    if !seen.contains(&NameElem::epsilon()) {
        return Err(RuleError::MissingEpsilon { disk: disk_code() });
    }
    Ok(PortGraph::from_parts(
        params.ports,
        renamed,
        image.labels().to_vec(),
        image.adjacency().to_vec(),
    )
    .normalized())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::Word;

    fn params() -> RuleParams {
        RuleParams::new(2, 2, 0, 2, 1).unwrap()
    }

    fn single_image(label: u16) -> PortGraph<u16> {
        let mut g = PortGraph::new(2);
        g.add_vertex(VertexName::epsilon(), label).unwrap();
        g
    }

    #[test]
    fn accepts_identity_entry() {
        let disk = fixtures::single(2, 1).disk(0);
        let f = LocalRule::from_table("id", params(), [(disk.clone(), single_image(1))]).unwrap();
        let img = f.apply(&disk).unwrap().unwrap();
        assert_eq!(img.vertex_count(), 1);
        assert!(img.name(0).contains_epsilon());
        assert_eq!(f.apply(&fixtures::single(2, 0).disk(0)).unwrap(), None);
    }

    #[test]
    fn rejects_bad_images() {
        let disk = fixtures::single(2, 0).disk(0);
        let mut big = PortGraph::new(2);
        for z in 0..3 {
            big.add_vertex(VertexName::elem(Word::empty(), z), 0).unwrap();
        }
        let p = RuleParams::new(2, 2, 0, 2, 3).unwrap();
        assert!(matches!(
            LocalRule::from_table("big", p, [(disk.clone(), big)]),
            Err(RuleError::ImageTooLarge { size: 3, bound: 2, .. })
        ));
        let mut no_eps = PortGraph::new(2);
        no_eps.add_vertex(VertexName::elem(Word::empty(), 1), 0).unwrap();
        assert!(matches!(
            LocalRule::from_table("eps", params(), [(disk.clone(), no_eps)]),
            Err(RuleError::MissingEpsilon { .. })
        ));
        let mut far = PortGraph::new(2);
        far.add_vertex(VertexName::elem("12".parse().unwrap(), 0), 0).unwrap();
        assert!(matches!(
            LocalRule::from_table("far", params(), [(disk.clone(), far)]),
            Err(RuleError::BadImageName { .. })
        ));
        assert!(matches!(
            LocalRule::from_table(
                "radius",
                params(),
                [(fixtures::path(&[0, 0, 0]).disk(1), single_image(0))]
            ),
            Err(RuleError::WrongRadius { .. })
        ));
    }

    #[test]
    fn equivalent_paths_overlap() {
        // on a 1-cycle through ports 1 and 2, "21" and ε name the same vertex
        let disk = fixtures::cycle(&[0]).disk(0);
        let mut g = PortGraph::new(2);
        g.add_vertex(VertexName::epsilon(), 0).unwrap();
        g.add_vertex(VertexName::elem("21".parse().unwrap(), 0), 0).unwrap();
        assert!(matches!(
            LocalRule::from_table("dup", params(), [(disk, g)]),
            Err(RuleError::NameSetOverlap { .. })
        ));
    }
}
