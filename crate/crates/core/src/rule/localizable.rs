use crate::codec::code_string;
use crate::graph::{canonical_from, glue_keyed, CayleyGraph, GraphError, Label, NameKey, PortGraph, Suffix};

use super::{LocalRule, RuleError};

/// One step of the global dynamics: the union over all vertices `u` of
/// `u.f(X_u^r)`, pointed at the `ε` of the pointer's own image.
///
/// Image names `u.v.z` are resolved to the vertex of `x` reached by `u.v`,
/// so two parts meet wherever they name the same successor of the same
/// vertex, whichever path they used to reach it.
pub fn apply_localizable<L: Label>(f: &LocalRule<L>, x: &CayleyGraph<L>) -> Result<CayleyGraph<L>, RuleError> {
    let r = f.radius();
    if x.ports() != f.params().ports {
        return Err(RuleError::ParamMismatch(format!(
            "graph has {} ports, rule has {}",
            x.ports(),
            f.params().ports
        )));
    }
    let n = x.vertex_count();
    let mut parts: Vec<PortGraph<L>> = Vec::with_capacity(n);
    let mut keys: Vec<Vec<Vec<(usize, Suffix)>>> = Vec::with_capacity(n);
    for u in 0..n {
        let (disk, origin) = x.disk_around(u, r);
        let image = f.apply(&disk)?.ok_or_else(|| RuleError::PartialRuleHole {
            vertex: x.name(u).to_string(),
            disk: code_string(disk.graph()),
        })?;
        let mut part_keys = Vec::with_capacity(image.vertex_count());
        for v in 0..image.vertex_count() {
            let mut ks = Vec::new();
            for k in image.name(v).elements() {
                let NameKey::Elem(e) = k else {
                    return Err(RuleError::BadImageName {
                        disk: code_string(disk.graph()),
                        name: image.name(v).to_string(),
                    });
                };
                let w = disk
                    .vertex_at(&e.path)
                    .ok_or_else(|| GraphError::NoSuchPath(e.path.to_string()))?;
                ks.push((origin[w], e.suffix));
            }
            part_keys.push(ks);
        }
        parts.push(image);
        keys.push(part_keys);
    }
    let glued = glue_keyed(f.params().ports, &parts, |p, v| keys[p][v].clone())
        .map_err(|c| RuleError::Graph(GraphError::InconsistentUnion(c)))?;
    let pointer = glued.class_of[&(0, 0)];
    let c = canonical_from(
        f.params().ports,
        |v, p| glued.adj[v][usize::from(p) - 1],
        |v| glued.labels[v].clone(),
        pointer,
        None,
    );
    if c.origin.len() != glued.labels.len() {
        return Err(RuleError::Graph(GraphError::DisconnectedInput(
            "image is not connected to its pointer".into(),
        )));
    }
    Ok(c.graph)
}

/// `[x, F(x), …, F^n(x)]`.
pub fn iterate<L: Label>(f: &LocalRule<L>, x: &CayleyGraph<L>, n: usize) -> Result<Vec<CayleyGraph<L>>, RuleError> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(x.clone());
    for step in 1..=n {
        let next = apply_localizable(f, &out[step - 1]).map_err(|e| RuleError::AtStep {
            step,
            source: Box::new(e),
        })?;
        out.push(next);
    }
    Ok(out)
}
