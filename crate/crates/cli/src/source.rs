//! Loading graphs and rules from library names or files.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use cgd::codec::{decode_rule, GraphFile, RuleDescription};
use cgd::graph::CayleyGraph;
use cgd::rule::LocalRule;
use cgd::{fixtures, library, random};

/// A graph together with the size of its label alphabet.
pub struct GraphInput {
    pub graph: CayleyGraph<u16>,
    pub labels: u16,
}

/// A fixture name, `random:<ports>:<labels>:<max vertices>` (drawn with
/// `seed`), or the path of a code file.
pub fn load_graph(source: &str, seed: u64) -> Result<GraphInput> {
    if let Some(graph) = fixtures::by_name(source) {
        let labels = graph.labels().iter().max().map_or(1, |&l| l + 1);
        return Ok(GraphInput { graph, labels });
    }
    if let Some(params) = source.strip_prefix("random:") {
        let parts: Vec<&str> = params.split(':').collect();
        let [p, l, n] = parts[..] else {
            bail!("expected random:<ports>:<labels>:<max vertices>, got {source}");
        };
        let (ports, labels, max): (u8, u16, usize) = (p.parse()?, l.parse()?, n.parse()?);
        if ports == 0 || labels == 0 || max == 0 {
            bail!("random graph parameters must be positive");
        }
        let graph = random::random_graph_upto(&mut random::seeded(seed), ports, labels, max);
        return Ok(GraphInput { graph, labels });
    }
    let path = Path::new(source);
    if !path.exists() {
        bail!(
            "no fixture or file named {source} (fixtures: {})",
            fixtures::NAMES.join(", ")
        );
    }
    let text = fs::read_to_string(path).with_context(|| format!("reading {source}"))?;
    let file = GraphFile::parse(&text).with_context(|| format!("parsing {source}"))?;
    let graph = file.graph().with_context(|| format!("decoding {source}"))?;
    Ok(GraphInput {
        graph,
        labels: file.labels.len() as u16,
    })
}

/// A rule and, for rules read from a file, the description it came from.
pub struct RuleInput {
    pub rule: LocalRule<u16>,
    pub description: Option<RuleDescription>,
}

/// A library rule name, sized to `graph` where the rule adapts, or the path
/// of a description file.
pub fn load_rule(source: &str, graph: Option<&GraphInput>, budget: usize) -> Result<RuleInput> {
    let (ports, labels) = graph.map_or((2, 2), |g| (g.graph.ports(), g.labels.max(1)));
    if let Some(rule) = library::by_name(source, ports, labels) {
        return Ok(RuleInput {
            rule,
            description: None,
        });
    }
    let description = load_description(source)?;
    let rule = decode_rule(&description, budget).with_context(|| format!("decoding rule {source}"))?;
    Ok(RuleInput {
        rule,
        description: Some(description),
    })
}

pub fn load_description(source: &str) -> Result<RuleDescription> {
    let path = Path::new(source);
    if !path.exists() {
        bail!(
            "no library rule or file named {source} (rules: {}, identity:<ports>:<labels>)",
            library::NAMES.join(", ")
        );
    }
    let text = fs::read_to_string(path).with_context(|| format!("reading {source}"))?;
    text.parse().with_context(|| format!("parsing rule file {source}"))
}
