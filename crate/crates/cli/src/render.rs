//! Output formats.

use cgd::codec::code_string;
use cgd::export::{summary_line, to_dot};
use cgd::graph::{CayleyGraph, Label};
use clap::ValueEnum;
use serde_json::json;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Dot,
    Code,
    Summary,
    Json,
}

/// `x` rendered as one block of text, without a trailing newline.
pub fn render<L: Label>(x: &CayleyGraph<L>, format: Format, step: usize, title: &str) -> String {
    match format {
        Format::Dot => to_dot(x, title).trim_end().to_string(),
        Format::Code => code_string(x),
        Format::Summary => summary_line(step, x),
        Format::Json => to_json(x, step).to_string(),
    }
}

pub fn to_json<L: Label>(x: &CayleyGraph<L>, step: usize) -> serde_json::Value {
    let names = x.names();
    let vertices: Vec<_> = (0..x.vertex_count())
        .map(|v| json!({ "name": names[v].to_string(), "label": x.label(v).to_string() }))
        .collect();
    let edges: Vec<_> = x
        .edges()
        .iter()
        .map(|e| {
            json!({
                "from": names[e.0.vertex].to_string(),
                "from_port": e.0.port,
                "to": names[e.1.vertex].to_string(),
                "to_port": e.1.port,
            })
        })
        .collect();
    json!({
        "step": step,
        "ports": x.ports(),
        "pointer": names[0].to_string(),
        "code": code_string(x),
        "vertices": vertices,
        "edges": edges,
    })
}
