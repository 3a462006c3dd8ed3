//! DOT export: one vertex per unique node instance, labeled edges, shared
//! subgraphs emitted once.

use std::collections::HashMap;
use std::fmt::Write;

use crate::graph::{Node, ScalarView};

/// Renders the graph as a DOT digraph. Vertices are numbered in depth-first
/// first-visit order, so the output is a pure function of the DAG (including
/// its sharing) and is byte-identical across runs.
pub fn to_dot(root: &Node) -> String {
    let mut out = String::from("digraph pulse {\n");
    let mut ids: HashMap<usize, usize> = HashMap::new();
    emit(root, &mut ids, &mut out);
    out.push_str("}\n");
    out
}

fn emit(node: &Node, ids: &mut HashMap<usize, usize>, out: &mut String) -> usize {
    if let Some(&id) = ids.get(&node.ptr_key()) {
        return id;
    }
    let id = ids.len();
    ids.insert(node.ptr_key(), id);
    writeln!(out, "  n{id} [label=\"{}\"];", escape(&vertex_label(node))).unwrap();
    for (label, child) in node.children() {
        let child_id = emit(&child, ids, out);
        writeln!(out, "  n{id} -> n{child_id} [label=\"{}\"];", escape(&label.to_string()))
            .unwrap();
    }
    id
}

/// Kind name plus literal payload for the leaf scalars.
fn vertex_label(node: &Node) -> String {
    match node {
        Node::Scalar(s) => match s.view() {
            ScalarView::Num { value } => format!("Num({value})"),
            ScalarView::Var { key } => format!("Var({key})"),
            ScalarView::Op { .. } => s.kind().name().to_owned(),
        },
        Node::Waveform(w) => w.kind().name().to_owned(),
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
