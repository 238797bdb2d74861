use std::collections::BTreeSet;
use std::fmt::Write;

use crate::game::{Game, NodeId, OutcomeId, Vertex};
use crate::solver::SolveResult;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DotError {
    #[error("step {step} is out of range; the trace has {len} steps")]
    StepOutOfRange { step: usize, len: usize },
}

fn quote(s: &str) -> String {
    let escaped = s
        .replace('\\', "\\\\")
        .replace('"', "\\\"")
        .replace('\n', "\\n");
    format!("\"{escaped}\"")
}

fn node_key(n: NodeId) -> String {
    format!("n{}", n.0)
}

fn outcome_key(z: OutcomeId) -> String {
    format!("z{}", z.0)
}

fn vertex_key(v: Vertex) -> String {
    match v {
        Vertex::Node(n) => node_key(n),
        Vertex::Outcome(z) => outcome_key(z),
    }
}

/// Graphviz rendering of the game as seen at one step of the trace.
///
/// Outcomes no longer surviving are gray, nodes of reached cells are black,
/// cells with several nodes are dashed clusters. At the last step the
/// outcomes eliminated in that step are gray too and a unique equilibrium is
/// drawn with a double border.
pub fn export_dot(game: &Game, result: &SolveResult, step: usize) -> Result<String, DotError> {
    let state = result.steps.get(step).ok_or(DotError::StepOutOfRange {
        step,
        len: result.steps.len(),
    })?;
    let last = step + 1 == result.steps.len();
    let mut alive: BTreeSet<OutcomeId> = state.surviving.clone();
    if last {
        alive.retain(|z| !state.preempted.contains(z));
    }
    let equilibrium = if last { result.equilibrium() } else { None };

    let mut out = String::new();
    writeln!(out, "digraph game {{").unwrap();
    writeln!(out, "  label={};", quote(&format!("step {step}"))).unwrap();
    writeln!(out, "  node [fontname=\"Helvetica\"];").unwrap();
    writeln!(out, "  edge [fontname=\"Helvetica\"];").unwrap();

    for c in game.infoset_ids() {
        let cell = game.infoset(c);
        if cell.members.len() < 2 {
            continue;
        }
        writeln!(out, "  subgraph cluster_{} {{", c.0).unwrap();
        writeln!(out, "    style=dashed;").unwrap();
        writeln!(out, "    label={};", quote(&cell.label)).unwrap();
        for &n in &cell.members {
            writeln!(out, "    {};", node_key(n)).unwrap();
        }
        writeln!(out, "  }}").unwrap();
    }

    for n in game.node_ids() {
        let node = game.node(n);
        let label = format!("{}\n{}", node.id, game.player_name(node.player));
        let style = if state.reached.contains(&node.infoset) {
            "style=filled, fillcolor=black, fontcolor=white"
        } else {
            "style=solid"
        };
        writeln!(
            out,
            "  {} [shape=circle, label={}, {}];",
            node_key(n),
            quote(&label),
            style
        )
        .unwrap();
    }
    for z in game.outcome_ids() {
        let outcome = game.outcome(z);
        let payoffs: Vec<String> = outcome.payoffs.iter().map(|v| v.to_string()).collect();
        let label = format!("{}\n({})", outcome.id, payoffs.join(", "));
        let mut style = if alive.contains(&z) {
            "color=black, fontcolor=black".to_string()
        } else {
            "color=gray, fontcolor=gray".to_string()
        };
        if equilibrium == Some(z) {
            style.push_str(", peripheries=2, penwidth=2");
        }
        writeln!(
            out,
            "  {} [shape=box, label={}, {}];",
            outcome_key(z),
            quote(&label),
            style
        )
        .unwrap();
    }
    for n in game.node_ids() {
        for &(a, child) in &game.node(n).moves {
            writeln!(
                out,
                "  {} -> {} [label={}];",
                node_key(n),
                vertex_key(child),
                quote(game.action_name(a))
            )
            .unwrap();
        }
    }
    writeln!(out, "}}").unwrap();
    Ok(out)
}
