use serde::Serialize;

use crate::game::Game;
use crate::number::Exact;
use crate::solver::{SolveResult, Status};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaximinEntry {
    pub infoset: String,
    pub player: String,
    pub value: Exact,
    pub action: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PreemptionEntry {
    pub outcome: String,
    pub player: String,
    pub infoset: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepEntry {
    pub step: usize,
    pub surviving: Vec<String>,
    pub reached_infosets: Vec<String>,
    pub maximins: Vec<MaximinEntry>,
    pub preempted: Vec<PreemptionEntry>,
}

/// Name-based view of a [`SolveResult`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceDocument {
    pub trace: Vec<StepEntry>,
    pub status: Status,
    pub equilibrium: Option<String>,
    pub fixpoint: Vec<String>,
    pub has_ties: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub last_nonempty: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eliminating_step: Option<usize>,
}

pub fn trace_document(game: &Game, result: &SolveResult) -> TraceDocument {
    let outcome = |z| {
        game.vertex_name(crate::game::Vertex::Outcome(z))
            .to_string()
    };
    let cell = |c| game.infoset(c).label.clone();
    let player = |p| game.player_name(p).to_string();
    let trace = result
        .steps
        .iter()
        .map(|s| StepEntry {
            step: s.step,
            surviving: s.surviving.iter().map(|&z| outcome(z)).collect(),
            reached_infosets: s.reached.iter().map(|&c| cell(c)).collect(),
            maximins: s
                .maximins
                .iter()
                .map(|m| MaximinEntry {
                    infoset: cell(m.infoset),
                    player: player(m.player),
                    value: m.value.clone(),
                    action: game.action_name(m.action).to_string(),
                })
                .collect(),
            preempted: s
                .preemptions
                .iter()
                .map(|p| PreemptionEntry {
                    outcome: outcome(p.outcome),
                    player: player(p.player),
                    infoset: cell(p.infoset),
                })
                .collect(),
        })
        .collect();
    let witness = result.nonexistence_witness();
    TraceDocument {
        trace,
        status: result.status,
        equilibrium: result.equilibrium().map(outcome),
        fixpoint: result.fixpoint.iter().map(|&z| outcome(z)).collect(),
        has_ties: result.has_ties,
        last_nonempty: witness.map(|(s, _)| s.iter().map(|&z| outcome(z)).collect()),
        eliminating_step: witness.map(|(_, k)| k),
    }
}

pub fn trace_to_json(game: &Game, result: &SolveResult) -> String {
    debug_assert!(result.status != Status::Unique || result.fixpoint.len() == 1);
    serde_json::to_string_pretty(&trace_document(game, result)).expect("trace serializes")
}
