//! Brute-force reference implementations and random instance generators.
//!
//! Nothing here calls into [`crate::solver`]: [`naive_solve`] recomputes
//! every set from explicit root-to-outcome paths so that agreement between
//! the two is meaningful.

mod generate;
mod search;

use std::collections::{BTreeMap, BTreeSet};

use crate::game::{ActionId, Game, InfosetId, NodeId, NormalForm, OutcomeId, Vertex};
use crate::number::Exact;
use crate::solver::{Maximin, Preemption, SolveError, SolveResult, SolverState, Status};
use crate::spacetime::{Histories, History, SpacetimeSetup};

pub use generate::{
    random_game, random_normal_form, random_raw_imperfect, random_setup, GenerationError,
    GeneratorParams, Shape,
};
pub use search::{
    no_tie_normal_forms, search_empty_pte, search_empty_pte_in, symmetric_pd_orderings,
};

/// Outcomes with no Pareto improvement among all outcomes.
pub fn pareto_frontier(game: &Game) -> BTreeSet<OutcomeId> {
    let dominated = |z: OutcomeId, by: OutcomeId| {
        let (a, b) = (&game.outcome(z).payoffs, &game.outcome(by).payoffs);
        a.iter().zip(b).all(|(x, y)| y >= x) && a.iter().zip(b).any(|(x, y)| y > x)
    };
    game.outcome_ids()
        .filter(|&z| !game.outcome_ids().any(|other| dominated(z, other)))
        .collect()
}

/// Best payoff a player can guarantee in a normal form by their own choice.
pub fn normal_form_maximin(nf: &NormalForm, player: usize) -> Exact {
    (0..nf.strategies[player].len())
        .map(|own| {
            nf.payoffs
                .iter()
                .filter(|(profile, _)| profile[player] == own)
                .map(|(_, payoffs)| payoffs[player].clone())
                .min()
                .expect("every action appears in some profile")
        })
        .max()
        .expect("player has actions")
}

/// Root-to-outcome path of every outcome, as (node, action) pairs.
fn outcome_paths(game: &Game) -> BTreeMap<OutcomeId, Vec<(NodeId, ActionId)>> {
    let mut paths = BTreeMap::new();
    let mut stack: Vec<(Vertex, Vec<(NodeId, ActionId)>)> = vec![(game.root(), Vec::new())];
    while let Some((vertex, path)) = stack.pop() {
        match vertex {
            Vertex::Outcome(z) => {
                paths.insert(z, path);
            }
            Vertex::Node(n) => {
                for &(a, child) in &game.node(n).moves {
                    let mut extended = path.clone();
                    extended.push((n, a));
                    stack.push((child, extended));
                }
            }
        }
    }
    paths
}

/// Independent re-implementation of the elimination, step by step.
pub fn naive_solve(game: &Game) -> Result<SolveResult, SolveError> {
    let report = game.validate();
    if let Some(first) = report.errors.first() {
        return Err(SolveError::Invalid(format!(
            "{}: {}",
            first.code, first.message
        )));
    }
    let paths = outcome_paths(game);
    let cell_of = |n: NodeId| game.node(n).infoset;

    // A cell is non-canonical iff some path visits it twice (every node has an
    // outcome below it).
    for path in paths.values() {
        let mut seen = BTreeSet::new();
        for &(n, _) in path {
            if !seen.insert(cell_of(n)) {
                return Err(SolveError::NotCanonical(
                    game.infoset(cell_of(n)).label.clone(),
                ));
            }
        }
    }
    let passes = |z: OutcomeId, cell: InfosetId| paths[&z].iter().any(|&(n, _)| cell_of(n) == cell);
    let passes_with = |z: OutcomeId, cell: InfosetId, a: ActionId| {
        paths[&z].iter().any(|&(n, b)| cell_of(n) == cell && b == a)
    };

    let mut surviving: BTreeSet<OutcomeId> = paths.keys().copied().collect();
    let mut steps = Vec::new();
    loop {
        let reached: BTreeSet<InfosetId> = (0..game.infosets().len())
            .map(InfosetId)
            .filter(|&c| surviving.iter().all(|&z| passes(z, c)))
            .collect();
        let mut maximins = Vec::new();
        let mut preemptions = Vec::new();
        for &cell in &reached {
            let first = game.node(game.infoset(cell).members[0]);
            let player = first.player;
            let mut best: Option<(Exact, ActionId)> = None;
            for &(a, _) in &first.moves {
                let mut worst: Option<&Exact> = None;
                for &z in &surviving {
                    if passes_with(z, cell, a) {
                        let u = &game.outcome(z).payoffs[player.0];
                        if worst.is_none_or(|w| u < w) {
                            worst = Some(u);
                        }
                    }
                }
                if let Some(w) = worst {
                    if best.as_ref().is_none_or(|(v, _)| w > v) {
                        best = Some((w.clone(), a));
                    }
                }
            }
            let (value, action) = best
                .ok_or_else(|| SolveError::NoSurvivingAction(game.infoset(cell).label.clone()))?;
            for &z in &surviving {
                if game.outcome(z).payoffs[player.0] < value {
                    preemptions.push(Preemption {
                        outcome: z,
                        player,
                        infoset: cell,
                    });
                }
            }
            maximins.push(Maximin {
                infoset: cell,
                player,
                value,
                action,
            });
        }
        preemptions.sort();
        let preempted: BTreeSet<OutcomeId> = preemptions.iter().map(|p| p.outcome).collect();
        let next: BTreeSet<OutcomeId> = surviving.difference(&preempted).copied().collect();
        let stop = preempted.is_empty() || next.is_empty();
        steps.push(SolverState {
            step: steps.len(),
            surviving,
            reached,
            maximins,
            preemptions,
            preempted,
        });
        surviving = next;
        if stop {
            break;
        }
    }

    let has_ties = (0..game.players().len()).any(|p| {
        let values: BTreeSet<&Exact> = game.outcomes().iter().map(|z| &z.payoffs[p]).collect();
        values.len() < game.outcomes().len()
    });
    let status = match surviving.len() {
        0 => Status::Empty,
        1 => Status::Unique,
        _ if has_ties => Status::MultipleWithTies,
        n => {
            return Err(SolveError::Invariant(format!(
                "{n} outcomes survive in a game without ties"
            )))
        }
    };
    Ok(SolveResult {
        fixpoint: surviving,
        steps,
        has_ties,
        status,
    })
}

/// Consistent histories by exhaustive filtering of every assignment of
/// action-or-⊥, for small setups.
pub fn naive_histories(setup: &SpacetimeSetup) -> Histories {
    let order = setup.total_order();
    let n = order.len();
    // Required actions per position, indexed by position.
    let mut position = vec![0; n];
    for (i, p) in order.iter().enumerate() {
        position[p.0] = i;
    }
    let rows: Vec<BTreeMap<usize, ActionId>> = order
        .iter()
        .map(|p| {
            setup
                .contingency_of(*p)
                .iter()
                .map(|(l, a)| (position[l.0], *a))
                .collect()
        })
        .collect();
    let row_matches = |h: &[Option<ActionId>], m: usize| {
        rows[m]
            .iter()
            .all(|(&l, &a)| l < h.len() && h[l] == Some(a))
    };

    let choices: Vec<Vec<Option<ActionId>>> = order
        .iter()
        .map(|p| {
            std::iter::once(None)
                .chain(setup.point(*p).actions.iter().map(|a| Some(*a)))
                .collect()
        })
        .collect();
    let mut out = Histories::default();
    let mut counters = vec![0usize; n];
    loop {
        let h: Vec<Option<ActionId>> = (0..n).map(|i| choices[i][counters[i]]).collect();
        let consistent = (0..n).all(|m| row_matches(&h[..m], m) == h[m].is_some());
        if consistent {
            for m in 0..n {
                if row_matches(&h[..m], m) {
                    out.incomplete.insert(History(h[..m].to_vec()));
                }
            }
            out.complete.insert(History(h));
        }
        // odometer
        let mut i = 0;
        while i < n {
            counters[i] += 1;
            if counters[i] < choices[i].len() {
                break;
            }
            counters[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    out
}
