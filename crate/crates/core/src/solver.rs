//! Forward-induction elimination of outcomes.
//!
//! Starting from all outcomes, each step determines the information sets
//! that every surviving outcome passes through (the reached cells), computes
//! each reached cell's maximin for its player over the surviving outcomes,
//! and removes every surviving outcome that leaves some such player strictly
//! below their maximin. Eliminations from all reached cells of a step are
//! applied together. The loop stops when nothing is removed or nothing
//! survives.

use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::game::{ActionId, Game, InfosetId, OutcomeId, PlayerId, Vertex};
use crate::number::Exact;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("game is structurally invalid: {0}")]
    Invalid(String),
    #[error(
        "game is not canonical: information set `{0}` contains a node and one of its descendants"
    )]
    NotCanonical(String),
    #[error("surviving outcome set is empty")]
    EmptySurviving,
    #[error("no action of information set `{0}` leads to a surviving outcome")]
    NoSurvivingAction(String),
    #[error("solver invariant violated: {0}")]
    Invariant(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Maximin {
    pub infoset: InfosetId,
    pub player: PlayerId,
    pub value: Exact,
    /// First action, in declaration order, attaining the value.
    pub action: ActionId,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Preemption {
    pub outcome: OutcomeId,
    pub player: PlayerId,
    pub infoset: InfosetId,
}

/// One step of the elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverState {
    pub step: usize,
    pub surviving: BTreeSet<OutcomeId>,
    pub reached: BTreeSet<InfosetId>,
    /// One entry per reached cell, in cell order.
    pub maximins: Vec<Maximin>,
    /// Every (outcome, cell) pair at which an outcome falls below the maximin.
    pub preemptions: Vec<Preemption>,
    pub preempted: BTreeSet<OutcomeId>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Unique,
    Empty,
    MultipleWithTies,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Unique => "unique",
            Status::Empty => "empty",
            Status::MultipleWithTies => "multiple_with_ties",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub fixpoint: BTreeSet<OutcomeId>,
    pub steps: Vec<SolverState>,
    pub has_ties: bool,
    pub status: Status,
}

impl SolveResult {
    pub fn equilibrium(&self) -> Option<OutcomeId> {
        match self.status {
            Status::Unique => self.fixpoint.iter().next().copied(),
            _ => None,
        }
    }

    /// For an empty result: the last surviving set and the step that emptied it.
    pub fn nonexistence_witness(&self) -> Option<(&BTreeSet<OutcomeId>, usize)> {
        match self.status {
            Status::Empty => self.steps.last().map(|s| (&s.surviving, s.step)),
            _ => None,
        }
    }

    /// Classifies a fixpoint; more than one survivor without ties breaks the
    /// uniqueness theorem and is reported as an invariant violation.
    pub fn classify(fixpoint: &BTreeSet<OutcomeId>, has_ties: bool) -> Result<Status, SolveError> {
        match fixpoint.len() {
            0 => Ok(Status::Empty),
            1 => Ok(Status::Unique),
            _ if has_ties => Ok(Status::MultipleWithTies),
            n => Err(SolveError::Invariant(format!(
                "{n} outcomes survive in a game without ties"
            ))),
        }
    }
}

/// Descendant sets of a canonical game as outcome bitsets.
pub struct ForwardInduction<'g> {
    game: &'g Game,
    /// Outcomes below each cell.
    cell_outcomes: Vec<FixedBitSet>,
    /// Outcomes below `cell ⊕ a`, per cell, in action order.
    branch_outcomes: Vec<Vec<(ActionId, FixedBitSet)>>,
}

impl<'g> ForwardInduction<'g> {
    /// Requires a structurally valid, canonical game.
    pub fn new(game: &'g Game) -> Result<Self, SolveError> {
        let report = game.validate();
        if let Some(first) = report.errors.first() {
            return Err(SolveError::Invalid(format!(
                "{}: {}",
                first.code, first.message
            )));
        }
        if let Some(cell) = game.non_canonical_cells().first() {
            return Err(SolveError::NotCanonical(game.infoset(*cell).label.clone()));
        }

        let n_outcomes = game.outcomes().len();
        let mut below: Vec<Option<FixedBitSet>> = vec![None; game.nodes().len()];
        let mut stack = Vec::new();
        if let Vertex::Node(root) = game.root() {
            stack.push((root, false));
        }
        while let Some((node, expanded)) = stack.pop() {
            if expanded {
                let mut set = FixedBitSet::with_capacity(n_outcomes);
                for &(_, child) in &game.node(node).moves {
                    match child {
                        Vertex::Outcome(z) => set.insert(z.0),
                        Vertex::Node(c) => set.union_with(below[c.0].as_ref().expect("post-order")),
                    }
                }
                below[node.0] = Some(set);
            } else {
                stack.push((node, true));
                for &(_, child) in &game.node(node).moves {
                    if let Vertex::Node(c) = child {
                        stack.push((c, false));
                    }
                }
            }
        }
        let below: Vec<FixedBitSet> = below
            .into_iter()
            .map(|s| s.expect("tree is connected"))
            .collect();
        let vertex_outcomes = |v: Vertex| match v {
            Vertex::Node(n) => below[n.0].clone(),
            Vertex::Outcome(z) => {
                let mut set = FixedBitSet::with_capacity(n_outcomes);
                set.insert(z.0);
                set
            }
        };

        let mut cell_outcomes = Vec::with_capacity(game.infosets().len());
        let mut branch_outcomes = Vec::with_capacity(game.infosets().len());
        for cell in game.infoset_ids() {
            let members = &game.infoset(cell).members;
            let mut all = FixedBitSet::with_capacity(n_outcomes);
            for n in members {
                all.union_with(&below[n.0]);
            }
            let branches = game
                .infoset_actions(cell)
                .into_iter()
                .map(|a| {
                    let mut set = FixedBitSet::with_capacity(n_outcomes);
                    for &n in members {
                        set.union_with(&vertex_outcomes(
                            game.node(n).child(a).expect("cell actions"),
                        ));
                    }
                    (a, set)
                })
                .collect();
            cell_outcomes.push(all);
            branch_outcomes.push(branches);
        }

        Ok(ForwardInduction {
            game,
            cell_outcomes,
            branch_outcomes,
        })
    }

    pub fn game(&self) -> &'g Game {
        self.game
    }

    fn bitset(&self, outcomes: &BTreeSet<OutcomeId>) -> FixedBitSet {
        let mut set = FixedBitSet::with_capacity(self.game.outcomes().len());
        for z in outcomes {
            set.insert(z.0);
        }
        set
    }

    /// Cells whose descendants include every surviving outcome.
    pub fn reached_infosets(
        &self,
        surviving: &BTreeSet<OutcomeId>,
    ) -> Result<BTreeSet<InfosetId>, SolveError> {
        if surviving.is_empty() {
            return Err(SolveError::EmptySurviving);
        }
        let s = self.bitset(surviving);
        Ok(self
            .game
            .infoset_ids()
            .filter(|c| s.is_subset(&self.cell_outcomes[c.0]))
            .collect())
    }

    /// Max over actions with surviving descendants of the min surviving payoff
    /// of the cell's player below that action.
    pub fn maximin(
        &self,
        surviving: &BTreeSet<OutcomeId>,
        cell: InfosetId,
    ) -> Result<Maximin, SolveError> {
        let s = self.bitset(surviving);
        let player = self.game.infoset_player(cell);
        let mut best: Option<(Exact, ActionId)> = None;
        for (action, branch) in &self.branch_outcomes[cell.0] {
            let worst = branch
                .intersection(&s)
                .map(|z| self.game.payoff(player, OutcomeId(z)))
                .min();
            if let Some(worst) = worst {
                if best.as_ref().is_none_or(|(v, _)| worst > v) {
                    best = Some((worst.clone(), *action));
                }
            }
        }
        let (value, action) = best
            .ok_or_else(|| SolveError::NoSurvivingAction(self.game.infoset(cell).label.clone()))?;
        Ok(Maximin {
            infoset: cell,
            player,
            value,
            action,
        })
    }

    /// Maximins of the reached cells and every outcome strictly below one.
    pub fn preempted(
        &self,
        surviving: &BTreeSet<OutcomeId>,
        reached: &BTreeSet<InfosetId>,
    ) -> Result<(Vec<Maximin>, Vec<Preemption>), SolveError> {
        let mut maximins = Vec::with_capacity(reached.len());
        let mut preemptions = Vec::new();
        for &cell in reached {
            let m = self.maximin(surviving, cell)?;
            for &z in surviving {
                if self.game.payoff(m.player, z) < &m.value {
                    let own = self.branch_outcomes[cell.0]
                        .iter()
                        .find(|(_, set)| set.contains(z.0))
                        .map(|(a, _)| *a);
                    if own == Some(m.action) {
                        return Err(SolveError::Invariant(format!(
                            "outcome `{}` preempted at `{}` by its own action",
                            self.game.outcome(z).id,
                            self.game.infoset(cell).label
                        )));
                    }
                    preemptions.push(Preemption {
                        outcome: z,
                        player: m.player,
                        infoset: cell,
                    });
                }
            }
            maximins.push(m);
        }
        preemptions.sort();
        Ok((maximins, preemptions))
    }

    pub fn solve(&self) -> Result<SolveResult, SolveError> {
        let mut surviving: BTreeSet<OutcomeId> = self.game.outcome_ids().collect();
        let mut steps = Vec::new();
        while !surviving.is_empty() {
            let reached = self.reached_infosets(&surviving)?;
            let (maximins, preemptions) = self.preempted(&surviving, &reached)?;
            let preempted: BTreeSet<OutcomeId> = preemptions.iter().map(|p| p.outcome).collect();
            let next: BTreeSet<OutcomeId> = surviving.difference(&preempted).copied().collect();
            let done = preempted.is_empty();
            steps.push(SolverState {
                step: steps.len(),
                surviving,
                reached,
                maximins,
                preemptions,
                preempted,
            });
            surviving = next;
            if done {
                break;
            }
        }
        let has_ties = self.game.has_ties();
        let status = SolveResult::classify(&surviving, has_ties)?;
        Ok(SolveResult {
            fixpoint: surviving,
            steps,
            has_ties,
            status,
        })
    }
}

pub fn reached_infosets(
    game: &Game,
    surviving: &BTreeSet<OutcomeId>,
) -> Result<BTreeSet<InfosetId>, SolveError> {
    ForwardInduction::new(game)?.reached_infosets(surviving)
}

pub fn maximin(
    game: &Game,
    surviving: &BTreeSet<OutcomeId>,
    cell: InfosetId,
) -> Result<Maximin, SolveError> {
    ForwardInduction::new(game)?.maximin(surviving, cell)
}

/// Outcomes preempted at some reached cell.
pub fn preempted(
    game: &Game,
    surviving: &BTreeSet<OutcomeId>,
    reached: &BTreeSet<InfosetId>,
) -> Result<BTreeSet<OutcomeId>, SolveError> {
    let (_, preemptions) = ForwardInduction::new(game)?.preempted(surviving, reached)?;
    Ok(preemptions.into_iter().map(|p| p.outcome).collect())
}

/// Runs the elimination to its fixpoint. The game must be canonical.
pub fn solve(game: &Game) -> Result<SolveResult, SolveError> {
    ForwardInduction::new(game)?.solve()
}
