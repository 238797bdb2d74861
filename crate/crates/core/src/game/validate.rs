use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::{ActionId, Game, InfosetId, NodeId, Vertex};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum IssueCode {
    /// Two (node, action) pairs share a successor.
    DuplicateSuccessor,
    /// Some vertex is not connected to the declared root.
    Forest,
    /// The declared root is itself somebody's successor.
    RootHasPredecessor,
    /// A choice node offers no action.
    NoActions,
    /// Members of one information set belong to different players.
    InfosetPlayerMismatch,
    /// Members of one information set offer different actions.
    InfosetActionMismatch,
    /// A node and one of its strict descendants share an information set.
    NotCanonical,
    /// A declared action is never used.
    UnusedAction,
    /// A declared player never moves.
    IdlePlayer,
}

impl fmt::Display for IssueCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = serde_json::to_value(self).expect("unit variant");
        f.write_str(text.as_str().expect("string"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub code: IssueCode,
    pub message: String,
    pub ids: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub errors: Vec<Diagnostic>,
    pub warnings: Vec<Diagnostic>,
    pub is_canonical: bool,
    pub has_perfect_recall: bool,
    pub has_ties: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.errors.is_empty()
    }

    pub fn has_error(&self, code: IssueCode) -> bool {
        self.errors.iter().any(|d| d.code == code)
    }
}

impl Game {
    /// Checks every structural constraint and reports all violations.
    pub fn validate(&self) -> ValidationReport {
        let mut errors = Vec::new();
        let mut warnings = Vec::new();

        // Predecessor counts.
        let mut node_preds: Vec<Vec<(NodeId, ActionId)>> = vec![Vec::new(); self.nodes.len()];
        let mut outcome_preds: Vec<Vec<(NodeId, ActionId)>> = vec![Vec::new(); self.outcomes.len()];
        for n in self.node_ids() {
            for &(a, child) in &self.node(n).moves {
                match child {
                    Vertex::Node(c) => node_preds[c.0].push((n, a)),
                    Vertex::Outcome(z) => outcome_preds[z.0].push((n, a)),
                }
            }
        }
        let preds_of = |v: Vertex| match v {
            Vertex::Node(n) => &node_preds[n.0],
            Vertex::Outcome(z) => &outcome_preds[z.0],
        };
        let all_vertices: Vec<Vertex> = self
            .node_ids()
            .map(Vertex::Node)
            .chain(self.outcome_ids().map(Vertex::Outcome))
            .collect();
        for &v in &all_vertices {
            let preds = preds_of(v);
            if preds.len() > 1 {
                let mut ids = vec![self.vertex_name(v).to_string()];
                ids.extend(preds.iter().map(|(n, _)| self.node(*n).id.clone()));
                errors.push(Diagnostic {
                    code: IssueCode::DuplicateSuccessor,
                    message: format!(
                        "`{}` is the successor of {} (node, action) pairs",
                        self.vertex_name(v),
                        preds.len()
                    ),
                    ids,
                });
            }
        }
        if !preds_of(self.root).is_empty() {
            errors.push(Diagnostic {
                code: IssueCode::RootHasPredecessor,
                message: format!("root `{}` has a predecessor", self.vertex_name(self.root)),
                ids: vec![self.vertex_name(self.root).to_string()],
            });
        }
        let reachable = self.reachable_from(self.root);
        let detached: Vec<Vertex> = all_vertices
            .iter()
            .copied()
            .filter(|v| !reachable.contains(v))
            .collect();
        if !detached.is_empty() {
            let extra_roots: Vec<String> = detached
                .iter()
                .filter(|v| preds_of(**v).is_empty())
                .map(|v| self.vertex_name(*v).to_string())
                .collect();
            errors.push(Diagnostic {
                code: IssueCode::Forest,
                message: format!(
                    "{} vertices are not connected to root `{}` (other roots: {:?})",
                    detached.len(),
                    self.vertex_name(self.root),
                    extra_roots
                ),
                ids: detached
                    .iter()
                    .map(|v| self.vertex_name(*v).to_string())
                    .collect(),
            });
        }
        for node in &self.nodes {
            if node.moves.is_empty() {
                errors.push(Diagnostic {
                    code: IssueCode::NoActions,
                    message: format!("choice node `{}` has no actions", node.id),
                    ids: vec![node.id.clone()],
                });
            }
        }
        for cell in self.infoset_ids() {
            let members = &self.infoset(cell).members;
            let first = self.node(members[0]);
            let ids = || members.iter().map(|n| self.node(*n).id.clone()).collect();
            if members.iter().any(|n| self.node(*n).player != first.player) {
                errors.push(Diagnostic {
                    code: IssueCode::InfosetPlayerMismatch,
                    message: format!(
                        "information set `{}` mixes players",
                        self.infoset(cell).label
                    ),
                    ids: ids(),
                });
            }
            let first_actions: Vec<ActionId> = first.actions().collect();
            if members
                .iter()
                .any(|n| !self.node(*n).actions().eq(first_actions.iter().copied()))
            {
                errors.push(Diagnostic {
                    code: IssueCode::InfosetActionMismatch,
                    message: format!(
                        "information set `{}` mixes action sets",
                        self.infoset(cell).label
                    ),
                    ids: ids(),
                });
            }
        }

        let tree_ok = errors.is_empty();
        let is_canonical = tree_ok && self.is_canonical();
        let has_perfect_recall = tree_ok && self.has_perfect_recall();
        if tree_ok && !is_canonical {
            for cell in self.non_canonical_cells() {
                warnings.push(Diagnostic {
                    code: IssueCode::NotCanonical,
                    message: format!(
                        "information set `{}` contains a node and one of its descendants",
                        self.infoset(cell).label
                    ),
                    ids: vec![self.infoset(cell).label.clone()],
                });
            }
        }
        let used: BTreeSet<ActionId> = self.nodes.iter().flat_map(|n| n.actions()).collect();
        for (i, name) in self.actions.iter().enumerate() {
            if !used.contains(&ActionId(i)) {
                warnings.push(Diagnostic {
                    code: IssueCode::UnusedAction,
                    message: format!("action `{name}` is never available"),
                    ids: vec![name.clone()],
                });
            }
        }
        for (i, name) in self.players.iter().enumerate() {
            if !self.nodes.iter().any(|n| n.player.0 == i) {
                warnings.push(Diagnostic {
                    code: IssueCode::IdlePlayer,
                    message: format!("player `{name}` never moves"),
                    ids: vec![name.clone()],
                });
            }
        }

        ValidationReport {
            errors,
            warnings,
            is_canonical,
            has_perfect_recall,
            has_ties: self.has_ties(),
        }
    }

    /// True iff no cell holds a node together with one of its strict descendants.
    pub fn is_canonical(&self) -> bool {
        self.non_canonical_cells().is_empty()
    }

    /// Cells violating `descendants(n) ∩ cell = {n}`, in id order.
    pub fn non_canonical_cells(&self) -> Vec<InfosetId> {
        self.infoset_ids()
            .filter(|&cell| {
                let members = &self.infoset(cell).members;
                members.iter().any(|&n| {
                    let below = self.reachable_from(Vertex::Node(n));
                    members
                        .iter()
                        .any(|&m| m != n && below.contains(&Vertex::Node(m)))
                })
            })
            .collect()
    }

    /// True iff, for every cell, all members see the same sequence of
    /// (own cell, own action) pairs on their path from the root.
    pub fn has_perfect_recall(&self) -> bool {
        self.infoset_ids().all(|cell| {
            let members = &self.infoset(cell).members;
            let player = self.node(members[0]).player;
            let experience = |n: NodeId| -> Vec<(InfosetId, ActionId)> {
                let mut seq = Vec::new();
                let mut current = Vertex::Node(n);
                let mut guard = 0;
                while let Some((parent, action)) = self.parent(current) {
                    if self.node(parent).player == player {
                        seq.push((self.node(parent).infoset, action));
                    }
                    current = Vertex::Node(parent);
                    guard += 1;
                    if guard > self.nodes.len() {
                        break;
                    }
                }
                seq.reverse();
                seq
            };
            let reference = experience(members[0]);
            members[1..].iter().all(|&n| experience(n) == reference)
        })
    }

    pub(crate) fn reachable_from(&self, start: Vertex) -> BTreeSet<Vertex> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            if !seen.insert(v) {
                continue;
            }
            if let Vertex::Node(n) = v {
                stack.extend(self.node(n).moves.iter().map(|(_, c)| *c));
            }
        }
        seen
    }
}
