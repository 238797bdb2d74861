//! Extensive-form games with imperfect information.
//!
//! A [`Game`] stores players, a global action list, choice nodes, outcomes
//! and the information partition. Identifiers from documents are kept as
//! opaque strings; internally everything is addressed through dense index
//! newtypes so the solver can use bitsets.
//!
//! A `Game` may be structurally invalid (two parents for one child, several
//! roots, mismatched information sets). [`Game::validate`] reports those
//! problems instead of failing, and the navigation helpers stay total on
//! such input.

mod canonical;
mod navigate;
mod normal_form;
mod validate;

use std::collections::HashMap;
use std::fmt;

use crate::number::Exact;

pub use navigate::Anchor;
pub use normal_form::{embed_normal_form, NormalForm};
pub use validate::{Diagnostic, IssueCode, ValidationReport};

macro_rules! index_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(pub usize);

        impl $name {
            pub fn index(self) -> usize {
                self.0
            }
        }
    };
}

index_type!(
    /// Position in [`Game::players`].
    PlayerId
);
index_type!(
    /// Position in [`Game::actions`]; also the declaration order used for tie-breaking.
    ActionId
);
index_type!(NodeId);
index_type!(OutcomeId);
index_type!(
    /// An information-set cell.
    InfosetId
);

/// A choice node or an outcome.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vertex {
    Node(NodeId),
    Outcome(OutcomeId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChoiceNode {
    pub id: String,
    pub player: PlayerId,
    pub infoset: InfosetId,
    /// Available actions with their successors, sorted by action declaration order.
    pub moves: Vec<(ActionId, Vertex)>,
}

impl ChoiceNode {
    pub fn child(&self, action: ActionId) -> Option<Vertex> {
        self.moves
            .binary_search_by_key(&action, |(a, _)| *a)
            .ok()
            .map(|i| self.moves[i].1)
    }

    pub fn actions(&self) -> impl Iterator<Item = ActionId> + '_ {
        self.moves.iter().map(|(a, _)| *a)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub id: String,
    /// One payoff per player, indexed by [`PlayerId`].
    pub payoffs: Vec<Exact>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Infoset {
    pub label: String,
    pub members: Vec<NodeId>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GameError {
    #[error("duplicate identifier `{0}`")]
    DuplicateId(String),
    #[error("duplicate player `{0}`")]
    DuplicatePlayer(String),
    #[error("duplicate action `{0}`")]
    DuplicateAction(String),
    #[error("unknown player `{0}`")]
    UnknownPlayer(String),
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("unknown node or outcome `{0}`")]
    UnknownId(String),
    #[error("unknown information set `{0}`")]
    UnknownInfoset(String),
    #[error("node `{node}` lists action `{action}` twice")]
    DuplicateMove { node: String, action: String },
    #[error("outcome `{outcome}` has no payoff for player `{player}`")]
    MissingPayoff { outcome: String, player: String },
    #[error("action `{action}` is not available at node `{node}`")]
    ActionUnavailable { node: String, action: String },
    #[error("`{target}` is not a strict descendant of `{from}`")]
    NotADescendant { from: String, target: String },
    #[error("game is structurally invalid: {0}")]
    Invalid(String),
    #[error("normal form is missing the payoff vector for profile {0:?}")]
    MissingProfile(Vec<String>),
    #[error("normal form is malformed: {0}")]
    MalformedNormalForm(String),
}

/// An extensive-form game with imperfect information.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Game {
    players: Vec<String>,
    actions: Vec<String>,
    nodes: Vec<ChoiceNode>,
    outcomes: Vec<Outcome>,
    infosets: Vec<Infoset>,
    root: Vertex,
    node_parent: Vec<Option<(NodeId, ActionId)>>,
    outcome_parent: Vec<Option<(NodeId, ActionId)>>,
}

impl Game {
    pub fn players(&self) -> &[String] {
        &self.players
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    pub fn nodes(&self) -> &[ChoiceNode] {
        &self.nodes
    }

    pub fn outcomes(&self) -> &[Outcome] {
        &self.outcomes
    }

    pub fn infosets(&self) -> &[Infoset] {
        &self.infosets
    }

    pub fn root(&self) -> Vertex {
        self.root
    }

    pub fn node(&self, id: NodeId) -> &ChoiceNode {
        &self.nodes[id.0]
    }

    pub fn outcome(&self, id: OutcomeId) -> &Outcome {
        &self.outcomes[id.0]
    }

    pub fn infoset(&self, id: InfosetId) -> &Infoset {
        &self.infosets[id.0]
    }

    pub fn player_name(&self, id: PlayerId) -> &str {
        &self.players[id.0]
    }

    pub fn action_name(&self, id: ActionId) -> &str {
        &self.actions[id.0]
    }

    pub fn payoff(&self, player: PlayerId, outcome: OutcomeId) -> &Exact {
        &self.outcomes[outcome.0].payoffs[player.0]
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.nodes.len()).map(NodeId)
    }

    pub fn outcome_ids(&self) -> impl Iterator<Item = OutcomeId> {
        (0..self.outcomes.len()).map(OutcomeId)
    }

    pub fn infoset_ids(&self) -> impl Iterator<Item = InfosetId> {
        (0..self.infosets.len()).map(InfosetId)
    }

    /// Player owning a cell, taken from its first member.
    pub fn infoset_player(&self, id: InfosetId) -> PlayerId {
        self.nodes[self.infosets[id.0].members[0].0].player
    }

    /// Action set of a cell, taken from its first member.
    pub fn infoset_actions(&self, id: InfosetId) -> Vec<ActionId> {
        self.nodes[self.infosets[id.0].members[0].0]
            .actions()
            .collect()
    }

    pub fn vertex_name(&self, vertex: Vertex) -> &str {
        match vertex {
            Vertex::Node(n) => &self.nodes[n.0].id,
            Vertex::Outcome(z) => &self.outcomes[z.0].id,
        }
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<Vertex> {
        self.nodes
            .iter()
            .position(|n| n.id == name)
            .map(|i| Vertex::Node(NodeId(i)))
            .or_else(|| {
                self.outcomes
                    .iter()
                    .position(|z| z.id == name)
                    .map(|i| Vertex::Outcome(OutcomeId(i)))
            })
    }

    pub fn outcome_by_name(&self, name: &str) -> Option<OutcomeId> {
        self.outcomes
            .iter()
            .position(|z| z.id == name)
            .map(OutcomeId)
    }

    pub fn infoset_by_label(&self, label: &str) -> Option<InfosetId> {
        self.infosets
            .iter()
            .position(|c| c.label == label)
            .map(InfosetId)
    }

    pub fn action_by_name(&self, name: &str) -> Option<ActionId> {
        self.actions.iter().position(|a| a == name).map(ActionId)
    }

    pub fn player_by_name(&self, name: &str) -> Option<PlayerId> {
        self.players.iter().position(|p| p == name).map(PlayerId)
    }

    /// The (first recorded) parent edge of a vertex.
    pub fn parent(&self, vertex: Vertex) -> Option<(NodeId, ActionId)> {
        match vertex {
            Vertex::Node(n) => self.node_parent[n.0],
            Vertex::Outcome(z) => self.outcome_parent[z.0],
        }
    }

    /// True iff some player values two distinct outcomes equally.
    pub fn has_ties(&self) -> bool {
        (0..self.players.len()).any(|p| {
            let mut values: Vec<&Exact> = self.outcomes.iter().map(|z| &z.payoffs[p]).collect();
            values.sort();
            values.windows(2).any(|w| w[0] == w[1])
        })
    }

    fn vertex_exists(&self, vertex: Vertex) -> bool {
        match vertex {
            Vertex::Node(n) => n.0 < self.nodes.len(),
            Vertex::Outcome(z) => z.0 < self.outcomes.len(),
        }
    }

    fn from_parts(
        players: Vec<String>,
        actions: Vec<String>,
        nodes: Vec<ChoiceNode>,
        outcomes: Vec<Outcome>,
        infosets: Vec<Infoset>,
        root: Vertex,
    ) -> Game {
        let mut node_parent = vec![None; nodes.len()];
        let mut outcome_parent = vec![None; outcomes.len()];
        for (i, node) in nodes.iter().enumerate() {
            for &(action, child) in &node.moves {
                let slot = match child {
                    Vertex::Node(n) => &mut node_parent[n.0],
                    Vertex::Outcome(z) => &mut outcome_parent[z.0],
                };
                if slot.is_none() {
                    *slot = Some((NodeId(i), action));
                }
            }
        }
        Game {
            players,
            actions,
            nodes,
            outcomes,
            infosets,
            root,
            node_parent,
            outcome_parent,
        }
    }
}

impl fmt::Display for Game {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "game with {} players, {} choice nodes, {} outcomes, {} information sets",
            self.players.len(),
            self.nodes.len(),
            self.outcomes.len(),
            self.infosets.len()
        )
    }
}

#[derive(Clone, Debug)]
struct NodeSpec {
    id: String,
    player: String,
    infoset: String,
    moves: Vec<(String, String)>,
}

/// Assembles a [`Game`] from string identifiers.
///
/// Name resolution errors (unknown or duplicate identifiers, missing payoffs)
/// fail here. Tree-shape problems are left to [`Game::validate`].
#[derive(Clone, Debug, Default)]
pub struct GameBuilder {
    players: Vec<String>,
    actions: Vec<String>,
    nodes: Vec<NodeSpec>,
    outcomes: Vec<(String, Vec<(String, Exact)>)>,
    root: Option<String>,
}

impl GameBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn player(&mut self, name: impl Into<String>) -> &mut Self {
        self.players.push(name.into());
        self
    }

    pub fn action(&mut self, name: impl Into<String>) -> &mut Self {
        self.actions.push(name.into());
        self
    }

    /// Declares the action unless it is already known.
    pub fn ensure_action(&mut self, name: &str) -> &mut Self {
        if !self.actions.iter().any(|a| a == name) {
            self.actions.push(name.to_string());
        }
        self
    }

    pub fn node<I, A, C>(
        &mut self,
        id: impl Into<String>,
        player: impl Into<String>,
        infoset: impl Into<String>,
        moves: I,
    ) -> &mut Self
    where
        I: IntoIterator<Item = (A, C)>,
        A: Into<String>,
        C: Into<String>,
    {
        self.nodes.push(NodeSpec {
            id: id.into(),
            player: player.into(),
            infoset: infoset.into(),
            moves: moves
                .into_iter()
                .map(|(a, c)| (a.into(), c.into()))
                .collect(),
        });
        self
    }

    pub fn outcome<I, P>(&mut self, id: impl Into<String>, payoffs: I) -> &mut Self
    where
        I: IntoIterator<Item = (P, Exact)>,
        P: Into<String>,
    {
        self.outcomes.push((
            id.into(),
            payoffs.into_iter().map(|(p, v)| (p.into(), v)).collect(),
        ));
        self
    }

    pub fn root(&mut self, id: impl Into<String>) -> &mut Self {
        self.root = Some(id.into());
        self
    }

    pub fn build(&self) -> Result<Game, GameError> {
        let players = unique_names(&self.players, GameError::DuplicatePlayer)?;
        let actions = unique_names(&self.actions, GameError::DuplicateAction)?;

        let mut vertices: HashMap<&str, Vertex> = HashMap::new();
        for (i, spec) in self.nodes.iter().enumerate() {
            if vertices.insert(&spec.id, Vertex::Node(NodeId(i))).is_some() {
                return Err(GameError::DuplicateId(spec.id.clone()));
            }
        }
        for (i, (id, _)) in self.outcomes.iter().enumerate() {
            if vertices.insert(id, Vertex::Outcome(OutcomeId(i))).is_some() {
                return Err(GameError::DuplicateId(id.clone()));
            }
        }

        let mut infosets: Vec<Infoset> = Vec::new();
        let mut infoset_index: HashMap<&str, InfosetId> = HashMap::new();
        let mut nodes = Vec::with_capacity(self.nodes.len());
        for (i, spec) in self.nodes.iter().enumerate() {
            let player = *players
                .get(spec.player.as_str())
                .ok_or_else(|| GameError::UnknownPlayer(spec.player.clone()))?;
            let infoset = *infoset_index.entry(&spec.infoset).or_insert_with(|| {
                infosets.push(Infoset {
                    label: spec.infoset.clone(),
                    members: Vec::new(),
                });
                InfosetId(infosets.len() - 1)
            });
            infosets[infoset.0].members.push(NodeId(i));
            let mut moves = Vec::with_capacity(spec.moves.len());
            for (action, child) in &spec.moves {
                let action_id = *actions
                    .get(action.as_str())
                    .ok_or_else(|| GameError::UnknownAction(action.clone()))?;
                let child = *vertices
                    .get(child.as_str())
                    .ok_or_else(|| GameError::UnknownId(child.clone()))?;
                moves.push((ActionId(action_id), child));
            }
            moves.sort_by_key(|(a, _)| *a);
            if let Some(w) = moves.windows(2).find(|w| w[0].0 == w[1].0) {
                return Err(GameError::DuplicateMove {
                    node: spec.id.clone(),
                    action: self.actions[w[0].0 .0].clone(),
                });
            }
            nodes.push(ChoiceNode {
                id: spec.id.clone(),
                player: PlayerId(player),
                infoset,
                moves,
            });
        }

        let mut outcomes = Vec::with_capacity(self.outcomes.len());
        for (id, payoffs) in &self.outcomes {
            let mut values: Vec<Option<Exact>> = vec![None; self.players.len()];
            for (player, value) in payoffs {
                let p = *players
                    .get(player.as_str())
                    .ok_or_else(|| GameError::UnknownPlayer(player.clone()))?;
                values[p] = Some(value.clone());
            }
            let payoffs = values
                .into_iter()
                .enumerate()
                .map(|(p, v)| {
                    v.ok_or_else(|| GameError::MissingPayoff {
                        outcome: id.clone(),
                        player: self.players[p].clone(),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            outcomes.push(Outcome {
                id: id.clone(),
                payoffs,
            });
        }

        let root_name = self
            .root
            .as_deref()
            .ok_or_else(|| GameError::UnknownId(String::from("<no root declared>")))?;
        let root = *vertices
            .get(root_name)
            .ok_or_else(|| GameError::UnknownId(root_name.to_string()))?;

        Ok(Game::from_parts(
            self.players.clone(),
            self.actions.clone(),
            nodes,
            outcomes,
            infosets,
            root,
        ))
    }
}

fn unique_names(
    names: &[String],
    duplicate: fn(String) -> GameError,
) -> Result<HashMap<&str, usize>, GameError> {
    let mut index = HashMap::with_capacity(names.len());
    for (i, name) in names.iter().enumerate() {
        if index.insert(name.as_str(), i).is_some() {
            return Err(duplicate(name.clone()));
        }
    }
    Ok(index)
}
