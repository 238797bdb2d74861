//! Decision points located in Minkowski spacetime.
//!
//! A [`SpacetimeSetup`] places each decision point at exact coordinates
//! (space first, time last, signature `(n-1, 1)`), attaches contingency
//! coordinates, and assigns utilities to complete histories. From it we
//! derive the causal order, a compatible total order, the consistent
//! histories and finally an extensive-form [`Game`](crate::game::Game).

mod build;
mod geometry;
mod history;
mod triangle;

use std::collections::{BTreeMap, HashMap};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::game::{ActionId, GameError, PlayerId};
use crate::number::Exact;

pub use geometry::{interval_squared, separation, CausalDag, Precedence, Separation};
pub use history::{Histories, History};
pub use triangle::{ContingencyTriangle, TriangleCode, TriangleIssue, TriangleReport};

/// Position of a decision point in declaration order.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointId(pub usize);

/// Placeholder for an unassigned decision in history keys.
pub const BOTTOM: &str = "_";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpacetimeError {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("duplicate {kind} `{id}`")]
    Duplicate { kind: &'static str, id: String },
    #[error("unknown {kind} `{id}`")]
    Unknown { kind: &'static str, id: String },
    #[error("action name `{0}` is reserved or contains a comma")]
    ReservedActionName(String),
    #[error("decision point `{point}` has {got} coordinates, expected {expected}")]
    CoordinateCount {
        point: String,
        expected: usize,
        got: usize,
    },
    #[error("coordinate vectors of length {0} and {1} do not match dimension {2}")]
    DimensionMismatch(usize, usize, usize),
    #[error("decision point `{0}` offers no action")]
    NoActions(String),
    #[error("action `{action}` is not available at decision point `{point}`")]
    ActionUnavailable { point: String, action: String },
    #[error("contingency coordinates are inconsistent: {0}")]
    InvalidTriangle(String),
    #[error("history `{0}` is not a consistent history awaiting a decision")]
    NotPending(String),
    #[error("history key `{key}` is malformed: {reason}")]
    BadHistoryKey { key: String, reason: String },
    #[error("utility given for `{0}`, which is not a consistent complete history")]
    UnknownHistory(String),
    #[error("history `{0}` is given utilities twice")]
    DuplicateHistory(String),
    #[error("no utility for agent `{agent}` at history `{history}`")]
    MissingUtility { history: String, agent: String },
    #[error(transparent)]
    Game(#[from] GameError),
}

/// Serializable form of a decision point, using names.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    pub id: String,
    pub agent: String,
    pub coords: Vec<Exact>,
    pub actions: Vec<String>,
}

/// Serializable form of a whole setup, using names.
///
/// `contingency` maps a point to the actions required at earlier points;
/// omitted entries mean ⊥. `utilities` is keyed by history key
/// (see [`SpacetimeSetup::history_key`]).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetupSpec {
    pub dimension: usize,
    pub agents: Vec<String>,
    pub actions: Vec<String>,
    pub points: Vec<PointSpec>,
    #[serde(default)]
    pub contingency: IndexMap<String, IndexMap<String, String>>,
    #[serde(default)]
    pub utilities: IndexMap<String, IndexMap<String, Exact>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecisionPoint {
    pub id: String,
    pub agent: PlayerId,
    pub coords: Vec<Exact>,
    pub actions: Vec<ActionId>,
}

impl DecisionPoint {
    pub fn time(&self) -> &Exact {
        self.coords.last().expect("dimension >= 1")
    }

    pub fn space(&self) -> &[Exact] {
        &self.coords[..self.coords.len() - 1]
    }
}

/// A checked spacetime setup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpacetimeSetup {
    dimension: usize,
    agents: Vec<String>,
    actions: Vec<String>,
    points: Vec<DecisionPoint>,
    /// Per point: required action at each referenced point.
    contingency: Vec<BTreeMap<PointId, ActionId>>,
    utilities: Vec<(String, Vec<(PlayerId, Exact)>)>,
}

impl SpacetimeSetup {
    /// Resolves names and checks per-point data. Contingency consistency is
    /// checked separately by [`SpacetimeSetup::validate_triangle`].
    pub fn new(spec: SetupSpec) -> Result<Self, SpacetimeError> {
        if spec.dimension == 0 {
            return Err(SpacetimeError::ZeroDimension);
        }
        let agents = index_names(&spec.agents, "agent")?;
        let actions = index_names(&spec.actions, "action")?;
        for name in &spec.actions {
            if name.is_empty() || name == BOTTOM || name.contains(',') {
                return Err(SpacetimeError::ReservedActionName(name.clone()));
            }
        }
        let point_names: Vec<String> = spec.points.iter().map(|p| p.id.clone()).collect();
        let point_ids = index_names(&point_names, "decision point")?;

        let mut points = Vec::with_capacity(spec.points.len());
        for p in &spec.points {
            let agent = lookup(&agents, &p.agent, "agent")?;
            if p.coords.len() != spec.dimension {
                return Err(SpacetimeError::CoordinateCount {
                    point: p.id.clone(),
                    expected: spec.dimension,
                    got: p.coords.len(),
                });
            }
            if p.actions.is_empty() {
                return Err(SpacetimeError::NoActions(p.id.clone()));
            }
            let mut point_actions = p
                .actions
                .iter()
                .map(|a| lookup(&actions, a, "action").map(ActionId))
                .collect::<Result<Vec<_>, _>>()?;
            point_actions.sort();
            if point_actions.windows(2).any(|w| w[0] == w[1]) {
                return Err(SpacetimeError::Duplicate {
                    kind: "action at point",
                    id: p.id.clone(),
                });
            }
            points.push(DecisionPoint {
                id: p.id.clone(),
                agent: PlayerId(agent),
                coords: p.coords.clone(),
                actions: point_actions,
            });
        }

        let mut contingency = vec![BTreeMap::new(); points.len()];
        for (point, row) in &spec.contingency {
            let k = lookup(&point_ids, point, "decision point")?;
            for (earlier, action) in row {
                let l = lookup(&point_ids, earlier, "decision point")?;
                let a = lookup(&actions, action, "action")?;
                contingency[k].insert(PointId(l), ActionId(a));
            }
        }

        let mut utilities = Vec::with_capacity(spec.utilities.len());
        for (key, row) in &spec.utilities {
            let mut values = Vec::with_capacity(row.len());
            for (agent, value) in row {
                values.push((PlayerId(lookup(&agents, agent, "agent")?), value.clone()));
            }
            utilities.push((key.clone(), values));
        }

        Ok(SpacetimeSetup {
            dimension: spec.dimension,
            agents: spec.agents,
            actions: spec.actions,
            points,
            contingency,
            utilities,
        })
    }

    /// Inverse of [`SpacetimeSetup::new`].
    pub fn to_spec(&self) -> SetupSpec {
        SetupSpec {
            dimension: self.dimension,
            agents: self.agents.clone(),
            actions: self.actions.clone(),
            points: self
                .points
                .iter()
                .map(|p| PointSpec {
                    id: p.id.clone(),
                    agent: self.agents[p.agent.0].clone(),
                    coords: p.coords.clone(),
                    actions: p
                        .actions
                        .iter()
                        .map(|a| self.actions[a.0].clone())
                        .collect(),
                })
                .collect(),
            contingency: self
                .contingency
                .iter()
                .enumerate()
                .filter(|(_, row)| !row.is_empty())
                .map(|(k, row)| {
                    (
                        self.points[k].id.clone(),
                        row.iter()
                            .map(|(l, a)| (self.points[l.0].id.clone(), self.actions[a.0].clone()))
                            .collect(),
                    )
                })
                .collect(),
            utilities: self
                .utilities
                .iter()
                .map(|(key, row)| {
                    (
                        key.clone(),
                        row.iter()
                            .map(|(p, v)| (self.agents[p.0].clone(), v.clone()))
                            .collect(),
                    )
                })
                .collect(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn agents(&self) -> &[String] {
        &self.agents
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    pub fn points(&self) -> &[DecisionPoint] {
        &self.points
    }

    pub fn point(&self, id: PointId) -> &DecisionPoint {
        &self.points[id.0]
    }

    pub fn point_by_id(&self, id: &str) -> Option<PointId> {
        self.points.iter().position(|p| p.id == id).map(PointId)
    }

    pub fn action_by_name(&self, name: &str) -> Option<ActionId> {
        self.actions.iter().position(|a| a == name).map(ActionId)
    }

    /// Required actions recorded for `point`, keyed by the referenced point.
    pub fn contingency_of(&self, point: PointId) -> &BTreeMap<PointId, ActionId> {
        &self.contingency[point.0]
    }
}

fn index_names<'a>(
    names: &'a [String],
    kind: &'static str,
) -> Result<HashMap<&'a str, usize>, SpacetimeError> {
    let mut index = HashMap::with_capacity(names.len());
    for (i, name) in names.iter().enumerate() {
        if index.insert(name.as_str(), i).is_some() {
            return Err(SpacetimeError::Duplicate {
                kind,
                id: name.clone(),
            });
        }
    }
    Ok(index)
}

fn lookup(
    index: &HashMap<&str, usize>,
    name: &str,
    kind: &'static str,
) -> Result<usize, SpacetimeError> {
    index
        .get(name)
        .copied()
        .ok_or_else(|| SpacetimeError::Unknown {
            kind,
            id: name.to_string(),
        })
}

/// The six-point setup with four agents used throughout the tests.
///
/// Coordinates (x, t) are synthetic: they realize the causal relations
/// a≺b, a≺c, a≺f, c≺f, d≺e, d≺f, e≺f with every other pair spacelike, and
/// sorting by time yields a, b, c, d, e, f. Peter owns a and f, Mary owns
/// b and c, John owns d and Helen owns e. Mary's b and c are spacelike, so
/// [`SpacetimeSetup::spacelike_agent_check`] is false here even though the
/// two points never occur in the same history.
pub fn example_setup_spec() -> SetupSpec {
    let point = |id: &str, agent: &str, x: i64, t: i64, actions: &[&str]| PointSpec {
        id: id.into(),
        agent: agent.into(),
        coords: vec![Exact::from(x), Exact::from(t)],
        actions: actions.iter().map(|a| a.to_string()).collect(),
    };
    let row = |pairs: &[(&str, &str)]| -> IndexMap<String, String> {
        pairs
            .iter()
            .map(|(p, a)| (p.to_string(), a.to_string()))
            .collect()
    };
    let mut contingency = IndexMap::new();
    contingency.insert("b".to_string(), row(&[("a", "1")]));
    contingency.insert("c".to_string(), row(&[("a", "2")]));
    contingency.insert("e".to_string(), row(&[("d", "7")]));
    contingency.insert(
        "f".to_string(),
        row(&[("a", "2"), ("c", "5"), ("d", "7"), ("e", "10")]),
    );
    SetupSpec {
        dimension: 2,
        agents: ["Peter", "Mary", "John", "Helen"]
            .map(String::from)
            .to_vec(),
        actions: (1..=13).map(|a| a.to_string()).collect(),
        points: vec![
            point("a", "Peter", 0, 0, &["1", "2"]),
            point("b", "Mary", -3, 4, &["3", "4"]),
            point("c", "Mary", 3, 5, &["5", "6"]),
            point("d", "John", 40, 6, &["7", "8"]),
            point("e", "Helen", 40, 8, &["9", "10"]),
            point("f", "Peter", 22, 27, &["11", "12", "13"]),
        ],
        contingency,
        utilities: IndexMap::new(),
    }
}
