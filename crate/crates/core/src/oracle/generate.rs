use indexmap::IndexMap;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::game::{Game, GameBuilder, NormalForm};
use crate::number::Exact;
use crate::spacetime::{PointSpec, SetupSpec, SpacetimeSetup};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    NormalForm,
    PerfectInfo,
    GeneralImperfect,
    Spacetime,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct GeneratorParams {
    pub seed: u64,
    pub max_players: usize,
    pub max_depth: usize,
    pub max_actions: usize,
    pub max_outcomes: usize,
    pub no_ties: bool,
    pub shape: Shape,
}

impl GeneratorParams {
    pub fn new(seed: u64, shape: Shape) -> Self {
        GeneratorParams {
            seed,
            max_players: 3,
            max_depth: 4,
            max_actions: 3,
            max_outcomes: 20,
            no_ties: true,
            shape,
        }
    }

    fn check(&self) -> Result<(), GenerationError> {
        let bounds = [
            ("max_players", self.max_players),
            ("max_depth", self.max_depth),
            ("max_actions", self.max_actions),
            ("max_outcomes", self.max_outcomes),
        ];
        if let Some((name, _)) = bounds.iter().find(|(_, v)| *v == 0) {
            return Err(GenerationError::Infeasible(format!(
                "{name} must be positive"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenerationError {
    #[error("infeasible generator bounds: {0}")]
    Infeasible(String),
    #[error("generated instance was rejected: {0}")]
    Rejected(String),
}

/// Per-player payoffs for `count` outcomes: permutations of 1..=count when
/// ties are forbidden, small random integers otherwise.
fn payoff_columns(
    rng: &mut ChaCha8Rng,
    players: usize,
    count: usize,
    no_ties: bool,
) -> Vec<Vec<i64>> {
    (0..players)
        .map(|_| {
            if no_ties {
                let mut values: Vec<i64> = (1..=count as i64).collect();
                values.shuffle(rng);
                values
            } else {
                let top = (count as i64 / 2).max(2);
                (0..count).map(|_| rng.gen_range(1..=top)).collect()
            }
        })
        .collect()
}

fn player_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("p{i}")).collect()
}

pub fn random_normal_form(params: &GeneratorParams) -> Result<NormalForm, GenerationError> {
    params.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let players = rng.gen_range(1..=params.max_players);
    let mut counts: Vec<usize> = (0..players)
        .map(|_| rng.gen_range(1..=params.max_actions))
        .collect();
    while counts.iter().product::<usize>() > params.max_outcomes {
        let shrinkable: Vec<usize> = (0..players).filter(|&p| counts[p] > 1).collect();
        let p = *shrinkable
            .choose(&mut rng)
            .expect("product above 1 has a factor above 1");
        counts[p] -= 1;
    }
    let strategies = counts
        .iter()
        .enumerate()
        .map(|(p, &k)| {
            (0..k)
                .map(|a| format!("{}{}", (b'a' + p as u8 % 26) as char, a))
                .collect()
        })
        .collect();
    let mut nf = NormalForm::new(player_names(players), strategies);
    let profiles = nf.profiles();
    let columns = payoff_columns(&mut rng, players, profiles.len(), params.no_ties);
    for (i, profile) in profiles.iter().enumerate() {
        nf.set(profile, columns.iter().map(|c| c[i]));
    }
    Ok(nf)
}

/// Shape of a random tree before players, cells and payoffs are assigned.
struct Skeleton {
    /// Children of each vertex; empty means a leaf.
    children: Vec<Vec<usize>>,
}

impl Skeleton {
    fn grow(rng: &mut ChaCha8Rng, params: &GeneratorParams) -> Skeleton {
        let target = rng.gen_range(1..=params.max_outcomes);
        let mut children: Vec<Vec<usize>> = vec![Vec::new()];
        let mut depth = vec![0usize];
        let mut leaves = 1;
        loop {
            let open: Vec<usize> = (0..children.len())
                .filter(|&v| children[v].is_empty() && depth[v] < params.max_depth)
                .collect();
            if open.is_empty() {
                break;
            }
            let room = target + 1 - leaves;
            // A single-action node keeps the leaf count, so it is allowed
            // occasionally even when no room is left.
            let k = if room >= 2 && params.max_actions >= 2 && rng.gen_bool(0.9) {
                rng.gen_range(2..=params.max_actions.min(room))
            } else if rng.gen_bool(0.1) {
                1
            } else {
                break;
            };
            let v = *open.choose(rng).unwrap();
            for _ in 0..k {
                children.push(Vec::new());
                depth.push(depth[v] + 1);
                let child = children.len() - 1;
                children[v].push(child);
            }
            leaves += k - 1;
        }
        Skeleton { children }
    }

    fn internal(&self) -> Vec<usize> {
        (0..self.children.len())
            .filter(|&v| !self.children[v].is_empty())
            .collect()
    }

    fn leaves(&self) -> Vec<usize> {
        (0..self.children.len())
            .filter(|&v| self.children[v].is_empty())
            .collect()
    }

    fn name(&self, v: usize) -> String {
        if self.children[v].is_empty() {
            format!("z{v}")
        } else {
            format!("n{v}")
        }
    }

    /// Builds a game with the given player and cell label for each internal
    /// vertex, payoffs assigned to leaves in vertex order.
    fn to_game(
        &self,
        players: &[String],
        owner: &[usize],
        cell: &[String],
        payoffs: &[Vec<i64>],
    ) -> Result<Game, GenerationError> {
        let mut b = GameBuilder::new();
        for p in players {
            b.player(p.as_str());
        }
        let width = self.children.iter().map(Vec::len).max().unwrap_or(0);
        for a in 0..width {
            b.action(format!("a{a}"));
        }
        for (i, v) in self.internal().into_iter().enumerate() {
            let moves: Vec<(String, String)> = self.children[v]
                .iter()
                .enumerate()
                .map(|(a, &c)| (format!("a{a}"), self.name(c)))
                .collect();
            b.node(
                self.name(v),
                players[owner[i]].as_str(),
                cell[i].as_str(),
                moves,
            );
        }
        for (i, v) in self.leaves().into_iter().enumerate() {
            b.outcome(
                self.name(v),
                players
                    .iter()
                    .zip(payoffs)
                    .map(|(p, col)| (p.clone(), Exact::from(col[i]))),
            );
        }
        b.root(self.name(0));
        b.build()
            .map_err(|e| GenerationError::Rejected(e.to_string()))
    }
}

/// A tree whose same-player, same-width nodes are randomly merged into cells.
/// The result is valid but usually neither canonical nor of perfect recall.
pub fn random_raw_imperfect(params: &GeneratorParams) -> Result<Game, GenerationError> {
    params.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let skeleton = Skeleton::grow(&mut rng, params);
    let players = player_names(rng.gen_range(1..=params.max_players));
    let internal = skeleton.internal();
    let owner: Vec<usize> = internal
        .iter()
        .map(|_| rng.gen_range(0..players.len()))
        .collect();
    let mut groups: IndexMap<(usize, usize), Vec<usize>> = IndexMap::new();
    for (i, &v) in internal.iter().enumerate() {
        groups
            .entry((owner[i], skeleton.children[v].len()))
            .or_default()
            .push(i);
    }
    let mut cell = vec![String::new(); internal.len()];
    for ((p, k), members) in groups {
        let parts = rng.gen_range(1..=members.len());
        for i in members {
            cell[i] = format!("I{}_{}_{}", p + 1, k, rng.gen_range(0..parts));
        }
    }
    let leaves = skeleton.leaves().len();
    let payoffs = payoff_columns(&mut rng, players.len(), leaves, params.no_ties);
    skeleton.to_game(&players, &owner, &cell, &payoffs)
}

fn random_perfect_info(params: &GeneratorParams) -> Result<Game, GenerationError> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let skeleton = Skeleton::grow(&mut rng, params);
    let players = player_names(rng.gen_range(1..=params.max_players));
    let internal = skeleton.internal();
    let owner: Vec<usize> = internal
        .iter()
        .map(|_| rng.gen_range(0..players.len()))
        .collect();
    let cell: Vec<String> = internal.iter().map(|&v| skeleton.name(v)).collect();
    let payoffs = payoff_columns(
        &mut rng,
        players.len(),
        skeleton.leaves().len(),
        params.no_ties,
    );
    skeleton.to_game(&players, &owner, &cell, &payoffs)
}

/// Reassigns payoffs after canonicalization so that no-tie games use exactly
/// the values 1..=|Z|.
fn with_fresh_payoffs(
    game: &Game,
    rng: &mut ChaCha8Rng,
    no_ties: bool,
) -> Result<Game, GenerationError> {
    let columns = payoff_columns(rng, game.players().len(), game.outcomes().len(), no_ties);
    let mut b = GameBuilder::new();
    for p in game.players() {
        b.player(p.as_str());
    }
    for a in game.actions() {
        b.action(a.as_str());
    }
    for node in game.nodes() {
        let moves: Vec<(String, String)> = node
            .moves
            .iter()
            .map(|&(a, c)| {
                (
                    game.action_name(a).to_string(),
                    game.vertex_name(c).to_string(),
                )
            })
            .collect();
        b.node(
            node.id.as_str(),
            game.player_name(node.player),
            game.infoset(node.infoset).label.as_str(),
            moves,
        );
    }
    for (i, z) in game.outcomes().iter().enumerate() {
        b.outcome(
            z.id.as_str(),
            game.players()
                .iter()
                .zip(&columns)
                .map(|(p, col)| (p.clone(), Exact::from(col[i]))),
        );
    }
    b.root(game.vertex_name(game.root()));
    b.build()
        .map_err(|e| GenerationError::Rejected(e.to_string()))
}

/// A random 2-dimensional setup with a valid contingency triangle and
/// utilities for every consistent complete history.
pub fn random_setup(params: &GeneratorParams) -> Result<SetupSpec, GenerationError> {
    params.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut points = rng.gen_range(1..=params.max_depth.min(6));
    for _ in 0..200 {
        if let Some(spec) = try_setup(&mut rng, params, points)? {
            return Ok(spec);
        }
        if points > 1 && rng.gen_bool(0.2) {
            points -= 1;
        }
    }
    Err(GenerationError::Infeasible(format!(
        "no setup with at most {} complete histories",
        params.max_outcomes
    )))
}

fn try_setup(
    rng: &mut ChaCha8Rng,
    params: &GeneratorParams,
    points: usize,
) -> Result<Option<SetupSpec>, GenerationError> {
    let agents = player_names(rng.gen_range(1..=params.max_players.min(points)));
    let actions: Vec<String> = (0..params.max_actions).map(|a| format!("x{a}")).collect();
    let point_specs: Vec<PointSpec> = (0..points)
        .map(|i| {
            let k = rng.gen_range(1..=params.max_actions);
            PointSpec {
                id: format!("q{i}"),
                agent: agents[rng.gen_range(0..agents.len())].clone(),
                coords: vec![
                    Exact::from(rng.gen_range(0..=4)),
                    Exact::from(rng.gen_range(0..=4)),
                ],
                actions: actions[..k].to_vec(),
            }
        })
        .collect();
    let mut spec = SetupSpec {
        dimension: 2,
        agents,
        actions,
        points: point_specs,
        contingency: IndexMap::new(),
        utilities: IndexMap::new(),
    };
    let rejected = |e: crate::spacetime::SpacetimeError| GenerationError::Rejected(e.to_string());
    let bare = SpacetimeSetup::new(spec.clone()).map_err(rejected)?;
    let order = bare.total_order();
    let dag = bare.causal_dag();

    // Fill rows along the order; row k inherits from every earlier timelike
    // point compatible with it, which keeps the triangle valid.
    let mut rows: Vec<Vec<Option<usize>>> = Vec::new();
    for k in 0..order.len() {
        let mut row: Vec<Option<usize>> = vec![None; k];
        for l in 0..k {
            if !dag.precedes(order[l], order[k]) {
                continue;
            }
            let compatible = rows[l]
                .iter()
                .enumerate()
                .all(|(j, r)| r.is_none() || *r == row[j]);
            if compatible {
                let offered = spec.points[order[l].0].actions.len();
                row[l] = Some(rng.gen_range(0..offered));
            }
        }
        rows.push(row);
    }
    for (k, row) in rows.iter().enumerate() {
        let entries: IndexMap<String, String> = row
            .iter()
            .enumerate()
            .filter_map(|(l, a)| {
                a.map(|a| {
                    let earlier = &spec.points[order[l].0];
                    (earlier.id.clone(), earlier.actions[a].clone())
                })
            })
            .collect();
        if !entries.is_empty() {
            spec.contingency
                .insert(spec.points[order[k].0].id.clone(), entries);
        }
    }

    let setup = SpacetimeSetup::new(spec.clone()).map_err(rejected)?;
    let report = setup.validate_triangle();
    if let Some(issue) = report.errors.first() {
        return Err(GenerationError::Rejected(issue.message.clone()));
    }
    let complete = setup.enumerate_histories().complete;
    if complete.len() > params.max_outcomes {
        return Ok(None);
    }
    let columns = payoff_columns(rng, spec.agents.len(), complete.len(), params.no_ties);
    for (i, h) in complete.iter().enumerate() {
        let row = spec
            .agents
            .iter()
            .zip(&columns)
            .map(|(agent, col)| (agent.clone(), Exact::from(col[i])))
            .collect();
        spec.utilities.insert(setup.history_key(h), row);
    }
    Ok(Some(spec))
}

/// A valid canonical game of the requested shape, deterministic per seed.
pub fn random_game(params: &GeneratorParams) -> Result<Game, GenerationError> {
    params.check()?;
    match params.shape {
        Shape::NormalForm => {
            let nf = random_normal_form(params)?;
            crate::game::embed_normal_form(&nf)
                .map_err(|e| GenerationError::Rejected(e.to_string()))
        }
        Shape::PerfectInfo => random_perfect_info(params),
        Shape::GeneralImperfect => {
            let raw = random_raw_imperfect(params)?;
            let canonical = raw
                .canonicalize()
                .map_err(|e| GenerationError::Rejected(e.to_string()))?;
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed ^ 0x9e37_79b9_7f4a_7c15);
            with_fresh_payoffs(&canonical, &mut rng, params.no_ties)
        }
        Shape::Spacetime => {
            let spec = random_setup(params)?;
            let setup =
                SpacetimeSetup::new(spec).map_err(|e| GenerationError::Rejected(e.to_string()))?;
            setup
                .build_game()
                .map_err(|e| GenerationError::Rejected(e.to_string()))
        }
    }
}
