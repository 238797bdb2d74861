use std::collections::BTreeMap;

use super::{Game, GameBuilder, GameError};
use crate::number::Exact;

/// A game in normal form: one action list per player and a payoff vector per
/// pure profile. Profiles are written as per-player action indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    pub players: Vec<String>,
    pub strategies: Vec<Vec<String>>,
    pub payoffs: BTreeMap<Vec<usize>, Vec<Exact>>,
}

impl NormalForm {
    pub fn new(players: Vec<String>, strategies: Vec<Vec<String>>) -> Self {
        NormalForm {
            players,
            strategies,
            payoffs: BTreeMap::new(),
        }
    }

    pub fn set<I>(&mut self, profile: &[usize], payoffs: I)
    where
        I: IntoIterator,
        I::Item: Into<Exact>,
    {
        self.payoffs.insert(
            profile.to_vec(),
            payoffs.into_iter().map(Into::into).collect(),
        );
    }

    pub fn payoff(&self, profile: &[usize]) -> Option<&[Exact]> {
        self.payoffs.get(profile).map(Vec::as_slice)
    }

    /// All pure profiles in lexicographic order.
    pub fn profiles(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for actions in &self.strategies {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..actions.len()).map(move |a| {
                        let mut p = prefix.clone();
                        p.push(a);
                        p
                    })
                })
                .collect();
        }
        out
    }

    /// Identifier of the choice node or outcome reached by a profile prefix.
    pub fn vertex_name(&self, prefix: &[usize]) -> String {
        let names: Vec<&str> = prefix
            .iter()
            .enumerate()
            .map(|(p, &a)| self.strategies[p][a].as_str())
            .collect();
        format!("({})", names.join(","))
    }
}

/// Lays a normal form out as a tree: players move in declaration order and
/// each player's nodes form a single information set.
pub fn embed_normal_form(nf: &NormalForm) -> Result<Game, GameError> {
    if nf.players.is_empty() {
        return Err(GameError::MalformedNormalForm("no players".into()));
    }
    if nf.strategies.len() != nf.players.len() {
        return Err(GameError::MalformedNormalForm(format!(
            "{} players but {} action lists",
            nf.players.len(),
            nf.strategies.len()
        )));
    }
    if let Some(p) = nf.strategies.iter().position(Vec::is_empty) {
        return Err(GameError::MalformedNormalForm(format!(
            "player `{}` has no actions",
            nf.players[p]
        )));
    }

    let mut b = GameBuilder::new();
    for p in &nf.players {
        b.player(p.as_str());
    }
    for actions in &nf.strategies {
        for a in actions {
            b.ensure_action(a);
        }
    }

    let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
    for (p, actions) in nf.strategies.iter().enumerate() {
        let last = p + 1 == nf.players.len();
        let mut next = Vec::with_capacity(frontier.len() * actions.len());
        for prefix in &frontier {
            let mut moves = Vec::with_capacity(actions.len());
            for (a, name) in actions.iter().enumerate() {
                let mut child = prefix.clone();
                child.push(a);
                moves.push((name.clone(), nf.vertex_name(&child)));
                next.push(child);
            }
            b.node(
                nf.vertex_name(prefix),
                nf.players[p].as_str(),
                nf.players[p].as_str(),
                moves,
            );
        }
        if last {
            for profile in &next {
                let payoffs = nf.payoff(profile).ok_or_else(|| {
                    GameError::MissingProfile(
                        profile
                            .iter()
                            .enumerate()
                            .map(|(p, &a)| nf.strategies[p][a].clone())
                            .collect(),
                    )
                })?;
                if payoffs.len() != nf.players.len() {
                    return Err(GameError::MalformedNormalForm(format!(
                        "profile {} has {} payoffs for {} players",
                        nf.vertex_name(profile),
                        payoffs.len(),
                        nf.players.len()
                    )));
                }
                b.outcome(
                    nf.vertex_name(profile),
                    nf.players.iter().cloned().zip(payoffs.iter().cloned()),
                );
            }
        }
        frontier = next;
    }
    b.root(nf.vertex_name(&[]));
    b.build()
}
