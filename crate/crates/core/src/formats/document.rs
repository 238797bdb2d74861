use std::fmt;
use std::marker::PhantomData;

use indexmap::IndexMap;
use serde::de::{MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize};

use super::{from_json, ParseCode, ParseError};
use crate::game::{Game, GameBuilder, GameError};
use crate::number::Exact;

/// An ordered string-keyed map whose deserializer rejects repeated keys.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct UniqueMap<V>(pub IndexMap<String, V>);

impl<'de, V: Deserialize<'de>> Deserialize<'de> for UniqueMap<V> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct UniqueVisitor<V>(PhantomData<V>);

        impl<'de, V: Deserialize<'de>> Visitor<'de> for UniqueVisitor<V> {
            type Value = UniqueMap<V>;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map with distinct keys")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<Self::Value, A::Error> {
                let mut map = IndexMap::new();
                while let Some((key, value)) = access.next_entry::<String, V>()? {
                    if map.contains_key(&key) {
                        return Err(serde::de::Error::custom(format!("duplicate key `{key}`")));
                    }
                    map.insert(key, value);
                }
                Ok(UniqueMap(map))
            }
        }

        deserializer.deserialize_map(UniqueVisitor(PhantomData))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeDocument {
    pub id: String,
    pub player: String,
    pub infoset: String,
    /// Action name to child id.
    pub moves: UniqueMap<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutcomeDocument {
    pub id: String,
    /// Player name to payoff.
    pub payoffs: UniqueMap<Exact>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameDocument {
    pub players: Vec<String>,
    pub actions: Vec<String>,
    pub nodes: Vec<NodeDocument>,
    pub outcomes: Vec<OutcomeDocument>,
    pub root: String,
}

pub fn game_to_document(game: &Game) -> GameDocument {
    GameDocument {
        players: game.players().to_vec(),
        actions: game.actions().to_vec(),
        nodes: game
            .nodes()
            .iter()
            .map(|n| NodeDocument {
                id: n.id.clone(),
                player: game.player_name(n.player).to_string(),
                infoset: game.infoset(n.infoset).label.clone(),
                moves: UniqueMap(
                    n.moves
                        .iter()
                        .map(|&(a, c)| {
                            (
                                game.action_name(a).to_string(),
                                game.vertex_name(c).to_string(),
                            )
                        })
                        .collect(),
                ),
            })
            .collect(),
        outcomes: game
            .outcomes()
            .iter()
            .map(|z| OutcomeDocument {
                id: z.id.clone(),
                payoffs: UniqueMap(
                    game.players()
                        .iter()
                        .cloned()
                        .zip(z.payoffs.iter().cloned())
                        .collect(),
                ),
            })
            .collect(),
        root: game.vertex_name(game.root()).to_string(),
    }
}

pub fn game_from_document(doc: GameDocument) -> Result<Game, GameError> {
    let mut b = GameBuilder::new();
    for p in doc.players {
        b.player(p);
    }
    for a in doc.actions {
        b.action(a);
    }
    for n in doc.nodes {
        b.node(n.id, n.player, n.infoset, n.moves.0);
    }
    for z in doc.outcomes {
        b.outcome(z.id, z.payoffs.0);
    }
    b.root(doc.root);
    b.build()
}

/// Parses a game document. Structural checks beyond name resolution are
/// left to [`Game::validate`].
pub fn parse_game(text: &str) -> Result<Game, ParseError> {
    let doc: GameDocument = from_json(text)?;
    game_from_document(doc).map_err(|e| {
        let code = match e {
            GameError::DuplicateId(_)
            | GameError::DuplicatePlayer(_)
            | GameError::DuplicateAction(_) => ParseCode::DuplicateId,
            _ => ParseCode::Invalid,
        };
        ParseError::new(code, e.to_string())
    })
}

pub fn game_to_json(game: &Game) -> String {
    serde_json::to_string_pretty(&game_to_document(game)).expect("game serializes")
}
