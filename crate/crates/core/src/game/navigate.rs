use std::collections::BTreeSet;

use super::{ActionId, Game, GameError, InfosetId, NodeId, Vertex};

/// Where [`Game::action_toward`] starts from.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Anchor {
    Node(NodeId),
    Infoset(InfosetId),
}

impl Game {
    fn check_vertex(&self, vertex: Vertex) -> Result<(), GameError> {
        if self.vertex_exists(vertex) {
            Ok(())
        } else {
            Err(GameError::UnknownId(format!("{vertex:?}")))
        }
    }

    fn check_infoset(&self, cell: InfosetId) -> Result<(), GameError> {
        if cell.0 < self.infosets.len() {
            Ok(())
        } else {
            Err(GameError::UnknownInfoset(format!("{cell:?}")))
        }
    }

    /// Reflexive-transitive closure of the successor relation.
    pub fn descendants(&self, start: Vertex) -> Result<BTreeSet<Vertex>, GameError> {
        self.check_vertex(start)?;
        Ok(self.reachable_from(start))
    }

    /// Union of the descendants of every member of a cell.
    pub fn infoset_descendants(&self, cell: InfosetId) -> Result<BTreeSet<Vertex>, GameError> {
        self.check_infoset(cell)?;
        Ok(self
            .infoset(cell)
            .members
            .iter()
            .flat_map(|&n| self.reachable_from(Vertex::Node(n)))
            .collect())
    }

    /// `node ⊕ action`.
    pub fn successor(&self, node: NodeId, action: ActionId) -> Result<Vertex, GameError> {
        self.check_vertex(Vertex::Node(node))?;
        self.node(node)
            .child(action)
            .ok_or_else(|| GameError::ActionUnavailable {
                node: self.node(node).id.clone(),
                action: self
                    .actions
                    .get(action.0)
                    .cloned()
                    .unwrap_or_else(|| format!("#{}", action.0)),
            })
    }

    /// `cell ⊕ action`: the successors of every member under one action.
    pub fn infoset_successors(
        &self,
        cell: InfosetId,
        action: ActionId,
    ) -> Result<BTreeSet<Vertex>, GameError> {
        self.check_infoset(cell)?;
        self.infoset(cell)
            .members
            .iter()
            .map(|&n| self.successor(n, action))
            .collect()
    }

    /// The unique action at `from` whose subtree contains `target`.
    ///
    /// For a cell, the game must be canonical so at most one member is an
    /// ancestor of `target`.
    pub fn action_toward(&self, from: Anchor, target: Vertex) -> Result<ActionId, GameError> {
        self.check_vertex(target)?;
        let not_below = |from: String| GameError::NotADescendant {
            from,
            target: self.vertex_name(target).to_string(),
        };
        match from {
            Anchor::Node(node) => {
                self.check_vertex(Vertex::Node(node))?;
                self.step_toward(node, target)
                    .ok_or_else(|| not_below(self.node(node).id.clone()))
            }
            Anchor::Infoset(cell) => {
                self.check_infoset(cell)?;
                self.infoset(cell)
                    .members
                    .iter()
                    .find_map(|&n| self.step_toward(n, target))
                    .ok_or_else(|| not_below(self.infoset(cell).label.clone()))
            }
        }
    }

    /// Walks parent links up from `target` until reaching `node`.
    fn step_toward(&self, node: NodeId, target: Vertex) -> Option<ActionId> {
        let mut current = target;
        for _ in 0..=self.nodes.len() {
            let (parent, action) = self.parent(current)?;
            if parent == node {
                return Some(action);
            }
            current = Vertex::Node(parent);
        }
        None
    }
}
