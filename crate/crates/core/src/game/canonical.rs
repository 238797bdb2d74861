use std::collections::HashMap;

use super::{ActionId, ChoiceNode, Game, GameError, Infoset, InfosetId, NodeId, OutcomeId, Vertex};

impl Game {
    /// Prunes every node that lies below a member of its own cell, replacing
    /// it by the subtree its ancestor's choice leads to.
    ///
    /// One root-to-leaf pass suffices: the walk carries the action taken at
    /// each cell already on the path, so any later node of that cell is
    /// skipped straight to the matching child. Surviving vertices keep their
    /// identifiers and relative order.
    pub fn canonicalize(&self) -> Result<Game, GameError> {
        let report = self.validate();
        if let Some(first) = report.errors.first() {
            return Err(GameError::Invalid(format!(
                "{}: {}",
                first.code, first.message
            )));
        }

        let mut rewired: HashMap<NodeId, Vec<(ActionId, Vertex)>> = HashMap::new();
        let mut on_path: HashMap<InfosetId, ActionId> = HashMap::new();
        let root = self.prune(self.root, &mut on_path, &mut rewired);

        let mut node_map: HashMap<NodeId, NodeId> = HashMap::new();
        for n in self.node_ids().filter(|n| rewired.contains_key(n)) {
            node_map.insert(n, NodeId(node_map.len()));
        }
        let mut outcome_map: HashMap<OutcomeId, OutcomeId> = HashMap::new();
        for moves in rewired.values() {
            for (_, child) in moves {
                if let Vertex::Outcome(z) = child {
                    outcome_map.insert(*z, *z);
                }
            }
        }
        if let Vertex::Outcome(z) = root {
            outcome_map.insert(z, z);
        }
        let mut kept_outcomes: Vec<OutcomeId> = outcome_map.keys().copied().collect();
        kept_outcomes.sort();
        for (i, z) in kept_outcomes.iter().enumerate() {
            outcome_map.insert(*z, OutcomeId(i));
        }
        let remap = |v: Vertex| match v {
            Vertex::Node(n) => Vertex::Node(node_map[&n]),
            Vertex::Outcome(z) => Vertex::Outcome(outcome_map[&z]),
        };

        let mut infosets: Vec<Infoset> = Vec::new();
        let mut cell_map: HashMap<InfosetId, InfosetId> = HashMap::new();
        let mut nodes = Vec::with_capacity(node_map.len());
        for old in self.node_ids().filter(|n| node_map.contains_key(n)) {
            let node = self.node(old);
            let cell = *cell_map.entry(node.infoset).or_insert_with(|| {
                infosets.push(Infoset {
                    label: self.infoset(node.infoset).label.clone(),
                    members: Vec::new(),
                });
                InfosetId(infosets.len() - 1)
            });
            infosets[cell.0].members.push(NodeId(nodes.len()));
            nodes.push(ChoiceNode {
                id: node.id.clone(),
                player: node.player,
                infoset: cell,
                moves: rewired[&old].iter().map(|&(a, c)| (a, remap(c))).collect(),
            });
        }
        let outcomes = kept_outcomes
            .iter()
            .map(|z| self.outcome(*z).clone())
            .collect();

        Ok(Game::from_parts(
            self.players.clone(),
            self.actions.clone(),
            nodes,
            outcomes,
            infosets,
            remap(root),
        ))
    }

    fn prune(
        &self,
        vertex: Vertex,
        on_path: &mut HashMap<InfosetId, ActionId>,
        rewired: &mut HashMap<NodeId, Vec<(ActionId, Vertex)>>,
    ) -> Vertex {
        let Vertex::Node(n) = vertex else {
            return vertex;
        };
        let node = self.node(n);
        if let Some(&action) = on_path.get(&node.infoset) {
            let child = node.child(action).expect("cell members share actions");
            return self.prune(child, on_path, rewired);
        }
        let mut moves = Vec::with_capacity(node.moves.len());
        for &(action, child) in &node.moves {
            on_path.insert(node.infoset, action);
            moves.push((action, self.prune(child, on_path, rewired)));
            on_path.remove(&node.infoset);
        }
        rewired.insert(n, moves);
        vertex
    }
}
