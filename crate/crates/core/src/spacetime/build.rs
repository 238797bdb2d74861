use std::collections::BTreeMap;

use super::{History, SpacetimeError, SpacetimeSetup};
use crate::game::{Game, GameBuilder, PlayerId};
use crate::number::Exact;

impl SpacetimeSetup {
    /// Identifier used for the choice node or outcome of a history.
    pub fn vertex_name(&self, history: &History) -> String {
        format!("({})", self.history_key(history))
    }

    /// Utilities per consistent complete history, checked for totality.
    pub fn resolved_utilities(&self) -> Result<BTreeMap<History, Vec<Exact>>, SpacetimeError> {
        let histories = self.enumerate_histories();
        let mut resolved: BTreeMap<History, Vec<Exact>> = BTreeMap::new();
        for (key, row) in &self.utilities {
            let history = self.parse_history_key(key)?;
            if !histories.complete.contains(&history) {
                return Err(SpacetimeError::UnknownHistory(key.clone()));
            }
            let mut values: Vec<Option<Exact>> = vec![None; self.agents().len()];
            for (agent, value) in row {
                values[agent.0] = Some(value.clone());
            }
            let values = values
                .into_iter()
                .enumerate()
                .map(|(i, v)| {
                    v.ok_or_else(|| SpacetimeError::MissingUtility {
                        history: key.clone(),
                        agent: self.agents()[i].clone(),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            if resolved.insert(history, values).is_some() {
                return Err(SpacetimeError::DuplicateHistory(key.clone()));
            }
        }
        if let Some(missing) = histories
            .complete
            .iter()
            .find(|h| !resolved.contains_key(*h))
        {
            return Err(SpacetimeError::MissingUtility {
                history: self.history_key(missing),
                agent: self.agents().first().cloned().unwrap_or_default(),
            });
        }
        Ok(resolved)
    }

    /// The extensive-form game of the setup: pending incomplete histories are
    /// choice nodes, complete histories are outcomes, and every node waiting
    /// on the same decision point shares that point's information set.
    pub fn build_game(&self) -> Result<Game, SpacetimeError> {
        let report = self.validate_triangle();
        if let Some(first) = report.errors.first() {
            return Err(SpacetimeError::InvalidTriangle(first.message.clone()));
        }
        let utilities = self.resolved_utilities()?;
        let histories = self.enumerate_histories();
        let order = self.total_order();

        let mut b = GameBuilder::new();
        for agent in self.agents() {
            b.player(agent.as_str());
        }
        for action in self.actions() {
            b.action(action.as_str());
        }
        for history in &histories.incomplete {
            let point = self.point(order[history.len()]);
            let moves = point
                .actions
                .iter()
                .map(|&a| {
                    let next = self.successor_hat(history, a)?;
                    Ok((self.actions()[a.0].clone(), self.vertex_name(&next)))
                })
                .collect::<Result<Vec<_>, SpacetimeError>>()?;
            b.node(
                self.vertex_name(history),
                self.agents()[point.agent.0].as_str(),
                point.id.as_str(),
                moves,
            );
        }
        for (history, values) in &utilities {
            b.outcome(
                self.vertex_name(history),
                values
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (self.agents()[PlayerId(i).0].clone(), v.clone())),
            );
        }
        b.root(self.vertex_name(&History::empty()));
        Ok(b.build()?)
    }
}

#[cfg(test)]
mod tests {
    use crate::game::{embed_normal_form, NormalForm, Vertex};
    use crate::number::Exact;
    use crate::spacetime::{example_setup_spec, SetupSpec, SpacetimeError, SpacetimeSetup};

    fn with_utilities(mut spec: SetupSpec) -> SetupSpec {
        let setup = SpacetimeSetup::new(spec.clone()).unwrap();
        let complete = setup.enumerate_histories().complete;
        spec.utilities = complete
            .iter()
            .enumerate()
            .map(|(i, h)| {
                let row = spec
                    .agents
                    .iter()
                    .enumerate()
                    .map(|(j, a)| (a.clone(), Exact::from(((i * (2 * j + 1)) % 97) as i64)))
                    .collect();
                (setup.history_key(h), row)
            })
            .collect();
        spec
    }

    #[test]
    fn example_game_shape() {
        let setup = SpacetimeSetup::new(with_utilities(example_setup_spec())).unwrap();
        let game = setup.build_game().unwrap();
        assert_eq!(game.nodes().len(), 12);
        assert_eq!(game.outcomes().len(), 14);
        assert!(game.validate().is_valid());
        assert!(game.is_canonical());
        let d = game.infoset_by_label("d").unwrap();
        let members: Vec<&str> = game
            .infoset(d)
            .members
            .iter()
            .map(|n| game.node(*n).id.as_str())
            .collect();
        assert_eq!(members, ["(1,3,_)", "(1,4,_)", "(2,_,5)", "(2,_,6)"]);
        assert_eq!(game.root(), game.vertex_by_name("()").unwrap());
        assert!(matches!(game.root(), Vertex::Node(_)));
    }

    #[test]
    fn missing_utility_is_an_error() {
        let mut spec = with_utilities(example_setup_spec());
        spec.utilities.shift_remove("2,_,5,7,10,11");
        let err = SpacetimeSetup::new(spec).unwrap().build_game().unwrap_err();
        assert!(matches!(err, SpacetimeError::MissingUtility { .. }));
    }

    #[test]
    fn utility_for_inconsistent_history_is_an_error() {
        let mut spec = with_utilities(example_setup_spec());
        let row = spec.utilities[0].clone();
        spec.utilities.insert("1,3,5,7,9,_".into(), row);
        let err = SpacetimeSetup::new(spec).unwrap().build_game().unwrap_err();
        assert!(matches!(err, SpacetimeError::UnknownHistory(_)));
    }

    #[test]
    fn invalid_triangle_blocks_construction() {
        let mut spec = with_utilities(example_setup_spec());
        spec.contingency["f"].shift_remove("e");
        assert!(matches!(
            SpacetimeSetup::new(spec).unwrap().build_game(),
            Err(SpacetimeError::InvalidTriangle(_))
        ));
    }

    #[test]
    fn one_point_gives_one_node() {
        let mut spec = example_setup_spec();
        spec.points.truncate(1);
        spec.contingency.clear();
        let setup = SpacetimeSetup::new(with_utilities(spec)).unwrap();
        let game = setup.build_game().unwrap();
        assert_eq!(game.nodes().len(), 1);
        assert_eq!(game.outcomes().len(), 2);
    }

    #[test]
    fn no_points_gives_an_outcome_root() {
        let mut spec = example_setup_spec();
        spec.points.clear();
        spec.contingency.clear();
        let setup = SpacetimeSetup::new(with_utilities(spec)).unwrap();
        let game = setup.build_game().unwrap();
        assert!(matches!(game.root(), Vertex::Outcome(_)));
    }

    #[test]
    fn spacelike_normal_form_matches_embedding() {
        let mut spec = example_setup_spec();
        spec.points.truncate(2);
        spec.points[1].agent = "John".into();
        spec.points[1].coords = vec![Exact::from(50), Exact::from(0)];
        spec.contingency.clear();
        spec.agents = vec!["Peter".into(), "John".into()];
        let mut spec = with_utilities(spec);
        spec.actions.truncate(4);
        let setup = SpacetimeSetup::new(spec.clone()).unwrap();
        let game = setup.build_game().unwrap();

        let mut nf = NormalForm::new(
            spec.agents.clone(),
            vec![vec!["1".into(), "2".into()], vec!["3".into(), "4".into()]],
        );
        for (key, row) in &spec.utilities {
            let profile: Vec<usize> = key
                .split(',')
                .enumerate()
                .map(|(p, a)| nf.strategies[p].iter().position(|x| x == a).unwrap())
                .collect();
            nf.set(&profile, row.values().cloned());
        }
        let mut embedded = embed_normal_form(&nf).unwrap();
        // Cells are labelled by decision point here and by player there.
        embedded = relabel_cells(&embedded, &["a", "b"]);
        assert_eq!(game, embedded);
    }

    fn relabel_cells(game: &crate::game::Game, labels: &[&str]) -> crate::game::Game {
        let doc = crate::formats::game_to_document(game);
        let mut doc = doc;
        for node in &mut doc.nodes {
            let p = game.player_by_name(&node.player).unwrap().0;
            node.infoset = labels[p].to_string();
        }
        crate::formats::game_from_document(doc).unwrap()
    }
}
