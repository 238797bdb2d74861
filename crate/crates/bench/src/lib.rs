//! Fixed workloads shared by the benchmarks in `benches/`.

use pte_core::oracle::{random_game, random_normal_form, GeneratorParams, Shape};
use pte_core::spacetime::example_setup_spec;
use pte_core::{embed_normal_form, Game, SpacetimeSetup};

/// Generated tie-free games of one shape, seeds `0..count`.
pub fn games(shape: Shape, max_outcomes: usize, count: u64) -> Vec<Game> {
    (0..count)
        .map(|seed| {
            let mut params = GeneratorParams::new(seed, shape);
            params.max_outcomes = max_outcomes;
            params.max_depth = 6;
            random_game(&params).expect("generator bounds are feasible")
        })
        .collect()
}

/// A two-player normal form with `k` strategies each.
pub fn square_normal_form(k: usize, seed: u64) -> Game {
    let mut params = GeneratorParams::new(seed, Shape::NormalForm);
    params.max_players = 2;
    params.max_actions = k;
    params.max_outcomes = k * k;
    // Retry seeds until the matrix is full size.
    let nf = (seed..)
        .map(|s| random_normal_form(&GeneratorParams { seed: s, ..params }).unwrap())
        .find(|nf| nf.players.len() == 2 && nf.strategies.iter().all(|s| s.len() == k))
        .unwrap();
    embed_normal_form(&nf).expect("complete matrix")
}

pub fn example_setup() -> SpacetimeSetup {
    SpacetimeSetup::new(example_setup_spec()).expect("fixture is valid")
}
