use crate::game::{embed_normal_form, Game, NormalForm};
use crate::solver::Status;

use super::{naive_solve, GenerationError, GeneratorParams};

/// Rearranges `v` into the next permutation in lexicographic order, returning
/// false (and leaving `v` sorted) after the last one.
fn next_permutation(v: &mut [i64]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        v.reverse();
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Every no-tie normal form with the given strategy counts, payoffs drawn from
/// 1..=|Z| per player, in lexicographic order of the per-player permutations
/// (first player outermost).
pub fn no_tie_normal_forms(dims: &[usize]) -> impl Iterator<Item = NormalForm> {
    let players: Vec<String> = (1..=dims.len()).map(|i| format!("p{i}")).collect();
    let strategies: Vec<Vec<String>> = dims
        .iter()
        .enumerate()
        .map(|(p, &k)| {
            (0..k)
                .map(|a| format!("{}{}", (b'a' + p as u8) as char, a))
                .collect()
        })
        .collect();
    let template = NormalForm::new(players, strategies);
    let profiles = template.profiles();
    let size = profiles.len() as i64;
    let mut perms: Vec<Vec<i64>> = vec![(1..=size).collect(); dims.len()];
    let mut done = dims.is_empty();
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let mut nf = template.clone();
        for (i, profile) in profiles.iter().enumerate() {
            nf.set(profile, perms.iter().map(|perm| perm[i]));
        }
        // odometer, last player fastest
        done = true;
        for perm in perms.iter_mut().rev() {
            if next_permutation(perm) {
                done = false;
                break;
            }
        }
        Some(nf)
    })
}

/// The two labellings of the symmetric prisoner's dilemma ordering
/// (temptation > reward > punishment > sucker).
pub fn symmetric_pd_orderings() -> Vec<NormalForm> {
    let players = vec!["p1".to_string(), "p2".to_string()];
    let strategies = vec![
        vec!["a0".to_string(), "a1".to_string()],
        vec!["b0".to_string(), "b1".to_string()],
    ];
    let (t, r, p, s) = (4, 3, 2, 1);
    [(0, 1), (1, 0)]
        .into_iter()
        .map(|(cooperate, defect)| {
            let mut nf = NormalForm::new(players.clone(), strategies.clone());
            nf.set(&[cooperate, cooperate], [r, r]);
            nf.set(&[cooperate, defect], [s, t]);
            nf.set(&[defect, cooperate], [t, s]);
            nf.set(&[defect, defect], [p, p]);
            nf
        })
        .collect()
}

/// First candidate whose elimination leaves nothing, confirmed by the naive
/// solver.
pub fn search_empty_pte_in<I>(candidates: I) -> Option<Game>
where
    I: IntoIterator<Item = NormalForm>,
{
    candidates.into_iter().find_map(|nf| {
        let game = embed_normal_form(&nf).ok()?;
        let result = naive_solve(&game).ok()?;
        (result.status == Status::Empty && !game.has_ties()).then_some(game)
    })
}

/// Searches no-tie normal forms with at most `max_players` players and
/// `max_actions` strategies each, smallest outcome count first.
pub fn search_empty_pte(params: &GeneratorParams) -> Result<Option<Game>, GenerationError> {
    if params.max_players == 0 || params.max_actions == 0 {
        return Err(GenerationError::Infeasible(
            "bounds must be positive".into(),
        ));
    }
    let mut shapes: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..params.max_players {
        shapes = shapes
            .into_iter()
            .flat_map(|s| {
                (1..=params.max_actions).map(move |k| {
                    let mut t = s.clone();
                    t.push(k);
                    t
                })
            })
            .collect();
    }
    shapes.retain(|s| s.iter().product::<usize>() <= params.max_outcomes);
    shapes.sort_by_key(|s| (s.iter().product::<usize>(), s.clone()));
    Ok(shapes
        .iter()
        .find_map(|dims| search_empty_pte_in(no_tie_normal_forms(dims))))
}
