use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeSet, BinaryHeap};

use super::{PointId, SpacetimeError, SpacetimeSetup};
use crate::number::Exact;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Precedence {
    FirstPrecedes,
    SecondPrecedes,
}

/// Causal classification of two events.
///
/// Lightlike pairs (zero interval, distinct events) are reported as
/// timelike: a light signal connects them.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Separation {
    Timelike(Precedence),
    Spacelike,
    /// Same event; treated as spacelike by the causal order.
    Colocated,
}

impl Separation {
    pub fn is_timelike(self) -> bool {
        matches!(self, Separation::Timelike(_))
    }
}

/// `Σ (Δx_i)² − (Δt)²`, time being the last coordinate.
pub fn interval_squared(p: &[Exact], q: &[Exact]) -> Exact {
    let n = p.len();
    let mut total = Exact::zero();
    for i in 0..n {
        let d = &q[i] - &p[i];
        let sq = &d * &d;
        total = if i + 1 == n {
            &total - &sq
        } else {
            &total + &sq
        };
    }
    total
}

pub fn separation(
    p: &[Exact],
    q: &[Exact],
    dimension: usize,
) -> Result<Separation, SpacetimeError> {
    if p.len() != dimension || q.len() != dimension || dimension == 0 {
        return Err(SpacetimeError::DimensionMismatch(
            p.len(),
            q.len(),
            dimension,
        ));
    }
    if p == q {
        return Ok(Separation::Colocated);
    }
    let s2 = interval_squared(p, q);
    if s2.signum() == Ordering::Greater {
        return Ok(Separation::Spacelike);
    }
    // s² <= 0 with p != q forces Δt != 0.
    Ok(match p[dimension - 1].cmp(&q[dimension - 1]) {
        Ordering::Less => Separation::Timelike(Precedence::FirstPrecedes),
        _ => Separation::Timelike(Precedence::SecondPrecedes),
    })
}

/// The timelike-precedence relation between decision points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CausalDag {
    successors: Vec<BTreeSet<PointId>>,
}

impl CausalDag {
    pub fn precedes(&self, p: PointId, q: PointId) -> bool {
        self.successors[p.0].contains(&q)
    }

    pub fn successors(&self, p: PointId) -> &BTreeSet<PointId> {
        &self.successors[p.0]
    }

    pub fn edges(&self) -> impl Iterator<Item = (PointId, PointId)> + '_ {
        self.successors
            .iter()
            .enumerate()
            .flat_map(|(p, s)| s.iter().map(move |q| (PointId(p), *q)))
    }

    pub fn edge_count(&self) -> usize {
        self.successors.iter().map(BTreeSet::len).sum()
    }
}

impl SpacetimeSetup {
    pub fn separation_between(&self, p: PointId, q: PointId) -> Separation {
        separation(&self.point(p).coords, &self.point(q).coords, self.dimension)
            .expect("coordinate counts checked at construction")
    }

    pub fn causal_dag(&self) -> CausalDag {
        let n = self.points.len();
        let mut successors = vec![BTreeSet::new(); n];
        for (p, next) in successors.iter_mut().enumerate() {
            for q in 0..n {
                if let Separation::Timelike(Precedence::FirstPrecedes) =
                    self.separation_between(PointId(p), PointId(q))
                {
                    next.insert(PointId(q));
                }
            }
        }
        CausalDag { successors }
    }

    /// A topological order of the causal DAG. Ready points are taken by
    /// time, then space coordinates, then id, which keeps co-located points
    /// adjacent.
    pub fn total_order(&self) -> Vec<PointId> {
        let dag = self.causal_dag();
        let n = self.points.len();
        let mut indegree = vec![0usize; n];
        for (_, q) in dag.edges() {
            indegree[q.0] += 1;
        }
        let key = |p: usize| {
            let point = &self.points[p];
            Reverse((
                point.time().clone(),
                point.space().to_vec(),
                point.id.clone(),
                p,
            ))
        };
        let mut ready: BinaryHeap<_> = (0..n).filter(|&p| indegree[p] == 0).map(key).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(Reverse((_, _, _, p))) = ready.pop() {
            order.push(PointId(p));
            for q in dag.successors(PointId(p)) {
                indegree[q.0] -= 1;
                if indegree[q.0] == 0 {
                    ready.push(key(q.0));
                }
            }
        }
        assert_eq!(
            order.len(),
            n,
            "timelike precedence is acyclic in flat spacetime"
        );
        order
    }

    /// True iff no agent owns two spacelike-separated or co-located points.
    pub fn spacelike_agent_check(&self) -> bool {
        let n = self.points.len();
        (0..n).all(|p| {
            (p + 1..n).all(|q| {
                self.points[p].agent != self.points[q].agent
                    || self
                        .separation_between(PointId(p), PointId(q))
                        .is_timelike()
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spacetime::{example_setup_spec, SpacetimeSetup};

    fn c(values: &[i64]) -> Vec<Exact> {
        values.iter().map(|&v| Exact::from(v)).collect()
    }

    #[test]
    fn same_event_is_colocated() {
        assert_eq!(
            separation(&c(&[1, 2]), &c(&[1, 2]), 2).unwrap(),
            Separation::Colocated
        );
    }

    #[test]
    fn pure_time_displacement_is_timelike() {
        assert_eq!(
            separation(&c(&[0, 0]), &c(&[0, 1]), 2).unwrap(),
            Separation::Timelike(Precedence::FirstPrecedes)
        );
        assert_eq!(
            separation(&c(&[0, 1]), &c(&[0, 0]), 2).unwrap(),
            Separation::Timelike(Precedence::SecondPrecedes)
        );
    }

    #[test]
    fn large_space_displacement_is_spacelike() {
        assert_eq!(
            separation(&c(&[0, 0]), &c(&[5, 1]), 2).unwrap(),
            Separation::Spacelike
        );
    }

    #[test]
    fn lightlike_counts_as_timelike() {
        assert_eq!(
            separation(&c(&[0, 0, 0]), &c(&[3, 4, 5]), 3).unwrap(),
            Separation::Timelike(Precedence::FirstPrecedes)
        );
    }

    #[test]
    fn near_light_cone_is_exact() {
        let p = c(&[0, 0]);
        let inside = vec!["0.9999999999999999999".parse().unwrap(), Exact::from(1)];
        let outside = vec!["1.0000000000000000001".parse().unwrap(), Exact::from(1)];
        assert!(separation(&p, &inside, 2).unwrap().is_timelike());
        assert_eq!(separation(&p, &outside, 2).unwrap(), Separation::Spacelike);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        assert!(separation(&c(&[0, 0]), &c(&[0]), 2).is_err());
    }

    #[test]
    fn example_dag_has_the_expected_relations() {
        let setup = SpacetimeSetup::new(example_setup_spec()).unwrap();
        let dag = setup.causal_dag();
        let id = |s: &str| setup.point_by_id(s).unwrap();
        let mut edges: Vec<(String, String)> = dag
            .edges()
            .map(|(p, q)| (setup.point(p).id.clone(), setup.point(q).id.clone()))
            .collect();
        edges.sort();
        let expected: Vec<(String, String)> = [
            ("a", "b"),
            ("a", "c"),
            ("a", "f"),
            ("c", "f"),
            ("d", "e"),
            ("d", "f"),
            ("e", "f"),
        ]
        .iter()
        .map(|(p, q)| (p.to_string(), q.to_string()))
        .collect();
        assert_eq!(edges, expected);
        assert_eq!(
            setup.separation_between(id("b"), id("c")),
            Separation::Spacelike
        );
        assert_eq!(
            setup.separation_between(id("b"), id("f")),
            Separation::Spacelike
        );
    }

    #[test]
    fn example_order_is_alphabetical() {
        let setup = SpacetimeSetup::new(example_setup_spec()).unwrap();
        let ids: Vec<&str> = setup
            .total_order()
            .into_iter()
            .map(|p| setup.point(p).id.as_str())
            .collect();
        assert_eq!(ids, ["a", "b", "c", "d", "e", "f"]);
    }

    #[test]
    fn spacelike_points_have_empty_dag_and_tie_break_order() {
        let mut spec = example_setup_spec();
        spec.contingency.clear();
        for (i, p) in spec.points.iter_mut().enumerate() {
            p.coords = c(&[10 * (5 - i as i64), 0]);
        }
        let setup = SpacetimeSetup::new(spec).unwrap();
        assert_eq!(setup.causal_dag().edge_count(), 0);
        let ids: Vec<&str> = setup
            .total_order()
            .into_iter()
            .map(|p| setup.point(p).id.as_str())
            .collect();
        assert_eq!(ids, ["f", "e", "d", "c", "b", "a"]);
    }

    #[test]
    fn worldline_is_a_chain() {
        let mut spec = example_setup_spec();
        spec.points.truncate(3);
        spec.contingency.clear();
        for (i, p) in spec.points.iter_mut().enumerate() {
            p.coords = c(&[0, i as i64]);
        }
        let setup = SpacetimeSetup::new(spec).unwrap();
        assert_eq!(setup.causal_dag().edge_count(), 3);
    }

    #[test]
    fn example_agents_fail_the_spacelike_check_because_of_mary() {
        let setup = SpacetimeSetup::new(example_setup_spec()).unwrap();
        assert!(!setup.spacelike_agent_check());
        // Moving c into b's future makes Mary's points a chain.
        let mut spec = example_setup_spec();
        spec.points[2].coords = c(&[-3, 9]);
        let moved = SpacetimeSetup::new(spec).unwrap();
        assert!(moved.spacelike_agent_check());
    }

    #[test]
    fn colocated_points_of_one_agent_fail_the_check() {
        let mut spec = example_setup_spec();
        spec.contingency.clear();
        spec.points.truncate(2);
        spec.points[1].agent = "Peter".into();
        spec.points[1].coords = spec.points[0].coords.clone();
        let setup = SpacetimeSetup::new(spec).unwrap();
        assert!(!setup.spacelike_agent_check());
    }

    #[test]
    fn one_point_per_agent_passes_the_check() {
        let mut spec = example_setup_spec();
        spec.contingency.clear();
        spec.points.truncate(4);
        let setup = SpacetimeSetup::new(spec).unwrap();
        // a: Peter, b/c: Mary (spacelike) -> drop c
        let mut spec2 = setup.to_spec();
        spec2.points.remove(2);
        assert!(SpacetimeSetup::new(spec2).unwrap().spacelike_agent_check());
    }
}
