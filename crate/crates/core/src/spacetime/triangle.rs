use serde::Serialize;

use super::{PointId, SpacetimeSetup};
use crate::game::ActionId;

/// Contingency coordinates laid out along the total order: `rows[k][l]`
/// (for `l < k`) is the action required at the `l`-th point for the `k`-th
/// point to be reached, or `None` for ⊥.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContingencyTriangle {
    pub order: Vec<PointId>,
    pub rows: Vec<Vec<Option<ActionId>>>,
    /// Entries naming a point that is not earlier in the order, as (row, column).
    pub misplaced: Vec<(PointId, PointId)>,
}

impl ContingencyTriangle {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Whether a prefix of length `l` satisfies every non-⊥ entry of row `l`.
    pub fn matches(&self, prefix: &[Option<ActionId>], l: usize) -> bool {
        debug_assert_eq!(prefix.len(), l);
        self.rows[l]
            .iter()
            .zip(prefix)
            .all(|(required, taken)| required.is_none() || required == taken)
    }

    /// Row `l` and row `k` agree wherever row `l` is assigned (columns before `l`).
    fn compatible(&self, l: usize, k: usize) -> bool {
        self.rows[l]
            .iter()
            .zip(&self.rows[k])
            .all(|(at_l, at_k)| at_l.is_none() || at_l == at_k)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TriangleCode {
    /// An entry references a point that is not earlier in the total order.
    NotEarlier,
    /// An action is required at a point that does not timelike-precede.
    NotCausal,
    /// An action is required at a point whose own contingency disagrees.
    Incompatible,
    /// A preceding, compatible point has no required action.
    MissingRequired,
    /// The required action is not available at the referenced point.
    ActionUnavailable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangleIssue {
    pub code: TriangleCode,
    pub message: String,
    /// Row point, then column point.
    pub ids: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TriangleReport {
    pub errors: Vec<TriangleIssue>,
}

impl TriangleReport {
    pub fn is_valid(&self) -> bool {
        self.errors.is_empty()
    }

    pub fn has(&self, code: TriangleCode) -> bool {
        self.errors.iter().any(|e| e.code == code)
    }
}

impl SpacetimeSetup {
    pub fn triangle(&self) -> ContingencyTriangle {
        let order = self.total_order();
        let mut position = vec![0; order.len()];
        for (i, p) in order.iter().enumerate() {
            position[p.0] = i;
        }
        let mut rows: Vec<Vec<Option<ActionId>>> =
            (0..order.len()).map(|k| vec![None; k]).collect();
        let mut misplaced = Vec::new();
        for (k, point) in order.iter().enumerate() {
            for (earlier, action) in self.contingency_of(*point) {
                let l = position[earlier.0];
                if l < k {
                    rows[k][l] = Some(*action);
                } else {
                    misplaced.push((*point, *earlier));
                }
            }
        }
        ContingencyTriangle {
            order,
            rows,
            misplaced,
        }
    }

    /// Checks the three contingency constraints and action availability.
    pub fn validate_triangle(&self) -> TriangleReport {
        let triangle = self.triangle();
        let dag = self.causal_dag();
        let name = |p: PointId| self.point(p).id.clone();
        let mut errors = Vec::new();
        for &(row, col) in &triangle.misplaced {
            errors.push(TriangleIssue {
                code: TriangleCode::NotEarlier,
                message: format!(
                    "`{}` requires an action at `{}`, which is not earlier in the order",
                    name(row),
                    name(col)
                ),
                ids: vec![name(row), name(col)],
            });
        }
        for k in 0..triangle.len() {
            let pk = triangle.order[k];
            for l in 0..k {
                let pl = triangle.order[l];
                let precedes = dag.precedes(pl, pk);
                let compatible = triangle.compatible(l, k);
                let ids = vec![name(pk), name(pl)];
                match triangle.rows[k][l] {
                    Some(action) => {
                        if !precedes {
                            errors.push(TriangleIssue {
                                code: TriangleCode::NotCausal,
                                message: format!(
                                    "`{}` requires an action at `{}`, which does not timelike-precede it",
                                    name(pk),
                                    name(pl)
                                ),
                                ids: ids.clone(),
                            });
                        }
                        if !compatible {
                            errors.push(TriangleIssue {
                                code: TriangleCode::Incompatible,
                                message: format!(
                                    "`{}` requires an action at `{}`, whose own contingency contradicts it",
                                    name(pk),
                                    name(pl)
                                ),
                                ids: ids.clone(),
                            });
                        }
                        if !self.point(pl).actions.contains(&action) {
                            errors.push(TriangleIssue {
                                code: TriangleCode::ActionUnavailable,
                                message: format!(
                                    "`{}` requires action `{}` at `{}`, where it is unavailable",
                                    name(pk),
                                    self.actions()[action.0],
                                    name(pl)
                                ),
                                ids,
                            });
                        }
                    }
                    None => {
                        if precedes && compatible {
                            errors.push(TriangleIssue {
                                code: TriangleCode::MissingRequired,
                                message: format!(
                                    "`{}` precedes `{}` with compatible contingency but no action is required",
                                    name(pl),
                                    name(pk)
                                ),
                                ids,
                            });
                        }
                    }
                }
            }
        }
        TriangleReport { errors }
    }
}
