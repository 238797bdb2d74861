use std::collections::BTreeSet;

use super::{ContingencyTriangle, SpacetimeError, SpacetimeSetup, BOTTOM};
use crate::game::ActionId;

/// Actions (or ⊥ as `None`) taken at the first points of the total order.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct History(pub Vec<Option<ActionId>>);

impl History {
    pub fn empty() -> Self {
        History(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn prefix(&self, len: usize) -> History {
        History(self.0[..len].to_vec())
    }
}

/// Consistent histories of a setup.
///
/// `incomplete` only holds prefixes at which a decision is actually pending,
/// i.e. the prefix matches the contingency row of the next point.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Histories {
    pub complete: BTreeSet<History>,
    pub incomplete: BTreeSet<History>,
}

impl SpacetimeSetup {
    /// Whether `prefix` (of length `l`) satisfies the contingency row of the
    /// point at 0-based position `l` in the total order.
    pub fn matches(&self, prefix: &History, l: usize) -> Result<bool, SpacetimeError> {
        let triangle = self.triangle();
        if l >= triangle.len() || prefix.len() != l {
            return Err(SpacetimeError::BadHistoryKey {
                key: self.history_key(prefix),
                reason: format!("expected a prefix of length {l} below {}", triangle.len()),
            });
        }
        Ok(triangle.matches(&prefix.0, l))
    }

    /// Every prefix is assigned an action exactly when it matches the next row.
    pub fn is_consistent(&self, history: &History) -> bool {
        let triangle = self.triangle();
        self.consistent_with(&triangle, history)
    }

    fn consistent_with(&self, triangle: &ContingencyTriangle, history: &History) -> bool {
        history.len() <= triangle.len()
            && history.0.iter().enumerate().all(|(m, taken)| {
                let pending = triangle.matches(&history.0[..m], m);
                match taken {
                    None => !pending,
                    Some(a) => pending && self.point(triangle.order[m]).actions.contains(a),
                }
            })
    }

    pub fn enumerate_histories(&self) -> Histories {
        let triangle = self.triangle();
        let mut out = Histories::default();
        let mut prefix = Vec::with_capacity(triangle.len());
        self.extend(&triangle, &mut prefix, &mut out);
        out
    }

    fn extend(
        &self,
        triangle: &ContingencyTriangle,
        prefix: &mut Vec<Option<ActionId>>,
        out: &mut Histories,
    ) {
        let m = prefix.len();
        if m == triangle.len() {
            out.complete.insert(History(prefix.clone()));
            return;
        }
        if triangle.matches(prefix, m) {
            out.incomplete.insert(History(prefix.clone()));
            for &a in &self.point(triangle.order[m]).actions {
                prefix.push(Some(a));
                self.extend(triangle, prefix, out);
                prefix.pop();
            }
        } else {
            prefix.push(None);
            self.extend(triangle, prefix, out);
            prefix.pop();
        }
    }

    /// Appends `action` and then as many ⊥ as needed to reach the next
    /// pending decision or a complete history.
    pub fn successor_hat(
        &self,
        history: &History,
        action: ActionId,
    ) -> Result<History, SpacetimeError> {
        let triangle = self.triangle();
        let m = history.len();
        if m >= triangle.len()
            || !self.consistent_with(&triangle, history)
            || !triangle.matches(&history.0, m)
        {
            return Err(SpacetimeError::NotPending(self.history_key(history)));
        }
        let point = self.point(triangle.order[m]);
        if !point.actions.contains(&action) {
            return Err(SpacetimeError::ActionUnavailable {
                point: point.id.clone(),
                action: self
                    .actions()
                    .get(action.0)
                    .cloned()
                    .unwrap_or_else(|| format!("#{}", action.0)),
            });
        }
        let mut next = history.0.clone();
        next.push(Some(action));
        while next.len() < triangle.len() && !triangle.matches(&next, next.len()) {
            next.push(None);
        }
        Ok(History(next))
    }

    /// Comma-separated action names with `_` for ⊥, e.g. `2,_,5,7,10,11`.
    pub fn history_key(&self, history: &History) -> String {
        history
            .0
            .iter()
            .map(|a| match a {
                Some(a) => self.actions()[a.0].as_str(),
                None => BOTTOM,
            })
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn parse_history_key(&self, key: &str) -> Result<History, SpacetimeError> {
        if key.trim().is_empty() {
            return Ok(History::empty());
        }
        key.split(',')
            .map(|part| {
                let part = part.trim();
                if part == BOTTOM {
                    Ok(None)
                } else {
                    self.action_by_name(part).map(Some).ok_or_else(|| {
                        SpacetimeError::BadHistoryKey {
                            key: key.to_string(),
                            reason: format!("unknown action `{part}`"),
                        }
                    })
                }
            })
            .collect::<Result<Vec<_>, _>>()
            .map(History)
    }
}
