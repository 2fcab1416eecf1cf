//! Dominance predicates, Pareto-frontier extraction, lower convex hulls and
//! min-max normalized distances.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{Configuration, NormalizationBounds, Record, TradeoffPoint, TradeoffSpace};

/// `p` is no worse than `q` in both objectives. Reflexive.
pub fn weakly_dominates(p: &TradeoffPoint, q: &TradeoffPoint) -> bool {
    p.accuracy_loss() <= q.accuracy_loss() && p.runtime() <= q.runtime()
}

/// `p` is strictly better than `q` in both objectives.
pub fn dominates(p: &TradeoffPoint, q: &TradeoffPoint) -> bool {
    p.accuracy_loss() < q.accuracy_loss() && p.runtime() < q.runtime()
}

/// Weak dominance by a point with different coordinates. This is the relation
/// frontier membership and non-dominated sorting are defined over: a point
/// tied in one objective and worse in the other is excluded, exact duplicates
/// are not.
pub fn excludes(p: &TradeoffPoint, q: &TradeoffPoint) -> bool {
    weakly_dominates(p, q) && !p.same_coordinates(q)
}

/// A Pareto-efficient point sequence and its lower convex hull.
///
/// `points` is sorted by ascending accuracy loss with strictly decreasing
/// runtime; `hull` holds the lower-hull vertices in the same order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontierCurve<C = Configuration> {
    points: Vec<Record<C>>,
    hull: Vec<TradeoffPoint>,
}

impl<C: Ord + Clone> FrontierCurve<C> {
    /// Extracts the frontier of an arbitrary record collection.
    ///
    /// Exact duplicate trade-offs collapse onto the record with the smallest
    /// configuration.
    pub fn from_records<'a>(records: impl IntoIterator<Item = &'a Record<C>>) -> Result<Self>
    where
        C: 'a,
    {
        let mut sorted: Vec<&Record<C>> = records.into_iter().collect();
        if sorted.is_empty() {
            return Err(Error::EmptySpace);
        }
        sorted.sort_by(|a, b| {
            a.point
                .accuracy_loss()
                .total_cmp(&b.point.accuracy_loss())
                .then(a.point.runtime().total_cmp(&b.point.runtime()))
                .then_with(|| a.config.cmp(&b.config))
        });

        // After the sort, a record is on the frontier iff its runtime beats
        // every runtime seen so far.
        let mut points: Vec<Record<C>> = Vec::new();
        let mut best_runtime = f64::INFINITY;
        for record in sorted {
            if record.point.runtime() < best_runtime {
                best_runtime = record.point.runtime();
                points.push(record.clone());
            }
        }
        let tradeoffs: Vec<TradeoffPoint> = points.iter().map(|r| r.point).collect();
        let hull = lower_convex_hull(&tradeoffs)?;
        Ok(Self { points, hull })
    }
}

impl<C> FrontierCurve<C> {
    pub fn points(&self) -> &[Record<C>] {
        &self.points
    }

    pub fn hull(&self) -> &[TradeoffPoint] {
        &self.hull
    }

    pub fn tradeoffs(&self) -> Vec<TradeoffPoint> {
        self.points.iter().map(|r| r.point).collect()
    }

    pub fn configs(&self) -> impl Iterator<Item = &C> {
        self.points.iter().map(|r| &r.config)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// The Pareto-efficient records of a single framework's space.
pub fn pareto_extract(space: &TradeoffSpace) -> Result<FrontierCurve> {
    FrontierCurve::from_records(space.records())
}

fn cross(o: &TradeoffPoint, a: &TradeoffPoint, b: &TradeoffPoint) -> f64 {
    (a.accuracy_loss() - o.accuracy_loss()) * (b.runtime() - o.runtime())
        - (a.runtime() - o.runtime()) * (b.accuracy_loss() - o.accuracy_loss())
}

/// Monotone-chain lower hull of points sorted by strictly increasing accuracy
/// loss. Collinear interior points are dropped; endpoints are always kept.
pub fn lower_convex_hull(points: &[TradeoffPoint]) -> Result<Vec<TradeoffPoint>> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(i) = points
        .windows(2)
        .position(|w| w[0].accuracy_loss() >= w[1].accuracy_loss())
    {
        return Err(Error::UnsortedInput { index: i + 1 });
    }
    let mut hull: Vec<TradeoffPoint> = Vec::with_capacity(points.len());
    for p in points {
        while hull.len() >= 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(*p);
    }
    Ok(hull)
}

impl NormalizationBounds {
    pub fn new(accuracy: (f64, f64), runtime: (f64, f64)) -> Result<Self> {
        let ok = |(lo, hi): (f64, f64)| lo.is_finite() && hi.is_finite() && lo <= hi;
        if !ok(accuracy) || !ok(runtime) {
            return Err(Error::InvalidParams(format!(
                "normalization bounds must be finite with min <= max: accuracy {accuracy:?}, runtime {runtime:?}"
            )));
        }
        Ok(Self {
            accuracy_min: accuracy.0,
            accuracy_max: accuracy.1,
            runtime_min: runtime.0,
            runtime_max: runtime.1,
        })
    }

    /// Per-dimension min/max over a point collection.
    pub fn from_points(points: impl IntoIterator<Item = TradeoffPoint>) -> Result<Self> {
        let mut iter = points.into_iter();
        let first = iter.next().ok_or(Error::EmptySpace)?;
        let mut b = Self {
            accuracy_min: first.accuracy_loss(),
            accuracy_max: first.accuracy_loss(),
            runtime_min: first.runtime(),
            runtime_max: first.runtime(),
        };
        for p in iter {
            b.accuracy_min = b.accuracy_min.min(p.accuracy_loss());
            b.accuracy_max = b.accuracy_max.max(p.accuracy_loss());
            b.runtime_min = b.runtime_min.min(p.runtime());
            b.runtime_max = b.runtime_max.max(p.runtime());
        }
        Ok(b)
    }

    pub fn accuracy_span(&self) -> f64 {
        self.accuracy_max - self.accuracy_min
    }

    pub fn runtime_span(&self) -> f64 {
        self.runtime_max - self.runtime_min
    }
}

/// Normalization bounds over one framework's own space.
pub fn normalization_bounds(space: &TradeoffSpace) -> Result<NormalizationBounds> {
    NormalizationBounds::from_points(space.points())
}

fn normalized_gap(a: f64, b: f64, span: f64) -> f64 {
    if span > 0.0 {
        (a - b) / span
    } else {
        0.0
    }
}

/// Euclidean distance between min-max normalized points. A dimension with
/// zero spread contributes nothing.
pub fn normalized_euclidean_distance(p: &TradeoffPoint, q: &TradeoffPoint, bounds: &NormalizationBounds) -> f64 {
    let dx = normalized_gap(p.accuracy_loss(), q.accuracy_loss(), bounds.accuracy_span());
    let dy = normalized_gap(p.runtime(), q.runtime(), bounds.runtime_span());
    dx.hypot(dy)
}

/// Distance from `p` to the nearest of `targets`.
pub fn distance_to_nearest(p: &TradeoffPoint, targets: &[TradeoffPoint], bounds: &NormalizationBounds) -> f64 {
    targets
        .iter()
        .map(|t| normalized_euclidean_distance(p, t, bounds))
        .min_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal))
        .unwrap_or(f64::INFINITY)
}
