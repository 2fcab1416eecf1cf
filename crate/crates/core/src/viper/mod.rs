//! Performance-improvement-ratio (PIR) charts.
//!
//! Every framework's lower convex hull is sampled on a shared accuracy-loss
//! grid, its interpolated runtime is divided by the baseline's, and the
//! ratios of all frameworks are min-max normalized together so that the
//! fastest sample in the compared space scores 1 and the slowest scores 0.

mod render;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::TradeoffPoint;

pub use render::{format_sig6, render_chart, render_scatter, series_csv, ChartStyle, RenderedChart};

/// Grid resolution used when none is requested.
pub const DEFAULT_GRANULARITY: usize = 1000;

/// PIR samples of one framework.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PirSeries {
    pub framework_id: String,
    pub grid: Vec<f64>,
    pub raw_ratio: Vec<f64>,
    pub pir: Vec<f64>,
}

/// Result of a PIR computation over several frameworks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PirChart {
    pub baseline: String,
    /// Baseline first, then the remaining frameworks by id.
    pub series: Vec<PirSeries>,
    /// Set when every raw ratio is identical and normalization had no spread.
    pub degenerate: bool,
}

impl PirChart {
    pub fn grid(&self) -> &[f64] {
        &self.series[0].grid
    }
}

/// One background band: the framework with the lowest interpolated runtime
/// over `[start, end]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub start: f64,
    pub end: f64,
    pub framework_id: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandMap {
    pub bands: Vec<Band>,
}

fn span(hull: &[TradeoffPoint]) -> Result<(f64, f64)> {
    match (hull.first(), hull.last()) {
        (Some(first), Some(last)) => Ok((first.accuracy_loss(), last.accuracy_loss())),
        _ => Err(Error::EmptyCurve),
    }
}

/// Intersection of the hulls' accuracy-loss spans.
pub fn comparison_range<'a>(hulls: impl IntoIterator<Item = &'a [TradeoffPoint]>) -> Result<(f64, f64)> {
    let mut count = 0;
    let mut min_x = f64::NEG_INFINITY;
    let mut max_x = f64::INFINITY;
    for hull in hulls {
        let (lo, hi) = span(hull)?;
        min_x = min_x.max(lo);
        max_x = max_x.min(hi);
        count += 1;
    }
    if count < 2 {
        return Err(Error::TooFewHulls(count));
    }
    if min_x >= max_x {
        return Err(Error::DegenerateRange { min_x, max_x });
    }
    Ok((min_x, max_x))
}

/// Runtime on the hull polyline at accuracy loss `a`.
pub fn interpolate_runtime(hull: &[TradeoffPoint], a: f64) -> Result<f64> {
    let (lo, hi) = span(hull)?;
    if !(lo..=hi).contains(&a) {
        return Err(Error::OutOfSpan { value: a, lo, hi });
    }
    // first vertex with accuracy loss >= a
    let i = hull.partition_point(|p| p.accuracy_loss() < a);
    let right = hull[i];
    if right.accuracy_loss() == a || i == 0 {
        return Ok(right.runtime());
    }
    let left = hull[i - 1];
    let t = (a - left.accuracy_loss()) / (right.accuracy_loss() - left.accuracy_loss());
    Ok(left.runtime() + t * (right.runtime() - left.runtime()))
}

/// `granularity` equally spaced samples over `[min_x, max_x)` followed by
/// `max_x` itself.
pub fn accuracy_grid(min_x: f64, max_x: f64, granularity: usize) -> Result<Vec<f64>> {
    if granularity < 2 {
        return Err(Error::InvalidGranularity(granularity));
    }
    if min_x.partial_cmp(&max_x) != Some(std::cmp::Ordering::Less) {
        return Err(Error::DegenerateRange { min_x, max_x });
    }
    let width = max_x - min_x;
    let mut grid: Vec<f64> = (0..granularity)
        .map(|k| min_x + width * k as f64 / granularity as f64)
        .collect();
    grid.push(max_x);
    Ok(grid)
}

/// PIR series for every hull against `baseline`, normalized globally.
pub fn compute_pir(
    hulls: &BTreeMap<String, Vec<TradeoffPoint>>,
    baseline: &str,
    granularity: usize,
) -> Result<PirChart> {
    let base_hull = hulls
        .get(baseline)
        .ok_or_else(|| Error::MissingBaseline(baseline.to_string()))?;
    let (min_x, max_x) = comparison_range(hulls.values().map(Vec::as_slice))?;
    let grid = accuracy_grid(min_x, max_x, granularity)?;

    let base_runtime = grid
        .iter()
        .map(|&a| interpolate_runtime(base_hull, a))
        .collect::<Result<Vec<f64>>>()?;

    let order = std::iter::once(baseline).chain(hulls.keys().map(String::as_str).filter(|id| *id != baseline));
    let mut raw: Vec<(String, Vec<f64>)> = Vec::with_capacity(hulls.len());
    for id in order {
        let ratios = if id == baseline {
            vec![1.0; grid.len()]
        } else {
            grid.iter()
                .zip(&base_runtime)
                .map(|(&a, &b)| Ok(interpolate_runtime(&hulls[id], a)? / b))
                .collect::<Result<Vec<f64>>>()?
        };
        raw.push((id.to_string(), ratios));
    }

    let all = raw.iter().flat_map(|(_, r)| r.iter().copied());
    let (r_min, r_max) = all.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r), hi.max(r)));
    let degenerate = r_max == r_min;

    let series = raw
        .into_iter()
        .map(|(framework_id, raw_ratio)| {
            let pir = raw_ratio
                .iter()
                .map(|&r| if degenerate { 1.0 } else { (r_max - r) / (r_max - r_min) })
                .collect();
            PirSeries {
                framework_id,
                grid: grid.clone(),
                raw_ratio,
                pir,
            }
        })
        .collect();
    Ok(PirChart {
        baseline: baseline.to_string(),
        series,
        degenerate,
    })
}

/// Winner (lowest interpolated runtime, ties to the smaller id) at every grid
/// point, merged into contiguous bands.
pub fn best_framework_bands(hulls: &BTreeMap<String, Vec<TradeoffPoint>>, grid: &[f64]) -> Result<BandMap> {
    if grid.is_empty() {
        return Err(Error::EmptyInput);
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParams("grid must be strictly increasing".into()));
    }
    if hulls.is_empty() {
        return Err(Error::TooFewHulls(0));
    }
    let mut winners: Vec<&str> = Vec::with_capacity(grid.len());
    for &a in grid {
        let mut best: Option<(&str, f64)> = None;
        // BTreeMap iteration is by id, so strict `<` keeps the smaller id on ties.
        for (id, hull) in hulls {
            let rt = interpolate_runtime(hull, a)?;
            if best.is_none_or(|(_, b)| rt < b) {
                best = Some((id, rt));
            }
        }
        winners.push(best.map(|(id, _)| id).unwrap_or_default());
    }

    let mut bands: Vec<Band> = Vec::new();
    for (k, id) in winners.iter().enumerate() {
        match bands.last_mut() {
            Some(band) if band.framework_id == *id => band.end = grid[k],
            Some(band) => {
                band.end = grid[k];
                bands.push(Band {
                    start: grid[k],
                    end: grid[k],
                    framework_id: id.to_string(),
                });
            }
            None => bands.push(Band {
                start: grid[k],
                end: grid[k],
                framework_id: id.to_string(),
            }),
        }
    }
    Ok(BandMap { bands })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn hull(v: &[(f64, f64)]) -> Vec<TradeoffPoint> {
        v.iter().map(|&(a, r)| TradeoffPoint::new(a, r).unwrap()).collect()
    }

    fn fixture() -> BTreeMap<String, Vec<TradeoffPoint>> {
        BTreeMap::from([
            ("B".to_string(), hull(&[(0.0, 1.0), (0.5, 0.5)])),
            ("M".to_string(), hull(&[(0.0, 0.8), (0.5, 0.2)])),
        ])
    }

    #[test]
    fn range_examples() {
        let a = hull(&[(0.0, 1.0), (0.5, 0.5)]);
        let b = hull(&[(0.1, 1.0), (0.8, 0.5)]);
        assert_eq!(comparison_range([a.as_slice(), b.as_slice()]).unwrap(), (0.1, 0.5));
        assert_eq!(comparison_range([a.as_slice(), a.as_slice()]).unwrap(), (0.0, 0.5));
        let c = hull(&[(0.0, 1.0), (0.1, 0.5)]);
        let d = hull(&[(0.2, 1.0), (0.3, 0.5)]);
        assert!(matches!(
            comparison_range([c.as_slice(), d.as_slice()]),
            Err(Error::DegenerateRange { .. })
        ));
        assert_eq!(comparison_range([a.as_slice()]), Err(Error::TooFewHulls(1)));
    }

    #[test]
    fn interpolation_examples() {
        let h = hull(&[(0.0, 1.0), (0.5, 0.5)]);
        assert_abs_diff_eq!(interpolate_runtime(&h, 0.25).unwrap(), 0.75, epsilon = 1e-15);
        assert_eq!(interpolate_runtime(&h, 0.0).unwrap(), 1.0);
        assert_eq!(interpolate_runtime(&h, 0.5).unwrap(), 0.5);
        let h3 = hull(&[(0.0, 1.0), (0.2, 0.8), (0.5, 0.2)]);
        assert_abs_diff_eq!(interpolate_runtime(&h3, 0.35).unwrap(), 0.5, epsilon = 1e-12);
        assert!(matches!(interpolate_runtime(&h, 0.6), Err(Error::OutOfSpan { .. })));
    }

    #[test]
    fn grid_shape() {
        let g = accuracy_grid(0.0, 1.0, 4).unwrap();
        assert_eq!(g, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(accuracy_grid(0.0, 1.0, 1), Err(Error::InvalidGranularity(1)));
    }

    #[test]
    fn pir_two_hulls() {
        let chart = compute_pir(&fixture(), "B", DEFAULT_GRANULARITY).unwrap();
        assert!(!chart.degenerate);
        let (b, m) = (&chart.series[0], &chart.series[1]);
        assert_eq!(b.framework_id, "B");
        assert_eq!(b.grid.len(), DEFAULT_GRANULARITY + 1);
        assert!(b.pir.iter().all(|&p| p == 0.0));
        assert_abs_diff_eq!(m.pir[0], 1.0 / 3.0, epsilon = 1e-9);
        assert_abs_diff_eq!(*m.pir.last().unwrap(), 1.0, epsilon = 1e-9);
        // closed form of the raw ratio
        for (a, r) in m.grid.iter().zip(&m.raw_ratio) {
            assert_abs_diff_eq!(*r, (0.8 - 1.2 * a) / (1.0 - a), epsilon = 1e-12);
        }
    }

    #[test]
    fn pir_identical_hulls_is_degenerate() {
        let h = hull(&[(0.0, 1.0), (0.5, 0.5)]);
        let hulls = BTreeMap::from([("A".to_string(), h.clone()), ("B".to_string(), h)]);
        let chart = compute_pir(&hulls, "A", 10).unwrap();
        assert!(chart.degenerate);
        assert!(chart.series.iter().all(|s| s.pir.iter().all(|&p| p == 1.0)));
        assert_eq!(compute_pir(&hulls, "Z", 10), Err(Error::MissingBaseline("Z".into())));
    }

    #[test]
    fn pir_three_frameworks_order() {
        let hulls = BTreeMap::from([
            ("base".to_string(), hull(&[(0.0, 1.0), (1.0, 0.4)])),
            ("fast".to_string(), hull(&[(0.0, 0.5), (0.4, 0.3), (1.0, 0.1)])),
            ("mid".to_string(), hull(&[(0.0, 0.9), (1.0, 0.3)])),
        ]);
        let chart = compute_pir(&hulls, "base", 200).unwrap();
        let fast = chart.series.iter().find(|s| s.framework_id == "fast").unwrap();
        for s in &chart.series {
            for k in 0..fast.pir.len() {
                assert!(fast.pir[k] >= s.pir[k]);
            }
        }
        let all: Vec<f64> = chart.series.iter().flat_map(|s| s.pir.clone()).collect();
        assert_eq!(all.iter().cloned().fold(f64::INFINITY, f64::min), 0.0);
        assert_eq!(all.iter().cloned().fold(f64::NEG_INFINITY, f64::max), 1.0);
    }

    #[test]
    fn bands_single_and_crossing() {
        let hulls = fixture();
        let grid = accuracy_grid(0.0, 0.5, 50).unwrap();
        let bands = best_framework_bands(&hulls, &grid).unwrap();
        assert_eq!(bands.bands.len(), 1);
        assert_eq!(bands.bands[0].framework_id, "M");

        // runtimes 1 - a and 0.8 - 0.2 a cross at a* = 0.25
        let crossing = BTreeMap::from([
            ("P".to_string(), hull(&[(0.0, 0.8), (1.0, 0.6)])),
            ("Q".to_string(), hull(&[(0.0, 1.0), (1.0, 0.0001)])),
        ]);
        let grid = accuracy_grid(0.0, 1.0, 100).unwrap();
        let bands = best_framework_bands(&crossing, &grid).unwrap();
        assert_eq!(bands.bands.len(), 2);
        assert_eq!(bands.bands[0].framework_id, "P");
        assert_eq!(bands.bands[1].framework_id, "Q");
        let a_star = 0.2 / 0.7999;
        assert!((bands.bands[1].start - a_star).abs() <= 0.01);
        assert_eq!(bands.bands[0].end, bands.bands[1].start);
        assert_eq!(bands.bands[0].start, 0.0);
        assert_eq!(bands.bands[1].end, 1.0);
    }

    #[test]
    fn bands_tie_goes_to_smaller_id() {
        let h = hull(&[(0.0, 1.0), (1.0, 0.5)]);
        let hulls = BTreeMap::from([("b".to_string(), h.clone()), ("a".to_string(), h)]);
        let bands = best_framework_bands(&hulls, &[0.0, 0.5, 1.0]).unwrap();
        assert_eq!(bands.bands.len(), 1);
        assert_eq!(bands.bands[0].framework_id, "a");
    }
}
