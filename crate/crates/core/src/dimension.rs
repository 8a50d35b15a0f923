//! Dimension estimators for causal intervals, and field-level sampling.
//!
//! Three estimators are provided:
//!
//! * **box counting**: a midpoint splits an interval of `N` nodes into
//!   sub-intervals of `N1` and `N2` nodes, each about half the length, so
//!   `N_sub / N ≈ 2^-D`.
//! * **Myrheim-Meyer**: for points sprinkled uniformly into a Minkowski
//!   interval, `P / N² = Γ(D+1) Γ(D/2) / (4 Γ(3D/2))` where `P` counts
//!   related pairs.
//! * **box space**: for random orders on uniform points of `[0,1]^D`,
//!   `P = N (N - 1) / 2^D`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::graph::{CitationGraph, NodeIndex};
use crate::intervals::{interval_with_split, EndpointConvention};

/// Search domain for the Myrheim-Meyer inversion.
pub const MM_MIN_DIMENSION: f64 = 1.0;
pub const MM_MAX_DIMENSION: f64 = 10.0;
/// Bisection stops once the bracket is narrower than this.
pub const MM_TOLERANCE: f64 = 1e-6;

pub const DEFAULT_MIN_INTERVAL_SIZE: usize = 32;
/// Sampling gives up after this many draws per requested pair.
pub const ATTEMPTS_PER_PAIR: u64 = 100;
/// Identity of the generator behind every sampled pair.
pub const SAMPLER_RNG: &str = "ChaCha8Rng (rand_chacha 0.9), seed_from_u64(seed), stream = draw index";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    BoxCounting,
    MyrheimMeyer,
    BoxSpace,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "box_counting" | "box-counting" | "box" => Ok(Method::BoxCounting),
            "myrheim_meyer" | "myrheim-meyer" | "mm" => Ok(Method::MyrheimMeyer),
            "box_space" | "box-space" => Ok(Method::BoxSpace),
            other => Err(Error::InvalidArgument(format!("unknown method `{other}`"))),
        }
    }
}

/// `f(D) = Γ(D+1) Γ(D/2) / (4 Γ(3D/2))`, the expected `P / N²` of a
/// `D`-dimensional Minkowski interval.
pub fn mm_ratio(d: f64) -> f64 {
    (ln_gamma(d + 1.0) + ln_gamma(d / 2.0) - ln_gamma(1.5 * d)).exp() / 4.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MmSolution {
    pub dimension: f64,
    /// The ratio exceeded `f(1)` and was pinned to `D = 1`.
    pub clamped: bool,
}

/// Inverts `f(D) = ratio` by bisection on `[1, 10]`.
pub fn mm_dimension_from_ratio(ratio: f64) -> Result<MmSolution> {
    if !ratio.is_finite() || ratio <= 0.0 {
        return Err(Error::Undefined(format!("relation ratio {ratio} is not positive")));
    }
    // f(1) = Γ(2) Γ(1/2) / (4 Γ(3/2)) = 1/2 exactly.
    let top = 0.5;
    if ratio >= top {
        return Ok(MmSolution {
            dimension: MM_MIN_DIMENSION,
            clamped: ratio > top,
        });
    }
    let floor = mm_ratio(MM_MAX_DIMENSION);
    if ratio < floor {
        return Err(Error::DimensionOutOfRange { ratio, floor });
    }
    let (mut lo, mut hi) = (MM_MIN_DIMENSION, MM_MAX_DIMENSION);
    while hi - lo > MM_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if mm_ratio(mid) > ratio {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(MmSolution {
        dimension: 0.5 * (lo + hi),
        clamped: false,
    })
}

fn check_relation_counts(n: u64, p: u64) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("interval size {n} is below 2")));
    }
    if p == 0 {
        return Err(Error::Undefined("interval has no related pairs".into()));
    }
    if p > n * (n - 1) / 2 {
        return Err(Error::InvalidArgument(format!(
            "{p} relations exceed the {} pairs of {n} nodes",
            n * (n - 1) / 2
        )));
    }
    Ok(())
}

/// Myrheim-Meyer dimension of an interval with `n` nodes and `p` related
/// pairs.
pub fn mm_dimension(n: u64, p: u64) -> Result<MmSolution> {
    check_relation_counts(n, p)?;
    mm_dimension_from_ratio(p as f64 / (n as f64 * n as f64))
}

/// `D = log2(N (N - 1)) - log2(P)`.
pub fn box_space_dimension(n: u64, p: u64) -> Result<f64> {
    check_relation_counts(n, p)?;
    Ok((n as f64 * (n - 1) as f64).log2() - (p as f64).log2())
}

/// `D = log2(N / N_sub)`.
pub fn box_counting_dimension(n: u64, n_sub: u64) -> Result<f64> {
    if n_sub == 0 {
        return Err(Error::Undefined("empty sub-interval".into()));
    }
    if n_sub >= n {
        return Err(Error::InvalidArgument(format!(
            "sub-interval size {n_sub} is not below interval size {n}"
        )));
    }
    Ok((n as f64 / n_sub as f64).log2())
}

/// One dimension estimate and the interval it came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionEstimate {
    #[serde(rename = "D")]
    pub dimension: f64,
    pub method: Method,
    #[serde(rename = "N")]
    pub size: usize,
    /// Relation count, for the relation-based methods.
    #[serde(rename = "P", default, skip_serializing_if = "Option::is_none")]
    pub relations: Option<u64>,
    /// Midpoint split `(N1, N2)`, for box counting.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<(usize, usize)>,
    /// Which sub-interval size produced this estimate (box counting).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_sub: Option<usize>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub clamped: bool,
    pub source: String,
    pub target: String,
}

impl DimensionEstimate {
    /// `P`, or `N1:N2` for box-counting estimates.
    pub fn relations_or_split(&self) -> String {
        match (self.relations, self.split) {
            (Some(p), _) => p.to_string(),
            (None, Some((a, b))) => format!("{a}:{b}"),
            (None, None) => String::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub iqr: f64,
}

impl Summary {
    /// Median and quartiles by linear interpolation between order statistics.
    pub fn of(values: &[f64]) -> Option<Summary> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let q = |p: f64| {
            let h = p * (v.len() - 1) as f64;
            let (i, frac) = (h.floor() as usize, h - h.floor());
            if i + 1 < v.len() {
                v[i] + frac * (v[i + 1] - v[i])
            } else {
                v[i]
            }
        };
        let (q1, median, q3) = (q(0.25), q(0.5), q(0.75));
        Some(Summary {
            median,
            q1,
            q3,
            iqr: q3 - q1,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldDimensionReport {
    pub method: Method,
    pub convention: EndpointConvention,
    pub seed: u64,
    pub rng: String,
    pub min_interval_size: usize,
    /// Pairs drawn, whatever became of them.
    pub num_pairs_sampled: u64,
    /// Pairs whose interval was smaller than `min_interval_size`.
    pub num_rejected_small: u64,
    /// Large enough pairs on which the estimator was undefined.
    pub num_failed: u64,
    /// Pairs contributing at least one estimate.
    pub num_accepted: u64,
    pub estimates: Vec<DimensionEstimate>,
    pub summary: Option<Summary>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldConfig {
    pub method: Method,
    pub num_pairs: usize,
    pub min_interval_size: usize,
    pub seed: u64,
    pub convention: EndpointConvention,
}

impl FieldConfig {
    pub fn new(method: Method, num_pairs: usize, seed: u64) -> Self {
        FieldConfig {
            method,
            num_pairs,
            min_interval_size: DEFAULT_MIN_INTERVAL_SIZE,
            seed,
            convention: EndpointConvention::Exclusive,
        }
    }
}

enum Outcome {
    Small(usize),
    Failed(Error),
    Accepted(Vec<DimensionEstimate>),
}

/// The ordered pair drawn at position `draw` of the sample stream.
pub fn sample_pair(seed: u64, draw: u64, n: usize) -> (NodeIndex, NodeIndex) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(draw);
    let a = rng.random_range(0..n as u32);
    let mut b = rng.random_range(0..n as u32 - 1);
    if b >= a {
        b += 1;
    }
    (NodeIndex(a.max(b)), NodeIndex(a.min(b)))
}

fn classify(
    g: &CitationGraph,
    source: NodeIndex,
    target: NodeIndex,
    method: Method,
    convention: EndpointConvention,
    min_interval_size: usize,
) -> Result<Outcome> {
    let want_split = method == Method::BoxCounting;
    let (summary, split) = interval_with_split(g, source, target, convention, want_split)?;
    if summary.size < min_interval_size || summary.members.is_empty() {
        return Ok(Outcome::Small(summary.size));
    }
    let base = |dimension: f64| DimensionEstimate {
        dimension,
        method,
        size: summary.size,
        relations: None,
        split: None,
        n_sub: None,
        clamped: false,
        source: g.id(source).to_string(),
        target: g.id(target).to_string(),
    };
    let n = summary.size as u64;
    let estimates = match method {
        Method::MyrheimMeyer => mm_dimension(n, summary.relations).map(|sol| {
            vec![DimensionEstimate {
                relations: Some(summary.relations),
                clamped: sol.clamped,
                ..base(sol.dimension)
            }]
        }),
        Method::BoxSpace => box_space_dimension(n, summary.relations).map(|d| {
            vec![DimensionEstimate {
                relations: Some(summary.relations),
                ..base(d)
            }]
        }),
        Method::BoxCounting => {
            let split = split.expect("non-empty interval has a midpoint");
            let estimates: Vec<_> = [split.n1, split.n2]
                .into_iter()
                .filter_map(|n_sub| {
                    box_counting_dimension(n, n_sub as u64).ok().map(|d| DimensionEstimate {
                        split: Some((split.n1, split.n2)),
                        n_sub: Some(n_sub),
                        ..base(d)
                    })
                })
                .collect();
            if estimates.is_empty() {
                Err(Error::Undefined("both sub-intervals are empty".into()))
            } else {
                Ok(estimates)
            }
        }
    };
    Ok(match estimates {
        Ok(e) => Outcome::Accepted(e),
        Err(e) => Outcome::Failed(e),
    })
}

/// Estimates for one interval, or why there are none. Box counting yields
/// one estimate per non-empty sub-interval.
pub fn estimate_interval(
    g: &CitationGraph,
    source: NodeIndex,
    target: NodeIndex,
    method: Method,
    convention: EndpointConvention,
    min_interval_size: usize,
) -> Result<Vec<DimensionEstimate>> {
    match classify(g, source, target, method, convention, min_interval_size)? {
        Outcome::Accepted(e) => Ok(e),
        Outcome::Failed(e) => Err(e),
        Outcome::Small(size) => Err(Error::Undefined(format!(
            "interval of size {size} is below the minimum {min_interval_size}"
        ))),
    }
}

fn attempt(g: &CitationGraph, config: &FieldConfig, draw: u64) -> Outcome {
    let (source, target) = sample_pair(config.seed, draw, g.node_count());
    classify(
        g,
        source,
        target,
        config.method,
        config.convention,
        config.min_interval_size,
    )
    .unwrap_or_else(Outcome::Failed)
}

/// Samples random node pairs and estimates a dimension from each interval
/// of at least `min_interval_size` nodes.
///
/// Draw `k` uses its own generator stream, so the report is identical for
/// any thread count.
pub fn estimate_field_dimension(g: &CitationGraph, config: &FieldConfig) -> Result<FieldDimensionReport> {
    if config.num_pairs == 0 {
        return Err(Error::InvalidArgument("num_pairs must be at least 1".into()));
    }
    if config.min_interval_size < 2 {
        return Err(Error::InvalidArgument("min_interval_size must be at least 2".into()));
    }
    let mut report = FieldDimensionReport {
        method: config.method,
        convention: config.convention,
        seed: config.seed,
        rng: SAMPLER_RNG.to_string(),
        min_interval_size: config.min_interval_size,
        num_pairs_sampled: 0,
        num_rejected_small: 0,
        num_failed: 0,
        num_accepted: 0,
        estimates: Vec::new(),
        summary: None,
    };
    if g.node_count() < 2 {
        return Ok(report);
    }
    let cap = ATTEMPTS_PER_PAIR * config.num_pairs as u64;
    let batch = (rayon::current_num_threads() as u64 * 4).max(8);
    let mut next = 0u64;
    'outer: while next < cap && report.num_accepted < config.num_pairs as u64 {
        let end = (next + batch).min(cap);
        let outcomes: Vec<Outcome> = (next..end).into_par_iter().map(|k| attempt(g, config, k)).collect();
        for outcome in outcomes {
            report.num_pairs_sampled += 1;
            match outcome {
                Outcome::Small(_) => report.num_rejected_small += 1,
                Outcome::Failed(_) => report.num_failed += 1,
                Outcome::Accepted(est) => {
                    report.num_accepted += 1;
                    report.estimates.extend(est);
                    if report.num_accepted == config.num_pairs as u64 {
                        break 'outer;
                    }
                }
            }
        }
        next = end;
    }
    let values: Vec<f64> = report.estimates.iter().map(|e| e.dimension).collect();
    report.summary = Summary::of(&values);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_counting_values() {
        assert_eq!(box_counting_dimension(16, 4).unwrap(), 2.0);
        assert_eq!(box_counting_dimension(40, 20).unwrap(), 1.0);
        assert!(matches!(box_counting_dimension(19, 0), Err(Error::Undefined(_))));
        assert!(box_counting_dimension(4, 4).is_err());
    }

    #[test]
    fn box_counting_on_diamond_counts() {
        // log2(19/4) and log2(19/6) to three places.
        assert!((box_counting_dimension(19, 4).unwrap() - 2.248).abs() < 5e-4);
        assert!((box_counting_dimension(19, 6).unwrap() - 1.663).abs() < 5e-4);
    }

    #[test]
    fn box_space_values() {
        assert_eq!(box_space_dimension(10, 45).unwrap(), 1.0);
        assert_eq!(box_space_dimension(9, 18).unwrap(), 2.0);
        assert!(matches!(box_space_dimension(9, 0), Err(Error::Undefined(_))));
        assert!(box_space_dimension(9, 37).is_err());
    }

    #[test]
    fn mm_analytic_points() {
        let cases = [(0.5, 1.0), (0.25, 2.0), (4.0 / 35.0, 3.0)];
        for (ratio, d) in cases {
            let sol = mm_dimension_from_ratio(ratio).unwrap();
            assert!((sol.dimension - d).abs() < 1e-5, "{ratio} -> {}", sol.dimension);
            assert!(!sol.clamped);
        }
    }

    #[test]
    fn mm_counts() {
        assert!((mm_dimension(2, 1).unwrap().dimension - 2.0).abs() < 1e-5);
        assert!((mm_dimension(35, 140).unwrap().dimension - 3.0).abs() < 1e-5);
        assert!(matches!(mm_dimension(35, 0), Err(Error::Undefined(_))));
        assert!(mm_dimension(1, 0).is_err());
    }

    #[test]
    fn mm_clamp_and_range() {
        let sol = mm_dimension_from_ratio(0.6).unwrap();
        assert_eq!(sol.dimension, 1.0);
        assert!(sol.clamped);
        assert!(matches!(
            mm_dimension_from_ratio(mm_ratio(10.0) / 2.0),
            Err(Error::DimensionOutOfRange { .. })
        ));
    }

    #[test]
    fn ratio_decreasing_on_grid() {
        let grid: Vec<f64> = (0..1000).map(|i| 1.0 + 9.0 * i as f64 / 999.0).collect();
        for w in grid.windows(2) {
            assert!(mm_ratio(w[0]) > mm_ratio(w[1]), "at {}", w[0]);
        }
    }

    #[test]
    fn summary_quartiles() {
        let s = Summary::of(&[4.0, 1.0, 3.0, 2.0, 5.0]).unwrap();
        assert_eq!((s.q1, s.median, s.q3, s.iqr), (2.0, 3.0, 4.0, 2.0));
        let s = Summary::of(&[1.0, 2.0]).unwrap();
        assert_eq!(s.median, 1.5);
        assert!(Summary::of(&[]).is_none());
    }

    #[test]
    fn method_names() {
        assert_eq!("mm".parse::<Method>().unwrap(), Method::MyrheimMeyer);
        assert_eq!(serde_json::to_string(&Method::BoxSpace).unwrap(), "\"box_space\"");
        assert!("nope".parse::<Method>().is_err());
    }

    #[test]
    fn pairs_are_oriented_and_distinct() {
        for k in 0..200 {
            let (s, t) = sample_pair(9, k, 7);
            assert!(s > t && s.index() < 7);
        }
        assert_eq!(sample_pair(3, 5, 100), sample_pair(3, 5, 100));
    }
}
