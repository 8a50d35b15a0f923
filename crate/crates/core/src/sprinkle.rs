//! Ground-truth causal sets from uniform sprinkling.
//!
//! Two geometries are supported. The Minkowski causal diamond between a past
//! tip at `(t = 0, x = 0)` and a future tip at `(t = 1, x = 0)`, in which
//! `q` follows `p` iff `t_q - t_p > |x_q - x_p|`; and the unit cube
//! `[0,1]^D`, ordered coordinate-wise. Either way the output graph holds the
//! full (transitively closed) relation, edges pointing from the later point
//! to the earlier one, and node times are the first coordinate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::CitationGraph;

/// Identity of the generator behind every sprinkle.
pub const SPRINKLE_RNG: &str = "ChaCha8Rng (rand_chacha 0.9), seed_from_u64(seed), stream 0";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Geometry {
    MinkowskiDiamond,
    UnitCube,
}

impl std::str::FromStr for Geometry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "minkowski" | "minkowski_diamond" | "minkowski-diamond" | "diamond" => Ok(Geometry::MinkowskiDiamond),
            "cube" | "unit_cube" | "unit-cube" | "box" => Ok(Geometry::UnitCube),
            other => Err(Error::InvalidArgument(format!("unknown geometry `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SprinkleSpec {
    pub geometry: Geometry,
    /// Total dimension; for the diamond, one time plus `dimension - 1` space.
    pub dimension: u32,
    pub n: usize,
    pub seed: u64,
}

/// Sprinkled coordinates, `dimension` values per point, time first.
#[derive(Debug, Clone, PartialEq)]
pub struct Points {
    pub dimension: usize,
    pub coords: Vec<f64>,
}

impl Points {
    pub fn len(&self) -> usize {
        self.coords.len() / self.dimension.max(1)
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dimension..(i + 1) * self.dimension]
    }
}

/// Whether `later` lies in the causal future of `earlier`.
pub fn precedes(geometry: Geometry, earlier: &[f64], later: &[f64]) -> bool {
    match geometry {
        Geometry::MinkowskiDiamond => {
            let dt = later[0] - earlier[0];
            if dt <= 0.0 {
                return false;
            }
            let dx2: f64 = earlier[1..]
                .iter()
                .zip(&later[1..])
                .map(|(a, b)| (b - a) * (b - a))
                .sum();
            dt * dt > dx2
        }
        Geometry::UnitCube => earlier.iter().zip(later).all(|(a, b)| a < b),
    }
}

fn check(spec: &SprinkleSpec) -> Result<()> {
    if spec.dimension < 1 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    if spec.n > u32::MAX as usize {
        return Err(Error::InvalidArgument("too many points".into()));
    }
    Ok(())
}

/// Uniform points in the geometry of `spec`.
pub fn sprinkle_points(spec: &SprinkleSpec) -> Result<Points> {
    check(spec)?;
    let d = spec.dimension as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut coords = Vec::with_capacity(spec.n * d);
    match spec.geometry {
        Geometry::UnitCube => {
            for _ in 0..spec.n * d {
                coords.push(rng.random::<f64>());
            }
        }
        Geometry::MinkowskiDiamond => {
            let mut dir = vec![0.0; d - 1];
            for _ in 0..spec.n {
                // The slice at time t is a ball of radius r = min(t, 1 - t),
                // so r has density proportional to r^(d-1) on [0, 1/2].
                let r = 0.5 * rng.random::<f64>().powf(1.0 / d as f64);
                let t = if rng.random::<bool>() { r } else { 1.0 - r };
                coords.push(t);
                if d > 1 {
                    let norm = loop {
                        for c in dir.iter_mut() {
                            *c = rng.sample(StandardNormal);
                        }
                        let norm = dir.iter().map(|c| c * c).sum::<f64>().sqrt();
                        if norm > 0.0 {
                            break norm;
                        }
                    };
                    let radius = r * rng.random::<f64>().powf(1.0 / (d - 1) as f64);
                    coords.extend(dir.iter().map(|c| c / norm * radius));
                }
            }
        }
    }
    Ok(Points { dimension: d, coords })
}

/// The causal order on `points` as a graph with one node per point.
pub fn causal_graph(geometry: Geometry, points: &Points) -> CitationGraph {
    let d = points.dimension;
    let n = points.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| points.point(a)[0].total_cmp(&points.point(b)[0]));
    let sorted: Vec<f64> = order.iter().flat_map(|&i| points.point(i).iter().copied()).collect();
    let at = |i: usize| &sorted[i * d..(i + 1) * d];

    let width = n.saturating_sub(1).to_string().len();
    let ids = (0..n).map(|i| format!("p{i:0width$}")).collect();
    let times = (0..n).map(|i| at(i)[0]).collect();
    let edges: Vec<(u32, u32)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let later = at(i);
            (0..i)
                .filter(move |&j| precedes(geometry, at(j), later))
                .map(move |j| (i as u32, j as u32))
        })
        .collect();
    CitationGraph::from_canonical(ids, times, edges, false)
}

/// Sprinkles according to `spec.geometry`.
pub fn sprinkle(spec: &SprinkleSpec) -> Result<CitationGraph> {
    let points = sprinkle_points(spec)?;
    Ok(causal_graph(spec.geometry, &points))
}

pub fn sprinkle_minkowski(spec: &SprinkleSpec) -> Result<CitationGraph> {
    if spec.geometry != Geometry::MinkowskiDiamond {
        return Err(Error::InvalidArgument("expected the minkowski_diamond geometry".into()));
    }
    sprinkle(spec)
}

pub fn sprinkle_box_space(spec: &SprinkleSpec) -> Result<CitationGraph> {
    if spec.geometry != Geometry::UnitCube {
        return Err(Error::InvalidArgument("expected the unit_cube geometry".into()));
    }
    sprinkle(spec)
}
