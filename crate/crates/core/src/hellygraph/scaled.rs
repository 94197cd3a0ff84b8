//! Rescaled ball families.
//!
//! Centers `xᵢ` of a graph viewed at scale `d` get radii `⌈(rᵢ + 1/(2j))·d⌉`. In a Helly
//! graph a common point `x` exists as soon as the balls meet pairwise, and then
//! `d(x, xᵢ)/d ≤ rᵢ + 1/(2j) + 1/d`.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::exactcore::rational::{self, serde_rational, serde_rational_vec, Rational};

use super::{builtin_graph, grid_coords, grid_index, FiniteGraph, HellyGraphError};

/// Base graph of a scaled instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScaledBase {
    /// King graph on `{0..side·d}ⁿ`; centers are points of `{0..side}ⁿ`, multiplied by `d`.
    Grid { dim: usize, side: usize },
    /// Cycle of length `length·d`; a center `[k]` sits at vertex `k·d`.
    Cycle { length: usize },
    /// A fixed graph; centers are `[vertex]` and only the radii scale.
    Graph(FiniteGraph),
    Builtin(String),
}

/// JSON form of a scaled instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaledHellyInput {
    pub base: ScaledBase,
    pub centers: Vec<Vec<i64>>,
    #[serde(with = "serde_rational_vec")]
    pub radii: Vec<Rational>,
    pub d: u64,
    pub j: u64,
}

/// A ball family on a concrete graph with radii `⌈(rᵢ + 1/(2j))·d⌉`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledHellyInstance {
    pub base: FiniteGraph,
    pub centers: Vec<usize>,
    pub radii: Vec<Rational>,
    pub d: u64,
    pub j: u64,
    /// `(dim, side)` of the realized grid, for labelling points by coordinates.
    pub grid: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScaledSolution {
    pub point: usize,
    pub point_label: String,
    pub scaled_radii: Vec<u64>,
    pub distances: Vec<u64>,
    /// `d(x, xᵢ)/d − rᵢ`.
    #[serde(with = "serde_rational_vec")]
    pub residuals: Vec<Rational>,
    /// `1/(2j) + 1/d`.
    #[serde(with = "serde_rational")]
    pub bound: Rational,
    pub within_bound: bool,
}

fn invalid(msg: impl Into<String>) -> HellyGraphError {
    HellyGraphError::InvalidInput(msg.into())
}

fn to_index(x: i64, limit: usize, what: &str) -> Result<usize, HellyGraphError> {
    usize::try_from(x)
        .ok()
        .filter(|&v| v <= limit)
        .ok_or_else(|| invalid(format!("{what} {x} outside 0..={limit}")))
}

impl ScaledHellyInput {
    pub fn from_json(text: &str) -> Result<Self, HellyGraphError> {
        serde_json::from_str(text).map_err(|e| {
            invalid(format!("line {}, column {}: {e}", e.line(), e.column()))
        })
    }

    /// Realizes the base graph at scale `d` and places the centers.
    pub fn instantiate(&self) -> Result<ScaledHellyInstance, HellyGraphError> {
        if self.d == 0 || self.j == 0 {
            return Err(invalid("d and j must be positive"));
        }
        let d = usize::try_from(self.d).map_err(|_| invalid("d too large"))?;
        let (base, centers, grid) = match &self.base {
            ScaledBase::Grid { dim, side } => {
                let big = side
                    .checked_mul(d)
                    .filter(|s| (s + 1).checked_pow(*dim as u32).is_some_and(|n| n <= 1 << 22))
                    .ok_or_else(|| invalid("scaled grid too large"))?;
                let centers = self
                    .centers
                    .iter()
                    .map(|c| {
                        if c.len() != *dim {
                            return Err(invalid(format!("center {c:?} has wrong dimension")));
                        }
                        let coords = c
                            .iter()
                            .map(|&x| to_index(x, *side, "coordinate").map(|v| v * d))
                            .collect::<Result<Vec<_>, _>>()?;
                        Ok(grid_index(&coords, big))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                (FiniteGraph::grid_box(*dim, big), centers, Some((*dim, big)))
            }
            ScaledBase::Cycle { length } => {
                let n = length
                    .checked_mul(d)
                    .filter(|&n| n >= 3 && n <= 1 << 22)
                    .ok_or_else(|| invalid("cycle length out of range"))?;
                let centers = self
                    .centers
                    .iter()
                    .map(|c| match c.as_slice() {
                        [k] if (0..*length as i64).contains(k) => Ok(*k as usize * d),
                        _ => Err(invalid(format!("bad cycle center {c:?}"))),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                (FiniteGraph::cycle(n), centers, None)
            }
            ScaledBase::Graph(_) | ScaledBase::Builtin(_) => {
                let g = match &self.base {
                    ScaledBase::Graph(g) => g.clone(),
                    ScaledBase::Builtin(name) => builtin_graph(name)?,
                    _ => unreachable!(),
                };
                let last = g.vertex_count().saturating_sub(1);
                let centers = self
                    .centers
                    .iter()
                    .map(|c| match c.as_slice() {
                        [v] => to_index(*v, last, "vertex"),
                        _ => Err(invalid(format!("bad vertex center {c:?}"))),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                (g, centers, None)
            }
        };
        Ok(ScaledHellyInstance {
            base,
            centers,
            radii: self.radii.clone(),
            d: self.d,
            j: self.j,
            grid,
        })
    }
}

impl ScaledHellyInstance {
    /// `1/(2j)`.
    pub fn slack(&self) -> Rational {
        Rational::new(BigInt::from(1), BigInt::from(2 * self.j))
    }

    pub fn scaled_radii(&self) -> Vec<u64> {
        let d = Rational::from_integer(BigInt::from(self.d));
        self.radii
            .iter()
            .map(|r| {
                rational::ceil(&((r + self.slack()) * &d))
                    .to_u64()
                    .expect("scaled radius fits in u64")
            })
            .collect()
    }

    fn validate(&self) -> Result<(), HellyGraphError> {
        if self.d == 0 || self.j == 0 {
            return Err(invalid("d and j must be positive"));
        }
        if self.centers.is_empty() || self.centers.len() != self.radii.len() {
            return Err(invalid("need one radius per center and at least one center"));
        }
        if self.radii.iter().any(Signed::is_negative) {
            return Err(invalid("radii must be nonnegative"));
        }
        let n = self.base.vertex_count();
        if let Some(&v) = self.centers.iter().find(|&&v| v >= n) {
            return Err(HellyGraphError::VertexOutOfRange { vertex: v, count: n });
        }
        self.base.require_connected()
    }

    fn label(&self, v: usize) -> String {
        match self.grid {
            Some((dim, side)) => {
                let c: Vec<String> = grid_coords(v, dim, side).iter().map(usize::to_string).collect();
                format!("({})", c.join(","))
            }
            None => self.base.label(v),
        }
    }
}

/// Finds a vertex within every scaled radius and reports normalized residuals.
///
/// Among the solutions the one with the smallest largest residual is chosen, ties going to
/// the least vertex index.
pub fn scaled_helly_check(inst: &ScaledHellyInstance) -> Result<ScaledSolution, HellyGraphError> {
    inst.validate()?;
    let radii = inst.scaled_radii();
    let dists: Vec<Vec<u32>> = inst.centers.iter().map(|&c| inst.base.bfs(c)).collect();
    for i in 0..inst.centers.len() {
        for k in i + 1..inst.centers.len() {
            let distance = u64::from(dists[i][inst.centers[k]]);
            if distance > radii[i] + radii[k] {
                return Err(HellyGraphError::PairwiseConditionFails {
                    first: i,
                    second: k,
                    distance,
                    bound: radii[i] + radii[k],
                });
            }
        }
    }
    let d = Rational::from_integer(BigInt::from(inst.d));
    let worst = |v: usize| {
        dists
            .iter()
            .zip(&inst.radii)
            .map(|(row, r)| Rational::from_integer(BigInt::from(row[v])) / &d - r)
            .max()
            .expect("at least one center")
    };
    let mut best: Option<(Rational, usize)> = None;
    for v in 0..inst.base.vertex_count() {
        if dists.iter().zip(&radii).all(|(row, &r)| u64::from(row[v]) <= r) {
            let w = worst(v);
            if best.as_ref().map_or(true, |(b, _)| &w < b) {
                best = Some((w, v));
            }
        }
    }
    let (_, point) = best.ok_or(HellyGraphError::NoSolution)?;
    let distances: Vec<u64> = dists.iter().map(|row| u64::from(row[point])).collect();
    let residuals: Vec<Rational> = distances
        .iter()
        .zip(&inst.radii)
        .map(|(&x, r)| Rational::from_integer(BigInt::from(x)) / &d - r)
        .collect();
    let bound = inst.slack() + d.recip();
    let within_bound = residuals.iter().all(|r| r <= &bound);
    debug_assert!(within_bound, "ceiling radii exceed the residual bound");
    Ok(ScaledSolution {
        point,
        point_label: inst.label(point),
        scaled_radii: radii,
        distances,
        residuals,
        bound,
        within_bound,
    })
}
