//! Helly property of finite graphs.
//!
//! A graph is Helly when every family of pairwise intersecting balls has a common vertex.
//! [`is_helly`] decides this by exhaustive search over ball families, so it is only meant
//! for small graphs; [`grid_box_helly`] handles ℓ∞ boxes through their product structure,
//! and [`scaled`] builds the rescaled ball families used for asymptotic arguments.

mod graph;
pub mod scaled;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::stablenorm::cayley::{self, CayleyGroup};
use crate::stablenorm::{StableNormError, WordMetricSpec};

pub use graph::{builtin_graph, grid_coords, grid_index, FiniteGraph, UNREACHABLE};
pub use scaled::{scaled_helly_check, ScaledBase, ScaledHellyInput, ScaledHellyInstance, ScaledSolution};

pub const DEFAULT_VERTEX_CAP: usize = 12;
pub const DEFAULT_GRID_CAP: usize = 4096;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum HellyGraphError {
    #[error("graph has {vertices} vertices, above the cap of {cap}")]
    GraphTooLarge { vertices: usize, cap: usize },
    #[error("graph is not connected")]
    Disconnected,
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range for a graph with {count} vertices")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error("unknown builtin graph '{0}'")]
    UnknownBuiltin(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid ball family: {0}")]
    InvalidFamily(String),
    #[error("witness check failed: {0}")]
    InvalidWitness(String),
    #[error("centers {first} and {second} are {distance} apart, more than the radius sum {bound}")]
    PairwiseConditionFails {
        first: usize,
        second: usize,
        distance: u64,
        bound: u64,
    },
    #[error("no vertex lies in every scaled ball")]
    NoSolution,
    #[error(transparent)]
    StableNorm(#[from] StableNormError),
}

/// Closed ball `{v : d(center, v) ≤ radius}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Ball {
    pub center: usize,
    pub radius: u32,
}

/// A family of balls with at most one ball per center, sorted by center.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BallFamily {
    members: Vec<Ball>,
}

impl BallFamily {
    /// Keeps the smallest ball at each center; concentric balls intersect in the smallest.
    pub fn new(balls: impl IntoIterator<Item = Ball>) -> Self {
        let mut members: Vec<Ball> = balls.into_iter().collect();
        members.sort();
        members.dedup_by_key(|b| b.center);
        Self { members }
    }

    pub fn members(&self) -> &[Ball] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Centers in range and radii at most `diameter + 1`.
    pub fn validate(&self, g: &FiniteGraph, diameter: u32) -> Result<(), HellyGraphError> {
        let n = g.vertex_count();
        if self.members.windows(2).any(|w| w[0].center >= w[1].center) {
            return Err(HellyGraphError::InvalidFamily("family is not canonical".into()));
        }
        for b in &self.members {
            if b.center >= n {
                return Err(HellyGraphError::VertexOutOfRange {
                    vertex: b.center,
                    count: n,
                });
            }
            if b.radius > diameter + 1 {
                return Err(HellyGraphError::InvalidFamily(format!(
                    "radius {} at center {} exceeds diameter + 1 = {}",
                    b.radius,
                    b.center,
                    diameter + 1
                )));
            }
        }
        Ok(())
    }

    /// Whether every two balls meet, i.e. `d(c, c') ≤ r + r'`.
    pub fn pairwise_intersecting(&self, dist: &[Vec<u32>]) -> bool {
        self.members.iter().enumerate().all(|(i, a)| {
            self.members[i + 1..]
                .iter()
                .all(|b| dist[a.center][b.center] <= a.radius + b.radius)
        })
    }

    /// Vertices in every ball, in increasing order.
    pub fn intersection(&self, dist: &[Vec<u32>]) -> Vec<usize> {
        (0..dist.len())
            .filter(|&v| self.members.iter().all(|b| dist[b.center][v] <= b.radius))
            .collect()
    }
}

/// Least vertex lying in every ball of `fam`, if any.
pub fn solve_ball_family(
    g: &FiniteGraph,
    fam: &BallFamily,
) -> Result<Option<usize>, HellyGraphError> {
    g.require_connected()?;
    let dist = g.distance_matrix();
    let diameter = dist.iter().flatten().copied().max().unwrap_or(0);
    fam.validate(g, diameter)?;
    Ok(fam.intersection(&dist).first().copied())
}

/// Verdict of an exhaustive Helly test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum GraphVerdict {
    Helly,
    NotHelly {
        /// Pairwise intersecting balls with empty total intersection.
        witness: BallFamily,
    },
}

impl GraphVerdict {
    pub fn is_helly(&self) -> bool {
        matches!(self, Self::Helly)
    }

    pub fn witness(&self) -> Option<&BallFamily> {
        match self {
            Self::Helly => None,
            Self::NotHelly { witness } => Some(witness),
        }
    }
}

/// Checks that `fam` is pairwise intersecting with empty total intersection.
pub fn verify_counterexample(g: &FiniteGraph, fam: &BallFamily) -> Result<(), HellyGraphError> {
    g.require_connected()?;
    let dist = g.distance_matrix();
    let diameter = dist.iter().flatten().copied().max().unwrap_or(0);
    fam.validate(g, diameter)?;
    if fam.is_empty() {
        return Err(HellyGraphError::InvalidWitness("empty family".into()));
    }
    if !fam.pairwise_intersecting(&dist) {
        return Err(HellyGraphError::InvalidWitness(
            "balls are not pairwise intersecting".into(),
        ));
    }
    if let Some(v) = fam.intersection(&dist).first() {
        return Err(HellyGraphError::InvalidWitness(format!(
            "vertex {v} lies in every ball"
        )));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HellySearchConfig {
    pub vertex_cap: usize,
    pub workers: usize,
}

impl Default for HellySearchConfig {
    fn default() -> Self {
        Self {
            vertex_cap: DEFAULT_VERTEX_CAP,
            workers: 1,
        }
    }
}

type Choice = (usize, u32);

enum Extension {
    /// Fails the pairwise condition with an earlier ball.
    Pruned,
    /// Contains the current intersection, so adding it changes nothing; larger radii too.
    Subsumed,
    Next(FixedBitSet),
    Witness,
}

enum Task {
    State { chosen: Vec<Choice>, inter: FixedBitSet },
    Witness(Vec<Choice>),
}

struct Search {
    n: usize,
    diameter: u32,
    dist: Vec<Vec<u32>>,
    /// `balls[v][r]` for `r ≤ diameter`.
    balls: Vec<Vec<FixedBitSet>>,
}

impl Search {
    fn new(g: &FiniteGraph) -> Self {
        let n = g.vertex_count();
        let dist = g.distance_matrix();
        let diameter = dist.iter().flatten().copied().max().unwrap_or(0);
        let balls = (0..n)
            .map(|v| {
                (0..=diameter)
                    .map(|r| {
                        let mut b = FixedBitSet::with_capacity(n);
                        b.extend((0..n).filter(|&u| dist[v][u] <= r));
                        b
                    })
                    .collect()
            })
            .collect();
        Self {
            n,
            diameter,
            dist,
            balls,
        }
    }

    fn extend(&self, v: usize, r: u32, chosen: &[Choice], inter: &FixedBitSet) -> Extension {
        let ball = &self.balls[v][r as usize];
        if inter.is_subset(ball) {
            return Extension::Subsumed;
        }
        if chosen.iter().any(|&(u, s)| self.dist[u][v] > r + s) {
            return Extension::Pruned;
        }
        let mut next = inter.clone();
        next.intersect_with(ball);
        if next.is_clear() {
            Extension::Witness
        } else {
            Extension::Next(next)
        }
    }

    /// Radius options at a center, skipping singletons: a pairwise intersecting family
    /// containing `{v}` has `v` in every ball.
    fn radii(&self) -> std::ops::RangeInclusive<u32> {
        1..=self.diameter
    }

    fn dfs(&self, v: usize, chosen: &mut Vec<Choice>, inter: &FixedBitSet) -> Option<Vec<Choice>> {
        if v == self.n {
            return None;
        }
        if let Some(w) = self.dfs(v + 1, chosen, inter) {
            return Some(w);
        }
        for r in self.radii() {
            match self.extend(v, r, chosen, inter) {
                Extension::Pruned => continue,
                Extension::Subsumed => break,
                Extension::Witness => {
                    let mut w = chosen.clone();
                    w.push((v, r));
                    return Some(w);
                }
                Extension::Next(next) => {
                    chosen.push((v, r));
                    let found = self.dfs(v + 1, chosen, &next);
                    chosen.pop();
                    if found.is_some() {
                        return found;
                    }
                }
            }
        }
        None
    }

    /// Search states after the first `depth` centers, in depth-first order.
    fn tasks(&self, v: usize, depth: usize, chosen: &mut Vec<Choice>, inter: &FixedBitSet, out: &mut Vec<Task>) {
        if v == depth {
            out.push(Task::State {
                chosen: chosen.clone(),
                inter: inter.clone(),
            });
            return;
        }
        self.tasks(v + 1, depth, chosen, inter, out);
        for r in self.radii() {
            match self.extend(v, r, chosen, inter) {
                Extension::Pruned => continue,
                Extension::Subsumed => break,
                Extension::Witness => {
                    let mut w = chosen.clone();
                    w.push((v, r));
                    out.push(Task::Witness(w));
                }
                Extension::Next(next) => {
                    chosen.push((v, r));
                    self.tasks(v + 1, depth, chosen, &next, out);
                    chosen.pop();
                }
            }
        }
    }

    fn run(&self, workers: usize) -> Option<Vec<Choice>> {
        let mut full = FixedBitSet::with_capacity(self.n);
        full.insert_range(..);
        let depth = self.n.min(2);
        let mut tasks = Vec::new();
        self.tasks(0, depth, &mut Vec::new(), &full, &mut tasks);
        let run = || {
            tasks
                .par_iter()
                .with_min_len(1)
                .map(|t| match t {
                    Task::Witness(w) => Some(w.clone()),
                    Task::State { chosen, inter } => self.dfs(depth, &mut chosen.clone(), inter),
                })
                .find_map_first(|r| r)
        };
        match rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build() {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        }
    }
}

fn check_size(g: &FiniteGraph, cap: usize) -> Result<(), HellyGraphError> {
    if g.vertex_count() > cap {
        return Err(HellyGraphError::GraphTooLarge {
            vertices: g.vertex_count(),
            cap,
        });
    }
    g.require_connected()
}

fn to_verdict(g: &FiniteGraph, found: Option<Vec<Choice>>) -> Result<GraphVerdict, HellyGraphError> {
    match found {
        None => Ok(GraphVerdict::Helly),
        Some(w) => {
            let witness = BallFamily::new(w.into_iter().map(|(center, radius)| Ball { center, radius }));
            verify_counterexample(g, &witness)?;
            Ok(GraphVerdict::NotHelly { witness })
        }
    }
}

/// Exhaustive Helly test with pruning.
///
/// Families are explored center by center, each center unused or given a radius. Branches
/// are cut when the pairwise condition fails, when a ball contains the running
/// intersection, and at radius 0. The first counterexample in depth-first order is
/// returned, independent of the number of workers.
pub fn is_helly(g: &FiniteGraph, config: &HellySearchConfig) -> Result<GraphVerdict, HellyGraphError> {
    check_size(g, config.vertex_cap)?;
    let found = Search::new(g).run(config.workers);
    to_verdict(g, found)
}

/// Plain enumeration of every assignment `center ↦ {unused, 0..=diameter}`.
pub fn is_helly_unpruned(g: &FiniteGraph, vertex_cap: usize) -> Result<GraphVerdict, HellyGraphError> {
    check_size(g, vertex_cap)?;
    let n = g.vertex_count();
    let dist = g.distance_matrix();
    let diameter = dist.iter().flatten().copied().max().unwrap_or(0);
    // digit 0 is unused, digit k is radius k - 1
    let base = diameter + 2;
    let mut digits = vec![0u32; n];
    loop {
        let fam = BallFamily::new(
            digits
                .iter()
                .enumerate()
                .filter(|(_, &d)| d > 0)
                .map(|(center, &d)| Ball { center, radius: d - 1 }),
        );
        if !fam.is_empty() && fam.pairwise_intersecting(&dist) && fam.intersection(&dist).is_empty() {
            return to_verdict(g, Some(fam.members.iter().map(|b| (b.center, b.radius)).collect()));
        }
        let Some(i) = (0..n).rev().find(|&i| digits[i] + 1 < base) else {
            return Ok(GraphVerdict::Helly);
        };
        digits[i] += 1;
        digits[i + 1..].iter_mut().for_each(|d| *d = 0);
    }
}

/// Outcome of [`grid_box_helly`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridBoxReport {
    pub dim: usize,
    pub side: usize,
    pub vertices: usize,
    /// The graph metric equals the ℓ∞ distance, so every ball is a product of intervals.
    pub metric_is_linf: bool,
    /// How the one-dimensional factor was checked: `"exhaustive"` or `"interval"`.
    pub factor_check: String,
    pub factor_helly: bool,
    pub helly: bool,
}

/// Helly test for the king graph on `{0..side}ⁿ`.
///
/// Balls are axis boxes once the graph metric is checked to be ℓ∞ on every pair, and a
/// family of boxes meets pairwise iff each coordinate projection does. So the box is Helly
/// iff the path `{0..side}` is, which is checked exhaustively when small and otherwise by
/// confirming its balls are intervals.
pub fn grid_box_helly(dim: usize, side: usize, cap: usize) -> Result<GridBoxReport, HellyGraphError> {
    if dim == 0 {
        return Err(HellyGraphError::InvalidInput("dimension must be positive".into()));
    }
    let vertices = (side + 1)
        .checked_pow(dim as u32)
        .filter(|&v| v <= cap)
        .ok_or(HellyGraphError::GraphTooLarge {
            vertices: (side + 1).saturating_pow(dim as u32),
            cap,
        })?;
    let g = FiniteGraph::grid_box(dim, side);
    let metric_is_linf = (0..vertices).all(|u| {
        let cu = grid_coords(u, dim, side);
        g.bfs(u).iter().enumerate().all(|(v, &d)| {
            let cv = grid_coords(v, dim, side);
            let linf = cu.iter().zip(&cv).map(|(a, b)| a.abs_diff(*b)).max().unwrap_or(0);
            d as usize == linf
        })
    });
    let path = FiniteGraph::path(side + 1);
    let (factor_check, factor_helly) = if side < DEFAULT_VERTEX_CAP {
        let v = is_helly(&path, &HellySearchConfig::default())?;
        ("exhaustive", v.is_helly())
    } else {
        let intervals = path.distance_matrix().iter().all(|row| {
            (0..=side as u32).all(|r| {
                let members: Vec<usize> = (0..=side).filter(|&v| row[v] <= r).collect();
                members.windows(2).all(|w| w[1] == w[0] + 1)
            })
        });
        ("interval", intervals)
    };
    Ok(GridBoxReport {
        dim,
        side,
        vertices,
        metric_is_linf,
        factor_check: factor_check.into(),
        factor_helly,
        helly: metric_is_linf && factor_helly,
    })
}

/// Finite ball of a Cayley graph, as an induced subgraph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CayleyBallGraph {
    pub graph: FiniteGraph,
    pub radius: u32,
    /// Word length of each vertex.
    pub word_length: Vec<u32>,
    /// Vertices at word length below `radius`.
    pub interior: Vec<bool>,
    /// Always set: Helly properties of a finite ball say nothing about the whole group.
    pub boundary_caveat: bool,
}

fn ball_graph<G: CayleyGroup>(
    group: &G,
    radius: u32,
    budget: usize,
    label: impl Fn(&G::Elem) -> String,
) -> Result<CayleyBallGraph, HellyGraphError> {
    let ball = cayley::ball(group, radius, budget)?;
    let mut edges = Vec::new();
    for (i, x) in ball.elements.iter().enumerate() {
        for s in group.generators() {
            if let Some(&j) = ball.index.get(&group.mul(x, s)) {
                if i < j {
                    edges.push([i, j]);
                }
            }
        }
    }
    let labels = ball.elements.iter().map(label).collect();
    let graph = FiniteGraph::from_edges(ball.len(), &edges)?.with_labels(labels)?;
    Ok(CayleyBallGraph {
        graph,
        radius,
        interior: ball.dist.iter().map(|&d| d < radius).collect(),
        word_length: ball.dist,
        boundary_caveat: true,
    })
}

/// Induced subgraph of the Cayley graph on the ball of radius `radius`.
pub fn cayley_graph(
    spec: &WordMetricSpec,
    radius: u32,
    budget: usize,
) -> Result<CayleyBallGraph, HellyGraphError> {
    spec.validate()?;
    match spec {
        WordMetricSpec::Abelian { .. } => ball_graph(&spec.lattice_group()?, radius, budget, |p| {
            let coords: Vec<String> = p.iter().map(i64::to_string).collect();
            format!("({})", coords.join(","))
        }),
        WordMetricSpec::PulledBack { .. } => ball_graph(&spec.affine_group()?, radius, budget, |g| {
            let t: Vec<String> = g.translation.iter().map(|x| x.to_string()).collect();
            format!("{} + ({})", g.linear, t.join(","))
        }),
    }
}
