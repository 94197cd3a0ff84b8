//! Word metrics on Zⁿ, their directional growth rates, and the stable norm.
//!
//! For a proper, roughly geodesic, left-invariant metric `d` on Zⁿ the limit
//! `|z|_d = lim d(0, kz)/k` exists and is a norm; for a word metric it is the gauge of the
//! convex hull of the generators. This module computes exact BFS distances, brackets the
//! directional limits from finite samples, and evaluates the polytope norm exactly.
//!
//! Metrics pulled back from a crystallographic group `G` use the Cayley graph `Γ` of `G`
//! with basepoint the identity: `d_G(g₁, g₂) = d_Γ(g₁, g₂) + δ(g₁, g₂)`, where `δ` is the
//! discrete metric. Restricted to the pure translations this is a metric on the lattice.

pub mod cayley;
mod polytope;

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::crystal::{AffineIsometry, CrystalError, CrystalSpec};
use crate::exactcore::rational::{self, serde_rational, Rational};
use crate::exactcore::{linalg, qvec, FiniteMatrixGroup};

pub use cayley::{AffineGroup, CayleyBall, CayleyGroup, LatticeGroup};
pub use polytope::{
    check_glnz_isometry, polytope_invariance, stable_norm_polytope, NormPolytope,
    PolytopeInvariance,
};

/// Default cap on stored BFS states.
pub const DEFAULT_BFS_BUDGET: usize = 1_000_000;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum StableNormError {
    #[error("invalid metric JSON at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid word metric: {0}")]
    InvalidSpec(String),
    #[error("generator set is not symmetric: -{0:?} is missing")]
    NotSymmetric(Vec<i64>),
    #[error("generators span a rank-{rank} subspace of R^{dim}")]
    DegenerateSpan { rank: usize, dim: usize },
    #[error("BFS budget exhausted after {visited} states at radius {attained_radius}")]
    BudgetExceeded { attained_radius: u32, visited: usize },
    #[error("direction must be a nonzero integer vector of length {dim}")]
    BadDirection { dim: usize },
    #[error("operation needs an abelian word metric")]
    NotAbelian,
    #[error("translation by {0:?} is not in the group")]
    Unreachable(Vec<i64>),
    #[error("pure translation {0:?} of the crystal group is not integral")]
    NonLatticeTranslation(Vec<String>),
    #[error(transparent)]
    Crystal(#[from] CrystalError),
}

/// A word metric on Zⁿ, either directly or pulled back from a crystallographic group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WordMetricSpec {
    Abelian {
        dim: usize,
        generators: Vec<Vec<i64>>,
    },
    PulledBack {
        crystal: CrystalSpec,
        /// Extra generators as words over the crystal generators: `+i` is generator `i`
        /// (1-based), `-i` its inverse.
        words: Vec<Vec<i64>>,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum MetricKind {
    Abelian,
    PulledBack,
}

#[derive(Serialize, Deserialize)]
struct MetricRepr {
    kind: MetricKind,
    dim: usize,
    #[serde(default)]
    generators: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    crystal: Option<CrystalSpec>,
}

impl WordMetricSpec {
    pub fn abelian(generators: Vec<Vec<i64>>) -> Result<Self, StableNormError> {
        let dim = generators.first().map_or(0, Vec::len);
        let spec = Self::Abelian { dim, generators };
        spec.validate()?;
        Ok(spec)
    }

    /// `{±v : v ∈ gens}`, without duplicates.
    pub fn symmetric(gens: &[Vec<i64>]) -> Result<Self, StableNormError> {
        let mut all: Vec<Vec<i64>> = Vec::new();
        for g in gens {
            for v in [g.clone(), g.iter().map(|x| -x).collect()] {
                if !all.contains(&v) {
                    all.push(v);
                }
            }
        }
        Self::abelian(all)
    }

    pub fn pulled_back(crystal: CrystalSpec, words: Vec<Vec<i64>>) -> Result<Self, StableNormError> {
        let spec = Self::PulledBack { crystal, words };
        spec.validate()?;
        Ok(spec)
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Abelian { dim, .. } => *dim,
            Self::PulledBack { crystal, .. } => crystal.dim,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, StableNormError> {
        let repr: MetricRepr = serde_json::from_str(text).map_err(|e| StableNormError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let spec = match repr.kind {
            MetricKind::Abelian => Self::Abelian {
                dim: repr.dim,
                generators: repr.generators,
            },
            MetricKind::PulledBack => {
                let crystal = repr.crystal.ok_or_else(|| {
                    StableNormError::InvalidSpec("pulled_back metric needs a crystal".into())
                })?;
                if crystal.dim != repr.dim {
                    return Err(StableNormError::InvalidSpec(format!(
                        "metric dim {} but crystal dim {}",
                        repr.dim, crystal.dim
                    )));
                }
                Self::PulledBack {
                    crystal,
                    words: repr.generators,
                }
            }
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        let repr = match self {
            Self::Abelian { dim, generators } => MetricRepr {
                kind: MetricKind::Abelian,
                dim: *dim,
                generators: generators.clone(),
                crystal: None,
            },
            Self::PulledBack { crystal, words } => MetricRepr {
                kind: MetricKind::PulledBack,
                dim: crystal.dim,
                generators: words.clone(),
                crystal: Some(crystal.clone()),
            },
        };
        serde_json::to_string_pretty(&repr).expect("metric specs serialize")
    }

    pub fn validate(&self) -> Result<(), StableNormError> {
        match self {
            Self::Abelian { dim, generators } => {
                if *dim == 0 {
                    return Err(StableNormError::InvalidSpec("dimension must be positive".into()));
                }
                if let Some(g) = generators.iter().find(|g| g.len() != *dim) {
                    return Err(StableNormError::InvalidSpec(format!(
                        "generator {g:?} does not have length {dim}"
                    )));
                }
                if generators.iter().any(|g| g.iter().all(|&x| x == 0)) {
                    return Err(StableNormError::InvalidSpec("zero generator".into()));
                }
                for g in generators {
                    let neg: Vec<i64> = g.iter().map(|x| -x).collect();
                    if !generators.contains(&neg) {
                        return Err(StableNormError::NotSymmetric(g.clone()));
                    }
                }
                let rows: Vec<Vec<Rational>> = generators.iter().map(|g| qvec(g)).collect();
                let rank = linalg::rank(&rows);
                if rank < *dim {
                    return Err(StableNormError::DegenerateSpan { rank, dim: *dim });
                }
                Ok(())
            }
            Self::PulledBack { crystal, words } => {
                crystal.validate()?;
                let k = crystal.generators.len() as i64;
                for w in words {
                    if w.is_empty() || w.iter().any(|&i| i == 0 || i.abs() > k) {
                        return Err(StableNormError::InvalidSpec(format!(
                            "word {w:?} must use letters ±1..±{k}"
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    pub fn lattice_group(&self) -> Result<LatticeGroup, StableNormError> {
        match self {
            Self::Abelian { dim, generators } => Ok(LatticeGroup {
                dim: *dim,
                generators: generators.clone(),
            }),
            Self::PulledBack { .. } => Err(StableNormError::NotAbelian),
        }
    }

    /// The crystal group with its generators and the extra words, symmetrized.
    pub fn affine_group(&self) -> Result<AffineGroup, StableNormError> {
        let Self::PulledBack { crystal, words } = self else {
            return Err(StableNormError::NotAbelian);
        };
        let base = crystal.affine_generators();
        let mut gens = base.clone();
        for w in words {
            let mut acc = AffineIsometry::identity(crystal.dim);
            for &letter in w {
                let g = &base[(letter.unsigned_abs() - 1) as usize];
                let g = if letter > 0 {
                    g.clone()
                } else {
                    g.inverse()
                        .map_err(|e| StableNormError::InvalidSpec(e.to_string()))?
                };
                acc = acc.compose(&g);
            }
            gens.push(acc);
        }
        AffineGroup::new(crystal.dim, gens)
    }
}

fn integral_translation(g: &AffineIsometry) -> Result<Vec<i64>, StableNormError> {
    g.translation
        .iter()
        .map(rational::to_i64)
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| {
            StableNormError::NonLatticeTranslation(
                g.translation.iter().map(rational::format_rational).collect(),
            )
        })
}

/// Symmetric abelian metric generated by the orbits of `seeds` under an integral group.
pub fn orbit_metric(
    group: &FiniteMatrixGroup,
    seeds: &[Vec<i64>],
) -> Result<WordMetricSpec, StableNormError> {
    let mut orbit: Vec<Vec<i64>> = Vec::new();
    for seed in seeds {
        if seed.len() != group.dim() {
            return Err(StableNormError::BadDirection { dim: group.dim() });
        }
        for g in group.elements() {
            let v: Option<Vec<i64>> = g.mul_vec(&qvec(seed)).iter().map(rational::to_i64).collect();
            let v = v.ok_or_else(|| StableNormError::InvalidSpec("group is not integral".into()))?;
            if !orbit.contains(&v) {
                orbit.push(v);
            }
        }
    }
    WordMetricSpec::symmetric(&orbit)
}

/// Exact metric distance from the origin to every lattice point whose Cayley-graph
/// distance is at most `radius`.
///
/// For pulled-back metrics the keys are the pure translations of the crystal group and the
/// values include the `+1` discrete term for every non-identity element.
pub fn ball_growth(
    spec: &WordMetricSpec,
    radius: u32,
    budget: usize,
) -> Result<BTreeMap<Vec<i64>, u64>, StableNormError> {
    match spec {
        WordMetricSpec::Abelian { .. } => {
            let b = cayley::ball(&spec.lattice_group()?, radius, budget)?;
            Ok(b.elements
                .into_iter()
                .zip(b.dist)
                .map(|(p, d)| (p, d as u64))
                .collect())
        }
        WordMetricSpec::PulledBack { .. } => {
            let b = cayley::ball(&spec.affine_group()?, radius, budget)?;
            let mut out = BTreeMap::new();
            for (g, d) in b.elements.iter().zip(&b.dist) {
                if g.is_translation() {
                    let delta = u64::from(*d > 0);
                    out.insert(integral_translation(g)?, *d as u64 + delta);
                }
            }
            Ok(out)
        }
    }
}

/// Metric distances `d(0, p)` for the given lattice points.
pub fn distances_to(
    spec: &WordMetricSpec,
    points: &[Vec<i64>],
    budget: usize,
) -> Result<Vec<u64>, StableNormError> {
    let dim = spec.dim();
    if points.iter().any(|p| p.len() != dim) {
        return Err(StableNormError::BadDirection { dim });
    }
    match spec {
        WordMetricSpec::Abelian { .. } => {
            let b = cayley::ball_reaching(&spec.lattice_group()?, points, budget)?;
            points
                .iter()
                .map(|p| {
                    b.distance(p)
                        .map(u64::from)
                        .ok_or_else(|| StableNormError::Unreachable(p.clone()))
                })
                .collect()
        }
        WordMetricSpec::PulledBack { .. } => {
            let group = spec.affine_group()?;
            let targets: Vec<AffineIsometry> = points
                .iter()
                .map(|p| AffineIsometry::translation_by(qvec(p)))
                .collect();
            let b = cayley::ball_reaching(&group, &targets, budget)?;
            targets
                .iter()
                .zip(points)
                .map(|(t, p)| {
                    b.distance(t)
                        .map(|d| d as u64 + u64::from(d > 0))
                        .ok_or_else(|| StableNormError::Unreachable(p.clone()))
                })
                .collect()
        }
    }
}

/// Bracket on the directional limit `lim d(0, kz)/k`.
///
/// `upper` is the running minimum of `d(0, kz)/k`, valid for any subadditive sequence.
/// `lower` is `max (d(0, kz) − C)/k` where `C` is the largest superadditivity defect
/// `d(0, az) + d(0, bz) − d(0, (a+b)z)` observed on the sampled pairs. That `C` is a
/// measured surrogate for the global rough constant, not a proven bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DirectionalEstimate {
    pub direction: Vec<i64>,
    pub samples: Vec<(u64, u64)>,
    #[serde(with = "serde_rational")]
    pub lower: Rational,
    #[serde(with = "serde_rational")]
    pub upper: Rational,
    pub measured_defect: u64,
    pub defect_is_measured: bool,
}

impl DirectionalEstimate {
    pub fn width(&self) -> Rational {
        &self.upper - &self.lower
    }

    pub fn contains(&self, value: &Rational) -> bool {
        &self.lower <= value && value <= &self.upper
    }

    /// Samples as `k,distance` lines with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,distance\n");
        for (k, d) in &self.samples {
            out.push_str(&format!("{k},{d}\n"));
        }
        out
    }

    /// Bracket computed from samples with `k ≤ k_max` only.
    pub fn truncated(&self, k_max: u64) -> Self {
        let samples: Vec<(u64, u64)> =
            self.samples.iter().copied().filter(|(k, _)| *k <= k_max).collect();
        bracket(self.direction.clone(), samples)
    }
}

/// Geometric schedule `1, 2, 4, …` up to `k_max`.
pub fn sample_schedule(k_max: u64) -> Vec<u64> {
    std::iter::successors(Some(1u64), |k| k.checked_mul(2))
        .take_while(|&k| k <= k_max)
        .collect()
}

fn bracket(direction: Vec<i64>, samples: Vec<(u64, u64)>) -> DirectionalEstimate {
    let lookup: BTreeMap<u64, u64> = samples.iter().copied().collect();
    let mut defect = 0u64;
    for (&a, &da) in &lookup {
        for (&b, &db) in lookup.range(a..) {
            if let Some(&dab) = lookup.get(&(a + b)) {
                defect = defect.max((da + db).saturating_sub(dab));
            }
        }
    }
    let ratio = |num: i64, k: u64| Rational::new(num.into(), (k as i64).into());
    let upper = samples
        .iter()
        .map(|&(k, d)| ratio(d as i64, k))
        .min()
        .unwrap_or_else(Rational::zero);
    let lower = samples
        .iter()
        .map(|&(k, d)| ratio(d as i64 - defect as i64, k))
        .max()
        .unwrap_or_else(Rational::zero)
        .max(Rational::zero());
    DirectionalEstimate {
        direction,
        samples,
        lower,
        upper,
        measured_defect: defect,
        defect_is_measured: true,
    }
}

/// Samples `d(0, kz)` on the geometric schedule up to `k_max` and brackets the limit.
pub fn directional_limit(
    spec: &WordMetricSpec,
    z: &[i64],
    k_max: u64,
    budget: usize,
) -> Result<DirectionalEstimate, StableNormError> {
    let dim = spec.dim();
    if z.len() != dim || z.iter().all(|&x| x == 0) || k_max == 0 {
        return Err(StableNormError::BadDirection { dim });
    }
    let ks = sample_schedule(k_max);
    let points: Vec<Vec<i64>> = ks
        .iter()
        .map(|&k| z.iter().map(|x| x * k as i64).collect())
        .collect();
    let dists = distances_to(spec, &points, budget)?;
    Ok(bracket(z.to_vec(), ks.into_iter().zip(dists).collect()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    /// Maximum difference unchanged between the two largest radii.
    Stabilizing,
    /// Maximum difference still increasing: the stable norms differ somewhere.
    Growing,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoughProbe {
    pub radii: Vec<u32>,
    pub max_difference: Vec<u64>,
    /// Point attaining the maximum at the largest radius.
    pub witness: Option<Vec<i64>>,
    pub trend: Trend,
}

/// Largest `|d₁(0,x) − d₂(0,x)|` over points within distance `r` in both metrics, for
/// `r ∈ {R/4, R/2, R}`. An empirical probe of rough equivalence, not a proof.
pub fn rough_equivalence_probe(
    spec1: &WordMetricSpec,
    spec2: &WordMetricSpec,
    radius: u32,
    budget: usize,
) -> Result<RoughProbe, StableNormError> {
    if spec1.dim() != spec2.dim() {
        return Err(StableNormError::InvalidSpec("metrics live on different lattices".into()));
    }
    let b1 = ball_growth(spec1, radius, budget)?;
    let b2 = ball_growth(spec2, radius, budget)?;
    let mut radii: Vec<u32> = [radius / 4, radius / 2, radius]
        .into_iter()
        .filter(|&r| r > 0)
        .collect();
    radii.dedup();
    let mut max_difference = Vec::new();
    let mut witness = None;
    for &r in &radii {
        let mut best: (u64, Option<&Vec<i64>>) = (0, None);
        for (p, &d1) in &b1 {
            let Some(&d2) = b2.get(p) else { continue };
            if d1 > r as u64 || d2 > r as u64 {
                continue;
            }
            let diff = d1.abs_diff(d2);
            if diff > best.0 || best.1.is_none() {
                best = (diff, Some(p));
            }
        }
        max_difference.push(best.0);
        witness = best.1.cloned();
    }
    let trend = match max_difference.as_slice() {
        [.., a, b] if b > a => Trend::Growing,
        _ => Trend::Stabilizing,
    };
    Ok(RoughProbe {
        radii,
        max_difference,
        witness,
        trend,
    })
}

#[cfg(test)]
mod tests;
