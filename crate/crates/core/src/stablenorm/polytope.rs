use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::exactcore::rational::{serde_rational_vecs, Rational};
use crate::exactcore::{linalg, qvec, FiniteMatrixGroup, MatQ};

use super::{StableNormError, WordMetricSpec};

/// Centrally symmetric, full-dimensional polytope used as a unit ball.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormPolytope {
    pub dim: usize,
    #[serde(with = "serde_rational_vecs")]
    pub vertices: Vec<Vec<Rational>>,
}

/// Index subsets of `0..n` of size `k`, in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] != i + n - k) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Nonnegative combinations `x = Σ μᵢ·vectors[bᵢ]` over linearly independent subsets `b`
/// of size `rank`. By Carathéodory, `x` is in the cone of `vectors` iff one of these exists,
/// and every basic solution of a linear program over that cone shows up here.
fn basic_cone_solutions(
    vectors: &[Vec<Rational>],
    x: &[Rational],
    rank: usize,
) -> Vec<Vec<Rational>> {
    let mut out = Vec::new();
    for subset in combinations(vectors.len(), rank) {
        let cols: Vec<Vec<Rational>> = subset.iter().map(|&i| vectors[i].clone()).collect();
        if linalg::rank(&cols) < rank {
            continue;
        }
        if let Some(mu) = linalg::solve_combination(&cols, x) {
            if mu.iter().all(|m| !m.is_negative()) {
                out.push(mu);
            }
        }
    }
    out
}

fn in_convex_hull(points: &[Vec<Rational>], x: &[Rational]) -> bool {
    if points.is_empty() {
        return false;
    }
    let lift = |p: &[Rational]| -> Vec<Rational> {
        let mut v = p.to_vec();
        v.push(Rational::one());
        v
    };
    let lifted: Vec<Vec<Rational>> = points.iter().map(|p| lift(p)).collect();
    let rank = linalg::rank(&lifted);
    // x is in the hull iff (x, 1) is a nonnegative combination of the lifted points; a
    // solution over a rank-sized independent subset exists whenever any solution does
    let target = lift(x);
    (1..=rank).any(|r| !basic_cone_solutions(&lifted, &target, r).is_empty())
}

impl NormPolytope {
    /// Convex hull of a centrally symmetric, spanning point set, reduced to its vertices.
    pub fn from_points(dim: usize, points: &[Vec<Rational>]) -> Result<Self, StableNormError> {
        let set: BTreeSet<Vec<Rational>> = points.iter().cloned().collect();
        for p in &set {
            let neg: Vec<Rational> = p.iter().map(|x| -x).collect();
            if !set.contains(&neg) {
                return Err(StableNormError::InvalidSpec("point set is not centrally symmetric".into()));
            }
        }
        let pts: Vec<Vec<Rational>> = set.into_iter().collect();
        let rank = linalg::rank(&pts);
        if rank < dim {
            return Err(StableNormError::DegenerateSpan { rank, dim });
        }
        let vertices = pts
            .iter()
            .enumerate()
            .filter(|(i, p)| {
                let others: Vec<Vec<Rational>> = pts
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| j != i)
                    .map(|(_, q)| q.clone())
                    .collect();
                !in_convex_hull(&others, p)
            })
            .map(|(_, p)| p.clone())
            .collect();
        Ok(Self { dim, vertices })
    }

    /// Gauge `min { t ≥ 0 : x ∈ t·P }`, computed exactly as the least `Σ μᵢ` over
    /// nonnegative vertex combinations equal to `x`.
    pub fn norm(&self, x: &[Rational]) -> Rational {
        assert_eq!(x.len(), self.dim, "vector dimension mismatch");
        if x.iter().all(Zero::is_zero) {
            return Rational::zero();
        }
        basic_cone_solutions(&self.vertices, x, self.dim)
            .into_iter()
            .map(|mu| mu.into_iter().sum::<Rational>())
            .min()
            .expect("a full-dimensional symmetric polytope absorbs every vector")
    }

    pub fn norm_int(&self, x: &[i64]) -> Rational {
        self.norm(&qvec(x))
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.norm(x) <= Rational::one()
    }

    pub fn vertex_set(&self) -> BTreeSet<Vec<Rational>> {
        self.vertices.iter().cloned().collect()
    }
}

/// Unit ball of the stable norm of an abelian word metric: the convex hull of the generators.
pub fn stable_norm_polytope(spec: &WordMetricSpec) -> Result<NormPolytope, StableNormError> {
    let WordMetricSpec::Abelian { dim, generators } = spec else {
        return Err(StableNormError::NotAbelian);
    };
    spec.validate()?;
    let pts: Vec<Vec<Rational>> = generators.iter().map(|g| qvec(g)).collect();
    NormPolytope::from_points(*dim, &pts)
}

/// Whether `f` permutes the vertex set of `poly`, i.e. is a linear isometry of its norm.
pub fn check_glnz_isometry(poly: &NormPolytope, f: &MatQ) -> bool {
    if f.rows() != poly.dim || f.cols() != poly.dim {
        return false;
    }
    let image: BTreeSet<Vec<Rational>> = poly.vertices.iter().map(|v| f.mul_vec(v)).collect();
    image == poly.vertex_set()
}

/// Result of testing every element of a finite linear group against a norm polytope.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolytopeInvariance {
    pub group_order: usize,
    /// Indices of elements that do not permute the vertex set.
    pub failures: Vec<usize>,
    pub invariant: bool,
}

pub fn polytope_invariance(poly: &NormPolytope, group: &FiniteMatrixGroup) -> PolytopeInvariance {
    let failures: Vec<usize> = (0..group.len())
        .filter(|&i| !check_glnz_isometry(poly, group.element(i)))
        .collect();
    PolytopeInvariance {
        group_order: group.len(),
        invariant: failures.is_empty(),
        failures,
    }
}
