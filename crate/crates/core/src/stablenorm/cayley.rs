//! Breadth-first search in Cayley graphs of Zⁿ and of affine crystallographic groups.

use std::collections::HashMap;
use std::hash::Hash;

use crate::crystal::AffineIsometry;

use super::StableNormError;

/// A group presented by a finite symmetric generating set, for Cayley-graph BFS.
pub trait CayleyGroup {
    type Elem: Clone + Eq + Hash;

    fn identity(&self) -> Self::Elem;

    /// Symmetric generating set; the Cayley graph joins `g` to `g·s`.
    fn generators(&self) -> &[Self::Elem];

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
}

/// Zⁿ with a symmetric set of integer generators.
#[derive(Clone, Debug)]
pub struct LatticeGroup {
    pub dim: usize,
    pub generators: Vec<Vec<i64>>,
}

impl CayleyGroup for LatticeGroup {
    type Elem = Vec<i64>;

    fn identity(&self) -> Vec<i64> {
        vec![0; self.dim]
    }

    fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    fn mul(&self, a: &Vec<i64>, b: &Vec<i64>) -> Vec<i64> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }
}

/// A group of affine maps, generated by the given maps and their inverses.
#[derive(Clone, Debug)]
pub struct AffineGroup {
    pub dim: usize,
    pub generators: Vec<AffineIsometry>,
}

impl AffineGroup {
    /// Symmetrizes `gens` (appending inverses not already present).
    pub fn new(dim: usize, gens: Vec<AffineIsometry>) -> Result<Self, StableNormError> {
        let mut generators: Vec<AffineIsometry> = Vec::new();
        for g in gens {
            if !generators.contains(&g) {
                generators.push(g);
            }
        }
        let inverses = generators
            .iter()
            .map(AffineIsometry::inverse)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| StableNormError::InvalidSpec(e.to_string()))?;
        for inv in inverses {
            if !generators.contains(&inv) {
                generators.push(inv);
            }
        }
        Ok(Self { dim, generators })
    }
}

impl CayleyGroup for AffineGroup {
    type Elem = AffineIsometry;

    fn identity(&self) -> AffineIsometry {
        AffineIsometry::identity(self.dim)
    }

    fn generators(&self) -> &[AffineIsometry] {
        &self.generators
    }

    fn mul(&self, a: &AffineIsometry, b: &AffineIsometry) -> AffineIsometry {
        a.compose(b)
    }
}

/// The ball of a Cayley graph around a start vertex, with exact word distances.
#[derive(Clone, Debug)]
pub struct CayleyBall<E> {
    pub elements: Vec<E>,
    pub dist: Vec<u32>,
    pub index: HashMap<E, usize>,
    /// Every element within this distance of the start has been reached.
    pub radius: u32,
}

impl<E: Clone + Eq + Hash> CayleyBall<E> {
    pub fn distance(&self, e: &E) -> Option<u32> {
        self.index.get(e).map(|&i| self.dist[i])
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Layered BFS from `start`, stopping once `done(ball)` holds after a completed layer or
/// the radius reaches `max_radius`. At most `budget` vertices are stored.
pub fn bfs_layers<G: CayleyGroup>(
    group: &G,
    start: G::Elem,
    max_radius: Option<u32>,
    budget: usize,
    mut done: impl FnMut(&CayleyBall<G::Elem>) -> bool,
) -> Result<CayleyBall<G::Elem>, StableNormError> {
    let mut ball = CayleyBall {
        elements: vec![start.clone()],
        dist: vec![0],
        index: HashMap::from([(start, 0)]),
        radius: 0,
    };
    let mut layer_start = 0;
    loop {
        if done(&ball) || max_radius.is_some_and(|r| ball.radius >= r) {
            return Ok(ball);
        }
        let layer_end = ball.elements.len();
        if layer_start == layer_end {
            // finite group exhausted
            ball.radius = u32::MAX;
            return Ok(ball);
        }
        let next = ball.radius + 1;
        for i in layer_start..layer_end {
            for s in group.generators() {
                let y = group.mul(&ball.elements[i], s);
                if ball.index.contains_key(&y) {
                    continue;
                }
                if ball.elements.len() >= budget {
                    return Err(StableNormError::BudgetExceeded {
                        attained_radius: ball.radius,
                        visited: ball.elements.len(),
                    });
                }
                ball.index.insert(y.clone(), ball.elements.len());
                ball.elements.push(y);
                ball.dist.push(next);
            }
        }
        layer_start = layer_end;
        ball.radius = next;
    }
}

/// Ball of radius `radius` around the identity.
pub fn ball<G: CayleyGroup>(
    group: &G,
    radius: u32,
    budget: usize,
) -> Result<CayleyBall<G::Elem>, StableNormError> {
    bfs_layers(group, group.identity(), Some(radius), budget, |_| false)
}

/// Smallest identity-centred ball that contains every target.
pub fn ball_reaching<G: CayleyGroup>(
    group: &G,
    targets: &[G::Elem],
    budget: usize,
) -> Result<CayleyBall<G::Elem>, StableNormError> {
    bfs_layers(group, group.identity(), None, budget, |b| {
        targets.iter().all(|t| b.index.contains_key(t))
    })
}
