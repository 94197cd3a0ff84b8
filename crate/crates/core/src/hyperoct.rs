//! Deciding whether a finite point group is conjugate, in GLₙ(R), into the hyperoctahedral
//! group Bₙ of signed permutation matrices (the linear isometries of (Rⁿ, ℓ∞)).
//!
//! Two faithful real representations of a finite group are conjugate exactly when their
//! characters agree. So `P' ≤ GLₙ(Q)` conjugates into Bₙ iff there is a homomorphism
//! `h: P' → Bₙ` with `tr h(g) = tr g` for every `g`. The search below looks for such an `h`
//! generator by generator; when one exists, averaging a probe matrix `X` over the group,
//! `T = Σ h(g)·X·g⁻¹`, gives an intertwiner with `T·g = h(g)·T`, and any invertible one is
//! a rational conjugator.

use std::sync::atomic::{AtomicU64, Ordering};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::exactcore::rational;
use crate::exactcore::{FiniteMatrixGroup, MatQ};

pub const DEFAULT_MAX_DIM: usize = 6;
pub const DEFAULT_MAX_GENERATORS: usize = 4;
pub const DEFAULT_PROBE_SEED: u64 = 0x5eed_b00c;
const RANDOM_PROBES: usize = 16;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum HyperoctError {
    #[error("dimension {dim} exceeds the configured bound {max}")]
    DimensionTooLarge { dim: usize, max: usize },
    #[error("{generators} irredundant generators exceed the configured bound {max}")]
    SearchBudgetExceeded { generators: usize, max: usize },
    #[error("no invertible intertwiner after {probes} probes")]
    IntertwinerNotFound { probes: usize },
    #[error("certificate check failed: {0}")]
    BadCertificate(String),
}

/// Signed permutation `e_j ↦ signs[j]·e_{perm[j]}` (0-based internally).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPerm {
    perm: Vec<usize>,
    signs: Vec<i8>,
}

impl SignedPerm {
    pub fn new(perm: Vec<usize>, signs: Vec<i8>) -> Option<Self> {
        let n = perm.len();
        if signs.len() != n || signs.iter().any(|&s| s != 1 && s != -1) {
            return None;
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return None;
            }
            seen[p] = true;
        }
        Some(Self { perm, signs })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            perm: (0..n).collect(),
            signs: vec![1; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// Recognizes a matrix with exactly one ±1 in every row and column.
    pub fn from_matrix(m: &MatQ) -> Option<Self> {
        if !m.is_square() {
            return None;
        }
        let n = m.rows();
        let one = rational::one();
        let minus = -rational::one();
        let mut perm = Vec::with_capacity(n);
        let mut signs = Vec::with_capacity(n);
        for j in 0..n {
            let mut hit = None;
            for i in 0..n {
                let e = m.get(i, j);
                if e.is_zero() {
                    continue;
                }
                if hit.is_some() {
                    return None;
                }
                let s = if *e == one {
                    1
                } else if *e == minus {
                    -1
                } else {
                    return None;
                };
                hit = Some((i, s));
            }
            let (i, s) = hit?;
            perm.push(i);
            signs.push(s);
        }
        Self::new(perm, signs)
    }

    pub fn to_matrix(&self) -> MatQ {
        let n = self.dim();
        let mut m = MatQ::zeros(n, n);
        for j in 0..n {
            m.set(self.perm[j], j, rational::int(self.signs[j] as i64));
        }
        m
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let n = self.dim();
        let mut perm = Vec::with_capacity(n);
        let mut signs = Vec::with_capacity(n);
        for j in 0..n {
            let k = other.perm[j];
            perm.push(self.perm[k]);
            signs.push(other.signs[j] * self.signs[k]);
        }
        Self { perm, signs }
    }

    pub fn trace(&self) -> i64 {
        (0..self.dim())
            .filter(|&j| self.perm[j] == j)
            .map(|j| self.signs[j] as i64)
            .sum()
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(j, &p)| p == j) && self.signs.iter().all(|&s| s == 1)
    }

    pub fn order(&self) -> usize {
        let mut x = self.clone();
        let mut k = 1;
        while !x.is_identity() {
            x = x.compose(self);
            k += 1;
        }
        k
    }

    /// Permutation in 1-based one-line notation.
    pub fn one_line(&self) -> Vec<usize> {
        self.perm.iter().map(|p| p + 1).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct SignedPermRepr {
    perm: Vec<usize>,
    signs: Vec<i8>,
}

impl Serialize for SignedPerm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SignedPermRepr {
            perm: self.one_line(),
            signs: self.signs.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SignedPerm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = SignedPermRepr::deserialize(d)?;
        let perm = r
            .perm
            .iter()
            .map(|&p| p.checked_sub(1))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| serde::de::Error::custom("permutation entries are 1-based"))?;
        Self::new(perm, r.signs).ok_or_else(|| serde::de::Error::custom("not a signed permutation"))
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// All `2ⁿ·n!` signed permutations, ordered by (permutation, sign vector) with `+1 < −1`.
pub fn enumerate_signed_perms(n: usize, max_dim: usize) -> Result<Vec<SignedPerm>, HyperoctError> {
    if n > max_dim {
        return Err(HyperoctError::DimensionTooLarge { dim: n, max: max_dim });
    }
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        for mask in 0u32..(1 << n) {
            let signs = (0..n)
                .map(|i| if mask >> (n - 1 - i) & 1 == 1 { -1 } else { 1 })
                .collect();
            out.push(SignedPerm {
                perm: perm.clone(),
                signs,
            });
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(out)
}

/// Element orders occurring in Bₙ.
pub fn hyperoctahedral_orders(n: usize, max_dim: usize) -> Result<Vec<usize>, HyperoctError> {
    let mut orders: Vec<usize> = enumerate_signed_perms(n, max_dim)?
        .iter()
        .map(SignedPerm::order)
        .collect();
    orders.sort_unstable();
    orders.dedup();
    Ok(orders)
}

/// Exact conjugator `phi` with `phi·g·phi⁻¹ = hom[g]` for every point-group element `g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugacyCertificate {
    pub phi: MatQ,
    /// Image of each point-group element, indexed like the group's element list.
    pub hom: Vec<SignedPerm>,
}

impl ConjugacyCertificate {
    /// Re-checks the conjugation exactly, that `hom` is a homomorphism, and injectivity
    /// through the trace test.
    pub fn verify(&self, group: &FiniteMatrixGroup) -> Result<(), HyperoctError> {
        let bad = |m: String| Err(HyperoctError::BadCertificate(m));
        if self.hom.len() != group.len() {
            return bad(format!(
                "{} images for a group of order {}",
                self.hom.len(),
                group.len()
            ));
        }
        let Ok(phi_inv) = self.phi.inverse() else {
            return bad("phi is singular".into());
        };
        for (i, g) in group.elements().iter().enumerate() {
            if self.phi.conjugate(g, &phi_inv) != self.hom[i].to_matrix() {
                return bad(format!("phi·g·phi⁻¹ differs from the image of element {i}"));
            }
            if self.hom[i].trace() == group.dim() as i64 && i != group.identity() {
                return bad(format!("element {i} maps to the identity"));
            }
        }
        for a in 0..group.len() {
            for b in 0..group.len() {
                if self.hom[group.mul(a, b)] != self.hom[a].compose(&self.hom[b]) {
                    return bad(format!("not multiplicative at ({a}, {b})"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ObstructionWitness {
    /// Some element has an order that no element of Bₙ has.
    OrderObstruction {
        element: usize,
        order: usize,
        hyperoctahedral_orders: Vec<usize>,
    },
    /// Exhaustive search found no character-preserving homomorphism into Bₙ.
    CharacterObstruction {
        generators: usize,
        assignments_examined: u64,
        assignments_total: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum HellyDecision {
    Helly { certificate: ConjugacyCertificate },
    NotHelly { obstruction: ObstructionWitness },
}

impl HellyDecision {
    pub fn is_helly(&self) -> bool {
        matches!(self, Self::Helly { .. })
    }

    pub fn certificate(&self) -> Option<&ConjugacyCertificate> {
        match self {
            Self::Helly { certificate } => Some(certificate),
            Self::NotHelly { .. } => None,
        }
    }

    pub fn obstruction(&self) -> Option<&ObstructionWitness> {
        match self {
            Self::Helly { .. } => None,
            Self::NotHelly { obstruction } => Some(obstruction),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub max_dim: usize,
    pub max_generators: usize,
    pub workers: usize,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            max_dim: DEFAULT_MAX_DIM,
            max_generators: DEFAULT_MAX_GENERATORS,
            workers: 1,
            seed: DEFAULT_PROBE_SEED,
        }
    }
}

/// Sound but incomplete: reports the first element whose order is missing from Bₙ.
pub fn order_precheck(
    group: &FiniteMatrixGroup,
    max_dim: usize,
) -> Result<Option<ObstructionWitness>, HyperoctError> {
    let bn = hyperoctahedral_orders(group.dim(), max_dim)?;
    Ok(group
        .element_orders()
        .iter()
        .enumerate()
        .find(|(_, o)| bn.binary_search(o).is_err())
        .map(|(element, &order)| ObstructionWitness::OrderObstruction {
            element,
            order,
            hyperoctahedral_orders: bn.clone(),
        }))
}

/// Outcome of [`find_hom_by_character`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomSearch {
    Found(Vec<SignedPerm>),
    /// Every generator-image assignment was covered; `examined` counts them, including
    /// those discarded wholesale by pruning.
    Exhausted { examined: u64, total: u64 },
}

struct SearchSpace<'a> {
    group: &'a FiniteMatrixGroup,
    target: &'a [SignedPerm],
    target_traces: Vec<i64>,
    target_orders: Vec<usize>,
    gens: Vec<usize>,
    group_traces: Vec<i64>,
    /// `subtree[s]` = number of full assignments below a node at depth `s`.
    subtree: Vec<u64>,
}

impl SearchSpace<'_> {
    /// Extends the partial assignment over `⟨gens[..=depth]⟩`; `None` if it is inconsistent
    /// as a homomorphism or misses a trace. At full depth the result covers the whole group.
    fn extend(&self, images: &[usize]) -> Option<Vec<Option<SignedPerm>>> {
        let n = self.group.len();
        let mut h: Vec<Option<SignedPerm>> = vec![None; n];
        h[0] = Some(SignedPerm::identity(self.group.dim()));
        let mut queue = vec![0usize];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            let hx = h[x].clone().expect("queued elements have images");
            for (slot, &img) in images.iter().enumerate() {
                let y = self.group.mul(x, self.gens[slot]);
                let hy = hx.compose(&self.target[img]);
                match &h[y] {
                    Some(existing) => {
                        if *existing != hy {
                            return None;
                        }
                    }
                    None => {
                        if hy.trace() != self.group_traces[y] {
                            return None;
                        }
                        h[y] = Some(hy);
                        queue.push(y);
                    }
                }
            }
        }
        Some(h)
    }

    fn admissible(&self, slot: usize, img: usize) -> bool {
        let g = self.gens[slot];
        self.target_traces[img] == self.group_traces[g]
            && self.target_orders[img] == self.group.order_of(g)
    }

    /// Depth-first search below a fixed prefix; returns the first complete hom in order.
    fn search(&self, images: &mut Vec<usize>, examined: &AtomicU64) -> Option<Vec<SignedPerm>> {
        let depth = images.len();
        if !self.admissible(depth - 1, images[depth - 1]) {
            examined.fetch_add(self.subtree[depth - 1], Ordering::Relaxed);
            return None;
        }
        let Some(h) = self.extend(images) else {
            examined.fetch_add(self.subtree[depth - 1], Ordering::Relaxed);
            return None;
        };
        if depth == self.gens.len() {
            examined.fetch_add(1, Ordering::Relaxed);
            return Some(h.into_iter().map(|x| x.expect("full group covered")).collect());
        }
        for img in 0..self.target.len() {
            images.push(img);
            let found = self.search(images, examined);
            images.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }
}

/// Backtracking search for the lexicographically first trace-preserving homomorphism
/// `group → target`, over images of the group's irredundant generators.
pub fn find_hom_by_character(
    group: &FiniteMatrixGroup,
    target: &[SignedPerm],
    workers: usize,
) -> HomSearch {
    let gens = group.reduced_generators();
    let k = gens.len();
    let b = target.len() as u64;
    let total = b.pow(k as u32);
    let dim = group.dim() as i64;
    let group_traces: Vec<i64> = group
        .elements()
        .iter()
        .map(|g| rational::to_i64(&g.trace()).unwrap_or(dim + 1))
        .collect();
    if k == 0 {
        return HomSearch::Found(vec![SignedPerm::identity(group.dim())]);
    }
    let space = SearchSpace {
        group,
        target,
        target_traces: target.iter().map(SignedPerm::trace).collect(),
        target_orders: target.iter().map(SignedPerm::order).collect(),
        gens,
        group_traces,
        subtree: (0..k).map(|s| b.pow((k - 1 - s) as u32)).collect(),
    };
    let examined = AtomicU64::new(0);
    let run = || {
        (0..target.len())
            .into_par_iter()
            .with_min_len(1)
            .map(|first| {
                let mut images = vec![first];
                space.search(&mut images, &examined)
            })
            .find_map_first(|r| r)
    };
    let found = match rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
    {
        Ok(pool) => pool.install(run),
        Err(_) => run(),
    };
    match found {
        Some(hom) => HomSearch::Found(hom),
        None => HomSearch::Exhausted {
            examined: examined.load(Ordering::Relaxed),
            total,
        },
    }
}

fn average_probe(group: &FiniteMatrixGroup, images: &[MatQ], probe: &MatQ) -> MatQ {
    let n = group.dim();
    let sum = (0..group.len()).fold(MatQ::zeros(n, n), |acc, g| {
        let g_inv = group.element(group.inverse(g));
        acc.add(&images[g].mul_mat(probe).mul_mat(g_inv))
    });
    sum.scale(&rational::frac(1, group.len() as i64))
}

/// Averages probe matrices until `T = (1/|G|)·Σ h(g)·X·g⁻¹` is invertible, then checks
/// `T·g·T⁻¹ = h(g)` exactly.
///
/// Probes are the identity, then the `n²` matrix units in row-major order followed by 16 matrices with
/// entries in `{−2..2}` drawn from a ChaCha stream seeded with `seed`.
pub fn build_intertwiner(
    group: &FiniteMatrixGroup,
    hom: &[SignedPerm],
    seed: u64,
) -> Result<MatQ, HyperoctError> {
    let n = group.dim();
    let images: Vec<MatQ> = hom.iter().map(SignedPerm::to_matrix).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let units = std::iter::once(MatQ::identity(n)).chain((0..n * n).map(|k| MatQ::unit(n, k / n, k % n)));
    let random = (0..RANDOM_PROBES).map(|_| {
        let entries = (0..n * n).map(|_| rational::int(rng.gen_range(-2..=2))).collect();
        MatQ::new(n, n, entries).expect("square probe")
    });
    let probes: Vec<MatQ> = units.chain(random).collect();
    for probe in &probes {
        let t = average_probe(group, &images, probe);
        let Ok(t_inv) = t.inverse() else {
            continue;
        };
        for (g, img) in group.elements().iter().zip(&images) {
            if t.conjugate(g, &t_inv) != *img {
                return Err(HyperoctError::BadCertificate(
                    "averaged intertwiner does not conjugate; hom is not character-matched".into(),
                ));
            }
        }
        return Ok(t);
    }
    Err(HyperoctError::IntertwinerNotFound {
        probes: probes.len(),
    })
}

/// Decides whether `group` conjugates into Bₙ, with an exact certificate either way.
pub fn decide_helly(
    group: &FiniteMatrixGroup,
    config: &SearchConfig,
) -> Result<HellyDecision, HyperoctError> {
    let n = group.dim();
    if n > config.max_dim {
        return Err(HyperoctError::DimensionTooLarge {
            dim: n,
            max: config.max_dim,
        });
    }
    if let Some(obstruction) = order_precheck(group, config.max_dim)? {
        return Ok(HellyDecision::NotHelly { obstruction });
    }
    let gens = group.reduced_generators();
    if gens.len() > config.max_generators {
        return Err(HyperoctError::SearchBudgetExceeded {
            generators: gens.len(),
            max: config.max_generators,
        });
    }
    let target = enumerate_signed_perms(n, config.max_dim)?;
    match find_hom_by_character(group, &target, config.workers) {
        HomSearch::Found(hom) => {
            let phi = build_intertwiner(group, &hom, config.seed)?;
            let certificate = ConjugacyCertificate { phi, hom };
            certificate.verify(group)?;
            Ok(HellyDecision::Helly { certificate })
        }
        HomSearch::Exhausted { examined, total } => Ok(HellyDecision::NotHelly {
            obstruction: ObstructionWitness::CharacterObstruction {
                generators: gens.len(),
                assignments_examined: examined,
                assignments_total: total,
            },
        }),
    }
}

/// Conjugates every element of `group` by `t`, giving `t·P'·t⁻¹` with the same layout.
pub fn conjugate_group(
    group: &FiniteMatrixGroup,
    t: &MatQ,
    max_size: usize,
) -> Result<FiniteMatrixGroup, crate::exactcore::ExactError> {
    let t_inv = t.inverse()?;
    let gens: Vec<MatQ> = group
        .generator_indices()
        .iter()
        .map(|&g| t.conjugate(group.element(g), &t_inv))
        .collect();
    FiniteMatrixGroup::close(group.dim(), &gens, max_size)
}
