//! Pushouts of short exact sequences of finite groups.
//!
//! Given `1 → N → G → Q → 1`, an action of `G` on `M` by automorphisms and a
//! `G`-equivariant homomorphism `φ: N → M` with `n·m = φ(n)·m·φ(n)⁻¹`, the group
//! `G_φ = (M ⋊ G)/K` with `K = {(φ(n)⁻¹, n)}` fits into a morphism of extensions
//! `(N, G, Q) → (M, G_φ, Q)`. Everything here is computed from Cayley tables.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum ExtensionError {
    #[error("invalid group table: {0}")]
    InvalidTable(String),
    #[error("table is not associative: ({a}·{b})·{c} ≠ {a}·({b}·{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("subset is not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("N is not normal: {g}·{n}·{g}⁻¹ is not in N")]
    NotNormal { g: usize, n: usize },
    #[error("φ is not a homomorphism at ({a}, {b})")]
    NotHomomorphism { a: usize, b: usize },
    #[error("action of {g} is not an automorphism of M: {reason}")]
    BadAction { g: usize, reason: String },
    #[error("φ is not G-equivariant: φ({g}·{n}) ≠ {g}·φ({n})")]
    NotEquivariant { g: usize, n: usize },
    #[error("action of N on M is not conjugation through φ: {n}·{m} ≠ φ({n})·{m}·φ({n})⁻¹")]
    NotCompatible { n: usize, m: usize },
    #[error("construction check failed: {0}")]
    Internal(String),
    #[error("invalid JSON at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

/// A finite group given by its multiplication table on `0..order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupTable {
    order: usize,
    table: Vec<usize>,
    inverses: Vec<usize>,
    identity: usize,
    labels: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    order: usize,
    /// Row-major: entry `a·order + b` is the product `a·b`.
    table: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl Serialize for FiniteGroupTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TableJson {
            order: self.order,
            table: self.table.clone(),
            labels: self.labels.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteGroupTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let t = TableJson::deserialize(d)?;
        let g = FiniteGroupTable::from_table(t.order, t.table).map_err(serde::de::Error::custom)?;
        match t.labels {
            Some(l) => g.with_labels(l).map_err(serde::de::Error::custom),
            None => Ok(g),
        }
    }
}

impl FiniteGroupTable {
    /// Validates closure, associativity (all triples), identity and inverses.
    pub fn from_table(order: usize, table: Vec<usize>) -> Result<Self, ExtensionError> {
        if order == 0 || table.len() != order * order {
            return Err(ExtensionError::InvalidTable(format!(
                "expected {} entries for order {order}, got {}",
                order * order,
                table.len()
            )));
        }
        if let Some(&x) = table.iter().find(|&&x| x >= order) {
            return Err(ExtensionError::InvalidTable(format!("entry {x} out of range")));
        }
        let mul = |a: usize, b: usize| table[a * order + b];
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| mul(e, x) == x && mul(x, e) == x))
            .ok_or_else(|| ExtensionError::InvalidTable("no identity element".into()))?;
        let inverses = (0..order)
            .map(|a| {
                (0..order)
                    .find(|&b| mul(a, b) == identity && mul(b, a) == identity)
                    .ok_or_else(|| ExtensionError::InvalidTable(format!("{a} has no inverse")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        for a in 0..order {
            for b in 0..order {
                let ab = mul(a, b);
                for c in 0..order {
                    if mul(ab, c) != mul(a, mul(b, c)) {
                        return Err(ExtensionError::NotAssociative { a, b, c });
                    }
                }
            }
        }
        Ok(Self {
            order,
            table,
            inverses,
            identity,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, ExtensionError> {
        if labels.len() != self.order {
            return Err(ExtensionError::InvalidTable(format!(
                "{} labels for order {}",
                labels.len(),
                self.order
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn from_json(text: &str) -> Result<Self, ExtensionError> {
        serde_json::from_str(text).map_err(|e| parse_error(&e))
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// `Z/n` with element `k` the residue `k`.
    pub fn cyclic(n: usize) -> Self {
        let table = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        Self::from_table(n, table).expect("cyclic table is a group")
    }

    /// Permutations of `0..3` in lexicographic order, composed as `(στ)(x) = σ(τ(x))`.
    pub fn symmetric3() -> Self {
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let mut table = Vec::with_capacity(36);
        for s in &perms {
            for t in &perms {
                table.push(index([s[t[0]], s[t[1]], s[t[2]]]));
            }
        }
        let labels = perms
            .iter()
            .map(|p| format!("{}{}{}", p[0] + 1, p[1] + 1, p[2] + 1))
            .collect();
        Self::from_table(6, table).unwrap().with_labels(labels).unwrap()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Checks that `subset` is a subgroup.
    pub fn check_subgroup(&self, subset: &[usize]) -> Result<(), ExtensionError> {
        let set: BTreeSet<usize> = subset.iter().copied().collect();
        if set.len() != subset.len() {
            return Err(ExtensionError::NotSubgroup("repeated element".into()));
        }
        if let Some(&x) = set.iter().find(|&&x| x >= self.order) {
            return Err(ExtensionError::NotSubgroup(format!("element {x} out of range")));
        }
        if !set.contains(&self.identity) {
            return Err(ExtensionError::NotSubgroup("identity missing".into()));
        }
        for &a in &set {
            for &b in &set {
                if !set.contains(&self.mul(a, self.inv(b))) {
                    return Err(ExtensionError::NotSubgroup(format!(
                        "{a}·{b}⁻¹ is not in the subset"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Checks that `subset` is a normal subgroup, naming a witness otherwise.
    pub fn check_normal(&self, subset: &[usize]) -> Result<(), ExtensionError> {
        self.check_subgroup(subset)?;
        let set: BTreeSet<usize> = subset.iter().copied().collect();
        for g in 0..self.order {
            for &n in subset {
                if !set.contains(&self.conj(g, n)) {
                    return Err(ExtensionError::NotNormal { g, n });
                }
            }
        }
        Ok(())
    }

    /// First pair where `map: self → target` fails to be multiplicative.
    pub fn homomorphism_failure(&self, target: &Self, map: &[usize]) -> Option<(usize, usize)> {
        (0..self.order)
            .flat_map(|a| (0..self.order).map(move |b| (a, b)))
            .find(|&(a, b)| map[self.mul(a, b)] != target.mul(map[a], map[b]))
    }

    /// Left cosets `xH` of a subgroup, each represented by its least element, sorted by
    /// representative. Returns the representatives and the coset index of every element.
    fn left_cosets(&self, subgroup: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let mut coset_of = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        for x in 0..self.order {
            if coset_of[x] == usize::MAX {
                for &h in subgroup {
                    coset_of[self.mul(x, h)] = reps.len();
                }
                reps.push(x);
            }
        }
        (reps, coset_of)
    }

    /// Quotient by a normal subgroup, with the projection. Cosets are ordered by least
    /// representative.
    pub fn quotient(&self, normal: &[usize]) -> Result<(Self, Vec<usize>), ExtensionError> {
        self.check_normal(normal)?;
        let (reps, coset_of) = self.left_cosets(normal);
        let k = reps.len();
        let table = (0..k * k)
            .map(|i| coset_of[self.mul(reps[i / k], reps[i % k])])
            .collect();
        let q = Self::from_table(k, table)?;
        let q = match &self.labels {
            Some(l) => q.with_labels(reps.iter().map(|&r| format!("{}N", l[r])).collect())?,
            None => q,
        };
        Ok((q, coset_of))
    }
}

fn parse_error(e: &serde_json::Error) -> ExtensionError {
    ExtensionError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

/// Hypotheses of the pushout: `N ⊴ G`, an action of `G` on `M`, and `φ: N → M`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PushoutInput {
    pub g: FiniteGroupTable,
    /// Elements of `G` forming `N`.
    pub n: Vec<usize>,
    pub m: FiniteGroupTable,
    /// `phi[i]` is the image of `n[i]`.
    pub phi: Vec<usize>,
    /// `action[g][m]` is `g·m`.
    pub action: Vec<Vec<usize>>,
}

impl PushoutInput {
    pub fn from_json(text: &str) -> Result<Self, ExtensionError> {
        serde_json::from_str(text).map_err(|e| parse_error(&e))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("pushout input serializes")
    }

    /// Action of every element of `G` by the identity automorphism.
    pub fn trivial_action(g: &FiniteGroupTable, m: &FiniteGroupTable) -> Vec<Vec<usize>> {
        vec![(0..m.order()).collect(); g.order()]
    }

    fn position_in_n(&self) -> Vec<Option<usize>> {
        let mut pos = vec![None; self.g.order()];
        for (i, &x) in self.n.iter().enumerate() {
            pos[x] = Some(i);
        }
        pos
    }

    /// `φ(x)` for `x ∈ N ⊂ G`.
    fn phi_of(&self, pos: &[Option<usize>], x: usize) -> usize {
        self.phi[pos[x].expect("element of N")]
    }

    /// Checks every hypothesis, naming the first violation found.
    pub fn validate(&self) -> Result<(), ExtensionError> {
        let (g, m) = (&self.g, &self.m);
        g.check_normal(&self.n)?;
        if self.phi.len() != self.n.len() || self.phi.iter().any(|&x| x >= m.order()) {
            return Err(ExtensionError::InvalidTable("φ must map each element of N into M".into()));
        }
        if self.action.len() != g.order() {
            return Err(ExtensionError::InvalidTable("need one automorphism per element of G".into()));
        }
        for (gi, auto) in self.action.iter().enumerate() {
            let bad = |reason: &str| ExtensionError::BadAction {
                g: gi,
                reason: reason.into(),
            };
            if auto.len() != m.order() || auto.iter().any(|&x| x >= m.order()) {
                return Err(bad("wrong length or out of range"));
            }
            if auto.iter().collect::<BTreeSet<_>>().len() != m.order() {
                return Err(bad("not a bijection"));
            }
            if let Some((a, b)) = m.homomorphism_failure(m, auto) {
                return Err(bad(&format!("not multiplicative at ({a}, {b})")));
            }
        }
        for a in 0..g.order() {
            for b in 0..g.order() {
                let ab = &self.action[g.mul(a, b)];
                if (0..m.order()).any(|x| ab[x] != self.action[a][self.action[b][x]]) {
                    return Err(ExtensionError::BadAction {
                        g: a,
                        reason: format!("({a}·{b})·m ≠ {a}·({b}·m)"),
                    });
                }
            }
        }
        let pos = self.position_in_n();
        for &a in &self.n {
            for &b in &self.n {
                if self.phi_of(&pos, g.mul(a, b)) != m.mul(self.phi_of(&pos, a), self.phi_of(&pos, b)) {
                    return Err(ExtensionError::NotHomomorphism { a, b });
                }
            }
        }
        for gi in 0..g.order() {
            for &n in &self.n {
                if self.phi_of(&pos, g.conj(gi, n)) != self.action[gi][self.phi_of(&pos, n)] {
                    return Err(ExtensionError::NotEquivariant { g: gi, n });
                }
            }
        }
        for &n in &self.n {
            let p = self.phi_of(&pos, n);
            for mi in 0..m.order() {
                if self.action[n][mi] != m.conj(p, mi) {
                    return Err(ExtensionError::NotCompatible { n, m: mi });
                }
            }
        }
        Ok(())
    }
}

/// The semidirect product `M ⋊ G` with `(m₁,g₁)(m₂,g₂) = (m₁·(g₁·m₂), g₁g₂)`; the pair
/// `(m, g)` has index `g·|M| + m`.
pub fn semidirect_product(
    m: &FiniteGroupTable,
    g: &FiniteGroupTable,
    action: &[Vec<usize>],
) -> Result<FiniteGroupTable, ExtensionError> {
    let (om, og) = (m.order(), g.order());
    let n = om * og;
    let mut table = Vec::with_capacity(n * n);
    for x in 0..n {
        let (m1, g1) = (x % om, x / om);
        for y in 0..n {
            let (m2, g2) = (y % om, y / om);
            table.push(g.mul(g1, g2) * om + m.mul(m1, action[g1][m2]));
        }
    }
    FiniteGroupTable::from_table(n, table)
}

/// `G_φ` together with the maps of the bottom extension and the vertical maps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PushoutExtension {
    pub semidirect_order: usize,
    /// `K` as indices into `M ⋊ G`.
    pub kernel: Vec<usize>,
    pub g_phi: FiniteGroupTable,
    pub q: FiniteGroupTable,
    /// `G → Q`.
    pub g_to_q: Vec<usize>,
    /// `M → G_φ`.
    pub m_to_gphi: Vec<usize>,
    /// `φ̂: G → G_φ`.
    pub phi_hat: Vec<usize>,
    /// `G_φ → Q`.
    pub gphi_to_q: Vec<usize>,
}

/// Builds `G_φ = (M ⋊ G)/K` and checks the construction along the way: `K` is a normal
/// subgroup, `M` embeds, `Q → (M ⋊ G)/MK` is bijective and `|G_φ| = |M|·|G|/|N|`.
pub fn pushout_extension(input: &PushoutInput) -> Result<PushoutExtension, ExtensionError> {
    input.validate()?;
    let (g, m) = (&input.g, &input.m);
    let om = m.order();
    let sd = semidirect_product(m, g, &input.action)?;
    let pair = |mi: usize, gi: usize| gi * om + mi;
    let kernel: Vec<usize> = input
        .n
        .iter()
        .zip(&input.phi)
        .map(|(&n, &p)| pair(m.inv(p), n))
        .collect();
    sd.check_normal(&kernel)
        .map_err(|e| ExtensionError::Internal(format!("K is not normal in M ⋊ G: {e}")))?;
    let (g_phi, coset_of) = sd.quotient(&kernel)?;
    if g_phi.order() * input.n.len() != om * g.order() {
        return Err(ExtensionError::Internal("|G_φ| ≠ |M|·|G|/|N|".into()));
    }
    let m_to_gphi: Vec<usize> = (0..om).map(|mi| coset_of[pair(mi, g.identity())]).collect();
    if m_to_gphi.iter().collect::<BTreeSet<_>>().len() != om {
        return Err(ExtensionError::Internal("M does not embed in G_φ".into()));
    }
    let phi_hat: Vec<usize> = (0..g.order()).map(|gi| coset_of[pair(m.identity(), gi)]).collect();
    let (q, g_to_q) = g.quotient(&input.n)?;
    // (m, g)K ↦ gN; well defined since the G-part of K lies in N
    let mut gphi_to_q = vec![usize::MAX; g_phi.order()];
    for x in 0..sd.order() {
        let image = g_to_q[x / om];
        let slot = &mut gphi_to_q[coset_of[x]];
        if *slot != usize::MAX && *slot != image {
            return Err(ExtensionError::Internal("G_φ → Q is not well defined".into()));
        }
        *slot = image;
    }
    // Q → (M ⋊ G)/MK is a bijection
    let mk: BTreeSet<usize> = (0..om)
        .flat_map(|mi| kernel.iter().map(move |&k| (mi, k)))
        .map(|(mi, k)| sd.mul(pair(mi, g.identity()), k))
        .collect();
    let mk: Vec<usize> = mk.into_iter().collect();
    let (mk_reps, mk_coset) = sd.left_cosets(&mk);
    let q_image: BTreeSet<usize> = (0..g.order()).map(|gi| mk_coset[pair(m.identity(), gi)]).collect();
    if q_image.len() != q.order() || mk_reps.len() != q.order() {
        return Err(ExtensionError::Internal("Q → (M ⋊ G)/MK is not bijective".into()));
    }
    Ok(PushoutExtension {
        semidirect_order: sd.order(),
        kernel,
        g_phi,
        q,
        g_to_q,
        m_to_gphi,
        phi_hat,
        gphi_to_q,
    })
}

/// Which requirement of a morphism of extensions failed, with the offending elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SesViolation {
    NotHomomorphism { map: String, a: usize, b: usize },
    NotInjective { map: String, a: usize, b: usize },
    NotSurjective { map: String, missing: usize },
    NotExact { row: String, element: usize },
    LeftSquare { n: usize },
    RightSquare { g: usize },
    Action { g: usize, m: usize },
    Shape(String),
}

/// A morphism `(N, G, Q) → (M, G_φ, Q)` of extensions together with the action of `G` on `M`.
#[derive(Clone, Debug)]
pub struct SesMorphism<'a> {
    pub g: &'a FiniteGroupTable,
    pub n: &'a [usize],
    pub q: &'a FiniteGroupTable,
    pub g_to_q: &'a [usize],
    pub m: &'a FiniteGroupTable,
    pub g_phi: &'a FiniteGroupTable,
    pub m_to_gphi: &'a [usize],
    pub gphi_to_q: &'a [usize],
    pub phi: &'a [usize],
    pub phi_hat: &'a [usize],
    pub action: &'a [Vec<usize>],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SesReport {
    pub holds: bool,
    pub violation: Option<SesViolation>,
}

fn check_map(
    name: &str,
    src: &FiniteGroupTable,
    dst: &FiniteGroupTable,
    map: &[usize],
) -> Result<(), SesViolation> {
    if map.len() != src.order() || map.iter().any(|&x| x >= dst.order()) {
        return Err(SesViolation::Shape(format!("{name} is not a total map")));
    }
    match src.homomorphism_failure(dst, map) {
        Some((a, b)) => Err(SesViolation::NotHomomorphism {
            map: name.into(),
            a,
            b,
        }),
        None => Ok(()),
    }
}

fn check_injective(name: &str, map: &[usize]) -> Result<(), SesViolation> {
    for a in 0..map.len() {
        if let Some(b) = (a + 1..map.len()).find(|&b| map[a] == map[b]) {
            return Err(SesViolation::NotInjective {
                map: name.into(),
                a,
                b,
            });
        }
    }
    Ok(())
}

fn check_surjective(name: &str, map: &[usize], target_order: usize) -> Result<(), SesViolation> {
    let image: BTreeSet<usize> = map.iter().copied().collect();
    match (0..target_order).find(|x| !image.contains(x)) {
        Some(missing) => Err(SesViolation::NotSurjective {
            map: name.into(),
            missing,
        }),
        None => Ok(()),
    }
}

/// Image of `sub → mid` equals the kernel of `mid → quo`.
fn check_exact(row: &str, sub_image: &[usize], mid: &FiniteGroupTable, proj: &[usize], quo: &FiniteGroupTable) -> Result<(), SesViolation> {
    let image: BTreeSet<usize> = sub_image.iter().copied().collect();
    match (0..mid.order()).find(|&x| image.contains(&x) != (proj[x] == quo.identity())) {
        Some(element) => Err(SesViolation::NotExact {
            row: row.into(),
            element,
        }),
        None => Ok(()),
    }
}

impl SesMorphism<'_> {
    fn check(&self) -> Result<(), SesViolation> {
        let n_group = subgroup_table(self.g, self.n).map_err(|e| SesViolation::Shape(e.to_string()))?;
        let incl: Vec<usize> = self.n.to_vec();
        check_map("N → G", &n_group, self.g, &incl)?;
        check_map("G → Q", self.g, self.q, self.g_to_q)?;
        check_map("M → G_φ", self.m, self.g_phi, self.m_to_gphi)?;
        check_map("G_φ → Q", self.g_phi, self.q, self.gphi_to_q)?;
        check_map("φ", &n_group, self.m, self.phi)?;
        check_map("φ̂", self.g, self.g_phi, self.phi_hat)?;
        check_injective("N → G", &incl)?;
        check_injective("M → G_φ", self.m_to_gphi)?;
        check_surjective("G → Q", self.g_to_q, self.q.order())?;
        check_surjective("G_φ → Q", self.gphi_to_q, self.q.order())?;
        check_exact("top", &incl, self.g, self.g_to_q, self.q)?;
        check_exact("bottom", self.m_to_gphi, self.g_phi, self.gphi_to_q, self.q)?;
        for (i, &n) in self.n.iter().enumerate() {
            if self.m_to_gphi[self.phi[i]] != self.phi_hat[n] {
                return Err(SesViolation::LeftSquare { n });
            }
        }
        for g in 0..self.g.order() {
            if self.gphi_to_q[self.phi_hat[g]] != self.g_to_q[g] {
                return Err(SesViolation::RightSquare { g });
            }
        }
        if self.action.len() != self.g.order() {
            return Err(SesViolation::Shape("action needs one row per element of G".into()));
        }
        for g in 0..self.g.order() {
            for m in 0..self.m.order() {
                let lhs = self.m_to_gphi[self.action[g][m]];
                if lhs != self.g_phi.conj(self.phi_hat[g], self.m_to_gphi[m]) {
                    return Err(SesViolation::Action { g, m });
                }
            }
        }
        Ok(())
    }
}

/// Checks both rows are exact, both squares commute and `g·m = φ̂(g)·m·φ̂(g)⁻¹`.
pub fn verify_ses_morphism(data: &SesMorphism) -> SesReport {
    match data.check() {
        Ok(()) => SesReport {
            holds: true,
            violation: None,
        },
        Err(v) => SesReport {
            holds: false,
            violation: Some(v),
        },
    }
}

/// The subgroup on `elems`, reindexed by position.
fn subgroup_table(g: &FiniteGroupTable, elems: &[usize]) -> Result<FiniteGroupTable, ExtensionError> {
    g.check_subgroup(elems)?;
    let mut pos = vec![usize::MAX; g.order()];
    for (i, &x) in elems.iter().enumerate() {
        pos[x] = i;
    }
    let k = elems.len();
    let table = (0..k * k).map(|i| pos[g.mul(elems[i / k], elems[i % k])]).collect();
    FiniteGroupTable::from_table(k, table)
}

impl PushoutExtension {
    /// The morphism of extensions this pushout claims, for [`verify_ses_morphism`].
    pub fn morphism<'a>(&'a self, input: &'a PushoutInput) -> SesMorphism<'a> {
        SesMorphism {
            g: &input.g,
            n: &input.n,
            q: &self.q,
            g_to_q: &self.g_to_q,
            m: &input.m,
            g_phi: &self.g_phi,
            m_to_gphi: &self.m_to_gphi,
            gphi_to_q: &self.gphi_to_q,
            phi: &input.phi,
            phi_hat: &self.phi_hat,
            action: &input.action,
        }
    }
}

/// The three worked examples: `Z/2` pushed along the identity, `Z/4 ⊃ {0,2}` into `Z/4`,
/// and `A₃ ⊴ S₃` into `Z/3` with the conjugation action.
pub fn example_inputs() -> Vec<(&'static str, PushoutInput)> {
    let z2 = FiniteGroupTable::cyclic(2);
    let z4 = FiniteGroupTable::cyclic(4);
    let z3 = FiniteGroupTable::cyclic(3);
    let s3 = FiniteGroupTable::symmetric3();
    // A₃ = {123, 231, 312} are indices 0, 3, 4; 231 is a generator sent to 1 ∈ Z/3
    let a3 = vec![0, 3, 4];
    let phi_s3 = vec![0, 1, 2];
    let to_m = |x: usize| phi_s3[a3.iter().position(|&y| y == x).unwrap()];
    let from_m = |k: usize| a3[phi_s3.iter().position(|&y| y == k).unwrap()];
    let conj_action: Vec<Vec<usize>> = (0..6)
        .map(|g| (0..3).map(|k| to_m(s3.conj(g, from_m(k)))).collect())
        .collect();
    vec![
        (
            "z2_identity",
            PushoutInput {
                action: PushoutInput::trivial_action(&z2, &z2),
                g: z2.clone(),
                n: vec![0, 1],
                m: z2,
                phi: vec![0, 1],
            },
        ),
        (
            "z4_doubling",
            PushoutInput {
                action: PushoutInput::trivial_action(&z4, &z4),
                g: z4.clone(),
                n: vec![0, 2],
                m: z4,
                phi: vec![0, 2],
            },
        ),
        (
            "s3_alternating",
            PushoutInput {
                g: s3,
                n: a3,
                m: z3,
                phi: phi_s3,
                action: conj_action,
            },
        ),
    ]
}
