//! Virtually abelian groups given as crystallographic data.
//!
//! A [`CrystalSpec`] lists generators as affine maps `x ↦ A·x + t` with `A ∈ GLₙ(Z)` and
//! rational `t`. The point group is the finite group generated by the linear parts; the
//! translations drop out of the conjugation action on the lattice.

use std::collections::{HashSet, VecDeque};
use std::ops::Deref;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exactcore::rational::{self, serde_rational_vec, Rational};
use crate::exactcore::{linalg, ExactError, FiniteMatrixGroup, MatQ};
use crate::hyperoct::{ConjugacyCertificate, SignedPerm};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum CrystalError {
    #[error("invalid crystal JSON at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("generator {index}: {message}")]
    Shape { index: usize, message: String },
    #[error("generator {index} has a non-integer linear part")]
    NonIntegerPointPart { index: usize },
    #[error("generator {index} has linear part with determinant {det}, expected ±1")]
    NotUnimodular { index: usize, det: String },
    #[error(transparent)]
    Group(#[from] ExactError),
    #[error("conjugated linear part of generator {index} is not a signed permutation")]
    InvalidCertificate { index: usize },
    #[error("orbit of the origin spans only a rank-{rank} subspace of R^{dim}")]
    DegenerateLattice { rank: usize, dim: usize },
}

/// One generator `x ↦ linear·x + translation`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineGenerator {
    pub linear: MatQ,
    #[serde(with = "serde_rational_vec")]
    pub translation: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrystalSpec {
    #[serde(default)]
    pub name: String,
    pub dim: usize,
    pub generators: Vec<AffineGenerator>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice_note: Option<String>,
}

impl CrystalSpec {
    /// Parses and shape-checks a spec. Integrality and unimodularity are checked by
    /// [`CrystalSpec::validate`].
    pub fn from_json(text: &str) -> Result<Self, CrystalError> {
        let spec: Self = serde_json::from_str(text).map_err(|e| CrystalError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        spec.check_shapes()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("crystal specs serialize")
    }

    fn check_shapes(&self) -> Result<(), CrystalError> {
        for (index, g) in self.generators.iter().enumerate() {
            if g.linear.rows() != self.dim || g.linear.cols() != self.dim {
                return Err(CrystalError::Shape {
                    index,
                    message: format!(
                        "linear part is {}x{}, expected {d}x{d}",
                        g.linear.rows(),
                        g.linear.cols(),
                        d = self.dim
                    ),
                });
            }
            if g.translation.len() != self.dim {
                return Err(CrystalError::Shape {
                    index,
                    message: format!(
                        "translation has length {}, expected {}",
                        g.translation.len(),
                        self.dim
                    ),
                });
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CrystalError> {
        self.check_shapes()?;
        for (index, g) in self.generators.iter().enumerate() {
            if !g.linear.is_integral() {
                return Err(CrystalError::NonIntegerPointPart { index });
            }
            let det = g.linear.det()?;
            if det.abs() != Rational::one() {
                return Err(CrystalError::NotUnimodular {
                    index,
                    det: det.to_string(),
                });
            }
        }
        Ok(())
    }

    pub fn affine_generators(&self) -> Vec<AffineIsometry> {
        self.generators
            .iter()
            .map(|g| AffineIsometry::new(g.linear.clone(), g.translation.clone()))
            .collect()
    }
}

/// The point group of a crystal spec, with the name of the spec it came from.
#[derive(Clone, Debug)]
pub struct PointGroup {
    group: FiniteMatrixGroup,
    source: String,
}

impl PointGroup {
    pub fn from_group(group: FiniteMatrixGroup, source: impl Into<String>) -> Self {
        Self {
            group,
            source: source.into(),
        }
    }

    pub fn group(&self) -> &FiniteMatrixGroup {
        &self.group
    }

    pub fn source(&self) -> &str {
        &self.source
    }
}

impl Deref for PointGroup {
    type Target = FiniteMatrixGroup;
    fn deref(&self) -> &FiniteMatrixGroup {
        &self.group
    }
}

pub fn point_group(spec: &CrystalSpec, max_size: usize) -> Result<PointGroup, CrystalError> {
    spec.validate()?;
    let linear: Vec<MatQ> = spec.generators.iter().map(|g| g.linear.clone()).collect();
    let group = FiniteMatrixGroup::close(spec.dim, &linear, max_size)?;
    Ok(PointGroup::from_group(group, spec.name.clone()))
}

/// An invariant positive definite form `Σ gᵀg` of the point group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GramCertificate {
    pub form: MatQ,
}

impl GramCertificate {
    /// `gᵀ·form·g = form` for every element, symmetry, and positive leading minors.
    pub fn verify(&self, group: &FiniteMatrixGroup) -> bool {
        self.form.is_symmetric()
            && self.form.leading_minors().iter().all(|m| m.is_positive())
            && group
                .elements()
                .iter()
                .all(|g| g.transpose().mul_mat(&self.form).mul_mat(g) == self.form)
    }
}

pub fn invariant_gram(pg: &FiniteMatrixGroup) -> GramCertificate {
    let n = pg.dim();
    let form = pg
        .elements()
        .iter()
        .fold(MatQ::zeros(n, n), |acc, g| acc.add(&g.transpose().mul_mat(g)));
    GramCertificate { form }
}

/// Affine map `x ↦ linear·x + translation` on Qⁿ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineIsometry {
    pub linear: MatQ,
    #[serde(with = "serde_rational_vec")]
    pub translation: Vec<Rational>,
}

impl AffineIsometry {
    pub fn new(linear: MatQ, translation: Vec<Rational>) -> Self {
        Self {
            linear,
            translation,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(MatQ::identity(n), vec![Rational::zero(); n])
    }

    pub fn translation_by(t: Vec<Rational>) -> Self {
        Self::new(MatQ::identity(t.len()), t)
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn apply(&self, x: &[Rational]) -> Vec<Rational> {
        self.linear
            .mul_vec(x)
            .into_iter()
            .zip(&self.translation)
            .map(|(a, b)| a + b)
            .collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self::new(self.linear.mul_mat(&other.linear), self.apply(&other.translation))
    }

    pub fn inverse(&self) -> Result<Self, ExactError> {
        let inv = self.linear.inverse()?;
        let t = inv.mul_vec(&self.translation).into_iter().map(|x| -x).collect();
        Ok(Self::new(inv, t))
    }

    pub fn is_translation(&self) -> bool {
        self.linear.is_identity()
    }
}

/// ℓ∞ distance between two rational points.
pub fn linf_distance(x: &[Rational], y: &[Rational]) -> Rational {
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b).abs())
        .max()
        .unwrap_or_else(Rational::zero)
}

/// Transports the generators through the conjugator of `cert`, giving an action on
/// (Rⁿ, ℓ∞) by `x ↦ φAφ⁻¹·x + φt`.
pub fn affine_linf_action(
    spec: &CrystalSpec,
    cert: &ConjugacyCertificate,
) -> Result<Vec<AffineIsometry>, CrystalError> {
    let phi_inv = cert.phi.inverse()?;
    spec.generators
        .iter()
        .enumerate()
        .map(|(index, g)| {
            let linear = cert.phi.conjugate(&g.linear, &phi_inv);
            if SignedPerm::from_matrix(&linear).is_none() {
                return Err(CrystalError::InvalidCertificate { index });
            }
            Ok(AffineIsometry::new(linear, cert.phi.mul_vec(&g.translation)))
        })
        .collect()
}

/// An action rescaled so that it preserves the standard cubical tiling of Rⁿ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TilingAction {
    #[serde(with = "rational::serde_rational")]
    pub scale: Rational,
    pub maps: Vec<AffineIsometry>,
}

impl TilingAction {
    /// Every map sends each integer point of `[-radius, radius]ⁿ` to an integer point.
    pub fn preserves_lattice_box(&self, radius: i64) -> bool {
        let Some(n) = self.maps.first().map(AffineIsometry::dim) else {
            return true;
        };
        let side = (2 * radius + 1) as usize;
        let total = side.pow(n as u32);
        (0..total).all(|mut code| {
            let p: Vec<Rational> = (0..n)
                .map(|_| {
                    let c = (code % side) as i64 - radius;
                    code /= side;
                    rational::int(c)
                })
                .collect();
            self.maps
                .iter()
                .all(|m| m.apply(&p).iter().all(|x| x.is_integer()))
        })
    }
}

/// Orbit points of the origin under words of length at most `depth`.
fn origin_orbit(action: &[AffineIsometry], depth: usize) -> Result<Vec<Vec<Rational>>, ExactError> {
    let n = action[0].dim();
    let mut gens = action.to_vec();
    for a in action {
        gens.push(a.inverse()?);
    }
    let start = AffineIsometry::identity(n);
    let mut seen: HashSet<AffineIsometry> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([(start, 0usize)]);
    let mut points = Vec::new();
    while let Some((g, d)) = queue.pop_front() {
        points.push(g.translation.clone());
        if d == depth {
            continue;
        }
        for s in &gens {
            let h = g.compose(s);
            if seen.insert(h.clone()) {
                queue.push_back((h, d + 1));
            }
        }
    }
    Ok(points)
}

/// Least positive rational `λ` with `λ·t` integral for every translation component.
fn integralizing_scale(action: &[AffineIsometry]) -> Rational {
    let mut lcm_den = num_bigint::BigInt::one();
    let mut gcd_num = num_bigint::BigInt::zero();
    for t in action.iter().flat_map(|a| &a.translation) {
        if t.is_zero() {
            continue;
        }
        lcm_den = lcm_den.lcm(t.denom());
        gcd_num = gcd_num.gcd(t.numer());
    }
    if gcd_num.is_zero() {
        return Rational::one();
    }
    Rational::new(lcm_den, gcd_num)
}

/// Rescales an ℓ∞ action of signed permutations so every translation becomes integral.
///
/// Conjugating by `x ↦ λx` turns `x ↦ Lx + t` into `x ↦ Lx + λt`; with integral `λt` and
/// signed-permutation `L`, each map preserves Zⁿ and permutes the integer translates of the
/// coordinate hyperplanes.
pub fn cubical_tiling_action(action: &[AffineIsometry]) -> Result<TilingAction, CrystalError> {
    let Some(first) = action.first() else {
        return Ok(TilingAction {
            scale: Rational::one(),
            maps: Vec::new(),
        });
    };
    let n = first.dim();
    for (index, a) in action.iter().enumerate() {
        if SignedPerm::from_matrix(&a.linear).is_none() {
            return Err(CrystalError::InvalidCertificate { index });
        }
    }
    let orbit = origin_orbit(action, 3)?;
    let rank = linalg::rank(&orbit);
    if rank < n {
        return Err(CrystalError::DegenerateLattice { rank, dim: n });
    }
    let scale = integralizing_scale(action);
    let maps = action
        .iter()
        .map(|a| {
            AffineIsometry::new(
                a.linear.clone(),
                a.translation.iter().map(|t| t * &scale).collect(),
            )
        })
        .collect();
    Ok(TilingAction { scale, maps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::qvec;
    use crate::exactcore::rational::{frac, int};

    fn gen(linear: MatQ, t: Vec<Rational>) -> AffineGenerator {
        AffineGenerator {
            linear,
            translation: t,
        }
    }

    fn spec(dim: usize, gens: Vec<AffineGenerator>) -> CrystalSpec {
        CrystalSpec {
            name: "test".into(),
            dim,
            generators: gens,
            lattice_note: None,
        }
    }

    #[test]
    fn antipodal_point_group() {
        let s = spec(2, vec![gen(MatQ::from_ints(&[[-1, 0], [0, -1]]), qvec(&[0, 0]))]);
        let pg = point_group(&s, 100).unwrap();
        assert_eq!(pg.len(), 2);
        assert_eq!(pg.source(), "test");
    }

    #[test]
    fn coxeter_point_group_has_order_three() {
        let s = spec(
            2,
            vec![
                gen(MatQ::from_ints(&[[0, -1], [1, -1]]), qvec(&[0, 0])),
                gen(MatQ::from_ints(&[[0, 1], [1, 0]]), qvec(&[0, 0])),
            ],
        );
        let pg = point_group(&s, 100).unwrap();
        assert_eq!(pg.len(), 6);
        assert!(pg.element_orders().contains(&3));
    }

    #[test]
    fn glide_reflection() {
        let s = spec(
            3,
            vec![gen(
                MatQ::diagonal(&qvec(&[1, 1, -1])),
                vec![frac(1, 2), int(0), int(0)],
            )],
        );
        assert_eq!(point_group(&s, 100).unwrap().len(), 2);
    }

    #[test]
    fn translations_do_not_affect_point_group() {
        let a = MatQ::from_ints(&[[0, -1], [1, 0]]);
        let s1 = spec(2, vec![gen(a.clone(), qvec(&[0, 0]))]);
        let s2 = spec(2, vec![gen(a, vec![frac(1, 3), frac(-5, 7)])]);
        let e1: HashSet<MatQ> = point_group(&s1, 100).unwrap().elements().iter().cloned().collect();
        let e2: HashSet<MatQ> = point_group(&s2, 100).unwrap().elements().iter().cloned().collect();
        assert_eq!(e1, e2);
    }

    #[test]
    fn rejects_bad_point_parts() {
        let s = spec(
            2,
            vec![gen(
                MatQ::from_rows(vec![vec![frac(1, 2), int(0)], vec![int(0), int(2)]]).unwrap(),
                qvec(&[0, 0]),
            )],
        );
        assert_eq!(
            point_group(&s, 100).unwrap_err(),
            CrystalError::NonIntegerPointPart { index: 0 }
        );
        let s = spec(2, vec![gen(MatQ::from_ints(&[[2, 0], [0, 1]]), qvec(&[0, 0]))]);
        assert!(matches!(
            point_group(&s, 100).unwrap_err(),
            CrystalError::NotUnimodular { index: 0, .. }
        ));
        let s = spec(2, vec![gen(MatQ::from_ints(&[[1, 1], [0, 1]]), qvec(&[0, 0]))]);
        assert!(matches!(
            point_group(&s, 100).unwrap_err(),
            CrystalError::Group(ExactError::GroupTooLarge { .. })
        ));
    }

    #[test]
    fn json_parse_reports_position() {
        let err = CrystalSpec::from_json("{\n \"dim\": 2,\n \"generators\": [ }").unwrap_err();
        assert!(matches!(err, CrystalError::Parse { line: 3, .. }));
        let err = CrystalSpec::from_json(
            r#"{"dim": 2, "generators": [{"linear": [["1","0"],["0","1"]], "translation": ["0"]}]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, CrystalError::Shape { index: 0, .. }));
    }

    #[test]
    fn gram_of_antipodal_group() {
        let g = FiniteMatrixGroup::close(2, &[MatQ::from_ints(&[[-1, 0], [0, -1]])], 10).unwrap();
        let cert = invariant_gram(&g);
        assert_eq!(cert.form, MatQ::from_ints(&[[2, 0], [0, 2]]));
        assert!(cert.verify(&g));
    }

    #[test]
    fn gram_of_trivial_group() {
        let g = FiniteMatrixGroup::close(3, &[], 10).unwrap();
        assert_eq!(invariant_gram(&g).form, MatQ::identity(3));
    }

    #[test]
    fn gram_of_coxeter_group() {
        let g = FiniteMatrixGroup::close(
            2,
            &[
                MatQ::from_ints(&[[0, -1], [1, -1]]),
                MatQ::from_ints(&[[0, 1], [1, 0]]),
            ],
            10,
        )
        .unwrap();
        // direct summation of gᵀg over the six elements
        let mut expected = MatQ::zeros(2, 2);
        for m in g.elements() {
            let mut t = MatQ::zeros(2, 2);
            for i in 0..2 {
                for j in 0..2 {
                    let v: Rational = (0..2).map(|k| m.get(k, i) * m.get(k, j)).sum();
                    t.set(i, j, v);
                }
            }
            expected = expected.add(&t);
        }
        let cert = invariant_gram(&g);
        assert_eq!(cert.form, expected);
        assert_eq!(cert.form, MatQ::from_ints(&[[8, -4], [-4, 8]]));
        assert!(cert.verify(&g));
    }

    #[test]
    fn tiling_common_denominator() {
        let action = vec![
            AffineIsometry::translation_by(vec![frac(1, 2), int(0)]),
            AffineIsometry::translation_by(vec![int(0), frac(1, 2)]),
        ];
        let t = cubical_tiling_action(&action).unwrap();
        assert_eq!(t.scale, int(2));
        assert_eq!(t.maps[0].translation, qvec(&[1, 0]));
        assert_eq!(t.maps[1].translation, qvec(&[0, 1]));
    }

    #[test]
    fn tiling_standard_lattice() {
        let action: Vec<_> = (0..3)
            .map(|i| {
                let mut t = qvec(&[0, 0, 0]);
                t[i] = int(1);
                AffineIsometry::translation_by(t)
            })
            .collect();
        let t = cubical_tiling_action(&action).unwrap();
        assert_eq!(t.scale, int(1));
        assert_eq!(t.maps, action);
    }

    #[test]
    fn tiling_glide() {
        let glide = AffineIsometry::new(MatQ::diagonal(&qvec(&[1, -1])), vec![frac(1, 2), int(0)]);
        let up = AffineIsometry::translation_by(qvec(&[0, 1]));
        let t = cubical_tiling_action(&[glide, up]).unwrap();
        assert_eq!(t.scale, int(2));
        assert_eq!(t.maps[0].translation, qvec(&[1, 0]));
        assert_eq!(t.maps[1].translation, qvec(&[0, 2]));
        assert!(t.preserves_lattice_box(3));
    }

    #[test]
    fn tiling_rejects_degenerate_orbit() {
        let glide = AffineIsometry::new(MatQ::diagonal(&qvec(&[1, -1])), vec![frac(1, 2), int(0)]);
        assert_eq!(
            cubical_tiling_action(&[glide]).unwrap_err(),
            CrystalError::DegenerateLattice { rank: 1, dim: 2 }
        );
    }

    #[test]
    fn tiling_rejects_non_signed_perm() {
        let shear = AffineIsometry::new(MatQ::from_ints(&[[1, 1], [0, 1]]), qvec(&[0, 0]));
        assert_eq!(
            cubical_tiling_action(&[shear]).unwrap_err(),
            CrystalError::InvalidCertificate { index: 0 }
        );
    }

    #[test]
    fn scale_can_shrink() {
        let action = vec![
            AffineIsometry::translation_by(qvec(&[2, 0])),
            AffineIsometry::translation_by(qvec(&[0, 4])),
        ];
        let t = cubical_tiling_action(&action).unwrap();
        assert_eq!(t.scale, frac(1, 2));
        assert_eq!(t.maps[1].translation, qvec(&[0, 2]));
    }

    #[test]
    fn affine_algebra() {
        let a = AffineIsometry::new(MatQ::from_ints(&[[0, -1], [1, 0]]), vec![frac(1, 2), int(3)]);
        let b = AffineIsometry::new(MatQ::diagonal(&qvec(&[1, -1])), qvec(&[1, 0]));
        let x = vec![frac(2, 3), int(-1)];
        assert_eq!(a.compose(&b).apply(&x), a.apply(&b.apply(&x)));
        assert_eq!(a.inverse().unwrap().apply(&a.apply(&x)), x);
    }
}
