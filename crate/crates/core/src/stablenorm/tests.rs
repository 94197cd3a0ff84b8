use std::collections::{HashMap, VecDeque};

use proptest::prelude::*;

use super::*;
use crate::crystal::AffineGenerator;
use crate::exactcore::rational::{frac, int};
use crate::exactcore::{FiniteMatrixGroup, MatQ};

fn l1() -> WordMetricSpec {
    WordMetricSpec::symmetric(&[vec![1, 0], vec![0, 1]]).unwrap()
}

fn diag() -> WordMetricSpec {
    WordMetricSpec::symmetric(&[vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap()
}

/// Naive BFS over a bounded box, independent of the `cayley` module.
fn naive_distances(gens: &[Vec<i64>], bound: i64) -> HashMap<Vec<i64>, u64> {
    let dim = gens[0].len();
    let mut dist = HashMap::from([(vec![0; dim], 0u64)]);
    let mut q = VecDeque::from([vec![0i64; dim]]);
    while let Some(p) = q.pop_front() {
        let d = dist[&p];
        for g in gens {
            let n: Vec<i64> = p.iter().zip(g).map(|(a, b)| a + b).collect();
            if n.iter().any(|x| x.abs() > bound) || dist.contains_key(&n) {
                continue;
            }
            dist.insert(n.clone(), d + 1);
            q.push_back(n);
        }
    }
    dist
}

fn infinite_dihedral() -> CrystalSpec {
    CrystalSpec {
        name: "dinf".into(),
        dim: 1,
        generators: vec![
            AffineGenerator {
                linear: MatQ::from_ints(&[[-1]]),
                translation: qvec(&[0]),
            },
            AffineGenerator {
                linear: MatQ::from_ints(&[[-1]]),
                translation: qvec(&[1]),
            },
        ],
        lattice_note: None,
    }
}

#[test]
fn taxicab_ball() {
    let b = ball_growth(&l1(), 2, DEFAULT_BFS_BUDGET).unwrap();
    assert_eq!(b.len(), 13);
    assert_eq!(b[&vec![1, 1]], 2);
    for (p, d) in &b {
        assert_eq!(*d, (p[0].abs() + p[1].abs()) as u64);
    }
}

#[test]
fn diagonal_unit_ball() {
    let b = ball_growth(&diag(), 1, DEFAULT_BFS_BUDGET).unwrap();
    assert_eq!(b.len(), 7);
    assert_eq!(b[&vec![1, 1]], 1);
    let oracle = naive_distances(
        &[vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1], vec![1, 1], vec![-1, -1]],
        12,
    );
    for (p, d) in ball_growth(&diag(), 6, DEFAULT_BFS_BUDGET).unwrap() {
        assert_eq!(oracle[&p], d, "{p:?}");
    }
}

#[test]
fn infinite_dihedral_pulled_back() {
    let spec = WordMetricSpec::pulled_back(infinite_dihedral(), vec![]).unwrap();
    let b = ball_growth(&spec, 8, DEFAULT_BFS_BUDGET).unwrap();
    // translations by m sit at Cayley distance 2|m|; the discrete term adds one
    assert_eq!(b[&vec![0]], 0);
    for m in -4i64..=4 {
        if m != 0 {
            assert_eq!(b[&vec![m]], 2 * m.unsigned_abs() + 1, "m = {m}");
        }
    }
    assert_eq!(b.len(), 9);
    let est = directional_limit(&spec, &[1], 32, DEFAULT_BFS_BUDGET).unwrap();
    assert_eq!(est.measured_defect, 1);
    assert_eq!(est.lower, int(2));
    assert_eq!(est.upper, frac(65, 32));
}

#[test]
fn pulled_back_words_shorten() {
    // adding the translation ab as a generator makes d(0, m) = |m| + 1
    let spec = WordMetricSpec::pulled_back(infinite_dihedral(), vec![vec![1, 2]]).unwrap();
    let d = distances_to(&spec, &[vec![5], vec![-3]], DEFAULT_BFS_BUDGET).unwrap();
    assert_eq!(d, vec![6, 4]);
    assert!(WordMetricSpec::pulled_back(infinite_dihedral(), vec![vec![3]]).is_err());
}

#[test]
fn json_round_trip() {
    let spec = WordMetricSpec::pulled_back(infinite_dihedral(), vec![vec![1, -2]]).unwrap();
    assert_eq!(WordMetricSpec::from_json(&spec.to_json()).unwrap(), spec);
    assert_eq!(WordMetricSpec::from_json(&l1().to_json()).unwrap(), l1());
    let err = WordMetricSpec::from_json("{\"kind\": \"abelian\",\n \"dim\": x}").unwrap_err();
    assert!(matches!(err, StableNormError::Parse { line: 2, .. }));
    assert!(matches!(
        WordMetricSpec::from_json(r#"{"kind": "pulled_back", "dim": 1}"#),
        Err(StableNormError::InvalidSpec(_))
    ));
}

#[test]
fn taxicab_directions() {
    let spec = l1();
    for (z, v) in [([1, 0], 1), ([1, 1], 2), ([2, 1], 3)] {
        let est = directional_limit(&spec, &z, 32, DEFAULT_BFS_BUDGET).unwrap();
        assert_eq!((est.lower.clone(), est.upper.clone()), (int(v), int(v)), "{z:?}");
        assert!(est.samples.iter().all(|&(k, d)| d == v as u64 * k));
    }
}

#[test]
fn diagonal_directions() {
    let est = directional_limit(&diag(), &[1, 1], 32, DEFAULT_BFS_BUDGET).unwrap();
    assert_eq!((est.lower, est.upper), (int(1), int(1)));
    let est = directional_limit(&diag(), &[1, -1], 32, DEFAULT_BFS_BUDGET).unwrap();
    assert_eq!((est.lower, est.upper), (int(2), int(2)));
}

#[test]
fn brackets_converge_for_non_linear_growth() {
    // Z with generators ±2, ±3: d(0, k) is not linear, the limit is 1/3
    let spec = WordMetricSpec::symmetric(&[vec![2], vec![3]]).unwrap();
    let poly = stable_norm_polytope(&spec).unwrap();
    let target = poly.norm_int(&[1]);
    assert_eq!(target, frac(1, 3));
    let est = directional_limit(&spec, &[1], 256, DEFAULT_BFS_BUDGET).unwrap();
    let mut last_width = None;
    let mut last_upper = None;
    for k_max in sample_schedule(256) {
        let t = est.truncated(k_max);
        assert!(t.lower <= t.upper);
        if k_max >= 8 {
            assert!(t.contains(&target), "k_max = {k_max}: {t:?}");
        }
        if let Some(u) = &last_upper {
            assert!(&t.upper <= u);
        }
        if let Some(w) = &last_width {
            if k_max >= 16 {
                assert!(&t.width() <= w);
            }
        }
        last_upper = Some(t.upper.clone());
        last_width = Some(t.width());
    }
    assert!(est.width() < frac(1, 8));
}

#[test]
fn bad_directions() {
    assert!(matches!(
        directional_limit(&l1(), &[0, 0], 4, 100),
        Err(StableNormError::BadDirection { dim: 2 })
    ));
    assert!(matches!(
        directional_limit(&l1(), &[1], 4, 100),
        Err(StableNormError::BadDirection { .. })
    ));
}

#[test]
fn budget_reported() {
    let err = directional_limit(&l1(), &[1, 1], 64, 500).unwrap_err();
    assert!(matches!(err, StableNormError::BudgetExceeded { visited: 500, .. }));
}

#[test]
fn csv_export() {
    let est = directional_limit(&l1(), &[1, 0], 4, DEFAULT_BFS_BUDGET).unwrap();
    assert_eq!(est.to_csv(), "k,distance\n1,1\n2,2\n4,4\n");
}

#[test]
fn rough_probe_identical() {
    let p = rough_equivalence_probe(&l1(), &l1(), 8, DEFAULT_BFS_BUDGET).unwrap();
    assert_eq!(p.max_difference, vec![0, 0, 0]);
    assert_eq!(p.trend, Trend::Stabilizing);
}

#[test]
fn rough_probe_diagonal_grows() {
    let p = rough_equivalence_probe(&l1(), &diag(), 16, DEFAULT_BFS_BUDGET).unwrap();
    assert_eq!(p.radii, vec![4, 8, 16]);
    assert_eq!(p.max_difference, vec![2, 4, 8]);
    assert_eq!(p.trend, Trend::Growing);
    let w = p.witness.unwrap();
    assert_eq!(w[0], w[1]);
}

#[test]
fn rough_probe_long_generator_grows() {
    let long = WordMetricSpec::symmetric(&[vec![1, 0], vec![0, 1], vec![2, 0]]).unwrap();
    let p = rough_equivalence_probe(&l1(), &long, 16, DEFAULT_BFS_BUDGET).unwrap();
    assert_eq!(p.max_difference, vec![2, 4, 8]);
    assert_eq!(p.trend, Trend::Growing);
    assert_eq!(stable_norm_polytope(&long).unwrap().norm_int(&[2, 0]), int(1));
}

#[test]
fn left_invariance_lattice() {
    let group = diag().lattice_group().unwrap();
    let g = vec![3, -2];
    let from_g = cayley::bfs_layers(&group, g.clone(), Some(5), DEFAULT_BFS_BUDGET, |_| false).unwrap();
    let from_0 = cayley::ball(&group, 5, DEFAULT_BFS_BUDGET).unwrap();
    for (x, &d) in from_0.elements.iter().zip(&from_0.dist) {
        let gx: Vec<i64> = x.iter().zip(&g).map(|(a, b)| a + b).collect();
        assert_eq!(from_g.distance(&gx), Some(d));
    }
}

#[test]
fn left_invariance_affine() {
    let spec = WordMetricSpec::pulled_back(infinite_dihedral(), vec![]).unwrap();
    let group = spec.affine_group().unwrap();
    let g = group.generators[0].compose(&group.generators[1]).compose(&group.generators[0]);
    let from_g = cayley::bfs_layers(&group, g.clone(), Some(6), DEFAULT_BFS_BUDGET, |_| false).unwrap();
    let from_1 = cayley::ball(&group, 6, DEFAULT_BFS_BUDGET).unwrap();
    for (x, &d) in from_1.elements.iter().zip(&from_1.dist) {
        assert_eq!(from_g.distance(&g.compose(x)), Some(d));
    }
}

#[test]
fn coxeter_orbit_polytope_is_invariant() {
    let gens = [
        MatQ::from_ints(&[[0, -1], [1, -1]]),
        MatQ::from_ints(&[[0, 1], [1, 0]]),
    ];
    let group = FiniteMatrixGroup::close(2, &gens, 100).unwrap();
    let mut orbit: Vec<Vec<i64>> = Vec::new();
    for g in group.elements() {
        let v: Vec<i64> = g
            .mul_vec(&qvec(&[1, 0]))
            .iter()
            .map(|x| rational::to_i64(x).unwrap())
            .collect();
        if !orbit.contains(&v) {
            orbit.push(v);
        }
    }
    let spec = WordMetricSpec::symmetric(&orbit).unwrap();
    let poly = stable_norm_polytope(&spec).unwrap();
    assert_eq!(poly.vertices.len(), 6);
    assert!(group.elements().iter().all(|g| check_glnz_isometry(&poly, g)));
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| frac(n, d))
}

fn rational_vec(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    proptest::collection::vec(small_rational(), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn subadditive_along_directions(z in proptest::collection::vec(-2i64..=2, 2), m in 1u64..6, k in 1u64..6) {
        prop_assume!(z.iter().any(|&x| x != 0));
        let pts: Vec<Vec<i64>> = [m, k, m + k]
            .iter()
            .map(|&s| z.iter().map(|x| x * s as i64).collect())
            .collect();
        let d = distances_to(&diag(), &pts, DEFAULT_BFS_BUDGET).unwrap();
        prop_assert!(d[2] <= d[0] + d[1]);
    }

    #[test]
    fn hexagon_norm_axioms(x in rational_vec(2), y in rational_vec(2), a in small_rational()) {
        let p = stable_norm_polytope(&diag()).unwrap();
        let nx = p.norm(&x);
        prop_assert!(nx >= int(0));
        prop_assert_eq!(nx.is_zero(), x.iter().all(|c| c.is_zero()));
        let ax: Vec<Rational> = x.iter().map(|c| c * &a).collect();
        prop_assert_eq!(p.norm(&ax), num_traits::Signed::abs(&a) * &nx);
        let s: Vec<Rational> = x.iter().zip(&y).map(|(u, v)| u + v).collect();
        prop_assert!(p.norm(&s) <= nx + p.norm(&y));
    }
}

#[test]
fn orbit_metric_matches_hand_orbit() {
    let gens = [
        MatQ::from_ints(&[[0, -1], [1, -1]]),
        MatQ::from_ints(&[[0, 1], [1, 0]]),
    ];
    let group = FiniteMatrixGroup::close(2, &gens, 100).unwrap();
    let spec = orbit_metric(&group, &[vec![1, 0]]).unwrap();
    let poly = stable_norm_polytope(&spec).unwrap();
    let hand = stable_norm_polytope(
        &WordMetricSpec::symmetric(&[vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap(),
    )
    .unwrap();
    assert_eq!(poly.vertex_set(), hand.vertex_set());
    let report = polytope_invariance(&poly, &group);
    assert!(report.invariant);
    assert_eq!(report.group_order, 6);
    let l1_poly = stable_norm_polytope(&l1()).unwrap();
    assert!(!polytope_invariance(&l1_poly, &group).invariant);
    assert!(orbit_metric(&group, &[vec![1]]).is_err());
}
