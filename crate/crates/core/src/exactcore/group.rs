use std::collections::{BTreeSet, HashMap};

use super::matrix::MatQ;
use super::ExactError;

/// Default closure bound for [`FiniteMatrixGroup::close`].
pub const DEFAULT_MAX_GROUP_SIZE: usize = 10_000;

/// A finite subgroup of GLₙ(Q), materialized as an element list with its Cayley table.
///
/// Element 0 is always the identity; the remaining elements appear in breadth-first order
/// of right multiplication by the generators, so the layout is a pure function of the
/// generator list.
#[derive(Clone, Debug)]
pub struct FiniteMatrixGroup {
    dim: usize,
    elements: Vec<MatQ>,
    generator_indices: Vec<usize>,
    mult_table: Vec<u32>,
    inverses: Vec<usize>,
    orders: Vec<usize>,
}

impl FiniteMatrixGroup {
    /// Closes `generators` under multiplication.
    ///
    /// Fails with [`ExactError::GroupTooLarge`] once more than `max_size` distinct elements
    /// have been produced.
    pub fn close(dim: usize, generators: &[MatQ], max_size: usize) -> Result<Self, ExactError> {
        for (i, g) in generators.iter().enumerate() {
            if g.rows() != dim || g.cols() != dim {
                return Err(ExactError::Shape(format!(
                    "generator {i} is {}x{}, expected {dim}x{dim}",
                    g.rows(),
                    g.cols()
                )));
            }
            if !g.is_invertible() {
                return Err(ExactError::SingularGenerator { index: i });
            }
        }
        let mut elements = vec![MatQ::identity(dim)];
        let mut index: HashMap<MatQ, usize> = HashMap::new();
        index.insert(elements[0].clone(), 0);
        let mut head = 0;
        while head < elements.len() {
            for g in generators {
                let p = elements[head].mul_mat(g);
                if !index.contains_key(&p) {
                    if elements.len() == max_size {
                        return Err(ExactError::GroupTooLarge { limit: max_size });
                    }
                    index.insert(p.clone(), elements.len());
                    elements.push(p);
                }
            }
            head += 1;
        }
        let generator_indices = generators.iter().map(|g| index[g]).collect();
        let n = elements.len();
        let mut mult_table = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                let p = elements[i].mul_mat(&elements[j]);
                mult_table[i * n + j] = index[&p] as u32;
            }
        }
        let inverses = (0..n)
            .map(|i| {
                (0..n)
                    .find(|&j| mult_table[i * n + j] == 0)
                    .expect("finite group element has an inverse")
            })
            .collect();
        let mut group = Self {
            dim,
            elements,
            generator_indices,
            mult_table,
            inverses,
            orders: Vec::new(),
        };
        group.orders = (0..n)
            .map(|i| {
                let mut k = 1;
                let mut x = i;
                while x != 0 {
                    x = group.mul(x, i);
                    k += 1;
                }
                k
            })
            .collect();
        Ok(group)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[MatQ] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &MatQ {
        &self.elements[i]
    }

    pub fn generator_indices(&self) -> &[usize] {
        &self.generator_indices
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult_table[a * self.len() + b] as usize
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// Order of every element, indexed like [`Self::elements`].
    pub fn element_orders(&self) -> &[usize] {
        &self.orders
    }

    pub fn order_of(&self, i: usize) -> usize {
        self.orders[i]
    }

    /// Sorted multiset of element orders.
    pub fn order_multiset(&self) -> Vec<usize> {
        let mut v = self.orders.clone();
        v.sort_unstable();
        v
    }

    pub fn order_set(&self) -> BTreeSet<usize> {
        self.orders.iter().copied().collect()
    }

    pub fn index_of(&self, m: &MatQ) -> Option<usize> {
        self.elements.iter().position(|e| e == m)
    }

    /// Indicator of the subgroup generated by `gens`.
    pub fn subgroup_mask(&self, gens: &[usize]) -> Vec<bool> {
        let mut mask = vec![false; self.len()];
        mask[0] = true;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !mask[y] {
                    mask[y] = true;
                    stack.push(y);
                }
            }
        }
        mask
    }

    /// An irredundant generating set: duplicates and the identity are dropped, and each
    /// kept generator enlarges the subgroup generated by the ones before it.
    pub fn reduced_generators(&self) -> Vec<usize> {
        let mut kept: Vec<usize> = Vec::new();
        let mut mask = self.subgroup_mask(&kept);
        for &g in &self.generator_indices {
            if !mask[g] {
                kept.push(g);
                mask = self.subgroup_mask(&kept);
            }
        }
        kept
    }

    /// Checks `elements[mult(i, j)] = elements[i]·elements[j]` for every pair.
    pub fn table_is_consistent(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| {
            (0..n).all(|j| self.elements[self.mul(i, j)] == self.elements[i].mul_mat(&self.elements[j]))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coxeter_333() -> Vec<MatQ> {
        vec![
            MatQ::from_ints(&[[0, -1], [1, -1]]),
            MatQ::from_ints(&[[0, 1], [1, 0]]),
        ]
    }

    /// Independent oracle: close by repeated pairwise products until nothing new appears.
    fn naive_closure(gens: &[MatQ], dim: usize) -> BTreeSet<MatQ> {
        let mut set: BTreeSet<MatQ> = gens.iter().cloned().collect();
        set.insert(MatQ::identity(dim));
        loop {
            let snapshot: Vec<MatQ> = set.iter().cloned().collect();
            let before = set.len();
            for a in &snapshot {
                for b in &snapshot {
                    set.insert(a.mul_mat(b));
                }
            }
            if set.len() == before {
                return set;
            }
        }
    }

    /// Independent oracle: order by repeated matrix powers.
    fn brute_order(m: &MatQ) -> usize {
        let mut p = m.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = p.mul_mat(m);
            k += 1;
        }
        k
    }

    #[test]
    fn identity_group() {
        let g = FiniteMatrixGroup::close(2, &[MatQ::identity(2)], 100).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.element_orders(), &[1]);
    }

    #[test]
    fn no_generators() {
        let g = FiniteMatrixGroup::close(3, &[], 100).unwrap();
        assert_eq!(g.len(), 1);
        assert!(g.element(0).is_identity());
    }

    #[test]
    fn involution() {
        let minus = MatQ::identity(2).scale(&crate::exactcore::rational::int(-1));
        let g = FiniteMatrixGroup::close(2, &[minus.clone()], 100).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g.order_multiset(), vec![1, 2]);
        assert_eq!(g.index_of(&minus), Some(1));
    }

    #[test]
    fn coxeter_point_group() {
        let gens = coxeter_333();
        let g = FiniteMatrixGroup::close(2, &gens, 100).unwrap();
        let oracle = naive_closure(&gens, 2);
        assert_eq!(g.len(), 6);
        assert_eq!(g.elements().iter().cloned().collect::<BTreeSet<_>>(), oracle);
        let brute: Vec<usize> = {
            let mut v: Vec<usize> = oracle.iter().map(brute_order).collect();
            v.sort_unstable();
            v
        };
        assert_eq!(brute, vec![1, 2, 2, 2, 3, 3]);
        assert_eq!(g.order_multiset(), brute);
        assert!(g.table_is_consistent());
    }

    #[test]
    fn closure_is_idempotent() {
        let g = FiniteMatrixGroup::close(2, &coxeter_333(), 100).unwrap();
        let again = FiniteMatrixGroup::close(2, g.elements(), 100).unwrap();
        let a: BTreeSet<_> = g.elements().iter().cloned().collect();
        let b: BTreeSet<_> = again.elements().iter().cloned().collect();
        assert_eq!(a, b);
    }

    #[test]
    fn lagrange() {
        let g = FiniteMatrixGroup::close(2, &coxeter_333(), 100).unwrap();
        assert!(g.element_orders().iter().all(|o| g.len() % o == 0));
    }

    #[test]
    fn infinite_group_hits_bound() {
        let shear = MatQ::from_ints(&[[1, 1], [0, 1]]);
        assert_eq!(
            FiniteMatrixGroup::close(2, &[shear], 50).unwrap_err(),
            ExactError::GroupTooLarge { limit: 50 }
        );
    }

    #[test]
    fn singular_generator() {
        let s = MatQ::from_ints(&[[1, 0], [0, 0]]);
        assert_eq!(
            FiniteMatrixGroup::close(2, &[MatQ::identity(2), s], 50).unwrap_err(),
            ExactError::SingularGenerator { index: 1 }
        );
    }

    #[test]
    fn reduced_generators_drop_redundancy() {
        let r = MatQ::from_ints(&[[0, -1], [1, 0]]);
        let r2 = r.mul_mat(&r);
        let g =
            FiniteMatrixGroup::close(2, &[MatQ::identity(2), r.clone(), r2, r.clone()], 100).unwrap();
        assert_eq!(g.reduced_generators(), vec![g.index_of(&r).unwrap()]);
        assert_eq!(g.inverse(g.index_of(&r).unwrap()), g.index_of(&r.inverse().unwrap()).unwrap());
    }
}
