//! Memoized derivatives of boundary symbols.

use std::collections::HashMap;

use crate::expr::{Expr, Roots};

/// All multi-indices in `dim` variables with total order `order`, in
/// lexicographically decreasing order.
pub fn multi_indices(dim: usize, order: u32) -> Vec<Vec<u32>> {
    fn rec(dim: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == dim {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in (0..=left).rev() {
            prefix.push(a);
            rec(dim, left - a, prefix, out);
            prefix.pop();
        }
    }
    if dim == 0 {
        return if order == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    rec(dim, order, &mut Vec::new(), &mut out);
    out
}

/// Derivatives `∂_{x'}^a ∂_{ξ'}^b ∂_{ξ_n}^c` of one symbol, indexed by the
/// concatenation `(a, b, c)` of length `2(n−1) + 1`.
pub struct DerivCache {
    base: Expr,
    map: HashMap<Vec<u32>, Expr>,
}

impl DerivCache {
    pub fn new(base: Expr) -> Self {
        DerivCache { base, map: HashMap::new() }
    }

    pub fn base(&self) -> &Expr {
        &self.base
    }

    /// The derivative with the given index.
    pub fn get(&mut self, roots: &Roots, idx: &[u32]) -> Expr {
        if idx.iter().all(|e| *e == 0) {
            return self.base.clone();
        }
        if let Some(e) = self.map.get(idx) {
            return e.clone();
        }
        // Peel one derivative off the last nonzero slot.
        let v = idx.iter().rposition(|e| *e > 0).unwrap();
        let mut parent = idx.to_vec();
        parent[v] -= 1;
        let p = self.get(roots, &parent);
        let nvars = idx.len() - 1;
        let d = if v == nvars { p.deriv_xi_n() } else { p.deriv_var(roots, v) };
        self.map.insert(idx.to_vec(), d.clone());
        d
    }

    /// `∂_{ξ'}^β`.
    pub fn xi(&mut self, roots: &Roots, beta: &[u32], k_n: u32) -> Expr {
        let m = beta.len();
        let mut idx = vec![0; 2 * m + 1];
        idx[m..2 * m].copy_from_slice(beta);
        idx[2 * m] = k_n;
        self.get(roots, &idx)
    }

    /// `∂_{x'}^α` (plain derivative, no factor of `−i`).
    pub fn x(&mut self, roots: &Roots, alpha: &[u32]) -> Expr {
        let m = alpha.len();
        let mut idx = vec![0; 2 * m + 1];
        idx[..m].copy_from_slice(alpha);
        self.get(roots, &idx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multi_index_counts() {
        assert_eq!(multi_indices(0, 0), vec![Vec::<u32>::new()]);
        assert!(multi_indices(0, 2).is_empty());
        assert_eq!(multi_indices(1, 3), vec![vec![3]]);
        assert_eq!(multi_indices(2, 3).len(), 4);
        assert_eq!(multi_indices(3, 2).len(), 6);
        assert_eq!(multi_indices(2, 2)[0], vec![2, 0]);
    }
}
