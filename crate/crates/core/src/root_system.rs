//! Root systems of types A_n, D_n and E6 in ambient epsilon-coordinates.
//!
//! Roots are integer coordinate vectors for the functionals epsilon_i on the
//! ambient Cartan space:
//!  * A_n lives in n+1 coordinates, roots e_i - e_j (sum-zero functionals);
//!  * D_n lives in n coordinates, roots +-e_i +- e_j (i < j);
//!  * E6 lives in 6 coordinates with roots +-(e_i - e_j) for i < j,
//!    +-(e_i + e_j + e_k) for i < j < k and +-(e_1 + ... + e_6), 72 in total.
//!
//! The global root order is lexicographic on coordinates.  Subsets of roots are
//! u128 bitmasks over that order, and Weyl group elements are permutation
//! arrays of the root list.

use crate::scalar::{rat, Rat};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet, VecDeque};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    D,
    E6,
}

/// Subset of the root list as a bitmask in root order.
pub type RootSet = u128;

pub fn set_contains(s: RootSet, i: usize) -> bool {
    s >> i & 1 == 1
}

pub fn set_insert(s: &mut RootSet, i: usize) {
    *s |= 1u128 << i;
}

pub fn set_iter(s: RootSet) -> impl Iterator<Item = usize> {
    (0..128).filter(move |&i| s >> i & 1 == 1)
}

pub fn set_len(s: RootSet) -> usize {
    s.count_ones() as usize
}

/// Weyl group element as a permutation of root indices.
pub type RootPerm = Vec<u8>;

pub fn apply_perm_to_set(perm: &[u8], s: RootSet) -> RootSet {
    let mut out: RootSet = 0;
    for i in set_iter(s) {
        out |= 1u128 << perm[i];
    }
    out
}

pub fn compose_perms(first: &[u8], then: &[u8]) -> RootPerm {
    first.iter().map(|&i| then[i as usize]).collect()
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    pub family: Family,
    pub rank: usize,
    /// Number of ambient coordinates.
    pub ambient: usize,
    /// Roots sorted lexicographically on coordinates.
    pub roots: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
    /// Index of -alpha for each root.
    pub neg: Vec<usize>,
    /// sum_table[i][j] = index of roots[i] + roots[j] when that is a root.
    pub sum_table: Vec<Vec<Option<u16>>>,
    /// Indices of the simple roots (family presentation order, see module docs).
    pub simple: Vec<usize>,
    /// Expansion of each root in the simple roots (integer coefficients).
    pub simple_coords: Vec<Vec<i64>>,
    /// Height = coefficient sum over the simple roots.
    pub height: Vec<i64>,
    pub is_positive: Vec<bool>,
    /// Positive roots ordered by (height, lex).
    pub positive: Vec<usize>,
    /// Killing-induced Gram matrix on the ambient Cartan coordinates.
    pub gram: Vec<Vec<Rat>>,
    /// Family normalization factor applied to the trace form.
    pub kappa: Rat,
    /// Killing dual of each root: ambient vector h with <h, y> = alpha(y).
    pub dual: Vec<Vec<Rat>>,
    /// Coroot of each root (2 * dual / |alpha|^2), an ambient vector.
    pub coroot: Vec<Vec<Rat>>,
    /// Cartan integers cartan_int[i][j] = roots[i] evaluated on coroot[j].
    pub cartan_int: Vec<Vec<i64>>,
    /// Common squared dual length denominator: <alpha,alpha> = 2/m for all roots.
    pub m: i64,
    /// Ambient vectors forming a basis of the Cartan subalgebra (rank many).
    pub cartan_basis: Vec<Vec<Rat>>,
    /// rank x ambient matrix converting ambient Cartan vectors to basis coords.
    pub cartan_basis_inv: Vec<Vec<Rat>>,
}

fn lex_less(a: &[i64], b: &[i64]) -> std::cmp::Ordering {
    a.cmp(b)
}

/// Exact rational linear solve for small systems (Gaussian elimination over Q).
fn solve_rational(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let rows = a.len();
    let cols = if rows > 0 { a[0].len() } else { 0 };
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, r)| {
            let mut v = row.clone();
            v.push(r.clone());
            v
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..=cols {
        if r >= rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&k| !m[k][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = Rat::from_integer(1.into()) / m[r][c].clone();
        for j in c..=cols {
            let v = &m[r][j] * &inv;
            m[r][j] = v;
        }
        for k in 0..rows {
            if k != r && !m[k][c].is_zero() {
                let f = m[k][c].clone();
                for j in c..=cols {
                    let v = &m[k][j] - &(&f * &m[r][j]);
                    m[k][j] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Rat::zero(); cols];
    for (ri, &pc) in pivots.iter().enumerate() {
        x[pc] = m[ri][cols].clone();
    }
    Some(x)
}

impl RootSystem {
    /// Build the root system for the given family and rank.
    ///
    /// Supported: A_n for n >= 1, D_n for n >= 3, E6 (rank must be 6).
    pub fn build(family: Family, rank: usize) -> RootSystem {
        let (ambient, mut roots, kappa): (usize, Vec<Vec<i64>>, Rat) = match family {
            Family::A => {
                assert!(rank >= 1, "A_n needs rank >= 1");
                let n = rank + 1;
                let mut v = Vec::new();
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            let mut r = vec![0i64; n];
                            r[i] = 1;
                            r[j] = -1;
                            v.push(r);
                        }
                    }
                }
                (n, v, rat(1) / rat(2))
            }
            Family::D => {
                assert!(rank >= 3, "D_n needs rank >= 3");
                let n = rank;
                let mut v = Vec::new();
                for i in 0..n {
                    for j in (i + 1)..n {
                        for (si, sj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                            let mut r = vec![0i64; n];
                            r[i] = si;
                            r[j] = sj;
                            v.push(r);
                        }
                    }
                }
                (n, v, rat(1) / rat(2))
            }
            Family::E6 => {
                assert_eq!(rank, 6, "E6 has rank 6");
                let mut v = Vec::new();
                for i in 0..6 {
                    for j in (i + 1)..6 {
                        for s in [1i64, -1] {
                            let mut r = vec![0i64; 6];
                            r[i] = s;
                            r[j] = -s;
                            v.push(r);
                        }
                    }
                }
                for i in 0..6 {
                    for j in (i + 1)..6 {
                        for k in (j + 1)..6 {
                            for s in [1i64, -1] {
                                let mut r = vec![0i64; 6];
                                r[i] = s;
                                r[j] = s;
                                r[k] = s;
                                v.push(r);
                            }
                        }
                    }
                }
                v.push(vec![1; 6]);
                v.push(vec![-1; 6]);
                (6, v, rat(1))
            }
        };
        roots.sort_by(|a, b| lex_less(a, b));
        let count = roots.len();
        assert!(count <= 128, "root subsets are stored as u128 bitmasks");
        let index: HashMap<Vec<i64>, usize> = roots
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, r)| (r, i))
            .collect();
        let neg: Vec<usize> = roots
            .iter()
            .map(|r| index[&r.iter().map(|x| -x).collect::<Vec<_>>()])
            .collect();
        let mut sum_table = vec![vec![None; count]; count];
        for i in 0..count {
            for j in 0..count {
                let s: Vec<i64> = roots[i].iter().zip(&roots[j]).map(|(a, b)| a + b).collect();
                if let Some(&k) = index.get(&s) {
                    sum_table[i][j] = Some(k as u16);
                }
            }
        }

        // Simple roots in the family presentation.
        let simple_vecs: Vec<Vec<i64>> = match family {
            Family::A | Family::D => {
                let mut v = Vec::new();
                let upper = if family == Family::A { rank } else { rank - 1 };
                for i in 0..upper {
                    let mut r = vec![0i64; ambient];
                    r[i] = 1;
                    r[i + 1] = -1;
                    v.push(r);
                }
                if family == Family::D {
                    let mut r = vec![0i64; ambient];
                    r[rank - 2] = 1;
                    r[rank - 1] = 1;
                    v.push(r);
                }
                v
            }
            Family::E6 => {
                let mut v = Vec::new();
                for i in 0..5 {
                    let mut r = vec![0i64; 6];
                    r[i] = 1;
                    r[i + 1] = -1;
                    v.push(r);
                }
                v.push(vec![0, 0, 0, 1, 1, 1]);
                v
            }
        };
        let simple: Vec<usize> = simple_vecs.iter().map(|r| index[r]).collect();

        // Expansion of each root in the simple roots.  For A_n the ambient space
        // has one extra dimension; the simple roots still span the root space, so
        // a consistent solution exists and is unique.
        let simple_mat: Vec<Vec<Rat>> = (0..ambient)
            .map(|c| simple_vecs.iter().map(|r| rat(r[c])).collect())
            .collect();
        let mut simple_coords = Vec::with_capacity(count);
        let mut height = Vec::with_capacity(count);
        for r in &roots {
            let rhs: Vec<Rat> = r.iter().map(|&x| rat(x)).collect();
            let sol = solve_rational(&simple_mat, &rhs)
                .expect("every root must be an integer combination of simple roots");
            let coords: Vec<i64> = sol
                .iter()
                .map(|q| {
                    assert!(q.is_integer(), "non-integer simple-root coordinate");
                    let n: num_bigint::BigInt = q.to_integer();
                    i64::try_from(&n).expect("coordinate fits i64")
                })
                .collect();
            let h: i64 = coords.iter().sum();
            let all_nonneg = coords.iter().all(|&c| c >= 0);
            let all_nonpos = coords.iter().all(|&c| c <= 0);
            assert!(all_nonneg || all_nonpos, "mixed-sign simple coordinates");
            simple_coords.push(coords);
            height.push(h);
        }
        let is_positive: Vec<bool> = height.iter().map(|&h| h > 0).collect();
        let mut positive: Vec<usize> = (0..count).filter(|&i| is_positive[i]).collect();
        positive.sort_by_key(|&i| (height[i], roots[i].clone()));

        // Gram matrix on ambient Cartan coordinates: kappa * sum over roots of
        // alpha (x) alpha, which is the (rescaled) trace form restricted to h.
        let mut gram = vec![vec![Rat::zero(); ambient]; ambient];
        for r in &roots {
            for (i, &ri) in r.iter().enumerate() {
                if ri == 0 {
                    continue;
                }
                for (j, &rj) in r.iter().enumerate() {
                    if rj != 0 {
                        let v = &gram[i][j] + &(&kappa * rat(ri * rj));
                        gram[i][j] = v;
                    }
                }
            }
        }

        // Killing duals and coroots.
        let mut dual = Vec::with_capacity(count);
        let mut coroot = Vec::with_capacity(count);
        let mut m_val: Option<i64> = None;
        for r in &roots {
            let rhs: Vec<Rat> = r.iter().map(|&x| rat(x)).collect();
            let mut d = solve_rational(&gram, &rhs).expect("root functional in Gram row space");
            if family == Family::A {
                // The Gram form is degenerate on the ambient space with radical
                // spanned by (1,...,1); normalize to the traceless representative.
                let mean: Rat = d.iter().sum::<Rat>() / rat(ambient as i64);
                for e in d.iter_mut() {
                    *e -= &mean;
                }
            }
            // |alpha|^2 in the dual metric.
            let norm: Rat = r.iter().zip(&d).map(|(&x, q)| rat(x) * q).sum();
            let two_over = rat(2) / norm.clone();
            assert!(two_over.is_integer(), "2/<alpha,alpha> must be an integer");
            let mv = i64::try_from(&two_over.to_integer()).unwrap();
            match m_val {
                None => m_val = Some(mv),
                Some(prev) => assert_eq!(prev, mv, "simply-laced: equal root lengths"),
            }
            let cr: Vec<Rat> = d.iter().map(|q| q * rat(mv)).collect();
            dual.push(d);
            coroot.push(cr);
        }
        let m = m_val.unwrap();

        let mut cartan_int = vec![vec![0i64; count]; count];
        for i in 0..count {
            for j in 0..count {
                let v: Rat = roots[i]
                    .iter()
                    .zip(&coroot[j])
                    .map(|(&x, q)| rat(x) * q)
                    .sum();
                assert!(v.is_integer());
                cartan_int[i][j] = i64::try_from(&v.to_integer()).unwrap();
            }
        }

        // Cartan basis: coroots of the simple roots (always a basis of h).
        let cartan_basis: Vec<Vec<Rat>> = simple.iter().map(|&i| coroot[i].clone()).collect();
        // Left inverse via the normal equations (exact, basis has full column rank).
        let cartan_basis_inv = left_inverse(&cartan_basis, ambient);

        RootSystem {
            family,
            rank,
            ambient,
            roots,
            index,
            neg,
            sum_table,
            simple,
            simple_coords,
            height,
            is_positive,
            positive,
            gram,
            kappa,
            dual,
            coroot,
            cartan_int,
            m,
            cartan_basis,
            cartan_basis_inv,
        }
    }

    pub fn count(&self) -> usize {
        self.roots.len()
    }

    pub fn root_index(&self, coords: &[i64]) -> Option<usize> {
        self.index.get(coords).copied()
    }

    /// Index of roots[i] + roots[j] when it is a root.
    pub fn sum(&self, i: usize, j: usize) -> Option<usize> {
        self.sum_table[i][j].map(|k| k as usize)
    }

    /// Gram pairing of two ambient Cartan vectors (rational entries).
    pub fn gram_pair(&self, x: &[Rat], y: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if !yj.is_zero() {
                    acc += xi * &self.gram[i][j] * yj;
                }
            }
        }
        acc
    }

    /// Evaluate root i on an ambient rational Cartan vector.
    pub fn eval_root(&self, i: usize, h: &[Rat]) -> Rat {
        self.roots[i].iter().zip(h).map(|(&x, q)| rat(x) * q).sum()
    }

    /// The reflection in root i as a permutation of the root list.
    pub fn reflection(&self, i: usize) -> RootPerm {
        (0..self.count())
            .map(|j| {
                let c = self.cartan_int[j][i];
                let target: Vec<i64> = self.roots[j]
                    .iter()
                    .zip(&self.roots[i])
                    .map(|(&b, &a)| b - c * a)
                    .collect();
                self.index[&target] as u8
            })
            .collect()
    }

    /// Generate the full Weyl group as permutations of the root list by breadth
    /// first closure over the simple reflections.  Panics if the group exceeds
    /// `bound` elements.
    pub fn weyl_group(&self, bound: usize) -> Vec<RootPerm> {
        let gens: Vec<RootPerm> = self.simple.iter().map(|&i| self.reflection(i)).collect();
        let id: RootPerm = (0..self.count() as u8).collect();
        let mut seen: HashSet<RootPerm> = HashSet::new();
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        seen.insert(id.clone());
        queue.push_back(id);
        while let Some(w) = queue.pop_front() {
            out.push(w.clone());
            assert!(out.len() <= bound, "Weyl group exceeds bound {bound}");
            for g in &gens {
                let next = compose_perms(&w, g);
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        out
    }

    /// Is the subset closed under root addition?
    pub fn is_closed(&self, s: RootSet) -> bool {
        for i in set_iter(s) {
            for j in set_iter(s) {
                if let Some(k) = self.sum(i, j) {
                    if !set_contains(s, k) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Symmetric part {alpha in s : -alpha in s}.
    pub fn symmetric_part(&self, s: RootSet) -> RootSet {
        let mut out: RootSet = 0;
        for i in set_iter(s) {
            if set_contains(s, self.neg[i]) {
                out |= 1u128 << i;
            }
        }
        out
    }

    /// Bitmask of the positive roots.
    pub fn positive_set(&self) -> RootSet {
        let mut s: RootSet = 0;
        for &i in &self.positive {
            set_insert(&mut s, i);
        }
        s
    }

    /// Convert an ambient rational Cartan vector to cartan_basis coordinates.
    pub fn to_basis_coords(&self, h: &[Rat]) -> Vec<Rat> {
        self.cartan_basis_inv
            .iter()
            .map(|row| row.iter().zip(h).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// Left inverse of a row-basis matrix (rows are vectors of length `ambient`):
/// returns C with C * B^T = I via the normal equations.
fn left_inverse(rows: &[Vec<Rat>], ambient: usize) -> Vec<Vec<Rat>> {
    let k = rows.len();
    // G = B B^T (k x k), invertible since rows are independent.
    let mut g = vec![vec![Rat::zero(); k]; k];
    for i in 0..k {
        for j in 0..k {
            g[i][j] = rows[i].iter().zip(&rows[j]).map(|(a, b)| a * b).sum();
        }
    }
    // Solve G X = B, then left inverse is X (k x ambient).
    let mut out = vec![vec![Rat::zero(); ambient]; k];
    for c in 0..ambient {
        let rhs: Vec<Rat> = rows.iter().map(|r| r[c].clone()).collect();
        let x = solve_rational(&g, &rhs).expect("basis Gram invertible");
        for i in 0..k {
            out[i][c] = x[i].clone();
        }
    }
    out
}
