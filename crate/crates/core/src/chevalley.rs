//! Normalized Weyl bases of the complex Lie algebras attached to a root system.
//!
//! The basis consists of the ambient Cartan space plus one root vector E_alpha
//! per root, normalized so that
//!
//!  * <E_alpha, E_{-alpha}> = 1 for the family's invariant form,
//!  * every structure constant N_{alpha,beta} is real with
//!    N_{-alpha,-beta} = -N_{alpha,beta} and N_{beta,alpha} = -N_{alpha,beta},
//!  * [E_alpha, E_{-alpha}] is the invariant-form dual of alpha.
//!
//! All N values have magnitude 1/sqrt(m) where m is the family normalization
//! denominator (2n for A_{2n-1} with the halved trace form, 2(n-1) for D_n,
//! 24 for E6 with the full trace form).
//!
//! Constructions: type A uses the elementary-matrix model E_{ab}; type D uses
//! the wedge model on the split quadratic space; E6 uses a bimultiplicative
//! sign cocycle on the root lattice, with the resulting sign convention fixed
//! by this crate (documented in the README) since no canonical table exists.

use crate::root_system::{Family, RootSystem};
use crate::scalar::{inv_sqrt, rat, squarefree_decompose, QuadField, Rat, Scalar};
use num_traits::Zero;
use std::collections::HashMap;
use std::sync::Arc;

/// Element of the complex Lie algebra: an ambient Cartan vector plus root
/// vector coefficients (in root order).
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement {
    pub cartan: Vec<Scalar>,
    pub coef: Vec<Scalar>,
}

impl AlgebraElement {
    pub fn zero(rs: &RootSystem) -> Self {
        AlgebraElement {
            cartan: vec![Scalar::zero(); rs.ambient],
            coef: vec![Scalar::zero(); rs.count()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.cartan.iter().all(Scalar::is_zero) && self.coef.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        AlgebraElement {
            cartan: self
                .cartan
                .iter()
                .zip(&o.cartan)
                .map(|(a, b)| a.add(b))
                .collect(),
            coef: self
                .coef
                .iter()
                .zip(&o.coef)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        AlgebraElement {
            cartan: self.cartan.iter().map(Scalar::neg).collect(),
            coef: self.coef.iter().map(Scalar::neg).collect(),
        }
    }
}

/// Normalized Weyl basis with exact structure constants.
#[derive(Clone, Debug)]
pub struct WeylBasis {
    pub rs: Arc<RootSystem>,
    pub field: QuadField,
    /// Normalization denominator m: all |N| = 1/sqrt(m).
    pub m: i64,
    /// 1/sqrt(m) as a field element.
    pub inv_sqrt_m: Scalar,
    /// Sign of N_{alpha,beta}; 0 when alpha+beta is not a root.
    n_sign: Vec<Vec<i8>>,
}

impl WeylBasis {
    pub fn build(rs: Arc<RootSystem>) -> WeylBasis {
        let m = rs.m;
        let (_, p0) = squarefree_decompose(m);
        // When 1/sqrt(m) is rational any radicand works; keep a fixed default so
        // the field is still a genuine quadratic extension.
        let field = QuadField::new(if p0 == 1 { 2 } else { p0 });
        let inv_sqrt_m = inv_sqrt(&field, m);
        let n_sign = match rs.family {
            Family::A => a_signs(&rs),
            Family::D => d_signs(&rs),
            Family::E6 => cocycle_signs(&rs),
        };
        let wb = WeylBasis {
            rs,
            field,
            m,
            inv_sqrt_m,
            n_sign,
        };
        wb.assert_axioms();
        wb
    }

    fn assert_axioms(&self) {
        let rs = &self.rs;
        let n = rs.count();
        for i in 0..n {
            for j in 0..n {
                let s = self.n_sign[i][j];
                match rs.sum(i, j) {
                    None => assert_eq!(s, 0),
                    Some(_) => {
                        assert_ne!(s, 0, "missing structure constant");
                        assert_eq!(s, -self.n_sign[j][i], "antisymmetry");
                        assert_eq!(
                            s, -self.n_sign[rs.neg[i]][rs.neg[j]],
                            "opposite-pair sign rule"
                        );
                    }
                }
            }
        }
    }

    /// Structure constant N_{alpha,beta} as a field element.
    pub fn n_const(&self, i: usize, j: usize) -> Scalar {
        match self.n_sign[i][j] {
            0 => Scalar::zero(),
            1 => self.inv_sqrt_m.clone(),
            _ => self.inv_sqrt_m.neg(),
        }
    }

    pub fn n_sign(&self, i: usize, j: usize) -> i8 {
        self.n_sign[i][j]
    }

    /// The root vector E_alpha as an element.
    pub fn root_vector(&self, i: usize) -> AlgebraElement {
        let mut e = AlgebraElement::zero(&self.rs);
        e.coef[i] = Scalar::one();
        e
    }

    /// Cartan element from rational ambient coordinates.
    pub fn cartan_vector(&self, h: &[Rat]) -> AlgebraElement {
        let mut e = AlgebraElement::zero(&self.rs);
        for (k, q) in h.iter().enumerate() {
            e.cartan[k] = Scalar::from_rat(q.clone());
        }
        e
    }

    /// [E_alpha, E_{-alpha}] = invariant dual of alpha, as an element.
    pub fn coroot_element(&self, i: usize) -> AlgebraElement {
        self.cartan_vector(&self.rs.dual[i])
    }

    /// Evaluate root i on the (Scalar) Cartan part of an element.
    pub fn eval_root_scalar(&self, i: usize, h: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero();
        for (k, &c) in self.rs.roots[i].iter().enumerate() {
            if c != 0 && !h[k].is_zero() {
                acc = acc.add(&h[k].scale(&rat(c)));
            }
        }
        acc
    }

    /// Lie bracket of two elements.
    pub fn bracket(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let rs = &self.rs;
        let f = &self.field;
        let mut out = AlgebraElement::zero(rs);
        let nz_x: Vec<usize> = (0..rs.count()).filter(|&i| !x.coef[i].is_zero()).collect();
        let nz_y: Vec<usize> = (0..rs.count()).filter(|&i| !y.coef[i].is_zero()).collect();
        // Cartan action.
        for &b in &nz_y {
            let v = self.eval_root_scalar(b, &x.cartan);
            if !v.is_zero() {
                out.coef[b] = out.coef[b].add(&f.mul(&v, &y.coef[b]));
            }
        }
        for &a in &nz_x {
            let v = self.eval_root_scalar(a, &y.cartan);
            if !v.is_zero() {
                out.coef[a] = out.coef[a].sub(&f.mul(&v, &x.coef[a]));
            }
        }
        // Root-root terms.
        for &a in &nz_x {
            for &b in &nz_y {
                let prod = f.mul(&x.coef[a], &y.coef[b]);
                if prod.is_zero() {
                    continue;
                }
                if b == rs.neg[a] {
                    for (k, q) in rs.dual[a].iter().enumerate() {
                        if !q.is_zero() {
                            out.cartan[k] = out.cartan[k].add(&prod.scale(q));
                        }
                    }
                } else if let Some(s) = rs.sum(a, b) {
                    let n = self.n_const(a, b);
                    out.coef[s] = out.coef[s].add(&f.mul(&n, &prod));
                }
            }
        }
        out
    }

    /// Family invariant form (the rescaled Killing form): <H,H'> from the Gram
    /// matrix, <E_alpha, E_{-alpha}> = 1, mixed pairings zero.
    pub fn killing(&self, x: &AlgebraElement, y: &AlgebraElement) -> Scalar {
        let rs = &self.rs;
        let f = &self.field;
        let mut acc = Scalar::zero();
        for (i, xi) in x.cartan.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.cartan.iter().enumerate() {
                if !yj.is_zero() && !rs.gram[i][j].is_zero() {
                    acc = acc.add(&f.mul(xi, yj).scale(&rs.gram[i][j]));
                }
            }
        }
        for i in 0..rs.count() {
            if !x.coef[i].is_zero() {
                let j = rs.neg[i];
                if !y.coef[j].is_zero() {
                    acc = acc.add(&f.mul(&x.coef[i], &y.coef[j]));
                }
            }
        }
        acc
    }

    /// Dimension of the flat coordinate space (a true basis of the algebra).
    pub fn flat_dim(&self) -> usize {
        self.rs.rank + self.rs.count()
    }

    /// Coordinates in the basis (simple coroots, then root vectors).
    pub fn to_flat(&self, x: &AlgebraElement) -> Vec<Scalar> {
        let rs = &self.rs;
        let mut v = Vec::with_capacity(self.flat_dim());
        for row in &rs.cartan_basis_inv {
            let mut acc = Scalar::zero();
            for (k, q) in row.iter().enumerate() {
                if !q.is_zero() && !x.cartan[k].is_zero() {
                    acc = acc.add(&x.cartan[k].scale(q));
                }
            }
            v.push(acc);
        }
        v.extend(x.coef.iter().cloned());
        v
    }

    pub fn from_flat(&self, v: &[Scalar]) -> AlgebraElement {
        let rs = &self.rs;
        let mut e = AlgebraElement::zero(rs);
        for (bi, b) in rs.cartan_basis.iter().enumerate() {
            if v[bi].is_zero() {
                continue;
            }
            for (k, q) in b.iter().enumerate() {
                if !q.is_zero() {
                    e.cartan[k] = e.cartan[k].add(&v[bi].scale(q));
                }
            }
        }
        for i in 0..rs.count() {
            e.coef[i] = v[rs.rank + i].clone();
        }
        e
    }

    /// Scale an element by a field value.
    pub fn scale_elem(&self, x: &AlgebraElement, s: &Scalar) -> AlgebraElement {
        let f = &self.field;
        AlgebraElement {
            cartan: x.cartan.iter().map(|c| f.mul(c, s)).collect(),
            coef: x.coef.iter().map(|c| f.mul(c, s)).collect(),
        }
    }
}

/// Type A signs from the elementary matrix model:
/// [E_ab, E_cd] = delta_bc E_ad - delta_da E_cb.
fn a_signs(rs: &RootSystem) -> Vec<Vec<i8>> {
    let n = rs.count();
    let mut table = vec![vec![0i8; n]; n];
    let pair = |i: usize| -> (usize, usize) {
        let a = rs.roots[i].iter().position(|&x| x == 1).unwrap();
        let b = rs.roots[i].iter().position(|&x| x == -1).unwrap();
        (a, b)
    };
    for i in 0..n {
        let (a, b) = pair(i);
        for j in 0..n {
            if rs.sum(i, j).is_none() {
                continue;
            }
            let (c, d) = pair(j);
            if b == c {
                table[i][j] = 1;
            } else if a == d {
                table[i][j] = -1;
            }
        }
    }
    table
}

/// Type D signs from the wedge model on the split quadratic space with basis
/// e_{+-1}, ..., e_{+-n} and (e_a, e_b) = delta_{a,-b}.
///
/// Root vectors (x = 1/sqrt(m) omitted; 1-based indices):
///   eps_i - eps_j        -> e_i /\ e_{-j}
///   eps_i + eps_j (i<j)  -> e_i /\ e_j
///   -eps_i - eps_j (i<j) -> -(e_{-i} /\ e_{-j})
fn d_signs(rs: &RootSystem) -> Vec<Vec<i8>> {
    let n_roots = rs.count();
    let mut table = vec![vec![0i8; n_roots]; n_roots];
    let wedge = |i: usize| d_root_wedge(rs, i);
    for i in 0..n_roots {
        let (ci, (u, v)) = wedge(i);
        for j in 0..n_roots {
            let Some(s) = rs.sum(i, j) else { continue };
            let (cj, (r, t)) = wedge(j);
            // [u/\v, r/\t] = (v,r) u/\t - (u,r) v/\t + (v,t) r/\u - (u,t) r/\v
            let mut acc: HashMap<(i64, i64), i64> = HashMap::new();
            let mut put = |a: i64, b: i64, c: i64| {
                if a == b {
                    return;
                }
                let (x, y) = sort_pair(a, b);
                let sgn = if (x, y) == (a, b) { 1 } else { -1 };
                *acc.entry((x, y)).or_insert(0) += c * sgn;
            };
            let ip = |a: i64, b: i64| -> i64 { (a == -b) as i64 };
            put(u, t, ip(v, r));
            put(v, t, -ip(u, r));
            put(r, u, ip(v, t));
            put(r, v, -ip(u, t));
            acc.retain(|_, c| *c != 0);
            let (cs, key) = wedge(s);
            let coeff = acc.get(&key).copied().unwrap_or(0);
            // All other wedge components must vanish when alpha+beta is a root.
            assert_eq!(acc.len(), 1, "bracket of summable roots is a single wedge");
            let sign = ci * cj * coeff * cs; // cs = +-1, so dividing equals multiplying
            assert!(sign == 1 || sign == -1);
            table[i][j] = sign as i8;
        }
    }
    table
}

/// Wedge realization of a type D root vector: coefficient and canonically
/// ordered signed index pair, so that the root vector is
/// coef/sqrt(m) * e_a /\ e_b with (a, b) the returned pair (1-based, negative
/// index k meaning e_{-k}).
pub(crate) fn d_root_wedge(rs: &RootSystem, i: usize) -> (i64, (i64, i64)) {
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for (k, &c) in rs.roots[i].iter().enumerate() {
        let idx = (k + 1) as i64;
        if c == 1 {
            plus.push(idx);
        } else if c == -1 {
            minus.push(idx);
        }
    }
    // canonical(a, b, c): coefficient of e_a /\ e_b relative to the
    // canonically ordered pair.
    let canonical = |a: i64, b: i64, c: i64| -> (i64, (i64, i64)) {
        let key = sort_pair(a, b);
        if key == (a, b) {
            (c, key)
        } else {
            (-c, key)
        }
    };
    match (plus.len(), minus.len()) {
        (1, 1) => canonical(plus[0], -minus[0], 1),
        (2, 0) => canonical(plus[0], plus[1], 1),
        (0, 2) => canonical(-minus[0], -minus[1], -1),
        _ => unreachable!("type D roots have two nonzero entries"),
    }
}

fn sort_pair(a: i64, b: i64) -> (i64, i64) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Sign table from a bimultiplicative cocycle on the root lattice (used for E6,
/// valid for any simply-laced system).  With eps defined on simple roots by
/// eps(a_i, a_i) = -1, eps(a_i, a_j) = -1 for adjacent i < j, +1 otherwise,
/// and the positive/negative twist s(alpha), the constants
/// N(alpha, beta) = eps(alpha, beta) s(alpha) s(beta) s(alpha+beta)
/// satisfy the Weyl-basis axioms.
fn cocycle_signs(rs: &RootSystem) -> Vec<Vec<i8>> {
    let n = rs.count();
    let rank = rs.simple.len();
    // Parity matrix b on simple roots.
    let mut b = vec![vec![0u8; rank]; rank];
    for i in 0..rank {
        b[i][i] = 1;
        for j in (i + 1)..rank {
            let cij = rs.cartan_int[rs.simple[i]][rs.simple[j]];
            if cij != 0 {
                b[i][j] = 1;
            }
        }
    }
    let eps = |x: &[i64], y: &[i64]| -> i64 {
        let mut parity = 0i64;
        for i in 0..rank {
            if x[i] == 0 {
                continue;
            }
            for j in 0..rank {
                if y[j] != 0 && b[i][j] == 1 {
                    parity += x[i] * y[j];
                }
            }
        }
        if parity.rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    };
    let s = |i: usize| -> i64 {
        if rs.is_positive[i] {
            1
        } else {
            -1
        }
    };
    let mut table = vec![vec![0i8; n]; n];
    for i in 0..n {
        for j in 0..n {
            if let Some(k) = rs.sum(i, j) {
                let v = eps(&rs.simple_coords[i], &rs.simple_coords[j]) * s(i) * s(j) * s(k);
                table[i][j] = v as i8;
            }
        }
    }
    table
}
