//! Dense exact linear algebra over Q(i, sqrt(p)).
//!
//! Matrices are row-major `Vec<Vec<Scalar>>`.  Elimination pivots on exact
//! nonzero entries and normalizes pivot rows, so every intermediate value stays
//! a true field element; no floating point anywhere.

use crate::scalar::{QuadField, Scalar};

pub type Mat = Vec<Vec<Scalar>>;

pub fn zeros(rows: usize, cols: usize) -> Mat {
    vec![vec![Scalar::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Mat {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Scalar::one();
    }
    m
}

pub fn mat_mul(f: &QuadField, a: &Mat, b: &Mat) -> Mat {
    let rows = a.len();
    let inner = if rows > 0 { a[0].len() } else { 0 };
    let cols = if b.is_empty() { 0 } else { b[0].len() };
    assert_eq!(inner, b.len());
    let mut out = zeros(rows, cols);
    for i in 0..rows {
        for (k, aik) in a[i].iter().enumerate() {
            if aik.is_zero() {
                continue;
            }
            for j in 0..cols {
                if b[k][j].is_zero() {
                    continue;
                }
                let t = f.mul(aik, &b[k][j]);
                out[i][j] = out[i][j].add(&t);
            }
        }
    }
    out
}

pub fn mat_vec(f: &QuadField, a: &Mat, x: &[Scalar]) -> Vec<Scalar> {
    a.iter()
        .map(|row| {
            let mut acc = Scalar::zero();
            for (j, r) in row.iter().enumerate() {
                if !r.is_zero() && !x[j].is_zero() {
                    acc = acc.add(&f.mul(r, &x[j]));
                }
            }
            acc
        })
        .collect()
}

/// Reduced row echelon form computed in place; returns the pivot columns.
pub fn rref(f: &QuadField, m: &mut Mat) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows > 0 { m[0].len() } else { 0 };
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&k| !m[k][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = f.inv(&m[r][c]);
        for j in c..cols {
            m[r][j] = f.mul(&m[r][j], &inv);
        }
        for k in 0..rows {
            if k != r && !m[k][c].is_zero() {
                let factor = m[k][c].clone();
                for j in c..cols {
                    if !m[r][j].is_zero() {
                        let t = f.mul(&factor, &m[r][j]);
                        m[k][j] = m[k][j].sub(&t);
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(f: &QuadField, m: &Mat) -> usize {
    let mut work = m.clone();
    rref(f, &mut work).len()
}

/// Basis of the right kernel {x : m x = 0}.
pub fn kernel(f: &QuadField, m: &Mat) -> Vec<Vec<Scalar>> {
    let cols = if m.is_empty() { 0 } else { m[0].len() };
    let mut work = m.clone();
    let pivots = rref(f, &mut work);
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![Scalar::zero(); cols];
        v[free] = Scalar::one();
        for (ri, &pc) in pivots.iter().enumerate() {
            v[pc] = work[ri][free].neg();
        }
        basis.push(v);
    }
    basis
}

/// Solve m x = rhs; returns None when inconsistent.  Free variables are set to zero.
pub fn solve(f: &QuadField, m: &Mat, rhs: &[Scalar]) -> Option<Vec<Scalar>> {
    let rows = m.len();
    let cols = if rows > 0 { m[0].len() } else { 0 };
    assert_eq!(rows, rhs.len());
    let mut aug: Mat = m
        .iter()
        .zip(rhs)
        .map(|(row, r)| {
            let mut v = row.clone();
            v.push(r.clone());
            v
        })
        .collect();
    let pivots = rref(f, &mut aug);
    if pivots.last() == Some(&cols) {
        return None; // pivot in the rhs column
    }
    let mut x = vec![Scalar::zero(); cols];
    for (ri, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[ri][cols].clone();
    }
    Some(x)
}

pub fn transpose(m: &Mat) -> Mat {
    let rows = m.len();
    let cols = if rows > 0 { m[0].len() } else { 0 };
    let mut t = zeros(cols, rows);
    for (i, row) in m.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            t[j][i] = e.clone();
        }
    }
    t
}

/// Inverse of a square matrix, or None if singular.
pub fn invert(f: &QuadField, m: &Mat) -> Option<Mat> {
    let n = m.len();
    let mut aug = zeros(n, 2 * n);
    for i in 0..n {
        debug_assert_eq!(m[i].len(), n);
        for j in 0..n {
            aug[i][j] = m[i][j].clone();
        }
        aug[i][n + i] = Scalar::one();
    }
    let pivots = rref(f, &mut aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Row space basis (echelon rows, dropped zero rows).
pub fn row_basis(f: &QuadField, m: &Mat) -> Mat {
    let mut work = m.clone();
    let pivots = rref(f, &mut work);
    work.truncate(pivots.len());
    work
}

/// Does `v` lie in the row space of `basis`?
pub fn in_span(f: &QuadField, basis: &Mat, v: &[Scalar]) -> bool {
    let mut work = basis.clone();
    let r0 = rref(f, &mut work).len();
    work.truncate(r0);
    work.push(v.to_vec());
    rank(f, &work) == r0
}

/// Express `v` in terms of the rows of `basis`; None if outside the span.
pub fn coordinates_in(f: &QuadField, basis: &Mat, v: &[Scalar]) -> Option<Vec<Scalar>> {
    // Solve basis^T y = v.
    let rows = basis.len();
    let cols = if rows > 0 { basis[0].len() } else { 0 };
    let mut t = zeros(cols, rows);
    for (i, row) in basis.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            t[j][i] = e.clone();
        }
    }
    solve(f, &t, v)
}

/// Intersection of the row spaces of `a` and `b`.
pub fn intersect_row_spaces(f: &QuadField, a: &Mat, b: &Mat) -> Mat {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let cols = a[0].len();
    // x in both spans: x = ya*a = yb*b.  Kernel of [a^T | -b^T].
    let mut m = zeros(cols, a.len() + b.len());
    for (i, row) in a.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            m[j][i] = e.clone();
        }
    }
    for (i, row) in b.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            m[j][a.len() + i] = e.neg();
        }
    }
    let ker = kernel(f, &m);
    let mut out = Vec::new();
    for k in ker {
        let mut v = vec![Scalar::zero(); cols];
        for (i, row) in a.iter().enumerate() {
            if k[i].is_zero() {
                continue;
            }
            for (j, e) in row.iter().enumerate() {
                if !e.is_zero() {
                    v[j] = v[j].add(&f.mul(&k[i], e));
                }
            }
        }
        out.push(v);
    }
    row_basis(f, &out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ratio};

    fn f() -> QuadField {
        QuadField::new(5)
    }

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn kernel_of_rank_deficient_matrix() {
        let fld = f();
        // rows: (1,2,3), (2,4,6) -> rank 1, kernel dim 2
        let m = vec![vec![s(1), s(2), s(3)], vec![s(2), s(4), s(6)]];
        assert_eq!(rank(&fld, &m), 1);
        let k = kernel(&fld, &m);
        assert_eq!(k.len(), 2);
        for v in &k {
            let img = mat_vec(&fld, &m, v);
            assert!(img.iter().all(|e| e.is_zero()));
        }
    }

    #[test]
    fn solve_with_irrational_entries() {
        let fld = f();
        let r = Scalar::root();
        let m = vec![vec![r.clone(), s(1)], vec![s(1), r.clone()]];
        // det = p - 1 = 4, invertible
        let rhs = vec![s(1), s(0)];
        let x = solve(&fld, &m, &rhs).unwrap();
        let img = mat_vec(&fld, &m, &x);
        assert_eq!(img, rhs);
        // x0 = r/4, x1 = -1/4
        assert_eq!(x[0].c, ratio(1, 4));
        assert_eq!(x[1].a, ratio(-1, 4));
        let _ = rat(0);
    }

    #[test]
    fn intersection_of_planes() {
        let fld = f();
        let a = vec![vec![s(1), s(0), s(0)], vec![s(0), s(1), s(0)]];
        let b = vec![vec![s(0), s(1), s(0)], vec![s(0), s(0), s(1)]];
        let c = intersect_row_spaces(&fld, &a, &b);
        assert_eq!(c.len(), 1);
        assert!(c[0][0].is_zero() && !c[0][1].is_zero() && c[0][2].is_zero());
    }

    #[test]
    fn coordinates_roundtrip() {
        let fld = f();
        let basis = vec![vec![s(1), s(1), s(0)], vec![s(0), s(1), s(1)]];
        let v = vec![s(2), s(5), s(3)];
        let y = coordinates_in(&fld, &basis, &v).unwrap();
        assert_eq!(y, vec![s(2), s(3)]);
        assert!(coordinates_in(&fld, &basis, &[s(1), s(0), s(0)]).is_none());
    }
}
