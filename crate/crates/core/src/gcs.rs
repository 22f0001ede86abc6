//! Generalized complex structures from admissible pairs: the holomorphic
//! space L inside g + g*, the endomorphism J with J|_L = i, the type, B-field
//! transformations and the normal-form test.

use crate::chevalley::{AlgebraElement, WeylBasis};
use crate::forms::AdmissiblePair;
use crate::matrix::{self, Mat};
use crate::real_forms::{real_points, Antiinvolution};
use crate::root_system::set_iter;
use crate::scalar::{QuadField, Scalar};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GcsError {
    #[error("holomorphic space is not isotropic")]
    NotIsotropic,
    #[error("L and its conjugate do not span")]
    NotSpanning,
    #[error("structure invariant failed: {0}")]
    InvariantFailed(String),
    #[error("pair does not have the expected shape: {0}")]
    ShapeMismatch(String),
}

/// A generalized complex structure in exact arithmetic.
pub struct GeneralizedStructure {
    /// Basis of L: rows of length 2N (vector part in flat coordinates, then
    /// covector part in dual flat coordinates), N = dim g.
    pub l_basis: Mat,
    /// Complex matrix of J on g^C + (g^C)*, size 2N x 2N.
    pub j: Mat,
    /// Realification of J: 4N x 4N over the real subfield, 2x2 blocks per
    /// complex entry.
    pub j_real: Mat,
    /// Type: complex codimension of k in g^C.
    pub gcs_type: usize,
}

/// Matrix S of the linear part of sigma on flat coordinates:
/// sigma(x) = S conj(x).
pub fn sigma_flat_matrix(wb: &WeylBasis, sigma: &Antiinvolution) -> Mat {
    let n = wb.flat_dim();
    let mut s = matrix::zeros(n, n);
    for t in 0..n {
        let mut unit = vec![Scalar::zero(); n];
        unit[t] = Scalar::one();
        let e = wb.from_flat(&unit);
        let col = wb.to_flat(&sigma.apply(wb, &e));
        for (r, v) in col.into_iter().enumerate() {
            s[r][t] = v;
        }
    }
    s
}

fn conj_mat(m: &Mat) -> Mat {
    m.iter()
        .map(|r| r.iter().map(Scalar::conj).collect())
        .collect()
}

/// Conjugation on g^C + (g^C)* induced by the real form: acts as
/// S conj on vectors and conj(S)^T conj on covectors.
fn conjugate_element(f: &QuadField, s: &Mat, st_conj: &Mat, v: &[Scalar]) -> Vec<Scalar> {
    let n = s.len();
    let cx: Vec<Scalar> = v[..n].iter().map(Scalar::conj).collect();
    let cxi: Vec<Scalar> = v[n..].iter().map(Scalar::conj).collect();
    let mut out = matrix::mat_vec(f, s, &cx);
    out.extend(matrix::mat_vec(f, st_conj, &cxi));
    out
}

/// Basis of the holomorphic space L = {X + xi : X in k, xi|_k = omega(X,.)},
/// with xi = 0 on a fixed complement of k (completed from the flat basis).
pub fn holomorphic_space(pair: &AdmissiblePair) -> Vec<Vec<Scalar>> {
    let wb = &pair.k.wb;
    let f = &wb.field;
    let n = wb.flat_dim();
    let d = pair.k.dim();
    let k_rows: Mat = pair.k.basis.iter().map(|b| wb.to_flat(b)).collect();
    // Complete to a basis of g^C with standard flat directions.
    let mut full = k_rows.clone();
    let mut current = matrix::rank(f, &full);
    debug_assert_eq!(current, d);
    for t in 0..n {
        if current == n {
            break;
        }
        let mut unit = vec![Scalar::zero(); n];
        unit[t] = Scalar::one();
        full.push(unit);
        let r = matrix::rank(f, &full);
        if r > current {
            current = r;
        } else {
            full.pop();
        }
    }
    let inv = matrix::invert(f, &full).expect("completed basis is invertible");
    // Covector with xi(row_j) = rhs_j: the conditions read full xi = rhs in
    // the dual flat coordinates, so xi = inv rhs (zero on the added rows).
    let mut out = Vec::with_capacity(n);
    for i in 0..d {
        let mut rhs = vec![Scalar::zero(); n];
        for j in 0..d {
            rhs[j] = pair.omega.m[i][j].clone();
        }
        let xi = matrix::mat_vec(f, &inv, &rhs);
        let mut row = k_rows[i].clone();
        row.extend(xi);
        out.push(row);
    }
    // Annihilator of k: pure covectors.
    let ann = matrix::kernel(f, &k_rows);
    for xi in ann {
        let mut row = vec![Scalar::zero(); n];
        row.extend(xi);
        out.push(row);
    }
    debug_assert_eq!(out.len(), n);
    out
}

fn gcan(f: &QuadField, n: usize, u: &[Scalar], v: &[Scalar]) -> Scalar {
    let mut acc = Scalar::zero();
    for t in 0..n {
        if !u[n + t].is_zero() && !v[t].is_zero() {
            acc = acc.add(&f.mul(&u[n + t], &v[t]));
        }
        if !v[n + t].is_zero() && !u[t].is_zero() {
            acc = acc.add(&f.mul(&v[n + t], &u[t]));
        }
    }
    acc.scale(&crate::scalar::ratio(1, 2))
}

/// Build J from a verified pair: J = i on L, J = -i on the conjugate of L.
/// All invariants (isotropy, spanning, J^2 = -Id, skewness with respect to
/// the canonical pairing, reality) are checked exactly.
pub fn build_structure(pair: &AdmissiblePair) -> Result<GeneralizedStructure, GcsError> {
    let wb = &pair.k.wb;
    let f = &wb.field;
    let n = wb.flat_dim();
    let l = holomorphic_space(pair);
    for (i, u) in l.iter().enumerate() {
        for v in l.iter().skip(i) {
            if !gcan(f, n, u, v).is_zero() {
                return Err(GcsError::NotIsotropic);
            }
        }
    }
    let s = sigma_flat_matrix(wb, &pair.sigma);
    let st_conj = matrix::transpose(&conj_mat(&s));
    let l_conj: Mat = l
        .iter()
        .map(|v| conjugate_element(f, &s, &st_conj, v))
        .collect();
    let mut p = l.clone();
    p.extend(l_conj.iter().cloned());
    if matrix::rank(f, &p) != 2 * n {
        return Err(GcsError::NotSpanning);
    }
    // J P^T = P^T D with D = diag(i, ..., -i, ...).
    let pt = matrix::transpose(&p);
    let pt_inv = matrix::invert(f, &pt).ok_or(GcsError::NotSpanning)?;
    let mut ptd = matrix::zeros(2 * n, 2 * n);
    for r in 0..(2 * n) {
        for c in 0..(2 * n) {
            if pt[r][c].is_zero() {
                continue;
            }
            let ev = if c < n {
                Scalar::i()
            } else {
                Scalar::i().neg()
            };
            ptd[r][c] = f.mul(&pt[r][c], &ev);
        }
    }
    let j = matrix::mat_mul(f, &ptd, &pt_inv);
    // J^2 = -Id.
    let j2 = matrix::mat_mul(f, &j, &j);
    for r in 0..(2 * n) {
        for c in 0..(2 * n) {
            let want = if r == c {
                Scalar::one().neg()
            } else {
                Scalar::zero()
            };
            if j2[r][c] != want {
                return Err(GcsError::InvariantFailed("J^2 != -Id".into()));
            }
        }
    }
    // Skewness: gcan(Jx, y) + gcan(x, Jy) = 0, i.e. J^T G + G J = 0 where
    // G swaps the vector and covector blocks (the 1/2 factor cancels).
    for r in 0..(2 * n) {
        for c in 0..(2 * n) {
            // (J^T G)[r][c] = J[(c + n) mod 2n][r]; (G J)[r][c] = J[(r + n) mod 2n][c].
            let a = &j[(c + n) % (2 * n)][r];
            let b = &j[(r + n) % (2 * n)][c];
            if !a.add(b).is_zero() {
                return Err(GcsError::InvariantFailed("J is not skew".into()));
            }
        }
    }
    // Reality: J commutes with the conjugation, J M = M conj(J) for the
    // block matrix M of the linear part of the conjugation.
    let mut m = matrix::zeros(2 * n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            m[r][c] = s[r][c].clone();
            m[n + r][n + c] = st_conj[r][c].clone();
        }
    }
    let lhs = matrix::mat_mul(f, &j, &m);
    let rhs = matrix::mat_mul(f, &m, &conj_mat(&j));
    if lhs != rhs {
        return Err(GcsError::InvariantFailed("J is not real".into()));
    }
    // Realified matrix: block per complex entry.
    let mut j_real = matrix::zeros(4 * n, 4 * n);
    for r in 0..(2 * n) {
        for c in 0..(2 * n) {
            let z = &j[r][c];
            if z.is_zero() {
                continue;
            }
            let re = z.real_part();
            let im = z.imag_part();
            j_real[2 * r][2 * c] = re.clone();
            j_real[2 * r][2 * c + 1] = im.neg();
            j_real[2 * r + 1][2 * c] = im;
            j_real[2 * r + 1][2 * c + 1] = re;
        }
    }
    Ok(GeneralizedStructure {
        l_basis: l,
        j,
        j_real,
        gcs_type: n - pair.k.dim(),
    })
}

/// Type of the structure: complex codimension of k.
pub fn gcs_type(pair: &AdmissiblePair) -> usize {
    pair.k.wb.flat_dim() - pair.k.dim()
}

/// Type via the root data formula (rank - dim l + |R|) / 2, valid for pairs
/// whose root part is a positive system.
pub fn type_from_invariants(wb: &WeylBasis, l_dim: usize) -> usize {
    (wb.rs.rank - l_dim + wb.rs.count()) / 2
}

/// B-field transformation by the exact differential of a covector on g^C
/// (flat dual coordinates): the new pair is (k, omega + d xi|_k).
pub fn b_field_transform(
    pair: &AdmissiblePair,
    xi: &[Scalar],
) -> Result<AdmissiblePair, crate::forms::FormsError> {
    let wb = &pair.k.wb;
    let f = &wb.field;
    let d = pair.k.dim();
    let mut w = pair.omega.clone();
    for i in 0..d {
        for j in (i + 1)..d {
            let br = wb.bracket(&pair.k.basis[i], &pair.k.basis[j]);
            let flat = wb.to_flat(&br);
            let mut acc = Scalar::zero();
            for (t, c) in flat.iter().enumerate() {
                if !c.is_zero() && !xi[t].is_zero() {
                    acc = acc.add(&f.mul(c, &xi[t]));
                }
            }
            // B(X, Y) = -xi([X, Y]).
            w.add_at(i, j, &acc.neg());
        }
    }
    AdmissiblePair::verify(pair.k.clone(), w, pair.sigma.clone())
}

/// Extract the per-root coefficients mu of a pair whose form has the shape
/// w0 + sum mu_a a ^ w_a + pair terms: checks the mixed Cartan block is
/// proportional to the root covectors and returns mu indexed by root.
pub fn extract_mu(pair: &AdmissiblePair) -> Result<Vec<Scalar>, GcsError> {
    let k = &pair.k;
    let wb = &k.wb;
    let f = &wb.field;
    let c = k.cartan_dim();
    let mut mu = vec![Scalar::zero(); wb.rs.count()];
    for (p, &alpha) in k.r0_list.iter().enumerate() {
        let mut found: Option<Scalar> = None;
        for a in 0..c {
            let av = k.root_on_cartan(alpha, a);
            let entry = &pair.omega.m[a][c + p];
            match &found {
                None if !av.is_zero() => {
                    found = Some(f.div(entry, &av));
                }
                _ => {}
            }
        }
        let m = found.ok_or_else(|| {
            GcsError::ShapeMismatch(format!("root {alpha} vanishes on the Cartan part"))
        })?;
        for a in 0..c {
            let av = k.root_on_cartan(alpha, a);
            if pair.omega.m[a][c + p] != f.mul(&m, &av) {
                return Err(GcsError::ShapeMismatch(
                    "mixed block is not proportional to the root covectors".into(),
                ));
            }
        }
        mu[alpha] = m;
    }
    Ok(mu)
}

/// The normalizing covector xi = sum mu_a w_a - sum conj(mu_a) w_{-a} over
/// the root part of k, in flat dual coordinates.  Adding -xi([.,.]) to the
/// form cancels every mu term and leaves the Cartan block untouched.
pub fn b_field_covector(pair: &AdmissiblePair) -> Result<Vec<Scalar>, GcsError> {
    let wb = &pair.k.wb;
    let rank = wb.rs.rank;
    let mu = extract_mu(pair)?;
    let mut xi = vec![Scalar::zero(); wb.flat_dim()];
    for alpha in set_iter(pair.k.r0) {
        if mu[alpha].is_zero() {
            continue;
        }
        xi[rank + alpha] = xi[rank + alpha].add(&mu[alpha]);
        let neg = wb.rs.neg[alpha];
        xi[rank + neg] = xi[rank + neg].sub(&mu[alpha].conj());
    }
    Ok(xi)
}

/// Is the covector fixed by the conjugation induced by sigma (real on g)?
pub fn covector_is_real(wb: &WeylBasis, sigma: &Antiinvolution, xi: &[Scalar]) -> bool {
    let f = &wb.field;
    let s = sigma_flat_matrix(wb, sigma);
    let st_conj = matrix::transpose(&conj_mat(&s));
    let cxi: Vec<Scalar> = xi.iter().map(Scalar::conj).collect();
    matrix::mat_vec(f, &st_conj, &cxi) == xi
}

/// Normal-form test for pairs of the positive-system shape: true iff all mu
/// coefficients vanish and the Cartan form contracts to zero on the chosen
/// complement of l^C in h0 (the Killing-orthogonal one).
pub fn is_normal_form(pair: &AdmissiblePair) -> Result<bool, GcsError> {
    let k = &pair.k;
    let wb = &k.wb;
    let f = &wb.field;
    let c = k.cartan_dim();
    let mu = extract_mu(pair)?;
    if mu.iter().any(|m| !m.is_zero()) {
        return Ok(false);
    }
    // l = real points of the Cartan part.
    let h0_elems: Vec<AlgebraElement> = k.basis[..c].to_vec();
    let l = real_points(wb, &pair.sigma, &h0_elems);
    // Complement coordinates: vectors x in h0 coordinates with
    // killing(x, l_j) = 0 for all j.
    if l.is_empty() {
        // a = h0: require the whole Cartan block to vanish.
        for a in 0..c {
            for b in 0..c {
                if !pair.omega.m[a][b].is_zero() {
                    return Ok(false);
                }
            }
        }
        return Ok(true);
    }
    let mut m = matrix::zeros(l.len(), c);
    for (j, lj) in l.iter().enumerate() {
        for a in 0..c {
            m[j][a] = wb.killing(&h0_elems[a], lj);
        }
    }
    for x in matrix::kernel(f, &m) {
        for b in 0..c {
            let mut acc = Scalar::zero();
            for (a, xa) in x.iter().enumerate() {
                if !xa.is_zero() && !pair.omega.m[a][b].is_zero() {
                    acc = acc.add(&f.mul(xa, &pair.omega.m[a][b]));
                }
            }
            if !acc.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Prop-style complex structure conditions: k + conj(k) = g^C and
/// k cap conj(k) = l^C for l = k cap g.
pub fn check_complex_structure_conditions(
    k: &crate::forms::RegularSubalgebra,
    sigma: &Antiinvolution,
) -> bool {
    let wb = &k.wb;
    let f = &wb.field;
    let n = wb.flat_dim();
    let rows: Mat = k.basis.iter().map(|b| wb.to_flat(b)).collect();
    let conj_rows: Mat = k
        .basis
        .iter()
        .map(|b| wb.to_flat(&sigma.apply(wb, b)))
        .collect();
    let mut all = rows.clone();
    all.extend(conj_rows);
    let union = matrix::rank(f, &all);
    if union != n {
        return false;
    }
    let inter = 2 * k.dim() - union;
    let l = real_points(wb, sigma, &k.basis);
    inter == l.len()
}
