//! Exact linear algebra over the rationals.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::core::{dot, is_zero_vec, sub_vec, SymMatrix, Vector};
use crate::scalar::{to_f64, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inertia {
    pub n_plus: usize,
    pub n_minus: usize,
    pub n_zero: usize,
}

impl Inertia {
    pub fn is_psd(&self) -> bool {
        self.n_minus == 0
    }

    pub fn is_nsd(&self) -> bool {
        self.n_plus == 0
    }

    pub fn is_pd(&self) -> bool {
        self.n_minus == 0 && self.n_zero == 0
    }

    pub fn is_nd(&self) -> bool {
        self.n_plus == 0 && self.n_zero == 0
    }

    pub fn is_semidefinite(&self) -> bool {
        self.is_psd() || self.is_nsd()
    }

    pub fn is_indefinite(&self) -> bool {
        self.n_plus > 0 && self.n_minus > 0
    }
}

/// Symmetric congruence TᵀST = diag(d), T nonsingular.
#[derive(Clone, Debug)]
pub struct Ldl {
    pub d: Vec<Rat>,
    /// Columns of T.
    pub t: Vec<Vector>,
}

impl Ldl {
    pub fn inertia(&self) -> Inertia {
        let mut i = Inertia { n_plus: 0, n_minus: 0, n_zero: 0 };
        for x in &self.d {
            if x.is_positive() {
                i.n_plus += 1;
            } else if x.is_negative() {
                i.n_minus += 1;
            } else {
                i.n_zero += 1;
            }
        }
        i
    }

    fn cols_where(&self, pred: impl Fn(&Rat) -> bool) -> Vec<Vector> {
        self.d.iter().zip(&self.t).filter(|(d, _)| pred(d)).map(|(_, c)| c.clone()).collect()
    }

    /// Vectors v with vᵀSv < 0, pairwise S-orthogonal.
    pub fn negative_dirs(&self) -> Vec<Vector> {
        self.cols_where(|d| d.is_negative())
    }

    pub fn positive_dirs(&self) -> Vec<Vector> {
        self.cols_where(|d| d.is_positive())
    }

    /// Basis of ker S.
    pub fn kernel(&self) -> Vec<Vector> {
        self.cols_where(|d| d.is_zero())
    }
}

pub fn ldl(s: &SymMatrix) -> Ldl {
    let n = s.n();
    let mut w = s.rows();
    let mut t: Vec<Vector> = (0..n).map(|i| crate::core::unit(n, i)).collect();
    let mut k = 0;
    while k < n {
        let mut piv = None;
        let mut best = 0.0f64;
        for p in k..n {
            if !w[p][p].is_zero() {
                let m = to_f64(&w[p][p]).abs();
                if piv.is_none() || m > best {
                    piv = Some(p);
                    best = m;
                }
            }
        }
        let p = match piv {
            Some(p) => p,
            None => {
                let pair = (k..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).find(|&(i, j)| !w[i][j].is_zero());
                match pair {
                    None => break,
                    Some((i, j)) => {
                        hyperbolic_split(&mut w, &mut t, i, j);
                        continue;
                    }
                }
            }
        };
        if p != k {
            w.swap(p, k);
            for row in w.iter_mut() {
                row.swap(p, k);
            }
            t.swap(p, k);
        }
        let pivot = w[k][k].clone();
        for j in (k + 1)..n {
            if w[k][j].is_zero() {
                continue;
            }
            let f = &w[k][j] / &pivot;
            let tk = t[k].clone();
            for (x, y) in t[j].iter_mut().zip(&tk) {
                *x -= &f * y;
            }
            let rk = w[k].clone();
            for c in 0..n {
                w[j][c] = &w[j][c] - &f * &rk[c];
            }
            for r in 0..n {
                let v = &w[r][j] - &f * &w[r][k];
                w[r][j] = v;
            }
        }
        k += 1;
    }
    Ldl { d: (0..n).map(|i| w[i][i].clone()).collect(), t }
}

// (x, y) ↦ (x + y, x − y) on columns i, j; with zero diagonals this exposes ±2·w_ij.
fn hyperbolic_split(w: &mut [Vec<Rat>], t: &mut [Vector], i: usize, j: usize) {
    let n = w.len();
    let (wii, wjj, wij) = (w[i][i].clone(), w[j][j].clone(), w[i][j].clone());
    for r in 0..n {
        if r == i || r == j {
            continue;
        }
        let (a, b) = (w[r][i].clone(), w[r][j].clone());
        w[r][i] = &a + &b;
        w[r][j] = &a - &b;
        w[i][r] = w[r][i].clone();
        w[j][r] = w[r][j].clone();
    }
    w[i][i] = &wii + &wij + &wij + &wjj;
    w[j][j] = &wii - &wij - &wij + &wjj;
    w[i][j] = &wii - &wjj;
    w[j][i] = w[i][j].clone();
    let (ci, cj) = (t[i].clone(), t[j].clone());
    t[i] = ci.iter().zip(&cj).map(|(a, b)| a + b).collect();
    t[j] = ci.iter().zip(&cj).map(|(a, b)| a - b).collect();
}

pub fn inertia(s: &SymMatrix) -> Inertia {
    ldl(s).inertia()
}

pub fn is_psd(s: &SymMatrix) -> bool {
    inertia(s).is_psd()
}

pub fn is_pd(s: &SymMatrix) -> bool {
    inertia(s).is_pd()
}

/// Reduced row echelon form; returns the pivot columns.
pub fn rref(m: &mut [Vec<Rat>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = Rat::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pr = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vector], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// Basis of {x : Mx = 0} for a general rows×ncols matrix.
pub fn kernel_of_rows(rows: &[Vector], ncols: usize) -> Vec<Vector> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rat::zero(); ncols];
        v[free] = Rat::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[r][free].clone();
        }
        out.push(v);
    }
    out
}

pub fn kernel_basis(m: &SymMatrix) -> Vec<Vector> {
    kernel_of_rows(&m.rows(), m.n())
}

pub fn intersect_kernels(a: &SymMatrix, b: &SymMatrix) -> Vec<Vector> {
    let mut rows = a.rows();
    rows.extend(b.rows());
    kernel_of_rows(&rows, a.n())
}

/// Basis of the orthogonal complement of span(basis) in R^n.
pub fn orth_complement(basis: &[Vector], n: usize) -> Vec<Vector> {
    kernel_of_rows(basis, n)
}

/// The Gram-type matrix (⟨w_i, S w_j⟩).
pub fn restrict_form(s: &SymMatrix, w: &[Vector]) -> SymMatrix {
    s.congruence(w)
}

/// Some solution of Mx = v for a general matrix, free variables set to zero.
pub fn solve_rows(rows: &[Vector], ncols: usize, v: &[Rat]) -> Option<Vector> {
    let mut m: Vec<Vector> = rows
        .iter()
        .zip(v)
        .map(|(r, x)| {
            let mut r = r.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![Rat::zero(); ncols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = m[r][ncols].clone();
    }
    Some(x)
}

/// Component of x orthogonal to span(basis).
pub fn project_out(x: &[Rat], basis: &[Vector]) -> Vector {
    if basis.is_empty() {
        return x.to_vec();
    }
    let k = basis.len();
    let gram: Vec<Vector> = (0..k).map(|i| (0..k).map(|j| dot(&basis[i], &basis[j])).collect()).collect();
    let rhs: Vector = basis.iter().map(|b| dot(b, x)).collect();
    let c = solve_rows(&gram, k, &rhs).expect("independent basis has nonsingular Gram matrix");
    let mut out = x.to_vec();
    for (ci, b) in c.iter().zip(basis) {
        for (o, bi) in out.iter_mut().zip(b) {
            *o -= ci * bi;
        }
    }
    out
}

/// Minimum-norm solution of Sx = v, or None when v ∉ range(S).
pub fn solve_linear(s: &SymMatrix, v: &[Rat]) -> Option<Vector> {
    let x = solve_rows(&s.rows(), s.n(), v)?;
    Some(project_out(&x, &kernel_basis(s)))
}

pub fn in_range(s: &SymMatrix, v: &[Rat]) -> bool {
    solve_rows(&s.rows(), s.n(), v).is_some()
}

/// Infimum of xᵀMx + ⟨l,x⟩ + c over R^n.
#[derive(Clone, Debug, PartialEq)]
pub enum QuadInf {
    MinusInfinity,
    Finite { value: Rat, argmin: Vector },
}

pub fn quad_inf(m: &SymMatrix, l: &[Rat], c: &Rat) -> QuadInf {
    if !is_psd(m) {
        return QuadInf::MinusInfinity;
    }
    let two = Rat::from_integer(2.into());
    let neg_l: Vector = l.iter().map(|x| -x).collect();
    let m2 = m.scale(&two);
    match solve_linear(&m2, &neg_l) {
        None => QuadInf::MinusInfinity,
        Some(y) => {
            let value = c + dot(l, &y) / &two;
            QuadInf::Finite { value, argmin: y }
        }
    }
}

/// Vectors with nonzero component orthogonal to a subspace: checks v ∉ span(basis).
pub fn in_span(v: &[Rat], basis: &[Vector]) -> bool {
    is_zero_vec(&project_out(v, basis))
}

pub fn residual(s: &SymMatrix, x: &[Rat], v: &[Rat]) -> Vector {
    sub_vec(&s.mul_vec(x), v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ri, rq};

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| ri(x)).collect()
    }

    #[test]
    fn inertia_small_cases() {
        assert_eq!(inertia(&SymMatrix::from_ints(&[&[1, 0], &[0, -1]])), Inertia { n_plus: 1, n_minus: 1, n_zero: 0 });
        assert_eq!(inertia(&SymMatrix::from_ints(&[&[0, 2], &[2, 0]])), Inertia { n_plus: 1, n_minus: 1, n_zero: 0 });
        assert_eq!(inertia(&SymMatrix::from_ints(&[&[1, 1], &[1, 1]])), Inertia { n_plus: 1, n_minus: 0, n_zero: 1 });
        assert_eq!(inertia(&SymMatrix::zeros(3)).n_zero, 3);
    }

    #[test]
    fn ldl_is_a_congruence() {
        let s = SymMatrix::from_ints(&[&[0, 1, 2], &[1, 0, 3], &[2, 3, 0]]);
        let f = ldl(&s);
        let dmat = s.congruence(&f.t);
        assert_eq!(dmat, SymMatrix::diag(&f.d));
        assert_eq!(f.inertia().n_zero, 0);
    }

    #[test]
    fn kernels() {
        assert_eq!(kernel_basis(&SymMatrix::from_ints(&[&[1, 0], &[0, 0]])), vec![v(&[0, 1])]);
        assert!(kernel_basis(&SymMatrix::from_ints(&[&[1, 0, 0], &[0, 0, 0], &[0, 0, -1]])).len() == 1);
        assert_eq!(kernel_basis(&SymMatrix::zeros(2)).len(), 2);
        let a = SymMatrix::from_ints(&[&[1, 0], &[0, 0]]);
        assert_eq!(intersect_kernels(&a, &SymMatrix::zeros(2)), vec![v(&[0, 1])]);
        let op = SymMatrix::from_ints(&[&[0, 1], &[1, 0]]);
        assert!(intersect_kernels(&op, &SymMatrix::zeros(2)).is_empty());
    }

    #[test]
    fn min_norm_solve() {
        let s = SymMatrix::from_ints(&[&[1, 0], &[0, 0]]);
        assert_eq!(solve_linear(&s, &v(&[1, 0])), Some(v(&[1, 0])));
        assert_eq!(solve_linear(&s, &v(&[0, 1])), None);
        let e = SymMatrix::from_ints(&[&[1, 1], &[1, 1]]);
        assert_eq!(solve_linear(&e, &v(&[-1, -1])), Some(vec![rq(-1, 2), rq(-1, 2)]));
    }

    #[test]
    fn restriction() {
        let s = SymMatrix::from_ints(&[&[1, 0], &[0, -1]]);
        assert_eq!(restrict_form(&s, &[v(&[1, 0])]), SymMatrix::from_ints(&[&[1]]));
        assert_eq!(restrict_form(&s, &[v(&[0, 1])]), SymMatrix::from_ints(&[&[-1]]));
    }

    #[test]
    fn quadratic_infimum() {
        // (x1 + x2)^2 + x1 + x2 has infimum -1/4.
        let e = SymMatrix::from_ints(&[&[1, 1], &[1, 1]]);
        match quad_inf(&e, &v(&[1, 1]), &ri(0)) {
            QuadInf::Finite { value, .. } => assert_eq!(value, rq(-1, 4)),
            other => panic!("{other:?}"),
        }
        assert_eq!(quad_inf(&e, &v(&[1, 0]), &ri(0)), QuadInf::MinusInfinity);
    }
}
