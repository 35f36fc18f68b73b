//! Vectors, symmetric matrices, quadratic functions and pairs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{QrError, Result};
use crate::scalar::{common_denom, to_f64, Rat};

pub type Vector = Vec<Rat>;
pub type PlanePoint = [Rat; 2];

pub fn zeros(n: usize) -> Vector {
    vec![Rat::zero(); n]
}

pub fn unit(n: usize, i: usize) -> Vector {
    let mut v = zeros(n);
    v[i] = Rat::one();
    v
}

pub fn dot(u: &[Rat], v: &[Rat]) -> Rat {
    u.iter().zip(v).fold(Rat::zero(), |acc, (a, b)| acc + a * b)
}

pub fn is_zero_vec(v: &[Rat]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn add_vec(u: &[Rat], v: &[Rat]) -> Vector {
    u.iter().zip(v).map(|(a, b)| a + b).collect()
}

pub fn sub_vec(u: &[Rat], v: &[Rat]) -> Vector {
    u.iter().zip(v).map(|(a, b)| a - b).collect()
}

pub fn scale_vec(t: &Rat, v: &[Rat]) -> Vector {
    v.iter().map(|x| t * x).collect()
}

pub fn vec_f64(v: &[Rat]) -> Vec<f64> {
    v.iter().map(to_f64).collect()
}

/// Integer multiple of `v` with coprime entries, same orientation.
pub fn primitive_int(v: &[Rat]) -> Vec<BigInt> {
    let den = common_denom(v);
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rat::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

pub fn primitive_vec(v: &[Rat]) -> Vector {
    primitive_int(v).into_iter().map(Rat::from_integer).collect()
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        Err(QrError::DimensionMismatch { expected, got })
    } else {
        Ok(())
    }
}

/// Dense symmetric matrix over the rationals, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<Rat>,
}

impl SymMatrix {
    pub fn from_rows(name: &str, rows: Vec<Vec<Rat>>) -> Result<Self> {
        let n = rows.len();
        for r in &rows {
            check_dim(n, r.len())?;
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if rows[i][j] != rows[j][i] {
                    return Err(QrError::Asymmetric { name: name.to_string(), i, j });
                }
            }
        }
        Ok(SymMatrix { n, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let rows = rows.iter().map(|r| r.iter().map(|&x| crate::scalar::ri(x)).collect()).collect();
        Self::from_rows("M", rows).expect("symmetric integer matrix")
    }

    /// Builds from any square row data, symmetrizing by copying the upper triangle.
    pub fn from_upper(n: usize, f: impl Fn(usize, usize) -> Rat) -> Self {
        let mut data = vec![Rat::zero(); n * n];
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                data[j * n + i] = v.clone();
                data[i * n + j] = v;
            }
        }
        SymMatrix { n, data }
    }

    pub fn zeros(n: usize) -> Self {
        SymMatrix { n, data: vec![Rat::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_upper(n, |i, j| if i == j { Rat::one() } else { Rat::zero() })
    }

    pub fn diag(d: &[Rat]) -> Self {
        Self::from_upper(d.len(), |i, j| if i == j { d[i].clone() } else { Rat::zero() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<Rat>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vector {
        (0..self.n).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn form(&self, u: &[Rat], v: &[Rat]) -> Rat {
        dot(u, &self.mul_vec(v))
    }

    pub fn scale(&self, t: &Rat) -> SymMatrix {
        SymMatrix { n: self.n, data: self.data.iter().map(|x| t * x).collect() }
    }

    pub fn add(&self, o: &SymMatrix) -> SymMatrix {
        SymMatrix { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }

    /// `s·self + t·o`.
    pub fn comb(&self, s: &Rat, o: &SymMatrix, t: &Rat) -> SymMatrix {
        SymMatrix {
            n: self.n,
            data: self.data.iter().zip(&o.data).map(|(a, b)| s * a + t * b).collect(),
        }
    }

    /// `Cᵀ·self·C` for the matrix whose columns are `cols`.
    pub fn congruence(&self, cols: &[Vector]) -> SymMatrix {
        let sc: Vec<Vector> = cols.iter().map(|c| self.mul_vec(c)).collect();
        SymMatrix::from_upper(cols.len(), |i, j| dot(&cols[i], &sc[j]))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| to_f64(x).abs()).fold(0.0, f64::max)
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| vec_f64(self.row(i))).collect()
    }
}

/// q(x) = ⟨Ax,x⟩ + ⟨a,x⟩ + k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticFunction {
    pub a_mat: SymMatrix,
    pub lin: Vector,
    pub k: Rat,
}

impl QuadraticFunction {
    pub fn new(a_mat: SymMatrix, lin: Vector, k: Rat) -> Result<Self> {
        check_dim(a_mat.n(), lin.len())?;
        Ok(QuadraticFunction { a_mat, lin, k })
    }

    pub fn zero(n: usize) -> Self {
        QuadraticFunction { a_mat: SymMatrix::zeros(n), lin: zeros(n), k: Rat::zero() }
    }

    pub fn n(&self) -> usize {
        self.a_mat.n()
    }

    pub fn eval(&self, x: &[Rat]) -> Result<Rat> {
        check_dim(self.n(), x.len())?;
        Ok(self.a_mat.form(x, x) + dot(&self.lin, x) + &self.k)
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        let n = self.n();
        let mut s = to_f64(&self.k);
        for i in 0..n {
            let mut row = 0.0;
            for j in 0..n {
                row += to_f64(self.a_mat.get(i, j)) * x[j];
            }
            s += x[i] * row + to_f64(&self.lin[i]) * x[i];
        }
        s
    }

    /// 2Ax + a.
    pub fn gradient(&self, x: &[Rat]) -> Result<Vector> {
        check_dim(self.n(), x.len())?;
        let ax = self.a_mat.mul_vec(x);
        Ok(ax.iter().zip(&self.lin).map(|(v, a)| v + v + a).collect())
    }

    pub fn is_identically_zero(&self) -> bool {
        self.a_mat.is_zero() && is_zero_vec(&self.lin) && self.k.is_zero()
    }

    pub fn neg(&self) -> QuadraticFunction {
        let m1 = -Rat::one();
        QuadraticFunction { a_mat: self.a_mat.scale(&m1), lin: scale_vec(&m1, &self.lin), k: -&self.k }
    }

    /// `s·self + t·o`.
    pub fn comb(&self, s: &Rat, o: &QuadraticFunction, t: &Rat) -> QuadraticFunction {
        QuadraticFunction {
            a_mat: self.a_mat.comb(s, &o.a_mat, t),
            lin: self.lin.iter().zip(&o.lin).map(|(a, b)| s * a + t * b).collect(),
            k: s * &self.k + t * &o.k,
        }
    }
}

/// The map x ↦ (f(x), g(x)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticPair {
    pub f: QuadraticFunction,
    pub g: QuadraticFunction,
}

impl QuadraticPair {
    pub fn new(f: QuadraticFunction, g: QuadraticFunction) -> Result<Self> {
        check_dim(f.n(), g.n())?;
        Ok(QuadraticPair { f, g })
    }

    pub fn homogeneous(a: SymMatrix, b: SymMatrix) -> Result<Self> {
        let n = a.n();
        Self::new(
            QuadraticFunction::new(a, zeros(n), Rat::zero())?,
            QuadraticFunction::new(b, zeros(n), Rat::zero())?,
        )
    }

    pub fn n(&self) -> usize {
        self.f.n()
    }

    pub fn a(&self) -> &SymMatrix {
        &self.f.a_mat
    }

    pub fn b(&self) -> &SymMatrix {
        &self.g.a_mat
    }

    /// The pair with linear parts and constants dropped.
    pub fn hom_only(&self) -> QuadraticPair {
        QuadraticPair::homogeneous(self.a().clone(), self.b().clone()).expect("same dimension")
    }

    pub fn scale(&self) -> f64 {
        let mut s: f64 = 1.0;
        for q in [&self.f, &self.g] {
            s = s.max(q.a_mat.max_abs());
            for x in &q.lin {
                s = s.max(to_f64(x).abs());
            }
            s = s.max(to_f64(&q.k).abs());
        }
        s
    }
}

pub fn eval_pair(pair: &QuadraticPair, x: &[Rat]) -> Result<PlanePoint> {
    Ok([pair.f.eval(x)?, pair.g.eval(x)?])
}

pub fn eval_pair_f64(pair: &QuadraticPair, x: &[f64]) -> [f64; 2] {
    [pair.f.eval_f64(x), pair.g.eval_f64(x)]
}

pub fn hom_part(pair: &QuadraticPair, u: &[Rat]) -> Result<PlanePoint> {
    check_dim(pair.n(), u.len())?;
    Ok([pair.a().form(u, u), pair.b().form(u, u)])
}

pub fn lin_part(pair: &QuadraticPair, u: &[Rat]) -> Result<PlanePoint> {
    check_dim(pair.n(), u.len())?;
    Ok([dot(&pair.f.lin, u), dot(&pair.g.lin, u)])
}

/// z_{u,v} = (⟨Au,v⟩, ⟨Bu,v⟩).
pub fn cross_term(pair: &QuadraticPair, u: &[Rat], v: &[Rat]) -> Result<PlanePoint> {
    check_dim(pair.n(), u.len())?;
    check_dim(pair.n(), v.len())?;
    Ok([pair.a().form(u, v), pair.b().form(u, v)])
}

pub fn gradient(q: &QuadraticFunction, x: &[Rat]) -> Result<Vector> {
    q.gradient(x)
}

pub fn perp_pt(u: &PlanePoint) -> PlanePoint {
    [-&u[1], u[0].clone()]
}

pub fn dot2(u: &PlanePoint, v: &PlanePoint) -> Rat {
    &u[0] * &v[0] + &u[1] * &v[1]
}

/// ⟨u⊥, v⟩ = u1·v2 − u2·v1.
pub fn cross2(u: &PlanePoint, v: &PlanePoint) -> Rat {
    &u[0] * &v[1] - &u[1] * &v[0]
}

/// True iff {u, v} is linearly independent.
pub fn li2(u: &PlanePoint, v: &PlanePoint) -> bool {
    !cross2(u, v).is_zero()
}

pub fn is_zero_pt(p: &PlanePoint) -> bool {
    p[0].is_zero() && p[1].is_zero()
}

pub fn pt_f64(p: &PlanePoint) -> [f64; 2] {
    [to_f64(&p[0]), to_f64(&p[1])]
}

/// A nonzero plane direction stored as coprime integers. The orientation is
/// kept: d and −d are different rays.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlaneDirection {
    d1: BigInt,
    d2: BigInt,
}

impl PlaneDirection {
    pub fn new(d1: Rat, d2: Rat) -> Result<Self> {
        if d1.is_zero() && d2.is_zero() {
            return Err(QrError::ZeroDirection);
        }
        let mut p = primitive_int(&[d1, d2]).into_iter();
        Ok(PlaneDirection { d1: p.next().unwrap(), d2: p.next().unwrap() })
    }

    pub fn from_ints(d1: i64, d2: i64) -> Result<Self> {
        Self::new(crate::scalar::ri(d1), crate::scalar::ri(d2))
    }

    pub fn from_point(p: &PlanePoint) -> Result<Self> {
        Self::new(p[0].clone(), p[1].clone())
    }

    pub fn d1(&self) -> &BigInt {
        &self.d1
    }

    pub fn d2(&self) -> &BigInt {
        &self.d2
    }

    pub fn as_point(&self) -> PlanePoint {
        [Rat::from_integer(self.d1.clone()), Rat::from_integer(self.d2.clone())]
    }

    pub fn as_f64(&self) -> [f64; 2] {
        pt_f64(&self.as_point())
    }

    pub fn perp(&self) -> PlaneDirection {
        PlaneDirection { d1: -&self.d2, d2: self.d1.clone() }
    }

    pub fn neg(&self) -> PlaneDirection {
        PlaneDirection { d1: -&self.d1, d2: -&self.d2 }
    }

    /// Representative of the line R·d with lexicographically positive sign.
    pub fn line_canonical(&self) -> PlaneDirection {
        if self.d1.is_negative() || (self.d1.is_zero() && self.d2.is_negative()) {
            self.neg()
        } else {
            self.clone()
        }
    }
}

impl std::fmt::Display for PlaneDirection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.d1, self.d2)
    }
}

impl serde::Serialize for PlaneDirection {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn perp(d: &PlaneDirection) -> PlaneDirection {
    d.perp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ri, rq};

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| ri(x)).collect()
    }

    #[test]
    fn asymmetric_matrix_rejected() {
        let r = SymMatrix::from_rows("A", vec![v(&[1, 2]), v(&[3, 4])]);
        assert!(matches!(r, Err(QrError::Asymmetric { .. })));
    }

    #[test]
    fn direction_is_primitive_and_oriented() {
        let d = PlaneDirection::new(rq(-2, 3), rq(4, 3)).unwrap();
        assert_eq!(d.as_point(), [ri(-1), ri(2)]);
        assert_eq!(d.line_canonical().as_point(), [ri(1), ri(-2)]);
        assert_eq!(PlaneDirection::from_ints(1, 0).unwrap().perp(), PlaneDirection::from_ints(0, 1).unwrap());
        assert!(PlaneDirection::from_ints(0, 0).is_err());
    }

    #[test]
    fn li2_detects_collinearity() {
        assert!(!li2(&[ri(1), ri(0)], &[ri(2), ri(0)]));
        assert!(li2(&[ri(2), ri(0)], &[ri(0), ri(1)]));
    }

    #[test]
    fn gradient_of_affine_is_constant() {
        let g = QuadraticFunction::new(SymMatrix::zeros(2), v(&[0, 1]), ri(0)).unwrap();
        assert_eq!(g.gradient(&v(&[5, -3])).unwrap(), v(&[0, 1]));
    }

    #[test]
    fn dimension_mismatch_reported() {
        let q = QuadraticFunction::zero(2);
        assert!(matches!(q.eval(&v(&[1])), Err(QrError::DimensionMismatch { expected: 2, got: 1 })));
    }
}
