//! Exact rational vectors and the small dense linear algebra the geometry
//! kernels need: rank, solve, nullspace. Everything here is over `Rational`
//! and deterministic.

use crate::num::{primitive_integer_scale, Rational};
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// A point or direction in Q^n. The distinction is contextual; `Point` is an
/// alias kept for readability at call sites.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector {
    pub coords: Vec<Rational>,
}

pub type Point = Vector;

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Vector {
    pub fn new(coords: Vec<Rational>) -> Self {
        Vector { coords }
    }

    pub fn zero(dim: usize) -> Self {
        Vector {
            coords: vec![Rational::zero(); dim],
        }
    }

    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut v = Self::zero(dim);
        v.coords[axis] = Rational::one();
        v
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Vector {
            coords: coords.iter().map(|&c| crate::num::rat_int(c)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn dot(&self, other: &Vector) -> Rational {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch in dot product");
        let mut acc = Rational::zero();
        for (a, b) in self.coords.iter().zip(&other.coords) {
            acc += a * b;
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, s: &Rational) -> Vector {
        Vector {
            coords: self.coords.iter().map(|c| c * s).collect(),
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    /// Primitive integer rescaling (direction canonicalization).
    pub fn primitive(&self) -> Vector {
        let ints = primitive_integer_scale(&self.coords);
        Vector {
            coords: ints.into_iter().map(Rational::from_integer).collect(),
        }
    }

    /// Primitive form with the first nonzero coordinate positive.
    pub fn primitive_signed(&self) -> Vector {
        let p = self.primitive();
        match p.coords.iter().find(|c| !c.is_zero()) {
            Some(c) if c.is_negative() => -&p,
            _ => p,
        }
    }

    pub fn lex_cmp(&self, other: &Vector) -> Ordering {
        self.coords.cmp(&other.coords)
    }
}

impl Add for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        Vector {
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        Vector {
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        Vector {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul<&Rational> for &Vector {
    type Output = Vector;
    fn mul(self, rhs: &Rational) -> Vector {
        self.scale(rhs)
    }
}

/// Row-reduce `rows` in place (Gauss-Jordan); returns pivot column indices.
pub fn rref(rows: &mut Vec<Vec<Rational>>) -> Vec<usize> {
    let nrows = rows.len();
    if nrows == 0 {
        return Vec::new();
    }
    let ncols = rows[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let pivot_row = (r..nrows).find(|&i| !rows[i][c].is_zero());
        let Some(p) = pivot_row else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..nrows {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                for j in 0..ncols {
                    let t = &rows[r][j] * &factor;
                    rows[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_of_rows(rows: &[Vector]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.iter().map(|v| v.coords.clone()).collect();
    rref(&mut m).len()
}

/// Indices of a maximal linearly independent subset of `rows`, greedily.
pub fn independent_subset(rows: &[Vector]) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut basis: Vec<Vector> = Vec::new();
    for (i, v) in rows.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        basis.push(v.clone());
        if rank_of_rows(&basis) == basis.len() {
            chosen.push(i);
        } else {
            basis.pop();
        }
    }
    chosen
}

/// Basis of the nullspace of the matrix whose rows are `rows` (acting on
/// vectors of length `dim`).
pub fn nullspace(rows: &[Vector], dim: usize) -> Vec<Vector> {
    let mut m: Vec<Vec<Rational>> = rows.iter().map(|v| v.coords.clone()).collect();
    if m.is_empty() {
        return (0..dim).map(|i| Vector::unit(dim, i)).collect();
    }
    let pivots = rref(&mut m);
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..dim {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = Vector::zero(dim);
        v.coords[free] = Rational::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v.coords[pc] = -m[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solves `A x = b` where `A`'s rows are `rows`; returns any solution if the
/// system is consistent.
pub fn solve(rows: &[Vector], b: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(rows.len(), b.len());
    if rows.is_empty() {
        return Some(Vec::new());
    }
    let dim = rows[0].dim();
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .zip(b)
        .map(|(v, rhs)| {
            let mut row = v.coords.clone();
            row.push(rhs.clone());
            row
        })
        .collect();
    let pivots = rref(&mut m);
    // Inconsistent iff a pivot lands in the augmented column.
    if pivots.iter().any(|&c| c == dim) {
        return None;
    }
    let mut x = vec![Rational::zero(); dim];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = m[r][dim].clone();
    }
    Some(x)
}

/// Determinant of a square matrix given by rows.
pub fn determinant(rows: &[Vector]) -> Rational {
    let n = rows.len();
    let mut m: Vec<Vec<Rational>> = rows.iter().map(|v| v.coords.clone()).collect();
    debug_assert!(m.iter().all(|r| r.len() == n));
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(c, p);
            det = -det;
        }
        det *= &m[c][c];
        let inv = m[c][c].recip();
        for i in (c + 1)..n {
            if m[i][c].is_zero() {
                continue;
            }
            let factor = &m[i][c] * &inv;
            for j in c..n {
                let t = &m[c][j] * &factor;
                m[i][j] -= t;
            }
        }
    }
    det
}

/// Orthonormalizes (in f64) the span of `basis`; returns the resulting
/// orthonormal vectors. Used only by quadrature and angle estimation.
pub fn gram_schmidt_f64(basis: &[Vector]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for v in basis {
        let mut w = v.to_f64();
        for u in &out {
            let d: f64 = w.iter().zip(u).map(|(a, b)| a * b).sum();
            for (wi, ui) in w.iter_mut().zip(u) {
                *wi -= d * ui;
            }
        }
        let norm: f64 = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            for wi in w.iter_mut() {
                *wi /= norm;
            }
            out.push(w);
        }
    }
    out
}

/// Exact orthogonal projection of `v` onto the span of `basis` (rational:
/// solves the normal equations).
pub fn project_onto_span(v: &Vector, basis: &[Vector]) -> Vector {
    if basis.is_empty() {
        return Vector::zero(v.dim());
    }
    let k = basis.len();
    let gram: Vec<Vector> = (0..k)
        .map(|i| Vector::new((0..k).map(|j| basis[i].dot(&basis[j])).collect()))
        .collect();
    let rhs: Vec<Rational> = basis.iter().map(|b| b.dot(v)).collect();
    let coeffs = solve(&gram, &rhs).expect("Gram system is always consistent");
    let mut out = Vector::zero(v.dim());
    for (c, b) in coeffs.iter().zip(basis) {
        out = &out + &b.scale(c);
    }
    out
}
