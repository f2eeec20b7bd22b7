//! Matrices over the truncated power-series ring `k[t]/(t^N)`.
//!
//! A [`SeriesMatrix`] stores its coefficients flat, the coefficient of `t^k`
//! in entry `(i, j)` at index `(i * dim + j) * N + k`. All arithmetic lives on
//! [`MatRing`], which owns the field tables and the shape.

use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::ffield::{Fe, Field};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("matrix is not invertible over k[t]/(t^N)")]
    NonInvertible,
    #[error("matrix is not congruent to the identity mod t")]
    NotProUnipotent,
    #[error("level {n} outside 1..={trunc}")]
    LevelOutOfRange { n: usize, trunc: usize },
    #[error("operation needs a {expected}x{expected} matrix, got {got}x{got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("negative t-exponent {0}")]
    NegativeDegree(i64),
    #[error("bad shape: {0}")]
    BadShape(String),
}

/// A power series modulo `t^N`; index `n` holds the coefficient of `t^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<Fe>,
}

impl TruncatedSeries {
    pub fn new(coeffs: Vec<Fe>) -> Self {
        Self { coeffs }
    }

    pub fn trunc(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Fe {
        self.coeffs[n]
    }

    pub fn is_unit(&self) -> bool {
        !self.coeffs[0].is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn mul(&self, k: &Field, other: &Self) -> Self {
        let n = self.trunc();
        let mut out = vec![Fe::ZERO; n];
        series_mul_into(k, &self.coeffs, &other.coeffs, &mut out);
        Self::new(out)
    }

    pub fn inv(&self, k: &Field) -> Result<Self, SeriesError> {
        let mut out = vec![Fe::ZERO; self.trunc()];
        series_inv_into(k, &self.coeffs, &mut out)?;
        Ok(Self::new(out))
    }
}

fn series_mul_into(k: &Field, a: &[Fe], b: &[Fe], out: &mut [Fe]) {
    let n = out.len();
    for (d, o) in out.iter_mut().enumerate() {
        let mut s = Fe::ZERO;
        for i in 0..=d.min(n - 1) {
            s = k.add(s, k.mul(a[i], b[d - i]));
        }
        *o = s;
    }
}

fn series_inv_into(k: &Field, a: &[Fe], out: &mut [Fe]) -> Result<(), SeriesError> {
    let c0 = k.inv(a[0]).map_err(|_| SeriesError::NonInvertible)?;
    out[0] = c0;
    for d in 1..out.len() {
        let mut s = Fe::ZERO;
        for i in 1..=d {
            s = k.add(s, k.mul(a[i], out[d - i]));
        }
        out[d] = k.neg(k.mul(c0, s));
    }
    Ok(())
}

/// A constant `dim x dim` matrix over `k`, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KMatrix {
    dim: usize,
    data: Vec<Fe>,
}

impl KMatrix {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Fe::ZERO; dim * dim],
        }
    }

    pub fn from_rows(k: &Field, rows: &[&[i64]]) -> Self {
        let dim = rows.len();
        let data = rows.iter().flat_map(|r| r.iter().map(|&x| k.from_int(x))).collect();
        Self { dim, data }
    }

    /// `sum c * e_ij` over the listed terms, with 0-based indices.
    pub fn from_terms(k: &Field, dim: usize, terms: &[(usize, usize, i64)]) -> Self {
        let mut m = Self::zero(dim);
        for &(i, j, c) in terms {
            m.data[i * dim + j] = k.add(m.data[i * dim + j], k.from_int(c));
        }
        m
    }

    pub fn from_vec(dim: usize, data: Vec<Fe>) -> Self {
        assert_eq!(data.len(), dim * dim);
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Fe) {
        self.data[i * self.dim + j] = v;
    }

    pub fn as_slice(&self) -> &[Fe] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    pub fn trace(&self, k: &Field) -> Fe {
        (0..self.dim).fold(Fe::ZERO, |s, i| k.add(s, self.get(i, i)))
    }

    pub fn scale(&self, k: &Field, c: Fe) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&x| k.mul(c, x)).collect(),
        }
    }

    pub fn add(&self, k: &Field, other: &Self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| k.add(a, b)).collect(),
        }
    }

    pub fn mul(&self, k: &Field, other: &Self) -> Self {
        let d = self.dim;
        let mut out = Self::zero(d);
        for i in 0..d {
            for j in 0..d {
                let mut s = Fe::ZERO;
                for l in 0..d {
                    s = k.add(s, k.mul(self.get(i, l), other.get(l, j)));
                }
                out.set(i, j, s);
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let d = self.dim;
        let mut out = Self::zero(d);
        for i in 0..d {
            for j in 0..d {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn render(&self, k: &Field) -> serde_json::Value {
        serde_json::Value::Array(
            (0..self.dim)
                .map(|i| serde_json::Value::Array((0..self.dim).map(|j| k.render(self.get(i, j))).collect()))
                .collect(),
        )
    }
}

/// `t`-adic degree of `g - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    Finite(usize),
    /// `g` is the identity modulo `t^N`.
    Infinite,
}

impl Serialize for Degree {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Degree::Finite(n) => s.serialize_u64(*n as u64),
            Degree::Infinite => s.serialize_str("infinite"),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::Finite(n) => write!(f, "{n}"),
            Degree::Infinite => f.write_str("infinite"),
        }
    }
}

/// Degree and leading coefficient of a matrix congruent to 1 mod `t`.
/// `lc` is zero exactly when the degree is infinite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeLC {
    pub degree: Degree,
    pub lc: KMatrix,
}

/// A `dim x dim` matrix over `k[t]/(t^N)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SeriesMatrix {
    dim: usize,
    trunc: usize,
    data: Vec<Fe>,
}

impl SeriesMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    #[inline]
    pub fn coeff(&self, i: usize, j: usize, deg: usize) -> Fe {
        self.data[(i * self.dim + j) * self.trunc + deg]
    }

    #[inline]
    pub fn set_coeff(&mut self, i: usize, j: usize, deg: usize, v: Fe) {
        self.data[(i * self.dim + j) * self.trunc + deg] = v;
    }

    pub fn entry(&self, i: usize, j: usize) -> TruncatedSeries {
        let start = (i * self.dim + j) * self.trunc;
        TruncatedSeries::new(self.data[start..start + self.trunc].to_vec())
    }

    /// Coefficient matrix of `t^deg`.
    pub fn coeff_matrix(&self, deg: usize) -> KMatrix {
        let d = self.dim;
        let mut m = KMatrix::zero(d);
        for i in 0..d {
            for j in 0..d {
                m.set(i, j, self.coeff(i, j, deg));
            }
        }
        m
    }

    pub fn data(&self) -> &[Fe] {
        &self.data
    }

    pub fn from_data(dim: usize, trunc: usize, data: Vec<Fe>) -> Self {
        assert_eq!(data.len(), dim * dim * trunc);
        Self { dim, trunc, data }
    }
}

/// The ring `M_dim(k[t]/(t^N))`.
#[derive(Debug, Clone)]
pub struct MatRing {
    field: Arc<Field>,
    dim: usize,
    trunc: usize,
}

impl PartialEq for MatRing {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.trunc == other.trunc && self.field == other.field
    }
}

impl MatRing {
    pub fn new(field: Arc<Field>, dim: usize, trunc: usize) -> Result<Self, SeriesError> {
        if dim == 0 || trunc == 0 {
            return Err(SeriesError::BadShape(format!("dim {dim}, trunc {trunc}")));
        }
        Ok(Self { field, dim, trunc })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    /// Same field and dimension, truncation `trunc`.
    pub fn with_trunc(&self, trunc: usize) -> Self {
        Self {
            field: self.field.clone(),
            dim: self.dim,
            trunc: trunc.max(1),
        }
    }

    /// Number of stored coefficients per matrix.
    pub fn slots(&self) -> usize {
        self.dim * self.dim * self.trunc
    }

    pub fn zero(&self) -> SeriesMatrix {
        SeriesMatrix {
            dim: self.dim,
            trunc: self.trunc,
            data: vec![Fe::ZERO; self.slots()],
        }
    }

    pub fn identity(&self) -> SeriesMatrix {
        let mut g = self.zero();
        for i in 0..self.dim {
            g.set_coeff(i, i, 0, self.field.one());
        }
        g
    }

    pub fn from_data(&self, data: Vec<Fe>) -> SeriesMatrix {
        SeriesMatrix::from_data(self.dim, self.trunc, data)
    }

    /// `K t^deg`; the zero matrix when `deg >= N`.
    pub fn monomial(&self, m: &KMatrix, deg: i64) -> Result<SeriesMatrix, SeriesError> {
        if deg < 0 {
            return Err(SeriesError::NegativeDegree(deg));
        }
        self.check_kdim(m)?;
        let mut g = self.zero();
        let deg = deg as usize;
        if deg < self.trunc {
            for i in 0..self.dim {
                for j in 0..self.dim {
                    g.set_coeff(i, j, deg, m.get(i, j));
                }
            }
        }
        Ok(g)
    }

    /// `1 + sum c t^deg e_ij` over integer terms `(i, j, deg, c)`.
    pub fn one_plus_terms(&self, terms: &[(usize, usize, usize, i64)]) -> SeriesMatrix {
        let k = &self.field;
        let mut g = self.identity();
        for &(i, j, deg, c) in terms {
            if deg < self.trunc {
                g.set_coeff(i, j, deg, k.add(g.coeff(i, j, deg), k.from_int(c)));
            }
        }
        g
    }

    /// `1 + c t^deg e_ij`.
    pub fn elementary(&self, i: usize, j: usize, deg: usize, c: Fe) -> SeriesMatrix {
        let mut g = self.identity();
        if deg < self.trunc {
            let k = &self.field;
            g.set_coeff(i, j, deg, k.add(g.coeff(i, j, deg), c));
        }
        g
    }

    /// Diagonal matrix with the given series on the diagonal.
    pub fn diagonal(&self, entries: &[TruncatedSeries]) -> SeriesMatrix {
        let mut g = self.zero();
        for (i, s) in entries.iter().enumerate() {
            for d in 0..self.trunc.min(s.trunc()) {
                g.set_coeff(i, i, d, s.coeff(d));
            }
        }
        g
    }

    /// The series `sum c_n t^n`, truncated.
    pub fn series(&self, coeffs: &[Fe]) -> TruncatedSeries {
        let mut v = vec![Fe::ZERO; self.trunc];
        for (d, &c) in coeffs.iter().enumerate().take(self.trunc) {
            v[d] = c;
        }
        TruncatedSeries::new(v)
    }

    fn check_kdim(&self, m: &KMatrix) -> Result<(), SeriesError> {
        if m.dim() != self.dim {
            return Err(SeriesError::DimensionMismatch {
                expected: self.dim,
                got: m.dim(),
            });
        }
        Ok(())
    }

    pub fn add(&self, a: &SeriesMatrix, b: &SeriesMatrix) -> SeriesMatrix {
        let k = &self.field;
        self.from_data(a.data.iter().zip(&b.data).map(|(&x, &y)| k.add(x, y)).collect())
    }

    pub fn sub(&self, a: &SeriesMatrix, b: &SeriesMatrix) -> SeriesMatrix {
        let k = &self.field;
        self.from_data(a.data.iter().zip(&b.data).map(|(&x, &y)| k.sub(x, y)).collect())
    }

    pub fn scale(&self, c: Fe, a: &SeriesMatrix) -> SeriesMatrix {
        let k = &self.field;
        self.from_data(a.data.iter().map(|&x| k.mul(c, x)).collect())
    }

    pub fn mul(&self, a: &SeriesMatrix, b: &SeriesMatrix) -> SeriesMatrix {
        let mut out = vec![Fe::ZERO; self.slots()];
        self.mul_raw(&a.data, &b.data, &mut out);
        self.from_data(out)
    }

    /// Product on raw coefficient slices in the flat layout.
    #[inline]
    pub fn mul_raw(&self, a: &[Fe], b: &[Fe], out: &mut [Fe]) {
        let (d, n, k) = (self.dim, self.trunc, &*self.field);
        for i in 0..d {
            for j in 0..d {
                let o = (i * d + j) * n;
                for deg in 0..n {
                    let mut s = Fe::ZERO;
                    for l in 0..d {
                        let ra = (i * d + l) * n;
                        let rb = (l * d + j) * n;
                        for x in 0..=deg {
                            let ax = a[ra + x];
                            if !ax.is_zero() {
                                s = k.add(s, k.mul(ax, b[rb + deg - x]));
                            }
                        }
                    }
                    out[o + deg] = s;
                }
            }
        }
    }

    pub fn pow(&self, a: &SeriesMatrix, mut e: u64) -> SeriesMatrix {
        let mut base = a.clone();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn is_identity(&self, g: &SeriesMatrix) -> bool {
        *g == self.identity()
    }

    /// Determinant by cofactor expansion along the first row.
    pub fn det(&self, g: &SeriesMatrix) -> TruncatedSeries {
        let rows: Vec<usize> = (0..self.dim).collect();
        self.det_minor(g, &rows, &rows)
    }

    fn det_minor(&self, g: &SeriesMatrix, rows: &[usize], cols: &[usize]) -> TruncatedSeries {
        let k = &*self.field;
        if rows.len() == 1 {
            return g.entry(rows[0], cols[0]);
        }
        let mut acc = vec![Fe::ZERO; self.trunc];
        for (c, &col) in cols.iter().enumerate() {
            let entry = g.entry(rows[0], col);
            if entry.is_zero() {
                continue;
            }
            let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != col).collect();
            let minor = self.det_minor(g, &rows[1..], &sub_cols);
            let term = entry.mul(k, &minor);
            for (a, &b) in acc.iter_mut().zip(term.coeffs()) {
                *a = if c % 2 == 0 { k.add(*a, b) } else { k.sub(*a, b) };
            }
        }
        TruncatedSeries::new(acc)
    }

    /// Inverse by Gauss-Jordan elimination with unit pivots.
    pub fn inv(&self, g: &SeriesMatrix) -> Result<SeriesMatrix, SeriesError> {
        let (d, n, k) = (self.dim, self.trunc, &*self.field);
        let mut a: Vec<Vec<Vec<Fe>>> = (0..d).map(|i| (0..d).map(|j| g.entry(i, j).coeffs().to_vec()).collect()).collect();
        let mut b: Vec<Vec<Vec<Fe>>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let mut v = vec![Fe::ZERO; n];
                        if i == j {
                            v[0] = k.one();
                        }
                        v
                    })
                    .collect()
            })
            .collect();
        let mut tmp = vec![Fe::ZERO; n];
        for c in 0..d {
            let p = (c..d).find(|&r| !a[r][c][0].is_zero()).ok_or(SeriesError::NonInvertible)?;
            a.swap(c, p);
            b.swap(c, p);
            let mut pinv = vec![Fe::ZERO; n];
            series_inv_into(k, &a[c][c], &mut pinv)?;
            for col in 0..d {
                series_mul_into(k, &a[c][col], &pinv, &mut tmp);
                a[c][col].copy_from_slice(&tmp);
                series_mul_into(k, &b[c][col], &pinv, &mut tmp);
                b[c][col].copy_from_slice(&tmp);
            }
            for r in 0..d {
                if r == c || a[r][c].iter().all(|x| x.is_zero()) {
                    continue;
                }
                let f = a[r][c].clone();
                for col in 0..d {
                    series_mul_into(k, &f, &a[c][col], &mut tmp);
                    for (x, &y) in a[r][col].iter_mut().zip(&tmp) {
                        *x = k.sub(*x, y);
                    }
                    series_mul_into(k, &f, &b[c][col], &mut tmp);
                    for (x, &y) in b[r][col].iter_mut().zip(&tmp) {
                        *x = k.sub(*x, y);
                    }
                }
            }
        }
        let mut out = self.zero();
        for i in 0..d {
            for j in 0..d {
                for deg in 0..n {
                    out.set_coeff(i, j, deg, b[i][j][deg]);
                }
            }
        }
        Ok(out)
    }

    /// `[a, b] = a b a^-1 b^-1`.
    pub fn commutator(&self, a: &SeriesMatrix, b: &SeriesMatrix) -> Result<SeriesMatrix, SeriesError> {
        let ab = self.mul(a, b);
        let ai = self.inv(a)?;
        let bi = self.inv(b)?;
        Ok(self.mul(&self.mul(&ab, &ai), &bi))
    }

    /// `a b a^-1`.
    pub fn conjugate(&self, a: &SeriesMatrix, b: &SeriesMatrix) -> Result<SeriesMatrix, SeriesError> {
        Ok(self.mul(&self.mul(a, b), &self.inv(a)?))
    }

    pub fn transpose(&self, g: &SeriesMatrix) -> SeriesMatrix {
        let mut out = self.zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                for deg in 0..self.trunc {
                    out.set_coeff(j, i, deg, g.coeff(i, j, deg));
                }
            }
        }
        out
    }

    /// Entrywise `t -> -t`.
    pub fn sigma(&self, g: &SeriesMatrix) -> SeriesMatrix {
        let k = &self.field;
        let mut out = g.clone();
        for (idx, x) in out.data.iter_mut().enumerate() {
            if (idx % self.trunc) % 2 == 1 {
                *x = k.neg(*x);
            }
        }
        out
    }

    /// `g* = sigma(g)^T`.
    pub fn sigma_star(&self, g: &SeriesMatrix) -> SeriesMatrix {
        self.transpose(&self.sigma(g))
    }

    fn require_dim3(&self) -> Result<(), SeriesError> {
        if self.dim != 3 {
            return Err(SeriesError::DimensionMismatch {
                expected: 3,
                got: self.dim,
            });
        }
        Ok(())
    }

    /// The hermitian-form matrix `J = e13 - e22 + e31`; `J^-1 = J`.
    pub fn j_matrix(&self) -> Result<SeriesMatrix, SeriesError> {
        self.require_dim3()?;
        let k = &self.field;
        let mut j = self.zero();
        j.set_coeff(0, 2, 0, k.one());
        j.set_coeff(1, 1, 0, k.neg(k.one()));
        j.set_coeff(2, 0, 0, k.one());
        Ok(j)
    }

    /// Whether `J^-1 g* J g = 1`.
    pub fn is_unitary(&self, g: &SeriesMatrix) -> Result<bool, SeriesError> {
        let j = self.j_matrix()?;
        self.inv(g)?;
        let lhs = self.mul(&self.mul(&self.mul(&j, &self.sigma_star(g)), &j), g);
        Ok(self.is_identity(&lhs))
    }

    /// Whether the constant term is upper unitriangular.
    pub fn is_unitriangular_mod_t(&self, g: &SeriesMatrix) -> bool {
        let k = &self.field;
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| {
                let c = g.coeff(i, j, 0);
                match i.cmp(&j) {
                    std::cmp::Ordering::Equal => c == k.one(),
                    std::cmp::Ordering::Greater => c.is_zero(),
                    std::cmp::Ordering::Less => true,
                }
            })
        })
    }

    pub fn degree_lc(&self, g: &SeriesMatrix) -> Result<DegreeLC, SeriesError> {
        if g.coeff_matrix(0) != self.identity().coeff_matrix(0) {
            return Err(SeriesError::NotProUnipotent);
        }
        for deg in 1..self.trunc {
            let m = g.coeff_matrix(deg);
            if !m.is_zero() {
                return Ok(DegreeLC {
                    degree: Degree::Finite(deg),
                    lc: m,
                });
            }
        }
        Ok(DegreeLC {
            degree: Degree::Infinite,
            lc: KMatrix::zero(self.dim),
        })
    }

    /// Whether `g = 1 mod t^n`.
    pub fn congruence_level(&self, g: &SeriesMatrix, n: usize) -> Result<bool, SeriesError> {
        if n == 0 || n > self.trunc {
            return Err(SeriesError::LevelOutOfRange { n, trunc: self.trunc });
        }
        let id = self.identity();
        Ok((0..self.dim).all(|i| (0..self.dim).all(|j| (0..n).all(|deg| g.coeff(i, j, deg) == id.coeff(i, j, deg)))))
    }

    /// Reduction of `g` into `target`, which must have the same field and
    /// dimension and a truncation no larger than `g`'s.
    pub fn reduce(&self, g: &SeriesMatrix, target: &MatRing) -> SeriesMatrix {
        assert!(target.trunc <= g.trunc && target.dim == g.dim);
        let mut out = target.zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                for deg in 0..target.trunc {
                    out.set_coeff(i, j, deg, g.coeff(i, j, deg));
                }
            }
        }
        out
    }

    /// `1 + X + X^2 / 2` for `X` with `X^3 = 0`; needs odd characteristic.
    pub fn exp_nilpotent2(&self, x: &SeriesMatrix) -> Result<SeriesMatrix, SeriesError> {
        let k = &self.field;
        let half = k.inv(k.from_int(2)).map_err(|_| SeriesError::NonInvertible)?;
        let x2 = self.mul(x, x);
        Ok(self.add(&self.add(&self.identity(), x), &self.scale(half, &x2)))
    }

    /// Nested arrays `[row][col][degree]` of rendered coefficients.
    pub fn render(&self, g: &SeriesMatrix) -> serde_json::Value {
        use serde_json::Value;
        Value::Array(
            (0..self.dim)
                .map(|i| {
                    Value::Array(
                        (0..self.dim)
                            .map(|j| Value::Array((0..self.trunc).map(|d| self.field.render(g.coeff(i, j, d))).collect()))
                            .collect(),
                    )
                })
                .collect(),
        )
    }
}
