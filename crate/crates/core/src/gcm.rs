//! Generalized Cartan matrices: validation, submatrices, indecomposable
//! blocks and the finite / affine / indefinite classification.
//!
//! Types are decided by the principal-minor criterion with exact integer
//! determinants: finite iff every principal minor is positive, affine iff the
//! determinant vanishes and every proper principal minor is positive.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One violated axiom. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    DiagonalNotTwo(usize),
    PositiveOffDiagonal(usize, usize),
    ZeroAsymmetry(usize, usize),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::DiagonalNotTwo(i) => write!(f, "a[{0}][{0}] != 2", i + 1),
            Violation::PositiveOffDiagonal(i, j) => write!(f, "a[{}][{}] > 0", i + 1, j + 1),
            Violation::ZeroAsymmetry(i, j) => {
                write!(f, "a[{0}][{1}] = 0 but a[{1}][{0}] != 0", i + 1, j + 1)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GcmError {
    #[error("matrix is empty or not square")]
    NonSquare,
    #[error("not a generalized Cartan matrix: {}", list(.0))]
    Axioms(Vec<Violation>),
    #[error("empty index subset")]
    EmptySubset,
    #[error("index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("matrix is decomposable; classify its blocks separately")]
    DecomposableInput,
    #[error("matrix is not of indefinite type")]
    NotIndefinite,
    #[error("malformed GCM file: {0}")]
    Malformed(String),
}

fn list(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// A validated generalized Cartan matrix over the index set `0..l`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneralizedCartanMatrix {
    entries: Vec<Vec<i64>>,
    name: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Tag {
    Finite,
    Affine,
    Indefinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CartanType {
    pub tag: Tag,
    /// Only ever true for indecomposable indefinite matrices.
    pub hyperbolic: bool,
}

/// Checks the GCM axioms and reports every violation found.
pub fn validate_gcm(entries: Vec<Vec<i64>>) -> Result<GeneralizedCartanMatrix, GcmError> {
    let l = entries.len();
    if l == 0 || entries.iter().any(|row| row.len() != l) {
        return Err(GcmError::NonSquare);
    }
    let mut violations = Vec::new();
    for i in 0..l {
        if entries[i][i] != 2 {
            violations.push(Violation::DiagonalNotTwo(i));
        }
        for j in 0..l {
            if i == j {
                continue;
            }
            if entries[i][j] > 0 {
                violations.push(Violation::PositiveOffDiagonal(i, j));
            }
            if entries[i][j] == 0 && entries[j][i] != 0 {
                violations.push(Violation::ZeroAsymmetry(i, j));
            }
        }
    }
    if violations.is_empty() {
        Ok(GeneralizedCartanMatrix {
            entries,
            name: None,
        })
    } else {
        Err(GcmError::Axioms(violations))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GcmFile {
    #[serde(default)]
    name: Option<String>,
    entries: Vec<Vec<i64>>,
}

impl GeneralizedCartanMatrix {
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self, GcmError> {
        validate_gcm(entries)
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// Parses `{"name": ..., "entries": [[...]]}`; non-integer entries are rejected.
    pub fn from_json(text: &str) -> Result<Self, GcmError> {
        let file: GcmFile =
            serde_json::from_str(text).map_err(|e| GcmError::Malformed(e.to_string()))?;
        let gcm = validate_gcm(file.entries)?;
        Ok(match file.name {
            Some(n) => gcm.named(n),
            None => gcm,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "name": self.name, "entries": self.entries })
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn is_symmetric(&self) -> bool {
        let l = self.rank();
        (0..l).all(|i| (0..l).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    pub fn max_abs_entry(&self) -> i64 {
        self.entries.iter().flatten().map(|x| x.abs()).max().unwrap_or(0)
    }

    /// `(a_ij)` for `i, j` in `subset`, in the given order.
    pub fn submatrix(&self, subset: &[usize]) -> Result<Self, GcmError> {
        if subset.is_empty() {
            return Err(GcmError::EmptySubset);
        }
        if let Some(&bad) = subset.iter().find(|&&i| i >= self.rank()) {
            return Err(GcmError::IndexOutOfRange(bad));
        }
        let entries = subset
            .iter()
            .map(|&i| subset.iter().map(|&j| self.entries[i][j]).collect())
            .collect();
        Ok(Self {
            entries,
            name: None,
        })
    }

    /// Connected components of the graph with an edge whenever `a_ij != 0`,
    /// each sorted, ordered by smallest member.
    pub fn indecomposable_blocks(&self) -> Vec<Vec<usize>> {
        blocks_of(self.rank(), |i, j| self.entries[i][j] != 0, &(0..self.rank()).collect::<Vec<_>>())
    }

    pub fn is_indecomposable(&self) -> bool {
        self.indecomposable_blocks().len() == 1
    }

    /// Type of an indecomposable matrix.
    pub fn classify(&self) -> Result<CartanType, GcmError> {
        if !self.is_indecomposable() {
            return Err(GcmError::DecomposableInput);
        }
        let minors = PrincipalMinors::new(self);
        let full = minors.full_mask();
        let tag = minors.tag(full);
        let hyperbolic = tag == Tag::Indefinite && minors.hyperbolic(self, full);
        Ok(CartanType { tag, hyperbolic })
    }

    /// Per-block report for possibly decomposable input.
    pub fn classify_blocks(&self) -> Vec<(Vec<usize>, CartanType)> {
        self.indecomposable_blocks()
            .into_iter()
            .map(|b| {
                let t = self.submatrix(&b).and_then(|s| s.classify()).expect("blocks are indecomposable");
                (b, t)
            })
            .collect()
    }

    pub fn is_hyperbolic(&self) -> Result<bool, GcmError> {
        let t = self.classify()?;
        if t.tag != Tag::Indefinite {
            return Err(GcmError::NotIndefinite);
        }
        Ok(t.hyperbolic)
    }

    /// The same matrix with indices relabelled: new index `i` is old `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self, GcmError> {
        self.submatrix(perm)
    }
}

fn blocks_of(l: usize, adj: impl Fn(usize, usize) -> bool, members: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; l];
    let mut out = Vec::new();
    for &start in members {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for &j in members {
                if !seen[j] && (adj(i, j) || adj(j, i)) {
                    seen[j] = true;
                    comp.push(j);
                    stack.push(j);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Exact determinant via fraction-free Bareiss elimination.
pub fn determinant(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Table of every principal minor, indexed by subset bitmask.
///
/// Classifying a matrix together with all of its submatrices only needs this
/// one table, which is what makes exhaustive sweeps cheap.
pub struct PrincipalMinors {
    l: usize,
    minors: Vec<i128>,
}

impl PrincipalMinors {
    pub fn new(a: &GeneralizedCartanMatrix) -> Self {
        let l = a.rank();
        assert!(l < 20, "principal-minor table is exponential in the rank");
        let minors = (0..1usize << l)
            .map(|mask| {
                let idx = mask_indices(mask, l);
                let sub: Vec<Vec<i64>> = idx.iter().map(|&i| idx.iter().map(|&j| a.get(i, j)).collect()).collect();
                determinant(&sub)
            })
            .collect();
        Self { l, minors }
    }

    pub fn full_mask(&self) -> usize {
        (1 << self.l) - 1
    }

    pub fn minor(&self, mask: usize) -> i128 {
        self.minors[mask]
    }

    /// Tag of the (assumed indecomposable) submatrix on `mask`.
    pub fn tag(&self, mask: usize) -> Tag {
        let proper_positive = submasks(mask).filter(|&s| s != mask).all(|s| self.minors[s] > 0);
        match (proper_positive, self.minors[mask]) {
            (true, d) if d > 0 => Tag::Finite,
            (true, 0) => Tag::Affine,
            _ => Tag::Indefinite,
        }
    }

    /// Tag of a possibly decomposable submatrix: finite iff every block is.
    pub fn blockwise_tags(&self, a: &GeneralizedCartanMatrix, mask: usize) -> Vec<Tag> {
        let members = mask_indices(mask, self.l);
        blocks_of(self.l, |i, j| a.get(i, j) != 0, &members)
            .into_iter()
            .map(|b| self.tag(indices_mask(&b)))
            .collect()
    }

    /// Every proper indecomposable submatrix of `mask` is finite or affine.
    pub fn hyperbolic(&self, a: &GeneralizedCartanMatrix, mask: usize) -> bool {
        submasks(mask).filter(|&s| s != mask && s != 0).all(|s| {
            let members = mask_indices(s, self.l);
            let blocks = blocks_of(self.l, |i, j| a.get(i, j) != 0, &members);
            blocks.len() != 1 || self.tag(s) != Tag::Indefinite
        })
    }
}

/// Nonempty submasks of `mask`, including `mask` itself.
fn submasks(mask: usize) -> impl Iterator<Item = usize> {
    (1..=mask).filter(move |s| s & !mask == 0)
}

pub fn mask_indices(mask: usize, l: usize) -> Vec<usize> {
    (0..l).filter(|i| mask >> i & 1 == 1).collect()
}

pub fn indices_mask(idx: &[usize]) -> usize {
    idx.iter().fold(0, |m, &i| m | 1 << i)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gcm(rows: &[&[i64]]) -> GeneralizedCartanMatrix {
        GeneralizedCartanMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn validation_examples() {
        assert!(validate_gcm(vec![vec![2, -1], vec![-1, 2]]).is_ok());
        assert!(validate_gcm(vec![vec![2, -4], vec![-1, 2]]).is_ok());
        assert_eq!(
            validate_gcm(vec![vec![2, 0], vec![-1, 2]]),
            Err(GcmError::Axioms(vec![Violation::ZeroAsymmetry(0, 1)]))
        );
        assert_eq!(validate_gcm(vec![vec![2, -1]]), Err(GcmError::NonSquare));
        assert_eq!(validate_gcm(vec![]), Err(GcmError::NonSquare));
        let err = validate_gcm(vec![vec![3, 1], vec![-1, 2]]).unwrap_err();
        assert_eq!(
            err,
            GcmError::Axioms(vec![Violation::DiagonalNotTwo(0), Violation::PositiveOffDiagonal(0, 1)])
        );
    }

    #[test]
    fn submatrix_examples() {
        let a = gcm(&[&[2, -2, 0], &[-2, 2, -1], &[0, -1, 2]]);
        assert_eq!(a.submatrix(&[0, 1]).unwrap().entries(), &[vec![2, -2], vec![-2, 2]]);
        assert_eq!(a.submatrix(&[0, 1, 2]).unwrap().entries(), a.entries());
        assert_eq!(a.submatrix(&[0, 2]).unwrap().entries(), &[vec![2, 0], vec![0, 2]]);
        assert_eq!(a.submatrix(&[]), Err(GcmError::EmptySubset));
        assert_eq!(a.submatrix(&[3]), Err(GcmError::IndexOutOfRange(3)));
    }

    #[test]
    fn block_examples() {
        assert_eq!(gcm(&[&[2, 0], &[0, 2]]).indecomposable_blocks(), vec![vec![0], vec![1]]);
        assert_eq!(gcm(&[&[2, -4], &[-1, 2]]).indecomposable_blocks(), vec![vec![0, 1]]);
        assert_eq!(
            gcm(&[&[2, -1, 0], &[-1, 2, 0], &[0, 0, 2]]).indecomposable_blocks(),
            vec![vec![0, 1], vec![2]]
        );
    }

    #[test]
    fn classify_examples() {
        assert_eq!(gcm(&[&[2]]).classify().unwrap().tag, Tag::Finite);
        assert_eq!(gcm(&[&[2, -2], &[-2, 2]]).classify().unwrap().tag, Tag::Affine);
        assert_eq!(gcm(&[&[2, -4], &[-1, 2]]).classify().unwrap().tag, Tag::Affine);
        let t = gcm(&[&[2, -3], &[-3, 2]]).classify().unwrap();
        assert_eq!(t, CartanType { tag: Tag::Indefinite, hyperbolic: true });
        assert_eq!(gcm(&[&[2, 0], &[0, 2]]).classify(), Err(GcmError::DecomposableInput));
        let blocks = gcm(&[&[2, -1, 0], &[-1, 2, 0], &[0, 0, 2]]).classify_blocks();
        assert_eq!(blocks.len(), 2);
        assert!(blocks.iter().all(|(_, t)| t.tag == Tag::Finite));
    }

    #[test]
    fn hyperbolic_examples() {
        assert_eq!(gcm(&[&[2, -3], &[-3, 2]]).is_hyperbolic(), Ok(true));
        let a = gcm(&[&[2, -2, 0], &[-2, 2, -1], &[0, -1, 2]]);
        assert_eq!(determinant(a.entries()), -2);
        assert_eq!(a.is_hyperbolic(), Ok(true));
        assert_eq!(gcm(&[&[2, -2], &[-2, 2]]).is_hyperbolic(), Err(GcmError::NotIndefinite));
        // contains the indefinite block [[2,-3],[-3,2]]
        let b = gcm(&[&[2, -3, 0], &[-3, 2, -1], &[0, -1, 2]]);
        assert_eq!(b.is_hyperbolic(), Ok(false));
    }

    #[test]
    fn bareiss_matches_cofactor() {
        let m = vec![vec![2, -1, -1], vec![-1, 2, -1], vec![-1, -1, 2]];
        assert_eq!(determinant(&m), 0);
        let m = vec![vec![0, 1], vec![1, 0]];
        assert_eq!(determinant(&m), -1);
        let m = vec![vec![2, -1, 0, 0], vec![-1, 2, -1, 0], vec![0, -1, 2, -1], vec![0, 0, -1, 2]];
        assert_eq!(determinant(&m), 5);
    }

    #[test]
    fn json_is_strict() {
        let a = GeneralizedCartanMatrix::from_json(r#"{"name":"twisted","entries":[[2,-4],[-1,2]]}"#).unwrap();
        assert_eq!(a.name(), Some("twisted"));
        assert!(matches!(
            GeneralizedCartanMatrix::from_json(r#"{"name":"x","entries":[[2,-1.5],[-1,2]]}"#),
            Err(GcmError::Malformed(_))
        ));
        assert!(matches!(
            GeneralizedCartanMatrix::from_json(r#"{"entries":[[2,-1],[-1,2]],"extra":1}"#),
            Err(GcmError::Malformed(_))
        ));
        assert!(matches!(
            GeneralizedCartanMatrix::from_json(r#"{"entries":[[2,0],[-1,2]]}"#),
            Err(GcmError::Axioms(_))
        ));
    }
}
