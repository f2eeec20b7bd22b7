//! Real roots, coroots and Weyl-group combinatorics of a generalized Cartan
//! matrix, plus the two height-descent algorithms used to reduce questions
//! about a root to a parabolic or rank-2 subsystem.
//!
//! Conventions: the simple root `alpha_j` pairs with the simple coroot
//! `alpha_i^vee` to `a_ij`. A [`WeylWord`] `[l1, l2, ..., lk]` denotes
//! `w_{l1} w_{l2} ... w_{lk}`, so its last letter acts first.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gcm::GeneralizedCartanMatrix;

/// Default cap on the number of stored roots.
pub const DEFAULT_ROOT_CAP: usize = 500_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("vector has {got} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("height horizon produces more than {cap} roots")]
    HorizonTooLarge { cap: usize },
    #[error("{0} is not a stored real root")]
    NotARealRoot(RootVector),
    #[error("the invariant form needs a symmetric matrix")]
    NotSymmetric,
    #[error("{0} lies beyond the datum horizon")]
    HorizonExceeded(RootVector),
    #[error("root already lies in the parabolic subsystem")]
    GammaInPhiJ,
    #[error("root is not positive")]
    NotPositive,
    #[error("root is simple")]
    SimpleRoot,
}

/// Coordinates over the simple roots.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RootVector(pub Vec<i64>);

/// Coordinates over the simple coroots.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CorootVector(pub Vec<i64>);

impl fmt::Display for RootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl RootVector {
    pub fn simple(l: usize, i: usize) -> Self {
        let mut v = vec![0; l];
        v[i] = 1;
        Self(v)
    }

    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&c| c >= 0) && self.0.iter().any(|&c| c > 0)
    }

    pub fn is_negative(&self) -> bool {
        self.neg().is_positive()
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|c| -c).collect())
    }

    /// Index `i` when this is the simple root `alpha_i`.
    pub fn simple_index(&self) -> Option<usize> {
        (self.0.iter().filter(|&&c| c != 0).count() == 1)
            .then(|| self.0.iter().position(|&c| c == 1))
            .flatten()
    }

    pub fn support(&self) -> Vec<usize> {
        self.0.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, _)| i).collect()
    }

    /// `m * self + n * other`.
    pub fn combine(&self, m: i64, other: &Self, n: i64) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| m * a + n * b).collect())
    }
}

impl CorootVector {
    pub fn simple(l: usize, i: usize) -> Self {
        let mut v = vec![0; l];
        v[i] = 1;
        Self(v)
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|c| -c).collect())
    }
}

/// Word in the simple reflections; the last letter acts first.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeylWord(pub Vec<usize>);

impl WeylWord {
    pub fn identity() -> Self {
        Self(Vec::new())
    }

    /// `w_i * self`.
    pub fn prepend(&self, i: usize) -> Self {
        let mut letters = Vec::with_capacity(self.0.len() + 1);
        letters.push(i);
        letters.extend_from_slice(&self.0);
        Self(letters)
    }

    /// `self * w_i`.
    pub fn append(&self, i: usize) -> Self {
        let mut letters = self.0.clone();
        letters.push(i);
        Self(letters)
    }

    pub fn apply_root(&self, a: &GeneralizedCartanMatrix, alpha: &RootVector) -> RootVector {
        self.0.iter().rev().fold(alpha.clone(), |v, &i| reflect_unchecked(a, i, &v))
    }

    pub fn apply_coroot(&self, a: &GeneralizedCartanMatrix, h: &CorootVector) -> CorootVector {
        self.0.iter().rev().fold(h.clone(), |v, &i| coreflect_unchecked(a, i, &v))
    }

    /// 1-based letters, as used in files and on the command line.
    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }
}

fn check_shape(a: &GeneralizedCartanMatrix, v: &[i64]) -> Result<(), RootError> {
    if v.len() != a.rank() {
        return Err(RootError::DimensionMismatch {
            expected: a.rank(),
            got: v.len(),
        });
    }
    Ok(())
}

/// `<alpha, alpha_i^vee> = sum_j n_j a_ij`.
fn simple_coroot_pairing(a: &GeneralizedCartanMatrix, i: usize, alpha: &RootVector) -> i64 {
    alpha.0.iter().enumerate().map(|(j, n)| n * a.get(i, j)).sum()
}

/// `<alpha_i, h> = sum_j m_j a_ji`.
fn simple_root_pairing(a: &GeneralizedCartanMatrix, i: usize, h: &CorootVector) -> i64 {
    h.0.iter().enumerate().map(|(j, m)| m * a.get(j, i)).sum()
}

fn reflect_unchecked(a: &GeneralizedCartanMatrix, i: usize, alpha: &RootVector) -> RootVector {
    let c = simple_coroot_pairing(a, i, alpha);
    let mut v = alpha.0.clone();
    v[i] -= c;
    RootVector(v)
}

fn coreflect_unchecked(a: &GeneralizedCartanMatrix, i: usize, h: &CorootVector) -> CorootVector {
    let c = simple_root_pairing(a, i, h);
    let mut v = h.0.clone();
    v[i] -= c;
    CorootVector(v)
}

/// Simple reflection `w_i(alpha) = alpha - <alpha, alpha_i^vee> alpha_i`.
pub fn reflect(a: &GeneralizedCartanMatrix, i: usize, alpha: &RootVector) -> Result<RootVector, RootError> {
    if i >= a.rank() {
        return Err(RootError::IndexOutOfRange(i));
    }
    check_shape(a, &alpha.0)?;
    Ok(reflect_unchecked(a, i, alpha))
}

/// Dual action `w_i(h) = h - <alpha_i, h> alpha_i^vee`.
pub fn coreflect(a: &GeneralizedCartanMatrix, i: usize, h: &CorootVector) -> Result<CorootVector, RootError> {
    if i >= a.rank() {
        return Err(RootError::IndexOutOfRange(i));
    }
    check_shape(a, &h.0)?;
    Ok(coreflect_unchecked(a, i, h))
}

/// Bilinear pairing `<alpha, h> = sum_{i,j} n_j m_i a_ij`.
pub fn pairing(a: &GeneralizedCartanMatrix, alpha: &RootVector, h: &CorootVector) -> i64 {
    let l = a.rank();
    let mut s = 0;
    for i in 0..l {
        for j in 0..l {
            s += alpha.0[j] * h.0[i] * a.get(i, j);
        }
    }
    s
}

/// `(alpha, beta) = sum n_i m_j a_ij` for symmetric `A`.
pub fn invariant_form(a: &GeneralizedCartanMatrix, alpha: &RootVector, beta: &RootVector) -> Result<i64, RootError> {
    if !a.is_symmetric() {
        return Err(RootError::NotSymmetric);
    }
    check_shape(a, &alpha.0)?;
    check_shape(a, &beta.0)?;
    let l = a.rank();
    let mut s = 0;
    for i in 0..l {
        for j in 0..l {
            s += alpha.0[i] * beta.0[j] * a.get(i, j);
        }
    }
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootEntry {
    pub root: RootVector,
    pub coroot: CorootVector,
    /// `root = witness(alpha_base)`.
    pub witness: WeylWord,
    pub base: usize,
}

/// Every real root with `|height| <= horizon`, with coroots and witnesses.
#[derive(Debug, Clone)]
pub struct RootDatum {
    gcm: GeneralizedCartanMatrix,
    horizon: i64,
    entries: Vec<RootEntry>,
    index: HashMap<RootVector, usize>,
}

/// Enumerates real roots up to `horizon` with the default root cap.
pub fn enumerate_real_roots(a: &GeneralizedCartanMatrix, horizon: i64) -> Result<RootDatum, RootError> {
    RootDatum::enumerate(a, horizon, DEFAULT_ROOT_CAP)
}

impl RootDatum {
    /// Breadth-first closure of the simple roots under simple reflections,
    /// restricted to positive roots of height at most `horizon`; negative
    /// roots are added by negation.
    ///
    /// Restricting to the band loses nothing: a positive non-simple root
    /// `gamma` always has some `k` with `<gamma, alpha_k^vee> > 0`, so
    /// `w_k gamma` is a positive root of smaller height and every root is
    /// reached through an increasing-height chain.
    pub fn enumerate(a: &GeneralizedCartanMatrix, horizon: i64, cap: usize) -> Result<Self, RootError> {
        let l = a.rank();
        let horizon = horizon.max(1);
        let mut positives: Vec<RootEntry> = Vec::new();
        let mut index: HashMap<RootVector, usize> = HashMap::new();
        let mut queue = VecDeque::new();
        for i in 0..l {
            let root = RootVector::simple(l, i);
            index.insert(root.clone(), positives.len());
            queue.push_back(positives.len());
            positives.push(RootEntry {
                root,
                coroot: CorootVector::simple(l, i),
                witness: WeylWord::identity(),
                base: i,
            });
        }
        while let Some(pos) = queue.pop_front() {
            for i in 0..l {
                let parent = &positives[pos];
                let image = reflect_unchecked(a, i, &parent.root);
                if !image.is_positive() || image.height() > horizon || index.contains_key(&image) {
                    continue;
                }
                if 2 * (positives.len() + 1) > cap {
                    return Err(RootError::HorizonTooLarge { cap });
                }
                let entry = RootEntry {
                    coroot: coreflect_unchecked(a, i, &parent.coroot),
                    witness: parent.witness.prepend(i),
                    base: parent.base,
                    root: image,
                };
                index.insert(entry.root.clone(), positives.len());
                queue.push_back(positives.len());
                positives.push(entry);
            }
        }
        positives.sort_by(|x, y| (x.root.height(), &x.root).cmp(&(y.root.height(), &y.root)));
        let negatives: Vec<RootEntry> = positives
            .iter()
            .map(|e| RootEntry {
                root: e.root.neg(),
                coroot: e.coroot.neg(),
                // -alpha = w(-alpha_b) = w w_b (alpha_b)
                witness: e.witness.append(e.base),
                base: e.base,
            })
            .collect();
        let entries: Vec<RootEntry> = positives.into_iter().chain(negatives).collect();
        let index = entries.iter().enumerate().map(|(k, e)| (e.root.clone(), k)).collect();
        Ok(Self {
            gcm: a.clone(),
            horizon,
            entries,
            index,
        })
    }

    pub fn gcm(&self) -> &GeneralizedCartanMatrix {
        &self.gcm
    }

    pub fn rank(&self) -> usize {
        self.gcm.rank()
    }

    pub fn horizon(&self) -> i64 {
        self.horizon
    }

    pub fn entries(&self) -> &[RootEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Positive roots sorted by height, then lexicographically.
    pub fn positive_roots(&self) -> impl Iterator<Item = &RootVector> {
        self.entries.iter().map(|e| &e.root).filter(|r| r.is_positive())
    }

    pub fn roots(&self) -> impl Iterator<Item = &RootVector> {
        self.entries.iter().map(|e| &e.root)
    }

    pub fn contains(&self, alpha: &RootVector) -> bool {
        self.index.contains_key(alpha)
    }

    pub fn entry(&self, alpha: &RootVector) -> Result<&RootEntry, RootError> {
        self.index
            .get(alpha)
            .map(|&k| &self.entries[k])
            .ok_or_else(|| RootError::NotARealRoot(alpha.clone()))
    }

    pub fn coroot(&self, alpha: &RootVector) -> Result<&CorootVector, RootError> {
        Ok(&self.entry(alpha)?.coroot)
    }

    pub fn simple(&self, i: usize) -> RootVector {
        RootVector::simple(self.rank(), i)
    }

    /// `<alpha, beta^vee>` for stored roots.
    pub fn pair(&self, alpha: &RootVector, beta: &RootVector) -> Result<i64, RootError> {
        self.entry(alpha)?;
        Ok(pairing(&self.gcm, alpha, self.coroot(beta)?))
    }

    /// Whether `{alpha, beta}` is a prenilpotent pair.
    ///
    /// `alpha = -beta` never is and `alpha = beta` always is. Otherwise, with
    /// `p = <alpha, beta^vee>` and `q = <beta, alpha^vee>` (which share a sign):
    /// `p >= 0` or `pq <= 3` gives a finite cone, while `p <= -1` and
    /// `pq >= 4` puts the whole orbit of `alpha` under the rank-2 subgroup
    /// generated by the two reflections inside the open cone.
    pub fn is_prenilpotent(&self, alpha: &RootVector, beta: &RootVector) -> Result<bool, RootError> {
        let p = self.pair(alpha, beta)?;
        let q = self.pair(beta, alpha)?;
        if *alpha == beta.neg() {
            return Ok(false);
        }
        if alpha == beta {
            return Ok(true);
        }
        Ok(p >= 0 || p * q <= 3)
    }

    /// Real roots `m alpha + n beta` with `1 <= m, n <= bound`, ordered by
    /// height and then by `(m, n)`.
    pub fn cone_roots(
        &self,
        alpha: &RootVector,
        beta: &RootVector,
        bound: i64,
    ) -> Result<Vec<(i64, i64, RootVector)>, RootError> {
        check_shape(&self.gcm, &alpha.0)?;
        check_shape(&self.gcm, &beta.0)?;
        let mut out = Vec::new();
        for m in 1..=bound {
            for n in 1..=bound {
                let v = alpha.combine(m, beta, n);
                if v.height().abs() > self.horizon {
                    return Err(RootError::HorizonExceeded(v));
                }
                if self.contains(&v) {
                    out.push((m, n, v));
                }
            }
        }
        out.sort_by_key(|(m, n, v)| (v.height(), *m, *n));
        Ok(out)
    }

    /// Writes `gamma = w(beta)` with `w` in the parabolic subgroup `W_J` and
    /// `<beta, alpha_j^vee> <= 0` for every `j` in `J`.
    pub fn decompose_over_wj(&self, subset: &[usize], gamma: &RootVector) -> Result<(WeylWord, RootVector), RootError> {
        if let Some(&bad) = subset.iter().find(|&&j| j >= self.rank()) {
            return Err(RootError::IndexOutOfRange(bad));
        }
        self.entry(gamma)?;
        if !gamma.is_positive() {
            return Err(RootError::NotPositive);
        }
        if gamma.support().iter().all(|i| subset.contains(i)) {
            return Err(RootError::GammaInPhiJ);
        }
        let mut sorted = subset.to_vec();
        sorted.sort_unstable();
        let mut letters = Vec::new();
        let mut current = gamma.clone();
        while let Some(&j) = sorted.iter().find(|&&j| simple_coroot_pairing(&self.gcm, j, &current) > 0) {
            let next = reflect_unchecked(&self.gcm, j, &current);
            assert!(
                next.is_positive() && next.height() < current.height(),
                "descent inside W_J must stay positive and lower the height"
            );
            letters.push(j);
            current = next;
        }
        Ok((WeylWord(letters), current))
    }

    /// Finds `w`, simple indices `i < j` and a non-simple `alpha` in the rank-2
    /// subsystem on `{i, j}` with `w(alpha_i) > 0`, `w(alpha_j) > 0` and
    /// `w(alpha) = gamma`.
    pub fn rank2_reduce(&self, gamma: &RootVector) -> Result<Rank2Reduction, RootError> {
        self.entry(gamma)?;
        if !gamma.is_positive() {
            return Err(RootError::NotPositive);
        }
        if gamma.simple_index().is_some() {
            return Err(RootError::SimpleRoot);
        }
        Ok(self.reduce_rec(gamma))
    }

    fn reduce_rec(&self, gamma: &RootVector) -> Rank2Reduction {
        let a = &self.gcm;
        let support = gamma.support();
        if support.len() <= 2 {
            debug_assert_eq!(support.len(), 2, "non-simple real roots have support of size >= 2");
            return Rank2Reduction {
                word: WeylWord::identity(),
                i: support[0],
                j: support[1],
                alpha: gamma.clone(),
            };
        }
        let k = (0..a.rank())
            .find(|&k| simple_coroot_pairing(a, k, gamma) > 0)
            .expect("a positive real root pairs positively with some simple coroot");
        let lower = reflect_unchecked(a, k, gamma);
        let inner = self.reduce_rec(&lower);
        let word = inner.word.prepend(k);
        let l = a.rank();
        let positive_on = |w: &WeylWord, s: usize| w.apply_root(a, &RootVector::simple(l, s)).is_positive();
        if positive_on(&word, inner.i) && positive_on(&word, inner.j) {
            return Rank2Reduction { word, ..inner };
        }
        // w_k w alpha_s < 0 forces w alpha_s = alpha_k; then
        // gamma = w_k w alpha = w (w_s alpha).
        let alpha_k = RootVector::simple(l, k);
        let s = if inner.word.apply_root(a, &RootVector::simple(l, inner.i)) == alpha_k {
            inner.i
        } else {
            inner.j
        };
        let alpha = reflect_unchecked(a, s, &inner.alpha);
        Rank2Reduction {
            word: inner.word,
            i: inner.i,
            j: inner.j,
            alpha,
        }
    }

    /// A witness for `alpha` found by height descent, choosing among the valid
    /// descent indices with `choose`; the coroot obtained from it must match
    /// the stored one.
    pub fn witness_by_descent(
        &self,
        alpha: &RootVector,
        mut choose: impl FnMut(&[usize]) -> usize,
    ) -> Result<(WeylWord, usize), RootError> {
        self.entry(alpha)?;
        let a = &self.gcm;
        let negative = alpha.is_negative();
        let mut current = if negative { alpha.neg() } else { alpha.clone() };
        let mut letters = Vec::new();
        let base = loop {
            if let Some(b) = current.simple_index() {
                break b;
            }
            let options: Vec<usize> = (0..a.rank()).filter(|&k| simple_coroot_pairing(a, k, &current) > 0).collect();
            let k = options[choose(&options) % options.len()];
            current = reflect_unchecked(a, k, &current);
            letters.push(k);
        };
        let mut word = WeylWord(letters);
        if negative {
            word = word.append(base);
        }
        Ok((word, base))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rank2Reduction {
    pub word: WeylWord,
    pub i: usize,
    pub j: usize,
    pub alpha: RootVector,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gcm(rows: &[&[i64]]) -> GeneralizedCartanMatrix {
        GeneralizedCartanMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn rv(v: &[i64]) -> RootVector {
        RootVector(v.to_vec())
    }

    fn case1() -> GeneralizedCartanMatrix {
        gcm(&[&[2, -2], &[-2, 2]])
    }

    fn twisted() -> GeneralizedCartanMatrix {
        gcm(&[&[2, -4], &[-1, 2]])
    }

    fn a2() -> GeneralizedCartanMatrix {
        gcm(&[&[2, -1], &[-1, 2]])
    }

    #[test]
    fn reflection_examples() {
        assert_eq!(reflect(&case1(), 0, &rv(&[0, 1])).unwrap(), rv(&[2, 1]));
        for a in [case1(), twisted(), a2()] {
            for i in 0..2 {
                let s = RootVector::simple(2, i);
                assert_eq!(reflect(&a, i, &s).unwrap(), s.neg());
            }
        }
        assert_eq!(reflect(&twisted(), 1, &rv(&[1, 0])).unwrap(), rv(&[1, 1]));
        assert_eq!(reflect(&a2(), 2, &rv(&[1, 0])), Err(RootError::IndexOutOfRange(2)));
    }

    #[test]
    fn pairing_examples() {
        let c = twisted();
        assert_eq!(pairing(&c, &rv(&[0, 1]), &CorootVector::simple(2, 0)), -4);
        for i in 0..2 {
            assert_eq!(pairing(&c, &RootVector::simple(2, i), &CorootVector::simple(2, i)), 2);
        }
        let d = enumerate_real_roots(&case1(), 5).unwrap();
        assert_eq!(d.pair(&rv(&[2, 1]), &rv(&[2, 1])).unwrap(), 2);
    }

    #[test]
    fn enumeration_examples() {
        let pos = |a: &GeneralizedCartanMatrix, h| {
            let mut v: Vec<Vec<i64>> = enumerate_real_roots(a, h).unwrap().positive_roots().map(|r| r.0.clone()).collect();
            v.sort();
            v
        };
        assert_eq!(pos(&case1(), 3), vec![vec![0, 1], vec![1, 0], vec![1, 2], vec![2, 1]]);
        assert_eq!(
            pos(&twisted(), 5),
            vec![vec![0, 1], vec![1, 0], vec![1, 1], vec![3, 1], vec![3, 2], vec![4, 1]]
        );
        assert_eq!(pos(&a2(), 10), vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn enumeration_cap() {
        let a = gcm(&[&[2, -3], &[-3, 2]]);
        assert!(matches!(RootDatum::enumerate(&a, 1000, 4), Err(RootError::HorizonTooLarge { cap: 4 })));
    }

    #[test]
    fn coroot_examples() {
        let d = enumerate_real_roots(&case1(), 5).unwrap();
        assert_eq!(d.coroot(&rv(&[2, 1])).unwrap(), &CorootVector(vec![2, 1]));
        assert_eq!(d.coroot(&rv(&[1, 0])).unwrap(), &CorootVector(vec![1, 0]));
        assert_eq!(d.coroot(&rv(&[-2, -1])).unwrap(), &CorootVector(vec![-2, -1]));
        assert!(matches!(d.coroot(&rv(&[1, 1])), Err(RootError::NotARealRoot(_))));
        // twisted: coroots are not proportional to roots
        let t = enumerate_real_roots(&twisted(), 5).unwrap();
        assert_eq!(t.coroot(&rv(&[1, 1])).unwrap(), &CorootVector(vec![1, 4]));
    }

    #[test]
    fn stored_witnesses_reproduce_roots() {
        for a in [case1(), twisted(), a2(), gcm(&[&[2, -3], &[-3, 2]])] {
            let d = enumerate_real_roots(&a, 12).unwrap();
            for e in d.entries() {
                assert_eq!(e.witness.apply_root(&a, &RootVector::simple(2, e.base)), e.root);
                assert_eq!(e.witness.apply_coroot(&a, &CorootVector::simple(2, e.base)), e.coroot);
            }
        }
    }

    #[test]
    fn invariant_form_examples() {
        let c = case1();
        assert_eq!(invariant_form(&c, &rv(&[1, 0]), &rv(&[0, 1])), Ok(-2));
        assert_eq!(invariant_form(&c, &rv(&[2, 1]), &rv(&[2, 1])), Ok(2));
        assert_eq!(invariant_form(&a2(), &rv(&[1, 0]), &rv(&[1, 0])), Ok(2));
        assert_eq!(invariant_form(&twisted(), &rv(&[1, 0]), &rv(&[1, 0])), Err(RootError::NotSymmetric));
    }

    #[test]
    fn prenilpotent_examples() {
        let d = enumerate_real_roots(&case1(), 10).unwrap();
        assert_eq!(d.is_prenilpotent(&rv(&[1, 0]), &rv(&[0, -1])), Ok(true));
        assert_eq!(d.is_prenilpotent(&rv(&[1, 0]), &rv(&[0, 1])), Ok(false));
        assert_eq!(d.is_prenilpotent(&rv(&[1, 0]), &rv(&[-1, 0])), Ok(false));
        assert_eq!(d.is_prenilpotent(&rv(&[2, 1]), &rv(&[2, 1])), Ok(true));
        let a = enumerate_real_roots(&a2(), 10).unwrap();
        assert_eq!(a.is_prenilpotent(&rv(&[1, 0]), &rv(&[0, 1])), Ok(true));
        assert!(matches!(a.is_prenilpotent(&rv(&[2, 0]), &rv(&[0, 1])), Err(RootError::NotARealRoot(_))));
    }

    #[test]
    fn cone_examples() {
        let a = enumerate_real_roots(&a2(), 10).unwrap();
        assert_eq!(a.cone_roots(&rv(&[1, 0]), &rv(&[0, 1]), 5).unwrap(), vec![(1, 1, rv(&[1, 1]))]);
        let c = enumerate_real_roots(&case1(), 20).unwrap();
        assert!(c.cone_roots(&rv(&[1, 0]), &rv(&[0, -1]), 5).unwrap().is_empty());
        let t = enumerate_real_roots(&twisted(), 20).unwrap();
        assert_eq!(t.cone_roots(&rv(&[1, 0]), &rv(&[3, 1]), 3).unwrap(), vec![(1, 1, rv(&[4, 1]))]);
        assert!(matches!(
            t.cone_roots(&rv(&[1, 0]), &rv(&[3, 1]), 6),
            Err(RootError::HorizonExceeded(_))
        ));
    }

    #[test]
    fn decompose_examples() {
        let c = enumerate_real_roots(&case1(), 10).unwrap();
        assert_eq!(c.decompose_over_wj(&[0], &rv(&[0, 1])).unwrap(), (WeylWord::identity(), rv(&[0, 1])));
        assert_eq!(c.decompose_over_wj(&[0], &rv(&[2, 1])).unwrap(), (WeylWord(vec![0]), rv(&[0, 1])));
        let a = enumerate_real_roots(&a2(), 10).unwrap();
        assert_eq!(a.decompose_over_wj(&[1], &rv(&[1, 0])).unwrap(), (WeylWord::identity(), rv(&[1, 0])));
        assert_eq!(c.decompose_over_wj(&[0], &rv(&[1, 0])), Err(RootError::GammaInPhiJ));
        assert_eq!(c.decompose_over_wj(&[0], &rv(&[-2, -1])), Err(RootError::NotPositive));
    }

    #[test]
    fn rank2_reduce_examples() {
        let c = enumerate_real_roots(&case1(), 10).unwrap();
        assert_eq!(
            c.rank2_reduce(&rv(&[2, 1])).unwrap(),
            Rank2Reduction { word: WeylWord::identity(), i: 0, j: 1, alpha: rv(&[2, 1]) }
        );
        let affine_a2 = gcm(&[&[2, -1, -1], &[-1, 2, -1], &[-1, -1, 2]]);
        let d = enumerate_real_roots(&affine_a2, 10).unwrap();
        assert_eq!(
            d.rank2_reduce(&rv(&[2, 1, 1])).unwrap(),
            Rank2Reduction { word: WeylWord(vec![0]), i: 1, j: 2, alpha: rv(&[0, 1, 1]) }
        );
        assert_eq!(c.rank2_reduce(&rv(&[1, 0])), Err(RootError::SimpleRoot));
        assert_eq!(c.rank2_reduce(&rv(&[-2, -1])), Err(RootError::NotPositive));
    }
}
