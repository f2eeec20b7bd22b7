//! Explicit realizations of three rank-2 positive unipotent groups as matrix
//! groups over `k[t]/(t^N)`:
//!
//! * `NonTwisted`: `A = [[2,-2],[-2,2]]` inside `SL_2`.
//! * `Twisted`: `A = [[2,-4],[-1,2]]` inside the special unitary group of the
//!   hermitian form `J = e13 - e22 + e31` with `sigma(t) = -t`.
//! * `FiniteA2`: upper unitriangular `3 x 3` matrices over `k`.
//!
//! Roots are written over the simple roots. In the twisted case the root
//! `c alpha_1 + n delta` with `delta = (2, 1)` has coordinates `(c + 2n, n)`
//! and `t`-degree `n`; in the non-twisted case the degree is the second
//! coordinate.

mod groups;
mod identities;
mod levels;
mod relations;

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ffield::{theorem_gate, Fe, Field, FieldError, FieldSpec, Requirement};
use crate::gcm::GeneralizedCartanMatrix;
use crate::pgroup::PGroupError;
use crate::roots::{RootError, RootVector};
use crate::tseries::{KMatrix, MatRing, SeriesError, SeriesMatrix, TruncatedSeries};

pub use groups::{
    density_check, enumerate_unitary_unitriangular, filtration_lemma_check, level_generation_check, quotient,
    quotient_generators, well_behaved_at_level,
};
pub use identities::{congruence_identity_check, IdentityId};
pub use levels::{ln_basis, span_check, LnBasis};
pub use relations::{commutator_lemma_check, r1_check, r2_check, r4_check, r6_check, R2Outcome};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Rank2Error {
    #[error(transparent)]
    Gate(FieldError),
    #[error("{0} is not a positive real root realized in this case")]
    NotAPositiveRealRoot(RootVector),
    #[error("level {n} out of range for truncation {trunc}")]
    LevelOutOfRange { n: usize, trunc: usize },
    #[error("{family:?}_{n} is not a generator family of this case")]
    BadGenerator { family: Family, n: usize },
    #[error("identity {id} needs index >= {min}, got {n}")]
    IndexOutOfRange { id: &'static str, min: usize, n: usize },
    #[error("roots are not a prenilpotent pair")]
    NotPrenilpotent,
    #[error("matrix is not in the realized group")]
    NotInGroup,
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    PGroup(#[from] PGroupError),
    #[error(transparent)]
    Roots(#[from] RootError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseTag {
    NonTwisted,
    Twisted,
    FiniteA2,
}

impl CaseTag {
    pub const ALL: [CaseTag; 3] = [CaseTag::NonTwisted, CaseTag::Twisted, CaseTag::FiniteA2];

    /// Short name used on the command line and in reports.
    pub fn name(self) -> &'static str {
        match self {
            CaseTag::NonTwisted => "case1",
            CaseTag::Twisted => "case2",
            CaseTag::FiniteA2 => "a2",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }

    pub fn gcm(self) -> GeneralizedCartanMatrix {
        let (rows, name) = match self {
            CaseTag::NonTwisted => (vec![vec![2, -2], vec![-2, 2]], "A1^(1)"),
            CaseTag::Twisted => (vec![vec![2, -4], vec![-1, 2]], "A2^(2)"),
            CaseTag::FiniteA2 => (vec![vec![2, -1], vec![-1, 2]], "A2"),
        };
        GeneralizedCartanMatrix::new(rows).expect("fixed matrices are valid").named(name)
    }

    pub fn dim(self) -> usize {
        match self {
            CaseTag::NonTwisted => 2,
            CaseTag::Twisted | CaseTag::FiniteA2 => 3,
        }
    }

    pub fn requirement(self) -> Requirement {
        match self {
            CaseTag::NonTwisted | CaseTag::Twisted => Requirement::Both,
            CaseTag::FiniteA2 => Requirement::QGt3,
        }
    }

    pub fn is_affine(self) -> bool {
        self != CaseTag::FiniteA2
    }
}

/// Generator families: `E1 = e^(1)`, `F1 = f^(1)`, `E2 = e^(2)`, `F2 = f^(2)`
/// and `H = h`. In the non-twisted case `E1`, `F1` denote `e_n`, `f_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    E1,
    F1,
    E2,
    F2,
    H,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GeneratorSpec {
    pub family: Family,
    pub n: usize,
}

/// A realization at a fixed field and truncation.
#[derive(Debug, Clone)]
pub struct RealizationCase {
    tag: CaseTag,
    ring: MatRing,
}

impl RealizationCase {
    /// Checks the theorem gate, then builds the ring. `FiniteA2` always uses
    /// truncation 1 since its realization is constant.
    pub fn new(tag: CaseTag, spec: &FieldSpec, trunc: usize) -> Result<Self, Rank2Error> {
        theorem_gate(spec, tag.requirement()).map_err(Rank2Error::Gate)?;
        let field = Arc::new(Field::new(spec.clone())?);
        Self::with_field(tag, field, trunc)
    }

    pub fn with_field(tag: CaseTag, field: Arc<Field>, trunc: usize) -> Result<Self, Rank2Error> {
        theorem_gate(field.spec(), tag.requirement()).map_err(Rank2Error::Gate)?;
        let trunc = if tag == CaseTag::FiniteA2 { 1 } else { trunc };
        Ok(Self {
            tag,
            ring: MatRing::new(field, tag.dim(), trunc)?,
        })
    }

    pub fn with_trunc(&self, trunc: usize) -> Self {
        Self::with_field(self.tag, self.ring.field_arc().clone(), trunc).expect("gate already passed")
    }

    pub fn tag(&self) -> CaseTag {
        self.tag
    }

    pub fn ring(&self) -> &MatRing {
        &self.ring
    }

    pub fn field(&self) -> &Field {
        self.ring.field()
    }

    pub fn trunc(&self) -> usize {
        self.ring.trunc()
    }

    /// `(c, n)` for a twisted root `c alpha_1 + n delta`.
    fn twisted_coords(gamma: &RootVector) -> (i64, i64) {
        let n = gamma.0[1];
        (gamma.0[0] - 2 * n, n)
    }

    pub fn is_positive_real_root(&self, gamma: &RootVector) -> bool {
        if gamma.0.len() != 2 || !gamma.is_positive() {
            return false;
        }
        let (a, b) = (gamma.0[0], gamma.0[1]);
        match self.tag {
            CaseTag::NonTwisted => (a - b).abs() == 1,
            CaseTag::Twisted => {
                let (c, n) = Self::twisted_coords(gamma);
                c.abs() == 1 || (c.abs() == 2 && n % 2 == 1)
            }
            CaseTag::FiniteA2 => a <= 1 && b <= 1,
        }
    }

    /// `t`-degree of the realized root group.
    pub fn degree(&self, gamma: &RootVector) -> Result<usize, Rank2Error> {
        if !self.is_positive_real_root(gamma) {
            return Err(Rank2Error::NotAPositiveRealRoot(gamma.clone()));
        }
        Ok(match self.tag {
            CaseTag::FiniteA2 => 0,
            _ => gamma.0[1] as usize,
        })
    }

    /// Positive real roots whose root groups survive modulo `t^N`.
    pub fn positive_roots_below_trunc(&self) -> Vec<RootVector> {
        let n_max = self.trunc() as i64;
        let mut out = Vec::new();
        match self.tag {
            CaseTag::NonTwisted => {
                for n in 0..n_max {
                    out.push(RootVector(vec![n + 1, n]));
                    if n >= 1 {
                        out.push(RootVector(vec![n - 1, n]));
                    }
                }
            }
            CaseTag::Twisted => {
                for n in 0..n_max {
                    for c in [1, -1, 2, -2] {
                        let g = RootVector(vec![c + 2 * n, n]);
                        if self.is_positive_real_root(&g) {
                            out.push(g);
                        }
                    }
                }
            }
            CaseTag::FiniteA2 => {
                out = vec![RootVector(vec![1, 0]), RootVector(vec![0, 1]), RootVector(vec![1, 1])];
            }
        }
        out.sort_by_key(|r| (r.height(), r.clone()));
        out
    }

    /// Constant matrix `E` with `chi_gamma(u) = exp(u E t^deg)`, and `deg`.
    fn root_matrix(&self, gamma: &RootVector) -> Result<(KMatrix, usize), Rank2Error> {
        let deg = self.degree(gamma)?;
        let k = self.field();
        let m = match self.tag {
            CaseTag::NonTwisted => {
                if gamma.0[0] == gamma.0[1] + 1 {
                    KMatrix::from_terms(k, 2, &[(0, 1, 1)])
                } else {
                    KMatrix::from_terms(k, 2, &[(1, 0, 1)])
                }
            }
            CaseTag::Twisted => {
                let (c, n) = Self::twisted_coords(gamma);
                let even = n % 2 == 0;
                let terms: &[(usize, usize, i64)] = match (c, even) {
                    (1, true) => &[(0, 1, 1), (1, 2, 1)],
                    (1, false) => &[(0, 1, 2), (1, 2, -2)],
                    (2, false) => &[(0, 2, 1)],
                    (-1, true) => &[(1, 0, 2), (2, 1, 2)],
                    (-1, false) => &[(1, 0, 1), (2, 1, -1)],
                    (-2, false) => &[(2, 0, 1)],
                    _ => return Err(Rank2Error::NotAPositiveRealRoot(gamma.clone())),
                };
                KMatrix::from_terms(k, 3, terms)
            }
            CaseTag::FiniteA2 => {
                let (i, j) = match (gamma.0[0], gamma.0[1]) {
                    (1, 0) => (0, 1),
                    (0, 1) => (1, 2),
                    _ => (0, 2),
                };
                KMatrix::from_terms(k, 3, &[(i, j, 1)])
            }
        };
        Ok((m, deg))
    }

    /// Image of `chi_gamma(u)`: `1 + uX + (uX)^2 / 2` with `X = E t^deg`.
    pub fn realize(&self, gamma: &RootVector, u: Fe) -> Result<SeriesMatrix, Rank2Error> {
        let (m, deg) = self.root_matrix(gamma)?;
        let x = self.ring.monomial(&m.scale(self.field(), u), deg as i64)?;
        match self.tag {
            CaseTag::Twisted => Ok(self.ring.exp_nilpotent2(&x)?),
            _ => Ok(self.ring.add(&self.ring.identity(), &x)),
        }
    }

    /// Root of a generator family member.
    pub fn family_root(&self, family: Family, n: usize) -> Result<RootVector, Rank2Error> {
        let bad = Err(Rank2Error::BadGenerator { family, n });
        let n = n as i64;
        let root = match (self.tag, family) {
            (CaseTag::NonTwisted, Family::E1) => vec![n + 1, n],
            (CaseTag::NonTwisted, Family::F1) if n >= 1 => vec![n - 1, n],
            (CaseTag::Twisted, Family::E1) => vec![1 + 2 * n, n],
            (CaseTag::Twisted, Family::F1) if n >= 1 => vec![2 * n - 1, n],
            (CaseTag::Twisted, Family::E2) if n % 2 == 1 => vec![2 + 2 * n, n],
            (CaseTag::Twisted, Family::F2) if n % 2 == 1 => vec![2 * n - 2, n],
            _ => return bad,
        };
        Ok(RootVector(root))
    }

    /// `e_n`, `f_n`, `h_n` and their twisted superscript variants.
    pub fn generator(&self, family: Family, n: usize, u: Fe) -> Result<SeriesMatrix, Rank2Error> {
        if family == Family::H {
            return self.h_element(n, u);
        }
        let root = self.family_root(family, n)?;
        self.realize(&root, u)
    }

    /// `h_n(u)`: `diag(1 + u t^n, (1 + u t^n)^-1)` in the non-twisted case,
    /// `[e_0^(1)(u), f_n^(1)(1)]` in the twisted case.
    pub fn h_element(&self, n: usize, u: Fe) -> Result<SeriesMatrix, Rank2Error> {
        if n == 0 || n >= self.trunc() {
            return Err(Rank2Error::LevelOutOfRange { n, trunc: self.trunc() });
        }
        let k = self.field();
        match self.tag {
            CaseTag::NonTwisted => {
                let mut c = vec![Fe::ZERO; n + 1];
                c[0] = k.one();
                c[n] = u;
                let s = self.ring.series(&c);
                let si = s.inv(k)?;
                Ok(self.ring.diagonal(&[s, si]))
            }
            CaseTag::Twisted => {
                let e0 = self.generator(Family::E1, 0, u)?;
                let fnn = self.generator(Family::F1, n, k.one())?;
                Ok(self.ring.commutator(&e0, &fnn)?)
            }
            CaseTag::FiniteA2 => Err(Rank2Error::BadGenerator { family: Family::H, n }),
        }
    }

    /// Families making up `Z_n`.
    pub fn z_families(&self, n: usize) -> Vec<Family> {
        use Family::*;
        match (self.tag, n) {
            (CaseTag::NonTwisted, 1) => vec![E1],
            (CaseTag::NonTwisted, _) => vec![E1, F1, H],
            (CaseTag::Twisted, 1) => vec![E2, E1, H, F1],
            (CaseTag::Twisted, n) if n % 2 == 0 => vec![E1, F1, H],
            (CaseTag::Twisted, _) => vec![E1, F1, H, E2, F2],
            (CaseTag::FiniteA2, _) => vec![],
        }
    }

    /// Elements of `Z_n` with `u` running over `values`.
    pub fn z_elements(&self, n: usize, values: &[Fe]) -> Result<Vec<SeriesMatrix>, Rank2Error> {
        let mut out = Vec::new();
        for fam in self.z_families(n) {
            for &u in values {
                out.push(self.generator(fam, n, u)?);
            }
        }
        Ok(out)
    }

    /// Torus element `h_i(u)` acting on `chi_alpha` by `u^<alpha, alpha_i^vee>`.
    pub fn torus(&self, i: usize, u: Fe) -> Result<SeriesMatrix, Rank2Error> {
        let k = self.field();
        let ui = k.inv(u)?;
        let one = k.one();
        let (u2, ui2) = (k.mul(u, u), k.mul(ui, ui));
        let diag: Vec<Fe> = match (self.tag, i) {
            (CaseTag::NonTwisted, 0) => vec![u, ui],
            (CaseTag::NonTwisted, 1) => vec![ui, u],
            (CaseTag::Twisted, 0) => vec![u2, one, ui2],
            (CaseTag::Twisted, 1) => vec![ui, one, u],
            (CaseTag::FiniteA2, 0) => vec![u, ui, one],
            (CaseTag::FiniteA2, 1) => vec![one, u, ui],
            _ => return Err(Rank2Error::Unsupported(format!("no simple root {i}"))),
        };
        let entries: Vec<TruncatedSeries> = diag.iter().map(|&d| self.ring.series(&[d])).collect();
        Ok(self.ring.diagonal(&entries))
    }

    /// Membership in `P_n`: the congruence level for `n >= 2`; at `n = 1`,
    /// `P_2 E_1` in the non-twisted case and level 1 with the `(3,1)` entry in
    /// `t^2 k[[t]]` in the twisted case.
    pub fn filtration_member(&self, g: &SeriesMatrix, n: usize) -> Result<bool, Rank2Error> {
        if n == 0 || n >= self.trunc() {
            return Err(Rank2Error::LevelOutOfRange { n, trunc: self.trunc() });
        }
        if !self.in_ambient_group(g)? {
            return Err(Rank2Error::NotInGroup);
        }
        let ring = &self.ring;
        if n >= 2 || self.tag == CaseTag::FiniteA2 {
            return Ok(ring.congruence_level(g, n)?);
        }
        if !ring.congruence_level(g, 1)? {
            return Ok(false);
        }
        Ok(match self.tag {
            CaseTag::NonTwisted => g.coeff(1, 0, 1).is_zero() && g.coeff(0, 0, 1).is_zero(),
            _ => g.coeff(2, 0, 1).is_zero(),
        })
    }

    /// Determinant one, unitary in the twisted case.
    pub fn in_ambient_group(&self, g: &SeriesMatrix) -> Result<bool, Rank2Error> {
        let ring = &self.ring;
        if g.dim() != ring.dim() || g.trunc() != ring.trunc() {
            return Ok(false);
        }
        if ring.det(g) != ring.series(&[self.field().one()]) {
            return Ok(false);
        }
        if self.tag == CaseTag::Twisted {
            return Ok(ring.is_unitary(g)?);
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tseries::Degree;

    fn case(tag: CaseTag, q: u64, n: usize) -> RealizationCase {
        RealizationCase::new(tag, &FieldSpec::from_order(q).unwrap(), n).unwrap()
    }

    fn rv(v: &[i64]) -> RootVector {
        RootVector(v.to_vec())
    }

    #[test]
    fn nontwisted_examples() {
        let c = case(CaseTag::NonTwisted, 5, 3);
        let k = c.field().clone();
        let u = k.from_int(3);
        let r = c.ring();
        assert_eq!(c.realize(&rv(&[1, 0]), u).unwrap(), r.elementary(0, 1, 0, u));
        assert_eq!(c.realize(&rv(&[1, 2]), u).unwrap(), r.elementary(1, 0, 2, u));
        assert!(r.is_identity(&c.realize(&rv(&[2, 1]), k.zero()).unwrap()));
        assert!(c.realize(&rv(&[1, 1]), u).is_err());
        assert!(c.realize(&rv(&[-1, 0]), u).is_err());
    }

    #[test]
    fn twisted_examples() {
        let c = case(CaseTag::Twisted, 5, 3);
        let k = c.field().clone();
        let r = c.ring();
        let u = k.from_int(2);
        let half_u2 = k.div(k.mul(u, u), k.from_int(2)).unwrap();
        let mut expect = r.identity();
        expect.set_coeff(0, 1, 0, u);
        expect.set_coeff(1, 2, 0, u);
        expect.set_coeff(0, 2, 0, half_u2);
        assert_eq!(c.realize(&rv(&[1, 0]), u).unwrap(), expect);
        assert_eq!(c.realize(&rv(&[0, 1]), u).unwrap(), r.elementary(2, 0, 1, u));
        assert_eq!(c.realize(&rv(&[4, 1]), u).unwrap(), r.elementary(0, 2, 1, u));
        assert!(c.realize(&rv(&[2, 1]), u).is_err());
        assert!(c.realize(&rv(&[6, 2]), u).is_err());
    }

    #[test]
    fn twisted_images_are_unitary_unitriangular() {
        let c = case(CaseTag::Twisted, 7, 6);
        let k = c.field().clone();
        for g in c.positive_roots_below_trunc() {
            for u in k.elements() {
                let m = c.realize(&g, u).unwrap();
                assert!(c.in_ambient_group(&m).unwrap(), "{g}");
                assert!(c.ring().is_unitriangular_mod_t(&m));
            }
        }
    }

    #[test]
    fn h_element_examples() {
        let c = case(CaseTag::NonTwisted, 5, 3);
        let k = c.field().clone();
        let h = c.h_element(1, k.one()).unwrap();
        let r = c.ring();
        let one = k.one();
        let expect = r.diagonal(&[r.series(&[one, one]), r.series(&[one, k.from_int(-1), one])]);
        assert_eq!(h, expect);

        // Exact leading coefficient: Ad(exp(uX)) Y - Y, which is u[X, Y] to first order.
        let t = case(CaseTag::Twisted, 7, 4);
        let k = t.field().clone();
        for uu in 1..7 {
            let u = k.from_int(uu);
            let dl = t.ring().degree_lc(&t.h_element(1, u).unwrap()).unwrap();
            assert_eq!(dl.degree, Degree::Finite(1));
            let half = k.div(k.from_int(uu * uu), k.from_int(2)).unwrap();
            let mut expect = KMatrix::from_terms(&k, 3, &[(0, 0, uu), (1, 1, -2 * uu), (2, 2, uu), (0, 2, uu * uu * uu)]);
            expect = expect.add(&k, &KMatrix::from_terms(&k, 3, &[(0, 1, -3), (1, 2, 3)]).scale(&k, half));
            assert_eq!(dl.lc, expect);
            let dl2 = t.ring().degree_lc(&t.h_element(2, u).unwrap()).unwrap();
            assert_eq!(dl2.degree, Degree::Finite(2));
            let expect2 = KMatrix::from_terms(&k, 3, &[(0, 0, 2 * uu), (2, 2, -2 * uu), (0, 1, -uu * uu), (1, 2, -uu * uu)]);
            assert_eq!(dl2.lc, expect2);
        }
        assert!(c.h_element(0, one).is_err());
    }

    #[test]
    fn filtration_examples() {
        let t = case(CaseTag::Twisted, 5, 3);
        let k = t.field().clone();
        let u = k.from_int(2);
        assert!(!t.filtration_member(&t.realize(&rv(&[0, 1]), u).unwrap(), 1).unwrap());
        assert!(t.filtration_member(&t.realize(&rv(&[4, 1]), u).unwrap(), 1).unwrap());
        let c = case(CaseTag::NonTwisted, 5, 3);
        let e1 = c.generator(Family::E1, 1, u).unwrap();
        assert!(c.filtration_member(&e1, 1).unwrap());
        assert!(!c.filtration_member(&c.generator(Family::F1, 1, u).unwrap(), 1).unwrap());
        assert!(!c.filtration_member(&e1, 2).unwrap());
        let bad = c.ring().one_plus_terms(&[(0, 1, 1, 1), (1, 0, 1, 1)]);
        assert_eq!(c.filtration_member(&bad, 1), Err(Rank2Error::NotInGroup));
    }

    #[test]
    fn gates() {
        let spec = FieldSpec::from_order(3).unwrap();
        assert!(matches!(RealizationCase::new(CaseTag::NonTwisted, &spec, 3), Err(Rank2Error::Gate(_))));
        let spec4 = FieldSpec::from_order(4).unwrap();
        assert!(matches!(RealizationCase::new(CaseTag::Twisted, &spec4, 3), Err(Rank2Error::Gate(_))));
        assert!(RealizationCase::new(CaseTag::FiniteA2, &spec4, 3).is_ok());
    }

    #[test]
    fn torus_scales_root_groups() {
        for tag in CaseTag::ALL {
            let c = case(tag, 7, 4);
            let k = c.field().clone();
            let a = tag.gcm();
            let u = k.from_int(3);
            let v = k.from_int(5);
            for gamma in c.positive_roots_below_trunc() {
                for i in 0..2 {
                    let e: i64 = (0..2).map(|j| gamma.0[j] * a.get(i, j)).sum();
                    let h = c.torus(i, u).unwrap();
                    let lhs = c.ring().conjugate(&h, &c.realize(&gamma, v).unwrap()).unwrap();
                    let rhs = c.realize(&gamma, k.mul(k.pow_signed(u, e).unwrap(), v)).unwrap();
                    assert_eq!(lhs, rhs, "{tag:?} {gamma} {i}");
                }
            }
        }
    }
}
