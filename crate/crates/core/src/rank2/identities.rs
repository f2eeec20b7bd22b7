//! The congruences that generate each filtration level from lower ones.
//!
//! Every identity has the shape `target_d(u) = [a, b(u)] mod t^(d+1)` where
//! `d` is the target's `t`-degree, and is checked exactly at `N = d + 2`.

use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{CaseTag, Family, Rank2Error, RealizationCase};
use crate::ffield::{Fe, Field};
use crate::par;
use crate::report::Report;
use crate::tseries::SeriesMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IdentityId {
    /// `e_n(u) = [h_1(1), e_{n-1}(u/2)]`
    #[serde(rename = "e-step")]
    EStep,
    /// `f_n(u) = [h_1(1), f_{n-1}(-u/2)]`
    #[serde(rename = "f-step")]
    FStep,
    /// `h_n(u) = [e_1(1), f_{n-1}(u)]`
    #[serde(rename = "h-step")]
    HStep,
    /// `e^(1)_{2n}(u) = [e^(2)_1(1), f^(1)_{2n-1}(-u)]`
    #[serde(rename = "e1-even")]
    E1Even,
    /// `e^(1)_{2n+1}(u) = [e^(2)_1(1), f^(1)_{2n}(u)]`
    #[serde(rename = "e1-odd")]
    E1Odd,
    /// `f^(1)_{2n}(u) = [f^(2)_1(1), e^(1)_{2n-1}(u)]`
    #[serde(rename = "f1-even")]
    F1Even,
    /// `f^(1)_{2n+1}(u) = [f^(2)_1(1), e^(1)_{2n}(-u)]`
    #[serde(rename = "f1-odd")]
    F1Odd,
    /// `e^(2)_{2n+1}(u) = [e^(1)_0(1), e^(1)_{2n+1}(-u/4)]`
    #[serde(rename = "e2-odd")]
    E2Odd,
    /// `f^(2)_{2n+1}(u) = [f^(1)_1(1), f^(1)_{2n}(-u/4)]`
    #[serde(rename = "f2-odd")]
    F2Odd,
}

impl IdentityId {
    pub const ALL: [IdentityId; 9] = [
        IdentityId::EStep,
        IdentityId::FStep,
        IdentityId::HStep,
        IdentityId::E1Even,
        IdentityId::E1Odd,
        IdentityId::F1Even,
        IdentityId::F1Odd,
        IdentityId::E2Odd,
        IdentityId::F2Odd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityId::EStep => "e-step",
            IdentityId::FStep => "f-step",
            IdentityId::HStep => "h-step",
            IdentityId::E1Even => "e1-even",
            IdentityId::E1Odd => "e1-odd",
            IdentityId::F1Even => "f1-even",
            IdentityId::F1Odd => "f1-odd",
            IdentityId::E2Odd => "e2-odd",
            IdentityId::F2Odd => "f2-odd",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|i| i.name() == s)
    }

    pub fn case(self) -> CaseTag {
        match self {
            IdentityId::EStep | IdentityId::FStep | IdentityId::HStep => CaseTag::NonTwisted,
            _ => CaseTag::Twisted,
        }
    }

    pub fn for_case(tag: CaseTag) -> Vec<IdentityId> {
        Self::ALL.into_iter().filter(|i| i.case() == tag).collect()
    }

    /// Smallest admissible index `n`.
    pub fn min_index(self) -> usize {
        match self {
            IdentityId::FStep | IdentityId::HStep => 2,
            IdentityId::E2Odd => 0,
            _ => 1,
        }
    }

    /// `t`-degree of the target element.
    pub fn target_degree(self, n: usize) -> usize {
        match self {
            IdentityId::EStep | IdentityId::FStep | IdentityId::HStep => n,
            IdentityId::E1Even | IdentityId::F1Even => 2 * n,
            _ => 2 * n + 1,
        }
    }

    /// `(target(u), commutator)` evaluated in `case`.
    fn sides(self, case: &RealizationCase, n: usize, u: Fe) -> Result<(SeriesMatrix, SeriesMatrix), Rank2Error> {
        use Family::*;
        let k = case.field();
        let one = k.one();
        let half = k.div(u, k.from_int(2))?;
        let quarter = k.div(u, k.from_int(4))?;
        let g = |f: Family, m: usize, x: Fe| case.generator(f, m, x);
        let (target, a, b) = match self {
            IdentityId::EStep => (g(E1, n, u)?, g(H, 1, one)?, g(E1, n - 1, half)?),
            IdentityId::FStep => (g(F1, n, u)?, g(H, 1, one)?, g(F1, n - 1, k.neg(half))?),
            IdentityId::HStep => (g(H, n, u)?, g(E1, 1, one)?, g(F1, n - 1, u)?),
            IdentityId::E1Even => (g(E1, 2 * n, u)?, g(E2, 1, one)?, g(F1, 2 * n - 1, k.neg(u))?),
            IdentityId::E1Odd => (g(E1, 2 * n + 1, u)?, g(E2, 1, one)?, g(F1, 2 * n, u)?),
            IdentityId::F1Even => (g(F1, 2 * n, u)?, g(F2, 1, one)?, g(E1, 2 * n - 1, u)?),
            IdentityId::F1Odd => (g(F1, 2 * n + 1, u)?, g(F2, 1, one)?, g(E1, 2 * n, k.neg(u))?),
            IdentityId::E2Odd => (g(E2, 2 * n + 1, u)?, g(E1, 0, one)?, g(E1, 2 * n + 1, k.neg(quarter))?),
            IdentityId::F2Odd => (g(F2, 2 * n + 1, u)?, g(F1, 1, one)?, g(F1, 2 * n, k.neg(quarter))?),
        };
        Ok((target, case.ring().commutator(&a, &b)?))
    }
}

/// Checks one identity at index `n` for every `u` in `k`.
pub fn congruence_identity_check(id: IdentityId, field: Arc<Field>, n: usize) -> Result<Report, Rank2Error> {
    let start = Instant::now();
    if n < id.min_index() {
        return Err(Rank2Error::IndexOutOfRange {
            id: id.name(),
            min: id.min_index(),
            n,
        });
    }
    let d = id.target_degree(n);
    let case = RealizationCase::with_field(id.case(), field, d + 2)?;
    let ring = case.ring();
    let mut report = Report::new(
        "congruence",
        id.case().name(),
        json!({ "identity": id.name(), "n": n, "degree": d, "q": case.field().q(), "trunc": d + 2 }),
    );
    let values = case.field().elements();
    let outcomes = par::map(&values, |&u| -> Result<Option<serde_json::Value>, Rank2Error> {
        let (target, rhs) = id.sides(&case, n, u)?;
        let quotient = ring.mul(&ring.inv(&target)?, &rhs);
        if ring.congruence_level(&quotient, d + 1)? {
            return Ok(None);
        }
        Ok(Some(json!({
            "identity": id.name(),
            "n": n,
            "u": case.field().render(u),
            "residual": ring.render(&quotient),
        })))
    });
    for o in outcomes {
        if let Some(w) = o? {
            report.fail_with(w);
        }
    }
    Ok(report.timed(start))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;

    fn f(q: u64) -> Arc<Field> {
        Arc::new(Field::of_order(q).unwrap())
    }

    #[test]
    fn spec_examples() {
        assert_eq!(congruence_identity_check(IdentityId::EStep, f(5), 1).unwrap().status, Status::Pass);
        assert_eq!(congruence_identity_check(IdentityId::E1Even, f(5), 1).unwrap().status, Status::Pass);
        assert_eq!(congruence_identity_check(IdentityId::HStep, f(7), 2).unwrap().status, Status::Pass);
    }

    #[test]
    fn index_floor() {
        assert!(matches!(
            congruence_identity_check(IdentityId::FStep, f(5), 1),
            Err(Rank2Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn e_step_by_hand() {
        // [h_1(1), e_0(u/2)] = e_0((u/2)((1+t)^2 - 1)) = 1 + u t e12 + (u/2) t^2 e12.
        let case = RealizationCase::with_field(CaseTag::NonTwisted, f(5), 3).unwrap();
        let k = case.field().clone();
        let u = k.from_int(3);
        let (_, rhs) = IdentityId::EStep.sides(&case, 1, u).unwrap();
        let mut expect = case.ring().identity();
        expect.set_coeff(0, 1, 1, u);
        expect.set_coeff(0, 1, 2, k.div(u, k.from_int(2)).unwrap());
        assert_eq!(rhs, expect);
    }

    #[test]
    fn names_round_trip() {
        for id in IdentityId::ALL {
            assert_eq!(IdentityId::from_name(id.name()), Some(id));
            assert_eq!(serde_json::to_value(id).unwrap(), id.name());
        }
        assert_eq!(IdentityId::for_case(CaseTag::Twisted).len(), 6);
    }
}
