//! Level spaces `L_n` and the leading-coefficient span criterion.

use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;
use serde_json::json;

use super::{CaseTag, Rank2Error, RealizationCase};
use crate::ffield::{Fe, Field};
use crate::linalg;
use crate::report::Report;
use crate::tseries::{Degree, KMatrix};

/// Basis of the level-`n` Lie-algebra quotient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LnBasis {
    pub n: usize,
    #[serde(skip)]
    pub vectors: Vec<KMatrix>,
}

impl LnBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }
}

/// `{g in M_3(k) : g^T J = (-1)^(n+1) J g, tr g = 0}`, with `g_31 = 0` at `n = 1`.
pub fn ln_basis(k: &Field, n: usize) -> Result<LnBasis, Rank2Error> {
    if n == 0 {
        return Err(Rank2Error::LevelOutOfRange { n, trunc: 0 });
    }
    let j = KMatrix::from_rows(k, &[&[0, 0, 1], &[0, -1, 0], &[1, 0, 0]]);
    let s = if n % 2 == 1 { k.one() } else { k.neg(k.one()) };
    // Column (a, b) of the constraint matrix is the image of e_ab.
    let mut columns: Vec<Vec<Fe>> = Vec::with_capacity(9);
    for a in 0..3 {
        for b in 0..3 {
            let mut e = KMatrix::zero(3);
            e.set(a, b, k.one());
            let lhs = e.transpose().mul(k, &j);
            let rhs = j.mul(k, &e).scale(k, s);
            let mut col: Vec<Fe> = lhs.as_slice().iter().zip(rhs.as_slice()).map(|(&x, &y)| k.sub(x, y)).collect();
            col.push(if a == b { k.one() } else { k.zero() });
            if n == 1 {
                col.push(if (a, b) == (2, 0) { k.one() } else { k.zero() });
            }
            columns.push(col);
        }
    }
    let rows: Vec<Vec<Fe>> = (0..columns[0].len()).map(|r| columns.iter().map(|c| c[r]).collect()).collect();
    let vectors = linalg::nullspace(k, &rows, 9).into_iter().map(|v| KMatrix::from_vec(3, v)).collect();
    Ok(LnBasis { n, vectors })
}

/// `e12` at level 1 and `sl_2` from level 2 on, in the non-twisted case.
fn nontwisted_level_space(k: &Field, n: usize) -> Vec<KMatrix> {
    if n == 1 {
        return vec![KMatrix::from_terms(k, 2, &[(0, 1, 1)])];
    }
    vec![
        KMatrix::from_terms(k, 2, &[(0, 1, 1)]),
        KMatrix::from_terms(k, 2, &[(1, 0, 1)]),
        KMatrix::from_terms(k, 2, &[(0, 0, 1), (1, 1, -1)]),
    ]
}

pub(super) fn level_space(tag: CaseTag, k: &Field, n: usize) -> Result<Vec<KMatrix>, Rank2Error> {
    match tag {
        CaseTag::NonTwisted => Ok(nontwisted_level_space(k, n)),
        CaseTag::Twisted => Ok(ln_basis(k, n)?.vectors),
        CaseTag::FiniteA2 => Err(Rank2Error::Unsupported("the finite case has no filtration".into())),
    }
}

/// Checks that the leading coefficients of `Z_n` have degree `n` and span the
/// level space.
pub fn span_check(tag: CaseTag, field: Arc<Field>, n: usize) -> Result<Report, Rank2Error> {
    let start = Instant::now();
    if n == 0 {
        return Err(Rank2Error::LevelOutOfRange { n, trunc: n + 2 });
    }
    let case = RealizationCase::with_field(tag, field, n + 2)?;
    let k = case.field();
    let mut report = Report::new("span", tag.name(), json!({ "q": k.q(), "n": n, "trunc": n + 2 }));
    let basis = level_space(tag, k, n)?;
    let nonzero = k.nonzero_elements();
    let mut lcs: Vec<Vec<Fe>> = Vec::new();
    for g in case.z_elements(n, &nonzero)? {
        let dl = case.ring().degree_lc(&g)?;
        if dl.degree != Degree::Finite(n) {
            report.fail_with(json!({ "wrong_degree": dl.degree, "element": case.ring().render(&g) }));
            continue;
        }
        lcs.push(dl.lc.as_slice().to_vec());
    }
    let rank = linalg::rank(k, &lcs);
    let mut all = lcs.clone();
    all.extend(basis.iter().map(|b| b.as_slice().to_vec()));
    let joint = linalg::rank(k, &all);
    let dim = basis.len();
    report.note(json!({ "n": n, "rank": rank, "dimension": dim }));
    if rank != dim || joint != dim {
        report.fail_with(json!({
            "span_deficient": n,
            "missing_dimension": dim - rank.min(dim),
            "outside_level_space": joint - dim,
        }));
    }
    Ok(report.timed(start))
}
