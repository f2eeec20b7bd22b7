//! Steinberg-type relations of the realized root groups and torus.

use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;
use serde_json::json;

use super::{CaseTag, Rank2Error, RealizationCase};
use crate::ffield::{Fe, Field};
use crate::par;
use crate::report::Report;
use crate::roots::{enumerate_real_roots, RootVector};
use crate::tseries::SeriesMatrix;

/// Additivity `chi(u + v) = chi(u) chi(v)` for every realized positive root of
/// height at most `height`.
pub fn r1_check(case: &RealizationCase, height: i64) -> Result<Report, Rank2Error> {
    let start = Instant::now();
    let k = case.field();
    let ring = case.ring();
    let mut report = Report::new(
        "relations.r1",
        case.tag().name(),
        json!({ "q": k.q(), "trunc": case.trunc(), "height": height }),
    );
    let roots: Vec<RootVector> = case.positive_roots_below_trunc().into_iter().filter(|r| r.height() <= height).collect();
    let elems = k.elements();
    let results = par::map(&roots, |gamma| -> Result<Vec<serde_json::Value>, Rank2Error> {
        let mut bad = Vec::new();
        let images: Vec<SeriesMatrix> = elems.iter().map(|&u| case.realize(gamma, u)).collect::<Result<_, _>>()?;
        for (a, &u) in elems.iter().enumerate() {
            for (b, &v) in elems.iter().enumerate() {
                let sum = k.add(u, v);
                let c = elems.iter().position(|&x| x == sum).expect("field is closed");
                if ring.mul(&images[a], &images[b]) != images[c] {
                    bad.push(json!({ "root": gamma, "u": k.render(u), "v": k.render(v) }));
                }
            }
        }
        Ok(bad)
    });
    for r in results {
        for w in r? {
            report.fail_with(w);
        }
    }
    report.note(json!({ "roots_checked": roots.len() }));
    Ok(report.timed(start))
}

/// Conjugation by the torus: `h_i(u) chi_a(v) h_i(u)^-1 = chi_a(u^<a, a_i^vee> v)`.
pub fn r4_check(case: &RealizationCase, height: i64) -> Result<Report, Rank2Error> {
    let start = Instant::now();
    let k = case.field();
    let ring = case.ring();
    let a = case.tag().gcm();
    let mut report = Report::new(
        "relations.r4",
        case.tag().name(),
        json!({ "q": k.q(), "trunc": case.trunc(), "height": height }),
    );
    let roots: Vec<RootVector> = case.positive_roots_below_trunc().into_iter().filter(|r| r.height() <= height).collect();
    for gamma in &roots {
        for i in 0..2 {
            let e: i64 = (0..2).map(|j| gamma.0[j] * a.get(i, j)).sum();
            for u in k.nonzero_elements() {
                let h = case.torus(i, u)?;
                let scale = k.pow_signed(u, e)?;
                for v in k.elements() {
                    let lhs = ring.conjugate(&h, &case.realize(gamma, v)?)?;
                    if lhs != case.realize(gamma, k.mul(scale, v))? {
                        report.fail_with(json!({ "root": gamma, "i": i + 1, "u": k.render(u), "v": k.render(v) }));
                    }
                }
            }
        }
    }
    Ok(report.timed(start))
}

/// `h_i(uv) = h_i(u) h_i(v)`.
pub fn r6_check(case: &RealizationCase) -> Result<Report, Rank2Error> {
    let start = Instant::now();
    let k = case.field();
    let mut report = Report::new("relations.r6", case.tag().name(), json!({ "q": k.q() }));
    for i in 0..2 {
        for u in k.nonzero_elements() {
            for v in k.nonzero_elements() {
                let lhs = case.torus(i, k.mul(u, v))?;
                let rhs = case.ring().mul(&case.torus(i, u)?, &case.torus(i, v)?);
                if lhs != rhs {
                    report.fail_with(json!({ "i": i + 1, "u": k.render(u), "v": k.render(v) }));
                }
            }
        }
    }
    Ok(report.timed(start))
}

/// `chi_i(u) = [h_i(s), chi_i(u / (s^2 - 1))]` for every `s` in `k*` with `s^2 != 1`.
pub fn commutator_lemma_check(case: &RealizationCase) -> Result<Report, Rank2Error> {
    let start = Instant::now();
    let k = case.field();
    let ring = case.ring();
    let mut report = Report::new("relations.commutator_lemma", case.tag().name(), json!({ "q": k.q() }));
    let mut admissible = 0usize;
    for s in k.nonzero_elements() {
        let d = k.sub(k.mul(s, s), k.one());
        if d.is_zero() {
            continue;
        }
        admissible += 1;
        for i in 0..2 {
            let simple = RootVector::simple(2, i);
            let h = case.torus(i, s)?;
            for u in k.elements() {
                let rhs = ring.commutator(&h, &case.realize(&simple, k.div(u, d)?)?)?;
                if rhs != case.realize(&simple, u)? {
                    report.fail_with(json!({ "i": i + 1, "t": k.render(s), "u": k.render(u) }));
                }
            }
        }
    }
    report.note(json!({ "admissible_t": admissible }));
    Ok(report.timed(start))
}

/// Commutator constants of one prenilpotent pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct R2Outcome {
    /// Cone roots `m alpha + n beta` in product order, with `(m, n)`.
    pub cone: Vec<(i64, i64, RootVector)>,
    /// Integer constants `C_mn` in the same order, when they lift consistently.
    pub constants: Option<Vec<i64>>,
    /// Per-field constants as rendered field elements.
    pub per_field: Vec<(u64, Vec<serde_json::Value>)>,
}

/// Solves `[chi_a(u), chi_b(v)] = prod chi_{m a + n b}(C_mn u^m v^n)` over one
/// field; `None` if no constants work for all `u, v`.
fn solve_constants(
    tag: CaseTag,
    field: Arc<Field>,
    alpha: &RootVector,
    beta: &RootVector,
    cone: &[(i64, i64, RootVector)],
) -> Result<Option<Vec<Fe>>, Rank2Error> {
    let probe = RealizationCase::with_field(tag, field.clone(), 1)?;
    let mut top = probe.degree(alpha)? + probe.degree(beta)?;
    for (_, _, g) in cone {
        top = top.max(probe.degree(g)?);
    }
    // Entries of the commutator are polynomials in t of degree <= 4 top.
    let case = RealizationCase::with_field(tag, field, 4 * top + 1)?;
    let k = case.field();
    let ring = case.ring();
    let comm = |u: Fe, v: Fe| -> Result<SeriesMatrix, Rank2Error> {
        Ok(ring.commutator(&case.realize(alpha, u)?, &case.realize(beta, v)?)?)
    };
    let product = |cs: &[Fe], u: Fe, v: Fe| -> Result<SeriesMatrix, Rank2Error> {
        let mut acc = ring.identity();
        for ((m, n, g), &c) in cone.iter().zip(cs) {
            let x = k.mul(c, k.mul(k.pow(u, *m as u64), k.pow(v, *n as u64)));
            acc = ring.mul(&acc, &case.realize(g, x)?);
        }
        Ok(acc)
    };
    let one = k.one();
    let target = comm(one, one)?;
    let elems = k.elements();
    let mut candidate = vec![Fe::ZERO; cone.len()];
    let total = elems.len().pow(cone.len() as u32);
    for idx in 0..total {
        let mut rest = idx;
        for c in candidate.iter_mut() {
            *c = elems[rest % elems.len()];
            rest /= elems.len();
        }
        if product(&candidate, one, one)? != target {
            continue;
        }
        let mut ok = true;
        'all: for &u in &elems {
            for &v in &elems {
                if comm(u, v)? != product(&candidate, u, v)? {
                    ok = false;
                    break 'all;
                }
            }
        }
        if ok {
            return Ok(Some(candidate));
        }
    }
    Ok(None)
}

fn crt(residues: &[(i64, i64)]) -> (i64, i64) {
    residues.iter().fold((0i64, 1i64), |(r, m), &(a, p)| {
        // r + m x = a mod p
        let inv = (1..p).find(|x| (m % p) * x % p == 1).expect("moduli are coprime");
        let x = ((a - r) % p + p) % p * inv % p;
        (r + m * x, m * p)
    })
}

fn symmetric(r: i64, m: i64) -> i64 {
    let r = r.rem_euclid(m);
    if r > m / 2 {
        r - m
    } else {
        r
    }
}

/// Commutator relation for a prenilpotent pair of positive roots: solves the
/// constants over each field in `fields`, lifts them to integers through the
/// prime fields by CRT with a leave-one-out stability test, and checks the
/// lifted constants against every field.
pub fn r2_check(tag: CaseTag, alpha: &RootVector, beta: &RootVector, fields: &[u64]) -> Result<(Report, R2Outcome), Rank2Error> {
    let start = Instant::now();
    let horizon = 12 * (alpha.height() + beta.height()).max(1);
    let datum = enumerate_real_roots(&tag.gcm(), horizon)?;
    if !datum.is_prenilpotent(alpha, beta)? {
        return Err(Rank2Error::NotPrenilpotent);
    }
    let cone = datum.cone_roots(alpha, beta, 12)?;
    let mut report = Report::new(
        "relations.r2",
        tag.name(),
        json!({ "alpha": alpha, "beta": beta, "fields": fields, "cone": cone.iter().map(|c| &c.2).collect::<Vec<_>>() }),
    );
    let mut per_field = Vec::new();
    let mut solved: Vec<(Arc<Field>, Vec<Fe>)> = Vec::new();
    for &q in fields {
        let field = Arc::new(Field::of_order(q)?);
        match solve_constants(tag, field.clone(), alpha, beta, &cone)? {
            Some(cs) => {
                per_field.push((q, cs.iter().map(|&c| field.render(c)).collect()));
                solved.push((field, cs));
            }
            None => report.fail_with(json!({ "q": q, "no_constants": true })),
        }
    }
    let primes: Vec<&(Arc<Field>, Vec<Fe>)> = solved.iter().filter(|(f, _)| f.spec().m() == 1).collect();
    let mut constants = None;
    if report.passed() && !cone.is_empty() && primes.len() >= 2 {
        let mut lifted = Vec::new();
        let mut stable = true;
        for idx in 0..cone.len() {
            let res: Vec<(i64, i64)> = primes.iter().map(|(f, cs)| (cs[idx].code() as i64, f.p() as i64)).collect();
            let (r, m) = crt(&res);
            let c = symmetric(r, m);
            if res.len() >= 3 {
                for skip in 0..res.len() {
                    let sub: Vec<(i64, i64)> = res.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, x)| *x).collect();
                    let (r2, m2) = crt(&sub);
                    stable &= symmetric(r2, m2) == c;
                }
            }
            lifted.push(c);
        }
        for (f, cs) in &solved {
            for (idx, &c) in lifted.iter().enumerate() {
                stable &= f.from_int(c) == cs[idx];
            }
        }
        if stable {
            constants = Some(lifted);
        } else {
            report.fail_with(json!({ "unstable_lift": true }));
        }
    } else if cone.is_empty() {
        constants = Some(Vec::new());
    }
    report.note(json!({ "constants": constants, "per_field": per_field }));
    let outcome = R2Outcome {
        cone,
        constants,
        per_field,
    };
    Ok((report.timed(start), outcome))
}
