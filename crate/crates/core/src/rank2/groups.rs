//! Finite quotients of the realized groups and the group-level checks run on
//! them.

use std::time::Instant;

use serde_json::json;

use super::{levels, CaseTag, Rank2Error, RealizationCase};
use crate::ffield::Fe;
use crate::linalg;
use crate::par;
use crate::pgroup::{self, Codec, FiniteMatrixGroup};
use crate::report::Report;
use crate::tseries::{MatRing, SeriesMatrix};

/// `chi_gamma(u)` for every positive root surviving mod `t^N` and every `u`
/// in the prime basis of `k`.
pub fn quotient_generators(case: &RealizationCase) -> Result<Vec<SeriesMatrix>, Rank2Error> {
    let basis = case.field().prime_basis();
    let mut out = Vec::new();
    for gamma in case.positive_roots_below_trunc() {
        for &u in &basis {
            out.push(case.realize(&gamma, u)?);
        }
    }
    Ok(out)
}

/// Image of the positive unipotent group modulo `t^N`.
pub fn quotient(case: &RealizationCase, cap: usize) -> Result<FiniteMatrixGroup, Rank2Error> {
    Ok(pgroup::closure(case.ring(), &quotient_generators(case)?, cap)?)
}

/// Checks that every non-simple positive root group of height at most
/// `height` lies in the derived subgroup of the quotient.
pub fn well_behaved_at_level(case: &RealizationCase, height: i64, cap: usize) -> Result<Report, Rank2Error> {
    let start = Instant::now();
    let k = case.field();
    let mut report = Report::new(
        "wellbehaved",
        case.tag().name(),
        json!({ "q": k.q(), "trunc": case.trunc(), "height": height, "cap": cap }),
    );
    let q = quotient(case, cap)?;
    let derived = pgroup::derived_subgroup(&q, cap)?;
    let targets: Vec<_> = case
        .positive_roots_below_trunc()
        .into_iter()
        .filter(|g| g.height() <= height && g.simple_index().is_none())
        .collect();
    for gamma in &targets {
        for u in k.elements() {
            if !derived.contains(&case.realize(gamma, u)?) {
                report.fail_with(json!({ "root": gamma, "u": k.render(u) }));
            }
        }
    }
    report.note(json!({
        "quotient_order": q.order(),
        "derived_order": derived.order(),
        "roots_checked": targets,
    }));
    Ok(report.timed(start))
}

/// Level-`k` coefficients of `J g* J g - 1` and `det g - 1`.
fn defect(ring: &MatRing, j: &SeriesMatrix, g: &SeriesMatrix, level: usize) -> Vec<Fe> {
    let k = ring.field();
    let u = ring.mul(&ring.mul(&ring.mul(j, &ring.sigma_star(g)), j), g);
    let id = ring.identity();
    let mut out: Vec<Fe> = Vec::with_capacity(10);
    for a in 0..3 {
        for b in 0..3 {
            out.push(k.sub(u.coeff(a, b, level), id.coeff(a, b, level)));
        }
    }
    let det = ring.det(g);
    out.push(if level == 0 { k.sub(det.coeff(0), k.one()) } else { det.coeff(level) });
    out
}

/// All `g mod t^N` with determinant 1, unitary, and upper unitriangular mod
/// `t`, as sorted codes. Enumerates constant unitriangular candidates, then
/// lifts one `t`-degree at a time: at degree `k` the conditions on the new
/// coefficient `X` are affine over `k`, so each lift set is an affine space.
pub fn enumerate_unitary_unitriangular(ring: &MatRing, cap: usize) -> Result<Vec<u128>, Rank2Error> {
    if ring.dim() != 3 || ring.field().p() == 2 {
        return Err(Rank2Error::Unsupported("needs 3x3 matrices in odd characteristic".into()));
    }
    let k = ring.field();
    let j = ring.j_matrix()?;
    let mut level: Vec<SeriesMatrix> = Vec::new();
    for a in k.elements() {
        for b in k.elements() {
            for c in k.elements() {
                let mut g = ring.identity();
                g.set_coeff(0, 1, 0, a);
                g.set_coeff(1, 2, 0, b);
                g.set_coeff(0, 2, 0, c);
                if defect(ring, &j, &g, 0).iter().all(|x| x.is_zero()) {
                    level.push(g);
                }
            }
        }
    }
    for deg in 1..ring.trunc() {
        let lifted = par::map(&level, |g| -> Vec<SeriesMatrix> {
            let base = defect(ring, &j, g, deg);
            let mut columns = Vec::with_capacity(9);
            for a in 0..3 {
                for b in 0..3 {
                    let mut h = g.clone();
                    h.set_coeff(a, b, deg, k.add(h.coeff(a, b, deg), k.one()));
                    let d = defect(ring, &j, &h, deg);
                    columns.push(d.iter().zip(&base).map(|(&x, &y)| k.sub(x, y)).collect::<Vec<Fe>>());
                }
            }
            let rows: Vec<Vec<Fe>> = (0..base.len()).map(|r| columns.iter().map(|c| c[r]).collect()).collect();
            let rhs: Vec<Fe> = base.iter().map(|&x| k.neg(x)).collect();
            let Some((x0, basis)) = linalg::solve(k, &rows, &rhs) else {
                return Vec::new();
            };
            linalg::affine_points(k, &x0, &basis)
                .into_iter()
                .map(|x| {
                    let mut h = g.clone();
                    for a in 0..3 {
                        for b in 0..3 {
                            h.set_coeff(a, b, deg, k.add(h.coeff(a, b, deg), x[a * 3 + b]));
                        }
                    }
                    h
                })
                .collect()
        });
        level = lifted.into_iter().flatten().collect();
        if level.len() > cap {
            return Err(pgroup::PGroupError::ClosureCapExceeded { cap }.into());
        }
    }
    let one = ring.series(&[k.one()]);
    let valid = par::all(&level, |g| {
        ring.det(g) == one && ring.is_unitary(g).unwrap_or(false) && ring.is_unitriangular_mod_t(g)
    });
    if !valid {
        return Err(Rank2Error::NotInGroup);
    }
    let codec = Codec::for_ring(ring)?;
    let mut codes: Vec<u128> = level.iter().map(|g| codec.encode(g)).collect();
    codes.sort_unstable();
    codes.dedup();
    Ok(codes)
}

/// Compares the closure of the twisted generator images with the
/// predicate-defined unitary unitriangular group modulo `t^N`.
pub fn density_check(case: &RealizationCase, cap: usize) -> Result<Report, Rank2Error> {
    let start = Instant::now();
    if case.tag() != CaseTag::Twisted {
        return Err(Rank2Error::Unsupported("density is defined for the twisted case".into()));
    }
    let k = case.field();
    let mut report = Report::new("density", case.tag().name(), json!({ "q": k.q(), "trunc": case.trunc(), "cap": cap }));
    let closure = quotient(case, cap)?;
    let predicate = enumerate_unitary_unitriangular(case.ring(), cap)?;
    report.note(json!({ "closure_order": closure.order(), "predicate_order": predicate.len() }));
    if closure.codes() != predicate.as_slice() {
        let missing = predicate.iter().find(|c| !closure.contains_code(**c));
        let extra = closure.codes().iter().find(|c| predicate.binary_search(c).is_err());
        let render = |c: Option<&u128>| c.map(|&c| case.ring().render(&closure.codec().decode(case.ring(), c)));
        report.fail_with(json!({ "not_reached": render(missing), "outside_predicate": render(extra) }));
    }
    Ok(report.timed(start))
}

/// Brute-force counterpart of the span criterion at level `n`: whether
/// `Z_n` together with `P_{n+1}` generates `P_n` inside the quotient.
pub fn level_generation_check(case: &RealizationCase, n: usize, cap: usize) -> Result<(bool, bool), Rank2Error> {
    if n == 0 || n >= case.trunc() {
        return Err(Rank2Error::LevelOutOfRange { n, trunc: case.trunc() });
    }
    let q = quotient(case, cap)?;
    let pn = q.filter_subgroup(|g| case.filtration_member(g, n).unwrap_or(false));
    let below = q.filter_subgroup(|g| case.filtration_member(g, n + 1).unwrap_or(false));
    let mut generated = pgroup::closure(case.ring(), below.generators(), cap)?;
    for z in case.z_elements(n, &case.field().prime_basis())? {
        generated = generated.add_generator(&z, cap)?;
    }
    let by_groups = generated.codes() == pn.codes();
    let k = case.field();
    let basis = levels::level_space(case.tag(), k, n)?;
    let lcs: Vec<Vec<Fe>> = case
        .z_elements(n, &k.prime_basis())?
        .iter()
        .map(|g| Ok(case.ring().degree_lc(g)?.lc.as_slice().to_vec()))
        .collect::<Result<_, Rank2Error>>()?;
    let by_span = linalg::rank(k, &lcs) == basis.len();
    Ok((by_groups, by_span))
}

/// Runs the filtration lemma on the quotient with `K` its derived subgroup,
/// levels `P_1 > ... > P_{N-1}` and `Z_n` as level generators.
pub fn filtration_lemma_check(case: &RealizationCase, cap: usize) -> Result<Report, Rank2Error> {
    let start = Instant::now();
    if !case.tag().is_affine() {
        return Err(Rank2Error::Unsupported("the finite case has no filtration".into()));
    }
    let k = case.field();
    let mut report = Report::new("filtration", case.tag().name(), json!({ "q": k.q(), "trunc": case.trunc() }));
    let q = quotient(case, cap)?;
    let preds: Vec<Box<dyn Fn(&SeriesMatrix) -> bool + Sync>> = (1..case.trunc())
        .map(|n| Box::new(move |g: &SeriesMatrix| case.filtration_member(g, n).unwrap_or(false)) as Box<_>)
        .collect();
    let refs: Vec<&(dyn Fn(&SeriesMatrix) -> bool + Sync)> = preds.iter().map(|b| b.as_ref()).collect();
    let gens: Vec<Vec<SeriesMatrix>> =
        (1..case.trunc()).map(|n| case.z_elements(n, &k.prime_basis())).collect::<Result<_, _>>()?;
    let out = pgroup::filtration_generation_check(&q, &refs, &gens, cap)?;
    if !out.pass {
        report.fail_with(serde_json::to_value(&out).expect("report serializes"));
    } else {
        report.note(serde_json::to_value(&out).expect("report serializes"));
    }
    Ok(report.timed(start))
}
