//! Exhaustive computations in finite matrix groups over `k[t]/(t^N)`:
//! closure, derived and Frattini-type subgroups, and generation tests.
//!
//! Elements are packed into `u128` codes, one fixed-width bit field per
//! coefficient in the flat layout of [`SeriesMatrix`], most significant
//! first. Numeric order of codes is therefore lexicographic order of
//! coefficient encodings, and a sorted code vector is the canonical form of
//! an element set.

use std::collections::HashSet;

use serde::Serialize;
use thiserror::Error;

use crate::ffield::Fe;
use crate::par;
use crate::tseries::{MatRing, SeriesError, SeriesMatrix};

/// Default bound on the order of any materialized group.
pub const DEFAULT_CAP: usize = 2_000_000;
/// Largest group on which the commutator-width product sets are enumerated.
pub const WIDTH_CHECK_LIMIT: usize = 10_000;

const FRONTIER_CHUNK: usize = 2048;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PGroupError {
    #[error("closure exceeded the cap of {cap} elements")]
    ClosureCapExceeded { cap: usize },
    #[error("{bits} bits per element do not fit a 128-bit code")]
    EncodingTooWide { bits: usize },
    #[error("generator does not match the ring shape")]
    ShapeMismatch,
    #[error("group of order {order} is not a p-group for p = {p}")]
    NotAPGroup { order: usize, p: u64 },
    #[error("element is not in the group")]
    NotASubset,
    #[error("level {0} of the chain is not a normal subgroup")]
    ChainNotNormal(usize),
    #[error("group of order {order} exceeds the exhaustive limit {limit}")]
    TooLarge { order: usize, limit: usize },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Fixed-width packing of a ring element into a `u128`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Codec {
    bits: u32,
    slots: usize,
}

impl Codec {
    pub fn for_ring(ring: &MatRing) -> Result<Self, PGroupError> {
        let q = ring.field().q();
        let bits = (usize::BITS - (q - 1).leading_zeros()).max(1);
        let slots = ring.slots();
        if bits as usize * slots > 128 {
            return Err(PGroupError::EncodingTooWide {
                bits: bits as usize * slots,
            });
        }
        Ok(Self { bits, slots })
    }

    #[inline]
    pub fn encode_raw(&self, data: &[Fe]) -> u128 {
        data.iter().fold(0u128, |acc, c| (acc << self.bits) | c.code() as u128)
    }

    #[inline]
    pub fn decode_raw(&self, code: u128, out: &mut [Fe]) {
        let mask = (1u128 << self.bits) - 1;
        let mut c = code;
        for slot in out.iter_mut().rev() {
            *slot = Fe((c & mask) as u8);
            c >>= self.bits;
        }
    }

    pub fn encode(&self, g: &SeriesMatrix) -> u128 {
        self.encode_raw(g.data())
    }

    pub fn decode(&self, ring: &MatRing, code: u128) -> SeriesMatrix {
        let mut data = vec![Fe::ZERO; self.slots];
        self.decode_raw(code, &mut data);
        ring.from_data(data)
    }
}

/// A finite subgroup of `GL_d(k[t]/(t^N))`, fully materialized.
#[derive(Debug, Clone)]
pub struct FiniteMatrixGroup {
    ring: MatRing,
    codec: Codec,
    generators: Vec<SeriesMatrix>,
    /// Sorted, deduplicated codes.
    elements: Vec<u128>,
}

impl FiniteMatrixGroup {
    pub fn ring(&self) -> &MatRing {
        &self.ring
    }

    pub fn codec(&self) -> Codec {
        self.codec
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[SeriesMatrix] {
        &self.generators
    }

    /// Canonically ordered element codes.
    pub fn codes(&self) -> &[u128] {
        &self.elements
    }

    pub fn elements(&self) -> impl Iterator<Item = SeriesMatrix> + '_ {
        self.elements.iter().map(|&c| self.codec.decode(&self.ring, c))
    }

    pub fn contains_code(&self, code: u128) -> bool {
        self.elements.binary_search(&code).is_ok()
    }

    pub fn contains(&self, g: &SeriesMatrix) -> bool {
        g.dim() == self.ring.dim() && g.trunc() == self.ring.trunc() && self.contains_code(self.codec.encode(g))
    }

    pub fn is_subgroup_of(&self, other: &Self) -> bool {
        self.elements.iter().all(|&c| other.contains_code(c))
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    /// The group `<self, g>`.
    pub fn add_generator(&self, g: &SeriesMatrix, cap: usize) -> Result<Self, PGroupError> {
        let code = self.codec.encode(check_shape(&self.ring, g)?);
        let mut generators = self.generators.clone();
        generators.push(g.clone());
        if self.contains_code(code) {
            return Ok(Self {
                generators,
                ..self.clone()
            });
        }
        let mut seen: HashSet<u128> = self.elements.iter().copied().collect();
        // Leaving the subgroup first happens through a right factor g.
        let first = multiply_all(&self.ring, self.codec, &self.elements, std::slice::from_ref(g), &seen);
        let frontier = absorb(first, &mut seen, cap)?;
        let elements = bfs(&self.ring, self.codec, &generators, seen, frontier, cap)?;
        Ok(Self {
            ring: self.ring.clone(),
            codec: self.codec,
            generators,
            elements,
        })
    }

    /// Wraps an element set already known to be a group.
    fn from_codes(ring: &MatRing, codec: Codec, generators: Vec<SeriesMatrix>, mut elements: Vec<u128>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        Self {
            ring: ring.clone(),
            codec,
            generators,
            elements,
        }
    }

    /// Elements satisfying `pred`, as a group (caller guarantees closure).
    pub fn filter_subgroup(&self, pred: impl Fn(&SeriesMatrix) -> bool + Sync + Send) -> Self {
        let ring = &self.ring;
        let codec = self.codec;
        let keep = par::map(&self.elements, |&c| pred(&codec.decode(ring, c)));
        let elements: Vec<u128> = self.elements.iter().zip(keep).filter(|(_, k)| *k).map(|(&c, _)| c).collect();
        let generators = elements.iter().map(|&c| codec.decode(ring, c)).collect();
        Self::from_codes(ring, codec, generators, elements)
    }
}

fn check_shape<'a>(ring: &MatRing, g: &'a SeriesMatrix) -> Result<&'a SeriesMatrix, PGroupError> {
    if g.dim() != ring.dim() || g.trunc() != ring.trunc() {
        return Err(PGroupError::ShapeMismatch);
    }
    Ok(g)
}

/// Codes of `x * s` for `x` in `xs`, `s` in `gens`, skipping those in `seen`.
fn multiply_all(ring: &MatRing, codec: Codec, xs: &[u128], gens: &[SeriesMatrix], seen: &HashSet<u128>) -> Vec<u128> {
    let chunks: Vec<&[u128]> = xs.chunks(FRONTIER_CHUNK).collect();
    par::flat_map(&chunks, |chunk| {
        let mut a = vec![Fe::ZERO; ring.slots()];
        let mut out = vec![Fe::ZERO; ring.slots()];
        let mut found = Vec::new();
        for &x in chunk.iter() {
            codec.decode_raw(x, &mut a);
            for s in gens {
                ring.mul_raw(&a, s.data(), &mut out);
                let c = codec.encode_raw(&out);
                if !seen.contains(&c) {
                    found.push(c);
                }
            }
        }
        found
    })
}

/// Inserts new codes into `seen`, returning them sorted.
fn absorb(mut found: Vec<u128>, seen: &mut HashSet<u128>, cap: usize) -> Result<Vec<u128>, PGroupError> {
    found.sort_unstable();
    found.dedup();
    found.retain(|c| seen.insert(*c));
    if seen.len() > cap {
        return Err(PGroupError::ClosureCapExceeded { cap });
    }
    Ok(found)
}

fn bfs(
    ring: &MatRing,
    codec: Codec,
    gens: &[SeriesMatrix],
    mut seen: HashSet<u128>,
    mut frontier: Vec<u128>,
    cap: usize,
) -> Result<Vec<u128>, PGroupError> {
    while !frontier.is_empty() {
        let found = multiply_all(ring, codec, &frontier, gens, &seen);
        frontier = absorb(found, &mut seen, cap)?;
    }
    let mut elements: Vec<u128> = seen.into_iter().collect();
    elements.sort_unstable();
    Ok(elements)
}

/// Multiplicative closure of `generators`; the empty list gives the trivial group.
pub fn closure(ring: &MatRing, generators: &[SeriesMatrix], cap: usize) -> Result<FiniteMatrixGroup, PGroupError> {
    let codec = Codec::for_ring(ring)?;
    for g in generators {
        check_shape(ring, g)?;
        ring.inv(g)?;
    }
    let id = codec.encode(&ring.identity());
    let seen: HashSet<u128> = HashSet::from([id]);
    let elements = bfs(ring, codec, generators, seen, vec![id], cap)?;
    Ok(FiniteMatrixGroup {
        ring: ring.clone(),
        codec,
        generators: generators.to_vec(),
        elements,
    })
}

/// Smallest normal subgroup of `g` containing `seeds`.
pub fn normal_closure(g: &FiniteMatrixGroup, seeds: &[SeriesMatrix], cap: usize) -> Result<FiniteMatrixGroup, PGroupError> {
    let ring = g.ring();
    let seeds: Vec<SeriesMatrix> = seeds.iter().filter(|s| !ring.is_identity(s)).cloned().collect();
    let mut s = closure(ring, &seeds, cap)?;
    let conjugators: Vec<(SeriesMatrix, SeriesMatrix)> = g
        .generators()
        .iter()
        .map(|y| Ok((y.clone(), ring.inv(y)?)))
        .collect::<Result<_, SeriesError>>()?;
    loop {
        let mut changed = false;
        let current: Vec<SeriesMatrix> = s.generators().to_vec();
        for x in &current {
            for (y, yi) in &conjugators {
                let c = ring.mul(&ring.mul(y, x), yi);
                if !s.contains(&c) {
                    s = s.add_generator(&c, cap)?;
                    changed = true;
                }
            }
        }
        if !changed {
            return Ok(s);
        }
    }
}

fn generator_commutators(g: &FiniteMatrixGroup) -> Result<Vec<SeriesMatrix>, PGroupError> {
    let ring = g.ring();
    let gens = g.generators();
    let mut out = Vec::new();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            out.push(ring.commutator(&gens[i], &gens[j])?);
        }
    }
    Ok(out)
}

/// `[G, G]`, the normal closure of the commutators of the generators.
pub fn derived_subgroup(g: &FiniteMatrixGroup, cap: usize) -> Result<FiniteMatrixGroup, PGroupError> {
    normal_closure(g, &generator_commutators(g)?, cap)
}

/// `K* = [K, K] K^p` for a finite p-group `K`.
pub fn frattini_star(k: &FiniteMatrixGroup, cap: usize) -> Result<FiniteMatrixGroup, PGroupError> {
    let p = k.ring().field().p();
    if !is_power_of(k.order(), p) {
        return Err(PGroupError::NotAPGroup { order: k.order(), p });
    }
    let ring = k.ring();
    let mut seeds = generator_commutators(k)?;
    seeds.extend(k.generators().iter().map(|x| ring.pow(x, p)));
    normal_closure(k, &seeds, cap)
}

pub fn is_power_of(mut n: usize, p: u64) -> bool {
    let p = p as usize;
    if n == 0 {
        return false;
    }
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

/// `(X generates K, the image of X generates K / K*)`, computed independently.
pub fn generation_check(k: &FiniteMatrixGroup, x: &[SeriesMatrix], cap: usize) -> Result<(bool, bool), PGroupError> {
    if x.iter().any(|g| !k.contains(g)) {
        return Err(PGroupError::NotASubset);
    }
    let direct = closure(k.ring(), x, cap)?.order() == k.order();
    let mut modulo = frattini_star(k, cap)?;
    for g in x {
        modulo = modulo.add_generator(g, cap)?;
    }
    Ok((direct, modulo.order() == k.order()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WidthReport {
    pub derived_order: usize,
    pub product_set_size: usize,
    pub pass: bool,
    /// Code of an element of `[K, K]` missing from the product set.
    pub witness: Option<u128>,
}

/// Checks that every element of `[K, K]` is `[a_1, g_1] ... [a_d, g_d]`.
pub fn commutator_width_check(k: &FiniteMatrixGroup, a: &[SeriesMatrix], cap: usize) -> Result<WidthReport, PGroupError> {
    if k.order() > WIDTH_CHECK_LIMIT {
        return Err(PGroupError::TooLarge {
            order: k.order(),
            limit: WIDTH_CHECK_LIMIT,
        });
    }
    if a.iter().any(|g| !k.contains(g)) {
        return Err(PGroupError::NotASubset);
    }
    let ring = k.ring();
    let codec = k.codec();
    let all: Vec<SeriesMatrix> = k.elements().collect();
    let mut product: Vec<u128> = vec![codec.encode(&ring.identity())];
    for ai in a {
        let mut classes: Vec<u128> = par::map(&all, |g| ring.commutator(ai, g).map(|c| codec.encode(&c)))
            .into_iter()
            .collect::<Result<_, _>>()?;
        classes.sort_unstable();
        classes.dedup();
        let factors: Vec<SeriesMatrix> = classes.iter().map(|&c| codec.decode(ring, c)).collect();
        let next = multiply_all(ring, codec, &product, &factors, &HashSet::new());
        product = next;
        product.sort_unstable();
        product.dedup();
    }
    let derived = derived_subgroup(k, cap)?;
    let witness = derived.codes().iter().copied().find(|c| product.binary_search(c).is_err());
    Ok(WidthReport {
        derived_order: derived.order(),
        product_set_size: product.len(),
        pass: witness.is_none(),
        witness,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiltrationReport {
    /// Orders of `P_1, P_2, ...`.
    pub level_orders: Vec<usize>,
    pub derived_order: usize,
    /// `(level, index, g_{level,index} in K P_{level+1})`, levels 1-based.
    pub hypotheses: Vec<(usize, usize, bool)>,
    /// Whether `P_1` lies in `K` times the bottom level.
    pub conclusion: bool,
    pub pass: bool,
}

/// Finite-scale check of the filtration lemma with `K = [P, P]`: given a
/// descending normal chain `levels[0] = P_1 > P_2 > ...` whose successor
/// after the last level is trivial, and elements `gens[i]` of each level,
/// tests every `g_{i,j} in K P_{i+1}` and whether `P_1 <= K`.
pub fn filtration_generation_check(
    p: &FiniteMatrixGroup,
    levels: &[&(dyn Fn(&SeriesMatrix) -> bool + Sync)],
    gens: &[Vec<SeriesMatrix>],
    cap: usize,
) -> Result<FiltrationReport, PGroupError> {
    let ring = p.ring();
    let sets: Vec<FiniteMatrixGroup> = levels.iter().map(|pred| p.filter_subgroup(pred)).collect();
    for (i, s) in sets.iter().enumerate() {
        let closed = par::all(s.codes(), |&x| {
            let a = s.codec.decode(ring, x);
            s.generators().iter().all(|b| s.contains(&ring.mul(&a, b)))
        });
        let normal = closed
            && p.generators().iter().all(|y| {
                let yi = ring.inv(y).expect("group elements are invertible");
                s.elements().all(|x| s.contains(&ring.mul(&ring.mul(y, &x), &yi)))
            });
        let nested = i == 0 || s.is_subgroup_of(&sets[i - 1]);
        if !normal || !nested {
            return Err(PGroupError::ChainNotNormal(i + 1));
        }
    }
    for (i, level) in gens.iter().enumerate() {
        if i >= sets.len() || level.iter().any(|g| !sets[i].contains(g)) {
            return Err(PGroupError::NotASubset);
        }
    }
    let k = derived_subgroup(p, cap)?;
    let trivial = vec![ring.identity()];
    let mut hypotheses = Vec::new();
    for (i, level) in gens.iter().enumerate() {
        let below: Vec<SeriesMatrix> = match sets.get(i + 1) {
            Some(s) => s.elements().collect(),
            None => trivial.clone(),
        };
        for (j, g) in level.iter().enumerate() {
            let holds = below.iter().any(|l| ring.inv(l).is_ok_and(|li| k.contains(&ring.mul(g, &li))));
            hypotheses.push((i + 1, j + 1, holds));
        }
    }
    let conclusion = sets.first().is_none_or(|s| s.is_subgroup_of(&k));
    let pass = conclusion && hypotheses.iter().all(|h| h.2);
    Ok(FiltrationReport {
        level_orders: sets.iter().map(FiniteMatrixGroup::order).collect(),
        derived_order: k.order(),
        hypotheses,
        conclusion,
        pass,
    })
}
