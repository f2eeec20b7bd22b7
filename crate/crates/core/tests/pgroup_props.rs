use std::sync::Arc;

use kmforge::ffield::Field;
use kmforge::pgroup::{self, is_power_of, DEFAULT_CAP};
use kmforge::tseries::{MatRing, SeriesMatrix};
use proptest::prelude::*;

/// Rings whose unitriangular-mod-`t` groups stay small: `(q, dim, trunc)`.
const SHAPES: [(u64, usize, usize); 3] = [(5, 3, 1), (3, 4, 1), (3, 2, 2)];

fn ring(shape: usize) -> MatRing {
    let (q, d, n) = SHAPES[shape];
    MatRing::new(Arc::new(Field::of_order(q).unwrap()), d, n).unwrap()
}

/// An element congruent to an upper unitriangular matrix mod `t`.
fn element(r: &MatRing, raw: &[u64]) -> SeriesMatrix {
    let k = r.field();
    let elems = k.elements();
    let mut g = r.identity();
    let mut it = raw.iter().cycle();
    for i in 0..r.dim() {
        for j in 0..r.dim() {
            for deg in 0..r.trunc() {
                if deg >= 1 || i < j {
                    let c = elems[(*it.next().unwrap() as usize) % k.q()];
                    g.set_coeff(i, j, deg, k.add(g.coeff(i, j, deg), c));
                }
            }
        }
    }
    g
}

fn generators() -> impl Strategy<Value = (usize, Vec<Vec<u64>>)> {
    (0..SHAPES.len(), prop::collection::vec(prop::collection::vec(0u64..5, 1..20), 1..4))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn closure_ignores_generator_order((shape, raw) in generators(), seed in any::<u64>()) {
        let r = ring(shape);
        let gens: Vec<SeriesMatrix> = raw.iter().map(|v| element(&r, v)).collect();
        let mut shuffled = gens.clone();
        let n = shuffled.len();
        shuffled.rotate_left((seed as usize) % n);
        shuffled.reverse();
        let a = pgroup::closure(&r, &gens, DEFAULT_CAP).unwrap();
        let b = pgroup::closure(&r, &shuffled, DEFAULT_CAP).unwrap();
        prop_assert_eq!(a.codes(), b.codes());
        let c = gens.iter().skip(1).try_fold(pgroup::closure(&r, &gens[..1], DEFAULT_CAP).unwrap(), |acc, g| acc.add_generator(g, DEFAULT_CAP)).unwrap();
        prop_assert_eq!(a.codes(), c.codes());
    }

    #[test]
    fn orders_are_prime_powers((shape, raw) in generators()) {
        let r = ring(shape);
        let p = r.field().p();
        let gens: Vec<SeriesMatrix> = raw.iter().map(|v| element(&r, v)).collect();
        let g = pgroup::closure(&r, &gens, DEFAULT_CAP).unwrap();
        prop_assert!(is_power_of(g.order(), p));
        let d = pgroup::derived_subgroup(&g, DEFAULT_CAP).unwrap();
        prop_assert!(is_power_of(d.order(), p));
        prop_assert!(d.is_subgroup_of(&g));
        prop_assert_eq!(g.order() % d.order(), 0);
    }

    #[test]
    fn frattini_quotient_is_elementary_abelian((shape, raw) in generators()) {
        let r = ring(shape);
        let p = r.field().p();
        let gens: Vec<SeriesMatrix> = raw.iter().map(|v| element(&r, v)).collect();
        let k = pgroup::closure(&r, &gens, DEFAULT_CAP).unwrap();
        let kstar = pgroup::frattini_star(&k, DEFAULT_CAP).unwrap();
        let derived = pgroup::derived_subgroup(&k, DEFAULT_CAP).unwrap();
        prop_assert!(derived.is_subgroup_of(&kstar));
        prop_assert!(kstar.is_subgroup_of(&k));
        for g in k.elements() {
            prop_assert!(kstar.contains(&r.pow(&g, p)));
        }
    }
}
