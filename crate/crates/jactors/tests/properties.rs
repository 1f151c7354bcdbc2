use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use jactors::classify::{classify, RankEntry, RankTable, Target};
use jactors::group::AbelianGroup;
use jactors::mwtors::{find_model, ModelCurve, TorsionEngine};
use jactors::poly::{quadratic_factor_extraction, to_rational_poly, Field, PolyRing, Rationals};
use jactors::qfield::{squarefree, MultiQuadField};

const GENS: [i64; 7] = [-1, 2, -2, 3, -3, 5, -7];

fn field_strategy() -> impl Strategy<Value = MultiQuadField> {
    proptest::sample::subsequence(GENS.to_vec(), 0..=3).prop_map(|ds| {
        ds.iter().fold(MultiQuadField::rationals(), |k, &d| k.adjoin(d))
    })
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn tower_square_roots(k in field_strategy(), cs in proptest::collection::vec((-30i64..=30, 1i64..=5), 8)) {
        let a = k.elem_from_coords(cs.iter().take(k.degree()).map(|&(n, d)| q(n, d)).collect());
        let r = k.sqrt_in_tower(&k.mul(&a, &a)).expect("a square has a root");
        prop_assert!(r == a || r == k.neg(&a));
    }

    #[test]
    fn span_is_closed(k in field_strategy()) {
        let span = k.span();
        prop_assert_eq!(span.len(), k.degree());
        for &a in &span {
            for &b in &span {
                prop_assert!(span.contains(&squarefree(a * b)));
            }
        }
    }

    #[test]
    fn residue_degree_matches_square_counts(k in field_strategy(), i in 1usize..25) {
        let p = [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101][i];
        let (f, ramified) = k.residue_degree(p).unwrap();
        let is_square = |d: i64| (0..p as i64).any(|x| (x * x - d).rem_euclid(p as i64) == 0);
        prop_assert_eq!(ramified, k.gens().iter().any(|&d| d.rem_euclid(p as i64) == 0));
        if !ramified {
            prop_assert_eq!(f == 1, k.gens().iter().all(|&d| is_square(d)));
        }
    }

    #[test]
    fn extraction_is_idempotent(
        lin in proptest::collection::vec((1i64..=3, -6i64..=6), 0..3),
        quad in proptest::collection::vec((-5i64..=5, -7i64..=7), 0..3),
    ) {
        let r = PolyRing::new(Rationals);
        // x^3 - x - 1 has no factor of degree <= 2
        let mut f = r.from_ints(&[-1, -1, 0, 1]);
        for (a, b) in &lin {
            f = r.mul(&f, &r.from_ints(&[*b, *a]));
        }
        for (b, c) in &quad {
            f = r.mul(&f, &r.from_ints(&[*c, *b, 1]));
        }
        let once = quadratic_factor_extraction(&f).unwrap();
        let product = once.iter().fold(r.one(), |acc, c| r.mul(&acc, &to_rational_poly(c)));
        let twice = quadratic_factor_extraction(&product).unwrap();
        prop_assert_eq!(&once, &twice);
        for c in &once {
            prop_assert!(r.divides(&to_rational_poly(c), &f));
        }
    }
}

fn assoc_check(label: &str, p: u64) {
    let ModelCurve::Hyper(c) = find_model(label).unwrap().curve().unwrap() else { unreachable!() };
    let j = c.reduce_mod_p(p, 1).unwrap().jacobian().unwrap();
    let elems = j.elements();
    let n = elems.len();
    proptest!(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() }, |(a in 0..n, b in 0..n, d in 0..n)| {
        let (a, b, d) = (&elems[a], &elems[b], &elems[d]);
        prop_assert_eq!(j.add(&j.add(a, b), d), j.add(a, &j.add(b, d)));
        prop_assert!(j.is_identity(&j.sub(a, a)));
        prop_assert_eq!(j.sub(&j.add(a, b), b), a.clone());
    });
}

#[test]
fn cantor_addition_odd_model() {
    assoc_check("X1(16)", 7);
}

#[test]
fn cantor_addition_even_model() {
    assoc_check("X1(18)", 5);
}

#[test]
fn reduction_bound_is_antitone() {
    let primes = [3u64, 5, 7, 11, 17, 19];
    let k = MultiQuadField::rationals();
    proptest!(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() },
        |(small in proptest::sample::subsequence(primes.to_vec(), 2..=3), extra in proptest::sample::subsequence(primes.to_vec(), 1..=2))| {
        let mut big = small.clone();
        big.extend(extra);
        big.sort_unstable();
        big.dedup();
        let model = find_model("X1(13)").unwrap();
        let (a, _) = TorsionEngine::new(model.clone()).unwrap().with_primes(small).reduction_bound(&k).unwrap();
        let (b, _) = TorsionEngine::new(model).unwrap().with_primes(big).reduction_bound(&k).unwrap();
        prop_assert!(b.embeds_in(&a), "{} not inside {}", b, a);
    });
}

#[test]
fn classify_is_monotone_in_rank_data() {
    let targets = ["14", "15", "13", "11", "2x10"];
    proptest!(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() },
        |(t in proptest::sample::select(targets.to_vec()), k in field_strategy(), ranks in proptest::collection::vec(0u64..=1, 8), keep in proptest::collection::vec(any::<bool>(), 8))| {
        let t = Target::parse(t).unwrap();
        let label = t.label();
        let mut full = RankTable::empty();
        let mut part = RankTable::empty();
        for (i, d) in k.twist_classes().into_iter().enumerate() {
            let e = RankEntry { jacobian: label.clone(), twist: d, rank: ranks[i], source: "test input".into() };
            if keep[i] {
                part.insert(e.clone()).unwrap();
            }
            full.insert(e).unwrap();
        }
        let vp = classify(&t, &k, &part).unwrap();
        let vf = classify(&t, &k, &full).unwrap();
        prop_assert!(vf.rank.is_some());
        if vp.rank.is_some() {
            prop_assert_eq!(&vp, &vf);
        }
        prop_assert_eq!(vp.floor, vf.floor);
    });
}
