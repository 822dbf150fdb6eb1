use std::collections::BTreeSet;

use orddens::arith::{pow_mod, simple_sieve};
use orddens::density::{a_constant, rho_closed, DEFAULT_L};
use orddens::empirical::*;
use orddens::kummer::*;

fn group(field: &str, gens: &str) -> GroupSpec {
    GroupSpec::parse(FieldSpec::builtin(field).unwrap(), gens, 1).unwrap()
}

#[test]
fn prime_stream_examples() {
    assert_eq!(prime_stream(10).collect::<Vec<_>>(), vec![2, 3, 5, 7]);
    assert_eq!(prime_stream(2).collect::<Vec<_>>(), vec![2]);
    let all: Vec<u64> = prime_stream(1_000_000).collect();
    assert_eq!(all.len(), 78498);
    assert!(all.windows(2).all(|w| w[0] < w[1]));
    let reference: Vec<u64> = simple_sieve(1_000_001).into_iter().map(u64::from).collect();
    assert_eq!(all, reference);
}

#[test]
fn roots_examples() {
    assert_eq!(roots_mod_p(&[1, 0, 1], 5), vec![2, 3]);
    assert!(roots_mod_p(&[1, 0, 1], 7).is_empty());
    assert_eq!(roots_mod_p(&[1, 0, -1, 0, 1], 13).len(), 4);
}

#[test]
fn ord_index_examples() {
    assert_eq!(ord_index(&group("Q", "2"), 7, 0).unwrap(), OrdIndex { ord: 3, ind: 2 });
    assert_eq!(ord_index(&group("Q", "2"), 17, 0).unwrap(), OrdIndex { ord: 8, ind: 2 });
    assert_eq!(ord_index(&group("Q", "2,3"), 11, 0).unwrap(), OrdIndex { ord: 10, ind: 1 });
}

#[test]
fn reduction_and_bad_primes() {
    let k = FieldSpec::builtin("Qzeta4").unwrap();
    assert_eq!(reduce_generator(&k.parse_elem("2a").unwrap(), 5, 2).unwrap(), 4);
    assert_eq!(reduce_generator(&k.parse_elem("2").unwrap(), 101, 10).unwrap(), 2);
    let k5 = FieldSpec::builtin("Qsqrtm5").unwrap();
    let g = GroupSpec::new(k5.clone(), vec![k5.parse_elem("a").unwrap()], 1).unwrap();
    let bad = compute_bad_primes(&g).unwrap();
    assert!(bad.contains(&5) && bad.contains(&2));
    // a reduces to 0 at the ramified prime above 5, which is excluded
    assert!(reduce_generator(&k5.parse_elem("a").unwrap(), 5, 0).is_err());
    assert!(ord_index(&g, 5, 0).is_err());
    assert_eq!(compute_bad_primes(&group("Q", "2")).unwrap(), BTreeSet::from([2]));
    assert!(compute_bad_primes(&group("Qsqrtm5", "2")).unwrap().is_superset(&BTreeSet::from([2, 5])));
    assert!(compute_bad_primes(&group("Qzeta3", "16,27")).unwrap().is_superset(&BTreeSet::from([2, 3])));
}

#[test]
fn divisible_by_one_matches_all() {
    for (f, g) in [("Q", "3"), ("Qzeta12", "2,3"), ("Qsqrtm5", "27")] {
        let c = count_event(&group(f, g), &Event::Divisible(1), 50_000).unwrap();
        assert_eq!(c.matched, c.total);
        assert!(c.total > 0);
    }
}

#[test]
fn degree_one_prime_totals_follow_pi() {
    // Each split rational prime contributes deg f ideals; the proportion of
    // split primes is 1/[K:Q] for these abelian fields.
    let pi = 78498.0;
    for f in BUILTIN_FIELDS {
        let k = FieldSpec::builtin(f).unwrap();
        let c = count_event(&group(f, "3"), &Event::Divisible(1), 1_000_000).unwrap();
        let total = (c.total + c.excluded * k.degree() as u64) as f64;
        assert!((total / pi - 1.0).abs() < 0.05, "{f}: {total}");
    }
}

#[test]
fn divisibility_is_monotone_per_prime() {
    let g = group("Q", "2,27,25");
    let bad = compute_bad_primes(&g).unwrap();
    for p in prime_stream(20_000).filter(|p| !bad.contains(p)) {
        let OrdIndex { ord, ind } = ord_index(&g, p, 0).unwrap();
        assert_eq!(ord * ind, p - 1);
        for m in 1..=36u64 {
            if ord % m == 0 {
                for d in orddens::arith::divisors(m) {
                    assert_eq!(ord % d, 0);
                }
            }
        }
    }
}

/// `x` is an `n`-th power in `F_p`, by enumeration.
fn is_nth_power(x: u64, n: u64, p: u64) -> bool {
    (1..p).any(|y| pow_mod(y, n, p) == x)
}

#[test]
fn index_criterion_on_a_sample() {
    // n | ind  ⇔  p ≡ 1 (mod n) and every generator is an n-th power, on a 1% sample.
    for (f, gens) in [("Q", "2,3"), ("Qzeta4", "2a,27"), ("Qzeta3", "16")] {
        let grp = group(f, gens);
        let bad = compute_bad_primes(&grp).unwrap();
        let sample = degree_one_primes(grp.field(), 60_000).filter(|(p, _)| !bad.contains(p)).step_by(100);
        for (p, root) in sample {
            let OrdIndex { ind, .. } = ord_index(&grp, p, root).unwrap();
            let residues: Vec<u64> =
                grp.generators().iter().map(|x| reduce_generator(x, p, root).unwrap()).collect();
            for n in [2u64, 3, 4, 6, 8] {
                let direct = (p - 1) % n == 0 && residues.iter().all(|&x| is_nth_power(x, n, p));
                assert_eq!(ind % n == 0, direct, "{f} <{gens}> p={p} root={root} n={n}");
            }
        }
    }
}

#[test]
fn empirical_agrees_with_exact_densities() {
    let g = group("Q", "2");
    let c = count_event(&g, &Event::Divisible(2), 10_000_000).unwrap();
    assert!((c.ratio.unwrap() - 17.0 / 24.0).abs() < 0.01);
    assert_eq!(c.excluded, 1);

    let c = count_event(&group("Qzeta4", "2"), &Event::KFree(3), 1_000_000).unwrap();
    let (a31, _) = a_constant(3, 1, DEFAULT_L).unwrap();
    assert!((c.ratio.unwrap() - a31).abs() < 0.01, "{:?}", c.ratio);

    // every Table 1 style entry for two groups at 10^6
    for gens in ["3", "16,27"] {
        let grp = group("Q", gens);
        let t = degree_table(&grp).unwrap();
        let ms = [2u64, 3, 4, 6, 9, 12, 16, 27];
        let events: Vec<Event> = ms.iter().map(|&m| Event::Divisible(m)).collect();
        for (m, c) in ms.iter().zip(count_events(&grp, &events, 1_000_000, None).unwrap()) {
            let exact = orddens::arith::rat_to_f64(&rho_closed(*m, &t).unwrap().exact.unwrap());
            assert!((c.ratio.unwrap() - exact).abs() < 0.01, "<{gens}> m={m}");
        }
    }
}

#[test]
fn records_and_threads() {
    let g = group("Q", "2");
    let events = [Event::Divisible(2), Event::Coprime(6), Event::Valuation { k: 6, m: 2 }];
    let one = count_events(&g, &events, 200_000, Some(1)).unwrap();
    let four = count_events(&g, &events, 200_000, Some(4)).unwrap();
    assert_eq!(one, four);
    let line = one[0].record();
    assert!(line.starts_with("count div:2 200000 "), "{line}");
    assert_eq!(line.split(' ').count(), 7);
    assert!(count_event(&g, &Event::KFree(1), 1000).is_err());
    assert!(count_event(&g, &Event::Valuation { k: 4, m: 2 }, 1000).is_err());
}
