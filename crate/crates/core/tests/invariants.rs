//! Randomized invariance checks on connected origamis with up to 10 squares.

mod common;

use common::{random_origami, random_perm, random_word};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sqtiled::origami::{Generator, Origami};
use sqtiled::svcount::{direction_reduce, n_area, Direction};

fn arb_origami() -> impl Strategy<Value = Origami> {
    (2usize..=10, any::<u64>()).prop_map(|(n, seed)| random_origami(seed, n))
}

fn same_spin(a: &Origami, b: &Origami) -> bool {
    match (a.spin_parity(), b.spin_parity()) {
        (Ok(x), Ok(y)) => x == y,
        (Err(_), Err(_)) => true,
        _ => false,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn sl2_orbit_preserves_invariants(o in arb_origami(), seed in any::<u64>(), len in 1usize..12) {
        let (word, m) = random_word(seed, len);
        let stepwise = word.iter().rev().fold(o.clone(), |acc, &g| acc.act(g));
        let whole = o.act_matrix(&m);
        prop_assert_eq!(stepwise.canonical_form(), whole.canonical_form());
        prop_assert_eq!(whole.n(), o.n());
        prop_assert!(whole.is_connected());
        prop_assert_eq!(whole.stratum().unwrap(), o.stratum().unwrap());
        prop_assert!(same_spin(&whole, &o));
        prop_assert_eq!(whole.is_hyperelliptic(), o.is_hyperelliptic());
        prop_assert_eq!(whole.automorphism_count(), o.automorphism_count());
        prop_assert_eq!(whole.component().ok(), o.component().ok());
    }

    #[test]
    fn relabeling_preserves_invariants(o in arb_origami(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sigma = random_perm(&mut rng, o.n());
        let r = o.relabel(&sigma);
        prop_assert_eq!(r.canonical_form(), o.canonical_form());
        prop_assert_eq!(r.stratum().unwrap(), o.stratum().unwrap());
        prop_assert!(same_spin(&r, &o));
        prop_assert_eq!(r.is_hyperelliptic(), o.is_hyperelliptic());
        prop_assert_eq!(n_area(&r, 7.0), n_area(&o, 7.0));
    }

    #[test]
    fn rotation_preserves_area_counts(o in arb_origami()) {
        // a quarter turn is an isometry, so no cylinder changes length
        let r = o.act(Generator::S);
        for l in [1.0, 2.5, 6.0] {
            prop_assert!((n_area(&r, l) - n_area(&o, l)).abs() < 1e-9);
        }
    }

    #[test]
    fn cylinders_fill_the_surface_in_every_direction(o in arb_origami(), p in -6i64..=6, q in -6i64..=6) {
        prop_assume!(Direction::new(p, q).is_ok());
        let m = direction_reduce(p, q).unwrap();
        prop_assert_eq!(m.apply(p, q), (1, 0));
        let turned = o.act_matrix(&m);
        let area: usize = turned.horizontal_cylinders().iter().map(|c| c.area()).sum();
        prop_assert_eq!(area, o.n());
    }

    #[test]
    fn euler_characteristic_matches_genus(o in arb_origami()) {
        let st = o.stratum().unwrap();
        prop_assert_eq!(o.euler_characteristic(), 2 - 2 * st.genus() as i64);
        let defects: u32 = st.zeros().iter().map(|m| m + 1).sum();
        let moved = (0..o.n()).filter(|&x| o.commutator().apply(x) != x).count() as u32;
        prop_assert_eq!(defects, moved);
    }
}
