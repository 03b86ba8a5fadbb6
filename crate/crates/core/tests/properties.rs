mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use softnc::oracle::oracle_nc;
use softnc::{
    booleanize, generate_nc, generate_snc, is_nc, is_nc_partial, is_snc, is_wnc, snc_witness_from_nc,
    transport_witness, MixedRadixDomain, MultivaluedFunction, TruthTable, VanHamCodec,
};

use common::{all_functions, random_network, small_domains, snc_network};

fn arities() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(2usize..=3, 1..=4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn encode_decode_round_trip(arities in prop::collection::vec(1usize..=4, 1..=5)) {
        let d = MixedRadixDomain::new(arities).unwrap();
        for i in 0..d.cardinality() {
            prop_assert_eq!(d.encode(&d.decode(i).unwrap()).unwrap(), i);
        }
    }

    #[test]
    fn nc_samples_are_snc_and_witnesses_replay(arities in arities(), seed in any::<u64>()) {
        let d = MixedRadixDomain::new(arities).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (f, w) = generate_nc(&d, 3, &mut rng).unwrap();
        prop_assert!(w.verifies(&f));
        let found = is_nc(&f).unwrap().unwrap();
        prop_assert!(found.verifies(&f));
        let snc = snc_witness_from_nc(&w, &d).unwrap();
        prop_assert!(snc.verifies(&f));
        prop_assert!(is_snc(&f).unwrap().verifies(&f));
    }

    #[test]
    fn snc_implies_wnc(arities in arities(), seed in any::<u64>()) {
        let d = MixedRadixDomain::new(arities).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (f, w) = generate_snc(&d, 3, &mut rng).unwrap();
        prop_assert!(w.verifies(&f));
        let wnc = is_wnc(&f).unwrap();
        prop_assert!(wnc.is_some_and(|w| w.verifies(&f)));
    }

    #[test]
    fn snc_networks_booleanize_to_nc(arities in prop::collection::vec(2usize..=3, 1..=3), seed in any::<u64>()) {
        let d = MixedRadixDomain::new(arities).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (net, witnesses) = snc_network(&d, &mut rng);
        let fb = booleanize(&net).unwrap();
        for c in fb.components() {
            prop_assert!(is_nc_partial(&c.function).unwrap().is_some_and(|w| w.verifies(&c.function)));
            let w = transport_witness(&witnesses[c.target], &d, c.threshold).unwrap();
            prop_assert!(w.verifies(&c.function));
        }
    }

    #[test]
    fn booleanization_is_monotone_in_threshold(arities in prop::collection::vec(2usize..=3, 1..=3), seed in any::<u64>()) {
        let d = MixedRadixDomain::new(arities).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fb = booleanize(&random_network(&d, &mut rng)).unwrap();
        for pair in fb.components().windows(2) {
            if pair[0].target == pair[1].target {
                for (lo, hi) in pair[0].function.values().iter().zip(pair[1].function.values()) {
                    prop_assert!(*lo || !*hi);
                }
            }
        }
    }

    #[test]
    fn truth_tables_round_trip(arities in arities(), seed in any::<u64>()) {
        let d = MixedRadixDomain::new(arities).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (f, _) = generate_snc(&d, 3, &mut rng).unwrap();
        let t = TruthTable::from(&f);
        prop_assert_eq!(TruthTable::from_json(&t.to_json()).unwrap().to_function().unwrap(), f);
    }
}

#[test]
fn unary_boolean_input_nc_functions() {
    let d = MixedRadixDomain::new(vec![2]).unwrap();
    let nc: Vec<MultivaluedFunction> = all_functions(&d, 3).filter(|f| is_nc(f).unwrap().is_some()).collect();
    assert_eq!(nc.len(), 6);
    assert!(nc.iter().all(|f| !f.is_constant()));
    assert!(nc.iter().all(|f| oracle_nc(f).unwrap()));
}

#[test]
fn neighbours_map_to_neighbours() {
    for d in small_domains(4, 81) {
        let codec = VanHamCodec::new(&d).unwrap();
        for x in d.points() {
            for i in 0..d.dimension() {
                if x[i] + 1 < d.arity(i) {
                    let mut y = x.clone();
                    y[i] += 1;
                    let h = (codec.encode(&x).unwrap() ^ codec.encode(&y).unwrap()).count_ones();
                    assert_eq!(h, 1);
                }
            }
        }
    }
}

#[test]
fn booleanized_diagram_commutes() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for d in small_domains(4, 81) {
        let codec = VanHamCodec::new(&d).unwrap();
        let net = random_network(&d, &mut rng);
        let fb = booleanize(&net).unwrap();
        for x in d.points() {
            let expected = codec.encode(&net.image(&x).unwrap()).unwrap();
            assert_eq!(fb.image(codec.encode(&x).unwrap()), Some(expected));
        }
    }
}
