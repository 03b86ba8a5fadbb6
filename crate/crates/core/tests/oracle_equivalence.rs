mod common;

use proptest::prelude::*;
use softnc::oracle::{oracle_nc, oracle_nc_partial, oracle_snc, oracle_wnc};
use softnc::{is_nc, is_nc_partial, is_snc, is_wnc, MixedRadixDomain, MultivaluedFunction, PartialBooleanFunction};

use common::all_functions;

fn agree(f: &MultivaluedFunction) -> bool {
    is_nc(f).unwrap().is_some() == oracle_nc(f).unwrap()
        && is_snc(f).is_some() == oracle_snc(f).unwrap()
        && is_wnc(f).unwrap().is_some() == oracle_wnc(f).unwrap()
}

#[test]
fn exhaustive_on_small_domains() {
    for arities in [vec![2, 2], vec![2, 3], vec![3, 2], vec![3, 3], vec![2, 2, 2]] {
        let d = MixedRadixDomain::new(arities.clone()).unwrap();
        let bad = all_functions(&d, 3).filter(|f| !agree(f)).count();
        assert_eq!(bad, 0, "{arities:?}");
    }
}

#[test]
fn exhaustive_boolean_two_inputs() {
    let d = MixedRadixDomain::new(vec![2, 2]).unwrap();
    let mut snc = 0;
    for f in all_functions(&d, 2) {
        assert_eq!(is_snc(&f).is_some(), oracle_snc(&f).unwrap());
        snc += usize::from(is_snc(&f).is_some());
    }
    // all but XOR and XNOR
    assert_eq!(snc, 14);
}

fn table() -> impl Strategy<Value = MultivaluedFunction> {
    prop::collection::vec(2usize..=3, 1..=4)
        .prop_filter("at most six peels", |a| a.iter().map(|k| k - 1).sum::<usize>() <= 6)
        .prop_flat_map(|arities| {
            let size: usize = arities.iter().product();
            (Just(arities), prop::collection::vec(0u32..3, size))
        })
        .prop_map(|(arities, values)| {
            MultivaluedFunction::new(MixedRadixDomain::new(arities).unwrap(), 3, values).unwrap()
        })
}

/// Tables drawn from few values so that canalizing structure is common.
fn skewed_table() -> impl Strategy<Value = MultivaluedFunction> {
    (table(), 0u32..3).prop_map(|(f, base)| {
        let values = f.values().iter().map(|&v| if v == 2 { 1 } else { base }).collect();
        MultivaluedFunction::new(f.domain().clone(), 3, values).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn random_tables_agree(f in table()) {
        prop_assert!(agree(&f));
    }

    #[test]
    fn skewed_tables_agree(f in skewed_table()) {
        prop_assert!(agree(&f));
    }

    #[test]
    fn partial_nc_agrees(k in 1usize..=5, seed in any::<u64>(), density in 1u32..=4) {
        let mut points = Vec::new();
        let mut values = Vec::new();
        let mut s = seed;
        for y in 0..1u64 << k {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            if (s >> 33) % 4 < density as u64 {
                points.push(y);
                values.push((s >> 20) & 1 == 1);
            }
        }
        prop_assume!(!points.is_empty());
        let g = PartialBooleanFunction::new(k, points.clone(), values.clone()).unwrap();
        let bits: Vec<Vec<bool>> = points.iter().map(|&y| (0..k).map(|i| y >> (k - 1 - i) & 1 == 1).collect()).collect();
        prop_assert_eq!(is_nc_partial(&g).unwrap().is_some(), oracle_nc_partial(k, &bits, &values).unwrap());
    }
}
