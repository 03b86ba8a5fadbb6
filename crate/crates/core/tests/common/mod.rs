#![allow(dead_code)]

use rand::Rng;
use softnc::{generate_snc, Level, MixedRadixDomain, MultivaluedFunction, Network, SncWitness};

/// Every function `domain → {0..codomain}`, in lexicographic table order.
pub fn all_functions(domain: &MixedRadixDomain, codomain: usize) -> impl Iterator<Item = MultivaluedFunction> + '_ {
    let size = domain.cardinality();
    let count = (codomain as u64).pow(size as u32);
    (0..count).map(move |mut code| {
        let mut values = vec![0; size];
        for v in values.iter_mut().rev() {
            *v = (code % codomain as u64) as Level;
            code /= codomain as u64;
        }
        MultivaluedFunction::new(domain.clone(), codomain, values).unwrap()
    })
}

/// All domains with arities in {2, 3}, at most `max_points` points and at
/// most `max_dim` coordinates.
pub fn small_domains(max_dim: usize, max_points: usize) -> Vec<MixedRadixDomain> {
    let mut out = Vec::new();
    let mut frontier: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..max_dim {
        let mut next = Vec::new();
        for a in &frontier {
            for k in [2, 3] {
                let mut b = a.clone();
                b.push(k);
                if b.iter().product::<usize>() <= max_points {
                    out.push(MixedRadixDomain::new(b.clone()).unwrap());
                    next.push(b);
                }
            }
        }
        frontier = next;
    }
    out
}

pub fn random_arities<R: Rng>(rng: &mut R, max_dim: usize) -> Vec<usize> {
    let n = rng.gen_range(1..=max_dim);
    (0..n).map(|_| rng.gen_range(2..=3)).collect()
}

/// A random SNC network together with the witness of each component.
pub fn snc_network<R: Rng>(domain: &MixedRadixDomain, rng: &mut R) -> (Network, Vec<SncWitness>) {
    let (components, witnesses): (Vec<_>, Vec<_>) = (0..domain.dimension())
        .map(|j| generate_snc(domain, domain.arity(j), rng).unwrap())
        .unzip();
    (Network::new(components).unwrap(), witnesses)
}

pub fn random_network<R: Rng>(domain: &MixedRadixDomain, rng: &mut R) -> Network {
    Network::from_map(domain.clone(), |_| {
        (0..domain.dimension())
            .map(|j| rng.gen_range(0..domain.arity(j)))
            .collect()
    })
    .unwrap()
}
