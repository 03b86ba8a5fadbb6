//! Brute-force reference deciders, written straight from the definitions.
//!
//! Nothing here is shared with the fast checkers: no memoization, no region
//! types, no witnesses. They exist to be compared against.

use crate::domain::{Level, MultivaluedFunction};
use crate::error::{Error, Result};

/// Budget on `n! · Π 2(k_i − 1)` for [`oracle_nc`].
pub const NC_BUDGET: u128 = 10_000_000;
/// Largest domain accepted by the recursive oracles.
pub const MAX_POINTS: usize = 512;

fn all_points(arities: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &k in arities {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..k).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for slot in 0..=p.len() {
            let mut q = p.clone();
            q.insert(slot, n - 1);
            out.push(q);
        }
    }
    out
}

/// Strict non-empty prefixes `{0..t}` and suffixes `{t..k-1}` as value lists.
fn segments(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for t in 0..k - 1 {
        out.push((0..=t).collect());
    }
    for t in 1..k {
        out.push((t..k).collect());
    }
    out
}

/// NC by sweeping every order, every segment choice, and checking that each
/// layer of the nesting is constant with the last two outputs distinct.
pub fn oracle_nc(f: &MultivaluedFunction) -> Result<bool> {
    let arities = f.domain().arities().to_vec();
    let n = arities.len();
    if arities.iter().any(|&k| k < 2) {
        return Err(Error::validation("NC needs every arity to be at least 2"));
    }
    let mut cost: u128 = (1..=n as u128).product();
    for &k in &arities {
        cost = cost.saturating_mul(2 * (k as u128 - 1));
    }
    if cost > NC_BUDGET {
        return Err(Error::Resource {
            what: "NC oracle sweep",
            required: cost,
            cap: NC_BUDGET,
        });
    }
    let points = all_points(&arities);
    let values: Vec<Level> = points.iter().map(|x| f.eval(x).unwrap()).collect();
    let per_coord: Vec<Vec<Vec<usize>>> = arities.iter().map(|&k| segments(k)).collect();

    for sigma in permutations(n) {
        let total: usize = sigma.iter().map(|&c| per_coord[c].len()).product();
        for code in 0..total {
            let mut rest = code;
            let mut chosen: Vec<&[usize]> = vec![&[]; n];
            for i in (0..n).rev() {
                let options = &per_coord[sigma[i]];
                chosen[i] = &options[rest % options.len()];
                rest /= options.len();
            }
            // layer of x = first position i with x_{σ(i)} ∈ A_i, or n
            let mut outputs: Vec<Option<Level>> = vec![None; n + 1];
            let consistent = points.iter().zip(&values).all(|(x, &v)| {
                let layer = (0..n).find(|&i| chosen[i].contains(&x[sigma[i]])).unwrap_or(n);
                *outputs[layer].get_or_insert(v) == v
            });
            if consistent && outputs[n - 1] != outputs[n] {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

fn check_size(f: &MultivaluedFunction) -> Result<()> {
    let size = f.domain().cardinality();
    if size > MAX_POINTS {
        return Err(Error::Resource {
            what: "oracle domain size",
            required: size as u128,
            cap: MAX_POINTS as u128,
        });
    }
    Ok(())
}

/// Recursive peeling over explicit value lists. `extremes_only` selects SNC
/// (peel the min or max of a residual range) over WNC (peel any value).
fn peelable(f: &MultivaluedFunction, sets: &[Vec<usize>], extremes_only: bool) -> bool {
    let size: usize = sets.iter().map(Vec::len).product();
    if size == 1 {
        return true;
    }
    for i in 0..sets.len() {
        if sets[i].len() < 2 {
            continue;
        }
        let candidates: Vec<usize> = if extremes_only {
            vec![sets[i][0], *sets[i].last().unwrap()]
        } else {
            sets[i].clone()
        };
        for a in candidates {
            let mut slice = sets.to_vec();
            slice[i] = vec![a];
            let vals: Vec<Level> = all_points_of(&slice).iter().map(|x| f.eval(x).unwrap()).collect();
            if vals.iter().any(|&v| v != vals[0]) {
                continue;
            }
            let mut rest = sets.to_vec();
            rest[i].retain(|&v| v != a);
            if peelable(f, &rest, extremes_only) {
                return true;
            }
        }
    }
    false
}

fn all_points_of(sets: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for s in sets {
        out = out
            .into_iter()
            .flat_map(|p| {
                s.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

pub fn oracle_snc(f: &MultivaluedFunction) -> Result<bool> {
    check_size(f)?;
    let sets: Vec<Vec<usize>> = f.domain().arities().iter().map(|&k| (0..k).collect()).collect();
    Ok(peelable(f, &sets, true))
}

pub fn oracle_wnc(f: &MultivaluedFunction) -> Result<bool> {
    check_size(f)?;
    let sets: Vec<Vec<usize>> = f.domain().arities().iter().map(|&k| (0..k).collect()).collect();
    Ok(peelable(f, &sets, false))
}

/// Partial Boolean NC on an explicit point list (bit vectors as `Vec<bool>`):
/// some order of all `k` coordinates and some tested values make every
/// nesting layer except the last constant.
pub fn oracle_nc_partial(k: usize, points: &[Vec<bool>], values: &[bool]) -> Result<bool> {
    let cost: u128 = (1..=k as u128).product::<u128>() << k;
    if cost > NC_BUDGET {
        return Err(Error::Resource {
            what: "partial NC oracle sweep",
            required: cost,
            cap: NC_BUDGET,
        });
    }
    for sigma in permutations(k) {
        for tested in 0u64..1 << k {
            let mut outputs: Vec<Option<bool>> = vec![None; k];
            let ok = points.iter().zip(values).all(|(y, &v)| {
                match (0..k).find(|&i| y[sigma[i]] == (tested >> i & 1 == 1)) {
                    None => true,
                    Some(layer) => *outputs[layer].get_or_insert(v) == v,
                }
            });
            if ok {
                return Ok(true);
            }
        }
    }
    Ok(false)
}
