//! Upper bound on the number of SNC functions into `{0,1,2}`.
//!
//! An SNC function is described by a sequence of steps; step `j` peels
//! `d_i^j` extreme values of each variable `i` and fixes one output value.
//! The bound counts such step matrices (per-variable column sums `k_i − 1`,
//! no empty step) and weights each by the number of min/max splits and
//! output sequences it admits.
//!
//! [`enumerate_decompositions`] builds the matrices the brute-force way:
//! every per-variable length-`K` composition, combined, zero rows dropped,
//! duplicates merged. [`up_snc_recursive`] sums the same weights by
//! recursion on the remaining column sums, which scales to larger inputs.
//!
//! Counts are generic over any exact integer type with checked arithmetic;
//! overflow is an error, never a wrap.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::hash::Hash;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{CheckedAdd, CheckedMul, One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Default cap on the number of composition tuples visited.
pub const DEFAULT_CANDIDATE_CAP: u128 = 1 << 34;

/// Exact counting scalar.
pub trait Count: Clone + Zero + One + CheckedAdd + CheckedMul + From<u32> + Send + Sync {}

impl<T> Count for T where T: Clone + Zero + One + CheckedAdd + CheckedMul + From<u32> + Send + Sync {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WeightMode {
    /// Entries must be 0, 1 or 2; factors 2 and 3.
    #[default]
    Ternary,
    /// An entry `m` contributes a factor `m + 1`.
    Generalized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Enumerate,
    Recursive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountOptions {
    pub mode: WeightMode,
    pub candidate_cap: u128,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            mode: WeightMode::Ternary,
            candidate_cap: DEFAULT_CANDIDATE_CAP,
        }
    }
}

/// Steps of canalization counts, one row per step, one column per variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Decomposition {
    pub steps: Vec<Vec<u32>>,
}

impl Decomposition {
    pub fn weight<T: Count>(&self, mode: WeightMode) -> Result<T> {
        let mut hist = BTreeMap::new();
        for &m in self.steps.iter().flatten().filter(|&&m| m > 0) {
            *hist.entry(m).or_insert(0u32) += 1;
        }
        weight_from_histogram(&hist, self.steps.len(), mode)
    }
}

fn checked_pow<T: Count>(base: u32, exp: u32) -> Result<T> {
    let b = T::from(base);
    let mut acc = T::one();
    for _ in 0..exp {
        acc = acc.checked_mul(&b).ok_or(Error::Overflow("counting"))?;
    }
    Ok(acc)
}

fn mul<T: Count>(a: &T, b: &T) -> Result<T> {
    a.checked_mul(b).ok_or(Error::Overflow("counting"))
}

fn add<T: Count>(a: &T, b: &T) -> Result<T> {
    a.checked_add(b).ok_or(Error::Overflow("counting"))
}

fn entry_factor(m: u32, mode: WeightMode) -> Result<u32> {
    match (mode, m) {
        (WeightMode::Ternary, 1) => Ok(2),
        (WeightMode::Ternary, 2) => Ok(3),
        (WeightMode::Ternary, _) => Err(Error::validation(format!(
            "entry {m} needs the generalized weight (arities above 3)"
        ))),
        (WeightMode::Generalized, m) => m.checked_add(1).ok_or(Error::Overflow("counting")),
    }
}

/// `Π factor(m)^{count} · 9 · 2^{steps − 1}`.
fn weight_from_histogram<T: Count>(hist: &BTreeMap<u32, u32>, steps: usize, mode: WeightMode) -> Result<T> {
    if steps == 0 {
        return Err(Error::validation("a decomposition has at least one step"));
    }
    let mut w = T::from(9);
    for (&m, &count) in hist {
        w = mul(&w, &checked_pow(entry_factor(m, mode)?, count)?)?;
    }
    mul(&w, &checked_pow(2, steps as u32 - 1)?)
}

/// All length-`len` tuples of non-negative integers summing to `total`,
/// first entry slowest, in ascending order.
pub fn compositions(len: usize, total: u32) -> Vec<Vec<u32>> {
    if len == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    if len == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for v in 0..=total {
        for mut rest in compositions(len - 1, total - v) {
            rest.insert(0, v);
            out.push(rest);
        }
    }
    out
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r.saturating_mul(n - i) / (i + 1);
    }
    r
}

fn check_arities(arities: &[usize], mode: WeightMode) -> Result<u32> {
    if arities.is_empty() {
        return Err(Error::validation("at least one variable is needed"));
    }
    if let Some(&k) = arities.iter().find(|&&k| k == 0) {
        return Err(Error::validation(format!("arity {k} is not positive")));
    }
    if mode == WeightMode::Ternary {
        if let Some(&k) = arities.iter().find(|&&k| k > 3) {
            return Err(Error::validation(format!(
                "arity {k} needs the generalized weight (the default supports arities up to 3)"
            )));
        }
    }
    let total: usize = arities.iter().map(|k| k - 1).sum();
    if total == 0 {
        return Err(Error::validation("every arity is 1: there is nothing to peel"));
    }
    u32::try_from(total).map_err(|_| Error::Overflow("peel count"))
}

/// Number of composition tuples the brute-force enumeration visits.
pub fn candidate_count(arities: &[usize]) -> Result<u128> {
    let total: usize = arities.iter().map(|k| k.saturating_sub(1)).sum();
    if total == 0 {
        return Ok(0);
    }
    let mut product: u128 = 1;
    for &k in arities {
        let per = binomial((total + k - 2) as u128, (k - 1) as u128);
        product = product.saturating_mul(per);
    }
    Ok(product)
}

struct Layout {
    bits: u32,
    width: u32,
    n: usize,
}

impl Layout {
    fn new(arities: &[usize]) -> Result<Self> {
        let max = arities.iter().map(|k| k - 1).max().unwrap_or(0).max(1) as u64;
        let bits = 64 - max.leading_zeros();
        let width = bits * arities.len() as u32;
        if width > 64 {
            return Err(Error::Resource {
                what: "packed step width in bits",
                required: width as u128,
                cap: 64,
            });
        }
        Ok(Layout {
            bits,
            width,
            n: arities.len(),
        })
    }

    fn unpack_row(&self, row: u64) -> Vec<u32> {
        let mask = (1u64 << self.bits) - 1;
        (0..self.n)
            .map(|i| ((row >> (self.bits * i as u32)) & mask) as u32)
            .collect()
    }
}

/// Visits every tuple of compositions and records the non-zero rows of the
/// resulting matrix through `pack`. Partitioned on the first variable.
fn collect_keys<K, P>(arities: &[usize], layout: &Layout, pack: P) -> HashSet<K>
where
    K: Eq + Hash + Send,
    P: Fn(&[u64]) -> K + Sync,
{
    let total: usize = arities.iter().map(|k| k - 1).sum();
    // contrib[i][c][j]: entry j of composition c of variable i, shifted into place
    let contrib: Vec<Vec<Vec<u64>>> = arities
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            compositions(total, (k - 1) as u32)
                .into_iter()
                .map(|c| c.iter().map(|&e| (e as u64) << (layout.bits * i as u32)).collect())
                .collect()
        })
        .collect();

    contrib[0]
        .par_iter()
        .map(|first| {
            let mut seen = HashSet::new();
            let mut rows = vec![first.clone(); arities.len()];
            let mut buf = Vec::with_capacity(total);
            walk(&contrib, 1, &mut rows, &mut buf, &pack, &mut seen);
            seen
        })
        .reduce(HashSet::new, |mut a, b| {
            if a.len() < b.len() {
                return {
                    let mut b = b;
                    b.extend(a);
                    b
                };
            }
            a.extend(b);
            a
        })
}

fn walk<K: Eq + Hash>(
    contrib: &[Vec<Vec<u64>>],
    depth: usize,
    rows: &mut [Vec<u64>],
    buf: &mut Vec<u64>,
    pack: &impl Fn(&[u64]) -> K,
    seen: &mut HashSet<K>,
) {
    if depth == contrib.len() {
        buf.clear();
        buf.extend(rows[depth - 1].iter().copied().filter(|&r| r != 0));
        seen.insert(pack(buf));
        return;
    }
    for c in &contrib[depth] {
        let (done, todo) = rows.split_at_mut(depth);
        for ((out, &base), &add) in todo[0].iter_mut().zip(&done[depth - 1]).zip(c) {
            *out = base | add;
        }
        walk(contrib, depth + 1, rows, buf, pack, seen);
    }
}

/// Deduplicated decomposition rows, each row packed as in [`Layout`].
fn packed_decompositions(arities: &[usize], cap: u128, mode: WeightMode) -> Result<(Layout, Vec<Vec<u64>>)> {
    let total = check_arities(arities, mode)? as usize;
    let required = candidate_count(arities)?;
    if required > cap {
        return Err(Error::Resource {
            what: "decomposition candidates",
            required,
            cap,
        });
    }
    let layout = Layout::new(arities)?;
    let mut out: Vec<Vec<u64>> = if (total as u32) * layout.width <= 128 {
        // Rows are non-zero, so concatenating them into one integer is
        // injective: the row count is fixed by the position of the top bit.
        let w = layout.width;
        let keys = collect_keys(arities, &layout, |rows| {
            rows.iter().fold(0u128, |acc, &r| (acc << w) | r as u128)
        });
        let mask = if w == 64 { u64::MAX } else { (1u64 << w) - 1 };
        keys.into_iter()
            .map(|mut key| {
                let mut rows = Vec::new();
                while key != 0 {
                    rows.push(key as u64 & mask);
                    key >>= w;
                }
                rows.reverse();
                rows
            })
            .collect()
    } else {
        collect_keys(arities, &layout, |rows| rows.to_vec())
            .into_iter()
            .collect()
    };
    out.sort_unstable();
    Ok((layout, out))
}

/// The deduplicated step matrices of the brute-force construction, sorted.
pub fn enumerate_decompositions(arities: &[usize], cap: u128) -> Result<Vec<Decomposition>> {
    let (layout, packed) = packed_decompositions(arities, cap, WeightMode::Generalized)?;
    let mut out: Vec<Decomposition> = packed
        .into_iter()
        .map(|rows| Decomposition {
            steps: rows.into_iter().map(|r| layout.unpack_row(r)).collect(),
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Upper bound on the number of SNC functions `Π Ω_i → {0,1,2}`, by
/// brute-force enumeration of decompositions.
pub fn up_snc<T: Count>(arities: &[usize], options: &CountOptions) -> Result<T> {
    let (layout, packed) = packed_decompositions(arities, options.candidate_cap, options.mode)?;
    // Group decompositions sharing a weight before doing scalar arithmetic.
    let mut groups: HashMap<(Vec<(u32, u32)>, usize), u64> = HashMap::new();
    for rows in packed {
        let mut hist = BTreeMap::new();
        for r in &rows {
            for m in layout.unpack_row(*r).into_iter().filter(|&m| m > 0) {
                *hist.entry(m).or_insert(0u32) += 1;
            }
        }
        *groups.entry((hist.into_iter().collect(), rows.len())).or_insert(0) += 1;
    }
    let mut groups: Vec<_> = groups.into_iter().collect();
    groups.sort_unstable();
    let mut sum = T::zero();
    for ((hist, steps), count) in groups {
        let hist: BTreeMap<u32, u32> = hist.into_iter().collect();
        let w: T = weight_from_histogram(&hist, steps, options.mode)?;
        let times = T::from(u32::try_from(count).map_err(|_| Error::Overflow("group size"))?);
        sum = add(&sum, &mul(&w, &times)?)?;
    }
    Ok(sum)
}

/// Same bound as [`up_snc`], by recursion on the remaining column sums:
/// `H(r) = Σ_{0 < s ≤ r} W(s) · (1 if s = r else 2 H(r − s))` and the bound
/// is `9 H(k − 1)`.
pub fn up_snc_recursive<T: Count>(arities: &[usize], mode: WeightMode) -> Result<T> {
    check_arities(arities, mode)?;
    let n = arities.len();
    let dims: Vec<usize> = arities.to_vec(); // remaining r_i ∈ 0..k_i
    let states: usize = dims.iter().product();
    let mut strides = vec![1usize; n];
    for i in (0..n.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    let factor = |m: usize| -> Result<T> {
        if m == 0 {
            Ok(T::one())
        } else {
            Ok(T::from(entry_factor(m as u32, mode)?))
        }
    };
    let two = T::from(2);
    // h[state] for remaining vector decoded from `state`; states in
    // increasing flat order have every strictly smaller vector computed first.
    let mut h: Vec<T> = vec![T::zero(); states];
    let mut r = vec![0usize; n];
    for state in 1..states {
        for i in 0..n {
            r[i] = (state / strides[i]) % dims[i];
        }
        let mut acc = T::zero();
        // every 0 < s ≤ r, decoded last-coordinate-fastest; code 0 is s = 0
        let sub: usize = r.iter().map(|&v| v + 1).product();
        for code in 1..sub {
            let mut c = code;
            let mut w = T::one();
            let mut rest = 0;
            for i in (0..n).rev() {
                let si = c % (r[i] + 1);
                c /= r[i] + 1;
                w = mul(&w, &factor(si)?)?;
                rest += (r[i] - si) * strides[i];
            }
            let tail = if rest == 0 { T::one() } else { mul(&two, &h[rest])? };
            acc = add(&acc, &mul(&w, &tail)?)?;
        }
        h[state] = acc;
    }
    let top: usize = (0..n).map(|i| (dims[i] - 1) * strides[i]).sum();
    mul(&T::from(9), &h[top])
}

/// Upper bound on the SNC proportion for `n` variables with arities 2 or 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Proportion {
    pub snc: BigUint,
    pub total: BigUint,
}

impl Proportion {
    pub fn ratio(&self) -> BigRational {
        BigRational::new(self.snc.clone().into(), self.total.clone().into())
    }

    /// The bound can exceed 1 for tiny `n`; the presented value cannot.
    pub fn clamped(&self) -> BigRational {
        let r = self.ratio();
        if r > BigRational::one() {
            BigRational::one()
        } else {
            r
        }
    }
}

fn binomial_big(n: usize, k: usize) -> BigUint {
    let mut r = BigUint::one();
    for i in 0..k {
        r = r * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    r
}

/// `Σ_i C(n,i) up_snc([2]^{n−i} [3]^i)` over `Σ_i C(n,i) 3^{2^i 3^{n−i}}`.
pub fn up_prop_snc_by_nbvars(n: usize, options: &CountOptions, method: Method) -> Result<Proportion> {
    if n == 0 {
        return Err(Error::validation("at least one variable is needed"));
    }
    let mut snc = BigUint::zero();
    for i in 0..=n {
        let mut arities = vec![2; n - i];
        arities.extend(std::iter::repeat_n(3, i));
        let count: BigUint = match method {
            Method::Enumerate => up_snc(&arities, options)?,
            Method::Recursive => up_snc_recursive(&arities, options.mode)?,
        };
        snc += count * binomial_big(n, i);
    }
    let mut total = BigUint::zero();
    for i in 0..=n {
        let exp = 2u128.pow(i as u32) * 3u128.pow((n - i) as u32);
        let exp = u32::try_from(exp).map_err(|_| Error::Overflow("function count exponent"))?;
        total += BigUint::from(3u32).pow(exp) * binomial_big(n, i);
    }
    Ok(Proportion { snc, total })
}

/// `up_snc(arities) / 3^{|Ω|}`.
pub fn up_prop_snc_by_arity(arities: &[usize], options: &CountOptions) -> Result<BigRational> {
    let snc: BigUint = up_snc(arities, options)?;
    let points: usize = arities.iter().product();
    let total = BigUint::from(3u32).pow(u32::try_from(points).map_err(|_| Error::Overflow("domain size"))?);
    Ok(BigRational::new(snc.into(), total.into()))
}

fn round_div(num: &num_bigint::BigInt, den: &num_bigint::BigInt) -> num_bigint::BigInt {
    // half away from zero; inputs are non-negative here
    let (q, r) = num.div_rem(den);
    if r * 2u32 >= *den {
        q + 1u32
    } else {
        q
    }
}

/// Decimal scientific notation with `digits` significant digits, computed
/// on exact integers (works far below the `f64` range).
pub fn format_scientific(x: &BigRational, digits: usize) -> String {
    let digits = digits.max(1);
    if x.is_zero() {
        return format!("{:.*}e0", digits - 1, 0.0);
    }
    let sign = if x.is_negative() { "-" } else { "" };
    let x = x.abs();
    let (num, den) = (x.numer().clone(), x.denom().clone());
    let ten = num_bigint::BigInt::from(10u32);
    // exponent estimate from digit counts, then correct by one
    let mut e = num.to_string().len() as i64 - den.to_string().len() as i64;
    let scaled = |e: i64| -> (num_bigint::BigInt, num_bigint::BigInt) {
        if e >= 0 {
            (num.clone(), den.clone() * ten.pow(e as u32))
        } else {
            (num.clone() * ten.pow((-e) as u32), den.clone())
        }
    };
    let (a, b) = scaled(e);
    if a < b {
        e -= 1;
    }
    let shift = digits as i64 - 1 - e;
    let (a, b) = if shift >= 0 {
        (num.clone() * ten.pow(shift as u32), den.clone())
    } else {
        (num.clone(), den.clone() * ten.pow((-shift) as u32))
    };
    let mut m = round_div(&a, &b);
    if m >= ten.pow(digits as u32) {
        m /= 10u32;
        e += 1;
    }
    let s = m.to_string();
    if digits == 1 {
        format!("{sign}{s}e{e}")
    } else {
        format!("{sign}{}.{}e{e}", &s[..1], &s[1..])
    }
}

/// Fixed-point decimal with `decimals` places, rounded half up.
pub fn format_fixed(x: &BigRational, decimals: usize) -> String {
    let ten = num_bigint::BigInt::from(10u32);
    let sign = if x.is_negative() { "-" } else { "" };
    let x = x.abs();
    let m = round_div(&(x.numer() * ten.pow(decimals as u32)), x.denom());
    let s = format!("{:0>width$}", m.to_string(), width = decimals + 1);
    if decimals == 0 {
        format!("{sign}{s}")
    } else {
        let (int, frac) = s.split_at(s.len() - decimals);
        format!("{sign}{int}.{frac}")
    }
}

/// Nearest `f64`, or `None` when outside its range.
pub fn approximate(x: &BigRational) -> Option<f64> {
    let v = x.numer().to_f64()? / x.denom().to_f64()?;
    (v.is_finite() && (v != 0.0 || x.is_zero())).then_some(v)
}
