//! Decision procedures for canalization of multivalued functions.
//!
//! * canalizing / softly canalizing: one coordinate value fixes the output;
//! * NC: every coordinate is consumed once, in some order, through a strict
//!   prefix or suffix segment of its range, and the last two outputs differ;
//! * SNC: the domain is peeled one extreme hyperplane `x_i = min` or
//!   `x_i = max` at a time, each peel having a constant output, coordinates
//!   may be revisited;
//! * WNC: like SNC, but any residual value may be peeled.
//!
//! Every positive answer comes with a witness that replays to the function.
//! Searches backtrack (no peel order is assumed confluent) and memoize failed
//! residual domains. Coordinates are tried in ascending order, lower values
//! (and `min`) first, so witnesses are deterministic.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::domain::{
    constant_on, iterate, slice_constant, IntervalBox, Level, MixedRadixDomain, MultivaluedFunction, Region, Side,
    SliceValue, SubsetBox,
};
use crate::error::{Error, Result};

/// Default cardinality cap for the NC search.
pub const DEFAULT_NC_CAP: usize = 1 << 22;
/// Default cap on `K = Σ (k_i − 1)` for the WNC search.
pub const DEFAULT_WNC_MAX_PEELS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    pub nc_max_points: usize,
    pub wnc_max_peels: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            nc_max_points: DEFAULT_NC_CAP,
            wnc_max_peels: DEFAULT_WNC_MAX_PEELS,
        }
    }
}

/// `f(x) = output` whenever `x_coord = value`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Canalization {
    pub coord: usize,
    pub value: usize,
    pub output: Level,
}

/// Canalizing: `f = b` on `{x_i = a}` and `f` is not `b` everywhere else.
pub fn is_canalizing(f: &MultivaluedFunction) -> Option<Canalization> {
    let domain = f.domain();
    let full = domain.full_box();
    for coord in 0..domain.dimension() {
        if domain.arity(coord) < 2 {
            continue;
        }
        for value in 0..domain.arity(coord) {
            let Some(output) = slice_constant(f, &full, coord, value)
                .ok()
                .and_then(SliceValue::constant)
            else {
                continue;
            };
            let rest = SubsetBox::full(domain)
                .and_then(|b| b.remove(coord, value))
                .expect("arity >= 2");
            if iterate(domain, &rest).any(|i| f.value(i) != output) {
                return Some(Canalization { coord, value, output });
            }
        }
    }
    None
}

/// Softly canalizing: `f = b` on `{x_i = a}`; constants qualify.
pub fn is_softly_canalizing(f: &MultivaluedFunction) -> Option<Canalization> {
    let domain = f.domain();
    let full = domain.full_box();
    (0..domain.dimension())
        .flat_map(|coord| (0..domain.arity(coord)).map(move |value| (coord, value)))
        .find_map(|(coord, value)| {
            let output = slice_constant(f, &full, coord, value).ok()?.constant()?;
            Some(Canalization { coord, value, output })
        })
}

// ---------------------------------------------------------------------------
// SNC

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SncStep {
    pub coord: usize,
    pub value: usize,
    pub side: Side,
    pub output: Level,
}

/// A peeling sequence: step `i` fixes `f = output_i` on the residual
/// hyperplane `x_{coord_i} = value_i`, where `value_i` is the current min or
/// max of that coordinate. After the `K` steps a single point remains, whose
/// value is `terminal`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SncWitness {
    pub steps: Vec<SncStep>,
    pub terminal: Level,
}

impl SncWitness {
    /// Checks that every step peels the current extreme of a non-singleton
    /// coordinate and that the steps exhaust the domain to one point.
    pub fn validate(&self, domain: &MixedRadixDomain) -> Result<()> {
        let mut region = domain.full_box();
        for (i, step) in self.steps.iter().enumerate() {
            if step.coord >= domain.dimension() {
                return Err(Error::validation(format!("step {i}: no coordinate {}", step.coord)));
            }
            if region.width(step.coord) < 2 {
                return Err(Error::validation(format!(
                    "step {i}: coordinate {} is already a singleton",
                    step.coord
                )));
            }
            if region.extreme(step.coord, step.side) != step.value {
                return Err(Error::validation(format!(
                    "step {i}: {} is not the {:?} of the residual range {}..={}",
                    step.value,
                    step.side,
                    region.lo()[step.coord],
                    region.hi()[step.coord]
                )));
            }
            region = region.peel(step.coord, step.side)?;
        }
        if region.cardinality() != 1 {
            return Err(Error::validation(format!(
                "{} steps leave {} points; {} are needed",
                self.steps.len(),
                region.cardinality(),
                domain.peel_count()
            )));
        }
        Ok(())
    }

    /// Value the witness assigns to `point` (first matching step, else the
    /// terminal value). Assumes a validated witness.
    pub fn evaluate(&self, point: &[usize]) -> Level {
        self.steps
            .iter()
            .find(|s| point[s.coord] == s.value)
            .map_or(self.terminal, |s| s.output)
    }

    pub fn to_function(&self, domain: &MixedRadixDomain, codomain: usize) -> Result<MultivaluedFunction> {
        self.validate(domain)?;
        MultivaluedFunction::from_fn(domain.clone(), codomain, |x| self.evaluate(x))
    }

    pub fn verifies(&self, f: &MultivaluedFunction) -> bool {
        self.validate(f.domain()).is_ok() && f.domain().points().all(|x| f.eval(&x).ok() == Some(self.evaluate(&x)))
    }
}

/// Soft nested canalization, with a witness peel sequence.
pub fn is_snc(f: &MultivaluedFunction) -> Option<SncWitness> {
    let mut search = PeelSearch {
        f,
        steps: Vec::with_capacity(f.domain().peel_count()),
        failed: HashSet::new(),
    };
    let start = f.domain().full_box();
    if !search.snc(&start) {
        return None;
    }
    let mut point = vec![0; f.domain().dimension()];
    let mut region = start;
    for s in &search.steps {
        region = region.peel(s.coord, s.side).expect("search only records valid peels");
    }
    point.copy_from_slice(region.lo());
    Some(SncWitness {
        steps: search.steps,
        terminal: f.eval(&point).expect("residual point is in the domain"),
    })
}

struct PeelSearch<'a, S, B> {
    f: &'a MultivaluedFunction,
    steps: Vec<S>,
    failed: HashSet<B>,
}

impl PeelSearch<'_, SncStep, IntervalBox> {
    fn snc(&mut self, region: &IntervalBox) -> bool {
        if region.cardinality() == 1 {
            return true;
        }
        if self.failed.contains(region) {
            return false;
        }
        for coord in 0..region.dimension() {
            if region.width(coord) < 2 {
                continue;
            }
            for side in [Side::Min, Side::Max] {
                let value = region.extreme(coord, side);
                let Ok(SliceValue::Constant(output)) = slice_constant(self.f, region, coord, value) else {
                    continue;
                };
                self.steps.push(SncStep {
                    coord,
                    value,
                    side,
                    output,
                });
                let next = region.peel(coord, side).expect("width >= 2");
                if self.snc(&next) {
                    return true;
                }
                self.steps.pop();
            }
        }
        self.failed.insert(region.clone());
        false
    }
}

// ---------------------------------------------------------------------------
// WNC

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WncStep {
    pub coord: usize,
    pub value: usize,
    pub output: Level,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WncWitness {
    pub steps: Vec<WncStep>,
    pub terminal: Level,
}

impl WncWitness {
    pub fn validate(&self, domain: &MixedRadixDomain) -> Result<()> {
        let mut region = SubsetBox::full(domain)?;
        for (i, step) in self.steps.iter().enumerate() {
            if step.coord >= domain.dimension() {
                return Err(Error::validation(format!("step {i}: no coordinate {}", step.coord)));
            }
            region = region
                .remove(step.coord, step.value)
                .map_err(|e| Error::validation(format!("step {i}: {e}")))?;
        }
        if region.cardinality() != 1 {
            return Err(Error::validation(format!(
                "{} steps leave {} points",
                self.steps.len(),
                region.cardinality()
            )));
        }
        Ok(())
    }

    pub fn evaluate(&self, point: &[usize]) -> Level {
        self.steps
            .iter()
            .find(|s| point[s.coord] == s.value)
            .map_or(self.terminal, |s| s.output)
    }

    pub fn verifies(&self, f: &MultivaluedFunction) -> bool {
        self.validate(f.domain()).is_ok() && f.domain().points().all(|x| f.eval(&x).ok() == Some(self.evaluate(&x)))
    }
}

pub fn is_wnc(f: &MultivaluedFunction) -> Result<Option<WncWitness>> {
    is_wnc_with(f, &SearchLimits::default())
}

/// Weak nested canalization. Residual domains are arbitrary sub-boxes, so
/// the search is guarded by `limits.wnc_max_peels`.
pub fn is_wnc_with(f: &MultivaluedFunction, limits: &SearchLimits) -> Result<Option<WncWitness>> {
    let domain = f.domain();
    let peels = domain.peel_count();
    if peels > limits.wnc_max_peels {
        return Err(Error::Resource {
            what: "WNC search depth K",
            required: peels as u128,
            cap: limits.wnc_max_peels as u128,
        });
    }
    let start = SubsetBox::full(domain)?;
    let mut search = PeelSearch {
        f,
        steps: Vec::with_capacity(peels),
        failed: HashSet::new(),
    };
    if !search.wnc(&start) {
        return Ok(None);
    }
    let mut region = start;
    for s in &search.steps {
        region = region.remove(s.coord, s.value)?;
    }
    let point: Vec<usize> = (0..domain.dimension()).map(|i| region.values(i)[0]).collect();
    Ok(Some(WncWitness {
        steps: search.steps,
        terminal: f.eval(&point)?,
    }))
}

impl PeelSearch<'_, WncStep, SubsetBox> {
    fn wnc(&mut self, region: &SubsetBox) -> bool {
        if region.cardinality() == 1 {
            return true;
        }
        if self.failed.contains(region) {
            return false;
        }
        for coord in 0..region.dimension() {
            if region.size(coord) < 2 {
                continue;
            }
            for value in region.values(coord) {
                let Ok(SliceValue::Constant(output)) = slice_constant(self.f, region, coord, value) else {
                    continue;
                };
                self.steps.push(WncStep { coord, value, output });
                let next = region.remove(coord, value).expect("size >= 2");
                if self.wnc(&next) {
                    return true;
                }
                self.steps.pop();
            }
        }
        self.failed.insert(region.clone());
        false
    }
}

// ---------------------------------------------------------------------------
// NC

/// A non-empty strict segment of `{0, …, k − 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Segment {
    /// `{0, …, last}`
    Prefix(usize),
    /// `{first, …, k − 1}`
    Suffix(usize),
}

impl Segment {
    pub fn contains(self, value: usize) -> bool {
        match self {
            Segment::Prefix(last) => value <= last,
            Segment::Suffix(first) => value >= first,
        }
    }

    /// Inclusive bounds of the segment inside `{0, …, arity − 1}`.
    pub fn bounds(self, arity: usize) -> (usize, usize) {
        match self {
            Segment::Prefix(last) => (0, last),
            Segment::Suffix(first) => (first, arity - 1),
        }
    }

    /// Bounds of the complement, which is again a segment.
    pub fn complement_bounds(self, arity: usize) -> (usize, usize) {
        match self {
            Segment::Prefix(last) => (last + 1, arity - 1),
            Segment::Suffix(first) => (0, first - 1),
        }
    }

    pub fn is_strict(self, arity: usize) -> bool {
        match self {
            Segment::Prefix(last) => last + 1 < arity,
            Segment::Suffix(first) => first >= 1 && first < arity,
        }
    }

    /// Every strict segment of `{0, …, arity − 1}`: prefixes by length, then
    /// suffixes from the longest.
    pub fn all_strict(arity: usize) -> impl Iterator<Item = Segment> {
        let prefixes = (0..arity.saturating_sub(1)).map(Segment::Prefix);
        let suffixes = (1..arity).map(Segment::Suffix);
        prefixes.chain(suffixes)
    }
}

/// `f(x) = outputs[i]` for the first `i` with `x_{order[i]} ∈ segments[i]`,
/// and `outputs[n]` when no segment matches.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NcWitness {
    pub order: Vec<usize>,
    pub segments: Vec<Segment>,
    pub outputs: Vec<Level>,
}

impl NcWitness {
    pub fn validate(&self, domain: &MixedRadixDomain) -> Result<()> {
        let n = domain.dimension();
        if self.order.len() != n || self.segments.len() != n || self.outputs.len() != n + 1 {
            return Err(Error::validation(format!(
                "an NC witness over {n} coordinates needs {n} coordinates, {n} segments and {} outputs",
                n + 1
            )));
        }
        let mut seen = vec![false; n];
        for &c in &self.order {
            if c >= n || std::mem::replace(&mut seen[c], true) {
                return Err(Error::validation("coordinate order is not a permutation"));
            }
        }
        for (i, (&c, &seg)) in self.order.iter().zip(&self.segments).enumerate() {
            if !seg.is_strict(domain.arity(c)) {
                return Err(Error::validation(format!(
                    "segment {i} ({seg:?}) is not a non-empty strict segment of 0..{}",
                    domain.arity(c)
                )));
            }
        }
        if self.outputs[n - 1] == self.outputs[n] {
            return Err(Error::validation("the last two outputs must differ"));
        }
        Ok(())
    }

    pub fn evaluate(&self, point: &[usize]) -> Level {
        self.order
            .iter()
            .zip(&self.segments)
            .position(|(&c, seg)| seg.contains(point[c]))
            .map_or(self.outputs[self.order.len()], |i| self.outputs[i])
    }

    pub fn to_function(&self, domain: &MixedRadixDomain, codomain: usize) -> Result<MultivaluedFunction> {
        self.validate(domain)?;
        MultivaluedFunction::from_fn(domain.clone(), codomain, |x| self.evaluate(x))
    }

    pub fn verifies(&self, f: &MultivaluedFunction) -> bool {
        self.validate(f.domain()).is_ok() && f.domain().points().all(|x| f.eval(&x).ok() == Some(self.evaluate(&x)))
    }
}

pub fn is_nc(f: &MultivaluedFunction) -> Result<Option<NcWitness>> {
    is_nc_with(f, &SearchLimits::default())
}

/// Nested canalization in the prefix/suffix segment sense, allowing mixed
/// arities. Coordinates of arity 1 admit no strict segment and are rejected.
pub fn is_nc_with(f: &MultivaluedFunction, limits: &SearchLimits) -> Result<Option<NcWitness>> {
    let domain = f.domain();
    if let Some(c) = domain.arities().iter().position(|&k| k < 2) {
        return Err(Error::validation(format!(
            "coordinate {c} has arity 1; NC needs a strict segment on every coordinate"
        )));
    }
    if domain.cardinality() > limits.nc_max_points {
        return Err(Error::Resource {
            what: "NC search domain size",
            required: domain.cardinality() as u128,
            cap: limits.nc_max_points as u128,
        });
    }
    let mut search = NcSearch {
        f,
        order: Vec::new(),
        segments: Vec::new(),
        outputs: Vec::new(),
        used: vec![false; domain.dimension()],
        failed: HashSet::new(),
    };
    Ok(search.run(&domain.full_box()).then_some(NcWitness {
        order: search.order,
        segments: search.segments,
        outputs: search.outputs,
    }))
}

struct NcSearch<'a> {
    f: &'a MultivaluedFunction,
    order: Vec<usize>,
    segments: Vec<Segment>,
    outputs: Vec<Level>,
    used: Vec<bool>,
    // residual boxes identify the used coordinates: those are the narrowed ones
    failed: HashSet<IntervalBox>,
}

impl NcSearch<'_> {
    fn constant(&self, region: &IntervalBox) -> Option<Level> {
        constant_on(self.f, iterate(self.f.domain(), region)).constant()
    }

    fn run(&mut self, residual: &IntervalBox) -> bool {
        if self.failed.contains(residual) {
            return false;
        }
        let remaining = self.used.iter().filter(|u| !**u).count();
        let domain = self.f.domain();
        for coord in 0..domain.dimension() {
            if self.used[coord] {
                continue;
            }
            let arity = domain.arity(coord);
            for seg in Segment::all_strict(arity) {
                let (lo, hi) = seg.bounds(arity);
                let inside = residual
                    .restrict(coord, lo, hi)
                    .expect("unused coordinates span their range");
                let Some(c) = self.constant(&inside) else {
                    continue;
                };
                let (clo, chi) = seg.complement_bounds(arity);
                let outside = residual
                    .restrict(coord, clo, chi)
                    .expect("complement is inside the range");
                if remaining == 1 {
                    match self.constant(&outside) {
                        Some(last) if last != c => {
                            self.order.push(coord);
                            self.segments.push(seg);
                            self.outputs.extend([c, last]);
                            return true;
                        }
                        _ => continue,
                    }
                }
                self.order.push(coord);
                self.segments.push(seg);
                self.outputs.push(c);
                self.used[coord] = true;
                if self.run(&outside) {
                    return true;
                }
                self.used[coord] = false;
                self.order.pop();
                self.segments.pop();
                self.outputs.pop();
            }
        }
        self.failed.insert(residual.clone());
        false
    }
}

/// The SNC witness of an NC function obtained by peeling each segment from
/// its extreme end inward (in the NC order, with that segment's output), and
/// then each complement from its outer extreme inward (with the final
/// output), leaving the innermost complement value of every coordinate.
pub fn snc_witness_from_nc(w: &NcWitness, domain: &MixedRadixDomain) -> Result<SncWitness> {
    w.validate(domain)?;
    let n = domain.dimension();
    let last = w.outputs[n];
    let mut steps = Vec::with_capacity(domain.peel_count());
    for ((&coord, &seg), &output) in w.order.iter().zip(&w.segments).zip(&w.outputs) {
        let arity = domain.arity(coord);
        match seg {
            Segment::Prefix(end) => steps.extend((0..=end).map(|value| SncStep {
                coord,
                value,
                side: Side::Min,
                output,
            })),
            Segment::Suffix(start) => steps.extend((start..arity).rev().map(|value| SncStep {
                coord,
                value,
                side: Side::Max,
                output,
            })),
        }
    }
    for (&coord, &seg) in w.order.iter().zip(&w.segments) {
        let arity = domain.arity(coord);
        let (lo, hi) = seg.complement_bounds(arity);
        match seg {
            // complement {end+1..k-1}: peel from k-1 down, keep end+1
            Segment::Prefix(_) => steps.extend(((lo + 1)..=hi).rev().map(|value| SncStep {
                coord,
                value,
                side: Side::Max,
                output: last,
            })),
            // complement {0..start-1}: peel from 0 up, keep start-1
            Segment::Suffix(_) => steps.extend((lo..hi).map(|value| SncStep {
                coord,
                value,
                side: Side::Min,
                output: last,
            })),
        }
    }
    let witness = SncWitness { steps, terminal: last };
    witness.validate(domain)?;
    Ok(witness)
}

// ---------------------------------------------------------------------------
// Random generators

/// Samples an SNC function by peeling random extremes with random outputs.
pub fn generate_snc<R: Rng + ?Sized>(
    domain: &MixedRadixDomain,
    codomain: usize,
    rng: &mut R,
) -> Result<(MultivaluedFunction, SncWitness)> {
    if codomain == 0 {
        return Err(Error::validation("codomain arity must be positive"));
    }
    let mut region = domain.full_box();
    let mut steps = Vec::with_capacity(domain.peel_count());
    loop {
        let open: Vec<usize> = (0..domain.dimension()).filter(|&i| region.width(i) >= 2).collect();
        let Some(&coord) = open.choose(rng) else { break };
        let side = if rng.gen_bool(0.5) { Side::Min } else { Side::Max };
        steps.push(SncStep {
            coord,
            value: region.extreme(coord, side),
            side,
            output: rng.gen_range(0..codomain) as Level,
        });
        region = region.peel(coord, side)?;
    }
    let witness = SncWitness {
        steps,
        terminal: rng.gen_range(0..codomain) as Level,
    };
    Ok((witness.to_function(domain, codomain)?, witness))
}

/// Samples an NC function from a random order, random strict segments and
/// random outputs whose last two entries differ.
pub fn generate_nc<R: Rng + ?Sized>(
    domain: &MixedRadixDomain,
    codomain: usize,
    rng: &mut R,
) -> Result<(MultivaluedFunction, NcWitness)> {
    if domain.arities().iter().any(|&k| k < 2) {
        return Err(Error::validation("NC functions need every arity >= 2"));
    }
    if codomain < 2 {
        return Err(Error::validation("NC functions need at least two output values"));
    }
    let n = domain.dimension();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let segments = order
        .iter()
        .map(|&c| {
            let all: Vec<Segment> = Segment::all_strict(domain.arity(c)).collect();
            *all.choose(rng).expect("arity >= 2 has strict segments")
        })
        .collect();
    let mut outputs: Vec<Level> = (0..n).map(|_| rng.gen_range(0..codomain) as Level).collect();
    let mut last = rng.gen_range(0..codomain - 1) as Level;
    if last >= outputs[n - 1] {
        last += 1;
    }
    outputs.push(last);
    let witness = NcWitness {
        order,
        segments,
        outputs,
    };
    Ok((witness.to_function(domain, codomain)?, witness))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn dom(arities: &[usize]) -> MixedRadixDomain {
        MixedRadixDomain::new(arities.to_vec()).unwrap()
    }

    fn min33() -> MultivaluedFunction {
        MultivaluedFunction::from_fn(dom(&[3, 3]), 3, |x| x[0].min(x[1]) as Level).unwrap()
    }

    pub(crate) fn counterexample() -> MultivaluedFunction {
        MultivaluedFunction::new(dom(&[3, 3]), 3, vec![2, 0, 0, 1, 1, 1, 2, 0, 2]).unwrap()
    }

    #[test]
    fn canalizing_examples() {
        let c = MultivaluedFunction::constant(dom(&[3, 3]), 3, 1).unwrap();
        assert_eq!(is_canalizing(&c), None);
        assert_eq!(
            is_canalizing(&min33()),
            Some(Canalization {
                coord: 0,
                value: 0,
                output: 0
            })
        );
        let id = MultivaluedFunction::from_fn(dom(&[3]), 3, |x| x[0] as Level).unwrap();
        assert_eq!(
            is_canalizing(&id),
            Some(Canalization {
                coord: 0,
                value: 0,
                output: 0
            })
        );
    }

    #[test]
    fn softly_canalizing_examples() {
        let c = MultivaluedFunction::constant(dom(&[3, 2]), 3, 2).unwrap();
        assert_eq!(
            is_softly_canalizing(&c),
            Some(Canalization {
                coord: 0,
                value: 0,
                output: 2
            })
        );
        // the counterexample is only softly canalizing at the middle value
        let f = counterexample();
        assert_eq!(
            is_softly_canalizing(&f),
            Some(Canalization {
                coord: 0,
                value: 1,
                output: 1
            })
        );
        let full = f.domain().full_box();
        for coord in 0..2 {
            for value in [0, 2] {
                assert_eq!(slice_constant(&f, &full, coord, value).unwrap(), SliceValue::Mixed);
            }
        }
    }

    #[test]
    fn snc_of_min_peels_as_expected() {
        let w = is_snc(&min33()).unwrap();
        let expected = [(0, 0, 0), (1, 0, 0), (0, 1, 1), (1, 1, 1)];
        let got: Vec<_> = w.steps.iter().map(|s| (s.coord, s.value, s.output)).collect();
        assert_eq!(got, expected);
        assert_eq!(w.terminal, 2);
        assert!(w.verifies(&min33()));
    }

    #[test]
    fn counterexample_is_wnc_only() {
        let f = counterexample();
        assert!(is_snc(&f).is_none());
        assert!(is_nc(&f).unwrap().is_none());
        let w = is_wnc(&f).unwrap().unwrap();
        assert_eq!(
            w.steps[0],
            WncStep {
                coord: 0,
                value: 1,
                output: 1
            }
        );
        assert!(w.verifies(&f));
    }

    #[test]
    fn constants_are_snc_not_nc() {
        let c = MultivaluedFunction::constant(dom(&[3, 2, 3]), 3, 1).unwrap();
        assert!(is_snc(&c).unwrap().verifies(&c));
        assert!(is_nc(&c).unwrap().is_none());
    }

    #[test]
    fn nc_rejects_unit_arity() {
        let f = MultivaluedFunction::constant(dom(&[1, 2]), 2, 0).unwrap();
        assert!(matches!(is_nc(&f), Err(Error::Validation(_))));
        // SNC accepts it
        assert!(is_snc(&f).is_some());
    }

    #[test]
    fn nc_cap_is_reported() {
        let f = MultivaluedFunction::constant(dom(&[3, 3, 3]), 2, 0).unwrap();
        let limits = SearchLimits {
            nc_max_points: 26,
            ..SearchLimits::default()
        };
        assert!(matches!(is_nc_with(&f, &limits), Err(Error::Resource { cap: 26, .. })));
    }

    #[test]
    fn wnc_guard() {
        let f = MultivaluedFunction::constant(dom(&[3, 3]), 2, 0).unwrap();
        let limits = SearchLimits {
            wnc_max_peels: 3,
            ..SearchLimits::default()
        };
        assert!(matches!(
            is_wnc_with(&f, &limits),
            Err(Error::Resource { required: 4, .. })
        ));
    }

    #[test]
    fn nc_witness_replays() {
        // f = 0 if x0 = 0, else 2 if x1 >= 1, else 1
        let d = dom(&[3, 2]);
        let f = MultivaluedFunction::from_fn(d.clone(), 3, |x| match (x[0], x[1]) {
            (0, _) => 0,
            (_, 1) => 2,
            _ => 1,
        })
        .unwrap();
        let w = is_nc(&f).unwrap().unwrap();
        assert!(w.verifies(&f));
        assert_eq!(w.order, vec![0, 1]);
    }

    #[test]
    fn unary_nc_to_snc() {
        let d = dom(&[3]);
        let w = NcWitness {
            order: vec![0],
            segments: vec![Segment::Prefix(0)],
            outputs: vec![1, 0],
        };
        let s = snc_witness_from_nc(&w, &d).unwrap();
        // segment {0} peeled from the min, complement {1,2} from the max
        assert_eq!(
            s.steps,
            vec![
                SncStep {
                    coord: 0,
                    value: 0,
                    side: Side::Min,
                    output: 1
                },
                SncStep {
                    coord: 0,
                    value: 2,
                    side: Side::Max,
                    output: 0
                },
            ]
        );
        assert_eq!(s.terminal, 0);
        assert_eq!(s.to_function(&d, 2).unwrap(), w.to_function(&d, 2).unwrap());
    }

    #[test]
    fn malformed_nc_witnesses_are_rejected() {
        let d = dom(&[3]);
        let full = NcWitness {
            order: vec![0],
            segments: vec![Segment::Prefix(2)],
            outputs: vec![1, 0],
        };
        assert!(snc_witness_from_nc(&full, &d).is_err());
        let same = NcWitness {
            order: vec![0],
            segments: vec![Segment::Suffix(1)],
            outputs: vec![1, 1],
        };
        assert!(snc_witness_from_nc(&same, &d).is_err());
        let empty_suffix = NcWitness {
            order: vec![0],
            segments: vec![Segment::Suffix(3)],
            outputs: vec![1, 0],
        };
        assert!(empty_suffix.validate(&d).is_err());
    }

    #[test]
    fn snc_witness_validation() {
        let d = dom(&[3]);
        let bad_side = SncWitness {
            steps: vec![
                SncStep {
                    coord: 0,
                    value: 1,
                    side: Side::Min,
                    output: 0,
                },
                SncStep {
                    coord: 0,
                    value: 2,
                    side: Side::Max,
                    output: 0,
                },
            ],
            terminal: 0,
        };
        assert!(bad_side.validate(&d).is_err());
        let short = SncWitness {
            steps: vec![SncStep {
                coord: 0,
                value: 0,
                side: Side::Min,
                output: 0,
            }],
            terminal: 0,
        };
        assert!(short.validate(&d).is_err());
    }

    #[test]
    fn generators_are_seed_deterministic() {
        let d = dom(&[3, 2, 3]);
        let a = generate_snc(&d, 3, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        let b = generate_snc(&d, 3, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        assert_eq!(a, b);
        let a = generate_nc(&d, 3, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = generate_nc(&d, 3, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn unary_snc_samples() {
        let d = dom(&[2]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let (f, w) = generate_snc(&d, 3, &mut rng).unwrap();
            assert!(w.verifies(&f));
            assert!(is_snc(&f).is_some());
        }
    }

    #[test]
    fn sampled_functions_pass_their_checkers() {
        let d = dom(&[3, 3]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let (f, _) = generate_snc(&d, 3, &mut rng).unwrap();
            assert!(is_snc(&f).is_some());
        }
        let d = dom(&[2, 3, 2]);
        for _ in 0..300 {
            let (f, w) = generate_nc(&d, 3, &mut rng).unwrap();
            assert!(w.verifies(&f));
            let found = is_nc(&f).unwrap().expect("NC sample must be NC");
            assert!(found.verifies(&f));
            assert!(is_snc(&f).is_some());
            assert!(snc_witness_from_nc(&w, &d).unwrap().verifies(&f));
        }
    }
}
