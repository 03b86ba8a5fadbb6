//! Mixed-radix domains and dense truth tables.
//!
//! A domain is a product `Ω = Ω_1 × … × Ω_n` with `Ω_i = {0, …, k_i − 1}`.
//! Points are stored in a flat array indexed big-endian (the last coordinate
//! varies fastest), so `index(x) = Σ_i x_i · Π_{j>i} k_j`.
//!
//! Two kinds of sub-domain are used by the checkers: [`IntervalBox`] keeps a
//! contiguous range per coordinate (residual domains of soft nested
//! canalization), [`SubsetBox`] keeps an arbitrary non-empty value set per
//! coordinate (residual domains of weak nested canalization).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Output level of a multivalued function.
pub type Level = u32;

/// Default upper bound on `|Ω|`.
pub const DEFAULT_CARDINALITY_CAP: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MixedRadixDomain {
    arities: Vec<usize>,
    strides: Vec<usize>,
    cardinality: usize,
}

impl MixedRadixDomain {
    pub fn new(arities: Vec<usize>) -> Result<Self> {
        Self::with_cap(arities, DEFAULT_CARDINALITY_CAP)
    }

    pub fn with_cap(arities: Vec<usize>, cap: usize) -> Result<Self> {
        if arities.is_empty() {
            return Err(Error::InvalidDomain("a domain needs at least one coordinate".into()));
        }
        if let Some(i) = arities.iter().position(|&k| k == 0) {
            return Err(Error::InvalidDomain(format!("coordinate {i} has arity 0")));
        }
        let mut cardinality: u128 = 1;
        for &k in &arities {
            cardinality = cardinality.saturating_mul(k as u128);
        }
        if cardinality > cap as u128 {
            return Err(Error::Resource {
                what: "domain cardinality",
                required: cardinality,
                cap: cap as u128,
            });
        }
        let mut strides = vec![1; arities.len()];
        for i in (0..arities.len() - 1).rev() {
            strides[i] = strides[i + 1] * arities[i + 1];
        }
        Ok(MixedRadixDomain {
            arities,
            strides,
            cardinality: cardinality as usize,
        })
    }

    pub fn arities(&self) -> &[usize] {
        &self.arities
    }

    pub fn arity(&self, coord: usize) -> usize {
        self.arities[coord]
    }

    /// Number of coordinates `n`.
    pub fn dimension(&self) -> usize {
        self.arities.len()
    }

    pub fn cardinality(&self) -> usize {
        self.cardinality
    }

    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    /// `K = Σ (k_i − 1)`: the number of peels needed to shrink the domain to
    /// a single point, and the dimension of its Booleanization.
    pub fn peel_count(&self) -> usize {
        self.arities.iter().map(|k| k - 1).sum()
    }

    pub fn check_point(&self, point: &[usize]) -> Result<()> {
        if point.len() != self.dimension() {
            return Err(Error::Dimension {
                expected: self.dimension(),
                got: point.len(),
            });
        }
        for (coord, (&value, &arity)) in point.iter().zip(&self.arities).enumerate() {
            if value >= arity {
                return Err(Error::OutOfRange { coord, value, arity });
            }
        }
        Ok(())
    }

    pub fn encode(&self, point: &[usize]) -> Result<usize> {
        self.check_point(point)?;
        Ok(point.iter().zip(&self.strides).map(|(x, s)| x * s).sum())
    }

    pub fn decode(&self, index: usize) -> Result<Vec<usize>> {
        if index >= self.cardinality {
            return Err(Error::OutOfRange {
                coord: 0,
                value: index,
                arity: self.cardinality,
            });
        }
        Ok(self
            .strides
            .iter()
            .zip(&self.arities)
            .map(|(s, k)| (index / s) % k)
            .collect())
    }

    pub fn full_box(&self) -> IntervalBox {
        IntervalBox {
            lo: vec![0; self.dimension()],
            hi: self.arities.iter().map(|k| k - 1).collect(),
        }
    }

    /// All points in ascending flat-index order.
    pub fn points(&self) -> RegionPoints {
        RegionPoints {
            inner: iterate(self, &self.full_box()),
        }
    }
}

/// A dense function `f: Ω → {0, …, m − 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultivaluedFunction {
    domain: MixedRadixDomain,
    codomain: usize,
    values: Vec<Level>,
}

impl MultivaluedFunction {
    pub fn new(domain: MixedRadixDomain, codomain: usize, values: Vec<Level>) -> Result<Self> {
        if codomain == 0 {
            return Err(Error::validation("codomain arity must be positive"));
        }
        if values.len() != domain.cardinality() {
            return Err(Error::validation(format!(
                "expected {} values, got {}",
                domain.cardinality(),
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|&v| v as usize >= codomain) {
            return Err(Error::validation(format!(
                "value {} at index {pos} is outside the codomain 0..{codomain}",
                values[pos]
            )));
        }
        Ok(MultivaluedFunction {
            domain,
            codomain,
            values,
        })
    }

    /// Tabulates `rule` over every point of `domain`.
    pub fn from_fn<F>(domain: MixedRadixDomain, codomain: usize, mut rule: F) -> Result<Self>
    where
        F: FnMut(&[usize]) -> Level,
    {
        let values = domain.points().map(|p| rule(&p)).collect();
        Self::new(domain, codomain, values)
    }

    pub fn constant(domain: MixedRadixDomain, codomain: usize, value: Level) -> Result<Self> {
        let values = vec![value; domain.cardinality()];
        Self::new(domain, codomain, values)
    }

    pub fn domain(&self) -> &MixedRadixDomain {
        &self.domain
    }

    pub fn codomain(&self) -> usize {
        self.codomain
    }

    pub fn values(&self) -> &[Level] {
        &self.values
    }

    #[inline]
    pub fn value(&self, index: usize) -> Level {
        self.values[index]
    }

    pub fn eval(&self, point: &[usize]) -> Result<Level> {
        Ok(self.values[self.domain.encode(point)?])
    }

    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }

    /// Reorders the coordinates: coordinate `i` of the result is coordinate
    /// `perm[i]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let n = self.domain.dimension();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::validation("not a permutation of the coordinates"));
        }
        let arities = perm.iter().map(|&p| self.domain.arity(p)).collect();
        let domain = MixedRadixDomain::new(arities)?;
        let mut source = vec![0; n];
        Self::from_fn(domain, self.codomain, |point| {
            for (i, &p) in perm.iter().enumerate() {
                source[p] = point[i];
            }
            self.values[self.domain.encode(&source).expect("permuted point in range")]
        })
    }
}

/// A product sub-domain of a [`MixedRadixDomain`].
pub trait Region {
    fn dimension(&self) -> usize;

    /// Residual values of `coord`, ascending.
    fn values(&self, coord: usize) -> Vec<usize>;

    fn contains_value(&self, coord: usize, value: usize) -> bool;

    fn cardinality(&self) -> usize;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Min,
    Max,
}

/// Per-coordinate inclusive ranges `lo_i ..= hi_i`, never empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntervalBox {
    lo: Vec<usize>,
    hi: Vec<usize>,
}

impl IntervalBox {
    pub fn new(domain: &MixedRadixDomain, lo: Vec<usize>, hi: Vec<usize>) -> Result<Self> {
        for bounds in [&lo, &hi] {
            if bounds.len() != domain.dimension() {
                return Err(Error::Dimension {
                    expected: domain.dimension(),
                    got: bounds.len(),
                });
            }
        }
        for i in 0..lo.len() {
            if hi[i] >= domain.arity(i) {
                return Err(Error::OutOfRange {
                    coord: i,
                    value: hi[i],
                    arity: domain.arity(i),
                });
            }
            if lo[i] > hi[i] {
                return Err(Error::validation(format!(
                    "coordinate {i}: empty range {}..={}",
                    lo[i], hi[i]
                )));
            }
        }
        Ok(IntervalBox { lo, hi })
    }

    pub fn lo(&self) -> &[usize] {
        &self.lo
    }

    pub fn hi(&self) -> &[usize] {
        &self.hi
    }

    pub fn width(&self, coord: usize) -> usize {
        self.hi[coord] - self.lo[coord] + 1
    }

    pub fn extreme(&self, coord: usize, side: Side) -> usize {
        match side {
            Side::Min => self.lo[coord],
            Side::Max => self.hi[coord],
        }
    }

    /// Removes the `side` extreme of `coord`. Fails when that would empty the
    /// coordinate.
    pub fn peel(&self, coord: usize, side: Side) -> Result<IntervalBox> {
        if self.width(coord) < 2 {
            return Err(Error::validation(format!("coordinate {coord} is already a singleton")));
        }
        let mut next = self.clone();
        match side {
            Side::Min => next.lo[coord] += 1,
            Side::Max => next.hi[coord] -= 1,
        }
        Ok(next)
    }

    /// Narrows `coord` to `lo ..= hi` (which must lie inside the current range).
    pub fn restrict(&self, coord: usize, lo: usize, hi: usize) -> Result<IntervalBox> {
        if lo > hi || lo < self.lo[coord] || hi > self.hi[coord] {
            return Err(Error::validation(format!(
                "coordinate {coord}: {lo}..={hi} is not inside {}..={}",
                self.lo[coord], self.hi[coord]
            )));
        }
        let mut next = self.clone();
        next.lo[coord] = lo;
        next.hi[coord] = hi;
        Ok(next)
    }

    pub fn contains(&self, point: &[usize]) -> bool {
        point.len() == self.lo.len()
            && point
                .iter()
                .enumerate()
                .all(|(i, &x)| self.lo[i] <= x && x <= self.hi[i])
    }
}

impl Region for IntervalBox {
    fn dimension(&self) -> usize {
        self.lo.len()
    }

    fn values(&self, coord: usize) -> Vec<usize> {
        (self.lo[coord]..=self.hi[coord]).collect()
    }

    fn contains_value(&self, coord: usize, value: usize) -> bool {
        self.lo[coord] <= value && value <= self.hi[coord]
    }

    fn cardinality(&self) -> usize {
        (0..self.lo.len()).map(|i| self.width(i)).product()
    }
}

/// Per-coordinate non-empty value masks. Arities are limited to 64.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubsetBox {
    masks: Vec<u64>,
}

impl SubsetBox {
    pub fn full(domain: &MixedRadixDomain) -> Result<Self> {
        let masks = domain
            .arities()
            .iter()
            .map(|&k| match k {
                64 => Ok(u64::MAX),
                k if k < 64 => Ok((1u64 << k) - 1),
                _ => Err(Error::validation("subset boxes support arities up to 64")),
            })
            .collect::<Result<_>>()?;
        Ok(SubsetBox { masks })
    }

    pub fn new(domain: &MixedRadixDomain, masks: Vec<u64>) -> Result<Self> {
        let full = Self::full(domain)?;
        if masks.len() != full.masks.len() {
            return Err(Error::Dimension {
                expected: full.masks.len(),
                got: masks.len(),
            });
        }
        for (i, (&m, &f)) in masks.iter().zip(&full.masks).enumerate() {
            if m == 0 || m & !f != 0 {
                return Err(Error::validation(format!("coordinate {i}: invalid mask {m:#b}")));
            }
        }
        Ok(SubsetBox { masks })
    }

    pub fn masks(&self) -> &[u64] {
        &self.masks
    }

    pub fn size(&self, coord: usize) -> usize {
        self.masks[coord].count_ones() as usize
    }

    /// Drops `value` from `coord`. Fails when that would empty the coordinate.
    pub fn remove(&self, coord: usize, value: usize) -> Result<SubsetBox> {
        if !self.contains_value(coord, value) {
            return Err(Error::validation(format!(
                "coordinate {coord}: {value} is not in the box"
            )));
        }
        if self.size(coord) < 2 {
            return Err(Error::validation(format!("coordinate {coord} is already a singleton")));
        }
        let mut next = self.clone();
        next.masks[coord] &= !(1u64 << value);
        Ok(next)
    }
}

impl Region for SubsetBox {
    fn dimension(&self) -> usize {
        self.masks.len()
    }

    fn values(&self, coord: usize) -> Vec<usize> {
        let mask = self.masks[coord];
        (0..64).filter(|&v| mask >> v & 1 == 1).collect()
    }

    fn contains_value(&self, coord: usize, value: usize) -> bool {
        value < 64 && self.masks[coord] >> value & 1 == 1
    }

    fn cardinality(&self) -> usize {
        (0..self.masks.len()).map(|i| self.size(i)).product()
    }
}

impl From<&IntervalBox> for SubsetBox {
    fn from(b: &IntervalBox) -> Self {
        let masks = (0..b.dimension())
            .map(|i| (b.lo[i]..=b.hi[i]).fold(0u64, |m, v| m | 1 << v))
            .collect();
        SubsetBox { masks }
    }
}

/// Odometer over a product of value lists, yielding flat indices in
/// ascending order.
#[derive(Debug, Clone)]
pub struct RegionIter {
    choices: Vec<Vec<usize>>,
    strides: Vec<usize>,
    cursor: Vec<usize>,
    done: bool,
}

impl RegionIter {
    fn new(domain: &MixedRadixDomain, choices: Vec<Vec<usize>>) -> Self {
        let done = choices.iter().any(Vec::is_empty);
        RegionIter {
            cursor: vec![0; choices.len()],
            strides: domain.strides().to_vec(),
            choices,
            done,
        }
    }
}

impl Iterator for RegionIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.done {
            return None;
        }
        let index = self
            .cursor
            .iter()
            .enumerate()
            .map(|(i, &c)| self.choices[i][c] * self.strides[i])
            .sum();
        let mut i = self.cursor.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.cursor[i] += 1;
            if self.cursor[i] < self.choices[i].len() {
                break;
            }
            self.cursor[i] = 0;
        }
        Some(index)
    }
}

/// Like [`RegionIter`] but yields decoded points.
#[derive(Debug, Clone)]
pub struct RegionPoints {
    inner: RegionIter,
}

impl Iterator for RegionPoints {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.inner.done {
            return None;
        }
        let point = self
            .inner
            .cursor
            .iter()
            .enumerate()
            .map(|(i, &c)| self.inner.choices[i][c])
            .collect();
        self.inner.next();
        Some(point)
    }
}

/// Flat indices of every point of `region`, ascending.
pub fn iterate<R: Region + ?Sized>(domain: &MixedRadixDomain, region: &R) -> RegionIter {
    let choices = (0..region.dimension()).map(|i| region.values(i)).collect();
    RegionIter::new(domain, choices)
}

pub fn region_points<R: Region + ?Sized>(domain: &MixedRadixDomain, region: &R) -> RegionPoints {
    RegionPoints {
        inner: iterate(domain, region),
    }
}

/// Outcome of testing `f` for constancy on a slice `{x ∈ box : x_i = a}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SliceValue {
    Constant(Level),
    /// The slice holds no points.
    Vacuous,
    Mixed,
}

impl SliceValue {
    pub fn constant(self) -> Option<Level> {
        match self {
            SliceValue::Constant(b) => Some(b),
            _ => None,
        }
    }
}

/// Whether `f` takes a single value on `{x ∈ region : x_coord = value}`.
pub fn slice_constant<R: Region + ?Sized>(
    f: &MultivaluedFunction,
    region: &R,
    coord: usize,
    value: usize,
) -> Result<SliceValue> {
    let domain = f.domain();
    if coord >= domain.dimension() {
        return Err(Error::Dimension {
            expected: domain.dimension(),
            got: coord + 1,
        });
    }
    if !region.contains_value(coord, value) {
        return Err(Error::OutOfRange {
            coord,
            value,
            arity: domain.arity(coord),
        });
    }
    let choices = (0..region.dimension())
        .map(|i| if i == coord { vec![value] } else { region.values(i) })
        .collect();
    Ok(constant_on(f, RegionIter::new(domain, choices)))
}

pub(crate) fn constant_on(f: &MultivaluedFunction, mut indices: impl Iterator<Item = usize>) -> SliceValue {
    let Some(first) = indices.next() else {
        return SliceValue::Vacuous;
    };
    let b = f.value(first);
    if indices.all(|i| f.value(i) == b) {
        SliceValue::Constant(b)
    } else {
        SliceValue::Mixed
    }
}

/// A multivalued network `F: Ω → Ω`; component `i` has codomain arity `k_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    domain: MixedRadixDomain,
    components: Vec<MultivaluedFunction>,
}

impl Network {
    pub fn new(components: Vec<MultivaluedFunction>) -> Result<Self> {
        let Some(first) = components.first() else {
            return Err(Error::validation("a network needs at least one component"));
        };
        let domain = first.domain().clone();
        if components.len() != domain.dimension() {
            return Err(Error::validation(format!(
                "{} components for a {}-dimensional domain",
                components.len(),
                domain.dimension()
            )));
        }
        for (i, c) in components.iter().enumerate() {
            if c.domain() != &domain {
                return Err(Error::validation(format!("component {i} has a different domain")));
            }
            if c.codomain() != domain.arity(i) {
                return Err(Error::validation(format!(
                    "component {i} has codomain {} but coordinate arity {}",
                    c.codomain(),
                    domain.arity(i)
                )));
            }
        }
        Ok(Network { domain, components })
    }

    /// Builds a network by tabulating `rule(point)` as the image of each point.
    pub fn from_map<F>(domain: MixedRadixDomain, mut rule: F) -> Result<Self>
    where
        F: FnMut(&[usize]) -> Vec<usize>,
    {
        let images: Vec<Vec<usize>> = domain.points().map(|p| rule(&p)).collect();
        let components = (0..domain.dimension())
            .map(|j| {
                let values = images.iter().map(|img| img[j] as Level).collect();
                MultivaluedFunction::new(domain.clone(), domain.arity(j), values)
            })
            .collect::<Result<_>>()?;
        Self::new(components)
    }

    pub fn domain(&self) -> &MixedRadixDomain {
        &self.domain
    }

    pub fn components(&self) -> &[MultivaluedFunction] {
        &self.components
    }

    pub fn image(&self, point: &[usize]) -> Result<Vec<usize>> {
        let index = self.domain.encode(point)?;
        Ok(self.components.iter().map(|c| c.value(index) as usize).collect())
    }
}

/// On-disk truth table: `{"arities": [..], "codomain": m, "values": [..]}`.
///
/// `admissible` is only present for Booleanized components; it lists the
/// flat indices (in `{0,1}^k`, leftmost bit most significant) of the points
/// `values` refers to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruthTable {
    pub arities: Vec<usize>,
    pub codomain: usize,
    pub values: Vec<Level>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub admissible: Option<Vec<u64>>,
}

impl TruthTable {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::validation(format!("truth table: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("truth tables always serialize")
    }

    pub fn to_function(&self) -> Result<MultivaluedFunction> {
        if self.admissible.is_some() {
            return Err(Error::validation(
                "table has an `admissible` field; it describes a partial Boolean function",
            ));
        }
        let domain = MixedRadixDomain::new(self.arities.clone())?;
        MultivaluedFunction::new(domain, self.codomain, self.values.clone())
    }
}

impl From<&MultivaluedFunction> for TruthTable {
    fn from(f: &MultivaluedFunction) -> Self {
        TruthTable {
            arities: f.domain().arities().to_vec(),
            codomain: f.codomain(),
            values: f.values().to_vec(),
            admissible: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dom(arities: &[usize]) -> MixedRadixDomain {
        MixedRadixDomain::new(arities.to_vec()).unwrap()
    }

    #[test]
    fn encode_examples() {
        let d = dom(&[3, 3]);
        assert_eq!(d.encode(&[0, 0]).unwrap(), 0);
        assert_eq!(d.encode(&[2, 2]).unwrap(), 8);
        assert!(matches!(d.encode(&[3, 0]), Err(Error::OutOfRange { coord: 0, .. })));
        assert!(matches!(d.encode(&[0]), Err(Error::Dimension { .. })));
    }

    #[test]
    fn encode_matches_lexicographic_position() {
        // enumerate (2,3,2) lexicographically, last coordinate fastest
        let d = dom(&[2, 3, 2]);
        let mut lex = Vec::new();
        for a in 0..2 {
            for b in 0..3 {
                for c in 0..2 {
                    lex.push(vec![a, b, c]);
                }
            }
        }
        let pos = lex.iter().position(|p| p == &[1, 2, 0]).unwrap();
        assert_eq!(pos, 10);
        assert_eq!(d.encode(&[1, 2, 0]).unwrap(), 10);
        for (i, p) in lex.iter().enumerate() {
            assert_eq!(d.encode(p).unwrap(), i);
            assert_eq!(&d.decode(i).unwrap(), p);
        }
    }

    #[test]
    fn rejects_bad_domains() {
        assert!(MixedRadixDomain::new(vec![]).is_err());
        assert!(MixedRadixDomain::new(vec![2, 0]).is_err());
        let err = MixedRadixDomain::with_cap(vec![10, 10, 10], 999).unwrap_err();
        assert!(matches!(
            err,
            Error::Resource {
                required: 1000,
                cap: 999,
                ..
            }
        ));
        assert!(MixedRadixDomain::new(vec![1 << 13, 1 << 12]).is_err());
    }

    #[test]
    fn iterate_boxes() {
        let d = dom(&[3, 3]);
        assert_eq!(iterate(&d, &d.full_box()).count(), 9);

        let b = IntervalBox::new(&d, vec![1, 0], vec![2, 2]).unwrap();
        let idx: Vec<_> = iterate(&d, &b).collect();
        assert_eq!(idx, vec![3, 4, 5, 6, 7, 8]);

        let s = SubsetBox::new(&d, vec![0b101, 0b010]).unwrap();
        let pts: Vec<_> = region_points(&d, &s).collect();
        assert_eq!(pts, vec![vec![0, 1], vec![2, 1]]);
    }

    #[test]
    fn box_invariants() {
        let d = dom(&[3, 2]);
        assert!(IntervalBox::new(&d, vec![2, 0], vec![1, 1]).is_err());
        assert!(IntervalBox::new(&d, vec![0, 0], vec![3, 1]).is_err());
        let b = d.full_box().peel(1, Side::Max).unwrap();
        assert_eq!(b.width(1), 1);
        assert!(b.peel(1, Side::Min).is_err());
        assert!(SubsetBox::new(&d, vec![0b111, 0]).is_err());
        assert!(SubsetBox::new(&d, vec![0b1000, 1]).is_err());
        let s = SubsetBox::full(&d).unwrap().remove(0, 1).unwrap();
        assert_eq!(s.values(0), vec![0, 2]);
        assert_eq!(s.cardinality(), 4);
        let s = s.remove(0, 0).unwrap();
        assert!(s.remove(0, 2).is_err());
    }

    #[test]
    fn slice_constant_examples() {
        let d = dom(&[3, 3]);
        let min = MultivaluedFunction::from_fn(d.clone(), 3, |x| x[0].min(x[1]) as Level).unwrap();
        assert_eq!(
            slice_constant(&min, &d.full_box(), 1, 0).unwrap(),
            SliceValue::Constant(0)
        );
        assert_eq!(slice_constant(&min, &d.full_box(), 1, 2).unwrap(), SliceValue::Mixed);

        let five = MultivaluedFunction::constant(d.clone(), 6, 5).unwrap();
        for i in 0..2 {
            for a in 0..3 {
                assert_eq!(
                    slice_constant(&five, &d.full_box(), i, a).unwrap(),
                    SliceValue::Constant(5)
                );
            }
        }

        let table = [2, 0, 0, 1, 1, 1, 2, 0, 2];
        let f = MultivaluedFunction::new(d.clone(), 3, table.to_vec()).unwrap();
        assert_eq!(
            slice_constant(&f, &d.full_box(), 0, 1).unwrap(),
            SliceValue::Constant(1)
        );

        let b = d.full_box().peel(0, Side::Min).unwrap();
        assert!(matches!(slice_constant(&f, &b, 0, 0), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn function_validation() {
        let d = dom(&[2]);
        assert!(MultivaluedFunction::new(d.clone(), 2, vec![0]).is_err());
        assert!(MultivaluedFunction::new(d.clone(), 2, vec![0, 2]).is_err());
        assert!(MultivaluedFunction::new(d, 0, vec![]).is_err());
    }

    #[test]
    fn permute_swaps_coordinates() {
        let d = dom(&[2, 3]);
        let f = MultivaluedFunction::from_fn(d, 5, |x| (x[0] * 3 + x[1]) as Level % 5).unwrap();
        let g = f.permute(&[1, 0]).unwrap();
        assert_eq!(g.domain().arities(), &[3, 2]);
        for x in f.domain().points() {
            assert_eq!(f.eval(&x).unwrap(), g.eval(&[x[1], x[0]]).unwrap());
        }
        assert!(f.permute(&[0, 0]).is_err());
    }

    #[test]
    fn network_checks_codomains() {
        let d = dom(&[3, 2]);
        let id = Network::from_map(d.clone(), |x| x.to_vec()).unwrap();
        assert_eq!(id.image(&[2, 1]).unwrap(), vec![2, 1]);
        let f = MultivaluedFunction::constant(d.clone(), 3, 0).unwrap();
        assert!(Network::new(vec![f.clone(), f]).is_err());
    }

    #[test]
    fn truth_table_json() {
        let t = TruthTable::from_json(r#"{"arities":[2],"codomain":3,"values":[0,2]}"#).unwrap();
        let f = t.to_function().unwrap();
        assert_eq!(f.values(), &[0, 2]);
        assert_eq!(
            TruthTable::from(&f).to_json(),
            r#"{"arities":[2],"codomain":3,"values":[0,2]}"#
        );
        assert!(TruthTable::from_json(r#"{"arities":[2],"codomain":3,"values":[0,3]}"#)
            .unwrap()
            .to_function()
            .is_err());
    }
}
