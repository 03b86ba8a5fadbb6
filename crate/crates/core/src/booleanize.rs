//! Van Ham Booleanization and nested canalization of partial Boolean
//! functions.
//!
//! A point `x` of `Ω = Π {0..k_i-1}` is encoded as the concatenation of the
//! unary blocks `1^{x_i} 0^{k_i-1-x_i}`, giving a word of `k = Σ (k_i − 1)`
//! bits. Boolean points are stored in a `u64`; bit position `p` (counted
//! from the left, starting at 0) is bit `k − 1 − p` of the integer, so the
//! integer value is the big-endian flat index in `{0,1}^k`. The bit
//! `β_{i,a}` (`1 ≤ a < k_i`) sits at position `offset_i + a − 1`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::canalization::SncWitness;
use crate::domain::{Level, MixedRadixDomain, MultivaluedFunction, Network, Side, TruthTable};
use crate::error::{Error, Result};

/// Default cap on the Boolean dimension accepted by [`is_nc_partial`].
pub const DEFAULT_PARTIAL_NC_MAX_DIMENSION: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VanHamCodec {
    domain: MixedRadixDomain,
    offsets: Vec<usize>,
    dimension: usize,
}

impl VanHamCodec {
    pub fn new(domain: &MixedRadixDomain) -> Result<Self> {
        let mut offsets = Vec::with_capacity(domain.dimension());
        let mut k = 0;
        for &a in domain.arities() {
            offsets.push(k);
            k += a - 1;
        }
        if k > 64 {
            return Err(Error::Resource {
                what: "Booleanized dimension",
                required: k as u128,
                cap: 64,
            });
        }
        Ok(VanHamCodec {
            domain: domain.clone(),
            offsets,
            dimension: k,
        })
    }

    pub fn domain(&self) -> &MixedRadixDomain {
        &self.domain
    }

    /// Number of Boolean coordinates `k`.
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Position of `β_{coord,level}` for `1 ≤ level < k_coord`.
    pub fn position(&self, coord: usize, level: usize) -> usize {
        debug_assert!(level >= 1 && level < self.domain.arity(coord));
        self.offsets[coord] + level - 1
    }

    /// Inverse of [`position`](Self::position).
    pub fn source_of(&self, position: usize) -> Option<(usize, usize)> {
        (0..self.domain.dimension())
            .find(|&c| self.offsets[c] <= position && position < self.offsets[c] + self.domain.arity(c) - 1)
            .map(|c| (c, position - self.offsets[c] + 1))
    }

    #[inline]
    fn mask(&self, position: usize) -> u64 {
        1u64 << (self.dimension - 1 - position)
    }

    #[inline]
    pub fn bit(&self, y: u64, position: usize) -> bool {
        y & self.mask(position) != 0
    }

    pub fn encode(&self, x: &[usize]) -> Result<u64> {
        self.domain.check_point(x)?;
        let mut y = 0;
        for (i, &xi) in x.iter().enumerate() {
            for a in 1..=xi {
                y |= self.mask(self.position(i, a));
            }
        }
        Ok(y)
    }

    fn fits(&self, y: u64) -> bool {
        self.dimension == 64 || y >> self.dimension == 0
    }

    /// Every block reads as ones followed by zeros.
    pub fn is_admissible(&self, y: u64) -> bool {
        self.fits(y)
            && (0..self.domain.dimension()).all(|i| {
                let mut seen_zero = false;
                (1..self.domain.arity(i)).all(|a| {
                    let one = self.bit(y, self.position(i, a));
                    let ok = !(one && seen_zero);
                    seen_zero |= !one;
                    ok
                })
            })
    }

    pub fn decode(&self, y: u64) -> Result<Vec<usize>> {
        if !self.is_admissible(y) {
            return Err(Error::InvalidDomain(format!(
                "{y:0width$b} is not an admissible point",
                width = self.dimension
            )));
        }
        Ok((0..self.domain.dimension())
            .map(|i| {
                (1..self.domain.arity(i))
                    .filter(|&a| self.bit(y, self.position(i, a)))
                    .count()
            })
            .collect())
    }

    /// `β(Ω)` in ascending order. The encoding preserves order, so this is
    /// the image of the points in flat-index order.
    pub fn admissible_points(&self) -> Vec<u64> {
        self.domain
            .points()
            .map(|x| self.encode(&x).expect("domain point"))
            .collect()
    }
}

/// A Boolean function defined on an explicit subset `X ⊆ {0,1}^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialBooleanFunction {
    dimension: usize,
    points: Vec<u64>,
    values: Vec<bool>,
}

impl PartialBooleanFunction {
    /// `points` must be strictly increasing and fit in `dimension` bits.
    pub fn new(dimension: usize, points: Vec<u64>, values: Vec<bool>) -> Result<Self> {
        if dimension > 64 {
            return Err(Error::validation("Boolean dimension above 64"));
        }
        if points.is_empty() {
            return Err(Error::validation("the admissible set is empty"));
        }
        if points.len() != values.len() {
            return Err(Error::validation(format!(
                "{} points but {} values",
                points.len(),
                values.len()
            )));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::validation("admissible points must be strictly increasing"));
        }
        if dimension < 64 && points.iter().any(|&y| y >> dimension != 0) {
            return Err(Error::validation(format!("a point does not fit in {dimension} bits")));
        }
        Ok(PartialBooleanFunction {
            dimension,
            points,
            values,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn points(&self) -> &[u64] {
        &self.points
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn value_at(&self, y: u64) -> Option<bool> {
        self.points.binary_search(&y).ok().map(|i| self.values[i])
    }

    #[inline]
    fn bit(&self, y: u64, position: usize) -> bool {
        y >> (self.dimension - 1 - position) & 1 == 1
    }

    pub fn to_table(&self) -> TruthTable {
        TruthTable {
            arities: vec![2; self.dimension],
            codomain: 2,
            values: self.values.iter().map(|&b| b as Level).collect(),
            admissible: Some(self.points.clone()),
        }
    }

    /// Reads a table with an `admissible` field, or a full Boolean table.
    pub fn from_table(t: &TruthTable) -> Result<Self> {
        if t.codomain != 2 || t.arities.iter().any(|&k| k != 2) {
            return Err(Error::validation(
                "a partial Boolean table needs Boolean arities and codomain 2",
            ));
        }
        if t.values.iter().any(|&v| v > 1) {
            return Err(Error::validation("values must be 0 or 1"));
        }
        let k = t.arities.len();
        let points = match &t.admissible {
            Some(p) => p.clone(),
            None => {
                if k >= 32 {
                    return Err(Error::validation("full table too large"));
                }
                (0..1u64 << k).collect()
            }
        };
        Self::new(k, points, t.values.iter().map(|&v| v == 1).collect())
    }
}

/// One Boolean test: if `y_coord = value` then the output is `output`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoolNcStep {
    pub coord: usize,
    pub value: bool,
    pub output: bool,
}

/// Nested canalization data for a (partial) Boolean function: each of the
/// `k` coordinates is tested once, in order; the first matching test gives
/// the output. Points passing no test are unconstrained.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoolNcWitness {
    pub steps: Vec<BoolNcStep>,
}

impl BoolNcWitness {
    /// The output fixed at `y`, or `None` if no test matches.
    pub fn evaluate(&self, y: u64, dimension: usize) -> Option<bool> {
        self.steps
            .iter()
            .find(|s| (y >> (dimension - 1 - s.coord) & 1 == 1) == s.value)
            .map(|s| s.output)
    }

    pub fn validate(&self, dimension: usize) -> Result<()> {
        if self.steps.len() != dimension {
            return Err(Error::validation(format!(
                "{} tests for {dimension} Boolean coordinates",
                self.steps.len()
            )));
        }
        let mut seen = vec![false; dimension];
        for s in &self.steps {
            if s.coord >= dimension || std::mem::replace(&mut seen[s.coord], true) {
                return Err(Error::validation("tested coordinates are not a permutation"));
            }
        }
        Ok(())
    }

    pub fn verifies(&self, g: &PartialBooleanFunction) -> bool {
        self.validate(g.dimension()).is_ok()
            && g.points()
                .iter()
                .zip(g.values())
                .all(|(&y, &v)| self.evaluate(y, g.dimension()).is_none_or(|b| b == v))
    }
}

pub fn is_nc_partial(g: &PartialBooleanFunction) -> Result<Option<BoolNcWitness>> {
    is_nc_partial_with(g, DEFAULT_PARTIAL_NC_MAX_DIMENSION)
}

/// Decides nested canalization of `g` on its admissible set. Empty slices
/// count as constant.
pub fn is_nc_partial_with(g: &PartialBooleanFunction, max_dimension: usize) -> Result<Option<BoolNcWitness>> {
    if g.dimension() > max_dimension {
        return Err(Error::Resource {
            what: "Boolean dimension for the partial NC search",
            required: g.dimension() as u128,
            cap: max_dimension as u128,
        });
    }
    let mut search = PartialSearch {
        g,
        steps: Vec::with_capacity(g.dimension()),
        failed: HashSet::new(),
    };
    let all: Vec<usize> = (0..g.points().len()).collect();
    if search.run(&all, 0, 0) {
        Ok(Some(BoolNcWitness { steps: search.steps }))
    } else {
        Ok(None)
    }
}

struct PartialSearch<'a> {
    g: &'a PartialBooleanFunction,
    steps: Vec<BoolNcStep>,
    /// (used coordinates, their values in the residual set)
    failed: HashSet<(u64, u64)>,
}

impl PartialSearch<'_> {
    fn run(&mut self, residual: &[usize], used: u64, assignment: u64) -> bool {
        let g = self.g;
        let k = g.dimension();
        let first = residual.first().map(|&i| g.values()[i]);
        if residual.iter().all(|&i| Some(g.values()[i]) == first) {
            // Constant or empty: every remaining test may output that value.
            let output = first.unwrap_or(false);
            for coord in (0..k).filter(|&c| used >> c & 1 == 0) {
                self.steps.push(BoolNcStep {
                    coord,
                    value: false,
                    output,
                });
            }
            return true;
        }
        if self.failed.contains(&(used, assignment)) {
            return false;
        }
        for coord in (0..k).filter(|&c| used >> c & 1 == 0) {
            for value in [false, true] {
                let (hit, rest): (Vec<usize>, Vec<usize>) =
                    residual.iter().partition(|&&i| g.bit(g.points()[i], coord) == value);
                let output = match hit.first() {
                    None => false,
                    Some(&i) => {
                        let b = g.values()[i];
                        if hit.iter().any(|&j| g.values()[j] != b) {
                            continue;
                        }
                        b
                    }
                };
                self.steps.push(BoolNcStep { coord, value, output });
                let next_assignment = assignment | (!value as u64) << coord;
                if self.run(&rest, used | 1 << coord, next_assignment) {
                    return true;
                }
                self.steps.pop();
            }
        }
        self.failed.insert((used, assignment));
        false
    }
}

/// Booleanization of a single function `f: Ω → {0..m-1}`: component `a`
/// (for `a = 1..m-1`, stored at index `a − 1`) is `χ_{f ≥ a} ∘ β⁻¹` on `β(Ω)`.
pub fn booleanize_function(f: &MultivaluedFunction) -> Result<Vec<PartialBooleanFunction>> {
    let codec = VanHamCodec::new(f.domain())?;
    let points = codec.admissible_points();
    (1..f.codomain())
        .map(|a| {
            let values = f.values().iter().map(|&v| v as usize >= a).collect();
            PartialBooleanFunction::new(codec.dimension(), points.clone(), values)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanComponent {
    pub target: usize,
    pub threshold: usize,
    pub function: PartialBooleanFunction,
}

/// `F^β`, one component per bit `β_{j,a}` of the image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanizedNetwork {
    codec: VanHamCodec,
    components: Vec<BooleanComponent>,
}

impl BooleanizedNetwork {
    pub fn codec(&self) -> &VanHamCodec {
        &self.codec
    }

    /// Components in bit order: `(1,1), …, (1,k_1−1), (2,1), …`.
    pub fn components(&self) -> &[BooleanComponent] {
        &self.components
    }

    /// `F^β(y)` for an admissible `y`.
    pub fn image(&self, y: u64) -> Option<u64> {
        let k = self.codec.dimension();
        let mut out = 0;
        for (p, c) in self.components.iter().enumerate() {
            if c.function.value_at(y)? {
                out |= 1 << (k - 1 - p);
            }
        }
        Some(out)
    }
}

pub fn booleanize(network: &Network) -> Result<BooleanizedNetwork> {
    let codec = VanHamCodec::new(network.domain())?;
    let mut components = Vec::with_capacity(codec.dimension());
    for (target, f) in network.components().iter().enumerate() {
        for (i, function) in booleanize_function(f)?.into_iter().enumerate() {
            components.push(BooleanComponent {
                target,
                threshold: i + 1,
                function,
            });
        }
    }
    Ok(BooleanizedNetwork { codec, components })
}

/// Maps an SNC witness of `f` to a nested canalization witness of the
/// Booleanized component `χ_{f ≥ threshold} ∘ β⁻¹`.
///
/// A min peel of value `a` on coordinate `v` becomes the test
/// `y_{v,a+1} = 0`; a max peel of `a` becomes `y_{v,a} = 1`.
pub fn transport_witness(w: &SncWitness, domain: &MixedRadixDomain, threshold: usize) -> Result<BoolNcWitness> {
    w.validate(domain)?;
    if threshold == 0 {
        return Err(Error::validation("thresholds start at 1"));
    }
    let codec = VanHamCodec::new(domain)?;
    let steps = w
        .steps
        .iter()
        .map(|s| {
            let (level, value) = match s.side {
                Side::Min => (s.value + 1, false),
                Side::Max => (s.value, true),
            };
            BoolNcStep {
                coord: codec.position(s.coord, level),
                value,
                output: s.output as usize >= threshold,
            }
        })
        .collect();
    Ok(BoolNcWitness { steps })
}
