//! Generators for the three extremal interval families over ℤ — golden
//! instances on which the windowed sumset meets the multiplicity bound with
//! equality — plus their auxiliary overlap-free companion sequences, a
//! named example, and a Free(1) mirror.
//!
//! All three families are parameterized by nondecreasing positive lengths
//! `k_1 ≤ … ≤ k_m` (zero-extended to `k_i = 0` for `i ≤ 0`) and produce
//! intervals with `|A_j| = k_j`. The first keeps every incidence count at
//! most `ℓ`; the other two force an element of incidence `> ℓ` and trade
//! the loss against offsets `n_i`.

use crate::error::{Error, Result};
use crate::group::{Element, GSet, GroupModel};
use crate::seqset::SetSequence;

/// Which of the three interval families to generate.
///
/// * `Stacked` — blocks of `ℓ` sets stacked end to end; no element lies in
///   more than `ℓ` sets, and `|Σ^ℓ| = Σk − ℓ + 1`.
/// * `ShortOverlap` — `ℓ < m ≤ 2ℓ`; the first interval's right endpoint
///   recurs in more than `ℓ` sets, and `|Σ^ℓ| = Σk − Σn − ℓ + 1` with one
///   offset `n_j` per set beyond the window.
/// * `LongOverlap` — `m > 2ℓ`; same overlap idea across several stacked
///   blocks, with `ℓ` offsets `n_1, …, n_ℓ` applied cyclically.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstructionVariant {
    Stacked,
    ShortOverlap,
    LongOverlap,
}

impl ConstructionVariant {
    pub fn as_str(&self) -> &'static str {
        match self {
            ConstructionVariant::Stacked => "stacked",
            ConstructionVariant::ShortOverlap => "short-overlap",
            ConstructionVariant::LongOverlap => "long-overlap",
        }
    }
}

impl std::fmt::Display for ConstructionVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ConstructionVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "c1" | "stacked" => Ok(ConstructionVariant::Stacked),
            "c2" | "short-overlap" => Ok(ConstructionVariant::ShortOverlap),
            "c3" | "long-overlap" => Ok(ConstructionVariant::LongOverlap),
            other => Err(Error::InvalidParams(format!(
                "unknown construction variant {other:?} (expected c1, c2, or c3)"
            ))),
        }
    }
}

/// Parameters for one interval family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionParams {
    pub variant: ConstructionVariant,
    pub ell: usize,
    pub m: usize,
    /// Interval lengths `k_1 ≤ … ≤ k_m`, all positive (`≥ 2` for the
    /// overlap variants).
    pub k: Vec<u64>,
    /// Offsets: empty for `Stacked`; length `m − ℓ` (nonincreasing,
    /// `1 ≤ n_j ≤ k_j − 1`) for `ShortOverlap`; length `ℓ` (same bounds)
    /// for `LongOverlap`.
    pub n_aux: Vec<u64>,
    /// Block count for `Stacked`: any `n` with `n·ℓ ≥ m` (the interval
    /// formulas are zero-extended, so every valid choice yields the same
    /// sets).
    pub n_blocks: usize,
}

impl ConstructionParams {
    pub fn stacked(ell: usize, m: usize, k: Vec<u64>, n_blocks: usize) -> Self {
        ConstructionParams {
            variant: ConstructionVariant::Stacked,
            ell,
            m,
            k,
            n_aux: Vec::new(),
            n_blocks,
        }
    }

    pub fn short_overlap(ell: usize, m: usize, k: Vec<u64>, n_aux: Vec<u64>) -> Self {
        ConstructionParams {
            variant: ConstructionVariant::ShortOverlap,
            ell,
            m,
            k,
            n_aux,
            n_blocks: 0,
        }
    }

    pub fn long_overlap(ell: usize, m: usize, k: Vec<u64>, n_aux: Vec<u64>) -> Self {
        ConstructionParams {
            variant: ConstructionVariant::LongOverlap,
            ell,
            m,
            k,
            n_aux,
            n_blocks: 0,
        }
    }

    /// Checks every parameter invariant of the variant.
    pub fn validate(&self) -> Result<()> {
        fn invalid(msg: String) -> Result<()> {
            Err(Error::InvalidParams(msg))
        }
        if self.ell < 2 || self.ell >= self.m {
            return invalid(format!(
                "constructions need 2 ≤ ℓ < m (got ℓ = {}, m = {})",
                self.ell, self.m
            ));
        }
        if self.k.len() != self.m {
            return invalid(format!(
                "k must list one length per set (got {} for m = {})",
                self.k.len(),
                self.m
            ));
        }
        if self.k.iter().any(|&v| v == 0) {
            return invalid("interval lengths must be positive".into());
        }
        if self.k.windows(2).any(|w| w[0] > w[1]) {
            return invalid("interval lengths must be nondecreasing".into());
        }
        match self.variant {
            ConstructionVariant::Stacked => {
                if !self.n_aux.is_empty() {
                    return invalid("the stacked variant takes no offsets".into());
                }
                if self.n_blocks == 0 || self.n_blocks * self.ell < self.m {
                    return invalid(format!(
                        "the stacked variant needs n·ℓ ≥ m (got n = {}, ℓ = {}, m = {})",
                        self.n_blocks, self.ell, self.m
                    ));
                }
            }
            ConstructionVariant::ShortOverlap => {
                if self.m > 2 * self.ell {
                    return invalid(format!(
                        "the short-overlap variant needs m ≤ 2ℓ (got m = {}, ℓ = {})",
                        self.m, self.ell
                    ));
                }
                self.validate_overlap(self.m - self.ell)?;
            }
            ConstructionVariant::LongOverlap => {
                if self.m <= 2 * self.ell {
                    return invalid(format!(
                        "the long-overlap variant needs m > 2ℓ (got m = {}, ℓ = {})",
                        self.m, self.ell
                    ));
                }
                self.validate_overlap(self.ell)?;
            }
        }
        Ok(())
    }

    fn validate_overlap(&self, n_len: usize) -> Result<()> {
        fn invalid(msg: String) -> Result<()> {
            Err(Error::InvalidParams(msg))
        }
        if self.k[0] < 2 {
            return invalid("overlap variants need k_1 ≥ 2".into());
        }
        if self.n_aux.len() != n_len {
            return invalid(format!(
                "expected {} offsets (got {})",
                n_len,
                self.n_aux.len()
            ));
        }
        for (i, &n) in self.n_aux.iter().enumerate() {
            if n < 1 || n > self.k[i] - 1 {
                return invalid(format!(
                    "offset {} must satisfy 1 ≤ n ≤ k − 1 (got n = {}, k = {})",
                    i + 1,
                    n,
                    self.k[i]
                ));
            }
        }
        if self.n_aux.windows(2).any(|w| w[0] < w[1]) {
            return invalid("offsets must be nonincreasing".into());
        }
        Ok(())
    }

    fn k_at(&self, i: i64) -> i64 {
        if i >= 1 {
            self.k[(i - 1) as usize] as i64
        } else {
            0
        }
    }

    fn n_at(&self, i: i64) -> i64 {
        if i >= 1 {
            self.n_aux[(i - 1) as usize] as i64
        } else {
            0
        }
    }

    /// Sum of the stacked block offsets `k_{j−ℓ} + k_{j−2ℓ} + …` down to
    /// nonpositive indices.
    fn block_sum(&self, j: usize, blocks: usize) -> i64 {
        (1..=blocks)
            .map(|t| self.k_at(j as i64 - (t * self.ell) as i64))
            .sum()
    }
}

fn int_interval(lo: i64, hi: i64) -> Result<GSet> {
    GSet::new(GroupModel::Integers, (lo..=hi).map(Element::Int))
}

/// Generates the interval family for `params` over ℤ.
pub fn construct(params: &ConstructionParams) -> Result<SetSequence> {
    params.validate()?;
    let (ell, m) = (params.ell, params.m);
    let mut sets = Vec::with_capacity(m);
    for j in 1..=m {
        let (lo, hi) = match params.variant {
            ConstructionVariant::Stacked => {
                let s = params.block_sum(j, params.n_blocks);
                (s + 1, params.k_at(j as i64) + s)
            }
            ConstructionVariant::ShortOverlap => {
                let base = params.k_at(j as i64 - ell as i64) - params.n_at(j as i64 - ell as i64);
                (base + 1, params.k_at(j as i64) + base)
            }
            ConstructionVariant::LongOverlap => {
                if j <= ell {
                    (1, params.k_at(j as i64))
                } else {
                    // Block index of set j: the number of whole windows
                    // strictly before it, so the offset subscript
                    // j − blocks·ℓ always lands in [1, ℓ].
                    let blocks = (j - 1) / ell;
                    let s = params.block_sum(j, blocks);
                    let base = s - params.n_at((j - blocks * ell) as i64);
                    (base + 1, params.k_at(j as i64) + base)
                }
            }
        };
        sets.push(int_interval(lo, hi)?);
    }
    SetSequence::new(sets)
}

/// The exact size `|Σ^ℓ|` every valid parameter choice attains:
/// `Σk − ℓ + 1` for the stacked variant and `Σk − Σn − ℓ + 1` for the
/// overlap variants.
pub fn expected_equality_value(params: &ConstructionParams) -> Result<i64> {
    params.validate()?;
    let k_sum: i64 = params.k.iter().map(|&v| v as i64).sum();
    let n_sum: i64 = params.n_aux.iter().map(|&v| v as i64).sum();
    Ok(k_sum - n_sum - params.ell as i64 + 1)
}

/// The overlap-free companion sequence of an overlap-variant family: the
/// sets beyond the window are shrunk to `B_j = [k_{j−ℓ} + 1,
/// k_j + k_{j−ℓ} − n_{j−ℓ}]` (for `ShortOverlap` all of them; for
/// `LongOverlap` those of the second block only), which removes every
/// incidence above `ℓ` while keeping `Σ^ℓ(ℬ) ⊆ Σ^ℓ(𝒜)` and
/// `Σ|ℬ_j| = Σk − Σn`. Returns `None` for the stacked variant, which needs
/// no companion.
pub fn b_sequence(params: &ConstructionParams) -> Result<Option<SetSequence>> {
    params.validate()?;
    if params.variant == ConstructionVariant::Stacked {
        return Ok(None);
    }
    let ell = params.ell;
    let shrink_end = match params.variant {
        ConstructionVariant::ShortOverlap => params.m,
        _ => 2 * ell,
    };
    let original = construct(params)?;
    let mut sets = Vec::with_capacity(params.m);
    for j in 1..=params.m {
        if j > ell && j <= shrink_end {
            let base = params.k_at(j as i64 - ell as i64);
            let hi = params.k_at(j as i64) + base - params.n_at(j as i64 - ell as i64);
            sets.push(int_interval(base + 1, hi)?);
        } else {
            sets.push(original.set(j - 1).clone());
        }
    }
    SetSequence::new(sets).map(Some)
}

/// Named golden instances.
///
/// `"five-intervals"` is the five-set running family
/// `([0,3], [6,9], [7,10], [8,11], [9,12])` whose window-3 profile has
/// `Σμ = 19` and `|Σ³| = 21`.
pub fn named_example(name: &str) -> Result<SetSequence> {
    match name {
        "five-intervals" => {
            let bounds = [(0, 3), (6, 9), (7, 10), (8, 11), (9, 12)];
            let mut sets = Vec::with_capacity(bounds.len());
            for (lo, hi) in bounds {
                sets.push(int_interval(lo, hi)?);
            }
            SetSequence::new(sets)
        }
        other => Err(Error::InvalidParams(format!(
            "unknown example name {other:?} (expected \"five-intervals\")"
        ))),
    }
}

/// Rewrites an integer sequence multiplicatively: each exponent `v` becomes
/// the word `y^v` in the free group of rank one, turning sums into ordered
/// products.
pub fn mirror_to_free(seq: &SetSequence) -> Result<SetSequence> {
    if *seq.model() != GroupModel::Integers {
        return Err(Error::Precondition(
            "only integer sequences have a free-group mirror".into(),
        ));
    }
    let model = GroupModel::Free { rank: 1 };
    let mut sets = Vec::with_capacity(seq.m());
    for s in seq.sets() {
        let mut words = Vec::with_capacity(s.len());
        for e in s.iter() {
            let Element::Int(v) = e else {
                return Err(Error::Internal(
                    "integer sequence contained a non-integer element".into(),
                ));
            };
            let word = if *v == 0 { Vec::new() } else { vec![(0usize, *v)] };
            words.push(Element::Word(word));
        }
        sets.push(GSet::new(model.clone(), words)?);
    }
    SetSequence::new(sets)
}

/// Deterministic grid of valid parameter choices with `Σk ≤ max_total`,
/// covering all three variants over small `ℓ` and `m`. Every entry passes
/// `validate`.
pub fn param_grid(max_total: u64) -> Vec<ConstructionParams> {
    let mut out = Vec::new();
    for ell in 2..=3usize {
        for m in (ell + 1)..=6usize {
            for k in nondecreasing_vectors(m, 1, 4, max_total) {
                let n_blocks = m.div_ceil(ell);
                let p = ConstructionParams::stacked(ell, m, k, n_blocks);
                debug_assert!(p.validate().is_ok());
                out.push(p);
            }
            if k_floor_two(m, max_total) {
                if m <= 2 * ell {
                    for k in nondecreasing_vectors(m, 2, 4, max_total) {
                        for n in bounded_nonincreasing(&k[..m - ell]) {
                            let p = ConstructionParams::short_overlap(ell, m, k.clone(), n);
                            debug_assert!(p.validate().is_ok());
                            out.push(p);
                        }
                    }
                } else {
                    for k in nondecreasing_vectors(m, 2, 4, max_total) {
                        for n in bounded_nonincreasing(&k[..ell]) {
                            let p = ConstructionParams::long_overlap(ell, m, k.clone(), n);
                            debug_assert!(p.validate().is_ok());
                            out.push(p);
                        }
                    }
                }
            }
        }
    }
    out
}

fn k_floor_two(m: usize, max_total: u64) -> bool {
    2 * m as u64 <= max_total
}

/// All nondecreasing vectors of the given length with entries in
/// `[lo, hi]` and sum at most `max_total`.
fn nondecreasing_vectors(len: usize, lo: u64, hi: u64, max_total: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(
        out: &mut Vec<Vec<u64>>,
        cur: &mut Vec<u64>,
        len: usize,
        min: u64,
        hi: u64,
        budget: u64,
    ) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        let slots = (len - cur.len()) as u64;
        for v in min..=hi {
            if v * slots > budget {
                break;
            }
            cur.push(v);
            rec(out, cur, len, v, hi, budget - v);
            cur.pop();
        }
    }
    rec(&mut out, &mut cur, len, lo, hi, max_total);
    out
}

/// All nonincreasing vectors `n` with `1 ≤ n_i ≤ caps_source[i] − 1`.
fn bounded_nonincreasing(caps_source: &[u64]) -> Vec<Vec<u64>> {
    let caps: Vec<u64> = caps_source.iter().map(|&k| k - 1).collect();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(caps.len());
    fn rec(out: &mut Vec<Vec<u64>>, cur: &mut Vec<u64>, caps: &[u64], prev: u64) {
        if cur.len() == caps.len() {
            out.push(cur.clone());
            return;
        }
        let hi = caps[cur.len()].min(prev);
        for v in 1..=hi {
            cur.push(v);
            rec(out, cur, caps, v);
            cur.pop();
        }
    }
    rec(&mut out, &mut cur, &caps, u64::MAX);
    out
}
