//! Sequences of finite sets and their exact sum/product computations.
//!
//! A [`SetSequence`] holds an ordered list `(A_1, …, A_m)` of nonempty finite
//! sets over one group model. This module computes:
//!
//! * incidence and multiplicity statistics (how many sets contain each
//!   element, capped at a window size `ℓ`, split into head/tail counts),
//! * the generalized sumset `Σ^ℓ`: all sums of `ℓ` elements drawn from `ℓ`
//!   distinct sets of the sequence (abelian models),
//! * the generalized product set `Π^ℓ`: the same with the factors multiplied
//!   in every possible order (any model), and
//! * subsequence sums for element sequences (each term usable at most once).
//!
//! Abelian computations run as a dynamic program over (set index, number of
//! sets used) with dense bitset states; the nonabelian computation is a
//! dynamic program over bitmasks of used indices with an explicit work
//! budget. A naive enumerator is exported as a test oracle.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::group::{
    op_unchecked, word_concat, Element, GSet, GroupModel, Syllable,
};

/// An ordered sequence of nonempty finite sets over one model, with the
/// union and per-element incidence counts cached.
#[derive(Debug, Clone)]
pub struct SetSequence {
    model: GroupModel,
    sets: Vec<GSet>,
    union: GSet,
    /// incidence[i] = number of sets containing union element i.
    incidence: Vec<u32>,
}

impl SetSequence {
    /// Builds a sequence from `m ≥ 1` nonempty sets over a common model.
    pub fn new(sets: Vec<GSet>) -> Result<Self> {
        let first = sets
            .first()
            .ok_or_else(|| Error::Precondition("set sequence must have m >= 1 sets".into()))?;
        let model = first.model().clone();
        for (j, s) in sets.iter().enumerate() {
            if s.model() != &model {
                return Err(Error::ModelMismatch(format!(
                    "set {} uses a different model than set 0",
                    j
                )));
            }
            if s.is_empty() {
                return Err(Error::Precondition(format!("set {} is empty", j)));
            }
        }
        let mut union = GSet::empty(model.clone());
        for s in &sets {
            union = union.union(s)?;
        }
        let incidence = union
            .iter()
            .map(|a| sets.iter().filter(|s| s.contains(a)).count() as u32)
            .collect();
        Ok(SetSequence {
            model,
            sets,
            union,
            incidence,
        })
    }

    pub fn model(&self) -> &GroupModel {
        &self.model
    }

    /// Number of sets `m`.
    pub fn m(&self) -> usize {
        self.sets.len()
    }

    pub fn sets(&self) -> &[GSet] {
        &self.sets
    }

    /// The `j`-th set, 0-based.
    pub fn set(&self, j: usize) -> &GSet {
        &self.sets[j]
    }

    /// Union of all sets.
    pub fn union(&self) -> &GSet {
        &self.union
    }

    /// `Σ_j |A_j|`.
    pub fn size_sum(&self) -> u64 {
        self.sets.iter().map(|s| s.len() as u64).sum()
    }

    /// Number of sets containing `a` (0 if `a` is outside the union).
    pub fn incidence_of(&self, a: &Element) -> u32 {
        match self.union.as_slice().binary_search(a) {
            Ok(i) => self.incidence[i],
            Err(_) => 0,
        }
    }

    pub(crate) fn check_ell(&self, ell: usize) -> Result<()> {
        if ell >= 1 && ell <= self.m() {
            Ok(())
        } else {
            Err(Error::EllOutOfRange {
                ell,
                m: self.m(),
            })
        }
    }
}

/// Capped multiplicity statistics of a sequence at window size `ℓ`:
/// `μ(a) = min(ℓ, incidence)`, the head count `η(a)` over the first `ℓ`
/// sets, the capped tail count `τ(a)` over the remaining sets, and the set
/// `M` of elements with maximal multiplicity `μ(a) = ℓ`.
#[derive(Debug, Clone)]
pub struct MultiplicityProfile {
    ell: usize,
    support: GSet,
    mu: Vec<u32>,
    eta: Vec<u32>,
    tau: Vec<u32>,
    m_set: GSet,
}

impl MultiplicityProfile {
    pub fn ell(&self) -> usize {
        self.ell
    }

    /// The union of the sequence (domain of all maps), canonical order.
    pub fn support(&self) -> &GSet {
        &self.support
    }

    fn index_of(&self, a: &Element) -> Option<usize> {
        self.support.as_slice().binary_search(a).ok()
    }

    /// `μ(a) = min(ℓ, #{j : a ∈ A_j})`, or `None` outside the union.
    pub fn mu_of(&self, a: &Element) -> Option<u32> {
        self.index_of(a).map(|i| self.mu[i])
    }

    /// `η(a) = #{j ≤ ℓ : a ∈ A_j}` (uncapped head count).
    pub fn eta_of(&self, a: &Element) -> Option<u32> {
        self.index_of(a).map(|i| self.eta[i])
    }

    /// `τ(a) = min(ℓ, #{j > ℓ : a ∈ A_j})` (capped tail count).
    pub fn tau_of(&self, a: &Element) -> Option<u32> {
        self.index_of(a).map(|i| self.tau[i])
    }

    /// Elements with `μ(a) = ℓ`.
    pub fn m_set(&self) -> &GSet {
        &self.m_set
    }

    /// `Σ_{a ∈ A} μ(a)`.
    pub fn mu_total(&self) -> u64 {
        self.mu.iter().map(|&v| v as u64).sum()
    }

    /// `(element, μ)` pairs in canonical element order.
    pub fn iter_mu(&self) -> impl Iterator<Item = (&Element, u32)> {
        self.support.iter().zip(self.mu.iter().copied())
    }
}

/// Computes the multiplicity profile of `seq` at window size `ell`.
pub fn multiplicity_profile(seq: &SetSequence, ell: usize) -> Result<MultiplicityProfile> {
    seq.check_ell(ell)?;
    let support = seq.union().clone();
    let mut mu = Vec::with_capacity(support.len());
    let mut eta = Vec::with_capacity(support.len());
    let mut tau = Vec::with_capacity(support.len());
    let mut m_elems = Vec::new();
    for (i, a) in support.iter().enumerate() {
        let inc = seq.incidence[i];
        let head = seq.sets[..ell].iter().filter(|s| s.contains(a)).count() as u32;
        let tail_raw = inc - head;
        let m = inc.min(ell as u32);
        mu.push(m);
        eta.push(head);
        tau.push(tail_raw.min(ell as u32));
        if m == ell as u32 {
            m_elems.push(a.clone());
        }
    }
    let m_set = GSet::from_sorted_unchecked(seq.model().clone(), m_elems);
    Ok(MultiplicityProfile {
        ell,
        support,
        mu,
        eta,
        tau,
        m_set,
    })
}

/// An ordered sequence of elements (repetition allowed) over one model.
#[derive(Debug, Clone)]
pub struct ElementSequence {
    model: GroupModel,
    terms: Vec<Element>,
}

impl ElementSequence {
    pub fn new(model: GroupModel, terms: Vec<Element>) -> Result<Self> {
        model.validate()?;
        if terms.is_empty() {
            return Err(Error::Precondition(
                "element sequence must have m >= 1 terms".into(),
            ));
        }
        for t in &terms {
            model.check_element(t)?;
        }
        Ok(ElementSequence { model, terms })
    }

    pub fn model(&self) -> &GroupModel {
        &self.model
    }

    pub fn m(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &[Element] {
        &self.terms
    }

    /// `ρ_x` = number of indices carrying the value `x`.
    pub fn rho_of(&self, x: &Element) -> u32 {
        self.terms.iter().filter(|t| *t == x).count() as u32
    }

    /// The set of distinct values.
    pub fn distinct(&self) -> GSet {
        GSet::new(self.model.clone(), self.terms.iter().cloned())
            .expect("terms already validated")
    }

    /// The sequence viewed as a sequence of singleton sets.
    pub fn as_singleton_sets(&self) -> SetSequence {
        let sets = self
            .terms
            .iter()
            .map(|t| {
                GSet::singleton(self.model.clone(), t.clone()).expect("terms already validated")
            })
            .collect();
        SetSequence::new(sets).expect("m >= 1 and terms validated")
    }
}

// ---------------------------------------------------------------------------
// Dense bitset helpers
// ---------------------------------------------------------------------------

/// Dense state over abelian models exceeding this many bits fall back to a
/// sparse set-based dynamic program (integers only; finite models are dense
/// by definition).
const DENSE_LIMIT_BITS: u64 = 1 << 24;

fn bits_new(n: usize) -> Vec<u64> {
    vec![0u64; (n + 63) / 64]
}

fn bits_set(b: &mut [u64], i: usize) {
    b[i / 64] |= 1u64 << (i % 64);
}

fn for_each_bit(b: &[u64], mut f: impl FnMut(usize)) {
    for (wi, &word) in b.iter().enumerate() {
        let mut w = word;
        while w != 0 {
            let t = w.trailing_zeros() as usize;
            f(wi * 64 + t);
            w &= w - 1;
        }
    }
}

/// `dst |= src << shift` over a plain (non-circular) bit range. Set bits of
/// `src` must land inside `dst`; zero carry words are never touched (the
/// highest source word may sit at the very end of `dst`).
fn or_shifted(dst: &mut [u64], src: &[u64], shift: usize) {
    let (words, bits) = (shift / 64, shift % 64);
    for i in 0..src.len() {
        let s = src[i];
        if s == 0 {
            continue;
        }
        if bits == 0 {
            dst[i + words] |= s;
        } else {
            dst[i + words] |= s << bits;
            let carry = s >> (64 - bits);
            if carry != 0 {
                dst[i + words + 1] |= carry;
            }
        }
    }
}

/// `dst |= rotate(src, a)` over an `n`-bit circular range.
fn or_rotated(dst: &mut [u64], src: &[u64], n: u64, a: u64) {
    debug_assert!(a < n);
    if n <= 64 {
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let w = src[0];
        let r = if a == 0 {
            w
        } else {
            ((w << a) | (w >> (n - a))) & mask
        };
        dst[0] |= r;
    } else {
        for_each_bit(src, |k| {
            let idx = (k as u64 + a) % n;
            bits_set(dst, idx as usize);
        });
    }
}

/// Mixed-radix index of a residue vector (most significant digit first, so
/// ascending index order equals lexicographic vector order).
fn fa_index(v: &[u64], moduli: &[u64]) -> usize {
    let mut idx: u64 = 0;
    for (r, m) in v.iter().zip(moduli) {
        idx = idx * m + r;
    }
    idx as usize
}

fn fa_decode(mut idx: u64, moduli: &[u64]) -> Vec<u64> {
    let mut v = vec![0u64; moduli.len()];
    for i in (0..moduli.len()).rev() {
        v[i] = idx % moduli[i];
        idx /= moduli[i];
    }
    v
}

// ---------------------------------------------------------------------------
// Generalized sumset (abelian)
// ---------------------------------------------------------------------------

/// Exact `Σ^ℓ`: all sums of `ℓ` elements taken from `ℓ` distinct sets of the
/// sequence. Abelian models only.
pub fn generalized_sumset(seq: &SetSequence, ell: usize) -> Result<GSet> {
    seq.check_ell(ell)?;
    if !seq.model().is_abelian() {
        return Err(Error::NonAbelianModel(
            "generalized_sumset (use generalized_product_set)",
        ));
    }
    match seq.model() {
        GroupModel::Integers => int_sumset(seq, ell),
        GroupModel::Cyclic { n } => Ok(cyclic_sumset(seq, ell, *n)),
        GroupModel::FiniteAbelian { moduli } => Ok(fa_sumset(seq, ell, moduli)),
        GroupModel::Free { .. } => unreachable!("abelian check rejects free models"),
    }
}

/// Dynamic program skeleton shared by the dense kernels: `states[c]` is the
/// set of sums of `c` elements from `c` distinct sets among those consumed so
/// far. `add(dst, src, a)` must OR `src + a` into `dst`.
fn dp_layers<F>(seq: &SetSequence, ell: usize, nbits: usize, mut add: F) -> Vec<u64>
where
    F: FnMut(&mut [u64], &[u64], &Element),
{
    let m = seq.m();
    let mut states: Vec<Option<Vec<u64>>> = vec![None; ell + 1];
    // Layer 0 is the empty sum; it is only ever used as a source.
    let mut zero = bits_new(nbits);
    bits_set(&mut zero, 0); // caller maps the identity to index 0 contextually
    states[0] = Some(zero);
    for (j, set) in seq.sets().iter().enumerate() {
        let hi = ell.min(j + 1);
        let lo = 1.max(ell.saturating_sub(m - j - 1));
        for c in (lo..=hi).rev() {
            if let Some(src) = states[c - 1].take() {
                let mut dst = match states[c].take() {
                    Some(d) => d,
                    None => bits_new(nbits),
                };
                for a in set.iter() {
                    add(&mut dst, &src, a);
                }
                states[c - 1] = Some(src);
                states[c] = Some(dst);
            }
        }
    }
    states[ell].take().unwrap_or_else(|| bits_new(nbits))
}

fn int_sumset(seq: &SetSequence, ell: usize) -> Result<GSet> {
    // Normalize: subtract the global minimum t from every set; every ℓ-sum
    // shifts by the constant ℓ·t.
    let vals: Vec<i64> = seq
        .union()
        .iter()
        .map(|e| match e {
            Element::Int(v) => *v,
            _ => unreachable!(),
        })
        .collect();
    let t = *vals.first().expect("sets are nonempty");
    let vmax = (*vals.last().unwrap() - t) as u64;
    let span = vmax * ell as u64 + 1;
    if span > DENSE_LIMIT_BITS {
        return sparse_int_sumset(seq, ell);
    }
    let bits = dp_layers(seq, ell, span as usize, |dst, src, a| {
        let v = match a {
            Element::Int(v) => (*v - t) as usize,
            _ => unreachable!(),
        };
        or_shifted(dst, src, v);
    });
    let mut out = Vec::new();
    for_each_bit(&bits, |k| {
        out.push(Element::Int(k as i64 + ell as i64 * t));
    });
    Ok(GSet::from_sorted_unchecked(GroupModel::Integers, out))
}

/// Sparse fallback for integer sets whose value span is too large for the
/// dense kernel.
fn sparse_int_sumset(seq: &SetSequence, ell: usize) -> Result<GSet> {
    let m = seq.m();
    let mut states: Vec<Option<BTreeSet<i64>>> = vec![None; ell + 1];
    states[0] = Some(BTreeSet::from([0i64]));
    for (j, set) in seq.sets().iter().enumerate() {
        let hi = ell.min(j + 1);
        let lo = 1.max(ell.saturating_sub(m - j - 1));
        for c in (lo..=hi).rev() {
            if let Some(src) = states[c - 1].take() {
                let mut dst = states[c].take().unwrap_or_default();
                for a in set.iter() {
                    let v = match a {
                        Element::Int(v) => *v,
                        _ => unreachable!(),
                    };
                    for s in &src {
                        dst.insert(s + v);
                    }
                }
                if dst.len() as u64 > DENSE_LIMIT_BITS {
                    return Err(Error::BudgetExceeded(
                        "integer sumset exceeds the work budget".into(),
                    ));
                }
                states[c - 1] = Some(src);
                states[c] = Some(dst);
            }
        }
    }
    let out = states[ell]
        .take()
        .unwrap_or_default()
        .into_iter()
        .map(Element::Int)
        .collect();
    Ok(GSet::from_sorted_unchecked(GroupModel::Integers, out))
}

fn cyclic_sumset(seq: &SetSequence, ell: usize, n: u64) -> GSet {
    let bits = dp_layers(seq, ell, n as usize, |dst, src, a| {
        let v = match a {
            Element::Residue(v) => *v,
            _ => unreachable!(),
        };
        or_rotated(dst, src, n, v);
    });
    let mut out = Vec::new();
    for_each_bit(&bits, |k| out.push(Element::Residue(k as u64)));
    GSet::from_sorted_unchecked(GroupModel::Cyclic { n }, out)
}

fn fa_sumset(seq: &SetSequence, ell: usize, moduli: &[u64]) -> GSet {
    let n: u64 = moduli.iter().product();
    let moduli_owned = moduli.to_vec();
    let bits = dp_layers(seq, ell, n as usize, |dst, src, a| {
        let av = match a {
            Element::ResidueVec(v) => v,
            _ => unreachable!(),
        };
        for_each_bit(src, |k| {
            let kv = fa_decode(k as u64, &moduli_owned);
            let sum: Vec<u64> = kv
                .iter()
                .zip(av)
                .zip(&moduli_owned)
                .map(|((x, y), m)| (x + y) % m)
                .collect();
            bits_set(dst, fa_index(&sum, &moduli_owned));
        });
    });
    let mut out = Vec::new();
    for_each_bit(&bits, |k| {
        out.push(Element::ResidueVec(fa_decode(k as u64, moduli)));
    });
    GSet::from_sorted_unchecked(
        GroupModel::FiniteAbelian {
            moduli: moduli.to_vec(),
        },
        out,
    )
}

// ---------------------------------------------------------------------------
// Generalized product set (any model)
// ---------------------------------------------------------------------------

/// Hard cap on sequence length for the bitmask dynamic program.
const PRODUCT_MAX_M: usize = 14;
/// Cap on the total number of words stored across live DP states.
const PRODUCT_MAX_ELEMS: usize = 1_000_000;

/// Exact `Π^ℓ`: all products of `ℓ` elements taken from `ℓ` distinct sets,
/// multiplied in every order. Equals [`generalized_sumset`] on abelian
/// models; on free models a bitmask dynamic program with a work budget runs.
pub fn generalized_product_set(seq: &SetSequence, ell: usize) -> Result<GSet> {
    seq.check_ell(ell)?;
    if seq.model().is_abelian() {
        return generalized_sumset(seq, ell);
    }
    let m = seq.m();
    if m > PRODUCT_MAX_M {
        return Err(Error::BudgetExceeded(format!(
            "product set supports at most {PRODUCT_MAX_M} sets, got {m}"
        )));
    }
    let set_words: Vec<Vec<&Vec<Syllable>>> = seq
        .sets()
        .iter()
        .map(|s| {
            s.iter()
                .map(|e| match e {
                    Element::Word(w) => w,
                    _ => unreachable!(),
                })
                .collect()
        })
        .collect();
    // Layer c holds, for each index mask of popcount c, the distinct products
    // over that mask in any order. The final answer unions layer ℓ.
    let mut layer: HashMap<u32, Vec<Vec<Syllable>>> =
        HashMap::from([(0u32, vec![Vec::new()])]);
    let mut stored = 1usize;
    for _c in 1..=ell {
        let mut next: HashMap<u32, BTreeSet<Vec<Syllable>>> = HashMap::new();
        for (mask, words) in &layer {
            for (i, set) in set_words.iter().enumerate() {
                let bit = 1u32 << i;
                if mask & bit != 0 {
                    continue;
                }
                let entry = next.entry(mask | bit).or_default();
                for w in words {
                    for a in set {
                        entry.insert(word_concat(w, a));
                    }
                }
            }
        }
        layer = next
            .into_iter()
            .map(|(k, v)| (k, v.into_iter().collect()))
            .collect();
        stored = layer.values().map(Vec::len).sum();
        if stored > PRODUCT_MAX_ELEMS {
            return Err(Error::BudgetExceeded(format!(
                "product set stores {stored} intermediate words (cap {PRODUCT_MAX_ELEMS})"
            )));
        }
    }
    let _ = stored;
    let mut out: BTreeSet<Element> = BTreeSet::new();
    for words in layer.into_values() {
        for w in words {
            out.insert(Element::Word(w));
        }
    }
    Ok(GSet::from_sorted_unchecked(
        seq.model().clone(),
        out.into_iter().collect(),
    ))
}

/// Sums of `ℓ` terms of the sequence at distinct indices (each occurrence of
/// a repeated value is usable once). Equals the generalized product set of
/// the singleton-set sequence.
pub fn subsequence_sumset(a: &ElementSequence, ell: usize) -> Result<GSet> {
    if ell < 1 || ell > a.m() {
        return Err(Error::EllOutOfRange { ell, m: a.m() });
    }
    if a.model().is_abelian() {
        return generalized_sumset(&a.as_singleton_sets(), ell);
    }
    // Nonabelian singleton sequences: the bitmask budget (m ≤ 14) applies.
    generalized_product_set(&a.as_singleton_sets(), ell)
}

// ---------------------------------------------------------------------------
// Naive oracle
// ---------------------------------------------------------------------------

/// Work cap for the naive enumerator.
const NAIVE_MAX_WORK: u128 = 50_000_000;

/// Reference implementation of `Π^ℓ` by direct enumeration of every index
/// subset, every ordering of it (one ordering on abelian models), and every
/// element tuple. Intended as a test oracle; budget-guarded.
pub fn naive_generalized_product_set(seq: &SetSequence, ell: usize) -> Result<GSet> {
    seq.check_ell(ell)?;
    let m = seq.m();
    let abelian = seq.model().is_abelian();
    let max_size = seq.sets().iter().map(GSet::len).max().unwrap_or(0) as u128;
    let mut orders: u128 = 1;
    if !abelian {
        for k in 1..=ell as u128 {
            orders = orders.saturating_mul(k);
        }
    }
    let mut subsets: u128 = 1;
    for k in 0..ell as u128 {
        subsets = subsets.saturating_mul(m as u128 - k);
    }
    let work = subsets
        .saturating_mul(orders)
        .saturating_mul(max_size.saturating_pow(ell as u32));
    if work > NAIVE_MAX_WORK {
        return Err(Error::BudgetExceeded(
            "naive enumeration exceeds the work budget".into(),
        ));
    }

    let model = seq.model().clone();
    let mut out: BTreeSet<Element> = BTreeSet::new();
    let mut indices: Vec<usize> = Vec::with_capacity(ell);
    // Enumerate ordered tuples of distinct indices; on abelian models restrict
    // to increasing tuples (order does not matter).
    fn rec(
        seq: &SetSequence,
        model: &GroupModel,
        ell: usize,
        abelian: bool,
        indices: &mut Vec<usize>,
        out: &mut BTreeSet<Element>,
    ) {
        if indices.len() == ell {
            // Cartesian product over the chosen sets, multiplied in order.
            fn tuples(
                seq: &SetSequence,
                model: &GroupModel,
                indices: &[usize],
                pos: usize,
                acc: &Element,
                out: &mut BTreeSet<Element>,
            ) {
                if pos == indices.len() {
                    out.insert(acc.clone());
                    return;
                }
                for a in seq.set(indices[pos]).iter() {
                    let next = op_unchecked(model, acc, a);
                    tuples(seq, model, indices, pos + 1, &next, out);
                }
            }
            tuples(seq, model, indices, 0, &model.identity(), out);
            return;
        }
        let start = if abelian {
            indices.last().map_or(0, |&i| i + 1)
        } else {
            0
        };
        for i in start..seq.m() {
            if !abelian && indices.contains(&i) {
                continue;
            }
            indices.push(i);
            rec(seq, model, ell, abelian, indices, out);
            indices.pop();
        }
    }
    rec(seq, &model, ell, abelian, &mut indices, &mut out);
    Ok(GSet::from_sorted_unchecked(
        model,
        out.into_iter().collect(),
    ))
}
