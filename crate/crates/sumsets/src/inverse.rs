//! Witness constructions and equality classifiers for extremal instances:
//! the tail/saturation augmentation pipeline, nested multiplicity chains,
//! minimizing-family detection, and the classical two-set and multi-set
//! equality classifications.

use std::collections::{BTreeMap, BTreeSet};

use crate::bounds::{abelian_mu_bound, torsion_free_mu_bound, zp_mu_bound, BoundReport};
use crate::error::{Error, Result};
use crate::group::{
    enumerate, inverse, is_prime, op, ordered_set_product, set_op, smallest_subgroup_order,
    Element, GSet, GroupModel, SubgroupOrder,
};
use crate::seqset::{
    generalized_product_set, generalized_sumset, multiplicity_profile, MultiplicityProfile,
    SetSequence,
};
use crate::structure::{
    detect_progressions, linked_ratio_family, realize, same_ratio_family, witness_with_ratio,
    ProgressionType,
};

/// Output of the two-pass augmentation: for a sequence `(A_1, …, A_m)` and a
/// window `ℓ`, a family `A_1^2, …, A_ℓ^2` that realizes the full
/// multiplicity profile while its ordered product stays inside `Π^ℓ(𝒜)`.
///
/// Writing `M = {a : μ(a) = ℓ}` and `τ(a)` for the capped tail count, the
/// intermediate objects are
/// `B_j = {a ∈ (A_{ℓ+1} ∪ … ∪ A_m) ∖ M : τ(a) ≥ j}`,
/// `A_j^1 = A_j ∪ B_j ∪ M`, the defect set `X` of elements still short of
/// their multiplicity after the first pass, and the insertions
/// `S_j = {a ∈ X : τ(a) < j ≤ 𝓛(a)}` so that `A_j^2 = A_j^1 ∪ S_j`.
#[derive(Debug, Clone)]
pub struct WitnessSets {
    /// `B_1, …, B_ℓ` (slot `j − 1` holds `B_j`).
    pub b: Vec<GSet>,
    /// First augmentation `A_j^1 = A_j ∪ B_j ∪ M`.
    pub a1: Vec<GSet>,
    /// Final augmentation `A_j^2 = A_j^1 ∪ S_j`.
    pub a2: Vec<GSet>,
    /// Second-pass insertions `S_j`.
    pub s: Vec<GSet>,
    /// Elements needing the second pass.
    pub x: GSet,
    /// Insertion depth `𝓛(a)` for every `a ∈ X`.
    pub l_map: BTreeMap<Element, usize>,
}

/// A minimizing family for `(seq, ℓ)`: sets `B_1, …, B_ℓ ⊆ A`, each of size
/// at least two, realizing linked progression types with the shared ratio
/// `g ≠ 1`, covering every element exactly `μ(a)` times, and multiplying
/// out to the whole of `Π^ℓ(𝒜)`.
#[derive(Debug, Clone)]
pub struct MinimizingWitness {
    pub g: Element,
    pub b_sets: Vec<GSet>,
    pub types: Vec<ProgressionType>,
}

/// The nested multiplicity chain `A′_j = {a ∈ A : μ(a) ≥ j}`, together with
/// the two facts it is used for: whether some element attains the full
/// multiplicity `ℓ`, and whether the chain's ordered product lands inside
/// `Π^ℓ(𝒜)`.
#[derive(Debug, Clone)]
pub struct PrimeChain {
    /// `A′_1 ⊇ A′_2 ⊇ … ⊇ A′_ℓ`.
    pub chain: Vec<GSet>,
    /// `μ(a) = ℓ` attained somewhere (`A′_ℓ ≠ ∅`).
    pub hypothesis_met: bool,
    /// `A′_1⋯A′_ℓ ⊆ Π^ℓ(𝒜)` (vacuously true when some `A′_j` is empty).
    pub product_contained: bool,
}

/// Progressions with one shared ratio for a family of sets.
#[derive(Debug, Clone)]
pub struct FamilyWitness {
    pub ratio: Element,
    pub types: Vec<ProgressionType>,
}

/// Linked-progression certificate for the prefix `A′_1 ⊇ … ⊇ A′_k` of the
/// nested multiplicity chain, `k` the largest index with `|A′_k| ≥ 2`.
#[derive(Debug, Clone)]
pub struct ChainWitness {
    pub k: usize,
    pub ratio: Option<Element>,
    pub types: Vec<ProgressionType>,
    pub linked: bool,
}

/// Equality classification of one instance against the applicable μ-bound,
/// carrying every structural conclusion the inverse theory licenses, the
/// hypothesis gates that were checked, and the reasons any conclusion was
/// not asserted.
#[derive(Debug, Clone)]
pub struct ExtremalReport {
    pub bound: BoundReport,
    /// `slack == 0` under the applicable μ-bound.
    pub equality: bool,
    /// Size cap of the applicable structure theorem: always true on
    /// torsion-free models; on finite models `|Π^ℓ| < p(G) − 1` when
    /// `ℓ = 2` and `|Π^ℓ| < p(G)` when `ℓ ≥ 3`.
    pub caps_ok: bool,
    pub hypothesis_failures: Vec<String>,
    /// Descriptive names of the structural conclusions that were attempted.
    pub applicable: Vec<String>,
    /// The augmented sets `A_1 ∪ M, …, A_m ∪ M` as progressions with one
    /// shared ratio.
    pub family: Option<FamilyWitness>,
    /// Per-set progressions without a shared-ratio claim (the `ℓ = 2`
    /// finite-model case).
    pub per_set_gp: Option<Vec<ProgressionType>>,
    /// The union `A` as a progression with the family's ratio.
    pub union_gp: Option<ProgressionType>,
    /// Linked certificate for the nested multiplicity chain.
    pub chain: Option<ChainWitness>,
}

/// Two-set / multi-set equality classification: the equality flag, whether
/// every hypothesis of the structure statement holds, and the shared-ratio
/// progression witness when both do.
#[derive(Debug, Clone)]
pub struct VosperReport {
    pub equality: bool,
    pub applicable: bool,
    pub hypothesis_failures: Vec<String>,
    pub ratio: Option<Element>,
    pub types: Vec<ProgressionType>,
}

/// Generator parameters for the sparse-overlap extremality scan over ℤ.
#[derive(Debug, Clone)]
pub struct SparseScanParams {
    /// Number of sets per instance.
    pub m: usize,
    /// Window size, `2 ≤ ell < m`.
    pub ell: usize,
    /// Sets range over `[0, universe_max]`.
    pub universe_max: u32,
    /// Minimum set cardinality (the structure statement needs 2).
    pub min_set_size: usize,
}

/// The smallest `i ≥ 0` with `P(i) = μ(a)`, where
/// `P(i) = i + #{j ∈ (i, ℓ] : a ∈ A_j}`.
///
/// Defined for elements with `1 ≤ η(a) ≤ μ(a) < ℓ`. `P` starts at `η(a)`,
/// ends at `ℓ`, and moves in steps of 0 or 1, so the value is attained.
pub fn compute_l(seq: &SetSequence, ell: usize, a: &Element) -> Result<usize> {
    let profile = multiplicity_profile(seq, ell)?;
    insertion_depth(seq, &profile, a)
}

fn insertion_depth(
    seq: &SetSequence,
    profile: &MultiplicityProfile,
    a: &Element,
) -> Result<usize> {
    let ell = profile.ell();
    let (Some(mu), Some(eta)) = (profile.mu_of(a), profile.eta_of(a)) else {
        return Err(Error::Precondition(
            "insertion depth is defined only on elements of the union".into(),
        ));
    };
    if eta < 1 || eta > mu || mu as usize >= ell {
        return Err(Error::Precondition(format!(
            "insertion depth needs 1 ≤ η(a) ≤ μ(a) < ℓ (got η = {eta}, μ = {mu}, ℓ = {ell})"
        )));
    }
    let mut suffix = eta as usize;
    for i in 0..=ell {
        if i > 0 && seq.set(i - 1).contains(a) {
            suffix -= 1;
        }
        if i + suffix == mu as usize {
            return Ok(i);
        }
    }
    Err(Error::Internal(
        "P(i) never attained μ(a) despite valid preconditions".into(),
    ))
}

/// Runs the two-pass augmentation and verifies every structural equation
/// before returning. With `ℓ = m` the multiplicity of every element equals
/// its exact incidence count, so the original sets already realize the
/// profile and the construction short-circuits to `A_j^2 = A_j`.
pub fn build_witness_sets(seq: &SetSequence, ell: usize) -> Result<WitnessSets> {
    seq.check_ell(ell)?;
    if ell < 2 {
        return Err(Error::Precondition(
            "witness augmentation needs ℓ ≥ 2".into(),
        ));
    }
    let m = seq.m();
    let model = seq.model().clone();
    let profile = multiplicity_profile(seq, ell)?;
    let ws = if ell == m {
        let empty = GSet::empty(model.clone());
        WitnessSets {
            b: vec![empty.clone(); ell],
            a1: seq.sets().to_vec(),
            a2: seq.sets().to_vec(),
            s: vec![empty.clone(); ell],
            x: empty,
            l_map: BTreeMap::new(),
        }
    } else {
        let m_set = profile.m_set().clone();
        let mut tail = GSet::empty(model.clone());
        for j in ell..m {
            tail = tail.union(seq.set(j))?;
        }
        let tail_free = tail.difference(&m_set)?;
        let mut b = Vec::with_capacity(ell);
        for j in 1..=ell {
            let members: Vec<Element> = tail_free
                .iter()
                .filter(|x| profile.tau_of(x).unwrap_or(0) as usize >= j)
                .cloned()
                .collect();
            b.push(GSet::new(model.clone(), members)?);
        }
        let mut a1 = Vec::with_capacity(ell);
        for j in 0..ell {
            a1.push(seq.set(j).union(&b[j])?.union(&m_set)?);
        }
        let mut head = GSet::empty(model.clone());
        for j in 0..ell {
            head = head.union(seq.set(j))?;
        }
        let shared = head.intersection(&tail)?.difference(&m_set)?;
        let mut x_members = Vec::new();
        let mut l_map = BTreeMap::new();
        let mut s_members: Vec<Vec<Element>> = vec![Vec::new(); ell];
        for a in shared.iter() {
            let mu = profile.mu_of(a).unwrap() as usize;
            let covered = a1.iter().filter(|s| s.contains(a)).count();
            if covered >= mu {
                continue;
            }
            let tau = profile.tau_of(a).unwrap() as usize;
            let depth = insertion_depth(seq, &profile, a)?;
            if depth <= tau {
                return Err(Error::Internal(
                    "insertion depth did not exceed the tail count on a defect element".into(),
                ));
            }
            // Every slot up to the insertion depth must end up containing
            // `a`; slots where `a` already sits (an original membership
            // inside the window) count toward the depth total and get no
            // duplicate insertion.
            for j in (tau + 1)..=depth {
                if !a1[j - 1].contains(a) {
                    s_members[j - 1].push(a.clone());
                }
            }
            x_members.push(a.clone());
            l_map.insert(a.clone(), depth);
        }
        let x = GSet::new(model.clone(), x_members)?;
        let mut s = Vec::with_capacity(ell);
        let mut a2 = Vec::with_capacity(ell);
        for j in 0..ell {
            let sj = GSet::new(model.clone(), s_members[j].clone())?;
            a2.push(a1[j].union(&sj)?);
            s.push(sj);
        }
        WitnessSets {
            b,
            a1,
            a2,
            s,
            x,
            l_map,
        }
    };
    ws.verify(seq, ell)?;
    Ok(ws)
}

impl WitnessSets {
    /// Re-derives and checks every structural equation of the augmentation
    /// against `seq`: the defining descriptions of `B_j`, `A_j^1`, `X` and
    /// `S_j`; the exact-cover identity `Σ_j χ_{A_j^2}(a) = μ(a)`; the size
    /// accounting `Σ_j |A_j^2| = Σ_a μ(a)`; the product containment
    /// `A_1^2⋯A_ℓ^2 ⊆ Π^ℓ(𝒜)`; the per-set growth `|A_j^2| ≥ |A_j|`; and
    /// the overlap claim that every `a ∈ S_r` lies in at least `r` of the
    /// sets `A_1, …, A_{r−1}, A_{ℓ+1}, …, A_m`.
    pub fn verify(&self, seq: &SetSequence, ell: usize) -> Result<()> {
        fn fail(what: &str) -> Result<()> {
            Err(Error::Internal(format!(
                "witness-set invariant failed: {what}"
            )))
        }
        seq.check_ell(ell)?;
        let m = seq.m();
        let model = seq.model().clone();
        if self.b.len() != ell || self.a1.len() != ell || self.a2.len() != ell || self.s.len() != ell
        {
            return fail("family lengths differ from ℓ");
        }
        let profile = multiplicity_profile(seq, ell)?;
        let m_set = profile.m_set();

        if ell == m {
            if self.a2 != seq.sets() || self.a1 != seq.sets() {
                return fail("ℓ = m case must leave the sets unchanged");
            }
            if self.b.iter().any(|s| !s.is_empty())
                || self.s.iter().any(|s| !s.is_empty())
                || !self.x.is_empty()
                || !self.l_map.is_empty()
            {
                return fail("ℓ = m case must have no augmentation");
            }
        } else {
            let mut tail = GSet::empty(model.clone());
            for j in ell..m {
                tail = tail.union(seq.set(j))?;
            }
            let tail_free = tail.difference(m_set)?;
            for j in 1..=ell {
                let expect = GSet::new(
                    model.clone(),
                    tail_free
                        .iter()
                        .filter(|x| profile.tau_of(x).unwrap_or(0) as usize >= j)
                        .cloned()
                        .collect::<Vec<_>>(),
                )?;
                if self.b[j - 1] != expect {
                    return fail("B_j differs from the capped-tail description");
                }
                let a1 = seq.set(j - 1).union(&self.b[j - 1])?.union(m_set)?;
                if self.a1[j - 1] != a1 {
                    return fail("A_j^1 differs from A_j ∪ B_j ∪ M");
                }
            }
            let mut head = GSet::empty(model.clone());
            for j in 0..ell {
                head = head.union(seq.set(j))?;
            }
            let mut defects = Vec::new();
            for a in head.intersection(&tail)?.difference(m_set)?.iter() {
                let mu = profile.mu_of(a).unwrap() as usize;
                let covered = self.a1.iter().filter(|s| s.contains(a)).count();
                if covered < mu {
                    defects.push(a.clone());
                }
            }
            if self.x != GSet::new(model.clone(), defects)? {
                return fail("X differs from the defect description");
            }
            if self.l_map.len() != self.x.len()
                || !self.x.iter().all(|a| self.l_map.contains_key(a))
            {
                return fail("𝓛 map keys differ from X");
            }
            for (a, &depth) in &self.l_map {
                let tau = profile.tau_of(a).unwrap_or(0) as usize;
                if insertion_depth(seq, &profile, a)? != depth || depth <= tau {
                    return fail("recorded 𝓛(a) is wrong or does not exceed τ(a)");
                }
            }
            for j in 1..=ell {
                let expect = GSet::new(
                    model.clone(),
                    self.x
                        .iter()
                        .filter(|a| {
                            let tau = profile.tau_of(a).unwrap_or(0) as usize;
                            tau < j && j <= self.l_map[a] && !self.a1[j - 1].contains(a)
                        })
                        .cloned()
                        .collect::<Vec<_>>(),
                )?;
                if self.s[j - 1] != expect {
                    return fail("S_j differs from the insertion description");
                }
                if self.s[j - 1] != self.a2[j - 1].difference(&self.a1[j - 1])? {
                    return fail("S_j is not A_j^2 ∖ A_j^1");
                }
                if self.a2[j - 1] != self.a1[j - 1].union(&self.s[j - 1])? {
                    return fail("A_j^2 is not A_j^1 ∪ S_j");
                }
            }
        }

        for (a, mu) in profile.iter_mu() {
            let cover = self.a2.iter().filter(|s| s.contains(a)).count() as u32;
            if cover != mu {
                return fail("some element is not covered exactly μ(a) times");
            }
        }
        let total: u64 = self.a2.iter().map(|s| s.len() as u64).sum();
        if total != profile.mu_total() {
            return fail("Σ|A_j^2| differs from Σμ");
        }
        for j in 0..ell {
            if self.a2[j].len() < seq.set(j).len() {
                return fail("some A_j^2 is smaller than A_j");
            }
        }
        let product = ordered_set_product(&self.a2)?;
        if !product.is_subset_of(&generalized_product_set(seq, ell)?) {
            return fail("A_1^2⋯A_ℓ^2 escapes Π^ℓ(𝒜)");
        }
        for r in 1..=ell {
            for a in self.s[r - 1].iter() {
                let mut count = 0usize;
                for j in 0..(r - 1) {
                    if seq.set(j).contains(a) {
                        count += 1;
                    }
                }
                for j in ell..m {
                    if seq.set(j).contains(a) {
                        count += 1;
                    }
                }
                if count < r {
                    return fail("an inserted element lies in too few early/tail sets");
                }
            }
        }
        Ok(())
    }
}

/// Builds the nested multiplicity chain `A′_j = {a : μ(a) ≥ j}` for
/// `j = 1, …, ℓ` and records whether the full-multiplicity hypothesis holds
/// and whether the chain's ordered product stays inside `Π^ℓ(𝒜)`.
pub fn build_prime_chain(seq: &SetSequence, ell: usize) -> Result<PrimeChain> {
    seq.check_ell(ell)?;
    if ell < 2 {
        return Err(Error::Precondition(
            "multiplicity chain needs ℓ ≥ 2".into(),
        ));
    }
    let model = seq.model().clone();
    let profile = multiplicity_profile(seq, ell)?;
    let mut chain = Vec::with_capacity(ell);
    for j in 1..=ell as u32 {
        let members: Vec<Element> = profile
            .iter_mu()
            .filter(|&(_, mu)| mu >= j)
            .map(|(a, _)| a.clone())
            .collect();
        chain.push(GSet::new(model.clone(), members)?);
    }
    let total: u64 = chain.iter().map(|s| s.len() as u64).sum();
    if total != profile.mu_total() {
        return Err(Error::Internal(
            "chain sizes disagree with the multiplicity total".into(),
        ));
    }
    let hypothesis_met = !profile.m_set().is_empty();
    let product_contained = if chain.iter().any(|s| s.is_empty()) {
        true
    } else {
        ordered_set_product(&chain)?.is_subset_of(&generalized_product_set(seq, ell)?)
    };
    Ok(PrimeChain {
        chain,
        hypothesis_met,
        product_contained,
    })
}

/// Tests the four defining conditions of a minimizing family against the
/// candidate `cand = (B_1, …, B_ℓ)`: every `|B_i| ≥ 2` with `B_i ⊆ A`; the
/// exact cover `Σ_j χ_{B_j}(a) = μ(a)`; linked progression types with one
/// shared ratio `g ≠ 1`; and `B_1⋯B_ℓ = Π^ℓ(𝒜)`. Returns the witness when
/// all four hold.
pub fn validate_minimizing_candidate(
    seq: &SetSequence,
    ell: usize,
    cand: &[GSet],
) -> Result<Option<MinimizingWitness>> {
    seq.check_ell(ell)?;
    if cand.len() != ell {
        return Err(Error::Precondition(format!(
            "candidate family must have exactly ℓ = {ell} sets (got {})",
            cand.len()
        )));
    }
    let union = seq.union();
    for b in cand {
        if b.model() != seq.model() {
            return Err(Error::ModelMismatch(
                "candidate set model differs from the sequence".into(),
            ));
        }
        if b.len() < 2 || !b.is_subset_of(union) {
            return Ok(None);
        }
    }
    let profile = multiplicity_profile(seq, ell)?;
    for (a, mu) in profile.iter_mu() {
        let cover = cand.iter().filter(|b| b.contains(a)).count() as u32;
        if cover != mu {
            return Ok(None);
        }
    }
    let Some((g, types)) = linked_ratio_family(cand) else {
        return Ok(None);
    };
    if ordered_set_product(cand)? != generalized_product_set(seq, ell)? {
        return Ok(None);
    }
    Ok(Some(MinimizingWitness {
        g,
        b_sets: cand.to_vec(),
        types,
    }))
}

/// Order of `x` in the model: `Finite(k)` with the least `k ≥ 1` such that
/// `x^k = 1`, or `Infinite` for non-identity elements of infinite models.
fn element_order(model: &GroupModel, x: &Element) -> Result<SubgroupOrder> {
    if *x == model.identity() {
        return Ok(SubgroupOrder::Finite(1));
    }
    if !model.is_finite() {
        return Ok(SubgroupOrder::Infinite);
    }
    let mut cur = x.clone();
    let mut k = 1u64;
    while cur != model.identity() {
        cur = op(model, &cur, x)?;
        k += 1;
    }
    Ok(SubgroupOrder::Finite(k))
}

/// The set of orders of non-identity elements, or `None` when the model is
/// too large to enumerate cheaply.
fn nonidentity_orders(model: &GroupModel) -> Result<Option<BTreeSet<u64>>> {
    match model.order() {
        Some(n) if n <= 4096 => {
            let id = model.identity();
            let mut out = BTreeSet::new();
            for x in enumerate(model)?.iter() {
                if *x != id {
                    if let SubgroupOrder::Finite(k) = element_order(model, x)? {
                        out.insert(k);
                    }
                }
            }
            Ok(Some(out))
        }
        _ => Ok(None),
    }
}

/// Candidate ratios for progressions inside `a`: the quotient set
/// `{x⁻¹y : x ≠ y ∈ a}` without the identity, elements above the identity
/// first. Any progression of length ≥ 2 inside `a` has consecutive
/// elements in `a`, so its ratio is listed here.
fn ratio_candidates(model: &GroupModel, a: &GSet) -> Result<Vec<Element>> {
    let mut ds = BTreeSet::new();
    for x in a.iter() {
        let xi = inverse(model, x)?;
        for y in a.iter() {
            if x != y {
                ds.insert(op(model, &xi, y)?);
            }
        }
    }
    let id = model.identity();
    ds.remove(&id);
    let (above, below): (Vec<_>, Vec<_>) = ds.into_iter().partition(|e| *e > id);
    Ok(above.into_iter().chain(below).collect())
}

/// One progression of length ≥ 2 with a fixed ratio inside the support,
/// with a per-support-position membership table for the cover search.
struct Run {
    set: GSet,
    covers: Vec<bool>,
}

/// Every progression of length ≥ 2 with ratio `g` contained in `a`,
/// deduplicated as sets and sorted canonically.
fn progression_runs(
    model: &GroupModel,
    a: &GSet,
    g: &Element,
    ord: SubgroupOrder,
) -> Result<Vec<Run>> {
    let max_len = match ord {
        SubgroupOrder::Finite(k) => (k as usize).min(a.len()),
        SubgroupOrder::Infinite => a.len(),
    };
    let mut seen = BTreeSet::new();
    let mut sets = Vec::new();
    for start in a.iter() {
        let mut members = vec![start.clone()];
        let mut cur = start.clone();
        while members.len() < max_len {
            cur = op(model, &cur, g)?;
            if !a.contains(&cur) {
                break;
            }
            members.push(cur.clone());
            let set = GSet::new(model.clone(), members.clone())?;
            if seen.insert(set.as_slice().to_vec()) {
                sets.push(set);
            }
        }
    }
    sets.sort_by(|x, y| x.as_slice().cmp(y.as_slice()));
    Ok(sets
        .into_iter()
        .map(|set| {
            let covers = a.iter().map(|e| set.contains(e)).collect();
            Run { set, covers }
        })
        .collect())
}

struct CoverSearch<'a> {
    seq: &'a SetSequence,
    ell: usize,
    runs: &'a [Run],
    max_run: u32,
}

impl CoverSearch<'_> {
    /// Depth-first enumeration of ℓ-multisets of runs whose indicator sum
    /// matches the remaining demand exactly; each complete cover goes
    /// through the full four-condition validation.
    fn search(
        &self,
        demand: &mut [u32],
        remaining: u32,
        slots: usize,
        chosen: &mut Vec<usize>,
    ) -> Result<Option<MinimizingWitness>> {
        if slots == 0 {
            if remaining != 0 {
                return Ok(None);
            }
            let b_sets: Vec<GSet> = chosen.iter().map(|&i| self.runs[i].set.clone()).collect();
            return validate_minimizing_candidate(self.seq, self.ell, &b_sets);
        }
        if remaining < 2 * slots as u32 || remaining > self.max_run * slots as u32 {
            return Ok(None);
        }
        let Some(pivot) = demand.iter().position(|&d| d > 0) else {
            return Ok(None);
        };
        for (ri, run) in self.runs.iter().enumerate() {
            if !run.covers[pivot] {
                continue;
            }
            if run
                .covers
                .iter()
                .zip(demand.iter())
                .any(|(&c, &d)| c && d == 0)
            {
                continue;
            }
            let size = run.set.len() as u32;
            for (c, d) in run.covers.iter().zip(demand.iter_mut()) {
                if *c {
                    *d -= 1;
                }
            }
            chosen.push(ri);
            let found = self.search(demand, remaining - size, slots - 1, chosen)?;
            chosen.pop();
            for (c, d) in run.covers.iter().zip(demand.iter_mut()) {
                if *c {
                    *d += 1;
                }
            }
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }
}

/// Ratio-by-ratio search for a minimizing family on an abelian model:
/// for each candidate ratio (screened by the size identity a linked family
/// forces), enumerate exact multiset covers of the multiplicity profile by
/// progressions with that ratio, validating each cover in full.
fn run_family_search(
    seq: &SetSequence,
    ell: usize,
    profile: &MultiplicityProfile,
    target: &GSet,
) -> Result<Option<MinimizingWitness>> {
    let model = seq.model().clone();
    if !model.is_abelian() {
        return Err(Error::Precondition(
            "minimizing family search needs an abelian model".into(),
        ));
    }
    let support = seq.union();
    if support.len() > 12 {
        return Err(Error::BudgetExceeded(format!(
            "minimizing family search is budgeted to |A| ≤ 12 (|A| = {})",
            support.len()
        )));
    }
    let goal = profile.mu_total() as i64 - ell as i64 + 1;
    let demand_init: Vec<u32> = support
        .iter()
        .map(|x| profile.mu_of(x).unwrap())
        .collect();
    let remaining: u32 = demand_init.iter().sum();
    for g in ratio_candidates(&model, support)? {
        let ord = element_order(&model, &g)?;
        // A linked family with ratio g multiplies out to a progression of
        // exactly min(ord(g), Σμ − ℓ + 1) elements, so a mismatching
        // product size cannot carry a witness with this ratio.
        if ord.cap(goal) != target.len() as i64 {
            continue;
        }
        let runs = progression_runs(&model, support, &g, ord)?;
        if runs.is_empty() {
            continue;
        }
        let max_run = runs.iter().map(|r| r.set.len() as u32).max().unwrap_or(0);
        let engine = CoverSearch {
            seq,
            ell,
            runs: &runs,
            max_run,
        };
        let mut demand = demand_init.clone();
        let mut chosen = Vec::with_capacity(ell);
        if let Some(w) = engine.search(&mut demand, remaining, ell, &mut chosen)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn require_multi_element_sets(seq: &SetSequence) -> Result<()> {
    for (j, s) in seq.sets().iter().enumerate() {
        if s.len() < 2 {
            return Err(Error::Precondition(format!(
                "every set needs at least two elements (set {} has {})",
                j + 1,
                s.len()
            )));
        }
    }
    Ok(())
}

/// Looks for a minimizing family. The constructive candidate from the
/// augmentation pipeline is tried first (the route that provably succeeds
/// on torsion-free equality instances); on abelian models a bounded
/// ratio-by-ratio cover search backs it up. `None` means no family exists
/// within the search strategy; a budget error is distinct from `None`.
pub fn check_minimizing(seq: &SetSequence, ell: usize) -> Result<Option<MinimizingWitness>> {
    seq.check_ell(ell)?;
    if ell < 2 {
        return Err(Error::Precondition(
            "minimizing detection needs ℓ ≥ 2".into(),
        ));
    }
    require_multi_element_sets(seq)?;
    let model = seq.model().clone();
    let profile = multiplicity_profile(seq, ell)?;
    let target = generalized_product_set(seq, ell)?;
    let goal = profile.mu_total() as i64 - ell as i64 + 1;
    // Size screen from the defining conditions alone: a family with ratio
    // g multiplies out to min(ord(g), Σμ − ℓ + 1) elements, so that value
    // must match |Π^ℓ| for some admissible order.
    if model.is_torsion_free() {
        if target.len() as i64 != goal {
            return Ok(None);
        }
    } else if let Some(orders) = nonidentity_orders(&model)? {
        if !orders
            .iter()
            .any(|&q| goal.min(q as i64) == target.len() as i64)
        {
            return Ok(None);
        }
    }
    let ws = build_witness_sets(seq, ell)?;
    if let Some(w) = validate_minimizing_candidate(seq, ell, &ws.a2)? {
        return Ok(Some(w));
    }
    if model.is_abelian() {
        run_family_search(seq, ell, &profile, &target)
    } else {
        // Unreachable on a correct build: on torsion-free models the
        // augmentation candidate is sufficient whenever equality holds,
        // and the size screen has already excluded everything else.
        Err(Error::Internal(
            "augmentation candidate failed on a torsion-free equality instance".into(),
        ))
    }
}

/// Independent confirmation route: runs only the ratio-by-ratio cover
/// search (never the constructive candidate, never an equality screen), so
/// its verdict does not share code paths with `check_minimizing`'s fast
/// route. Abelian models only; budgeted to `|A| ≤ 12`.
pub fn search_minimizing_exhaustive(
    seq: &SetSequence,
    ell: usize,
) -> Result<Option<MinimizingWitness>> {
    seq.check_ell(ell)?;
    if ell < 2 {
        return Err(Error::Precondition(
            "minimizing detection needs ℓ ≥ 2".into(),
        ));
    }
    require_multi_element_sets(seq)?;
    if !seq.model().is_abelian() {
        return Err(Error::Precondition(
            "exhaustive minimizing search needs an abelian model".into(),
        ));
    }
    let profile = multiplicity_profile(seq, ell)?;
    let target = generalized_product_set(seq, ell)?;
    run_family_search(seq, ell, &profile, &target)
}

/// Classifies one instance against the applicable μ-bound and, when
/// equality holds under the applicable hypotheses, attempts every
/// structural conclusion: the shared-ratio family for the augmented sets,
/// the per-set progressions (finite `ℓ = 2`), the union progression, and
/// the linked multiplicity chain. Unmet hypotheses are reported, never
/// silently skipped.
pub fn classify_extremal(seq: &SetSequence, ell: usize) -> Result<ExtremalReport> {
    seq.check_ell(ell)?;
    let model = seq.model().clone();
    let m = seq.m();
    let prime_cyclic = matches!(&model, GroupModel::Cyclic { n } if is_prime(*n));
    let bound = if model.is_torsion_free() {
        torsion_free_mu_bound(seq, ell)?
    } else if prime_cyclic && ell >= 2 {
        zp_mu_bound(seq, ell)?
    } else {
        abelian_mu_bound(seq, ell)?
    };
    let equality = bound.slack == 0;

    let mut failures = Vec::new();
    let mut small = false;
    for (j, s) in seq.sets().iter().enumerate() {
        if s.len() < 2 {
            failures.push(format!("set {} has fewer than two elements", j + 1));
            small = true;
        }
    }
    if ell < 2 {
        failures.push("structural conclusions need a window of at least two sets".into());
    }
    let caps_ok = if model.is_torsion_free() {
        true
    } else {
        match smallest_subgroup_order(&model) {
            SubgroupOrder::Infinite => true,
            SubgroupOrder::Finite(p) => {
                if ell == 2 {
                    bound.actual_size < p as i64 - 1
                } else {
                    bound.actual_size < p as i64
                }
            }
        }
    };
    if !caps_ok {
        failures.push("product size violates the structural size cap for this model".into());
    }

    let mut applicable = Vec::new();
    let mut family = None;
    let mut per_set_gp = None;
    let mut union_gp = None;
    let mut chain = None;
    let profile = multiplicity_profile(seq, ell)?;
    let strict = ell < m;
    if equality && !small && ell >= 2 && caps_ok {
        let m_set = profile.m_set();
        let mut augmented = Vec::with_capacity(m);
        for s in seq.sets() {
            augmented.push(s.union(m_set)?);
        }
        if model.is_torsion_free() {
            applicable.push("augmented sets are progressions with one shared ratio".to_string());
            family = same_ratio_family(&augmented)
                .map(|(ratio, types)| FamilyWitness { ratio, types });
            if model.is_abelian() {
                if strict {
                    applicable.push("union is a progression with the shared ratio".to_string());
                    union_gp = family
                        .as_ref()
                        .and_then(|f| witness_with_ratio(seq.union(), &f.ratio));
                } else {
                    failures.push(
                        "union conclusion needs the window strictly smaller than the set count"
                            .to_string(),
                    );
                }
            }
        } else if strict {
            if ell == 2 {
                applicable.push("each augmented set is a progression".to_string());
                let mut per = Vec::with_capacity(m);
                let mut all = true;
                for s in &augmented {
                    match detect_progressions(s).into_iter().next() {
                        Some(t) => per.push(t),
                        None => {
                            all = false;
                            break;
                        }
                    }
                }
                if all {
                    per_set_gp = Some(per);
                }
            } else {
                applicable
                    .push("augmented sets are progressions with one shared ratio".to_string());
                applicable.push("union is a progression with the shared ratio".to_string());
                family = same_ratio_family(&augmented)
                    .map(|(ratio, types)| FamilyWitness { ratio, types });
                union_gp = family
                    .as_ref()
                    .and_then(|f| witness_with_ratio(seq.union(), &f.ratio));
            }
        } else {
            failures.push(
                "finite-model set conclusions need the window strictly smaller than the set count"
                    .to_string(),
            );
        }

        let saturated = !m_set.is_empty();
        let wide = profile.iter_mu().filter(|&(_, mu)| mu >= 2).count() >= 2;
        if strict && saturated && wide {
            applicable
                .push("nested multiplicity chain is a linked progression family".to_string());
            let pc = build_prime_chain(seq, ell)?;
            let mut k = 0;
            for s in &pc.chain {
                if s.len() >= 2 {
                    k += 1;
                } else {
                    break;
                }
            }
            chain = Some(match linked_ratio_family(&pc.chain[..k]) {
                Some((ratio, types)) => ChainWitness {
                    k,
                    ratio: Some(ratio),
                    types,
                    linked: true,
                },
                None => ChainWitness {
                    k,
                    ratio: None,
                    types: Vec::new(),
                    linked: false,
                },
            });
        } else {
            if !saturated {
                failures
                    .push("chain conclusion needs an element of full multiplicity".to_string());
            }
            if !wide {
                failures.push(
                    "chain conclusion needs two elements of multiplicity at least two"
                        .to_string(),
                );
            }
            if !strict {
                failures.push(
                    "chain conclusion needs the window strictly smaller than the set count"
                        .to_string(),
                );
            }
        }
    }
    Ok(ExtremalReport {
        bound,
        equality,
        caps_ok,
        hypothesis_failures: failures,
        applicable,
        family,
        per_set_gp,
        union_gp,
        chain,
    })
}

/// Two-set equality classification on an abelian model: equality
/// `|A + B| = |A| + |B| − 1` happens exactly when both sets are
/// progressions with one shared ratio, provided `|A|, |B| ≥ 2` and the sum
/// stays at least two below the smallest nontrivial subgroup order.
pub fn vosper_classify(a: &GSet, b: &GSet) -> Result<VosperReport> {
    if a.model() != b.model() {
        return Err(Error::ModelMismatch(
            "operands use different models".into(),
        ));
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::Precondition("sets must be nonempty".into()));
    }
    let model = a.model().clone();
    let sum = set_op(a, b)?;
    let equality = sum.len() == a.len() + b.len() - 1;
    let mut failures = Vec::new();
    if !model.is_abelian() {
        failures.push("classification needs an abelian model".to_string());
    }
    if a.len() < 2 || b.len() < 2 {
        failures.push("both sets need at least two elements".to_string());
    }
    if let SubgroupOrder::Finite(p) = smallest_subgroup_order(&model) {
        if sum.len() as i64 > p as i64 - 2 {
            failures.push("sum exceeds the two-below-subgroup size cap".to_string());
        }
    }
    let applicable = failures.is_empty();
    let (ratio, types) = if applicable && equality {
        match same_ratio_family(&[a.clone(), b.clone()]) {
            Some((g, ts)) => (Some(g), ts),
            None => (None, Vec::new()),
        }
    } else {
        (None, Vec::new())
    };
    Ok(VosperReport {
        equality,
        applicable,
        hypothesis_failures: failures,
        ratio,
        types,
    })
}

/// Multi-set form over the full sequence: equality
/// `|A_1 + ⋯ + A_m| = Σ|A_i| − m + 1` forces progressions with one shared
/// ratio when every set has at least two elements and either the target
/// value stays two below the smallest subgroup order, or `m ≥ 3` and the
/// sum has fewer elements than that order.
pub fn vosper_multi_classify(seq: &SetSequence) -> Result<VosperReport> {
    let model = seq.model().clone();
    let m = seq.m();
    let sum = ordered_set_product(seq.sets())?;
    let target = seq.size_sum() as i64 - m as i64 + 1;
    let equality = sum.len() as i64 == target;
    let mut failures = Vec::new();
    if !model.is_abelian() {
        failures.push("classification needs an abelian model".to_string());
    }
    if m < 2 {
        failures.push("classification needs at least two sets".to_string());
    }
    for (j, s) in seq.sets().iter().enumerate() {
        if s.len() < 2 {
            failures.push(format!("set {} has fewer than two elements", j + 1));
        }
    }
    let cap_ok = match smallest_subgroup_order(&model) {
        SubgroupOrder::Infinite => true,
        SubgroupOrder::Finite(p) => {
            let below_cap = target <= p as i64 - 2;
            let proper = m >= 3 && (sum.len() as u64) < p;
            below_cap || proper
        }
    };
    if !cap_ok {
        failures.push(
            "neither size gate holds: the target exceeds the cap and the sum fills the subgroup"
                .to_string(),
        );
    }
    let applicable = failures.is_empty();
    let (ratio, types) = if applicable && equality {
        match same_ratio_family(seq.sets()) {
            Some((g, ts)) => (Some(g), ts),
            None => (None, Vec::new()),
        }
    } else {
        (None, Vec::new())
    };
    Ok(VosperReport {
        equality,
        applicable,
        hypothesis_failures: failures,
        ratio,
        types,
    })
}

/// Ordered-product equality classification on a torsion-free model:
/// `|A_1⋯A_ℓ| = Σ|A_i| − ℓ + 1` happens exactly when the sets form a
/// linked progression family; absent exactly when equality fails. The
/// two-set witness is normalized to types `(a, h, 1)` and `(1, h, b)`.
pub fn brailovsky_classify(sets: &[GSet]) -> Result<Option<Vec<ProgressionType>>> {
    if sets.len() < 2 {
        return Err(Error::Precondition(
            "classification needs at least two sets".into(),
        ));
    }
    let model = sets[0].model().clone();
    if !model.is_torsion_free() {
        return Err(Error::Precondition(
            "classification needs a torsion-free model".into(),
        ));
    }
    for s in sets {
        if s.model() != &model {
            return Err(Error::ModelMismatch("sets use different models".into()));
        }
        if s.len() < 2 {
            return Err(Error::Precondition(
                "every set needs at least two elements".into(),
            ));
        }
    }
    let product = ordered_set_product(sets)?;
    let target = sets.iter().map(|s| s.len()).sum::<usize>() - sets.len() + 1;
    if product.len() != target {
        return Ok(None);
    }
    let Some((g, types)) = linked_ratio_family(sets) else {
        return Err(Error::Internal(
            "no linked family found on a torsion-free ordered-product equality instance".into(),
        ));
    };
    if types.len() == 2 {
        let t0 = &types[0];
        let t1 = &types[1];
        let b0_inv = inverse(&model, &t0.b)?;
        let h = op(&model, &op(&model, &b0_inv, &g)?, &t0.b)?;
        let a = op(&model, &t0.a, &t0.b)?;
        let bb = op(&model, &b0_inv, &t1.b)?;
        let id = model.identity();
        let normalized = vec![
            ProgressionType::new(a, h.clone(), id.clone(), t0.length),
            ProgressionType::new(id, h, bb, t1.length),
        ];
        debug_assert!(realize(&model, &normalized[0])
            .map(|s| s == sets[0])
            .unwrap_or(false));
        debug_assert!(realize(&model, &normalized[1])
            .map(|s| s == sets[1])
            .unwrap_or(false));
        return Ok(Some(normalized));
    }
    Ok(Some(types))
}

const CROSS_CHECK_PERIOD: u64 = 8192;

fn mu_total_masked(masks: &[u64], ell: usize, bits: usize) -> i64 {
    let mut total = 0i64;
    for b in 0..bits {
        let c = masks.iter().filter(|&&m| (m >> b) & 1 == 1).count();
        total += c.min(ell) as i64;
    }
    total
}

/// `Σ^ℓ` of bitmask sets: bit `k` of the result marks that `k` is a sum of
/// `ℓ` elements drawn from `ℓ` distinct sets.
fn windowed_mask_sum(masks: &[u64], ell: usize) -> u64 {
    let mut dp = vec![0u64; ell + 1];
    dp[0] = 1;
    for &mask in masks {
        for j in (1..=ell).rev() {
            let prev = dp[j - 1];
            if prev == 0 {
                continue;
            }
            let mut acc = dp[j];
            let mut mm = mask;
            while mm != 0 {
                let b = mm.trailing_zeros();
                acc |= prev << b;
                mm &= mm - 1;
            }
            dp[j] = acc;
        }
    }
    dp[ell]
}

fn materialize_masks(masks: &[u64], bits: usize) -> Result<SetSequence> {
    let model = GroupModel::Integers;
    let mut sets = Vec::with_capacity(masks.len());
    for &mask in masks {
        let elems: Vec<Element> = (0..bits)
            .filter(|b| (mask >> b) & 1 == 1)
            .map(|b| Element::Int(b as i64))
            .collect();
        sets.push(GSet::new(model.clone(), elems)?);
    }
    SetSequence::new(sets)
}

fn cross_check_masks(masks: &[u64], ell: usize, bits: usize) -> Result<()> {
    let seq = materialize_masks(masks, bits)?;
    let profile = multiplicity_profile(&seq, ell)?;
    let sum = generalized_sumset(&seq, ell)?;
    if mu_total_masked(masks, ell, bits) != profile.mu_total() as i64
        || windowed_mask_sum(masks, ell).count_ones() as usize != sum.len()
    {
        return Err(Error::Internal(
            "bitmask fast path disagrees with the reference sumset".into(),
        ));
    }
    Ok(())
}

/// Scans every `m`-tuple of subsets of `[0, universe_max]` of size at least
/// `min_set_size` in which at most one element lies in two or more sets,
/// and returns those achieving sumset equality `|Σ^ℓ| = Σμ − ℓ + 1`. The
/// sparse-overlap structure statement predicts an empty list. A
/// deterministic sample of instances is cross-checked against the
/// reference sumset path.
pub fn no_sparse_extremal_scan(params: &SparseScanParams) -> Result<Vec<SetSequence>> {
    let SparseScanParams {
        m,
        ell,
        universe_max,
        min_set_size,
    } = *params;
    if ell < 2 || ell >= m {
        return Err(Error::Precondition("scan needs 2 ≤ ℓ < m".into()));
    }
    if min_set_size < 1 {
        return Err(Error::Precondition(
            "scan needs nonempty sets (min_set_size ≥ 1)".into(),
        ));
    }
    if ell as u64 * universe_max as u64 > 63 {
        return Err(Error::Precondition(
            "scan needs ℓ · universe_max ≤ 63 for the bitmask path".into(),
        ));
    }
    let bits = universe_max as usize + 1;
    let mut subsets: Vec<u64> = Vec::new();
    for mask in 1u64..(1u64 << bits) {
        if mask.count_ones() as usize >= min_set_size {
            subsets.push(mask);
        }
    }
    let total = (subsets.len() as f64).powi(m as i32);
    if total > 6.0e8 {
        return Err(Error::BudgetExceeded(format!(
            "scan would enumerate {total:.1e} instances"
        )));
    }
    let mut violations = Vec::new();
    let mut masks = vec![0u64; m];
    let mut idx = vec![0usize; m];
    let mut counter: u64 = 0;
    loop {
        for (slot, &i) in idx.iter().enumerate() {
            masks[slot] = subsets[i];
        }
        counter += 1;
        let mut over2 = 0u64;
        for i in 0..m {
            for j in (i + 1)..m {
                over2 |= masks[i] & masks[j];
            }
        }
        if over2.count_ones() <= 1 {
            let mu_total = mu_total_masked(&masks, ell, bits);
            let sum = windowed_mask_sum(&masks, ell);
            if sum.count_ones() as i64 == mu_total - ell as i64 + 1 {
                violations.push(materialize_masks(&masks, bits)?);
            }
        }
        if counter % CROSS_CHECK_PERIOD == 0 {
            cross_check_masks(&masks, ell, bits)?;
        }
        let mut pos = m;
        loop {
            if pos == 0 {
                return Ok(violations);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < subsets.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}
