//! Sums over subsequences of a single element sequence.
//!
//! Where the set-sequence layer sums one element from each of `m` distinct
//! sets, this layer fixes one sequence `a_1, ..., a_m` of group elements
//! (repetition allowed) and studies sums of `ell` terms taken at pairwise
//! distinct indices.  The repetition profile `rho` (how often each value
//! occurs) induces a capped profile `mu = min(ell, rho)`, and the sum of a
//! sequence obeys the same `sum(mu) - ell + 1` lower bound as the set
//! version.  This module computes those profiles, evaluates the
//! size-or-membership disjunction, and builds the block witness sets that
//! drive the extremal classification: on an admissible equality instance
//! the distinct terms must form an arithmetic (resp. geometric)
//! progression.

use std::collections::BTreeMap;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::group::{
    ordered_set_product, pow, smallest_subgroup_order, Element, GSet, SubgroupOrder,
};
use crate::seqset::{subsequence_sumset, ElementSequence};
use crate::structure::{detect_progressions, ProgressionType};

/// Repetition profile of an element sequence relative to a window `ell`.
///
/// `rho` counts every occurrence of a value; `mu` caps each count at `ell`
/// (a value cannot contribute more than `ell` terms to any single sum).
/// `x` collects the values with `mu >= 2`, and `t` is the block threshold:
/// the smallest `t >= 2` such that the `t` most-repeated values together
/// carry at least `ell + t` occurrences.  When no such `t` exists the block
/// construction is unavailable.
#[derive(Debug, Clone)]
pub struct SubseqProfile {
    ell: usize,
    rho: BTreeMap<Element, u32>,
    mu: BTreeMap<Element, u32>,
    x: GSet,
    /// Members of `x` ordered by descending `rho`, ties by element order.
    ordered_x: Vec<Element>,
    t: Option<usize>,
}

impl SubseqProfile {
    /// Window size the profile was computed for.
    pub fn ell(&self) -> usize {
        self.ell
    }

    /// Occurrence count of `a` in the sequence (0 if absent).
    pub fn rho_of(&self, a: &Element) -> u32 {
        self.rho.get(a).copied().unwrap_or(0)
    }

    /// Capped multiplicity `min(ell, rho)` of `a` (0 if absent).
    pub fn mu_of(&self, a: &Element) -> u32 {
        self.mu.get(a).copied().unwrap_or(0)
    }

    /// Sum of the capped multiplicities over all distinct values.
    pub fn mu_total(&self) -> u64 {
        self.mu.values().map(|&v| v as u64).sum()
    }

    /// The set of values occurring at least twice (capped multiplicity >= 2).
    pub fn x(&self) -> &GSet {
        &self.x
    }

    /// The block threshold, if one exists.
    pub fn t(&self) -> Option<usize> {
        self.t
    }

    /// Members of [`Self::x`] in the canonical block order: descending
    /// occurrence count, ties broken by ascending element order.
    pub fn repeated_descending(&self) -> &[Element] {
        &self.ordered_x
    }

    /// Iterates over `(value, mu)` pairs in element order.
    pub fn iter_mu(&self) -> impl Iterator<Item = (&Element, u32)> {
        self.mu.iter().map(|(k, &v)| (k, v))
    }
}

/// Computes the repetition profile of `a` for window `ell`.
///
/// Requires `1 <= ell <= m`.  The block threshold is found greedily (the
/// most-repeated values maximize the occurrence sum at every size) and then
/// cross-checked against plain subset enumeration on small supports.
pub fn subseq_profile(a: &ElementSequence, ell: usize) -> Result<SubseqProfile> {
    if ell < 1 || ell > a.m() {
        return Err(Error::EllOutOfRange { ell, m: a.m() });
    }
    let mut rho: BTreeMap<Element, u32> = BTreeMap::new();
    for term in a.terms() {
        *rho.entry(term.clone()).or_insert(0) += 1;
    }
    let mu: BTreeMap<Element, u32> = rho
        .iter()
        .map(|(k, &v)| (k.clone(), v.min(ell as u32)))
        .collect();
    let x_members: Vec<Element> = mu
        .iter()
        .filter(|&(_, &v)| v >= 2)
        .map(|(k, _)| k.clone())
        .collect();
    let x = GSet::new(a.model().clone(), x_members.clone())?;
    let mut ordered_x = x_members;
    ordered_x.sort_by(|p, q| rho[q].cmp(&rho[p]).then_with(|| p.cmp(q)));

    let mut t = None;
    let mut prefix: u64 = ordered_x.first().map(|e| rho[e] as u64).unwrap_or(0);
    for (i, e) in ordered_x.iter().enumerate().skip(1) {
        prefix += rho[e] as u64;
        let size = i + 1;
        if prefix >= (ell + size) as u64 {
            t = Some(size);
            break;
        }
    }
    if let Some(found) = t {
        verify_threshold_minimal(&ordered_x, &rho, ell, found)?;
    }
    Ok(SubseqProfile {
        ell,
        rho,
        mu,
        x,
        ordered_x,
        t,
    })
}

/// Exhaustively confirms that no subset of fewer than `t` repeated values
/// reaches the occurrence target, for supports small enough to enumerate.
fn verify_threshold_minimal(
    ordered_x: &[Element],
    rho: &BTreeMap<Element, u32>,
    ell: usize,
    t: usize,
) -> Result<()> {
    if ordered_x.len() > 24 {
        return Ok(());
    }
    for size in 2..t {
        for combo in ordered_x.iter().combinations(size) {
            let total: u64 = combo.iter().map(|e| rho[*e] as u64).sum();
            if total >= (ell + size) as u64 {
                return Err(Error::Internal(
                    "a smaller repetition threshold passed the exhaustive check".into(),
                ));
            }
        }
    }
    Ok(())
}

/// Block witness sets extracted from a sequence with threshold `t`.
///
/// The `t` most-repeated values are laid out as a block sequence `x_seq`
/// (all copies of the first value, all but one copy of each middle value,
/// all but two copies of the last), whose first `ell` terms become
/// singleton sets.  Deleting those terms from the original sequence leaves
/// the `reduced` sequence, whose own repetition profile yields the nested
/// sets `a_prime[j] = { a : rho_reduced(a) >= j }`.  The witness sets
/// `x_sets[j] = { x_seq[j] } ∪ a_prime[j]` then satisfy:
///
/// 1. `x_sets[0]` equals the set of distinct terms;
/// 2. each value `a` lies in exactly `mu(a)` of the witness sets;
/// 3. the ordered sum `x_sets[0] + ... + x_sets[ell-1]` is contained in
///    the subsequence sum of the original sequence;
/// 4. the witness set sizes add up to `sum(mu)`;
/// 5. sizes are nonincreasing, at least 2 through index `r`, and exactly 1
///    afterwards, with `2 <= r <= ell`.
#[derive(Debug, Clone)]
pub struct BlockWitness {
    /// The block-ordered copies of the `t` most-repeated values.
    pub x_seq: Vec<Element>,
    /// Singleton sets over the first `ell` block terms.
    pub singletons: Vec<GSet>,
    /// The original sequence with the first `ell` block terms deleted.
    pub reduced: ElementSequence,
    /// Nested level sets of the reduced sequence's repetition profile.
    pub a_prime: Vec<GSet>,
    /// The witness sets `singletons[j] ∪ a_prime[j]`.
    pub x_sets: Vec<GSet>,
    /// Largest index (1-based) whose witness set still has two elements.
    pub r: usize,
}

impl BlockWitness {
    /// Whether the first `r` witness sets attain the extremal sum size
    /// `|X_1| + ... + |X_r| - r + 1`, the smallest possible for an ordered
    /// sum of `r` sets.  Admissible equality instances force this.
    pub fn extremal_identity(&self) -> Result<bool> {
        let prefix = &self.x_sets[..self.r];
        let sum = ordered_set_product(prefix)?;
        let sizes: i64 = prefix.iter().map(|s| s.len() as i64).sum();
        Ok(sum.len() as i64 == sizes - self.r as i64 + 1)
    }
}

/// Builds the block witness sets for `a` and window `ell`, or `None` when
/// the construction does not apply (window under 2, fewer than two repeated
/// values, no threshold, or fewer than two terms left after deletion).
///
/// Every structural equation of the construction is re-derived on the
/// built witness before it is returned; a violation reports an internal
/// error rather than a malformed witness.
pub fn build_block_witness(a: &ElementSequence, ell: usize) -> Result<Option<BlockWitness>> {
    let profile = subseq_profile(a, ell)?;
    if ell < 2 || profile.x().len() < 2 {
        return Ok(None);
    }
    let Some(t) = profile.t() else {
        return Ok(None);
    };
    if ell + 2 > a.m() {
        return Ok(None);
    }
    let model = a.model().clone();
    let ordered = profile.repeated_descending();

    let mut x_seq: Vec<Element> = Vec::new();
    for (i, e) in ordered.iter().take(t).enumerate() {
        let occur = profile.rho_of(e) as usize;
        let copies = if i == 0 {
            occur
        } else if i + 1 == t {
            occur - 2
        } else {
            occur - 1
        };
        for _ in 0..copies {
            x_seq.push(e.clone());
        }
    }
    if x_seq.len() < ell {
        return Err(Error::Internal(
            "block sequence shorter than the window despite the threshold".into(),
        ));
    }

    let singletons: Vec<GSet> = x_seq[..ell]
        .iter()
        .map(|e| GSet::new(model.clone(), vec![e.clone()]))
        .collect::<Result<_>>()?;

    // Delete the first `ell` block terms from the original sequence by
    // multiplicity: each copy removes one matching occurrence.
    let mut pending: BTreeMap<&Element, usize> = BTreeMap::new();
    for e in &x_seq[..ell] {
        *pending.entry(e).or_insert(0) += 1;
    }
    let mut reduced_terms: Vec<Element> = Vec::new();
    for term in a.terms() {
        if let Some(count) = pending.get_mut(term) {
            if *count > 0 {
                *count -= 1;
                continue;
            }
        }
        reduced_terms.push(term.clone());
    }
    let reduced = ElementSequence::new(model.clone(), reduced_terms)?;

    let reduced_profile = subseq_profile(&reduced, 1)?;
    let mut a_prime: Vec<GSet> = Vec::with_capacity(ell);
    for level in 1..=ell as u32 {
        let members: Vec<Element> = reduced
            .distinct()
            .iter()
            .filter(|e| reduced_profile.rho_of(e) >= level)
            .cloned()
            .collect();
        a_prime.push(GSet::new(model.clone(), members)?);
    }

    let mut x_sets: Vec<GSet> = Vec::with_capacity(ell);
    for j in 0..ell {
        x_sets.push(singletons[j].union(&a_prime[j])?);
    }

    let r = (1..=ell).rev().find(|&j| x_sets[j - 1].len() >= 2).unwrap_or(0);

    let witness = BlockWitness {
        x_seq,
        singletons,
        reduced,
        a_prime,
        x_sets,
        r,
    };
    verify_block_witness(&witness, a, &profile, t)?;
    Ok(Some(witness))
}

/// Re-derives the structural equations of the block construction.
fn verify_block_witness(
    w: &BlockWitness,
    a: &ElementSequence,
    profile: &SubseqProfile,
    t: usize,
) -> Result<()> {
    let ell = profile.ell();
    let fail = |what: &str| -> Result<()> {
        Err(Error::Internal(format!(
            "block-witness invariant failed: {what}"
        )))
    };

    // Occurrence accounting: the block sequence holds sum(rho over the top
    // t values) - t copies, at least `ell` of them.
    let expected_len: u64 = profile
        .repeated_descending()
        .iter()
        .take(t)
        .map(|e| profile.rho_of(e) as u64)
        .sum::<u64>()
        - t as u64;
    if w.x_seq.len() as u64 != expected_len {
        return fail("block sequence length");
    }

    // The last threshold value must survive the deletion with at least two
    // copies left in the reduced sequence.
    let last = &profile.repeated_descending()[t - 1];
    let reduced_count = w.reduced.terms().iter().filter(|e| *e == last).count();
    if reduced_count < 2 {
        return fail("last threshold value not repeated in the reduced sequence");
    }

    // (1) The first witness set is the full set of distinct values.
    if w.x_sets[0] != a.distinct() {
        return fail("first witness set must equal the distinct terms");
    }

    // (2) Each value lies in exactly mu(a) witness sets.
    for value in a.distinct().iter() {
        let cover = w.x_sets.iter().filter(|s| s.contains(value)).count() as u32;
        if cover != profile.mu_of(value) {
            return fail("witness-set coverage must equal the capped multiplicity");
        }
    }

    // (3) The ordered sum of the witness sets sits inside the subsequence sum.
    let witness_sum = ordered_set_product(&w.x_sets)?;
    let full_sum = subsequence_sumset(a, ell)?;
    if !witness_sum.is_subset_of(&full_sum) {
        return fail("witness sum must be contained in the subsequence sum");
    }

    // (4) Witness set sizes add up to sum(mu).
    let size_total: u64 = w.x_sets.iter().map(|s| s.len() as u64).sum();
    if size_total != profile.mu_total() {
        return fail("witness set sizes must add up to the capped multiplicity total");
    }

    // (5) Sizes are nonincreasing, at least 2 through r, exactly 1 after.
    if w.r < 2 || w.r > ell {
        return fail("the two-element prefix must span at least the first two witness sets");
    }
    for j in 1..ell {
        if w.x_sets[j].len() > w.x_sets[j - 1].len() {
            return fail("witness set sizes must be nonincreasing");
        }
    }
    if w.x_sets[w.r - 1].len() < 2 {
        return fail("witness set at the prefix boundary must have two elements");
    }
    for j in w.r..ell {
        if w.x_sets[j].len() != 1 {
            return fail("witness sets past the prefix must be singletons");
        }
    }
    Ok(())
}

/// Outcome of the extremal classification of an element sequence.
#[derive(Debug, Clone)]
pub struct SubseqReport {
    /// Sum of the capped multiplicities.
    pub mu_total: u64,
    /// Size of the subsequence sum.
    pub actual_size: i64,
    /// The lower-bound target `sum(mu) - ell + 1`.
    pub target: i64,
    /// Whether the sum size meets the target exactly.
    pub equality: bool,
    /// Whether the model's structural size caps are satisfied.
    pub caps_ok: bool,
    /// Whether at least one inverse route applies (caps included).
    pub applicable: bool,
    /// Human-readable reasons for each unmet hypothesis.
    pub hypothesis_failures: Vec<String>,
    /// Progression structure of the distinct terms on admissible equality
    /// instances.
    pub ap_witness: Option<ProgressionType>,
    /// The block witness sets, when the block route's threshold exists.
    pub blocks: Option<BlockWitness>,
}

/// Classifies an element sequence against the extremal inverse statements.
///
/// Two routes can make the classification applicable: the saturation route
/// (some value reaches full multiplicity `ell` and at least two values
/// repeat) and the block route (at least two values repeat, the block
/// threshold exists, and the window leaves at least two spare terms).
/// Finite models additionally cap the admissible sum size below the
/// smallest subgroup order (strictly below order minus one for `ell = 2`).
///
/// When an applicable instance attains equality, the distinct terms are
/// certified to form a progression; failure to find one is an internal
/// error, never a silently absent witness.  Hypotheses that do not hold are
/// reported as strings; no structural claim is made for such sequences.
pub fn subseq_inverse_check(a: &ElementSequence, ell: usize) -> Result<SubseqReport> {
    let profile = subseq_profile(a, ell)?;
    let model = a.model().clone();
    let sum = subsequence_sumset(a, ell)?;
    let actual_size = sum.len() as i64;
    let mu_total = profile.mu_total();
    let target = mu_total as i64 - ell as i64 + 1;
    let equality = actual_size == target;

    let mut hypothesis_failures: Vec<String> = Vec::new();
    if ell < 2 {
        hypothesis_failures.push("the window must contain at least two terms".into());
    }

    let caps_ok = match smallest_subgroup_order(&model) {
        SubgroupOrder::Infinite => true,
        SubgroupOrder::Finite(p) => {
            let limit = if ell == 2 { p as i64 - 1 } else { p as i64 };
            actual_size < limit
        }
    };
    if !caps_ok {
        hypothesis_failures
            .push("the sum is too large relative to the smallest subgroup order".into());
    }

    let saturated = profile.iter_mu().any(|(_, mu)| mu as usize == ell);
    let wide = profile.x().len() >= 2;
    if !saturated {
        hypothesis_failures.push("no value attains full multiplicity".into());
    }
    if !wide {
        hypothesis_failures.push("fewer than two values repeat".into());
    }
    if wide && profile.t().is_none() {
        hypothesis_failures.push("no block threshold exists".into());
    }
    if wide && ell + 2 > a.m() {
        hypothesis_failures
            .push("the block route needs the window to leave at least two spare terms".into());
    }

    let route_saturation = ell >= 2 && saturated && wide;
    let route_blocks = ell >= 2 && wide && profile.t().is_some() && ell + 2 <= a.m();
    let applicable = caps_ok && (route_saturation || route_blocks);

    let blocks = if ell >= 2 {
        build_block_witness(a, ell)?
    } else {
        None
    };

    let mut ap_witness = None;
    if applicable && equality {
        let distinct = a.distinct();
        ap_witness = detect_progressions(&distinct).into_iter().next();
        if ap_witness.is_none() {
            return Err(Error::Internal(
                "no progression structure on an admissible extremal sequence".into(),
            ));
        }
        if let Some(w) = &blocks {
            if !w.extremal_identity()? {
                return Err(Error::Internal(
                    "block prefix sum missed the forced extremal size".into(),
                ));
            }
        }
    }

    Ok(SubseqReport {
        mu_total,
        actual_size,
        target,
        equality,
        caps_ok,
        applicable,
        hypothesis_failures,
        ap_witness,
        blocks,
    })
}

/// Outcome of the size-or-membership disjunction for one sequence.
#[derive(Debug, Clone)]
pub struct DisjunctionReport {
    /// The size target `min(p(G), m - ell + 1)`.
    pub bound_value: i64,
    /// Size of the subsequence sum.
    pub actual_size: i64,
    /// Whether the sum reaches the size target.
    pub size_arm: bool,
    /// A term whose `ell`-fold power lies in the sum, if any.
    pub member_arm: Option<Element>,
}

impl DisjunctionReport {
    /// Whether at least one arm of the disjunction holds.
    pub fn holds(&self) -> bool {
        self.size_arm || self.member_arm.is_some()
    }
}

/// Evaluates the disjunction: the subsequence sum either reaches
/// `min(p(G), m - ell + 1)` elements, or contains the `ell`-fold power of
/// one of the terms.  Every sequence satisfies at least one arm.
pub fn subseq_disjunction(a: &ElementSequence, ell: usize) -> Result<DisjunctionReport> {
    if ell < 1 || ell > a.m() {
        return Err(Error::EllOutOfRange { ell, m: a.m() });
    }
    let model = a.model().clone();
    let sum = subsequence_sumset(a, ell)?;
    let actual_size = sum.len() as i64;
    let bound_value = match smallest_subgroup_order(&model) {
        SubgroupOrder::Infinite => a.m() as i64 - ell as i64 + 1,
        SubgroupOrder::Finite(p) => (p as i64).min(a.m() as i64 - ell as i64 + 1),
    };
    let size_arm = actual_size >= bound_value;
    let mut member_arm = None;
    for term in a.distinct().iter() {
        let power = pow(&model, term, ell as i64)?;
        if sum.contains(&power) {
            member_arm = Some(term.clone());
            break;
        }
    }
    Ok(DisjunctionReport {
        bound_value,
        actual_size,
        size_arm,
        member_arm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupModel;

    fn zseq(terms: &[i64]) -> ElementSequence {
        ElementSequence::new(
            GroupModel::Integers,
            terms.iter().map(|&v| Element::Int(v)).collect(),
        )
        .unwrap()
    }

    fn cseq(n: u64, terms: &[u64]) -> ElementSequence {
        ElementSequence::new(
            GroupModel::Cyclic { n },
            terms.iter().map(|&v| Element::Residue(v % n)).collect(),
        )
        .unwrap()
    }

    fn zset(members: &[i64]) -> GSet {
        GSet::new(
            GroupModel::Integers,
            members.iter().map(|&v| Element::Int(v)).collect::<Vec<_>>(),
        )
        .unwrap()
    }

    #[test]
    fn profile_counts_and_caps_multiplicities() {
        let a = zseq(&[1, 1, 2, 2, 3]);
        let p = subseq_profile(&a, 2).unwrap();
        assert_eq!(p.rho_of(&Element::Int(1)), 2);
        assert_eq!(p.rho_of(&Element::Int(2)), 2);
        assert_eq!(p.rho_of(&Element::Int(3)), 1);
        assert_eq!(p.rho_of(&Element::Int(9)), 0);
        assert_eq!(p.mu_total(), 5);
        assert_eq!(p.x(), &zset(&[1, 2]));
        assert_eq!(p.t(), Some(2));

        let caps = zseq(&[5, 5, 5, 5]);
        let p = subseq_profile(&caps, 2).unwrap();
        assert_eq!(p.rho_of(&Element::Int(5)), 4);
        assert_eq!(p.mu_of(&Element::Int(5)), 2);
        assert_eq!(p.mu_total(), 2);
        assert_eq!(p.x().len(), 1);
        assert_eq!(p.t(), None);
    }

    #[test]
    fn profile_of_distinct_terms_has_empty_repeat_set() {
        let a = zseq(&[1, 2, 3, 4]);
        let p = subseq_profile(&a, 2).unwrap();
        assert!(p.x().is_empty());
        assert_eq!(p.t(), None);
        assert_eq!(p.mu_total(), 4);
    }

    #[test]
    fn profile_rejects_out_of_range_windows() {
        let a = zseq(&[1, 2, 3]);
        assert!(subseq_profile(&a, 0).is_err());
        assert!(subseq_profile(&a, 4).is_err());
    }

    #[test]
    fn threshold_is_minimal_across_subset_sizes() {
        // Three values with two copies each: pairs carry 4 < 3 + 2 = 5
        // occurrences, so only the full triple reaches the target for a
        // window of three.
        let a = zseq(&[0, 0, 1, 1, 2, 2]);
        assert_eq!(subseq_profile(&a, 3).unwrap().t(), Some(3));
        assert_eq!(subseq_profile(&a, 2).unwrap().t(), Some(2));
        // A window of four is unreachable: 6 < 4 + 3.
        assert_eq!(subseq_profile(&a, 4).unwrap().t(), None);
    }

    #[test]
    fn block_witness_on_two_repeated_pairs() {
        let a = zseq(&[0, 0, 1, 1]);
        let w = build_block_witness(&a, 2).unwrap().unwrap();
        assert_eq!(w.x_seq, vec![Element::Int(0), Element::Int(0)]);
        assert_eq!(w.reduced.terms(), &[Element::Int(1), Element::Int(1)]);
        assert_eq!(w.x_sets, vec![zset(&[0, 1]), zset(&[0, 1])]);
        assert_eq!(w.r, 2);
        assert!(w.extremal_identity().unwrap());
    }

    #[test]
    fn block_witness_orders_values_by_occurrence_count() {
        let a = zseq(&[1, 1, 2, 2, 3]);
        let w = build_block_witness(&a, 2).unwrap().unwrap();
        // Both repeated values occur twice; the tie breaks to 1, whose two
        // copies fill the window, leaving (2, 2, 3).
        assert_eq!(w.x_seq, vec![Element::Int(1), Element::Int(1)]);
        assert_eq!(
            w.reduced.terms(),
            &[Element::Int(2), Element::Int(2), Element::Int(3)]
        );
        assert_eq!(w.a_prime, vec![zset(&[2, 3]), zset(&[2])]);
        assert_eq!(w.x_sets, vec![zset(&[1, 2, 3]), zset(&[1, 2])]);
        assert_eq!(w.r, 2);
        assert!(w.extremal_identity().unwrap());
    }

    #[test]
    fn block_witness_handles_counts_above_the_window() {
        // rho(0) = 3 exceeds ell = 2; all three copies enter the block
        // sequence and the deletion still leaves 0 covered mu(0) = 2 times.
        let a = zseq(&[0, 0, 0, 1, 1]);
        let w = build_block_witness(&a, 2).unwrap().unwrap();
        assert_eq!(w.x_seq.len(), 3);
        assert_eq!(w.reduced.terms(), &[Element::Int(0), Element::Int(1), Element::Int(1)]);
        assert_eq!(w.x_sets[0], zset(&[0, 1]));
        assert_eq!(w.x_sets[1], zset(&[0, 1]));
    }

    #[test]
    fn block_witness_absent_without_threshold_or_spare_terms() {
        // No threshold: the repeated pair carries 4 < 3 + 2 occurrences.
        assert!(build_block_witness(&zseq(&[0, 0, 1, 1]), 3).unwrap().is_none());
        // Only one repeated value.
        assert!(build_block_witness(&zseq(&[5, 5, 5, 5]), 2).unwrap().is_none());
        // Window of one.
        assert!(build_block_witness(&zseq(&[0, 0, 1, 1]), 1).unwrap().is_none());
    }

    #[test]
    fn extremal_pair_sequence_is_classified_with_progression() {
        let a = zseq(&[0, 0, 1, 1]);
        let report = subseq_inverse_check(&a, 2).unwrap();
        assert_eq!(report.mu_total, 4);
        assert_eq!(report.actual_size, 3);
        assert_eq!(report.target, 3);
        assert!(report.equality);
        assert!(report.caps_ok);
        assert!(report.applicable);
        assert!(report.hypothesis_failures.is_empty());
        assert!(report.ap_witness.is_some());
        assert!(report.blocks.is_some());
    }

    #[test]
    fn non_extremal_sequence_reports_no_structure() {
        let a = zseq(&[0, 0, 1, 5]);
        let report = subseq_inverse_check(&a, 2).unwrap();
        assert!(!report.equality);
        assert!(report.ap_witness.is_none());
    }

    #[test]
    fn constant_sequence_attains_equality_but_no_route_applies() {
        // sum(mu) = 2, target 1, and the sum {10} has exactly one element;
        // equality holds but only one value repeats, so neither inverse
        // route fires and no progression claim is made.
        let a = zseq(&[5, 5, 5, 5]);
        let report = subseq_inverse_check(&a, 2).unwrap();
        assert!(report.equality);
        assert!(!report.applicable);
        assert!(report
            .hypothesis_failures
            .iter()
            .any(|f| f.contains("fewer than two values repeat")));
        assert!(report.ap_witness.is_none());
    }

    #[test]
    fn size_caps_block_small_cyclic_models() {
        // Over Z_3 the sum of (0, 0, 1, 1) with a window of two is the whole
        // group, which violates the cap actual < p - 1 for ell = 2.
        let a = cseq(3, &[0, 0, 1, 1]);
        let report = subseq_inverse_check(&a, 2).unwrap();
        assert!(report.equality);
        assert!(!report.caps_ok);
        assert!(!report.applicable);
        assert!(report.ap_witness.is_none());
    }

    #[test]
    fn disjunction_holds_on_sample_sequences() {
        // Distinct integers: the size arm fires.
        let report = subseq_disjunction(&zseq(&[1, 2, 3, 4]), 2).unwrap();
        assert_eq!(report.bound_value, 3);
        assert!(report.size_arm);
        assert!(report.holds());

        // Constant sequence: the sum is one doubled term, so the membership
        // arm fires instead.
        let report = subseq_disjunction(&zseq(&[5, 5, 5, 5]), 2).unwrap();
        assert!(!report.size_arm);
        assert_eq!(report.member_arm, Some(Element::Int(5)));
        assert!(report.holds());

        // A coset pattern in Z_6: the subgroup order 2 caps the target.
        let report = subseq_disjunction(&cseq(6, &[0, 3, 0, 3]), 2).unwrap();
        assert_eq!(report.bound_value, 2);
        assert!(report.holds());
    }

    #[test]
    fn disjunction_covers_free_group_words() {
        let model = GroupModel::Free { rank: 1 };
        let y = Element::Word(vec![(0, 1)]);
        let y2 = Element::Word(vec![(0, 2)]);
        let a = ElementSequence::new(model, vec![y.clone(), y.clone(), y2]).unwrap();
        let report = subseq_disjunction(&a, 2).unwrap();
        assert_eq!(report.bound_value, 2);
        assert!(report.holds());
    }
}
