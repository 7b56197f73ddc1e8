//! Progression structure: detection and algebra of progressions of type
//! `(a, g, b)`.
//!
//! A set is a *progression of type `(a, g, b)`* if it equals
//! `{a·gʲ·b : j ∈ [0, L−1]}` with `g` not the identity (written additively
//! on abelian models: an arithmetic progression `a + j·g + b`). The type is
//! far from unique — conjugation shifts `(ac, c⁻¹gc, c⁻¹b)` and reversal
//! `(a, g⁻¹, b) ↔ (a, g, g^{−(L−1)}b)` preserve the realized set — but every
//! representation of one set determines the same *successor ratio*
//! `h = b⁻¹gb`: consecutive elements satisfy `s' = s·h`. Detection therefore
//! enumerates candidate successor ratios (pairwise left quotients `x⁻¹y`) and
//! accepts `h` exactly when the functional graph `s ↦ s·h` restricted to the
//! set is a single covering path (or, on finite models, a single covering
//! cycle). This is complete for every set size.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::group::{
    conjugator, inverse_unchecked, op_unchecked, power_exponent, primitive_root, Element, GSet,
    GroupModel,
};

/// A progression of type `(a, g, b)` and length `L ≥ 1`: the set
/// `{a·gʲ·b : j ∈ [0, L−1]}`, required to have exactly `L` distinct
/// elements. `g` must differ from the identity when `L ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProgressionType {
    pub a: Element,
    pub g: Element,
    pub b: Element,
    pub length: usize,
}

impl ProgressionType {
    pub fn new(a: Element, g: Element, b: Element, length: usize) -> Self {
        ProgressionType { a, g, b, length }
    }
}

/// Materializes the set `{a·gʲ·b : j ∈ [0, L−1]}` of a progression type.
/// Errors if two indices collide (possible only with torsion or `g = 1`).
pub fn realize(model: &GroupModel, t: &ProgressionType) -> Result<GSet> {
    model.check_element(&t.a)?;
    model.check_element(&t.g)?;
    model.check_element(&t.b)?;
    if t.length < 1 {
        return Err(Error::Precondition("progression length must be >= 1".into()));
    }
    if t.length >= 2 && t.g == model.identity() {
        return Err(Error::Precondition(
            "progression ratio must differ from the identity".into(),
        ));
    }
    let mut prefix = t.a.clone();
    let mut elems = Vec::with_capacity(t.length);
    for j in 0..t.length {
        if j > 0 {
            prefix = op_unchecked(model, &prefix, &t.g);
        }
        elems.push(op_unchecked(model, &prefix, &t.b));
    }
    let set = GSet::new(model.clone(), elems)?;
    if set.len() != t.length {
        return Err(Error::ProgressionCollision(format!(
            "type of length {} realizes only {} distinct elements",
            t.length,
            set.len()
        )));
    }
    Ok(set)
}

/// The lexicographically smallest non-identity element of the model, used as
/// the ratio of canonical length-1 witnesses. `None` only for the trivial
/// group.
fn canonical_nonidentity(model: &GroupModel) -> Option<Element> {
    match model {
        GroupModel::Integers => Some(Element::Int(1)),
        GroupModel::Cyclic { n } => (*n >= 2).then_some(Element::Residue(1)),
        GroupModel::FiniteAbelian { moduli } => {
            let mut v = vec![0u64; moduli.len()];
            *v.last_mut().unwrap() = 1;
            Some(Element::ResidueVec(v))
        }
        GroupModel::Free { .. } => Some(Element::Word(vec![(0, 1)])),
    }
}

/// If the functional graph `s ↦ s·h` restricted to `s` is one covering path
/// (or one covering cycle, on finite models), returns the canonical witness
/// `(start, h, identity)`; `start` is the unique path head, or the smallest
/// element on a cycle.
pub(crate) fn chain_witness(
    model: &GroupModel,
    s: &GSet,
    h: &Element,
) -> Option<ProgressionType> {
    let n = s.len();
    if n == 0 || *h == model.identity() {
        return None;
    }
    let h_inv = inverse_unchecked(model, h);
    let mut starts = s
        .iter()
        .filter(|x| !s.contains(&op_unchecked(model, x, &h_inv)));
    let (start, on_cycle) = match starts.next() {
        Some(x) => {
            if starts.next().is_some() {
                return None; // more than one path
            }
            (x.clone(), false)
        }
        // No head anywhere: every element has a predecessor, so the graph is
        // a union of cycles (impossible on torsion-free models with h ≠ 1).
        None => (s.min()?.clone(), true),
    };
    let mut cur = start.clone();
    for _ in 1..n {
        cur = op_unchecked(model, &cur, h);
        // Successor steps are injective, so a true path never revisits; a
        // cycle shorter than n reveals itself by returning to the start.
        if !s.contains(&cur) || cur == start {
            return None;
        }
    }
    // A cycle must close after exactly n steps to cover the set.
    if on_cycle && op_unchecked(model, &cur, h) != start {
        return None;
    }
    Some(ProgressionType::new(
        start,
        h.clone(),
        model.identity(),
        n,
    ))
}

/// All successor ratios `h` for which `s` is a progression, each with its
/// canonical witness of type `(start, h, identity)`, sorted by `h`. On
/// abelian models the ratios are the common differences, and `d` and `−d`
/// both appear. Empty exactly when `s` is not a progression; singletons and
/// pairs always yield witnesses.
pub fn detect_progressions(s: &GSet) -> Vec<ProgressionType> {
    let model = s.model();
    let n = s.len();
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        let g = canonical_nonidentity(model).unwrap_or_else(|| model.identity());
        return vec![ProgressionType::new(
            s.min().unwrap().clone(),
            g,
            model.identity(),
            1,
        )];
    }
    let mut candidates: Vec<Element> = Vec::new();
    for x in s.iter() {
        let x_inv = inverse_unchecked(model, x);
        for y in s.iter() {
            if x != y {
                candidates.push(op_unchecked(model, &x_inv, y));
            }
        }
    }
    candidates.sort();
    candidates.dedup();
    candidates
        .into_iter()
        .filter_map(|h| chain_witness(model, s, &h))
        .collect()
}

/// Canonical choice among a family's valid common ratios: the smallest
/// candidate strictly above the identity in the canonical element order
/// (on the integers this picks the positive difference).
fn prefer_ratio(model: &GroupModel, cands: &[Element]) -> Vec<Element> {
    let id = model.identity();
    let mut ordered: Vec<Element> = cands.iter().filter(|c| **c > id).cloned().collect();
    ordered.extend(cands.iter().filter(|c| **c <= id).cloned());
    ordered
}

/// Searches for one common ratio `g` such that every listed set is a
/// progression with that ratio, returning per-set witnesses whose middle
/// entry is exactly `g`. On nonabelian models ratio equality holds up to the
/// conjugation shift of the type algebra, resolved constructively; absent if
/// no common ratio exists.
pub fn same_ratio_family(sets: &[GSet]) -> Option<(Element, Vec<ProgressionType>)> {
    let first = sets.first()?;
    let model = first.model().clone();
    // Singletons never constrain the ratio; anchor on the first larger set.
    let anchor = sets.iter().position(|s| s.len() >= 2);
    let anchor = match anchor {
        Some(i) => i,
        None => {
            // All singletons: any ratio serves.
            let g = canonical_nonidentity(&model)?;
            let witnesses = sets
                .iter()
                .map(|s| {
                    ProgressionType::new(s.min().unwrap().clone(), g.clone(), model.identity(), 1)
                })
                .collect();
            return Some((g, witnesses));
        }
    };
    let anchor_ratios: Vec<Element> = detect_progressions(&sets[anchor])
        .into_iter()
        .map(|t| t.g)
        .collect();
    'cand: for g in prefer_ratio(&model, &anchor_ratios) {
        let mut witnesses = Vec::with_capacity(sets.len());
        for s in sets {
            match witness_with_ratio(s, &g) {
                Some(t) => witnesses.push(t),
                None => continue 'cand,
            }
        }
        return Some((g, witnesses));
    }
    None
}

/// A witness for `s` whose middle entry is exactly `g`, if one exists.
/// Abelian models check the chain for `g` directly; on free models any
/// detected successor ratio conjugate to `g` is transported onto `g` via
/// `(a, h, 1) = (a·c, c⁻¹hc, c⁻¹)` with `h = c g c⁻¹`.
pub fn witness_with_ratio(s: &GSet, g: &Element) -> Option<ProgressionType> {
    let model = s.model();
    if s.len() == 1 {
        return Some(ProgressionType::new(
            s.min().unwrap().clone(),
            g.clone(),
            model.identity(),
            1,
        ));
    }
    if model.is_abelian() {
        return chain_witness(model, s, g);
    }
    let g_word = match g {
        Element::Word(w) => w,
        _ => return None,
    };
    for t in detect_progressions(s) {
        let h_word = match &t.g {
            Element::Word(w) => w.clone(),
            _ => unreachable!(),
        };
        // Seek c with g = c⁻¹·h·c; then (a, h, 1) = (a·c, g, c⁻¹).
        if let Some(c) = conjugator(&h_word, g_word) {
            let c_el = Element::Word(c.clone());
            let a = op_unchecked(model, &t.a, &c_el);
            let b = inverse_unchecked(model, &c_el);
            let out = ProgressionType::new(a, g.clone(), b, t.length);
            debug_assert_eq!(realize(model, &out).ok().as_ref(), Some(s));
            return Some(out);
        }
    }
    None
}

/// Checks the chain-link condition on a list of types sharing one ratio:
/// each `a_{i+1}` must equal `b_i⁻¹`. Errors if the ratios are not all
/// identical.
pub fn linked_chain_check(model: &GroupModel, types: &[ProgressionType]) -> Result<bool> {
    if types.len() < 2 {
        return Err(Error::Precondition(
            "chain check needs at least two types".into(),
        ));
    }
    if types.windows(2).any(|w| w[0].g != w[1].g) {
        return Err(Error::MismatchedRatios);
    }
    Ok(types
        .windows(2)
        .all(|w| w[1].a == inverse_unchecked(model, &w[0].b)))
}

/// Membership in the centralizer of `g`. Every element qualifies on an
/// abelian model; on a free model the centralizer of a nonidentity word is
/// the cyclic group generated by its primitive root.
fn in_centralizer(model: &GroupModel, z: &Element, g: &Element) -> bool {
    if model.is_abelian() {
        return true;
    }
    match (z, g) {
        (Element::Word(zw), Element::Word(gw)) => {
            if gw.is_empty() {
                return true;
            }
            let (root, _) = primitive_root(gw);
            power_exponent(zw, &root).is_some()
        }
        _ => false,
    }
}

/// All type witnesses for a multi-element set whose middle entry is exactly
/// `g`. Abelian models admit at most one; free models may admit several
/// through different successor ratios conjugate to `g`.
fn base_witnesses_with_ratio(s: &GSet, g: &Element) -> Vec<ProgressionType> {
    let model = s.model();
    debug_assert!(s.len() >= 2);
    if model.is_abelian() {
        return chain_witness(model, s, g).into_iter().collect();
    }
    let g_word = match g {
        Element::Word(w) => w,
        _ => return Vec::new(),
    };
    let mut out: Vec<ProgressionType> = Vec::new();
    for t in detect_progressions(s) {
        let h_word = match &t.g {
            Element::Word(w) => w.clone(),
            _ => unreachable!("free-model ratios are words"),
        };
        if let Some(c) = conjugator(&h_word, g_word) {
            let c_el = Element::Word(c);
            let a = op_unchecked(model, &t.a, &c_el);
            let b = inverse_unchecked(model, &c_el);
            let cand = ProgressionType::new(a, g.clone(), b, t.length);
            debug_assert_eq!(realize(model, &cand).ok().as_ref(), Some(s));
            if !out.contains(&cand) {
                out.push(cand);
            }
        }
    }
    out
}

/// Witnesses for every listed set that all carry the ratio `g` *and*
/// satisfy the chain-link condition `a_{i+1} = b_i⁻¹`.
///
/// A base witness per set fixes the type up to the residual freedom
/// `(a, g, b) ↦ (a·z, g, z⁻¹·b)` with `z` in the centralizer of `g`
/// (singleton sets split arbitrarily). The links are met by propagating
/// that freedom left to right; the coset test at each multi-element set is
/// independent of earlier admissible choices, so the greedy propagation is
/// complete. Absent if some set is no progression with ratio `g` or a link
/// demands a shift outside the centralizer.
pub fn linked_family_with_ratio(sets: &[GSet], g: &Element) -> Option<Vec<ProgressionType>> {
    if sets.is_empty() {
        return Some(Vec::new());
    }
    let model = sets[0].model().clone();
    if *g == model.identity() && sets.iter().any(|s| s.len() >= 2) {
        return None;
    }
    if sets.iter().any(|s| s.is_empty() || s.model() != &model) {
        return None;
    }

    fn go(
        model: &GroupModel,
        sets: &[GSet],
        g: &Element,
        i: usize,
        want: &Element,
        out: &mut Vec<ProgressionType>,
    ) -> bool {
        if i == sets.len() {
            return true;
        }
        let s = &sets[i];
        if s.len() == 1 {
            let c = s.min().unwrap();
            let beta = op_unchecked(model, &inverse_unchecked(model, want), c);
            out.push(ProgressionType::new(want.clone(), g.clone(), beta.clone(), 1));
            let next = inverse_unchecked(model, &beta);
            if go(model, sets, g, i + 1, &next, out) {
                return true;
            }
            out.pop();
            return false;
        }
        for base in base_witnesses_with_ratio(s, g) {
            let z = op_unchecked(model, &inverse_unchecked(model, &base.a), want);
            if !in_centralizer(model, &z, g) {
                continue;
            }
            let beta = op_unchecked(model, &inverse_unchecked(model, &z), &base.b);
            out.push(ProgressionType::new(
                want.clone(),
                g.clone(),
                beta.clone(),
                base.length,
            ));
            let next = inverse_unchecked(model, &beta);
            if go(model, sets, g, i + 1, &next, out) {
                return true;
            }
            out.pop();
        }
        false
    }

    let Some(f) = sets.iter().position(|s| s.len() >= 2) else {
        // All singletons: each link determines the next split outright.
        let mut out: Vec<ProgressionType> = Vec::with_capacity(sets.len());
        let mut alpha = sets[0].min().unwrap().clone();
        for s in sets {
            let c = s.min().unwrap();
            let beta = op_unchecked(&model, &inverse_unchecked(&model, &alpha), c);
            out.push(ProgressionType::new(alpha.clone(), g.clone(), beta.clone(), 1));
            alpha = inverse_unchecked(&model, &beta);
        }
        return Some(out);
    };
    for base in base_witnesses_with_ratio(&sets[f], g) {
        // Back-fill the singleton prefix right to left from α_f.
        let mut prefix: Vec<ProgressionType> = Vec::with_capacity(f);
        let mut alpha_next = base.a.clone();
        for i in (0..f).rev() {
            let c = sets[i].min().unwrap();
            let beta = inverse_unchecked(&model, &alpha_next);
            let alpha = op_unchecked(&model, c, &alpha_next);
            prefix.push(ProgressionType::new(alpha.clone(), g.clone(), beta, 1));
            alpha_next = alpha;
        }
        prefix.reverse();
        let mut out = prefix;
        out.push(base.clone());
        let next = inverse_unchecked(&model, &base.b);
        if go(&model, sets, g, f + 1, &next, &mut out) {
            debug_assert!(
                out.len() < 2 || linked_chain_check(&model, &out).unwrap_or(false),
                "propagation must produce a linked chain"
            );
            return Some(out);
        }
    }
    None
}

/// Searches for one ratio `g ≠ 1` admitting a fully linked family of
/// witnesses over the listed sets (see [`linked_family_with_ratio`]).
/// Candidates come from the first multi-element set; on nonabelian models
/// this is exhaustive because a linked family conjugates wholesale onto any
/// conjugate of its ratio.
pub fn linked_ratio_family(sets: &[GSet]) -> Option<(Element, Vec<ProgressionType>)> {
    let first = sets.first()?;
    let model = first.model().clone();
    let Some(anchor) = sets.iter().position(|s| s.len() >= 2) else {
        let g = canonical_nonidentity(&model)?;
        let fam = linked_family_with_ratio(sets, &g)?;
        return Some((g, fam));
    };
    let anchor_ratios: Vec<Element> = detect_progressions(&sets[anchor])
        .into_iter()
        .map(|t| t.g)
        .collect();
    for g in prefer_ratio(&model, &anchor_ratios) {
        if let Some(fam) = linked_family_with_ratio(sets, &g) {
            return Some((g, fam));
        }
    }
    None
}

/// For two progressions with the same difference `g` on an abelian model
/// that share at least one element, produces a witness that the union is a
/// progression with difference `g`; absent when a hypothesis fails.
pub fn union_progression(a: &GSet, b: &GSet, g: &Element) -> Option<ProgressionType> {
    let model = a.model();
    if !model.is_abelian() || b.model() != model {
        return None;
    }
    if a.len() >= 2 && chain_witness(model, a, g).is_none() {
        return None;
    }
    if b.len() >= 2 && chain_witness(model, b, g).is_none() {
        return None;
    }
    if a.intersection(b).ok()?.is_empty() {
        return None;
    }
    let u = a.union(b).ok()?;
    if u.len() == 1 {
        return Some(ProgressionType::new(
            u.min().unwrap().clone(),
            g.clone(),
            model.identity(),
            1,
        ));
    }
    chain_witness(model, &u, g)
}

/// Positions of a sub-progression inside a realized whole: returns `(p, r)`
/// with `p ≥ 1`, `r ≥ 0` such that `a` consists of the elements of `whole`
/// at indices `r, r+p, …, r+(|a|−1)·p`; absent if `a` does not sit inside
/// the whole at evenly spaced indices.
pub fn subprogression_form(a: &GSet, whole: &ProgressionType) -> Option<(usize, usize)> {
    let model = a.model();
    let realized = realize(model, whole).ok()?;
    if !a.is_subset_of(&realized) || a.is_empty() {
        return None;
    }
    // Recover each element's unique index along the whole.
    let mut index: HashMap<&Element, usize> = HashMap::with_capacity(realized.len());
    let mut prefix = whole.a.clone();
    for j in 0..whole.length {
        if j > 0 {
            prefix = op_unchecked(model, &prefix, &whole.g);
        }
        let e = op_unchecked(model, &prefix, &whole.b);
        index.insert(realized.as_slice().binary_search(&e).ok().map(|i| &realized.as_slice()[i])?, j);
    }
    let mut idxs: Vec<usize> = a.iter().map(|e| index[e]).collect();
    idxs.sort_unstable();
    let r = idxs[0];
    if idxs.len() == 1 {
        return Some((1, r));
    }
    let p = idxs[1] - idxs[0];
    if p == 0 {
        return None;
    }
    let even = idxs.windows(2).all(|w| w[1] - w[0] == p);
    even.then_some((p, r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_set(vals: &[i64]) -> GSet {
        GSet::new(GroupModel::Integers, vals.iter().map(|&v| Element::Int(v))).unwrap()
    }

    fn word(s: &[(usize, i64)]) -> Element {
        Element::Word(s.to_vec())
    }

    #[test]
    fn realize_examples() {
        let z = GroupModel::Integers;
        let t = ProgressionType::new(Element::Int(0), Element::Int(2), Element::Int(1), 3);
        assert_eq!(realize(&z, &t).unwrap(), int_set(&[1, 3, 5]));

        let f2 = GroupModel::Free { rank: 2 };
        let t = ProgressionType::new(word(&[(0, 1)]), word(&[(1, 1)]), word(&[(1, 1)]), 2);
        let s = realize(&f2, &t).unwrap();
        assert_eq!(
            s.as_slice(),
            &[word(&[(0, 1), (1, 1)]), word(&[(0, 1), (1, 2)])]
        );

        let c5 = GroupModel::Cyclic { n: 5 };
        let t = ProgressionType::new(Element::Residue(0), Element::Residue(2), Element::Residue(0), 3);
        let s = realize(&c5, &t).unwrap();
        assert_eq!(
            s.as_slice(),
            &[Element::Residue(0), Element::Residue(2), Element::Residue(4)]
        );
    }

    #[test]
    fn realize_collision_is_an_error() {
        let c4 = GroupModel::Cyclic { n: 4 };
        let t = ProgressionType::new(Element::Residue(0), Element::Residue(2), Element::Residue(0), 3);
        assert!(matches!(
            realize(&c4, &t),
            Err(Error::ProgressionCollision(_))
        ));
        let z = GroupModel::Integers;
        let t = ProgressionType::new(Element::Int(0), Element::Int(0), Element::Int(0), 2);
        assert!(realize(&z, &t).is_err());
    }

    #[test]
    fn detect_on_integer_sets() {
        let hits = detect_progressions(&int_set(&[1, 3, 5]));
        let ratios: Vec<&Element> = hits.iter().map(|t| &t.g).collect();
        assert_eq!(ratios, vec![&Element::Int(-2), &Element::Int(2)]);
        for t in &hits {
            assert_eq!(
                realize(&GroupModel::Integers, t).unwrap(),
                int_set(&[1, 3, 5])
            );
        }

        assert!(detect_progressions(&int_set(&[0, 1, 3])).is_empty());
        assert_eq!(detect_progressions(&int_set(&[4])).len(), 1);
        assert_eq!(detect_progressions(&int_set(&[2, 9])).len(), 2);
    }

    #[test]
    fn detect_on_free_sets() {
        let f2 = GroupModel::Free { rank: 2 };
        let s = GSet::new(
            f2.clone(),
            [
                word(&[(0, 1)]),
                word(&[(0, 1), (1, 1)]),
                word(&[(0, 1), (1, 2)]),
            ],
        )
        .unwrap();
        let hits = detect_progressions(&s);
        assert_eq!(hits.len(), 2, "forward and reversed ratios");
        assert!(hits.iter().any(|t| t.g == word(&[(1, 1)]) && t.a == word(&[(0, 1)])));
        for t in &hits {
            assert_eq!(realize(&f2, t).unwrap(), s);
        }
    }

    #[test]
    fn detect_full_cycle_on_cyclic_model() {
        let c5 = GroupModel::Cyclic { n: 5 };
        let s = GSet::new(c5.clone(), (0..5).map(Element::Residue)).unwrap();
        let hits = detect_progressions(&s);
        // Every nonzero residue steps the whole group around one cycle.
        assert_eq!(hits.len(), 4);
        for t in &hits {
            assert_eq!(realize(&c5, t).unwrap(), s);
            assert_eq!(t.a, Element::Residue(0), "cycle witnesses start minimal");
        }
    }

    #[test]
    fn two_disjoint_cycles_are_rejected() {
        // {0,3} and {1,4} are separate +3 cycles in Z_6; their union is not
        // a single progression with difference 3.
        let c6 = GroupModel::Cyclic { n: 6 };
        let s = GSet::new(c6, [0u64, 1, 3, 4].map(Element::Residue)).unwrap();
        assert!(chain_witness(s.model(), &s, &Element::Residue(3)).is_none());
    }

    #[test]
    fn same_ratio_family_examples() {
        // Two unit-step runs share d = 1.
        let sets = [int_set(&[0, 1, 2, 3]), int_set(&[6, 7, 8, 9])];
        let (g, wits) = same_ratio_family(&sets).unwrap();
        assert_eq!(g, Element::Int(1));
        assert_eq!(wits.len(), 2);
        for (w, s) in wits.iter().zip(&sets) {
            assert_eq!(&realize(&GroupModel::Integers, w).unwrap(), s);
        }

        // Incompatible steps.
        assert!(same_ratio_family(&[int_set(&[0, 2, 4]), int_set(&[0, 3, 6])]).is_none());

        // Free model: {x, xy} and {y⁻¹, 1} share a ratio.
        let f2 = GroupModel::Free { rank: 2 };
        let s1 = GSet::new(f2.clone(), [word(&[(0, 1)]), word(&[(0, 1), (1, 1)])]).unwrap();
        let s2 = GSet::new(f2.clone(), [word(&[(1, -1)]), word(&[])]).unwrap();
        let (g, wits) = same_ratio_family(&[s1.clone(), s2.clone()]).unwrap();
        assert!(g == word(&[(1, 1)]) || g == word(&[(1, -1)]));
        assert_eq!(realize(&f2, &wits[0]).unwrap(), s1);
        assert_eq!(realize(&f2, &wits[1]).unwrap(), s2);
        assert_eq!(wits[0].g, g);
        assert_eq!(wits[1].g, g);
    }

    #[test]
    fn same_ratio_transport_across_conjugates() {
        // {x, xy} and its conjugate ratio partner {z⁻¹x z ...}: build a set
        // whose successor ratio is y conjugated, and ask for middle ratio y.
        let f2 = GroupModel::Free { rank: 2 };
        // B = {1, x y x⁻¹}: successor ratio x y x⁻¹ ~ y.
        let s1 = GSet::new(f2.clone(), [word(&[(0, 1)]), word(&[(0, 1), (1, 1)])]).unwrap();
        let s2 = GSet::new(f2.clone(), [word(&[]), word(&[(0, 1), (1, 1), (0, -1)])]).unwrap();
        let (g, wits) = same_ratio_family(&[s1, s2.clone()]).unwrap();
        let transported = wits[1].clone();
        assert_eq!(transported.g, g);
        assert_eq!(realize(&f2, &transported).unwrap(), s2);
    }

    #[test]
    fn linked_chain_examples() {
        let z = GroupModel::Integers;
        let t1 = ProgressionType::new(Element::Int(0), Element::Int(1), Element::Int(0), 2);
        let t2 = ProgressionType::new(Element::Int(0), Element::Int(1), Element::Int(0), 3);
        assert!(linked_chain_check(&z, &[t1.clone(), t2.clone()]).unwrap());

        let t3 = ProgressionType::new(Element::Int(0), Element::Int(1), Element::Int(5), 2);
        assert!(!linked_chain_check(&z, &[t3, t1.clone()]).unwrap());

        let f2 = GroupModel::Free { rank: 2 };
        let u1 = ProgressionType::new(word(&[(0, 1)]), word(&[(1, 1)]), word(&[(0, 2)]), 2);
        let u2 = ProgressionType::new(word(&[(0, -2)]), word(&[(1, 1)]), word(&[(1, 4)]), 2);
        assert!(linked_chain_check(&f2, &[u1, u2]).unwrap());

        let bad = ProgressionType::new(Element::Int(0), Element::Int(2), Element::Int(0), 2);
        assert!(matches!(
            linked_chain_check(&z, &[t1, bad]),
            Err(Error::MismatchedRatios)
        ));
    }

    #[test]
    fn union_progression_examples() {
        let d = Element::Int(1);
        let u = union_progression(&int_set(&[0, 1, 2]), &int_set(&[2, 3]), &d).unwrap();
        assert_eq!(realize(&GroupModel::Integers, &u).unwrap(), int_set(&[0, 1, 2, 3]));

        let d2 = Element::Int(2);
        let u = union_progression(&int_set(&[0, 2, 4]), &int_set(&[4, 6]), &d2).unwrap();
        assert_eq!(
            realize(&GroupModel::Integers, &u).unwrap(),
            int_set(&[0, 2, 4, 6])
        );

        assert!(union_progression(&int_set(&[0, 1]), &int_set(&[5, 6]), &d).is_none());
    }

    #[test]
    fn subprogression_examples() {
        let whole = ProgressionType::new(Element::Int(0), Element::Int(1), Element::Int(0), 10);
        assert_eq!(
            subprogression_form(&int_set(&[1, 4, 7]), &whole),
            Some((3, 1))
        );
        let all = realize(&GroupModel::Integers, &whole).unwrap();
        assert_eq!(subprogression_form(&all, &whole), Some((1, 0)));
        let whole6 = ProgressionType::new(Element::Int(0), Element::Int(1), Element::Int(0), 6);
        assert_eq!(subprogression_form(&int_set(&[0, 1, 3]), &whole6), None);
    }

    #[test]
    fn representation_identities_smoke() {
        // (a,g,b) = (a+b, g, 0) = (0, g, a+b) on the integers, and reversal.
        let z = GroupModel::Integers;
        let (a, g, b, len) = (Element::Int(4), Element::Int(3), Element::Int(-1), 5);
        let base = realize(&z, &ProgressionType::new(a.clone(), g.clone(), b.clone(), len)).unwrap();
        let shifted = realize(&z, &ProgressionType::new(Element::Int(3), g.clone(), Element::Int(0), len)).unwrap();
        assert_eq!(base, shifted);
        // (a, −g, b) = (a, g, −(len−1)·g + b)
        let rev = realize(
            &z,
            &ProgressionType::new(a.clone(), Element::Int(-3), b.clone(), len),
        )
        .unwrap();
        let rev2 = realize(
            &z,
            &ProgressionType::new(a, g, Element::Int(-(len as i64 - 1) * 3 - 1), len),
        )
        .unwrap();
        assert_eq!(rev, rev2);
    }

    fn assert_linked_and_realizing(model: &GroupModel, sets: &[GSet], fam: &[ProgressionType]) {
        assert_eq!(fam.len(), sets.len());
        for (t, s) in fam.iter().zip(sets) {
            assert_eq!(&realize(model, t).unwrap(), s);
        }
        if fam.len() >= 2 {
            assert!(linked_chain_check(model, fam).unwrap());
        }
    }

    #[test]
    fn linked_family_on_integers() {
        let z = GroupModel::Integers;
        let sets = [int_set(&[0, 1, 2]), int_set(&[4, 5]), int_set(&[9, 10, 11])];
        let (g, fam) = linked_ratio_family(&sets).unwrap();
        assert_eq!(g, Element::Int(1));
        assert_linked_and_realizing(&z, &sets, &fam);

        // A singleton in the middle takes whatever split the links demand.
        let sets = [int_set(&[0, 2]), int_set(&[7]), int_set(&[2, 4])];
        let (g, fam) = linked_ratio_family(&sets).unwrap();
        assert_eq!(g, Element::Int(2));
        assert_linked_and_realizing(&z, &sets, &fam);

        // Mixed differences admit no common-ratio family at all.
        let sets = [int_set(&[0, 1]), int_set(&[0, 3])];
        assert!(linked_ratio_family(&sets).is_none());
    }

    #[test]
    fn linked_family_on_free_model() {
        let f2 = GroupModel::Free { rank: 2 };
        // The equality pair {x, xy}·{y, y²}. The canonical ratio choice is
        // the reversal y⁻¹ (it precedes y in the element order), giving the
        // linked types (xy, y⁻¹, 1) and (1, y⁻¹, y²) — the reversal of the
        // forward family (x, y, 1), (1, y, y).
        let a = GSet::new(f2.clone(), [word(&[(0, 1)]), word(&[(0, 1), (1, 1)])]).unwrap();
        let b = GSet::new(f2.clone(), [word(&[(1, 1)]), word(&[(1, 2)])]).unwrap();
        let sets = [a, b];
        let (g, fam) = linked_ratio_family(&sets).unwrap();
        assert_eq!(g, word(&[(1, -1)]));
        assert_linked_and_realizing(&f2, &sets, &fam);
        assert_eq!(fam[0].a, word(&[(0, 1), (1, 1)]));
        assert_eq!(fam[0].b, word(&[]));
        assert_eq!(fam[1].a, word(&[]));
        assert_eq!(fam[1].b, word(&[(1, 2)]));

        // The forward ratio works too when requested explicitly.
        let fam = linked_family_with_ratio(&sets, &word(&[(1, 1)])).unwrap();
        assert_linked_and_realizing(&f2, &sets, &fam);
        assert_eq!(fam[0].a, word(&[(0, 1)]));
        assert_eq!(fam[1].b, word(&[(1, 1)]));

        // {x, xy} then {y², y³}: the link demands a shift by a power of y,
        // inside the centralizer, so the chain closes.
        let a = GSet::new(f2.clone(), [word(&[(0, 1)]), word(&[(0, 1), (1, 1)])]).unwrap();
        let c = GSet::new(f2.clone(), [word(&[(1, 2)]), word(&[(1, 3)])]).unwrap();
        let sets = [a, c];
        let (_, fam) = linked_ratio_family(&sets).unwrap();
        assert_linked_and_realizing(&f2, &sets, &fam);
    }

    #[test]
    fn linked_family_all_singletons() {
        let z = GroupModel::Integers;
        let sets = [int_set(&[3]), int_set(&[8]), int_set(&[-1])];
        let (_, fam) = linked_ratio_family(&sets).unwrap();
        assert_linked_and_realizing(&z, &sets, &fam);
    }

    #[test]
    fn linked_family_centralizer_obstruction() {
        let f2 = GroupModel::Free { rank: 2 };
        // Both sets are progressions with ratio y ({x, xy} and {x², x²y}),
        // but linking α₂ = β₁⁻¹ would need a shift by x²·y^k, which never
        // commutes with y: same-ratio family exists, linked family does not.
        let a = GSet::new(f2.clone(), [word(&[(0, 1)]), word(&[(0, 1), (1, 1)])]).unwrap();
        let b = GSet::new(
            f2.clone(),
            [word(&[(0, 2)]), word(&[(0, 2), (1, 1)])],
        )
        .unwrap();
        assert!(same_ratio_family(&[a.clone(), b.clone()]).is_some());
        assert!(linked_ratio_family(&[a, b]).is_none());
    }
}
