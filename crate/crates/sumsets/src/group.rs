//! Group models, canonical elements, and core group machinery.
//!
//! Four computable models are provided: the integers under addition, cyclic
//! groups `Z_n`, finite abelian products `Z_{m1} ⊕ … ⊕ Z_{mk}`, and free
//! groups `F_k` on `k` generators. Free groups stand in for general
//! torsion-free nonabelian groups: every identity the library tests
//! (cancellation, type-`(a,g,b)` progression algebra) is decidable on reduced
//! words.
//!
//! Elements carry a canonical payload per model and a fixed total order
//! (integers by value; residue vectors lexicographic; reduced words by total
//! letter length, then lexicographically on syllables), so every set and
//! every serialization is bit-stable.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One syllable of a reduced word: (generator index, nonzero exponent).
pub type Syllable = (usize, i64);

/// Descriptor of the ambient group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GroupModel {
    /// The integers under addition (torsion-free abelian).
    Integers,
    /// The cyclic group of order `n ≥ 1` under addition mod `n`.
    Cyclic { n: u64 },
    /// A direct product of cyclic groups; every modulus is `≥ 2`.
    FiniteAbelian { moduli: Vec<u64> },
    /// The free group on `rank ≥ 1` generators (torsion-free).
    Free { rank: usize },
}

/// Order of the smallest nontrivial subgroup of a model: the smallest prime
/// dividing `|G|` for finite groups with `|G| > 1`, infinite otherwise
/// (torsion-free models and the trivial group have no nontrivial subgroup).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubgroupOrder {
    Finite(u64),
    Infinite,
}

impl SubgroupOrder {
    /// `min(self, v)` where the infinite order never binds.
    pub fn cap(self, v: i64) -> i64 {
        match self {
            SubgroupOrder::Finite(p) => v.min(p as i64),
            SubgroupOrder::Infinite => v,
        }
    }

    /// The finite value, if any.
    pub fn finite(self) -> Option<u64> {
        match self {
            SubgroupOrder::Finite(p) => Some(p),
            SubgroupOrder::Infinite => None,
        }
    }
}

impl fmt::Display for SubgroupOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubgroupOrder::Finite(p) => write!(f, "{p}"),
            SubgroupOrder::Infinite => write!(f, "inf"),
        }
    }
}

/// A canonical group element. The payload variant must match the model the
/// element is used with; set membership is payload equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Element {
    /// Integer (model [`GroupModel::Integers`]).
    Int(i64),
    /// Residue in `[0, n)` (model [`GroupModel::Cyclic`]).
    Residue(u64),
    /// Componentwise-reduced residue vector (model [`GroupModel::FiniteAbelian`]).
    ResidueVec(Vec<u64>),
    /// Reduced word: no zero exponents, adjacent generator indices distinct
    /// (model [`GroupModel::Free`]). The empty word is the identity.
    Word(Vec<Syllable>),
}

fn variant_rank(e: &Element) -> u8 {
    match e {
        Element::Int(_) => 0,
        Element::Residue(_) => 1,
        Element::ResidueVec(_) => 2,
        Element::Word(_) => 3,
    }
}

/// Total letter length of a reduced word (sum of |exponent|).
pub fn word_len(w: &[Syllable]) -> u64 {
    w.iter().map(|&(_, e)| e.unsigned_abs()).sum()
}

impl Ord for Element {
    fn cmp(&self, other: &Self) -> Ordering {
        use Element::*;
        match (self, other) {
            (Int(a), Int(b)) => a.cmp(b),
            (Residue(a), Residue(b)) => a.cmp(b),
            (ResidueVec(a), ResidueVec(b)) => a.cmp(b),
            (Word(a), Word(b)) => word_len(a).cmp(&word_len(b)).then_with(|| a.cmp(b)),
            _ => variant_rank(self).cmp(&variant_rank(other)),
        }
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl GroupModel {
    /// Checks the model's own invariants.
    pub fn validate(&self) -> Result<()> {
        match self {
            GroupModel::Integers => Ok(()),
            GroupModel::Cyclic { n } => {
                if *n >= 1 {
                    Ok(())
                } else {
                    Err(Error::InvalidModel("cyclic modulus must be >= 1".into()))
                }
            }
            GroupModel::FiniteAbelian { moduli } => {
                if moduli.is_empty() {
                    return Err(Error::InvalidModel(
                        "finite-abelian model needs at least one modulus".into(),
                    ));
                }
                if moduli.iter().any(|&m| m < 2) {
                    return Err(Error::InvalidModel(
                        "finite-abelian moduli must each be >= 2".into(),
                    ));
                }
                Ok(())
            }
            GroupModel::Free { rank } => {
                if *rank >= 1 {
                    Ok(())
                } else {
                    Err(Error::InvalidModel("free rank must be >= 1".into()))
                }
            }
        }
    }

    /// Whether the model has finitely many elements.
    pub fn is_finite(&self) -> bool {
        matches!(
            self,
            GroupModel::Cyclic { .. } | GroupModel::FiniteAbelian { .. }
        )
    }

    /// Whether the model is one of the abelian models. Free groups are
    /// routed through the nonabelian (ordered-product) code paths regardless
    /// of rank.
    pub fn is_abelian(&self) -> bool {
        !matches!(self, GroupModel::Free { .. })
    }

    /// Whether the model is torsion-free (and infinite).
    pub fn is_torsion_free(&self) -> bool {
        matches!(self, GroupModel::Integers | GroupModel::Free { .. })
    }

    /// Number of elements for finite models.
    pub fn order(&self) -> Option<u64> {
        match self {
            GroupModel::Cyclic { n } => Some(*n),
            GroupModel::FiniteAbelian { moduli } => Some(moduli.iter().product()),
            _ => None,
        }
    }

    /// The identity element of the model.
    pub fn identity(&self) -> Element {
        match self {
            GroupModel::Integers => Element::Int(0),
            GroupModel::Cyclic { .. } => Element::Residue(0),
            GroupModel::FiniteAbelian { moduli } => Element::ResidueVec(vec![0; moduli.len()]),
            GroupModel::Free { .. } => Element::Word(Vec::new()),
        }
    }

    /// Validates that `e` is a canonical element of this model.
    pub fn check_element(&self, e: &Element) -> Result<()> {
        match (self, e) {
            (GroupModel::Integers, Element::Int(_)) => Ok(()),
            (GroupModel::Cyclic { n }, Element::Residue(r)) => {
                if r < n {
                    Ok(())
                } else {
                    Err(Error::ModelMismatch(format!(
                        "residue {r} out of range for cyclic modulus {n}"
                    )))
                }
            }
            (GroupModel::FiniteAbelian { moduli }, Element::ResidueVec(v)) => {
                if v.len() != moduli.len() {
                    return Err(Error::ModelMismatch(format!(
                        "residue vector length {} does not match {} moduli",
                        v.len(),
                        moduli.len()
                    )));
                }
                for (r, m) in v.iter().zip(moduli) {
                    if r >= m {
                        return Err(Error::ModelMismatch(format!(
                            "residue {r} out of range for modulus {m}"
                        )));
                    }
                }
                Ok(())
            }
            (GroupModel::Free { rank }, Element::Word(w)) => {
                validate_word(*rank, w)
            }
            _ => Err(Error::ModelMismatch(format!(
                "element payload {e:?} does not fit model {self:?}"
            ))),
        }
    }
}

/// Checks reduced-word invariants: generator indices in range, exponents
/// nonzero, adjacent generator indices distinct.
pub fn validate_word(rank: usize, w: &[Syllable]) -> Result<()> {
    for (i, &(g, e)) in w.iter().enumerate() {
        if g >= rank {
            return Err(Error::ModelMismatch(format!(
                "generator index {g} out of range for rank {rank}"
            )));
        }
        if e == 0 {
            return Err(Error::ModelMismatch("zero exponent in word".into()));
        }
        if i > 0 && w[i - 1].0 == g {
            return Err(Error::ModelMismatch(
                "adjacent syllables share a generator".into(),
            ));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Reduced-word arithmetic
// ---------------------------------------------------------------------------

/// Appends one syllable to a reduced word, merging and cancelling at the seam.
pub fn push_syllable(out: &mut Vec<Syllable>, g: usize, e: i64) {
    if e == 0 {
        return;
    }
    if let Some(&mut (lg, ref mut le)) = out.last_mut() {
        if lg == g {
            *le += e;
            if *le == 0 {
                out.pop();
            }
            return;
        }
    }
    out.push((g, e));
}

/// Concatenation of two reduced words, reduced.
pub fn word_concat(a: &[Syllable], b: &[Syllable]) -> Vec<Syllable> {
    let mut out = a.to_vec();
    for &(g, e) in b {
        push_syllable(&mut out, g, e);
    }
    out
}

/// Inverse of a reduced word.
pub fn word_inverse(w: &[Syllable]) -> Vec<Syllable> {
    w.iter().rev().map(|&(g, e)| (g, -e)).collect()
}

/// One letter of a word: (generator, sign) with sign ±1.
pub type Letter = (usize, i8);

/// Expands a reduced word into single letters.
pub fn word_letters(w: &[Syllable]) -> Vec<Letter> {
    let mut out = Vec::with_capacity(word_len(w) as usize);
    for &(g, e) in w {
        let s: i8 = if e > 0 { 1 } else { -1 };
        for _ in 0..e.unsigned_abs() {
            out.push((g, s));
        }
    }
    out
}

/// Rebuilds a reduced word from letters (performs cancellation).
pub fn word_from_letters(ls: &[Letter]) -> Vec<Syllable> {
    let mut out = Vec::new();
    for &(g, s) in ls {
        push_syllable(&mut out, g, s as i64);
    }
    out
}

fn inv_letter(l: Letter) -> Letter {
    (l.0, -l.1)
}

/// Splits `w = p · core · p⁻¹` with `core` cyclically reduced.
/// Returns `(p, core)` as letter vectors.
pub fn cyclic_reduce(w: &[Syllable]) -> (Vec<Letter>, Vec<Letter>) {
    let ls = word_letters(w);
    let mut i = 0;
    let mut j = ls.len();
    while i + 1 < j && ls[i] == inv_letter(ls[j - 1]) {
        i += 1;
        j -= 1;
    }
    (ls[..i].to_vec(), ls[i..j].to_vec())
}

/// `w` raised to the integer power `e`, reduced. Uses the cyclic
/// decomposition `w = p · c · p⁻¹` so repeated powers never re-cancel.
pub fn word_pow(w: &[Syllable], e: i64) -> Vec<Syllable> {
    if e == 0 || w.is_empty() {
        return Vec::new();
    }
    let (p, core) = cyclic_reduce(w);
    let mut body: Vec<Letter> = Vec::with_capacity(core.len() * e.unsigned_abs() as usize);
    for _ in 0..e.unsigned_abs() {
        body.extend_from_slice(&core);
    }
    if e < 0 {
        body.reverse();
        for l in &mut body {
            *l = inv_letter(*l);
        }
    }
    let mut ls: Vec<Letter> = Vec::with_capacity(p.len() * 2 + body.len());
    ls.extend_from_slice(&p);
    ls.extend_from_slice(&body);
    ls.extend(p.iter().rev().map(|&l| inv_letter(l)));
    word_from_letters(&ls)
}

/// Primitive root of a nonempty reduced word: the unique `(u, k)` with
/// `w = u^k`, `k ≥ 1` maximal.
pub fn primitive_root(w: &[Syllable]) -> (Vec<Syllable>, u64) {
    if w.is_empty() {
        return (Vec::new(), 1);
    }
    let (p, core) = cyclic_reduce(w);
    let n = core.len();
    for d in 1..=n {
        if n % d != 0 {
            continue;
        }
        let k = n / d;
        let prefix = &core[..d];
        let periodic = (0..n).all(|i| core[i] == prefix[i % d]);
        if periodic {
            let mut ls: Vec<Letter> = Vec::with_capacity(p.len() * 2 + d);
            ls.extend_from_slice(&p);
            ls.extend_from_slice(prefix);
            ls.extend(p.iter().rev().map(|&l| inv_letter(l)));
            return (word_from_letters(&ls), k as u64);
        }
    }
    unreachable!("every word is a power of itself")
}

/// If `q = w^e` for some integer `e`, returns `e` (for nonempty `w`; the
/// smallest-magnitude such `e`, which is unique when `w ≠ 1`).
pub fn power_exponent(q: &[Syllable], w: &[Syllable]) -> Option<i64> {
    if q.is_empty() {
        return Some(0);
    }
    if w.is_empty() {
        return None;
    }
    let (p, core) = cyclic_reduce(w);
    // v = p⁻¹ · q · p must be a letterwise power of `core`.
    let p_word = word_from_letters(&p);
    let v = word_concat(&word_concat(&word_inverse(&p_word), q), &p_word);
    let vl = word_letters(&v);
    if vl.is_empty() {
        return Some(0);
    }
    if vl.len() % core.len() != 0 {
        return None;
    }
    let k = (vl.len() / core.len()) as i64;
    if (0..vl.len()).all(|i| vl[i] == core[i % core.len()]) {
        return Some(k);
    }
    let inv_core: Vec<Letter> = core.iter().rev().map(|&l| inv_letter(l)).collect();
    if (0..vl.len()).all(|i| vl[i] == inv_core[i % inv_core.len()]) {
        return Some(-k);
    }
    None
}

/// If `w2 = c⁻¹ · w1 · c` for some word `c`, returns such a `c`
/// (constructively, via cyclic reduction and rotation matching).
pub fn conjugator(w1: &[Syllable], w2: &[Syllable]) -> Option<Vec<Syllable>> {
    let (p1, c1) = cyclic_reduce(w1);
    let (p2, c2) = cyclic_reduce(w2);
    if c1.len() != c2.len() {
        return None;
    }
    if c1.is_empty() {
        // Both words are the identity.
        return Some(Vec::new());
    }
    let n = c1.len();
    for r in 0..n {
        if (0..n).all(|i| c1[(r + i) % n] == c2[i]) {
            // rotation by r: c2 = u⁻¹ c1 u with u the first r letters of c1,
            // so c = p1 · u · p2⁻¹ satisfies w2 = c⁻¹ w1 c.
            let mut ls: Vec<Letter> = Vec::with_capacity(p1.len() + r + p2.len());
            ls.extend_from_slice(&p1);
            ls.extend_from_slice(&c1[..r]);
            ls.extend(p2.iter().rev().map(|&l| inv_letter(l)));
            return Some(word_from_letters(&ls));
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Group operations
// ---------------------------------------------------------------------------

/// The group operation. Both elements must be canonical in `model`.
pub fn op(model: &GroupModel, x: &Element, y: &Element) -> Result<Element> {
    model.check_element(x)?;
    model.check_element(y)?;
    Ok(op_unchecked(model, x, y))
}

/// The group operation without payload validation (inputs must be canonical).
pub(crate) fn op_unchecked(model: &GroupModel, x: &Element, y: &Element) -> Element {
    match (model, x, y) {
        (GroupModel::Integers, Element::Int(a), Element::Int(b)) => Element::Int(a + b),
        (GroupModel::Cyclic { n }, Element::Residue(a), Element::Residue(b)) => {
            Element::Residue((a + b) % n)
        }
        (GroupModel::FiniteAbelian { moduli }, Element::ResidueVec(a), Element::ResidueVec(b)) => {
            Element::ResidueVec(
                a.iter()
                    .zip(b)
                    .zip(moduli)
                    .map(|((x, y), m)| (x + y) % m)
                    .collect(),
            )
        }
        (GroupModel::Free { .. }, Element::Word(a), Element::Word(b)) => {
            Element::Word(word_concat(a, b))
        }
        _ => unreachable!("payload mismatch should have been validated"),
    }
}

/// The group inverse.
pub fn inverse(model: &GroupModel, x: &Element) -> Result<Element> {
    model.check_element(x)?;
    Ok(inverse_unchecked(model, x))
}

pub(crate) fn inverse_unchecked(model: &GroupModel, x: &Element) -> Element {
    match (model, x) {
        (GroupModel::Integers, Element::Int(a)) => Element::Int(-a),
        (GroupModel::Cyclic { n }, Element::Residue(a)) => {
            Element::Residue(if *a == 0 { 0 } else { n - a })
        }
        (GroupModel::FiniteAbelian { moduli }, Element::ResidueVec(v)) => Element::ResidueVec(
            v.iter()
                .zip(moduli)
                .map(|(r, m)| if *r == 0 { 0 } else { m - r })
                .collect(),
        ),
        (GroupModel::Free { .. }, Element::Word(w)) => Element::Word(word_inverse(w)),
        _ => unreachable!("payload mismatch should have been validated"),
    }
}

/// `x` composed with itself `e` times (`e` may be negative or zero).
pub fn pow(model: &GroupModel, x: &Element, e: i64) -> Result<Element> {
    model.check_element(x)?;
    Ok(pow_unchecked(model, x, e))
}

pub(crate) fn pow_unchecked(model: &GroupModel, x: &Element, e: i64) -> Element {
    match (model, x) {
        (GroupModel::Integers, Element::Int(a)) => Element::Int(a * e),
        (GroupModel::Cyclic { n }, Element::Residue(a)) => {
            let v = (*a as i128 * e as i128).rem_euclid(*n as i128);
            Element::Residue(v as u64)
        }
        (GroupModel::FiniteAbelian { moduli }, Element::ResidueVec(v)) => Element::ResidueVec(
            v.iter()
                .zip(moduli)
                .map(|(r, m)| (*r as i128 * e as i128).rem_euclid(*m as i128) as u64)
                .collect(),
        ),
        (GroupModel::Free { .. }, Element::Word(w)) => Element::Word(word_pow(w, e)),
        _ => unreachable!("payload mismatch should have been validated"),
    }
}

/// All elements of a finite model in canonical order.
pub fn enumerate(model: &GroupModel) -> Result<GSet> {
    match model {
        GroupModel::Cyclic { n } => {
            let elems = (0..*n).map(Element::Residue).collect();
            Ok(GSet::from_sorted_unchecked(model.clone(), elems))
        }
        GroupModel::FiniteAbelian { moduli } => {
            let mut elems = vec![vec![]];
            for &m in moduli {
                let mut next = Vec::with_capacity(elems.len() * m as usize);
                for v in &elems {
                    for r in 0..m {
                        let mut w = v.clone();
                        w.push(r);
                        next.push(w);
                    }
                }
                elems = next;
            }
            Ok(GSet::from_sorted_unchecked(
                model.clone(),
                elems.into_iter().map(Element::ResidueVec).collect(),
            ))
        }
        _ => Err(Error::InfiniteModel("enumerate")),
    }
}

fn smallest_prime_factor(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return d;
        }
        d += 2;
    }
    n
}

/// Whether `n` is prime.
pub fn is_prime(n: u64) -> bool {
    n >= 2 && smallest_prime_factor(n) == n
}

/// Order of the smallest nontrivial subgroup: the smallest prime dividing
/// `|G|` for finite models of order `> 1`; infinite for the integers, free
/// groups, and the trivial group (which have no nontrivial subgroups).
pub fn smallest_subgroup_order(model: &GroupModel) -> SubgroupOrder {
    match model.order() {
        Some(1) | None => SubgroupOrder::Infinite,
        Some(n) => SubgroupOrder::Finite(smallest_prime_factor(n)),
    }
}

/// The stabilizer `{g : g · S = S}` of a nonempty finite set.
///
/// Computed by brute force over the whole group on finite models. On the
/// infinite models the stabilizer of a finite nonempty set is trivial, and
/// `{identity}` is returned as a defined special case rather than an error.
pub fn stabilizer(model: &GroupModel, s: &GSet) -> Result<GSet> {
    if s.is_empty() {
        return Err(Error::Precondition("stabilizer of an empty set".into()));
    }
    if s.model() != model {
        return Err(Error::ModelMismatch(
            "set model differs from the given model".into(),
        ));
    }
    if !model.is_finite() {
        return Ok(GSet::from_sorted_unchecked(
            model.clone(),
            vec![model.identity()],
        ));
    }
    let members: HashSet<&Element> = s.iter().collect();
    let mut stab = Vec::new();
    for g in enumerate(model)?.iter() {
        let fixes = s
            .iter()
            .all(|a| members.contains(&op_unchecked(model, g, a)));
        if fixes {
            stab.push(g.clone());
        }
    }
    Ok(GSet::from_sorted_unchecked(model.clone(), stab))
}

/// Verifies that `h` is a subgroup of its finite model.
pub fn is_subgroup(model: &GroupModel, h: &GSet) -> Result<bool> {
    if h.model() != model {
        return Err(Error::ModelMismatch(
            "set model differs from the given model".into(),
        ));
    }
    if !model.is_finite() {
        return Err(Error::InfiniteModel("is_subgroup"));
    }
    if !h.contains(&model.identity()) {
        return Ok(false);
    }
    for a in h.iter() {
        for b in h.iter() {
            if !h.contains(&op_unchecked(model, a, b)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The partition of a finite model into cosets of the subgroup `h`,
/// in deterministic order (by smallest representative).
pub fn cosets(model: &GroupModel, h: &GSet) -> Result<Vec<GSet>> {
    if !is_subgroup(model, h)? {
        return Err(Error::NotSubgroup(format!(
            "{} elements, identity/closure check failed",
            h.len()
        )));
    }
    let all = enumerate(model)?;
    let mut assigned: HashSet<Element> = HashSet::with_capacity(all.len());
    let mut out = Vec::new();
    for g in all.iter() {
        if assigned.contains(g) {
            continue;
        }
        let coset: Vec<Element> = h.iter().map(|x| op_unchecked(model, g, x)).collect();
        for e in &coset {
            assigned.insert(e.clone());
        }
        out.push(GSet::new(model.clone(), coset)?);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// GSet
// ---------------------------------------------------------------------------

/// A finite set of elements of one model, deterministically ordered and
/// duplicate-free. Serialization of a `GSet` is bit-stable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GSet {
    model: GroupModel,
    elements: Vec<Element>,
}

impl GSet {
    /// Builds a set from arbitrary elements: validates each against the
    /// model, sorts canonically, and removes duplicates.
    pub fn new(model: GroupModel, elements: impl IntoIterator<Item = Element>) -> Result<Self> {
        model.validate()?;
        let mut v: Vec<Element> = elements.into_iter().collect();
        for e in &v {
            model.check_element(e)?;
        }
        v.sort();
        v.dedup();
        Ok(GSet { model, elements: v })
    }

    /// Internal constructor for elements already canonical and sorted.
    pub(crate) fn from_sorted_unchecked(model: GroupModel, mut elements: Vec<Element>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] <= w[1]));
        elements.dedup();
        GSet { model, elements }
    }

    /// The empty set over `model`.
    pub fn empty(model: GroupModel) -> Self {
        GSet {
            model,
            elements: Vec::new(),
        }
    }

    /// A one-element set.
    pub fn singleton(model: GroupModel, e: Element) -> Result<Self> {
        Self::new(model, [e])
    }

    pub fn model(&self) -> &GroupModel {
        &self.model
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Elements in canonical order.
    pub fn iter(&self) -> std::slice::Iter<'_, Element> {
        self.elements.iter()
    }

    /// Elements in canonical order as a slice.
    pub fn as_slice(&self) -> &[Element] {
        &self.elements
    }

    pub fn contains(&self, e: &Element) -> bool {
        self.elements.binary_search(e).is_ok()
    }

    /// First element in canonical order.
    pub fn min(&self) -> Option<&Element> {
        self.elements.first()
    }

    pub fn union(&self, other: &GSet) -> Result<GSet> {
        self.same_model(other)?;
        let mut v = self.elements.clone();
        v.extend(other.elements.iter().cloned());
        v.sort();
        v.dedup();
        Ok(GSet {
            model: self.model.clone(),
            elements: v,
        })
    }

    pub fn intersection(&self, other: &GSet) -> Result<GSet> {
        self.same_model(other)?;
        let v = self
            .elements
            .iter()
            .filter(|e| other.contains(e))
            .cloned()
            .collect();
        Ok(GSet {
            model: self.model.clone(),
            elements: v,
        })
    }

    pub fn difference(&self, other: &GSet) -> Result<GSet> {
        self.same_model(other)?;
        let v = self
            .elements
            .iter()
            .filter(|e| !other.contains(e))
            .cloned()
            .collect();
        Ok(GSet {
            model: self.model.clone(),
            elements: v,
        })
    }

    pub fn is_subset_of(&self, other: &GSet) -> bool {
        self.elements.iter().all(|e| other.contains(e))
    }

    /// `g · S` (left translation).
    pub fn translate_left(&self, g: &Element) -> Result<GSet> {
        self.model.check_element(g)?;
        GSet::new(
            self.model.clone(),
            self.elements
                .iter()
                .map(|a| op_unchecked(&self.model, g, a)),
        )
    }

    /// `S · g` (right translation).
    pub fn translate_right(&self, g: &Element) -> Result<GSet> {
        self.model.check_element(g)?;
        GSet::new(
            self.model.clone(),
            self.elements
                .iter()
                .map(|a| op_unchecked(&self.model, a, g)),
        )
    }

    fn same_model(&self, other: &GSet) -> Result<()> {
        if self.model == other.model {
            Ok(())
        } else {
            Err(Error::ModelMismatch(
                "sets belong to different models".into(),
            ))
        }
    }
}

/// Pairwise product/sum of two sets: `{a · b : a ∈ A, b ∈ B}`.
pub fn set_op(a: &GSet, b: &GSet) -> Result<GSet> {
    if a.model() != b.model() {
        return Err(Error::ModelMismatch(
            "sets belong to different models".into(),
        ));
    }
    let model = a.model().clone();
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a.iter() {
        for y in b.iter() {
            out.push(op_unchecked(&model, x, y));
        }
    }
    GSet::new(model, out)
}

/// Left-to-right product `A_1 · A_2 · … · A_k` of the listed sets.
pub fn ordered_set_product(sets: &[GSet]) -> Result<GSet> {
    let first = sets
        .first()
        .ok_or_else(|| Error::Precondition("product of zero sets".into()))?;
    let mut acc = GSet::singleton(first.model().clone(), first.model().identity())?;
    for s in sets {
        acc = set_op(&acc, s)?;
    }
    Ok(acc)
}
