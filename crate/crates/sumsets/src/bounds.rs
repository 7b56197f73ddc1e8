//! Lower-bound evaluation with slack reporting.
//!
//! Every classical and multiplicity-refined lower bound supported by the
//! library is evaluated here against a concrete instance, producing a
//! [`BoundReport`] that records the bound value, the exactly computed set
//! size, their difference (`slack`), and a witness describing the
//! quantities that entered the bound (size sums, capped multiplicity
//! totals, stabilizer subgroups, coset profiles, or the disjunct of an
//! either/or theorem).
//!
//! The library only *reports* slack; asserting `slack ≥ 0` is the job of
//! the test harness and the verification fuzzer, which want to log
//! violations rather than panic.

use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::{
    cosets, is_prime, pow, set_op, smallest_subgroup_order, stabilizer, Element, GSet, GroupModel,
    SubgroupOrder,
};
use crate::seqset::{
    generalized_product_set, generalized_sumset, multiplicity_profile, subsequence_sumset,
    ElementSequence, SetSequence,
};

/// Identifies which lower bound a [`BoundReport`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundName {
    /// `min(p, Σ|A_i| − ℓ + 1)` for complete sumsets modulo a prime.
    CauchyDavenport,
    /// `Σ|A_i| − ℓ + 1` for ordered products in torsion-free groups.
    KemperTF,
    /// `|A+H| + |B+H| − |H|` with `H` the stabilizer of `A+B` (finite abelian).
    Kneser,
    /// `|H| (Σ_Q μ(Q) − ℓ + 1)` over cosets of the stabilizer of `Σ^ℓ`.
    DGM,
    /// `Σ_a μ(a) − ℓ + 1` for `Π^ℓ` in torsion-free groups.
    TorsionFreeMu,
    /// `min(p, Σ_a μ(a) − ℓ + 1)` for `Σ^ℓ` modulo a prime.
    ZpMu,
    /// `min(p(G), Σ_a μ(a) − ℓ + 1)` in an arbitrary group.
    AbelianMu,
    /// Subsequence-sum disjunction: size bound or `ℓ·a_i` membership.
    SubseqHamidoune,
}

impl BoundName {
    /// Canonical kebab-case name used in JSON and on the command line.
    pub fn as_str(self) -> &'static str {
        match self {
            BoundName::CauchyDavenport => "cauchy-davenport",
            BoundName::KemperTF => "kemperman-tf",
            BoundName::Kneser => "kneser",
            BoundName::DGM => "dgm",
            BoundName::TorsionFreeMu => "torsion-free-mu",
            BoundName::ZpMu => "zp-mu",
            BoundName::AbelianMu => "abelian-mu",
            BoundName::SubseqHamidoune => "subseq-hamidoune",
        }
    }

    /// All bound names, in declaration order.
    pub fn all() -> [BoundName; 8] {
        [
            BoundName::CauchyDavenport,
            BoundName::KemperTF,
            BoundName::Kneser,
            BoundName::DGM,
            BoundName::TorsionFreeMu,
            BoundName::ZpMu,
            BoundName::AbelianMu,
            BoundName::SubseqHamidoune,
        ]
    }
}

impl fmt::Display for BoundName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        Ok(match key.as_str() {
            "cauchy-davenport" | "cd" => BoundName::CauchyDavenport,
            "kemperman-tf" | "kemper-tf" => BoundName::KemperTF,
            "kneser" => BoundName::Kneser,
            "dgm" => BoundName::DGM,
            "torsion-free-mu" | "tf-mu" => BoundName::TorsionFreeMu,
            "zp-mu" => BoundName::ZpMu,
            "abelian-mu" => BoundName::AbelianMu,
            "subseq-hamidoune" | "hamidoune" => BoundName::SubseqHamidoune,
            _ => return Err(Error::InvalidParams(format!("unknown bound name `{s}`"))),
        })
    }
}

impl Serialize for BoundName {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for BoundName {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// Auxiliary data explaining how a bound value was assembled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundWitness {
    /// `Σ|A_i|` with the cap entering `min(cap, Σ|A_i| − ℓ + 1)`.
    SizeSum { size_sum: u64, cap: SubgroupOrder },
    /// `Σ_a μ(a)` with the cap entering `min(cap, Σμ − ℓ + 1)`.
    MuTotal { mu_total: u64, cap: SubgroupOrder },
    /// The stabilizer `H` of `A+B` with the saturated set sizes.
    Stabilizer {
        subgroup: GSet,
        a_plus_h: u64,
        b_plus_h: u64,
    },
    /// The stabilizer `H` of `Σ^ℓ` and capped multiplicities per coset of
    /// `H` (in the canonical coset order).
    CosetProfile {
        subgroup: GSet,
        coset_mu: Vec<u32>,
        coset_mu_total: u64,
    },
    /// Outcome of the subsequence-sum disjunction: whether the size bound
    /// holds and/or some term `a_i` has `ℓ·a_i` inside the sum set.
    Disjunction {
        size_holds: bool,
        power_holds: bool,
        /// Index into the term list of the first witnessing `a_i`.
        power_index: Option<usize>,
        /// The element `ℓ·a_i` itself.
        power_value: Option<Element>,
    },
}

/// Outcome of evaluating one lower bound against one instance.
///
/// `slack = actual_size − bound_value`. For every plain inequality bound,
/// `slack ≥ 0` whenever the bound's hypotheses hold; the disjunction check
/// ([`BoundName::SubseqHamidoune`]) may legitimately report negative slack
/// when only its second disjunct holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub bound_name: BoundName,
    pub bound_value: i64,
    pub actual_size: i64,
    pub slack: i64,
    pub witness: Option<BoundWitness>,
}

fn report(name: BoundName, bound_value: i64, actual: usize, witness: BoundWitness) -> BoundReport {
    let actual_size = actual as i64;
    BoundReport {
        bound_name: name,
        bound_value,
        actual_size,
        slack: actual_size - bound_value,
        witness: Some(witness),
    }
}

fn require_prime_cyclic(model: &GroupModel, op: &str) -> Result<u64> {
    match model {
        GroupModel::Cyclic { n } => {
            if is_prime(*n) {
                Ok(*n)
            } else {
                Err(Error::NotPrime(*n))
            }
        }
        _ => Err(Error::Precondition(format!(
            "{op} requires a prime cyclic model"
        ))),
    }
}

fn require_torsion_free(model: &GroupModel, op: &str) -> Result<()> {
    if model.is_torsion_free() {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "{op} requires a torsion-free model"
        )))
    }
}

fn require_finite_abelian(model: &GroupModel, op: &'static str) -> Result<()> {
    if !model.is_abelian() {
        return Err(Error::NonAbelianModel(op));
    }
    if !model.is_finite() {
        return Err(Error::InfiniteModel(op));
    }
    Ok(())
}

/// `min(p, Σ|A_i| − ℓ + 1)` for the plain sumset `A_1 + ⋯ + A_m` of all
/// sets of a sequence over a prime cyclic model (`ℓ = m`).
pub fn cauchy_davenport_bound(seq: &SetSequence) -> Result<BoundReport> {
    let p = require_prime_cyclic(seq.model(), "cauchy_davenport_bound")?;
    let m = seq.m();
    let sumset = generalized_sumset(seq, m)?;
    let size_sum = seq.size_sum();
    let raw = size_sum as i64 - m as i64 + 1;
    let bound = raw.min(p as i64);
    Ok(report(
        BoundName::CauchyDavenport,
        bound,
        sumset.len(),
        BoundWitness::SizeSum {
            size_sum,
            cap: SubgroupOrder::Finite(p),
        },
    ))
}

/// `Σ|A_i| − ℓ + 1` for the ordered product `A_1 ⋯ A_m` of all sets of a
/// sequence over a torsion-free model (`ℓ = m`).
pub fn kemperman_tf_bound(seq: &SetSequence) -> Result<BoundReport> {
    require_torsion_free(seq.model(), "kemperman_tf_bound")?;
    let m = seq.m();
    let product = crate::group::ordered_set_product(seq.sets())?;
    let size_sum = seq.size_sum();
    let bound = size_sum as i64 - m as i64 + 1;
    Ok(report(
        BoundName::KemperTF,
        bound,
        product.len(),
        BoundWitness::SizeSum {
            size_sum,
            cap: SubgroupOrder::Infinite,
        },
    ))
}

/// `|A+H| + |B+H| − |H|` where `H` is the stabilizer of `A+B`, over a
/// finite abelian model.
pub fn kneser_bound(a: &GSet, b: &GSet) -> Result<BoundReport> {
    if a.model() != b.model() {
        return Err(Error::ModelMismatch(
            "kneser_bound arguments use different models".into(),
        ));
    }
    let model = a.model();
    require_finite_abelian(model, "kneser_bound")?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::Precondition(
            "kneser_bound requires nonempty sets".into(),
        ));
    }
    let s = set_op(a, b)?;
    let h = stabilizer(model, &s)?;
    let a_plus_h = set_op(a, &h)?;
    let b_plus_h = set_op(b, &h)?;
    let bound = a_plus_h.len() as i64 + b_plus_h.len() as i64 - h.len() as i64;
    Ok(report(
        BoundName::Kneser,
        bound,
        s.len(),
        BoundWitness::Stabilizer {
            subgroup: h,
            a_plus_h: a_plus_h.len() as u64,
            b_plus_h: b_plus_h.len() as u64,
        },
    ))
}

/// Coset-weighted bound `|H| (Σ_{Q ∈ G/H} μ(Q) − ℓ + 1)` for `Σ^ℓ` over a
/// finite abelian model, where `H` is the stabilizer of `Σ^ℓ(𝒜)` and
/// `μ(Q) = min(ℓ, #{i : A_i ∩ Q ≠ ∅})`.
pub fn dgm_bound(seq: &SetSequence, ell: usize) -> Result<BoundReport> {
    require_finite_abelian(seq.model(), "dgm_bound")?;
    seq.check_ell(ell)?;
    let s = generalized_sumset(seq, ell)?;
    let h = stabilizer(seq.model(), &s)?;
    let quotient = cosets(seq.model(), &h)?;
    let mut coset_mu = Vec::with_capacity(quotient.len());
    let mut total: u64 = 0;
    for q in &quotient {
        let mut count = 0usize;
        for a_i in seq.sets() {
            if !a_i.intersection(q)?.is_empty() {
                count += 1;
            }
        }
        let mu = count.min(ell) as u32;
        coset_mu.push(mu);
        total += mu as u64;
    }
    let bound = h.len() as i64 * (total as i64 - ell as i64 + 1);
    Ok(report(
        BoundName::DGM,
        bound,
        s.len(),
        BoundWitness::CosetProfile {
            subgroup: h,
            coset_mu,
            coset_mu_total: total,
        },
    ))
}

/// `Σ_a μ(a) − ℓ + 1` for the product set `Π^ℓ` over a torsion-free model.
pub fn torsion_free_mu_bound(seq: &SetSequence, ell: usize) -> Result<BoundReport> {
    require_torsion_free(seq.model(), "torsion_free_mu_bound")?;
    let profile = multiplicity_profile(seq, ell)?;
    let product = generalized_product_set(seq, ell)?;
    let mu_total = profile.mu_total();
    let bound = mu_total as i64 - ell as i64 + 1;
    Ok(report(
        BoundName::TorsionFreeMu,
        bound,
        product.len(),
        BoundWitness::MuTotal {
            mu_total,
            cap: SubgroupOrder::Infinite,
        },
    ))
}

/// `min(p, Σ_a μ(a) − ℓ + 1)` for `Σ^ℓ` over a prime cyclic model,
/// `2 ≤ ℓ ≤ m`.
pub fn zp_mu_bound(seq: &SetSequence, ell: usize) -> Result<BoundReport> {
    let p = require_prime_cyclic(seq.model(), "zp_mu_bound")?;
    if ell < 2 {
        return Err(Error::Precondition("zp_mu_bound requires ℓ ≥ 2".into()));
    }
    let profile = multiplicity_profile(seq, ell)?;
    let sumset = generalized_sumset(seq, ell)?;
    let mu_total = profile.mu_total();
    let bound = (mu_total as i64 - ell as i64 + 1).min(p as i64);
    Ok(report(
        BoundName::ZpMu,
        bound,
        sumset.len(),
        BoundWitness::MuTotal {
            mu_total,
            cap: SubgroupOrder::Finite(p),
        },
    ))
}

/// `min(p(G), Σ_a μ(a) − ℓ + 1)` for `Π^ℓ` over any model, where `p(G)` is
/// the order of the smallest nontrivial subgroup (∞ if none exists). On
/// abelian models `Π^ℓ = Σ^ℓ`, so this specializes to the sumset bound.
pub fn abelian_mu_bound(seq: &SetSequence, ell: usize) -> Result<BoundReport> {
    let profile = multiplicity_profile(seq, ell)?;
    let actual = generalized_product_set(seq, ell)?;
    let mu_total = profile.mu_total();
    let cap = smallest_subgroup_order(seq.model());
    let bound = cap.cap(mu_total as i64 - ell as i64 + 1);
    Ok(report(
        BoundName::AbelianMu,
        bound,
        actual.len(),
        BoundWitness::MuTotal { mu_total, cap },
    ))
}

/// Subsequence-sum disjunction for an element sequence: either
/// `|Σ^ℓ(𝐚)| ≥ min(p(G), m − ℓ + 1)` or some term satisfies
/// `ℓ·a_i ∈ Σ^ℓ(𝐚)`. At least one disjunct holds for every sequence; the
/// report records which. `slack` is measured against the size disjunct
/// and may be negative when only the power disjunct holds.
pub fn hamidoune_check(a: &ElementSequence, ell: usize) -> Result<BoundReport> {
    let m = a.m();
    if ell < 1 || ell > m {
        return Err(Error::EllOutOfRange { ell, m });
    }
    let s = subsequence_sumset(a, ell)?;
    let threshold = smallest_subgroup_order(a.model()).cap(m as i64 - ell as i64 + 1);
    let size_holds = s.len() as i64 >= threshold;
    let mut power_holds = false;
    let mut power_index = None;
    let mut power_value = None;
    let mut seen: Vec<&Element> = Vec::new();
    for (i, x) in a.terms().iter().enumerate() {
        if seen.contains(&x) {
            continue;
        }
        seen.push(x);
        let px = pow(a.model(), x, ell as i64)?;
        if s.contains(&px) {
            power_holds = true;
            power_index = Some(i);
            power_value = Some(px);
            break;
        }
    }
    Ok(report(
        BoundName::SubseqHamidoune,
        threshold,
        s.len(),
        BoundWitness::Disjunction {
            size_holds,
            power_holds,
            power_index,
            power_value,
        },
    ))
}

/// The set-sequence bounds whose hypotheses `(seq, ell)` meets, in a fixed
/// order. The subsequence disjunction is excluded (it takes an element
/// sequence, not a set sequence).
pub fn applicable_bounds(seq: &SetSequence, ell: usize) -> Vec<BoundName> {
    let model = seq.model();
    let mut names = vec![BoundName::AbelianMu];
    if model.is_torsion_free() {
        names.push(BoundName::TorsionFreeMu);
        names.push(BoundName::KemperTF);
    }
    if let GroupModel::Cyclic { n } = model {
        if is_prime(*n) {
            names.push(BoundName::CauchyDavenport);
            if ell >= 2 {
                names.push(BoundName::ZpMu);
            }
        }
    }
    if model.is_finite() && model.is_abelian() {
        names.push(BoundName::DGM);
        if seq.m() == 2 {
            names.push(BoundName::Kneser);
        }
    }
    names
}

/// Evaluates one named bound against a set-sequence instance.
pub fn evaluate_bound(name: BoundName, seq: &SetSequence, ell: usize) -> Result<BoundReport> {
    match name {
        BoundName::CauchyDavenport => cauchy_davenport_bound(seq),
        BoundName::KemperTF => kemperman_tf_bound(seq),
        BoundName::Kneser => {
            if seq.m() != 2 {
                return Err(Error::Precondition(
                    "the two-set stabilizer bound needs exactly two sets".into(),
                ));
            }
            kneser_bound(seq.set(0), seq.set(1))
        }
        BoundName::DGM => dgm_bound(seq, ell),
        BoundName::TorsionFreeMu => torsion_free_mu_bound(seq, ell),
        BoundName::ZpMu => zp_mu_bound(seq, ell),
        BoundName::AbelianMu => abelian_mu_bound(seq, ell),
        BoundName::SubseqHamidoune => Err(Error::Precondition(
            "the subsequence disjunction applies to element sequences".into(),
        )),
    }
}
