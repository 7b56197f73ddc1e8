//! Randomized and exhaustive verification suites.
//!
//! Every suite replays a guarantee of the library against generated
//! instances: seeded fuzzers sample models and instances, exhaustive
//! drivers enumerate all small instances of a shape, and each failure is
//! greedily shrunk to a minimal counterexample before being reported.  The
//! command-line `verify` command and the acceptance tests both run these
//! suites, so a violation reported here always carries a replayable JSON
//! instance.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::bounds::{applicable_bounds, evaluate_bound, hamidoune_check, BoundName};
use crate::constructions::{b_sequence, construct, expected_equality_value, mirror_to_free, param_grid};
use crate::error::{Error, Result};
use crate::group::{
    inverse as group_inverse, is_prime, op, pow, push_syllable, smallest_subgroup_order, Element,
    GSet, GroupModel, SubgroupOrder, Syllable,
};
use crate::inverse::{build_witness_sets, check_minimizing, classify_extremal, vosper_multi_classify};
use crate::json::{instance_to_json, Instance, Payload};
use crate::seqset::{
    generalized_product_set, generalized_sumset, multiplicity_profile, ElementSequence,
    SetSequence,
};
use crate::structure::{
    detect_progressions, realize, same_ratio_family, witness_with_ratio, ProgressionType,
};
use crate::subseq::{subseq_disjunction, subseq_inverse_check};

/// Size limits and seeding for the randomized suites.
#[derive(Debug, Clone)]
pub struct FuzzConfig {
    /// Seed of the deterministic generator; equal seeds replay equal runs.
    pub seed: u64,
    /// Number of instances per suite.
    pub count: usize,
    /// Maximum number of sets or terms per instance.
    pub max_m: usize,
    /// Maximum set cardinality.
    pub max_set_size: usize,
    /// Integer elements are sampled from `[0, universe]`.
    pub universe: i64,
    /// Prime cyclic models use primes up to this value.
    pub max_prime: u64,
    /// Total-size budget handed to the construction parameter grid.
    pub grid_total: u64,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            seed: 0,
            count: 1000,
            max_m: 6,
            max_set_size: 5,
            universe: 16,
            max_prime: 13,
            grid_total: 30,
        }
    }
}

impl FuzzConfig {
    /// A default configuration with the given seed and instance count.
    pub fn seeded(seed: u64, count: usize) -> Self {
        FuzzConfig {
            seed,
            count,
            ..FuzzConfig::default()
        }
    }
}

/// One failed check, with a replayable instance.
#[derive(Debug, Clone)]
pub struct Violation {
    /// What guarantee was broken.
    pub description: String,
    /// The (shrunk) instance in the shared JSON format.
    pub instance: Value,
}

/// Aggregated outcome of one suite run.
#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    /// Suite name as used on the command line.
    pub suite: String,
    /// Instances generated and checked.
    pub instances: u64,
    /// Instances attaining equality in the applicable bound.
    pub equality_cases: u64,
    /// Instances skipped because a hypothesis gate or work budget excluded
    /// them (never because a check failed).
    pub skips: u64,
    /// All failures, in discovery order.
    pub violations: Vec<Violation>,
}

impl SuiteOutcome {
    fn new(suite: &str) -> Self {
        SuiteOutcome {
            suite: suite.to_string(),
            instances: 0,
            equality_cases: 0,
            skips: 0,
            violations: Vec::new(),
        }
    }

    /// Whether the suite finished without violations.
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The model classes covered by the fuzz suites: the integers, prime
/// residues up to `max_prime`, two composite abelian models, and a free
/// group of rank two.
pub fn model_classes(max_prime: u64) -> Vec<GroupModel> {
    let mut models = vec![GroupModel::Integers];
    for p in [2u64, 3, 5, 7, 11, 13] {
        if p <= max_prime {
            models.push(GroupModel::Cyclic { n: p });
        }
    }
    models.push(GroupModel::Cyclic { n: 6 });
    models.push(GroupModel::FiniteAbelian { moduli: vec![2, 4] });
    models.push(GroupModel::Free { rank: 2 });
    models
}

fn sample_element(rng: &mut ChaCha8Rng, model: &GroupModel, universe: i64) -> Element {
    match model {
        GroupModel::Integers => Element::Int(rng.gen_range(0..=universe)),
        GroupModel::Cyclic { n } => Element::Residue(rng.gen_range(0..*n)),
        GroupModel::FiniteAbelian { moduli } => {
            Element::ResidueVec(moduli.iter().map(|&md| rng.gen_range(0..md)).collect())
        }
        GroupModel::Free { rank } => {
            let letters = rng.gen_range(0..=3usize);
            let mut word: Vec<Syllable> = Vec::new();
            for _ in 0..letters {
                let g = rng.gen_range(0..*rank);
                let e = if rng.gen::<bool>() { 1 } else { -1 };
                push_syllable(&mut word, g, e);
            }
            Element::Word(word)
        }
    }
}

fn sample_gset(rng: &mut ChaCha8Rng, model: &GroupModel, cfg: &FuzzConfig) -> GSet {
    let target = rng.gen_range(1..=cfg.max_set_size);
    let mut members: BTreeSet<Element> = BTreeSet::new();
    let mut attempts = 0;
    while members.len() < target && attempts < 8 * target {
        members.insert(sample_element(rng, model, cfg.universe));
        attempts += 1;
    }
    GSet::new(model.clone(), members).expect("sampled elements belong to the model")
}

fn sample_set_sequence(
    rng: &mut ChaCha8Rng,
    model: &GroupModel,
    cfg: &FuzzConfig,
    min_ell: usize,
) -> (SetSequence, usize) {
    let m = rng.gen_range(2.max(min_ell)..=cfg.max_m.max(2).max(min_ell));
    let sets: Vec<GSet> = (0..m).map(|_| sample_gset(rng, model, cfg)).collect();
    let seq = SetSequence::new(sets).expect("sampled sets share one model");
    let ell = rng.gen_range(min_ell..=m);
    (seq, ell)
}

fn sample_element_sequence(
    rng: &mut ChaCha8Rng,
    model: &GroupModel,
    cfg: &FuzzConfig,
) -> (ElementSequence, usize) {
    let m = rng.gen_range(2..=cfg.max_m.max(2));
    // Draw terms from a small pool so repeated values (the interesting
    // case for multiplicity profiles) appear often.
    let pool_size = rng.gen_range(1..=m.min(4));
    let pool: Vec<Element> = (0..pool_size)
        .map(|_| sample_element(rng, model, cfg.universe))
        .collect();
    let terms: Vec<Element> = (0..m)
        .map(|_| pool[rng.gen_range(0..pool.len())].clone())
        .collect();
    let seq = ElementSequence::new(model.clone(), terms).expect("nonempty term list");
    let ell = rng.gen_range(1..=m);
    (seq, ell)
}

fn set_instance_json(seq: &SetSequence, ell: usize) -> Value {
    instance_to_json(&Instance {
        ell,
        payload: Payload::Sets(seq.clone()),
    })
}

fn sequence_instance_json(seq: &ElementSequence, ell: usize) -> Value {
    instance_to_json(&Instance {
        ell,
        payload: Payload::Sequence(seq.clone()),
    })
}

/// Greedily shrinks a failing set-sequence instance: drop whole sets, then
/// single elements, then lower the window, as long as `fails` stays true.
fn shrink_set_instance<F>(seq: SetSequence, ell: usize, fails: &F) -> (SetSequence, usize)
where
    F: Fn(&SetSequence, usize) -> bool,
{
    let mut cur = seq;
    let mut cur_ell = ell;
    'progress: loop {
        if cur.m() > 1 && cur_ell < cur.m() {
            for i in 0..cur.m() {
                let mut sets = cur.sets().to_vec();
                sets.remove(i);
                if let Ok(cand) = SetSequence::new(sets) {
                    if fails(&cand, cur_ell) {
                        cur = cand;
                        continue 'progress;
                    }
                }
            }
        }
        for i in 0..cur.m() {
            if cur.set(i).len() <= 1 {
                continue;
            }
            for e in cur.set(i).as_slice().to_vec() {
                let single = GSet::new(cur.model().clone(), vec![e])
                    .expect("element comes from the set itself");
                let Ok(smaller) = cur.set(i).difference(&single) else {
                    continue;
                };
                let mut sets = cur.sets().to_vec();
                sets[i] = smaller;
                if let Ok(cand) = SetSequence::new(sets) {
                    if fails(&cand, cur_ell) {
                        cur = cand;
                        continue 'progress;
                    }
                }
            }
        }
        if cur_ell > 1 && fails(&cur, cur_ell - 1) {
            cur_ell -= 1;
            continue 'progress;
        }
        return (cur, cur_ell);
    }
}

/// Greedily shrinks a failing element-sequence instance: drop terms, then
/// lower the window.
fn shrink_sequence_instance<F>(
    seq: ElementSequence,
    ell: usize,
    fails: &F,
) -> (ElementSequence, usize)
where
    F: Fn(&ElementSequence, usize) -> bool,
{
    let mut cur = seq;
    let mut cur_ell = ell;
    'progress: loop {
        if cur.m() > 1 && cur_ell < cur.m() {
            for i in 0..cur.m() {
                let mut terms = cur.terms().to_vec();
                terms.remove(i);
                if let Ok(cand) = ElementSequence::new(cur.model().clone(), terms) {
                    if fails(&cand, cur_ell) {
                        cur = cand;
                        continue 'progress;
                    }
                }
            }
        }
        if cur_ell > 1 && fails(&cur, cur_ell - 1) {
            cur_ell -= 1;
            continue 'progress;
        }
        return (cur, cur_ell);
    }
}

/// Checks every applicable lower bound on random instances: slack must be
/// nonnegative whenever the bound's hypotheses hold, and the subsequence
/// disjunction must have at least one true arm.
pub fn verify_bounds(cfg: &FuzzConfig) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("bounds");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let models = model_classes(cfg.max_prime);
    for round in 0..cfg.count {
        let model = models[round % models.len()].clone();
        let (seq, ell) = sample_set_sequence(&mut rng, &model, cfg, 1);
        out.instances += 1;
        for name in applicable_bounds(&seq, ell) {
            match evaluate_bound(name, &seq, ell) {
                Ok(report) => {
                    if name == BoundName::AbelianMu && report.slack == 0 {
                        out.equality_cases += 1;
                    }
                    if report.slack < 0 {
                        let fails = |s: &SetSequence, l: usize| {
                            evaluate_bound(name, s, l).map(|r| r.slack < 0).unwrap_or(false)
                        };
                        let (small, small_ell) = shrink_set_instance(seq.clone(), ell, &fails);
                        out.violations.push(Violation {
                            description: format!(
                                "bound `{name}` has negative slack {}",
                                report.slack
                            ),
                            instance: set_instance_json(&small, small_ell),
                        });
                    }
                }
                Err(Error::BudgetExceeded(_)) => out.skips += 1,
                Err(e) => out.violations.push(Violation {
                    description: format!("bound `{name}` failed to evaluate: {e}"),
                    instance: set_instance_json(&seq, ell),
                }),
            }
        }

        // The disjunction bound runs on element sequences.
        let (terms, term_ell) = sample_element_sequence(&mut rng, &model, cfg);
        match hamidoune_check(&terms, term_ell) {
            Ok(report) => {
                let holds = match report.witness {
                    Some(crate::bounds::BoundWitness::Disjunction {
                        size_holds,
                        power_holds,
                        ..
                    }) => size_holds || power_holds,
                    _ => false,
                };
                if !holds {
                    let fails = |s: &ElementSequence, l: usize| {
                        hamidoune_check(s, l)
                            .map(|r| match r.witness {
                                Some(crate::bounds::BoundWitness::Disjunction {
                                    size_holds,
                                    power_holds,
                                    ..
                                }) => !(size_holds || power_holds),
                                _ => true,
                            })
                            .unwrap_or(false)
                    };
                    let (small, small_ell) =
                        shrink_sequence_instance(terms.clone(), term_ell, &fails);
                    out.violations.push(Violation {
                        description: "subsequence disjunction has no true arm".into(),
                        instance: sequence_instance_json(&small, small_ell),
                    });
                }
            }
            Err(Error::BudgetExceeded(_)) => out.skips += 1,
            Err(e) => out.violations.push(Violation {
                description: format!("disjunction check failed to evaluate: {e}"),
                instance: sequence_instance_json(&terms, term_ell),
            }),
        }
    }
    out
}

fn progression_identity_types(
    model: &GroupModel,
    t: &ProgressionType,
    c: &Element,
) -> Result<Vec<ProgressionType>> {
    let identity = model.identity();
    let n = t.length;
    // (a, g, b) rewritten with the tail absorbed: (ab, b⁻¹gb, 1).
    let ab = op(model, &t.a, &t.b)?;
    let b_inv = group_inverse(model, &t.b)?;
    let g_conj_b = op(model, &op(model, &b_inv, &t.g)?, &t.b)?;
    let right_normal = ProgressionType::new(ab.clone(), g_conj_b, identity.clone(), n);
    // (a, g, b) rewritten with the head absorbed: (1, aga⁻¹, ab).
    let a_inv = group_inverse(model, &t.a)?;
    let g_conj_a = op(model, &op(model, &t.a, &t.g)?, &a_inv)?;
    let left_normal = ProgressionType::new(identity, g_conj_a, ab, n);
    // Ratio inversion walks the progression backwards:
    // (a, g, b) = (a, g⁻¹, g^{n−1} b).
    let g_inv = group_inverse(model, &t.g)?;
    let shifted_b = op(model, &pow(model, &t.g, n as i64 - 1)?, &t.b)?;
    let reversed = ProgressionType::new(t.a.clone(), g_inv, shifted_b, n);
    // Conjugation shift by an arbitrary c: (ac, c⁻¹gc, c⁻¹b).
    let c_inv = group_inverse(model, c)?;
    let conjugated = ProgressionType::new(
        op(model, &t.a, c)?,
        op(model, &op(model, &c_inv, &t.g)?, c)?,
        op(model, &c_inv, &t.b)?,
        n,
    );
    Ok(vec![right_normal, left_normal, reversed, conjugated])
}

/// Checks the progression-representation identities and the
/// detect-then-realize fixed point on random progression types over the
/// integers and a free group of rank two.
pub fn verify_structure(cfg: &FuzzConfig) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("structure");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(1));
    let models = [GroupModel::Integers, GroupModel::Free { rank: 2 }];
    for round in 0..cfg.count {
        let model = &models[round % models.len()];
        let identity = model.identity();
        let a = sample_element(&mut rng, model, cfg.universe);
        let b = sample_element(&mut rng, model, cfg.universe);
        let mut g = sample_element(&mut rng, model, cfg.universe);
        while g == identity {
            g = sample_element(&mut rng, model, cfg.universe);
        }
        let c = sample_element(&mut rng, model, cfg.universe);
        let length = rng.gen_range(1..=5usize);
        let t = ProgressionType::new(a, g, b, length);
        out.instances += 1;

        let check = || -> Result<Option<String>> {
            let realized = realize(model, &t)?;
            for variant in progression_identity_types(model, &t, &c)? {
                // Length-1 variants may carry an identity ratio after the
                // rewrites; realize rejects that only for length >= 2.
                if variant.length >= 2 && variant.g == model.identity() {
                    continue;
                }
                let other = realize(model, &variant)?;
                if other != realized {
                    return Ok(Some(format!(
                        "representation identity broke: ({:?}, {:?}, {:?}) differs",
                        variant.a, variant.g, variant.b
                    )));
                }
            }
            let detected = detect_progressions(&realized);
            if detected.is_empty() {
                return Ok(Some("no progression detected on a realized set".into()));
            }
            for d in &detected {
                if realize(model, d)? != realized {
                    return Ok(Some("detected type fails to realize the set back".into()));
                }
            }
            Ok(None)
        };
        match check() {
            Ok(None) => {}
            Ok(Some(description)) => out.violations.push(Violation {
                description,
                instance: serde_json::json!({
                    "model": crate::json::model_to_json(model),
                    "type": crate::json::progression_to_json(&t),
                }),
            }),
            Err(e) => out.violations.push(Violation {
                description: format!("progression check failed to evaluate: {e}"),
                instance: crate::json::progression_to_json(&t),
            }),
        }
    }
    out
}

/// Replays the inverse-layer guarantees on random instances: the witness
/// augmentation must satisfy its structural equations, the extremal
/// classifier must not fault, and on torsion-free models equality in the
/// multiplicity bound must coincide with a minimizing-family witness.
pub fn verify_inverse(cfg: &FuzzConfig) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("inverse");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(2));
    let models = model_classes(cfg.max_prime);
    for round in 0..cfg.count {
        let model = models[round % models.len()].clone();
        let (seq, ell) = sample_set_sequence(&mut rng, &model, cfg, 2);
        out.instances += 1;

        // The witness augmentation self-verifies every structural equation
        // before returning, so a successful build is a passed check.
        match build_witness_sets(&seq, ell) {
            Ok(_) => {}
            Err(Error::BudgetExceeded(_)) => out.skips += 1,
            Err(e) => out.violations.push(Violation {
                description: format!("witness augmentation failed: {e}"),
                instance: set_instance_json(&seq, ell),
            }),
        }

        let report = match classify_extremal(&seq, ell) {
            Ok(r) => Some(r),
            Err(Error::BudgetExceeded(_)) => {
                out.skips += 1;
                None
            }
            Err(e) => {
                out.violations.push(Violation {
                    description: format!("extremal classification failed: {e}"),
                    instance: set_instance_json(&seq, ell),
                });
                None
            }
        };
        if let Some(report) = &report {
            if report.equality {
                out.equality_cases += 1;
            }
        }

        let sizes_ok = seq.sets().iter().all(|s| s.len() >= 2);

        // Equality ⇔ minimizing-family witness on torsion-free models
        // (the witness search needs every set to have two elements).
        if model.is_torsion_free() {
            if let Some(report) = &report {
                if !sizes_ok {
                    out.skips += 1;
                } else {
                    match check_minimizing(&seq, ell) {
                        Ok(witness) => {
                            if witness.is_some() != report.equality {
                                let fails = |s: &SetSequence, l: usize| {
                                    let Ok(r) = classify_extremal(s, l) else {
                                        return false;
                                    };
                                    let Ok(w) = check_minimizing(s, l) else {
                                        return false;
                                    };
                                    w.is_some() != r.equality
                                };
                                let (small, small_ell) =
                                    shrink_set_instance(seq.clone(), ell, &fails);
                                out.violations.push(Violation {
                                    description: format!(
                                        "equality/minimizing mismatch: equality={}, witness={}",
                                        report.equality,
                                        !report.equality
                                    ),
                                    instance: set_instance_json(&small, small_ell),
                                });
                            }
                        }
                        Err(Error::BudgetExceeded(_)) => out.skips += 1,
                        Err(e) => out.violations.push(Violation {
                            description: format!("minimizing check failed: {e}"),
                            instance: set_instance_json(&seq, ell),
                        }),
                    }
                }
            }
        }

        // On prime cyclic models the same biconditional holds under the
        // size caps and the strict-window hypotheses, and the multi-set
        // critical-pair classifier must not fault.
        if let GroupModel::Cyclic { n } = &model {
            if is_prime(*n) {
                if let Some(report) = &report {
                    if ell < seq.m() && sizes_ok && report.caps_ok {
                        match check_minimizing(&seq, ell) {
                            Ok(witness) => {
                                if witness.is_some() != report.equality {
                                    out.violations.push(Violation {
                                        description: format!(
                                            "capped equality/minimizing mismatch: equality={}",
                                            report.equality
                                        ),
                                        instance: set_instance_json(&seq, ell),
                                    });
                                }
                            }
                            Err(Error::BudgetExceeded(_)) => out.skips += 1,
                            Err(e) => out.violations.push(Violation {
                                description: format!("minimizing check failed: {e}"),
                                instance: set_instance_json(&seq, ell),
                            }),
                        }
                    } else {
                        out.skips += 1;
                    }
                }
                if let Err(e) = vosper_multi_classify(&seq) {
                    out.violations.push(Violation {
                        description: format!("critical-pair classification failed: {e}"),
                        instance: set_instance_json(&seq, seq.m()),
                    });
                }
            }
        }
    }
    out
}

/// Rebuilds every family in the construction parameter grid and checks the
/// claimed equality value, the companion overlap-free sequences, and the
/// free-group mirror.
pub fn verify_constructions(cfg: &FuzzConfig) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("constructions");
    for (index, params) in param_grid(cfg.grid_total).iter().enumerate() {
        out.instances += 1;
        let seq = match construct(params) {
            Ok(seq) => seq,
            Err(e) => {
                out.violations.push(Violation {
                    description: format!("construction failed to build: {e}"),
                    instance: serde_json::json!({ "params": format!("{params:?}") }),
                });
                continue;
            }
        };
        let check = || -> Result<Option<String>> {
            let expected = expected_equality_value(params)?;
            let sumset = generalized_sumset(&seq, params.ell)?;
            if sumset.len() as i64 != expected {
                return Ok(Some(format!(
                    "family misses its equality value: expected {expected}, got {}",
                    sumset.len()
                )));
            }
            if let Some(companion) = b_sequence(params)? {
                let mut union = GSet::new(seq.model().clone(), Vec::<Element>::new())?;
                for s in companion.sets() {
                    union = union.union(s)?;
                }
                if &union != seq.union() {
                    return Ok(Some("companion sequence misses the union".into()));
                }
                for e in union.iter() {
                    if companion.incidence_of(e) > params.ell as u32 {
                        return Ok(Some("companion sequence exceeds the overlap cap".into()));
                    }
                }
                let companion_sum = generalized_sumset(&companion, params.ell)?;
                if !companion_sum.is_subset_of(&sumset) {
                    return Ok(Some("companion sum escapes the family sum".into()));
                }
            }
            // Spot-check the multiplicative mirror on a sample of families.
            if index % 8 == 0 {
                let mirrored = mirror_to_free(&seq)?;
                let product = generalized_product_set(&mirrored, params.ell)?;
                if product.len() != sumset.len() {
                    return Ok(Some("free-group mirror changes the set size".into()));
                }
            }
            Ok(None)
        };
        let verdict = check();
        match verdict {
            Ok(None) => out.equality_cases += 1,
            Ok(Some(description)) => out.violations.push(Violation {
                description,
                instance: set_instance_json(&seq, params.ell),
            }),
            Err(e) => out.violations.push(Violation {
                description: format!("construction checks failed to evaluate: {e}"),
                instance: set_instance_json(&seq, params.ell),
            }),
        }
    }
    out
}

/// Replays the subsequence-sum guarantees on random element sequences: the
/// size-or-membership disjunction always holds, and the extremal
/// classification never faults (its progression witness is self-checked).
pub fn verify_subseq(cfg: &FuzzConfig) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("subseq");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(3));
    let models = model_classes(cfg.max_prime);
    for round in 0..cfg.count {
        let model = models[round % models.len()].clone();
        let (seq, ell) = sample_element_sequence(&mut rng, &model, cfg);
        out.instances += 1;
        match subseq_disjunction(&seq, ell) {
            Ok(report) => {
                if !report.holds() {
                    let fails = |s: &ElementSequence, l: usize| {
                        subseq_disjunction(s, l).map(|r| !r.holds()).unwrap_or(false)
                    };
                    let (small, small_ell) = shrink_sequence_instance(seq.clone(), ell, &fails);
                    out.violations.push(Violation {
                        description: "subsequence disjunction has no true arm".into(),
                        instance: sequence_instance_json(&small, small_ell),
                    });
                }
            }
            Err(Error::BudgetExceeded(_)) => out.skips += 1,
            Err(e) => out.violations.push(Violation {
                description: format!("disjunction failed to evaluate: {e}"),
                instance: sequence_instance_json(&seq, ell),
            }),
        }
        match subseq_inverse_check(&seq, ell) {
            Ok(report) => {
                if report.equality && report.applicable {
                    out.equality_cases += 1;
                }
            }
            Err(Error::BudgetExceeded(_)) => out.skips += 1,
            Err(e) => out.violations.push(Violation {
                description: format!("subsequence classification failed: {e}"),
                instance: sequence_instance_json(&seq, ell),
            }),
        }
    }
    out
}

/// Runs every named suite with one configuration.
pub fn verify_all(cfg: &FuzzConfig) -> Vec<SuiteOutcome> {
    vec![
        verify_bounds(cfg),
        verify_structure(cfg),
        verify_inverse(cfg),
        verify_constructions(cfg),
        verify_subseq(cfg),
    ]
}

/// Dispatches a suite by its command-line name.
pub fn verify_suite(name: &str, cfg: &FuzzConfig) -> Result<Vec<SuiteOutcome>> {
    Ok(match name {
        "bounds" => vec![verify_bounds(cfg)],
        "structure" => vec![verify_structure(cfg)],
        "inverse" => vec![verify_inverse(cfg)],
        "constructions" => vec![verify_constructions(cfg)],
        "subseq" => vec![verify_subseq(cfg)],
        "all" => verify_all(cfg),
        other => {
            return Err(Error::InvalidParams(format!(
                "unknown suite `{other}` (expected bounds, structure, inverse, constructions, subseq, or all)"
            )))
        }
    })
}

/// Shape of an exhaustive inverse scan: every `m`-tuple of subsets of
/// `universe` with at least `min_set_size` elements is checked.
#[derive(Debug, Clone)]
pub struct ExhaustiveInverseParams {
    pub model: GroupModel,
    pub m: usize,
    pub ell: usize,
    pub universe: Vec<Element>,
    pub min_set_size: usize,
}

impl ExhaustiveInverseParams {
    /// Integer instances with sets inside `[lo, hi]`.
    pub fn integers(m: usize, ell: usize, lo: i64, hi: i64) -> Self {
        ExhaustiveInverseParams {
            model: GroupModel::Integers,
            m,
            ell,
            universe: (lo..=hi).map(Element::Int).collect(),
            min_set_size: 2,
        }
    }

    /// Cyclic instances over the full group of order `n`.
    pub fn cyclic(n: u64, m: usize, ell: usize) -> Self {
        ExhaustiveInverseParams {
            model: GroupModel::Cyclic { n },
            m,
            ell,
            universe: (0..n).map(Element::Residue).collect(),
            min_set_size: 2,
        }
    }
}

/// Parses the scan grammar used by `verify --exhaustive`:
/// `"Z,m=3,ell=2,universe=0..5"` for integer scans (inclusive range) and
/// `"Z7,m=3,ell=2"` for cyclic scans over the full group.  An optional
/// `min-size=k` overrides the default minimum set size of 2.
pub fn parse_exhaustive_spec(spec: &str) -> Result<ExhaustiveInverseParams> {
    let mut tokens = spec.split(',').map(str::trim);
    let model_token = tokens
        .next()
        .filter(|t| !t.is_empty())
        .ok_or_else(|| Error::InvalidParams("empty exhaustive spec".into()))?;
    let model = if model_token.eq_ignore_ascii_case("z") {
        GroupModel::Integers
    } else if let Some(rest) = model_token
        .strip_prefix('Z')
        .or_else(|| model_token.strip_prefix('z'))
    {
        let n: u64 = rest.parse().map_err(|_| {
            Error::InvalidParams(format!("bad cyclic order in model token `{model_token}`"))
        })?;
        GroupModel::Cyclic { n }
    } else {
        return Err(Error::InvalidParams(format!(
            "unknown model token `{model_token}` (expected Z or Z<n>)"
        )));
    };
    let mut m = None;
    let mut ell = None;
    let mut range: Option<(i64, i64)> = None;
    let mut min_set_size = 2usize;
    for token in tokens {
        let (key, value) = token.split_once('=').ok_or_else(|| {
            Error::InvalidParams(format!("expected key=value in exhaustive spec, got `{token}`"))
        })?;
        match key {
            "m" => {
                m = Some(value.parse::<usize>().map_err(|_| {
                    Error::InvalidParams(format!("bad m `{value}` in exhaustive spec"))
                })?)
            }
            "ell" => {
                ell = Some(value.parse::<usize>().map_err(|_| {
                    Error::InvalidParams(format!("bad ell `{value}` in exhaustive spec"))
                })?)
            }
            "universe" => {
                let (lo, hi) = value.split_once("..").ok_or_else(|| {
                    Error::InvalidParams(format!("bad universe `{value}` (expected lo..hi)"))
                })?;
                let lo: i64 = lo.parse().map_err(|_| {
                    Error::InvalidParams(format!("bad universe start `{lo}`"))
                })?;
                let hi: i64 = hi.parse().map_err(|_| {
                    Error::InvalidParams(format!("bad universe end `{hi}`"))
                })?;
                range = Some((lo, hi));
            }
            "min-size" | "min_size" => {
                min_set_size = value.parse::<usize>().map_err(|_| {
                    Error::InvalidParams(format!("bad min-size `{value}`"))
                })?
            }
            other => {
                return Err(Error::InvalidParams(format!(
                    "unknown exhaustive-spec key `{other}`"
                )))
            }
        }
    }
    let m = m.ok_or_else(|| Error::InvalidParams("exhaustive spec needs m=".into()))?;
    let ell = ell.ok_or_else(|| Error::InvalidParams("exhaustive spec needs ell=".into()))?;
    let universe = match (&model, range) {
        (GroupModel::Integers, Some((lo, hi))) if lo <= hi => {
            (lo..=hi).map(Element::Int).collect()
        }
        (GroupModel::Integers, Some(_)) => {
            return Err(Error::InvalidParams("universe range is reversed".into()))
        }
        (GroupModel::Integers, None) => {
            return Err(Error::InvalidParams(
                "integer scans need universe=lo..hi".into(),
            ))
        }
        (GroupModel::Cyclic { n }, _) => (0..*n).map(Element::Residue).collect(),
        _ => unreachable!("spec grammar only produces integers or cyclic models"),
    };
    Ok(ExhaustiveInverseParams {
        model,
        m,
        ell,
        universe,
        min_set_size,
    })
}

/// Exhaustively checks the equality ⇔ minimizing-family biconditional and
/// the structural conclusions on every instance of the given shape.
///
/// Finite models skip instances whose sum breaks the structure-theorem
/// size cap (strictly below the smallest subgroup order, minus one more
/// when the window is 2); those appear in `skips`.  On every remaining
/// instance, equality in the multiplicity bound must coincide with a
/// minimizing-family witness.  Equality instances additionally get their
/// structural conclusions re-checked: a shared-ratio family over the
/// `M`-augmented sets (torsion-free or window ≥ 3, with the union also a
/// progression), or plain per-set progressions (finite models with window
/// 2).
pub fn verify_inverse_exhaustive(params: &ExhaustiveInverseParams) -> Result<SuiteOutcome> {
    if params.ell < 2 || params.ell > params.m {
        return Err(Error::Precondition(
            "exhaustive scans need 2 <= ell <= m".into(),
        ));
    }
    let u = params.universe.len();
    if u > 20 {
        return Err(Error::BudgetExceeded(format!(
            "exhaustive universe of {u} elements is too large"
        )));
    }
    let mut pool: Vec<GSet> = Vec::new();
    for mask in 1u32..(1u32 << u) {
        if (mask.count_ones() as usize) < params.min_set_size {
            continue;
        }
        let members: Vec<Element> = (0..u)
            .filter(|&i| mask & (1 << i) != 0)
            .map(|i| params.universe[i].clone())
            .collect();
        pool.push(GSet::new(params.model.clone(), members)?);
    }
    if pool.is_empty() {
        return Err(Error::Precondition(
            "no candidate sets meet the minimum size".into(),
        ));
    }
    let total = (pool.len() as u64)
        .checked_pow(params.m as u32)
        .ok_or_else(|| Error::BudgetExceeded("instance count overflows".into()))?;
    if total > 400_000_000 {
        return Err(Error::BudgetExceeded(format!(
            "{total} instances exceed the scan budget"
        )));
    }

    let mut out = SuiteOutcome::new("inverse-exhaustive");
    let mut index = vec![0usize; params.m];
    loop {
        let sets: Vec<GSet> = index.iter().map(|&i| pool[i].clone()).collect();
        let seq = SetSequence::new(sets)?;
        out.instances += 1;
        scan_one(&mut out, &seq, params)?;

        let mut j = 0;
        loop {
            index[j] += 1;
            if index[j] < pool.len() {
                break;
            }
            index[j] = 0;
            j += 1;
            if j == params.m {
                return Ok(out);
            }
        }
    }
}

fn scan_one(
    out: &mut SuiteOutcome,
    seq: &SetSequence,
    params: &ExhaustiveInverseParams,
) -> Result<()> {
    let ell = params.ell;
    let profile = multiplicity_profile(seq, ell)?;
    let target = profile.mu_total() as i64 - ell as i64 + 1;
    let actual = generalized_sumset(seq, ell)?.len() as i64;

    if let SubgroupOrder::Finite(p) = smallest_subgroup_order(seq.model()) {
        let limit = if ell == 2 { p as i64 - 1 } else { p as i64 };
        if actual >= limit {
            out.skips += 1;
            return Ok(());
        }
    }

    let equality = actual == target;
    let witness = check_minimizing(seq, ell)?;
    if equality != witness.is_some() {
        out.violations.push(Violation {
            description: format!(
                "equality/minimizing mismatch: equality={equality}, witness={}",
                witness.is_some()
            ),
            instance: set_instance_json(seq, ell),
        });
        return Ok(());
    }
    if !equality {
        return Ok(());
    }
    out.equality_cases += 1;

    // Structural conclusions apply on strict windows.
    if ell >= seq.m() {
        return Ok(());
    }
    let m_set = profile.m_set();
    let augmented: Vec<GSet> = seq
        .sets()
        .iter()
        .map(|s| s.union(m_set))
        .collect::<Result<_>>()?;
    let finite = seq.model().is_finite();
    if !finite || ell >= 3 {
        match same_ratio_family(&augmented) {
            Some((ratio, _)) => {
                let union = seq.union();
                let reversed = group_inverse(seq.model(), &ratio)?;
                if witness_with_ratio(union, &ratio).is_none()
                    && witness_with_ratio(union, &reversed).is_none()
                {
                    out.violations.push(Violation {
                        description: "union is not a progression with the family ratio".into(),
                        instance: set_instance_json(seq, ell),
                    });
                }
            }
            None => out.violations.push(Violation {
                description: "augmented sets have no shared-ratio family".into(),
                instance: set_instance_json(seq, ell),
            }),
        }
    } else {
        for aug in &augmented {
            if aug.len() >= 2 && detect_progressions(aug).is_empty() {
                out.violations.push(Violation {
                    description: "augmented set is not a progression".into(),
                    instance: set_instance_json(seq, ell),
                });
                break;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(count: usize) -> FuzzConfig {
        FuzzConfig {
            max_m: 4,
            max_set_size: 4,
            universe: 10,
            ..FuzzConfig::seeded(7, count)
        }
    }

    #[test]
    fn bounds_suite_finds_no_violations() {
        let out = verify_bounds(&quick(200));
        assert_eq!(out.instances, 200);
        assert!(out.passed(), "violations: {:?}", out.violations);
    }

    #[test]
    fn structure_suite_finds_no_violations() {
        let out = verify_structure(&quick(200));
        assert!(out.passed(), "violations: {:?}", out.violations);
    }

    #[test]
    fn inverse_suite_finds_no_violations() {
        let out = verify_inverse(&quick(120));
        assert!(out.passed(), "violations: {:?}", out.violations);
    }

    #[test]
    fn constructions_suite_hits_every_equality_value() {
        let cfg = FuzzConfig {
            grid_total: 14,
            ..FuzzConfig::default()
        };
        let out = verify_constructions(&cfg);
        assert!(out.instances > 20);
        assert_eq!(out.equality_cases, out.instances);
        assert!(out.passed(), "violations: {:?}", out.violations);
    }

    #[test]
    fn subseq_suite_finds_no_violations() {
        let out = verify_subseq(&quick(250));
        assert!(out.passed(), "violations: {:?}", out.violations);
    }

    #[test]
    fn suite_dispatch_accepts_known_names_only() {
        let cfg = quick(5);
        assert_eq!(verify_suite("bounds", &cfg).unwrap().len(), 1);
        assert_eq!(verify_suite("all", &cfg).unwrap().len(), 5);
        assert!(verify_suite("nope", &cfg).is_err());
    }

    #[test]
    fn exhaustive_spec_grammar_parses() {
        let p = parse_exhaustive_spec("Z,m=3,ell=2,universe=0..5").unwrap();
        assert_eq!(p.model, GroupModel::Integers);
        assert_eq!(p.m, 3);
        assert_eq!(p.ell, 2);
        assert_eq!(p.universe.len(), 6);
        assert_eq!(p.min_set_size, 2);

        let p = parse_exhaustive_spec("Z7,m=2,ell=2,min-size=3").unwrap();
        assert_eq!(p.model, GroupModel::Cyclic { n: 7 });
        assert_eq!(p.universe.len(), 7);
        assert_eq!(p.min_set_size, 3);

        assert!(parse_exhaustive_spec("Q,m=2,ell=2").is_err());
        assert!(parse_exhaustive_spec("Z,m=2").is_err());
        assert!(parse_exhaustive_spec("Z,m=2,ell=2").is_err());
        assert!(parse_exhaustive_spec("Z,m=2,ell=2,universe=5..0").is_err());
    }

    #[test]
    fn small_integer_scan_is_clean() {
        let params = ExhaustiveInverseParams::integers(3, 2, 0, 3);
        let out = verify_inverse_exhaustive(&params).unwrap();
        assert!(out.passed(), "violations: {:?}", out.violations);
        assert_eq!(out.instances, 11u64.pow(3));
        assert!(out.equality_cases > 0);
    }

    #[test]
    fn small_cyclic_scan_is_clean() {
        let params = ExhaustiveInverseParams::cyclic(5, 3, 2);
        let out = verify_inverse_exhaustive(&params).unwrap();
        assert!(out.passed(), "violations: {:?}", out.violations);
        assert!(out.skips > 0);
        assert!(out.equality_cases > 0);
    }
}
