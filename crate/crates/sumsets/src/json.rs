//! Canonical JSON encoding of models, elements, instances, and reports.
//!
//! One instance format is shared by every command:
//! `{"model": {...}, "ell": 2, "sets": [[...], ...]}` for set sequences and
//! `{"model": {...}, "ell": 2, "sequence": [...]}` for element sequences.
//! Elements are rendered by model — integers and residues as numbers,
//! residue vectors as arrays of numbers, free-group words as arrays of
//! `[generator, exponent]` pairs — so the document carries no per-element
//! type tags and parsing is directed by the model.
//!
//! Serialization always emits sets in the canonical element order and words
//! in reduced form, so `serialize ∘ parse` is the identity on every valid
//! document up to canonicalization, and `parse ∘ serialize` is the identity
//! on all values.

use serde_json::{json, Map, Value};

use crate::bounds::{BoundReport, BoundWitness};
use crate::error::{Error, Result};
use crate::group::{push_syllable, Element, GSet, GroupModel, SubgroupOrder, Syllable};
use crate::inverse::{ExtremalReport, VosperReport};
use crate::seqset::{ElementSequence, SetSequence};
use crate::structure::ProgressionType;
use crate::subseq::{DisjunctionReport, SubseqReport};

/// A parsed problem instance: a window size plus either a set sequence or
/// an element sequence (each of which carries its group model).
#[derive(Debug, Clone)]
pub struct Instance {
    pub ell: usize,
    pub payload: Payload,
}

/// The two instance payload shapes.
#[derive(Debug, Clone)]
pub enum Payload {
    Sets(SetSequence),
    Sequence(ElementSequence),
}

impl Instance {
    /// The group model of the payload.
    pub fn model(&self) -> &GroupModel {
        match &self.payload {
            Payload::Sets(s) => s.model(),
            Payload::Sequence(s) => s.model(),
        }
    }

    /// Number of sets or terms in the payload.
    pub fn m(&self) -> usize {
        match &self.payload {
            Payload::Sets(s) => s.m(),
            Payload::Sequence(s) => s.m(),
        }
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Json(msg.into())
}

/// Renders a group model as `{"kind": ..., ...}`.
pub fn model_to_json(model: &GroupModel) -> Value {
    match model {
        GroupModel::Integers => json!({"kind": "integers"}),
        GroupModel::Cyclic { n } => json!({"kind": "cyclic", "n": n}),
        GroupModel::FiniteAbelian { moduli } => {
            json!({"kind": "finite-abelian", "moduli": moduli})
        }
        GroupModel::Free { rank } => json!({"kind": "free", "rank": rank}),
    }
}

/// Parses a group model from its JSON form and validates it.
pub fn model_from_json(value: &Value) -> Result<GroupModel> {
    let obj = value.as_object().ok_or_else(|| bad("model must be an object"))?;
    let kind = obj
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| bad("model needs a string `kind`"))?;
    let model = match kind {
        "integers" => GroupModel::Integers,
        "cyclic" => {
            let n = obj
                .get("n")
                .and_then(Value::as_u64)
                .ok_or_else(|| bad("cyclic model needs a positive integer `n`"))?;
            GroupModel::Cyclic { n }
        }
        "finite-abelian" => {
            let moduli = obj
                .get("moduli")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("finite-abelian model needs an array `moduli`"))?
                .iter()
                .map(|v| v.as_u64().ok_or_else(|| bad("moduli must be integers")))
                .collect::<Result<Vec<u64>>>()?;
            GroupModel::FiniteAbelian { moduli }
        }
        "free" => {
            let rank = obj
                .get("rank")
                .and_then(Value::as_u64)
                .ok_or_else(|| bad("free model needs a positive integer `rank`"))?;
            GroupModel::Free {
                rank: rank as usize,
            }
        }
        other => return Err(bad(format!("unknown model kind `{other}`"))),
    };
    model.validate()?;
    Ok(model)
}

/// Renders one element in its model-directed form.
pub fn element_to_json(e: &Element) -> Value {
    match e {
        Element::Int(v) => json!(v),
        Element::Residue(r) => json!(r),
        Element::ResidueVec(v) => json!(v),
        Element::Word(w) => Value::Array(
            w.iter()
                .map(|&(g, e)| json!([g, e]))
                .collect(),
        ),
    }
}

/// Parses one element of `model` from its JSON form.
///
/// Integers must fit `i64`; residues are reduced into `[0, n)` (negative
/// inputs wrap); residue vectors must match the moduli arity; words are
/// arrays of `[generator, exponent]` pairs and are reduced on the way in.
pub fn element_from_json(model: &GroupModel, value: &Value) -> Result<Element> {
    let element = match model {
        GroupModel::Integers => Element::Int(
            value
                .as_i64()
                .ok_or_else(|| bad("integer-model element must be a number"))?,
        ),
        GroupModel::Cyclic { n } => {
            let v = value
                .as_i64()
                .ok_or_else(|| bad("cyclic-model element must be a number"))?;
            Element::Residue(v.rem_euclid(*n as i64) as u64)
        }
        GroupModel::FiniteAbelian { moduli } => {
            let arr = value
                .as_array()
                .ok_or_else(|| bad("finite-abelian element must be an array"))?;
            if arr.len() != moduli.len() {
                return Err(bad(format!(
                    "residue vector has {} components, model has {}",
                    arr.len(),
                    moduli.len()
                )));
            }
            let comps = arr
                .iter()
                .zip(moduli)
                .map(|(v, &m)| {
                    let v = v
                        .as_i64()
                        .ok_or_else(|| bad("residue components must be numbers"))?;
                    Ok(v.rem_euclid(m as i64) as u64)
                })
                .collect::<Result<Vec<u64>>>()?;
            Element::ResidueVec(comps)
        }
        GroupModel::Free { .. } => {
            let arr = value
                .as_array()
                .ok_or_else(|| bad("free-group element must be an array of syllables"))?;
            let mut word: Vec<Syllable> = Vec::with_capacity(arr.len());
            for syl in arr {
                let pair = syl
                    .as_array()
                    .filter(|p| p.len() == 2)
                    .ok_or_else(|| bad("each syllable must be a [generator, exponent] pair"))?;
                let g = pair[0]
                    .as_u64()
                    .ok_or_else(|| bad("syllable generator must be a nonnegative integer"))?;
                let e = pair[1]
                    .as_i64()
                    .ok_or_else(|| bad("syllable exponent must be an integer"))?;
                push_syllable(&mut word, g as usize, e);
            }
            Element::Word(word)
        }
    };
    model.check_element(&element)?;
    Ok(element)
}

/// Renders a set as an array in the canonical element order.
pub fn gset_to_json(s: &GSet) -> Value {
    Value::Array(s.iter().map(element_to_json).collect())
}

/// Parses a set of `model` from a JSON array (duplicates collapse).
pub fn gset_from_json(model: &GroupModel, value: &Value) -> Result<GSet> {
    let arr = value
        .as_array()
        .ok_or_else(|| bad("a set must be a JSON array"))?;
    let elements = arr
        .iter()
        .map(|v| element_from_json(model, v))
        .collect::<Result<Vec<Element>>>()?;
    GSet::new(model.clone(), elements)
}

/// Renders an instance in the shared canonical format.
pub fn instance_to_json(instance: &Instance) -> Value {
    let mut obj = Map::new();
    obj.insert("model".into(), model_to_json(instance.model()));
    obj.insert("ell".into(), json!(instance.ell));
    match &instance.payload {
        Payload::Sets(seq) => {
            obj.insert(
                "sets".into(),
                Value::Array(seq.sets().iter().map(gset_to_json).collect()),
            );
        }
        Payload::Sequence(seq) => {
            obj.insert(
                "sequence".into(),
                Value::Array(seq.terms().iter().map(element_to_json).collect()),
            );
        }
    }
    Value::Object(obj)
}

/// Parses an instance from a JSON value.
pub fn instance_from_json(value: &Value) -> Result<Instance> {
    let obj = value
        .as_object()
        .ok_or_else(|| bad("instance must be an object"))?;
    let model = model_from_json(
        obj.get("model")
            .ok_or_else(|| bad("instance needs a `model`"))?,
    )?;
    let ell = obj
        .get("ell")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("instance needs a positive integer `ell`"))? as usize;
    if ell < 1 {
        return Err(bad("`ell` must be at least 1"));
    }
    let payload = match (obj.get("sets"), obj.get("sequence")) {
        (Some(sets), None) => {
            let arr = sets
                .as_array()
                .ok_or_else(|| bad("`sets` must be an array of arrays"))?;
            let sets = arr
                .iter()
                .map(|v| gset_from_json(&model, v))
                .collect::<Result<Vec<GSet>>>()?;
            Payload::Sets(SetSequence::new(sets)?)
        }
        (None, Some(seq)) => {
            let arr = seq
                .as_array()
                .ok_or_else(|| bad("`sequence` must be an array of elements"))?;
            let terms = arr
                .iter()
                .map(|v| element_from_json(&model, v))
                .collect::<Result<Vec<Element>>>()?;
            Payload::Sequence(ElementSequence::new(model.clone(), terms)?)
        }
        (Some(_), Some(_)) => {
            return Err(bad("instance cannot carry both `sets` and `sequence`"))
        }
        (None, None) => return Err(bad("instance needs either `sets` or `sequence`")),
    };
    Ok(Instance { ell, payload })
}

/// Parses an instance from JSON text.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let value: Value = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    instance_from_json(&value)
}

fn subgroup_order_to_json(order: SubgroupOrder) -> Value {
    match order {
        SubgroupOrder::Finite(p) => json!(p),
        SubgroupOrder::Infinite => Value::Null,
    }
}

/// Renders a progression type as `{"a", "g", "b", "length"}`.
pub fn progression_to_json(p: &ProgressionType) -> Value {
    json!({
        "a": element_to_json(&p.a),
        "g": element_to_json(&p.g),
        "b": element_to_json(&p.b),
        "length": p.length,
    })
}

fn bound_witness_to_json(w: &BoundWitness) -> Value {
    match w {
        BoundWitness::SizeSum { size_sum, cap } => json!({
            "type": "size-sum",
            "size_sum": size_sum,
            "cap": subgroup_order_to_json(*cap),
        }),
        BoundWitness::MuTotal { mu_total, cap } => json!({
            "type": "multiplicity-total",
            "mu_total": mu_total,
            "cap": subgroup_order_to_json(*cap),
        }),
        BoundWitness::Stabilizer {
            subgroup,
            a_plus_h,
            b_plus_h,
        } => json!({
            "type": "stabilizer",
            "subgroup": gset_to_json(subgroup),
            "a_plus_h": a_plus_h,
            "b_plus_h": b_plus_h,
        }),
        BoundWitness::CosetProfile {
            subgroup,
            coset_mu,
            coset_mu_total,
        } => json!({
            "type": "coset-profile",
            "subgroup": gset_to_json(subgroup),
            "coset_mu": coset_mu,
            "coset_mu_total": coset_mu_total,
        }),
        BoundWitness::Disjunction {
            size_holds,
            power_holds,
            power_index,
            power_value,
        } => json!({
            "type": "disjunction",
            "size_holds": size_holds,
            "power_holds": power_holds,
            "power_index": power_index,
            "power_value": power_value.as_ref().map(element_to_json),
        }),
    }
}

/// Renders a bound evaluation as
/// `{"bound", "value", "actual", "slack", "witness"}`.
pub fn bound_report_to_json(r: &BoundReport) -> Value {
    json!({
        "bound": r.bound_name.as_str(),
        "value": r.bound_value,
        "actual": r.actual_size,
        "slack": r.slack,
        "witness": r.witness.as_ref().map(bound_witness_to_json),
    })
}

/// Renders an extremal classification with its structural witnesses.
pub fn extremal_report_to_json(r: &ExtremalReport) -> Value {
    json!({
        "bound": bound_report_to_json(&r.bound),
        "equality": r.equality,
        "caps_ok": r.caps_ok,
        "applicable_theorems": r.applicable,
        "hypothesis_failures": r.hypothesis_failures,
        "witnesses": {
            "family": r.family.as_ref().map(|f| json!({
                "ratio": element_to_json(&f.ratio),
                "types": f.types.iter().map(progression_to_json).collect::<Vec<_>>(),
            })),
            "per_set": r.per_set_gp.as_ref().map(|types| {
                types.iter().map(progression_to_json).collect::<Vec<_>>()
            }),
            "union": r.union_gp.as_ref().map(progression_to_json),
            "chain": r.chain.as_ref().map(|c| json!({
                "k": c.k,
                "ratio": c.ratio.as_ref().map(element_to_json),
                "types": c.types.iter().map(progression_to_json).collect::<Vec<_>>(),
                "linked": c.linked,
            })),
        },
    })
}

/// Renders a two-set (or multi-set) pair classification.
pub fn vosper_report_to_json(r: &VosperReport) -> Value {
    json!({
        "equality": r.equality,
        "applicable": r.applicable,
        "hypothesis_failures": r.hypothesis_failures,
        "witnesses": {
            "ratio": r.ratio.as_ref().map(element_to_json),
            "types": r.types.iter().map(progression_to_json).collect::<Vec<_>>(),
        },
    })
}

/// Renders a subsequence-sum classification.
pub fn subseq_report_to_json(r: &SubseqReport) -> Value {
    json!({
        "mu_total": r.mu_total,
        "actual": r.actual_size,
        "target": r.target,
        "equality": r.equality,
        "caps_ok": r.caps_ok,
        "applicable": r.applicable,
        "hypothesis_failures": r.hypothesis_failures,
        "witnesses": {
            "progression": r.ap_witness.as_ref().map(progression_to_json),
            "blocks": r.blocks.as_ref().map(|b| json!({
                "x_sets": b.x_sets.iter().map(gset_to_json).collect::<Vec<_>>(),
                "r": b.r,
            })),
        },
    })
}

/// Renders a size-or-membership disjunction outcome.
pub fn disjunction_to_json(r: &DisjunctionReport) -> Value {
    json!({
        "bound_value": r.bound_value,
        "actual": r.actual_size,
        "size_arm": r.size_arm,
        "member_arm": r.member_arm.as_ref().map(element_to_json),
        "holds": r.holds(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roundtrip_model(model: GroupModel) {
        let rendered = model_to_json(&model);
        assert_eq!(model_from_json(&rendered).unwrap(), model);
    }

    #[test]
    fn models_round_trip() {
        roundtrip_model(GroupModel::Integers);
        roundtrip_model(GroupModel::Cyclic { n: 7 });
        roundtrip_model(GroupModel::FiniteAbelian {
            moduli: vec![2, 4],
        });
        roundtrip_model(GroupModel::Free { rank: 2 });
    }

    #[test]
    fn model_parse_rejects_malformed_input() {
        assert!(model_from_json(&json!({"kind": "ring"})).is_err());
        assert!(model_from_json(&json!({"kind": "cyclic"})).is_err());
        assert!(model_from_json(&json!("cyclic")).is_err());
        // Structural validity is also enforced (moduli must be >= 2).
        assert!(model_from_json(&json!({"kind": "finite-abelian", "moduli": [1]})).is_err());
    }

    #[test]
    fn elements_round_trip_per_model() {
        let z = GroupModel::Integers;
        let e = element_from_json(&z, &json!(-3)).unwrap();
        assert_eq!(e, Element::Int(-3));
        assert_eq!(element_to_json(&e), json!(-3));

        let c = GroupModel::Cyclic { n: 7 };
        assert_eq!(
            element_from_json(&c, &json!(-1)).unwrap(),
            Element::Residue(6)
        );

        let fa = GroupModel::FiniteAbelian {
            moduli: vec![2, 4],
        };
        let e = element_from_json(&fa, &json!([1, 5])).unwrap();
        assert_eq!(e, Element::ResidueVec(vec![1, 1]));
        assert!(element_from_json(&fa, &json!([1])).is_err());

        let free = GroupModel::Free { rank: 2 };
        let e = element_from_json(&free, &json!([[0, 1], [1, -2]])).unwrap();
        assert_eq!(e, Element::Word(vec![(0, 1), (1, -2)]));
        assert_eq!(element_to_json(&e), json!([[0, 1], [1, -2]]));
        // Adjacent syllables over one generator merge on the way in.
        let merged = element_from_json(&free, &json!([[0, 1], [0, 1]])).unwrap();
        assert_eq!(merged, Element::Word(vec![(0, 2)]));
        // Cancelling syllables reduce to the identity (empty word).
        let identity = element_from_json(&free, &json!([[0, 1], [0, -1]])).unwrap();
        assert_eq!(identity, Element::Word(vec![]));
        // Out-of-range generators are rejected.
        assert!(element_from_json(&free, &json!([[2, 1]])).is_err());
    }

    #[test]
    fn sets_serialize_in_canonical_order() {
        let s = GSet::new(
            GroupModel::Integers,
            vec![Element::Int(3), Element::Int(1), Element::Int(2)],
        )
        .unwrap();
        assert_eq!(gset_to_json(&s), json!([1, 2, 3]));
    }

    #[test]
    fn set_instance_round_trips() {
        let text = r#"{"model":{"kind":"cyclic","n":7},"ell":2,"sets":[[0,1],[2,3],[5,6]]}"#;
        let instance = parse_instance(text).unwrap();
        assert_eq!(instance.ell, 2);
        assert_eq!(instance.m(), 3);
        assert_eq!(instance.model(), &GroupModel::Cyclic { n: 7 });
        let rendered = instance_to_json(&instance);
        let reparsed = instance_from_json(&rendered).unwrap();
        assert_eq!(instance_to_json(&reparsed), rendered);
        match (&instance.payload, &reparsed.payload) {
            (Payload::Sets(a), Payload::Sets(b)) => assert_eq!(a.sets(), b.sets()),
            _ => panic!("payload kind changed across the round trip"),
        }
    }

    #[test]
    fn sequence_instance_round_trips() {
        let text = r#"{"model":{"kind":"integers"},"ell":2,"sequence":[1,1,2,2,3]}"#;
        let instance = parse_instance(text).unwrap();
        assert_eq!(instance.m(), 5);
        let rendered = instance_to_json(&instance);
        let reparsed = instance_from_json(&rendered).unwrap();
        match (&instance.payload, &reparsed.payload) {
            (Payload::Sequence(a), Payload::Sequence(b)) => assert_eq!(a.terms(), b.terms()),
            _ => panic!("payload kind changed across the round trip"),
        }
        assert_eq!(instance_to_json(&reparsed), rendered);
    }

    #[test]
    fn instance_parse_rejects_malformed_payloads() {
        assert!(parse_instance("not json").is_err());
        assert!(parse_instance(r#"{"model":{"kind":"integers"},"ell":2}"#).is_err());
        assert!(parse_instance(
            r#"{"model":{"kind":"integers"},"ell":2,"sets":[[0]],"sequence":[0]}"#
        )
        .is_err());
        assert!(parse_instance(r#"{"model":{"kind":"integers"},"ell":0,"sets":[[0]]}"#).is_err());
        // Elements must belong to the declared model.
        assert!(parse_instance(
            r#"{"model":{"kind":"integers"},"ell":1,"sequence":[[0,1]]}"#
        )
        .is_err());
    }

    #[test]
    fn bound_report_uses_the_pinned_keys() {
        use crate::bounds::kemperman_tf_bound;
        use crate::seqset::SetSequence;

        let sets = vec![
            GSet::new(GroupModel::Integers, vec![Element::Int(0), Element::Int(1)]).unwrap(),
            GSet::new(GroupModel::Integers, vec![Element::Int(0), Element::Int(2)]).unwrap(),
        ];
        let seq = SetSequence::new(sets).unwrap();
        let report = kemperman_tf_bound(&seq).unwrap();
        let value = bound_report_to_json(&report);
        let obj = value.as_object().unwrap();
        for key in ["bound", "value", "actual", "slack", "witness"] {
            assert!(obj.contains_key(key), "missing key {key}");
        }
        assert_eq!(obj["bound"], json!("kemperman-tf"));
    }

    #[test]
    fn report_serializers_cover_witness_payloads() {
        use crate::inverse::classify_extremal;
        use crate::seqset::SetSequence;

        // An extremal integer instance: both sets are [0,1], window 2.
        let sets = vec![
            GSet::new(GroupModel::Integers, vec![Element::Int(0), Element::Int(1)]).unwrap(),
            GSet::new(GroupModel::Integers, vec![Element::Int(0), Element::Int(1)]).unwrap(),
        ];
        let seq = SetSequence::new(sets).unwrap();
        let report = classify_extremal(&seq, 2).unwrap();
        let value = extremal_report_to_json(&report);
        assert_eq!(value["equality"], json!(true));
        assert!(value["witnesses"]["family"].is_object());

        let seq = crate::seqset::ElementSequence::new(
            GroupModel::Integers,
            vec![
                Element::Int(0),
                Element::Int(0),
                Element::Int(1),
                Element::Int(1),
            ],
        )
        .unwrap();
        let report = crate::subseq::subseq_inverse_check(&seq, 2).unwrap();
        let value = subseq_report_to_json(&report);
        assert_eq!(value["equality"], json!(true));
        assert!(value["witnesses"]["progression"].is_object());
        assert_eq!(value["witnesses"]["blocks"]["r"], json!(2));

        let report = crate::subseq::subseq_disjunction(&seq, 2).unwrap();
        let value = disjunction_to_json(&report);
        assert_eq!(value["holds"], json!(true));
    }
}
