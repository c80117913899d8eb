//! Frame-by-frame checks of the standard axiom/frame-property pairings and
//! of the Barcan formulas against domain monotonicity.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::error::Result;
use crate::formula::Formula;
use crate::model::{
    domain_monotonicity, DomainFrame, DomainMode, FoModel, Frame, FrameProperty, Monotonicity,
    PropModel, WorldSet,
};
use crate::parser::parse;
use crate::semantics::{fo_scheme_valid, frame_valid, meta_implies, Budget, Verdict, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AxiomId {
    K,
    T,
    Four,
    B,
    D,
    Five,
    N,
    BF,
    CBF,
}

impl AxiomId {
    pub const ALL: [AxiomId; 9] = [
        AxiomId::K,
        AxiomId::T,
        AxiomId::Four,
        AxiomId::B,
        AxiomId::D,
        AxiomId::Five,
        AxiomId::N,
        AxiomId::BF,
        AxiomId::CBF,
    ];

    /// The axioms reported per frame.
    pub const PROPOSITIONAL: [AxiomId; 7] = [
        AxiomId::K,
        AxiomId::T,
        AxiomId::Four,
        AxiomId::B,
        AxiomId::D,
        AxiomId::Five,
        AxiomId::N,
    ];

    pub fn key(self) -> &'static str {
        match self {
            AxiomId::K => "K",
            AxiomId::T => "T",
            AxiomId::Four => "4",
            AxiomId::B => "B",
            AxiomId::D => "D",
            AxiomId::Five => "5",
            AxiomId::N => "N",
            AxiomId::BF => "BF",
            AxiomId::CBF => "CBF",
        }
    }

    /// Scheme text; for N, the conclusion of the rule from premise `P`.
    pub fn scheme_text(self) -> &'static str {
        match self {
            AxiomId::K => "[](P => Q) => ([]P => []Q)",
            AxiomId::T => "[]P => P",
            AxiomId::Four => "[]P => [][]P",
            AxiomId::B => "P => []<>P",
            AxiomId::D => "[]P => <>P",
            AxiomId::Five => "<>P => []<>P",
            AxiomId::N => "[]P",
            AxiomId::BF => "(forall x. []P(x)) => [] forall x. P(x)",
            AxiomId::CBF => "[](forall x. P(x)) => forall x. []P(x)",
        }
    }

    pub fn scheme(self) -> Formula {
        parse(self.scheme_text()).expect("built-in schemes parse")
    }

    /// The frame property the axiom corresponds to, if any.
    pub fn property(self) -> Option<FrameProperty> {
        match self {
            AxiomId::T => Some(FrameProperty::Reflexive),
            AxiomId::Four => Some(FrameProperty::Transitive),
            AxiomId::B => Some(FrameProperty::Symmetric),
            AxiomId::D => Some(FrameProperty::Serial),
            AxiomId::Five => Some(FrameProperty::Euclidean),
            _ => None,
        }
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl std::str::FromStr for AxiomId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        AxiomId::ALL
            .into_iter()
            .find(|a| a.key() == s)
            .ok_or_else(|| format!("unknown axiom `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomEntry {
    pub verdict: Verdict,
    /// Truth of the corresponding frame property, when there is one.
    pub property: Option<bool>,
    /// Whether the verdict agrees with the property (or, without one,
    /// whether the axiom holds as it must).
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub frame: Frame,
    pub entries: BTreeMap<AxiomId, AxiomEntry>,
    pub properties: BTreeMap<FrameProperty, bool>,
}

impl AxiomReport {
    pub fn consistent(&self) -> bool {
        self.entries.values().all(|e| e.consistent)
    }

    pub fn all_hold(&self) -> bool {
        self.entries.values().all(|e| e.verdict.holds)
    }

    pub fn to_json(&self) -> Value {
        let axioms: serde_json::Map<_, _> = self
            .entries
            .iter()
            .map(|(id, e)| {
                let mut o = json!({
                    "holds": e.verdict.holds,
                    "property": e.property,
                    "property_name": id.property().map(|p| p.name()),
                    "consistent": e.consistent,
                });
                if let Some(w) = &e.verdict.witness {
                    o["witness"] = w.to_json(&self.frame, None);
                }
                (id.key().to_string(), o)
            })
            .collect();
        let properties: serde_json::Map<_, _> = self
            .properties
            .iter()
            .map(|(p, &b)| (p.name().to_string(), json!(b)))
            .collect();
        json!({ "axioms": axioms, "properties": properties, "consistent": self.consistent() })
    }
}

/// Frame validity of each standard axiom next to its frame property.
///
/// N is a rule, so it is checked in its meta form (`P` valid implies `[]P`
/// valid) over every instantiation of `P` on the frame.
pub fn axiom_report(fr: &Frame, budget: &Budget) -> Result<AxiomReport> {
    let mut entries = BTreeMap::new();
    for id in AxiomId::PROPOSITIONAL {
        let verdict = if id == AxiomId::N {
            let m = PropModel::empty(fr.clone());
            meta_implies(
                &m,
                &[Formula::scheme("P").expect("valid name")],
                &id.scheme(),
                budget,
            )?
        } else {
            frame_valid(fr, &id.scheme(), budget)?
        };
        let property = id.property().map(|p| fr.has(p));
        let consistent = property.map_or(verdict.holds, |p| p == verdict.holds);
        entries.insert(
            id,
            AxiomEntry {
                verdict,
                property,
                consistent,
            },
        );
    }
    let properties = FrameProperty::ALL
        .into_iter()
        .map(|p| (p, fr.has(p)))
        .collect();
    Ok(AxiomReport {
        frame: fr.clone(),
        entries,
        properties,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BarcanReport {
    pub dframe: DomainFrame,
    pub bf: Verdict,
    pub cbf: Verdict,
    pub monotonicity: Monotonicity,
    pub symmetric: bool,
    /// BF holds iff domains are nonincreasing.
    pub bf_consistent: bool,
    /// CBF holds iff domains are nondecreasing.
    pub cbf_consistent: bool,
    /// On a symmetric frame, BF and CBF agree.
    pub symmetric_consistent: bool,
}

impl BarcanReport {
    pub fn consistent(&self) -> bool {
        self.bf_consistent && self.cbf_consistent && self.symmetric_consistent
    }

    pub fn to_json(&self) -> Value {
        let fr = &self.dframe.frame;
        let verdict = |v: &Verdict| {
            let mut o = json!({ "holds": v.holds });
            if let Some(w) = &v.witness {
                o["witness"] = w.to_json(fr, Some(&self.dframe));
            }
            o
        };
        json!({
            "BF": verdict(&self.bf),
            "CBF": verdict(&self.cbf),
            "monotonicity": self.monotonicity,
            "symmetric": self.symmetric,
            "consistency": {
                "bf_iff_nonincreasing": self.bf_consistent,
                "cbf_iff_nondecreasing": self.cbf_consistent,
                "symmetric_bf_iff_cbf": self.symmetric_consistent,
            },
            "consistent": self.consistent(),
        })
    }
}

/// BF and CBF on a varying-domain frame, each checked over every
/// interpretation of `P`, against the monotonicity of the domains.
pub fn barcan_report(df: &DomainFrame, budget: &Budget) -> Result<BarcanReport> {
    let fm = FoModel::skeleton(df.clone(), DomainMode::Varying)?;
    let bf = fo_scheme_valid(&fm, &AxiomId::BF.scheme(), "P", budget)?;
    let cbf = fo_scheme_valid(&fm, &AxiomId::CBF.scheme(), "P", budget)?;
    let monotonicity = domain_monotonicity(df);
    let symmetric = df.frame.has(FrameProperty::Symmetric);
    Ok(BarcanReport {
        bf_consistent: bf.holds == monotonicity.nonincreasing,
        cbf_consistent: cbf.holds == monotonicity.nondecreasing,
        symmetric_consistent: !symmetric || bf.holds == cbf.holds,
        dframe: df.clone(),
        bf,
        cbf,
        monotonicity,
        symmetric,
    })
}

/// The least refutation of `scheme` on `fr`, if the scheme is not frame
/// valid.
pub fn refute_on_frame(fr: &Frame, scheme: &Formula, budget: &Budget) -> Result<Option<Witness>> {
    Ok(frame_valid(fr, scheme, budget)?.witness)
}

/// Worlds that do not access themselves.
pub fn irreflexive_points(fr: &Frame) -> Vec<usize> {
    (0..fr.len()).filter(|&w| !fr.accessible(w, w)).collect()
}

/// Every world except `w`: true at all successors of an irreflexive `w`
/// but false at `w` itself, so it refutes `[]P => P` there.
pub fn complement_of(fr: &Frame, w: usize) -> WorldSet {
    WorldSet(fr.all().0 & !(1 << w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{default_element_names, default_world_names};
    use crate::semantics::Instance;

    fn frame(n: usize, pairs: &[(usize, usize)]) -> Frame {
        let mut succ = vec![WorldSet::EMPTY; n];
        for &(i, j) in pairs {
            succ[i].insert(j);
        }
        Frame::from_successors(default_world_names(n), succ).unwrap()
    }

    fn holds(r: &AxiomReport, id: AxiomId) -> bool {
        r.entries[&id].verdict.holds
    }

    #[test]
    fn schemes_parse_closed() {
        for id in AxiomId::ALL {
            let f = id.scheme();
            assert!(f.is_closed(), "{id}");
            let expected: &[&str] = match id {
                AxiomId::K => &["P", "Q"],
                AxiomId::BF | AxiomId::CBF => &[],
                _ => &["P"],
            };
            assert_eq!(
                f.scheme_vars().into_iter().collect::<Vec<_>>(),
                expected,
                "{id}"
            );
        }
    }

    #[test]
    fn total_two_worlds() {
        let r = axiom_report(
            &Frame::total(default_world_names(2)).unwrap(),
            &Budget::default(),
        )
        .unwrap();
        assert!(r.all_hold() && r.consistent());
        assert!(r.properties[&FrameProperty::Equivalence]);
    }

    #[test]
    fn lone_irreflexive_world() {
        let r = axiom_report(&frame(1, &[]), &Budget::default()).unwrap();
        assert!(!holds(&r, AxiomId::D) && !holds(&r, AxiomId::T));
        assert!(holds(&r, AxiomId::Four) && holds(&r, AxiomId::B) && holds(&r, AxiomId::Five));
        assert!(r.consistent());
    }

    #[test]
    fn swap_pair() {
        let r = axiom_report(&frame(2, &[(0, 1), (1, 0)]), &Budget::default()).unwrap();
        assert!(holds(&r, AxiomId::B));
        assert!(!holds(&r, AxiomId::T) && !holds(&r, AxiomId::Five));
        assert!(r.consistent());
        let json = r.to_json();
        assert_eq!(json["axioms"]["5"]["holds"], false);
        assert_eq!(json["axioms"]["5"]["property_name"], "euclidean");
        assert!(json["axioms"]["5"]["witness"]["instantiation"]["P"].is_array());
        assert!(json["axioms"]["K"]["property"].is_null());
    }

    #[test]
    fn barcan_examples() {
        let b = Budget::default();
        let dom = default_element_names(2);
        let constant = barcan_report(
            &DomainFrame::constant(frame(2, &[(0, 1)]), dom.clone()).unwrap(),
            &b,
        )
        .unwrap();
        assert!(constant.bf.holds && constant.cbf.holds && constant.consistent());

        let shrink = barcan_report(
            &DomainFrame::new(frame(2, &[(0, 1)]), dom.clone(), vec![0b11, 0b01]).unwrap(),
            &b,
        )
        .unwrap();
        assert!(shrink.bf.holds && !shrink.cbf.holds && shrink.consistent());

        let clique = DomainFrame::new(
            Frame::total(default_world_names(2)).unwrap(),
            dom,
            vec![0b11, 0b01],
        )
        .unwrap();
        let r = barcan_report(&clique, &b).unwrap();
        assert!(!r.bf.holds && !r.cbf.holds && r.consistent());
    }

    #[test]
    fn refutations() {
        let b = Budget::default();
        let t = AxiomId::T.scheme();
        assert_eq!(
            refute_on_frame(&frame(2, &[(0, 0), (1, 1), (0, 1)]), &t, &b).unwrap(),
            None
        );
        let fr = frame(3, &[(0, 0), (1, 2), (2, 2), (2, 1)]);
        let w = refute_on_frame(&fr, &t, &b).unwrap().unwrap();
        assert_eq!(w.world, 1);
        assert!(w.refutes(&PropModel::empty(fr.clone()), &t).unwrap());
        let m = PropModel::empty(fr.clone());
        let inst = Instance::with_schemes(&m, &[("P".into(), complement_of(&fr, 1))]);
        assert!(!crate::semantics::eval(&inst, &t, 1, &Default::default()).unwrap());
        for bits in 0..16 {
            assert_eq!(
                refute_on_frame(
                    &Frame::from_relation_bits(2, bits),
                    &AxiomId::K.scheme(),
                    &b
                )
                .unwrap(),
                None
            );
        }
    }
}
