//! The finite canonical model I_O of a normalized ontology.
//!
//! The domain has one element per ABox individual plus one unnamed element
//! c_D for every D among: ⊤, each concept name, each ordered pair A1⊓A2 of
//! concept names, and each ∃r.B with B a concept name or ⊤. Its size is
//! therefore |N_I| + (|N_C|+1) + |N_C|² + |N_R|·(|N_C|+1). Memberships and
//! edges are defined entirely by entailment tests, which the saturation
//! answers.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::Result;
use crate::faithfulness::axiom_universe;
use crate::interp::FiniteInterpretation;
use crate::ontology::{Axiom, Concept, ConceptName, IndividualName, Ontology, RoleName};
use crate::reasoner::Saturation;

/// ∃-filler in an unnamed element: a concept name or ⊤. ⊤ sorts after all
/// names, which fixes the element order below.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Filler {
    Name(ConceptName),
    Top,
}

impl Filler {
    fn concept(&self) -> Concept {
        match self {
            Filler::Name(a) => Concept::Atomic(a.clone()),
            Filler::Top => Concept::Top,
        }
    }
}

/// A canonical-domain element. The derived order is the documented element
/// order: named individuals first (alphabetical), then c_⊤, the c_A
/// alphabetically, the c_{A1⊓A2} lexicographically, and the c_{∃r.B}
/// lexicographically by (r, B).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum CanonicalElement {
    Named(IndividualName),
    CTop,
    CAtom(ConceptName),
    CConj(ConceptName, ConceptName),
    CExists(RoleName, Filler),
}

impl CanonicalElement {
    /// The concept D of an unnamed element c_D; None for individuals.
    fn concept(&self) -> Option<Concept> {
        match self {
            CanonicalElement::Named(_) => None,
            CanonicalElement::CTop => Some(Concept::Top),
            CanonicalElement::CAtom(a) => Some(Concept::Atomic(a.clone())),
            CanonicalElement::CConj(a1, a2) => Some(Concept::conj(
                Concept::Atomic(a1.clone()),
                Concept::Atomic(a2.clone()),
            )),
            CanonicalElement::CExists(r, f) => Some(Concept::exists(r.clone(), f.concept())),
        }
    }
}

impl fmt::Display for CanonicalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CanonicalElement::Named(a) => write!(f, "{a}"),
            other => write!(f, "c_{}", other.concept().expect("unnamed")),
        }
    }
}

/// The canonical domain in its fixed order; element ids are positions.
pub fn canonical_elements(o: &Ontology) -> Vec<CanonicalElement> {
    let sig = o.signature();
    let mut v = Vec::new();
    for a in &sig.individuals {
        v.push(CanonicalElement::Named(a.clone()));
    }
    v.push(CanonicalElement::CTop);
    for a in &sig.concepts {
        v.push(CanonicalElement::CAtom(a.clone()));
    }
    for a1 in &sig.concepts {
        for a2 in &sig.concepts {
            v.push(CanonicalElement::CConj(a1.clone(), a2.clone()));
        }
    }
    for r in &sig.roles {
        for b in &sig.concepts {
            v.push(CanonicalElement::CExists(r.clone(), Filler::Name(b.clone())));
        }
        v.push(CanonicalElement::CExists(r.clone(), Filler::Top));
    }
    debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
    v
}

/// Builds I_O. Every membership comes from an entailment test:
/// individuals satisfy A iff O ⊨ A(a); unnamed c_D satisfy A iff T ⊨ D⊑A.
/// Role edges come from the four clauses: O ⊨ r(a,b); O ⊨ (∃r.B)(a) for
/// (a, c_B); T ⊨ s⊑r for (c_{∃s.B}, c_B); and T ⊨ D⊑A, T ⊨ A⊑∃r.B for some
/// concept name A, giving (c_D, c_B).
pub fn build_canonical(o: &Ontology) -> Result<FiniteInterpretation> {
    o.ensure_bottom_free()?;
    let sat = Saturation::of(o)?;
    let sig = o.signature();
    let elements = canonical_elements(o);
    let id: BTreeMap<CanonicalElement, usize> = elements
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, e)| (e, i))
        .collect();

    let mut interp = FiniteInterpretation::new(elements.len())?;
    for a in &sig.individuals {
        let e = id[&CanonicalElement::Named(a.clone())];
        interp.set_individual(a.clone(), e)?;
    }

    // {A ∈ N_C | T ⊨ D ⊑ A} for every unnamed element c_D
    let mut supers: Vec<Option<Vec<ConceptName>>> = Vec::with_capacity(elements.len());
    for element in &elements {
        supers.push(match element.concept() {
            None => None,
            Some(d) => {
                let mut ups = Vec::new();
                for a in &sig.concepts {
                    let q = Axiom::Ci(d.clone(), Concept::Atomic(a.clone()));
                    if sat.entails_extended(&q)? {
                        ups.push(a.clone());
                    }
                }
                Some(ups)
            }
        });
    }

    let mut fillers: Vec<Filler> = sig.concepts.iter().cloned().map(Filler::Name).collect();
    fillers.push(Filler::Top);
    let filler_id = |f: &Filler| match f {
        Filler::Name(b) => id[&CanonicalElement::CAtom(b.clone())],
        Filler::Top => id[&CanonicalElement::CTop],
    };

    for a in &sig.concepts {
        interp.declare_concept(a.clone());
    }
    for (i, element) in elements.iter().enumerate() {
        match (element, &supers[i]) {
            (CanonicalElement::Named(x), None) => {
                for a in &sig.concepts {
                    let q = Axiom::ConceptAssertion(Concept::Atomic(a.clone()), x.clone());
                    if sat.entails(&q)? {
                        interp.insert_concept(a.clone(), i)?;
                    }
                }
            }
            (_, Some(ups)) => {
                for a in ups {
                    interp.insert_concept(a.clone(), i)?;
                }
            }
            _ => unreachable!("supers computed exactly for unnamed elements"),
        }
    }

    for r in &sig.roles {
        interp.declare_role(r.clone());

        for a in &sig.individuals {
            let ai = id[&CanonicalElement::Named(a.clone())];
            for b in &sig.individuals {
                let q = Axiom::RoleAssertion(r.clone(), a.clone(), b.clone());
                if sat.entails(&q)? {
                    interp.insert_role(r.clone(), ai, id[&CanonicalElement::Named(b.clone())])?;
                }
            }
            for f in &fillers {
                let q = Axiom::ConceptAssertion(
                    Concept::exists(r.clone(), f.concept()),
                    a.clone(),
                );
                if sat.entails_extended(&q)? {
                    interp.insert_role(r.clone(), ai, filler_id(f))?;
                }
            }
        }

        for element in &elements {
            if let CanonicalElement::CExists(s, f) = element {
                if sat.entails(&Axiom::Ri(s.clone(), r.clone()))? {
                    interp.insert_role(r.clone(), id[element], filler_id(f))?;
                }
            }
        }

        for (i, ups) in supers.iter().enumerate() {
            let Some(ups) = ups else { continue };
            for f in &fillers {
                let fi = filler_id(f);
                let hit = ups.iter().any(|a| {
                    let q = Axiom::Ci(
                        Concept::Atomic(a.clone()),
                        Concept::exists(r.clone(), f.concept()),
                    );
                    sat.entails_extended(&q).expect("shallow query")
                });
                if hit {
                    interp.insert_role(r.clone(), i, fi)?;
                }
            }
        }
    }

    Ok(interp)
}

/// A verdict disagreement between the model and the reasoner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disagreement {
    pub axiom: Axiom,
    pub in_model: bool,
    pub entailed: bool,
}

/// Checks that `i` satisfies exactly the entailed normal-form axioms over
/// sig(o). Expected empty when `i` is the canonical model.
pub fn verify_canonical(o: &Ontology, i: &FiniteInterpretation) -> Result<Vec<Disagreement>> {
    let sat = Saturation::of(o)?;
    let mut out = Vec::new();
    for axiom in axiom_universe(&o.signature()) {
        let in_model = i.satisfies(&axiom)?;
        let entailed = sat.entails(&axiom)?;
        if in_model != entailed {
            out.push(Disagreement {
                axiom,
                in_model,
                entailed,
            });
        }
    }
    Ok(out)
}
