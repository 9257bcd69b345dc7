//! Shared helpers for the integration suites: a seeded generator of
//! normalized ontologies and a bounded model search used as an independent
//! entailment oracle.

#![allow(dead_code)]

use elhgeo::{
    enumerate_interpretations, Axiom, Concept, ConceptName, FiniteInterpretation,
    IndividualName, Ontology, RoleName,
};
use rand::Rng;

pub struct Envelope {
    pub concepts: usize,
    pub roles: usize,
    pub individuals: usize,
    pub axioms: usize,
}

/// ≤4 concept names, ≤2 roles, ≤3 individuals, ≤8 axioms.
pub const STANDARD: Envelope = Envelope {
    concepts: 4,
    roles: 2,
    individuals: 3,
    axioms: 8,
};

/// ≤3 concept names, ≤1 role, ≤2 individuals; small enough for exhaustive
/// model search.
pub const TINY: Envelope = Envelope {
    concepts: 3,
    roles: 1,
    individuals: 2,
    axioms: 6,
};

const CONS: [&str; 4] = ["A", "B", "C", "D"];
const ROLS: [&str; 2] = ["r", "s"];
const INDS: [&str; 3] = ["a", "b", "c"];

/// Random normalized ⊥-free ontology inside the envelope. Axioms are drawn
/// uniformly from the kinds the drawn name counts support; duplicates
/// collapse, so the result may hold fewer axioms than drawn.
pub fn random_normalized_ontology<R: Rng>(rng: &mut R, env: &Envelope) -> Ontology {
    let nc = rng.gen_range(1..=env.concepts);
    let nr = rng.gen_range(0..=env.roles);
    let ni = rng.gen_range(0..=env.individuals);
    let n_ax = rng.gen_range(1..=env.axioms);

    fn con<R: Rng>(rng: &mut R, nc: usize) -> Concept {
        Concept::Atomic(ConceptName::new(CONS[rng.gen_range(0..nc)]).unwrap())
    }
    fn rol<R: Rng>(rng: &mut R, nr: usize) -> RoleName {
        RoleName::new(ROLS[rng.gen_range(0..nr)]).unwrap()
    }
    fn ind<R: Rng>(rng: &mut R, ni: usize) -> IndividualName {
        IndividualName::new(INDS[rng.gen_range(0..ni)]).unwrap()
    }

    let mut o = Ontology::new();
    for _ in 0..n_ax {
        let ax = loop {
            match rng.gen_range(0..7u8) {
                0 => break Axiom::Ci(con(rng, nc), con(rng, nc)),
                1 => {
                    break Axiom::Ci(
                        Concept::conj(con(rng, nc), con(rng, nc)),
                        con(rng, nc),
                    )
                }
                2 if nr > 0 => {
                    break Axiom::Ci(
                        Concept::exists(rol(rng, nr), con(rng, nc)),
                        con(rng, nc),
                    )
                }
                3 if nr > 0 => {
                    break Axiom::Ci(
                        con(rng, nc),
                        Concept::exists(rol(rng, nr), con(rng, nc)),
                    )
                }
                4 if nr > 0 => break Axiom::Ri(rol(rng, nr), rol(rng, nr)),
                5 if ni > 0 => break Axiom::ConceptAssertion(con(rng, nc), ind(rng, ni)),
                6 if ni > 0 && nr > 0 => {
                    break Axiom::RoleAssertion(rol(rng, nr), ind(rng, ni), ind(rng, ni))
                }
                _ => {}
            }
        };
        o.insert(ax);
    }
    o
}

/// Every interpretation over sig(o) with domain 1..=max_domain that
/// satisfies o. Exhaustive, so only viable for tiny signatures.
pub fn satisfying_models(o: &Ontology, max_domain: usize) -> Vec<FiniteInterpretation> {
    let sig = o.signature();
    let mut out = Vec::new();
    for d in 1..=max_domain {
        for i in enumerate_interpretations(&sig, d).unwrap() {
            if i.satisfies_ontology(o).unwrap() {
                out.push(i);
            }
        }
    }
    out
}
