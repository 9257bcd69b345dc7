//! Structural normalization of bottom-free ELH ontologies.
//!
//! The output TBox contains only CIs of the shapes A⊑B, A1⊓A2⊑B, ∃r.A⊑B,
//! A⊑∃r.B (plus role inclusions); the output ABox only atomic concept
//! assertions and role assertions. Complex subconcepts are replaced by
//! fresh definitional names with the reserved prefix `N_`, and every
//! definition is emitted in both directions (N⊑C and C⊑N) so entailments
//! over the original signature are preserved exactly. Already-normal input
//! passes through unchanged, which makes the transformation idempotent.
//!
//! ⊤ is compiled away: a fresh name T replaces every occurrence, and the
//! axioms A⊑T (input concept names), N⊑T (fresh names), T(a) (input
//! individuals), and ∃r.T⊑T (input roles) force T to behave like the whole
//! domain wherever entailment over the input signature can look. Any model
//! of the input extends to one of the output by reading T as the domain,
//! and the added axioms keep every element the completion rules can reach
//! inside T, so the two ontologies agree on normal-form consequences over
//! the input signature.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::ontology::{
    is_normal_form_ci, Axiom, Concept, ConceptName, Ontology,
};

/// Prefix of generated concept names. User input may mention such names;
/// the counter starts above the largest one so reruns never collide.
pub const FRESH_PREFIX: &str = "N_";

struct Normalizer {
    counter: usize,
    names: BTreeMap<Concept, ConceptName>,
    top_name: Option<ConceptName>,
    out: Vec<Axiom>,
}

impl Normalizer {
    fn fresh(&mut self) -> ConceptName {
        let name = ConceptName::new(format!("{FRESH_PREFIX}{}", self.counter))
            .expect("generated names are valid");
        self.counter += 1;
        name
    }

    /// Name for a complex subconcept, allocating and defining it on first
    /// use. Definitions go both ways; under ⊤ elimination the name is also
    /// pinned under T.
    fn name_for(&mut self, c: &Concept) -> ConceptName {
        if let Some(n) = self.names.get(c) {
            return n.clone();
        }
        let n = self.fresh();
        self.names.insert(c.clone(), n.clone());
        if let Some(t) = self.top_name.clone() {
            self.out
                .push(Axiom::Ci(Concept::Atomic(n.clone()), Concept::Atomic(t)));
        }
        let named = Concept::Atomic(n.clone());
        self.ci(named.clone(), c.clone());
        self.ci(c.clone(), named);
        n
    }

    fn ci(&mut self, lhs: Concept, rhs: Concept) {
        let ax = Axiom::Ci(lhs, rhs);
        if is_normal_form_ci(&ax) {
            self.out.push(ax);
            return;
        }
        let Axiom::Ci(lhs, rhs) = ax else { unreachable!() };
        match rhs {
            Concept::Conj(d1, d2) => {
                self.ci(lhs.clone(), *d1);
                self.ci(lhs, *d2);
            }
            Concept::Exists(r, f) if !f.is_atomic() => {
                let named = Concept::Atomic(self.name_for(&f));
                self.ci(lhs, Concept::Exists(r, Box::new(named)));
            }
            rhs @ Concept::Exists(..) => {
                // atomic filler, so the left side must be complex
                let named = Concept::Atomic(self.name_for(&lhs));
                self.ci(named, rhs);
            }
            rhs @ Concept::Atomic(_) => match lhs {
                Concept::Conj(l1, l2) => {
                    let l1 = self.atomized(*l1);
                    let l2 = self.atomized(*l2);
                    self.ci(Concept::conj(l1, l2), rhs);
                }
                Concept::Exists(r, f) => {
                    let f = self.atomized(*f);
                    self.ci(Concept::Exists(r, Box::new(f)), rhs);
                }
                _ => unreachable!("atomic⊑atomic is normal, ⊤ and ⊥ are gone"),
            },
            Concept::Top | Concept::Bottom => {
                unreachable!("⊤ was eliminated and ⊥ rejected before this point")
            }
        }
    }

    fn atomized(&mut self, c: Concept) -> Concept {
        if c.is_atomic() {
            c
        } else {
            Concept::Atomic(self.name_for(&c))
        }
    }
}

fn replace_top(c: &Concept, t: &ConceptName) -> Concept {
    match c {
        Concept::Top => Concept::Atomic(t.clone()),
        Concept::Bottom | Concept::Atomic(_) => c.clone(),
        Concept::Conj(l, r) => Concept::conj(replace_top(l, t), replace_top(r, t)),
        Concept::Exists(role, f) => Concept::exists(role.clone(), replace_top(f, t)),
    }
}

fn largest_fresh_suffix(o: &Ontology) -> Option<usize> {
    o.signature()
        .concepts
        .iter()
        .filter_map(|n| {
            let suffix = n.as_str().strip_prefix(FRESH_PREFIX)?;
            if !suffix.is_empty() && suffix.bytes().all(|b| b.is_ascii_digit()) {
                suffix.parse().ok()
            } else {
                None
            }
        })
        .max()
}

pub fn normalize(o: &Ontology) -> Result<Ontology> {
    o.ensure_bottom_free()?;
    let sig = o.signature();
    let mut norm = Normalizer {
        counter: largest_fresh_suffix(o).map_or(0, |m| m + 1),
        names: BTreeMap::new(),
        top_name: None,
        out: Vec::new(),
    };

    let mut axioms: Vec<Axiom> = o.axioms().cloned().collect();
    if axioms.iter().any(|ax| ax.contains_top()) {
        let t = norm.fresh();
        norm.top_name = Some(t.clone());
        for ax in &mut axioms {
            *ax = match ax.clone() {
                Axiom::Ci(c, d) => Axiom::Ci(replace_top(&c, &t), replace_top(&d, &t)),
                Axiom::ConceptAssertion(c, a) => {
                    Axiom::ConceptAssertion(replace_top(&c, &t), a)
                }
                other => other,
            };
        }
        let top = Concept::Atomic(t.clone());
        for a in &sig.concepts {
            norm.out
                .push(Axiom::Ci(Concept::Atomic(a.clone()), top.clone()));
        }
        for r in &sig.roles {
            norm.out.push(Axiom::Ci(
                Concept::exists(r.clone(), top.clone()),
                top.clone(),
            ));
        }
        for ind in &sig.individuals {
            norm.out
                .push(Axiom::ConceptAssertion(top.clone(), ind.clone()));
        }
    }

    for ax in axioms {
        match ax {
            Axiom::Ci(c, d) => norm.ci(c, d),
            ri @ Axiom::Ri(..) => norm.out.push(ri),
            Axiom::ConceptAssertion(c, a) => {
                let c = norm.atomized(c);
                norm.out.push(Axiom::ConceptAssertion(c, a));
            }
            ra @ Axiom::RoleAssertion(..) => norm.out.push(ra),
        }
    }

    Ok(Ontology::from_axioms(norm.out))
}
