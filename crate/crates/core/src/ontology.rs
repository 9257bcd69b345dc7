//! Abstract syntax for ELH ontologies: concepts, axioms, signatures, and the
//! normal-form predicates used by the reasoner and the model checker.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

pub fn valid_name(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

macro_rules! name_type {
    ($t:ident) => {
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $t(String);

        impl $t {
            pub fn new(s: impl Into<String>) -> Result<Self> {
                let s = s.into();
                if valid_name(&s) {
                    Ok(Self(s))
                } else {
                    Err(Error::InvalidName(s))
                }
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }
    };
}

name_type!(ConceptName);
name_type!(RoleName);
name_type!(IndividualName);

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Concept {
    Top,
    Bottom,
    Atomic(ConceptName),
    Conj(Box<Concept>, Box<Concept>),
    Exists(RoleName, Box<Concept>),
}

impl Concept {
    pub fn atom(name: &str) -> Result<Self> {
        Ok(Concept::Atomic(ConceptName::new(name)?))
    }

    pub fn conj(lhs: Concept, rhs: Concept) -> Self {
        Concept::Conj(Box::new(lhs), Box::new(rhs))
    }

    pub fn exists(role: RoleName, filler: Concept) -> Self {
        Concept::Exists(role, Box::new(filler))
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Concept::Atomic(_))
    }

    pub fn contains_bottom(&self) -> bool {
        match self {
            Concept::Bottom => true,
            Concept::Top | Concept::Atomic(_) => false,
            Concept::Conj(l, r) => l.contains_bottom() || r.contains_bottom(),
            Concept::Exists(_, c) => c.contains_bottom(),
        }
    }

    pub fn contains_top(&self) -> bool {
        match self {
            Concept::Top => true,
            Concept::Bottom | Concept::Atomic(_) => false,
            Concept::Conj(l, r) => l.contains_top() || r.contains_top(),
            Concept::Exists(_, c) => c.contains_top(),
        }
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Concept::Top => f.write_str("Top"),
            Concept::Bottom => f.write_str("Bottom"),
            Concept::Atomic(n) => write!(f, "{n}"),
            Concept::Conj(l, r) => write!(f, "And({l} {r})"),
            Concept::Exists(r, c) => write!(f, "Some({r} {c})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    /// C ⊑ D
    Ci(Concept, Concept),
    /// r ⊑ s
    Ri(RoleName, RoleName),
    /// C(a)
    ConceptAssertion(Concept, IndividualName),
    /// r(a, b)
    RoleAssertion(RoleName, IndividualName, IndividualName),
}

impl Axiom {
    pub fn is_tbox(&self) -> bool {
        matches!(self, Axiom::Ci(..) | Axiom::Ri(..))
    }

    /// Instance queries: concept assertions and role assertions.
    pub fn is_iq(&self) -> bool {
        !self.is_tbox()
    }

    pub fn contains_bottom(&self) -> bool {
        match self {
            Axiom::Ci(c, d) => c.contains_bottom() || d.contains_bottom(),
            Axiom::ConceptAssertion(c, _) => c.contains_bottom(),
            _ => false,
        }
    }

    pub fn contains_top(&self) -> bool {
        match self {
            Axiom::Ci(c, d) => c.contains_top() || d.contains_top(),
            Axiom::ConceptAssertion(c, _) => c.contains_top(),
            _ => false,
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom::Ci(c, d) => write!(f, "SubClassOf({c} {d})"),
            Axiom::Ri(r, s) => write!(f, "SubRoleOf({r} {s})"),
            Axiom::ConceptAssertion(c, a) => write!(f, "ClassAssertion({c} {a})"),
            Axiom::RoleAssertion(r, a, b) => write!(f, "RoleAssertion({r} {a} {b})"),
        }
    }
}

/// True iff `ax` is a CI of shape A⊑B, A1⊓A2⊑B, ∃r.A⊑B, or A⊑∃r.B with all
/// atoms concept names.
pub fn is_normal_form_ci(ax: &Axiom) -> bool {
    let Axiom::Ci(lhs, rhs) = ax else {
        return false;
    };
    let lhs_ok = match lhs {
        Concept::Atomic(_) => true,
        Concept::Conj(l, r) => l.is_atomic() && r.is_atomic(),
        Concept::Exists(_, c) => c.is_atomic(),
        _ => false,
    };
    let rhs_ok = match rhs {
        Concept::Atomic(_) => true,
        Concept::Exists(_, c) => c.is_atomic() && lhs.is_atomic(),
        _ => false,
    };
    lhs_ok && rhs_ok
}

/// True iff `ax` is a role assertion or C(a) with C of shape A, A⊓B, or ∃r.A.
pub fn is_normal_form_iq(ax: &Axiom) -> bool {
    match ax {
        Axiom::RoleAssertion(..) => true,
        Axiom::ConceptAssertion(c, _) => match c {
            Concept::Atomic(_) => true,
            Concept::Conj(l, r) => l.is_atomic() && r.is_atomic(),
            Concept::Exists(_, f) => f.is_atomic(),
            _ => false,
        },
        _ => false,
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    pub concepts: BTreeSet<ConceptName>,
    pub roles: BTreeSet<RoleName>,
    pub individuals: BTreeSet<IndividualName>,
}

impl Signature {
    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty() && self.roles.is_empty() && self.individuals.is_empty()
    }

    /// Names syntactically occurring in one axiom.
    pub fn of_axiom(ax: &Axiom) -> Signature {
        let mut sig = Signature::default();
        sig.collect_axiom(ax);
        sig
    }

    fn collect_concept(&mut self, c: &Concept) {
        match c {
            Concept::Top | Concept::Bottom => {}
            Concept::Atomic(n) => {
                self.concepts.insert(n.clone());
            }
            Concept::Conj(l, r) => {
                self.collect_concept(l);
                self.collect_concept(r);
            }
            Concept::Exists(r, f) => {
                self.roles.insert(r.clone());
                self.collect_concept(f);
            }
        }
    }

    fn collect_axiom(&mut self, ax: &Axiom) {
        match ax {
            Axiom::Ci(c, d) => {
                self.collect_concept(c);
                self.collect_concept(d);
            }
            Axiom::Ri(r, s) => {
                self.roles.insert(r.clone());
                self.roles.insert(s.clone());
            }
            Axiom::ConceptAssertion(c, a) => {
                self.collect_concept(c);
                self.individuals.insert(a.clone());
            }
            Axiom::RoleAssertion(r, a, b) => {
                self.roles.insert(r.clone());
                self.individuals.insert(a.clone());
                self.individuals.insert(b.clone());
            }
        }
    }
}

/// TBox + ABox. Axiom sets are deduplicated and kept in structural order, so
/// two ontologies with the same axioms compare equal.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Ontology {
    tbox: BTreeSet<Axiom>,
    abox: BTreeSet<Axiom>,
}

impl Ontology {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_axioms(axioms: impl IntoIterator<Item = Axiom>) -> Self {
        let mut o = Self::new();
        for ax in axioms {
            o.insert(ax);
        }
        o
    }

    pub fn insert(&mut self, ax: Axiom) {
        if ax.is_tbox() {
            self.tbox.insert(ax);
        } else {
            self.abox.insert(ax);
        }
    }

    pub fn tbox(&self) -> impl Iterator<Item = &Axiom> {
        self.tbox.iter()
    }

    pub fn abox(&self) -> impl Iterator<Item = &Axiom> {
        self.abox.iter()
    }

    pub fn axioms(&self) -> impl Iterator<Item = &Axiom> {
        self.tbox.iter().chain(self.abox.iter())
    }

    pub fn len(&self) -> usize {
        self.tbox.len() + self.abox.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tbox.is_empty() && self.abox.is_empty()
    }

    /// Names syntactically occurring in the ontology. Top and Bottom are not
    /// names and never appear here.
    pub fn signature(&self) -> Signature {
        let mut sig = Signature::default();
        for ax in self.axioms() {
            sig.collect_axiom(ax);
        }
        sig
    }

    pub fn ensure_bottom_free(&self) -> Result<()> {
        for ax in self.axioms() {
            if ax.contains_bottom() {
                return Err(Error::BottomNotSupported(ax.to_string()));
            }
        }
        Ok(())
    }

    /// Normalized: every TBox CI in one of the four normal forms, every ABox
    /// assertion atomic or a role assertion, no Top or Bottom anywhere.
    pub fn is_normalized(&self) -> bool {
        self.tbox
            .iter()
            .all(|ax| matches!(ax, Axiom::Ri(..)) || is_normal_form_ci(ax))
            && self.abox.iter().all(|ax| match ax {
                Axiom::RoleAssertion(..) => true,
                Axiom::ConceptAssertion(c, _) => c.is_atomic(),
                _ => false,
            })
    }

    pub fn ensure_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            let offender = self
                .axioms()
                .find(|ax| match ax {
                    Axiom::Ri(..) | Axiom::RoleAssertion(..) => false,
                    Axiom::Ci(..) => !is_normal_form_ci(ax),
                    Axiom::ConceptAssertion(c, _) => !c.is_atomic(),
                })
                .expect("some axiom violates normal form");
            Err(Error::NotNormalized(offender.to_string()))
        }
    }
}
