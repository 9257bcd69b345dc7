//! Satisfaction of normal-form axioms against a geometric model, decided
//! over the vertex regions. Sound for the convex reading as well: a convex
//! region satisfies an axiom exactly when its generator set does.
//!
//! ⊤ is admitted in atom positions and handled semantically: its region is
//! the set of all stored vertex vectors.

use std::collections::{BTreeSet, HashSet};
use std::time::{Duration, Instant};

use crate::embed::{concat, BinaryVector, GeometricModel};
use crate::error::{Error, Result};
use crate::ontology::{Axiom, Concept, ConceptName, RoleName};

/// How `v ∈ η(r)` is decided: `Hashed` builds a hash set per call,
/// `LinearScan` walks the region and compares vectors, matching the cost
/// model the complexity bounds assume.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Hashed,
    LinearScan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub verdict: bool,
    pub elapsed: Duration,
    /// Violating vertex (or role pair), present exactly when the verdict is
    /// false and the axiom is a concept or role inclusion.
    pub counterexample: Option<Vec<BinaryVector>>,
}

impl CheckResult {
    fn done(start: Instant, verdict: bool, cex: Option<Vec<BinaryVector>>) -> CheckResult {
        debug_assert!(verdict == cex.is_none() || !verdict);
        CheckResult {
            verdict,
            elapsed: start.elapsed(),
            counterexample: cex,
        }
    }
}

#[derive(Clone, Copy)]
enum Pos<'a> {
    Top,
    Name(&'a ConceptName),
}

enum Side<'a> {
    Atom(Pos<'a>),
    Conj(Pos<'a>, Pos<'a>),
    Exists(&'a RoleName, Pos<'a>),
}

fn atomish(c: &Concept) -> Option<Pos<'_>> {
    match c {
        Concept::Top => Some(Pos::Top),
        Concept::Atomic(a) => Some(Pos::Name(a)),
        _ => None,
    }
}

fn side(c: &Concept) -> Option<Side<'_>> {
    match c {
        Concept::Conj(l, r) => Some(Side::Conj(atomish(l)?, atomish(r)?)),
        Concept::Exists(r, f) => Some(Side::Exists(r, atomish(f)?)),
        _ => Some(Side::Atom(atomish(c)?)),
    }
}

/// All names of the axiom must be indexed before any region is read, so a
/// bad name cannot hide behind an early exit.
fn validate_names(g: &GeometricModel, ax: &Axiom) -> Result<()> {
    let sig = crate::ontology::Signature::of_axiom(ax);
    for a in &sig.concepts {
        if !g.index().contains_concept(a) {
            return Err(Error::SignatureMismatch(a.to_string()));
        }
    }
    for r in &sig.roles {
        if !g.index().contains_role(r) {
            return Err(Error::SignatureMismatch(r.to_string()));
        }
    }
    for a in &sig.individuals {
        if !g.index().contains_individual(a) {
            return Err(Error::SignatureMismatch(a.to_string()));
        }
    }
    Ok(())
}

struct RoleMembers<'g> {
    hashed: Option<HashSet<&'g BinaryVector>>,
    list: &'g BTreeSet<BinaryVector>,
}

impl<'g> RoleMembers<'g> {
    fn new(g: &'g GeometricModel, r: &RoleName, membership: Membership) -> RoleMembers<'g> {
        let list = g.role_region(r).expect("validated role");
        let hashed = match membership {
            Membership::Hashed => Some(list.iter().collect()),
            Membership::LinearScan => None,
        };
        RoleMembers { hashed, list }
    }

    fn contains(&self, v: &BinaryVector) -> bool {
        match &self.hashed {
            Some(set) => set.contains(v),
            None => self.list.iter().any(|w| w == v),
        }
    }
}

fn region<'g>(g: &'g GeometricModel, pos: Pos<'_>) -> &'g BTreeSet<BinaryVector> {
    match pos {
        Pos::Top => g.vertices(),
        Pos::Name(a) => g.concept_region(a).expect("validated concept"),
    }
}

fn bit(g: &GeometricModel, v: &BinaryVector, pos: Pos<'_>) -> bool {
    match pos {
        Pos::Top => true,
        Pos::Name(a) => v.get(g.index().concept_bit(a).expect("validated concept")),
    }
}

pub fn check_ci(g: &GeometricModel, ax: &Axiom) -> Result<CheckResult> {
    check_ci_with(g, ax, Membership::Hashed)
}

/// The four inclusion shapes, each a scan over one region in lexicographic
/// vector order with early exit on the first violation.
pub fn check_ci_with(g: &GeometricModel, ax: &Axiom, membership: Membership) -> Result<CheckResult> {
    let Axiom::Ci(lhs, rhs) = ax else {
        return Err(Error::NotNormalFormAxiom(ax.to_string()));
    };
    validate_names(g, ax)?;
    let start = Instant::now();
    let bad = |v: &BinaryVector| Some(vec![v.clone()]);
    match (side(lhs), side(rhs)) {
        (Some(Side::Atom(a)), Some(Side::Atom(b))) => {
            for v in region(g, a) {
                if !bit(g, v, b) {
                    return Ok(CheckResult::done(start, false, bad(v)));
                }
            }
            Ok(CheckResult::done(start, true, None))
        }
        (Some(Side::Conj(a1, a2)), Some(Side::Atom(b))) => {
            for v in region(g, a1) {
                if bit(g, v, a2) && !bit(g, v, b) {
                    return Ok(CheckResult::done(start, false, bad(v)));
                }
            }
            Ok(CheckResult::done(start, true, None))
        }
        (Some(Side::Exists(r, a)), Some(Side::Atom(b))) => {
            for w in g.role_region(r).expect("validated role") {
                let (v, u) = w.halves()?;
                if bit(g, &u, a) && !bit(g, &v, b) {
                    return Ok(CheckResult::done(start, false, bad(w)));
                }
            }
            Ok(CheckResult::done(start, true, None))
        }
        (Some(Side::Atom(a)), Some(Side::Exists(r, b))) => {
            let members = RoleMembers::new(g, r, membership);
            for v in region(g, a) {
                let witnessed = region(g, b)
                    .iter()
                    .any(|u| members.contains(&concat(v, u).expect("equal lengths")));
                if !witnessed {
                    return Ok(CheckResult::done(start, false, bad(v)));
                }
            }
            Ok(CheckResult::done(start, true, None))
        }
        _ => Err(Error::NotNormalFormAxiom(ax.to_string())),
    }
}

pub fn check_iq(g: &GeometricModel, ax: &Axiom) -> Result<CheckResult> {
    validate_names(g, ax)?;
    let start = Instant::now();
    match ax {
        Axiom::RoleAssertion(r, a, b) => {
            let pair = concat(g.individual_vector(a)?, g.individual_vector(b)?)?;
            let members = RoleMembers::new(g, r, Membership::Hashed);
            Ok(CheckResult::done(start, members.contains(&pair), None))
        }
        Axiom::ConceptAssertion(c, a) => {
            let va = g.individual_vector(a)?;
            let verdict = match side(c) {
                Some(Side::Atom(p)) => bit(g, va, p),
                Some(Side::Conj(p, q)) => bit(g, va, p) && bit(g, va, q),
                Some(Side::Exists(r, p)) => {
                    let members = RoleMembers::new(g, r, Membership::Hashed);
                    region(g, p)
                        .iter()
                        .any(|u| members.contains(&concat(va, u).expect("equal lengths")))
                }
                None => return Err(Error::NotNormalFormAxiom(ax.to_string())),
            };
            Ok(CheckResult::done(start, verdict, None))
        }
        _ => Err(Error::NotNormalFormAxiom(ax.to_string())),
    }
}

pub fn check_ri(g: &GeometricModel, ax: &Axiom) -> Result<CheckResult> {
    let Axiom::Ri(r, s) = ax else {
        return Err(Error::NotNormalFormAxiom(ax.to_string()));
    };
    validate_names(g, ax)?;
    let start = Instant::now();
    let members = RoleMembers::new(g, s, Membership::Hashed);
    for w in g.role_region(r).expect("validated role") {
        if !members.contains(w) {
            return Ok(CheckResult::done(start, false, Some(vec![w.clone()])));
        }
    }
    Ok(CheckResult::done(start, true, None))
}

/// Routes an axiom to the matching checker.
pub fn check(g: &GeometricModel, ax: &Axiom) -> Result<CheckResult> {
    match ax {
        Axiom::Ci(..) => check_ci(g, ax),
        Axiom::Ri(..) => check_ri(g, ax),
        Axiom::ConceptAssertion(..) | Axiom::RoleAssertion(..) => check_iq(g, ax),
    }
}
