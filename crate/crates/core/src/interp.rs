//! Finite interpretations: explicit domains, concept and role extensions,
//! axiom satisfaction, random sampling, and a JSON exchange format.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ontology::{
    Axiom, Concept, ConceptName, IndividualName, Ontology, RoleName, Signature,
};

/// An interpretation with domain `{0, 1, .., domain-1}`. A name is
/// interpreted only if it has an entry; evaluating anything else is an
/// `UnknownName` error rather than silently the empty set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteInterpretation {
    domain: usize,
    individuals: BTreeMap<IndividualName, usize>,
    concepts: BTreeMap<ConceptName, BTreeSet<usize>>,
    roles: BTreeMap<RoleName, BTreeSet<(usize, usize)>>,
}

impl FiniteInterpretation {
    pub fn new(domain: usize) -> Result<Self> {
        if domain == 0 {
            return Err(Error::DomainTooSmall { need: 1, got: 0 });
        }
        Ok(FiniteInterpretation {
            domain,
            individuals: BTreeMap::new(),
            concepts: BTreeMap::new(),
            roles: BTreeMap::new(),
        })
    }

    pub fn domain_size(&self) -> usize {
        self.domain
    }

    fn check_element(&self, e: usize) -> Result<()> {
        if e < self.domain {
            Ok(())
        } else {
            Err(Error::UnknownElement(e))
        }
    }

    pub fn declare_concept(&mut self, name: ConceptName) {
        self.concepts.entry(name).or_default();
    }

    pub fn declare_role(&mut self, name: RoleName) {
        self.roles.entry(name).or_default();
    }

    pub fn set_individual(&mut self, name: IndividualName, element: usize) -> Result<()> {
        self.check_element(element)?;
        self.individuals.insert(name, element);
        Ok(())
    }

    pub fn insert_concept(&mut self, name: ConceptName, element: usize) -> Result<()> {
        self.check_element(element)?;
        self.concepts.entry(name).or_default().insert(element);
        Ok(())
    }

    pub fn insert_role(&mut self, name: RoleName, from: usize, to: usize) -> Result<()> {
        self.check_element(from)?;
        self.check_element(to)?;
        self.roles.entry(name).or_default().insert((from, to));
        Ok(())
    }

    pub fn individual(&self, name: &IndividualName) -> Result<usize> {
        self.individuals
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn concept_extension(&self, name: &ConceptName) -> Result<&BTreeSet<usize>> {
        self.concepts
            .get(name)
            .ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn role_extension(&self, name: &RoleName) -> Result<&BTreeSet<(usize, usize)>> {
        self.roles
            .get(name)
            .ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn individuals(&self) -> impl Iterator<Item = (&IndividualName, usize)> {
        self.individuals.iter().map(|(n, &e)| (n, e))
    }

    pub fn concept_names(&self) -> impl Iterator<Item = &ConceptName> {
        self.concepts.keys()
    }

    pub fn role_names(&self) -> impl Iterator<Item = &RoleName> {
        self.roles.keys()
    }

    /// Evaluates an arbitrary bottom-free concept.
    pub fn extension(&self, concept: &Concept) -> Result<BTreeSet<usize>> {
        match concept {
            Concept::Top => Ok((0..self.domain).collect()),
            Concept::Bottom => Err(Error::BottomNotSupported(concept.to_string())),
            Concept::Atomic(name) => self.concept_extension(name).cloned(),
            Concept::Conj(l, r) => {
                let left = self.extension(l)?;
                let right = self.extension(r)?;
                Ok(left.intersection(&right).copied().collect())
            }
            Concept::Exists(role, filler) => {
                let pairs = self.role_extension(role)?;
                let filler = self.extension(filler)?;
                Ok(pairs
                    .iter()
                    .filter(|(_, e)| filler.contains(e))
                    .map(|&(d, _)| d)
                    .collect())
            }
        }
    }

    pub fn satisfies(&self, axiom: &Axiom) -> Result<bool> {
        match axiom {
            Axiom::Ci(c, d) => {
                let c = self.extension(c)?;
                let d = self.extension(d)?;
                Ok(c.is_subset(&d))
            }
            Axiom::Ri(r, s) => {
                let r = self.role_extension(r)?;
                let s = self.role_extension(s)?;
                Ok(r.is_subset(s))
            }
            Axiom::ConceptAssertion(c, a) => {
                let a = self.individual(a)?;
                Ok(self.extension(c)?.contains(&a))
            }
            Axiom::RoleAssertion(r, a, b) => {
                let pair = (self.individual(a)?, self.individual(b)?);
                Ok(self.role_extension(r)?.contains(&pair))
            }
        }
    }

    pub fn satisfies_ontology(&self, o: &Ontology) -> Result<bool> {
        for ax in o.axioms() {
            if !self.satisfies(ax)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_json_string(&self) -> String {
        let mirror = InterpJson {
            domain: self.domain,
            individuals: self
                .individuals
                .iter()
                .map(|(n, &e)| (n.to_string(), e))
                .collect(),
            concepts: self
                .concepts
                .iter()
                .map(|(n, s)| (n.to_string(), s.iter().copied().collect()))
                .collect(),
            roles: self
                .roles
                .iter()
                .map(|(n, s)| (n.to_string(), s.iter().map(|&(d, e)| [d, e]).collect()))
                .collect(),
        };
        serde_json::to_string_pretty(&mirror).expect("serializable") + "\n"
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let mirror: InterpJson =
            serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))?;
        let mut interp = FiniteInterpretation::new(mirror.domain)?;
        for (name, sorted) in mirror.concepts {
            let name = ConceptName::new(name)?;
            interp.declare_concept(name.clone());
            for e in sorted {
                interp.insert_concept(name.clone(), e)?;
            }
        }
        for (name, pairs) in mirror.roles {
            let name = RoleName::new(name)?;
            interp.declare_role(name.clone());
            for [d, e] in pairs {
                interp.insert_role(name.clone(), d, e)?;
            }
        }
        for (name, e) in mirror.individuals {
            interp.set_individual(IndividualName::new(name)?, e)?;
        }
        Ok(interp)
    }
}

#[derive(Serialize, Deserialize)]
struct InterpJson {
    domain: usize,
    individuals: BTreeMap<String, usize>,
    concepts: BTreeMap<String, Vec<usize>>,
    roles: BTreeMap<String, Vec<[usize; 2]>>,
}

/// Enumerates every interpretation of `sig` with the given exact domain
/// size, starting from the all-empty one. The count is
/// 2^(n·|C|) · 2^(n²·|R|) · n^|I|, so keep domains tiny.
pub fn enumerate_interpretations(sig: &Signature, domain: usize) -> Result<Interpretations> {
    if domain == 0 {
        return Err(Error::DomainTooSmall { need: 1, got: 0 });
    }
    let mut radices = Vec::new();
    radices.extend(std::iter::repeat(2).take(sig.concepts.len() * domain));
    radices.extend(std::iter::repeat(2).take(sig.roles.len() * domain * domain));
    radices.extend(std::iter::repeat(domain).take(sig.individuals.len()));
    Ok(Interpretations {
        sig: sig.clone(),
        domain,
        digits: vec![0; radices.len()],
        radices,
        started: false,
        done: false,
    })
}

pub struct Interpretations {
    sig: Signature,
    domain: usize,
    /// mixed-radix odometer: concept bits, role bits, individual targets
    radices: Vec<usize>,
    digits: Vec<usize>,
    started: bool,
    done: bool,
}

impl Interpretations {
    fn build(&self, digits: &[usize]) -> FiniteInterpretation {
        let mut interp = FiniteInterpretation::new(self.domain).expect("domain >= 1");
        let mut it = digits.iter().copied();
        for name in &self.sig.concepts {
            interp.declare_concept(name.clone());
            for e in 0..self.domain {
                if it.next().unwrap() == 1 {
                    interp.insert_concept(name.clone(), e).unwrap();
                }
            }
        }
        for name in &self.sig.roles {
            interp.declare_role(name.clone());
            for d in 0..self.domain {
                for e in 0..self.domain {
                    if it.next().unwrap() == 1 {
                        interp.insert_role(name.clone(), d, e).unwrap();
                    }
                }
            }
        }
        for name in &self.sig.individuals {
            interp
                .set_individual(name.clone(), it.next().unwrap())
                .unwrap();
        }
        interp
    }
}

impl Iterator for Interpretations {
    type Item = FiniteInterpretation;

    fn next(&mut self) -> Option<FiniteInterpretation> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.build(&self.digits.clone()));
        }
        let mut pos = 0;
        loop {
            if pos == self.radices.len() {
                self.done = true;
                return None;
            }
            self.digits[pos] += 1;
            if self.digits[pos] < self.radices[pos] {
                break;
            }
            self.digits[pos] = 0;
            pos += 1;
        }
        Some(self.build(&self.digits.clone()))
    }
}

/// Samples an interpretation of `sig` uniformly: every concept membership
/// and role pair is an independent fair coin, individuals land uniformly.
/// Draw order is fixed (concepts, then roles, then individuals) so a seeded
/// generator reproduces the same interpretation.
pub fn random_interpretation<R: Rng>(
    sig: &Signature,
    domain: usize,
    rng: &mut R,
) -> Result<FiniteInterpretation> {
    let mut interp = FiniteInterpretation::new(domain)?;
    for name in &sig.concepts {
        interp.declare_concept(name.clone());
        for e in 0..domain {
            if rng.gen::<bool>() {
                interp.insert_concept(name.clone(), e)?;
            }
        }
    }
    for name in &sig.roles {
        interp.declare_role(name.clone());
        for d in 0..domain {
            for e in 0..domain {
                if rng.gen::<bool>() {
                    interp.insert_role(name.clone(), d, e)?;
                }
            }
        }
    }
    for name in &sig.individuals {
        let e = rng.gen_range(0..domain);
        interp.set_individual(name.clone(), e)?;
    }
    Ok(interp)
}
