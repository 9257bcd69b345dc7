//! Binary vector embeddings of finite interpretations: the map μ, vector
//! concatenation ⊕, and the geometric model holding the vertex regions
//! η(a), η(A), η(r).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interp::FiniteInterpretation;
use crate::ontology::{ConceptName, IndividualName, RoleName, Signature};

/// Assigns one bit per individual, per concept name, and per (role, domain
/// element) pair, in that block order; names sort alphabetically within a
/// block and role-element pairs by (role, element id). The dimension is
/// |N_I| + |N_C| + |N_R|·|Δ|.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSystem {
    domain: usize,
    individuals: Vec<IndividualName>,
    concepts: Vec<ConceptName>,
    roles: Vec<RoleName>,
}

impl IndexSystem {
    pub fn new(sig: &Signature, domain: usize) -> IndexSystem {
        IndexSystem {
            domain,
            individuals: sig.individuals.iter().cloned().collect(),
            concepts: sig.concepts.iter().cloned().collect(),
            roles: sig.roles.iter().cloned().collect(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.individuals.len() + self.concepts.len() + self.roles.len() * self.domain
    }

    pub fn domain_size(&self) -> usize {
        self.domain
    }

    pub fn individual_bit(&self, a: &IndividualName) -> Option<usize> {
        self.individuals.binary_search(a).ok()
    }

    pub fn concept_bit(&self, a: &ConceptName) -> Option<usize> {
        self.concepts
            .binary_search(a)
            .ok()
            .map(|i| self.individuals.len() + i)
    }

    pub fn role_bit(&self, r: &RoleName, element: usize) -> Option<usize> {
        if element >= self.domain {
            return None;
        }
        self.roles
            .binary_search(r)
            .ok()
            .map(|i| self.individuals.len() + self.concepts.len() + i * self.domain + element)
    }

    pub fn contains_individual(&self, a: &IndividualName) -> bool {
        self.individuals.binary_search(a).is_ok()
    }

    pub fn contains_concept(&self, a: &ConceptName) -> bool {
        self.concepts.binary_search(a).is_ok()
    }

    pub fn contains_role(&self, r: &RoleName) -> bool {
        self.roles.binary_search(r).is_ok()
    }

    pub fn individuals(&self) -> &[IndividualName] {
        &self.individuals
    }

    pub fn concepts(&self) -> &[ConceptName] {
        &self.concepts
    }

    pub fn roles(&self) -> &[RoleName] {
        &self.roles
    }
}

/// A fixed-length vector over {0,1}, bit-packed. Bit 0 is the most
/// significant bit of the first word, so comparing word sequences gives the
/// lexicographic order on bit strings of equal length.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BinaryVector {
    len: usize,
    words: Vec<u64>,
}

impl BinaryVector {
    pub fn zeros(len: usize) -> BinaryVector {
        BinaryVector {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_bits(bits: &[u8]) -> Result<BinaryVector> {
        let mut v = BinaryVector::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 => v.set(i),
                other => {
                    return Err(Error::InvalidInput(format!(
                        "vector entry {other} is not a bit"
                    )))
                }
            }
        }
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (63 - (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] |= 1 << (63 - (i % 64));
    }

    pub fn toggle(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] ^= 1 << (63 - (i % 64));
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn to_bits(&self) -> Vec<u8> {
        self.bits().map(u8::from).collect()
    }

    /// Splits a 2m-length vector into its two m-length halves.
    pub fn halves(&self) -> Result<(BinaryVector, BinaryVector)> {
        if self.len % 2 != 0 {
            return Err(Error::LengthMismatch(self.len, self.len + 1));
        }
        let m = self.len / 2;
        let mut left = BinaryVector::zeros(m);
        let mut right = BinaryVector::zeros(m);
        for i in 0..m {
            if self.get(i) {
                left.set(i);
            }
            if self.get(m + i) {
                right.set(i);
            }
        }
        Ok((left, right))
    }
}

impl fmt::Debug for BinaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Exact coordinates for hull probes and convex-combination witnesses.
pub type RationalVector = Vec<BigRational>;

pub fn rational_from_binary(v: &BinaryVector) -> RationalVector {
    v.bits()
        .map(|b| {
            if b {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        })
        .collect()
}

/// u ⊕ v. Both inputs must have the same length.
pub fn concat(u: &BinaryVector, v: &BinaryVector) -> Result<BinaryVector> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch(u.len(), v.len()));
    }
    let mut out = BinaryVector::zeros(u.len() + v.len());
    for (i, b) in u.bits().chain(v.bits()).enumerate() {
        if b {
            out.set(i);
        }
    }
    Ok(out)
}

/// μ(d): bit [a]=1 iff d = a^I, bit [A]=1 iff d ∈ A^I, bit [r,e]=1 iff
/// (d,e) ∈ r^I. Names in the index that `i` leaves uninterpreted contribute
/// zero bits.
pub fn mu(i: &FiniteInterpretation, idx: &IndexSystem, d: usize) -> Result<BinaryVector> {
    if idx.domain != i.domain_size() {
        return Err(Error::DimensionMismatch(idx.domain, i.domain_size()));
    }
    if d >= i.domain_size() {
        return Err(Error::UnknownElement(d));
    }
    let mut v = BinaryVector::zeros(idx.dimension());
    for (pos, a) in idx.individuals.iter().enumerate() {
        if i.individual(a).ok() == Some(d) {
            v.set(pos);
        }
    }
    for a in &idx.concepts {
        if let Ok(ext) = i.concept_extension(a) {
            if ext.contains(&d) {
                v.set(idx.concept_bit(a).expect("indexed"));
            }
        }
    }
    for r in &idx.roles {
        if let Ok(pairs) = i.role_extension(r) {
            for &(from, to) in pairs {
                if from == d {
                    v.set(idx.role_bit(r, to).expect("indexed"));
                }
            }
        }
    }
    Ok(v)
}

/// Vertex regions of an interpretation: η(a) = μ(a^I), η(A) = {μ(d) | d ∈
/// A^I}, η(r) = {μ(d)⊕μ(e) | (d,e) ∈ r^I}. The `convex` flag records
/// whether the regions are to be read as generator sets of their convex
/// hulls; the stored data is identical either way. η(⊤) is not stored: ⊤ is
/// handled semantically, with all μ(d) kept as candidate witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeometricModel {
    index: IndexSystem,
    eta_ind: BTreeMap<IndividualName, BinaryVector>,
    eta_con: BTreeMap<ConceptName, BTreeSet<BinaryVector>>,
    eta_role: BTreeMap<RoleName, BTreeSet<BinaryVector>>,
    vertices: BTreeSet<BinaryVector>,
    convex: bool,
}

impl GeometricModel {
    pub fn index(&self) -> &IndexSystem {
        &self.index
    }

    pub fn dimension(&self) -> usize {
        self.index.dimension()
    }

    pub fn is_convex(&self) -> bool {
        self.convex
    }

    pub fn set_convex(&mut self, convex: bool) {
        self.convex = convex;
    }

    pub fn individual_vector(&self, a: &IndividualName) -> Result<&BinaryVector> {
        self.eta_ind
            .get(a)
            .ok_or_else(|| Error::SignatureMismatch(a.to_string()))
    }

    /// η(A); absent names have the empty region.
    pub fn concept_region(&self, a: &ConceptName) -> Option<&BTreeSet<BinaryVector>> {
        self.eta_con.get(a)
    }

    pub fn role_region(&self, r: &RoleName) -> Option<&BTreeSet<BinaryVector>> {
        self.eta_role.get(r)
    }

    /// All μ(d), deduplicated; the candidate witnesses for ⊤ positions.
    pub fn vertices(&self) -> &BTreeSet<BinaryVector> {
        &self.vertices
    }

    /// Test-only surgery: overwrite a concept region (fault injection).
    pub fn replace_concept_region(&mut self, a: ConceptName, region: BTreeSet<BinaryVector>) {
        for v in &region {
            self.vertices.insert(v.clone());
        }
        self.eta_con.insert(a, region);
    }

    pub fn to_json_string(&self) -> String {
        let mirror = EmbeddingJson {
            dimension: self.dimension(),
            index: IndexJson {
                domain: self.index.domain,
                individuals: self.index.individuals.iter().map(|n| n.to_string()).collect(),
                concepts: self.index.concepts.iter().map(|n| n.to_string()).collect(),
                roles: self.index.roles.iter().map(|n| n.to_string()).collect(),
            },
            individuals: self
                .eta_ind
                .iter()
                .map(|(n, v)| (n.to_string(), v.to_bits()))
                .collect(),
            concepts: self
                .eta_con
                .iter()
                .map(|(n, set)| (n.to_string(), set.iter().map(|v| v.to_bits()).collect()))
                .collect(),
            roles: self
                .eta_role
                .iter()
                .map(|(n, set)| (n.to_string(), set.iter().map(|v| v.to_bits()).collect()))
                .collect(),
            convex: self.convex,
        };
        serde_json::to_string_pretty(&mirror).expect("serializable") + "\n"
    }

    /// Rebuilds a model from its JSON document. The vertex list is
    /// recovered from the stored regions (individual vectors, concept
    /// region members, and both halves of every role pair); elements that
    /// appear nowhere cannot witness any check, so nothing observable is
    /// lost.
    pub fn from_json_str(text: &str) -> Result<GeometricModel> {
        let mirror: EmbeddingJson =
            serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))?;
        let mut sig = Signature::default();
        for n in &mirror.index.individuals {
            sig.individuals.insert(IndividualName::new(n.clone())?);
        }
        for n in &mirror.index.concepts {
            sig.concepts.insert(ConceptName::new(n.clone())?);
        }
        for n in &mirror.index.roles {
            sig.roles.insert(RoleName::new(n.clone())?);
        }
        let index = IndexSystem::new(&sig, mirror.index.domain);
        let m = index.dimension();
        if mirror.dimension != m {
            return Err(Error::DimensionMismatch(mirror.dimension, m));
        }

        let parse_vec = |bits: &[u8], want: usize| -> Result<BinaryVector> {
            if bits.len() != want {
                return Err(Error::LengthMismatch(bits.len(), want));
            }
            BinaryVector::from_bits(bits)
        };

        let mut vertices = BTreeSet::new();
        let mut eta_ind = BTreeMap::new();
        for (n, bits) in &mirror.individuals {
            let name = IndividualName::new(n.clone())?;
            if !index.contains_individual(&name) {
                return Err(Error::SignatureMismatch(n.clone()));
            }
            let v = parse_vec(bits, m)?;
            vertices.insert(v.clone());
            eta_ind.insert(name, v);
        }
        for a in index.individuals() {
            if !eta_ind.contains_key(a) {
                return Err(Error::InvalidInput(format!("no vector for individual {a}")));
            }
        }
        let mut eta_con: BTreeMap<ConceptName, BTreeSet<BinaryVector>> = BTreeMap::new();
        for (n, sets) in &mirror.concepts {
            let name = ConceptName::new(n.clone())?;
            if !index.contains_concept(&name) {
                return Err(Error::SignatureMismatch(n.clone()));
            }
            let mut region = BTreeSet::new();
            for bits in sets {
                let v = parse_vec(bits, m)?;
                vertices.insert(v.clone());
                region.insert(v);
            }
            eta_con.insert(name, region);
        }
        for a in index.concepts() {
            eta_con.entry(a.clone()).or_default();
        }
        let mut eta_role: BTreeMap<RoleName, BTreeSet<BinaryVector>> = BTreeMap::new();
        for (n, sets) in &mirror.roles {
            let name = RoleName::new(n.clone())?;
            if !index.contains_role(&name) {
                return Err(Error::SignatureMismatch(n.clone()));
            }
            let mut region = BTreeSet::new();
            for bits in sets {
                let v = parse_vec(bits, 2 * m)?;
                let (l, r) = v.halves()?;
                vertices.insert(l);
                vertices.insert(r);
                region.insert(v);
            }
            eta_role.insert(name, region);
        }
        for r in index.roles() {
            eta_role.entry(r.clone()).or_default();
        }
        Ok(GeometricModel {
            index,
            eta_ind,
            eta_con,
            eta_role,
            vertices,
            convex: mirror.convex,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct EmbeddingJson {
    dimension: usize,
    index: IndexJson,
    individuals: BTreeMap<String, Vec<u8>>,
    concepts: BTreeMap<String, Vec<Vec<u8>>>,
    roles: BTreeMap<String, Vec<Vec<u8>>>,
    convex: bool,
}

#[derive(Serialize, Deserialize)]
struct IndexJson {
    domain: usize,
    individuals: Vec<String>,
    concepts: Vec<String>,
    roles: Vec<String>,
}

/// The full pipeline front half: canonical model of `o`, embedded over
/// sig(o). The convex flag starts false; set it for the convex reading.
pub fn canonical_embedding(o: &crate::ontology::Ontology) -> Result<GeometricModel> {
    let i = crate::canonical::build_canonical(o)?;
    build_geometric(&i, &o.signature())
}

/// Builds η_I over the given signature. Regions are vertex sets; identical
/// μ images collapse (set semantics), which never changes satisfaction.
pub fn build_geometric(i: &FiniteInterpretation, sig: &Signature) -> Result<GeometricModel> {
    let index = IndexSystem::new(sig, i.domain_size());
    let mut images = Vec::with_capacity(i.domain_size());
    for d in 0..i.domain_size() {
        images.push(mu(i, &index, d)?);
    }

    let mut eta_ind = BTreeMap::new();
    for a in &sig.individuals {
        let d = i.individual(a)?;
        eta_ind.insert(a.clone(), images[d].clone());
    }
    let mut eta_con = BTreeMap::new();
    for a in &sig.concepts {
        let mut region = BTreeSet::new();
        if let Ok(ext) = i.concept_extension(a) {
            for &d in ext {
                region.insert(images[d].clone());
            }
        }
        eta_con.insert(a.clone(), region);
    }
    let mut eta_role = BTreeMap::new();
    for r in &sig.roles {
        let mut region = BTreeSet::new();
        if let Ok(pairs) = i.role_extension(r) {
            for &(d, e) in pairs {
                region.insert(concat(&images[d], &images[e])?);
            }
        }
        eta_role.insert(r.clone(), region);
    }

    Ok(GeometricModel {
        index,
        eta_ind,
        eta_con,
        eta_role,
        vertices: images.into_iter().collect(),
        convex: false,
    })
}
