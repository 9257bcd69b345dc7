//! Entailment for normalized ELH via completion-rule saturation.
//!
//! One saturation decides every query form: concept-name nodes answer TBox
//! subsumptions, individual nodes answer instance queries, and the two
//! complex-LHS forms (A1⊓A2 ⊑ B, ∃r.A ⊑ B) run on a cloned state with a
//! fresh test node. Edges never point from concept nodes back to
//! individuals, so TBox answers are independent of the ABox.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::ontology::{
    is_normal_form_ci, is_normal_form_iq, Axiom, Concept, ConceptName, IndividualName, Ontology,
    RoleName,
};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Node {
    Individual(IndividualName),
    Top,
    Concept(ConceptName),
    Test,
}

/// An atom admitted in label sets and extended queries: a concept name or ⊤.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Atom {
    Top,
    Name(ConceptName),
}

impl Atom {
    fn of(c: &Concept) -> Option<Atom> {
        match c {
            Concept::Top => Some(Atom::Top),
            Concept::Atomic(a) => Some(Atom::Name(a.clone())),
            _ => None,
        }
    }
}

/// TBox axioms indexed by the position the rules dispatch on.
#[derive(Debug, Default)]
struct TboxIndex {
    /// A ⊑ B keyed by A
    atomic: BTreeMap<ConceptName, Vec<ConceptName>>,
    /// A1 ⊓ A2 ⊑ B
    conj: Vec<(ConceptName, ConceptName, ConceptName)>,
    /// A ⊑ ∃r.B keyed by A
    exists_rhs: BTreeMap<ConceptName, Vec<(RoleName, ConceptName)>>,
    /// ∃s.A ⊑ B
    exists_lhs: Vec<(RoleName, ConceptName, ConceptName)>,
}

/// ⊤ is implicit in every label set; only names are stored.
type Labels = BTreeMap<Node, BTreeSet<ConceptName>>;
type Edges = BTreeMap<RoleName, BTreeSet<(Node, Node)>>;

#[derive(Debug, Clone)]
struct State {
    labels: Labels,
    edges: Edges,
}

/// Reflexive-transitive closure of the declared role inclusions, restricted
/// to roles that occur in the ontology.
pub fn role_closure(o: &Ontology) -> BTreeMap<RoleName, BTreeSet<RoleName>> {
    let sig = o.signature();
    let mut closure: BTreeMap<RoleName, BTreeSet<RoleName>> = sig
        .roles
        .iter()
        .map(|r| (r.clone(), BTreeSet::from([r.clone()])))
        .collect();
    let mut changed = true;
    while changed {
        changed = false;
        for ax in o.tbox() {
            if let Axiom::Ri(r, s) = ax {
                let supers: Vec<RoleName> = closure
                    .get(s)
                    .map(|set| set.iter().cloned().collect())
                    .unwrap_or_default();
                let entry = closure.entry(r.clone()).or_default();
                for t in supers {
                    changed |= entry.insert(t);
                }
            }
        }
    }
    closure
}

#[derive(Debug)]
pub struct Saturation {
    index: TboxIndex,
    closure: BTreeMap<RoleName, BTreeSet<RoleName>>,
    state: State,
}

impl Saturation {
    /// Saturates a normalized ontology. The result is immutable; all
    /// queries are lookups except the complex-LHS forms, which re-saturate
    /// a cloned state.
    pub fn of(o: &Ontology) -> Result<Saturation> {
        o.ensure_normalized()?;
        let sig = o.signature();

        let mut index = TboxIndex::default();
        for ax in o.tbox() {
            match ax {
                Axiom::Ci(Concept::Atomic(a), Concept::Atomic(b)) => {
                    index.atomic.entry(a.clone()).or_default().push(b.clone());
                }
                Axiom::Ci(Concept::Conj(l, r), Concept::Atomic(b)) => {
                    if let (Concept::Atomic(a1), Concept::Atomic(a2)) = (l.as_ref(), r.as_ref()) {
                        index.conj.push((a1.clone(), a2.clone(), b.clone()));
                    }
                }
                Axiom::Ci(Concept::Atomic(a), Concept::Exists(r, f)) => {
                    if let Concept::Atomic(b) = f.as_ref() {
                        index
                            .exists_rhs
                            .entry(a.clone())
                            .or_default()
                            .push((r.clone(), b.clone()));
                    }
                }
                Axiom::Ci(Concept::Exists(r, f), Concept::Atomic(b)) => {
                    if let Concept::Atomic(a) = f.as_ref() {
                        index.exists_lhs.push((r.clone(), a.clone(), b.clone()));
                    }
                }
                _ => {}
            }
        }

        let mut labels: Labels = BTreeMap::new();
        labels.insert(Node::Top, BTreeSet::new());
        for a in &sig.concepts {
            labels.insert(
                Node::Concept(a.clone()),
                BTreeSet::from([a.clone()]),
            );
        }
        for ind in &sig.individuals {
            labels.insert(Node::Individual(ind.clone()), BTreeSet::new());
        }
        let mut edges: Edges = sig
            .roles
            .iter()
            .map(|r| (r.clone(), BTreeSet::new()))
            .collect();
        for ax in o.abox() {
            match ax {
                Axiom::ConceptAssertion(Concept::Atomic(a), ind) => {
                    labels
                        .get_mut(&Node::Individual(ind.clone()))
                        .expect("individual node")
                        .insert(a.clone());
                }
                Axiom::RoleAssertion(r, a, b) => {
                    edges.entry(r.clone()).or_default().insert((
                        Node::Individual(a.clone()),
                        Node::Individual(b.clone()),
                    ));
                }
                _ => {}
            }
        }

        let closure = role_closure(o);
        let mut state = State { labels, edges };
        run_rules(&index, &closure, &mut state);
        Ok(Saturation {
            index,
            closure,
            state,
        })
    }

    /// Decides a normal-form axiom (CI in one of the four shapes, RI, or a
    /// normalized instance query).
    pub fn entails(&self, ax: &Axiom) -> Result<bool> {
        let well_formed = match ax {
            Axiom::Ci(..) => is_normal_form_ci(ax),
            Axiom::ConceptAssertion(..) => is_normal_form_iq(ax),
            Axiom::Ri(..) | Axiom::RoleAssertion(..) => true,
        };
        if !well_formed {
            return Err(Error::NotNormalFormAxiom(ax.to_string()));
        }
        Ok(self.decide(ax))
    }

    /// Like `entails` but also admits ⊤ wherever an atom may appear, plus
    /// conjunctions of atoms on a CI right-hand side. Needed by the
    /// canonical-model construction, which tests e.g. T ⊨ ∃r.⊤ ⊑ A and
    /// O ⊨ (∃r.⊤)(a).
    pub(crate) fn entails_extended(&self, ax: &Axiom) -> Result<bool> {
        if self.classify_extended(ax) {
            Ok(self.decide(ax))
        } else {
            Err(Error::NotNormalFormAxiom(ax.to_string()))
        }
    }

    fn classify_extended(&self, ax: &Axiom) -> bool {
        let atomish = |c: &Concept| Atom::of(c).is_some();
        let shallow = |c: &Concept| match c {
            Concept::Conj(l, r) => atomish(l) && atomish(r),
            Concept::Exists(_, f) => atomish(f),
            _ => atomish(c),
        };
        match ax {
            Axiom::Ci(lhs, rhs) => shallow(lhs) && shallow(rhs) && (atomish(lhs) || atomish(rhs)),
            Axiom::ConceptAssertion(c, _) => shallow(c),
            Axiom::Ri(..) | Axiom::RoleAssertion(..) => true,
        }
    }

    fn decide(&self, ax: &Axiom) -> bool {
        match ax {
            Axiom::Ri(r, s) => {
                r == s
                    || self
                        .closure
                        .get(r)
                        .map(|set| set.contains(s))
                        .unwrap_or(false)
            }
            Axiom::RoleAssertion(r, a, b) => {
                let pair = (
                    Node::Individual(a.clone()),
                    Node::Individual(b.clone()),
                );
                self.state
                    .edges
                    .get(r)
                    .map(|set| set.contains(&pair))
                    .unwrap_or(false)
            }
            Axiom::ConceptAssertion(c, a) => {
                self.holds_at(&self.state, &Node::Individual(a.clone()), c)
            }
            Axiom::Ci(lhs, rhs) => self.subsumed(lhs, rhs),
        }
    }

    /// Does `c` hold at `x` in the given (already saturated) state?
    /// `c` is shallow: an atom, a conjunction of atoms, or ∃r.atom.
    fn holds_at(&self, state: &State, x: &Node, c: &Concept) -> bool {
        match c {
            Concept::Top => true,
            Concept::Atomic(a) => self.has_label(state, x, a),
            Concept::Conj(l, r) => {
                self.holds_at(state, x, l) && self.holds_at(state, x, r)
            }
            Concept::Exists(role, filler) => {
                let Some(pairs) = state.edges.get(role) else {
                    return false;
                };
                let filler_atom = Atom::of(filler).expect("shallow concept");
                pairs.iter().any(|(d, e)| {
                    d == x
                        && match &filler_atom {
                            Atom::Top => true,
                            Atom::Name(a) => self.has_label(state, e, a),
                        }
                })
            }
            Concept::Bottom => false,
        }
    }

    fn has_label(&self, state: &State, x: &Node, a: &ConceptName) -> bool {
        match state.labels.get(x) {
            Some(set) => set.contains(a),
            // unknown name: behaves like a fresh node labeled only itself
            None => matches!(x, Node::Concept(b) if b == a),
        }
    }

    fn node_of_atom(&self, a: &Atom) -> Node {
        match a {
            Atom::Top => Node::Top,
            Atom::Name(n) => Node::Concept(n.clone()),
        }
    }

    fn subsumed(&self, lhs: &Concept, rhs: &Concept) -> bool {
        if let Some(atom) = Atom::of(lhs) {
            return self.holds_at(&self.state, &self.node_of_atom(&atom), rhs);
        }
        // complex LHS: saturate a clone with a fresh node that satisfies it
        let mut state = self.state.clone();
        let mut init = BTreeSet::new();
        match lhs {
            Concept::Conj(l, r) => {
                for part in [l.as_ref(), r.as_ref()] {
                    if let Atom::Name(a) = Atom::of(part).expect("shallow concept") {
                        init.insert(a);
                    }
                }
                state.labels.insert(Node::Test, init);
            }
            Concept::Exists(role, filler) => {
                let filler = Atom::of(filler).expect("shallow concept");
                let target = self.node_of_atom(&filler);
                state.labels.entry(target.clone()).or_insert_with(|| {
                    match &filler {
                        Atom::Name(a) => BTreeSet::from([a.clone()]),
                        Atom::Top => BTreeSet::new(),
                    }
                });
                state.labels.insert(Node::Test, init);
                state
                    .edges
                    .entry(role.clone())
                    .or_default()
                    .insert((Node::Test, target));
            }
            _ => unreachable!("atoms handled above"),
        }
        run_rules(&self.index, &self.closure, &mut state);
        self.holds_at(&state, &Node::Test, rhs)
    }
}

/// Runs the completion rules to fixpoint.
///
/// CR1: A ∈ S(x), A⊑B            ⟹ B ∈ S(x)
/// CR2: A1,A2 ∈ S(x), A1⊓A2⊑B    ⟹ B ∈ S(x)
/// CR3: A ∈ S(x), A⊑∃r.B         ⟹ (x, node(B)) ∈ R(r)
/// CR4: (x,y) ∈ R(r), A ∈ S(y), ∃s.A⊑B, r ⊑* s ⟹ B ∈ S(x)
/// CRH: (x,y) ∈ R(r), r ⊑* s     ⟹ (x,y) ∈ R(s)
fn run_rules(
    index: &TboxIndex,
    closure: &BTreeMap<RoleName, BTreeSet<RoleName>>,
    state: &mut State,
) {
    loop {
        let mut changed = false;

        let nodes: Vec<Node> = state.labels.keys().cloned().collect();
        for x in &nodes {
            let snapshot: Vec<ConceptName> =
                state.labels[x].iter().cloned().collect();
            let mut fresh: BTreeSet<ConceptName> = BTreeSet::new();
            for a in &snapshot {
                if let Some(supers) = index.atomic.get(a) {
                    fresh.extend(supers.iter().cloned());
                }
            }
            for (a1, a2, b) in &index.conj {
                if state.labels[x].contains(a1) && state.labels[x].contains(a2) {
                    fresh.insert(b.clone());
                }
            }
            for a in &snapshot {
                if let Some(succs) = index.exists_rhs.get(a) {
                    for (r, b) in succs {
                        changed |= state
                            .edges
                            .entry(r.clone())
                            .or_default()
                            .insert((x.clone(), Node::Concept(b.clone())));
                    }
                }
            }
            let set = state.labels.get_mut(x).expect("node exists");
            for b in fresh {
                changed |= set.insert(b);
            }
        }

        for (r, a, b) in &index.exists_lhs {
            let mut hits: Vec<Node> = Vec::new();
            for (sub, supers) in closure.iter() {
                if !supers.contains(r) {
                    continue;
                }
                if let Some(pairs) = state.edges.get(sub) {
                    for (x, y) in pairs {
                        if state.labels.get(y).is_some_and(|s| s.contains(a)) {
                            hits.push(x.clone());
                        }
                    }
                }
            }
            for x in hits {
                changed |= state
                    .labels
                    .get_mut(&x)
                    .expect("edge endpoint has labels")
                    .insert(b.clone());
            }
        }

        let role_names: Vec<RoleName> = state.edges.keys().cloned().collect();
        for r in &role_names {
            let Some(supers) = closure.get(r) else { continue };
            let pairs: Vec<(Node, Node)> =
                state.edges[r].iter().cloned().collect();
            for s in supers {
                if s == r {
                    continue;
                }
                let entry = state.edges.entry(s.clone()).or_default();
                for p in &pairs {
                    changed |= entry.insert(p.clone());
                }
            }
        }

        if !changed {
            return;
        }
    }
}

/// One-shot convenience; saturates `o` and decides `ax`.
pub fn entails(o: &Ontology, ax: &Axiom) -> Result<bool> {
    Saturation::of(o)?.entails(ax)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_axiom, parse_ontology};

    fn holds(ontology: &str, axiom: &str) -> bool {
        let o = parse_ontology(ontology).unwrap();
        entails(&o, &parse_axiom(axiom).unwrap()).unwrap()
    }

    const O_EX: &str =
        "SubClassOf(A B)\nClassAssertion(A a)\nClassAssertion(B b)\nRoleAssertion(r a b)";

    #[test]
    fn instance_queries_on_the_running_example() {
        assert!(holds(O_EX, "ClassAssertion(A a)"));
        assert!(holds(O_EX, "ClassAssertion(B a)"), "A(a) and A⊑B give B(a)");
        assert!(!holds(O_EX, "ClassAssertion(A b)"));
        assert!(holds(O_EX, "RoleAssertion(r a b)"));
        assert!(!holds(O_EX, "RoleAssertion(r b a)"));
        assert!(holds(O_EX, "ClassAssertion(Some(r B) a)"));
        assert!(!holds(O_EX, "ClassAssertion(Some(r A) a)"));
        assert!(holds(O_EX, "ClassAssertion(And(A B) a)"));
        assert!(!holds(O_EX, "ClassAssertion(And(A B) b)"));
    }

    #[test]
    fn tbox_queries_on_the_running_example() {
        assert!(holds(O_EX, "SubClassOf(A B)"));
        assert!(!holds(O_EX, "SubClassOf(B A)"));
        assert!(holds(O_EX, "SubClassOf(A A)"));
        assert!(holds(O_EX, "SubClassOf(And(A B) B)"));
        assert!(holds(O_EX, "SubClassOf(And(B A) B)"));
        assert!(!holds(O_EX, "SubClassOf(Some(r A) B)"));
    }

    #[test]
    fn tbox_answers_ignore_the_abox() {
        let with_abox = "SubClassOf(A B)\nClassAssertion(B a)\nRoleAssertion(r a a)";
        let without = "SubClassOf(A B)";
        for ax in ["SubClassOf(A B)", "SubClassOf(B A)", "SubClassOf(B B)"] {
            assert_eq!(holds(with_abox, ax), holds(without, ax), "{ax}");
        }
    }

    #[test]
    fn role_hierarchy_is_reflexive_transitive() {
        let o = "SubRoleOf(r s)\nSubRoleOf(s t)";
        assert!(holds(o, "SubRoleOf(r s)"));
        assert!(holds(o, "SubRoleOf(r t)"), "transitivity");
        assert!(holds(o, "SubRoleOf(r r)"), "reflexivity");
        assert!(!holds(o, "SubRoleOf(t r)"));
        assert!(!holds(o, "SubRoleOf(s r)"));
    }

    #[test]
    fn role_edges_are_materialized_along_the_hierarchy() {
        let o = "SubRoleOf(r s)\nRoleAssertion(r a b)";
        assert!(holds(o, "RoleAssertion(s a b)"));
        assert!(!holds(o, "RoleAssertion(s b a)"));
    }

    #[test]
    fn complex_lhs_subsumptions_use_a_test_node() {
        assert!(holds("SubClassOf(A B)", "SubClassOf(And(A C) B)"));
        assert!(!holds("SubClassOf(A B)", "SubClassOf(And(C C) B)"));
        // CR4 through the role hierarchy
        let o = "SubClassOf(Some(s A) B)\nSubRoleOf(r s)";
        assert!(holds(o, "SubClassOf(Some(r A) B)"));
        assert!(!holds(o, "SubClassOf(Some(s B) B)"));
    }

    #[test]
    fn existential_rhs_subsumption() {
        let o = "SubClassOf(A Some(r B))";
        assert!(holds(o, "SubClassOf(A Some(r B))"));
        assert!(!holds(o, "SubClassOf(B Some(r B))"));
        // successor label is closed under the TBox
        let o = "SubClassOf(A Some(r C))\nSubClassOf(C B)";
        assert!(holds(o, "SubClassOf(A Some(r B))"));
    }

    #[test]
    fn chained_existentials_propagate_labels() {
        let o = "SubClassOf(A Some(r B))\nSubClassOf(Some(r B) C)";
        assert!(holds(o, "SubClassOf(A C)"));
    }

    #[test]
    fn empty_tbox_subsumption_is_identity() {
        assert!(holds("ClassAssertion(A a)", "SubClassOf(A A)"));
        assert!(!holds("ClassAssertion(A a)", "SubClassOf(A B)"));
    }

    #[test]
    fn names_outside_the_ontology_behave_as_fresh() {
        assert!(holds(O_EX, "SubClassOf(Q Q)"));
        assert!(!holds(O_EX, "SubClassOf(Q B)"));
        assert!(!holds(O_EX, "ClassAssertion(A q)"));
        assert!(!holds(O_EX, "RoleAssertion(q a b)"));
    }

    #[test]
    fn non_normal_inputs_are_rejected() {
        let o = parse_ontology("SubClassOf(A Some(r And(B C)))").unwrap();
        assert!(matches!(Saturation::of(&o), Err(Error::NotNormalized(_))));

        let o = parse_ontology(O_EX).unwrap();
        let sat = Saturation::of(&o).unwrap();
        let deep = parse_axiom("SubClassOf(A Some(r And(A B)))").unwrap();
        assert!(matches!(
            sat.entails(&deep),
            Err(Error::NotNormalFormAxiom(_))
        ));
        let top = parse_axiom("SubClassOf(Top A)").unwrap();
        assert!(matches!(
            sat.entails(&top),
            Err(Error::NotNormalFormAxiom(_))
        ));
    }

    #[test]
    fn extended_queries_admit_top() {
        let o = parse_ontology(O_EX).unwrap();
        let sat = Saturation::of(&o).unwrap();
        let q = |s: &str| sat.entails_extended(&parse_axiom(s).unwrap()).unwrap();
        assert!(q("ClassAssertion(Some(r Top) a)"), "a has an r-successor");
        assert!(!q("ClassAssertion(Some(r Top) b)"));
        assert!(q("SubClassOf(A Top)"));
        assert!(!q("SubClassOf(Top A)"));
        assert!(!q("SubClassOf(Some(r Top) A)"));
        assert!(q("ClassAssertion(Top a)"));
    }

    #[test]
    fn monotonicity_spot_check() {
        let smaller = "SubClassOf(A Some(r B))";
        let larger = "SubClassOf(A Some(r B))\nSubClassOf(B C)\nSubRoleOf(r s)";
        for ax in [
            "SubClassOf(A Some(r B))",
            "SubClassOf(A Some(s C))",
            "SubClassOf(A Some(s B))",
        ] {
            if holds(smaller, ax) {
                assert!(holds(larger, ax), "{ax} lost after adding axioms");
            }
        }
        assert!(holds(larger, "SubClassOf(A Some(s C))"));
    }
}
