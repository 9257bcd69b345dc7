//! Cross-checks the bit-scanning model checker against an independent
//! oracle that evaluates every region as an exact rational convex hull.
//!
//! On a model built from an interpretation, each region is exactly the set
//! of vertices with the matching coordinate set. Intersecting such regions
//! collapses onto their shared generators: any convex combination with a
//! coordinate summing to 1 can only weight generators that have the bit.
//! The oracle leans on that collapse for composite left-hand sides, and on
//! feasibility of an explicit mixture system for existential membership,
//! so agreement with the bit route is evidence, not construction.

mod common;

use elhgeo::{
    axiom_universe, build_geometric, canonical_embedding, check, concat, hull_member,
    parse_axiom, parse_ontology, rational_from_binary, solve_nonnegative_system, Axiom,
    BinaryVector, Concept, ConceptName, FiniteInterpretation, GeometricModel, IndividualName,
    RoleName, Saturation, Signature,
};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Rat = BigRational;

fn gens_of(g: &GeometricModel, c: &Concept) -> Vec<BinaryVector> {
    match c {
        Concept::Top => g.vertices().iter().cloned().collect(),
        Concept::Atomic(a) => g
            .concept_region(a)
            .expect("indexed concept")
            .iter()
            .cloned()
            .collect(),
        _ => unreachable!("atom position in a normal-form axiom"),
    }
}

fn in_hull(gens: &[BinaryVector], v: &BinaryVector) -> bool {
    hull_member(gens, &rational_from_binary(v)).unwrap().is_some()
}

/// Membership of v in the convex reading of ∃r.C: some mixture of role
/// pairs whose sources blend to v and whose targets blend into conv(C).
fn exists_member(g: &GeometricModel, v: &BinaryVector, role: &RoleName, inner: &Concept) -> bool {
    let pairs: Vec<Vec<Rat>> = g
        .role_region(role)
        .expect("indexed role")
        .iter()
        .map(rational_from_binary)
        .collect();
    let inner_gens: Vec<Vec<Rat>> = gens_of(g, inner).iter().map(rational_from_binary).collect();
    if pairs.is_empty() || inner_gens.is_empty() {
        return false;
    }
    let m = g.dimension();
    let cols = pairs.len() + inner_gens.len();
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(2 * m + 2);
    let mut b: Vec<Rat> = Vec::with_capacity(2 * m + 2);
    for j in 0..m {
        let mut sources: Vec<Rat> = pairs.iter().map(|p| p[j].clone()).collect();
        sources.extend(std::iter::repeat_with(Rat::zero).take(inner_gens.len()));
        rows.push(sources);
        b.push(if v.get(j) { Rat::one() } else { Rat::zero() });

        let mut targets: Vec<Rat> = pairs.iter().map(|p| p[m + j].clone()).collect();
        targets.extend(inner_gens.iter().map(|u| -u[j].clone()));
        rows.push(targets);
        b.push(Rat::zero());
    }
    for first in [true, false] {
        rows.push(
            (0..cols)
                .map(|k| if (k < pairs.len()) == first { Rat::one() } else { Rat::zero() })
                .collect(),
        );
        b.push(Rat::one());
    }
    solve_nonnegative_system(&rows, &b, cols).is_some()
}

fn hull_verdict(g: &GeometricModel, ax: &Axiom) -> bool {
    match ax {
        Axiom::Ci(lhs, rhs) => {
            let lhs_gens: Vec<BinaryVector> = match lhs {
                Concept::Top | Concept::Atomic(_) => gens_of(g, lhs),
                Concept::Conj(c1, c2) => {
                    let right = gens_of(g, c2);
                    gens_of(g, c1).into_iter().filter(|v| in_hull(&right, v)).collect()
                }
                Concept::Exists(r, inner) => {
                    let inner_gens = gens_of(g, inner);
                    g.role_region(r)
                        .expect("indexed role")
                        .iter()
                        .filter_map(|p| {
                            let (source, target) = p.halves().unwrap();
                            in_hull(&inner_gens, &target).then_some(source)
                        })
                        .collect()
                }
                Concept::Bottom => unreachable!(),
            };
            match rhs {
                Concept::Top => true,
                Concept::Atomic(_) => {
                    let rhs_gens = gens_of(g, rhs);
                    lhs_gens.iter().all(|v| in_hull(&rhs_gens, v))
                }
                Concept::Exists(r, inner) => {
                    lhs_gens.iter().all(|v| exists_member(g, v, r, inner))
                }
                _ => unreachable!("normal form right-hand side"),
            }
        }
        Axiom::Ri(sub, sup) => {
            let sup_gens: Vec<BinaryVector> =
                g.role_region(sup).expect("indexed role").iter().cloned().collect();
            g.role_region(sub)
                .expect("indexed role")
                .iter()
                .all(|p| in_hull(&sup_gens, p))
        }
        Axiom::ConceptAssertion(c, a) => {
            let v = g.individual_vector(a).unwrap();
            match c {
                Concept::Top => true,
                Concept::Atomic(_) => in_hull(&gens_of(g, c), v),
                Concept::Conj(c1, c2) => {
                    in_hull(&gens_of(g, c1), v) && in_hull(&gens_of(g, c2), v)
                }
                Concept::Exists(r, inner) => exists_member(g, v, r, inner),
                Concept::Bottom => unreachable!(),
            }
        }
        Axiom::RoleAssertion(r, a, b) => {
            let pair = concat(
                g.individual_vector(a).unwrap(),
                g.individual_vector(b).unwrap(),
            )
            .unwrap();
            let pgens: Vec<BinaryVector> =
                g.role_region(r).expect("indexed role").iter().cloned().collect();
            in_hull(&pgens, &pair)
        }
    }
}

fn small_signature() -> Signature {
    Signature {
        concepts: ["A", "B"].iter().map(|s| ConceptName::new(*s).unwrap()).collect(),
        roles: [RoleName::new("r").unwrap()].into_iter().collect(),
        individuals: ["a", "b"].iter().map(|s| IndividualName::new(*s).unwrap()).collect(),
    }
}

#[test]
fn hull_and_bit_routes_agree_on_models_of_random_interpretations() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let sig = small_signature();
    let universe: Vec<Axiom> = axiom_universe(&sig).collect();
    for trial in 0..30u64 {
        let domain = 1 + (trial as usize) % 4;
        let i = elhgeo::random_interpretation(&sig, domain, &mut rng).unwrap();
        let g = build_geometric(&i, &sig).unwrap();
        for ax in &universe {
            let bit = check(&g, ax).unwrap().verdict;
            assert_eq!(hull_verdict(&g, ax), bit, "trial {trial}: {ax}");
            assert_eq!(i.satisfies(ax).unwrap(), bit, "trial {trial}: {ax}");
        }
    }
}

#[test]
fn hull_route_reproduces_faithfulness_on_canonical_embeddings() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let small = common::Envelope { concepts: 2, roles: 1, individuals: 2, axioms: 5 };
    for trial in 0..6 {
        let o = common::random_normalized_ontology(&mut rng, &small);
        let mut g = canonical_embedding(&o).unwrap();
        g.set_convex(true);
        let sat = Saturation::of(&o).unwrap();
        for ax in axiom_universe(&o.signature()) {
            let entailed = sat.entails(&ax).unwrap();
            assert_eq!(hull_verdict(&g, &ax), entailed, "trial {trial}: {ax}");
            assert_eq!(check(&g, &ax).unwrap().verdict, entailed, "trial {trial}: {ax}");
        }
    }
}

#[test]
fn routes_diverge_once_a_region_stops_being_bit_defined() {
    let o = parse_ontology(
        "SubClassOf(A B)\nClassAssertion(A a)\nClassAssertion(B b)\nRoleAssertion(r a b)",
    )
    .unwrap();
    let sig = o.signature();

    // two-element model of the ontology: d is a, e is b, d in A and B,
    // e in B, one r-edge from d to e
    let mut i = FiniteInterpretation::new(2).unwrap();
    i.set_individual(IndividualName::new("a").unwrap(), 0).unwrap();
    i.set_individual(IndividualName::new("b").unwrap(), 1).unwrap();
    let a = ConceptName::new("A").unwrap();
    let b = ConceptName::new("B").unwrap();
    i.insert_concept(a.clone(), 0).unwrap();
    i.insert_concept(b.clone(), 0).unwrap();
    i.insert_concept(b.clone(), 1).unwrap();
    i.insert_role(RoleName::new("r").unwrap(), 0, 1).unwrap();
    assert!(i.satisfies_ontology(&o).unwrap());

    let mut g = build_geometric(&i, &sig).unwrap();
    let bsuba = parse_axiom("SubClassOf(B A)").unwrap();
    assert!(!hull_verdict(&g, &bsuba));
    assert!(!check(&g, &bsuba).unwrap().verdict);

    // widen A's region to all of B's: the set is no longer cut out by the
    // A coordinate, and the two routes part ways
    let region_b = g.concept_region(&b).unwrap().clone();
    g.replace_concept_region(a, region_b);
    assert!(hull_verdict(&g, &bsuba), "hull route accepts the widened region");
    assert!(!check(&g, &bsuba).unwrap().verdict, "bit route still scans coordinates");
    assert!(!Saturation::of(&o).unwrap().entails(&bsuba).unwrap());
}
