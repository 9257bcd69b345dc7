//! Strong-faithfulness verification: enumerate every normal-form axiom over
//! a signature and compare geometric verdicts against the reasoner.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::embed::{canonical_embedding, GeometricModel};
use crate::error::Result;
use crate::modelcheck;
use crate::ontology::{Axiom, Concept, ConceptName, IndividualName, Ontology, RoleName, Signature};
use crate::parser::serialize;
use crate::reasoner::Saturation;

/// Streams every normal-form axiom over `sig`, deterministically and
/// duplicate-free: instance queries A(a), (A1⊓A2)(a), (∃r.A)(a), r(a,b);
/// concept inclusions A⊑B, A1⊓A2⊑B, ∃r.A⊑B, A⊑∃r.B; role inclusions r⊑s.
/// Atoms range over the signature's concept names (⊤ is not enumerated);
/// conjunction pairs are ordered, so (A⊓B) and (B⊓A) both appear.
pub fn axiom_universe(sig: &Signature) -> impl Iterator<Item = Axiom> {
    let con: Vec<ConceptName> = sig.concepts.iter().cloned().collect();
    let rol: Vec<RoleName> = sig.roles.iter().cloned().collect();
    let ind: Vec<IndividualName> = sig.individuals.iter().cloned().collect();

    let atomic_iq = {
        let (con, ind) = (con.clone(), ind.clone());
        con.into_iter().flat_map(move |a| {
            let ind = ind.clone();
            ind.into_iter()
                .map(move |x| Axiom::ConceptAssertion(Concept::Atomic(a.clone()), x))
        })
    };
    let conj_iq = {
        let (con, ind) = (con.clone(), ind.clone());
        con.clone().into_iter().flat_map(move |a1| {
            let (con, ind) = (con.clone(), ind.clone());
            con.into_iter().flat_map(move |a2| {
                let (a1, ind) = (a1.clone(), ind.clone());
                ind.into_iter().map(move |x| {
                    Axiom::ConceptAssertion(
                        Concept::conj(Concept::Atomic(a1.clone()), Concept::Atomic(a2.clone())),
                        x,
                    )
                })
            })
        })
    };
    let exists_iq = {
        let (con, rol, ind) = (con.clone(), rol.clone(), ind.clone());
        rol.into_iter().flat_map(move |r| {
            let (con, ind) = (con.clone(), ind.clone());
            con.into_iter().flat_map(move |a| {
                let (r, ind) = (r.clone(), ind.clone());
                ind.into_iter().map(move |x| {
                    Axiom::ConceptAssertion(
                        Concept::exists(r.clone(), Concept::Atomic(a.clone())),
                        x,
                    )
                })
            })
        })
    };
    let role_iq = {
        let (rol, ind) = (rol.clone(), ind.clone());
        rol.into_iter().flat_map(move |r| {
            let ind = ind.clone();
            ind.clone().into_iter().flat_map(move |x| {
                let (r, ind) = (r.clone(), ind.clone());
                ind.into_iter()
                    .map(move |y| Axiom::RoleAssertion(r.clone(), x.clone(), y))
            })
        })
    };

    let atomic_ci = {
        let con = con.clone();
        con.clone().into_iter().flat_map(move |a| {
            let con = con.clone();
            con.into_iter()
                .map(move |b| Axiom::Ci(Concept::Atomic(a.clone()), Concept::Atomic(b)))
        })
    };
    let conj_ci = {
        let con = con.clone();
        con.clone().into_iter().flat_map(move |a1| {
            let con = con.clone();
            con.clone().into_iter().flat_map(move |a2| {
                let (a1, con) = (a1.clone(), con.clone());
                con.into_iter().map(move |b| {
                    Axiom::Ci(
                        Concept::conj(Concept::Atomic(a1.clone()), Concept::Atomic(a2.clone())),
                        Concept::Atomic(b),
                    )
                })
            })
        })
    };
    let exists_lhs_ci = {
        let (con, rol) = (con.clone(), rol.clone());
        rol.into_iter().flat_map(move |r| {
            let con = con.clone();
            con.clone().into_iter().flat_map(move |a| {
                let (r, con) = (r.clone(), con.clone());
                con.into_iter().map(move |b| {
                    Axiom::Ci(
                        Concept::exists(r.clone(), Concept::Atomic(a.clone())),
                        Concept::Atomic(b),
                    )
                })
            })
        })
    };
    let exists_rhs_ci = {
        let (con, rol) = (con.clone(), rol.clone());
        con.clone().into_iter().flat_map(move |a| {
            let (con, rol) = (con.clone(), rol.clone());
            rol.into_iter().flat_map(move |r| {
                let (a, con) = (a.clone(), con.clone());
                con.into_iter().map(move |b| {
                    Axiom::Ci(
                        Concept::Atomic(a.clone()),
                        Concept::exists(r.clone(), Concept::Atomic(b)),
                    )
                })
            })
        })
    };
    let ri = {
        let rol = rol.clone();
        rol.clone().into_iter().flat_map(move |r| {
            let rol = rol.clone();
            rol.into_iter().map(move |s| Axiom::Ri(r.clone(), s))
        })
    };

    atomic_iq
        .chain(conj_iq)
        .chain(exists_iq)
        .chain(role_iq)
        .chain(atomic_ci)
        .chain(conj_ci)
        .chain(exists_lhs_ci)
        .chain(exists_rhs_ci)
        .chain(ri)
}

/// Closed form for the size of `axiom_universe(sig)`.
pub fn axiom_universe_size(sig: &Signature) -> usize {
    let c = sig.concepts.len();
    let r = sig.roles.len();
    let i = sig.individuals.len();
    (c * i + c * c * i + r * c * i + r * i * i) // instance queries
        + (c * c + c * c * c + r * c * c + c * r * c) // concept inclusions
        + r * r // role inclusions
}

/// One disagreement: the geometric model and the reasoner gave different
/// verdicts on the same axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub axiom: Axiom,
    pub geometric: bool,
    pub entailed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaithfulnessReport {
    /// Hex SHA-256 of the ontology's canonical text form.
    pub ontology_digest: String,
    /// Size of the complete axiom universe for the signature.
    pub universe: usize,
    pub iq_checked: usize,
    pub ci_checked: usize,
    pub ri_checked: usize,
    /// Sorted by axiom; empty exactly when the model is strongly faithful
    /// over the checked axioms.
    pub mismatches: Vec<Mismatch>,
    /// Probes with ⊤ in atom positions, reported separately and never
    /// counted against faithfulness.
    pub top_mismatches: Vec<Mismatch>,
    pub elapsed: Duration,
}

impl FaithfulnessReport {
    pub fn is_faithful(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn checked(&self) -> usize {
        self.iq_checked + self.ci_checked + self.ri_checked
    }

    /// `deterministic` drops the elapsed field for byte-stable output.
    pub fn to_json_string(&self, deterministic: bool) -> String {
        let mm = |list: &[Mismatch]| -> Vec<MismatchJson> {
            list.iter()
                .map(|m| MismatchJson {
                    axiom: m.axiom.to_string(),
                    geometric: m.geometric,
                    entailed: m.entailed,
                })
                .collect()
        };
        let doc = ReportJson {
            ontology: self.ontology_digest.clone(),
            checked: self.checked(),
            mismatches: mm(&self.mismatches),
            top_mismatches: mm(&self.top_mismatches),
            elapsed_ms: (!deterministic).then(|| self.elapsed.as_millis()),
        };
        serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
    }
}

#[derive(Serialize)]
struct ReportJson {
    ontology: String,
    checked: usize,
    mismatches: Vec<MismatchJson>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    top_mismatches: Vec<MismatchJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    elapsed_ms: Option<u128>,
}

#[derive(Serialize)]
struct MismatchJson {
    axiom: String,
    geometric: bool,
    entailed: bool,
}

#[derive(Debug, Clone)]
pub struct FaithfulnessOptions {
    /// Cap on checked axioms; a uniform seeded sample when below the
    /// universe size.
    pub limit: Option<usize>,
    pub seed: u64,
    /// Additionally probe axioms with ⊤ in atom positions.
    pub probe_top: bool,
    /// Worker threads for the check loop.
    pub jobs: usize,
}

impl Default for FaithfulnessOptions {
    fn default() -> Self {
        FaithfulnessOptions {
            limit: None,
            seed: 0,
            probe_top: false,
            jobs: 1,
        }
    }
}

pub fn ontology_digest(o: &Ontology) -> String {
    let hash = Sha256::digest(serialize(o).as_bytes());
    hash.iter().map(|b| format!("{b:02x}")).collect()
}

/// Full pipeline: canonical model, convex embedding, then every universe
/// axiom compared between model checking and entailment.
pub fn verify_strong_faithfulness(o: &Ontology) -> Result<FaithfulnessReport> {
    verify_strong_faithfulness_with(o, &FaithfulnessOptions::default())
}

pub fn verify_strong_faithfulness_with(
    o: &Ontology,
    opts: &FaithfulnessOptions,
) -> Result<FaithfulnessReport> {
    let mut g = canonical_embedding(o)?;
    g.set_convex(true);
    verify_model_faithfulness_with(o, &g, opts)
}

/// Same comparison against the plain vertex regions (convex flag off). The
/// checks read only the vertices, so verdicts must coincide with the convex
/// run; a divergence would indicate flag-dependent behavior.
pub fn verify_nonconvex_faithfulness(o: &Ontology) -> Result<FaithfulnessReport> {
    verify_nonconvex_faithfulness_with(o, &FaithfulnessOptions::default())
}

pub fn verify_nonconvex_faithfulness_with(
    o: &Ontology,
    opts: &FaithfulnessOptions,
) -> Result<FaithfulnessReport> {
    let g = canonical_embedding(o)?;
    verify_model_faithfulness_with(o, &g, opts)
}

pub fn verify_model_faithfulness(o: &Ontology, g: &GeometricModel) -> Result<FaithfulnessReport> {
    verify_model_faithfulness_with(o, g, &FaithfulnessOptions::default())
}

/// Compares a supplied geometric model against entailment from `o` over the
/// axiom universe of sig(o). This is the fault-injection entry point: hand
/// it a tampered model and the damage shows up as mismatches.
pub fn verify_model_faithfulness_with(
    o: &Ontology,
    g: &GeometricModel,
    opts: &FaithfulnessOptions,
) -> Result<FaithfulnessReport> {
    let start = Instant::now();
    o.ensure_normalized()?;
    let sat = Saturation::of(o)?;
    let sig = o.signature();
    let universe = axiom_universe_size(&sig);
    let axioms = sample(axiom_universe(&sig), opts);

    let (mut iq, mut ci, mut ri) = (0usize, 0usize, 0usize);
    for ax in &axioms {
        match ax {
            Axiom::Ci(..) => ci += 1,
            Axiom::Ri(..) => ri += 1,
            _ => iq += 1,
        }
    }

    let mismatches = run_checks(&axioms, g, &sat, opts.jobs, false)?;
    let top_mismatches = if opts.probe_top {
        run_checks(&top_probes(&sig), g, &sat, opts.jobs, true)?
    } else {
        Vec::new()
    };

    Ok(FaithfulnessReport {
        ontology_digest: ontology_digest(o),
        universe,
        iq_checked: iq,
        ci_checked: ci,
        ri_checked: ri,
        mismatches,
        top_mismatches,
        elapsed: start.elapsed(),
    })
}

fn sample(stream: impl Iterator<Item = Axiom>, opts: &FaithfulnessOptions) -> Vec<Axiom> {
    match opts.limit {
        // reservoir sample of k axioms, uniform over the stream
        Some(k) => {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            let mut res: Vec<Axiom> = Vec::with_capacity(k);
            for (i, ax) in stream.enumerate() {
                if res.len() < k {
                    res.push(ax);
                } else if k > 0 {
                    let j = rng.gen_range(0..=i);
                    if j < k {
                        res[j] = ax;
                    }
                }
            }
            res.sort();
            res
        }
        None => stream.collect(),
    }
}

fn run_checks(
    axioms: &[Axiom],
    g: &GeometricModel,
    sat: &Saturation,
    jobs: usize,
    extended: bool,
) -> Result<Vec<Mismatch>> {
    let one = |ax: &Axiom| -> Result<Option<Mismatch>> {
        let geometric = modelcheck::check(g, ax)?.verdict;
        let entailed = if extended {
            sat.entails_extended(ax)?
        } else {
            sat.entails(ax)?
        };
        Ok((geometric != entailed).then(|| Mismatch {
            axiom: ax.clone(),
            geometric,
            entailed,
        }))
    };

    let jobs = jobs.max(1).min(axioms.len().max(1));
    let mut found: Vec<Mismatch> = if jobs == 1 {
        let mut out = Vec::new();
        for ax in axioms {
            if let Some(m) = one(ax)? {
                out.push(m);
            }
        }
        out
    } else {
        let chunk = axioms.len().div_ceil(jobs);
        let one = &one;
        let parts: Vec<Result<Vec<Mismatch>>> = std::thread::scope(|scope| {
            let handles: Vec<_> = axioms
                .chunks(chunk)
                .map(|part| {
                    scope.spawn(move || -> Result<Vec<Mismatch>> {
                        let mut out = Vec::new();
                        for ax in part {
                            if let Some(m) = one(ax)? {
                                out.push(m);
                            }
                        }
                        Ok(out)
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker")).collect()
        });
        let mut out = Vec::new();
        for part in parts {
            out.extend(part?);
        }
        out
    };
    found.sort_by(|x, y| x.axiom.cmp(&y.axiom));
    Ok(found)
}

/// The universe families again, but with ⊤ admitted in every atom position;
/// only axioms actually mentioning ⊤ are kept. Both routes handle these
/// shapes, yet no theorem covers them, hence the separate reporting.
fn top_probes(sig: &Signature) -> Vec<Axiom> {
    let mut atoms = vec![Concept::Top];
    atoms.extend(sig.concepts.iter().cloned().map(Concept::Atomic));
    let rol: Vec<RoleName> = sig.roles.iter().cloned().collect();
    let ind: Vec<IndividualName> = sig.individuals.iter().cloned().collect();

    let mut out = Vec::new();
    for a in &atoms {
        for x in &ind {
            out.push(Axiom::ConceptAssertion(a.clone(), x.clone()));
        }
        for b in &atoms {
            for x in &ind {
                out.push(Axiom::ConceptAssertion(
                    Concept::conj(a.clone(), b.clone()),
                    x.clone(),
                ));
            }
            out.push(Axiom::Ci(a.clone(), b.clone()));
            for c in &atoms {
                out.push(Axiom::Ci(Concept::conj(a.clone(), b.clone()), c.clone()));
            }
            for r in &rol {
                out.push(Axiom::Ci(
                    Concept::exists(r.clone(), a.clone()),
                    b.clone(),
                ));
                out.push(Axiom::Ci(
                    a.clone(),
                    Concept::exists(r.clone(), b.clone()),
                ));
            }
        }
        for r in &rol {
            for x in &ind {
                out.push(Axiom::ConceptAssertion(
                    Concept::exists(r.clone(), a.clone()),
                    x.clone(),
                ));
            }
        }
    }
    out.retain(|ax| ax.contains_top());
    out.sort();
    out.dedup();
    out
}
