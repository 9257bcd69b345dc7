//! Exact convex-hull membership over binary generator vectors.
//!
//! `hull_member` decides v ∈ conv(S) in exact rational arithmetic and
//! returns the convex coefficients as a witness. A presolve pass fixes
//! coefficients forced to zero by 0/1 coordinates of the probe; the
//! residual fractional system goes to a phase-1 simplex with Bland's rule.
//! `hull_member_simplex` is the same decision without the presolve, kept as
//! an independent route for cross-checking.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::embed::{rational_from_binary, BinaryVector, RationalVector};
use crate::error::{Error, Result};

type Rat = BigRational;

fn uniform_len(gens: &[BinaryVector]) -> Result<usize> {
    let d = gens[0].len();
    for g in gens {
        if g.len() != d {
            return Err(Error::DimensionMismatch(g.len(), d));
        }
    }
    Ok(d)
}

fn check_dims(gens: &[BinaryVector], point: &RationalVector) -> Result<usize> {
    if gens.is_empty() {
        return Ok(point.len());
    }
    let d = uniform_len(gens)?;
    if point.len() != d {
        return Err(Error::DimensionMismatch(point.len(), d));
    }
    Ok(d)
}

fn verify_witness(gens: &[BinaryVector], point: &RationalVector, lambda: &[Rat]) -> bool {
    if lambda.len() != gens.len() || lambda.iter().any(|l| l < &Rat::zero()) {
        return false;
    }
    let total = lambda.iter().fold(Rat::zero(), |a, l| a + l);
    if !total.is_one() {
        return false;
    }
    (0..point.len()).all(|j| {
        let s = gens
            .iter()
            .zip(lambda)
            .filter(|(g, _)| g.get(j))
            .fold(Rat::zero(), |a, (_, l)| a + l);
        s == point[j]
    })
}

/// Finds x ≥ 0 with rows·x = b, if any. Phase-1 simplex over exact
/// rationals; Bland's rule on both the entering column and ratio ties, so
/// the iteration cannot cycle. This is the feasibility core behind
/// `hull_member`; it is public so related systems (hull intersections,
/// coupled witness searches) can be posed against the same solver.
pub fn solve_nonnegative_system(rows: &[Vec<Rat>], b: &[Rat], cols: usize) -> Option<Vec<Rat>> {
    let m = rows.len();
    let width = cols + m + 1;
    let mut t: Vec<Vec<Rat>> = Vec::with_capacity(m);
    for (i, row) in rows.iter().enumerate() {
        let flip = b[i] < Rat::zero();
        let mut tr = vec![Rat::zero(); width];
        for j in 0..cols {
            tr[j] = if flip { -row[j].clone() } else { row[j].clone() };
        }
        tr[cols + i] = Rat::one();
        tr[width - 1] = if flip { -b[i].clone() } else { b[i].clone() };
        t.push(tr);
    }
    let mut basis: Vec<usize> = (cols..cols + m).collect();
    // objective row: reduced costs of min Σ artificials, rhs = current value
    let mut obj = vec![Rat::zero(); width];
    for tr in &t {
        for j in 0..cols {
            obj[j] += &tr[j];
        }
        obj[width - 1] += &tr[width - 1];
    }

    loop {
        let Some(enter) = (0..cols).find(|&j| obj[j] > Rat::zero()) else {
            break;
        };
        let mut leave: Option<usize> = None;
        let mut best: Option<Rat> = None;
        for i in 0..m {
            if t[i][enter] > Rat::zero() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let replace = match (&best, leave) {
                    (None, _) => true,
                    (Some(cur), Some(l)) => {
                        ratio < *cur || (ratio == *cur && basis[i] < basis[l])
                    }
                    (Some(_), None) => unreachable!(),
                };
                if replace {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        // a positive reduced cost with an all-nonpositive column would make
        // Σ artificials unbounded below, which it is not
        let r = leave.expect("phase-1 objective is bounded below");
        let piv = t[r][enter].clone();
        for x in &mut t[r] {
            *x /= &piv;
        }
        let prow = t[r].clone();
        for (i, tr) in t.iter_mut().enumerate() {
            if i != r && !tr[enter].is_zero() {
                let f = tr[enter].clone();
                for (x, p) in tr.iter_mut().zip(&prow) {
                    *x -= p * &f;
                }
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for (x, p) in obj.iter_mut().zip(&prow) {
                *x -= p * &f;
            }
        }
        basis[r] = enter;
    }

    if !obj[width - 1].is_zero() {
        return None;
    }
    let mut x = vec![Rat::zero(); cols];
    for i in 0..m {
        if basis[i] < cols {
            x[basis[i]] = t[i][width - 1].clone();
        }
    }
    Some(x)
}

/// Decides point ∈ conv(gens). Returns the coefficients λ (aligned with
/// `gens`, zeros included) when the point is inside, `None` when it is not.
/// The empty generator set has empty hull.
///
/// Presolve: a probe coordinate of 0 forces λ_i = 0 for every generator
/// with that bit set; a coordinate of 1, given Σλ = 1, forces λ_i = 0 for
/// every generator with that bit clear. Coordinates outside [0,1] are
/// immediately infeasible. Only the fractional coordinates reach the
/// simplex. These fixings are exact, so the result always agrees with
/// `hull_member_simplex`.
pub fn hull_member(
    gens: &[BinaryVector],
    point: &RationalVector,
) -> Result<Option<Vec<BigRational>>> {
    let d = check_dims(gens, point)?;
    if gens.is_empty() {
        return Ok(None);
    }
    let zero = Rat::zero();
    let one = Rat::one();
    if point.iter().any(|c| c < &zero || c > &one) {
        return Ok(None);
    }
    let active: Vec<usize> = (0..gens.len())
        .filter(|&i| {
            (0..d).all(|j| {
                if point[j].is_zero() {
                    !gens[i].get(j)
                } else if point[j].is_one() {
                    gens[i].get(j)
                } else {
                    true
                }
            })
        })
        .collect();
    if active.is_empty() {
        return Ok(None);
    }
    let residual: Vec<usize> = (0..d)
        .filter(|&j| !point[j].is_zero() && !point[j].is_one())
        .collect();

    let lambda = if residual.is_empty() {
        // every active generator matches the probe on all coordinates
        let mut l = vec![zero.clone(); gens.len()];
        l[active[0]] = one.clone();
        l
    } else {
        let mut rows: Vec<Vec<Rat>> = residual
            .iter()
            .map(|&j| {
                active
                    .iter()
                    .map(|&i| if gens[i].get(j) { one.clone() } else { zero.clone() })
                    .collect()
            })
            .collect();
        rows.push(vec![one.clone(); active.len()]);
        let mut b: Vec<Rat> = residual.iter().map(|&j| point[j].clone()).collect();
        b.push(one.clone());
        match solve_nonnegative_system(&rows, &b, active.len()) {
            None => return Ok(None),
            Some(x) => {
                let mut l = vec![zero.clone(); gens.len()];
                for (k, &i) in active.iter().enumerate() {
                    l[i] = x[k].clone();
                }
                l
            }
        }
    };
    assert!(
        verify_witness(gens, point, &lambda),
        "convex witness failed verification"
    );
    Ok(Some(lambda))
}

/// `hull_member` without the presolve: the full system, one equality per
/// coordinate plus Σλ = 1, goes straight to the simplex. Reference route
/// for cross-checking; same contract.
pub fn hull_member_simplex(
    gens: &[BinaryVector],
    point: &RationalVector,
) -> Result<Option<Vec<BigRational>>> {
    let d = check_dims(gens, point)?;
    if gens.is_empty() {
        return Ok(None);
    }
    let zero = Rat::zero();
    let one = Rat::one();
    let mut rows: Vec<Vec<Rat>> = (0..d)
        .map(|j| {
            gens.iter()
                .map(|g| if g.get(j) { one.clone() } else { zero.clone() })
                .collect()
        })
        .collect();
    rows.push(vec![one.clone(); gens.len()]);
    let mut b = point.clone();
    b.push(one.clone());
    match solve_nonnegative_system(&rows, &b, gens.len()) {
        None => Ok(None),
        Some(lambda) => {
            assert!(
                verify_witness(gens, point, &lambda),
                "convex witness failed verification"
            );
            Ok(Some(lambda))
        }
    }
}

/// Checks that every binary point of conv(gens) is one of the generators:
/// exhaustive over {0,1}^d for d ≤ 12, `trials` seeded random probes above
/// that.
pub fn check_binary_hull_collapse(gens: &[BinaryVector], trials: usize, seed: u64) -> Result<bool> {
    if gens.is_empty() {
        return Ok(true);
    }
    let d = uniform_len(gens)?;
    let set: BTreeSet<&BinaryVector> = gens.iter().collect();
    let holds = |v: &BinaryVector| -> Result<bool> {
        let inside = hull_member(gens, &rational_from_binary(v))?.is_some();
        Ok(!inside || set.contains(v))
    };
    if d <= 12 {
        for mask in 0u64..(1 << d) {
            let mut v = BinaryVector::zeros(d);
            for j in 0..d {
                if mask >> j & 1 == 1 {
                    v.set(j);
                }
            }
            if !holds(&v)? {
                return Ok(false);
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..trials {
            let mut v = BinaryVector::zeros(d);
            for j in 0..d {
                if rng.gen::<bool>() {
                    v.set(j);
                }
            }
            if !holds(&v)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
