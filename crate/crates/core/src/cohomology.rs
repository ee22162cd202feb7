//! Cohomology dimensions `h^i(D)` and `χ(O(D))`, plus an independent Čech
//! complex oracle.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;

use crate::divisor::TWeilDivisor;
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::homology::local_cohomology_ranks;
use crate::linalg::rank_int;
use crate::polyhedra::{bounded_subsets, lattice_points_of_bounded, region, DEFAULT_SUBSET_CAP};
use crate::rational::{dot_iq, to_q};
use crate::rayset::RaySet;

/// `(h^0, …, h^n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CohomologyVector(pub Vec<usize>);

impl CohomologyVector {
    /// `Σ (-1)^i h^i`
    pub fn alternating_sum(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &h)| if i % 2 == 0 { h as i64 } else { -(h as i64) })
            .sum()
    }
}

/// `I_u = {ρ : ⟨u, v_ρ⟩ ≥ -d_ρ}`.
pub fn weight_subset(fan: &Fan, d: &TWeilDivisor, u: &[i64]) -> RaySet {
    let uq = to_q(u);
    (0..fan.num_rays())
        .filter(|&i| dot_iq(fan.ray(i), &uq) >= -d.coeff(i))
        .collect()
}

/// Dimension of the `u`-graded piece of `H^i(X, O(D))`, which is
/// `h^i_{|Δ_{I_u}|}(|Δ|)`. Completeness is not required: on a complete fan
/// this is the sphere-complex profile, otherwise the support `|Δ|` is not
/// `N_ℝ` and the Čech complex of the maximal cones is used instead.
pub fn graded_piece_dim(fan: &Fan, d: &TWeilDivisor, u: &[i64], i: usize) -> Result<usize> {
    d.check(fan)?;
    if u.len() != fan.dim() {
        return Err(Error::InvalidArgument("weight has the wrong dimension".into()));
    }
    let subset = weight_subset(fan, d, u);
    if fan.is_complete() {
        Ok(local_cohomology_ranks(fan, subset).get(i))
    } else {
        Ok(cech_alternating_ranks(fan, subset).get(i).copied().unwrap_or(0))
    }
}

fn require_complete(fan: &Fan, d: &TWeilDivisor) -> Result<()> {
    d.check(fan)?;
    if !fan.is_complete() {
        return Err(Error::NotComplete);
    }
    Ok(())
}

pub fn h_all(fan: &Fan, d: &TWeilDivisor) -> Result<CohomologyVector> {
    h_all_with_cap(fan, d, DEFAULT_SUBSET_CAP)
}

/// `h^i(D) = Σ_{I bounded} h^i_{|Δ_I|}(N_ℝ) · #(P_{D,I} ∩ M)`.
pub fn h_all_with_cap(fan: &Fan, d: &TWeilDivisor, cap: usize) -> Result<CohomologyVector> {
    require_complete(fan, d)?;
    let mut h = vec![0usize; fan.dim() + 1];
    for subset in bounded_subsets(fan, cap)? {
        let profile = local_cohomology_ranks(fan, subset);
        if profile.is_zero() {
            continue;
        }
        let count = lattice_points_of_bounded(&region(fan, d, subset)?).len();
        for (hi, r) in h.iter_mut().zip(&profile.0) {
            *hi += r * count;
        }
    }
    Ok(CohomologyVector(h))
}

/// `χ(O(D)) = (-1)^n Σ_{I bounded} χ(Δ_I) · #(P_{D,I} ∩ M)`, checked against
/// the alternating sum of [`h_all`].
pub fn euler_char(fan: &Fan, d: &TWeilDivisor) -> Result<i64> {
    require_complete(fan, d)?;
    let mut total = 0i64;
    for subset in bounded_subsets(fan, DEFAULT_SUBSET_CAP)? {
        let count = lattice_points_of_bounded(&region(fan, d, subset)?).len() as i64;
        total += fan.subfan(subset).chi() * count;
    }
    if fan.dim() % 2 == 1 {
        total = -total;
    }
    let alt = h_all(fan, d)?.alternating_sum();
    if alt != total {
        return Err(Error::Inconsistent(format!(
            "chi formula gives {total}, alternating sum of h^i gives {alt}"
        )));
    }
    Ok(total)
}

/// Cohomology of the alternating Čech complex of the cover by maximal cones
/// in the weight-`u` piece: tuples `σ_0 < … < σ_i` whose intersection has
/// all its rays in `I_u`. Returns degrees `0..=n`.
pub fn cech_alternating_ranks(fan: &Fan, subset: RaySet) -> Vec<usize> {
    let cones = fan.max_cones();
    let k = cones.len();
    assert!(k < 64, "too many maximal cones for the Čech oracle");
    let mut levels: Vec<Vec<u64>> = vec![Vec::new(); k];
    for mask in 1u64..(1u64 << k) {
        let inter = (0..k)
            .filter(|&j| mask >> j & 1 == 1)
            .fold(fan.all_rays(), |acc, j| acc.intersection(cones[j]));
        if inter.is_subset(subset) {
            levels[mask.count_ones() as usize - 1].push(mask);
        }
    }
    let diff_rank = |deg: usize| -> usize {
        // d : C^deg → C^{deg+1}
        if deg + 1 >= k || levels[deg].is_empty() || levels[deg + 1].is_empty() {
            return 0;
        }
        let index: HashMap<u64, usize> = levels[deg].iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let mut mat = vec![vec![0i64; levels[deg].len()]; levels[deg + 1].len()];
        for (row, &big) in levels[deg + 1].iter().enumerate() {
            let members: Vec<usize> = (0..k).filter(|&j| big >> j & 1 == 1).collect();
            for (pos, &j) in members.iter().enumerate() {
                if let Some(&col) = index.get(&(big & !(1u64 << j))) {
                    mat[row][col] = if pos % 2 == 0 { 1 } else { -1 };
                }
            }
        }
        rank_int(&mat)
    };
    let ranks: Vec<usize> = (0..k).map(diff_rank).collect();
    (0..=fan.dim())
        .map(|deg| {
            if deg >= k {
                return 0;
            }
            let into = if deg == 0 { 0 } else { ranks[deg - 1] };
            levels[deg].len() - ranks[deg] - into
        })
        .collect()
}

/// Same cohomology from the full Čech complex with all ordered tuples,
/// repetitions allowed. Exponentially larger; used to validate the
/// alternating reduction.
pub fn cech_full_ranks(fan: &Fan, subset: RaySet) -> Vec<usize> {
    let cones = fan.max_cones();
    let k = cones.len();
    let top = fan.dim() + 1;
    let mut levels: Vec<Vec<Vec<usize>>> = Vec::with_capacity(top + 1);
    for deg in 0..=top {
        let mut tuples = Vec::new();
        let total = k.pow(deg as u32 + 1);
        for code in 0..total {
            let mut t = Vec::with_capacity(deg + 1);
            let mut c = code;
            for _ in 0..=deg {
                t.push(c % k);
                c /= k;
            }
            let inter = t.iter().fold(fan.all_rays(), |acc, &j| acc.intersection(cones[j]));
            if inter.is_subset(subset) {
                tuples.push(t);
            }
        }
        levels.push(tuples);
    }
    let diff_rank = |deg: usize| -> usize {
        let index: HashMap<&[usize], usize> =
            levels[deg].iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect();
        let mut mat = vec![vec![0i64; levels[deg].len()]; levels[deg + 1].len()];
        for (row, t) in levels[deg + 1].iter().enumerate() {
            for pos in 0..t.len() {
                let mut face = t.clone();
                face.remove(pos);
                if let Some(&col) = index.get(face.as_slice()) {
                    mat[row][col] += if pos % 2 == 0 { 1 } else { -1 };
                }
            }
        }
        rank_int(&mat)
    };
    let ranks: Vec<usize> = (0..top).map(diff_rank).collect();
    (0..=fan.dim())
        .map(|deg| {
            let into = if deg == 0 { 0 } else { ranks[deg - 1] };
            levels[deg].len() - ranks[deg] - into
        })
        .collect()
}

/// Independent route to `h^i(D)`: sum the Čech cohomology of every weight
/// `u` that lies in some bounded region.
pub fn cech_oracle(fan: &Fan, d: &TWeilDivisor) -> Result<CohomologyVector> {
    require_complete(fan, d)?;
    let mut weights = Vec::new();
    for subset in bounded_subsets(fan, DEFAULT_SUBSET_CAP)? {
        weights.extend(lattice_points_of_bounded(&region(fan, d, subset)?));
    }
    let subsets: Vec<RaySet> = weights.par_iter().map(|u| weight_subset(fan, d, u)).collect();
    let distinct: Vec<RaySet> = subsets.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let ranks: HashMap<RaySet, Vec<usize>> = distinct
        .par_iter()
        .map(|&s| (s, cech_alternating_ranks(fan, s)))
        .collect();
    let mut h = vec![0usize; fan.dim() + 1];
    for s in &subsets {
        for (hi, r) in h.iter_mut().zip(&ranks[s]) {
            *hi += r;
        }
    }
    Ok(CohomologyVector(h))
}
