//! Local cohomology ranks `h^i_{|Δ_I|}(N_ℝ)`, computed as reduced homology of
//! the sphere complex `|Δ_I| ∩ S` over `ℚ`.

use std::collections::{BTreeSet, HashMap};

use crate::fan::Fan;
use crate::linalg::rank_int;
use crate::rayset::RaySet;

/// Which ray a non-simplicial cone is pulled from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PullOrder {
    #[default]
    LowestIndex,
    HighestIndex,
}

/// Abstract simplicial complex on ray indices. `simplices[k]` holds the
/// `k`-simplices (sets of `k + 1` rays), which correspond to `(k+1)`-cones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphereComplex {
    pub ambient_dim: usize,
    pub simplices: Vec<Vec<RaySet>>,
}

impl SphereComplex {
    pub fn is_empty(&self) -> bool {
        self.simplices.iter().all(Vec::is_empty)
    }

    pub fn counts(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }
}

/// `(r_0, …, r_n)` with `r_i = h^i_{|Δ_I|}(N_ℝ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomologyProfile(pub Vec<usize>);

impl HomologyProfile {
    pub fn get(&self, i: usize) -> usize {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&r| r == 0)
    }

    /// `Σ (-1)^i r_i`
    pub fn alternating_sum(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &r)| if i % 2 == 0 { r as i64 } else { -(r as i64) })
            .sum()
    }
}

fn pulling(fan: &Fan, cone: RaySet, order: PullOrder, out: &mut Vec<RaySet>) {
    if fan.is_simplicial_cone(cone) {
        out.push(cone);
        return;
    }
    let apex = match order {
        PullOrder::LowestIndex => cone.first(),
        PullOrder::HighestIndex => cone.last(),
    }
    .expect("non-simplicial cones have rays");
    for facet in fan.facets_of(cone) {
        if facet.contains(apex) {
            continue;
        }
        let mut sub = Vec::new();
        pulling(fan, facet, order, &mut sub);
        out.extend(sub.into_iter().map(|s| s.with(apex)));
    }
}

pub fn sphere_complex(fan: &Fan, subset: RaySet) -> SphereComplex {
    sphere_complex_with_order(fan, subset, PullOrder::LowestIndex)
}

/// Simplices of a pulling triangulation of `Δ_I`, closed under faces.
pub fn sphere_complex_with_order(fan: &Fan, subset: RaySet, order: PullOrder) -> SphereComplex {
    let sub = fan.subfan(subset);
    let mut tri = Vec::new();
    for &m in sub.max_cones() {
        pulling(fan, m, order, &mut tri);
    }
    let n = fan.dim();
    let mut levels: Vec<BTreeSet<RaySet>> = vec![BTreeSet::new(); n];
    for s in tri {
        for face in s.subsets() {
            if !face.is_empty() {
                levels[face.len() - 1].insert(face);
            }
        }
    }
    SphereComplex {
        ambient_dim: n,
        simplices: levels.into_iter().map(|l| l.into_iter().collect()).collect(),
    }
}

/// Signed boundary of `k`-simplices into `(k-1)`-simplices, `k ≥ 1`.
fn boundary_matrix(faces: &[RaySet], simplices: &[RaySet]) -> Vec<Vec<i64>> {
    let index: HashMap<RaySet, usize> = faces.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let mut m = vec![vec![0i64; simplices.len()]; faces.len()];
    for (col, s) in simplices.iter().enumerate() {
        for (pos, v) in s.iter().enumerate() {
            let row = index[&s.without(v)];
            m[row][col] = if pos % 2 == 0 { 1 } else { -1 };
        }
    }
    m
}

/// `h̃_j` for `j = -1, …, n-1` (index `j + 1`), with `h̃_{-1}(∅) = 1`.
pub fn reduced_homology_ranks(complex: &SphereComplex) -> Vec<usize> {
    let n = complex.ambient_dim;
    // chain groups C_{-1}, C_0, …, C_{n-1}
    let mut dims = vec![1usize];
    dims.extend(complex.simplices.iter().map(Vec::len));
    // ranks[k] = rank of ∂ : C_{k-1} → C_{k-2}, for k = 0..=n+1 (index k ↔ chain degree k-1)
    let mut ranks = vec![0usize; n + 2];
    if dims.len() > 1 && dims[1] > 0 {
        ranks[1] = 1;
    }
    for k in 1..n {
        let (lower, upper) = (&complex.simplices[k - 1], &complex.simplices[k]);
        if !lower.is_empty() && !upper.is_empty() {
            ranks[k + 1] = rank_int(&boundary_matrix(lower, upper));
        }
    }
    (0..=n).map(|idx| dims[idx] - ranks[idx] - ranks[idx + 1]).collect()
}

fn compute_profile(fan: &Fan, subset: RaySet, order: PullOrder) -> HomologyProfile {
    let n = fan.dim();
    let reduced = reduced_homology_ranks(&sphere_complex_with_order(fan, subset, order));
    // r_i = h̃_{n-i-1}, stored at index n - i
    HomologyProfile((0..=n).map(|i| reduced[n - i]).collect())
}

/// `h^i_{|Δ_I|}(N_ℝ) = h̃_{n-i-1}(|Δ_I| ∩ S)`, memoized per fan.
pub fn local_cohomology_ranks(fan: &Fan, subset: RaySet) -> HomologyProfile {
    if let Some(p) = fan.cache.profiles.read().expect("profile cache").get(&subset) {
        return HomologyProfile(p.clone());
    }
    let p = compute_profile(fan, subset, PullOrder::LowestIndex);
    fan.cache
        .profiles
        .write()
        .expect("profile cache")
        .insert(subset, p.0.clone());
    p
}

/// Uncached profile using a chosen pulling order.
pub fn local_cohomology_ranks_with_order(fan: &Fan, subset: RaySet, order: PullOrder) -> HomologyProfile {
    compute_profile(fan, subset, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn set(xs: &[usize]) -> RaySet {
        xs.iter().copied().collect()
    }

    #[test]
    fn sphere_complexes() {
        let p2 = fixtures::p2();
        let c = sphere_complex(&p2, p2.all_rays());
        assert_eq!(c.counts(), vec![3, 3]);
        assert!(sphere_complex(&p2, RaySet::EMPTY).is_empty());
        let pp = fixtures::p1xp1();
        assert_eq!(sphere_complex(&pp, set(&[0, 1])).counts(), vec![2, 0]);
        // square cone: one diagonal added by pulling
        let sq = fixtures::square_cone();
        assert_eq!(sphere_complex(&sq, sq.all_rays()).counts(), vec![4, 5, 2]);
    }

    #[test]
    fn reduced_ranks() {
        let p2 = fixtures::p2();
        assert_eq!(reduced_homology_ranks(&sphere_complex(&p2, p2.all_rays())), vec![0, 0, 1]);
        assert_eq!(reduced_homology_ranks(&sphere_complex(&p2, RaySet::EMPTY)), vec![1, 0, 0]);
        let pp = fixtures::p1xp1();
        assert_eq!(reduced_homology_ranks(&sphere_complex(&pp, set(&[0, 1]))), vec![0, 1, 0]);
    }

    #[test]
    fn profiles() {
        let p2 = fixtures::p2();
        assert_eq!(local_cohomology_ranks(&p2, p2.all_rays()).0, vec![1, 0, 0]);
        assert_eq!(local_cohomology_ranks(&p2, RaySet::EMPTY).0, vec![0, 0, 1]);
        assert_eq!(local_cohomology_ranks(&p2, set(&[0, 1])).0, vec![0, 0, 0]);
        let pp = fixtures::p1xp1();
        assert_eq!(local_cohomology_ranks(&pp, set(&[0, 1])).0, vec![0, 1, 0]);
        let cube = fixtures::cube_fan();
        assert_eq!(local_cohomology_ranks(&cube, cube.all_rays()).0, vec![1, 0, 0, 0]);
        // cached value is returned on the second call
        assert_eq!(local_cohomology_ranks(&pp, set(&[0, 1])).0, vec![0, 1, 0]);
    }
}
