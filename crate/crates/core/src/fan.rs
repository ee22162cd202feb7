//! Rational fans: validation, faces, subfans, completeness and multiplicities.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;

use crate::error::{Diagnostic, Error, Result};
use crate::linalg::{lattice_index, rank_int};
use crate::lp::LinearProgram;
use crate::rational::{q, Q};
use crate::rayset::{RaySet, MAX_RAYS};

/// Unvalidated fan data as read from a file: rays and maximal cones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawFan {
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    pub cones: Vec<Vec<usize>>,
}

/// A cone of a fan, identified by its ray indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cone {
    pub rays: RaySet,
    pub dim: usize,
}

#[derive(Default, Debug)]
pub(crate) struct FanCache {
    pub(crate) bounded_subsets: OnceLock<Vec<RaySet>>,
    pub(crate) profiles: RwLock<HashMap<RaySet, Vec<usize>>>,
}

/// A validated fan in `N_ℝ ≅ ℝ^n`. Immutable; clones share one memo cache.
#[derive(Clone, Debug)]
pub struct Fan {
    dim: usize,
    rays: Vec<Vec<i64>>,
    max_cones: Vec<RaySet>,
    /// every cone of the fan, grouped by dimension `0..=dim`
    cones: Vec<Vec<RaySet>>,
    pub(crate) cache: Arc<FanCache>,
}

impl PartialEq for Fan {
    fn eq(&self, other: &Self) -> bool {
        let mut a = self.max_cones.clone();
        let mut b = other.max_cones.clone();
        a.sort();
        b.sort();
        self.dim == other.dim && self.rays == other.rays && a == b
    }
}

impl Eq for Fan {}

fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

fn ray_matrix(rays: &[Vec<i64>], set: RaySet) -> Vec<Vec<i64>> {
    set.iter().map(|i| rays[i].clone()).collect()
}

/// Is there `u` with `⟨u,v⟩ = 0` on `zero` and `⟨u,v⟩ ≥ 1` on `positive`?
pub(crate) fn separable(dim: usize, rays: &[Vec<i64>], zero: RaySet, positive: RaySet, negative: RaySet) -> bool {
    let mut lp = LinearProgram::new(dim);
    let row = |i: usize| rays[i].iter().map(|&x| q(x)).collect::<Vec<Q>>();
    for i in zero.iter() {
        lp.add_eq(row(i), q(0));
    }
    for i in positive.iter() {
        lp.add_ge(row(i), q(1));
    }
    for i in negative.iter() {
        lp.add_le(row(i), q(-1));
    }
    lp.is_feasible()
}

/// Faces of the cone spanned by `cone`, as ray subsets (including the zero
/// face and the cone itself).
pub(crate) fn cone_faces(dim: usize, rays: &[Vec<i64>], cone: RaySet) -> Vec<RaySet> {
    let simplicial = rank_int(&ray_matrix(rays, cone)) == cone.len();
    cone.subsets()
        .filter(|&s| simplicial || s == cone || separable(dim, rays, s, cone.difference(s), RaySet::EMPTY))
        .collect()
}

/// Whether `v` lies in the cone positively spanned by the rays in `set`.
pub fn in_cone(rays: &[Vec<i64>], set: RaySet, v: &[Q]) -> bool {
    let idx = set.to_vec();
    let mut lp = LinearProgram::new(idx.len());
    for k in 0..idx.len() {
        lp.set_nonneg(k);
    }
    for (c, vc) in v.iter().enumerate() {
        lp.add_eq(idx.iter().map(|&i| q(rays[i][c])).collect(), vc.clone());
    }
    lp.is_feasible()
}

impl RawFan {
    pub fn new(dim: usize, rays: Vec<Vec<i64>>, cones: Vec<Vec<usize>>) -> Self {
        RawFan { dim, rays, cones }
    }

    /// Divides every ray by the gcd of its entries. Returns the indices of
    /// rays that changed; a warning is logged for each.
    pub fn primitivize(&mut self) -> Vec<usize> {
        let mut changed = Vec::new();
        for (i, r) in self.rays.iter_mut().enumerate() {
            let g = gcd_all(r);
            if g > 1 {
                log::warn!("ray {i} {r:?} is not primitive; dividing by {g}");
                r.iter_mut().for_each(|x| *x /= g);
                changed.push(i);
            }
        }
        changed
    }

    /// Every violation found in the data; empty means the fan is valid.
    pub fn diagnostics(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        for (i, r) in self.rays.iter().enumerate() {
            if r.len() != self.dim {
                out.push(Diagnostic::DimensionMismatch { ray: i, len: r.len() });
            } else if r.iter().all(|&x| x == 0) {
                out.push(Diagnostic::ZeroRay { ray: i });
            } else if gcd_all(r) != 1 {
                out.push(Diagnostic::NotPrimitive { ray: i });
            }
        }
        for i in 0..self.rays.len() {
            for j in i + 1..self.rays.len() {
                if self.rays[i] == self.rays[j] {
                    out.push(Diagnostic::DuplicateRay { first: i, second: j });
                }
            }
        }
        let mut used = RaySet::EMPTY;
        let mut sets = Vec::with_capacity(self.cones.len());
        for (c, cone) in self.cones.iter().enumerate() {
            let mut s = RaySet::EMPTY;
            for &idx in cone {
                if idx >= self.rays.len() {
                    out.push(Diagnostic::BadIndex { cone: c, index: idx });
                } else {
                    s.insert(idx);
                }
            }
            used = used.union(s);
            sets.push(s);
        }
        for i in 0..self.rays.len() {
            if !used.contains(i) {
                out.push(Diagnostic::UnusedRay { ray: i });
            }
        }
        if !out.is_empty() {
            // geometric checks need well-formed rays and indices
            return out;
        }
        let rays = &self.rays;
        for (c, &s) in sets.iter().enumerate() {
            if s.is_empty() {
                continue;
            }
            if !separable(self.dim, rays, RaySet::EMPTY, s, RaySet::EMPTY) {
                out.push(Diagnostic::NotStronglyConvex { cone: c });
                continue;
            }
            for r in s.iter() {
                if !separable(self.dim, rays, RaySet::singleton(r), s.without(r), RaySet::EMPTY) {
                    out.push(Diagnostic::NonExtremalRay { cone: c, ray: r });
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        for a in 0..sets.len() {
            for b in a + 1..sets.len() {
                let common = sets[a].intersection(sets[b]);
                if !separable(
                    self.dim,
                    rays,
                    common,
                    sets[a].difference(common),
                    sets[b].difference(common),
                ) {
                    out.push(Diagnostic::ImproperIntersection { first: a, second: b });
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<Fan> {
        if self.dim == 0 {
            return Err(Error::InvalidArgument("fan dimension must be positive".into()));
        }
        if self.rays.len() > MAX_RAYS {
            return Err(Error::CapExceeded { rays: self.rays.len(), cap: MAX_RAYS });
        }
        let diags = self.diagnostics();
        if !diags.is_empty() {
            return Err(Error::InvalidFan(diags));
        }
        let sets: Vec<RaySet> = self.cones.iter().map(|c| c.iter().copied().collect()).collect();
        Ok(Fan::from_maximal(self.dim, self.rays.clone(), &sets))
    }
}

impl Fan {
    /// Validates and builds a fan; see [`RawFan::validate`].
    pub fn new(dim: usize, rays: Vec<Vec<i64>>, cones: Vec<Vec<usize>>) -> Result<Fan> {
        RawFan::new(dim, rays, cones).validate()
    }

    /// Builds a fan from cones already known to form a fan. Cones contained
    /// in other listed cones are dropped.
    fn from_maximal(dim: usize, rays: Vec<Vec<i64>>, sets: &[RaySet]) -> Fan {
        let mut max_cones: Vec<RaySet> = Vec::new();
        for &s in sets {
            if sets.iter().any(|&t| t != s && s.is_subset(t)) || max_cones.contains(&s) {
                continue;
            }
            max_cones.push(s);
        }
        if max_cones.is_empty() {
            max_cones.push(RaySet::EMPTY);
        }
        let mut all = BTreeSet::new();
        for &m in &max_cones {
            all.extend(cone_faces(dim, &rays, m));
        }
        let mut cones = vec![Vec::new(); dim + 1];
        for s in all {
            let d = rank_int(&ray_matrix(&rays, s));
            cones[d].push(s);
        }
        Fan {
            dim,
            rays,
            max_cones,
            cones,
            cache: Arc::default(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &[i64] {
        &self.rays[i]
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    /// The set of all ray indices, `Δ(1)`.
    pub fn all_rays(&self) -> RaySet {
        RaySet::full(self.rays.len())
    }

    pub fn max_cones(&self) -> &[RaySet] {
        &self.max_cones
    }

    /// All cones grouped by dimension; index `j` holds `Δ(j)`.
    pub fn all_cones(&self) -> &[Vec<RaySet>] {
        &self.cones
    }

    pub fn cones_of_dim(&self, j: usize) -> &[RaySet] {
        &self.cones[j]
    }

    pub fn cone_counts(&self) -> Vec<usize> {
        self.cones.iter().map(Vec::len).collect()
    }

    pub fn cone_dim(&self, cone: RaySet) -> usize {
        rank_int(&ray_matrix(&self.rays, cone))
    }

    pub fn cone(&self, rays: RaySet) -> Cone {
        Cone { rays, dim: self.cone_dim(rays) }
    }

    pub fn is_cone(&self, rays: RaySet) -> bool {
        self.cones.iter().any(|c| c.contains(&rays))
    }

    /// Rays used by at least one cone.
    pub fn used_rays(&self) -> RaySet {
        self.max_cones.iter().fold(RaySet::EMPTY, |a, &b| a.union(b))
    }

    /// Faces of codimension one inside `cone`.
    pub fn facets_of(&self, cone: RaySet) -> Vec<RaySet> {
        let d = self.cone_dim(cone);
        if d == 0 {
            return Vec::new();
        }
        self.cones[d - 1]
            .iter()
            .copied()
            .filter(|f| f.is_subset(cone))
            .collect()
    }

    /// `|Δ| = N_ℝ`, decided by facet pairing: every maximal cone is
    /// full-dimensional and every codimension-one face lies in exactly two.
    pub fn is_complete(&self) -> bool {
        if self.max_cones.iter().any(|&c| self.cone_dim(c) != self.dim) {
            return false;
        }
        let mut count: HashMap<RaySet, usize> = HashMap::new();
        for &m in &self.max_cones {
            for f in self.facets_of(m) {
                *count.entry(f).or_default() += 1;
            }
        }
        !count.is_empty() && count.values().all(|&c| c == 2)
    }

    pub fn is_simplicial(&self) -> bool {
        self.max_cones.iter().all(|&c| self.cone_dim(c) == c.len())
    }

    pub fn is_simplicial_cone(&self, cone: RaySet) -> bool {
        self.cone_dim(cone) == cone.len()
    }

    /// `Δ_I`: the cones of `Δ` all of whose rays lie in `subset`. Ray
    /// indexing is preserved.
    pub fn subfan(&self, subset: RaySet) -> Fan {
        let mut cones = vec![Vec::new(); self.dim + 1];
        for (d, level) in self.cones.iter().enumerate() {
            cones[d] = level.iter().copied().filter(|c| c.is_subset(subset)).collect();
        }
        let flat: Vec<RaySet> = cones.iter().flatten().copied().collect();
        let max_cones = flat
            .iter()
            .copied()
            .filter(|&c| !flat.iter().any(|&t| t != c && c.is_subset(t)))
            .collect();
        Fan {
            dim: self.dim,
            rays: self.rays.clone(),
            max_cones,
            cones,
            cache: Arc::default(),
        }
    }

    /// `χ(Δ) = Σ_j (-1)^j #Δ(j)`.
    pub fn chi(&self) -> i64 {
        self.cones
            .iter()
            .enumerate()
            .map(|(j, c)| if j % 2 == 0 { c.len() as i64 } else { -(c.len() as i64) })
            .sum()
    }

    /// Index of the sublattice generated by the cone's rays in its saturation.
    pub fn cone_multiplicity(&self, cone: RaySet) -> Result<BigInt> {
        lattice_index(&ray_matrix(&self.rays, cone)).ok_or(Error::NonSimplicialCone(cone))
    }

    /// Whether the rational point `v` lies in the cone spanned by `cone`.
    pub fn cone_contains(&self, cone: RaySet, v: &[Q]) -> bool {
        in_cone(&self.rays, cone, v)
    }

    pub fn support_contains(&self, v: &[Q]) -> bool {
        self.max_cones.iter().any(|&c| self.cone_contains(c, v))
    }
}
