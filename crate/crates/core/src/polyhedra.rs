//! Half-open regions `P_{D,I}`: boundedness, closure vertices, normalized
//! volume and lattice points.

use std::collections::BTreeSet;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::divisor::TWeilDivisor;
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::linalg::{combinations, rank, solve};
use crate::lp::{LinearProgram, LpOutcome};
use crate::rational::{dot_iq, factorial, q, to_q, Q};
use crate::rayset::RaySet;

/// Default limit on `#Δ(1)` for the `2^#Δ(1)` subset sweep.
pub const DEFAULT_SUBSET_CAP: usize = 20;

/// Orientation of one constraint of a half-open region.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `⟨u, v⟩ ≥ level`
    Weak,
    /// `⟨u, v⟩ < level`
    Strict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub normal: Vec<i64>,
    pub level: Q,
    pub side: Side,
}

impl Constraint {
    pub fn holds(&self, u: &[Q]) -> bool {
        let x = dot_iq(&self.normal, u);
        match self.side {
            Side::Weak => x >= self.level,
            Side::Strict => x < self.level,
        }
    }

    /// Closure of the constraint, written as `⟨a, u⟩ ≥ b`.
    fn closed(&self) -> (Vec<Q>, Q) {
        let a = to_q(&self.normal);
        match self.side {
            Side::Weak => (a, self.level.clone()),
            Side::Strict => (a.into_iter().map(|x| -x).collect(), -self.level.clone()),
        }
    }

    /// Integer form `⟨a, u⟩ ≥ t` valid for lattice points `u`.
    fn integer_threshold(&self) -> (Vec<i64>, i64) {
        let c = self.level.ceil().to_integer().to_i64().expect("threshold fits in i64");
        match self.side {
            Side::Weak => (self.normal.clone(), c),
            Side::Strict => (self.normal.iter().map(|x| -x).collect(), 1 - c),
        }
    }
}

/// `P_{D,I} = {u : ⟨u, v_ρ⟩ ≥ -d_ρ for ρ ∈ I, ⟨u, v_ρ⟩ < -d_ρ for ρ ∉ I}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfOpenRegion {
    pub dim: usize,
    pub subset: RaySet,
    pub constraints: Vec<Constraint>,
}

impl HalfOpenRegion {
    pub fn contains(&self, u: &[Q]) -> bool {
        self.constraints.iter().all(|c| c.holds(u))
    }

    pub fn contains_lattice_point(&self, u: &[i64]) -> bool {
        self.contains(&to_q(u))
    }

    /// The recession cone of the closure is `{0}`.
    pub fn is_bounded(&self) -> bool {
        let mut lp = LinearProgram::new(self.dim);
        for c in &self.constraints {
            let (a, _) = c.closed();
            lp.add_ge(a, q(0));
        }
        recession_trivial(&lp, self.dim)
    }

    /// A nonzero direction in the recession cone of the closure, if any.
    pub fn recession_direction(&self) -> Option<Vec<Q>> {
        for j in 0..self.dim {
            for sign in [1, -1] {
                let mut lp = LinearProgram::new(self.dim);
                for c in &self.constraints {
                    lp.add_ge(c.closed().0, q(0));
                }
                let mut e = vec![q(0); self.dim];
                e[j] = q(sign);
                lp.add_ge(e, q(1));
                if let Some(r) = lp.feasible_point() {
                    return Some(r);
                }
            }
        }
        None
    }

    fn closed_system(&self) -> Vec<(Vec<Q>, Q)> {
        self.constraints.iter().map(Constraint::closed).collect()
    }
}

/// A polytope with its vertices and the closed system `⟨a, u⟩ ≥ b` it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPolytope {
    pub vertices: Vec<Vec<Q>>,
    pub inequalities: Vec<(Vec<Q>, Q)>,
}

impl RationalPolytope {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Dimension of the affine hull; `None` for the empty polytope.
    pub fn dim(&self) -> Option<usize> {
        let first = self.vertices.first()?;
        Some(affine_rank(&self.vertices, first))
    }
}

fn affine_rank(points: &[Vec<Q>], base: &[Q]) -> usize {
    let diffs: Vec<Vec<Q>> = points
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    rank(&diffs)
}

fn recession_trivial(lp: &LinearProgram, dim: usize) -> bool {
    for j in 0..dim {
        for sign in [1, -1] {
            let mut obj = vec![q(0); dim];
            obj[j] = q(sign);
            if lp.maximize(&obj) == LpOutcome::Unbounded {
                return false;
            }
        }
    }
    true
}

pub fn region(fan: &Fan, d: &TWeilDivisor, subset: RaySet) -> Result<HalfOpenRegion> {
    d.check(fan)?;
    if !subset.is_subset(fan.all_rays()) {
        return Err(Error::InvalidArgument(format!("{subset:?} is not a set of rays")));
    }
    let constraints = (0..fan.num_rays())
        .map(|i| Constraint {
            normal: fan.ray(i).to_vec(),
            level: -d.coeff(i),
            side: if subset.contains(i) { Side::Weak } else { Side::Strict },
        })
        .collect();
    Ok(HalfOpenRegion {
        dim: fan.dim(),
        subset,
        constraints,
    })
}

/// No hyperplane separates the rays in `I` from the rest; independent of `D`.
pub fn is_bounded_subset(fan: &Fan, subset: RaySet) -> bool {
    let mut lp = LinearProgram::new(fan.dim());
    for i in 0..fan.num_rays() {
        let v = to_q(fan.ray(i));
        if subset.contains(i) {
            lp.add_ge(v, q(0));
        } else {
            lp.add_le(v, q(0));
        }
    }
    recession_trivial(&lp, fan.dim())
}

/// All `I` with bounded `P_{D,I}`, in increasing bitmask order. Memoized per fan.
pub fn bounded_subsets(fan: &Fan, cap: usize) -> Result<Vec<RaySet>> {
    if fan.num_rays() > cap {
        return Err(Error::CapExceeded {
            rays: fan.num_rays(),
            cap,
        });
    }
    Ok(fan
        .cache
        .bounded_subsets
        .get_or_init(|| {
            fan.all_rays()
                .subsets()
                .filter(|&s| is_bounded_subset(fan, s))
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect()
        })
        .clone())
}

/// Vertices of the closure of a region already known to be bounded.
pub(crate) fn vertices_of_bounded(region: &HalfOpenRegion) -> RationalPolytope {
    let system = region.closed_system();
    let n = region.dim;
    let mut verts = BTreeSet::new();
    for combo in combinations(system.len(), n) {
        let a: Vec<Vec<Q>> = combo.iter().map(|&i| system[i].0.clone()).collect();
        if rank(&a) < n {
            continue;
        }
        let b: Vec<Q> = combo.iter().map(|&i| system[i].1.clone()).collect();
        let Some(x) = solve(&a, &b) else { continue };
        let feasible = system
            .iter()
            .all(|(a, b)| a.iter().zip(&x).map(|(p, y)| p * y).sum::<Q>() >= *b);
        if feasible {
            verts.insert(x);
        }
    }
    RationalPolytope {
        vertices: verts.into_iter().collect(),
        inequalities: system,
    }
}

/// Vertices of the closed polytope obtained by weakening every constraint.
pub fn closure_vertices(region: &HalfOpenRegion) -> Result<RationalPolytope> {
    if !region.is_bounded() {
        return Err(Error::Unbounded);
    }
    Ok(vertices_of_bounded(region))
}

/// `n!` times the Euclidean volume of a polytope, via a pulling triangulation.
pub fn polytope_normalized_volume(poly: &RationalPolytope, n: usize) -> Q {
    if poly.dim() != Some(n) {
        return Q::zero();
    }
    let verts = &poly.vertices;
    let tight: Vec<Vec<bool>> = verts
        .iter()
        .map(|v| {
            poly.inequalities
                .iter()
                .map(|(a, b)| a.iter().zip(v).map(|(p, y)| p * y).sum::<Q>() == *b)
                .collect()
        })
        .collect();
    let all: Vec<usize> = (0..verts.len()).collect();
    let mut exact = Q::zero();
    for s in pull(&all, n, verts, &tight, poly.inequalities.len()) {
        let base = &verts[s[0]];
        let rows: Vec<Vec<Q>> = s[1..]
            .iter()
            .map(|&i| verts[i].iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        exact += det_q(&rows).abs();
    }
    exact
}

fn det_q(rows: &[Vec<Q>]) -> Q {
    let mut m = rows.to_vec();
    let n = m.len();
    let mut det = q(1);
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= &m[c][c];
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &m[c][c];
            for j in c..n {
                let delta = &f * &m[c][j];
                m[i][j] -= delta;
            }
        }
    }
    det
}

/// Pulling triangulation of the face spanned by `face` (vertex ids) of
/// dimension `k`: cone from the first vertex over the facets avoiding it.
fn pull(face: &[usize], k: usize, verts: &[Vec<Q>], tight: &[Vec<bool>], ncons: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![face[0]]];
    }
    let apex = face[0];
    let mut facets: BTreeSet<Vec<usize>> = BTreeSet::new();
    for c in 0..ncons {
        if face.iter().all(|&v| tight[v][c]) {
            continue;
        }
        let g: Vec<usize> = face.iter().copied().filter(|&v| tight[v][c]).collect();
        if g.is_empty() || g.contains(&apex) {
            continue;
        }
        let pts: Vec<Vec<Q>> = g.iter().map(|&v| verts[v].clone()).collect();
        if affine_rank(&pts, &pts[0]) == k - 1 {
            facets.insert(g);
        }
    }
    let mut out = Vec::new();
    for g in facets {
        for mut s in pull(&g, k - 1, verts, tight, ncons) {
            s.insert(0, apex);
            out.push(s);
        }
    }
    out
}

/// `n!` times the Euclidean volume of the closure. The strict boundary has
/// measure zero, and an empty half-open region has a lower-dimensional closure.
pub fn normalized_volume(region: &HalfOpenRegion) -> Result<Q> {
    let poly = closure_vertices(region)?;
    Ok(polytope_normalized_volume(&poly, region.dim))
}

pub(crate) fn volume_of_bounded(region: &HalfOpenRegion) -> Q {
    polytope_normalized_volume(&vertices_of_bounded(region), region.dim)
}

pub(crate) fn lattice_points_of_bounded(region: &HalfOpenRegion) -> Vec<Vec<i64>> {
    let poly = vertices_of_bounded(region);
    if poly.is_empty() {
        return Vec::new();
    }
    let n = region.dim;
    let mut lo = vec![i64::MAX; n];
    let mut hi = vec![i64::MIN; n];
    for v in &poly.vertices {
        for j in 0..n {
            lo[j] = lo[j].min(v[j].ceil().to_integer().to_i64().expect("coordinate fits"));
            hi[j] = hi[j].max(v[j].floor().to_integer().to_i64().expect("coordinate fits"));
        }
    }
    if (0..n).any(|j| lo[j] > hi[j]) {
        return Vec::new();
    }
    let tests: Vec<(Vec<i64>, i64)> = region.constraints.iter().map(Constraint::integer_threshold).collect();
    let mut out = Vec::new();
    let mut u = lo.clone();
    loop {
        if tests
            .iter()
            .all(|(a, t)| a.iter().zip(&u).map(|(x, y)| x * y).sum::<i64>() >= *t)
        {
            out.push(u.clone());
        }
        let mut j = 0;
        loop {
            if j == n {
                return out;
            }
            if u[j] < hi[j] {
                u[j] += 1;
                break;
            }
            u[j] = lo[j];
            j += 1;
        }
    }
}

/// All `u ∈ M` in the half-open region, honoring strict constraints.
pub fn lattice_points(region: &HalfOpenRegion) -> Result<Vec<Vec<i64>>> {
    if !region.is_bounded() {
        return Err(Error::Unbounded);
    }
    Ok(lattice_points_of_bounded(region))
}

/// One row of an Ehrhart probe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeRow {
    pub m: usize,
    pub count: usize,
    /// `count · n! / m^n`
    pub scaled: Q,
}

pub const MAX_PROBE_M: usize = 50;

/// `#(P_{mD,I} ∩ M) · n!/mⁿ` for `m = 1..=m_max`.
pub fn ehrhart_probe(fan: &Fan, d: &TWeilDivisor, subset: RaySet, m_max: usize) -> Result<Vec<ProbeRow>> {
    if m_max == 0 || m_max > MAX_PROBE_M {
        return Err(Error::InvalidArgument(format!("m_max must lie in 1..={MAX_PROBE_M}")));
    }
    let base = region(fan, d, subset)?;
    if !base.is_bounded() {
        return Err(Error::Unbounded);
    }
    let n = fan.dim();
    let nfact = Q::from_integer(factorial(n));
    (1..=m_max)
        .map(|m| {
            let r = region(fan, &d.scaled(&q(m as i64)), subset)?;
            let count = lattice_points_of_bounded(&r).len();
            let scaled = q(count as i64) * &nfact / crate::rational::pow(&q(m as i64), n);
            Ok(ProbeRow { m, count, scaled })
        })
        .collect()
}
