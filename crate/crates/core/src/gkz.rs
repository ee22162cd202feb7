//! GKZ decomposition: the function `Ξ_D`, normal fans `Σ_D`, chamber
//! inequalities, chamber location and enumeration, and the ampleness test
//! through asymptotic cohomology.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::Sign;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::asymptotics::{hhat, self_intersection};
use crate::divisor::{is_nef, principal, TWeilDivisor};
use crate::error::{Error, Result};
use crate::fan::{in_cone, separable, Fan};
use crate::linalg::{combinations, det_int, rank, rref, solve};
use crate::lp::{LinearProgram, LpOutcome};
use crate::polyhedra::{region, vertices_of_bounded, RationalPolytope};
use crate::rational::{denominator_lcm, dot_iq, q, to_q, Q};
use crate::rayset::RaySet;

/// `P_D = {u : ⟨u, v_ρ⟩ ≥ -d_ρ}` on a complete fan.
pub fn polytope_of(fan: &Fan, d: &TWeilDivisor) -> Result<RationalPolytope> {
    d.check(fan)?;
    if !fan.is_complete() {
        return Err(Error::NotComplete);
    }
    Ok(vertices_of_bounded(&region(fan, d, fan.all_rays())?))
}

/// `Ξ_D(v) = min {⟨u, v⟩ : u ∈ P_D}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XiFunction {
    vertices: Vec<Vec<Q>>,
    ray_values: Vec<Q>,
}

impl XiFunction {
    fn new(fan: &Fan, vertices: Vec<Vec<Q>>) -> Self {
        let mut xi = XiFunction {
            vertices,
            ray_values: Vec::new(),
        };
        xi.ray_values = fan.rays().iter().map(|v| xi.eval(&to_q(v))).collect();
        xi
    }

    pub fn vertices(&self) -> &[Vec<Q>] {
        &self.vertices
    }

    pub fn eval(&self, v: &[Q]) -> Q {
        self.vertices
            .iter()
            .map(|u| u.iter().zip(v).map(|(a, b)| a * b).sum::<Q>())
            .min()
            .expect("P_D has a vertex")
    }

    pub fn at_ray(&self, ray: usize) -> &Q {
        &self.ray_values[ray]
    }

    pub fn ray_values(&self) -> &[Q] {
        &self.ray_values
    }
}

/// `Ξ_D` and `I_D = {ρ : Ξ_D(v_ρ) > -d_ρ}`.
pub fn xi_and_id(fan: &Fan, d: &TWeilDivisor) -> Result<(XiFunction, RaySet)> {
    let poly = polytope_of(fan, d)?;
    if poly.is_empty() {
        return Err(Error::NotEffective);
    }
    let xi = XiFunction::new(fan, poly.vertices);
    let id = (0..fan.num_rays()).filter(|&i| *xi.at_ray(i) > -d.coeff(i)).collect();
    Ok((xi, id))
}

/// A complete fan whose cones may share a nonzero lineality space. Cones are
/// given by the rays of the ambient fan that generate them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PossiblyDegenerateFan {
    cones: Vec<RaySet>,
    extremal: Vec<RaySet>,
    lineality: Vec<Vec<Q>>,
}

fn span_basis(vectors: Vec<Vec<Q>>) -> Vec<Vec<Q>> {
    if vectors.is_empty() {
        return vectors;
    }
    let mut m = vectors;
    let pivots = rref(&mut m);
    m.truncate(pivots.len());
    m
}

impl PossiblyDegenerateFan {
    /// Builds the fan from generator sets of its maximal cones, which must be
    /// full-dimensional.
    pub fn new(fan: &Fan, cones: Vec<RaySet>) -> Result<Self> {
        let n = fan.dim();
        let mut cones: Vec<RaySet> = cones.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        cones.sort();
        if cones.is_empty() {
            return Err(Error::InvalidArgument("no cones given".into()));
        }
        for &c in &cones {
            if !c.is_subset(fan.all_rays()) {
                return Err(Error::InvalidArgument(format!("{c:?} is not a set of rays")));
            }
            let rows: Vec<Vec<Q>> = c.iter().map(|i| to_q(fan.ray(i))).collect();
            if rank(&rows) < n {
                return Err(Error::InvalidArgument(format!("cone {c:?} is not full-dimensional")));
            }
        }
        let rays = fan.rays();
        let first = cones[0];
        let lineality = span_basis(
            first
                .iter()
                .filter(|&g| in_cone(rays, first, &to_q(fan.ray(g)).iter().map(|x| -x).collect::<Vec<_>>()))
                .map(|g| to_q(fan.ray(g)))
                .collect(),
        );
        let extremal = if lineality.is_empty() {
            cones
                .iter()
                .map(|&c| c.iter().filter(|&g| !in_cone(rays, c.without(g), &to_q(fan.ray(g)))).collect())
                .collect()
        } else {
            vec![RaySet::EMPTY; cones.len()]
        };
        Ok(PossiblyDegenerateFan {
            cones,
            extremal,
            lineality,
        })
    }

    /// Generator sets of the maximal cones.
    pub fn cones(&self) -> &[RaySet] {
        &self.cones
    }

    /// Extremal rays of each maximal cone; empty when degenerate.
    pub fn extremal_cones(&self) -> &[RaySet] {
        &self.extremal
    }

    pub fn lineality(&self) -> &[Vec<Q>] {
        &self.lineality
    }

    pub fn is_degenerate(&self) -> bool {
        !self.lineality.is_empty()
    }

    /// `Σ(1)`; empty when degenerate.
    pub fn rays(&self) -> RaySet {
        self.extremal.iter().fold(RaySet::EMPTY, |a, &b| a.union(b))
    }

    pub fn is_simplicial(&self, dim: usize) -> bool {
        !self.is_degenerate() && self.extremal.iter().all(|e| e.len() == dim)
    }

    /// Whether this is the fan `Δ` itself.
    pub fn equals_fan(&self, fan: &Fan) -> bool {
        if self.is_degenerate() {
            return false;
        }
        let mut mine = self.extremal.clone();
        let mut theirs = fan.max_cones().to_vec();
        mine.sort();
        theirs.sort();
        mine == theirs
    }

    /// `Σ` as a fan on its own rays `Σ(1)`, listed in increasing index order.
    pub fn to_fan(&self, fan: &Fan) -> Result<Fan> {
        if self.is_degenerate() {
            return Err(Error::InvalidArgument("degenerate fan has no ray description".into()));
        }
        let idx = self.rays().to_vec();
        let pos = |r: usize| idx.iter().position(|&x| x == r).expect("ray of Σ");
        Fan::new(
            fan.dim(),
            idx.iter().map(|&r| fan.ray(r).to_vec()).collect(),
            self.extremal.iter().map(|c| c.iter().map(pos).collect()).collect(),
        )
    }
}

/// `Σ_D`: one maximal cone per vertex `w` of `P_D`, generated by the rays
/// whose constraint is tight at `w`.
pub fn normal_fan(fan: &Fan, d: &TWeilDivisor) -> Result<PossiblyDegenerateFan> {
    let (xi, _) = xi_and_id(fan, d)?;
    let cones = xi
        .vertices()
        .iter()
        .map(|w| (0..fan.num_rays()).filter(|&i| dot_iq(fan.ray(i), w) == -d.coeff(i)).collect())
        .collect();
    PossiblyDegenerateFan::new(fan, cones)
}

/// Normalizes a linear form by a positive scalar (inequalities) or any
/// nonzero scalar (equalities) so duplicates collapse.
fn normalize(mut form: Vec<Q>, equality: bool) -> Option<Vec<Q>> {
    let lead = form.iter().find(|x| !x.is_zero())?.clone();
    let s = if equality { lead } else { lead.abs() };
    for x in form.iter_mut() {
        *x /= &s;
    }
    Some(form)
}

/// The GKZ cone `γ_{Σ,I}`, stored as the explicit system of linear forms in
/// the coefficients `d_ρ`: `g(d) = 0` for equalities and `g(d) ≥ 0` for
/// inequalities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GkzCone {
    nrays: usize,
    dim: usize,
    sigma: PossiblyDegenerateFan,
    subset: RaySet,
    contained: Vec<RaySet>,
    equalities: Vec<Vec<Q>>,
    inequalities: Vec<Vec<Q>>,
}

impl GkzCone {
    /// Every maximal cone of `Σ` must be generated by rays outside `I`.
    pub fn new(fan: &Fan, cones: Vec<RaySet>, subset: RaySet) -> Result<Self> {
        if !fan.is_complete() {
            return Err(Error::NotComplete);
        }
        if !subset.is_subset(fan.all_rays()) {
            return Err(Error::InvalidArgument(format!("{subset:?} is not a set of rays")));
        }
        let sigma = PossiblyDegenerateFan::new(fan, cones)?;
        if let Some(c) = sigma.cones().iter().find(|c| !c.intersection(subset).is_empty()) {
            return Err(Error::InvalidArgument(format!("cone {c:?} uses rays of I")));
        }
        let n = fan.dim();
        let nrays = fan.num_rays();
        let rays = fan.rays();
        let mut contained = Vec::new();
        let mut eqs = BTreeSet::new();
        let mut ineqs = BTreeSet::new();
        for &c in sigma.cones() {
            let inside: RaySet = (0..nrays)
                .filter(|&r| c.contains(r) || in_cone(rays, c, &to_q(fan.ray(r))))
                .collect();
            contained.push(inside);
            let free = inside.difference(subset).to_vec();
            for combo in combinations(free.len(), n) {
                let basis: Vec<usize> = combo.iter().map(|&k| free[k]).collect();
                // columns v_{ρ_i}: solve Σ a_i v_{ρ_i} = v_ρ
                let cols: Vec<Vec<Q>> = (0..n).map(|r| basis.iter().map(|&b| q(fan.ray(b)[r])).collect()).collect();
                if rank(&cols) < n {
                    continue;
                }
                for rho in 0..nrays {
                    let a = solve(&cols, &to_q(fan.ray(rho))).expect("basis spans");
                    let mut form = vec![Q::zero(); nrays];
                    form[rho] += Q::one();
                    for (ai, &b) in a.iter().zip(&basis) {
                        form[b] -= ai;
                    }
                    let equality = inside.contains(rho) && !subset.contains(rho);
                    if let Some(f) = normalize(form, equality) {
                        if equality {
                            eqs.insert(f);
                        } else {
                            ineqs.insert(f);
                        }
                    }
                }
            }
        }
        Ok(GkzCone {
            nrays,
            dim: n,
            sigma,
            subset,
            contained,
            equalities: eqs.into_iter().collect(),
            inequalities: ineqs.into_iter().collect(),
        })
    }

    pub fn sigma(&self) -> &PossiblyDegenerateFan {
        &self.sigma
    }

    pub fn subset(&self) -> RaySet {
        self.subset
    }

    /// Rays of `Δ` lying in each maximal cone of `Σ`, in the order of
    /// [`PossiblyDegenerateFan::cones`].
    pub fn contained(&self) -> &[RaySet] {
        &self.contained
    }

    pub fn equalities(&self) -> &[Vec<Q>] {
        &self.equalities
    }

    pub fn inequalities(&self) -> &[Vec<Q>] {
        &self.inequalities
    }

    fn eval(form: &[Q], d: &TWeilDivisor) -> Q {
        form.iter().zip(d.coeffs()).map(|(a, b)| a * b).sum()
    }

    /// Values of the inequality forms at `D`.
    pub fn slacks(&self, d: &TWeilDivisor) -> Vec<Q> {
        self.inequalities.iter().map(|g| Self::eval(g, d)).collect()
    }

    pub fn contains(&self, d: &TWeilDivisor) -> bool {
        d.len() == self.nrays
            && self.equalities.iter().all(|g| Self::eval(g, d).is_zero())
            && self.inequalities.iter().all(|g| !Self::eval(g, d).is_negative())
    }

    /// Every inequality strict. For a full-dimensional cone this is the interior.
    pub fn contains_interior(&self, d: &TWeilDivisor) -> bool {
        d.len() == self.nrays
            && self.equalities.iter().all(|g| Self::eval(g, d).is_zero())
            && self.inequalities.iter().all(|g| Self::eval(g, d).is_positive())
    }

    /// Dimension of the cone in the class group `Cl(X)_ℚ`, found by detecting
    /// the implicit equalities of the inequality system.
    pub fn dimension(&self) -> usize {
        let mut base = LinearProgram::new(self.nrays);
        for g in &self.equalities {
            base.add_eq(g.clone(), Q::zero());
        }
        for g in &self.inequalities {
            base.add_ge(g.clone(), Q::zero());
        }
        let mut rows = self.equalities.clone();
        for g in &self.inequalities {
            if let LpOutcome::Optimal { .. } = base.maximize(g) {
                rows.push(g.clone());
            }
        }
        let coeff_dim = self.nrays - if rows.is_empty() { 0 } else { rank(&rows) };
        coeff_dim.saturating_sub(self.dim)
    }

    /// `dim Pic(X_Σ)_ℚ + #I` for nondegenerate simplicial `Σ`.
    pub fn expected_dimension(&self) -> Option<usize> {
        if !self.sigma.is_simplicial(self.dim) {
            return None;
        }
        Some(self.sigma.rays().len() - self.dim + self.subset.len())
    }
}

pub fn gkz_membership(fan: &Fan, cone: &GkzCone, d: &TWeilDivisor) -> Result<bool> {
    d.check(fan)?;
    if cone.nrays != fan.num_rays() {
        return Err(Error::InvalidArgument("chamber belongs to a different fan".into()));
    }
    Ok(cone.contains(d))
}

/// The GKZ cone whose relative interior contains `[D]`, described by `(Σ_D, I_D)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChamberLocation {
    pub sigma: PossiblyDegenerateFan,
    pub i_d: RaySet,
    /// `Σ_D` nondegenerate and simplicial with `I_D = Δ(1) ∖ Σ_D(1)`.
    pub interior: bool,
}

impl ChamberLocation {
    /// `Σ_D = Δ` and `I_D = ∅`.
    pub fn is_ample_chamber(&self, fan: &Fan) -> bool {
        self.sigma.equals_fan(fan) && self.i_d.is_empty()
    }
}

pub fn locate_chamber(fan: &Fan, d: &TWeilDivisor) -> Result<ChamberLocation> {
    let (_, i_d) = xi_and_id(fan, d)?;
    let sigma = normal_fan(fan, d)?;
    let interior = sigma.is_simplicial(fan.dim()) && i_d == fan.all_rays().difference(sigma.rays());
    Ok(ChamberLocation { sigma, i_d, interior })
}

/// `f_*(D)`: the coefficients of `D` on the rays of `Σ`.
pub fn pushforward(fan: &Fan, sigma: &Fan, d: &TWeilDivisor) -> Result<TWeilDivisor> {
    d.check(fan)?;
    let coeffs = sigma
        .rays()
        .iter()
        .map(|v| {
            fan.rays()
                .iter()
                .position(|w| w == v)
                .map(|i| d.coeff(i).clone())
                .ok_or_else(|| Error::RayMismatch(v.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TWeilDivisor::new(coeffs))
}

/// Options for [`enumerate_maximal_chambers`].
#[derive(Clone, Copy, Debug, Default)]
pub struct EnumerateOptions {
    /// Allow the triangulation search on three-dimensional fans.
    pub allow_dim3: bool,
}

/// A maximal GKZ chamber with an integral divisor in its interior.
#[derive(Clone, Debug)]
pub struct MaximalChamber {
    pub cone: GkzCone,
    pub sample: TWeilDivisor,
}

impl MaximalChamber {
    pub fn sigma_rays(&self) -> RaySet {
        self.cone.sigma().rays()
    }

    pub fn subset(&self) -> RaySet {
        self.cone.subset()
    }
}

pub const MAX_DIM3_RAYS: usize = 8;

/// All simplicial projective `Σ` with `Σ(1) ⊆ Δ(1)` and `|Σ| = N_ℝ`, each
/// with `I = Δ(1) ∖ Σ(1)`, sorted by `(Σ(1), cones)`.
pub fn enumerate_maximal_chambers(fan: &Fan, opts: EnumerateOptions) -> Result<Vec<MaximalChamber>> {
    if !fan.is_complete() {
        return Err(Error::NotComplete);
    }
    let candidates: Vec<Vec<RaySet>> = match fan.dim() {
        2 => fan
            .all_rays()
            .subsets()
            .filter_map(|s| cyclic_fan(fan, s))
            .collect(),
        3 if opts.allow_dim3 => {
            if fan.num_rays() > MAX_DIM3_RAYS {
                return Err(Error::Unsupported(format!(
                    "three-dimensional enumeration is limited to {MAX_DIM3_RAYS} rays"
                )));
            }
            let subsets: Vec<RaySet> = fan.all_rays().subsets().filter(|s| s.len() >= 4).collect();
            let found: Vec<Vec<Vec<RaySet>>> = subsets.par_iter().map(|&s| triangulations(fan, s)).collect();
            found.into_iter().flatten().collect()
        }
        3 => {
            return Err(Error::Unsupported(
                "three-dimensional enumeration is best effort and must be enabled explicitly".into(),
            ))
        }
        n => return Err(Error::Unsupported(format!("chamber enumeration in dimension {n}"))),
    };
    let mut out: Vec<MaximalChamber> = candidates
        .into_par_iter()
        .map(|cones| chamber_for(fan, cones))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    out.sort_by(|a, b| {
        (a.sigma_rays(), a.cone.sigma().cones()).cmp(&(b.sigma_rays(), b.cone.sigma().cones()))
    });
    Ok(out)
}

fn half(v: &[i64]) -> u8 {
    if v[1] > 0 || (v[1] == 0 && v[0] > 0) {
        0
    } else {
        1
    }
}

fn cross(a: &[i64], b: &[i64]) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

/// The complete fan in the plane whose rays are exactly `s`, if consecutive
/// rays in angular order are less than `π` apart.
fn cyclic_fan(fan: &Fan, s: RaySet) -> Option<Vec<RaySet>> {
    if s.len() < 3 {
        return None;
    }
    let mut idx = s.to_vec();
    idx.sort_by(|&a, &b| {
        let (va, vb) = (fan.ray(a), fan.ray(b));
        half(va).cmp(&half(vb)).then_with(|| 0.cmp(&cross(va, vb)))
    });
    let k = idx.len();
    let mut cones = Vec::with_capacity(k);
    for j in 0..k {
        let (a, b) = (idx[j], idx[(j + 1) % k]);
        if cross(fan.ray(a), fan.ray(b)) <= 0 {
            return None;
        }
        cones.push(RaySet::singleton(a).with(b));
    }
    Some(cones)
}

fn det3(fan: &Fan, a: usize, b: usize, c: &[i64]) -> i64 {
    let rows = vec![fan.ray(a).to_vec(), fan.ray(b).to_vec(), c.to_vec()];
    match det_int(&rows).sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

fn parallel(fan: &Fan, a: usize, b: usize) -> bool {
    let (x, y) = (fan.ray(a), fan.ray(b));
    x[0] * y[1] == x[1] * y[0] && x[0] * y[2] == x[2] * y[0] && x[1] * y[2] == x[2] * y[1]
}

/// All complete simplicial fans in `ℝ³` whose ray set is exactly `s`.
fn triangulations(fan: &Fan, s: RaySet) -> Vec<Vec<RaySet>> {
    let rays = fan.rays();
    let idx = s.to_vec();
    let triples: Vec<RaySet> = combinations(idx.len(), 3)
        .into_iter()
        .map(|c| c.iter().map(|&k| idx[k]).collect::<RaySet>())
        .filter(|&t| {
            let rows: Vec<Vec<i64>> = t.iter().map(|i| fan.ray(i).to_vec()).collect();
            !det_int(&rows).is_zero()
                && s.difference(t).iter().all(|r| !in_cone(rays, t, &to_q(fan.ray(r))))
        })
        .collect();
    // a direction off every plane spanned by two rays
    let generic = (2i64..)
        .map(|k| vec![1, k, k * k * 3 + 1])
        .find(|g| {
            idx.iter()
                .enumerate()
                .all(|(i, &a)| idx[i + 1..].iter().all(|&b| parallel(fan, a, b) || det3(fan, a, b, g) != 0))
        })
        .expect("generic direction exists");
    let gq = to_q(&generic);
    let mut found = BTreeSet::new();
    for &start in triples.iter().filter(|&&t| in_cone(rays, t, &gq)) {
        let mut chosen = vec![start];
        extend_triangulation(fan, s, &triples, &mut chosen, &mut found);
    }
    found.into_iter().collect()
}

fn open_faces(chosen: &[RaySet]) -> BTreeMap<RaySet, (usize, usize)> {
    let mut faces: BTreeMap<RaySet, (usize, usize)> = BTreeMap::new();
    for &c in chosen {
        for r in c.iter() {
            let e = faces.entry(c.without(r)).or_insert((0, r));
            e.0 += 1;
        }
    }
    faces.retain(|_, v| v.0 == 1);
    faces
}

fn extend_triangulation(
    fan: &Fan,
    s: RaySet,
    triples: &[RaySet],
    chosen: &mut Vec<RaySet>,
    found: &mut BTreeSet<Vec<RaySet>>,
) {
    let faces = open_faces(chosen);
    let Some((&face, &(_, apex))) = faces.iter().next() else {
        let used = chosen.iter().fold(RaySet::EMPTY, |a, &b| a.union(b));
        if used == s {
            let mut cones = chosen.clone();
            cones.sort();
            found.insert(cones);
        }
        return;
    };
    let ab = face.to_vec();
    let side = det3(fan, ab[0], ab[1], fan.ray(apex));
    for &t in triples {
        if !face.is_subset(t) || chosen.contains(&t) {
            continue;
        }
        let c = t.difference(face).first().expect("third ray");
        if det3(fan, ab[0], ab[1], fan.ray(c)) != -side {
            continue;
        }
        let proper = chosen.iter().all(|&o| {
            let common = o.intersection(t);
            separable(fan.dim(), fan.rays(), common, o.difference(common), t.difference(common))
        });
        if !proper {
            continue;
        }
        chosen.push(t);
        extend_triangulation(fan, s, triples, chosen, found);
        chosen.pop();
    }
}

/// Piecewise linear data `(u_σ)` of a strictly convex function on a complete
/// simplicial fan: `⟨u_σ, v_ρ⟩ ≥ ψ_ρ + 1` for `ρ ∉ σ`. Returns `ψ` on the rays.
pub fn strictly_convex_function(sigma: &Fan) -> Option<Vec<Q>> {
    let nr = sigma.num_rays();
    let mut lp = LinearProgram::new(nr);
    for &c in sigma.max_cones() {
        let basis = c.to_vec();
        let cols: Vec<Vec<Q>> = (0..sigma.dim())
            .map(|r| basis.iter().map(|&b| q(sigma.ray(b)[r])).collect())
            .collect();
        for rho in sigma.all_rays().difference(c).iter() {
            let a = solve(&cols, &to_q(sigma.ray(rho)))?;
            let mut row = vec![Q::zero(); nr];
            for (ai, &b) in a.iter().zip(&basis) {
                row[b] += ai;
            }
            row[rho] -= Q::one();
            lp.add_ge(row, Q::one());
        }
    }
    lp.feasible_point()
}

fn chamber_for(fan: &Fan, cones: Vec<RaySet>) -> Result<Option<MaximalChamber>> {
    let sigma_rays = cones.iter().fold(RaySet::EMPTY, |a, &b| a.union(b));
    let subset = fan.all_rays().difference(sigma_rays);
    let cone = GkzCone::new(fan, cones, subset)?;
    let sigma_fan = cone.sigma().to_fan(fan)?;
    let Some(psi) = strictly_convex_function(&sigma_fan) else {
        return Ok(None);
    };
    let idx = sigma_rays.to_vec();
    let n = fan.dim();
    let local: Vec<(RaySet, Vec<Q>)> = sigma_fan
        .max_cones()
        .iter()
        .map(|&c| {
            let rows: Vec<Vec<Q>> = c.iter().map(|i| to_q(sigma_fan.ray(i))).collect();
            let rhs: Vec<Q> = c.iter().map(|i| psi[i].clone()).collect();
            let u = solve(&rows, &rhs).expect("simplicial cone");
            (c.iter().map(|i| idx[i]).collect::<RaySet>(), u)
        })
        .collect();
    let mut coeffs = vec![Q::zero(); fan.num_rays()];
    for (k, &r) in idx.iter().enumerate() {
        coeffs[r] = -&psi[k];
    }
    for r in subset.iter() {
        let v = to_q(fan.ray(r));
        let value = local
            .iter()
            .map(|(_, u)| dot_iq(fan.ray(r), u))
            .min()
            .expect("a cone");
        debug_assert!(local.iter().any(|(c, _)| in_cone(fan.rays(), *c, &v)));
        coeffs[r] = Q::one() - value;
    }
    let k = Q::from_integer(denominator_lcm(coeffs.iter()));
    let sample = TWeilDivisor::new(coeffs.iter().map(|x| x * &k).collect());
    let loc = locate_chamber(fan, &sample)?;
    if !cone.contains_interior(&sample) || !loc.interior || loc.i_d != subset || loc.sigma.rays() != sigma_rays {
        return Err(Error::Inconsistent(format!(
            "sample divisor for chamber {sigma_rays:?} is not interior"
        )));
    }
    debug_assert_eq!(n, sigma_fan.dim());
    Ok(Some(MaximalChamber { cone, sample }))
}

/// Linear functions `u_σ`, one per maximal cone of `Σ`.
pub type LocalData = Vec<(RaySet, Vec<Q>)>;

/// Local data of a function that is linear on each cone of `Σ`, satisfies
/// `Ξ(v_ρ) ≥ -d_ρ` with equality off `I`, and is the minimum of its pieces.
pub fn convex_witness(fan: &Fan, cone: &GkzCone, d: &TWeilDivisor) -> Result<Option<LocalData>> {
    d.check(fan)?;
    let n = fan.dim();
    let mut local = Vec::new();
    for (&c, &inside) in cone.sigma().cones().iter().zip(cone.contained()) {
        let free = inside.difference(cone.subset()).to_vec();
        let rows: Vec<Vec<Q>> = free.iter().map(|&r| to_q(fan.ray(r))).collect();
        let rhs: Vec<Q> = free.iter().map(|&r| -d.coeff(r)).collect();
        let Some(u) = solve(&rows, &rhs) else {
            return Ok(None);
        };
        debug_assert_eq!(u.len(), n);
        let agrees = free.iter().all(|&r| dot_iq(fan.ray(r), &u) == -d.coeff(r));
        if !agrees {
            return Ok(None);
        }
        local.push((c, u));
    }
    for (c, uc) in &local {
        for (_, uo) in &local {
            if c.iter().any(|r| dot_iq(fan.ray(r), uo) < dot_iq(fan.ray(r), uc)) {
                return Ok(None);
            }
        }
    }
    for r in 0..fan.num_rays() {
        let value = local.iter().map(|(_, u)| dot_iq(fan.ray(r), u)).min().expect("a cone");
        if value < -d.coeff(r) {
            return Ok(None);
        }
    }
    Ok(Some(local))
}

/// `D̃ = D + div(χ^u) = φ_Σ(D′) + E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NefDecomposition {
    pub shift: Vec<Q>,
    pub shifted: TWeilDivisor,
    /// `u_σ - u` on each maximal cone of `Σ`, the local data of `D′`
    pub local_data: LocalData,
    /// `φ_Σ(D′)` on `Δ(1)`
    pub pulled_back: TWeilDivisor,
    /// `D′` on `Σ(1)` in increasing ray order; absent when `Σ` is degenerate
    pub nef_part: Option<TWeilDivisor>,
    pub remainder: TWeilDivisor,
}

fn same_vertices(a: &RationalPolytope, b: &RationalPolytope) -> bool {
    let sa: BTreeSet<&Vec<Q>> = a.vertices.iter().collect();
    let sb: BTreeSet<&Vec<Q>> = b.vertices.iter().collect();
    sa == sb
}

pub fn nef_decomposition(fan: &Fan, cone: &GkzCone, d: &TWeilDivisor) -> Result<NefDecomposition> {
    if !gkz_membership(fan, cone, d)? {
        return Err(Error::NotMember("divisor is not in the chamber".into()));
    }
    let (xi, _) = xi_and_id(fan, d)?;
    let mut pieces = Vec::new();
    for &c in cone.sigma().cones() {
        let w = xi
            .vertices()
            .iter()
            .find(|w| c.iter().all(|r| dot_iq(fan.ray(r), w) == *xi.at_ray(r)))
            .ok_or_else(|| Error::Inconsistent(format!("Ξ_D is not linear on {c:?}")))?;
        pieces.push((c, w.clone()));
    }
    let n = fan.dim();
    let shift = if cone.sigma().is_degenerate() {
        pieces[0].1.clone()
    } else {
        vec![Q::zero(); n]
    };
    let shifted = d + &principal(fan, &shift);
    let local_data: Vec<(RaySet, Vec<Q>)> = pieces
        .into_iter()
        .map(|(c, w)| (c, w.iter().zip(&shift).map(|(a, b)| a - b).collect()))
        .collect();
    let pulled_back = TWeilDivisor::new(
        (0..fan.num_rays())
            .map(|r| dot_iq(fan.ray(r), &shift) - xi.at_ray(r))
            .collect(),
    );
    let remainder = TWeilDivisor::new((0..fan.num_rays()).map(|r| xi.at_ray(r) + d.coeff(r)).collect());
    if remainder.coeffs().iter().any(|x| x.is_negative()) || !remainder.support().is_subset(cone.subset()) {
        return Err(Error::NotMember("remainder is not effective on I".into()));
    }
    if &pulled_back + &remainder != shifted {
        return Err(Error::Inconsistent("D̃ ≠ φ_Σ(D′) + E".into()));
    }
    if !same_vertices(&polytope_of(fan, &shifted)?, &polytope_of(fan, &pulled_back)?) {
        return Err(Error::Inconsistent("P_D̃ ≠ P_D′".into()));
    }
    let nef_part = if cone.sigma().is_degenerate() {
        None
    } else {
        let sigma_fan = cone.sigma().to_fan(fan)?;
        let part = pushforward(fan, &sigma_fan, &pulled_back)?;
        if !is_nef(&sigma_fan, &part)? {
            return Err(Error::Inconsistent("D′ is not nef on X(Σ)".into()));
        }
        Some(part)
    };
    Ok(NefDecomposition {
        shift,
        shifted,
        local_data,
        pulled_back,
        nef_part,
        remainder,
    })
}

/// `ĥ^0(D) = (f_*(D)ⁿ)` on the chamber, and `0` when `Σ` is degenerate.
/// Both sides are computed and compared.
pub fn hhat0_on_chamber(fan: &Fan, cone: &GkzCone, d: &TWeilDivisor) -> Result<Q> {
    if !gkz_membership(fan, cone, d)? {
        return Err(Error::NotMember("divisor is not in the chamber".into()));
    }
    let value = if cone.sigma().is_degenerate() {
        Q::zero()
    } else {
        let sigma_fan = cone.sigma().to_fan(fan)?;
        self_intersection(&sigma_fan, &pushforward(fan, &sigma_fan, d)?)?
    };
    let direct = hhat(fan, d)?.0[0].clone();
    if direct != value {
        return Err(Error::Inconsistent(format!(
            "chamber volume {value} differs from ĥ^0 = {direct}"
        )));
    }
    Ok(value)
}

/// Outcome of the ampleness test through asymptotic cohomology.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmpleReport {
    pub ample: bool,
    /// `ĥ^i(D) = 0` for `i > 0`
    pub higher_vanish_at_d: bool,
    /// `ĥ^i = 0` for `i > 0` at every probe `D ± δ·D_ρ`
    pub neighborhood_higher_vanish: bool,
    pub step: Q,
    /// `None` when `D` is not effective
    pub chamber: Option<ChamberLocation>,
}

pub fn ample_via_asymptotics(fan: &Fan, d: &TWeilDivisor) -> Result<bool> {
    Ok(ample_report(fan, d)?.ample)
}

/// Ample iff `D` lies in the interior of the chamber `(Δ, ∅)`. The vanishing
/// of `ĥ^{>0}` at `D` and at `2·#Δ(1)` nearby points is checked as well.
pub fn ample_report(fan: &Fan, d: &TWeilDivisor) -> Result<AmpleReport> {
    d.check(fan)?;
    if !fan.is_complete() {
        return Err(Error::NotComplete);
    }
    if !fan.is_simplicial() {
        return Err(Error::NotSimplicial(
            "the asymptotic ampleness criterion is only established for simplicial fans; \
             complete nonsimplicial toric varieties may have no nontrivial line bundles"
                .into(),
        ));
    }
    let nef_chamber = GkzCone::new(fan, fan.max_cones().to_vec(), RaySet::EMPTY)?;
    let mut step = Q::one();
    for (g, s) in nef_chamber.inequalities().iter().zip(nef_chamber.slacks(d)) {
        let spread = g.iter().map(|x| x.abs()).max().unwrap_or_default();
        if s.is_positive() && spread.is_positive() {
            let bound = s / (q(2) * spread);
            if bound < step {
                step = bound;
            }
        }
    }
    let higher_vanish_at_d = hhat(fan, d)?.higher_vanish();
    let mut neighborhood_higher_vanish = true;
    for r in 0..fan.num_rays() {
        for sign in [1, -1] {
            let mut coeffs = d.coeffs().to_vec();
            coeffs[r] += q(sign) * &step;
            if !hhat(fan, &TWeilDivisor::new(coeffs))?.higher_vanish() {
                neighborhood_higher_vanish = false;
            }
        }
    }
    let chamber = match locate_chamber(fan, d) {
        Ok(loc) => Some(loc),
        Err(Error::NotEffective) => None,
        Err(e) => return Err(e),
    };
    let ample = chamber.as_ref().is_some_and(|c| c.interior && c.is_ample_chamber(fan));
    if ample && !(higher_vanish_at_d && neighborhood_higher_vanish) {
        return Err(Error::Inconsistent("ĥ^{>0} does not vanish near an ample class".into()));
    }
    Ok(AmpleReport {
        ample,
        higher_vanish_at_d,
        neighborhood_higher_vanish,
        step,
        chamber,
    })
}
