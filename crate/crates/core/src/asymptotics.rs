//! Asymptotic cohomology `ĥ^i`, self-intersection numbers and exact partial
//! derivatives of `ĥ^0` inside a chamber.

use num_traits::{One, Signed, Zero};

use crate::cohomology::h_all;
use crate::divisor::{cartier_multiplier, is_q_cartier, TWeilDivisor};
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::gkz::{locate_chamber, GkzCone};
use crate::homology::local_cohomology_ranks;
use crate::polyhedra::{bounded_subsets, region, volume_of_bounded, DEFAULT_SUBSET_CAP};
use crate::rational::{factorial, pow, q, Q};

/// `(ĥ^0, …, ĥ^n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AsymptoticVector(pub Vec<Q>);

impl AsymptoticVector {
    pub fn get(&self, i: usize) -> &Q {
        &self.0[i]
    }

    pub fn alternating_sum(&self) -> Q {
        self.0
            .iter()
            .enumerate()
            .map(|(i, h)| if i % 2 == 0 { h.clone() } else { -h })
            .sum()
    }

    /// Whether `ĥ^i = 0` for every `i > 0`.
    pub fn higher_vanish(&self) -> bool {
        self.0.iter().skip(1).all(Zero::is_zero)
    }
}

fn require_complete(fan: &Fan, d: &TWeilDivisor) -> Result<()> {
    d.check(fan)?;
    if !fan.is_complete() {
        return Err(Error::NotComplete);
    }
    Ok(())
}

/// `ĥ^i(D) = Σ_{I bounded} h^i_{|Δ_I|}(N_ℝ) · vol P_{D,I}` with normalized volume.
pub fn hhat(fan: &Fan, d: &TWeilDivisor) -> Result<AsymptoticVector> {
    require_complete(fan, d)?;
    let mut h = vec![Q::zero(); fan.dim() + 1];
    for subset in bounded_subsets(fan, DEFAULT_SUBSET_CAP)? {
        let profile = local_cohomology_ranks(fan, subset);
        if profile.is_zero() {
            continue;
        }
        let vol = volume_of_bounded(&region(fan, d, subset)?);
        if vol.is_zero() {
            continue;
        }
        for (hi, &r) in h.iter_mut().zip(&profile.0) {
            if r > 0 {
                *hi += q(r as i64) * &vol;
            }
        }
    }
    Ok(AsymptoticVector(h))
}

/// A single `ĥ^i`, summing only the regions whose profile is nonzero in degree `i`.
pub fn hhat_component(fan: &Fan, d: &TWeilDivisor, i: usize) -> Result<Q> {
    require_complete(fan, d)?;
    if i > fan.dim() {
        return Ok(Q::zero());
    }
    let mut total = Q::zero();
    for subset in bounded_subsets(fan, DEFAULT_SUBSET_CAP)? {
        let r = local_cohomology_ranks(fan, subset).get(i);
        if r > 0 {
            total += q(r as i64) * volume_of_bounded(&region(fan, d, subset)?);
        }
    }
    Ok(total)
}

/// `(Dⁿ) = (-1)ⁿ Σ_{I bounded} χ(Δ_I) · vol P_{D,I}`. For ℚ-Cartier `D` the
/// formula is applied to a Cartier multiple `kD` and divided by `kⁿ`.
pub fn self_intersection(fan: &Fan, d: &TWeilDivisor) -> Result<Q> {
    require_complete(fan, d)?;
    let data = is_q_cartier(fan, d)?.ok_or(Error::NotQCartier)?;
    let k = cartier_multiplier(d, &data);
    let kd = d.scaled(&k);
    let n = fan.dim();
    let mut total = Q::zero();
    for subset in bounded_subsets(fan, DEFAULT_SUBSET_CAP)? {
        let chi = fan.subfan(subset).chi();
        if chi == 0 {
            continue;
        }
        total += q(chi) * volume_of_bounded(&region(fan, &kd, subset)?);
    }
    if n % 2 == 1 {
        total = -total;
    }
    Ok(total / pow(&k, n))
}

/// `((Dⁿ), Σ (-1)^i ĥ^i(D))`; the two agree for ℚ-Cartier `D`.
pub fn asymptotic_rr_check(fan: &Fan, d: &TWeilDivisor) -> Result<(Q, Q)> {
    let lhs = self_intersection(fan, d)?;
    let rhs = hhat(fan, d)?.alternating_sum();
    Ok((lhs, rhs))
}

/// One row of a convergence probe toward `ĥ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitRow {
    pub m: usize,
    /// `h^i(mD) · n!/mⁿ`
    pub scaled: Vec<Q>,
}

/// `h^i(mD) · n!/mⁿ` for `m = 1..=m_max`. Requires integral `D`.
pub fn limit_probe(fan: &Fan, d: &TWeilDivisor, m_max: usize) -> Result<Vec<LimitRow>> {
    require_complete(fan, d)?;
    if !d.is_integral() {
        return Err(Error::InvalidArgument("limit probe needs integral coefficients".into()));
    }
    let n = fan.dim();
    let nfact = Q::from_integer(factorial(n));
    (1..=m_max)
        .map(|m| {
            let mq = q(m as i64);
            let h = h_all(fan, &d.scaled(&mq))?;
            let scale = &nfact / pow(&mq, n);
            Ok(LimitRow {
                m,
                scaled: h.0.iter().map(|&x| q(x as i64) * &scale).collect(),
            })
        })
        .collect()
}

/// Nodes `0, 1, -1, 2, -2, …` (count `k`).
fn nodes(k: usize) -> Vec<i64> {
    (0..k)
        .map(|j| {
            let s = j.div_ceil(2) as i64;
            if j % 2 == 1 {
                s
            } else {
                -s
            }
        })
        .collect()
}

/// Weights `w_k = L_k'(0)` of the Lagrange basis on the given nodes, scaled by
/// step `h`: `p'(0) = Σ w_k p(h·s_k)` for every polynomial of degree `< #nodes`.
fn derivative_weights(nodes: &[i64], h: &Q) -> Vec<Q> {
    nodes
        .iter()
        .enumerate()
        .map(|(k, &sk)| {
            // L_k(t) = Π_{j≠k} (t - s_j)/(s_k - s_j) in the unscaled variable.
            let mut poly = vec![Q::one()];
            let mut denom = Q::one();
            for (j, &sj) in nodes.iter().enumerate() {
                if j == k {
                    continue;
                }
                let mut next = vec![Q::zero(); poly.len() + 1];
                for (e, c) in poly.iter().enumerate() {
                    next[e + 1] += c;
                    next[e] -= c * q(sj);
                }
                poly = next;
                denom *= q(sk - sj);
            }
            poly.get(1).cloned().unwrap_or_default() / denom / h
        })
        .collect()
}

/// Exact `∂^r ĥ^0 / ∂D_{ρ_1} ⋯ ∂D_{ρ_r}` at `D`, which must lie in the
/// interior of a maximal chamber. The chamber polynomial has degree `n`, so
/// a tensor grid of `n + 1` nodes per direction recovers it exactly.
pub fn mixed_partial_h0(fan: &Fan, d: &TWeilDivisor, rays: &[usize]) -> Result<Q> {
    require_complete(fan, d)?;
    let n = fan.dim();
    if rays.is_empty() || rays.len() > n {
        return Err(Error::InvalidArgument(format!("need between 1 and {n} rays")));
    }
    let mut seen = crate::rayset::RaySet::EMPTY;
    for &r in rays {
        if r >= fan.num_rays() || seen.contains(r) {
            return Err(Error::InvalidArgument(format!("bad or repeated ray index {r}")));
        }
        seen.insert(r);
    }
    let loc = locate_chamber(fan, d)?;
    if !loc.interior {
        return Err(Error::OnWall);
    }
    let chamber = GkzCone::new(fan, loc.sigma.cones().to_vec(), loc.i_d)?;
    let reach = q(n.div_ceil(2) as i64);
    let mut h = Q::one();
    for (form, slack) in chamber.inequalities().iter().zip(chamber.slacks(d)) {
        let spread: Q = rays.iter().map(|&r| form[r].abs()).sum();
        if spread.is_zero() {
            continue;
        }
        if !slack.is_positive() {
            return Err(Error::OnWall);
        }
        let bound = slack / (q(2) * &reach * spread);
        if bound < h {
            h = bound;
        }
    }
    if h.is_zero() {
        return Err(Error::StepUnderflow);
    }
    let grid = nodes(n + 1);
    let weights = derivative_weights(&grid, &h);
    let r = rays.len();
    let mut total = Q::zero();
    let mut idx = vec![0usize; r];
    loop {
        let w: Q = idx.iter().map(|&k| weights[k].clone()).product();
        if !w.is_zero() {
            let mut coeffs = d.coeffs().to_vec();
            for (j, &k) in idx.iter().enumerate() {
                coeffs[rays[j]] += &h * q(grid[k]);
            }
            let point = TWeilDivisor::new(coeffs);
            if !chamber.contains_interior(&point) {
                return Err(Error::Inconsistent("finite-difference grid left the chamber".into()));
            }
            total += w * hhat_component(fan, &point, 0)?;
        }
        let mut j = 0;
        loop {
            if j == r {
                return Ok(total);
            }
            idx[j] += 1;
            if idx[j] < grid.len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::frac;

    fn qs(xs: &[i64]) -> Vec<Q> {
        xs.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn derivative_weights_are_exact_on_polynomials() {
        let grid = nodes(4);
        let h = frac(1, 3);
        let w = derivative_weights(&grid, &h);
        // p(t) = 2 + 5t - t^2 + 7t^3, p'(0) = 5
        let p = |t: Q| q(2) + q(5) * &t - &t * &t + q(7) * &t * &t * &t;
        let val: Q = grid.iter().zip(&w).map(|(&s, wk)| wk * p(&h * q(s))).sum();
        assert_eq!(val, q(5));
    }

    #[test]
    fn hhat_examples() {
        let p2 = fixtures::p2();
        assert_eq!(hhat(&p2, &TWeilDivisor::from_ints(&[3, 0, 0])).unwrap().0, qs(&[9, 0, 0]));
        let p1 = fixtures::p1();
        assert_eq!(hhat(&p1, &TWeilDivisor::from_ints(&[0, -2])).unwrap().0, qs(&[0, 2]));
        let b = fixtures::p1xp1();
        assert_eq!(hhat(&b, &TWeilDivisor::from_ints(&[2, 0, -3, 0])).unwrap().0, qs(&[0, 12, 0]));
        assert_eq!(hhat_component(&b, &TWeilDivisor::from_ints(&[2, 0, -3, 0]), 1).unwrap(), q(12));
    }

    #[test]
    fn hhat_requires_complete() {
        let fan = fixtures::square_cone();
        let d = TWeilDivisor::zero(fan.num_rays());
        assert!(matches!(hhat(&fan, &d), Err(Error::NotComplete)));
    }

    #[test]
    fn self_intersection_examples() {
        let p2 = fixtures::p2();
        for d in 1..=4 {
            assert_eq!(self_intersection(&p2, &TWeilDivisor::from_ints(&[d, 0, 0])).unwrap(), q(d * d));
            assert_eq!(self_intersection(&p2, &TWeilDivisor::from_ints(&[-d, 0, 0])).unwrap(), q(d * d));
        }
        let p1 = fixtures::p1();
        for a in -3..=3 {
            assert_eq!(self_intersection(&p1, &TWeilDivisor::from_ints(&[0, a])).unwrap(), q(a));
        }
        // On P(1,1,2) the divisor D_0 is only ℚ-Cartier, with (D_0²) = 1/2.
        let p112 = fixtures::p112();
        assert_eq!(self_intersection(&p112, &TWeilDivisor::from_ints(&[1, 0, 0])).unwrap(), frac(1, 2));
        assert!(matches!(
            self_intersection(&fixtures::cube_fan(), &TWeilDivisor::prime(8, 0)),
            Err(Error::NotQCartier)
        ));
    }

    #[test]
    fn rr_check_examples() {
        let p2 = fixtures::p2();
        assert_eq!(asymptotic_rr_check(&p2, &TWeilDivisor::from_ints(&[3, 0, 0])).unwrap(), (q(9), q(9)));
        assert_eq!(asymptotic_rr_check(&p2, &TWeilDivisor::from_ints(&[-3, 0, 0])).unwrap(), (q(9), q(9)));
        let b = fixtures::p1xp1();
        assert_eq!(
            asymptotic_rr_check(&b, &TWeilDivisor::from_ints(&[2, 0, -3, 0])).unwrap(),
            (q(-12), q(-12))
        );
    }

    #[test]
    fn limit_probe_converges() {
        let p1 = fixtures::p1();
        let rows = limit_probe(&p1, &TWeilDivisor::from_ints(&[0, -2]), 5).unwrap();
        // h^1(-2m) = 2m - 1
        for row in rows {
            assert_eq!(row.scaled[1], q(2 * row.m as i64 - 1) / q(row.m as i64));
        }
    }

    #[test]
    fn mixed_partials() {
        let p2 = fixtures::p2();
        let d = TWeilDivisor::from_ints(&[3, 0, 0]);
        assert_eq!(mixed_partial_h0(&p2, &d, &[0, 1]).unwrap(), q(2));
        assert_eq!(mixed_partial_h0(&p2, &d, &[0]).unwrap(), q(6));
        let p112 = fixtures::p112();
        let d = TWeilDivisor::from_ints(&[2, 0, 0]);
        assert_eq!(mixed_partial_h0(&p112, &d, &[0, 2]).unwrap(), q(1));
        assert_eq!(mixed_partial_h0(&p112, &d, &[0, 1]).unwrap(), q(2));
        assert!(matches!(
            mixed_partial_h0(&p2, &TWeilDivisor::zero(3), &[0]),
            Err(Error::OnWall)
        ));
    }
}
