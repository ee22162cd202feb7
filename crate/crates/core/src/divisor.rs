//! Torus-invariant Weil divisors with rational coefficients.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::linalg::solve;
use crate::rational::{dot_iq, to_q, Q};
use crate::rayset::RaySet;

/// `D = Σ d_ρ D_ρ`, coefficients indexed parallel to the fan's rays.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TWeilDivisor {
    coeffs: Vec<Q>,
}

impl TWeilDivisor {
    pub fn new(coeffs: Vec<Q>) -> Self {
        TWeilDivisor { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        TWeilDivisor::new(to_q(coeffs))
    }

    pub fn zero(nrays: usize) -> Self {
        TWeilDivisor::new(vec![Q::zero(); nrays])
    }

    /// The prime divisor `D_ρ`.
    pub fn prime(nrays: usize, ray: usize) -> Self {
        let mut d = TWeilDivisor::zero(nrays);
        d.coeffs[ray] = Q::one();
        d
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, ray: usize) -> &Q {
        &self.coeffs[ray]
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scaled(&self, c: &Q) -> Self {
        TWeilDivisor::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Support: rays with nonzero coefficient.
    pub fn support(&self) -> RaySet {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn check(&self, fan: &Fan) -> Result<()> {
        if self.len() != fan.num_rays() {
            return Err(Error::DivisorLength {
                expected: fan.num_rays(),
                got: self.len(),
            });
        }
        Ok(())
    }
}

impl Add for &TWeilDivisor {
    type Output = TWeilDivisor;
    fn add(self, rhs: &TWeilDivisor) -> TWeilDivisor {
        assert_eq!(self.len(), rhs.len());
        TWeilDivisor::new(self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &TWeilDivisor {
    type Output = TWeilDivisor;
    fn sub(self, rhs: &TWeilDivisor) -> TWeilDivisor {
        assert_eq!(self.len(), rhs.len());
        TWeilDivisor::new(self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &TWeilDivisor {
    type Output = TWeilDivisor;
    fn neg(self) -> TWeilDivisor {
        TWeilDivisor::new(self.coeffs.iter().map(|a| -a).collect())
    }
}

impl Mul<&TWeilDivisor> for &Q {
    type Output = TWeilDivisor;
    fn mul(self, rhs: &TWeilDivisor) -> TWeilDivisor {
        rhs.scaled(self)
    }
}

/// Local linear data `u_σ` with `⟨u_σ, v_ρ⟩ = -d_ρ` for the rays of each
/// maximal cone `σ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartierData {
    pub cones: Vec<(RaySet, Vec<Q>)>,
}

impl CartierData {
    pub fn u(&self, cone: RaySet) -> Option<&[Q]> {
        self.cones.iter().find(|(c, _)| *c == cone).map(|(_, u)| u.as_slice())
    }

    pub fn is_integral(&self) -> bool {
        self.cones.iter().all(|(_, u)| u.iter().all(|x| x.is_integer()))
    }

    /// `Ψ_D(v)` for `v` in the support: `⟨u_σ, v⟩` for any maximal `σ ∋ v`.
    pub fn psi(&self, fan: &Fan, v: &[Q]) -> Option<Q> {
        self.cones
            .iter()
            .find(|(c, _)| fan.cone_contains(*c, v))
            .map(|(_, u)| u.iter().zip(v).map(|(a, b)| a * b).sum())
    }
}

/// Local data `u_σ` on every maximal cone, or `None` when `D` is not ℚ-Cartier.
pub fn is_q_cartier(fan: &Fan, d: &TWeilDivisor) -> Result<Option<CartierData>> {
    d.check(fan)?;
    let mut cones = Vec::with_capacity(fan.max_cones().len());
    for &sigma in fan.max_cones() {
        let rows: Vec<Vec<Q>> = sigma.iter().map(|i| to_q(fan.ray(i))).collect();
        let rhs: Vec<Q> = sigma.iter().map(|i| -d.coeff(i)).collect();
        let u = if rows.is_empty() {
            vec![Q::zero(); fan.dim()]
        } else {
            match solve(&rows, &rhs) {
                Some(u) => u,
                None => return Ok(None),
            }
        };
        cones.push((sigma, u));
    }
    Ok(Some(CartierData { cones }))
}

/// Integral coefficients and integral local data on every maximal cone.
/// Exact for fans whose maximal cones are full-dimensional.
pub fn is_cartier(fan: &Fan, d: &TWeilDivisor) -> Result<bool> {
    Ok(d.is_integral() && is_q_cartier(fan, d)?.is_some_and(|c| c.is_integral()))
}

fn convexity(fan: &Fan, d: &TWeilDivisor, strict: bool) -> Result<bool> {
    if !fan.is_complete() {
        return Err(Error::NotComplete);
    }
    let Some(data) = is_q_cartier(fan, d)? else {
        return Ok(false);
    };
    for (sigma, u) in &data.cones {
        for rho in fan.all_rays().difference(*sigma).iter() {
            let lhs = dot_iq(fan.ray(rho), u);
            let rhs = -d.coeff(rho);
            let ok = if strict { lhs > rhs } else { lhs >= rhs };
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Ample iff ℚ-Cartier and `⟨u_σ, v_ρ⟩ > -d_ρ` for every maximal `σ` and `ρ ∉ σ`.
pub fn is_ample(fan: &Fan, d: &TWeilDivisor) -> Result<bool> {
    convexity(fan, d, true)
}

/// The weak version of [`is_ample`].
pub fn is_nef(fan: &Fan, d: &TWeilDivisor) -> Result<bool> {
    convexity(fan, d, false)
}

/// `div(χ^u) = Σ ⟨u, v_ρ⟩ D_ρ`.
pub fn principal(fan: &Fan, u: &[Q]) -> TWeilDivisor {
    TWeilDivisor::new(fan.rays().iter().map(|v| dot_iq(v, u)).collect())
}

/// `D + div(χ^u)`, a linearly equivalent divisor.
pub fn linear_equiv_shift(fan: &Fan, d: &TWeilDivisor, u: &[Q]) -> Result<TWeilDivisor> {
    d.check(fan)?;
    if u.len() != fan.dim() {
        return Err(Error::InvalidArgument(format!(
            "character has {} entries, expected {}",
            u.len(),
            fan.dim()
        )));
    }
    Ok(d + &principal(fan, u))
}

/// Coefficients scaled by `k`, where `k` clears every denominator of `d` and
/// of its local data, so that `kD` is Cartier.
pub fn cartier_multiplier(d: &TWeilDivisor, data: &CartierData) -> Q {
    let all = d.coeffs().iter().chain(data.cones.iter().flat_map(|(_, u)| u.iter()));
    Q::from_integer(crate::rational::denominator_lcm(all))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::{frac, q};

    #[test]
    fn q_cartier_data() {
        let p2 = fixtures::p2();
        let data = is_q_cartier(&p2, &TWeilDivisor::prime(3, 0)).unwrap().unwrap();
        let cone01: RaySet = [0, 1].into_iter().collect();
        assert_eq!(data.u(cone01).unwrap(), &[q(-1), q(0)]);

        let sq = fixtures::square_cone();
        assert!(is_q_cartier(&sq, &TWeilDivisor::prime(4, 0)).unwrap().is_none());

        for (_, fan) in fixtures::all() {
            let zero = TWeilDivisor::zero(fan.num_rays());
            let data = is_q_cartier(&fan, &zero).unwrap().unwrap();
            assert!(data.cones.iter().all(|(_, u)| u.iter().all(Zero::is_zero)));
        }
    }

    #[test]
    fn q_cartier_but_not_cartier() {
        let fan = fixtures::p112();
        let d = TWeilDivisor::prime(3, 0);
        let data = is_q_cartier(&fan, &d).unwrap().unwrap();
        assert!(!data.is_integral());
        assert!(!is_cartier(&fan, &d).unwrap());
        assert_eq!(cartier_multiplier(&d, &data), q(2));
        assert!(is_cartier(&fan, &d.scaled(&q(2))).unwrap());
    }

    #[test]
    fn ampleness() {
        let p2 = fixtures::p2();
        assert!(is_ample(&p2, &TWeilDivisor::prime(3, 0)).unwrap());
        assert!(!is_ample(&p2, &TWeilDivisor::zero(3)).unwrap());
        assert!(is_nef(&p2, &TWeilDivisor::zero(3)).unwrap());
        let f1 = fixtures::f1();
        assert!(!is_ample(&f1, &TWeilDivisor::prime(4, 3)).unwrap());
        assert!(is_ample(&f1, &TWeilDivisor::from_ints(&[0, 0, 2, -1])).unwrap());
        let quadrant = Fan::new(2, vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1]]).unwrap();
        assert!(matches!(
            is_ample(&quadrant, &TWeilDivisor::zero(2)),
            Err(Error::NotComplete)
        ));
        // not Q-Cartier on a complete fan
        assert!(!is_ample(&fixtures::cube_fan(), &TWeilDivisor::prime(8, 0)).unwrap());
    }

    #[test]
    fn ample_scales() {
        let f1 = fixtures::f1();
        let d = TWeilDivisor::from_ints(&[0, 0, 2, -1]);
        for c in [q(2), frac(1, 3)] {
            assert!(is_ample(&f1, &d.scaled(&c)).unwrap());
        }
    }

    #[test]
    fn shifts() {
        let p2 = fixtures::p2();
        let d = TWeilDivisor::prime(3, 0);
        let shifted = linear_equiv_shift(&p2, &d, &[q(1), q(0)]).unwrap();
        assert_eq!(shifted, TWeilDivisor::from_ints(&[2, 0, -1]));
        assert_eq!(linear_equiv_shift(&p2, &d, &[q(0), q(0)]).unwrap(), d);
        let p1 = fixtures::p1();
        let d = TWeilDivisor::from_ints(&[3, -1]);
        let s = linear_equiv_shift(&p1, &d, &[q(5)]).unwrap();
        assert_eq!(s, TWeilDivisor::from_ints(&[8, -6]));
        assert_eq!(s.coeff(0) + s.coeff(1), q(2));
    }
}
