#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use toric_core::divisor::{is_ample, is_nef, principal};
use toric_core::gkz::{enumerate_maximal_chambers, nef_decomposition, EnumerateOptions};
use toric_core::rational::{frac, q};
use toric_core::{Fan, TWeilDivisor, Q};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn int_divisor(rng: &mut StdRng, nrays: usize, lo: i64, hi: i64) -> TWeilDivisor {
    TWeilDivisor::from_ints(&(0..nrays).map(|_| rng.gen_range(lo..=hi)).collect::<Vec<_>>())
}

/// Coefficients `p/q` with `p ∈ [-6, 8]` and `q ∈ {1, 2, 3}`.
pub fn q_divisor(rng: &mut StdRng, nrays: usize) -> TWeilDivisor {
    TWeilDivisor::new(
        (0..nrays)
            .map(|_| frac(rng.gen_range(-6..=8), rng.gen_range(1..=3)))
            .collect(),
    )
}

pub fn int_vector(rng: &mut StdRng, n: usize, lo: i64, hi: i64) -> Vec<Q> {
    (0..n).map(|_| q(rng.gen_range(lo..=hi))).collect()
}

/// Nef divisors that are not ample: pullbacks from coarser chambers, the
/// functions `min(0, ⟨u, ·⟩)`, and principal divisors, each shifted by a
/// random principal divisor. Nontrivial classes come first.
pub fn nef_not_ample(fan: &Fan, rng: &mut StdRng, count: usize) -> Vec<TWeilDivisor> {
    let n = fan.dim();
    let mut nontrivial = Vec::new();
    if n == 2 {
        for ch in enumerate_maximal_chambers(fan, EnumerateOptions::default()).unwrap() {
            if ch.subset().is_empty() {
                continue;
            }
            let dec = nef_decomposition(fan, &ch.cone, &ch.sample).unwrap();
            nontrivial.push(dec.pulled_back);
        }
    }
    for a in -2i64..=2 {
        for b in -2i64..=2 {
            let mut u = vec![q(0); n];
            u[0] = q(a);
            u[1] = q(b);
            if n > 2 {
                u[2] = q(a - b);
            }
            let d = TWeilDivisor::new(
                fan.rays()
                    .iter()
                    .map(|v| {
                        let s: Q = v.iter().zip(&u).map(|(x, y)| q(*x) * y).sum();
                        if s < q(0) {
                            -s
                        } else {
                            q(0)
                        }
                    })
                    .collect(),
            );
            if !d.is_zero() && !nontrivial.contains(&d) {
                nontrivial.push(d);
            }
        }
    }
    let pool: Vec<TWeilDivisor> = nontrivial
        .into_iter()
        .filter(|d| is_nef(fan, d).unwrap() && !is_ample(fan, d).unwrap())
        .collect();
    let mut out = Vec::new();
    for attempt in 0..10_000usize {
        if out.len() == count {
            break;
        }
        let base = if pool.is_empty() {
            TWeilDivisor::zero(fan.num_rays())
        } else {
            let k = 1 + (attempt / pool.len()) as i64 % 3;
            pool[attempt % pool.len()].scaled(&q(k))
        };
        let d = &base + &principal(fan, &int_vector(rng, n, -2, 2));
        if !out.contains(&d) {
            out.push(d);
        }
    }
    out
}

/// Ample divisors: a scaled interior sample of the chamber `(Δ, ∅)` plus a
/// nef divisor and a principal shift.
pub fn ample_divisors(fan: &Fan, rng: &mut StdRng, count: usize) -> Vec<TWeilDivisor> {
    let chambers = enumerate_maximal_chambers(fan, EnumerateOptions::default()).unwrap();
    let base = chambers
        .into_iter()
        .find(|c| c.subset().is_empty() && c.cone.sigma().equals_fan(fan))
        .expect("projective fan")
        .sample;
    let nef = nef_not_ample(fan, rng, count);
    (0..count)
        .map(|k| {
            let scale = frac(rng.gen_range(1..=6), rng.gen_range(1..=3));
            let d = &(&base.scaled(&scale) + &nef[k]) + &principal(fan, &int_vector(rng, fan.dim(), -2, 2));
            assert!(is_ample(fan, &d).unwrap());
            d
        })
        .collect()
}
