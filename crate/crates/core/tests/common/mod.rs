//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tridecomp::chains::{is_squarefree_chain, NormalizedChain};
use tridecomp::poly::{Monomial, Polynomial, Rational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn int(c: i64) -> Rational {
    Rational::from_integer(BigInt::from(c))
}

/// Sparse polynomial in `vars` with per-variable degree `<= caps[k]`,
/// up to `terms` terms and coefficients in `-c..=c`.
pub fn random_poly(r: &mut ChaCha8Rng, vars: &[usize], caps: &[u32], terms: usize, c: i64) -> Polynomial {
    let n = vars.iter().max().map_or(0, |v| v + 1);
    let mut p = Polynomial::zero();
    for _ in 0..terms {
        let mut e = vec![0u32; n];
        for (&v, &cap) in vars.iter().zip(caps) {
            e[v] = r.gen_range(0..=cap);
        }
        let k = r.gen_range(-c..=c);
        p += &Polynomial::term(Monomial::from_exponents(e), int(k));
    }
    p
}

/// Normalized chain with `free` free variables, leader degrees `degrees`,
/// lc of height at most `lc_height` in the free variables. Returns the
/// first seeded attempt that certifies as squarefree regular.
pub fn random_chain(r: &mut ChaCha8Rng, free: usize, degrees: &[u32], lc_height: u32, terms: usize) -> NormalizedChain {
    loop {
        let mut polys = Vec::new();
        for (s, &ds) in degrees.iter().enumerate() {
            let y = free + s;
            let lc = if free == 0 {
                Polynomial::from_int(r.gen_range(1..=3))
            } else {
                let fv: Vec<usize> = (0..free).collect();
                let mut lc = random_poly(r, &fv, &vec![lc_height; free], 2, 3);
                if lc.is_zero() {
                    lc = Polynomial::one();
                }
                lc
            };
            let mut vars: Vec<usize> = (0..=y).collect();
            let mut caps: Vec<u32> = vec![lc_height; free];
            caps.extend(degrees[..s].iter().map(|d| d - 1));
            caps.push(ds - 1);
            vars.truncate(caps.len());
            let tail = random_poly(r, &vars, &caps, terms, 5);
            let g = &(&lc * &Polynomial::term(Monomial::var(y, ds), int(1))) + &tail;
            polys.push(g);
        }
        let Ok(chain) = NormalizedChain::new(polys, free) else {
            continue;
        };
        if is_squarefree_chain(chain.set()).is_ok() {
            return chain;
        }
    }
}
