//! Pseudo-division: schoolbook with minimal exponent, by a triangular set,
//! and the fixed-exponent matrix form.

use super::matrix::{adjugate, mat_mul, mat_vec};
use super::Polynomial;
use crate::chains::TriangularSet;
use crate::error::{Error, Result};

/// `lc(g)^alpha * f = quotient * g + remainder` with `alpha` minimal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoDivisionResult {
    pub alpha: u32,
    pub quotient: Polynomial,
    pub remainder: Polynomial,
}

/// Pseudo-division of `f` by `g` as univariate polynomials in `x`.
///
/// When `deg_x f < deg_x g` the result is `(0, 0, f)`.
pub fn prem(f: &Polynomial, g: &Polynomial, x: usize) -> Result<PseudoDivisionResult> {
    let dg = match g.degree_in(x) {
        Some(d) if d >= 1 => d as usize,
        _ => return Err(Error::ZeroDegreeDivisor { var: x }),
    };
    let df = f.deg(x) as usize;
    if f.is_zero() || df < dg {
        return Ok(PseudoDivisionResult {
            alpha: 0,
            quotient: Polynomial::zero(),
            remainder: f.clone(),
        });
    }
    let gc = g.coeffs_in(x);
    let lc = gc[dg].clone();
    let mut rc = f.coeffs_in(x);
    let mut qc = vec![Polynomial::zero(); df - dg + 1];
    for k in (0..=df - dg).rev() {
        let top = rc[k + dg].clone();
        for c in qc.iter_mut().skip(k + 1) {
            *c = &*c * &lc;
        }
        qc[k] = top.clone();
        for c in rc.iter_mut().take(k + dg) {
            *c = &*c * &lc;
        }
        rc[k + dg] = Polynomial::zero();
        if !top.is_zero() {
            for (i, gi) in gc.iter().enumerate().take(dg) {
                rc[k + i] -= &(&top * gi);
            }
        }
    }
    let mut alpha = (df - dg + 1) as u32;
    rc.truncate(dg);

    if let Some(c) = lc.constant_value() {
        let inv = super::pow_rat(&c, alpha).recip();
        return Ok(PseudoDivisionResult {
            alpha: 0,
            quotient: Polynomial::from_coeffs(x, &qc).scale(&inv),
            remainder: Polynomial::from_coeffs(x, &rc).scale(&inv),
        });
    }
    // strip common powers of lc until the exponent is minimal
    'strip: while alpha > 0 {
        let mut nq = Vec::with_capacity(qc.len());
        for c in &qc {
            match c.div_exact(&lc) {
                Some(v) => nq.push(v),
                None => break 'strip,
            }
        }
        let mut nr = Vec::with_capacity(rc.len());
        for c in &rc {
            match c.div_exact(&lc) {
                Some(v) => nr.push(v),
                None => break 'strip,
            }
        }
        qc = nq;
        rc = nr;
        alpha -= 1;
    }
    Ok(PseudoDivisionResult {
        alpha,
        quotient: Polynomial::from_coeffs(x, &qc),
        remainder: Polynomial::from_coeffs(x, &rc),
    })
}

/// Record of reducing `f` by a triangular set, top element first.
///
/// `alphas[s]` and `quotients[s]` belong to the chain element `g_{s+1}`; the
/// identity `prod lc(g_s)^alpha_s * f = sum quotients[s] * g_s + remainder`
/// holds exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainReductionTrace {
    pub alphas: Vec<u32>,
    pub quotients: Vec<Polynomial>,
    pub remainder: Polynomial,
}

impl ChainReductionTrace {
    /// `prod lc(g_s)^alpha_s`.
    pub fn multiplier(&self, delta: &TriangularSet) -> Polynomial {
        delta
            .polys()
            .iter()
            .zip(&self.alphas)
            .fold(Polynomial::one(), |acc, (g, &a)| acc * g.lc().pow(a))
    }
}

pub fn prem_chain(f: &Polynomial, delta: &TriangularSet) -> ChainReductionTrace {
    let m = delta.len();
    let mut alphas = vec![0; m];
    let mut raw_q = vec![Polynomial::zero(); m];
    let mut cur = f.clone();
    for s in (0..m).rev() {
        let g = &delta.polys()[s];
        let x = delta.leaders()[s];
        if cur.deg(x) < g.deg(x) {
            continue;
        }
        let res = prem(&cur, g, x).expect("chain elements have positive degree in their leader");
        alphas[s] = res.alpha;
        raw_q[s] = res.quotient;
        cur = res.remainder;
    }
    // the quotient of level s picks up the lc powers applied below it
    let mut quotients = raw_q;
    let mut prefix = Polynomial::one();
    for s in 0..m {
        if s > 0 {
            prefix = prefix * delta.polys()[s - 1].lc().pow(alphas[s - 1]);
        }
        if !prefix.is_one() && !quotients[s].is_zero() {
            quotients[s] = &quotients[s] * &prefix;
        }
    }
    crate::meter::observe_alphas(&alphas);
    ChainReductionTrace {
        alphas,
        quotients,
        remainder: cur,
    }
}

/// Remainder of `g_d^d * f` modulo `g` through the adjugate formula
/// `r = g_d^d f_low - G_0 adj(G_d) f_up`, with `d = deg_x g`.
pub fn matrix_prem(f: &Polynomial, g: &Polynomial, x: usize) -> Result<Polynomial> {
    let d = match g.degree_in(x) {
        Some(d) if d >= 1 => d as usize,
        _ => return Err(Error::ZeroDegreeDivisor { var: x }),
    };
    if f.deg(x) as usize > 2 * d - 1 {
        return Err(Error::MatrixPremDegree {
            deg_f: f.deg(x),
            d: d as u32,
        });
    }
    let mut fc = f.coeffs_in(x);
    fc.resize(2 * d, Polynomial::zero());
    let gc = g.coeffs_in(x);
    let gd = &gc[d];

    let mut g_top = vec![vec![Polynomial::zero(); d]; d];
    let mut g_low = vec![vec![Polynomial::zero(); d]; d];
    for r in 0..d {
        for c in 0..d {
            if c <= r {
                g_top[r][c] = gc[d - r + c].clone();
            }
            if c >= r {
                g_low[r][c] = gc[c - r].clone();
            }
        }
    }
    let f_up: Vec<Polynomial> = (0..d).map(|r| fc[2 * d - 1 - r].clone()).collect();
    let f_low: Vec<Polynomial> = (0..d).map(|r| fc[d - 1 - r].clone()).collect();

    let scale = gd.pow(d as u32);
    let correction = mat_vec(&mat_mul(&g_low, &adjugate(&g_top)), &f_up);
    let mut out = vec![Polynomial::zero(); d];
    for r in 0..d {
        out[d - 1 - r] = &scale * &f_low[r] - &correction[r];
    }
    Ok(Polynomial::from_coeffs(x, &out))
}
