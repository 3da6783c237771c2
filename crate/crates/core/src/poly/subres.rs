//! Subresultants as determinant polynomials of Sylvester-type matrices.

use super::matrix::determinant;
use super::prem::prem;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Monomial, Polynomial, Rational};
use crate::error::{Error, Result};

struct Shape {
    a: usize,
    b: usize,
    rows_f: usize,
    rows_g: usize,
    cols: usize,
}

fn shape(j: u32, f: &Polynomial, g: &Polynomial, x: usize) -> Result<Shape> {
    let a = f.deg(x) as usize;
    let b = g.deg(x) as usize;
    if f.is_zero() || g.is_zero() || (a == 0 && b == 0) {
        return Err(Error::SubresultantConstants { var: x });
    }
    let j = j as usize;
    if j > a.min(b) {
        return Err(Error::SubresultantIndex {
            j: j as u32,
            max: a.min(b) as u32,
        });
    }
    Ok(Shape {
        a,
        b,
        rows_f: b - j,
        rows_g: a - j,
        cols: a + b - j,
    })
}

/// Rows `x^k f` (k = rows_f-1..0) then `x^k g`; column `c` holds the
/// coefficient of `x^(cols-1-c)`.
fn sylvester_rows(s: &Shape, f: &Polynomial, g: &Polynomial, x: usize) -> Vec<Vec<Polynomial>> {
    let fc = f.coeffs_in(x);
    let gc = g.coeffs_in(x);
    let mut rows = Vec::with_capacity(s.rows_f + s.rows_g);
    for (coeffs, count, deg) in [(&fc, s.rows_f, s.a), (&gc, s.rows_g, s.b)] {
        for k in (0..count).rev() {
            let mut row = vec![Polynomial::zero(); s.cols];
            for (c, slot) in row.iter_mut().enumerate() {
                let power = s.cols - 1 - c;
                if power >= k && power - k <= deg {
                    *slot = coeffs[power - k].clone();
                }
            }
            rows.push(row);
        }
    }
    rows
}

fn select_columns(rows: &[Vec<Polynomial>], cols: &[usize]) -> Vec<Vec<Polynomial>> {
    rows.iter()
        .map(|r| cols.iter().map(|&c| r[c].clone()).collect())
        .collect()
}

/// The `j`-th subresultant of `f` and `g` in `x`; `j = 0` is the resultant.
///
/// When `j = deg f = deg g` there are no rows and the result is `g`.
pub fn subresultant(j: u32, f: &Polynomial, g: &Polynomial, x: usize) -> Result<Polynomial> {
    let s = shape(j, f, g, x)?;
    let n = s.rows_f + s.rows_g;
    if n == 0 {
        return Ok(g.clone());
    }
    let rows = sylvester_rows(&s, f, g, x);
    let mut out = Polynomial::zero();
    let lead: Vec<usize> = (0..n - 1).collect();
    for i in 0..=j as usize {
        let mut cols = lead.clone();
        cols.push(s.cols - 1 - i);
        let d = determinant(&select_columns(&rows, &cols));
        if !d.is_zero() {
            out += &Polynomial::from_coeffs(x, &single(i, d));
        }
    }
    Ok(out)
}

/// Resultant in `x` by the subresultant remainder sequence. Equal to
/// `subresultant(0, f, g, x)`, without forming the Sylvester determinant.
pub fn resultant(f: &Polynomial, g: &Polynomial, x: usize) -> Result<Polynomial> {
    let (df, dg) = (f.deg(x), g.deg(x));
    if f.is_zero() || g.is_zero() || (df == 0 && dg == 0) {
        return Err(Error::SubresultantConstants { var: x });
    }
    if df == 0 {
        return Ok(f.pow(dg));
    }
    if dg == 0 {
        return Ok(g.pow(df));
    }
    let (mut a, mut b, mut negate) = if df < dg {
        (g.clone(), f.clone(), df % 2 == 1 && dg % 2 == 1)
    } else {
        (f.clone(), g.clone(), false)
    };
    let mut lead = Polynomial::one();
    let mut h = Polynomial::one();
    loop {
        let (da, db) = (a.deg(x), b.deg(x));
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            negate = !negate;
        }
        let lc_b = b.lc_in(x);
        let pr = prem(&a, &b, x)?;
        let full = if let Some(c) = lc_b.constant_value() {
            pr.remainder.scale(&super::pow_rat(&c, delta + 1))
        } else {
            &pr.remainder * &lc_b.pow(delta + 1 - pr.alpha)
        };
        if full.is_zero() {
            return Ok(Polynomial::zero());
        }
        let divisor = &lead * &h.pow(delta);
        let r = full.div_exact(&divisor).ok_or_else(|| {
            Error::Internal("subresultant sequence division was not exact".into())
        })?;
        a = b;
        b = r;
        lead = a.lc_in(x);
        h = if delta == 0 {
            h
        } else {
            lead.pow(delta)
                .div_exact(&h.pow(delta - 1))
                .ok_or_else(|| Error::Internal("subresultant h update was not exact".into()))?
        };
        if b.deg(x) == 0 {
            let da = a.deg(x);
            let out = b
                .pow(da)
                .div_exact(&h.pow(da - 1))
                .ok_or_else(|| Error::Internal("subresultant final division was not exact".into()))?;
            return Ok(if negate { -out } else { out });
        }
    }
}

/// Resultant in `x` by evaluating the other variables at integer points and
/// interpolating, one variable at a time. Points where a leading coefficient
/// in `x` vanishes are skipped so every specialization keeps its degree.
pub fn resultant_interpolated(f: &Polynomial, g: &Polynomial, x: usize) -> Result<Polynomial> {
    let (df, dg) = (f.deg(x), g.deg(x));
    if f.is_zero() || g.is_zero() || (df == 0 && dg == 0) {
        return Err(Error::SubresultantConstants { var: x });
    }
    if df == 0 || dg == 0 {
        return resultant(f, g, x);
    }
    let mut vars = f.variables();
    vars.extend(g.variables());
    vars.remove(&x);
    let Some(&v) = vars.iter().next_back() else {
        return Ok(Polynomial::constant(dense_resultant(
            f.coeffs_in(x).iter().map(constant_of).collect(),
            g.coeffs_in(x).iter().map(constant_of).collect(),
        )));
    };
    let bound = dg * f.deg(v) + df * g.deg(v);
    let (lf, lg) = (f.lc_in(x), g.lc_in(x));
    let mut points: Vec<Rational> = Vec::with_capacity(bound as usize + 1);
    let mut values: Vec<Polynomial> = Vec::with_capacity(bound as usize + 1);
    let mut k: i64 = 0;
    while points.len() <= bound as usize {
        let p = Rational::from_integer(k.into());
        k += 1;
        if lf.eval_var(v, &p).is_zero() || lg.eval_var(v, &p).is_zero() {
            continue;
        }
        values.push(resultant_interpolated(&f.eval_var(v, &p), &g.eval_var(v, &p), x)?);
        points.push(p);
    }
    Ok(newton_interpolate(&points, values, v))
}

fn constant_of(p: &Polynomial) -> Rational {
    p.constant_value().expect("coefficient is constant")
}

/// Resultant of dense univariate polynomials (constant term first, nonzero
/// leading entries). Denominators are cleared and the Sylvester determinant
/// is taken by fraction-free elimination over the integers.
fn dense_resultant(a: Vec<Rational>, b: Vec<Rational>) -> Rational {
    let (m, n) = (a.len() - 1, b.len() - 1);
    let clear = |v: &[Rational]| -> (Vec<BigInt>, BigInt) {
        let l = v.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints = v
            .iter()
            .map(|c| c.numer() * (&l / c.denom()))
            .collect();
        (ints, l)
    };
    let (ai, la) = clear(&a);
    let (bi, lb) = clear(&b);
    let size = m + n;
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for r in 0..n {
        for (k, c) in ai.iter().rev().enumerate() {
            mat[r][r + k] = c.clone();
        }
    }
    for r in 0..m {
        for (k, c) in bi.iter().rev().enumerate() {
            mat[n + r][r + k] = c.clone();
        }
    }
    let det = bareiss(mat);
    let scale = num_traits::pow(la, n) * num_traits::pow(lb, m);
    if scale.is_one() {
        Rational::from_integer(det)
    } else {
        Rational::new(det, scale)
    }
}

fn bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign {
        -det
    } else {
        det
    }
}

/// Polynomial in `v` of degree `< points.len()` taking the given values,
/// interpolated monomial by monomial of the values.
fn newton_interpolate(points: &[Rational], values: Vec<Polynomial>, v: usize) -> Polynomial {
    let n = points.len();
    let mut columns: BTreeMap<Monomial, Vec<Rational>> = BTreeMap::new();
    for (i, val) in values.iter().enumerate() {
        for (m, c) in val.terms() {
            columns
                .entry(m.clone())
                .or_insert_with(|| vec![Rational::zero(); n])[i] = c.clone();
        }
    }
    let consecutive = points
        .iter()
        .enumerate()
        .all(|(i, p)| *p == Rational::from_integer(BigInt::from(i)));
    let falling = if consecutive { falling_factorials(n) } else { Vec::new() };
    let mut out = Polynomial::zero();
    for (m, ys) in columns {
        let coeffs = if consecutive {
            interpolate_consecutive(&ys, &falling)
        } else {
            interpolate_general(points, ys)
        };
        for (k, c) in coeffs.into_iter().enumerate() {
            if !c.is_zero() {
                out.add_term(m.with_exponent(v, k as u32), c);
            }
        }
    }
    out
}

/// Row `j` holds `(n-1)!/j! * v(v-1)...(v-j+1)` as integer coefficients.
fn falling_factorials(n: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    let mut cur = vec![BigInt::one()];
    for j in 0..n {
        rows.push(cur.clone());
        // multiply by (v - j)
        let mut next = vec![BigInt::zero(); cur.len() + 1];
        for (k, c) in cur.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= c * BigInt::from(j);
        }
        cur = next;
    }
    let mut scale = BigInt::one();
    for j in (0..n).rev() {
        for c in &mut rows[j] {
            *c *= &scale;
        }
        if j > 0 {
            scale *= BigInt::from(j);
        }
    }
    rows
}

/// Values at `0, 1, ..., n-1` by integer forward differences.
fn interpolate_consecutive(ys: &[Rational], falling: &[Vec<BigInt>]) -> Vec<Rational> {
    let n = ys.len();
    let den = ys.iter().fold(BigInt::one(), |acc, y| acc.lcm(y.denom()));
    let mut d: Vec<BigInt> = ys
        .iter()
        .map(|y| y.numer() * (&den / y.denom()))
        .collect();
    // d[j] becomes the j-th forward difference at 0
    for j in 1..n {
        for i in (j..n).rev() {
            let prev = d[i - 1].clone();
            d[i] -= prev;
        }
    }
    let mut num = vec![BigInt::zero(); n];
    for (j, dj) in d.iter().enumerate() {
        if dj.is_zero() {
            continue;
        }
        for (k, c) in falling[j].iter().enumerate() {
            num[k] += dj * c;
        }
    }
    let total = (1..n).fold(BigInt::one(), |acc, j| acc * BigInt::from(j)) * den;
    num.into_iter()
        .map(|c| {
            let (q, r) = c.div_rem(&total);
            if r.is_zero() {
                Rational::from_integer(q)
            } else {
                Rational::new(c, total.clone())
            }
        })
        .collect()
}

fn interpolate_general(points: &[Rational], mut c: Vec<Rational>) -> Vec<Rational> {
    let n = points.len();
    for j in 1..n {
        for i in (j..n).rev() {
            let diff = &c[i] - &c[i - 1];
            c[i] = diff / (&points[i] - &points[i - j]);
        }
    }
    let mut out = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        // out = out * (v - p_i) + c_i
        let mut next = vec![Rational::zero(); n];
        for k in (0..n).rev() {
            if out[k].is_zero() {
                continue;
            }
            if k + 1 < n {
                next[k + 1] += &out[k];
            }
            next[k] -= &out[k] * &points[i];
        }
        next[0] += &c[i];
        out = next;
    }
    out
}

/// Coefficient of `x^j` in the formal `j`-th subresultant.
pub fn principal_subresultant_coeff(
    j: u32,
    f: &Polynomial,
    g: &Polynomial,
    x: usize,
) -> Result<Polynomial> {
    let s = shape(j, f, g, x)?;
    let n = s.rows_f + s.rows_g;
    if n == 0 {
        return Ok(g.lc_in(x));
    }
    let rows = sylvester_rows(&s, f, g, x);
    let cols: Vec<usize> = (0..n).collect();
    Ok(determinant(&select_columns(&rows, &cols)))
}

fn single(i: usize, c: Polynomial) -> Vec<Polynomial> {
    let mut v = vec![Polynomial::zero(); i + 1];
    v[i] = c;
    v
}
