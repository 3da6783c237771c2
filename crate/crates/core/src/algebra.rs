//! The quotient algebra of a normalized chain over the field of rational
//! functions in its free variables: standard basis, multiplication table,
//! table height and pseudo-inverses.

use std::collections::HashMap;

use serde::Serialize;

use crate::chains::NormalizedChain;
use crate::error::{Error, Result};
use crate::poly::{
    adjugate_column, determinant, gcd, matrix_prem, prem_chain, Monomial, Polynomial,
    VariableOrder,
};

/// Reduced fraction `num / den`; the denominator has coprime integer
/// coefficients and a positive leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    pub num: Polynomial,
    pub den: Polynomial,
}

impl RatFunc {
    pub fn zero() -> RatFunc {
        RatFunc::from_poly(Polynomial::zero())
    }

    pub fn from_poly(p: Polynomial) -> RatFunc {
        RatFunc {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn new(num: Polynomial, den: Polynomial) -> RatFunc {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFunc::zero();
        }
        let g = gcd(&num, &den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        let dn = den.normalize_scalar();
        // den = c * dn, fold c into the numerator
        let c = den.leading_scalar().unwrap() / dn.leading_scalar().unwrap();
        if c != crate::poly::rat(1) {
            num = num.scale(&c);
            den = dn;
        }
        RatFunc { num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn height(&self) -> u32 {
        self.num.height().max(self.den.height())
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return RatFunc::new(&self.num + &other.num, self.den.clone());
        }
        RatFunc::new(
            &self.num * &other.den + &other.num * &self.den,
            &self.den * &other.den,
        )
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::new(&self.num * &other.num, &self.den * &other.den)
    }
}

/// Element of the algebra by coordinates in the standard basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    pub coords: Vec<RatFunc>,
}

impl AlgebraElement {
    /// All coordinates are polynomials in the free variables.
    pub fn integral(&self) -> bool {
        self.coords.iter().all(RatFunc::is_polynomial)
    }

    pub fn height(&self) -> u32 {
        self.coords.iter().map(RatFunc::height).max().unwrap_or(0)
    }
}

/// `f * fbar ≡ r` modulo the chain, with `r` a nonzero polynomial in the free
/// variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoInverse {
    pub fbar: Polynomial,
    pub r: Polynomial,
}

#[derive(Clone, Debug)]
pub struct QuotientAlgebra {
    chain: NormalizedChain,
    basis: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
    /// `table[i][k]` for `i <= k` holds the coordinates of `b_i * b_k`.
    table: Vec<Vec<Vec<RatFunc>>>,
}

impl QuotientAlgebra {
    pub fn build(chain: &NormalizedChain) -> Result<QuotientAlgebra> {
        let degrees = chain.degrees();
        let basis = standard_basis(&degrees);
        let index: HashMap<Vec<u32>, usize> =
            basis.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        let mut alg = QuotientAlgebra {
            chain: chain.clone(),
            basis,
            index,
            table: Vec::new(),
        };
        let dim = alg.basis.len();
        let mut table = Vec::with_capacity(dim);
        for i in 0..dim {
            let mut row = Vec::with_capacity(dim - i);
            for k in i..dim {
                row.push(alg.reduce_basis_product(i, k)?);
            }
            table.push(row);
        }
        alg.table = table;
        Ok(alg)
    }

    fn reduce_basis_product(&self, i: usize, k: usize) -> Result<Vec<RatFunc>> {
        let exps: Vec<u32> = self.basis[i]
            .iter()
            .zip(&self.basis[k])
            .map(|(a, b)| a + b)
            .collect();
        if let Some(&j) = self.index.get(&exps) {
            let mut v = vec![RatFunc::zero(); self.dim()];
            v[j] = RatFunc::from_poly(Polynomial::one());
            return Ok(v);
        }
        let p = self.monomial(&exps);
        let m = self.chain.len();
        let top = self.chain.next_var() - 1;
        let g_top = &self.chain.polys()[m - 1];
        let d_top = g_top.deg(top);
        let (reduced, scale) = if p.deg(top) >= d_top {
            (
                matrix_prem(&p, g_top, top)?,
                g_top.lc().pow(d_top),
            )
        } else {
            (p, Polynomial::one())
        };
        let trace = prem_chain(&reduced, self.chain.set());
        let den = &scale * &trace.multiplier(self.chain.set());
        Ok(self
            .coordinates(&trace.remainder)?
            .into_iter()
            .map(|c| RatFunc::new(c, den.clone()))
            .collect())
    }

    pub fn chain(&self) -> &NormalizedChain {
        &self.chain
    }

    pub fn free(&self) -> usize {
        self.chain.free()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    /// The basis monomial with leader exponents `exps`.
    pub fn monomial(&self, exps: &[u32]) -> Polynomial {
        let mut full = vec![0; self.free()];
        full.extend_from_slice(exps);
        Polynomial::term(Monomial::from_exponents(full), crate::poly::rat(1))
    }

    pub fn basis_poly(&self, i: usize) -> Polynomial {
        self.monomial(&self.basis[i])
    }

    /// Coordinates of a reduced polynomial; coordinates may involve any
    /// variable that is not a leader of the chain.
    pub fn coordinates(&self, p: &Polynomial) -> Result<Vec<Polynomial>> {
        let lo = self.free();
        let hi = self.chain.next_var();
        let mut out = vec![Polynomial::zero(); self.dim()];
        for (key, coeff) in p.split_by(|v| v >= lo && v < hi) {
            let exps: Vec<u32> = (lo..hi).map(|v| key.exponent(v)).collect();
            let Some(&j) = self.index.get(&exps) else {
                return Err(Error::Internal(
                    "polynomial is not reduced with respect to the chain".into(),
                ));
            };
            out[j] = coeff;
        }
        Ok(out)
    }

    pub fn from_coordinates(&self, coords: &[Polynomial]) -> Polynomial {
        coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(Polynomial::zero(), |acc, (i, c)| acc + c * &self.basis_poly(i))
    }

    /// Image of a polynomial in the algebra.
    pub fn element(&self, p: &Polynomial) -> Result<AlgebraElement> {
        let trace = prem_chain(p, self.chain.set());
        let den = trace.multiplier(self.chain.set());
        Ok(AlgebraElement {
            coords: self
                .coordinates(&trace.remainder)?
                .into_iter()
                .map(|c| RatFunc::new(c, den.clone()))
                .collect(),
        })
    }

    pub fn entry(&self, i: usize, k: usize) -> &[RatFunc] {
        let (a, b) = if i <= k { (i, k) } else { (k, i) };
        &self.table[a][b - a]
    }

    pub fn multiply(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        let mut out = vec![RatFunc::zero(); self.dim()];
        for (i, ai) in a.coords.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (k, bk) in b.coords.iter().enumerate() {
                if bk.is_zero() {
                    continue;
                }
                let s = ai.mul(bk);
                for (o, t) in out.iter_mut().zip(self.entry(i, k)) {
                    if !t.is_zero() {
                        *o = o.add(&s.mul(t));
                    }
                }
            }
        }
        AlgebraElement { coords: out }
    }

    /// Maximum height over numerators and denominators of the table.
    pub fn gamma(&self) -> u32 {
        self.table
            .iter()
            .flatten()
            .flatten()
            .map(RatFunc::height)
            .max()
            .unwrap_or(0)
    }

    /// Pseudo-inverse through the adjugate of the multiplication-by-`f`
    /// matrix. `None` when that matrix is singular, i.e. `f` is a zero
    /// divisor modulo the chain.
    pub fn pinvert(&self, f: &Polynomial) -> Result<Option<PseudoInverse>> {
        if !f.only_below(self.chain.next_var()) {
            return Err(Error::InvalidInput(
                "pseudo-inverse of a polynomial outside the chain's variables".into(),
            ));
        }
        let set = self.chain.set();
        let trace = prem_chain(f, set);
        let c = trace.multiplier(set);
        let f0 = trace.remainder;
        if f0.is_zero() {
            return Ok(None);
        }
        // column k: coordinates of c_k * f0 * b_k after reduction
        let dim = self.dim();
        let mut mat = vec![vec![Polynomial::zero(); dim]; dim];
        let mut col_scale = Vec::with_capacity(dim);
        for k in 0..dim {
            let t = prem_chain(&(&f0 * &self.basis_poly(k)), set);
            col_scale.push(t.multiplier(set));
            for (j, v) in self.coordinates(&t.remainder)?.into_iter().enumerate() {
                mat[j][k] = v;
            }
        }
        let det = determinant(&mat);
        if det.is_zero() {
            return Ok(None);
        }
        let adj = adjugate_column(&mat, 0);
        let coords: Vec<Polynomial> = adj
            .iter()
            .zip(&col_scale)
            .map(|(a, s)| a * s)
            .collect();
        let fbar0 = &c * &self.from_coordinates(&coords);
        let t = prem_chain(&fbar0, set);
        let mut r = &t.multiplier(set) * &det;
        let mut fbar = t.remainder;
        if r.leading_scalar().is_some_and(|s| s < &crate::poly::rat(0)) {
            fbar = -fbar;
            r = -r;
        }
        if !prem_chain(&(f * &fbar - &r), set).remainder.is_zero() {
            return Err(Error::Internal("pseudo-inverse identity failed".into()));
        }
        Ok(Some(PseudoInverse { fbar, r }))
    }

    pub fn table_document(&self, order: &VariableOrder) -> TableDocument {
        let dim = self.dim();
        let mut entries = Vec::new();
        for i in 0..dim {
            for k in i..dim {
                entries.push(TableEntry {
                    i,
                    k,
                    coords: self
                        .entry(i, k)
                        .iter()
                        .map(|c| (order.format(&c.num), order.format(&c.den)))
                        .collect(),
                });
            }
        }
        TableDocument {
            free: self.free(),
            basis: self.basis.clone(),
            gamma: self.gamma(),
            entries,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TableEntry {
    pub i: usize,
    pub k: usize,
    /// `(numerator, denominator)` per basis coordinate.
    pub coords: Vec<(String, String)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableDocument {
    pub free: usize,
    pub basis: Vec<Vec<u32>>,
    pub gamma: u32,
    pub entries: Vec<TableEntry>,
}

/// Exponent tuples `0 <= a_s < d_s`, graded then lexicographic.
fn standard_basis(degrees: &[u32]) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = vec![Vec::new()];
    for &d in degrees {
        out = out
            .into_iter()
            .flat_map(|e| {
                (0..d).map(move |a| {
                    let mut e = e.clone();
                    e.push(a);
                    e
                })
            })
            .collect();
    }
    out.sort_by_key(|e| (e.iter().sum::<u32>(), e.clone()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s, &VariableOrder::standard(3)).unwrap()
    }

    fn alg(lines: &[&str], free: usize) -> QuotientAlgebra {
        let chain = NormalizedChain::new(lines.iter().map(|s| p(s)).collect(), free).unwrap();
        QuotientAlgebra::build(&chain).unwrap()
    }

    #[test]
    fn single_parametric_level() {
        let a = alg(&["x2^2 - x1"], 1);
        assert_eq!(a.basis(), &[vec![0], vec![1]]);
        let e = a.entry(1, 1);
        assert_eq!(e[0], RatFunc::from_poly(p("x1")));
        assert!(e[1].is_zero());
        assert_eq!(a.gamma(), 1);
    }

    #[test]
    fn scalar_tables() {
        let a = alg(&["x1^2 - 2"], 0);
        assert_eq!(a.entry(1, 1)[0], RatFunc::from_poly(p("2")));
        assert_eq!(a.gamma(), 0);
        let b = alg(&["x1^2 - 2", "x2^2 - x1"], 0);
        assert_eq!(b.dim(), 4);
        assert_eq!(b.gamma(), 0);
    }

    #[test]
    fn denominators_from_leading_coefficients() {
        let a = alg(&["x1*x2^2 - 1"], 1);
        assert_eq!(a.entry(1, 1)[0], RatFunc::new(p("1"), p("x1")));
    }

    #[test]
    fn table_multiplication_matches_reduction() {
        let a = alg(&["x1*x2^2 + x2 - 1", "(x1+1)*x3^2 + x2*x3 + x1"], 1);
        let u = p("x2*x3 + x1");
        let v = p("x3 - x2 + 2");
        let prod = a.multiply(&a.element(&u).unwrap(), &a.element(&v).unwrap());
        assert_eq!(prod, a.element(&(&u * &v)).unwrap());
    }

    #[test]
    fn pinvert_examples() {
        let a = alg(&["x2^2 - x1"], 1);
        let inv = a.pinvert(&p("x2")).unwrap().unwrap();
        assert_eq!(inv, PseudoInverse { fbar: p("x2"), r: p("x1") });
        let one = a.pinvert(&p("1")).unwrap().unwrap();
        assert_eq!(one, PseudoInverse { fbar: p("1"), r: p("1") });
        let b = alg(&["x1^2 - 1"], 0);
        assert_eq!(b.pinvert(&p("x1 - 1")).unwrap(), None);
        let empty = QuotientAlgebra::build(&NormalizedChain::empty(2)).unwrap();
        let inv = empty.pinvert(&p("x1 - x2")).unwrap().unwrap();
        assert_eq!(inv.r, p("x2 - x1"));
    }
}
