//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Variables are identified by their index in a [`VariableOrder`]; index 0 is
//! the lowest variable. Exponent vectors are stored with trailing zeros
//! stripped, so polynomials over different numbers of variables compare and
//! combine without padding.

mod gcd;
mod matrix;
mod parse;
mod prem;
mod subres;

pub use gcd::{content_in, gcd, gcd_all, primitive_part_in};
pub use matrix::{adjugate, adjugate_column, determinant, mat_mul, mat_vec, PolyMatrix};
pub use parse::{parse_polynomial, parse_polynomial_lines, ParseError, VariableOrder};
pub use prem::{matrix_prem, prem, prem_chain, ChainReductionTrace, PseudoDivisionResult};
pub use subres::{principal_subresultant_coeff, resultant, resultant_interpolated, subresultant};

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exponent vector. Trailing zeros are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn from_exponents(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn var(index: usize, exp: u32) -> Self {
        let mut v = vec![0; index + 1];
        v[index] = exp;
        Monomial::from_exponents(v)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exponent(&self, index: usize) -> u32 {
        self.0.get(index).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn max_exponent(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// Highest variable with a positive exponent.
    pub fn top_var(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (long, short) = if self.0.len() >= other.0.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut v = long.0.clone();
        for (i, e) in short.0.iter().enumerate() {
            v[i] += e;
        }
        Monomial(v)
    }

    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if other.0.len() > self.0.len() {
            return None;
        }
        let mut v = self.0.clone();
        for (i, e) in other.0.iter().enumerate() {
            if v[i] < *e {
                return None;
            }
            v[i] -= e;
        }
        Some(Monomial::from_exponents(v))
    }

    pub fn with_exponent(&self, index: usize, exp: u32) -> Monomial {
        let mut v = self.0.clone();
        if v.len() <= index {
            v.resize(index + 1, 0);
        }
        v[index] = exp;
        Monomial::from_exponents(v)
    }

    /// Keeps only the exponents of variables selected by `keep`.
    pub fn restrict(&self, keep: impl Fn(usize) -> bool) -> Monomial {
        Monomial::from_exponents(
            self.0
                .iter()
                .enumerate()
                .map(|(i, &e)| if keep(i) { e } else { 0 })
                .collect(),
        )
    }

    pub fn permute(&self, map: &[usize]) -> Monomial {
        let len = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| map[i] + 1)
            .max()
            .unwrap_or(0);
        let mut v = vec![0; len];
        for (i, &e) in self.0.iter().enumerate() {
            if e > 0 {
                v[map[i]] = e;
            }
        }
        Monomial::from_exponents(v)
    }
}

/// Lexicographic with the highest variable most significant.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let n = self.0.len().max(other.0.len());
        for i in (0..n).rev() {
            match self.exponent(i).cmp(&other.exponent(i)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial as a map from monomials to nonzero rational coefficients.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text(&VariableOrder::default()))
    }
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Polynomial::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn from_int(c: i64) -> Self {
        Polynomial::constant(rat(c))
    }

    pub fn var(index: usize) -> Self {
        Polynomial::term(Monomial::var(index, 1), Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut p = Polynomial::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// `var - value`.
    pub fn linear(index: usize, value: &Rational) -> Self {
        Polynomial::var(index) - Polynomial::constant(value.clone())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    /// The value of a constant polynomial (zero included).
    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    /// Leading term under the lexicographic order with the highest variable
    /// most significant.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_scalar(&self) -> Option<&Rational> {
        self.leading_term().map(|(_, c)| c)
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.exponent(var)).max()
    }

    /// Degree in `var`, with the zero polynomial reported as 0.
    pub fn deg(&self, var: usize) -> u32 {
        self.degree_in(var).unwrap_or(0)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::total_degree).max()
    }

    /// Maximum over variables of the degree in that variable.
    pub fn height(&self) -> u32 {
        self.terms
            .keys()
            .map(Monomial::max_exponent)
            .max()
            .unwrap_or(0)
    }

    pub fn leader(&self) -> Option<usize> {
        self.terms.keys().filter_map(Monomial::top_var).max()
    }

    pub fn variables(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for m in self.terms.keys() {
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    out.insert(i);
                }
            }
        }
        out
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.exponent(var) > 0)
    }

    /// True when every variable occurring is strictly below `bound`.
    pub fn only_below(&self, bound: usize) -> bool {
        self.terms.keys().all(|m| m.exponents().len() <= bound)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v.clone())).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Coefficients as a univariate polynomial in `var`; entry `k` holds the
    /// coefficient of `var^k`. Empty for the zero polynomial.
    pub fn coeffs_in(&self, var: usize) -> Vec<Polynomial> {
        let Some(deg) = self.degree_in(var) else {
            return Vec::new();
        };
        let mut out = vec![Polynomial::zero(); deg as usize + 1];
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            out[e as usize]
                .terms
                .insert(m.with_exponent(var, 0), c.clone());
        }
        out
    }

    pub fn from_coeffs(var: usize, coeffs: &[Polynomial]) -> Polynomial {
        let mut p = Polynomial::zero();
        for (k, c) in coeffs.iter().enumerate() {
            for (m, v) in &c.terms {
                p.terms.insert(m.with_exponent(var, k as u32), v.clone());
            }
        }
        p
    }

    /// Coefficient of `var^k`.
    pub fn coeff_of(&self, var: usize, k: u32) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exponent(var) == k)
                .map(|(m, c)| (m.with_exponent(var, 0), c.clone()))
                .collect(),
        }
    }

    /// Leading coefficient with respect to `var`.
    pub fn lc_in(&self, var: usize) -> Polynomial {
        match self.degree_in(var) {
            Some(d) => self.coeff_of(var, d),
            None => Polynomial::zero(),
        }
    }

    /// Leading coefficient with respect to the leader; the polynomial itself
    /// when it is constant.
    pub fn lc(&self) -> Polynomial {
        match self.leader() {
            Some(v) => self.lc_in(v),
            None => self.clone(),
        }
    }

    pub fn derivative(&self, var: usize, k: u32) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            if e < k {
                continue;
            }
            let mut factor = BigInt::one();
            for j in 0..k {
                factor *= BigInt::from(e - j);
            }
            out.terms.insert(
                m.with_exponent(var, e - k),
                c * Rational::from_integer(factor),
            );
        }
        out
    }

    /// Substitutes `value` for `var`.
    pub fn eval_var(&self, var: usize, value: &Rational) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            out.add_term(m.with_exponent(var, 0), c * pow_rat(value, e));
        }
        out
    }

    /// Evaluates at a point; variables beyond the point's length are zero.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match point.get(i) {
                    Some(v) => t *= pow_rat(v, e),
                    None => {
                        t = Rational::zero();
                        break;
                    }
                }
            }
            acc += t;
        }
        acc
    }

    /// Renames variable `i` to `map[i]`.
    pub fn permute(&self, map: &[usize]) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.permute(map), c.clone()))
                .collect(),
        }
    }

    /// Splits into coefficients with respect to the variables selected by
    /// `selected`: keys are monomials in those variables, values are
    /// polynomials in the remaining ones.
    pub fn split_by(&self, selected: impl Fn(usize) -> bool) -> BTreeMap<Monomial, Polynomial> {
        let mut out: BTreeMap<Monomial, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            let key = m.restrict(&selected);
            let rest = m.restrict(|i| !selected(i));
            out.entry(key).or_default().terms.insert(rest, c.clone());
        }
        out
    }

    /// Exact division; `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        let (lm, lc) = divisor.leading_term()?;
        if divisor.is_constant() {
            return Some(self.scale(&lc.recip()));
        }
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = Polynomial::zero();
        while let Some((rm, rc)) = rem.leading_term() {
            let m = rm.div(&lm)?;
            let c = rc / &lc;
            rem -= &divisor.mul_monomial(&m).scale(&c);
            quot.terms.insert(m, c);
        }
        Some(quot)
    }

    /// Makes the coefficients coprime integers with a positive leading
    /// coefficient. Returns the normalized polynomial.
    pub fn normalize_scalar(&self) -> Polynomial {
        match self.scalar_content() {
            Some(c) => {
                let mut p = self.scale(&c.recip());
                if p.leading_scalar().is_some_and(|c| c.is_negative()) {
                    p = -p;
                }
                p
            }
            None => Polynomial::zero(),
        }
    }

    /// Positive rational `c` such that `self / c` has coprime integer
    /// coefficients.
    pub fn scalar_content(&self) -> Option<Rational> {
        if self.is_zero() {
            return None;
        }
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        Some(Rational::new(num, den))
    }

    pub fn to_text(&self, order: &VariableOrder) -> String {
        order.format(self)
    }
}

pub(crate) fn pow_rat(v: &Rational, e: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= v;
    }
    acc
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(mut self) -> Polynomial {
        for v in self.terms.values_mut() {
            *v = -v.clone();
        }
        self
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -self.clone()
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.entry(m) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() += c;
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        let out = Polynomial { terms: acc };
        crate::meter::observe(&out);
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: &Polynomial) -> Polynomial {
                (&self).$f(rhs)
            }
        }
        impl $tr<Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                self.$f(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
