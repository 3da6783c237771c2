//! Brute-force checkers: schoolbook pseudo-division, combinatorial solving of
//! split-linear systems, sampling comparison of a decomposition against the
//! known solution set, and a dense univariate gcd.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chains::rep_membership;
use crate::decompose::{Decomposition, InputSystem};
use crate::error::{Error, Result};
use crate::poly::PseudoDivisionResult;
use crate::poly::{Monomial, Polynomial, Rational, VariableOrder};

/// Pseudo-division by repeated cancellation of the leading term, one step
/// per degree, with the lc powers removed afterwards so that `alpha` is
/// minimal.
pub fn naive_prem(f: &Polynomial, g: &Polynomial, x: usize) -> Result<PseudoDivisionResult> {
    let dg = match g.degree_in(x) {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::ZeroDegreeDivisor { var: x }),
    };
    let lc = g.lc_in(x);
    let mut r = f.clone();
    let mut q = Polynomial::zero();
    let mut alpha = 0u32;
    while !r.is_zero() && r.deg(x) >= dg {
        let shift = Polynomial::term(Monomial::var(x, r.deg(x) - dg), Rational::one());
        let lead = &r.lc_in(x) * &shift;
        r = &(&lc * &r) - &(&lead * g);
        q = &(&lc * &q) + &lead;
        alpha += 1;
    }
    if let Some(c) = lc.constant_value() {
        let inv = num_traits::pow(c, alpha as usize).recip();
        return Ok(PseudoDivisionResult {
            alpha: 0,
            quotient: q.scale(&inv),
            remainder: r.scale(&inv),
        });
    }
    while alpha > 0 {
        match (q.div_exact(&lc), r.div_exact(&lc)) {
            (Some(q2), Some(r2)) => {
                q = q2;
                r = r2;
                alpha -= 1;
            }
            _ => break,
        }
    }
    Ok(PseudoDivisionResult {
        alpha,
        quotient: q,
        remainder: r,
    })
}

/// Each member is a scalar times a product of factors `x_j - c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitLinearSystem {
    pub n: usize,
    pub members: Vec<SplitMember>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitMember {
    pub scalar: Rational,
    /// `(variable, root)` pairs, with repetition for multiple roots.
    pub factors: Vec<(usize, Rational)>,
}

impl SplitMember {
    pub fn expand(&self) -> Polynomial {
        self.factors
            .iter()
            .fold(Polynomial::constant(self.scalar.clone()), |acc, (v, c)| {
                acc * Polynomial::linear(*v, c)
            })
    }
}

impl SplitLinearSystem {
    /// Factors every member; fails when some member does not split into
    /// rational linear univariate factors.
    pub fn from_system(system: &InputSystem) -> Result<SplitLinearSystem> {
        let members = system
            .polys()
            .iter()
            .map(split_member)
            .collect::<Result<Vec<_>>>()?;
        Ok(SplitLinearSystem {
            n: system.n(),
            members,
        })
    }

    pub fn polys(&self) -> Vec<Polynomial> {
        self.members.iter().map(SplitMember::expand).collect()
    }

    /// Random system with `r` members in `n` variables, each a product of
    /// at most `d` factors per variable with roots in `1..=d+1`.
    pub fn random(n: usize, r: usize, d: u32, seed: u64) -> SplitLinearSystem {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let members = (0..r)
            .map(|_| {
                let mut factors = Vec::new();
                while factors.is_empty() {
                    for v in 0..n {
                        let k = rng.gen_range(0..=d);
                        let mut roots: Vec<i64> = (1..=i64::from(d) + 1).collect();
                        for _ in 0..k {
                            let c = roots.remove(rng.gen_range(0..roots.len()));
                            factors.push((v, Rational::from_integer(BigInt::from(c))));
                        }
                    }
                }
                SplitMember {
                    scalar: Rational::one(),
                    factors,
                }
            })
            .collect();
        SplitLinearSystem { n, members }
    }
}

fn split_member(p: &Polynomial) -> Result<SplitMember> {
    let reject = || Error::InvalidInput(format!("not split-linear: {p:?}"));
    if p.is_zero() {
        return Err(reject());
    }
    let mut factors = Vec::new();
    let mut rebuilt = Polynomial::one();
    for v in p.variables() {
        let parts = p.split_by(|w| w != v);
        let univariate = crate::poly::gcd_all(parts.values());
        let dense = to_dense(&univariate, v).ok_or_else(reject)?;
        let roots = rational_roots(&dense).ok_or_else(reject)?;
        if roots.len() as u32 != univariate.deg(v) {
            return Err(reject());
        }
        for c in roots {
            rebuilt = rebuilt * Polynomial::linear(v, &c);
            factors.push((v, c));
        }
    }
    let scalar = p
        .div_exact(&rebuilt)
        .and_then(|s| s.constant_value())
        .ok_or_else(reject)?;
    Ok(SplitMember { scalar, factors })
}

/// Coefficients of a polynomial in `x` alone, constant term first.
pub fn to_dense(p: &Polynomial, x: usize) -> Option<Vec<Rational>> {
    p.coeffs_in(x).iter().map(Polynomial::constant_value).collect()
}

/// All rational roots with multiplicity, or `None` if the coefficients are
/// too large to enumerate candidates.
pub fn rational_roots(coeffs: &[Rational]) -> Option<Vec<Rational>> {
    let mut c = trim(coeffs.to_vec());
    let mut roots = Vec::new();
    while c.len() > 1 && c[0].is_zero() {
        c.remove(0);
        roots.push(Rational::zero());
    }
    if c.len() <= 1 {
        return Some(roots);
    }
    // clear denominators
    let l = c.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let ints: Vec<BigInt> = c.iter().map(|v| (v * Rational::from_integer(l.clone())).to_integer()).collect();
    let a0 = ints[0].abs().to_u64()?;
    let an = ints[ints.len() - 1].abs().to_u64()?;
    let limit = 1u64 << 40;
    if a0 > limit || an > limit {
        return None;
    }
    for p in divisors(a0) {
        for q in divisors(an) {
            if p.gcd(&q) != 1 {
                continue;
            }
            for sign in [1i64, -1] {
                let cand = Rational::new(BigInt::from(sign) * BigInt::from(p), BigInt::from(q));
                while c.len() > 1 && eval_dense(&c, &cand).is_zero() {
                    c = deflate(&c, &cand);
                    roots.push(cand.clone());
                }
            }
        }
    }
    roots.sort();
    Some(roots)
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut k = 1;
    while k * k <= n {
        if n.is_multiple_of(k) {
            small.push(k);
            if k * k != n {
                large.push(n / k);
            }
        }
        k += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn trim(mut c: Vec<Rational>) -> Vec<Rational> {
    while c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
    c
}

fn eval_dense(c: &[Rational], x: &Rational) -> Rational {
    c.iter().rev().fold(Rational::zero(), |acc, a| acc * x + a)
}

/// Synthetic division by `x - r`; `r` must be a root.
fn deflate(c: &[Rational], r: &Rational) -> Vec<Rational> {
    let n = c.len() - 1;
    let mut out = vec![Rational::zero(); n];
    let mut carry = Rational::zero();
    for k in (1..=n).rev() {
        carry = &c[k] + carry * r;
        out[k - 1] = carry.clone();
    }
    out
}

/// Monic gcd of dense univariate polynomials by the Euclidean algorithm.
pub fn dense_gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut u = trim(a.to_vec());
    let mut v = trim(b.to_vec());
    while !v.is_empty() {
        let r = dense_rem(&u, &v);
        u = v;
        v = r;
    }
    if let Some(lead) = u.last().cloned() {
        for c in &mut u {
            *c = &*c / &lead;
        }
    }
    u
}

fn dense_rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r = a.to_vec();
    let lb = b.last().expect("nonzero divisor");
    while r.len() >= b.len() {
        let f = r.last().expect("nonempty") / lb;
        let shift = r.len() - b.len();
        for (k, bk) in b.iter().enumerate() {
            r[shift + k] -= &f * bk;
        }
        r.pop();
        r = trim(r);
    }
    r
}

pub fn dense_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact quotient; `None` if `b` does not divide `a`.
pub fn dense_div(a: &[Rational], b: &[Rational]) -> Option<Vec<Rational>> {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return r.is_empty().then(Vec::new);
    }
    let mut q = vec![Rational::zero(); r.len() - b.len() + 1];
    let lb = b.last()?.clone();
    while r.len() >= b.len() {
        let f = r.last()? / &lb;
        let shift = r.len() - b.len();
        for (k, bk) in b.iter().enumerate() {
            r[shift + k] -= &f * bk;
        }
        q[shift] = f;
        r.pop();
        r = trim(r);
    }
    r.is_empty().then_some(q)
}

/// Dense derivative.
pub fn dense_derivative(a: &[Rational]) -> Vec<Rational> {
    a.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * Rational::from_integer(BigInt::from(k)))
        .collect()
}

/// One coordinate-subspace component: pinned variables and their values.
pub type Assignment = BTreeMap<usize, Rational>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionDescription {
    pub n: usize,
    /// Pairwise incomparable, sorted.
    pub components: Vec<Assignment>,
}

impl SolutionDescription {
    /// Every component is a linear space, so the degree is the count.
    pub fn degree(&self) -> usize {
        self.components.len()
    }

    pub fn dimension(&self, k: usize) -> usize {
        self.n - self.components[k].len()
    }

    pub fn contains(&self, point: &[Rational]) -> bool {
        self.components
            .iter()
            .any(|a| a.iter().all(|(v, c)| &point[*v] == c))
    }
}

/// Enumerates factor choices: a point solves the system iff every member has
/// a factor whose variable is pinned to its root.
pub fn split_linear_solve(system: &SplitLinearSystem) -> SolutionDescription {
    let mut found: Vec<Assignment> = Vec::new();
    choose(&system.members, 0, &mut Assignment::new(), &mut found);
    found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let mut minimal: Vec<Assignment> = Vec::new();
    for a in found {
        let redundant = minimal.iter().any(|m| m.iter().all(|(v, c)| a.get(v) == Some(c)));
        if !redundant {
            minimal.push(a);
        }
    }
    minimal.sort();
    SolutionDescription {
        n: system.n,
        components: minimal,
    }
}

fn choose(members: &[SplitMember], k: usize, cur: &mut Assignment, out: &mut Vec<Assignment>) {
    let Some(m) = members.get(k) else {
        out.push(cur.clone());
        return;
    };
    if m.scalar.is_zero() || m.factors.iter().any(|(v, c)| cur.get(v) == Some(c)) {
        choose(members, k + 1, cur, out);
        return;
    }
    for (v, c) in &m.factors {
        if cur.contains_key(v) {
            continue;
        }
        cur.insert(*v, c.clone());
        choose(members, k + 1, cur, out);
        cur.remove(v);
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct VerificationReport {
    pub sound: bool,
    pub complete: bool,
    pub truth_degree: usize,
    pub output_degree: u64,
    /// Total degree of zero-dimensional output components lying inside the
    /// positive-dimensional part of the solution set.
    pub redundant_degree: u64,
    pub samples_per_component: usize,
    pub failures: Vec<String>,
}

pub const SAMPLES_PER_COMPONENT: usize = 10;

/// Checks a decomposition of `system` against the combinatorial truth.
pub fn verify_decomposition(
    decomp: &Decomposition,
    system: &InputSystem,
    truth: &SolutionDescription,
    seed: u64,
) -> VerificationReport {
    let order = system.order();
    let mut report = VerificationReport {
        truth_degree: truth.degree(),
        samples_per_component: SAMPLES_PER_COMPONENT,
        ..VerificationReport::default()
    };
    report.output_degree = decomp.components.iter().map(|c| c.fibre_degree()).sum();

    report.sound = true;
    for (k, comp) in decomp.components.iter().enumerate() {
        for f in system.polys() {
            let fp = comp.layout.to_permuted(f, 0);
            if !rep_membership(&fp, comp.chain.set()) {
                report.sound = false;
                report.failures.push(format!(
                    "component {k}: {} not in Rep",
                    order.format(f)
                ));
            }
        }
    }

    report.complete = true;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chains: Vec<(Vec<Polynomial>, Vec<Polynomial>)> = decomp
        .components
        .iter()
        .map(|c| {
            let polys = c.original_polys();
            let inits = polys.iter().zip(c.leaders()).map(|(p, v)| p.lc_in(v)).collect();
            (polys, inits)
        })
        .collect();
    for (t, comp) in truth.components.iter().enumerate() {
        for _ in 0..SAMPLES_PER_COMPONENT {
            let point: Vec<Rational> = (0..truth.n)
                .map(|v| match comp.get(&v) {
                    Some(c) => c.clone(),
                    None => Rational::new(
                        BigInt::from(rng.gen_range(-1000i64..=1000)),
                        BigInt::from(rng.gen_range(1i64..=97)),
                    ),
                })
                .collect();
            let covered = chains.iter().any(|(polys, inits)| {
                polys.iter().all(|p| p.eval(&point).is_zero())
                    && inits.iter().all(|h| !h.eval(&point).is_zero())
            });
            if !covered {
                report.complete = false;
                report.failures.push(format!(
                    "truth component {t}: sample {} not covered",
                    format_point(&point, order)
                ));
                break;
            }
        }
    }

    // a product of random hyperplanes through each positive-dimensional
    // truth component vanishes on their union
    let mut union = Polynomial::one();
    for (t, comp) in truth.components.iter().enumerate() {
        if truth.dimension(t) == 0 {
            continue;
        }
        let mut ell = Polynomial::zero();
        for (v, c) in comp {
            let lambda = Rational::from_integer(BigInt::from(rng.gen_range(1i64..=1000)));
            ell += &Polynomial::linear(*v, c).scale(&lambda);
        }
        union = union * ell;
    }
    if !union.is_one() {
        for comp in &decomp.components {
            if comp.layout.free.is_empty() {
                let up = comp.layout.to_permuted(&union, 0);
                if rep_membership(&up, comp.chain.set()) {
                    report.redundant_degree += comp.fibre_degree();
                }
            }
        }
    }
    report
}

fn format_point(point: &[Rational], order: &VariableOrder) -> String {
    let parts: Vec<String> = point
        .iter()
        .enumerate()
        .map(|(v, c)| format!("{}={}", order.name(v), c))
        .collect();
    format!("({})", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::triangular_decompose;
    use crate::poly::prem;
    use crate::poly::{parse_polynomial, rat};

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s, &VariableOrder::standard(3)).unwrap()
    }

    fn r(v: i64) -> Rational {
        rat(v)
    }

    #[test]
    fn naive_prem_matches_prem_on_small_cases() {
        let cases = [
            ("x1^3*x2 + x2^2*x1 - 3", "x2*x1^2 + 1", 0),
            ("x1^3*x2 + x2^2*x1 - 3", "x2*x1^2 + 1", 1),
            ("x1^2 - 2", "x1^2 - 2", 0),
            ("0", "x2 + x1", 1),
            ("x3*x2 - x1", "2*x2 - 7", 1),
        ];
        for (f, g, x) in cases {
            assert_eq!(naive_prem(&p(f), &p(g), x).unwrap(), prem(&p(f), &p(g), x).unwrap(), "{f} / {g}");
        }
    }

    #[test]
    fn naive_prem_of_self_is_zero() {
        let g = p("x1*x2^2 + x2 - 1");
        assert!(naive_prem(&g, &g, 1).unwrap().remainder.is_zero());
        let z = naive_prem(&Polynomial::zero(), &g, 1).unwrap();
        assert_eq!((z.alpha, z.remainder.is_zero()), (0, true));
    }

    #[test]
    fn roots_and_gcd() {
        // (x - 1)^2 (2x + 3)
        let c = vec![r(3), r(-4), r(-1), r(2)];
        assert_eq!(rational_roots(&c).unwrap(), vec![Rational::new(BigInt::from(-3), BigInt::from(2)), r(1), r(1)]);
        let g = dense_gcd(&c, &dense_derivative(&c));
        assert_eq!(g, vec![r(-1), r(1)]);
        assert_eq!(dense_div(&c, &g).unwrap(), dense_mul(&[r(-1), r(1)], &[r(3), r(2)]));
        assert!(rational_roots(&[r(-2), r(0), r(1)]).unwrap().is_empty());
    }

    #[test]
    fn split_detection() {
        let order = VariableOrder::standard(2);
        let sys = InputSystem::parse("3*(x1 - 1)*(x1 - 2)*(x2 + 1/2)", Some(&order)).unwrap();
        let s = SplitLinearSystem::from_system(&sys).unwrap();
        assert_eq!(s.members[0].factors.len(), 3);
        assert_eq!(s.polys(), sys.polys().to_vec());
        let bad = InputSystem::parse("x1^2 - 2", Some(&order)).unwrap();
        assert!(SplitLinearSystem::from_system(&bad).is_err());
        let mixed = InputSystem::parse("x1*x2 - 1", Some(&order)).unwrap();
        assert!(SplitLinearSystem::from_system(&mixed).is_err());
    }

    #[test]
    fn solve_examples() {
        let order = VariableOrder::standard(2);
        let sys = InputSystem::parse("(x1-1)*(x1-2)*(x2-1)*(x2-2)", Some(&order)).unwrap();
        let truth = split_linear_solve(&SplitLinearSystem::from_system(&sys).unwrap());
        assert_eq!(truth.degree(), 4);
        assert!(truth.components.iter().all(|a| a.len() == 1));

        let one = InputSystem::parse("x1 - 1", Some(&order)).unwrap();
        let truth = split_linear_solve(&SplitLinearSystem::from_system(&one).unwrap());
        assert_eq!(truth.components, vec![Assignment::from([(0, r(1))])]);

        let two = InputSystem::parse("(x1-1)*(x2-1)\n(x1-1)*(x2-2)", Some(&order)).unwrap();
        let truth = split_linear_solve(&SplitLinearSystem::from_system(&two).unwrap());
        assert_eq!(truth.components, vec![Assignment::from([(0, r(1))])]);
    }

    #[test]
    fn verify_trivial_line() {
        let order = VariableOrder::standard(2);
        let sys = InputSystem::parse("x1", Some(&order)).unwrap();
        let truth = split_linear_solve(&SplitLinearSystem::from_system(&sys).unwrap());
        let dec = triangular_decompose(&sys, 7).unwrap();
        let rep = verify_decomposition(&dec, &sys, &truth, 1);
        assert!(rep.sound && rep.complete, "{rep:?}");
        // the perturbed zero-dimensional chain picks up the origin
        assert_eq!(rep.redundant_degree, 1);
    }
}
