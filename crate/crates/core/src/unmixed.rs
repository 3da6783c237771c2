//! Recursive splitting of a normalized chain into squarefree regular chains
//! on whose components `f` vanishes and `h` does not.
//!
//! For a chain of length one the components come straight from gcds over the
//! field of rational functions in the free variables. Longer chains encode
//! the degrees of six generalized gcds of the top element as equations and
//! inequations over the chain below, split that chain recursively, and build
//! the new top element from the gcds on each piece.

use std::collections::{BTreeMap, HashMap};

use crate::algebra::QuotientAlgebra;
use crate::chains::NormalizedChain;
use crate::error::{Error, Result};
use crate::ggcd::{expand_above, ggcd_with_degree, reduce};
use crate::poly::{
    gcd_all, prem, prem_chain, primitive_part_in, principal_subresultant_coeff, Monomial, Polynomial,
};

/// Family `t` (0-based) of the six gcds: offset from `i` of the highest
/// derivative, and whether `h` joins the family.
const FAMILIES: [(i64, bool); 6] = [
    (-1, false),
    (0, false),
    (1, false),
    (-1, true),
    (0, true),
    (1, true),
];

/// `(later, earlier)`: the later family contains the earlier one, so its gcd
/// degree cannot be larger.
const DIVISIBILITY: [(usize, usize); 7] = [(1, 0), (2, 1), (3, 0), (4, 1), (4, 3), (5, 2), (5, 4)];

#[derive(Clone, Debug)]
pub struct Component {
    pub chain: NormalizedChain,
    pub algebra: QuotientAlgebra,
}

#[derive(Clone, Debug, Default)]
pub struct UnmixedOutput {
    /// Sorted by chain, without duplicates.
    pub components: Vec<Component>,
    /// Per level, the largest leader degree over all components.
    pub leader_degrees: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiPsiPair {
    pub i: u32,
    pub v: [u32; 6],
    pub phi: Polynomial,
    pub psi: Polynomial,
}

/// Degree of the top element produced for gcd degrees `v`.
pub fn expected_degree(v: &[u32; 6]) -> i64 {
    let v: Vec<i64> = v.iter().map(|&a| a as i64).collect();
    v[0] + v[2] + 2 * v[4] - 2 * v[1] - v[3] - v[5]
}

pub fn unmixed(
    delta: &NormalizedChain,
    f: &Polynomial,
    h: &Polynomial,
    seed: u64,
) -> Result<UnmixedOutput> {
    let algebra = QuotientAlgebra::build(delta)?;
    let runner = Runner::new(delta, f, h, seed);
    let f = reduce(&algebra, f);
    let h = reduce(&algebra, h);
    let comps = runner.run(delta, &algebra, &f, std::slice::from_ref(&h))?;
    let mut leader_degrees = vec![0; delta.len()];
    for c in &comps {
        for (s, d) in c.chain.degrees().into_iter().enumerate() {
            leader_degrees[s] = leader_degrees[s].max(d);
        }
    }
    Ok(UnmixedOutput {
        components: comps,
        leader_degrees,
    })
}

/// The pair `(phi, psi)` for top-level index `i` and gcd degrees `v`,
/// reduced modulo the chain below the top element.
pub fn phi_psi(
    delta: &NormalizedChain,
    f: &Polynomial,
    h: &Polynomial,
    i: u32,
    v: [u32; 6],
) -> Result<PhiPsiPair> {
    if delta.is_empty() {
        return Err(Error::InvalidInput("phi/psi needs a nonempty chain".into()));
    }
    let runner = Runner::new(delta, f, h, 0);
    let lam = delta.prefix(delta.len() - 1);
    let lam_alg = QuotientAlgebra::build(&lam)?;
    let mut level = Level::new(&runner, delta, lam_alg, f, std::slice::from_ref(h))?;
    if i == 0 || i > level.d || v.iter().any(|&a| a > level.d) {
        return Err(Error::InvalidInput("index or degree tuple out of range".into()));
    }
    let (phi, factors) = level.partial_phi_psi(i, &v, 6)?;
    let psi = product_mod(&factors, &lam);
    Ok(PhiPsiPair { i, v, phi, psi })
}

struct Runner {
    seed: u64,
    aux_base: usize,
    top: usize,
}

impl Runner {
    fn new(delta: &NormalizedChain, f: &Polynomial, h: &Polynomial, seed: u64) -> Runner {
        let used = [f, h]
            .iter()
            .filter_map(|p| p.variables().last().copied())
            .max()
            .map_or(0, |v| v + 1);
        Runner {
            seed,
            aux_base: used.max(delta.next_var()),
            top: delta.len(),
        }
    }

    /// Fresh `(y, z, w)` for a chain of length `m`; each level owns its own.
    fn aux_vars(&self, m: usize) -> (usize, usize, usize) {
        let b = self.aux_base + 3 * (self.top - m);
        (b, b + 1, b + 2)
    }

    /// `hs` stands for the product of its members.
    fn run(
        &self,
        delta: &NormalizedChain,
        alg: &QuotientAlgebra,
        f: &Polynomial,
        hs: &[Polynomial],
    ) -> Result<Vec<Component>> {
        match delta.len() {
            0 => Ok(if f.is_zero() && hs.iter().all(|h| !h.is_zero()) {
                vec![Component {
                    chain: delta.clone(),
                    algebra: alg.clone(),
                }]
            } else {
                Vec::new()
            }),
            1 => self.univariate(delta, f, hs),
            _ => self.general(delta, f, hs),
        }
    }

    /// Chains of length one: multiplicity classes from ordinary gcds.
    fn univariate(&self, delta: &NormalizedChain, f: &Polynomial, hs: &[Polynomial]) -> Result<Vec<Component>> {
        let g = &delta.polys()[0];
        let x = delta.free();
        let d = g.deg(x);
        if hs.iter().any(|h| h.is_zero()) {
            return Ok(Vec::new());
        }
        // the factor of g whose roots kill f, and the one whose roots kill h
        let f_part = vanishing_part(g, f, x);
        if f_part.deg(x) == 0 {
            return Ok(Vec::new());
        }
        let mut h_part = Polynomial::one();
        for h in hs {
            h_part = &h_part * &vanishing_part(g, h, x);
        }
        // raised to order at least the multiplicity of every root of g
        let f_sat = (f_part.deg(x) < d).then(|| power_mod(&f_part, g, x, d));
        let h_sat = (h_part.deg(x) > 0).then(|| power_mod(&h_part, g, x, d));
        // gcds[k] = gcd(g, g', ..., g^(k), f); with_h[k] also includes h
        let mut gcds = Vec::with_capacity(d as usize + 2);
        let mut acc = match &f_sat {
            Some(fs) => gcd_all([g, fs]),
            None => g.clone(),
        };
        for k in 0..=d + 1 {
            if k > 0 {
                acc = gcd_all([&acc, &g.derivative(x, k)]);
            }
            gcds.push(primitive_part_in(&acc, x));
        }
        let with_h: Vec<Polynomial> = gcds
            .iter()
            .map(|gk| match &h_sat {
                Some(hs) => primitive_part_in(&gcd_all([gk, hs]), x),
                None => Polynomial::one(),
            })
            .collect();
        let mut out = Vec::new();
        for i in 1..=d as usize {
            let num = &(&gcds[i - 1] * &gcds[i + 1]) * &with_h[i].pow(2);
            let den = &(&gcds[i].pow(2) * &with_h[i - 1]) * &with_h[i + 1];
            let q = num
                .div_exact(&den)
                .ok_or_else(|| Error::Internal("multiplicity quotient is not exact".into()))?;
            let q = primitive_part_in(&q, x).normalize_scalar();
            if q.deg(x) >= 1 {
                let chain = NormalizedChain::new(vec![q], delta.free())?;
                let algebra = QuotientAlgebra::build(&chain)?;
                out.push(Component { chain, algebra });
            }
        }
        Ok(canonical(out))
    }

    fn general(&self, delta: &NormalizedChain, f: &Polynomial, hs: &[Polynomial]) -> Result<Vec<Component>> {
        let m = delta.len();
        let lam = delta.prefix(m - 1);
        let lam_alg = QuotientAlgebra::build(&lam)?;
        let mut level = Level::new(self, delta, lam_alg, f, hs)?;
        let mut out = Vec::new();
        for i in 1..=level.d {
            let mut v = [0u32; 6];
            self.search(&mut level, i, &mut v, 0, &mut out)?;
        }
        Ok(canonical(out))
    }

    /// Depth-first choice of `v[t]`; a prefix whose partial system has no
    /// components over the lower chain is abandoned.
    fn search(
        &self,
        level: &mut Level,
        i: u32,
        v: &mut [u32; 6],
        t: usize,
        out: &mut Vec<Component>,
    ) -> Result<()> {
        if t == 6 {
            if expected_degree(v) < 1 {
                return Ok(());
            }
            let Some(pieces) = self.split(level, i, v, 6)? else {
                return Ok(());
            };
            for piece in pieces {
                out.push(self.compute_q(level, &piece, i, v)?);
            }
            return Ok(());
        }
        let candidates = level.admissible(i, t)?;
        for val in candidates {
            if DIVISIBILITY
                .iter()
                .any(|&(later, earlier)| later == t && val > v[earlier])
            {
                continue;
            }
            v[t] = val;
            if t < 5 && self.split(level, i, v, t + 1)?.is_none() {
                continue;
            }
            self.search(level, i, v, t + 1, out)?;
        }
        Ok(())
    }

    /// Components of the lower chain for the first `len` families of `v`;
    /// `None` when there are none.
    fn split(
        &self,
        level: &mut Level,
        i: u32,
        v: &[u32; 6],
        len: usize,
    ) -> Result<Option<Vec<Component>>> {
        let (phi, psi) = level.partial_phi_psi(i, v, len)?;
        if psi.iter().any(|p| p.is_zero()) || has_unit_coefficient(&phi, level.lam_alg.chain()) {
            return Ok(None);
        }
        let comps = self.run(level.lam_alg.chain(), &level.lam_alg, &phi, &psi)?;
        Ok((!comps.is_empty()).then_some(comps))
    }

    fn compute_q(&self, level: &Level, piece: &Component, i: u32, v: &[u32; 6]) -> Result<Component> {
        let alg = &piece.algebra;
        let x = level.x;
        let g = reduce(alg, &level.g);
        let mut bars = Vec::with_capacity(6);
        for (t, &(off, with_h)) in FAMILIES.iter().enumerate() {
            let k = (i as i64 + off) as u32;
            let mut rest: Vec<Polynomial> = (1..=k).map(|l| level.g.derivative(x, l)).collect();
            rest.push(level.f.clone());
            if with_h {
                rest.push(level.h.clone());
            }
            let seed = self
                .seed
                .wrapping_mul(0x9E37_79B9_7F4A_7C15)
                .wrapping_add((i as u64) << 8 | t as u64);
            let d_t = ggcd_with_degree(alg, &g, &rest, x, v[t], seed)?;
            let inv = alg.pinvert(&d_t.lc_in(x))?.ok_or_else(|| {
                Error::Internal("leading coefficient of a generalized gcd is a zero divisor".into())
            })?;
            bars.push(reduce(alg, &(&inv.fbar * &d_t)));
        }
        let p1 = &(&bars[0] * &bars[2]) * &bars[4].pow(2);
        let p2 = &(&bars[1].pow(2) * &bars[3]) * &bars[5];
        let q = if p2.deg(x) == 0 {
            p1
        } else {
            let res = prem(&p1, &p2, x)?;
            if !reduce(alg, &res.remainder).is_zero() {
                return Err(Error::Internal("gcd quotient leaves a remainder".into()));
            }
            res.quotient
        };
        let q = strip_free_content(&reduce(alg, &q), alg.free()).normalize_scalar();
        if q.deg(x) as i64 != expected_degree(v) {
            return Err(Error::Internal(format!(
                "new top element has degree {} but the gcd degrees predict {}",
                q.deg(x),
                expected_degree(v)
            )));
        }
        let chain = piece.chain.push(q)?;
        let algebra = QuotientAlgebra::build(&chain)?;
        Ok(Component { chain, algebra })
    }
}

/// Subresultant data of one level: `g` against `sum_{l<=k} g^(l) y^(l-1) +
/// f y^k [+ z h]`.
struct Level {
    lam_alg: QuotientAlgebra,
    g: Polynomial,
    f: Polynomial,
    h: Polynomial,
    x: usize,
    d: u32,
    y: usize,
    z: usize,
    w: usize,
    /// Reduced principal subresultant coefficients `j = 0..=deg F`; empty
    /// when the combination is zero.
    pscs: HashMap<(u32, bool), Vec<Polynomial>>,
}

impl Level {
    fn new(
        runner: &Runner,
        delta: &NormalizedChain,
        lam_alg: QuotientAlgebra,
        f: &Polynomial,
        hs: &[Polynomial],
    ) -> Result<Level> {
        let m = delta.len();
        let g = delta.polys()[m - 1].clone();
        let x = delta.next_var() - 1;
        let (y, z, w) = runner.aux_vars(m);
        let d = g.deg(x);
        Ok(Level {
            d,
            f: saturate(f, delta, x, d),
            h: product_mod(
                &hs.iter().map(|h| saturate(h, delta, x, d)).collect::<Vec<_>>(),
                delta,
            ),
            g,
            x,
            y,
            z,
            w,
            lam_alg,
            pscs: HashMap::new(),
        })
    }

    fn family(&mut self, k: u32, with_h: bool) -> Result<&[Polynomial]> {
        if !self.pscs.contains_key(&(k, with_h)) {
            // f gets the power y^k of its own so it never merges with g'
            let mut comb = &self.f * &Polynomial::term(Monomial::var(self.y, k), crate::poly::rat(1));
            for l in 1..=k {
                let term = Polynomial::term(Monomial::var(self.y, l - 1), crate::poly::rat(1));
                comb += &(&self.g.derivative(self.x, l) * &term);
            }
            if with_h {
                comb += &(&self.h * &Polynomial::var(self.z));
            }
            let mut list = Vec::new();
            if !comb.is_zero() {
                for j in 0..=comb.deg(self.x) {
                    let c = principal_subresultant_coeff(j, &self.g, &comb, self.x)?;
                    // units over the free variables change neither vanishing nor regularity
                    let c = reduce(&self.lam_alg, &c);
                    list.push(strip_free_content(&c, self.lam_alg.free()).normalize_scalar());
                }
            }
            self.pscs.insert((k, with_h), list);
        }
        Ok(&self.pscs[&(k, with_h)])
    }

    fn family_of(&mut self, i: u32, t: usize) -> Result<&[Polynomial]> {
        let (off, with_h) = FAMILIES[t];
        self.family((i as i64 + off) as u32, with_h)
    }

    /// Degrees the gcd of family `t` can take on some component.
    fn admissible(&mut self, i: u32, t: usize) -> Result<Vec<u32>> {
        let d = self.d;
        let list = self.family_of(i, t)?;
        let mut out: Vec<u32> = list
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, _)| j as u32)
            .collect();
        out.push(d);
        Ok(out)
    }

    /// `phi` collects, with distinct powers of `w`, every coefficient that
    /// must vanish for the first `len` gcd degrees to be `v`; `psi` lists the
    /// coefficients that must not.
    fn partial_phi_psi(&mut self, i: u32, v: &[u32; 6], len: usize) -> Result<(Polynomial, Vec<Polynomial>)> {
        let d = self.d;
        let w = self.w;
        let mut phi = Polynomial::zero();
        let mut psi = Vec::new();
        let mut power = 0u32;
        for (t, &vt) in v.iter().enumerate().take(len) {
            let list = self.family_of(i, t)?.to_vec();
            for c in list.iter().take(vt as usize) {
                if !c.is_zero() {
                    let wp = Polynomial::term(Monomial::var(w, power), crate::poly::rat(1));
                    phi += &(c * &wp);
                }
                power += 1;
            }
            if vt < d {
                match list.get(vt as usize) {
                    Some(c) if c.is_constant() && !c.is_zero() => {}
                    Some(c) => psi.push(c.clone()),
                    None => psi.push(Polynomial::zero()),
                }
            }
        }
        Ok((phi, psi))
    }
}

/// Product modulo the chain, with units over the free variables removed.
fn product_mod(factors: &[Polynomial], delta: &NormalizedChain) -> Polynomial {
    let mut acc = Polynomial::one();
    for h in factors {
        acc = prem_chain(&(&acc * h), delta.set()).remainder;
        acc = strip_free_content(&acc, delta.free()).normalize_scalar();
    }
    acc
}

/// Gcd of `g` with the coefficients of `p` in the variables above `x`.
fn vanishing_part(g: &Polynomial, p: &Polynomial, x: usize) -> Polynomial {
    let coeffs = expand_above(std::slice::from_ref(p), x);
    primitive_part_in(&gcd_all(std::iter::once(g).chain(coeffs.iter())), x)
}

/// `a^n` modulo `g` in `x`, content removed.
fn power_mod(a: &Polynomial, g: &Polynomial, x: usize, n: u32) -> Polynomial {
    let reduce_g = |p: &Polynomial| {
        let r = if p.deg(x) >= g.deg(x) {
            prem(p, g, x).expect("g has positive degree").remainder
        } else {
            p.clone()
        };
        primitive_part_in(&r, x)
    };
    let mut acc = reduce_g(a);
    for _ in 1..n {
        acc = reduce_g(&(&acc * a));
    }
    acc
}

/// Raises every coefficient of `p` in the variables above `x` to the power
/// `n`, reduced modulo the chain. The zero set is unchanged, but each
/// coefficient now vanishes to order at least `n` wherever it vanishes, which
/// the multiplicity count behind the six gcds relies on once `g` has repeated
/// roots.
fn saturate(p: &Polynomial, delta: &NormalizedChain, x: usize, n: u32) -> Polynomial {
    if n <= 1 || p.is_zero() {
        return p.clone();
    }
    let mut out = Polynomial::zero();
    for (mono, c) in p.split_by(|v| v > x) {
        let mut acc = c.clone();
        for _ in 1..n {
            acc = prem_chain(&(&acc * &c), delta.set()).remainder;
            acc = strip_free_content(&acc, delta.free()).normalize_scalar();
        }
        out += &acc.mul_monomial(&mono);
    }
    out
}

/// Some coefficient of `phi` in the variables above the chain is a nonzero
/// polynomial in the free variables, so `phi` vanishes on no component.
fn has_unit_coefficient(phi: &Polynomial, chain: &NormalizedChain) -> bool {
    let top = chain.next_var();
    phi.split_by(|v| v >= top)
        .values()
        .any(|c| !c.is_zero() && c.only_below(chain.free()))
}

/// Removes the gcd of the coefficients that lie in the free variables.
fn strip_free_content(q: &Polynomial, free: usize) -> Polynomial {
    if q.is_zero() {
        return q.clone();
    }
    let parts = q.split_by(|v| v >= free);
    let c = gcd_all(parts.values());
    if c.is_constant() {
        q.clone()
    } else {
        q.div_exact(&c).expect("content divides")
    }
}

fn canonical(comps: Vec<Component>) -> Vec<Component> {
    let mut map: BTreeMap<NormalizedChain, QuotientAlgebra> = BTreeMap::new();
    for c in comps {
        map.entry(c.chain).or_insert(c.algebra);
    }
    map.into_iter()
        .map(|(chain, algebra)| Component { chain, algebra })
        .collect()
}
