//! Triangular sets, membership in the represented ideal, and certificates for
//! regular and squarefree regular chains.

use serde::Serialize;

use crate::algebra::QuotientAlgebra;
use crate::error::{Error, Result};
use crate::ggcd::{ggcd, GgcdError};
use crate::poly::{prem_chain, resultant, Polynomial, VariableOrder};

/// Nonconstant polynomials with strictly increasing leaders.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct TriangularSet {
    polys: Vec<Polynomial>,
    leaders: Vec<usize>,
}

impl TriangularSet {
    pub fn new(polys: Vec<Polynomial>) -> Result<TriangularSet> {
        let mut leaders = Vec::with_capacity(polys.len());
        for (i, p) in polys.iter().enumerate() {
            let Some(l) = p.leader() else {
                return Err(Error::NotTriangular(format!("element {} is constant", i + 1)));
            };
            if leaders.last().is_some_and(|&prev| prev >= l) {
                return Err(Error::NotTriangular(format!(
                    "leader of element {} does not increase",
                    i + 1
                )));
            }
            leaders.push(l);
        }
        Ok(TriangularSet { polys, leaders })
    }

    pub fn empty() -> TriangularSet {
        TriangularSet::default()
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn leaders(&self) -> &[usize] {
        &self.leaders
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// The first `k` elements.
    pub fn prefix(&self, k: usize) -> TriangularSet {
        TriangularSet {
            polys: self.polys[..k].to_vec(),
            leaders: self.leaders[..k].to_vec(),
        }
    }

    pub fn to_lines(&self, order: &VariableOrder) -> Vec<String> {
        self.polys.iter().map(|p| order.format(p)).collect()
    }
}

/// Triangular set with leaders `x_{l+1}, ..., x_{l+m}`, leading coefficients
/// in the free variables `x_1..x_l`, and every element reduced modulo the
/// elements before it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalizedChain {
    set: TriangularSet,
    free: usize,
}

impl NormalizedChain {
    pub fn new(polys: Vec<Polynomial>, free: usize) -> Result<NormalizedChain> {
        let set = TriangularSet::new(polys)?;
        for (s, (g, &l)) in set.polys.iter().zip(&set.leaders).enumerate() {
            if l != free + s {
                return Err(Error::NotNormalized(format!(
                    "element {} has leader index {} but x{} is expected",
                    s + 1,
                    l + 1,
                    free + s + 1
                )));
            }
            if !g.lc().only_below(free) {
                return Err(Error::NotNormalized(format!(
                    "leading coefficient of element {} involves a non-free variable",
                    s + 1
                )));
            }
            for (t, g_t) in set.polys[..s].iter().enumerate() {
                if g.deg(free + t) >= g_t.deg(free + t) {
                    return Err(Error::NotNormalized(format!(
                        "element {} is not reduced with respect to element {}",
                        s + 1,
                        t + 1
                    )));
                }
            }
        }
        Ok(NormalizedChain { set, free })
    }

    pub fn empty(free: usize) -> NormalizedChain {
        NormalizedChain {
            set: TriangularSet::empty(),
            free,
        }
    }

    /// Reads a triangular set as a normalized chain, taking the free variables
    /// to be those below the first leader.
    pub fn from_set(set: TriangularSet) -> Result<NormalizedChain> {
        let free = set.leaders.first().copied().unwrap_or(0);
        NormalizedChain::new(set.polys, free)
    }

    pub fn set(&self) -> &TriangularSet {
        &self.set
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.set.polys
    }

    pub fn free(&self) -> usize {
        self.free
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    /// Index of the variable right above the chain's top leader.
    pub fn next_var(&self) -> usize {
        self.free + self.len()
    }

    /// Degrees `d_s` of each element in its leader.
    pub fn degrees(&self) -> Vec<u32> {
        self.set
            .polys
            .iter()
            .zip(&self.set.leaders)
            .map(|(g, &l)| g.deg(l))
            .collect()
    }

    pub fn prefix(&self, k: usize) -> NormalizedChain {
        NormalizedChain {
            set: self.set.prefix(k),
            free: self.free,
        }
    }

    /// Appends `g` as the next level; `g` must have leader `next_var()`.
    pub fn push(&self, g: Polynomial) -> Result<NormalizedChain> {
        let mut polys = self.set.polys.clone();
        polys.push(g);
        NormalizedChain::new(polys, self.free)
    }
}

/// `h` lies in the represented ideal iff it pseudo-reduces to zero.
pub fn rep_membership(h: &Polynomial, delta: &TriangularSet) -> bool {
    prem_chain(h, delta).remainder.is_zero()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    Triangular,
    Regular,
    SquarefreeRegular,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainCertificate {
    pub kind: CertificateKind,
    /// Level `s` (0-based) holds the iterated resultant of `lc(g_{s+1})`
    /// through `g_s, ..., g_1`.
    pub witnesses: Vec<Polynomial>,
    /// Level `s` holds the principal subresultant coefficient that certified
    /// `gcd(g_{s+1}, g_{s+1}')` has degree 0 modulo the chain below.
    pub separant_witnesses: Vec<Polynomial>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainRefusal {
    /// Iterated resultant of the leading coefficient vanished; 1-based level.
    LeadingCoefficientVanishes { level: usize },
    /// The element at this level has a repeated factor on some branch.
    NotSquarefree { level: usize, gcd_degree: u32 },
    /// Squarefreeness differs between branches; the coefficient splits them.
    SplittingRequired { level: usize, coefficient: Polynomial },
    NotNormalized(String),
    Fault(Error),
}

/// `Res_{x_{l_1}}(g_1, ... Res_{x_{l_k}}(g_k, p) ...)`, skipping elements whose
/// leader does not occur in the running value.
pub fn iterated_resultant(p: &Polynomial, delta: &TriangularSet) -> Result<Polynomial> {
    let mut r = p.clone();
    for (g, &x) in delta.polys().iter().zip(delta.leaders()).rev() {
        if r.is_zero() {
            break;
        }
        if r.involves(x) {
            r = resultant(g, &r, x)?;
        }
    }
    Ok(r)
}

/// Certifies that each leading coefficient is regular modulo the chain below
/// it by checking its iterated resultant is nonzero.
pub fn is_regular_chain(delta: &TriangularSet) -> Result<ChainCertificate, ChainRefusal> {
    let mut witnesses = Vec::with_capacity(delta.len());
    for s in 0..delta.len() {
        let lc = delta.polys()[s].lc();
        let w = iterated_resultant(&lc, &delta.prefix(s)).map_err(ChainRefusal::Fault)?;
        if w.is_zero() {
            return Err(ChainRefusal::LeadingCoefficientVanishes { level: s + 1 });
        }
        witnesses.push(w);
    }
    Ok(ChainCertificate {
        kind: CertificateKind::Regular,
        witnesses,
        separant_witnesses: Vec::new(),
    })
}

/// Certifies a normalized chain as squarefree regular: regular, and at each
/// level the generalized gcd of the element and its derivative in the leader
/// has degree 0.
pub fn is_squarefree_chain(delta: &TriangularSet) -> Result<ChainCertificate, ChainRefusal> {
    let mut cert = is_regular_chain(delta)?;
    let chain = NormalizedChain::from_set(delta.clone())
        .map_err(|e| ChainRefusal::NotNormalized(e.to_string()))?;
    for s in 0..chain.len() {
        let below = chain.prefix(s);
        let algebra = QuotientAlgebra::build(&below).map_err(ChainRefusal::Fault)?;
        let g = &chain.polys()[s];
        let x = chain.free() + s;
        let family = [g.clone(), g.derivative(x, 1)];
        match ggcd(&algebra, &family, x) {
            Ok(res) if res.degree == 0 => cert.separant_witnesses.push(res.gcd),
            Ok(res) => {
                return Err(ChainRefusal::NotSquarefree {
                    level: s + 1,
                    gcd_degree: res.degree,
                })
            }
            Err(GgcdError::NotWellDefined { coefficient }) => {
                return Err(ChainRefusal::SplittingRequired {
                    level: s + 1,
                    coefficient,
                })
            }
            Err(GgcdError::Fault(e)) => return Err(ChainRefusal::Fault(e)),
        }
    }
    cert.kind = CertificateKind::SquarefreeRegular;
    Ok(cert)
}
