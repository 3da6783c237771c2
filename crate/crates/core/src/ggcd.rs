//! Generalized gcd in the variable just above a squarefree regular chain,
//! taken modulo that chain.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::QuotientAlgebra;
use crate::error::Error;
use crate::poly::{prem, prem_chain, principal_subresultant_coeff, subresultant, Polynomial};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GgcdResult {
    pub gcd: Polynomial,
    /// Degree of `gcd` in the gcd variable.
    pub degree: u32,
    /// Subresultant index whose principal coefficient certified the degree.
    pub witness: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GgcdError {
    /// The gcd degree differs between branches of the chain; the coefficient
    /// is neither zero nor regular modulo the chain.
    NotWellDefined { coefficient: Polynomial },
    Fault(Error),
}

impl From<Error> for GgcdError {
    fn from(e: Error) -> Self {
        GgcdError::Fault(e)
    }
}

pub(crate) fn reduce(alg: &QuotientAlgebra, p: &Polynomial) -> Polynomial {
    prem_chain(p, alg.chain().set()).remainder
}

pub(crate) fn is_regular(alg: &QuotientAlgebra, p: &Polynomial) -> Result<bool, Error> {
    Ok(alg.pinvert(p)?.is_some())
}

/// Splits polynomials involving variables above `x` into their coefficients
/// with respect to those variables.
pub(crate) fn expand_above(polys: &[Polynomial], x: usize) -> Vec<Polynomial> {
    let mut out = Vec::new();
    for p in polys {
        if p.only_below(x + 1) {
            out.push(p.clone());
        } else {
            out.extend(p.split_by(|v| v > x).into_values());
        }
    }
    out
}

/// Reduced polynomial whose leading coefficient in `x` must be regular.
fn regular_head(alg: &QuotientAlgebra, p: &Polynomial, x: usize) -> Result<Polynomial, GgcdError> {
    let p = reduce(alg, p);
    if !p.is_zero() {
        let lc = p.lc_in(x);
        if !is_regular(alg, &lc)? {
            return Err(GgcdError::NotWellDefined { coefficient: lc });
        }
    }
    Ok(p)
}

/// Gcd of `g` (leading coefficient regular) and `p` on every branch.
fn pair(
    alg: &QuotientAlgebra,
    g: &Polynomial,
    p: &Polynomial,
    x: usize,
) -> Result<Option<GgcdResult>, GgcdError> {
    let dg = g.deg(x);
    let mut p = reduce(alg, p);
    if !p.is_zero() && p.deg(x) >= dg && dg > 0 {
        p = reduce(alg, &prem(&p, g, x)?.remainder);
    }
    if p.is_zero() {
        return Ok(None);
    }
    if dg == 0 {
        return Ok(Some(GgcdResult {
            gcd: g.clone(),
            degree: 0,
            witness: 0,
        }));
    }
    for j in 0..=p.deg(x) {
        let psc = reduce(alg, &principal_subresultant_coeff(j, g, &p, x)?);
        if psc.is_zero() {
            continue;
        }
        if !is_regular(alg, &psc)? {
            return Err(GgcdError::NotWellDefined { coefficient: psc });
        }
        let s = reduce(alg, &subresultant(j, g, &p, x)?);
        return Ok(Some(GgcdResult {
            gcd: s,
            degree: j,
            witness: j,
        }));
    }
    Err(GgcdError::Fault(Error::Internal(
        "no nonvanishing principal subresultant coefficient".into(),
    )))
}

/// Folds the family left to right. Members involving variables above `x` are
/// replaced by their coefficients in those variables.
pub fn ggcd(
    alg: &QuotientAlgebra,
    polys: &[Polynomial],
    x: usize,
) -> Result<GgcdResult, GgcdError> {
    if x != alg.chain().next_var() {
        return Err(Error::InvalidInput(format!(
            "gcd variable index {} is not the one above the chain",
            x
        ))
        .into());
    }
    let family: Vec<Polynomial> = expand_above(polys, x)
        .iter()
        .map(|p| reduce(alg, p))
        .filter(|p| !p.is_zero())
        .collect();
    let Some((first, rest)) = family.split_first() else {
        return Err(Error::InvalidInput("generalized gcd of zero polynomials".into()).into());
    };
    let mut acc = GgcdResult {
        gcd: regular_head(alg, first, x)?,
        degree: first.deg(x),
        witness: first.deg(x),
    };
    for p in rest {
        if acc.degree == 0 {
            break;
        }
        if let Some(r) = pair(alg, &acc.gcd, p, x)? {
            acc = r;
        }
    }
    Ok(acc)
}

/// Gcd of `g` and the rest of the family when its degree is known to be `v`
/// on every branch. The rest is collapsed into one seeded random integer
/// combination; unlucky combinations are retried.
pub fn ggcd_with_degree(
    alg: &QuotientAlgebra,
    g: &Polynomial,
    rest: &[Polynomial],
    x: usize,
    v: u32,
    seed: u64,
) -> Result<Polynomial, Error> {
    let g = reduce(alg, g);
    let members: Vec<Polynomial> = expand_above(rest, x)
        .iter()
        .map(|p| reduce(alg, p))
        .filter(|p| !p.is_zero())
        .collect();
    let dg = g.deg(x);
    if members.is_empty() {
        return if v == dg {
            Ok(g)
        } else {
            Err(Error::Internal(format!(
                "gcd degree {} expected but the family reduces to g alone",
                v
            )))
        };
    }
    if v == dg {
        return Err(Error::Internal(
            "gcd degree equals deg g but the family does not vanish".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..8 {
        let combo = members.iter().fold(Polynomial::zero(), |acc, p| {
            acc + p.scale(&crate::poly::rat(rng.gen_range(1..=97)))
        });
        let mut p = reduce(alg, &combo);
        if p.deg(x) >= dg {
            p = reduce(alg, &prem(&p, &g, x)?.remainder);
        }
        if p.is_zero() || p.deg(x) < v {
            continue;
        }
        let mut ok = true;
        for j in 0..v {
            if !reduce(alg, &principal_subresultant_coeff(j, &g, &p, x)?).is_zero() {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        let psc = reduce(alg, &principal_subresultant_coeff(v, &g, &p, x)?);
        if psc.is_zero() || !is_regular(alg, &psc)? {
            continue;
        }
        return Ok(reduce(alg, &subresultant(v, &g, &p, x)?));
    }
    Err(Error::Internal(format!(
        "no random combination certified gcd degree {}",
        v
    )))
}
