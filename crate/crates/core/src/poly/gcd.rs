//! Multivariate gcd over the rationals by recursive primitive remainder
//! sequences.

use super::prem::prem;
use super::Polynomial;

/// Gcd normalized to coprime integer coefficients with a positive leading
/// coefficient. `gcd(0, 0) = 0`.
pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() {
        return b.normalize_scalar();
    }
    if b.is_zero() {
        return a.normalize_scalar();
    }
    if a.is_constant() || b.is_constant() {
        return Polynomial::one();
    }
    let x = a.leader().max(b.leader()).expect("nonconstant");
    if !a.involves(x) {
        return gcd(a, &content_in(b, x));
    }
    if !b.involves(x) {
        return gcd(&content_in(a, x), b);
    }
    let (ca, pa) = split_content(a, x);
    let (cb, pb) = split_content(b, x);
    let c = gcd(&ca, &cb);

    let (mut u, mut v) = if pa.deg(x) >= pb.deg(x) { (pa, pb) } else { (pb, pa) };
    loop {
        let r = prem(&u, &v, x)
            .expect("v has positive degree in x")
            .remainder;
        if r.is_zero() {
            break;
        }
        if !r.involves(x) {
            v = Polynomial::one();
            break;
        }
        u = v;
        v = primitive_part_in(&r, x);
    }
    (&c * &primitive_part_in(&v, x)).normalize_scalar()
}

pub fn gcd_all<'a>(polys: impl IntoIterator<Item = &'a Polynomial>) -> Polynomial {
    let mut acc = Polynomial::zero();
    for p in polys {
        acc = gcd(&acc, p);
        if acc.is_one() {
            break;
        }
    }
    acc
}

/// Gcd of the coefficients of `p` viewed as univariate in `x`.
pub fn content_in(p: &Polynomial, x: usize) -> Polynomial {
    gcd_all(p.coeffs_in(x).iter().filter(|c| !c.is_zero()))
}

pub fn primitive_part_in(p: &Polynomial, x: usize) -> Polynomial {
    split_content(p, x).1
}

fn split_content(p: &Polynomial, x: usize) -> (Polynomial, Polynomial) {
    if p.is_zero() {
        return (Polynomial::zero(), Polynomial::zero());
    }
    let c = content_in(p, x);
    let pp = p.div_exact(&c).expect("content divides");
    (c, pp)
}
