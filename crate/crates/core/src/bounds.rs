//! Closed-form degree, height and component-count bounds.
//!
//! Values are kept as rational intervals. Binary logarithms of integers that
//! are not powers of two are enclosed to [`LOG_BITS`] bits, so the upper end
//! of every interval is a valid bound and the lower end a valid underestimate.
//! A second evaluator works with `f64` in the log domain and is only used to
//! cross-check the first.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Bits of every logarithm enclosure; a little over 50 decimal digits.
pub const LOG_BITS: u32 = 168;
pub const DECIMAL_DIGITS: usize = 50;

fn big(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Closed interval `[lo, hi]` of nonnegative rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bound {
    lo: BigRational,
    hi: BigRational,
}

impl Bound {
    pub fn exact(v: BigRational) -> Bound {
        Bound { lo: v.clone(), hi: v }
    }

    pub fn int(n: u64) -> Bound {
        Bound::exact(big(n))
    }

    pub fn from_big(n: &BigUint) -> Bound {
        Bound::exact(BigRational::from_integer(BigInt::from(n.clone())))
    }

    pub fn lower(&self) -> &BigRational {
        &self.lo
    }

    /// The bound value: never smaller than the true value.
    pub fn upper(&self) -> &BigRational {
        &self.hi
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn add(&self, o: &Bound) -> Bound {
        Bound {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }

    /// Monotone on nonnegative operands.
    pub fn mul(&self, o: &Bound) -> Bound {
        Bound {
            lo: &self.lo * &o.lo,
            hi: &self.hi * &o.hi,
        }
    }

    pub fn pow(&self, e: u32) -> Bound {
        Bound {
            lo: num_traits::pow(self.lo.clone(), e as usize),
            hi: num_traits::pow(self.hi.clone(), e as usize),
        }
    }

    /// Division by a positive interval.
    pub fn div(&self, o: &Bound) -> Bound {
        Bound {
            lo: &self.lo / &o.hi,
            hi: &self.hi / &o.lo,
        }
    }

    pub fn max(&self, o: &Bound) -> Bound {
        Bound {
            lo: self.lo.clone().max(o.lo.clone()),
            hi: self.hi.clone().max(o.hi.clone()),
        }
    }

    /// Binary logarithm of a positive interval.
    pub fn log2(&self) -> Bound {
        let (lo_num, _) = log2_int(&self.lo.numer().magnitude().clone(), LOG_BITS);
        let (_, lo_den) = log2_int(&self.lo.denom().magnitude().clone(), LOG_BITS);
        let (_, hi_num) = log2_int(&self.hi.numer().magnitude().clone(), LOG_BITS);
        let (hi_den, _) = log2_int(&self.hi.denom().magnitude().clone(), LOG_BITS);
        Bound {
            lo: lo_num - lo_den,
            hi: hi_num - hi_den,
        }
    }

    /// Whether `v` is certainly at most this bound.
    pub fn admits(&self, v: &BigRational) -> bool {
        v <= &self.hi
    }

    /// Upper end in scientific notation with `digits` significant digits,
    /// rounded up.
    pub fn to_scientific(&self, digits: usize) -> String {
        scientific(&self.hi, digits, true)
    }

    /// Midpoint as a float, for logging and cross-checks.
    pub fn to_f64(&self) -> f64 {
        let mid = (&self.lo + &self.hi) / big(2);
        rational_to_f64(&mid)
    }

    /// `log2` of the upper end as a float; usable for values past the `f64`
    /// range.
    pub fn log2_f64(&self) -> f64 {
        log2_rational_f64(&self.hi)
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() && self.hi.is_integer() && self.hi.numer().bits() <= 64 {
            write!(f, "{}", self.hi.numer())
        } else {
            f.write_str(&self.to_scientific(DECIMAL_DIGITS))
        }
    }
}

impl Serialize for Bound {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn rational_to_f64(v: &BigRational) -> f64 {
    v.to_f64().unwrap_or_else(|| log2_rational_f64(v).exp2())
}

fn log2_big_f64(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap_or(f64::INFINITY).log2();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.log2() + shift as f64
}

fn log2_rational_f64(v: &BigRational) -> f64 {
    log2_big_f64(v.numer().magnitude()) - log2_big_f64(v.denom().magnitude())
}

/// Enclosure `[lo, hi]` of `log2 n` with width at most `2^-bits`, computed by
/// repeated squaring on outward-rounded fixed-point values.
pub fn log2_int(n: &BigUint, bits: u32) -> (BigRational, BigRational) {
    assert!(!n.is_zero(), "log2 of zero");
    let k = n.bits() - 1;
    let int_part = big(k);
    if n.count_ones() == 1 {
        return (int_part.clone(), int_part);
    }
    let p = 2 * bits as u64 + 64;
    let scale = BigUint::one() << p;
    let two = BigUint::one() << (p + 1);
    // y = n / 2^k in [1, 2), scaled by 2^p
    let (mut y_lo, mut y_hi) = if p >= k {
        let v = n << (p - k);
        (v.clone(), v)
    } else {
        let (q, r) = (n >> (k - p), n % (BigUint::one() << (k - p)));
        let hi = if r.is_zero() { q.clone() } else { &q + 1u32 };
        (q, hi)
    };
    let mut frac = BigUint::zero();
    let mut done = 0u32;
    for _ in 0..bits {
        y_lo = (&y_lo * &y_lo) >> p;
        let sq = &y_hi * &y_hi;
        y_hi = {
            let (q, r) = sq.div_rem(&scale);
            if r.is_zero() {
                q
            } else {
                q + 1u32
            }
        };
        frac <<= 1;
        if y_lo >= two {
            frac += 1u32;
            y_lo >>= 1;
            y_hi = (&y_hi + 1u32) >> 1;
        } else if y_hi >= two {
            // the next bit is undecided at this working precision
            frac >>= 1;
            break;
        }
        done += 1;
    }
    let den = BigRational::from_integer(BigInt::from(BigUint::one() << done));
    let lo = &int_part + BigRational::from_integer(BigInt::from(frac)) / &den;
    let hi = &lo + BigRational::one() / den;
    (lo, hi)
}

/// `log2 n` as a bound interval.
pub fn log2_bound(n: u64) -> Bound {
    let (lo, hi) = log2_int(&BigUint::from(n), LOG_BITS);
    Bound { lo, hi }
}

fn scientific(v: &BigRational, digits: usize, round_up: bool) -> String {
    if v.is_zero() {
        return "0".into();
    }
    let neg = v.is_negative();
    let a = v.abs();
    // e with 10^e <= a < 10^(e+1)
    let approx = log2_rational_f64(&a) * std::f64::consts::LOG10_2;
    let mut e = approx.floor() as i64;
    let ten = big(10);
    let pow10 = |k: i64| -> BigRational {
        if k >= 0 {
            num_traits::pow(ten.clone(), k as usize)
        } else {
            BigRational::one() / num_traits::pow(ten.clone(), (-k) as usize)
        }
    };
    while a < pow10(e) {
        e -= 1;
    }
    while a >= pow10(e + 1) {
        e += 1;
    }
    let scaled = &a * pow10(digits as i64 - 1 - e);
    let mut m = if round_up != neg { scaled.ceil() } else { scaled.floor() }.to_integer();
    let limit = num_traits::pow(BigInt::from(10), digits);
    if m >= limit {
        m /= 10;
        e += 1;
    }
    let s = m.to_string();
    let (head, tail) = s.split_at(1);
    let tail = tail.trim_end_matches('0');
    let sign = if neg { "-" } else { "" };
    if tail.is_empty() {
        format!("{sign}{head}e{e}")
    } else {
        format!("{sign}{head}.{tail}e{e}")
    }
}

fn require(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("bound parameters out of range: {what}")))
    }
}

/// Largest height of a structure constant: `(d+2)^(m+1) (log2(d+2))^(m-1)`.
pub fn gamma_bound(d: u32, m: u32) -> Result<Bound> {
    require(d >= 1 && m >= 1, "need d >= 1, m >= 1")?;
    let d2 = u64::from(d) + 2;
    Ok(Bound::int(d2).pow(m + 1).mul(&log2_bound(d2).pow(m - 1)))
}

/// Exponent of `lc(g_s)` in a reduction: `t (d+1)^(m-s)`.
pub fn denom_exponent_bound(t: u32, d: u32, m: u32, s: u32) -> Result<BigUint> {
    require(s >= 1 && s <= m, "need 1 <= s <= m")?;
    Ok(BigUint::from(t) * num_traits::pow(BigUint::from(d + 1), (m - s) as usize))
}

/// `(6d)^(m-s) (input_m + 7 (d+2)^m (log2(d+2))^(m-1))`.
pub fn input_bound(s: u32, m: u32, d: u32, input_m: &Bound) -> Result<Bound> {
    require(s <= m && d >= 2 && m >= 2, "need s <= m, d >= 2, m >= 2")?;
    let d2 = u64::from(d) + 2;
    let inner = Bound::int(7)
        .mul(&Bound::int(d2).pow(m))
        .mul(&log2_bound(d2).pow(m - 1));
    Ok(Bound::int(6 * u64::from(d)).pow(m - s).mul(&input_m.add(&inner)))
}

/// `6(d+2)(16 d^s + 16 d log2(32d) + log2(d+2))`.
pub fn c_of_s(s: u32, d: u32) -> Result<Bound> {
    require(d >= 2, "need d >= 2")?;
    let d = u64::from(d);
    let inner = Bound::int(16)
        .mul(&Bound::int(d).pow(s))
        .add(&Bound::int(16 * d).mul(&log2_bound(32 * d)))
        .add(&log2_bound(d + 2));
    Ok(Bound::int(6 * (d + 2)).mul(&inner))
}

/// `5.2 * 242^m (d^2+2d)^m d^(m(m+1)/2) (max{d, d_f, d_h} + 7(d+2)^m
/// (log2(d+2))^(m-1)) log2 d`.
pub fn output_height_bound(m: u32, d: u32, d_f: u32, d_h: u32) -> Result<Bound> {
    require(d >= 2 && m >= 2, "need d >= 2, m >= 2")?;
    let d64 = u64::from(d);
    let top = u64::from(d.max(d_f).max(d_h));
    let tail = Bound::int(top).add(
        &Bound::int(7)
            .mul(&Bound::int(d64 + 2).pow(m))
            .mul(&log2_bound(d64 + 2).pow(m - 1)),
    );
    Ok(Bound::exact(ratio(26, 5))
        .mul(&Bound::int(242).pow(m))
        .mul(&Bound::int(d64 * d64 + 2 * d64).pow(m))
        .mul(&Bound::int(d64).pow(m * (m + 1) / 2))
        .mul(&tail)
        .mul(&log2_bound(d64)))
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeBound {
    pub b: Bound,
    /// `log_d(B/n)/m^3 - 1/2`.
    pub epsilon: Bound,
}

/// `B(m, d) = 5.2 n 242^m (d^(2m) + 2d^m)^m d^(m^2(m+1)/2) (max{d^m, r} +
/// 7(d^m+2)^m (log2(d^m+2))^(m-1)) log2(d^m)`, with its exponent slack.
pub fn degree_bound_b(n: u32, m: u32, d: u32, r: u32) -> Result<DegreeBound> {
    require(d >= 2 && m >= 2 && n >= 1, "need d >= 2, m >= 2, n >= 1")?;
    let dm = num_traits::pow(BigUint::from(d), m as usize);
    let dm_b = Bound::from_big(&dm);
    let dm2 = &dm + 2u32;
    let log_dm2 = {
        let (lo, hi) = log2_int(&dm2, LOG_BITS);
        Bound { lo, hi }
    };
    let tail = dm_b.max(&Bound::int(u64::from(r))).add(
        &Bound::int(7)
            .mul(&Bound::from_big(&dm2).pow(m))
            .mul(&log_dm2.pow(m - 1)),
    );
    let base = dm_b.pow(2).add(&Bound::int(2).mul(&dm_b));
    let log_d = log2_bound(u64::from(d));
    let b = Bound::exact(ratio(26, 5))
        .mul(&Bound::int(u64::from(n)))
        .mul(&Bound::int(242).pow(m))
        .mul(&base.pow(m))
        .mul(&Bound::int(u64::from(d)).pow(m * m * (m + 1) / 2))
        .mul(&tail)
        .mul(&Bound::int(u64::from(m)).mul(&log_d));
    let m3 = Bound::int(u64::from(m).pow(3));
    let ratio_log = b.div(&Bound::int(u64::from(n))).log2().div(&log_d).div(&m3);
    let half = ratio(1, 2);
    let epsilon = Bound {
        lo: &ratio_log.lo - &half,
        hi: &ratio_log.hi - &half,
    };
    Ok(DegreeBound { b, epsilon })
}

/// `binom(n, m) ((m+1) d^m + 1)^m`.
pub fn component_bound(n: u32, m: u32, d: u32) -> Result<BigUint> {
    require(m >= 1 && m <= n, "need 1 <= m <= n")?;
    let binom = (0..m).fold(BigUint::one(), |acc, k| acc * (n - k) / (k + 1));
    let inner = BigUint::from(m + 1) * num_traits::pow(BigUint::from(d), m as usize) + 1u32;
    Ok(binom * num_traits::pow(inner, m as usize))
}

/// Right-hand side of the product inequality for `C(s)`:
/// `(678*387/242^2) (242(d+2))^m d^(m(m+1)/2) log2 d`.
pub fn c_product_bound(m: u32, d: u32) -> Result<Bound> {
    require(d >= 2 && m >= 1, "need d >= 2")?;
    let d64 = u64::from(d);
    Ok(Bound::exact(ratio(678 * 387, 242 * 242))
        .mul(&Bound::int(242 * (d64 + 2)).pow(m))
        .mul(&Bound::int(d64).pow(m * (m + 1) / 2))
        .mul(&log2_bound(d64)))
}

/// Right-hand side of the sum inequality for `C(s)`:
/// `(387*4/967) (242(d+2))^(m-1) d^(m(m+1)/2 - 1)`.
pub fn c_sum_bound(m: u32, d: u32) -> Result<Bound> {
    require(d >= 2 && m >= 2, "need d >= 2, m >= 2")?;
    let d64 = u64::from(d);
    Ok(Bound::exact(ratio(387 * 4, 967))
        .mul(&Bound::int(242 * (d64 + 2)).pow(m - 1))
        .mul(&Bound::int(d64).pow(m * (m + 1) / 2 - 1)))
}

/// One cell of the pseudo-remainder comparison table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GmCell {
    #[serde(serialize_with = "as_decimal")]
    pub ours: BigUint,
    #[serde(serialize_with = "as_decimal")]
    pub theirs: BigUint,
}

fn as_decimal<S: serde::Serializer>(n: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

impl GmCell {
    pub fn theirs_smaller(&self) -> bool {
        self.theirs < self.ours
    }
}

/// Degree and height of a pseudo-remainder by a chain, our bound against the
/// characteristic-set bound. Columns: inputs bounded by height, inputs
/// bounded by degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GmTable {
    pub degree_height_col: GmCell,
    pub degree_degree_col: GmCell,
    pub height_height_col: GmCell,
    pub height_degree_col: GmCell,
}

impl GmTable {
    pub fn cells(&self) -> [(&'static str, &GmCell); 4] {
        [
            ("degree/height-bounded", &self.degree_height_col),
            ("degree/degree-bounded", &self.degree_degree_col),
            ("height/height-bounded", &self.height_height_col),
            ("height/degree-bounded", &self.height_degree_col),
        ]
    }
}

pub fn gm_comparison(n: u32, m: u32, d: u32, t: u32) -> GmTable {
    let p = |b: u32, e: u32| num_traits::pow(BigUint::from(b), e as usize);
    let ours_deg = BigUint::from(n) * BigUint::from(t) * p(d + 1, m);
    let ours_height = BigUint::from(t) * p(d + 1, m);
    let theirs_h = BigUint::from(n * t + 1) * p(n * d + 1, m);
    let theirs_d = BigUint::from(t + 1) * p(d + 1, m);
    GmTable {
        degree_height_col: GmCell {
            ours: ours_deg.clone(),
            theirs: theirs_h.clone(),
        },
        degree_degree_col: GmCell {
            ours: ours_deg,
            theirs: theirs_d.clone(),
        },
        height_height_col: GmCell {
            ours: ours_height.clone(),
            theirs: theirs_h,
        },
        height_degree_col: GmCell {
            ours: ours_height,
            theirs: theirs_d,
        },
    }
}

/// Float evaluations in the log domain, written independently of the
/// interval code above. Each returns `log2` of the bound.
pub mod float {
    fn log2_sum(a: f64, b: f64) -> f64 {
        // log2(2^a + 2^b)
        let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
        hi + (1.0 + (lo - hi).exp2()).log2()
    }

    pub fn gamma_bound(d: u32, m: u32) -> f64 {
        let d2 = f64::from(d) + 2.0;
        f64::from(m + 1) * d2.log2() + f64::from(m - 1) * d2.log2().log2()
    }

    pub fn input_bound(s: u32, m: u32, d: u32, log2_input_m: f64) -> f64 {
        let d2 = f64::from(d) + 2.0;
        let inner = 7f64.log2() + f64::from(m) * d2.log2() + f64::from(m - 1) * d2.log2().log2();
        f64::from(m - s) * (6.0 * f64::from(d)).log2() + log2_sum(log2_input_m, inner)
    }

    pub fn c_of_s(s: u32, d: u32) -> f64 {
        let d = f64::from(d);
        (6.0 * (d + 2.0) * (16.0 * d.powi(s as i32) + 16.0 * d * (32.0 * d).log2() + (d + 2.0).log2())).log2()
    }

    pub fn output_height_bound(m: u32, d: u32, d_f: u32, d_h: u32) -> f64 {
        let (mf, df) = (f64::from(m), f64::from(d));
        let top = f64::from(d.max(d_f).max(d_h)).log2();
        let inner = 7f64.log2() + mf * (df + 2.0).log2() + (mf - 1.0) * (df + 2.0).log2().log2();
        5.2f64.log2()
            + mf * 242f64.log2()
            + mf * (df * df + 2.0 * df).log2()
            + mf * (mf + 1.0) / 2.0 * df.log2()
            + log2_sum(top, inner)
            + df.log2().log2()
    }

    /// `(log2 B, epsilon)`.
    pub fn degree_bound_b(n: u32, m: u32, d: u32, r: u32) -> (f64, f64) {
        let (nf, mf, df) = (f64::from(n), f64::from(m), f64::from(d));
        let ld = df.log2();
        let log_dm = mf * ld;
        // log2(d^m + 2) without forming d^m
        let log_dm2 = log2_sum(log_dm, 1.0);
        let base = log2_sum(2.0 * log_dm, 1.0 + log_dm);
        let tail = log2_sum(
            log_dm.max(f64::from(r).log2()),
            7f64.log2() + mf * log_dm2 + (mf - 1.0) * log_dm2.log2(),
        );
        let log_b = 5.2f64.log2()
            + nf.log2()
            + mf * 242f64.log2()
            + mf * base
            + mf * mf * (mf + 1.0) / 2.0 * ld
            + tail
            + (mf * ld).log2();
        let eps = (log_b - nf.log2()) / ld / mf.powi(3) - 0.5;
        (log_b, eps)
    }
}

/// Compares the interval value with a float log2 estimate.
pub fn agrees_with_float(b: &Bound, log2_estimate: f64, tol: f64) -> bool {
    let v = b.log2_f64();
    (v - log2_estimate).abs() <= tol * v.abs().max(1.0)
}

impl PartialOrd for Bound {
    /// Orders intervals only when they do not overlap.
    fn partial_cmp(&self, o: &Bound) -> Option<Ordering> {
        if self == o {
            Some(Ordering::Equal)
        } else if self.hi < o.lo {
            Some(Ordering::Less)
        } else if o.hi < self.lo {
            Some(Ordering::Greater)
        } else {
            None
        }
    }
}
