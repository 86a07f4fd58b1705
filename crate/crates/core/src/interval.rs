//! Rational interval arithmetic with outward dyadic rounding.
//!
//! Endpoints are exact `BigRational`s; every operation is exact, and
//! [`Iv::chop`] rounds both endpoints outward onto the grid `k / 2^bits` to
//! keep numerators and denominators from growing along long computations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

pub type Q = BigRational;

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_ratio(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Round down to the grid `k / 2^bits`.
pub fn floor_dyadic(x: &Q, bits: u32) -> Q {
    let scaled = x * Q::from_integer(BigInt::one() << bits);
    Q::new(scaled.floor().to_integer(), BigInt::one() << bits)
}

/// Round up to the grid `k / 2^bits`.
pub fn ceil_dyadic(x: &Q, bits: u32) -> Q {
    let scaled = x * Q::from_integer(BigInt::one() << bits);
    Q::new(scaled.ceil().to_integer(), BigInt::one() << bits)
}

/// A closed rational interval `[lo, hi]`.
#[derive(Clone, PartialEq, Eq)]
pub struct Iv {
    pub lo: Q,
    pub hi: Q,
}

impl fmt::Debug for Iv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", to_decimal(&self.lo, 12), to_decimal(&self.hi, 12))
    }
}

impl Iv {
    pub fn new(lo: Q, hi: Q) -> Self {
        debug_assert!(lo <= hi, "inverted interval");
        Iv { lo, hi }
    }

    pub fn point(x: Q) -> Self {
        Iv { lo: x.clone(), hi: x }
    }

    pub fn from_int(n: i64) -> Self {
        Iv::point(q_int(n))
    }

    pub fn zero() -> Self {
        Iv::point(Q::zero())
    }

    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Q {
        (&self.lo + &self.hi) / q_int(2)
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains(&self, x: &Q) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_iv(&self, other: &Iv) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Certified sign: `Some(Ordering::Greater)` if the whole interval is
    /// positive, `Some(Less)` if negative, `None` if it straddles zero.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn add(&self, o: &Iv) -> Iv {
        Iv::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn sub(&self, o: &Iv) -> Iv {
        Iv::new(&self.lo - &o.hi, &self.hi - &o.lo)
    }

    pub fn neg(&self) -> Iv {
        Iv::new(-self.hi.clone(), -self.lo.clone())
    }

    pub fn mul(&self, o: &Iv) -> Iv {
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Iv::new(lo, hi)
    }

    /// Division; panics if `o` contains zero (all call sites divide by
    /// certified nonzero enclosures).
    pub fn div(&self, o: &Iv) -> Iv {
        assert!(!o.contains_zero(), "interval division by zero: {o:?}");
        let inv = Iv::new(o.hi.recip(), o.lo.recip());
        self.mul(&inv)
    }

    pub fn recip(&self) -> Iv {
        assert!(!self.contains_zero(), "interval reciprocal of zero: {self:?}");
        Iv::new(self.hi.recip(), self.lo.recip())
    }

    pub fn abs(&self) -> Iv {
        if self.lo.is_negative() && !self.hi.is_negative() {
            let hi = self.lo.abs().max(self.hi.clone());
            Iv::new(Q::zero(), hi)
        } else if self.hi.is_negative() {
            Iv::new(self.hi.abs(), self.lo.abs())
        } else {
            self.clone()
        }
    }

    pub fn scale(&self, q: &Q) -> Iv {
        if q.is_negative() {
            Iv::new(&self.hi * q, &self.lo * q)
        } else {
            Iv::new(&self.lo * q, &self.hi * q)
        }
    }

    pub fn shift(&self, q: &Q) -> Iv {
        Iv::new(&self.lo + q, &self.hi + q)
    }

    /// Integer power by repeated squaring with outward chopping.
    pub fn powi(&self, e: u64, bits: u32) -> Iv {
        let mut result = Iv::from_int(1);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).chop(bits);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).chop(bits);
            }
        }
        result
    }

    /// Outward round both endpoints to denominators `2^bits`.
    pub fn chop(&self, bits: u32) -> Iv {
        Iv::new(floor_dyadic(&self.lo, bits), ceil_dyadic(&self.hi, bits))
    }

    /// Hull of two intervals.
    pub fn hull(&self, o: &Iv) -> Iv {
        Iv::new(
            self.lo.clone().min(o.lo.clone()),
            self.hi.clone().max(o.hi.clone()),
        )
    }

    /// Widen symmetrically by `r >= 0`.
    pub fn widen(&self, r: &Q) -> Iv {
        Iv::new(&self.lo - r, &self.hi + r)
    }
}

/// A rectangular complex interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Civ {
    pub re: Iv,
    pub im: Iv,
}

impl Civ {
    pub fn new(re: Iv, im: Iv) -> Self {
        Civ { re, im }
    }

    pub fn from_real(re: Iv) -> Self {
        Civ {
            re,
            im: Iv::zero(),
        }
    }

    pub fn add(&self, o: &Civ) -> Civ {
        Civ::new(self.re.add(&o.re), self.im.add(&o.im))
    }

    pub fn sub(&self, o: &Civ) -> Civ {
        Civ::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }

    pub fn mul(&self, o: &Civ) -> Civ {
        Civ::new(
            self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        )
    }

    pub fn conj(&self) -> Civ {
        Civ::new(self.re.clone(), self.im.neg())
    }

    /// `|z|^2` as an interval.
    pub fn norm_sq(&self) -> Iv {
        let rr = self.re.mul(&self.re);
        let ii = self.im.mul(&self.im);
        // squares are nonnegative even if the interval straddles zero
        let fix = |iv: Iv| {
            if iv.lo.is_negative() {
                Iv::new(Q::zero(), iv.hi)
            } else {
                iv
            }
        };
        fix(rr).add(&fix(ii))
    }

    pub fn div(&self, o: &Civ) -> Civ {
        let n = o.norm_sq();
        let num = self.mul(&o.conj());
        Civ::new(num.re.div(&n), num.im.div(&n))
    }

    pub fn chop(&self, bits: u32) -> Civ {
        Civ::new(self.re.chop(bits), self.im.chop(bits))
    }

    pub fn powi(&self, e: u64, bits: u32) -> Civ {
        let mut result = Civ::from_real(Iv::from_int(1));
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).chop(bits);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).chop(bits);
            }
        }
        result
    }

    pub fn scale(&self, q: &Q) -> Civ {
        Civ::new(self.re.scale(q), self.im.scale(q))
    }
}

/// Integer square root floor of a nonnegative BigInt.
fn isqrt(n: &BigInt) -> BigInt {
    n.sqrt()
}

/// Enclosure of `sqrt(x)` for `x.lo >= 0`.
pub fn sqrt_iv(x: &Iv, bits: u32) -> Iv {
    assert!(!x.lo.is_negative(), "sqrt of negative interval");
    let scale = BigInt::one() << (2 * bits);
    let lo_scaled = (&x.lo * Q::from_integer(scale.clone())).floor().to_integer();
    let hi_scaled = (&x.hi * Q::from_integer(scale)).ceil().to_integer();
    let lo_root = isqrt(&lo_scaled);
    let hi_root = isqrt(&hi_scaled) + BigInt::one();
    let den = BigInt::one() << bits;
    Iv::new(
        Q::new(lo_root, den.clone()),
        Q::new(hi_root, den),
    )
}

/// Modulus enclosure of a complex interval.
pub fn abs_civ(z: &Civ, bits: u32) -> Iv {
    sqrt_iv(&z.norm_sq(), bits)
}

/// Decimal rendering with `digits` fractional digits, round-to-nearest.
pub fn to_decimal(x: &Q, digits: u32) -> String {
    let sign = if x.is_negative() { "-" } else { "" };
    let ax = x.abs();
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = (&ax * Q::from_integer(scale.clone()) + q_ratio(1, 2))
        .floor()
        .to_integer();
    let (int_part, frac_part) = scaled.div_rem(&scale);
    let frac_str = format!("{:0>width$}", frac_part.to_string(), width = digits as usize);
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_str}")
    }
}

/// Parse a decimal string into an exact rational.
pub fn from_decimal(s: &str) -> Option<Q> {
    let s = s.trim();
    let (sign, body) = match s.strip_prefix('-') {
        Some(b) => (-1i64, b),
        None => (1, s),
    };
    let (int, frac) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    let digits: String = format!("{int}{frac}");
    let num: BigInt = digits.parse().ok()?;
    let den = BigInt::from(10u32).pow(frac.len() as u32);
    Some(Q::new(num * BigInt::from(sign), den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let a = Iv::new(q_int(1), q_int(2));
        let b = Iv::new(q_int(-3), q_int(4));
        assert_eq!(a.add(&b), Iv::new(q_int(-2), q_int(6)));
        assert_eq!(a.mul(&b), Iv::new(q_int(-6), q_int(8)));
        assert_eq!(b.abs(), Iv::new(q_int(0), q_int(4)));
        assert!(b.contains_zero());
        assert_eq!(a.sign(), Some(Ordering::Greater));
    }

    #[test]
    fn chop_is_outward() {
        let x = Iv::new(q_ratio(1, 3), q_ratio(2, 3));
        let c = x.chop(8);
        assert!(c.lo <= x.lo && x.hi <= c.hi);
        assert!(c.width() <= x.width() + q_ratio(2, 256));
    }

    #[test]
    fn powi_encloses() {
        let x = Iv::new(q_ratio(4, 3), q_ratio(4, 3));
        let p = x.powi(5, 64);
        let exact = q_ratio(4, 3).pow(5);
        assert!(p.contains(&exact));
        assert!(p.width() < q_ratio(1, 1_000_000));
    }

    #[test]
    fn sqrt_encloses() {
        let two = Iv::from_int(2);
        let r = sqrt_iv(&two, 64);
        assert!(r.mul(&r).contains(&q_int(2)));
        assert!(r.width() < q_ratio(1, 1_000_000_000));
    }

    #[test]
    fn complex_div_roundtrip() {
        let z = Civ::new(Iv::from_int(3), Iv::from_int(4));
        let w = Civ::new(Iv::from_int(1), Iv::from_int(-2));
        let q = z.div(&w);
        let back = q.mul(&w);
        assert!(back.re.contains(&q_int(3)));
        assert!(back.im.contains(&q_int(4)));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal(&q_ratio(1, 3), 5), "0.33333");
        assert_eq!(to_decimal(&q_ratio(-5, 4), 3), "-1.250");
        assert_eq!(from_decimal("1.25").unwrap(), q_ratio(5, 4));
        assert_eq!(from_decimal("-0.5").unwrap(), q_ratio(-1, 2));
    }
}
