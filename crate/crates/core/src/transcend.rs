//! Certified enclosures of transcendental functions over rational intervals.
//!
//! Series are evaluated in fixed-point interval arithmetic: endpoints are
//! `BigInt`s at a common scale `2^f` with directed rounding, so no rational
//! normalization (gcd) ever runs in an inner loop. Truncation remainders are
//! bounded explicitly (alternating-series or geometric tails) and folded into
//! the returned interval. The `bits` parameter controls both the fixed-point
//! scale and the series cutoff.

use crate::interval::{Iv, Q};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

fn div_floor_big(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

fn div_ceil_big(a: &BigInt, b: &BigInt) -> BigInt {
    -(-a).div_floor(b)
}

/// Fixed-point interval `[lo, hi] / 2^f`. All rounding is outward.
#[derive(Clone, Debug)]
struct Fi {
    lo: BigInt,
    hi: BigInt,
}

/// Context carrying the common scale.
#[derive(Clone, Copy)]
struct Ctx {
    f: u32,
}

impl Ctx {
    fn new(bits: u32) -> Self {
        Ctx { f: bits + 16 }
    }

    fn unit(&self) -> BigInt {
        BigInt::one() << self.f
    }

    fn from_q(&self, x: &Q) -> Fi {
        let scaled = x * Q::from_integer(self.unit());
        Fi {
            lo: scaled.floor().to_integer(),
            hi: scaled.ceil().to_integer(),
        }
    }

    fn from_int(&self, n: i64) -> Fi {
        let v = BigInt::from(n) << self.f;
        Fi { lo: v.clone(), hi: v }
    }

    fn to_iv(&self, x: &Fi) -> Iv {
        let den = self.unit();
        Iv::new(Q::new(x.lo.clone(), den.clone()), Q::new(x.hi.clone(), den))
    }

    fn add(&self, a: &Fi, b: &Fi) -> Fi {
        Fi {
            lo: &a.lo + &b.lo,
            hi: &a.hi + &b.hi,
        }
    }

    fn sub(&self, a: &Fi, b: &Fi) -> Fi {
        Fi {
            lo: &a.lo - &b.hi,
            hi: &a.hi - &b.lo,
        }
    }

    fn mul(&self, a: &Fi, b: &Fi) -> Fi {
        let c = [&a.lo * &b.lo, &a.lo * &b.hi, &a.hi * &b.lo, &a.hi * &b.hi];
        let lo = c.iter().min().unwrap();
        let hi = c.iter().max().unwrap();
        let den = self.unit();
        Fi {
            lo: div_floor_big(lo, &den),
            hi: div_ceil_big(hi, &den),
        }
    }

    /// Division by an interval with `b.lo > 0`.
    fn div(&self, a: &Fi, b: &Fi) -> Fi {
        assert!(b.lo.is_positive(), "Fi::div needs a positive denominator");
        let num_lo = &a.lo << self.f;
        let num_hi = &a.hi << self.f;
        let c_floor = [
            div_floor_big(&num_lo, &b.lo),
            div_floor_big(&num_lo, &b.hi),
            div_floor_big(&num_hi, &b.lo),
            div_floor_big(&num_hi, &b.hi),
        ];
        let c_ceil = [
            div_ceil_big(&num_lo, &b.lo),
            div_ceil_big(&num_lo, &b.hi),
            div_ceil_big(&num_hi, &b.lo),
            div_ceil_big(&num_hi, &b.hi),
        ];
        Fi {
            lo: c_floor.iter().min().unwrap().clone(),
            hi: c_ceil.iter().max().unwrap().clone(),
        }
    }

    fn div_int(&self, a: &Fi, n: i64) -> Fi {
        assert!(n > 0);
        let d = BigInt::from(n);
        Fi {
            lo: div_floor_big(&a.lo, &d),
            hi: div_ceil_big(&a.hi, &d),
        }
    }

    /// Upper bound on |a| in ulps.
    fn abs_hi(&self, a: &Fi) -> BigInt {
        a.lo.abs().max(a.hi.abs())
    }

    /// Widen symmetrically by `r` ulps.
    fn widen(&self, a: &Fi, r: &BigInt) -> Fi {
        Fi {
            lo: &a.lo - r,
            hi: &a.hi + r,
        }
    }
}

/// `atan(1/x)` for integer `x >= 2`, alternating series.
fn atan_inv_int(x: i64, bits: u32) -> Iv {
    let ctx = Ctx::new(bits);
    let x2 = x * x;
    let mut term = ctx.div_int(&ctx.from_int(1), x);
    let mut sum = ctx.from_int(0);
    let mut k: i64 = 0;
    loop {
        let contrib = ctx.div_int(&term, 2 * k + 1);
        let bound = ctx.abs_hi(&contrib);
        if bound < BigInt::from(4) {
            // remaining tail below the next alternating term plus rounding
            let out = ctx.widen(&sum, &(bound + BigInt::from(2 * k + 8)));
            return ctx.to_iv(&out);
        }
        if k % 2 == 0 {
            sum = ctx.add(&sum, &contrib);
        } else {
            sum = ctx.sub(&sum, &contrib);
        }
        term = ctx.div_int(&term, x2);
        k += 1;
    }
}

/// Enclosure of pi via Machin's formula `pi = 16 atan(1/5) - 4 atan(1/239)`,
/// memoized per precision.
pub fn pi(bits: u32) -> Iv {
    static CACHE: OnceLock<Mutex<HashMap<u32, Iv>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&bits) {
        return v.clone();
    }
    let a = atan_inv_int(5, bits + 8).scale(&Q::from_integer(BigInt::from(16)));
    let b = atan_inv_int(239, bits + 8).scale(&Q::from_integer(BigInt::from(4)));
    let v = a.sub(&b).chop(bits);
    cache.lock().unwrap().insert(bits, v.clone());
    v
}

/// Joint cos/sin Taylor enclosure at a point-interval `t`, `|t| <= 4`.
fn cos_sin_point(ctx: Ctx, t: &Fi) -> (Fi, Fi) {
    let t2 = ctx.mul(t, t);
    let t2_hi = ctx.abs_hi(&t2);
    // cos: sum (-1)^k t^(2k)/(2k)!, sin: sum (-1)^k t^(2k+1)/(2k+1)!
    let mut cos_term = ctx.from_int(1);
    let mut sin_term = t.clone();
    let mut cos_sum = ctx.from_int(0);
    let mut sin_sum = ctx.from_int(0);
    let mut k: u64 = 0;
    loop {
        let c_bound = ctx.abs_hi(&cos_term);
        let s_bound = ctx.abs_hi(&sin_term);
        let ratio_small = t2_hi < (BigInt::from((2 * k + 1) * (2 * k + 2))) << ctx.f;
        if ratio_small && c_bound < BigInt::from(4) && s_bound < BigInt::from(4) {
            // alternating-decreasing from here on: next term bounds the tail;
            // per-step rounding already lives in the interval endpoints
            let slack = BigInt::from(16);
            let c = ctx.widen(&cos_sum, &(c_bound + &slack));
            let s = ctx.widen(&sin_sum, &(s_bound + slack));
            return (c, s);
        }
        if k % 2 == 0 {
            cos_sum = ctx.add(&cos_sum, &cos_term);
            sin_sum = ctx.add(&sin_sum, &sin_term);
        } else {
            cos_sum = ctx.sub(&cos_sum, &cos_term);
            sin_sum = ctx.sub(&sin_sum, &sin_term);
        }
        k += 1;
        cos_term = ctx.div_int(&ctx.mul(&cos_term, &t2), ((2 * k - 1) * (2 * k)) as i64);
        sin_term = ctx.div_int(&ctx.mul(&sin_term, &t2), ((2 * k) * (2 * k + 1)) as i64);
        assert!(k < 10_000, "cos/sin series failed to converge");
    }
}

/// Reduce `x` by an integer multiple of `2 pi` so the midpoint lands near
/// `(-pi, pi]`.
fn range_reduce(x: &Iv, bits: u32) -> Iv {
    let two_pi = pi(bits + 16).scale(&Q::from_integer(BigInt::from(2)));
    let ratio = x.mid() / two_pi.mid();
    let k = (ratio + Q::new(BigInt::one(), BigInt::from(2)))
        .floor()
        .to_integer();
    if k.is_zero() {
        return x.clone();
    }
    let kq = Q::from_integer(k);
    x.sub(&two_pi.scale(&kq))
}

fn clamp_unit(iv: Iv) -> Iv {
    let one = Q::from_integer(BigInt::one());
    let lo = iv.lo.max(-one.clone());
    let hi = iv.hi.min(one);
    Iv::new(lo, hi)
}

/// Joint enclosure of `(cos x, sin x)` (one series evaluation).
pub fn cos_sin_iv(x: &Iv, bits: u32) -> (Iv, Iv) {
    let ctx = Ctx::new(bits);
    let r = range_reduce(x, bits);
    let half_w = r.width() / Q::from_integer(BigInt::from(2));
    let (c, s) = cos_sin_point(ctx, &ctx.from_q(&r.mid()));
    // Lipschitz constant 1 for both functions
    let c_iv = clamp_unit(ctx.to_iv(&c).widen(&half_w)).chop(bits);
    let s_iv = clamp_unit(ctx.to_iv(&s).widen(&half_w)).chop(bits);
    (c_iv, s_iv)
}

/// Enclosure of `cos` over an interval (Taylor at the midpoint plus the
/// Lipschitz bound `|cos'| <= 1`, clamped to `[-1, 1]`).
pub fn cos_iv(x: &Iv, bits: u32) -> Iv {
    cos_sin_iv(x, bits).0
}

/// Enclosure of `sin` over an interval (same scheme as [`cos_iv`]).
pub fn sin_iv(x: &Iv, bits: u32) -> Iv {
    cos_sin_iv(x, bits).1
}

/// `atanh(u) = sum u^(2k+1)/(2k+1)` for `|u| <= 4/5`, with a geometric tail
/// bound (`u^2/(1-u^2) <= 16/9 < 2` there).
fn atanh_series(ctx: Ctx, u: &Fi) -> Iv {
    let u2 = ctx.mul(u, u);
    assert!(
        ctx.abs_hi(&u2) * 3u32 < ctx.unit() * 2u32,
        "atanh argument out of range (u^2 must stay below 2/3)"
    );
    let mut pow = u.clone();
    let mut sum = ctx.from_int(0);
    let mut k: u64 = 0;
    loop {
        let term = ctx.div_int(&pow, (2 * k + 1) as i64);
        let bound = ctx.abs_hi(&term);
        if bound < BigInt::from(4) {
            // tail <= |term| * u^2/(1-u^2) < 2 |term|, plus rounding slack
            let out = ctx.widen(&sum, &(bound * 2 + BigInt::from(16)));
            return ctx.to_iv(&out);
        }
        sum = ctx.add(&sum, &term);
        pow = ctx.mul(&pow, &u2);
        k += 1;
        assert!(k < 100_000, "atanh series failed to converge");
    }
}

/// Enclosure of `ln 2` (atanh series at u = 1/3), memoized.
pub fn ln2(bits: u32) -> Iv {
    static CACHE: OnceLock<Mutex<HashMap<u32, Iv>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&bits) {
        return v.clone();
    }
    let ctx = Ctx::new(bits + 8);
    let u = ctx.div_int(&ctx.from_int(1), 3);
    let v = atanh_series(ctx, &u)
        .scale(&Q::from_integer(BigInt::from(2)))
        .chop(bits);
    cache.lock().unwrap().insert(bits, v.clone());
    v
}

/// `ln` at an exact rational point `t > 0` via `ln t = 2 atanh((t-1)/(t+1))`
/// after scaling t into `[1/2, 2]` by powers of two.
fn ln_point(t: &Q, bits: u32) -> Iv {
    assert!(t.is_positive(), "ln of nonpositive point");
    let two = Q::from_integer(BigInt::from(2));
    let half = Q::new(BigInt::one(), BigInt::from(2));
    let mut t = t.clone();
    let mut shifts: i64 = 0;
    while t > two {
        t /= &two;
        shifts += 1;
    }
    while t < half {
        t *= &two;
        shifts -= 1;
    }
    let ctx = Ctx::new(bits + 8);
    let tf = ctx.from_q(&t);
    let num = ctx.sub(&tf, &ctx.from_int(1));
    let den = ctx.add(&tf, &ctx.from_int(1));
    let u = ctx.div(&num, &den); // |u| <= 1/3 for t in [1/2, 2]
    let base = atanh_series(ctx, &u).scale(&two);
    if shifts == 0 {
        base.chop(bits)
    } else {
        base.add(&ln2(bits + 8).scale(&Q::from_integer(BigInt::from(shifts))))
            .chop(bits)
    }
}

/// Enclosure of `ln` over an interval with `lo > 0` (monotone: endpoints).
pub fn ln_iv(x: &Iv, bits: u32) -> Iv {
    assert!(x.lo.is_positive(), "ln_iv needs a positive interval: {x:?}");
    let lo = ln_point(&x.lo, bits);
    if x.lo == x.hi {
        return lo;
    }
    let hi = ln_point(&x.hi, bits);
    Iv::new(lo.lo, hi.hi)
}

/// Memoized enclosure of `atan(1/2)`.
fn atan_half(bits: u32) -> Iv {
    static CACHE: OnceLock<Mutex<HashMap<u32, Iv>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&bits) {
        return v.clone();
    }
    let v = atan_inv_int(2, bits);
    cache.lock().unwrap().insert(bits, v.clone());
    v
}

/// `atan` at an exact rational point: alternating series for `|t| <= 1/2`,
/// the reflection `atan t = sign(t)(pi/2 - atan(1/|t|))` for `|t| >= 2`, and
/// the addition formula through `atan(1/2)` in between.
fn atan_point(t: &Q, bits: u32) -> Iv {
    let ctx = Ctx::new(bits + 8);
    if t.is_zero() {
        return Iv::new(Q::zero(), Q::zero());
    }
    let at = t.abs();
    let one = Q::from_integer(BigInt::one());
    let two = Q::from_integer(BigInt::from(2));
    let half = Q::new(BigInt::one(), BigInt::from(2));
    if at >= two {
        let half_pi = pi(bits + 8).scale(&half);
        let inner = atan_point(&at.recip(), bits + 4);
        let pos = half_pi.sub(&inner);
        return if t.is_negative() { pos.neg() } else { pos };
    }
    if at > half {
        // atan(at) = atan(1/2) + atan((at - 1/2)/(1 + at/2)); the shifted
        // argument lies in (0, 3/4), so at most one more reduction follows
        let shifted = (&at - &half) / (&one + &at * &half);
        let pos = atan_half(bits + 4).add(&atan_point(&shifted, bits + 4));
        return if t.is_negative() { pos.neg() } else { pos };
    }
    let tf = ctx.from_q(&at);
    let t2 = ctx.mul(&tf, &tf);
    let mut pow = tf;
    let mut sum = ctx.from_int(0);
    let mut k: u64 = 0;
    loop {
        let term = ctx.div_int(&pow, (2 * k + 1) as i64);
        let bound = ctx.abs_hi(&term);
        if bound < BigInt::from(4) {
            let out = ctx.widen(&sum, &(bound + BigInt::from(16)));
            let pos = ctx.to_iv(&out);
            return if t.is_negative() { pos.neg() } else { pos };
        }
        if k % 2 == 0 {
            sum = ctx.add(&sum, &term);
        } else {
            sum = ctx.sub(&sum, &term);
        }
        pow = ctx.mul(&pow, &t2);
        k += 1;
        assert!(k < 100_000, "atan series failed to converge");
    }
}

/// Enclosure of `atan` over an interval (monotone: endpoints).
pub fn atan_iv(x: &Iv, bits: u32) -> Iv {
    let lo = atan_point(&x.lo, bits);
    if x.lo == x.hi {
        return lo.chop(bits);
    }
    let hi = atan_point(&x.hi, bits);
    Iv::new(lo.lo, hi.hi).chop(bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::{from_decimal, q_int, q_ratio};
    use num_traits::Signed;

    fn assert_encloses(iv: &Iv, decimal: &str, max_width: &str) {
        let v = from_decimal(decimal).unwrap();
        let w = from_decimal(max_width).unwrap();
        // reference literals are truncated decimals, so check that the
        // enclosure sits within max_width of the literal and is tight
        assert!((iv.mid() - &v).abs() < w, "{iv:?} not near {decimal}");
        assert!(iv.width() < w, "{iv:?} too wide (> {max_width})");
    }

    #[test]
    fn pi_value() {
        let p = pi(128);
        assert_encloses(
            &p,
            "3.14159265358979323846264338327950288",
            "0.000000000000000000000000000001",
        );
    }

    #[test]
    fn cos_sin_points() {
        let one = Iv::from_int(1);
        assert_encloses(&cos_iv(&one, 96), "0.54030230586813971740", "0.0000000000000001");
        assert_encloses(&sin_iv(&one, 96), "0.84147098480789650665", "0.0000000000000001");
        // range reduction: cos(10) = cos(10 - 2pi)
        let ten = Iv::from_int(10);
        assert_encloses(&cos_iv(&ten, 96), "-0.83907152907645245225", "0.0000000000001");
        // negative arguments
        let neg = Iv::point(q_ratio(-13, 10));
        assert_encloses(&cos_iv(&neg, 96), "0.26749882862458735657", "0.0000000000001");
        assert_encloses(&sin_iv(&neg, 96), "-0.96355818541719296470", "0.0000000000001");
    }

    #[test]
    fn cos_interval_is_hull() {
        // cos over [0, 1] must cover [cos 1, 1]
        let x = Iv::new(q_int(0), q_int(1));
        let c = cos_iv(&x, 64);
        assert!(c.contains(&from_decimal("0.5403").unwrap()));
        assert!(c.contains(&from_decimal("0.9999").unwrap()));
        assert!(c.hi <= q_int(1));
    }

    #[test]
    fn ln_values() {
        assert_encloses(&ln2(96), "0.69314718055994530942", "0.0000000000000001");
        let five = Iv::from_int(5);
        assert_encloses(&ln_iv(&five, 96), "1.60943791243410037460", "0.0000000000000001");
        let x = Iv::point(q_ratio(1, 100));
        assert_encloses(&ln_iv(&x, 96), "-4.60517018598809136804", "0.0000000000000001");
        let nine = Iv::from_int(9);
        assert_encloses(&ln_iv(&nine, 96), "2.19722457733621938279", "0.0000000000000001");
    }

    #[test]
    fn atan_values() {
        let half = Iv::point(q_ratio(1, 2));
        assert_encloses(&atan_iv(&half, 96), "0.46364760900080611621", "0.0000000000000001");
        let three = Iv::from_int(3);
        assert_encloses(&atan_iv(&three, 96), "1.24904577239825442582", "0.0000000000000001");
        let neg = Iv::point(q_ratio(-7, 4));
        assert_encloses(&atan_iv(&neg, 96), "-1.05165021254837366746", "0.000000000000001");
        let mid = Iv::point(q_ratio(9, 10));
        assert_encloses(&atan_iv(&mid, 96), "0.73281510178650659164", "0.000000000000001");
    }
}
