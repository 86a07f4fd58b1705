//! Certified enclosures of the dominant root `beta` and the conjugate roots
//! `beta_j` of `p(x) = x^m - x^(m-1) - ... - x - 1`.
//!
//! Every root of p satisfies `x^m (2 - x) = 1`. The dominant root is pinned
//! by exact rational bisection on `q(x) = (2-x)^m x - 1` in the substituted
//! variable `x_0 = 2 - beta`. Conjugate roots are certified through the real
//! pair `(B, gamma)` (modulus, argument) solving
//!
//! * modulus equation: `B^(2m) (4 - 4 B cos gamma + B^2) = 1`,
//! * argument equation: `m gamma - atan(sin gamma / (2/B - cos gamma)) = 2 pi j`,
//!
//! by alternating certified bisections. Both left-hand sides are strictly
//! increasing in their own variable, so a certified sign at a probe point
//! decides the side containing the root without endpoint bookkeeping.

use crate::interval::{abs_civ, q_int, q_ratio, Civ, Iv, Q};
use crate::transcend::{atan_iv, cos_iv, cos_sin_iv, pi, sin_iv};
use crate::words::check_m;
use crate::{CheckReport, Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

/// A certified rational enclosure `[lo, hi]` of the dominant root `beta`.
#[derive(Debug, Clone)]
pub struct BetaEnclosure {
    pub m: u32,
    pub lo: Q,
    pub hi: Q,
}

/// `p(x) = x^m - x^(m-1) - ... - x - 1`, exact.
pub fn p_exact(m: u32, x: &Q) -> Q {
    let mut acc = Q::zero();
    // Horner on -(x^(m-1) + ... + x + 1) + x^m
    let mut pow = Q::one();
    let mut sum = Q::zero();
    for _ in 0..m {
        sum += &pow;
        pow *= x;
    }
    acc += pow; // x^m
    acc - sum
}

/// `q(x) = (2-x)^m x - 1`, exact; `q(2 - beta) = 0` and q is increasing on
/// the x_0 bracket (which sits left of `2/(m+1)`).
fn q_exact(m: u32, x: &Q) -> Q {
    let two_minus = q_int(2) - x;
    pow_q(&two_minus, m) * x - Q::one()
}

/// `q'(x) = (2-x)^(m-1) (2 - (m+1) x)`, exact.
fn q_prime_exact(m: u32, x: &Q) -> Q {
    let two_minus = q_int(2) - x;
    pow_q(&two_minus, m - 1) * (q_int(2) - q_int(m as i64 + 1) * x)
}

fn pow_q(x: &Q, e: u32) -> Q {
    let mut result = Q::one();
    let mut base = x.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result *= &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    result
}

/// The separation bracket for `x_0 = 2 - beta`:
/// `(1/(2^m - m/2), 1/(2^m - (m+1)/2))`.
fn x0_bracket(m: u32) -> (Q, Q) {
    let two_m = Q::from_integer(BigInt::one() << m);
    let lo = (&two_m - q_ratio(m as i64, 2)).recip();
    let hi = (&two_m - q_ratio(m as i64 + 1, 2)).recip();
    (lo, hi)
}

impl BetaEnclosure {
    pub fn iv(&self) -> Iv {
        Iv::new(self.lo.clone(), self.hi.clone())
    }

    /// Enclosure of `x_0 = 2 - beta`.
    pub fn x0(&self) -> Iv {
        Iv::new(q_int(2) - &self.hi, q_int(2) - &self.lo)
    }

    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }

    fn from_x0(m: u32, x_lo: Q, x_hi: Q) -> Self {
        let b = BetaEnclosure {
            m,
            lo: q_int(2) - &x_hi,
            hi: q_int(2) - &x_lo,
        };
        debug_assert!(p_exact(m, &b.lo).is_negative() && p_exact(m, &b.hi).is_positive());
        b
    }

    /// Shrink the enclosure below `width` by Newton steps on `q` followed by
    /// an exact sign-change certificate; falls back to plain bisection if a
    /// certificate attempt fails.
    pub fn refine_to(&mut self, width: &Q) -> Result<()> {
        if width.is_negative() || width.is_zero() {
            return Err(Error::Config("width must be positive".into()));
        }
        let m = self.m;
        // target accuracy in bits
        let mut target_bits = 8u32;
        while Q::new(BigInt::one(), BigInt::one() << target_bits) > *width {
            target_bits += 1;
            if target_bits > 1 << 20 {
                return Err(Error::precision("beta refine_to width"));
            }
        }
        target_bits += 4;
        while self.width() > *width {
            let (mut x_lo, mut x_hi) = {
                let x0 = self.x0();
                (x0.lo, x0.hi)
            };
            // current certified accuracy in bits (floor)
            let w = &x_hi - &x_lo;
            let mut acc_bits = 0u32;
            while Q::new(BigInt::one(), BigInt::one() << (acc_bits + 1)) > w && acc_bits < target_bits {
                acc_bits += 1;
            }
            // Newton doubles accuracy; certify at the doubled radius
            let next_bits = (2 * acc_bits.max(4)).min(target_bits);
            let mid = crate::interval::floor_dyadic(
                &((&x_lo + &x_hi) / q_int(2)),
                target_bits + 16,
            );
            let qv = q_exact(m, &mid);
            let qp = q_prime_exact(m, &mid);
            let step = qv / qp;
            let cand = crate::interval::floor_dyadic(&(&mid - &step), target_bits + 16);
            let mut delta = Q::new(BigInt::one(), BigInt::one() << next_bits);
            let mut certified = false;
            for _ in 0..4 {
                let lo_try = (&cand - &delta).max(x_lo.clone());
                let hi_try = (&cand + &delta).min(x_hi.clone());
                if lo_try < hi_try
                    && q_exact(m, &lo_try).is_negative()
                    && q_exact(m, &hi_try).is_positive()
                {
                    x_lo = lo_try;
                    x_hi = hi_try;
                    certified = true;
                    break;
                }
                delta *= q_int(16);
            }
            if !certified {
                // guaranteed-progress fallback: one exact bisection step
                let mid = (&x_lo + &x_hi) / q_int(2);
                if q_exact(m, &mid).is_negative() {
                    x_lo = mid;
                } else {
                    x_hi = mid;
                }
            }
            *self = BetaEnclosure::from_x0(m, x_lo, x_hi);
        }
        Ok(())
    }
}

/// Certified enclosure of `beta` with width at most `width`.
pub fn beta_enclosure(m: u32, width: &Q) -> Result<BetaEnclosure> {
    check_m(m)?;
    if !width.is_positive() {
        return Err(Error::Config("width must be positive".into()));
    }
    let (x_lo, x_hi) = x0_bracket(m);
    assert!(
        q_exact(m, &x_lo).is_negative() && q_exact(m, &x_hi).is_positive(),
        "x_0 bracket must carry a sign change"
    );
    let mut b = BetaEnclosure::from_x0(m, x_lo, x_hi);
    b.refine_to(width)?;
    Ok(b)
}

/// Exact verification of the x_0 bracket signs:
/// `q(1/(2^m - m/2)) < 0 < q(1/(2^m - (m+1)/2))`.
pub fn lemma_x0_check(m: u32) -> Result<CheckReport> {
    check_m(m)?;
    let (x_lo, x_hi) = x0_bracket(m);
    let left = q_exact(m, &x_lo);
    let right = q_exact(m, &x_hi);
    let name = format!("lemma_x0 m={m}");
    if !left.is_negative() {
        return Ok(CheckReport::fail(name, "lower bracket endpoint: q >= 0"));
    }
    if !right.is_positive() {
        return Ok(CheckReport::fail(name, "upper bracket endpoint: q <= 0"));
    }
    Ok(CheckReport::pass(
        name,
        "q < 0 < q at the x_0 bracket endpoints (exact rational)",
    ))
}

/// One certified enclosure of a conjugate root, represented by the real pair
/// (modulus, argument) plus the induced rectangular complex enclosure.
#[derive(Debug, Clone)]
pub struct RootEnclosure {
    pub m: u32,
    /// sector index, `1 <= j <= m-1`
    pub j: u32,
    pub modulus: Iv,
    /// argument in radians
    pub gamma: Iv,
    pub value: Civ,
}

/// The dominant enclosure together with all m-1 conjugate enclosures,
/// ordered by increasing argument.
#[derive(Debug, Clone)]
pub struct SpectralSet {
    pub m: u32,
    pub beta: BetaEnclosure,
    pub roots: Vec<RootEnclosure>,
}

/// Argument window for sector j, as exact rational multiples of pi:
/// `(2j/m - 1/(6m), 2j/m + 1/(6m))`.
pub fn argument_window(m: u32, j: u32) -> (Q, Q) {
    let center = q_ratio(2 * j as i64, m as i64);
    let half = q_ratio(1, 6 * m as i64);
    (&center - &half, center + half)
}

/// One certified bisection step on a strictly increasing function: probe a
/// few interior points until the interval sign of `eval` is decided, then
/// keep the side containing the sign change. Returns false if every probe
/// was undecided (caller should tighten the other variable or precision).
fn mono_step(iv: &mut Iv, eval: &dyn Fn(&Q) -> Iv, bits: u32) -> bool {
    let w = iv.width();
    for num in [4i64, 3, 5] {
        let t = crate::interval::floor_dyadic(&(&iv.lo + &w * q_ratio(num, 8)), bits + 16);
        if t <= iv.lo || t >= iv.hi {
            continue;
        }
        match eval(&t).sign() {
            Some(Ordering::Greater) => {
                iv.hi = t;
                return true;
            }
            Some(Ordering::Less) => {
                iv.lo = t;
                return true;
            }
            Some(Ordering::Equal) => {
                *iv = Iv::point(t);
                return true;
            }
            None => continue,
        }
    }
    false
}

/// Modulus-equation residual `B^(2m)(4 - 4 B cos gamma + B^2) - 1` at an
/// exact modulus probe, with the argument as an interval.
fn modulus_residual(m: u32, b: &Q, cos_gamma: &Iv) -> Iv {
    let b2m = pow_q(b, 2 * m);
    let constant = &b2m * (q_int(4) + b * b) - Q::one();
    let coeff = q_int(4) * &b2m * b;
    Iv::point(constant).sub(&cos_gamma.scale(&coeff))
}

/// Argument-equation residual
/// `m gamma - atan(sin gamma / (2/B - cos gamma)) - 2 pi j` at an exact
/// argument probe, with the modulus as an interval.
fn argument_residual(m: u32, j: u32, gamma: &Q, b: &Iv, bits: u32) -> Iv {
    let g = Iv::point(gamma.clone());
    let (c, s) = cos_sin_iv(&g, bits);
    let den = b.recip().scale(&q_int(2)).sub(&c);
    let ratio = s.div(&den);
    let at = atan_iv(&ratio, bits);
    let two_pi_j = pi(bits).scale(&q_int(2 * j as i64));
    Iv::point(gamma * q_int(m as i64)).sub(&at).sub(&two_pi_j)
}

/// Solve the real negative root for even m (`gamma = pi` pinned): exact
/// bisection on `B^m (B + 2) - 1` over `[1/2, 1]`.
fn real_negative_root(m: u32, tol: &Q, bits: u32) -> RootEnclosure {
    let f = |b: &Q| pow_q(b, m) * (b + q_int(2)) - Q::one();
    let mut lo = q_ratio(1, 2);
    let mut hi = Q::one();
    debug_assert!(f(&lo).is_negative() && f(&hi).is_positive());
    while &hi - &lo > *tol {
        let mid = crate::interval::floor_dyadic(&((&lo + &hi) / q_int(2)), bits + 16);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(&mid).is_negative() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let modulus = Iv::new(lo, hi);
    let gamma = pi(bits);
    let value = Civ::new(modulus.neg(), Iv::zero());
    RootEnclosure {
        m,
        j: m / 2,
        modulus,
        gamma,
        value,
    }
}

/// Solve sector j (`1 <= j < m/2`) by alternating certified bisections.
fn complex_sector_root(m: u32, j: u32, tol: &Q) -> Result<RootEnclosure> {
    let mut bits: u32 = 96;
    for _ in 0..=8u32 {
        let pi_iv = pi(bits);
        let (wl, wh) = argument_window(m, j);
        // outer rational hull of the (irrational) window endpoints
        let mut gamma = Iv::new(
            (&pi_iv.lo * &wl).min(&pi_iv.hi * &wl),
            (&pi_iv.lo * &wh).max(&pi_iv.hi * &wh),
        );
        let mut modulus = Iv::new(q_ratio(1, 2), Q::one());
        loop {
            let mut progress = false;
            if modulus.width() > *tol {
                let cg = cos_iv(&gamma, bits);
                let eval = |b: &Q| modulus_residual(m, b, &cg);
                if mono_step(&mut modulus, &eval, bits) {
                    progress = true;
                }
            }
            if gamma.width() > *tol {
                let b = modulus.clone();
                let eval = |g: &Q| argument_residual(m, j, g, &b, bits);
                if mono_step(&mut gamma, &eval, bits) {
                    progress = true;
                }
            }
            if modulus.width() <= *tol && gamma.width() <= *tol {
                let c = cos_iv(&gamma, bits);
                let s = sin_iv(&gamma, bits);
                let value = Civ::new(modulus.mul(&c), modulus.mul(&s));
                return Ok(RootEnclosure {
                    m,
                    j,
                    modulus,
                    gamma,
                    value,
                });
            }
            if !progress {
                break; // escalate precision
            }
        }
        bits *= 2;
    }
    Err(Error::SectorNoConvergence { m, sector: j })
}

/// Certified enclosures of all m-1 conjugate roots plus the dominant root.
pub fn conjugate_enclosures(m: u32, tol: &Q) -> Result<SpectralSet> {
    check_m(m)?;
    if !tol.is_positive() {
        return Err(Error::Config("tol must be positive".into()));
    }
    let beta = beta_enclosure(m, tol)?;
    let bits = 96;
    let pi_iv = pi(bits + 32);
    let mut roots: Vec<RootEnclosure> = Vec::with_capacity(m as usize - 1);
    // sectors below the real axis midpoint: 1 <= j < m/2
    let mut lower: Vec<RootEnclosure> = Vec::new();
    for j in 1..m {
        if 2 * j < m {
            lower.push(complex_sector_root(m, j, tol)?);
        }
    }
    roots.extend(lower.iter().cloned());
    if m % 2 == 0 {
        roots.push(real_negative_root(m, tol, bits + 32));
    }
    // mirror sectors: gamma_(m-j) = 2 pi - gamma_j, value conjugated
    for r in lower.iter().rev() {
        let gamma = pi_iv.scale(&q_int(2)).sub(&r.gamma);
        roots.push(RootEnclosure {
            m,
            j: m - r.j,
            modulus: r.modulus.clone(),
            gamma,
            value: r.value.conj(),
        });
    }
    Ok(SpectralSet { m, beta, roots })
}

impl SpectralSet {
    /// `|beta| * prod_j |beta_j|` -- should enclose 1 (constant term -1 of
    /// the monic polynomial p).
    pub fn moduli_product(&self) -> Iv {
        let mut prod = self.beta.iv();
        for r in &self.roots {
            prod = prod.mul(&r.modulus).chop(512);
        }
        prod
    }
}

/// Rational upper bound on `|beta_j|`:
/// `1 - (ln(5 - 4 cos gamma_j) / (2m)) (1 - ln 3 / m)`, evaluated with
/// outward-rounded enclosures; returns the upper endpoint.
pub fn modulus_upper_bound(m: u32, _j: u32, gamma: &Iv, bits: u32) -> Q {
    let c = cos_iv(gamma, bits);
    let arg = Iv::from_int(5).sub(&c.scale(&q_int(4)));
    let ln_term = crate::transcend::ln_iv(&arg, bits);
    let ln3 = crate::transcend::ln_iv(&Iv::from_int(3), bits);
    let factor = Iv::from_int(1).sub(&ln3.scale(&q_ratio(1, m as i64)));
    let bound = Iv::from_int(1).sub(
        &ln_term
            .scale(&q_ratio(1, 2 * m as i64))
            .mul(&factor),
    );
    bound.hi
}

/// `p'(beta_j) = ((m+1) beta_j - 2m) / (beta_j - 1) * beta_j^(m-1)`
/// (closed form from the 5.2 proof), as a complex interval.
pub fn p_derivative_at_root(m: u32, value: &Civ, bits: u32) -> Result<Civ> {
    let one = Civ::from_real(Iv::from_int(1));
    let denom = value.sub(&one);
    if denom.norm_sq().contains_zero() {
        return Err(Error::precision("p' denominator encloses beta_j = 1"));
    }
    let num = value
        .scale(&q_int(m as i64 + 1))
        .sub(&Civ::from_real(Iv::from_int(2 * m as i64)));
    let pw = value.powi(m as u64 - 1, bits);
    Ok(num.div(&denom).mul(&pw).chop(bits))
}

/// `|x^m (2 - x) - 1|` at the midpoint of a root enclosure (Appendix
/// Observation residual), for consistency tests.
pub fn observation_residual(m: u32, value: &Civ, bits: u32) -> Iv {
    let mid = Civ::new(Iv::point(value.re.mid()), Iv::point(value.im.mid()));
    let two = Civ::from_real(Iv::from_int(2));
    let res = mid
        .powi(m as u64, bits)
        .mul(&two.sub(&mid))
        .sub(&Civ::from_real(Iv::from_int(1)));
    abs_civ(&res, bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::from_decimal;

    fn q_dec(s: &str) -> Q {
        from_decimal(s).unwrap()
    }

    #[test]
    fn beta_small_m() {
        // golden ratio
        let b = beta_enclosure(2, &q_dec("0.000000001")).unwrap();
        assert!(b.lo < q_dec("1.6180339888") && q_dec("1.6180339887") < b.hi);
        // m = 4
        let b4 = beta_enclosure(4, &q_dec("0.000001")).unwrap();
        assert!(b4.iv().contains(&q_dec("1.9275619755")));
        // tribonacci constant
        let b3 = beta_enclosure(3, &q_dec("0.0000001")).unwrap();
        assert!(b3.iv().contains(&q_dec("1.8392867552")));
    }

    #[test]
    fn beta_bracket_and_signs() {
        for m in [2u32, 5, 12, 33, 64] {
            let b = beta_enclosure(m, &q_dec("0.0000000001")).unwrap();
            assert!(p_exact(m, &b.lo).is_negative(), "m={m}");
            assert!(p_exact(m, &b.hi).is_positive(), "m={m}");
            let (xl, xh) = x0_bracket(m);
            let x0 = b.x0();
            assert!(xl <= x0.lo && x0.hi <= xh, "m={m} bracket containment");
            assert!(b.lo > q_int(1) && b.hi < q_int(2), "m={m} in (1,2)");
        }
    }

    #[test]
    fn beta_deep_refinement() {
        let mut b = beta_enclosure(12, &q_ratio(1, 1000)).unwrap();
        let target = Q::new(BigInt::one(), BigInt::one() << 1450);
        b.refine_to(&target).unwrap();
        assert!(b.width() <= target);
        assert!(p_exact(12, &b.lo).is_negative() && p_exact(12, &b.hi).is_positive());
    }

    #[test]
    fn lemma_check_passes() {
        for m in [2u32, 12, 64] {
            assert!(lemma_x0_check(m).unwrap().pass, "m={m}");
        }
    }

    #[test]
    fn window_endpoints() {
        let (lo, hi) = argument_window(3, 1);
        assert_eq!(lo, q_ratio(2, 3) - q_ratio(1, 18));
        assert_eq!(hi, q_ratio(2, 3) + q_ratio(1, 18));
        let (lo2, hi2) = argument_window(2, 1);
        assert_eq!(lo2, q_int(1) - q_ratio(1, 12));
        assert_eq!(hi2, q_int(1) + q_ratio(1, 12));
        // pairwise disjoint
        for m in 2..=16u32 {
            for j in 1..m - 1 {
                let (_, h) = argument_window(m, j);
                let (l, _) = argument_window(m, j + 1);
                assert!(h < l, "m={m} j={j}");
            }
        }
    }

    #[test]
    fn tribonacci_conjugates() {
        let tol = q_dec("0.000001");
        let set = conjugate_enclosures(3, &tol).unwrap();
        assert_eq!(set.roots.len(), 2);
        let r1 = &set.roots[0];
        assert_eq!(r1.j, 1);
        // oracle root of x^3 - x^2 - x - 1: -0.41964... + 0.60629...i
        let re_mid = r1.value.re.mid();
        let im_mid = r1.value.im.mid();
        assert!((re_mid - q_dec("-0.4196433776070806")).abs() < q_dec("0.00001"));
        assert!((im_mid - q_dec("0.6062907292071993")).abs() < q_dec("0.00001"));
        assert!((r1.modulus.mid() - q_dec("0.7373527057603278")).abs() < q_dec("0.00001"));
        // mirror
        let r2 = &set.roots[1];
        assert_eq!(r2.j, 2);
        assert!((r2.value.im.mid() + q_dec("0.6062907292071993")).abs() < q_dec("0.00001"));
        // product of all moduli is 1
        let prod = set.moduli_product();
        assert!(prod.contains(&q_int(1)), "{prod:?}");
    }

    #[test]
    fn fibonacci_real_root() {
        let tol = q_dec("0.000001");
        let set = conjugate_enclosures(2, &tol).unwrap();
        assert_eq!(set.roots.len(), 1);
        let r = &set.roots[0];
        assert_eq!(r.j, 1);
        assert!((r.value.re.mid() + q_dec("0.6180339887498949")).abs() < q_dec("0.000001"));
        assert!(r.value.im.contains(&Q::zero()));
        // gamma = pi inside (pi - pi/12, pi + pi/12)
        let p = pi(256);
        assert!(r.gamma.lo <= p.hi && p.lo <= r.gamma.hi, "gamma must meet pi");
    }

    #[test]
    fn spectral_invariants_sweep() {
        let tol = q_dec("0.0000000001");
        for m in [2u32, 3, 4, 5, 6, 7, 10, 13] {
            let set = conjugate_enclosures(m, &tol).unwrap();
            assert_eq!(set.roots.len(), m as usize - 1, "m={m}");
            let one = q_int(1);
            let prod = set.moduli_product();
            assert!(
                (prod.mid() - &one).abs() < q_dec("0.000001"),
                "m={m} moduli product {prod:?}"
            );
            let mut prev_gamma = Q::zero();
            for r in &set.roots {
                assert!(r.modulus.hi < one, "m={m} j={} modulus", r.j);
                assert!(r.gamma.lo > prev_gamma, "m={m} j={} ordering", r.j);
                prev_gamma = r.gamma.hi.clone();
                // observation residual at midpoint
                let res = observation_residual(m, &r.value, 128);
                assert!(res.hi < q_dec("0.000001"), "m={m} j={} residual", r.j);
                // rational bound dominates the certified modulus
                let bound = modulus_upper_bound(m, r.j, &r.gamma, 96);
                assert!(bound >= r.modulus.hi, "m={m} j={} A.3 bound", r.j);
                assert!(bound < one, "m={m} j={} A.3 bound < 1", r.j);
                // argument strictly inside the sector window
                let (wl, wh) = argument_window(m, r.j);
                let p = pi(128);
                assert!(
                    r.gamma.lo > p.hi.clone() * &wl || r.gamma.lo > p.lo.clone() * &wl,
                    "m={m} j={} window lo",
                    r.j
                );
                assert!(r.gamma.hi < p.lo.clone() * &wh, "m={m} j={} window hi", r.j);
            }
        }
    }

    #[test]
    fn derivative_closed_form() {
        // m = 2, root -1/phi: p'(x) = 2x - 1 so p'(root) = -2.2360679...
        let tol = q_dec("0.00000001");
        let set = conjugate_enclosures(2, &tol).unwrap();
        let d = p_derivative_at_root(2, &set.roots[0].value, 128).unwrap();
        assert!((d.re.mid() + q_dec("2.2360679774997896")).abs() < q_dec("0.000001"));
        assert!(d.im.contains(&Q::zero()));
        // m = 3: compare with numeric derivative oracle value
        let set3 = conjugate_enclosures(3, &tol).unwrap();
        let d3 = p_derivative_at_root(3, &set3.roots[0].value, 128).unwrap();
        // p'(x) = 3x^2 - 2x - 1 at -0.41964338 + 0.60629073i
        // = 3(re^2 - im^2 + 2 re im i) - 2(re + im i) - 1
        assert!((d3.re.mid() - q_dec("-0.735177")).abs() < q_dec("0.01"));
        // dominant root: p'(beta) > 0
        let beta_civ = Civ::from_real(set3.beta.iv());
        let db = p_derivative_at_root(3, &beta_civ, 128).unwrap();
        assert!(db.re.lo.is_positive());
    }
}

