//! Certified quadrature of the constant
//! `A = integral_0^{2pi} (1 - cos x) / ((5 - 4 cos x) ln(5 - 4 cos x)) dx`,
//! the derived constant `kappa = 2A/pi`, and the global balance
//! bound `floor(kappa m) + 12`.

use crate::interval::{q_int, q_ratio, Iv, Q};
use crate::transcend::{cos_iv, ln_iv, pi};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::sync::{Mutex, OnceLock};

/// Working precision for the integrand evaluations.
const BITS: u32 = 64;

/// Endpoint excision radius; the excised mass is bounded analytically.
fn epsilon() -> Q {
    q_ratio(1, 10_000)
}

/// A certified enclosure of one named integral.
#[derive(Debug, Clone)]
pub struct QuadratureResult {
    pub name: String,
    pub interval: Iv,
    pub subdivisions: usize,
}

/// The global analytic bound with its audit values.
#[derive(Debug, Clone)]
pub struct GlobalBound {
    pub m: u32,
    pub kappa: Iv,
    /// `floor(kappa_hi * m) + 12` (conservative end of the enclosure)
    pub bound: BigInt,
    /// proof-chain value `9/2 + (A/pi) m`
    pub audit_chain: Iv,
}

/// `h(t) = (t - 1) / (t ln t)` at a rational point `t > 1`. The integrand is
/// `f(x) = h(5 - 4 cos x) / 4`; h is strictly decreasing on `(1, infinity)`
/// (its derivative has the sign of `ln t - t + 1 < 0`), which the interval
/// evaluation below exploits for endpoint-monotone images.
fn h_point(t: &Q) -> Iv {
    assert!(*t > Q::one(), "integrand substitution out of range");
    let ti = Iv::point(t.clone());
    let lt = ln_iv(&ti, BITS);
    let num = ti.shift(&-Q::one());
    num.div(&ti.mul(&lt)).chop(BITS)
}

/// Interval image of the integrand `f` over `x`-interval `xiv` within
/// `(0, 2pi)`, via the substitution `t = 5 - 4 cos x` and the monotone
/// decrease of `h`.
pub fn integrand_iv(xiv: &Iv, bits: u32) -> Iv {
    let c = cos_iv(xiv, bits);
    let t = Iv::from_int(5).sub(&c.scale(&q_int(4)));
    assert!(t.hi > Q::one(), "x-interval touches a removable endpoint");
    let quarter = q_ratio(1, 4);
    // near x = 0 the cosine enclosure can clamp to 1, collapsing t.lo to the
    // removable point t = 1; there h tends to its supremum 1 (so f to 1/4)
    let hi = if t.lo > Q::one() {
        h_point(&t.lo).hi * &quarter
    } else {
        quarter.clone()
    };
    Iv::new(h_point(&t.hi).lo * &quarter, hi)
}

/// Point evaluation of f at a rational abscissa, memoized: the adaptive
/// bisection shares every endpoint between neighboring intervals.
fn f_point(x: &Q, cache: &mut std::collections::HashMap<Q, Iv>) -> Iv {
    if let Some(v) = cache.get(x) {
        return v.clone();
    }
    let c = cos_iv(&Iv::point(x.clone()), BITS);
    let t = Iv::from_int(5).sub(&c.scale(&q_int(4)));
    assert!(t.lo > Q::one(), "abscissa at a removable endpoint");
    let lt = ln_iv(&t, BITS);
    let num = t.shift(&-Q::one());
    let v = num
        .div(&t.mul(&lt))
        .scale(&q_ratio(1, 4))
        .chop(BITS);
    cache.insert(x.clone(), v.clone());
    v
}

/// Adaptive bisection over `[lo, hi] subset [eps, pi]`. Because `t = 5 -
/// 4 cos x` increases on `[0, pi]` and `h` decreases in t, f is decreasing
/// in x here, so the image over an interval is the hull of its endpoint
/// values — rectangles come from two shared point evaluations.
fn adapt(
    lo: Q,
    hi: Q,
    budget: &Q,
    count: &mut usize,
    depth: u32,
    cache: &mut std::collections::HashMap<Q, Iv>,
) -> Result<Iv> {
    let len = &hi - &lo;
    let fl = f_point(&lo, cache);
    let fh = f_point(&hi, cache);
    let fiv = Iv::new(fh.lo.clone(), fl.hi.clone());
    let err = &len * fiv.width();
    if err <= *budget || depth >= 48 {
        if depth >= 48 && err > *budget {
            return Err(Error::precision("quadrature subdivision depth"));
        }
        *count += 1;
        return Ok(fiv.scale(&len));
    }
    let mid = crate::interval::floor_dyadic(&((&lo + &hi) / q_int(2)), BITS);
    let half = budget / q_int(2);
    let left = adapt(lo, mid.clone(), &half, count, depth + 1, cache)?;
    let right = adapt(mid, hi, &half, count, depth + 1, cache)?;
    Ok(left.add(&right).chop(BITS))
}

/// Certified enclosure of `A` with width at most `tol`.
///
/// The removable endpoints are excised at `eps = 1e-4`; on `[0, eps]` the
/// integrand tends to `1/4` (l'Hopital at the removable singularity), and the
/// excised mass per end is bounded by `eps * (1/4) * 2` (slack factor 2).
/// The interior is `2 * integral_eps^pi f` by the x -> 2pi - x symmetry.
pub fn quadrature_a(tol: &Q) -> Result<QuadratureResult> {
    if !tol.is_positive() {
        return Err(Error::Config("quadrature tolerance must be positive".into()));
    }
    let eps = epsilon();
    // A = 2 * interior + excised, excised in [0, 2 * eps * 1/2]
    let excised = Iv::new(Q::zero(), eps.clone());
    if excised.width() >= *tol {
        return Err(Error::Config(
            "tolerance below the fixed excision mass bound".into(),
        ));
    }
    let p = pi(BITS);
    // interior over [eps, pi.lo] plus the [pi.lo, pi] sliver, whose mass is
    // within [0, width(pi) * 1/4] since f < 1/4 everywhere
    let budget = (tol - excised.width()) / q_int(2) * q_ratio(7, 8);
    let mut count = 0usize;
    let mut cache = std::collections::HashMap::new();
    let core = adapt(eps, p.lo.clone(), &budget, &mut count, 0, &mut cache)?;
    let sliver = Iv::new(Q::zero(), p.width() * q_ratio(1, 4));
    let interval = core.add(&sliver).scale(&q_int(2)).add(&excised);
    if interval.width() > *tol {
        return Err(Error::precision("quadrature budget accounting"));
    }
    Ok(QuadratureResult {
        name: "A".into(),
        interval,
        subdivisions: count,
    })
}

fn cached_a() -> Result<Iv> {
    static CACHE: OnceLock<Mutex<Option<Iv>>> = OnceLock::new();
    let cell = CACHE.get_or_init(|| Mutex::new(None));
    let mut guard = cell.lock().expect("quadrature cache poisoned");
    if let Some(iv) = guard.as_ref() {
        return Ok(iv.clone());
    }
    let a = quadrature_a(&q_ratio(1, 2000))?.interval;
    *guard = Some(a.clone());
    Ok(a)
}

/// Enclosure of `A` at the default internal tolerance (cached).
pub fn a_enclosure() -> Result<Iv> {
    cached_a()
}

/// `kappa = 2A / pi` at the default internal tolerance.
pub fn kappa() -> Result<Iv> {
    let a = cached_a()?;
    Ok(a.scale(&q_int(2)).div(&pi(BITS)).chop(BITS))
}

/// Global analytic bound: the m-bonacci word is `c`-balanced for
/// `c = floor(kappa m) + 12`; the upper end of the kappa enclosure keeps the
/// result a valid bound. Also reports the proof-chain value `9/2 + (A/pi) m`.
pub fn global_balance_bound(m: u32) -> Result<GlobalBound> {
    if m < 5 {
        return Err(Error::Config("global bound needs m >= 5".into()));
    }
    let k = kappa()?;
    let a = cached_a()?;
    let bound = (k.hi.clone() * q_int(m as i64)).floor().to_integer() + 12;
    let audit_chain = a
        .div(&pi(BITS))
        .scale(&q_int(m as i64))
        .shift(&q_ratio(9, 2))
        .chop(BITS);
    Ok(GlobalBound {
        m,
        kappa: k,
        bound,
        audit_chain,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::from_decimal;

    fn q_dec(s: &str) -> Q {
        from_decimal(s).unwrap()
    }

    #[test]
    fn integrand_spot_values() {
        // f(pi) = (1 - (-1)) / (9 ln 9) = 2 / (9 ln 9) ~ 0.101134
        let p = pi(BITS);
        let f = integrand_iv(&p, 96);
        assert!((f.mid() - q_dec("0.10113769")).abs() < q_dec("0.0000001"));
        // near 0 the integrand approaches 1/4 from below
        let f0 = integrand_iv(&Iv::new(q_dec("0.0001"), q_dec("0.001")), 96);
        assert!(f0.hi <= q_ratio(1, 4) && f0.lo > q_dec("0.249"));
    }

    #[test]
    fn a_enclosure() {
        let r = quadrature_a(&q_dec("0.001")).unwrap();
        assert!(r.interval.width() <= q_dec("0.001"));
        assert!(r.interval.lo > q_dec("0.9") && r.interval.hi < q_dec("0.91"));
        assert!((r.interval.mid() - q_dec("0.9089")).abs() < q_dec("0.001"));
        assert!(r.subdivisions > 4);
    }

    #[test]
    fn refinement_narrows() {
        let coarse = quadrature_a(&q_dec("0.01")).unwrap();
        let fine = quadrature_a(&q_dec("0.0005")).unwrap();
        assert!(fine.interval.width() < coarse.interval.width());
        // both enclose the same constant
        assert!(fine.interval.lo < coarse.interval.hi && coarse.interval.lo < fine.interval.hi);
        assert!(fine.subdivisions >= coarse.subdivisions);
    }

    #[test]
    fn kappa_enclosure() {
        let k = kappa().unwrap();
        assert!(k.lo > q_dec("0.57") && k.hi < q_dec("0.59"));
        assert!((k.mid() - q_dec("0.5786")).abs() < q_dec("0.001"));
    }

    #[test]
    fn global_bounds() {
        let g29 = global_balance_bound(29).unwrap();
        assert_eq!(g29.bound, BigInt::from(28));
        assert_eq!(global_balance_bound(100).unwrap().bound, BigInt::from(69));
        assert_eq!(global_balance_bound(5).unwrap().bound, BigInt::from(14));
        // audit chain 9/2 + (A/pi) m at m = 29: ~ 4.5 + 0.2893 * 29 ~ 12.89
        assert!((g29.audit_chain.mid() - q_dec("12.889")).abs() < q_dec("0.05"));
        assert!(global_balance_bound(4).is_err());
    }
}
