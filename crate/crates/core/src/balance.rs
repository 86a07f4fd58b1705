//! Empirical and analytic balance results: brute-force factor spreads,
//! discrepancy extrema, witness replay and search, letter-bound
//! propagation, and the Riemann-sum lemma checks behind the analytic bound.

use crate::exactg::{sign_of, BetaLinear, Sign};
use crate::interval::{q_int, q_ratio, Iv, Q};
use crate::quadrature::{a_enclosure, integrand_iv};
use crate::spectral::{BetaEnclosure, SpectralSet};
use crate::transcend::{cos_iv, pi};
use crate::words::{
    apply_substitution, check_m, factor_search, fixed_point_prefix, iterate_phi0, LetterWord,
};
use crate::{CheckReport, Error, Result};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

/// Observed per-window extrema of `|w|_a` for one (length, letter) pair.
#[derive(Debug, Clone, Serialize)]
pub struct SpreadRow {
    pub l: usize,
    pub letter: u32,
    pub min: u32,
    pub max: u32,
    /// starting index of the first window attaining the maximum
    pub argmax: usize,
    /// starting index of the first window attaining the minimum
    pub argmin: usize,
}

impl SpreadRow {
    pub fn spread(&self) -> u32 {
        self.max - self.min
    }
}

/// Brute-force spread table over a prefix of the fixed point.
#[derive(Debug, Clone, Serialize)]
pub struct SpreadTable {
    pub m: u32,
    pub n: usize,
    pub rows: Vec<SpreadRow>,
}

impl SpreadTable {
    /// CSV emission: `L,letter,min,max,spread,argmax`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("L,letter,min,max,spread,argmax\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.l,
                r.letter,
                r.min,
                r.max,
                r.spread(),
                r.argmax
            ));
        }
        out
    }

    pub fn max_spread(&self) -> u32 {
        self.rows.iter().map(|r| r.spread()).max().unwrap_or(0)
    }
}

/// Cumulative per-letter count array over a prefix: `pc[i] = |u[0..i]|_a`.
fn prefix_counts(word: &LetterWord, a: u32) -> Vec<u32> {
    let mut pc = Vec::with_capacity(word.len() + 1);
    let mut c = 0u32;
    pc.push(0);
    for &x in &word.letters {
        if x as u32 == a {
            c += 1;
        }
        pc.push(c);
    }
    pc
}

/// One linear pass per (length, letter) over the length-n prefix of u.
pub fn brute_force_spreads(
    m: u32,
    letters: &[u32],
    lengths: &[usize],
    n: usize,
) -> Result<SpreadTable> {
    check_m(m)?;
    if let Some(&l) = lengths.iter().max() {
        if l > n {
            return Err(Error::Config(format!(
                "window length {l} exceeds prefix length {n}"
            )));
        }
    }
    let word = fixed_point_prefix(m, n)?;
    let mut rows = Vec::new();
    for &a in letters {
        if a >= m {
            return Err(Error::InvalidLetter { letter: a, m });
        }
        let pc = prefix_counts(&word, a);
        for &l in lengths {
            rows.push(scan_length(&pc, l, a));
        }
    }
    Ok(SpreadTable { m, n, rows })
}

fn scan_length(pc: &[u32], l: usize, a: u32) -> SpreadRow {
    let n = pc.len() - 1;
    let mut min = u32::MAX;
    let mut max = 0u32;
    let mut argmin = 0usize;
    let mut argmax = 0usize;
    for i in 0..=n - l {
        let c = pc[i + l] - pc[i];
        if c > max {
            max = c;
            argmax = i;
        }
        if c < min {
            min = c;
            argmin = i;
        }
    }
    SpreadRow {
        l,
        letter: a,
        min,
        max,
        argmax,
        argmin,
    }
}

/// Running extrema of the discrepancy `D_a(n) = |u[n]|_a - n mu_a`.
/// Members record the exact witnesses: `sup = sup_count - sup_at * mu_a`.
#[derive(Debug, Clone)]
pub struct DiscrepancyExtrema {
    pub m: u32,
    pub a: u32,
    pub n: u64,
    pub sup_count: BigInt,
    pub sup_at: u64,
    pub inf_count: BigInt,
    pub inf_at: u64,
}

impl DiscrepancyExtrema {
    pub fn sup(&self) -> BetaLinear {
        BetaLinear {
            p: self.sup_count.clone(),
            q: -BigInt::from(self.sup_at),
            s: self.a + 1,
        }
    }

    pub fn inf(&self) -> BetaLinear {
        BetaLinear {
            p: self.inf_count.clone(),
            q: -BigInt::from(self.inf_at),
            s: self.a + 1,
        }
    }

    /// `Delta-hat_a = sup D_a - inf D_a`, exact.
    pub fn delta_hat(&self) -> BetaLinear {
        BetaLinear {
            p: &self.sup_count - &self.inf_count,
            q: BigInt::from(self.inf_at) - BigInt::from(self.sup_at),
            s: self.a + 1,
        }
    }
}

/// Exact running extrema of D_a over `n <= N`. Comparisons of candidate
/// extrema are certified through exact BetaLinear sign evaluation; a float
/// shadow value prefilters the (rare) candidates to keep the pass linear.
pub fn discrepancy_extrema(
    m: u32,
    a: u32,
    n: u64,
    beta: &mut BetaEnclosure,
) -> Result<DiscrepancyExtrema> {
    check_m(m)?;
    if a >= m {
        return Err(Error::InvalidLetter { letter: a, m });
    }
    if n < 1 {
        return Err(Error::Config("discrepancy extrema need N >= 1".into()));
    }
    let word = fixed_point_prefix(m, n as usize)?;
    let mu_iv = beta.iv().powi(a as u64 + 1, 256).recip();
    let mu = mu_iv.mid().to_f64().expect("mu fits in f64");
    // margin dominating both float roundoff and the mu truncation over n steps
    let margin = 1e-4 + 2.0 * n as f64 * mu_iv.width().to_f64().unwrap_or(0.0);
    // extrema run over n >= 1; the first prefix letter of u is always 0
    let first = if a == 0 { 1i64 } else { 0 };
    let mut ex = DiscrepancyExtrema {
        m,
        a,
        n,
        sup_count: BigInt::from(first),
        sup_at: 1,
        inf_count: BigInt::from(first),
        inf_at: 1,
    };
    let mut count = first;
    let mut sup_f = first as f64 - mu;
    let mut inf_f = sup_f;
    for (idx, &x) in word.letters.iter().enumerate().skip(1) {
        let pos = idx as u64 + 1;
        if x as u32 == a {
            count += 1;
        }
        let d = count as f64 - pos as f64 * mu;
        if d > sup_f - margin {
            // exact comparison D(pos) > sup
            let diff = BetaLinear {
                p: BigInt::from(count) - &ex.sup_count,
                q: BigInt::from(ex.sup_at) - BigInt::from(pos),
                s: a + 1,
            };
            if sign_of(&diff, beta)? == Sign::Plus {
                ex.sup_count = BigInt::from(count);
                ex.sup_at = pos;
                sup_f = d;
            }
        }
        if d < inf_f + margin {
            let diff = BetaLinear {
                p: BigInt::from(count) - &ex.inf_count,
                q: BigInt::from(ex.inf_at) - BigInt::from(pos),
                s: a + 1,
            };
            if sign_of(&diff, beta)? == Sign::Minus {
                ex.inf_count = BigInt::from(count);
                ex.inf_at = pos;
                inf_f = d;
            }
        }
    }
    Ok(ex)
}

/// A replayable witness recipe: an optional leading letter, the
/// positive concatenation of `phi^k(0)` blocks, an optional left quotient
/// (a prefix to strip, itself a block concatenation), and an optional
/// trailing letter.
#[derive(Debug, Clone, Serialize)]
pub struct WitnessRecipe {
    pub m: u32,
    pub leading: Option<u8>,
    /// (exponent k, repeat count)
    pub blocks: Vec<(usize, usize)>,
    pub quotient: Vec<(usize, usize)>,
    pub trailing: Option<u8>,
}

/// Report produced by materializing a recipe.
#[derive(Debug, Clone, Serialize)]
pub struct WitnessReport {
    pub m: u32,
    pub length: usize,
    pub counts: Vec<u64>,
    pub quotient_ok: bool,
    /// first occurrence inside the scanned prefix, if any
    pub factor_at: Option<usize>,
    pub scanned_prefix: usize,
}

/// Known spread-3 v-recipe for m = 4 and m = 5.
pub fn witness_recipe_v(m: u32) -> Result<WitnessRecipe> {
    match m {
        4 => Ok(WitnessRecipe {
            m,
            leading: Some(1),
            blocks: vec![(12, 1), (9, 1), (5, 1), (2, 1)],
            quotient: vec![],
            trailing: None,
        }),
        5 => Ok(WitnessRecipe {
            m,
            leading: Some(1),
            blocks: vec![(14, 1), (11, 1), (6, 1), (2, 1)],
            quotient: vec![],
            trailing: None,
        }),
        _ => Err(Error::Recipe(format!("no v-recipe for m = {m}"))),
    }
}

/// Known spread-3 w-recipe for m = 4 and m = 5.
pub fn witness_recipe_w(m: u32) -> Result<WitnessRecipe> {
    match m {
        4 => Ok(WitnessRecipe {
            m,
            leading: None,
            blocks: vec![(11, 2), (10, 1), (7, 1), (6, 1), (4, 1), (3, 1), (2, 1)],
            quotient: vec![(9, 1), (8, 1), (5, 1), (2, 1)],
            trailing: Some(0),
        }),
        5 => Ok(WitnessRecipe {
            m,
            leading: None,
            blocks: vec![
                (13, 2),
                (12, 1),
                (9, 1),
                (8, 1),
                (7, 1),
                (5, 1),
                (3, 1),
                (2, 1),
            ],
            quotient: vec![(11, 1), (10, 1), (6, 1), (2, 1)],
            trailing: Some(0),
        }),
        _ => Err(Error::Recipe(format!("no w-recipe for m = {m}"))),
    }
}

fn concat_blocks(m: u32, blocks: &[(usize, usize)]) -> Vec<u8> {
    let mut out = Vec::new();
    for &(k, rep) in blocks {
        let block = iterate_phi0(m, k);
        for _ in 0..rep {
            out.extend_from_slice(&block);
        }
    }
    out
}

/// Materialize a recipe, validate the left quotient, and verify factorhood
/// inside `u[max(10 |word|, 10^6)]`. A missing factor is reported, not an
/// error; an invalid quotient is a recipe error.
pub fn compose_witness(recipe: &WitnessRecipe) -> Result<(LetterWord, WitnessReport)> {
    check_m(recipe.m)?;
    let positive = concat_blocks(recipe.m, &recipe.blocks);
    let quotient = concat_blocks(recipe.m, &recipe.quotient);
    if quotient.len() > positive.len() || positive[..quotient.len()] != quotient[..] {
        return Err(Error::Recipe(
            "left quotient is not a prefix of the positive concatenation".into(),
        ));
    }
    let mut letters = Vec::new();
    if let Some(l) = recipe.leading {
        letters.push(l);
    }
    letters.extend_from_slice(&positive[quotient.len()..]);
    if let Some(t) = recipe.trailing {
        letters.push(t);
    }
    let word = LetterWord::new(letters);
    let mut counts = vec![0u64; recipe.m as usize];
    for &x in &word.letters {
        counts[x as usize] += 1;
    }
    let scanned = (10 * word.len()).max(1_000_000);
    let factor_at = factor_search(recipe.m, &word, scanned)?;
    let report = WitnessReport {
        m: recipe.m,
        length: word.len(),
        counts,
        quotient_ok: true,
        factor_at,
        scanned_prefix: scanned,
    };
    Ok((word, report))
}

/// A spread-3 witness pair found by scanning.
#[derive(Debug, Clone, Serialize)]
pub struct Spread3Witness {
    pub m: u32,
    pub l: usize,
    pub letter: u32,
    pub v_start: usize,
    pub w_start: usize,
    pub v_count: u32,
    pub w_count: u32,
}

/// Scan window lengths in ascending order and return the first length whose
/// spread reaches 3 for some letter (letters tried in increasing order; the
/// extremal windows are the first attaining each extremum).
pub fn search_spread3_witness(
    m: u32,
    l_range: std::ops::RangeInclusive<usize>,
    n: usize,
) -> Result<Option<Spread3Witness>> {
    check_m(m)?;
    let word = fixed_point_prefix(m, n)?;
    let pcs: Vec<Vec<u32>> = (0..m).map(|a| prefix_counts(&word, a)).collect();
    for l in l_range {
        if l > n {
            break;
        }
        for a in 0..m as usize {
            let row = scan_length(&pcs[a], l, a as u32);
            if row.spread() >= 3 {
                return Ok(Some(Spread3Witness {
                    m,
                    l,
                    letter: a as u32,
                    v_start: row.argmax,
                    w_start: row.argmin,
                    v_count: row.max,
                    w_count: row.min,
                }));
            }
        }
    }
    Ok(None)
}

/// Section-4 propagation result.
#[derive(Debug, Clone)]
pub struct PropagatedBounds {
    pub m: u32,
    pub c0: u64,
    /// real-valued bounds `c_j <= (2 - 1/2^j) c0 + 4 (1 - 1/2^j)`, j = 0..m-1
    pub per_letter: Vec<Q>,
    /// integer global bound `2 c0 + 3`
    pub global: u64,
}

/// Letter-bound propagation: applicable only when `c0 <= 2^(m-1) - 3`; then
/// `c_j <= (2 - 1/2^j) c0 + 4 (1 - 1/2^j)` and u is `(2 c0 + 3)`-balanced.
pub fn propagate_letter_bounds(m: u32, c0: u64) -> Result<Option<PropagatedBounds>> {
    check_m(m)?;
    let cap = if m >= 2 && m < 64 {
        (1u64 << (m - 1)).saturating_sub(3)
    } else {
        u64::MAX
    };
    if c0 > cap {
        return Ok(None);
    }
    let per_letter = (0..m)
        .map(|j| {
            let half_pow = Q::new(BigInt::one(), BigInt::one() << j);
            (q_int(2) - &half_pow) * q_int(c0 as i64) + q_int(4) * (Q::one() - &half_pow)
        })
        .collect();
    Ok(Some(PropagatedBounds {
        m,
        c0,
        per_letter,
        global: 2 * c0 + 3,
    }))
}

/// Lifting identities: `|f|_0 = |phi^j(f)|_j` and
/// `|f| = |phi^j(f)|_{j-1}` for all j in 1..m, plus the zero-density bound
/// `|f|_0 <= |f|/2 + 1` for factors with `|f| <= 2^m`.
pub fn lift_letter_identity_check(m: u32, samples: &[LetterWord]) -> Result<CheckReport> {
    check_m(m)?;
    let name = format!("lift_letter_identities m={m}");
    for (si, f) in samples.iter().enumerate() {
        let f0 = f.count(0);
        let mut image = f.clone();
        for j in 1..m {
            image = apply_substitution(&image, m)?;
            if image.count(j as u8) != f0 {
                return Ok(CheckReport::fail(
                    name,
                    format!("|f|_0 != |phi^{j}(f)|_{j} for sample {si}"),
                ));
            }
            if image.count(j as u8 - 1) != f.len() {
                return Ok(CheckReport::fail(
                    name,
                    format!("|f| != |phi^{j}(f)|_{} for sample {si}", j - 1),
                ));
            }
        }
        if m < 30 && f.len() <= (1usize << m) && 2 * f0 > f.len() + 2 {
            return Ok(CheckReport::fail(
                name,
                format!("zero-density |f|_0 <= |f|/2 + 1 violated for sample {si}"),
            ));
        }
    }
    Ok(CheckReport::pass(
        name,
        format!("both lift identities hold on {} samples", samples.len()),
    ))
}

/// Deterministic factor samples out of the fixed point for the identity check.
pub fn sample_factors(m: u32, count: usize, max_len: usize) -> Result<Vec<LetterWord>> {
    let prefix = fixed_point_prefix(m, count * max_len + max_len)?;
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let len = 1 + (i * 7 + 3) % max_len;
        let start = (i * 37) % (prefix.len() - len);
        out.push(LetterWord::new(prefix.letters[start..start + len].to_vec()));
    }
    Ok(out)
}

/// `cos g / (5 - 4 cos g)` as an interval.
fn cos_ratio_iv(gamma: &Iv, bits: u32) -> Iv {
    let c = cos_iv(gamma, bits);
    let den = Iv::from_int(5).sub(&c.scale(&q_int(4)));
    c.div(&den).chop(bits)
}

/// Dense f64 sampling of `|f'|` with a Lipschitz margin. `deriv` must be the
/// closed-form derivative; `lip2` an assumed bound on `|f''|`.
fn sampled_derivative_max(deriv: impl Fn(f64) -> f64, points: usize, lip2: f64) -> f64 {
    let h = 2.0 * std::f64::consts::PI / points as f64;
    let mut max = 0.0f64;
    for i in 0..=points {
        let x = i as f64 * h;
        let v = deriv(x).abs();
        if v.is_finite() && v > max {
            max = v;
        }
    }
    max + h * lip2 / 2.0
}

/// Derivative of the A-integrand `f(x) = u / (t ln t)`, `u = 1 - cos x`,
/// `t = 1 + 4u`: `f'(x) = sin x (t ln t - 4 u (ln t + 1)) / (t ln t)^2`.
fn f_a_prime(x: f64) -> f64 {
    let u = 1.0 - x.cos();
    if u < 1e-12 {
        return 0.0;
    }
    let t = 1.0 + 4.0 * u;
    let lt = t.ln();
    x.sin() * (t * lt - 4.0 * u * (lt + 1.0)) / (t * lt).powi(2)
}

/// Derivative of `cos x / (5 - 4 cos x)`: `-5 sin x / (5 - 4 cos x)^2`.
fn f_b_prime(x: f64) -> f64 {
    -5.0 * x.sin() / (5.0 - 4.0 * x.cos()).powi(2)
}

/// Riemann-sum lemma suite over a certified spectral set:
///   1. `sum_j f_A(gamma_j) <= (m/2pi) A - 1/6 + ((m-1)/m)(pi/16)(1 + 1/36)`
///   2. `sum_j cos gamma_j / (5 - 4 cos gamma_j) <= m/6 + 5/6`
///   3. sampled `max |f_A'| < 1/8` (and above 0.05 as a sanity floor)
///   4. sampled `max |f_B'| < 9/8`
/// The derivative maxima are numerical re-verifications by dense sampling
/// plus a crude second-derivative margin, as a derivative maximum has no
/// closed form here; everything else is interval-certified.
pub fn riemann_lemma_checks(roots: &SpectralSet) -> Result<Vec<CheckReport>> {
    let m = roots.m;
    let bits = 96;
    let p = pi(bits);
    let mut reports = Vec::new();

    let mut f_sum = Iv::zero();
    let mut cos_sum = Iv::zero();
    for r in &roots.roots {
        f_sum = f_sum.add(&integrand_iv(&r.gamma, bits)).chop(bits);
        cos_sum = cos_sum.add(&cos_ratio_iv(&r.gamma, bits)).chop(bits);
    }

    let a = a_enclosure()?;
    let mq = q_int(m as i64);
    let rhs1 = a
        .scale(&mq)
        .div(&p.scale(&q_int(2)))
        .shift(&q_ratio(-1, 6))
        .add(
            &p.scale(&q_ratio(m as i64 - 1, 16 * m as i64))
                .scale(&q_ratio(37, 36)),
        );
    reports.push(if f_sum.hi <= rhs1.lo {
        CheckReport::pass(
            format!("riemann_f_sum m={m}"),
            format!("sum {:?} below bound {:?}", f_sum, rhs1),
        )
    } else {
        CheckReport::fail(
            format!("riemann_f_sum m={m}"),
            format!("sum {:?} vs bound {:?}", f_sum, rhs1),
        )
    });

    let rhs2 = q_ratio(m as i64, 6) + q_ratio(5, 6);
    reports.push(if cos_sum.hi <= rhs2 {
        CheckReport::pass(
            format!("riemann_cos_sum m={m}"),
            format!("sum {:?} below m/6 + 5/6", cos_sum),
        )
    } else {
        CheckReport::fail(
            format!("riemann_cos_sum m={m}"),
            format!("sum {:?} exceeds m/6 + 5/6", cos_sum),
        )
    });

    let max_a = sampled_derivative_max(f_a_prime, 100_000, 1.0);
    reports.push(if max_a < 0.125 && max_a > 0.05 {
        CheckReport::pass(
            "deriv_max_f_a",
            format!("sampled max |f_A'| = {max_a:.6} < 1/8"),
        )
    } else {
        CheckReport::fail(
            "deriv_max_f_a",
            format!("sampled max |f_A'| = {max_a:.6}"),
        )
    });

    let max_b = sampled_derivative_max(f_b_prime, 400_000, 10.0);
    reports.push(if max_b < 1.125 {
        CheckReport::pass(
            "deriv_max_f_b",
            format!("sampled max |f_B'| = {max_b:.6} < 9/8"),
        )
    } else {
        CheckReport::fail(
            "deriv_max_f_b",
            format!("sampled max |f_B'| = {max_b:.6}"),
        )
    });

    Ok(reports)
}
