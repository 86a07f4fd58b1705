//! Acceptance gate: one test per criterion, each printing a single
//! PASS/FAIL verdict line (run with `--nocapture` to see them on success).

use num_bigint::BigInt;
use num_traits::{One, Signed};

use mbalance::balance::{
    brute_force_spreads, compose_witness, discrepancy_extrema, search_spread3_witness, witness_recipe_v,
    witness_recipe_w,
};
use mbalance::exactg::{
    analytic_tail_check, certify_c_a_bound_with, closed_head_sum,
    eval_interval, g_sequence, head_abs_sum, reduce, sign_of, tail_bound,
};
use mbalance::interval::{from_decimal, q_ratio, Q};
use mbalance::quadrature::{a_enclosure, global_balance_bound, kappa};
use mbalance::spectral::{
    argument_window, beta_enclosure, conjugate_enclosures, lemma_x0_check, modulus_upper_bound,
};
use mbalance::transcend::pi;
use mbalance::words::fixed_point_prefix;

fn verdict(criterion: u32, pass: bool, detail: &str) {
    println!(
        "ACCEPTANCE {criterion} {}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} failed: {detail}");
}

fn q_dec(s: &str) -> Q {
    from_decimal(s).unwrap()
}

fn root_tol() -> Q {
    Q::new(BigInt::one(), BigInt::from(10u32).pow(20))
}

/// Criterion 1: the full published grid of certified per-letter bounds,
/// m = 2..12, all letters (77 cells).
#[test]
fn criterion_1_bounds_grid() {
    let expected: [&[i64]; 11] = [
        &[1, 1],
        &[2, 2, 2],
        &[2, 3, 3, 3],
        &[2, 3, 3, 3, 3],
        &[3, 3, 4, 4, 4, 4],
        &[3, 4, 4, 4, 4, 4, 4],
        &[3, 4, 4, 4, 4, 4, 4, 4],
        &[3, 4, 5, 5, 5, 5, 5, 5, 5],
        &[3, 5, 5, 5, 5, 5, 5, 5, 5, 5],
        &[4, 5, 5, 6, 6, 6, 6, 6, 6, 6, 6],
        &[4, 5, 6, 6, 6, 6, 6, 6, 6, 6, 6, 6],
    ];
    let mut cells = 0usize;
    let mut mismatches = Vec::new();
    for (i, row) in expected.iter().enumerate() {
        let m = i as u32 + 2;
        let set = conjugate_enclosures(m, &root_tol()).unwrap();
        let mut beta = set.beta.clone();
        for (a, &want) in row.iter().enumerate() {
            let got = certify_c_a_bound_with(m, a as u32, &set, &mut beta)
                .unwrap()
                .bound;
            cells += 1;
            if got != BigInt::from(want) {
                mismatches.push(format!("(m={m}, a={a}): got {got}, want {want}"));
            }
        }
    }
    verdict(
        1,
        cells == 77 && mismatches.is_empty(),
        &format!(
            "certified bound grid m=2..12, {cells} cells, mismatches: {:?}",
            mismatches
        ),
    );
}

/// Criterion 2: the m = 4 summary — exact symbolic head sums, numeric sums
/// within 1e-4, tail bounds within 1e-3, resulting bounds 2, 3, 3, 3.
#[test]
fn criterion_2_m4_summary() {
    let set = conjugate_enclosures(4, &root_tol()).unwrap();
    let mut beta = set.beta.clone();
    let symbolic = [
        (1664i64, -3205i64, 1u32),
        (286, -1057, 2),
        (-487, 3499, 3),
        (-86, 1209, 4),
    ];
    let numeric = ["1.2778", "1.5157", "1.5611", "1.5776"];
    let tails = ["0.20054", "0.22213", "0.25916", "0.31056"];
    let bounds = [2i64, 3, 3, 3];
    let mut ok = true;
    let mut detail = String::new();
    for a in 0..4u32 {
        let head = head_abs_sum(4, a, 13, &mut beta).unwrap();
        let (p, q, s) = symbolic[a as usize];
        if (head.p.clone(), head.q.clone(), head.s) != (BigInt::from(p), BigInt::from(q), s) {
            ok = false;
            detail.push_str(&format!("symbolic mismatch a={a}; "));
        }
        let mid = eval_interval(&head, &beta).mid();
        if (mid - q_dec(numeric[a as usize])).abs() > q_dec("0.0001") {
            ok = false;
            detail.push_str(&format!("numeric mismatch a={a}; "));
        }
        let tail = tail_bound(4, a, 13, &set).unwrap();
        if (tail.value - q_dec(tails[a as usize])).abs() > q_dec("0.001") {
            ok = false;
            detail.push_str(&format!("tail mismatch a={a}; "));
        }
        let cert = certify_c_a_bound_with(4, a, &set, &mut beta).unwrap();
        if cert.bound != BigInt::from(bounds[a as usize]) {
            ok = false;
            detail.push_str(&format!("bound mismatch a={a}; "));
        }
    }
    if ok {
        detail = "m=4 symbolic heads, numerics (1e-4), tails (1e-3), bounds 2,3,3,3".into();
    }
    verdict(2, ok, &detail);
}

/// Criterion 3: the m = 4 sign table — all 13 IC vectors and all 52 signs.
#[test]
fn criterion_3_m4_signs() {
    let ics: [&[i64]; 13] = [
        &[1, 0, 0, 0],
        &[0, 1, 0, 0],
        &[0, 0, 1, 0],
        &[0, 0, 0, 1],
        &[1, 1, 1, 1],
        &[1, 2, 2, 2],
        &[2, 3, 4, 4],
        &[4, 6, 7, 8],
        &[8, 12, 14, 15],
        &[15, 23, 27, 29],
        &[29, 44, 52, 56],
        &[56, 85, 100, 108],
        &[108, 164, 193, 208],
    ];
    let signs = [
        "+---+---+--++",
        "-+---+--++--+",
        "--+---+--++--",
        "---+---+--++-",
    ];
    let gs = g_sequence(4, 0, 12).unwrap();
    let mut beta = beta_enclosure(4, &q_dec("0.000000000000000000000000000001")).unwrap();
    let mut ok = true;
    for (k, want) in ics.iter().enumerate() {
        let got: Vec<BigInt> = want.iter().map(|&c| BigInt::from(c)).collect();
        if gs[k].ic != got {
            ok = false;
        }
    }
    let mut checked = 0usize;
    for a in 0..4u32 {
        let expect: Vec<char> = signs[a as usize].chars().collect();
        for k in 0..13usize {
            let v = reduce(&g_sequence(4, a, k).unwrap()[k]);
            let s = sign_of(&v, &mut beta).unwrap();
            if s.as_char() != expect[k] {
                ok = false;
            }
            checked += 1;
        }
    }
    verdict(
        3,
        ok && checked == 52,
        "m=4 sign table: 13 IC vectors, 52 signs",
    );
}

/// Criterion 4: brute-force window facts — Fibonacci spread 1, Tribonacci
/// spread <= 2, spread 3 (and never 4 for letter 1) at m=4, spread 3 at m=5.
#[test]
fn criterion_4_brute_force() {
    let mut ok = true;
    let mut detail = String::new();

    let lengths: Vec<usize> = (1..=2000).collect();
    let fib = brute_force_spreads(2, &[0, 1], &lengths, 1_000_000).unwrap();
    if !fib.rows.iter().all(|r| r.spread() == 1) {
        ok = false;
        detail.push_str("fibonacci spread != 1; ");
    }
    let trib = brute_force_spreads(3, &[0, 1, 2], &lengths, 1_000_000).unwrap();
    if trib.max_spread() > 2 {
        ok = false;
        detail.push_str("tribonacci spread > 2; ");
    }

    let lengths4: Vec<usize> = (1..=4000).collect();
    let m4 = brute_force_spreads(4, &[1], &lengths4, 1_000_000).unwrap();
    if m4.max_spread() != 3 {
        ok = false;
        detail.push_str(&format!("m=4 letter-1 max spread {}; ", m4.max_spread()));
    }
    let hit4 = search_spread3_witness(4, 1..=4000, 1_000_000).unwrap();
    if hit4.is_none() {
        ok = false;
        detail.push_str("m=4 spread-3 window not found; ");
    }

    let hit5 = search_spread3_witness(5, 1..=16000, 4_000_000).unwrap();
    match &hit5 {
        Some(w) => detail.push_str(&format!(
            "m=5 spread 3 at L={} letter {}; ",
            w.l, w.letter
        )),
        None => {
            ok = false;
            detail.push_str("m=5 spread-3 window not found; ");
        }
    }
    if ok {
        detail = format!(
            "fib spread 1 (L<=2000), trib <=2, m=4 letter-1 spread 3 never 4 (L<=4000), {}",
            detail
        );
    }
    verdict(4, ok, &detail);
}

/// Criterion 5: appendix lemma suite for m = 2..32 — exact x0 sandwich,
/// argument windows, modulus domination, moduli product within 1e-6 of 1.
#[test]
fn criterion_5_appendix_lemmas() {
    let mut ok = true;
    let mut detail = String::new();
    let pi96 = pi(96);
    for m in 2..=32u32 {
        if !lemma_x0_check(m).unwrap().pass {
            ok = false;
            detail.push_str(&format!("x0 sandwich m={m}; "));
        }
        let set = conjugate_enclosures(m, &root_tol()).unwrap();
        for r in &set.roots {
            let (wlo, whi) = argument_window(m, r.j);
            if !(r.gamma.lo > &wlo * &pi96.hi && r.gamma.hi < &whi * &pi96.lo) {
                ok = false;
                detail.push_str(&format!("window m={m} j={}; ", r.j));
            }
            let cap = modulus_upper_bound(m, r.j, &r.gamma, 96);
            if r.modulus.hi > cap {
                ok = false;
                detail.push_str(&format!("modulus bound m={m} j={}; ", r.j));
            }
        }
        let product = set.moduli_product();
        let one = Q::one();
        let eps = q_ratio(1, 1_000_000);
        if (&product.lo - &one).abs() >= eps || (&product.hi - &one).abs() >= eps {
            ok = false;
            detail.push_str(&format!("moduli product m={m}; "));
        }
    }
    if ok {
        detail = "x0 sandwich, argument windows, modulus domination, product ~ 1 for m=2..32"
            .into();
    }
    verdict(5, ok, &detail);
}

/// Criterion 6: constants — A and kappa enclosures, the m=29 theorem value,
/// head sums < 5/4 and analytic tail checks across m = 4..64.
#[test]
fn criterion_6_constants() {
    let mut ok = true;
    let mut detail = String::new();

    let a = a_enclosure().unwrap();
    if !(a.lo > q_dec("0.9") && a.hi < q_dec("0.91") && a.width() <= q_dec("0.001")) {
        ok = false;
        detail.push_str("A enclosure; ");
    }
    let k = kappa().unwrap();
    if !(k.lo > q_dec("0.57") && k.hi < q_dec("0.59")) {
        ok = false;
        detail.push_str("kappa enclosure; ");
    }
    if global_balance_bound(29).unwrap().bound != BigInt::from(28) {
        ok = false;
        detail.push_str("global bound m=29; ");
    }
    for m in 4..=64u32 {
        let set = conjugate_enclosures(m, &root_tol()).unwrap();
        let mut beta = set.beta.clone();
        let (_, head_report) = closed_head_sum(m, &mut beta).unwrap();
        if !head_report.pass {
            ok = false;
            detail.push_str(&format!("closed head sum m={m}; "));
        }
        if !analytic_tail_check(m, &set).unwrap().pass {
            ok = false;
            detail.push_str(&format!("analytic tail m={m}; "));
        }
    }
    if ok {
        detail = "A in (0.9,0.91) width<=1e-3, kappa in (0.57,0.59), m=29 -> 28, \
                  head sums < 5/4 and analytic tails pass for m=4..64"
            .into();
    }
    verdict(6, ok, &detail);
}

/// Criterion 7: discrepancy cross-validation — decomposition-based D_a(n)
/// equals direct counting for m <= 6, n <= 10^4, and the observed extrema
/// spread at N = 10^5 never exceeds the certified head + tail.
#[test]
fn criterion_7_discrepancy() {
    let mut ok = true;
    let mut detail = String::new();
    let n_max = 10_000usize;
    for m in 2..=6u32 {
        let prefix = fixed_point_prefix(m, n_max).unwrap();
        // g(a, k) table large enough for every decomposition below n_max
        let gtab: Vec<Vec<mbalance::exactg::BetaLinear>> = (0..m)
            .map(|a| {
                (0..64)
                    .map(|k| mbalance::exactg::g_reduced(m, a, k).unwrap())
                    .collect()
            })
            .collect();
        let mut counts = vec![0i64; m as usize];
        'outer: for n in 1..=n_max {
            counts[prefix.letters[n - 1] as usize] += 1;
            let d = mbalance::words::decompose_prefix(m, n as u64).unwrap();
            for a in 0..m as usize {
                // exact equality of the decomposition sum with (count, -n)
                let mut acc = mbalance::exactg::BetaLinear::zero(a as u32 + 1);
                for (k, bit) in d.bits.iter().enumerate() {
                    if *bit {
                        acc = acc.add(&gtab[a][k]);
                    }
                }
                if acc.p != BigInt::from(counts[a]) || acc.q != BigInt::from(-(n as i64)) {
                    ok = false;
                    detail.push_str(&format!("D mismatch m={m} a={a} n={n}; "));
                    break 'outer;
                }
            }
        }
    }
    // observed spread at N = 10^5 stays below the certified value
    for m in 2..=6u32 {
        let set = conjugate_enclosures(m, &root_tol()).unwrap();
        let mut beta = set.beta.clone();
        for a in 0..m {
            let cert = certify_c_a_bound_with(m, a, &set, &mut beta).unwrap();
            let ext = discrepancy_extrema(m, a, 100_000, &mut beta).unwrap();
            let observed = eval_interval(&ext.delta_hat(), &beta);
            let certified = cert.head_interval.hi.clone() + &cert.tail.value;
            if observed.lo > certified {
                ok = false;
                detail.push_str(&format!("extrema exceed certificate m={m} a={a}; "));
            }
        }
    }
    if ok {
        detail = "decomposition D_a(n) exact for m<=6, n<=1e4; extrema at N=1e5 \
                  below certified head+tail"
            .into();
    }
    verdict(7, ok, &detail);
}

/// Criterion 8: witness replay — both recipes compose, verify, and
/// report lengths 3307/3303 (m=4) and 15483/15479 (m=5).
#[test]
fn criterion_8_witness_replay() {
    let mut ok = true;
    let mut detail = String::new();
    for (m, lv, lw) in [(4u32, 3307usize, 3303usize), (5, 15483, 15479)] {
        let (v_word, v_rep) = compose_witness(&witness_recipe_v(m).unwrap()).unwrap();
        let (w_word, w_rep) = compose_witness(&witness_recipe_w(m).unwrap()).unwrap();
        if !(v_rep.quotient_ok && w_rep.quotient_ok) {
            ok = false;
            detail.push_str(&format!("quotient invalid m={m}; "));
        }
        if !(v_rep.factor_at.is_some() && w_rep.factor_at.is_some()) {
            ok = false;
            detail.push_str(&format!("factorhood m={m}; "));
        }
        if v_word.len() != lv || w_word.len() != lw {
            ok = false;
            detail.push_str(&format!(
                "lengths m={m}: {}/{} want {lv}/{lw}; ",
                v_word.len(),
                w_word.len()
            ));
        }
        if v_word.count(1) as i64 - w_word.count(1) as i64 != 3 {
            ok = false;
            detail.push_str(&format!("letter-1 difference m={m}; "));
        }
    }
    if ok {
        detail = "recipes replay to 3307/3303 and 15483/15479 with letter-1 difference 3".into();
    }
    verdict(8, ok, &detail);
}
