//! Property-based invariants for the combinatorial layer.

use num_bigint::BigInt;
use proptest::prelude::*;

use mbalance::exactg::{g_sequence, reduce, BetaLinear};
use mbalance::words::{
    apply_substitution, decompose_prefix, fixed_point_prefix, parikh, reconstruct_decomposition,
    LetterWord, SubstitutionMatrix,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The Parikh map is a homomorphism: psi(phi(w)) = M psi(w).
    #[test]
    fn parikh_homomorphism(m in 2u32..=8, letters in prop::collection::vec(0u8..8, 0..64)) {
        let word = LetterWord::new(letters.into_iter().map(|l| l % m as u8).collect());
        let image = apply_substitution(&word, m).unwrap();
        let matrix = SubstitutionMatrix::new(m);
        prop_assert_eq!(
            parikh(&image, m).unwrap(),
            matrix.apply(&parikh(&word, m).unwrap())
        );
    }

    /// Greedy prefix decomposition reconstructs the exact prefix.
    #[test]
    fn decompose_roundtrip(m in 2u32..=8, n in 1u64..=50_000) {
        let d = decompose_prefix(m, n).unwrap();
        let w = reconstruct_decomposition(m, &d).unwrap();
        prop_assert_eq!(w.len() as u64, n);
        if n <= 4096 {
            let prefix = fixed_point_prefix(m, n as usize).unwrap();
            prop_assert_eq!(w.letters, prefix.letters);
        }
    }

    /// reduce is linear over integer combinations of the g-sequence.
    #[test]
    fn reduce_linearity(m in 2u32..=6, a in 0u32..6, k1 in 0usize..20, k2 in 0usize..20,
                        c1 in -50i64..=50, c2 in -50i64..=50) {
        let a = a % m;
        let kmax = k1.max(k2);
        let gs = g_sequence(m, a, kmax).unwrap();
        let combo = {
            let mut g = gs[k1].clone();
            g.ic = g.ic.iter().zip(&gs[k2].ic)
                .map(|(x, y)| x * BigInt::from(c1) + y * BigInt::from(c2))
                .collect();
            g
        };
        let lhs = reduce(&combo);
        let rhs = {
            let r1 = reduce(&gs[k1]).scale(&BigInt::from(c1));
            let r2 = reduce(&gs[k2]).scale(&BigInt::from(c2));
            r1.add(&r2)
        };
        prop_assert_eq!(lhs, rhs);
    }

    /// The reduced form of any integer combination stays consistent under
    /// negation: reduce(-g) = -reduce(g).
    #[test]
    fn reduce_negation(m in 2u32..=6, a in 0u32..6, k in 0usize..24) {
        let a = a % m;
        let gs = g_sequence(m, a, k).unwrap();
        let mut neg = gs[k].clone();
        neg.ic = neg.ic.iter().map(|c| -c).collect();
        let want: BetaLinear = reduce(&gs[k]).neg();
        prop_assert_eq!(reduce(&neg), want);
    }
}
