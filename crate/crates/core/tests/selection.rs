mod oracles;

use approx::assert_relative_eq;
use proptest::prelude::*;

use ipss::grid::LambdaGrid;
use ipss::selection::{
    bound_integral, efp_scores, fdelta_threshold, rank_by_efp, score_feature, select_by_efp,
    select_by_fdr, Scorer,
};

#[test]
fn multinomial_example_by_hand() {
    assert_relative_eq!(
        oracles::multinomial_bound(2, 2, 0.1),
        0.00505,
        max_relative = 1e-12
    );
    for b in 1..=6 {
        assert_relative_eq!(
            oracles::multinomial_bound(b, 1, 0.3),
            0.09,
            max_relative = 1e-12
        );
        for m in 1..=3 {
            assert_relative_eq!(
                oracles::multinomial_bound(b, m, 1.0),
                1.0,
                max_relative = 1e-12
            );
        }
    }
}

#[test]
fn constant_path_cubic_score() {
    let grid = LambdaGrid::new(1.0, 0.01, 25, 1.0).unwrap();
    let s = score_feature(&[0.75; 25], Scorer::H3, &grid);
    assert_relative_eq!(s, 0.125, max_relative = 1e-12);
}

#[test]
fn full_model_bound_is_p() {
    let grid = LambdaGrid::new(1.0, 0.01, 25, 1.0).unwrap();
    let p = 40;
    let i = bound_integral(&[p as f64; 25], Scorer::H2, 50, p, &grid).unwrap();
    assert_relative_eq!(i, p as f64, max_relative = 1e-12);
}

#[test]
fn fdr_ratio_rule_example() {
    let efp = [1.8, 0.2, 0.5];
    assert_eq!(select_by_fdr(&efp, 0.3), vec![false, true, true]);
    assert_eq!(rank_by_efp(&efp), vec![1, 2, 0]);
}

#[test]
fn fdelta_threshold_is_feasible_or_errors() {
    let tau = fdelta_threshold(0.5, 1.0, 0.2).unwrap();
    assert!(tau > 0.5 && tau <= 1.0);
    assert!(fdelta_threshold(10.0, 1.0, 0.2).is_err());
}

proptest! {
    #[test]
    fn closed_forms_match_enumeration(b in 2usize..7, x in 0.0f64..=1.0, p in 5usize..400) {
        for (m, scorer) in [(1, Scorer::H1), (2, Scorer::H2), (3, Scorer::H3)] {
            let exact = oracles::multinomial_bound(b, m, x);
            let single = oracles::single_half_bound(b, m, x);
            for (s, exact) in [(scorer, exact), (Scorer::W(m as u32), single)] {
                let got = s.bound_integrand(x * p as f64, b, p).unwrap() / p as f64;
                prop_assert!((got - exact).abs() <= 1e-12, "{} B={} x={}: {} vs {}", s, b, x, got, exact);
            }
        }
    }

    #[test]
    fn efp_decreases_as_score_grows(scores in prop::collection::vec(0.0f64..1.0, 2..40), bound in 0.0f64..5.0) {
        let p = scores.len();
        let efp = efp_scores(&scores, bound, p);
        for i in 0..p {
            prop_assert!(efp[i] <= p as f64 + 1e-12);
            for j in 0..p {
                if scores[i] > scores[j] {
                    prop_assert!(efp[i] <= efp[j]);
                }
            }
        }
    }

    #[test]
    fn efp_selection_respects_target(efp in prop::collection::vec(0.0f64..5.0, 1..40), t in 0.0f64..5.0) {
        let sel = select_by_efp(&efp, t);
        for (s, e) in sel.iter().zip(&efp) {
            prop_assert_eq!(*s, *e <= t);
        }
    }

    #[test]
    fn fdr_selection_is_safe_and_maximal(efp in prop::collection::vec(0.0f64..5.0, 1..40), f in 0.01f64..1.0) {
        let sel = select_by_fdr(&efp, f);
        let k = sel.iter().filter(|&&s| s).count();
        let order = rank_by_efp(&efp);
        // the selection is a prefix of the efp ranking
        for (rank, &j) in order.iter().enumerate() {
            prop_assert_eq!(sel[j], rank < k);
        }
        if k > 0 {
            let worst = efp[order[k - 1]];
            prop_assert!(worst / k as f64 <= f + 1e-12);
        }
        for j in (k + 1)..=efp.len() {
            prop_assert!(efp[order[j - 1]] / j as f64 > f);
        }
    }

    #[test]
    fn quadratic_scores_bounded_by_linear(path in prop::collection::vec(0.0f64..=1.0, 25)) {
        let grid = LambdaGrid::new(1.0, 0.01, 25, 1.0).unwrap();
        let h1 = score_feature(&path, Scorer::H1, &grid);
        let h2 = score_feature(&path, Scorer::H2, &grid);
        let h3 = score_feature(&path, Scorer::H3, &grid);
        prop_assert!(h3 <= h2 + 1e-12 && h2 <= h1 + 1e-12);
    }
}
