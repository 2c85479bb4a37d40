use gerrymander::dp::solve_two_color_tree_rooted;
use gerrymander::oracle::{binomial, enumerate_connected_partitions, random_instance, random_star_instance};
use gerrymander::solve::{solve, Algorithm};
use gerrymander::{evaluate_partition, solve_brute_force, Instance};
use proptest::prelude::*;

fn answer(inst: &Instance) -> bool {
    solve(inst, Algorithm::Auto).unwrap().1.answer
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn scaling_weights_keeps_the_answer(n in 1usize..9, colors in 1usize..4, seed: u64, kf in 0.0f64..1.0, factor in prop::sample::select(vec![2u64, 7, 100])) {
        let k = 1 + ((n - 1) as f64 * kf) as usize;
        let inst = random_instance(n, colors, 5, k, seed);
        let mut scaled = inst.clone();
        scaled.weights.iter_mut().for_each(|w| *w *= factor);
        prop_assert_eq!(answer(&inst), answer(&scaled));
    }

    #[test]
    fn unused_color_keeps_the_answer(n in 1usize..9, colors in 1usize..4, seed: u64, kf in 0.0f64..1.0) {
        let k = 1 + ((n - 1) as f64 * kf) as usize;
        let inst = random_instance(n, colors, 5, k, seed);
        let mut wider = inst.clone();
        wider.colors.push("unused".into());
        prop_assert_eq!(answer(&inst), answer(&wider));
    }

    #[test]
    fn partition_count_is_binomial(n in 1usize..11, seed: u64, kf in 0.0f64..1.0) {
        let k = 1 + ((n - 1) as f64 * kf) as usize;
        let inst = random_instance(n, 2, 3, k, seed);
        let count = enumerate_connected_partitions(&inst, k, u64::MAX, None).unwrap();
        prop_assert_eq!(count as u128, binomial(n as u64 - 1, k as u64 - 1));
    }

    #[test]
    fn dp_answer_ignores_the_root(n in 1usize..12, seed: u64, kf in 0.0f64..1.0) {
        let k = 1 + ((n - 1) as f64 * kf) as usize;
        let inst = random_instance(n, 2, 6, k, seed);
        let first = solve_two_color_tree_rooted(&inst, 0).unwrap().answer;
        for root in 1..n {
            let r = solve_two_color_tree_rooted(&inst, root).unwrap();
            prop_assert_eq!(r.answer, first);
            if let Some(w) = r.witness {
                prop_assert!(evaluate_partition(&inst, &w).is_solution);
            }
        }
    }

    #[test]
    fn witnesses_from_auto_are_solutions(n in 1usize..10, colors in 1usize..5, seed: u64, kf in 0.0f64..1.0) {
        let k = 1 + ((n - 1) as f64 * kf) as usize;
        let inst = random_star_instance(n, colors, 6, k, seed);
        let (_, r) = solve(&inst, Algorithm::Auto).unwrap();
        prop_assert_eq!(r.answer, solve_brute_force(&inst).unwrap().answer);
        if let Some(w) = r.witness {
            prop_assert!(evaluate_partition(&inst, &w).is_solution);
        }
    }
}
