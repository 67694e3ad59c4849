use bgsol_core::dynamics::{d_map, detect_cycle, floor_over_p, hitting_time, ImmigrationProcess};
use bgsol_core::etienne::{shape_stats, Tracker};
use bgsol_core::partitions::{
    q1_move, qp_move, qp_transition_distribution, triangle_side, triangular_number,
};
use bgsol_core::{BernoulliField, EtienneDiagram, Partition, Probability, ShapeStats};
use proptest::prelude::*;

fn partition(max_pile: u64, max_len: usize) -> impl Strategy<Value = Partition> {
    prop::collection::vec(1..=max_pile, 0..=max_len).prop_map(Partition::ord)
}

fn nonempty(max_pile: u64, max_len: usize) -> impl Strategy<Value = Partition> {
    prop::collection::vec(1..=max_pile, 1..=max_len).prop_map(Partition::ord)
}

fn random_p() -> impl Strategy<Value = Probability> {
    (0.01f64..0.99).prop_map(|p| Probability::new(p).unwrap())
}

/// `s` with a few cards added to some piles and a few extra piles.
fn dominating(s: &Partition, bumps: &[u64], extra: &[u64]) -> Partition {
    let piles = s
        .piles()
        .iter()
        .zip(bumps.iter().chain(std::iter::repeat(&0)))
        .map(|(&k, &b)| k + b);
    let mut grown: Vec<u64> = piles.collect();
    let floor = s.piles().last().copied().unwrap_or(u64::MAX);
    grown.extend(extra.iter().map(|&e| e.min(floor)));
    Partition::ord(grown)
}

proptest! {
    #[test]
    fn ord_is_canonical(v in prop::collection::vec(0u64..50, 0..40)) {
        let s = Partition::ord(v.clone());
        prop_assert_eq!(s.total(), v.iter().sum::<u64>());
        prop_assert!(s.piles().windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(s.piles().iter().all(|&k| k > 0));
        prop_assert_eq!(Partition::ord(s.piles().to_vec()), s.clone());
    }

    #[test]
    fn text_and_json_round_trip(s in partition(60, 30)) {
        prop_assert_eq!(s.to_string().parse::<Partition>().unwrap(), s.clone());
        let json = serde_json::to_string(&s).unwrap();
        prop_assert_eq!(serde_json::from_str::<Partition>(&json).unwrap(), s);
    }

    #[test]
    fn moves_conserve_cards(s in partition(60, 40), p in random_p(), seed in any::<u64>()) {
        prop_assert_eq!(q1_move(&s).total(), s.total());
        let mut field = BernoulliField::new(p, seed);
        let mut t = s.clone();
        for _ in 0..10 {
            t = qp_move(&t, &mut field);
            prop_assert_eq!(t.total(), s.total());
        }
    }

    #[test]
    fn certain_removal_is_deterministic(s in partition(60, 40), seed in any::<u64>()) {
        let mut field = BernoulliField::new(Probability::ONE, seed);
        prop_assert_eq!(qp_move(&s, &mut field), q1_move(&s));
    }

    #[test]
    fn seeded_paths_repeat(s in partition(40, 30), p in random_p(), seed in any::<u64>(), stream in 0u64..64) {
        let mut a = BernoulliField::with_stream(p, seed, stream);
        let mut b = BernoulliField::with_stream(p, seed, stream);
        let (mut x, mut y) = (s.clone(), s);
        for _ in 0..25 {
            x = qp_move(&x, &mut a);
            y = qp_move(&y, &mut b);
        }
        prop_assert_eq!(x, y);
    }

    #[test]
    fn rho_is_a_metric(a in partition(50, 30), b in partition(50, 30), c in partition(50, 30)) {
        prop_assert_eq!(a.rho(&a), 0);
        prop_assert_eq!(a.rho(&b), b.rho(&a));
        prop_assert!(a.rho(&c) <= a.rho(&b) + b.rho(&c));
        prop_assert_eq!(a.rho(&b) == 0, a == b);
    }

    #[test]
    fn leq_is_a_partial_order(
        s in partition(30, 20),
        b1 in prop::collection::vec(0u64..3, 0..20),
        e1 in prop::collection::vec(1u64..4, 0..3),
        b2 in prop::collection::vec(0u64..3, 0..25),
        e2 in prop::collection::vec(1u64..4, 0..3),
    ) {
        let t = dominating(&s, &b1, &e1);
        let u = dominating(&t, &b2, &e2);
        prop_assert!(s.leq(&s));
        prop_assert!(s.leq(&t) && t.leq(&u) && s.leq(&u));
        prop_assert_eq!(s.leq(&t) && t.leq(&s), s == t);
    }

    #[test]
    fn kernel_is_a_distribution(s in nonempty(12, 12), p in random_p()) {
        let row = qp_transition_distribution(&s, p).unwrap();
        let sum: f64 = row.values().sum();
        prop_assert!((sum - 1.0).abs() < 1e-12);
        prop_assert!(row.keys().all(|t| t.total() == s.total()));
        prop_assert!(row.values().all(|&w| w > 0.0));
    }

    #[test]
    fn diagram_round_trip_and_laws(s in partition(80, 40)) {
        let d = EtienneDiagram::from_partition(&s);
        prop_assert_eq!(d.to_partition(), s.clone());
        prop_assert_eq!(d.particle_count(), s.total());
        prop_assert!(d.satisfies_occupancy_laws());
        let rebuilt = EtienneDiagram::from_cells(d.occupied_cells()).unwrap();
        prop_assert_eq!(rebuilt, d);
    }

    #[test]
    fn diagram_move_is_the_game_move(s in partition(80, 40)) {
        let d = EtienneDiagram::from_partition(&s);
        let (next, falls) = d.etienne_move();
        prop_assert!(next.satisfies_occupancy_laws());
        prop_assert_eq!(next.to_partition(), q1_move(&s));
        let (e0, e1) = (shape_stats(&d).e_total2(), shape_stats(&next).e_total2());
        prop_assert_eq!(e0 - e1, 2 * falls);
    }

    #[test]
    fn fast_shape_stats_match_diagram(s in nonempty(80, 40)) {
        let fast = ShapeStats::of_partition(&s);
        prop_assert_eq!(fast, shape_stats(&EtienneDiagram::from_partition(&s)));
        let n = s.total();
        prop_assert_eq!(fast.v_plus - fast.v_minus, n - triangular_number(triangle_side(n)));
        prop_assert_eq!(fast.e_total2() == 0, s.is_staircase());
    }

    #[test]
    fn energy_never_increases(s in nonempty(60, 30)) {
        let mut t = s;
        let mut e = ShapeStats::of_partition(&t).e_total2();
        for _ in 0..60 {
            t = q1_move(&t);
            let next = ShapeStats::of_partition(&t).e_total2();
            prop_assert!(next <= e);
            e = next;
        }
    }

    #[test]
    fn drift_bound_on_full_turns(s in nonempty(30, 12), turns in 1u64..4) {
        // after whole turns of the origin row the floor(n/i) bound holds exactly,
        // and the ceiling version holds at every time
        let d = EtienneDiagram::from_partition(&s);
        let rows = d.height() + 2;
        let mut tracker = Tracker::all_cells(d, rows);
        for _ in 0..turns * rows as u64 {
            tracker.step();
            for r in tracker.records().filter(|r| r.drift_hypothesis()) {
                let i = r.origin.0;
                prop_assert!(r.drift() <= r.moves.div_ceil(i) * r.vertical_moves);
                if r.moves % i == 0 {
                    prop_assert!(r.drift() <= r.drift_bound());
                }
            }
        }
    }

    #[test]
    fn cycles_are_well_formed(s in nonempty(12, 10)) {
        let r = detect_cycle(&s, 100_000).unwrap();
        prop_assert!(r.cycle_length >= 1);
        prop_assert_eq!(r.cycle_states.len() as u64, r.cycle_length);
        if r.reached_stable {
            prop_assert_eq!(r.cycle_length, 1);
            prop_assert_eq!(triangular_number(triangle_side(s.total())), s.total());
        }
        let k = triangle_side(s.total());
        prop_assert!(r.transient_length <= k * k + k + 2);
    }

    #[test]
    fn hit_time_within_budget(s in nonempty(40, 30), budget in 0u64..300) {
        let eps = 3.0;
        if let Ok(r) = hitting_time(&s, eps, budget, None) {
            prop_assert!(r.hit_time.is_none_or(|t| t <= budget));
            prop_assert!(r.settle_time.is_none_or(|t| t <= budget));
        }
    }

    #[test]
    fn immigration_totals(s in partition(40, 30), kappa in 0u64..40, n in 0u64..30) {
        let mut proc = ImmigrationProcess::new(s.clone(), kappa);
        for _ in 0..n {
            proc.step();
        }
        prop_assert_eq!(proc.state.total(), s.total() + n * kappa);
    }

    #[test]
    fn immigration_dominates_plain_game(
        s in partition(30, 20),
        bumps in prop::collection::vec(0u64..4, 0..20),
        extra in prop::collection::vec(1u64..5, 0..4),
        kappa in 0u64..10,
        steps in 1usize..20,
    ) {
        let mut upper = ImmigrationProcess::new(dominating(&s, &bumps, &extra), kappa);
        let mut lower = s;
        for _ in 0..steps {
            prop_assert!(lower.leq(&upper.state));
            upper.step();
            lower = q1_move(&lower);
        }
        prop_assert!(lower.leq(&upper.state));
    }

    #[test]
    fn rescaling_hits_the_floor(s in nonempty(50, 30), p in random_p()) {
        let d = d_map(&s, p).unwrap();
        prop_assert_eq!(d.total(), floor_over_p(s.total(), p));
        prop_assert!(d.len() == s.len());
    }
}
