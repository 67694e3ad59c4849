use bgsol_core::partitions::{in_g, in_rough_triangle};
use bgsol_core::stationary::{
    deviation_profile, exact_stationary, loglog_fit, mc_estimate, mc_estimate_with,
    reasonableness_mass, EstimateConfig, Method, PredicateSpec, Start,
};
use bgsol_core::{Partition, Probability};

fn half() -> Probability {
    Probability::new(0.5).unwrap()
}

fn short(n: u64, predicate: PredicateSpec, samples: u64) -> EstimateConfig {
    let mut cfg = EstimateConfig::new(n, half(), predicate);
    cfg.moves = cfg.burn_in + samples * cfg.stride;
    cfg
}

#[test]
fn three_card_state_matches_exact() {
    let exact = exact_stationary(3, half()).unwrap();
    let s: Partition = "2,1".parse().unwrap();
    assert!((exact.prob(&s) - 8.0 / 13.0).abs() < 1e-12);
    let mut cfg = short(3, PredicateSpec::Equals { state: s }, 20_000);
    cfg.stride = 1;
    cfg.moves = cfg.burn_in + 20_000;
    let est = mc_estimate(&cfg).unwrap();
    assert_eq!(est.method, Method::MonteCarlo);
    assert!((est.value - 8.0 / 13.0).abs() < 0.01, "{est:?}");
}

#[test]
fn small_deck_reasonableness_matches_exact() {
    let n = 10;
    let (alpha, beta) = (1.5, 1.5);
    let p = Probability::new(0.3).unwrap();
    let exact = exact_stationary(n, p)
        .unwrap()
        .mass(|s| in_g(s, alpha, beta));
    assert!(exact > 0.0 && exact < 1.0);
    let mut cfg = EstimateConfig::new(n, p, PredicateSpec::Always);
    cfg.chains = 16;
    cfg.stride = 1;
    cfg.moves = cfg.burn_in + 20_000;
    let est = reasonableness_mass(alpha, beta, &cfg).unwrap();
    let half_width = est.ci_high.unwrap() - est.value;
    assert!(
        (est.value - exact).abs() <= 2.0 * half_width.max(0.005),
        "exact {exact}, {est:?}"
    );
}

#[test]
fn always_true_has_full_mass() {
    let est = mc_estimate(&short(50, PredicateSpec::Always, 100)).unwrap();
    assert_eq!(est.value, 1.0);
    assert_eq!((est.ci_low, est.ci_high), (Some(1.0), Some(1.0)));
    assert_eq!(est.n_samples, Some(800));
}

#[test]
fn seeds_reproduce_and_differ() {
    let spec = PredicateSpec::RoughTriangle {
        eps: 0.25,
        p: half(),
    };
    let mut cfg = short(300, spec, 300);
    cfg.seed = 11;
    let a = mc_estimate(&cfg).unwrap();
    assert_eq!(a, mc_estimate(&cfg).unwrap());
    cfg.seed = 12;
    let b = mc_estimate(&cfg).unwrap();
    assert_eq!(b.seed, Some(12));
    assert_eq!(a.n_samples, b.n_samples);
}

#[test]
fn wider_triangles_hold_more_mass() {
    let n = 500;
    let mut last = 0.0;
    for eps in [0.05, 0.1, 0.25, 0.5, 1.0] {
        let cfg = short(n, PredicateSpec::Always, 400);
        let est = mc_estimate_with(&cfg, |s| in_rough_triangle(s, eps, half())).unwrap();
        assert!(est.value >= last, "eps = {eps}");
        last = est.value;
    }
    assert!(last > 0.99);
}

#[test]
fn start_state_does_not_matter_after_burn_in() {
    let spec = PredicateSpec::RoughTriangle {
        eps: 0.25,
        p: half(),
    };
    let mut from_t0 = short(500, spec, 1000);
    from_t0.seed = 5;
    let from_pile = EstimateConfig {
        start: Start::SinglePile,
        ..from_t0.clone()
    };
    let a = mc_estimate(&from_t0).unwrap();
    let b = mc_estimate(&from_pile).unwrap();
    assert!((a.value - b.value).abs() < 0.05, "{a:?} vs {b:?}");
}

#[test]
fn deviation_grows_slower_than_the_scale() {
    let mut points = Vec::new();
    for n in [500u64, 2000, 8000] {
        let mut cfg = short(n, PredicateSpec::Always, 500);
        cfg.chains = 4;
        let prof = deviation_profile(&cfg).unwrap();
        assert!(prof.quantiles.windows(2).all(|w| w[0].1 <= w[1].1));
        assert!(prof.min as f64 <= prof.median && prof.median <= prof.max as f64);
        let ratio = prof.median / (n as f64).sqrt();
        println!(
            "N = {n}: median rho = {}, median/sqrt(N) = {ratio:.3}",
            prof.median
        );
        points.push((n as f64, prof.median));
    }
    // relative to sqrt(N) the deviation shrinks
    let scaled: Vec<f64> = points.iter().map(|(n, m)| m / n.sqrt()).collect();
    assert!(scaled[2] < scaled[0], "{scaled:?}");
    let fit = loglog_fit(&points).unwrap();
    println!("log-log slope {:.3} (se {:?})", fit.slope, fit.slope_se);
    assert!(fit.slope < 0.5);
}

#[test]
fn larger_decks_concentrate_at_least_as_much() {
    let spec = PredicateSpec::RoughTriangle {
        eps: 0.25,
        p: half(),
    };
    let small = mc_estimate(&short(500, spec.clone(), 1000)).unwrap();
    let large = mc_estimate(&short(2000, spec, 1000)).unwrap();
    assert!(large.value + 0.02 >= small.value, "{small:?} vs {large:?}");
}

#[test]
fn invalid_configs_are_rejected() {
    let cfg = EstimateConfig::new(10, Probability::ONE, PredicateSpec::Always);
    assert!(mc_estimate(&cfg).is_err());
    let cfg = EstimateConfig {
        burn_in: 100,
        moves: 100,
        ..short(10, PredicateSpec::Always, 10)
    };
    assert!(mc_estimate(&cfg).is_err());
    let cfg = EstimateConfig {
        start: Start::WorstCase,
        ..short(11, PredicateSpec::Always, 10)
    };
    assert!(mc_estimate(&cfg).is_err());
}
