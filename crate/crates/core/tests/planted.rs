use ddsg::ddsp::{ddsp_approx, DdspParams, GammaSolver, DEFAULT_LP_SIZE_LIMIT};
use ddsg::dense::{dsp_peel, greedy_plus_plus};
use ddsg::generators::{gen_planted, ColorMode, GenSpec};
use ddsg::graph::Fraction;
use ddsg::lp::LpEngine;

const HOT_CLUSTER: std::ops::Range<usize> = 0..40;

#[test]
fn densest_set_sits_in_the_hot_cluster() {
    for seed in 0..10 {
        let g = gen_planted(&GenSpec::planted_default(ColorMode::PerCluster, seed)).unwrap();
        let s = greedy_plus_plus(&g, 5).unwrap();
        assert!(s.members().iter().all(|v| HOT_CLUSTER.contains(v)), "seed {seed}");
        assert_eq!(s.diversity().alpha(), Fraction::from_integer(1));
    }
}

#[test]
fn random_colors_rarely_bind_at_one_half() {
    let lp = LpEngine::exact();
    let mut same = 0;
    for seed in 0..10 {
        let g = gen_planted(&GenSpec::planted_default(ColorMode::UniformRandom(5), seed)).unwrap();
        let dsp = dsp_peel(&g).unwrap();
        let solver = GammaSolver::auto(&g, DEFAULT_LP_SIZE_LIMIT);
        let params = DdspParams::new(&g, Fraction::new(1, 2), solver).unwrap();
        let s = ddsp_approx(&g, params, &lp).unwrap().into_subset().unwrap();
        assert!(s.diversity().satisfies(Fraction::new(1, 2)));
        if s.density() == dsp.density() {
            same += 1;
        }
    }
    assert!(same >= 8, "{same} of 10");
}

#[test]
fn per_cluster_cap_gives_balanced_sets() {
    let lp = LpEngine::exact();
    for seed in 0..3 {
        let g = gen_planted(&GenSpec::planted_default(ColorMode::PerCluster, seed)).unwrap();
        let alpha = Fraction::new(1, 5);
        let params = DdspParams::new(&g, alpha, GammaSolver::DalksPeel).unwrap();
        let s = ddsp_approx(&g, params, &lp).unwrap().into_subset().unwrap();
        assert!(s.color_counts().iter().all(|&c| c * 5 == s.size()), "seed {seed}");
    }
}
