//! Worked examples with values derived by hand or by small independent oracles.

use num_complex::Complex;

use pauli_tomo::cover::build_cover;
use pauli_tomo::dense::random_unit_vector;
use pauli_tomo::experiment::{bootstrap_median_ci, learn_trial, median, ExperimentKind, PartialConfig};
use pauli_tomo::hard::{
    exact_second_moment, fano_bound, fano_bound_ln, povm_second_moment_check, rademacher_channel, sample_hard_channel,
    sample_rademacher_signs, separation_statistics, Alpha, Family, HardInstanceSpec,
};
use pauli_tomo::rng::{derive_seed, stream_rng};
use pauli_tomo::{
    apply_channel, apply_sequence, born_distribution, build_measurement, diamond_distance, induced_group_distribution,
    sample_outcomes, tv_distance, CMatrix, ChannelSequence, DensityMatrix, Intertwiner, OutcomeDistribution,
    PauliChannel, SampleRule,
};

fn c(re: f64) -> Complex<f64> {
    Complex::new(re, 0.0)
}

#[test]
fn depolarizing_sequence_closed_form() {
    let eps = 0.1;
    for n in 1..=2 {
        let d = 1usize << n;
        let mut probs = vec![eps / (d * d) as f64; d * d];
        probs[0] += 1.0 - eps;
        let ch = PauliChannel::new(n, probs).unwrap();
        let ints = (0..4).map(|_| Intertwiner::unitary(CMatrix::identity(d)).unwrap()).collect();
        let seq = ChannelSequence::new(ch, 5, ints).unwrap();
        let rho = DensityMatrix::<f64>::basis_state(n, 0).unwrap();
        let out = apply_sequence(&seq, &rho).unwrap();
        let keep = (1.0 - eps).powi(5);
        let want = &rho.matrix().scale(&keep) + &CMatrix::identity(d).scale(&((1.0 - keep) / d as f64));
        assert!(out.matrix().max_abs_diff(&want) < 1e-10);
    }
}

#[test]
fn identity_channel_keeps_maximally_mixed_state_fixed() {
    let mut rng = stream_rng(3, 0);
    let ints = vec![
        Intertwiner::unitary(pauli_tomo::dense::haar_unitary::<f64, _>(4, &mut rng)).unwrap(),
        Intertwiner::PauliMixing(PauliChannel::depolarizing(2, 0.3).unwrap()),
    ];
    let seq = ChannelSequence::new(PauliChannel::identity(2).unwrap(), 3, ints).unwrap();
    let mixed = DensityMatrix::maximally_mixed(2).unwrap();
    assert!(apply_sequence(&seq, &mixed).unwrap().matrix().max_abs_diff(mixed.matrix()) < 1e-12);
}

#[test]
fn tv_of_identity_and_uniform() {
    let id = PauliChannel::<f64>::identity(1).unwrap();
    let un = PauliChannel::<f64>::uniform(1).unwrap();
    assert!((tv_distance(&id, &un).unwrap() - 0.75).abs() < 1e-15);
    assert!((diamond_distance(&id, &un).unwrap() - 1.5).abs() < 1e-15);
    // uniform channel sends any state to I/d
    let out = apply_channel(&un, &DensityMatrix::basis_state(1, 0).unwrap()).unwrap();
    assert!(out.matrix().max_abs_diff(&CMatrix::identity(2).scale(&0.5)) < 1e-15);
}

#[test]
fn bit_flip_born_and_coset_paths() {
    let g = &build_cover(1).unwrap()[0];
    let meas = build_measurement::<f64>(g).unwrap();
    let x = PauliChannel::new(1, vec![0.0, 1.0, 0.0, 0.0]).unwrap();
    let dense = born_distribution(&apply_channel(&x, meas.state()).unwrap(), meas.povm()).unwrap();
    assert!((dense.probs()[0]).abs() < 1e-15 && (dense.probs()[1] - 1.0).abs() < 1e-15);
    let analytic = induced_group_distribution(&x, g).unwrap();
    assert_eq!(analytic.probs(), &[0.0, 1.0]);
    let un =
        induced_group_distribution(&PauliChannel::<f64>::uniform(3).unwrap(), &build_cover(3).unwrap()[4]).unwrap();
    assert!(un.probs().iter().all(|p| (p - 0.125).abs() < 1e-15));
}

#[test]
fn sampling_examples() {
    let det = OutcomeDistribution::new(vec![0, 1], vec![1.0, 0.0]).unwrap();
    assert!(sample_outcomes(&det, 1000, 5).unwrap().outcomes.iter().all(|&o| o == 0));
    let coin = OutcomeDistribution::new(vec![0, 1], vec![0.5, 0.5]).unwrap();
    assert_eq!(sample_outcomes(&coin, 500, 9).unwrap(), sample_outcomes(&coin, 500, 9).unwrap());
    assert!(sample_outcomes(&coin, 0, 9).is_err());
}

#[test]
fn rademacher_tv_matches_sign_differences() {
    let eps = 0.01;
    for seed in 0..10u64 {
        let mut rng = stream_rng(seed, 0);
        let (a, b) = (sample_rademacher_signs(2, &mut rng), sample_rademacher_signs(2, &mut rng));
        let pa = rademacher_channel(2, eps, &a).unwrap();
        let pb = rademacher_channel(2, eps, &b).unwrap();
        let diff: i32 = a.iter().zip(&b).map(|(x, y)| (i32::from(*x) - i32::from(*y)).abs()).sum();
        let direct = 2.0 * eps / 16.0 * diff as f64;
        assert!((tv_distance(&pa, &pb).unwrap() - direct).abs() < 1e-15);
    }
}

#[test]
fn rademacher_mean_separation_is_two_eps() {
    // E|α − α′| = 1 per coordinate, so E[TV] = (2ε/d²)·d² = 2ε
    let rep = separation_statistics(Family::Rademacher, 3, 0.01, 50, 12).unwrap();
    assert!((rep.mean_tv - 0.02).abs() <= 0.05 * 0.02, "mean TV {}", rep.mean_tv);
    assert_eq!(rep.pair_count, 50 * 49 / 2);
    assert_eq!(rep.degenerate_pairs, 0);
}

#[test]
fn gaussian_entries_in_range() {
    for seed in 0..20 {
        let (_, ch) = sample_hard_channel(Family::Gaussian, 3, 1.0 / 32.0, seed).unwrap();
        assert!(ch.probs().iter().all(|&p| (0.0..=2.0 / 64.0).contains(&p)));
        assert!((ch.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn second_moment_of_computational_basis() {
    // c = |⟨0|P|0⟩|² = (1, 0, 1, 0) in order I, X, Z, Y; pairs (I,X), (Z,Y)
    // give Σ (c_P² − c_P c_σ(P)) = 2, so the value is (16ε²/4)·2 = 8ε².
    let eps = 0.05;
    let rho = DensityMatrix::<f64>::basis_state(1, 0).unwrap();
    let v = exact_second_moment(1, eps, &rho, &[c(1.0), c(0.0)]).unwrap();
    assert!((v - 8.0 * eps * eps).abs() < 1e-15);
    let mixed = DensityMatrix::<f64>::maximally_mixed(2).unwrap();
    let mut rng = stream_rng(1, 0);
    let phi = random_unit_vector::<f64, _>(4, &mut rng);
    assert!(exact_second_moment(2, eps, &mixed, &phi).unwrap().abs() < 1e-16);
}

#[test]
fn povm_second_moment_examples() {
    let mut rng = stream_rng(2, 0);
    let (spec, _) = sample_hard_channel(Family::Gaussian, 2, 0.01, 4).unwrap();
    for g in build_cover(2).unwrap() {
        let rho = DensityMatrix::<f64>::random(2, &mut rng).unwrap();
        let povm = build_measurement::<f64>(&g).unwrap();
        let a = povm_second_moment_check(&spec, &rho, povm.povm()).unwrap();
        assert!(a <= 1.6e-3);
        assert_eq!(a, povm_second_moment_check(&spec, &rho, povm.povm()).unwrap());
    }
    let flat = HardInstanceSpec { n: 2, epsilon: 0.0, seed: 0, alpha: Alpha::Gaussian { values: vec![0.5; 16] } };
    let g = &build_cover(2).unwrap()[1];
    let rho = DensityMatrix::<f64>::random(2, &mut rng).unwrap();
    let v = povm_second_moment_check(&flat, &rho, build_measurement::<f64>(g).unwrap().povm()).unwrap();
    assert!(v < 1e-28);
    let rademacher =
        HardInstanceSpec { alpha: Alpha::Rademacher { signs: vec![1, -1, 1, -1] }, n: 1, epsilon: 0.1, seed: 0 };
    assert!(povm_second_moment_check(&rademacher, &DensityMatrix::maximally_mixed(1).unwrap(), &[]).is_err());
}

#[test]
fn fano_examples() {
    assert!((fano_bound(2.0).unwrap() - (-(2f64.ln()) / 3.0)).abs() < 1e-15);
    assert!((fano_bound(3f64.exp()).unwrap() - 1.306_852_819_440_054_7).abs() < 1e-12);
    // |family| = exp(d²/16) at n = 2 has ln M = 1
    assert!((fano_bound(1f64.exp()).unwrap() - (2.0 / 3.0 - 2f64.ln())).abs() < 1e-15);
    // ln M = 16
    assert!((fano_bound_ln(16.0) - 9.973_519_486_106_72).abs() < 1e-12);
}

#[test]
fn median_ci_shrinks_like_inverse_root_of_trials() {
    // median CI width scales as trials^(−1/2): doubling trials narrows it by about 1/√2
    let cfg = PartialConfig { n: Some(2), eps: Some(0.1), trials: Some(200), ..Default::default() }
        .resolve(ExperimentKind::Learn)
        .unwrap();
    let groups = build_cover(2).unwrap();
    let mut ratios = Vec::new();
    for rep in 0..8u64 {
        let tvs: Vec<f64> = (0..150u64)
            .map(|t| {
                let seed = derive_seed(1000 + rep, t);
                let truth = cfg.sample_truth(seed).unwrap();
                learn_trial(&cfg, &truth, &groups, SampleRule::Custom(1000), t as usize, seed).unwrap().0.tv
            })
            .collect();
        let width = |v: &[f64]| {
            let (lo, hi) = bootstrap_median_ci(v, 2000, rep);
            hi - lo
        };
        ratios.push(width(&tvs[..150]) / width(&tvs[..75]));
    }
    let r = median(&ratios);
    assert!((0.55..=0.9).contains(&r), "median width ratio {r}");
}
