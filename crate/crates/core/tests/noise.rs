use qdist::models::cat_state_circuit;
use qdist::noise::{noisy_sample, GateCounts, NoiseModel};
use qdist::sim::{sample_counts, zero_state};
use statrs::distribution::{ChiSquared, ContinuousCDF};

#[test]
fn forced_depolarizing_is_uniform() {
    let state = zero_state(3).unwrap();
    // 1 - (1 - 0.999999)^20 rounds to 1
    let model = NoiseModel::new(vec![0.0], 0.999_999, 0.0).unwrap();
    let counts = GateCounts { n_1q: 20, n_2q: 0 };
    assert_eq!(model.depolarizing_prob(counts), 1.0);
    let shots = 100_000u64;
    let out = noisy_sample(&state, counts, &model, shots, 21).unwrap();
    let expected = shots as f64 / 8.0;
    let stat: f64 = (0..8).map(|i| (out.count_index(i) as f64 - expected).powi(2) / expected).sum();
    let p_value = 1.0 - ChiSquared::new(7.0).unwrap().cdf(stat);
    assert!(p_value > 0.001, "{p_value}");
}

#[test]
fn default_noise_pushes_cat_state_off_ideal() {
    let cat = cat_state_circuit(5).unwrap();
    let state = cat.prepare().unwrap();
    let counts = GateCounts::of(&cat);
    let model = NoiseModel::default();
    let shots = 1024u64;
    let band = 3.0 * (0.25f64 / shots as f64).sqrt();
    let off = (0..100)
        .filter(|&seed| {
            let out = noisy_sample(&state, counts, &model, shots, seed).unwrap();
            (out.frequency(0) - 0.5).abs() > band
        })
        .count();
    assert!(off >= 50, "{off}");
}

#[test]
fn readout_noise_lowers_all_zeros_count() {
    let cat = cat_state_circuit(5).unwrap();
    let state = cat.prepare().unwrap();
    let counts = GateCounts::of(&cat);
    let mean_zeros = |flip: f64| {
        let model = NoiseModel::new(vec![flip], 0.0, 0.0).unwrap();
        (0..50)
            .map(|seed| noisy_sample(&state, counts, &model, 1024, seed).unwrap().count_index(0) as f64)
            .sum::<f64>()
            / 50.0
    };
    let means: Vec<f64> = [0.0, 0.02, 0.05, 0.1, 0.2].into_iter().map(mean_zeros).collect();
    assert!(means.windows(2).all(|w| w[1] <= w[0]), "{means:?}");
}

#[test]
fn noisy_sampling_is_deterministic_and_conserves_shots() {
    let state = cat_state_circuit(3).unwrap().prepare().unwrap();
    let counts = GateCounts { n_1q: 2, n_2q: 2 };
    let model = NoiseModel::default();
    let a = noisy_sample(&state, counts, &model, 4096, 8).unwrap();
    assert_eq!(a.shots(), 4096);
    assert_eq!(a, noisy_sample(&state, counts, &model, 4096, 8).unwrap());
    let ideal = noisy_sample(&state, counts, &NoiseModel::noiseless(), 4096, 8).unwrap();
    assert_eq!(ideal, sample_counts(&state, 4096, 8).unwrap());
}
