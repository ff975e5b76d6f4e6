use csi_sgan::dataset::{normalize, select_labeled_subset, synth_generate, DatasetSplit, LabeledRef, SynthConfig};
use csi_sgan::models::arch::{discriminator_widths, generator_widths, FC_UNITS};
use csi_sgan::models::*;
use csi_sgan::rng::stream;
use csi_sgan::tensor::{binary_ce, AdamConfig, AdamState, Parameters};
use csi_sgan::trainer::*;
use csi_sgan::ClassLabel;

fn split(train_per_class: usize, labeled_per_class: usize) -> DatasetSplit {
    let data = synth_generate(&SynthConfig {
        train_per_class,
        test_per_class: 20,
        seed: 11,
        ..Default::default()
    })
    .unwrap();
    select_labeled_subset(&normalize(&data.split).unwrap(), labeled_per_class, 3).unwrap()
}

#[test]
fn architecture_dimensions() {
    verify_architecture().unwrap();
    assert_eq!(FC_UNITS, 3456);
    assert_eq!(generator_widths(), Some([108, 112, 116, 120, 120]));
    assert_eq!(discriminator_widths(), Some([120, 116, 112, 108]));

    let g = build_generator(1);
    assert_eq!(g.fc().out_dim(), 3456);
    assert_eq!(g.trace_widths(&[0.3; LATENT_DIM]).unwrap(), vec![108, 112, 116, 120, 120]);
    let d = build_discriminator(1);
    assert_eq!(d.trace_widths(&[0.1; CSI_WIDTH]).unwrap(), vec![120, 116, 112, 108]);
    assert_eq!(d.output_layer().in_dim(), 3456);
    assert_eq!(d.logits(&[0.1; CSI_WIDTH]).unwrap().len(), 16);
    assert!(g.generate(&[0.0; 99]).is_err());
    assert!(d.logits(&[0.0; 119]).is_err());
}

#[test]
fn untrained_classifier_loss_near_ln16() {
    let s = split(20, 5);
    let labeled = s.labeled().unwrap();
    let mut net = build_discriminator(4);
    let mut opt = AdamState::for_params(AdamConfig::CLASSIFIER, &net).unwrap();
    let loss = train_classifier_step(&mut net, &mut opt, &labeled).unwrap().unwrap();
    assert!((loss - 16f64.ln()).abs() < 0.3, "{loss}");
}

#[test]
fn classifier_loss_decreases_and_moves_lambda_head() {
    let s = split(20, 4);
    let labeled = s.labeled().unwrap();
    let mut net = build_discriminator(5);
    let mut opt = AdamState::for_params(AdamConfig::CLASSIFIER, &net).unwrap();
    let probe = s.test[0].values.clone();
    let mut losses = Vec::new();
    for step in 0..50 {
        let before = net.discriminate(&probe).unwrap();
        let batch: Vec<LabeledRef<'_>> = labeled.iter().cycle().skip(step * 8).take(16).copied().collect();
        losses.push(train_classifier_step(&mut net, &mut opt, &batch).unwrap().unwrap());
        assert_ne!(net.discriminate(&probe).unwrap(), before, "shared weights: lambda head must move");
    }
    let head: f64 = losses[..10].iter().sum::<f64>() / 10.0;
    let tail: f64 = losses[40..].iter().sum::<f64>() / 10.0;
    assert!(tail < 0.5 * head, "{head} -> {tail}");
}

#[test]
fn empty_classifier_batch_is_a_noop() {
    let mut net = build_discriminator(6);
    let before = net.to_flat();
    let mut opt = AdamState::for_params(AdamConfig::CLASSIFIER, &net).unwrap();
    assert_eq!(train_classifier_step(&mut net, &mut opt, &[]).unwrap(), None);
    assert_eq!(net.to_flat(), before);
    assert_eq!(opt.t(), 0);
}

#[test]
fn confident_correct_prediction_barely_moves() {
    let mut net = DiscClassNet::zeros();
    // Bias alone makes class 3 certain for every input.
    let mut flat = net.to_flat();
    let n = flat.len();
    flat[n - 16 + 2] = 40.0;
    net.load_flat(&flat);
    let x = vec![0.2; CSI_WIDTH];
    let batch = [LabeledRef {
        values: &x,
        label: ClassLabel::new(3).unwrap(),
    }];
    let mut opt = AdamState::for_params(AdamConfig::CLASSIFIER, &net).unwrap();
    let loss = train_classifier_step(&mut net, &mut opt, &batch).unwrap().unwrap();
    assert!(loss <= 1.0001e-7, "{loss}");
    let moved = net.to_flat().iter().zip(&flat).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(moved <= 1e-8, "{moved}");
}

#[test]
fn discriminator_step_matches_hand_loss_and_keeps_generator() {
    let s = split(10, 1);
    let real: Vec<&[f64]> = s.unlabeled_pool().into_iter().take(8).collect();
    let gen = Generator::build(7, false);
    let gen_before = gen.to_flat();
    let mut net = build_discriminator(8);
    let frozen = net.clone();
    let mut opt = AdamState::for_params(AdamConfig::ADVERSARIAL, &net).unwrap();

    let mut rng = stream(1, &[42]);
    let mut replay = rng.clone();
    let loss = train_discriminator_step(&mut net, &mut opt, &real, &gen, &mut rng).unwrap();

    let fakes: Vec<Vec<f64>> = sample_latents(&mut replay, real.len())
        .iter()
        .map(|z| gen.generate(z).unwrap())
        .collect();
    let mut expect = 0.0;
    for x in &real {
        expect += binary_ce(frozen.discriminate(x).unwrap(), true);
    }
    for x in &fakes {
        expect += binary_ce(frozen.discriminate(x).unwrap(), false);
    }
    expect /= (real.len() + fakes.len()) as f64;
    assert!((loss - expect).abs() < 1e-12, "{loss} vs {expect}");
    assert_eq!(gen.to_flat(), gen_before);
    assert_ne!(net.to_flat(), frozen.to_flat());
    assert!(train_discriminator_step(&mut net, &mut opt, &[], &gen, &mut rng).is_err());
}

#[test]
fn half_probability_costs_ln2() {
    assert!((binary_ce(0.5, true) - 2f64.ln()).abs() < 1e-15);
    assert!((binary_ce(0.5, false) - 2f64.ln()).abs() < 1e-15);
}

#[test]
fn generator_step_keeps_discriminator_and_lowers_loss() {
    let net = build_discriminator(9);
    let net_before = net.to_flat();
    for simplified in [false, true] {
        let mut gen = Generator::build(10, simplified);
        let mut opt = AdamState::for_params(AdamConfig::ADVERSARIAL, &gen).unwrap();
        let mut rng = stream(2, &[simplified as u64]);
        let losses: Vec<f64> = (0..100)
            .map(|_| train_generator_step(&mut gen, &mut opt, &net, 8, &mut rng).unwrap())
            .collect();
        assert_eq!(net.to_flat(), net_before);
        let head: f64 = losses[..10].iter().sum::<f64>() / 10.0;
        let tail: f64 = losses[90..].iter().sum::<f64>() / 10.0;
        assert!(tail < head, "simplified={simplified}: {head} -> {tail}");
    }
}

#[test]
fn generator_gradient_vanishes_when_fakes_look_real() {
    // Huge output bias: every input is judged real with q at the clamp.
    let mut net = DiscClassNet::zeros();
    let mut flat = net.to_flat();
    let n = flat.len();
    flat[n - 1] = 60.0;
    net.load_flat(&flat);
    let mut gen = Generator::build(11, false);
    let before = gen.to_flat();
    let mut opt = AdamState::for_params(AdamConfig::ADVERSARIAL, &gen).unwrap();
    let loss = train_generator_step(&mut gen, &mut opt, &net, 4, &mut stream(3, &[])).unwrap();
    assert!(loss <= 1.0001e-7);
    assert_eq!(gen.to_flat(), before);
}

#[test]
fn full_labels_cnn_is_accurate() {
    let s = split(20, 20);
    let config = TrainConfig {
        epochs: 3,
        labeled_per_class: 20,
        ..Default::default()
    }
    .with_model(ModelKind::Cnn);
    let out = train(&config, &s).unwrap();
    let acc = out.history.final_accuracy().unwrap();
    assert!(acc > 95.0, "{acc}");
}

#[test]
fn history_is_deterministic_and_finite() {
    let s = split(8, 1);
    let config = TrainConfig {
        epochs: 2,
        steps_per_epoch: 3,
        batch_size: 8,
        ..Default::default()
    };
    let a = train(&config, &s).unwrap();
    let b = train(&config, &s).unwrap();
    assert_eq!(a.history.to_csv(), b.history.to_csv());
    assert_eq!(a.generator.unwrap().to_flat(), b.generator.unwrap().to_flat());
    for r in &a.history.records {
        assert!(r.c_loss.is_finite() && r.d_loss.unwrap().is_finite() && r.g_loss.unwrap().is_finite());
    }
}
