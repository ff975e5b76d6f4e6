#[path = "../examples/gradient_check.rs"]
mod gradient_check;
#[path = "../examples/toeplitz_equivalence.rs"]
mod toeplitz_equivalence;
#[path = "../examples/generate_dataset.rs"]
mod generate_dataset;
#[path = "../examples/train_dcgan.rs"]
mod train_dcgan;
#[path = "../examples/label_sweep.rs"]
mod label_sweep;
#[path = "../examples/dump_fakes.rs"]
mod dump_fakes;
#[path = "../examples/heads_and_adam.rs"]
mod heads_and_adam;

#[test]
fn gradient_check_example_runs() {
    let (g, d) = gradient_check::run_example().unwrap();
    assert!(g < 1e-4 && d < 1e-4);
}

#[test]
fn toeplitz_example_runs() {
    assert!(toeplitz_equivalence::run_example().unwrap() <= 1e-12);
}

#[test]
fn generate_dataset_example_runs() {
    let dir = tempfile::tempdir().unwrap();
    let acc = generate_dataset::run_example(Some(dir.path().join("d.csv"))).unwrap();
    assert!(acc > 0.99);
}

#[test]
fn train_example_runs() {
    let results = train_dcgan::run_example(1, 2, 10).unwrap();
    assert_eq!(results.len(), 2);
    assert!(results.iter().all(|(_, acc)| (0.0..=100.0).contains(acc)));
}

#[test]
fn sweep_example_runs() {
    let r = label_sweep::run_example(1, 1, &[16, 32]).unwrap();
    assert_eq!(r.cells.len(), 4);
}

#[test]
fn dump_fakes_example_runs() {
    let report = dump_fakes::run_example(2, 1).unwrap();
    assert_eq!(report.classes.len(), 16);
}

#[test]
fn heads_example_runs() {
    let step = heads_and_adam::run_example().unwrap();
    assert!((step + 9.9999999e-4).abs() < 1e-15);
}
