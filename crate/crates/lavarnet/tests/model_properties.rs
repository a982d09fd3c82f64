//! Cross-cutting model invariants on randomly sampled instances.

use lavarnet::models::{param_count, Model, ModelKind, Variant};
use lavarnet::tensor::{Tape, Tensor};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_window(rng: &mut ChaCha8Rng, t: usize, k: usize) -> Tensor {
    let vals = (0..t * k).map(|_| rng.gen_range(-2.0..2.0)).collect();
    Tensor::matrix(t, k, vals).unwrap()
}

/// Zeroing the recurrence matrix collapses each recurrent variant onto the
/// plain one, exactly, for any input.
#[test]
fn variant_collapse_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    for trial in 0..20 {
        let (n, t_steps, k_vars, k_out) = (
            rng.gen_range(1..5),
            rng.gen_range(1..5),
            rng.gen_range(1..4),
            rng.gen_range(1..3),
        );
        let seed = 1000 + trial;
        let plain = match Model::init(ModelKind::Lagged(Variant::Lavarnet), n, t_steps, k_vars, k_out, seed).unwrap() {
            Model::Lagged(p) => p,
            _ => unreachable!(),
        };
        let x = random_window(&mut rng, t_steps, k_vars);
        let base = plain.predict(&x).unwrap();

        let mut recurrent = plain.clone();
        recurrent.variant = Variant::RLavarnet;
        recurrent.recur = Some(Tensor::zeros(vec![n, n]));
        assert_eq!(recurrent.predict(&x).unwrap(), base, "trial {trial}");

        let mut full = plain.clone();
        full.variant = Variant::FrLavarnet;
        full.recur_full = Some(Tensor::zeros(vec![n, n * k_vars]));
        assert_eq!(full.predict(&x).unwrap(), base, "trial {trial}");
    }
}

/// The registered gradient slots of a bound model equal the closed-form
/// trainable-scalar count, for every variant over a dimension sweep.
#[test]
fn param_count_equals_registered_gradient_slots() {
    for variant in [Variant::Lavarnet, Variant::RLavarnet, Variant::FrLavarnet] {
        for &(n, t, k, k_out) in &[
            (1usize, 1usize, 1usize, 1usize),
            (2, 3, 2, 1),
            (3, 4, 3, 2),
            (5, 2, 4, 4),
            (10, 15, 7, 7),
        ] {
            let model = Model::init(ModelKind::Lagged(variant), n, t, k, k_out, 7).unwrap();
            let mut tape = Tape::new();
            model.bind(&mut tape);
            assert_eq!(
                tape.param_scalar_count(),
                param_count(variant, n, t, k, k_out),
                "{variant:?} ({n}, {t}, {k}, {k_out})"
            );
            assert_eq!(model.param_count(), param_count(variant, n, t, k, k_out));
        }
    }
    // Baselines register their full parameter sets too.
    for kind in [ModelKind::Rnn, ModelKind::Lstm] {
        let model = Model::init(kind, 4, 3, 2, 2, 7).unwrap();
        let mut tape = Tape::new();
        model.bind(&mut tape);
        assert_eq!(tape.param_scalar_count(), model.param_count());
    }
}

/// Hidden states and output vectors stay strictly inside (0,1); head outputs
/// are unbounded (exercised over inputs well past the data's usual range).
#[test]
fn hidden_states_strictly_inside_unit_interval() {
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    for trial in 0..20 {
        let model = match Model::init(
            ModelKind::Lagged(Variant::Lavarnet),
            4,
            5,
            3,
            2,
            2000 + trial,
        )
        .unwrap()
        {
            Model::Lagged(p) => p,
            _ => unreachable!(),
        };
        let vals = (0..15).map(|_| rng.gen_range(-8.0..8.0)).collect();
        let x = Tensor::matrix(5, 3, vals).unwrap();
        let grid = model.forward_grid(&x).unwrap();
        for t in 0..5 {
            for k in 0..3 {
                for &v in grid.h(t, k).iter().chain(grid.y(t, k)) {
                    assert!(v > 0.0 && v < 1.0, "trial {trial}: {v}");
                }
            }
        }
    }
}

/// Forecasts are a pure function of the window: bitwise repeatable and
/// untouched by anything outside the T x K block passed in.
#[test]
fn predict_is_pure_in_the_window() {
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    for kind in [
        ModelKind::Lagged(Variant::Lavarnet),
        ModelKind::Lagged(Variant::RLavarnet),
        ModelKind::Lagged(Variant::FrLavarnet),
        ModelKind::Rnn,
        ModelKind::Lstm,
    ] {
        let model = Model::init(kind, 3, 4, 2, 2, 31).unwrap();
        let x = random_window(&mut rng, 4, 2);
        let a = model.predict(&x).unwrap();
        let b = model.predict(&x).unwrap();
        assert_eq!(a, b);
    }
}
