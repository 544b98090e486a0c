//! Rough timing of one subproblem solve at the scaled acceptance budget.

use ddlearn::diffnet::{train_subproblem, DenseNetwork, TrainingConfig};
use ddlearn::geometry::{box_facets, AxisBox, InterfaceDescriptor, Region};
use ddlearn::losses::{CompositeLoss, TermKind};
use std::time::Instant;

fn main() {
    let b = AxisBox::new(vec![0.0, 0.0], vec![0.5, 1.0]);
    let region = Region::from_boxes("omega1", vec![b.clone()], box_facets(&b, &[(0, 0.5)]));
    let interface = InterfaceDescriptor::vertical_segment("omega1", 0.5, 0.0, 1.0, 1.0);
    let interior = region.sample_interior(5000, 1).unwrap();
    let boundary = region.sample_boundary(true, 1000, 2).unwrap();
    let (gamma, _) = interface.sample(1000, 3);

    let f: Vec<f64> = interior
        .iter()
        .map(|p| 4.0 * std::f64::consts::PI.powi(2) * (2.0 * std::f64::consts::PI * p[0]).sin())
        .collect();
    let h: Vec<f64> = gamma.iter().map(|p| p[1]).collect();

    let mut loss = CompositeLoss::new();
    let si = loss.add_set(interior);
    loss.add_term(
        si,
        1.0,
        TermKind::Residual {
            coeff: 1.0,
            source: f,
        },
    );
    let sb = loss.add_set(boundary);
    loss.add_term(
        sb,
        400.0,
        TermKind::ValueMismatch {
            target: vec![0.0; 1000],
        },
    );
    let sg = loss.add_set(gamma);
    loss.add_term(sg, 400.0, TermKind::ValueMismatch { target: h });

    let net = DenseNetwork::init(&[2, 30, 30, 30, 30, 30, 30, 1], 7).unwrap();
    let epochs = 25;
    let cfg = TrainingConfig {
        epochs,
        base_lr: 0.01,
        lr_drop_epochs: vec![],
        mini_batches: 5,
        penalty_beta: 400.0,
        seed: 1,
    };
    let t0 = Instant::now();
    let out = train_subproblem(&net, &loss, &cfg).unwrap();
    let dt = t0.elapsed().as_secs_f64();
    println!(
        "{} epochs in {:.2} s -> {:.1} ms/epoch; projected 500-epoch solve: {:.0} s",
        epochs,
        dt,
        1000.0 * dt / epochs as f64,
        dt / epochs as f64 * 500.0
    );
    println!("best loss {:.4} at epoch {}", out.best_loss, out.best_epoch);
}
