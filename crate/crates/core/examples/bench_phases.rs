use ddlearn::diffnet::{DenseNetwork, TrainingConfig};
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
    let f: Vec<f64> = interior.iter().map(|p| p[0].sin()).collect();
    let h: Vec<f64> = gamma.iter().map(|p| p[1]).collect();
    let mut loss = CompositeLoss::new();
    let si = loss.add_set(interior);
    loss.add_term(si, 1.0, TermKind::Residual { coeff: 1.0, source: f });
    let sb = loss.add_set(boundary);
    loss.add_term(sb, 400.0, TermKind::ValueMismatch { target: vec![0.0; 1000] });
    let sg = loss.add_set(gamma);
    loss.add_term(sg, 400.0, TermKind::ValueMismatch { target: h });

    let net = DenseNetwork::init(&[2, 30, 30, 30, 30, 30, 30, 1], 7).unwrap();
    let batches: Vec<Vec<usize>> = vec![(0..1000).collect(), (0..200).collect(), (0..200).collect()];

    // one mini-batch step (value+grad over 1400 pts)
    let t0 = Instant::now();
    let reps = 50;
    for _ in 0..reps { let _ = loss.value_and_grad(&net, Some(&batches)).unwrap(); }
    let grad_ms = t0.elapsed().as_secs_f64() * 1000.0 / reps as f64;

    // full-set forward-only (7000 pts)
    let t0 = Instant::now();
    for _ in 0..reps { let _ = loss.value_for_network(&net, None).unwrap(); }
    let eval_ms = t0.elapsed().as_secs_f64() * 1000.0 / reps as f64;

    let _ = TrainingConfig::default();
    println!("value_and_grad over 1400 pts: {grad_ms:.2} ms -> per-epoch (5 steps): {:.1} ms", grad_ms * 5.0);
    println!("value_for_network over 7000 pts: {eval_ms:.2} ms");
    println!("epoch total estimate: {:.1} ms", grad_ms * 5.0 + eval_ms);
    // flops estimates
    let fwd_flops_pt = 2.0 * 4590.0 * 4.0;
    println!("grad path GFLOP/s: {:.2}", (1400.0 * 3.0 * fwd_flops_pt * 5.0) / (grad_ms * 5.0 / 1000.0) / 1e9);
    println!("eval path GFLOP/s: {:.2}", (7000.0 * fwd_flops_pt) / (eval_ms / 1000.0) / 1e9);
}
