use ddlearn::diffnet::{DenseNetwork, JetScratch};
use std::time::Instant;

fn main() {
    let net = DenseNetwork::init(&[2, 30, 30, 30, 30, 30, 30, 1], 7).unwrap();
    let mut scratch = JetScratch::new(&net);
    let pts: Vec<[f64; 2]> = (0..7000).map(|i| {
        let t = i as f64 / 7000.0;
        [t, (t * 13.7).fract()]
    }).collect();
    // forward only, n_comp = 4 (full jet)
    let t0 = Instant::now();
    let mut acc = 0.0;
    let reps = 20;
    for _ in 0..reps {
        for p in &pts {
            let jet = net.jet_into(p, &mut scratch);
            acc += jet.laplacian;
        }
    }
    let dt = t0.elapsed().as_secs_f64() / reps as f64;
    let flops = 7000.0 * 2.0 * 4590.0 * 4.0;
    println!("forward-only: {:.2} ms for 7000 pts -> {:.2} GFLOP/s (acc {acc:.3})", dt*1000.0, flops / dt / 1e9);
}
