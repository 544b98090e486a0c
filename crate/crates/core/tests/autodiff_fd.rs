//! Finite-difference verification of the jet engine and parameter gradients.
//!
//! The oracles (central difference stencils over plain value evaluations)
//! live in `common` and never touch the jet propagation or reverse sweep.

mod common;

use common::*;
use ddlearn::diffnet::{eval_with_derivatives, DenseNetwork, JetScratch};
use ddlearn::losses::*;

/// Aggregate relative error of jet gradient/Laplacian against central
/// differences (h per the derivative-exactness contract).
fn jet_vs_fd(net: &DenseNetwork, n_points: usize, seed: u64, h: f64) -> (f64, f64) {
    let d = net.input_dim();
    let points: Vec<Vec<f64>> = {
        let pc = random_points(d, n_points, seed);
        pc.iter().map(|p| p.to_vec()).collect()
    };
    let jets = eval_with_derivatives(net, &points).unwrap();
    let mut scratch = JetScratch::new(net);
    let f = |x: &[f64]| net.jet_into(x, &mut JetScratch::new(net)).value;
    let _ = &mut scratch;
    let mut ad_grad = Vec::new();
    let mut fd_grad = Vec::new();
    let mut ad_lap = Vec::new();
    let mut fd_lap = Vec::new();
    for (p, jet) in points.iter().zip(&jets) {
        ad_grad.extend_from_slice(&jet.gradient);
        fd_grad.extend(fd_gradient(&f, p, h));
        ad_lap.push(jet.laplacian);
        fd_lap.push(fd_laplacian(&f, p, h));
    }
    (rel_l2(&ad_grad, &fd_grad), rel_l2(&ad_lap, &fd_lap))
}

#[test]
fn jet_derivatives_match_central_differences() {
    // Depth/width/dimension sweep of the network class.
    let cases = [
        (1usize, 2usize, 16usize),
        (2, 4, 30),
        (2, 8, 50),
        (5, 3, 20),
        (5, 8, 50),
    ];
    for (i, (d, depth, width)) in cases.iter().enumerate() {
        let net = random_net(*d, *depth, *width, 100 + i as u64);
        let (eg, el) = jet_vs_fd(&net, 100, 200 + i as u64, 1e-4);
        assert!(eg <= 1e-6, "gradient rel err {eg} for case {i}");
        assert!(el <= 1e-6, "laplacian rel err {el} for case {i}");
    }
}

/// Builds one representative instance of each loss family over random data
/// and a random network, for parameter-gradient checking.
fn loss_family_fixtures(net: &DenseNetwork, seed: u64) -> Vec<(&'static str, CompositeLoss)> {
    let d = net.input_dim();
    let n = 40;
    let pts = random_points(d, n, seed);
    let pts2 = random_points(d, n, seed + 1);
    let gamma = random_points(d, 24, seed + 2);
    let boundary = random_points(d, 16, seed + 3);
    let f1 = random_values(n, -2.0, 2.0, seed + 4);
    let f2 = random_values(n, -2.0, 2.0, seed + 5);
    let h = random_values(24, -1.0, 1.0, seed + 6);
    let q = random_values(24, -0.5, 0.5, seed + 7);
    let normals = random_normals(d, 24, seed + 8);
    let zeros_b = vec![0.0; 16];
    let cache1 = FrozenFieldCache {
        values: random_values(n, -1.0, 1.0, seed + 9),
        gradients: random_values(n * d, -1.0, 1.0, seed + 10),
        dim: d,
    };
    let cache2 = FrozenFieldCache {
        values: random_values(n, -1.0, 1.0, seed + 11),
        gradients: random_values(n * d, -1.0, 1.0, seed + 12),
        dim: d,
    };
    let corr1 = random_values(n * d, -1.0, 1.0, seed + 13);
    let corr2 = random_values(n * d, -1.0, 1.0, seed + 14);
    let beta = 400.0;

    vec![
        (
            "residual_interior",
            residual_interior_build(&pts, &f1, 1.5).unwrap(),
        ),
        (
            "ritz_interior",
            ritz_interior_build(&pts, &f1, 2.0).unwrap(),
        ),
        (
            "boundary_penalty",
            boundary_penalty_build(&boundary).unwrap(),
        ),
        (
            "dirichlet_interface",
            dirichlet_interface_build(&gamma, &h).unwrap(),
        ),
        (
            "neumann_penalty",
            neumann_penalty_build(&gamma, &normals, &h).unwrap(),
        ),
        (
            "robin_penalty",
            robin_penalty_build(&gamma, &normals, &h, 3.0).unwrap(),
        ),
        (
            "ritz_robin_boundary",
            ritz_robin_boundary_build(&gamma, &h, 2.5).unwrap(),
        ),
        (
            "compensated_neumann",
            compensated_neumann_build(
                &pts,
                &f1,
                2.0,
                &pts2,
                &cache1,
                &f2,
                1.0,
                &gamma,
                &q,
                beta,
                &[(&boundary, &zeros_b)],
            )
            .unwrap(),
        ),
        (
            "nn_corrector",
            nn_corrector_build(&pts, &f1, &cache1, &pts2, &f2, &cache2, beta, &[&boundary])
                .unwrap(),
        ),
        (
            "dd_neumann",
            dd_neumann_build(
                &pts,
                &f1,
                Some(&corr1),
                &pts2,
                Some(&corr2),
                0.5,
                &gamma,
                &h,
                beta,
                (&boundary, &zeros_b),
            )
            .unwrap(),
        ),
        (
            "dd_corrector",
            dd_corrector_build(&pts, &gamma, &h, beta, &boundary).unwrap(),
        ),
        (
            "rr_compensated",
            rr_compensated_build(
                &pts,
                &f1,
                &pts2,
                &cache1,
                &f2,
                &gamma,
                &h,
                1000.0,
                beta,
                &[(&boundary, &zeros_b)],
            )
            .unwrap(),
        ),
    ]
}

#[test]
fn loss_parameter_gradients_match_central_differences() {
    let net = random_net(2, 3, 12, 7);
    let n_params = net.param_count();
    // 20 spread-out parameter coordinates.
    let coords: Vec<usize> = (0..20).map(|i| (i * n_params) / 20).collect();
    for (name, loss) in loss_family_fixtures(&net, 50) {
        let analytic = loss_parameter_gradient(&loss, &net, None).unwrap();
        let analytic_sel: Vec<f64> = coords.iter().map(|&i| analytic[i]).collect();
        let fd = fd_param_gradient(&loss, &net, &coords, 1e-5);
        let scale = analytic.iter().fold(0.0f64, |m, g| m.max(g.abs()));
        for (k, (&a, &b)) in analytic_sel.iter().zip(&fd).enumerate() {
            let denom = b.abs().max(scale * 1e-3).max(1e-12);
            let rel = (a - b).abs() / denom;
            assert!(
                rel <= 1e-5,
                "{name}: coord {} analytic {a} vs fd {b} (rel {rel})",
                coords[k]
            );
        }
    }
}

#[test]
fn gradient_of_zero_output_layer_is_zero_on_final_weights() {
    // û ≡ 0 via zero final-layer weights and bias: d(û²)/d(final W) = 0.
    let mut net = random_net(2, 2, 8, 3);
    let n = net.param_count();
    // final layer: last 8 weights + 1 bias
    for p in net.params_mut()[n - 9..].iter_mut() {
        *p = 0.0;
    }
    let pts = random_points(2, 10, 4);
    let loss = boundary_penalty_build(&pts).unwrap();
    let grad = loss_parameter_gradient(&loss, &net, None).unwrap();
    for (i, g) in grad[n - 9..].iter().enumerate() {
        assert_eq!(*g, 0.0, "final-layer grad {i} nonzero: {g}");
    }
    // and all earlier-layer gradients are zero too (chain through zero value)
    for (i, g) in grad[..n - 9].iter().enumerate() {
        assert_eq!(*g, 0.0, "hidden grad {i} nonzero: {g}");
    }
}

#[test]
fn second_order_loss_gradient_matches_fd() {
    // loss = mean(1/2 |∇û|²) exercised through the ritz path with f ≡ 0.
    let net = random_net(2, 3, 10, 21);
    let pts = random_points(2, 30, 22);
    let zeros = vec![0.0; 30];
    let loss = ritz_interior_build(&pts, &zeros, 1.0).unwrap();
    let coords: Vec<usize> = (0..net.param_count()).step_by(7).collect();
    let analytic = loss_parameter_gradient(&loss, &net, None).unwrap();
    let fd = fd_param_gradient(&loss, &net, &coords, 1e-5);
    let scale = analytic.iter().fold(0.0f64, |m, g| m.max(g.abs()));
    for (k, &i) in coords.iter().enumerate() {
        let denom = fd[k].abs().max(scale * 1e-3).max(1e-12);
        assert!(
            (analytic[i] - fd[k]).abs() / denom <= 1e-5,
            "coord {i}: {} vs {}",
            analytic[i],
            fd[k]
        );
    }
}
