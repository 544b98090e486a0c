//! Mini-batch Adam training of one subproblem.

use rand::seq::SliceRandom;

use super::{adam_step, lr_schedule, AdamState, DenseNetwork, TrainingConfig};
use crate::error::{Error, Result};
use crate::losses::CompositeLoss;
use crate::rng::{rng_for, stream};

/// Result of one subproblem solve.
#[derive(Debug, Clone)]
pub struct TrainOutcome {
    /// Parameter snapshot with minimum full-training-set loss over all epoch
    /// ends (ties broken by earliest epoch).
    pub net: DenseNetwork,
    /// Full-training-set loss at each epoch end.
    pub history: Vec<f64>,
    pub best_epoch: usize,
    pub best_loss: f64,
}

/// Runs `cfg.epochs` epochs of `cfg.mini_batches` steps each.
///
/// Every sample set of the loss is split into the same number of batches,
/// paired per step, and reshuffled each epoch from the training seed. Returns
/// the snapshot with minimum full-training-set loss seen at any epoch end.
pub fn train_subproblem(
    net0: &DenseNetwork,
    loss: &CompositeLoss,
    cfg: &TrainingConfig,
) -> Result<TrainOutcome> {
    if cfg.epochs == 0 {
        return Ok(TrainOutcome {
            net: net0.clone(),
            history: Vec::new(),
            best_epoch: 0,
            best_loss: f64::INFINITY,
        });
    }
    let n_batches = cfg.mini_batches.max(1);
    let mut net = net0.clone();
    let mut state = AdamState::new(net.param_count());
    let mut best: Option<(f64, usize, DenseNetwork)> = None;
    let mut history = Vec::with_capacity(cfg.epochs);

    let mut perms: Vec<Vec<usize>> = loss.sets.iter().map(|s| (0..s.len()).collect()).collect();

    for epoch in 0..cfg.epochs {
        let lr = lr_schedule(cfg, epoch);
        for (set_idx, perm) in perms.iter_mut().enumerate() {
            let mut rng = rng_for(cfg.seed, &[stream::SHUFFLE, epoch as u64, set_idx as u64]);
            perm.shuffle(&mut rng);
        }
        for b in 0..n_batches {
            let batches: Vec<Vec<usize>> = perms
                .iter()
                .map(|perm| {
                    let len = perm.len();
                    let start = b * len / n_batches;
                    let end = (b + 1) * len / n_batches;
                    perm[start..end].to_vec()
                })
                .collect();
            let (_, grads) = loss
                .value_and_grad(&net, Some(&batches))
                .map_err(|e| Error::Training {
                    epoch,
                    message: e.to_string(),
                })?;
            adam_step(&mut net, &grads, &mut state, lr).map_err(|e| Error::Training {
                epoch,
                message: e.to_string(),
            })?;
        }
        let full = loss
            .value_for_network(&net, None)
            .map_err(|e| Error::Training {
                epoch,
                message: e.to_string(),
            })?;
        history.push(full);
        if best.as_ref().map_or(true, |(b, _, _)| full < *b) {
            best = Some((full, epoch, net.clone()));
        }
    }

    let (best_loss, best_epoch, net) = best.expect("epochs > 0");
    Ok(TrainOutcome {
        net,
        history,
        best_epoch,
        best_loss,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PointCloud;
    use crate::losses::TermKind;

    fn laplace_1d_loss() -> CompositeLoss {
        // u'' = 0 on (0,1), u(0)=0, u(1)=1.
        let mut interior = PointCloud::new(1);
        for i in 0..64 {
            interior.push(&[(i as f64 + 0.5) / 64.0]);
        }
        let n = interior.len();
        let mut boundary = PointCloud::new(1);
        boundary.push(&[0.0]);
        boundary.push(&[1.0]);
        let mut loss = CompositeLoss::new();
        let si = loss.add_set(interior);
        loss.add_term(
            si,
            1.0,
            TermKind::Residual {
                coeff: 1.0,
                source: vec![0.0; n],
            },
        );
        let sb = loss.add_set(boundary);
        loss.add_term(
            sb,
            400.0,
            TermKind::ValueMismatch {
                target: vec![0.0, 1.0],
            },
        );
        loss
    }

    #[test]
    fn learns_linear_solution_of_1d_laplace() {
        let loss = laplace_1d_loss();
        let net = DenseNetwork::init(&[1, 10, 10, 1], 3).unwrap();
        let cfg = TrainingConfig {
            epochs: 400,
            base_lr: 0.01,
            lr_drop_epochs: vec![240, 320],
            mini_batches: 2,
            penalty_beta: 400.0,
            seed: 3,
        };
        let out = train_subproblem(&net, &loss, &cfg).unwrap();
        let mut scratch = crate::diffnet::JetScratch::new(&out.net);
        for i in 0..=20 {
            let x = i as f64 / 20.0;
            let u = out.net.jet_into(&[x], &mut scratch).value;
            assert!(
                (u - x).abs() <= 0.05,
                "trained field off at x={x}: {u} (best loss {})",
                out.best_loss
            );
        }
    }

    #[test]
    fn zero_epochs_returns_initial_net() {
        let loss = laplace_1d_loss();
        let net = DenseNetwork::init(&[1, 4, 1], 9).unwrap();
        let cfg = TrainingConfig {
            epochs: 0,
            ..TrainingConfig::default()
        };
        let out = train_subproblem(&net, &loss, &cfg).unwrap();
        assert_eq!(out.net.params(), net.params());
        assert!(out.history.is_empty());
    }

    #[test]
    fn same_seed_gives_identical_history() {
        let loss = laplace_1d_loss();
        let net = DenseNetwork::init(&[1, 6, 1], 4).unwrap();
        let cfg = TrainingConfig {
            epochs: 20,
            base_lr: 0.01,
            lr_drop_epochs: vec![],
            mini_batches: 3,
            penalty_beta: 400.0,
            seed: 11,
        };
        let a = train_subproblem(&net, &loss, &cfg).unwrap();
        let b = train_subproblem(&net, &loss, &cfg).unwrap();
        assert_eq!(a.history, b.history);
        assert_eq!(a.net.params(), b.net.params());
    }
}
