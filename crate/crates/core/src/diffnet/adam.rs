use serde::{Deserialize, Serialize};

use super::DenseNetwork;
use crate::error::{Error, Result};

/// Per-subproblem training schedule.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TrainingConfig {
    pub epochs: usize,
    pub base_lr: f64,
    /// Epochs at which the learning rate is divided by 10 (cumulative).
    pub lr_drop_epochs: Vec<usize>,
    pub mini_batches: usize,
    /// Penalty coefficient β on boundary/interface terms.
    pub penalty_beta: f64,
    pub seed: u64,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        Self {
            epochs: 1000,
            base_lr: 0.01,
            lr_drop_epochs: vec![600, 800],
            mini_batches: 5,
            penalty_beta: 400.0,
            seed: 0,
        }
    }
}

impl TrainingConfig {
    pub fn validate(&self) -> Result<()> {
        if self.epochs == 0 {
            return Err(Error::Config("epochs must be > 0".into()));
        }
        if self.mini_batches == 0 {
            return Err(Error::Config("mini_batches must be >= 1".into()));
        }
        if !(self.penalty_beta > 0.0) {
            return Err(Error::Config("penalty_beta must be > 0".into()));
        }
        if !(self.base_lr > 0.0) {
            return Err(Error::Config("base_lr must be > 0".into()));
        }
        Ok(())
    }
}

/// Learning rate at `epoch`: the base rate divided by 10 once per passed drop.
pub fn lr_schedule(config: &TrainingConfig, epoch: usize) -> f64 {
    let drops = config
        .lr_drop_epochs
        .iter()
        .filter(|&&e| epoch >= e)
        .count();
    config.base_lr / 10f64.powi(drops as i32)
}

/// Adam moment estimates; one entry per network parameter.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AdamState {
    pub first_moment: Vec<f64>,
    pub second_moment: Vec<f64>,
    pub step_count: u64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl AdamState {
    pub fn new(param_count: usize) -> Self {
        Self {
            first_moment: vec![0.0; param_count],
            second_moment: vec![0.0; param_count],
            step_count: 0,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

/// One bias-corrected Adam update in place.
pub fn adam_step(
    net: &mut DenseNetwork,
    grads: &[f64],
    state: &mut AdamState,
    lr: f64,
) -> Result<()> {
    if grads.len() != net.param_count() {
        return Err(Error::Dimension {
            expected: net.param_count(),
            got: grads.len(),
        });
    }
    if let Some(idx) = grads.iter().position(|g| !g.is_finite()) {
        return Err(Error::NonFinite {
            context: "adam gradient".into(),
            index: idx,
        });
    }
    state.step_count += 1;
    let t = state.step_count as i32;
    let bc1 = 1.0 - state.beta1.powi(t);
    let bc2 = 1.0 - state.beta2.powi(t);
    let params = net.params_mut();
    for i in 0..params.len() {
        let g = grads[i];
        state.first_moment[i] = state.beta1 * state.first_moment[i] + (1.0 - state.beta1) * g;
        state.second_moment[i] =
            state.beta2 * state.second_moment[i] + (1.0 - state.beta2) * g * g;
        let m_hat = state.first_moment[i] / bc1;
        let v_hat = state.second_moment[i] / bc2;
        params[i] -= lr * m_hat / (v_hat.sqrt() + state.epsilon);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lr_schedule_matches_stated_drops() {
        let cfg = TrainingConfig {
            epochs: 1000,
            base_lr: 0.01,
            lr_drop_epochs: vec![600, 800],
            ..TrainingConfig::default()
        };
        assert_eq!(lr_schedule(&cfg, 0), 0.01);
        assert_eq!(lr_schedule(&cfg, 599), 0.01);
        assert_eq!(lr_schedule(&cfg, 600), 0.001);
        assert_eq!(lr_schedule(&cfg, 800), 0.0001);

        let cfg = TrainingConfig {
            epochs: 5000,
            base_lr: 0.001,
            lr_drop_epochs: vec![2000, 4000],
            ..TrainingConfig::default()
        };
        assert!((lr_schedule(&cfg, 4500) - 0.00001).abs() < 1e-18);
    }

    #[test]
    fn zero_gradient_leaves_parameters_unchanged() {
        let mut net = DenseNetwork::init(&[2, 4, 1], 1).unwrap();
        let before = net.params().to_vec();
        let mut state = AdamState::new(net.param_count());
        adam_step(&mut net, &vec![0.0; before.len()], &mut state, 0.01).unwrap();
        assert_eq!(net.params(), &before[..]);
        assert_eq!(state.step_count, 1);
    }

    #[test]
    fn first_step_is_signed_unit_step_times_lr() {
        let mut net = DenseNetwork::init(&[2, 4, 1], 1).unwrap();
        let before = net.params().to_vec();
        let mut state = AdamState::new(net.param_count());
        let grads: Vec<f64> = (0..before.len())
            .map(|i| if i % 2 == 0 { 0.5 } else { -2.0 })
            .collect();
        adam_step(&mut net, &grads, &mut state, 0.01).unwrap();
        for (i, (&p, &p0)) in net.params().iter().zip(before.iter()).enumerate() {
            let step = p - p0;
            let expected = -0.01 * grads[i].signum();
            // Deviation only through ε in the denominator.
            assert!(
                (step - expected).abs() <= 0.01 * 1e-6,
                "param {i}: step {step} vs {expected}"
            );
        }
    }

    #[test]
    fn steps_are_reproducible() {
        let n_params = DenseNetwork::init(&[2, 3, 1], 5).unwrap().param_count();
        let grads: Vec<f64> = (0..n_params).map(|i| (i as f64 * 0.37).sin()).collect();
        let run = || {
            let mut net = DenseNetwork::init(&[2, 3, 1], 5).unwrap();
            let mut state = AdamState::new(net.param_count());
            adam_step(&mut net, &grads, &mut state, 0.01).unwrap();
            adam_step(&mut net, &grads, &mut state, 0.01).unwrap();
            (net.params().to_vec(), state.step_count)
        };
        let (a, sa) = run();
        let (b, sb) = run();
        assert_eq!(a, b);
        assert_eq!(sa, sb);
        assert_eq!(sa, 2);
    }

    #[test]
    fn nan_gradient_is_rejected() {
        let mut net = DenseNetwork::init(&[2, 3, 1], 5).unwrap();
        let mut state = AdamState::new(net.param_count());
        let mut grads = vec![0.0; net.param_count()];
        grads[3] = f64::NAN;
        let err = adam_step(&mut net, &grads, &mut state, 0.01).unwrap_err();
        assert!(matches!(err, Error::NonFinite { index: 3, .. }));
    }
}
