//! Dense feed-forward networks with exact first/second-order input
//! derivatives, reverse-mode parameter gradients, and the Adam optimizer.
//!
//! Networks are plain parameter vectors: hidden layers apply `tanh`, the
//! output layer is affine with a single output neuron. Derivatives with
//! respect to the inputs are propagated forward as jets (value, gradient,
//! Laplacian), which is exact for this network class; parameter gradients of
//! losses built from jet evaluations are computed by a reverse sweep over the
//! same propagation.

mod adam;
pub(crate) mod fastmath;
mod jet;
mod train;

pub use adam::{adam_step, lr_schedule, AdamState, TrainingConfig};
pub use jet::{eval_with_derivatives, AnalyticField, Jet, JetScratch, ScalarField};
pub use train::{train_subproblem, TrainOutcome};

use crate::error::{Error, Result};
use crate::rng::{self, stream};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Activation applied on hidden layers; the output layer is always affine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Tanh,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct LayerSpec {
    pub n_in: usize,
    pub n_out: usize,
    /// Offset of the row-major weight block in the flat parameter vector.
    pub w_off: usize,
    /// Offset of the bias block.
    pub b_off: usize,
}

/// A fully-connected scalar-output network over `d` inputs.
///
/// Parameters live in one flat vector, laid out layer by layer as the
/// row-major weight matrix followed by the bias vector.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseNetwork {
    layer_sizes: Vec<usize>,
    activation: Activation,
    params: Vec<f64>,
    init_seed: u64,
    layers: Vec<LayerSpec>,
}

fn layer_specs(layer_sizes: &[usize]) -> (Vec<LayerSpec>, usize) {
    let mut layers = Vec::with_capacity(layer_sizes.len() - 1);
    let mut off = 0;
    for w in layer_sizes.windows(2) {
        let (n_in, n_out) = (w[0], w[1]);
        layers.push(LayerSpec {
            n_in,
            n_out,
            w_off: off,
            b_off: off + n_in * n_out,
        });
        off += n_in * n_out + n_out;
    }
    (layers, off)
}

impl DenseNetwork {
    /// Builds a network with Glorot-uniform weights and zero biases.
    ///
    /// `layer_sizes` runs input dimension, hidden widths, then the mandatory
    /// scalar output (last entry 1). Deterministic for a given seed.
    pub fn init(layer_sizes: &[usize], seed: u64) -> Result<Self> {
        if layer_sizes.len() < 2 {
            return Err(Error::Config(format!(
                "layer_sizes needs at least input and output entries, got {layer_sizes:?}"
            )));
        }
        if layer_sizes.iter().any(|&n| n == 0) {
            return Err(Error::Config(format!(
                "layer sizes must be positive, got {layer_sizes:?}"
            )));
        }
        if *layer_sizes.last().unwrap() != 1 {
            return Err(Error::Config(format!(
                "output dimension must be 1, got {layer_sizes:?}"
            )));
        }
        let (layers, n_params) = layer_specs(layer_sizes);
        let mut params = vec![0.0; n_params];
        let mut rng = rng::rng_for(seed, &[stream::NETWORK_INIT]);
        for spec in &layers {
            let bound = (6.0 / (spec.n_in + spec.n_out) as f64).sqrt();
            for w in &mut params[spec.w_off..spec.w_off + spec.n_in * spec.n_out] {
                *w = rng.random_range(-bound..bound);
            }
            // biases stay zero
        }
        Ok(Self {
            layer_sizes: layer_sizes.to_vec(),
            activation: Activation::Tanh,
            params,
            init_seed: seed,
            layers,
        })
    }

    pub fn input_dim(&self) -> usize {
        self.layer_sizes[0]
    }

    pub fn layer_sizes(&self) -> &[usize] {
        &self.layer_sizes
    }

    pub fn param_count(&self) -> usize {
        self.params.len()
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    pub fn init_seed(&self) -> u64 {
        self.init_seed
    }

    pub(crate) fn layers(&self) -> &[LayerSpec] {
        &self.layers
    }

    pub(crate) fn weights(&self, spec: &LayerSpec) -> &[f64] {
        &self.params[spec.w_off..spec.w_off + spec.n_in * spec.n_out]
    }

    pub(crate) fn biases(&self, spec: &LayerSpec) -> &[f64] {
        &self.params[spec.b_off..spec.b_off + spec.n_out]
    }

    /// True when every parameter is finite.
    pub fn is_finite(&self) -> bool {
        self.params.iter().all(|p| p.is_finite())
    }

    pub fn to_snapshot(&self) -> NetworkSnapshot {
        let mut weights = Vec::with_capacity(self.layers.len());
        let mut biases = Vec::with_capacity(self.layers.len());
        for spec in &self.layers {
            weights.push(self.weights(spec).to_vec());
            biases.push(self.biases(spec).to_vec());
        }
        NetworkSnapshot {
            format_version: SNAPSHOT_FORMAT_VERSION,
            layer_sizes: self.layer_sizes.clone(),
            activation: self.activation,
            weights,
            biases,
            seed: self.init_seed,
        }
    }

    pub fn from_snapshot(snap: &NetworkSnapshot) -> Result<Self> {
        if snap.format_version != SNAPSHOT_FORMAT_VERSION {
            return Err(Error::Config(format!(
                "unsupported network snapshot version {}",
                snap.format_version
            )));
        }
        let (layers, n_params) = layer_specs(&snap.layer_sizes);
        if snap.weights.len() != layers.len() || snap.biases.len() != layers.len() {
            return Err(Error::Config("snapshot layer count mismatch".into()));
        }
        let mut params = vec![0.0; n_params];
        for (i, spec) in layers.iter().enumerate() {
            if snap.weights[i].len() != spec.n_in * spec.n_out || snap.biases[i].len() != spec.n_out
            {
                return Err(Error::Config(format!("snapshot layer {i} shape mismatch")));
            }
            params[spec.w_off..spec.w_off + spec.n_in * spec.n_out]
                .copy_from_slice(&snap.weights[i]);
            params[spec.b_off..spec.b_off + spec.n_out].copy_from_slice(&snap.biases[i]);
        }
        Ok(Self {
            layer_sizes: snap.layer_sizes.clone(),
            activation: snap.activation,
            params,
            init_seed: snap.seed,
            layers,
        })
    }
}

pub const SNAPSHOT_FORMAT_VERSION: u32 = 1;

/// Versioned on-disk form of one network.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NetworkSnapshot {
    pub format_version: u32,
    pub layer_sizes: Vec<usize>,
    pub activation: Activation,
    /// Row-major weight matrix per layer.
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<Vec<f64>>,
    pub seed: u64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameter_count_matches_hand_count() {
        // d=2, eight hidden layers of 50, scalar output.
        let sizes = [2, 50, 50, 50, 50, 50, 50, 50, 50, 1];
        let net = DenseNetwork::init(&sizes, 0).unwrap();
        assert_eq!(net.param_count(), 18051);

        let affine = DenseNetwork::init(&[1, 1], 0).unwrap();
        assert_eq!(affine.param_count(), 2);
    }

    #[test]
    fn init_is_deterministic_and_finite() {
        let a = DenseNetwork::init(&[2, 8, 8, 1], 42).unwrap();
        let b = DenseNetwork::init(&[2, 8, 8, 1], 42).unwrap();
        assert_eq!(a.params(), b.params());
        assert!(a.is_finite());
        let c = DenseNetwork::init(&[2, 8, 8, 1], 43).unwrap();
        assert_ne!(a.params(), c.params());
    }

    #[test]
    fn init_rejects_bad_shapes() {
        assert!(DenseNetwork::init(&[2], 0).is_err());
        assert!(DenseNetwork::init(&[2, 0, 1], 0).is_err());
        assert!(DenseNetwork::init(&[2, 8, 3], 0).is_err());
    }

    #[test]
    fn snapshot_round_trip() {
        let net = DenseNetwork::init(&[2, 5, 1], 7).unwrap();
        let json = serde_json::to_string(&net.to_snapshot()).unwrap();
        let back: NetworkSnapshot = serde_json::from_str(&json).unwrap();
        let net2 = DenseNetwork::from_snapshot(&back).unwrap();
        assert_eq!(net.params(), net2.params());
        assert_eq!(net2.init_seed(), 7);
    }
}
