//! Training losses assembled as Monte Carlo means over sample batches.
//!
//! Every subproblem loss in the crate is a weighted sum of [`Term`]s, each a
//! mean of a pointwise expression over one sample set. The pointwise math
//! lives in [`TermKind`]; both the generic field evaluation (used with
//! analytic oracles) and the network training path (value plus parameter
//! gradient) share it, so the two can never drift apart.

mod ops;

pub use ops::*;

use rayon::prelude::*;

use crate::diffnet::{DenseNetwork, JetScratch, ScalarField};
use crate::error::{Error, Result};
use crate::geometry::PointCloud;

/// Fixed chunk size for parallel batch evaluation. Partial sums are reduced
/// in chunk order, so results do not depend on the thread count.
const PAR_CHUNK: usize = 256;

/// Per-point cached values and gradients of a frozen network (or analytic
/// field) at a fixed sample set.
///
/// Rebuilt exactly once per outer iteration; the cache is what lets the
/// compensated losses avoid re-evaluating the frozen neighbor every epoch.
#[derive(Debug, Clone)]
pub struct FrozenFieldCache {
    pub values: Vec<f64>,
    /// Flat row-major gradients, `len = n_points * dim`.
    pub gradients: Vec<f64>,
    pub dim: usize,
}

impl FrozenFieldCache {
    pub fn build(field: &dyn ScalarField, points: &PointCloud) -> Self {
        let d = points.dim;
        let mut values = Vec::with_capacity(points.len());
        let mut gradients = Vec::with_capacity(points.len() * d);
        for p in points.iter() {
            let jet = field.jet(p);
            values.push(jet.value);
            gradients.extend_from_slice(&jet.gradient);
        }
        Self {
            values,
            gradients,
            dim: d,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Pointwise expression of one loss term.
///
/// Data vectors are aligned index-wise with the term's sample set.
#[derive(Debug, Clone)]
pub enum TermKind {
    /// `|c·Δu + f_n|²`
    Residual { coeff: f64, source: Vec<f64> },
    /// `grad_coeff/2·|∇u|² + source_coeff·f_n·u + d_n·∇u`
    ///
    /// `cross` (flat `n·d`) carries frozen neighbor gradients in the
    /// compensated and corrector losses; `None` when absent.
    Volume {
        grad_coeff: f64,
        source_coeff: f64,
        source: Vec<f64>,
        cross: Option<Vec<f64>>,
    },
    /// `(u − t_n)²`
    ValueMismatch { target: Vec<f64> },
    /// `(κ·u + ∇u·n_pt − h_n)²` with per-point unit normals (flat `n·d`).
    FluxMismatch {
        kappa: f64,
        normals: Vec<f64>,
        target: Vec<f64>,
    },
    /// `quad/2·u² + s_n·u`
    ValueQuad { quad: f64, linear: Vec<f64> },
}

impl TermKind {
    fn needs_laplacian(&self) -> bool {
        matches!(self, TermKind::Residual { .. })
    }

    fn data_len(&self) -> usize {
        match self {
            TermKind::Residual { source, .. } => source.len(),
            TermKind::Volume { source, .. } => source.len(),
            TermKind::ValueMismatch { target } => target.len(),
            TermKind::FluxMismatch { target, .. } => target.len(),
            TermKind::ValueQuad { linear, .. } => linear.len(),
        }
    }

    /// Pointwise value; `jet` is `[u, ∂₁u … ∂_d u, Δu]` (`Δu` optional).
    #[inline]
    fn eval(&self, n: usize, d: usize, jet: &[f64]) -> f64 {
        match self {
            TermKind::Residual { coeff, source } => {
                let r = coeff * jet[d + 1] + source[n];
                r * r
            }
            TermKind::Volume {
                grad_coeff,
                source_coeff,
                source,
                cross,
            } => {
                let mut g2 = 0.0;
                for k in 0..d {
                    g2 += jet[1 + k] * jet[1 + k];
                }
                let mut v = 0.5 * grad_coeff * g2 + source_coeff * source[n] * jet[0];
                if let Some(cross) = cross {
                    let row = &cross[n * d..(n + 1) * d];
                    let mut dot = 0.0;
                    for k in 0..d {
                        dot += row[k] * jet[1 + k];
                    }
                    v += dot;
                }
                v
            }
            TermKind::ValueMismatch { target } => {
                let m = jet[0] - target[n];
                m * m
            }
            TermKind::FluxMismatch {
                kappa,
                normals,
                target,
            } => {
                let nr = &normals[n * d..(n + 1) * d];
                let mut flux = 0.0;
                for k in 0..d {
                    flux += nr[k] * jet[1 + k];
                }
                let r = kappa * jet[0] + flux - target[n];
                r * r
            }
            TermKind::ValueQuad { quad, linear } => {
                0.5 * quad * jet[0] * jet[0] + linear[n] * jet[0]
            }
        }
    }

    /// Pointwise value plus `scale·∂(value)/∂jet` accumulated into `seed`.
    #[inline]
    fn eval_with_seed(&self, n: usize, d: usize, jet: &[f64], scale: f64, seed: &mut [f64]) -> f64 {
        match self {
            TermKind::Residual { coeff, source } => {
                let r = coeff * jet[d + 1] + source[n];
                seed[d + 1] += scale * 2.0 * r * coeff;
                r * r
            }
            TermKind::Volume {
                grad_coeff,
                source_coeff,
                source,
                cross,
            } => {
                let mut g2 = 0.0;
                for k in 0..d {
                    let gk = jet[1 + k];
                    g2 += gk * gk;
                    seed[1 + k] += scale * grad_coeff * gk;
                }
                let mut v = 0.5 * grad_coeff * g2 + source_coeff * source[n] * jet[0];
                seed[0] += scale * source_coeff * source[n];
                if let Some(cross) = cross {
                    let row = &cross[n * d..(n + 1) * d];
                    let mut dot = 0.0;
                    for k in 0..d {
                        dot += row[k] * jet[1 + k];
                        seed[1 + k] += scale * row[k];
                    }
                    v += dot;
                }
                v
            }
            TermKind::ValueMismatch { target } => {
                let m = jet[0] - target[n];
                seed[0] += scale * 2.0 * m;
                m * m
            }
            TermKind::FluxMismatch {
                kappa,
                normals,
                target,
            } => {
                let nr = &normals[n * d..(n + 1) * d];
                let mut flux = 0.0;
                for k in 0..d {
                    flux += nr[k] * jet[1 + k];
                }
                let r = kappa * jet[0] + flux - target[n];
                seed[0] += scale * 2.0 * r * kappa;
                for k in 0..d {
                    seed[1 + k] += scale * 2.0 * r * nr[k];
                }
                r * r
            }
            TermKind::ValueQuad { quad, linear } => {
                seed[0] += scale * (quad * jet[0] + linear[n]);
                0.5 * quad * jet[0] * jet[0] + linear[n] * jet[0]
            }
        }
    }
}

/// One weighted mean over a sample set.
#[derive(Debug, Clone)]
pub struct Term {
    /// Index into [`CompositeLoss::sets`].
    pub set: usize,
    pub weight: f64,
    pub kind: TermKind,
}

/// A subproblem training loss: `Σ_t weight_t · mean_{n ∈ batch_t} g_t(n)`.
#[derive(Debug, Clone, Default)]
pub struct CompositeLoss {
    pub sets: Vec<PointCloud>,
    pub terms: Vec<Term>,
}

impl CompositeLoss {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_set(&mut self, points: PointCloud) -> usize {
        self.sets.push(points);
        self.sets.len() - 1
    }

    pub fn add_term(&mut self, set: usize, weight: f64, kind: TermKind) {
        debug_assert_eq!(kind.data_len(), self.sets[set].len());
        self.terms.push(Term { set, weight, kind });
    }

    fn set_needs_laplacian(&self, set: usize) -> bool {
        self.terms
            .iter()
            .any(|t| t.set == set && t.kind.needs_laplacian())
    }

    /// Loss value for an arbitrary field over the given batches
    /// (index lists per set; `None` means the full sets).
    pub fn value_for_field(
        &self,
        field: &dyn ScalarField,
        batches: Option<&[Vec<usize>]>,
    ) -> Result<f64> {
        let full: Vec<Vec<usize>>;
        let batches = match batches {
            Some(b) => b,
            None => {
                full = self.sets.iter().map(|s| (0..s.len()).collect()).collect();
                &full
            }
        };
        let mut total = 0.0;
        for (t_idx, term) in self.terms.iter().enumerate() {
            let set = &self.sets[term.set];
            let d = set.dim;
            let batch = &batches[term.set];
            if batch.is_empty() {
                continue;
            }
            let mut sum = 0.0;
            let mut raw = vec![0.0; d + 2];
            for (pos, &n) in batch.iter().enumerate() {
                let jet = field.jet(set.point(n));
                if !jet.is_finite() {
                    return Err(Error::NonFinite {
                        context: format!("loss term {t_idx} field evaluation"),
                        index: pos,
                    });
                }
                raw[0] = jet.value;
                raw[1..=d].copy_from_slice(&jet.gradient);
                raw[d + 1] = jet.laplacian;
                sum += term.kind.eval(n, d, &raw);
            }
            total += term.weight * (sum / batch.len() as f64);
        }
        if !total.is_finite() {
            return Err(Error::NonFinite {
                context: "loss value".into(),
                index: 0,
            });
        }
        Ok(total)
    }

    /// Loss value for a network over the given batches (fast path).
    pub fn value_for_network(
        &self,
        net: &DenseNetwork,
        batches: Option<&[Vec<usize>]>,
    ) -> Result<f64> {
        let (value, _) = self.drive_network(net, batches, false)?;
        Ok(value)
    }

    /// Loss value and exact parameter gradient for a network.
    pub fn value_and_grad(
        &self,
        net: &DenseNetwork,
        batches: Option<&[Vec<usize>]>,
    ) -> Result<(f64, Vec<f64>)> {
        let (value, grad) = self.drive_network(net, batches, true)?;
        Ok((value, grad.expect("gradient requested")))
    }

    fn drive_network(
        &self,
        net: &DenseNetwork,
        batches: Option<&[Vec<usize>]>,
        with_grad: bool,
    ) -> Result<(f64, Option<Vec<f64>>)> {
        if !self.sets.is_empty() && self.sets[0].dim != net.input_dim() {
            return Err(Error::Dimension {
                expected: net.input_dim(),
                got: self.sets[0].dim,
            });
        }
        let full: Vec<Vec<usize>>;
        let batches = match batches {
            Some(b) => b,
            None => {
                full = self.sets.iter().map(|s| (0..s.len()).collect()).collect();
                &full
            }
        };

        let mut term_means = vec![0.0; self.terms.len()];
        let mut grad = if with_grad {
            Some(vec![0.0; net.param_count()])
        } else {
            None
        };

        for (set_idx, set) in self.sets.iter().enumerate() {
            let term_ids: Vec<usize> = (0..self.terms.len())
                .filter(|&t| self.terms[t].set == set_idx)
                .collect();
            if term_ids.is_empty() {
                continue;
            }
            let batch = &batches[set_idx];
            if batch.is_empty() {
                continue;
            }
            let d = set.dim;
            let n_comp = if self.set_needs_laplacian(set_idx) {
                d + 2
            } else {
                d + 1
            };
            let inv_len = 1.0 / batch.len() as f64;

            struct ChunkOut {
                term_sums: Vec<f64>,
                grad: Option<Vec<f64>>,
                bad_index: Option<usize>,
            }

            let chunks: Vec<ChunkOut> = batch
                .par_chunks(PAR_CHUNK)
                .enumerate()
                .map(|(chunk_idx, chunk)| {
                    let mut scratch = JetScratch::new(net);
                    let mut term_sums = vec![0.0; term_ids.len()];
                    let mut grad_acc = if with_grad {
                        Some(vec![0.0; net.param_count()])
                    } else {
                        None
                    };
                    let mut seed = vec![0.0; d + 2];
                    for (pos, &n) in chunk.iter().enumerate() {
                        let x = set.point(n);
                        let jet_raw = net.forward_components(x, n_comp, &mut scratch);
                        if jet_raw.iter().any(|v| !v.is_finite()) {
                            return ChunkOut {
                                term_sums,
                                grad: grad_acc,
                                bad_index: Some(chunk_idx * PAR_CHUNK + pos),
                            };
                        }
                        let mut raw = [0.0; 16];
                        let raw = &mut raw[..d + 2];
                        raw[..n_comp].copy_from_slice(jet_raw);
                        if with_grad {
                            seed.fill(0.0);
                            for (slot, &t) in term_ids.iter().enumerate() {
                                let term = &self.terms[t];
                                term_sums[slot] += term.kind.eval_with_seed(
                                    n,
                                    d,
                                    raw,
                                    term.weight * inv_len,
                                    &mut seed,
                                );
                            }
                            net.reverse_components(
                                &seed,
                                n_comp,
                                &mut scratch,
                                grad_acc.as_mut().unwrap(),
                            );
                        } else {
                            for (slot, &t) in term_ids.iter().enumerate() {
                                term_sums[slot] += self.terms[t].kind.eval(n, d, raw);
                            }
                        }
                    }
                    ChunkOut {
                        term_sums,
                        grad: grad_acc,
                        bad_index: None,
                    }
                })
                .collect();

            for chunk in &chunks {
                if let Some(idx) = chunk.bad_index {
                    return Err(Error::NonFinite {
                        context: format!("network evaluation on loss set {set_idx}"),
                        index: idx,
                    });
                }
            }
            // Fixed-order reduction: chunk order, then term order.
            for chunk in &chunks {
                for (slot, &t) in term_ids.iter().enumerate() {
                    term_means[t] += chunk.term_sums[slot] * inv_len;
                }
                if let (Some(g), Some(cg)) = (grad.as_mut(), chunk.grad.as_ref()) {
                    for (gi, ci) in g.iter_mut().zip(cg.iter()) {
                        *gi += ci;
                    }
                }
            }
        }

        let mut total = 0.0;
        for (t, term) in self.terms.iter().enumerate() {
            total += term.weight * term_means[t];
        }
        if !total.is_finite() {
            return Err(Error::NonFinite {
                context: "loss value".into(),
                index: 0,
            });
        }
        Ok((total, grad))
    }
}

/// Exact gradient of a composite loss with respect to all network parameters.
///
/// Reverse differentiation over the jet forward pass; covers every loss built
/// from value/gradient/laplacian evaluations.
pub fn loss_parameter_gradient(
    loss: &CompositeLoss,
    net: &DenseNetwork,
    batches: Option<&[Vec<usize>]>,
) -> Result<Vec<f64>> {
    Ok(loss.value_and_grad(net, batches)?.1)
}
