//! Forward jet propagation and the matching reverse sweep.
//!
//! A jet carries (value, gradient, Laplacian) of the network output with
//! respect to its inputs. States are stored component-major per layer:
//! `state[c*n + i]` holds component `c` of neuron `i`, where `c = 0` is the
//! value, `c = 1..=d` the gradient entries, and `c = d+1` the Laplacian.
//! Affine layers map every component by the same weight matrix (bias on the
//! value only); `tanh` layers apply the chain rule
//!
//! ```text
//! a   = σ(z)
//! ∇a  = σ'(z)·∇z
//! Δa  = σ'(z)·Δz + σ''(z)·|∇z|²
//! ```
//!
//! which is exact, so no step size or truncation enters anywhere. Losses that
//! never read the Laplacian propagate `d+1` components instead of `d+2`; the
//! value and gradient lanes are unaffected bit-for-bit.

use std::sync::Arc;

use super::DenseNetwork;
use crate::error::{Error, Result};

/// Value, gradient, and Laplacian of a scalar field at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub gradient: Vec<f64>,
    pub laplacian: f64,
}

impl Jet {
    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
            && self.laplacian.is_finite()
            && self.gradient.iter().all(|g| g.is_finite())
    }
}

/// A callable surface providing value/gradient/laplacian at a point.
///
/// Implemented by [`DenseNetwork`] and by analytic manufactured solutions, so
/// losses can be evaluated against either.
pub trait ScalarField: Sync {
    fn dim(&self) -> usize;
    fn jet(&self, x: &[f64]) -> Jet;

    fn value(&self, x: &[f64]) -> f64 {
        self.jet(x).value
    }
}

type ValueFn = dyn Fn(&[f64]) -> f64 + Send + Sync;
type GradFn = dyn Fn(&[f64], &mut [f64]) + Send + Sync;

/// Closed-form scalar field with analytic derivatives.
#[derive(Clone)]
pub struct AnalyticField {
    dim: usize,
    value: Arc<ValueFn>,
    gradient: Arc<GradFn>,
    laplacian: Arc<ValueFn>,
}

impl AnalyticField {
    pub fn new(
        dim: usize,
        value: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
        gradient: impl Fn(&[f64], &mut [f64]) + Send + Sync + 'static,
        laplacian: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            dim,
            value: Arc::new(value),
            gradient: Arc::new(gradient),
            laplacian: Arc::new(laplacian),
        }
    }
}

impl ScalarField for AnalyticField {
    fn dim(&self) -> usize {
        self.dim
    }

    fn jet(&self, x: &[f64]) -> Jet {
        let mut gradient = vec![0.0; self.dim];
        (self.gradient)(x, &mut gradient);
        Jet {
            value: (self.value)(x),
            gradient,
            laplacian: (self.laplacian)(x),
        }
    }

    fn value(&self, x: &[f64]) -> f64 {
        (self.value)(x)
    }
}

/// Reusable forward/reverse buffers tied to one network topology.
///
/// The scratch caches a transposed copy of the weights so the forward sweep
/// runs in pure axpy form. It is built for the parameter values of `net` at
/// construction; after mutating the parameters, call [`JetScratch::refresh`]
/// (or construct a fresh scratch) before evaluating again.
pub struct JetScratch {
    /// Input state of each affine layer (`a_states[0]` is the seeded input).
    a_states: Vec<Vec<f64>>,
    /// Output state of each affine layer (pre-activation; the last one is the
    /// network output jet).
    z_states: Vec<Vec<f64>>,
    /// Column-major (transposed) weights per layer.
    wt: Vec<Vec<f64>>,
    adj_a: Vec<f64>,
    adj_z: Vec<f64>,
}

impl JetScratch {
    pub fn new(net: &DenseNetwork) -> Self {
        let d = net.input_dim();
        let c = d + 2;
        let a_states = net
            .layers()
            .iter()
            .map(|l| vec![0.0; l.n_in * c])
            .collect();
        let z_states = net
            .layers()
            .iter()
            .map(|l| vec![0.0; l.n_out * c])
            .collect();
        let wt = net
            .layers()
            .iter()
            .map(|l| vec![0.0; l.n_in * l.n_out])
            .collect();
        let max_n = *net.layer_sizes().iter().max().unwrap();
        let mut scratch = Self {
            a_states,
            z_states,
            wt,
            adj_a: vec![0.0; max_n * c],
            adj_z: vec![0.0; max_n * c],
        };
        scratch.refresh(net);
        scratch
    }

    /// Rebuilds the cached weight transposes from the network's current
    /// parameters.
    pub fn refresh(&mut self, net: &DenseNetwork) {
        for (l, spec) in net.layers().iter().enumerate() {
            let w = net.weights(spec);
            let wt = &mut self.wt[l];
            for i in 0..spec.n_out {
                for j in 0..spec.n_in {
                    wt[j * spec.n_out + i] = w[i * spec.n_in + j];
                }
            }
        }
    }
}

const LANES: usize = 8;

/// One register-resident output block of `L` lanes for the forward affine:
/// `out[c*n_out + base+l] = b[base+l]·[c=0] + Σ_j x[c*n_in+j]·wt[j*n_out+base+l]`.
#[inline(always)]
fn fwd_block<const C: usize, const L: usize>(
    wt: &[f64],
    b: &[f64],
    n_in: usize,
    n_out: usize,
    x: &[f64],
    out: &mut [f64],
    base: usize,
) {
    let mut acc = [[0.0f64; L]; C];
    acc[0].copy_from_slice(&b[base..base + L]);
    for j in 0..n_in {
        let col = &wt[j * n_out + base..j * n_out + base + L];
        for c in 0..C {
            let xc = x[c * n_in + j];
            for l in 0..L {
                acc[c][l] += xc * col[l];
            }
        }
    }
    for c in 0..C {
        out[c * n_out + base..c * n_out + base + L].copy_from_slice(&acc[c]);
    }
}

/// Affine map of all component blocks over transposed weights, lane-blocked
/// with the reduction over `j` innermost (no horizontal sums, fixed
/// summation order).
#[inline]
fn affine_forward_t_k<const C: usize>(
    wt: &[f64],
    b: &[f64],
    n_in: usize,
    n_out: usize,
    x: &[f64],
    out: &mut [f64],
) {
    let mut base = 0;
    while base + LANES <= n_out {
        fwd_block::<C, LANES>(wt, b, n_in, n_out, x, out, base);
        base += LANES;
    }
    if base + 4 <= n_out {
        fwd_block::<C, 4>(wt, b, n_in, n_out, x, out, base);
        base += 4;
    }
    if base + 2 <= n_out {
        fwd_block::<C, 2>(wt, b, n_in, n_out, x, out, base);
        base += 2;
    }
    if base < n_out {
        fwd_block::<C, 1>(wt, b, n_in, n_out, x, out, base);
    }
}

#[inline]
fn affine_forward_t(
    wt: &[f64],
    b: &[f64],
    n_in: usize,
    n_out: usize,
    n_comp: usize,
    x: &[f64],
    out: &mut [f64],
) {
    match n_comp {
        2 => affine_forward_t_k::<2>(wt, b, n_in, n_out, x, out),
        3 => affine_forward_t_k::<3>(wt, b, n_in, n_out, x, out),
        4 => affine_forward_t_k::<4>(wt, b, n_in, n_out, x, out),
        5 => affine_forward_t_k::<5>(wt, b, n_in, n_out, x, out),
        6 => affine_forward_t_k::<6>(wt, b, n_in, n_out, x, out),
        7 => affine_forward_t_k::<7>(wt, b, n_in, n_out, x, out),
        _ => {
            out[..n_out].copy_from_slice(b);
            out[n_out..n_comp * n_out].fill(0.0);
            for j in 0..n_in {
                let col = &wt[j * n_out..(j + 1) * n_out];
                for c in 0..n_comp {
                    let xc = x[c * n_in + j];
                    let oc = &mut out[c * n_out..(c + 1) * n_out];
                    for (o, &wv) in oc.iter_mut().zip(col) {
                        *o += xc * wv;
                    }
                }
            }
        }
    }
}

/// `gw[i,j] += Σ_c adj_z[c*n_out+i] · a[c*n_in+j]`, lane-blocked over `j`.
#[inline(always)]
fn wbar_block<const C: usize, const L: usize>(
    row: &mut [f64],
    zs: &[f64],
    a: &[f64],
    n_in: usize,
    base: usize,
) {
    let mut acc = [0.0f64; L];
    acc.copy_from_slice(&row[base..base + L]);
    for c in 0..C {
        let ac = &a[c * n_in + base..c * n_in + base + L];
        let zc = zs[c];
        for l in 0..L {
            acc[l] += zc * ac[l];
        }
    }
    row[base..base + L].copy_from_slice(&acc);
}

#[inline]
fn accumulate_wbar_k<const C: usize>(
    gw: &mut [f64],
    adj_z: &[f64],
    a: &[f64],
    n_in: usize,
    n_out: usize,
) {
    for i in 0..n_out {
        let mut zs = [0.0f64; C];
        for c in 0..C {
            zs[c] = adj_z[c * n_out + i];
        }
        let row = &mut gw[i * n_in..(i + 1) * n_in];
        let mut base = 0;
        while base + LANES <= n_in {
            wbar_block::<C, LANES>(row, &zs, a, n_in, base);
            base += LANES;
        }
        if base + 4 <= n_in {
            wbar_block::<C, 4>(row, &zs, a, n_in, base);
            base += 4;
        }
        if base + 2 <= n_in {
            wbar_block::<C, 2>(row, &zs, a, n_in, base);
            base += 2;
        }
        if base < n_in {
            wbar_block::<C, 1>(row, &zs, a, n_in, base);
        }
    }
}

#[inline]
fn accumulate_wbar(gw: &mut [f64], adj_z: &[f64], a: &[f64], n_in: usize, n_out: usize, n_comp: usize) {
    match n_comp {
        2 => accumulate_wbar_k::<2>(gw, adj_z, a, n_in, n_out),
        3 => accumulate_wbar_k::<3>(gw, adj_z, a, n_in, n_out),
        4 => accumulate_wbar_k::<4>(gw, adj_z, a, n_in, n_out),
        5 => accumulate_wbar_k::<5>(gw, adj_z, a, n_in, n_out),
        6 => accumulate_wbar_k::<6>(gw, adj_z, a, n_in, n_out),
        7 => accumulate_wbar_k::<7>(gw, adj_z, a, n_in, n_out),
        _ => {
            for c in 0..n_comp {
                for i in 0..n_out {
                    let zi = adj_z[c * n_out + i];
                    if zi != 0.0 {
                        let row = &mut gw[i * n_in..(i + 1) * n_in];
                        let ac = &a[c * n_in..(c + 1) * n_in];
                        for (o, &v) in row.iter_mut().zip(ac) {
                            *o += zi * v;
                        }
                    }
                }
            }
        }
    }
}

/// `adj_a[c*n_in+j] = Σ_i adj_z[c*n_out+i] · w[i*n_in+j]`, lane-blocked.
#[inline(always)]
fn adj_a_block<const C: usize, const L: usize>(
    adj_a: &mut [f64],
    adj_z: &[f64],
    w: &[f64],
    n_in: usize,
    n_out: usize,
    base: usize,
) {
    let mut acc = [[0.0f64; L]; C];
    for i in 0..n_out {
        let w8 = &w[i * n_in + base..i * n_in + base + L];
        for c in 0..C {
            let zc = adj_z[c * n_out + i];
            for l in 0..L {
                acc[c][l] += zc * w8[l];
            }
        }
    }
    for c in 0..C {
        adj_a[c * n_in + base..c * n_in + base + L].copy_from_slice(&acc[c]);
    }
}

#[inline]
fn propagate_adj_a_k<const C: usize>(
    adj_a: &mut [f64],
    adj_z: &[f64],
    w: &[f64],
    n_in: usize,
    n_out: usize,
) {
    let mut base = 0;
    while base + LANES <= n_in {
        adj_a_block::<C, LANES>(adj_a, adj_z, w, n_in, n_out, base);
        base += LANES;
    }
    if base + 4 <= n_in {
        adj_a_block::<C, 4>(adj_a, adj_z, w, n_in, n_out, base);
        base += 4;
    }
    if base + 2 <= n_in {
        adj_a_block::<C, 2>(adj_a, adj_z, w, n_in, n_out, base);
        base += 2;
    }
    if base < n_in {
        adj_a_block::<C, 1>(adj_a, adj_z, w, n_in, n_out, base);
    }
}

#[inline]
fn propagate_adj_a(adj_a: &mut [f64], adj_z: &[f64], w: &[f64], n_in: usize, n_out: usize, n_comp: usize) {
    match n_comp {
        2 => propagate_adj_a_k::<2>(adj_a, adj_z, w, n_in, n_out),
        3 => propagate_adj_a_k::<3>(adj_a, adj_z, w, n_in, n_out),
        4 => propagate_adj_a_k::<4>(adj_a, adj_z, w, n_in, n_out),
        5 => propagate_adj_a_k::<5>(adj_a, adj_z, w, n_in, n_out),
        6 => propagate_adj_a_k::<6>(adj_a, adj_z, w, n_in, n_out),
        7 => propagate_adj_a_k::<7>(adj_a, adj_z, w, n_in, n_out),
        _ => {
            adj_a[..n_in * n_comp].fill(0.0);
            for c in 0..n_comp {
                let ab = &mut adj_a[c * n_in..(c + 1) * n_in];
                for i in 0..n_out {
                    let zi = adj_z[c * n_out + i];
                    if zi != 0.0 {
                        let row = &w[i * n_in..(i + 1) * n_in];
                        for (o, &v) in ab.iter_mut().zip(row) {
                            *o += zi * v;
                        }
                    }
                }
            }
        }
    }
}

/// tanh activation on a component-major state.
#[inline]
fn activation_forward(d: usize, n_comp: usize, n: usize, z: &[f64], a: &mut [f64]) {
    for i in 0..n {
        a[i] = super::fastmath::tanh(z[i]);
    }
    for comp in 1..=d {
        let zs = &z[comp * n..(comp + 1) * n];
        let (head, tail) = a.split_at_mut(comp * n);
        let values = &head[..n];
        let out = &mut tail[..n];
        for i in 0..n {
            let sp = 1.0 - values[i] * values[i];
            out[i] = sp * zs[i];
        }
    }
    if n_comp == d + 2 {
        let lap = d + 1;
        for i in 0..n {
            let t = a[i];
            let sp = 1.0 - t * t;
            let spp = -2.0 * t * sp;
            let mut g2 = 0.0;
            for comp in 1..=d {
                let zg = z[comp * n + i];
                g2 += zg * zg;
            }
            a[lap * n + i] = sp * z[lap * n + i] + spp * g2;
        }
    }
}

impl DenseNetwork {
    /// Forward pass over `n_comp` components (`d+1` = value and gradient,
    /// `d+2` = value, gradient, and Laplacian), storing every layer state so
    /// a reverse sweep can follow. Returns the output jet as a raw slice
    /// `[u, ∂₁u … ∂_d u (, Δu)]`.
    pub(crate) fn forward_components<'a>(
        &self,
        x: &[f64],
        n_comp: usize,
        scratch: &'a mut JetScratch,
    ) -> &'a [f64] {
        let d = self.input_dim();
        debug_assert_eq!(x.len(), d);
        debug_assert!(n_comp == d + 1 || n_comp == d + 2);
        // Seed the input state: value = x, gradient = identity, laplacian = 0.
        let a0 = &mut scratch.a_states[0];
        a0[..d * n_comp].fill(0.0);
        a0[..d].copy_from_slice(x);
        for k in 0..d {
            a0[(k + 1) * d + k] = 1.0;
        }
        let n_layers = self.layers().len();
        for l in 0..n_layers {
            let spec = self.layers()[l];
            affine_forward_t(
                &scratch.wt[l],
                self.biases(&spec),
                spec.n_in,
                spec.n_out,
                n_comp,
                &scratch.a_states[l],
                &mut scratch.z_states[l],
            );
            if l + 1 < n_layers {
                let (z, a_next) = (&scratch.z_states[l], &mut scratch.a_states[l + 1]);
                activation_forward(d, n_comp, spec.n_out, z, a_next);
            }
        }
        &scratch.z_states[n_layers - 1][..n_comp]
    }

    /// Full-jet forward pass.
    pub fn jet_into(&self, x: &[f64], scratch: &mut JetScratch) -> Jet {
        let d = self.input_dim();
        let out = self.forward_components(x, d + 2, scratch);
        Jet {
            value: out[0],
            gradient: out[1..=d].to_vec(),
            laplacian: out[d + 1],
        }
    }

    /// Reverse sweep: accumulates `∂(seedᵀ·jet)/∂θ` into `grad_acc`.
    ///
    /// `seed` uses the raw jet layout; only the first `n_comp` entries are
    /// read. Must be called right after [`Self::forward_components`] with the
    /// same `n_comp` on the same scratch.
    pub(crate) fn reverse_components(
        &self,
        seed: &[f64],
        n_comp: usize,
        scratch: &mut JetScratch,
        grad_acc: &mut [f64],
    ) {
        let d = self.dim_checked(grad_acc);
        let n_layers = self.layers().len();

        // Adjoint of the output state (single neuron, one entry per component).
        scratch.adj_z[..n_comp].copy_from_slice(&seed[..n_comp]);

        for l in (0..n_layers).rev() {
            let spec = self.layers()[l];
            let (n_in, n_out) = (spec.n_in, spec.n_out);
            let a = &scratch.a_states[l];
            let w = self.weights(&spec);

            // Parameter adjoints: W̄[i,j] += Σ_c z̄[c,i]·a[c,j];  b̄ += z̄ value block.
            {
                let gw = &mut grad_acc[spec.w_off..spec.w_off + n_in * n_out];
                accumulate_wbar(gw, &scratch.adj_z, a, n_in, n_out, n_comp);
                let gb = &mut grad_acc[spec.b_off..spec.b_off + n_out];
                for i in 0..n_out {
                    gb[i] += scratch.adj_z[i];
                }
            }

            if l == 0 {
                break;
            }

            // ā[c] = Wᵀ·z̄[c]
            propagate_adj_a(
                &mut scratch.adj_a,
                &scratch.adj_z,
                w,
                n_in,
                n_out,
                n_comp,
            );

            // Activation adjoint: layer l input is σ(z_states[l-1]).
            let n = n_in;
            let z = &scratch.z_states[l - 1];
            let with_lap = n_comp == d + 2;
            let lap = d + 1;
            for i in 0..n {
                let t = scratch.a_states[l][i];
                let sp = 1.0 - t * t;
                let spp = -2.0 * t * sp;
                let (al, zl) = if with_lap {
                    (scratch.adj_a[lap * n + i], z[lap * n + i])
                } else {
                    (0.0, 0.0)
                };
                let mut g2 = 0.0;
                let mut dot_ag = 0.0;
                for comp in 1..=d {
                    let zg = z[comp * n + i];
                    g2 += zg * zg;
                    dot_ag += scratch.adj_a[comp * n + i] * zg;
                    scratch.adj_z[comp * n + i] =
                        scratch.adj_a[comp * n + i] * sp + al * spp * 2.0 * zg;
                }
                let sppp = sp * (6.0 * t * t - 2.0);
                scratch.adj_z[i] =
                    scratch.adj_a[i] * sp + dot_ag * spp + al * (spp * zl + sppp * g2);
                if with_lap {
                    scratch.adj_z[lap * n + i] = al * sp;
                }
            }
        }
    }

    fn dim_checked(&self, grad_acc: &[f64]) -> usize {
        debug_assert_eq!(grad_acc.len(), self.param_count());
        self.input_dim()
    }
}

impl ScalarField for DenseNetwork {
    fn dim(&self) -> usize {
        self.input_dim()
    }

    fn jet(&self, x: &[f64]) -> Jet {
        let mut scratch = JetScratch::new(self);
        self.jet_into(x, &mut scratch)
    }
}

/// Evaluates value, gradient, and Laplacian of the network at each point.
///
/// Exact for the tanh network class (forward propagation of derivative jets,
/// no finite differencing).
pub fn eval_with_derivatives(net: &DenseNetwork, points: &[Vec<f64>]) -> Result<Vec<Jet>> {
    let d = net.input_dim();
    let mut scratch = JetScratch::new(net);
    let mut jets = Vec::with_capacity(points.len());
    for p in points {
        if p.len() != d {
            return Err(Error::Dimension {
                expected: d,
                got: p.len(),
            });
        }
        jets.push(net.jet_into(p, &mut scratch));
    }
    Ok(jets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Affine network u = 2x - 3y + 1.
    fn affine_net() -> DenseNetwork {
        let mut net = DenseNetwork::init(&[2, 1], 0).unwrap();
        net.params_mut().copy_from_slice(&[2.0, -3.0, 1.0]);
        net
    }

    #[test]
    fn affine_jet_is_exact() {
        let net = affine_net();
        let jet = net.jet(&[1.0, 1.0]);
        assert_eq!(jet.value, 0.0);
        assert_eq!(jet.gradient, vec![2.0, -3.0]);
        assert_eq!(jet.laplacian, 0.0);
    }

    #[test]
    fn tanh_identity_net_matches_closed_form() {
        // u(x) = tanh(x): one hidden neuron with unit weight, unit output.
        let mut net = DenseNetwork::init(&[1, 1, 1], 0).unwrap();
        // params: W0, b0, W1, b1
        net.params_mut().copy_from_slice(&[1.0, 0.0, 1.0, 0.0]);
        let jet = net.jet(&[0.0]);
        assert_relative_eq!(jet.value, 0.0);
        assert_relative_eq!(jet.gradient[0], 1.0);
        assert_relative_eq!(jet.laplacian, 0.0);

        let jet = net.jet(&[0.3]);
        let t: f64 = (0.3f64).tanh();
        assert_relative_eq!(jet.value, t, max_relative = 1e-15);
        assert_relative_eq!(jet.gradient[0], 1.0 - t * t, max_relative = 1e-14);
        assert_relative_eq!(
            jet.laplacian,
            -2.0 * t * (1.0 - t * t),
            max_relative = 1e-13
        );
    }

    #[test]
    fn eval_with_derivatives_rejects_dim_mismatch() {
        let net = affine_net();
        let err = eval_with_derivatives(&net, &[vec![0.0; 3]]).unwrap_err();
        assert!(matches!(err, Error::Dimension { expected: 2, got: 3 }));
    }

    #[test]
    fn affine_laplacian_is_exactly_zero_everywhere() {
        let net = affine_net();
        for p in [[0.0, 0.0], [0.3, -2.0], [1e3, 4.0]] {
            assert_eq!(net.jet(&p).laplacian, 0.0);
        }
    }

    #[test]
    fn gradient_lane_is_identical_with_and_without_laplacian() {
        let net = DenseNetwork::init(&[3, 10, 10, 1], 11).unwrap();
        let mut scratch = JetScratch::new(&net);
        let x = [0.2, -0.4, 0.9];
        let full = net.forward_components(&x, 5, &mut scratch).to_vec();
        let short = net.forward_components(&x, 4, &mut scratch).to_vec();
        assert_eq!(&full[..4], &short[..]);
    }
}
