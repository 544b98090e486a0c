//! The named training losses.
//!
//! Each operation exists in two forms: a `*_build` constructor that assembles
//! the [`CompositeLoss`] (used verbatim by subproblem training), and a direct
//! evaluation wrapper over any [`ScalarField`] so analytic solutions can be
//! plugged in as oracles.
//!
//! Source-term slices (`f`, `h`, `q`, frozen gradients) are the function
//! values at the batch points, aligned index-wise.
//!
//! Composite losses share a canonical term order (own interior, neighbor
//! compensation, interface, boundary penalties) so neutral-parameter
//! reductions between them hold bit-for-bit.

use super::{CompositeLoss, FrozenFieldCache, TermKind};
use crate::diffnet::ScalarField;
use crate::error::{Error, Result};
use crate::geometry::PointCloud;

fn check_len(what: &str, data: usize, points: usize) -> Result<()> {
    if data != points {
        return Err(Error::Config(format!(
            "{what}: data length {data} does not match sample count {points}"
        )));
    }
    Ok(())
}

/// `mean |c·Δu + f|²` over an interior batch.
pub fn residual_interior_build(batch: &PointCloud, source: &[f64], c: f64) -> Result<CompositeLoss> {
    check_len("residual_interior", source.len(), batch.len())?;
    let mut loss = CompositeLoss::new();
    let set = loss.add_set(batch.clone());
    loss.add_term(
        set,
        1.0,
        TermKind::Residual {
            coeff: c,
            source: source.to_vec(),
        },
    );
    Ok(loss)
}

pub fn residual_interior_loss(
    field: &dyn ScalarField,
    batch: &PointCloud,
    source: &[f64],
    c: f64,
) -> Result<f64> {
    residual_interior_build(batch, source, c)?.value_for_field(field, None)
}

/// `mean (c/2·|∇u|² − f·u)` over an interior batch.
pub fn ritz_interior_build(batch: &PointCloud, source: &[f64], c: f64) -> Result<CompositeLoss> {
    check_len("ritz_interior", source.len(), batch.len())?;
    let mut loss = CompositeLoss::new();
    let set = loss.add_set(batch.clone());
    loss.add_term(
        set,
        1.0,
        TermKind::Volume {
            grad_coeff: c,
            source_coeff: -1.0,
            source: source.to_vec(),
            cross: None,
        },
    );
    Ok(loss)
}

pub fn ritz_interior_loss(
    field: &dyn ScalarField,
    batch: &PointCloud,
    source: &[f64],
    c: f64,
) -> Result<f64> {
    ritz_interior_build(batch, source, c)?.value_for_field(field, None)
}

/// `mean |u|²` over a boundary batch.
pub fn boundary_penalty_build(batch: &PointCloud) -> Result<CompositeLoss> {
    let mut loss = CompositeLoss::new();
    let target = vec![0.0; batch.len()];
    let set = loss.add_set(batch.clone());
    loss.add_term(set, 1.0, TermKind::ValueMismatch { target });
    Ok(loss)
}

pub fn boundary_penalty_loss(field: &dyn ScalarField, batch: &PointCloud) -> Result<f64> {
    boundary_penalty_build(batch)?.value_for_field(field, None)
}

/// `mean |u − h|²` over an interface batch.
pub fn dirichlet_interface_build(batch: &PointCloud, h: &[f64]) -> Result<CompositeLoss> {
    check_len("dirichlet_interface", h.len(), batch.len())?;
    let mut loss = CompositeLoss::new();
    let set = loss.add_set(batch.clone());
    loss.add_term(set, 1.0, TermKind::ValueMismatch { target: h.to_vec() });
    Ok(loss)
}

pub fn dirichlet_interface_loss(
    field: &dyn ScalarField,
    batch: &PointCloud,
    h: &[f64],
) -> Result<f64> {
    dirichlet_interface_build(batch, h)?.value_for_field(field, None)
}

/// `mean |∇u·n − h|²` over an interface batch with per-point normals.
pub fn neumann_penalty_build(
    batch: &PointCloud,
    normals: &[f64],
    h: &[f64],
) -> Result<CompositeLoss> {
    robin_penalty_build(batch, normals, h, 0.0)
}

pub fn neumann_penalty_loss(
    field: &dyn ScalarField,
    batch: &PointCloud,
    normals: &[f64],
    h: &[f64],
) -> Result<f64> {
    neumann_penalty_build(batch, normals, h)?.value_for_field(field, None)
}

/// `mean |κ·u + ∇u·n − h|²` over an interface batch.
pub fn robin_penalty_build(
    batch: &PointCloud,
    normals: &[f64],
    h: &[f64],
    kappa: f64,
) -> Result<CompositeLoss> {
    check_len("robin_penalty targets", h.len(), batch.len())?;
    check_len("robin_penalty normals", normals.len(), batch.len() * batch.dim)?;
    let mut loss = CompositeLoss::new();
    let set = loss.add_set(batch.clone());
    loss.add_term(
        set,
        1.0,
        TermKind::FluxMismatch {
            kappa,
            normals: normals.to_vec(),
            target: h.to_vec(),
        },
    );
    Ok(loss)
}

pub fn robin_penalty_loss(
    field: &dyn ScalarField,
    batch: &PointCloud,
    normals: &[f64],
    h: &[f64],
    kappa: f64,
) -> Result<f64> {
    robin_penalty_build(batch, normals, h, kappa)?.value_for_field(field, None)
}

/// `mean (κ/2·u² − h·u)`: the variational Robin interface term.
pub fn ritz_robin_boundary_build(
    batch: &PointCloud,
    h: &[f64],
    kappa: f64,
) -> Result<CompositeLoss> {
    check_len("ritz_robin_boundary", h.len(), batch.len())?;
    let mut loss = CompositeLoss::new();
    let set = loss.add_set(batch.clone());
    loss.add_term(
        set,
        1.0,
        TermKind::ValueQuad {
            quad: kappa,
            linear: h.iter().map(|v| -v).collect(),
        },
    );
    Ok(loss)
}

pub fn ritz_robin_boundary_term(
    field: &dyn ScalarField,
    batch: &PointCloud,
    h: &[f64],
    kappa: f64,
) -> Result<f64> {
    ritz_robin_boundary_build(batch, h, kappa)?.value_for_field(field, None)
}

/// Boundary batches with their Dirichlet targets (zeros for homogeneous
/// problems, exact traces otherwise).
pub type BoundaryBatch<'a> = (&'a PointCloud, &'a [f64]);

/// The compensated Neumann subproblem loss:
///
/// `mean_{Ω₂}(c₂/2·|∇u|² − f·u) + mean_{Ω₁}(c₁·∇û₁·∇u − f·u)
///  + mean_Γ(q·u) + β·Σ mean_D |u − g|²`
///
/// The frozen Dirichlet-side gradient enters through `neighbor_cache`, so no
/// interface flux is ever evaluated.
#[allow(clippy::too_many_arguments)]
pub fn compensated_neumann_build(
    own_batch: &PointCloud,
    own_source: &[f64],
    c_own: f64,
    neighbor_batch: &PointCloud,
    neighbor_cache: &FrozenFieldCache,
    neighbor_source: &[f64],
    c_neighbor: f64,
    interface_batch: &PointCloud,
    q: &[f64],
    beta: f64,
    boundaries: &[BoundaryBatch<'_>],
) -> Result<CompositeLoss> {
    check_len("compensated own source", own_source.len(), own_batch.len())?;
    check_len(
        "compensated neighbor cache",
        neighbor_cache.len(),
        neighbor_batch.len(),
    )?;
    check_len(
        "compensated neighbor source",
        neighbor_source.len(),
        neighbor_batch.len(),
    )?;
    check_len("compensated q", q.len(), interface_batch.len())?;
    let mut loss = CompositeLoss::new();
    let own = loss.add_set(own_batch.clone());
    loss.add_term(
        own,
        1.0,
        TermKind::Volume {
            grad_coeff: c_own,
            source_coeff: -1.0,
            source: own_source.to_vec(),
            cross: None,
        },
    );
    let nb = loss.add_set(neighbor_batch.clone());
    loss.add_term(
        nb,
        1.0,
        TermKind::Volume {
            grad_coeff: 0.0,
            source_coeff: -1.0,
            source: neighbor_source.to_vec(),
            cross: Some(neighbor_cache.gradients.iter().map(|g| c_neighbor * g).collect()),
        },
    );
    let gamma = loss.add_set(interface_batch.clone());
    loss.add_term(
        gamma,
        1.0,
        TermKind::ValueQuad {
            quad: 0.0,
            linear: q.to_vec(),
        },
    );
    for (points, targets) in boundaries {
        check_len("compensated boundary targets", targets.len(), points.len())?;
        let set = loss.add_set((*points).clone());
        loss.add_term(
            set,
            beta,
            TermKind::ValueMismatch {
                target: targets.to_vec(),
            },
        );
    }
    Ok(loss)
}

#[allow(clippy::too_many_arguments)]
pub fn compensated_neumann_loss(
    field: &dyn ScalarField,
    own_batch: &PointCloud,
    own_source: &[f64],
    c_own: f64,
    neighbor_batch: &PointCloud,
    neighbor_cache: &FrozenFieldCache,
    neighbor_source: &[f64],
    c_neighbor: f64,
    interface_batch: &PointCloud,
    q: &[f64],
    beta: f64,
    boundaries: &[BoundaryBatch<'_>],
) -> Result<f64> {
    compensated_neumann_build(
        own_batch,
        own_source,
        c_own,
        neighbor_batch,
        neighbor_cache,
        neighbor_source,
        c_neighbor,
        interface_batch,
        q,
        beta,
        boundaries,
    )?
    .value_for_field(field, None)
}

/// The Neumann-Neumann corrector loss for ψ̂_i:
///
/// `mean_{Ω_i}(1/2·|∇ψ|² + f·ψ − ∇û_i·∇ψ) + mean_{Ω_{3−i}}(f·ψ − ∇û_{3−i}·∇ψ)
///  + β·Σ mean_D |ψ|²`
#[allow(clippy::too_many_arguments)]
pub fn nn_corrector_build(
    own_batch: &PointCloud,
    own_source: &[f64],
    own_cache: &FrozenFieldCache,
    neighbor_batch: &PointCloud,
    neighbor_source: &[f64],
    neighbor_cache: &FrozenFieldCache,
    beta: f64,
    boundaries: &[&PointCloud],
) -> Result<CompositeLoss> {
    check_len("nn own source", own_source.len(), own_batch.len())?;
    check_len("nn own cache", own_cache.len(), own_batch.len())?;
    check_len("nn neighbor source", neighbor_source.len(), neighbor_batch.len())?;
    check_len("nn neighbor cache", neighbor_cache.len(), neighbor_batch.len())?;
    let mut loss = CompositeLoss::new();
    let own = loss.add_set(own_batch.clone());
    loss.add_term(
        own,
        1.0,
        TermKind::Volume {
            grad_coeff: 1.0,
            source_coeff: 1.0,
            source: own_source.to_vec(),
            cross: Some(own_cache.gradients.iter().map(|g| -g).collect()),
        },
    );
    let nb = loss.add_set(neighbor_batch.clone());
    loss.add_term(
        nb,
        1.0,
        TermKind::Volume {
            grad_coeff: 0.0,
            source_coeff: 1.0,
            source: neighbor_source.to_vec(),
            cross: Some(neighbor_cache.gradients.iter().map(|g| -g).collect()),
        },
    );
    for points in boundaries {
        let target = vec![0.0; points.len()];
        let set = loss.add_set((*points).clone());
        loss.add_term(set, beta, TermKind::ValueMismatch { target });
    }
    Ok(loss)
}

#[allow(clippy::too_many_arguments)]
pub fn nn_corrector_loss(
    field: &dyn ScalarField,
    own_batch: &PointCloud,
    own_source: &[f64],
    own_cache: &FrozenFieldCache,
    neighbor_batch: &PointCloud,
    neighbor_source: &[f64],
    neighbor_cache: &FrozenFieldCache,
    beta: f64,
    boundaries: &[&PointCloud],
) -> Result<f64> {
    nn_corrector_build(
        own_batch,
        own_source,
        own_cache,
        neighbor_batch,
        neighbor_source,
        neighbor_cache,
        beta,
        boundaries,
    )?
    .value_for_field(field, None)
}

/// The Dirichlet-Dirichlet Neumann-side loss for û_i:
///
/// `mean_{Ω_i}(1/2·|∇u|² − f·u + ρ·(Σ_j ∇ψ̂_i^{[j]})·∇u)
///  + ρ·mean_{Ω_{3−i}}((Σ_j ∇ψ̂_{3−i}^{[j]})·∇u) − mean_Γ(h·u)
///  + β·mean_{D_i} |u − g|²`
///
/// `own_correctors`/`neighbor_correctors` hold the accumulated corrector
/// gradient sums (flat `n·d`); `None` for an empty corrector window.
#[allow(clippy::too_many_arguments)]
pub fn dd_neumann_build(
    own_batch: &PointCloud,
    own_source: &[f64],
    own_correctors: Option<&[f64]>,
    neighbor_batch: &PointCloud,
    neighbor_correctors: Option<&[f64]>,
    rho: f64,
    interface_batch: &PointCloud,
    h: &[f64],
    beta: f64,
    own_boundary: BoundaryBatch<'_>,
) -> Result<CompositeLoss> {
    check_len("dd own source", own_source.len(), own_batch.len())?;
    check_len("dd interface h", h.len(), interface_batch.len())?;
    let mut loss = CompositeLoss::new();
    let own = loss.add_set(own_batch.clone());
    loss.add_term(
        own,
        1.0,
        TermKind::Volume {
            grad_coeff: 1.0,
            source_coeff: -1.0,
            source: own_source.to_vec(),
            cross: own_correctors.map(|g| g.iter().map(|v| rho * v).collect()),
        },
    );
    if let Some(nb_corr) = neighbor_correctors {
        check_len("dd neighbor correctors", nb_corr.len(), neighbor_batch.len() * neighbor_batch.dim)?;
        let nb = loss.add_set(neighbor_batch.clone());
        loss.add_term(
            nb,
            1.0,
            TermKind::Volume {
                grad_coeff: 0.0,
                source_coeff: 0.0,
                source: vec![0.0; neighbor_batch.len()],
                cross: Some(nb_corr.iter().map(|v| rho * v).collect()),
            },
        );
    }
    let gamma = loss.add_set(interface_batch.clone());
    loss.add_term(
        gamma,
        1.0,
        TermKind::ValueQuad {
            quad: 0.0,
            linear: h.iter().map(|v| -v).collect(),
        },
    );
    let (points, targets) = own_boundary;
    check_len("dd boundary targets", targets.len(), points.len())?;
    let set = loss.add_set(points.clone());
    loss.add_term(
        set,
        beta,
        TermKind::ValueMismatch {
            target: targets.to_vec(),
        },
    );
    Ok(loss)
}

#[allow(clippy::too_many_arguments)]
pub fn dd_neumann_loss(
    field: &dyn ScalarField,
    own_batch: &PointCloud,
    own_source: &[f64],
    own_correctors: Option<&[f64]>,
    neighbor_batch: &PointCloud,
    neighbor_correctors: Option<&[f64]>,
    rho: f64,
    interface_batch: &PointCloud,
    h: &[f64],
    beta: f64,
    own_boundary: BoundaryBatch<'_>,
) -> Result<f64> {
    dd_neumann_build(
        own_batch,
        own_source,
        own_correctors,
        neighbor_batch,
        neighbor_correctors,
        rho,
        interface_batch,
        h,
        beta,
        own_boundary,
    )?
    .value_for_field(field, None)
}

/// The Dirichlet-Dirichlet corrector loss for ψ̂_i:
///
/// `mean_{Ω_i}|Δψ|² + β·(mean_{D_i}|ψ|² + mean_Γ|ψ − (û₁ − û₂)|²)`
pub fn dd_corrector_build(
    own_batch: &PointCloud,
    interface_batch: &PointCloud,
    jump: &[f64],
    beta: f64,
    own_boundary: &PointCloud,
) -> Result<CompositeLoss> {
    check_len("dd corrector jump", jump.len(), interface_batch.len())?;
    let mut loss = CompositeLoss::new();
    let own = loss.add_set(own_batch.clone());
    loss.add_term(
        own,
        1.0,
        TermKind::Residual {
            coeff: 1.0,
            source: vec![0.0; own_batch.len()],
        },
    );
    let bset = loss.add_set(own_boundary.clone());
    loss.add_term(
        bset,
        beta,
        TermKind::ValueMismatch {
            target: vec![0.0; own_boundary.len()],
        },
    );
    let gamma = loss.add_set(interface_batch.clone());
    loss.add_term(
        gamma,
        beta,
        TermKind::ValueMismatch {
            target: jump.to_vec(),
        },
    );
    Ok(loss)
}

pub fn dd_corrector_loss(
    field: &dyn ScalarField,
    own_batch: &PointCloud,
    interface_batch: &PointCloud,
    jump: &[f64],
    beta: f64,
    own_boundary: &PointCloud,
) -> Result<f64> {
    dd_corrector_build(own_batch, interface_batch, jump, beta, own_boundary)?
        .value_for_field(field, None)
}

/// The compensated second Robin subproblem loss:
///
/// `mean_{Ω₂}(1/2·|∇u|² − f·u) + mean_{Ω₁}(∇û₁·∇u − f·u)
///  − κ₂·mean_Γ(û₁·u − 1/2·u²) + β·Σ mean_D |u − g|²`
#[allow(clippy::too_many_arguments)]
pub fn rr_compensated_build(
    own_batch: &PointCloud,
    own_source: &[f64],
    neighbor_batch: &PointCloud,
    neighbor_cache: &FrozenFieldCache,
    neighbor_source: &[f64],
    interface_batch: &PointCloud,
    u1_at_interface: &[f64],
    kappa2: f64,
    beta: f64,
    boundaries: &[BoundaryBatch<'_>],
) -> Result<CompositeLoss> {
    check_len("rr own source", own_source.len(), own_batch.len())?;
    check_len("rr neighbor cache", neighbor_cache.len(), neighbor_batch.len())?;
    check_len("rr neighbor source", neighbor_source.len(), neighbor_batch.len())?;
    check_len("rr interface trace", u1_at_interface.len(), interface_batch.len())?;
    let mut loss = CompositeLoss::new();
    let own = loss.add_set(own_batch.clone());
    loss.add_term(
        own,
        1.0,
        TermKind::Volume {
            grad_coeff: 1.0,
            source_coeff: -1.0,
            source: own_source.to_vec(),
            cross: None,
        },
    );
    let nb = loss.add_set(neighbor_batch.clone());
    loss.add_term(
        nb,
        1.0,
        TermKind::Volume {
            grad_coeff: 0.0,
            source_coeff: -1.0,
            source: neighbor_source.to_vec(),
            cross: Some(neighbor_cache.gradients.clone()),
        },
    );
    // −κ₂(û₁·u − u²/2) = κ₂/2·u² − κ₂·û₁·u
    let gamma = loss.add_set(interface_batch.clone());
    loss.add_term(
        gamma,
        1.0,
        TermKind::ValueQuad {
            quad: kappa2,
            linear: u1_at_interface.iter().map(|v| -kappa2 * v).collect(),
        },
    );
    for (points, targets) in boundaries {
        check_len("rr boundary targets", targets.len(), points.len())?;
        let set = loss.add_set((*points).clone());
        loss.add_term(
            set,
            beta,
            TermKind::ValueMismatch {
                target: targets.to_vec(),
            },
        );
    }
    Ok(loss)
}

#[allow(clippy::too_many_arguments)]
pub fn rr_compensated_loss(
    field: &dyn ScalarField,
    own_batch: &PointCloud,
    own_source: &[f64],
    neighbor_batch: &PointCloud,
    neighbor_cache: &FrozenFieldCache,
    neighbor_source: &[f64],
    interface_batch: &PointCloud,
    u1_at_interface: &[f64],
    kappa2: f64,
    beta: f64,
    boundaries: &[BoundaryBatch<'_>],
) -> Result<f64> {
    rr_compensated_build(
        own_batch,
        own_source,
        neighbor_batch,
        neighbor_cache,
        neighbor_source,
        interface_batch,
        u1_at_interface,
        kappa2,
        beta,
        boundaries,
    )?
    .value_for_field(field, None)
}
