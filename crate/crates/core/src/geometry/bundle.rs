//! Fixed Monte Carlo collocation sets for one run.

use std::io::Write;

use super::{InterfaceDescriptor, PointCloud, Region};
use crate::error::Result;
use crate::rng::{derive_seed, stream};

/// Sample sizes for one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SampleSizes {
    /// Interior points per subdomain.
    pub interior: usize,
    /// Outer-boundary points per subdomain.
    pub boundary: usize,
    /// Shared interface points.
    pub interface: usize,
}

/// The fixed collocation sets of a run: per-subdomain interiors and outer
/// boundaries plus one shared interface set with normals.
///
/// The interface set is shared verbatim by every scheme so that traces stored
/// at its points stay aligned index-wise across outer iterations.
#[derive(Debug, Clone)]
pub struct SampleBundle {
    pub interior: Vec<PointCloud>,
    pub outer_boundary: Vec<PointCloud>,
    pub interface: PointCloud,
    /// Flat `n·d` unit normals, pointing out of the interface orientation
    /// subdomain.
    pub interface_normals: Vec<f64>,
    pub labels: Vec<String>,
}

impl SampleBundle {
    /// Draws all sets for the given partition with sub-seeds derived from
    /// `seed`.
    pub fn draw(
        regions: &[Region],
        interface: &InterfaceDescriptor,
        sizes: &SampleSizes,
        seed: u64,
    ) -> Result<Self> {
        let mut interior = Vec::with_capacity(regions.len());
        let mut outer_boundary = Vec::with_capacity(regions.len());
        let mut labels = Vec::with_capacity(regions.len());
        for (i, r) in regions.iter().enumerate() {
            interior.push(r.sample_interior(
                sizes.interior,
                derive_seed(seed, &[stream::SAMPLE_INTERIOR, i as u64]),
            )?);
            outer_boundary.push(r.sample_boundary(
                true,
                sizes.boundary,
                derive_seed(seed, &[stream::SAMPLE_BOUNDARY, i as u64]),
            )?);
            labels.push(r.label.clone());
        }
        let (iface, normals) = interface.sample(
            sizes.interface,
            derive_seed(seed, &[stream::SAMPLE_INTERFACE]),
        );
        Ok(Self {
            interior,
            outer_boundary,
            interface: iface,
            interface_normals: normals,
            labels,
        })
    }

    /// CSV audit dump: one row per point with subdomain label, set label,
    /// coordinates, and (for interface rows) normal components.
    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        let d = self.interface.dim;
        write!(w, "subdomain,set")?;
        for k in 0..d {
            write!(w, ",x{k}")?;
        }
        for k in 0..d {
            write!(w, ",n{k}")?;
        }
        writeln!(w)?;
        let mut row = |label: &str, set: &str, p: &[f64], n: Option<&[f64]>| -> Result<()> {
            write!(w, "{label},{set}")?;
            for x in p {
                write!(w, ",{x}")?;
            }
            match n {
                Some(n) => {
                    for v in n {
                        write!(w, ",{v}")?;
                    }
                }
                None => {
                    for _ in 0..d {
                        write!(w, ",")?;
                    }
                }
            }
            writeln!(w)?;
            Ok(())
        };
        for (i, pc) in self.interior.iter().enumerate() {
            for p in pc.iter() {
                row(&self.labels[i], "interior", p, None)?;
            }
        }
        for (i, pc) in self.outer_boundary.iter().enumerate() {
            for p in pc.iter() {
                row(&self.labels[i], "boundary", p, None)?;
            }
        }
        for (i, p) in self.interface.iter().enumerate() {
            row(
                "shared",
                "interface",
                p,
                Some(&self.interface_normals[i * d..(i + 1) * d]),
            )?;
        }
        Ok(())
    }
}
