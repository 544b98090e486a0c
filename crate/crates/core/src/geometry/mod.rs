//! Regions, interfaces, normals, and seed-controlled uniform Monte Carlo
//! samplers for every partition used by the benchmark problems.
//!
//! All geometry values are immutable after construction; samplers take an
//! explicit seed and are pure functions of it.

mod bundle;

pub use bundle::SampleBundle;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Flat row-major point storage.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PointCloud {
    pub dim: usize,
    coords: Vec<f64>,
}

impl PointCloud {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            coords: Vec::new(),
        }
    }

    pub fn with_capacity(dim: usize, n: usize) -> Self {
        Self {
            dim,
            coords: Vec::with_capacity(dim * n),
        }
    }

    pub fn from_rows(dim: usize, rows: &[Vec<f64>]) -> Self {
        let mut pc = Self::with_capacity(dim, rows.len());
        for r in rows {
            pc.push(r);
        }
        pc
    }

    pub fn push(&mut self, p: &[f64]) {
        debug_assert_eq!(p.len(), self.dim);
        self.coords.extend_from_slice(p);
    }

    pub fn len(&self) -> usize {
        if self.dim == 0 {
            0
        } else {
            self.coords.len() / self.dim
        }
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }
}

/// Axis-aligned box.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl AxisBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        assert_eq!(lo.len(), hi.len());
        assert!(lo.iter().zip(&hi).all(|(a, b)| a < b), "degenerate box");
        Self { lo, hi }
    }

    pub fn unit_square() -> Self {
        Self::new(vec![0.0, 0.0], vec![1.0, 1.0])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn measure(&self) -> f64 {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| b - a)
            .product()
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(x, (lo, hi))| *x >= *lo && *x <= *hi)
    }

    fn sample_into(&self, rng: &mut ChaCha8Rng, out: &mut Vec<f64>) {
        for (lo, hi) in self.lo.iter().zip(&self.hi) {
            out.push(rng.random_range(*lo..*hi));
        }
    }

    /// Smallest box containing both.
    pub fn hull(&self, other: &AxisBox) -> AxisBox {
        AxisBox {
            lo: self
                .lo
                .iter()
                .zip(&other.lo)
                .map(|(a, b)| a.min(*b))
                .collect(),
            hi: self
                .hi
                .iter()
                .zip(&other.hi)
                .map(|(a, b)| a.max(*b))
                .collect(),
        }
    }
}

/// A (d-1)-dimensional axis-aligned face, used for boundary sampling.
#[derive(Debug, Clone)]
pub struct Facet {
    pub fixed_dim: usize,
    pub fixed_value: f64,
    /// Ranges for every dimension; the fixed one is ignored.
    pub ranges: Vec<(f64, f64)>,
}

impl Facet {
    pub fn measure(&self) -> f64 {
        self.ranges
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != self.fixed_dim)
            .map(|(_, (a, b))| b - a)
            .product()
    }

    fn sample_into(&self, rng: &mut ChaCha8Rng, out: &mut Vec<f64>) {
        for (k, (a, b)) in self.ranges.iter().enumerate() {
            if k == self.fixed_dim {
                out.push(self.fixed_value);
            } else {
                out.push(rng.random_range(*a..*b));
            }
        }
    }
}

/// All faces of a box except those listed in `skip` as `(dim, value)` pairs.
pub fn box_facets(b: &AxisBox, skip: &[(usize, f64)]) -> Vec<Facet> {
    let mut facets = Vec::new();
    let ranges: Vec<(f64, f64)> = b.lo.iter().zip(&b.hi).map(|(a, c)| (*a, *c)).collect();
    for k in 0..b.dim() {
        for v in [b.lo[k], b.hi[k]] {
            if skip.iter().any(|&(sd, sv)| sd == k && (sv - v).abs() < 1e-12) {
                continue;
            }
            facets.push(Facet {
                fixed_dim: k,
                fixed_value: v,
                ranges: ranges.clone(),
            });
        }
    }
    facets
}

/// Interface abscissa of the zigzag curve at height `y ∈ [0, 1]`.
///
/// Piecewise linear with breakpoints every 0.05 in `y`, oscillating through
/// x = 0.5 and staying within [0.45, 0.55].
pub fn zigzag_x(y: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&y) {
        return Err(Error::Geometry(format!("zigzag_x: y={y} outside [0,1]")));
    }
    let f20 = (20.0 * y).floor();
    let m20 = (f20 as i64).rem_euclid(2) as f64;
    let m10 = ((10.0 * y).floor() as i64).rem_euclid(2) as f64;
    let a = 0.05 * (-1.0 + 2.0 * m20);
    let b = -0.05 * m20;
    let c = -2.0 * m10 + 1.0;
    Ok(c * (a * (20.0 * y - f20) + b) + 0.5)
}

#[derive(Debug, Clone)]
enum RegionShape {
    /// Union of disjoint axis-aligned boxes.
    Boxes(Vec<AxisBox>),
    /// Side of the zigzag curve inside the unit square.
    ZigzagSide { left: bool },
}

/// A subdomain: indicator, measure, bounding box, and its boundary facets.
#[derive(Debug, Clone)]
pub struct Region {
    pub label: String,
    shape: RegionShape,
    outer_facets: Vec<Facet>,
    interface_facets: Vec<Facet>,
    measure: f64,
    bounding: AxisBox,
}

impl Region {
    pub fn from_boxes(label: impl Into<String>, boxes: Vec<AxisBox>, outer: Vec<Facet>) -> Self {
        assert!(!boxes.is_empty());
        let measure = boxes.iter().map(|b| b.measure()).sum();
        let bounding = boxes
            .iter()
            .skip(1)
            .fold(boxes[0].clone(), |acc, b| acc.hull(b));
        Self {
            label: label.into(),
            shape: RegionShape::Boxes(boxes),
            outer_facets: outer,
            interface_facets: Vec::new(),
            measure,
            bounding,
        }
    }

    pub fn with_interface_facets(mut self, facets: Vec<Facet>) -> Self {
        self.interface_facets = facets;
        self
    }

    /// Left or right side of the zigzag curve in the unit square.
    pub fn zigzag_side(label: impl Into<String>, left: bool, outer: Vec<Facet>) -> Self {
        Self {
            label: label.into(),
            shape: RegionShape::ZigzagSide { left },
            outer_facets: outer,
            interface_facets: Vec::new(),
            // The curve oscillates symmetrically about x = 0.5, so each side
            // has Lebesgue measure exactly 1/2.
            measure: 0.5,
            bounding: AxisBox::unit_square(),
        }
    }

    pub fn dim(&self) -> usize {
        self.bounding.dim()
    }

    pub fn measure(&self) -> f64 {
        self.measure
    }

    pub fn bounding_box(&self) -> &AxisBox {
        &self.bounding
    }

    pub fn outer_facets(&self) -> &[Facet] {
        &self.outer_facets
    }

    /// Exact membership per the region descriptor.
    pub fn contains(&self, p: &[f64]) -> bool {
        if p.len() != self.dim() {
            return false;
        }
        match &self.shape {
            RegionShape::Boxes(boxes) => boxes.iter().any(|b| b.contains(p)),
            RegionShape::ZigzagSide { left } => {
                if !AxisBox::unit_square().contains(p) {
                    return false;
                }
                let zx = zigzag_x(p[1]).expect("y within unit square");
                if *left {
                    p[0] <= zx
                } else {
                    p[0] > zx
                }
            }
        }
    }

    /// `n` i.i.d. uniform points in the region; deterministic per seed.
    ///
    /// Box unions sample a box by measure then a point within; zigzag sides
    /// use rejection from the unit square.
    pub fn sample_interior(&self, n: usize, seed: u64) -> Result<PointCloud> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pc = PointCloud::with_capacity(self.dim(), n);
        match &self.shape {
            RegionShape::Boxes(boxes) => {
                let total: f64 = self.measure;
                for _ in 0..n {
                    let mut u = rng.random_range(0.0..total);
                    let mut chosen = boxes.len() - 1;
                    for (i, b) in boxes.iter().enumerate() {
                        let m = b.measure();
                        if u < m {
                            chosen = i;
                            break;
                        }
                        u -= m;
                    }
                    boxes[chosen].sample_into(&mut rng, &mut pc.coords);
                }
            }
            RegionShape::ZigzagSide { .. } => {
                let mut accepted = 0usize;
                let mut attempts = 0usize;
                let mut buf = Vec::with_capacity(self.dim());
                while accepted < n {
                    buf.clear();
                    self.bounding.sample_into(&mut rng, &mut buf);
                    attempts += 1;
                    if self.contains(&buf) {
                        pc.push(&buf);
                        accepted += 1;
                    }
                    if attempts > 1000 && (accepted as f64) < 1e-3 * attempts as f64 {
                        return Err(Error::Geometry(format!(
                            "rejection acceptance ratio below 1e-3 for region {}",
                            self.label
                        )));
                    }
                }
            }
        }
        Ok(pc)
    }

    /// `n` points uniform by surface measure over the selected boundary part.
    ///
    /// `exclude_interface = true` samples `∂Ω_i \ Γ` (the outer facets);
    /// `false` additionally includes stored interface facets.
    pub fn sample_boundary(&self, exclude_interface: bool, n: usize, seed: u64) -> Result<PointCloud> {
        let mut facets: Vec<&Facet> = self.outer_facets.iter().collect();
        if !exclude_interface {
            if self.interface_facets.is_empty()
                && matches!(self.shape, RegionShape::ZigzagSide { .. })
            {
                return Err(Error::Geometry(
                    "zigzag interface is not facet-representable; sample it via its InterfaceDescriptor".into(),
                ));
            }
            facets.extend(self.interface_facets.iter());
        }
        if facets.is_empty() {
            return Err(Error::Geometry(format!(
                "region {} has no boundary facets to sample",
                self.label
            )));
        }
        let total: f64 = facets.iter().map(|f| f.measure()).sum();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pc = PointCloud::with_capacity(self.dim(), n);
        for _ in 0..n {
            let mut u = rng.random_range(0.0..total);
            let mut chosen = facets.len() - 1;
            for (i, f) in facets.iter().enumerate() {
                let m = f.measure();
                if u < m {
                    chosen = i;
                    break;
                }
                u -= m;
            }
            facets[chosen].sample_into(&mut rng, &mut pc.coords);
        }
        Ok(pc)
    }
}

/// A straight piece of a 2-D interface with its unit normal.
#[derive(Debug, Clone)]
pub struct Segment2D {
    pub a: [f64; 2],
    pub b: [f64; 2],
    pub normal: [f64; 2],
}

impl Segment2D {
    pub fn length(&self) -> f64 {
        let dx = self.b[0] - self.a[0];
        let dy = self.b[1] - self.a[1];
        (dx * dx + dy * dy).sqrt()
    }
}

#[derive(Debug, Clone)]
enum InterfaceShape {
    /// Union of straight segments in 2-D (vertical line, zigzag, cross).
    Polyline(Vec<Segment2D>),
    /// Axis-aligned hyperplane piece in d dimensions; the normal is the
    /// coordinate unit vector of `fixed_dim`.
    Hyperplane {
        fixed_dim: usize,
        fixed_value: f64,
        ranges: Vec<(f64, f64)>,
        sign: f64,
    },
}

/// The interface Γ between two subdomain roles, with per-point unit normals
/// pointing out of the orientation subdomain.
#[derive(Debug, Clone)]
pub struct InterfaceDescriptor {
    /// Label of the subdomain the stored normals point out of.
    pub orientation: String,
    shape: InterfaceShape,
    measure: f64,
}

impl InterfaceDescriptor {
    pub fn polyline(orientation: impl Into<String>, segments: Vec<Segment2D>) -> Self {
        let measure = segments.iter().map(|s| s.length()).sum();
        Self {
            orientation: orientation.into(),
            shape: InterfaceShape::Polyline(segments),
            measure,
        }
    }

    /// Vertical segment x = `x` for y in `[y0, y1]`, normal `sign`·(1, 0).
    pub fn vertical_segment(orientation: impl Into<String>, x: f64, y0: f64, y1: f64, sign: f64) -> Self {
        Self::polyline(
            orientation,
            vec![Segment2D {
                a: [x, y0],
                b: [x, y1],
                normal: [sign, 0.0],
            }],
        )
    }

    /// The zigzag interface polyline, normals pointing out of the left side.
    pub fn zigzag(orientation: impl Into<String>) -> Self {
        let mut segments = Vec::with_capacity(20);
        for j in 0..20 {
            let y0 = j as f64 / 20.0;
            let y1 = (j + 1) as f64 / 20.0;
            let x0 = zigzag_x(y0).unwrap();
            let x1 = zigzag_x(y1).unwrap();
            let dx = x1 - x0;
            let dy = y1 - y0;
            let len = (dx * dx + dy * dy).sqrt();
            segments.push(Segment2D {
                a: [x0, y0],
                b: [x1, y1],
                normal: [dy / len, -dx / len],
            });
        }
        Self::polyline(orientation, segments)
    }

    /// The red-black cross: interior half-edges of the unit square, normals
    /// pointing out of the red set (upper-left and lower-right quarters).
    pub fn red_black_cross(orientation: impl Into<String>) -> Self {
        Self::polyline(
            orientation,
            vec![
                Segment2D {
                    a: [0.5, 0.5],
                    b: [0.5, 1.0],
                    normal: [1.0, 0.0],
                },
                Segment2D {
                    a: [0.5, 0.0],
                    b: [0.5, 0.5],
                    normal: [-1.0, 0.0],
                },
                Segment2D {
                    a: [0.0, 0.5],
                    b: [0.5, 0.5],
                    normal: [0.0, -1.0],
                },
                Segment2D {
                    a: [0.5, 0.5],
                    b: [1.0, 0.5],
                    normal: [0.0, 1.0],
                },
            ],
        )
    }

    /// Hyperplane piece `x_fixed = value` over the given ranges, normal
    /// `sign`·e_fixed.
    pub fn hyperplane(
        orientation: impl Into<String>,
        fixed_dim: usize,
        fixed_value: f64,
        ranges: Vec<(f64, f64)>,
        sign: f64,
    ) -> Self {
        let measure = ranges
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != fixed_dim)
            .map(|(_, (a, b))| b - a)
            .product();
        Self {
            orientation: orientation.into(),
            shape: InterfaceShape::Hyperplane {
                fixed_dim,
                fixed_value,
                ranges,
                sign,
            },
            measure,
        }
    }

    pub fn dim(&self) -> usize {
        match &self.shape {
            InterfaceShape::Polyline(_) => 2,
            InterfaceShape::Hyperplane { ranges, .. } => ranges.len(),
        }
    }

    pub fn measure(&self) -> f64 {
        self.measure
    }

    /// `n` points uniform by arclength/area, each with the outward unit
    /// normal of the orientation subdomain (flat `n·d`).
    pub fn sample(&self, n: usize, seed: u64) -> (PointCloud, Vec<f64>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = self.dim();
        let mut pc = PointCloud::with_capacity(d, n);
        let mut normals = Vec::with_capacity(n * d);
        match &self.shape {
            InterfaceShape::Polyline(segments) => {
                let total: f64 = self.measure;
                for _ in 0..n {
                    let mut u = rng.random_range(0.0..total);
                    let mut chosen = segments.len() - 1;
                    for (i, s) in segments.iter().enumerate() {
                        let l = s.length();
                        if u < l {
                            chosen = i;
                            break;
                        }
                        u -= l;
                    }
                    let s = &segments[chosen];
                    let t = rng.random_range(0.0..1.0);
                    pc.push(&[
                        s.a[0] + t * (s.b[0] - s.a[0]),
                        s.a[1] + t * (s.b[1] - s.a[1]),
                    ]);
                    normals.extend_from_slice(&s.normal);
                }
            }
            InterfaceShape::Hyperplane {
                fixed_dim,
                fixed_value,
                ranges,
                sign,
            } => {
                let mut buf = Vec::with_capacity(d);
                for _ in 0..n {
                    buf.clear();
                    for (k, (a, b)) in ranges.iter().enumerate() {
                        if k == *fixed_dim {
                            buf.push(*fixed_value);
                        } else {
                            buf.push(rng.random_range(*a..*b));
                        }
                    }
                    pc.push(&buf);
                    for k in 0..d {
                        normals.push(if k == *fixed_dim { *sign } else { 0.0 });
                    }
                }
            }
        }
        (pc, normals)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zigzag_matches_hand_values() {
        assert!((zigzag_x(0.025).unwrap() - 0.475).abs() < 1e-15);
        assert!((zigzag_x(0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!(zigzag_x(1.2).is_err());
        assert!(zigzag_x(-0.1).is_err());
    }

    #[test]
    fn zigzag_stays_in_band_and_is_continuous() {
        let n = 10_000;
        let mut prev = zigzag_x(0.0).unwrap();
        for i in 0..=n {
            let y = i as f64 / n as f64;
            let x = zigzag_x(y).unwrap();
            assert!((0.45..=0.55).contains(&x), "x={x} at y={y}");
            if i > 0 {
                assert!(
                    (x - prev).abs() <= 2.0 / n as f64,
                    "jump at y={y}: {prev} -> {x}"
                );
            }
            prev = x;
        }
    }

    #[test]
    fn left_half_contains() {
        let left = Region::from_boxes(
            "omega1",
            vec![AxisBox::new(vec![0.0, 0.0], vec![0.5, 1.0])],
            vec![],
        );
        assert!(left.contains(&[0.25, 0.5]));
        assert!(!left.contains(&[0.75, 0.5]));
    }

    #[test]
    fn zigzag_left_contains_hand_point() {
        let left = Region::zigzag_side("omega1", true, vec![]);
        // curve at y = 0.025 is x = 0.475
        assert!(left.contains(&[0.40, 0.025]));
        assert!(!left.contains(&[0.48, 0.025]));
    }

    #[test]
    fn interior_sampler_is_deterministic_and_consistent() {
        let left = Region::zigzag_side("omega1", true, vec![]);
        let a = left.sample_interior(500, 9).unwrap();
        let b = left.sample_interior(500, 9).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|p| left.contains(p)));

        let sq = Region::from_boxes("omega", vec![AxisBox::unit_square()], vec![]);
        let c = sq.sample_interior(1, 3).unwrap();
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn interface_normals_are_unit_and_perpendicular() {
        let zz = InterfaceDescriptor::zigzag("omega1");
        let (points, normals) = zz.sample(200, 5);
        for (i, p) in points.iter().enumerate() {
            let n = &normals[i * 2..(i + 1) * 2];
            let norm = (n[0] * n[0] + n[1] * n[1]).sqrt();
            assert!((norm - 1.0).abs() < 1e-12);
            // point lies on the curve
            let zx = zigzag_x(p[1]).unwrap();
            assert!((p[0] - zx).abs() < 1e-12, "off-curve point {p:?}");
        }
    }

    #[test]
    fn vertical_interface_normal_is_plus_x() {
        let seg = InterfaceDescriptor::vertical_segment("omega1", 0.5, 0.0, 1.0, 1.0);
        let (points, normals) = seg.sample(50, 1);
        for (i, p) in points.iter().enumerate() {
            assert_eq!(p[0], 0.5);
            assert_eq!(&normals[i * 2..(i + 1) * 2], &[1.0, 0.0]);
        }
    }

    #[test]
    fn cross_points_lie_on_interior_edges() {
        let cross = InterfaceDescriptor::red_black_cross("red");
        let (points, _) = cross.sample(200, 2);
        for p in points.iter() {
            assert!((p[0] - 0.5).abs() < 1e-12 || (p[1] - 0.5).abs() < 1e-12);
        }
    }
}
