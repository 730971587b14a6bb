//! Deterministic sampling: Halton sequences in slice coordinates, interior
//! clouds, boundary samples and approach paths for the barrier predicates.
//!
//! The interior cloud is densified near the distinguished corner point and
//! near the lateral boundary, which is where the barrier inequalities are
//! tightest for cusp-shaped domains.

use crate::geometry::{DomainSpec, TimeSlice};

/// The k-th element of the van der Corput sequence in the given base.
pub fn halton(mut index: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut value = 0.0;
    while index > 0 {
        f /= base as f64;
        value += f * (index % base) as f64;
        index /= base;
    }
    value
}

/// An interior sample point in radial coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RtPoint {
    pub r: f64,
    pub t: f64,
}

/// Time extent (t_min, t_max) over which the domain has nonempty slices;
/// closed-form per variant.
pub fn time_extent(domain: &DomainSpec) -> (f64, f64) {
    match domain {
        DomainSpec::SodaCan { params } => (-params.theta, 0.0),
        DomainSpec::PetrovskiiSet { .. } => (-1.0, 0.0),
        DomainSpec::GeneralizedSodaCan { .. } => (-1.0, 0.0),
        DomainSpec::PuncturedCylinder { t0, .. } => (-t0, 0.0),
        DomainSpec::TruncatedSodaCan { params, delta } => {
            (-params.theta * delta.powf(params.l), 0.0)
        }
        DomainSpec::ScaledImage { inner, b, .. } => {
            let (lo, hi) = time_extent(inner);
            (lo / b, hi / b)
        }
    }
}

/// A Halton cloud of `count` interior points, densified (x10 of the extra
/// budget) near the origin-corner and near the inner lateral boundary.
pub fn interior_cloud(domain: &DomainSpec, count: usize) -> Vec<RtPoint> {
    let (t_lo, _) = time_extent(domain);
    let mut pts = Vec::with_capacity(count * 2);
    let base = count as u64;

    let push_if_inside = |r: f64, t: f64, pts: &mut Vec<RtPoint>| {
        if domain.contains_rt(r, t) {
            pts.push(RtPoint { r, t });
        }
    };

    for i in 1..=base {
        let h1 = halton(i, 2);
        let h2 = halton(i, 3);
        // place a point inside the slice at depth fraction h2
        let t = t_lo * (1.0 - h2).max(1e-9) * h2.max(1e-9).powf(0.35);
        if let TimeSlice::Annulus { inner, outer } = normalize_slice(domain.time_slice(t)) {
            let r = inner + (outer - inner) * h1;
            push_if_inside(r, t, &mut pts);
        }
        // densify near the corner: shrink radius geometrically
        let h3 = halton(i, 5);
        let r_small = 0.9 * 2f64.powf(-10.0 * h3);
        let t_corner = t * h1.max(1e-6);
        if let TimeSlice::Annulus { inner, outer } = normalize_slice(domain.time_slice(t_corner)) {
            let r = (inner + (outer - inner) * 0.05).max(r_small.min(0.9 * outer));
            push_if_inside(r, t_corner, &mut pts);
        }
        // densify near the lateral boundary: points just inside the inner radius
        if let TimeSlice::Annulus { inner, outer } = domain.time_slice(t) {
            if inner > 0.0 {
                let r = inner + (outer - inner) * 0.02 * h3.max(0.05);
                push_if_inside(r, t, &mut pts);
            }
        }
    }
    pts
}

fn normalize_slice(s: TimeSlice) -> TimeSlice {
    match s {
        TimeSlice::Ball { radius } => TimeSlice::Annulus {
            inner: 0.0,
            outer: radius,
        },
        other => other,
    }
}

/// A boundary sample in radial coordinates, tagged by the boundary piece.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub r: f64,
    pub t: f64,
    pub piece: BoundaryPiece,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryPiece {
    /// The moving inner wall (lateral cusp or cylinder axis).
    Lateral,
    /// The outer wall.
    Outer,
    /// The final-time face t = 0.
    Top,
    /// The initial face (bottom of the time extent).
    Bottom,
}

/// Samples of the topological boundary, covering the lateral piece, the
/// outer wall, the top face and the bottom face.
pub fn boundary_samples(domain: &DomainSpec, per_piece: usize) -> Vec<BoundaryPoint> {
    let (t_lo, t_hi) = time_extent(domain);
    let span = t_hi - t_lo;
    let mut out = Vec::with_capacity(per_piece * 4);
    for i in 1..=per_piece as u64 {
        let h = halton(i, 2);
        let hq = halton(i, 3);
        let t = t_lo + span * h.clamp(1e-9, 1.0 - 1e-9);
        match domain.time_slice(t) {
            TimeSlice::Annulus { inner, outer } => {
                out.push(BoundaryPoint {
                    r: inner,
                    t,
                    piece: BoundaryPiece::Lateral,
                });
                out.push(BoundaryPoint {
                    r: outer,
                    t,
                    piece: BoundaryPiece::Outer,
                });
            }
            TimeSlice::Ball { radius } => {
                out.push(BoundaryPoint {
                    r: radius,
                    t,
                    piece: BoundaryPiece::Outer,
                });
            }
            TimeSlice::Empty => {}
        }
        // top face: radii across the closure of the final slice
        if let TimeSlice::Annulus { inner, outer } =
            normalize_slice(domain.time_slice(t_hi - 1e-12 * span.max(1.0)))
        {
            let r = inner + (outer - inner) * hq;
            out.push(BoundaryPoint {
                r,
                t: t_hi,
                piece: BoundaryPiece::Top,
            });
        }
        if let TimeSlice::Annulus { inner, outer } =
            normalize_slice(domain.time_slice(t_lo + 1e-12 * span.max(1.0)))
        {
            let r = inner + (outer - inner) * hq;
            out.push(BoundaryPoint {
                r,
                t: t_lo,
                piece: BoundaryPiece::Bottom,
            });
        }
    }
    out
}

/// Interior paths approaching the corner point (0, 0): for cusp domains the
/// paths are (r, -s·θ·r^l) with depth fractions s and r → 0 geometrically;
/// cylinders use (r, -s·r²) capped to the time extent.
pub fn corner_paths(domain: &DomainSpec, steps: usize) -> Vec<Vec<RtPoint>> {
    let mut paths = Vec::new();
    for &s in &[0.1, 0.5, 0.9] {
        let mut path = Vec::with_capacity(steps);
        let mut r = 0.5;
        for _ in 0..steps {
            let t = corner_depth(domain, r, s);
            if domain.contains_rt(r, t) {
                path.push(RtPoint { r, t });
            }
            r *= 0.5;
        }
        paths.push(path);
    }
    paths
}

fn corner_depth(domain: &DomainSpec, r: f64, s: f64) -> f64 {
    match domain {
        DomainSpec::SodaCan { params } | DomainSpec::TruncatedSodaCan { params, .. } => {
            -s * params.theta * r.powf(params.l)
        }
        DomainSpec::PetrovskiiSet { params } => {
            // approach strictly inside the paraboloid: deeper than the graph
            -(s * 0.5 + 1.0) * params.theta * r.powf(params.l)
        }
        DomainSpec::GeneralizedSodaCan { .. } => {
            // pick the depth whose inner radius is a fraction of r
            let mut lo = 0.0f64;
            let mut hi = 1.0f64;
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                let inner = match domain.time_slice(-mid) {
                    TimeSlice::Annulus { inner, .. } => inner,
                    _ => f64::INFINITY,
                };
                if inner < s * r {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            -lo
        }
        DomainSpec::PuncturedCylinder { t0, .. } => (-s * r * r).max(-t0 * 0.999),
        DomainSpec::ScaledImage { inner, a, b } => corner_depth(inner, a * r, s) / b,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Params;

    #[test]
    fn halton_is_low_discrepancy_in_unit_interval() {
        let v: Vec<f64> = (1..=64).map(|i| halton(i, 2)).collect();
        assert!(v.iter().all(|x| (0.0..1.0).contains(x)));
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        assert!((mean - 0.5).abs() < 0.02, "mean {mean}");
    }

    #[test]
    fn interior_cloud_stays_inside() {
        let d = DomainSpec::soda_can(Params::new(2, 3.0, 2.0, 1.0).unwrap());
        let pts = interior_cloud(&d, 512);
        assert!(pts.len() > 400, "only {} points", pts.len());
        for p in &pts {
            assert!(d.contains_rt(p.r, p.t), "({}, {}) escaped", p.r, p.t);
        }
    }

    #[test]
    fn boundary_samples_cover_all_pieces() {
        let d = DomainSpec::soda_can(Params::new(2, 3.0, 2.0, 1.0).unwrap());
        let pts = boundary_samples(&d, 64);
        for piece in [
            BoundaryPiece::Lateral,
            BoundaryPiece::Outer,
            BoundaryPiece::Top,
        ] {
            assert!(pts.iter().any(|p| p.piece == piece), "missing {piece:?}");
        }
        // boundary points are not members of the open set
        for p in &pts {
            assert!(!d.contains_rt(p.r, p.t), "boundary point inside: {p:?}");
        }
    }

    #[test]
    fn corner_paths_approach_origin() {
        let d = DomainSpec::soda_can(Params::new(2, 1.5, 1.8, 0.5).unwrap());
        for path in corner_paths(&d, 12) {
            assert!(path.len() >= 10);
            let last = path.last().unwrap();
            assert!(last.r < 1e-3 && last.t.abs() < 1e-3);
        }
    }
}
