//! Closed contours and their radial distance signals.
//!
//! A mass boundary is represented as a closed polygon. Its shape signature
//! is the *radial distance signal*: distances from the area centroid to the
//! boundary, sampled along rays at uniform angles. The sample count is a
//! power of two so the signal can feed the wavelet decomposition directly.

use alloc::vec::Vec;
#[cfg(not(feature = "std"))]
use num_traits::Float as _;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("contour needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("consecutive contour vertices {0} and {1} coincide")]
    DuplicateVertex(usize, usize),
    #[error("contour coordinates must be finite")]
    NonFiniteCoordinate,
    #[error("polygon area is zero within tolerance")]
    DegeneratePolygon,
    #[error("centroid does not lie strictly inside the contour")]
    CentroidOutside,
    #[error("ray {0} found no boundary intersection")]
    NoIntersection(usize),
    #[error("sample count {0} must be a power of two >= 8")]
    BadSampleCount(usize),
    #[error("signal mean must be positive to normalize")]
    NonPositiveMean,
}

/// A point in image coordinates (pixels).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }
}

#[inline]
fn cross(ax: f64, ay: f64, bx: f64, by: f64) -> f64 {
    ax * by - ay * bx
}

/// A closed boundary polygon: the last vertex connects back to the first.
///
/// Construction checks vertex count, coordinate finiteness and that
/// consecutive vertices are distinct. Simplicity (absence of
/// self-intersections) is an invariant of meaningful contours but is
/// O(n²) to verify, so it is exposed separately as [`Contour::is_simple`].
#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    points: Vec<Point2>,
}

impl Contour {
    pub fn new(points: Vec<Point2>) -> Result<Self, GeometryError> {
        if points.len() < 3 {
            return Err(GeometryError::TooFewVertices(points.len()));
        }
        if points.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(GeometryError::NonFiniteCoordinate);
        }
        for i in 0..points.len() {
            let j = (i + 1) % points.len();
            if points[i] == points[j] {
                return Err(GeometryError::DuplicateVertex(i, j));
            }
        }
        Ok(Contour { points })
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // ≥3 vertices by construction
    }

    /// Signed area via the shoelace formula (positive for counter-clockwise
    /// winding).
    pub fn signed_area(&self) -> f64 {
        let pts = &self.points;
        let n = pts.len();
        let mut sum = 0.0;
        for i in 0..n {
            let j = (i + 1) % n;
            sum += cross(pts[i].x, pts[i].y, pts[j].x, pts[j].y);
        }
        0.5 * sum
    }

    /// Segment-intersection check over all non-adjacent edge pairs.
    pub fn is_simple(&self) -> bool {
        let pts = &self.points;
        let n = pts.len();
        for i in 0..n {
            for j in (i + 1)..n {
                // skip adjacent edges (they share a vertex)
                if j == i + 1 || (i == 0 && j == n - 1) {
                    continue;
                }
                if segments_intersect(
                    pts[i],
                    pts[(i + 1) % n],
                    pts[j],
                    pts[(j + 1) % n],
                ) {
                    return false;
                }
            }
        }
        true
    }

    /// Strict interior test (crossing number). Points on the boundary are
    /// not considered inside.
    pub fn contains(&self, p: Point2) -> bool {
        let pts = &self.points;
        let n = pts.len();
        let mut inside = false;
        for i in 0..n {
            let a = pts[i];
            let b = pts[(i + 1) % n];
            if (a.y > p.y) != (b.y > p.y) {
                let x_at = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if p.x < x_at {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// Rotates the contour by `angle` radians about `center`.
    pub fn rotated(&self, angle: f64, center: Point2) -> Contour {
        let (s, c) = angle.sin_cos();
        let points = self
            .points
            .iter()
            .map(|p| {
                let dx = p.x - center.x;
                let dy = p.y - center.y;
                Point2::new(center.x + c * dx - s * dy, center.y + s * dx + c * dy)
            })
            .collect();
        Contour { points }
    }

    /// Uniformly scales the contour by `factor` about the origin.
    pub fn scaled(&self, factor: f64) -> Contour {
        let points = self
            .points
            .iter()
            .map(|p| Point2::new(p.x * factor, p.y * factor))
            .collect();
        Contour { points }
    }
}

fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    cross(b.x - a.x, b.y - a.y, c.x - a.x, c.y - a.y)
}

fn segments_intersect(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let d1 = orient(a, b, c);
    let d2 = orient(a, b, d);
    let d3 = orient(c, d, a);
    let d4 = orient(c, d, b);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on = |p: Point2, q: Point2, r: Point2, o: f64| {
        o == 0.0
            && r.x >= p.x.min(q.x)
            && r.x <= p.x.max(q.x)
            && r.y >= p.y.min(q.y)
            && r.y <= p.y.max(q.y)
    };
    on(a, b, c, d1) || on(a, b, d, d2) || on(c, d, a, d3) || on(c, d, b, d4)
}

/// Area-weighted polygon centroid (shoelace-based).
pub fn centroid(c: &Contour) -> Result<Point2, GeometryError> {
    let pts = c.points();
    let n = pts.len();
    let area = c.signed_area();
    if area.abs() < 1e-12 {
        return Err(GeometryError::DegeneratePolygon);
    }
    let mut cx = 0.0;
    let mut cy = 0.0;
    for i in 0..n {
        let j = (i + 1) % n;
        let w = cross(pts[i].x, pts[i].y, pts[j].x, pts[j].y);
        cx += (pts[i].x + pts[j].x) * w;
        cy += (pts[i].y + pts[j].y) * w;
    }
    let inv = 1.0 / (6.0 * area);
    Ok(Point2::new(cx * inv, cy * inv))
}

/// The centroid-to-boundary distance signature of a contour.
///
/// Sample `k` is the distance along the ray at angle `2πk/n`. Lengths are
/// powers of two; after [`RadialSignal::normalized`] the sample mean is 1,
/// which removes overall scale and makes signals comparable across masses.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSignal {
    samples: Vec<f64>,
    normalized: bool,
}

impl RadialSignal {
    /// Builds a signal from raw samples, validating positivity and the
    /// power-of-two length requirement.
    pub fn new(samples: Vec<f64>) -> Result<Self, GeometryError> {
        let n = samples.len();
        if n < 8 || !n.is_power_of_two() {
            return Err(GeometryError::BadSampleCount(n));
        }
        if samples.iter().any(|&s| s <= 0.0 || !s.is_finite()) {
            return Err(GeometryError::NonPositiveMean);
        }
        Ok(RadialSignal {
            samples,
            normalized: false,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }

    /// Divides every sample by the mean; the result has mean 1. The mean
    /// (rather than the max) is used so that single spike samples on
    /// stellate shapes do not dominate the scale.
    pub fn normalized(&self) -> Result<RadialSignal, GeometryError> {
        let m = self.mean();
        if m <= 0.0 || m.is_nan() {
            return Err(GeometryError::NonPositiveMean);
        }
        Ok(RadialSignal {
            samples: self.samples.iter().map(|s| s / m).collect(),
            normalized: true,
        })
    }
}

/// Samples the centroid-to-boundary distance along `n` uniformly spaced
/// rays (`n` a power of two, at least 8).
///
/// Intersections are computed exactly against the polygon edges. On
/// non-convex boundaries a ray can cross several edges; the farthest
/// intersection is used, which traces the outer envelope of the mass.
pub fn radial_distance_signal(c: &Contour, n: usize) -> Result<RadialSignal, GeometryError> {
    if n < 8 || !n.is_power_of_two() {
        return Err(GeometryError::BadSampleCount(n));
    }
    let origin = centroid(c)?;
    if !c.contains(origin) {
        return Err(GeometryError::CentroidOutside);
    }
    let pts = c.points();
    let m = pts.len();
    let mut samples = Vec::with_capacity(n);
    for k in 0..n {
        let theta = 2.0 * core::f64::consts::PI * k as f64 / n as f64;
        let (dy, dx) = theta.sin_cos();
        let mut best: Option<f64> = None;
        for i in 0..m {
            let a = pts[i];
            let b = pts[(i + 1) % m];
            let ex = b.x - a.x;
            let ey = b.y - a.y;
            let denom = cross(dx, dy, ex, ey);
            if denom.abs() < 1e-300 {
                continue; // ray parallel to edge
            }
            let acx = a.x - origin.x;
            let acy = a.y - origin.y;
            let t = cross(acx, acy, ex, ey) / denom;
            let u = cross(acx, acy, dx, dy) / denom;
            if t > 1e-12
                && (-1e-9..=1.0 + 1e-9).contains(&u)
                && best.map_or(true, |b| t > b)
            {
                best = Some(t);
            }
        }
        match best {
            Some(t) => samples.push(t),
            None => return Err(GeometryError::NoIntersection(k)),
        }
    }
    Ok(RadialSignal {
        samples,
        normalized: false,
    })
}
