//! Convex hull of the attractor: closed-form vertices for the opposite-sign
//! case, a numeric hull as oracle, the attractor-free gap segment, and
//! trap-like vector construction.
//!
//! The closed-form vertex families are
//!
//! ```text
//! A_k = pi((mp)^k m^inf),  B_k = pi((pm)^k m^inf),
//! C_k = pi((pm)^k p^inf),  D_k = pi((mp)^k p^inf),
//! ```
//!
//! together with the two limit points `pi((mp)^inf)` and `pi((pm)^inf)`.
//! They are stated for `gamma < 0 < lambda`, `|gamma| < |lambda|`; other
//! sign patterns are reduced to this normal form through the parameter
//! symmetries (or routed to the numeric hull for same-sign pairs).

use crate::error::{Error, Result};
use crate::geom::{cross, seg_point_distance, PlanePoint};
use crate::ifs::{
    attractor_sample_adaptive, eval_address, normalize_opposite_sign, normalize_same_sign,
    Normalized, Params, SignedWord,
};
use serde::Serialize;

/// Convex-position tolerance for the analytic vertex list.
pub const CONVEX_POSITION_TOL: f64 = 1e-10;

/// Collinearity tolerance for the numeric hull scan.
pub const COLLINEAR_TOL: f64 = 1e-12;

/// A hull vertex paired with its symbolic address.
#[derive(Clone, Debug, Serialize)]
pub struct HullVertex {
    pub address: SignedWord,
    pub x: f64,
    pub y: f64,
}

impl HullVertex {
    pub fn point(&self) -> PlanePoint {
        PlanePoint::new(self.x, self.y)
    }
}

/// Closed-form hull vertices in boundary (counterclockwise) order.
#[derive(Clone, Debug, Serialize)]
pub struct HullVertexList {
    pub vertices: Vec<HullVertex>,
    pub k_max: usize,
}

impl HullVertexList {
    pub fn points(&self) -> Vec<PlanePoint> {
        self.vertices.iter().map(|v| v.point()).collect()
    }
}

/// A hull-boundary segment whose interior keeps a certified distance from
/// the attractor.
#[derive(Clone, Debug, Serialize)]
pub struct GapSegment {
    pub a_address: SignedWord,
    pub a: PlanePoint,
    pub b_address: SignedWord,
    pub b: PlanePoint,
    /// Certified distance from the middle portion of the segment to the
    /// attractor (sample distance minus the sampling slop).
    pub clearance: f64,
}

fn word(s: &str) -> SignedWord {
    s.parse().expect("static word")
}

/// Closed-form vertex addresses for the normalized opposite-sign case.
fn vertex_addresses(k_max: usize) -> Vec<SignedWord> {
    let mut out = Vec::with_capacity(4 * (k_max + 1) + 2);
    out.push(word("(mp)"));
    out.push(word("(pm)"));
    for k in 0..=k_max {
        for (blk, tail) in [("mp", 'm'), ("pm", 'm'), ("pm", 'p'), ("mp", 'p')] {
            let mut s = blk.repeat(k);
            s.push('(');
            s.push(tail);
            s.push(')');
            out.push(word(&s));
        }
    }
    out
}

/// Evaluate the closed-form hull vertices for a nontrivial, off-diagonal,
/// opposite-sign parameter pair. Inputs with other sign patterns are first
/// normalized through the symmetries; same-sign pairs are rejected in favor
/// of the numeric hull.
pub fn analytic_vertices(params: &Params, k_max: usize) -> Result<HullVertexList> {
    if params.on_diagonal() {
        return Err(Error::Precondition("diagonal pairs have a segment attractor".into()));
    }
    if params.gamma() * params.lambda() > 0.0 {
        return Err(Error::Unsupported(
            "same-sign pairs: use numeric_hull on an attractor sample".into(),
        ));
    }
    let norm = normalize_opposite_sign(params)?;
    let mut verts: Vec<HullVertex> = Vec::new();
    for addr in vertex_addresses(k_max) {
        let p = eval_address(&addr, &norm.params, 0)?;
        let p = norm.point_back(p);
        let addr = norm.address_back(&addr);
        // Vertex families converge geometrically; drop rounding-level
        // duplicates of already-kept vertices.
        if verts
            .iter()
            .all(|v| v.point().dist(p) > 1e-13 * (1.0 + p.norm()))
        {
            verts.push(HullVertex {
                address: addr,
                x: p.x,
                y: p.y,
            });
        }
    }
    // The attractor is centrally symmetric, so the origin is interior and
    // an angular sort yields boundary order.
    verts.sort_by(|u, v| {
        u.y.atan2(u.x)
            .partial_cmp(&v.y.atan2(v.x))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let list = HullVertexList {
        vertices: verts,
        k_max,
    };
    let pts = list.points();
    let scale = pts.iter().map(|p| p.norm()).fold(0.0, f64::max).max(1.0);
    for i in 0..pts.len() {
        let o = pts[i];
        let a = pts[(i + 1) % pts.len()];
        let b = pts[(i + 2) % pts.len()];
        if cross(o, a, b) < -CONVEX_POSITION_TOL * scale * scale {
            return Err(Error::DegenerateHull(format!(
                "vertices not in convex position near ({}, {})",
                a.x, a.y
            )));
        }
    }
    Ok(list)
}

/// Convex hull of a point set by the monotone-chain scan, counterclockwise,
/// with collinear points dropped.
pub fn numeric_hull(sample: &[PlanePoint]) -> Result<Vec<PlanePoint>> {
    if sample.len() < 3 {
        return Err(Error::Precondition("need at least 3 points".into()));
    }
    let mut pts = sample.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup_by(|a, b| a.x == b.x && a.y == b.y);

    let build = |iter: &mut dyn Iterator<Item = PlanePoint>| {
        let mut chain: Vec<PlanePoint> = Vec::new();
        for p in iter {
            while chain.len() >= 2
                && cross(chain[chain.len() - 2], chain[chain.len() - 1], p) <= COLLINEAR_TOL
            {
                chain.pop();
            }
            chain.push(p);
        }
        chain
    };
    let mut lower = build(&mut pts.iter().copied());
    let mut upper = build(&mut pts.iter().rev().copied());
    // Each chain ends where the other begins; drop the duplicates.
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 3 {
        return Err(Error::DegenerateHull("all points collinear".into()));
    }
    Ok(lower)
}

/// Ratio of the adaptive-sampling target radius to the attractor extent
/// used by the clearance scan.
const GAP_SAMPLE_RESOLUTION: f64 = 1.0 / 512.0;

/// The attractor-free segment on the hull boundary.
///
/// For (normalized) opposite signs this is the segment joining `pi(m^inf)`
/// and `pi(mpm^inf)`; for same-sign pairs the segment joining `pi(m^inf)`
/// and `pi(pm^inf)` is used, numerically only. The clearance is measured
/// from the middle half of the segment to an attractor sample, minus the
/// sampling slop, and must come out positive.
pub fn gap_segment(params: &Params) -> Result<GapSegment> {
    if params.on_diagonal() {
        return Err(Error::Precondition("diagonal pairs are excluded".into()));
    }
    if params.gamma() == 0.0 || params.lambda() == 0.0 {
        return Err(Error::Domain("gap segment needs nonzero eigenvalues".into()));
    }
    let same_sign = params.gamma() * params.lambda() > 0.0;
    let (norm, addr_a, addr_b): (Normalized, SignedWord, SignedWord) = if same_sign {
        (normalize_same_sign(params)?, word("(m)"), word("pm(m)"))
    } else {
        (normalize_opposite_sign(params)?, word("(m)"), word("mp(m)"))
    };
    let pa = norm.point_back(eval_address(&addr_a, &norm.params, 0)?);
    let pb = norm.point_back(eval_address(&addr_b, &norm.params, 0)?);
    let a_address = norm.address_back(&addr_a);
    let b_address = norm.address_back(&addr_b);

    let extent = params.extent();
    let target = extent.norm() * GAP_SAMPLE_RESOLUTION;
    let quantum = target / 2.0;
    let (sample, trunc, dedup) = attractor_sample_adaptive(params, target, quantum, 16 << 20)?;
    let slop = trunc + dedup;

    // Scan the middle half of the segment; the endpoints themselves are
    // attractor points.
    let mut clearance = f64::INFINITY;
    const SCAN: usize = 33;
    for i in 0..SCAN {
        let t = 0.25 + 0.5 * i as f64 / (SCAN - 1) as f64;
        let q = pa + (pb - pa) * t;
        let d = sample
            .iter()
            .map(|s| s.dist_sq(q))
            .fold(f64::INFINITY, f64::min)
            .sqrt();
        clearance = clearance.min(d - slop);
    }
    if !(clearance > 0.0) {
        return Err(Error::InconclusiveGap(format!(
            "middle-segment clearance {clearance:.3e} not positive at sampling slop {slop:.3e}"
        )));
    }
    Ok(GapSegment {
        a_address,
        a: pa,
        b_address,
        b: pb,
        clearance,
    })
}

/// Build a trap-like vector from a gap segment: take the segment midpoint,
/// step a quarter clearance toward the attractor side, and translate the
/// first endpoint there.
pub fn trap_like_vector(
    params: &Params,
    seg: &GapSegment,
    sample: &[PlanePoint],
) -> Result<PlanePoint> {
    let _ = params;
    if !(seg.clearance > 0.0) {
        return Err(Error::Precondition("segment clearance must be positive".into()));
    }
    if sample.is_empty() {
        return Err(Error::Precondition("empty sample".into()));
    }
    let mid = (seg.a + seg.b) * 0.5;
    let dir = seg.b - seg.a;
    let len = dir.norm();
    if len == 0.0 {
        return Err(Error::Precondition("degenerate segment".into()));
    }
    let normal = PlanePoint::new(-dir.y / len, dir.x / len);
    // Majority side of the sample decides which normal points at the set.
    let mut votes = 0i64;
    for s in sample {
        if (*s - mid).dot(normal) > 0.0 {
            votes += 1;
        } else {
            votes -= 1;
        }
    }
    let toward = if votes >= 0 { normal } else { -normal };
    let eps_r = seg.clearance / 2.0;
    let v = mid + toward * (eps_r / 2.0);
    Ok(v - seg.a)
}

/// One-sided Hausdorff distance from `points` to the filled convex polygon.
pub fn one_sided_hausdorff_to_polygon(points: &[PlanePoint], poly: &[PlanePoint]) -> f64 {
    points
        .iter()
        .map(|p| crate::geom::dist_to_convex_polygon(poly, *p))
        .fold(0.0, f64::max)
}

/// Distance from `p` to the boundary of the polygon (minimum over edges).
pub fn dist_to_polygon_boundary(poly: &[PlanePoint], p: PlanePoint) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..poly.len() {
        best = best.min(seg_point_distance(poly[i], poly[(i + 1) % poly.len()], p));
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::attractor_sample;

    fn fig_params() -> Params {
        Params::new(-10.0 / 17.0, 10.0 / 13.0).unwrap()
    }

    #[test]
    fn numeric_hull_triangle() {
        let pts = [
            PlanePoint::new(0.0, 0.0),
            PlanePoint::new(1.0, 0.0),
            PlanePoint::new(0.0, 1.0),
        ];
        let hull = numeric_hull(&pts).unwrap();
        assert_eq!(hull.len(), 3);
    }

    #[test]
    fn numeric_hull_square_with_interior() {
        let mut pts = vec![
            PlanePoint::new(0.0, 0.0),
            PlanePoint::new(1.0, 0.0),
            PlanePoint::new(1.0, 1.0),
            PlanePoint::new(0.0, 1.0),
        ];
        for i in 1..10 {
            for j in 1..10 {
                pts.push(PlanePoint::new(i as f64 / 10.0, j as f64 / 10.0));
            }
        }
        let hull = numeric_hull(&pts).unwrap();
        assert_eq!(hull.len(), 4);
    }

    #[test]
    fn numeric_hull_rejects_collinear() {
        let pts: Vec<PlanePoint> = (0..10)
            .map(|i| PlanePoint::new(i as f64, 2.0 * i as f64))
            .collect();
        assert!(matches!(
            numeric_hull(&pts),
            Err(Error::DegenerateHull(_))
        ));
    }

    #[test]
    fn analytic_extreme_pair() {
        let params = fig_params();
        let list = analytic_vertices(&params, 8).unwrap();
        // pi((pm)^inf) = (1/(1+gamma), 1/(1+lambda)) and its negation.
        let ex = PlanePoint::new(17.0 / 7.0, 13.0 / 23.0);
        let close = |p: PlanePoint, q: PlanePoint| p.dist(q) < 1e-12;
        assert!(list.vertices.iter().any(|v| close(v.point(), ex)));
        assert!(list.vertices.iter().any(|v| close(v.point(), -ex)));
        // A_0 = pi(m^inf) = -(1/(1-gamma), 1/(1-lambda)).
        let a0 = PlanePoint::new(-1.0 / (1.0 - params.gamma()), -1.0 / (1.0 - params.lambda()));
        assert!(list.vertices.iter().any(|v| close(v.point(), a0)));
        // A_1 = pi(mpm^inf), x-coordinate -1 + gamma - gamma^2/(1-gamma).
        let g = params.gamma();
        let a1x = -1.0 + g - g * g / (1.0 - g);
        assert!((a1x - -1.8061).abs() < 1e-4);
        assert!(list
            .vertices
            .iter()
            .any(|v| (v.x - a1x).abs() < 1e-12));
    }

    #[test]
    fn analytic_rejects_same_sign_and_diagonal() {
        assert!(matches!(
            analytic_vertices(&Params::new(0.6, 0.8).unwrap(), 4),
            Err(Error::Unsupported(_))
        ));
        assert!(analytic_vertices(&Params::new(0.6, 0.6).unwrap(), 4).is_err());
    }

    #[test]
    fn analytic_matches_numeric_hull() {
        let params = fig_params();
        let list = analytic_vertices(&params, 8).unwrap();
        let sample = attractor_sample(&params, 16).unwrap();
        let hull = numeric_hull(&sample).unwrap();
        let tol = 1e-6 + params.truncation_radius(16);
        assert!(one_sided_hausdorff_to_polygon(&hull, &list.points()) <= tol);
        assert!(one_sided_hausdorff_to_polygon(&list.points(), &hull) <= tol);
    }

    #[test]
    fn gap_segment_fig_params() {
        let params = fig_params();
        let seg = gap_segment(&params).unwrap();
        assert!(seg.clearance > 0.0);
        let a0 = PlanePoint::new(-1.0 / (1.0 - params.gamma()), -1.0 / (1.0 - params.lambda()));
        assert!(seg.a.dist(a0) < 1e-12);
        assert_eq!(seg.a_address.to_string(), "(m)");
        assert_eq!(seg.b_address.to_string(), "mp(m)");
    }

    #[test]
    fn gap_segment_rejects_diagonal() {
        assert!(gap_segment(&Params::new(0.4, 0.4).unwrap()).is_err());
    }

    #[test]
    fn trap_vector_mirrors() {
        let params = fig_params();
        let seg = gap_segment(&params).unwrap();
        let sample = attractor_sample(&params, 10).unwrap();
        let w = trap_like_vector(&params, &seg, &sample).unwrap();
        let mirrored = GapSegment {
            a_address: seg.a_address.negate(),
            a: -seg.a,
            b_address: seg.b_address.negate(),
            b: -seg.b,
            clearance: seg.clearance,
        };
        let neg_sample: Vec<PlanePoint> = sample.iter().map(|p| -*p).collect();
        let w2 = trap_like_vector(&params, &mirrored, &neg_sample).unwrap();
        assert!((w + w2).norm() < 1e-12);
    }

    #[test]
    fn vertex_family_converges_geometrically() {
        // A_k and the limit share the length-2k prefix, so the difference
        // is T^{2k} applied to a fixed vector: each coordinate contracts
        // exactly by gamma^2 resp. lambda^2 per step, and the two rates
        // multiply to (gamma lambda)^2.
        let params = fig_params();
        let limit = eval_address(&word("(mp)"), &params, 0).unwrap();
        let rate_x = params.gamma() * params.gamma();
        let rate_y = params.lambda() * params.lambda();
        let mut prev: Option<crate::geom::PlanePoint> = None;
        for k in 1..=12 {
            let mut s = "mp".repeat(k);
            s.push_str("(m)");
            let ak = eval_address(&word(&s), &params, 0).unwrap();
            let diff = ak - limit;
            if let Some(p) = prev {
                let rx = diff.x / p.x;
                let ry = diff.y / p.y;
                assert!((rx - rate_x).abs() < 1e-9, "k={k}: x-ratio {rx} vs {rate_x}");
                assert!((ry - rate_y).abs() < 1e-9, "k={k}: y-ratio {ry} vs {rate_y}");
                let joint = (rx * ry).abs().sqrt();
                let gl = (params.gamma() * params.lambda()).abs();
                assert!((joint - gl).abs() < 1e-9);
            }
            prev = Some(diff);
        }
    }

    #[test]
    fn edge_slope_ratio() {
        // Successive A_k edge slopes scale by (lambda/gamma)^2 in magnitude.
        let params = fig_params();
        let a: Vec<PlanePoint> = (0..4)
            .map(|k| {
                let mut s = "mp".repeat(k);
                s.push_str("(m)");
                eval_address(&word(&s), &params, 0).unwrap()
            })
            .collect();
        let slope = |p: PlanePoint, q: PlanePoint| (q.y - p.y) / (q.x - p.x);
        let expect = (params.lambda() / params.gamma()).powi(2);
        for k in 0..2 {
            let r = slope(a[k + 1], a[k + 2]) / slope(a[k], a[k + 1]);
            assert!(
                (r.abs() - expect.abs()).abs() < 1e-6 * expect.abs(),
                "k={k}: {r} vs {expect}"
            );
        }
    }
}
