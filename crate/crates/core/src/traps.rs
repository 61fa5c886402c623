//! Interior-point certification: solve for a nearby parameter that turns a
//! chosen vector into a normalized translation vector between equal-order
//! cylinders, then verify the trap conditions on a rasterized filled
//! attractor. A passing certificate is floating-point evidence with
//! explicit margins, never a proof; every certificate is stamped
//! `rigorous: false`.

use crate::bseries::{BSeries, Trunc};
use crate::error::{Error, Result};
use crate::geom::PlanePoint;
use crate::hull::{gap_segment, trap_like_vector};
use crate::ifs::{
    attractor_sample_adaptive, cylinder_gap_adaptive, cylinder_offset, normalized_translation,
    words_from_series, Params, SignedWord,
};
use crate::raster::{trace_outer_contour, Grid, Mask};
use crate::roots::bisect_to;
use serde::Serialize;

/// Largest truncation order attempted by the retry loop; beyond this the
/// diagonal powers underflow doubles for typical contraction factors.
pub const M_MAX_DEFAULT: usize = 120;

/// One scalar bracketed solve per coordinate.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PerturbationSolve {
    pub params_start: Params,
    pub params_solved: Params,
    pub order_m: usize,
    pub residuals: [f64; 2],
}

/// Margins and thresholds recorded with a certificate.
#[derive(Clone, Debug, Serialize)]
pub struct TrapTolerances {
    pub cell: f64,
    pub eps: f64,
    pub margin_tol: f64,
    /// Geometric slop folded into every margin: sampling truncation plus
    /// dedup coverage plus one raster cell diagonal.
    pub slop: f64,
    pub sample_radius: f64,
    pub gap_upper_bound: f64,
}

/// Labeled witness points after mapping through the second word.
#[derive(Clone, Debug, Serialize)]
pub struct TrapWitnesses {
    pub p_plus: PlanePoint,
    pub p_minus: PlanePoint,
    pub q_plus: PlanePoint,
    pub q_minus: PlanePoint,
    /// Escape margins of the raw alternating points, in order: the two on
    /// the attractor side (escaping the shifted disk), the two on the
    /// shifted side (escaping the unshifted disk).
    pub margins: [f64; 4],
}

/// Numeric evidence that a parameter pair is interior to the locus.
#[derive(Clone, Debug, Serialize)]
pub struct TrapCertificate {
    pub params_solved: Params,
    pub u: SignedWord,
    pub v: SignedWord,
    pub order_m: usize,
    pub w: PlanePoint,
    pub disk_eps: f64,
    pub witnesses: TrapWitnesses,
    pub tolerances: TrapTolerances,
    pub solve: Option<PerturbationSolve>,
    /// Always false: margins are floating point, not certified arithmetic.
    pub rigorous: bool,
}

/// Raster and margin knobs for the verifier.
#[derive(Clone, Copy, Debug)]
pub struct TrapOptions {
    /// Required positive margin on every check, in world units; defaults to
    /// one raster cell.
    pub margin_tol: Option<f64>,
    /// Target truncation radius of the sample as a fraction of the cell.
    pub sample_fraction: f64,
    /// Dedup quantum of the sampler as a fraction of the cell; trades
    /// sample size against coverage slop.
    pub quantum_fraction: f64,
    pub max_cells: usize,
    pub max_points: usize,
}

impl Default for TrapOptions {
    fn default() -> Self {
        TrapOptions {
            margin_tol: None,
            sample_fraction: 1.0 / 3.0,
            quantum_fraction: 0.25,
            max_cells: 64 << 20,
            max_points: 24 << 20,
        }
    }
}

// ---------------------------------------------------------------------------
// Perturbation solve
// ---------------------------------------------------------------------------

/// Solve the decoupled scalar equations `x^m w_1 = f_m(x)` near `gamma0`
/// and `y^m w_2 = f_m(y)` near `lambda0` by bracketed bisection, where
/// `f_m` is the truncation carrying the first `m` coefficients.
///
/// Requires simple sign-change zeros of `f` at both coordinates and an
/// order `m` large enough that the right-hand side stays below the local
/// range of `f_m` on the bracket; a zero component of `w` returns the
/// truncation zero itself.
pub fn solve_perturbation(
    params0: &Params,
    f: &BSeries,
    w: PlanePoint,
    m: usize,
    radius: f64,
    tol: f64,
) -> Result<PerturbationSolve> {
    if m == 0 {
        return Err(Error::Precondition("order m must be positive".into()));
    }
    if radius <= 0.0 || tol <= 0.0 {
        return Err(Error::Precondition("radius and tol must be positive".into()));
    }
    let degree = m - 1;
    let solve_one = |x0: f64, w_comp: f64| -> Result<(f64, f64)> {
        let resid = f.eval(x0, Trunc::Infinite)?.abs();
        if resid > tol.max(1e-9) * 10.0 / (1.0 - x0.abs()) {
            return Err(Error::Precondition(format!(
                "f does not vanish at {x0} (residual {resid:.3e})"
            )));
        }
        let lo = (x0 - radius).max(-0.999_999);
        let hi = (x0 + radius).min(0.999_999);
        let h = |x: f64| {
            f.eval(x, Trunc::Degree(degree)).unwrap_or(f64::NAN) - x.powi(m as i32) * w_comp
        };
        let f_lo = f.eval(lo, Trunc::Degree(degree))?;
        let f_hi = f.eval(hi, Trunc::Degree(degree))?;
        if f_lo == 0.0 || f_hi == 0.0 || f_lo.signum() == f_hi.signum() {
            return Err(Error::SolveFailure(format!(
                "truncation does not change sign on [{lo}, {hi}]"
            )));
        }
        // The perturbation term must not overpower the truncation at the
        // bracket ends, else the sign change is lost.
        let shift = lo.abs().max(hi.abs()).powi(m as i32) * w_comp.abs();
        if shift >= f_lo.abs().min(f_hi.abs()) {
            return Err(Error::Magnitude(format!(
                "|x|^{m} |w| = {shift:.3e} exceeds the local range {:.3e}",
                f_lo.abs().min(f_hi.abs())
            )));
        }
        let mut root = bisect_to(&h, lo, hi, tol);
        // Newton polish: the right-hand side x^m w can sit many orders
        // below the bisection residual, and the recovered translation
        // vector divides by x^m.
        for _ in 0..4 {
            let hv = h(root);
            let dv = f.eval_derivative(root, 1, Trunc::Degree(degree))?
                - m as f64 * root.powi(m as i32 - 1) * w_comp;
            if dv == 0.0 {
                break;
            }
            let next = root - hv / dv;
            if !next.is_finite() || next <= lo || next >= hi {
                break;
            }
            root = next;
        }
        Ok((root, h(root).abs()))
    };
    let (g1, r1) = solve_one(params0.gamma(), w.x)?;
    let (l1, r2) = solve_one(params0.lambda(), w.y)?;
    Ok(PerturbationSolve {
        params_start: *params0,
        params_solved: Params::new(g1, l1)?,
        order_m: m,
        residuals: [r1, r2],
    })
}

// ---------------------------------------------------------------------------
// Trap scene: the raster state shared by verification attempts
// ---------------------------------------------------------------------------

/// Rasterized state for one parameter pair at one cell size: the sampled
/// attractor, its hole-filled region, distance transforms, and the
/// first-level gap bound. Building the scene is the expensive part of
/// verification; individual `(u, v, eps)` checks against it are cheap.
pub struct TrapScene {
    pub params: Params,
    pub cell: f64,
    grid: Grid,
    /// Hausdorff bound between the kept sample and the attractor.
    sample_radius: f64,
    /// Dilation applied before hole filling, a whole number of cells.
    stamp_r: f64,
    x_mask: Mask,
    /// Distance to the stamped sample cells.
    sample_dist: Vec<f64>,
    /// Distance to the filled region.
    x_dist: Vec<f64>,
    /// Certified upper bound on the first-level cylinder gap.
    gap_upper: f64,
    opts: TrapOptions,
}

impl TrapScene {
    pub fn build(params: &Params, grid_cell: f64, opts: &TrapOptions) -> Result<TrapScene> {
        if grid_cell <= 0.0 {
            return Err(Error::Precondition("grid cell must be positive".into()));
        }
        let target = grid_cell * opts.sample_fraction;
        let quantum = grid_cell * opts.quantum_fraction;
        let (sample, trunc, dedup) =
            attractor_sample_adaptive(params, target, quantum, opts.max_points)?;
        // Kept points are exact cylinder offsets; the attractor lies
        // within `sample_radius` of them.
        let sample_radius = trunc + dedup;

        let extent = params.extent();
        // Pad generously: shifted copies and disks must stay inside.
        let pad = 8.0 * grid_cell + 0.5 * extent.norm();
        let grid = Grid::covering(
            PlanePoint::new(-extent.x, -extent.y),
            PlanePoint::new(extent.x, extent.y),
            pad,
            grid_cell,
        );
        if grid.len() > opts.max_cells {
            return Err(Error::ResourceLimit(format!(
                "raster needs {} cells (limit {})",
                grid.len(),
                opts.max_cells
            )));
        }

        let stamped = Mask::stamp_points(grid, &sample);
        let sample_dist = stamped.distance_transform();
        // Close coverage gaps before filling: dilating by the sample
        // radius makes the raster region a superset of the attractor, so
        // the flood fill cannot leak through sampling pinholes.
        let stamp_r = (sample_radius / grid_cell).ceil() * grid_cell;
        let mut dilated = Mask::empty(grid);
        for (id, bit) in dilated.bits.iter_mut().enumerate() {
            *bit = sample_dist[id] <= stamp_r;
        }
        let x_mask = dilated.filled();
        if x_mask.components8() != 1 {
            return Err(Error::TrapCheck {
                check: "region-connected",
                detail: format!(
                    "filled region splits into {} components",
                    x_mask.components8()
                ),
            });
        }
        let x_dist = x_mask.distance_transform();

        let gap = cylinder_gap_adaptive(params, grid_cell / 2.0)?;
        let gap_upper = gap.upper_estimate + 2.0 * gap.truncation_radius;

        drop(sample);
        Ok(TrapScene {
            params: *params,
            cell: grid_cell,
            grid,
            sample_radius,
            stamp_r,
            x_mask,
            sample_dist,
            x_dist,
            gap_upper,
            opts: *opts,
        })
    }

    fn lookup(&self, dist: &[f64], p: PlanePoint) -> f64 {
        match self.grid.cell_of(p) {
            Some((i, j)) => dist[self.grid.idx(i, j)],
            None => f64::INFINITY,
        }
    }

    /// Check the trap conditions for the word pair `(u, v)` against this
    /// scene with disk radius `eps`.
    ///
    /// The disk is `D = N_eps(X)` with holes filled; witnesses are
    /// alternating cells on the outer contour of `X union (X + w)`,
    /// `w = normalized_translation(u, v)`. Every check must clear its
    /// margin after subtracting the geometric slop; failures name the
    /// condition and the shortfall.
    pub fn verify(&self, u: &SignedWord, v: &SignedWord, eps: f64) -> Result<TrapCertificate> {
        if eps <= 0.0 {
            return Err(Error::Precondition("eps must be positive".into()));
        }
        // Normalize so that u starts with p; the certificate reports the
        // words in that orientation.
        let (u, v) = {
            let first = u
                .letter_at(0)
                .ok_or_else(|| Error::InvalidWord("empty word".into()))?;
            if first == crate::ifs::Letter::P {
                (u.clone(), v.clone())
            } else {
                (v.clone(), u.clone())
            }
        };
        let w = normalized_translation(&u, &v, &self.params)?;
        let m = u.finite_len().expect("finite words checked");
        let grid = &self.grid;
        let cell_diag = self.cell * std::f64::consts::SQRT_2;
        let slop = self.sample_radius + cell_diag;
        let margin_tol = self.opts.margin_tol.unwrap_or(self.cell);

        // The shifted copy must stay on the raster.
        let ext = self.params.extent();
        let corners = [
            PlanePoint::new(-ext.x, -ext.y) + w,
            PlanePoint::new(ext.x, ext.y) + w,
        ];
        if corners.iter().any(|c| grid.cell_of(*c).is_none()) {
            return Err(Error::Precondition(format!(
                "translation ({:.3}, {:.3}) leaves the raster; enlarge the pad",
                w.x, w.y
            )));
        }

        // Disk D = N_eps(X), holes filled, must be connected.
        let mut disk = Mask::empty(*grid);
        for (id, bit) in disk.bits.iter_mut().enumerate() {
            *bit = self.x_dist[id] <= eps;
        }
        let disk = disk.filled();
        if disk.components8() != 1 {
            return Err(Error::TrapCheck {
                check: "disk-connected",
                detail: "eps-disk around the region is disconnected".into(),
            });
        }

        // Union of X and X + w; overlap must be nonempty.
        let mut union = Mask::empty(*grid);
        let mut overlap = 0usize;
        for j in 0..grid.h {
            for i in 0..grid.w {
                let c = grid.center(i, j);
                let in_x = self.x_mask.get(i, j);
                let in_shift = self.x_mask.contains_point(c - w);
                union.bits[grid.idx(i, j)] = in_x || in_shift;
                if in_x && in_shift {
                    overlap += 1;
                }
            }
        }
        if overlap == 0 {
            return Err(Error::TrapCheck {
                check: "overlap",
                detail: "X and X + w do not intersect on the raster".into(),
            });
        }
        if union.components8() != 1 {
            return Err(Error::TrapCheck {
                check: "union-connected",
                detail: "X union (X + w) is disconnected".into(),
            });
        }

        // Outer contour, classified into single-set runs.
        #[derive(Clone, Copy, PartialEq)]
        enum Side {
            XOnly,
            ShiftOnly,
            Both,
        }
        let classify = |&(i, j): &(usize, usize)| {
            let c = grid.center(i, j);
            match (self.x_mask.get(i, j), self.x_mask.contains_point(c - w)) {
                (true, false) => Side::XOnly,
                (false, true) => Side::ShiftOnly,
                _ => Side::Both,
            }
        };
        let contour = trace_outer_contour(&union);
        let mut runs: Vec<(Side, Vec<(usize, usize)>)> = Vec::new();
        for cell in &contour {
            let side = classify(cell);
            if side == Side::Both {
                continue;
            }
            match runs.last_mut() {
                Some((s, cells)) if *s == side => cells.push(*cell),
                _ => runs.push((side, vec![*cell])),
            }
        }
        if runs.len() >= 2 && runs.first().map(|r| r.0) == runs.last().map(|r| r.0) {
            let (_, tail) = runs.pop().unwrap();
            runs[0].1.splice(0..0, tail);
        }

        // Representative of a run: the cell farthest from the other set.
        let rep = |side: Side, cells: &[(usize, usize)]| -> (PlanePoint, f64) {
            let mut best = (grid.center(cells[0].0, cells[0].1), f64::NEG_INFINITY);
            for &(i, j) in cells {
                let c = grid.center(i, j);
                let d = match side {
                    Side::XOnly => self.lookup(&self.sample_dist, c - w),
                    Side::ShiftOnly => self.sample_dist[grid.idx(i, j)],
                    Side::Both => unreachable!(),
                };
                if d > best.1 {
                    best = (c, d);
                }
            }
            best
        };

        // A fractal boundary sheds many shallow runs; only runs whose
        // representative clears the disk radius plus slop can serve as
        // witnesses. The filtered cyclic sequence keeps contour order, so
        // any label pattern X,S,X,S inside it is a genuine alternation.
        let needed = eps + slop + margin_tol;
        let mut strong: Vec<(Side, PlanePoint, f64)> = Vec::new();
        for (side, cells) in &runs {
            let (p, d) = rep(*side, cells);
            if d > needed {
                strong.push((*side, p, d));
            }
        }
        // Merge cyclically adjacent same-label survivors, keeping the
        // deepest representative.
        let mut merged: Vec<(Side, PlanePoint, f64)> = Vec::new();
        for &(side, p, d) in &strong {
            match merged.last_mut() {
                Some((s, bp, bd)) if *s == side => {
                    if d > *bd {
                        *bp = p;
                        *bd = d;
                    }
                }
                _ => merged.push((side, p, d)),
            }
        }
        if merged.len() >= 2 && merged.first().map(|r| r.0) == merged.last().map(|r| r.0) {
            let last = merged.pop().unwrap();
            if last.2 > merged[0].2 {
                merged[0] = (merged[0].0, last.1, last.2);
            }
        }
        if merged.len() < 4 {
            return Err(Error::TrapCheck {
                check: "alternation",
                detail: format!(
                    "contour yields {} strong alternating arcs (of {} runs) at eps {eps:.4e}; need 4",
                    merged.len(),
                    runs.len()
                ),
            });
        }
        // The merged sequence alternates by construction; pick the window
        // of four starting on the X side with the deepest shallowest arc.
        let n = merged.len();
        let mut best_quad: Option<([(PlanePoint, f64); 4], f64)> = None;
        for s in 0..n {
            if merged[s].0 != Side::XOnly {
                continue;
            }
            let pick = |k: usize| {
                let (_, p, d) = merged[(s + k) % n];
                (p, d)
            };
            let quad = [pick(0), pick(1), pick(2), pick(3)];
            let score = quad.iter().map(|(_, d)| *d).fold(f64::INFINITY, f64::min);
            if best_quad.as_ref().map(|(_, s0)| score > *s0).unwrap_or(true) {
                best_quad = Some((quad, score));
            }
        }
        let Some((quad, _)) = best_quad else {
            return Err(Error::TrapCheck {
                check: "alternation",
                detail: "no strong alternating quadruple starts on the X side".into(),
            });
        };
        let raw = [quad[0].0, quad[1].0, quad[2].0, quad[3].0];

        // Escape margins: X-side points clear N_eps(X + w), shifted-side
        // points clear N_eps(X). Positive by construction of the filter;
        // recorded for the certificate.
        let margins = [
            quad[0].1 - slop - eps,
            quad[2].1 - slop - eps,
            quad[1].1 - slop - eps,
            quad[3].1 - slop - eps,
        ];
        for (k, &mg) in margins.iter().enumerate() {
            if mg <= margin_tol {
                let side = if k < 2 { "attractor-side" } else { "shifted-side" };
                return Err(Error::TrapCheck {
                    check: "witness-escape",
                    detail: format!(
                        "{side} witness margin {mg:.4e} below required {margin_tol:.4e} at eps {eps:.4e}"
                    ),
                });
            }
        }

        // Witnesses must come from their respective sets (within the stamp
        // fattening).
        let on_set_tol = self.stamp_r + 2.0 * cell_diag + self.sample_radius;
        for &p in [raw[1], raw[3]].iter() {
            let d = self.lookup(&self.sample_dist, p - w);
            if d > on_set_tol {
                return Err(Error::TrapCheck {
                    check: "witness-on-copy",
                    detail: format!("shifted witness sits {d:.4e} from the translated set"),
                });
            }
        }
        for &p in [raw[0], raw[2]].iter() {
            let d = self.lookup(&self.sample_dist, p);
            if d > on_set_tol {
                return Err(Error::TrapCheck {
                    check: "witness-on-set",
                    detail: format!("witness sits {d:.4e} from the sampled set"),
                });
            }
        }

        // First-level cylinder gap must sit below eps.
        if self.gap_upper + margin_tol >= eps {
            return Err(Error::TrapCheck {
                check: "cylinder-gap",
                detail: format!(
                    "gap upper bound {:.4e} not below eps {eps:.4e}",
                    self.gap_upper
                ),
            });
        }

        // Half-eps containment: the stamp dilation puts every attractor
        // point inside an X cell, so any point of the complement of D is
        // farther than eps from it, up to half a cell diagonal.
        let containment_margin = eps / 2.0 - cell_diag / 2.0;
        if containment_margin <= margin_tol {
            return Err(Error::TrapCheck {
                check: "disk-containment",
                detail: format!(
                    "half-eps neighborhood margin {containment_margin:.4e} below {margin_tol:.4e}"
                ),
            });
        }

        // Map the witnesses through v: v(x) = T^m x + s_v. Shifted-side
        // points land in u(A) \ v(D) and are labeled p; attractor-side
        // points land in v(A) \ u(D) and are labeled q.
        let s_v = cylinder_offset(&v, &self.params)?;
        let apply_v = |p: PlanePoint| -> PlanePoint {
            let mut t = p;
            for _ in 0..m {
                t = self.params.apply_t(t);
            }
            t + s_v
        };
        Ok(TrapCertificate {
            params_solved: self.params,
            u,
            v,
            order_m: m,
            w,
            disk_eps: eps,
            witnesses: TrapWitnesses {
                p_plus: apply_v(raw[1]),
                p_minus: apply_v(raw[3]),
                q_plus: apply_v(raw[0]),
                q_minus: apply_v(raw[2]),
                margins,
            },
            tolerances: TrapTolerances {
                cell: self.cell,
                eps,
                margin_tol,
                slop,
                sample_radius: self.sample_radius,
                gap_upper_bound: self.gap_upper,
            },
            solve: None,
            rigorous: false,
        })
    }
}

pub fn verify_trap(
    params: &Params,
    u: &SignedWord,
    v: &SignedWord,
    eps: f64,
    grid_cell: f64,
) -> Result<TrapCertificate> {
    verify_trap_with(params, u, v, eps, grid_cell, &TrapOptions::default())
}

/// One-shot trap verification; builds a fresh [`TrapScene`] and checks the
/// pair against it.
pub fn verify_trap_with(
    params: &Params,
    u: &SignedWord,
    v: &SignedWord,
    eps: f64,
    grid_cell: f64,
    opts: &TrapOptions,
) -> Result<TrapCertificate> {
    TrapScene::build(params, grid_cell, opts)?.verify(u, v, eps)
}

// ---------------------------------------------------------------------------
// End-to-end certification
// ---------------------------------------------------------------------------

/// Result of the retry pipeline: certificates found plus the attempt log.
#[derive(Clone, Debug, Serialize)]
pub struct CertifyOutcome {
    pub certificates: Vec<TrapCertificate>,
    pub trace: Vec<String>,
}

/// Pipeline knobs.
#[derive(Clone, Debug)]
pub struct CertifyOptions {
    pub m_schedule: Vec<usize>,
    /// Normal-displacement shrink factors applied to the trap vector.
    pub shrink_schedule: Vec<f64>,
    /// Disk radii as fractions of the gap clearance.
    pub eps_fractions: Vec<f64>,
    pub solve_tol: f64,
    /// Minimum raster cells across the attractor diameter.
    pub raster_cells: usize,
    pub max_certificates: usize,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            m_schedule: vec![30, 60, 90, M_MAX_DEFAULT],
            shrink_schedule: vec![1.0, 0.5],
            eps_fractions: vec![0.25, 0.125],
            solve_tol: 1e-12,
            raster_cells: 512,
            max_certificates: 1,
        }
    }
}

pub fn certify_interior(
    params0: &Params,
    f: &BSeries,
    search_radius: f64,
) -> Result<CertifyOutcome> {
    certify_interior_with(params0, f, search_radius, &CertifyOptions::default())
}

/// Full certification pipeline:
///
/// 1. find the gap segment and a trap-like vector at `params0`;
/// 2. split `f` into its induced word pair and truncate to order `m`;
/// 3. solve for a nearby parameter making the vector a normalized
///    translation vector (the cylinder translation carries twice the series
///    value because the two maps differ by `(2, 2)`, so the solver receives
///    `w / 2`);
/// 4. verify the trap at the solved parameter.
///
/// Retries sweep increasing `m`, vectors shrunk toward the gap segment, and
/// shrinking disk radii; certificates farther than `search_radius` from
/// `params0` are discarded. An exhausted sweep returns an empty list plus
/// the attempt trace.
pub fn certify_interior_with(
    params0: &Params,
    f: &BSeries,
    search_radius: f64,
    opts: &CertifyOptions,
) -> Result<CertifyOutcome> {
    if params0.on_diagonal() {
        return Err(Error::Precondition("diagonal pairs are excluded".into()));
    }
    if crate::bseries::trivial_region_test(params0.gamma(), params0.lambda())
        != crate::bseries::TrivialRegion::Nontrivial
    {
        return Err(Error::Precondition(
            "certification targets the nontrivial region".into(),
        ));
    }
    for x0 in [params0.gamma(), params0.lambda()] {
        let resid = f.eval(x0, Trunc::Infinite)?.abs();
        if resid > 1e-8 {
            return Err(Error::Precondition(format!(
                "series does not vanish at {x0} (residual {resid:.3e})"
            )));
        }
        let d1 = f.eval_derivative(x0, 1, Trunc::Infinite)?.abs();
        if d1 < 1e-6 {
            return Err(Error::Precondition(format!(
                "zero at {x0} is not numerically simple (|f'| = {d1:.3e})"
            )));
        }
    }

    let mut trace = Vec::new();
    let seg = gap_segment(params0)?;
    trace.push(format!(
        "gap segment {} -> {} clearance {:.4e}",
        seg.a_address, seg.b_address, seg.clearance
    ));
    let extent = params0.extent();
    let diameter = 2.0 * extent.norm();
    // Resolve the notch to a few dozen cells without letting the raster
    // explode.
    let cell = (seg.clearance / 24.0)
        .min(diameter / opts.raster_cells as f64)
        .max(diameter / 4096.0);
    // Side voting only needs a coarse cloud.
    let (sample, _, _) =
        attractor_sample_adaptive(params0, seg.clearance / 4.0, seg.clearance / 8.0, 1 << 20)?;
    let w_full = trap_like_vector(params0, &seg, &sample)?;
    trace.push(format!("trap vector ({:.5}, {:.5})", w_full.x, w_full.y));

    let (u_inf, v_inf) = words_from_series(f);
    let mid = (seg.a + seg.b) * 0.5;
    let mut certificates = Vec::new();

    // Settle the sampler quantum once: prefer a quarter cell, but coarsen
    // until the point budget holds (the coverage slop the verifier charges
    // grows in step).
    let mut trap_opts = TrapOptions::default();
    let margin_budget = seg.clearance * (1.0 - params0.l_factor()) / 8.0;
    let mut q = (cell * trap_opts.quantum_fraction).min(margin_budget.max(cell / 8.0));
    loop {
        match attractor_sample_adaptive(
            params0,
            cell * trap_opts.sample_fraction,
            q,
            trap_opts.max_points,
        ) {
            Ok(_) => break,
            Err(Error::ResourceLimit(_)) if q < 4.0 * cell => {
                q *= 2.0;
                trace.push(format!("sampler over budget; coarsening quantum to {q:.3e}"));
            }
            Err(e) => return Err(e),
        }
    }
    trap_opts.quantum_fraction = q / cell;

    let mut precision_exhausted = false;
    'outer: for &m in &opts.m_schedule {
        if precision_exhausted {
            break;
        }
        let u = u_inf.truncate(m)?;
        let v = v_inf.truncate(m)?;
        for &shrink in &opts.shrink_schedule {
            // Shrink the displacement off the segment, not the vector: the
            // target stays inside the clearance ball around the midpoint.
            let v_target = mid + (w_full + seg.a - mid) * shrink;
            let w = v_target - seg.a;
            let solve = match solve_perturbation(
                params0,
                f,
                w * 0.5,
                m,
                search_radius,
                opts.solve_tol,
            ) {
                Ok(s) => s,
                Err(e) => {
                    trace.push(format!("m={m} shrink={shrink}: solve failed: {e}"));
                    continue;
                }
            };
            let p1 = solve.params_solved;
            let dist = (p1.gamma() - params0.gamma())
                .abs()
                .max((p1.lambda() - params0.lambda()).abs());
            if dist > search_radius {
                trace.push(format!(
                    "m={m} shrink={shrink}: solved parameter {dist:.3e} away, over budget"
                ));
                continue;
            }
            // The recovered translation vector divides by T^m; once m
            // outruns double precision the division turns to noise, and
            // larger m only gets worse.
            let w_actual = normalized_translation(&u, &v, &p1)?;
            let w_err = (w_actual - w).norm();
            if w_err > 0.02 * w.norm().max(1e-9) {
                trace.push(format!(
                    "m={m} shrink={shrink}: translation vector off by {w_err:.3e}; order \
                     exceeds double precision for this pair"
                ));
                precision_exhausted = true;
                break;
            }
            let scene = match TrapScene::build(&p1, cell, &trap_opts) {
                Ok(s) => s,
                Err(e) => {
                    trace.push(format!("m={m} shrink={shrink}: scene build failed: {e}"));
                    continue;
                }
            };
            for &frac in &opts.eps_fractions {
                let eps = seg.clearance * frac;
                match scene.verify(&u, &v, eps) {
                    Ok(mut cert) => {
                        cert.solve = Some(solve);
                        trace.push(format!(
                            "m={m} shrink={shrink} eps={eps:.4e}: certificate, min margin {:.4e}",
                            cert.witnesses
                                .margins
                                .iter()
                                .fold(f64::INFINITY, |a, &b| a.min(b))
                        ));
                        certificates.push(cert);
                        if certificates.len() >= opts.max_certificates {
                            break 'outer;
                        }
                    }
                    Err(e) => {
                        trace.push(format!("m={m} shrink={shrink} eps={eps:.4e}: {e}"));
                    }
                }
            }
        }
    }
    Ok(CertifyOutcome {
        certificates,
        trace,
    })
}

// ---------------------------------------------------------------------------
// Short-hop paths
// ---------------------------------------------------------------------------

/// Diagnostic chain through depth-`depth` cylinder representatives from
/// `pi(a)` to `pi(b)` with hops bounded by twice the cylinder diameter.
/// Greedy toward the target with backtracking; errors if no chain exists at
/// this depth.
pub fn short_hop_path(
    params: &Params,
    a: &SignedWord,
    b: &SignedWord,
    depth: usize,
) -> Result<Vec<PlanePoint>> {
    if depth == 0 {
        return Err(Error::Precondition("depth must be positive".into()));
    }
    let pa = crate::ifs::eval_address(a, params, depth.max(64))?;
    let pb = crate::ifs::eval_address(b, params, depth.max(64))?;
    if pa.dist(pb) == 0.0 {
        return Ok(vec![pa]);
    }
    let sample = crate::ifs::attractor_sample(params, depth)?;
    let diam_bound = 2.0 * params.extent().norm();
    let hop = 2.0 * params.l_factor().powi(depth as i32) * diam_bound;

    let nearest = |p: PlanePoint| -> usize {
        let mut best = (0usize, f64::INFINITY);
        for (i, s) in sample.iter().enumerate() {
            let d = s.dist_sq(p);
            if d < best.1 {
                best = (i, d);
            }
        }
        best.0
    };
    let start = nearest(pa);
    let goal = nearest(pb);

    // Greedy best-first toward the goal with backtracking over the
    // hop-bounded neighbor graph.
    let mut visited = vec![false; sample.len()];
    let mut stack = vec![start];
    let mut parent = vec![usize::MAX; sample.len()];
    visited[start] = true;
    let hop_sq = hop * hop;
    while let Some(&cur) = stack.last() {
        if cur == goal {
            break;
        }
        let mut best: Option<(f64, usize)> = None;
        for (i, s) in sample.iter().enumerate() {
            if !visited[i] && sample[cur].dist_sq(*s) <= hop_sq {
                let score = s.dist_sq(sample[goal]);
                if best.map(|(b, _)| score < b).unwrap_or(true) {
                    best = Some((score, i));
                }
            }
        }
        match best {
            Some((_, next)) => {
                visited[next] = true;
                parent[next] = cur;
                stack.push(next);
            }
            None => {
                stack.pop();
            }
        }
    }
    if stack.is_empty() {
        return Err(Error::IncreaseDepth(format!(
            "no hop chain at depth {depth} with hop bound {hop:.4e}"
        )));
    }
    // Reconstruct along the parent chain for a backtrack-free path.
    let mut path = Vec::new();
    let mut cur = goal;
    while cur != usize::MAX {
        path.push(sample[cur]);
        if cur == start {
            break;
        }
        cur = parent[cur];
    }
    path.reverse();
    let mut full = vec![pa];
    full.extend(path);
    full.push(pb);
    Ok(full)
}
