//! Escape-time membership testing and tiled, parallel parameter-space
//! rendering.
//!
//! Membership searches breadth-first over residue pairs
//!
//! ```text
//! r_0 = (1, 1),    r_{n+1} = (r_n^(g)/gamma + b, r_n^(l)/lambda + b),
//! b in {-1, 0, 1},
//! ```
//!
//! pruning a branch once a component exceeds `|x|/(1-|x|)`: a coefficient
//! prefix whose residue passes that bound cannot extend to a common zero,
//! by the geometric tail estimate. Surviving to the depth cap is one-sided
//! evidence of membership; escape is sound.

use crate::error::{Error, Result};
use crate::ifs::Params;
use num_complex::Complex64;
use serde::Serialize;
use std::collections::HashSet;
use std::io::Write;

/// Environment variable overriding the render worker-pool size.
pub const THREADS_ENV: &str = "LOCUSLAB_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    Survived,
    Escaped,
}

/// Outcome of the membership search.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EscapeResult {
    pub status: Status,
    /// Deepest level reached: `max_depth` when survived, otherwise the
    /// number of levels that held a live branch.
    pub depth: u32,
    pub branch_count_peak: usize,
}

/// Search knobs. Defaults follow the renderer configuration; soundness
/// tests disable deduplication.
#[derive(Clone, Debug)]
pub struct MembershipOptions {
    /// Residue quantization cell; `None` disables dedup, `Some(0.0)` picks
    /// the default `(1 - L) * 1e-4`.
    pub dedup_q: Option<f64>,
    /// Widths of the greedy pre-pass beams that look for a surviving branch
    /// before the exhaustive search runs.
    pub beam_widths: Vec<usize>,
    /// Breadth cap: a level exceeding this many deduplicated branches is
    /// treated as surviving (overwhelming branch mass), keeping worst-case
    /// pixels bounded.
    pub layer_cap: usize,
}

impl Default for MembershipOptions {
    fn default() -> Self {
        MembershipOptions {
            dedup_q: Some(0.0),
            beam_widths: vec![8, 64, 512],
            layer_cap: 300_000,
        }
    }
}

pub fn membership(params: &Params, max_depth: u32) -> Result<EscapeResult> {
    membership_with(params, max_depth, &MembershipOptions::default())
}

pub fn membership_with(
    params: &Params,
    max_depth: u32,
    opts: &MembershipOptions,
) -> Result<EscapeResult> {
    let (g, l) = (params.gamma(), params.lambda());
    if g == 0.0 || l == 0.0 {
        return Err(Error::Domain("membership needs nonzero eigenvalues".into()));
    }
    let bound_g = g.abs() / (1.0 - g.abs());
    let bound_l = l.abs() / (1.0 - l.abs());
    let alive = |r: (f64, f64)| r.0.abs() <= bound_g && r.1.abs() <= bound_l;
    let root = (1.0, 1.0);
    if !alive(root) {
        return Ok(EscapeResult {
            status: Status::Escaped,
            depth: 0,
            branch_count_peak: 0,
        });
    }
    if max_depth == 0 {
        return Ok(EscapeResult {
            status: Status::Survived,
            depth: 0,
            branch_count_peak: 1,
        });
    }

    let children = |r: (f64, f64)| {
        let base = (r.0 / g, r.1 / l);
        [-1.0f64, 0.0, 1.0].map(|b| (base.0 + b, base.1 + b))
    };

    // Greedy beams: exhibit one true surviving branch cheaply.
    for &width in &opts.beam_widths {
        let mut frontier = vec![root];
        let mut depth = 0;
        while depth < max_depth && !frontier.is_empty() {
            let mut next: Vec<(f64, f64)> = frontier
                .iter()
                .flat_map(|&r| children(r))
                .filter(|&r| alive(r))
                .collect();
            // Score by normalized sup residue; stable ties keep this
            // deterministic.
            next.sort_by(|a, b| {
                let sa = (a.0.abs() / bound_g).max(a.1.abs() / bound_l);
                let sb = (b.0.abs() / bound_g).max(b.1.abs() / bound_l);
                sa.total_cmp(&sb).then(a.0.total_cmp(&b.0)).then(a.1.total_cmp(&b.1))
            });
            next.dedup();
            next.truncate(width);
            frontier = next;
            depth += 1;
        }
        if depth == max_depth && !frontier.is_empty() {
            return Ok(EscapeResult {
                status: Status::Survived,
                depth: max_depth,
                branch_count_peak: width,
            });
        }
    }

    // Exhaustive level-by-level search with optional dedup.
    let q = opts.dedup_q.map(|q| {
        if q > 0.0 {
            q
        } else {
            (1.0 - params.l_factor()) * 1e-4
        }
    });
    let mut layer = vec![root];
    let mut peak = 1usize;
    let mut depth = 0u32;
    while depth < max_depth {
        let mut next = Vec::with_capacity(layer.len() * 2);
        let mut seen: HashSet<(i64, i64)> = HashSet::new();
        for &r in &layer {
            for c in children(r) {
                if !alive(c) {
                    continue;
                }
                if let Some(q) = q {
                    let key = ((c.0 / q).round() as i64, (c.1 / q).round() as i64);
                    if !seen.insert(key) {
                        continue;
                    }
                }
                next.push(c);
            }
        }
        if next.is_empty() {
            return Ok(EscapeResult {
                status: Status::Escaped,
                depth: depth + 1,
                branch_count_peak: peak,
            });
        }
        peak = peak.max(next.len());
        if next.len() > opts.layer_cap {
            return Ok(EscapeResult {
                status: Status::Survived,
                depth: max_depth,
                branch_count_peak: peak,
            });
        }
        layer = next;
        depth += 1;
    }
    Ok(EscapeResult {
        status: Status::Survived,
        depth: max_depth,
        branch_count_peak: peak,
    })
}

/// Complex-parameter variant over a single residue with bound
/// `|z|/(1-|z|)`; cross-check for the sibling locus.
pub fn membership_m(z: Complex64, max_depth: u32) -> Result<EscapeResult> {
    let r = z.norm();
    if r == 0.0 || r >= 1.0 {
        return Err(Error::Domain(format!("need 0 < |z| < 1, got |z| = {r}")));
    }
    let bound = r / (1.0 - r);
    let root = Complex64::new(1.0, 0.0);
    if root.norm() > bound {
        return Ok(EscapeResult {
            status: Status::Escaped,
            depth: 0,
            branch_count_peak: 0,
        });
    }
    // Greedy beam, then exhaustive levels with dedup.
    let children = |c: Complex64| {
        let base = c / z;
        [-1.0f64, 0.0, 1.0].map(|b| base + b)
    };
    let mut frontier = vec![root];
    let mut depth = 0;
    while depth < max_depth && !frontier.is_empty() {
        let mut next: Vec<Complex64> = frontier
            .iter()
            .flat_map(|&c| children(c))
            .filter(|c| c.norm() <= bound)
            .collect();
        next.sort_by(|a, b| {
            a.norm_sqr()
                .total_cmp(&b.norm_sqr())
                .then(a.re.total_cmp(&b.re))
                .then(a.im.total_cmp(&b.im))
        });
        next.truncate(256);
        frontier = next;
        depth += 1;
    }
    if depth == max_depth && !frontier.is_empty() {
        return Ok(EscapeResult {
            status: Status::Survived,
            depth: max_depth,
            branch_count_peak: 256,
        });
    }

    let q = (1.0 - r) * 1e-4;
    let mut layer = vec![root];
    let mut peak = 1usize;
    let mut depth = 0u32;
    while depth < max_depth {
        let mut next = Vec::with_capacity(layer.len() * 2);
        let mut seen: HashSet<(i64, i64)> = HashSet::new();
        for &c in &layer {
            for ch in children(c) {
                if ch.norm() > bound {
                    continue;
                }
                let key = ((ch.re / q).round() as i64, (ch.im / q).round() as i64);
                if seen.insert(key) {
                    next.push(ch);
                }
            }
        }
        if next.is_empty() {
            return Ok(EscapeResult {
                status: Status::Escaped,
                depth: depth + 1,
                branch_count_peak: peak,
            });
        }
        peak = peak.max(next.len());
        if next.len() > 300_000 {
            return Ok(EscapeResult {
                status: Status::Survived,
                depth: max_depth,
                branch_count_peak: peak,
            });
        }
        layer = next;
        depth += 1;
    }
    Ok(EscapeResult {
        status: Status::Survived,
        depth: max_depth,
        branch_count_peak: peak,
    })
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

/// A parameter-window rendering job. The window must sit inside `(-1,1)^2`
/// (it is clipped with a warning otherwise) and `tile` must divide `res`.
#[derive(Clone, Copy, Debug)]
pub struct RenderJob {
    /// `(x0, x1, y0, y1)` in parameter space.
    pub window: (f64, f64, f64, f64),
    pub res: usize,
    pub max_depth: u32,
    pub tile: usize,
}

impl RenderJob {
    pub fn validated(mut self) -> Result<(Self, bool)> {
        if self.res == 0 || self.tile == 0 || self.res % self.tile != 0 {
            return Err(Error::Precondition(format!(
                "tile {} must divide resolution {}",
                self.tile, self.res
            )));
        }
        let (x0, x1, y0, y1) = self.window;
        if !(x0 < x1 && y0 < y1) {
            return Err(Error::Precondition("window must be nonempty".into()));
        }
        const LIM: f64 = 1.0 - 1e-9;
        let clip = |v: f64| v.clamp(-LIM, LIM);
        let clipped = (clip(x0), clip(x1), clip(y0), clip(y1));
        let was_clipped = clipped != self.window;
        self.window = clipped;
        Ok((self, was_clipped))
    }
}

/// Per-pixel classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PixelClass {
    /// `1/2 <= |gamma lambda| < 1`; connected by the volume argument, no
    /// search performed.
    Trivial,
    Survived,
    Escaped(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Palette {
    /// Survived black, trivial region gray, rest white.
    Binary,
    /// Escape depth mapped to intensity, survived black.
    EscapeDepth,
}

impl std::str::FromStr for Palette {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "binary" => Ok(Palette::Binary),
            "depth" => Ok(Palette::EscapeDepth),
            other => Err(Error::Parse(format!("unknown palette '{other}'"))),
        }
    }
}

/// A grayscale image; row 0 is the top of the picture (largest `y`).
#[derive(Clone, Debug, PartialEq)]
pub struct Image {
    pub w: usize,
    pub h: usize,
    pub pixels: Vec<u8>,
}

impl Image {
    /// Binary PGM (P5).
    pub fn write_pgm(&self, path: &std::path::Path) -> Result<()> {
        let mut out = Vec::with_capacity(self.pixels.len() + 32);
        write!(out, "P5\n{} {}\n255\n", self.w, self.h)?;
        out.extend_from_slice(&self.pixels);
        std::fs::write(path, out)?;
        Ok(())
    }
}

/// Parameter coordinates of the center of pixel `(i, j)` (row 0 on top).
pub fn pixel_center(job: &RenderJob, i: usize, j: usize) -> Params {
    let (x0, x1, y0, y1) = job.window;
    let g = x0 + (i as f64 + 0.5) * (x1 - x0) / job.res as f64;
    let l = y1 - (j as f64 + 0.5) * (y1 - y0) / job.res as f64;
    Params::new(g, l).expect("window clipped inside the domain")
}

/// Classify every pixel center; tiles run on a worker pool sized from
/// `LOCUSLAB_THREADS` or the available parallelism, assembled in tile
/// order so the result does not depend on the schedule.
pub fn classify(job: &RenderJob) -> Result<Vec<PixelClass>> {
    let (job, _) = job.validated()?;
    let tiles_per_side = job.res / job.tile;
    let tile_ids: Vec<usize> = (0..tiles_per_side * tiles_per_side).collect();
    let opts = MembershipOptions::default();

    let classify_tile = |tid: usize| -> Vec<PixelClass> {
        let tx = tid % tiles_per_side;
        let ty = tid / tiles_per_side;
        let mut out = Vec::with_capacity(job.tile * job.tile);
        for dj in 0..job.tile {
            for di in 0..job.tile {
                let i = tx * job.tile + di;
                let j = ty * job.tile + dj;
                let p = pixel_center(&job, i, j);
                let prod = (p.gamma() * p.lambda()).abs();
                let class = if prod >= 0.5 {
                    PixelClass::Trivial
                } else if p.gamma() == 0.0 || p.lambda() == 0.0 {
                    PixelClass::Escaped(0)
                } else {
                    match membership_with(&p, job.max_depth, &opts) {
                        Ok(r) => match r.status {
                            Status::Survived => PixelClass::Survived,
                            Status::Escaped => PixelClass::Escaped(r.depth),
                        },
                        Err(_) => PixelClass::Escaped(0),
                    }
                };
                out.push(class);
            }
        }
        out
    };

    let tile_results: Vec<Vec<PixelClass>> = run_on_pool(|| {
        use rayon::prelude::*;
        tile_ids.par_iter().map(|&t| classify_tile(t)).collect()
    })?;

    // Deterministic assembly in tile order.
    let mut grid = vec![PixelClass::Escaped(0); job.res * job.res];
    for (tid, tile) in tile_results.into_iter().enumerate() {
        let tx = tid % tiles_per_side;
        let ty = tid / tiles_per_side;
        for dj in 0..job.tile {
            for di in 0..job.tile {
                let i = tx * job.tile + di;
                let j = ty * job.tile + dj;
                grid[j * job.res + i] = tile[dj * job.tile + di];
            }
        }
    }
    Ok(grid)
}

/// Run `f` inside a rayon pool sized from `LOCUSLAB_THREADS` when set.
fn run_on_pool<T: Send>(f: impl FnOnce() -> T + Send) -> Result<T> {
    match std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::ResourceLimit(format!("worker pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

pub fn render(job: &RenderJob, palette: Palette) -> Result<Image> {
    let classes = classify(job)?;
    let (job, _) = job.validated()?;
    let pixels = classes
        .iter()
        .map(|c| match palette {
            Palette::Binary => match c {
                PixelClass::Trivial => 128,
                PixelClass::Survived => 0,
                PixelClass::Escaped(_) => 255,
            },
            Palette::EscapeDepth => match c {
                PixelClass::Trivial | PixelClass::Survived => 0,
                PixelClass::Escaped(d) => {
                    let t = (*d as f64 / job.max_depth.max(1) as f64).clamp(0.0, 1.0);
                    (55.0 + 200.0 * (1.0 - t)) as u8
                }
            },
        })
        .collect();
    Ok(Image {
        w: job.res,
        h: job.res,
        pixels,
    })
}
