//! Uniform-grid rasterization support for the trap verifier: occupancy
//! masks, hole filling, connected components, Euclidean distance
//! transforms, and outer-contour tracing.

use crate::geom::PlanePoint;

/// Geometry of a uniform cell grid. `x0, y0` is the lower-left corner of
/// cell `(0, 0)`; cells are squares of side `cell`.
#[derive(Clone, Copy, Debug)]
pub struct Grid {
    pub x0: f64,
    pub y0: f64,
    pub cell: f64,
    pub w: usize,
    pub h: usize,
}

impl Grid {
    /// Grid covering `[min, max]` padded by `pad` world units.
    pub fn covering(min: PlanePoint, max: PlanePoint, pad: f64, cell: f64) -> Grid {
        let x0 = min.x - pad;
        let y0 = min.y - pad;
        let w = (((max.x + pad) - x0) / cell).ceil() as usize + 1;
        let h = (((max.y + pad) - y0) / cell).ceil() as usize + 1;
        Grid { x0, y0, cell, w, h }
    }

    pub fn len(&self) -> usize {
        self.w * self.h
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.w + i
    }

    /// Cell containing `p`, if inside the grid.
    pub fn cell_of(&self, p: PlanePoint) -> Option<(usize, usize)> {
        let i = ((p.x - self.x0) / self.cell).floor();
        let j = ((p.y - self.y0) / self.cell).floor();
        if i >= 0.0 && j >= 0.0 && (i as usize) < self.w && (j as usize) < self.h {
            Some((i as usize, j as usize))
        } else {
            None
        }
    }

    pub fn center(&self, i: usize, j: usize) -> PlanePoint {
        PlanePoint::new(
            self.x0 + (i as f64 + 0.5) * self.cell,
            self.y0 + (j as f64 + 0.5) * self.cell,
        )
    }
}

/// Boolean occupancy mask over a grid.
#[derive(Clone, Debug)]
pub struct Mask {
    pub grid: Grid,
    pub bits: Vec<bool>,
}

impl Mask {
    pub fn empty(grid: Grid) -> Mask {
        Mask {
            bits: vec![false; grid.len()],
            grid,
        }
    }

    pub fn stamp_points(grid: Grid, points: &[PlanePoint]) -> Mask {
        let mut m = Mask::empty(grid);
        for &p in points {
            if let Some((i, j)) = grid.cell_of(p) {
                m.bits[grid.idx(i, j)] = true;
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[self.grid.idx(i, j)]
    }

    pub fn contains_point(&self, p: PlanePoint) -> bool {
        self.grid
            .cell_of(p)
            .map(|(i, j)| self.get(i, j))
            .unwrap_or(false)
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Cells reachable 4-connectedly from the grid border through the
    /// complement; anything else is the set or a hole in it.
    pub fn outside(&self) -> Vec<bool> {
        let (w, h) = (self.grid.w, self.grid.h);
        let mut out = vec![false; self.bits.len()];
        let mut queue = std::collections::VecDeque::new();
        let push = |out: &mut Vec<bool>, queue: &mut std::collections::VecDeque<(usize, usize)>, i: usize, j: usize| {
            let id = self.grid.idx(i, j);
            if !self.bits[id] && !out[id] {
                out[id] = true;
                queue.push_back((i, j));
            }
        };
        for i in 0..w {
            push(&mut out, &mut queue, i, 0);
            push(&mut out, &mut queue, i, h - 1);
        }
        for j in 0..h {
            push(&mut out, &mut queue, 0, j);
            push(&mut out, &mut queue, w - 1, j);
        }
        while let Some((i, j)) = queue.pop_front() {
            let mut nb = [(0usize, 0usize); 4];
            let mut n = 0;
            if i > 0 {
                nb[n] = (i - 1, j);
                n += 1;
            }
            if i + 1 < w {
                nb[n] = (i + 1, j);
                n += 1;
            }
            if j > 0 {
                nb[n] = (i, j - 1);
                n += 1;
            }
            if j + 1 < h {
                nb[n] = (i, j + 1);
                n += 1;
            }
            for &(a, b) in &nb[..n] {
                push(&mut out, &mut queue, a, b);
            }
        }
        out
    }

    /// Fill holes: everything not 4-reachable from the border becomes set.
    pub fn filled(&self) -> Mask {
        let out = self.outside();
        let mut m = self.clone();
        for (id, bit) in m.bits.iter_mut().enumerate() {
            *bit = !out[id];
        }
        m
    }

    /// Number of 8-connected components.
    pub fn components8(&self) -> usize {
        let (w, h) = (self.grid.w, self.grid.h);
        let mut seen = vec![false; self.bits.len()];
        let mut count = 0;
        let mut stack = Vec::new();
        for j in 0..h {
            for i in 0..w {
                let id = self.grid.idx(i, j);
                if !self.bits[id] || seen[id] {
                    continue;
                }
                count += 1;
                seen[id] = true;
                stack.push((i, j));
                while let Some((a, b)) = stack.pop() {
                    for dj in -1i64..=1 {
                        for di in -1i64..=1 {
                            let (x, y) = (a as i64 + di, b as i64 + dj);
                            if x < 0 || y < 0 || x as usize >= w || y as usize >= h {
                                continue;
                            }
                            let nid = self.grid.idx(x as usize, y as usize);
                            if self.bits[nid] && !seen[nid] {
                                seen[nid] = true;
                                stack.push((x as usize, y as usize));
                            }
                        }
                    }
                }
            }
        }
        count
    }

    /// Exact Euclidean distance (world units) from each cell center to the
    /// nearest set cell center.
    pub fn distance_transform(&self) -> Vec<f64> {
        let (w, h) = (self.grid.w, self.grid.h);
        const INF: f64 = 1e30;
        // Column pass: squared distance in cell units to the nearest set
        // cell within each column.
        let mut g = vec![INF; self.bits.len()];
        for i in 0..w {
            let mut col: Vec<f64> = (0..h)
                .map(|j| if self.bits[self.grid.idx(i, j)] { 0.0 } else { INF })
                .collect();
            col = dt_1d(&col);
            for (j, v) in col.into_iter().enumerate() {
                g[self.grid.idx(i, j)] = v;
            }
        }
        // Row pass over the column results.
        let mut d = vec![0.0; self.bits.len()];
        for j in 0..h {
            let row: Vec<f64> = (0..w).map(|i| g[self.grid.idx(i, j)]).collect();
            let row = dt_1d(&row);
            for (i, v) in row.into_iter().enumerate() {
                d[self.grid.idx(i, j)] = v.sqrt() * self.grid.cell;
            }
        }
        d
    }

    /// Dilate by radius `r` (world units) and fill holes of the result.
    pub fn dilated_filled(&self, r: f64) -> Mask {
        let d = self.distance_transform();
        let mut m = Mask::empty(self.grid);
        for (id, bit) in m.bits.iter_mut().enumerate() {
            *bit = d[id] <= r;
        }
        m.filled()
    }
}

/// 1-D squared-distance transform (lower envelope of parabolas).
fn dt_1d(f: &[f64]) -> Vec<f64> {
    let n = f.len();
    let mut d = vec![0.0; n];
    let mut v = vec![0usize; n];
    let mut z = vec![0.0f64; n + 1];
    let mut k = 0usize;
    v[0] = 0;
    z[0] = -1e30;
    z[1] = 1e30;
    for q in 1..n {
        let sq = |a: usize| (a * a) as f64;
        let mut s;
        loop {
            s = ((f[q] + sq(q)) - (f[v[k]] + sq(v[k]))) / (2.0 * (q as f64 - v[k] as f64));
            if s <= z[k] && k > 0 {
                k -= 1;
            } else {
                break;
            }
        }
        k += 1;
        v[k] = q;
        z[k] = s;
        z[k + 1] = 1e30;
    }
    let mut k = 0usize;
    for q in 0..n {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let dq = q as f64 - v[k] as f64;
        d[q] = dq * dq + f[v[k]];
    }
    d
}

/// Trace the outer contour of the single 8-connected blob in the mask by
/// Moore-neighbor tracing with Jacob's stopping criterion. Returns boundary
/// cells in cyclic order.
pub fn trace_outer_contour(mask: &Mask) -> Vec<(usize, usize)> {
    let (w, h) = (mask.grid.w as i64, mask.grid.h as i64);
    // Start: first set cell in scan order; its west neighbor is empty.
    let mut start = None;
    'scan: for j in 0..mask.grid.h {
        for i in 0..mask.grid.w {
            if mask.get(i, j) {
                start = Some((i as i64, j as i64));
                break 'scan;
            }
        }
    }
    let Some(start) = start else {
        return Vec::new();
    };
    const NB: [(i64, i64); 8] = [
        (-1, 0),
        (-1, -1),
        (0, -1),
        (1, -1),
        (1, 0),
        (1, 1),
        (0, 1),
        (-1, 1),
    ];
    let set = |c: (i64, i64)| -> bool {
        c.0 >= 0 && c.1 >= 0 && c.0 < w && c.1 < h && mask.get(c.0 as usize, c.1 as usize)
    };
    let dir_of = |from: (i64, i64), to: (i64, i64)| -> usize {
        let d = (to.0 - from.0, to.1 - from.1);
        NB.iter().position(|&n| n == d).expect("adjacent cells")
    };
    let mut contour = Vec::new();
    let mut cur = start;
    let mut back = (start.0 - 1, start.1);
    let first_state = (cur, back);
    let cap = 8 * mask.grid.len();
    loop {
        contour.push((cur.0 as usize, cur.1 as usize));
        let d0 = dir_of(cur, back);
        let mut next = None;
        let mut last_empty = back;
        for step in 1..=8 {
            let d = (d0 + step) % 8;
            let cand = (cur.0 + NB[d].0, cur.1 + NB[d].1);
            if set(cand) {
                next = Some((cand, last_empty));
                break;
            }
            last_empty = cand;
        }
        match next {
            None => break, // isolated single cell
            Some((n, b)) => {
                cur = n;
                back = b;
            }
        }
        if (cur, back) == first_state || contour.len() > cap {
            break;
        }
    }
    contour
}
