//! Outlines of raster cell sets as closed rings along cell edges.
//!
//! Vertices are grid corners `(x, y)` with `x` the column edge index in
//! `0..=n_lon` and `y` the row edge index in `0..=n_lat`. Every edge keeps
//! its cell on the left, so outer rings wind counter-clockwise and holes
//! clockwise. Diagonal neighbours are kept in separate rings.

use alloc::vec;
use alloc::vec::Vec;

use crate::cells::CellSet;
use crate::grid::{GridShape, LatLonGrid};

/// A closed ring of grid-corner vertices; the first point is repeated last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ring {
    pub points: Vec<(u32, u32)>,
}

impl Ring {
    /// Twice the signed area in cell units; positive for outer rings.
    pub fn signed_area2(&self) -> i64 {
        self.points
            .windows(2)
            .map(|w| i64::from(w[0].0) * i64::from(w[1].1) - i64::from(w[1].0) * i64::from(w[0].1))
            .sum()
    }

    pub fn is_hole(&self) -> bool {
        self.signed_area2() < 0
    }

    /// Points as (lon, lat) cell-corner coordinates.
    pub fn lon_lat(&self, grid: &LatLonGrid) -> Vec<(f64, f64)> {
        let lon = grid.lon_edges();
        let lat = grid.lat_edges();
        self.points.iter().map(|&(x, y)| (lon[x as usize], lat[y as usize])).collect()
    }
}

// Direction bits: +x, +y, -x, -y.
const DIRS: [(i64, i64); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];

/// Traces every ring of `cells`, outer rings and holes alike, ordered by
/// their smallest vertex `(y, x)`.
pub fn trace_rings(cells: &CellSet, shape: GridShape) -> Vec<Ring> {
    let (n_lat, n_lon) = (shape.n_lat, shape.n_lon);
    let width = n_lon + 1;
    let vid = |x: usize, y: usize| y * width + x;
    let mut out_edges = vec![0u8; (n_lat + 1) * width];
    let mask = cells.to_mask(shape);
    let inside = |r: i64, c: i64| {
        r >= 0 && c >= 0 && (r as usize) < n_lat && (c as usize) < n_lon && mask[r as usize * n_lon + c as usize]
    };

    for cell in cells.iter() {
        let (r, c) = shape.row_col(cell);
        let (ri, ci) = (r as i64, c as i64);
        if !inside(ri - 1, ci) {
            out_edges[vid(c, r)] |= 1 << 0;
        }
        if !inside(ri, ci + 1) {
            out_edges[vid(c + 1, r)] |= 1 << 1;
        }
        if !inside(ri + 1, ci) {
            out_edges[vid(c + 1, r + 1)] |= 1 << 2;
        }
        if !inside(ri, ci - 1) {
            out_edges[vid(c, r + 1)] |= 1 << 3;
        }
    }

    let mut rings = Vec::new();
    // Scanning in vertex order means every ring starts at its smallest vertex.
    for start in 0..out_edges.len() {
        while out_edges[start] != 0 {
            let first_dir = out_edges[start].trailing_zeros() as usize;
            let mut pts: Vec<(u32, u32)> = Vec::new();
            let (mut x, mut y) = ((start % width) as i64, (start / width) as i64);
            let mut dir = first_dir;
            loop {
                pts.push((x as u32, y as u32));
                out_edges[vid(x as usize, y as usize)] &= !(1 << dir);
                x += DIRS[dir].0;
                y += DIRS[dir].1;
                let v = vid(x as usize, y as usize);
                if v == start && out_edges[v] & (1 << first_dir) == 0 {
                    break;
                }
                // Left turn first keeps diagonal cells apart.
                dir = [(dir + 1) % 4, dir, (dir + 3) % 4]
                    .into_iter()
                    .find(|&d| out_edges[v] & (1 << d) != 0)
                    .expect("cell edges form closed loops");
            }
            rings.push(Ring { points: close(compress(pts)) });
        }
    }
    rings
}

fn compress(pts: Vec<(u32, u32)>) -> Vec<(u32, u32)> {
    let n = pts.len();
    let at = |i: usize| pts[i % n];
    let collinear = |a: (u32, u32), b: (u32, u32), c: (u32, u32)| {
        let (ax, ay, bx, by, cx, cy) = (a.0 as i64, a.1 as i64, b.0 as i64, b.1 as i64, c.0 as i64, c.1 as i64);
        (bx - ax) * (cy - by) - (by - ay) * (cx - bx) == 0
    };
    (0..n).filter(|&i| !collinear(at(i + n - 1), at(i), at(i + 1))).map(at).collect()
}

fn close(mut pts: Vec<(u32, u32)>) -> Vec<(u32, u32)> {
    if let Some(&first) = pts.first() {
        pts.push(first);
    }
    pts
}
