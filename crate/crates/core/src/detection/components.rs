use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::calendar::Date;
use crate::cells::CellSet;
use crate::error::{Error, Result};
use crate::grid::{GridShape, LatLonGrid};

/// Neighbourhood used to grow connected regions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum Connectivity {
    #[default]
    Four,
    Eight,
}

impl FromStr for Connectivity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "4" | "four" => Ok(Connectivity::Four),
            "8" | "eight" => Ok(Connectivity::Eight),
            _ => Err(Error::InvalidArgument(format!("connectivity must be 4 or 8, got '{s}'"))),
        }
    }
}

impl fmt::Display for Connectivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Connectivity::Four => "4",
            Connectivity::Eight => "8",
        })
    }
}

/// Identifies a component by its date and its index among that day's
/// components (raster-scan order of first cell).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ComponentId {
    pub date: Date,
    pub index: u32,
}

impl fmt::Display for ComponentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.date, self.index)
    }
}

/// One day's connected region of cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub id: ComponentId,
    pub shape: GridShape,
    pub cells: CellSet,
    /// Cells with a 4-neighbour outside `cells` or on the grid edge.
    pub boundary: CellSet,
    /// Sum of `cos(lat)` over `cells`.
    pub weighted_area: f64,
}

impl Component {
    /// Builds a component from its cells, computing boundary and area.
    pub fn from_cells(id: ComponentId, cells: CellSet, grid: &LatLonGrid) -> Result<Self> {
        let shape = grid.shape();
        if cells.is_empty() {
            return Err(Error::InvalidArgument(format!("component {id} has no cells")));
        }
        if cells.max_cell().unwrap() >= shape.n_cells() {
            return Err(Error::ShapeMismatch(format!("component {id} has cells outside the grid")));
        }
        let weights = grid.row_weights();
        Ok(Component::with_weights(id, cells, shape, &weights))
    }

    fn with_weights(id: ComponentId, cells: CellSet, shape: GridShape, row_weights: &[f64]) -> Self {
        let weighted_area = cells.iter().map(|c| row_weights[c / shape.n_lon]).sum();
        let boundary = cells.boundary(shape);
        Component { id, shape, cells, boundary, weighted_area }
    }
}

/// Cells of `field` with value `>= lambda`. NaN cells are excluded.
pub fn superlevel_set(field: &[f64], lambda: f64) -> Vec<bool> {
    field.iter().map(|&v| v >= lambda).collect()
}

/// Connected components of the superlevel set `{x : field(x) >= lambda}`.
pub fn extract_components(
    field: &[f64],
    grid: &LatLonGrid,
    date: Date,
    lambda: f64,
    connectivity: Connectivity,
) -> Result<Vec<Component>> {
    if field.len() != grid.n_cells() {
        return Err(Error::ShapeMismatch(format!("field of {} values on a {}-cell grid", field.len(), grid.n_cells())));
    }
    if lambda.is_nan() {
        return Err(Error::InvalidArgument("threshold is NaN".into()));
    }
    Ok(components_of_mask(&superlevel_set(field, lambda), grid, date, connectivity))
}

/// Connected components of the cells where `mask` is true, in raster-scan
/// order of their first cell.
pub fn components_of_mask(mask: &[bool], grid: &LatLonGrid, date: Date, connectivity: Connectivity) -> Vec<Component> {
    let shape = grid.shape();
    assert_eq!(mask.len(), shape.n_cells());
    let weights = grid.row_weights();
    let mut seen = vec![false; mask.len()];
    let mut stack = Vec::new();
    let mut out = Vec::new();

    for start in 0..mask.len() {
        if !mask[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        stack.push(start);
        let mut cells = Vec::new();
        while let Some(cell) = stack.pop() {
            cells.push(cell as u32);
            let (r, c) = shape.row_col(cell);
            let mut visit = |nr: usize, nc: usize| {
                let n = shape.index(nr, nc);
                if mask[n] && !seen[n] {
                    seen[n] = true;
                    stack.push(n);
                }
            };
            let up = r > 0;
            let down = r + 1 < shape.n_lat;
            let left = c > 0;
            let right = c + 1 < shape.n_lon;
            if up {
                visit(r - 1, c);
            }
            if down {
                visit(r + 1, c);
            }
            if left {
                visit(r, c - 1);
            }
            if right {
                visit(r, c + 1);
            }
            if connectivity == Connectivity::Eight {
                if up && left {
                    visit(r - 1, c - 1);
                }
                if up && right {
                    visit(r - 1, c + 1);
                }
                if down && left {
                    visit(r + 1, c - 1);
                }
                if down && right {
                    visit(r + 1, c + 1);
                }
            }
        }
        cells.sort_unstable();
        let id = ComponentId { date, index: out.len() as u32 };
        out.push(Component::with_weights(id, CellSet::from_sorted(cells), shape, &weights));
    }
    out
}

/// Latitude-weighted overlap: sum of `cos(lat)` over the shared cells.
pub fn weighted_overlap(a: &Component, b: &Component, grid: &LatLonGrid) -> Result<f64> {
    if a.shape != b.shape || a.shape != grid.shape() {
        return Err(Error::ShapeMismatch(format!("components {} and {} are not on the same grid", a.id, b.id)));
    }
    let weights = grid.row_weights();
    Ok(overlap_stats(&a.cells, &b.cells, a.shape, &weights).0)
}

/// (weighted overlap, shared cell count) of two cell sets.
pub(crate) fn overlap_stats(a: &CellSet, b: &CellSet, shape: GridShape, row_weights: &[f64]) -> (f64, usize) {
    let shared = a.intersection(b);
    let weight = shared.iter().map(|c| row_weights[c / shape.n_lon]).sum();
    (weight, shared.len())
}
