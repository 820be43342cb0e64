//! Frequency stacks as VTK XML image data (`.vti`) with ASCII `Int32`
//! voxels, x = longitude, y = latitude, z = stack slice.

use std::fmt::Write as _;
use std::path::Path;

use blocktrack_core::uncertainty::TemporalStack;
use blocktrack_core::LatLonGrid;

use super::write_text;
use crate::error::Result;

/// Ascending order of an axis and its mean spacing (1 for a single value).
fn axis(values: &[f64]) -> (Vec<usize>, f64, f64) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    if values.len() > 1 && values[1] < values[0] {
        order.reverse();
    }
    let first = values[order[0]];
    let spacing =
        if values.len() > 1 { (values[order[values.len() - 1]] - first) / (values.len() - 1) as f64 } else { 1.0 };
    (order, first, spacing)
}

pub fn vti_document(stack: &TemporalStack, grid: &LatLonGrid) -> String {
    let (cols, lon0, dlon) = axis(grid.lon());
    let (rows, lat0, dlat) = axis(grid.lat());
    let (nx, ny, nz) = (cols.len(), rows.len(), stack.len());
    let extent = format!("0 {} 0 {} 0 {}", nx.saturating_sub(1), ny.saturating_sub(1), nz.saturating_sub(1));

    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\"?>\n");
    s.push_str("<VTKFile type=\"ImageData\" version=\"1.0\" byte_order=\"LittleEndian\">\n");
    let _ =
        writeln!(s, "  <ImageData WholeExtent=\"{extent}\" Origin=\"{lon0} {lat0} 0\" Spacing=\"{dlon} {dlat} 1\">");
    let _ = writeln!(s, "    <Piece Extent=\"{extent}\">");
    s.push_str("      <PointData Scalars=\"frequency\">\n");
    s.push_str("        <DataArray type=\"Int32\" Name=\"frequency\" format=\"ascii\">\n");
    for slice in stack.slices() {
        for &r in &rows {
            s.push_str("         ");
            for &c in &cols {
                let _ = write!(s, " {}", slice.frequency.get(r, c));
            }
            s.push('\n');
        }
    }
    s.push_str("        </DataArray>\n");
    s.push_str("      </PointData>\n");
    s.push_str("    </Piece>\n");
    s.push_str("  </ImageData>\n");
    s.push_str("</VTKFile>\n");
    s
}

pub fn write_volume_vti(stack: &TemporalStack, grid: &LatLonGrid, path: &Path) -> Result<()> {
    if stack.shape() != grid.shape() {
        return Err(blocktrack_core::Error::ShapeMismatch("stack and grid differ".into()).into());
    }
    write_text(path, &vti_document(stack, grid))
}
