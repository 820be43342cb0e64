//! Contour rings as GeoJSON `LineString` features in lon/lat degrees.

use std::path::Path;

use blocktrack_core::uncertainty::{trace_rings, ContourBoxplot, ContourEnsemble, Ring, TemporalStack};
use blocktrack_core::{CellSet, LatLonGrid};
use serde_json::{json, Value};

use super::write_text;
use crate::error::Result;

fn ring_feature(ring: &Ring, grid: &LatLonGrid, z: Option<f64>, mut props: serde_json::Map<String, Value>) -> Value {
    let coords: Vec<Value> = ring
        .lon_lat(grid)
        .into_iter()
        .map(|(lon, lat)| match z {
            Some(z) => json!([lon, lat, z]),
            None => json!([lon, lat]),
        })
        .collect();
    props.insert("ring".into(), json!(if ring.is_hole() { "hole" } else { "outer" }));
    json!({
        "type": "Feature",
        "geometry": { "type": "LineString", "coordinates": coords },
        "properties": props,
    })
}

fn props(
    role: &str,
    date: Option<String>,
    member_id: Option<String>,
    depth: Option<f64>,
) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("role".into(), json!(role));
    m.insert("date".into(), json!(date));
    m.insert("member_id".into(), json!(member_id));
    m.insert("depth".into(), json!(depth));
    m
}

fn region_features(
    out: &mut Vec<Value>,
    region: &CellSet,
    grid: &LatLonGrid,
    make: impl Fn() -> serde_json::Map<String, Value>,
) {
    out.extend(trace_rings(region, grid.shape()).iter().map(|r| ring_feature(r, grid, None, make())));
}

/// Median, both envelopes and every member, in ranking order. Empty
/// envelopes produce no features.
pub fn boxplot_collection(boxplot: &ContourBoxplot, ensemble: &ContourEnsemble, grid: &LatLonGrid) -> Value {
    let mut features = Vec::new();
    let depth_of = |id| boxplot.ranking.iter().find(|m| m.id == id).map(|m| m.depth);
    let median = boxplot.median;
    region_features(&mut features, &boxplot.median_region, grid, || {
        props("median", Some(median.date.to_string()), Some(median.to_string()), depth_of(median))
    });
    region_features(&mut features, &boxplot.envelope50, grid, || props("env50", None, None, None));
    region_features(&mut features, &boxplot.envelope100, grid, || props("env100", None, None, None));
    for rank in &boxplot.ranking {
        let member = ensemble.members().iter().find(|m| m.id == rank.id).expect("ranking lists ensemble members");
        region_features(&mut features, &member.region, grid, || {
            props("member", Some(rank.id.date.to_string()), Some(rank.id.to_string()), Some(rank.depth))
        });
    }
    json!({
        "type": "FeatureCollection",
        "properties": { "epsilon": boxplot.epsilon },
        "features": features,
    })
}

/// Median rings of each stack slice, lifted to `z` = slice index.
pub fn median_stack_collection(stack: &TemporalStack, grid: &LatLonGrid) -> Value {
    let mut features = Vec::new();
    for (z, slice) in stack.slices().iter().enumerate() {
        let Some(median) = slice.median else { continue };
        for ring in &slice.median_rings {
            let p = props("median", Some(slice.day.to_string()), Some(median.to_string()), None);
            features.push(ring_feature(ring, grid, Some(z as f64), p));
        }
    }
    json!({ "type": "FeatureCollection", "features": features })
}

pub fn write_geojson(collection: &Value, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string(collection).expect("geojson serializes");
    text.push('\n');
    write_text(path, &text)
}
