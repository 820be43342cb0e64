//! Relaxed band depth for raster contours.
//!
//! The band of two members is the symmetric difference of their regions.
//! A member's mismatch against a band is the fraction of its boundary cells
//! outside the band; it counts as inside when the mismatch is at most
//! epsilon. Depth is the number of inside pairs over all `n(n-1)/2`
//! unordered pairs, where pairs containing the member itself never count.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::ensemble::{ContourEnsemble, Member};
use crate::cells::{CellBitmap, CellSet};
use crate::detection::ComponentId;
use crate::error::{invalid_arg, Error, Result};
use crate::grid::GridShape;
use crate::par;

/// The region between two members.
pub fn band(a: &Member, b: &Member) -> CellSet {
    a.region.symmetric_difference(&b.region)
}

/// Fraction of `member`'s boundary lying outside `band`.
pub fn mismatch(member: &Member, band: &CellSet) -> Result<f64> {
    if member.boundary.is_empty() {
        return Err(Error::InvalidMember(format!("{} has an empty boundary", member.id)));
    }
    let outside = member.boundary.difference(band).len();
    Ok(mismatch_fraction(outside, member.boundary.len()))
}

#[inline]
fn mismatch_fraction(outside: usize, boundary_len: usize) -> f64 {
    outside as f64 / boundary_len as f64
}

/// Number of unordered pairs of `n` members.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

#[inline]
fn pair_index(n: usize, j: usize, k: usize) -> usize {
    debug_assert!(j < k && k < n);
    j * (2 * n - j - 1) / 2 + (k - j - 1)
}

/// Mismatch of every member against every pair band.
///
/// Entries for pairs that contain the member itself are NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct MismatchMatrix {
    n: usize,
    // [i][pair]
    entries: Vec<f64>,
}

impl MismatchMatrix {
    pub fn compute(ensemble: &ContourEnsemble) -> Self {
        let members = ensemble.members();
        let n = members.len();
        let n_pairs = pair_count(n);
        let bitmaps = region_bitmaps(ensemble);
        let rows = par::map_range(n, |j| {
            let mut band = CellBitmap::new(ensemble.shape().n_cells());
            let mut out = Vec::new();
            for k in j + 1..n {
                band.set_xor(&bitmaps[j], &bitmaps[k]);
                for (i, m) in members.iter().enumerate() {
                    let value = if i == j || i == k { f64::NAN } else { boundary_mismatch(m, &band) };
                    out.push((i, pair_index(n, j, k), value));
                }
            }
            out
        });
        let mut entries = vec![f64::NAN; n * n_pairs];
        for (i, p, v) in rows.into_iter().flatten() {
            entries[i * n_pairs + p] = v;
        }
        MismatchMatrix { n, entries }
    }

    /// A matrix with entries `f(i, j, k)` for `j < k`, `i` outside `{j, k}`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Result<Self> {
        let n_pairs = pair_count(n);
        let mut entries = vec![f64::NAN; n * n_pairs];
        for i in 0..n {
            for j in 0..n {
                for k in j + 1..n {
                    if i == j || i == k {
                        continue;
                    }
                    let v = f(i, j, k);
                    if !(0.0..=1.0).contains(&v) {
                        return Err(invalid_arg!("mismatch {v} is outside [0, 1]"));
                    }
                    entries[i * n_pairs + pair_index(n, j, k)] = v;
                }
            }
        }
        Ok(MismatchMatrix { n, entries })
    }

    pub fn n_members(&self) -> usize {
        self.n
    }

    /// Mismatch of member `i` against the band of `j` and `k` (`j != k`);
    /// `None` when `i` is one of them.
    pub fn get(&self, i: usize, j: usize, k: usize) -> Option<f64> {
        let (j, k) = if j < k { (j, k) } else { (k, j) };
        let v = self.entries[i * pair_count(self.n) + pair_index(self.n, j, k)];
        (!v.is_nan()).then_some(v)
    }

    fn row(&self, i: usize) -> &[f64] {
        let n_pairs = pair_count(self.n);
        &self.entries[i * n_pairs..(i + 1) * n_pairs]
    }
}

fn region_bitmaps(ensemble: &ContourEnsemble) -> Vec<CellBitmap> {
    let n_cells = ensemble.shape().n_cells();
    ensemble.members().iter().map(|m| CellBitmap::from_set(&m.region, n_cells)).collect()
}

#[inline]
fn boundary_mismatch(member: &Member, band: &CellBitmap) -> f64 {
    let outside = member.boundary.iter().filter(|&c| !band.get(c)).count();
    mismatch_fraction(outside, member.boundary.len())
}

/// Relaxed band depth of every member at tolerance `epsilon`.
pub fn relaxed_depth(matrix: &MismatchMatrix, epsilon: f64) -> Vec<f64> {
    let total = pair_count(matrix.n);
    (0..matrix.n)
        .map(|i| {
            let inside = matrix.row(i).iter().filter(|&&m| m <= epsilon).count();
            if total == 0 {
                0.0
            } else {
                inside as f64 / total as f64
            }
        })
        .collect()
}

/// Depth of every member at every epsilon of a sorted grid, computed in one
/// pass over the pairs without storing the mismatch matrix.
pub fn depth_profile(ensemble: &ContourEnsemble, epsilons: &[f64]) -> Vec<Vec<f64>> {
    let members = ensemble.members();
    let n = members.len();
    let n_eps = epsilons.len();
    let bitmaps = region_bitmaps(ensemble);
    // For each j: per member, histogram of the first epsilon index admitting it.
    let partial = par::map_range(n, |j| {
        let mut hist = vec![0u32; n * n_eps];
        let mut band = CellBitmap::new(ensemble.shape().n_cells());
        for k in j + 1..n {
            band.set_xor(&bitmaps[j], &bitmaps[k]);
            for (i, m) in members.iter().enumerate() {
                if i == j || i == k {
                    continue;
                }
                let value = boundary_mismatch(m, &band);
                if let Some(e) = epsilons.iter().position(|&eps| value <= eps) {
                    hist[i * n_eps + e] += 1;
                }
            }
        }
        hist
    });
    let mut hist = vec![0u64; n * n_eps];
    for h in partial {
        for (acc, v) in hist.iter_mut().zip(h) {
            *acc += u64::from(v);
        }
    }
    let total = pair_count(n) as f64;
    (0..n_eps)
        .map(|e| {
            (0..n)
                .map(|i| {
                    let inside: u64 = hist[i * n_eps..i * n_eps + e + 1].iter().sum();
                    if total == 0.0 {
                        0.0
                    } else {
                        inside as f64 / total
                    }
                })
                .collect()
        })
        .collect()
}

/// `0.00, 0.05, ..., 0.50`.
pub fn default_epsilon_grid() -> Vec<f64> {
    (0..=10).map(|i| f64::from(i) * 0.05).map(|v| libm::round(v * 1e9) / 1e9).collect()
}

fn validate_grid(epsilons: &[f64]) -> Result<()> {
    if epsilons.is_empty() {
        return Err(invalid_arg!("epsilon grid is empty"));
    }
    if epsilons.iter().any(|e| !(0.0..1.0).contains(e)) {
        return Err(invalid_arg!("epsilon values must lie in [0, 1)"));
    }
    if epsilons.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid_arg!("epsilon grid must be strictly increasing"));
    }
    Ok(())
}

/// Member indices ordered deepest first; ties by ascending id.
fn ranking(ids: &[ComponentId], depths: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..ids.len()).collect();
    order.sort_by(|&a, &b| depths[b].total_cmp(&depths[a]).then(ids[a].cmp(&ids[b])));
    order
}

fn central_set(ids: &[ComponentId], depths: &[f64]) -> Vec<usize> {
    let mut top: Vec<usize> = ranking(ids, depths).into_iter().take(ids.len().div_ceil(2)).collect();
    top.sort_unstable();
    top
}

/// Index into `epsilons` of the smallest value whose central half (the
/// `ceil(n/2)` deepest members) is unchanged at the next value and whose
/// maximum depth is positive; the last index when none qualifies.
fn select_epsilon_index(ids: &[ComponentId], depths_by_eps: &[Vec<f64>]) -> usize {
    let last = depths_by_eps.len() - 1;
    (0..last)
        .find(|&e| {
            depths_by_eps[e].iter().any(|&d| d > 0.0)
                && central_set(ids, &depths_by_eps[e]) == central_set(ids, &depths_by_eps[e + 1])
        })
        .unwrap_or(last)
}

/// Smallest epsilon of `epsilons` that stabilizes the central half.
pub fn select_epsilon(matrix: &MismatchMatrix, ids: &[ComponentId], epsilons: &[f64]) -> Result<f64> {
    validate_grid(epsilons)?;
    if epsilons.len() < 2 {
        return Err(invalid_arg!("epsilon selection needs at least two candidates"));
    }
    if ids.len() != matrix.n {
        return Err(Error::ShapeMismatch(format!("{} ids for {} members", ids.len(), matrix.n)));
    }
    let depths: Vec<Vec<f64>> = epsilons.iter().map(|&e| relaxed_depth(matrix, e)).collect();
    Ok(epsilons[select_epsilon_index(ids, &depths)])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemberDepth {
    pub id: ComponentId,
    pub depth: f64,
}

/// Median contour and envelopes of an ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourBoxplot {
    pub shape: GridShape,
    pub epsilon: f64,
    pub median: ComponentId,
    pub median_region: CellSet,
    /// Members deepest first, ties by ascending id.
    pub ranking: Vec<MemberDepth>,
    /// Union minus intersection of the `ceil(n/2)` deepest regions.
    pub envelope50: CellSet,
    /// Union minus intersection of all regions.
    pub envelope100: CellSet,
}

fn union_minus_intersection<'a>(regions: impl Iterator<Item = &'a CellSet> + Clone) -> CellSet {
    CellSet::union_all(regions.clone()).difference(&CellSet::intersection_all(regions))
}

/// Builds the contour boxplot of an ensemble of at least three members.
pub fn contour_boxplot(ensemble: &ContourEnsemble, epsilons: &[f64]) -> Result<ContourBoxplot> {
    validate_grid(epsilons)?;
    let members = ensemble.members();
    let n = members.len();
    if n < 3 {
        return Err(Error::InsufficientEnsemble(n));
    }
    let ids: Vec<ComponentId> = members.iter().map(|m| m.id).collect();
    let depths_by_eps = depth_profile(ensemble, epsilons);
    let e = select_epsilon_index(&ids, &depths_by_eps);
    let depths = &depths_by_eps[e];
    let order = ranking(&ids, depths);

    let central = order[..n.div_ceil(2)].iter().map(|&i| &members[i].region);
    let median = &members[order[0]];
    Ok(ContourBoxplot {
        shape: ensemble.shape(),
        epsilon: epsilons[e],
        median: median.id,
        median_region: median.region.clone(),
        ranking: order.iter().map(|&i| MemberDepth { id: ids[i], depth: depths[i] }).collect(),
        envelope50: union_minus_intersection(central),
        envelope100: union_minus_intersection(members.iter().map(|m| &m.region)),
    })
}
