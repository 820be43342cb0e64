//! Sets of grid cells keyed by row-major linear index.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::grid::GridShape;

/// A sorted, duplicate-free set of linear cell indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellSet(Vec<u32>);

impl CellSet {
    pub fn new() -> Self {
        CellSet(Vec::new())
    }

    pub(crate) fn from_sorted(cells: Vec<u32>) -> Self {
        debug_assert!(cells.windows(2).all(|w| w[0] < w[1]));
        CellSet(cells)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&c| c as usize)
    }

    pub fn contains(&self, cell: usize) -> bool {
        self.0.binary_search(&(cell as u32)).is_ok()
    }

    pub fn max_cell(&self) -> Option<usize> {
        self.0.last().map(|&c| c as usize)
    }

    pub fn union(&self, other: &CellSet) -> CellSet {
        merge(&self.0, &other.0, true, true, true)
    }

    pub fn intersection(&self, other: &CellSet) -> CellSet {
        merge(&self.0, &other.0, false, true, false)
    }

    pub fn difference(&self, other: &CellSet) -> CellSet {
        merge(&self.0, &other.0, true, false, false)
    }

    pub fn symmetric_difference(&self, other: &CellSet) -> CellSet {
        merge(&self.0, &other.0, true, false, true)
    }

    pub fn is_subset(&self, other: &CellSet) -> bool {
        self.difference(other).is_empty()
    }

    /// Cells with at least one 4-neighbour outside the set or on the grid edge.
    pub fn boundary(&self, shape: GridShape) -> CellSet {
        let mask = self.to_mask(shape);
        let cells = self
            .0
            .iter()
            .copied()
            .filter(|&c| {
                let (r, col) = shape.row_col(c as usize);
                r == 0
                    || col == 0
                    || r + 1 == shape.n_lat
                    || col + 1 == shape.n_lon
                    || !mask[shape.index(r - 1, col)]
                    || !mask[shape.index(r + 1, col)]
                    || !mask[shape.index(r, col - 1)]
                    || !mask[shape.index(r, col + 1)]
            })
            .collect();
        CellSet(cells)
    }

    pub fn to_mask(&self, shape: GridShape) -> Vec<bool> {
        let mut mask = vec![false; shape.n_cells()];
        for c in self.iter() {
            mask[c] = true;
        }
        mask
    }

    /// The cells where `mask` is true.
    pub fn from_mask(mask: &[bool]) -> CellSet {
        CellSet(mask.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| i as u32).collect())
    }

    /// Union of many sets.
    pub fn union_all<'a>(sets: impl IntoIterator<Item = &'a CellSet>) -> CellSet {
        let mut all: Vec<u32> = sets.into_iter().flat_map(|s| s.0.iter().copied()).collect();
        all.sort_unstable();
        all.dedup();
        CellSet(all)
    }

    /// Intersection of many sets; empty for no sets.
    pub fn intersection_all<'a>(sets: impl IntoIterator<Item = &'a CellSet>) -> CellSet {
        let mut iter = sets.into_iter();
        let Some(first) = iter.next() else {
            return CellSet::new();
        };
        iter.fold(first.clone(), |acc, s| acc.intersection(s))
    }
}

impl FromIterator<usize> for CellSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut cells: Vec<u32> = iter.into_iter().map(|c| c as u32).collect();
        cells.sort_unstable();
        cells.dedup();
        CellSet(cells)
    }
}

fn merge(a: &[u32], b: &[u32], keep_a_only: bool, keep_both: bool, keep_b_only: bool) -> CellSet {
    let mut out = Vec::with_capacity(a.len().max(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => {
                if keep_a_only {
                    out.push(a[i]);
                }
                i += 1;
            }
            Ordering::Greater => {
                if keep_b_only {
                    out.push(b[j]);
                }
                j += 1;
            }
            Ordering::Equal => {
                if keep_both {
                    out.push(a[i]);
                }
                i += 1;
                j += 1;
            }
        }
    }
    if keep_a_only {
        out.extend_from_slice(&a[i..]);
    }
    if keep_b_only {
        out.extend_from_slice(&b[j..]);
    }
    CellSet(out)
}

/// Fixed-size bitmap over the cells of a grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct CellBitmap {
    words: Vec<u64>,
}

impl CellBitmap {
    pub(crate) fn new(n_cells: usize) -> Self {
        CellBitmap { words: vec![0; n_cells.div_ceil(64)] }
    }

    pub(crate) fn from_set(set: &CellSet, n_cells: usize) -> Self {
        let mut bitmap = CellBitmap::new(n_cells);
        for c in set.iter() {
            bitmap.words[c / 64] |= 1 << (c % 64);
        }
        bitmap
    }

    #[inline]
    pub(crate) fn get(&self, cell: usize) -> bool {
        self.words[cell / 64] >> (cell % 64) & 1 == 1
    }

    /// Overwrites `self` with `a XOR b`.
    pub(crate) fn set_xor(&mut self, a: &CellBitmap, b: &CellBitmap) {
        for ((w, x), y) in self.words.iter_mut().zip(&a.words).zip(&b.words) {
            *w = x ^ y;
        }
    }
}
