use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::components::Component;
use crate::calendar::{CalendarKind, Date};
use crate::error::{invalid_arg, Error, Result};
use crate::grid::LatLonGrid;
use crate::par;

/// Rule deciding whether components on consecutive days are connected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Linkage {
    /// Latitude-weighted overlap `>= C`. `C` must be positive.
    WeightedOverlap(f64),
    /// At least this many shared cells (at least 1).
    SharedCells(usize),
}

impl Linkage {
    fn validate(self) -> Result<Self> {
        match self {
            Linkage::WeightedOverlap(c) if !(c > 0.0) => {
                Err(invalid_arg!("overlap threshold must be positive, got {c}"))
            }
            Linkage::SharedCells(0) => Err(invalid_arg!("shared-cell threshold must be at least 1")),
            _ => Ok(self),
        }
    }

    #[inline]
    fn accepts(self, link: &Link) -> bool {
        match self {
            Linkage::WeightedOverlap(c) => link.weighted_overlap >= c,
            Linkage::SharedCells(n) => link.shared_cells >= n,
        }
    }
}

/// A pair of overlapping components on consecutive days.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Link {
    pub from: usize,
    pub to: usize,
    pub weighted_overlap: f64,
    pub shared_cells: usize,
}

/// Components of every day plus all overlapping consecutive-day pairs.
///
/// Depends on the components only, so one instance serves every linkage
/// threshold.
#[derive(Debug, Clone)]
pub struct TrackingCandidates {
    dates: Vec<Date>,
    nodes: Vec<Component>,
    day_start: Vec<usize>,
    links: Vec<Link>,
}

impl TrackingCandidates {
    /// `days` must be in strictly increasing date order. Days `d` and `d'`
    /// are consecutive when `d' = calendar.succ(d)`; any other gap breaks
    /// tracking.
    pub fn new(days: Vec<(Date, Vec<Component>)>, calendar: CalendarKind, grid: &LatLonGrid) -> Result<Self> {
        if let Some(w) = days.windows(2).find(|w| w[1].0 <= w[0].0) {
            return Err(invalid_arg!("days must be strictly increasing ({} then {})", w[0].0, w[1].0));
        }
        let shape = grid.shape();
        let mut dates = Vec::with_capacity(days.len());
        let mut nodes = Vec::new();
        let mut day_start = vec![0];
        for (date, comps) in days {
            if let Some(c) = comps.iter().find(|c| c.shape != shape || c.id.date != date) {
                return Err(Error::ShapeMismatch(format!(
                    "component {} does not belong to day {date} on this grid",
                    c.id
                )));
            }
            dates.push(date);
            nodes.extend(comps);
            day_start.push(nodes.len());
        }

        let weights = grid.row_weights();
        let per_pair = par::map_range(dates.len().saturating_sub(1), |d| {
            let mut links = Vec::new();
            if calendar.succ(dates[d]) != dates[d + 1] {
                return links;
            }
            for from in day_start[d]..day_start[d + 1] {
                for to in day_start[d + 1]..day_start[d + 2] {
                    let (weighted_overlap, shared_cells) =
                        super::components::overlap_stats(&nodes[from].cells, &nodes[to].cells, shape, &weights);
                    if shared_cells > 0 {
                        links.push(Link { from, to, weighted_overlap, shared_cells });
                    }
                }
            }
            links
        });
        Ok(TrackingCandidates { dates, nodes, day_start, links: per_pair.concat() })
    }

    pub fn dates(&self) -> &[Date] {
        &self.dates
    }

    pub fn nodes(&self) -> &[Component] {
        &self.nodes
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    /// Whether each date has a component on a chain of at least `min_days`
    /// under `linkage`, without materializing the graph.
    pub fn blocked_days(&self, linkage: Linkage, min_days: usize) -> Result<Vec<bool>> {
        let linkage = linkage.validate()?;
        let edges: Vec<(usize, usize)> =
            self.links.iter().filter(|l| linkage.accepts(l)).map(|l| (l.from, l.to)).collect();
        let chains = super::labels::chain_lengths(self.nodes.len(), &edges);
        Ok((0..self.dates.len())
            .map(|d| (self.day_start[d]..self.day_start[d + 1]).any(|n| chains[n] >= min_days))
            .collect())
    }

    pub fn graph(&self, linkage: Linkage) -> Result<TrajectoryGraph> {
        self.clone().into_graph(linkage)
    }

    pub fn into_graph(self, linkage: Linkage) -> Result<TrajectoryGraph> {
        let linkage = linkage.validate()?;
        let edges = self
            .links
            .iter()
            .filter(|l| linkage.accepts(l))
            .map(|l| Edge {
                from: l.from,
                to: l.to,
                overlap: match linkage {
                    Linkage::WeightedOverlap(_) => l.weighted_overlap,
                    Linkage::SharedCells(_) => l.shared_cells as f64,
                },
            })
            .collect();
        Ok(TrajectoryGraph::from_parts(self.dates, self.nodes, self.day_start, edges))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    /// The overlap measure that admitted the edge.
    pub overlap: f64,
}

/// Day-to-day correspondences between components.
///
/// Nodes are ordered by date, then by per-day index, so every edge goes from
/// a lower to a higher node index.
#[derive(Debug, Clone)]
pub struct TrajectoryGraph {
    dates: Vec<Date>,
    nodes: Vec<Component>,
    day_start: Vec<usize>,
    edges: Vec<Edge>,
    successors: Vec<Vec<usize>>,
    predecessors: Vec<Vec<usize>>,
}

impl TrajectoryGraph {
    fn from_parts(dates: Vec<Date>, nodes: Vec<Component>, day_start: Vec<usize>, edges: Vec<Edge>) -> Self {
        let mut successors = vec![Vec::new(); nodes.len()];
        let mut predecessors = vec![Vec::new(); nodes.len()];
        for e in &edges {
            successors[e.from].push(e.to);
            predecessors[e.to].push(e.from);
        }
        TrajectoryGraph { dates, nodes, day_start, edges, successors, predecessors }
    }

    pub fn dates(&self) -> &[Date] {
        &self.dates
    }

    pub fn nodes(&self) -> &[Component] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Node indices of the components on date index `d`.
    pub fn day_nodes(&self, d: usize) -> core::ops::Range<usize> {
        self.day_start[d]..self.day_start[d + 1]
    }

    pub fn successors(&self, node: usize) -> &[usize] {
        &self.successors[node]
    }

    pub fn predecessors(&self, node: usize) -> &[usize] {
        &self.predecessors[node]
    }

    pub(crate) fn edge_pairs(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|e| (e.from, e.to)).collect()
    }
}

/// Connects components on consecutive days whose overlap passes `linkage`.
pub fn build_trajectory_graph(
    days: Vec<(Date, Vec<Component>)>,
    calendar: CalendarKind,
    grid: &LatLonGrid,
    linkage: Linkage,
) -> Result<TrajectoryGraph> {
    TrackingCandidates::new(days, calendar, grid)?.into_graph(linkage)
}
