use alloc::format;
use alloc::vec::Vec;

use crate::calendar::MonthDay;
use crate::cells::CellSet;
use crate::detection::{Component, ComponentId};
use crate::error::{Error, Result};
use crate::evaluation::DateWindow;
use crate::grid::GridShape;

/// One contour of an ensemble: the enclosed region and its boundary cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Member {
    pub id: ComponentId,
    pub region: CellSet,
    pub boundary: CellSet,
}

impl Member {
    /// `boundary` must be a non-empty subset of `region`.
    pub fn new(id: ComponentId, region: CellSet, boundary: CellSet) -> Result<Self> {
        if boundary.is_empty() {
            return Err(Error::InvalidMember(format!("{id} has an empty boundary")));
        }
        if !boundary.is_subset(&region) {
            return Err(Error::InvalidMember(format!("boundary of {id} is not inside its region")));
        }
        Ok(Member { id, region, boundary })
    }

    /// Uses the region's 4-neighbour boundary cells.
    pub fn from_region(id: ComponentId, region: CellSet, shape: GridShape) -> Result<Self> {
        let boundary = region.boundary(shape);
        Member::new(id, region, boundary)
    }
}

impl From<&Component> for Member {
    fn from(c: &Component) -> Self {
        Member { id: c.id, region: c.cells.clone(), boundary: c.boundary.clone() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnsembleKind {
    Daily,
    Monthly,
    Seasonal,
}

/// Which footprints make up an ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnsembleSelector {
    /// The same calendar day across years.
    Daily(MonthDay),
    /// The same calendar month across years.
    Monthly(u8),
    /// Every day in the window across years.
    Seasonal(DateWindow),
}

impl EnsembleSelector {
    pub fn kind(&self) -> EnsembleKind {
        match self {
            EnsembleSelector::Daily(_) => EnsembleKind::Daily,
            EnsembleSelector::Monthly(_) => EnsembleKind::Monthly,
            EnsembleSelector::Seasonal(_) => EnsembleKind::Seasonal,
        }
    }

    pub fn matches(&self, id: &ComponentId) -> bool {
        match self {
            EnsembleSelector::Daily(md) => id.date.month_day() == *md,
            EnsembleSelector::Monthly(m) => id.date.month() == *m,
            EnsembleSelector::Seasonal(w) => w.contains(id.date),
        }
    }
}

impl core::str::FromStr for EnsembleSelector {
    type Err = Error;

    /// `daily:MM-DD`, `monthly:MM` or `seasonal[:WINDOW]`.
    fn from_str(s: &str) -> Result<Self> {
        let bad =
            || Error::InvalidArgument(format!("ensemble '{s}' is not daily:MM-DD, monthly:MM or seasonal[:WINDOW]"));
        let (kind, arg) = s.split_once(':').unwrap_or((s, ""));
        match kind {
            "daily" => Ok(EnsembleSelector::Daily(arg.parse()?)),
            "monthly" => {
                let m: u8 = arg.parse().map_err(|_| bad())?;
                if (1..=12).contains(&m) {
                    Ok(EnsembleSelector::Monthly(m))
                } else {
                    Err(bad())
                }
            }
            "seasonal" if arg.is_empty() => Ok(EnsembleSelector::Seasonal(DateWindow::Jja)),
            "seasonal" => Ok(EnsembleSelector::Seasonal(arg.parse()?)),
            _ => Err(bad()),
        }
    }
}

impl core::fmt::Display for EnsembleSelector {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            EnsembleSelector::Daily(md) => write!(f, "daily:{md}"),
            EnsembleSelector::Monthly(m) => write!(f, "monthly:{m:02}"),
            EnsembleSelector::Seasonal(w) => write!(f, "seasonal:{w}"),
        }
    }
}

/// Footprint contours sharing one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourEnsemble {
    shape: GridShape,
    kind: EnsembleKind,
    members: Vec<Member>,
}

impl ContourEnsemble {
    pub fn new(shape: GridShape, kind: EnsembleKind, members: Vec<Member>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InsufficientEnsemble(0));
        }
        let mut ids: Vec<ComponentId> = members.iter().map(|m| m.id).collect();
        ids.sort_unstable();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidMember(format!("duplicate member id {}", w[0])));
        }
        if let Some(m) = members.iter().find(|m| m.region.max_cell().is_some_and(|c| c >= shape.n_cells())) {
            return Err(Error::ShapeMismatch(format!("member {} lies outside the grid", m.id)));
        }
        Ok(ContourEnsemble { shape, kind, members })
    }

    /// Footprints matching `selector`.
    pub fn select<'a>(
        shape: GridShape,
        footprints: impl IntoIterator<Item = &'a Component>,
        selector: &EnsembleSelector,
    ) -> Result<Self> {
        let members = footprints.into_iter().filter(|c| selector.matches(&c.id)).map(Member::from).collect();
        ContourEnsemble::new(shape, selector.kind(), members)
    }

    pub fn shape(&self) -> GridShape {
        self.shape
    }

    pub fn kind(&self) -> EnsembleKind {
        self.kind
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}
