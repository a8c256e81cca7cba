use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A lattice site of Z or Z². One-dimensional sites have `y == 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Site {
    pub x: i64,
    pub y: i64,
}

impl Site {
    pub const fn line(x: i64) -> Self {
        Site { x, y: 0 }
    }

    pub const fn plane(x: i64, y: i64) -> Self {
        Site { x, y }
    }

    pub fn manhattan(self, other: Site) -> u64 {
        self.x.abs_diff(other.x) + self.y.abs_diff(other.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VolumeKind {
    /// Sites `0..N` of Z.
    Interval,
    /// The `N × N` box `{0..N}²` of Z².
    Square,
}

/// Finite volume with a fixed lexicographic site enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Volume {
    kind: VolumeKind,
    extent: usize,
}

/// How far outside the volume boundary sites are kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reach {
    /// The exterior sites adjacent to the volume.
    Adjacent,
    /// Every exterior site within distance `M` along the line.
    Window(usize),
}

impl Volume {
    pub fn interval(n: usize) -> Result<Self> {
        Self::new(VolumeKind::Interval, n)
    }

    pub fn square(n: usize) -> Result<Self> {
        Self::new(VolumeKind::Square, n)
    }

    pub fn new(kind: VolumeKind, extent: usize) -> Result<Self> {
        if extent == 0 {
            return Err(Error::invalid("extent", extent, "a positive integer"));
        }
        Ok(Volume { kind, extent })
    }

    pub fn kind(&self) -> VolumeKind {
        self.kind
    }

    pub fn extent(&self) -> usize {
        self.extent
    }

    pub fn dimension(&self) -> usize {
        match self.kind {
            VolumeKind::Interval => 1,
            VolumeKind::Square => 2,
        }
    }

    pub fn site_count(&self) -> usize {
        match self.kind {
            VolumeKind::Interval => self.extent,
            VolumeKind::Square => self.extent * self.extent,
        }
    }

    /// Site at enumeration index `index`; in 2D the order is `(x, y)`
    /// lexicographic, `x` major.
    pub fn site(&self, index: usize) -> Site {
        debug_assert!(index < self.site_count());
        match self.kind {
            VolumeKind::Interval => Site::line(index as i64),
            VolumeKind::Square => {
                Site::plane((index / self.extent) as i64, (index % self.extent) as i64)
            }
        }
    }

    pub fn index_of(&self, site: Site) -> Option<usize> {
        let n = self.extent as i64;
        match self.kind {
            VolumeKind::Interval if site.y == 0 && (0..n).contains(&site.x) => {
                Some(site.x as usize)
            }
            VolumeKind::Square if (0..n).contains(&site.x) && (0..n).contains(&site.y) => {
                Some((site.x * n + site.y) as usize)
            }
            _ => None,
        }
    }

    pub fn contains(&self, site: Site) -> bool {
        self.index_of(site).is_some()
    }

    pub fn sites(&self) -> impl Iterator<Item = Site> + '_ {
        (0..self.site_count()).map(move |i| self.site(i))
    }

    /// Exterior sites kept by `reach`, in lexicographic order.
    pub fn exterior(&self, reach: Reach) -> Result<Vec<Site>> {
        let n = self.extent as i64;
        match (self.kind, reach) {
            (VolumeKind::Interval, Reach::Adjacent) => Ok(vec![Site::line(-1), Site::line(n)]),
            (VolumeKind::Interval, Reach::Window(m)) => {
                if m == 0 {
                    return Err(Error::invalid("window", m, "a positive integer"));
                }
                let m = m as i64;
                Ok((-m..0).chain(n..n + m).map(Site::line).collect())
            }
            (VolumeKind::Square, Reach::Adjacent) => {
                let mut out = Vec::with_capacity(4 * self.extent);
                out.extend((0..n).map(|y| Site::plane(-1, y)));
                for x in 0..n {
                    out.push(Site::plane(x, -1));
                    out.push(Site::plane(x, n));
                }
                out.extend((0..n).map(|y| Site::plane(n, y)));
                Ok(out)
            }
            (VolumeKind::Square, Reach::Window(_)) => Err(Error::Unsupported(
                "long-range boundary windows are one-dimensional".into(),
            )),
        }
    }
}
