use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// The built-in compact test manifolds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    P1,
    P1xP1,
    P2,
}

impl ModelKind {
    pub fn dim(self) -> usize {
        match self {
            ModelKind::P1 => 1,
            ModelKind::P1xP1 | ModelKind::P2 => 2,
        }
    }

    /// `int omega^n` for `omega` the sum of the unit-normalized
    /// Fubini-Study forms of the factors.
    pub fn reference_volume(self) -> f64 {
        match self {
            ModelKind::P1 | ModelKind::P2 => 1.0,
            // (w1 + w2)^2 = 2 w1 w2
            ModelKind::P1xP1 => 2.0,
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::P1 => "P1",
            ModelKind::P1xP1 => "P1xP1",
            ModelKind::P2 => "P2",
        })
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "P1" => Ok(ModelKind::P1),
            "P1xP1" => Ok(ModelKind::P1xP1),
            "P2" => Ok(ModelKind::P2),
            other => Err(Error::Domain(format!("unsupported model {:?} (expected P1, P1xP1 or P2)", other))),
        }
    }
}

/// Midpoint grid resolution.
///
/// On each `P^1` factor the normalized Fubini-Study area is uniform in the
/// height `z = cos(theta)`, so the factor is cut into `bands` equal height
/// bands and `sectors` equal longitude sectors. On `P^2` the moment
/// triangle is cut into `bands^2` congruent triangles and each torus angle
/// into `sectors` arcs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub bands: usize,
    pub sectors: usize,
}

impl GridSpec {
    pub fn new(bands: usize, sectors: usize) -> Self {
        GridSpec { bands, sectors }
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { bands: 64, sectors: 1 }
    }
}

/// Sample location. Coordinates by model:
/// `P1`: `[z, phi]`; `P1xP1`: `[z1, phi1, z2, phi2]`;
/// `P2`: `[t1, t2, phi1, phi2]` with `(t1, t2)` in the moment triangle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridPoint {
    pub kind: ModelKind,
    pub coords: [f64; 4],
}

impl GridPoint {
    /// Height on `P^1` factor `i` (0-based).
    pub fn height(&self, i: usize) -> f64 {
        match self.kind {
            ModelKind::P2 => 0.0,
            _ => self.coords[2 * i],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cell {
    pub point: GridPoint,
    pub volume: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelManifold {
    kind: ModelKind,
    grid: GridSpec,
}

impl ModelManifold {
    pub fn new(kind: ModelKind, grid: GridSpec) -> Result<Self> {
        if grid.bands == 0 || grid.sectors == 0 {
            return domain("grid needs at least one band and one sector");
        }
        Ok(ModelManifold { kind, grid })
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn dim(&self) -> usize {
        self.kind.dim()
    }

    pub fn reference_volume(&self) -> f64 {
        self.kind.reference_volume()
    }

    pub fn cell_count(&self) -> usize {
        let GridSpec { bands, sectors } = self.grid;
        match self.kind {
            ModelKind::P1 => bands * sectors,
            ModelKind::P1xP1 | ModelKind::P2 => (bands * sectors).pow(2),
        }
    }

    /// All cells in a fixed order; volumes sum to [`Self::reference_volume`].
    pub fn cells(&self) -> Vec<Cell> {
        let GridSpec { bands, sectors } = self.grid;
        let factor: Vec<(f64, f64)> = (0..bands)
            .flat_map(|i| {
                let z = -1.0 + (2.0 * i as f64 + 1.0) / bands as f64;
                (0..sectors).map(move |s| (z, TAU * (s as f64 + 0.5) / sectors as f64))
            })
            .collect();
        let total = self.reference_volume();
        let count = self.cell_count() as f64;
        match self.kind {
            ModelKind::P1 => factor
                .iter()
                .map(|&(z, phi)| Cell {
                    point: GridPoint { kind: self.kind, coords: [z, phi, 0.0, 0.0] },
                    volume: total / count,
                })
                .collect(),
            ModelKind::P1xP1 => factor
                .iter()
                .flat_map(|&(z1, p1)| {
                    factor.iter().map(move |&(z2, p2)| Cell {
                        point: GridPoint { kind: ModelKind::P1xP1, coords: [z1, p1, z2, p2] },
                        volume: total / count,
                    })
                })
                .collect(),
            ModelKind::P2 => {
                let b = bands as f64;
                let mut centroids = Vec::with_capacity(bands * bands);
                for i in 0..bands {
                    for j in 0..bands - i {
                        let (fi, fj) = (i as f64, j as f64);
                        centroids.push(((fi + 1.0 / 3.0) / b, (fj + 1.0 / 3.0) / b));
                        if j + 1 < bands - i {
                            centroids.push(((fi + 2.0 / 3.0) / b, (fj + 2.0 / 3.0) / b));
                        }
                    }
                }
                let angles: Vec<f64> = (0..sectors).map(|s| TAU * (s as f64 + 0.5) / sectors as f64).collect();
                let mut cells = Vec::with_capacity(self.cell_count());
                for &(t1, t2) in &centroids {
                    for &a1 in &angles {
                        for &a2 in &angles {
                            cells.push(Cell {
                                point: GridPoint { kind: ModelKind::P2, coords: [t1, t2, a1, a2] },
                                volume: total / count,
                            });
                        }
                    }
                }
                cells
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cell_volumes_sum_to_reference_volume() {
        for kind in [ModelKind::P1, ModelKind::P1xP1, ModelKind::P2] {
            for grid in [GridSpec::new(1, 1), GridSpec::new(7, 3), GridSpec::new(40, 1)] {
                let m = ModelManifold::new(kind, grid).unwrap();
                let cells = m.cells();
                assert_eq!(cells.len(), m.cell_count());
                let total: f64 = cells.iter().map(|c| c.volume).sum();
                assert!((total - kind.reference_volume()).abs() < 1e-9, "{kind} {grid:?}");
            }
        }
    }

    #[test]
    fn p2_centroids_lie_in_the_moment_triangle() {
        let m = ModelManifold::new(ModelKind::P2, GridSpec::new(9, 1)).unwrap();
        let cells = m.cells();
        assert!(cells.iter().all(|c| c.point.coords[0] > 0.0 && c.point.coords[1] > 0.0 && c.point.coords[0] + c.point.coords[1] < 1.0));
        let mean_t1: f64 = cells.iter().map(|c| c.point.coords[0] * c.volume).sum();
        assert!((mean_t1 - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn parse_kinds() {
        assert_eq!("P1xP1".parse::<ModelKind>().unwrap(), ModelKind::P1xP1);
        assert!("P3".parse::<ModelKind>().is_err());
        assert!(ModelManifold::new(ModelKind::P1, GridSpec::new(0, 1)).is_err());
    }
}
