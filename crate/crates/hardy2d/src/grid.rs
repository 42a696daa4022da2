//! Log-spaced radial grids.

use crate::error::{HardyError, Result};

/// Radial nodes, strictly increasing, geometrically spaced.
///
/// The default covers `[1e-6, 1e6]` with 2048 nodes, wide enough for both
/// small-`ρ` scaling studies and tail asymptotics.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    nodes: Vec<f64>,
}

impl RadialGrid {
    pub fn log_spaced(r_min: f64, r_max: f64, n: usize) -> Result<Self> {
        if !(r_min.is_finite() && r_max.is_finite()) || r_min <= 0.0 || r_max <= r_min {
            return Err(HardyError::InvalidField(format!(
                "grid bounds must satisfy 0 < r_min < r_max, got [{r_min}, {r_max}]"
            )));
        }
        if n < 2 {
            return Err(HardyError::InvalidField("grid needs at least 2 nodes".into()));
        }
        let ratio = (r_max / r_min).ln();
        let nodes = (0..n)
            .map(|i| r_min * (ratio * i as f64 / (n - 1) as f64).exp())
            .collect();
        Ok(Self { nodes })
    }

    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 || nodes.windows(2).any(|w| !(w[0] < w[1])) || nodes[0] <= 0.0 {
            return Err(HardyError::InvalidField(
                "grid nodes must be positive and strictly increasing".into(),
            ));
        }
        Ok(Self { nodes })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn r_min(&self) -> f64 {
        self.nodes[0]
    }

    pub fn r_max(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    /// Nested refinement: inserts the geometric midpoint of every cell.
    ///
    /// Piecewise-linear spaces on the refined grid contain the originals,
    /// which is what makes Rayleigh minima monotone under refinement.
    pub fn refine(&self) -> Self {
        let mut nodes = Vec::with_capacity(self.nodes.len() * 2 - 1);
        for w in self.nodes.windows(2) {
            nodes.push(w[0]);
            nodes.push((w[0] * w[1]).sqrt());
        }
        nodes.push(self.r_max());
        Self { nodes }
    }

    /// Index of the last node `<= r`, or `None` if `r` is below the grid.
    pub fn floor_index(&self, r: f64) -> Option<usize> {
        if r < self.nodes[0] {
            return None;
        }
        match self.nodes.binary_search_by(|x| x.partial_cmp(&r).unwrap()) {
            Ok(i) => Some(i),
            Err(i) => Some(i - 1),
        }
    }
}

impl Default for RadialGrid {
    fn default() -> Self {
        Self::log_spaced(1e-6, 1e6, 2048).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_spacing_endpoints() {
        let g = RadialGrid::log_spaced(1e-3, 1e3, 5).unwrap();
        assert!((g.r_min() - 1e-3).abs() < 1e-18);
        assert!((g.r_max() - 1e3).abs() < 1e-12);
        // geometric: ratios equal
        let n = g.nodes();
        let q0 = n[1] / n[0];
        for w in n.windows(2) {
            assert!((w[1] / w[0] - q0).abs() < 1e-12);
        }
    }

    #[test]
    fn refine_is_nested() {
        let g = RadialGrid::log_spaced(0.1, 10.0, 9).unwrap();
        let f = g.refine();
        assert_eq!(f.len(), 17);
        for x in g.nodes() {
            assert!(f.nodes().iter().any(|y| (y - x).abs() < 1e-15 * x));
        }
    }

    #[test]
    fn floor_index_brackets() {
        let g = RadialGrid::log_spaced(1.0, 16.0, 5).unwrap();
        assert_eq!(g.floor_index(0.5), None);
        assert_eq!(g.floor_index(1.0), Some(0));
        assert_eq!(g.floor_index(3.9), Some(1));
        assert_eq!(g.floor_index(16.0), Some(4));
    }

    #[test]
    fn rejects_bad_bounds() {
        assert!(RadialGrid::log_spaced(0.0, 1.0, 4).is_err());
        assert!(RadialGrid::log_spaced(2.0, 1.0, 4).is_err());
        assert!(RadialGrid::from_nodes(vec![1.0, 1.0, 2.0]).is_err());
    }
}
