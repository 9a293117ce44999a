//! Box grids in the half-space model and grid functions on them.

use super::SolverError;
use serde::{Deserialize, Serialize};

/// Supported number of grid axes (the ambient dimension may exceed it when
/// the solution is translation-invariant in the remaining coordinates).
pub const MAX_AXES: usize = 3;

pub type Multi = [usize; MAX_AXES];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Axis {
    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / (self.count - 1) as f64
    }
}

/// A uniform box grid. Axis 0 is the half-space height `x₁` and must stay
/// positive; `ambient_n` is the dimension of the hyperbolic space, at least
/// the number of axes (larger when the grid is a translation-invariant
/// reduction).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxDomain {
    ambient_n: usize,
    axes: Vec<Axis>,
}

impl BoxDomain {
    pub fn new(ambient_n: usize, axes: Vec<Axis>) -> Result<Self, SolverError> {
        if axes.len() < 2 || axes.len() > MAX_AXES {
            return Err(SolverError::Domain(format!(
                "need between 2 and {MAX_AXES} axes, got {}",
                axes.len()
            )));
        }
        if ambient_n < axes.len() {
            return Err(SolverError::Domain(format!(
                "ambient dimension {ambient_n} below the number of axes {}",
                axes.len()
            )));
        }
        if !(axes[0].lo > 0.0) {
            return Err(SolverError::Domain(format!(
                "height interval must stay positive, lower bound {}",
                axes[0].lo
            )));
        }
        for (k, a) in axes.iter().enumerate() {
            if !(a.lo < a.hi) || a.count < 3 {
                return Err(SolverError::Domain(format!(
                    "axis {k}: need lo < hi and at least 3 nodes"
                )));
            }
        }
        Ok(Self { ambient_n, axes })
    }

    pub fn ambient_n(&self) -> usize {
        self.ambient_n
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn k(&self) -> usize {
        self.axes.len()
    }

    pub fn node_count(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    pub fn interior_count(&self) -> usize {
        self.axes.iter().map(|a| a.count - 2).product()
    }

    pub fn index(&self, m: &Multi) -> usize {
        let mut idx = 0;
        for (k, a) in self.axes.iter().enumerate() {
            debug_assert!(m[k] < a.count);
            idx = idx * a.count + m[k];
        }
        idx
    }

    pub fn de_index(&self, mut idx: usize) -> Multi {
        let mut m = [0; MAX_AXES];
        for k in (0..self.k()).rev() {
            m[k] = idx % self.axes[k].count;
            idx /= self.axes[k].count;
        }
        m
    }

    pub fn coords(&self, m: &Multi) -> [f64; MAX_AXES] {
        let mut x = [0.0; MAX_AXES];
        for (k, a) in self.axes.iter().enumerate() {
            x[k] = a.lo + a.spacing() * m[k] as f64;
        }
        x
    }

    pub fn is_boundary(&self, m: &Multi) -> bool {
        self.axes.iter().enumerate().any(|(k, a)| m[k] == 0 || m[k] == a.count - 1)
    }

    /// Linear index among interior nodes (all multi-indices shifted by 1).
    pub fn interior_index(&self, m: &Multi) -> usize {
        let mut idx = 0;
        for (k, a) in self.axes.iter().enumerate() {
            debug_assert!(m[k] >= 1 && m[k] <= a.count - 2);
            idx = idx * (a.count - 2) + (m[k] - 1);
        }
        idx
    }

    pub fn interior_de_index(&self, mut idx: usize) -> Multi {
        let mut m = [0; MAX_AXES];
        for k in (0..self.k()).rev() {
            let c = self.axes[k].count - 2;
            m[k] = 1 + idx % c;
            idx /= c;
        }
        m
    }

    /// Half bandwidth of a nearest-neighbor (including diagonal) stencil in
    /// the interior linear ordering.
    pub fn interior_bandwidth(&self) -> usize {
        let mut stride = 1;
        let mut band = 0;
        for k in (0..self.k()).rev() {
            band += stride;
            stride *= self.axes[k].count - 2;
        }
        band
    }

    pub fn iter_nodes(&self) -> impl Iterator<Item = Multi> + '_ {
        (0..self.node_count()).map(|i| self.de_index(i))
    }

    pub fn iter_interior(&self) -> impl Iterator<Item = Multi> + '_ {
        (0..self.interior_count()).map(|i| self.interior_de_index(i))
    }

    pub fn max_spacing(&self) -> f64 {
        self.axes.iter().map(|a| a.spacing()).fold(0.0, f64::max)
    }
}

/// A grid function with Dirichlet data. Boundary entries of `values` always
/// equal the stored boundary data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSolution {
    pub domain: BoxDomain,
    values: Vec<f64>,
    boundary: Vec<f64>,
    spacelike_margin: f64,
}

impl GridSolution {
    /// Build from full-grid `values` and full-grid `boundary` (only the
    /// boundary entries of the latter are read; they overwrite `values` on
    /// boundary nodes).
    pub fn new(
        domain: BoxDomain,
        mut values: Vec<f64>,
        boundary: Vec<f64>,
    ) -> Result<Self, SolverError> {
        if values.len() != domain.node_count() || boundary.len() != domain.node_count() {
            return Err(SolverError::Domain(format!(
                "value array length {} does not match grid with {} nodes",
                values.len(),
                domain.node_count()
            )));
        }
        for m in domain.iter_nodes() {
            if domain.is_boundary(&m) {
                let i = domain.index(&m);
                values[i] = boundary[i];
            }
        }
        let spacelike_margin = compute_margin(&domain, &values);
        Ok(Self { domain, values, boundary, spacelike_margin })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn boundary(&self) -> &[f64] {
        &self.boundary
    }

    pub fn spacelike_margin(&self) -> f64 {
        self.spacelike_margin
    }

    pub fn is_spacelike(&self) -> bool {
        self.spacelike_margin > 0.0
    }

    /// Replace interior values, keeping boundary data; recomputes the margin.
    pub fn with_interior(&self, interior: &[f64]) -> Self {
        assert_eq!(interior.len(), self.domain.interior_count());
        let mut values = self.values.clone();
        for (j, m) in self.domain.iter_interior().enumerate() {
            values[self.domain.index(&m)] = interior[j];
        }
        let spacelike_margin = compute_margin(&self.domain, &values);
        Self { domain: self.domain.clone(), values, boundary: self.boundary.clone(), spacelike_margin }
    }

    pub fn interior_values(&self) -> Vec<f64> {
        self.domain.iter_interior().map(|m| self.values[self.domain.index(&m)]).collect()
    }

    pub fn max_interior_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.domain, other.domain);
        self.domain
            .iter_interior()
            .map(|m| {
                let i = self.domain.index(&m);
                (self.values[i] - other.values[i]).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// `min(1 − x₁² |∇ₕu|²)` over interior nodes, centered differences.
pub(crate) fn compute_margin(domain: &BoxDomain, values: &[f64]) -> f64 {
    let mut margin = f64::INFINITY;
    for m in domain.iter_interior() {
        let x = domain.coords(&m);
        let mut g2 = 0.0;
        for k in 0..domain.k() {
            let h = domain.axes()[k].spacing();
            let mut mp = m;
            let mut mm = m;
            mp[k] += 1;
            mm[k] -= 1;
            let d = (values[domain.index(&mp)] - values[domain.index(&mm)]) / (2.0 * h);
            g2 += d * d;
        }
        margin = margin.min(1.0 - x[0] * x[0] * g2);
    }
    margin
}
