//! Discretization orders and the per-element degree-of-freedom layout.

use serde::{Deserialize, Serialize};

/// Polynomial orders: trial degree `p`, test enrichment `dp` (test spaces use
/// degree p + dp), and the quadrature point count per direction.
/// Degree conventions for nominal order p: continuous traces and L2 field
/// variables carry degree p+1 (the fields are "once enriched" -- a plain
/// degree-p field space cannot represent the reference solutions on the
/// reference mesh to the accuracy the verification targets), flux traces
/// carry degree p, and the broken test spaces carry the field degree plus
/// dp. Keeping the flux two degrees under the tests also makes every
/// flux/test pairing full-rank regardless of which boundary conditions are
/// active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceSpec {
    pub p: usize,
    pub dp: usize,
    /// Degree of the element (L2) field variables; defaults to p + 1.
    pub field_degree: usize,
    /// Degree of the continuous (H^{1/2}-type) traces; defaults to p + 1.
    pub cont_degree: usize,
    /// Degree of the flux (H^{-1/2}-type) traces; defaults to p.
    pub flux_degree: usize,
    /// Points per direction; PML coefficients are rational in position, so
    /// element integrals are over-integrated rather than exact.
    pub quad_points: usize,
}

impl SpaceSpec {
    pub fn new(p: usize, dp: usize) -> Self {
        assert!(p >= 1, "trial degree must be at least 1");
        assert!(dp >= 1, "test enrichment must be at least 1");
        SpaceSpec {
            p,
            dp,
            field_degree: p + 1,
            cont_degree: p + 1,
            flux_degree: p,
            quad_points: p + dp + 6,
        }
    }

    pub fn with_quadrature(mut self, m: usize) -> Self {
        self.quad_points = m;
        self
    }

    pub fn with_cont_degree(mut self, d: usize) -> Self {
        assert!(d >= 1);
        self.cont_degree = d;
        self
    }

    pub fn with_field_degree(mut self, d: usize) -> Self {
        assert!(d >= 1);
        self.field_degree = d;
        self
    }

    pub fn test_degree(&self) -> usize {
        self.field_degree + self.dp
    }

    /// Scalar component dimension of a trial field block.
    pub fn field_dofs_per_comp(&self) -> usize {
        (self.field_degree + 1) * (self.field_degree + 1)
    }

    /// Scalar component dimension of a test block.
    pub fn test_dofs_per_comp(&self) -> usize {
        (self.test_degree() + 1) * (self.test_degree() + 1)
    }
}

/// Component counts of the trial space of one physics; all per-element and
/// per-edge dimensions derive from this plus the polynomial degrees.
///
/// Trial dofs are ordered: field components (each a full Q_p tensor block),
/// then continuous-trace components (4 vertex dofs in local corner order,
/// then p-1 bubbles for each of the 4 local edges), then flux-trace
/// components (flux_degree+1 Legendre modes for each local edge). Local
/// edges are numbered bottom, right, top, left; local corners
/// counterclockwise from the lower-left.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ElementLayout {
    /// Polynomial degree of the element field variables.
    pub field_degree: usize,
    /// Per-edge polynomial degree of the continuous traces.
    pub cont_degree: usize,
    /// Per-edge polynomial degree of the flux traces.
    pub flux_degree: usize,
    pub n_field_comps: usize,
    pub n_cont_comps: usize,
    pub n_flux_comps: usize,
}

impl ElementLayout {
    pub fn field_dofs(&self) -> usize {
        self.n_field_comps * (self.field_degree + 1) * (self.field_degree + 1)
    }

    /// 4 vertices + 4(cont_degree - 1) bubbles around the element loop.
    pub fn cont_dofs_per_comp(&self) -> usize {
        4 * self.cont_degree
    }

    pub fn cont_bubbles_per_edge(&self) -> usize {
        self.cont_degree - 1
    }

    pub fn flux_dofs_per_comp(&self) -> usize {
        4 * (self.flux_degree + 1)
    }

    pub fn trace_dofs(&self) -> usize {
        self.n_cont_comps * self.cont_dofs_per_comp()
            + self.n_flux_comps * self.flux_dofs_per_comp()
    }

    pub fn n_trial(&self) -> usize {
        self.field_dofs() + self.trace_dofs()
    }

    /// Start of field component `comp` in the trial vector.
    pub fn field_offset(&self, comp: usize) -> usize {
        comp * (self.field_degree + 1) * (self.field_degree + 1)
    }

    /// Trace-block index (relative to the start of the trace block) of a
    /// continuous-trace vertex dof.
    pub fn cont_vertex_index(&self, comp: usize, corner: usize) -> usize {
        comp * self.cont_dofs_per_comp() + corner
    }

    /// Trace-block index of a continuous-trace edge bubble.
    pub fn cont_bubble_index(&self, comp: usize, local_edge: usize, k: usize) -> usize {
        debug_assert!(k < self.cont_bubbles_per_edge() || self.cont_degree == 1);
        comp * self.cont_dofs_per_comp() + 4 + local_edge * self.cont_bubbles_per_edge() + k
    }

    /// Trace-block index of a flux-trace mode (k = 0..flux_degree).
    pub fn flux_index(&self, comp: usize, local_edge: usize, k: usize) -> usize {
        debug_assert!(k <= self.flux_degree);
        self.n_cont_comps * self.cont_dofs_per_comp()
            + comp * self.flux_dofs_per_comp()
            + local_edge * (self.flux_degree + 1)
            + k
    }

    /// Absolute trial index of a trace-block index.
    pub fn trace_to_trial(&self, trace_index: usize) -> usize {
        self.field_dofs() + trace_index
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn acoustics_dimensions_nominal_order_2() {
        // fields p (scalar) + u (2 comps) at degree 3; continuous trace at
        // degree 3; flux trace at degree 2
        let layout = ElementLayout {
            field_degree: 3,
            cont_degree: 3,
            flux_degree: 2,
            n_field_comps: 3,
            n_cont_comps: 1,
            n_flux_comps: 1,
        };
        assert_eq!(layout.field_dofs(), 48); // 16 + 32
        assert_eq!(layout.cont_dofs_per_comp(), 12);
        assert_eq!(layout.flux_dofs_per_comp(), 12);
        assert_eq!(layout.n_trial(), 72);
        let spec = SpaceSpec::new(2, 1);
        assert_eq!(spec.field_degree, 3);
        assert_eq!(spec.test_degree(), 4);
    }

    #[test]
    fn index_helpers_are_consistent() {
        let layout = ElementLayout {
            field_degree: 3,
            cont_degree: 3,
            flux_degree: 3,
            n_field_comps: 2,
            n_cont_comps: 2,
            n_flux_comps: 2,
        };
        // all trace indices are distinct and within range
        let mut seen = vec![false; layout.trace_dofs()];
        for comp in 0..2 {
            for corner in 0..4 {
                let i = layout.cont_vertex_index(comp, corner);
                assert!(!seen[i]);
                seen[i] = true;
            }
            for e in 0..4 {
                for k in 0..layout.cont_bubbles_per_edge() {
                    let i = layout.cont_bubble_index(comp, e, k);
                    assert!(!seen[i]);
                    seen[i] = true;
                }
            }
        }
        for comp in 0..2 {
            for e in 0..4 {
                for k in 0..=layout.flux_degree {
                    let i = layout.flux_index(comp, e, k);
                    assert!(!seen[i]);
                    seen[i] = true;
                }
            }
        }
        assert!(seen.iter().all(|&b| b));
    }
}
