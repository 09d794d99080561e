//! Per-element assembly of the sesquilinear matrix B, the Hermitian Gram
//! matrix G of the adjoint graph norm, and the load vector, for the four
//! broken ultraweak PML formulations.
//!
//! Conventions shared by all four assemblers:
//! - basis functions are real; complex coefficients enter exactly as
//!   printed in the variational forms, so B entries are coefficient times
//!   a real integral and G entries are inner products of operator images
//!   with the second factor conjugated;
//! - rows are test dofs, columns are trial dofs, B[r][c] = b(phi_c, psi_r);
//! - skeleton pairings use the global edge orientation: flux-type trace
//!   columns carry the element sign n_K . n_e, continuous-trace columns
//!   pair against test traces evaluated with the element's outward normal.

mod acoustics;
mod elasticity;
mod maxwell;

use crate::basis::{edge_trace_basis, scalar_basis, TraceKind};
use crate::error::{Result, SolverError};
use crate::mesh::{edge_to_reference, StructuredMesh, EDGE_END_CORNER, EDGE_START_CORNER};
use crate::pml::{Formulation, StretchProfile};
use crate::quadrature::{gauss_rule, gauss_rule_1d};
use crate::spaces::{ElementLayout, SpaceSpec};
use crate::{c64, C64};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Material constants; the compliance acting on 2D symmetric tensors is the
/// plane-strain inverse of C_ijkl = lambda d_ij d_kl + mu (d_ik d_jl + d_il d_jk):
/// S:X = (X + X^T)/(4 mu) - lambda/(4 mu (lambda + mu)) tr(X) I.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialParams {
    pub omega: f64,
    pub eps0: f64,
    pub mu0: f64,
    pub sigma: f64,
    pub lambda: f64,
    pub mu_lame: f64,
    pub rho0: f64,
}

impl MaterialParams {
    /// Apply the 2D compliance to a (possibly nonsymmetric) complex matrix.
    pub fn compliance_apply(&self, x: [[C64; 2]; 2]) -> [[C64; 2]; 2] {
        let inv4mu = 1.0 / (4.0 * self.mu_lame);
        let c = self.lambda / (4.0 * self.mu_lame * (self.lambda + self.mu_lame));
        let tr = x[0][0] + x[1][1];
        [
            [2.0 * inv4mu * x[0][0] - c * tr, inv4mu * (x[0][1] + x[1][0])],
            [inv4mu * (x[1][0] + x[0][1]), 2.0 * inv4mu * x[1][1] - c * tr],
        ]
    }

    /// Apply the 2D plane-strain stiffness: C:e = lambda tr(e) I + 2 mu e.
    pub fn stiffness_apply(&self, e: [[C64; 2]; 2]) -> [[C64; 2]; 2] {
        let tr = e[0][0] + e[1][1];
        let two_mu = 2.0 * self.mu_lame;
        [
            [self.lambda * tr + two_mu * e[0][0], two_mu * e[0][1]],
            [two_mu * e[1][0], self.lambda * tr + two_mu * e[1][1]],
        ]
    }
}

/// Element-level system: rows are test dofs, columns trial dofs (fields
/// first, then traces in the `ElementLayout` order).
#[derive(Debug, Clone)]
pub struct ElementSystem {
    pub b: DMatrix<C64>,
    pub g: DMatrix<C64>,
    pub load: DVector<C64>,
    pub layout: ElementLayout,
    pub n_test: usize,
}

impl ElementSystem {
    pub fn n_trial(&self) -> usize {
        self.layout.n_trial()
    }
}

/// Trial layout of each formulation.
pub fn layout_for(formulation: Formulation, spec: &SpaceSpec) -> ElementLayout {
    let (n_field_comps, n_cont_comps, n_flux_comps) = match formulation {
        // fields (p, u), continuous p_hat, flux u_hat_n
        Formulation::AcousticsA | Formulation::AcousticsB => (3, 1, 1),
        // fields (E, H), continuous H_hat, flux E_hat
        Formulation::Maxwell2d => (3, 1, 1),
        // fields (u, sigma in Voigt form), continuous u_hat (2 comps),
        // flux traction (2 comps)
        Formulation::Elasticity2d => (5, 2, 2),
    };
    ElementLayout {
        field_degree: spec.field_degree,
        cont_degree: spec.cont_degree,
        flux_degree: spec.flux_degree,
        n_field_comps,
        n_cont_comps,
        n_flux_comps,
    }
}

/// Number of scalar test components of each formulation.
pub fn test_comps_for(formulation: Formulation) -> usize {
    match formulation {
        Formulation::AcousticsA | Formulation::AcousticsB => 3, // v (2) + q
        Formulation::Maxwell2d => 3,                            // F + G (2)
        Formulation::Elasticity2d => 5,                         // tau (3) + v (2)
    }
}

/// Tabulated reference-element data reused across all elements of a run.
pub struct ReferenceTables {
    pub spec: SpaceSpec,
    /// Volume rule on the reference square.
    pub vol_pts: Vec<(f64, f64)>,
    pub vol_wts: Vec<f64>,
    /// Trial scalar basis at volume points: [pt][fn].
    pub trial_vals: Vec<Vec<f64>>,
    /// Test scalar basis values and reference gradients at volume points.
    pub test_vals: Vec<Vec<f64>>,
    pub test_dxi: Vec<Vec<f64>>,
    pub test_deta: Vec<Vec<f64>>,
    /// 1D rule on edges.
    pub edge_pts: Vec<f64>,
    pub edge_wts: Vec<f64>,
    /// Test scalar basis restricted to each local edge: [local_edge][pt][fn].
    pub test_edge_vals: [Vec<Vec<f64>>; 4],
    /// Continuous trace basis (vertex pair + bubbles) at edge points.
    pub cont_trace_vals: Vec<Vec<f64>>,
    /// Flux (Legendre) trace basis at edge points.
    pub flux_trace_vals: Vec<Vec<f64>>,
}

impl ReferenceTables {
    pub fn build(spec: &SpaceSpec) -> Result<ReferenceTables> {
        let vol = gauss_rule(spec.quad_points)?;
        let trial_vals = vol
            .points
            .iter()
            .map(|&pt| scalar_basis(spec.field_degree, pt).0)
            .collect();
        let mut test_vals = Vec::with_capacity(vol.points.len());
        let mut test_dxi = Vec::with_capacity(vol.points.len());
        let mut test_deta = Vec::with_capacity(vol.points.len());
        for &pt in &vol.points {
            let (v, g) = scalar_basis(spec.test_degree(), pt);
            test_vals.push(v);
            test_dxi.push(g.iter().map(|d| d.0).collect());
            test_deta.push(g.iter().map(|d| d.1).collect());
        }
        let edge = gauss_rule_1d(spec.quad_points)?;
        let test_edge_vals = std::array::from_fn(|le| {
            edge.points
                .iter()
                .map(|&s| scalar_basis(spec.test_degree(), edge_to_reference(le, s)).0)
                .collect()
        });
        let cont_trace_vals = edge
            .points
            .iter()
            .map(|&s| edge_trace_basis(TraceKind::Continuous, spec.cont_degree, s))
            .collect();
        let flux_trace_vals = edge
            .points
            .iter()
            .map(|&s| edge_trace_basis(TraceKind::Discontinuous, spec.flux_degree, s))
            .collect();
        Ok(ReferenceTables {
            spec: *spec,
            vol_pts: vol.points,
            vol_wts: vol.weights,
            trial_vals,
            test_vals,
            test_dxi,
            test_deta,
            edge_pts: edge.points,
            edge_wts: edge.weights,
            test_edge_vals,
            cont_trace_vals,
            flux_trace_vals,
        })
    }
}

/// Assembles element systems for one (mesh, orders, stretch, material)
/// quadruple.
pub struct Assembler<'a> {
    pub mesh: &'a StructuredMesh,
    pub spec: SpaceSpec,
    pub pml: &'a StretchProfile,
    pub params: &'a MaterialParams,
    pub tables: ReferenceTables,
}

impl<'a> Assembler<'a> {
    pub fn new(
        mesh: &'a StructuredMesh,
        spec: SpaceSpec,
        pml: &'a StretchProfile,
        params: &'a MaterialParams,
    ) -> Result<Self> {
        let tables = ReferenceTables::build(&spec)?;
        Ok(Assembler {
            mesh,
            spec,
            pml,
            params,
            tables,
        })
    }

    pub fn assemble(&self, formulation: Formulation, element: usize) -> Result<ElementSystem> {
        if element >= self.mesh.elements.len() {
            return Err(SolverError::Assembly(format!(
                "element {element} out of range"
            )));
        }
        match formulation {
            Formulation::AcousticsA => acoustics::assemble(self, element, true),
            Formulation::AcousticsB => acoustics::assemble(self, element, false),
            Formulation::Maxwell2d => maxwell::assemble(self, element),
            Formulation::Elasticity2d => elasticity::assemble(self, element),
        }
    }

    /// Physical quadrature data of one element: points, weights scaled by
    /// the Jacobian (h/2)^2, and the gradient scale 2/h.
    pub(crate) fn element_quad(&self, element: usize) -> (Vec<(f64, f64)>, Vec<f64>, f64) {
        let h = self.mesh.h;
        let scale = (0.5 * h) * (0.5 * h);
        let pts = self
            .tables
            .vol_pts
            .iter()
            .map(|&(xi, eta)| self.mesh.to_physical(element, xi, eta))
            .collect();
        let wts = self.tables.vol_wts.iter().map(|w| w * scale).collect();
        (pts, wts, 2.0 / h)
    }
}

/// Rank-1 update helper for B blocks:
/// B[row0 + i][col0 + j] += scale * test[i] * trial[j].
pub(crate) fn accumulate_block(
    b: &mut DMatrix<C64>,
    row0: usize,
    col0: usize,
    scale: C64,
    test: &[f64],
    trial: &[f64],
) {
    if scale == c64(0.0, 0.0) {
        return;
    }
    for (j, &t) in trial.iter().enumerate() {
        if t == 0.0 {
            continue;
        }
        let s = scale * t;
        let col = col0 + j;
        for (i, &te) in test.iter().enumerate() {
            b[(row0 + i, col)] += s * te;
        }
    }
}

/// Gram accumulation: G += w * conj(t_r) t_s over the lower triangle, where
/// `t` is one operator-image component evaluated on every test dof. The
/// upper triangle is mirrored once at the end of assembly.
pub(crate) fn accumulate_gram_lower(g: &mut DMatrix<C64>, w: f64, t: &[C64]) {
    let n = t.len();
    for s in 0..n {
        let ts = t[s] * w;
        if ts == c64(0.0, 0.0) {
            continue;
        }
        for r in s..n {
            g[(r, s)] += t[r].conj() * ts;
        }
    }
}

pub(crate) fn mirror_lower_to_upper(g: &mut DMatrix<C64>) {
    let n = g.nrows();
    for s in 0..n {
        for r in (s + 1)..n {
            g[(s, r)] = g[(r, s)].conj();
        }
    }
}

/// Continuous-trace pairing on one local edge: adds
/// `sign * sum_s w_s coeff * trace_basis(s) * test_comp(s)` into the B block
/// whose columns are the trace dofs of `(cont_comp)` on that edge (vertex
/// dofs at the ends plus the edge bubbles).
#[allow(clippy::too_many_arguments)]
pub(crate) fn accumulate_cont_trace_edge(
    b: &mut DMatrix<C64>,
    asm: &Assembler,
    layout: &ElementLayout,
    test_row0: usize,
    local_edge: usize,
    cont_comp: usize,
    coeff: C64,
    test_table: &[Vec<f64>],
) {
    let jac = 0.5 * asm.mesh.h;
    let n_test = test_table[0].len();
    let start = layout.trace_to_trial(layout.cont_vertex_index(
        cont_comp,
        EDGE_START_CORNER[local_edge],
    ));
    let end = layout.trace_to_trial(layout.cont_vertex_index(cont_comp, EDGE_END_CORNER[local_edge]));
    for (q, tr_vals) in asm.tables.cont_trace_vals.iter().enumerate() {
        let w = asm.tables.edge_wts[q] * jac;
        let tv = &test_table[q];
        let s = coeff * w;
        // vertex hats
        for (col, tval) in [(start, tr_vals[0]), (end, tr_vals[1])] {
            if tval != 0.0 {
                let sv = s * tval;
                for i in 0..n_test {
                    b[(test_row0 + i, col)] += sv * tv[i];
                }
            }
        }
        // bubbles
        for k in 0..layout.cont_bubbles_per_edge() {
            let col = layout.trace_to_trial(layout.cont_bubble_index(cont_comp, local_edge, k));
            let sv = s * tr_vals[2 + k];
            if sv == c64(0.0, 0.0) {
                continue;
            }
            for i in 0..n_test {
                b[(test_row0 + i, col)] += sv * tv[i];
            }
        }
    }
}

/// Flux-trace pairing on one local edge (Legendre modes, sign included by
/// the caller through `coeff`).
#[allow(clippy::too_many_arguments)]
pub(crate) fn accumulate_flux_trace_edge(
    b: &mut DMatrix<C64>,
    asm: &Assembler,
    layout: &ElementLayout,
    test_row0: usize,
    local_edge: usize,
    flux_comp: usize,
    coeff: C64,
    test_table: &[Vec<f64>],
) {
    let jac = 0.5 * asm.mesh.h;
    let n_test = test_table[0].len();
    for (q, tr_vals) in asm.tables.flux_trace_vals.iter().enumerate() {
        let w = asm.tables.edge_wts[q] * jac;
        let tv = &test_table[q];
        let s = coeff * w;
        for k in 0..=layout.flux_degree {
            let col = layout.trace_to_trial(layout.flux_index(flux_comp, local_edge, k));
            let sv = s * tr_vals[k];
            for i in 0..n_test {
                b[(test_row0 + i, col)] += sv * tv[i];
            }
        }
    }
}
