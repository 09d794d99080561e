//! L2 error metrics against the exact solutions, field/trace discrepancy
//! measures between two runs, and point evaluation of solved fields.

use crate::basis::{edge_trace_basis, scalar_basis, TraceKind};
use crate::error::{Result, SolverError};
use crate::exact::{
    acoustic_exact_2d, elastic_exact_2d, maxwell_exact_2d, GreensParams, PlaneWave,
};
use crate::mesh::{Region, StructuredMesh};
use crate::pml::Formulation;
use crate::quadrature::gauss_rule;
use crate::solver::dofs::GlobalDofs;
use crate::solver::Solution;
use crate::spaces::SpaceSpec;
use crate::C64;
use serde::Serialize;
use std::collections::BTreeMap;

/// Which elements an error metric integrates over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorRegion {
    Interior,
    Full,
}

impl ErrorRegion {
    fn includes(&self, region: Region) -> bool {
        match self {
            ErrorRegion::Interior => region == Region::Interior,
            ErrorRegion::Full => true,
        }
    }
}

/// Exact-solution evaluator for error measurement: values aligned with the
/// leading field components of the trial layout.
pub enum ExactSolution {
    Acoustics(GreensParams),
    Maxwell(GreensParams),
    Elasticity(GreensParams),
    AcousticPlaneWave(PlaneWave),
}

/// One measured variable: display name and the range of field components it
/// covers.
pub struct VarSpec {
    pub name: &'static str,
    pub comps: std::ops::Range<usize>,
}

impl ExactSolution {
    pub fn for_physics(physics: Formulation, params: &GreensParams) -> ExactSolution {
        match physics {
            Formulation::AcousticsA | Formulation::AcousticsB => {
                ExactSolution::Acoustics(*params)
            }
            Formulation::Maxwell2d => ExactSolution::Maxwell(*params),
            Formulation::Elasticity2d => ExactSolution::Elasticity(*params),
        }
    }

    pub fn variables(&self) -> Vec<VarSpec> {
        match self {
            ExactSolution::Acoustics(_) | ExactSolution::AcousticPlaneWave(_) => vec![
                VarSpec { name: "p", comps: 0..1 },
                VarSpec { name: "u", comps: 1..3 },
            ],
            ExactSolution::Maxwell(_) => vec![
                VarSpec { name: "E", comps: 0..2 },
                VarSpec { name: "H", comps: 2..3 },
            ],
            ExactSolution::Elasticity(_) => vec![VarSpec { name: "u", comps: 0..2 }],
        }
    }

    /// Values of the measured field components at a point.
    pub fn eval(&self, x: f64, y: f64) -> Result<Vec<C64>> {
        Ok(match self {
            ExactSolution::Acoustics(p) => {
                let (pr, u) = acoustic_exact_2d((x, y), p)?;
                vec![pr, u[0], u[1]]
            }
            ExactSolution::Maxwell(p) => {
                let (e, h) = maxwell_exact_2d((x, y), p)?;
                vec![e[0], e[1], h]
            }
            ExactSolution::Elasticity(p) => {
                let u = elastic_exact_2d((x, y), p)?;
                vec![u[0], u[1]]
            }
            ExactSolution::AcousticPlaneWave(w) => {
                let u = w.velocity(x, y);
                vec![w.pressure(x, y), u[0], u[1]]
            }
        })
    }

    /// Export-facing variable names per component.
    pub fn component_names(&self) -> Vec<&'static str> {
        match self {
            ExactSolution::Acoustics(_) | ExactSolution::AcousticPlaneWave(_) => {
                vec!["p", "ux", "uy"]
            }
            ExactSolution::Maxwell(_) => vec!["Ex", "Ey", "H"],
            ExactSolution::Elasticity(_) => vec!["ux", "uy"],
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ErrorReport {
    pub region: ErrorRegion,
    /// Percent relative L2 error per variable.
    pub per_variable: BTreeMap<String, f64>,
    /// Percent combined error over the primary field set.
    pub combined: f64,
}

/// Evaluate one field component of a solved run at a reference point.
pub fn eval_field(
    spec: &SpaceSpec,
    fields: &nalgebra::DVector<C64>,
    comp: usize,
    ref_pt: (f64, f64),
) -> C64 {
    let n = spec.field_dofs_per_comp();
    let (vals, _) = scalar_basis(spec.field_degree, ref_pt);
    let mut acc = crate::c64(0.0, 0.0);
    for (i, &v) in vals.iter().enumerate() {
        acc += fields[comp * n + i] * v;
    }
    acc
}

/// Relative L2 errors of a solved run against the exact solution.
pub fn relative_error(
    mesh: &StructuredMesh,
    spec: &SpaceSpec,
    sol: &Solution,
    exact: &ExactSolution,
    region: ErrorRegion,
) -> Result<ErrorReport> {
    let vars = exact.variables();
    let ncomp = vars.iter().map(|v| v.comps.end).max().unwrap();
    let rule = gauss_rule(spec.quad_points + 2)?;
    let scale = (0.5 * mesh.h) * (0.5 * mesh.h);
    let mut num = vec![0.0f64; vars.len()];
    let mut den = vec![0.0f64; vars.len()];
    for (e, el) in mesh.elements.iter().enumerate() {
        if !region.includes(el.region) {
            continue;
        }
        for (&(xi, eta), &w) in rule.points.iter().zip(&rule.weights) {
            let (x, y) = mesh.to_physical(e, xi, eta);
            let ex = exact.eval(x, y)?;
            let wj = w * scale;
            for c in 0..ncomp {
                let uh = eval_field(spec, &sol.fields[e], c, (xi, eta));
                let var = vars.iter().position(|v| v.comps.contains(&c)).unwrap();
                num[var] += wj * (uh - ex[c]).norm_sqr();
                den[var] += wj * ex[c].norm_sqr();
            }
        }
    }
    let mut per_variable = BTreeMap::new();
    for (i, v) in vars.iter().enumerate() {
        if den[i] == 0.0 {
            return Err(SolverError::Domain(format!(
                "relative error of '{}' undefined: zero exact norm",
                v.name
            )));
        }
        per_variable.insert(v.name.to_string(), 100.0 * (num[i] / den[i]).sqrt());
    }
    let (sn, sd) = (num.iter().sum::<f64>(), den.iter().sum::<f64>());
    Ok(ErrorReport {
        region,
        per_variable,
        combined: 100.0 * (sn / sd).sqrt(),
    })
}

/// Combined relative L2 discrepancy between two runs over a region, with
/// the exact norm as denominator.
pub fn field_discrepancy(
    mesh: &StructuredMesh,
    spec: &SpaceSpec,
    a: &Solution,
    b: &Solution,
    exact: &ExactSolution,
    region: ErrorRegion,
) -> Result<f64> {
    let vars = exact.variables();
    let ncomp = vars.iter().map(|v| v.comps.end).max().unwrap();
    let rule = gauss_rule(spec.quad_points + 2)?;
    let scale = (0.5 * mesh.h) * (0.5 * mesh.h);
    let (mut num, mut den) = (0.0f64, 0.0f64);
    for (e, el) in mesh.elements.iter().enumerate() {
        if !region.includes(el.region) {
            continue;
        }
        for (&(xi, eta), &w) in rule.points.iter().zip(&rule.weights) {
            let (x, y) = mesh.to_physical(e, xi, eta);
            let ex = exact.eval(x, y)?;
            let wj = w * scale;
            for c in 0..ncomp {
                let ua = eval_field(spec, &a.fields[e], c, (xi, eta));
                let ub = eval_field(spec, &b.fields[e], c, (xi, eta));
                num += wj * (ua - ub).norm_sqr();
                den += wj * ex[c].norm_sqr();
            }
        }
    }
    Ok((num / den).sqrt())
}

/// Trace value of a continuous-trace component at edge parameter s.
pub fn eval_cont_trace(
    mesh: &StructuredMesh,
    dofs: &GlobalDofs,
    trace: &nalgebra::DVector<C64>,
    edge: usize,
    comp: usize,
    s: f64,
) -> C64 {
    let deg = dofs.layout.cont_degree;
    let basis = edge_trace_basis(TraceKind::Continuous, deg, s);
    let (o, sign) = mesh.edges[edge].owners[0];
    let conn = &mesh.connectivity[o];
    let local = conn
        .edges
        .iter()
        .position(|&(e, sg)| e == edge && sg == sign)
        .unwrap();
    let va = conn.vertices[crate::mesh::EDGE_START_CORNER[local]];
    let vb = conn.vertices[crate::mesh::EDGE_END_CORNER[local]];
    let mut acc = trace[dofs.vertex_dof(va, comp)] * basis[0]
        + trace[dofs.vertex_dof(vb, comp)] * basis[1];
    for k in 0..deg - 1 {
        acc += trace[dofs.cont_bubble_dof(edge, comp, k)] * basis[2 + k];
    }
    acc
}

/// Trace value of a flux component at edge parameter s.
pub fn eval_flux_trace(
    dofs: &GlobalDofs,
    trace: &nalgebra::DVector<C64>,
    edge: usize,
    comp: usize,
    s: f64,
) -> C64 {
    let deg = dofs.layout.flux_degree;
    let basis = edge_trace_basis(TraceKind::Discontinuous, deg, s);
    (0..=deg)
        .map(|k| trace[dofs.flux_dof(edge, comp, k)] * basis[k])
        .sum()
}

/// Relative L2 discrepancy of all trace variables between two runs over the
/// PML-region skeleton (edges all of whose owners are PML elements),
/// normalized by the first run's trace magnitude there.
pub fn trace_discrepancy_pml(
    mesh: &StructuredMesh,
    dofs: &GlobalDofs,
    a: &Solution,
    b: &Solution,
) -> Result<f64> {
    let rule = crate::quadrature::gauss_rule_1d(dofs.layout.cont_degree + 3)?;
    let edge_scale = 0.5 * mesh.h;
    let (mut num, mut den) = (0.0f64, 0.0f64);
    for (eid, edge) in mesh.edges.iter().enumerate() {
        let all_pml = edge
            .owners
            .iter()
            .all(|&(o, _)| mesh.elements[o].region == Region::Pml);
        if !all_pml {
            continue;
        }
        for (&s, &w) in rule.points.iter().zip(&rule.weights) {
            let wj = w * edge_scale;
            for comp in 0..dofs.layout.n_cont_comps {
                let ta = eval_cont_trace(mesh, dofs, &a.trace, eid, comp, s);
                let tb = eval_cont_trace(mesh, dofs, &b.trace, eid, comp, s);
                num += wj * (ta - tb).norm_sqr();
                den += wj * ta.norm_sqr();
            }
            for comp in 0..dofs.layout.n_flux_comps {
                let ta = eval_flux_trace(dofs, &a.trace, eid, comp, s);
                let tb = eval_flux_trace(dofs, &b.trace, eid, comp, s);
                num += wj * (ta - tb).norm_sqr();
                den += wj * ta.norm_sqr();
            }
        }
    }
    if den == 0.0 {
        return Err(SolverError::Domain(
            "trace discrepancy undefined: zero trace norm in the PML region".into(),
        ));
    }
    Ok((num / den).sqrt())
}
