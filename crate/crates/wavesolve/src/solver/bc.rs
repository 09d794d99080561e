//! Essential boundary conditions on skeleton unknowns.
//!
//! Nonhomogeneous data is imposed by edge-wise projection: vertex dofs of
//! continuous traces by point evaluation, their edge bubbles by constrained
//! L2 projection, and flux traces by plain per-edge L2 projection (diagonal
//! in the Legendre basis). A vertex shared by two constrained edges gets
//! its value by point evaluation, which both edges agree on because the
//! data is a single continuous function.

use crate::basis::{edge_trace_basis, TraceKind};
use crate::error::Result;
use crate::exact::{
    acoustic_exact_2d, elastic_exact_2d, maxwell_exact_2d, GreensParams, PlaneWave,
};
use crate::mesh::{BoundaryTag, StructuredMesh};
use crate::pml::Formulation;
use crate::quadrature::gauss_rule_1d;
use crate::solver::dofs::GlobalDofs;
use crate::{c64, C64};

/// Data for one constrained trace component: a function of the position and
/// the (globally oriented) edge tangent.
pub type BcFn = Box<dyn Fn(f64, f64, (f64, f64)) -> C64>;

pub enum BcValue {
    Zero,
    Data(BcFn),
}

impl BcValue {
    fn eval(&self, x: f64, y: f64, tangent: (f64, f64)) -> C64 {
        match self {
            BcValue::Zero => c64(0.0, 0.0),
            BcValue::Data(f) => f(x, y, tangent),
        }
    }

    fn is_zero(&self) -> bool {
        matches!(self, BcValue::Zero)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceVarKind {
    Continuous,
    Flux,
}

pub struct TraceConstraint {
    pub kind: TraceVarKind,
    pub comp: usize,
    pub value: BcValue,
}

/// Per-tag constraint lists for one run.
pub struct BcSpec {
    pub hole: Vec<TraceConstraint>,
    pub symmetry_x0: Vec<TraceConstraint>,
    pub symmetry_y0: Vec<TraceConstraint>,
    pub outer: Vec<TraceConstraint>,
}

impl BcSpec {
    fn for_tag(&self, tag: BoundaryTag) -> &[TraceConstraint] {
        match tag {
            BoundaryTag::HoleDirichlet => &self.hole,
            BoundaryTag::SymmetryX0 => &self.symmetry_x0,
            BoundaryTag::SymmetryY0 => &self.symmetry_y0,
            BoundaryTag::Outer => &self.outer,
            BoundaryTag::InteriorSkeleton => &[],
        }
    }
}

/// The scattering boundary conditions of the truncated-domain experiments:
/// exact data on the faces toward the source, symmetry-compatible
/// homogeneous conditions on the coordinate axes, homogeneous Dirichlet
/// deep in the layer.
pub fn scattering_bcs(physics: Formulation, params: &GreensParams) -> BcSpec {
    use TraceVarKind::{Continuous, Flux};
    let cons = |kind, comp, value| TraceConstraint { kind, comp, value };
    let p = *params;
    match physics {
        Formulation::AcousticsA | Formulation::AcousticsB => BcSpec {
            hole: vec![cons(
                Continuous,
                0,
                BcValue::Data(Box::new(move |x, y, _| {
                    acoustic_exact_2d((x, y), &p).expect("off-origin").0
                })),
            )],
            symmetry_x0: vec![cons(Flux, 0, BcValue::Zero)],
            symmetry_y0: vec![cons(Flux, 0, BcValue::Zero)],
            outer: vec![cons(Continuous, 0, BcValue::Zero)],
        },
        Formulation::Maxwell2d => BcSpec {
            // tangential electric trace = t . E_exact on the data faces
            hole: vec![cons(
                Flux,
                0,
                BcValue::Data(Box::new(move |x, y, t| {
                    let (e, _) = maxwell_exact_2d((x, y), &p).expect("off-origin");
                    t.0 * e[0] + t.1 * e[1]
                })),
            )],
            symmetry_x0: vec![cons(Flux, 0, BcValue::Zero)],
            symmetry_y0: vec![cons(Continuous, 0, BcValue::Zero)],
            outer: vec![cons(Flux, 0, BcValue::Zero)],
        },
        Formulation::Elasticity2d => BcSpec {
            hole: vec![
                cons(
                    Continuous,
                    0,
                    BcValue::Data(Box::new(move |x, y, _| {
                        elastic_exact_2d((x, y), &p).expect("off-origin")[0]
                    })),
                ),
                cons(
                    Continuous,
                    1,
                    BcValue::Data(Box::new(move |x, y, _| {
                        elastic_exact_2d((x, y), &p).expect("off-origin")[1]
                    })),
                ),
            ],
            // t_hat_{n_x} = u_hat_y = 0 on both symmetry faces
            symmetry_x0: vec![
                cons(Flux, 0, BcValue::Zero),
                cons(Continuous, 1, BcValue::Zero),
            ],
            symmetry_y0: vec![
                cons(Flux, 0, BcValue::Zero),
                cons(Continuous, 1, BcValue::Zero),
            ],
            outer: vec![
                cons(Continuous, 0, BcValue::Zero),
                cons(Continuous, 1, BcValue::Zero),
            ],
        },
    }
}

/// Variant of the acoustics scattering run with the hole data replaced by
/// zero (every constrained dof homogeneous).
pub fn homogeneous_bcs(physics: Formulation, params: &GreensParams) -> BcSpec {
    let mut spec = scattering_bcs(physics, params);
    for c in spec.hole.iter_mut() {
        c.value = BcValue::Zero;
    }
    spec
}

/// Manufactured-solution run: pressure trace prescribed on every boundary
/// face (acoustics only).
pub fn manufactured_dirichlet(wave: PlaneWave) -> BcSpec {
    let data = move || -> TraceConstraint {
        TraceConstraint {
            kind: TraceVarKind::Continuous,
            comp: 0,
            value: BcValue::Data(Box::new(move |x, y, _| wave.pressure(x, y))),
        }
    };
    BcSpec {
        hole: vec![data()],
        symmetry_x0: vec![data()],
        symmetry_y0: vec![data()],
        outer: vec![data()],
    }
}

/// Quadrature order for boundary projections; generous so the oscillatory
/// Hankel data is integrated well past the trace resolution.
const BC_QUAD: usize = 16;

/// Computes the constrained-trace value table: `None` for free dofs.
pub fn apply_bcs(
    mesh: &StructuredMesh,
    dofs: &GlobalDofs,
    spec: &BcSpec,
) -> Result<Vec<Option<C64>>> {
    let mut values = vec![None; dofs.n_global];
    let rule = gauss_rule_1d(BC_QUAD)?;
    let cdeg = dofs.layout.cont_degree;
    let fdeg = dofs.layout.flux_degree;

    for (eid, edge) in mesh.edges.iter().enumerate() {
        if !edge.is_boundary() {
            continue;
        }
        for constraint in spec.for_tag(edge.tag) {
            match constraint.kind {
                TraceVarKind::Flux => {
                    let coeffs = if constraint.value.is_zero() {
                        vec![c64(0.0, 0.0); fdeg + 1]
                    } else {
                        project_flux_edge(mesh, eid, &rule, fdeg, |x, y, t| {
                            constraint.value.eval(x, y, t)
                        })
                    };
                    for (k, &c) in coeffs.iter().enumerate() {
                        values[dofs.flux_dof(eid, constraint.comp, k)] = Some(c);
                    }
                }
                TraceVarKind::Continuous => {
                    let (v_start, v_end, bubbles) = if constraint.value.is_zero() {
                        (c64(0.0, 0.0), c64(0.0, 0.0), vec![c64(0.0, 0.0); cdeg - 1])
                    } else {
                        project_cont_edge(mesh, eid, &rule, cdeg, |x, y, t| {
                            constraint.value.eval(x, y, t)
                        })
                    };
                    let (a, b) = edge_vertices(mesh, eid);
                    values[dofs.vertex_dof(a, constraint.comp)] = Some(v_start);
                    values[dofs.vertex_dof(b, constraint.comp)] = Some(v_end);
                    for (k, &c) in bubbles.iter().enumerate() {
                        values[dofs.cont_bubble_dof(eid, constraint.comp, k)] = Some(c);
                    }
                }
            }
        }
    }
    Ok(values)
}

/// Vertex ids at the s = -1 and s = +1 ends of an edge.
fn edge_vertices(mesh: &StructuredMesh, eid: usize) -> (usize, usize) {
    let edge = &mesh.edges[eid];
    let (o, sign) = edge.owners[0];
    let conn = &mesh.connectivity[o];
    let local = conn
        .edges
        .iter()
        .position(|&(e, s)| e == eid && s == sign)
        .expect("owner lists the edge");
    (
        conn.vertices[crate::mesh::EDGE_START_CORNER[local]],
        conn.vertices[crate::mesh::EDGE_END_CORNER[local]],
    )
}

/// Per-edge L2 projection onto the degree-`deg` Legendre flux basis
/// (diagonal mass).
pub fn project_flux_edge<F: Fn(f64, f64, (f64, f64)) -> C64>(
    mesh: &StructuredMesh,
    eid: usize,
    rule: &crate::quadrature::GaussRule1d,
    deg: usize,
    g: F,
) -> Vec<C64> {
    let edge = &mesh.edges[eid];
    let t = edge.tangent();
    let mut num = vec![c64(0.0, 0.0); deg + 1];
    for (&s, &w) in rule.points.iter().zip(&rule.weights) {
        let (x, y) = edge.point(s, mesh.h);
        let gv = g(x, y, t);
        let basis = edge_trace_basis(TraceKind::Discontinuous, deg, s);
        for k in 0..=deg {
            num[k] += gv * (w * basis[k]);
        }
    }
    // reference mass of P_k is 2/(2k+1); the physical edge scale cancels
    (0..=deg)
        .map(|k| num[k] * ((2.0 * k as f64 + 1.0) / 2.0))
        .collect()
}

/// Constrained L2 projection onto the continuous trace basis: endpoint
/// values pinned by point evaluation, bubbles minimizing the L2 error.
pub fn project_cont_edge<F: Fn(f64, f64, (f64, f64)) -> C64>(
    mesh: &StructuredMesh,
    eid: usize,
    rule: &crate::quadrature::GaussRule1d,
    deg: usize,
    g: F,
) -> (C64, C64, Vec<C64>) {
    let edge = &mesh.edges[eid];
    let t = edge.tangent();
    let (x0, y0) = edge.point(-1.0, mesh.h);
    let (x1, y1) = edge.point(1.0, mesh.h);
    let v_start = g(x0, y0, t);
    let v_end = g(x1, y1, t);
    let nb = deg - 1;
    if nb == 0 {
        return (v_start, v_end, Vec::new());
    }
    let mut mass = nalgebra::DMatrix::<C64>::zeros(nb, nb);
    let mut rhs = nalgebra::DVector::<C64>::zeros(nb);
    for (&s, &w) in rule.points.iter().zip(&rule.weights) {
        let (x, y) = edge.point(s, mesh.h);
        let basis = edge_trace_basis(TraceKind::Continuous, deg, s);
        let resid = g(x, y, t) - v_start * basis[0] - v_end * basis[1];
        for i in 0..nb {
            rhs[i] += resid * (w * basis[2 + i]);
            for j in 0..nb {
                mass[(i, j)] += c64(w * basis[2 + i] * basis[2 + j], 0.0);
            }
        }
    }
    let sol = mass
        .lu()
        .solve(&rhs)
        .expect("bubble mass matrix is positive definite");
    (v_start, v_end, sol.iter().copied().collect())
}
