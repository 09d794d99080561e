//! Consistency oracle: the quadrature-projected exact solution, injected
//! into an interior element's trial slots, must leave a residual (measured
//! in the G^{-1} norm) that decreases at the field best-approximation rate
//! under order refinement.

use nalgebra::DVector;
use wavesolve::basis::scalar_basis;
use wavesolve::c64;
use wavesolve::config::RunConfig;
use wavesolve::exact::{acoustic_exact_2d, elastic_exact_2d, maxwell_exact_2d, GreensParams};
use wavesolve::formulations::{layout_for, Assembler};
use wavesolve::mesh::{StructuredMesh, EDGE_END_CORNER, EDGE_START_CORNER};
use wavesolve::pml::Formulation;
use wavesolve::quadrature::{gauss_rule, gauss_rule_1d};
use wavesolve::solver::bc::{project_cont_edge, project_flux_edge};
use wavesolve::solver::residual_in_g_inverse;
use wavesolve::spaces::SpaceSpec;
use wavesolve::C64;

fn exact_fields(ph: Formulation, gp: &GreensParams, x: f64, y: f64) -> Vec<C64> {
    match ph {
        Formulation::AcousticsA | Formulation::AcousticsB => {
            let (p, u) = acoustic_exact_2d((x, y), gp).unwrap();
            vec![p, u[0], u[1]]
        }
        Formulation::Maxwell2d => {
            let (e, h) = maxwell_exact_2d((x, y), gp).unwrap();
            vec![e[0], e[1], h]
        }
        Formulation::Elasticity2d => {
            // stress from the displacement by central differences
            let u = elastic_exact_2d((x, y), gp).unwrap();
            let d = 1e-6;
            let at = |x: f64, y: f64| elastic_exact_2d((x, y), gp).unwrap();
            let dux = [
                (at(x + d, y)[0] - at(x - d, y)[0]) / (2.0 * d),
                (at(x + d, y)[1] - at(x - d, y)[1]) / (2.0 * d),
            ];
            let duy = [
                (at(x, y + d)[0] - at(x, y - d)[0]) / (2.0 * d),
                (at(x, y + d)[1] - at(x, y - d)[1]) / (2.0 * d),
            ];
            let (la, mu) = (gp.lambda, gp.mu_lame);
            let tr = dux[0] + duy[1];
            vec![
                u[0],
                u[1],
                la * tr + 2.0 * mu * dux[0],
                la * tr + 2.0 * mu * duy[1],
                mu * (duy[0] + dux[1]),
            ]
        }
    }
}

/// Exact trace data for (continuous?, component) at a point; `t` is the
/// edge parametrization tangent and the global normal is its swap.
fn trace_data(
    ph: Formulation,
    gp: &GreensParams,
    cont: bool,
    comp: usize,
    x: f64,
    y: f64,
    t: (f64, f64),
) -> C64 {
    let n = (t.1, t.0);
    match ph {
        Formulation::AcousticsA | Formulation::AcousticsB => {
            let (p, u) = acoustic_exact_2d((x, y), gp).unwrap();
            if cont {
                p
            } else {
                u[0] * n.0 + u[1] * n.1
            }
        }
        Formulation::Maxwell2d => {
            let (e, h) = maxwell_exact_2d((x, y), gp).unwrap();
            if cont {
                h
            } else {
                e[0] * t.0 + e[1] * t.1
            }
        }
        Formulation::Elasticity2d => {
            let f = exact_fields(ph, gp, x, y);
            if cont {
                f[comp]
            } else {
                let (s11, s22, s12) = (f[2], f[3], f[4]);
                if comp == 0 {
                    s11 * n.0 + s12 * n.1
                } else {
                    s12 * n.0 + s22 * n.1
                }
            }
        }
    }
}

/// Projects the exact solution into the full trial vector of one element.
fn inject(
    mesh: &StructuredMesh,
    asm: &Assembler,
    ph: Formulation,
    gp: &GreensParams,
    elem: usize,
) -> DVector<C64> {
    let spec = &asm.spec;
    let layout = layout_for(ph, spec);
    let nf = layout.field_dofs();
    let mut u = DVector::from_element(layout.n_trial(), c64(0.0, 0.0));

    let rule = gauss_rule(spec.field_degree + 6).unwrap();
    let nfc = spec.field_dofs_per_comp();
    let mut mass = vec![0.0; nfc];
    let mut tables = Vec::new();
    for (&pt, &w) in rule.points.iter().zip(&rule.weights) {
        let (v, _) = scalar_basis(spec.field_degree, pt);
        for i in 0..nfc {
            mass[i] += w * v[i] * v[i];
        }
        tables.push(v);
    }
    for comp in 0..layout.n_field_comps {
        let mut coeff = vec![c64(0.0, 0.0); nfc];
        for (q, (&pt, &w)) in rule.points.iter().zip(&rule.weights).enumerate() {
            let (x, y) = mesh.to_physical(elem, pt.0, pt.1);
            let val = exact_fields(ph, gp, x, y)[comp];
            for i in 0..nfc {
                coeff[i] += val * (w * tables[q][i]);
            }
        }
        for i in 0..nfc {
            u[layout.field_offset(comp) + i] = coeff[i] / mass[i];
        }
    }

    let erule = gauss_rule_1d(16).unwrap();
    let conn = &mesh.connectivity[elem];
    for comp in 0..layout.n_cont_comps {
        for (le, &(eid, _)) in conn.edges.iter().enumerate() {
            let (v0, v1, bub) =
                project_cont_edge(mesh, eid, &erule, layout.cont_degree, |x, y, t| {
                    trace_data(ph, gp, true, comp, x, y, t)
                });
            u[nf + layout.cont_vertex_index(comp, EDGE_START_CORNER[le])] = v0;
            u[nf + layout.cont_vertex_index(comp, EDGE_END_CORNER[le])] = v1;
            for (k, &c) in bub.iter().enumerate() {
                u[nf + layout.cont_bubble_index(comp, le, k)] = c;
            }
        }
    }
    for comp in 0..layout.n_flux_comps {
        for (le, &(eid, _)) in conn.edges.iter().enumerate() {
            let c = project_flux_edge(mesh, eid, &erule, layout.flux_degree, |x, y, t| {
                trace_data(ph, gp, false, comp, x, y, t)
            });
            for (k, &v) in c.iter().enumerate() {
                u[nf + layout.flux_index(comp, le, k)] = v;
            }
        }
    }
    u
}

fn injection_residuals(ph: Formulation) -> Vec<f64> {
    let cfg = RunConfig::default();
    let mesh = cfg.build_mesh().unwrap();
    let profile = cfg.stretch_profile().unwrap();
    let params = cfg.material_params();
    let gp = cfg.greens_params();
    let elem = mesh.locate(1.6, 1.6).unwrap();
    let mut out = Vec::new();
    for p in 1..=4usize {
        let spec = SpaceSpec::new(p, 1);
        let asm = Assembler::new(&mesh, spec, &profile, &params).unwrap();
        let sys = asm.assemble(ph, elem).unwrap();
        let u = inject(&mesh, &asm, ph, &gp, elem);
        let r = &sys.b * &u - &sys.load;
        out.push(residual_in_g_inverse(&sys.g, &r).unwrap().sqrt());
    }
    out
}

#[test]
fn injected_exact_solution_residual_decreases_with_order() {
    for ph in [
        Formulation::AcousticsA,
        Formulation::AcousticsB,
        Formulation::Maxwell2d,
        Formulation::Elasticity2d,
    ] {
        let r = injection_residuals(ph);
        for k in 1..r.len() {
            assert!(
                r[k] < r[k - 1],
                "{ph}: residuals not monotone: {r:?}"
            );
        }
        // decay over p = 1..4 should be strong, not incidental
        assert!(
            r[3] < 0.05 * r[0],
            "{ph}: residual barely decreases: {r:?}"
        );
    }
}
