//! High-level experiment drivers: single scattering runs, the two-variant
//! acoustic comparison, manufactured-solution convergence studies, and
//! field export for plotting.

use crate::config::RunConfig;
use crate::error::{Result, SolverError};
use crate::exact::PlaneWave;
use crate::mesh::{MeshCounts, Region};
use crate::metrics::{self, ErrorRegion, ErrorReport, ExactSolution};
use crate::pml::Formulation;
use crate::solver::bc;
use crate::solver::{DpgSolver, Solution};
use serde::Serialize;
use std::fmt::Write as _;

#[derive(Debug, Clone, Serialize)]
pub struct DofReport {
    pub elements: usize,
    pub field_dofs_per_element: usize,
    pub trace_dofs_total: usize,
    pub trace_dofs_free: usize,
    pub trace_dofs_constrained: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolverReport {
    pub algebraic_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Timings {
    pub assembly_s: f64,
    pub solve_s: f64,
    pub total_s: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub config: RunConfig,
    pub mesh: MeshCounts,
    pub dofs: DofReport,
    pub errors: ErrorReport,
    pub residual_total: f64,
    pub solver: SolverReport,
    pub timings: Timings,
}

/// Full scattering run with the truncated-domain boundary conditions.
pub fn run_experiment(config: &RunConfig) -> Result<Report> {
    config.validate()?;
    let t0 = std::time::Instant::now();
    let mesh = config.build_mesh()?;
    let profile = config.stretch_profile()?;
    let params = config.material_params();
    let solver = DpgSolver::new(&mesh, config.physics, config.space_spec(), &profile, &params)?;
    let bcs = bc::scattering_bcs(config.physics, &config.greens_params());
    let sol = solver.solve(&bcs, None)?;
    let exact = ExactSolution::for_physics(config.physics, &config.greens_params());
    let errors = metrics::relative_error(
        &mesh,
        &solver.assembler.spec,
        &sol,
        &exact,
        ErrorRegion::Interior,
    )?;
    let (_, residual_total) = solver.residual_indicator(&sol)?;
    Ok(report_from(config, &solver, &sol, errors, residual_total, t0))
}

fn report_from(
    config: &RunConfig,
    solver: &DpgSolver,
    sol: &Solution,
    errors: ErrorReport,
    residual_total: f64,
    t0: std::time::Instant,
) -> Report {
    Report {
        config: config.clone(),
        mesh: solver.mesh().counts(),
        dofs: DofReport {
            elements: solver.mesh().elements.len(),
            field_dofs_per_element: solver.dofs.layout.field_dofs(),
            trace_dofs_total: solver.dofs.n_global,
            trace_dofs_free: sol.n_free,
            trace_dofs_constrained: solver.dofs.n_global - sol.n_free,
        },
        errors,
        residual_total,
        solver: SolverReport {
            algebraic_residual: sol.algebraic_residual,
        },
        timings: Timings {
            assembly_s: sol.assembly_seconds,
            solve_s: sol.solve_seconds,
            total_s: t0.elapsed().as_secs_f64(),
        },
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonReport {
    pub config: RunConfig,
    pub error_a: ErrorReport,
    pub error_b: ErrorReport,
    /// Combined interior field discrepancy ||u_A - u_B|| / ||u_exact||.
    pub field_discrepancy: f64,
    /// Relative trace discrepancy over PML-region skeleton edges.
    pub trace_discrepancy_pml: f64,
}

/// Runs both acoustic variants on the identical mesh and quantifies how the
/// fields agree in the interior while the PML-region interface unknowns do
/// not (the two formulations are genuinely different there).
pub fn compare_formulations(config: &RunConfig) -> Result<ComparisonReport> {
    match config.physics {
        Formulation::AcousticsA | Formulation::AcousticsB => {}
        other => {
            return Err(SolverError::Config(format!(
                "compare_formulations applies to acoustics, not {other}"
            )))
        }
    }
    config.validate()?;
    let mesh = config.build_mesh()?;
    let profile = config.stretch_profile()?;
    let params = config.material_params();
    let spec = config.space_spec();
    let gp = config.greens_params();
    let exact = ExactSolution::Acoustics(gp);

    let solver_a = DpgSolver::new(&mesh, Formulation::AcousticsA, spec, &profile, &params)?;
    let sol_a = solver_a.solve(&bc::scattering_bcs(Formulation::AcousticsA, &gp), None)?;
    let solver_b = DpgSolver::new(&mesh, Formulation::AcousticsB, spec, &profile, &params)?;
    let sol_b = solver_b.solve(&bc::scattering_bcs(Formulation::AcousticsB, &gp), None)?;

    let error_a = metrics::relative_error(&mesh, &spec, &sol_a, &exact, ErrorRegion::Interior)?;
    let error_b = metrics::relative_error(&mesh, &spec, &sol_b, &exact, ErrorRegion::Interior)?;
    let field_discrepancy =
        metrics::field_discrepancy(&mesh, &spec, &sol_a, &sol_b, &exact, ErrorRegion::Interior)?;
    let trace_discrepancy_pml = if mesh.counts().pml_elements > 0 {
        metrics::trace_discrepancy_pml(&mesh, &solver_a.dofs, &sol_a, &sol_b)?
    } else {
        0.0
    };
    Ok(ComparisonReport {
        config: config.clone(),
        error_a,
        error_b,
        field_discrepancy,
        trace_discrepancy_pml,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub omega: f64,
    pub angle: f64,
    pub meshes: Vec<usize>,
    pub orders: Vec<usize>,
    /// Test enrichment used for each order.
    pub enrichments: Vec<usize>,
    /// Percent interior errors, indexed [order][mesh].
    pub errors: Vec<Vec<f64>>,
    /// Observed rates log2(e_h / e_{h/2}), indexed [order][refinement].
    pub rates: Vec<Vec<f64>>,
}

pub const CONVERGENCE_ANGLE: f64 = std::f64::consts::PI / 7.0;

/// Manufactured plane-wave convergence study on the square [0, l]^2 with no
/// PML: meshes 4^2, 8^2, 16^2 at p = 1, 2, 3.
pub fn convergence_study(config: &RunConfig) -> Result<ConvergenceReport> {
    if config.mesh.hole != 0.0 {
        return Err(SolverError::Config(
            "convergence study requires hole = 0 (full square)".into(),
        ));
    }
    if config.pml.c != 0.0 {
        return Err(SolverError::Config(
            "convergence study requires C = 0 (no PML)".into(),
        ));
    }
    let meshes = vec![4usize, 8, 16];
    let orders = vec![1usize, 2, 3];
    let wave = PlaneWave {
        omega: config.omega,
        angle: CONVERGENCE_ANGLE,
    };
    let mut errors = Vec::new();
    let mut rates = Vec::new();
    let mut enrichments = Vec::new();
    for &p in &orders {
        enrichments.push(config.dp);
        let mut row = Vec::new();
        for &n in &meshes {
            let mut cfg = config.clone();
            cfg.physics = Formulation::AcousticsA;
            cfg.p = p;
            cfg.mesh.n_int = n;
            cfg.mesh.n_pml = 0;
            cfg.mesh.big_l = cfg.mesh.l;
            cfg.validate()?;
            let mesh = cfg.build_mesh()?;
            let profile = cfg.stretch_profile()?;
            let params = cfg.material_params();
            let spec = cfg.space_spec();
            let solver = DpgSolver::new(&mesh, cfg.physics, spec, &profile, &params)?;
            let sol = solver.solve(&bc::manufactured_dirichlet(wave), None)?;
            let exact = ExactSolution::AcousticPlaneWave(wave);
            let err = metrics::relative_error(&mesh, &spec, &sol, &exact, ErrorRegion::Interior)?;
            row.push(err.combined);
        }
        let rate: Vec<f64> = row.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
        errors.push(row);
        rates.push(rate);
    }
    Ok(ConvergenceReport {
        omega: config.omega,
        angle: CONVERGENCE_ANGLE,
        meshes,
        orders,
        enrichments,
        errors,
        rates,
    })
}

/// Runs the configured experiment and samples solved and exact fields on a
/// uniform grid of cell centers (hole points skipped). CSV columns:
/// x,y,variable,re_h,im_h,re_exact,im_exact,region.
pub fn export_fields(config: &RunConfig, grid: usize) -> Result<String> {
    config.validate()?;
    let mesh = config.build_mesh()?;
    let profile = config.stretch_profile()?;
    let params = config.material_params();
    let solver = DpgSolver::new(&mesh, config.physics, config.space_spec(), &profile, &params)?;
    let bcs = bc::scattering_bcs(config.physics, &config.greens_params());
    let sol = solver.solve(&bcs, None)?;
    export_solution_csv(config, &solver, &sol, grid)
}

pub(crate) fn export_solution_csv(
    config: &RunConfig,
    solver: &DpgSolver,
    sol: &Solution,
    grid: usize,
) -> Result<String> {
    let mesh = solver.mesh();
    let exact = ExactSolution::for_physics(config.physics, &config.greens_params());
    let names = exact.component_names();
    let mut out = String::from("x,y,variable,re_h,im_h,re_exact,im_exact,region\n");
    let step = mesh.big_l / grid as f64;
    for iy in 0..grid {
        for ix in 0..grid {
            let x = (ix as f64 + 0.5) * step;
            let y = (iy as f64 + 0.5) * step;
            if x.max(y) <= mesh.hole {
                continue;
            }
            let e = mesh
                .locate(x, y)
                .ok_or_else(|| SolverError::Domain(format!("no element at ({x}, {y})")))?;
            let region = match mesh.elements[e].region {
                Region::Interior => "interior",
                Region::Pml => "pml",
            };
            let ref_pt = mesh.to_reference(e, x, y);
            let ex = exact.eval(x, y)?;
            for (c, name) in names.iter().enumerate() {
                let uh = metrics::eval_field(&solver.assembler.spec, &sol.fields[e], c, ref_pt);
                writeln!(
                    out,
                    "{x},{y},{name},{},{},{},{},{region}",
                    uh.re, uh.im, ex[c].re, ex[c].im
                )
                .expect("string write");
            }
        }
    }
    Ok(out)
}

/// Report plus sampled fields in one pass (used by the CLI when the config
/// asks for both outputs).
pub fn run_with_export(config: &RunConfig, grid: usize) -> Result<(Report, String)> {
    config.validate()?;
    let t0 = std::time::Instant::now();
    let mesh = config.build_mesh()?;
    let profile = config.stretch_profile()?;
    let params = config.material_params();
    let solver = DpgSolver::new(&mesh, config.physics, config.space_spec(), &profile, &params)?;
    let bcs = bc::scattering_bcs(config.physics, &config.greens_params());
    let sol = solver.solve(&bcs, None)?;
    let exact = ExactSolution::for_physics(config.physics, &config.greens_params());
    let errors = metrics::relative_error(
        &mesh,
        &solver.assembler.spec,
        &sol,
        &exact,
        ErrorRegion::Interior,
    )?;
    let (_, residual_total) = solver.residual_indicator(&sol)?;
    let csv = export_solution_csv(config, &solver, &sol, grid)?;
    Ok((
        report_from(config, &solver, &sol, errors, residual_total, t0),
        csv,
    ))
}
