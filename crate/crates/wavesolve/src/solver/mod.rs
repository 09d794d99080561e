//! Local trial-to-test inversion, static condensation, global skeleton
//! assembly and solve, field recovery, and the energy-residual indicator.

pub mod bc;
pub mod dofs;
pub mod skyline;

use crate::error::{Result, SolverError};
use crate::formulations::{layout_for, Assembler, ElementSystem, MaterialParams};
use crate::mesh::StructuredMesh;
use crate::pml::{Formulation, StretchProfile};
use crate::spaces::SpaceSpec;
use crate::{c64, C64};
pub use bc::BcSpec;
use dofs::GlobalDofs;
use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use skyline::SkylineMatrix;

/// Element after static condensation: Schur complement over the trace
/// dofs, condensed right-hand side, and the affine field-recovery map
/// fields = recovery_rhs - recovery_mat * traces.
#[derive(Debug, Clone)]
pub struct CondensedElement {
    pub schur: DMatrix<C64>,
    pub rhs: DVector<C64>,
    pub recovery_mat: DMatrix<C64>,
    pub recovery_rhs: DVector<C64>,
}

/// Normal equations S = B^H G^{-1} B and g = B^H G^{-1} f for one element.
pub fn element_normal_equations(sys: &ElementSystem) -> Result<(DMatrix<C64>, DVector<C64>)> {
    let chol = Cholesky::new(sys.g.clone()).ok_or_else(|| SolverError::IllConditioned {
        element: usize::MAX,
        detail: "Gram matrix not positive definite".into(),
    })?;
    let ginv_b = chol.solve(&sys.b);
    let ginv_f = chol.solve(&sys.load);
    let mut s = sys.b.adjoint() * ginv_b;
    let g = sys.b.adjoint() * ginv_f;
    // symmetrize away the last-ulp asymmetry before factoring blocks
    let st = s.adjoint();
    s = (s + st) * c64(0.5, 0.0);
    Ok((s, g))
}

/// Condenses the field block out of the element normal equations.
pub fn condense_element(sys: &ElementSystem) -> Result<CondensedElement> {
    let (s, g) = element_normal_equations(sys)?;
    let nf = sys.layout.field_dofs();
    let ntr = sys.layout.trace_dofs();
    let s_ff = s.view((0, 0), (nf, nf)).into_owned();
    let s_ft = s.view((0, nf), (nf, ntr)).into_owned();
    let s_tf = s.view((nf, 0), (ntr, nf)).into_owned();
    let s_tt = s.view((nf, nf), (ntr, ntr)).into_owned();
    let g_f = g.rows(0, nf).into_owned();
    let g_t = g.rows(nf, ntr).into_owned();

    let chol_ff = Cholesky::new(s_ff).ok_or_else(|| SolverError::IllConditioned {
        element: usize::MAX,
        detail: "field block of the normal equations not positive definite".into(),
    })?;
    let recovery_mat = chol_ff.solve(&s_ft);
    let recovery_rhs = chol_ff.solve(&g_f);
    let schur = &s_tt - &s_tf * &recovery_mat;
    let rhs = g_t - s_tf * &recovery_rhs;
    Ok(CondensedElement {
        schur,
        rhs,
        recovery_mat,
        recovery_rhs,
    })
}

/// Solved state of one run.
pub struct Solution {
    pub formulation: Formulation,
    /// Per-element field coefficients (layout order).
    pub fields: Vec<DVector<C64>>,
    /// All global trace dofs (constrained slots hold their data values).
    pub trace: DVector<C64>,
    pub constrained: Vec<bool>,
    pub n_free: usize,
    pub algebraic_residual: f64,
    pub assembly_seconds: f64,
    pub solve_seconds: f64,
}

pub struct DpgSolver<'a> {
    pub formulation: Formulation,
    pub assembler: Assembler<'a>,
    pub dofs: GlobalDofs,
}

impl<'a> DpgSolver<'a> {
    pub fn new(
        mesh: &'a StructuredMesh,
        formulation: Formulation,
        spec: SpaceSpec,
        pml: &'a StretchProfile,
        params: &'a MaterialParams,
    ) -> Result<Self> {
        let assembler = Assembler::new(mesh, spec, pml, params)?;
        let dofs = GlobalDofs::build(mesh, layout_for(formulation, &spec));
        Ok(DpgSolver {
            formulation,
            assembler,
            dofs,
        })
    }

    pub fn mesh(&self) -> &StructuredMesh {
        self.assembler.mesh
    }

    /// Full pipeline. `element_order` permutes the assembly order (used by
    /// the determinism tests); `None` runs 0..n.
    pub fn solve(&self, spec: &BcSpec, element_order: Option<&[usize]>) -> Result<Solution> {
        let mesh = self.mesh();
        let n_elems = mesh.elements.len();
        let default_order: Vec<usize> = (0..n_elems).collect();
        let order = element_order.unwrap_or(&default_order);

        let t0 = std::time::Instant::now();
        let mut condensed: Vec<Option<CondensedElement>> = (0..n_elems).map(|_| None).collect();
        for &e in order {
            let sys = self.assembler.assemble(self.formulation, e)?;
            let c = condense_element(&sys).map_err(|err| match err {
                SolverError::IllConditioned { detail, .. } => {
                    SolverError::IllConditioned { element: e, detail }
                }
                other => other,
            })?;
            condensed[e] = Some(c);
        }
        let condensed: Vec<CondensedElement> =
            condensed.into_iter().map(|c| c.expect("all assembled")).collect();
        let assembly_seconds = t0.elapsed().as_secs_f64();

        let t1 = std::time::Instant::now();
        let values = bc::apply_bcs(mesh, &self.dofs, spec)?;
        let constrained: Vec<bool> = values.iter().map(|v| v.is_some()).collect();

        // Free dofs keep their sweep order.
        let mut free_index = vec![usize::MAX; self.dofs.n_global];
        let mut n_free = 0;
        for g in 0..self.dofs.n_global {
            if !constrained[g] {
                free_index[g] = n_free;
                n_free += 1;
            }
        }

        // Skyline profile from element couplings.
        let mut first_row: Vec<usize> = (0..n_free).collect();
        for map in &self.dofs.element_maps {
            let frees: Vec<usize> = map
                .iter()
                .filter(|&&g| !constrained[g])
                .map(|&g| free_index[g])
                .collect();
            if let Some(&lo) = frees.iter().min() {
                for &f in &frees {
                    first_row[f] = first_row[f].min(lo);
                }
            }
        }
        let mut k = SkylineMatrix::new(first_row);
        let mut rhs = DVector::from_element(n_free, c64(0.0, 0.0));
        for &e in order {
            let map = &self.dofs.element_maps[e];
            let ce = &condensed[e];
            for (li, &gi) in map.iter().enumerate() {
                if constrained[gi] {
                    continue;
                }
                let fi = free_index[gi];
                rhs[fi] += ce.rhs[li];
                for (lj, &gj) in map.iter().enumerate() {
                    if constrained[gj] {
                        rhs[fi] -= ce.schur[(li, lj)] * values[gj].unwrap();
                    } else {
                        let fj = free_index[gj];
                        if fi <= fj {
                            k.add(fi, fj, ce.schur[(li, lj)]);
                        }
                    }
                }
            }
        }

        let k_unfactored = k.clone();
        k.factor().map_err(|err| match err {
            SolverError::Singular { pivot, .. } => {
                let gid = (0..self.dofs.n_global)
                    .find(|&g| free_index[g] == pivot)
                    .unwrap_or(0);
                SolverError::Singular {
                    pivot,
                    dof: self.dofs.describe(gid),
                }
            }
            other => other,
        })?;
        let x = if n_free > 0 {
            k.solve(&rhs)
        } else {
            DVector::from_element(0, c64(0.0, 0.0))
        };

        let resid_norm = if n_free > 0 {
            (k_unfactored.matvec(&x) - &rhs).norm()
        } else {
            0.0
        };
        let rhs_norm = rhs.norm();
        let algebraic_residual = if rhs_norm > 0.0 {
            resid_norm / rhs_norm
        } else {
            resid_norm
        };

        // Scatter into the full trace vector and recover fields.
        let mut trace = DVector::from_element(self.dofs.n_global, c64(0.0, 0.0));
        for g in 0..self.dofs.n_global {
            trace[g] = match values[g] {
                Some(v) => v,
                None => x[free_index[g]],
            };
        }
        let fields = (0..n_elems)
            .map(|e| {
                let map = &self.dofs.element_maps[e];
                let t_local = DVector::from_fn(map.len(), |i, _| trace[map[i]]);
                &condensed[e].recovery_rhs - &condensed[e].recovery_mat * t_local
            })
            .collect();
        let solve_seconds = t1.elapsed().as_secs_f64();

        Ok(Solution {
            formulation: self.formulation,
            fields,
            trace,
            constrained,
            n_free,
            algebraic_residual,
            assembly_seconds,
            solve_seconds,
        })
    }

    /// Element-wise energy residual r_K = (Bu - f)^H G^{-1} (Bu - f) and its
    /// sum; element systems are reassembled on demand.
    pub fn residual_indicator(&self, sol: &Solution) -> Result<(Vec<f64>, f64)> {
        let mut per_element = Vec::with_capacity(self.mesh().elements.len());
        let mut total = 0.0;
        for e in 0..self.mesh().elements.len() {
            let sys = self.assembler.assemble(self.formulation, e)?;
            let map = &self.dofs.element_maps[e];
            let nf = sys.layout.field_dofs();
            let mut u = DVector::from_element(sys.n_trial(), c64(0.0, 0.0));
            u.rows_mut(0, nf).copy_from(&sol.fields[e]);
            for (li, &g) in map.iter().enumerate() {
                u[nf + li] = sol.trace[g];
            }
            let r = &sys.b * u - &sys.load;
            let rk = residual_in_g_inverse(&sys.g, &r)?;
            per_element.push(rk);
            total += rk;
        }
        Ok((per_element, total))
    }
}

/// r^H G^{-1} r (real and nonnegative for Hermitian positive-definite G).
pub fn residual_in_g_inverse(g: &DMatrix<C64>, r: &DVector<C64>) -> Result<f64> {
    let chol = Cholesky::<C64, Dyn>::new(g.clone()).ok_or_else(|| SolverError::IllConditioned {
        element: usize::MAX,
        detail: "Gram matrix not positive definite".into(),
    })?;
    let z = chol.solve(r);
    Ok(r.dotc(&z).re.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::GreensParams;
    use crate::mesh::build_lshape_mesh;
    use nalgebra::DMatrix;

    fn material(omega: f64) -> MaterialParams {
        MaterialParams {
            omega,
            eps0: 1.0,
            mu0: 1.0,
            sigma: 0.0,
            lambda: 2.0,
            mu_lame: 1.0,
            rho0: 1.0,
        }
    }

    #[test]
    fn schur_is_positive_semidefinite_for_random_systems() {
        // random full-rank B and Hermitian positive-definite G
        let mut state = 42u64;
        let mut r = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let n_test = 20;
        let layout = crate::spaces::ElementLayout {
            field_degree: 1,
            cont_degree: 1,
            flux_degree: 1,
            n_field_comps: 2,
            n_cont_comps: 1,
            n_flux_comps: 1,
        };
        let n_trial = layout.n_trial();
        let b = DMatrix::from_fn(n_test, n_trial, |_, _| c64(r(), r()));
        let a = DMatrix::from_fn(n_test, n_test, |_, _| c64(r(), r()));
        let mut g = &a * a.adjoint();
        for i in 0..n_test {
            g[(i, i)] += c64(2.0, 0.0);
        }
        let sys = ElementSystem {
            b,
            g,
            load: DVector::from_element(n_test, c64(0.0, 0.0)),
            layout,
            n_test,
        };
        let (s, _) = element_normal_equations(&sys).unwrap();
        let eig = nalgebra::SymmetricEigen::new(s.clone());
        let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        let scale = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
        assert!(min >= -1e-12 * scale, "min eig {min:e}");
        // zero load, zero traces -> zero fields
        let ce = condense_element(&sys).unwrap();
        let zero_t = DVector::from_element(layout.trace_dofs(), c64(0.0, 0.0));
        let f = &ce.recovery_rhs - &ce.recovery_mat * zero_t;
        assert!(f.norm() < 1e-13);
    }

    #[test]
    fn single_element_roundtrip_matches_dense_least_squares() {
        // one-element mesh with every trace constrained to projected exact
        // data; recovered fields must match the unconstrained least-squares
        // solution computed densely.
        let mesh = build_lshape_mesh(1, 0, 1.0, 1.0, 0.0).unwrap();
        let omega = 2.0;
        let params = material(omega);
        let profile = StretchProfile::identity(1.0, 1.0, omega);
        let spec = SpaceSpec::new(3, 1);
        let solver = DpgSolver::new(
            &mesh,
            Formulation::AcousticsA,
            spec,
            &profile,
            &params,
        )
        .unwrap();
        let wave = crate::exact::PlaneWave {
            omega,
            angle: 0.3,
        };
        // constrain the velocity flux as well so no trace dof stays free;
        // the global normal is the tangent with components swapped
        let all = || -> Vec<bc::TraceConstraint> {
            vec![
                bc::TraceConstraint {
                    kind: bc::TraceVarKind::Continuous,
                    comp: 0,
                    value: bc::BcValue::Data(Box::new(move |x, y, _| wave.pressure(x, y))),
                },
                bc::TraceConstraint {
                    kind: bc::TraceVarKind::Flux,
                    comp: 0,
                    value: bc::BcValue::Data(Box::new(move |x, y, t| {
                        let u = wave.velocity(x, y);
                        u[0] * t.1 + u[1] * t.0
                    })),
                },
            ]
        };
        let bcs = BcSpec {
            hole: all(),
            symmetry_x0: all(),
            symmetry_y0: all(),
            outer: all(),
        };
        let sol = solver.solve(&bcs, None).unwrap();
        assert_eq!(sol.n_free, 0);

        // dense reference: min over fields of || B [u_f; t] ||_{G^{-1}}
        let sys = solver.assembler.assemble(Formulation::AcousticsA, 0).unwrap();
        let (s, g) = element_normal_equations(&sys).unwrap();
        let nf = sys.layout.field_dofs();
        let ntr = sys.layout.trace_dofs();
        let map = &solver.dofs.element_maps[0];
        let t = DVector::from_fn(ntr, |i, _| sol.trace[map[i]]);
        let s_ff = s.view((0, 0), (nf, nf)).into_owned();
        let s_ft = s.view((0, nf), (nf, ntr)).into_owned();
        let rhs = g.rows(0, nf) - s_ft * t;
        let u_ref = s_ff.cholesky().unwrap().solve(&rhs);
        assert!((&sol.fields[0] - u_ref).norm() < 1e-10);
    }

    #[test]
    fn homogeneous_problem_has_zero_solution() {
        let mesh = build_lshape_mesh(4, 2, 2.0, 3.0, 1.0).unwrap();
        let omega = 6.0 * std::f64::consts::PI;
        let params = material(omega);
        let profile = StretchProfile::new(2.0, 3.0, 5.0, 2, omega).unwrap();
        let spec = SpaceSpec::new(2, 1);
        let solver =
            DpgSolver::new(&mesh, Formulation::AcousticsA, spec, &profile, &params).unwrap();
        let gp = GreensParams::with_omega(omega);
        let bcs = bc::homogeneous_bcs(Formulation::AcousticsA, &gp);
        let sol = solver.solve(&bcs, None).unwrap();
        let field_norm: f64 = sol.fields.iter().map(|f| f.norm_squared()).sum::<f64>().sqrt();
        let trace_norm = sol.trace.norm();
        assert!(field_norm < 1e-10, "fields {field_norm:e}");
        assert!(trace_norm < 1e-10, "traces {trace_norm:e}");
        // residual indicator of the zero solution with zero data is zero
        let (per, total) = solver.residual_indicator(&sol).unwrap();
        assert!(total < 1e-18);
        assert!(per.iter().all(|&r| r >= 0.0));
    }

    #[test]
    fn assembly_order_does_not_change_solution() {
        let mesh = build_lshape_mesh(2, 1, 2.0, 3.0, 1.0).unwrap();
        let omega = 6.0 * std::f64::consts::PI;
        let params = material(omega);
        let profile = StretchProfile::new(2.0, 3.0, 5.0, 2, omega).unwrap();
        let spec = SpaceSpec::new(2, 1);
        let solver =
            DpgSolver::new(&mesh, Formulation::AcousticsA, spec, &profile, &params).unwrap();
        let gp = GreensParams::with_omega(omega);
        let bcs = bc::scattering_bcs(Formulation::AcousticsA, &gp);
        let sol_a = solver.solve(&bcs, None).unwrap();
        let reversed: Vec<usize> = (0..mesh.elements.len()).rev().collect();
        let sol_b = solver.solve(&bcs, Some(&reversed)).unwrap();
        let scale = sol_a.trace.norm();
        assert!((&sol_a.trace - &sol_b.trace).norm() / scale < 1e-9);
        for e in 0..mesh.elements.len() {
            assert!((&sol_a.fields[e] - &sol_b.fields[e]).norm() / scale < 1e-9);
        }
        assert!(sol_a.algebraic_residual < 1e-10);
    }
}
