//! Ultraweak 2D elastodynamic assembly (plane strain, symmetric stress in
//! Voigt form).
//!
//!   (J^{-1} S:(J sigma), conj(J) tau) + (u, div tau) - <u_hat, tau.n> = 0,
//!   (sigma, grad v) - (det(J) rho w^2 u, v) - <t_hat_n, v> = 0,
//! with symmetric test tau realized as three scalar components
//! (tau11, tau22, tau12) and vector test v. The sesquilinear pairing
//! against conj(J) tau leaves analytic row weights j_i on the test side, so
//! the stress-stress block reduces to a pointwise 3x3 Voigt matrix. The
//! adjoint graph norm is
//!   ||grad v - conj(J)^{-1} S_J : tau||^2 + ||div tau - conj(J) rho w^2 v||^2
//!   + ||tau||^2 + ||v||^2,
//! with [S_J]_ijkl = conj(j_i j_k) S_ijkl.

use super::*;
use crate::pml::{coefficients, CoefficientBundle};

pub(super) fn assemble(asm: &Assembler, element: usize) -> Result<ElementSystem> {
    let spec = &asm.spec;
    let layout = layout_for(Formulation::Elasticity2d, spec);
    let nf = spec.field_dofs_per_comp();
    let nt = spec.test_dofs_per_comp();
    let n_test = 5 * nt;
    let n_trial = layout.n_trial();
    let (row_t11, row_t22, row_t12, row_v1, row_v2) = (0, nt, 2 * nt, 3 * nt, 4 * nt);
    let (col_u1, col_u2, col_s11, col_s22, col_s12) = (0, nf, 2 * nf, 3 * nf, 4 * nf);

    let mut b = DMatrix::<C64>::zeros(n_test, n_trial);
    let mut g = DMatrix::<C64>::zeros(n_test, n_test);
    let load = DVector::<C64>::zeros(n_test);

    let p = asm.params;
    let (mu, la) = (p.mu_lame, p.lambda);
    let inv2mu = 1.0 / (2.0 * mu);
    let inv4mu = 1.0 / (4.0 * mu);
    let cc = la / (4.0 * mu * (la + mu));
    let rho_w2 = p.rho0 * p.omega * p.omega;

    let (pts, wts, dscale) = asm.element_quad(element);
    let mut t_buf = vec![c64(0.0, 0.0); n_test];
    let sqrt2 = std::f64::consts::SQRT_2;

    for (q_idx, (&(x, y), &w)) in pts.iter().zip(&wts).enumerate() {
        let pd = asm.pml.jacobian_at((x, y))?;
        let (j, det_j) = match coefficients(Formulation::Elasticity2d, &pd)? {
            CoefficientBundle::Elasticity2d { j, det_j } => (j, det_j),
            _ => unreachable!(),
        };
        let [j1, j2] = j;
        let trial = &asm.tables.trial_vals[q_idx];
        let tv = &asm.tables.test_vals[q_idx];
        let test_dx: Vec<f64> = asm.tables.test_dxi[q_idx].iter().map(|d| d * dscale).collect();
        let test_dy: Vec<f64> = asm.tables.test_deta[q_idx].iter().map(|d| d * dscale).collect();

        // Stress-stress Voigt block of (J^{-1} S:(J sigma), conj(J) tau):
        //   row tau11: j1^2 (1/2mu - c)/detJ s11 - c s22
        //   row tau22: -c s11 + j2^2 (1/2mu - c)/detJ s22
        //   row tau12: (j1 + j2)^2/(4 mu detJ) s12
        let a11 = j1 * j1 * (inv2mu - cc) / det_j;
        let a22 = j2 * j2 * (inv2mu - cc) / det_j;
        let a12 = (j1 + j2) * (j1 + j2) * inv4mu / det_j;
        let mc = c64(-cc, 0.0);
        accumulate_block(&mut b, row_t11, col_s11, a11 * w, tv, trial);
        accumulate_block(&mut b, row_t11, col_s22, mc * w, tv, trial);
        accumulate_block(&mut b, row_t22, col_s11, mc * w, tv, trial);
        accumulate_block(&mut b, row_t22, col_s22, a22 * w, tv, trial);
        accumulate_block(&mut b, row_t12, col_s12, a12 * w, tv, trial);

        // (u, div tau)
        accumulate_block(&mut b, row_t11, col_u1, c64(w, 0.0), &test_dx, trial);
        accumulate_block(&mut b, row_t12, col_u1, c64(w, 0.0), &test_dy, trial);
        accumulate_block(&mut b, row_t12, col_u2, c64(w, 0.0), &test_dx, trial);
        accumulate_block(&mut b, row_t22, col_u2, c64(w, 0.0), &test_dy, trial);

        // (sigma, grad v)
        accumulate_block(&mut b, row_v1, col_s11, c64(w, 0.0), &test_dx, trial);
        accumulate_block(&mut b, row_v1, col_s12, c64(w, 0.0), &test_dy, trial);
        accumulate_block(&mut b, row_v2, col_s12, c64(w, 0.0), &test_dx, trial);
        accumulate_block(&mut b, row_v2, col_s22, c64(w, 0.0), &test_dy, trial);

        // -(det J rho w^2 u, v)
        let mass = -det_j * rho_w2;
        accumulate_block(&mut b, row_v1, col_u1, mass * w, tv, trial);
        accumulate_block(&mut b, row_v2, col_u2, mass * w, tv, trial);

        // Gram. Conjugated Jacobian weights of the printed norm:
        let (b1, b2) = (j1.conj(), j2.conj());
        let cbar = c64(1.0, 0.0) / det_j.conj();
        // coefficients of -conj(J)^{-1} (S_J : tau) per Voigt component
        let w11_t11 = -cbar * (inv2mu - cc) * b1 * b1;
        let w11_t22 = c64(cc, 0.0);
        let w22_t22 = -cbar * (inv2mu - cc) * b2 * b2;
        let w22_t11 = c64(cc, 0.0);
        let w12_t12 = -cbar * b1 * inv4mu * (b1 + b2);
        let w21_t12 = -cbar * b2 * inv4mu * (b1 + b2);
        let mass_bar = det_j.conj() * rho_w2;

        // T_A11 = dv1/dx + w11_t11 tau11 + w11_t22 tau22
        fill(&mut t_buf, |t| {
            for i in 0..nt {
                t[row_v1 + i] = c64(test_dx[i], 0.0);
                t[row_t11 + i] = w11_t11 * tv[i];
                t[row_t22 + i] = w11_t22 * tv[i];
            }
        });
        accumulate_gram_lower(&mut g, w, &t_buf);
        // T_A22 = dv2/dy + w22_t22 tau22 + w22_t11 tau11
        fill(&mut t_buf, |t| {
            for i in 0..nt {
                t[row_v2 + i] = c64(test_dy[i], 0.0);
                t[row_t22 + i] = w22_t22 * tv[i];
                t[row_t11 + i] = w22_t11 * tv[i];
            }
        });
        accumulate_gram_lower(&mut g, w, &t_buf);
        // T_A12 = dv1/dy + w12_t12 tau12
        fill(&mut t_buf, |t| {
            for i in 0..nt {
                t[row_v1 + i] = c64(test_dy[i], 0.0);
                t[row_t12 + i] = w12_t12 * tv[i];
            }
        });
        accumulate_gram_lower(&mut g, w, &t_buf);
        // T_A21 = dv2/dx + w21_t12 tau12
        fill(&mut t_buf, |t| {
            for i in 0..nt {
                t[row_v2 + i] = c64(test_dx[i], 0.0);
                t[row_t12 + i] = w21_t12 * tv[i];
            }
        });
        accumulate_gram_lower(&mut g, w, &t_buf);
        // T_B1 = dtau11/dx + dtau12/dy - conj(detJ) rho w^2 v1
        fill(&mut t_buf, |t| {
            for i in 0..nt {
                t[row_t11 + i] = c64(test_dx[i], 0.0);
                t[row_t12 + i] = c64(test_dy[i], 0.0);
                t[row_v1 + i] = -mass_bar * tv[i];
            }
        });
        accumulate_gram_lower(&mut g, w, &t_buf);
        // T_B2 = dtau12/dx + dtau22/dy - conj(detJ) rho w^2 v2
        fill(&mut t_buf, |t| {
            for i in 0..nt {
                t[row_t12 + i] = c64(test_dx[i], 0.0);
                t[row_t22 + i] = c64(test_dy[i], 0.0);
                t[row_v2 + i] = -mass_bar * tv[i];
            }
        });
        accumulate_gram_lower(&mut g, w, &t_buf);
        // L2 terms; the tau12 entry appears twice in the Frobenius norm
        for (row0, scale) in [
            (row_t11, 1.0),
            (row_t22, 1.0),
            (row_t12, sqrt2),
            (row_v1, 1.0),
            (row_v2, 1.0),
        ] {
            fill(&mut t_buf, |t| {
                for i in 0..nt {
                    t[row0 + i] = c64(scale * tv[i], 0.0);
                }
            });
            accumulate_gram_lower(&mut g, w, &t_buf);
        }
    }
    mirror_lower_to_upper(&mut g);

    // Skeleton pairings: -<u_hat, tau.n_K> and -sign <t_hat, v>.
    let conn = &asm.mesh.connectivity[element];
    for (local_edge, &(_, sign)) in conn.edges.iter().enumerate() {
        let test_table = &asm.tables.test_edge_vals[local_edge];
        let msign = c64(-sign, 0.0);
        // (tau.n_e)_1 pairs u_hat_x, (tau.n_e)_2 pairs u_hat_y
        let (row_n1, row_n2) = if local_edge % 2 == 1 {
            (row_t11, row_t12) // vertical edge, n_e = +x
        } else {
            (row_t12, row_t22) // horizontal edge, n_e = +y
        };
        accumulate_cont_trace_edge(&mut b, asm, &layout, row_n1, local_edge, 0, msign, test_table);
        accumulate_cont_trace_edge(&mut b, asm, &layout, row_n2, local_edge, 1, msign, test_table);
        accumulate_flux_trace_edge(&mut b, asm, &layout, row_v1, local_edge, 0, msign, test_table);
        accumulate_flux_trace_edge(&mut b, asm, &layout, row_v2, local_edge, 1, msign, test_table);
    }

    Ok(ElementSystem {
        b,
        g,
        load,
        layout,
        n_test,
    })
}

#[inline]
fn fill<F: FnOnce(&mut [C64])>(buf: &mut [C64], f: F) {
    buf.fill(c64(0.0, 0.0));
    f(buf);
}
