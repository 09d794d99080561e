//! Ultraweak 2D Maxwell assembly (in-plane E, out-of-plane H).
//!
//! The 2D reduction of the 3D tensor det(J) J^{-1} J^{-T} splits into the
//! in-plane block M_E = diag(j2/j1, j1/j2) weighting E and the out-of-plane
//! entry m_H = j1 j2 weighting H. Integrating the curls by parts element
//! by element gives
//!   (E, curl F) - (iw mu0 m_H H, F) + <E_hat, F> = 0,
//!   (H, curl G) + ((iw eps0 - sigma) M_E E, G) - <H_hat, t.G> = 0,
//! with scalar test F (curl F = (dF/dy, -dF/dx)), vector test G
//! (curl G = dGy/dx - dGx/dy), per-edge tangential trace E_hat = t.E
//! (flux-like, carrying the orientation sign n_K . n_e) and continuous
//! trace H_hat; the signs make both trace unknowns equal the physical
//! tangential traces in the global edge orientation. The adjoint graph
//! norm is
//!   ||curl F - (iw eps0 + sigma) conj(M_E) G||^2
//!   + ||curl G + iw mu0 conj(m_H) F||^2 + ||F||^2 + ||G||^2.

use super::*;
use crate::pml::{coefficients, CoefficientBundle};

pub(super) fn assemble(asm: &Assembler, element: usize) -> Result<ElementSystem> {
    let spec = &asm.spec;
    let layout = layout_for(Formulation::Maxwell2d, spec);
    let nf = spec.field_dofs_per_comp();
    let nt = spec.test_dofs_per_comp();
    let n_test = 3 * nt;
    let n_trial = layout.n_trial();
    let (row_f, row_g1, row_g2) = (0, nt, 2 * nt);
    let (col_e1, col_e2, col_h) = (0, nf, 2 * nf);

    let mut b = DMatrix::<C64>::zeros(n_test, n_trial);
    let mut g = DMatrix::<C64>::zeros(n_test, n_test);
    let load = DVector::<C64>::zeros(n_test);

    let p = asm.params;
    let iwe_minus_sigma = c64(-p.sigma, p.omega * p.eps0);
    let iwe_plus_sigma = c64(p.sigma, p.omega * p.eps0);
    let iwmu = c64(0.0, p.omega * p.mu0);

    let (pts, wts, dscale) = asm.element_quad(element);
    let mut t_buf = vec![c64(0.0, 0.0); n_test];

    for (q_idx, (&(x, y), &w)) in pts.iter().zip(&wts).enumerate() {
        let pd = asm.pml.jacobian_at((x, y))?;
        let (m_e, m_h) = match coefficients(Formulation::Maxwell2d, &pd)? {
            CoefficientBundle::Maxwell2d { m_e, m_h } => (m_e, m_h),
            _ => unreachable!(),
        };
        let trial = &asm.tables.trial_vals[q_idx];
        let tv = &asm.tables.test_vals[q_idx];
        let test_dx: Vec<f64> = asm.tables.test_dxi[q_idx].iter().map(|d| d * dscale).collect();
        let test_dy: Vec<f64> = asm.tables.test_deta[q_idx].iter().map(|d| d * dscale).collect();

        // eq1: (E, curl F) - (iw mu0 m_H H, F)
        accumulate_block(&mut b, row_f, col_e1, c64(w, 0.0), &test_dy, trial);
        accumulate_block(&mut b, row_f, col_e2, c64(-w, 0.0), &test_dx, trial);
        accumulate_block(&mut b, row_f, col_h, -iwmu * m_h * w, tv, trial);
        // eq2: (H, curl G) + ((iw eps - sigma) M_E E, G)
        accumulate_block(&mut b, row_g2, col_h, c64(w, 0.0), &test_dx, trial);
        accumulate_block(&mut b, row_g1, col_h, c64(-w, 0.0), &test_dy, trial);
        accumulate_block(&mut b, row_g1, col_e1, iwe_minus_sigma * m_e[0] * w, tv, trial);
        accumulate_block(&mut b, row_g2, col_e2, iwe_minus_sigma * m_e[1] * w, tv, trial);

        // Gram: T1 = curl F - (iw eps + sigma) conj(M_E) G (2 comps)
        let ce = [
            iwe_plus_sigma * m_e[0].conj(),
            iwe_plus_sigma * m_e[1].conj(),
        ];
        fill(&mut t_buf, |t| {
            for i in 0..nt {
                t[row_f + i] = c64(test_dy[i], 0.0);
                t[row_g1 + i] = -ce[0] * tv[i];
            }
        });
        accumulate_gram_lower(&mut g, w, &t_buf);
        fill(&mut t_buf, |t| {
            for i in 0..nt {
                t[row_f + i] = c64(-test_dx[i], 0.0);
                t[row_g2 + i] = -ce[1] * tv[i];
            }
        });
        accumulate_gram_lower(&mut g, w, &t_buf);
        // T2 = curl G + iw mu0 conj(m_H) F
        let cf = iwmu * m_h.conj();
        fill(&mut t_buf, |t| {
            for i in 0..nt {
                t[row_g2 + i] = c64(test_dx[i], 0.0);
                t[row_g1 + i] = c64(-test_dy[i], 0.0);
                t[row_f + i] = cf * tv[i];
            }
        });
        accumulate_gram_lower(&mut g, w, &t_buf);
        // L2 terms
        for row0 in [row_f, row_g1, row_g2] {
            fill(&mut t_buf, |t| {
                for i in 0..nt {
                    t[row0 + i] = c64(tv[i], 0.0);
                }
            });
            accumulate_gram_lower(&mut g, w, &t_buf);
        }
    }
    mirror_lower_to_upper(&mut g);

    // Skeleton pairings: +sign <E_hat, F> and -sign <H_hat, t.G>, with t
    // the right-handed tangent rot(n_e). The trace dofs live on the edge
    // parametrization tangent (+x or +y), which equals rot(n_e) on vertical
    // edges and -rot(n_e) on horizontal ones; `tau` converts between the
    // two conventions.
    let conn = &asm.mesh.connectivity[element];
    for (local_edge, &(_, sign)) in conn.edges.iter().enumerate() {
        let test_table = &asm.tables.test_edge_vals[local_edge];
        let tau = if local_edge % 2 == 1 { 1.0 } else { -1.0 };
        accumulate_flux_trace_edge(
            &mut b,
            asm,
            &layout,
            row_f,
            local_edge,
            0,
            c64(sign * tau, 0.0),
            test_table,
        );
        // t_param . G: G2 on vertical edges (local 1, 3), G1 on horizontal
        let g_row = if local_edge % 2 == 1 { row_g2 } else { row_g1 };
        accumulate_cont_trace_edge(
            &mut b,
            asm,
            &layout,
            g_row,
            local_edge,
            0,
            c64(-sign * tau, 0.0),
            test_table,
        );
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
