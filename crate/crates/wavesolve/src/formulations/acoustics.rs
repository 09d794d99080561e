//! Ultraweak acoustic assembly, both PML variants.
//!
//! Variant A (coefficients on the trial side):
//!   (-iw A_u u, v) + (p, div v) - <p_hat, v.n> = 0
//!   (-iw a_p p, q) + (u, grad q) - <u_hat_n, q> = 0
//! with A_u = diag(j1/j2, j2/j1), a_p = j1 j2, and adjoint graph norm
//!   ||iw conj(A_u) v + grad q||^2 + ||iw conj(a_p) q + div v||^2
//!   + ||q||^2 + ||v||^2.
//!
//! Variant B (pulled-back stretched formulation):
//!   (-iw u, A v) + (p, b div v) - <p_hat, v.n> = 0
//!   (-iw p, q) + (u, W grad q) - <u_hat_n, q> = 0
//! with A = diag(1/j2, 1/j1), b = 1/(j1 j2), W = diag(1/j1, 1/j2), and
//! graph norm ||iw A v + W grad q||^2 + ||iw q + b div v||^2 + L2 terms,
//! coefficients entering unconjugated exactly as printed.

use super::*;
use crate::pml::{coefficients, CoefficientBundle};

pub(super) fn assemble(asm: &Assembler, element: usize, variant_a: bool) -> Result<ElementSystem> {
    let spec = &asm.spec;
    let layout = layout_for(
        if variant_a {
            Formulation::AcousticsA
        } else {
            Formulation::AcousticsB
        },
        spec,
    );
    let nf = spec.field_dofs_per_comp();
    let nt = spec.test_dofs_per_comp();
    let n_test = 3 * nt;
    let n_trial = layout.n_trial();
    let (row_v1, row_v2, row_q) = (0, nt, 2 * nt);
    let (col_p, col_u1, col_u2) = (0, nf, 2 * nf);

    let mut b = DMatrix::<C64>::zeros(n_test, n_trial);
    let mut g = DMatrix::<C64>::zeros(n_test, n_test);
    let load = DVector::<C64>::zeros(n_test);

    let omega = asm.params.omega;
    let miw = c64(0.0, -omega);
    let iw = c64(0.0, omega);

    let (pts, wts, dscale) = asm.element_quad(element);
    let mut t_buf = vec![c64(0.0, 0.0); n_test];

    for (q_idx, (&(x, y), &w)) in pts.iter().zip(&wts).enumerate() {
        let pd = asm.pml.jacobian_at((x, y))?;
        let trial = &asm.tables.trial_vals[q_idx];
        let tv = &asm.tables.test_vals[q_idx];
        let tdx = &asm.tables.test_dxi[q_idx];
        let tdy = &asm.tables.test_deta[q_idx];

        // volume coefficients of the chosen variant
        let (cu, cp_div, cp_mass, cu_grad) = if variant_a {
            match coefficients(Formulation::AcousticsA, &pd)? {
                CoefficientBundle::AcousticsA { a_u, a_p } => (
                    [miw * a_u[0], miw * a_u[1]],
                    [c64(1.0, 0.0), c64(1.0, 0.0)],
                    miw * a_p,
                    [c64(1.0, 0.0), c64(1.0, 0.0)],
                ),
                _ => unreachable!(),
            }
        } else {
            match coefficients(Formulation::AcousticsB, &pd)? {
                CoefficientBundle::AcousticsB { a, b, grad_w } => {
                    ([miw * a[0], miw * a[1]], [b, b], miw, grad_w)
                }
                _ => unreachable!(),
            }
        };

        // B volume blocks; test gradients carry the physical scale 2/h.
        let test_dx: Vec<f64> = tdx.iter().map(|d| d * dscale).collect();
        let test_dy: Vec<f64> = tdy.iter().map(|d| d * dscale).collect();
        accumulate_block(&mut b, row_v1, col_u1, cu[0] * w, tv, trial);
        accumulate_block(&mut b, row_v2, col_u2, cu[1] * w, tv, trial);
        accumulate_block(&mut b, row_v1, col_p, cp_div[0] * w, &test_dx, trial);
        accumulate_block(&mut b, row_v2, col_p, cp_div[1] * w, &test_dy, trial);
        accumulate_block(&mut b, row_q, col_p, cp_mass * w, tv, trial);
        accumulate_block(&mut b, row_q, col_u1, cu_grad[0] * w, &test_dx, trial);
        accumulate_block(&mut b, row_q, col_u2, cu_grad[1] * w, &test_dy, trial);

        // Gram components. Variant A uses the adjoint (conjugated)
        // coefficients, variant B the printed unconjugated ones.
        let (w_v, w_q, w_divv, w_gradq) = if variant_a {
            // iw conj(A_u) v + grad q ; iw conj(a_p) q + div v
            match coefficients(Formulation::AcousticsA, &pd)? {
                CoefficientBundle::AcousticsA { a_u, a_p } => (
                    [iw * a_u[0].conj(), iw * a_u[1].conj()],
                    iw * a_p.conj(),
                    [c64(1.0, 0.0), c64(1.0, 0.0)],
                    [c64(1.0, 0.0), c64(1.0, 0.0)],
                ),
                _ => unreachable!(),
            }
        } else {
            // iw A v + W grad q ; iw q + b div v
            match coefficients(Formulation::AcousticsB, &pd)? {
                CoefficientBundle::AcousticsB { a, b, grad_w } => (
                    [iw * a[0], iw * a[1]],
                    iw,
                    [b, b],
                    grad_w,
                ),
                _ => unreachable!(),
            }
        };

        // T1x = w_v[0] v1 + w_gradq[0] dq/dx
        fill_comp(&mut t_buf, n_test, |t| {
            for i in 0..nt {
                t[row_v1 + i] = w_v[0] * tv[i];
                t[row_q + i] = w_gradq[0] * test_dx[i];
            }
        });
        accumulate_gram_lower(&mut g, w, &t_buf);
        // T1y = w_v[1] v2 + w_gradq[1] dq/dy
        fill_comp(&mut t_buf, n_test, |t| {
            for i in 0..nt {
                t[row_v2 + i] = w_v[1] * tv[i];
                t[row_q + i] = w_gradq[1] * test_dy[i];
            }
        });
        accumulate_gram_lower(&mut g, w, &t_buf);
        // T2 = w_q q + w_divv . div v
        fill_comp(&mut t_buf, n_test, |t| {
            for i in 0..nt {
                t[row_q + i] = w_q * tv[i];
                t[row_v1 + i] = w_divv[0] * test_dx[i];
                t[row_v2 + i] = w_divv[1] * test_dy[i];
            }
        });
        accumulate_gram_lower(&mut g, w, &t_buf);
        // L2 terms: q, v1, v2
        fill_comp(&mut t_buf, n_test, |t| {
            for i in 0..nt {
                t[row_q + i] = c64(tv[i], 0.0);
            }
        });
        accumulate_gram_lower(&mut g, w, &t_buf);
        fill_comp(&mut t_buf, n_test, |t| {
            for i in 0..nt {
                t[row_v1 + i] = c64(tv[i], 0.0);
            }
        });
        accumulate_gram_lower(&mut g, w, &t_buf);
        fill_comp(&mut t_buf, n_test, |t| {
            for i in 0..nt {
                t[row_v2 + i] = c64(tv[i], 0.0);
            }
        });
        accumulate_gram_lower(&mut g, w, &t_buf);
    }
    mirror_lower_to_upper(&mut g);

    // Skeleton pairings: -<p_hat, v.n_K> and -<u_hat_n, q>.
    let conn = &asm.mesh.connectivity[element];
    for (local_edge, &(_, sign)) in conn.edges.iter().enumerate() {
        let test_table = &asm.tables.test_edge_vals[local_edge];
        // v.n_e is v1 on vertical edges (local 1, 3), v2 on horizontal
        let v_row = if local_edge % 2 == 1 { row_v1 } else { row_v2 };
        accumulate_cont_trace_edge(
            &mut b,
            asm,
            &layout,
            v_row,
            local_edge,
            0,
            c64(-sign, 0.0),
            test_table,
        );
        accumulate_flux_trace_edge(
            &mut b,
            asm,
            &layout,
            row_q,
            local_edge,
            0,
            c64(-sign, 0.0),
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
fn fill_comp<F: FnOnce(&mut [C64])>(buf: &mut [C64], n: usize, f: F) {
    buf[..n].fill(c64(0.0, 0.0));
    f(buf);
}
