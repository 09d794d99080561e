//! Reference-element shape functions.
//!
//! Element fields and broken test spaces use tensor-product Legendre bases
//! (no inter-element continuity is required for either, so orthogonal
//! polynomials are the convenient choice and make the constant mode an
//! actual basis function). Skeleton traces come in two kinds:
//! vertex-plus-bubble Lobatto bases for the continuous (H^{1/2}-type)
//! unknowns and plain per-edge Legendre bases for the discontinuous
//! (H^{-1/2}-type) flux unknowns.

/// P_m(s) and P_m'(s) by the standard three-term recurrences.
pub fn legendre_with_deriv(m: usize, s: f64) -> (f64, f64) {
    let (mut p_prev, mut p) = (1.0, s);
    let (mut d_prev, mut d) = (0.0, 1.0);
    if m == 0 {
        return (1.0, 0.0);
    }
    for k in 1..m {
        let kf = k as f64;
        let p_next = ((2.0 * kf + 1.0) * s * p - kf * p_prev) / (kf + 1.0);
        let d_next = d_prev + (2.0 * kf + 1.0) * p;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
    }
    (p, d)
}

/// All P_0..P_degree at s, with derivatives.
pub fn legendre_all(degree: usize, s: f64) -> (Vec<f64>, Vec<f64>) {
    let mut vals = vec![0.0; degree + 1];
    let mut ders = vec![0.0; degree + 1];
    vals[0] = 1.0;
    if degree >= 1 {
        vals[1] = s;
        ders[1] = 1.0;
    }
    for k in 1..degree {
        let kf = k as f64;
        vals[k + 1] = ((2.0 * kf + 1.0) * s * vals[k] - kf * vals[k - 1]) / (kf + 1.0);
        ders[k + 1] = ders[k - 1] + (2.0 * kf + 1.0) * vals[k];
    }
    (vals, ders)
}

/// Tensor-product scalar basis of degree `degree` on the reference square,
/// index = iy * (degree + 1) + ix. Returns values and reference gradients.
pub fn scalar_basis(degree: usize, point: (f64, f64)) -> (Vec<f64>, Vec<(f64, f64)>) {
    let (px, dpx) = legendre_all(degree, point.0);
    let (py, dpy) = legendre_all(degree, point.1);
    let n = (degree + 1) * (degree + 1);
    let mut vals = Vec::with_capacity(n);
    let mut grads = Vec::with_capacity(n);
    for iy in 0..=degree {
        for ix in 0..=degree {
            vals.push(px[ix] * py[iy]);
            grads.push((dpx[ix] * py[iy], px[ix] * dpy[iy]));
        }
    }
    (vals, grads)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceKind {
    Continuous,
    Discontinuous,
}

/// Edge trace basis at reference coordinate s in [-1, 1].
///
/// Continuous kind (degree >= 1): two vertex hats (1-s)/2, (1+s)/2 followed
/// by degree-1 interior bubbles (integrated Legendre, vanishing at the
/// endpoints). Discontinuous kind: degree+1 Legendre polynomials.
pub fn edge_trace_basis(kind: TraceKind, degree: usize, s: f64) -> Vec<f64> {
    match kind {
        TraceKind::Continuous => {
            assert!(degree >= 1, "continuous trace needs degree >= 1");
            let mut out = Vec::with_capacity(degree + 1);
            out.push(0.5 * (1.0 - s));
            out.push(0.5 * (1.0 + s));
            let (p, _) = legendre_all(degree, s);
            for k in 2..=degree {
                // l_k = (P_k - P_{k-2}) / (2k - 1), zero at both endpoints
                out.push((p[k] - p[k - 2]) / (2.0 * k as f64 - 1.0));
            }
            out
        }
        TraceKind::Discontinuous => legendre_all(degree, s).0,
    }
}
