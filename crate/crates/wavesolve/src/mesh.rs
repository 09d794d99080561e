//! Structured axis-aligned quadrilateral mesh of the truncated scattering
//! domain: the square [0, L]^2 with the corner cells over [0, hole)^2
//! removed, split into an interior region (coordinates below `l`) and a
//! surrounding PML band.
//!
//! Edges carry a global orientation (+x normal for vertical edges, +y for
//! horizontal ones, parameter increasing with the coordinate), so skeleton
//! unknowns are single-valued and element-local outward normals are
//! recovered through the sign n_K . n_e = +-1.

use crate::error::{Result, SolverError};
use serde::Serialize;
use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Region {
    Interior,
    Pml,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundaryTag {
    HoleDirichlet,
    SymmetryX0,
    SymmetryY0,
    Outer,
    InteriorSkeleton,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    /// Constant x, normal +x, parameter increases with y.
    Vertical,
    /// Constant y, normal +y, parameter increases with x.
    Horizontal,
}

#[derive(Debug, Clone)]
pub struct Element {
    pub ix: usize,
    pub iy: usize,
    /// Lower-left corner.
    pub x0: f64,
    pub y0: f64,
    pub region: Region,
}

#[derive(Debug, Clone)]
pub struct Edge {
    pub kind: EdgeKind,
    /// Grid indices of the edge line: vertical edge i sits at x = i*h with
    /// cell row `iy`; horizontal at y = iy*h with cell column `ix`.
    pub ix: usize,
    pub iy: usize,
    /// Start point (s = -1) in physical coordinates.
    pub start: (f64, f64),
    /// Owning elements with their normal signs n_K . n_e.
    pub owners: Vec<(usize, f64)>,
    pub tag: BoundaryTag,
}

impl Edge {
    /// Global unit normal: +x for vertical edges, +y for horizontal ones.
    pub fn normal(&self) -> (f64, f64) {
        match self.kind {
            EdgeKind::Vertical => (1.0, 0.0),
            EdgeKind::Horizontal => (0.0, 1.0),
        }
    }

    /// Parametrization tangent (s increases with the coordinate).
    pub fn tangent(&self) -> (f64, f64) {
        match self.kind {
            EdgeKind::Vertical => (0.0, 1.0),
            EdgeKind::Horizontal => (1.0, 0.0),
        }
    }

    /// Physical point at edge parameter s in [-1, 1].
    pub fn point(&self, s: f64, h: f64) -> (f64, f64) {
        let t = 0.5 * (s + 1.0) * h;
        match self.kind {
            EdgeKind::Vertical => (self.start.0, self.start.1 + t),
            EdgeKind::Horizontal => (self.start.0 + t, self.start.1),
        }
    }

    pub fn midpoint(&self, h: f64) -> (f64, f64) {
        self.point(0.0, h)
    }

    pub fn is_boundary(&self) -> bool {
        self.owners.len() == 1
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Vertex {
    pub ix: usize,
    pub iy: usize,
    pub x: f64,
    pub y: f64,
}

/// Per-element connectivity: global ids of the four local edges
/// (bottom, right, top, left) with the element's normal sign on each, and
/// the four corner vertices (counterclockwise from lower-left).
#[derive(Debug, Clone, Copy)]
pub struct ElementConnectivity {
    pub edges: [(usize, f64); 4],
    pub vertices: [usize; 4],
}

#[derive(Debug, Clone)]
pub struct StructuredMesh {
    pub n: usize,
    pub n_int: usize,
    pub h: f64,
    pub l: f64,
    pub big_l: f64,
    pub hole: f64,
    pub elements: Vec<Element>,
    pub edges: Vec<Edge>,
    pub vertices: Vec<Vertex>,
    pub connectivity: Vec<ElementConnectivity>,
}

/// Local edge order: bottom, right, top, left.
pub const LOCAL_EDGES: usize = 4;
/// Corner at the s=-1 end of each local edge.
pub const EDGE_START_CORNER: [usize; 4] = [0, 1, 3, 0];
/// Corner at the s=+1 end of each local edge.
pub const EDGE_END_CORNER: [usize; 4] = [1, 2, 2, 3];

/// Maps edge parameter s to the element reference coordinates (xi, eta) for
/// each local edge of an axis-aligned cell.
pub fn edge_to_reference(local_edge: usize, s: f64) -> (f64, f64) {
    match local_edge {
        0 => (s, -1.0),
        1 => (1.0, s),
        2 => (s, 1.0),
        3 => (-1.0, s),
        _ => unreachable!(),
    }
}

pub fn build_lshape_mesh(
    n_int: usize,
    n_pml: usize,
    l: f64,
    big_l: f64,
    hole: f64,
) -> Result<StructuredMesh> {
    if n_int < 1 {
        return Err(SolverError::Config("n_int must be >= 1".into()));
    }
    if !(l > 0.0) || big_l < l {
        return Err(SolverError::Config(format!(
            "need 0 < l <= L, got l = {l}, L = {big_l}"
        )));
    }
    let h = l / n_int as f64;
    if n_pml == 0 {
        if (big_l - l).abs() > 1e-12 * big_l {
            return Err(SolverError::Config(
                "n_pml = 0 requires L = l (no PML band)".into(),
            ));
        }
    } else {
        let h_pml = (big_l - l) / n_pml as f64;
        if (h_pml - h).abs() > 1e-12 * h {
            return Err(SolverError::Config(format!(
                "nonuniform cells: interior h = {h}, PML h = {h_pml}"
            )));
        }
    }
    if hole < 0.0 || hole >= big_l {
        return Err(SolverError::Config(format!("hole = {hole} outside [0, L)")));
    }
    let hole_cells_f = hole / h;
    let hole_cells = hole_cells_f.round() as usize;
    if (hole_cells_f - hole_cells as f64).abs() > 1e-9 {
        return Err(SolverError::Config(format!(
            "hole = {hole} is not a multiple of the cell size h = {h}"
        )));
    }

    let n = n_int + n_pml;
    let retained = |ix: usize, iy: usize| ix >= hole_cells || iy >= hole_cells;

    let mut elements = Vec::new();
    let mut elem_id = HashMap::new();
    for iy in 0..n {
        for ix in 0..n {
            if !retained(ix, iy) {
                continue;
            }
            let region = if ix >= n_int || iy >= n_int {
                Region::Pml
            } else {
                Region::Interior
            };
            elem_id.insert((ix, iy), elements.len());
            elements.push(Element {
                ix,
                iy,
                x0: ix as f64 * h,
                y0: iy as f64 * h,
                region,
            });
        }
    }

    // Vertices touching at least one retained cell.
    let mut vertices = Vec::new();
    let mut vertex_id = HashMap::new();
    for iy in 0..=n {
        for ix in 0..=n {
            let touches = [(1, 1), (0, 1), (1, 0), (0, 0)].iter().any(|&(dx, dy)| {
                ix >= dx && iy >= dy && ix - dx < n && iy - dy < n && retained(ix - dx, iy - dy)
            });
            if touches {
                vertex_id.insert((ix, iy), vertices.len());
                vertices.push(Vertex {
                    ix,
                    iy,
                    x: ix as f64 * h,
                    y: iy as f64 * h,
                });
            }
        }
    }

    let big_l_eff = n as f64 * h;
    let classify = |kind: EdgeKind, ix: usize, iy: usize, boundary: bool| -> BoundaryTag {
        if !boundary {
            return BoundaryTag::InteriorSkeleton;
        }
        match kind {
            EdgeKind::Vertical => {
                if ix == 0 {
                    BoundaryTag::SymmetryX0
                } else if ix == n {
                    BoundaryTag::Outer
                } else {
                    debug_assert_eq!(ix, hole_cells);
                    debug_assert!(iy < hole_cells);
                    BoundaryTag::HoleDirichlet
                }
            }
            EdgeKind::Horizontal => {
                if iy == 0 {
                    BoundaryTag::SymmetryY0
                } else if iy == n {
                    BoundaryTag::Outer
                } else {
                    debug_assert_eq!(iy, hole_cells);
                    debug_assert!(ix < hole_cells);
                    BoundaryTag::HoleDirichlet
                }
            }
        }
    };

    let mut edges = Vec::new();
    let mut edge_id = HashMap::new();
    // Vertical edges at x = ix*h spanning cell row iy.
    for iy in 0..n {
        for ix in 0..=n {
            let left = ix >= 1 && retained(ix - 1, iy);
            let right = ix < n && retained(ix, iy);
            if !(left || right) {
                continue;
            }
            let mut owners = Vec::new();
            if left {
                owners.push((elem_id[&(ix - 1, iy)], 1.0));
            }
            if right {
                owners.push((elem_id[&(ix, iy)], -1.0));
            }
            let tag = classify(EdgeKind::Vertical, ix, iy, owners.len() == 1);
            edge_id.insert((0usize, ix, iy), edges.len());
            edges.push(Edge {
                kind: EdgeKind::Vertical,
                ix,
                iy,
                start: (ix as f64 * h, iy as f64 * h),
                owners,
                tag,
            });
        }
    }
    // Horizontal edges at y = iy*h spanning cell column ix.
    for iy in 0..=n {
        for ix in 0..n {
            let below = iy >= 1 && retained(ix, iy - 1);
            let above = iy < n && retained(ix, iy);
            if !(below || above) {
                continue;
            }
            let mut owners = Vec::new();
            if below {
                owners.push((elem_id[&(ix, iy - 1)], 1.0));
            }
            if above {
                owners.push((elem_id[&(ix, iy)], -1.0));
            }
            let tag = classify(EdgeKind::Horizontal, ix, iy, owners.len() == 1);
            edge_id.insert((1usize, ix, iy), edges.len());
            edges.push(Edge {
                kind: EdgeKind::Horizontal,
                ix,
                iy,
                start: (ix as f64 * h, iy as f64 * h),
                owners,
                tag,
            });
        }
    }

    let connectivity = elements
        .iter()
        .map(|e| ElementConnectivity {
            edges: [
                (edge_id[&(1, e.ix, e.iy)], -1.0),     // bottom
                (edge_id[&(0, e.ix + 1, e.iy)], 1.0),  // right
                (edge_id[&(1, e.ix, e.iy + 1)], 1.0),  // top
                (edge_id[&(0, e.ix, e.iy)], -1.0),     // left
            ],
            vertices: [
                vertex_id[&(e.ix, e.iy)],
                vertex_id[&(e.ix + 1, e.iy)],
                vertex_id[&(e.ix + 1, e.iy + 1)],
                vertex_id[&(e.ix, e.iy + 1)],
            ],
        })
        .collect();

    let mesh = StructuredMesh {
        n,
        n_int,
        h,
        l,
        big_l: big_l_eff,
        hole,
        elements,
        edges,
        vertices,
        connectivity,
    };
    mesh.validate()?;
    Ok(mesh)
}

impl StructuredMesh {
    fn validate(&self) -> Result<()> {
        // Euler characteristic of a disk: V - E + F = 1.
        let euler =
            self.vertices.len() as i64 - self.edges.len() as i64 + self.elements.len() as i64;
        if euler != 1 {
            return Err(SolverError::Config(format!(
                "mesh connectivity broken: V - E + F = {euler}"
            )));
        }
        let area: f64 = self.elements.iter().map(|_| self.h * self.h).sum();
        let expected = self.big_l * self.big_l - self.hole * self.hole;
        if (area - expected).abs() > 1e-9 * expected.max(1.0) {
            return Err(SolverError::Config(format!(
                "tiling broken: area {area} vs expected {expected}"
            )));
        }
        for e in &self.edges {
            match e.owners.len() {
                1 => {
                    if e.tag == BoundaryTag::InteriorSkeleton {
                        return Err(SolverError::Config("boundary edge left untagged".into()));
                    }
                }
                2 => {
                    let s: f64 = e.owners.iter().map(|&(_, s)| s).sum();
                    if s != 0.0 {
                        return Err(SolverError::Config(
                            "interior edge owner signs do not cancel".into(),
                        ));
                    }
                }
                _ => return Err(SolverError::Config("edge with bad owner count".into())),
            }
        }
        Ok(())
    }

    pub fn classify_edge(&self, edge: usize) -> BoundaryTag {
        self.edges[edge].tag
    }

    /// Reference coordinates of a physical point inside element `e`.
    pub fn to_reference(&self, e: usize, x: f64, y: f64) -> (f64, f64) {
        let el = &self.elements[e];
        (
            2.0 * (x - el.x0) / self.h - 1.0,
            2.0 * (y - el.y0) / self.h - 1.0,
        )
    }

    /// Physical coordinates of reference point (xi, eta) in element `e`.
    pub fn to_physical(&self, e: usize, xi: f64, eta: f64) -> (f64, f64) {
        let el = &self.elements[e];
        (
            el.x0 + 0.5 * (xi + 1.0) * self.h,
            el.y0 + 0.5 * (eta + 1.0) * self.h,
        )
    }

    /// Element containing (x, y), if any (points on cell boundaries resolve
    /// to the upper cell, clamped at the domain edge).
    pub fn locate(&self, x: f64, y: f64) -> Option<usize> {
        if x < 0.0 || y < 0.0 || x > self.big_l || y > self.big_l {
            return None;
        }
        let clamp = |v: f64| ((v / self.h) as usize).min(self.n - 1);
        let (ix, iy) = (clamp(x), clamp(y));
        self.elements
            .iter()
            .position(|el| el.ix == ix && el.iy == iy)
    }

    pub fn counts(&self) -> MeshCounts {
        let boundary = self.edges.iter().filter(|e| e.is_boundary()).count();
        let count_tag = |t: BoundaryTag| self.edges.iter().filter(|e| e.tag == t).count();
        MeshCounts {
            elements: self.elements.len(),
            interior_elements: self
                .elements
                .iter()
                .filter(|e| e.region == Region::Interior)
                .count(),
            pml_elements: self
                .elements
                .iter()
                .filter(|e| e.region == Region::Pml)
                .count(),
            edges: self.edges.len(),
            boundary_edges: boundary,
            outer_edges: count_tag(BoundaryTag::Outer),
            symmetry_edges: count_tag(BoundaryTag::SymmetryX0) + count_tag(BoundaryTag::SymmetryY0),
            hole_edges: count_tag(BoundaryTag::HoleDirichlet),
            vertices: self.vertices.len(),
        }
    }
}

/// Mesh summary for the run report.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct MeshCounts {
    pub elements: usize,
    pub interior_elements: usize,
    pub pml_elements: usize,
    pub edges: usize,
    pub boundary_edges: usize,
    pub outer_edges: usize,
    pub symmetry_edges: usize,
    pub hole_edges: usize,
    pub vertices: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn paper_mesh() -> StructuredMesh {
        build_lshape_mesh(8, 4, 2.0, 3.0, 1.0).unwrap()
    }

    #[test]
    fn paper_configuration_counts() {
        let m = paper_mesh();
        let c = m.counts();
        assert_eq!(c.elements, 128); // 12^2 - 4^2
        assert_eq!(c.edges, 280);
        assert_eq!(c.boundary_edges, 48);
        assert_eq!(c.outer_edges, 24);
        assert_eq!(c.symmetry_edges, 16);
        assert_eq!(c.hole_edges, 8);
        assert_eq!(c.vertices, 153);
        assert_eq!(c.interior_elements, 48); // 8^2 - 4^2
        assert_eq!(c.pml_elements, 80);
    }

    #[test]
    fn euler_characteristic() {
        let m = paper_mesh();
        assert_eq!(
            m.vertices.len() as i64 - m.edges.len() as i64 + m.elements.len() as i64,
            1
        );
    }

    #[test]
    fn degenerate_square_mesh() {
        let m = build_lshape_mesh(1, 1, 1.0, 2.0, 0.0).unwrap();
        let c = m.counts();
        assert_eq!(c.elements, 4);
        assert_eq!(c.edges, 12);
        assert_eq!(c.hole_edges, 0);
    }

    #[test]
    fn no_pml_band() {
        let m = build_lshape_mesh(4, 0, 1.0, 1.0, 0.0).unwrap();
        assert_eq!(m.counts().pml_elements, 0);
        assert_eq!(m.counts().elements, 16);
        assert!(build_lshape_mesh(4, 0, 1.0, 2.0, 0.0).is_err());
    }

    #[test]
    fn incommensurate_rejected() {
        assert!(build_lshape_mesh(8, 4, 2.0, 3.0, 0.9).is_err());
        assert!(build_lshape_mesh(8, 3, 2.0, 3.0, 1.0).is_err());
    }

    #[test]
    fn pml_tagging_matches_region() {
        let m = paper_mesh();
        for el in &m.elements {
            let expect = if el.x0 + m.h > m.l + 1e-12 || el.y0 + m.h > m.l + 1e-12 {
                Region::Pml
            } else {
                Region::Interior
            };
            assert_eq!(el.region, expect);
        }
    }

    #[test]
    fn classify_edge_examples() {
        let m = paper_mesh();
        // edge on x = 3 -> outer
        let e_outer = m
            .edges
            .iter()
            .position(|e| e.kind == EdgeKind::Vertical && e.ix == 12 && e.iy == 5)
            .unwrap();
        assert_eq!(m.classify_edge(e_outer), BoundaryTag::Outer);
        // edge on x = 1, y in [0, 1] -> hole
        let e_hole = m
            .edges
            .iter()
            .position(|e| e.kind == EdgeKind::Vertical && e.ix == 4 && e.iy == 2)
            .unwrap();
        assert_eq!(m.classify_edge(e_hole), BoundaryTag::HoleDirichlet);
        // edge at x = 1, y in [1, 3] -> interior skeleton
        let e_int = m
            .edges
            .iter()
            .position(|e| e.kind == EdgeKind::Vertical && e.ix == 4 && e.iy == 6)
            .unwrap();
        assert_eq!(m.classify_edge(e_int), BoundaryTag::InteriorSkeleton);
    }

    #[test]
    fn interior_edge_signs_cancel() {
        let m = paper_mesh();
        for e in &m.edges {
            if e.owners.len() == 2 {
                assert_eq!(e.owners[0].1 + e.owners[1].1, 0.0);
            }
        }
    }

    #[test]
    fn connectivity_edges_agree_with_owners() {
        let m = paper_mesh();
        for (eid, conn) in m.connectivity.iter().enumerate() {
            for &(edge, sign) in &conn.edges {
                assert!(
                    m.edges[edge].owners.iter().any(|&(o, s)| o == eid && s == sign),
                    "element {eid} edge {edge}"
                );
            }
        }
    }

    #[test]
    fn locate_and_reference_roundtrip() {
        let m = paper_mesh();
        let e = m.locate(1.6, 0.3).unwrap();
        let (xi, eta) = m.to_reference(e, 1.6, 0.3);
        let (x, y) = m.to_physical(e, xi, eta);
        assert!((x - 1.6).abs() < 1e-14 && (y - 0.3).abs() < 1e-14);
        assert!(m.locate(0.5, 0.5).is_none()); // inside the hole
    }
}
