//! Global numbering of skeleton (trace) unknowns.
//!
//! Continuous-trace components own one dof per mesh vertex plus p-1 bubbles
//! per edge; flux components own p+1 Legendre modes per edge. Entities are
//! numbered along a row-major sweep of their (y, x) position, which keeps
//! the skyline profile of the condensed system narrow.

use crate::mesh::{EdgeKind, StructuredMesh};
use crate::spaces::ElementLayout;

/// What a global trace dof is attached to; used for error reporting and
/// boundary-condition application.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DofSite {
    Vertex { vertex: usize, comp: usize },
    ContBubble { edge: usize, comp: usize, mode: usize },
    Flux { edge: usize, comp: usize, mode: usize },
}

#[derive(Debug, Clone)]
pub struct GlobalDofs {
    pub layout: ElementLayout,
    pub n_global: usize,
    /// element -> local trace index -> global dof.
    pub element_maps: Vec<Vec<usize>>,
    pub sites: Vec<DofSite>,
    /// vertex -> first dof (comp-major), usize::MAX when the physics has no
    /// continuous traces.
    vertex_base: Vec<usize>,
    /// edge -> first continuous bubble dof.
    edge_cont_base: Vec<usize>,
    /// edge -> first flux dof.
    edge_flux_base: Vec<usize>,
}

impl GlobalDofs {
    pub fn build(mesh: &StructuredMesh, layout: ElementLayout) -> GlobalDofs {
        let n_bub = layout.cont_bubbles_per_edge();
        let n_flux = layout.flux_degree + 1;

        // Sweep order over entities: key (2y, 2x) for vertices, (2y+1, 2x)
        // for vertical edges, (2y, 2x+1) for horizontal ones.
        #[derive(Clone, Copy)]
        enum Entity {
            Vertex(usize),
            Edge(usize),
        }
        let mut entities: Vec<(u64, u64, u8, Entity)> = Vec::new();
        for (v, vert) in mesh.vertices.iter().enumerate() {
            entities.push((2 * vert.iy as u64, 2 * vert.ix as u64, 0, Entity::Vertex(v)));
        }
        for (e, edge) in mesh.edges.iter().enumerate() {
            let key = match edge.kind {
                EdgeKind::Vertical => (2 * edge.iy as u64 + 1, 2 * edge.ix as u64),
                EdgeKind::Horizontal => (2 * edge.iy as u64, 2 * edge.ix as u64 + 1),
            };
            entities.push((key.0, key.1, 1, Entity::Edge(e)));
        }
        entities.sort_by_key(|&(y, x, k, _)| (y, x, k));

        let mut vertex_base = vec![usize::MAX; mesh.vertices.len()];
        let mut edge_cont_base = vec![usize::MAX; mesh.edges.len()];
        let mut edge_flux_base = vec![usize::MAX; mesh.edges.len()];
        let mut sites = Vec::new();
        for &(_, _, _, ent) in &entities {
            match ent {
                Entity::Vertex(v) => {
                    vertex_base[v] = sites.len();
                    for comp in 0..layout.n_cont_comps {
                        sites.push(DofSite::Vertex { vertex: v, comp });
                    }
                }
                Entity::Edge(e) => {
                    edge_cont_base[e] = sites.len();
                    for comp in 0..layout.n_cont_comps {
                        for mode in 0..n_bub {
                            sites.push(DofSite::ContBubble { edge: e, comp, mode });
                        }
                    }
                    edge_flux_base[e] = sites.len();
                    for comp in 0..layout.n_flux_comps {
                        for mode in 0..n_flux {
                            sites.push(DofSite::Flux { edge: e, comp, mode });
                        }
                    }
                }
            }
        }
        let n_global = sites.len();

        let element_maps = mesh
            .connectivity
            .iter()
            .map(|conn| {
                let mut map = vec![usize::MAX; layout.trace_dofs()];
                for comp in 0..layout.n_cont_comps {
                    for corner in 0..4 {
                        map[layout.cont_vertex_index(comp, corner)] =
                            vertex_base[conn.vertices[corner]] + comp;
                    }
                    for (le, &(edge, _)) in conn.edges.iter().enumerate() {
                        for k in 0..n_bub {
                            map[layout.cont_bubble_index(comp, le, k)] =
                                edge_cont_base[edge] + comp * n_bub + k;
                        }
                    }
                }
                for comp in 0..layout.n_flux_comps {
                    for (le, &(edge, _)) in conn.edges.iter().enumerate() {
                        for k in 0..n_flux {
                            map[layout.flux_index(comp, le, k)] =
                                edge_flux_base[edge] + comp * n_flux + k;
                        }
                    }
                }
                debug_assert!(map.iter().all(|&g| g != usize::MAX));
                map
            })
            .collect();

        GlobalDofs {
            layout,
            n_global,
            element_maps,
            sites,
            vertex_base,
            edge_cont_base,
            edge_flux_base,
        }
    }

    pub fn vertex_dof(&self, vertex: usize, comp: usize) -> usize {
        self.vertex_base[vertex] + comp
    }

    pub fn cont_bubble_dof(&self, edge: usize, comp: usize, mode: usize) -> usize {
        self.edge_cont_base[edge] + comp * self.layout.cont_bubbles_per_edge() + mode
    }

    pub fn flux_dof(&self, edge: usize, comp: usize, mode: usize) -> usize {
        self.edge_flux_base[edge] + comp * (self.layout.flux_degree + 1) + mode
    }

    pub fn describe(&self, dof: usize) -> String {
        match self.sites[dof] {
            DofSite::Vertex { vertex, comp } => format!("vertex {vertex} comp {comp}"),
            DofSite::ContBubble { edge, comp, mode } => {
                format!("edge {edge} continuous-trace comp {comp} bubble {mode}")
            }
            DofSite::Flux { edge, comp, mode } => {
                format!("edge {edge} flux comp {comp} mode {mode}")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::build_lshape_mesh;

    #[test]
    fn counts_for_paper_mesh_acoustics() {
        let mesh = build_lshape_mesh(8, 4, 2.0, 3.0, 1.0).unwrap();
        let layout = ElementLayout {
            field_degree: 5,
            cont_degree: 5,
            flux_degree: 4,
            n_field_comps: 3,
            n_cont_comps: 1,
            n_flux_comps: 1,
        };
        let dofs = GlobalDofs::build(&mesh, layout);
        // 153 vertices + 280 * 4 bubbles + 280 * 5 flux modes
        assert_eq!(dofs.n_global, 153 + 280 * 4 + 280 * 5);
        for map in &dofs.element_maps {
            assert_eq!(map.len(), layout.trace_dofs());
        }
    }

    #[test]
    fn shared_edges_share_dofs() {
        let mesh = build_lshape_mesh(2, 1, 2.0, 3.0, 0.0).unwrap();
        let layout = ElementLayout {
            field_degree: 4,
            cont_degree: 4,
            flux_degree: 3,
            n_field_comps: 3,
            n_cont_comps: 1,
            n_flux_comps: 1,
        };
        let dofs = GlobalDofs::build(&mesh, layout);
        // neighbouring elements 0 (ix=0) and 1 (ix=1) share element 0's
        // right edge = element 1's left edge
        let right_of_0 = mesh.connectivity[0].edges[1].0;
        let left_of_1 = mesh.connectivity[1].edges[3].0;
        assert_eq!(right_of_0, left_of_1);
        let l = &dofs.layout;
        for k in 0..=l.flux_degree {
            assert_eq!(
                dofs.element_maps[0][l.flux_index(0, 1, k)],
                dofs.element_maps[1][l.flux_index(0, 3, k)]
            );
        }
        // shared corner vertex dofs coincide as well
        assert_eq!(
            dofs.element_maps[0][l.cont_vertex_index(0, 1)],
            dofs.element_maps[1][l.cont_vertex_index(0, 0)]
        );
    }
}
