//! The triangulated projective plane obtained from a triangulation of
//! `d·Δ₂` by reflecting it into the four quadrants of the diamond and gluing
//! antipodal boundary points.

use std::collections::HashMap;

use crate::error::Result;
use crate::lattice::{Diamond, Point, Quadrant};
use crate::triangulation::Triangulation;

/// A triangle of the surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SurfaceTriangle {
    /// Diamond positions of the corners.
    pub positions: [u16; 3],
    /// Surface edge opposite to each corner.
    pub edges: [u32; 3],
    pub quadrant: Quadrant,
    /// Index of the source triangle in the triangulation of `d·Δ₂`.
    pub source: u32,
}

/// An edge of the surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SurfaceEdge {
    /// Diamond positions of one representative copy of the edge.
    pub positions: [u16; 2],
    /// Surface vertices at the two ends.
    pub vertices: [u16; 2],
    /// The two incident surface triangles.
    pub triangles: [u32; 2],
    /// Whether the edge lies on the diamond boundary (and is glued to its
    /// antipodal copy).
    pub glued: bool,
    /// Whether the representative copy joins the two sheets of the sphere
    /// double cover (see [`Diamond::is_secondary`]).
    pub lift: u8,
}

/// Combinatorial surface carried by a triangulation.
#[derive(Debug, Clone)]
pub struct Surface {
    diamond: Diamond,
    triangulation: Triangulation,
    triangles: Vec<SurfaceTriangle>,
    edges: Vec<SurfaceEdge>,
}

impl Surface {
    pub fn new(triangulation: &Triangulation) -> Result<Self> {
        let diamond = Diamond::new(triangulation.degree())?;
        let mut triangles = Vec::with_capacity(4 * triangulation.triangles().len());
        let mut edges: Vec<SurfaceEdge> = Vec::new();
        let mut edge_index: HashMap<(u16, u16), u32> = HashMap::new();
        let mut pending: Vec<Vec<u32>> = Vec::new();
        for q in Quadrant::ALL {
            for (source, t) in triangulation.triangles().iter().enumerate() {
                let pos: [u16; 3] = t.map(|p| diamond.position(q.apply(p)).expect("reflected point") as u16);
                let tri_id = triangles.len() as u32;
                let mut tri_edges = [0u32; 3];
                for k in 0..3 {
                    let a = pos[(k + 1) % 3];
                    let b = pos[(k + 2) % 3];
                    let key = edge_key(&diamond, a, b);
                    let id = *edge_index.entry(key).or_insert_with(|| {
                        let va = diamond.vertex_of(a as usize) as u16;
                        let vb = diamond.vertex_of(b as usize) as u16;
                        let lift =
                            diamond.is_secondary(a as usize) as u8 ^ diamond.is_secondary(b as usize) as u8;
                        edges.push(SurfaceEdge {
                            positions: [a, b],
                            vertices: [va, vb],
                            triangles: [u32::MAX; 2],
                            glued: diamond.is_boundary(a as usize) && diamond.is_boundary(b as usize),
                            lift,
                        });
                        pending.push(Vec::new());
                        (edges.len() - 1) as u32
                    });
                    pending[id as usize].push(tri_id);
                    tri_edges[k] = id;
                }
                triangles.push(SurfaceTriangle {
                    positions: pos,
                    edges: tri_edges,
                    quadrant: q,
                    source: source as u32,
                });
            }
        }
        for (e, tris) in edges.iter_mut().zip(&pending) {
            assert_eq!(tris.len(), 2, "every surface edge bounds two triangles");
            e.triangles = [tris[0], tris[1]];
        }
        Ok(Surface { diamond, triangulation: triangulation.clone(), triangles, edges })
    }

    pub fn degree(&self) -> u32 {
        self.diamond.degree()
    }

    pub fn diamond(&self) -> &Diamond {
        &self.diamond
    }

    pub fn triangulation(&self) -> &Triangulation {
        &self.triangulation
    }

    pub fn triangles(&self) -> &[SurfaceTriangle] {
        &self.triangles
    }

    pub fn edges(&self) -> &[SurfaceEdge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.diamond.vertex_count()
    }

    /// `V - E + F`; equal to 1 for the projective plane.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edges.len() as i64 + self.triangles.len() as i64
    }

    /// Diamond coordinates of a position.
    pub fn point(&self, pos: u16) -> Point {
        self.diamond.point(pos as usize)
    }
}

/// Key identifying a surface edge: the sorted pair of positions, where an
/// edge along the diamond boundary is identified with its antipodal copy.
fn edge_key(diamond: &Diamond, a: u16, b: u16) -> (u16, u16) {
    let sorted = |x: u16, y: u16| if x <= y { (x, y) } else { (y, x) };
    let direct = sorted(a, b);
    if diamond.is_boundary(a as usize) && diamond.is_boundary(b as usize) {
        let neg = |p: u16| {
            let (x, y) = diamond.point(p as usize);
            diamond.position((-x, -y)).expect("antipode") as u16
        };
        direct.min(sorted(neg(a), neg(b)))
    } else {
        direct
    }
}
