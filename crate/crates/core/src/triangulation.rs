//! Unimodular triangulations of `d·Δ₂`: validation, symmetry, flips and the
//! explicit constructions used by the curve families.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::lattice::{check_degree, in_triangle, lattice_points, orient, Point};

/// A triangle given by its three vertices, stored in sorted order.
pub type Triangle = [Point; 3];

/// An undirected edge, stored with its endpoints sorted.
pub type Edge = (Point, Point);

/// Normalises an edge so that the smaller endpoint comes first.
pub fn edge(a: Point, b: Point) -> Edge {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn sorted_triangle(mut t: Triangle) -> Triangle {
    t.sort();
    t
}

/// The quadrangle around an interior edge `u–v`, with `t` and `w` the
/// vertices opposite to the edge in its two incident triangles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Quadrangle {
    pub t: Point,
    pub u: Point,
    pub v: Point,
    pub w: Point,
}

impl Quadrangle {
    /// Strict convexity: the diagonals cross in their relative interiors.
    pub fn is_strictly_convex(&self) -> bool {
        let s1 = orient(self.u, self.v, self.t).signum();
        let s2 = orient(self.u, self.v, self.w).signum();
        let s3 = orient(self.t, self.w, self.u).signum();
        let s4 = orient(self.t, self.w, self.v).signum();
        s1 * s2 == -1 && s3 * s4 == -1
    }
}

/// A validated unimodular triangulation of `d·Δ₂`.
#[derive(Debug, Clone)]
pub struct Triangulation {
    degree: u32,
    triangles: Vec<Triangle>,
    edges: BTreeMap<Edge, Vec<usize>>,
}

impl PartialEq for Triangulation {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.triangles == other.triangles
    }
}

impl Eq for Triangulation {}

impl Triangulation {
    /// Validates and normalises a list of triangles.
    pub fn new(degree: u32, triangles: Vec<Triangle>) -> Result<Self> {
        check_degree(degree)?;
        let mut triangles: Vec<Triangle> = triangles.into_iter().map(sorted_triangle).collect();
        triangles.sort();
        let expected = (degree * degree) as usize;
        if triangles.len() != expected {
            return Err(Error::WrongTriangleCount { degree, found: triangles.len(), expected });
        }
        for (index, t) in triangles.iter().enumerate() {
            for &p in t {
                if !in_triangle(degree, p) {
                    return Err(Error::PointOutsideTriangle { point: p, degree });
                }
            }
            let double_area = orient(t[0], t[1], t[2]).abs();
            if double_area != 1 {
                return Err(Error::NotUnimodular { index, double_area });
            }
        }
        let mut edges: BTreeMap<Edge, Vec<usize>> = BTreeMap::new();
        for (index, t) in triangles.iter().enumerate() {
            for (a, b) in [(0, 1), (1, 2), (0, 2)] {
                edges.entry(edge(t[a], t[b])).or_default().push(index);
            }
        }
        let tri = Triangulation { degree, triangles, edges };
        tri.check_cover()?;
        Ok(tri)
    }

    /// Every boundary edge must carry one triangle and every interior edge two
    /// triangles on opposite sides; with the correct total area this forces
    /// an exact tiling.
    fn check_cover(&self) -> Result<()> {
        let d = self.degree as i32;
        let fail = |detail: String| Error::NotATriangulation { degree: self.degree, detail };
        for (&(a, b), tris) in &self.edges {
            let on_boundary =
                (a.0 == 0 && b.0 == 0) || (a.1 == 0 && b.1 == 0) || (a.0 + a.1 == d && b.0 + b.1 == d);
            match (on_boundary, tris.len()) {
                (true, 1) => {}
                (false, 2) => {
                    let o1 = self.opposite(tris[0], a, b);
                    let o2 = self.opposite(tris[1], a, b);
                    if orient(a, b, o1).signum() * orient(a, b, o2).signum() != -1 {
                        return Err(fail(format!("triangles overlap along edge {a:?}-{b:?}")));
                    }
                }
                (_, n) => {
                    return Err(fail(format!("edge {a:?}-{b:?} lies in {n} triangles")));
                }
            }
        }
        let used: BTreeSet<Point> = self.triangles.iter().flatten().copied().collect();
        if used.len() != lattice_points(self.degree).len() {
            return Err(fail("some lattice points are not vertices".into()));
        }
        Ok(())
    }

    fn opposite(&self, tri: usize, a: Point, b: Point) -> Point {
        *self.triangles[tri].iter().find(|&&p| p != a && p != b).expect("triangle has a third vertex")
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    /// All edges in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.keys().copied()
    }

    pub fn has_edge(&self, e: Edge) -> bool {
        self.edges.contains_key(&edge(e.0, e.1))
    }

    /// Edges shared by two triangles, in sorted order.
    pub fn interior_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().filter(|(_, t)| t.len() == 2).map(|(e, _)| *e)
    }

    /// Quadrangle spanned by an interior edge.
    pub fn quadrangle(&self, e: Edge) -> Result<Quadrangle> {
        let e = edge(e.0, e.1);
        match self.edges.get(&e) {
            Some(tris) if tris.len() == 2 => Ok(Quadrangle {
                t: self.opposite(tris[0], e.0, e.1),
                u: e.0,
                v: e.1,
                w: self.opposite(tris[1], e.0, e.1),
            }),
            _ => Err(Error::NotAnInteriorEdge { edge: e }),
        }
    }

    pub fn is_flippable(&self, e: Edge) -> bool {
        self.quadrangle(e).map(|q| q.is_strictly_convex()).unwrap_or(false)
    }

    /// Interior edges whose quadrangle is strictly convex.
    pub fn flippable_edges(&self) -> Vec<Edge> {
        self.interior_edges().filter(|&e| self.is_flippable(e)).collect()
    }

    /// Replaces the diagonal `u–v` of a strictly convex quadrangle by `t–w`.
    pub fn flip(&self, e: Edge) -> Result<Triangulation> {
        let q = self.quadrangle(e)?;
        if !q.is_strictly_convex() {
            return Err(Error::NotFlippable { edge: edge(e.0, e.1) });
        }
        let old = [sorted_triangle([q.t, q.u, q.v]), sorted_triangle([q.u, q.v, q.w])];
        let mut triangles: Vec<Triangle> =
            self.triangles.iter().copied().filter(|t| !old.contains(t)).collect();
        triangles.push([q.t, q.u, q.w]);
        triangles.push([q.t, q.v, q.w]);
        Triangulation::new(self.degree, triangles)
    }

    /// Mirror image in the diagonal `x = y`.
    pub fn transpose(&self) -> Triangulation {
        let triangles = self.triangles.iter().map(|t| t.map(|(x, y)| (y, x))).collect();
        Triangulation::new(self.degree, triangles).expect("mirror of a triangulation is valid")
    }

    /// Whether the triangulation is invariant under `(x, y) ↦ (y, x)`.
    pub fn is_symmetric(&self) -> bool {
        self.transpose() == *self
    }

    /// Hex SHA-256 digest of the normalised triangle list.
    pub fn checksum(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(format!("degree {}\n", self.degree));
        for t in &self.triangles {
            hasher.update(format!("{:?}\n", t));
        }
        hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Performs `steps` flips, each chosen uniformly among the flippable edges.
    pub fn random_flip_walk<R: Rng + ?Sized>(&self, steps: usize, rng: &mut R) -> Triangulation {
        let mut current = self.clone();
        for _ in 0..steps {
            let choices = current.flippable_edges();
            let Some(&e) = choices.choose(rng) else { break };
            current = current.flip(e).expect("flippable edge");
        }
        current
    }
}

/// Serialised form: `{"degree", "triangles": [[[x,y],[x,y],[x,y]], …], "lifting"?}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TriangulationFile {
    pub degree: u32,
    pub triangles: Vec<Triangle>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lifting: Option<Vec<i64>>,
}

impl TriangulationFile {
    pub fn from_triangulation(t: &Triangulation, lifting: Option<Vec<i64>>) -> Self {
        TriangulationFile { degree: t.degree, triangles: t.triangles.clone(), lifting }
    }

    pub fn triangulation(&self) -> Result<Triangulation> {
        if let Some(l) = &self.lifting {
            let n = lattice_points(self.degree).len();
            if l.len() != n {
                return Err(Error::Format(format!("lifting has {} values, expected {n}", l.len())));
            }
        }
        Triangulation::new(self.degree, self.triangles.clone())
    }
}

/// Triangulation cut out by the lines `x = c`, `y = c`, `x + y = c`.
pub fn honeycomb(degree: u32) -> Result<Triangulation> {
    check_degree(degree)?;
    let d = degree as i32;
    let mut triangles = Vec::new();
    for i in 0..d {
        for j in 0..(d - i) {
            triangles.push([(i, j), (i + 1, j), (i, j + 1)]);
            if i + j + 2 <= d {
                triangles.push([(i + 1, j), (i, j + 1), (i + 1, j + 1)]);
            }
        }
    }
    Triangulation::new(degree, triangles)
}

/// Bow-tie triangulation for even `d`, refining the split along `x = y`.
///
/// Below the diagonal every row carries its horizontal edges, each diagonal
/// point `(j+1, j+1)` is joined to the whole row `j` underneath, and the
/// remaining strip is fanned from the boundary point `(d-j, j)`.  Above the
/// diagonal every column carries its vertical edges, each diagonal point
/// `(c-1, c-1)` is joined to the column `c` on its right, and the remaining
/// strip is fanned from the boundary point `(c, d-c)`.
pub fn bow_tie(degree: u32) -> Result<Triangulation> {
    check_degree(degree)?;
    if !degree.is_multiple_of(2) {
        return Err(Error::FamilyDegree {
            family: "bow_tie".into(),
            degree,
            reason: "the degree must be even".into(),
        });
    }
    let d = degree as i32;
    let k = d / 2;
    let mut triangles = Vec::new();
    for j in 0..k {
        for x in j..(d - j) {
            triangles.push([(x, j), (x + 1, j), (j + 1, j + 1)]);
        }
        for x in (j + 1)..(d - j - 1) {
            triangles.push([(x, j + 1), (x + 1, j + 1), (d - j, j)]);
        }
    }
    for c in 1..=k {
        for y in c..(d - c) {
            triangles.push([(c, y), (c, y + 1), (c - 1, c - 1)]);
        }
        for y in (c - 1)..=(d - c) {
            triangles.push([(c - 1, y), (c - 1, y + 1), (c, d - c)]);
        }
    }
    Triangulation::new(degree, triangles)
}

/// Unimodular triangles of one square cell `|x - cx| + |y - cy| <= 2`.
///
/// With `vertical` set, the top and bottom corners are joined to
/// `(cx ± 1, cy)`; otherwise the picture is mirrored so that the left and
/// right corners are joined to `(cx, cy ± 1)`.  The two axes through the
/// centre are always edges, so the cell splits into four quadrants of four
/// triangles each.
pub fn chessboard_cell(center: Point, vertical: bool) -> Vec<Triangle> {
    let (cx, cy) = center;
    let local: [[(i32, i32); 3]; 4] = [
        [(2, 0), (1, 0), (1, 1)],
        [(1, 0), (1, 1), (0, 2)],
        [(1, 0), (0, 0), (0, 1)],
        [(1, 0), (0, 1), (0, 2)],
    ];
    let mut out = Vec::with_capacity(16);
    for (sx, sy) in [(1, 1), (-1, 1), (1, -1), (-1, -1)] {
        for tri in &local {
            out.push(tri.map(
                |(a, b)| {
                    if vertical {
                        (cx + sx * a, cy + sy * b)
                    } else {
                        (cx + sx * b, cy + sy * a)
                    }
                },
            ));
        }
    }
    out
}

/// Framed chessboard triangulation for `d ≡ 0 (mod 4)`.
///
/// The lines `x ± y ≡ 0 (mod 4)` cut the triangle into square cells (halved
/// along the axes).  Cells strictly below the diagonal `x = y` use the
/// vertical orientation of [`chessboard_cell`], cells above it the mirrored
/// one, so the result is symmetric in `x = y`.
pub fn framed_chessboard(degree: u32) -> Result<Triangulation> {
    check_degree(degree)?;
    if !degree.is_multiple_of(4) {
        return Err(Error::FamilyDegree {
            family: "framed_chessboard".into(),
            degree,
            reason: "the degree must be divisible by 4".into(),
        });
    }
    let d = degree as i32;
    let mut triangles = Vec::new();
    for cx in 0..=d {
        for cy in 0..=d {
            if (cx + cy).rem_euclid(4) != 2 || (cx - cy).rem_euclid(4) != 2 {
                continue;
            }
            for t in chessboard_cell((cx, cy), cx > cy) {
                if t.iter().all(|&p| in_triangle(degree, p)) {
                    triangles.push(t);
                }
            }
        }
    }
    Triangulation::new(degree, triangles)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn honeycomb_degree_two() {
        let t = honeycomb(2).unwrap();
        assert_eq!(t.triangles().len(), 4);
        assert!(t.has_edge(((1, 0), (0, 1))));
        assert!(t.triangles().contains(&[(0, 1), (1, 0), (1, 1)]));
        assert!(t.is_symmetric());
    }

    #[test]
    fn constructions_are_valid() {
        for d in 1..=9 {
            honeycomb(d).unwrap();
        }
        for d in [2, 4, 6, 8, 10] {
            bow_tie(d).unwrap();
        }
        for d in [4, 8, 12] {
            let t = framed_chessboard(d).unwrap();
            assert!(t.is_symmetric());
        }
    }

    #[test]
    fn bow_tie_edges() {
        let t = bow_tie(6).unwrap();
        for i in 0..6 {
            for j in 0..=i {
                if i + 1 + j <= 6 {
                    assert!(t.has_edge(((i, j), (i + 1, j))), "horizontal {i},{j}");
                }
            }
        }
        for i in 0..3 {
            for j in (i + 1)..=(6 - i - 1) {
                assert!(t.has_edge(((i, i), (i + 1, j))), "column fan {i},{j}");
            }
        }
    }

    #[test]
    fn flip_honeycomb_square() {
        let t = honeycomb(2).unwrap();
        let f = t.flip(((1, 0), (0, 1))).unwrap();
        assert!(f.has_edge(((0, 0), (1, 1))));
        assert!(!f.has_edge(((1, 0), (0, 1))));
        let collinear = ((1, 0), (1, 1));
        assert!(matches!(f.flip(collinear), Err(Error::NotFlippable { .. })));
    }

    #[test]
    fn boundary_edges_are_not_interior() {
        let t = honeycomb(3).unwrap();
        assert!(matches!(t.quadrangle(((0, 0), (1, 0))), Err(Error::NotAnInteriorEdge { .. })));
    }

    #[test]
    fn rejects_broken_input() {
        let mut tris = honeycomb(2).unwrap().triangles().to_vec();
        tris[0] = [(0, 0), (2, 0), (0, 1)];
        assert!(matches!(Triangulation::new(2, tris), Err(Error::NotUnimodular { .. })));
        let tris = vec![[(0, 0), (1, 0), (0, 1)]; 4];
        assert!(Triangulation::new(2, tris).is_err());
        let tris = honeycomb(2).unwrap().triangles()[..3].to_vec();
        assert!(matches!(Triangulation::new(2, tris), Err(Error::WrongTriangleCount { .. })));
    }
}
