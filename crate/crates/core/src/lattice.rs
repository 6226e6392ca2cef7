//! Lattice points of the triangle `d·Δ₂`, its reflected diamond and the
//! vertex set of the projective-plane model obtained by identifying antipodal
//! boundary points of the diamond.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer lattice point `(x, y)`.
pub type Point = (i32, i32);

/// Largest degree accepted anywhere in the crate.
///
/// Sign vectors are packed into a `u128`, which holds `|A(d)|` bits for
/// `d <= 14`; the scheme kernel encodes nesting trees in 128 bits, which
/// caps the number of regions and leads to the lower bound used here.
pub const MAX_DEGREE: u32 = 12;

/// Rejects degrees outside `1..=MAX_DEGREE`.
pub fn check_degree(degree: u32) -> Result<()> {
    if (1..=MAX_DEGREE).contains(&degree) {
        Ok(())
    } else {
        Err(Error::DegreeOutOfRange(degree))
    }
}

/// Number of lattice points of `d·Δ₂`, that is `(d+1)(d+2)/2`.
pub fn point_count(degree: u32) -> usize {
    let d = degree as usize;
    (d + 1) * (d + 2) / 2
}

/// Lattice points of `d·Δ₂` in lexicographic order
/// `(0,0), (0,1), …, (0,d), (1,0), …, (d,0)`.
pub fn lattice_points(degree: u32) -> Vec<Point> {
    let d = degree as i32;
    let mut points = Vec::with_capacity(point_count(degree));
    for i in 0..=d {
        for j in 0..=(d - i) {
            points.push((i, j));
        }
    }
    points
}

/// Whether `p` lies in `d·Δ₂`.
pub fn in_triangle(degree: u32, p: Point) -> bool {
    p.0 >= 0 && p.1 >= 0 && p.0 + p.1 <= degree as i32
}

/// Position of `p` in the lexicographic order of `d·Δ₂`.
pub fn lex_index(degree: u32, p: Point) -> Option<usize> {
    if !in_triangle(degree, p) {
        return None;
    }
    let (i, j) = (p.0 as usize, p.1 as usize);
    let d = degree as usize;
    Some(i * (d + 1) - i * (i.saturating_sub(1)) / 2 + j)
}

/// Twice the signed area of the triangle `abc` (positive when counter-clockwise).
pub fn orient(a: Point, b: Point, c: Point) -> i64 {
    let (ax, ay) = (a.0 as i64, a.1 as i64);
    let (bx, by) = (b.0 as i64, b.1 as i64);
    let (cx, cy) = (c.0 as i64, c.1 as i64);
    (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
}

/// One of the four reflected copies of `d·Δ₂` inside the diamond.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Quadrant {
    /// `x >= 0, y >= 0`: the original triangle.
    #[serde(rename = "++")]
    PlusPlus,
    /// `x <= 0, y >= 0`.
    #[serde(rename = "-+")]
    MinusPlus,
    /// `x >= 0, y <= 0`.
    #[serde(rename = "+-")]
    PlusMinus,
    /// `x <= 0, y <= 0`.
    #[serde(rename = "--")]
    MinusMinus,
}

impl Quadrant {
    pub const ALL: [Quadrant; 4] =
        [Quadrant::PlusPlus, Quadrant::MinusPlus, Quadrant::PlusMinus, Quadrant::MinusMinus];

    /// Coordinate signs `(sx, sy)` of the quadrant.
    pub fn signs(self) -> (i32, i32) {
        match self {
            Quadrant::PlusPlus => (1, 1),
            Quadrant::MinusPlus => (-1, 1),
            Quadrant::PlusMinus => (1, -1),
            Quadrant::MinusMinus => (-1, -1),
        }
    }

    /// Image of a point of `d·Δ₂` in this quadrant.
    pub fn apply(self, p: Point) -> Point {
        let (sx, sy) = self.signs();
        (sx * p.0, sy * p.1)
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            Quadrant::PlusPlus => "++",
            Quadrant::MinusPlus => "-+",
            Quadrant::PlusMinus => "+-",
            Quadrant::MinusMinus => "--",
        }
    }
}

/// Parity added to a sign when a point of `d·Δ₂` is reflected to `p`:
/// reflecting in the y-axis adds `|x|`, reflecting in the x-axis adds `|y|`.
pub fn reflection_parity(p: Point) -> u8 {
    let mut parity = 0;
    if p.0 < 0 {
        parity ^= (p.0.unsigned_abs() & 1) as u8;
    }
    if p.1 < 0 {
        parity ^= (p.1.unsigned_abs() & 1) as u8;
    }
    parity
}

/// The diamond `{|x| + |y| <= d}` together with the vertex identification of
/// the projective plane (antipodal boundary points are glued).
#[derive(Debug, Clone)]
pub struct Diamond {
    degree: u32,
    positions: Vec<Point>,
    grid: Vec<u16>,
    vertex_of: Vec<u16>,
    vertex_reps: Vec<Point>,
    lex_of: Vec<u16>,
    parity_of: Vec<u8>,
    secondary: Vec<bool>,
}

const NO_POSITION: u16 = u16::MAX;

impl Diamond {
    pub fn new(degree: u32) -> Result<Self> {
        check_degree(degree)?;
        let d = degree as i32;
        let side = (2 * d + 1) as usize;
        let mut grid = vec![NO_POSITION; side * side];
        let mut positions = Vec::new();
        for x in -d..=d {
            let rest = d - x.abs();
            for y in -rest..=rest {
                grid[((x + d) as usize) * side + (y + d) as usize] = positions.len() as u16;
                positions.push((x, y));
            }
        }
        let mut vertex_of = vec![u16::MAX; positions.len()];
        let mut vertex_reps = Vec::new();
        let mut secondary = vec![false; positions.len()];
        for (pos, &p) in positions.iter().enumerate() {
            let on_boundary = p.0.abs() + p.1.abs() == d;
            let neg = (-p.0, -p.1);
            if on_boundary && neg < p {
                secondary[pos] = true;
                continue;
            }
            vertex_of[pos] = vertex_reps.len() as u16;
            vertex_reps.push(p);
        }
        for pos in 0..positions.len() {
            if secondary[pos] {
                let p = positions[pos];
                let partner = grid[((-p.0 + d) as usize) * side + (-p.1 + d) as usize];
                vertex_of[pos] = vertex_of[partner as usize];
            }
        }
        let lex_of = positions
            .iter()
            .map(|&(x, y)| lex_index(degree, (x.abs(), y.abs())).expect("inside") as u16)
            .collect();
        let parity_of = positions.iter().map(|&p| reflection_parity(p)).collect();
        Ok(Diamond { degree, positions, grid, vertex_of, vertex_reps, lex_of, parity_of, secondary })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Number of diamond lattice points, `2d² + 2d + 1`.
    pub fn position_count(&self) -> usize {
        self.positions.len()
    }

    /// Number of vertices of the projective-plane model, `2d² + 1`.
    pub fn vertex_count(&self) -> usize {
        self.vertex_reps.len()
    }

    pub fn point(&self, pos: usize) -> Point {
        self.positions[pos]
    }

    pub fn positions(&self) -> &[Point] {
        &self.positions
    }

    /// Index of a diamond point, if it lies in the diamond.
    pub fn position(&self, p: Point) -> Option<usize> {
        let d = self.degree as i32;
        if p.0.abs() + p.1.abs() > d {
            return None;
        }
        let side = (2 * d + 1) as usize;
        let idx = self.grid[((p.0 + d) as usize) * side + (p.1 + d) as usize];
        (idx != NO_POSITION).then_some(idx as usize)
    }

    /// Surface vertex carried by a diamond position.
    pub fn vertex_of(&self, pos: usize) -> usize {
        self.vertex_of[pos] as usize
    }

    /// Canonical representative (lexicographically smaller of `p`, `-p` on
    /// the boundary) of a surface vertex.
    pub fn vertex_rep(&self, vertex: usize) -> Point {
        self.vertex_reps[vertex]
    }

    pub fn vertex_reps(&self) -> &[Point] {
        &self.vertex_reps
    }

    /// Lexicographic index in `d·Δ₂` of `(|x|, |y|)`.
    pub fn lex_of(&self, pos: usize) -> usize {
        self.lex_of[pos] as usize
    }

    /// Parity added to the sign of `(|x|, |y|)` to obtain the sign at `pos`.
    pub fn parity_of(&self, pos: usize) -> u8 {
        self.parity_of[pos]
    }

    /// Whether `pos` is the non-canonical copy of an identified boundary pair.
    pub fn is_secondary(&self, pos: usize) -> bool {
        self.secondary[pos]
    }

    pub fn is_boundary(&self, pos: usize) -> bool {
        let p = self.positions[pos];
        p.0.abs() + p.1.abs() == self.degree as i32
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lex_order_of_degree_two() {
        assert_eq!(lattice_points(2), vec![(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (2, 0)]);
        for (k, p) in lattice_points(5).into_iter().enumerate() {
            assert_eq!(lex_index(5, p), Some(k));
        }
        assert_eq!(lex_index(3, (2, 2)), None);
    }

    #[test]
    fn point_counts() {
        for d in 1..=MAX_DEGREE {
            assert_eq!(lattice_points(d).len(), point_count(d));
        }
        assert_eq!(point_count(6), 28);
        assert_eq!(point_count(7), 36);
    }

    #[test]
    fn diamond_sizes() {
        for d in 1..=8u32 {
            let dia = Diamond::new(d).unwrap();
            let dd = d as usize;
            assert_eq!(dia.position_count(), 2 * dd * dd + 2 * dd + 1);
            assert_eq!(dia.vertex_count(), 2 * dd * dd + 1);
        }
    }

    #[test]
    fn antipodal_boundary_points_share_a_vertex() {
        let dia = Diamond::new(3).unwrap();
        let a = dia.position((3, 0)).unwrap();
        let b = dia.position((-3, 0)).unwrap();
        assert_eq!(dia.vertex_of(a), dia.vertex_of(b));
        assert_eq!(dia.vertex_rep(dia.vertex_of(a)), (-3, 0));
        let c = dia.position((2, 0)).unwrap();
        let e = dia.position((-2, 0)).unwrap();
        assert_ne!(dia.vertex_of(c), dia.vertex_of(e));
    }

    #[test]
    fn reflection_parities() {
        assert_eq!(reflection_parity((3, 2)), 0);
        assert_eq!(reflection_parity((-3, 2)), 1);
        assert_eq!(reflection_parity((3, -2)), 0);
        assert_eq!(reflection_parity((-1, -1)), 0);
        assert_eq!(reflection_parity((-1, -2)), 1);
    }

    #[test]
    fn degree_bounds() {
        assert!(check_degree(0).is_err());
        assert!(check_degree(MAX_DEGREE + 1).is_err());
        assert!(check_degree(7).is_ok());
    }
}
