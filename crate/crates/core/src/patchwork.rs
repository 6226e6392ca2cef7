//! Full evaluation of a patchwork `(T, σ)`: the T-curve on the projective
//! plane, its loops, the regions of the complement, the nesting tree and the
//! resulting real scheme.
//!
//! Regions are the connected components of the graph of monochrome edges on
//! the surface vertices; each component of the complement of the curve
//! deformation-retracts onto exactly one of them.  A loop touching a single
//! region is one-sided (a pseudo-line); a loop touching two regions is an
//! oval.  The root region is the one whose complement component is not a
//! disk: for even degree it is the unique region whose preimage in the
//! sphere double cover is connected, for odd degree it is the region
//! adjacent to the pseudo-line on both sides.

use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Point, Quadrant};
use crate::scheme::{harnack_bound, Oval, RealScheme};
use crate::signs::SignDistribution;
use crate::surface::Surface;
use crate::triangulation::{edge, Edge, Triangulation};

/// Kind of a connected component of the curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LoopKind {
    Oval,
    PseudoLine,
}

/// A connected component of the curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Loop {
    /// Crossed surface edges, in traversal order.
    pub edges: Vec<u32>,
    /// Surface triangles carrying the segments, in traversal order
    /// (`triangles[k]` joins `edges[k]` and `edges[k + 1]`).
    pub triangles: Vec<u32>,
    pub kind: LoopKind,
    /// Regions touching the loop (one for a pseudo-line, two for an oval).
    pub regions: Vec<usize>,
    /// Whether the loop lifts to a closed loop in the sphere double cover.
    pub lift_closed: bool,
}

/// A connected component of the monochrome-edge graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    /// Surface vertices of the region.
    pub vertices: Vec<u16>,
    /// Whether the preimage in the sphere double cover is connected.
    pub lift_connected: bool,
    /// Distance from the root in the nesting tree.
    pub depth: usize,
    /// Region on the other side of the enclosing oval.
    pub parent: Option<usize>,
}

/// An oval seen as an edge of the nesting tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NestingEdge {
    /// Index of the oval in [`Patchwork::loops`].
    pub oval: usize,
    pub outside: usize,
    pub inside: usize,
    /// Number of ovals enclosing this one.
    pub depth: usize,
}

/// An evaluated patchwork.
#[derive(Debug, Clone)]
pub struct Patchwork {
    surface: Arc<Surface>,
    signs: SignDistribution,
    position_signs: Vec<u8>,
    bicolored: Vec<bool>,
    region_of: Vec<usize>,
    regions: Vec<Region>,
    loops: Vec<Loop>,
    root: usize,
    nesting: Vec<NestingEdge>,
    scheme: RealScheme,
}

impl Patchwork {
    /// Builds the surface of `t` and evaluates `σ` on it.
    pub fn new(t: &Triangulation, signs: SignDistribution) -> Result<Self> {
        Self::on_surface(Arc::new(Surface::new(t)?), signs)
    }

    /// Evaluates `σ` on a prepared surface.
    pub fn on_surface(surface: Arc<Surface>, signs: SignDistribution) -> Result<Self> {
        if surface.degree() != signs.degree() {
            return Err(Error::DegreeMismatch { left: surface.degree(), right: signs.degree() });
        }
        let dia = surface.diamond();
        let position_signs: Vec<u8> =
            (0..dia.position_count()).map(|pos| signs.bit(dia.lex_of(pos)) ^ dia.parity_of(pos)).collect();
        let bicolored: Vec<bool> = surface
            .edges()
            .iter()
            .map(|e| position_signs[e.positions[0] as usize] != position_signs[e.positions[1] as usize])
            .collect();
        let mut pw = Patchwork {
            surface,
            signs,
            position_signs,
            bicolored,
            region_of: Vec::new(),
            regions: Vec::new(),
            loops: Vec::new(),
            root: 0,
            nesting: Vec::new(),
            scheme: RealScheme::plain(false, 0),
        };
        pw.compute_regions();
        pw.trace_loops()?;
        pw.find_root()?;
        pw.build_nesting()?;
        if cfg!(debug_assertions) {
            pw.check_invariants()?;
        }
        Ok(pw)
    }

    fn compute_regions(&mut self) {
        let s = &self.surface;
        let n = s.vertex_count();
        let mut incident: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (id, e) in s.edges().iter().enumerate() {
            if !self.bicolored[id] {
                incident[e.vertices[0] as usize].push(id as u32);
                incident[e.vertices[1] as usize].push(id as u32);
            }
        }
        let mut region_of = vec![usize::MAX; n];
        let mut sheet = vec![0u8; n];
        let mut regions = Vec::new();
        for start in 0..n {
            if region_of[start] != usize::MAX {
                continue;
            }
            let r = regions.len();
            let mut region = Region { vertices: Vec::new(), lift_connected: false, depth: 0, parent: None };
            region_of[start] = r;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                region.vertices.push(u as u16);
                for &id in &incident[u] {
                    let e = s.edges()[id as usize];
                    let w = if e.vertices[0] as usize == u { e.vertices[1] } else { e.vertices[0] } as usize;
                    let target = sheet[u] ^ e.lift;
                    if region_of[w] == usize::MAX {
                        region_of[w] = r;
                        sheet[w] = target;
                        queue.push_back(w);
                    } else if sheet[w] != target {
                        region.lift_connected = true;
                    }
                }
            }
            region.vertices.sort_unstable();
            regions.push(region);
        }
        self.region_of = region_of;
        self.regions = regions;
    }

    fn trace_loops(&mut self) -> Result<()> {
        let s = self.surface.clone();
        let mut visited = vec![false; s.edges().len()];
        for start in 0..s.edges().len() {
            if !self.bicolored[start] || visited[start] {
                continue;
            }
            let mut edges = Vec::new();
            let mut triangles = Vec::new();
            let mut crossings = 0usize;
            let mut cur_edge = start as u32;
            let mut cur_tri = s.edges()[start].triangles[0];
            loop {
                visited[cur_edge as usize] = true;
                edges.push(cur_edge);
                crossings += s.edges()[cur_edge as usize].glued as usize;
                triangles.push(cur_tri);
                let tri = s.triangles()[cur_tri as usize];
                let next = tri
                    .edges
                    .iter()
                    .copied()
                    .find(|&e| e != cur_edge && self.bicolored[e as usize])
                    .ok_or_else(|| Error::Invariant("triangle with a single bicolored edge".into()))?;
                let [t0, t1] = s.edges()[next as usize].triangles;
                let next_tri = if t0 == cur_tri { t1 } else { t0 };
                if next as usize == start {
                    break;
                }
                cur_edge = next;
                cur_tri = next_tri;
            }
            let mut regions: Vec<usize> = edges
                .iter()
                .flat_map(|&e| {
                    let v = s.edges()[e as usize].vertices;
                    [self.region_of[v[0] as usize], self.region_of[v[1] as usize]]
                })
                .collect();
            regions.sort_unstable();
            regions.dedup();
            let kind = match regions.len() {
                1 => LoopKind::PseudoLine,
                2 => LoopKind::Oval,
                k => return Err(Error::Invariant(format!("loop touches {k} regions"))),
            };
            self.loops.push(Loop { edges, triangles, kind, regions, lift_closed: crossings.is_multiple_of(2) });
        }
        Ok(())
    }

    fn find_root(&mut self) -> Result<()> {
        let connected: Vec<usize> =
            (0..self.regions.len()).filter(|&r| self.regions[r].lift_connected).collect();
        let pseudo: Vec<&Loop> = self.loops.iter().filter(|l| l.kind == LoopKind::PseudoLine).collect();
        self.root = if self.surface.degree().is_multiple_of(2) {
            match connected.as_slice() {
                [r] => *r,
                other => {
                    return Err(Error::Invariant(format!(
                        "{} regions with connected double-cover preimage",
                        other.len()
                    )))
                }
            }
        } else {
            if !connected.is_empty() {
                return Err(Error::Invariant("odd degree region with connected preimage".into()));
            }
            match pseudo.as_slice() {
                [l] => l.regions[0],
                other => return Err(Error::Invariant(format!("{} pseudo-lines", other.len()))),
            }
        };
        Ok(())
    }

    fn build_nesting(&mut self) -> Result<()> {
        let r = self.regions.len();
        let mut adjacent: Vec<Vec<(usize, usize)>> = vec![Vec::new(); r];
        for (idx, l) in self.loops.iter().enumerate() {
            if l.kind == LoopKind::Oval {
                adjacent[l.regions[0]].push((l.regions[1], idx));
                adjacent[l.regions[1]].push((l.regions[0], idx));
            }
        }
        let mut seen = vec![false; r];
        seen[self.root] = true;
        let mut queue = VecDeque::from([self.root]);
        let mut nesting = Vec::new();
        while let Some(a) = queue.pop_front() {
            for &(b, oval) in &adjacent[a] {
                if seen[b] {
                    if self.regions[a].parent != Some(b) {
                        return Err(Error::Invariant("nesting graph has a cycle".into()));
                    }
                    continue;
                }
                seen[b] = true;
                self.regions[b].parent = Some(a);
                self.regions[b].depth = self.regions[a].depth + 1;
                nesting.push(NestingEdge { oval, outside: a, inside: b, depth: self.regions[a].depth });
                queue.push_back(b);
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::Invariant("nesting graph is disconnected".into()));
        }
        nesting.sort_by_key(|n| n.oval);
        fn subtree(region: usize, nesting: &[NestingEdge]) -> Vec<Oval> {
            nesting
                .iter()
                .filter(|n| n.outside == region)
                .map(|n| Oval::enclosing(subtree(n.inside, nesting)))
                .collect()
        }
        let pseudo_line = self.loops.iter().any(|l| l.kind == LoopKind::PseudoLine);
        self.scheme = RealScheme::new(pseudo_line, subtree(self.root, &nesting));
        self.nesting = nesting;
        Ok(())
    }

    /// Checks the topological invariants every patchwork must satisfy.
    pub fn check_invariants(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Invariant(m));
        let d = self.surface.degree();
        if self.surface.euler_characteristic() != 1 {
            return fail(format!("Euler characteristic {}", self.surface.euler_characteristic()));
        }
        let loops = self.loops.len();
        if loops < 1 || loops > harnack_bound(d) {
            return fail(format!("{loops} loops outside 1..={}", harnack_bound(d)));
        }
        let pseudo = self.loops.iter().filter(|l| l.kind == LoopKind::PseudoLine).count();
        if pseudo != (d % 2) as usize {
            return fail(format!("{pseudo} pseudo-lines in degree {d}"));
        }
        let ovals = loops - pseudo;
        if self.regions.len() != ovals + 1 {
            return fail(format!("{} regions for {ovals} ovals", self.regions.len()));
        }
        for (k, l) in self.loops.iter().enumerate() {
            if (l.kind == LoopKind::Oval) != l.lift_closed {
                return fail(format!("loop {k}: region count and double-cover lift disagree"));
            }
        }
        if self.scheme.stats().loops != loops {
            return fail("scheme does not account for every loop".into());
        }
        Ok(())
    }

    pub fn degree(&self) -> u32 {
        self.surface.degree()
    }

    pub fn surface(&self) -> &Arc<Surface> {
        &self.surface
    }

    pub fn triangulation(&self) -> &Triangulation {
        self.surface.triangulation()
    }

    pub fn signs(&self) -> SignDistribution {
        self.signs
    }

    /// Sign at every diamond position.
    pub fn position_signs(&self) -> &[u8] {
        &self.position_signs
    }

    /// Whether each surface edge joins vertices of different sign.
    pub fn bicolored(&self) -> &[bool] {
        &self.bicolored
    }

    pub fn loops(&self) -> &[Loop] {
        &self.loops
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    /// Region containing a surface vertex.
    pub fn region_of(&self, vertex: usize) -> usize {
        self.region_of[vertex]
    }

    pub fn root_region(&self) -> usize {
        self.root
    }

    pub fn nesting(&self) -> &[NestingEdge] {
        &self.nesting
    }

    pub fn scheme(&self) -> &RealScheme {
        &self.scheme
    }

    /// Representatives (diamond coordinates) of the vertices of a region.
    pub fn region_points(&self, region: usize) -> Vec<Point> {
        let dia = self.surface.diamond();
        self.regions[region].vertices.iter().map(|&v| dia.vertex_rep(v as usize)).collect()
    }

    /// Segments of a loop as pairs of edge midpoints in diamond coordinates.
    pub fn loop_segments(&self, index: usize) -> Vec<[(f64, f64); 2]> {
        let l = &self.loops[index];
        let n = l.edges.len();
        (0..n)
            .map(|k| {
                let tri = l.triangles[k];
                [self.midpoint_in(tri, l.edges[k]), self.midpoint_in(tri, l.edges[(k + 1) % n])]
            })
            .collect()
    }

    fn crossed_edge_in(&self, tri: u32, e: u32) -> Edge {
        let t = self.surface.triangles()[tri as usize];
        let k = t.edges.iter().position(|&x| x == e).expect("edge of triangle");
        let a = self.surface.point(t.positions[(k + 1) % 3]);
        let b = self.surface.point(t.positions[(k + 2) % 3]);
        edge(a, b)
    }

    fn midpoint_in(&self, tri: u32, e: u32) -> (f64, f64) {
        let (a, b) = self.crossed_edge_in(tri, e);
        ((a.0 + b.0) as f64 / 2.0, (a.1 + b.1) as f64 / 2.0)
    }

    /// The part of the curve carried by the triangles of one quadrant.
    pub fn quadrant_curve(&self, q: Quadrant) -> QuadrantCurve {
        let mut segments = BTreeSet::new();
        let mut crossed = BTreeSet::new();
        let mut edges = BTreeSet::new();
        for t in self.surface.triangles() {
            if t.quadrant != q {
                continue;
            }
            let mut hits = Vec::new();
            for k in 0..3 {
                let a = self.surface.point(t.positions[(k + 1) % 3]);
                let b = self.surface.point(t.positions[(k + 2) % 3]);
                let e = edge(a, b);
                edges.insert(e);
                if self.bicolored[t.edges[k] as usize] {
                    hits.push(e);
                    crossed.insert(e);
                }
            }
            if hits.len() == 2 {
                segments.insert(if hits[0] <= hits[1] { (hits[0], hits[1]) } else { (hits[1], hits[0]) });
            }
        }
        QuadrantCurve { edges, crossed, segments }
    }

    /// Flips an edge of the underlying triangulation, keeping the signs.
    /// Also reports whether the flip is a bridge flip for these signs.
    pub fn flip(&self, e: Edge) -> Result<(Patchwork, bool)> {
        let bridge = is_bridge_flip(self.triangulation(), &self.signs, e)?;
        let t = self.triangulation().flip(e)?;
        Ok((Patchwork::new(&t, self.signs)?, bridge))
    }
}

/// Curve segments inside one quadrant, keyed by the crossed edges in
/// diamond coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadrantCurve {
    /// Every edge of the quadrant's triangles.
    pub edges: BTreeSet<Edge>,
    /// Edges crossed by the curve.
    pub crossed: BTreeSet<Edge>,
    /// Pairs of crossed edges joined inside one triangle.
    pub segments: BTreeSet<(Edge, Edge)>,
}

impl QuadrantCurve {
    /// Whether two curves (possibly on different triangulations) coincide up
    /// to isotopy inside the cells where the triangulations differ: they must
    /// cross the same common edges and connect them in the same pattern.
    pub fn agrees_with(&self, other: &QuadrantCurve) -> bool {
        let common: BTreeSet<Edge> = self.edges.intersection(&other.edges).copied().collect();
        let mine: BTreeSet<Edge> = self.crossed.intersection(&common).copied().collect();
        let theirs: BTreeSet<Edge> = other.crossed.intersection(&common).copied().collect();
        mine == theirs && self.chords(&common) == other.chords(&common)
    }

    /// Joins crossed common edges through runs of non-common crossed edges.
    fn chords(&self, common: &BTreeSet<Edge>) -> BTreeSet<(Edge, Edge)> {
        let mut adjacency: std::collections::BTreeMap<Edge, Vec<Edge>> = Default::default();
        for &(a, b) in &self.segments {
            adjacency.entry(a).or_default().push(b);
            adjacency.entry(b).or_default().push(a);
        }
        let mut out = BTreeSet::new();
        for &start in self.crossed.iter().filter(|e| common.contains(e)) {
            for &first in adjacency.get(&start).into_iter().flatten() {
                let (mut prev, mut cur) = (start, first);
                let mut guard = 0;
                while !common.contains(&cur) && guard <= self.segments.len() {
                    let next = adjacency[&cur].iter().copied().find(|&n| n != prev);
                    match next {
                        Some(n) => {
                            prev = cur;
                            cur = n;
                        }
                        None => break,
                    }
                    guard += 1;
                }
                out.insert(if start <= cur { (start, cur) } else { (cur, start) });
            }
        }
        out
    }
}

/// A flip of `u–v` (quadrangle `t, u, w, v`) is a bridge flip for `σ` if
/// some member `τ` of the class of `σ` has `τ(t) = τ(w) ≠ τ(u) = τ(v)`.
pub fn is_bridge_flip(t: &Triangulation, signs: &SignDistribution, e: Edge) -> Result<bool> {
    let q = t.quadrangle(e)?;
    if !q.is_strictly_convex() {
        return Err(Error::NotFlippable { edge: edge(e.0, e.1) });
    }
    for tau in signs.orbit() {
        let (st, su, sv, sw) = (tau.get(q.t)?, tau.get(q.u)?, tau.get(q.v)?, tau.get(q.w)?);
        if st == sw && su == sv && st != su {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Same real scheme and root regions sharing a vertex.
pub fn root_isotopic(a: &Patchwork, b: &Patchwork) -> bool {
    if a.degree() != b.degree() || a.scheme() != b.scheme() {
        return false;
    }
    let ra: BTreeSet<u16> = a.regions()[a.root_region()].vertices.iter().copied().collect();
    b.regions()[b.root_region()].vertices.iter().any(|v| ra.contains(v))
}
