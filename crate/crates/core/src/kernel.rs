//! Allocation-free scheme evaluation for censuses.
//!
//! The kernel computes only what a histogram needs: the regions of the
//! monochrome-edge graph, the root region and the nesting tree.  Because
//! every oval separates exactly two regions and the nesting graph is a tree,
//! the simple graph of regions adjacent across bicolored edges *is* the
//! nesting tree, so loops never have to be traced.  The result is the
//! balanced-parenthesis code of [`RealScheme::code`].
//!
//! Regions are found by a bitset flood fill over the diamond positions on
//! the two sheets of the sphere double cover: moving along a monochrome edge
//! stays on a sheet, passing from a boundary position to its antipode
//! changes sheet.  For even degree the root is the unique region reached on
//! both sheets.  For odd degree it is the unique region containing a
//! bicolored edge (the region on both sides of the pseudo-line).  Region
//! adjacency comes from the neighbourhood masks of the regions.

use arrayvec::ArrayVec;

use crate::error::{Error, Result};
use crate::scheme::RealScheme;
use crate::surface::Surface;

const MAX_REGIONS: usize = 64;
const CHUNK: usize = 8;

/// Fixed-width bitset over diamond positions.
type Bits<const W: usize> = [u64; W];

#[inline(always)]
fn any<const W: usize>(a: &Bits<W>) -> bool {
    a.iter().fold(0, |acc, &w| acc | w) != 0
}

#[inline(always)]
fn test<const W: usize>(a: &Bits<W>, p: usize) -> u64 {
    (a[p / 64] >> (p % 64)) & 1
}

/// Calls `f` on every set bit.
#[inline(always)]
fn for_each_bit<const W: usize>(a: &Bits<W>, mut f: impl FnMut(usize)) {
    for (i, &word) in a.iter().enumerate() {
        let mut w = word;
        while w != 0 {
            f(i * 64 + w.trailing_zeros() as usize);
            w &= w - 1;
        }
    }
}

#[derive(Debug, Clone)]
struct Tables<const W: usize> {
    odd: bool,
    /// `scatter[c][v]`: positions whose sign is flipped by value `v` of
    /// lexicographic sign chunk `c`.
    scatter: Vec<[Bits<W>; 1 << CHUNK]>,
    parity: Bits<W>,
    all: Bits<W>,
    neighbors: Vec<Bits<W>>,
    /// Antipode of each position together with a boundary flag.
    antipode: Vec<(u16, u64)>,
}

#[derive(Debug, Clone)]
enum Width {
    Two(Box<Tables<2>>),
    Eight(Box<Tables<8>>),
}

/// Precomputed evaluation tables for one triangulation.
#[derive(Debug, Clone)]
pub struct Kernel {
    degree: u32,
    width: Width,
}

/// Outcome of one evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Evaluation {
    /// Code of the real scheme (see [`RealScheme::code`]).
    pub code: u128,
    /// Number of ovals (the pseudo-line is not counted).
    pub ovals: u32,
}

impl<const W: usize> Tables<W> {
    fn new(surface: &Surface) -> Self {
        let dia = surface.diamond();
        let n = dia.position_count();
        assert!(n <= 64 * W, "bitset too narrow for the diamond");
        let mut neighbors = vec![[0u64; W]; n];
        let mut set = |p: usize, q: usize| neighbors[p][q / 64] |= 1 << (q % 64);
        for t in surface.triangles() {
            for k in 0..3 {
                let (a, b) = (t.positions[k] as usize, t.positions[(k + 1) % 3] as usize);
                set(a, b);
                set(b, a);
            }
        }
        let antipode = (0..n)
            .map(|p| {
                if dia.is_boundary(p) {
                    let (x, y) = dia.point(p);
                    (dia.position((-x, -y)).expect("antipode") as u16, 1)
                } else {
                    (p as u16, 0)
                }
            })
            .collect();
        let mut all = [0u64; W];
        let mut parity = [0u64; W];
        let lex_bits = crate::lattice::point_count(dia.degree());
        let chunks = lex_bits.div_ceil(CHUNK);
        let mut scatter = vec![[[0u64; W]; 1 << CHUNK]; chunks];
        for p in 0..n {
            all[p / 64] |= 1 << (p % 64);
            parity[p / 64] |= (dia.parity_of(p) as u64) << (p % 64);
            let lex = dia.lex_of(p);
            let (c, b) = (lex / CHUNK, lex % CHUNK);
            for (v, entry) in scatter[c].iter_mut().enumerate() {
                entry[p / 64] |= (((v >> b) & 1) as u64) << (p % 64);
            }
        }
        Tables { odd: dia.degree() % 2 == 1, scatter, parity, all, neighbors, antipode }
    }

    fn evaluate(&self, bits: u128) -> Result<Evaluation> {
        let mut ones = self.parity;
        for (c, table) in self.scatter.iter().enumerate() {
            let v = &table[((bits >> (c * CHUNK)) as usize) & ((1 << CHUNK) - 1)];
            for i in 0..W {
                ones[i] ^= v[i];
            }
        }
        let colour: [Bits<W>; 2] = [std::array::from_fn(|i| self.all[i] & !ones[i]), ones];

        let mut members: ArrayVec<Bits<W>, MAX_REGIONS> = ArrayVec::new();
        let mut reach: ArrayVec<Bits<W>, MAX_REGIONS> = ArrayVec::new();
        let mut root = usize::MAX;
        let mut unassigned = self.all;
        while let Some(word) = unassigned.iter().position(|&w| w != 0) {
            if members.is_full() {
                return Err(Error::Invariant("too many regions for the kernel".into()));
            }
            let seed = word * 64 + unassigned[word].trailing_zeros() as usize;
            let mut sheet = [[0u64; W]; 2];
            sheet[0][seed / 64] |= 1 << (seed % 64);
            let mut frontier = sheet;
            let mut near = [0u64; W];
            let mut across = [0u64; W];
            loop {
                let mut grow = [[0u64; W]; 2];
                for k in 0..2 {
                    for_each_bit(&frontier[k], |p| {
                        let s = test(&ones, p) as usize;
                        let nb = &self.neighbors[p];
                        for i in 0..W {
                            grow[k][i] |= nb[i] & colour[s][i];
                            near[i] |= nb[i];
                            across[i] |= nb[i] & colour[1 - s][i];
                        }
                        let (q, boundary) = self.antipode[p];
                        let q = q as usize;
                        grow[1 - k][q / 64] |= boundary << (q % 64);
                    });
                }
                let mut more = 0;
                for k in 0..2 {
                    for i in 0..W {
                        frontier[k][i] = grow[k][i] & !sheet[k][i];
                        sheet[k][i] |= frontier[k][i];
                        more |= frontier[k][i];
                    }
                }
                if more == 0 {
                    break;
                }
            }
            let region: Bits<W> = std::array::from_fn(|i| sheet[0][i] | sheet[1][i]);
            let is_root = if self.odd {
                any(&std::array::from_fn::<u64, W, _>(|i| across[i] & region[i]))
            } else {
                any(&std::array::from_fn::<u64, W, _>(|i| sheet[0][i] & sheet[1][i]))
            };
            if is_root {
                if root != usize::MAX {
                    return Err(Error::Invariant("two candidate root regions".into()));
                }
                root = members.len();
            }
            for i in 0..W {
                unassigned[i] &= !region[i];
            }
            members.push(region);
            reach.push(near);
        }
        if root == usize::MAX {
            return Err(Error::Invariant("no root region".into()));
        }
        let regions = members.len();
        let mut adjacent = [0u64; MAX_REGIONS];
        let mut edges = 0;
        for i in 0..regions {
            for j in i + 1..regions {
                let touch = any(&std::array::from_fn::<u64, W, _>(|w| reach[i][w] & members[j][w]));
                adjacent[i] |= (touch as u64) << j;
                adjacent[j] |= (touch as u64) << i;
                edges += touch as usize;
            }
        }
        if edges + 1 != regions {
            return Err(Error::Invariant("region graph is not a tree".into()));
        }
        let (code, len, seen) = encode(root, usize::MAX, &adjacent);
        if seen != regions || len as usize != 2 * regions {
            return Err(Error::Invariant("region graph is disconnected".into()));
        }
        Ok(Evaluation { code, ovals: (regions - 1) as u32 })
    }
}

impl Kernel {
    pub fn new(surface: &Surface) -> Self {
        let width = if surface.diamond().position_count() <= 128 {
            Width::Two(Box::new(Tables::new(surface)))
        } else {
            Width::Eight(Box::new(Tables::new(surface)))
        };
        Kernel { degree: surface.degree(), width }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Evaluates packed sign bits (lexicographic order).
    #[inline]
    pub fn evaluate(&self, bits: u128) -> Result<Evaluation> {
        match &self.width {
            Width::Two(t) => t.evaluate(bits),
            Width::Eight(t) => t.evaluate(bits),
        }
    }

    /// Convenience wrapper returning the scheme itself.
    pub fn scheme(&self, bits: u128) -> Result<RealScheme> {
        let e = self.evaluate(bits)?;
        RealScheme::from_code(self.degree % 2 == 1, e.code)
    }
}

/// Returns `(code, length, nodes)` of the subtree at `node`.
fn encode(node: usize, parent: usize, adjacent: &[u64; MAX_REGIONS]) -> (u128, u32, usize) {
    let mut rest = adjacent[node];
    if parent != usize::MAX {
        rest &= !(1u64 << parent);
    }
    let mut kids: ArrayVec<(u32, u128), MAX_REGIONS> = ArrayVec::new();
    let mut nodes = 1;
    while rest != 0 {
        let c = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let (code, len, n) = encode(c, node, adjacent);
        kids.push((len, code));
        nodes += n;
    }
    kids.sort_unstable();
    let mut code: u128 = 1;
    let mut len = 1;
    for &(l, c) in kids.iter() {
        code = (code << l) | c;
        len += l;
    }
    (code << 1, len + 1, nodes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signs::SignDistribution;
    use crate::triangulation::honeycomb;

    #[test]
    fn harnack_codes() {
        let surface = Surface::new(&honeycomb(4).unwrap()).unwrap();
        let k = Kernel::new(&surface);
        let eta = SignDistribution::harnack(4).unwrap();
        assert_eq!(k.scheme(eta.bits()).unwrap().to_string(), "<4>");
    }

    #[test]
    fn wide_degrees_use_wide_tables() {
        let surface = Surface::new(&honeycomb(9).unwrap()).unwrap();
        let k = Kernel::new(&surface);
        assert!(matches!(k.width, Width::Eight(_)));
        let eta = SignDistribution::harnack(9).unwrap();
        assert_eq!(k.scheme(eta.bits()).unwrap().oval_count(), 28);
    }
}
