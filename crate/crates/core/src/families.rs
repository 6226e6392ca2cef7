//! Infinite families of T-curves with closed-form real schemes: onion
//! curves, special Harnack curves, nested box curves and arrowheads curves.
//!
//! Each family yields the expected scheme together with a triangulation and
//! a sign distribution, so that callers can check the closed form against
//! the patchwork engine.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::check_degree;
use crate::scheme::{Oval, RealScheme};
use crate::signs::SignDistribution;
use crate::triangulation::{bow_tie, framed_chessboard, honeycomb, Triangulation};

/// The named families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Onion,
    SpecialHarnack,
    NestedBox,
    ArrowheadsRow,
    ArrowheadsBoth,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Onion,
        Family::SpecialHarnack,
        Family::NestedBox,
        Family::ArrowheadsRow,
        Family::ArrowheadsBoth,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Onion => "onion",
            Family::SpecialHarnack => "special_harnack",
            Family::NestedBox => "nested_box",
            Family::ArrowheadsRow => "arrowheads_row",
            Family::ArrowheadsBoth => "arrowheads_both",
        }
    }

    /// Closed-form real scheme of the family in the given degree.
    pub fn expected_scheme(self, degree: u32) -> Result<RealScheme> {
        match self {
            Family::Onion => onion_scheme(degree),
            Family::SpecialHarnack => special_harnack_scheme(degree),
            Family::NestedBox => nested_box_scheme(degree),
            Family::ArrowheadsRow => Ok(arrowheads_schemes(degree)?.0),
            Family::ArrowheadsBoth => Ok(arrowheads_schemes(degree)?.1),
        }
    }

    /// The family member of the given degree.
    pub fn build(self, degree: u32) -> Result<FamilySpec> {
        let expected = self.expected_scheme(degree)?;
        let (triangulation, signs) = match self {
            Family::Onion => (honeycomb(degree)?, SignDistribution::ones(degree)?),
            Family::SpecialHarnack => (honeycomb(degree)?, SignDistribution::harnack(degree)?),
            Family::NestedBox => (bow_tie(degree)?, SignDistribution::ones(degree)?),
            Family::ArrowheadsRow => {
                (framed_chessboard(degree)?, arrowheads_signs(degree, ArrowheadsVariant::Row)?)
            }
            Family::ArrowheadsBoth => {
                (framed_chessboard(degree)?, arrowheads_signs(degree, ArrowheadsVariant::Both)?)
            }
        };
        Ok(FamilySpec { family: self, degree, expected, triangulation, signs })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

/// A family member: expected scheme, triangulation and signs.
#[derive(Debug, Clone)]
pub struct FamilySpec {
    pub family: Family,
    pub degree: u32,
    pub expected: RealScheme,
    pub triangulation: Triangulation,
    pub signs: SignDistribution,
}

fn degree_error(family: &str, degree: u32, reason: &str) -> Error {
    Error::FamilyDegree { family: family.into(), degree, reason: reason.into() }
}

fn leaves(k: usize) -> Vec<Oval> {
    vec![Oval::leaf(); k]
}

/// A single oval enclosing `k` empty ovals; an empty oval when `k = 0`.
fn cluster(k: usize) -> Oval {
    Oval::enclosing(leaves(k))
}

/// Fully nested chain of `⌊d/2⌋` ovals, with a pseudo-line for odd `d`.
pub fn onion_scheme(degree: u32) -> Result<RealScheme> {
    check_degree(degree)?;
    let mut ovals = Vec::new();
    for _ in 0..degree / 2 {
        ovals = vec![Oval::enclosing(ovals)];
    }
    Ok(RealScheme::new(degree % 2 == 1, ovals))
}

/// The M-curve produced by the Harnack signs on any triangulation.
pub fn special_harnack_scheme(degree: u32) -> Result<RealScheme> {
    check_degree(degree)?;
    let d = degree as usize;
    if d % 2 == 1 {
        return Ok(RealScheme::plain(true, (d - 1) * d.saturating_sub(2) / 2));
    }
    let k = d / 2;
    let mut ovals = leaves(3 * (k * k - k) / 2);
    ovals.push(cluster((k - 1) * (k.saturating_sub(2)) / 2));
    Ok(RealScheme::new(false, ovals))
}

/// Scheme of the bow tie triangulation with constant signs (`d ≥ 6` even).
///
/// A chain of `d/2 - 1` nested ovals; the oval inside `n - 1` others
/// (`n ≥ 1`) directly encloses `max(d - 2n - 4, 0)` empty ovals, and the
/// remaining ovals of the M-curve lie outside the chain.
pub fn nested_box_scheme(degree: u32) -> Result<RealScheme> {
    check_degree(degree)?;
    if !degree.is_multiple_of(2) || degree < 6 {
        return Err(degree_error("nested_box", degree, "the degree must be even and at least 6"));
    }
    let d = degree as usize;
    let depth = d / 2 - 1;
    let mut chain: Vec<Oval> = Vec::new();
    let mut used = 0;
    for n in (1..=depth).rev() {
        let small = d.saturating_sub(2 * n + 4);
        let mut children = leaves(small);
        children.extend(chain);
        used += small + 1;
        chain = vec![Oval::enclosing(children)];
    }
    let m = crate::scheme::harnack_bound(degree);
    let mut ovals = leaves(m - used);
    ovals.extend(chain);
    debug_assert_eq!(m - used, d * (d + 2) / 4 - 3);
    Ok(RealScheme::new(false, ovals))
}

/// Which sign modification of the Harnack signs an arrowheads curve uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArrowheadsVariant {
    /// Modify row `d - 4` only.
    Row,
    /// Modify row `d - 4` and column `d - 4`.
    Both,
}

fn check_arrowheads(degree: u32) -> Result<()> {
    check_degree(degree)?;
    if !degree.is_multiple_of(4) || degree < 8 {
        return Err(degree_error("arrowheads", degree, "the degree must be divisible by 4 and at least 8"));
    }
    Ok(())
}

/// The two arrowheads schemes for `d = 2k`, `4 | d`, `d ≥ 8`.
pub fn arrowheads_schemes(degree: u32) -> Result<(RealScheme, RealScheme)> {
    check_arrowheads(degree)?;
    let k = degree as usize / 2;
    let outer = 3 * (k * k - k) / 2;
    let inner = (k - 1) * (k - 2) / 2;
    let mut row = leaves(outer - 1);
    row.push(cluster(1));
    row.push(cluster(inner - 1));
    let mut both = leaves(outer - 2);
    both.push(cluster(1));
    both.push(cluster(1));
    both.push(cluster(inner - 2));
    Ok((RealScheme::new(false, row), RealScheme::new(false, both)))
}

/// Harnack signs with both negative points of row `d - 4` (and, for
/// [`ArrowheadsVariant::Both`], of column `d - 4`) switched to `1`.
pub fn arrowheads_signs(degree: u32, variant: ArrowheadsVariant) -> Result<SignDistribution> {
    check_arrowheads(degree)?;
    let r = degree as i32 - 4;
    let mut s = SignDistribution::harnack(degree)?.with((1, r), true)?.with((3, r), true)?;
    if variant == ArrowheadsVariant::Both {
        s = s.with((r, 1), true)?.with((r, 3), true)?;
    }
    Ok(s)
}
