//! Real schemes: isotopy types of curves in the real projective plane,
//! encoded as rooted trees of ovals (plus a pseudo-line for odd degree).
//!
//! ASCII grammar (Unicode `⟨ ⟩ ⊔` are accepted on input):
//!
//! ```text
//! Scheme := '<' Items '>' | '<0>'
//! Items  := Item (' u ' Item)*
//! Item   := 'J' | INT | INT '<' Items '>'
//! ```
//!
//! `k` denotes `k` empty ovals side by side and `k<X>` denotes `k` ovals each
//! enclosing a copy of `X`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An oval together with the ovals it encloses.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Oval {
    children: Vec<Oval>,
}

impl Oval {
    /// An empty oval.
    pub fn leaf() -> Self {
        Oval { children: Vec::new() }
    }

    /// An oval enclosing the given ovals (reordered canonically).
    pub fn enclosing(mut children: Vec<Oval>) -> Self {
        children.sort();
        Oval { children }
    }

    pub fn children(&self) -> &[Oval] {
        &self.children
    }

    /// Number of ovals in this subtree, the oval itself included.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Oval::size).sum::<usize>()
    }

    fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
}

/// Larger subtrees first, then by recursive comparison of the children.
impl Ord for Oval {
    fn cmp(&self, other: &Self) -> Ordering {
        other.size().cmp(&self.size()).then_with(|| self.children.cmp(&other.children))
    }
}

impl PartialOrd for Oval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A real scheme: outermost ovals plus an optional pseudo-line `J`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RealScheme {
    pseudo_line: bool,
    ovals: Vec<Oval>,
}

/// Summary numbers of a scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SchemeStats {
    /// Connected components, pseudo-line included.
    pub loops: usize,
    /// Ovals at even depth (outermost ovals have depth 0).
    pub p: usize,
    /// Ovals at odd depth.
    pub n: usize,
    /// Largest oval depth; zero when there are no ovals.
    pub max_depth: usize,
}

impl RealScheme {
    pub fn new(pseudo_line: bool, mut ovals: Vec<Oval>) -> Self {
        ovals.sort();
        RealScheme { pseudo_line, ovals }
    }

    /// `⟨k⟩` (or `⟨J ⊔ k⟩`): `k` empty ovals side by side.
    pub fn plain(pseudo_line: bool, k: usize) -> Self {
        RealScheme::new(pseudo_line, vec![Oval::leaf(); k])
    }

    pub fn has_pseudo_line(&self) -> bool {
        self.pseudo_line
    }

    pub fn ovals(&self) -> &[Oval] {
        &self.ovals
    }

    pub fn oval_count(&self) -> usize {
        self.ovals.iter().map(Oval::size).sum()
    }

    pub fn stats(&self) -> SchemeStats {
        fn walk(o: &Oval, depth: usize, s: &mut SchemeStats) {
            if depth.is_multiple_of(2) {
                s.p += 1;
            } else {
                s.n += 1;
            }
            s.max_depth = s.max_depth.max(depth);
            for c in &o.children {
                walk(c, depth + 1, s);
            }
        }
        let mut s = SchemeStats { loops: 0, p: 0, n: 0, max_depth: 0 };
        for o in &self.ovals {
            walk(o, 0, &mut s);
        }
        s.loops = s.p + s.n + self.pseudo_line as usize;
        s
    }

    /// Balanced-parenthesis code of the oval tree (the root stands for the
    /// outer region), with a leading `1` marking the length.  Used as a
    /// compact hash key by the fast evaluator.
    pub fn code(&self) -> u128 {
        fn encode(children: &[Oval], acc: &mut Vec<bool>) {
            acc.push(true);
            let mut codes: Vec<Vec<bool>> = children
                .iter()
                .map(|c| {
                    let mut v = Vec::new();
                    encode(&c.children, &mut v);
                    v
                })
                .collect();
            codes.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| pack(a).cmp(&pack(b))));
            for c in codes {
                acc.extend(c);
            }
            acc.push(false);
        }
        let mut bits = Vec::new();
        encode(&self.ovals, &mut bits);
        pack(&bits)
    }

    /// Inverse of [`RealScheme::code`].
    pub fn from_code(pseudo_line: bool, code: u128) -> Result<Self> {
        if code == 0 {
            return Err(Error::Format("empty scheme code".into()));
        }
        let len = 128 - code.leading_zeros() as usize;
        let bits: Vec<bool> = (0..len).rev().map(|k| (code >> k) & 1 == 1).collect();
        fn parse(bits: &[bool], pos: &mut usize) -> Result<Vec<Oval>> {
            if bits.get(*pos) != Some(&true) {
                return Err(Error::Format("malformed scheme code".into()));
            }
            *pos += 1;
            let mut children = Vec::new();
            while bits.get(*pos) == Some(&true) {
                children.push(Oval::enclosing(parse(bits, pos)?));
            }
            if bits.get(*pos) != Some(&false) {
                return Err(Error::Format("malformed scheme code".into()));
            }
            *pos += 1;
            Ok(children)
        }
        let mut pos = 0;
        let ovals = parse(&bits, &mut pos)?;
        if pos != bits.len() {
            return Err(Error::Format("trailing bits in scheme code".into()));
        }
        Ok(RealScheme::new(pseudo_line, ovals))
    }
}

fn pack(bits: &[bool]) -> u128 {
    bits.iter().fold(0u128, |acc, &b| (acc << 1) | b as u128)
}

fn render_items(ovals: &[Oval], pseudo_line: bool, out: &mut Vec<String>) {
    if pseudo_line {
        out.push("J".into());
    }
    let leaves = ovals.iter().filter(|o| o.is_leaf()).count();
    if leaves > 0 {
        out.push(leaves.to_string());
    }
    let nested: Vec<&Oval> = ovals.iter().filter(|o| !o.is_leaf()).collect();
    let mut i = 0;
    while i < nested.len() {
        let mut j = i + 1;
        while j < nested.len() && nested[j] == nested[i] {
            j += 1;
        }
        let mut inner = Vec::new();
        render_items(&nested[i].children, false, &mut inner);
        out.push(format!("{}<{}>", j - i, inner.join(" u ")));
        i = j;
    }
}

impl fmt::Display for RealScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.pseudo_line && self.ovals.is_empty() {
            return f.write_str("<0>");
        }
        let mut items = Vec::new();
        render_items(&self.ovals, self.pseudo_line, &mut items);
        write!(f, "<{}>", items.join(" u "))
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::SchemeParse { position: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(x) => self.error(format!("expected '{c}', found '{x}'")),
            None => self.error(format!("expected '{c}', found end of input")),
        }
    }

    fn integer(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error("expected a count");
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse().or_else(|_| self.error("count too large"))
    }

    /// Parses `Items` up to (not including) the closing bracket.
    fn items(&mut self, top_level: bool) -> Result<(bool, Vec<Oval>)> {
        let mut pseudo_line = false;
        let mut ovals = Vec::new();
        loop {
            match self.peek() {
                Some('J') => {
                    if !top_level {
                        return self.error("a pseudo-line cannot be enclosed by an oval");
                    }
                    if pseudo_line {
                        return self.error("at most one pseudo-line");
                    }
                    self.pos += 1;
                    pseudo_line = true;
                }
                Some(c) if c.is_ascii_digit() => {
                    let count = self.integer()?;
                    if count == 0 {
                        return self.error("zero count outside '<0>'");
                    }
                    let oval = if self.peek() == Some('<') {
                        self.pos += 1;
                        let (_, inner) = self.items(false)?;
                        self.expect('>')?;
                        Oval::enclosing(inner)
                    } else {
                        Oval::leaf()
                    };
                    ovals.extend(std::iter::repeat_n(oval, count));
                }
                Some(c) => return self.error(format!("unexpected '{c}'")),
                None => return self.error("unexpected end of input"),
            }
            if self.peek() == Some('u') {
                self.pos += 1;
            } else {
                return Ok((pseudo_line, ovals));
            }
        }
    }
}

/// Parses the ASCII or Unicode notation.
pub fn parse_scheme(text: &str) -> Result<RealScheme> {
    let chars: Vec<char> = text
        .chars()
        .map(|c| match c {
            '⟨' | '〈' => '<',
            '⟩' | '〉' => '>',
            '⊔' => 'u',
            other => other,
        })
        .collect();
    let mut p = Parser { chars, pos: 0 };
    p.expect('<')?;
    let save = p.pos;
    if p.peek() == Some('0') {
        p.integer()?;
        if p.peek() == Some('>') {
            p.pos += 1;
            if p.peek().is_some() {
                return p.error("trailing input");
            }
            return Ok(RealScheme::new(false, Vec::new()));
        }
        p.pos = save;
    }
    let (pseudo_line, ovals) = p.items(true)?;
    p.expect('>')?;
    if p.peek().is_some() {
        return p.error("trailing input");
    }
    Ok(RealScheme::new(pseudo_line, ovals))
}

impl FromStr for RealScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_scheme(s)
    }
}

impl Serialize for RealScheme {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RealScheme {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_scheme(&s).map_err(serde::de::Error::custom)
    }
}

/// The bound `M = (d-1)(d-2)/2 + 1` on the number of connected components.
pub fn harnack_bound(degree: u32) -> usize {
    let d = degree as usize;
    (d.saturating_sub(1)) * (d.saturating_sub(2)) / 2 + 1
}

/// `⟨[J ⊔] α ⊔ 1⟨β⟩⟩`, with the `α` empty ovals omitted when zero.
fn with_nest(pseudo_line: bool, alpha: usize, beta: usize) -> RealScheme {
    let mut ovals = vec![Oval::leaf(); alpha];
    ovals.push(Oval::enclosing(vec![Oval::leaf(); beta]));
    RealScheme::new(pseudo_line, ovals)
}

/// `⟨[J ⊔] 1⟨1⟨1⟩⟩⟩`.
fn triple_nest(pseudo_line: bool) -> RealScheme {
    let inner = Oval::enclosing(vec![Oval::enclosing(vec![Oval::leaf()])]);
    RealScheme::new(pseudo_line, vec![inner])
}

/// Complete list of real schemes of curves of degree `d <= 7`, including the
/// empty scheme for even degree.
pub fn enumerate_schemes(degree: u32) -> Result<Vec<RealScheme>> {
    let mut out = Vec::new();
    match degree {
        1 => out.push(RealScheme::plain(true, 0)),
        2 => out.extend((0..=1).map(|k| RealScheme::plain(false, k))),
        3 => out.extend((0..=1).map(|k| RealScheme::plain(true, k))),
        4 => {
            out.extend((0..=4).map(|k| RealScheme::plain(false, k)));
            out.push(with_nest(false, 0, 1));
        }
        5 => {
            out.extend((0..=6).map(|k| RealScheme::plain(true, k)));
            out.push(with_nest(true, 0, 1));
        }
        6 => {
            for alpha in 0..=9usize {
                for beta in 1..=9usize {
                    let diff = (alpha as i64 - beta as i64).rem_euclid(8);
                    let allowed = match alpha + beta {
                        s if s <= 8 => true,
                        9 => diff == 1 || diff == 7,
                        10 => diff == 0,
                        _ => false,
                    };
                    if allowed {
                        out.push(with_nest(false, alpha, beta));
                    }
                }
            }
            out.extend((0..=10).map(|k| RealScheme::plain(false, k)));
            out.push(triple_nest(false));
        }
        7 => {
            for alpha in 0..=13usize {
                for beta in 1..=13usize {
                    if alpha + beta <= 14 {
                        out.push(with_nest(true, alpha, beta));
                    }
                }
            }
            out.extend((0..=15).map(|k| RealScheme::plain(true, k)));
            out.push(triple_nest(true));
        }
        d => return Err(Error::SchemeEnumerationUnsupported(d)),
    }
    Ok(out)
}
