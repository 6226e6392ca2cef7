//! Export of the polynomial family
//! `f_t(x, y, z) = Σ (-1)^σ(i,j) · t^ω(i,j) · x^i y^j z^(d-i-j)`
//! whose real zero set is isotopic to the T-curve for small `t > 0`.
//!
//! Terms are listed with the power of `x` descending, then the power of `y`
//! descending.  The parameter `t` is either kept symbolic or replaced by an
//! exact rational number.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed};

use crate::error::{Error, Result};
use crate::lattice::{lattice_points, lex_index, Point};
use crate::signs::SignDistribution;

fn monomial(degree: u32, (i, j): Point) -> String {
    let k = degree as i32 - i - j;
    let mut parts = Vec::new();
    for (var, e) in [("x", i), ("y", j), ("z", k)] {
        match e {
            0 => {}
            1 => parts.push(var.to_string()),
            _ => parts.push(format!("{var}^{e}")),
        }
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn ordered_points(degree: u32) -> Vec<Point> {
    let mut pts = lattice_points(degree);
    pts.sort_by(|a, b| b.cmp(a));
    pts
}

fn join(terms: Vec<(bool, String)>) -> String {
    let mut out = String::new();
    for (k, (negative, body)) in terms.into_iter().enumerate() {
        match (k, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    out
}

/// The polynomial with symbolic `t`.
pub fn symbolic(signs: &SignDistribution, lifting: &[i64]) -> Result<String> {
    let d = signs.degree();
    check_lifting(d, lifting)?;
    let terms = ordered_points(d)
        .into_iter()
        .map(|p| {
            let w = lifting[lex_index(d, p).expect("lattice point")];
            let negative = signs.get(p).expect("lattice point") == 1;
            let mono = monomial(d, p);
            let body = match w {
                0 => mono,
                1 => format!("t*{mono}"),
                _ => format!("t^{w}*{mono}"),
            };
            (negative, body)
        })
        .collect();
    Ok(join(terms))
}

/// The polynomial with `t` replaced by an exact positive rational.
pub fn substituted(signs: &SignDistribution, lifting: &[i64], t: &BigRational) -> Result<String> {
    let d = signs.degree();
    check_lifting(d, lifting)?;
    if !t.is_positive() {
        return Err(Error::Format("t must be positive".into()));
    }
    let terms = ordered_points(d)
        .into_iter()
        .map(|p| {
            let w = lifting[lex_index(d, p).expect("lattice point")];
            let negative = signs.get(p).expect("lattice point") == 1;
            let c: BigRational = Pow::pow(t, BigInt::from(w));
            let mono = monomial(d, p);
            let body = if c.is_one() {
                mono
            } else if mono == "1" {
                c.to_string()
            } else {
                format!("{c}*{mono}")
            };
            (negative, body)
        })
        .collect();
    Ok(join(terms))
}

/// Parses `p/q` or an integer into a rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let bad = || Error::Format(format!("not a rational number: {text:?}"));
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d == BigInt::from(0) {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

fn check_lifting(degree: u32, lifting: &[i64]) -> Result<()> {
    let n = lattice_points(degree).len();
    if lifting.len() != n {
        return Err(Error::Format(format!("lifting has {} values, expected {n}", lifting.len())));
    }
    if lifting.iter().any(|&w| w < 0) {
        return Err(Error::Format("lifting values must be non-negative".into()));
    }
    Ok(())
}
