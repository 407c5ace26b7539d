//! Orthant regions around the split point, their finite boxes and the maps
//! between region coordinates and the original variables.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::PositivityError;
use crate::poly::rational::{fmt_rational, serde_rational};
use crate::poly::{box_map, invert_var, shift, MultiPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `0 <= x <= xbar`
    Low,
    /// `xbar <= x`
    High,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionSpec {
    sides: Vec<Side>,
    #[serde(with = "serde_rational")]
    xbar: BigRational,
}

impl RegionSpec {
    pub fn new(sides: Vec<Side>, xbar: BigRational) -> Self {
        RegionSpec { sides, xbar }
    }

    /// The `2^n` regions in index order (bit `n-1-i` set means `x_i` low),
    /// or only the all-high region when `xbar = 0`.
    pub fn enumerate(nvars: usize, xbar: &BigRational) -> Vec<RegionSpec> {
        if xbar.is_zero() {
            return vec![RegionSpec::new(vec![Side::High; nvars], xbar.clone())];
        }
        (0..1usize << nvars)
            .map(|idx| {
                let sides = (0..nvars)
                    .map(|i| {
                        if idx >> (nvars - 1 - i) & 1 == 1 {
                            Side::Low
                        } else {
                            Side::High
                        }
                    })
                    .collect();
                RegionSpec::new(sides, xbar.clone())
            })
            .collect()
    }

    pub fn sides(&self) -> &[Side] {
        &self.sides
    }

    pub fn xbar(&self) -> &BigRational {
        &self.xbar
    }

    pub fn nvars(&self) -> usize {
        self.sides.len()
    }

    /// One letter per variable, `H` or `L`.
    pub fn label(&self) -> String {
        self.sides
            .iter()
            .map(|s| match s {
                Side::High => 'H',
                Side::Low => 'L',
            })
            .collect()
    }

    pub fn from_label(label: &str, xbar: BigRational) -> Option<Self> {
        let sides = label
            .chars()
            .map(|c| match c {
                'H' => Some(Side::High),
                'L' => Some(Side::Low),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()?;
        Some(RegionSpec::new(sides, xbar))
    }

    /// Compass name in two variables, with `x0` east-west and `x1`
    /// north-south.
    pub fn compass(&self) -> Option<&'static str> {
        match self.sides.as_slice() {
            [Side::High, Side::High] => Some("NE"),
            [Side::Low, Side::High] => Some("NW"),
            [Side::High, Side::Low] => Some("SE"),
            [Side::Low, Side::Low] => Some("SW"),
            _ => None,
        }
    }

    /// Closed-region membership.
    pub fn contains(&self, point: &[BigRational]) -> bool {
        point.len() == self.nvars()
            && point.iter().zip(&self.sides).all(|(x, s)| {
                !x.is_negative()
                    && match s {
                        Side::Low => x <= &self.xbar,
                        Side::High => x >= &self.xbar,
                    }
            })
    }

    /// Original point for region coordinates `y >= 0`.
    pub fn to_original(&self, y: &[BigRational]) -> Vec<BigRational> {
        y.iter()
            .zip(&self.sides)
            .map(|(v, s)| match s {
                Side::High => v + &self.xbar,
                Side::Low => (v + self.xbar.recip()).recip(),
            })
            .collect()
    }

    /// Original point for a point `u` of the finitized box.
    pub fn finite_to_original(&self, u: &[BigRational]) -> Vec<BigRational> {
        u.iter()
            .zip(&self.sides)
            .map(|(v, s)| match s {
                Side::High => v.recip(),
                Side::Low => v.clone(),
            })
            .collect()
    }

    /// Finite box: low variables `[0, xbar]`, high variables `(0, 1/xbar]`.
    pub fn finite_box(&self) -> Result<BoxSpec, PositivityError> {
        if self.xbar.is_zero() {
            return Err(PositivityError::FinitizeAtZero);
        }
        let zero = BigRational::zero();
        Ok(BoxSpec {
            bounds: self
                .sides
                .iter()
                .map(|s| match s {
                    Side::Low => (zero.clone(), self.xbar.clone()),
                    Side::High => (zero.clone(), self.xbar.recip()),
                })
                .collect(),
            low_closed: self.sides.iter().map(|s| *s == Side::Low).collect(),
        })
    }
}

impl fmt::Display for RegionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.compass() {
            Some(c) => write!(f, "{c}"),
            None => write!(f, "{}", self.label()),
        }
    }
}

/// Axis-aligned box; each axis is `(a, b]`, or `[a, b]` when `low_closed`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxSpec {
    #[serde(with = "bounds_serde")]
    bounds: Vec<(BigRational, BigRational)>,
    low_closed: Vec<bool>,
}

mod bounds_serde {
    use super::*;
    use crate::poly::rational::parse_rational;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(b: &[(BigRational, BigRational)], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(b.iter().map(|(lo, hi)| [fmt_rational(lo), fmt_rational(hi)]))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(BigRational, BigRational)>, D::Error> {
        let raw = Vec::<[String; 2]>::deserialize(d)?;
        raw.iter()
            .map(|[lo, hi]| {
                let lo = parse_rational(lo).map_err(serde::de::Error::custom)?;
                let hi = parse_rational(hi).map_err(serde::de::Error::custom)?;
                Ok((lo, hi))
            })
            .collect()
    }
}

impl BoxSpec {
    pub fn new(bounds: Vec<(BigRational, BigRational)>, low_closed: Vec<bool>) -> Self {
        assert_eq!(bounds.len(), low_closed.len());
        BoxSpec { bounds, low_closed }
    }

    pub fn bounds(&self) -> &[(BigRational, BigRational)] {
        &self.bounds
    }

    pub fn low_closed(&self) -> &[bool] {
        &self.low_closed
    }

    pub fn nvars(&self) -> usize {
        self.bounds.len()
    }

    /// The `2^n` halves in index order: bit `n-1-i` of the index selects
    /// the upper half of axis `i`. Lower halves keep the parent's closure,
    /// upper halves are open below.
    pub fn halve(&self) -> Vec<BoxSpec> {
        let n = self.nvars();
        let two = BigRational::from_integer(BigInt::from(2));
        (0..1usize << n)
            .map(|idx| {
                let mut bounds = Vec::with_capacity(n);
                let mut low_closed = Vec::with_capacity(n);
                for (i, (a, b)) in self.bounds.iter().enumerate() {
                    let mid = (a + b) / &two;
                    if idx >> (n - 1 - i) & 1 == 1 {
                        bounds.push((mid, b.clone()));
                        low_closed.push(false);
                    } else {
                        bounds.push((a.clone(), mid));
                        low_closed.push(self.low_closed[i]);
                    }
                }
                BoxSpec { bounds, low_closed }
            })
            .collect()
    }

    pub fn contains(&self, point: &[BigRational]) -> bool {
        point.len() == self.nvars()
            && point
                .iter()
                .zip(&self.bounds)
                .zip(&self.low_closed)
                .all(|((x, (a, b)), &closed)| x <= b && (x > a || (closed && x == a)))
    }

    /// Box point for orthant coordinates `y >= 0`:
    /// `x = 1/(y + 1/(b-a)) + a`.
    pub fn from_orthant(&self, y: &[BigRational]) -> Vec<BigRational> {
        y.iter()
            .zip(&self.bounds)
            .map(|(v, (a, b))| (v + (b - a).recip()).recip() + a)
            .collect()
    }

    pub fn upper_corner(&self) -> Vec<BigRational> {
        self.bounds.iter().map(|(_, b)| b.clone()).collect()
    }
}

impl fmt::Display for BoxSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .bounds
            .iter()
            .zip(&self.low_closed)
            .enumerate()
            .map(|(i, ((a, b), closed))| {
                let open = if *closed { '[' } else { '(' };
                format!("x{i} in {open}{}, {}]", fmt_rational(a), fmt_rational(b))
            })
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// Polynomial of one region: high variables shifted by `xbar`, low
/// variables inverted and shifted by `1/xbar`.
pub fn region_poly(p: &MultiPoly, region: &RegionSpec) -> Result<MultiPoly, PositivityError> {
    check_size(p, region)?;
    let mut out = p.clone();
    let mut offsets = Vec::with_capacity(region.nvars());
    for (i, s) in region.sides.iter().enumerate() {
        match s {
            Side::High => offsets.push(region.xbar.clone()),
            Side::Low => {
                out = invert_var(&out, i)?;
                offsets.push(region.xbar.recip());
            }
        }
    }
    Ok(shift(&out, &offsets)?)
}

fn check_size(p: &MultiPoly, region: &RegionSpec) -> Result<(), PositivityError> {
    if p.nvars() != region.nvars() {
        return Err(PositivityError::RegionSize {
            expected: p.nvars(),
            got: region.nvars(),
        });
    }
    Ok(())
}

/// Splits the orthant at `xbar` and returns each region with its
/// polynomial.
pub fn orthant_split(p: &MultiPoly, xbar: &BigRational) -> Result<Vec<(RegionSpec, MultiPoly)>, PositivityError> {
    if p.is_zero() {
        return Err(PositivityError::ZeroPolynomial);
    }
    if xbar.is_negative() {
        return Err(PositivityError::NegativeSplit(fmt_rational(xbar)));
    }
    RegionSpec::enumerate(p.nvars(), xbar)
        .into_iter()
        .map(|r| {
            let q = region_poly(p, &r)?;
            Ok((r, q))
        })
        .collect()
}

/// Inverts every high variable of the original `p` and returns the
/// polynomial together with the finite box it must be positive on.
pub fn finitize(p: &MultiPoly, region: &RegionSpec) -> Result<(MultiPoly, BoxSpec), PositivityError> {
    check_size(p, region)?;
    let b = region.finite_box()?;
    let mut out = p.clone();
    for (i, s) in region.sides.iter().enumerate() {
        if *s == Side::High {
            out = invert_var(&out, i)?;
        }
    }
    Ok((out, b))
}

/// Polynomial of a sub-box of a finitized region.
pub fn box_poly(finite: &MultiPoly, b: &BoxSpec) -> Result<MultiPoly, PositivityError> {
    Ok(box_map(finite, &b.bounds)?)
}
