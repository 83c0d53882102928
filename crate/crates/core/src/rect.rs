//! Standard dyadic rectangles inside the unit squares `S_0, S_1, ...`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Largest exponent accepted on either axis.
pub const MAX_EXP: u32 = 62;

/// How a rectangle is halved: `V` cuts with a vertical line (left, right),
/// `H` with a horizontal one (bottom, top).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    #[serde(rename = "v")]
    V,
    #[serde(rename = "h")]
    H,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::V => "v",
            Label::H => "h",
        })
    }
}

/// `[xn/2^xe, (xn+1)/2^xe] x [yn/2^ye, (yn+1)/2^ye]` in square `square`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DyadicRect {
    pub square: u32,
    pub xn: u64,
    pub xe: u32,
    pub yn: u64,
    pub ye: u32,
}

fn interval_contains(outer: (u64, u32), inner: (u64, u32)) -> bool {
    outer.1 <= inner.1 && inner.0 >> (inner.1 - outer.1) == outer.0
}

fn interval_meet(a: (u64, u32), b: (u64, u32)) -> Option<(u64, u32)> {
    if interval_contains(a, b) {
        Some(b)
    } else if interval_contains(b, a) {
        Some(a)
    } else {
        None
    }
}

impl DyadicRect {
    pub fn unit(square: u32) -> Self {
        DyadicRect {
            square,
            xn: 0,
            xe: 0,
            yn: 0,
            ye: 0,
        }
    }

    pub fn new(square: u32, xn: u64, xe: u32, yn: u64, ye: u32) -> Option<Self> {
        let ok = xe <= MAX_EXP && ye <= MAX_EXP && xn < (1u64 << xe) && yn < (1u64 << ye);
        ok.then_some(DyadicRect {
            square,
            xn,
            xe,
            yn,
            ye,
        })
    }

    pub fn is_unit(&self) -> bool {
        self.xe == 0 && self.ye == 0
    }

    pub fn halves(&self, label: Label) -> Option<(DyadicRect, DyadicRect)> {
        match label {
            Label::V if self.xe < MAX_EXP => Some((
                DyadicRect {
                    xn: 2 * self.xn,
                    xe: self.xe + 1,
                    ..*self
                },
                DyadicRect {
                    xn: 2 * self.xn + 1,
                    xe: self.xe + 1,
                    ..*self
                },
            )),
            Label::H if self.ye < MAX_EXP => Some((
                DyadicRect {
                    yn: 2 * self.yn,
                    ye: self.ye + 1,
                    ..*self
                },
                DyadicRect {
                    yn: 2 * self.yn + 1,
                    ye: self.ye + 1,
                    ..*self
                },
            )),
            _ => None,
        }
    }

    pub fn contains(&self, other: &DyadicRect) -> bool {
        self.square == other.square
            && interval_contains((self.xn, self.xe), (other.xn, other.xe))
            && interval_contains((self.yn, self.ye), (other.yn, other.ye))
    }

    pub fn intersect(&self, other: &DyadicRect) -> Option<DyadicRect> {
        if self.square != other.square {
            return None;
        }
        let (xn, xe) = interval_meet((self.xn, self.xe), (other.xn, other.xe))?;
        let (yn, ye) = interval_meet((self.yn, self.ye), (other.yn, other.ye))?;
        Some(DyadicRect {
            square: self.square,
            xn,
            xe,
            yn,
            ye,
        })
    }

    pub fn overlaps(&self, other: &DyadicRect) -> bool {
        self.intersect(other).is_some()
    }

    /// Coordinates of `self` relative to `outer`, as a rectangle of `S_0`.
    /// Requires `outer.contains(self)`.
    pub fn relative_to(&self, outer: &DyadicRect) -> DyadicRect {
        debug_assert!(outer.contains(self));
        let xe = self.xe - outer.xe;
        let ye = self.ye - outer.ye;
        DyadicRect {
            square: 0,
            xn: self.xn - (outer.xn << xe),
            xe,
            yn: self.yn - (outer.yn << ye),
            ye,
        }
    }

    /// The image of the unit-relative rectangle `rel` inside `self`.
    pub fn place(&self, rel: &DyadicRect) -> Option<DyadicRect> {
        let xe = self.xe + rel.xe;
        let ye = self.ye + rel.ye;
        if xe > MAX_EXP || ye > MAX_EXP {
            return None;
        }
        Some(DyadicRect {
            square: self.square,
            xn: (self.xn << rel.xe) + rel.xn,
            xe,
            yn: (self.yn << rel.ye) + rel.yn,
            ye,
        })
    }

    /// The rectangle `R` with `R.place(rel) == image`, if any.
    pub fn solve_outer(image: &DyadicRect, rel: &DyadicRect) -> Option<DyadicRect> {
        let xe = image.xe.checked_sub(rel.xe)?;
        let ye = image.ye.checked_sub(rel.ye)?;
        let dx = image.xn.checked_sub(rel.xn)?;
        let dy = image.yn.checked_sub(rel.yn)?;
        if dx & ((1u64 << rel.xe) - 1) != 0 || dy & ((1u64 << rel.ye) - 1) != 0 {
            return None;
        }
        DyadicRect::new(image.square, dx >> rel.xe, xe, dy >> rel.ye, ye)
    }

    /// If `self` and `other` are the two halves of a common parent (in that
    /// order), the parent and the cut.
    pub fn merge_with(&self, other: &DyadicRect) -> Option<(DyadicRect, Label)> {
        if self.square != other.square {
            return None;
        }
        if self.ye == other.ye
            && self.yn == other.yn
            && self.xe == other.xe
            && self.xe > 0
            && self.xn.is_multiple_of(2)
            && other.xn == self.xn + 1
        {
            return Some((
                DyadicRect {
                    xn: self.xn / 2,
                    xe: self.xe - 1,
                    ..*self
                },
                Label::V,
            ));
        }
        if self.xe == other.xe
            && self.xn == other.xn
            && self.ye == other.ye
            && self.ye > 0
            && self.yn.is_multiple_of(2)
            && other.yn == self.yn + 1
        {
            return Some((
                DyadicRect {
                    yn: self.yn / 2,
                    ye: self.ye - 1,
                    ..*self
                },
                Label::H,
            ));
        }
        None
    }

    /// Area as a multiple of `2^-126`.
    pub fn scaled_area(&self) -> u128 {
        1u128 << (2 * MAX_EXP + 2 - self.xe - self.ye)
    }

    fn left(&self) -> u128 {
        (self.xn as u128) << (64 - self.xe)
    }

    fn bottom(&self) -> u128 {
        (self.yn as u128) << (64 - self.ye)
    }

    /// Left edge, bottom edge, right edge, top edge as floats.
    pub fn bounds(&self) -> (f64, f64, f64, f64) {
        let w = (-(self.xe as f64)).exp2();
        let h = (-(self.ye as f64)).exp2();
        let x = self.xn as f64 * w;
        let y = self.yn as f64 * h;
        (x, y, x + w, y + h)
    }
}

impl PartialOrd for DyadicRect {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Square first, then left edge, then bottom edge, then size.
impl Ord for DyadicRect {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.square, self.left(), self.bottom(), self.xe, self.ye).cmp(&(
            other.square,
            other.left(),
            other.bottom(),
            other.xe,
            other.ye,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(xn: u64, xe: u32, yn: u64, ye: u32) -> DyadicRect {
        DyadicRect::new(0, xn, xe, yn, ye).unwrap()
    }

    #[test]
    fn halves_and_merge_are_inverse() {
        let p = r(1, 2, 0, 1);
        for label in [Label::V, Label::H] {
            let (a, b) = p.halves(label).unwrap();
            assert_eq!(a.merge_with(&b), Some((p, label)));
            assert_eq!(b.merge_with(&a), None);
        }
    }

    #[test]
    fn intersection_of_nested_and_disjoint() {
        let left = r(0, 1, 0, 0);
        let bottom = r(0, 0, 0, 1);
        assert_eq!(left.intersect(&bottom), Some(r(0, 1, 0, 1)));
        assert_eq!(left.intersect(&r(1, 1, 0, 0)), None);
    }

    #[test]
    fn place_relative_and_solve_agree() {
        let outer = r(3, 3, 1, 1);
        let rel = r(1, 2, 0, 1);
        let image = outer.place(&rel).unwrap();
        assert!(outer.contains(&image));
        assert_eq!(image.relative_to(&outer), rel);
        assert_eq!(DyadicRect::solve_outer(&image, &rel), Some(outer));
    }

    #[test]
    fn areas_add_up() {
        let (a, b) = DyadicRect::unit(0).halves(Label::V).unwrap();
        assert_eq!(
            a.scaled_area() + b.scaled_area(),
            DyadicRect::unit(0).scaled_area()
        );
    }
}
