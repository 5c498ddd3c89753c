//! Weierstrass curves `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`, their
//! rational points, and the classification of vertical lines `x = l` by the
//! number of rational points they meet.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Element, FieldSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("singular curve: discriminant is zero")]
    Singular,
    #[error("coefficient {0} is not an element of the field")]
    ForeignCoefficient(&'static str),
}

/// A point of the projective curve: the point at infinity or an affine point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurvePoint {
    Infinity,
    Affine { x: Element, y: Element },
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Infinity => write!(f, "inf"),
            CurvePoint::Affine { x, y } => write!(f, "({x},{y})"),
        }
    }
}

/// A vertical line `x = l`, or the line at infinity. Finite lines sort first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Line {
    Finite(Element),
    Infinity,
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Line::Finite(l) => write!(f, "{l}"),
            Line::Infinity => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "lowercase")]
pub enum LineCase {
    /// No rational point on the line.
    Case1,
    /// Exactly one rational point, necessarily of order 2.
    Case2 { point: CurvePoint },
    /// Two rational points `p` and `q = -p`.
    Case3 { p: CurvePoint, q: CurvePoint },
}

impl LineCase {
    pub fn number(&self) -> u8 {
        match self {
            LineCase::Case1 => 1,
            LineCase::Case2 { .. } => 2,
            LineCase::Case3 { .. } => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LineClass {
    pub line: Line,
    #[serde(flatten)]
    pub case: LineCase,
}

/// The classification of every line, in line order (finite lines
/// lexicographically, then infinity).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationSummary {
    pub lines: Vec<LineClass>,
}

impl ClassificationSummary {
    pub fn new(lines: Vec<LineClass>) -> Self {
        ClassificationSummary { lines }
    }

    /// A summary with the given numbers of lines per case, labelled by
    /// synthetic prime-field elements. Used where no concrete curve exists.
    pub fn synthetic(case1: usize, case2: usize, case3: usize) -> Self {
        let label = |n: usize| Element::from_raw(vec![n as u32]);
        let mut lines = Vec::new();
        let mut next = 0;
        for _ in 0..case1 {
            lines.push(LineClass {
                line: Line::Finite(label(next)),
                case: LineCase::Case1,
            });
            next += 1;
        }
        for _ in 0..case2 {
            let x = label(next);
            lines.push(LineClass {
                line: Line::Finite(x.clone()),
                case: LineCase::Case2 {
                    point: CurvePoint::Affine { x, y: label(0) },
                },
            });
            next += 1;
        }
        for _ in 0..case3 {
            let x = label(next);
            lines.push(LineClass {
                line: Line::Finite(x.clone()),
                case: LineCase::Case3 {
                    p: CurvePoint::Affine { x: x.clone(), y: label(1) },
                    q: CurvePoint::Affine { x, y: label(2) },
                },
            });
            next += 1;
        }
        ClassificationSummary { lines }
    }

    pub fn case1_lines(&self) -> Vec<&Line> {
        self.lines
            .iter()
            .filter(|c| c.case == LineCase::Case1)
            .map(|c| &c.line)
            .collect()
    }

    pub fn two_torsion(&self) -> Vec<&CurvePoint> {
        self.lines
            .iter()
            .filter_map(|c| match &c.case {
                LineCase::Case2 { point } => Some(point),
                _ => None,
            })
            .collect()
    }

    pub fn pairs(&self) -> Vec<(&CurvePoint, &CurvePoint)> {
        self.lines
            .iter()
            .filter_map(|c| match &c.case {
                LineCase::Case3 { p, q } => Some((p, q)),
                _ => None,
            })
            .collect()
    }

    /// Number of rational points of the projective curve implied by the
    /// classification: one per Case2 line, two per Case3 line.
    pub fn point_count(&self) -> usize {
        self.two_torsion().len() + 2 * self.pairs().len()
    }

    pub fn find(&self, line: &Line) -> Option<&LineClass> {
        self.lines.iter().find(|c| &c.line == line)
    }
}

/// Curve coefficients as coefficient vectors, `{"a1": [..], .., "a6": [..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveDescriptor {
    pub a1: Element,
    pub a2: Element,
    pub a3: Element,
    pub a4: Element,
    pub a6: Element,
}

#[derive(Clone, Debug)]
pub struct WeierstrassCurve {
    field: Arc<FieldSpec>,
    a1: Element,
    a2: Element,
    a3: Element,
    a4: Element,
    a6: Element,
}

/// Standard Weierstrass discriminant via `b2, b4, b6, b8`.
pub fn discriminant(
    f: &FieldSpec,
    [a1, a2, a3, a4, a6]: [&Element; 5],
) -> Element {
    let c = |n: i64| f.from_int(n);
    let m = |a: &Element, b: &Element| f.mul(a, b);
    let b2 = f.add(&m(a1, a1), &m(&c(4), a2));
    let b4 = f.add(&m(&c(2), a4), &m(a1, a3));
    let b6 = f.add(&m(a3, a3), &m(&c(4), a6));
    // b8 = a1^2 a6 + 4 a2 a6 - a1 a3 a4 + a2 a3^2 - a4^2
    let mut b8 = m(&m(a1, a1), a6);
    b8 = f.add(&b8, &m(&c(4), &m(a2, a6)));
    b8 = f.sub(&b8, &m(a1, &m(a3, a4)));
    b8 = f.add(&b8, &m(a2, &m(a3, a3)));
    b8 = f.sub(&b8, &m(a4, a4));
    // -b2^2 b8 - 8 b4^3 - 27 b6^2 + 9 b2 b4 b6
    let mut d = f.neg(&m(&m(&b2, &b2), &b8));
    d = f.sub(&d, &m(&c(8), &m(&b4, &m(&b4, &b4))));
    d = f.sub(&d, &m(&c(27), &m(&b6, &b6)));
    f.add(&d, &m(&c(9), &m(&b2, &m(&b4, &b6))))
}

impl WeierstrassCurve {
    /// Builds the curve, rejecting coefficients outside the field and
    /// singular curves.
    pub fn new(field: Arc<FieldSpec>, coeffs: [Element; 5]) -> Result<Self, CurveError> {
        const NAMES: [&str; 5] = ["a1", "a2", "a3", "a4", "a6"];
        for (c, name) in coeffs.iter().zip(NAMES) {
            if !field.contains(c) {
                return Err(CurveError::ForeignCoefficient(name));
            }
        }
        let [a1, a2, a3, a4, a6] = coeffs;
        let curve = WeierstrassCurve { field, a1, a2, a3, a4, a6 };
        if curve.discriminant().is_zero() {
            return Err(CurveError::Singular);
        }
        Ok(curve)
    }

    /// Convenience constructor from prime-field integers.
    pub fn from_ints(field: Arc<FieldSpec>, a: [i64; 5]) -> Result<Self, CurveError> {
        let coeffs = a.map(|n| field.from_int(n));
        WeierstrassCurve::new(field, coeffs)
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn descriptor(&self) -> CurveDescriptor {
        CurveDescriptor {
            a1: self.a1.clone(),
            a2: self.a2.clone(),
            a3: self.a3.clone(),
            a4: self.a4.clone(),
            a6: self.a6.clone(),
        }
    }

    pub fn discriminant(&self) -> Element {
        discriminant(&self.field, [&self.a1, &self.a2, &self.a3, &self.a4, &self.a6])
    }

    /// `F(x, y) = y^2 + a1 xy + a3 y - x^3 - a2 x^2 - a4 x - a6`.
    pub fn evaluate(&self, x: &Element, y: &Element) -> Element {
        let f = &*self.field;
        let lhs = f.mul(y, &f.add(y, &f.add(&f.mul(&self.a1, x), &self.a3)));
        f.sub(&lhs, &self.cubic(x))
    }

    /// `x^3 + a2 x^2 + a4 x + a6`.
    fn cubic(&self, x: &Element) -> Element {
        let f = &*self.field;
        let mut acc = f.add(x, &self.a2);
        acc = f.add(&f.mul(&acc, x), &self.a4);
        f.add(&f.mul(&acc, x), &self.a6)
    }

    pub fn contains(&self, p: &CurvePoint) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => self.evaluate(x, y).is_zero(),
        }
    }

    /// `-(x, y) = (x, -y - a1 x - a3)`.
    pub fn negate(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => {
                let f = &*self.field;
                let shift = f.add(&f.mul(&self.a1, x), &self.a3);
                CurvePoint::Affine {
                    x: x.clone(),
                    y: f.neg(&f.add(y, &shift)),
                }
            }
        }
    }

    pub fn is_two_torsion(&self, p: &CurvePoint) -> bool {
        self.negate(p) == *p
    }

    /// Points on the line `x = l`, ascending in `y`.
    fn points_over(&self, x: &Element) -> Vec<CurvePoint> {
        let f = &*self.field;
        let b = f.add(&f.mul(&self.a1, x), &self.a3);
        let c = f.neg(&self.cubic(x));
        f.solve_monic_quadratic(&b, &c)
            .into_iter()
            .map(|y| CurvePoint::Affine { x: x.clone(), y })
            .collect()
    }

    /// All rational points, infinity first, then ascending `(x, y)`.
    pub fn enumerate_points(&self) -> Vec<CurvePoint> {
        let mut points = vec![CurvePoint::Infinity];
        for x in self.field.elements() {
            points.extend(self.points_over(&x));
        }
        points
    }

    pub fn classify_line(&self, line: &Line) -> LineClass {
        let case = match line {
            Line::Infinity => LineCase::Case2 {
                point: CurvePoint::Infinity,
            },
            Line::Finite(l) => {
                let mut pts = self.points_over(l);
                match pts.len() {
                    0 => LineCase::Case1,
                    1 => LineCase::Case2 {
                        point: pts.pop().unwrap(),
                    },
                    _ => {
                        let p = pts.swap_remove(0);
                        let q = self.negate(&p);
                        LineCase::Case3 { p, q }
                    }
                }
            }
        };
        LineClass {
            line: line.clone(),
            case,
        }
    }

    /// Classifies all `q + 1` lines.
    pub fn classify_all(&self) -> ClassificationSummary {
        let lines = self
            .field
            .elements()
            .into_iter()
            .map(Line::Finite)
            .chain(std::iter::once(Line::Infinity))
            .map(|l| self.classify_line(&l))
            .collect();
        ClassificationSummary { lines }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn curve(p: u32, a: [i64; 5]) -> WeierstrassCurve {
        WeierstrassCurve::from_ints(Arc::new(make_field(p, 1).unwrap()), a).unwrap()
    }

    fn pt(c: &WeierstrassCurve, x: i64, y: i64) -> CurvePoint {
        CurvePoint::Affine {
            x: c.field().from_int(x),
            y: c.field().from_int(y),
        }
    }

    #[test]
    fn singular_curves_rejected() {
        let f5 = Arc::new(make_field(5, 1).unwrap());
        assert_eq!(
            WeierstrassCurve::from_ints(f5.clone(), [0, 0, 0, 0, 0]).unwrap_err(),
            CurveError::Singular
        );
        // a1 = a3 = 0 is always singular in characteristic 2.
        let f2 = Arc::new(make_field(2, 1).unwrap());
        assert!(WeierstrassCurve::from_ints(f2, [0, 0, 0, 1, 0]).is_err());
        assert!(!curve(5, [0, 0, 0, -1, 0]).discriminant().is_zero());
        assert!(!curve(5, [0, 0, 0, 1, 1]).discriminant().is_zero());
    }

    #[test]
    fn evaluate_and_negate() {
        let c = curve(5, [0, 0, 0, -1, 0]);
        let f = c.field().clone();
        assert!(c.evaluate(&f.from_int(2), &f.from_int(1)).is_zero());
        assert_eq!(c.negate(&pt(&c, 2, 1)), pt(&c, 2, 4));
        assert_eq!(c.negate(&CurvePoint::Infinity), CurvePoint::Infinity);
        assert!(c.is_two_torsion(&pt(&c, 0, 0)));
        assert!(!c.is_two_torsion(&pt(&c, 2, 1)));
        assert!(c.is_two_torsion(&CurvePoint::Infinity));
    }

    #[test]
    fn classification_examples() {
        let c3 = curve(3, [0, 0, 0, -1, 0]);
        let f3 = c3.field().clone();
        assert_eq!(
            c3.classify_line(&Line::Finite(f3.zero())).case,
            LineCase::Case2 { point: pt(&c3, 0, 0) }
        );
        let c = curve(5, [0, 0, 0, 1, 1]);
        assert_eq!(
            c.classify_line(&Line::Finite(c.field().from_int(1))).case,
            LineCase::Case1
        );
        let c5 = curve(5, [0, 0, 0, -1, 0]);
        assert_eq!(
            c5.classify_line(&Line::Finite(c5.field().from_int(2))).case,
            LineCase::Case3 { p: pt(&c5, 2, 1), q: pt(&c5, 2, 4) }
        );
        assert_eq!(
            c5.classify_line(&Line::Infinity).case,
            LineCase::Case2 { point: CurvePoint::Infinity }
        );
    }

    #[test]
    fn synthetic_summary_counts() {
        let s = ClassificationSummary::synthetic(2, 1, 3);
        assert_eq!(s.lines.len(), 6);
        assert_eq!(s.case1_lines().len(), 2);
        assert_eq!(s.point_count(), 7);
    }

    #[test]
    fn line_order_puts_infinity_last() {
        let c = curve(5, [0, 0, 0, -1, 0]);
        let s = c.classify_all();
        assert_eq!(s.lines.len(), 6);
        assert_eq!(s.lines.last().unwrap().line, Line::Infinity);
        let finite: Vec<_> = s.lines.iter().map(|l| l.line.clone()).collect();
        let mut sorted = finite.clone();
        sorted.sort();
        assert_eq!(finite, sorted);
    }
}
