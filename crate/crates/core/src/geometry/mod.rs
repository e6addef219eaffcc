//! The order-3 point map `f(a,b,c,D) = (√3·b·i + c) / (2(a − √D))` into the
//! disc of radius `1/√2`, the fundamental domain of `Δ(2,6,6)` there, and the
//! order-2 eigenform coordinates.
//!
//! Membership in the fundamental domain is decided two ways: by the integer
//! inequalities on `(a, b, c)` ([`in_fundamental_domain_exact`]) and by testing
//! the point `f` against the hyperbolic quadrilateral directly
//! ([`in_fundamental_domain_geometric`]). The quadrilateral has vertices `0`,
//! `1/2`, `v₂ = (3 − √3 + i(√3 − 1))/4` and `ζ₆/2`; its outer side is the
//! single geodesic `|z − (3 + √3 i)/4| = 1/2`, with `v₂` as the midpoint where
//! the two halves are paired by the order-2 rotation.

pub mod quadratic;

use num_complex::Complex64;
use thiserror::Error;

use crate::forms::{h3_domain_conditions, Triple};
pub use quadratic::{rational, QuadraticNumber};

/// Float comparisons closer than this to a boundary are escalated to the exact path.
pub const BOUNDARY_TOLERANCE: f64 = 1e-9;

const SQRT3: f64 = 1.732_050_807_568_877_2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("f(a,b,c,D) is defined for a < 0 on 2a² − 3b² − c² = 2D; {0}")]
    DomainError(String),
    #[error("point ({x}, {y}) lies within {BOUNDARY_TOLERANCE:e} of a boundary of the Δ(2,6,6) domain and has no exact representation")]
    BoundaryUndecidable { x: String, y: String },
    #[error("b ± √D vanishes for b = {b}, D = {d}")]
    DegenerateDenominator { b: i64, d: i64 },
}

/// The `Δ(2,6,6)` triangle `0, v₂, ζ₆/2` and its ambient disc.
pub struct TriangleDomain;

impl TriangleDomain {
    pub const DISC_RADIUS: f64 = std::f64::consts::FRAC_1_SQRT_2;
    /// `v₂ = f(1/2)`, angle π/2.
    pub const V2: (f64, f64) = ((3.0 - SQRT3) / 4.0, (SQRT3 - 1.0) / 4.0);
    /// `v₆ = f(1) = ζ₆/2`, angle π/6.
    pub const V6: (f64, f64) = (0.25, SQRT3 / 4.0);
    /// `v₆′ = f(∞) = 0`, angle π/6.
    pub const ORIGIN: (f64, f64) = (0.0, 0.0);
    /// Centre and radius of the outer geodesic through `1/2`, `v₂` and `ζ₆/2`;
    /// orthogonal to the boundary since `|centre|² = 3/4 = 1/2 + 1/4`.
    pub const ARC_CENTER: (f64, f64) = (0.75, SQRT3 / 4.0);
    pub const ARC_RADIUS: f64 = 0.5;

    /// `v₂` and `ζ₆/2` as `(re, im/√3)` over `ℚ(√3)`.
    pub fn exact_vertices() -> [(QuadraticNumber, QuadraticNumber); 2] {
        let q = |p: (i64, i64), s: (i64, i64)| {
            QuadraticNumber::new(rational(p.0, p.1), rational(s.0, s.1), 3)
        };
        // im(v₂)/√3 = (√3 − 1)/(4√3) = 1/4 − √3/12
        [
            (q((3, 4), (-1, 4)), q((1, 4), (-1, 12))),
            (q((1, 4), (0, 1)), q((1, 4), (0, 1))),
        ]
    }
}

/// A point `re + i·√3·im_over_sqrt3` with both coordinates in `ℚ(√D)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactDiscPoint {
    pub re: QuadraticNumber,
    pub im_over_sqrt3: QuadraticNumber,
    /// `(a, b, c, D)` when the point is `f(a, b, c, D)`.
    pub source: Option<(i64, i64, i64, i64)>,
    /// Float evaluation, computed independently of the exact coordinates.
    pub shadow: (f64, f64),
}

impl ExactDiscPoint {
    pub fn from_exact(re: QuadraticNumber, im_over_sqrt3: QuadraticNumber) -> Self {
        let shadow = (re.to_f64(), SQRT3 * im_over_sqrt3.to_f64());
        ExactDiscPoint {
            re,
            im_over_sqrt3,
            source: None,
            shadow,
        }
    }

    pub fn origin(radicand: i64) -> Self {
        Self::from_exact(
            QuadraticNumber::zero(radicand),
            QuadraticNumber::zero(radicand),
        )
    }

    pub fn is_origin(&self) -> bool {
        self.re.is_zero() && self.im_over_sqrt3.is_zero()
    }

    /// `|f|²` exactly.
    pub fn norm_sqr(&self) -> QuadraticNumber {
        let three = QuadraticNumber::from_ints(3, 0, self.re.radicand());
        &(&self.re * &self.re) + &(&three * &(&self.im_over_sqrt3 * &self.im_over_sqrt3))
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.shadow.0, self.shadow.1)
    }

    /// `|f|² = (a + √D) / (2(a − √D))` for points built by [`f_map`].
    pub fn norm_identity_holds(&self) -> Option<bool> {
        let (a, _, _, d) = self.source?;
        let num = QuadraticNumber::from_ints(a, 1, d);
        let den = QuadraticNumber::from_ints(2 * a, -2, d);
        Some(self.norm_sqr() == &num * &den.inverse()?)
    }
}

/// `f(a, b, c, D)`, rationalised as `(c + √3 b i)(a + √D) / (2(a² − D))`.
pub fn f_map(t: &Triple) -> Result<ExactDiscPoint, GeometryError> {
    let (a, b, c, d) = (t.a, t.b, t.c, t.d());
    if a >= 0 {
        return Err(GeometryError::DomainError(format!(
            "a = {a} is not negative"
        )));
    }
    if 2 * a * a - 3 * b * b - c * c != 2 * d {
        return Err(GeometryError::DomainError(format!(
            "2a² − 3b² − c² ≠ 2D for ({a}, {b}, {c}), D = {d}"
        )));
    }
    // a² > D as D is not a square
    let den = 2 * (a * a - d);
    let re = QuadraticNumber::new(rational(c * a, den), rational(c, den), d);
    let im = QuadraticNumber::new(rational(b * a, den), rational(b, den), d);
    let scale = 2.0 * (a as f64 - (d as f64).sqrt());
    let point = ExactDiscPoint {
        re,
        im_over_sqrt3: im,
        source: Some((a, b, c, d)),
        shadow: (c as f64 / scale, SQRT3 * b as f64 / scale),
    };
    let half = QuadraticNumber::from_rational(rational(1, 2), d);
    if point.norm_sqr() >= half {
        return Err(GeometryError::DomainError(format!(
            "|f|² ≥ 1/2 for ({a}, {b}, {c}), D = {d}"
        )));
    }
    Ok(point)
}

/// The integer form of the domain conditions, `(ii) ∧ (iii) ∧ (iv)`.
pub fn in_fundamental_domain_exact(t: &Triple) -> bool {
    h3_domain_conditions(t.d(), t.a, t.b, t.c)
}

/// Outcome of the geometric domain test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeometricVerdict {
    pub inside: bool,
    /// The float path was within tolerance of a boundary and the exact path decided.
    pub escalated: bool,
}

/// Signed distances to the domain boundaries: each is positive strictly inside.
struct Margins<T> {
    disc: T,       // 1/4 − |f|²
    lower: T,      // Im f            (arg f ≥ 0)
    upper: T,      // √3 Re f − Im f  (arg f < π/3)
    arc: T,        // |f − (3+√3i)/4|² − 1/4
    half_angle: T, // Re f/√3 − Im f  (arg f < π/6, picks the kept half of the arc)
}

impl<T: Copy> Margins<T> {
    fn decide(&self, pos: impl Fn(T) -> bool, zero: impl Fn(T) -> bool) -> bool {
        let nonneg = |x: T| pos(x) || zero(x);
        nonneg(self.disc)
            && nonneg(self.lower)
            && pos(self.upper)
            && (pos(self.arc) || (zero(self.arc) && pos(self.half_angle)))
    }
}

fn float_margins(x: f64, y: f64) -> Margins<f64> {
    let (cx, cy) = TriangleDomain::ARC_CENTER;
    Margins {
        disc: 0.25 - (x * x + y * y),
        lower: y,
        upper: SQRT3 * x - y,
        arc: (x - cx).powi(2) + (y - cy).powi(2) - 0.25,
        half_angle: x / SQRT3 - y,
    }
}

fn exact_margins(p: &ExactDiscPoint) -> Margins<i32> {
    let d = p.re.radicand();
    let k = |n: i64, m: i64| QuadraticNumber::from_rational(rational(n, m), d);
    let (re, im) = (&p.re, &p.im_over_sqrt3);
    let dx = re - &k(3, 4);
    let dy = im - &k(1, 4);
    // (Re f − 3/4)² + (Im f − √3/4)² = (re − 3/4)² + 3(im − 1/4)²
    let arc = &(&(&dx * &dx) + &(&k(3, 1) * &(&dy * &dy))) - &k(1, 4);
    Margins {
        disc: (&k(1, 4) - &p.norm_sqr()).signum(),
        lower: im.signum(),
        upper: (re - im).signum(),
        arc: arc.signum(),
        half_angle: (re - &(&k(3, 1) * im)).signum(),
    }
}

fn is_vertex_inside_by_convention(p: &ExactDiscPoint) -> bool {
    let d = p.re.radicand();
    let quarter = QuadraticNumber::from_rational(rational(1, 4), d);
    p.is_origin() || (p.re == quarter && p.im_over_sqrt3 == quarter)
}

/// Float path on raw coordinates; `Err` when a boundary is within tolerance.
pub fn in_fundamental_domain_float(x: f64, y: f64) -> Result<bool, GeometryError> {
    let m = float_margins(x, y);
    let near = [m.disc, m.lower, m.upper, m.arc, m.half_angle]
        .iter()
        .any(|v| v.abs() < BOUNDARY_TOLERANCE);
    if near || !x.is_finite() || !y.is_finite() {
        return Err(GeometryError::BoundaryUndecidable {
            x: x.to_string(),
            y: y.to_string(),
        });
    }
    // half_angle only matters on the arc, which is excluded above
    Ok(m.decide(|v| v > 0.0, |v| v == 0.0))
}

pub fn classify_geometric(p: &ExactDiscPoint) -> GeometricVerdict {
    match in_fundamental_domain_float(p.shadow.0, p.shadow.1) {
        Ok(inside) => GeometricVerdict {
            inside,
            escalated: false,
        },
        Err(_) => {
            let inside =
                is_vertex_inside_by_convention(p) || exact_margins(p).decide(|s| s > 0, |s| s == 0);
            GeometricVerdict {
                inside,
                escalated: true,
            }
        }
    }
}

/// Region test for `f` against the quadrilateral: `|f|² ≤ 1/4`, `0 ≤ arg f < π/3`,
/// outside the open disc bounded by the outer geodesic, and on that geodesic
/// only the half with `arg f < π/6`. The vertices `0` and `ζ₆/2` count as
/// inside; `v₂` as outside.
pub fn in_fundamental_domain_geometric(p: &ExactDiscPoint) -> Result<bool, GeometryError> {
    Ok(classify_geometric(p).inside)
}

/// First coordinates of the eigenforms `ω(a,b,c)^±`,
/// `((−1 + i)/2) · (a − c i) / (b ± √D)`.
pub fn order2_eigenform_coords(t: &Triple) -> Result<(Complex64, Complex64), GeometryError> {
    let (a, b, c, d) = (t.a, t.b, t.c, t.d());
    if a * a + b * b + c * c != d {
        return Err(GeometryError::DomainError(format!(
            "a² + b² + c² ≠ D for ({a}, {b}, {c}), D = {d}"
        )));
    }
    if b * b == d {
        return Err(GeometryError::DegenerateDenominator { b, d });
    }
    let root = (d as f64).sqrt();
    let lead = Complex64::new(-0.5, 0.5) * Complex64::new(a as f64, -(c as f64));
    let plus = lead / (b as f64 + root);
    let minus = lead / (b as f64 - root);
    if !plus.is_finite() || !minus.is_finite() {
        return Err(GeometryError::DegenerateDenominator { b, d });
    }
    Ok((plus, minus))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discriminant::validate;
    use crate::forms::{enumerate_h3, FormKind};

    fn h3(a: i64, b: i64, c: i64, d: i64) -> Triple {
        Triple::new(FormKind::H3, validate(d).unwrap(), a, b, c)
    }

    fn h2(a: i64, b: i64, c: i64, d: i64) -> Triple {
        Triple::new(FormKind::H2, validate(d).unwrap(), a, b, c)
    }

    #[test]
    fn vertices_consistent() {
        let [v2, v6] = TriangleDomain::exact_vertices();
        for ((re, im), (x, y)) in [(v2, TriangleDomain::V2), (v6, TriangleDomain::V6)] {
            assert!((re.to_f64() - x).abs() < 1e-14);
            assert!((SQRT3 * im.to_f64() - y).abs() < 1e-14);
        }
        let (cx, cy) = TriangleDomain::ARC_CENTER;
        for (x, y) in [TriangleDomain::V2, TriangleDomain::V6, (0.5, 0.0)] {
            assert!(((x - cx).powi(2) + (y - cy).powi(2) - 0.25).abs() < 1e-14);
        }
    }

    #[test]
    fn d12_boundary_point_is_v2() {
        let p = f_map(&h3(-6, -2, -6, 12)).unwrap();
        // (36 − 6√12)/48 = 3/4 − √12/8
        assert_eq!(
            p.re,
            QuadraticNumber::new(rational(3, 4), rational(-1, 8), 12)
        );
        assert_eq!(
            p.im_over_sqrt3,
            QuadraticNumber::new(rational(1, 4), rational(-1, 24), 12)
        );
        let (x, y) = TriangleDomain::V2;
        assert!((p.shadow.0 - x).abs() < 1e-15 && (p.shadow.1 - y).abs() < 1e-15);
        assert!(!in_fundamental_domain_exact(&h3(-6, -2, -6, 12)));
        let v = classify_geometric(&p);
        assert!(!v.inside && v.escalated);
    }

    #[test]
    fn d17_points() {
        let p = f_map(&h3(-5, 0, -4, 17)).unwrap();
        let expect = (5.0 - 17f64.sqrt()) / 4.0;
        assert!((p.shadow.0 - expect).abs() < 1e-15 && p.shadow.1 == 0.0);
        assert!((p.re.to_f64() - expect).abs() < 1e-15);
        assert!(in_fundamental_domain_exact(&h3(-5, 0, -4, 17)));
        let v = classify_geometric(&p);
        // Im f = 0 is a boundary: decided exactly
        assert!(v.inside && v.escalated);

        let t = h3(-11, -2, -14, 17);
        let q = f_map(&t).unwrap();
        assert!((q.shadow.0 - 0.462_867_890_583_426_7).abs() < 1e-12);
        assert!((q.shadow.1 - 0.114_530_100_526_103_85).abs() < 1e-12);
        assert!((q.re.to_f64() - q.shadow.0).abs() < 1e-12);
        assert!((SQRT3 * q.im_over_sqrt3.to_f64() - q.shadow.1).abs() < 1e-12);
        assert_eq!(4 * t.a - 3 * t.b - 3 * t.c, 4);
        assert!(!in_fundamental_domain_exact(&t));
        assert!(!in_fundamental_domain_geometric(&q).unwrap());
    }

    #[test]
    fn f_map_errors() {
        assert!(matches!(
            f_map(&h3(5, 0, -4, 17)),
            Err(GeometryError::DomainError(_))
        ));
        assert!(matches!(
            f_map(&h3(-5, 1, -4, 17)),
            Err(GeometryError::DomainError(_))
        ));
    }

    #[test]
    fn origin_and_v6_by_convention() {
        let o = ExactDiscPoint::origin(17);
        assert!(in_fundamental_domain_geometric(&o).unwrap());
        let q = QuadraticNumber::from_rational(rational(1, 4), 17);
        let v6 = ExactDiscPoint::from_exact(q.clone(), q);
        assert!(in_fundamental_domain_geometric(&v6).unwrap());
        assert!(in_fundamental_domain_float(0.0, 0.0).is_err());
    }

    #[test]
    fn float_path_flags_boundaries() {
        assert!(in_fundamental_domain_float(0.2, 0.05).unwrap());
        assert!(!in_fundamental_domain_float(0.2, -0.05).unwrap());
        assert!(!in_fundamental_domain_float(0.6, 0.05).unwrap());
        assert!(matches!(
            in_fundamental_domain_float(0.2, 1e-12),
            Err(GeometryError::BoundaryUndecidable { .. })
        ));
    }

    #[test]
    fn norm_identity_and_half_disc_for_h3() {
        for n in [8, 17, 33, 200, 1001, 2828] {
            for t in enumerate_h3(&validate(n).unwrap()) {
                let p = f_map(&t).unwrap();
                assert_eq!(p.norm_identity_holds(), Some(true));
                let quarter = QuadraticNumber::from_rational(rational(1, 4), n);
                assert!(p.norm_sqr() < quarter);
            }
        }
    }

    #[test]
    fn angle_identities() {
        let d = validate(2828).unwrap();
        let (_, hi) = d.isqrt_bounds();
        for t in crate::forms::h3_quadric_points(&d, -hi - 1) {
            let p = f_map(&t).unwrap();
            assert_eq!(p.im_over_sqrt3.signum() >= 0, t.b <= 0, "{t}");
            if t.b <= 0 {
                assert_eq!((&p.re - &p.im_over_sqrt3).signum() > 0, t.c < t.b, "{t}");
            }
        }
    }

    #[test]
    fn eigenform_coords() {
        let (plus, minus) = order2_eigenform_coords(&h2(2, 2, 0, 8)).unwrap();
        let expect = 1.0 / (2.0 + 8f64.sqrt());
        assert!((plus - Complex64::new(-expect, expect)).norm() < 1e-15);
        // the eigenvector ((1 − i)/(−2 − √8), 1) has the same first coordinate
        let closed_form = Complex64::new(1.0, -1.0) / (-2.0 - 8f64.sqrt());
        assert!((plus - closed_form).norm() < 1e-15);
        assert!(minus.is_finite());

        let (plus, _) = order2_eigenform_coords(&h2(4, 2, 0, 20)).unwrap();
        let expect = 2.0 / (2.0 + 20f64.sqrt());
        assert!((plus - Complex64::new(-expect, expect)).norm() < 1e-15);
        assert!((expect - 0.309_016_994_374_947_4).abs() < 1e-12);

        assert!(matches!(
            order2_eigenform_coords(&h2(2, 2, 1, 8)),
            Err(GeometryError::DomainError(_))
        ));
    }

    #[test]
    fn eigenform_sign_symmetry() {
        let d = validate(2828).unwrap();
        for t in crate::forms::enumerate_h2(&d) {
            let (p, m) = order2_eigenform_coords(&t).unwrap();
            let neg = Triple::new(FormKind::H2, d, -t.a, -t.b, -t.c);
            let (np, nm) = order2_eigenform_coords(&neg).unwrap();
            assert!((p - nm).norm() < 1e-12 && (m - np).norm() < 1e-12);
        }
    }
}
