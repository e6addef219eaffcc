//! Period matrices of the two Prym families, their polarisations, and the
//! analytic/rational representation pairs of real multiplication.
//!
//! This is a verification layer: the identities checked here certify the
//! triples produced by [`crate::forms`]. Matrices are fixed-size arrays;
//! rational representations are exact, analytic ones are `f64` complex.
//!
//! Tolerances: construction [`CONSTRUCTION_TOL`], algebraic identities
//! [`IDENTITY_TOL`], acceptance gates [`ACCEPTANCE_TOL`].

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::forms::Triple;
use crate::geometry::order2_eigenform_coords;

pub const CONSTRUCTION_TOL: f64 = 1e-15;
pub const IDENTITY_TOL: f64 = 1e-12;
pub const ACCEPTANCE_TOL: f64 = 1e-10;

pub type CMat2 = [[Complex64; 2]; 2];
pub type CMat24 = [[Complex64; 4]; 2];
pub type QMat4 = [[Rational64; 4]; 4];
pub type IMat4 = [[i64; 4]; 4];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PeriodsError {
    #[error("Π^Y(f) requires |f|² < 1/2, got |f|² = {0}")]
    OutOfDisc(String),
    #[error("({a}, {b}, {c}) violates {form} for D = {d}")]
    FormViolation {
        a: i64,
        b: i64,
        c: i64,
        d: i64,
        form: &'static str,
    },
    #[error("real multiplication by O_D needs D ≡ 0 or 1 mod 4, got D = {0}")]
    UnsupportedResidue(i64),
}

/// `ζ₆ = e^{iπ/3}`.
pub fn zeta6() -> Complex64 {
    Complex64::new(0.5, 0.866_025_403_784_438_6)
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn q(n: i64) -> Rational64 {
    Rational64::from_integer(n)
}

fn half(n: i64) -> Rational64 {
    Rational64::new(n, 2)
}

/// Polarisation of `P(X_t)`.
pub const POLARISATION_X: IMat4 = [[0, 0, 1, 0], [0, 0, 0, 2], [-1, 0, 0, 0], [0, -2, 0, 0]];
/// Polarisation of `P(Y_t)`.
pub const POLARISATION_Y: IMat4 = [[0, 2, 0, 0], [-2, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    X,
    Y { f: Complex64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodMatrix {
    pub entries: CMat24,
    pub polarisation: IMat4,
    pub family: Family,
}

/// The constant Prym period matrix of the X family.
pub fn build_pi_x() -> PeriodMatrix {
    let one = c(1.0, 0.0);
    let zero = c(0.0, 0.0);
    PeriodMatrix {
        entries: [
            [c(-0.5, -0.5), one, one, zero],
            [one, c(-1.0, -1.0), zero, c(2.0, 0.0)],
        ],
        polarisation: POLARISATION_X,
        family: Family::X,
    }
}

/// `Π^Y(f) = [[2f, 2ζ₆²f, 1, ζ₆⁻¹], [2, 2ζ₆⁻², 2f, 2ζ₆f]]`.
pub fn build_pi_y(f: Complex64) -> Result<PeriodMatrix, PeriodsError> {
    // strict; f = f(a,b,c,D) never reaches the boundary
    if f.norm_sqr().is_nan() || f.norm_sqr() >= 0.5 {
        return Err(PeriodsError::OutOfDisc(f.norm_sqr().to_string()));
    }
    let z = zeta6();
    let z_inv = z.conj();
    let two = c(2.0, 0.0);
    Ok(PeriodMatrix {
        entries: [
            [two * f, two * z * z * f, c(1.0, 0.0), z_inv],
            [two, two * z_inv * z_inv, two * f, two * z * f],
        ],
        polarisation: POLARISATION_Y,
        family: Family::Y { f },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepresentationKind {
    /// `√D` in the X family.
    XSqrtD,
    /// The generator `T` of `O_D` in the X family.
    XT,
    YSqrtD,
    YT,
}

impl RepresentationKind {
    pub fn is_generator(self) -> bool {
        matches!(self, RepresentationKind::XT | RepresentationKind::YT)
    }

    fn family_is_x(self) -> bool {
        matches!(self, RepresentationKind::XSqrtD | RepresentationKind::XT)
    }
}

/// An endomorphism given by its analytic (2×2 complex) and rational (4×4)
/// representations, `A·Π = Π·R`.
#[derive(Debug, Clone, PartialEq)]
pub struct RepresentationPair {
    pub analytic: CMat2,
    pub rational: QMat4,
    pub kind: RepresentationKind,
    pub triple: (i64, i64, i64),
    pub d: i64,
}

impl RepresentationPair {
    pub fn is_integral(&self) -> bool {
        self.rational.iter().flatten().all(Rational64::is_integer)
    }

    /// Representation of `T = √D/2` (`D ≡ 0 mod 4`) or `T = (1 + √D)/2`
    /// (`D ≡ 1 mod 4`) from that of `√D`.
    pub fn to_generator_t(&self) -> Result<RepresentationPair, PeriodsError> {
        assert!(
            !self.kind.is_generator(),
            "already a generator representation"
        );
        let shift = match self.d.rem_euclid(4) {
            0 => 0,
            1 => 1,
            _ => return Err(PeriodsError::UnsupportedResidue(self.d)),
        };
        let mut analytic = self.analytic;
        let mut rational = self.rational;
        for (i, row) in analytic.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                let id = if i == j { shift as f64 } else { 0.0 };
                *x = (*x + id) / 2.0;
            }
        }
        for (i, row) in rational.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                let id = if i == j { q(shift) } else { q(0) };
                *x = (*x + id) / q(2);
            }
        }
        let kind = if self.kind.family_is_x() {
            RepresentationKind::XT
        } else {
            RepresentationKind::YT
        };
        Ok(RepresentationPair {
            analytic,
            rational,
            kind,
            triple: self.triple,
            d: self.d,
        })
    }

    /// `max |A² − D·Id| / D`, for the `√D` kinds.
    pub fn analytic_square_residual(&self) -> f64 {
        let sq = cmat2_mul(&self.analytic, &self.analytic);
        let mut worst: f64 = 0.0;
        for (i, row) in sq.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let target = if i == j { self.d as f64 } else { 0.0 };
                worst = worst.max((x - target).norm());
            }
        }
        worst / self.d as f64
    }

    /// `R² = D·Id` exactly, for the `√D` kinds.
    pub fn rational_square_is_scalar(&self) -> bool {
        let sq = qmat4_mul(&self.rational, &self.rational);
        (0..4).all(|i| (0..4).all(|j| sq[i][j] == if i == j { q(self.d) } else { q(0) }))
    }

    /// Fixed by the Rosati involution: `E⁻¹·Rᵀ·E = R`.
    pub fn is_self_adjoint(&self, polarisation: &IMat4) -> bool {
        rosati(&self.rational, polarisation) == self.rational
    }
}

/// Rosati image `E⁻¹·Rᵀ·E`.
pub fn rosati(r: &QMat4, polarisation: &IMat4) -> QMat4 {
    let e = imat_to_q(polarisation);
    let e_inv = qmat4_inverse(&e).expect("polarisation is non-degenerate");
    qmat4_mul(&qmat4_mul(&e_inv, &transpose(r)), &e)
}

/// `A_√D(a,b,c)` and `R_√D(a,b,c)` on `P(X_t)`, for `a² + b² + c² = D`.
///
/// `D` is taken formally; it need not be a valid discriminant.
pub fn x_representation(
    a: i64,
    b: i64,
    c3: i64,
    d: i64,
) -> Result<RepresentationPair, PeriodsError> {
    if a * a + b * b + c3 * c3 != d {
        return Err(PeriodsError::FormViolation {
            a,
            b,
            c: c3,
            d,
            form: "a² + b² + c² = D",
        });
    }
    let (af, bf, cf) = (a as f64, b as f64, c3 as f64);
    let analytic = [
        [c(bf, 0.0), c(af, -af) / 2.0 - c(cf, cf) / 2.0],
        [c(af, af) - c(cf, -cf), c(-bf, 0.0)],
    ];
    let s = a + b + c3;
    let rational = [
        [q(s), q(-2 * c3), q(0), q(2 * a + 2 * c3)],
        [q(a), q(-s), q(-a - c3), q(0)],
        [q(0), q(2 * b), q(s), q(2 * a)],
        [q(-b), q(0), q(-c3), q(-s)],
    ];
    Ok(RepresentationPair {
        analytic,
        rational,
        kind: RepresentationKind::XSqrtD,
        triple: (a, b, c3),
        d,
    })
}

/// `R_√D` on `P(Y_t)` at `f = f(a,b,c,D)`, with no form check.
///
/// Obtained as `(Π; Π̄)⁻¹ · diag(A, Ā) · (Π; Π̄)` for `A = diag(√D, −√D)`.
pub fn y_rational_sqrt_d(a: i64, b: i64, c3: i64) -> QMat4 {
    [
        [q(a), q(0), half(c3 - b), q(-b)],
        [q(0), q(a), q(-b), half(-(b + c3))],
        [q(-(b + c3)), q(2 * b), q(-a), q(0)],
        [q(2 * b), q(c3 - b), q(0), q(-a)],
    ]
}

/// `A_√D = diag(√D, −√D)` and its rational representation on `P(Y_t)`,
/// for `2a² − 3b² − c² = 2D`, `a < 0`.
pub fn y_representation(
    a: i64,
    b: i64,
    c3: i64,
    d: i64,
) -> Result<RepresentationPair, PeriodsError> {
    if 2 * a * a - 3 * b * b - c3 * c3 != 2 * d || a >= 0 {
        return Err(PeriodsError::FormViolation {
            a,
            b,
            c: c3,
            d,
            form: "2a² − 3b² − c² = 2D with a < 0",
        });
    }
    let root = (d as f64).sqrt();
    let zero = c(0.0, 0.0);
    Ok(RepresentationPair {
        analytic: [[c(root, 0.0), zero], [zero, c(-root, 0.0)]],
        rational: y_rational_sqrt_d(a, b, c3),
        kind: RepresentationKind::YSqrtD,
        triple: (a, b, c3),
        d,
    })
}

/// `max |A·Π − Π·R|`.
pub fn endomorphism_residual(pair: &RepresentationPair, pm: &PeriodMatrix) -> f64 {
    let pi = &pm.entries;
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        for j in 0..4 {
            let lhs: Complex64 = (0..2).map(|k| pair.analytic[i][k] * pi[k][j]).sum();
            let rhs: Complex64 = (0..4)
                .map(|k| pi[i][k] * rat_to_f64(pair.rational[k][j]))
                .sum();
            worst = worst.max((lhs - rhs).norm());
        }
    }
    worst
}

/// `max_± |A·ω^± ± √D·ω^±|`: `ω⁺` has eigenvalue `−√D`, `ω⁻` has `+√D`.
pub fn eigenvector_residual(pair: &RepresentationPair, t: &Triple) -> f64 {
    let Ok((plus, minus)) = order2_eigenform_coords(t) else {
        return f64::INFINITY;
    };
    let root = (pair.d as f64).sqrt();
    let one = c(1.0, 0.0);
    let mut worst: f64 = 0.0;
    for (w, lambda) in [(plus, -root), (minus, root)] {
        let v = [w, one];
        for i in 0..2 {
            let av = pair.analytic[i][0] * v[0] + pair.analytic[i][1] * v[1];
            worst = worst.max((av - v[i] * lambda).norm());
        }
    }
    worst
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiemannCheck {
    /// `max |Π·E⁻¹·Πᵀ|`
    pub first_relation_residual: f64,
    /// Eigenvalues of the hermitian part of `i·Π·E⁻¹·Π̄ᵀ`, ascending.
    pub hermitian_eigenvalues: [f64; 2],
    pub holds: bool,
}

impl RiemannCheck {
    pub fn hermitian_min_eigenvalue(&self) -> f64 {
        self.hermitian_eigenvalues[0]
    }
}

pub fn riemann_relations(pm: &PeriodMatrix) -> RiemannCheck {
    riemann_relations_with(pm, &pm.polarisation)
}

/// Riemann relations of `pm` against an explicit polarisation.
pub fn riemann_relations_with(pm: &PeriodMatrix, polarisation: &IMat4) -> RiemannCheck {
    let e_inv = qmat4_inverse(&imat_to_q(polarisation)).expect("polarisation is non-degenerate");
    let pi = &pm.entries;
    let form = |conj: bool| -> CMat2 {
        let mut out = [[c(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = (0..4)
                    .flat_map(|k| (0..4).map(move |l| (k, l)))
                    .map(|(k, l)| {
                        let right = if conj { pi[j][l].conj() } else { pi[j][l] };
                        pi[i][k] * rat_to_f64(e_inv[k][l]) * right
                    })
                    .sum();
            }
        }
        out
    };
    let first = form(false);
    let first_relation_residual = first.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
    let h = form(true).map(|row| row.map(|z| z * c(0.0, 1.0)));
    let eigen = hermitian2_eigenvalues(&h);
    RiemannCheck {
        first_relation_residual,
        hermitian_eigenvalues: eigen,
        holds: first_relation_residual < ACCEPTANCE_TOL && eigen[0] > 0.0,
    }
}

/// Eigenvalues of the hermitian part `(H + Hᴴ)/2`, ascending.
fn hermitian2_eigenvalues(h: &CMat2) -> [f64; 2] {
    let p = h[0][0].re;
    let r = h[1][1].re;
    let z = (h[0][1] + h[1][0].conj()) / 2.0;
    let mid = (p + r) / 2.0;
    let rad = (((p - r) / 2.0).powi(2) + z.norm_sqr()).sqrt();
    [mid - rad, mid + rad]
}

fn rat_to_f64(x: Rational64) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

fn cmat2_mul(x: &CMat2, y: &CMat2) -> CMat2 {
    let mut out = [[c(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    out
}

pub fn qmat4_mul(x: &QMat4, y: &QMat4) -> QMat4 {
    let mut out = [[q(0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| x[i][k] * y[k][j]).sum();
        }
    }
    out
}

fn transpose(x: &QMat4) -> QMat4 {
    let mut out = *x;
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = x[j][i];
        }
    }
    out
}

fn imat_to_q(x: &IMat4) -> QMat4 {
    x.map(|row| row.map(q))
}

/// Gauss–Jordan inverse over ℚ.
pub fn qmat4_inverse(m: &QMat4) -> Option<QMat4> {
    let mut a = *m;
    let mut inv = [[q(0); 4]; 4];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = Rational64::one();
    }
    for col in 0..4 {
        let pivot = (col..4).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col];
        for j in 0..4 {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for r in 0..4 {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col];
                for j in 0..4 {
                    let (ac, ic) = (a[col][j], inv[col][j]);
                    a[r][j] -= factor * ac;
                    inv[r][j] -= factor * ic;
                }
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discriminant::validate;
    use crate::forms::{enumerate_h3, FormKind};
    use crate::geometry::f_map;

    fn y_pm(a: i64, b: i64, c3: i64, d: i64) -> PeriodMatrix {
        let t = Triple::new(FormKind::H3, validate(d).unwrap(), a, b, c3);
        build_pi_y(f_map(&t).unwrap().to_complex()).unwrap()
    }

    #[test]
    fn zeta6_accuracy() {
        let exact = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_3);
        assert!((zeta6() - exact).norm() < CONSTRUCTION_TOL);
        assert!((zeta6().powu(6) - 1.0).norm() < 1e-14);
    }

    #[test]
    fn pi_y_special_fibres() {
        let pm = build_pi_y(c(0.0, 0.0)).unwrap();
        assert_eq!(pm.entries[0][0], c(0.0, 0.0));
        assert_eq!(pm.entries[0][1], c(0.0, 0.0));
        assert_eq!(pm.entries[0][2], c(1.0, 0.0));
        assert!((pm.entries[0][3] - zeta6().inv()).norm() < CONSTRUCTION_TOL);

        let z = zeta6();
        // the representative f(1) = ζ₆²/2 gives the entries ζ₆², −1
        let pm = build_pi_y(z * z / 2.0).unwrap();
        assert!((pm.entries[1][2] - z * z).norm() < CONSTRUCTION_TOL);
        assert!((pm.entries[1][3] + 1.0).norm() < 1e-15);
        let pm = build_pi_y(z / 2.0).unwrap();
        assert!((pm.entries[1][2] - z).norm() < CONSTRUCTION_TOL);
        assert!((pm.entries[1][3] - z * z).norm() < 1e-15);

        assert!(matches!(
            build_pi_y(c(0.8, 0.0)),
            Err(PeriodsError::OutOfDisc(_))
        ));
    }

    #[test]
    fn x_representation_d8() {
        let p = x_representation(2, 2, 0, 8).unwrap();
        assert!(p.is_integral());
        let t = p.to_generator_t().unwrap();
        assert!(t.is_integral());
        let p = x_representation(2, 0, 2, 8).unwrap();
        assert!(p.analytic_square_residual() < IDENTITY_TOL);
        assert!(endomorphism_residual(&p, &build_pi_x()) < IDENTITY_TOL);
    }

    #[test]
    fn x_generator_never_integral_for_odd_d() {
        // D = 9 taken formally
        let t = x_representation(1, 2, 2, 9)
            .unwrap()
            .to_generator_t()
            .unwrap();
        assert!(!t.is_integral());
        assert!(matches!(
            x_representation(1, 1, 1, 4),
            Err(PeriodsError::FormViolation { .. })
        ));
        assert!(matches!(
            x_representation(1, 1, 0, 2).unwrap().to_generator_t(),
            Err(PeriodsError::UnsupportedResidue(2))
        ));
    }

    #[test]
    fn y_representation_examples() {
        for (a, b, c3, d) in [(-4, 0, -4, 8), (-5, 0, -4, 17)] {
            let p = y_representation(a, b, c3, d).unwrap();
            assert!(p.rational_square_is_scalar());
            assert!(p.is_self_adjoint(&POLARISATION_Y));
            let t = p.to_generator_t().unwrap();
            assert!(t.is_integral(), "D = {d}");
            let pm = y_pm(a, b, c3, d);
            assert!(endomorphism_residual(&p, &pm) < IDENTITY_TOL);
            assert!(endomorphism_residual(&t, &pm) < IDENTITY_TOL);
        }
        assert!(matches!(
            y_representation(-5, -1, -3, 8),
            Err(PeriodsError::FormViolation { .. })
        ));
    }

    #[test]
    fn corrupted_rational_representation_is_caught() {
        let mut p = x_representation(2, 2, 0, 8).unwrap();
        p.rational[1][2] += q(1);
        assert!(endomorphism_residual(&p, &build_pi_x()) > 1e-2);
        assert!(!p.rational_square_is_scalar());
    }

    #[test]
    fn riemann_x_orientation() {
        let pm = build_pi_x();
        let r = riemann_relations(&pm);
        assert!(r.first_relation_residual < IDENTITY_TOL);
        // definite with the reversed orientation of E^X
        assert!(r.hermitian_eigenvalues[1] < 0.0);
        assert!(!r.holds);
        let flipped = POLARISATION_X.map(|row| row.map(|x| -x));
        let r = riemann_relations_with(&pm, &flipped);
        assert!(r.holds);
        assert!((r.hermitian_eigenvalues[0] - 1.0).abs() < IDENTITY_TOL);
        assert!((r.hermitian_eigenvalues[1] - 2.0).abs() < IDENTITY_TOL);
    }

    #[test]
    fn riemann_y() {
        let r = riemann_relations(&build_pi_y(c(0.3, 0.2)).unwrap());
        assert!(r.holds && r.hermitian_min_eigenvalue() > 0.0);
        let f = Complex64::from_polar(0.49f64.sqrt(), 0.4);
        let near = riemann_relations(&build_pi_y(f).unwrap());
        assert!(near.holds && near.hermitian_min_eigenvalue() < 0.05);
        let far = riemann_relations(&build_pi_y(c(0.0, 0.0)).unwrap());
        assert!(near.hermitian_min_eigenvalue() < far.hermitian_min_eigenvalue());
    }

    #[test]
    fn eigenvectors_of_x_triples() {
        for (a, b, c3) in [(2, 2, 0), (4, 2, 0), (1, 2, 3), (-3, 5, 1)] {
            let d = a * a + b * b + c3 * c3;
            let Ok(disc) = validate(d) else { continue };
            let p = x_representation(a, b, c3, d).unwrap();
            let t = Triple::new(FormKind::H2, disc, a, b, c3);
            assert!(eigenvector_residual(&p, &t) < IDENTITY_TOL * d as f64);
        }
    }

    #[test]
    fn inverse_of_polarisations() {
        for e in [POLARISATION_X, POLARISATION_Y] {
            let m = imat_to_q(&e);
            let prod = qmat4_mul(&m, &qmat4_inverse(&m).unwrap());
            for (i, row) in prod.iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    assert_eq!(*x, if i == j { q(1) } else { q(0) });
                }
            }
        }
    }

    #[test]
    fn y_certificates_for_h3_of_2828() {
        for t in enumerate_h3(&validate(2828).unwrap()) {
            let p = y_representation(t.a, t.b, t.c, 2828).unwrap();
            let pm = build_pi_y(f_map(&t).unwrap().to_complex()).unwrap();
            assert!(endomorphism_residual(&p, &pm) < ACCEPTANCE_TOL);
            assert!(p.to_generator_t().unwrap().is_integral());
            assert!(riemann_relations(&pm).holds);
        }
    }
}
