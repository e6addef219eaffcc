//! The two ternary solution sets `H₂(D)`, `H₃(D)` and the orbifold counts
//! `e₂, e₃, e₄, e₆` derived from them.
//!
//! `H₂(D)` collects the primitive representations of `D` by `a² + b² + c²`,
//! `H₃(D)` the solutions of `2a² − 3b² − c² = 2D` lying in the fundamental
//! domain of the `Δ(2,6,6)` triangle group (see [`crate::geometry`]).

use std::fmt;

use num_integer::Integer;
use thiserror::Error;

use crate::discriminant::{exact_sqrt, Discriminant};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormsError {
    #[error(
        "|H2({d})| = {h2_size} is not divisible by 24, but e2(D) = |H2(D)|/24 must be an integer for D ≡ 0 mod 4, D ∉ {{8, 12}}"
    )]
    DivisibilityViolation { d: i64, h2_size: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormKind {
    /// `a² + b² + c² = D`
    H2,
    /// `2a² − 3b² − c² = 2D`
    H3,
}

impl FormKind {
    pub fn order(self) -> u32 {
        match self {
            FormKind::H2 => 2,
            FormKind::H3 => 3,
        }
    }
}

/// An integer triple on one of the two ternary forms.
///
/// Membership in `H₂(D)`/`H₃(D)` is a property checked by [`Triple::is_member`];
/// candidates off the fundamental domain are representable so the domain
/// predicates can be tested against them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Triple {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub kind: FormKind,
    pub discriminant: Discriminant,
}

impl Triple {
    pub fn new(kind: FormKind, discriminant: Discriminant, a: i64, b: i64, c: i64) -> Self {
        Triple {
            a,
            b,
            c,
            kind,
            discriminant,
        }
    }

    pub fn coords(&self) -> (i64, i64, i64) {
        (self.a, self.b, self.c)
    }

    pub fn d(&self) -> i64 {
        self.discriminant.value()
    }

    pub fn on_form(&self) -> bool {
        on_form(self.kind, self.d(), self.a, self.b, self.c)
    }

    pub fn is_member(&self) -> bool {
        let d = &self.discriminant;
        match self.kind {
            FormKind::H2 => self.on_form() && gcd4(self.a, self.b, self.c, h2_gcd_modulus(d)) == 1,
            FormKind::H3 => {
                self.on_form()
                    && h3_domain_conditions(d.value(), self.a, self.b, self.c)
                    && gcd4(self.a, self.b, self.c, d.conductor()) == 1
            }
        }
    }
}

impl PartialOrd for Triple {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic in `(a, b, c)`; form kind and discriminant break ties.
impl Ord for Triple {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.a, self.b, self.c, self.kind, self.discriminant).cmp(&(
            other.a,
            other.b,
            other.c,
            other.kind,
            other.discriminant,
        ))
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

pub fn on_form(kind: FormKind, d: i64, a: i64, b: i64, c: i64) -> bool {
    match kind {
        FormKind::H2 => a * a + b * b + c * c == d,
        FormKind::H3 => 2 * a * a - 3 * b * b - c * c == 2 * d,
    }
}

/// Conditions (ii)–(iv) cutting `H₃` down to the fundamental domain, in integer
/// arithmetic: `D < a² < 9D` with `a < 0`, `c < b ≤ 0`, and
/// `4a − 3b − 3c < 0` or (`= 0` and `c < 3b`).
pub fn h3_domain_conditions(d: i64, a: i64, b: i64, c: i64) -> bool {
    let norm = a < 0 && d < a * a && a * a < 9 * d;
    let angle = c < b && b <= 0;
    let edge = 4 * a - 3 * b - 3 * c;
    norm && angle && (edge < 0 || (edge == 0 && c < 3 * b))
}

/// `gcd(a, b, c, m)` with `gcd(0, 0, x) = |x|`.
pub fn gcd4(a: i64, b: i64, c: i64, m: i64) -> i64 {
    a.gcd(&b).gcd(&c).gcd(&m)
}

/// Modulus of the primitivity filter on `H₂(D)`.
///
/// A common prime factor `p` of `(a, b, c)` makes the real multiplication
/// improper only if `D/p²` is itself ≡ 0 mod 4. For odd `p | f₀` this always
/// holds; for `p = 2` it holds iff `16 | D`, so the 2-part of `f₀` is dropped
/// otherwise.
pub fn h2_gcd_modulus(d: &Discriminant) -> i64 {
    let mut f = d.conductor();
    if d.value() % 16 != 0 {
        while f % 2 == 0 {
            f /= 2;
        }
    }
    f
}

/// All integer solutions of `a² + b² + c² = D`, sorted, with no primitivity filter.
pub fn h2_solutions(d: &Discriminant) -> Vec<Triple> {
    let n = d.value();
    let (lo, _) = d.isqrt_bounds();
    let mut out = Vec::new();
    for a in -lo..=lo {
        for b in -lo..=lo {
            let rest = n - a * a - b * b;
            if let Some(c) = exact_sqrt(rest) {
                out.push(Triple::new(FormKind::H2, *d, a, b, -c));
                if c != 0 {
                    out.push(Triple::new(FormKind::H2, *d, a, b, c));
                }
            }
        }
    }
    out.sort();
    out
}

pub fn enumerate_h2(d: &Discriminant) -> Vec<Triple> {
    let m = h2_gcd_modulus(d);
    h2_solutions(d)
        .into_iter()
        .filter(|t| gcd4(t.a, t.b, t.c, m) == 1)
        .collect()
}

/// Solutions of `2a² − 3b² − c² = 2D` in the fundamental domain, without the
/// gcd condition.
pub fn h3_candidates(d: &Discriminant) -> Vec<Triple> {
    let n = d.value();
    let (lo, hi) = d.isqrt_bounds();
    let mut out = Vec::new();
    // D non-square: ⌊√D⌋ < √D and 3√D ∉ ℤ, so D < a² < 9D ⇔ ⌊√D⌋ < |a| ≤ ⌊3√D⌋
    for a in -hi..=-(lo + 1) {
        let budget = 2 * a * a - 2 * n;
        let mut b = 0i64;
        while 3 * b * b <= budget {
            // c < b ≤ 0 leaves only the negative root
            if let Some(root) = exact_sqrt(budget - 3 * b * b) {
                let c = -root;
                if h3_domain_conditions(n, a, b, c) {
                    out.push(Triple::new(FormKind::H3, *d, a, b, c));
                }
            }
            b -= 1;
        }
    }
    out.sort();
    out
}

pub fn enumerate_h3(d: &Discriminant) -> Vec<Triple> {
    let f0 = d.conductor();
    h3_candidates(d)
        .into_iter()
        .filter(|t| gcd4(t.a, t.b, t.c, f0) == 1)
        .collect()
}

/// Every triple on `2a² − 3b² − c² = 2D` with `a_min ≤ a ≤ −1`, all sign
/// patterns of `b, c`, sorted.
pub fn h3_quadric_points(d: &Discriminant, a_min: i64) -> Vec<Triple> {
    let n = d.value();
    let mut out = Vec::new();
    for a in a_min..=-1 {
        let budget = 2 * a * a - 2 * n;
        if budget < 0 {
            continue;
        }
        let mut b = 0i64;
        while 3 * b * b <= budget {
            if let Some(c) = exact_sqrt(budget - 3 * b * b) {
                for bb in if b == 0 { vec![0] } else { vec![-b, b] } {
                    out.push(Triple::new(FormKind::H3, *d, a, bb, c));
                    if c != 0 {
                        out.push(Triple::new(FormKind::H3, *d, a, bb, -c));
                    }
                }
            }
            b += 1;
        }
    }
    out.sort();
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrbifoldCounts {
    pub e2: u64,
    pub e3: u64,
    pub e4: u64,
    pub e6: u64,
    pub h2_size: usize,
    pub h3_size: usize,
}

impl OrbifoldCounts {
    /// `(d, e_d)` pairs in order of `d`.
    pub fn by_order(&self) -> [(u64, u64); 4] {
        [(2, self.e2), (3, self.e3), (4, self.e4), (6, self.e6)]
    }
}

pub fn orbifold_counts(d: &Discriminant) -> Result<OrbifoldCounts, FormsError> {
    let h2_size = enumerate_h2(d).len();
    let h3_size = enumerate_h3(d).len();
    counts_from_sizes(d, h2_size, h3_size)
}

pub fn counts_from_sizes(
    d: &Discriminant,
    h2_size: usize,
    h3_size: usize,
) -> Result<OrbifoldCounts, FormsError> {
    let n = d.value();
    let special = n == 8 || n == 12;
    let e2 = if n % 4 == 1 || special {
        0
    } else if !h2_size.is_multiple_of(24) {
        return Err(FormsError::DivisibilityViolation { d: n, h2_size });
    } else {
        (h2_size / 24) as u64
    };
    let e3 = if n == 12 { 0 } else { h3_size as u64 };
    Ok(OrbifoldCounts {
        e2,
        e3,
        e4: u64::from(n == 8),
        e6: u64::from(n == 12),
        h2_size,
        h3_size,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discriminant::validate;

    fn disc(n: i64) -> Discriminant {
        validate(n).unwrap()
    }

    fn coords(ts: &[Triple]) -> Vec<(i64, i64, i64)> {
        ts.iter().map(Triple::coords).collect()
    }

    /// Brute force over the full box, independent of the loop structure above.
    fn h3_brute(n: i64) -> Vec<(i64, i64, i64)> {
        let f0 = disc(n).conductor();
        // c² < 2a² − 2D < 16D
        let r = 4 * ((n as f64).sqrt() as i64 + 1);
        let mut out = Vec::new();
        for a in -r..=r {
            for b in -r..=r {
                for c in -r..=r {
                    if on_form(FormKind::H3, n, a, b, c)
                        && h3_domain_conditions(n, a, b, c)
                        && gcd4(a, b, c, f0) == 1
                    {
                        out.push((a, b, c));
                    }
                }
            }
        }
        out
    }

    #[test]
    fn h2_d8() {
        let h = enumerate_h2(&disc(8));
        assert_eq!(h.len(), 12);
        for t in &h {
            let mut abs = [t.a.abs(), t.b.abs(), t.c.abs()];
            abs.sort();
            assert_eq!(abs, [0, 2, 2]);
        }
    }

    #[test]
    fn h2_small_sizes() {
        assert_eq!(enumerate_h2(&disc(20)).len(), 24);
        let h12 = enumerate_h2(&disc(12));
        assert_eq!(h12.len(), 8);
        assert!(h12
            .iter()
            .all(|t| t.a.abs() == 2 && t.b.abs() == 2 && t.c.abs() == 2));
        assert_eq!(enumerate_h2(&disc(2828)).len(), 144);
    }

    #[test]
    fn h2_gcd_modulus_drops_two_only_off_sixteen() {
        // 20 = 2²·5: halving lands on D/4 ≡ 1 mod 4, not an X-family discriminant
        assert_eq!(h2_gcd_modulus(&disc(20)), 1);
        assert_eq!(h2_gcd_modulus(&disc(180)), 3);
        assert_eq!(h2_gcd_modulus(&disc(32)), 2);
        assert_eq!(h2_gcd_modulus(&disc(80)), 4);
        assert_eq!(h2_gcd_modulus(&disc(72)), 3);
    }

    #[test]
    fn h3_examples() {
        assert_eq!(
            coords(&enumerate_h3(&disc(17))),
            vec![(-7, 0, -8), (-5, 0, -4)]
        );
        assert_eq!(coords(&enumerate_h3(&disc(8))), vec![(-4, 0, -4)]);
        assert!(enumerate_h3(&disc(12)).is_empty());
        assert_eq!(enumerate_h3(&disc(2828)).len(), 20);
    }

    #[test]
    fn d12_boundary_triple_fails_tie_break() {
        assert!(on_form(FormKind::H3, 12, -6, -2, -6));
        assert_eq!(4 * -6 - 3 * -2 - 3 * -6, 0);
        assert!(!h3_domain_conditions(12, -6, -2, -6));
    }

    #[test]
    fn h3_matches_brute_force() {
        for n in 5..400 {
            if let Ok(d) = validate(n) {
                assert_eq!(coords(&enumerate_h3(&d)), h3_brute(n), "D = {n}");
            }
        }
    }

    #[test]
    fn counts_examples() {
        let c = orbifold_counts(&disc(8)).unwrap();
        assert_eq!((c.e2, c.e3, c.e4, c.e6), (0, 1, 1, 0));
        let c = orbifold_counts(&disc(12)).unwrap();
        assert_eq!((c.e2, c.e3, c.e4, c.e6), (0, 0, 0, 1));
        let c = orbifold_counts(&disc(2828)).unwrap();
        assert_eq!((c.e2, c.e3, c.e4, c.e6), (6, 20, 0, 0));
        let c = orbifold_counts(&disc(17)).unwrap();
        assert_eq!((c.e2, c.e3, c.e4, c.e6), (0, 2, 0, 0));
    }

    #[test]
    fn divisibility_violation_is_an_error() {
        let err = counts_from_sizes(&disc(20), 25, 0).unwrap_err();
        assert_eq!(
            err,
            FormsError::DivisibilityViolation { d: 20, h2_size: 25 }
        );
        // odd D ignores |H2| entirely
        assert_eq!(counts_from_sizes(&disc(17), 25, 2).unwrap().e2, 0);
    }

    #[test]
    fn members_satisfy_their_invariants() {
        for n in [8, 12, 17, 20, 33, 200, 2828] {
            let d = disc(n);
            for t in enumerate_h2(&d).iter().chain(enumerate_h3(&d).iter()) {
                assert!(t.is_member(), "{t} for D = {n}");
            }
        }
    }

    #[test]
    fn h2_closed_under_signed_permutations() {
        let perms = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        for n in (13..=5000).filter(|n| n % 4 == 0 || n % 4 == 1).step_by(7) {
            let Ok(d) = validate(n) else { continue };
            let h = enumerate_h2(&d);
            let set: std::collections::HashSet<_> = h.iter().map(Triple::coords).collect();
            for t in &h {
                let v = [t.a, t.b, t.c];
                for p in perms {
                    for s in 0..8 {
                        let sign = |i: usize| if s >> i & 1 == 1 { -1 } else { 1 };
                        let w = (sign(0) * v[p[0]], sign(1) * v[p[1]], sign(2) * v[p[2]]);
                        assert!(set.contains(&w), "D = {n}: {w:?} missing");
                    }
                }
            }
        }
    }

    #[test]
    fn quadric_points_cover_candidates() {
        let d = disc(2828);
        let (_, hi) = d.isqrt_bounds();
        let all = h3_quadric_points(&d, -hi - 1);
        let inside: Vec<_> = all
            .iter()
            .filter(|t| h3_domain_conditions(t.d(), t.a, t.b, t.c))
            .copied()
            .collect();
        assert_eq!(inside, h3_candidates(&d));
    }

    #[test]
    fn enumeration_is_deterministic() {
        let d = disc(1993);
        assert_eq!(enumerate_h3(&d), enumerate_h3(&d));
        assert_eq!(enumerate_h2(&d), enumerate_h2(&d));
    }
}
