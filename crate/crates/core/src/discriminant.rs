//! Real quadratic discriminants: validation, conductor and fundamental part.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiscriminantError {
    #[error("{0} is not a discriminant: a discriminant D > 1 satisfies D ≡ 0 or 1 mod 4")]
    NotADiscriminant(i64),
    #[error(
        "{0} is a square discriminant; the orbifold point counts are stated for non-square D only"
    )]
    SquareDiscriminant(i64),
}

/// A validated non-square discriminant `D > 1` with `D = f₀² · D₀`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Discriminant {
    value: i64,
    conductor: i64,
    fundamental_part: i64,
}

impl Discriminant {
    pub fn value(&self) -> i64 {
        self.value
    }

    /// The conductor `f₀`.
    pub fn conductor(&self) -> i64 {
        self.conductor
    }

    /// The fundamental discriminant `D₀ = D / f₀²`.
    pub fn fundamental_part(&self) -> i64 {
        self.fundamental_part
    }

    pub fn residue_mod8(&self) -> i64 {
        self.value % 8
    }

    pub fn residue_mod4(&self) -> i64 {
        self.value % 4
    }

    /// `W_D(4)` is empty for `D ≡ 5 mod 8`.
    pub fn wd_empty(&self) -> bool {
        self.value % 8 == 5
    }

    /// `(⌊√D⌋, ⌊3√D⌋)`.
    pub fn isqrt_bounds(&self) -> (i64, i64) {
        isqrt_bounds(self.value)
    }
}

impl std::fmt::Display for Discriminant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value)
    }
}

pub fn validate(n: i64) -> Result<Discriminant, DiscriminantError> {
    if n <= 1 || n % 4 == 2 || n % 4 == 3 {
        return Err(DiscriminantError::NotADiscriminant(n));
    }
    let root = isqrt(n as u64) as i64;
    if root * root == n {
        return Err(DiscriminantError::SquareDiscriminant(n));
    }
    let (square_root_part, squarefree) = square_decomposition(n as u64);
    let (square_root_part, squarefree) = (square_root_part as i64, squarefree as i64);
    let (conductor, fundamental_part) = if squarefree % 4 == 1 {
        (square_root_part, squarefree)
    } else {
        // squarefree ≡ 2,3 mod 4 forces an even square part since D ≡ 0 mod 4
        debug_assert!(square_root_part % 2 == 0);
        (square_root_part / 2, 4 * squarefree)
    };
    Ok(Discriminant {
        value: n,
        conductor,
        fundamental_part,
    })
}

/// Writes `n = s² · m` with `m` squarefree, by trial division.
fn square_decomposition(mut n: u64) -> (u64, u64) {
    let mut square = 1u64;
    let mut free = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0u32;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        square *= p.pow(e / 2);
        if e % 2 == 1 {
            free *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    (square, free * n)
}

/// Whether `d` is a fundamental discriminant.
pub fn is_fundamental(d: i64) -> bool {
    if d <= 1 {
        return false;
    }
    match d % 4 {
        1 => is_squarefree(d as u64),
        0 => {
            let m = d / 4;
            (m % 4 == 2 || m % 4 == 3) && is_squarefree(m as u64)
        }
        _ => false,
    }
}

pub fn is_squarefree(n: u64) -> bool {
    square_decomposition(n).0 == 1
}

/// Integer square root `⌊√n⌋` by Newton iteration.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let bits = 64 - n.leading_zeros();
    // 2^⌈bits/2⌉ ≥ √n, so the iteration decreases monotonically to the floor
    let mut x = 1u64 << bits.div_ceil(2);
    loop {
        let y = (x + n / x) / 2;
        if y >= x {
            return x;
        }
        x = y;
    }
}

/// Exact square root if `n` is a perfect square.
pub fn exact_sqrt(n: i64) -> Option<i64> {
    if n < 0 {
        return None;
    }
    let r = isqrt(n as u64) as i64;
    (r * r == n).then_some(r)
}

/// `(⌊√n⌋, ⌊3√n⌋)` in integer arithmetic.
pub fn isqrt_bounds(n: i64) -> (i64, i64) {
    assert!(n >= 0);
    let n = n as u64;
    (isqrt(n) as i64, isqrt(9 * n) as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn conductor_by_square_divisors(d: i64) -> (i64, i64) {
        let mut best = (0, 0);
        let mut g = 1;
        while g * g <= d {
            if d % (g * g) == 0 && is_fundamental(d / (g * g)) {
                best = (g, d / (g * g));
            }
            g += 1;
        }
        best
    }

    #[test]
    fn small_examples() {
        let d = validate(8).unwrap();
        assert_eq!(
            (d.conductor(), d.fundamental_part(), d.wd_empty()),
            (1, 8, false)
        );
        let d = validate(32).unwrap();
        assert_eq!((d.conductor(), d.fundamental_part()), (2, 8));
        let d = validate(45).unwrap();
        assert_eq!(
            (d.conductor(), d.fundamental_part(), d.wd_empty()),
            (3, 5, true)
        );
        assert_eq!(validate(7), Err(DiscriminantError::NotADiscriminant(7)));
        assert_eq!(validate(1), Err(DiscriminantError::NotADiscriminant(1)));
        assert_eq!(validate(-4), Err(DiscriminantError::NotADiscriminant(-4)));
        assert_eq!(validate(16), Err(DiscriminantError::SquareDiscriminant(16)));
        assert_eq!(validate(9), Err(DiscriminantError::SquareDiscriminant(9)));
    }

    #[test]
    fn residues() {
        assert_eq!(validate(2828).unwrap().residue_mod8(), 4);
        assert_eq!(validate(17).unwrap().residue_mod8(), 1);
        assert_eq!(validate(8).unwrap().residue_mod8(), 0);
    }

    #[test]
    fn bounds_match_exhaustive_squaring() {
        let oracle = |n: i64, k: i64| {
            (0..)
                .take_while(|x: &i64| x * x <= k * k * n)
                .last()
                .unwrap()
        };
        assert_eq!(validate(17).unwrap().isqrt_bounds(), (4, 12));
        assert_eq!(isqrt_bounds(4), (2, 6));
        assert_eq!(validate(2828).unwrap().isqrt_bounds(), (53, 159));
        for n in 0..3000 {
            assert_eq!(isqrt_bounds(n), (oracle(n, 1), oracle(n, 3)), "n = {n}");
        }
    }

    #[test]
    fn isqrt_floor_property_large() {
        for n in [
            u64::MAX,
            u64::MAX - 1,
            1 << 62,
            (1 << 32) * ((1 << 32) - 1),
            999_999_999_999,
        ] {
            let r = isqrt(n) as u128;
            assert!(r * r <= n as u128 && (r + 1) * (r + 1) > n as u128);
        }
    }

    #[test]
    fn conductor_matches_square_divisor_search() {
        for n in 2..100_000 {
            if let Ok(d) = validate(n) {
                assert_eq!(
                    (d.conductor(), d.fundamental_part()),
                    conductor_by_square_divisors(n),
                    "D = {n}"
                );
            }
        }
    }

    #[test]
    fn decomposition_up_to_a_million() {
        for n in 2..=1_000_000 {
            if let Ok(d) = validate(n) {
                let (f, d0) = (d.conductor(), d.fundamental_part());
                assert_eq!(f * f * d0, n);
                assert!(is_fundamental(d0), "D = {n}, D0 = {d0}");
            }
        }
    }
}
