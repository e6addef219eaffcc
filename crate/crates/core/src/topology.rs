//! Homeomorphism type of `W_D(4)` from the orbifold counts and externally
//! supplied Euler characteristic, cusp and component data, via
//! `2h₀ − 2g = χ + C + Σ_d e_d (1 − 1/d)`.
//!
//! Records for `D ≡ 1 mod 8` describe one of the two homeomorphic components.

use std::collections::BTreeMap;
use std::io::BufRead;

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::discriminant::{validate, Discriminant, DiscriminantError};
use crate::forms::{orbifold_counts, FormsError, OrbifoldCounts};

pub const FIXTURE_HEADER: &str = "D,chi_num,chi_den,cusps,components";

/// Invariant data for the discriminants of the published table (17 ≤ D ≤ 300).
pub const TABLE1_CSV: &str = include_str!("../data/table1.csv");
/// Invariant data for the worked examples D = 8, 12, 2828.
pub const EXAMPLES_CSV: &str = include_str!("../data/examples.csv");
/// Published `(D, g, e₂, e₃)` per component, for checking.
pub const TABLE1_EXPECTED_CSV: &str = include_str!("../data/table1_expected.csv");
pub const EXPECTED_HEADER: &str = "D,genus,e2,e3";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error("W_D(4) is empty for D ≡ 5 mod 8 (D = {0})")]
    EmptyCurve(i64),
    #[error("genus of W_{d}(4) from 2h0 − 2g = χ + C + Σ e_d(1 − 1/d) is {value}, not an integer")]
    NonIntegralGenus { d: i64, value: Rational64 },
    #[error("genus of W_{d}(4) from 2h0 − 2g = χ + C + Σ e_d(1 − 1/d) is negative ({value})")]
    NegativeGenus { d: i64, value: Rational64 },
    #[error(
        "e{order}(D) = {count} for D = {d} does not split over {components} homeomorphic components"
    )]
    NonIntegralComponentSplit {
        d: i64,
        order: u64,
        count: u64,
        components: u32,
    },
    #[error("no χ/C fixture row for D = {0}")]
    MissingFixture(i64),
    #[error("fixture D = {fixture} does not match counts for D = {counts}")]
    DiscriminantMismatch { fixture: i64, counts: i64 },
    #[error("fixture line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("fixture D = {d}: {message}")]
    InvalidFixture { d: i64, message: String },
    #[error(transparent)]
    Discriminant(#[from] DiscriminantError),
    #[error(transparent)]
    Forms(#[from] FormsError),
    #[error("reading fixture: {0}")]
    Io(String),
}

/// One row of χ/C data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InvariantFixture {
    pub d: i64,
    pub chi: Rational64,
    pub cusps: u64,
    pub components: u32,
}

impl InvariantFixture {
    pub fn new(
        d: i64,
        chi: Rational64,
        cusps: u64,
        components: u32,
    ) -> Result<Self, TopologyError> {
        let fix = InvariantFixture {
            d,
            chi,
            cusps,
            components,
        };
        fix.check()?;
        Ok(fix)
    }

    fn check(&self) -> Result<(), TopologyError> {
        let invalid = |message: String| Err(TopologyError::InvalidFixture { d: self.d, message });
        if !self.chi.is_negative() {
            return invalid(format!(
                "Euler characteristic {} must be negative",
                self.chi
            ));
        }
        if self.cusps < 1 {
            return invalid("a Prym-Teichmüller curve has at least one cusp".into());
        }
        let expected = if self.d % 8 == 1 { 2 } else { 1 };
        if self.components != expected {
            return invalid(format!(
                "{} components, but W_D(4) has {expected} for D ≡ {} mod 8",
                self.components,
                self.d % 8
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveTopology {
    pub d: i64,
    pub chi: Rational64,
    pub cusps: u64,
    pub components: u32,
    pub e2: u64,
    pub e3: u64,
    pub e4: u64,
    pub e6: u64,
    pub genus: u64,
}

impl CurveTopology {
    /// Right-hand side `χ + C + Σ e_d(1 − 1/d)` of the invariant identity.
    pub fn invariant_sum(&self) -> Rational64 {
        orbifold_sum(
            self.chi,
            self.cusps,
            [(2, self.e2), (3, self.e3), (4, self.e4), (6, self.e6)],
        )
    }

    pub fn identity_holds(&self) -> bool {
        Rational64::from_integer(2 - 2 * self.genus as i64) == self.invariant_sum()
    }
}

fn orbifold_sum(chi: Rational64, cusps: u64, counts: [(u64, u64); 4]) -> Rational64 {
    counts.iter().fold(
        chi + Rational64::from_integer(cusps as i64),
        |acc, &(order, e)| {
            acc + Rational64::from_integer(e as i64)
                * (Rational64::one() - Rational64::new(1, order as i64))
        },
    )
}

pub fn genus_from_invariants(
    fix: &InvariantFixture,
    counts: &OrbifoldCounts,
    disc: &Discriminant,
) -> Result<CurveTopology, TopologyError> {
    let d = disc.value();
    if disc.wd_empty() {
        return Err(TopologyError::EmptyCurve(d));
    }
    if fix.d != d {
        return Err(TopologyError::DiscriminantMismatch {
            fixture: fix.d,
            counts: d,
        });
    }
    let n = u64::from(fix.components);
    let mut per_component = [0u64; 4];
    for (slot, (order, count)) in per_component.iter_mut().zip(counts.by_order()) {
        if count % n != 0 {
            return Err(TopologyError::NonIntegralComponentSplit {
                d,
                order,
                count,
                components: fix.components,
            });
        }
        *slot = count / n;
    }
    let [e2, e3, e4, e6] = per_component;
    let sum = orbifold_sum(fix.chi, fix.cusps, [(2, e2), (3, e3), (4, e4), (6, e6)]);
    // per component h₀ = 1: g = (2 − sum)/2
    let genus = (Rational64::from_integer(2) - sum) / Rational64::from_integer(2);
    if !genus.is_integer() {
        return Err(TopologyError::NonIntegralGenus { d, value: genus });
    }
    if genus < Rational64::zero() {
        return Err(TopologyError::NegativeGenus { d, value: genus });
    }
    Ok(CurveTopology {
        d,
        chi: fix.chi,
        cusps: fix.cusps,
        components: fix.components,
        e2,
        e3,
        e4,
        e6,
        genus: genus.to_integer() as u64,
    })
}

/// Fixtures keyed by discriminant.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FixtureSet {
    rows: BTreeMap<i64, InvariantFixture>,
}

impl FixtureSet {
    /// The shipped table rows plus the worked examples.
    pub fn shipped() -> Self {
        let mut set = Self::parse_csv(TABLE1_CSV).expect("shipped table1.csv");
        set.extend(Self::parse_csv(EXAMPLES_CSV).expect("shipped examples.csv"));
        set
    }

    pub fn parse_csv(text: &str) -> Result<Self, TopologyError> {
        Self::read_csv(text.as_bytes())
    }

    pub fn read_csv<R: BufRead>(reader: R) -> Result<Self, TopologyError> {
        let mut rows = BTreeMap::new();
        let mut lines = reader.lines().enumerate();
        match lines.next() {
            Some((_, Ok(h))) if h.trim_end() == FIXTURE_HEADER => {}
            Some((_, Err(e))) => return Err(TopologyError::Io(e.to_string())),
            _ => {
                return Err(TopologyError::Parse {
                    line: 1,
                    message: format!("expected header `{FIXTURE_HEADER}`"),
                })
            }
        }
        for (idx, line) in lines {
            let line = line.map_err(|e| TopologyError::Io(e.to_string()))?;
            let line_no = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let fix = parse_fixture_row(&line).map_err(|message| TopologyError::Parse {
                line: line_no,
                message,
            })?;
            fix.check()?;
            if rows.insert(fix.d, fix).is_some() {
                return Err(TopologyError::Parse {
                    line: line_no,
                    message: format!("duplicate row for D = {}", fix.d),
                });
            }
        }
        Ok(FixtureSet { rows })
    }

    pub fn extend(&mut self, other: FixtureSet) {
        self.rows.extend(other.rows);
    }

    pub fn insert(&mut self, fix: InvariantFixture) {
        self.rows.insert(fix.d, fix);
    }

    pub fn get(&self, d: i64) -> Option<&InvariantFixture> {
        self.rows.get(&d)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &InvariantFixture> {
        self.rows.values()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(FIXTURE_HEADER);
        out.push('\n');
        for f in self.rows.values() {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                f.d,
                f.chi.numer(),
                f.chi.denom(),
                f.cusps,
                f.components
            ));
        }
        out
    }
}

fn parse_fixture_row(line: &str) -> Result<InvariantFixture, String> {
    let fields: Vec<&str> = line.trim_end().split(',').collect();
    if fields.len() != 5 {
        return Err(format!("expected 5 fields, found {}", fields.len()));
    }
    let int = |i: usize| {
        fields[i]
            .parse::<i64>()
            .map_err(|e| format!("field {}: {e}", i + 1))
    };
    let (d, num, den, cusps, components) = (int(0)?, int(1)?, int(2)?, int(3)?, int(4)?);
    if den <= 0 {
        return Err("chi_den must be positive".into());
    }
    let chi = Rational64::new(num, den);
    if *chi.numer() != num {
        return Err(format!("chi = {num}/{den} is not in lowest terms"));
    }
    if cusps < 0 || !(1..=2).contains(&components) {
        return Err("cusps must be non-negative and components 1 or 2".into());
    }
    Ok(InvariantFixture {
        d,
        chi,
        cusps: cusps as u64,
        components: components as u32,
    })
}

/// Valid discriminants in `[d_min, d_max]` with non-empty `W_D(4)`.
pub fn table_discriminants(d_min: i64, d_max: i64) -> Vec<Discriminant> {
    (d_min.max(2)..=d_max)
        .filter_map(|n| validate(n).ok())
        .filter(|d| !d.wd_empty())
        .collect()
}

/// One record per valid non-empty `D` in range, ascending.
pub fn build_table(
    d_min: i64,
    d_max: i64,
    fixtures: &FixtureSet,
) -> Result<Vec<CurveTopology>, TopologyError> {
    let discs = table_discriminants(d_min, d_max);
    if let Some(missing) = discs.iter().find(|d| fixtures.get(d.value()).is_none()) {
        return Err(TopologyError::MissingFixture(missing.value()));
    }
    discs
        .par_iter()
        .map(|d| {
            let counts = orbifold_counts(d)?;
            genus_from_invariants(&fixtures.rows[&d.value()], &counts, d)
        })
        .collect()
}

/// A published `(g, e₂, e₃)` row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpectedRow {
    pub d: i64,
    pub genus: u64,
    pub e2: u64,
    pub e3: u64,
}

pub fn parse_expected_csv(text: &str) -> Result<Vec<ExpectedRow>, TopologyError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim_end() == EXPECTED_HEADER => {}
        _ => {
            return Err(TopologyError::Parse {
                line: 1,
                message: format!("expected header `{EXPECTED_HEADER}`"),
            })
        }
    }
    let mut out = Vec::new();
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let parse = || -> Result<ExpectedRow, String> {
            let f: Vec<&str> = line.trim_end().split(',').collect();
            if f.len() != 4 {
                return Err(format!("expected 4 fields, found {}", f.len()));
            }
            let n = |i: usize| {
                f[i].parse::<i64>()
                    .map_err(|e| format!("field {}: {e}", i + 1))
            };
            let u = |i: usize| {
                f[i].parse::<u64>()
                    .map_err(|e| format!("field {}: {e}", i + 1))
            };
            Ok(ExpectedRow {
                d: n(0)?,
                genus: u(1)?,
                e2: u(2)?,
                e3: u(3)?,
            })
        };
        out.push(parse().map_err(|message| TopologyError::Parse {
            line: idx + 1,
            message,
        })?);
    }
    Ok(out)
}
