//! Sweeps operator spaces within a statement's hypotheses and checks its
//! conclusion with the solver.

mod check;
mod theorem;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{
    enumerate_cosets, enumerate_subspaces, gaussian_binomial, sample_coset_with,
    sample_subspace_with, AffineFlat, Elem, FieldSpec, Mat,
};
use crate::error::{Error, Result};
use crate::gallery::{build_case, check_case, list_cases, CaseReport};
use crate::io::{MapDocument, SpaceDocument};
use crate::opspace::OperatorSpace;
use crate::solver::{solve_compatible_maps, CompatMode, MapClass, OperatorMap};

pub use check::desc_f3_space;
pub use theorem::TheoremId;

/// Largest number of spaces an exhaustive sweep will visit.
pub const DEFAULT_SWEEP_GUARD: u128 = 1_000_000;

/// How spaces are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    Exhaustive,
    /// `count` seeded draws; draw `i` uses its own ChaCha stream, so results
    /// do not depend on scheduling.
    Sample {
        count: usize,
        seed: u64,
    },
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Exhaustive => f.write_str("exhaustive"),
            Strategy::Sample { count, seed } => write!(f, "sample:{count}:{seed}"),
        }
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("exhaustive") {
            return Ok(Strategy::Exhaustive);
        }
        let bad = || {
            Error::domain(format!(
                "strategy {s:?} is neither exhaustive nor sample:COUNT:SEED"
            ))
        };
        let rest = s.strip_prefix("sample:").ok_or_else(bad)?;
        let (count, seed) = rest.split_once(':').ok_or_else(bad)?;
        Ok(Strategy::Sample {
            count: count.parse().map_err(|_| bad())?,
            seed: seed.parse().map_err(|_| bad())?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Params {
    pub n: usize,
    pub p: usize,
    pub field: String,
    pub min_codim: usize,
    pub max_codim: usize,
}

/// A space on which the conclusion failed, with enough data to re-check it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub space: SpaceDocument,
    pub class: MapClass,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<MapDocument>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<Elem>>,
    pub detail: String,
}

impl Violation {
    pub(crate) fn new(space: &OperatorSpace, class: MapClass, detail: impl Into<String>) -> Self {
        Violation {
            space: SpaceDocument::from_space(space, None),
            class,
            witness: None,
            x: None,
            detail: detail.into(),
        }
    }

    pub(crate) fn with_map(mut self, map: &OperatorMap) -> Self {
        self.space = SpaceDocument::from_space(map.space(), None);
        self.witness = Some(MapDocument::from_map(map));
        self
    }

    pub(crate) fn with_direction(mut self, d: Option<&crate::opspace::Direction>) -> Self {
        self.space.direction = d.map(|d| d.vector().to_vec());
        self
    }

    pub(crate) fn at(mut self, x: &[Elem]) -> Self {
        self.x = Some(x.to_vec());
        self
    }
}

/// Outcome of a sweep. The serialized form omits the elapsed time so that
/// equal inputs give byte-identical reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub theorem: String,
    pub params: Vec<Params>,
    pub strategy: String,
    pub spaces_checked: u64,
    pub violations: Vec<Violation>,
    pub side_stats: BTreeMap<String, u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub cases: Vec<CaseReport>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }
}

/// Per-space result before merging.
#[derive(Default)]
pub(crate) struct Outcome {
    pub violations: Vec<Violation>,
    pub stats: BTreeMap<&'static str, u64>,
}

impl Outcome {
    pub fn bump(&mut self, key: &'static str) {
        *self.stats.entry(key).or_default() += 1;
    }
}

fn sweep_spaces(
    id: TheoremId,
    field: FieldSpec,
    n: usize,
    p: usize,
    codims: (usize, usize),
    strategy: Strategy,
) -> Result<Vec<OperatorSpace>> {
    let d = n * p;
    let (lo, hi) = codims;
    let affine = id.is_affine();
    let q = field.q() as u128;
    match strategy {
        Strategy::Exhaustive => {
            let total: u128 = (lo..=hi)
                .map(|c| {
                    gaussian_binomial(d, d - c, field.q() as u64)
                        * if affine { q.pow(c as u32) } else { 1 }
                })
                .sum();
            if total > DEFAULT_SWEEP_GUARD {
                return Err(Error::resource(
                    format!(
                        "exhaustive sweep of {} spaces of codim {lo}..={hi} in Mat_{{{n},{p}}}({field}); use a sample strategy",
                        if affine { "affine" } else { "linear" }
                    ),
                    total,
                    DEFAULT_SWEEP_GUARD,
                ));
            }
            let mut out = Vec::with_capacity(total as usize);
            for c in lo..=hi {
                for s in enumerate_subspaces(field, d, d - c, DEFAULT_SWEEP_GUARD)? {
                    if affine {
                        for flat in enumerate_cosets(&s, DEFAULT_SWEEP_GUARD)? {
                            out.push(OperatorSpace::new(n, p, flat)?);
                        }
                    } else {
                        out.push(OperatorSpace::from_subspace(n, p, s)?);
                    }
                }
            }
            Ok(out)
        }
        Strategy::Sample { count, seed } => (0..count)
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i as u64);
                let c = lo + i % (hi - lo + 1);
                let s = sample_subspace_with(field, d, d - c, &mut rng)?;
                let flat = if affine {
                    sample_coset_with(&s, &mut rng)
                } else {
                    AffineFlat::linear(s)
                };
                OperatorSpace::new(n, p, flat)
            })
            .collect(),
    }
}

fn merge(outcomes: Vec<Outcome>) -> (Vec<Violation>, BTreeMap<String, u64>) {
    let mut violations = Vec::new();
    let mut stats = BTreeMap::new();
    for o in outcomes {
        violations.extend(o.violations);
        for (k, v) in o.stats {
            *stats.entry(k.to_string()).or_default() += v;
        }
    }
    (violations, stats)
}

/// Checks `id` on every space (or a sample) of `Mat_{n,p}(field)` whose
/// codimension lies within its bound.
pub fn verify_theorem(
    id: TheoremId,
    n: usize,
    p: usize,
    field: FieldSpec,
    strategy: Strategy,
) -> Result<VerificationReport> {
    verify_theorem_up_to(id, n, p, field, None, strategy)
}

/// As [`verify_theorem`], stopping at `max_codim` when given; it may not exceed the bound.
pub fn verify_theorem_up_to(
    id: TheoremId,
    n: usize,
    p: usize,
    field: FieldSpec,
    max_codim: Option<usize>,
    strategy: Strategy,
) -> Result<VerificationReport> {
    let start = Instant::now();
    id.check_hypotheses(n, p, field)?;
    let bound = id.codim_bound(n, field.q());
    if bound < 0 {
        return Err(Error::domain(format!(
            "{id} covers codimension at most {bound} for n = {n} over {field}: no space qualifies"
        )));
    }
    let bound = bound as usize;
    let lo = id.min_codim(n, field.q());
    let hi = match max_codim {
        Some(m) if m > bound => {
            return Err(Error::domain(format!(
                "--max-codim {m} exceeds the {id} bound {bound}"
            )));
        }
        Some(m) if m < lo => {
            return Err(Error::domain(format!(
                "{id} only concerns codimension {lo}"
            )));
        }
        Some(m) => m,
        None => bound,
    };
    let hi = hi.min(n * p);
    let (spaces, strategy) = if id == TheoremId::DescF3 {
        (vec![desc_f3_space(p)?], None)
    } else {
        (
            sweep_spaces(id, field, n, p, (lo, hi), strategy)?,
            Some(strategy),
        )
    };
    let outcomes = spaces
        .par_iter()
        .map(|s| check::check_space(id, s))
        .collect::<Result<Vec<_>>>()?;
    let (violations, side_stats) = merge(outcomes);
    Ok(VerificationReport {
        theorem: id.name().to_string(),
        params: vec![Params {
            n,
            p,
            field: field.name(),
            min_codim: lo,
            max_codim: hi,
        }],
        strategy: strategy.map_or_else(|| "fixed".to_string(), |s| s.to_string()),
        spaces_checked: spaces.len() as u64,
        violations,
        side_stats,
        cases: Vec::new(),
        elapsed: start.elapsed(),
    })
}

/// Runs the gallery checks on the given `(name, n, p, field)` tuples, or on
/// every case at its minimal parameters when `cases` is empty.
pub fn verify_gallery(cases: &[(String, usize, usize, FieldSpec)]) -> Result<VerificationReport> {
    let start = Instant::now();
    let params: Vec<(String, usize, usize, FieldSpec)> = if cases.is_empty() {
        list_cases()
            .iter()
            .map(|c| {
                let (n, p, f) = c.minimal;
                Ok((c.name.to_string(), n, p, FieldSpec::parse(f)?))
            })
            .collect::<Result<_>>()?
    } else {
        cases.to_vec()
    };
    let built = params
        .iter()
        .map(|(name, n, p, f)| build_case(name, *n, *p, *f))
        .collect::<Result<Vec<_>>>()?;
    let reports: Vec<CaseReport> = built.par_iter().map(check_case).collect();
    let mut violations = Vec::new();
    let mut side_stats = BTreeMap::new();
    for (case, report) in built.iter().zip(&reports) {
        let key = if report.passed() {
            "cases_passed"
        } else {
            "cases_failed"
        };
        *side_stats.entry(key.to_string()).or_default() += 1;
        for c in report.checks.iter().filter(|c| !c.passed) {
            violations.push(
                Violation::new(
                    &case.space,
                    case.class,
                    format!("{}: {} {}", case.name, c.claim, c.detail),
                )
                .with_map(&case.map)
                .with_direction(case.direction.as_ref()),
            );
        }
    }
    Ok(VerificationReport {
        theorem: "GALLERY".to_string(),
        params: built
            .iter()
            .map(|c| Params {
                n: c.n,
                p: c.p,
                field: c.field.name(),
                min_codim: c.expected_codim,
                max_codim: c.expected_codim,
            })
            .collect(),
        strategy: "fixed".to_string(),
        spaces_checked: built.len() as u64,
        violations,
        side_stats,
        cases: reports,
        elapsed: start.elapsed(),
    })
}

/// First linear subspace of `Mat_{n,p}(field)` of codimension `codim`, in
/// sweep order, carrying a non-local range-compatible additive map.
pub fn search_hom_counterexample(
    n: usize,
    p: usize,
    field: FieldSpec,
    codim: usize,
    strategy: Strategy,
) -> Result<Option<(OperatorSpace, OperatorMap)>> {
    if n == 0 || p == 0 || codim > n * p {
        return Err(Error::domain(format!(
            "no codimension-{codim} subspaces of Mat_{{{n},{p}}}"
        )));
    }
    let spaces = sweep_spaces(TheoremId::Hom, field, n, p, (codim, codim), strategy)?;
    spaces
        .par_iter()
        .map(|s| -> Result<Option<(OperatorSpace, OperatorMap)>> {
            let sols = solve_compatible_maps(s, &CompatMode::Range, MapClass::Additive)?;
            Ok(sols[0].witness().map(|w| (s.clone(), w.clone())))
        })
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        })
        .unwrap_or(Ok(None))
}

/// Independent pointwise re-check that `map` satisfies `F(s) ∈ im s` on every element.
pub fn pointwise_range_compatible(map: &OperatorMap) -> bool {
    let f = map.field();
    map.space().elements().all(|s: Mat| {
        let v = map.evaluate(&s).expect("element of the space");
        crate::algebra::Subspace::row_space(f, &s.transpose()).contains(&v)
    })
}
