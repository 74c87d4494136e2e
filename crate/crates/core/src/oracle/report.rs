use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{GeometryError, Result};
use crate::hypersurface::Params;

const SHIPPED_TOLERANCES: &str = include_str!("tolerances.txt");

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub const DEFAULT: Tolerance = Tolerance { abs: 1e-6, rel: 1e-5 };

    /// `max|c - o| <= abs + rel · max|o|`.
    pub fn accepts(&self, abs_error: f64, scale: f64) -> bool {
        abs_error <= self.abs + self.rel * scale
    }
}

/// Per-formula tolerances, falling back to a default.
#[derive(Debug, Clone, PartialEq)]
pub struct ToleranceTable {
    pub default: Tolerance,
    pub entries: BTreeMap<String, Tolerance>,
}

impl Default for ToleranceTable {
    fn default() -> Self {
        Self::shipped()
    }
}

impl ToleranceTable {
    pub fn shipped() -> Self {
        Self::parse(SHIPPED_TOLERANCES).expect("shipped tolerance table is well formed")
    }

    /// Lines of `formula_id abs rel`; `default` sets the fallback; `#` starts
    /// a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut table = ToleranceTable {
            default: Tolerance::DEFAULT,
            entries: BTreeMap::new(),
        };
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let bad = || GeometryError::Argument(format!("tolerance table line {}: `{line}`", n + 1));
            if parts.len() != 3 {
                return Err(bad());
            }
            let abs: f64 = parts[1].parse().map_err(|_| bad())?;
            let rel: f64 = parts[2].parse().map_err(|_| bad())?;
            if !(abs >= 0.0 && rel >= 0.0) {
                return Err(bad());
            }
            table.set(parts[0], Tolerance { abs, rel });
        }
        Ok(table)
    }

    pub fn set(&mut self, formula: &str, tol: Tolerance) {
        if formula == "default" {
            self.default = tol;
        } else {
            self.entries.insert(formula.to_string(), tol);
        }
    }

    /// Longest dotted prefix wins, so `second_form` covers `second_form.matrix`.
    pub fn get(&self, formula: &str) -> Tolerance {
        let mut key = formula;
        loop {
            if let Some(t) = self.entries.get(key) {
                return *t;
            }
            match key.rfind('.') {
                Some(i) => key = &key[..i],
                None => return self.default,
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Match,
    Mismatch,
    BothDegenerate,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Match => "Match",
            Verdict::Mismatch => "Mismatch",
            Verdict::BothDegenerate => "BothDegenerate",
        }
    }
}

/// One closed-form value compared against the oracle at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub formula: String,
    pub point: Params,
    pub closed: Vec<f64>,
    pub oracle: Vec<f64>,
    pub abs_error: f64,
    pub rel_error: f64,
    pub verdict: Verdict,
    /// Error names when either side failed.
    pub note: Option<String>,
}

pub(crate) fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

pub(crate) fn errors(closed: &[f64], oracle: &[f64]) -> (f64, f64) {
    if closed.len() != oracle.len() {
        return (f64::INFINITY, f64::INFINITY);
    }
    let abs = closed.iter().zip(oracle).fold(0.0_f64, |m, (c, o)| {
        if (c - o).is_nan() {
            f64::INFINITY
        } else {
            m.max((c - o).abs())
        }
    });
    let scale = max_abs(oracle);
    let rel = if abs == 0.0 { 0.0 } else { abs / scale };
    (abs, rel)
}

impl Record {
    pub fn compare(
        formula: &str,
        point: Params,
        closed: Result<Vec<f64>>,
        oracle: Result<Vec<f64>>,
        tol: Tolerance,
    ) -> Record {
        let (closed, oracle, verdict, note, abs_error, rel_error) = match (closed, oracle) {
            (Ok(c), Ok(o)) => {
                let (abs, rel) = errors(&c, &o);
                let verdict = if tol.accepts(abs, max_abs(&o)) {
                    Verdict::Match
                } else {
                    Verdict::Mismatch
                };
                (c, o, verdict, None, abs, rel)
            }
            (Err(ce), Err(oe)) => (
                vec![],
                vec![],
                Verdict::BothDegenerate,
                Some(format!("closed: {}; oracle: {}", ce.kind(), oe.kind())),
                0.0,
                0.0,
            ),
            (Err(ce), Ok(o)) => (
                vec![],
                o,
                Verdict::Mismatch,
                Some(format!("closed: {ce}")),
                f64::INFINITY,
                f64::INFINITY,
            ),
            (Ok(c), Err(oe)) => (
                c,
                vec![],
                Verdict::Mismatch,
                Some(format!("oracle: {oe}")),
                f64::INFINITY,
                f64::INFINITY,
            ),
        };
        Record {
            formula: formula.to_string(),
            point,
            closed,
            oracle,
            abs_error,
            rel_error,
            verdict,
            note,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub label: String,
    pub values: Vec<f64>,
}

/// Competing readings of one formula evaluated at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct Adjudication {
    pub formula: String,
    pub point: Params,
    pub candidates: Vec<Candidate>,
    pub oracle: Vec<f64>,
    /// Readings within tolerance of the oracle; the point decides between
    /// readings only when exactly one qualifies.
    pub consistent: Vec<String>,
}

impl Adjudication {
    pub fn decide(formula: &str, point: Params, candidates: Vec<Candidate>, oracle: Vec<f64>, tol: Tolerance) -> Self {
        let scale = max_abs(&oracle);
        let consistent = candidates
            .iter()
            .filter(|c| tol.accepts(errors(&c.values, &oracle).0, scale))
            .map(|c| c.label.clone())
            .collect();
        Adjudication {
            formula: formula.to_string(),
            point,
            candidates,
            oracle,
            consistent,
        }
    }

    pub fn decisive(&self) -> Option<&str> {
        match self.consistent.as_slice() {
            [only] => Some(only),
            _ => None,
        }
    }
}

/// Tally of one formula's adjudications across all points.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjudicationSummary {
    pub formula: String,
    pub description: &'static str,
    pub adopted: &'static str,
    /// `(reading, points where it alone agreed with the oracle)`
    pub decisive: Vec<(String, usize)>,
    /// Points where several readings agreed (the formula is insensitive there).
    pub ambiguous: usize,
    /// Points where no reading agreed.
    pub unresolved: usize,
}

impl AdjudicationSummary {
    /// The reading the oracle singles out: decisive somewhere, never beaten.
    pub fn consistent_reading(&self) -> Option<&str> {
        let winners: Vec<&(String, usize)> = self.decisive.iter().filter(|(_, n)| *n > 0).collect();
        match winners.as_slice() {
            [(label, _)] => Some(label),
            _ => None,
        }
    }
}

/// Descriptions and adopted reading of each adjudicated formula.
pub const ADJUDICATED: &[(&str, &str, &str)] = &[
    (
        "first_form.twist_sign",
        "sign of the f-weighted term in b and c",
        "symmetric",
    ),
    (
        "gauss_map.third_component",
        "third Gauss map component: theorem statement vs expanded proof",
        "theorem",
    ),
    (
        "second_form.normalizer",
        "factor 2 on the G_i G_(i+2) sum in the h_ij denominator",
        "with factor 2",
    ),
    ("second_form.h12_ruling_sign", "sign of u3 gamma'_4 inside h12", "plus"),
    (
        "second_form.h11_connection_power",
        "power of the phi_u1 components in the connection term of h11",
        "quadratic",
    ),
    (
        "second_form.normal_pairing",
        "pairing of second partials with G in h13",
        "full metric pairing",
    ),
    (
        "minimality.residual",
        "printed minimality condition vs adjugate contraction",
        "adjugate contraction",
    ),
    (
        "minimality.orthogonal",
        "printed orthogonal-director condition vs adjugate contraction with e = 0",
        "adjugate contraction",
    ),
    (
        "laplace_beltrami.expansion",
        "printed expansion vs divergence form",
        "divergence form",
    ),
    (
        "laplace_beltrami.derivative_weight",
        "weight of the determinant-derivative term",
        "one half",
    ),
    (
        "laplace_beltrami.determinant_exponent",
        "exponent of e in the type-3 denominator 2bce - a e^n",
        "2",
    ),
    (
        "director.null_target",
        "type-3 director norm: printed -1 vs light cone 0",
        "0",
    ),
];

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DiscrepancyReport {
    pub records: Vec<Record>,
    pub adjudications: Vec<Adjudication>,
}

impl DiscrepancyReport {
    pub fn count(&self, verdict: Verdict) -> usize {
        self.records.iter().filter(|r| r.verdict == verdict).count()
    }

    pub fn has_mismatch(&self) -> bool {
        self.count(Verdict::Mismatch) > 0
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| r.verdict == Verdict::Mismatch)
    }

    pub fn extend(&mut self, other: DiscrepancyReport) {
        self.records.extend(other.records);
        self.adjudications.extend(other.adjudications);
    }

    /// Per-formula verdict counts in first-seen order.
    pub fn formula_counts(&self) -> Vec<(String, [usize; 3])> {
        let mut out: Vec<(String, [usize; 3])> = Vec::new();
        for r in &self.records {
            let slot = match out.iter_mut().find(|(f, _)| *f == r.formula) {
                Some(s) => s,
                None => {
                    out.push((r.formula.clone(), [0; 3]));
                    out.last_mut().unwrap()
                }
            };
            slot.1[r.verdict as usize] += 1;
        }
        out
    }

    pub fn summaries(&self) -> Vec<AdjudicationSummary> {
        let mut out = Vec::new();
        for (formula, description, adopted) in ADJUDICATED {
            let rows: Vec<&Adjudication> = self.adjudications.iter().filter(|a| a.formula == *formula).collect();
            if rows.is_empty() {
                continue;
            }
            let mut decisive: Vec<(String, usize)> = rows[0].candidates.iter().map(|c| (c.label.clone(), 0)).collect();
            let mut ambiguous = 0;
            let mut unresolved = 0;
            for a in &rows {
                match a.consistent.len() {
                    0 => unresolved += 1,
                    1 => {
                        if let Some(slot) = decisive.iter_mut().find(|(l, _)| *l == a.consistent[0]) {
                            slot.1 += 1;
                        }
                    }
                    _ => ambiguous += 1,
                }
            }
            out.push(AdjudicationSummary {
                formula: formula.to_string(),
                description,
                adopted,
                decisive,
                ambiguous,
                unresolved,
            });
        }
        out
    }

    /// Plain-text rendering: verdict counts per formula, every mismatch, and
    /// one line per adjudicated formula.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "records: {} match, {} mismatch, {} both-degenerate",
            self.count(Verdict::Match),
            self.count(Verdict::Mismatch),
            self.count(Verdict::BothDegenerate)
        );
        for (formula, [m, mm, bd]) in self.formula_counts() {
            let _ = writeln!(s, "  {formula:<36} match={m} mismatch={mm} both_degenerate={bd}");
        }
        for r in self.mismatches() {
            let _ = writeln!(
                s,
                "MISMATCH {} at ({:e}, {:e}, {:e}): abs={:e} rel={:e}{}",
                r.formula,
                r.point[0],
                r.point[1],
                r.point[2],
                r.abs_error,
                r.rel_error,
                r.note.as_ref().map(|n| format!(" [{n}]")).unwrap_or_default()
            );
        }
        let summaries = self.summaries();
        if !summaries.is_empty() {
            let _ = writeln!(s, "adjudications:");
        }
        for sm in summaries {
            let tallies: Vec<String> = sm.decisive.iter().map(|(l, n)| format!("{l}={n}")).collect();
            let verdict = match sm.consistent_reading() {
                Some(r) if r == sm.adopted => format!("consistent reading: {r} (adopted)"),
                Some(r) => format!("consistent reading: {r} (adopted reading is {})", sm.adopted),
                None => "undecided".to_string(),
            };
            let _ = writeln!(
                s,
                "  {:<38} {}; decisive points [{}], ambiguous={}, unresolved={}; {}",
                sm.formula,
                verdict,
                tallies.join(", "),
                sm.ambiguous,
                sm.unresolved,
                sm.description
            );
        }
        s
    }
}
