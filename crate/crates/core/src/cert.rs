//! Versioned JSON certificates and their independent verification.
//!
//! Verification only uses exact primitives: Gram matrices are recomputed from
//! tuples, tuples are re-validated, and separators and Farkas vectors are
//! checked against a freshly enumerated grid.

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::cones::{self, DualMembership, MembershipStatus, SeparationResult};
use crate::error::{CpsdError, Result};
use crate::exact::{self, trace_inner_unchecked, DenominatorRule, PsdTuple, Rational, SymMatrix};
use crate::game::{self, GameResult, GameSpec, GameStatus};
use crate::graph::Graph;
use crate::gridgen::{self, ScalarGridPoint};
use crate::lp::{self, LpCertificate, LpProblem};
use crate::Limits;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConeKind {
    C,
    D,
    O,
    Ostar,
}

impl std::fmt::Display for ConeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ConeKind::C => "c",
            ConeKind::D => "d",
            ConeKind::O => "o",
            ConeKind::Ostar => "ostar",
        })
    }
}

/// Witness of a violated dual-cone inequality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Violation {
    Tuple(PsdTuple),
    Point(ScalarGridPoint),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Certificate {
    /// Result of `member-c` or `member-ostar`.
    Conic {
        cone: ConeKind,
        r: usize,
        matrix: SymMatrix,
        result: SeparationResult,
    },
    /// Result of `member-d` or `member-o`.
    Dual {
        cone: ConeKind,
        r: usize,
        matrix: SymMatrix,
        member: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        witness: Option<Violation>,
        #[serde(
            default,
            with = "exact::rational_opt_serde",
            skip_serializing_if = "Option::is_none"
        )]
        value: Option<Rational>,
    },
    Game {
        result: GameResult,
    },
    Lp {
        problem: LpProblem,
        certificate: LpCertificate,
    },
}

/// A certificate wrapped with its schema version.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub schema: u32,
    #[serde(flatten)]
    pub body: Certificate,
}

impl CertificateFile {
    pub fn new(body: Certificate) -> Self {
        Self {
            schema: SCHEMA,
            body,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: Self = serde_json::from_str(text)?;
        if f.schema != SCHEMA {
            return Err(CpsdError::InvalidArgument(format!(
                "unsupported certificate schema {}",
                f.schema
            )));
        }
        Ok(f)
    }
}

impl Certificate {
    pub fn from_dual_d(matrix: &SymMatrix, r: usize, d: DualMembership<PsdTuple>) -> Self {
        let (member, witness, value) = match d {
            DualMembership::Member => (true, None, None),
            DualMembership::Violated { witness, value } => {
                (false, Some(Violation::Tuple(witness)), Some(value))
            }
        };
        Certificate::Dual {
            cone: ConeKind::D,
            r,
            matrix: matrix.clone(),
            member,
            witness,
            value,
        }
    }

    pub fn from_dual_o(matrix: &SymMatrix, r: usize, d: DualMembership<ScalarGridPoint>) -> Self {
        let (member, witness, value) = match d {
            DualMembership::Member => (true, None, None),
            DualMembership::Violated { witness, value } => {
                (false, Some(Violation::Point(witness)), Some(value))
            }
        };
        Certificate::Dual {
            cone: ConeKind::O,
            r,
            matrix: matrix.clone(),
            member,
            witness,
            value,
        }
    }
}

/// The input a certificate claims to be about.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Problem {
    Matrix(SymMatrix),
    Graph(Graph),
    Lp(LpProblem),
}

fn check_same_matrix(expected: &SymMatrix, given: &SymMatrix) -> Result<bool> {
    if expected.dim() != given.dim() {
        return Err(CpsdError::DimensionMismatch {
            expected: expected.dim(),
            found: given.dim(),
        });
    }
    Ok(expected.clone().without_index() == given.clone().without_index())
}

/// Re-checks a certificate. With `problem`, also checks that the certificate
/// is about that input. Dimension disagreements are errors; every other
/// defect yields `Ok(false)`.
pub fn verify(cert: &CertificateFile, problem: Option<&Problem>, limits: &Limits) -> Result<bool> {
    if cert.schema != SCHEMA {
        return Ok(false);
    }
    match (&cert.body, problem) {
        (
            Certificate::Conic { matrix, .. } | Certificate::Dual { matrix, .. },
            Some(Problem::Matrix(m)),
        ) => {
            if !check_same_matrix(matrix, m)? {
                return Ok(false);
            }
        }
        (Certificate::Game { result }, Some(Problem::Graph(g))) => {
            if g.n() != result.graph.n() {
                return Err(CpsdError::DimensionMismatch {
                    expected: result.graph.n(),
                    found: g.n(),
                });
            }
            if *g != result.graph {
                return Ok(false);
            }
        }
        (Certificate::Lp { problem: p, .. }, Some(Problem::Lp(q))) => {
            if p.vars != q.vars {
                return Err(CpsdError::DimensionMismatch {
                    expected: p.vars,
                    found: q.vars,
                });
            }
            if p != q {
                return Ok(false);
            }
        }
        (_, None) => {}
        (_, Some(_)) => {
            return Err(CpsdError::InvalidArgument(
                "problem file does not match the certificate type".into(),
            ))
        }
    }
    match &cert.body {
        Certificate::Conic {
            cone,
            r,
            matrix,
            result,
        } => verify_conic(*cone, *r, matrix, result, limits),
        Certificate::Dual {
            cone,
            r,
            matrix,
            member,
            witness,
            value,
        } => verify_dual(
            *cone,
            *r,
            matrix,
            *member,
            witness.as_ref(),
            value.as_ref(),
            limits,
        ),
        Certificate::Game { result } => verify_game(result, limits),
        Certificate::Lp {
            problem,
            certificate,
        } => Ok(problem.validate().is_ok() && lp::verify_certificate(problem, certificate)),
    }
}

fn conic_generators(cone: ConeKind, n: usize, r: usize, limits: &Limits) -> Result<Vec<SymMatrix>> {
    Ok(match cone {
        ConeKind::C => cones::build_generators(n, r, limits)?.grams,
        ConeKind::Ostar => gridgen::enum_scalar_grid(n, r)
            .iter()
            .map(|v| SymMatrix::outer(&v.coords))
            .collect(),
        _ => unreachable!("not a conic hull"),
    })
}

fn verify_conic(
    cone: ConeKind,
    r: usize,
    a: &SymMatrix,
    res: &SeparationResult,
    limits: &Limits,
) -> Result<bool> {
    if !matches!(cone, ConeKind::C | ConeKind::Ostar) || r == 0 {
        return Ok(false);
    }
    let n = a.dim();
    match res.status {
        MembershipStatus::Member => {
            let Some(weights) = &res.weights else {
                return Ok(false);
            };
            let mut acc = SymMatrix::zeros(n);
            for w in weights {
                if w.weight.is_negative() {
                    return Ok(false);
                }
                let g = match cone {
                    ConeKind::C => {
                        let Some(t) = &w.tuple else { return Ok(false) };
                        if t.r() > r || t.n() != n || t.validate(DenominatorRule::PerEntry).is_err()
                        {
                            return Ok(false);
                        }
                        cones::gram(t)
                    }
                    _ => {
                        let Some(p) = &w.point else { return Ok(false) };
                        if !on_scalar_grid(p, n, r) {
                            return Ok(false);
                        }
                        SymMatrix::outer(&p.coords)
                    }
                };
                if g != w.gram.clone().without_index() {
                    return Ok(false);
                }
                acc.add_scaled(&w.weight, &g)?;
            }
            Ok(acc == a.clone().without_index())
        }
        MembershipStatus::Separated => {
            let Some(m) = &res.separator else {
                return Ok(false);
            };
            if m.dim() != n || !trace_inner_unchecked(m, a).is_negative() {
                return Ok(false);
            }
            let gens = conic_generators(cone, n, r, limits)?;
            Ok(gens
                .iter()
                .all(|g| !trace_inner_unchecked(m, g).is_negative()))
        }
    }
}

fn on_scalar_grid(p: &ScalarGridPoint, n: usize, r: usize) -> bool {
    use num_traits::One;
    p.coords.len() == n
        && p.coords.iter().all(|c| {
            !c.is_negative() && (c * Rational::from_integer((r as i64).into())).is_integer()
        })
        && p.coords.iter().sum::<Rational>().is_one()
}

fn verify_dual(
    cone: ConeKind,
    r: usize,
    m: &SymMatrix,
    member: bool,
    witness: Option<&Violation>,
    value: Option<&Rational>,
    limits: &Limits,
) -> Result<bool> {
    if r == 0 {
        return Ok(false);
    }
    let n = m.dim();
    if member {
        // membership has no short proof: rescan the grid
        return Ok(match cone {
            ConeKind::D => cones::member_d(m, r, limits)?.is_member(),
            ConeKind::O => cones::member_o(m, r)?.is_member(),
            _ => false,
        });
    }
    let (Some(w), Some(value)) = (witness, value) else {
        return Ok(false);
    };
    let v = match (cone, w) {
        (ConeKind::D, Violation::Tuple(t)) => {
            if t.r() > r || t.n() != n || t.validate(DenominatorRule::PerEntry).is_err() {
                return Ok(false);
            }
            trace_inner_unchecked(m, &cones::gram(t))
        }
        (ConeKind::O, Violation::Point(p)) => {
            if !on_scalar_grid(p, n, r) {
                return Ok(false);
            }
            m.quad_form(&p.coords)?
        }
        _ => return Ok(false),
    };
    Ok(v.is_negative() && v == *value)
}

fn verify_game(res: &GameResult, limits: &Limits) -> Result<bool> {
    if res.steps.is_empty() || res.k == 0 || res.r == 0 {
        return Ok(false);
    }
    let cache = game::GeneratorCache::new();
    for (pos, step) in res.steps.iter().enumerate() {
        if step.t != pos + 1 || step.t > res.t_max {
            return Ok(false);
        }
        let spec = GameSpec {
            graph: res.graph.clone(),
            t: step.t,
            k: res.k,
            r: res.r,
            variant: res.variant,
        };
        let last = pos + 1 == res.steps.len();
        if step.feasible {
            if !last || res.status != GameStatus::Feasible || res.t != Some(step.t) {
                return Ok(false);
            }
            let Some(sol) = &res.solution else {
                return Ok(false);
            };
            if !game::verify_solution(&spec, sol)? {
                return Ok(false);
            }
        } else {
            let Some(y) = &step.farkas else {
                return Ok(false);
            };
            let gens = cache.get(spec.index().dim(), res.r, limits, 1)?;
            if !game::verify_infeasible(&spec, y, &gens)? {
                return Ok(false);
            }
        }
    }
    if res.status == GameStatus::NoneUpTo
        && (res.t.is_some() || res.solution.is_some() || res.steps.len() != res.t_max)
    {
        return Ok(false);
    }
    Ok(true)
}
