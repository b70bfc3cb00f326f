//! Integer-programming formulations of the layering variants.
//!
//! Two model families target the same objectives:
//!
//! * [`qla`] — an assignment formulation with binary layer indicators
//!   `x_v_k` and continuous product variables `p_u_k_v_l` that linearize
//!   every quadratic term `x_u_k * x_v_l` along an arc;
//! * [`cgl`] — an ordering formulation with binary cut indicators `y_k_v`
//!   ("vertex `v` lies below layer `k`"), per-arc reversal flags `r_u_v`,
//!   and per-arc-per-layer dummy flags `d_u_v_k`.
//!
//! Both builders emit a small model IR ([`ModelIr`]) holding variables,
//! linear constraints, a minimization objective with exact rational
//! coefficients, and variable fixings. The IR can evaluate its objective at
//! a point, check a point against every constraint exactly, be written as
//! an LP-format file ([`lp::write_lp`]), and absorb a solver's solution
//! file ([`solution::read_solution`]).
//!
//! Variable naming is stable and documented here: `x_{v}_{k}`,
//! `p_{u}_{k}_{v}_{l}`, `y_{k}_{v}`, `r_{u}_{v}`, `d_{u}_{v}_{k}`, plus the
//! scalars `W` (width) and `Sbar` (inverse scale). When parallel arcs make
//! per-arc names collide, the second and later copies get an `_a2`, `_a3`,
//! ... suffix so every name stays unique.

pub mod cgl;
pub mod lp;
pub mod qla;
pub mod solution;

pub use cgl::{build_cgl, CglIndex};
pub use lp::write_lp;
pub use qla::{build_qla, QlaIndex};
pub use solution::read_solution;

use num::rational::BigRational;
use num::{BigInt, Signed, Zero};
use std::fmt;
use thiserror::Error;

use crate::metrics::{MetricsError, Variant};

/// Errors from model construction, encoding, decoding, and checking.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("layer cap {y} too small for this family (minimum {min})")]
    YTooSmall { y: u32, min: u32 },
    #[error("the {family} family does not support variant `{variant}`")]
    VariantUnsupported {
        family: &'static str,
        variant: Variant,
    },
    #[error("layering cap {got} does not match the model's layer cap {expected}")]
    CapMismatch { expected: u32, got: u32 },
    #[error("point has {got} entries but the model declares {expected} variables")]
    PointSizeMismatch { expected: usize, got: usize },
    #[error("vertex {vertex}: no layer indicator set")]
    DecodeNoLayer { vertex: usize },
    #[error("vertex {vertex}: layer indicators for layers {first} and {second} both set")]
    DecodeMultipleLayers {
        vertex: usize,
        first: u32,
        second: u32,
    },
    #[error("vertex {vertex}: ordering indicators not monotone at layer {k}")]
    DecodeNonMonotone { vertex: usize, k: u32 },
    #[error("variable `{name}` has non-binary value `{value}`")]
    NotBinaryValue { name: String, value: String },
    #[error("unknown variable `{0}` in solution file")]
    UnknownVariable(String),
    #[error("variable `{0}` assigned more than once in solution file")]
    DuplicateAssignment(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("`{name}` violated: {detail}")]
    Violated { name: String, detail: String },
    #[error("bound value for `{name}` is not representable as a finite decimal")]
    NonDecimalBound { name: String },
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

/// Index of a variable within its [`ModelIr`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub usize);

/// Variable domain kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    /// Integer restricted to {0, 1} (intersected with its bounds).
    Binary,
    /// Continuous within its bounds.
    Continuous,
}

/// A declared variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarDef {
    pub name: String,
    pub kind: VarKind,
    pub lower: BigRational,
    /// `None` means unbounded above.
    pub upper: Option<BigRational>,
}

/// Comparison sense of a linear constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        })
    }
}

/// A linear constraint `sum(coef * var) sense rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(VarId, BigRational)>,
    pub sense: Sense,
    pub rhs: BigRational,
}

/// A linear minimization objective with an additive constant.
///
/// Only nonzero coefficients are stored; the constant participates in
/// [`ModelIr::objective_at`] and in the written LP file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Objective {
    pub terms: Vec<(VarId, BigRational)>,
    pub constant: BigRational,
}

/// A mixed-binary linear model with exact rational data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelIr {
    pub name: String,
    pub vars: Vec<VarDef>,
    pub constraints: Vec<Constraint>,
    pub objective: Objective,
    /// Variables pinned to a value (written as equal bounds in LP output
    /// and enforced by [`check_point`](Self::check_point)).
    pub fixings: Vec<(VarId, BigRational)>,
    /// Human-readable caveats attached by builders (e.g. degenerate weight
    /// choices); never affects semantics.
    pub notes: Vec<String>,
}

impl ModelIr {
    pub(crate) fn new(name: String) -> Self {
        ModelIr {
            name,
            vars: Vec::new(),
            constraints: Vec::new(),
            objective: Objective {
                terms: Vec::new(),
                constant: BigRational::zero(),
            },
            fixings: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub(crate) fn add_var(
        &mut self,
        name: String,
        kind: VarKind,
        lower: BigRational,
        upper: Option<BigRational>,
    ) -> VarId {
        self.vars.push(VarDef {
            name,
            kind,
            lower,
            upper,
        });
        VarId(self.vars.len() - 1)
    }

    pub(crate) fn add_constraint(
        &mut self,
        name: String,
        terms: Vec<(VarId, BigRational)>,
        sense: Sense,
        rhs: BigRational,
    ) {
        self.constraints.push(Constraint {
            name,
            terms,
            sense,
            rhs,
        });
    }

    /// Add `coef * var` to the objective, dropping zero coefficients.
    pub(crate) fn add_objective_term(&mut self, var: VarId, coef: BigRational) {
        if !coef.is_zero() {
            self.objective.terms.push((var, coef));
        }
    }

    /// Number of declared variables.
    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    /// Number of constraint rows (fixings not included).
    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    /// Variable definition by id.
    pub fn var(&self, id: VarId) -> &VarDef {
        &self.vars[id.0]
    }

    /// Find a variable id by its exact name.
    pub fn var_by_name(&self, name: &str) -> Option<VarId> {
        self.vars
            .iter()
            .position(|v| v.name == name)
            .map(VarId)
    }

    /// Exact objective value at a point (one entry per declared variable).
    pub fn objective_at(&self, point: &[BigRational]) -> Result<BigRational, ModelError> {
        if point.len() != self.vars.len() {
            return Err(ModelError::PointSizeMismatch {
                expected: self.vars.len(),
                got: point.len(),
            });
        }
        let mut total = self.objective.constant.clone();
        for (id, coef) in &self.objective.terms {
            total += coef * &point[id.0];
        }
        Ok(total)
    }

    /// Check a point against every bound, integrality condition, fixing,
    /// and constraint, exactly. Returns the first violation found.
    pub fn check_point(&self, point: &[BigRational]) -> Result<(), ModelError> {
        if point.len() != self.vars.len() {
            return Err(ModelError::PointSizeMismatch {
                expected: self.vars.len(),
                got: point.len(),
            });
        }
        let one = BigRational::from_integer(BigInt::from(1));
        for (def, value) in self.vars.iter().zip(point) {
            if *value < def.lower {
                return Err(ModelError::Violated {
                    name: def.name.clone(),
                    detail: format!("value {} below lower bound {}", value, def.lower),
                });
            }
            if let Some(upper) = &def.upper {
                if value > upper {
                    return Err(ModelError::Violated {
                        name: def.name.clone(),
                        detail: format!("value {} above upper bound {}", value, upper),
                    });
                }
            }
            if def.kind == VarKind::Binary && !value.is_zero() && *value != one {
                return Err(ModelError::Violated {
                    name: def.name.clone(),
                    detail: format!("binary variable has value {}", value),
                });
            }
        }
        for (id, fixed) in &self.fixings {
            if point[id.0] != *fixed {
                return Err(ModelError::Violated {
                    name: self.vars[id.0].name.clone(),
                    detail: format!("fixed to {} but has value {}", fixed, point[id.0]),
                });
            }
        }
        for c in &self.constraints {
            let mut lhs = BigRational::zero();
            for (id, coef) in &c.terms {
                lhs += coef * &point[id.0];
            }
            let ok = match c.sense {
                Sense::Le => lhs <= c.rhs,
                Sense::Ge => lhs >= c.rhs,
                Sense::Eq => lhs == c.rhs,
            };
            if !ok {
                return Err(ModelError::Violated {
                    name: c.name.clone(),
                    detail: format!("lhs {} {} rhs {} fails", lhs, c.sense, c.rhs),
                });
            }
        }
        Ok(())
    }
}

/// Name suffix distinguishing parallel arcs: empty for the first copy of a
/// `(tail, head)` pair, `_a2`, `_a3`, ... for later copies.
pub(crate) fn parallel_suffixes(arcs: &[(usize, usize)]) -> Vec<String> {
    let mut seen: std::collections::HashMap<(usize, usize), usize> =
        std::collections::HashMap::new();
    arcs.iter()
        .map(|&a| {
            let count = seen.entry(a).or_insert(0);
            *count += 1;
            if *count == 1 {
                String::new()
            } else {
                format!("_a{}", *count)
            }
        })
        .collect()
}

pub(crate) fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub(crate) fn bigu(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// True when a rational can be written as a finite decimal (denominator has
/// only factors 2 and 5).
pub(crate) fn is_finite_decimal(r: &BigRational) -> bool {
    let mut d = r.denom().abs();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let zero = BigInt::zero();
    while (&d % &two) == zero {
        d /= &two;
    }
    while (&d % &five) == zero {
        d /= &five;
    }
    d == BigInt::from(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn toy_model() -> ModelIr {
        let mut m = ModelIr::new("toy".into());
        let a = m.add_var("a".into(), VarKind::Binary, big(0), Some(big(1)));
        let b = m.add_var("b".into(), VarKind::Continuous, big(0), Some(big(1)));
        m.add_constraint(
            "sum".into(),
            vec![(a, big(1)), (b, big(2))],
            Sense::Le,
            rat(3, 2),
        );
        m.add_objective_term(a, big(5));
        m.add_objective_term(b, rat(1, 2));
        m.objective.constant = big(1);
        m.fixings.push((a, big(0)));
        m
    }

    #[test]
    fn objective_at_includes_constant() {
        let m = toy_model();
        let val = m.objective_at(&[big(0), rat(1, 2)]).unwrap();
        assert_eq!(val, rat(5, 4));
        assert!(m.objective_at(&[big(0)]).is_err());
    }

    #[test]
    fn check_point_catches_violations() {
        let m = toy_model();
        assert!(m.check_point(&[big(0), rat(1, 2)]).is_ok());
        // Fixing violated.
        assert!(matches!(
            m.check_point(&[big(1), big(0)]),
            Err(ModelError::Violated { name, .. }) if name == "a"
        ));
        // Constraint violated.
        assert!(matches!(
            m.check_point(&[big(0), big(1)]),
            Err(ModelError::Violated { name, .. }) if name == "sum"
        ));
        // Bound violated.
        assert!(matches!(
            m.check_point(&[big(0), big(2)]),
            Err(ModelError::Violated { name, .. }) if name == "b"
        ));
    }

    #[test]
    fn binary_integrality_is_exact() {
        let mut m = ModelIr::new("bin".into());
        m.add_var("x".into(), VarKind::Binary, big(0), Some(big(1)));
        assert!(m.check_point(&[rat(1, 2)]).is_err());
        assert!(m.check_point(&[big(1)]).is_ok());
    }

    #[test]
    fn parallel_arc_suffixes() {
        let arcs = vec![(0, 1), (1, 2), (0, 1), (0, 1)];
        assert_eq!(parallel_suffixes(&arcs), vec!["", "", "_a2", "_a3"]);
    }

    #[test]
    fn finite_decimal_detection() {
        assert!(is_finite_decimal(&rat(3, 2)));
        assert!(is_finite_decimal(&rat(7, 40)));
        assert!(!is_finite_decimal(&rat(1, 3)));
        assert!(is_finite_decimal(&rat(5, 1)));
    }
}
