//! Membership predicates for the natural-extension cone of a finite option set.
//!
//! Everything here reduces to one question: given options `g_1..g_m` and an
//! option `v`, is there a nonnegative, nonzero coefficient vector `λ` with
//! `Σ λ_j g_j ≤ v`? The strict "nonzero" requirement is removed by the
//! homogenised system
//!
//! ```text
//! μ_{m+1} v(x) − Σ_k μ_k g_k(x) ≥ 0   for every state x
//! Σ_{k≤m} μ_k ≥ 1,   μ_{m+1} ≥ 1,   μ_k ≥ 0
//! ```
//!
//! which is handed to a [`FeasibilitySolver`]. Singletons are decided in
//! closed form (a ray `λ g` meets the lower set of `v` for some `λ > 0`).

use crate::error::{Error, Result};
use crate::options::{is_positive, OptionVec, ToleranceConfig};
use crate::simplex::{Constraint, DenseSimplex, FeasibilitySolver, LinearFeasibility, LpOutcome, Sense};

/// Slack on the phase-one objective attributed to the solver itself.
const SOLVER_EPS: f64 = 1e-10;

/// Builds the homogenised feasibility system for `(g, v)`.
///
/// Variables are `μ_1..μ_m` followed by `t = μ_{m+1} − 1 ≥ 0`.
pub fn feasibility_system(g: &[OptionVec], v: &OptionVec) -> Result<LinearFeasibility> {
    for gi in g {
        gi.check_dim(v)?;
    }
    let m = g.len();
    let mut constraints = Vec::with_capacity(v.dim() + 1);
    for x in 0..v.dim() {
        // Σ μ_k g_k(x) − t v(x) ≤ v(x)
        let mut coeffs = Vec::with_capacity(m + 1);
        coeffs.extend(g.iter().map(|gk| gk[x]));
        coeffs.push(-v[x]);
        constraints.push(Constraint { coeffs, sense: Sense::Le, rhs: v[x] });
    }
    let mut sum = vec![1.0; m + 1];
    sum[m] = 0.0;
    constraints.push(Constraint { coeffs: sum, sense: Sense::Ge, rhs: 1.0 });
    Ok(LinearFeasibility { num_vars: m + 1, constraints })
}

/// Solves the homogenised system with the given backend and maps the result
/// back to `μ` coordinates (length `m + 1`, last entry `μ_{m+1} ≥ 1`).
pub fn feasibility_witness_with<S: FeasibilitySolver + ?Sized>(
    solver: &S,
    g: &[OptionVec],
    v: &OptionVec,
    cfg: &ToleranceConfig,
) -> Result<LpOutcome> {
    if g.is_empty() {
        // the constraint Σ μ_k ≥ 1 reads 0 ≥ 1
        return Ok(LpOutcome { feasible: false, witness: None });
    }
    let system = feasibility_system(g, v)?;
    let mut out = solver.solve(&system, SOLVER_EPS + cfg.lp_tol)?;
    if let Some(w) = out.witness.as_mut() {
        if let Some(last) = w.last_mut() {
            *last += 1.0;
        }
    }
    Ok(out)
}

/// [`feasibility_witness_with`] on the default dense simplex backend.
pub fn feasibility_witness(g: &[OptionVec], v: &OptionVec, cfg: &ToleranceConfig) -> Result<LpOutcome> {
    feasibility_witness_with(&DenseSimplex, g, v, cfg)
}

/// Is there `λ > 0` with `λ g ≤ v`?
fn ray_below(g: &OptionVec, v: &OptionVec) -> bool {
    let mut lo = 0.0f64;
    let mut hi = f64::INFINITY;
    for (&gx, &vx) in g.values().iter().zip(v.values()) {
        if gx > 0.0 {
            hi = hi.min(vx / gx);
        } else if gx < 0.0 {
            lo = lo.max(vx / gx);
        } else if vx < 0.0 {
            return false;
        }
    }
    hi > 0.0 && lo <= hi
}

/// Whether `Σ λ_j g_j ≤ v` for some `(λ_1..λ_m) > 0`, using `solver` for
/// sets the closed form does not settle.
pub fn is_feasible_with<S: FeasibilitySolver + ?Sized>(
    solver: &S,
    g: &[OptionVec],
    v: &OptionVec,
    cfg: &ToleranceConfig,
) -> Result<bool> {
    for gi in g {
        gi.check_dim(v)?;
    }
    match g {
        [] => Ok(false),
        [single] => Ok(ray_below(single, v)),
        _ => {
            if g.iter().any(|gi| ray_below(gi, v)) {
                return Ok(true);
            }
            Ok(feasibility_witness_with(solver, g, v, cfg)?.feasible)
        }
    }
}

/// IsFeasible on the default backend.
pub fn is_feasible(g: &[OptionVec], v: &OptionVec, cfg: &ToleranceConfig) -> Result<bool> {
    is_feasible_with(&DenseSimplex, g, v, cfg)
}

/// `v ∈ 𝒩(G)`: `v` is positive, or dominates a positive combination of `G`.
pub fn in_natural_extension(g: &[OptionVec], v: &OptionVec, cfg: &ToleranceConfig) -> Result<bool> {
    for gi in g {
        gi.check_dim(v)?;
    }
    if is_positive(v, cfg) {
        return Ok(true);
    }
    is_feasible(g, v, cfg)
}

/// `u ⊴ v`, i.e. `v ∈ 𝒩({u})`: whenever `u` is desirable so is `v`.
pub fn option_ord(u: &OptionVec, v: &OptionVec, cfg: &ToleranceConfig) -> Result<bool> {
    u.check_dim(v)?;
    Ok(is_positive(v, cfg) || ray_below(u, v))
}

/// `G1 ⪯ G2`, i.e. `G2 ⊆ 𝒩(G1)`: the set `G1` carries no information beyond `G2`.
pub fn g_ord(g1: &[OptionVec], g2: &[OptionVec], cfg: &ToleranceConfig) -> Result<bool> {
    for g in g2 {
        if is_positive(g, cfg) {
            continue;
        }
        if !is_feasible(g1, g, cfg)? {
            return Ok(false);
        }
    }
    if let (Some(a), Some(b)) = (g1.first(), g2.first()) {
        a.check_dim(b)?;
    }
    Ok(true)
}

/// Checks a witness `μ` against the homogenised system, allowing `slack`
/// per constraint relative to the magnitude of the terms involved.
pub fn witness_satisfies(g: &[OptionVec], v: &OptionVec, mu: &[f64], slack: f64) -> Result<bool> {
    let m = g.len();
    if mu.len() != m + 1 {
        return Err(Error::DimensionMismatch { expected: m + 1, found: mu.len() });
    }
    if mu.iter().any(|&x| x < -slack) || mu[m] < 1.0 - slack || mu[..m].iter().sum::<f64>() < 1.0 - slack {
        return Ok(false);
    }
    for x in 0..v.dim() {
        let mut value = mu[m] * v[x];
        let mut magnitude = (mu[m] * v[x]).abs();
        for (k, gk) in g.iter().enumerate() {
            value -= mu[k] * gk[x];
            magnitude += (mu[k] * gk[x]).abs();
        }
        if value < -slack * magnitude.max(1.0) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(feature = "oracle")]
pub mod oracle;
