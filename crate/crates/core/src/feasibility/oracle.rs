//! Exact-rational Fourier–Motzkin decision of `∃ λ ≥ 0, Σλ > 0, Σ λ_j g_j ≤ v`.
//!
//! Shares nothing with the LP path: it works on the original strict system,
//! over arbitrary-precision rationals, and eliminates one coefficient at a
//! time. Only meant for small instances.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::options::OptionVec;

pub const MAX_GENERATORS: usize = 6;
pub const MAX_DIMENSION: usize = 4;
const MAX_ROWS: usize = 50_000;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Row {
    coeffs: Vec<BigRational>,
    rhs: BigRational,
    /// `coeffs · λ < rhs` instead of `≤`.
    strict: bool,
}

impl Row {
    /// Scale so the first nonzero coefficient has magnitude one.
    fn normalized(mut self) -> Row {
        if let Some(lead) = self.coeffs.iter().find(|c| !c.is_zero()).map(|c| c.abs()) {
            for c in &mut self.coeffs {
                *c = &*c / &lead;
            }
            self.rhs = &self.rhs / &lead;
        }
        self
    }
}

fn exact(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::InvalidArgument(format!("{x} is not a finite rational")))
}

/// Exact answer to IsFeasible(`g`, `v`).
pub fn fm_oracle(g: &[OptionVec], v: &OptionVec) -> Result<bool> {
    if g.len() > MAX_GENERATORS {
        return Err(Error::OracleLimit(format!("{} generators (max {MAX_GENERATORS})", g.len())));
    }
    if v.dim() > MAX_DIMENSION {
        return Err(Error::OracleLimit(format!("dimension {} (max {MAX_DIMENSION})", v.dim())));
    }
    for gi in g {
        gi.check_dim(v)?;
    }
    let m = g.len();
    let zero = BigRational::zero();
    let one = BigRational::from_integer(BigInt::from(1));
    let mut rows = Vec::new();
    for x in 0..v.dim() {
        rows.push(Row {
            coeffs: g.iter().map(|gj| exact(gj[x])).collect::<Result<_>>()?,
            rhs: exact(v[x])?,
            strict: false,
        });
    }
    for j in 0..m {
        let mut coeffs = vec![zero.clone(); m];
        coeffs[j] = -one.clone();
        rows.push(Row { coeffs, rhs: zero.clone(), strict: false });
    }
    rows.push(Row { coeffs: vec![-one.clone(); m], rhs: zero.clone(), strict: true });

    for k in 0..m {
        let (mut pos, mut neg, mut keep) = (Vec::new(), Vec::new(), Vec::new());
        for r in rows {
            if r.coeffs[k].is_positive() {
                pos.push(r);
            } else if r.coeffs[k].is_negative() {
                neg.push(r);
            } else {
                keep.push(r);
            }
        }
        if pos.len() * neg.len() + keep.len() > MAX_ROWS {
            return Err(Error::OracleLimit("elimination produced too many rows".into()));
        }
        for p in &pos {
            for n in &neg {
                let a = &p.coeffs[k];
                let b = -&n.coeffs[k];
                let coeffs = p.coeffs.iter().zip(&n.coeffs).map(|(pc, nc)| pc / a + nc / &b).collect();
                let rhs = &p.rhs / a + &n.rhs / &b;
                keep.push(Row { coeffs, rhs, strict: p.strict || n.strict });
            }
        }
        let mut next: Vec<Row> = keep.into_iter().map(Row::normalized).collect();
        next.sort();
        next.dedup();
        rows = next;
    }
    Ok(rows.iter().all(|r| if r.strict { r.rhs.is_positive() } else { !r.rhs.is_negative() }))
}
