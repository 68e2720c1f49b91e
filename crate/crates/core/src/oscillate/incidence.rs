//! Incidences `A^n(p_i) = p_j` along orbits of a linear map.

use crate::cremona::{IntPoint, PlaneBirationalMap};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

/// Set of exponents `n >= 1` at which an incidence holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Times {
    Never,
    Always,
    Even,
    Odd,
    Once(u64),
}

impl Times {
    fn meet(self, other: Times) -> Times {
        use Times::*;
        match (self, other) {
            (Never, _) | (_, Never) => Never,
            (Always, t) | (t, Always) => t,
            (Even, Even) => Even,
            (Odd, Odd) => Odd,
            (Even, Odd) | (Odd, Even) => Never,
            (Even, Once(n)) | (Once(n), Even) => {
                if n % 2 == 0 {
                    Once(n)
                } else {
                    Never
                }
            }
            (Odd, Once(n)) | (Once(n), Odd) => {
                if n % 2 == 1 {
                    Once(n)
                } else {
                    Never
                }
            }
            (Once(a), Once(b)) => {
                if a == b {
                    Once(a)
                } else {
                    Never
                }
            }
        }
    }

    pub fn contains(self, n: u64) -> bool {
        match self {
            Times::Never => false,
            Times::Always => n >= 1,
            Times::Even => n >= 1 && n % 2 == 0,
            Times::Odd => n % 2 == 1,
            Times::Once(m) => m == n,
        }
    }
}

/// One ordered incidence `A^n(points[from]) = points[to]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Incidence {
    pub from: usize,
    pub to: usize,
    pub times: Times,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceTable {
    pub horizon: u64,
    /// True when `incidences` lists every `n >= 1`, not only those up to the horizon.
    pub complete: bool,
    pub incidences: Vec<Incidence>,
}

impl IncidenceTable {
    pub fn holds(&self, from: usize, to: usize, n: u64) -> bool {
        self.incidences.iter().any(|i| i.from == from && i.to == to && i.times.contains(n))
    }

    /// Pairs incident at step `n`.
    pub fn at(&self, n: u64) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.incidences.iter().filter(move |i| i.times.contains(n)).map(|i| (i.from, i.to))
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .incidences
            .iter()
            .map(|i| {
                let times = match i.times {
                    Times::Never => json!("never"),
                    Times::Always => json!("always"),
                    Times::Even => json!("even"),
                    Times::Odd => json!("odd"),
                    Times::Once(n) => json!(n),
                };
                json!({"from": i.from, "to": i.to, "n": times})
            })
            .collect();
        json!({"horizon": self.horizon, "complete": self.complete, "incidences": entries})
    }
}

/// Diagonal entries of a diagonal linear map.
pub fn diagonal_weights(a: &PlaneBirationalMap) -> Option<[BigRational; 3]> {
    if a.degree() != 1 {
        return None;
    }
    let mut w: [BigRational; 3] = [BigRational::zero(), BigRational::zero(), BigRational::zero()];
    for (i, c) in a.components().iter().enumerate() {
        let terms: Vec<_> = c.terms().collect();
        if terms.len() != 1 || terms[0].0[i] != 1 {
            return None;
        }
        w[i] = terms[0].1.clone();
    }
    Some(w)
}

/// Exponents `n >= 1` with `base^n = target`.
fn power_solutions(base: &BigRational, target: &BigRational) -> Times {
    if base.is_one() {
        return if target.is_one() { Times::Always } else { Times::Never };
    }
    if *base == -BigRational::one() {
        return if target.is_one() {
            Times::Even
        } else if *target == -BigRational::one() {
            Times::Odd
        } else {
            Times::Never
        };
    }
    // heights of base^n grow strictly, so the search ends once they pass the target's
    let height = |q: &BigRational| q.numer().abs().max(q.denom().abs());
    let limit = height(target);
    let mut power = base.clone();
    let mut n = 1u64;
    while height(&power) <= limit {
        if power == *target {
            return Times::Once(n);
        }
        power = &power * base;
        n += 1;
    }
    Times::Never
}

/// Exponents with `diag(w)^n p = q` projectively.
fn diagonal_times(w: &[BigRational; 3], p: &IntPoint, q: &IntPoint) -> Times {
    let support: Vec<usize> = (0..3).filter(|&i| !p[i].is_zero()).collect();
    if support != (0..3).filter(|&i| !q[i].is_zero()).collect::<Vec<_>>() {
        return Times::Never;
    }
    let k = support[0];
    let as_q = |v: &BigInt| BigRational::from(v.clone());
    support[1..].iter().fold(Times::Always, |acc, &i| {
        let base = &w[i] / &w[k];
        let target = (as_q(&q[i]) * as_q(&p[k])) / (as_q(&p[i]) * as_q(&q[k]));
        acc.meet(power_solutions(&base, &target))
    })
}

/// Incidences among `points` under iterates of `a`, for `1 <= n <= horizon`.
///
/// For a diagonal map the table is decided for every `n` and marked complete;
/// otherwise iterates are applied up to the horizon.
pub fn orbit_incidences(a: &PlaneBirationalMap, points: &[IntPoint], horizon: u64) -> Result<IncidenceTable> {
    if a.degree() != 1 {
        return Err(Error::Precondition("orbit incidences need a linear map".into()));
    }
    let mut incidences = Vec::new();
    if let Some(w) = diagonal_weights(a) {
        for (i, p) in points.iter().enumerate() {
            for (j, q) in points.iter().enumerate() {
                let times = diagonal_times(&w, p, q);
                if times != Times::Never {
                    incidences.push(Incidence { from: i, to: j, times });
                }
            }
        }
        return Ok(IncidenceTable { horizon, complete: true, incidences });
    }
    let mut current: Vec<IntPoint> = points.to_vec();
    for n in 1..=horizon {
        current = current
            .iter()
            .map(|p| a.apply_int(p).ok_or_else(|| Error::InvalidInput("linear map is singular".into())))
            .collect::<Result<_>>()?;
        for (i, p) in current.iter().enumerate() {
            for (j, q) in points.iter().enumerate() {
                if p == q {
                    incidences.push(Incidence { from: i, to: j, times: Times::Once(n) });
                }
            }
        }
    }
    Ok(IncidenceTable { horizon, complete: false, incidences })
}
