use super::map::PlaneBirationalMap;
use crate::error::{Error, Result};
use crate::exactalg::modp::{self, binary_gcd_degree, restrict_to_line, substitute_forms, BinaryForm, LineP};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

/// Default limit on total decimal digits held by one iterate.
pub const DEFAULT_BUDGET_DIGITS: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GrowthClass {
    Elliptic,
    Jonquieres,
    Halphen,
    Loxodromic,
    Unknown,
}

impl GrowthClass {
    pub fn as_str(self) -> &'static str {
        match self {
            GrowthClass::Elliptic => "elliptic",
            GrowthClass::Jonquieres => "jonquieres",
            GrowthClass::Halphen => "halphen",
            GrowthClass::Loxodromic => "loxodromic",
            GrowthClass::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Certificate {
    Proved,
    Heuristic,
}

impl Certificate {
    pub fn as_str(self) -> &'static str {
        match self {
            Certificate::Proved => "proved",
            Certificate::Heuristic => "heuristic",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub class: GrowthClass,
    pub certificate: Certificate,
}

/// `value^(1/root)`, kept exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RootBound {
    pub value: u64,
    pub root: u32,
}

impl RootBound {
    /// Exact comparison of `a^(1/m)` and `b^(1/n)` through `a^n` versus `b^m`.
    pub fn cmp_value(&self, other: &RootBound) -> std::cmp::Ordering {
        let lhs = BigInt::from(self.value).pow(other.root);
        let rhs = BigInt::from(other.value).pow(self.root);
        lhs.cmp(&rhs)
    }

    pub fn approx(&self) -> f64 {
        (self.value as f64).powf(1.0 / self.root as f64)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DegreeReport {
    /// `degrees[n] = deg(f^n)`, starting with `degrees[0] = 1`.
    pub degrees: Vec<u64>,
    /// Indices whose degree was certified modulo the filter prime.
    pub modp_certified: Vec<bool>,
    pub classification: Option<Classification>,
    pub dynamical_degree_upper_bounds: Vec<RootBound>,
}

#[derive(Clone, Debug)]
pub struct DegreeOptions {
    pub modp: Option<u64>,
    pub budget_digits: u64,
    /// Lines tried when checking good reduction.
    pub lines: u64,
}

impl Default for DegreeOptions {
    fn default() -> Self {
        DegreeOptions { modp: Some(modp::DEFAULT_PRIME), budget_digits: DEFAULT_BUDGET_DIGITS, lines: 4 }
    }
}

/// Degrees of `f^n` for `n = 0..=n_max`.
pub fn degree_sequence(f: &PlaneBirationalMap, n_max: usize, modp_filter: Option<u64>) -> Result<DegreeReport> {
    degree_sequence_with(f, n_max, &DegreeOptions { modp: modp_filter, ..DegreeOptions::default() })
}

pub fn degree_sequence_with(f: &PlaneBirationalMap, n_max: usize, opts: &DegreeOptions) -> Result<DegreeReport> {
    if n_max < 1 {
        return Err(Error::Precondition("n_max must be at least 1".into()));
    }
    let d = f.degree() as u64;
    let mut degrees = vec![1, d];
    let mut certified = vec![false, false];
    let filter = opts.modp.and_then(|p| LineFilter::new(f, p, opts.lines));
    let mut exact = f.clone();
    let mut exact_index = 1usize;
    let mut restricted = filter.as_ref().map(|flt| flt.restrict(&exact));
    for n in 2..=n_max {
        let bound = d * degrees[n - 1];
        if let (Some(flt), Some(Some(t))) = (&filter, &restricted) {
            let next = flt.push_forward(t);
            if forms_coprime(&next, flt.p) {
                debug_assert_eq!(next[0].degree as u64, bound);
                degrees.push(bound);
                certified.push(true);
                restricted = Some(Some(next));
                continue;
            }
        }
        while exact_index < n {
            exact = f.compose(&exact)?;
            exact_index += 1;
            if exact.digit_size() > opts.budget_digits {
                return Err(Error::BudgetExceeded { last_n: n - 1 });
            }
        }
        degrees.push(exact.degree() as u64);
        certified.push(false);
        restricted = filter.as_ref().map(|flt| flt.restrict(&exact));
    }
    let mut report = DegreeReport {
        dynamical_degree_upper_bounds: Vec::new(),
        modp_certified: certified,
        degrees,
        classification: None,
    };
    report.dynamical_degree_upper_bounds = dynamical_degree_upper_bounds(&report);
    report.classification = classify(&report).ok();
    Ok(report)
}

/// First `n <= n_max` at which the line certificate fails to prove
/// `deg(f^n) = deg(f)^n`; `None` when every step is proved.
///
/// Returns `Some(1)` when `p` is a bad prime for `f`.
pub fn first_unproved_maximal_step(f: &PlaneBirationalMap, n_max: usize, p: u64, lines: u64) -> Option<usize> {
    let Some(flt) = LineFilter::new(f, p, lines) else {
        return Some(1);
    };
    let Some(mut t) = flt.restrict(f) else {
        return Some(1);
    };
    for n in 2..=n_max {
        t = flt.push_forward(&t);
        if !forms_coprime(&t, p) {
            return Some(n);
        }
    }
    None
}

/// Restriction of iterates to a line over `F_p`.
struct LineFilter {
    p: u64,
    line: LineP,
    reduced: [Vec<([u32; 3], u64)>; 3],
    degree: u32,
}

impl LineFilter {
    /// `None` when `p` is a bad prime for `f`.
    fn new(f: &PlaneBirationalMap, p: u64, lines: u64) -> Option<Self> {
        let ints = f.integer_triple();
        let den_ok = f.components().iter().all(|c| modp::reduce(c.content().denom(), p) != 0);
        if !den_ok {
            return None;
        }
        let reduced = ints
            .clone()
            .map(|t| t.iter().map(|(e, c)| (*e, modp::reduce(c, p))).filter(|(_, c)| *c != 0).collect::<Vec<_>>());
        let degree = f.degree();
        (0..lines.max(1)).map(|k| LineP::scattered(k, p)).find_map(|line| {
            let flt = LineFilter { p, line, reduced: reduced.clone(), degree };
            let forms = ints.clone().map(|t| restrict_to_line(degree, &t, &line, p));
            forms_coprime(&forms, p).then_some(flt)
        })
    }

    fn restrict(&self, g: &PlaneBirationalMap) -> Option<[BinaryForm; 3]> {
        let ints = g.integer_triple();
        let forms = ints.map(|t| restrict_to_line(g.degree(), &t, &self.line, self.p));
        forms.iter().any(|f| !f.is_zero()).then_some(forms)
    }

    fn push_forward(&self, t: &[BinaryForm; 3]) -> [BinaryForm; 3] {
        [0, 1, 2].map(|i| substitute_forms(self.degree, &self.reduced[i], t, self.p))
    }
}

/// Nonzero forms without common factor: the exact forms they reduce from are coprime too.
fn forms_coprime(forms: &[BinaryForm], p: u64) -> bool {
    let nonzero: Vec<BinaryForm> = forms.iter().filter(|f| !f.is_zero()).cloned().collect();
    !nonzero.is_empty() && binary_gcd_degree(&nonzero, p) == Some(0)
}

/// Growth label from the tail of the degree sequence.
pub fn classify(report: &DegreeReport) -> Result<Classification> {
    let degs = &report.degrees;
    let n_max = degs.len().saturating_sub(1);
    if n_max < 4 {
        return Err(Error::InsufficientData(format!("need n_max >= 4, have {n_max}")));
    }
    let proved = |class| Classification { class, certificate: Certificate::Proved };
    let heuristic = |class| Classification { class, certificate: Certificate::Heuristic };
    if degs[1] == 1 {
        return Ok(proved(GrowthClass::Elliptic));
    }
    let threshold = BigInt::from(3u32).pow(19) * BigInt::from(degs[1]);
    if BigInt::from(degs[2]) > threshold {
        return Ok(proved(GrowthClass::Loxodromic));
    }
    let w = 4.max(n_max.div_ceil(2)).min(degs.len());
    let tail: Vec<i128> = degs[degs.len() - w..].iter().map(|&v| v as i128).collect();
    let first: Vec<i128> = tail.windows(2).map(|p| p[1] - p[0]).collect();
    let second: Vec<i128> = first.windows(2).map(|p| p[1] - p[0]).collect();
    let constant = |v: &[i128]| v.windows(2).all(|p| p[0] == p[1]);
    if first.iter().all(|&x| x == 0) || is_periodic(&tail) {
        return Ok(heuristic(GrowthClass::Elliptic));
    }
    if constant(&first) && first[0] > 0 {
        return Ok(heuristic(GrowthClass::Jonquieres));
    }
    if constant(&second) && second[0] > 0 {
        return Ok(heuristic(GrowthClass::Halphen));
    }
    if second.iter().all(|&x| x > 0) && second.windows(2).all(|p| p[1] > p[0]) {
        return Ok(heuristic(GrowthClass::Loxodromic));
    }
    Ok(heuristic(GrowthClass::Unknown))
}

fn is_periodic(tail: &[i128]) -> bool {
    (1..=tail.len() / 2).any(|period| (period..tail.len()).all(|i| tail[i] == tail[i - period]))
}

/// `deg(f^n)^(1/n)` for `n >= 1`.
pub fn dynamical_degree_upper_bounds(report: &DegreeReport) -> Vec<RootBound> {
    report.degrees.iter().enumerate().skip(1).map(|(n, &value)| RootBound { value, root: n as u32 }).collect()
}

/// Running infimum of the bounds; an upper bound for the dynamical degree.
pub fn running_infimum(bounds: &[RootBound]) -> Vec<RootBound> {
    let mut out: Vec<RootBound> = Vec::with_capacity(bounds.len());
    for b in bounds {
        let next = match out.last() {
            Some(prev) if prev.cmp_value(b).is_le() => *prev,
            _ => *b,
        };
        out.push(next);
    }
    out
}

impl DegreeReport {
    pub fn to_json(&self) -> Value {
        let cls =
            self.classification.map(|c| json!({"class": c.class.as_str(), "certificate": c.certificate.as_str()}));
        json!({
            "degrees": self.degrees,
            "modp_certified": self.modp_certified,
            "classification": cls,
            "dynamical_degree_upper_bounds": self
                .dynamical_degree_upper_bounds
                .iter()
                .map(|b| json!({"value": b.value, "root": b.root}))
                .collect::<Vec<_>>(),
        })
    }

    /// Check `deg(f^(m+n)) <= deg(f^m) deg(f^n)` for all recorded indices.
    pub fn is_submultiplicative(&self) -> bool {
        let d = &self.degrees;
        (0..d.len()).all(|m| {
            (0..d.len() - m).all(|n| {
                let prod = d[m].to_u128().unwrap() * d[n].to_u128().unwrap();
                d[m + n] as u128 <= prod
            })
        })
    }
}

/// `deg(g ∘ A^n ∘ g_inv)` for `n = 0..=n_max`, with `A` linear.
///
/// The inner map `A^n ∘ g_inv` keeps the degree of `g_inv`; the outer composition
/// is certified over `F_p` when possible and computed exactly otherwise.
pub fn conjugate_degree_sequence(
    g: &PlaneBirationalMap,
    g_inv: &PlaneBirationalMap,
    a: &PlaneBirationalMap,
    n_max: usize,
    opts: &DegreeOptions,
) -> Result<DegreeReport> {
    if a.degree() != 1 {
        return Err(Error::Precondition("conjugating map must be linear".into()));
    }
    let bound = g.degree() as u64 * g_inv.degree() as u64;
    let filter = opts.modp.and_then(|p| LineFilter::new(g, p, opts.lines));
    let mut inner = g_inv.clone();
    let mut degrees = vec![1u64];
    let mut certified = vec![false];
    for n in 1..=n_max {
        inner = a.compose(&inner)?;
        if let Some(flt) = &filter {
            if let Some(t) = flt.restrict(&inner) {
                if forms_coprime(&flt.push_forward(&t), flt.p) {
                    degrees.push(bound);
                    certified.push(true);
                    continue;
                }
            }
        }
        let h = g.compose(&inner)?;
        if h.digit_size() > opts.budget_digits {
            return Err(Error::BudgetExceeded { last_n: n - 1 });
        }
        degrees.push(h.degree() as u64);
        certified.push(false);
    }
    let mut report = DegreeReport {
        degrees,
        modp_certified: certified,
        classification: None,
        dynamical_degree_upper_bounds: vec![],
    };
    report.dynamical_degree_upper_bounds = dynamical_degree_upper_bounds(&report);
    report.classification = classify(&report).ok();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(degrees: Vec<u64>) -> DegreeReport {
        let mut r = DegreeReport {
            modp_certified: vec![false; degrees.len()],
            degrees,
            classification: None,
            dynamical_degree_upper_bounds: vec![],
        };
        r.dynamical_degree_upper_bounds = dynamical_degree_upper_bounds(&r);
        r
    }

    #[test]
    fn involution_degrees() {
        let s = PlaneBirationalMap::standard_involution();
        for p in [None, Some(modp::DEFAULT_PRIME)] {
            let r = degree_sequence(&s, 4, p).unwrap();
            assert_eq!(r.degrees, vec![1, 2, 1, 2, 1]);
            assert_eq!(r.classification.unwrap().class, GrowthClass::Elliptic);
        }
    }

    #[test]
    fn henon_degrees_with_and_without_filter() {
        let h = PlaneBirationalMap::henon_example();
        let exact = degree_sequence(&h, 5, None).unwrap();
        assert_eq!(exact.degrees, vec![1, 2, 4, 8, 16, 32]);
        let filtered = degree_sequence(&h, 5, Some(modp::DEFAULT_PRIME)).unwrap();
        assert_eq!(filtered.degrees, exact.degrees);
        assert!(filtered.modp_certified[2..].iter().all(|&c| c));
        let c = filtered.classification.unwrap();
        assert_eq!((c.class, c.certificate), (GrowthClass::Loxodromic, Certificate::Heuristic));
        assert!(filtered
            .dynamical_degree_upper_bounds
            .iter()
            .all(|b| b.cmp_value(&RootBound { value: 2, root: 1 }).is_eq()));
    }

    #[test]
    fn labels() {
        let label = |d: Vec<u64>| classify(&report(d)).unwrap();
        assert_eq!(label(vec![1, 1, 1, 1, 1]).certificate, Certificate::Proved);
        assert_eq!(label(vec![1, 2, 3, 4, 5, 6]).class, GrowthClass::Jonquieres);
        assert_eq!(label(vec![1, 2, 5, 10, 17, 26, 37]).class, GrowthClass::Halphen);
        assert_eq!(label(vec![1, 3, 5, 4, 9, 2]).class, GrowthClass::Unknown);
        assert!(classify(&report(vec![1, 2, 4])).is_err());
        let huge = 3u64.pow(19) * 2 + 1;
        assert_eq!(
            label(vec![1, 2, huge, huge, huge]),
            Classification { class: GrowthClass::Loxodromic, certificate: Certificate::Proved }
        );
    }

    #[test]
    fn running_infimum_of_involution_bounds() {
        let r = report(vec![1, 2, 1, 2, 1]);
        let b = &r.dynamical_degree_upper_bounds;
        assert_eq!(b[0], RootBound { value: 2, root: 1 });
        assert_eq!(b[1], RootBound { value: 1, root: 2 });
        assert_eq!(b[2], RootBound { value: 2, root: 3 });
        assert!(running_infimum(b).iter().skip(1).all(|x| x.value == 1));
        assert!(r.is_submultiplicative());
    }

    #[test]
    fn conjugate_of_linear_by_involution() {
        let s = PlaneBirationalMap::standard_involution();
        let a = PlaneBirationalMap::linear_i64([[2, 0, 0], [0, 3, 0], [0, 0, 1]]).unwrap();
        let r = conjugate_degree_sequence(&s, &s, &a, 4, &DegreeOptions::default()).unwrap();
        // diagonal maps commute with the involution up to inversion
        assert_eq!(r.degrees, vec![1, 1, 1, 1, 1]);
    }
}
