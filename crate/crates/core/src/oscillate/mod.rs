//! Maps with prescribed degree oscillation.
//!
//! A target `D` (finitely supported on positive integers) is realized by
//! `h = g ∘ A ∘ g⁻¹` where `A` is linear of infinite order and `g` is a
//! Jonquières map whose simple base points are paired along `A`-orbits.
//! The degrees of `h^n` equal `d − D(n)` with `d = deg(g)²`.

mod incidence;
mod jonquieres;

pub use incidence::{diagonal_weights, orbit_incidences, Incidence, IncidenceTable, Times};
pub use jonquieres::{build_jonquieres, check_jon_conditions, condition_matrix, preserves_pencil, JonCheck};

use crate::cremona::{
    conjugate_degree_sequence, degree_sequence_with, int_point, point_to_json, DegreeOptions, DegreeReport, IntPoint,
    PlaneBirationalMap,
};
use crate::error::{Error, Result};
use crate::rng::SeedSplitter;
use rand::Rng;
use serde_json::{json, Value};
use std::collections::{BTreeMap, HashMap};

/// `s ↦ D(s)` with positive keys and values.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OscillationTarget {
    support: BTreeMap<u64, u64>,
}

impl OscillationTarget {
    pub fn new(support: BTreeMap<u64, u64>) -> Result<Self> {
        if support.keys().any(|&s| s == 0) {
            return Err(Error::InvalidInput("support keys must be at least 1".into()));
        }
        if support.values().any(|&v| v == 0) {
            return Err(Error::InvalidInput("multiplicities must be at least 1".into()));
        }
        Ok(OscillationTarget { support })
    }

    pub fn from_pairs(pairs: &[(u64, u64)]) -> Result<Self> {
        Self::new(pairs.iter().copied().collect())
    }

    pub fn support(&self) -> &BTreeMap<u64, u64> {
        &self.support
    }

    pub fn value(&self, n: u64) -> u64 {
        self.support.get(&n).copied().unwrap_or(0)
    }

    pub fn block_count(&self) -> u64 {
        self.support.values().sum()
    }

    pub fn max_gap(&self) -> u64 {
        self.support.keys().copied().max().unwrap_or(0)
    }

    /// Parse `{"2": 1, "5": 3}`.
    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::Schema("support must be an object".into()))?;
        let mut support = BTreeMap::new();
        for (k, val) in obj {
            let s: u64 = k.trim().parse().map_err(|_| Error::Schema(format!("support key `{k}` is not an integer")))?;
            let d = val.as_u64().ok_or_else(|| Error::Schema(format!("value for `{k}` is not a positive integer")))?;
            support.insert(s, d);
        }
        Self::new(support).map_err(|e| Error::Schema(e.to_string()))
    }

    pub fn to_json(&self) -> Value {
        Value::Object(self.support.iter().map(|(k, v)| (k.to_string(), json!(v))).collect())
    }
}

/// Block `{anchor, anchor + gap}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Block {
    pub anchor: u64,
    pub gap: u64,
}

/// `D(s)` blocks of gap `s` for each `s`; anchors are all 1.
pub fn decompose_overlaps(target: &OscillationTarget) -> Vec<Block> {
    target
        .support
        .iter()
        .flat_map(|(&gap, &count)| std::iter::repeat(Block { anchor: 1, gap }).take(count as usize))
        .collect()
}

/// Sum over blocks of the overlap indicator `[n = gap]`.
pub fn overlap_sum(blocks: &[Block], n: u64) -> u64 {
    blocks.iter().filter(|b| b.gap == n).count() as u64
}

/// `diag(2, 3, 1)` for seed 0; otherwise a seeded integer matrix of infinite order.
pub fn pick_linear_map(seed: u64) -> PlaneBirationalMap {
    if seed == 0 {
        return PlaneBirationalMap::linear_i64([[2, 0, 0], [0, 3, 0], [0, 0, 1]]).expect("invertible");
    }
    let mut rng = SeedSplitter::new(seed).stream("oscillate.linear_map");
    loop {
        let mut m = [[0i64; 3]; 3];
        for row in m.iter_mut() {
            for v in row.iter_mut() {
                *v = rng.gen_range(-3..=3);
            }
        }
        let Ok(a) = PlaneBirationalMap::linear_i64(m) else { continue };
        if !has_small_order(&a, 24) {
            return a;
        }
    }
}

fn has_small_order(a: &PlaneBirationalMap, bound: u32) -> bool {
    let mut power = a.clone();
    for _ in 0..bound {
        if power.is_identity() {
            return true;
        }
        power = power.compose(a).expect("invertible");
    }
    false
}

/// Base points of the Jonquières map together with the linear part.
#[derive(Clone, Debug, PartialEq)]
pub struct PointConfiguration {
    pub linear_map: PlaneBirationalMap,
    pub q0: IntPoint,
    pub orbit_seeds: Vec<IntPoint>,
    /// `p_{2j-1} = q_j`, `p_{2j} = A^{s_j}(q_j)`.
    pub derived_points: Vec<IntPoint>,
    pub blocks: Vec<Block>,
    pub verification_horizon: u64,
}

impl PointConfiguration {
    /// `q0` with multiplicity `m` followed by the simple points.
    pub fn weighted_points(&self) -> Vec<(IntPoint, u64)> {
        let m = self.orbit_seeds.len() as u64;
        std::iter::once((self.q0.clone(), m)).chain(self.derived_points.iter().map(|p| (p.clone(), 1))).collect()
    }

    pub fn jonquieres_degree(&self) -> u64 {
        self.orbit_seeds.len() as u64 + 1
    }

    pub fn to_json(&self) -> Value {
        json!({
            "q0": point_to_json(&self.q0),
            "orbit_seeds": self.orbit_seeds.iter().map(point_to_json).collect::<Vec<_>>(),
            "derived_points": self.derived_points.iter().map(point_to_json).collect::<Vec<_>>(),
            "gaps": self.blocks.iter().map(|b| b.gap).collect::<Vec<_>>(),
            "linear_map": self.linear_map.to_json(),
        })
    }
}

/// `deg(g)² − Σ a_i a_j δ(Aⁿ p_i, p_j)` for `1 <= n <= n_max`.
pub fn predicted_degrees(g_degree: u64, weighted: &[(IntPoint, u64)], table: &IncidenceTable, n_max: u64) -> Vec<u64> {
    (1..=n_max)
        .map(|n| {
            let drop: u64 = table.at(n).map(|(i, j)| weighted[i].1 * weighted[j].1).sum();
            (g_degree * g_degree).saturating_sub(drop)
        })
        .collect()
}

/// The designed incidences are exactly `p_{2j-1} -> p_{2j}` at step `s_j`.
fn incidences_as_designed(table: &IncidenceTable, blocks: &[Block]) -> bool {
    let expected: Vec<Incidence> = blocks
        .iter()
        .enumerate()
        .map(|(j, b)| Incidence { from: 2 * j + 1, to: 2 * j + 2, times: Times::Once(b.gap) })
        .collect();
    table.incidences.len() == expected.len() && expected.iter().all(|e| table.incidences.contains(e))
}

#[derive(Clone, Debug)]
pub struct SynthesisOptions {
    pub seed: u64,
    pub sample_box: i64,
    pub max_tries: usize,
    /// Requested horizon; raised to `2 max(support) + 5` when smaller.
    pub horizon: u64,
    pub degrees: DegreeOptions,
    /// Also iterate `h` directly when `deg(h)` is at most this.
    pub direct_check_max_degree: u32,
}

impl Default for SynthesisOptions {
    fn default() -> Self {
        SynthesisOptions {
            seed: 0,
            sample_box: 50,
            max_tries: 200,
            horizon: 10,
            degrees: DegreeOptions::default(),
            direct_check_max_degree: 4,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SynthesisReport {
    pub target: OscillationTarget,
    pub h: PlaneBirationalMap,
    pub g: Option<PlaneBirationalMap>,
    pub g_inverse: Option<PlaneBirationalMap>,
    pub configuration: Option<PointConfiguration>,
    pub d: u64,
    pub horizon: u64,
    /// `deg(h^n)` predicted for `1 <= n <= horizon`.
    pub predicted: Vec<u64>,
    /// Computed degrees of `h^n = g ∘ Aⁿ ∘ g⁻¹` for `0 <= n <= horizon`.
    pub computed: DegreeReport,
    /// Degrees from iterating `h` itself, when small enough.
    pub direct: Option<Vec<u64>>,
    pub incidences_complete: bool,
    pub tries: usize,
}

impl SynthesisReport {
    pub fn verified(&self) -> bool {
        let conj_ok = self.computed.degrees[1..] == self.predicted[..];
        let direct_ok = self.direct.as_ref().map_or(true, |d| d[1..] == self.predicted[..]);
        let target_ok = (1..=self.horizon).all(|n| self.predicted[n as usize - 1] == self.d - self.target.value(n));
        conj_ok && direct_ok && target_ok && self.h.degree() as u64 == self.predicted.first().copied().unwrap_or(1)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "support": self.target.to_json(),
            "map": self.h.to_json(),
            "d": self.d,
            "predicted": self.predicted,
            "verified": self.verified(),
            "computed": self.computed.degrees,
            "direct": self.direct,
            "modp_certified": self.computed.modp_certified,
            "horizon": self.horizon,
            "tries": self.tries,
            "incidences_complete": self.incidences_complete,
            "jonquieres": self.g.as_ref().map(PlaneBirationalMap::to_json),
            "configuration": self.configuration.as_ref().map(PointConfiguration::to_json),
        })
    }
}

/// Build `h` with `deg(h^n) = d − D(n)` and check it by composition.
pub fn synthesize_oscillation(target: &OscillationTarget, opts: &SynthesisOptions) -> Result<SynthesisReport> {
    let a = pick_linear_map(0);
    let horizon = opts.horizon.max(2 * target.max_gap() + 5);
    let blocks = decompose_overlaps(target);
    let m = blocks.len();
    if m == 0 {
        let computed = degree_sequence_with(&a, horizon as usize, &opts.degrees)?;
        return Ok(SynthesisReport {
            target: target.clone(),
            h: a,
            g: None,
            g_inverse: None,
            configuration: None,
            d: 1,
            horizon,
            predicted: vec![1; horizon as usize],
            direct: Some(computed.degrees.clone()),
            computed,
            incidences_complete: true,
            tries: 0,
        });
    }
    let splitter = SeedSplitter::new(opts.seed);
    let q0 = int_point(1, 1, 1);
    let mut failures: HashMap<&'static str, usize> = HashMap::new();
    for trial in 0..opts.max_tries {
        let mut rng = splitter.trial("oscillate.points", trial as u64);
        let seeds: Vec<IntPoint> = (0..m)
            .map(|_| {
                int_point(
                    rng.gen_range(-opts.sample_box..=opts.sample_box),
                    rng.gen_range(-opts.sample_box..=opts.sample_box),
                    1,
                )
            })
            .collect();
        let mut points = Vec::with_capacity(2 * m);
        for (q, b) in seeds.iter().zip(&blocks) {
            points.push(q.clone());
            points.push(apply_power(&a, q, b.gap)?);
        }
        let mut all = vec![q0.clone()];
        all.extend(points.iter().cloned());
        if (0..all.len()).any(|i| (i + 1..all.len()).any(|j| all[i] == all[j])) {
            *failures.entry("coincident points").or_default() += 1;
            continue;
        }
        let table = orbit_incidences(&a, &all, horizon)?;
        if !incidences_as_designed(&table, &blocks) {
            *failures.entry("orbit incidences").or_default() += 1;
            continue;
        }
        if !check_jon_conditions(&q0, &points, m as u32).passed {
            *failures.entry("jonquieres genericity").or_default() += 1;
            continue;
        }
        let (g, g_inv) = match build_jonquieres(&q0, &points) {
            Ok(pair) => pair,
            Err(Error::Genericity(_)) => {
                *failures.entry("jonquieres net").or_default() += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let config = PointConfiguration {
            linear_map: a.clone(),
            q0: q0.clone(),
            orbit_seeds: seeds,
            derived_points: points,
            blocks: blocks.clone(),
            verification_horizon: horizon,
        };
        return finish(target, config, g, g_inv, table, horizon, trial + 1, opts);
    }
    let reason = failures
        .into_iter()
        .max_by(|x, y| x.1.cmp(&y.1).then(y.0.cmp(x.0)))
        .map(|(r, c)| format!("{r} ({c} times)"))
        .unwrap_or_else(|| "no tries".into());
    Err(Error::SamplingExhausted { tries: opts.max_tries, reason })
}

#[allow(clippy::too_many_arguments)]
fn finish(
    target: &OscillationTarget,
    config: PointConfiguration,
    g: PlaneBirationalMap,
    g_inv: PlaneBirationalMap,
    table: IncidenceTable,
    horizon: u64,
    tries: usize,
    opts: &SynthesisOptions,
) -> Result<SynthesisReport> {
    let a = &config.linear_map;
    let d = config.jonquieres_degree().pow(2);
    let predicted = predicted_degrees(config.jonquieres_degree(), &config.weighted_points(), &table, horizon);
    let h = g.compose(&a.compose(&g_inv)?)?;
    let computed = conjugate_degree_sequence(&g, &g_inv, a, horizon as usize, &opts.degrees)?;
    let direct = if h.degree() <= opts.direct_check_max_degree {
        Some(degree_sequence_with(&h, horizon as usize, &opts.degrees)?.degrees)
    } else {
        None
    };
    let report = SynthesisReport {
        target: target.clone(),
        h,
        g: Some(g),
        g_inverse: Some(g_inv),
        configuration: Some(config),
        d,
        horizon,
        predicted,
        computed,
        direct,
        incidences_complete: table.complete,
        tries,
    };
    Ok(report)
}

fn apply_power(a: &PlaneBirationalMap, p: &IntPoint, n: u64) -> Result<IntPoint> {
    let mut cur = p.clone();
    for _ in 0..n {
        cur = a.apply_int(&cur).ok_or_else(|| Error::InvalidInput("point in the indeterminacy of A".into()))?;
    }
    Ok(cur)
}

/// Linear conjugate `B ∘ h ∘ B⁻¹`.
pub fn linear_conjugate(h: &PlaneBirationalMap, b: &PlaneBirationalMap) -> Result<PlaneBirationalMap> {
    let b_inv = b.invert(1).ok_or_else(|| Error::InvalidInput("linear map is not invertible".into()))?;
    b.compose(&h.compose(&b_inv)?)
}
