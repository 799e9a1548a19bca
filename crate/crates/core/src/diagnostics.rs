//! Instrumentation of the frontier growth argument: tough vertices, their
//! families and family schedules, the per-vertex counters and the two growth
//! invariants, each checked level by level.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frontier::{grow_frontier, ForbiddenSchedule, FrontierState, Label, DEFAULT_PATH_BUDGET};
use crate::graph::{AlternatingPath, Graph, Matching, SimpleGraph};
use crate::search::{alternating_lengths, shortest_augmenting_path};

pub fn rational_from_ratio(r: Ratio<u64>) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// Exact binary value of a float lower bound.
pub fn rational_from_f64(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::BadInput(format!("{x} is not a finite number")))
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Constants derived from degree, expansion bound and unmatched fraction.
#[derive(Debug, Clone, Serialize)]
pub struct Constants {
    pub d: usize,
    pub c0: f64,
    pub eps: f64,
    /// Family size threshold `4d(d+1)/c0` for the first invariant.
    pub c1: f64,
    /// 1 when exactly two vertices are unmatched, else 2.
    pub c3: u32,
    /// Growth factor of the first invariant is `1 + delta`.
    pub delta: f64,
    pub family_scale: f64,
    pub family_rate: f64,
    /// Explicit bound on the active-moment counter of one vertex.
    pub f_bound: f64,
    pub block_len: f64,
    pub warmup: f64,
    /// Level by which the argument forces an augmenting path.
    pub level_bound: f64,
    #[serde(skip)]
    c0_exact: BigRational,
}

impl Constants {
    pub fn new(d: usize, c0: &BigRational, unmatched: usize, n: usize) -> Result<Self> {
        if c0 <= &BigRational::zero() {
            return Err(Error::HypothesisUnchecked("expansion bound is not positive".into()));
        }
        if unmatched == 0 || n == 0 {
            return Err(Error::BadInput("the matching leaves no vertex unmatched".into()));
        }
        let c = to_f64(c0);
        let df = d as f64;
        let eps = unmatched as f64 / n as f64;
        let c3 = if unmatched == 2 { 1 } else { 2 };
        let family_rate = c.powi(3) / (128.0 * df.powi(6));
        let f_bound = ((8.0 * c3 as f64 * df.powi(4) / (eps * c * c)).ln() / family_rate.ln_1p()).powi(2);
        let block_len = (2.0 * df + 3.0).max((24.0 * (df + 1.0).powi(2) * f_bound / c).floor() + 1.0);
        let warmup = 2.0 * ((1.0 / eps).ln() / -(1.0 - c / (4.0 * (df + 1.0))).ln()).ceil();
        let rounds = ((4.0 / eps).ln() / (4.0 / (4.0 - c)).ln()).ceil();
        Ok(Constants {
            d,
            c0: c,
            eps,
            c1: 4.0 * df * (df + 1.0) / c,
            c3,
            delta: c.powi(3) / (128.0 * (df * (df + 1.0)).powi(3)),
            family_scale: c * c / (16.0 * df.powi(4)),
            family_rate,
            f_bound,
            block_len,
            warmup,
            level_bound: warmup + 4.0 * block_len * rounds,
            c0_exact: c0.clone(),
        })
    }

    /// `size < c1`, decided exactly.
    pub fn below_c1(&self, size: usize) -> bool {
        let d = self.d as i64;
        BigRational::from_integer(BigInt::from(size)) * &self.c0_exact
            < BigRational::from_integer(BigInt::from(4 * d * (d + 1)))
    }

    /// `e <= c1²`, decided exactly.
    pub fn within_c1_squared(&self, e: u64) -> bool {
        let d = self.d as i64;
        let c1 = BigRational::from_integer(BigInt::from(4 * d * (d + 1))) / &self.c0_exact;
        BigRational::from_integer(BigInt::from(e)) <= &c1 * &c1
    }

    /// `1 + delta` as an exact rational.
    pub fn growth_factor(&self) -> BigRational {
        let d = BigInt::from(self.d);
        let denom = BigInt::from(128) * (&d * (&d + 1u32)).pow(3);
        BigRational::one() + self.c0_exact.pow(3) / BigRational::from_integer(denom)
    }
}

/// Vertices of `T_n ∪ S` adjacent to a both-type vertex at `n` that have
/// no odd path at `n + 1`.
pub fn tough_vertices(g: &SimpleGraph, states: &[FrontierState], n: usize) -> Vec<usize> {
    let (cur, next) = (&states[n], &states[n + 1]);
    cur.members
        .iter()
        .copied()
        .filter(|&x| cur.is_tail_or_seed(x))
        .filter(|&x| g.neighbors(x).iter().any(|&y| cur.labels[y] == Label::Both))
        .filter(|&x| !next.reaches_odd(x))
        .collect()
}

pub fn is_tough(g: &SimpleGraph, states: &[FrontierState], n: usize, x: usize) -> bool {
    let (cur, next) = (&states[n], &states[n + 1]);
    cur.is_tail_or_seed(x) && g.neighbors(x).iter().any(|&y| cur.labels[y] == Label::Both) && !next.reaches_odd(x)
}

/// First level at which `x` is a tail or a seed.
pub fn first_tail_time(states: &[FrontierState], x: usize) -> Option<usize> {
    states.iter().position(|s| s.is_tail_or_seed(x))
}

/// Greatest subset `D` of `members ∖ {x}` in which every vertex has an odd
/// and an even path from `x` inside `D ∪ {x}` of total length `≤ 2·age + 1`.
pub fn family_by_pruning(
    g: &SimpleGraph,
    m: &Matching,
    members: &[usize],
    x: usize,
    age: usize,
    budget: u64,
) -> Result<Vec<usize>> {
    let mut inside = vec![false; g.vertex_count()];
    let mut current: Vec<usize> = members.iter().copied().filter(|&y| y != x).collect();
    for &y in &current {
        inside[y] = true;
    }
    loop {
        let lengths = alternating_lengths(g, m, &[x], &|v| v == x || inside[v], 2 * age, budget)?;
        let before = current.len();
        current.retain(|&y| match (lengths.odd[y], lengths.even[y]) {
            (Some(p), Some(q)) if p + q <= 2 * age + 1 => true,
            _ => {
                inside[y] = false;
                false
            }
        });
        if current.len() == before {
            return Ok(current);
        }
    }
}

pub fn compute_family(
    g: &SimpleGraph,
    m: &Matching,
    states: &[FrontierState],
    x: usize,
    n: usize,
    budget: u64,
) -> Result<Vec<usize>> {
    if n + 1 >= states.len() || !is_tough(g, states, n, x) {
        return Err(Error::NotTough { vertex: x, level: n });
    }
    let age = n - first_tail_time(states, x).expect("tough vertices are tails or seeds");
    family_by_pruning(g, m, &states[n].members, x, age, budget)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    None,
    Dormant,
    Active,
}

/// One step of a family schedule: the set is fixed from `start`, the exit
/// moment is the first later level with at most `d` edges leaving the set
/// plus the root that avoid both-type vertices, and `exits` are those edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FxStep {
    pub start: usize,
    pub exit: Option<usize>,
    pub set: Vec<usize>,
    pub exits: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FxSchedule {
    pub vertex: usize,
    pub first_tail_time: usize,
    pub steps: Vec<FxStep>,
}

impl FxSchedule {
    /// Index of the step containing level `n`.
    pub fn counter(&self, n: usize) -> Option<usize> {
        self.steps.iter().rposition(|s| s.start <= n)
    }

    pub fn phase(&self, n: usize) -> Phase {
        match self.counter(n) {
            None => Phase::None,
            Some(i) => match self.steps[i].exit {
                Some(m) if m <= n => Phase::Active,
                _ => Phase::Dormant,
            },
        }
    }

    pub fn set_at(&self, n: usize) -> &[usize] {
        self.counter(n).map_or(&[], |i| self.steps[i].set.as_slice())
    }
}

pub fn family_schedule(
    g: &SimpleGraph,
    m: &Matching,
    states: &[FrontierState],
    x: usize,
    budget: u64,
) -> Result<FxSchedule> {
    let last = states.len() - 1;
    if !(0..last).any(|n| is_tough(g, states, n, x)) {
        return Err(Error::NeverTough(x));
    }
    let start0 = first_tail_time(states, x).expect("tough vertices are tails or seeds");
    let d = g
        .regular_degree()
        .unwrap_or_else(|| (0..g.vertex_count()).map(|v| g.degree_of(v)).max().unwrap_or(0));
    let n = g.vertex_count();
    let mut steps = vec![FxStep {
        start: start0,
        exit: None,
        set: Vec::new(),
        exits: Vec::new(),
    }];
    let mut in_set = vec![false; n];
    for k in 0.. {
        let start = steps[k].start;
        let set = steps[k].set.clone();
        let root_and_set: Vec<usize> = std::iter::once(x).chain(set.iter().copied()).collect();
        let leaving = |b: &FrontierState| -> Vec<(usize, usize)> {
            root_and_set
                .iter()
                .flat_map(|&u| g.neighbors(u).iter().map(move |&w| (u, w)))
                .filter(|&(_, w)| w != x && !in_set[w] && b.labels[w] != Label::Both)
                .collect()
        };
        let Some((exit, exits)) = (start + 1..=last).find_map(|mk| {
            let e = leaving(&states[mk]);
            (e.len() <= d).then_some((mk, e))
        }) else {
            break;
        };
        steps[k].exit = Some(exit);
        steps[k].exits = exits;
        let b = &states[exit];
        let lengths = alternating_lengths(g, m, &[x], &|v| v == x || in_set[v], 2 * k, budget)?;
        let mut next = set.clone();
        for u in (0..n).filter(|&u| u == x || (in_set[u] && lengths.even[u].is_some())) {
            for &v in g.neighbors(u) {
                if v == x || in_set[v] || m.mate(u) == Some(v) || b.labels[v] != Label::Both {
                    continue;
                }
                let w = m.mate(v).expect("both-type vertices are matched");
                if !next.contains(&v) {
                    next.push(v);
                    next.push(w);
                }
            }
        }
        next.sort_unstable();
        for &v in &next {
            in_set[v] = true;
        }
        let start = exit + 2 * k;
        steps.push(FxStep {
            start,
            exit: None,
            set: next,
            exits: Vec::new(),
        });
        if start > last {
            break;
        }
    }
    Ok(FxSchedule {
        vertex: x,
        first_tail_time: start0,
        steps,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ToughRecord {
    pub vertex: usize,
    pub first_tail_time: usize,
    pub age: usize,
    /// `None` when the level exceeds the family cap.
    pub family: Option<Vec<usize>>,
    pub e_count: u64,
    pub f_count: u64,
    pub phase: Phase,
    pub schedule_step: Option<usize>,
    pub schedule_set_size: usize,
    pub small_family: bool,
    pub expanding: bool,
    pub below_eps_threshold: bool,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Hypotheses {
    pub half_size: bool,
    pub no_short_paths: bool,
    pub forbidden_budget: bool,
    pub exit_share: bool,
    /// No augmenting path of length up to `2n + 1`. The growth step relies
    /// on this when it turns tail edges into new both-type vertices; it is
    /// recorded but not part of the gate.
    pub no_next_paths: bool,
    pub admissible: bool,
}

impl Hypotheses {
    pub fn all(&self) -> bool {
        self.half_size && self.no_short_paths && self.forbidden_budget && self.exit_share && self.admissible
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelRecord {
    pub level: usize,
    pub x_size: usize,
    pub b_size: usize,
    pub e_sum: u64,
    pub f_sum: u64,
    pub i_value: f64,
    pub j_value: f64,
    /// Counters are exact only while every earlier level had its families.
    pub counters_exact: bool,
    pub hypotheses: Hypotheses,
    /// Whether `I(n+1) ≥ (1 + delta)·I(n)`, when both sides are exact.
    pub growth_holds: Option<bool>,
    pub tough: Vec<ToughRecord>,
    #[serde(skip)]
    i_exact: Ratio<u64>,
}

impl LevelRecord {
    pub fn flagged(&self) -> bool {
        self.hypotheses.all() && self.counters_exact
    }

    pub fn i_exact(&self) -> Ratio<u64> {
        self.i_exact
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    FamilyOutsideBoth,
    EmptyFamily,
    FamiliesIntersect,
    AdjacentTough,
    CounterBound,
    ScheduleNotInFamily,
    ScheduleGrowth,
    Consumption,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub level: usize,
    pub vertex: usize,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiagnosticRun {
    pub constants: Constants,
    pub n: usize,
    pub seeds: Vec<usize>,
    pub shortest_augmenting: Option<usize>,
    pub levels: Vec<LevelRecord>,
    pub schedules: Vec<FxSchedule>,
    pub violations: Vec<Violation>,
    /// Levels whose families were computed and checked.
    pub instrumented: Vec<usize>,
    #[serde(skip)]
    pub states: Vec<FrontierState>,
}

#[derive(Debug, Clone, Copy)]
pub struct DiagConfig {
    pub family_cap: usize,
    pub max_level: usize,
    pub budget: u64,
}

impl Default for DiagConfig {
    fn default() -> Self {
        DiagConfig {
            family_cap: 60,
            max_level: 24,
            budget: DEFAULT_PATH_BUDGET,
        }
    }
}

/// Observes the frontier from `seeds` level by level without touching the
/// matching. `c0` must be a lower bound on the expansion constant and
/// `admissible` the outcome of the odd-cut check.
pub fn diagnose(
    g: &Graph,
    m: &Matching,
    seeds: &[usize],
    c0: &BigRational,
    admissible: bool,
    cfg: DiagConfig,
) -> Result<DiagnosticRun> {
    let n = g.vertex_count();
    let d = g.degree();
    let constants = Constants::new(d, c0, m.unmatched_count(), n)?;
    let max_level = cfg.max_level;
    let states = grow_frontier(g, m, seeds, &ForbiddenSchedule::empty(), max_level + 1, cfg.budget)?;
    let seeds = states[0].seeds.clone();
    let shortest = shortest_augmenting_path(g, m, &seeds, 2 * max_level + 3)?.map(|p| p.len());
    let no_path_up_to = |len: usize| shortest.is_none_or(|l| l > len);

    let mut schedules: BTreeMap<usize, FxSchedule> = BTreeMap::new();
    let mut e = vec![0u64; n];
    let mut f = vec![0u64; n];
    let mut counters_exact = true;
    let mut levels = Vec::with_capacity(max_level + 1);
    let mut violations = Vec::new();
    let mut instrumented = Vec::new();
    // tough moments with a small expanding family: (level, vertex, neighbour)
    let mut pending: Vec<(usize, usize, usize)> = Vec::new();
    let mut families_by_level: Vec<BTreeMap<usize, Vec<usize>>> = Vec::new();

    for lvl in 0..=max_level {
        let st = &states[lvl];
        let tough = tough_vertices(g, &states, lvl);
        let with_families = counters_exact && st.size() <= cfg.family_cap;
        let mut records = Vec::with_capacity(tough.len());
        let mut families = BTreeMap::new();
        let (e_sum, f_sum) = (e.iter().sum::<u64>(), f.iter().sum::<u64>());
        for &x in &tough {
            if let std::collections::btree_map::Entry::Vacant(e) = schedules.entry(x) {
                e.insert(family_schedule(g, m, &states, x, cfg.budget)?);
            }
            let schedule = &schedules[&x];
            let first = first_tail_time(&states, x).expect("tough vertices are tails or seeds");
            let age = lvl - first;
            let family = if with_families {
                Some(family_by_pruning(g, m, &st.members, x, age, cfg.budget)?)
            } else {
                None
            };
            let phase = schedule.phase(lvl);
            let (small, expanding, below_eps) = match &family {
                Some(fam) => {
                    let mut in_fam = vec![false; n];
                    fam.iter().for_each(|&y| in_fam[y] = true);
                    let edge = fam.iter().find_map(|&v| {
                        g.neighbors(v)
                            .iter()
                            .find(|&&w| !in_fam[w] && st.labels[w] == Label::Both)
                            .copied()
                    });
                    if let Some(w) = edge {
                        if !fam.is_empty() && constants.below_c1(fam.len()) {
                            pending.push((lvl, x, w));
                        }
                    }
                    let below = fam.len() * m.unmatched_count() < constants.c3 as usize * n;
                    (constants.below_c1(fam.len()), edge.is_some(), below)
                }
                None => (false, false, false),
            };
            records.push(ToughRecord {
                vertex: x,
                first_tail_time: first,
                age,
                family: family.clone(),
                e_count: e[x],
                f_count: f[x],
                phase,
                schedule_step: schedule.counter(lvl),
                schedule_set_size: schedule.set_at(lvl).len(),
                small_family: small,
                expanding,
                below_eps_threshold: below_eps,
            });
            if let Some(fam) = family {
                families.insert(x, fam);
            }
        }
        if with_families {
            instrumented.push(lvl);
            check_families(g, st, &tough, &families, &schedules, &constants, lvl, &mut violations);
            for r in &records {
                if !constants.within_c1_squared(r.e_count) {
                    violations.push(Violation {
                        level: lvl,
                        vertex: r.vertex,
                        kind: ViolationKind::CounterBound,
                    });
                }
            }
        }
        let numer = 2 * (st.size() + st.both.len()) as u64 + e_sum;
        let i_exact = Ratio::new(numer, 2 * n as u64);
        let j_value = (2 * (st.size() + st.both.len()) as u64 + f_sum) as f64 / (2 * n) as f64;
        let hypotheses = Hypotheses {
            half_size: 2 * st.size() <= n,
            no_short_paths: lvl == 0 || no_path_up_to(2 * lvl - 1),
            // the schedule is empty, so nothing is forbidden
            forbidden_budget: true,
            exit_share: true,
            no_next_paths: no_path_up_to(2 * lvl + 1),
            admissible,
        };
        levels.push(LevelRecord {
            level: lvl,
            x_size: st.size(),
            b_size: st.both.len(),
            e_sum,
            f_sum,
            i_value: *i_exact.numer() as f64 / *i_exact.denom() as f64,
            j_value,
            counters_exact,
            hypotheses,
            growth_holds: None,
            tough: records,
            i_exact,
        });
        if with_families {
            for r in &levels[lvl].tough {
                if r.small_family && r.expanding {
                    e[r.vertex] += 1;
                }
                if r.below_eps_threshold && r.phase == Phase::Active {
                    f[r.vertex] += 1;
                }
            }
        } else {
            counters_exact = false;
        }
        families_by_level.push(families);
    }

    let factor = constants.growth_factor();
    for lvl in 0..max_level {
        if levels[lvl].counters_exact && levels[lvl + 1].counters_exact {
            let cur = rational_from_ratio(levels[lvl].i_exact);
            let next = rational_from_ratio(levels[lvl + 1].i_exact);
            levels[lvl].growth_holds = Some(next >= &factor * cur);
        }
    }

    // a small expanding family must swallow the neighbour within c1 levels
    let horizon = constants.c1.ceil() as usize;
    for (lvl, x, w) in pending {
        let later = lvl + horizon;
        if later > max_level {
            continue;
        }
        let Some(fam) = families_by_level[later].get(&x) else {
            if states[later].reaches_odd(x) || !levels[later].counters_exact || states[later].size() > cfg.family_cap {
                continue;
            }
            violations.push(Violation {
                level: lvl,
                vertex: x,
                kind: ViolationKind::Consumption,
            });
            continue;
        };
        if !fam.contains(&w) && !states[later].reaches_odd(x) {
            violations.push(Violation {
                level: lvl,
                vertex: x,
                kind: ViolationKind::Consumption,
            });
        }
    }

    Ok(DiagnosticRun {
        constants,
        n,
        seeds,
        shortest_augmenting: shortest,
        levels,
        schedules: schedules.into_values().collect(),
        violations,
        instrumented,
        states,
    })
}

#[allow(clippy::too_many_arguments)]
fn check_families(
    g: &SimpleGraph,
    st: &FrontierState,
    tough: &[usize],
    families: &BTreeMap<usize, Vec<usize>>,
    schedules: &BTreeMap<usize, FxSchedule>,
    constants: &Constants,
    lvl: usize,
    out: &mut Vec<Violation>,
) {
    let n = g.vertex_count();
    let mut owner = vec![usize::MAX; n];
    let mut is_tough = vec![false; n];
    tough.iter().for_each(|&x| is_tough[x] = true);
    let mut push = |vertex, kind| {
        out.push(Violation {
            level: lvl,
            vertex,
            kind,
        })
    };
    for (&x, fam) in families {
        if fam.is_empty() {
            push(x, ViolationKind::EmptyFamily);
        }
        if fam.iter().any(|&y| st.labels[y] != Label::Both) {
            push(x, ViolationKind::FamilyOutsideBoth);
        }
        if fam.iter().any(|&y| owner[y] != usize::MAX) {
            push(x, ViolationKind::FamiliesIntersect);
        }
        fam.iter().for_each(|&y| owner[y] = x);
        let adjacent: Vec<usize> = fam
            .iter()
            .flat_map(|&y| g.neighbors(y).iter().copied())
            .filter(|&t| is_tough[t])
            .collect();
        if adjacent.iter().any(|&t| t != x) || !adjacent.contains(&x) {
            push(x, ViolationKind::AdjacentTough);
        }
        let schedule = &schedules[&x];
        let set = schedule.set_at(lvl);
        if set.iter().any(|y| fam.binary_search(y).is_err()) {
            push(x, ViolationKind::ScheduleNotInFamily);
        }
        if 2 * fam.len() < n {
            let step = schedule.counter(lvl).unwrap_or(0) as i32;
            let bound = constants.family_scale * (1.0 + constants.family_rate).powi(step);
            if ((set.len() + 1) as f64) < bound {
                push(x, ViolationKind::ScheduleGrowth);
            }
        }
    }
}

/// Output of the path-pair reduction: the pivot where the two paths part
/// for good, the vertex set on the second path beyond it, and for each of
/// its vertices an odd and an even alternating path from the common start.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntertwinedReduction {
    pub pivot: usize,
    pub set: Vec<usize>,
    pub pairs: Vec<(usize, Vec<usize>, Vec<usize>)>,
}

/// `p` and `q` start at the same vertex with an unmatched edge and end in
/// the same matched edge traversed in opposite directions. Matched edges are
/// read off the positions, so both paths must alternate for one matching.
pub fn intertwined_paths_reduce(p: &AlternatingPath, q: &AlternatingPath) -> Result<IntertwinedReduction> {
    let (pv, qv) = (p.vertices(), q.vertices());
    let bad = |msg: &str| Err(Error::BadInput(msg.to_owned()));
    if pv.len() < 3 || qv.len() < 3 || !p.len().is_multiple_of(2) || !q.len().is_multiple_of(2) {
        return bad("both paths must have even positive length");
    }
    if pv[0] != qv[0] {
        return bad("paths start at different vertices");
    }
    let (lp, lq) = (pv.len(), qv.len());
    if pv[lp - 2] != qv[lq - 1] || pv[lp - 1] != qv[lq - 2] {
        return bad("paths do not end in the same matched edge from opposite directions");
    }
    for path in [pv, qv] {
        let mut seen = std::collections::HashSet::new();
        if !path.iter().all(|v| seen.insert(*v)) {
            return bad("paths must be simple");
        }
    }
    let mut mate = std::collections::HashMap::new();
    for path in [pv, qv] {
        for i in (1..path.len()).step_by(2) {
            let (a, b) = (path[i], path[i + 1]);
            for (u, w) in [(a, b), (b, a)] {
                if *mate.entry(u).or_insert(w) != w {
                    return bad("paths disagree on the matching");
                }
            }
        }
    }
    for path in [pv, qv] {
        for i in (0..path.len() - 1).step_by(2) {
            if mate.get(&path[i]) == Some(&path[i + 1]) {
                return bad("an unmatched position uses a matched edge");
            }
        }
    }
    // matched edges of q indexed by i: (q[2i+1], q[2i+2]); position on p
    let pos_p: std::collections::HashMap<usize, usize> = pv.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let edges = (lq - 1) / 2;
    // p-position of the edge's first vertex on p, and whether it is good
    let on_p: Vec<Option<(usize, bool)>> = (0..edges)
        .map(|i| {
            let (a, b) = (qv[2 * i + 1], qv[2 * i + 2]);
            match (pos_p.get(&a), pos_p.get(&b)) {
                (Some(&ia), Some(&ib)) if ia + 1 == ib => Some((ia, true)),
                (Some(&ia), Some(&ib)) if ib + 1 == ia => Some((ib, false)),
                _ => None,
            }
        })
        .collect();
    let z: Vec<usize> = (0..edges)
        .map(|i| {
            (i..edges)
                .filter(|&j| on_p[j].is_some())
                .min_by_key(|&j| on_p[j].unwrap().0)
                .expect("the final edge lies on both paths")
        })
        .collect();
    let pivot_edge = (0..edges)
        .rev()
        .find(|&i| z[i] == i && on_p[i].is_some_and(|(_, good)| good));
    let (pivot, q_from) = match pivot_edge {
        Some(i) => (qv[2 * i + 2], 2 * i + 2),
        None => (qv[0], 0),
    };
    let pivot_on_p = pos_p[&pivot];
    let prefix = &pv[..=pivot_on_p];
    let mut set: Vec<usize> = qv[q_from + 1..].to_vec();
    set.sort_unstable();
    let mut pairs = Vec::new();
    for i in q_from / 2..edges {
        let (a, b) = (2 * i + 1, 2 * i + 2);
        // along q from the pivot
        let forward: Vec<usize> = prefix
            .iter()
            .copied()
            .chain(qv[q_from + 1..=b].iter().copied())
            .collect();
        // along p to Z(e), then backwards on q
        let (zp, _) = on_p[z[i]].unwrap();
        let zq_first = 2 * z[i] + 1;
        let mut backward: Vec<usize> = pv[..=zp + 1].to_vec();
        backward.extend(qv[a..zq_first].iter().rev());
        for (target, idx) in [(qv[a], a), (qv[b], b)] {
            let f_end = forward.len() - (b - idx);
            let via_q = forward[..f_end].to_vec();
            let via_p = match backward.iter().position(|&v| v == target) {
                Some(k) => backward[..=k].to_vec(),
                None => unreachable!("backward path visits the whole edge"),
            };
            pairs.push((target, via_q, via_p));
        }
    }
    Ok(IntertwinedReduction { pivot, set, pairs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::random_regular;
    use crate::graph::Parity;

    #[test]
    fn constants_examples() {
        let c = Constants::new(3, &BigRational::new(1.into(), 2.into()), 4, 100).unwrap();
        assert_eq!(c.c3, 2);
        assert!((c.c1 - 96.0).abs() < 1e-12);
        assert!(c.below_c1(95) && !c.below_c1(96));
        assert!(c.within_c1_squared(9216) && !c.within_c1_squared(9217));
        assert!((c.delta - 0.125 / (128.0 * 1728.0)).abs() < 1e-15);
        assert_eq!(
            Constants::new(3, &BigRational::new(1.into(), 2.into()), 2, 100)
                .unwrap()
                .c3,
            1
        );
        assert!(Constants::new(3, &BigRational::zero(), 2, 100).is_err());
        assert!(c.block_len > 8.0 && c.level_bound > c.warmup);
    }

    #[test]
    fn no_both_no_tough() {
        let g = SimpleGraph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
        let m = Matching::from_pairs(&g, &[(1, 2), (3, 4)]).unwrap();
        let states = grow_frontier(&g, &m, &[0], &ForbiddenSchedule::empty(), 3, DEFAULT_PATH_BUDGET).unwrap();
        for lvl in 0..3 {
            assert!(states[lvl].both.is_empty());
            assert!(tough_vertices(&g, &states, lvl).is_empty());
        }
        assert_eq!(
            family_schedule(&g, &m, &states, 2, DEFAULT_PATH_BUDGET),
            Err(Error::NeverTough(2))
        );
        assert_eq!(
            compute_family(&g, &m, &states, 2, 1, DEFAULT_PATH_BUDGET),
            Err(Error::NotTough { vertex: 2, level: 1 })
        );
    }

    /// Seed 0 with a pendant triangle of pairs behind a tail: 0-1=2, and
    /// 2 sees the pair 3=4 through both ends, which closes an odd cycle.
    #[test]
    fn tough_edge_family() {
        // 0 - 1 = 2, 2 - 3 = 4, 2 - 4 ... blossom 2,3,4; 4 - 5 = 6, 6 - 2
        let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (2, 5), (4, 5), (5, 6)];
        let g = SimpleGraph::from_edges(7, &edges).unwrap();
        let m = Matching::from_pairs(&g, &[(1, 2), (3, 4), (5, 6)]).unwrap();
        let states = grow_frontier(&g, &m, &[0], &ForbiddenSchedule::empty(), 5, DEFAULT_PATH_BUDGET).unwrap();
        for lvl in 0..5 {
            for x in tough_vertices(&g, &states, lvl) {
                let fam = compute_family(&g, &m, &states, x, lvl, DEFAULT_PATH_BUDGET).unwrap();
                assert!(!fam.is_empty());
                assert!(fam.iter().all(|&y| states[lvl].labels[y] == Label::Both));
                // every both-type neighbour of x is in its family
                for &y in g.neighbors(x) {
                    if states[lvl].labels[y] == Label::Both {
                        assert!(fam.contains(&y));
                    }
                }
            }
        }
    }

    fn fixture() -> (SimpleGraph, Matching, AlternatingPath, AlternatingPath) {
        let edges = [
            (0, 7),
            (0, 1),
            (2, 3),
            (4, 5),
            (1, 8),
            (2, 9),
            (4, 10),
            (3, 6),
            (1, 2),
            (3, 4),
            (5, 6),
            (7, 8),
            (9, 10),
        ];
        let edges: Vec<_> = edges
            .iter()
            .map(|&(u, v): &(usize, usize)| (u.min(v), u.max(v)))
            .collect();
        let g = SimpleGraph::from_edges(11, &edges).unwrap();
        let m = Matching::from_pairs(&g, &[(1, 2), (3, 4), (5, 6), (7, 8), (9, 10)]).unwrap();
        let p = AlternatingPath::new(vec![0, 7, 8, 1, 2, 9, 10, 4, 3, 6, 5]);
        let q = AlternatingPath::new(vec![0, 1, 2, 3, 4, 5, 6]);
        (g, m, p, q)
    }

    fn check_reduction(
        g: &SimpleGraph,
        m: &Matching,
        p: &AlternatingPath,
        q: &AlternatingPath,
        r: &IntertwinedReduction,
    ) {
        let bound = q.len() + 2 * p.len() - 3;
        let allowed: Vec<usize> = r.set.iter().chain(p.vertices()).copied().collect();
        let (v, w) = (q.last(), p.last());
        assert!(r.set.contains(&v) && r.set.contains(&w));
        for z in &r.set {
            let (target, a, b) = r.pairs.iter().find(|(t, _, _)| t == z).unwrap();
            assert_eq!(target, z);
            for path in [a, b] {
                let ap = AlternatingPath::new(path.clone());
                assert!(ap.is_alternating(g, m), "{path:?}");
                assert!(!m.is_matched_edge(path[0], path[1]));
                assert_eq!(ap.first(), p.first());
                assert_eq!(ap.last(), *z);
                assert!(path.iter().all(|u| allowed.contains(u)));
            }
            assert_ne!(Parity::of(a.len() - 1), Parity::of(b.len() - 1));
            assert!(a.len() - 1 + b.len() - 1 <= bound);
        }
    }

    #[test]
    fn intertwined_fixture() {
        let (g, m, p, q) = fixture();
        let r = intertwined_paths_reduce(&p, &q).unwrap();
        assert_eq!(r.pivot, 2);
        assert_eq!(r.set, vec![3, 4, 5, 6]);
        check_reduction(&g, &m, &p, &q, &r);
    }

    #[test]
    fn intertwined_disjoint_and_errors() {
        // 0-1=2-3=4 and 0-5=6-4=3 through a shared matched edge 3=4
        let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (0, 5), (5, 6), (4, 6)];
        let g = SimpleGraph::from_edges(7, &edges).unwrap();
        let m = Matching::from_pairs(&g, &[(1, 2), (3, 4), (5, 6)]).unwrap();
        let p = AlternatingPath::new(vec![0, 5, 6, 4, 3]);
        let q = AlternatingPath::new(vec![0, 1, 2, 3, 4]);
        let r = intertwined_paths_reduce(&p, &q).unwrap();
        assert_eq!(r.pivot, 0);
        assert_eq!(r.set, vec![1, 2, 3, 4]);
        check_reduction(&g, &m, &p, &q, &r);
        let odd = AlternatingPath::new(vec![0, 5, 6, 4]);
        assert!(matches!(intertwined_paths_reduce(&odd, &q), Err(Error::BadInput(_))));
        let same_dir = AlternatingPath::new(vec![0, 1, 2, 3, 4]);
        assert!(intertwined_paths_reduce(&same_dir, &q).is_err());
    }

    #[test]
    fn observer_only() {
        let g = random_regular(40, 3, 3).unwrap();
        let m = crate::pipeline::run_pipeline(
            &g,
            crate::pipeline::PipelineOptions {
                max_stage: 2,
                keep_entries: false,
            },
        )
        .unwrap()
        .matching;
        if m.unmatched_count() == 0 {
            return;
        }
        let before = m.clone();
        let c0 = BigRational::new(1.into(), 10.into());
        let run = diagnose(
            &g,
            &m,
            &m.unmatched(),
            &c0,
            true,
            DiagConfig {
                max_level: 6,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(m, before);
        assert_eq!(run.levels.len(), 7);
        assert!(run.violations.is_empty(), "{:?}", run.violations);
    }
}
