//! Edge boundaries, expansion constants and odd cuts.
//!
//! Measures follow the finite convention: a vertex set weighs `|A|/n` and an
//! edge set `|E|/n`. A graph is then a `c0`-expander when every nonempty
//! proper `H` has `|E(H, Hᶜ)| ≥ c0·|H|·|Hᶜ|/n`, and the best such constant
//! is `min n·|E(H, Hᶜ)| / (|H|·|Hᶜ|)`.
//!
//! Spectral certificate: for a `d`-regular graph with second adjacency
//! eigenvalue `λ₂`, the Rayleigh quotient of the Laplacian on the centred
//! indicator of `H` gives `|E(H, Hᶜ)| ≥ (d − λ₂)·|H|·|Hᶜ|/n`, so `d − λ₂` is
//! a lower bound for `c0`. Small graphs get `λ₂` from a dense symmetric
//! eigensolver; larger ones from power iteration on `A + dI` restricted to
//! the complement of the constant vector, stopped once the residual
//! `‖Ax − μx‖` drops below the tolerance. The reported bound is
//! `d − μ − residual` (or `d − λ₂ − 1e-9` on the dense path), clamped at 0.
//!
//! Odd cuts range over odd `H` with `3 ≤ |H| ≤ n − 3`. Beyond the exact cap
//! the search enumerates connected odd sets up to a size limit, branching on
//! include/exclude and pruning once the edges to excluded vertices exceed
//! the boundary budget. When `n` is even, the graph is connected and the
//! spectral bound rules out every boundary `≤ d` for sizes between the limit
//! and `n` minus the limit, that search settles admissibility exactly
//! ("certified"); otherwise the answer is an upper bound ("sampled").

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{Graph, SimpleGraph};

pub const EXACT_EXPANSION_CAP: usize = 20;
pub const EXACT_ODD_CUT_CAP: usize = 22;
pub const DENSE_SPECTRAL_CAP: usize = 600;
pub const CERTIFIED_SIZE_LIMIT: usize = 23;
pub const SAMPLED_SIZE_LIMIT: usize = 9;

pub fn edge_boundary(g: &SimpleGraph, h: &[usize]) -> usize {
    let mut inside = vec![false; g.vertex_count()];
    let mut members = Vec::with_capacity(h.len());
    for &v in h {
        if !inside[v] {
            inside[v] = true;
            members.push(v);
        }
    }
    members
        .iter()
        .map(|&v| g.neighbors(v).iter().filter(|&&w| !inside[w]).count())
        .sum()
}

fn neighbor_masks(g: &SimpleGraph) -> Vec<u32> {
    (0..g.vertex_count())
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect()
}

fn mask_to_set(mask: u32) -> Vec<usize> {
    (0..32).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Lexicographic order on the sorted element lists of two bitmask sets.
fn lex_less(a: u32, b: u32) -> bool {
    if a == b {
        return false;
    }
    let t = (a ^ b).trailing_zeros();
    let above = !((2u64 << t) - 1) as u32;
    if a >> t & 1 == 1 {
        // a continues with t; b either continues with something larger or stops
        b & above != 0
    } else {
        a & above == 0
    }
}

/// Incremental boundary bookkeeping for Gray code walks.
struct GrayWalk {
    masks: Vec<u32>,
    mask: u32,
    boundary: i64,
    size: usize,
}

impl GrayWalk {
    fn toggle(&mut self, v: usize) {
        let deg = self.masks[v].count_ones() as i64;
        if self.mask >> v & 1 == 1 {
            self.mask ^= 1 << v;
            let k = (self.masks[v] & self.mask).count_ones() as i64;
            self.boundary -= deg - 2 * k;
            self.size -= 1;
        } else {
            let k = (self.masks[v] & self.mask).count_ones() as i64;
            self.mask |= 1 << v;
            self.boundary += deg - 2 * k;
            self.size += 1;
        }
    }
}

/// Minimum of `n·|E(H,Hᶜ)| / (|H|·|Hᶜ|)` with the lexicographically
/// smallest minimizer.
pub fn exact_expansion(g: &SimpleGraph, cap: usize) -> Result<(Ratio<u64>, Vec<usize>)> {
    let n = g.vertex_count();
    if n > cap.min(EXACT_ODD_CUT_CAP + 1) {
        return Err(Error::TooLarge { n, cap });
    }
    if n < 2 {
        return Err(Error::BadInput("expansion needs at least 2 vertices".into()));
    }
    // The lexicographically smaller of H and its complement contains vertex 0,
    // so the walk keeps 0 inside and flips the other n − 1 vertices.
    let mut walk = GrayWalk {
        masks: neighbor_masks(g),
        mask: 0,
        boundary: 0,
        size: 0,
    };
    walk.toggle(0);
    let n64 = n as u64;
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut best = (walk.boundary as u64, 1u64, walk.mask);
    for i in 1u64..1 << (n - 1) {
        walk.toggle(i.trailing_zeros() as usize + 1);
        if walk.mask == full {
            continue;
        }
        let (b, s) = (walk.boundary as u64, walk.size as u64);
        let lhs = b * best.1 * (n64 - best.1);
        let rhs = best.0 * s * (n64 - s);
        if lhs < rhs || (lhs == rhs && lex_less(walk.mask, best.2)) {
            best = (b, s, walk.mask);
        }
    }
    let (b, s, mask) = best;
    Ok((Ratio::new(n64 * b, s * (n64 - s)), mask_to_set(mask)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectralMethod {
    Exact,
    Dense,
    Power,
}

fn serialize_ratio<S: Serializer>(r: &Option<Ratio<u64>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionReport {
    #[serde(serialize_with = "serialize_ratio")]
    pub c0_exact: Option<Ratio<u64>>,
    pub argmin: Option<Vec<usize>>,
    pub c0_spectral_lower: f64,
    pub lambda2: f64,
    pub residual: f64,
    pub iterations: usize,
    pub method: SpectralMethod,
}

impl ExpansionReport {
    /// Power iteration converges to some eigenvalue near the top of the
    /// centered spectrum, which is only an estimate of the second one.
    pub fn is_rigorous(&self) -> bool {
        self.method != SpectralMethod::Power
    }

    /// Best lower bound on the expansion constant (an estimate when not
    /// rigorous).
    pub fn c0(&self) -> f64 {
        match self.c0_exact {
            Some(r) => *r.numer() as f64 / *r.denom() as f64,
            None => self.c0_spectral_lower,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub dense_cap: usize,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        SpectralOptions {
            tol: 1e-6,
            max_iter: 200_000,
            dense_cap: DENSE_SPECTRAL_CAP,
        }
    }
}

fn mul_adjacency(g: &SimpleGraph, x: &[f64], y: &mut [f64]) {
    for (v, yv) in y.iter_mut().enumerate() {
        *yv = g.neighbors(v).iter().map(|&w| x[w]).sum();
    }
}

fn center_normalize(x: &mut [f64]) {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    x.iter_mut().for_each(|v| *v -= mean);
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
}

pub fn spectral_expansion_lower(g: &Graph, opts: SpectralOptions) -> Result<ExpansionReport> {
    let n = g.vertex_count();
    let d = g.degree() as f64;
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    if n <= opts.dense_cap {
        let mut a = nalgebra::DMatrix::<f64>::zeros(n, n);
        for (u, v) in g.edges() {
            a[(u, v)] = 1.0;
            a[(v, u)] = 1.0;
        }
        let mut eig: Vec<f64> = a.symmetric_eigenvalues().iter().copied().collect();
        eig.sort_by(|x, y| y.total_cmp(x));
        let lambda2 = eig.get(1).copied().unwrap_or(-d);
        let margin = 1e-9 * (1.0 + d);
        return Ok(ExpansionReport {
            c0_exact: None,
            argmin: None,
            c0_spectral_lower: (d - lambda2 - margin).max(0.0),
            lambda2,
            residual: margin,
            iterations: 0,
            method: SpectralMethod::Dense,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut x: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() - 0.5).collect();
    center_normalize(&mut x);
    let mut ax = vec![0.0; n];
    let mut residual = f64::INFINITY;
    let mut mu = 0.0;
    for it in 1..=opts.max_iter {
        mul_adjacency(g, &x, &mut ax);
        mu = x.iter().zip(&ax).map(|(a, b)| a * b).sum::<f64>();
        residual = x
            .iter()
            .zip(&ax)
            .map(|(xv, av)| (av - mu * xv).powi(2))
            .sum::<f64>()
            .sqrt();
        if residual <= opts.tol {
            return Ok(ExpansionReport {
                c0_exact: None,
                argmin: None,
                c0_spectral_lower: (d - mu - residual).max(0.0),
                lambda2: mu,
                residual,
                iterations: it,
                method: SpectralMethod::Power,
            });
        }
        for (xv, av) in x.iter_mut().zip(&ax) {
            *xv = av + d * *xv;
        }
        center_normalize(&mut x);
    }
    let _ = mu;
    Err(Error::NoConvergence {
        iterations: opts.max_iter,
        residual,
    })
}

/// Exact constant when `n` is within the brute-force cap, spectral bound
/// otherwise; both when `exact` is requested and possible.
pub fn expansion_report(g: &Graph, exact: bool, opts: SpectralOptions) -> Result<ExpansionReport> {
    let n = g.vertex_count();
    if exact || n <= EXACT_EXPANSION_CAP {
        let (c0, h) = exact_expansion(g, EXACT_EXPANSION_CAP)?;
        let spectral = if *c0.numer() == 0 {
            None
        } else {
            Some(spectral_expansion_lower(g, opts)?)
        };
        return Ok(ExpansionReport {
            c0_exact: Some(c0),
            argmin: Some(h),
            c0_spectral_lower: spectral.as_ref().map_or(0.0, |s| s.c0_spectral_lower),
            lambda2: spectral.as_ref().map_or(g.degree() as f64, |s| s.lambda2),
            residual: spectral.as_ref().map_or(0.0, |s| s.residual),
            iterations: spectral.as_ref().map_or(0, |s| s.iterations),
            method: SpectralMethod::Exact,
        });
    }
    spectral_expansion_lower(g, opts)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OddCutCertificate {
    pub subset: Vec<usize>,
    pub size: usize,
    pub boundary: usize,
}

impl OddCutCertificate {
    fn new(subset: Vec<usize>, boundary: usize) -> Self {
        OddCutCertificate {
            size: subset.len(),
            subset,
            boundary,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OddCutMode {
    Exact,
    Certified,
    Sampled,
}

impl std::fmt::Display for OddCutMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            OddCutMode::Exact => "exact",
            OddCutMode::Certified => "certified",
            OddCutMode::Sampled => "sampled",
        })
    }
}

/// Smallest boundary over odd `H` with `3 ≤ |H| ≤ n − 3`, ties broken by the
/// lexicographically smallest set. `None` when no such `H` exists (`n < 6`).
pub fn min_odd_cut_exact(g: &SimpleGraph, cap: usize) -> Result<Option<OddCutCertificate>> {
    let n = g.vertex_count();
    let cap = cap.min(31);
    if n > cap {
        return Err(Error::TooLarge { n, cap });
    }
    if n < 6 {
        return Ok(None);
    }
    let mut walk = GrayWalk {
        masks: neighbor_masks(g),
        mask: 0,
        boundary: 0,
        size: 0,
    };
    let mut best: Option<(i64, u32)> = None;
    for i in 1u64..1 << n {
        walk.toggle(i.trailing_zeros() as usize);
        if walk.size % 2 == 1 && walk.size >= 3 && walk.size + 3 <= n {
            let better = match best {
                None => true,
                Some((b, m)) => walk.boundary < b || (walk.boundary == b && lex_less(walk.mask, m)),
            };
            if better {
                best = Some((walk.boundary, walk.mask));
            }
        }
    }
    Ok(best.map(|(b, m)| OddCutCertificate::new(mask_to_set(m), b as usize)))
}

/// Connected odd sets of size `3..=max_size` (and at most `n − 3`) with
/// boundary at most `max_boundary`; returns the one with the smallest
/// boundary, then smallest size, then lexicographically smallest.
pub fn small_odd_cuts(g: &SimpleGraph, max_size: usize, max_boundary: usize) -> Option<OddCutCertificate> {
    let n = g.vertex_count();
    let max_size = max_size.min(n.saturating_sub(3));
    if max_size < 3 {
        return None;
    }
    let mut search = ConnectedSearch {
        g,
        max_size,
        max_boundary,
        state: vec![State::Free; n],
        inside: Vec::with_capacity(max_size),
        anchor: 0,
        best: None,
    };
    for anchor in 0..n {
        search.run(anchor);
    }
    search.best.map(|(b, _, set)| OddCutCertificate::new(set, b))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum State {
    Free,
    Inside,
    Excluded,
}

struct ConnectedSearch<'a> {
    g: &'a SimpleGraph,
    max_size: usize,
    max_boundary: usize,
    state: Vec<State>,
    inside: Vec<usize>,
    anchor: usize,
    best: Option<(usize, usize, Vec<usize>)>,
}

impl ConnectedSearch<'_> {
    fn run(&mut self, anchor: usize) {
        // every set is found from its smallest vertex, so smaller ones are out
        self.anchor = anchor;
        self.state[anchor] = State::Inside;
        self.inside.push(anchor);
        let fixed = self.g.neighbors(anchor).iter().filter(|&&w| w < anchor).count();
        let open = self.g.degree_of(anchor) - fixed;
        self.branch(fixed, open, Vec::new());
        self.inside.clear();
        self.state[anchor] = State::Free;
    }

    fn is_free(&self, v: usize) -> bool {
        v > self.anchor && self.state[v] == State::Free
    }

    /// `fixed` counts edges from the set to excluded vertices, `open` the
    /// edges to undecided ones. `excluded` lists vertices excluded in this
    /// branch so they can be released on return.
    fn branch(&mut self, fixed: usize, open: usize, mut excluded: Vec<usize>) {
        if fixed > self.max_boundary {
            self.release(&excluded);
            return;
        }
        let size = self.inside.len();
        if size % 2 == 1 && size >= 3 && fixed + open <= self.max_boundary {
            self.record(fixed + open);
        }
        if size == self.max_size || open == 0 {
            self.release(&excluded);
            return;
        }
        let Some(w) = self.pick_candidate() else {
            self.release(&excluded);
            return;
        };
        let links = self
            .g
            .neighbors(w)
            .iter()
            .filter(|&&u| self.state[u] == State::Inside)
            .count();
        let outside_free = self.g.neighbors(w).iter().filter(|&&u| self.is_free(u)).count();
        let outside_fixed = self.g.degree_of(w) - links - outside_free;

        self.state[w] = State::Inside;
        self.inside.push(w);
        self.branch(fixed + outside_fixed, open - links + outside_free, Vec::new());
        self.inside.pop();

        self.state[w] = State::Excluded;
        excluded.push(w);
        self.branch(fixed + links, open - links, excluded);
    }

    fn release(&mut self, excluded: &[usize]) {
        for &v in excluded {
            self.state[v] = State::Free;
        }
    }

    fn pick_candidate(&self) -> Option<usize> {
        self.inside
            .iter()
            .flat_map(|&v| self.g.neighbors(v).iter().copied())
            .find(|&w| self.is_free(w))
    }

    fn record(&mut self, boundary: usize) {
        let mut set = self.inside.clone();
        set.sort_unstable();
        let key = (boundary, set.len());
        let better = match &self.best {
            None => true,
            Some((b, s, best)) => key < (*b, *s) || (key == (*b, *s) && set < *best),
        };
        if better {
            self.best = Some((boundary, set.len(), set));
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OddCutReport {
    pub mode: OddCutMode,
    pub max_size: usize,
    pub cut: Option<OddCutCertificate>,
}

/// Exact search when `n ≤ cap`; otherwise the connected-set search with the
/// given size limit and boundary budget, flagged as sampled.
pub fn min_odd_cut(g: &SimpleGraph, cap: usize, sample_size: usize, max_boundary: usize) -> Result<OddCutReport> {
    let n = g.vertex_count();
    if n <= cap.min(EXACT_ODD_CUT_CAP) {
        return Ok(OddCutReport {
            mode: OddCutMode::Exact,
            max_size: n.saturating_sub(3),
            cut: min_odd_cut_exact(g, cap)?,
        });
    }
    Ok(OddCutReport {
        mode: OddCutMode::Sampled,
        max_size: sample_size,
        cut: small_odd_cuts(g, sample_size, max_boundary),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub mode: OddCutMode,
    pub c0: f64,
    /// Odd sets up to this size were searched (all sizes in exact mode).
    pub max_size: usize,
    pub witness: Option<OddCutCertificate>,
}

/// Largest set size whose boundary the expansion bound does not already
/// push above `d`; `None` if it exceeds `limit`.
fn spectral_size_limit(n: usize, d: usize, c0: f64, limit: usize) -> Option<usize> {
    (0..=limit).find(|&s| {
        let t = s + 1;
        t * 2 > n || c0 * (t as f64) * ((n - t) as f64) / n as f64 > d as f64 + 1e-9
    })
}

/// `c0` must be a valid lower bound on the expansion constant; the graph is
/// admissible when `c0 > 0` and no odd `H` with `3 ≤ |H| ≤ n − 3` has
/// boundary `≤ d`.
pub fn is_admissible(g: &Graph, c0: f64) -> Result<AdmissibilityReport> {
    is_admissible_with(g, c0, true)
}

/// As [`is_admissible`]; with `c0_rigorous == false` the search still uses
/// the size limit implied by `c0` but the result is labelled sampled.
pub fn is_admissible_with(g: &Graph, c0: f64, c0_rigorous: bool) -> Result<AdmissibilityReport> {
    let n = g.vertex_count();
    let d = g.degree();
    let report = |admissible, mode, max_size, witness| AdmissibilityReport {
        admissible,
        mode,
        c0,
        max_size,
        witness,
    };
    if n <= EXACT_ODD_CUT_CAP {
        let cut = min_odd_cut_exact(g, EXACT_ODD_CUT_CAP)?;
        let witness = cut.filter(|c| c.boundary <= d);
        let ok = c0 > 0.0 && witness.is_none();
        return Ok(report(ok, OddCutMode::Exact, n.saturating_sub(3), witness));
    }
    let certified = n.is_multiple_of(2) && c0 > 0.0 && g.is_connected();
    let (mode, max_size) = match spectral_size_limit(n, d, c0, CERTIFIED_SIZE_LIMIT) {
        Some(s) if certified && c0_rigorous => (OddCutMode::Certified, s.max(3)),
        Some(s) if certified => (OddCutMode::Sampled, s.max(SAMPLED_SIZE_LIMIT)),
        _ => (OddCutMode::Sampled, SAMPLED_SIZE_LIMIT),
    };
    let witness = small_odd_cuts(g, max_size, d);
    let ok = c0 > 0.0 && witness.is_none() && g.is_connected();
    Ok(report(ok, mode, max_size, witness))
}

/// Vertex set attaining the minimum nonempty proper cut, from unit-capacity
/// max-flows between vertex 0 and every other vertex.
pub fn min_cut(g: &SimpleGraph) -> Result<(usize, Vec<usize>)> {
    let n = g.vertex_count();
    if n < 2 {
        return Err(Error::BadInput("a cut needs at least 2 vertices".into()));
    }
    let mut best: Option<(usize, Vec<usize>)> = None;
    for t in 1..n {
        let (value, side) = max_flow_cut(g, 0, t);
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            best = Some((value, side));
        }
    }
    Ok(best.unwrap())
}

/// Unit-capacity max-flow between `s` and `t` on the undirected graph; each
/// edge carries at most one unit in either direction. Returns the flow value
/// and the source side of a minimum cut.
fn max_flow_cut(g: &SimpleGraph, s: usize, t: usize) -> (usize, Vec<usize>) {
    let n = g.vertex_count();
    // flow[slot of (v, w)] ∈ {-1, 0, 1}, antisymmetric
    let mut flow = vec![0i8; g.slot_count()];
    let mut value = 0;
    let mut parent = vec![usize::MAX; n];
    loop {
        parent.iter_mut().for_each(|p| *p = usize::MAX);
        parent[s] = s;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &w in g.neighbors(v) {
                if parent[w] == usize::MAX && flow[g.slot(v, w).unwrap()] < 1 {
                    parent[w] = v;
                    queue.push_back(w);
                }
            }
        }
        if parent[t] == usize::MAX {
            let side = (0..n).filter(|&v| parent[v] != usize::MAX).collect();
            return (value, side);
        }
        let mut v = t;
        while v != s {
            let u = parent[v];
            flow[g.slot(u, v).unwrap()] += 1;
            flow[g.slot(v, u).unwrap()] -= 1;
            v = u;
        }
        value += 1;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CutFamilyWitness {
    pub first: usize,
    pub second: usize,
    pub operation: &'static str,
    pub subset: Vec<usize>,
    pub boundary: usize,
}

/// Checks that every difference, union and intersection of two minimum cuts
/// is empty, everything, or again a minimum cut. Returns the first violation.
pub fn best_cut_family_check(g: &SimpleGraph, cuts: &[Vec<usize>]) -> Result<Option<CutFamilyWitness>> {
    let n = g.vertex_count();
    let (min, _) = min_cut(g)?;
    let mut members = Vec::with_capacity(cuts.len());
    for c in cuts {
        let mut m = vec![false; n];
        for &v in c {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            m[v] = true;
        }
        let size = m.iter().filter(|&&x| x).count();
        let boundary = edge_boundary(g, c);
        if size == 0 || size == n || boundary != min {
            return Err(Error::NotBestCut { boundary, min });
        }
        members.push(m);
    }
    type Op = fn(bool, bool) -> bool;
    let ops: [(&str, Op); 4] = [
        ("difference", |a, b| a && !b),
        ("reverse_difference", |a, b| b && !a),
        ("union", |a, b| a || b),
        ("intersection", |a, b| a && b),
    ];
    for i in 0..cuts.len() {
        for j in i + 1..cuts.len() {
            for (name, op) in ops {
                let subset: Vec<usize> = (0..n).filter(|&v| op(members[i][v], members[j][v])).collect();
                if subset.is_empty() || subset.len() == n {
                    continue;
                }
                let boundary = edge_boundary(g, &subset);
                if boundary != min {
                    return Ok(Some(CutFamilyWitness {
                        first: i,
                        second: j,
                        operation: name,
                        subset,
                        boundary,
                    }));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{circulant, complete, cycle, prism_clique_chain, random_regular};

    pub(crate) fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        let edges: Vec<_> = edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
        Graph::from_edges(10, &edges).unwrap()
    }

    fn two_k4() -> Graph {
        let mut edges = Vec::new();
        for base in [0, 4] {
            for i in 0..4 {
                for j in i + 1..4 {
                    edges.push((base + i, base + j));
                }
            }
        }
        Graph::from_edges(8, &edges).unwrap()
    }

    #[test]
    fn boundaries() {
        assert_eq!(edge_boundary(&complete(4).unwrap(), &[0]), 3);
        assert_eq!(edge_boundary(&cycle(6).unwrap(), &[0, 1, 2]), 2);
        assert_eq!(edge_boundary(&petersen(), &[0, 1, 2, 3, 4]), 5);
        assert_eq!(edge_boundary(&petersen(), &[5, 7, 9, 6, 8]), 5);
        assert_eq!(edge_boundary(&cycle(6).unwrap(), &[0, 0, 1]), 2);
    }

    #[test]
    fn lex_order() {
        assert!(lex_less(0b0011, 0b0101)); // {0,1} < {0,2}
        assert!(lex_less(0b0001, 0b0011)); // {0} < {0,1}
        assert!(!lex_less(0b0011, 0b0001));
        assert!(lex_less(0b0101, 0b0100)); // {0,2} < {2}
        assert!(lex_less(0b1001, 0b0010)); // {0,3} < {1}
    }

    #[test]
    fn exact_expansion_examples() {
        let (c, _) = exact_expansion(&complete(4).unwrap(), 20).unwrap();
        assert_eq!(c, Ratio::from_integer(4));
        let (c, h) = exact_expansion(&cycle(6).unwrap(), 20).unwrap();
        assert_eq!(c, Ratio::new(4, 3));
        assert_eq!(h, vec![0, 1, 2]);
        let (c, h) = exact_expansion(&two_k4(), 20).unwrap();
        assert_eq!(c, Ratio::from_integer(0));
        assert_eq!(h, vec![0, 1, 2, 3]);
        assert!(matches!(
            exact_expansion(&cycle(21).unwrap(), 20),
            Err(Error::TooLarge { n: 21, .. })
        ));
    }

    #[test]
    fn spectral_examples() {
        let opts = SpectralOptions::default();
        let r = spectral_expansion_lower(&complete(4).unwrap(), opts).unwrap();
        assert!((r.lambda2 + 1.0).abs() < 1e-9);
        assert!(r.c0_spectral_lower > 3.99);
        let r = spectral_expansion_lower(&cycle(6).unwrap(), opts).unwrap();
        assert!((r.lambda2 - 1.0).abs() < 1e-9);
        assert!(r.c0_spectral_lower > 0.99 && r.c0_spectral_lower < 4.0 / 3.0);
        assert_eq!(spectral_expansion_lower(&two_k4(), opts), Err(Error::NotConnected));
    }

    #[test]
    fn power_iteration_matches_dense() {
        let g = circulant(40, &[1, 5]).unwrap();
        let dense = spectral_expansion_lower(&g, SpectralOptions::default()).unwrap();
        let power = spectral_expansion_lower(
            &g,
            SpectralOptions {
                tol: 1e-7,
                dense_cap: 0,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(power.method, SpectralMethod::Power);
        assert!((dense.lambda2 - power.lambda2).abs() < 1e-6);
        assert!(power.c0_spectral_lower <= dense.c0_spectral_lower + 1e-6);
        let starved = SpectralOptions {
            tol: 1e-12,
            max_iter: 3,
            dense_cap: 0,
        };
        assert!(matches!(
            spectral_expansion_lower(&g, starved),
            Err(Error::NoConvergence { iterations: 3, .. })
        ));
    }

    #[test]
    fn odd_cut_examples() {
        let c = min_odd_cut_exact(&petersen(), 22).unwrap().unwrap();
        assert_eq!(c.boundary, 5);
        let prism = prism_clique_chain(2, 3).unwrap();
        let c = min_odd_cut_exact(&prism, 22).unwrap();
        assert_eq!(c, Some(OddCutCertificate::new(vec![0, 1, 2], 3)));
        assert_eq!(min_odd_cut_exact(&complete(4).unwrap(), 22).unwrap(), None);
        assert!(min_odd_cut_exact(&cycle(23).unwrap(), 22).is_err());
    }

    #[test]
    fn small_search_agrees_with_exact() {
        for seed in 0..40 {
            let g = random_regular(16, 3, seed).unwrap();
            if !g.is_connected() {
                continue;
            }
            let exact = min_odd_cut_exact(&g, 22).unwrap().unwrap();
            let small = small_odd_cuts(&g, 13, 3);
            assert_eq!(small.is_some(), exact.boundary <= 3, "seed {seed} {exact:?} {small:?}");
            if let Some(c) = small {
                assert_eq!(c.boundary, exact.boundary);
                assert_eq!(edge_boundary(&g, &c.subset), c.boundary);
            }
        }
    }

    #[test]
    fn admissibility_examples() {
        let p = petersen();
        let (c0, _) = exact_expansion(&p, 20).unwrap();
        let r = is_admissible(&p, *c0.numer() as f64 / *c0.denom() as f64).unwrap();
        assert!(r.admissible);
        let prism = prism_clique_chain(2, 3).unwrap();
        let r = is_admissible(&prism, 1.0).unwrap();
        assert!(!r.admissible);
        assert_eq!(r.witness.unwrap().boundary, 3);
        let r = is_admissible(&cycle(6).unwrap(), 4.0 / 3.0).unwrap();
        assert!(!r.admissible);
        let big = prism_clique_chain(10, 3).unwrap();
        let r = is_admissible(&big, 0.1).unwrap();
        assert!(!r.admissible);
        assert_eq!(r.witness.unwrap().size, 3);
    }

    #[test]
    fn certified_mode_on_medium_graph() {
        let g = random_regular(200, 3, 1).unwrap();
        let s = spectral_expansion_lower(&g, SpectralOptions::default()).unwrap();
        let r = is_admissible(&g, s.c0_spectral_lower).unwrap();
        assert_eq!(r.mode, OddCutMode::Certified);
        let r = is_admissible_with(&g, s.c0_spectral_lower, false).unwrap();
        assert_eq!(r.mode, OddCutMode::Sampled);
        assert!(r.max_size >= SAMPLED_SIZE_LIMIT);
    }

    #[test]
    fn cut_family() {
        let prism = prism_clique_chain(2, 3).unwrap();
        assert_eq!(min_cut(&prism).unwrap().0, 3);
        assert_eq!(
            best_cut_family_check(&prism, &[vec![0, 1, 2], vec![3, 4, 5]]).unwrap(),
            None
        );
        let c8 = cycle(8).unwrap();
        assert_eq!(
            best_cut_family_check(&c8, &[vec![0, 1, 2, 3], vec![2, 3, 4, 5]]).unwrap(),
            None
        );
        assert_eq!(best_cut_family_check(&c8, &[vec![0, 1], vec![0, 1]]).unwrap(), None);
        assert!(matches!(
            best_cut_family_check(&c8, &[vec![0, 2]]),
            Err(Error::NotBestCut { boundary: 4, min: 2 })
        ));
        // two overlapping arcs whose intersection is a single vertex still pass
        assert_eq!(
            best_cut_family_check(&c8, &[vec![0, 1, 2], vec![2, 3, 4]]).unwrap(),
            None
        );
        // a vertex and an arc not containing it: union is disconnected
        let w = best_cut_family_check(&c8, &[vec![0], vec![4, 5]]).unwrap().unwrap();
        assert_eq!(w.operation, "union");
        assert_eq!(w.boundary, 4);
    }
}
