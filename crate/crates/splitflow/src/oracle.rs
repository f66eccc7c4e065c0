//! Brute-force exact solvers and bound evaluators for desk-scale instances.
//!
//! These enumerate simple-path catalogs and path selections outright, so they
//! are the ground truth the approximation pipelines are validated against.
//! They refuse (rather than approximate) once the configured limits are hit.
//!
//! Selections are multisets of simple paths with multiplicities summing to
//! the split counts; a path used twice appears twice. For the
//! unrestricted concurrent mode only the support of a selection matters
//! (per-path values absorb multiplicity), so distinct supports are
//! enumerated instead.

use crate::approx::{PathFlow, SplittableFlow, Uniformity};
use crate::cuts::{crossing_demand, uniform_packing};
use crate::graph::{EdgeId, Graph, Instance, VertexId};
use crate::maxflow::Path;
use crate::rational::{ratio, Rational};
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    /// Maximum simple paths per commodity.
    pub max_paths: usize,
    /// Maximum number of path selections examined. The unrestricted
    /// concurrent mode counts its basis linear systems against the same
    /// budget, since those dominate its work.
    pub max_selections: u64,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits { max_paths: 10_000, max_selections: 2_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance too large for oracle: commodity {commodity} exceeds {limit} simple paths")]
    TooManyPaths { commodity: u8, limit: usize },
    #[error("instance too large for oracle: {count} selections exceed the limit of {limit}")]
    TooManySelections { count: u128, limit: u64 },
    #[error("cut separates no commodity with demand")]
    DemandFreeCut,
    #[error("demands must be positive")]
    InvalidDemand,
}

/// All simple source-sink paths in lexicographic vertex order (parallel
/// edges break ties by edge id). Errors once more than `limit` paths exist.
pub fn enumerate_paths(
    graph: &Graph,
    source: VertexId,
    sink: VertexId,
    limit: usize,
) -> Result<Vec<Path>, OracleError> {
    assert!(limit >= 1);
    let mut adjacency: Vec<Vec<(VertexId, EdgeId)>> = vec![Vec::new(); graph.vertex_count() + 1];
    for (id, e) in graph.edges().iter().enumerate() {
        adjacency[e.a].push((e.b, id));
        adjacency[e.b].push((e.a, id));
    }
    for list in adjacency.iter_mut() {
        list.sort_unstable();
    }

    let mut paths = Vec::new();
    let mut on_path = vec![false; graph.vertex_count() + 1];
    let mut vertices = vec![source];
    let mut edges: Vec<EdgeId> = Vec::new();
    on_path[source] = true;

    fn dfs(
        v: VertexId,
        sink: VertexId,
        adjacency: &[Vec<(VertexId, EdgeId)>],
        on_path: &mut [bool],
        vertices: &mut Vec<VertexId>,
        edges: &mut Vec<EdgeId>,
        paths: &mut Vec<Path>,
        limit: usize,
    ) -> Result<(), OracleError> {
        if v == sink {
            if paths.len() == limit {
                return Err(OracleError::TooManyPaths { commodity: 0, limit });
            }
            paths.push(Path { vertices: vertices.clone(), edges: edges.clone() });
            return Ok(());
        }
        for &(next, edge) in &adjacency[v] {
            if on_path[next] {
                continue;
            }
            on_path[next] = true;
            vertices.push(next);
            edges.push(edge);
            let result = dfs(next, sink, adjacency, on_path, vertices, edges, paths, limit);
            on_path[next] = false;
            vertices.pop();
            edges.pop();
            result?;
        }
        Ok(())
    }

    dfs(source, sink, &adjacency, &mut on_path, &mut vertices, &mut edges, &mut paths, limit)?;
    Ok(paths)
}

/// Enumerates sorted index multisets of size `k` over `0..count`.
struct Multisets {
    indices: Vec<usize>,
    count: usize,
    started: bool,
    exhausted: bool,
}

impl Multisets {
    fn new(count: usize, k: usize) -> Multisets {
        Multisets { indices: vec![0; k], count, started: false, exhausted: count == 0 && k > 0 }
    }

    fn next(&mut self) -> Option<&[usize]> {
        if self.exhausted {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.indices);
        }
        for j in (0..self.indices.len()).rev() {
            if self.indices[j] + 1 < self.count {
                let v = self.indices[j] + 1;
                for slot in self.indices[j..].iter_mut() {
                    *slot = v;
                }
                return Some(&self.indices);
            }
        }
        self.exhausted = true;
        None
    }
}

/// C(paths + k - 1, k): number of size-k multisets.
fn multiset_count(paths: usize, k: usize) -> u128 {
    if k == 0 {
        return 1;
    }
    if paths == 0 {
        return 0;
    }
    let mut result: u128 = 1;
    for i in 0..k {
        result = result.saturating_mul((paths + i) as u128) / (i as u128 + 1);
    }
    result
}

/// C(n, k).
fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut result: u128 = 1;
    for i in 0..k {
        result = result.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    result
}

struct LoadTracker {
    loads: Vec<u64>,
    touched: Vec<EdgeId>,
}

impl LoadTracker {
    fn new(edge_count: usize) -> Self {
        LoadTracker { loads: vec![0; edge_count], touched: Vec::new() }
    }

    fn clear(&mut self) {
        for &e in &self.touched {
            self.loads[e] = 0;
        }
        self.touched.clear();
    }

    fn add_selection(&mut self, catalog: &[Path], selection: &[usize]) {
        for &p in selection {
            for &e in &catalog[p].edges {
                if self.loads[e] == 0 {
                    self.touched.push(e);
                }
                self.loads[e] += 1;
            }
        }
    }
}

fn catalog_for(
    inst: &Instance,
    commodity: usize,
    limits: &OracleLimits,
) -> Result<Vec<Path>, OracleError> {
    let c = &inst.commodities[commodity];
    if c.splits == 0 {
        return Ok(Vec::new());
    }
    enumerate_paths(&inst.graph, c.source, c.sink, limits.max_paths).map_err(|e| match e {
        OracleError::TooManyPaths { limit, .. } => {
            OracleError::TooManyPaths { commodity: commodity as u8 + 1, limit }
        }
        other => other,
    })
}

fn selection_flow(
    catalogs: [&[Path]; 2],
    selections: [&[usize]; 2],
    values: [Rational; 2],
    splits: (u32, u32),
    uniformity: Uniformity,
) -> SplittableFlow {
    let mut paths = Vec::new();
    for commodity in 0..2 {
        for &p in selections[commodity] {
            paths.push(PathFlow {
                commodity: commodity as u8 + 1,
                path: catalogs[commodity][p].clone(),
                value: values[commodity],
            });
        }
    }
    SplittableFlow { paths, splits, uniformity }
}

/// Shared driver: visits every selection pair and lets `evaluate` score the
/// combined edge loads; keeps the first selection attaining the best score.
fn best_over_selections<S: Clone + PartialOrd>(
    inst: &Instance,
    catalogs: [&[Path]; 2],
    limits: &OracleLimits,
    mut evaluate: impl FnMut(&LoadTracker, &[usize], &[usize]) -> S,
) -> Result<Option<(S, Vec<usize>, Vec<usize>)>, OracleError> {
    let (k1, k2) = inst.splits();
    let count = multiset_count(catalogs[0].len(), k1 as usize)
        .saturating_mul(multiset_count(catalogs[1].len(), k2 as usize));
    if count > limits.max_selections as u128 {
        return Err(OracleError::TooManySelections { count, limit: limits.max_selections });
    }
    let mut best: Option<(S, Vec<usize>, Vec<usize>)> = None;
    let mut tracker = LoadTracker::new(inst.graph.edge_count());
    let mut first = Multisets::new(catalogs[0].len(), k1 as usize);
    while let Some(sel1) = first.next() {
        let sel1 = sel1.to_vec();
        let mut second = Multisets::new(catalogs[1].len(), k2 as usize);
        while let Some(sel2) = second.next() {
            tracker.clear();
            tracker.add_selection(catalogs[0], &sel1);
            tracker.add_selection(catalogs[1], sel2);
            let score = evaluate(&tracker, &sel1, sel2);
            if best.as_ref().is_none_or(|(s, _, _)| score > *s) {
                best = Some((score, sel1.clone(), sel2.to_vec()));
            }
        }
    }
    Ok(best)
}

/// Bottleneck value for equal per-path loads: min over used edges of
/// capacity / load.
fn uniform_bottleneck(graph: &Graph, tracker: &LoadTracker) -> Rational {
    let mut value: Option<Rational> = None;
    for &e in &tracker.touched {
        let bound = ratio(graph.edges()[e].capacity, tracker.loads[e] as i64);
        value = Some(value.map_or(bound, |v: Rational| v.min(bound)));
    }
    value.unwrap_or_else(Rational::zero)
}

/// Exact maximum totally uniform splittable flow: the largest per-path value
/// x over all selections, returned with a maximizing flow (empty when 0).
pub fn exact_totally_uniform(
    inst: &Instance,
    limits: &OracleLimits,
) -> Result<(Rational, SplittableFlow), OracleError> {
    let (k1, k2) = inst.splits();
    let empty = SplittableFlow::empty((k1, k2), Uniformity::Total);
    let cat1 = catalog_for(inst, 0, limits)?;
    let cat2 = catalog_for(inst, 1, limits)?;
    if (k1 > 0 && cat1.is_empty()) || (k2 > 0 && cat2.is_empty()) || (k1 == 0 && k2 == 0) {
        return Ok((Rational::zero(), empty));
    }
    let graph = &inst.graph;
    let best = best_over_selections(inst, [&cat1, &cat2], limits, |tracker, _, _| {
        uniform_bottleneck(graph, tracker)
    })?;
    let (value, sel1, sel2) = best.expect("nonempty catalogs yield at least one selection");
    if value.is_zero() {
        return Ok((Rational::zero(), empty));
    }
    let flow = selection_flow(
        [&cat1, &cat2],
        [&sel1, &sel2],
        [value, value],
        (k1, k2),
        Uniformity::Total,
    );
    Ok((value, flow))
}

/// Maximizes x + y subject to `l1(e) x + l2(e) y <= u_e`, x, y >= 0, by
/// checking axis intercepts and all constraint-pair intersections.
/// `None` when a variable is entirely unconstrained.
fn max_sum_two_var(rows: &[(u64, u64, i64)]) -> Option<(Rational, Rational)> {
    if !rows.iter().any(|r| r.0 > 0) || !rows.iter().any(|r| r.1 > 0) {
        return None;
    }
    let feasible = |x: Rational, y: Rational| {
        rows.iter().all(|&(a, b, u)| {
            Rational::from_integer(a as i64) * x + Rational::from_integer(b as i64) * y
                <= Rational::from_integer(u)
        })
    };
    let mut candidates: Vec<(Rational, Rational)> = vec![(Rational::zero(), Rational::zero())];
    for &(a, b, u) in rows {
        if a > 0 {
            candidates.push((ratio(u, a as i64), Rational::zero()));
        }
        if b > 0 {
            candidates.push((Rational::zero(), ratio(u, b as i64)));
        }
    }
    let q = |v: i64| Rational::from_integer(v);
    for (i, &(a1, b1, u1)) in rows.iter().enumerate() {
        for &(a2, b2, u2) in rows.iter().skip(i + 1) {
            // Cramer's rule on the 2x2 system, in exact rationals.
            let det = q(a1 as i64) * q(b2 as i64) - q(a2 as i64) * q(b1 as i64);
            if det.is_zero() {
                continue;
            }
            let x = (q(u1) * q(b2 as i64) - q(u2) * q(b1 as i64)) / det;
            let y = (q(a1 as i64) * q(u2) - q(a2 as i64) * q(u1)) / det;
            if x >= Rational::zero() && y >= Rational::zero() {
                candidates.push((x, y));
            }
        }
    }
    let mut best: Option<(Rational, Rational)> = None;
    for (x, y) in candidates {
        if feasible(x, y)
            && best.as_ref().is_none_or(|(bx, by)| x + y > *bx + *by)
        {
            best = Some((x, y));
        }
    }
    best
}

/// Exact maximum bi-uniform splittable flow: per-commodity values (x, y)
/// maximizing x + y. A commodity with zero splits or no path drops out with
/// value 0.
pub fn exact_biuniform(
    inst: &Instance,
    limits: &OracleLimits,
) -> Result<(Rational, Rational, SplittableFlow), OracleError> {
    let (k1, k2) = inst.splits();
    let cat1 = catalog_for(inst, 0, limits)?;
    let cat2 = catalog_for(inst, 1, limits)?;
    let active1 = k1 > 0 && !cat1.is_empty();
    let active2 = k2 > 0 && !cat2.is_empty();
    let zero = Rational::zero();
    if !active1 && !active2 {
        return Ok((zero, zero, SplittableFlow::empty((k1, k2), Uniformity::Bi)));
    }

    // With one commodity absent the program degenerates to the uniform
    // single-commodity maximum.
    if active1 != active2 {
        let mut reduced = inst.clone();
        reduced.commodities[if active1 { 1 } else { 0 }].splits = 0;
        let (x, mut flow) = exact_totally_uniform(&reduced, limits)?;
        flow.splits = (k1, k2);
        flow.uniformity = Uniformity::Bi;
        return Ok(if active1 { (x, zero, flow) } else { (zero, x, flow) });
    }

    let graph = &inst.graph;
    let best = best_over_selections(inst, [&cat1, &cat2], limits, |tracker, sel1, _| {
        // Split the combined loads back per commodity for the LP rows.
        let mut rows: Vec<(u64, u64, i64)> = Vec::with_capacity(tracker.touched.len());
        let mut first_loads = vec![0u64; graph.edge_count()];
        for &p in sel1 {
            for &e in &cat1[p].edges {
                first_loads[e] += 1;
            }
        }
        for &e in &tracker.touched {
            let l1 = first_loads[e];
            let l2 = tracker.loads[e] - l1;
            rows.push((l1, l2, graph.edges()[e].capacity));
        }
        let (x, y) = max_sum_two_var(&rows).expect("both commodities constrained");
        (x + y, x, y)
    })?;
    let ((_, x, y), sel1, sel2) = best.expect("nonempty catalogs");
    if (x + y).is_zero() {
        return Ok((zero, zero, SplittableFlow::empty((k1, k2), Uniformity::Bi)));
    }
    let flow =
        selection_flow([&cat1, &cat2], [&sel1, &sel2], [x, y], (k1, k2), Uniformity::Bi);
    Ok((x, y, flow))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConcurrentMode {
    /// Independent per-path values.
    Free,
    /// One value per commodity.
    Bi,
    /// A single value across commodities.
    Total,
}

/// Exact maximal concurrent flow: the largest lambda such that lambda * d_i
/// of each commodity routes simultaneously, under the mode's uniformity.
pub fn exact_concurrent(
    inst: &Instance,
    d1: Rational,
    d2: Rational,
    mode: ConcurrentMode,
    limits: &OracleLimits,
) -> Result<(Rational, SplittableFlow), OracleError> {
    if d1 <= Rational::zero() || d2 <= Rational::zero() {
        return Err(OracleError::InvalidDemand);
    }
    let (k1, k2) = inst.splits();
    let uniformity = match mode {
        ConcurrentMode::Free => Uniformity::None,
        ConcurrentMode::Bi => Uniformity::Bi,
        ConcurrentMode::Total => Uniformity::Total,
    };
    let empty = SplittableFlow::empty((k1, k2), uniformity);
    let zero = Rational::zero();
    if k1 == 0 || k2 == 0 {
        return Ok((zero, empty));
    }
    let cat1 = catalog_for(inst, 0, limits)?;
    let cat2 = catalog_for(inst, 1, limits)?;
    if cat1.is_empty() || cat2.is_empty() {
        return Ok((zero, empty));
    }
    if mode == ConcurrentMode::Free {
        return concurrent_free(inst, d1, d2, &cat1, &cat2, limits);
    }

    let graph = &inst.graph;
    // Per-commodity weights: shipping one unit of lambda needs d_i / k_i per
    // path of commodity i.
    let w1 = d1 / Rational::from_integer(k1 as i64);
    let w2 = d2 / Rational::from_integer(k2 as i64);
    let lambda_scale = (Rational::from_integer(k1 as i64) / d1)
        .min(Rational::from_integer(k2 as i64) / d2);
    let best = best_over_selections(inst, [&cat1, &cat2], limits, |tracker, sel1, _| {
        match mode {
            ConcurrentMode::Total => {
                // One shared per-path value x: lambda = x * min(k_i / d_i).
                let x = uniform_bottleneck(graph, tracker);
                let lambda = x * lambda_scale;
                (lambda, x, x)
            }
            ConcurrentMode::Bi => {
                // Balanced optimum: x = lambda d1/k1, y = lambda d2/k2.
                let mut first_loads = vec![0u64; graph.edge_count()];
                for &p in sel1 {
                    for &e in &cat1[p].edges {
                        first_loads[e] += 1;
                    }
                }
                let mut lambda: Option<Rational> = None;
                for &e in &tracker.touched {
                    let l1 = first_loads[e];
                    let l2 = tracker.loads[e] - l1;
                    let weight = Rational::from_integer(l1 as i64) * w1
                        + Rational::from_integer(l2 as i64) * w2;
                    if weight.is_zero() {
                        continue;
                    }
                    let bound = Rational::from_integer(graph.edges()[e].capacity) / weight;
                    lambda = Some(lambda.map_or(bound, |v: Rational| v.min(bound)));
                }
                let lambda = lambda.unwrap_or(zero);
                (lambda, lambda * w1, lambda * w2)
            }
            ConcurrentMode::Free => unreachable!(),
        }
    })?;
    let ((lambda, x, y), sel1, sel2) = best.expect("nonempty catalogs");
    if lambda.is_zero() {
        return Ok((zero, empty));
    }
    let flow = selection_flow([&cat1, &cat2], [&sel1, &sel2], [x, y], (k1, k2), uniformity);
    Ok((lambda, flow))
}

/// Solves the square rational system `a x = b` by Gauss-Jordan elimination.
fn solve_linear(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col];
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col] / inv;
                for c in col..n {
                    let delta = a[col][c] * factor;
                    a[r][c] -= delta;
                }
                let delta = b[col] * factor;
                b[r] -= delta;
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

fn combinations(pool: usize, take: usize, mut visit: impl FnMut(&[usize])) {
    fn recurse(start: usize, pool: usize, left: usize, chosen: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
        if left == 0 {
            visit(chosen);
            return;
        }
        for i in start..=pool.saturating_sub(left) {
            chosen.push(i);
            recurse(i + 1, pool, left - 1, chosen, visit);
            chosen.pop();
        }
    }
    recurse(0, pool, take, &mut Vec::new(), &mut visit);
}

/// Unrestricted concurrent mode: enumerate path supports (subsets of up to
/// k_i paths) and solve each support's lambda LP exactly by enumerating
/// active constraint sets of the balanced program.
fn concurrent_free(
    inst: &Instance,
    d1: Rational,
    d2: Rational,
    cat1: &[Path],
    cat2: &[Path],
    limits: &OracleLimits,
) -> Result<(Rational, SplittableFlow), OracleError> {
    let (k1, k2) = inst.splits();
    let graph = &inst.graph;
    let support_count = |paths: usize, k: usize| -> u128 {
        (1..=k.min(paths)).map(|j| binomial(paths, j)).sum()
    };
    let count = support_count(cat1.len(), k1 as usize)
        .saturating_mul(support_count(cat2.len(), k2 as usize));
    if count > limits.max_selections as u128 {
        return Err(OracleError::TooManySelections { count, limit: limits.max_selections });
    }

    let mut supports1: Vec<Vec<usize>> = Vec::new();
    for take in 1..=(k1 as usize).min(cat1.len()) {
        combinations(cat1.len(), take, |c| supports1.push(c.to_vec()));
    }
    let mut supports2: Vec<Vec<usize>> = Vec::new();
    for take in 1..=(k2 as usize).min(cat2.len()) {
        combinations(cat2.len(), take, |c| supports2.push(c.to_vec()));
    }

    // The work per support pair is one linear system per active constraint
    // set, so budget those systems too before solving anything.
    let mut stamp = vec![usize::MAX; graph.edge_count()];
    let mut systems: u128 = 0;
    for (i, sup1) in supports1.iter().enumerate() {
        for (j, sup2) in supports2.iter().enumerate() {
            let pair = i * supports2.len() + j;
            let mut touched = 0usize;
            for &p in sup1.iter() {
                for &e in &cat1[p].edges {
                    if stamp[e] != pair {
                        stamp[e] = pair;
                        touched += 1;
                    }
                }
            }
            for &p in sup2.iter() {
                for &e in &cat2[p].edges {
                    if stamp[e] != pair {
                        stamp[e] = pair;
                        touched += 1;
                    }
                }
            }
            let vars = sup1.len() + sup2.len();
            systems = systems.saturating_add(binomial(touched + vars, vars - 1));
        }
    }
    if systems > limits.max_selections as u128 {
        return Err(OracleError::TooManySelections { count: systems, limit: limits.max_selections });
    }

    let mut best_lambda = Rational::zero();
    let mut best: Option<(Vec<usize>, Vec<usize>, Vec<Rational>)> = None;
    for sup1 in &supports1 {
        for sup2 in &supports2 {
            let vars = sup1.len() + sup2.len();
            // Capacity rows over touched edges: coefficient = 1 per use.
            let mut touched: Vec<EdgeId> = Vec::new();
            let mut coef: Vec<Vec<Rational>> = Vec::new();
            let mut rhs: Vec<Rational> = Vec::new();
            let mut edge_row = vec![usize::MAX; graph.edge_count()];
            let paths_of = |j: usize| -> &Path {
                if j < sup1.len() {
                    &cat1[sup1[j]]
                } else {
                    &cat2[sup2[j - sup1.len()]]
                }
            };
            for j in 0..vars {
                for &e in &paths_of(j).edges {
                    let row = if edge_row[e] == usize::MAX {
                        edge_row[e] = touched.len();
                        touched.push(e);
                        coef.push(vec![Rational::zero(); vars]);
                        rhs.push(Rational::from_integer(graph.edges()[e].capacity));
                        coef.len() - 1
                    } else {
                        edge_row[e]
                    };
                    coef[row][j] += Rational::from_integer(1);
                }
            }
            // Balance hyperplane: d2 * T1 - d1 * T2 = 0.
            let balance: Vec<Rational> = (0..vars)
                .map(|j| if j < sup1.len() { d2 } else { -d1 })
                .collect();

            // Constraint pool: capacity rows then nonnegativity rows.
            let pool = coef.len() + vars;
            let row_of = |i: usize, j: usize| -> Rational {
                if i < coef.len() {
                    coef[i][j]
                } else if i - coef.len() == j {
                    Rational::from_integer(1)
                } else {
                    Rational::zero()
                }
            };
            let rhs_of = |i: usize| -> Rational {
                if i < coef.len() {
                    rhs[i]
                } else {
                    Rational::zero()
                }
            };

            combinations(pool, vars - 1, |active| {
                let mut a: Vec<Vec<Rational>> = Vec::with_capacity(vars);
                let mut b: Vec<Rational> = Vec::with_capacity(vars);
                a.push(balance.clone());
                b.push(Rational::zero());
                for &i in active {
                    a.push((0..vars).map(|j| row_of(i, j)).collect());
                    b.push(rhs_of(i));
                }
                let Some(g) = solve_linear(a, b) else { return };
                if g.iter().any(|v| *v < Rational::zero()) {
                    return;
                }
                for (row, cap) in coef.iter().zip(&rhs) {
                    let used: Rational = row.iter().zip(&g).map(|(c, v)| *c * *v).sum();
                    if used > *cap {
                        return;
                    }
                }
                let total1: Rational = g.iter().take(sup1.len()).copied().sum();
                let lambda = total1 / d1;
                if lambda > best_lambda {
                    best_lambda = lambda;
                    best = Some((sup1.clone(), sup2.clone(), g));
                }
            });
        }
    }

    let Some((sup1, sup2, values)) = best else {
        return Ok((Rational::zero(), SplittableFlow::empty((k1, k2), Uniformity::None)));
    };
    // Pad each commodity back to exactly k_i paths with zero-value repeats.
    let mut paths = Vec::new();
    for (commodity, cat, sup, k) in
        [(1u8, cat1, &sup1, k1 as usize), (2u8, cat2, &sup2, k2 as usize)]
    {
        let offset = if commodity == 1 { 0 } else { sup1.len() };
        for (slot, &p) in sup.iter().enumerate() {
            paths.push(PathFlow {
                commodity,
                path: cat[p].clone(),
                value: values[offset + slot],
            });
        }
        for _ in sup.len()..k {
            paths.push(PathFlow { commodity, path: cat[sup[0]].clone(), value: Rational::zero() });
        }
    }
    let flow = SplittableFlow { paths, splits: (k1, k2), uniformity: Uniformity::None };
    Ok((best_lambda, flow))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutBoundMode {
    /// One item size across both commodities.
    TotallyUniform,
    /// Per-commodity item sizes x and y.
    BiUniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutBound {
    Finite(Rational),
    /// A separated-only-one-way cut leaves one value unconstrained.
    Unbounded,
}

/// Packing bound of a single cut: the best x (totally uniform) or x + y
/// (bi-uniform) that fits through the boundary under integer path counts.
pub fn cut_bound(
    inst: &Instance,
    members: &[VertexId],
    mode: CutBoundMode,
) -> Result<CutBound, OracleError> {
    let mask = inst.graph.member_mask(members);
    let boundary = inst.graph.boundary(&mask);
    let caps: Vec<i64> = boundary.iter().map(|&e| inst.graph.edges()[e].capacity).collect();
    match mode {
        CutBoundMode::TotallyUniform => {
            let demand = crossing_demand(inst, &mask);
            if demand == 0 {
                return Err(OracleError::DemandFreeCut);
            }
            Ok(CutBound::Finite(uniform_packing(&caps, demand).0))
        }
        CutBoundMode::BiUniform => {
            let [c1, c2] = &inst.commodities;
            let sep1 = mask[c1.source] != mask[c1.sink];
            let sep2 = mask[c2.source] != mask[c2.sink];
            if !sep1 && !sep2 {
                return Err(OracleError::DemandFreeCut);
            }
            let (k1, k2) = inst.splits();
            if !(sep1 && k1 > 0) || !(sep2 && k2 > 0) {
                return Ok(CutBound::Unbounded);
            }
            if boundary.is_empty() {
                return Ok(CutBound::Finite(Rational::zero()));
            }
            // Enumerate integer count assignments with each commodity's
            // counts summing exactly to its split count; smaller counts only
            // relax constraints, so the exact-sum optimum matches the >=
            // formulation.
            let bins = caps.len();
            let mut assignments1: Vec<Vec<u64>> = Vec::new();
            compositions(k1 as u64, bins, &mut |c| assignments1.push(c.to_vec()));
            let mut best: Option<Rational> = None;
            compositions(k2 as u64, bins, &mut |n2| {
                for n1 in &assignments1 {
                    let rows: Vec<(u64, u64, i64)> = (0..bins)
                        .map(|i| (n1[i], n2[i], caps[i]))
                        .collect();
                    if let Some((x, y)) = max_sum_two_var(&rows) {
                        let sum = x + y;
                        if best.as_ref().is_none_or(|b| sum > *b) {
                            best = Some(sum);
                        }
                    }
                }
            });
            Ok(CutBound::Finite(best.expect("positive split counts admit assignments")))
        }
    }
}

/// All ways to write `total` as an ordered sum of `bins` nonnegative parts.
fn compositions(total: u64, bins: usize, visit: &mut impl FnMut(&[u64])) {
    fn recurse(left: u64, bins: usize, current: &mut Vec<u64>, visit: &mut impl FnMut(&[u64])) {
        if bins == 1 {
            current.push(left);
            visit(current);
            current.pop();
            return;
        }
        for v in 0..=left {
            current.push(v);
            recurse(left - v, bins - 1, current, visit);
            current.pop();
        }
    }
    if bins == 0 {
        return;
    }
    recurse(total, bins, &mut Vec::new(), visit);
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Machine-checkable validation of a path-level flow against its instance:
/// path structure, counts, capacity feasibility and declared uniformity.
pub fn verify_flow(inst: &Instance, flow: &SplittableFlow) -> VerifyReport {
    let graph = &inst.graph;
    let mut checks = Vec::new();
    let mut push = |name: &'static str, passed: bool, detail: Option<String>| {
        checks.push(CheckResult { name, passed, detail });
    };

    let mut structure_ok = true;
    let mut endpoint_fail = None;
    let mut edge_fail = None;
    let mut simple_fail = None;
    for (idx, p) in flow.paths.iter().enumerate() {
        if p.commodity != 1 && p.commodity != 2 {
            endpoint_fail.get_or_insert(format!("path {idx}: unknown commodity {}", p.commodity));
            structure_ok = false;
            continue;
        }
        let c = &inst.commodities[(p.commodity - 1) as usize];
        if p.path.vertices.first() != Some(&c.source) || p.path.vertices.last() != Some(&c.sink) {
            endpoint_fail.get_or_insert(format!("path {idx}: endpoints are not the terminals"));
        }
        if p.path.vertices.len() != p.path.edges.len() + 1
            || p.path.edges.iter().enumerate().any(|(i, &e)| {
                graph.edges().get(e).is_none_or(|edge| {
                    let (a, b) = (p.path.vertices[i], p.path.vertices[i + 1]);
                    !((edge.a == a && edge.b == b) || (edge.a == b && edge.b == a))
                })
            })
        {
            edge_fail.get_or_insert(format!("invalid path {idx}: edges do not join its vertices"));
            structure_ok = false;
        }
        let mut seen = std::collections::BTreeSet::new();
        if !p.path.vertices.iter().all(|v| seen.insert(*v)) {
            simple_fail.get_or_insert(format!("path {idx}: repeats a vertex"));
        }
    }
    push("path-endpoints", endpoint_fail.is_none(), endpoint_fail);
    push("path-edges", edge_fail.is_none(), edge_fail);
    push("path-simple", simple_fail.is_none(), simple_fail);

    let (k1, k2) = flow.splits;
    let counts = (flow.path_count(1), flow.path_count(2));
    // A commodity may also be entirely absent (the zero-flow convention).
    let counts_ok = (counts.0 == k1 as usize || counts.0 == 0)
        && (counts.1 == k2 as usize || counts.1 == 0);
    push(
        "path-counts",
        counts_ok,
        (!counts_ok).then(|| {
            format!("found ({}, {}) paths, declared ({k1}, {k2})", counts.0, counts.1)
        }),
    );

    let negative = flow.paths.iter().any(|p| p.value < Rational::zero());
    push("value-sign", !negative, negative.then(|| "negative path value".to_string()));

    if structure_ok {
        let loads = flow.edge_loads(graph);
        let mut overload = None;
        for (e, (load, edge)) in loads.iter().zip(graph.edges()).enumerate() {
            if *load > Rational::from_integer(edge.capacity) {
                overload = Some(format!("capacity violated at edge {e}"));
                break;
            }
        }
        push("capacity", overload.is_none(), overload);
    } else {
        push("capacity", false, Some("skipped: invalid path structure".to_string()));
    }

    let uniformity_ok = match flow.uniformity {
        Uniformity::None => true,
        Uniformity::Bi => (1..=2).all(|c| {
            let mut values = flow.paths.iter().filter(|p| p.commodity == c).map(|p| p.value);
            match values.next() {
                Some(first) => values.all(|v| v == first),
                None => true,
            }
        }),
        Uniformity::Total => {
            let mut values = flow.paths.iter().map(|p| p.value);
            match values.next() {
                Some(first) => values.all(|v| v == first),
                None => true,
            }
        }
    };
    push(
        "uniformity",
        uniformity_ok,
        (!uniformity_ok).then(|| "declared uniformity violated".to_string()),
    );

    VerifyReport { checks }
}
