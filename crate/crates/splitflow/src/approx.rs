//! The solver pipelines: a totally uniform flow on doubled path counts worth
//! the full cut bound, the 1/2-approximation obtained by dropping half of
//! those paths, an exactness certificate for even split counts, and the
//! 1/4-approximation for concurrent flows at matched demand ratios.

use crate::biflow::{half_integral_biflow, DemandSpec};
use crate::cuts::{min_two_commodity_cut, CutValue, CutsError};
use crate::graph::{Graph, Instance};
use crate::maxflow::{decompose_paths, max_flow, Path};
use crate::rational::{ratio, Rational};
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Uniformity {
    /// No restriction on per-path values.
    None,
    /// Equal values within each commodity.
    Bi,
    /// Equal values across both commodities.
    Total,
}

/// One path of one commodity carrying a flow value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathFlow {
    /// 1 or 2.
    pub commodity: u8,
    pub path: Path,
    pub value: Rational,
}

/// Path-level two-commodity flow. The zero flow is represented with no
/// paths at all (no path may exist in a disconnected graph).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplittableFlow {
    pub paths: Vec<PathFlow>,
    /// Declared path counts (k1, k2).
    pub splits: (u32, u32),
    pub uniformity: Uniformity,
}

impl SplittableFlow {
    pub fn empty(splits: (u32, u32), uniformity: Uniformity) -> Self {
        SplittableFlow { paths: Vec::new(), splits, uniformity }
    }

    pub fn is_zero(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn total_value(&self) -> Rational {
        self.paths.iter().map(|p| p.value).sum()
    }

    pub fn commodity_total(&self, commodity: u8) -> Rational {
        self.paths.iter().filter(|p| p.commodity == commodity).map(|p| p.value).sum()
    }

    pub fn path_count(&self, commodity: u8) -> usize {
        self.paths.iter().filter(|p| p.commodity == commodity).count()
    }

    /// Total load per edge id.
    pub fn edge_loads(&self, graph: &Graph) -> Vec<Rational> {
        let mut loads = vec![Rational::zero(); graph.edge_count()];
        for p in &self.paths {
            for &e in &p.path.edges {
                loads[e] += p.value;
            }
        }
        loads
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ApproxError {
    #[error("both split counts are zero")]
    ZeroSplits,
    #[error("concurrent approximation needs both split counts positive")]
    PositiveSplitsRequired,
    #[error("split counts and capacities overflow the big-M construction")]
    InstanceTooLarge,
    #[error("scale factor must be positive")]
    NonPositiveScale,
    #[error("split counts must be even and positive, got k{commodity} = {splits}")]
    EvenSplitsRequired { commodity: u8, splits: u32 },
    #[error("demand ratio must equal k1/k2")]
    DemandRatioMismatch,
    #[error("demands must be positive")]
    NonPositiveDemand,
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl From<CutsError> for ApproxError {
    fn from(e: CutsError) -> Self {
        match e {
            CutsError::ZeroSplits => ApproxError::ZeroSplits,
            CutsError::InstanceTooLarge => ApproxError::InstanceTooLarge,
        }
    }
}

/// Same topology with capacities `floor(u_e / x)`.
pub fn scaled_graph(graph: &Graph, x: Rational) -> Result<Graph, ApproxError> {
    if x <= Rational::zero() {
        return Err(ApproxError::NonPositiveScale);
    }
    Ok(graph.floor_scaled(x))
}

/// Totally uniform flow on doubled path counts achieving the full cut bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubledUniformFlow {
    /// The two-commodity minimum cut, whose value x prices the paths.
    pub cut: CutValue,
    /// x/2; every path carries this value.
    pub per_path: Rational,
    /// Exactly (2k1, 2k2) paths, or the empty zero flow when x = 0.
    pub flow: SplittableFlow,
}

fn doubled_integral(values: &[Rational], what: &str) -> Result<Vec<i64>, ApproxError> {
    values
        .iter()
        .map(|f| {
            let doubled = f * ratio(2, 1);
            if doubled.is_integer() {
                Ok(doubled.to_integer())
            } else {
                Err(ApproxError::Internal(format!("{what} is not half-integral: {f}")))
            }
        })
        .collect()
}

/// Builds a totally uniform flow with 2k1 + 2k2 paths and total value
/// `(k1 + k2) * x` where x is the two-commodity minimum cut value: the graph
/// is floor-scaled by x, a half-integral flow for demands (k1, k2) is
/// doubled into an integral one, and its path decomposition is priced at x/2
/// per path. Feasible on the original capacities.
pub fn doubled_uniform_flow(inst: &Instance) -> Result<DoubledUniformFlow, ApproxError> {
    let cut = min_two_commodity_cut(inst)?;
    let (k1, k2) = inst.splits();
    let doubled_splits = (2 * k1, 2 * k2);
    if cut.value.is_zero() {
        return Ok(DoubledUniformFlow {
            cut,
            per_path: Rational::zero(),
            flow: SplittableFlow::empty(doubled_splits, Uniformity::Total),
        });
    }
    let scaled = inst.graph.floor_scaled(cut.value);
    let [c1, c2] = &inst.commodities;
    let first = DemandSpec { source: c1.source, sink: c1.sink, amount: k1 as i64 };
    let second = DemandSpec { source: c2.source, sink: c2.sink, amount: k2 as i64 };
    let biflow = half_integral_biflow(&scaled, first, second).map_err(|cut| {
        ApproxError::Internal(format!(
            "scaled graph violates the cut condition at {:?} ({} < {})",
            cut.members, cut.capacity, cut.required
        ))
    })?;

    let per_path = cut.value / ratio(2, 1);
    let mut paths = Vec::with_capacity(2 * (k1 as usize + k2 as usize));
    for (commodity, values, spec) in
        [(1u8, &biflow.first, first), (2u8, &biflow.second, second)]
    {
        let doubled = doubled_integral(values, "commodity flow")?;
        let decomposition =
            decompose_paths(&inst.graph, &doubled, spec.source, spec.sink, 2 * spec.amount)
                .map_err(|e| ApproxError::Internal(e.to_string()))?;
        debug_assert_eq!(decomposition.paths.len() as i64, 2 * spec.amount);
        paths.extend(
            decomposition
                .paths
                .into_iter()
                .map(|path| PathFlow { commodity, path, value: per_path }),
        );
    }
    Ok(DoubledUniformFlow {
        cut,
        per_path,
        flow: SplittableFlow { paths, splits: doubled_splits, uniformity: Uniformity::Total },
    })
}

/// 1/2-approximation of the maximum totally uniform flow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformHalfApprox {
    pub cut: CutValue,
    pub per_path: Rational,
    pub flow: SplittableFlow,
    /// `(k1 + k2) * cut.value`, an upper bound on any totally uniform flow.
    pub upper_bound: Rational,
}

/// Keeps the first k1 and k2 paths of the doubled construction, which halves
/// the total but stays within a factor 1/2 of the optimum. When one split
/// count is zero the problem collapses to one commodity where the cut bound
/// is met exactly.
pub fn uniform_half_approx(inst: &Instance) -> Result<UniformHalfApprox, ApproxError> {
    let (k1, k2) = inst.splits();
    if k1 == 0 && k2 == 0 {
        return Err(ApproxError::ZeroSplits);
    }
    let splits_total = Rational::from_integer(k1 as i64 + k2 as i64);
    if k1 == 0 || k2 == 0 {
        return single_commodity_exact(inst);
    }
    let doubled = doubled_uniform_flow(inst)?;
    let upper_bound = splits_total * doubled.cut.value;
    if doubled.flow.is_zero() {
        return Ok(UniformHalfApprox {
            cut: doubled.cut,
            per_path: Rational::zero(),
            flow: SplittableFlow::empty((k1, k2), Uniformity::Total),
            upper_bound,
        });
    }
    let mut kept = Vec::with_capacity(k1 as usize + k2 as usize);
    let mut quota = [k1 as usize, k2 as usize];
    for path in doubled.flow.paths {
        let slot = (path.commodity - 1) as usize;
        if quota[slot] > 0 {
            quota[slot] -= 1;
            kept.push(path);
        }
    }
    Ok(UniformHalfApprox {
        cut: doubled.cut,
        per_path: doubled.per_path,
        flow: SplittableFlow { paths: kept, splits: (k1, k2), uniformity: Uniformity::Total },
        upper_bound,
    })
}

/// One commodity is absent: route the other on k paths each worth the full
/// cut value, which is optimal for a single commodity.
fn single_commodity_exact(inst: &Instance) -> Result<UniformHalfApprox, ApproxError> {
    let (k1, k2) = inst.splits();
    let active = if k1 > 0 { 0 } else { 1 };
    let k = inst.commodities[active].splits;
    let commodity_label = active as u8 + 1;
    let cut = min_two_commodity_cut(inst)?;
    let upper_bound = Rational::from_integer(k as i64) * cut.value;
    if cut.value.is_zero() {
        return Ok(UniformHalfApprox {
            cut,
            per_path: Rational::zero(),
            flow: SplittableFlow::empty((k1, k2), Uniformity::Total),
            upper_bound,
        });
    }
    let scaled = inst.graph.floor_scaled(cut.value);
    let (source, sink) = (inst.commodities[active].source, inst.commodities[active].sink);
    let (value, flow) = max_flow(&scaled, source, sink);
    if (value as u64) < k as u64 {
        return Err(ApproxError::Internal(format!(
            "scaled max-flow {value} below split count {k}"
        )));
    }
    let decomposition = decompose_paths(&inst.graph, &flow, source, sink, value)
        .map_err(|e| ApproxError::Internal(e.to_string()))?;
    let paths = decomposition
        .paths
        .into_iter()
        .take(k as usize)
        .map(|path| PathFlow { commodity: commodity_label, path, value: cut.value })
        .collect();
    Ok(UniformHalfApprox {
        cut: cut.clone(),
        per_path: cut.value,
        flow: SplittableFlow { paths, splits: (k1, k2), uniformity: Uniformity::Total },
        upper_bound,
    })
}

/// Outcome of the even-split exactness test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvenSplitCertificate {
    /// Whether doubling the halved cut value reproduces the full one; only
    /// then is the construction provably optimal.
    pub applicable: bool,
    /// Cut value at the declared split counts.
    pub full_cut: CutValue,
    /// Cut value at the halved split counts.
    pub halved_cut: CutValue,
    /// Present iff applicable: an exact optimal totally uniform flow.
    pub flow: Option<SplittableFlow>,
    pub per_path: Option<Rational>,
}

/// For even split counts, tests whether the halved instance's doubled
/// construction is exactly optimal, and returns that flow if so.
pub fn even_split_exact(inst: &Instance) -> Result<EvenSplitCertificate, ApproxError> {
    let (k1, k2) = inst.splits();
    for (label, k) in [(1u8, k1), (2u8, k2)] {
        if k == 0 || k % 2 != 0 {
            return Err(ApproxError::EvenSplitsRequired { commodity: label, splits: k });
        }
    }
    let full_cut = min_two_commodity_cut(inst)?;
    let halved_inst = inst.with_halved_splits();
    let halved_cut = min_two_commodity_cut(&halved_inst)?;
    let applicable = full_cut.value * ratio(2, 1) == halved_cut.value;
    if !applicable {
        return Ok(EvenSplitCertificate { applicable, full_cut, halved_cut, flow: None, per_path: None });
    }
    let doubled = doubled_uniform_flow(&halved_inst)?;
    debug_assert_eq!(doubled.flow.splits, (k1, k2));
    Ok(EvenSplitCertificate {
        applicable,
        full_cut,
        halved_cut,
        per_path: Some(doubled.per_path),
        flow: Some(doubled.flow),
    })
}

/// 1/4-approximation of the maximal concurrent flow at matched demand ratio.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcurrentApprox {
    /// Fraction of both demands that is routed: `lambda * d_i` equals the
    /// total flow of commodity i.
    pub lambda: Rational,
    pub demands: (Rational, Rational),
    pub per_path: Rational,
    pub flow: SplittableFlow,
    pub cut: CutValue,
}

/// Converts the totally uniform 1/2-approximation into a concurrent flow.
/// Demands must satisfy `d1 * k2 == d2 * k1`, under which a bi-uniform
/// concurrent optimum is totally uniform and the result is within a factor
/// 1/4 of the unrestricted concurrent optimum.
pub fn concurrent_quarter(
    inst: &Instance,
    d1: Rational,
    d2: Rational,
) -> Result<ConcurrentApprox, ApproxError> {
    let (k1, k2) = inst.splits();
    if k1 == 0 || k2 == 0 {
        return Err(ApproxError::PositiveSplitsRequired);
    }
    if d1 <= Rational::zero() || d2 <= Rational::zero() {
        return Err(ApproxError::NonPositiveDemand);
    }
    if d1 * Rational::from_integer(k2 as i64) != d2 * Rational::from_integer(k1 as i64) {
        return Err(ApproxError::DemandRatioMismatch);
    }
    let half = uniform_half_approx(inst)?;
    let lambda = Rational::from_integer(k1 as i64) * half.per_path / d1;
    debug_assert_eq!(lambda, Rational::from_integer(k2 as i64) * half.per_path / d2);
    Ok(ConcurrentApprox {
        lambda,
        demands: (d1, d2),
        per_path: half.per_path,
        flow: half.flow,
        cut: half.cut,
    })
}
