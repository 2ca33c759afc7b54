//! Adversarial elections with known winners and closed-form distortion.
//!
//! The lower-bound families share one alternative layout: `j_0 .. j_{m-3}`
//! are the indices `0..m-2`, the intended (bad) winner `a` is `m-2` and the
//! welfare-optimal `b` is `m-1`. Voters are numbered district by district,
//! so every emitted partition is contiguous.

use serde::Serialize;

use crate::bounds::{ordinal_lower_bound, pv_bound, rv_bound, BoundQuery};
use crate::engine::{run_and_measure, DistortionReport, DistrictElection, ElectionOutcome};
use crate::error::{Error, Result};
use crate::model::{
    AlternativeId, DistrictPartition, ElectionClass, TieBreakOrder, ValuationProfile, WeightVector,
    UNIT_SUM_TOLERANCE,
};
use crate::rules::VotingRuleSpec;

pub const DEFAULT_EPSILON: f64 = 1e-6;

/// Which family an instance belongs to. The tags double as CLI names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    T2,
    T3,
    T4,
    T5,
    T6,
    T7,
    T9,
}

impl Family {
    pub fn tag(self) -> &'static str {
        match self {
            Family::T2 => "t2",
            Family::T3 => "t3",
            Family::T4 => "t4",
            Family::T5 => "t5",
            Family::T6 => "t6",
            Family::T7 => "t7",
            Family::T9 => "t9",
        }
    }
}

/// How the ties the constructions rely on are realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieRealization {
    /// Valuations exactly as constructed; the emitted order resolves ties.
    #[default]
    ExactTies,
    /// Voter-level ties are broken by a perturbation of size `epsilon / 10`.
    Perturbed,
}

/// An election together with what it is supposed to demonstrate.
#[derive(Debug, Clone)]
pub struct GeneratedInstance {
    pub family: Family,
    pub class: ElectionClass,
    pub profile: ValuationProfile,
    pub partition: DistrictPartition,
    pub weights: WeightVector,
    pub rule: VotingRuleSpec,
    pub tiebreak: TieBreakOrder,
    pub epsilon: Option<f64>,
    pub ties: TieRealization,
    pub expected_winner: AlternativeId,
    pub optimal_alt: AlternativeId,
    /// Distortion of the construction as `epsilon -> 0`.
    pub limit_distortion: f64,
    /// Value of the matching closed-form bound, where there is one.
    pub bound: Option<f64>,
    /// Set when the construction is a reconstruction of an incompletely
    /// specified gadget.
    pub best_effort: bool,
}

impl GeneratedInstance {
    pub fn election(&self) -> DistrictElection<'_> {
        DistrictElection {
            profile: &self.profile,
            partition: &self.partition,
            weights: &self.weights,
            rule: &self.rule,
            tiebreak: &self.tiebreak,
        }
    }

    pub fn measure(&self) -> Result<(ElectionOutcome, DistortionReport)> {
        run_and_measure(&self.election())
    }
}

/// Parameters shared by the three lower-bound families.
#[derive(Debug, Clone)]
pub struct LowerBoundParams {
    pub class: ElectionClass,
    pub m: usize,
    pub sizes: Vec<usize>,
    pub epsilon: f64,
    pub ties: TieRealization,
    /// Local rule; defaults to RV for `t2` and plurality otherwise.
    pub rule: Option<VotingRuleSpec>,
}

impl LowerBoundParams {
    pub fn new(class: ElectionClass, m: usize, sizes: Vec<usize>) -> Self {
        LowerBoundParams { class, m, sizes, epsilon: DEFAULT_EPSILON, ties: TieRealization::ExactTies, rule: None }
    }

    pub fn epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn ties(mut self, ties: TieRealization) -> Self {
        self.ties = ties;
        self
    }

    pub fn rule(mut self, rule: VotingRuleSpec) -> Self {
        self.rule = Some(rule);
        self
    }
}

/// Roles of the districts in a lower-bound construction.
struct Layout {
    /// The district `a` wins (smallest; dominant weight when unrestricted).
    d1: usize,
    /// Districts split between some `c` and `b`.
    split: Vec<usize>,
    weights: WeightVector,
}

fn layout(p: &LowerBoundParams) -> Result<Layout> {
    let k = p.sizes.len();
    if p.m < 2 {
        return Err(Error::domain(format!("need m >= 2, got {}", p.m)));
    }
    if k == 0 || p.sizes.contains(&0) {
        return Err(Error::domain(format!("district sizes must be positive, got {:?}", p.sizes)));
    }
    if !(p.epsilon > 0.0 && p.epsilon < 1.0 / p.m as f64) {
        return Err(Error::domain(format!("epsilon must lie in (0, 1/m), got {}", p.epsilon)));
    }
    let d1 = (0..k).min_by_key(|&d| (p.sizes[d], d)).expect("k >= 1");
    match p.class {
        ElectionClass::Unrestricted => {
            let mut w = vec![1.0; k];
            w[d1] = k as f64;
            Ok(Layout { d1, split: Vec::new(), weights: WeightVector::new(w)? })
        }
        ElectionClass::Symmetric | ElectionClass::Unweighted => {
            if p.class == ElectionClass::Symmetric && p.sizes.iter().any(|&s| s != p.sizes[0]) {
                return Err(Error::domain(format!("symmetric class needs equal sizes, got {:?}", p.sizes)));
            }
            if k < 2 {
                return Err(Error::domain("construction needs at least two districts"));
            }
            if p.m <= k {
                return Err(Error::domain(format!("construction needs m > k, got m = {}, k = {k}", p.m)));
            }
            // The largest remaining district is the pure `b` district.
            let d2 = (0..k)
                .filter(|&d| d != d1)
                .max_by_key(|&d| (p.sizes[d], std::cmp::Reverse(d)))
                .expect("k >= 2");
            let split = (0..k).filter(|&d| d != d1 && d != d2).collect();
            Ok(Layout { d1, split, weights: WeightVector::uniform(k) })
        }
    }
}

/// `[a, j_0, .., j_{m-3}, b]`
fn layout_order(m: usize) -> Vec<usize> {
    let mut order = vec![m - 2];
    order.extend(0..m - 2);
    order.push(m - 1);
    order
}

fn unit(m: usize, j: usize) -> Vec<f64> {
    let mut row = vec![0.0; m];
    row[j] = 1.0;
    row
}

fn pair(m: usize, hi: usize, lo: usize, hi_value: f64) -> Vec<f64> {
    let mut row = vec![0.0; m];
    row[hi] = hi_value;
    row[lo] = 1.0 - hi_value;
    row
}

/// `1/m + bump` on `j`, the rest shared equally.
fn tilted(m: usize, j: usize, bump: f64) -> Vec<f64> {
    let rest = 1.0 / m as f64 - bump / (m - 1) as f64;
    let mut row = vec![rest; m];
    row[j] = 1.0 / m as f64 + bump;
    row
}

/// Flattens per-district rows into a profile over a contiguous partition.
fn assemble(groups: Vec<Vec<Vec<f64>>>) -> Result<(ValuationProfile, DistrictPartition)> {
    let sizes: Vec<usize> = groups.iter().map(Vec::len).collect();
    let rows: Vec<Vec<f64>> = groups.into_iter().flatten().collect();
    if let Some((i, _)) = rows.iter().enumerate().find(|(_, r)| r.iter().any(|&x| x < 0.0)) {
        return Err(Error::domain(format!("epsilon too large: voter {i} would get a negative value")));
    }
    Ok((ValuationProfile::new(rows)?, DistrictPartition::contiguous(&sizes)?))
}

fn district_rows(
    p: &LowerBoundParams,
    lay: &Layout,
    d1_rows: impl Fn(usize) -> Vec<Vec<f64>>,
    split_rows: impl Fn(usize, usize) -> Vec<Vec<f64>>,
) -> Vec<Vec<Vec<f64>>> {
    let b = p.m - 1;
    let mut groups: Vec<Vec<Vec<f64>>> = p.sizes.iter().map(|&s| vec![unit(p.m, b); s]).collect();
    groups[lay.d1] = d1_rows(p.sizes[lay.d1]);
    for (l, &d) in lay.split.iter().enumerate() {
        // `c` for the l-th split district is j_l.
        groups[d] = split_rows(l, p.sizes[d]);
    }
    groups
}

fn finish(
    family: Family,
    p: &LowerBoundParams,
    lay: Layout,
    groups: Vec<Vec<Vec<f64>>>,
    rule: VotingRuleSpec,
    limit_distortion: f64,
    bound: f64,
) -> Result<GeneratedInstance> {
    let (profile, partition) = assemble(groups)?;
    Ok(GeneratedInstance {
        family,
        class: p.class,
        profile,
        partition,
        weights: lay.weights,
        rule,
        tiebreak: TieBreakOrder::fixed(layout_order(p.m))?,
        epsilon: Some(p.epsilon),
        ties: p.ties,
        expected_winner: AlternativeId(p.m - 2),
        optimal_alt: AlternativeId(p.m - 1),
        limit_distortion,
        bound: Some(bound),
        best_effort: false,
    })
}

/// Lower-bound witness for RV (and any rule that agrees with RV on the
/// districts used). `a` is barely preferred in the smallest district, `b` is
/// everybody's favourite in the largest, and every other district is split
/// evenly between a fresh `c` and `b` with `c` barely ahead. Under the
/// unrestricted class the smallest district carries weight `k`.
///
/// The instance only has strict preferences, so `ties` is ignored.
pub fn gen_t2(p: &LowerBoundParams) -> Result<GeneratedInstance> {
    let lay = layout(p)?;
    let (m, eps, a, b) = (p.m, p.epsilon, p.m - 2, p.m - 1);
    let groups = district_rows(p, &lay, |s| vec![tilted(m, a, eps); s], |l, s| vec![pair(m, l, b, 0.5 + eps); s]);
    let q = BoundQuery::from_sizes(p.class, m as u64, &p.sizes)?;
    let limit = rv_bound(&q);
    let rule = p.rule.clone().unwrap_or(VotingRuleSpec::RangeVoting);
    finish(Family::T2, p, lay, groups, rule, limit, limit)
}

/// Rows of the smallest district for the plurality construction: `m` equal
/// blocks, block `i < m-2` approving `j_i` (and giving `b` the other half),
/// block `m-2` indifferent with `a` on top, block `m-1` approving `b`.
fn plurality_d1(m: usize, size: usize, delta: f64) -> Vec<Vec<f64>> {
    let (a, b) = (m - 2, m - 1);
    let block = size / m;
    let mut rows = Vec::with_capacity(size);
    for i in 0..m {
        let row = match i {
            i if i == a => tilted(m, a, delta),
            i if i == b => unit(m, b),
            i => pair(m, i, b, 0.5 + delta),
        };
        rows.extend(std::iter::repeat(row).take(block));
    }
    rows
}

/// Lower-bound witness for plurality. Every block of the smallest district
/// has the same plurality count, so `a` wins it only through the tie order;
/// split districts tie `c` with `b` and the order favours `c`. In exact mode
/// the measured distortion equals the limit.
pub fn gen_t3(p: &LowerBoundParams) -> Result<GeneratedInstance> {
    let lay = layout(p)?;
    let m = p.m;
    check_multiple(p.sizes[lay.d1], m, "the smallest district")?;
    for &d in &lay.split {
        check_multiple(p.sizes[d], 2, "split districts")?;
    }
    let delta = perturbation(p);
    let groups = district_rows(p, &lay, |s| plurality_d1(m, s, delta), |l, s| half_split(m, l, s, delta, 0.0));
    let q = BoundQuery::from_sizes(p.class, m as u64, &p.sizes)?;
    let limit = pv_bound(&q);
    let rule = match &p.rule {
        Some(r) => r.clone(),
        None => VotingRuleSpec::plurality(m)?,
    };
    finish(Family::T3, p, lay, groups, rule, limit, limit)
}

/// First half ranks `c ≻ b` (values one half each, `c` ahead by `delta`),
/// second half ranks `b ≻ c` with `c` getting `tail`.
fn half_split(m: usize, c: usize, size: usize, delta: f64, tail: f64) -> Vec<Vec<f64>> {
    let b = m - 1;
    let mut rows = vec![pair(m, c, b, 0.5 + delta); size / 2];
    let second = if tail > 0.0 { pair(m, b, c, 1.0 - tail) } else { unit(m, b) };
    rows.extend(std::iter::repeat(second).take(size / 2));
    rows
}

/// Rows of the smallest district for the ordinal construction: block `i`
/// ranks `j_i ≻ j_{i+1} ≻ .. ≻ j_{i-1}` cyclically. Exact mode puts all mass
/// on the top (block `m-2` is indifferent); perturbed mode realizes the
/// full cyclic rankings with steps of `delta`.
fn cyclic_d1(m: usize, size: usize, delta: f64) -> Vec<Vec<f64>> {
    let a = m - 2;
    let block = size / m;
    let mut rows = Vec::with_capacity(size);
    for i in 0..m {
        let mut row = vec![0.0; m];
        if i == a {
            for t in 0..m {
                row[(i + t) % m] = 1.0 / m as f64 + delta * ((m - 1) as f64 / 2.0 - t as f64);
            }
        } else {
            let mut rest = 0.0;
            for t in 1..m {
                let v = delta * (m - 1 - t) as f64;
                row[(i + t) % m] = v;
                rest += v;
            }
            row[i] = 1.0 - rest;
        }
        rows.extend(std::iter::repeat(row).take(block));
    }
    rows
}

/// Lower-bound witness for ordinal rules: a cyclic smallest district that
/// every positional rule leaves fully tied, `b`-only districts, and split
/// districts tied between `c` and `b`.
///
/// The limit reported is the exact ratio of the construction, which exceeds
/// the closed-form bound (stored in `bound`) by `m`. Exact mode only
/// realizes the rankings' top positions, so it is restricted to plurality.
pub fn gen_t4(p: &LowerBoundParams) -> Result<GeneratedInstance> {
    let lay = layout(p)?;
    let m = p.m;
    check_multiple(p.sizes[lay.d1], m, "the smallest district")?;
    for &d in &lay.split {
        check_multiple(p.sizes[d], 2, "split districts")?;
    }
    let rule = match &p.rule {
        Some(r) => r.clone(),
        None => VotingRuleSpec::plurality(m)?,
    };
    match &rule {
        VotingRuleSpec::RangeVoting => return Err(Error::domain("t4 needs an ordinal rule")),
        VotingRuleSpec::Positional(s) => {
            if s.len() != m {
                return Err(Error::domain(format!("score vector has length {}, need {m}", s.len())));
            }
            let plurality = s[1..].iter().all(|&x| x == 0.0);
            if p.ties == TieRealization::ExactTies && !plurality {
                return Err(Error::domain("exact-tie t4 instances are only valid for plurality; use perturbed ties"));
            }
        }
    }
    let delta = perturbation(p);
    let groups = district_rows(p, &lay, |s| cyclic_d1(m, s, delta), |l, s| half_split(m, l, s, delta, delta));
    let q = BoundQuery::from_sizes(p.class, m as u64, &p.sizes)?;
    let bound = ordinal_lower_bound(&q);
    finish(Family::T4, p, lay, groups, rule, bound + m as f64, bound)
}

fn perturbation(p: &LowerBoundParams) -> f64 {
    match p.ties {
        TieRealization::ExactTies => 0.0,
        TieRealization::Perturbed => p.epsilon / 10.0,
    }
}

fn check_multiple(size: usize, of: usize, what: &str) -> Result<()> {
    if size % of != 0 {
        return Err(Error::domain(format!("size of {what} ({size}) must be a multiple of {of}")));
    }
    Ok(())
}

/// Instance on which the welfare-optimal alternative `b` (index `q`) cannot
/// win a single district of size `n/k` under RV, whatever the districting.
///
/// Alternatives `a_0..a_{q-1}` each have a block of like-minded voters: three
/// per block for `k = 2` (`n = 3q`), `k-1` per block otherwise
/// (`n = (k-1)q`). The emitted partition is contiguous.
pub fn gen_t5(k: usize, q: usize, epsilon: f64) -> Result<GeneratedInstance> {
    if k < 2 || q < 2 {
        return Err(Error::domain(format!("need k >= 2 and q >= 2, got k = {k}, q = {q}")));
    }
    let block = if k == 2 { 3 } else { k - 1 };
    let n = block * q;
    if n % k != 0 {
        return Err(Error::domain(format!("n = {n} is not divisible by k = {k}")));
    }
    let nf = n as f64;
    let (top, cap) = if k == 2 {
        (nf / (nf + 3.0), nf / ((nf + 3.0) * (nf + 4.0)))
    } else {
        let kf = k as f64;
        (nf / (nf + kf), nf / ((nf + kf) * (nf + kf - 1.0)))
    };
    if !(epsilon > 0.0 && epsilon < cap) {
        return Err(Error::domain(format!("epsilon must lie in (0, {cap}), got {epsilon}")));
    }
    // k = 2 lowers a_i by epsilon, k >= 3 raises it.
    let a_value = if k == 2 { top - epsilon } else { top + epsilon };
    let m = q + 1;
    let mut rows = Vec::with_capacity(n);
    for i in 0..q {
        let mut row = vec![0.0; m];
        row[i] = a_value;
        row[q] = 1.0 - a_value;
        rows.extend(std::iter::repeat(row).take(block));
    }
    let size = n / k;
    let partition = DistrictPartition::contiguous(&vec![size; k])?;
    // Within a district every a_i beats b; among the a_i the larger block wins.
    let mut wins = vec![0usize; m];
    for d in 0..k {
        let mut counts = vec![0usize; q];
        for voter in d * size..(d + 1) * size {
            counts[voter / block] += 1;
        }
        let best = (0..q).max_by_key(|&i| (counts[i], std::cmp::Reverse(i))).expect("q >= 2");
        wins[best] += 1;
    }
    let expected = (0..m).max_by_key(|&j| (wins[j], std::cmp::Reverse(j))).expect("m >= 3");
    let limit = if k == 2 { 1.0 } else { k as f64 / (k - 1) as f64 };
    Ok(GeneratedInstance {
        family: Family::T5,
        class: ElectionClass::Symmetric,
        profile: ValuationProfile::new(rows)?,
        partition,
        weights: WeightVector::uniform(k),
        rule: VotingRuleSpec::RangeVoting,
        tiebreak: TieBreakOrder::identity(m),
        epsilon: Some(epsilon),
        ties: TieRealization::ExactTies,
        expected_winner: AlternativeId(expected),
        optimal_alt: AlternativeId(q),
        limit_distortion: limit,
        bound: None,
        best_effort: false,
    })
}

/// `m` voters in singleton districts. Voter 0 is indifferent, voter `m-1`
/// only values `y = m-1`, and every other voter `i` splits evenly between
/// `a_i` and `y`. Under the adversarial tie-break each district elects the
/// least-welfare alternative its voter approves, and the election picks
/// `x = 0`.
pub fn gen_t9(m: usize) -> Result<GeneratedInstance> {
    if m < 2 {
        return Err(Error::domain(format!("need m >= 2, got {m}")));
    }
    let y = m - 1;
    let rows = (0..m)
        .map(|i| match i {
            0 => vec![1.0 / m as f64; m],
            i if i == y => unit(m, y),
            i => pair(m, i, y, 0.5),
        })
        .collect();
    let mf = m as f64;
    Ok(GeneratedInstance {
        family: Family::T9,
        class: ElectionClass::Symmetric,
        profile: ValuationProfile::new(rows)?,
        partition: DistrictPartition::contiguous(&vec![1; m])?,
        weights: WeightVector::uniform(m),
        rule: VotingRuleSpec::plurality(m)?,
        tiebreak: TieBreakOrder::adversarial((0..m).collect())?,
        epsilon: None,
        ties: TieRealization::ExactTies,
        expected_winner: AlternativeId(0),
        optimal_alt: AlternativeId(y),
        limit_distortion: 1.0 + mf * mf / 2.0,
        bound: Some(1.0 + mf * mf / 2.0),
        best_effort: false,
    })
}

/// `q` positive numbers summing to one, each below one half, `q` even.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CPartitionInstance {
    numbers: Vec<f64>,
}

impl CPartitionInstance {
    pub fn new(numbers: Vec<f64>) -> Result<Self> {
        let q = numbers.len();
        if q < 2 || q % 2 != 0 {
            return Err(Error::domain(format!("need an even number of numbers, got {q}")));
        }
        if numbers.iter().any(|&x| !(x > 0.0 && x < 0.5)) {
            return Err(Error::domain(format!("numbers must lie in (0, 1/2), got {numbers:?}")));
        }
        let sum: f64 = numbers.iter().sum();
        if (sum - 1.0).abs() > UNIT_SUM_TOLERANCE {
            return Err(Error::domain(format!("numbers must sum to 1, got {sum}")));
        }
        Ok(CPartitionInstance { numbers })
    }

    /// Normalizes positive integers by their total.
    pub fn from_integers(values: &[u64]) -> Result<Self> {
        let total: u64 = values.iter().sum();
        if total == 0 {
            return Err(Error::domain("integers must not all be zero"));
        }
        Self::new(values.iter().map(|&v| v as f64 / total as f64).collect())
    }

    pub fn numbers(&self) -> &[f64] {
        &self.numbers
    }

    pub fn q(&self) -> usize {
        self.numbers.len()
    }

    /// A half of the indices whose numbers sum to one half, if any.
    pub fn solve(&self) -> Option<Vec<usize>> {
        let q = self.q();
        let half = q / 2;
        // Index 0 can always be put in the first set.
        (0u64..1 << (q - 1)).map(|mask| mask << 1 | 1).find_map(|mask| {
            if mask.count_ones() as usize != half {
                return None;
            }
            let set: Vec<usize> = (0..q).filter(|&i| mask >> i & 1 == 1).collect();
            let sum: f64 = set.iter().map(|&i| self.numbers[i]).sum();
            ((sum - 0.5).abs() <= UNIT_SUM_TOLERANCE).then_some(set)
        })
    }
}

/// Shared part of the two gadgets: `q` number voters on alternatives
/// `alpha = 0..q`, `beta = q..2q` and `theta`, followed by dummy blocks of
/// `q/2` voters each. Districts are the two number halves (a solution if one
/// exists, otherwise the first and second half by index) and one per dummy
/// block.
struct Gadget {
    rows: Vec<Vec<f64>>,
    groups: Vec<Vec<usize>>,
    theta: usize,
}

fn number_rows(inst: &CPartitionInstance, m: usize, theta: usize, eps: f64) -> Vec<Vec<f64>> {
    let q = inst.q();
    inst.numbers
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let mut row = vec![0.0; m];
            row[i] = 0.5 - eps;
            row[q + i] = 0.5 + eps - x;
            row[theta] = x;
            row
        })
        .collect()
}

fn gadget_groups(inst: &CPartitionInstance, blocks: usize) -> Vec<Vec<usize>> {
    let q = inst.q();
    let first = inst.solve().unwrap_or_else(|| (0..q / 2).collect());
    let second = (0..q).filter(|i| !first.contains(i)).collect();
    let mut groups = vec![first, second];
    for b in 0..blocks {
        let start = q + b * q / 2;
        groups.push((start..start + q / 2).collect());
    }
    groups
}

fn check_gadget_epsilon(inst: &CPartitionInstance, eps: f64) -> Result<()> {
    let min = inst.numbers.iter().copied().fold(f64::INFINITY, f64::min);
    if !(eps > 0.0 && eps < min / 2.0) {
        return Err(Error::domain(format!("epsilon must lie in (0, min x / 2 = {}), got {eps}", min / 2.0)));
    }
    Ok(())
}

fn gadget_instance(
    family: Family,
    g: Gadget,
    zero: Gadget,
    k: usize,
    epsilon: f64,
    best_effort: bool,
) -> Result<GeneratedInstance> {
    let profile = ValuationProfile::new(g.rows)?;
    let partition = DistrictPartition::from_groups(&g.groups)?;
    let m = profile.m();
    let rule = VotingRuleSpec::RangeVoting;
    let tiebreak = TieBreakOrder::identity(m);
    let weights = WeightVector::uniform(k);
    let outcome = DistrictElection::new(&profile, &partition, &weights, &rule, &tiebreak)
        .and_then(|e| run_and_measure(&e))?
        .0;
    // Ratio on the unperturbed valuations.
    let welfare = ValuationProfile::new(zero.rows)?.welfare();
    let limit = welfare[zero.theta] / welfare[outcome.winner.0];
    Ok(GeneratedInstance {
        family,
        class: ElectionClass::Symmetric,
        profile,
        partition,
        weights,
        rule,
        tiebreak,
        epsilon: Some(epsilon),
        ties: TieRealization::ExactTies,
        expected_winner: outcome.winner,
        optimal_alt: AlternativeId(g.theta),
        limit_distortion: limit,
        bound: None,
        best_effort,
    })
}

/// Districting gadget with `m = kq + 1` alternatives and `n = kq/2` voters
/// in districts of size `q/2`: the number voters plus `(k-2)q/2` dummy
/// voters splitting evenly between their own `gamma_t` and `delta_t`.
/// `theta` (the last index) is optimal and some districting elects it iff
/// the numbers admit an equal-size, equal-sum split.
///
/// The emitted partition uses such a split when one exists.
pub fn gen_t6_gadget(inst: &CPartitionInstance, k: usize, epsilon: f64) -> Result<GeneratedInstance> {
    if k < 2 {
        return Err(Error::domain(format!("need k >= 2, got {k}")));
    }
    check_gadget_epsilon(inst, epsilon)?;
    let build = |eps: f64| {
        let q = inst.q();
        let dummies = (k - 2) * q / 2;
        let m = k * q + 1;
        let theta = m - 1;
        let mut rows = number_rows(inst, m, theta, eps);
        for t in 0..dummies {
            let mut row = vec![0.0; m];
            row[2 * q + t] = 0.5;
            row[2 * q + dummies + t] = 0.5;
            rows.push(row);
        }
        Gadget { rows, groups: gadget_groups(inst, k - 2), theta }
    };
    gadget_instance(Family::T6, build(epsilon), build(0.0), k, epsilon, false)
}

/// Variant with fewer alternatives: dummy block `t` leans by `delta` towards
/// alternative `t` and spreads the rest evenly. For `k <= 2q + 2` there are
/// `2q + 1` alternatives; beyond that `m = k - 1` with padding alternatives,
/// a regime whose analysis is incomplete, so those instances are flagged
/// best-effort.
pub fn gen_t7_gadget(inst: &CPartitionInstance, k: usize, epsilon: f64, delta: f64) -> Result<GeneratedInstance> {
    let q = inst.q();
    if k < 3 {
        return Err(Error::domain(format!("need k >= 3, got {k}")));
    }
    check_gadget_epsilon(inst, epsilon)?;
    let wide = k > 2 * q + 2;
    let m = if wide { k - 1 } else { 2 * q + 1 };
    if !(delta > 0.0 && delta < 1.0 / m as f64) {
        return Err(Error::domain(format!("delta must lie in (0, 1/m), got {delta}")));
    }
    let build = |eps: f64, dlt: f64| {
        let theta = m - 1;
        let mut rows = number_rows(inst, m, theta, eps);
        for t in 0..k - 2 {
            rows.extend(std::iter::repeat(tilted(m, t, dlt)).take(q / 2));
        }
        Gadget { rows, groups: gadget_groups(inst, k - 2), theta }
    };
    gadget_instance(Family::T7, build(epsilon, delta), build(0.0, 0.0), k, epsilon, wide)
}
