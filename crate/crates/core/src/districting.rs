//! Choosing the partition: a polynomial districting that makes the plurality
//! winner win, exhaustive search over balanced partitions, and random /
//! bad-partition sampling.

use std::collections::VecDeque;
use std::ops::ControlFlow;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::engine::Evaluator;
use crate::error::{Error, Result};
use crate::model::{
    AlternativeId, DistrictPartition, OrdinalProfile, TieBreakMode, TieBreakOrder, ValuationProfile, WeightVector,
};
use crate::rules::{tied_max, VotingRuleSpec};

/// Upper limit on the number of partitions an exhaustive search may visit.
pub const PARTITION_GUARD: u128 = 10_000_000;

/// Each voter's first choice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopChoiceProfile {
    m: usize,
    tops: Vec<usize>,
}

impl TopChoiceProfile {
    pub fn new(tops: Vec<usize>, m: usize) -> Result<Self> {
        if let Some(i) = tops.iter().position(|&t| t >= m) {
            return Err(Error::domain(format!("voter {i} has top choice {} >= m = {m}", tops[i])));
        }
        Ok(TopChoiceProfile { m, tops })
    }

    /// Voters grouped by alternative: `counts[j]` voters rank `j` first.
    pub fn from_counts(counts: &[usize]) -> Self {
        let tops = counts.iter().enumerate().flat_map(|(j, &c)| std::iter::repeat(j).take(c)).collect();
        TopChoiceProfile { m: counts.len(), tops }
    }

    pub fn from_ordinal(profile: &OrdinalProfile) -> Self {
        TopChoiceProfile { m: profile.m(), tops: (0..profile.n()).map(|i| profile.top(i).0).collect() }
    }

    pub fn n(&self) -> usize {
        self.tops.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn top(&self, voter: usize) -> AlternativeId {
        AlternativeId(self.tops[voter])
    }

    pub fn counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.m];
        for &t in &self.tops {
            counts[t] += 1;
        }
        counts
    }

    /// Single-pool plurality winner under the order of `tiebreak`.
    pub fn plurality_winner(&self, tiebreak: &TieBreakOrder) -> AlternativeId {
        let counts: Vec<f64> = self.counts().iter().map(|&c| c as f64).collect();
        tiebreak.first_of(&tied_max(&counts))
    }

    /// Valuations putting all mass on each voter's top choice.
    pub fn to_valuations(&self) -> ValuationProfile {
        let rows = self
            .tops
            .iter()
            .map(|&t| {
                let mut row = vec![0.0; self.m];
                row[t] = 1.0;
                row
            })
            .collect();
        ValuationProfile::new(rows).expect("one-hot rows are unit-sum")
    }
}

/// A balanced partition and what it achieves.
#[derive(Debug, Clone, PartialEq)]
pub struct DistrictingResult {
    pub partition: DistrictPartition,
    pub achieved_winner: AlternativeId,
    pub districts_won: usize,
    /// Order under which the outcome was obtained.
    pub tiebreak: TieBreakOrder,
}

fn check_divisible(n: usize, k: usize) -> Result<usize> {
    if k == 0 || n == 0 || n % k != 0 {
        return Err(Error::domain(format!("n = {n} voters cannot be split into k = {k} equal districts")));
    }
    Ok(n / k)
}

/// [`plurality_districting_with`] under the identity order.
pub fn plurality_districting(top: &TopChoiceProfile, k: usize) -> Result<DistrictingResult> {
    plurality_districting_with(top, k, &TieBreakOrder::identity(top.m()))
}

/// Balanced districting under which the single-pool plurality winner `p`
/// wins at least `ceil(k/2)` districts and the election.
///
/// Winning a district takes at least one of `p`'s voters, so when `p` has
/// fewer than `ceil(k/2)` voters it gets one district per voter instead. No
/// rival can then win more districts than it has voters, so `p` still wins
/// the election.
///
/// `p`'s voters are spread evenly over a block of "good" districts; the
/// remaining seats there are filled with rival voters, never more of one
/// rival than `p` has in that district. Filling is a small transportation
/// problem solved by max-flow; leftover voters fill the other districts.
///
/// Candidates that respect `tiebreak` are tried first: a strict majority of
/// good districts, then exactly `ceil(k/2)` (or `n(p)`) of them with several
/// ways of routing rivals and laying out leftovers, each checked by running
/// the election. Some profiles admit no such districting (a rival ranked
/// before `p` ties it everywhere it can); the result is then reported under
/// `tiebreak` with `p` moved to the front.
pub fn plurality_districting_with(
    top: &TopChoiceProfile,
    k: usize,
    tiebreak: &TieBreakOrder,
) -> Result<DistrictingResult> {
    let s = check_divisible(top.n(), k)?;
    if tiebreak.len() != top.m() {
        return Err(Error::domain(format!("tie-break order has length {}, m = {}", tiebreak.len(), top.m())));
    }
    let order = tiebreak.with_mode(TieBreakMode::Fixed);
    let p = top.plurality_winner(&order);
    let counts = top.counts();

    let target = k.div_ceil(2).min(counts[p.0]);
    let ahead = |j: usize| order.rank(AlternativeId(j)) < order.rank(p);
    let valuations = top.to_valuations();
    let plurality = VotingRuleSpec::plurality(top.m())?;
    let weights = WeightVector::uniform(k);
    let check = |partition: &DistrictPartition, eval: &Evaluator| {
        let outcome = eval.evaluate(partition, &weights);
        let won = outcome.districts_won(p);
        (outcome.winner == p && won >= target).then_some(won)
    };

    // Under the given order: a strict majority of good districts first, then
    // smaller blocks whose outcome depends on how the leftovers fall.
    let eval = Evaluator::new(&valuations, &plurality, &order)?;
    let mut sizes = vec![k / 2 + 1, k.div_ceil(2), target];
    sizes.dedup();
    // Rivals ranked before p are the dangerous leftovers. Routing them into
    // the good districts first (together, largest first, smallest first, or
    // levelled so at most `level` of each is left over) is tried before the
    // opposite and a plain flow.
    let m = top.m();
    let mut by_count: Vec<usize> = (0..m).filter(|&j| ahead(j)).collect();
    by_count.sort_by_key(|&j| std::cmp::Reverse(counts[j]));
    let behind: Vec<usize> = (0..m).filter(|&j| j != p.0 && !ahead(j)).collect();
    let grouped = |groups: Vec<Vec<usize>>| -> Vec<Vec<usize>> {
        let mut limit = vec![0; m];
        groups
            .into_iter()
            .map(|g| {
                g.iter().for_each(|&j| limit[j] = counts[j]);
                limit.clone()
            })
            .collect()
    };
    let mut phasings = vec![
        grouped(vec![by_count.clone()]),
        grouped(by_count.iter().map(|&j| vec![j]).collect()),
        grouped(by_count.iter().rev().map(|&j| vec![j]).collect()),
    ];
    let top_ahead = by_count.first().map_or(0, |&j| counts[j]);
    for level in 0..top_ahead {
        phasings.push(vec![(0..m).map(|j| if ahead(j) { counts[j].saturating_sub(level) } else { 0 }).collect()]);
    }
    phasings.push(grouped(vec![behind]));
    phasings.push(Vec::new());
    // Keeping some of p's voters out of the good districts can let a rival
    // ranked after p take a remaining district from one ranked before it.
    for &good in &sizes {
        for placed in (good..=counts[p.0].min(good * s)).rev() {
            for phases in &phasings {
                let Some(alloc) = allocate(&counts, p, k, s, good, placed, ahead, phases) else {
                    continue;
                };
                for leftovers in Leftovers::ALL {
                    let partition = realize(top, &alloc, k, s, leftovers, &order)?;
                    if let Some(won) = check(&partition, &eval) {
                        return Ok(DistrictingResult { partition, achieved_winner: p, districts_won: won, tiebreak: order });
                    }
                }
            }
        }
    }

    let promoted = order.promote(p);
    let alloc = allocate(&counts, p, k, s, target, counts[p.0].min(target * s), |_| false, &[])
        .ok_or_else(|| Error::domain("no districting found for the plurality winner"))?;
    let partition = realize(top, &alloc, k, s, Leftovers::Index, &promoted)?;
    let eval = Evaluator::new(&valuations, &plurality, &promoted)?;
    let won = check(&partition, &eval).ok_or_else(|| {
        Error::domain(format!("districting check failed for {p} under the promoted order"))
    })?;
    Ok(DistrictingResult { partition, achieved_winner: p, districts_won: won, tiebreak: promoted })
}

/// How voters outside the good districts are laid out over the rest.
#[derive(Debug, Clone, Copy)]
enum Leftovers {
    /// Voter index order.
    Index,
    /// Grouped by top, earliest in the tie order first.
    Grouped,
    /// Grouped by top, latest in the tie order first.
    GroupedReverse,
    /// Dealt round-robin, so every district gets a similar mix.
    Dealt,
}

impl Leftovers {
    const ALL: [Leftovers; 4] = [Leftovers::Index, Leftovers::Grouped, Leftovers::GroupedReverse, Leftovers::Dealt];
}

/// `alloc[d][j]`: voters with top `j` placed in good district `d`.
type Allocation = Vec<Vec<usize>>;

/// Good-district allocation with `placed` of `p`'s voters spread evenly over
/// the `good` districts, or `None` if the rivals cannot fill the seats.
/// `strict(j)` marks rivals that must stay strictly below `p`. The flow is
/// grown in phases: phase `i` lets at most `phases[i][j]` voters of rival `j`
/// in, and a final phase lets everybody in.
fn allocate(
    counts: &[usize],
    p: AlternativeId,
    k: usize,
    s: usize,
    good: usize,
    placed: usize,
    strict: impl Fn(usize) -> bool,
    phases: &[Vec<usize>],
) -> Option<Allocation> {
    if good > k || placed < good || placed > counts[p.0].min(good * s) {
        return None;
    }
    let m = counts.len();
    let x: Vec<usize> = (0..good).map(|d| placed / good + usize::from(d < placed % good)).collect();
    let rivals: Vec<usize> = (0..m).filter(|&j| j != p.0).collect();

    // source, rivals, good districts, sink
    let nodes = 2 + rivals.len() + good;
    let (src, sink) = (0, nodes - 1);
    let mut cap = vec![vec![0i64; nodes]; nodes];
    for (r, &j) in rivals.iter().enumerate() {
        for (d, &xd) in x.iter().enumerate() {
            let c = if strict(j) { xd.saturating_sub(1) } else { xd };
            cap[1 + r][1 + rivals.len() + d] = c as i64;
        }
    }
    let demand: i64 = x.iter().map(|&xd| (s - xd) as i64).sum();
    for (d, &xd) in x.iter().enumerate() {
        cap[1 + rivals.len() + d][sink] = (s - xd) as i64;
    }
    // Flow leaving the source is never pushed back, so earlier phases keep
    // their seats.
    let mut flow = 0;
    for limit in phases.iter().map(Vec::as_slice).chain([counts]) {
        for (r, &j) in rivals.iter().enumerate() {
            let sent = cap[1 + r][src];
            cap[src][1 + r] = (limit[j] as i64 - sent).max(0);
        }
        flow += max_flow(&mut cap, src, sink);
    }
    if flow < demand {
        return None;
    }
    let residual = cap;

    let mut alloc = vec![vec![0; m]; good];
    for (d, row) in alloc.iter_mut().enumerate() {
        row[p.0] = x[d];
        for (r, &j) in rivals.iter().enumerate() {
            // Flow on an edge is what its reverse residual gained.
            row[j] = residual[1 + rivals.len() + d][1 + r] as usize;
        }
    }
    Some(alloc)
}

/// Edmonds–Karp on the residual capacities in `cap`; returns the flow added.
fn max_flow(cap: &mut [Vec<i64>], src: usize, sink: usize) -> i64 {
    let n = cap.len();
    let mut flow = 0;
    loop {
        let mut prev = vec![usize::MAX; n];
        prev[src] = src;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if prev[v] == usize::MAX && cap[u][v] > 0 {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if prev[sink] == usize::MAX {
            break;
        }
        let mut push = i64::MAX;
        let mut v = sink;
        while v != src {
            push = push.min(cap[prev[v]][v]);
            v = prev[v];
        }
        let mut v = sink;
        while v != src {
            cap[prev[v]][v] -= push;
            cap[v][prev[v]] += push;
            v = prev[v];
        }
        flow += push;
    }
    flow
}

fn realize(
    top: &TopChoiceProfile,
    alloc: &Allocation,
    k: usize,
    s: usize,
    leftovers: Leftovers,
    order: &TieBreakOrder,
) -> Result<DistrictPartition> {
    let mut pools: Vec<Vec<usize>> = vec![Vec::new(); top.m()];
    for i in (0..top.n()).rev() {
        pools[top.tops[i]].push(i);
    }
    let mut assignment = vec![usize::MAX; top.n()];
    for (d, row) in alloc.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            for _ in 0..c {
                let voter = pools[j].pop().expect("allocation within counts");
                assignment[voter] = d;
            }
        }
    }
    let mut rest: Vec<usize> = (0..top.n()).filter(|&i| assignment[i] == usize::MAX).collect();
    let rank = |i: &usize| order.rank(AlternativeId(top.tops[*i]));
    match leftovers {
        Leftovers::Index | Leftovers::Dealt => {}
        Leftovers::Grouped => rest.sort_by_key(rank),
        Leftovers::GroupedReverse => rest.sort_by_key(|i| std::cmp::Reverse(rank(i))),
    }
    let first = alloc.len();
    let others = k - first;
    for (t, &voter) in rest.iter().enumerate() {
        assignment[voter] = match leftovers {
            Leftovers::Dealt => first + t % others,
            _ => first + t / s,
        };
    }
    DistrictPartition::new(assignment, k)
}

/// Number of unordered partitions of `n` voters into `k` districts of equal
/// size, or `None` on overflow.
pub fn symmetric_partition_count(n: usize, k: usize) -> Option<u128> {
    if k == 0 || n % k != 0 {
        return Some(0);
    }
    let s = n / k;
    // The lowest unplaced voter opens each district; choose its s-1 mates.
    let mut total: u128 = 1;
    for d in 0..k {
        total = total.checked_mul(binomial((n - d * s - 1) as u128, (s - 1) as u128)?)?;
    }
    Some(total)
}

fn binomial(n: u128, r: u128) -> Option<u128> {
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// Visits every unordered balanced partition once. Districts are numbered by
/// their lowest voter, so voter 0 is always in district 0.
pub fn for_each_symmetric_partition(
    n: usize,
    k: usize,
    mut visit: impl FnMut(&DistrictPartition) -> ControlFlow<()>,
) -> Result<()> {
    let s = check_divisible(n, k)?;
    match symmetric_partition_count(n, k) {
        Some(c) if c <= PARTITION_GUARD => {}
        count => {
            return Err(Error::Resource(format!(
                "{} balanced partitions of {n} voters into {k} districts exceed the guard of {PARTITION_GUARD}",
                count.map_or_else(|| "too many".to_string(), |c| c.to_string())
            )))
        }
    }
    let mut assignment = vec![0; n];
    let mut sizes = vec![0; k];
    let _ = enumerate(0, 0, s, k, &mut assignment, &mut sizes, &mut visit);
    Ok(())
}

fn enumerate(
    voter: usize,
    opened: usize,
    s: usize,
    k: usize,
    assignment: &mut Vec<usize>,
    sizes: &mut Vec<usize>,
    visit: &mut impl FnMut(&DistrictPartition) -> ControlFlow<()>,
) -> ControlFlow<()> {
    if voter == assignment.len() {
        let partition = DistrictPartition::new(assignment.clone(), k).expect("balanced enumeration");
        return visit(&partition);
    }
    for d in 0..opened.min(k) {
        if sizes[d] < s {
            assignment[voter] = d;
            sizes[d] += 1;
            let flow = enumerate(voter + 1, opened, s, k, assignment, sizes, visit);
            sizes[d] -= 1;
            flow?;
        }
    }
    if opened < k {
        assignment[voter] = opened;
        sizes[opened] += 1;
        let flow = enumerate(voter + 1, opened + 1, s, k, assignment, sizes, visit);
        sizes[opened] -= 1;
        flow?;
    }
    ControlFlow::Continue(())
}

/// [`brute_force_districting_with`] under the identity order.
pub fn brute_force_districting(
    profile: &ValuationProfile,
    k: usize,
    rule: &VotingRuleSpec,
    target: AlternativeId,
) -> Result<Option<DistrictingResult>> {
    brute_force_districting_with(profile, k, rule, &TieBreakOrder::identity(profile.m()), target)
}

/// First balanced partition (in enumeration order) under which `target`
/// wins with equal weights, if any.
pub fn brute_force_districting_with(
    profile: &ValuationProfile,
    k: usize,
    rule: &VotingRuleSpec,
    tiebreak: &TieBreakOrder,
    target: AlternativeId,
) -> Result<Option<DistrictingResult>> {
    profile.check_alternative(target)?;
    let eval = Evaluator::new(profile, rule, tiebreak)?;
    let weights = WeightVector::uniform(k);
    let mut found = None;
    for_each_symmetric_partition(profile.n(), k, |partition| {
        let outcome = eval.evaluate(partition, &weights);
        if outcome.winner == target {
            found = Some(DistrictingResult {
                partition: partition.clone(),
                achieved_winner: target,
                districts_won: outcome.districts_won(target),
                tiebreak: tiebreak.clone(),
            });
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    })?;
    Ok(found)
}

/// Most districts `target` wins under any balanced partition.
pub fn max_districts_won(
    profile: &ValuationProfile,
    k: usize,
    rule: &VotingRuleSpec,
    tiebreak: &TieBreakOrder,
    target: AlternativeId,
) -> Result<usize> {
    profile.check_alternative(target)?;
    let eval = Evaluator::new(profile, rule, tiebreak)?;
    let mut best = 0;
    for_each_symmetric_partition(profile.n(), k, |partition| {
        let won = eval.local_winners(partition).iter().filter(|&&w| w == target).count();
        best = best.max(won);
        ControlFlow::Continue(())
    })?;
    Ok(best)
}

/// Balanced partition with the largest distortion (first in enumeration
/// order on ties) and that distortion.
pub fn max_distortion_partition(
    profile: &ValuationProfile,
    k: usize,
    rule: &VotingRuleSpec,
    tiebreak: &TieBreakOrder,
) -> Result<(DistrictPartition, f64)> {
    let eval = Evaluator::new(profile, rule, tiebreak)?;
    let weights = WeightVector::uniform(k);
    let mut best: Option<(DistrictPartition, f64)> = None;
    for_each_symmetric_partition(profile.n(), k, |partition| {
        let d = eval.distortion_of(eval.evaluate(partition, &weights).winner).distortion;
        if best.as_ref().map_or(true, |(_, b)| d > *b) {
            best = Some((partition.clone(), d));
        }
        ControlFlow::Continue(())
    })?;
    Ok(best.expect("at least one partition"))
}

/// Uniformly random balanced partition: ChaCha8 seeded with `seed`, a
/// Fisher–Yates shuffle of the voters, then consecutive blocks of `n/k`.
pub fn random_partition(n: usize, k: usize, seed: u64) -> Result<DistrictPartition> {
    let s = check_divisible(n, k)?;
    random_partition_with_sizes(&vec![s; k], seed)
}

/// Like [`random_partition`] with arbitrary positive district sizes.
pub fn random_partition_with_sizes(sizes: &[usize], seed: u64) -> Result<DistrictPartition> {
    shuffled_partition(sizes, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Random partition with the given sizes drawn from `rng`.
pub fn shuffled_partition<R: Rng + ?Sized>(sizes: &[usize], rng: &mut R) -> Result<DistrictPartition> {
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(Error::domain(format!("district sizes must be positive, got {sizes:?}")));
    }
    let n: usize = sizes.iter().sum();
    let mut voters: Vec<usize> = (0..n).collect();
    voters.shuffle(rng);
    let mut assignment = vec![0; n];
    let mut pos = 0;
    for (d, &size) in sizes.iter().enumerate() {
        for &v in &voters[pos..pos + size] {
            assignment[v] = d;
        }
        pos += size;
    }
    DistrictPartition::new(assignment, sizes.len())
}

/// Result of sampling partitions for a high distortion.
#[derive(Debug, Clone, PartialEq)]
pub struct BadPartition {
    pub partition: DistrictPartition,
    pub distortion: f64,
    /// Index of the winning trial; trial `t` uses seed `seed + t`.
    pub trial: usize,
}

/// Samples `trials` random balanced partitions and keeps the one with the
/// largest distortion (earliest trial on ties). Trials run in parallel.
pub fn bad_partition_search(
    profile: &ValuationProfile,
    k: usize,
    rule: &VotingRuleSpec,
    trials: usize,
    seed: u64,
) -> Result<BadPartition> {
    bad_partition_search_with(profile, k, rule, &TieBreakOrder::identity(profile.m()), trials, seed)
}

pub fn bad_partition_search_with(
    profile: &ValuationProfile,
    k: usize,
    rule: &VotingRuleSpec,
    tiebreak: &TieBreakOrder,
    trials: usize,
    seed: u64,
) -> Result<BadPartition> {
    if trials == 0 {
        return Err(Error::domain("need at least one trial"));
    }
    check_divisible(profile.n(), k)?;
    let eval = Evaluator::new(profile, rule, tiebreak)?;
    let weights = WeightVector::uniform(k);
    let sampled: Vec<(DistrictPartition, f64)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let partition = random_partition(profile.n(), k, seed.wrapping_add(t as u64))?;
            let d = eval.distortion_of(eval.evaluate(&partition, &weights).winner).distortion;
            Ok((partition, d))
        })
        .collect::<Result<_>>()?;
    let (trial, (partition, distortion)) = sampled
        .into_iter()
        .enumerate()
        .reduce(|best, cur| if cur.1 .1 > best.1 .1 { cur } else { best })
        .expect("trials >= 1");
    Ok(BadPartition { partition, distortion, trial })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_t5, gen_t6_gadget, CPartitionInstance};
    use proptest::prelude::*;
    use rand::Rng;
    use std::collections::HashSet;

    #[test]
    fn majority_everywhere() {
        let r = plurality_districting(&TopChoiceProfile::from_counts(&[4, 2]), 2).unwrap();
        assert_eq!(r.achieved_winner, AlternativeId(0));
        assert_eq!(r.districts_won, 2);
        assert!(r.partition.is_balanced());
    }

    #[test]
    fn rejects_indivisible() {
        let top = TopChoiceProfile::from_counts(&[3, 2, 2]);
        assert!(matches!(plurality_districting(&top, 2), Err(Error::Domain(_))));
    }

    #[test]
    fn four_alternatives_three_districts() {
        let r = plurality_districting(&TopChoiceProfile::from_counts(&[5, 3, 1, 3]), 3).unwrap();
        assert_eq!(r.achieved_winner, AlternativeId(0));
        assert!(r.districts_won >= 2);
    }

    #[test]
    fn promotes_winner_when_order_cannot_be_honoured() {
        // Only a tie inside a district lets alternative 1 win; the identity
        // order would hand that tie to alternative 0.
        let top = TopChoiceProfile::new(vec![0, 0, 1, 1, 1, 2], 3).unwrap();
        let r = plurality_districting(&top, 2).unwrap();
        assert_eq!(r.achieved_winner, AlternativeId(1));
        assert_eq!(r.tiebreak.order()[0], 1);
    }

    /// Does some balanced partition let `p` win the election and
    /// `ceil(k/2)` districts (or one per voter, if it has fewer) under `order`?
    fn brute_guarantee(top: &TopChoiceProfile, k: usize, order: &TieBreakOrder, p: AlternativeId) -> bool {
        let target = k.div_ceil(2).min(top.counts()[p.0]);
        let eval = Evaluator::new(&top.to_valuations(), &VotingRuleSpec::plurality(top.m()).unwrap(), order).unwrap();
        let w = WeightVector::uniform(k);
        let mut ok = false;
        for_each_symmetric_partition(top.n(), k, |part| {
            let o = eval.evaluate(part, &w);
            if o.winner == p && o.districts_won(p) >= target {
                ok = true;
                return ControlFlow::Break(());
            }
            ControlFlow::Continue(())
        })
        .unwrap();
        ok
    }

    proptest! {
        #[test]
        fn guarantee_holds(m in 2usize..6, k in 2usize..5, per in 1usize..4, seed in any::<u64>()) {
            let n = k * per;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let tops: Vec<usize> = (0..n).map(|_| rng.gen_range(0..m)).collect();
            let top = TopChoiceProfile::new(tops, m).unwrap();
            let r = plurality_districting(&top, k).unwrap();
            prop_assert!(r.partition.is_balanced());
            let p = top.plurality_winner(&TieBreakOrder::identity(m));
            prop_assert_eq!(r.achieved_winner, p);
            prop_assert!(r.districts_won >= k.div_ceil(2).min(top.counts()[p.0]));
        }

        #[test]
        fn order_is_kept_whenever_possible(m in 2usize..5, k in 2usize..4, per in 1usize..4, seed in any::<u64>()) {
            let n = k * per;
            prop_assume!(symmetric_partition_count(n, k).unwrap() <= 6000);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let top = TopChoiceProfile::new((0..n).map(|_| rng.gen_range(0..m)).collect(), m).unwrap();
            let id = TieBreakOrder::identity(m);
            let r = plurality_districting(&top, k).unwrap();
            let p = r.achieved_winner;
            // The promoted order is used exactly when no districting works
            // under the original one.
            prop_assert_eq!(r.tiebreak == id, brute_guarantee(&top, k, &id, p));
            prop_assert!(brute_guarantee(&top, k, &id.promote(p), p));
        }
    }

    fn canonical(p: &DistrictPartition) -> Vec<Vec<usize>> {
        let mut groups = p.districts();
        groups.sort();
        groups
    }

    #[test]
    fn enumeration_counts_and_uniqueness() {
        for (n, k, expected) in [(4, 2, 3u128), (6, 2, 10), (6, 3, 15), (9, 3, 280), (6, 6, 1)] {
            assert_eq!(symmetric_partition_count(n, k), Some(expected));
            let mut seen = HashSet::new();
            for_each_symmetric_partition(n, k, |p| {
                assert!(p.is_balanced());
                assert!(seen.insert(canonical(p)));
                ControlFlow::Continue(())
            })
            .unwrap();
            assert_eq!(seen.len() as u128, expected);
        }
    }

    #[test]
    fn guard() {
        assert!(matches!(for_each_symmetric_partition(40, 2, |_| ControlFlow::Continue(())), Err(Error::Resource(_))));
    }

    #[test]
    fn impossibility_small() {
        let inst = gen_t5(2, 2, 1e-6).unwrap();
        let r = brute_force_districting(&inst.profile, 2, &VotingRuleSpec::RangeVoting, inst.optimal_alt).unwrap();
        assert!(r.is_none());
    }

    #[test]
    fn gadget_yes_instance_found() {
        let inst = gen_t6_gadget(&CPartitionInstance::new(vec![0.3, 0.2, 0.3, 0.2]).unwrap(), 2, 1e-6).unwrap();
        let r = brute_force_districting(&inst.profile, 2, &VotingRuleSpec::RangeVoting, inst.optimal_alt)
            .unwrap()
            .unwrap();
        assert_eq!(r.districts_won, 2);
    }

    #[test]
    fn singletons_elect_tops() {
        let p = ValuationProfile::new(vec![vec![0.9, 0.1], vec![0.2, 0.8], vec![0.7, 0.3]]).unwrap();
        let rv = VotingRuleSpec::RangeVoting;
        assert!(brute_force_districting(&p, 3, &rv, AlternativeId(0)).unwrap().is_some());
        assert!(brute_force_districting(&p, 3, &rv, AlternativeId(1)).unwrap().is_none());
    }

    #[test]
    fn random_partition_is_reproducible() {
        let a = random_partition(10, 2, 7).unwrap();
        assert_eq!(a, random_partition(10, 2, 7).unwrap());
        assert!(a.is_balanced());
        assert_eq!(random_partition(4, 4, 3).unwrap().sizes(), vec![1; 4]);
        assert!(matches!(random_partition(5, 2, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn random_partition_is_uniform() {
        let trials = 10_000;
        let mut counts = std::collections::HashMap::new();
        for seed in 0..trials {
            *counts.entry(canonical(&random_partition(4, 2, seed).unwrap())).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 3);
        for c in counts.values() {
            assert!((*c as f64 / trials as f64 - 1.0 / 3.0).abs() < 0.02);
        }
    }

    #[test]
    fn bad_search_single_trial_and_brute_force() {
        let inst = gen_t5(2, 4, 1e-6).unwrap();
        let rv = VotingRuleSpec::RangeVoting;
        let one = bad_partition_search(&inst.profile, 2, &rv, 1, 11).unwrap();
        assert_eq!(one.partition, random_partition(12, 2, 11).unwrap());
        let many = bad_partition_search(&inst.profile, 2, &rv, 200, 11).unwrap();
        let (_, worst) = max_distortion_partition(&inst.profile, 2, &rv, &TieBreakOrder::identity(5)).unwrap();
        assert!(many.distortion <= worst);
        assert!(many.distortion >= one.distortion);
        let eval = Evaluator::new(&inst.profile, &rv, &TieBreakOrder::identity(5)).unwrap();
        for t in 0..200u64 {
            let part = random_partition(12, 2, 11 + t).unwrap();
            let d = eval.distortion_of(eval.evaluate(&part, &WeightVector::uniform(2)).winner).distortion;
            assert!(d <= many.distortion);
        }
    }
}
