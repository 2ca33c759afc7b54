//! Domain types shared by every other module: valuation profiles, ordinal
//! profiles, tie-breaking, district partitions and weights.
//!
//! All indices are 0-based. Every value here is immutable once constructed.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maximum allowed deviation of a voter's row sum from 1.
pub const UNIT_SUM_TOLERANCE: f64 = 1e-9;

/// Index of an alternative, in `0..m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AlternativeId(pub usize);

impl AlternativeId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for AlternativeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An `n x m` matrix of non-negative, unit-sum valuations.
#[derive(Debug, Clone, PartialEq)]
pub struct ValuationProfile {
    n: usize,
    m: usize,
    values: Vec<f64>,
}

impl ValuationProfile {
    /// Builds a profile from voter rows, rejecting negative entries and rows
    /// whose sum is off by more than [`UNIT_SUM_TOLERANCE`].
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::data("profile needs at least one voter"));
        }
        let m = rows[0].len();
        if m < 2 {
            return Err(Error::data(format!("profile needs at least 2 alternatives, got {m}")));
        }
        let mut values = Vec::with_capacity(rows.len() * m);
        for (i, row) in rows.iter().enumerate() {
            check_row(i, row, m)?;
            values.extend_from_slice(row);
        }
        Ok(ValuationProfile { n: rows.len(), m, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn row(&self, voter: usize) -> &[f64] {
        &self.values[voter * self.m..(voter + 1) * self.m]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.values.chunks_exact(self.m)
    }

    pub fn value(&self, voter: usize, alt: AlternativeId) -> f64 {
        self.values[voter * self.m + alt.0]
    }

    /// Social welfare of every alternative, in index order.
    pub fn welfare(&self) -> Vec<f64> {
        let mut sw = vec![0.0; self.m];
        for row in self.rows() {
            for (acc, v) in sw.iter_mut().zip(row) {
                *acc += v;
            }
        }
        sw
    }

    pub fn check_alternative(&self, alt: AlternativeId) -> Result<()> {
        if alt.0 >= self.m {
            return Err(Error::domain(format!(
                "alternative {} out of range for m = {}",
                alt.0, self.m
            )));
        }
        Ok(())
    }

    /// Subprofile made of the given voters, in the given order.
    pub fn select(&self, voters: &[usize]) -> ValuationProfile {
        let mut values = Vec::with_capacity(voters.len() * self.m);
        for &i in voters {
            values.extend_from_slice(self.row(i));
        }
        ValuationProfile { n: voters.len(), m: self.m, values }
    }
}

fn check_row(i: usize, row: &[f64], m: usize) -> Result<()> {
    if row.len() != m {
        return Err(Error::data(format!(
            "voter {i}: expected {m} values, got {}",
            row.len()
        )));
    }
    if let Some(v) = row.iter().find(|v| !v.is_finite() || **v < 0.0) {
        return Err(Error::data(format!("voter {i}: value {v} is not a non-negative real")));
    }
    let sum: f64 = row.iter().sum();
    if (sum - 1.0).abs() > UNIT_SUM_TOLERANCE {
        return Err(Error::data(format!(
            "voter {i}: values sum to {sum}, violating the unit-sum requirement"
        )));
    }
    Ok(())
}

/// `SW(alt)`: total value of all voters for `alt`.
pub fn social_welfare(profile: &ValuationProfile, alt: AlternativeId) -> Result<f64> {
    profile.check_alternative(alt)?;
    Ok(profile.rows().map(|row| row[alt.0]).sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieBreakMode {
    /// Earliest alternative in the order wins.
    Fixed,
    /// Among tied winners, pick the one with the least social welfare.
    /// Exists only to realize worst cases.
    AdversarialMinWelfare,
}

/// Deterministic resolution of ties between alternatives.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TieBreakOrder {
    order: Vec<usize>,
    #[serde(skip)]
    rank: Vec<usize>,
    mode: TieBreakMode,
}

impl TieBreakOrder {
    /// Fixed mode over the identity permutation: lowest index wins.
    pub fn identity(m: usize) -> Self {
        Self::from_parts((0..m).collect(), TieBreakMode::Fixed)
    }

    pub fn fixed(order: Vec<usize>) -> Result<Self> {
        Self::new(order, TieBreakMode::Fixed)
    }

    pub fn adversarial(order: Vec<usize>) -> Result<Self> {
        Self::new(order, TieBreakMode::AdversarialMinWelfare)
    }

    pub fn new(order: Vec<usize>, mode: TieBreakMode) -> Result<Self> {
        let m = order.len();
        let mut seen = vec![false; m];
        for &j in &order {
            if j >= m || seen[j] {
                return Err(Error::domain(format!("tie-break order {order:?} is not a permutation")));
            }
            seen[j] = true;
        }
        Ok(Self::from_parts(order, mode))
    }

    fn from_parts(order: Vec<usize>, mode: TieBreakMode) -> Self {
        let mut rank = vec![0; order.len()];
        for (pos, &j) in order.iter().enumerate() {
            rank[j] = pos;
        }
        TieBreakOrder { order, rank, mode }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn mode(&self) -> TieBreakMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Position of `alt` in the order; lower wins.
    pub fn rank(&self, alt: AlternativeId) -> usize {
        self.rank[alt.0]
    }

    pub fn with_mode(&self, mode: TieBreakMode) -> Self {
        Self::from_parts(self.order.clone(), mode)
    }

    /// The same order with `alt` moved to the front.
    pub fn promote(&self, alt: AlternativeId) -> Self {
        let mut order = vec![alt.0];
        order.extend(self.order.iter().copied().filter(|&j| j != alt.0));
        Self::from_parts(order, self.mode)
    }

    /// Earliest candidate in the order.
    pub fn first_of(&self, candidates: &[AlternativeId]) -> AlternativeId {
        *candidates
            .iter()
            .min_by_key(|a| self.rank(**a))
            .expect("tie-break over an empty candidate set")
    }

    /// Resolves a tie according to the mode. `welfare` is consulted only in
    /// adversarial mode; equal welfare falls back to the order.
    pub fn resolve(&self, candidates: &[AlternativeId], welfare: &[f64]) -> AlternativeId {
        match self.mode {
            TieBreakMode::Fixed => self.first_of(candidates),
            TieBreakMode::AdversarialMinWelfare => *candidates
                .iter()
                .min_by(|a, b| {
                    welfare[a.0]
                        .total_cmp(&welfare[b.0])
                        .then(self.rank(**a).cmp(&self.rank(**b)))
                })
                .expect("tie-break over an empty candidate set"),
        }
    }
}

/// Rankings induced by valuations, best first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrdinalProfile {
    m: usize,
    rankings: Vec<Vec<usize>>,
}

impl OrdinalProfile {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.rankings.len()
    }

    pub fn ranking(&self, voter: usize) -> &[usize] {
        &self.rankings[voter]
    }

    pub fn rankings(&self) -> &[Vec<usize>] {
        &self.rankings
    }

    pub fn top(&self, voter: usize) -> AlternativeId {
        AlternativeId(self.rankings[voter][0])
    }
}

/// Sorts alternatives by value descending, equal values by `order`.
pub(crate) fn rank_row(row: &[f64], order: &TieBreakOrder) -> Vec<usize> {
    let mut alts: Vec<usize> = (0..row.len()).collect();
    alts.sort_by(|&a, &b| {
        row[b]
            .total_cmp(&row[a])
            .then(order.rank[a].cmp(&order.rank[b]))
    });
    alts
}

/// Ordinal profile of `profile`; ties in a voter's values follow the order.
///
/// Only fixed mode makes sense here: a voter's ranking never depends on
/// welfare.
pub fn induce_ordinal(profile: &ValuationProfile, tiebreak: &TieBreakOrder) -> Result<OrdinalProfile> {
    if tiebreak.mode != TieBreakMode::Fixed {
        return Err(Error::domain("ordinal induction requires a fixed tie-break"));
    }
    if tiebreak.len() != profile.m() {
        return Err(Error::domain(format!(
            "tie-break order has length {}, profile has m = {}",
            tiebreak.len(),
            profile.m()
        )));
    }
    let rankings = profile.rows().map(|row| rank_row(row, tiebreak)).collect();
    Ok(OrdinalProfile { m: profile.m(), rankings })
}

/// Assignment of voters to `k` non-empty districts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DistrictPartition {
    k: usize,
    assignment: Vec<usize>,
}

impl DistrictPartition {
    pub fn new(assignment: Vec<usize>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::domain("partition needs at least one district"));
        }
        let mut sizes = vec![0usize; k];
        for (i, &d) in assignment.iter().enumerate() {
            if d >= k {
                return Err(Error::domain(format!("voter {i} assigned to district {d} >= k = {k}")));
            }
            sizes[d] += 1;
        }
        if let Some(d) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::domain(format!("district {d} is empty")));
        }
        Ok(DistrictPartition { k, assignment })
    }

    /// Builds a partition from explicit voter groups over voters `0..n`.
    pub fn from_groups(groups: &[Vec<usize>]) -> Result<Self> {
        let n: usize = groups.iter().map(Vec::len).sum();
        let mut assignment = vec![usize::MAX; n];
        for (d, group) in groups.iter().enumerate() {
            for &i in group {
                if i >= n || assignment[i] != usize::MAX {
                    return Err(Error::domain(format!("voter {i} missing or assigned twice")));
                }
                assignment[i] = d;
            }
        }
        Self::new(assignment, groups.len())
    }

    /// Consecutive blocks of voters with the given sizes.
    pub fn contiguous(sizes: &[usize]) -> Result<Self> {
        let assignment = sizes
            .iter()
            .enumerate()
            .flat_map(|(d, &s)| std::iter::repeat(d).take(s))
            .collect();
        Self::new(assignment, sizes.len())
    }

    /// A single district holding every voter.
    pub fn single(n: usize) -> Self {
        DistrictPartition { k: 1, assignment: vec![0; n] }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn district_of(&self, voter: usize) -> usize {
        self.assignment[voter]
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &d in &self.assignment {
            sizes[d] += 1;
        }
        sizes
    }

    /// Voters of every district, each list in voter order.
    pub fn districts(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (i, &d) in self.assignment.iter().enumerate() {
            out[d].push(i);
        }
        out
    }

    pub fn members(&self, district: usize) -> Vec<usize> {
        self.assignment
            .iter()
            .enumerate()
            .filter(|(_, &d)| d == district)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn is_balanced(&self) -> bool {
        let sizes = self.sizes();
        sizes.iter().all(|&s| s == sizes[0])
    }
}

/// Strictly positive district weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::domain("weight vector is empty"));
        }
        if let Some((d, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !w.is_finite() || **w <= 0.0)
        {
            return Err(Error::domain(format!("district {d}: weight {w} is not strictly positive")));
        }
        Ok(WeightVector(weights))
    }

    /// All weights equal to 1.
    pub fn uniform(k: usize) -> Self {
        WeightVector(vec![1.0; k])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.0.iter().map(|w| w * factor).collect())
    }
}

/// Election classes, from most to least specific.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ElectionClass {
    Symmetric,
    Unweighted,
    Unrestricted,
}

impl ElectionClass {
    pub const ALL: [ElectionClass; 3] =
        [ElectionClass::Symmetric, ElectionClass::Unweighted, ElectionClass::Unrestricted];

    pub fn name(self) -> &'static str {
        match self {
            ElectionClass::Symmetric => "symmetric",
            ElectionClass::Unweighted => "unweighted",
            ElectionClass::Unrestricted => "unrestricted",
        }
    }
}

impl fmt::Display for ElectionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ElectionClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "symmetric" => Ok(ElectionClass::Symmetric),
            "unweighted" => Ok(ElectionClass::Unweighted),
            "unrestricted" => Ok(ElectionClass::Unrestricted),
            other => Err(Error::domain(format!("unknown election class {other:?}"))),
        }
    }
}

/// `v_d`: the rows of the voters in `district`, in voter order.
pub fn restrict(
    profile: &ValuationProfile,
    partition: &DistrictPartition,
    district: usize,
) -> Result<ValuationProfile> {
    if partition.n() != profile.n() {
        return Err(Error::domain(format!(
            "partition covers {} voters, profile has {}",
            partition.n(),
            profile.n()
        )));
    }
    if district >= partition.k() {
        return Err(Error::domain(format!("district {district} >= k = {}", partition.k())));
    }
    Ok(profile.select(&partition.members(district)))
}

/// Most specific class the partition and weights belong to.
pub fn classify(partition: &DistrictPartition, weights: &WeightVector) -> Result<ElectionClass> {
    if weights.len() != partition.k() {
        return Err(Error::domain(format!(
            "{} weights for {} districts",
            weights.len(),
            partition.k()
        )));
    }
    let w = weights.as_slice();
    if w.iter().any(|x| *x != w[0]) {
        return Ok(ElectionClass::Unrestricted);
    }
    if partition.is_balanced() {
        Ok(ElectionClass::Symmetric)
    } else {
        Ok(ElectionClass::Unweighted)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn worked_example() -> ValuationProfile {
        fixtures::worked_example().0
    }

    #[test]
    fn welfare_of_worked_example() {
        let p = worked_example();
        assert!((social_welfare(&p, AlternativeId(0)).unwrap() - 3.9).abs() < 1e-12);
        assert!((social_welfare(&p, AlternativeId(1)).unwrap() - 1.7).abs() < 1e-12);
        assert!((social_welfare(&p, AlternativeId(2)).unwrap() - 1.4).abs() < 1e-12);
        let total: f64 = p.welfare().iter().sum();
        assert!((total - 7.0).abs() < 7e-9);
    }

    #[test]
    fn welfare_rejects_bad_alternative() {
        let p = worked_example();
        assert!(matches!(social_welfare(&p, AlternativeId(3)), Err(Error::Domain(_))));
    }

    #[test]
    fn profile_rejects_non_unit_rows() {
        let err = ValuationProfile::new(vec![vec![0.5, 0.3]]).unwrap_err();
        assert!(err.to_string().contains("unit-sum"));
        assert!(ValuationProfile::new(vec![vec![1.2, -0.2]]).is_err());
        assert!(ValuationProfile::new(vec![vec![1.0]]).is_err());
        assert!(ValuationProfile::new(vec![]).is_err());
        // within tolerance
        assert!(ValuationProfile::new(vec![vec![0.5, 0.5 + 5e-10]]).is_ok());
    }

    #[test]
    fn ordinal_induction() {
        let p = worked_example();
        let ord = induce_ordinal(&p, &TieBreakOrder::identity(3)).unwrap();
        assert_eq!(ord.ranking(0), &[1, 0, 2]);
        assert_eq!(ord.ranking(1), &[2, 0, 1]);
        assert_eq!(ord.ranking(3), &[0, 1, 2]);
        assert_eq!(ord.ranking(5), &[1, 0, 2]);

        let uniform = ValuationProfile::new(vec![vec![0.25; 4]]).unwrap();
        let ord = induce_ordinal(&uniform, &TieBreakOrder::identity(4)).unwrap();
        assert_eq!(ord.ranking(0), &[0, 1, 2, 3]);

        let tie = ValuationProfile::new(vec![vec![0.5, 0.5, 0.0]]).unwrap();
        let order = TieBreakOrder::fixed(vec![1, 0, 2]).unwrap();
        assert_eq!(induce_ordinal(&tie, &order).unwrap().ranking(0), &[1, 0, 2]);
    }

    #[test]
    fn ordinal_induction_refuses_adversarial() {
        let p = worked_example();
        let adv = TieBreakOrder::adversarial(vec![0, 1, 2]).unwrap();
        assert!(induce_ordinal(&p, &adv).is_err());
    }

    #[test]
    fn tiebreak_validation() {
        assert!(TieBreakOrder::fixed(vec![0, 0, 1]).is_err());
        assert!(TieBreakOrder::fixed(vec![0, 3, 1]).is_err());
        let t = TieBreakOrder::fixed(vec![2, 0, 1]).unwrap();
        assert_eq!(t.first_of(&[AlternativeId(0), AlternativeId(2)]), AlternativeId(2));
        assert_eq!(t.promote(AlternativeId(1)).order(), &[1, 2, 0]);
    }

    #[test]
    fn adversarial_resolution_prefers_low_welfare() {
        let t = TieBreakOrder::adversarial(vec![0, 1, 2]).unwrap();
        let sw = [3.0, 1.0, 1.0];
        let all = [AlternativeId(0), AlternativeId(1), AlternativeId(2)];
        assert_eq!(t.resolve(&all, &sw), AlternativeId(1));
        let fixed = t.with_mode(TieBreakMode::Fixed);
        assert_eq!(fixed.resolve(&all, &sw), AlternativeId(0));
    }

    #[test]
    fn restriction() {
        let p = worked_example();
        let part = DistrictPartition::new(vec![0, 0, 0, 1, 1, 2, 2], 3).unwrap();
        let d0 = restrict(&p, &part, 0).unwrap();
        assert_eq!(d0.n(), 3);
        assert_eq!(d0.row(0), p.row(0));
        assert_eq!(d0.row(2), p.row(2));
        let rows: usize = (0..3).map(|d| restrict(&p, &part, d).unwrap().n()).sum();
        assert_eq!(rows, 7);
        assert_eq!(restrict(&p, &DistrictPartition::single(7), 0).unwrap(), p);
        assert!(restrict(&p, &part, 3).is_err());
    }

    #[test]
    fn partition_validation() {
        assert!(DistrictPartition::new(vec![0, 0, 2], 3).is_err());
        assert!(DistrictPartition::new(vec![0, 3], 2).is_err());
        let p = DistrictPartition::from_groups(&[vec![2, 0], vec![1]]).unwrap();
        assert_eq!(p.assignment(), &[0, 1, 0]);
        assert_eq!(p.sizes(), vec![2, 1]);
        assert!(DistrictPartition::from_groups(&[vec![0, 0], vec![1]]).is_err());
    }

    #[test]
    fn classification() {
        let part = DistrictPartition::contiguous(&[3, 2, 2]).unwrap();
        let w = WeightVector::new(vec![3.0, 2.0, 2.0]).unwrap();
        assert_eq!(classify(&part, &w).unwrap(), ElectionClass::Unrestricted);
        let part = DistrictPartition::contiguous(&[2, 2]).unwrap();
        assert_eq!(classify(&part, &WeightVector::uniform(2)).unwrap(), ElectionClass::Symmetric);
        let part = DistrictPartition::contiguous(&[3, 1]).unwrap();
        assert_eq!(classify(&part, &WeightVector::uniform(2)).unwrap(), ElectionClass::Unweighted);
        assert!(classify(&part, &WeightVector::uniform(3)).is_err());
    }

    #[test]
    fn weights_must_be_positive() {
        assert!(WeightVector::new(vec![1.0, 0.0]).is_err());
        assert!(WeightVector::new(vec![1.0, f64::NAN]).is_err());
        assert!(WeightVector::new(vec![]).is_err());
    }
}
