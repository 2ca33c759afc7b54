//! District-based elections end to end: local winners, weighted approval
//! aggregation and distortion against the welfare optimum.

use crate::error::{Error, Result};
use crate::model::{AlternativeId, DistrictPartition, TieBreakOrder, ValuationProfile, WeightVector};
use crate::rules::{tied_max, VotingRuleSpec};

/// A district-based election over borrowed inputs.
#[derive(Debug, Clone, Copy)]
pub struct DistrictElection<'a> {
    pub profile: &'a ValuationProfile,
    pub partition: &'a DistrictPartition,
    pub weights: &'a WeightVector,
    pub rule: &'a VotingRuleSpec,
    pub tiebreak: &'a TieBreakOrder,
}

impl<'a> DistrictElection<'a> {
    /// Checks that all dimensions agree.
    pub fn new(
        profile: &'a ValuationProfile,
        partition: &'a DistrictPartition,
        weights: &'a WeightVector,
        rule: &'a VotingRuleSpec,
        tiebreak: &'a TieBreakOrder,
    ) -> Result<Self> {
        if partition.n() != profile.n() {
            return Err(Error::domain(format!(
                "partition covers {} voters, profile has {}",
                partition.n(),
                profile.n()
            )));
        }
        if weights.len() != partition.k() {
            return Err(Error::domain(format!(
                "{} weights for {} districts",
                weights.len(),
                partition.k()
            )));
        }
        if tiebreak.len() != profile.m() {
            return Err(Error::domain(format!(
                "tie-break order has length {}, profile has m = {}",
                tiebreak.len(),
                profile.m()
            )));
        }
        if let VotingRuleSpec::Positional(s) = rule {
            if s.len() != profile.m() {
                return Err(Error::domain(format!(
                    "score vector has length {}, profile has m = {}",
                    s.len(),
                    profile.m()
                )));
            }
        }
        Ok(DistrictElection { profile, partition, weights, rule, tiebreak })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElectionOutcome {
    pub local_winners: Vec<AlternativeId>,
    /// `sum_d w_d * [local_winners[d] == j]` for every alternative `j`.
    pub weighted_scores: Vec<f64>,
    pub winner: AlternativeId,
    /// Alternatives sharing the maximum weighted score, in index order.
    pub tied_winners: Vec<AlternativeId>,
}

impl ElectionOutcome {
    pub fn districts_won(&self, alt: AlternativeId) -> usize {
        self.local_winners.iter().filter(|w| **w == alt).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistortionReport {
    pub optimal_alt: AlternativeId,
    pub optimal_sw: f64,
    pub winner_sw: f64,
    /// `optimal_sw / winner_sw`, or `+inf` when the winner has zero welfare.
    pub distortion: f64,
}

/// Rule evaluation with per-voter score contributions and global welfare
/// computed once, so that many partitions of the same profile are cheap to
/// evaluate.
#[derive(Debug, Clone)]
pub struct Evaluator {
    m: usize,
    contributions: Vec<f64>,
    welfare: Vec<f64>,
    tiebreak: TieBreakOrder,
}

impl Evaluator {
    pub fn new(profile: &ValuationProfile, rule: &VotingRuleSpec, tiebreak: &TieBreakOrder) -> Result<Self> {
        Ok(Evaluator {
            m: profile.m(),
            contributions: rule.contributions(profile, tiebreak)?,
            welfare: profile.welfare(),
            tiebreak: tiebreak.clone(),
        })
    }

    pub fn welfare(&self) -> &[f64] {
        &self.welfare
    }

    /// Local winner of every district. Rule-level ties use the tie-break,
    /// with global welfare in adversarial mode.
    pub fn local_winners(&self, partition: &DistrictPartition) -> Vec<AlternativeId> {
        let m = self.m;
        let mut totals = vec![0.0; partition.k() * m];
        for (voter, &d) in partition.assignment().iter().enumerate() {
            let src = &self.contributions[voter * m..(voter + 1) * m];
            for (t, c) in totals[d * m..(d + 1) * m].iter_mut().zip(src) {
                *t += c;
            }
        }
        totals
            .chunks_exact(m)
            .map(|t| self.tiebreak.resolve(&tied_max(t), &self.welfare))
            .collect()
    }

    pub fn evaluate(&self, partition: &DistrictPartition, weights: &WeightVector) -> ElectionOutcome {
        let local_winners = self.local_winners(partition);
        let mut weighted_scores = vec![0.0; self.m];
        for (w, d) in local_winners.iter().zip(weights.as_slice()) {
            weighted_scores[w.0] += d;
        }
        let tied_winners = tied_max(&weighted_scores);
        let winner = self.tiebreak.resolve(&tied_winners, &self.welfare);
        ElectionOutcome { local_winners, weighted_scores, winner, tied_winners }
    }

    pub fn distortion_of(&self, winner: AlternativeId) -> DistortionReport {
        report(&self.welfare, winner)
    }
}

fn report(welfare: &[f64], winner: AlternativeId) -> DistortionReport {
    let optimal_alt = tied_max(welfare)[0];
    let optimal_sw = welfare[optimal_alt.0];
    let winner_sw = welfare[winner.0];
    let distortion = if winner_sw > 0.0 { optimal_sw / winner_sw } else { f64::INFINITY };
    DistortionReport { optimal_alt, optimal_sw, winner_sw, distortion }
}

pub fn run_election(e: &DistrictElection<'_>) -> Result<ElectionOutcome> {
    let eval = Evaluator::new(e.profile, e.rule, e.tiebreak)?;
    Ok(eval.evaluate(e.partition, e.weights))
}

/// Ratio between the best welfare and the welfare of `winner`.
pub fn distortion(profile: &ValuationProfile, winner: AlternativeId) -> Result<DistortionReport> {
    profile.check_alternative(winner)?;
    Ok(report(&profile.welfare(), winner))
}

/// Runs the election and measures its distortion. In adversarial mode the
/// winner is the least-welfare tied alternative, so the report carries the
/// worst distortion over the tie.
pub fn run_and_measure(e: &DistrictElection<'_>) -> Result<(ElectionOutcome, DistortionReport)> {
    let eval = Evaluator::new(e.profile, e.rule, e.tiebreak)?;
    let outcome = eval.evaluate(e.partition, e.weights);
    let report = eval.distortion_of(outcome.winner);
    Ok((outcome, report))
}
