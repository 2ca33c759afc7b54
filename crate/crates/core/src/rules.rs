//! Deterministic single-winner voting rules: Range Voting and positional
//! scoring rules.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{rank_row, AlternativeId, TieBreakOrder, ValuationProfile};

/// Scores are compared after rounding to this many decimal places, so that
/// accumulated floating-point noise does not break genuine ties.
const TIE_DECIMALS: i32 = 12;

#[derive(Debug, Clone, PartialEq)]
pub enum VotingRuleSpec {
    /// Elects a welfare maximizer.
    RangeVoting,
    /// Each voter awards `scores[p]` to the alternative she ranks at position `p`.
    Positional(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Plurality,
    Borda,
    Harmonic,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Plurality => "plurality",
            Preset::Borda => "borda",
            Preset::Harmonic => "harmonic",
        }
    }
}

/// Named positional rule for `m` alternatives.
pub fn preset(name: Preset, m: usize) -> Result<VotingRuleSpec> {
    if m < 2 {
        return Err(Error::domain(format!("preset rules need m >= 2, got {m}")));
    }
    let scores = match name {
        Preset::Plurality => (0..m).map(|p| if p == 0 { 1.0 } else { 0.0 }).collect(),
        Preset::Borda => (0..m).map(|p| (m - 1 - p) as f64).collect(),
        Preset::Harmonic => (0..m).map(|p| 1.0 / (p + 1) as f64).collect(),
    };
    Ok(VotingRuleSpec::Positional(scores))
}

impl VotingRuleSpec {
    pub fn plurality(m: usize) -> Result<Self> {
        preset(Preset::Plurality, m)
    }

    /// Validated positional rule: non-negative, non-increasing, not constant.
    pub fn positional(scores: Vec<f64>) -> Result<Self> {
        if scores.len() < 2 {
            return Err(Error::domain("score vector needs at least two entries"));
        }
        if scores.iter().any(|s| !s.is_finite() || *s < 0.0) {
            return Err(Error::domain(format!("scores {scores:?} must be non-negative reals")));
        }
        if scores.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::domain(format!("scores {scores:?} must be non-increasing")));
        }
        if scores.iter().all(|s| *s == scores[0]) {
            return Err(Error::domain(format!("scores {scores:?} are all equal")));
        }
        Ok(VotingRuleSpec::Positional(scores))
    }

    pub fn is_ordinal(&self) -> bool {
        matches!(self, VotingRuleSpec::Positional(_))
    }

    fn check(&self, m: usize) -> Result<()> {
        if let VotingRuleSpec::Positional(scores) = self {
            if scores.len() != m {
                return Err(Error::domain(format!(
                    "score vector has length {}, profile has m = {m}",
                    scores.len()
                )));
            }
        }
        Ok(())
    }

    /// Per-voter score contributions as a flat `n x m` matrix. Summing the
    /// rows of any group of voters gives that group's totals under the rule.
    pub fn contributions(&self, profile: &ValuationProfile, tiebreak: &TieBreakOrder) -> Result<Vec<f64>> {
        self.check(profile.m())?;
        if tiebreak.len() != profile.m() {
            return Err(Error::domain("tie-break order length does not match m"));
        }
        match self {
            VotingRuleSpec::RangeVoting => Ok(profile.rows().flatten().copied().collect()),
            VotingRuleSpec::Positional(scores) => {
                let m = profile.m();
                let mut out = vec![0.0; profile.n() * m];
                for (row, chunk) in profile.rows().zip(out.chunks_exact_mut(m)) {
                    for (pos, alt) in rank_row(row, tiebreak).into_iter().enumerate() {
                        chunk[alt] = scores[pos];
                    }
                }
                Ok(out)
            }
        }
    }

    /// Total score of every alternative under the rule.
    pub fn totals(&self, profile: &ValuationProfile, tiebreak: &TieBreakOrder) -> Result<Vec<f64>> {
        let m = profile.m();
        let contrib = self.contributions(profile, tiebreak)?;
        let mut totals = vec![0.0; m];
        for chunk in contrib.chunks_exact(m) {
            for (t, c) in totals.iter_mut().zip(chunk) {
                *t += c;
            }
        }
        Ok(totals)
    }
}

impl fmt::Display for VotingRuleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VotingRuleSpec::RangeVoting => f.write_str("rv"),
            VotingRuleSpec::Positional(scores) => {
                for p in [Preset::Plurality, Preset::Borda, Preset::Harmonic] {
                    if preset(p, scores.len()).ok().as_ref() == Some(self) {
                        return f.write_str(p.name());
                    }
                }
                let parts: Vec<String> = scores.iter().map(|s| s.to_string()).collect();
                write!(f, "scores:{}", parts.join(","))
            }
        }
    }
}

/// Rule as written on the command line, before `m` is known.
#[derive(Debug, Clone, PartialEq)]
pub enum RuleName {
    RangeVoting,
    Preset(Preset),
    Scores(Vec<f64>),
}

impl RuleName {
    pub fn resolve(&self, m: usize) -> Result<VotingRuleSpec> {
        match self {
            RuleName::RangeVoting => Ok(VotingRuleSpec::RangeVoting),
            RuleName::Preset(p) => preset(*p, m),
            RuleName::Scores(s) => {
                let rule = VotingRuleSpec::positional(s.clone())?;
                rule.check(m)?;
                Ok(rule)
            }
        }
    }
}

impl fmt::Display for RuleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleName::RangeVoting => f.write_str("rv"),
            RuleName::Preset(p) => f.write_str(p.name()),
            RuleName::Scores(s) => {
                let parts: Vec<String> = s.iter().map(|x| x.to_string()).collect();
                write!(f, "scores:{}", parts.join(","))
            }
        }
    }
}

impl FromStr for RuleName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rv" => Ok(RuleName::RangeVoting),
            "plurality" => Ok(RuleName::Preset(Preset::Plurality)),
            "borda" => Ok(RuleName::Preset(Preset::Borda)),
            "harmonic" => Ok(RuleName::Preset(Preset::Harmonic)),
            _ => {
                let list = s
                    .strip_prefix("scores:")
                    .ok_or_else(|| Error::domain(format!("unknown rule {s:?}")))?;
                let scores = list
                    .split(',')
                    .map(|x| x.trim().parse::<f64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|e| Error::domain(format!("bad score vector {list:?}: {e}")))?;
                VotingRuleSpec::positional(scores.clone())?;
                Ok(RuleName::Scores(scores))
            }
        }
    }
}

fn tie_key(x: f64) -> f64 {
    let scale = 10f64.powi(TIE_DECIMALS);
    (x * scale).round()
}

/// All indices attaining the maximum, comparing values rounded to 12 decimals.
pub fn tied_max(values: &[f64]) -> Vec<AlternativeId> {
    let best = values.iter().map(|&v| tie_key(v)).fold(f64::NEG_INFINITY, f64::max);
    values
        .iter()
        .enumerate()
        .filter(|(_, &v)| tie_key(v) == best)
        .map(|(j, _)| AlternativeId(j))
        .collect()
}

/// Winner of a single (local) election.
///
/// Ties are resolved by `tiebreak`; in adversarial mode the tied candidate
/// with the least welfare within `profile` is chosen.
pub fn apply_rule(
    rule: &VotingRuleSpec,
    profile: &ValuationProfile,
    tiebreak: &TieBreakOrder,
) -> Result<AlternativeId> {
    let totals = rule.totals(profile, tiebreak)?;
    let tied = tied_max(&totals);
    Ok(tiebreak.resolve(&tied, &profile.welfare()))
}

/// True iff no alternative is valued strictly more than `winner` by every
/// voter.
pub fn is_pareto_respecting_witness(profile: &ValuationProfile, winner: AlternativeId) -> bool {
    (0..profile.m())
        .filter(|&j| j != winner.0)
        .all(|j| profile.rows().any(|row| row[j] <= row[winner.0]))
}
