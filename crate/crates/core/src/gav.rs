//! Greedy approval voting over attributes.
//!
//! Each stage picks the remaining candidate whose best attribute has the
//! most approvals among the still-active voters `V'`, then drops from `V'`
//! every voter who approves any attribute of that candidate. When `V'`
//! runs dry before the committee is full it is refilled with all voters.

use serde::{Deserialize, Serialize};

use crate::model::{CandidateIdx, Committee, Election, ValueIdx, VoterIdx};
use crate::rules::{av_committee_score, RuleId, SelectionResult, Stage};
use crate::score::Score;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieBreakMode {
    /// Every tie goes to the lowest candidate index.
    #[default]
    ByIndex,
    /// Ties first favour candidates carrying unanimous values on dimensions
    /// the committee does not yet cover, then the attribute with more
    /// approvals among voters unrepresented on its dimension, then index.
    StrongUnanimity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GavStage {
    pub candidate: CandidateIdx,
    pub dimension: usize,
    pub value: ValueIdx,
    /// `|V'_a[j]|` for the winning attribute.
    pub count: usize,
    pub removed: Vec<VoterIdx>,
    /// `V'` was emptied by this stage and refilled.
    pub reset: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GavTrace {
    pub stages: Vec<GavStage>,
}

/// Voters none of whose approved values on dimension `j` appear in `W^j`.
pub fn unrepresented_voters(election: &Election, w: &Committee, j: usize) -> Vec<VoterIdx> {
    let wj = w.values_on(election, j);
    (0..election.n())
        .filter(|&v| !wj.iter().any(|&a| election.approves(v, j, a)))
        .collect()
}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
struct Key {
    count: usize,
    fresh_unanimous: usize,
    unrepresented: usize,
}

pub fn gav_select(election: &Election, mode: TieBreakMode) -> SelectionResult {
    let n = election.n();
    let d = election.d();
    let k = election.k();
    let strong = mode == TieBreakMode::StrongUnanimity;

    let unanimous: Vec<Vec<bool>> = (0..d)
        .map(|j| {
            (0..election.domain().domain_size(j))
                .map(|a| election.approvers(j, a).len() == n)
                .collect()
        })
        .collect();

    let mut active = vec![true; n];
    let mut active_count = n;
    let mut in_pool = vec![true; election.m()];
    // represented[j][v]: v approves some value of W^j
    let mut represented = vec![vec![false; n]; d];
    let mut covered_unanimous = vec![false; d];
    let mut committee = Committee::empty();
    let mut stages = Vec::with_capacity(k);
    let mut trace = Vec::with_capacity(k);

    while committee.len() < k {
        let active_counts: Vec<Vec<usize>> = (0..d)
            .map(|j| {
                (0..election.domain().domain_size(j))
                    .map(|a| election.approvers(j, a).iter().filter(|&&v| active[v]).count())
                    .collect()
            })
            .collect();
        let unrep_counts = |j: usize, a: ValueIdx| -> usize {
            election.approvers(j, a).iter().filter(|&&v| !represented[j][v]).count()
        };

        let mut best: Option<(Key, CandidateIdx, usize)> = None;
        for c in (0..election.m()).filter(|&c| in_pool[c]) {
            let attrs = &election.candidate(c).attributes;
            let count = attrs.iter().enumerate().map(|(j, &a)| active_counts[j][a]).max().unwrap_or(0);
            let tied: Vec<usize> = (0..d).filter(|&j| active_counts[j][attrs[j]] == count).collect();
            let (dim, unrepresented) = if strong {
                // highest unrepresented approvals among the tied attributes, lowest dimension first
                tied.iter()
                    .map(|&j| (j, unrep_counts(j, attrs[j])))
                    .fold(None, |acc: Option<(usize, usize)>, (j, u)| match acc {
                        Some((_, bu)) if bu >= u => acc,
                        _ => Some((j, u)),
                    })
                    .expect("at least one dimension")
            } else {
                (tied[0], 0)
            };
            let fresh_unanimous = if strong {
                (0..d).filter(|&j| unanimous[j][attrs[j]] && !covered_unanimous[j]).count()
            } else {
                0
            };
            let key = Key { count, fresh_unanimous, unrepresented };
            if best.as_ref().is_none_or(|(bk, _, _)| key > *bk) {
                best = Some((key, c, dim));
            }
        }
        let (key, chosen, dim) = best.expect("k <= m leaves a candidate at every stage");

        in_pool[chosen] = false;
        committee.insert(chosen);
        let attrs = &election.candidate(chosen).attributes;
        for (j, &a) in attrs.iter().enumerate() {
            for &v in election.approvers(j, a) {
                represented[j][v] = true;
            }
            if unanimous[j][a] {
                covered_unanimous[j] = true;
            }
        }
        let removed: Vec<VoterIdx> = (0..n)
            .filter(|&v| active[v] && attrs.iter().enumerate().any(|(j, &a)| election.approves(v, j, a)))
            .collect();
        for &v in &removed {
            active[v] = false;
        }
        active_count -= removed.len();
        let reset = active_count == 0 && committee.len() < k;
        if reset {
            active.iter_mut().for_each(|a| *a = true);
            active_count = n;
        }
        trace.push(Stage { stage: stages.len() + 1, chosen: vec![chosen], score: Score::from_int(key.count as i64) });
        stages.push(GavStage { candidate: chosen, dimension: dim, value: attrs[dim], count: key.count, removed, reset });
    }

    let objective = av_committee_score(election, &committee);
    SelectionResult { rule: RuleId::Gav, committee, objective, trace, gav: Some(GavTrace { stages }) }
}
