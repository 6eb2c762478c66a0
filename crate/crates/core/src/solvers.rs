//! Exhaustive solvers, set-cover reductions and a local-search heuristic.
//!
//! Enumeration walks size-`k` committees in lexicographic order. The search
//! space is split into fixed rank ranges (independent of the thread count),
//! each range is scanned by one worker, and the partial optima are folded
//! left to right, so results never depend on scheduling.

use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::axioms::{check_cjr, check_sjr};
use crate::gav::{gav_select, TieBreakMode};
use crate::instances::private_values;
use crate::model::{Ballot, Candidate, CandidateIdx, Committee, DomainSpec, Election, ModelError};
use crate::rules::{av_candidate_score, mav_objective, pav_objective, RuleId, SelectionResult};
use crate::score::Score;

pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Maximum number of committees an exhaustive search may examine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget(u64);

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget(limit)
    }

    pub fn limit(self) -> u64 {
        self.0
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget(DEFAULT_BUDGET)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("budget refusal: exhaustive search needs {required} committees, budget is {budget}")]
pub struct BudgetError {
    /// `C(m, k)`, saturated at `u128::MAX`.
    pub required: u128,
    pub budget: u64,
}

/// `C(m, k)`, saturating.
pub fn binomial(m: usize, k: usize) -> u128 {
    if k > m {
        return 0;
    }
    let k = k.min(m - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (m - i) / (i + 1) stays integral at every step
        acc = match acc.checked_mul((m - i) as u128) {
            Some(x) => x / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

pub fn check_budget(election: &Election, budget: Budget) -> Result<u64, BudgetError> {
    let required = binomial(election.m(), election.k());
    if required > budget.0 as u128 {
        return Err(BudgetError { required, budget: budget.0 });
    }
    Ok(required as u64)
}

/// Lexicographic rank `r` committee of size `k` from `0..m`.
fn unrank(m: usize, k: usize, mut r: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut next = 0;
    for slot in 0..k {
        loop {
            let rest = binomial(m - next - 1, k - slot - 1) as u64;
            if r < rest {
                break;
            }
            r -= rest;
            next += 1;
        }
        out.push(next);
        next += 1;
    }
    out
}

/// Advances to the next committee in lexicographic order.
fn advance(c: &mut [usize], m: usize) -> bool {
    let k = c.len();
    let Some(i) = (0..k).rev().find(|&i| c[i] < m - k + i) else {
        return false;
    };
    c[i] += 1;
    for t in i + 1..k {
        c[t] = c[t - 1] + 1;
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub objective: String,
    pub best: Option<Committee>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub best_ids: Option<Vec<String>>,
    pub best_value: Option<Score>,
    pub examined: u64,
    /// Every committee in the space was examined.
    pub exhausted: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<Score>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decision: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl SearchReport {
    pub fn new(objective: &str, election: &Election, best: Option<Committee>, best_value: Option<Score>, examined: u64, exhausted: bool) -> Self {
        let best_ids = best.as_ref().map(|w| election.committee_ids(w));
        SearchReport { objective: objective.into(), best, best_ids, best_value, examined, exhausted, tau: None, decision: None, note: None }
    }
}

/// Sequential lexicographic walk; the visitor may stop early.
pub fn enumerate_committees<F>(election: &Election, budget: Budget, mut visit: F) -> Result<SearchReport, BudgetError>
where
    F: FnMut(&[CandidateIdx]) -> ControlFlow<()>,
{
    let total = check_budget(election, budget)?;
    let (m, k) = (election.m(), election.k());
    let mut c: Vec<usize> = (0..k).collect();
    let mut examined = 0;
    loop {
        examined += 1;
        if visit(&c).is_break() {
            break;
        }
        if !advance(&mut c, m) {
            break;
        }
    }
    Ok(SearchReport::new("enumerate", election, None, None, examined, examined == total))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Goal {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Best<T> {
    pub committee: Committee,
    pub value: T,
    pub examined: u64,
}

const RANGES: u64 = 256;

/// Exhaustive optimum of `f`; ties go to the lexicographically first
/// committee.
pub fn best_committee<T, F>(election: &Election, budget: Budget, goal: Goal, f: F) -> Result<Best<T>, BudgetError>
where
    T: Ord + Send,
    F: Fn(&Committee) -> T + Sync,
{
    let total = check_budget(election, budget)?;
    let (m, k) = (election.m(), election.k());
    let chunk = total.div_ceil(RANGES).max(1);
    let better = |new: &T, old: &T| match goal {
        Goal::Maximize => new > old,
        Goal::Minimize => new < old,
    };
    let partial: Vec<(Vec<usize>, T)> = (0..total.div_ceil(chunk))
        .into_par_iter()
        .map(|i| {
            let start = i * chunk;
            let len = chunk.min(total - start);
            let mut c = unrank(m, k, start);
            let mut best_c = c.clone();
            let mut best_v = f(&Committee::new(c.clone()));
            for _ in 1..len {
                advance(&mut c, m);
                let v = f(&Committee::new(c.clone()));
                if better(&v, &best_v) {
                    best_v = v;
                    best_c.clone_from(&c);
                }
            }
            (best_c, best_v)
        })
        .collect();
    let (c, value) = partial
        .into_iter()
        .reduce(|acc, next| if better(&next.1, &acc.1) { next } else { acc })
        .expect("at least one committee");
    Ok(Best { committee: Committee::new(c), value, examined: total })
}

/// Exact PAV winner by enumeration.
pub fn pav_exact(election: &Election, budget: Budget) -> Result<SelectionResult, BudgetError> {
    let best = best_committee(election, budget, Goal::Maximize, |w| pav_objective(election, w))?;
    Ok(SelectionResult::single_shot(RuleId::Pav, best.committee, best.value))
}

/// Exact MAV winner by enumeration.
pub fn mav_exact(election: &Election, budget: Budget) -> Result<SelectionResult, BudgetError> {
    let best = best_committee(election, budget, Goal::Minimize, |w| mav_objective(election, w))?;
    Ok(SelectionResult::single_shot(RuleId::Mav, best.committee, best.value))
}

/// `|V_W|` with multiplicity: one count per voter per approved slot
/// `(c, j)` of `W`.
pub fn multiset_approvals(election: &Election, w: &Committee) -> usize {
    w.members()
        .iter()
        .map(|&c| election.candidate(c).attributes.iter().enumerate().map(|(j, &a)| election.approvers(j, a).len()).sum::<usize>())
        .sum()
}

/// Every attribute of every candidate outside `W` keeps fewer than `n/k`
/// approvers outside `V_W`.
pub fn outside_attributes_small(election: &Election, w: &Committee) -> bool {
    let mut covered = vec![false; election.n()];
    for &c in w.members() {
        for (j, &a) in election.candidate(c).attributes.iter().enumerate() {
            for &v in election.approvers(j, a) {
                covered[v] = true;
            }
        }
    }
    let (n, k) = (election.n() as u128, election.k() as u128);
    (0..election.m()).filter(|&c| !w.contains(c)).all(|c| {
        election.candidate(c).attributes.iter().enumerate().all(|(j, &a)| {
            let outside = election.approvers(j, a).iter().filter(|&&v| !covered[v]).count() as u128;
            outside * k < n
        })
    })
}

/// Without `tau`: the SJR committee of highest AV score. With `tau`: is
/// there a committee with `|V_W| >= tau` whose outside attributes all stay
/// below `n/k` uncovered approvers?
pub fn max_av_justified(election: &Election, tau: Option<&Score>, budget: Budget) -> Result<SearchReport, BudgetError> {
    match tau {
        None => {
            let scores: Vec<Score> = (0..election.m()).map(|c| av_candidate_score(election, c)).collect();
            let best = best_committee(election, budget, Goal::Maximize, |w| {
                check_sjr(election, w).holds.then(|| w.members().iter().map(|&c| &scores[c]).sum::<Score>())
            })?;
            let (committee, value) = match best.value {
                Some(v) => (Some(best.committee), Some(v)),
                None => (None, None),
            };
            let mut report = SearchReport::new("max-av-justified", election, committee, value, best.examined, true);
            report.decision = Some(report.best.is_some());
            Ok(report)
        }
        Some(tau) => {
            let best = best_committee(election, budget, Goal::Maximize, |w| {
                let count = Score::from_int(multiset_approvals(election, w) as i64);
                (&count >= tau && outside_attributes_small(election, w)).then_some(count)
            })?;
            let found = best.value.is_some();
            let mut report = SearchReport::new(
                "max-av-justified",
                election,
                found.then_some(best.committee),
                best.value,
                best.examined,
                true,
            );
            report.tau = Some(tau.clone());
            report.decision = Some(found);
            Ok(report)
        }
    }
}

/// Lexicographically first committee passing [`check_cjr`], or a
/// certificate that none exists.
pub fn cjr_exists(election: &Election, budget: Budget) -> Result<SearchReport, BudgetError> {
    let best = best_committee(election, budget, Goal::Maximize, |w| check_cjr(election, w).holds)?;
    let found = best.value;
    let mut report = SearchReport::new("cjr-exists", election, found.then_some(best.committee), None, best.examined, true);
    report.decision = Some(found);
    Ok(report)
}

#[derive(Debug, Error)]
pub enum SetCoverError {
    #[error("malformed set-cover instance: {0}")]
    Malformed(String),
    #[error("set cover with {0} subsets exceeds the exhaustive limit of 20")]
    TooLarge(usize),
    #[error("{construction} needs {constraint}")]
    Regime { construction: &'static str, constraint: &'static str },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Set-cover input: elements `1..=universe`, subsets of them, and the number
/// of subsets allowed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetCoverInstance {
    pub universe: usize,
    pub subsets: Vec<Vec<usize>>,
    pub budget: usize,
}

impl SetCoverInstance {
    pub fn validate(&self) -> Result<(), SetCoverError> {
        if self.universe == 0 {
            return Err(SetCoverError::Malformed("universe must be non-empty".into()));
        }
        if self.subsets.is_empty() {
            return Err(SetCoverError::Malformed("no subsets".into()));
        }
        for (i, s) in self.subsets.iter().enumerate() {
            if s.is_empty() {
                return Err(SetCoverError::Malformed(format!("subset {} is empty", i + 1)));
            }
            if let Some(&e) = s.iter().find(|&&e| e == 0 || e > self.universe) {
                return Err(SetCoverError::Malformed(format!("subset {} has element {e} outside 1..={}", i + 1, self.universe)));
            }
            let mut sorted = s.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(SetCoverError::Malformed(format!("subset {} repeats an element", i + 1)));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self, SetCoverError> {
        let inst: SetCoverInstance = serde_json::from_str(text).map_err(|e| SetCoverError::Malformed(e.to_string()))?;
        inst.validate()?;
        Ok(inst)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("set cover serializes");
        s.push('\n');
        s
    }

    fn masks(&self) -> Vec<u64> {
        self.subsets.iter().map(|s| s.iter().fold(0u64, |acc, &e| acc | 1 << (e - 1))).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetCoverAnswer {
    pub covers: bool,
    /// 1-based indices of a covering family, smallest size first.
    pub chosen: Option<Vec<usize>>,
}

/// Exact decision by trying every family of at most `budget` subsets.
pub fn solve_set_cover(inst: &SetCoverInstance) -> Result<SetCoverAnswer, SetCoverError> {
    inst.validate()?;
    let m = inst.subsets.len();
    if m > 20 || inst.universe > 64 {
        return Err(SetCoverError::TooLarge(m));
    }
    let masks = inst.masks();
    let full = if inst.universe == 64 { u64::MAX } else { (1u64 << inst.universe) - 1 };
    let mut families: Vec<u32> = (0u32..1 << m).filter(|f| f.count_ones() as usize <= inst.budget).collect();
    families.sort_by_key(|&f| (f.count_ones(), (0..m).filter(|&i| f >> i & 1 == 1).collect::<Vec<_>>()));
    for f in families {
        let union = (0..m).filter(|&i| f >> i & 1 == 1).fold(0u64, |acc, i| acc | masks[i]);
        if union == full {
            return Ok(SetCoverAnswer { covers: true, chosen: Some((0..m).filter(|&i| f >> i & 1 == 1).map(|i| i + 1).collect()) });
        }
    }
    Ok(SetCoverAnswer { covers: false, chosen: None })
}

/// CJR-existence election from a set-cover instance: `n = k n'` voters,
/// `m = m' + 2 k n'` candidates, `d = 2`, every value private to its holder.
pub fn reduce_setcover_to_cjr(inst: &SetCoverInstance, k: usize) -> Result<Election, SetCoverError> {
    inst.validate()?;
    if k < 2 {
        return Err(SetCoverError::Regime { construction: "the CJR reduction", constraint: "k >= 2" });
    }
    let n1 = inst.universe;
    let m1 = inst.subsets.len();
    let n = k * n1;
    let m = m1 + 2 * k * n1;
    // v_cjr(h) = V_h^{CJR}, 1-based voter numbers
    let v_cjr = |h: usize| -> Vec<usize> { (n1 * (h - 1) + 1..=n1 * h).collect() };
    let without = |set: Vec<usize>, v: usize| -> Vec<usize> { set.into_iter().filter(|&x| x != v).collect() };
    let with = |mut set: Vec<usize>, v: usize| -> Vec<usize> {
        if !set.contains(&v) {
            set.push(v);
        }
        set.sort_unstable();
        set
    };

    let mut approvers: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); 2]; m];
    for (i, s) in inst.subsets.iter().enumerate() {
        approvers[i] = vec![s.clone(), s.clone()];
    }
    for h in 2..=k {
        for i in 1..=n1 {
            let set = with(without(v_cjr(h), h * n1), i);
            approvers[m1 + (h - 2) * n1 + i - 1][0] = set.clone();
            approvers[m1 + (k + h - 3) * n1 + i - 1][1] = set;
        }
    }
    for i in 1..=n1 {
        let set = with(without(v_cjr(1), i), 2 * n1);
        approvers[m1 + (2 * k - 2) * n1 + i - 1][0] = set.clone();
        approvers[m1 + (2 * k - 1) * n1 + i - 1][1] = set;
    }
    if k >= 3 {
        let mut h = 3;
        for sets in approvers.iter_mut().skip(m1) {
            for set in sets.iter_mut().filter(|s| s.is_empty()) {
                *set = vec![h * n1];
                h = if h == k { 3 } else { h + 1 };
            }
        }
    }
    Ok(private_values(n, k, &approvers)?)
}

/// Justified-AV decision election from a set-cover instance: `n = 2 k n'`
/// voters, `m = m' + n'` candidates, and the threshold
/// `τ = d (k (2k - 3) n' + n')`.
pub fn reduce_setcover_to_max_av_justified(inst: &SetCoverInstance, k: usize, d: usize) -> Result<(Election, Score), SetCoverError> {
    inst.validate()?;
    if !((k >= 2 && d >= 2) || (k >= 3 && d == 1)) {
        return Err(SetCoverError::Regime { construction: "the justified-AV reduction", constraint: "k >= 2 and d >= 2, or k >= 3 and d = 1" });
    }
    if inst.subsets.len() + inst.universe < k {
        return Err(SetCoverError::Regime { construction: "the justified-AV reduction", constraint: "at least k candidates (subsets plus universe elements)" });
    }
    let n1 = inst.universe;
    let n = 2 * k * n1;
    // S = v1..v_{n'}, V' = next (2k - 3) n', V'' = last 2 n'
    let v_prime: Vec<usize> = (n1 + 1..=n1 + (2 * k - 3) * n1).collect();
    let v_second: Vec<usize> = (n - 2 * n1 + 1..=n).collect();
    let v_second_trimmed = &v_second[..v_second.len() - 1];

    let mut approvers: Vec<Vec<Vec<usize>>> = Vec::new();
    for s in &inst.subsets {
        let mut set: Vec<usize> = s.iter().copied().chain(v_prime.iter().copied()).collect();
        set.sort_unstable();
        approvers.push(vec![set; d]);
    }
    for i in 1..=n1 {
        let mut sets = vec![vec![i]; d];
        sets[0] = std::iter::once(i).chain(v_second_trimmed.iter().copied()).collect();
        approvers.push(sets);
    }
    let tau = (d * (k * (2 * k - 3) * n1 + n1)) as i64;
    Ok((private_values(n, k, &approvers)?, Score::from_int(tau)))
}

/// Projection of dimension `j` onto a one-dimensional election whose
/// candidates are the values some candidate holds, ordered by their first
/// holder.
fn project(election: &Election, j: usize, k: usize) -> (Election, Vec<usize>) {
    let mut held: Vec<usize> = Vec::new();
    for c in election.candidates() {
        let a = c.attributes[j];
        if !held.contains(&a) {
            held.push(a);
        }
    }
    let dim = election.domain().dimension(j).clone();
    let candidates = held.iter().map(|&a| Candidate { id: dim.values()[a].clone(), attributes: vec![a] }).collect();
    let ballots = election.ballots().iter().map(|b| Ballot::new(b.id.clone(), vec![b.approvals[j].clone()])).collect();
    let domain = DomainSpec::new(vec![dim]).expect("dimension already validated");
    let k = k.min(held.len());
    (Election::new(domain, candidates, ballots, k).expect("projection stays valid"), held)
}

/// Picks per-dimension value sets `J^j` with greedy approval voting on each
/// projected dimension, then looks for candidates realizing the tuples
/// `(J^1[t], ..., J^d[t])`. Succeeds whenever the candidate set contains
/// those tuples; otherwise reports that the product assumption is not met,
/// which says nothing about whether a CJR committee exists.
pub fn cjr_product_construction(election: &Election) -> SearchReport {
    let k = election.k();
    let picks: Vec<Vec<usize>> = (0..election.d())
        .map(|j| {
            let (proj, held) = project(election, j, k);
            gav_select(&proj, TieBreakMode::ByIndex).committee.members().iter().map(|&c| held[c]).collect()
        })
        .collect();
    let mut committee = Committee::empty();
    for t in 0..k {
        let tuple: Vec<usize> = picks.iter().map(|p| p[t % p.len()]).collect();
        match election.candidates().iter().position(|c| c.attributes == tuple) {
            Some(c) => committee.insert(c),
            None => {
                let mut report = SearchReport::new("cjr-product", election, None, None, 0, false);
                report.note = Some("assumption-not-met".into());
                return report;
            }
        }
    }
    for c in 0..election.m() {
        if committee.len() == k {
            break;
        }
        committee.insert(c);
    }
    let holds = check_cjr(election, &committee).holds;
    let mut report = SearchReport::new("cjr-product", election, Some(committee), None, 1, false);
    report.decision = Some(holds);
    if !holds {
        report.note = Some("constructed committee fails cjr".into());
    }
    report
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeuristicResult {
    pub committee: Committee,
    pub objective: Score,
    pub seed: Committee,
    pub seed_objective: Score,
    pub swaps: usize,
}

/// Local search for a high-AV committee with simple justified
/// representation: start from the greedy committee, then repeatedly apply
/// the first single swap (outgoing member ascending, incoming candidate
/// ascending) that raises the AV score and keeps SJR.
pub fn justified_av_heuristic(election: &Election) -> HeuristicResult {
    let scores: Vec<Score> = (0..election.m()).map(|c| av_candidate_score(election, c)).collect();
    let total = |w: &Committee| w.members().iter().map(|&c| &scores[c]).sum::<Score>();
    let seed = gav_select(election, TieBreakMode::ByIndex).committee;
    let mut w = seed.clone();
    let mut swaps = 0;
    'climb: loop {
        for &out in w.members() {
            for inc in (0..election.m()).filter(|&c| !w.contains(c) && scores[c] > scores[out]) {
                let mut next: Vec<usize> = w.members().iter().copied().filter(|&c| c != out).collect();
                next.push(inc);
                let next = Committee::new(next);
                if check_sjr(election, &next).holds {
                    w = next;
                    swaps += 1;
                    continue 'climb;
                }
            }
        }
        break;
    }
    HeuristicResult { objective: total(&w), seed_objective: total(&seed), committee: w, seed, swaps }
}
