//! Scoring functions and selection procedures for the attribute-level
//! approval rules.
//!
//! AV scores are normalized by the dimension count: a voter who approves a
//! candidate's value on every dimension contributes 1 to that candidate.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::gav::{self, GavTrace, TieBreakMode};
use crate::model::{CandidateIdx, Committee, Election, VoterIdx};
use crate::score::Score;
use crate::solvers::{self, Budget, BudgetError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleId {
    Av,
    Sav,
    Rav,
    Pav,
    Mav,
    Gav,
}

impl RuleId {
    pub const ALL: [RuleId; 6] = [RuleId::Av, RuleId::Sav, RuleId::Rav, RuleId::Pav, RuleId::Mav, RuleId::Gav];

    pub fn name(self) -> &'static str {
        match self {
            RuleId::Av => "av",
            RuleId::Sav => "sav",
            RuleId::Rav => "rav",
            RuleId::Pav => "pav",
            RuleId::Mav => "mav",
            RuleId::Gav => "gav",
        }
    }

    /// Rules whose exact selection enumerates committees.
    pub fn enumerates(self) -> bool {
        matches!(self, RuleId::Sav | RuleId::Pav | RuleId::Mav)
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RuleId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleId::ALL
            .into_iter()
            .find(|r| r.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown rule {s:?}"))
    }
}

/// One stage of a selection. Single-shot rules record a single stage whose
/// `chosen` list is the whole committee.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage {
    pub stage: usize,
    pub chosen: Vec<CandidateIdx>,
    pub score: Score,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectionResult {
    pub rule: RuleId,
    pub committee: Committee,
    /// The rule's objective: total AV for AV and GAV, total SAV, the summed
    /// stage scores for RAV, the PAV utility, or the MAV distance.
    pub objective: Score,
    pub trace: Vec<Stage>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gav: Option<GavTrace>,
}

impl SelectionResult {
    pub(crate) fn single_shot(rule: RuleId, committee: Committee, objective: Score) -> Self {
        let trace = vec![Stage { stage: 1, chosen: committee.members().to_vec(), score: objective.clone() }];
        SelectionResult { rule, committee, objective, trace, gav: None }
    }
}

#[derive(Debug, Clone, Default)]
pub struct SelectOptions {
    pub budget: Budget,
    pub tie_break: TieBreakMode,
}

/// Runs `rule` on `election` with its documented tie-breaking.
pub fn select(rule: RuleId, election: &Election, opts: &SelectOptions) -> Result<SelectionResult, BudgetError> {
    Ok(match rule {
        RuleId::Av => av_select(election),
        RuleId::Sav => sav_select(election, opts.budget)?,
        RuleId::Rav => rav_select(election),
        RuleId::Pav => solvers::pav_exact(election, opts.budget)?,
        RuleId::Mav => solvers::mav_exact(election, opts.budget)?,
        RuleId::Gav => gav::gav_select(election, opts.tie_break),
    })
}

/// `AV(c, V) = Σ_i |{j : c[j] ∈ C_i^j}| / d`.
pub fn av_candidate_score(election: &Election, c: CandidateIdx) -> Score {
    let total: usize = election
        .candidate(c)
        .attributes
        .iter()
        .enumerate()
        .map(|(j, &a)| election.approvers(j, a).len())
        .sum();
    Score::ratio(total as i64, election.d() as i64)
}

/// `AV(W, v_i) = Σ_{c∈W} |{j : c[j] ∈ C_i^j}| / d`.
pub fn av_voter_committee_score(election: &Election, w: &Committee, v: VoterIdx) -> Score {
    Score::ratio(committee_matches(election, w, v) as i64, election.d() as i64)
}

/// Σ over members of the voter's per-candidate match counts (AV(W, v) · d).
pub(crate) fn committee_matches(election: &Election, w: &Committee, v: VoterIdx) -> usize {
    w.members().iter().map(|&c| election.matches(v, c)).sum()
}

/// `AV(W, V) = Σ_{c∈W} AV(c, V)`.
pub fn av_committee_score(election: &Election, w: &Committee) -> Score {
    let total: usize = w
        .members()
        .iter()
        .flat_map(|&c| election.candidate(c).attributes.iter().enumerate())
        .map(|(j, &a)| election.approvers(j, a).len())
        .sum();
    Score::ratio(total as i64, election.d() as i64)
}

/// Set form `Σ_i Σ_j |W^j ∩ C_i^j|`. Differs from `d · AV(W, V)` only when
/// members share values.
pub fn av_set_score(election: &Election, w: &Committee) -> u64 {
    let masks = w.value_masks(election);
    election
        .ballots()
        .iter()
        .map(|b| {
            b.approvals
                .iter()
                .enumerate()
                .map(|(j, set)| set.iter().filter(|&&a| masks[j][a]).count() as u64)
                .sum::<u64>()
        })
        .sum()
}

/// Top-k by AV score. Scans the ballots once for per-attribute approval
/// counts, so the cost is linear in the number of approvals.
pub fn av_select(election: &Election) -> SelectionResult {
    let d = election.d();
    let mut counts: Vec<Vec<u64>> = (0..d).map(|j| vec![0; election.domain().domain_size(j)]).collect();
    for b in election.ballots() {
        for (j, set) in b.approvals.iter().enumerate() {
            for &a in set {
                counts[j][a] += 1;
            }
        }
    }
    let totals: Vec<u64> = election
        .candidates()
        .iter()
        .map(|c| c.attributes.iter().enumerate().map(|(j, &a)| counts[j][a]).sum())
        .collect();
    let mut order: Vec<CandidateIdx> = (0..election.m()).collect();
    let k = election.k();
    let by_score = |&a: &CandidateIdx, &b: &CandidateIdx| totals[b].cmp(&totals[a]).then(a.cmp(&b));
    if k < order.len() {
        order.select_nth_unstable_by(k - 1, by_score);
        order.truncate(k);
    }
    order.sort_unstable_by(by_score);
    let objective_numer: u64 = order.iter().map(|&c| totals[c]).sum();
    SelectionResult::single_shot(
        RuleId::Av,
        Committee::new(order),
        Score::ratio(objective_numer as i64, d as i64),
    )
}

/// `SAV(W, v_i) = Σ_j |W^j ∩ C_i^j| / min(Σ_j |C_i^j|, kd)`, and 0 for an
/// empty ballot.
pub fn sav_voter_score(election: &Election, w: &Committee, v: VoterIdx) -> Score {
    let masks = w.value_masks(election);
    let (num, den) = sav_parts(election, &masks, v);
    if den == 0 {
        Score::zero()
    } else {
        Score::ratio(num as i64, den as i64)
    }
}

fn sav_parts(election: &Election, masks: &[Vec<bool>], v: VoterIdx) -> (usize, usize) {
    let b = election.ballot(v);
    let num = b
        .approvals
        .iter()
        .enumerate()
        .map(|(j, set)| set.iter().filter(|&&a| masks[j][a]).count())
        .sum();
    let den = b.approval_count().min(election.k() * election.d());
    (num, den)
}

/// `Σ_i SAV(W, v_i)`.
pub fn sav_total(election: &Election, w: &Committee) -> Score {
    let masks = w.value_masks(election);
    let cap = election.k() * election.d();
    // numerators grouped by denominator, one rational add per distinct denominator
    let mut by_den = vec![0u64; cap + 1];
    for v in 0..election.n() {
        let (num, den) = sav_parts(election, &masks, v);
        by_den[den] += num as u64;
    }
    by_den
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, &num)| num > 0)
        .map(|(den, &num)| Score::ratio(num as i64, den as i64))
        .sum()
}

/// Exact SAV maximizer by enumeration; ties go to the lexicographically
/// first committee.
pub fn sav_select(election: &Election, budget: Budget) -> Result<SelectionResult, BudgetError> {
    let best = solvers::best_committee(election, budget, solvers::Goal::Maximize, |w| sav_total(election, w))?;
    Ok(SelectionResult::single_shot(RuleId::Sav, best.committee, best.value))
}

/// Reweighted approval voting: k greedy stages, each voter weighted by
/// `1 / (1 + AV(W, v_i))` for the partial committee `W`.
pub fn rav_select(election: &Election) -> SelectionResult {
    let d = election.d();
    let n = election.n();
    let mut committee = Committee::empty();
    // per-voter match count into the partial committee (AV(W, v) · d)
    let mut held = vec![0usize; n];
    let mut trace = Vec::with_capacity(election.k());
    let mut objective = Score::zero();
    for stage in 1..=election.k() {
        let mut best: Option<(CandidateIdx, Score)> = None;
        for c in (0..election.m()).filter(|&c| !committee.contains(c)) {
            let s = rav_stage_score(election, &held, c);
            if best.as_ref().is_none_or(|(_, b)| s > *b) {
                best = Some((c, s));
            }
        }
        let (c, s) = best.expect("k <= m leaves a candidate at every stage");
        committee.insert(c);
        for (v, h) in held.iter_mut().enumerate() {
            *h += election.matches(v, c);
        }
        objective += &s;
        trace.push(Stage { stage, chosen: vec![c], score: s });
    }
    debug_assert!(d > 0);
    SelectionResult { rule: RuleId::Rav, committee, objective, trace, gav: None }
}

/// `Σ_i r(v_i) · matches(v_i, c) / d` with `r = d / (d + held)`, which
/// simplifies to `Σ_i matches / (d + held)`.
fn rav_stage_score(election: &Election, held: &[usize], c: CandidateIdx) -> Score {
    let d = election.d();
    let mut by_den: Vec<u64> = vec![0; d * (election.k() + 1) + 1];
    let cand = election.candidate(c);
    for (j, &a) in cand.attributes.iter().enumerate() {
        for &v in election.approvers(j, a) {
            by_den[d + held[v]] += 1;
        }
    }
    by_den
        .iter()
        .enumerate()
        .filter(|(_, &num)| num > 0)
        .map(|(den, &num)| Score::ratio(num as i64, den as i64))
        .sum()
}

/// Harmonic number `H(q) = 1 + 1/2 + … + 1/q`, `H(0) = 0`.
pub fn harmonic(q: u64) -> Score {
    (1..=q).map(|i| Score::ratio(1, i as i64)).sum()
}

/// PAV utility, linearly interpolated between harmonic numbers:
/// `u(p) = H(⌊p⌋) + (p − ⌊p⌋) / (⌊p⌋ + 1)`.
pub fn pav_utility(p: &Score) -> Score {
    let q = p.floor_u64().expect("PAV utility of a non-negative score");
    let frac = p - &Score::from_int(q as i64);
    harmonic(q) + frac / Score::from_int(q as i64 + 1)
}

/// `Σ_i u(AV(W, v_i))`.
pub fn pav_objective(election: &Election, w: &Committee) -> Score {
    let d = election.d() as i64;
    let mut by_matches = vec![0i64; w.len() * election.d() + 1];
    for v in 0..election.n() {
        by_matches[committee_matches(election, w, v)] += 1;
    }
    by_matches
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, &count)| count > 0)
        .map(|(t, &count)| pav_utility(&Score::ratio(t as i64, d)) * Score::from_int(count))
        .sum()
}

/// Normalized Hamming distance between `W^j` and the voter's `C_i^j`,
/// maximized over dimensions, as a `(numerator, |D^j|)` pair.
fn mav_voter_distance_parts(election: &Election, masks: &[Vec<bool>], sizes: &[usize], v: VoterIdx) -> (usize, usize) {
    let b = election.ballot(v);
    let mut best = (0usize, 1usize);
    for (j, set) in b.approvals.iter().enumerate() {
        let inter = set.iter().filter(|&&a| masks[j][a]).count();
        let sym = sizes[j] + set.len() - 2 * inter;
        let dom = election.domain().domain_size(j);
        if sym * best.1 > best.0 * dom {
            best = (sym, dom);
        }
    }
    best
}

/// `f(W, v_i) = max_j |W^j Δ C_i^j| / |D^j|`.
pub fn mav_voter_distance(election: &Election, w: &Committee, v: VoterIdx) -> Score {
    let masks = w.value_masks(election);
    let sizes: Vec<usize> = masks.iter().map(|m| m.iter().filter(|&&x| x).count()).collect();
    let (num, den) = mav_voter_distance_parts(election, &masks, &sizes, v);
    Score::ratio(num as i64, den as i64)
}

/// `max_i f(W, v_i)`.
pub fn mav_objective(election: &Election, w: &Committee) -> Score {
    let masks = w.value_masks(election);
    let sizes: Vec<usize> = masks.iter().map(|m| m.iter().filter(|&&x| x).count()).collect();
    let mut best = (0usize, 1usize);
    for v in 0..election.n() {
        let (num, den) = mav_voter_distance_parts(election, &masks, &sizes, v);
        if num * best.1 > best.0 * den {
            best = (num, den);
        }
    }
    Score::ratio(best.0 as i64, best.1 as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{e0, generate_random, lemma_instance, GeneratorParams, Lemma, LemmaParams};
    use proptest::prelude::*;

    fn ids(e: &Election, w: &Committee) -> Vec<String> {
        e.committee_ids(w)
    }

    fn w(e: &Election, names: &[&str]) -> Committee {
        names.iter().map(|n| e.candidate_index(n).unwrap()).collect()
    }

    #[test]
    fn av_scores_on_e0() {
        let e = e0();
        assert_eq!(av_candidate_score(&e, 0), Score::from_int(3));
        assert_eq!(av_candidate_score(&e, 1), Score::from_int(2));
        assert_eq!(av_voter_committee_score(&e, &w(&e, &["c1"]), 0), Score::one());
        assert_eq!(av_voter_committee_score(&e, &w(&e, &["c1", "c2"]), 3), Score::from_int(2));
    }

    #[test]
    fn av_candidate_approved_everywhere_scores_n() {
        let mut f = e0().to_file();
        for v in &mut f.voters {
            v.approvals = vec![vec!["a1".into()], vec!["b1".into()]];
        }
        let e = Election::from_file(&f).unwrap();
        assert_eq!(av_candidate_score(&e, 0), Score::from_int(e.n() as i64));
    }

    #[test]
    fn empty_ballot_scores_zero() {
        let mut f = e0().to_file();
        f.voters[2].approvals = vec![vec![], vec![]];
        let e = Election::from_file(&f).unwrap();
        let all = w(&e, &["c1"]);
        assert_eq!(av_voter_committee_score(&e, &all, 2), Score::zero());
        assert_eq!(sav_voter_score(&e, &all, 2), Score::zero());
    }

    #[test]
    fn av_select_e0() {
        let r = av_select(&e0());
        assert_eq!(r.committee.members(), &[0]);
        assert_eq!(r.objective, Score::from_int(3));
        assert_eq!(r.trace.len(), 1);
    }

    #[test]
    fn av_select_lemma3_skips_the_bloc_candidates() {
        let e = lemma_instance(Lemma::L3, &LemmaParams::default()).unwrap();
        assert_eq!(ids(&e, &av_select(&e).committee), ["c1", "c2"]);
    }

    #[test]
    fn av_select_lemma2_avoids_c1() {
        let e = lemma_instance(Lemma::L2, &LemmaParams::default()).unwrap();
        assert!(!av_select(&e).committee.contains(0));
    }

    #[test]
    fn sav_scores_on_e0() {
        let e = e0();
        assert_eq!(sav_voter_score(&e, &w(&e, &["c1"]), 0), Score::one());
        assert_eq!(sav_voter_score(&e, &w(&e, &["c1"]), 2), Score::zero());
        let r = sav_select(&e, Budget::default()).unwrap();
        assert_eq!(ids(&e, &r.committee), ["c1"]);
        assert_eq!(r.objective, Score::from_int(3));
    }

    #[test]
    fn sav_single_candidate() {
        let mut f = e0().to_file();
        f.candidates.truncate(1);
        let e = Election::from_file(&f).unwrap();
        assert_eq!(sav_select(&e, Budget::default()).unwrap().committee.members(), &[0]);
    }

    #[test]
    fn sav_budget_guard() {
        let e = generate_random(&GeneratorParams { seed: 1, voters: 5, candidates: 30, dims: 2, domain_size: 5, approval_prob: 0.5, k: 10, ..Default::default() }).unwrap();
        let err = sav_select(&e, Budget::new(1000)).unwrap_err();
        assert_eq!(err.budget, 1000);
        assert!(err.required > 1000);
    }

    #[test]
    fn rav_lemma4b() {
        let e = lemma_instance(Lemma::L4b, &LemmaParams::default()).unwrap();
        let r = rav_select(&e);
        assert_eq!(ids(&e, &r.committee), ["c1", "c2"]);
        assert_eq!(r.trace.len(), 2);
    }

    #[test]
    fn pav_utility_values() {
        assert_eq!(pav_utility(&Score::from_int(2)), Score::ratio(3, 2));
        assert_eq!(pav_utility(&Score::zero()), Score::zero());
        assert_eq!(pav_utility(&Score::ratio(3, 2)), Score::ratio(5, 4));
        assert_eq!(pav_utility(&Score::ratio(1, 2)), Score::ratio(1, 2));
        assert_eq!(harmonic(3), Score::ratio(11, 6));
    }

    #[test]
    fn mav_examples() {
        let e = e0();
        assert_eq!(mav_objective(&e, &w(&e, &["c1"])), Score::one());
        assert_eq!(mav_voter_distance(&e, &w(&e, &["c1"]), 0), Score::zero());

        // a single voter whose ballot is exactly c1's values
        let mut f = e0().to_file();
        f.voters.truncate(1);
        let one = Election::from_file(&f).unwrap();
        assert_eq!(mav_objective(&one, &w(&one, &["c1"])), Score::zero());
        // disjoint with |W^j| + |C^j| = |D^j|
        assert_eq!(mav_objective(&one, &w(&one, &["c2"])), Score::one());
    }

    #[test]
    fn set_form_differs_only_on_shared_values() {
        let e = e0().with_k(2).unwrap();
        let both = w(&e, &["c1", "c2"]);
        assert_eq!(Score::from_int(av_set_score(&e, &both) as i64), av_committee_score(&e, &both) * Score::from_int(2));

        let mut f = e0().to_file();
        f.k = 2;
        f.candidates[1].attributes[0] = "a1".into();
        let shared = Election::from_file(&f).unwrap();
        let both = w(&shared, &["c1", "c2"]);
        assert!(Score::from_int(av_set_score(&shared, &both) as i64) < av_committee_score(&shared, &both) * Score::from_int(2));
    }

    #[test]
    fn rule_names_round_trip() {
        for r in RuleId::ALL {
            assert_eq!(r.name().parse::<RuleId>().unwrap(), r);
            assert_eq!(serde_json::to_string(&r).unwrap(), format!("\"{}\"", r.name()));
        }
        assert!("borda".parse::<RuleId>().is_err());
    }

    fn small_election() -> impl Strategy<Value = Election> {
        (any::<u64>(), 1usize..10, 1usize..7, 1usize..4, 1usize..4, 0.1f64..0.9, 1usize..4).prop_map(
            |(seed, n, m, d, s, p, k)| {
                generate_random(&GeneratorParams {
                    seed,
                    voters: n,
                    candidates: m,
                    dims: d,
                    domain_size: s,
                    approval_prob: p,
                    k: k.min(m),
                    ..Default::default()
                })
                .unwrap()
            },
        )
    }

    fn all_committees(e: &Election) -> Vec<Committee> {
        let mut out = Vec::new();
        solvers::enumerate_committees(e, Budget::default(), |c| {
            out.push(Committee::new(c.to_vec()));
            std::ops::ControlFlow::Continue(())
        })
        .unwrap();
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn av_candidate_is_sum_over_voters(e in small_election()) {
            for c in 0..e.m() {
                let single = Committee::new(vec![c]);
                let per_voter: Score = (0..e.n()).map(|v| av_voter_committee_score(&e, &single, v)).sum();
                prop_assert_eq!(av_candidate_score(&e, c), per_voter);
            }
        }

        #[test]
        fn av_select_is_optimal(e in small_election()) {
            let best = all_committees(&e).iter().map(|w| av_committee_score(&e, w)).max().unwrap();
            let r = av_select(&e);
            prop_assert_eq!(&r.objective, &best);
            prop_assert_eq!(av_committee_score(&e, &r.committee), best);
        }

        #[test]
        fn sav_in_unit_interval(e in small_election()) {
            for w in all_committees(&e) {
                for v in 0..e.n() {
                    let s = sav_voter_score(&e, &w, v);
                    prop_assert!(s >= Score::zero() && s <= Score::one());
                }
            }
        }

        #[test]
        fn pav_monotone_under_additions(e in small_election()) {
            let r = av_select(&e);
            let mut w = Committee::empty();
            let mut prev = pav_objective(&e, &w);
            for &c in r.committee.members() {
                w.insert(c);
                let next = pav_objective(&e, &w);
                prop_assert!(next >= prev);
                prev = next;
            }
        }

        #[test]
        fn pav_utility_monotone(a in 0i64..60, b in 0i64..60, d in 1i64..6) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(pav_utility(&Score::ratio(lo, d)) <= pav_utility(&Score::ratio(hi, d)));
        }

        #[test]
        fn mav_invariant_under_voter_permutation(e in small_election(), rot in 0usize..10) {
            let mut ballots = e.ballots().to_vec();
            let len = ballots.len();
            ballots.rotate_left(rot % len);
            let rotated = e.with_ballots(ballots).unwrap();
            for w in all_committees(&e) {
                prop_assert_eq!(mav_objective(&e, &w), mav_objective(&rotated, &w));
            }
        }

        #[test]
        fn mav_invariant_under_dimension_permutation(e in small_election()) {
            let f = e.to_file();
            let mut g = f.clone();
            g.dimensions.reverse();
            for c in &mut g.candidates { c.attributes.reverse(); }
            for v in &mut g.voters { v.approvals.reverse(); }
            let flipped = Election::from_file(&g).unwrap();
            for w in all_committees(&e) {
                prop_assert_eq!(mav_objective(&e, &w), mav_objective(&flipped, &w));
                prop_assert!(mav_objective(&e, &w) <= Score::one());
            }
        }

        #[test]
        fn rav_first_stage_is_av_top(e in small_election()) {
            let rav = rav_select(&e);
            let av = av_select(&e.with_k(1).unwrap());
            prop_assert_eq!(rav.trace[0].chosen[0], av.committee.members()[0]);
            prop_assert_eq!(rav.trace.len(), e.k());
        }

        #[test]
        fn scores_repeatable(e in small_election()) {
            let w = av_select(&e).committee;
            prop_assert_eq!(pav_objective(&e, &w).to_string(), pav_objective(&e, &w).to_string());
            prop_assert_eq!(sav_total(&e, &w), sav_total(&e, &w));
        }
    }

    #[test]
    fn voter_ids_do_not_affect_scores() {
        let e = e0();
        let ballots = e.ballots().iter().map(|b| crate::model::Ballot::new(format!("x{}", b.id), b.approvals.clone())).collect();
        let renamed = e.with_ballots(ballots).unwrap();
        let all = w(&e, &["c1"]);
        assert_eq!(pav_objective(&e, &all), pav_objective(&renamed, &all));
    }
}
