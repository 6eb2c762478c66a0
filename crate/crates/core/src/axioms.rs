//! Committee-level property checkers and a metamorphic harness for
//! rule-level properties.
//!
//! The committee checkers are exact and polynomial. The rule-level checks
//! are falsifiers: they run the rule on related elections and look for a
//! concrete violation, so "holds" means only that none was found.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::instances::{self, GeneratorParams};
use crate::model::{meets_group_threshold, Ballot, CandidateIdx, Committee, Election, ElectionFile, ModelError, ValueIdx, VoterIdx};
use crate::rules::{select, RuleId, SelectOptions};
use crate::solvers::BudgetError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// A dimension with unanimously approved values, none of which is in `W^j`.
    UncoveredDimension { dimension: usize, unanimous: Vec<ValueIdx> },
    /// A group of at least `n/k` voters sharing `value` on `dimension` and
    /// left unrepresented.
    UnrepresentedGroup { dimension: usize, value: ValueIdx, voters: Vec<VoterIdx> },
    Homogeneity { replication: usize, original: Committee, replicated: Committee },
    Consistency { other: ElectionFile, committee: Committee, union_committee: Committee },
    Monotonicity {
        /// 1: approvals added to a winner's value; 2: approvals removed from a loser's value.
        condition: u8,
        candidate: CandidateIdx,
        dimension: usize,
        value: ValueIdx,
        voters: Vec<VoterIdx>,
        before: Committee,
        after: Committee,
    },
    CommitteeMonotonicity { k: usize, smaller: Committee, larger: Committee },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub holds: bool,
    /// The antecedent of the property never fired.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub vacuous: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn holds() -> Self {
        Verdict { holds: true, vacuous: false, witness: None }
    }

    pub fn vacuous() -> Self {
        Verdict { holds: true, vacuous: true, witness: None }
    }

    pub fn violated(witness: Witness) -> Self {
        Verdict { holds: false, vacuous: false, witness: Some(witness) }
    }
}

/// `∩_i C_i^j` for every dimension.
fn unanimous_by_dimension(election: &Election) -> Vec<Vec<ValueIdx>> {
    (0..election.d()).map(|j| election.unanimous_values(j)).collect()
}

pub fn check_weak_unanimity(election: &Election, w: &Committee) -> Verdict {
    let unanimous = unanimous_by_dimension(election);
    let masks = w.value_masks(election);
    let mut first_uncovered = None;
    for (j, values) in unanimous.iter().enumerate() {
        if values.iter().any(|&a| masks[j][a]) {
            return Verdict::holds();
        }
        if first_uncovered.is_none() && !values.is_empty() {
            first_uncovered = Some(j);
        }
    }
    match first_uncovered {
        None => Verdict::vacuous(),
        Some(j) => Verdict::violated(Witness::UncoveredDimension { dimension: j, unanimous: unanimous[j].clone() }),
    }
}

pub fn check_strong_unanimity(election: &Election, w: &Committee) -> Verdict {
    let unanimous = unanimous_by_dimension(election);
    if unanimous.iter().all(Vec::is_empty) {
        return Verdict::vacuous();
    }
    let masks = w.value_masks(election);
    for (j, values) in unanimous.iter().enumerate() {
        if !values.is_empty() && !values.iter().any(|&a| masks[j][a]) {
            return Verdict::violated(Witness::UncoveredDimension { dimension: j, unanimous: values.clone() });
        }
    }
    Verdict::holds()
}

// The definitions quantify over every voter subset V'. A violating V' shares
// some value a on some dimension j and every member is unrepresented, so V'
// lies inside U(j, a) = {unrepresented approvers of a on j}; and U(j, a) is
// itself a violating subset whenever it reaches n/k. Scanning the maximal
// groups U(j, a) therefore decides the property exactly.
fn scan_groups(election: &Election, unrepresented: impl Fn(usize, VoterIdx) -> bool) -> Verdict {
    for j in 0..election.d() {
        for a in 0..election.domain().domain_size(j) {
            let group: Vec<VoterIdx> = election.approvers(j, a).iter().copied().filter(|&v| unrepresented(j, v)).collect();
            if !group.is_empty() && meets_group_threshold(group.len(), election) {
                return Verdict::violated(Witness::UnrepresentedGroup { dimension: j, value: a, voters: group });
            }
        }
    }
    Verdict::holds()
}

/// Per dimension, whether each voter approves some value of `W^j`.
fn represented_by_dimension(election: &Election, w: &Committee) -> Vec<Vec<bool>> {
    let masks = w.value_masks(election);
    (0..election.d())
        .map(|j| {
            election
                .ballots()
                .iter()
                .map(|b| b.approvals[j].iter().any(|&a| masks[j][a]))
                .collect()
        })
        .collect()
}

/// Simple justified representation: no cohesive group of `n/k` voters may be
/// unrepresented on every dimension.
pub fn check_sjr(election: &Election, w: &Committee) -> Verdict {
    let rep = represented_by_dimension(election, w);
    let any: Vec<bool> = (0..election.n()).map(|v| rep.iter().any(|r| r[v])).collect();
    scan_groups(election, |_, v| !any[v])
}

/// Compound justified representation: a group cohesive on dimension `j` must
/// be represented on `j` itself.
pub fn check_cjr(election: &Election, w: &Committee) -> Verdict {
    let rep = represented_by_dimension(election, w);
    scan_groups(election, |j, v| !rep[j][v])
}

#[derive(Debug, Error)]
pub enum AxiomError {
    #[error(transparent)]
    Budget(#[from] BudgetError),
    #[error("incompatible elections: {0}")]
    Incompatible(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Every ballot repeated `r` times with fresh ids `"{id}#{copy}"`.
pub fn replicate(election: &Election, r: usize) -> Election {
    let ballots = (0..r)
        .flat_map(|t| {
            election.ballots().iter().map(move |b| {
                if t == 0 {
                    b.clone()
                } else {
                    Ballot::new(format!("{}#{}", b.id, t), b.approvals.clone())
                }
            })
        })
        .collect();
    election.with_ballots(ballots).expect("replicated ballots stay valid")
}

pub fn check_homogeneity(rule: RuleId, election: &Election, r: usize, opts: &SelectOptions) -> Result<Verdict, BudgetError> {
    if r <= 1 {
        return Ok(Verdict::holds());
    }
    let original = select(rule, election, opts)?.committee;
    let replicated = select(rule, &replicate(election, r), opts)?.committee;
    Ok(if original == replicated {
        Verdict::holds()
    } else {
        Verdict::violated(Witness::Homogeneity { replication: r, original, replicated })
    })
}

/// Union of two electorates over the same candidates and domain.
pub fn union(first: &Election, second: &Election) -> Result<Election, AxiomError> {
    if first.domain() != second.domain() || first.candidates() != second.candidates() || first.k() != second.k() {
        return Err(AxiomError::Incompatible("candidates, domains and k must match".into()));
    }
    let mut ballots = first.ballots().to_vec();
    ballots.extend_from_slice(second.ballots());
    Ok(first.with_ballots(ballots)?)
}

pub fn check_consistency(rule: RuleId, first: &Election, second: &Election, opts: &SelectOptions) -> Result<Verdict, AxiomError> {
    let both = union(first, second)?;
    let w1 = select(rule, first, opts)?.committee;
    let w2 = select(rule, second, opts)?.committee;
    if w1 != w2 {
        return Ok(Verdict::vacuous());
    }
    let joint = select(rule, &both, opts)?.committee;
    Ok(if joint == w1 {
        Verdict::holds()
    } else {
        Verdict::violated(Witness::Consistency { other: second.to_file(), committee: w1, union_committee: joint })
    })
}

/// Adds (`add = true`) or removes value `a` on dimension `j` for `voters`.
pub fn perturb(election: &Election, j: usize, a: ValueIdx, voters: &[VoterIdx], add: bool) -> Election {
    let mut ballots = election.ballots().to_vec();
    for &v in voters {
        let set = &mut ballots[v].approvals[j];
        match (set.binary_search(&a), add) {
            (Err(pos), true) => set.insert(pos, a),
            (Ok(pos), false) => {
                set.remove(pos);
            }
            _ => {}
        }
    }
    election.with_ballots(ballots).expect("perturbed ballots stay valid")
}

fn random_nonempty_subset(rng: &mut ChaCha8Rng, pool: &[VoterIdx]) -> Vec<VoterIdx> {
    let mut out: Vec<VoterIdx> = pool.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
    if out.is_empty() {
        out.push(pool[rng.gen_range(0..pool.len())]);
    }
    out
}

/// Picks a `(candidate, dimension)` pair in random order for which `pool`
/// yields a non-empty voter set.
fn pick_target(
    rng: &mut ChaCha8Rng,
    election: &Election,
    candidates: &[CandidateIdx],
    pool: impl Fn(usize, ValueIdx) -> Vec<VoterIdx>,
) -> Option<(CandidateIdx, usize, ValueIdx, Vec<VoterIdx>)> {
    let mut cands = candidates.to_vec();
    cands.shuffle(rng);
    for c in cands {
        let mut dims: Vec<usize> = (0..election.d()).collect();
        dims.shuffle(rng);
        for j in dims {
            let a = election.candidate(c).attributes[j];
            let eligible = pool(j, a);
            if !eligible.is_empty() {
                return Some((c, j, a, eligible));
            }
        }
    }
    None
}

/// Seeded monotonicity probe. Condition 1 adds approvals for a winner's
/// value from voters outside `V_{c[j]}`; condition 2 removes approvals for a
/// loser's value. Either may be vacuous when no eligible voter set exists.
pub fn check_monotonicity(rule: RuleId, election: &Election, seed: u64, opts: &SelectOptions) -> Result<Verdict, BudgetError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let before = select(rule, election, opts)?.committee;
    let winners = before.members().to_vec();
    let losers: Vec<CandidateIdx> = (0..election.m()).filter(|&c| !before.contains(c)).collect();
    let mut fired = false;

    let non_approvers = |j: usize, a: ValueIdx| -> Vec<VoterIdx> {
        (0..election.n()).filter(|&v| !election.approves(v, j, a)).collect()
    };
    if let Some((c, j, a, pool)) = pick_target(&mut rng, election, &winners, non_approvers) {
        fired = true;
        let voters = random_nonempty_subset(&mut rng, &pool);
        let after = select(rule, &perturb(election, j, a, &voters, true), opts)?.committee;
        if !after.contains(c) {
            return Ok(Verdict::violated(Witness::Monotonicity { condition: 1, candidate: c, dimension: j, value: a, voters, before, after }));
        }
    }

    let approvers = |j: usize, a: ValueIdx| -> Vec<VoterIdx> { election.approvers(j, a).to_vec() };
    if let Some((c, j, a, pool)) = pick_target(&mut rng, election, &losers, approvers) {
        fired = true;
        let voters = random_nonempty_subset(&mut rng, &pool);
        let after = select(rule, &perturb(election, j, a, &voters, false), opts)?.committee;
        if after.contains(c) {
            return Ok(Verdict::violated(Witness::Monotonicity { condition: 2, candidate: c, dimension: j, value: a, voters, before, after }));
        }
    }
    Ok(if fired { Verdict::holds() } else { Verdict::vacuous() })
}

pub fn check_committee_monotonicity(rule: RuleId, election: &Election, k_max: usize, opts: &SelectOptions) -> Result<Verdict, BudgetError> {
    let k_max = k_max.min(election.m());
    let mut prev: Option<Committee> = None;
    for k in 1..=k_max {
        let current = select(rule, &election.with_k(k).expect("1 <= k <= m"), opts)?.committee;
        if let Some(smaller) = prev {
            if !smaller.is_subset(&current) {
                return Ok(Verdict::violated(Witness::CommitteeMonotonicity { k: k - 1, smaller, larger: current }));
            }
        }
        prev = Some(current);
    }
    Ok(Verdict::holds())
}

/// Re-runs the scenario a rule-level witness describes and confirms the
/// violation is real. Committee-level witnesses are checked against `w`
/// through [`witness_is_genuine`] instead.
pub fn revalidate(rule: RuleId, election: &Election, witness: &Witness, opts: &SelectOptions) -> Result<bool, AxiomError> {
    Ok(match witness {
        Witness::Homogeneity { replication, original, replicated } => {
            let a = select(rule, election, opts)?.committee;
            let b = select(rule, &replicate(election, *replication), opts)?.committee;
            a == *original && b == *replicated && a != b
        }
        Witness::Consistency { other, committee, union_committee } => {
            let other = Election::from_file(other)?;
            let w1 = select(rule, election, opts)?.committee;
            let w2 = select(rule, &other, opts)?.committee;
            let joint = select(rule, &union(election, &other)?, opts)?.committee;
            w1 == *committee && w2 == *committee && joint == *union_committee && joint != w1
        }
        Witness::Monotonicity { condition, candidate, dimension, value, voters, before, after } => {
            let base = select(rule, election, opts)?.committee;
            let add = *condition == 1;
            if base != *before || base.contains(*candidate) != add || election.candidate(*candidate).attributes[*dimension] != *value {
                return Ok(false);
            }
            let eligible = voters.iter().all(|&v| election.approves(v, *dimension, *value) != add);
            let moved = select(rule, &perturb(election, *dimension, *value, voters, add), opts)?.committee;
            eligible && !voters.is_empty() && moved == *after && moved.contains(*candidate) != add
        }
        Witness::CommitteeMonotonicity { k, smaller, larger } => {
            let a = select(rule, &election.with_k(*k)?, opts)?.committee;
            let b = select(rule, &election.with_k(*k + 1)?, opts)?.committee;
            a == *smaller && b == *larger && !a.is_subset(&b)
        }
        Witness::UncoveredDimension { .. } | Witness::UnrepresentedGroup { .. } => false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    Simple,
    Compound,
}

/// Independently confirms a justified-representation witness: the group
/// meets the threshold, shares the named value, and is unrepresented.
pub fn witness_is_genuine(election: &Election, w: &Committee, witness: &Witness, kind: Representation) -> bool {
    let Witness::UnrepresentedGroup { dimension, value, voters } = witness else {
        return false;
    };
    let masks = w.value_masks(election);
    let unrepresented_on = |v: VoterIdx, j: usize| election.ballot(v).approvals[j].iter().all(|&a| !masks[j][a]);
    meets_group_threshold(voters.len(), election)
        && voters.iter().all(|&v| election.approves(v, *dimension, *value))
        && voters.iter().all(|&v| match kind {
            Representation::Simple => (0..election.d()).all(|j| unrepresented_on(v, j)),
            Representation::Compound => unrepresented_on(v, *dimension),
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Homogeneity,
    Consistency,
    Monotonicity,
    CommitteeMonotonicity,
}

impl Property {
    pub const ALL: [Property; 4] = [Property::Homogeneity, Property::Consistency, Property::Monotonicity, Property::CommitteeMonotonicity];
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub trial: usize,
    pub election: ElectionFile,
    pub witness: Witness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyTally {
    pub property: Property,
    pub checked: usize,
    pub vacuous: usize,
    pub violations: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub rule: RuleId,
    pub trials: usize,
    pub seed: u64,
    pub k_max: usize,
    pub properties: Vec<PropertyTally>,
}

impl AxiomReport {
    pub fn tally(&self, p: Property) -> &PropertyTally {
        self.properties.iter().find(|t| t.property == p).expect("every property is tallied")
    }
}

/// Stateless 64-bit mixer used to derive per-trial seeds from a master seed.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The random election used by harness trial `seed`: at most 10 voters,
/// 3 to 6 candidates, 1 to 3 dimensions.
pub fn trial_election(seed: u64, k_max: usize) -> Election {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let candidates = rng.gen_range(3..=6);
    let params = GeneratorParams {
        seed: rng.gen(),
        voters: rng.gen_range(2..=10),
        candidates,
        dims: rng.gen_range(1..=3),
        domain_size: rng.gen_range(2..=4),
        approval_prob: rng.gen_range(0.2..0.7),
        k: rng.gen_range(1..=k_max.clamp(1, candidates)),
        ..Default::default()
    };
    instances::generate_random(&params).expect("trial parameters are valid")
}

/// Bootstrap resample of the electorate with fresh voter ids.
fn resample(election: &Election, seed: u64) -> Election {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = election.n();
    let ballots = (0..n)
        .map(|i| {
            let b = &election.ballots()[rng.gen_range(0..n)];
            Ballot::new(format!("w{}", i + 1), b.approvals.clone())
        })
        .collect();
    election.with_ballots(ballots).expect("resampled ballots stay valid")
}

struct TrialOutcome {
    verdicts: Vec<(Property, Verdict)>,
    election: Election,
}

fn run_trial(rule: RuleId, trial: usize, master: u64, k_max: usize, opts: &SelectOptions) -> Result<TrialOutcome, AxiomError> {
    let seed = derive_seed(master, trial as u64);
    let election = trial_election(seed, k_max);
    let r = 2 + (seed % 2) as usize;
    let other = resample(&election, derive_seed(seed, 1));
    let verdicts = vec![
        (Property::Homogeneity, check_homogeneity(rule, &election, r, opts)?),
        (Property::Consistency, check_consistency(rule, &election, &other, opts)?),
        (Property::Monotonicity, check_monotonicity(rule, &election, derive_seed(seed, 2), opts)?),
        (Property::CommitteeMonotonicity, check_committee_monotonicity(rule, &election, k_max, opts)?),
    ];
    Ok(TrialOutcome { verdicts, election })
}

/// Runs `trials` seeded trials of every rule-level property. Trials run in
/// parallel; the report is independent of scheduling.
pub fn run_axiom_suite(rule: RuleId, trials: usize, seed: u64, k_max: usize, opts: &SelectOptions) -> Result<AxiomReport, AxiomError> {
    let outcomes: Vec<TrialOutcome> = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(rule, t, seed, k_max, opts))
        .collect::<Result<_, _>>()?;
    let mut properties: Vec<PropertyTally> = Property::ALL
        .iter()
        .map(|&property| PropertyTally { property, checked: 0, vacuous: 0, violations: 0, counterexample: None })
        .collect();
    for (trial, outcome) in outcomes.iter().enumerate() {
        for (property, verdict) in &outcome.verdicts {
            let tally = properties.iter_mut().find(|t| t.property == *property).unwrap();
            tally.checked += 1;
            if verdict.vacuous {
                tally.vacuous += 1;
            }
            if let Some(witness) = &verdict.witness {
                tally.violations += 1;
                if tally.counterexample.is_none() {
                    tally.counterexample = Some(Counterexample { trial, election: outcome.election.to_file(), witness: witness.clone() });
                }
            }
        }
    }
    Ok(AxiomReport { rule, trials, seed, k_max, properties })
}
