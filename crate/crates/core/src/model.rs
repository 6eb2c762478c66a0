//! Attribute-approval elections.
//!
//! Every candidate carries one value per dimension, and every voter approves
//! a subset of each dimension's domain. Internally values, candidates and voters are addressed by
//! position: value `a` on dimension `j` is `domain.values(j)[a]`, and
//! candidate / voter indices follow input order. Those indices are also the
//! tie-breaking order used everywhere in the crate.
//!
//! Attribute values are scoped to their dimension: `"x"` on dimension 0 and
//! `"x"` on dimension 1 are unrelated attributes.

use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use crate::score::Score;

pub type CandidateIdx = usize;
pub type VoterIdx = usize;
pub type ValueIdx = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("election has no dimensions")]
    NoDimensions,
    #[error("dimension {dimension} has an empty domain")]
    EmptyDomain { dimension: usize },
    #[error("dimension {dimension} lists value {value:?} twice")]
    DuplicateValue { dimension: usize, value: String },
    #[error("election has no candidates")]
    NoCandidates,
    #[error("election has no voters")]
    NoVoters,
    #[error("duplicate candidate id {0:?}")]
    DuplicateCandidate(String),
    #[error("duplicate voter id {0:?}")]
    DuplicateVoter(String),
    #[error("candidate {candidate:?} has {found} attributes, expected {expected}")]
    AttributeArity { candidate: String, expected: usize, found: usize },
    #[error("candidate {candidate:?} has value {value:?} outside the domain of dimension {dimension}")]
    UnknownAttribute { candidate: String, dimension: usize, value: String },
    #[error("voter {voter:?} has {found} approval sets, expected {expected}")]
    ApprovalArity { voter: String, expected: usize, found: usize },
    #[error("out-of-domain approval: voter {voter:?} approves {value:?} on dimension {dimension}")]
    OutOfDomainApproval { voter: String, dimension: usize, value: String },
    #[error("voter {voter:?} approves {value:?} twice on dimension {dimension}")]
    DuplicateApproval { voter: String, dimension: usize, value: String },
    #[error("k out of range: k = {k}, must satisfy 1 <= k <= m = {m}")]
    KOutOfRange { k: usize, m: usize },
    #[error("unknown candidate {0:?}")]
    UnknownCandidate(String),
    #[error("dimension {dimension} has no value {value:?}")]
    UnknownValue { dimension: usize, value: String },
    #[error("dimension index {0} out of range")]
    UnknownDimension(usize),
    #[error("committee has {found} members, expected k = {expected}")]
    CommitteeSize { expected: usize, found: usize },
    #[error("committee lists candidate {0:?} twice")]
    DuplicateMember(String),
}

/// One attribute slot of every candidate: a name and its ordered domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dimension {
    name: String,
    values: Vec<String>,
    index: HashMap<String, ValueIdx>,
}

impl Dimension {
    pub fn new(name: impl Into<String>, values: Vec<String>) -> Self {
        let index = values
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        Dimension { name: name.into(), values, index }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn values(&self) -> &[String] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value_index(&self, value: &str) -> Option<ValueIdx> {
        self.index.get(value).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainSpec {
    dimensions: Vec<Dimension>,
}

impl DomainSpec {
    pub fn new(dimensions: Vec<Dimension>) -> Result<Self, ModelError> {
        if dimensions.is_empty() {
            return Err(ModelError::NoDimensions);
        }
        for (j, dim) in dimensions.iter().enumerate() {
            if dim.values.is_empty() {
                return Err(ModelError::EmptyDomain { dimension: j });
            }
            if dim.index.len() != dim.values.len() {
                let mut seen = HashSet::new();
                let dup = dim.values.iter().find(|v| !seen.insert(*v)).unwrap();
                return Err(ModelError::DuplicateValue { dimension: j, value: dup.clone() });
            }
        }
        Ok(DomainSpec { dimensions })
    }

    pub fn dimension_count(&self) -> usize {
        self.dimensions.len()
    }

    pub fn dimension(&self, j: usize) -> &Dimension {
        &self.dimensions[j]
    }

    pub fn dimensions(&self) -> &[Dimension] {
        &self.dimensions
    }

    /// `|D^j|`.
    pub fn domain_size(&self, j: usize) -> usize {
        self.dimensions[j].len()
    }

    /// Total number of distinct attributes `n_a = Σ_j |D^j|`.
    pub fn attribute_count(&self) -> usize {
        self.dimensions.iter().map(Dimension::len).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub id: String,
    /// One value index per dimension.
    pub attributes: Vec<ValueIdx>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ballot {
    pub id: String,
    /// `approvals[j]` is the sorted set of approved value indices on dimension `j`.
    pub approvals: Vec<Vec<ValueIdx>>,
}

impl Ballot {
    /// Builds a ballot, sorting each approval set. Duplicates are kept so that
    /// validation can report them.
    pub fn new(id: impl Into<String>, mut approvals: Vec<Vec<ValueIdx>>) -> Self {
        for set in &mut approvals {
            set.sort_unstable();
        }
        Ballot { id: id.into(), approvals }
    }

    pub fn approves(&self, j: usize, value: ValueIdx) -> bool {
        self.approvals[j].binary_search(&value).is_ok()
    }

    /// `Σ_j |C_i^j|`.
    pub fn approval_count(&self) -> usize {
        self.approvals.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.approvals.iter().all(Vec::is_empty)
    }
}

/// A validated election. All invariants hold for every value of this type.
#[derive(Debug, Clone)]
pub struct Election {
    domain: DomainSpec,
    candidates: Vec<Candidate>,
    ballots: Vec<Ballot>,
    k: usize,
    approvers: OnceLock<Vec<Vec<Vec<VoterIdx>>>>,
}

impl PartialEq for Election {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k
            && self.domain == other.domain
            && self.candidates == other.candidates
            && self.ballots == other.ballots
    }
}

impl Eq for Election {}

impl Election {
    pub fn new(
        domain: DomainSpec,
        candidates: Vec<Candidate>,
        ballots: Vec<Ballot>,
        k: usize,
    ) -> Result<Self, ModelError> {
        let d = domain.dimension_count();
        if candidates.is_empty() {
            return Err(ModelError::NoCandidates);
        }
        if ballots.is_empty() {
            return Err(ModelError::NoVoters);
        }
        let mut ids = HashSet::new();
        for c in &candidates {
            if !ids.insert(c.id.as_str()) {
                return Err(ModelError::DuplicateCandidate(c.id.clone()));
            }
            if c.attributes.len() != d {
                return Err(ModelError::AttributeArity {
                    candidate: c.id.clone(),
                    expected: d,
                    found: c.attributes.len(),
                });
            }
            for (j, &a) in c.attributes.iter().enumerate() {
                if a >= domain.domain_size(j) {
                    return Err(ModelError::UnknownAttribute {
                        candidate: c.id.clone(),
                        dimension: j,
                        value: format!("#{a}"),
                    });
                }
            }
        }
        let mut ids = HashSet::new();
        for b in &ballots {
            if !ids.insert(b.id.as_str()) {
                return Err(ModelError::DuplicateVoter(b.id.clone()));
            }
            if b.approvals.len() != d {
                return Err(ModelError::ApprovalArity {
                    voter: b.id.clone(),
                    expected: d,
                    found: b.approvals.len(),
                });
            }
            for (j, set) in b.approvals.iter().enumerate() {
                if let Some(&a) = set.iter().find(|&&a| a >= domain.domain_size(j)) {
                    return Err(ModelError::OutOfDomainApproval {
                        voter: b.id.clone(),
                        dimension: j,
                        value: format!("#{a}"),
                    });
                }
                if let Some(w) = set.windows(2).find(|w| w[0] >= w[1]) {
                    return Err(ModelError::DuplicateApproval {
                        voter: b.id.clone(),
                        dimension: j,
                        value: domain.dimension(j).values()[w[0]].clone(),
                    });
                }
            }
        }
        if k == 0 || k > candidates.len() {
            return Err(ModelError::KOutOfRange { k, m: candidates.len() });
        }
        Ok(Election { domain, candidates, ballots, k, approvers: OnceLock::new() })
    }

    /// Parses and validates the serialized form.
    pub fn from_file(file: &ElectionFile) -> Result<Self, ModelError> {
        let dims = file
            .dimensions
            .iter()
            .map(|dim| Dimension::new(dim.name.clone(), dim.values.clone()))
            .collect();
        let domain = DomainSpec::new(dims)?;
        let d = domain.dimension_count();

        let mut candidates = Vec::with_capacity(file.candidates.len());
        for c in &file.candidates {
            if c.attributes.len() != d {
                return Err(ModelError::AttributeArity {
                    candidate: c.id.clone(),
                    expected: d,
                    found: c.attributes.len(),
                });
            }
            let attributes = c
                .attributes
                .iter()
                .enumerate()
                .map(|(j, v)| {
                    domain.dimension(j).value_index(v).ok_or_else(|| ModelError::UnknownAttribute {
                        candidate: c.id.clone(),
                        dimension: j,
                        value: v.clone(),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            candidates.push(Candidate { id: c.id.clone(), attributes });
        }

        let mut ballots = Vec::with_capacity(file.voters.len());
        for v in &file.voters {
            if v.approvals.len() != d {
                return Err(ModelError::ApprovalArity {
                    voter: v.id.clone(),
                    expected: d,
                    found: v.approvals.len(),
                });
            }
            let approvals = v
                .approvals
                .iter()
                .enumerate()
                .map(|(j, set)| {
                    set.iter()
                        .map(|value| {
                            domain.dimension(j).value_index(value).ok_or_else(|| {
                                ModelError::OutOfDomainApproval {
                                    voter: v.id.clone(),
                                    dimension: j,
                                    value: value.clone(),
                                }
                            })
                        })
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            ballots.push(Ballot::new(v.id.clone(), approvals));
        }
        Election::new(domain, candidates, ballots, file.k)
    }

    pub fn to_file(&self) -> ElectionFile {
        ElectionFile {
            k: self.k,
            dimensions: self
                .domain
                .dimensions
                .iter()
                .map(|d| DimensionFile { name: d.name.clone(), values: d.values.clone() })
                .collect(),
            candidates: self
                .candidates
                .iter()
                .map(|c| CandidateFile {
                    id: c.id.clone(),
                    attributes: c
                        .attributes
                        .iter()
                        .enumerate()
                        .map(|(j, &a)| self.value_name(j, a).to_string())
                        .collect(),
                })
                .collect(),
            voters: self
                .ballots
                .iter()
                .map(|b| VoterFile {
                    id: b.id.clone(),
                    approvals: b
                        .approvals
                        .iter()
                        .enumerate()
                        .map(|(j, set)| set.iter().map(|&a| self.value_name(j, a).to_string()).collect())
                        .collect(),
                })
                .collect(),
        }
    }

    /// Same candidates and domain, different ballots.
    pub fn with_ballots(&self, ballots: Vec<Ballot>) -> Result<Self, ModelError> {
        Election::new(self.domain.clone(), self.candidates.clone(), ballots, self.k)
    }

    /// Same ballots, different committee size.
    pub fn with_k(&self, k: usize) -> Result<Self, ModelError> {
        Election::new(self.domain.clone(), self.candidates.clone(), self.ballots.clone(), k)
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn candidates(&self) -> &[Candidate] {
        &self.candidates
    }

    pub fn candidate(&self, c: CandidateIdx) -> &Candidate {
        &self.candidates[c]
    }

    pub fn ballots(&self) -> &[Ballot] {
        &self.ballots
    }

    pub fn ballot(&self, v: VoterIdx) -> &Ballot {
        &self.ballots[v]
    }

    /// Number of voters.
    pub fn n(&self) -> usize {
        self.ballots.len()
    }

    /// Number of candidates.
    pub fn m(&self) -> usize {
        self.candidates.len()
    }

    /// Number of dimensions.
    pub fn d(&self) -> usize {
        self.domain.dimension_count()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn value_name(&self, j: usize, a: ValueIdx) -> &str {
        &self.domain.dimensions[j].values[a]
    }

    pub fn candidate_index(&self, id: &str) -> Option<CandidateIdx> {
        self.candidates.iter().position(|c| c.id == id)
    }

    pub fn voter_index(&self, id: &str) -> Option<VoterIdx> {
        self.ballots.iter().position(|b| b.id == id)
    }

    pub fn approves(&self, v: VoterIdx, j: usize, a: ValueIdx) -> bool {
        self.ballots[v].approves(j, a)
    }

    /// Number of dimensions on which voter `v` approves candidate `c`'s value.
    pub fn matches(&self, v: VoterIdx, c: CandidateIdx) -> usize {
        let ballot = &self.ballots[v];
        self.candidates[c]
            .attributes
            .iter()
            .enumerate()
            .filter(|&(j, &a)| ballot.approves(j, a))
            .count()
    }

    fn approver_index(&self) -> &Vec<Vec<Vec<VoterIdx>>> {
        self.approvers.get_or_init(|| {
            let mut idx: Vec<Vec<Vec<VoterIdx>>> = self
                .domain
                .dimensions
                .iter()
                .map(|dim| vec![Vec::new(); dim.len()])
                .collect();
            for (v, b) in self.ballots.iter().enumerate() {
                for (j, set) in b.approvals.iter().enumerate() {
                    for &a in set {
                        idx[j][a].push(v);
                    }
                }
            }
            idx
        })
    }

    /// `V_a[j]`: voters approving value `a` on dimension `j`, in voter order.
    pub fn approvers(&self, j: usize, a: ValueIdx) -> &[VoterIdx] {
        &self.approver_index()[j][a]
    }

    /// `V_a[j]` looked up by value name.
    pub fn approver_set(&self, j: usize, value: &str) -> Result<&[VoterIdx], ModelError> {
        if j >= self.d() {
            return Err(ModelError::UnknownDimension(j));
        }
        let a = self.domain.dimension(j).value_index(value).ok_or_else(|| ModelError::UnknownValue {
            dimension: j,
            value: value.to_string(),
        })?;
        Ok(self.approvers(j, a))
    }

    /// Values on dimension `j` approved by every voter.
    pub fn unanimous_values(&self, j: usize) -> Vec<ValueIdx> {
        (0..self.domain.domain_size(j))
            .filter(|&a| self.approvers(j, a).len() == self.n())
            .collect()
    }

    /// Values on dimension `j` carried by at least one candidate (`C^j`).
    pub fn held_values(&self, j: usize) -> Vec<ValueIdx> {
        let mut held = vec![false; self.domain.domain_size(j)];
        for c in &self.candidates {
            held[c.attributes[j]] = true;
        }
        held.iter().enumerate().filter(|(_, &h)| h).map(|(a, _)| a).collect()
    }

    /// Resolves candidate ids into a committee of exactly `k` members.
    pub fn committee_from_ids<S: AsRef<str>>(&self, ids: &[S]) -> Result<Committee, ModelError> {
        let mut members = Vec::with_capacity(ids.len());
        for id in ids {
            let id = id.as_ref();
            let c = self
                .candidate_index(id)
                .ok_or_else(|| ModelError::UnknownCandidate(id.to_string()))?;
            if members.contains(&c) {
                return Err(ModelError::DuplicateMember(id.to_string()));
            }
            members.push(c);
        }
        let committee = Committee::new(members);
        self.validate_committee(&committee)?;
        Ok(committee)
    }

    /// Checks `|W| = k` and membership.
    pub fn validate_committee(&self, w: &Committee) -> Result<(), ModelError> {
        if let Some(&c) = w.members().iter().find(|&&c| c >= self.m()) {
            return Err(ModelError::UnknownCandidate(format!("#{c}")));
        }
        if w.len() != self.k {
            return Err(ModelError::CommitteeSize { expected: self.k, found: w.len() });
        }
        Ok(())
    }

    pub fn committee_ids(&self, w: &Committee) -> Vec<String> {
        w.members().iter().map(|&c| self.candidates[c].id.clone()).collect()
    }
}

/// Validates a serialized election, reporting the first violated invariant.
pub fn validate(file: &ElectionFile) -> Result<(), ModelError> {
    Election::from_file(file).map(|_| ())
}

/// `group_size >= n / k`, decided by cross-multiplication.
pub fn meets_group_threshold(group_size: usize, election: &Election) -> bool {
    (group_size as u128) * (election.k() as u128) >= election.n() as u128
}

/// A set of candidates, kept sorted. Partial committees (fewer than `k`
/// members) are allowed; [`Election::validate_committee`] enforces `|W| = k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Committee(Vec<CandidateIdx>);

impl Committee {
    /// Sorts and deduplicates `members`.
    pub fn new(mut members: Vec<CandidateIdx>) -> Self {
        members.sort_unstable();
        members.dedup();
        Committee(members)
    }

    pub fn empty() -> Self {
        Committee(Vec::new())
    }

    pub fn members(&self) -> &[CandidateIdx] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, c: CandidateIdx) -> bool {
        self.0.binary_search(&c).is_ok()
    }

    pub fn insert(&mut self, c: CandidateIdx) {
        if let Err(pos) = self.0.binary_search(&c) {
            self.0.insert(pos, c);
        }
    }

    pub fn is_subset(&self, other: &Committee) -> bool {
        self.0.iter().all(|&c| other.contains(c))
    }

    /// Membership masks for `W^j`, one per dimension.
    pub fn value_masks(&self, election: &Election) -> Vec<Vec<bool>> {
        let mut masks: Vec<Vec<bool>> = (0..election.d())
            .map(|j| vec![false; election.domain().domain_size(j)])
            .collect();
        for &c in &self.0 {
            for (j, &a) in election.candidate(c).attributes.iter().enumerate() {
                masks[j][a] = true;
            }
        }
        masks
    }

    /// `W^j` as a sorted list of value indices.
    pub fn values_on(&self, election: &Election, j: usize) -> Vec<ValueIdx> {
        let mut vals: Vec<ValueIdx> = self.0.iter().map(|&c| election.candidate(c).attributes[j]).collect();
        vals.sort_unstable();
        vals.dedup();
        vals
    }
}

impl FromIterator<CandidateIdx> for Committee {
    fn from_iter<I: IntoIterator<Item = CandidateIdx>>(iter: I) -> Self {
        Committee::new(iter.into_iter().collect())
    }
}

/// Serialized election (the on-disk JSON document).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElectionFile {
    pub k: usize,
    pub dimensions: Vec<DimensionFile>,
    pub candidates: Vec<CandidateFile>,
    pub voters: Vec<VoterFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DimensionFile {
    pub name: String,
    pub values: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CandidateFile {
    pub id: String,
    pub attributes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VoterFile {
    pub id: String,
    pub approvals: Vec<Vec<String>>,
}

impl ElectionFile {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Canonical serialization: pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("election serializes");
        s.push('\n');
        s
    }
}
