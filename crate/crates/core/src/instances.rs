//! Fixed counterexample constructions and a seeded random generator.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Ballot, Candidate, Dimension, DomainSpec, Election, ModelError};

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("{construction}: {constraint}")]
    Regime { construction: &'static str, constraint: String },
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Lemma {
    L1,
    L2,
    L3,
    L4a,
    L4b,
    L5,
    L6,
}

impl Lemma {
    pub const ALL: [Lemma; 7] = [Lemma::L1, Lemma::L2, Lemma::L3, Lemma::L4a, Lemma::L4b, Lemma::L5, Lemma::L6];

    pub fn name(self) -> &'static str {
        match self {
            Lemma::L1 => "l1",
            Lemma::L2 => "l2",
            Lemma::L3 => "l3",
            Lemma::L4a => "l4a",
            Lemma::L4b => "l4b",
            Lemma::L5 => "l5",
            Lemma::L6 => "l6",
        }
    }
}

impl std::str::FromStr for Lemma {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Lemma::ALL
            .into_iter()
            .find(|l| l.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown lemma {s:?}"))
    }
}

/// Overrides for the parameterized constructions. `None` means the default
/// size of that construction.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LemmaParams {
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub k: Option<usize>,
    pub d: Option<usize>,
}

/// Value `i` (1-based) of dimension `j`: `a1, a2, ...` on the first
/// dimension, `b1, ...` on the second, and so on.
pub fn value_name(j: usize, i: usize) -> String {
    if j < 26 {
        format!("{}{}", (b'a' + j as u8) as char, i)
    } else {
        format!("x{}_{}", j + 1, i)
    }
}

pub fn dimension_name(j: usize) -> String {
    format!("D{}", j + 1)
}

/// Builds an election in which candidate `c` holds its own value `c + 1` on
/// every dimension. `approvers[c][j]` lists 1-based voter numbers approving
/// that value.
pub fn private_values(n: usize, k: usize, approvers: &[Vec<Vec<usize>>]) -> Result<Election, ModelError> {
    let m = approvers.len();
    let d = approvers.first().map_or(0, Vec::len);
    let dims = (0..d)
        .map(|j| Dimension::new(dimension_name(j), (1..=m).map(|i| value_name(j, i)).collect()))
        .collect();
    let domain = DomainSpec::new(dims)?;
    let candidates = (0..m).map(|c| Candidate { id: format!("c{}", c + 1), attributes: vec![c; d] }).collect();
    let mut sets = vec![vec![Vec::new(); d]; n];
    for (c, per_dim) in approvers.iter().enumerate() {
        for (j, voters) in per_dim.iter().enumerate() {
            for &v in voters {
                sets[v - 1][j].push(c);
            }
        }
    }
    let ballots = sets.into_iter().enumerate().map(|(v, s)| Ballot::new(format!("v{}", v + 1), s)).collect();
    Election::new(domain, candidates, ballots, k)
}

fn range(lo: usize, hi: usize) -> Vec<usize> {
    (lo..=hi).collect()
}

fn regime(construction: &'static str, constraint: impl Into<String>) -> InstanceError {
    InstanceError::Regime { construction, constraint: constraint.into() }
}

/// Rejects an override of a size the construction fixes.
fn fixed(construction: &'static str, what: &str, given: Option<usize>, value: usize) -> Result<(), InstanceError> {
    match given {
        Some(x) if x != value => Err(regime(construction, format!("{what} is fixed at {value}"))),
        _ => Ok(()),
    }
}

/// The two-candidate, four-voter example used throughout the docs:
/// v1, v2 approve `{a1}, {b1}`; v3 approves `{a2}, {b2}`; v4 approves
/// everything; `c1 = [a1, b1]`, `c2 = [a2, b2]`, `k = 1`.
pub fn e0() -> Election {
    private_values(4, 1, &[vec![vec![1, 2, 4], vec![1, 2, 4]], vec![vec![3, 4], vec![3, 4]]]).expect("E0 is valid")
}

pub fn lemma_instance(which: Lemma, params: &LemmaParams) -> Result<Election, InstanceError> {
    match which {
        Lemma::L1 => lemma1(params),
        Lemma::L2 => lemma2(params),
        Lemma::L3 => lemma3(params),
        Lemma::L4a => lemma4a(params),
        Lemma::L4b => lemma4b(params),
        Lemma::L5 => lemma5(params),
        Lemma::L6 => lemma6(params),
    }
}

/// `V_{a1} = V_{b2} = V`, `V_{a2} = V_{b1} = {v1}`, `k = 1`.
fn lemma1(p: &LemmaParams) -> Result<Election, InstanceError> {
    const L: &str = "l1";
    fixed(L, "m", p.m, 2)?;
    fixed(L, "d", p.d, 2)?;
    let n = p.n.unwrap_or(3);
    let k = p.k.unwrap_or(1);
    if n == 0 {
        return Err(regime(L, "needs n >= 1"));
    }
    if k >= 2 {
        return Err(regime(L, "needs k < d = 2"));
    }
    let all = range(1, n);
    Ok(private_values(n, k, &[vec![all.clone(), vec![1]], vec![vec![1], all]])?)
}

/// `V_{c1[1]} = V`, `V_{c1[j]} = {v1}` for `j >= 2`; candidates `2..=⌊m/2⌋`
/// are approved by `X¹ = V \ {v_n}` and the rest by `X² = V \ {v_1}` on
/// every dimension.
fn lemma2(p: &LemmaParams) -> Result<Election, InstanceError> {
    const L: &str = "l2";
    let n = p.n.unwrap_or(4);
    let m = p.m.unwrap_or(4);
    let d = p.d.unwrap_or(2);
    let k = p.k.unwrap_or(1);
    if d < 2 {
        return Err(regime(L, "needs d > 1"));
    }
    if m < 3 {
        return Err(regime(L, "needs m >= 3"));
    }
    if n < 4 {
        return Err(regime(L, "needs n >= 4 so that c1 is not the AV winner"));
    }
    if k == 0 || k >= m {
        return Err(regime(L, "needs 1 <= k < m"));
    }
    let x1 = range(1, n - 1);
    let x2 = range(2, n);
    let mut approvers = vec![std::iter::once(range(1, n)).chain(std::iter::repeat_n(vec![1], d - 1)).collect::<Vec<_>>()];
    for i in 2..=m {
        let x = if i <= m / 2 { &x1 } else { &x2 };
        approvers.push(vec![x.clone(); d]);
    }
    Ok(private_values(n, k, &approvers)?)
}

/// `c1..ck` approved by `X¹ = v1..v_{n-n/k}` everywhere; `c_{k+1}` is
/// approved by `X²` (the last `n/k` voters) on the first `⌊d/2⌋` dimensions
/// and by `v_n` on the rest; `c_{k+2}` the other way round.
fn lemma3(p: &LemmaParams) -> Result<Election, InstanceError> {
    const L: &str = "l3";
    let k = p.k.unwrap_or(2);
    let d = p.d.unwrap_or(2);
    let n = p.n.unwrap_or(3 * k);
    fixed(L, "m", p.m, k + 2)?;
    if k < 2 || d < 2 {
        return Err(regime(L, "needs k >= 2 and d >= 2"));
    }
    if !n.is_multiple_of(k) || n < 2 * k {
        return Err(regime(L, "needs n a multiple of k with n >= 2k"));
    }
    let bloc = n / k;
    let x1 = range(1, n - bloc);
    let x2 = range(n - bloc + 1, n);
    let half = d / 2;
    let mut approvers: Vec<Vec<Vec<usize>>> = (0..k).map(|_| vec![x1.clone(); d]).collect();
    approvers.push((0..d).map(|j| if j < half { x2.clone() } else { vec![n] }).collect());
    approvers.push((0..d).map(|j| if j < half { vec![n] } else { x2.clone() }).collect());
    Ok(private_values(n, k, &approvers)?)
}

/// `n = 90, d = 2, k = 3`, extended by one candidate and 30 fresh voters per
/// seat beyond three.
fn lemma4a(p: &LemmaParams) -> Result<Election, InstanceError> {
    const L: &str = "l4a";
    let k = p.k.unwrap_or(3);
    if k < 3 {
        return Err(regime(L, "the first construction needs k >= 3"));
    }
    fixed(L, "d", p.d, 2)?;
    fixed(L, "n", p.n, 30 * k)?;
    fixed(L, "m", p.m, k + 2)?;
    let mut approvers = vec![
        vec![range(1, 35); 2],
        vec![range(21, 55); 2],
        vec![range(26, 50); 2],
        vec![range(1, 1), range(61, 90)],
        vec![range(61, 90), range(1, 2)],
    ];
    for t in 0..k - 3 {
        let fresh = range(91 + 30 * t, 120 + 30 * t);
        approvers.push(vec![fresh; 2]);
    }
    Ok(private_values(30 * k, k, &approvers)?)
}

/// `k = 2, d >= 3, n = 60`: c1 and c2 approved by v1..v30 everywhere, c3 by
/// v31..v60 on the first dimension and by v1 alone on the others.
fn lemma4b(p: &LemmaParams) -> Result<Election, InstanceError> {
    const L: &str = "l4b";
    let d = p.d.unwrap_or(3);
    if d < 3 {
        return Err(regime(L, "the second construction needs d >= 3"));
    }
    fixed(L, "k", p.k, 2)?;
    fixed(L, "n", p.n, 60)?;
    fixed(L, "m", p.m, 3)?;
    let c3 = std::iter::once(range(31, 60)).chain(std::iter::repeat_n(vec![1], d - 1)).collect();
    Ok(private_values(60, 2, &[vec![range(1, 30); d], vec![range(1, 30); d], c3])?)
}

/// Single-dimension base for the replicated construction: entry `v` lists
/// the 1-based candidates voter `v + 1` approves, `k = 2`. Both capped SAV
/// and MAV elect a committee missing the bloc {v2, v4} (which shares c6);
/// both outcomes rest on lexicographic tie-breaking.
pub const LEMMA5_BASE: &[&[usize]] = &[&[3, 4, 5], &[6, 7], &[1, 2, 3, 4, 7], &[5, 6]];
pub const LEMMA5_CANDIDATES: usize = 7;

/// A base on which MAV alone fails, with a unique optimum {c1, c6} that
/// misses the bloc {v2, v3} sharing c5.
pub const LEMMA5_MAV_STRICT_BASE: &[&[usize]] = &[&[1, 2, 5, 6], &[5], &[5], &[1, 3, 4, 6]];
pub const LEMMA5_MAV_STRICT_CANDIDATES: usize = 6;

/// Copies a one-dimensional ballot profile onto `d` dimensions; candidate
/// `c` holds its own value on each.
pub fn replicated(base: &[&[usize]], m: usize, k: usize, d: usize) -> Result<Election, ModelError> {
    let approvers: Vec<Vec<Vec<usize>>> = (1..=m)
        .map(|c| {
            let voters: Vec<usize> = (0..base.len()).filter(|&v| base[v].contains(&c)).map(|v| v + 1).collect();
            vec![voters; d]
        })
        .collect();
    private_values(base.len(), k, &approvers)
}

/// A `d = 1` justified-representation counterexample copied onto every
/// dimension.
fn lemma5(p: &LemmaParams) -> Result<Election, InstanceError> {
    const L: &str = "l5";
    let d = p.d.unwrap_or(2);
    if d == 0 {
        return Err(regime(L, "needs d >= 1"));
    }
    fixed(L, "k", p.k, 2)?;
    fixed(L, "n", p.n, LEMMA5_BASE.len())?;
    fixed(L, "m", p.m, LEMMA5_CANDIDATES)?;
    Ok(replicated(LEMMA5_BASE, LEMMA5_CANDIDATES, 2, d)?)
}

/// The strict MAV companion of the replicated construction.
pub fn lemma5_mav_strict(d: usize) -> Result<Election, InstanceError> {
    if d == 0 {
        return Err(regime("l5", "needs d >= 1"));
    }
    Ok(replicated(LEMMA5_MAV_STRICT_BASE, LEMMA5_MAV_STRICT_CANDIDATES, 2, d)?)
}

/// Six candidates `c_i = [a_i, b_i]`, six voters, `k = 3`.
fn lemma6(p: &LemmaParams) -> Result<Election, InstanceError> {
    const L: &str = "l6";
    fixed(L, "n", p.n, 6)?;
    fixed(L, "m", p.m, 6)?;
    fixed(L, "d", p.d, 2)?;
    fixed(L, "k", p.k, 3)?;
    let one = vec![1];
    Ok(private_values(
        6,
        3,
        &[
            vec![vec![1, 2], one.clone()],
            vec![vec![3, 4], one.clone()],
            vec![vec![5, 6], one.clone()],
            vec![one.clone(), vec![1, 2]],
            vec![one.clone(), vec![3, 4]],
            vec![one, vec![5, 6]],
        ],
    )?)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Plant {
    #[default]
    None,
    /// One held value added to every ballot.
    Unanimous,
    /// One held value per dimension added to every ballot.
    UnanimousEveryDimension,
    /// `⌈n/k⌉` voters reduced to approving a single shared held value.
    Bloc,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorParams {
    pub seed: u64,
    pub voters: usize,
    pub candidates: usize,
    pub dims: usize,
    pub domain_size: usize,
    pub approval_prob: f64,
    pub k: usize,
    pub plant: Plant,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        GeneratorParams { seed: 0, voters: 10, candidates: 5, dims: 2, domain_size: 3, approval_prob: 0.3, k: 2, plant: Plant::None }
    }
}

impl GeneratorParams {
    pub fn check(&self) -> Result<(), InstanceError> {
        let bad = |msg: &str| Err(InstanceError::InvalidParams(msg.into()));
        if self.voters == 0 || self.candidates == 0 || self.dims == 0 || self.domain_size == 0 {
            return bad("voters, candidates, dims and domain size must be positive");
        }
        if !(0.0..=1.0).contains(&self.approval_prob) {
            return bad("approval probability must lie in [0, 1]");
        }
        if self.k == 0 || self.k > self.candidates {
            return bad("k must satisfy 1 <= k <= candidates");
        }
        Ok(())
    }
}

/// Random election. Candidates are drawn uniformly from the attribute
/// product, each domain is then cut down to the values some candidate holds,
/// and every voter approves each remaining value independently with the
/// given probability. Planting happens last.
pub fn generate_random(params: &GeneratorParams) -> Result<Election, InstanceError> {
    params.check()?;
    let GeneratorParams { voters: n, candidates: m, dims: d, domain_size: s, approval_prob: p, k, .. } = *params;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let raw: Vec<Vec<usize>> = (0..m).map(|_| (0..d).map(|_| rng.gen_range(0..s)).collect()).collect();
    // remap[j][a] = pruned index of raw value a
    let mut remap = vec![vec![usize::MAX; s]; d];
    let mut dims = Vec::with_capacity(d);
    for (j, remap) in remap.iter_mut().enumerate() {
        let mut names = Vec::new();
        for (a, slot) in remap.iter_mut().enumerate() {
            if raw.iter().any(|c| c[j] == a) {
                *slot = names.len();
                names.push(value_name(j, a + 1));
            }
        }
        dims.push(Dimension::new(dimension_name(j), names));
    }
    let sizes: Vec<usize> = dims.iter().map(Dimension::len).collect();
    let candidates: Vec<Candidate> = raw
        .iter()
        .enumerate()
        .map(|(c, attrs)| Candidate { id: format!("c{}", c + 1), attributes: attrs.iter().enumerate().map(|(j, &a)| remap[j][a]).collect() })
        .collect();

    let mut approvals: Vec<Vec<Vec<usize>>> = (0..n)
        .map(|_| sizes.iter().map(|&size| (0..size).filter(|_| rng.gen_bool(p)).collect()).collect())
        .collect();

    let add = |set: &mut Vec<usize>, a: usize| {
        if let Err(pos) = set.binary_search(&a) {
            set.insert(pos, a);
        }
    };
    match params.plant {
        Plant::None => {}
        Plant::Unanimous => {
            let c = rng.gen_range(0..m);
            let j = rng.gen_range(0..d);
            let a = candidates[c].attributes[j];
            approvals.iter_mut().for_each(|b| add(&mut b[j], a));
        }
        Plant::UnanimousEveryDimension => {
            for j in 0..d {
                let a = candidates[rng.gen_range(0..m)].attributes[j];
                approvals.iter_mut().for_each(|b| add(&mut b[j], a));
            }
        }
        Plant::Bloc => {
            let c = rng.gen_range(0..m);
            let j = rng.gen_range(0..d);
            let a = candidates[c].attributes[j];
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            for &v in &order[..n.div_ceil(k)] {
                approvals[v] = vec![Vec::new(); d];
                approvals[v][j].push(a);
            }
        }
    }

    let ballots = approvals.into_iter().enumerate().map(|(v, a)| Ballot::new(format!("v{}", v + 1), a)).collect();
    Ok(Election::new(DomainSpec::new(dims)?, candidates, ballots, k)?)
}

/// Set-cover instance shipped with the fixtures: three elements, three
/// subsets, budget two.
pub fn setcover_example() -> crate::solvers::SetCoverInstance {
    crate::solvers::SetCoverInstance { universe: 3, subsets: vec![vec![1, 2], vec![2, 3], vec![3]], budget: 2 }
}

/// Every checked-in fixture as `(file name, contents)`, in a fixed order.
/// Elections use the canonical serialization.
pub fn fixtures() -> Vec<(String, String)> {
    let mut out = vec![("e0.json".to_string(), e0().to_file().to_json())];
    for which in Lemma::ALL {
        let e = lemma_instance(which, &LemmaParams::default()).expect("default lemma parameters are valid");
        out.push((format!("{}.json", which.name()), e.to_file().to_json()));
    }
    let strict = lemma5_mav_strict(2).expect("d = 2 is valid");
    out.push(("l5-mav-strict.json".into(), strict.to_file().to_json()));
    let sc = setcover_example();
    out.push(("setcover3.json".into(), sc.to_json()));
    let cjr = crate::solvers::reduce_setcover_to_cjr(&sc, 2).expect("k = 2 is in range");
    out.push(("setcover3.cjr.json".into(), cjr.to_file().to_json()));
    let (jav, _) = crate::solvers::reduce_setcover_to_max_av_justified(&sc, 2, 2).expect("k = d = 2 is in range");
    out.push(("setcover3.max-av-justified.json".into(), jav.to_file().to_json()));
    out
}
