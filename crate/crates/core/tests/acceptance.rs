//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Tolerances and sizes are pinned below. The process exits 0 even when a
//! criterion fails so the remaining test targets still run; set
//! `ACCEPTANCE_STRICT=1` to turn any failure into a non-zero exit.

use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use attrvote::axioms::{
    check_cjr, check_sjr, check_strong_unanimity, check_weak_unanimity, check_committee_monotonicity, check_monotonicity,
    witness_is_genuine, Property, Representation, Witness,
};
use attrvote::cli::{execute, Cli, Payload};
use attrvote::gav::{gav_select, TieBreakMode};
use attrvote::instances::{generate_random, lemma_instance, private_values, GeneratorParams, Lemma, LemmaParams, Plant};
use attrvote::rules::{av_select, rav_select, sav_select};
use attrvote::solvers::{
    binomial, cjr_exists, enumerate_committees, justified_av_heuristic, max_av_justified, mav_exact, pav_exact,
    reduce_setcover_to_cjr, reduce_setcover_to_max_av_justified, solve_set_cover, Budget, SetCoverError,
    SetCoverInstance, DEFAULT_BUDGET,
};
use attrvote::{Committee, Election, RuleId, SelectOptions};
use clap::Parser;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LIMIT_C1: Duration = Duration::from_millis(1);
const LIMIT_C2: Duration = Duration::from_millis(10);
const LIMIT_C3: Duration = Duration::from_millis(10);
const LIMIT_C4: Duration = Duration::from_secs(1);
const LIMIT_C5: Duration = Duration::from_secs(1);
const LIMIT_C6: Duration = Duration::from_millis(10);
const LIMIT_C7: Duration = Duration::from_secs(60);
const LIMIT_C8: Duration = Duration::from_secs(60);
const LIMIT_C10: Duration = Duration::from_secs(300);

const C7_ELECTIONS: usize = 500;
const C8_ELECTIONS: usize = 1000;
const C11_TRIALS: usize = 200;
const C12_INSTANCES: usize = 200;
const C12_MAX_COMMITTEES: u128 = 10_000;

const C13_VOTERS: usize = 100_000;
const C13_CANDIDATES: usize = 1_000;
const C13_DIMS: usize = 5;
const C13_DOMAIN: usize = 20;
const C13_APPROVAL_PROB: f64 = 0.2;
const C13_LIMIT: Duration = Duration::from_secs(5);
const C13_RUNS: usize = 5;
/// Linear scaling predicts a doubling ratio of 2; ±50% allowed.
const C13_RATIO: (f64, f64) = (1.0, 3.0);

struct Line {
    pass: bool,
    detail: String,
    notes: Vec<String>,
}

impl Line {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Line { pass, detail: detail.into(), notes: Vec::new() }
    }
}

/// Running tally for the CJR-implies-SJR check across suites.
#[derive(Default)]
struct Pairs {
    checked: usize,
    violations: usize,
}

impl Pairs {
    fn record(&mut self, e: &Election, w: &Committee) {
        self.checked += 1;
        if check_cjr(e, w).holds && !check_sjr(e, w).holds {
            self.violations += 1;
        }
    }
}

fn ms(d: Duration) -> String {
    format!("{:.3} ms", d.as_secs_f64() * 1e3)
}

fn lemma(which: Lemma, params: LemmaParams) -> Election {
    lemma_instance(which, &params).unwrap()
}

fn ids(e: &Election, w: &Committee) -> String {
    format!("{{{}}}", e.committee_ids(w).join(","))
}

fn all_committees(e: &Election) -> Vec<Committee> {
    let mut out = Vec::new();
    enumerate_committees(e, Budget::new(DEFAULT_BUDGET), |c| {
        out.push(Committee::new(c.to_vec()));
        ControlFlow::Continue(())
    })
    .unwrap();
    out
}

fn witness_size(w: &Option<Witness>) -> Option<usize> {
    match w {
        Some(Witness::UnrepresentedGroup { voters, .. }) => Some(voters.len()),
        _ => None,
    }
}

fn c1(pairs: &mut Pairs) -> Line {
    let e = lemma(Lemma::L1, LemmaParams::default());
    let start = Instant::now();
    let passing = (0..e.m()).filter(|&c| check_strong_unanimity(&e, &Committee::new(vec![c])).holds).count();
    let t = start.elapsed();
    for w in all_committees(&e) {
        pairs.record(&e, &w);
    }
    Line::new(passing == 0 && t < LIMIT_C1, format!("{passing} of {} singleton committees strongly unanimous, {}", e.m(), ms(t)))
}

fn c2(pairs: &mut Pairs) -> Line {
    let e = lemma(Lemma::L2, LemmaParams { n: Some(4), m: Some(4), d: Some(2), k: Some(1) });
    let budget = Budget::new(DEFAULT_BUDGET);
    let start = Instant::now();
    let outputs = [
        ("av", av_select(&e).committee),
        ("sav", sav_select(&e, budget).unwrap().committee),
        ("rav", rav_select(&e).committee),
        ("pav", pav_exact(&e, budget).unwrap().committee),
        ("mav", mav_exact(&e, budget).unwrap().committee),
    ];
    let failing: Vec<bool> = outputs.iter().map(|(_, w)| !check_weak_unanimity(&e, w).holds).collect();
    let gav = gav_select(&e, TieBreakMode::ByIndex).committee;
    let gav_ok = check_weak_unanimity(&e, &gav).holds;
    let t = start.elapsed();
    for w in all_committees(&e) {
        pairs.record(&e, &w);
    }
    let summary: Vec<String> = outputs.iter().zip(&failing).map(|((r, w), f)| format!("{r}={}{}", ids(&e, w), if *f { "" } else { "(unanimous!)" })).collect();
    let pass = failing.iter().all(|&f| f) && e.committee_ids(&gav) == ["c1"] && gav_ok && t < LIMIT_C2;
    Line::new(pass, format!("{} fail weak unanimity; gav={} passes={gav_ok}; {}", summary.join(" "), ids(&e, &gav), ms(t)))
}

fn c3(pairs: &mut Pairs) -> Line {
    let e = lemma(Lemma::L3, LemmaParams { k: Some(2), d: Some(2), ..Default::default() });
    let start = Instant::now();
    let w = av_select(&e).committee;
    let v = check_sjr(&e, &w);
    let best = max_av_justified(&e, None, Budget::new(DEFAULT_BUDGET)).unwrap();
    let t = start.elapsed();
    for w in all_committees(&e) {
        pairs.record(&e, &w);
    }
    // X² is the last n/k voters.
    let bloc: Vec<usize> = (e.n() - e.n() / e.k()..e.n()).collect();
    let witness_is_bloc = matches!(&v.witness, Some(Witness::UnrepresentedGroup { voters, .. }) if *voters == bloc);
    let best_ids = best.best_ids.clone().unwrap_or_default();
    let (ck1, ck2) = (format!("c{}", e.k() + 1), format!("c{}", e.k() + 2));
    let has_extra = best_ids.iter().any(|c| *c == ck1 || *c == ck2);
    let pass = e.committee_ids(&w) == ["c1", "c2"] && !v.holds && witness_is_bloc && has_extra && t < LIMIT_C3;
    Line::new(
        pass,
        format!("av={} sjr={} witness=X2:{witness_is_bloc}; max-av-justified={:?}; {}", ids(&e, &w), v.holds, best_ids, ms(t)),
    )
}

fn c4(pairs: &mut Pairs) -> Line {
    let budget = Budget::new(DEFAULT_BUDGET);
    let a = lemma(Lemma::L4a, LemmaParams { n: Some(90), m: Some(5), d: Some(2), k: Some(3) });
    let start = Instant::now();
    let rav = rav_select(&a).committee;
    let pav = pav_exact(&a, budget).unwrap().committee;
    let expected = a.committee_from_ids(&["c1", "c2", "c3"]).unwrap();
    let v = check_sjr(&a, &expected);
    let b = lemma(Lemma::L4b, LemmaParams::default());
    let rav_b = rav_select(&b).committee;
    let pav_b = pav_exact(&b, budget).unwrap().committee;
    let t = start.elapsed();
    for e in [&a, &b] {
        for w in all_committees(e) {
            pairs.record(e, &w);
        }
    }
    let a_ok = rav == expected && pav == expected && !v.holds && witness_size(&v.witness) == Some(30);
    let b_expected = b.committee_from_ids(&["c1", "c2"]).unwrap();
    let b_ok = rav_b == b_expected && pav_b == b_expected && !check_sjr(&b, &rav_b).holds;
    let mut line = Line::new(
        a_ok && b_ok && t < LIMIT_C4,
        format!(
            "(a) rav={} pav={} expected {{c1,c2,c3}}, sjr on {{c1,c2,c3}} witness {:?} voters; (b) rav={} pav={} sjr={}; {}",
            ids(&a, &rav),
            ids(&a, &pav),
            witness_size(&v.witness),
            ids(&b, &rav_b),
            ids(&b, &pav_b),
            check_sjr(&b, &rav_b).holds,
            ms(t)
        ),
    );
    if !a_ok {
        let utility = |w: &Committee| attrvote::rules::pav_objective(&a, w);
        line.notes.push(format!(
            "(a) as printed, PAV utility of {} is {} versus {} for {{c1,c2,c3}}; RAV's third pick goes the same way",
            ids(&a, &pav),
            utility(&pav),
            utility(&expected)
        ));
    }
    line
}

fn c5(pairs: &mut Pairs) -> Line {
    let budget = Budget::new(DEFAULT_BUDGET);
    let mut parts = Vec::new();
    let mut pass = true;
    let start = Instant::now();
    for d in 1..=3 {
        let e = lemma(Lemma::L5, LemmaParams { d: Some(d), ..Default::default() });
        let sav = sav_select(&e, budget).unwrap().committee;
        let mav = mav_exact(&e, budget).unwrap().committee;
        let (s, m) = (check_sjr(&e, &sav).holds, check_sjr(&e, &mav).holds);
        pass &= !s && !m;
        parts.push(format!("d={d}: sav={} sjr={s} mav={} sjr={m}", ids(&e, &sav), ids(&e, &mav)));
        for w in all_committees(&e) {
            pairs.record(&e, &w);
        }
    }
    let strict = attrvote::instances::lemma5_mav_strict(2).unwrap();
    let w = mav_exact(&strict, budget).unwrap().committee;
    let strict_fails = !check_sjr(&strict, &w).holds;
    pass &= strict_fails;
    let t = start.elapsed();
    parts.push(format!("strict-mav companion {} sjr={}", ids(&strict, &w), !strict_fails));
    Line::new(pass && t < LIMIT_C5, format!("{}; {}", parts.join("; "), ms(t)))
}

fn c6(pairs: &mut Pairs) -> Line {
    let e = lemma(Lemma::L6, LemmaParams::default());
    let start = Instant::now();
    let r = cjr_exists(&e, Budget::new(DEFAULT_BUDGET)).unwrap();
    let t = start.elapsed();
    let committees = all_committees(&e);
    let genuine = committees
        .iter()
        .filter(|w| {
            let v = check_cjr(&e, w);
            !v.holds && v.witness.as_ref().is_some_and(|x| witness_is_genuine(&e, w, x, Representation::Compound))
        })
        .count();
    for w in &committees {
        pairs.record(&e, w);
    }
    let pass = r.decision == Some(false) && r.examined == 20 && r.exhausted && genuine == 20 && t < LIMIT_C6;
    Line::new(pass, format!("decision={:?} examined={} genuine witnesses {genuine}/20; {}", r.decision, r.examined, ms(t)))
}

/// All-subsets oracle: a violating group is any voter set of size at least
/// n/k that shares an approved value and is unrepresented.
fn oracle(e: &Election, w: &Committee, kind: Representation) -> bool {
    let n = e.n();
    let masks = w.value_masks(e);
    let mut unrep_all = 0u64;
    let mut unrep_on = vec![0u64; e.d()];
    for v in 0..n {
        let b = e.ballot(v);
        let mut all = true;
        for j in 0..e.d() {
            let hit = b.approvals[j].iter().any(|&a| masks[j][a]);
            if !hit {
                unrep_on[j] |= 1 << v;
            }
            all &= !hit;
        }
        if all {
            unrep_all |= 1 << v;
        }
    }
    for s in 1u64..(1 << n) {
        if (s.count_ones() as usize) * e.k() < n {
            continue;
        }
        for (j, &unrep_j) in unrep_on.iter().enumerate() {
            let unrep = match kind {
                Representation::Simple => unrep_all,
                Representation::Compound => unrep_j,
            };
            if s & !unrep != 0 {
                continue;
            }
            for a in 0..e.domain().domain_size(j) {
                if (0..n).filter(|v| s >> v & 1 == 1).all(|v| e.approves(v, j, a)) {
                    return false;
                }
            }
        }
    }
    true
}

fn c7(pairs: &mut Pairs) -> Line {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let start = Instant::now();
    let (mut checked, mut disagreements, mut bad_witness, mut violated) = (0, 0, 0, 0);
    let mut first = None;
    for t in 0..C7_ELECTIONS {
        let m = rng.gen_range(1..=6);
        let params = GeneratorParams {
            seed: 7_000 + t as u64,
            voters: rng.gen_range(1..=12),
            candidates: m,
            dims: rng.gen_range(1..=3),
            domain_size: rng.gen_range(1..=4),
            approval_prob: rng.gen_range(0.1..0.8),
            k: rng.gen_range(1..=m.min(3)),
            plant: [Plant::None, Plant::Bloc, Plant::Unanimous][t % 3],
        };
        let e = generate_random(&params).unwrap();
        for w in all_committees(&e) {
            pairs.record(&e, &w);
            for (kind, v) in [(Representation::Simple, check_sjr(&e, &w)), (Representation::Compound, check_cjr(&e, &w))] {
                checked += 1;
                if v.holds != oracle(&e, &w, kind) {
                    disagreements += 1;
                    first.get_or_insert_with(|| format!("seed {} committee {}", params.seed, ids(&e, &w)));
                }
                if !v.holds {
                    violated += 1;
                    if !v.witness.as_ref().is_some_and(|x| witness_is_genuine(&e, &w, x, kind)) {
                        bad_witness += 1;
                    }
                }
            }
        }
    }
    let t = start.elapsed();
    let mut line = Line::new(
        disagreements == 0 && bad_witness == 0 && t < LIMIT_C7,
        format!(
            "{C7_ELECTIONS} elections, {checked} verdicts ({violated} violations), {disagreements} disagreements, {bad_witness} bad witnesses; {:.2} s",
            t.as_secs_f64()
        ),
    );
    if let Some(f) = first {
        line.notes.push(format!("first disagreement: {f}"));
    }
    line
}

fn c8(pairs: &mut Pairs) -> Line {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let start = Instant::now();
    let (mut sjr_bad, mut weak_bad, mut strong_bad) = (0, 0, 0);
    for t in 0..C8_ELECTIONS {
        for clause in 0..3 {
            let d = rng.gen_range(1..=4);
            let m = rng.gen_range(if clause == 2 { d } else { 1 }..=20);
            let k = if clause == 2 { rng.gen_range(d..=m) } else { rng.gen_range(1..=m) };
            let params = GeneratorParams {
                seed: 8_000_000 + 3 * t as u64 + clause as u64,
                voters: rng.gen_range(1..=50),
                candidates: m,
                dims: d,
                domain_size: rng.gen_range(1..=5),
                approval_prob: rng.gen_range(0.05..0.6),
                k,
                plant: match clause {
                    0 => [Plant::None, Plant::Bloc][t % 2],
                    1 => Plant::Unanimous,
                    _ => Plant::UnanimousEveryDimension,
                },
            };
            let e = generate_random(&params).unwrap();
            let mode = if clause == 2 { TieBreakMode::StrongUnanimity } else { TieBreakMode::ByIndex };
            let w = gav_select(&e, mode).committee;
            pairs.record(&e, &w);
            match clause {
                0 => sjr_bad += usize::from(!check_sjr(&e, &w).holds),
                1 => weak_bad += usize::from(!check_weak_unanimity(&e, &w).holds),
                _ => strong_bad += usize::from(!check_strong_unanimity(&e, &w).holds),
            }
        }
    }
    let t = start.elapsed();
    Line::new(
        sjr_bad + weak_bad + strong_bad == 0 && t < LIMIT_C8,
        format!(
            "{C8_ELECTIONS} elections per clause: sjr violations {sjr_bad}, weak-unanimity {weak_bad}, strong-unanimity {strong_bad}; {:.2} s",
            t.as_secs_f64()
        ),
    )
}

fn c9(pairs: &Pairs) -> Line {
    Line::new(pairs.violations == 0, format!("{} (election, committee) pairs from criteria 1-8, {} with CJR but not SJR", pairs.checked, pairs.violations))
}

#[derive(Default)]
struct Agreement {
    total: usize,
    mismatches: Vec<String>,
    unbuildable: Vec<String>,
}

fn families(universe: usize, max_len: usize) -> Vec<Vec<Vec<usize>>> {
    let subsets: Vec<Vec<usize>> = (1u32..1 << universe).map(|mask| (1..=universe).filter(|&i| mask >> (i - 1) & 1 == 1).collect()).collect();
    let mut out = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    fn walk(start: usize, max_len: usize, subsets: &[Vec<usize>], stack: &mut Vec<usize>, out: &mut Vec<Vec<Vec<usize>>>) {
        if !stack.is_empty() {
            out.push(stack.iter().map(|&i| subsets[i].clone()).collect());
        }
        if stack.len() == max_len {
            return;
        }
        for i in start..subsets.len() {
            stack.push(i);
            walk(i + 1, max_len, subsets, stack, out);
            stack.pop();
        }
    }
    walk(0, max_len, &subsets, &mut stack, &mut out);
    out
}

fn c10() -> Line {
    let budget = Budget::new(DEFAULT_BUDGET);
    let start = Instant::now();
    let mut cjr = [Agreement::default(), Agreement::default()];
    let mut jav = [Agreement::default(), Agreement::default()];
    for universe in 1..=4 {
        for subsets in families(universe, 4) {
            for (slot, k) in [2usize, 3].into_iter().enumerate() {
                let inst = SetCoverInstance { universe, subsets: subsets.clone(), budget: k };
                let covers = solve_set_cover(&inst).unwrap().covers;
                let tag = format!("n'={universe} k={k} subsets={:?} cover={covers}", inst.subsets);

                let e = reduce_setcover_to_cjr(&inst, k).unwrap();
                let found = cjr_exists(&e, budget).unwrap().decision == Some(true);
                cjr[slot].total += 1;
                if found != covers {
                    cjr[slot].mismatches.push(format!("{tag} cjr-exists={found}"));
                }

                jav[slot].total += 1;
                match reduce_setcover_to_max_av_justified(&inst, k, 2) {
                    Ok((e, tau)) => {
                        let yes = max_av_justified(&e, Some(&tau), budget).unwrap().decision == Some(true);
                        if yes != covers {
                            jav[slot].mismatches.push(format!("{tag} tau={tau} decision={yes}"));
                        }
                    }
                    Err(SetCoverError::Regime { constraint, .. }) => jav[slot].unbuildable.push(format!("{tag}: {constraint}")),
                    Err(other) => panic!("{other}"),
                }
            }
        }
    }
    let t = start.elapsed();

    let dump = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("reduction_mismatches.txt");
    let mut text = String::new();
    let mut parts = Vec::new();
    let mut agree = true;
    for (name, tallies) in [("cjr", &cjr), ("max-av-justified", &jav)] {
        for (slot, k) in [2, 3].into_iter().enumerate() {
            let a = &tallies[slot];
            agree &= a.mismatches.is_empty() && a.unbuildable.is_empty();
            let extra = if a.unbuildable.is_empty() { String::new() } else { format!(", {} unbuildable", a.unbuildable.len()) };
            parts.push(format!("{name} k={k}: {}/{} agree{extra}", a.total - a.mismatches.len() - a.unbuildable.len(), a.total));
            for mm in a.mismatches.iter().chain(&a.unbuildable) {
                text += &format!("{name}: {mm}\n");
            }
        }
    }
    std::fs::write(&dump, &text).unwrap();
    let mut line = Line::new(agree && t < LIMIT_C10, format!("{}; {:.2} s", parts.join("; "), t.as_secs_f64()));
    for (name, tallies) in [("cjr", &cjr), ("max-av-justified", &jav)] {
        for a in tallies {
            for mm in a.mismatches.iter().chain(&a.unbuildable).take(3) {
                line.notes.push(format!("{name}: {mm}"));
            }
        }
    }
    if !text.is_empty() {
        line.notes.push(format!("full list: {}", dump.display()));
    }
    line
}

fn random_private(rng: &mut ChaCha8Rng) -> Election {
    let n = rng.gen_range(2..=10);
    let m = rng.gen_range(3..=6);
    let d = rng.gen_range(1..=3);
    let k = rng.gen_range(1..=3.min(m));
    let p = rng.gen_range(0.2..0.7);
    let approvers: Vec<Vec<Vec<usize>>> = (0..m).map(|_| (0..d).map(|_| (1..=n).filter(|_| rng.gen_bool(p)).collect()).collect()).collect();
    private_values(n, k, &approvers).unwrap()
}

fn c11() -> Line {
    let positives_hcm = [RuleId::Av, RuleId::Sav, RuleId::Rav, RuleId::Pav, RuleId::Mav];
    let positives_cm = [RuleId::Av, RuleId::Sav, RuleId::Rav];
    let start = Instant::now();
    let mut false_positives = Vec::new();
    let mut all_revalidated = true;
    let mut rows = Vec::new();
    for rule in RuleId::ALL {
        let trials = C11_TRIALS.to_string();
        let cli = Cli::try_parse_from(["attrvote", "axioms", "--rule", rule.name(), "--trials", &trials]).unwrap();
        let outcome = execute(&cli).unwrap();
        let Payload::Axioms { report, revalidated } = outcome.report.payload else { unreachable!() };
        all_revalidated &= revalidated;
        let mut cells = Vec::new();
        for t in &report.properties {
            cells.push(format!("{}={}", t.property.short(), t.violations));
            let claimed = match t.property {
                Property::CommitteeMonotonicity => positives_cm.contains(&rule),
                _ => positives_hcm.contains(&rule),
            };
            if claimed && t.violations > 0 {
                false_positives.push(format!("{} {}={}", rule.name(), t.property.short(), t.violations));
            }
        }
        rows.push(format!("{} [{}]", rule.name(), cells.join(" ")));
    }
    let t = start.elapsed();
    let mut line = Line::new(
        false_positives.is_empty() && all_revalidated,
        format!(
            "{C11_TRIALS} trials per rule via the axioms subcommand; violations of claimed properties: {}; witnesses revalidated: {all_revalidated}; {:.2} s",
            if false_positives.is_empty() { "none".to_string() } else { false_positives.join(", ") },
            t.as_secs_f64()
        ),
    );
    line.notes.extend(rows);

    // Control: candidates with private values, so no two share an attribute.
    let opts = SelectOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut control = Vec::new();
    for rule in [RuleId::Av, RuleId::Sav, RuleId::Rav, RuleId::Pav, RuleId::Mav] {
        let (mut mono, mut cm) = (0, 0);
        for t in 0..C11_TRIALS {
            let e = random_private(&mut rng);
            mono += usize::from(!check_monotonicity(rule, &e, t as u64, &opts).unwrap().holds);
            cm += usize::from(!check_committee_monotonicity(rule, &e, 4, &opts).unwrap().holds);
        }
        control.push(format!("{} mono={mono} cm={cm}", rule.name()));
    }
    line.notes.push(format!("control with private attribute values ({C11_TRIALS} each): {}", control.join(", ")));
    line
}

fn c12() -> Line {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let budget = Budget::new(DEFAULT_BUDGET);
    let start = Instant::now();
    let (mut done, mut sjr_ok, mut within, mut attempt) = (0, 0, 0, 0u64);
    let (mut ratio_sum, mut ratio_min) = (0.0, f64::INFINITY);
    while done < C12_INSTANCES {
        attempt += 1;
        let m = rng.gen_range(3..=14);
        let k = rng.gen_range(1..m);
        if binomial(m, k) > C12_MAX_COMMITTEES {
            continue;
        }
        let params = GeneratorParams {
            seed: 12_000 + attempt,
            voters: rng.gen_range(4..=40),
            candidates: m,
            dims: rng.gen_range(1..=4),
            domain_size: rng.gen_range(2..=5),
            approval_prob: rng.gen_range(0.1..0.6),
            k,
            plant: [Plant::None, Plant::Bloc][done % 2],
        };
        let e = generate_random(&params).unwrap();
        let h = justified_av_heuristic(&e);
        let opt = max_av_justified(&e, None, budget).unwrap().best_value.expect("GAV output is SJR, so an optimum exists");
        sjr_ok += usize::from(check_sjr(&e, &h.committee).holds);
        within += usize::from(h.objective <= opt);
        let ratio = if opt.is_zero() { 1.0 } else { h.objective.to_f64() / opt.to_f64() };
        ratio_sum += ratio;
        ratio_min = ratio_min.min(ratio);
        done += 1;
    }
    let t = start.elapsed();
    Line::new(
        sjr_ok == C12_INSTANCES && within == C12_INSTANCES,
        format!(
            "{C12_INSTANCES} instances: SJR {sjr_ok}/{C12_INSTANCES}, AV <= optimum {within}/{C12_INSTANCES}, ratio mean {:.4} min {:.4}; {:.2} s",
            ratio_sum / C12_INSTANCES as f64,
            ratio_min,
            t.as_secs_f64()
        ),
    )
}

fn median_time(e: &Election) -> Duration {
    let mut times: Vec<Duration> = (0..C13_RUNS)
        .map(|_| {
            let start = Instant::now();
            std::hint::black_box(av_select(std::hint::black_box(e)));
            start.elapsed()
        })
        .collect();
    times.sort();
    times[C13_RUNS / 2]
}

fn c13() -> Line {
    let build = |voters: usize| {
        generate_random(&GeneratorParams {
            seed: 13,
            voters,
            candidates: C13_CANDIDATES,
            dims: C13_DIMS,
            domain_size: C13_DOMAIN,
            approval_prob: C13_APPROVAL_PROB,
            k: 10,
            plant: Plant::None,
        })
        .unwrap()
    };
    let small = build(C13_VOTERS);
    let t1 = median_time(&small);
    drop(small);
    let large = build(2 * C13_VOTERS);
    let t2 = median_time(&large);
    let ratio = t2.as_secs_f64() / t1.as_secs_f64();
    Line::new(
        t1 < C13_LIMIT && (C13_RATIO.0..=C13_RATIO.1).contains(&ratio),
        format!(
            "av_select n={C13_VOTERS} m={C13_CANDIDATES} d={C13_DIMS} domain={C13_DOMAIN}: {} (limit {} s); n doubled: {}; ratio {ratio:.2} (allowed {}-{})",
            ms(t1),
            C13_LIMIT.as_secs(),
            ms(t2),
            C13_RATIO.0,
            C13_RATIO.1
        ),
    )
}

trait Short {
    fn short(&self) -> &'static str;
}

impl Short for Property {
    fn short(&self) -> &'static str {
        match self {
            Property::Homogeneity => "homogeneity",
            Property::Consistency => "consistency",
            Property::Monotonicity => "monotonicity",
            Property::CommitteeMonotonicity => "committee-monotonicity",
        }
    }
}

fn main() {
    let mut pairs = Pairs::default();
    let results: Vec<(&str, Line)> = vec![
        ("strong unanimity counterexample", c1(&mut pairs)),
        ("weak unanimity: only GAV", c2(&mut pairs)),
        ("AV strands a bloc", c3(&mut pairs)),
        ("PAV/RAV fail SJR", c4(&mut pairs)),
        ("SAV/MAV fail SJR", c5(&mut pairs)),
        ("no CJR committee", c6(&mut pairs)),
        ("checkers match oracle", c7(&mut pairs)),
        ("GAV guarantees", c8(&mut pairs)),
        ("CJR implies SJR", c9(&pairs)),
        ("reduction round trips", c10()),
        ("axiom harness", c11()),
        ("heuristic quality", c12()),
        ("AV performance", c13()),
    ];

    let mut failed = 0;
    for (i, (name, line)) in results.iter().enumerate() {
        println!("{} {:>2} {name}: {}", if line.pass { "PASS" } else { "FAIL" }, i + 1, line.detail);
        for note in &line.notes {
            println!("        {note}");
        }
        failed += usize::from(!line.pass);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 && std::env::var_os("ACCEPTANCE_STRICT").is_some() {
        std::process::exit(1);
    }
}
