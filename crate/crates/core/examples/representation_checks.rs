//! The representation checkers on the fixed counterexamples, with the
//! witness groups they report.

use attrvote::axioms::{check_cjr, check_sjr, check_strong_unanimity, Witness};
use attrvote::instances::{lemma_instance, Lemma, LemmaParams};
use attrvote::{select, Election, RuleId, SelectOptions};

fn describe(e: &Election, w: &Option<Witness>) -> String {
    match w {
        Some(Witness::UnrepresentedGroup { dimension, value, voters }) => format!(
            "{} voters share {}={} and none is represented",
            voters.len(),
            e.domain().dimension(*dimension).name(),
            e.value_name(*dimension, *value)
        ),
        Some(other) => serde_json::to_string(other).unwrap(),
        None => "-".into(),
    }
}

fn main() {
    let opts = SelectOptions::default();

    // No size-one committee satisfies strong unanimity here.
    let l1 = lemma_instance(Lemma::L1, &LemmaParams::default()).unwrap();
    for c in 0..l1.m() {
        let w = attrvote::Committee::new(vec![c]);
        println!("l1 {{{}}} strong unanimity: {}", l1.candidate(c).id, check_strong_unanimity(&l1, &w).holds);
    }

    let l3 = lemma_instance(Lemma::L3, &LemmaParams { k: Some(2), d: Some(2), ..Default::default() }).unwrap();
    let av = select(RuleId::Av, &l3, &opts).unwrap();
    let v = check_sjr(&l3, &av.committee);
    println!("l3 AV {:?} sjr={} : {}", l3.committee_ids(&av.committee), v.holds, describe(&l3, &v.witness));

    let l4 = lemma_instance(Lemma::L4b, &LemmaParams::default()).unwrap();
    let pav = select(RuleId::Pav, &l4, &opts).unwrap();
    let v = check_sjr(&l4, &pav.committee);
    println!("l4b PAV {:?} sjr={} : {}", l4.committee_ids(&pav.committee), v.holds, describe(&l4, &v.witness));

    // No committee satisfies CJR here; several still satisfy SJR because the
    // stranded group is served on its other dimension.
    let l6 = lemma_instance(Lemma::L6, &LemmaParams::default()).unwrap();
    let mut sjr_only = 0;
    for a in 0..l6.m() {
        for b in a + 1..l6.m() {
            for c in b + 1..l6.m() {
                let w = attrvote::Committee::new(vec![a, b, c]);
                let (s, cj) = (check_sjr(&l6, &w), check_cjr(&l6, &w));
                assert!(!cj.holds);
                if s.holds {
                    sjr_only += 1;
                    if sjr_only == 1 {
                        println!("l6 {:?} sjr=true cjr=false : {}", l6.committee_ids(&w), describe(&l6, &cj.witness));
                    }
                }
            }
        }
    }
    println!("l6: {sjr_only} of 20 committees satisfy SJR, none satisfies CJR");
}
