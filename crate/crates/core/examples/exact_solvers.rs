//! Exhaustive search: PAV and MAV optima, the best committee with simple
//! justified representation, and the CJR existence certificate.

use attrvote::instances::{lemma_instance, Lemma, LemmaParams};
use attrvote::solvers::{binomial, cjr_exists, max_av_justified, mav_exact, pav_exact, Budget, DEFAULT_BUDGET};

fn main() {
    let budget = Budget::new(DEFAULT_BUDGET);

    let l4 = lemma_instance(Lemma::L4a, &LemmaParams::default()).unwrap();
    println!("l4a: C({}, {}) = {} committees", l4.m(), l4.k(), binomial(l4.m(), l4.k()));
    let pav = pav_exact(&l4, budget).unwrap();
    println!("  PAV optimum {:?} utility {}", l4.committee_ids(&pav.committee), pav.objective);
    let mav = mav_exact(&l4, budget).unwrap();
    println!("  MAV optimum {:?} max distance {}", l4.committee_ids(&mav.committee), mav.objective);

    let l3 = lemma_instance(Lemma::L3, &LemmaParams { k: Some(2), d: Some(2), ..Default::default() }).unwrap();
    let r = max_av_justified(&l3, None, budget).unwrap();
    println!("l3: best SJR committee {:?} with AV {}", r.best_ids.unwrap(), r.best_value.unwrap());

    let l6 = lemma_instance(Lemma::L6, &LemmaParams::default()).unwrap();
    let r = cjr_exists(&l6, budget).unwrap();
    println!("l6: CJR committee exists: {:?} after {} committees", r.decision, r.examined);

    // The budget is checked before any work starts.
    match pav_exact(&l4, Budget::new(5)) {
        Err(e) => println!("{e}"),
        Ok(_) => unreachable!(),
    }
}
