//! Build the four-voter example by hand, run every rule on it and check
//! the winners.

use attrvote::axioms::{check_cjr, check_sjr, check_weak_unanimity};
use attrvote::instances::e0;
use attrvote::{select, Election, ElectionFile, RuleId, SelectOptions};

fn main() {
    let e = e0();
    let text = e.to_file().to_json();
    println!("{text}");

    // Parsing the canonical form gives the same election back.
    let back = Election::from_file(&ElectionFile::from_json(&text).unwrap()).unwrap();
    assert_eq!(back.to_file().to_json(), text);

    let opts = SelectOptions::default();
    for rule in RuleId::ALL {
        let r = select(rule, &e, &opts).unwrap();
        let ids = e.committee_ids(&r.committee);
        println!(
            "{:<4} {:?} objective={} weak-unanimity={} sjr={} cjr={}",
            rule.name(),
            ids,
            r.objective,
            check_weak_unanimity(&e, &r.committee).holds,
            check_sjr(&e, &r.committee).holds,
            check_cjr(&e, &r.committee).holds,
        );
    }
}
