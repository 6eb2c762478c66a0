//! Greedy Approval Voting stage by stage, under both tie-break modes.

use attrvote::axioms::{check_sjr, check_strong_unanimity};
use attrvote::gav::{gav_select, TieBreakMode};
use attrvote::instances::{generate_random, GeneratorParams, Plant};

fn main() {
    let params = GeneratorParams {
        seed: 7,
        voters: 24,
        candidates: 9,
        dims: 3,
        domain_size: 4,
        approval_prob: 0.25,
        k: 4,
        plant: Plant::UnanimousEveryDimension,
    };
    let e = generate_random(&params).unwrap();

    for mode in [TieBreakMode::ByIndex, TieBreakMode::StrongUnanimity] {
        let r = gav_select(&e, mode);
        println!("{mode:?}: committee {:?}", e.committee_ids(&r.committee));
        for (t, s) in r.gav.as_ref().unwrap().stages.iter().enumerate() {
            println!(
                "  stage {}: {} via {}={} covering {} voters{}",
                t + 1,
                e.candidate(s.candidate).id,
                e.domain().dimension(s.dimension).name(),
                e.value_name(s.dimension, s.value),
                s.count,
                if s.reset { " (pool refilled)" } else { "" }
            );
        }
        println!("  sjr: {}  strong unanimity: {}", check_sjr(&e, &r.committee).holds, check_strong_unanimity(&e, &r.committee).holds);
    }
}
