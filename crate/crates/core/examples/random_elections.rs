//! Seeded generation with planted structure.

use attrvote::axioms::{check_sjr, check_weak_unanimity};
use attrvote::instances::{generate_random, GeneratorParams, Plant};
use attrvote::{select, RuleId, SelectOptions};

fn main() {
    let opts = SelectOptions::default();
    for plant in [Plant::None, Plant::Unanimous, Plant::Bloc] {
        let params = GeneratorParams { seed: 42, voters: 20, candidates: 8, dims: 3, domain_size: 4, approval_prob: 0.3, k: 3, plant };
        let e = generate_random(&params).unwrap();
        let again = generate_random(&params).unwrap();
        assert_eq!(e.to_file().to_json(), again.to_file().to_json());

        let unanimous: usize = (0..e.d()).map(|j| e.unanimous_values(j).len()).sum();
        println!("{plant:?}: n={} m={} d={} unanimous values={unanimous}", e.n(), e.m(), e.d());
        for rule in [RuleId::Av, RuleId::Gav] {
            let w = select(rule, &e, &opts).unwrap().committee;
            println!(
                "  {:<4} {:?} weak-unanimity={} sjr={}",
                rule.name(),
                e.committee_ids(&w),
                check_weak_unanimity(&e, &w).holds,
                check_sjr(&e, &w).holds
            );
        }
    }
}
