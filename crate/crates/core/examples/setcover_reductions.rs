//! Build both hardness reductions from small set-cover instances and compare
//! the answers on each side.

use attrvote::solvers::{
    cjr_exists, max_av_justified, reduce_setcover_to_cjr, reduce_setcover_to_max_av_justified, solve_set_cover, Budget,
    SetCoverInstance, DEFAULT_BUDGET,
};

fn main() {
    let budget = Budget::new(DEFAULT_BUDGET);
    let instances = [
        SetCoverInstance { universe: 3, subsets: vec![vec![1, 2], vec![2, 3], vec![3]], budget: 2 },
        SetCoverInstance { universe: 3, subsets: vec![vec![1], vec![2], vec![3]], budget: 2 },
        SetCoverInstance { universe: 4, subsets: vec![vec![1, 2], vec![3, 4], vec![2, 3]], budget: 2 },
    ];
    for inst in &instances {
        let cover = solve_set_cover(inst).unwrap();
        println!("subsets {:?}: cover within budget = {} {:?}", inst.subsets, cover.covers, cover.chosen);

        let e = reduce_setcover_to_cjr(inst, 2).unwrap();
        let r = cjr_exists(&e, budget).unwrap();
        println!("  CJR target: n={} m={}  CJR committee exists = {:?}", e.n(), e.m(), r.decision);

        let (e, tau) = reduce_setcover_to_max_av_justified(inst, 2, 2).unwrap();
        let r = max_av_justified(&e, Some(&tau), budget).unwrap();
        println!("  justified-AV target: n={} m={} tau={}  decision = {:?}", e.n(), e.m(), tau, r.decision);
    }
}
