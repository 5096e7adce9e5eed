//! Maximal asset trails checked by exhaustive enumeration.

mod common;

use archflaw_core::model::{asset_paths, ArchModel, Flow};
use proptest::prelude::*;

fn all_trails(flows: &[&Flow]) -> Vec<Vec<usize>> {
    fn grow(flows: &[&Flow], trail: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(trail.clone());
        let end = &flows[*trail.last().unwrap()].target;
        for i in 0..flows.len() {
            if !trail.contains(&i) && flows[i].source == *end {
                trail.push(i);
                grow(flows, trail, out);
                trail.pop();
            }
        }
    }
    let mut out = Vec::new();
    for i in 0..flows.len() {
        grow(flows, &mut vec![i], &mut out);
    }
    out
}

fn brute_force(m: &ArchModel, asset: &str) -> Vec<Vec<String>> {
    let flows: Vec<&Flow> = m.flows().filter(|f| f.carries.iter().any(|a| a == asset)).collect();
    let mut maximal: Vec<Vec<String>> = all_trails(&flows)
        .into_iter()
        .filter(|t| {
            let first = &flows[t[0]].source;
            let last = &flows[*t.last().unwrap()].target;
            !(0..flows.len()).any(|j| !t.contains(&j) && (flows[j].source == *last || flows[j].target == *first))
        })
        .map(|t| t.into_iter().map(|i| flows[i].id.clone()).collect())
        .collect();
    maximal.sort();
    maximal.dedup();
    maximal
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn matches_exhaustive_enumeration(m in common::gen::arch_model()) {
        for a in m.assets() {
            prop_assert_eq!(asset_paths(&m, &a.id), brute_force(&m, &a.id));
        }
    }

    #[test]
    fn every_carrying_flow_is_on_some_trail(m in common::gen::arch_model()) {
        for a in m.assets() {
            let paths = asset_paths(&m, &a.id);
            for f in m.flows().filter(|f| f.carries.contains(&a.id)) {
                prop_assert!(paths.iter().any(|p| p.contains(&f.id)));
            }
        }
    }
}
