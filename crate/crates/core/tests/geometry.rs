mod common;

use common::{basis, basis_and_digits, basis_and_value};
use negacantor::geometry::{
    cylinder, cylinder_length, locate, ms0_cover, ms0_total_length, position_set_cover, position_set_stats,
    CylinderBase, EnumOptions, IncompleteSumSpec, PositionConstraint,
};
use negacantor::rational::{int, ratio};
use negacantor::{evaluate_exact, Elements, Execution, Kind};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn points_sit_in_their_cylinders((b, x) in basis_and_value(), m in 0usize..=8) {
        let base = locate(&x, &b, m).unwrap();
        let iv = cylinder(&base, &b).unwrap();
        prop_assert!(iv.contains(&x));
        prop_assert_eq!(iv.width(), cylinder_length(m, &b));
    }

    #[test]
    fn children_tile_the_parent((b, s) in basis_and_digits(Kind::NegaD), m in 0usize..=6) {
        let parent = CylinderBase::new(s.first(m), &b).unwrap();
        let outer = cylinder(&parent, &b).unwrap();
        let mut kids: Vec<_> = (0..b.element(m + 1)).map(|c| cylinder(&parent.child(c), &b).unwrap()).collect();
        kids.sort_by(|a, c| a.lo().cmp(c.lo()));
        prop_assert_eq!(kids[0].lo(), outer.lo());
        prop_assert_eq!(kids[kids.len() - 1].hi(), outer.hi());
        for w in kids.windows(2) {
            prop_assert_eq!(w[0].hi(), w[1].lo());
        }
    }

    #[test]
    fn stats_agree_with_the_cover(b in basis(), k in 1usize..=5, j in 1usize..=3, raw in any::<(u64, u64)>()) {
        let entries = vec![(k, raw.0 % b.element(k)), (k + j, raw.1 % b.element(k + j))];
        let pc = PositionConstraint::new(entries, &b).unwrap();
        let rank = k + j;
        let cover = position_set_cover(&pc, &b, rank, EnumOptions::default()).unwrap();
        let stats = position_set_stats(&pc, &b).unwrap();
        prop_assert_eq!(int(cover.len() as i64) * cylinder_length(rank, &b), stats.measure.clone());
        prop_assert_eq!(stats.measure, ratio(1, (b.element(k) * b.element(k + j)) as i64));
        let ivs: Vec<_> = cover.iter().map(|c| cylinder(c, &b).unwrap()).collect();
        let lo = ivs.iter().map(|iv| iv.lo()).min().unwrap();
        let hi = ivs.iter().map(|iv| iv.hi()).max().unwrap();
        prop_assert_eq!(hi - lo, stats.diameter);
    }

    #[test]
    fn incomplete_cover_matches_total((b, s) in basis_and_digits(Kind::NegaD), n in 1usize..=6) {
        let spec = IncompleteSumSpec::new(s.clone(), b.clone()).unwrap();
        let seq = ms0_cover(&spec, n, EnumOptions::with_exec(Execution::Sequential)).unwrap();
        let par = ms0_cover(&spec, n, EnumOptions::with_exec(Execution::Parallel)).unwrap();
        prop_assert_eq!(&seq.intervals, &par.intervals);
        prop_assert_eq!(&seq.total_length, &ms0_total_length(&spec, n).unwrap());
        let x = evaluate_exact(&s, &b).unwrap();
        prop_assert!(seq.intervals.iter().any(|(_, iv)| iv.contains(&x)));
    }
}
