use gpr_core::extractor::{choose_global_base, depth_bound, mid_beta_q, slack_holds, ExtractError};
use gpr_core::ledger::CostLedger;
use gpr_core::rng::InstanceRng;
use gpr_core::Int;
use proptest::prelude::*;

fn scaled(u: i64, m: i64, l: i64, q: u32) -> Int {
    let beta = Int::pow2(q as u64);
    Int::from(u) * &beta * &beta + Int::from(m) * &beta + Int::from(l)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]
    #[test]
    fn recovers_the_middle_digit(q in 1u32..=20, seed in any::<u64>()) {
        let beta = 1i64 << q;
        let mut rng = InstanceRng::new(seed);
        let u = rng.int_in(beta as u64);
        let m = rng.int_in(((beta - 1) / 2) as u64);
        let l = rng.int_in(((beta - 1) / 4) as u64);
        prop_assert!(slack_holds(&Int::from(m), &Int::from(l), &Int::from(beta)));
        let got = mid_beta_q(&scaled(u, m, l, q), q as u64, &mut CostLedger::default());
        prop_assert_eq!(got, Ok(Int::from(m)));
    }
}

#[test]
fn violating_the_middle_bound_breaks_extraction() {
    let mut rng = InstanceRng::new(42);
    let mut failures = 0;
    for _ in 0..2000 {
        let q = 2 + rng.below(12) as u32;
        let beta = 1i64 << q;
        let m = (beta / 2 + 1) * if rng.below(2) == 0 { 1 } else { -1 };
        let u = rng.int_in(beta as u64);
        let l = rng.int_in(((beta - 1) / 4) as u64);
        match mid_beta_q(&scaled(u, m, l, q), q as u64, &mut CostLedger::default()) {
            Ok(got) if got == Int::from(m) => {}
            _ => failures += 1,
        }
    }
    assert!(failures > 0);
}

#[test]
fn depth_bounds_telescope() {
    for b in [1i64, 2, 3, 7] {
        let bmax = Int::from(b);
        for lg in 1..=10 {
            let n = 1usize << lg;
            let s0 = depth_bound(n, &bmax, 0).unwrap();
            let base = choose_global_base(n, &bmax).unwrap();
            assert_eq!(base.s0, s0);
            for ell in 0..lg as u32 {
                let s = depth_bound(n, &bmax, ell).unwrap();
                assert_eq!(s.shl(ell as u64), s0);
                assert!(slack_holds(&s.shl(1), &s, &base.beta));
            }
            assert!(matches!(depth_bound(n, &bmax, lg as u32), Err(ExtractError::DepthTooDeep { .. })));
        }
    }
}
