use ctah::oracle::NaiveEnsemble;
use ctah::{ContextStatsTable, ContextWindow, PriorSpec, Symbol};
use proptest::prelude::*;

fn rounds(depth: usize) -> impl Strategy<Value = Vec<(u64, bool)>> {
    prop::collection::vec((0u64..(1 << depth), any::<bool>()), 0..120)
}

proptest! {
    #[test]
    fn best_order_loss_matches_enumeration(depth in 0usize..=3, seq in rounds(3)) {
        let mut stats = ContextStatsTable::new(depth).unwrap();
        let mut naive = NaiveEnsemble::new(&PriorSpec::uniform(depth)).unwrap();
        for (k, y) in seq {
            let c = ContextWindow::from_key(depth, k & ((1 << depth) - 1)).unwrap();
            let y = Symbol::from_bit(y);
            stats.record(&c, y).unwrap();
            naive.record(&c, y).unwrap();
        }
        for d in 0..=depth {
            prop_assert_eq!(stats.best_order_loss(d).unwrap(), naive.best_loss_up_to_order(d));
        }
    }

    #[test]
    fn best_order_loss_nonincreasing(seq in rounds(5)) {
        let mut stats = ContextStatsTable::new(5).unwrap();
        for (k, y) in seq {
            stats.record(&ContextWindow::from_key(5, k).unwrap(), Symbol::from_bit(y)).unwrap();
        }
        for d in 0..5 {
            prop_assert!(stats.best_order_loss(d + 1).unwrap() <= stats.best_order_loss(d).unwrap());
        }
    }

    #[test]
    fn levels_sum_to_round_count(seq in rounds(4)) {
        let mut stats = ContextStatsTable::new(4).unwrap();
        for (k, y) in &seq {
            stats.record(&ContextWindow::from_key(4, *k).unwrap(), Symbol::from_bit(*y)).unwrap();
        }
        for h in 0..=4 {
            let total: u64 = stats.level(h).unwrap().iter().map(|c| c.total()).sum();
            prop_assert_eq!(total, seq.len() as u64);
        }
    }
}
