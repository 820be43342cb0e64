use blocktrack_core::uncertainty::frequency_map;
use blocktrack_core::{CalendarKind, CellSet, Date, GridShape};
use proptest::prelude::*;

fn footprints() -> impl Strategy<Value = Vec<(u8, Vec<usize>)>> {
    prop::collection::vec((1u8..=10, prop::collection::vec(0usize..48, 1..12)), 0..25)
}

proptest! {
    #[test]
    fn counts_match_naive_date_loop(fps in footprints()) {
        let shape = GridShape::new(6, 8);
        let cal = CalendarKind::Gregorian365;
        let sets: Vec<(Date, CellSet)> = fps
            .iter()
            .map(|(d, cells)| (cal.date(1990, 7, *d).unwrap(), cells.iter().copied().collect()))
            .collect();
        let map = frequency_map(shape, sets.iter().map(|(d, s)| (*d, s))).unwrap();

        let dates: std::collections::BTreeSet<Date> = sets.iter().map(|(d, _)| *d).collect();
        let mut union_total = 0u64;
        for cell in 0..shape.n_cells() {
            let naive = dates.iter().filter(|&&d| sets.iter().any(|(e, s)| *e == d && s.contains(cell))).count();
            prop_assert_eq!(map.counts()[cell] as usize, naive);
            prop_assert!(naive <= map.n_days());
        }
        for &d in &dates {
            union_total += CellSet::union_all(sets.iter().filter(|(e, _)| *e == d).map(|(_, s)| s)).len() as u64;
        }
        prop_assert_eq!(map.total(), union_total);
    }
}
