use twist_core::minimize::{gap_levels, minimize_heteroclinic, Direction};
use twist_core::{FrenkelKontorova, MinimizeOptions, NeighboringPair};

fn setup() -> (FrenkelKontorova, NeighboringPair) {
    (
        FrenkelKontorova::new(1.0, 1.0).unwrap(),
        NeighboringPair::new(0.0, 1.0).unwrap(),
    )
}

#[test]
fn excess_shrinks_as_the_pin_relaxes() {
    let (h, pair) = setup();
    let o = MinimizeOptions::default();
    let e: Vec<f64> = [0.2, 0.1, 0.05]
        .iter()
        .map(|&d| gap_levels(&h, &pair, (d, d, d, d), 40, &o).unwrap().e0)
        .collect();
    assert!(e.iter().all(|&v| v >= -1e-12));
    assert!(e[0] >= e[1] && e[1] >= e[2], "{e:?}");
}

#[test]
fn midpoint_pin_costs_action() {
    let (h, pair) = setup();
    let r = gap_levels(
        &h,
        &pair,
        (0.5, 0.5, 0.5, 0.5),
        40,
        &MinimizeOptions::default(),
    )
    .unwrap();
    assert!(r.e0 > 0.0 && r.e1 > 0.0);
    assert!((r.c_star - r.c0_het - r.c1_het).abs() == 0.0);
}

#[test]
fn levels_agree_with_free_kinks() {
    let (h, pair) = setup();
    let o = MinimizeOptions::default();
    let r = gap_levels(&h, &pair, (0.1, 0.1, 0.1, 0.1), 30, &o).unwrap();
    let up = minimize_heteroclinic(&h, &pair, Direction::Ascending, 30, &o).unwrap();
    assert_eq!(r.c0_het, up.orbit.value);
    assert!((r.c0_het - r.c1_het).abs() <= 1e-8);
}
