use bhkernel::kernels::{build_bank, Case};
use bhkernel::study::precision_study;

fn grid(a: f64, b: f64, h: f64) -> Vec<f64> {
    let n = ((b - a) / h).round() as usize;
    (0..=n).map(|i| a + h * i as f64).collect()
}

#[test]
fn fifty_digits_are_plenty_on_small_x() {
    let bank = build_bank(Case::Quartic);
    let s = precision_study(&bank, 1.0 / 6.0, &[50], &grid(0.0, 5.0, 0.25)).unwrap();
    let worst = s.rows.iter().map(|r| r.deviation(0)).fold(0.0, f64::max);
    assert!(worst < 1e-30, "{worst:e}");
}

#[test]
fn ten_digits_break_down_between_eight_and_sixteen() {
    let bank = build_bank(Case::Quartic);
    let s = precision_study(&bank, 1.0 / 6.0, &[10, 15], &grid(0.0, 20.0, 0.1)).unwrap();
    let broke = s
        .rows
        .iter()
        .filter(|r| (8.0..=16.0).contains(&r.x))
        .any(|r| r.deviation(0) > 1e-2);
    assert!(broke);
    let e10 = s.agreement_extent(0, 1e-4).unwrap();
    let e15 = s.agreement_extent(1, 1e-4).unwrap();
    println!("agreement up to x = {e10} (p = 10) and x = {e15} (p = 15)");
    assert!(e15 > e10);
}
