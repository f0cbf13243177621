//! Random single jumps on the unit circle: the Fredholm decision against the
//! closed-form rule `1/p − arg(a(t−0)/a(t+0))/2π ∉ ℤ`.

use nakano::fredholm::Tolerances;
use nakano::lab::random_jump_check;

fn main() -> Result<(), nakano::Error> {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(7);
    let start = std::time::Instant::now();
    let report = random_jump_check(seed, 100, &[2.0, 3.0], &Tolerances::default())?;
    for c in report.checks.iter().filter(|c| c.expected != c.verdict) {
        println!("mismatch: {c:?}");
    }
    println!(
        "{}/{} agree ({:.1} s)",
        report.agreements,
        report.checks.len(),
        start.elapsed().as_secs_f64()
    );
    Ok(())
}
