//! Finite sections of `aP + Q` for single-jump symbols against the Fredholm
//! criterion, over the twelve-case circle suite.

use nakano::fredholm::Tolerances;
use nakano::lab::agreement_suite;

fn main() -> Result<(), nakano::Error> {
    let report = agreement_suite(&Tolerances::default())?;
    println!(
        "{:>22} {:>4} {:>5} {:>13} {:>12}  sigma_min (shift 0) / ratios (-1, 0, 1)",
        "z2", "p", "λ", "verdict", "trend"
    );
    for o in &report.outcomes {
        let s0 = &o.trend.shifts[1];
        let ratios: Vec<String> = o
            .trend
            .shifts
            .iter()
            .map(|s| format!("{:.3}", s.increment_ratio))
            .collect();
        println!(
            "{:>10.4}{:+.4}i {:>4} {:>5} {:>13} {:>12}  {:?} / {}",
            o.case.z2.re,
            o.case.z2.im,
            o.case.p,
            o.case.lambda,
            o.verdict.to_string(),
            o.trend.class.to_string(),
            s0.sigma
                .iter()
                .map(|s| (s * 1e4).round() / 1e4)
                .collect::<Vec<_>>(),
            ratios.join(", ")
        );
    }
    println!(
        "{}/{} non-Borderline agreements",
        report.agreements, report.compared
    );
    Ok(())
}
