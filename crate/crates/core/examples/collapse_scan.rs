//! Prints the collapse/revival record for a range of times.
//!
//! ```text
//! cargo run --release -p xyquench --example collapse_scan -- 0.5 0.25 5.0 0.25
//! ```

use xyquench::analysis::{AnalysisConfig, Analyzer};

fn main() {
    let args: Vec<f64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("numeric argument"))
        .collect();
    let (gamma, t0, t1, dt) = match args.as_slice() {
        [g, a, b, c] => (*g, *a, *b, *c),
        _ => (0.5, 0.25, 5.0, 0.25),
    };
    let analyzer = Analyzer::new(gamma, AnalysisConfig::default()).expect("valid gamma");
    let n = ((t1 - t0) / dt).round() as usize + 1;
    let times: Vec<f64> = (0..n).map(|i| t0 + dt * i as f64).collect();
    let report = analyzer.derivative_scan(&times);
    println!("t_tilde  a_c  slope  revived  max_ln  predicate  concordant");
    for r in &report.records {
        println!(
            "{:.3}  {:?}  {:?}  {}  {:.3e}  {}  {}",
            r.t_tilde,
            r.a_c,
            r.slope,
            r.revived,
            r.max_ln_after_collapse,
            r.predicate_holds,
            r.concordant()
        );
    }
    for f in &report.failures {
        println!("{:.3}  failed: {}", f.t_tilde, f.error);
    }
}
