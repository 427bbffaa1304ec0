// Exact 1D fused lasso on a noisy step signal.

use trailfuse::{solve_tv1d, verify_tv1d_kkt, Tv1dProblem};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let y = vec![0.1, -0.2, 0.05, 0.0, 2.1, 1.9, 2.2, 2.0, 1.95, -1.0, -0.9, -1.1];
    let p = Tv1dProblem::new(y.clone(), 2.0);
    let z = solve_tv1d(&p);
    assert!(verify_tv1d_kkt(&p, &z, 1e-9)?);

    for (a, b) in y.iter().zip(&z) {
        println!("{a:>6.2} -> {b:>8.4}");
    }
    // three pieces survive
    let pieces = 1 + z.windows(2).filter(|w| (w[1] - w[0]).abs() > 1e-12).count();
    println!("pieces: {pieces}, objective {:.6}", p.objective(&z));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
