// Shorter trails slow ADMM down.

use trailfuse::{trail_halving_experiment, BenchSettings};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let settings = BenchSettings { n_trials: 3, master_seed: 11, ..BenchSettings::default() };
    let levels = trail_halving_experiment(32, 32, 3, &settings)?;
    println!("{:>5} {:>7} {:>10} {:>8}", "level", "trails", "mean steps", "se");
    for l in &levels {
        println!("{:>5} {:>7} {:>10.1} {:>8.2}", l.level, l.n_trails, l.mean_steps, l.std_error);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
