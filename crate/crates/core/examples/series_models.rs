//! Solve every generating-function model and print its first coefficients.
//!
//! cargo run --example series_models -- 8

use permstat::models::{self, ModelId};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let order: usize = std::env::args().nth(1).map_or(Ok(8), |s| s.parse())?;
    for id in ModelId::ALL {
        let run = models::model_run(id, order)?;
        let residuals_vanish = run.checks.iter().all(|c| c.holds());
        println!("{} (residuals vanish: {residuals_vanish})", id.name());
        for n in 0..=order {
            let a = run.series.egf_coeff(n);
            let coeffs: Vec<String> = a.coeffs().iter().map(|c| c.to_string()).collect();
            println!(
                "  n={n}: {}",
                if coeffs.is_empty() {
                    "0".into()
                } else {
                    coeffs.join(" ")
                }
            );
        }
    }
    Ok(())
}
