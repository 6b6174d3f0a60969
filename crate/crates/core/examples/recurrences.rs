//! Recurrence tables next to the classical triangles they refine.
//!
//! cargo run --example recurrences -- 10

use permstat::recurrences::{Family, Recurrences, ValEqDesClass};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n_max: usize = std::env::args().nth(1).map_or(Ok(10), |s| s.parse())?;
    let rec = Recurrences::new(n_max);
    for family in Family::ALL {
        println!("{family}");
        for (n, row) in rec.table(family, n_max).rows().iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            println!("  n={n}: {}", cells.join(" "));
        }
    }
    let counts: Vec<String> = (0..=n_max).map(|n| rec.inc_count(n).to_string()).collect();
    println!("increasing counts: {}", counts.join(" "));
    let bell: Vec<String> = (0..=n_max)
        .map(|n| rec.cache().bell(n).to_string())
        .collect();
    println!("Bell numbers:      {}", bell.join(" "));
    let ved: Vec<String> = (1..=n_max)
        .map(|n| {
            rec.val_eq_des_count(n, ValEqDesClass::Increasing)
                .to_string()
        })
        .collect();
    println!("val = des (increasing, n>=1): {}", ved.join(" "));
    Ok(())
}
