//! The four boundary classes behind the peak model, and their assembly.
//!
//! cargo run --example peak_system -- 8

use permstat::models::{self, ModelId};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let order: usize = std::env::args().nth(1).map_or(Ok(8), |s| s.parse())?;
    for table in models::boundary_tables(order)? {
        println!("{} by valleys", table.class);
        for (n, row) in table.rows().iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            println!("  n={n}: {}", cells.join(" "));
        }
    }
    let sys = models::peak_system(order)?;
    println!("I11 divisible by y: {}", sys.i11.divide_by_y().is_ok());
    let peaks = models::table_from_model(ModelId::IPeak, order)?;
    println!("increasing by peaks");
    for (n, row) in peaks.rows().iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
        println!("  n={n}: {}", cells.join(" "));
    }
    Ok(())
}
