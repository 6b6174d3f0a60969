//! Exhaustive distribution tables, witnesses and popularity rows.
//!
//! cargo run --example oracle_tables -- flattened run 7

use permstat::oracle::Oracle;
use permstat::perm::{Class, Stat};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let class: Class = args.first().map_or("increasing", String::as_str).parse()?;
    let stat: Stat = args.get(1).map_or("val", String::as_str).parse()?;
    let n_max: usize = args.get(2).map_or(Ok(7), |s| s.parse())?;

    let oracle = Oracle::default();
    let table = oracle.distribution(&class, stat, n_max)?;
    println!("{class} by {stat}");
    for (n, row) in table.rows().iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
        println!("  n={n}: {}", cells.join(" "));
    }
    let totals: Vec<String> = table
        .popularity()
        .totals
        .iter()
        .map(|t| t.to_string())
        .collect();
    println!("popularity: {}", totals.join(" "));

    let witnesses = oracle.witnesses(4, &class, stat, 1)?;
    let shown: Vec<String> = witnesses.iter().map(|p| p.to_string()).collect();
    println!("length 4 with {stat} = 1: {}", shown.join(" "));
    Ok(())
}
