//! Alternating increasing permutations: series, double factorials, enumeration.
//!
//! cargo run --example alternating -- 9

use permstat::models::{self, ModelId};
use permstat::oracle::Oracle;
use permstat::perm::{Class, ClassName};
use permstat::recurrences::Recurrences;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let order: usize = std::env::args().nth(1).map_or(Ok(9), |s| s.parse())?;
    let series = models::model(ModelId::AAlt, order)?;
    let rec = Recurrences::new(order);
    let class = Class::of(ClassName::Increasing).and(ClassName::Alternating);
    let oracle = Oracle::default();
    println!("n  series  formula  enumerated");
    for (n, a) in models::egf_counts(&series).iter().enumerate() {
        let counted = if n <= oracle.limit() {
            oracle.enumerate(n, &class)?.count().to_string()
        } else {
            "-".into()
        };
        println!("{n:<2} {a:<7} {:<8} {counted}", rec.alternating_count(n));
    }
    Ok(())
}
