//! Statistics and class membership of a single permutation.
//!
//! cargo run --example statistics -- 23154

use permstat::perm::{ClassName, Permutation, Stat};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let input = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "612847593".into());
    let p: Permutation = input.parse()?;
    println!("permutation {p}");
    for stat in Stat::ALL {
        println!("  {stat:<4} {}", p.stat(stat));
    }
    println!("  valley heights {:?}", p.valley_heights());
    let classes = [
        ClassName::Increasing,
        ClassName::Flattened,
        ClassName::Valleyless,
        ClassName::Alternating,
        ClassName::ValEqDes,
    ];
    for class in classes {
        println!("  {class:<12} {}", p.is(class));
    }
    Ok(())
}
