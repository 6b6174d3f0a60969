//! The run-complement involution and the two set-partition maps.
//!
//! cargo run --example bijections

use permstat::bijections::{
    flat_partition_forward, flat_partition_inverse, gould_forward, gould_inverse, phi,
};
use permstat::oracle::Oracle;
use permstat::perm::{Class, ClassName, Permutation, Stat};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let oracle = Oracle::default();

    let p: Permutation = "23154".parse()?;
    let q = phi(&p)?;
    println!(
        "phi({p}) = {q}; runs {} -> {}",
        p.stat(Stat::Run),
        q.stat(Stat::Run)
    );

    println!("phi on the increasing permutations of length 4 with two runs:");
    for p in oracle.witnesses(4, &Class::of(ClassName::Increasing), Stat::Run, 2)? {
        println!("  {p} -> {}", phi(&p)?);
    }

    println!("increasing permutations with val = des, length 4:");
    let class = Class::of(ClassName::Increasing).and(ClassName::ValEqDes);
    for p in oracle.enumerate(4, &class)? {
        let b = gould_forward(&p)?;
        println!("  {p} -> {b} -> {}", gould_inverse(&b)?);
    }

    println!("flattened permutations of length 4:");
    for p in oracle.enumerate(4, &Class::of(ClassName::Flattened))? {
        let b = flat_partition_forward(&p)?;
        println!("  {p} -> {b} -> {}", flat_partition_inverse(&b));
    }
    Ok(())
}
