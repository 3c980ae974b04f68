//! The closed-form offline optimum checked against exhaustive search over
//! every purchase schedule.
//!
//! cargo run --release --example offline_oracle

use twolevel_ski::analysis::{brute_force_opt, opt_offline};
use twolevel_ski::model::total_demand;
use twolevel_ski::oracle::{exhaustive_grid, random_instances};
use twolevel_ski::{DemandSequence, PriceConfig};

fn main() -> twolevel_ski::Result<()> {
    let prices = PriceConfig::new(3, 4, 9)?;
    let seq = DemandSequence::from_pairs(&[(1, 2), (2, 5), (1, 1), (3, 3), (0, 0), (2, 1)])?;
    let z = total_demand(&seq, &prices)?;
    println!(
        "z = {:?}: closed form {}, exhaustive {}",
        z.per_item(),
        opt_offline(&z, &prices),
        brute_force_opt(&seq, &prices)?
    );

    let grid = exhaustive_grid(4, 3)?;
    let random = random_instances(1000, 11)?;
    println!("exhaustive grid: {}/{} agree", grid.agreed, grid.checked);
    println!(
        "random instances: {}/{} agree",
        random.agreed, random.checked
    );
    Ok(())
}
