//! Pless power moment identity for the dual of C(DC(1,q)): power sums of the
//! dual weights against the code's own weight distribution.
//!
//!     cargo run --example pless_identity -- 16 8

use kloosterman_codes::classical::DEFAULT_BUDGET;
use kloosterman_codes::dcsum::coefs;
use kloosterman_codes::gf2r::FieldDescriptor;
use kloosterman_codes::pmi::{pless_check, stirling2};
use kloosterman_codes::wcode::{dual_enumerate, dual_kernel, weight_prefix_thm_o};

fn main() -> kloosterman_codes::Result<()> {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<u64>().ok());
    let q = args.next().flatten().unwrap_or(8);
    let hmax = args.next().flatten().unwrap_or(6) as u32;
    let f = FieldDescriptor::of_order(q)?;

    print!("S(6, t):");
    for t in 0..=6 {
        print!(" {}", stirling2(6, t));
    }
    println!();

    let len = coefs(1, &f)?.n_total;
    let dual = dual_enumerate(1, &f, DEFAULT_BUDGET)?;
    let weights = dual.distinct_weights(&dual_kernel(1, &f)?);
    let k = f.order().trailing_zeros();
    println!("N = {len}, dual dimension {k}");
    for h in 1..=hmax {
        let prefix = weight_prefix_thm_o(1, &f, h as usize)?;
        let sides = pless_check(&len, k, &weights, &prefix, h)?;
        println!("h = {h:<2} Σ w^h = {}  rhs = {}  {}", sides.lhs, sides.rhs, if sides.holds() { "ok" } else { "MISMATCH" });
    }
    Ok(())
}
