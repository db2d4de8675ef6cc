//! Exponential sums Σ λ(c Tr w) over every Bruhat cell of O(2n+1,q), from
//! enumerated trace histograms and from the product formula.
//!
//!     cargo run --release --example exponential_sums -- 2 4

use kloosterman_codes::classical::{dc_trace_histogram, GroupContext, DEFAULT_BUDGET};
use kloosterman_codes::dcsum::{coefs, expsum_closed, expsum_dc};
use kloosterman_codes::gf2r::FieldDescriptor;
use kloosterman_codes::ksum::kloosterman;

fn main() -> kloosterman_codes::Result<()> {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<u64>().ok());
    let n = args.next().flatten().unwrap_or(2) as u32;
    let q = args.next().flatten().unwrap_or(4);
    let f = FieldDescriptor::of_order(q)?;
    let ctx = GroupContext::orthogonal(n as usize, f)?;

    for r in 0..=n {
        let hist = dc_trace_histogram(&ctx, r as usize, DEFAULT_BUDGET, 4)?;
        println!("r = {r} ({} elements)", hist.total());
        for c in f.nonzero_elements() {
            let direct = hist.character_sum(c);
            let closed = expsum_closed(n, r, &f, c)?;
            println!("  c = {:<3} enumerated {direct:<10} formula {closed}", c.bits());
        }
    }

    if n % 2 == 1 {
        let a = coefs(n, &f)?.a;
        println!("\nover DC({n},{q}), A = {a}:");
        for c in f.nonzero_elements() {
            let k = kloosterman(&f, c, f.one())?;
            println!("  c = {:<3} λ(c) A K(c) = {}", c.bits(), expsum_dc(n, &f, c)?);
            assert_eq!(expsum_dc(n, &f, c)?, num_bigint::BigInt::from(a.clone()) * (c.lambda() * k));
        }
    }
    Ok(())
}
