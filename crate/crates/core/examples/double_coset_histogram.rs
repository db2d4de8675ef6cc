//! Streams the traces of DC(n,q) = P σ_{n-1} P in O(2n+1,q) and compares the
//! histogram with the closed-form distribution n(β).
//!
//!     cargo run --release --example double_coset_histogram -- 3 2

use std::time::Instant;

use kloosterman_codes::classical::{dc_trace_histogram, GroupContext, DEFAULT_BUDGET};
use kloosterman_codes::dcsum::dc_histogram_closed;
use kloosterman_codes::gf2r::FieldDescriptor;

fn main() -> kloosterman_codes::Result<()> {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<u64>().ok());
    let n = args.next().flatten().unwrap_or(3) as usize;
    let q = args.next().flatten().unwrap_or(2);
    let f = FieldDescriptor::of_order(q)?;
    let ctx = GroupContext::orthogonal(n, f)?;
    let workers = std::thread::available_parallelism().map(|w| w.get()).unwrap_or(1);

    let start = Instant::now();
    let hist = dc_trace_histogram(&ctx, n - 1, DEFAULT_BUDGET, workers)?;
    println!("enumerated {} elements in {:.2?} (workers: {workers})", hist.total(), start.elapsed());

    let closed = dc_histogram_closed(n as u32, &f)?;
    println!("beta  enumerated  closed form");
    for ((beta, count), (_, expect)) in hist.iter().zip(closed.iter()) {
        let mark = if count == expect { "" } else { "  MISMATCH" };
        println!("{:<5} {count:<11} {expect}{mark}", beta.bits());
    }
    println!("Σ n(β) β = {}", closed.weighted_sum());
    Ok(())
}
