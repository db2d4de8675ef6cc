//! Odd power moments of Kloosterman sums over trace-one arguments, computed
//! from the weight distributions of the double-coset codes and compared with
//! direct summation. Also the companion recursion for the full moments MK^h.
//!
//!     cargo run --example trace_one_recursion -- 3 4 9

use kloosterman_codes::gf2r::FieldDescriptor;
use kloosterman_codes::ksum::moments;
use kloosterman_codes::pmi::{mk_recursive, RecursionSession};

fn main() -> kloosterman_codes::Result<()> {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<u64>().ok());
    let n = args.next().flatten().unwrap_or(1) as u32;
    let q = args.next().flatten().unwrap_or(8);
    let hmax = args.next().flatten().unwrap_or(9) as u32;
    let f = FieldDescriptor::of_order(q)?;

    let mut session = RecursionSession::new(n, &f)?;
    println!("(n, q) = ({n}, {q})");
    for h in (1..=hmax).step_by(2) {
        let report = session.report(h, true)?;
        let direct = report.t1k_direct.expect("requested");
        println!("T1K^{h:<2} = {:<16} direct {direct}", report.t1k_recursive);
    }
    println!("D_j = C_j - Ĉ_j: {:?}", session.d_values(hmax)?.iter().map(|d| d.to_string()).collect::<Vec<_>>());

    for h in 1..=hmax.min(7) {
        println!("MK^{h} = {} (direct {})", mk_recursive(n, &f, h)?, moments(&f, h).mk);
    }
    Ok(())
}
