//! The binary code C(DC(n,q)) and its dual: leading weight-distribution terms
//! from the trace histogram, dual weights, and for short codes a check
//! against F_2 linear algebra.
//!
//!     cargo run --example code_weights -- 1 4

use kloosterman_codes::classical::DEFAULT_BUDGET;
use kloosterman_codes::dcsum::coefs;
use kloosterman_codes::gf2r::FieldDescriptor;
use kloosterman_codes::wcode::{
    code_bruteforce_wd, dual_enumerate, dual_kernel, weight_prefix_symplectic, weight_prefix_thm_o,
};

fn main() -> kloosterman_codes::Result<()> {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<u64>().ok());
    let n = args.next().flatten().unwrap_or(1) as u32;
    let q = args.next().flatten().unwrap_or(4);
    let f = FieldDescriptor::of_order(q)?;
    let cs = coefs(n, &f)?;
    println!("length N = {} = {} * {}", cs.n_total, cs.a, cs.b);

    let c = weight_prefix_thm_o(n, &f, 6)?;
    let chat = weight_prefix_symplectic(n, &f, 6)?;
    for j in 0..=6 {
        println!("C_{j} = {:<12} Ĉ_{j} = {}", c.values[j], chat.values[j]);
    }

    let kernel = dual_kernel(n, &f)?;
    let dual = dual_enumerate(n, &f, DEFAULT_BUDGET)?;
    println!("\ndual: {} distinct codewords, kernel size {}", dual.distinct_codewords, kernel.len());
    for e in &dual.entries {
        println!("  a = {:<3} w(c(a)) = {}", e.a.bits(), e.weight);
    }
    match dual.delsarte_verified {
        Some(ok) => println!("trace description of the dual matches linear algebra: {ok}"),
        None => println!("code too long for the linear-algebra check"),
    }

    if let Ok(full) = code_bruteforce_wd(n, &f, DEFAULT_BUDGET) {
        println!("\nfull weight distribution by enumeration: {full:?}");
    }
    Ok(())
}
