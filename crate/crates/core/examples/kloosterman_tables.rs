//! Kloosterman sums K(λ; a) over GF(q) and their power moments split by the
//! trace of the argument.
//!
//!     cargo run --example kloosterman_tables -- 16 5

use kloosterman_codes::gf2r::FieldDescriptor;
use kloosterman_codes::ksum::{kloosterman_gl, kloosterman_table, moments};

fn main() -> kloosterman_codes::Result<()> {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<u64>().ok());
    let q = args.next().flatten().unwrap_or(8);
    let hmax = args.next().flatten().unwrap_or(4) as u32;
    let f = FieldDescriptor::of_order(q)?;

    let table = kloosterman_table(&f);
    println!("a  tr(a)  K(a)");
    for (a, k) in table.iter() {
        println!("{:<3} {:<5} {k}", a.bits(), a.trace());
    }
    let bound = 4 * q as i64;
    assert!(table.iter().all(|(_, k)| k * k <= bound));

    println!("\nh  MK^h  T0K^h  T1K^h");
    for h in 0..=hmax {
        let m = moments(&f, h);
        println!("{h}  {}  {}  {}", m.mk, m.t0k, m.t1k);
    }

    println!("\nGL(t, {q}) Kloosterman sums at a = 1:");
    for t in 0..=4 {
        println!("t = {t}: {}", kloosterman_gl(&f, t, f.one(), f.one())?);
    }
    Ok(())
}
