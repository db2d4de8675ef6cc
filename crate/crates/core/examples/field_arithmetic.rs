//! Arithmetic in GF(2^r): products, inverses, square roots and the absolute
//! trace, under the built-in modulus and an alternative one.
//!
//!     cargo run --example field_arithmetic -- 4

use kloosterman_codes::gf2r::FieldDescriptor;

fn main() -> kloosterman_codes::Result<()> {
    let r: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let f = FieldDescriptor::new(r)?;
    println!("GF({}) with modulus {:#x}", f.order(), f.modulus());

    let g = f.element(2)?;
    println!("powers of x:");
    let mut p = f.one();
    for k in 0..f.order() {
        print!(" {}", p.bits());
        p *= g;
        if p == f.one() {
            println!("\norder of x: {}", k + 1);
            break;
        }
    }

    println!("{:>4} {:>4} {:>4} {:>3} {:>3}", "a", "1/a", "sqrt", "tr", "λ");
    for a in f.nonzero_elements().take(16) {
        println!("{:>4} {:>4} {:>4} {:>3} {:>3}", a.bits(), a.inv()?.bits(), a.sqrt().bits(), a.trace(), a.lambda());
    }
    let trace_one = f.elements().filter(|a| a.trace() == 1).count();
    println!("{trace_one} of {} elements have trace 1", f.order());

    if r == 4 {
        let other = FieldDescriptor::with_modulus(4, 0x19)?;
        let count = other.elements().filter(|a| a.trace() == 1).count();
        println!("under modulus 0x19: {count} elements of trace 1");
    }
    Ok(())
}
