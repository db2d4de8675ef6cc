//! Bruhat cells P σ_r P of Sp(4,2) and O(5,2): sizes from the order formulas
//! against a brute-force partition of the group.

use std::collections::HashSet;

use kloosterman_codes::classical::{
    double_coset_elements, enumerate_gl, group_order_data, iota_inverse, is_symplectic, transversal, Family,
    GroupContext, DEFAULT_BUDGET,
};
use kloosterman_codes::gf2r::FieldDescriptor;

fn main() -> kloosterman_codes::Result<()> {
    let f = FieldDescriptor::new(1)?;
    let orders = group_order_data(2, &f);
    println!("|O(5,2)| = {}, |P| = {}", orders.group_order, orders.parabolic_order);
    for (r, size) in orders.cell_sizes.iter().enumerate() {
        println!("r = {r}: |P σ_r P| = {size}, transversal size {}", orders.transversal_sizes[r]);
    }

    let group: Vec<_> = enumerate_gl(f, 4, DEFAULT_BUDGET)?
        .into_iter()
        .filter(|w| is_symplectic(w, 2).unwrap_or(false))
        .collect();
    println!("\nSp(4,2) by filtering GL(4,2): {} elements", group.len());

    let ctx = GroupContext::new(2, f, Family::Symplectic)?;
    let mut covered = HashSet::new();
    for r in 0..=2 {
        let cell: HashSet<_> = double_coset_elements(&ctx, r, DEFAULT_BUDGET)?.collect();
        let coset_reps = transversal(&ctx, r, DEFAULT_BUDGET)?.transversal.len();
        println!("cell r = {r}: {} elements from {coset_reps} coset representatives", cell.len());
        covered.extend(cell);
    }
    let all: HashSet<_> = group.iter().cloned().collect();
    println!("cells cover the group exactly: {}", covered == all);

    let shifted = group
        .iter()
        .filter(|s| {
            let w = iota_inverse(s, 2).unwrap();
            w.trace().unwrap() == s.trace().unwrap() + f.one()
        })
        .count();
    println!("Tr w = Tr ι(w) + 1 for {shifted} of {} lifts to O(5,2)", group.len());
    Ok(())
}
