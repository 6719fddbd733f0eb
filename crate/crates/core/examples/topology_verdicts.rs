//! Verdict table, tell-tale sets and the partial specialization preorder.

use limitgen::family::BUILTINS;
use limitgen::topology::{angluin_full, render_table, spec_preorder_partial, verdict_table};
use limitgen::{Family, UPSet};

fn main() {
    let families: Vec<Family> = BUILTINS.iter().map(|n| Family::builtin(n).unwrap()).collect();
    print!("{}", render_table(&verdict_table(&families).unwrap()));

    let ex2 = Family::builtin("ex2-specials").unwrap();
    println!("ex2: {}", angluin_full(&ex2).unwrap());
    println!("ex2 minus specials: {}", angluin_full(&ex2.remove_strings(&[0, 1])).unwrap());

    let ex3 = Family::builtin("ex3-cosingleton").unwrap();
    let p = spec_preorder_partial(&ex3, &UPSet::evens(), 10).unwrap();
    for class in &p.classes {
        let labels: Vec<&str> = class.iter().map(|&q| p.labels[q].as_str()).collect();
        println!("class {labels:?}");
    }
}
