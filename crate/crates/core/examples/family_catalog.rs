//! Builtin families, global indices and finite deletions.

use limitgen::family::BUILTINS;
use limitgen::Family;

fn main() {
    for name in BUILTINS {
        let f = Family::builtin(name).unwrap();
        let first: Vec<String> = (0..5).map(|i| format!("{} = {}", f.label(i), f.language_at(i).map_or("-".into(), |l| l.to_string()))).collect();
        println!("{name}:");
        for line in first {
            println!("  {line}");
        }
    }

    let ex2 = Family::builtin("ex2-specials").unwrap();
    let trimmed = ex2.remove_strings(&[0, 1]);
    println!("ex2 without both specials: L_0 = {}", trimmed.language_at(0).unwrap());
    let seen = [4u64, 6, 8];
    let consistent = ex2.consistent_prefix(&seen, 4);
    println!("first consistent with {seen:?}: {:?}", consistent.iter().map(|(i, _)| ex2.label(*i)).collect::<Vec<_>>());
}
