//! Exact algebra and densities of ultimately periodic sets.

use limitgen::UPSet;

fn main() {
    let evens = UPSet::evens();
    let threes = UPSet::multiples(3);
    let sixes = evens.intersect(&threes);
    println!("evens ∩ 3N = {sixes}");
    println!("evens ∪ 3N density = {}", evens.union(&threes).natural_density());
    println!("N ∖ {{1, 4}} = {}", UPSet::cofinite([1, 4]));

    let odd_tail = UPSet::periodic(2, [1]).with([0]).without([3]);
    println!("odds + 0 - 3: first ten {:?}", odd_tail.iter().take(10).collect::<Vec<_>>());
    println!("rank below 100 = {}, 50th member = {}", odd_tail.rank(100), odd_tail.nth(50).unwrap());
    println!("successor of 8 = {}", odd_tail.successor(8).unwrap());
    println!("3N relative to evens = {}", UPSet::relative_density(&sixes, &evens).unwrap());
    println!("evens ⊆ N: {}, evens ⊆ 3N: {}", evens.is_subset(&UPSet::naturals()), evens.is_subset(&threes));
    println!("json: {}", sixes.to_json());
}
