use pezzo_core::delpezzo::{Degree, DelPezzo};
use pezzo_core::lattice::Sublattice;
use pezzo_core::mirror::strata_poset;
use std::time::Instant;

fn main() {
    let mut degs: Vec<Degree> = (2..=9).rev().map(Degree::Standard).collect();
    degs.insert(0, Degree::Quadric);
    for d in degs {
        let dp = DelPezzo::new(d);
        let zero = Sublattice::from_generators(dp.picard(), &[]);
        let t = Instant::now();
        let poset = strata_poset(&dp, &zero).unwrap();
        println!(
            "d={}: {} classes, {} covers, {:.2?}",
            d,
            poset.strata().len(),
            poset.covers().len(),
            t.elapsed()
        );
    }
    let dp = DelPezzo::new(Degree::Standard(1));
    let zero = Sublattice::from_generators(dp.picard(), &[]);
    let t = Instant::now();
    let poset = strata_poset(&dp, &zero).unwrap();
    println!(
        "d=1: {} classes, {} covers, {:.2?}",
        poset.strata().len(),
        poset.covers().len(),
        t.elapsed()
    );
}
