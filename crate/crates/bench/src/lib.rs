//! Seeded input generators shared by the benchmarks. Nothing here is
//! part of the public surface; the crate exists to host `benches/`.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dimrank_core::kring::{KClass, Subset, SymKClass};
use dimrank_core::ordered::ConcreteSemigroup;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A dense class with the given support density over `(S^2)^n`.
pub fn dense_class(rng: &mut ChaCha8Rng, n: usize, terms: usize) -> KClass {
    let iter = (0..terms).map(|_| {
        let mask = rng.gen_range(0..(1u64 << n));
        (Subset::from_mask(mask), BigInt::from(rng.gen_range(-9..=9i64)))
    });
    KClass::from_terms(n, iter).expect("valid class")
}

/// A symmetric class with random size-graded coefficients.
pub fn sym_class(rng: &mut ChaCha8Rng, n: usize) -> SymKClass {
    let by_size = (0..=n).map(|_| BigInt::from(rng.gen_range(-9..=9i64))).collect();
    SymKClass::new(n, by_size).expect("valid class")
}

/// A random semigroup in `N^d` together with a member vector built from
/// its generators.
pub fn semigroup_with_member(rng: &mut ChaCha8Rng, d: usize) -> (ConcreteSemigroup, Vec<BigInt>) {
    let generators: Vec<Vec<BigInt>> = (0..4)
        .map(|_| loop {
            let g: Vec<BigInt> =
                (0..d).map(|_| BigInt::from(rng.gen_range(0..=4i64))).collect();
            if g.iter().any(|v| v > &BigInt::from(0)) {
                break g;
            }
        })
        .collect();
    let mut member = vec![BigInt::from(0); d];
    for g in &generators {
        let k = BigInt::from(rng.gen_range(0..=6i64));
        for (m, gi) in member.iter_mut().zip(g) {
            *m += gi * &k;
        }
    }
    (ConcreteSemigroup::new(d, generators).expect("valid semigroup"), member)
}
