//! Seeded random instances for the verification suites: valid monodromy
//! tuples, pair diagrams, polarized lattices, and saturated sublattices.

use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::covers::{BranchedCover, PairDiagram};
use crate::intmat::{bi, det, rank, saturation, IMat};
use crate::lattice::{PolarizedLattice, Sublattice};
use crate::perm::{is_transitive, Perm};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random connected cover: uniform permutations with the last label forced
/// to the inverse of the running product, retried until transitive and not
/// entirely unbranched.
pub fn random_cover<R: Rng>(degree: usize, label_count: usize, rng: &mut R) -> BranchedCover {
    let labels: Vec<String> = (1..=label_count).map(|i| format!("b{i:02}")).collect();
    loop {
        let mut perms: Vec<Perm> = (0..label_count - 1)
            .map(|_| Perm::random(degree, rng))
            .collect();
        let product = perms
            .iter()
            .fold(Perm::identity(degree), |acc, p| acc.compose(p));
        perms.push(product.inverse());
        let refs: Vec<&Perm> = perms.iter().collect();
        if !is_transitive(degree, &refs) {
            continue;
        }
        if perms.iter().all(|p| p.is_identity()) {
            continue;
        }
        if let Ok(c) = BranchedCover::from_parts(degree, labels.clone(), perms) {
            return c;
        }
    }
}

/// A random pair diagram on a random component of the fiber product of two
/// random covers.
pub fn random_diagram<R: Rng>(max_degree: usize, max_labels: usize, rng: &mut R) -> PairDiagram {
    loop {
        let d1 = rng.gen_range(2..=max_degree);
        let d2 = rng.gen_range(2..=max_degree);
        let k = rng.gen_range(3..=max_labels);
        let g1 = random_cover(d1, k, rng);
        let g2 = random_cover(d2, k, rng);
        let Ok(components) = crate::covers::fiber_product(&g1, &g2) else {
            continue;
        };
        let idx = rng.gen_range(0..components.len());
        if let Ok(d) = PairDiagram::build_with_component(&g1, &g2, idx) {
            return d;
        }
    }
}

/// A random nondegenerate alternating form of the given even rank with
/// entries bounded by `max_entry`.
pub fn random_polarized_lattice<R: Rng>(
    rank2g: usize,
    max_entry: i64,
    rng: &mut R,
) -> PolarizedLattice {
    assert!(rank2g.is_multiple_of(2) && rank2g > 0);
    loop {
        let mut form = IMat::zeros(rank2g, rank2g);
        for i in 0..rank2g {
            for j in i + 1..rank2g {
                let v = rng.gen_range(-max_entry..=max_entry);
                form[(i, j)] = bi(v);
                form[(j, i)] = bi(-v);
            }
        }
        if !det(&form).is_zero() {
            return PolarizedLattice::new(form).expect("alternating nondegenerate");
        }
    }
}

/// A random saturated sublattice of even rank whose restricted form is
/// nondegenerate.
pub fn random_abelian_sublattice<R: Rng>(
    ambient: &PolarizedLattice,
    rank2m: usize,
    rng: &mut R,
) -> Sublattice {
    assert!(rank2m.is_multiple_of(2) && rank2m > 0 && rank2m < ambient.rank());
    loop {
        let raw = IMat::from_fn(rank2m, ambient.rank(), |_, _| bi(rng.gen_range(-3..=3)));
        if rank(&raw) != rank2m {
            continue;
        }
        let basis = saturation(&raw);
        let sub = ambient.sublattice(basis).expect("saturated basis");
        let restricted = sub.restricted_form();
        if det(&restricted).is_zero() {
            continue;
        }
        return sub;
    }
}
