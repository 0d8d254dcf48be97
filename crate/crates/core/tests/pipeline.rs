//! Integration checks of the full pipeline on the bundled family witnesses
//! and a few degenerate diagrams.

use num_bigint::BigInt;
use num_traits::Signed;

use prym_core::covers::{
    fiber_product, is_etale, relative_ramification, BranchedCover, CoverMorphism, PairDiagram,
};
use prym_core::group::{cyclic_etale_factorization_exists, deck_group};
use prym_core::homology::DiagramHomology;
use prym_core::intmat::{bi, det, lattice_eq, rank, solve_left};
use prym_core::lattice::{
    intersection_order, prym_lattice, verify_order_identity, verify_sequence_orders,
    PolarizedLattice,
};
use prym_core::perm::Perm;
use prym_core::random::{random_cover, rng_from_seed};
use prym_core::specfile::{self, bundled};
use prym_core::surface::CwSurface;

const BUDGET: u64 = 10_000_000;

fn ramified_witness() -> PairDiagram {
    specfile::parse_diagram(bundled::FAMILY_RAMIFIED_MIN).unwrap()
}

fn etale_witness() -> PairDiagram {
    specfile::parse_diagram(bundled::FAMILY_ETALE_DIM5).unwrap()
}

#[test]
fn relative_ramification_of_etale_witness_projections() {
    let d = etale_witness();
    assert_eq!(relative_ramification(&d.f2).unwrap(), 0);
    assert!(is_etale(&d.f2).unwrap());
    assert_eq!(relative_ramification(&d.f1).unwrap(), 14);
    assert!(!is_etale(&d.f1).unwrap());
}

#[test]
fn factorization_flags_on_witnesses() {
    let a = ramified_witness();
    assert!(!cyclic_etale_factorization_exists(&a.f1, BUDGET).unwrap());
    assert!(!cyclic_etale_factorization_exists(&a.f2, BUDGET).unwrap());
    let b = etale_witness();
    assert!(!cyclic_etale_factorization_exists(&b.f1, BUDGET).unwrap());
    assert!(cyclic_etale_factorization_exists(&b.f2, BUDGET).unwrap());
}

#[test]
fn deck_groups_on_witnesses() {
    let a = ramified_witness();
    // a degree-2 morphism is always Galois with deck group of order 2
    let deck_f1 = deck_group(&a.f1, BUDGET).unwrap();
    assert_eq!(deck_f1.order, 2);
    assert!(deck_f1.is_galois && deck_f1.is_cyclic);
    let b = etale_witness();
    let deck_f2 = deck_group(&b.f2, BUDGET).unwrap();
    assert_eq!(
        (deck_f2.order, deck_f2.is_cyclic, deck_f2.is_galois),
        (3, true, true)
    );
}

#[test]
fn etale_witness_surface_euler_characteristic() {
    let d = etale_witness();
    let s = CwSurface::build(&d.x, None).unwrap();
    let chi = s.sheets as i64 - s.edge_count() as i64 + s.faces.len() as i64;
    assert_eq!(chi, 2 - 2 * 16);
}

#[test]
fn prym_lattice_ranks() {
    let a = ramified_witness();
    let dh = DiagramHomology::build(&a).unwrap();
    let ambient = PolarizedLattice::new(dh.x.intersection.clone()).unwrap();
    // full lattice for the structural morphism to the line
    let to_base = CoverMorphism::to_base(&a.x);
    let positions = dh.labels.clone();
    let hline =
        prym_core::homology::SurfaceHomology::new(to_base.target(), Some(&positions)).unwrap();
    let push = prym_core::homology::pushforward(&to_base, &dh.x, &hline).unwrap();
    assert_eq!(prym_lattice(&push, &ambient).rank(), 2 * 12);
    // ker N_{f1} has rank 2 (g(X) - g(X1)) = 16
    assert_eq!(prym_lattice(&dh.push1, &ambient).rank(), 16);
    assert_eq!(rank(&dh.push1.matrix), 2 * 4);

    let b = etale_witness();
    let dh = DiagramHomology::build(&b).unwrap();
    let ambient = PolarizedLattice::new(dh.x.intersection.clone()).unwrap();
    assert_eq!(prym_lattice(&dh.push2, &ambient).rank(), 2 * (16 - 6));
}

#[test]
fn transfer_torsion_detects_the_cyclic_etale_factorization() {
    let a = ramified_witness();
    let (_, pl) = prym_core::report::analyze_lattices(&a).unwrap();
    assert_eq!(pl.transfer_torsion_f2, bi(1));
    let b = etale_witness();
    let (_, pl) = prym_core::report::analyze_lattices(&b).unwrap();
    // the pulled-back lattice has index 3: the order of ker f2^*
    assert_eq!(pl.transfer_torsion_f2, bi(3));
    // transfer itself is injective on homology
    let dh = DiagramHomology::build(&b).unwrap();
    assert_eq!(rank(&dh.trans2.matrix), 2 * 6);
}

#[test]
fn order_identities_inside_the_first_prym_lattice() {
    // the decomposition proof runs inside (ker N_{f1}, restricted form):
    // the pulled-back second factor and the pair's Prym lattice are
    // complementary there, and their intersection realizes the kernel group
    // of the pulled-back polarization
    let d = ramified_witness();
    let (_, pl) = prym_core::report::analyze_lattices(&d).unwrap();
    let inner = PolarizedLattice::new(pl.p_f1.restricted_form()).unwrap();
    let a_coords = solve_left(pl.p_f1.basis(), pl.pulled_x2.basis()).unwrap();
    let p_coords = solve_left(pl.p_f1.basis(), pl.prym_pair.basis()).unwrap();
    let a2 = inner.sublattice(a_coords).unwrap();
    let p2 = inner.sublattice(p_coords).unwrap();
    assert!(a2.is_saturated());
    assert!(p2.is_saturated());

    let cap = intersection_order(&a2, &p2).unwrap();
    let k_a = a2.kernel_group().unwrap();
    assert_eq!(cap, k_a.order.clone());
    assert_eq!(cap, BigInt::from(6561)); // 3^8

    let idents = verify_order_identity(&a2).unwrap();
    assert_eq!(idents.k_l, BigInt::from(256)); // |K(L)| = 2^8
    let seq = verify_sequence_orders(&a2).unwrap();
    // K(L) and the pulled-back subtorus meet trivially, so the whole kernel
    // order of L_P comes from the intersection with the complement
    assert_eq!(seq.k_l_cap_p, BigInt::from(256));
    assert_eq!(seq.k_lp, BigInt::from(256) * BigInt::from(6561));
}

#[test]
fn trivial_second_factor_gives_the_plain_prym_lattice() {
    // g2 of degree 1: f1 is an isomorphism, the pulled-back factor is
    // trivial, and the pair construction collapses onto ker N_{f1}
    let t = Perm::from_cycles(2, &[vec![0, 1]]).unwrap();
    let labels: Vec<String> = (1..=6).map(|i| format!("b{i:02}")).collect();
    let g1 = BranchedCover::from_parts(2, labels.clone(), vec![t; 6]).unwrap();
    let g2 = BranchedCover::projective_line(labels);
    let d = PairDiagram::build(&g1, &g2).unwrap();
    assert_eq!(d.params.as_tuple(), (2, 1, 3, 0, 0, 3));
    assert_eq!(d.f1.degree(), 1);
    assert_eq!(d.params.dim_p(), 0);
    let (dh, pl) = prym_core::report::analyze_lattices(&d).unwrap();
    assert!(lattice_eq(pl.prym_pair.basis(), pl.p_f1.basis()));
    assert_eq!(pl.prym_pair.rank(), 0);
    assert_eq!(dh.x.rank, 4);
    // the second factor is the line, so its pullback is trivial
    assert_eq!(pl.pulled_x2.rank(), 0);
}

#[test]
fn component_degrees_sum_to_the_product() {
    let mut rng = rng_from_seed(17);
    for _ in 0..10 {
        let g1 = random_cover(3, 5, &mut rng);
        let g2 = random_cover(2, 5, &mut rng);
        let comps = fiber_product(&g1, &g2).unwrap();
        let total: usize = comps.iter().map(|c| c.cover.degree()).sum();
        assert_eq!(total, 6);
    }
}

#[test]
fn intersection_forms_are_unimodular_on_witness_surfaces() {
    for text in [bundled::FAMILY_RAMIFIED_MIN, bundled::FAMILY_ETALE_DIM5] {
        let d = specfile::parse_diagram(text).unwrap();
        let dh = DiagramHomology::build(&d).unwrap();
        for h in [&dh.x, &dh.x1, &dh.x2] {
            assert_eq!(det(&h.intersection).abs(), bi(1));
            assert_eq!(h.intersection.transpose(), h.intersection.neg());
        }
        assert_eq!(dh.x.rank, 2 * d.x.genus());
    }
}

#[test]
fn mirror_side_lattice_types_on_witnesses() {
    let to_i64 =
        |d: &[BigInt]| -> Vec<i64> { d.iter().map(|v| i64::try_from(v).unwrap()).collect() };
    // ramified witness: ker N_{f2} carries g(X2) = 4 threes, the pulled-back
    // first factor g(X1) = 4 twos
    let (_, pl) = prym_core::report::analyze_lattices(&ramified_witness()).unwrap();
    assert_eq!(pl.p_f2.rank(), 16);
    assert_eq!(
        to_i64(&pl.p_f2.restricted_type().unwrap().divisors),
        vec![1, 1, 1, 1, 3, 3, 3, 3]
    );
    assert_eq!(pl.pulled_x1.rank(), 8);
    assert_eq!(
        to_i64(&pl.pulled_x1.restricted_type().unwrap().divisors),
        vec![2, 2, 2, 2]
    );
    // etale witness: g(X2) - 1 = 5 threes on the kernel side, g(X1) = 5 twos
    // on the pulled-back side
    let (_, pl) = prym_core::report::analyze_lattices(&etale_witness()).unwrap();
    assert_eq!(pl.p_f2.rank(), 20);
    assert_eq!(
        to_i64(&pl.p_f2.restricted_type().unwrap().divisors),
        vec![1, 1, 1, 1, 1, 3, 3, 3, 3, 3]
    );
    assert_eq!(pl.pulled_x1.rank(), 10);
    assert_eq!(
        to_i64(&pl.pulled_x1.restricted_type().unwrap().divisors),
        vec![2, 2, 2, 2, 2]
    );
}

#[test]
fn witness_search_is_deterministic() {
    use prym_core::classification::HurwitzParams;
    use prym_core::witness::{witness_search, SearchBudget};
    let p = HurwitzParams::new(3, 2, 6, 5, 5, 2).unwrap();
    let a = witness_search(&p, SearchBudget::default()).unwrap();
    let b = witness_search(&p, SearchBudget::default()).unwrap();
    assert_eq!(specfile::emit(&a.g1, &a.g2), specfile::emit(&b.g1, &b.g2));
}

#[test]
fn fully_trivial_pair_analyzes_cleanly() {
    let t = "cover g1\ndegree 1\n\ncover g2\ndegree 1\n";
    let d = specfile::parse_diagram(t).unwrap();
    let r = prym_core::report::analyze(&d).unwrap();
    assert_eq!(r.dim_p, 0);
    assert_eq!(r.theta_on_prym_pair.divisors.len(), 0);
    assert!(!r.prym_tyurin_exponent_six);
}

#[test]
fn intersection_matrix_is_independent_of_walk_decomposition() {
    // recompute the form by decomposing each basis chain into closed walks
    // directly, instead of transporting the fundamental-cycle pairing
    let mut rng = rng_from_seed(31);
    for _ in 0..8 {
        let c = random_cover(3, 6, &mut rng);
        let h = prym_core::homology::SurfaceHomology::new(&c, None).unwrap();
        let s = &h.surface;
        for i in 0..h.rank {
            let chain_i = h.basis_chains.row_vec(i);
            for j in 0..h.rank {
                let chain_j = h.basis_chains.row_vec(j);
                let mut total = BigInt::from(0);
                for walk in s.walks_of_chain(&chain_j).unwrap() {
                    total += s.pairing(&chain_i, &walk);
                }
                assert_eq!(total, h.intersection[(i, j)]);
            }
        }
    }
}

#[test]
fn family_pair_has_no_common_factorization() {
    use prym_core::group::common_factorization_exists;
    let a = ramified_witness();
    assert!(!common_factorization_exists(&a.g1, &a.g2, BUDGET).unwrap());
    let b = etale_witness();
    assert!(!common_factorization_exists(&b.g1, &b.g2, BUDGET).unwrap());
}

#[test]
fn first_prym_lattice_is_not_twice_principal() {
    use prym_core::lattice::prym_tyurin_check;
    // its type carries leading ones, so it is not 2 times a principal form
    let (_, pl) = prym_core::report::analyze_lattices(&ramified_witness()).unwrap();
    assert!(!prym_tyurin_check(&pl.p_f1, 2).unwrap());
    assert!(prym_tyurin_check(&pl.prym_pair, 6).unwrap());
}

#[test]
fn projector_guard_rejects_other_degree_pairs() {
    use prym_core::lattice::{kanev_endomorphism, prym_lattices};
    let t = "cover g1\ndegree 1\n\ncover g2\ndegree 1\n";
    let d = specfile::parse_diagram(t).unwrap();
    let dh = DiagramHomology::build(&d).unwrap();
    let pl = prym_lattices(&dh).unwrap();
    assert!(matches!(
        kanev_endomorphism(&dh, &pl, &d.params),
        Err(prym_core::Error::WrongRegime(1, 1))
    ));
}
