//! Full-pipeline analysis of a pair diagram and the randomized verification
//! suites behind the command-line `verify`.

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;

use crate::classification::{family_of, moduli_dimension, HurwitzParams};
use crate::covers::{is_etale, CoverMorphism, PairDiagram};
use crate::error::{Error, Result};
use crate::group::{common_factorization_exists, cyclic_etale_factorization_exists, deck_group};
use crate::homology::DiagramHomology;
use crate::intmat::{det, lattice_eq, rank, IMat};
use crate::lattice::{
    intersection_order, kanev_endomorphism, kernel_intersection_order, prym_lattices,
    prym_tyurin_check, seshadri_upper_bound, verify_kernel_decomposition, verify_order_identity,
    verify_sequence_orders, PrymLattices, Sublattice,
};
use crate::random::{
    random_abelian_sublattice, random_cover, random_diagram, random_polarized_lattice,
    rng_from_seed,
};

pub const SCHEMA_VERSION: u32 = 1;

const FLAG_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug, Serialize)]
pub struct TypeSection {
    pub divisors: Vec<String>,
    pub kernel_order: String,
    pub exponent: String,
    pub rank: usize,
}

impl TypeSection {
    fn of(sub: &Sublattice) -> Result<TypeSection> {
        let t = sub.restricted_type()?;
        let k = crate::lattice::KernelGroup::from_type(&t);
        Ok(TypeSection {
            divisors: t.divisors.iter().map(|d| d.to_string()).collect(),
            kernel_order: k.order.to_string(),
            exponent: k.exponent.to_string(),
            rank: sub.rank(),
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DeckSection {
    pub order: usize,
    pub is_cyclic: bool,
    pub is_galois: bool,
    pub is_abelian: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionsSection {
    /// the two factors admit no common intermediate cover of degree >= 2
    pub no_common_factorization: bool,
    pub product_irreducible: bool,
    pub degrees_coprime: bool,
    pub f1_factors_cyclic_etale: bool,
    pub f2_factors_cyclic_etale: bool,
    pub f2_etale: bool,
    pub f2_deck: DeckSection,
    /// deck group of the composed degree-(d1 d2) cover of the line
    pub composed_deck: DeckSection,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionSection {
    pub holds: bool,
    pub mirror_holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilySection {
    pub family: String,
    pub dim: i64,
    pub exponent: i64,
    pub moduli_dimension: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProjectorSection {
    pub idempotent_scaled: bool,
    pub symmetric: bool,
    pub rank: usize,
    pub image_is_prym_pair: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RationalSection {
    pub numer: String,
    pub denom: String,
}

/// Integer matrices serialized row-major as decimal strings.
#[derive(Clone, Debug, Serialize)]
pub struct LatticeSection {
    /// intersection form of the total-space homology lattice
    pub intersection_form_x: Vec<Vec<String>>,
    /// basis rows of ker N_{f1} in the total-space coordinates
    pub p_f1_basis: Vec<Vec<String>>,
    /// basis rows of the saturated pullback of the second factor
    pub pulled_x2_basis: Vec<Vec<String>>,
    /// basis rows of the Prym lattice of the pair
    pub prym_pair_basis: Vec<Vec<String>>,
}

fn matrix_rows(m: &IMat) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|v| v.to_string()).collect())
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalyzeReport {
    pub schema_version: u32,
    pub params: HurwitzParams,
    pub genus_x1: usize,
    pub genus_x2: usize,
    pub genus_x: usize,
    pub dim_p: i64,
    pub conditions: ConditionsSection,
    /// restriction of the total polarization to ker N_{f1}
    pub theta_on_p_f1: TypeSection,
    /// restriction to the saturated pullback of the second factor
    pub theta_on_pulled_x2: TypeSection,
    /// restriction to the Prym lattice of the pair
    pub theta_on_prym_pair: TypeSection,
    pub transfer_torsion_f1: String,
    pub transfer_torsion_f2: String,
    pub kernel_decomposition: Option<DecompositionSection>,
    pub prym_tyurin_exponent_six: bool,
    pub family: Option<FamilySection>,
    pub endomorphism: Option<ProjectorSection>,
    pub seshadri_bound: Option<RationalSection>,
    pub lattices: LatticeSection,
}

/// Runs the entire lattice pipeline on a diagram.
pub fn analyze(diagram: &PairDiagram) -> Result<AnalyzeReport> {
    let params = diagram.params;
    let dh = DiagramHomology::build(diagram)?;
    let pl = prym_lattices(&dh)?;

    let f2_deck = deck_group(&diagram.f2, FLAG_BUDGET)?;
    let composed = CoverMorphism::to_base(&diagram.x);
    let composed_deck = deck_group(&composed, FLAG_BUDGET)?;
    let conditions = ConditionsSection {
        no_common_factorization: !common_factorization_exists(
            &diagram.g1,
            &diagram.g2,
            FLAG_BUDGET,
        )?,
        product_irreducible: diagram.product_irreducible(),
        degrees_coprime: diagram.degrees_coprime(),
        f1_factors_cyclic_etale: cyclic_etale_factorization_exists(&diagram.f1, FLAG_BUDGET)?,
        f2_factors_cyclic_etale: cyclic_etale_factorization_exists(&diagram.f2, FLAG_BUDGET)?,
        f2_etale: is_etale(&diagram.f2)?,
        f2_deck: DeckSection {
            order: f2_deck.order,
            is_cyclic: f2_deck.is_cyclic,
            is_galois: f2_deck.is_galois,
            is_abelian: f2_deck.is_abelian,
        },
        composed_deck: DeckSection {
            order: composed_deck.order,
            is_cyclic: composed_deck.is_cyclic,
            is_galois: composed_deck.is_galois,
            is_abelian: composed_deck.is_abelian,
        },
    };

    let kernel_decomposition = if diagram.degrees_coprime() {
        let d = verify_kernel_decomposition(&pl, &params)?;
        Some(DecompositionSection {
            holds: d.holds,
            mirror_holds: d.mirror_holds,
        })
    } else {
        None
    };

    let prym_tyurin_exponent_six = prym_tyurin_check(&pl.prym_pair, 6)?;

    let (family, seshadri_bound) = match family_of(&params).0 {
        Some(f) => {
            let dim = params.dim_p();
            let bound = seshadri_upper_bound(dim, f)?;
            (
                Some(FamilySection {
                    family: f.as_str().to_string(),
                    dim,
                    exponent: 6,
                    moduli_dimension: moduli_dimension(f, dim)?,
                }),
                Some(RationalSection {
                    numer: bound.numer().to_string(),
                    denom: bound.denom().to_string(),
                }),
            )
        }
        None => (None, None),
    };

    let endomorphism = if (params.d1, params.d2) == (3, 2) {
        let (_eps, rep) = kanev_endomorphism(&dh, &pl, &params)?;
        Some(ProjectorSection {
            idempotent_scaled: rep.idempotent_scaled,
            symmetric: rep.symmetric,
            rank: rep.rank,
            image_is_prym_pair: rep.image_matches,
        })
    } else {
        None
    };

    Ok(AnalyzeReport {
        schema_version: SCHEMA_VERSION,
        params,
        genus_x1: diagram.g1.genus(),
        genus_x2: diagram.g2.genus(),
        genus_x: diagram.x.genus(),
        dim_p: params.dim_p(),
        conditions,
        theta_on_p_f1: TypeSection::of(&pl.p_f1)?,
        theta_on_pulled_x2: TypeSection::of(&pl.pulled_x2)?,
        theta_on_prym_pair: TypeSection::of(&pl.prym_pair)?,
        transfer_torsion_f1: pl.transfer_torsion_f1.to_string(),
        transfer_torsion_f2: pl.transfer_torsion_f2.to_string(),
        kernel_decomposition,
        prym_tyurin_exponent_six,
        family,
        endomorphism,
        seshadri_bound,
        lattices: LatticeSection {
            intersection_form_x: matrix_rows(&dh.x.intersection),
            p_f1_basis: matrix_rows(pl.p_f1.basis()),
            pulled_x2_basis: matrix_rows(pl.pulled_x2.basis()),
            prym_pair_basis: matrix_rows(pl.prym_pair.basis()),
        },
    })
}

/// Prym layer plus homology, for callers needing the raw lattices.
pub fn analyze_lattices(diagram: &PairDiagram) -> Result<(DiagramHomology, PrymLattices)> {
    let dh = DiagramHomology::build(diagram)?;
    let pl = prym_lattices(&dh)?;
    Ok((dh, pl))
}

pub fn render_human(r: &AnalyzeReport) -> String {
    let mut s = String::new();
    let p = &r.params;
    s.push_str(&format!(
        "degrees (d1, d2) = ({}, {}); ramification (r1, r2, s1, s2) = ({}, {}, {}, {})\n",
        p.d1, p.d2, p.r1, p.r2, p.s1, p.s2
    ));
    s.push_str(&format!(
        "genera: g(X1) = {}, g(X2) = {}, g(X) = {}; dim P = {}\n",
        r.genus_x1, r.genus_x2, r.genus_x, r.dim_p
    ));
    let c = &r.conditions;
    s.push_str(&format!(
        "conditions: no common factorization = {}, product irreducible = {}, degrees coprime = {}\n",
        c.no_common_factorization, c.product_irreducible, c.degrees_coprime
    ));
    s.push_str(&format!(
        "projections: f1 cyclic-etale factor = {}, f2 cyclic-etale factor = {}, f2 etale = {}\n",
        c.f1_factors_cyclic_etale, c.f2_factors_cyclic_etale, c.f2_etale
    ));
    s.push_str(&format!(
        "f2 deck: order {} (cyclic {}, galois {}); composed cover deck: order {} (galois {}, abelian {})\n",
        c.f2_deck.order,
        c.f2_deck.is_cyclic,
        c.f2_deck.is_galois,
        c.composed_deck.order,
        c.composed_deck.is_galois,
        c.composed_deck.is_abelian
    ));
    let fmt_type = |t: &TypeSection| {
        format!(
            "type ({}), kernel order {}",
            t.divisors.join(", "),
            t.kernel_order
        )
    };
    s.push_str(&format!(
        "theta | ker N_f1:        {}\n",
        fmt_type(&r.theta_on_p_f1)
    ));
    s.push_str(&format!(
        "theta | f2* H1(X2):      {}\n",
        fmt_type(&r.theta_on_pulled_x2)
    ));
    s.push_str(&format!(
        "theta | P(f1, f2):       {}\n",
        fmt_type(&r.theta_on_prym_pair)
    ));
    if let Some(d) = &r.kernel_decomposition {
        s.push_str(&format!(
            "kernel decomposition: holds = {}, mirror = {}\n",
            d.holds, d.mirror_holds
        ));
    }
    s.push_str(&format!(
        "Prym-Tyurin of exponent 6: {}\n",
        r.prym_tyurin_exponent_six
    ));
    if let Some(f) = &r.family {
        s.push_str(&format!(
            "family: {} (dim {}, exponent {}, moduli dimension {})\n",
            f.family, f.dim, f.exponent, f.moduli_dimension
        ));
    }
    if let Some(e) = &r.endomorphism {
        s.push_str(&format!(
            "projector 6 - 3 f1*N1 - 2 f2*N2: eps^2 = 6 eps: {}, symmetric: {}, rank {}, image = P: {}\n",
            e.idempotent_scaled, e.symmetric, e.rank, e.image_is_prym_pair
        ));
    }
    if let Some(b) = &r.seshadri_bound {
        s.push_str(&format!("Seshadri upper bound: {}/{}\n", b.numer, b.denom));
    }
    s
}

/// One verification suite outcome.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub cases: usize,
    pub passed: bool,
    pub detail: String,
}

fn suite(name: &str, cases: usize, r: Result<()>) -> Result<SuiteResult> {
    match r {
        Ok(()) => Ok(SuiteResult {
            name: name.to_string(),
            cases,
            passed: true,
            detail: String::new(),
        }),
        Err(e) => Err(Error::IdentityViolated(format!("{name}: {e}"))),
    }
}

/// Structural invariants on random covers and random fiber-product diagrams:
/// Euler characteristic, unimodular alternating intersection form, the
/// composition and form-scaling laws, rational surjectivity of pushforward,
/// and the parameter relation on derived tuples.
pub fn verify_cover_suite(cases: usize, seed: u64) -> Result<SuiteResult> {
    let mut rng = rng_from_seed(seed);
    let mut run = || -> Result<()> {
        for i in 0..cases {
            if i % 2 == 0 {
                let degree = 2 + (i / 2) % 5; // 2..=6
                let labels = 3 + i % 10; // 3..=12
                let c = random_cover(degree, labels, &mut rng);
                let h = crate::homology::SurfaceHomology::new(&c, None)?;
                if h.rank != 2 * c.genus() {
                    return Err(Error::Internal("rank mismatch".into()));
                }
                if det(&h.intersection).abs() != BigInt::from(1) {
                    return Err(Error::NonUnimodular(det(&h.intersection).to_string()));
                }
            } else {
                let d = random_diagram(3, 8, &mut rng);
                let dh = DiagramHomology::build(&d)?; // verifies the laws
                if rank(&dh.push1.matrix) != dh.x1.rank || rank(&dh.push2.matrix) != dh.x2.rank {
                    return Err(Error::Internal(
                        "pushforward not rationally surjective".into(),
                    ));
                }
                let p = d.params;
                if p.s2 != p.d2 * p.r1 - p.d1 * p.r2 + p.s1 {
                    return Err(Error::InconsistentDiagram("parameter relation".into()));
                }
            }
        }
        Ok(())
    };
    suite("cover-structure", cases, run())
}

/// The two restriction-order identities on random complementary pairs in
/// random polarized lattices, plus complement involution and the
/// determinant consistency of the divisor chain.
pub fn verify_lattice_suite(
    cases: usize,
    seed: u64,
    max_rank: usize,
    max_entry: i64,
) -> Result<SuiteResult> {
    let mut rng = rng_from_seed(seed);
    let mut run = || -> Result<()> {
        for _ in 0..cases {
            let g = 2 * (1 + rand::Rng::gen_range(&mut rng, 0..max_rank / 2));
            let amb = random_polarized_lattice(g.max(4), max_entry, &mut rng);
            let m = 2 * (1 + rand::Rng::gen_range(&mut rng, 0..(amb.rank() / 2 - 1).max(1)));
            let m = m.min(amb.rank() - 2);
            let a = random_abelian_sublattice(&amb, m, &mut rng);
            verify_order_identity(&a)?;
            verify_sequence_orders(&a)?;
            let p = a.complement()?;
            let back = p.complement()?;
            if !back.lattice_eq(&a) {
                return Err(Error::IdentityViolated(
                    "complement is not involutive".into(),
                ));
            }
            let t = a.restricted_type()?;
            let prod: BigInt = t.divisors.iter().product();
            if &prod * &prod != det(&a.restricted_form()).abs() {
                return Err(Error::IdentityViolated(
                    "squared divisor product differs from restricted determinant".into(),
                ));
            }
            let _ = intersection_order(&a, &p)?;
            let _ = kernel_intersection_order(&a)?;
        }
        Ok(())
    };
    suite("lattice-identities", cases, run())
}

/// Classifier invariants: family rows have dimension `r1 - 2`, excluded
/// branches respect their dimension bounds, the output is canonically
/// sorted, and witness search reproduces the requested parameters
/// deterministically.
pub fn verify_classification_suite() -> Result<SuiteResult> {
    use crate::classification::{classify_range, Regime};
    use crate::witness::{witness_search, SearchBudget};
    let run = || -> Result<()> {
        let rows = classify_range(12, 40, 0, Regime::Both);
        let mut sorted = rows.iter().map(|r| r.params.as_tuple()).collect::<Vec<_>>();
        sorted.sort_unstable();
        if rows.iter().map(|r| r.params.as_tuple()).collect::<Vec<_>>() != sorted {
            return Err(Error::Internal(
                "classification output is not sorted".into(),
            ));
        }
        for r in &rows {
            if r.family.is_some() && r.dim_p != r.params.r1 - 2 {
                return Err(Error::IdentityViolated(
                    "family dimension is not r1 - 2".into(),
                ));
            }
            if let Some(e) = r.exclusion {
                if r.dim_p > e.dim_bound() {
                    return Err(Error::IdentityViolated(format!(
                        "excluded branch {e:?} reaches dimension {}",
                        r.dim_p
                    )));
                }
            }
        }
        let p = HurwitzParams::new(3, 2, 6, 5, 5, 2)?;
        let w1 = witness_search(&p, SearchBudget::default())?;
        let w2 = witness_search(&p, SearchBudget::default())?;
        if w1.params != p || w2.params != p {
            return Err(Error::InconsistentDiagram(
                "witness parameters drifted".into(),
            ));
        }
        if crate::specfile::emit(&w1.g1, &w1.g2) != crate::specfile::emit(&w2.g1, &w2.g2) {
            return Err(Error::Internal(
                "witness search is not deterministic".into(),
            ));
        }
        Ok(())
    };
    suite("classification", 1, run())
}

/// End-to-end checks on the bundled family witnesses: parameters, kernel
/// decomposition, Prym-Tyurin verdicts, the exponent-6 projector, and the
/// mirror symmetry of the pair construction.
pub fn verify_family_suite() -> Result<SuiteResult> {
    let run = || -> Result<()> {
        for (text, dim, exponent_six) in [
            (crate::specfile::bundled::FAMILY_RAMIFIED_MIN, 4i64, true),
            (crate::specfile::bundled::FAMILY_ETALE_DIM5, 5, true),
        ] {
            let d = crate::specfile::parse_diagram(text)?;
            let report = analyze(&d)?;
            if report.dim_p != dim {
                return Err(Error::InconsistentDiagram(
                    "unexpected Prym dimension".into(),
                ));
            }
            if report.prym_tyurin_exponent_six != exponent_six {
                return Err(Error::IdentityViolated("Prym-Tyurin verdict".into()));
            }
            if let Some(dec) = &report.kernel_decomposition {
                if !dec.holds || !dec.mirror_holds {
                    return Err(Error::IdentityViolated("kernel decomposition".into()));
                }
            }
            let (dh, pl) = analyze_lattices(&d)?;
            let (eps, _) = kanev_endomorphism(&dh, &pl, &d.params)?;
            if !lattice_eq(&crate::intmat::saturation(&eps), pl.prym_pair.basis()) {
                return Err(Error::IdentityViolated("projector image".into()));
            }
            let six_eps: IMat = eps.scale(&BigInt::from(6));
            if eps.mul(&eps) != six_eps {
                return Err(Error::IdentityViolated("projector idempotency".into()));
            }
        }
        Ok(())
    };
    suite("family-witnesses", 2, run())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        verify_cover_suite(6, 20240601).unwrap();
        verify_lattice_suite(10, 20240601, 8, 12).unwrap();
    }
}
