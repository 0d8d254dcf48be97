//! Integer parameter engine for pairs of coverings: the tuple
//! `(d1, d2, r1, r2, s1, s2)` of cover degrees and half-ramification
//! degrees, the linear systems characterizing the two exponent-6 families,
//! and the exhaustive classifier.
//!
//! Notation: `g1 = (X1 -> line)` has degree `d1` and ramification degree
//! `2 r1`, likewise `g2`; the projections `f1: X -> X1` and `f2: X -> X2`
//! have ramification degrees `2 s1` and `2 s2`. The parameters satisfy
//! `s2 = d2 r1 - d1 r2 + s1`, the genera are `g(Xi) = ri - di + 1` and
//! `g(X) = d2 (r1 - d1) + s1 + 1`, and the Prym dimension of the pair is
//! `g(X) - g(X1) - g(X2)`.

use serde::Serialize;

use crate::covers::{relative_ramification, BranchedCover, FiberComponent, PairDiagram};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct HurwitzParams {
    pub d1: i64,
    pub d2: i64,
    pub r1: i64,
    pub r2: i64,
    pub s1: i64,
    pub s2: i64,
}

impl HurwitzParams {
    pub fn new(d1: i64, d2: i64, r1: i64, r2: i64, s1: i64, s2: i64) -> Result<Self> {
        let p = HurwitzParams {
            d1,
            d2,
            r1,
            r2,
            s1,
            s2,
        };
        if d1 < 1 || d2 < 1 {
            return Err(Error::InconsistentDiagram(
                "cover degrees must be positive".into(),
            ));
        }
        if r1 < 0 || r2 < 0 || s1 < 0 || s2 < 0 {
            return Err(Error::InconsistentDiagram(
                "ramification parameters must be nonnegative".into(),
            ));
        }
        if s2 != d2 * r1 - d1 * r2 + s1 {
            return Err(Error::InconsistentDiagram(format!(
                "s2 = {} violates s2 = d2*r1 - d1*r2 + s1 = {}",
                s2,
                d2 * r1 - d1 * r2 + s1
            )));
        }
        if p.g1() < 0 || p.g2() < 0 {
            return Err(Error::InconsistentDiagram("negative curve genus".into()));
        }
        if p.dim_p() < 0 {
            return Err(Error::InconsistentDiagram("negative Prym dimension".into()));
        }
        Ok(p)
    }

    pub fn g1(&self) -> i64 {
        self.r1 - self.d1 + 1
    }

    pub fn g2(&self) -> i64 {
        self.r2 - self.d2 + 1
    }

    pub fn gx(&self) -> i64 {
        self.d2 * (self.r1 - self.d1) + self.s1 + 1
    }

    pub fn dim_p(&self) -> i64 {
        self.gx() - self.g1() - self.g2()
    }

    pub fn swapped(&self) -> HurwitzParams {
        HurwitzParams {
            d1: self.d2,
            d2: self.d1,
            r1: self.r2,
            r2: self.r1,
            s1: self.s2,
            s2: self.s1,
        }
    }

    pub fn as_tuple(&self) -> (i64, i64, i64, i64, i64, i64) {
        (self.d1, self.d2, self.r1, self.r2, self.s1, self.s2)
    }
}

/// Reads the parameter tuple off a fiber-product component and validates it
/// against the directly computed genera.
pub(crate) fn derive_component_params(
    g1: &BranchedCover,
    g2: &BranchedCover,
    comp: &FiberComponent,
) -> Result<HurwitzParams> {
    let d1 = g1.degree() as i64;
    let d2 = g2.degree() as i64;
    if !g1.ramification_degree().is_multiple_of(2) || !g2.ramification_degree().is_multiple_of(2) {
        return Err(Error::Parity(
            g1.ramification_degree() + g2.ramification_degree(),
        ));
    }
    let r1 = (g1.ramification_degree() / 2) as i64;
    let r2 = (g2.ramification_degree() / 2) as i64;
    let s1 = {
        let d = relative_ramification(&comp.f1)?;
        if !d.is_multiple_of(2) {
            return Err(Error::Parity(d));
        }
        (d / 2) as i64
    };
    let s2 = {
        let d = relative_ramification(&comp.f2)?;
        if !d.is_multiple_of(2) {
            return Err(Error::Parity(d));
        }
        (d / 2) as i64
    };
    let p = HurwitzParams::new(d1, d2, r1, r2, s1, s2)?;
    if p.g1() != g1.genus() as i64 || p.g2() != g2.genus() as i64 {
        return Err(Error::InconsistentDiagram(
            "factor genera disagree with parameters".into(),
        ));
    }
    if p.gx() != comp.cover.genus() as i64 {
        return Err(Error::InconsistentDiagram(format!(
            "total-space genus {} disagrees with parameter formula {}",
            comp.cover.genus(),
            p.gx()
        )));
    }
    Ok(p)
}

pub fn derive_params(d: &PairDiagram) -> HurwitzParams {
    d.params
}

/// The two exponent-6 families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    /// Ramified regime: neither projection factors through a cyclic
    /// unramified cover. Members have `(d1, d2) = (3, 2)`,
    /// `s1 = r2 = r1 - 1`, `s2 = 2`, `r1 >= 6`.
    Ramified,
    /// Etale regime: `f2` is cyclic unramified. Members have
    /// `(d1, d2) = (3, 2)`, `r1 = r2 = s1 >= 7`, `s2 = 0`.
    Etale,
}

impl Family {
    pub fn min_dim(&self) -> i64 {
        match self {
            Family::Ramified => 4,
            Family::Etale => 5,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Family::Ramified => "ramified",
            Family::Etale => "etale",
        }
    }
}

/// Why a tuple satisfying one of the family systems is not a family member.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Exclusion {
    /// Ramified system with `d1 > d2 >= 4`: dimension is at most 2.
    RamifiedHighBase,
    /// Ramified system with `d2 = 3`, `d1 >= 4`: dimension is at most 3.
    RamifiedBaseThree,
    /// Ramified system with `d2 = 2`, `d1 >= 5`: dimension is at most 2.
    RamifiedBaseTwo,
    /// Ramified system at `(3, 2)` with `r1 < 6`: dimension below 4.
    RamifiedLowDimension,
    /// Etale system with `d2 = 4`: dimension is at most 4.
    EtaleBaseFour,
    /// Etale system with `d2` in `{5, 6}`: dimension is at most 2.
    EtaleBaseFiveOrSix,
    /// Etale system with `d2 >= 7`: dimension is at most 1.
    EtaleBaseSevenPlus,
    /// Etale system at `(3, 2)` with `r1 < 7`: dimension below 5.
    EtaleLowDimension,
}

impl Exclusion {
    pub fn dim_bound(&self) -> i64 {
        match self {
            Exclusion::RamifiedHighBase => 2,
            Exclusion::RamifiedBaseThree => 3,
            Exclusion::RamifiedBaseTwo => 2,
            Exclusion::RamifiedLowDimension => 3,
            Exclusion::EtaleBaseFour => 4,
            Exclusion::EtaleBaseFiveOrSix => 2,
            Exclusion::EtaleBaseSevenPlus => 1,
            Exclusion::EtaleLowDimension => 4,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Exclusion::RamifiedHighBase => "ramified d1>d2>=4",
            Exclusion::RamifiedBaseThree => "ramified d2=3",
            Exclusion::RamifiedBaseTwo => "ramified d2=2 d1>=5",
            Exclusion::RamifiedLowDimension => "ramified below dim 4",
            Exclusion::EtaleBaseFour => "etale d2=4",
            Exclusion::EtaleBaseFiveOrSix => "etale d2 in {5,6}",
            Exclusion::EtaleBaseSevenPlus => "etale d2>=7",
            Exclusion::EtaleLowDimension => "etale below dim 5",
        }
    }
}

/// Result of testing a parameter tuple against one family's linear system.
#[derive(Clone, Debug)]
pub struct Derivation {
    pub holds: bool,
    pub failed: Vec<&'static str>,
    pub dim_p: i64,
}

/// Tests the ramified-regime system
/// `r2 = r1 + d2 - d1`,
/// `s1 = (3 - d2) r1 + (d2 - 3) d1 + 2`,
/// `s2 = (3 - d1) r1 + (d1 - 3) d1 + 2`,
/// which expresses `dim P = g(X1) = g(X2)` for a pair in which neither
/// projection factors through a cyclic unramified cover. The tuple is
/// normalized to `d1 > d2` first.
pub fn ramified_family_test(p: &HurwitzParams) -> Derivation {
    let p = if p.d1 >= p.d2 { *p } else { p.swapped() };
    let mut failed = Vec::new();
    if num_integer::gcd(p.d1, p.d2) != 1 {
        failed.push("gcd(d1, d2) != 1");
    }
    if p.r2 != p.r1 + p.d2 - p.d1 {
        failed.push("r2 != r1 + d2 - d1");
    }
    if p.s1 != (3 - p.d2) * p.r1 + (p.d2 - 3) * p.d1 + 2 {
        failed.push("s1 != (3 - d2) r1 + (d2 - 3) d1 + 2");
    }
    if p.s2 != (3 - p.d1) * p.r1 + (p.d1 - 3) * p.d1 + 2 {
        failed.push("s2 != (3 - d1) r1 + (d1 - 3) d1 + 2");
    }
    Derivation {
        holds: failed.is_empty(),
        failed,
        dim_p: p.dim_p(),
    }
}

/// Tests the etale-regime system `d1 = 3`, `s2 = 0`, `r2 = d2 + r1 - 2`,
/// `s1 = 3 r2 - d2 r1 >= 0` (which expresses `dim P = g(X1) = g(X2) - 1`
/// when `f2` is cyclic unramified) together with the surviving branch
/// `d2 = 2`. The orientation with the degree-`d1` projection unramified is
/// tried on both sides.
pub fn etale_family_test(p: &HurwitzParams) -> Derivation {
    let direct = etale_shape(p, true);
    if direct.holds {
        return direct;
    }
    let swapped = etale_shape(&p.swapped(), true);
    if swapped.holds {
        swapped
    } else {
        direct
    }
}

/// The etale system alone, without the `d2 = 2` branch requirement.
pub fn etale_system_test(p: &HurwitzParams) -> Derivation {
    let direct = etale_shape(p, false);
    if direct.holds {
        return direct;
    }
    let swapped = etale_shape(&p.swapped(), false);
    if swapped.holds {
        swapped
    } else {
        direct
    }
}

fn etale_shape(p: &HurwitzParams, require_branch: bool) -> Derivation {
    let mut failed = Vec::new();
    if num_integer::gcd(p.d1, p.d2) != 1 {
        failed.push("gcd(d1, d2) != 1");
    }
    if p.d1 != 3 {
        failed.push("d1 != 3");
    }
    if p.s2 != 0 {
        failed.push("s2 != 0");
    }
    if p.r2 != p.d2 + p.r1 - 2 {
        failed.push("r2 != d2 + r1 - 2");
    }
    if p.s1 != 3 * p.r2 - p.d2 * p.r1 {
        failed.push("s1 != 3 r2 - d2 r1");
    }
    if 3 * p.r2 - p.d2 * p.r1 < 0 {
        failed.push("3 r2 - d2 r1 < 0");
    }
    if require_branch && p.d2 != 2 {
        failed.push("d2 != 2");
    }
    Derivation {
        holds: failed.is_empty(),
        failed,
        dim_p: p.dim_p(),
    }
}

fn ramified_exclusion(d1: i64, d2: i64, r1: i64) -> Option<Exclusion> {
    if (d1, d2) == (3, 2) {
        (r1 < 6).then_some(Exclusion::RamifiedLowDimension)
    } else if d2 >= 4 {
        Some(Exclusion::RamifiedHighBase)
    } else if d2 == 3 {
        Some(Exclusion::RamifiedBaseThree)
    } else {
        Some(Exclusion::RamifiedBaseTwo)
    }
}

fn etale_exclusion(d2: i64, r1: i64) -> Option<Exclusion> {
    if d2 == 2 {
        (r1 < 7).then_some(Exclusion::EtaleLowDimension)
    } else if d2 == 4 {
        Some(Exclusion::EtaleBaseFour)
    } else if d2 == 5 || d2 == 6 {
        Some(Exclusion::EtaleBaseFiveOrSix)
    } else {
        Some(Exclusion::EtaleBaseSevenPlus)
    }
}

/// Family membership (with the dimension gates applied) and, for tuples on a
/// family system but below its gate or on an excluded degree branch, the
/// exclusion tag.
pub fn family_of(p: &HurwitzParams) -> (Option<Family>, Option<Exclusion>) {
    let ram = ramified_family_test(p);
    if ram.holds {
        let n = if p.d1 >= p.d2 { *p } else { p.swapped() };
        return match ramified_exclusion(n.d1, n.d2, n.r1) {
            None => (Some(Family::Ramified), None),
            Some(e) => (None, Some(e)),
        };
    }
    let et = etale_system_test(p);
    if et.holds {
        let n = if p.d1 == 3 && p.s2 == 0 {
            *p
        } else {
            p.swapped()
        };
        return match etale_exclusion(n.d2, n.r1) {
            None => (Some(Family::Etale), None),
            Some(e) => (None, Some(e)),
        };
    }
    (None, None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Regime {
    Both,
    Ramified,
    Etale,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyDescriptor {
    pub params: HurwitzParams,
    pub dim_p: i64,
    pub family: Option<Family>,
    /// 6 for family members.
    pub exponent: Option<i64>,
    pub exclusion: Option<Exclusion>,
    pub regime: Regime,
}

/// Exhaustive classification: every coprime degree pair and every `r1` within
/// bounds is run through both family systems; tuples solving a system with
/// `dim P >= min_dim` and all of `r1, r2, s1 <= max_r` are emitted, family
/// members labelled and near-misses tagged with the branch that excludes
/// them. Output is sorted lexicographically by the parameter tuple.
pub fn classify_range(
    max_d: i64,
    max_r: i64,
    min_dim: i64,
    regime: Regime,
) -> Vec<FamilyDescriptor> {
    let mut out = Vec::new();

    if regime != Regime::Etale {
        // ramified regime, normalized to d1 > d2 >= 2
        for d1 in 3..=max_d {
            for d2 in 2..d1 {
                if num_integer::gcd(d1, d2) != 1 {
                    continue;
                }
                for r1 in 1..=max_r {
                    let r2 = r1 + d2 - d1;
                    let s1 = (3 - d2) * r1 + (d2 - 3) * d1 + 2;
                    let s2 = (3 - d1) * r1 + (d1 - 3) * d1 + 2;
                    if r2 < 0 || s1 < 0 || s2 < 0 || r2 > max_r || s1 > max_r {
                        continue;
                    }
                    let Ok(p) = HurwitzParams::new(d1, d2, r1, r2, s1, s2) else {
                        continue;
                    };
                    debug_assert!(ramified_family_test(&p).holds);
                    if p.dim_p() < min_dim {
                        continue;
                    }
                    let exclusion = ramified_exclusion(d1, d2, r1);
                    let family = exclusion.is_none().then_some(Family::Ramified);
                    out.push(FamilyDescriptor {
                        params: p,
                        dim_p: p.dim_p(),
                        family,
                        exponent: family.map(|_| 6),
                        exclusion,
                        regime: Regime::Ramified,
                    });
                }
            }
        }
    }

    if regime != Regime::Ramified {
        // etale regime: the unramified projection forces d1 = 3
        let d1 = 3;
        if d1 <= max_d {
            for d2 in 2..=max_d {
                if num_integer::gcd(d1, d2) != 1 {
                    continue;
                }
                for r1 in 1..=max_r {
                    let r2 = d2 + r1 - 2;
                    let s1 = 3 * r2 - d2 * r1;
                    if r2 < 1 || s1 < 0 || r2 > max_r || s1 > max_r {
                        continue;
                    }
                    let Ok(p) = HurwitzParams::new(d1, d2, r1, r2, s1, 0) else {
                        continue;
                    };
                    if p.dim_p() < min_dim {
                        continue;
                    }
                    let exclusion = etale_exclusion(d2, r1);
                    let family = exclusion.is_none().then_some(Family::Etale);
                    out.push(FamilyDescriptor {
                        params: p,
                        dim_p: p.dim_p(),
                        family,
                        exponent: family.map(|_| 6),
                        exclusion,
                        regime: Regime::Etale,
                    });
                }
            }
        }
    }

    out.sort_by_key(|d| d.params.as_tuple());
    out
}

/// Parameter count of an exponent-6 family in a fixed dimension: `2 d + 1`.
pub fn moduli_dimension(family: Family, dim: i64) -> Result<i64> {
    if dim < family.min_dim() {
        return Err(Error::OutOfRange(dim, family.min_dim()));
    }
    Ok(2 * dim + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(t: (i64, i64, i64, i64, i64, i64)) -> HurwitzParams {
        HurwitzParams::new(t.0, t.1, t.2, t.3, t.4, t.5).unwrap()
    }

    #[test]
    fn params_invariants() {
        let p = params((3, 2, 6, 5, 5, 2));
        assert_eq!(p.g1(), 4);
        assert_eq!(p.g2(), 4);
        assert_eq!(p.gx(), 12);
        assert_eq!(p.dim_p(), 4);
        // violating the linear relation is rejected
        assert!(HurwitzParams::new(3, 2, 6, 5, 5, 3).is_err());
    }

    #[test]
    fn ramified_family_examples() {
        assert!(ramified_family_test(&params((3, 2, 6, 5, 5, 2))).holds);
        // perturbed s1 fails one equation
        let p = params((3, 2, 6, 5, 6, 3));
        let d = ramified_family_test(&p);
        assert!(!d.holds);
        assert!(d.failed.iter().any(|m| m.contains("s1")));
        // the d1 >= 5, d2 = 2 branch has dimension at most 2
        let q = params((5, 2, 4, 1, 1, 4));
        let dq = ramified_family_test(&q);
        assert!(dq.holds);
        assert!(dq.dim_p <= 2);
    }

    #[test]
    fn etale_family_examples() {
        assert!(etale_family_test(&params((3, 2, 7, 7, 7, 0))).holds);
        // d2 = 4 solves the system but is not a family member
        let p = params((3, 4, 6, 8, 0, 0));
        let d = etale_family_test(&p);
        assert!(!d.holds);
        assert!(d.failed.contains(&"d2 != 2"));
        let (fam, excl) = family_of(&p);
        assert_eq!(fam, None);
        assert_eq!(excl, Some(Exclusion::EtaleBaseFour));
    }

    #[test]
    fn family_of_gates() {
        assert_eq!(
            family_of(&params((3, 2, 6, 5, 5, 2))).0,
            Some(Family::Ramified)
        );
        assert_eq!(
            family_of(&params((3, 2, 7, 7, 7, 0))).0,
            Some(Family::Etale)
        );
        // below the gates
        assert_eq!(
            family_of(&params((3, 2, 4, 3, 3, 2))),
            (None, Some(Exclusion::RamifiedLowDimension))
        );
        assert_eq!(
            family_of(&params((3, 2, 5, 5, 5, 0))),
            (None, Some(Exclusion::EtaleLowDimension))
        );
    }

    #[test]
    fn classify_small_grid() {
        let rows = classify_range(6, 12, 0, Regime::Both);
        assert!(!rows.is_empty());
        // dimension formula dim P = r1 - 2 on every family member
        for row in &rows {
            if row.family.is_some() {
                assert_eq!(row.dim_p, row.params.r1 - 2);
            }
            if let Some(e) = row.exclusion {
                assert!(row.dim_p <= e.dim_bound(), "{row:?}");
            }
        }
        // sorted canonically
        let mut sorted = rows.clone();
        sorted.sort_by_key(|d| d.params.as_tuple());
        assert_eq!(
            rows.iter().map(|r| r.params).collect::<Vec<_>>(),
            sorted.iter().map(|r| r.params).collect::<Vec<_>>()
        );
    }

    #[test]
    fn classify_min_dim_five_is_two_families() {
        let rows = classify_range(8, 20, 5, Regime::Both);
        assert!(rows.iter().all(|r| r.family.is_some()));
        assert!(rows.iter().any(|r| r.family == Some(Family::Ramified)));
        assert!(rows.iter().any(|r| r.family == Some(Family::Etale)));
    }

    #[test]
    fn moduli_dimension_examples() {
        assert_eq!(moduli_dimension(Family::Ramified, 4).unwrap(), 9);
        assert_eq!(moduli_dimension(Family::Etale, 5).unwrap(), 11);
        assert!(matches!(
            moduli_dimension(Family::Ramified, 3),
            Err(Error::OutOfRange(3, 4))
        ));
    }

    #[test]
    fn ramified_system_matches_dimension_conditions() {
        // the linear system is equivalent to dim P = g(X1) = g(X2) over the
        // valid parameter grid
        for d1 in 2..=6i64 {
            for d2 in 2..=6i64 {
                if d1 <= d2 || num_integer::gcd(d1, d2) != 1 {
                    continue;
                }
                for r1 in 0..=14i64 {
                    for r2 in 0..=14i64 {
                        for s1 in 0..=14i64 {
                            let s2 = d2 * r1 - d1 * r2 + s1;
                            if s2 < 0 {
                                continue;
                            }
                            let Ok(p) = HurwitzParams::new(d1, d2, r1, r2, s1, s2) else {
                                continue;
                            };
                            let sys = ramified_family_test(&p).holds;
                            let cond = p.dim_p() == p.g1() && p.g1() == p.g2();
                            assert_eq!(sys, cond, "{p:?}");
                        }
                    }
                }
            }
        }
    }
}
