//! Branched covers of the line presented by permutation monodromy, vertical
//! morphisms between them, fiber products, and pair diagrams.
//!
//! A cover of degree `n` branched over `k` marked points is a tuple of `k`
//! permutations of the sheets, one per branch label, multiplying to the
//! identity in label order and generating a transitive group. Identity
//! permutations are allowed at a label (the cover may be unbranched there).

use crate::classification::HurwitzParams;
use crate::error::{Error, Result};
use crate::perm::{is_transitive, Perm};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonodromyTuple {
    degree: usize,
    labels: Vec<String>,
    perms: Vec<Perm>,
}

impl MonodromyTuple {
    pub fn new(degree: usize, labels: Vec<String>, perms: Vec<Perm>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidMonodromy("degree must be positive".into()));
        }
        if labels.len() != perms.len() {
            return Err(Error::InvalidMonodromy(format!(
                "{} labels but {} permutations",
                labels.len(),
                perms.len()
            )));
        }
        for (i, a) in labels.iter().enumerate() {
            if labels[i + 1..].contains(a) {
                return Err(Error::InvalidMonodromy(format!("duplicate label {a:?}")));
            }
        }
        for p in &perms {
            if p.degree() != degree {
                return Err(Error::InvalidMonodromy(format!(
                    "permutation degree {} does not match cover degree {}",
                    p.degree(),
                    degree
                )));
            }
        }
        let product = perms
            .iter()
            .fold(Perm::identity(degree), |acc, p| acc.compose(p));
        if !product.is_identity() {
            return Err(Error::InvalidMonodromy(
                "label-ordered product is not the identity".into(),
            ));
        }
        let refs: Vec<&Perm> = perms.iter().collect();
        if !is_transitive(degree, &refs) {
            return Err(Error::InvalidMonodromy(
                "monodromy group is not transitive".into(),
            ));
        }
        Ok(MonodromyTuple {
            degree,
            labels,
            perms,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn perms(&self) -> &[Perm] {
        &self.perms
    }

    pub fn perm(&self, i: usize) -> &Perm {
        &self.perms[i]
    }
}

/// A connected branched cover of the line, with its ramification degree and
/// genus cached at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchedCover {
    monodromy: MonodromyTuple,
    delta: usize,
    genus: usize,
}

impl BranchedCover {
    pub fn new(monodromy: MonodromyTuple) -> Result<Self> {
        let delta: usize = monodromy.perms.iter().map(|p| p.defect()).sum();
        if !delta.is_multiple_of(2) {
            return Err(Error::Parity(delta));
        }
        let n = monodromy.degree as i64;
        let g = 1 - n + (delta as i64) / 2;
        if g < 0 {
            return Err(Error::NegativeGenus {
                degree: monodromy.degree,
                delta,
            });
        }
        Ok(BranchedCover {
            monodromy,
            delta,
            genus: g as usize,
        })
    }

    pub fn from_parts(degree: usize, labels: Vec<String>, perms: Vec<Perm>) -> Result<Self> {
        BranchedCover::new(MonodromyTuple::new(degree, labels, perms)?)
    }

    /// The trivial degree-1 cover (the line itself) over the given labels.
    pub fn projective_line(labels: Vec<String>) -> Self {
        let perms = vec![Perm::identity(1); labels.len()];
        BranchedCover {
            monodromy: MonodromyTuple {
                degree: 1,
                labels,
                perms,
            },
            delta: 0,
            genus: 0,
        }
    }

    pub fn monodromy(&self) -> &MonodromyTuple {
        &self.monodromy
    }

    pub fn degree(&self) -> usize {
        self.monodromy.degree
    }

    pub fn labels(&self) -> &[String] {
        &self.monodromy.labels
    }

    pub fn perms(&self) -> &[Perm] {
        &self.monodromy.perms
    }

    pub fn ramification_degree(&self) -> usize {
        self.delta
    }

    pub fn genus(&self) -> usize {
        self.genus
    }
}

/// Multiset of cycle lengths of a permutation, descending.
pub fn cycle_type(p: &Perm) -> Vec<usize> {
    p.cycle_type()
}

/// A vertical morphism between covers sharing the same label list, given by
/// its action on sheets.
#[derive(Clone, Debug)]
pub struct CoverMorphism {
    source: BranchedCover,
    target: BranchedCover,
    sheet_map: Vec<usize>,
    degree: usize,
}

impl CoverMorphism {
    pub fn new(
        source: BranchedCover,
        target: BranchedCover,
        sheet_map: Vec<usize>,
    ) -> Result<Self> {
        if source.labels() != target.labels() {
            return Err(Error::InvalidMorphism("label lists differ".into()));
        }
        if sheet_map.len() != source.degree() {
            return Err(Error::InvalidMorphism("sheet map length mismatch".into()));
        }
        if sheet_map.iter().any(|&v| v >= target.degree()) {
            return Err(Error::InvalidMorphism("sheet map out of range".into()));
        }
        for (t, ps) in source.perms().iter().enumerate() {
            let pt = &target.perms()[t];
            for s in 0..source.degree() {
                if sheet_map[ps.apply(s)] != pt.apply(sheet_map[s]) {
                    return Err(Error::InvalidMorphism(format!(
                        "sheet map is not equivariant at label {} sheet {}",
                        source.labels()[t],
                        s
                    )));
                }
            }
        }
        if !source.degree().is_multiple_of(target.degree()) {
            return Err(Error::InvalidMorphism(
                "source degree not a multiple of target".into(),
            ));
        }
        let degree = source.degree() / target.degree();
        let mut fiber = vec![0usize; target.degree()];
        for &v in &sheet_map {
            fiber[v] += 1;
        }
        if fiber.iter().any(|&c| c != degree) {
            return Err(Error::InvalidMorphism("fibers have unequal size".into()));
        }
        Ok(CoverMorphism {
            source,
            target,
            sheet_map,
            degree,
        })
    }

    pub fn identity(cover: &BranchedCover) -> Self {
        CoverMorphism {
            source: cover.clone(),
            target: cover.clone(),
            sheet_map: (0..cover.degree()).collect(),
            degree: 1,
        }
    }

    /// The structural morphism down to the line, as a degree-n morphism onto
    /// the trivial cover over the same labels.
    pub fn to_base(cover: &BranchedCover) -> Self {
        let target = BranchedCover::projective_line(cover.labels().to_vec());
        CoverMorphism {
            source: cover.clone(),
            target,
            sheet_map: vec![0; cover.degree()],
            degree: cover.degree(),
        }
    }

    pub fn source(&self) -> &BranchedCover {
        &self.source
    }

    pub fn target(&self) -> &BranchedCover {
        &self.target
    }

    pub fn sheet_map(&self) -> &[usize] {
        &self.sheet_map
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn apply(&self, sheet: usize) -> usize {
        self.sheet_map[sheet]
    }
}

/// Degree of the ramification divisor of a vertical morphism: points of the
/// source over a branch label are cycles of the source permutation, and the
/// local index of such a point is the ratio of its cycle length to the length
/// of its image cycle.
pub fn relative_ramification(f: &CoverMorphism) -> Result<usize> {
    let mut total = 0usize;
    for (t, ps) in f.source().perms().iter().enumerate() {
        let pt = &f.target().perms()[t];
        for cycle in ps.cycles() {
            let src_len = cycle.len();
            let tgt_len = pt.cycle_len_through(f.apply(cycle[0]));
            if src_len % tgt_len != 0 {
                return Err(Error::Divisibility {
                    source_len: src_len,
                    target_len: tgt_len,
                });
            }
            total += src_len / tgt_len - 1;
        }
    }
    Ok(total)
}

pub fn is_etale(f: &CoverMorphism) -> Result<bool> {
    Ok(relative_ramification(f)? == 0)
}

/// One connected component of a fiber product, with its two projections.
#[derive(Clone, Debug)]
pub struct FiberComponent {
    pub cover: BranchedCover,
    pub f1: CoverMorphism,
    pub f2: CoverMorphism,
}

/// Orbit decomposition of the product action on pairs of sheets. Components
/// are returned sorted by their smallest contained pair `(i, j)`.
pub fn fiber_product(g1: &BranchedCover, g2: &BranchedCover) -> Result<Vec<FiberComponent>> {
    if g1.labels() != g2.labels() {
        return Err(Error::InvalidMonodromy(
            "fiber product requires a shared label list".into(),
        ));
    }
    let d1 = g1.degree();
    let d2 = g2.degree();
    let n = d1 * d2;
    let pair_id = |i: usize, j: usize| i * d2 + j;

    // product permutations on pairs
    let prod: Vec<Perm> = g1
        .perms()
        .iter()
        .zip(g2.perms())
        .map(|(a, b)| {
            let mut images = vec![0usize; n];
            for i in 0..d1 {
                for j in 0..d2 {
                    images[pair_id(i, j)] = pair_id(a.apply(i), b.apply(j));
                }
            }
            Perm::from_images(images).expect("product of bijections")
        })
        .collect();

    // orbits via union-find
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut c = x;
        while parent[c] != r {
            let next = parent[c];
            parent[c] = r;
            c = next;
        }
        r
    }
    for p in &prod {
        for x in 0..n {
            let (a, b) = (find(&mut parent, x), find(&mut parent, p.apply(x)));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    let mut root_index: Vec<Option<usize>> = vec![None; n];
    for x in 0..n {
        let r = find(&mut parent, x);
        match root_index[r] {
            Some(k) => orbits[k].push(x),
            None => {
                root_index[r] = Some(orbits.len());
                orbits.push(vec![x]);
            }
        }
    }
    orbits.sort_by_key(|o| o[0]);

    let mut components = Vec::new();
    for orbit in &orbits {
        let local: std::collections::BTreeMap<usize, usize> =
            orbit.iter().enumerate().map(|(k, &x)| (x, k)).collect();
        let perms: Vec<Perm> = prod
            .iter()
            .map(|p| {
                let images = orbit.iter().map(|&x| local[&p.apply(x)]).collect();
                Perm::from_images(images).expect("orbit restriction")
            })
            .collect();
        let cover = BranchedCover::from_parts(orbit.len(), g1.labels().to_vec(), perms)?;
        let map1: Vec<usize> = orbit.iter().map(|&x| x / d2).collect();
        let map2: Vec<usize> = orbit.iter().map(|&x| x % d2).collect();
        let f1 = CoverMorphism::new(cover.clone(), g1.clone(), map1)?;
        let f2 = CoverMorphism::new(cover.clone(), g2.clone(), map2)?;
        components.push(FiberComponent { cover, f1, f2 });
    }
    Ok(components)
}

/// Re-expresses two covers over the union of their branch labels, padding
/// with identity permutations; the union keeps the first cover's order and
/// appends labels seen only in the second.
pub fn align_labels(
    g1: &BranchedCover,
    g2: &BranchedCover,
) -> Result<(BranchedCover, BranchedCover)> {
    let mut labels: Vec<String> = g1.labels().to_vec();
    for l in g2.labels() {
        if !labels.contains(l) {
            labels.push(l.clone());
        }
    }
    let expand = |g: &BranchedCover| -> Result<BranchedCover> {
        let perms: Vec<Perm> = labels
            .iter()
            .map(|l| match g.labels().iter().position(|x| x == l) {
                Some(i) => g.perms()[i].clone(),
                None => Perm::identity(g.degree()),
            })
            .collect();
        BranchedCover::from_parts(g.degree(), labels.clone(), perms)
    };
    Ok((expand(g1)?, expand(g2)?))
}

/// The pair-of-coverings diagram: two covers of the line, a selected
/// component of their fiber product, and the two projections.
#[derive(Clone, Debug)]
pub struct PairDiagram {
    pub g1: BranchedCover,
    pub g2: BranchedCover,
    pub x: BranchedCover,
    pub f1: CoverMorphism,
    pub f2: CoverMorphism,
    pub params: HurwitzParams,
    pub component_count: usize,
}

impl PairDiagram {
    /// Builds the diagram on the unique fiber-product component; errors if
    /// the product action is not transitive.
    pub fn build(g1: &BranchedCover, g2: &BranchedCover) -> Result<Self> {
        let (g1, g2) = align_labels(g1, g2)?;
        let components = fiber_product(&g1, &g2)?;
        if components.len() != 1 {
            return Err(Error::InconsistentDiagram(format!(
                "fiber product has {} components; select one explicitly",
                components.len()
            )));
        }
        Self::assemble(g1, g2, components, 0)
    }

    /// Builds the diagram on a chosen component of the fiber product.
    pub fn build_with_component(
        g1: &BranchedCover,
        g2: &BranchedCover,
        component: usize,
    ) -> Result<Self> {
        let (g1, g2) = align_labels(g1, g2)?;
        let components = fiber_product(&g1, &g2)?;
        if component >= components.len() {
            return Err(Error::InconsistentDiagram(format!(
                "component {} requested, only {} available",
                component,
                components.len()
            )));
        }
        Self::assemble(g1, g2, components, component)
    }

    fn assemble(
        g1: BranchedCover,
        g2: BranchedCover,
        mut components: Vec<FiberComponent>,
        idx: usize,
    ) -> Result<Self> {
        let count = components.len();
        let comp = components.swap_remove(idx);
        let params = crate::classification::derive_component_params(&g1, &g2, &comp)?;
        Ok(PairDiagram {
            g1,
            g2,
            x: comp.cover,
            f1: comp.f1,
            f2: comp.f2,
            params,
            component_count: count,
        })
    }

    pub fn degrees_coprime(&self) -> bool {
        num_integer::gcd(self.g1.degree(), self.g2.degree()) == 1
    }

    pub fn product_irreducible(&self) -> bool {
        self.component_count == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn labels(k: usize) -> Vec<String> {
        (1..=k).map(|i| format!("b{i:02}")).collect()
    }

    fn transposition_cover(g: usize) -> BranchedCover {
        // degree 2 with 2g + 2 transposition labels
        let k = 2 * g + 2;
        let t = Perm::from_cycles(2, &[vec![0, 1]]).unwrap();
        BranchedCover::from_parts(2, labels(k), vec![t; k]).unwrap()
    }

    #[test]
    fn ramification_degree_examples() {
        let c = transposition_cover(2);
        assert_eq!(c.ramification_degree(), 6);
        let line = BranchedCover::projective_line(labels(3));
        assert_eq!(line.ramification_degree(), 0);
    }

    #[test]
    fn genus_examples() {
        for g in 0..=5 {
            assert_eq!(transposition_cover(g).genus(), g);
        }
        // degree 3 with four transpositions and two 3-cycles: delta 8
        let c3 = Perm::from_cycles(3, &[vec![0, 1, 2]]).unwrap();
        let t = Perm::from_cycles(3, &[vec![0, 1]]).unwrap();
        let u = Perm::from_cycles(3, &[vec![0, 2]]).unwrap();
        // product: must be identity; (0 1)(0 1) = id, (0 2)(0 2) = id, c3 * c3^-1 = id
        let cover = BranchedCover::from_parts(
            3,
            labels(6),
            vec![t.clone(), t, u.clone(), u, c3.clone(), c3.inverse()],
        )
        .unwrap();
        assert_eq!(cover.ramification_degree(), 8);
        assert_eq!(cover.genus(), 2);
    }

    #[test]
    fn parity_is_forced_by_identity_product() {
        // any valid tuple has even total defect, so Parity is unreachable here
        let c = transposition_cover(1);
        assert_eq!(c.ramification_degree() % 2, 0);
    }

    #[test]
    fn fiber_product_transitive_pair() {
        let c3 = Perm::from_cycles(3, &[vec![0, 1, 2]]).unwrap();
        let t3 = Perm::from_cycles(3, &[vec![0, 1]]).unwrap();
        let g1 =
            BranchedCover::from_parts(3, labels(4), vec![c3.clone(), c3.inverse(), t3.clone(), t3])
                .unwrap();
        let t2 = Perm::from_cycles(2, &[vec![0, 1]]).unwrap();
        let g2 =
            BranchedCover::from_parts(2, labels(4), vec![t2.clone(), t2.clone(), t2.clone(), t2])
                .unwrap();
        let comps = fiber_product(&g1, &g2).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].cover.degree(), 6);
        assert_eq!(comps[0].f1.degree(), 2);
        assert_eq!(comps[0].f2.degree(), 3);
    }

    #[test]
    fn fiber_product_diagonal_splitting() {
        let t = Perm::from_cycles(2, &[vec![0, 1]]).unwrap();
        let g = BranchedCover::from_parts(2, labels(2), vec![t.clone(), t]).unwrap();
        let comps = fiber_product(&g, &g).unwrap();
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|c| c.cover.degree() == 2));
        let total: usize = comps.iter().map(|c| c.cover.degree()).sum();
        assert_eq!(total, 4);
    }

    #[test]
    fn fiber_product_with_trivial_factor() {
        let t = Perm::from_cycles(2, &[vec![0, 1]]).unwrap();
        let g1 = BranchedCover::from_parts(2, labels(2), vec![t.clone(), t]).unwrap();
        let g2 = BranchedCover::projective_line(labels(2));
        let comps = fiber_product(&g1, &g2).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].cover.degree(), 2);
        // f1 is an isomorphism onto g1
        assert_eq!(comps[0].f1.degree(), 1);
        assert_eq!(relative_ramification(&comps[0].f1).unwrap(), 0);
    }

    #[test]
    fn relative_ramification_identity() {
        let c = transposition_cover(1);
        let id = CoverMorphism::identity(&c);
        assert_eq!(relative_ramification(&id).unwrap(), 0);
        assert!(is_etale(&id).unwrap());
    }

    #[test]
    fn hyperelliptic_to_base_is_ramified() {
        let c = transposition_cover(2);
        let f = CoverMorphism::to_base(&c);
        assert_eq!(relative_ramification(&f).unwrap(), 6);
        assert!(!is_etale(&f).unwrap());
    }

    #[test]
    fn riemann_hurwitz_for_morphisms() {
        let c3 = Perm::from_cycles(3, &[vec![0, 1, 2]]).unwrap();
        let t3 = Perm::from_cycles(3, &[vec![0, 1]]).unwrap();
        let g1 =
            BranchedCover::from_parts(3, labels(4), vec![c3.clone(), c3.inverse(), t3.clone(), t3])
                .unwrap();
        let t2 = Perm::from_cycles(2, &[vec![0, 1]]).unwrap();
        let g2 =
            BranchedCover::from_parts(2, labels(4), vec![t2.clone(), t2.clone(), t2.clone(), t2])
                .unwrap();
        for comp in fiber_product(&g1, &g2).unwrap() {
            for f in [&comp.f1, &comp.f2] {
                let lhs = comp.cover.genus() as i64;
                let rhs = f.degree() as i64 * (f.target().genus() as i64 - 1)
                    + 1
                    + relative_ramification(f).unwrap() as i64 / 2;
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn align_pads_with_identities() {
        let t = Perm::from_cycles(2, &[vec![0, 1]]).unwrap();
        let g1 =
            BranchedCover::from_parts(2, vec!["a".into(), "b".into()], vec![t.clone(), t.clone()])
                .unwrap();
        let g2 =
            BranchedCover::from_parts(2, vec!["b".into(), "c".into()], vec![t.clone(), t]).unwrap();
        let (a1, a2) = align_labels(&g1, &g2).unwrap();
        assert_eq!(a1.labels(), &["a", "b", "c"]);
        assert_eq!(a1.labels(), a2.labels());
        assert!(a1.perms()[2].is_identity());
        assert!(a2.perms()[0].is_identity());
    }
}
