//! Deck transformations, block systems, and factorization tests for cover
//! morphisms, all by finite search over the sheet actions.
//!
//! A deck transformation of `f: X -> Z` is a sheet bijection of `X` that
//! commutes with every monodromy permutation and with the sheet map of `f`.
//! Intermediate covers `X -> W -> Z` correspond to monodromy-invariant
//! partitions of the sheets of `X` refining the fibers of `f`.

use std::collections::BTreeSet;

use crate::covers::{is_etale, BranchedCover, CoverMorphism};
use crate::error::{Error, Result};
use crate::perm::{all_perms, Perm};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeckGroup {
    pub order: usize,
    pub is_cyclic: bool,
    pub is_galois: bool,
    pub is_abelian: bool,
}

/// Enumerates the deck transformations of a morphism. Each candidate image of
/// sheet 0 is propagated through the monodromy action; the candidate survives
/// only if the propagation closes into a bijection commuting with the sheet
/// map everywhere.
pub fn deck_group(f: &CoverMorphism, budget: u64) -> Result<DeckGroup> {
    let n = f.source().degree();
    let perms = f.source().perms();
    let mut steps: u64 = 0;
    let mut elements: Vec<Perm> = Vec::new();

    'candidates: for image0 in 0..n {
        if f.apply(image0) != f.apply(0) {
            continue;
        }
        let mut phi: Vec<Option<usize>> = vec![None; n];
        phi[0] = Some(image0);
        let mut stack = vec![0usize];
        while let Some(x) = stack.pop() {
            let y = phi[x].expect("queued sheets are assigned");
            // forward constraints at every sheet imply full equivariance
            for p in perms {
                steps += 1;
                if steps > budget {
                    return Err(Error::SearchBudgetExceeded(
                        "deck transformation enumeration".into(),
                    ));
                }
                let (a, b) = (p.apply(x), p.apply(y));
                match phi[a] {
                    None => {
                        phi[a] = Some(b);
                        stack.push(a);
                    }
                    Some(existing) => {
                        if existing != b {
                            continue 'candidates;
                        }
                    }
                }
            }
        }
        let images: Vec<usize> = match phi.into_iter().collect::<Option<Vec<_>>>() {
            Some(v) => v,
            None => continue, // not totally defined: cannot happen for transitive actions
        };
        let Ok(perm) = Perm::from_images(images) else {
            continue;
        };
        if (0..n).any(|s| f.apply(perm.apply(s)) != f.apply(s)) {
            continue;
        }
        elements.push(perm);
    }

    let order = elements.len();
    let is_galois = order == f.degree();
    let is_cyclic = elements.iter().any(|e| e.order() == order);
    let is_abelian = elements.iter().enumerate().all(|(i, a)| {
        elements[i + 1..]
            .iter()
            .all(|b| a.compose(b) == b.compose(a))
    });
    Ok(DeckGroup {
        order,
        is_cyclic,
        is_galois,
        is_abelian,
    })
}

/// A partition of the source sheets, as class ids numbered by first
/// occurrence.
pub type Partition = Vec<usize>;

fn canonical_partition(class_of: &[usize]) -> Partition {
    let mut rename: Vec<Option<usize>> = vec![None; class_of.len()];
    let mut next = 0;
    let mut out = Vec::with_capacity(class_of.len());
    for &c in class_of {
        let id = match rename[c] {
            Some(id) => id,
            None => {
                rename[c] = Some(next);
                next += 1;
                next - 1
            }
        };
        out.push(id);
    }
    out
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }
    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let r = self.find(self.parent[x]);
            self.parent[x] = r;
        }
        self.parent[x]
    }
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
    fn classes(&mut self) -> Partition {
        let n = self.parent.len();
        let ids: Vec<usize> = (0..n).map(|x| self.find(x)).collect();
        canonical_partition(&ids)
    }
}

/// Smallest monodromy-invariant partition identifying the listed seed pairs.
fn generated_congruence(perms: &[Perm], n: usize, seeds: &[(usize, usize)]) -> Partition {
    let mut uf = UnionFind::new(n);
    for &(a, b) in seeds {
        uf.union(a, b);
    }
    loop {
        let mut changed = false;
        for p in perms {
            for x in 0..n {
                for y in x + 1..n {
                    if uf.find(x) == uf.find(y) && uf.union(p.apply(x), p.apply(y)) {
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    uf.classes()
}

fn join(a: &Partition, b: &Partition, perms: &[Perm]) -> Partition {
    let n = a.len();
    let mut uf = UnionFind::new(n);
    for x in 0..n {
        for y in x + 1..n {
            if a[x] == a[y] || b[x] == b[y] {
                uf.union(x, y);
            }
        }
    }
    let base = uf.classes();
    generated_congruence(perms, n, &pairs_of(&base))
}

fn pairs_of(p: &Partition) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for x in 0..p.len() {
        for y in x + 1..p.len() {
            if p[x] == p[y] {
                out.push((x, y));
            }
        }
    }
    out
}

fn refines_fibers(p: &Partition, fiber: &[usize]) -> bool {
    let n = p.len();
    for x in 0..n {
        for y in x + 1..n {
            if p[x] == p[y] && fiber[x] != fiber[y] {
                return false;
            }
        }
    }
    true
}

/// All monodromy-invariant partitions of the source sheets refining the
/// fibers of `fiber` (use a constant map for block systems over the base),
/// including the partition into singletons and the fiber partition itself.
pub fn congruences(
    perms: &[Perm],
    n: usize,
    fiber: &[usize],
    budget: u64,
) -> Result<Vec<Partition>> {
    let singletons: Partition = (0..n).collect();
    let mut set: BTreeSet<Partition> = BTreeSet::new();
    set.insert(singletons);
    let mut work: u64 = 0;

    // seeds: minimal congruences identifying sheet 0 with another sheet of
    // its fiber; by transitivity every congruence is a join of conjugates of
    // these, and conjugates generate the same partitions.
    let mut seeds = Vec::new();
    for y in 1..n {
        if fiber[y] != fiber[0] {
            continue;
        }
        let c = generated_congruence(perms, n, &[(0, y)]);
        if refines_fibers(&c, fiber) {
            seeds.push(c);
        }
    }
    for s in &seeds {
        set.insert(s.clone());
    }

    loop {
        let snapshot: Vec<Partition> = set.iter().cloned().collect();
        let before = set.len();
        for a in &snapshot {
            for b in &seeds {
                work += 1;
                if work > budget {
                    return Err(Error::SearchBudgetExceeded("congruence enumeration".into()));
                }
                let j = join(a, b, perms);
                if refines_fibers(&j, fiber) {
                    set.insert(j);
                }
            }
        }
        if set.len() == before {
            break;
        }
    }
    Ok(set.into_iter().collect())
}

/// The quotient cover of a monodromy-invariant partition, with the quotient
/// morphism from the source.
pub fn quotient_cover(
    cover: &BranchedCover,
    partition: &Partition,
) -> Result<(BranchedCover, CoverMorphism)> {
    let n = cover.degree();
    let classes = partition.iter().copied().max().map_or(0, |m| m + 1);
    let perms: Vec<Perm> = cover
        .perms()
        .iter()
        .map(|p| {
            let mut images = vec![usize::MAX; classes];
            for x in 0..n {
                let (c, pc) = (partition[x], partition[p.apply(x)]);
                if images[c] == usize::MAX {
                    images[c] = pc;
                } else if images[c] != pc {
                    return Err(Error::Internal("partition is not invariant".into()));
                }
            }
            Perm::from_images(images)
        })
        .collect::<Result<_>>()?;
    let quotient = BranchedCover::from_parts(classes, cover.labels().to_vec(), perms)?;
    let morphism = CoverMorphism::new(cover.clone(), quotient.clone(), partition.clone())?;
    Ok((quotient, morphism))
}

/// Whether `f` factors as `X -> W -> target` with `W -> target` a cyclic
/// unramified cover of degree at least 2. The intermediate covers are the
/// monodromy-invariant partitions refining the fibers of `f`; the quotient
/// `W -> target` is tested for vanishing relative ramification and a cyclic,
/// simply transitive deck group.
pub fn cyclic_etale_factorization_exists(f: &CoverMorphism, budget: u64) -> Result<bool> {
    if f.degree() < 2 {
        return Ok(false);
    }
    let n = f.source().degree();
    let parts = congruences(f.source().perms(), n, f.sheet_map(), budget)?;
    for part in parts {
        let classes = part.iter().copied().max().map_or(0, |m| m + 1);
        let quotient_over_target = classes / f.target().degree();
        if quotient_over_target < 2 {
            continue;
        }
        let (w, _x_to_w) = quotient_cover(f.source(), &part)?;
        let mut class_fiber = vec![usize::MAX; classes];
        for x in 0..n {
            class_fiber[part[x]] = f.apply(x);
        }
        let w_to_target = CoverMorphism::new(w, f.target().clone(), class_fiber)?;
        if !is_etale(&w_to_target)? {
            continue;
        }
        let deck = deck_group(&w_to_target, budget)?;
        if deck.is_galois && deck.is_cyclic {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Canonical representative of a monodromy tuple under simultaneous
/// relabeling of the sheets: the lexicographically smallest flattening over
/// all conjugators.
pub fn canonical_tuple(perms: &[Perm], budget: u64) -> Result<Vec<usize>> {
    let n = perms.first().map_or(0, |p| p.degree());
    if n > 8 {
        return Err(Error::SearchBudgetExceeded(format!(
            "canonical form at degree {n} (max 8)"
        )));
    }
    let mut best: Option<Vec<usize>> = None;
    let mut work: u64 = 0;
    for rho in all_perms(n) {
        work += (perms.len() * n) as u64;
        if work > budget {
            return Err(Error::SearchBudgetExceeded("canonical form".into()));
        }
        let flat: Vec<usize> = perms
            .iter()
            .flat_map(|p| p.relabel(&rho).images().to_vec())
            .collect();
        if best.as_ref().map(|b| flat < *b).unwrap_or(true) {
            best = Some(flat);
        }
    }
    Ok(best.unwrap_or_default())
}

/// Whether both covers factor through a common cover of the line of degree
/// at least 2, compared up to monodromy-tuple conjugacy.
pub fn common_factorization_exists(
    g1: &BranchedCover,
    g2: &BranchedCover,
    budget: u64,
) -> Result<bool> {
    if g1.labels() != g2.labels() {
        return Err(Error::InvalidMonodromy("label lists differ".into()));
    }
    let quotients = |g: &BranchedCover| -> Result<BTreeSet<Vec<usize>>> {
        let fiber = vec![0usize; g.degree()];
        let mut out = BTreeSet::new();
        for part in congruences(g.perms(), g.degree(), &fiber, budget)? {
            let classes = part.iter().copied().max().map_or(0, |m| m + 1);
            if classes < 2 {
                continue;
            }
            let (q, _) = quotient_cover(g, &part)?;
            out.insert(canonical_tuple(q.perms(), budget)?);
        }
        Ok(out)
    };
    let a = quotients(g1)?;
    let b = quotients(g2)?;
    Ok(a.intersection(&b).next().is_some())
}
