//! First homology of a covering surface as a unimodular symplectic lattice,
//! and the chain maps induced by cover morphisms.
//!
//! The cycle space of the 1-skeleton is spanned over the integers by the
//! fundamental cycles of a spanning tree, in which coordinates of a cycle are
//! just its coefficients on non-tree edges. Homology is the quotient by the
//! face boundaries, extracted from a Smith normal form of the boundary
//! coordinate matrix; the surface being closed and orientable, the quotient
//! must be torsion-free of rank `2g`.
//!
//! The intersection form is evaluated on the fundamental cycles by pairing
//! each with a left-pushed parallel copy of the other, then transported to
//! the homology basis bilinearly.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::covers::{BranchedCover, CoverMorphism};
use crate::error::{Error, Result};
use crate::intmat::{det, snf, IMat};
use crate::surface::CwSurface;

pub struct SurfaceHomology {
    pub surface: CwSurface,
    pub genus: usize,
    /// 2g
    pub rank: usize,
    /// basis cycles as edge chains, one per row
    pub basis_chains: IMat,
    /// alternating unimodular intersection matrix on the basis
    pub intersection: IMat,
    /// non-tree edge ids, in order: the coordinates of the cycle space
    non_tree: Vec<usize>,
    /// fundamental-cycle walks, aligned with `non_tree`
    walks: Vec<Vec<crate::surface::DirEdge>>,
    /// rank of the face-boundary lattice inside the cycle space
    boundary_rank: usize,
    /// column transform of the boundary SNF and its inverse
    v: IMat,
    vinv: IMat,
}

impl SurfaceHomology {
    pub fn new(cover: &BranchedCover, labels: Option<&[usize]>) -> Result<SurfaceHomology> {
        let surface = CwSurface::build(cover, labels)?;
        let e = surface.edge_count();
        let n = surface.sheets;
        let (is_tree, parent) = surface.spanning_tree()?;
        let non_tree: Vec<usize> = (0..e).filter(|&i| !is_tree[i]).collect();
        let m = non_tree.len();
        if m != e + 1 - n {
            return Err(Error::Internal("unexpected cycle-space rank".into()));
        }
        let walks: Vec<_> = non_tree
            .iter()
            .map(|&edge| surface.fundamental_walk(&parent, edge))
            .collect();

        // face boundaries in fundamental coordinates: coefficients on
        // non-tree edges
        let faces = surface.faces.len();
        let mut c = IMat::zeros(faces, m);
        for f in 0..faces {
            let chain = surface.face_chain(f);
            for (j, &edge) in non_tree.iter().enumerate() {
                c[(f, j)] = chain[edge].clone();
            }
        }
        let fsnf = snf(&c);
        for d in &fsnf.divisors {
            if !d.is_one() {
                return Err(Error::TorsionFound(format!("invariant factor {d}")));
            }
        }
        let boundary_rank = fsnf.rank;
        let rank = m - boundary_rank;
        if rank != 2 * surface.genus {
            return Err(Error::Internal(format!(
                "homology rank {} but genus {}",
                rank, surface.genus
            )));
        }

        // homology basis in fundamental coordinates: the tail rows of V^{-1}
        let basis_fund = fsnf.vinv.submatrix_rows(boundary_rank, m);

        // pairing matrix on fundamental cycles
        let mut pairing = IMat::zeros(m, m);
        for i in 0..m {
            let chain_i = surface.chain_of_walk(&walks[i]);
            for j in 0..m {
                pairing[(i, j)] = surface.pairing(&chain_i, &walks[j]);
            }
        }
        if pairing.transpose() != pairing.neg() {
            return Err(Error::Internal(
                "fundamental pairing is not antisymmetric".into(),
            ));
        }

        let intersection = basis_fund.mul(&pairing).mul(&basis_fund.transpose());
        if intersection.transpose() != intersection.neg() {
            return Err(Error::Internal(
                "intersection matrix is not alternating".into(),
            ));
        }
        let d = det(&intersection).abs();
        if !d.is_one() {
            return Err(Error::NonUnimodular(d.to_string()));
        }

        // basis cycles as edge chains
        let mut fund_chains = IMat::zeros(m, e);
        for (i, walk) in walks.iter().enumerate() {
            let chain = surface.chain_of_walk(walk);
            for (j, v) in chain.into_iter().enumerate() {
                fund_chains[(i, j)] = v;
            }
        }
        let basis_chains = basis_fund.mul(&fund_chains);

        Ok(SurfaceHomology {
            surface,
            genus: cover.genus(),
            rank,
            basis_chains,
            intersection,
            non_tree,
            walks,
            boundary_rank,
            v: fsnf.v,
            vinv: fsnf.vinv,
        })
    }

    /// Homology coordinates of a closed edge chain.
    pub fn coords_of_cycle(&self, chain: &[BigInt]) -> Result<Vec<BigInt>> {
        let e = self.surface.edge_count();
        if chain.len() != e {
            return Err(Error::Internal("chain length mismatch".into()));
        }
        let mut boundary = vec![BigInt::zero(); self.surface.sheets];
        for (i, c) in chain.iter().enumerate() {
            boundary[self.surface.edge_head[i]] += c;
            boundary[self.surface.edge_tail[i]] -= c;
        }
        if boundary.iter().any(|b| !b.is_zero()) {
            return Err(Error::NotACycleImage);
        }
        // fundamental coordinates are the non-tree coefficients
        let m = self.non_tree.len();
        let mut fund = IMat::zeros(1, m);
        for (j, &edge) in self.non_tree.iter().enumerate() {
            fund[(0, j)] = chain[edge].clone();
        }
        let y = fund.mul(&self.v);
        Ok((self.boundary_rank..m).map(|j| y[(0, j)].clone()).collect())
    }

    fn vinv_tail(&self) -> IMat {
        self.vinv
            .submatrix_rows(self.boundary_rank, self.non_tree.len())
    }

    /// Self-check: reduction and basis agree (`coords(basis_i) = e_i`).
    pub fn check_basis_roundtrip(&self) -> Result<()> {
        for i in 0..self.rank {
            let coords = self.coords_of_cycle(&self.basis_chains.row_vec(i))?;
            for (j, c) in coords.iter().enumerate() {
                let expected = if i == j {
                    BigInt::one()
                } else {
                    BigInt::zero()
                };
                if *c != expected {
                    return Err(Error::Internal("basis roundtrip failed".into()));
                }
            }
        }
        let _ = self.vinv_tail();
        let _ = &self.walks;
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainMapKind {
    Pushforward,
    Transfer,
}

/// An induced map between homology lattices; vectors are rows and the map
/// acts by `y = x * matrix`.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub matrix: IMat,
    pub kind: ChainMapKind,
    pub degree: usize,
}

/// Pushforward on homology: each edge of the source maps to the edge with
/// the same label under the sheet map.
pub fn pushforward(
    f: &CoverMorphism,
    src: &SurfaceHomology,
    tgt: &SurfaceHomology,
) -> Result<ChainMap> {
    if src.surface.label_positions != tgt.surface.label_positions {
        return Err(Error::Internal(
            "surfaces built over different label sets".into(),
        ));
    }
    let n_src = src.surface.sheets;
    let n_tgt = tgt.surface.sheets;
    let l = src.surface.perms.len();
    let mut matrix = IMat::zeros(src.rank, tgt.rank);
    for i in 0..src.rank {
        let chain = src.basis_chains.row_vec(i);
        let mut image = vec![BigInt::zero(); tgt.surface.edge_count()];
        for li in 0..l {
            for s in 0..n_src {
                let c = &chain[li * n_src + s];
                if !c.is_zero() {
                    image[li * n_tgt + f.apply(s)] += c;
                }
            }
        }
        let coords = tgt.coords_of_cycle(&image)?;
        for (j, v) in coords.into_iter().enumerate() {
            matrix[(i, j)] = v;
        }
    }
    Ok(ChainMap {
        matrix,
        kind: ChainMapKind::Pushforward,
        degree: f.degree(),
    })
}

/// Transfer on homology: each edge of the target maps to the sum of the
/// like-labelled edges over its preimage sheets.
pub fn transfer(
    f: &CoverMorphism,
    src: &SurfaceHomology,
    tgt: &SurfaceHomology,
) -> Result<ChainMap> {
    if src.surface.label_positions != tgt.surface.label_positions {
        return Err(Error::Internal(
            "surfaces built over different label sets".into(),
        ));
    }
    let n_src = src.surface.sheets;
    let n_tgt = tgt.surface.sheets;
    let l = tgt.surface.perms.len();
    let mut fibers: Vec<Vec<usize>> = vec![Vec::new(); n_tgt];
    for s in 0..n_src {
        fibers[f.apply(s)].push(s);
    }
    let mut matrix = IMat::zeros(tgt.rank, src.rank);
    for i in 0..tgt.rank {
        let chain = tgt.basis_chains.row_vec(i);
        let mut image = vec![BigInt::zero(); src.surface.edge_count()];
        for li in 0..l {
            for v in 0..n_tgt {
                let c = &chain[li * n_tgt + v];
                if !c.is_zero() {
                    for &s in &fibers[v] {
                        image[li * n_src + s] += c;
                    }
                }
            }
        }
        let coords = src.coords_of_cycle(&image)?;
        for (j, val) in coords.into_iter().enumerate() {
            matrix[(i, j)] = val;
        }
    }
    Ok(ChainMap {
        matrix,
        kind: ChainMapKind::Transfer,
        degree: f.degree(),
    })
}

/// The homology layer of a pair diagram: the three surfaces over the shared
/// pruned label list and the four induced chain maps, with the composition
/// and form-scaling identities verified exactly.
pub struct DiagramHomology {
    pub labels: Vec<usize>,
    pub x: SurfaceHomology,
    pub x1: SurfaceHomology,
    pub x2: SurfaceHomology,
    pub push1: ChainMap,
    pub trans1: ChainMap,
    pub push2: ChainMap,
    pub trans2: ChainMap,
}

impl DiagramHomology {
    pub fn build(d: &crate::covers::PairDiagram) -> Result<DiagramHomology> {
        // prune labels acting trivially on the total space (hence everywhere)
        let labels: Vec<usize> = (0..d.x.perms().len())
            .filter(|&i| !d.x.perms()[i].is_identity())
            .collect();
        let x = SurfaceHomology::new(&d.x, Some(&labels))?;
        let x1 = SurfaceHomology::new(&d.g1, Some(&labels))?;
        let x2 = SurfaceHomology::new(&d.g2, Some(&labels))?;
        let push1 = pushforward(&d.f1, &x, &x1)?;
        let trans1 = transfer(&d.f1, &x, &x1)?;
        let push2 = pushforward(&d.f2, &x, &x2)?;
        let trans2 = transfer(&d.f2, &x, &x2)?;

        let dh = DiagramHomology {
            labels,
            x,
            x1,
            x2,
            push1,
            trans1,
            push2,
            trans2,
        };
        dh.verify_chain_identities()?;
        Ok(dh)
    }

    /// `pushforward . transfer = deg * id`, the form scaling
    /// `E_X(f^* a, f^* b) = deg * E_Y(a, b)`, and the adjointness
    /// `E_X(f^* a, x) = E_Y(a, N_f x)`, for both projections.
    fn verify_chain_identities(&self) -> Result<()> {
        for (tr, pu, tgt) in [
            (&self.trans1, &self.push1, &self.x1),
            (&self.trans2, &self.push2, &self.x2),
        ] {
            let deg = tr.degree;
            let composed = tr.matrix.mul(&pu.matrix);
            let scaled = IMat::identity(tgt.rank).scale(&BigInt::from(deg));
            if composed != scaled {
                return Err(Error::CompositionMismatch(deg));
            }
            let pulled = tr
                .matrix
                .mul(&self.x.intersection)
                .mul(&tr.matrix.transpose());
            let expected = tgt.intersection.scale(&BigInt::from(deg));
            if pulled != expected {
                return Err(Error::CompositionMismatch(deg));
            }
            let adj_lhs = tr.matrix.mul(&self.x.intersection);
            let adj_rhs = tgt.intersection.mul(&pu.matrix.transpose());
            if adj_lhs != adj_rhs {
                return Err(Error::CompositionMismatch(deg));
            }
        }
        Ok(())
    }
}
