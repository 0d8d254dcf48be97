//! CW structure of a covering surface and the combinatorial intersection
//! pairing.
//!
//! The base sphere is modelled as a bouquet: one vertex, one loop per branch
//! label, a small disk around each branch point bounded by its loop, and one
//! big disk bounded by the product of all loops. Lifting along the monodromy
//! gives the covering surface: one vertex per sheet, one edge `(sheet, label)`
//! running from `s` to `sigma_label(s)`, one small face per cycle of each
//! label permutation, and one big face per sheet carrying the lift of the
//! full product word.
//!
//! The rotation at a lifted vertex interleaves, in label order, the outgoing
//! half-edge of a label with the incoming one, copying the planar embedding
//! of the base bouquet in which each petal leaves and returns adjacently.
//! Face tracing (turn to the clockwise-next half-edge at each arrival) must
//! reproduce exactly the constructed faces; this and the Euler count are
//! checked on every build rather than trusted.
//!
//! Intersection numbers are computed against a parallel copy of a cycle
//! pushed off the 1-skeleton to its left: the pushed curve crosses, at each
//! vertex passage, the half-edges swept clockwise from the arrival corner to
//! the departure corner, and each crossing contributes a sign depending on
//! the crossed half-edge's direction. The pairing of an on-skeleton cycle
//! with such a transverse curve is a sum of edge-coefficient products.

use num_bigint::BigInt;

use crate::covers::BranchedCover;
use crate::error::{Error, Result};
use crate::intmat::bi;
use crate::perm::Perm;

/// A directed traversal of an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DirEdge {
    pub edge: usize,
    pub forward: bool,
}

/// Half-edge id: `2 * edge` is the tail end, `2 * edge + 1` the head end.
type Half = usize;

fn tail_half(edge: usize) -> Half {
    2 * edge
}

fn head_half(edge: usize) -> Half {
    2 * edge + 1
}

fn edge_of(h: Half) -> usize {
    h / 2
}

fn is_head(h: Half) -> bool {
    h % 2 == 1
}

pub struct CwSurface {
    pub sheets: usize,
    /// positions into the cover's label list that were kept after pruning
    pub label_positions: Vec<usize>,
    pub perms: Vec<Perm>,
    /// edge id `l * sheets + s` runs from `s` to `perms[l](s)`
    pub edge_tail: Vec<usize>,
    pub edge_head: Vec<usize>,
    /// face boundary words (small faces first, then big faces)
    pub faces: Vec<Vec<DirEdge>>,
    pub genus: usize,
    /// counterclockwise rotation at each vertex
    rot: Vec<Vec<Half>>,
    /// for each half-edge: (vertex, position in the rotation)
    half_pos: Vec<(usize, usize)>,
}

impl CwSurface {
    /// Builds the lifted CW structure over the given label positions
    /// (defaults to all labels acting nontrivially) and validates the face
    /// tracing and Euler characteristic against the cover's genus.
    pub fn build(cover: &BranchedCover, labels: Option<&[usize]>) -> Result<CwSurface> {
        let default: Vec<usize> = (0..cover.perms().len())
            .filter(|&i| !cover.perms()[i].is_identity())
            .collect();
        let label_positions: Vec<usize> = match labels {
            Some(ls) => ls.to_vec(),
            None => default,
        };
        let n = cover.degree();
        let perms: Vec<Perm> = label_positions
            .iter()
            .map(|&i| cover.perms()[i].clone())
            .collect();
        let l = perms.len();
        let edge_count = l * n;

        let mut edge_tail = vec![0usize; edge_count];
        let mut edge_head = vec![0usize; edge_count];
        for (li, p) in perms.iter().enumerate() {
            for s in 0..n {
                edge_tail[li * n + s] = s;
                edge_head[li * n + s] = p.apply(s);
            }
        }

        // rotation: out_1, in_1, out_2, in_2, ... at every vertex
        let mut rot: Vec<Vec<Half>> = vec![Vec::with_capacity(2 * l); n];
        for (v, r) in rot.iter_mut().enumerate() {
            for (li, p) in perms.iter().enumerate() {
                r.push(tail_half(li * n + v));
                r.push(head_half(li * n + p.inverse().apply(v)));
            }
        }
        let mut half_pos = vec![(0usize, 0usize); 2 * edge_count];
        for (v, r) in rot.iter().enumerate() {
            for (k, &h) in r.iter().enumerate() {
                half_pos[h] = (v, k);
            }
        }

        // small faces: one per cycle of each label permutation
        let mut faces: Vec<Vec<DirEdge>> = Vec::new();
        for (li, p) in perms.iter().enumerate() {
            for cycle in p.cycles() {
                let word = cycle
                    .iter()
                    .map(|&s| DirEdge {
                        edge: li * n + s,
                        forward: true,
                    })
                    .collect();
                faces.push(word);
            }
        }
        // big faces: lift of the full product word, one per sheet
        for start in 0..n {
            let mut word = Vec::with_capacity(l);
            let mut u = start;
            for (li, p) in perms.iter().enumerate() {
                word.push(DirEdge {
                    edge: li * n + u,
                    forward: true,
                });
                u = p.apply(u);
            }
            if u != start {
                return Err(Error::Internal("product word does not close".into()));
            }
            faces.push(word);
        }

        let surface = CwSurface {
            sheets: n,
            label_positions,
            perms,
            edge_tail,
            edge_head,
            faces,
            genus: cover.genus(),
            rot,
            half_pos,
        };
        surface.validate()?;
        Ok(surface)
    }

    pub fn edge_count(&self) -> usize {
        self.edge_tail.len()
    }

    pub fn vertex_of(&self, d: DirEdge, arrival: bool) -> usize {
        if d.forward == arrival {
            self.edge_head[d.edge]
        } else {
            self.edge_tail[d.edge]
        }
    }

    fn arrival_half(&self, d: DirEdge) -> Half {
        if d.forward {
            head_half(d.edge)
        } else {
            tail_half(d.edge)
        }
    }

    fn departure_half(&self, d: DirEdge) -> Half {
        if d.forward {
            tail_half(d.edge)
        } else {
            head_half(d.edge)
        }
    }

    /// clockwise-next half-edge around the vertex carrying `h`
    fn pred(&self, h: Half) -> Half {
        let (v, k) = self.half_pos[h];
        let r = &self.rot[v];
        r[(k + r.len() - 1) % r.len()]
    }

    /// The next directed edge of the face to the left of `d`.
    fn face_next(&self, d: DirEdge) -> DirEdge {
        let h = self.pred(self.arrival_half(d));
        DirEdge {
            edge: edge_of(h),
            forward: !is_head(h),
        }
    }

    fn validate(&self) -> Result<()> {
        let v = self.sheets;
        let e = self.edge_count();
        let f = self.faces.len();
        let chi = v as i64 - e as i64 + f as i64;
        if chi != 2 - 2 * self.genus as i64 {
            return Err(Error::EulerMismatch(format!(
                "V - E + F = {} but 2 - 2g = {}",
                chi,
                2 - 2 * self.genus as i64
            )));
        }
        if e == 0 {
            return Ok(());
        }
        // every edge lies on exactly two face-boundary incidences
        let mut incidences = vec![0usize; e];
        for face in &self.faces {
            for d in face {
                incidences[d.edge] += 1;
            }
        }
        if incidences.iter().any(|&c| c != 2) {
            return Err(Error::EulerMismatch(
                "an edge does not lie on exactly two face incidences".into(),
            ));
        }
        // faces traced from the rotation must match the constructed count
        let mut seen = vec![false; 2 * e];
        let mut traced = 0usize;
        for edge in 0..e {
            for forward in [true, false] {
                let start = DirEdge { edge, forward };
                let sid = 2 * edge + usize::from(forward);
                if seen[sid] {
                    continue;
                }
                traced += 1;
                let mut d = start;
                loop {
                    let id = 2 * d.edge + usize::from(d.forward);
                    if seen[id] {
                        return Err(Error::EulerMismatch(
                            "face tracing is not a partition".into(),
                        ));
                    }
                    seen[id] = true;
                    d = self.face_next(d);
                    if d == start {
                        break;
                    }
                }
            }
        }
        if traced != f {
            return Err(Error::EulerMismatch(format!(
                "rotation traces {} faces, construction has {}",
                traced, f
            )));
        }
        Ok(())
    }

    /// Boundary of a face as an edge chain.
    pub fn face_chain(&self, face: usize) -> Vec<BigInt> {
        let mut chain = vec![BigInt::from(0); self.edge_count()];
        for d in &self.faces[face] {
            if d.forward {
                chain[d.edge] += 1;
            } else {
                chain[d.edge] -= 1;
            }
        }
        chain
    }

    /// Spanning tree (BFS from vertex 0): for each vertex other than the
    /// root, the directed edge by which it was discovered.
    pub fn spanning_tree(&self) -> Result<(Vec<bool>, Vec<Option<DirEdge>>)> {
        let n = self.sheets;
        let mut is_tree = vec![false; self.edge_count()];
        let mut parent: Vec<Option<DirEdge>> = vec![None; n];
        let mut visited = vec![false; n];
        visited[0] = true;
        let mut queue = std::collections::VecDeque::from([0usize]);
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            #[allow(clippy::needless_range_loop)]
            for e in 0..self.edge_count() {
                for forward in [true, false] {
                    let d = DirEdge { edge: e, forward };
                    if self.vertex_of(d, false) != v {
                        continue;
                    }
                    let w = self.vertex_of(d, true);
                    if !visited[w] {
                        visited[w] = true;
                        is_tree[e] = true;
                        parent[w] = Some(d);
                        queue.push_back(w);
                        count += 1;
                    }
                }
            }
        }
        if count != n {
            return Err(Error::Internal("surface 1-skeleton is disconnected".into()));
        }
        Ok((is_tree, parent))
    }

    /// Closed walk of the fundamental cycle of a non-tree edge: the edge
    /// itself followed by the tree path from its head back to its tail.
    pub fn fundamental_walk(&self, parent: &[Option<DirEdge>], edge: usize) -> Vec<DirEdge> {
        let to_root = |mut v: usize| -> Vec<DirEdge> {
            let mut path = Vec::new();
            while let Some(d) = parent[v] {
                path.push(d);
                v = self.vertex_of(d, false);
            }
            path
        };
        let up_head = to_root(self.edge_head[edge]);
        let up_tail = to_root(self.edge_tail[edge]);
        // drop the common suffix toward the root
        let mut a = up_head.len();
        let mut b = up_tail.len();
        while a > 0 && b > 0 && up_head[a - 1] == up_tail[b - 1] {
            a -= 1;
            b -= 1;
        }
        let mut walk = vec![DirEdge {
            edge,
            forward: true,
        }];
        // climb from head to the meeting vertex (reversed parent edges)
        for d in &up_head[..a] {
            walk.push(DirEdge {
                edge: d.edge,
                forward: !d.forward,
            });
        }
        // descend to the tail (parent edges in root-to-tail order)
        for d in up_tail[..b].iter().rev() {
            walk.push(*d);
        }
        walk
    }

    pub fn chain_of_walk(&self, walk: &[DirEdge]) -> Vec<BigInt> {
        let mut chain = vec![BigInt::from(0); self.edge_count()];
        for d in walk {
            if d.forward {
                chain[d.edge] += 1;
            } else {
                chain[d.edge] -= 1;
            }
        }
        chain
    }

    /// Signed crossing counts, per edge, of the parallel copy of a closed
    /// walk pushed off to its left.
    pub fn left_push_crossings(&self, walk: &[DirEdge]) -> Vec<i64> {
        let mut cross = vec![0i64; self.edge_count()];
        if walk.is_empty() {
            return cross;
        }
        for (i, &d) in walk.iter().enumerate() {
            let next = walk[(i + 1) % walk.len()];
            let v = self.vertex_of(d, true);
            debug_assert_eq!(
                self.vertex_of(next, false),
                v,
                "walk is not closed head-to-tail"
            );
            let a = self.arrival_half(d);
            let b = self.departure_half(next);
            let mut h = self.pred(a);
            while h != b {
                // a clockwise sweep crosses incoming edges left-to-right
                cross[edge_of(h)] += if is_head(h) { 1 } else { -1 };
                h = self.pred(h);
            }
        }
        cross
    }

    /// Intersection number of an edge chain with the left-pushed copy of a
    /// closed walk.
    pub fn pairing(&self, chain: &[BigInt], walk: &[DirEdge]) -> BigInt {
        let cross = self.left_push_crossings(walk);
        let mut total = BigInt::from(0);
        for (e, c) in cross.iter().enumerate() {
            if *c != 0 && chain[e] != BigInt::from(0) {
                total += &chain[e] * bi(*c);
            }
        }
        total
    }

    /// Decomposes an edge chain with zero boundary into closed walks.
    pub fn walks_of_chain(&self, chain: &[BigInt]) -> Result<Vec<Vec<DirEdge>>> {
        // verify zero boundary
        let mut boundary = vec![BigInt::from(0); self.sheets];
        for (e, c) in chain.iter().enumerate() {
            boundary[self.edge_head[e]] += c;
            boundary[self.edge_tail[e]] -= c;
        }
        if boundary.iter().any(|b| *b != BigInt::from(0)) {
            return Err(Error::NotACycleImage);
        }
        let mut remaining: Vec<BigInt> = chain.to_vec();
        let mut walks = Vec::new();
        while let Some(start) = (0..remaining.len()).find(|&e| remaining[e] != BigInt::from(0)) {
            let take = |rem: &mut Vec<BigInt>, e: usize| -> DirEdge {
                if rem[e] > BigInt::from(0) {
                    rem[e] -= 1;
                    DirEdge {
                        edge: e,
                        forward: true,
                    }
                } else {
                    rem[e] += 1;
                    DirEdge {
                        edge: e,
                        forward: false,
                    }
                }
            };
            let first = take(&mut remaining, start);
            let start_v = self.vertex_of(first, false);
            let mut walk = vec![first];
            let mut at = self.vertex_of(first, true);
            while at != start_v {
                let e = (0..remaining.len())
                    .find(|&e| {
                        (remaining[e] > BigInt::from(0) && self.edge_tail[e] == at)
                            || (remaining[e] < BigInt::from(0) && self.edge_head[e] == at)
                    })
                    .ok_or_else(|| Error::Internal("walk decomposition stuck".into()))?;
                let d = take(&mut remaining, e);
                walk.push(d);
                at = self.vertex_of(d, true);
            }
            walks.push(walk);
        }
        Ok(walks)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covers::BranchedCover;
    use crate::perm::Perm;

    fn labels(k: usize) -> Vec<String> {
        (1..=k).map(|i| format!("b{i:02}")).collect()
    }

    fn hyperelliptic(g: usize) -> BranchedCover {
        let k = 2 * g + 2;
        let t = Perm::from_cycles(2, &[vec![0, 1]]).unwrap();
        BranchedCover::from_parts(2, labels(k), vec![t; k]).unwrap()
    }

    #[test]
    fn sphere_from_two_branch_points() {
        let c = hyperelliptic(0);
        let s = CwSurface::build(&c, None).unwrap();
        assert_eq!(s.sheets, 2);
        assert_eq!(s.edge_count(), 4);
        assert_eq!(s.faces.len(), 4);
        assert_eq!(s.genus, 0);
    }

    #[test]
    fn torus_counts() {
        let c = hyperelliptic(1);
        let s = CwSurface::build(&c, None).unwrap();
        // V=2, E=8, F=4 small + 2 big: chi = 0
        assert_eq!(s.edge_count(), 8);
        assert_eq!(s.faces.len(), 6);
    }

    #[test]
    fn degree_one_cover_is_a_sphere() {
        let c = BranchedCover::projective_line(labels(5));
        let s = CwSurface::build(&c, None).unwrap();
        assert_eq!(s.edge_count(), 0);
        assert_eq!(s.genus, 0);
    }

    #[test]
    fn spanning_tree_and_walks() {
        let c = hyperelliptic(1);
        let s = CwSurface::build(&c, None).unwrap();
        let (is_tree, parent) = s.spanning_tree().unwrap();
        let tree_count = is_tree.iter().filter(|&&t| t).count();
        assert_eq!(tree_count, s.sheets - 1);
        for (e, tree) in is_tree.iter().enumerate() {
            if *tree {
                continue;
            }
            let w = s.fundamental_walk(&parent, e);
            // closed
            assert_eq!(
                s.vertex_of(w[0], false),
                s.vertex_of(*w.last().unwrap(), true)
            );
            // its chain decomposes back into a single walk
            let chain = s.chain_of_walk(&w);
            let walks = s.walks_of_chain(&chain).unwrap();
            assert_eq!(walks.len(), 1);
        }
    }

    #[test]
    fn face_chains_have_zero_boundary() {
        let c = hyperelliptic(2);
        let s = CwSurface::build(&c, None).unwrap();
        for f in 0..s.faces.len() {
            let chain = s.face_chain(f);
            let mut boundary = vec![BigInt::from(0); s.sheets];
            for (e, coeff) in chain.iter().enumerate() {
                boundary[s.edge_head[e]] += coeff;
                boundary[s.edge_tail[e]] -= coeff;
            }
            assert!(boundary.iter().all(|b| *b == BigInt::from(0)));
        }
    }
}
