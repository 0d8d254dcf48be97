//! Backtracking search for monodromy realizations of a parameter tuple.
//!
//! A witness is a pair of monodromy tuples over a shared label list hitting
//! the prescribed ramification degrees of both factors and of the total
//! space, with transitive actions and transitive product action. Labels are
//! filled left to right, pairs of permutations are enumerated in
//! lexicographic one-line order, and the last label is forced to the inverse
//! of the running products, so the search is deterministic for a given
//! budget. Once the three defect sums match, the projection ramification
//! degrees are determined by the genera, so only the factorization flags
//! remain to be checked on the assembled diagram.

use std::collections::BTreeSet;

use crate::classification::{etale_family_test, ramified_family_test, HurwitzParams};
use crate::covers::{BranchedCover, PairDiagram};
use crate::error::{Error, Result};
use crate::group::{common_factorization_exists, cyclic_etale_factorization_exists, deck_group};
use crate::perm::{all_perms, is_transitive, Perm};

#[derive(Clone, Copy, Debug)]
pub struct SearchBudget {
    pub nodes: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { nodes: 5_000_000 }
    }
}

struct Search {
    d1: usize,
    d2: usize,
    target_a: i64,
    target_b: i64,
    target_x: i64,
    k: usize,
    /// candidate label pairs with their defect triples, lexicographic
    options: Vec<(Perm, Perm, i64, i64, i64)>,
    /// exact reachability of (slots, rem_a, rem_b, rem_x) by defect triples
    feasible: Option<Feasibility>,
    nodes_left: u64,
    seen: BTreeSet<Vec<usize>>,
    params: HurwitzParams,
}

/// Bottom-up table of defect sums attainable with a given number of labels.
struct Feasibility {
    table: Vec<bool>,
    dims: (usize, usize, usize, usize),
}

impl Feasibility {
    const CAP: usize = 50_000_000;

    fn build(k: usize, a: i64, b: i64, x: i64, triples: &[(i64, i64, i64)]) -> Option<Feasibility> {
        let (a, b, x) = (a as usize, b as usize, x as usize);
        let dims = (k + 1, a + 1, b + 1, x + 1);
        let size = dims
            .0
            .checked_mul(dims.1)?
            .checked_mul(dims.2)?
            .checked_mul(dims.3)?;
        if size > Self::CAP {
            return None;
        }
        let mut table = vec![false; size];
        let idx = |s: usize, ia: usize, ib: usize, ix: usize| {
            ((s * dims.1 + ia) * dims.2 + ib) * dims.3 + ix
        };
        table[idx(0, 0, 0, 0)] = true;
        for s in 1..dims.0 {
            for ia in 0..dims.1 {
                for ib in 0..dims.2 {
                    for ix in 0..dims.3 {
                        let reachable = triples.iter().any(|&(da, db, dx)| {
                            let (da, db, dx) = (da as usize, db as usize, dx as usize);
                            ia >= da
                                && ib >= db
                                && ix >= dx
                                && table[idx(s - 1, ia - da, ib - db, ix - dx)]
                        });
                        table[idx(s, ia, ib, ix)] = reachable;
                    }
                }
            }
        }
        Some(Feasibility { table, dims })
    }

    fn check(&self, slots: i64, a: i64, b: i64, x: i64) -> bool {
        if slots < 0 || a < 0 || b < 0 || x < 0 {
            return false;
        }
        let (s, a, b, x) = (slots as usize, a as usize, b as usize, x as usize);
        if s >= self.dims.0 || a >= self.dims.1 || b >= self.dims.2 || x >= self.dims.3 {
            return false;
        }
        self.table[((s * self.dims.1 + a) * self.dims.2 + b) * self.dims.3 + x]
    }
}

fn pair_defect(a: &Perm, b: &Perm) -> i64 {
    // orbits of the product action: one per gcd of interacting cycle lengths
    let mut orbits = 0i64;
    for ca in a.cycles() {
        for cb in b.cycles() {
            orbits += num_integer::gcd(ca.len() as i64, cb.len() as i64);
        }
    }
    (a.degree() * b.degree()) as i64 - orbits
}

impl Search {
    fn run(&mut self) -> Result<Option<(Vec<Perm>, Vec<Perm>)>> {
        let mut chosen_a: Vec<Perm> = Vec::with_capacity(self.k);
        let mut chosen_b: Vec<Perm> = Vec::with_capacity(self.k);
        self.extend(&mut chosen_a, &mut chosen_b, 0, 0, 0)
    }

    fn extend(
        &mut self,
        chosen_a: &mut Vec<Perm>,
        chosen_b: &mut Vec<Perm>,
        sum_a: i64,
        sum_b: i64,
        sum_x: i64,
    ) -> Result<Option<(Vec<Perm>, Vec<Perm>)>> {
        let depth = chosen_a.len();
        if depth + 1 == self.k {
            return self.close(chosen_a, chosen_b, sum_a, sum_b, sum_x);
        }
        let slots_left = (self.k - depth) as i64; // includes the forced label
        let rem_a = self.target_a - sum_a;
        let rem_b = self.target_b - sum_b;
        let rem_x = self.target_x - sum_x;
        let (d1, d2) = (self.d1 as i64, self.d2 as i64);
        if rem_a < 0 || rem_b < 0 || rem_x < 0 {
            return Ok(None);
        }
        if rem_a > slots_left * (d1 - 1) || rem_b > slots_left * (d2 - 1) {
            return Ok(None);
        }
        if rem_a + rem_b < slots_left || rem_x < slots_left {
            return Ok(None);
        }
        if rem_x < d2 * rem_a || rem_x < d1 * rem_b || rem_x > d2 * rem_a + d1 * rem_b {
            return Ok(None);
        }
        if let Some(f) = &self.feasible {
            if !f.check(slots_left, rem_a, rem_b, rem_x) {
                return Ok(None);
            }
        }
        for idx in 0..self.options.len() {
            if self.nodes_left == 0 {
                return Err(Error::SearchBudgetExceeded("witness search".into()));
            }
            self.nodes_left -= 1;
            let (a, b, da, db, dx) = self.options[idx].clone();
            chosen_a.push(a);
            chosen_b.push(b);
            let found = self.extend(chosen_a, chosen_b, sum_a + da, sum_b + db, sum_x + dx)?;
            chosen_a.pop();
            chosen_b.pop();
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    fn close(
        &mut self,
        chosen_a: &[Perm],
        chosen_b: &[Perm],
        sum_a: i64,
        sum_b: i64,
        sum_x: i64,
    ) -> Result<Option<(Vec<Perm>, Vec<Perm>)>> {
        if self.nodes_left == 0 {
            return Err(Error::SearchBudgetExceeded("witness search".into()));
        }
        self.nodes_left -= 1;
        let prod_a = chosen_a
            .iter()
            .fold(Perm::identity(self.d1), |acc, p| acc.compose(p));
        let prod_b = chosen_b
            .iter()
            .fold(Perm::identity(self.d2), |acc, p| acc.compose(p));
        let last_a = prod_a.inverse();
        let last_b = prod_b.inverse();
        if last_a.is_identity() && last_b.is_identity() {
            return Ok(None);
        }
        if sum_a + last_a.defect() as i64 != self.target_a {
            return Ok(None);
        }
        if sum_b + last_b.defect() as i64 != self.target_b {
            return Ok(None);
        }
        if sum_x + pair_defect(&last_a, &last_b) != self.target_x {
            return Ok(None);
        }
        let mut tuple_a = chosen_a.to_vec();
        tuple_a.push(last_a);
        let mut tuple_b = chosen_b.to_vec();
        tuple_b.push(last_b);
        {
            let refs: Vec<&Perm> = tuple_a.iter().collect();
            if !is_transitive(self.d1, &refs) {
                return Ok(None);
            }
            let refs: Vec<&Perm> = tuple_b.iter().collect();
            if !is_transitive(self.d2, &refs) {
                return Ok(None);
            }
        }
        // dedupe candidates up to simultaneous conjugation in both factors
        let key = canonical_pair_key(&tuple_a, &tuple_b);
        if !self.seen.insert(key) {
            return Ok(None);
        }
        if !self.accept(&tuple_a, &tuple_b)? {
            return Ok(None);
        }
        Ok(Some((tuple_a, tuple_b)))
    }

    /// Assembles the diagram and checks the product-transitivity, parameter,
    /// and factorization-flag conditions.
    fn accept(&mut self, tuple_a: &[Perm], tuple_b: &[Perm]) -> Result<bool> {
        let labels: Vec<String> = (1..=self.k).map(|i| format!("b{i:02}")).collect();
        let Ok(g1) = BranchedCover::from_parts(self.d1, labels.clone(), tuple_a.to_vec()) else {
            return Ok(false);
        };
        let Ok(g2) = BranchedCover::from_parts(self.d2, labels, tuple_b.to_vec()) else {
            return Ok(false);
        };
        let Ok(diagram) = PairDiagram::build(&g1, &g2) else {
            return Ok(false);
        };
        if diagram.params != self.params {
            return Ok(false);
        }
        let budget = self.nodes_left.max(1_000_000);
        let ram = ramified_family_test(&self.params);
        let et = etale_family_test(&self.params);
        if ram.holds || et.holds {
            if common_factorization_exists(&diagram.g1, &diagram.g2, budget)? {
                return Ok(false);
            }
            if cyclic_etale_factorization_exists(&diagram.f1, budget)? {
                return Ok(false);
            }
            if ram.holds {
                if cyclic_etale_factorization_exists(&diagram.f2, budget)? {
                    return Ok(false);
                }
            } else {
                if crate::covers::relative_ramification(&diagram.f2)? != 0 {
                    return Ok(false);
                }
                let deck = deck_group(&diagram.f2, budget)?;
                if !(deck.is_galois && deck.is_cyclic) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn canonical_pair_key(tuple_a: &[Perm], tuple_b: &[Perm]) -> Vec<usize> {
    let d1 = tuple_a[0].degree();
    let d2 = tuple_b[0].degree();
    let mut best: Option<Vec<usize>> = None;
    for rho1 in all_perms(d1) {
        for rho2 in all_perms(d2) {
            let mut flat = Vec::with_capacity(tuple_a.len() * (d1 + d2));
            for (a, b) in tuple_a.iter().zip(tuple_b) {
                flat.extend_from_slice(a.relabel(&rho1).images());
                flat.extend_from_slice(b.relabel(&rho2).images());
            }
            if best.as_ref().map(|bst| flat < *bst).unwrap_or(true) {
                best = Some(flat);
            }
        }
    }
    best.unwrap_or_default()
}

/// Searches for a pair diagram realizing the parameter tuple, trying label
/// counts from the counting minimum upward. Returns the first witness in the
/// deterministic enumeration order.
pub fn witness_search(params: &HurwitzParams, budget: SearchBudget) -> Result<PairDiagram> {
    let d1 = params.d1 as usize;
    let d2 = params.d2 as usize;
    if d1 < 1 || d2 < 1 || d1 > 6 || d2 > 6 {
        return Err(Error::SearchBudgetExceeded(format!(
            "witness search supports factor degrees 1..=6, got ({d1}, {d2})"
        )));
    }
    let target_a = 2 * params.r1;
    let target_b = 2 * params.r2;
    let target_x = 2 * (params.gx() - 1 + (params.d1 * params.d2));

    let mut options = Vec::new();
    for a in all_perms(d1) {
        for b in all_perms(d2) {
            if a.is_identity() && b.is_identity() {
                continue;
            }
            let da = a.defect() as i64;
            let db = b.defect() as i64;
            let dx = pair_defect(&a, &b);
            options.push((a.clone(), b, da, db, dx));
        }
    }

    let per_label_a = (d1 as i64 - 1).max(0);
    let per_label_b = (d2 as i64 - 1).max(0);
    let k_min = {
        let mut k = 2usize.max(d1.saturating_sub(1)).max(d2.saturating_sub(1));
        if per_label_a > 0 {
            k = k.max(((target_a + per_label_a - 1) / per_label_a) as usize);
        } else if target_a > 0 {
            return Err(Error::NotFound("degree-1 factor cannot ramify".into()));
        }
        if per_label_b > 0 {
            k = k.max(((target_b + per_label_b - 1) / per_label_b) as usize);
        } else if target_b > 0 {
            return Err(Error::NotFound("degree-1 factor cannot ramify".into()));
        }
        k
    };
    let k_max = ((target_a + target_b) as usize).max(k_min);

    let triples: Vec<(i64, i64, i64)> = {
        let mut t: Vec<_> = options.iter().map(|o| (o.2, o.3, o.4)).collect();
        t.sort_unstable();
        t.dedup();
        t
    };

    let mut nodes_left = budget.nodes;
    for k in k_min..=k_max {
        let mut search = Search {
            d1,
            d2,
            target_a,
            target_b,
            target_x,
            k,
            options: options.clone(),
            feasible: Feasibility::build(k, target_a, target_b, target_x, &triples),
            nodes_left,
            seen: BTreeSet::new(),
            params: *params,
        };
        match search.run() {
            Ok(Some((tuple_a, tuple_b))) => {
                let labels: Vec<String> = (1..=k).map(|i| format!("b{i:02}")).collect();
                let g1 = BranchedCover::from_parts(d1, labels.clone(), tuple_a)?;
                let g2 = BranchedCover::from_parts(d2, labels, tuple_b)?;
                return PairDiagram::build(&g1, &g2);
            }
            Ok(None) => {
                nodes_left = search.nodes_left;
            }
            Err(Error::SearchBudgetExceeded(_)) => {
                return Err(Error::NotFound(format!(
                    "budget exhausted at {} labels; no witness found earlier",
                    k
                )));
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::NotFound(format!(
        "search space exhausted up to {} labels",
        k_max
    )))
}
