//! `(k+1)`-cores, the bounded/core bijection, k-conjugation and weak strips.

use std::collections::HashMap;

use parking_lot::RwLock;

use crate::error::{Error, Result};
use crate::partition::{is_horizontal_strip, is_vertical_strip, Cell, LevelContext, Partition};

/// A partition with every part at most `k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoundedPartition {
    shape: Partition,
    ctx: LevelContext,
}

impl BoundedPartition {
    pub fn new(shape: Partition, ctx: LevelContext) -> Result<Self> {
        if !shape.is_bounded(ctx.k()) {
            return Err(Error::NotBounded { shape: shape.to_string(), k: ctx.k() });
        }
        Ok(BoundedPartition { shape, ctx })
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn into_shape(self) -> Partition {
        self.shape
    }

    pub fn ctx(&self) -> LevelContext {
        self.ctx
    }
}

/// A partition none of whose cells has hook length `k+1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CorePartition {
    shape: Partition,
    ctx: LevelContext,
}

impl CorePartition {
    pub fn new(shape: Partition, ctx: LevelContext) -> Result<Self> {
        if !is_core(&shape, ctx.k()) {
            return Err(Error::NotACore { shape: shape.to_string(), k: ctx.k() });
        }
        Ok(CorePartition { shape, ctx })
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn into_shape(self) -> Partition {
        self.shape
    }

    pub fn ctx(&self) -> LevelContext {
        self.ctx
    }
}

pub fn is_core(shape: &Partition, k: usize) -> bool {
    shape.cells().all(|c| shape.hook_unchecked(c) != k + 1)
}

pub fn bdd(core: &CorePartition) -> BoundedPartition {
    BoundedPartition { shape: bdd_shape(core.shape(), core.ctx().k()), ctx: core.ctx() }
}

pub fn core_of(lambda: &BoundedPartition) -> CorePartition {
    CorePartition { shape: core_shape(lambda.shape(), lambda.ctx().k()), ctx: lambda.ctx() }
}

pub fn k_conjugate(lambda: &BoundedPartition) -> BoundedPartition {
    BoundedPartition { shape: k_conjugate_shape(lambda.shape(), lambda.ctx().k()), ctx: lambda.ctx() }
}

pub fn is_weak_strip(nu: &BoundedPartition, eta: &BoundedPartition) -> bool {
    debug_assert_eq!(nu.ctx(), eta.ctx());
    weak_strip_with(nu.shape(), eta.shape(), |p| k_conjugate_shape(p, nu.ctx().k()))
}

pub fn weak_strips_over(lambda: &BoundedPartition, s: usize) -> Vec<BoundedPartition> {
    let ctx = lambda.ctx();
    weak_strips_with(lambda.shape(), s, ctx.k(), |p| k_conjugate_shape(p, ctx.k()))
        .into_iter()
        .map(|shape| BoundedPartition { shape, ctx })
        .collect()
}

/// Row `i` of the result counts the cells of row `i` with hook at most `k`.
///
/// The input is assumed to be a `(k+1)`-core.
pub fn bdd_shape(core: &Partition, k: usize) -> Partition {
    let conj = core.conjugate();
    let parts = (1..=core.len())
        .map(|i| {
            let row = core.part(i);
            (1..=row).filter(|&j| (row - j) + (conj.part(j) - i) < k).count()
        })
        .collect();
    Partition::from_parts_unchecked(parts)
}

/// The `(k+1)`-core whose bounded image is `lambda`.
///
/// Rows are placed from the bottom up; each row is the shortest one whose
/// cells with hook at most `k` number exactly `lambda_i`.
pub fn core_shape(lambda: &Partition, k: usize) -> Partition {
    debug_assert!(lambda.is_bounded(k));
    let l = lambda.len();
    // rows[i] = length of core row i+1, filled from the bottom
    let mut rows = vec![0usize; l];
    for i in (0..l).rev() {
        let target = lambda.parts()[i];
        let below = &rows[i + 1..];
        let leg = |j: usize| below.iter().take_while(|&&r| r >= j).count();
        let mut c = target;
        loop {
            let bounded = (1..=c).filter(|&j| (c - j) + leg(j) < k).count();
            if bounded == target {
                break;
            }
            c += 1;
        }
        rows[i] = c;
    }
    let out = Partition::from_parts_unchecked(rows);
    debug_assert!(is_core(&out, k), "{:?} is not a core for k={}", out, k);
    debug_assert_eq!(&bdd_shape(&out, k), lambda);
    out
}

pub fn k_conjugate_shape(lambda: &Partition, k: usize) -> Partition {
    bdd_shape(&core_shape(lambda, k).conjugate(), k)
}

fn weak_strip_with(nu: &Partition, eta: &Partition, kconj: impl Fn(&Partition) -> Partition) -> bool {
    if !nu.contains_partition(eta) || !is_horizontal_strip(nu, eta) {
        return false;
    }
    let (cn, ce) = (kconj(nu), kconj(eta));
    cn.contains_partition(&ce) && is_vertical_strip(&cn, &ce)
}

/// Horizontal-strip extensions of `lambda` by `s` boxes with first part at
/// most `k`, in lex descending order.
pub fn horizontal_extensions(lambda: &Partition, s: usize, k: usize) -> Vec<Partition> {
    fn rec(lambda: &Partition, k: usize, i: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        let n = lambda.len();
        if i > n + 1 {
            if left == 0 {
                out.push(Partition::from_parts_unchecked(cur.clone()));
            }
            return;
        }
        let base = lambda.part(i);
        let cap = if i == 1 { k } else { lambda.part(i - 1) };
        if cap < base {
            return;
        }
        let max_add = (cap - base).min(left);
        for add in (0..=max_add).rev() {
            let len = base + add;
            if len > 0 {
                cur.push(len);
            }
            rec(lambda, k, i + 1, left - add, cur, out);
            if len > 0 {
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(lambda, k, 1, s, &mut Vec::new(), &mut out);
    out
}

fn weak_strips_with(lambda: &Partition, s: usize, k: usize, kconj: impl Fn(&Partition) -> Partition) -> Vec<Partition> {
    let base = kconj(lambda);
    horizontal_extensions(lambda, s, k)
        .into_iter()
        .filter(|mu| {
            let c = kconj(mu);
            c.contains_partition(&base) && is_vertical_strip(&c, &base)
        })
        .collect()
}

/// Memoized core/k-conjugate lookups for one level.
///
/// Readers run concurrently; a miss computes outside the lock and inserts,
/// so two threads may compute the same entry, which is harmless.
#[derive(Debug)]
pub struct CoreCache {
    ctx: LevelContext,
    cores: RwLock<HashMap<Partition, Partition>>,
    conjugates: RwLock<HashMap<Partition, Partition>>,
}

impl CoreCache {
    pub fn new(ctx: LevelContext) -> Self {
        CoreCache { ctx, cores: RwLock::default(), conjugates: RwLock::default() }
    }

    pub fn ctx(&self) -> LevelContext {
        self.ctx
    }

    pub fn core_of(&self, lambda: &Partition) -> Partition {
        if let Some(c) = self.cores.read().get(lambda) {
            return c.clone();
        }
        let c = core_shape(lambda, self.ctx.k());
        self.cores.write().entry(lambda.clone()).or_insert(c).clone()
    }

    pub fn k_conjugate(&self, lambda: &Partition) -> Partition {
        if let Some(c) = self.conjugates.read().get(lambda) {
            return c.clone();
        }
        let c = bdd_shape(&self.core_of(lambda).conjugate(), self.ctx.k());
        self.conjugates.write().entry(lambda.clone()).or_insert(c).clone()
    }

    pub fn is_weak_strip(&self, nu: &Partition, eta: &Partition) -> bool {
        weak_strip_with(nu, eta, |p| self.k_conjugate(p))
    }

    pub fn weak_strips_over(&self, lambda: &Partition, s: usize) -> Vec<Partition> {
        weak_strips_with(lambda, s, self.ctx.k(), |p| self.k_conjugate(p))
    }

    /// `core(mu) ⊆ core(lambda)`.
    pub fn core_contained(&self, mu: &Partition, lambda: &Partition) -> bool {
        self.core_of(lambda).contains_partition(&self.core_of(mu))
    }
}

/// Cells of a core with hook length at most `k`, row by row. Exposed for
/// diagnostics.
pub fn bounded_cells(core: &Partition, k: usize) -> Vec<Cell> {
    core.cells().filter(|&c| core.hook_unchecked(c) <= k).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::part;
    use crate::partition::{k_rectangle, partitions_bounded, partitions_of, sub_partitions};

    fn ctx(k: usize) -> LevelContext {
        LevelContext::new(k).unwrap()
    }

    fn bp(p: Partition, k: usize) -> BoundedPartition {
        BoundedPartition::new(p, ctx(k)).unwrap()
    }

    /// Independent oracle: search all `(k+1)`-cores by increasing size until
    /// one maps to `lambda` under `bdd`.
    fn core_by_search(lambda: &Partition, k: usize) -> Partition {
        for n in lambda.size().. {
            for c in partitions_of(n) {
                if is_core(&c, k) && &bdd_shape(&c, k) == lambda {
                    return c;
                }
            }
            assert!(n < 60, "search ran away for {:?}", lambda);
        }
        unreachable!()
    }

    #[test]
    fn bdd_examples() {
        let c = CorePartition::new(part![], ctx(3)).unwrap();
        assert_eq!(bdd(&c).shape(), &part![]);
        for k in 1..=5 {
            for t in 1..=k as i64 {
                for mu in sub_partitions(&k_rectangle(t, ctx(k))) {
                    let c = CorePartition::new(mu.clone(), ctx(k)).unwrap();
                    assert_eq!(bdd(&c).shape(), &mu);
                }
            }
        }
        let searched = core_by_search(&part![2, 2, 2], 2);
        let c = CorePartition::new(searched, ctx(2)).unwrap();
        assert_eq!(bdd(&c).shape(), &part![2, 2, 2]);
        assert!(CorePartition::new(part![3], ctx(2)).is_err());
    }

    #[test]
    fn core_examples() {
        assert_eq!(core_of(&bp(part![], 4)).shape(), &part![]);
        assert_eq!(core_of(&bp(part![3, 3], 4)).shape(), &part![3, 3]);
        // the two-row shape used in the rectangle argument: nu_1 > k+1-bl
        // k = 4, bl = 1, nu = (4, 2): u = 4 - 4 = 0 ... take bl = 2, nu = (4,2,1)
        // u = 4 - 3 = 1, core = (nu_1 + nu_{bl+1-u}, nu_2, nu_3) = (4+2, 2, 1)
        assert_eq!(core_of(&bp(part![4, 2, 1], 4)).shape(), &part![6, 2, 1]);
        assert_eq!(core_of(&bp(part![2, 2, 2], 2)).shape(), &core_by_search(&part![2, 2, 2], 2));
    }

    #[test]
    fn core_matches_search_oracle() {
        for k in 1..=4 {
            for n in 0..=7 {
                for lam in partitions_bounded(n, k) {
                    assert_eq!(core_shape(&lam, k), core_by_search(&lam, k), "k={k} {:?}", lam);
                }
            }
        }
    }

    #[test]
    fn k_conjugate_examples() {
        assert_eq!(k_conjugate(&bp(part![], 3)).shape(), &part![]);
        for k in 1..=5 {
            for r in 1..=k {
                let row = Partition::new(vec![r]).unwrap();
                assert_eq!(k_conjugate(&bp(row, k)).shape(), &Partition::new(vec![1; r]).unwrap());
            }
            for t in 1..=k as i64 {
                for mu in sub_partitions(&k_rectangle(t, ctx(k))) {
                    assert_eq!(k_conjugate(&bp(mu.clone(), k)).shape(), &mu.conjugate());
                }
            }
        }
    }

    #[test]
    fn weak_strip_examples() {
        let k = 4;
        let l = bp(part![3, 1], k);
        assert!(is_weak_strip(&l, &l));
        for s in 0..=k {
            let row = bp(Partition::new(vec![s]).unwrap(), k);
            assert!(is_weak_strip(&row, &bp(part![], k)));
        }
        let got: Vec<_> = weak_strips_over(&bp(part![3], 4), 2).into_iter().map(|b| b.into_shape()).collect();
        assert_eq!(got, vec![part![4, 1], part![3, 2]]);
        let got: Vec<_> = weak_strips_over(&bp(part![2, 1], 3), 0).into_iter().map(|b| b.into_shape()).collect();
        assert_eq!(got, vec![part![2, 1]]);
    }

    #[test]
    fn two_row_telescoping_chain() {
        // weak b-strips over (a) are exactly (a,b), (a+1,b-1), ... capped at k
        for k in 1..=5 {
            for a in 1..=k {
                for b in 0..=a {
                    let got: Vec<_> = weak_strips_over(&bp(Partition::new(vec![a]).unwrap(), k), b)
                        .into_iter()
                        .map(|x| x.into_shape())
                        .collect();
                    let mut want: Vec<Partition> = (0..=b)
                        .map(|x| Partition::new(vec![a + x, b - x]).unwrap())
                        .filter(|p| p.first() <= k)
                        .collect();
                    want.sort_by(|x, y| y.cmp(x));
                    assert_eq!(got, want, "k={k} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn enumeration_agrees_with_brute_force_filter() {
        for k in 1..=4 {
            let cache = CoreCache::new(ctx(k));
            for n in 0..=5 {
                for lam in partitions_bounded(n, k) {
                    for s in 0..=k {
                        let fast = cache.weak_strips_over(&lam, s);
                        let mut brute: Vec<Partition> = partitions_bounded(n + s, k)
                            .into_iter()
                            .filter(|mu| cache.is_weak_strip(mu, &lam))
                            .collect();
                        brute.sort_by(|x, y| y.cmp(x));
                        assert_eq!(fast, brute);
                    }
                }
            }
        }
    }
}
