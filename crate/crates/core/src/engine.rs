//! The Pieri rule and the expansion engine.
//!
//! Multiplying by `h_r` (`0 <= r <= k`) acts on the K-k-Schur basis by
//!
//! ```text
//! h_r · kks{λ} = Σ_{s=0}^{r} (-1)^{r-s} Σ_μ binom(r_{core(μ),core(λ)}, r-s) kks{μ}
//! ```
//!
//! where `μ` runs over weak `s`-strips over `λ`. [`ExpansionTable`] inverts
//! this to write every `kks{λ}` as an exact polynomial in the `h_i`.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use parking_lot::RwLock;

use crate::binomial::binomial;
use crate::cores::CoreCache;
use crate::error::{Error, Result};
use crate::hring::{HMonomial, HPolynomial, KksVector};
use crate::partition::{corner_residue_count, partitions_bounded, LevelContext, Partition};

/// One summand `coefficient · kks{target}` of a Pieri product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieriTerm {
    pub target: Partition,
    pub coefficient: BigInt,
}

#[derive(Debug)]
struct TableState {
    /// every bounded partition of size `<= complete` has an entry
    complete: usize,
    entries: HashMap<Partition, Arc<HPolynomial>>,
}

/// Grow-only memo of `kks{λ}` written in the `h`-basis.
///
/// Sizes are filled in increasing order; within one size, partitions are
/// processed lex descending. Readers share the lock; filling a new size takes
/// the write lock, so results never depend on thread scheduling.
#[derive(Debug)]
pub struct ExpansionTable {
    ctx: LevelContext,
    cores: CoreCache,
    state: RwLock<TableState>,
    fast_path: AtomicUsize,
    solved_sizes: AtomicUsize,
}

impl ExpansionTable {
    pub fn new(ctx: LevelContext) -> Self {
        let mut entries = HashMap::new();
        entries.insert(Partition::empty(), Arc::new(HPolynomial::one()));
        ExpansionTable {
            ctx,
            cores: CoreCache::new(ctx),
            state: RwLock::new(TableState { complete: 0, entries }),
            fast_path: AtomicUsize::new(0),
            solved_sizes: AtomicUsize::new(0),
        }
    }

    pub fn ctx(&self) -> LevelContext {
        self.ctx
    }

    pub fn k(&self) -> usize {
        self.ctx.k()
    }

    pub fn cores(&self) -> &CoreCache {
        &self.cores
    }

    /// Number of entries computed by the single-Pieri-step fast path, and
    /// the number of sizes that needed the full linear solve.
    pub fn stats(&self) -> (usize, usize) {
        (self.fast_path.load(Ordering::Relaxed), self.solved_sizes.load(Ordering::Relaxed))
    }

    fn check_bounded(&self, lambda: &Partition) -> Result<()> {
        if !lambda.is_bounded(self.k()) {
            return Err(Error::NotBounded { shape: lambda.to_string(), k: self.k() });
        }
        Ok(())
    }

    fn check_r(&self, r: usize) -> Result<()> {
        if r > self.k() {
            return Err(Error::GeneratorOutOfRange { r: r as i64, k: self.k() });
        }
        Ok(())
    }

    /// `h_r · kks{λ}` in the K-k-Schur basis.
    pub fn pieri_product(&self, lambda: &Partition, r: usize) -> Result<KksVector> {
        self.check_bounded(lambda)?;
        self.check_r(r)?;
        Ok(self.pieri_terms(lambda, r).into_iter().fold(KksVector::zero(), |mut v, t| {
            v.add_term(t.target, t.coefficient);
            v
        }))
    }

    /// The nonzero summands of `h_r · kks{λ}`, grouped by strip size.
    pub fn pieri_terms(&self, lambda: &Partition, r: usize) -> Vec<PieriTerm> {
        let core_lambda = self.cores.core_of(lambda);
        let mut out = Vec::new();
        for s in 0..=r {
            let sign: i64 = if (r - s).is_multiple_of(2) { 1 } else { -1 };
            for mu in self.cores.weak_strips_over(lambda, s) {
                let rc = corner_residue_count(&self.cores.core_of(&mu), &core_lambda, self.ctx);
                let c = binomial(rc as i64, (r - s) as i64) * sign;
                if !c.is_zero() {
                    out.push(PieriTerm { target: mu, coefficient: c });
                }
            }
        }
        out
    }

    /// `h_r · v`, extended linearly.
    pub fn pieri_apply(&self, v: &KksVector, r: usize) -> Result<KksVector> {
        self.check_r(r)?;
        let mut out = KksVector::zero();
        for (lambda, c) in v.terms() {
            self.check_bounded(lambda)?;
            for t in self.pieri_terms(lambda, r) {
                out.add_term(t.target, t.coefficient * c);
            }
        }
        Ok(out)
    }

    /// `h_{λ_1} h_{λ_2} ...` in the K-k-Schur basis, by repeated Pieri.
    pub fn h_product_in_kks(&self, lambda: &Partition) -> Result<KksVector> {
        let mut v = KksVector::basis(Partition::empty());
        for &r in lambda.parts() {
            v = self.pieri_apply(&v, r)?;
        }
        Ok(v)
    }

    /// `kks{λ}` as a polynomial in `h_1, ..., h_k`.
    pub fn kks_in_h(&self, lambda: &Partition) -> Result<Arc<HPolynomial>> {
        self.check_bounded(lambda)?;
        self.ensure_size(lambda.size())?;
        let st = self.state.read();
        Ok(st.entries[lambda].clone())
    }

    /// `Σ c_λ kks{λ}` as a polynomial.
    pub fn kks_vector_in_h(&self, v: &KksVector) -> Result<HPolynomial> {
        let mut out = HPolynomial::zero();
        for (lambda, c) in v.terms() {
            out.add_scaled(&*self.kks_in_h(lambda)?, c, &HMonomial::one());
        }
        Ok(out)
    }

    /// The unique `v` with `kks_vector_in_h(v) == f`.
    ///
    /// Peels off leading terms: the leading monomial of `kks{λ}` is `h_λ`
    /// with coefficient one.
    pub fn to_kks_basis(&self, f: &HPolynomial) -> Result<KksVector> {
        let mut work = f.clone();
        let mut out = KksVector::zero();
        if let Some(d) = f.degree() {
            self.ensure_size(d)?;
        }
        while let Some((m, c)) = work.leading_term() {
            let lambda = m.indices().clone();
            let c = c.clone();
            if lambda.first() > self.k() {
                return Err(Error::GeneratorOutOfRange { r: lambda.first() as i64, k: self.k() });
            }
            let basis = self.kks_in_h(&lambda)?;
            work.add_scaled(&basis, &-c.clone(), &HMonomial::one());
            out.add_term(lambda, c);
        }
        Ok(out)
    }

    /// Product of two K-k-Schur vectors, computed in the `h`-ring.
    pub fn kks_product(&self, u: &KksVector, v: &KksVector) -> Result<KksVector> {
        let p = &self.kks_vector_in_h(u)? * &self.kks_vector_in_h(v)?;
        self.to_kks_basis(&p)
    }

    /// Fills every bounded partition of size `<= n`.
    pub fn ensure_size(&self, n: usize) -> Result<()> {
        if self.state.read().complete >= n {
            return Ok(());
        }
        let mut st = self.state.write();
        while st.complete < n {
            let size = st.complete + 1;
            self.fill_size(size, &mut st)?;
            st.complete = size;
        }
        Ok(())
    }

    /// Adds an entry computed elsewhere (a cache file). The entry must be
    /// bounded and have leading term `h_λ` with coefficient one; otherwise
    /// it is rejected and `false` is returned.
    pub fn insert_preloaded(&self, lambda: Partition, poly: HPolynomial) -> bool {
        if !lambda.is_bounded(self.k()) || check_leading(&lambda, &poly).is_err() {
            return false;
        }
        if poly.max_generator() > self.k() {
            return false;
        }
        let mut st = self.state.write();
        st.entries.entry(lambda).or_insert_with(|| Arc::new(poly));
        true
    }

    /// All entries, sorted by size then lex.
    pub fn entries(&self) -> Vec<(Partition, Arc<HPolynomial>)> {
        let st = self.state.read();
        let mut v: Vec<_> = st.entries.iter().map(|(p, e)| (p.clone(), e.clone())).collect();
        v.sort_by(|a, b| crate::partition::graded_cmp(&a.0, &b.0));
        v
    }

    pub fn get(&self, lambda: &Partition) -> Option<Arc<HPolynomial>> {
        self.state.read().entries.get(lambda).cloned()
    }

    fn fill_size(&self, n: usize, st: &mut TableState) -> Result<()> {
        let shapes = partitions_bounded(n, self.k());
        for lambda in &shapes {
            if st.entries.contains_key(lambda) {
                continue;
            }
            match self.fast_entry(lambda, st)? {
                Some(poly) => {
                    check_leading(lambda, &poly)?;
                    st.entries.insert(lambda.clone(), Arc::new(poly));
                    self.fast_path.fetch_add(1, Ordering::Relaxed);
                }
                None => {
                    log::debug!("size {} needs the full solve (stuck at {})", n, lambda);
                    for (p, poly) in self.solve_size_with(n, &st.entries)? {
                        check_leading(&p, &poly)?;
                        st.entries.insert(p, Arc::new(poly));
                    }
                    self.solved_sizes.fetch_add(1, Ordering::Relaxed);
                    return Ok(());
                }
            }
        }
        Ok(())
    }

    /// One Pieri step from `λ` minus its last row. Returns `None` when the
    /// step leaves an unknown same-size term besides `λ` itself.
    fn fast_entry(&self, lambda: &Partition, st: &TableState) -> Result<Option<HPolynomial>> {
        let n = lambda.size();
        let base = lambda.without_last();
        let r = lambda.last();
        let product = self.pieri_product(&base, r)?;
        if product.coefficient(lambda) != BigInt::one() {
            return Ok(None);
        }
        let base_poly = &st.entries[&base];
        let mut out = HPolynomial::zero();
        out.add_scaled(base_poly, &BigInt::one(), &HMonomial::generator(r));
        for (mu, c) in product.terms() {
            if mu == lambda {
                continue;
            }
            if mu.size() == n && mu < lambda {
                return Ok(None);
            }
            match st.entries.get(mu) {
                Some(p) => out.add_scaled(p, &-c.clone(), &HMonomial::one()),
                None => return Ok(None),
            }
        }
        Ok(Some(out))
    }

    /// Solves for every `kks{λ}` with `|λ| = n` at once, using the table's
    /// entries of smaller size. Does not modify the table.
    pub fn solve_size(&self, n: usize) -> Result<Vec<(Partition, HPolynomial)>> {
        if n > 0 {
            self.ensure_size(n - 1)?;
        }
        let st = self.state.read();
        self.solve_size_with(n, &st.entries)
    }

    /// Writes `h_λ = Σ_μ M[λ][μ] kks{μ}` for all `|λ| = n`, moves the known
    /// smaller terms to the right-hand side and inverts `M` over the
    /// rationals. Non-integral results are an error.
    fn solve_size_with(
        &self,
        n: usize,
        entries: &HashMap<Partition, Arc<HPolynomial>>,
    ) -> Result<Vec<(Partition, HPolynomial)>> {
        let shapes = partitions_bounded(n, self.k());
        let index: HashMap<&Partition, usize> = shapes.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let dim = shapes.len();
        let mut matrix = vec![vec![BigRational::zero(); dim]; dim];
        let mut rhs = Vec::with_capacity(dim);
        for (row, lambda) in shapes.iter().enumerate() {
            let expansion = self.h_product_in_kks(lambda)?;
            let mut b = HPolynomial::h_product(lambda);
            for (mu, c) in expansion.terms() {
                if mu.size() == n {
                    matrix[row][index[mu]] = BigRational::from_integer(c.clone());
                } else {
                    let known = entries.get(mu).ok_or_else(|| {
                        Error::SolveFailure(format!("missing lower entry {} while solving size {}", mu, n))
                    })?;
                    b.add_scaled(known, &-c.clone(), &HMonomial::one());
                }
            }
            rhs.push(b);
        }
        let inverse = invert(matrix).ok_or_else(|| Error::SolveFailure(format!("singular system at size {}", n)))?;

        let mut out = Vec::with_capacity(dim);
        for (i, lambda) in shapes.iter().enumerate() {
            let mut acc: HashMap<HMonomial, BigRational> = HashMap::new();
            for (j, b) in rhs.iter().enumerate() {
                let w = &inverse[i][j];
                if w.is_zero() {
                    continue;
                }
                for (m, c) in b.terms() {
                    *acc.entry(m.clone()).or_insert_with(BigRational::zero) += w * BigRational::from_integer(c.clone());
                }
            }
            let mut poly = HPolynomial::zero();
            for (m, c) in acc {
                if c.is_zero() {
                    continue;
                }
                if !c.is_integer() {
                    return Err(Error::SolveFailure(format!("non-integral coefficient {} in kks{{{}}}", c, lambda)));
                }
                poly.add_scaled(&HPolynomial::monomial(m, c.to_integer()), &BigInt::one(), &HMonomial::one());
            }
            out.push((lambda.clone(), poly));
        }
        Ok(out)
    }
}

/// Leading term must be `h_λ` with coefficient one, and nothing else may
/// reach degree `|λ|` except terms of the top homogeneous part.
fn check_leading(lambda: &Partition, poly: &HPolynomial) -> Result<()> {
    let (m, c) = poly.leading_term().ok_or_else(|| Error::SolveFailure(format!("kks{{{}}} came out zero", lambda)))?;
    if m.indices() != lambda || !c.is_one() || m.degree() != lambda.size() {
        return Err(Error::SolveFailure(format!(
            "kks{{{}}} has leading term {} * {}, expected h_{{{}}}",
            lambda, c, m, lambda
        )));
    }
    Ok(())
}

/// Gauss-Jordan inverse over the rationals.
fn invert(mut a: Vec<Vec<BigRational>>) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        if !p.is_one() {
            for j in 0..n {
                a[col][j] = &a[col][j] / &p;
                inv[col][j] = &inv[col][j] / &p;
            }
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                let x = &f * &a[col][j];
                a[r][j] -= x;
                let y = &f * &inv[col][j];
                inv[r][j] -= y;
            }
        }
    }
    debug_assert!(a.iter().enumerate().all(|(i, row)| row.iter().enumerate().all(|(j, x)| {
        if i == j {
            x.is_one()
        } else {
            x.is_zero()
        }
    })));
    Some(inv)
}
