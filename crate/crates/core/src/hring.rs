//! Exact arithmetic in `Z[h_1, ..., h_k]` and the K-k-Schur coefficient
//! vectors that live over it.
//!
//! Monomials are ordered by weighted degree `Σ i·e_i` first. Within one
//! degree a monomial `h_λ = h_{λ_1} h_{λ_2} ...` is larger when `λ` is
//! lexicographically *smaller*. This is a monomial order, and it makes
//! `h_λ` the leading term of the K-k-Schur function indexed by `λ`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::partition::{LevelContext, Partition};

/// A product `h_{i_1} h_{i_2} ...`, stored as the multiset of generator
/// indices sorted decreasingly (itself a partition).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HMonomial(Partition);

impl HMonomial {
    pub fn one() -> Self {
        HMonomial(Partition::empty())
    }

    pub fn generator(r: usize) -> Self {
        HMonomial(Partition::from_unsorted(vec![r]))
    }

    pub fn from_indices(indices: Partition) -> Self {
        HMonomial(indices)
    }

    pub fn indices(&self) -> &Partition {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Weighted degree `Σ index · exponent`.
    pub fn degree(&self) -> usize {
        self.0.size()
    }

    pub fn max_index(&self) -> usize {
        self.0.first()
    }

    /// `(index, exponent)` pairs, increasing index.
    pub fn exponents(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &i in self.0.parts().iter().rev() {
            match out.last_mut() {
                Some((j, e)) if *j == i => *e += 1,
                _ => out.push((i, 1)),
            }
        }
        out
    }

    pub fn mul(&self, other: &HMonomial) -> HMonomial {
        HMonomial(self.0.union(&other.0))
    }

    /// `self / other` if `other` divides `self`.
    pub fn checked_div(&self, other: &HMonomial) -> Option<HMonomial> {
        let mut rest = Vec::with_capacity(self.0.len());
        let mut it = other.0.parts().iter().peekable();
        for &p in self.0.parts() {
            match it.peek() {
                Some(&&q) if q == p => {
                    it.next();
                }
                Some(&&q) if q > p => return None,
                _ => rest.push(p),
            }
        }
        if it.next().is_some() {
            return None;
        }
        Some(HMonomial(Partition::from_parts_unchecked(rest)))
    }
}

impl Ord for HMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for HMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for HMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, e) in self.exponents() {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if e == 1 {
                write!(f, "h{}", i)?;
            } else {
                write!(f, "h{}^{}", i, e)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for HMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for HMonomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(HMonomial::one());
        }
        let mut idx = Vec::new();
        for tok in s.split_whitespace() {
            let body = tok.strip_prefix('h').ok_or_else(|| Error::Parse(format!("bad generator {:?}", tok)))?;
            let (i, e) = match body.split_once('^') {
                Some((i, e)) => (i, e),
                None => (body, "1"),
            };
            let i: usize = i.parse().map_err(|_| Error::Parse(format!("bad index in {:?}", tok)))?;
            let e: usize = e.parse().map_err(|_| Error::Parse(format!("bad exponent in {:?}", tok)))?;
            if i == 0 || e == 0 {
                return Err(Error::Parse(format!("zero index or exponent in {:?}", tok)));
            }
            idx.extend(std::iter::repeat_n(i, e));
        }
        if idx.is_empty() {
            return Err(Error::Parse("empty monomial".into()));
        }
        Ok(HMonomial(Partition::from_unsorted(idx)))
    }
}

/// An element of `Z[h_1, ..., h_k]` in canonical sparse form.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct HPolynomial {
    terms: BTreeMap<HMonomial, BigInt>,
}

impl HPolynomial {
    pub fn zero() -> Self {
        HPolynomial { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::monomial(HMonomial::one(), c)
    }

    pub fn monomial(m: HMonomial, c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        HPolynomial { terms }
    }

    /// `h_r` for `0 <= r <= k`, with `h_0 = 1`.
    pub fn generator(r: i64, ctx: LevelContext) -> Result<Self> {
        if r < 0 || r as usize > ctx.k() {
            return Err(Error::GeneratorOutOfRange { r, k: ctx.k() });
        }
        if r == 0 {
            return Ok(Self::one());
        }
        Ok(Self::monomial(HMonomial::generator(r as usize), BigInt::one()))
    }

    /// `h_λ = Π h_{λ_i}`.
    pub fn h_product(lambda: &Partition) -> Self {
        Self::monomial(HMonomial(lambda.clone()), BigInt::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in decreasing monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&HMonomial, &BigInt)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &HMonomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn leading_term(&self) -> Option<(&HMonomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// Largest weighted degree present (`None` for zero).
    pub fn degree(&self) -> Option<usize> {
        self.leading_term().map(|(m, _)| m.degree())
    }

    pub fn max_generator(&self) -> usize {
        self.terms.keys().map(HMonomial::max_index).max().unwrap_or(0)
    }

    pub fn homogeneous_part(&self, degree: usize) -> HPolynomial {
        HPolynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    fn add_term(&mut self, m: HMonomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += c · m · other`.
    pub fn add_scaled(&mut self, other: &HPolynomial, c: &BigInt, m: &HMonomial) {
        if c.is_zero() {
            return;
        }
        for (om, oc) in &other.terms {
            let mm = if m.is_one() { om.clone() } else { om.mul(m) };
            self.add_term(mm, oc * c);
        }
    }

    pub fn scale(&self, c: &BigInt) -> HPolynomial {
        if c.is_zero() {
            return HPolynomial::zero();
        }
        HPolynomial { terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> HPolynomial {
        let mut acc = HPolynomial::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact quotient `self / g` by multivariate division under the global
    /// monomial order.
    pub fn exact_divide(&self, g: &HPolynomial) -> Result<HPolynomial> {
        let (lm, lc) = g.leading_term().ok_or(Error::DivisionByZero)?;
        if !lc.abs().is_one() {
            return Err(Error::UnitLeadingCoefficientRequired);
        }
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut work = self.clone();
        let mut quotient = HPolynomial::zero();
        let mut remainder = HPolynomial::zero();
        while let Some((m, c)) = work.terms.pop_last() {
            match m.checked_div(&lm) {
                Some(qm) => {
                    let qc = &c * &lc; // lc = ±1, so c / lc = c · lc
                                       // `work` already lost the leading term; subtract the rest of qc·qm·g.
                    for (gm, gc) in g.terms.iter().rev().skip(1) {
                        work.add_term(gm.mul(&qm), -(gc * &qc));
                    }
                    quotient.add_term(qm, qc);
                }
                None => remainder.add_term(m, c),
            }
        }
        if remainder.is_zero() {
            Ok(quotient)
        } else {
            Err(Error::NotDivisible(remainder))
        }
    }

    /// Substitutes `h_i ↦ values[i-1]`.
    ///
    /// `values` must cover every generator that occurs.
    pub fn evaluate(&self, values: &[BigInt]) -> BigInt {
        let mut total = BigInt::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for &i in m.indices().parts() {
                v *= &values[i - 1];
            }
            total += v;
        }
        total
    }

    /// One term per line, leading term first.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for line in self.text_lines() {
            s.push_str(&line);
            s.push('\n');
        }
        s
    }

    pub fn text_lines(&self) -> Vec<String> {
        if self.is_zero() {
            return vec!["0".to_string()];
        }
        self.terms()
            .map(|(m, c)| {
                if m.is_one() {
                    c.to_string()
                } else if c.is_one() {
                    m.to_string()
                } else if (-c).is_one() {
                    format!("-{}", m)
                } else {
                    format!("{} * {}", c, m)
                }
            })
            .collect()
    }

    pub fn parse_lines<'a>(lines: impl IntoIterator<Item = &'a str>) -> Result<Self> {
        let mut p = HPolynomial::zero();
        for line in lines {
            let line = line.trim();
            if line.is_empty() || line == "0" {
                continue;
            }
            let (c, m) = parse_term(line)?;
            p.add_term(m, c);
        }
        Ok(p)
    }
}

fn parse_term(line: &str) -> Result<(BigInt, HMonomial)> {
    let bad = || Error::Parse(format!("bad term {:?}", line));
    if let Some((c, m)) = line.split_once('*') {
        let c: BigInt = c.trim().parse().map_err(|_| bad())?;
        return Ok((c, m.parse()?));
    }
    if let Ok(c) = line.parse::<BigInt>() {
        return Ok((c, HMonomial::one()));
    }
    if let Some(m) = line.strip_prefix('-') {
        return Ok((-BigInt::one(), m.parse()?));
    }
    Ok((BigInt::one(), line.parse()?))
}

impl fmt::Display for HPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.text_lines().join(" + "))
    }
}

impl fmt::Debug for HPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HPolynomial[{}]", self)
    }
}

impl FromStr for HPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        HPolynomial::parse_lines(s.lines())
    }
}

impl<'a> Add<&'a HPolynomial> for &'a HPolynomial {
    type Output = HPolynomial;

    fn add(self, rhs: &HPolynomial) -> HPolynomial {
        let mut out = self.clone();
        out.add_scaled(rhs, &BigInt::one(), &HMonomial::one());
        out
    }
}

impl<'a> Sub<&'a HPolynomial> for &'a HPolynomial {
    type Output = HPolynomial;

    fn sub(self, rhs: &HPolynomial) -> HPolynomial {
        let mut out = self.clone();
        out.add_scaled(rhs, &-BigInt::one(), &HMonomial::one());
        out
    }
}

impl Neg for &HPolynomial {
    type Output = HPolynomial;

    fn neg(self) -> HPolynomial {
        self.scale(&-BigInt::one())
    }
}

impl<'a> Mul<&'a HPolynomial> for &'a HPolynomial {
    type Output = HPolynomial;

    fn mul(self, rhs: &HPolynomial) -> HPolynomial {
        let mut acc: HashMap<HMonomial, BigInt> = HashMap::with_capacity(self.len() * rhs.len());
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                *acc.entry(a.mul(b)).or_default() += x * y;
            }
        }
        HPolynomial { terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }
}

/// A finite integer combination of K-k-Schur basis elements.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct KksVector {
    terms: BTreeMap<Partition, BigInt>,
}

impl KksVector {
    pub fn zero() -> Self {
        KksVector::default()
    }

    pub fn basis(lambda: Partition) -> Self {
        let mut v = KksVector::zero();
        v.add_term(lambda, BigInt::one());
        v
    }

    /// `Σ_{λ ∈ shapes} kks{λ}`.
    pub fn sum_of<I: IntoIterator<Item = Partition>>(shapes: I) -> Self {
        let mut v = KksVector::zero();
        for s in shapes {
            v.add_term(s, BigInt::one());
        }
        v
    }

    pub fn add_term(&mut self, lambda: Partition, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(lambda) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &KksVector, c: &BigInt) {
        for (p, x) in &other.terms {
            self.add_term(p.clone(), x * c);
        }
    }

    pub fn coefficient(&self, lambda: &Partition) -> BigInt {
        self.terms.get(lambda).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &BigInt)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Partition> {
        self.terms.keys()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Entries of `self - other` that are nonzero.
    pub fn diff(&self, other: &KksVector) -> KksVector {
        let mut d = self.clone();
        d.add_scaled(other, &-BigInt::one());
        d
    }
}

impl fmt::Display for KksVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (p, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}*K[{}]", c, p)?;
        }
        Ok(())
    }
}

impl fmt::Debug for KksVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KksVector[{}]", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(k: usize) -> LevelContext {
        LevelContext::new(k).unwrap()
    }

    fn h(r: i64) -> HPolynomial {
        HPolynomial::generator(r, ctx(5)).unwrap()
    }

    #[test]
    fn generators() {
        assert_eq!(h(0), HPolynomial::one());
        assert_eq!(h(2).to_text(), "h2\n");
        assert!(matches!(HPolynomial::generator(5, ctx(4)), Err(Error::GeneratorOutOfRange { r: 5, k: 4 })));
    }

    #[test]
    fn ring_ops() {
        let sq = &h(1) * &h(1);
        assert_eq!(sq.degree(), Some(2));
        assert_eq!(sq.to_text(), "h1^2\n");
        assert_eq!(&h(3) + &HPolynomial::zero(), h(3));
        let lhs = &(&h(2) + &h(1)) * &(&h(2) - &h(1));
        let rhs = &(&h(2) * &h(2)) - &sq;
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn order_puts_lex_smallest_first_within_degree() {
        // h1^2 leads h2 in degree 2
        let p = &(&h(1) * &h(1)) - &h(2);
        let (m, c) = p.leading_term().unwrap();
        assert_eq!(m.to_string(), "h1^2");
        assert!(c.is_one());
        // higher degree always leads
        let q = &h(3) + &(&h(1) * &h(1));
        assert_eq!(q.leading_term().unwrap().0.to_string(), "h3");
    }

    #[test]
    fn division() {
        let g = &(&h(1) * &h(1)) - &h(2);
        let q = &(&h(3) + &h(1)) + &HPolynomial::constant(BigInt::from(7));
        let f = &g * &q;
        assert_eq!(f.exact_divide(&g).unwrap(), q);
        match h(1).exact_divide(&h(2)) {
            Err(Error::NotDivisible(r)) => assert_eq!(r, h(1)),
            other => panic!("unexpected {:?}", other),
        }
        let two = HPolynomial::constant(BigInt::from(2));
        assert!(matches!(h(1).exact_divide(&two), Err(Error::UnitLeadingCoefficientRequired)));
        assert!(matches!(h(1).exact_divide(&HPolynomial::zero()), Err(Error::DivisionByZero)));
    }

    #[test]
    fn evaluation() {
        let vals: Vec<BigInt> = (1..=5).map(BigInt::from).collect();
        assert_eq!(HPolynomial::one().evaluate(&vals), BigInt::one());
        let mut v3 = vals.clone();
        v3[0] = BigInt::from(3);
        assert_eq!((&h(1) * &h(1)).evaluate(&v3), BigInt::from(9));
    }

    #[test]
    fn text_round_trip() {
        let p = &(&(&h(1) * &h(3)).scale(&BigInt::from(-12)) + &h(2).scale(&BigInt::from(-1)))
            + &HPolynomial::constant(BigInt::from(5));
        let text = p.to_text();
        assert_eq!(text, "-12 * h1 h3\n-h2\n5\n");
        let back: HPolynomial = text.parse().unwrap();
        assert_eq!(back, p);
        assert_eq!(back.to_text(), text);
        assert_eq!(HPolynomial::zero().to_text(), "0\n");
        assert!("0".parse::<HPolynomial>().unwrap().is_zero());
    }

    #[test]
    fn monomial_division() {
        let a: HMonomial = "h1^2 h3".parse().unwrap();
        let b: HMonomial = "h1 h3".parse().unwrap();
        assert_eq!(a.checked_div(&b).unwrap().to_string(), "h1");
        assert!(b.checked_div(&a).is_none());
        let c: HMonomial = "h2".parse().unwrap();
        assert!(a.checked_div(&c).is_none());
    }
}
