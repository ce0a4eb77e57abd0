use std::cmp::Ordering;
use std::collections::hash_map::Entry;
use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use super::indet::Indet;

pub type Q = BigRational;

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// A power product, variables sorted in descending canonical order.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(SmallVec<[(Indet, u32); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: Indet, e: u32) -> Self {
        if e == 0 {
            return Self::one();
        }
        let mut s = SmallVec::new();
        s.push((v, e));
        Monomial(s)
    }

    /// Builds from arbitrary `(var, exp)` pairs, merging duplicates.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Indet, u32)>) -> Self {
        let mut v: SmallVec<[(Indet, u32); 4]> = pairs.into_iter().filter(|p| p.1 > 0).collect();
        v.sort_unstable_by_key(|a| std::cmp::Reverse(a.0));
        let mut out: SmallVec<[(Indet, u32); 4]> = SmallVec::new();
        for (var, e) in v {
            match out.last_mut() {
                Some(last) if last.0 == var => last.1 += e,
                _ => out.push((var, e)),
            }
        }
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|p| p.1).sum()
    }

    pub fn pairs(&self) -> &[(Indet, u32)] {
        &self.0
    }

    pub fn exp_of(&self, v: &Indet) -> u32 {
        self.0.iter().find(|p| p.0 == *v).map_or(0, |p| p.1)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Self) -> Option<Self> {
        let mut out = SmallVec::with_capacity(self.0.len());
        let mut j = 0;
        let b = &other.0;
        for &(v, e) in self.0.iter() {
            if j < b.len() && b[j].0 > v {
                return None;
            }
            if j < b.len() && b[j].0 == v {
                match e.cmp(&b[j].1) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((v, e - b[j].1)),
                }
                j += 1;
            } else {
                out.push((v, e));
            }
        }
        if j < b.len() {
            return None;
        }
        Some(Monomial(out))
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let mut out = SmallVec::new();
        for &(v, e) in self.0.iter() {
            let f = other.exp_of(&v);
            if f > 0 {
                out.push((v, e.min(f)));
            }
        }
        Monomial(out)
    }

    /// Removes variable `v`, returning its exponent.
    pub fn without(&self, v: &Indet) -> (Self, u32) {
        let mut e = 0;
        let rest = self
            .0
            .iter()
            .filter(|p| {
                if p.0 == *v {
                    e = p.1;
                    false
                } else {
                    true
                }
            })
            .copied()
            .collect();
        (Monomial(rest), e)
    }
}

impl Ord for Monomial {
    /// Graded lexicographic order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for (a, b) in self.0.iter().zip(other.0.iter()) {
                match a.0.cmp(&b.0) {
                    Ordering::Equal => match a.1.cmp(&b.1) {
                        Ordering::Equal => continue,
                        o => return o,
                    },
                    o => return o,
                }
            }
            self.0.len().cmp(&other.0.len())
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial over Q. Terms are sorted by descending monomial and
/// carry non-zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    terms: Vec<(Monomial, Q)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly { terms: vec![(Monomial::one(), c)] }
    }

    pub fn int(n: i64) -> Self {
        Self::constant(q_int(n))
    }

    pub fn var(v: Indet) -> Self {
        Self::monomial(Monomial::var(v, 1), Q::one())
    }

    pub fn monomial(m: Monomial, c: Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly { terms: vec![(m, c)] }
    }

    /// Builds from unsorted terms, combining like monomials.
    pub fn from_terms(mut terms: Vec<(Monomial, Q)>) -> Self {
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Monomial, Q)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 += c,
                _ => {
                    if let Some(last) = out.last() {
                        if last.1.is_zero() {
                            out.pop();
                        }
                    }
                    out.push((m, c));
                }
            }
        }
        if out.last().is_some_and(|l| l.1.is_zero()) {
            out.pop();
        }
        Poly { terms: out }
    }

    pub fn terms(&self) -> &[(Monomial, Q)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn constant_value(&self) -> Option<Q> {
        match self.terms.as_slice() {
            [] => Some(Q::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(Monomial, Q)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> Q {
        self.terms.first().map_or_else(Q::zero, |t| t.1.clone())
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.0.degree()).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<Indet> {
        let mut out = BTreeSet::new();
        for (m, _) in &self.terms {
            for (v, _) in m.pairs() {
                out.insert(*v);
            }
        }
        out
    }

    pub fn contains_var(&self, v: &Indet) -> bool {
        self.terms.iter().any(|(m, _)| m.exp_of(v) > 0)
    }

    pub fn degree_in(&self, v: &Indet) -> u32 {
        self.terms.iter().map(|(m, _)| m.exp_of(v)).max().unwrap_or(0)
    }

    pub fn neg(&self) -> Self {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect() }
    }

    pub fn mul_monomial(&self, mono: &Monomial, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, d)| (m.mul(mono), d * c)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.merge(other, true)
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let conv = |c: &Q| if negate { -c } else { c.clone() };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0.clone(), conv(&b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|t| (t.0.clone(), conv(&t.1))));
        Poly { terms: out }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.terms.len() == 1 {
            return other.mul_monomial(&self.terms[0].0, &self.terms[0].1);
        }
        if other.terms.len() == 1 {
            return self.mul_monomial(&other.terms[0].0, &other.terms[0].1);
        }
        // Products collide heavily, so accumulate before sorting.
        let mut acc: HashMap<Monomial, Q> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = ca * cb;
                match acc.entry(ma.mul(mb)) {
                    Entry::Occupied(mut e) => *e.get_mut() += c,
                    Entry::Vacant(e) => {
                        e.insert(c);
                    }
                }
            }
        }
        let mut terms: Vec<(Monomial, Q)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Poly { terms }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn diff(&self, v: &Indet) -> Self {
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let (rest, e) = m.without(v);
            if e == 0 {
                continue;
            }
            terms.push((rest.mul(&Monomial::var(*v, e - 1)), c * q_int(e as i64)));
        }
        Self::from_terms(terms)
    }

    /// Coefficients with respect to `v`, indexed by degree.
    pub fn to_univariate(&self, v: &Indet) -> Vec<Poly> {
        let deg = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<(Monomial, Q)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let (rest, e) = m.without(v);
            buckets[e as usize].push((rest, c.clone()));
        }
        buckets.into_iter().map(Self::from_terms).collect()
    }

    pub fn from_univariate(v: &Indet, coeffs: &[Poly]) -> Self {
        let mut terms = Vec::new();
        for (e, c) in coeffs.iter().enumerate() {
            let vm = Monomial::var(*v, e as u32);
            for (m, q) in &c.terms {
                terms.push((m.mul(&vm), q.clone()));
            }
        }
        Self::from_terms(terms)
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let (ld, lc) = d.leading().expect("non-zero");
        let lc_inv = lc.recip();
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((lr, cr)) = rem.leading() {
            let qm = lr.div(ld)?;
            let qc = cr * &lc_inv;
            rem = rem.sub(&d.mul_monomial(&qm, &qc));
            quot.push((qm, qc));
        }
        Some(Self::from_terms(quot))
    }

    /// Renames variables. The map must be injective on the variables present.
    pub fn map_vars(&self, f: impl Fn(&Indet) -> Indet) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (Monomial::from_pairs(m.pairs().iter().map(|(v, e)| (f(v), *e))), c.clone()))
            .collect();
        Self::from_terms(terms)
    }

    /// Content-free monomial gcd of all terms.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        let Some(first) = it.next() else { return Monomial::one() };
        let mut g = first.0.clone();
        for (m, _) in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(m);
        }
        g
    }

    /// Divides by the leading coefficient. Zero stays zero.
    pub fn make_monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    pub fn is_negative_leading(&self) -> bool {
        self.leading().is_some_and(|t| t.1.is_negative())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::indet::MultiIndex;

    fn x() -> Poly {
        Poly::var(Indet::x(0))
    }
    fn u() -> Poly {
        Poly::var(Indet::u(0, MultiIndex::zeros(1)))
    }

    #[test]
    fn ring_basics() {
        let p = x().add(&Poly::int(1));
        let q = x().sub(&Poly::int(1));
        let pq = p.mul(&q);
        assert_eq!(pq, x().pow(2).sub(&Poly::int(1)));
        assert_eq!(pq.div_exact(&q), Some(p.clone()));
        assert_eq!(pq.div_exact(&u()), None);
        assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn grlex_leading_term() {
        // u > x in the variable order, degree dominates
        let p = u().add(&x().pow(2));
        assert_eq!(p.leading().unwrap().0, Monomial::var(Indet::x(0), 2));
        let q = u().mul(&x()).add(&x().pow(2));
        assert_eq!(q.leading().unwrap().0.exp_of(&Indet::u(0, MultiIndex::zeros(1))), 1);
    }

    #[test]
    fn derivative_and_univariate() {
        let p = x().pow(2).mul(&u());
        assert_eq!(p.diff(&Indet::x(0)), x().mul(&u()).scale(&q_int(2)));
        let coeffs = p.to_univariate(&Indet::x(0));
        assert_eq!(coeffs.len(), 3);
        assert_eq!(Poly::from_univariate(&Indet::x(0), &coeffs), p);
    }
}
