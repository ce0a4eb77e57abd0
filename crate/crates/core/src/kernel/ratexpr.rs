use std::collections::{BTreeSet, HashMap};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::gcd::gcd;
use super::indet::Indet;
use super::poly::{Monomial, Poly, Q};
use crate::error::{Error, Result};

/// Canonical rational function: `gcd(num, den) = 1` and `den` is monic in
/// the canonical monomial order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatExpr {
    num: Poly,
    den: Poly,
}

impl Default for RatExpr {
    fn default() -> Self {
        Self::zero()
    }
}

impl RatExpr {
    pub fn zero() -> Self {
        RatExpr { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn int(n: i64) -> Self {
        Self::from_poly(Poly::int(n))
    }

    pub fn constant(c: Q) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn var(v: Indet) -> Self {
        Self::from_poly(Poly::var(v))
    }

    pub fn from_poly(p: Poly) -> Self {
        RatExpr { num: p, den: Poly::one() }
    }

    /// Canonical representative of `num / den`.
    pub fn normalize(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        if let Some(c) = den.constant_value() {
            return Ok(Self::from_poly(num.scale(&c.recip())));
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let lc = den.leading_coeff();
        if lc.is_one() {
            Ok(RatExpr { num, den })
        } else {
            let inv = lc.recip();
            Ok(RatExpr { num: num.scale(&inv), den: den.scale(&inv) })
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn constant_value(&self) -> Option<Q> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    pub fn vars(&self) -> BTreeSet<Indet> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v
    }

    pub fn contains_var(&self, v: &Indet) -> bool {
        self.num.contains_var(v) || self.den.contains_var(v)
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatExpr { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Self> {
        Self::normalize(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        RatExpr { num: self.num.pow(e), den: self.den.pow(e) }
    }

    pub fn pow_i(&self, e: i32) -> Result<Self> {
        if e >= 0 {
            Ok(self.pow(e as u32))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs()))
        }
    }

    pub fn diff(&self, v: &Indet) -> Self {
        let dn = self.num.diff(v);
        if self.den.is_one() {
            return Self::from_poly(dn);
        }
        let dd = self.den.diff(v);
        if dd.is_zero() {
            return Self::normalize(dn, self.den.clone()).expect("non-zero den");
        }
        let num = dn.mul(&self.den).sub(&self.num.mul(&dd));
        Self::normalize(num, self.den.mul(&self.den)).expect("non-zero den")
    }

    /// Applies the derivation `Σ_v coeff(v) ∂/∂v` over the variables present.
    pub fn derivation(&self, coeff: impl Fn(&Indet) -> Option<RatExpr>) -> Result<Self> {
        let vars = self.vars();
        let mut cache: HashMap<Indet, Option<RatExpr>> = HashMap::new();
        for v in &vars {
            cache.insert(*v, coeff(v));
        }
        let apply = |p: &Poly| -> Frac {
            let mut acc = Frac::zero();
            for v in p.vars() {
                if let Some(Some(c)) = cache.get(&v) {
                    if c.is_zero() {
                        continue;
                    }
                    let dp = p.diff(&v);
                    acc.add_assign(&dp.mul(&c.num), &c.den);
                }
            }
            acc
        };
        let dn = apply(&self.num);
        if self.den.is_one() {
            return dn.finish();
        }
        let dd = apply(&self.den);
        // (n'/a · d − n · d'/b) / d²
        let num = dn.num.mul(&dd.den).mul(&self.den).sub(&self.num.mul(&dd.num).mul(&dn.den));
        let den = self.den.mul(&self.den).mul(&dn.den).mul(&dd.den);
        Self::normalize(num, den)
    }

    /// Simultaneous substitution of variables by expressions.
    pub fn substitute(&self, bindings: &HashMap<Indet, RatExpr>) -> Result<Self> {
        self.substitute_with(|v| bindings.get(v).cloned())
    }

    /// Simultaneous substitution; variables mapped to `None` are kept.
    pub fn substitute_with(&self, f: impl Fn(&Indet) -> Option<RatExpr>) -> Result<Self> {
        let vars = self.vars();
        let mut map: HashMap<Indet, RatExpr> = HashMap::new();
        for v in vars {
            if let Some(e) = f(&v) {
                map.insert(v, e);
            }
        }
        if map.is_empty() {
            return Ok(self.clone());
        }
        let n = subst_poly(&self.num, &map);
        if self.den.is_one() {
            return Self::normalize(n.0, n.1);
        }
        let d = subst_poly(&self.den, &map);
        Self::normalize(n.0.mul(&d.1), n.1.mul(&d.0))
    }

    /// Renames variables without arithmetic. `f` must be order-preserving
    /// and injective on the variables present for the result to stay
    /// canonical; the denominator is renormalized regardless.
    pub fn rename(&self, f: impl Fn(&Indet) -> Indet) -> Self {
        let num = self.num.map_vars(&f);
        let den = self.den.map_vars(&f);
        let lc = den.leading_coeff();
        if lc.is_one() {
            RatExpr { num, den }
        } else {
            let inv = lc.recip();
            RatExpr { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    /// Evaluates at a point given for every variable present.
    pub fn eval(&self, point: &impl Fn(&Indet) -> Q) -> Option<Q> {
        let d = eval_poly(&self.den, point);
        if d.is_zero() {
            return None;
        }
        Some(eval_poly(&self.num, point) / d)
    }
}

pub fn eval_poly(p: &Poly, point: &impl Fn(&Indet) -> Q) -> Q {
    let mut acc = Q::zero();
    let mut cache: HashMap<Indet, Q> = HashMap::new();
    for (m, c) in p.terms() {
        let mut t = c.clone();
        for (v, e) in m.pairs() {
            let base = cache.entry(*v).or_insert_with(|| point(v)).clone();
            t *= num_traits::pow(base, *e as usize);
        }
        acc += t;
    }
    acc
}

/// Substitutes into a polynomial, returning an unnormalized `(num, den)`
/// over a common denominator `Π b_v^{max e_v}`.
fn subst_poly(p: &Poly, map: &HashMap<Indet, RatExpr>) -> (Poly, Poly) {
    let mut maxe: HashMap<Indet, u32> = HashMap::new();
    for (m, _) in p.terms() {
        for (v, e) in m.pairs() {
            if let Some(r) = map.get(v) {
                if !r.den.is_one() {
                    let me = maxe.entry(*v).or_insert(0);
                    *me = (*me).max(*e);
                }
            }
        }
    }
    let mut den = Poly::one();
    for (v, e) in &maxe {
        den = den.mul(&map[v].den.pow(*e));
    }
    let mut pows: HashMap<(Indet, u32, bool), Poly> = HashMap::new();
    let mut getpow = |v: Indet, e: u32, of_den: bool| -> Poly {
        pows.entry((v, e, of_den))
            .or_insert_with(|| {
                let r = &map[&v];
                if of_den {
                    r.den.pow(e)
                } else {
                    r.num.pow(e)
                }
            })
            .clone()
    };
    let mut num = Poly::zero();
    let mut chunk: Vec<(Monomial, Q)> = Vec::new();
    for (m, c) in p.terms() {
        let mut kept = Vec::new();
        let mut factor: Option<Poly> = None;
        for (v, e) in m.pairs() {
            if map.contains_key(v) {
                let mut f = getpow(*v, *e, false);
                if let Some(me) = maxe.get(v) {
                    if *me > *e {
                        f = f.mul(&getpow(*v, me - e, true));
                    }
                }
                factor = Some(match factor {
                    None => f,
                    Some(g) => g.mul(&f),
                });
            } else {
                kept.push((*v, *e));
            }
        }
        // Variables whose binding has a denominator but are absent from this
        // term still need their full denominator power.
        let mut f = factor.unwrap_or_else(Poly::one);
        for (v, me) in &maxe {
            if m.exp_of(v) == 0 {
                f = f.mul(&getpow(*v, *me, true));
            }
        }
        let term = f.mul_monomial(&Monomial::from_pairs(kept), c);
        if term.len() == 1 {
            chunk.extend(term.terms().iter().cloned());
        } else {
            num = num.add(&term);
        }
    }
    num = num.add(&Poly::from_terms(chunk));
    (num, den)
}

/// Unnormalized fraction accumulator; reuses the denominator when equal.
#[derive(Clone, Debug)]
pub struct Frac {
    pub num: Poly,
    pub den: Poly,
}

impl Frac {
    pub fn zero() -> Self {
        Frac { num: Poly::zero(), den: Poly::one() }
    }

    pub fn add_assign(&mut self, num: &Poly, den: &Poly) {
        if num.is_zero() {
            return;
        }
        if *den == self.den {
            self.num = self.num.add(num);
        } else if den.is_one() {
            self.num = self.num.add(&num.mul(&self.den));
        } else if self.num.is_zero() {
            self.num = num.clone();
            self.den = den.clone();
        } else {
            self.num = self.num.mul(den).add(&num.mul(&self.den));
            self.den = self.den.mul(den);
        }
    }

    pub fn add_expr(&mut self, e: &RatExpr) {
        self.add_assign(&e.num, &e.den);
    }

    pub fn finish(self) -> Result<RatExpr> {
        RatExpr::normalize(self.num, self.den)
    }
}

impl Add for &RatExpr {
    type Output = RatExpr;
    fn add(self, rhs: &RatExpr) -> RatExpr {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatExpr::from_poly(self.num.add(&rhs.num));
        }
        if self.den == rhs.den {
            return RatExpr::normalize(self.num.add(&rhs.num), self.den.clone()).expect("non-zero den");
        }
        if rhs.den.is_one() {
            return RatExpr { num: self.num.add(&rhs.num.mul(&self.den)), den: self.den.clone() };
        }
        if self.den.is_one() {
            return RatExpr { num: rhs.num.add(&self.num.mul(&rhs.den)), den: rhs.den.clone() };
        }
        // Henrici: only common factors of the denominators can cancel.
        let g = gcd(&self.den, &rhs.den);
        if g.is_one() {
            let num = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
            return RatExpr::normalize_known_coprime(num, self.den.mul(&rhs.den));
        }
        let b1 = self.den.div_exact(&g).expect("gcd divides");
        let d1 = rhs.den.div_exact(&g).expect("gcd divides");
        let num = self.num.mul(&d1).add(&rhs.num.mul(&b1));
        let den = b1.mul(&rhs.den);
        RatExpr::normalize(num, den).expect("non-zero den")
    }
}

impl RatExpr {
    fn normalize_known_coprime(num: Poly, den: Poly) -> RatExpr {
        if num.is_zero() {
            return RatExpr::zero();
        }
        let lc = den.leading_coeff();
        if lc.is_one() {
            RatExpr { num, den }
        } else {
            let inv = lc.recip();
            RatExpr { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }
}

impl Sub for &RatExpr {
    type Output = RatExpr;
    fn sub(self, rhs: &RatExpr) -> RatExpr {
        self + &(-rhs)
    }
}

impl Neg for &RatExpr {
    type Output = RatExpr;
    fn neg(self) -> RatExpr {
        RatExpr { num: self.num.neg(), den: self.den.clone() }
    }
}

impl Mul for &RatExpr {
    type Output = RatExpr;
    fn mul(self, rhs: &RatExpr) -> RatExpr {
        if self.is_zero() || rhs.is_zero() {
            return RatExpr::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatExpr::from_poly(self.num.mul(&rhs.num));
        }
        // Cross-cancel: gcd(a, d) and gcd(c, b) for (a/b)(c/d).
        let g1 = if rhs.den.is_one() { Poly::one() } else { gcd(&self.num, &rhs.den) };
        let g2 = if self.den.is_one() { Poly::one() } else { gcd(&rhs.num, &self.den) };
        let a = exact(&self.num, &g1);
        let d = exact(&rhs.den, &g1);
        let c = exact(&rhs.num, &g2);
        let b = exact(&self.den, &g2);
        RatExpr::normalize_known_coprime(a.mul(&c), b.mul(&d))
    }
}

fn exact(p: &Poly, g: &Poly) -> Poly {
    if g.is_one() {
        p.clone()
    } else {
        p.div_exact(g).expect("gcd divides")
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr for RatExpr {
            type Output = RatExpr;
            fn $m(self, rhs: RatExpr) -> RatExpr {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RatExpr> for RatExpr {
            type Output = RatExpr;
            fn $m(self, rhs: &RatExpr) -> RatExpr {
                (&self).$m(rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for RatExpr {
    type Output = RatExpr;
    fn neg(self) -> RatExpr {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::indet::MultiIndex;
    use crate::kernel::poly::{q_frac, q_int};

    fn x() -> Poly {
        Poly::var(Indet::x(0))
    }
    fn u(k: u32) -> Poly {
        Poly::var(Indet::u(0, MultiIndex::from_slice(&[k])))
    }
    fn ux(k: u32) -> Indet {
        Indet::u(0, MultiIndex::from_slice(&[k]))
    }

    #[test]
    fn normalize_examples() {
        let e = RatExpr::normalize(x().pow(2).sub(&Poly::int(1)), x().sub(&Poly::int(1))).unwrap();
        assert_eq!(e, RatExpr::from_poly(x().add(&Poly::int(1))));
        let z = RatExpr::normalize(Poly::zero(), Poly::int(7)).unwrap();
        assert!(z.is_zero() && z.den().is_one());
        let h = RatExpr::normalize(u(1).mul(&u(2)).scale(&q_int(2)), u(1).scale(&q_int(4))).unwrap();
        assert_eq!(h, RatExpr::from_poly(u(2).scale(&q_frac(1, 2))));
        assert!(matches!(RatExpr::normalize(x(), Poly::zero()), Err(Error::ZeroDenominator)));
    }

    #[test]
    fn diff_examples() {
        let e = RatExpr::from_poly(x().pow(2).mul(&u(0)));
        assert_eq!(e.diff(&Indet::x(0)), RatExpr::from_poly(x().mul(&u(0)).scale(&q_int(2))));
        let f = RatExpr::normalize(u(2), u(1).pow(2)).unwrap();
        let expect = RatExpr::normalize(u(2).scale(&q_int(-2)), u(1).pow(3)).unwrap();
        assert_eq!(f.diff(&ux(1)), expect);
        assert!(f.diff(&Indet::x(0)).is_zero());
    }

    #[test]
    fn substitute_examples() {
        let e = RatExpr::from_poly(x().add(&u(0)));
        let mut b = HashMap::new();
        b.insert(Indet::x(0), RatExpr::zero());
        b.insert(ux(0), RatExpr::from_poly(u(0)));
        assert_eq!(e.substitute(&b).unwrap(), RatExpr::from_poly(u(0)));
        // u_1 maps to 1, so u_3 / u_1^3 is fixed by the oracle substitution
        let e = RatExpr::normalize(u(3), u(1).pow(3)).unwrap();
        let mut b = HashMap::new();
        for k in [1, 3] {
            b.insert(ux(k), RatExpr::normalize(u(k), u(1).pow(k)).unwrap());
        }
        assert_eq!(e.substitute(&b).unwrap(), e);
    }

    #[test]
    fn arithmetic_cancels() {
        let a = RatExpr::normalize(Poly::one(), x().sub(&Poly::int(1))).unwrap();
        let b = RatExpr::normalize(Poly::one(), x().add(&Poly::int(1))).unwrap();
        let s = &a - &b;
        assert_eq!(s, RatExpr::normalize(Poly::int(2), x().pow(2).sub(&Poly::int(1))).unwrap());
        let p = &(&a * &RatExpr::from_poly(x().sub(&Poly::int(1)))) - &RatExpr::one();
        assert!(p.is_zero());
    }
}
