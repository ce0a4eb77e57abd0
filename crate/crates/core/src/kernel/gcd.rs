//! Multivariate polynomial gcd over Q by recursive subresultant PRS.

use std::collections::{BTreeSet, HashMap};

use super::indet::Indet;
use super::poly::{Monomial, Poly, Q};
use num_traits::One;

/// Monic gcd (leading coefficient 1 in the canonical order); `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.make_monic();
    }
    if b.is_zero() {
        return a.make_monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a.len() == 1 || b.len() == 1 {
        let g = a.monomial_content().gcd(&b.monomial_content());
        return Poly::monomial(g, Q::one());
    }
    let (am, bm) = (a.make_monic(), b.make_monic());
    if am == bm {
        return am;
    }
    let (ma, mb) = (a.monomial_content(), b.monomial_content());
    let gm = ma.gcd(&mb);
    let a1 = strip(&am, &ma);
    let b1 = strip(&bm, &mb);
    let g = gcd_stripped(&a1, &b1);
    g.mul_monomial(&gm, &Q::one()).make_monic()
}

fn strip(p: &Poly, m: &Monomial) -> Poly {
    if m.is_one() {
        return p.clone();
    }
    p.div_exact(&Poly::monomial(m.clone(), Q::one())).expect("monomial content divides")
}

fn gcd_stripped(a: &Poly, b: &Poly) -> Poly {
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a.len() == 1 || b.len() == 1 {
        return gcd(a, b);
    }
    let va = a.vars();
    let vb = b.vars();
    let common: BTreeSet<&Indet> = va.intersection(&vb).collect();
    if common.is_empty() {
        return Poly::one();
    }
    // Any common divisor lives in the shared variables, so it divides every
    // coefficient of an operand taken over its private variables.
    if common.len() < va.len() || common.len() < vb.len() {
        let mut parts = split_outside(a, &common);
        parts.extend(split_outside(b, &common));
        parts.sort_by_key(|p| p.len());
        let mut g = Poly::zero();
        for p in &parts {
            g = gcd(&g, p);
            if g.is_constant() {
                return Poly::one();
            }
        }
        return g;
    }
    // A variable occurring in only one operand cannot divide the gcd; choose
    // the common variable of least combined degree as the main variable.
    let x = **common
        .iter()
        .min_by_key(|v| (a.degree_in(v) + b.degree_in(v), std::cmp::Reverse(***v)))
        .expect("non-empty");
    let ua = a.to_univariate(&x);
    let ub = b.to_univariate(&x);
    // Only gcd(cont a, cont b) is needed, so fold the smaller content through
    // the coefficients of the other operand instead of computing both.
    let (small, large) = if a.len() <= b.len() { (&ua, &ub) } else { (&ub, &ua) };
    let cs = content(small);
    let c = fold_content(cs.clone(), large);
    let ps = div_coeffs(small, &cs);
    // The primitive part of the last subresultant does not depend on the
    // content of the other operand.
    let g = subresultant(ps, large.clone());
    if g.len() <= 1 {
        return c;
    }
    let cg = content(&g);
    let g = div_coeffs(&g, &cg);
    Poly::from_univariate(&x, &g).mul(&c)
}

/// Coefficients of `p` viewed as a polynomial in the variables outside `keep`.
fn split_outside(p: &Poly, keep: &BTreeSet<&Indet>) -> Vec<Poly> {
    let mut groups: HashMap<Monomial, Vec<(Monomial, Q)>> = HashMap::new();
    for (m, c) in p.terms() {
        let (inside, outside): (Vec<_>, Vec<_>) = m.pairs().iter().partition(|(v, _)| keep.contains(v));
        groups
            .entry(Monomial::from_pairs(outside))
            .or_default()
            .push((Monomial::from_pairs(inside), c.clone()));
    }
    groups.into_values().map(Poly::from_terms).collect()
}

fn fold_content(mut g: Poly, u: &[Poly]) -> Poly {
    let mut nz: Vec<&Poly> = u.iter().filter(|c| !c.is_zero()).collect();
    nz.sort_by_key(|c| c.len());
    for c in nz {
        if !g.is_zero() && g.is_constant() {
            return Poly::one();
        }
        g = gcd(&g, c);
    }
    if !g.is_zero() && g.is_constant() {
        Poly::one()
    } else {
        g
    }
}

/// gcd of the coefficients of a univariate representation.
fn content(u: &[Poly]) -> Poly {
    fold_content(Poly::zero(), u)
}

fn div_coeffs(u: &[Poly], c: &Poly) -> Vec<Poly> {
    if c.is_one() {
        return u.to_vec();
    }
    u.iter().map(|p| p.div_exact(c).expect("content divides coefficient")).collect()
}

fn deg(u: &[Poly]) -> usize {
    u.len() - 1
}

fn trim(u: &mut Vec<Poly>) {
    while u.len() > 1 && u.last().is_some_and(|c| c.is_zero()) {
        u.pop();
    }
}

fn is_zero_u(u: &[Poly]) -> bool {
    u.len() == 1 && u[0].is_zero()
}

/// Pseudo-remainder `lc(b)^(deg a − deg b + 1) · a mod b`.
fn prem(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let db = deg(b);
    let lcb = b[db].clone();
    let mut r = a.to_vec();
    let mut e = deg(a) as i64 - db as i64 + 1;
    while !is_zero_u(&r) && deg(&r) >= db {
        let dr = deg(&r);
        let lr = r[dr].clone();
        let shift = dr - db;
        for (k, rk) in r.iter_mut().enumerate() {
            let mut v = rk.mul(&lcb);
            if k >= shift {
                v = v.sub(&b[k - shift].mul(&lr));
            }
            *rk = v;
        }
        r.pop();
        if r.is_empty() {
            r.push(Poly::zero());
        }
        trim(&mut r);
        e -= 1;
    }
    if e > 0 && !is_zero_u(&r) {
        let f = lcb.pow(e as u32);
        for c in r.iter_mut() {
            *c = c.mul(&f);
        }
    }
    r
}

fn subresultant(mut a: Vec<Poly>, mut b: Vec<Poly>) -> Vec<Poly> {
    if deg(&a) < deg(&b) {
        std::mem::swap(&mut a, &mut b);
    }
    let mut g = Poly::one();
    let mut h = Poly::one();
    loop {
        let delta = (deg(&a) - deg(&b)) as u32;
        let r = prem(&a, &b);
        if is_zero_u(&r) {
            return b;
        }
        if deg(&r) == 0 {
            return vec![Poly::one()];
        }
        let divisor = g.mul(&h.pow(delta));
        a = b;
        b = div_coeffs(&r, &divisor);
        g = a[deg(&a)].clone();
        h = if delta == 0 {
            h
        } else {
            g.pow(delta).div_exact(&h.pow(delta - 1)).expect("subresultant division is exact")
        };
    }
}
